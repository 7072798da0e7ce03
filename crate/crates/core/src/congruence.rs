//! Partitions of the carrier, congruences and quotients.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::algebra::{Element, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::translation::{translation_monoid, TranslationMonoid, UnaryMap};

/// Largest carrier for which the whole congruence lattice is built.
pub const MAX_LATTICE_CARRIER: usize = 7;

/// A partition of `{0, .., n-1}`, stored as the least element of each
/// element's block.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    labels: Vec<Element>,
}

impl Partition {
    /// Canonicalizes an arbitrary labelling: elements with equal labels
    /// share a block.
    pub fn from_labels<T: Eq + std::hash::Hash>(labels: &[T]) -> Self {
        let mut first: HashMap<&T, Element> = HashMap::new();
        let labels = labels
            .iter()
            .enumerate()
            .map(|(i, l)| *first.entry(l).or_insert(i))
            .collect();
        Self { labels }
    }

    pub fn from_blocks(carrier: usize, blocks: &[Vec<Element>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; carrier];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &e in block {
                if e >= carrier {
                    return Err(Error::ElementOutOfRange {
                        element: e,
                        carrier,
                    });
                }
                if labels[e] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("element {e} occurs twice")));
                }
                labels[e] = b;
            }
        }
        if let Some(e) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidPartition(format!(
                "element {e} is not covered"
            )));
        }
        Ok(Self::from_labels(&labels))
    }

    pub fn discrete(carrier: usize) -> Self {
        Self {
            labels: (0..carrier).collect(),
        }
    }

    pub fn total(carrier: usize) -> Self {
        Self {
            labels: vec![0; carrier],
        }
    }

    pub fn carrier(&self) -> usize {
        self.labels.len()
    }

    /// Least member of the block of `e`.
    pub fn rep(&self, e: Element) -> Element {
        self.labels[e]
    }

    pub fn labels(&self) -> &[Element] {
        &self.labels
    }

    pub fn related(&self, a: Element, b: Element) -> bool {
        self.labels[a] == self.labels[b]
    }

    pub fn num_blocks(&self) -> usize {
        self.labels
            .iter()
            .enumerate()
            .filter(|&(i, &l)| i == l)
            .count()
    }

    /// Blocks ordered by their least member, members ascending.
    pub fn blocks(&self) -> Vec<Vec<Element>> {
        let mut out: Vec<Vec<Element>> = Vec::new();
        let mut slot = vec![usize::MAX; self.carrier()];
        for (i, &l) in self.labels.iter().enumerate() {
            if slot[l] == usize::MAX {
                slot[l] = out.len();
                out.push(Vec::new());
            }
            out[slot[l]].push(i);
        }
        out
    }

    /// Index of `e`'s block in [`Partition::blocks`].
    pub fn block_index(&self) -> Vec<usize> {
        let mut slot = vec![usize::MAX; self.carrier()];
        let mut next = 0;
        self.labels
            .iter()
            .map(|&l| {
                if slot[l] == usize::MAX {
                    slot[l] = next;
                    next += 1;
                }
                slot[l]
            })
            .collect()
    }

    pub fn is_discrete(&self) -> bool {
        self.num_blocks() == self.carrier()
    }

    pub fn is_total(&self) -> bool {
        self.num_blocks() <= 1
    }

    /// Every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.carrier() == other.carrier()
            && (0..self.carrier()).all(|i| other.related(i, self.labels[i]))
    }

    pub fn meet(&self, other: &Partition) -> Partition {
        let pairs: Vec<(Element, Element)> = self
            .labels
            .iter()
            .copied()
            .zip(other.labels.iter().copied())
            .collect();
        Partition::from_labels(&pairs)
    }

    pub fn join(&self, other: &Partition) -> Partition {
        let mut uf = UnionFind::new(self.carrier());
        for i in 0..self.carrier() {
            uf.union(i, self.labels[i]);
            uf.union(i, other.labels[i]);
        }
        uf.partition()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| {
                b.iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        write!(f, "{{{}}}", blocks.join(" | "))
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks().serialize(s)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // keep the smaller root so roots are block minima
        if ra < rb {
            self.parent[rb] = ra;
        } else {
            self.parent[ra] = rb;
        }
        true
    }

    fn partition(&mut self) -> Partition {
        let labels: Vec<usize> = (0..self.parent.len()).map(|i| self.find(i)).collect();
        Partition::from_labels(&labels)
    }
}

/// Checks compatibility with every basic operation by comparing all pairs of
/// componentwise related argument tuples. Exponential in the arity; meant
/// as an independent check.
pub fn respects_operations(a: &FiniteAlgebra, p: &Partition) -> bool {
    if p.carrier() != a.carrier() {
        return false;
    }
    let blocks = p.blocks();
    let index = p.block_index();
    for sym in a.signature().ids() {
        let arity = a.signature().arity(sym);
        let bad = crate::algebra::find_tuple(a.carrier(), arity, |t| {
            let pools: Vec<&Vec<Element>> = t.iter().map(|&e| &blocks[index[e]]).collect();
            let v = p.rep(a.value(sym, t));
            let mut u = vec![0; arity];
            let mut idx = vec![0; arity];
            loop {
                for k in 0..arity {
                    u[k] = pools[k][idx[k]];
                }
                if p.rep(a.value(sym, &u)) != v {
                    return Some(());
                }
                let mut pos = arity;
                loop {
                    if pos == 0 {
                        return None;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < pools[pos].len() {
                        break;
                    }
                    idx[pos] = 0;
                }
            }
        });
        if bad.is_some() {
            return false;
        }
    }
    true
}

/// Congruence computations over one algebra, sharing its translation monoid.
pub struct CongruenceAnalyzer<'a> {
    algebra: &'a FiniteAlgebra,
    monoid: TranslationMonoid,
}

impl<'a> CongruenceAnalyzer<'a> {
    pub fn new(algebra: &'a FiniteAlgebra) -> Result<Self> {
        Ok(Self {
            algebra,
            monoid: translation_monoid(algebra)?,
        })
    }

    pub fn with_monoid(algebra: &'a FiniteAlgebra, monoid: TranslationMonoid) -> Self {
        Self { algebra, monoid }
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        self.algebra
    }

    pub fn monoid(&self) -> &TranslationMonoid {
        &self.monoid
    }

    fn check_partition(&self, p: &Partition) -> Result<()> {
        if p.carrier() != self.algebra.carrier() {
            return Err(Error::InvalidPartition(format!(
                "partition of {} elements for a carrier of {}",
                p.carrier(),
                self.algebra.carrier()
            )));
        }
        Ok(())
    }

    /// An equivalence is a congruence iff every translation maps related
    /// elements to related elements.
    pub fn is_congruence(&self, p: &Partition) -> Result<bool> {
        self.check_partition(p)?;
        Ok(self.invariant_under(p, self.monoid.elements()))
    }

    fn invariant_under(&self, p: &Partition, maps: &[UnaryMap]) -> bool {
        maps.iter()
            .all(|f| (0..p.carrier()).all(|e| p.related(f.at(e), f.at(p.rep(e)))))
    }

    /// Least congruence relating `a` and `b`.
    pub fn principal(&self, a: Element, b: Element) -> Result<Partition> {
        self.algebra.check_element(a)?;
        self.algebra.check_element(b)?;
        let mut uf = UnionFind::new(self.algebra.carrier());
        let mut work = vec![(a, b)];
        uf.union(a, b);
        while let Some((u, v)) = work.pop() {
            for g in self.monoid.generators() {
                let (gu, gv) = (g.at(u), g.at(v));
                if uf.union(gu, gv) {
                    work.push((gu, gv));
                }
            }
        }
        Ok(uf.partition())
    }

    /// Largest congruence contained in `p`: `a ~ b` iff `f(a) p f(b)` for
    /// every translation-monoid element `f`.
    pub fn largest_below(&self, p: &Partition) -> Result<Partition> {
        self.check_partition(p)?;
        let keys: Vec<Vec<Element>> = self
            .algebra
            .elements()
            .map(|e| {
                self.monoid
                    .elements()
                    .iter()
                    .map(|f| p.rep(f.at(e)))
                    .collect()
            })
            .collect();
        Ok(Partition::from_labels(&keys))
    }

    /// All congruences, finest first (by block count descending, then
    /// labels).
    pub fn lattice(&self) -> Result<Vec<Partition>> {
        let n = self.algebra.carrier();
        if n > MAX_LATTICE_CARRIER {
            return Err(Error::LimitExceeded(format!(
                "congruence lattice needs carrier <= {MAX_LATTICE_CARRIER}, got {n}"
            )));
        }
        let mut found: BTreeSet<Partition> = BTreeSet::new();
        found.insert(Partition::discrete(n));
        for a in 0..n {
            for b in a + 1..n {
                found.insert(self.principal(a, b)?);
            }
        }
        let principals: Vec<Partition> = found.iter().cloned().collect();
        let mut frontier: Vec<Partition> = principals.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for p in &frontier {
                for q in &principals {
                    let j = p.join(q);
                    if found.insert(j.clone()) {
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        let mut out: Vec<Partition> = found.into_iter().collect();
        out.sort_by(|p, q| q.num_blocks().cmp(&p.num_blocks()).then_with(|| p.cmp(q)));
        Ok(out)
    }

    /// At least two elements and no congruences besides the trivial two.
    pub fn is_simple(&self) -> Result<bool> {
        let n = self.algebra.carrier();
        if n < 2 {
            return Ok(false);
        }
        for a in 0..n {
            for b in a + 1..n {
                if !self.principal(a, b)?.is_total() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The quotient algebra, with blocks numbered by their least member.
    pub fn quotient(&self, p: &Partition) -> Result<FiniteAlgebra> {
        if !self.is_congruence(p)? {
            return Err(Error::NotACongruence);
        }
        quotient_unchecked(self.algebra, p)
    }
}

fn quotient_unchecked(a: &FiniteAlgebra, p: &Partition) -> Result<FiniteAlgebra> {
    let blocks = p.blocks();
    let index = p.block_index();
    let k = blocks.len();
    let reps: Vec<Element> = blocks.iter().map(|b| b[0]).collect();
    let tables = a
        .signature()
        .ids()
        .map(|sym| {
            let arity = a.signature().arity(sym);
            let mut table = Vec::with_capacity(crate::algebra::table_len(k, arity));
            crate::algebra::for_each_tuple(k, arity, |t| {
                let args: Vec<Element> = t.iter().map(|&b| reps[b]).collect();
                table.push(index[a.value(sym, &args)]);
            });
            table
        })
        .collect();
    let name = a.name().map(|n| format!("{n}/~"));
    FiniteAlgebra::new(name, k, a.signature().clone(), tables)
}

pub fn is_congruence(a: &FiniteAlgebra, p: &Partition) -> Result<bool> {
    CongruenceAnalyzer::new(a)?.is_congruence(p)
}

pub fn principal_congruence(a: &FiniteAlgebra, x: Element, y: Element) -> Result<Partition> {
    CongruenceAnalyzer::new(a)?.principal(x, y)
}

pub fn largest_congruence_below(a: &FiniteAlgebra, p: &Partition) -> Result<Partition> {
    CongruenceAnalyzer::new(a)?.largest_below(p)
}

pub fn congruence_lattice(a: &FiniteAlgebra) -> Result<Vec<Partition>> {
    CongruenceAnalyzer::new(a)?.lattice()
}

pub fn quotient(a: &FiniteAlgebra, p: &Partition) -> Result<FiniteAlgebra> {
    CongruenceAnalyzer::new(a)?.quotient(p)
}

pub fn is_simple(a: &FiniteAlgebra) -> Result<bool> {
    CongruenceAnalyzer::new(a)?.is_simple()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{builtin_algebra, random_algebra};

    /// Every set partition of `{0..n}` via restricted growth strings.
    fn all_partitions(n: usize) -> Vec<Partition> {
        fn go(i: usize, n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Partition>) {
            if i == n {
                out.push(Partition::from_labels(cur));
                return;
            }
            for l in 0..=max + 1 {
                cur.push(l);
                go(i + 1, n, cur, max.max(l), out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            return vec![Partition::discrete(0)];
        }
        let mut cur = vec![0];
        go(1, n, &mut cur, 0, &mut out);
        out
    }

    fn lattice_oracle(a: &FiniteAlgebra) -> BTreeSet<Partition> {
        all_partitions(a.carrier())
            .into_iter()
            .filter(|p| respects_operations(a, p))
            .collect()
    }

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (1..=6).map(|n| all_partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn partition_basics() {
        let p = Partition::from_blocks(6, &[vec![3, 0], vec![1, 4], vec![5, 2]]).unwrap();
        assert_eq!(p.labels(), &[0, 1, 2, 0, 1, 2]);
        assert_eq!(p.blocks(), vec![vec![0, 3], vec![1, 4], vec![2, 5]]);
        assert_eq!(p.to_string(), "{0 3 | 1 4 | 2 5}");
        assert!(Partition::from_blocks(3, &[vec![0, 1]]).is_err());
        assert!(Partition::from_blocks(3, &[vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::from_blocks(2, &[vec![0, 1, 2]]).is_err());
        let q = Partition::from_labels(&['a', 'b', 'a', 'b', 'a', 'b']);
        assert!(p.meet(&q).is_discrete());
        assert!(p.join(&q).is_total());
        assert!(!Partition::discrete(4).refines(&p));
        assert!(Partition::discrete(6).refines(&p));
        assert!(p.refines(&Partition::total(6)));
        assert!(!Partition::total(6).refines(&p));
    }

    #[test]
    fn join_and_meet_match_definitions() {
        let parts = all_partitions(4);
        for p in &parts {
            for q in &parts {
                let m = p.meet(q);
                for i in 0..4 {
                    for j in 0..4 {
                        assert_eq!(m.related(i, j), p.related(i, j) && q.related(i, j));
                    }
                }
                let j = p.join(q);
                assert!(p.refines(&j) && q.refines(&j));
                // least upper bound among all partitions
                for r in &parts {
                    if p.refines(r) && q.refines(r) {
                        assert!(j.refines(r));
                    }
                }
            }
        }
    }

    #[test]
    fn z6_congruences() {
        let z6 = builtin_algebra("zn_ring", &[6]).unwrap();
        let an = CongruenceAnalyzer::new(&z6).unwrap();
        let mod3 = Partition::from_labels(&[0, 1, 2, 0, 1, 2]);
        let mod2 = Partition::from_labels(&[0, 1, 0, 1, 0, 1]);
        assert!(an.is_congruence(&mod3).unwrap());
        assert!(an.is_congruence(&mod2).unwrap());
        assert!(!an
            .is_congruence(&Partition::from_labels(&[0, 0, 1, 1, 2, 2]))
            .unwrap());
        assert_eq!(an.principal(0, 3).unwrap(), mod3);
        assert_eq!(an.principal(1, 3).unwrap(), mod2);
        assert!(an.principal(0, 1).unwrap().is_total());
        assert_eq!(an.principal(4, 4).unwrap(), Partition::discrete(6));
        let lattice = an.lattice().unwrap();
        assert_eq!(lattice.len(), 4);
        assert_eq!(
            lattice.into_iter().collect::<BTreeSet<_>>(),
            lattice_oracle(&z6)
        );
        let q = an.quotient(&mod3).unwrap();
        assert_eq!(q.carrier(), 3);
        assert_eq!(
            q.table(z6.signature().resolve("*").unwrap()),
            &[0, 0, 0, 0, 1, 2, 0, 2, 1]
        );
        assert_eq!(
            an.quotient(&Partition::from_labels(&[0, 0, 1, 1, 2, 2])),
            Err(Error::NotACongruence)
        );
    }

    #[test]
    fn largest_below_examples() {
        let z6 = builtin_algebra("zn_ring", &[6]).unwrap();
        let an = CongruenceAnalyzer::new(&z6).unwrap();
        let p = Partition::from_labels(&[0, 0, 0, 1, 1, 1]);
        assert_eq!(an.largest_below(&p).unwrap(), Partition::discrete(6));
        let q = Partition::from_labels(&[0, 1, 0, 1, 0, 2]);
        // {0,2,4} survives, 1 ~ 3 does not since 3 ~ 5 under mod 2
        assert_eq!(an.largest_below(&q).unwrap(), Partition::discrete(6));
        let r = Partition::from_labels(&[0, 1, 0, 1, 0, 1]);
        assert_eq!(an.largest_below(&r).unwrap(), r);
    }

    #[test]
    fn simplicity() {
        for n in [2u64, 3, 5, 7] {
            assert!(is_simple(&builtin_algebra("zn_group", &[n]).unwrap()).unwrap());
        }
        for n in [4u64, 6] {
            assert!(!is_simple(&builtin_algebra("zn_group", &[n]).unwrap()).unwrap());
        }
        assert!(!is_simple(&builtin_algebra("zn_group", &[1]).unwrap()).unwrap());
        assert!(is_simple(&builtin_algebra("boolean_algebra", &[1]).unwrap()).unwrap());
        assert!(!is_simple(&builtin_algebra("boolean_algebra", &[2]).unwrap()).unwrap());
    }

    #[test]
    fn random_algebras_match_the_oracles() {
        for seed in 0..40u64 {
            let n = 2 + (seed as usize % 4);
            let arities: &[usize] = if seed % 3 == 0 {
                &[1, 2]
            } else if seed % 3 == 1 {
                &[2]
            } else {
                &[3, 0]
            };
            let a = random_algebra(seed, n, arities).unwrap();
            let an = CongruenceAnalyzer::new(&a).unwrap();
            let oracle = lattice_oracle(&a);
            let lattice: BTreeSet<Partition> = an.lattice().unwrap().into_iter().collect();
            assert_eq!(lattice, oracle, "seed {seed}");
            for p in all_partitions(n) {
                assert_eq!(an.is_congruence(&p).unwrap(), oracle.contains(&p));
                let below = an.largest_below(&p).unwrap();
                assert!(below.refines(&p));
                assert!(oracle.contains(&below));
                for c in &oracle {
                    if c.refines(&p) {
                        assert!(c.refines(&below));
                    }
                }
            }
            assert_eq!(an.is_simple().unwrap(), oracle.len() == 2);
        }
    }

    #[test]
    fn lattice_size_limit() {
        let a = builtin_algebra("zn_group", &[8]).unwrap();
        assert!(matches!(
            congruence_lattice(&a),
            Err(Error::LimitExceeded(_))
        ));
        assert!(!is_simple(&a).unwrap());
    }
}
