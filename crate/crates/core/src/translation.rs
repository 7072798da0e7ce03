//! Induced maps of affine terms, translations, and the translation monoid.

use std::collections::{HashMap, HashSet};
use std::hash::{Hash, Hasher};
use std::rc::Rc;

use serde::Serialize;

use crate::algebra::{Element, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::skeleton::{
    enumerate_linear, parameter_fillings, unskeletonize, ClosedSubtrees, Params, Skeleton,
    SkeletonShape, DEFAULT_SKELETON_BUDGET,
};
use crate::term::{concat, AffineTerm, Term};

/// Default cap on the size of a translation monoid closure.
pub const DEFAULT_MONOID_CAP: usize = 1_000_000;

/// A self-map of the carrier, stored as its image sequence.
///
/// Equality, ordering and hashing look only at the image; the optional
/// provenance term is carried along for reporting.
#[derive(Debug, Clone, Serialize)]
pub struct UnaryMap {
    image: Vec<Element>,
    #[serde(skip)]
    provenance: Option<Term>,
}

impl PartialEq for UnaryMap {
    fn eq(&self, other: &Self) -> bool {
        self.image == other.image
    }
}

impl Eq for UnaryMap {}

impl Hash for UnaryMap {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.image.hash(state)
    }
}

impl PartialOrd for UnaryMap {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for UnaryMap {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.image.cmp(&other.image)
    }
}

impl UnaryMap {
    pub fn new(image: Vec<Element>) -> Self {
        Self {
            image,
            provenance: None,
        }
    }

    pub fn identity(carrier: usize) -> Self {
        Self::new((0..carrier).collect())
    }

    pub fn constant(carrier: usize, value: Element) -> Self {
        Self::new(vec![value; carrier])
    }

    pub fn with_provenance(mut self, t: Term) -> Self {
        self.provenance = Some(t);
        self
    }

    pub fn provenance(&self) -> Option<&Term> {
        self.provenance.as_ref()
    }

    pub fn image(&self) -> &[Element] {
        &self.image
    }

    pub fn into_image(self) -> Vec<Element> {
        self.image
    }

    #[inline]
    pub fn at(&self, z: Element) -> Element {
        self.image[z]
    }

    /// `self ∘ inner`, i.e. `z ↦ self(inner(z))`.
    pub fn compose(&self, inner: &UnaryMap) -> UnaryMap {
        UnaryMap::new(inner.image.iter().map(|&z| self.image[z]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v)
    }
}

fn eval(a: &FiniteAlgebra, t: &Term, z: Element) -> Element {
    match t {
        Term::Var => z,
        Term::Const(c) => *c,
        Term::Apply(s, ch) => {
            let args: Vec<Element> = ch.iter().map(|c| eval(a, c, z)).collect();
            a.value(*s, &args)
        }
    }
}

/// Value of `t` with `x := z`. Defined for every term, linear or not.
pub fn eval_affine(a: &FiniteAlgebra, t: &Term, z: Element) -> Result<Element> {
    t.validate(a.signature(), a.carrier())?;
    a.check_element(z)?;
    Ok(eval(a, t, z))
}

/// The map `z ↦ t[x := z]`, with `t` as provenance.
pub fn induced_map(a: &FiniteAlgebra, t: &Term) -> Result<UnaryMap> {
    t.validate(a.signature(), a.carrier())?;
    Ok(induced_map_unchecked(a, t))
}

pub(crate) fn induced_map_unchecked(a: &FiniteAlgebra, t: &Term) -> UnaryMap {
    UnaryMap::new(a.elements().map(|z| eval(a, t, z)).collect()).with_provenance(t.clone())
}

fn eval_params(a: &FiniteAlgebra, sk: &Skeleton, p: &Params, z: Element) -> Result<Element> {
    let mismatch = || Error::ShapeMismatch(format!("parameters do not fit `{sk}`"));
    match (sk, p) {
        (Skeleton::Var, Params::Var) => Ok(z),
        (Skeleton::Star, Params::Element(e)) => {
            a.check_element(*e)?;
            Ok(*e)
        }
        (Skeleton::Zero, Params::Nullary(s))
            if s.0 < a.signature().len() && a.signature().arity(*s) == 0 =>
        {
            Ok(a.value(*s, &[]))
        }
        (Skeleton::Node(sks), Params::Node(s, ps))
            if s.0 < a.signature().len()
                && a.signature().arity(*s) == sks.len()
                && ps.len() == sks.len() =>
        {
            let args = sks
                .iter()
                .zip(ps)
                .map(|(k, q)| eval_params(a, k, q, z))
                .collect::<Result<Vec<_>>>()?;
            Ok(a.value(*s, &args))
        }
        _ => Err(mismatch()),
    }
}

/// Evaluates a skeleton under a parameter tuple, recursing on the pair
/// directly rather than through the reassembled term.
pub fn eval_skeleton(a: &FiniteAlgebra, sk: &Skeleton, p: &Params) -> Result<UnaryMap> {
    let image = a
        .elements()
        .map(|z| eval_params(a, sk, p, z))
        .collect::<Result<Vec<_>>>()?;
    let term = unskeletonize(sk, p, a.signature())?;
    Ok(UnaryMap::new(image).with_provenance(term))
}

/// The distinct translations `z ↦ f(a_1, .., z, .., a_n)` in generation
/// order: symbols in signature order, then slot, then constants
/// lexicographically. Each carries a height-1 witness term.
pub fn translations(a: &FiniteAlgebra) -> Vec<UnaryMap> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (sym, s) in a.signature().iter() {
        if s.arity == 0 {
            continue;
        }
        for slot in 0..s.arity {
            crate::algebra::for_each_tuple(a.carrier(), s.arity - 1, |consts| {
                let mut args = consts.to_vec();
                args.insert(slot, 0);
                let image: Vec<Element> = a
                    .elements()
                    .map(|z| {
                        args[slot] = z;
                        a.value(sym, &args)
                    })
                    .collect();
                if seen.insert(image.clone()) {
                    let mut children: Vec<Term> = consts.iter().map(|&c| Term::Const(c)).collect();
                    children.insert(slot, Term::Var);
                    out.push(UnaryMap::new(image).with_provenance(Term::Apply(sym, children)));
                }
            });
        }
    }
    out
}

/// The monoid generated by the translations, with one proper witness term
/// per element.
///
/// Elements are listed in breadth-first discovery order starting from the
/// identity (witness `x`). An element found by extending an element of
/// depth `d` with a generator has depth `d + 1`, and its witness, the
/// generator's witness concatenated with the element's, has height `d + 1`.
#[derive(Debug, Clone)]
pub struct TranslationMonoid {
    carrier: usize,
    elements: Vec<UnaryMap>,
    depths: Vec<usize>,
    index: HashMap<Vec<Element>, usize>,
    generators: Vec<UnaryMap>,
}

impl TranslationMonoid {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn elements(&self) -> &[UnaryMap] {
        &self.elements
    }

    pub fn generators(&self) -> &[UnaryMap] {
        &self.generators
    }

    pub fn position(&self, image: &[Element]) -> Option<usize> {
        self.index.get(image).copied()
    }

    pub fn contains(&self, image: &[Element]) -> bool {
        self.index.contains_key(image)
    }

    pub fn witness(&self, i: usize) -> &Term {
        self.elements[i]
            .provenance()
            .expect("monoid elements carry witnesses")
    }

    pub fn depth(&self, i: usize) -> usize {
        self.depths[i]
    }

    pub fn max_depth(&self) -> usize {
        self.depths.iter().copied().max().unwrap_or(0)
    }

    pub fn image_set(&self) -> HashSet<Vec<Element>> {
        self.index.keys().cloned().collect()
    }
}

pub fn translation_monoid(a: &FiniteAlgebra) -> Result<TranslationMonoid> {
    translation_monoid_with_cap(a, DEFAULT_MONOID_CAP)
}

pub fn translation_monoid_with_cap(a: &FiniteAlgebra, cap: usize) -> Result<TranslationMonoid> {
    let generators = translations(a);
    let gen_terms: Vec<AffineTerm> = generators
        .iter()
        .map(|g| {
            AffineTerm::new(g.provenance().unwrap().clone())
                .expect("translation witnesses are linear")
        })
        .collect();
    let id = UnaryMap::identity(a.carrier()).with_provenance(Term::Var);
    let mut index = HashMap::new();
    index.insert(id.image().to_vec(), 0);
    let mut elements = vec![id];
    let mut depths = vec![0];
    let mut next = 0;
    while next < elements.len() {
        let current_term = AffineTerm::new(elements[next].provenance().unwrap().clone())
            .expect("witnesses are linear");
        for (g, g_term) in generators.iter().zip(&gen_terms) {
            let candidate = g.compose(&elements[next]);
            if index.contains_key(candidate.image()) {
                continue;
            }
            if elements.len() >= cap {
                return Err(Error::BudgetExceeded {
                    what: "translation monoid closure",
                    needed: elements.len() as u128 + 1,
                    budget: cap as u128,
                });
            }
            let witness = concat(g_term, &current_term).into_term();
            index.insert(candidate.image().to_vec(), elements.len());
            elements.push(candidate.with_provenance(witness));
            depths.push(depths[next] + 1);
        }
        next += 1;
    }
    Ok(TranslationMonoid {
        carrier: a.carrier(),
        elements,
        depths,
        index,
        generators,
    })
}

/// How parameter tuples are visited for each skeleton.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamStrategy {
    /// Evaluate every tuple of the parameter set one by one.
    Literal,
    /// Build each skeleton's set of maps bottom-up from its children's value
    /// and map sets. Produces the same set and the same first witnesses as
    /// `Literal`.
    Compositional,
}

#[derive(Debug, Clone)]
pub struct BruteForceOptions {
    pub max_height: usize,
    pub max_arity: usize,
    pub closed: ClosedSubtrees,
    pub strategy: ParamStrategy,
    pub skeleton_budget: u128,
    pub param_budget: u128,
}

impl BruteForceOptions {
    pub fn new(max_height: usize, max_arity: usize) -> Self {
        Self {
            max_height,
            max_arity,
            closed: ClosedSubtrees::All,
            strategy: ParamStrategy::Compositional,
            skeleton_budget: DEFAULT_SKELETON_BUDGET,
            param_budget: 10_000_000,
        }
    }

    pub fn closed(mut self, closed: ClosedSubtrees) -> Self {
        self.closed = closed;
        self
    }

    pub fn strategy(mut self, strategy: ParamStrategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn skeleton_budget(mut self, budget: u128) -> Self {
        self.skeleton_budget = budget;
        self
    }
}

/// Maps induced by proper affine terms within given height and arity bounds.
#[derive(Debug, Clone)]
pub struct AffineMapSet {
    /// First-found map per image, witness as provenance, in discovery order.
    pub maps: Vec<UnaryMap>,
    pub skeletons_examined: usize,
}

impl AffineMapSet {
    pub fn image_set(&self) -> HashSet<Vec<Element>> {
        self.maps.iter().map(|m| m.image().to_vec()).collect()
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }
}

/// `{ eval_skeleton(a, sk, p) }` over all linear skeletons with height
/// `<= max_height` and arity `<= max_arity` and all their parameter tuples.
pub fn brute_force_affine_maps(
    a: &FiniteAlgebra,
    max_height: usize,
    max_arity: usize,
) -> Result<AffineMapSet> {
    brute_force_with(a, &BruteForceOptions::new(max_height, max_arity))
}

pub fn brute_force_with(a: &FiniteAlgebra, opts: &BruteForceOptions) -> Result<AffineMapSet> {
    let max_arity = opts.max_arity.min(crate::algebra::MAX_ARITY);
    let shape = SkeletonShape::for_algebra(a, opts.max_height, max_arity, opts.closed);
    let skeletons = enumerate_linear(&shape, opts.skeleton_budget)?;
    let mut seen: HashSet<Vec<Element>> = HashSet::new();
    let mut maps = Vec::new();
    let mut images = ImageCache::default();
    for sk in &skeletons {
        match opts.strategy {
            ParamStrategy::Literal => {
                for p in parameter_fillings(a, sk, opts.param_budget)? {
                    let m = eval_skeleton(a, sk, &p)?;
                    if seen.insert(m.image().to_vec()) {
                        maps.push(m);
                    }
                }
            }
            ParamStrategy::Compositional => {
                for (image, p) in images.proper(a, sk).iter() {
                    if seen.insert(image.clone()) {
                        let t = unskeletonize(sk, p, a.signature())?;
                        maps.push(UnaryMap::new(image.clone()).with_provenance(t));
                    }
                }
            }
        }
    }
    Ok(AffineMapSet {
        maps,
        skeletons_examined: skeletons.len(),
    })
}

type Images = Rc<Vec<(Vec<Element>, Params)>>;
type Values = Rc<Vec<(Element, Params)>>;

/// Memoized per-skeleton value and map sets, each entry with the first
/// parameter tuple producing it.
#[derive(Default)]
struct ImageCache {
    closed: HashMap<Skeleton, Values>,
    proper: HashMap<Skeleton, Images>,
}

/// Lexicographic walk over the product of `pools`, first pool slowest.
fn for_each_combination(sizes: &[usize], mut f: impl FnMut(&[usize])) {
    if sizes.contains(&0) {
        return;
    }
    let mut idx = vec![0; sizes.len()];
    loop {
        f(&idx);
        let mut pos = sizes.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < sizes[pos] {
                break;
            }
            idx[pos] = 0;
        }
    }
}

impl ImageCache {
    fn closed(&mut self, a: &FiniteAlgebra, sk: &Skeleton) -> Values {
        if let Some(v) = self.closed.get(sk) {
            return v.clone();
        }
        let sig = a.signature();
        let values: Vec<(Element, Params)> = match sk {
            Skeleton::Star => a.elements().map(|e| (e, Params::Element(e))).collect(),
            Skeleton::Zero => {
                let mut seen = HashSet::new();
                sig.of_arity(0)
                    .into_iter()
                    .filter_map(|s| {
                        let v = a.value(s, &[]);
                        seen.insert(v).then_some((v, Params::Nullary(s)))
                    })
                    .collect()
            }
            Skeleton::Node(ch) => {
                let pools: Vec<Values> = ch.iter().map(|c| self.closed(a, c)).collect();
                let sizes: Vec<usize> = pools.iter().map(|p| p.len()).collect();
                let mut seen = HashSet::new();
                let mut out = Vec::new();
                let mut args = vec![0; ch.len()];
                for s in sig.of_arity(ch.len()) {
                    for_each_combination(&sizes, |idx| {
                        for (k, &i) in idx.iter().enumerate() {
                            args[k] = pools[k][i].0;
                        }
                        let v = a.value(s, &args);
                        if seen.insert(v) {
                            let ps = idx
                                .iter()
                                .enumerate()
                                .map(|(k, &i)| pools[k][i].1.clone())
                                .collect();
                            out.push((v, Params::Node(s, ps)));
                        }
                    });
                }
                out
            }
            Skeleton::Var => unreachable!("closed subtree contains x"),
        };
        let values = Rc::new(values);
        self.closed.insert(sk.clone(), values.clone());
        values
    }

    fn proper(&mut self, a: &FiniteAlgebra, sk: &Skeleton) -> Images {
        if let Some(v) = self.proper.get(sk) {
            return v.clone();
        }
        let images: Vec<(Vec<Element>, Params)> = match sk {
            Skeleton::Var => vec![(a.elements().collect(), Params::Var)],
            Skeleton::Node(ch) => {
                let x_slot = ch
                    .iter()
                    .position(|c| c.x_count() > 0)
                    .expect("proper skeleton");
                let inner = self.proper(a, &ch[x_slot]);
                let closed: Vec<Option<Values>> = ch
                    .iter()
                    .enumerate()
                    .map(|(k, c)| (k != x_slot).then(|| self.closed(a, c)))
                    .collect();
                let sizes: Vec<usize> = closed
                    .iter()
                    .map(|c| c.as_ref().map_or(inner.len(), |v| v.len()))
                    .collect();
                let mut seen = HashSet::new();
                let mut out = Vec::new();
                let mut args = vec![0; ch.len()];
                for s in a.signature().of_arity(ch.len()) {
                    for_each_combination(&sizes, |idx| {
                        for (k, &i) in idx.iter().enumerate() {
                            if let Some(pool) = &closed[k] {
                                args[k] = pool[i].0;
                            }
                        }
                        let f = &inner[idx[x_slot]].0;
                        let image: Vec<Element> = f
                            .iter()
                            .map(|&fz| {
                                args[x_slot] = fz;
                                a.value(s, &args)
                            })
                            .collect();
                        if seen.insert(image.clone()) {
                            let ps = idx
                                .iter()
                                .enumerate()
                                .map(|(k, &i)| match &closed[k] {
                                    Some(pool) => pool[i].1.clone(),
                                    None => inner[i].1.clone(),
                                })
                                .collect();
                            out.push((image, Params::Node(s, ps)));
                        }
                    });
                }
                out
            }
            _ => unreachable!("not a proper skeleton"),
        };
        let images = Rc::new(images);
        self.proper.insert(sk.clone(), images.clone());
        images
    }
}
