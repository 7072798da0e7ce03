//! The free magma over `{a, b}` and the unbounded-height witness
//! `v_i = ((b a) a) .. a`.
//!
//! Elements are hash-consed binary trees. A proper affine term over the free
//! magma evaluates at `b` to a tree in which the image of `x` sits at depth
//! at most the term's height. Since `b` occurs exactly once in `v_i`, at
//! depth `i`, no proper term of smaller height reaches it; the search below
//! confirms this by exhaustive enumeration under a constant-size cap.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::catalog::Lcg;
use crate::error::{Error, Result};

pub const MAX_I: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    Gen(u8),
    Pair(NodeId, NodeId),
}

/// Hash-consed binary trees over named generators.
#[derive(Debug, Clone)]
pub struct Arena {
    generators: Vec<char>,
    nodes: Vec<Node>,
    sizes: Vec<usize>,
    index: HashMap<Node, NodeId>,
}

impl Arena {
    pub fn new(generators: &[char]) -> Self {
        let mut arena = Self {
            generators: generators.to_vec(),
            nodes: Vec::new(),
            sizes: Vec::new(),
            index: HashMap::new(),
        };
        for g in 0..generators.len() {
            arena.intern(Node::Gen(g as u8));
        }
        arena
    }

    fn intern(&mut self, n: Node) -> NodeId {
        if let Some(&id) = self.index.get(&n) {
            return id;
        }
        let id = NodeId(self.nodes.len() as u32);
        let size = match n {
            Node::Gen(_) => 1,
            Node::Pair(l, r) => 1 + self.size(l) + self.size(r),
        };
        self.nodes.push(n);
        self.sizes.push(size);
        self.index.insert(n, id);
        id
    }

    pub fn generator(&self, g: usize) -> NodeId {
        NodeId(g as u32)
    }

    pub fn mul(&mut self, l: NodeId, r: NodeId) -> NodeId {
        self.intern(Node::Pair(l, r))
    }

    /// Looks up a product without creating it.
    pub fn find_mul(&self, l: NodeId, r: NodeId) -> Option<NodeId> {
        self.index.get(&Node::Pair(l, r)).copied()
    }

    /// Number of nodes, leaves included.
    pub fn size(&self, t: NodeId) -> usize {
        self.sizes[t.0 as usize]
    }

    pub fn children(&self, t: NodeId) -> Option<(NodeId, NodeId)> {
        match self.nodes[t.0 as usize] {
            Node::Gen(_) => None,
            Node::Pair(l, r) => Some((l, r)),
        }
    }

    /// Depths of the occurrences of generator `g`, ascending.
    pub fn depths_of(&self, t: NodeId, g: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![(t, 0)];
        while let Some((n, d)) = stack.pop() {
            match self.nodes[n.0 as usize] {
                Node::Gen(h) if h as usize == g => out.push(d),
                Node::Gen(_) => {}
                Node::Pair(l, r) => {
                    stack.push((l, d + 1));
                    stack.push((r, d + 1));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// All subtrees, the tree itself included.
    pub fn subtrees(&self, t: NodeId) -> HashSet<NodeId> {
        let mut out = HashSet::new();
        let mut stack = vec![t];
        while let Some(n) = stack.pop() {
            if out.insert(n) {
                if let Some((l, r)) = self.children(n) {
                    stack.push(l);
                    stack.push(r);
                }
            }
        }
        out
    }

    /// Every tree with at most `cap` nodes, by size, then in creation order.
    pub fn trees_up_to(&mut self, cap: usize) -> Vec<NodeId> {
        let mut by_size: Vec<Vec<NodeId>> = vec![Vec::new(); cap + 1];
        if cap >= 1 {
            by_size[1] = (0..self.generators.len())
                .map(|g| self.generator(g))
                .collect();
        }
        for s in (3..=cap).step_by(2) {
            let mut level = Vec::new();
            for ls in (1..s - 1).step_by(2) {
                let rs = s - 1 - ls;
                for li in 0..by_size[ls].len() {
                    for ri in 0..by_size[rs].len() {
                        let (l, r) = (by_size[ls][li], by_size[rs][ri]);
                        level.push(self.mul(l, r));
                    }
                }
            }
            by_size[s] = level;
        }
        by_size.into_iter().flatten().collect()
    }

    pub fn render(&self, t: NodeId) -> String {
        match self.nodes[t.0 as usize] {
            Node::Gen(g) => self.generators[g as usize].to_string(),
            Node::Pair(l, r) => format!("({} {})", self.render(l), self.render(r)),
        }
    }
}

/// An affine term over the free magma: `x`, a constant tree, or a product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MagmaTerm {
    X,
    Const(NodeId),
    Mul(Box<MagmaTerm>, Box<MagmaTerm>),
}

impl MagmaTerm {
    pub fn height(&self) -> usize {
        match self {
            MagmaTerm::X | MagmaTerm::Const(_) => 0,
            MagmaTerm::Mul(l, r) => 1 + l.height().max(r.height()),
        }
    }

    pub fn x_count(&self) -> usize {
        match self {
            MagmaTerm::X => 1,
            MagmaTerm::Const(_) => 0,
            MagmaTerm::Mul(l, r) => l.x_count() + r.x_count(),
        }
    }

    pub fn eval(&self, arena: &mut Arena, z: NodeId) -> NodeId {
        match self {
            MagmaTerm::X => z,
            MagmaTerm::Const(c) => *c,
            MagmaTerm::Mul(l, r) => {
                let (l, r) = (l.eval(arena, z), r.eval(arena, z));
                arena.mul(l, r)
            }
        }
    }

    /// `t_i = (..((x a) a) ..) a`.
    pub fn left_comb(i: usize, a: NodeId) -> MagmaTerm {
        (0..i).fold(MagmaTerm::X, |t, _| {
            MagmaTerm::Mul(Box::new(t), Box::new(MagmaTerm::Const(a)))
        })
    }

    pub fn display<'a>(&'a self, arena: &'a Arena) -> impl fmt::Display + 'a {
        struct D<'a>(&'a MagmaTerm, &'a Arena);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                match self.0 {
                    MagmaTerm::X => f.write_str("x"),
                    MagmaTerm::Const(c) => f.write_str(&self.1.render(*c)),
                    MagmaTerm::Mul(l, r) => write!(f, "({} {})", D(l, self.1), D(r, self.1)),
                }
            }
        }
        D(self, arena)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessRow {
    pub i: usize,
    pub target: String,
    /// Constants of size `<= cap` that are subtrees of the target.
    pub relevant_constants: usize,
    /// True iff some proper term of height `< i` reaches the target.
    pub reachable_below: bool,
    /// Least height at which the target is reached.
    pub least_height: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreeMagmaReport {
    pub i_max: usize,
    pub cap: usize,
    pub constants: usize,
    pub rows: Vec<WitnessRow>,
    pub depth_check: Option<DepthCheck>,
}

impl FreeMagmaReport {
    pub fn holds(&self) -> bool {
        self.rows
            .iter()
            .all(|r| !r.reachable_below && r.least_height == Some(r.i))
            && self.depth_check.as_ref().is_none_or(|d| d.violations == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DepthCheck {
    pub seed: u64,
    pub samples: usize,
    pub violations: usize,
}

/// Values at `b` of proper terms of height `<= h`, for `h = 0, 1, ..`,
/// kept only when they are subtrees of `target` (any subterm's value is a
/// subtree of the whole value, so nothing else can contribute).
fn reach_heights(
    arena: &Arena,
    target: NodeId,
    constants: &[NodeId],
    b: NodeId,
    max_h: usize,
) -> Option<usize> {
    let inside = arena.subtrees(target);
    let mut closed: HashSet<NodeId> = constants
        .iter()
        .copied()
        .filter(|c| inside.contains(c))
        .collect();
    let mut proper: HashSet<NodeId> = HashSet::from([b]);
    for h in 0..=max_h {
        if proper.contains(&target) {
            return Some(h);
        }
        let mut next_proper = proper.clone();
        for &p in &proper {
            for &c in &closed {
                for v in [arena.find_mul(c, p), arena.find_mul(p, c)]
                    .into_iter()
                    .flatten()
                {
                    if inside.contains(&v) {
                        next_proper.insert(v);
                    }
                }
            }
        }
        let mut next_closed = closed.clone();
        for &l in &closed {
            for &r in &closed {
                if let Some(v) = arena.find_mul(l, r) {
                    if inside.contains(&v) {
                        next_closed.insert(v);
                    }
                }
            }
        }
        proper = next_proper;
        closed = next_closed;
    }
    None
}

/// Exhaustive values at `b` of proper terms of height `<= h` with
/// constants from `constants`, without pruning. Only for small inputs.
pub fn proper_values_unpruned(
    arena: &mut Arena,
    constants: &[NodeId],
    b: NodeId,
    h: usize,
) -> HashSet<NodeId> {
    let mut closed: HashSet<NodeId> = constants.iter().copied().collect();
    let mut proper: HashSet<NodeId> = HashSet::from([b]);
    for _ in 0..h {
        let mut next_proper = proper.clone();
        for &p in &proper {
            for &c in &closed {
                next_proper.insert(arena.mul(c, p));
                next_proper.insert(arena.mul(p, c));
            }
        }
        let mut next_closed = closed.clone();
        for &l in &closed {
            for &r in &closed {
                next_closed.insert(arena.mul(l, r));
            }
        }
        proper = next_proper;
        closed = next_closed;
    }
    proper
}

pub fn free_magma_witness(i_max: usize, cap: usize) -> Result<FreeMagmaReport> {
    if i_max > MAX_I || cap > 2 * i_max.max(1) {
        return Err(Error::LimitExceeded(format!(
            "free magma check needs i_max <= {MAX_I} and cap <= 2 * i_max, got i_max = {i_max}, cap = {cap}"
        )));
    }
    let mut arena = Arena::new(&['a', 'b']);
    let (a, b) = (arena.generator(0), arena.generator(1));
    let constants = arena.trees_up_to(cap);
    let mut rows = Vec::new();
    for i in 1..=i_max {
        let target = MagmaTerm::left_comb(i, a).eval(&mut arena, b);
        let inside = arena.subtrees(target);
        let least = reach_heights(&arena, target, &constants, b, i);
        rows.push(WitnessRow {
            i,
            target: arena.render(target),
            relevant_constants: constants.iter().filter(|c| inside.contains(c)).count(),
            reachable_below: least.is_some_and(|h| h < i),
            least_height: least,
        });
    }
    Ok(FreeMagmaReport {
        i_max,
        cap,
        constants: constants.len(),
        rows,
        depth_check: None,
    })
}

/// A random proper term of height `<= max_h` with constants drawn from
/// `constants`.
pub fn random_proper_term(rng: &mut Lcg, constants: &[NodeId], max_h: usize) -> MagmaTerm {
    fn go(rng: &mut Lcg, constants: &[NodeId], h: usize, need_x: bool) -> MagmaTerm {
        if h == 0 || rng.below(3) == 0 {
            return if need_x {
                MagmaTerm::X
            } else {
                MagmaTerm::Const(constants[rng.below(constants.len())])
            };
        }
        let x_left = rng.below(2) == 0;
        let l = go(rng, constants, h - 1, need_x && x_left);
        let r = go(rng, constants, h - 1, need_x && !x_left);
        MagmaTerm::Mul(Box::new(l), Box::new(r))
    }
    go(rng, constants, max_h, true)
}

/// Samples random proper terms and checks that the image of `x` lies at
/// depth at most the height. Evaluation happens at a fresh generator `z`
/// that no constant contains, so its depth is unambiguous; evaluating at
/// `b` the least depth of `b` obeys the same bound.
pub fn depth_invariant_check(seed: u64, samples: usize, max_h: usize, cap: usize) -> DepthCheck {
    let mut arena = Arena::new(&['a', 'b', 'z']);
    let (b, z) = (arena.generator(1), arena.generator(2));
    let constants: Vec<NodeId> = arena
        .trees_up_to(cap.max(1))
        .into_iter()
        .filter(|&c| arena.depths_of(c, 2).is_empty())
        .collect();
    let mut rng = Lcg::new(seed);
    let mut violations = 0;
    for _ in 0..samples {
        let t = random_proper_term(&mut rng, &constants, max_h);
        let h = t.height();
        let at_z = t.eval(&mut arena, z);
        let at_b = t.eval(&mut arena, b);
        let z_depths = arena.depths_of(at_z, 2);
        let b_depths = arena.depths_of(at_b, 1);
        if z_depths.len() != 1 || z_depths[0] > h || b_depths.first().is_none_or(|&d| d > h) {
            violations += 1;
        }
    }
    DepthCheck {
        seed,
        samples,
        violations,
    }
}
