//! Permutations avoiding contiguous blocks, and maps avoiding conjunctions of
//! fixed positions.
//!
//! Block avoidance: constraint `i` forbids block `B_i` from appearing as a
//! contiguous substring. A set of blocks can occur together iff their
//! successor relations merge into disjoint simple chains; the permutations
//! containing all of them are then the arrangements of the chains and the
//! leftover symbols.
//!
//! Disjunctive position constraints: constraint `i` is violated iff every
//! `(position, value)` pair of its negation holds. Two negations clash when
//! they map one position to two values or, for injective maps, one value to
//! two positions.

use std::collections::{HashMap, HashSet};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::engine::{upgrade_a, upgrade_b_scan, SignConvention};
use crate::error::{Error, Result};
use crate::exclusion::{ab_algorithm, n_algorithm, ClashGraph, GeneratorSet};
use crate::facecount::union_face_numbers;
use crate::parse;
use crate::rows::Face;

pub(crate) fn factorial(n: usize) -> BigUint {
    (2..=n).map(BigUint::from).product::<BigUint>().max(BigUint::one())
}

fn nonnegative(n: BigInt) -> Result<BigUint> {
    n.to_biguint()
        .ok_or_else(|| Error::invalid("inclusion-exclusion produced a negative count"))
}

/// Forbidden contiguous blocks over the symbols `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSpec {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl BlockSpec {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        for b in &blocks {
            if b.len() < 2 {
                return Err(Error::invalid(format!("block {b:?} shorter than 2")));
            }
            if b.iter().any(|&s| s == 0 || s > n) {
                return Err(Error::invalid(format!("block {b:?} leaves 1..={n}")));
            }
            let distinct: HashSet<_> = b.iter().collect();
            if distinct.len() != b.len() {
                return Err(Error::invalid(format!("block {b:?} repeats a symbol")));
            }
        }
        Ok(BlockSpec { n, blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Number of constraints `h`.
    pub fn h(&self) -> usize {
        self.blocks.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeResult {
    pub feasible: bool,
    /// The merged chains, each read left to right. Empty when infeasible.
    pub paths: Vec<Vec<usize>>,
    /// Symbols covered by the chains (σ).
    pub covered: usize,
}

impl MergeResult {
    pub fn path_count(&self) -> usize {
        self.paths.len()
    }
}

fn infeasible() -> MergeResult {
    MergeResult {
        feasible: false,
        paths: Vec::new(),
        covered: 0,
    }
}

/// Merges the successor relations of the blocks indexed by `u` (1-based).
pub fn merge_blocks(spec: &BlockSpec, u: &Face) -> MergeResult {
    let mut succ: HashMap<usize, usize> = HashMap::new();
    let mut pred: HashMap<usize, usize> = HashMap::new();
    for &i in u.elements() {
        for w in spec.blocks[i - 1].windows(2) {
            let (x, y) = (w[0], w[1]);
            if *succ.entry(x).or_insert(y) != y || *pred.entry(y).or_insert(x) != x {
                return infeasible();
            }
        }
    }
    let mut symbols: Vec<usize> = succ.keys().chain(pred.keys()).copied().collect();
    symbols.sort_unstable();
    symbols.dedup();

    let mut paths = Vec::new();
    let mut seen = 0;
    for &head in symbols.iter().filter(|s| !pred.contains_key(s)) {
        let mut path = vec![head];
        let mut cur = head;
        while let Some(&next) = succ.get(&cur) {
            path.push(next);
            cur = next;
        }
        seen += path.len();
        paths.push(path);
    }
    if seen != symbols.len() {
        // the unvisited symbols sit on a cycle
        return infeasible();
    }
    MergeResult {
        feasible: true,
        paths,
        covered: symbols.len(),
    }
}

/// Permutations of `[n]` containing every block of `u`: `(n - σ + p)!`, or 0.
pub fn block_face_count(spec: &BlockSpec, u: &Face) -> BigUint {
    let m = merge_blocks(spec, u);
    if !m.feasible {
        return BigUint::zero();
    }
    factorial(spec.n - m.covered + m.path_count())
}

/// The minimal sets of blocks that cannot occur together, found level by
/// level: a `k`-set qualifies iff it is infeasible while all of its
/// `(k-1)`-subsets are feasible.
pub fn block_sf_generators(spec: &BlockSpec) -> GeneratorSet {
    let h = spec.h();
    let feasible = |s: &[usize]| {
        let face = Face::new(h, s.iter().map(|i| i + 1)).expect("indices inside [h]");
        merge_blocks(spec, &face).feasible
    };
    let mut gens = Vec::new();
    let mut level: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..h {
        let known: HashSet<&Vec<usize>> = level.iter().collect();
        let mut next = Vec::new();
        for s in &level {
            let start = s.last().map_or(0, |&l| l + 1);
            for j in start..h {
                let mut cand = s.clone();
                cand.push(j);
                let subsets_ok = (0..cand.len()).all(|drop| {
                    let sub: Vec<usize> = cand
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != drop)
                        .map(|(_, &x)| x)
                        .collect();
                    known.contains(&sub)
                });
                if !subsets_ok {
                    continue;
                }
                if feasible(&cand) {
                    next.push(cand);
                } else {
                    gens.push(Face::new(h, cand.iter().map(|i| i + 1)).expect("inside [h]"));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        level = next;
    }
    GeneratorSet::new(h, gens).expect("generators share h")
}

/// Permutations of `[n]` containing none of the blocks.
pub fn count_block_avoiding_permutations(spec: &BlockSpec) -> Result<BigUint> {
    let complex = n_algorithm(&block_sf_generators(spec));
    let n = |u: &Face| block_face_count(spec, u);
    nonnegative(upgrade_b_scan(&complex, &n, SignConvention::Primal)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapMode {
    Injective,
    Arbitrary,
}

/// The negation of one disjunctive constraint: the `(position, value)` pairs
/// that all hold when the constraint is violated. 1-based on both sides.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AssignConstraint {
    pairs: Vec<(usize, usize)>,
}

impl AssignConstraint {
    /// Repeated pairs are merged.
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
        pairs.sort_unstable();
        pairs.dedup();
        AssignConstraint { pairs }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// True if the pairs of this constraint already contradict each other.
    pub fn self_clashing(&self, mode: MapMode) -> bool {
        let p = &self.pairs;
        (0..p.len()).any(|i| (i + 1..p.len()).any(|j| pairs_clash(p[i], p[j], mode)))
    }

    pub fn clashes_with(&self, other: &AssignConstraint, mode: MapMode) -> bool {
        self.pairs
            .iter()
            .any(|&p| other.pairs.iter().any(|&q| pairs_clash(p, q, mode)))
    }
}

pub fn pairs_clash(p: (usize, usize), q: (usize, usize), mode: MapMode) -> bool {
    (p.0 == q.0 && p.1 != q.1) || (mode == MapMode::Injective && p.1 == q.1 && p.0 != q.0)
}

/// A constrained-map counting problem: maps `[n] -> [m]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapSpec {
    pub n: usize,
    pub m: usize,
    pub mode: MapMode,
    pub constraints: Vec<AssignConstraint>,
}

impl MapSpec {
    pub fn new(n: usize, m: usize, mode: MapMode, constraints: Vec<AssignConstraint>) -> Result<Self> {
        for c in &constraints {
            if c.is_empty() {
                return Err(Error::invalid("constraint without pairs"));
            }
            if let Some(&(p, v)) = c.pairs().iter().find(|&&(p, v)| p == 0 || p > n || v == 0 || v > m) {
                return Err(Error::invalid(format!("pair ({p},{v}) outside [{n}] x [{m}]")));
            }
        }
        Ok(MapSpec {
            n,
            m,
            mode,
            constraints,
        })
    }

    /// Maps with `fixed` prescribed distinct pairs.
    fn extensions(&self, fixed: usize) -> BigUint {
        match self.mode {
            MapMode::Arbitrary => BigUint::from(self.m).pow((self.n - fixed) as u32),
            MapMode::Injective => {
                if self.m < self.n {
                    BigUint::zero()
                } else {
                    ((self.m - self.n + 1)..=(self.m - fixed)).map(BigUint::from).product()
                }
            }
        }
    }

    /// Conditions under which every term depends on `|U|` only and every
    /// generator is an edge: equal sizes, no pair shared between constraints,
    /// no clash inside a constraint.
    pub fn check_admissible(&self) -> Result<()> {
        let cs = &self.constraints;
        if let Some(first) = cs.first() {
            if cs.iter().any(|c| c.len() != first.len()) {
                return Err(Error::invalid("constraints differ in size"));
            }
        }
        let mut seen = HashSet::new();
        for (i, c) in cs.iter().enumerate() {
            if c.self_clashing(self.mode) {
                return Err(Error::invalid(format!("constraint {} clashes with itself", i + 1)));
            }
            for &p in c.pairs() {
                if !seen.insert(p) {
                    return Err(Error::invalid(format!("pair {p:?} occurs in two constraints")));
                }
            }
        }
        Ok(())
    }

    /// Graph on the constraints with an edge for every clashing pair.
    pub fn clash_graph(&self) -> Result<ClashGraph> {
        self.check_admissible()?;
        Ok(self.clash_graph_unchecked())
    }

    fn clash_graph_unchecked(&self) -> ClashGraph {
        let cs = &self.constraints;
        let mut g = ClashGraph::edgeless(cs.len());
        for i in 0..cs.len() {
            for j in i + 1..cs.len() {
                if cs[i].clashes_with(&cs[j], self.mode) {
                    g.add_edge(i + 1, j + 1).expect("distinct vertices inside [h]");
                }
            }
        }
        g
    }

    /// Whole-row evaluation over the anticliques of the clash graph with
    /// `g(k) = (n - sk)!` (injective, `m = n`) or `m^(n - sk)`.
    pub fn count_upgrade_a(&self) -> Result<BigUint> {
        let g = self.clash_graph()?;
        let s = self.constraints.first().map_or(0, AssignConstraint::len);
        let f = union_face_numbers(&ab_algorithm(&g));
        nonnegative(upgrade_a(&f, |k| self.extensions(s * k)))
    }

    /// Generators of the zero terms without any admissibility assumption:
    /// self-clashing constraints and clashing pairs.
    pub fn sf_generators(&self) -> GeneratorSet {
        let h = self.constraints.len();
        let mut gens: Vec<Face> = self
            .clash_graph_unchecked()
            .edges()
            .into_iter()
            .map(|(u, v)| Face::new(h, [u, v]).expect("edge inside [h]"))
            .collect();
        for (i, c) in self.constraints.iter().enumerate() {
            if c.self_clashing(self.mode) {
                gens.push(Face::new(h, [i + 1]).expect("vertex inside [h]"));
            }
        }
        GeneratorSet::new(h, gens).expect("generators share h")
    }

    /// Face-by-face evaluation that merges the pairs of every face.
    pub fn count_upgrade_b(&self) -> Result<BigUint> {
        let complex = n_algorithm(&self.sf_generators());
        let n = |u: &Face| {
            let pairs: HashSet<(usize, usize)> = u
                .elements()
                .iter()
                .flat_map(|&i| self.constraints[i - 1].pairs().iter().copied())
                .collect();
            self.extensions(pairs.len())
        };
        nonnegative(upgrade_b_scan(&complex, &n, SignConvention::Primal)?)
    }

    /// Number of maps satisfying every constraint.
    pub fn count(&self) -> Result<BigUint> {
        match self.check_admissible() {
            Ok(()) => self.count_upgrade_a(),
            Err(_) => self.count_upgrade_b(),
        }
    }
}

pub fn count_constrained_maps(
    constraints: Vec<AssignConstraint>,
    n: usize,
    m: usize,
    mode: MapMode,
) -> Result<BigUint> {
    MapSpec::new(n, m, mode, constraints)?.count()
}

/// Either problem kind, as read from a spec file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PermProblem {
    Blocks(BlockSpec),
    Maps(MapSpec),
}

fn value_token(line: usize, col: usize, tok: &str) -> Result<usize> {
    let tok = tok.trim();
    match tok.as_bytes() {
        [c] if c.is_ascii_lowercase() => Ok((c - b'a') as usize + 1),
        _ => parse::number(line, col, tok),
    }
}

fn parse_pairs(line: usize, offset: usize, body: &str) -> Result<Vec<(usize, usize)>> {
    let mut pairs = Vec::new();
    let chars: Vec<char> = body.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let col = offset + i + 1;
        if c != '(' {
            return Err(Error::parse(line, col, format!("expected `(`, found `{c}`")));
        }
        let close = chars[i..]
            .iter()
            .position(|&c| c == ')')
            .map(|k| i + k)
            .ok_or_else(|| Error::parse(line, col, "unclosed `(`"))?;
        let inner: String = chars[i + 1..close].iter().collect();
        let (p, v) = inner
            .split_once(',')
            .ok_or_else(|| Error::parse(line, col, "pair must be `(position,value)`"))?;
        pairs.push((parse::number(line, col + 1, p.trim())?, value_token(line, col + 1, v)?));
        i = close + 1;
    }
    Ok(pairs)
}

impl PermProblem {
    /// Header `perm n` or `maps n m`, then `block: s1 s2 ..` or
    /// `neq: (p1,v1) (p2,v2) ..` lines. Values may be written as letters
    /// `a..z` for `1..26`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (hl, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, 1, "missing `perm n` or `maps n m` header"))?;
        let toks = parse::tokens(header);
        let (n, m, injective) = match toks.as_slice() {
            [(_, "perm"), (c, n)] => {
                let n = parse::number(hl, *c, n)?;
                (n, n, true)
            }
            [(_, "maps"), (cn, n), (cm, m)] => (parse::number(hl, *cn, n)?, parse::number(hl, *cm, m)?, false),
            _ => return Err(Error::parse(hl, 1, "header must be `perm n` or `maps n m`")),
        };

        let mut blocks = Vec::new();
        let mut constraints = Vec::new();
        for (ln, line) in lines {
            let indent = line.len() - line.trim_start().len();
            let body = line.trim_start();
            if let Some(rest) = body.strip_prefix("block:") {
                let off = indent + "block:".len();
                let syms = parse::tokens(rest)
                    .into_iter()
                    .map(|(c, t)| parse::number(ln, off + c, t))
                    .collect::<Result<Vec<usize>>>()?;
                blocks.push((ln, syms));
            } else if let Some(rest) = body.strip_prefix("neq:") {
                let pairs = parse_pairs(ln, indent + "neq:".len(), rest)?;
                constraints.push((ln, AssignConstraint::new(pairs)));
            } else {
                return Err(Error::parse(ln, indent + 1, "expected `block:` or `neq:`"));
            }
        }

        match (blocks.is_empty(), constraints.is_empty()) {
            (false, false) => Err(Error::parse(
                constraints[0].0.max(blocks[0].0),
                1,
                "cannot mix `block:` and `neq:` lines",
            )),
            (false, true) if !injective => Err(Error::parse(blocks[0].0, 1, "`block:` needs a `perm n` header")),
            (false, true) | (true, true) if injective => {
                let spec = BlockSpec::new(n, blocks.into_iter().map(|(_, b)| b).collect())
                    .map_err(|e| Error::parse(hl, 1, e.to_string()))?;
                Ok(PermProblem::Blocks(spec))
            }
            _ => {
                let mode = if injective {
                    MapMode::Injective
                } else {
                    MapMode::Arbitrary
                };
                let spec = MapSpec::new(n, m, mode, constraints.into_iter().map(|(_, c)| c).collect())
                    .map_err(|e| Error::parse(hl, 1, e.to_string()))?;
                Ok(PermProblem::Maps(spec))
            }
        }
    }

    pub fn count(&self) -> Result<BigUint> {
        match self {
            PermProblem::Blocks(b) => count_block_avoiding_permutations(b),
            PermProblem::Maps(m) => m.count(),
        }
    }
}

/// The six blocks `¬123, ¬923, ¬9541, ¬3716, ¬379, ¬649` over `[9]`.
pub fn example_blocks() -> BlockSpec {
    BlockSpec::new(
        9,
        vec![
            vec![1, 2, 3],
            vec![9, 2, 3],
            vec![9, 5, 4, 1],
            vec![3, 7, 1, 6],
            vec![3, 7, 9],
            vec![6, 4, 9],
        ],
    )
    .expect("valid blocks")
}

/// The six forbidden positions `π(1) ≠ c, π(1) ≠ e, π(2) ≠ a, π(2) ≠ g,
/// π(3) ≠ a, π(6) ≠ d` as single-pair negations.
pub fn example_forbidden_positions() -> Vec<AssignConstraint> {
    [(1, 'c'), (1, 'e'), (2, 'a'), (2, 'g'), (3, 'a'), (6, 'd')]
        .into_iter()
        .map(|(p, v)| AssignConstraint::new([(p, (v as u8 - b'a') as usize + 1)]))
        .collect()
}

/// Negations of the six three-term disjunctions over `π: [10] -> {a..j}`,
/// letters numbered `a = 1`.
pub fn example_disjunctions() -> Vec<AssignConstraint> {
    let c = |p: [(usize, char); 3]| AssignConstraint::new(p.map(|(x, y)| (x, (y as u8 - b'a') as usize + 1)));
    vec![
        c([(3, 'a'), (4, 'b'), (5, 'c')]),
        c([(1, 'e'), (4, 'f'), (5, 'd')]),
        c([(2, 'a'), (6, 'g'), (7, 'j')]),
        c([(6, 'd'), (8, 'f'), (10, 'g')]),
        c([(1, 'c'), (8, 'e'), (9, 'h')]),
        c([(2, 'g'), (7, 'b'), (10, 'j')]),
    ]
}
