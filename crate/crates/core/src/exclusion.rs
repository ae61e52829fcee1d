//! Building the relevant set ideal `SC = P[h] \ SF` as a disjoint union of
//! wildcard rows.
//!
//! `SF` is the up-closed family generated by a list of subsets `Γ_i`; a set
//! `U` is relevant iff it covers no generator. Two constructions are offered:
//! the n-algorithm imposes one noncover condition `Γ_i ⊄ U` at a time on a
//! worklist of `{0,1,2,n}` rows, and the ab-algorithm imposes one
//! anti-implication per graph vertex on `{0,1,2,a,b}` rows when every
//! generator is an edge.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rows::{ABRow, AbCell, Face, NCell, NRow, Row, RowUnion};

/// Generators `Γ_1..Γ_m` of an up-closed family over `[h]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    h: usize,
    generators: Vec<Face>,
}

impl GeneratorSet {
    /// Duplicates are dropped; order of first occurrence is kept.
    pub fn new(h: usize, generators: Vec<Face>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut kept = Vec::with_capacity(generators.len());
        for g in generators {
            if g.h() != h {
                return Err(Error::LengthMismatch {
                    expected: h,
                    actual: g.h(),
                });
            }
            if seen.insert(g.clone()) {
                kept.push(g);
            }
        }
        Ok(GeneratorSet { h, generators: kept })
    }

    pub fn from_lists(h: usize, lists: &[&[usize]]) -> Result<Self> {
        let faces = lists
            .iter()
            .map(|l| Face::new(h, l.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        GeneratorSet::new(h, faces)
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn generators(&self) -> &[Face] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Inclusion-minimal generators, in their original order.
    pub fn minimal(&self) -> Vec<Face> {
        let g = &self.generators;
        g.iter()
            .enumerate()
            .filter(|&(i, gi)| {
                !g.iter()
                    .enumerate()
                    .any(|(j, gj)| j != i && gj.len() < gi.len() && gj.is_subset(gi))
            })
            .map(|(_, gi)| gi.clone())
            .collect()
    }

    /// Parses the `h m` header followed by `m` lines of 1-based indices.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, 1, "missing `h m` header"))?;
        let nums = crate::parse::numbers::<usize>(hl, header)?;
        let [h, m] = nums[..] else {
            return Err(Error::parse(hl, 1, "header must be `h m`"));
        };
        let mut gens = Vec::with_capacity(m);
        for (ln, line) in lines.by_ref().take(m) {
            let elems = crate::parse::numbers::<usize>(ln, line)?;
            let face = Face::new(h, elems).map_err(|e| Error::parse(ln, 1, e.to_string()))?;
            gens.push(face);
        }
        if gens.len() != m {
            return Err(Error::parse(
                text.lines().count().max(1),
                1,
                format!("expected {m} generator lines, found {}", gens.len()),
            ));
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::parse(ln, 1, "unexpected line after generators"));
        }
        GeneratorSet::new(h, gens)
    }
}

enum Part {
    Free(Vec<usize>),
    Bubble { id: usize, part: Vec<usize> },
}

/// Restricts `r` to the members that do not cover `gamma`.
///
/// The returned rows are pairwise disjoint. Positions of `gamma` that are
/// already `1` are ignored; the remaining ones are grouped into the `2` cells
/// and the per-bubble slices. Son `j` fixes the groups before `j` to all ones
/// and requires group `j` to contain a `0`.
pub fn impose_noncover(r: &NRow, gamma: &Face) -> Vec<NRow> {
    assert_eq!(r.h(), gamma.h(), "generator length differs from row length");
    let cells = r.cells();
    let bubbles = r.bubble_positions();
    let positions: Vec<usize> = gamma.elements().iter().map(|e| e - 1).collect();

    let mut free = Vec::new();
    let mut slices: Vec<Vec<usize>> = vec![Vec::new(); bubbles.len()];
    for &p in &positions {
        match cells[p] {
            NCell::Zero => return vec![r.clone()],
            NCell::One => {}
            NCell::Two => free.push(p),
            NCell::Bubble(b) => slices[b].push(p),
        }
    }
    if slices.iter().zip(bubbles).any(|(s, b)| s.len() == b.len()) {
        // some bubble lies inside gamma and already forbids covering it
        return vec![r.clone()];
    }

    let mut parts = Vec::new();
    if !free.is_empty() {
        parts.push(Part::Free(free));
    }
    for (id, part) in slices.into_iter().enumerate() {
        if !part.is_empty() {
            parts.push(Part::Bubble { id, part });
        }
    }

    let fresh = NCell::Bubble(bubbles.len());
    let mut prefix = cells.to_vec();
    let mut sons = Vec::with_capacity(parts.len());
    for part in &parts {
        let mut son = prefix.clone();
        match part {
            Part::Free(ps) => ps.iter().for_each(|&p| son[p] = fresh),
            Part::Bubble { id, part } => {
                for &p in &bubbles[*id] {
                    son[p] = NCell::Two;
                }
                part.iter().for_each(|&p| son[p] = fresh);
            }
        }
        sons.push(NRow::new(son));

        let ps = match part {
            Part::Free(ps) => ps,
            Part::Bubble { part, .. } => part,
        };
        ps.iter().for_each(|&p| prefix[p] = NCell::One);
    }
    sons
}

/// Disjoint row representation of `{U ⊆ [h] : Γ_i ⊄ U for all i}`.
///
/// Only minimal generators are imposed. Rows are processed from a LIFO
/// worklist, one generator at a time, so the output order is deterministic.
pub fn n_algorithm(g: &GeneratorSet) -> RowUnion<NRow> {
    let h = g.h();
    let gens = g.minimal();
    if gens.iter().any(Face::is_empty) {
        return RowUnion::empty(h);
    }
    let mut out = Vec::new();
    let mut stack = vec![(NRow::full(h), 0usize)];
    while let Some((row, i)) = stack.pop() {
        if i == gens.len() {
            out.push(row);
            continue;
        }
        let sons = impose_noncover(&row, &gens[i]);
        stack.extend(sons.into_iter().rev().map(|s| (s, i + 1)));
    }
    RowUnion::from_rows_unchecked(h, out)
}

/// `|SC|`, summed over the rows of [`n_algorithm`].
pub fn relevant_count(g: &GeneratorSet) -> BigUint {
    n_algorithm(g).cardinality()
}

/// `|SC|` as the number of sets `U` whose complement is a transversal of the
/// generators, by a splitting recursion that shares nothing with the row
/// machinery.
pub fn transversal_count(g: &GeneratorSet) -> BigUint {
    let gens: Vec<Vec<usize>> = g.minimal().iter().map(|f| f.elements().to_vec()).collect();
    count_noncovers(gens, g.h())
}

fn count_noncovers(gens: Vec<Vec<usize>>, undecided: usize) -> BigUint {
    if gens.is_empty() {
        return BigUint::one() << undecided;
    }
    if gens.iter().any(Vec::is_empty) {
        return BigUint::zero();
    }
    let mut freq = std::collections::HashMap::new();
    for g in &gens {
        for &e in g {
            *freq.entry(e).or_insert(0usize) += 1;
        }
    }
    let (&v, _) = freq.iter().max_by_key(|&(&e, &c)| (c, std::cmp::Reverse(e))).unwrap();
    let excluded: Vec<Vec<usize>> = gens.iter().filter(|g| !g.contains(&v)).cloned().collect();
    let included: Vec<Vec<usize>> = gens
        .into_iter()
        .map(|g| g.into_iter().filter(|&e| e != v).collect())
        .collect();
    count_noncovers(excluded, undecided - 1) + count_noncovers(included, undecided - 1)
}

/// A simple undirected graph on the vertices `1..=h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClashGraph {
    adj: Vec<Vec<usize>>,
}

impl ClashGraph {
    pub fn edgeless(h: usize) -> Self {
        ClashGraph {
            adj: vec![Vec::new(); h],
        }
    }

    /// Edges use 1-based vertices; repeated edges collapse, loops are rejected.
    pub fn new(h: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = ClashGraph::edgeless(h);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let h = self.adj.len();
        if u == 0 || v == 0 || u > h || v > h {
            return Err(Error::invalid(format!("edge ({u},{v}) outside 1..={h}")));
        }
        if u == v {
            return Err(Error::invalid(format!("loop at vertex {u}")));
        }
        let (a, b) = (u - 1, v - 1);
        if let Err(i) = self.adj[a].binary_search(&b) {
            self.adj[a].insert(i, b);
            let j = self.adj[b].binary_search(&a).unwrap_err();
            self.adj[b].insert(j, a);
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.adj[u - 1].binary_search(&(v - 1)).is_ok()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v - 1].len()
    }

    /// 1-based neighbours of `v`.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.adj[v - 1].iter().map(|u| u + 1).collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, ns) in self.adj.iter().enumerate() {
            out.extend(ns.iter().filter(|&&v| v > u).map(|&v| (u + 1, v + 1)));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_anticlique(&self, u: &Face) -> bool {
        let e = u.elements();
        e.iter()
            .enumerate()
            .all(|(i, &a)| e[i + 1..].iter().all(|&b| !self.has_edge(a, b)))
    }

    /// Edges as 2-element generators.
    pub fn edge_generators(&self) -> GeneratorSet {
        let h = self.vertex_count();
        let faces = self
            .edges()
            .into_iter()
            .map(|(u, v)| Face::new(h, [u, v]).expect("edge inside [h]"))
            .collect();
        GeneratorSet::new(h, faces).expect("edges share h")
    }

    pub(crate) fn adjacency(&self) -> &[Vec<usize>] {
        &self.adj
    }
}

/// Working row of the ab-algorithm. Wildcard slots are never reused while a
/// row is alive; a resolved wildcard leaves `None` behind.
#[derive(Clone)]
struct AbState {
    cells: Vec<AbCell>,
    wild: Vec<Option<(usize, Vec<usize>)>>,
}

impl AbState {
    fn full(h: usize) -> Self {
        AbState {
            cells: vec![AbCell::Two; h],
            wild: Vec::new(),
        }
    }

    /// Returns `false` if the row becomes empty.
    fn set_zero(&mut self, p: usize) -> bool {
        match self.cells[p] {
            AbCell::Zero => {}
            AbCell::One => return false,
            AbCell::Two => self.cells[p] = AbCell::Zero,
            AbCell::A(w) => {
                let (_, b) = self.wild[w].take().expect("live wildcard");
                for q in b {
                    self.cells[q] = AbCell::Two;
                }
                self.cells[p] = AbCell::Zero;
            }
            AbCell::B(w) => {
                self.cells[p] = AbCell::Zero;
                let (a, b) = self.wild[w].as_mut().expect("live wildcard");
                b.retain(|&q| q != p);
                if b.is_empty() {
                    self.cells[*a] = AbCell::Two;
                    self.wild[w] = None;
                }
            }
        }
        true
    }

    fn set_one(&mut self, p: usize) -> bool {
        match self.cells[p] {
            AbCell::One => {}
            AbCell::Zero => return false,
            AbCell::Two => self.cells[p] = AbCell::One,
            AbCell::A(w) => {
                let (_, b) = self.wild[w].take().expect("live wildcard");
                for q in b {
                    self.cells[q] = AbCell::Zero;
                }
                self.cells[p] = AbCell::One;
            }
            AbCell::B(w) => {
                let (a, b) = self.wild[w].take().expect("live wildcard");
                for q in b {
                    self.cells[q] = AbCell::Two;
                }
                self.cells[a] = AbCell::Zero;
                self.cells[p] = AbCell::One;
            }
        }
        true
    }

    fn force_zero(&mut self, ps: &[usize]) -> bool {
        ps.iter().all(|&p| self.set_zero(p))
    }

    fn into_row(self) -> ABRow {
        let mut cells = self.cells;
        let mut wildcards = Vec::new();
        for (a, b) in self.wild.into_iter().flatten() {
            let id = wildcards.len();
            cells[a] = AbCell::A(id);
            for &q in &b {
                cells[q] = AbCell::B(id);
            }
            wildcards.push(ABRow::wildcard(a, b));
        }
        ABRow::from_parts(cells, wildcards)
    }
}

/// Vertex order for branching: descending degree, ties by index.
fn branching_order(g: &ClashGraph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.adjacency()[v].len()), v));
    order
}

/// All anticliques of `g` as pairwise disjoint `{0,1,2,a,b}` rows.
///
/// Vertices are visited once each; visiting `v` imposes `v → ¬N(v)`. When
/// `v` and its undecided neighbours are all `2` this becomes a new wildcard,
/// otherwise the row is split on `v`.
pub fn ab_algorithm(g: &ClashGraph) -> RowUnion<ABRow> {
    let h = g.vertex_count();
    let order = branching_order(g);
    let mut rank = vec![0usize; h];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    // edges towards earlier vertices were imposed when those were visited
    let later: Vec<Vec<usize>> = (0..h)
        .map(|v| {
            g.adjacency()[v]
                .iter()
                .copied()
                .filter(|&u| rank[u] > rank[v])
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut stack = vec![(AbState::full(h), 0usize)];
    while let Some((mut st, i)) = stack.pop() {
        if i == order.len() {
            out.push(st.into_row());
            continue;
        }
        let v = order[i];
        let nbrs = &later[v];
        let active: Vec<usize> = nbrs.iter().copied().filter(|&u| st.cells[u] != AbCell::Zero).collect();
        if st.cells[v] == AbCell::Zero || active.is_empty() {
            stack.push((st, i + 1));
            continue;
        }
        match st.cells[v] {
            AbCell::One => {
                if st.force_zero(&active) {
                    stack.push((st, i + 1));
                }
            }
            AbCell::Two if active.iter().any(|&u| st.cells[u] == AbCell::One) => {
                st.cells[v] = AbCell::Zero;
                stack.push((st, i + 1));
            }
            AbCell::Two if active.iter().all(|&u| st.cells[u] == AbCell::Two) => {
                let id = st.wild.len();
                st.cells[v] = AbCell::A(id);
                for &u in &active {
                    st.cells[u] = AbCell::B(id);
                }
                st.wild.push(Some((v, active)));
                stack.push((st, i + 1));
            }
            _ => split_on(st, v, &active, i, &mut stack),
        }
    }
    RowUnion::from_rows_unchecked(h, out)
}

fn split_on(st: AbState, v: usize, nbrs: &[usize], i: usize, stack: &mut Vec<(AbState, usize)>) {
    let mut with_v = st.clone();
    if with_v.set_one(v) && with_v.force_zero(nbrs) {
        stack.push((with_v, i + 1));
    }
    let mut without_v = st;
    if without_v.set_zero(v) {
        stack.push((without_v, i + 1));
    }
}

/// The n-algorithm fed with every edge as a generator.
pub fn anticliques_via_edges(g: &ClashGraph) -> RowUnion<NRow> {
    n_algorithm(&g.edge_generators())
}

/// Bitset adjacency, used by callers that test many faces.
pub fn adjacency_bitsets(g: &ClashGraph) -> Vec<FixedBitSet> {
    let h = g.vertex_count();
    g.adjacency()
        .iter()
        .map(|ns| {
            let mut b = FixedBitSet::with_capacity(h);
            ns.iter().for_each(|&u| b.insert(u));
            b
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rows::check_disjoint;

    fn brute_family(h: usize, pred: impl Fn(&Face) -> bool) -> Vec<Face> {
        sorted(
            (0u64..1 << h)
                .map(|m| Face::from_mask(h, m))
                .filter(|u| pred(u))
                .collect(),
        )
    }

    fn family<R: Row>(u: &RowUnion<R>) -> Vec<Face> {
        let mut m: Vec<Face> = u.members().collect();
        m.sort();
        m
    }

    fn sorted(mut v: Vec<Face>) -> Vec<Face> {
        v.sort();
        v
    }

    pub(crate) fn generators_three() -> GeneratorSet {
        GeneratorSet::from_lists(
            6,
            &[
                &[1, 2],
                &[1, 4],
                &[2, 3],
                &[2, 5],
                &[3, 4],
                &[3, 6],
                &[4, 5],
                &[5, 6],
                &[1, 3, 5],
                &[2, 4, 6],
            ],
        )
        .unwrap()
    }

    #[test]
    fn noncover_on_full_row_is_single_bubble() {
        let r = NRow::full(3);
        let out = impose_noncover(&r, &Face::new(3, [1, 2]).unwrap());
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].to_string(), "n1 n1 2");
    }

    #[test]
    fn noncover_with_fixed_one_forces_zero() {
        let r: NRow = "1 2 2".parse().unwrap();
        let out = impose_noncover(&r, &Face::new(3, [1, 2]).unwrap());
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].to_string(), "1 0 2");
    }

    #[test]
    fn noncover_across_bubble() {
        let r: NRow = "n n 2".parse().unwrap();
        let gamma = Face::new(3, [2, 3]).unwrap();
        let out = RowUnion::new(3, impose_noncover(&r, &gamma)).unwrap();
        assert!(check_disjoint(&out));
        let expect = brute_family(3, |u| {
            !Face::new(3, [1, 2]).unwrap().is_subset(u) && !gamma.is_subset(u)
        });
        assert_eq!(family(&out), expect);
    }

    #[test]
    fn noncover_edge_cases() {
        let r: NRow = "0 2 1".parse().unwrap();
        assert_eq!(impose_noncover(&r, &Face::new(3, [1, 2]).unwrap()), vec![r.clone()]);
        assert!(impose_noncover(&r, &Face::new(3, [3]).unwrap()).is_empty());
        let b: NRow = "n n 2".parse().unwrap();
        assert_eq!(impose_noncover(&b, &Face::new(3, [1, 2, 3]).unwrap()), vec![b.clone()]);
    }

    #[test]
    fn generators_three_give_fourteen_faces() {
        let g = generators_three();
        let u = n_algorithm(&g);
        assert!(check_disjoint(&u));
        assert_eq!(relevant_count(&g), BigUint::from(14u8));
        assert_eq!(transversal_count(&g), BigUint::from(14u8));
        let expect = brute_family(6, |f| g.generators().iter().all(|x| !x.is_subset(f)));
        assert_eq!(family(&u), expect);
    }

    #[test]
    fn no_generators() {
        let g = GeneratorSet::new(3, vec![]).unwrap();
        let u = n_algorithm(&g);
        assert_eq!(u.rows().len(), 1);
        assert_eq!(u.rows()[0].to_string(), "2 2 2");
        let g10 = GeneratorSet::new(10, vec![]).unwrap();
        assert_eq!(relevant_count(&g10), BigUint::from(1024u32));
    }

    #[test]
    fn empty_generator_empties_complex() {
        let g = GeneratorSet::new(3, vec![Face::empty(3)]).unwrap();
        assert!(n_algorithm(&g).is_empty());
        assert_eq!(transversal_count(&g), BigUint::zero());
    }

    #[test]
    fn singleton_generator_forces_zero() {
        let g = GeneratorSet::from_lists(3, &[&[2]]).unwrap();
        let u = n_algorithm(&g);
        assert_eq!(u.rows().len(), 1);
        assert_eq!(u.rows()[0].to_string(), "2 0 2");
    }

    #[test]
    fn superset_generators_pruned() {
        let g = GeneratorSet::from_lists(4, &[&[1, 2, 3], &[1, 2], &[1, 2]]).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.minimal(), vec![Face::new(4, [1, 2]).unwrap()]);
    }

    #[test]
    fn generator_file_format() {
        let g = GeneratorSet::parse("3 2\n1 2\n2 3\n").unwrap();
        assert_eq!(g.len(), 2);
        match GeneratorSet::parse("3 2\n1 2\n2 x\n") {
            Err(Error::Parse { at, .. }) => assert_eq!((at.line, at.column), (3, 3)),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(GeneratorSet::parse("3 2\n1 2\n").is_err());
        assert!(GeneratorSet::parse("3 1\n1 4\n").is_err());
    }

    #[test]
    fn edgeless_graph_gives_powerset() {
        let g = ClashGraph::edgeless(4);
        let u = ab_algorithm(&g);
        assert_eq!(u.cardinality(), BigUint::from(16u8));
        assert_eq!(family(&u).len(), 16);
    }

    #[test]
    fn star_is_single_wildcard_row() {
        let g = ClashGraph::new(7, [(3, 1), (3, 4), (3, 7)]).unwrap();
        let u = ab_algorithm(&g);
        assert_eq!(u.rows().len(), 1);
        assert_eq!(u.rows()[0].to_string(), "b1 2 a1 b1 2 2 b1");
    }

    #[test]
    fn triangle_anticliques() {
        let g = ClashGraph::new(3, [(1, 2), (2, 3), (1, 3)]).unwrap();
        let expect = sorted(vec![
            Face::empty(3),
            Face::new(3, [1]).unwrap(),
            Face::new(3, [2]).unwrap(),
            Face::new(3, [3]).unwrap(),
        ]);
        assert_eq!(family(&anticliques_via_edges(&g)), expect);
        assert_eq!(family(&ab_algorithm(&g)), expect);
    }

    #[test]
    fn path_graph_families_agree() {
        let g = ClashGraph::new(6, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 6), (2, 5)]).unwrap();
        let ab = ab_algorithm(&g);
        assert!(check_disjoint(&ab));
        let expect = brute_family(6, |u| g.is_anticlique(u));
        assert_eq!(family(&ab), expect);
        assert_eq!(family(&anticliques_via_edges(&g)), expect);
    }

    #[test]
    fn graph_rejects_loops_and_range() {
        assert!(ClashGraph::new(3, [(1, 1)]).is_err());
        assert!(ClashGraph::new(3, [(1, 4)]).is_err());
        let g = ClashGraph::new(3, [(1, 2), (2, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }
}
