//! Slow reference counters that work straight from the definitions.
//!
//! Nothing here goes through the wildcard rows or inclusion-exclusion; the
//! code is meant to be obviously correct rather than fast. Every oracle
//! refuses inputs beyond its [`OracleBudget`].

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::comp::CompSpec;
use crate::dnf::DnfSpec;
use crate::error::{Error, Result};
use crate::exclusion::GeneratorSet;
use crate::perm::{BlockSpec, MapMode, MapSpec};
use crate::rows::{Face, Trit};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    /// Largest `h` or `n` that is enumerated over its power set.
    pub max_ground_size: usize,
    /// Largest `n` whose `n!` permutations are enumerated.
    pub max_factorial_base: usize,
    /// Largest target accepted by the composition tables.
    pub max_target: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_ground_size: 24,
            max_factorial_base: 10,
            max_target: 1_000_000,
        }
    }
}

fn over(what: &str, got: usize, cap: usize) -> Error {
    Error::BudgetExceeded(format!("{what} = {got} exceeds the oracle cap {cap}"))
}

/// Every `U ⊆ [h]` that contains no generator, in increasing mask order.
pub fn brute_set_ideal(g: &GeneratorSet, budget: &OracleBudget) -> Result<Vec<Face>> {
    let h = g.h();
    let cap = budget.max_ground_size.min(20);
    if h > cap {
        return Err(over("h", h, cap));
    }
    let gens: Vec<u64> = g
        .generators()
        .iter()
        .map(|f| f.elements().iter().fold(0u64, |m, &e| m | 1 << (e - 1)))
        .collect();
    Ok((0..1u64 << h)
        .filter(|&u| gens.iter().all(|&gm| u & gm != gm))
        .map(|u| Face::from_mask(h, u))
        .collect())
}

/// Lexicographic successor; `false` once `p` is the last permutation.
fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len())
        .rev()
        .find(|&j| p[j] > p[i - 1])
        .expect("a larger element exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn contains_block(p: &[usize], block: &[usize]) -> bool {
    p.windows(block.len()).any(|w| w == block)
}

fn for_each_permutation(n: usize, budget: &OracleBudget, mut f: impl FnMut(&[usize])) -> Result<()> {
    if n > budget.max_factorial_base {
        return Err(over("n", n, budget.max_factorial_base));
    }
    let mut p: Vec<usize> = (1..=n).collect();
    loop {
        f(&p);
        if !next_permutation(&mut p) {
            return Ok(());
        }
    }
}

/// Permutations of `[n]` in which no block occurs contiguously.
pub fn brute_block_permutations(spec: &BlockSpec, budget: &OracleBudget) -> Result<BigUint> {
    let mut count = 0u64;
    for_each_permutation(spec.n(), budget, |p| {
        if !spec.blocks().iter().any(|b| contains_block(p, b)) {
            count += 1;
        }
    })?;
    Ok(count.into())
}

/// Permutations of `[n]` containing every block indexed by `u` (1-based).
pub fn brute_block_face_count(spec: &BlockSpec, u: &Face, budget: &OracleBudget) -> Result<BigUint> {
    let mut count = 0u64;
    for_each_permutation(spec.n(), budget, |p| {
        if u.elements().iter().all(|&i| contains_block(p, &spec.blocks()[i - 1])) {
            count += 1;
        }
    })?;
    Ok(count.into())
}

fn violated(spec: &MapSpec, p: &[usize]) -> bool {
    spec.constraints
        .iter()
        .any(|c| c.pairs().iter().all(|&(pos, v)| p[pos - 1] == v))
}

/// Exhaustive scan over all `n!` permutations (injective maps with `m = n`).
pub fn brute_permutations(spec: &MapSpec, budget: &OracleBudget) -> Result<BigUint> {
    if spec.mode != MapMode::Injective || spec.m != spec.n {
        return Err(Error::invalid("permutation scan needs injective maps with m = n"));
    }
    let mut count = 0u64;
    for_each_permutation(spec.n, budget, |p| {
        if !violated(spec, p) {
            count += 1;
        }
    })?;
    Ok(count.into())
}

/// Maps satisfying every constraint.
///
/// Permutations are scanned exhaustively. Arbitrary maps are swept position
/// by position, tracking which negations still hold on the assigned prefix;
/// values no constraint mentions behave alike and are lumped together.
/// Other injective maps are enumerated depth first, stopping a branch once
/// some negation holds completely.
pub fn brute_constrained_maps(spec: &MapSpec, budget: &OracleBudget) -> Result<BigUint> {
    if spec.n > budget.max_factorial_base {
        return Err(over("n", spec.n, budget.max_factorial_base));
    }
    match spec.mode {
        MapMode::Injective if spec.m == spec.n => brute_permutations(spec, budget),
        MapMode::Injective => {
            if spec.m > budget.max_factorial_base {
                return Err(over("m", spec.m, budget.max_factorial_base));
            }
            let mut dfs = InjectionDfs {
                spec,
                assigned: vec![0; spec.n],
                used: vec![false; spec.m + 1],
            };
            Ok(dfs.run(0))
        }
        MapMode::Arbitrary => Ok(arbitrary_sweep(spec)),
    }
}

fn arbitrary_sweep(spec: &MapSpec) -> BigUint {
    let cs = &spec.constraints;
    let mut named: Vec<usize> = cs.iter().flat_map(|c| c.pairs().iter().map(|&(_, v)| v)).collect();
    named.sort_unstable();
    named.dedup();
    let unnamed = spec.m - named.len();
    let last_pos: Vec<usize> = cs
        .iter()
        .map(|c| c.pairs().iter().map(|&(p, _)| p).max().unwrap_or(0))
        .collect();

    // open constraint set -> number of prefixes
    let mut states: HashMap<Vec<bool>, BigUint> = HashMap::new();
    states.insert(vec![true; cs.len()], BigUint::one());
    for pos in 1..=spec.n {
        let wanted: Vec<Vec<usize>> = cs
            .iter()
            .map(|c| c.pairs().iter().filter(|&&(p, _)| p == pos).map(|&(_, v)| v).collect())
            .collect();
        let mut next: HashMap<Vec<bool>, BigUint> = HashMap::new();
        let choices = named
            .iter()
            .map(|&v| (Some(v), 1))
            .chain((unnamed > 0).then_some((None, unnamed)));
        let choices: Vec<(Option<usize>, usize)> = choices.collect();
        for (open, count) in &states {
            for &(value, mult) in &choices {
                let still: Vec<bool> = (0..cs.len())
                    .map(|i| open[i] && wanted[i].iter().all(|&w| value == Some(w)))
                    .collect();
                if (0..cs.len()).any(|i| still[i] && last_pos[i] == pos) {
                    continue;
                }
                *next.entry(still).or_default() += count * mult;
            }
        }
        states = next;
    }
    states.into_values().sum()
}

struct InjectionDfs<'a> {
    spec: &'a MapSpec,
    assigned: Vec<usize>,
    used: Vec<bool>,
}

impl InjectionDfs<'_> {
    fn run(&mut self, depth: usize) -> BigUint {
        if violated_prefix(self.spec, &self.assigned, depth) {
            return BigUint::zero();
        }
        if depth == self.spec.n {
            return BigUint::one();
        }
        let mut total = BigUint::zero();
        for v in 1..=self.spec.m {
            if self.used[v] {
                continue;
            }
            self.assigned[depth] = v;
            self.used[v] = true;
            total += self.run(depth + 1);
            self.used[v] = false;
        }
        total
    }
}

fn violated_prefix(spec: &MapSpec, p: &[usize], depth: usize) -> bool {
    spec.constraints
        .iter()
        .any(|c| c.pairs().iter().all(|&(pos, v)| pos <= depth && p[pos - 1] == v))
}

fn target_usize(spec: &CompSpec, budget: &OracleBudget) -> Result<usize> {
    let t: usize = spec
        .target()
        .try_into()
        .map_err(|_| Error::BudgetExceeded("target does not fit a machine word".into()))?;
    if t > budget.max_target {
        return Err(over("t", t, budget.max_target));
    }
    Ok(t)
}

fn bound_usize(a: &BigUint) -> usize {
    a.try_into().unwrap_or(usize::MAX)
}

/// Rows of the suffix table: entry `[j][k]` counts solutions of
/// `u_{j+1} + .. + u_h = k`. Row `h` is the empty sum.
pub fn comp_dp_table(spec: &CompSpec, budget: &OracleBudget) -> Result<Vec<Vec<BigUint>>> {
    let t = target_usize(spec, budget)?;
    let h = spec.h();
    let mut rows = vec![Vec::new(); h + 1];
    let mut last = vec![BigUint::zero(); t + 1];
    last[0] = BigUint::one();
    rows[h] = last;
    for j in (0..h).rev() {
        let a = bound_usize(&spec.bounds()[j]);
        let below = &rows[j + 1];
        let row: Vec<BigUint> = (0..=t)
            .map(|k| (0..=k.min(a - 1)).map(|u| &below[k - u]).sum())
            .collect();
        rows[j] = row;
    }
    Ok(rows)
}

pub fn dp_oracle(spec: &CompSpec, budget: &OracleBudget) -> Result<BigUint> {
    let rows = comp_dp_table(spec, budget)?;
    Ok(rows[0].last().cloned().unwrap_or_default())
}

/// Coefficient of `x^t` in `Π (1 + x + .. + x^(a_i - 1))`.
pub fn genfun_oracle(spec: &CompSpec, budget: &OracleBudget) -> Result<BigUint> {
    let t = target_usize(spec, budget)?;
    let mut poly = vec![BigUint::zero(); t + 1];
    poly[0] = BigUint::one();
    for a in spec.bounds() {
        let a = bound_usize(a);
        let mut next = vec![BigUint::zero(); t + 1];
        for (i, c) in poly.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for e in 0..a.min(t + 1 - i) {
                next[i + e] += c;
            }
        }
        poly = next;
    }
    Ok(poly.swap_remove(t))
}

fn term_masks(spec: &DnfSpec) -> Vec<(u64, u64)> {
    spec.terms()
        .iter()
        .map(|t| {
            t.trits().iter().enumerate().fold((0, 0), |(o, z), (i, tr)| match tr {
                Trit::One => (o | 1 << i, z),
                Trit::Zero => (o, z | 1 << i),
                Trit::Two => (o, z),
            })
        })
        .collect()
}

/// Model counts of a DNF split by the number of true variables.
pub fn brute_dnf_by_weight(spec: &DnfSpec, budget: &OracleBudget) -> Result<Vec<u64>> {
    let n = spec.n();
    if n > budget.max_ground_size.min(30) {
        return Err(over("n", n, budget.max_ground_size.min(30)));
    }
    let masks = term_masks(spec);
    let mut hist = vec![0u64; n + 1];
    for x in 0..1u64 << n {
        if masks.iter().any(|&(o, z)| x & o == o && x & z == 0) {
            hist[x.count_ones() as usize] += 1;
        }
    }
    Ok(hist)
}

pub fn brute_dnf(spec: &DnfSpec, budget: &OracleBudget) -> Result<BigUint> {
    Ok(brute_dnf_by_weight(spec, budget)?.iter().sum::<u64>().into())
}

/// Model counts of a CNF split by the number of true variables. Clauses are
/// given as rows (`1` positive literal, `0` negated literal).
pub fn brute_cnf_by_weight(clauses: &DnfSpec, budget: &OracleBudget) -> Result<Vec<u64>> {
    let n = clauses.n();
    if n > budget.max_ground_size.min(30) {
        return Err(over("n", n, budget.max_ground_size.min(30)));
    }
    let masks = term_masks(clauses);
    let mut hist = vec![0u64; n + 1];
    for x in 0..1u64 << n {
        if masks.iter().all(|&(p, q)| x & p != 0 || !x & q != 0) {
            hist[x.count_ones() as usize] += 1;
        }
    }
    Ok(hist)
}

pub fn brute_cnf(clauses: &DnfSpec, budget: &OracleBudget) -> Result<BigUint> {
    Ok(brute_cnf_by_weight(clauses, budget)?.iter().sum::<u64>().into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{example_disjunctions, AssignConstraint};

    #[test]
    fn permutation_successor_covers_all() {
        let mut p = vec![1, 2, 3, 4];
        let mut n = 1;
        while next_permutation(&mut p) {
            n += 1;
        }
        assert_eq!(n, 24);
        assert_eq!(p, vec![4, 3, 2, 1]);
    }

    #[test]
    fn set_ideal_sizes() {
        let b = OracleBudget::default();
        assert_eq!(
            brute_set_ideal(&GeneratorSet::new(4, vec![]).unwrap(), &b)
                .unwrap()
                .len(),
            16
        );
        let g = GeneratorSet::from_lists(3, &[&[1, 2], &[3]]).unwrap();
        assert_eq!(brute_set_ideal(&g, &b).unwrap().len(), 3);
        let big = GeneratorSet::new(21, vec![]).unwrap();
        assert!(matches!(brute_set_ideal(&big, &b), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn unconstrained_permutations() {
        let b = OracleBudget::default();
        let spec = MapSpec::new(4, 4, MapMode::Injective, vec![]).unwrap();
        assert_eq!(brute_permutations(&spec, &b).unwrap(), BigUint::from(24u8));
        assert_eq!(brute_constrained_maps(&spec, &b).unwrap(), BigUint::from(24u8));
        let blocks = BlockSpec::new(4, vec![]).unwrap();
        assert_eq!(brute_block_permutations(&blocks, &b).unwrap(), BigUint::from(24u8));
        let big = MapSpec::new(11, 11, MapMode::Injective, vec![]).unwrap();
        assert!(matches!(brute_permutations(&big, &b), Err(Error::BudgetExceeded(_))));
    }

    fn brute_maps_plain(spec: &MapSpec) -> u64 {
        let mut count = 0;
        let total = (spec.m as u64).pow(spec.n as u32);
        for code in 0..total {
            let p: Vec<usize> = (0..spec.n)
                .map(|i| (code / (spec.m as u64).pow(i as u32) % spec.m as u64) as usize + 1)
                .collect();
            let mut seen = p.clone();
            seen.sort_unstable();
            seen.dedup();
            if spec.mode == MapMode::Injective && seen.len() < p.len() {
                continue;
            }
            if !violated(spec, &p) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn sweeps_agree_with_plain_scan() {
        let b = OracleBudget::default();
        let cs = vec![
            AssignConstraint::new([(1, 2), (2, 1)]),
            AssignConstraint::new([(3, 3)]),
            AssignConstraint::new([(2, 3), (4, 4)]),
        ];
        let inj = MapSpec::new(5, 5, MapMode::Injective, cs.clone()).unwrap();
        assert_eq!(
            brute_permutations(&inj, &b).unwrap(),
            BigUint::from(brute_maps_plain(&inj))
        );

        let arb = MapSpec::new(4, 3, MapMode::Arbitrary, vec![AssignConstraint::new([(1, 1), (2, 2)])]).unwrap();
        // 3^4 maps, 3^2 of them with π(1)=1, π(2)=2
        assert_eq!(brute_constrained_maps(&arb, &b).unwrap(), BigUint::from(72u8));
        let arb = MapSpec::new(5, 4, MapMode::Arbitrary, cs.clone()).unwrap();
        assert_eq!(
            brute_constrained_maps(&arb, &b).unwrap(),
            BigUint::from(brute_maps_plain(&arb))
        );

        let wide = MapSpec::new(3, 5, MapMode::Injective, vec![AssignConstraint::new([(1, 1)])]).unwrap();
        // 5·4·3 injections, 4·3 of them with π(1)=1
        assert_eq!(brute_constrained_maps(&wide, &b).unwrap(), BigUint::from(48u8));
        let wide = MapSpec::new(4, 6, MapMode::Injective, cs).unwrap();
        assert_eq!(
            brute_constrained_maps(&wide, &b).unwrap(),
            BigUint::from(brute_maps_plain(&wide))
        );

        let twice = vec![
            AssignConstraint::new([(1, 1), (1, 2)]),
            AssignConstraint::new([(2, 2), (3, 1)]),
        ];
        let arb = MapSpec::new(3, 3, MapMode::Arbitrary, twice).unwrap();
        assert_eq!(
            brute_constrained_maps(&arb, &b).unwrap(),
            BigUint::from(brute_maps_plain(&arb))
        );
    }

    #[test]
    fn disjunction_example_by_sweep() {
        let b = OracleBudget::default();
        let arb = MapSpec::new(10, 10, MapMode::Arbitrary, example_disjunctions()).unwrap();
        assert_eq!(
            brute_constrained_maps(&arb, &b).unwrap(),
            BigUint::from(9_940_089_980u64)
        );
    }

    #[test]
    fn composition_tables() {
        let b = OracleBudget::default();
        let s = CompSpec::from_u64(&[7, 4, 3, 3, 2, 2], 9).unwrap();
        let rows = comp_dp_table(&s, &b).unwrap();
        let row = |j: usize| rows[j].iter().map(|c| u64::try_from(c).unwrap()).collect::<Vec<_>>();
        assert_eq!(row(3), vec![1, 3, 4, 3, 1, 0, 0, 0, 0, 0]);
        assert_eq!(row(2)[4], 8);
        assert_eq!(dp_oracle(&s, &b).unwrap(), BigUint::from(125u8));
        assert_eq!(genfun_oracle(&s, &b).unwrap(), BigUint::from(125u8));
        let s = CompSpec::from_u64(&[2, 2], 1).unwrap();
        assert_eq!(genfun_oracle(&s, &b).unwrap(), BigUint::from(2u8));
        let huge = CompSpec::parse("3", "100000000000").unwrap();
        assert!(matches!(dp_oracle(&huge, &b), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn dnf_truth_tables() {
        let b = OracleBudget::default();
        let s = crate::dnf::example_dnf();
        assert_eq!(brute_dnf(&s, &b).unwrap(), BigUint::from(17u8));
        assert!(brute_dnf(&DnfSpec::new(3, vec![]).unwrap(), &b).unwrap().is_zero());
        // clauses x1 ∨ x2 over two variables
        let c = DnfSpec::new(2, vec!["1 1".parse().unwrap()]).unwrap();
        assert_eq!(brute_cnf(&c, &b).unwrap(), BigUint::from(3u8));
    }
}
