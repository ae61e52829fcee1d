//! Bounded compositions: solutions of `u_1 + .. + u_h = t` in nonnegative
//! integers with `u_i < a_i`.
//!
//! Violating the bounds of a set `S` leaves `t - Σ_S a_i` to distribute
//! freely, so the term of `S` only depends on `val(S) = Σ_S a_i` and vanishes
//! once that exceeds `t`.

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_traits::{One, Zero};

use crate::engine::upgrade_a_weighted;
use crate::error::{Error, Result};
use crate::exclusion::{n_algorithm, GeneratorSet};
use crate::facecount::{union_parity_weight, ParityWeightTable, WeightVector};
use crate::rows::Face;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompSpec {
    bounds: Vec<BigUint>,
    target: BigUint,
}

impl CompSpec {
    pub fn new(bounds: Vec<BigUint>, target: BigUint) -> Result<Self> {
        if let Some(i) = bounds.iter().position(Zero::is_zero) {
            return Err(Error::invalid(format!("bound a_{} must be positive", i + 1)));
        }
        Ok(CompSpec { bounds, target })
    }

    pub fn from_u64(bounds: &[u64], target: u64) -> Result<Self> {
        CompSpec::new(
            bounds.iter().map(|&a| BigUint::from(a)).collect(),
            BigUint::from(target),
        )
    }

    /// Reads a comma-separated bound list such as `7,4,3,3,2,2`.
    pub fn parse(bounds: &str, target: &str) -> Result<Self> {
        let parse = |s: &str| {
            s.trim()
                .parse::<BigUint>()
                .map_err(|_| Error::invalid(format!("`{s}` is not a nonnegative integer")))
        };
        let bounds = if bounds.trim().is_empty() {
            Vec::new()
        } else {
            bounds.split(',').map(parse).collect::<Result<_>>()?
        };
        CompSpec::new(bounds, parse(target)?)
    }

    pub fn h(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[BigUint] {
        &self.bounds
    }

    pub fn target(&self) -> &BigUint {
        &self.target
    }
}

/// All minimal `S ⊆ [h]` with `Σ_S a_i > t`.
///
/// Indices are visited by decreasing bound, so the element added last is the
/// smallest one and a set becomes minimal exactly when that addition crosses
/// `t`.
pub fn comp_generators(spec: &CompSpec) -> GeneratorSet {
    let h = spec.h();
    let mut order: Vec<usize> = (0..h).collect();
    order.sort_by(|&i, &j| spec.bounds[j].cmp(&spec.bounds[i]).then(i.cmp(&j)));
    let a: Vec<&BigUint> = order.iter().map(|&i| &spec.bounds[i]).collect();
    let mut suffix = vec![BigUint::zero(); h + 1];
    for i in (0..h).rev() {
        suffix[i] = &suffix[i + 1] + a[i];
    }

    let mut found = Vec::new();
    let mut chosen = Vec::new();
    oversum(&a, &suffix, &spec.target, 0, &BigUint::zero(), &mut chosen, &mut found);

    let mut faces: Vec<Vec<usize>> = found
        .into_iter()
        .map(|s| {
            let mut e: Vec<usize> = s.into_iter().map(|k| order[k] + 1).collect();
            e.sort_unstable();
            e
        })
        .collect();
    faces.sort();
    let gens = faces
        .into_iter()
        .map(|e| Face::new(h, e).expect("indices inside [h]"))
        .collect();
    GeneratorSet::new(h, gens).expect("generators share h")
}

fn oversum(
    a: &[&BigUint],
    suffix: &[BigUint],
    t: &BigUint,
    start: usize,
    sum: &BigUint,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    for j in start..a.len() {
        if sum + &suffix[j] <= *t {
            return;
        }
        let next = sum + a[j];
        chosen.push(j);
        if next > *t {
            out.push(chosen.clone());
        } else {
            oversum(a, suffix, t, j + 1, &next, chosen, out);
        }
        chosen.pop();
    }
}

/// Solutions once the variables of a face with weight `v` are forced to
/// reach their bounds: `C(t - v + h - 1, h - 1)`, or 0 for `v > t`.
pub fn g_of_v(v: &BigUint, spec: &CompSpec) -> BigUint {
    if v > &spec.target {
        return BigUint::zero();
    }
    let h = spec.h();
    if h == 0 {
        return if spec.target.is_zero() {
            BigUint::one()
        } else {
            BigUint::zero()
        };
    }
    let k = BigUint::from(h - 1);
    binomial(&spec.target - v + &k, k)
}

/// The even/odd weight table of the relevant complex, weights `a_i`.
pub fn comp_weight_table(spec: &CompSpec) -> ParityWeightTable {
    let complex = n_algorithm(&comp_generators(spec));
    union_parity_weight(&complex, &WeightVector::new(spec.bounds.clone())).expect("one weight per variable")
}

pub fn count_bounded_compositions(spec: &CompSpec) -> BigUint {
    let n: BigInt = upgrade_a_weighted(&comp_weight_table(spec), |v| g_of_v(v, spec));
    n.to_biguint().expect("a count of solutions is nonnegative")
}
