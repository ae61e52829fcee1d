//! Evaluating the inclusion-exclusion sum over a relevant complex.
//!
//! `upgrade_b_scan` visits every face and asks a [`CountFn`] for its term.
//! When the term only depends on `|U|` (or on a weight `val(U)`),
//! `upgrade_a` / `upgrade_a_weighted` work from the face numbers instead and
//! never touch individual faces.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::facecount::{FaceVector, ParityWeightTable};
use crate::rows::{Face, Row, RowUnion};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignConvention {
    /// `Σ_{U} (-1)^{|U|} N(U)`, the empty face included.
    Primal,
    /// `Σ_{U ≠ ∅} (-1)^{|U|+1} N(U)`.
    Dual,
}

impl SignConvention {
    fn signed(self, u: &Face, n: BigUint) -> BigInt {
        let negative = match self {
            SignConvention::Primal => u.len() % 2 == 1,
            SignConvention::Dual => u.len().is_multiple_of(2),
        };
        let n = BigInt::from(n);
        if negative {
            -n
        } else {
            n
        }
    }
}

/// The term `N(u: u ∈ U)` of a face. Must be pure; scans may call it from
/// several threads at once.
pub trait CountFn: Sync {
    fn count(&self, face: &Face) -> Result<BigUint>;
}

impl<F> CountFn for F
where
    F: Fn(&Face) -> BigUint + Sync,
{
    fn count(&self, face: &Face) -> Result<BigUint> {
        Ok(self(face))
    }
}

/// Adapts a closure that can fail.
pub struct Fallible<F>(pub F);

impl<F> CountFn for Fallible<F>
where
    F: Fn(&Face) -> Result<BigUint> + Sync,
{
    fn count(&self, face: &Face) -> Result<BigUint> {
        (self.0)(face)
    }
}

/// Caches results by face content. Useful when the same count function is
/// reused across several scans.
pub struct Memoized<C> {
    inner: C,
    cache: Mutex<HashMap<Face, BigUint>>,
}

impl<C: CountFn> Memoized<C> {
    pub fn new(inner: C) -> Self {
        Memoized {
            inner,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn cached(&self) -> usize {
        self.cache.lock().expect("cache lock").len()
    }
}

impl<C: CountFn> CountFn for Memoized<C> {
    fn count(&self, face: &Face) -> Result<BigUint> {
        if let Some(v) = self.cache.lock().expect("cache lock").get(face) {
            return Ok(v.clone());
        }
        let v = self.inner.count(face)?;
        self.cache.lock().expect("cache lock").insert(face.clone(), v.clone());
        Ok(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanOptions {
    /// Worker threads for the row-level scan; `1` runs on the caller's thread.
    pub threads: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { threads: 1 }
    }
}

fn scan_row<R: Row, C: CountFn + ?Sized>(r: &R, n: &C, s: SignConvention) -> Result<BigInt> {
    let mut acc = BigInt::zero();
    for u in r.members() {
        if s == SignConvention::Dual && u.is_empty() {
            continue;
        }
        acc += s.signed(&u, n.count(&u)?);
    }
    Ok(acc)
}

/// Signed sum of `n(U)` over every face of the (disjoint) union.
pub fn upgrade_b_scan<R: Row, C: CountFn + ?Sized>(u: &RowUnion<R>, n: &C, s: SignConvention) -> Result<BigInt> {
    upgrade_b_scan_with(u, n, s, ScanOptions::default())
}

pub fn upgrade_b_scan_with<R: Row, C: CountFn + ?Sized>(
    u: &RowUnion<R>,
    n: &C,
    s: SignConvention,
    opts: ScanOptions,
) -> Result<BigInt> {
    if opts.threads <= 1 {
        return u
            .rows()
            .iter()
            .try_fold(BigInt::zero(), |acc, r| Ok(acc + scan_row(r, n, s)?));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    pool.install(|| {
        u.rows()
            .par_iter()
            .map(|r| scan_row(r, n, s))
            .try_reduce(BigInt::zero, |a, b| Ok(a + b))
    })
}

/// `Σ_k (-1)^k f(k) g(k)`.
pub fn upgrade_a(f: &FaceVector, g: impl Fn(usize) -> BigUint) -> BigInt {
    f.as_slice()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            let term = BigInt::from(c * g(k));
            if k % 2 == 1 {
                -term
            } else {
                term
            }
        })
        .sum()
}

/// `Σ_v c_v g(v) - Σ_v d_v g(v)`.
pub fn upgrade_a_weighted(t: &ParityWeightTable, g: impl Fn(&BigUint) -> BigUint) -> BigInt {
    let side = |m: &std::collections::BTreeMap<BigUint, BigUint>| -> BigInt {
        BigInt::from(m.iter().map(|(v, c)| c * g(v)).sum::<BigUint>())
    };
    side(t.even()) - side(t.odd())
}
