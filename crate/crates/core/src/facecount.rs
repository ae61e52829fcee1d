//! Face numbers and parity/weight tables of row unions, computed by formal
//! polynomial products.
//!
//! Each row factors into independent groups (see [`Group`]), so its
//! generating polynomial is the product of one small polynomial per group:
//!
//! | cell            | univariate         | bivariate (`y` tracks weight)           |
//! |-----------------|--------------------|-----------------------------------------|
//! | `1` at `j`      | `x`                | `x y^{a_j}`                             |
//! | `2` at `j`      | `1 + x`            | `1 + x y^{a_j}`                         |
//! | bubble `S`      | `(1+x)^t - x^t`    | `Π(1 + x y^{a_j}) - Π x y^{a_j}`        |
//! | wildcard `a, B` | `(1+x)^t + x`      | `Π_{j∈B}(1 + x y^{a_j}) + x y^{a_a}`    |
//!
//! In the bivariate case powers of `x` are reduced mod 2, leaving an even
//! and an odd part.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rows::{Group, Row, RowUnion};

/// `f(k)` for `k = 0..=h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceVector {
    f: Vec<BigUint>,
}

impl FaceVector {
    pub fn zeros(h: usize) -> Self {
        FaceVector {
            f: vec![BigUint::zero(); h + 1],
        }
    }

    pub fn from_counts(counts: impl IntoIterator<Item = u64>) -> Self {
        FaceVector {
            f: counts.into_iter().map(BigUint::from).collect(),
        }
    }

    pub fn h(&self) -> usize {
        self.f.len() - 1
    }

    pub fn get(&self, k: usize) -> BigUint {
        self.f.get(k).cloned().unwrap_or_default()
    }

    pub fn as_slice(&self) -> &[BigUint] {
        &self.f
    }

    pub fn total(&self) -> BigUint {
        self.f.iter().sum()
    }

    fn add_assign(&mut self, other: &FaceVector) {
        for (a, b) in self.f.iter_mut().zip(&other.f) {
            *a += b;
        }
    }
}

/// Weights `a_1..a_h` defining `val(U) = Σ_{i∈U} a_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector(Vec<BigUint>);

impl WeightVector {
    pub fn new(weights: Vec<BigUint>) -> Self {
        WeightVector(weights)
    }

    pub fn from_u64(weights: &[u64]) -> Self {
        WeightVector(weights.iter().map(|&w| BigUint::from(w)).collect())
    }

    /// All weights 1: `val(U) = |U|`.
    pub fn ones(h: usize) -> Self {
        WeightVector(vec![BigUint::one(); h])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[BigUint] {
        &self.0
    }
}

/// Even part `c` and odd part `d` of `p(x, y) = Σ c_v y^v + x Σ d_v y^v`.
/// Only nonzero coefficients are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParityWeightTable {
    even: BTreeMap<BigUint, BigUint>,
    odd: BTreeMap<BigUint, BigUint>,
}

impl ParityWeightTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a table from `(weight, count)` pairs; zero counts are dropped.
    pub fn from_pairs(even: &[(u64, u64)], odd: &[(u64, u64)]) -> Self {
        let mut t = ParityWeightTable::new();
        for &(v, c) in even {
            t.add(false, BigUint::from(v), &BigUint::from(c));
        }
        for &(v, c) in odd {
            t.add(true, BigUint::from(v), &BigUint::from(c));
        }
        t
    }

    fn one() -> Self {
        let mut t = ParityWeightTable::new();
        t.even.insert(BigUint::zero(), BigUint::one());
        t
    }

    /// `x y^w`
    fn monomial_x(w: &BigUint) -> Self {
        let mut t = ParityWeightTable::new();
        t.odd.insert(w.clone(), BigUint::one());
        t
    }

    fn side(&mut self, odd: bool) -> &mut BTreeMap<BigUint, BigUint> {
        if odd {
            &mut self.odd
        } else {
            &mut self.even
        }
    }

    fn add(&mut self, odd: bool, v: BigUint, c: &BigUint) {
        if c.is_zero() {
            return;
        }
        *self.side(odd).entry(v).or_default() += c;
    }

    fn subtract_one(&mut self, odd: bool, v: &BigUint) {
        let side = self.side(odd);
        let c = side.get_mut(v).expect("subtracted term present");
        *c -= 1u8;
        if c.is_zero() {
            side.remove(v);
        }
    }

    /// `c_v`: faces of even cardinality and weight `v`.
    pub fn even(&self) -> &BTreeMap<BigUint, BigUint> {
        &self.even
    }

    /// `d_v`: faces of odd cardinality and weight `v`.
    pub fn odd(&self) -> &BTreeMap<BigUint, BigUint> {
        &self.odd
    }

    pub fn even_at(&self, v: u64) -> BigUint {
        self.even.get(&BigUint::from(v)).cloned().unwrap_or_default()
    }

    pub fn odd_at(&self, v: u64) -> BigUint {
        self.odd.get(&BigUint::from(v)).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.even.values().chain(self.odd.values()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.even.is_empty() && self.odd.is_empty()
    }

    /// Every weight that occurs on either side, ascending.
    pub fn weights(&self) -> Vec<BigUint> {
        let mut w: Vec<BigUint> = self.even.keys().chain(self.odd.keys()).cloned().collect();
        w.sort();
        w.dedup();
        w
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = ParityWeightTable::new();
        for (po, p) in [(false, &self.even), (true, &self.odd)] {
            for (qo, q) in [(false, &other.even), (true, &other.odd)] {
                for (pw, pc) in p {
                    for (qw, qc) in q {
                        out.add(po ^ qo, pw + qw, &(pc * qc));
                    }
                }
            }
        }
        out
    }

    fn add_table(&mut self, other: &Self) {
        for (v, c) in &other.even {
            self.add(false, v.clone(), c);
        }
        for (v, c) in &other.odd {
            self.add(true, v.clone(), c);
        }
    }
}

fn binomial_row(t: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for _ in 0..t {
        let mut next = vec![BigUint::zero(); row.len() + 1];
        for (i, c) in row.iter().enumerate() {
            next[i] += c;
            next[i + 1] += c;
        }
        row = next;
    }
    row
}

fn poly_mul(p: &[BigUint], q: &[BigUint]) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

fn group_polynomial(g: &Group) -> Vec<BigUint> {
    match g {
        Group::Free(_) => vec![BigUint::one(), BigUint::one()],
        Group::Bubble(s) => {
            let mut p = binomial_row(s.len());
            p.pop();
            p
        }
        Group::Wildcard { b, .. } => {
            let mut p = binomial_row(b.len());
            p[1] += 1u8;
            p
        }
    }
}

/// `Card(r, k)` for every `k`: the number of members of `r` with `k` elements.
pub fn row_face_polynomial<R: Row>(r: &R) -> FaceVector {
    let mut p = vec![BigUint::zero(); r.fixed_ones().len()];
    p.push(BigUint::one());
    for g in r.groups() {
        p = poly_mul(&p, &group_polynomial(&g));
    }
    p.resize(r.h() + 1, BigUint::zero());
    FaceVector { f: p }
}

/// `f(k) = Σ_rows Card(r, k)`; rows must be disjoint.
pub fn union_face_numbers<R: Row>(u: &RowUnion<R>) -> FaceVector {
    let mut f = FaceVector::zeros(u.h());
    for r in u.rows() {
        f.add_assign(&row_face_polynomial(r));
    }
    f
}

fn free_factor(w: &BigUint) -> ParityWeightTable {
    let mut t = ParityWeightTable::one();
    t.odd.insert(w.clone(), BigUint::one());
    t
}

fn group_parity_polynomial(g: &Group, w: &[BigUint]) -> ParityWeightTable {
    match g {
        Group::Free(p) => free_factor(&w[*p]),
        Group::Bubble(s) => {
            let mut t = s
                .iter()
                .fold(ParityWeightTable::one(), |acc, &p| acc.mul(&free_factor(&w[p])));
            let full: BigUint = s.iter().map(|&p| &w[p]).sum();
            t.subtract_one(s.len() % 2 == 1, &full);
            t
        }
        Group::Wildcard { a, b } => {
            let mut t = b
                .iter()
                .fold(ParityWeightTable::one(), |acc, &p| acc.mul(&free_factor(&w[p])));
            t.add(true, w[*a].clone(), &BigUint::one());
            t
        }
    }
}

/// `p_r(x, y)` with `x` reduced mod 2, split into its even and odd parts.
pub fn row_parity_weight_polynomial<R: Row>(r: &R, w: &WeightVector) -> Result<ParityWeightTable> {
    if w.len() != r.h() {
        return Err(Error::LengthMismatch {
            expected: r.h(),
            actual: w.len(),
        });
    }
    let w = w.as_slice();
    let mut t = ParityWeightTable::one();
    for p in r.fixed_ones() {
        t = t.mul(&ParityWeightTable::monomial_x(&w[p]));
    }
    for g in r.groups() {
        t = t.mul(&group_parity_polynomial(&g, w));
    }
    Ok(t)
}

/// Sum of the row tables of a disjoint union, in standard form.
pub fn union_parity_weight<R: Row>(u: &RowUnion<R>, w: &WeightVector) -> Result<ParityWeightTable> {
    let mut t = ParityWeightTable::new();
    for r in u.rows() {
        t.add_table(&row_parity_weight_polynomial(r, w)?);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rows::{ABRow, Face, NRow};

    fn counts(f: &FaceVector) -> Vec<u64> {
        f.as_slice().iter().map(|c| c.try_into().unwrap()).collect()
    }

    /// Histogram by (parity, weight) over an explicit member list.
    fn histogram(members: impl Iterator<Item = Face>, w: &[u64]) -> ParityWeightTable {
        let mut t = ParityWeightTable::new();
        for u in members {
            let v: u64 = u.elements().iter().map(|&e| w[e - 1]).sum();
            t.add(u.len() % 2 == 1, BigUint::from(v), &BigUint::one());
        }
        t
    }

    #[test]
    fn fourteen_cell_row() {
        let r: NRow = "0 1 2 2 2 n1 n1 n2 n2 n3 n3 n3 n3 n3".parse().unwrap();
        let f = row_face_polynomial(&r);
        assert_eq!(
            counts(&f),
            vec![0, 1, 12, 64, 200, 406, 559, 525, 325, 120, 20, 0, 0, 0, 0]
        );
        assert_eq!(f.total(), r.cardinality());
    }

    #[test]
    fn all_zero_row() {
        let r: NRow = "0 0 0".parse().unwrap();
        assert_eq!(counts(&row_face_polynomial(&r)), vec![1, 0, 0, 0]);
    }

    #[test]
    fn wildcard_row_polynomial() {
        let r: ABRow = "b 2 a b 2 2 b".parse().unwrap();
        let f = row_face_polynomial(&r);
        let mut expect = vec![0u64; 8];
        for u in r.members() {
            expect[u.len()] += 1;
        }
        assert_eq!(counts(&f), expect);
    }

    #[test]
    fn table_three_rows() {
        let w = WeightVector::from_u64(&[7, 4, 3, 3, 2, 2]);
        let r1: NRow = "0 n1 n1 n1 n2 n2".parse().unwrap();
        let t1 = row_parity_weight_polynomial(&r1, &w).unwrap();
        assert_eq!(
            t1,
            ParityWeightTable::from_pairs(
                &[(0, 1), (5, 4), (6, 3), (7, 2)],
                &[(2, 2), (3, 2), (4, 1), (8, 2), (9, 4)]
            )
        );
        let r2: NRow = "1 0 0 0 n n".parse().unwrap();
        assert_eq!(
            row_parity_weight_polynomial(&r2, &w).unwrap(),
            ParityWeightTable::from_pairs(&[(9, 2)], &[(7, 1)])
        );
    }

    #[test]
    fn five_cell_bubble() {
        let r: NRow = "n n n n n".parse().unwrap();
        let w = [2, 2, 2, 5, 5];
        let t = row_parity_weight_polynomial(&r, &WeightVector::from_u64(&w)).unwrap();
        let expect = ParityWeightTable::from_pairs(
            &[(0, 1), (4, 3), (7, 6), (10, 1), (11, 2), (14, 3)],
            &[(2, 3), (5, 2), (6, 1), (9, 6), (12, 3)],
        );
        assert_eq!(histogram(r.members(), &w), expect);
        assert_eq!(t, expect);
        assert_eq!(t.total(), BigUint::from(31u8));
    }

    #[test]
    fn weight_length_checked() {
        let r = NRow::full(3);
        assert!(row_parity_weight_polynomial(&r, &WeightVector::ones(2)).is_err());
    }

    #[test]
    fn empty_union_is_zero_vector() {
        let u: RowUnion<NRow> = RowUnion::empty(4);
        assert_eq!(counts(&union_face_numbers(&u)), vec![0; 5]);
        assert!(union_parity_weight(&u, &WeightVector::ones(4)).unwrap().is_empty());
    }

    #[test]
    fn unit_weights_split_face_vector_by_parity() {
        let r: ABRow = "b1 a1 b1 2 a2 b2 2".parse().unwrap();
        let f = row_face_polynomial(&r);
        let t = row_parity_weight_polynomial(&r, &WeightVector::ones(r.h())).unwrap();
        for k in 0..=r.h() {
            let v = k as u64;
            let (mine, other) = if k % 2 == 0 {
                (t.even_at(v), t.odd_at(v))
            } else {
                (t.odd_at(v), t.even_at(v))
            };
            assert_eq!(mine, f.get(k));
            assert!(other.is_zero());
        }
    }
}
