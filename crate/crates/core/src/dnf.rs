//! Model counting for Boolean functions in disjunctive normal form.
//!
//! Term `T_i` has the Boolean interval `ρ_i` as model set. The models of the
//! disjunction are counted by the dual inclusion-exclusion sum over the
//! nonempty sets of pairwise compatible terms; the intersection of such a set
//! is again an interval with `2^|Z(U)|` members.

use std::collections::HashSet;
use std::time::Instant;

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{One, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::engine::{upgrade_b_scan_with, ScanOptions, SignConvention};
use crate::error::{Error, Result};
use crate::exclusion::{ab_algorithm, ClashGraph};
use crate::rows::{ABRow, Face, RowUnion, TernaryRow, Trit};

/// A DNF over `n` variables, one interval per term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DnfSpec {
    n: usize,
    terms: Vec<TernaryRow>,
}

impl DnfSpec {
    pub fn new(n: usize, terms: Vec<TernaryRow>) -> Result<Self> {
        if let Some(t) = terms.iter().find(|t| t.len() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: t.len(),
            });
        }
        Ok(DnfSpec { n, terms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[TernaryRow] {
        &self.terms
    }

    pub fn h(&self) -> usize {
        self.terms.len()
    }

    /// Same terms in input order with later duplicates removed.
    pub fn deduplicated(&self) -> DnfSpec {
        let mut seen = HashSet::new();
        let terms = self.terms.iter().filter(|t| seen.insert(*t)).cloned().collect();
        DnfSpec { n: self.n, terms }
    }

    pub fn evaluate(&self, x: &Face) -> Result<bool> {
        for t in &self.terms {
            if t.contains(x)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Builds a term from signed 1-based literals; `None` if it contains both
/// `x` and `-x`.
pub fn term_from_literals(n: usize, literals: &[i64]) -> Result<Option<TernaryRow>> {
    let mut row = TernaryRow::full(n);
    for &lit in literals {
        let v = lit.unsigned_abs() as usize;
        if lit == 0 || v > n {
            return Err(Error::invalid(format!("literal {lit} outside 1..={n}")));
        }
        let want = if lit > 0 { Trit::One } else { Trit::Zero };
        match row.get(v - 1) {
            Trit::Two => row = row.with_cell(v - 1, want),
            t if t == want => {}
            _ => return Ok(None),
        }
    }
    Ok(Some(row))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalForm {
    Dnf,
    Cnf,
}

/// A parsed DIMACS-style file. Terms (or clauses) are kept as signed
/// literal lists; contradictory DNF terms are dropped when converting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    pub form: NormalForm,
    pub n: usize,
    pub items: Vec<Vec<i64>>,
}

impl Formula {
    /// Header `p dnf n h` or `p cnf n h`; each item is a run of signed
    /// literals closed by `0`, possibly spread over several lines. Lines
    /// starting with `c` are comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(NormalForm, usize, usize, usize)> = None;
        let mut items = Vec::new();
        let mut cur: Vec<i64> = Vec::new();
        let mut last = (1, 1);
        for (i, line) in text.lines().enumerate() {
            let ln = i + 1;
            let trimmed = line.trim_start();
            if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('%') {
                continue;
            }
            let toks = crate::parse::tokens(line);
            if header.is_none() {
                match toks.as_slice() {
                    [(_, "p"), (_, kind), (cn, n), (ch, h)] => {
                        let form = match *kind {
                            "dnf" => NormalForm::Dnf,
                            "cnf" => NormalForm::Cnf,
                            _ => return Err(Error::parse(ln, toks[1].0, "expected `dnf` or `cnf`")),
                        };
                        let n = crate::parse::number(ln, *cn, n)?;
                        let h = crate::parse::number(ln, *ch, h)?;
                        header = Some((form, n, h, ln));
                        continue;
                    }
                    _ => return Err(Error::parse(ln, 1, "expected header `p dnf n h` or `p cnf n h`")),
                }
            }
            let (_, n, _, _) = header.expect("header read");
            for (col, tok) in toks {
                let lit: i64 = crate::parse::number(ln, col, tok)?;
                if lit.unsigned_abs() as usize > n {
                    return Err(Error::parse(ln, col, format!("variable {} exceeds n = {n}", lit.abs())));
                }
                last = (ln, col);
                if lit == 0 {
                    items.push(std::mem::take(&mut cur));
                } else {
                    cur.push(lit);
                }
            }
        }
        let (form, n, h, hl) = header.ok_or_else(|| Error::parse(1, 1, "missing `p dnf`/`p cnf` header"))?;
        if !cur.is_empty() {
            return Err(Error::parse(last.0, last.1, "last item is not closed by 0"));
        }
        if items.len() != h {
            return Err(Error::parse(
                hl,
                1,
                format!("header announces {h} items, found {}", items.len()),
            ));
        }
        Ok(Formula { form, n, items })
    }

    /// The DNF whose models are those of this formula (`Dnf`) or of its
    /// negation (`Cnf`, signs flipped clause by clause).
    pub fn to_dnf(&self) -> Result<DnfSpec> {
        let flip = self.form == NormalForm::Cnf;
        let mut terms = Vec::new();
        for item in &self.items {
            let lits: Vec<i64> = item.iter().map(|&l| if flip { -l } else { l }).collect();
            if let Some(t) = term_from_literals(self.n, &lits)? {
                terms.push(t);
            }
        }
        DnfSpec::new(self.n, terms)
    }

    pub fn model_count(&self, opts: ScanOptions) -> Result<BigUint> {
        let dnf = self.to_dnf()?;
        Ok(match self.form {
            NormalForm::Dnf => model_count_with(&dnf, opts)?,
            NormalForm::Cnf => (BigUint::one() << self.n) - model_count_with(&dnf, opts)?,
        })
    }

    pub fn model_count_fixed_k(&self, k: usize, opts: ScanOptions) -> Result<BigUint> {
        let dnf = self.to_dnf()?;
        Ok(match self.form {
            NormalForm::Dnf => model_count_fixed_k_with(&dnf, k, opts)?,
            NormalForm::Cnf => {
                let all = if k <= self.n {
                    binomial(BigUint::from(self.n), BigUint::from(k))
                } else {
                    BigUint::zero()
                };
                all - model_count_fixed_k_with(&dnf, k, opts)?
            }
        })
    }
}

/// Terms are adjacent iff their intervals are disjoint.
pub fn term_clash_graph(spec: &DnfSpec) -> ClashGraph {
    let t = &spec.terms;
    let mut g = ClashGraph::edgeless(t.len());
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            if t[i].clashes(&t[j]) {
                g.add_edge(i + 1, j + 1).expect("distinct vertices inside [h]");
            }
        }
    }
    g
}

/// The anticlique complex of the term clash graph.
pub fn term_complex(spec: &DnfSpec) -> RowUnion<ABRow> {
    ab_algorithm(&term_clash_graph(spec))
}

fn face_meet(spec: &DnfSpec, u: &Face) -> TernaryRow {
    u.elements().iter().fold(TernaryRow::full(spec.n), |acc, &i| {
        acc.meet(&spec.terms[i - 1]).expect("faces are anticliques")
    })
}

fn dual_scan(spec: &DnfSpec, opts: ScanOptions, n: impl Fn(&TernaryRow) -> BigUint + Sync) -> Result<BigUint> {
    let spec = spec.deduplicated();
    if spec.terms.iter().any(TernaryRow::is_tautology) {
        return Ok(n(&TernaryRow::full(spec.n)));
    }
    let complex = term_complex(&spec);
    let count = |u: &Face| n(&face_meet(&spec, u));
    upgrade_b_scan_with(&complex, &count, SignConvention::Dual, opts)?
        .to_biguint()
        .ok_or_else(|| Error::invalid("inclusion-exclusion produced a negative count"))
}

pub fn model_count(spec: &DnfSpec) -> Result<BigUint> {
    model_count_with(spec, ScanOptions::default())
}

pub fn model_count_with(spec: &DnfSpec, opts: ScanOptions) -> Result<BigUint> {
    dual_scan(spec, opts, TernaryRow::cardinality)
}

/// Members of `ρ` with exactly `k` ones: `C(γ, k - β)` for `β ≤ k ≤ β + γ`.
pub fn card_k(rho: &TernaryRow, k: usize) -> BigUint {
    let beta = rho.ones_count();
    let gamma = rho.twos_count();
    if k < beta || k > beta + gamma {
        return BigUint::zero();
    }
    binomial(BigUint::from(gamma), BigUint::from(k - beta))
}

pub fn model_count_fixed_k(spec: &DnfSpec, k: usize) -> Result<BigUint> {
    model_count_fixed_k_with(spec, k, ScanOptions::default())
}

pub fn model_count_fixed_k_with(spec: &DnfSpec, k: usize, opts: ScanOptions) -> Result<BigUint> {
    if k > spec.n {
        return Ok(BigUint::zero());
    }
    dual_scan(spec, opts, |rho| card_k(rho, k))
}

/// Counts the models of a CNF given as clause rows: `1` marks a positive
/// literal, `0` a negated one.
pub fn cnf_model_count(n: usize, clauses: &[TernaryRow]) -> Result<BigUint> {
    let mut dual = Vec::with_capacity(clauses.len());
    for c in clauses {
        let flipped: Vec<Trit> = c
            .trits()
            .into_iter()
            .map(|t| match t {
                Trit::One => Trit::Zero,
                Trit::Zero => Trit::One,
                Trit::Two => Trit::Two,
            })
            .collect();
        dual.push(TernaryRow::from_trits(&flipped));
    }
    let dual = DnfSpec::new(n, dual)?;
    Ok((BigUint::one() << n) - model_count(&dual)?)
}

/// A random DNF with `h` terms, each having `n1` positive and `n0` negative
/// literals on distinct variables. Deterministic in `seed`.
pub fn random_dnf(n: usize, n1: usize, n0: usize, h: usize, seed: u64) -> Result<DnfSpec> {
    if n1 + n0 > n {
        return Err(Error::invalid(format!("n1 + n0 = {} exceeds n = {n}", n1 + n0)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms = (0..h)
        .map(|_| {
            let picked = sample(&mut rng, n, n1 + n0).into_vec();
            let mut row = TernaryRow::full(n);
            for (i, &v) in picked.iter().enumerate() {
                row.set_cell(v, if i < n1 { Trit::One } else { Trit::Zero });
            }
            row
        })
        .collect();
    DnfSpec::new(n, terms)
}

/// One line of the benchmark CSV.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BenchRecord {
    pub h: usize,
    pub n: usize,
    pub n1: usize,
    pub n0: usize,
    #[serde(rename = "anticliqueCount")]
    pub anticlique_count: String,
    #[serde(rename = "maxAnticlique")]
    pub max_anticlique: usize,
    pub millis: u128,
    #[serde(skip)]
    pub models: BigUint,
}

/// Generates one random DNF and times its model count.
/// The anticlique count excludes the empty set.
pub fn bench_dnf(h: usize, n: usize, n1: usize, n0: usize, seed: u64, opts: ScanOptions) -> Result<BenchRecord> {
    let spec = random_dnf(n, n1, n0, h, seed)?;
    let start = Instant::now();
    let models = model_count_with(&spec, opts)?;
    let millis = start.elapsed().as_millis();
    let complex = term_complex(&spec.deduplicated());
    let anticliques = complex.cardinality() - 1u8;
    Ok(BenchRecord {
        h,
        n,
        n1,
        n0,
        anticlique_count: anticliques.to_string(),
        max_anticlique: complex.max_face_size().unwrap_or(0),
        millis,
        models,
    })
}

/// The three-term DNF `x2 x̄5 x6 ∨ x1 x2 x̄3 ∨ x2 x̄3 x̄4` over six variables.
pub fn example_dnf() -> DnfSpec {
    let t = |s: &str| s.parse::<TernaryRow>().expect("valid row");
    DnfSpec::new(6, vec![t("2 1 2 2 0 1"), t("1 1 0 2 2 2"), t("2 1 0 0 2 2")]).expect("rows of length 6")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(spec: &DnfSpec) -> usize {
        (0..1u64 << spec.n)
            .filter(|&m| spec.evaluate(&Face::from_mask(spec.n, m)).unwrap())
            .count()
    }

    #[test]
    fn example_counts() {
        let s = example_dnf();
        assert_eq!(term_clash_graph(&s).edge_count(), 0);
        assert_eq!(model_count(&s).unwrap(), BigUint::from(17u8));
        let by_k: BigUint = (0..=6).map(|k| model_count_fixed_k(&s, k).unwrap()).sum();
        assert_eq!(by_k, BigUint::from(17u8));
        assert!(model_count_fixed_k(&s, 7).unwrap().is_zero());
    }

    #[test]
    fn single_and_clashing_terms() {
        let s = DnfSpec::new(5, vec!["1 0 2 2 1".parse().unwrap()]).unwrap();
        assert_eq!(model_count(&s).unwrap(), BigUint::from(4u8));
        let s = DnfSpec::new(1, vec!["1".parse().unwrap(), "0".parse().unwrap()]).unwrap();
        assert_eq!(term_clash_graph(&s).edges(), vec![(1, 2)]);
        assert_eq!(model_count(&s).unwrap(), BigUint::from(2u8));
        let empty = DnfSpec::new(4, vec![]).unwrap();
        assert!(model_count(&empty).unwrap().is_zero());
    }

    #[test]
    fn tautology_and_duplicates() {
        let s = DnfSpec::new(3, vec!["1 2 2".parse().unwrap(), "2 2 2".parse().unwrap()]).unwrap();
        assert_eq!(model_count(&s).unwrap(), BigUint::from(8u8));
        assert_eq!(model_count_fixed_k(&s, 2).unwrap(), BigUint::from(3u8));
        let r: TernaryRow = "1 0 2".parse().unwrap();
        let s = DnfSpec::new(3, vec![r.clone(), r.clone(), r]).unwrap();
        assert_eq!(s.deduplicated().h(), 1);
        assert_eq!(model_count(&s).unwrap(), BigUint::from(2u8));
    }

    #[test]
    fn card_k_bounds() {
        let r: TernaryRow = "1 1 0 2 2 2".parse().unwrap();
        assert!(card_k(&r, 1).is_zero());
        assert_eq!(card_k(&r, 2), BigUint::one());
        assert_eq!(card_k(&r, 3), BigUint::from(3u8));
        assert_eq!(card_k(&r, 5), BigUint::one());
        assert!(card_k(&r, 6).is_zero());
    }

    #[test]
    fn cnf_duality() {
        let clause: TernaryRow = "1 1".parse().unwrap();
        assert_eq!(cnf_model_count(2, &[clause]).unwrap(), BigUint::from(3u8));
        let flipped: Vec<TernaryRow> = ["2 0 2 2 1 0", "0 0 1 2 2 2", "2 0 1 1 2 2"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(cnf_model_count(6, &flipped).unwrap(), BigUint::from(47u8));
    }

    #[test]
    fn random_terms_have_requested_shape() {
        let s = random_dnf(50, 5, 4, 50, 7).unwrap();
        assert_eq!(s.h(), 50);
        assert!(s.terms().iter().all(|t| t.ones_count() == 5 && t.zeros_count() == 4));
        assert_eq!(s, random_dnf(50, 5, 4, 50, 7).unwrap());
        assert_ne!(s, random_dnf(50, 5, 4, 50, 8).unwrap());
        let full = random_dnf(6, 4, 2, 3, 1).unwrap();
        assert!(full.terms().iter().all(|t| t.twos_count() == 0));
        assert!(random_dnf(4, 3, 2, 1, 0).is_err());
    }

    #[test]
    fn small_random_against_truth_table() {
        for seed in 0..20 {
            let s = random_dnf(10, 2, 2, 8, seed).unwrap();
            assert_eq!(model_count(&s).unwrap(), BigUint::from(brute(&s)), "seed {seed}");
        }
    }

    #[test]
    fn dimacs_parsing() {
        let f = Formula::parse("c example\np dnf 6 3\n2 -5 6 0\n1 2 -3 0\n2 -3\n-4 0\n").unwrap();
        assert_eq!(f.to_dnf().unwrap(), example_dnf());
        assert_eq!(f.model_count(ScanOptions::default()).unwrap(), BigUint::from(17u8));
        let c = Formula::parse("p cnf 2 1\n1 2 0\n").unwrap();
        assert_eq!(c.model_count(ScanOptions::default()).unwrap(), BigUint::from(3u8));
        assert_eq!(
            c.model_count_fixed_k(1, ScanOptions::default()).unwrap(),
            BigUint::from(2u8)
        );
        let contradictory = Formula::parse("p dnf 2 2\n1 -1 0\n2 0\n").unwrap();
        assert_eq!(contradictory.to_dnf().unwrap().h(), 1);

        match Formula::parse("p dnf 3 1\n1 x 0\n") {
            Err(Error::Parse { at, .. }) => assert_eq!((at.line, at.column), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(Formula::parse("p dnf 3 2\n1 0\n").is_err());
        assert!(Formula::parse("p dnf 3 1\n4 0\n").is_err());
        assert!(Formula::parse("p dnf 3 1\n1 2\n").is_err());
        assert!(Formula::parse("1 2 0\n").is_err());
    }

    #[test]
    fn bench_record_shape() {
        let r = bench_dnf(10, 12, 2, 2, 3, ScanOptions::default()).unwrap();
        assert_eq!((r.h, r.n, r.n1, r.n0), (10, 12, 2, 2));
        assert!(r.max_anticlique >= 1);
        let s = random_dnf(12, 2, 2, 10, 3).unwrap();
        assert_eq!(r.models, BigUint::from(brute(&s)));
    }
}
