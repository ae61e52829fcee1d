//! Exact counting by inclusion-exclusion over a pre-filtered index family.
//!
//! Inclusion-exclusion sums a term `N(U)` for every subset `U` of the
//! constraints. When the subsets with `N(U) = 0` form an up-closed family
//! generated by a few minimal sets, the remaining "relevant" subsets form a
//! simplicial complex that this crate packs into disjoint wildcard rows
//! ([`rows`], [`exclusion`]). The alternating sum is then evaluated either
//! face by face or a whole row at a time ([`engine`], [`facecount`]).
//!
//! Three applications are included: permutations avoiding blocks or
//! disjunctive position constraints ([`perm`]), bounded integer compositions
//! ([`comp`]) and DNF/CNF model counting ([`dnf`]). Every application has a
//! brute-force counterpart in [`oracles`].

pub mod cli;
pub mod comp;
pub mod dnf;
pub mod engine;
pub mod error;
pub mod exclusion;
pub mod facecount;
pub mod oracles;
mod parse;
pub mod perm;
pub mod rows;

pub use error::{Error, Result};
pub use rows::{ABRow, Face, NRow, Row, RowUnion, TernaryRow};
