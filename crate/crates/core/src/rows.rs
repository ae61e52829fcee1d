//! Multivalued rows and the set systems they stand for.
//!
//! A row of length `h` describes a family of subsets of `[h] = {1, .., h}`.
//! Cells take the values
//!
//! * `0` / `1`: the position is fixed out of / into every member,
//! * `2`: don't care,
//! * `n`-bubble: a group of at least two positions that must not be all
//!   ones (at least one `0`),
//! * `a` / `b`: an anti-implication wildcard. If the `a` position is `1`
//!   then every `b` position of the same wildcard is `0`.
//!
//! [`NRow`] carries `{0,1,2,n}` cells, [`ABRow`] carries `{0,1,2,a,b}`
//! cells, and [`TernaryRow`] is the plain `{0,1,2}` interval used for DNF
//! terms. Rows are immutable values; every transform returns a new row.
//!
//! Cell indices inside rows are 0-based. Set-level objects ([`Face`]) use the
//! 1-based elements of `[h]`.

use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// A subset `U` of `[h]`, stored as its sorted 1-based elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    h: usize,
    elements: Vec<usize>,
}

impl Face {
    pub fn new(h: usize, elements: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut elements: Vec<usize> = elements.into_iter().collect();
        elements.sort_unstable();
        if let Some(&bad) = elements.iter().find(|&&e| e == 0 || e > h) {
            return Err(Error::invalid(format!("element {bad} outside 1..={h}")));
        }
        if elements.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("duplicate element in face"));
        }
        Ok(Face { h, elements })
    }

    pub fn empty(h: usize) -> Self {
        Face {
            h,
            elements: Vec::new(),
        }
    }

    /// Builds a face from 0-based positions; the caller guarantees they are
    /// distinct and below `h`.
    pub(crate) fn from_positions(h: usize, mut positions: Vec<usize>) -> Self {
        positions.sort_unstable();
        for p in positions.iter_mut() {
            *p += 1;
        }
        Face { h, elements: positions }
    }

    /// Bit `i - 1` of `mask` set means `i` is an element. Requires `h <= 64`.
    pub fn from_mask(h: usize, mask: u64) -> Self {
        debug_assert!(h <= 64);
        Face {
            h,
            elements: (0..h).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect(),
        }
    }

    pub fn to_mask(&self) -> Option<u64> {
        if self.h > 64 {
            return None;
        }
        Some(self.elements.iter().fold(0u64, |m, &e| m | 1 << (e - 1)))
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, element: usize) -> bool {
        self.elements.binary_search(&element).is_ok()
    }

    pub fn is_subset(&self, other: &Face) -> bool {
        self.elements.iter().all(|&e| other.contains(e))
    }

    /// Membership vector indexed by 0-based position.
    pub(crate) fn indicator(&self) -> Vec<bool> {
        let mut v = vec![false; self.h];
        for &e in &self.elements {
            v[e - 1] = true;
        }
        v
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Splits `(2,1,2)`, `2 1 2` or `2,1,2` into cell tokens.
fn row_tokens(s: &str) -> Vec<&str> {
    s.trim()
        .trim_start_matches('(')
        .trim_end_matches(')')
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .collect()
}

/// An independent unit of choice inside a row. Every member of a row is the
/// row's fixed ones plus one local choice per group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Group {
    /// A single don't-care cell.
    Free(usize),
    /// Positions that must not be all ones.
    Bubble(Vec<usize>),
    /// If `a` is chosen then none of `b` is.
    Wildcard { a: usize, b: Vec<usize> },
}

impl Group {
    pub fn local_count(&self) -> BigUint {
        match self {
            Group::Free(_) => BigUint::from(2u8),
            Group::Bubble(s) => (BigUint::one() << s.len()) - 1u8,
            Group::Wildcard { b, .. } => (BigUint::one() << b.len()) + 1u8,
        }
    }

    fn width(&self) -> usize {
        match self {
            Group::Free(_) => 1,
            Group::Bubble(s) => s.len(),
            Group::Wildcard { b, .. } => b.len() + 1,
        }
    }

    /// Advances the local state; returns `true` on wrap-around (carry).
    ///
    /// Bubble states count in binary with the first position as the low bit
    /// and stop short of all ones. Wildcard states run through every `b`
    /// subset with `a = 0`, then `a = 1` with all `b` cleared. The `a` bit is
    /// stored last.
    fn advance(&self, state: &mut [bool]) -> bool {
        match self {
            Group::Free(_) => {
                state[0] = !state[0];
                !state[0]
            }
            Group::Bubble(_) => {
                binary_increment(state);
                if state.iter().all(|&b| b) {
                    state.iter_mut().for_each(|b| *b = false);
                    true
                } else {
                    false
                }
            }
            Group::Wildcard { .. } => {
                let (bits, a) = state.split_at_mut(state.len() - 1);
                if a[0] {
                    a[0] = false;
                    true
                } else {
                    if binary_increment(bits) {
                        a[0] = true;
                    }
                    false
                }
            }
        }
    }

    fn selected(&self, state: &[bool], out: &mut Vec<usize>) {
        match self {
            Group::Free(p) => {
                if state[0] {
                    out.push(*p)
                }
            }
            Group::Bubble(s) => out.extend(s.iter().zip(state).filter(|(_, &on)| on).map(|(&p, _)| p)),
            Group::Wildcard { a, b } => {
                out.extend(b.iter().zip(state).filter(|(_, &on)| on).map(|(&p, _)| p));
                if state[b.len()] {
                    out.push(*a);
                }
            }
        }
    }

    /// Largest number of positions a single local choice can select.
    pub fn max_selected(&self) -> usize {
        match self {
            Group::Free(_) => 1,
            Group::Bubble(s) => s.len() - 1,
            Group::Wildcard { b, .. } => b.len().max(1),
        }
    }
}

/// Binary increment with `bits[0]` as the low bit; returns `true` on overflow.
fn binary_increment(bits: &mut [bool]) -> bool {
    for b in bits.iter_mut() {
        if *b {
            *b = false;
        } else {
            *b = true;
            return false;
        }
    }
    true
}

/// Behaviour shared by the wildcard row types.
///
/// Every represented family is closed under dropping elements that are not
/// fixed ones. [`check_disjoint`] relies on this.
pub trait Row: Clone + fmt::Display + Send + Sync {
    fn h(&self) -> usize;

    /// 0-based positions fixed to `1`.
    fn fixed_ones(&self) -> Vec<usize>;

    fn groups(&self) -> Vec<Group>;

    fn contains(&self, u: &Face) -> Result<bool>;

    fn cardinality(&self) -> BigUint {
        self.groups()
            .iter()
            .fold(BigUint::one(), |acc, g| acc * g.local_count())
    }

    /// Streams the members, each exactly once. Don't-care cells are expanded
    /// first in position order, then bubbles, then wildcards.
    fn members(&self) -> Members {
        Members::new(self.h(), self.fixed_ones(), self.groups())
    }

    fn max_face_size(&self) -> usize {
        self.fixed_ones().len() + self.groups().iter().map(Group::max_selected).sum::<usize>()
    }
}

/// Odometer over the local states of a row's groups.
pub struct Members {
    h: usize,
    ones: Vec<usize>,
    groups: Vec<Group>,
    state: Vec<Vec<bool>>,
    done: bool,
}

impl Members {
    fn new(h: usize, ones: Vec<usize>, groups: Vec<Group>) -> Self {
        let state = groups.iter().map(|g| vec![false; g.width()]).collect();
        Members {
            h,
            ones,
            groups,
            state,
            done: false,
        }
    }
}

impl Iterator for Members {
    type Item = Face;

    fn next(&mut self) -> Option<Face> {
        if self.done {
            return None;
        }
        let mut positions = self.ones.clone();
        for (g, s) in self.groups.iter().zip(&self.state) {
            g.selected(s, &mut positions);
        }
        let face = Face::from_positions(self.h, positions);

        self.done = true;
        for (g, s) in self.groups.iter().zip(self.state.iter_mut()) {
            if !g.advance(s) {
                self.done = false;
                break;
            }
        }
        Some(face)
    }
}

fn check_len(expected: usize, u: &Face) -> Result<()> {
    if u.h() != expected {
        return Err(Error::LengthMismatch {
            expected,
            actual: u.h(),
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// {0,1,2,n} rows

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NCell {
    Zero,
    One,
    Two,
    /// Member of the bubble with this index.
    Bubble(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NRow {
    cells: Vec<NCell>,
    bubbles: Vec<Vec<usize>>,
}

impl NRow {
    /// The all-`2` row: the full powerset of `[h]`.
    pub fn full(h: usize) -> Self {
        NRow {
            cells: vec![NCell::Two; h],
            bubbles: Vec::new(),
        }
    }

    /// Builds a row from raw cells. Bubble labels are renumbered in order of
    /// first appearance, and a bubble with a single position becomes a `0`.
    pub fn new(mut cells: Vec<NCell>) -> Self {
        let mut labels: Vec<usize> = Vec::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        for (pos, c) in cells.iter().enumerate() {
            if let NCell::Bubble(l) = *c {
                match labels.iter().position(|&x| x == l) {
                    Some(i) => members[i].push(pos),
                    None => {
                        labels.push(l);
                        members.push(vec![pos]);
                    }
                }
            }
        }
        let mut bubbles = Vec::new();
        for m in members {
            if m.len() == 1 {
                cells[m[0]] = NCell::Zero;
            } else {
                let id = bubbles.len();
                for &p in &m {
                    cells[p] = NCell::Bubble(id);
                }
                bubbles.push(m);
            }
        }
        NRow { cells, bubbles }
    }

    pub fn cells(&self) -> &[NCell] {
        &self.cells
    }

    pub(crate) fn bubble_positions(&self) -> &[Vec<usize>] {
        &self.bubbles
    }

    pub fn bubbles(&self) -> Vec<Face> {
        let h = self.h();
        self.bubbles
            .iter()
            .map(|b| Face::from_positions(h, b.clone()))
            .collect()
    }

    fn positions_of(&self, want: NCell) -> Face {
        let pos = (0..self.cells.len()).filter(|&i| self.cells[i] == want).collect();
        Face::from_positions(self.h(), pos)
    }

    pub fn ones(&self) -> Face {
        self.positions_of(NCell::One)
    }

    pub fn zeros(&self) -> Face {
        self.positions_of(NCell::Zero)
    }

    pub fn twos(&self) -> Face {
        self.positions_of(NCell::Two)
    }
}

impl Row for NRow {
    fn h(&self) -> usize {
        self.cells.len()
    }

    fn fixed_ones(&self) -> Vec<usize> {
        (0..self.cells.len()).filter(|&i| self.cells[i] == NCell::One).collect()
    }

    fn groups(&self) -> Vec<Group> {
        let mut groups: Vec<Group> = (0..self.cells.len())
            .filter(|&i| self.cells[i] == NCell::Two)
            .map(Group::Free)
            .collect();
        groups.extend(self.bubbles.iter().cloned().map(Group::Bubble));
        groups
    }

    fn contains(&self, u: &Face) -> Result<bool> {
        check_len(self.h(), u)?;
        let ind = u.indicator();
        let fixed_ok = self.cells.iter().zip(&ind).all(|(c, &x)| match c {
            NCell::Zero => !x,
            NCell::One => x,
            _ => true,
        });
        Ok(fixed_ok && self.bubbles.iter().all(|b| b.iter().any(|&p| !ind[p])))
    }
}

impl fmt::Display for NRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.cells.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match c {
                NCell::Zero => write!(f, "0")?,
                NCell::One => write!(f, "1")?,
                NCell::Two => write!(f, "2")?,
                NCell::Bubble(b) => write!(f, "n{}", b + 1)?,
            }
        }
        Ok(())
    }
}

impl FromStr for NRow {
    type Err = Error;

    /// Accepts `0 1 2 n1 n2` tokens; a bare `n` belongs to bubble 1.
    fn from_str(s: &str) -> Result<Self> {
        let cells = row_tokens(s)
            .into_iter()
            .map(|t| match t {
                "0" => Ok(NCell::Zero),
                "1" => Ok(NCell::One),
                "2" => Ok(NCell::Two),
                "n" => Ok(NCell::Bubble(1)),
                _ => t
                    .strip_prefix('n')
                    .and_then(|d| d.parse::<usize>().ok())
                    .map(NCell::Bubble)
                    .ok_or_else(|| Error::invalid(format!("bad n-row token `{t}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NRow::new(cells))
    }
}

// ---------------------------------------------------------------------------
// {0,1,2,a,b} rows

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AbCell {
    Zero,
    One,
    Two,
    /// The `a` position of the wildcard with this index.
    A(usize),
    /// A `b` position of the wildcard with this index.
    B(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Wildcard {
    a: usize,
    b: Vec<usize>,
}

impl Wildcard {
    /// 0-based position of the `a` cell.
    pub fn a(&self) -> usize {
        self.a
    }

    /// 0-based positions of the `b` cells.
    pub fn b(&self) -> &[usize] {
        &self.b
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ABRow {
    cells: Vec<AbCell>,
    wildcards: Vec<Wildcard>,
}

impl ABRow {
    /// Builds a row from raw cells. Every label must occur exactly once as
    /// `A` and at least once as `B`. Labels are renumbered by the position of
    /// their `a` cell.
    pub fn new(mut cells: Vec<AbCell>) -> Result<Self> {
        let mut labels: Vec<usize> = Vec::new();
        let mut a_pos: Vec<Option<usize>> = Vec::new();
        let mut b_pos: Vec<Vec<usize>> = Vec::new();
        for (pos, c) in cells.iter().enumerate() {
            let (l, is_a) = match *c {
                AbCell::A(l) => (l, true),
                AbCell::B(l) => (l, false),
                _ => continue,
            };
            let i = labels.iter().position(|&x| x == l).unwrap_or_else(|| {
                labels.push(l);
                a_pos.push(None);
                b_pos.push(Vec::new());
                labels.len() - 1
            });
            if is_a {
                if a_pos[i].replace(pos).is_some() {
                    return Err(Error::invalid(format!("wildcard {l} has two a cells")));
                }
            } else {
                b_pos[i].push(pos);
            }
        }
        let mut order: Vec<usize> = (0..labels.len()).collect();
        let mut wildcards = Vec::new();
        for i in 0..labels.len() {
            let a = a_pos[i].ok_or_else(|| Error::invalid(format!("wildcard {} has no a cell", labels[i])))?;
            if b_pos[i].is_empty() {
                return Err(Error::invalid(format!("wildcard {} has no b cells", labels[i])));
            }
            wildcards.push(Wildcard {
                a,
                b: std::mem::take(&mut b_pos[i]),
            });
        }
        order.sort_by_key(|&i| wildcards[i].a);
        let wildcards: Vec<Wildcard> = order.into_iter().map(|i| wildcards[i].clone()).collect();
        for (id, w) in wildcards.iter().enumerate() {
            cells[w.a] = AbCell::A(id);
            for &p in &w.b {
                cells[p] = AbCell::B(id);
            }
        }
        Ok(ABRow { cells, wildcards })
    }

    /// Assembles a row from fixed cells and wildcards, labelling the
    /// wildcards by the position of their `a` cell.
    pub(crate) fn from_parts(mut cells: Vec<AbCell>, mut wildcards: Vec<Wildcard>) -> Self {
        wildcards.sort_by_key(|w| w.a);
        for (id, w) in wildcards.iter().enumerate() {
            cells[w.a] = AbCell::A(id);
            for &p in &w.b {
                cells[p] = AbCell::B(id);
            }
        }
        ABRow { cells, wildcards }
    }

    pub(crate) fn wildcard(a: usize, b: Vec<usize>) -> Wildcard {
        Wildcard { a, b }
    }

    pub fn cells(&self) -> &[AbCell] {
        &self.cells
    }

    pub fn wildcards(&self) -> &[Wildcard] {
        &self.wildcards
    }
}

impl Row for ABRow {
    fn h(&self) -> usize {
        self.cells.len()
    }

    fn fixed_ones(&self) -> Vec<usize> {
        (0..self.cells.len())
            .filter(|&i| self.cells[i] == AbCell::One)
            .collect()
    }

    fn groups(&self) -> Vec<Group> {
        let mut groups: Vec<Group> = (0..self.cells.len())
            .filter(|&i| self.cells[i] == AbCell::Two)
            .map(Group::Free)
            .collect();
        groups.extend(
            self.wildcards
                .iter()
                .map(|w| Group::Wildcard { a: w.a, b: w.b.clone() }),
        );
        groups
    }

    fn contains(&self, u: &Face) -> Result<bool> {
        check_len(self.h(), u)?;
        let ind = u.indicator();
        let fixed_ok = self.cells.iter().zip(&ind).all(|(c, &x)| match c {
            AbCell::Zero => !x,
            AbCell::One => x,
            _ => true,
        });
        Ok(fixed_ok && self.wildcards.iter().all(|w| !ind[w.a] || w.b.iter().all(|&p| !ind[p])))
    }
}

impl fmt::Display for ABRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.cells.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match c {
                AbCell::Zero => write!(f, "0")?,
                AbCell::One => write!(f, "1")?,
                AbCell::Two => write!(f, "2")?,
                AbCell::A(w) => write!(f, "a{}", w + 1)?,
                AbCell::B(w) => write!(f, "b{}", w + 1)?,
            }
        }
        Ok(())
    }
}

impl FromStr for ABRow {
    type Err = Error;

    /// Accepts `0 1 2 aK bK` tokens; bare `a`/`b` belong to wildcard 1.
    fn from_str(s: &str) -> Result<Self> {
        let cells = row_tokens(s)
            .into_iter()
            .map(|t| {
                let labeled = |prefix: char, make: fn(usize) -> AbCell| {
                    t.strip_prefix(prefix).map(|d| {
                        if d.is_empty() {
                            Some(make(1))
                        } else {
                            d.parse::<usize>().ok().map(make)
                        }
                    })
                };
                match t {
                    "0" => Some(AbCell::Zero),
                    "1" => Some(AbCell::One),
                    "2" => Some(AbCell::Two),
                    _ => labeled('a', AbCell::A).or_else(|| labeled('b', AbCell::B)).flatten(),
                }
                .ok_or_else(|| Error::invalid(format!("bad ab-row token `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        ABRow::new(cells)
    }
}

/// Rewrites an ab-row as disjoint plain rows by branching every wildcard on
/// `a = 0` (its `b` cells become `2`) versus `a = 1` (its `b` cells become
/// `0`). The `a = 0` branch comes first.
pub fn abrow_expand(r: &ABRow) -> Vec<NRow> {
    let base: Vec<NCell> = r
        .cells
        .iter()
        .map(|c| match c {
            AbCell::Zero => NCell::Zero,
            AbCell::One => NCell::One,
            _ => NCell::Two,
        })
        .collect();
    let mut out = vec![base];
    for w in &r.wildcards {
        let mut next = Vec::with_capacity(out.len() * 2);
        for cells in out {
            let mut released = cells.clone();
            released[w.a] = NCell::Zero;
            next.push(released);
            let mut forced = cells;
            forced[w.a] = NCell::One;
            for &p in &w.b {
                forced[p] = NCell::Zero;
            }
            next.push(forced);
        }
        out = next;
    }
    out.into_iter().map(NRow::new).collect()
}

// ---------------------------------------------------------------------------
// {0,1,2} rows

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Trit {
    Zero,
    One,
    Two,
}

/// A Boolean interval: every bitstring that agrees with the fixed cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TernaryRow {
    len: usize,
    ones: FixedBitSet,
    zeros: FixedBitSet,
}

impl TernaryRow {
    pub fn full(len: usize) -> Self {
        TernaryRow {
            len,
            ones: FixedBitSet::with_capacity(len),
            zeros: FixedBitSet::with_capacity(len),
        }
    }

    pub fn from_trits(trits: &[Trit]) -> Self {
        let mut r = TernaryRow::full(trits.len());
        for (i, &t) in trits.iter().enumerate() {
            r.set_cell(i, t);
        }
        r
    }

    pub(crate) fn set_cell(&mut self, i: usize, t: Trit) {
        self.ones.set(i, t == Trit::One);
        self.zeros.set(i, t == Trit::Zero);
    }

    /// Returns a copy with cell `i` (0-based) replaced.
    pub fn with_cell(&self, i: usize, t: Trit) -> Self {
        let mut r = self.clone();
        r.set_cell(i, t);
        r
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> Trit {
        if self.ones.contains(i) {
            Trit::One
        } else if self.zeros.contains(i) {
            Trit::Zero
        } else {
            Trit::Two
        }
    }

    pub fn trits(&self) -> Vec<Trit> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    pub fn ones_count(&self) -> usize {
        self.ones.count_ones(..)
    }

    pub fn zeros_count(&self) -> usize {
        self.zeros.count_ones(..)
    }

    pub fn twos_count(&self) -> usize {
        self.len - self.ones_count() - self.zeros_count()
    }

    pub fn ones(&self) -> Face {
        Face::from_positions(self.len, self.ones.ones().collect())
    }

    pub fn zeros(&self) -> Face {
        Face::from_positions(self.len, self.zeros.ones().collect())
    }

    pub fn twos(&self) -> Face {
        Face::from_positions(self.len, (0..self.len).filter(|&i| self.get(i) == Trit::Two).collect())
    }

    pub fn is_tautology(&self) -> bool {
        self.ones.is_clear() && self.zeros.is_clear()
    }

    /// `2^(number of 2 cells)`.
    pub fn cardinality(&self) -> BigUint {
        BigUint::one() << self.twos_count()
    }

    pub fn contains(&self, u: &Face) -> Result<bool> {
        check_len(self.len, u)?;
        let ind = u.indicator();
        Ok(self.ones.ones().all(|i| ind[i]) && self.zeros.ones().all(|i| !ind[i]))
    }

    /// True iff some position is `1` in one row and `0` in the other.
    pub fn clashes(&self, other: &TernaryRow) -> bool {
        !self.ones.is_disjoint(&other.zeros) || !self.zeros.is_disjoint(&other.ones)
    }

    /// Componentwise meet without the length check; `None` on a clash.
    pub(crate) fn meet(&self, other: &TernaryRow) -> Option<TernaryRow> {
        if self.clashes(other) {
            return None;
        }
        let mut ones = self.ones.clone();
        ones.union_with(&other.ones);
        let mut zeros = self.zeros.clone();
        zeros.union_with(&other.zeros);
        Some(TernaryRow {
            len: self.len,
            ones,
            zeros,
        })
    }
}

/// Intersection of two intervals; `Ok(None)` is the empty set.
pub fn ternary_intersect(p: &TernaryRow, q: &TernaryRow) -> Result<Option<TernaryRow>> {
    if p.len != q.len {
        return Err(Error::LengthMismatch {
            expected: p.len,
            actual: q.len,
        });
    }
    Ok(p.meet(q))
}

impl fmt::Display for TernaryRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            if i > 0 {
                write!(f, " ")?;
            }
            let c = match self.get(i) {
                Trit::Zero => '0',
                Trit::One => '1',
                Trit::Two => '2',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for TernaryRow {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trits = row_tokens(s)
            .into_iter()
            .map(|t| match t {
                "0" => Ok(Trit::Zero),
                "1" => Ok(Trit::One),
                "2" => Ok(Trit::Two),
                _ => Err(Error::invalid(format!("bad ternary token `{t}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TernaryRow::from_trits(&trits))
    }
}

// ---------------------------------------------------------------------------
// unions

/// A family given as a union of rows that are meant to be pairwise disjoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowUnion<R> {
    h: usize,
    rows: Vec<R>,
}

impl<R: Row> RowUnion<R> {
    pub fn new(h: usize, rows: Vec<R>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.h() != h) {
            return Err(Error::LengthMismatch {
                expected: h,
                actual: r.h(),
            });
        }
        Ok(RowUnion { h, rows })
    }

    pub fn empty(h: usize) -> Self {
        RowUnion { h, rows: Vec::new() }
    }

    pub(crate) fn from_rows_unchecked(h: usize, rows: Vec<R>) -> Self {
        RowUnion { h, rows }
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn rows(&self) -> &[R] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Size of the represented family, assuming disjointness.
    pub fn cardinality(&self) -> BigUint {
        self.rows.iter().map(Row::cardinality).sum()
    }

    pub fn contains(&self, u: &Face) -> Result<bool> {
        for r in &self.rows {
            if r.contains(u)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn members(&self) -> impl Iterator<Item = Face> + '_ {
        self.rows.iter().flat_map(Row::members)
    }

    pub fn max_face_size(&self) -> Option<usize> {
        self.rows.iter().map(Row::max_face_size).max()
    }
}

impl<R: Row> fmt::Display for RowUnion<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Two rows share a member iff the union of their fixed ones is in both:
/// each family is closed under dropping elements that are not fixed ones.
pub fn rows_intersect<R: Row, S: Row>(r: &R, s: &S) -> bool {
    let mut ones = r.fixed_ones();
    ones.extend(s.fixed_ones());
    ones.sort_unstable();
    ones.dedup();
    let witness = Face::from_positions(r.h(), ones);
    r.contains(&witness).unwrap_or(false) && s.contains(&witness).unwrap_or(false)
}

pub fn check_disjoint<R: Row>(u: &RowUnion<R>) -> bool {
    let rows = u.rows();
    (0..rows.len()).all(|i| (i + 1..rows.len()).all(|j| !rows_intersect(&rows[i], &rows[j])))
}

/// Exhaustive variant of [`check_disjoint`] for `h <= 20`.
pub fn check_disjoint_brute<R: Row>(u: &RowUnion<R>) -> Result<bool> {
    if u.h() > 20 {
        return Err(Error::BudgetExceeded(format!("h = {} > 20", u.h())));
    }
    for mask in 0u64..1 << u.h() {
        let face = Face::from_mask(u.h(), mask);
        let mut hits = 0;
        for r in u.rows() {
            if r.contains(&face)? {
                hits += 1;
                if hits > 1 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
