//! Determining Υ from ĤFK data and outside constraints.
//!
//! Regarding `CFK∞` as `ĤFK ⊗ F[U, U⁻¹]`, every ĤFK generator of even Maslov
//! grading has exactly one `U`-translate in Maslov grading 0, which sits at a
//! lattice point `(algebraic, Alexander)`. Near `t = 0`, Υ follows the point
//! `(0, τ)`; past that it follows the `F_t` line of some lattice point
//! `(i, j)`, which contributes `Υ(t) = −2i + (i − j)t`. [`pin_upsilon`]
//! enumerates the ways of switching between such lines and prunes the ones
//! ruled out by the supplied facts.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::cable::{cable_bounds, check_bounds, BoundPair, CableError, CableParams};
use crate::plfun::PlFunc;
use crate::rational::Rational;
use crate::staircase::torus_complex;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PinError {
    #[error("ĤFK table is empty")]
    EmptyTable,
    #[error("rank 0 entry at Alexander {alex}, Maslov {maslov}")]
    ZeroRank { alex: i64, maslov: i64 },
    #[error("Alexander {alex}, Maslov {maslov} given rank {rank} but its mirror has rank {mirror}")]
    SymmetryConflict { alex: i64, maslov: i64, rank: u32, mirror: u32 },
    #[error("inconsistent knot facts: {0}")]
    InvalidFacts(String),
    #[error("no Maslov-0 lattice point at (0, τ) = (0, {0})")]
    AnchorMissing(i64),
    #[error("every candidate was ruled out; the inputs are inconsistent")]
    NoSurvivors,
    #[error("expected a unique survivor, found {0}")]
    NotUnique(usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Cable(#[from] CableError),
    #[error("{0}")]
    Upstream(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HfkEntry {
    pub alex: i64,
    pub maslov: i64,
    pub rank: u32,
}

/// Ranks of ĤFK by `(Alexander, Maslov)`, closed under the symmetry
/// `ĤFK_d(i) = ĤFK_{d−2i}(−i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HfkJson", into = "HfkJson")]
pub struct HfkTable {
    ranks: BTreeMap<(i64, i64), u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HfkJson {
    entries: Vec<HfkEntry>,
}

impl TryFrom<HfkJson> for HfkTable {
    type Error = PinError;
    fn try_from(raw: HfkJson) -> Result<Self, PinError> {
        HfkTable::new(raw.entries)
    }
}

impl From<HfkTable> for HfkJson {
    fn from(t: HfkTable) -> Self {
        HfkJson { entries: t.entries().collect() }
    }
}

impl HfkTable {
    /// Repeated entries must agree; half of a symmetric table is enough.
    pub fn new(entries: impl IntoIterator<Item = HfkEntry>) -> Result<Self, PinError> {
        let mut ranks: BTreeMap<(i64, i64), u32> = BTreeMap::new();
        for e in entries {
            if e.rank == 0 {
                return Err(PinError::ZeroRank { alex: e.alex, maslov: e.maslov });
            }
            for (alex, maslov) in [(e.alex, e.maslov), (-e.alex, e.maslov - 2 * e.alex)] {
                match ranks.get(&(alex, maslov)) {
                    Some(&r) if r != e.rank => {
                        return Err(PinError::SymmetryConflict { alex: e.alex, maslov: e.maslov, rank: e.rank, mirror: r })
                    }
                    _ => {
                        ranks.insert((alex, maslov), e.rank);
                    }
                }
            }
        }
        if ranks.is_empty() {
            return Err(PinError::EmptyTable);
        }
        Ok(HfkTable { ranks })
    }

    pub fn entries(&self) -> impl Iterator<Item = HfkEntry> + '_ {
        self.ranks.iter().map(|(&(alex, maslov), &rank)| HfkEntry { alex, maslov, rank })
    }

    /// Largest Alexander grading with non-zero rank, which is the Seifert genus.
    pub fn top_alexander(&self) -> i64 {
        self.ranks.keys().map(|k| k.0).max().unwrap_or(0)
    }
}

/// Maslov-0 lattice points `(algebraic, Alexander)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSet {
    pub points: BTreeSet<(i64, i64)>,
}

impl LatticeSet {
    pub fn is_symmetric(&self) -> bool {
        self.points.iter().all(|&(i, j)| self.points.contains(&(j, i)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnotFacts {
    pub tau: i64,
    pub g3: i64,
    pub g4: i64,
}

impl KnotFacts {
    pub fn new(tau: i64, g3: i64, g4: i64) -> Result<Self, PinError> {
        let facts = KnotFacts { tau, g3, g4 };
        facts.validate()?;
        Ok(facts)
    }

    pub fn validate(&self) -> Result<(), PinError> {
        if self.tau.abs() > self.g4 || self.g4 > self.g3 {
            return Err(PinError::InvalidFacts(format!(
                "need |τ| ≤ g4 ≤ g3, got τ = {}, g4 = {}, g3 = {}",
                self.tau, self.g4, self.g3
            )));
        }
        Ok(())
    }
}

/// `(i, m)` with `m` even lands at `(−m/2, i − m/2)`; odd `m` gives nothing.
pub fn lattice_from_hfk(h: &HfkTable) -> LatticeSet {
    let points = h
        .ranks
        .keys()
        .filter(|(_, m)| m % 2 == 0)
        .map(|&(i, m)| (-m / 2, i - m / 2))
        .collect();
    LatticeSet { points }
}

fn level(point: (i64, i64), t: Rational) -> Rational {
    let (i, j) = point;
    t.half() * (j - i) + i
}

/// `Υ` along the `F_t` line of `point`.
fn piece_value(point: (i64, i64), t: Rational) -> Rational {
    -level(point, t) * 2
}

/// Every `t ∈ (0, 1)` at which some pair of lattice points lies on a common
/// line of slope `1 − 2/t`. This is the pairwise reading; it is a superset of
/// [`candidate_singularities`].
pub fn pair_times(ls: &LatticeSet) -> BTreeSet<Rational> {
    let pts: Vec<(i64, i64)> = ls.points.iter().copied().collect();
    let mut out = BTreeSet::new();
    for (a, &(i, j)) in pts.iter().enumerate() {
        for &(i2, j2) in &pts[a + 1..] {
            // level equality: i + t(j − i)/2 = i2 + t(j2 − i2)/2
            let dslope = (j2 - i2) - (j - i);
            if dslope == 0 {
                continue;
            }
            let t = Rational::new(2 * (i - i2) as i128, dslope as i128);
            if t.is_positive() && t < Rational::ONE {
                out.insert(t);
            }
        }
    }
    out
}

/// Times in `(0, 1)` at which the lowest `F_t` level over the lattice is
/// attained by two or more points.
pub fn candidate_singularities(ls: &LatticeSet) -> BTreeSet<Rational> {
    pair_times(ls)
        .into_iter()
        .filter(|&t| {
            let min = ls.points.iter().map(|&p| level(p, t)).min();
            ls.points.iter().filter(|&&p| Some(level(p, t)) == min).count() >= 2
        })
        .collect()
}

/// The lattice points `Υ` follows on `[0, 1]`, with switching times.
#[derive(Debug, Clone)]
struct Path {
    pieces: Vec<(Rational, (i64, i64))>,
}

impl Path {
    fn to_plfunc(&self) -> PlFunc {
        let mut pts = Vec::new();
        for &(t, p) in &self.pieces {
            pts.push((t, piece_value(p, t)));
        }
        let last = self.pieces.last().unwrap().1;
        pts.push((Rational::ONE, piece_value(last, Rational::ONE)));
        let mirrored: Vec<_> = pts.iter().rev().skip(1).map(|&(t, v)| (Rational::TWO - t, v)).collect();
        pts.extend(mirrored);
        PlFunc::from_points(pts).expect("pieces start at strictly increasing times")
    }
}

fn within_genus(point: (i64, i64), from: Rational, to: Rational, g4: i64) -> bool {
    [from, to].into_iter().all(|t| piece_value(point, t).abs() <= t * g4)
}

/// Every `Υ` on `[0, 2]` consistent with the lattice, the facts and, when
/// given, the cabling bounds. The result is sorted and free of duplicates.
///
/// The search starts on the line of `(0, τ)` and, at each candidate
/// singularity in increasing order, either stays or moves to another lattice
/// point on the current level line. A branch is dropped if
///
/// * its slope is not `i − j` for a lattice point on the active line,
/// * `(t/2)ΔΥ′` is not an integer at a switch,
/// * `|Υ(t)| > t·g4` somewhere on `[0, 1]`, or
/// * it leaves the cabling bounds.
pub fn pin_upsilon(ls: &LatticeSet, facts: &KnotFacts, bounds: Option<&BoundPair>) -> Result<Vec<PlFunc>, PinError> {
    facts.validate()?;
    let anchor = (0, facts.tau);
    if !ls.points.contains(&anchor) {
        return Err(PinError::AnchorMissing(facts.tau));
    }
    let times: Vec<Rational> = candidate_singularities(ls).into_iter().collect();
    let mut finished: Vec<Path> = Vec::new();
    let mut stack = vec![(Path { pieces: vec![(Rational::ZERO, anchor)] }, 0usize)];
    while let Some((path, k)) = stack.pop() {
        let (start, active) = *path.pieces.last().unwrap();
        let end = times.get(k).copied().unwrap_or(Rational::ONE);
        if !within_genus(active, start, end, facts.g4) {
            continue;
        }
        if k == times.len() {
            finished.push(path);
            continue;
        }
        let t = times[k];
        stack.push((path.clone(), k + 1));
        let here = level(active, t);
        for &next in &ls.points {
            if next == active || level(next, t) != here {
                continue;
            }
            let old_slope = active.0 - active.1;
            let new_slope = next.0 - next.1;
            if !(t.half() * (new_slope - old_slope)).is_integer() {
                continue;
            }
            let mut p = path.clone();
            p.pieces.push((t, next));
            stack.push((p, k + 1));
        }
    }
    let mut survivors = BTreeSet::new();
    for path in finished {
        let f = path.to_plfunc();
        if let Some(b) = bounds {
            if !check_bounds(&f, b)?.is_pass() {
                continue;
            }
        }
        survivors.insert(f);
    }
    if survivors.is_empty() {
        return Err(PinError::NoSurvivors);
    }
    Ok(survivors.into_iter().collect())
}

/// ĤFK of `(T(2,−3))_{2,2n+1}` in non-negative Alexander gradings.
pub fn t2m3_cable_table(n: i64) -> Result<HfkTable, PinError> {
    if n < 1 {
        return Err(PinError::Precondition(format!("n = {n} must be positive")));
    }
    let mut entries = vec![(n + 2, 2), (n + 1, 1), (n, 1), (n, 0), (n - 1, 0), (n - 1, -1)];
    entries.extend((0..=n - 2).map(|i| (i, i - n)));
    HfkTable::new(entries.into_iter().map(|(alex, maslov)| HfkEntry { alex, maslov, rank: 1 }))
}

/// `τ = n − 1` and `g₃ = n + 2`; `g₄` is bounded by `g₃`.
pub fn t2m3_cable_facts(n: i64) -> KnotFacts {
    KnotFacts { tau: n - 1, g3: n + 2, g4: n + 2 }
}

/// Cabling bounds from `Υ_{T(2,−3)}` with `p = 2`, `q = 2n + 1`.
pub fn t2m3_cable_bounds(n: i64) -> Result<BoundPair, PinError> {
    let ups = torus_complex(2, -3)
        .map_err(|e| PinError::Upstream(e.to_string()))?
        .upsilon()
        .map_err(|e| PinError::Upstream(e.to_string()))?;
    Ok(cable_bounds(&ups, CableParams::new(2, 2 * n + 1)?)?)
}

/// All survivors for `(T(2,−3))_{2,2n+1}`, with or without the cabling bounds.
pub fn pin_t2m3_cable(n: i64, with_bounds: bool) -> Result<Vec<PlFunc>, PinError> {
    let ls = lattice_from_hfk(&t2m3_cable_table(n)?);
    let bounds = if with_bounds { Some(t2m3_cable_bounds(n)?) } else { None };
    pin_upsilon(&ls, &t2m3_cable_facts(n), bounds.as_ref())
}

/// `Υ` of `(T(2,−3))_{2,2n+1}` for `n ≥ 8`, where the survivor is unique.
pub fn pin_family_t2m3_cables(n: i64) -> Result<PlFunc, PinError> {
    if n < 8 {
        return Err(PinError::Precondition(format!("n = {n} < 8")));
    }
    let mut survivors = pin_t2m3_cable(n, true)?;
    if survivors.len() != 1 {
        return Err(PinError::NotUnique(survivors.len()));
    }
    Ok(survivors.pop().unwrap())
}
