//! First singularities and the triangular-matrix certificate for a family of
//! knots spanning a free summand of the concordance group.
//!
//! A knot `K` with first singularity `ξ` contributes the homomorphism
//! `K ↦ (ξ/2)·ΔΥ′_K(ξ)`. If the knots of a family have first singularities in
//! pairwise disjoint intervals and each slope change there equals one, the
//! evaluation matrix (rows: homomorphisms, columns: knots, both by increasing
//! `ξ`) is lower triangular with unit diagonal, so the family is independent
//! and spans a summand.

use serde::{Deserialize, Serialize};

use crate::cable::lower_bound_on;
use crate::certificate::Certificate;
use crate::pin::KnotFacts;
use crate::plfun::{PlError, PlFunc};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SummandError {
    #[error("p must be at least 2, got {0}")]
    InvalidP(i64),
    #[error("n must be positive, got {0}")]
    InvalidN(i64),
    #[error("τ must be non-negative, got {0}")]
    NegativeTau(i64),
    #[error("p^n overflows")]
    Overflow,
    #[error(transparent)]
    Pl(#[from] PlError),
}

/// Smallest interior breakpoint, if any.
pub fn first_singularity(f: &PlFunc) -> Option<Rational> {
    f.singularities().first().copied()
}

fn power(p: i64, n: i64) -> Result<i64, SummandError> {
    p.checked_pow(u32::try_from(n).map_err(|_| SummandError::Overflow)?)
        .filter(|v| *v < 1 << 40)
        .ok_or(SummandError::Overflow)
}

/// `[1/pⁿ, 2/(1 + pⁿ)]`, where the first singularity of `J_n` lies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XiInterval {
    pub p: i64,
    pub n: i64,
    pub lo: Rational,
    pub hi: Rational,
}

impl XiInterval {
    pub fn contains(&self, t: Rational) -> bool {
        self.lo <= t && t <= self.hi
    }

    /// Entirely to the left of `other`, with a gap.
    pub fn before(&self, other: &XiInterval) -> bool {
        self.hi < other.lo
    }
}

pub fn xi_interval(p: i64, n: i64) -> Result<XiInterval, SummandError> {
    if p < 2 {
        return Err(SummandError::InvalidP(p));
    }
    if n < 1 {
        return Err(SummandError::InvalidN(n));
    }
    let pn = power(p, n)? as i128;
    Ok(XiInterval { p, n, lo: Rational::new(1, pn), hi: Rational::new(2, 1 + pn) })
}

/// Iterates the `q = 1` cabling lower bound `n` times starting from `Υ_D` on
/// `[1, 2]`: `b_k(t) = b_{k−1}(pt) − (p−1)t`, on `[1/pⁿ, 2/pⁿ]`.
pub fn iterated_lower_bound(ups_d: &PlFunc, p: i64, n: u32) -> Result<PlFunc, SummandError> {
    if p < 2 {
        return Err(SummandError::InvalidP(p));
    }
    ups_d.require_total()?;
    let mut bound = ups_d.restrict(Rational::ONE, Rational::TWO)?;
    for _ in 0..n {
        bound = lower_bound_on(&bound, p as u32, 1);
    }
    Ok(bound)
}

/// Passes when `xi_hi < 4/(g₃ + τ)`, in which case every `ξ ≤ xi_hi` that is
/// a first singularity has `(ξ/2)ΔΥ′(ξ) = 1`.
pub fn slope_change_one(facts: &KnotFacts, xi_hi: Rational) -> Result<Certificate, SummandError> {
    if facts.tau < 0 {
        return Err(SummandError::NegativeTau(facts.tau));
    }
    let sum = facts.g3 + facts.tau;
    if sum == 0 {
        return Ok(Certificate::pass());
    }
    let limit = Rational::new(4, sum as i128);
    if xi_hi < limit {
        Ok(Certificate::pass())
    } else {
        Ok(Certificate::fail(xi_hi, format!("{xi_hi} ≥ 4/(g3 + τ) = {limit}")))
    }
}

/// A family member: where its first singularity lies, what is known about
/// it, and the slope-change check at that singularity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyEntry {
    pub label: String,
    pub interval: XiInterval,
    pub facts_supplied: KnotFacts,
    pub slope_change: Certificate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SummandVerdict {
    IndependentSummand,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifiedEntry {
    pub label: String,
    pub interval: XiInterval,
    pub facts_supplied: KnotFacts,
    /// `(ξ/2)ΔΥ′(ξ)` at the entry's own first singularity, when certified.
    pub delta: Option<i64>,
    pub slope_change: Certificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummandCertificate {
    pub verdict: SummandVerdict,
    /// Entries sorted by increasing `ξ`.
    pub family: Vec<CertifiedEntry>,
    /// `matrix[r][c]` is homomorphism `r` evaluated on knot `c`. Entries left
    /// of the diagonal are not determined by the certificate and are `null`.
    pub matrix: Vec<Vec<Option<i64>>>,
    /// Number of independent elements exhibited.
    pub rank_lower_bound: usize,
    pub failure: Option<String>,
}

/// Checks disjointness and ordering of the intervals and collects the
/// slope-change certificates into the evaluation matrix.
pub fn independence_certificate(family: &[FamilyEntry]) -> SummandCertificate {
    let mut sorted: Vec<&FamilyEntry> = family.iter().collect();
    sorted.sort_by(|a, b| a.interval.lo.cmp(&b.interval.lo).then(a.interval.hi.cmp(&b.interval.hi)));

    let mut failure = None;
    for w in sorted.windows(2) {
        if !w[0].interval.before(&w[1].interval) {
            failure = Some(format!("intervals of {} and {} are not disjoint", w[0].label, w[1].label));
            break;
        }
    }
    if failure.is_none() {
        if let Some(e) = sorted.iter().find(|e| !e.slope_change.is_pass()) {
            failure = Some(format!("slope change of {} is not certified", e.label));
        }
    }

    let entries: Vec<CertifiedEntry> = sorted
        .iter()
        .map(|e| CertifiedEntry {
            label: e.label.clone(),
            interval: e.interval,
            facts_supplied: e.facts_supplied,
            delta: e.slope_change.is_pass().then_some(1),
            slope_change: e.slope_change.clone(),
        })
        .collect();
    let size = entries.len();
    let disjoint = sorted.windows(2).all(|w| w[0].interval.before(&w[1].interval));
    let matrix = (0..size)
        .map(|r| {
            (0..size)
                .map(|c| match c.cmp(&r) {
                    // ξ_r lies before knot c's first singularity, where Υ is linear.
                    std::cmp::Ordering::Greater if disjoint => Some(0),
                    std::cmp::Ordering::Equal => entries[r].delta,
                    _ => None,
                })
                .collect()
        })
        .collect();
    let verdict = if failure.is_none() { SummandVerdict::IndependentSummand } else { SummandVerdict::Inconclusive };
    SummandCertificate {
        verdict,
        rank_lower_bound: if failure.is_none() { size } else { 0 },
        family: entries,
        matrix,
        failure,
    }
}

/// The entry for `J_n`, the `n`-fold iterated `(p, 1)` cable of a knot `D`
/// with `τ(D) = g₃(D) = 1`. Its `τ = g₃ = pⁿ` are supplied, not computed.
pub fn j_entry(p: i64, n: i64) -> Result<FamilyEntry, SummandError> {
    let interval = xi_interval(p, n)?;
    let pn = power(p, n)?;
    let facts = KnotFacts { tau: pn, g3: pn, g4: pn };
    let slope_change = slope_change_one(&facts, interval.hi)?;
    Ok(FamilyEntry { label: format!("J_{n}"), interval, facts_supplied: facts, slope_change })
}

/// Certificate for `J_1, …, J_max_n`.
pub fn j_family(p: i64, max_n: i64) -> Result<SummandCertificate, SummandError> {
    let family = (1..=max_n).map(|n| j_entry(p, n)).collect::<Result<Vec<_>, _>>()?;
    Ok(independence_certificate(&family))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cable::{cable_bounds, CableParams};
    use crate::plfun::Line;
    use crate::rational::q;
    use crate::staircase::torus_complex;
    use proptest::prelude::*;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn ups_d() -> PlFunc {
        torus_complex(2, 3).unwrap().upsilon().unwrap()
    }

    fn t_minus_two(lo: Rational, hi: Rational) -> PlFunc {
        PlFunc::linear(lo, hi, Line::new(r(1), r(-2)))
    }

    #[test]
    fn first_singularities() {
        assert_eq!(first_singularity(&ups_d()), Some(r(1)));
        assert_eq!(first_singularity(&PlFunc::zero()), None);
        let f = PlFunc::total_from_points(vec![(r(0), r(0)), (q(2, 3), q(-14, 3)), (r(1), r(-8)), (q(4, 3), q(-14, 3)), (r(2), r(0))]).unwrap();
        assert_eq!(first_singularity(&f), Some(q(2, 3)));
    }

    #[test]
    fn intervals() {
        let i = xi_interval(3, 1).unwrap();
        assert_eq!((i.lo, i.hi), (q(1, 3), q(1, 2)));
        let i = xi_interval(3, 2).unwrap();
        assert_eq!((i.lo, i.hi), (q(1, 9), q(1, 5)));
        let i = xi_interval(2, 1).unwrap();
        assert_eq!((i.lo, i.hi), (q(1, 2), q(2, 3)));
        assert_eq!(xi_interval(1, 1), Err(SummandError::InvalidP(1)));
        assert_eq!(xi_interval(2, 0), Err(SummandError::InvalidN(0)));
    }

    #[test]
    fn intervals_are_disjoint_and_decreasing() {
        for p in 2..=10 {
            for n in 2..=12 {
                let (now, prev) = (xi_interval(p, n).unwrap(), xi_interval(p, n - 1).unwrap());
                assert!(now.lo < now.hi);
                assert!(now.before(&prev), "p = {p}, n = {n}");
            }
        }
    }

    #[test]
    fn iterated_bounds() {
        assert_eq!(iterated_lower_bound(&ups_d(), 3, 1).unwrap(), t_minus_two(q(1, 3), q(2, 3)));
        assert_eq!(iterated_lower_bound(&ups_d(), 2, 2).unwrap(), t_minus_two(q(1, 4), q(1, 2)));
        assert_eq!(iterated_lower_bound(&ups_d(), 5, 0).unwrap(), ups_d().restrict(r(1), r(2)).unwrap());
        for p in 2..=6 {
            for n in 1..=5u32 {
                let pn = (p as i128).pow(n);
                let b = iterated_lower_bound(&ups_d(), p, n).unwrap();
                assert_eq!(b, t_minus_two(Rational::new(1, pn), Rational::new(2, pn)));
            }
        }
    }

    #[test]
    fn iterated_bound_matches_cable_bounds() {
        for p in 2..=4u32 {
            let mut f = ups_d();
            let mut bound = cable_bounds(&f, CableParams::new(p as i64, 1).unwrap()).unwrap().lower;
            for n in 1..=3u32 {
                let pn = (p as i128).pow(n);
                let (lo, hi) = (Rational::new(1, pn), Rational::new(2, pn));
                assert_eq!(bound.restrict(lo, hi).unwrap(), iterated_lower_bound(&ups_d(), p as i64, n).unwrap());
                // Feed the bound back in, padded to a total function, as the next companion.
                let (_, end) = bound.domain();
                let mut pts = bound.breakpoints().to_vec();
                pts.push((r(2), pts.last().unwrap().1 + (r(2) - end)));
                f = PlFunc::total_from_points(pts).unwrap();
                bound = cable_bounds(&f, CableParams::new(p as i64, 1).unwrap()).unwrap().lower;
            }
        }
    }

    #[test]
    fn slope_change_examples() {
        for n in 1..=8 {
            let pn = 3i64.pow(n);
            let facts = KnotFacts { tau: pn, g3: pn, g4: pn };
            assert!(slope_change_one(&facts, Rational::new(2, 1 + pn as i128)).unwrap().is_pass());
        }
        let unknotted = KnotFacts { tau: 0, g3: 1, g4: 0 };
        let cert = slope_change_one(&unknotted, r(5)).unwrap();
        assert!(!cert.is_pass());
        assert_eq!(cert.witness.unwrap().t, r(5));
        assert!(slope_change_one(&KnotFacts { tau: 1, g3: 1, g4: 1 }, r(1)).unwrap().is_pass());
        assert_eq!(
            slope_change_one(&KnotFacts { tau: -1, g3: 1, g4: 1 }, r(1)),
            Err(SummandError::NegativeTau(-1))
        );
    }

    #[test]
    fn j_family_certificate() {
        let cert = j_family(3, 4).unwrap();
        assert_eq!(cert.verdict, SummandVerdict::IndependentSummand);
        assert_eq!(cert.rank_lower_bound, 4);
        assert_eq!(cert.family[0].label, "J_4");
        let m = &cert.matrix;
        for r in 0..4 {
            assert_eq!(m[r][r], Some(1));
            for c in r + 1..4 {
                assert_eq!(m[r][c], Some(0));
            }
            for c in 0..r {
                assert_eq!(m[r][c], None);
            }
        }
        let back: SummandCertificate = serde_json::from_str(&serde_json::to_string(&cert).unwrap()).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn overlapping_family_is_inconclusive() {
        let a = j_entry(3, 1).unwrap();
        let mut b = j_entry(3, 2).unwrap();
        b.interval.hi = q(2, 5);
        let cert = independence_certificate(&[a, b]);
        assert_eq!(cert.verdict, SummandVerdict::Inconclusive);
        assert!(cert.failure.unwrap().contains("J_1"));
        assert_eq!(cert.matrix[0][1], None);
    }

    #[test]
    fn empty_family_is_trivially_independent() {
        let cert = independence_certificate(&[]);
        assert_eq!(cert.verdict, SummandVerdict::IndependentSummand);
        assert_eq!(cert.rank_lower_bound, 0);
        assert!(cert.matrix.is_empty());
    }

    #[test]
    fn uncertified_slope_change_is_inconclusive() {
        let mut e = j_entry(2, 1).unwrap();
        e.facts_supplied = KnotFacts { tau: 2, g3: 4, g4: 2 };
        e.slope_change = slope_change_one(&e.facts_supplied, e.interval.hi).unwrap();
        let cert = independence_certificate(&[e, j_entry(2, 2).unwrap()]);
        assert_eq!(cert.verdict, SummandVerdict::Inconclusive);
        assert_eq!(cert.family[1].delta, None);
    }

    proptest! {
        #[test]
        fn passing_matrices_are_unit_lower_triangular(p in 2i64..8, max_n in 0i64..7) {
            let cert = j_family(p, max_n).unwrap();
            prop_assert_eq!(cert.verdict, SummandVerdict::IndependentSummand);
            for (r, row) in cert.matrix.iter().enumerate() {
                prop_assert_eq!(row[r], Some(1));
                prop_assert!(row[r + 1..].iter().all(|v| *v == Some(0)));
            }
        }
    }
}
