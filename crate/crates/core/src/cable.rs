//! Bounds on Υ of a `(p, q)` cable in terms of Υ of the companion, and
//! checkers for the grading arithmetic behind them.
//!
//! For `0 ≤ t ≤ 2/p`
//!
//! ```text
//! Υ_K(pt) − (p−1)(q+1)t/2  ≤  Υ_{K_{p,q}}(t)  ≤  Υ_K(pt) − (p−1)(q−1)t/2
//! ```
//!
//! and the symmetry `Υ(t) = Υ(2 − t)` of the cable carries the same band to
//! `[2 − 2/p, 2]`. Nothing is claimed in between.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::certificate::Certificate;
use crate::plfun::{Line, PlError, PlFunc};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CableError {
    #[error("p = {p} and q = {q} are not coprime")]
    NotCoprime { p: i64, q: i64 },
    #[error("p must be a positive integer, got {0}")]
    InvalidP(i64),
    #[error("l = {l} is outside [0, {}]", p - 1)]
    LOutOfRange { l: i64, p: i64 },
    #[error("sample t = {t} is outside [0, 2/{p}]")]
    SampleOutOfRange { t: Rational, p: u32 },
    #[error("q = {0} appears twice in the family")]
    DuplicateQ(i64),
    #[error("malformed bounds: {0}")]
    MalformedBounds(String),
    #[error(transparent)]
    Pl(#[from] PlError),
}

/// Cabling parameters: `p` strands, twisting `q`, coprime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CableParams {
    pub p: u32,
    pub q: i64,
    /// Set when `q = p·n + 1`.
    pub n: Option<i64>,
}

fn positive_p(p: i64) -> Result<u32, CableError> {
    u32::try_from(p).ok().filter(|&p| p >= 1).ok_or(CableError::InvalidP(p))
}

impl CableParams {
    pub fn new(p: i64, q: i64) -> Result<Self, CableError> {
        let pu = positive_p(p)?;
        if p.gcd(&q) != 1 {
            return Err(CableError::NotCoprime { p, q });
        }
        let n = (q - 1).is_multiple_of(&p).then(|| (q - 1) / p);
        Ok(CableParams { p: pu, q, n })
    }

    /// The `(p, pn + 1)` cable.
    pub fn from_n(p: i64, n: i64) -> Result<Self, CableError> {
        Self::new(p, p * n + 1)
    }

    /// `2/p`, the right end of the primary band.
    pub fn reach(&self) -> Rational {
        Rational::new(2, self.p as i128)
    }
}

/// A lower and an upper function on a common domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Band {
    pub lower: PlFunc,
    pub upper: PlFunc,
}

impl Band {
    fn check(&self, lo: Rational, hi: Rational) -> Result<(), CableError> {
        for f in [&self.lower, &self.upper] {
            if f.domain() != (lo, hi) {
                let (a, b) = f.domain();
                return Err(CableError::MalformedBounds(format!("domain [{a}, {b}], expected [{lo}, {hi}]")));
            }
        }
        for t in PlFunc::comparison_times(&[&self.lower, &self.upper], lo, hi) {
            if self.lower.at(t) > self.upper.at(t) {
                return Err(CableError::MalformedBounds(format!("lower exceeds upper at t = {t}")));
            }
        }
        Ok(())
    }
}

/// Both sides of the cabling bound on `[0, 2/p]`, and their mirror images on
/// `[2 − 2/p, 2]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundPair {
    pub p: u32,
    pub q: i64,
    pub lower: PlFunc,
    pub upper: PlFunc,
    pub reflected: Band,
}

impl BoundPair {
    pub fn params(&self) -> Result<CableParams, CableError> {
        CableParams::new(self.p as i64, self.q)
    }

    /// Checks domains and `lower ≤ upper`; used after deserializing.
    pub fn validate(&self) -> Result<(), CableError> {
        let reach = self.params()?.reach();
        Band { lower: self.lower.clone(), upper: self.upper.clone() }.check(Rational::ZERO, reach)?;
        self.reflected.check(Rational::TWO - reach, Rational::TWO)
    }

    /// The tightest interval the bounds allow at `t`, if any applies.
    pub fn constraint_at(&self, t: Rational) -> Option<(Rational, Rational)> {
        let mut out: Option<(Rational, Rational)> = None;
        for (lower, upper) in [(&self.lower, &self.upper), (&self.reflected.lower, &self.reflected.upper)] {
            if lower.contains(t) {
                let (l, u) = (lower.at(t), upper.at(t));
                out = Some(match out {
                    None => (l, u),
                    Some((a, b)) => (a.max(l), b.min(u)),
                });
            }
        }
        out
    }
}

fn shifted(f: &PlFunc, p: u32, slope: Rational) -> PlFunc {
    f.precompose_scale(p).add_line(Line::new(slope, Rational::ZERO))
}

/// `t ↦ f(pt) − (p−1)(q+1)t/2`. `f` may be partial, which is what iterating
/// the bound needs.
pub fn lower_bound_on(f: &PlFunc, p: u32, q: i64) -> PlFunc {
    let slope = Rational::new(-((p as i128) - 1) * (q as i128 + 1), 2);
    shifted(f, p, slope)
}

/// `t ↦ f(pt) − (p−1)(q−1)t/2`.
pub fn upper_bound_on(f: &PlFunc, p: u32, q: i64) -> PlFunc {
    let slope = Rational::new(-((p as i128) - 1) * (q as i128 - 1), 2);
    shifted(f, p, slope)
}

pub fn cable_bounds(ups_k: &PlFunc, params: CableParams) -> Result<BoundPair, CableError> {
    ups_k.require_total()?;
    let CableParams { p, q, .. } = params;
    let lower = lower_bound_on(ups_k, p, q);
    let upper = upper_bound_on(ups_k, p, q);
    let reflected = Band { lower: lower.reflect(), upper: upper.reflect() };
    Ok(BoundPair { p, q, lower, upper, reflected })
}

/// Checks `lower ≤ candidate ≤ upper` wherever a bound applies.
pub fn check_bounds(candidate: &PlFunc, bounds: &BoundPair) -> Result<Certificate, CableError> {
    candidate.require_total()?;
    let reach = bounds.params()?.reach();
    let mut times = PlFunc::comparison_times(&[candidate, &bounds.lower, &bounds.upper], Rational::ZERO, reach);
    times.extend(PlFunc::comparison_times(
        &[candidate, &bounds.reflected.lower, &bounds.reflected.upper],
        Rational::TWO - reach,
        Rational::TWO,
    ));
    times.sort();
    times.dedup();
    for t in times {
        let Some((l, u)) = bounds.constraint_at(t) else { continue };
        let v = candidate.at(t);
        if v < l {
            return Ok(Certificate::fail(t, format!("value {v} is below the lower bound {l}")));
        }
        if v > u {
            return Ok(Certificate::fail(t, format!("value {v} is above the upper bound {u}")));
        }
    }
    Ok(Certificate::pass())
}

/// Alexander grading of the cable generator coming from `x` with
/// `A(x) = a` and winding index `l`: `p·a + p·n(p−1)/2 + l`.
pub fn grading_transform(a: i64, l: i64, p: i64, n: i64) -> Result<i64, CableError> {
    positive_p(p)?;
    if !(0..p).contains(&l) {
        return Err(CableError::LOutOfRange { l, p });
    }
    Ok(p * a + p * n * (p - 1) / 2 + l)
}

/// Checks the two-sided filtration sandwich
///
/// ```text
/// F'_t ≤ s + pn(p−1)t/4  ⇒  F_pt ≤ s  ⇒  F'_t ≤ s + (pn+2)(p−1)t/4
/// ```
///
/// for every generator `(A, l)`, every sample `(t, s)` and every `U`-power
/// in a window around level `s`.
pub fn sandwich_check(
    gens: &[(i64, i64)],
    p: i64,
    n: i64,
    samples: &[(Rational, Rational)],
) -> Result<Certificate, CableError> {
    let pu = positive_p(p)?;
    let reach = Rational::new(2, p as i128);
    for &(t, _) in samples {
        if t.is_negative() || t > reach {
            return Err(CableError::SampleOutOfRange { t, p: pu });
        }
    }
    let window = n.abs() * p * p + p + 2;
    for &(a, l) in gens {
        let a_cable = grading_transform(a, l, p, n)?;
        for &(t, s) in samples {
            let orig_alex = (t * p).half() * a;
            let cable_alex = t.half() * a_cable;
            let shift_lo = t * (p * n * (p - 1)) / 4;
            let shift_hi = t * ((p * n + 2) * (p - 1)) / 4;
            let centre = (s - orig_alex).floor() as i64;
            for k in centre - window..=centre + window {
                let f_orig = orig_alex + k;
                let f_cable = cable_alex + k;
                if f_cable <= s + shift_lo && f_orig > s {
                    return Ok(Certificate::fail(
                        t,
                        format!("A={a} l={l} k={k} s={s}: F'_t={f_cable} within s+{shift_lo} but F_pt={f_orig} > s"),
                    ));
                }
                if f_orig <= s && f_cable > s + shift_hi {
                    return Ok(Certificate::fail(
                        t,
                        format!("A={a} l={l} k={k} s={s}: F_pt={f_orig} ≤ s but F'_t={f_cable} > s+{shift_hi}"),
                    ));
                }
            }
        }
    }
    Ok(Certificate::pass())
}

/// Sixteen `(t, s)` pairs spread over `[0, 2/p]` and a few levels.
pub fn default_samples(p: u32) -> Vec<(Rational, Rational)> {
    let reach = Rational::new(2, p as i128);
    (0..16)
        .map(|i| (reach * Rational::new(i, 15), Rational::new(i % 5 - 2, 1) + Rational::new(i % 3, 3)))
        .collect()
}

/// `h̄(q, t) = Υ_{K_{p,q}}(t) + (p−1)qt/2` must satisfy
/// `0 ≤ h̄(q, t) − h̄(r, t) ≤ (p−1)t` on `[0, 2/p]` whenever `q > r`.
pub fn hbar_check(family: &[(i64, PlFunc)], p: i64) -> Result<Certificate, CableError> {
    let pu = positive_p(p)?;
    for (i, (q, _)) in family.iter().enumerate() {
        CableParams::new(p, *q)?;
        if family[..i].iter().any(|(r, _)| r == q) {
            return Err(CableError::DuplicateQ(*q));
        }
    }
    let reach = Rational::new(2, pu as i128);
    let hbar = |q: i64, f: &PlFunc| -> Result<PlFunc, CableError> {
        let slope = Rational::new((p as i128 - 1) * q as i128, 2);
        Ok(f.restrict(Rational::ZERO, reach)?.add_line(Line::new(slope, Rational::ZERO)))
    };
    for (qi, fi) in family {
        for (qj, fj) in family {
            if qi <= qj {
                continue;
            }
            let diff = hbar(*qi, fi)?.sub(&hbar(*qj, fj)?)?;
            for t in PlFunc::comparison_times(&[&diff], Rational::ZERO, reach) {
                let d = diff.at(t);
                let cap = t * (p - 1);
                if d.is_negative() || d > cap {
                    return Ok(Certificate::fail(
                        t,
                        format!("h̄({qi}) − h̄({qj}) = {d} outside [0, {cap}]"),
                    ));
                }
            }
        }
    }
    Ok(Certificate::pass())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfk::Complex;
    use crate::rational::q;
    use crate::staircase::{cable_alexander, lspace_knot_complex, torus_alexander, torus_complex};
    use proptest::prelude::*;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn ups_torus(p: i64, qq: i64) -> PlFunc {
        torus_complex(p, qq).unwrap().upsilon().unwrap()
    }

    fn line_on(lo: Rational, hi: Rational, slope: i64, intercept: i64) -> PlFunc {
        PlFunc::linear(lo, hi, Line::new(r(slope), r(intercept)))
    }

    #[test]
    fn params() {
        assert_eq!(CableParams::new(2, 4), Err(CableError::NotCoprime { p: 2, q: 4 }));
        assert_eq!(CableParams::new(0, 1), Err(CableError::InvalidP(0)));
        assert_eq!(CableParams::new(2, 17).unwrap().n, Some(8));
        assert_eq!(CableParams::new(3, 5).unwrap().n, None);
        assert_eq!(CableParams::from_n(3, -1).unwrap().q, -2);
    }

    #[test]
    fn unknot_cables_attain_one_side() {
        let zero = PlFunc::zero();
        let b = cable_bounds(&zero, CableParams::new(2, 3).unwrap()).unwrap();
        assert_eq!(b.lower, line_on(r(0), r(1), -2, 0));
        assert_eq!(b.upper, line_on(r(0), r(1), -1, 0));
        assert_eq!(ups_torus(2, 3).restrict(r(0), r(1)).unwrap(), b.upper);

        let b = cable_bounds(&zero, CableParams::new(2, -3).unwrap()).unwrap();
        assert_eq!(b.lower, line_on(r(0), r(1), 1, 0));
        assert_eq!(b.upper, line_on(r(0), r(1), 2, 0));
        assert_eq!(ups_torus(2, -3).restrict(r(0), r(1)).unwrap(), b.lower);
    }

    #[test]
    fn t2m3_seventeen_cable_band() {
        let b = cable_bounds(&ups_torus(2, -3), CableParams::new(2, 17).unwrap()).unwrap();
        let (lo, hi) = (q(1, 2), r(1));
        assert_eq!(b.lower.restrict(lo, hi).unwrap(), line_on(lo, hi, -11, 2));
        assert_eq!(b.upper.restrict(lo, hi).unwrap(), line_on(lo, hi, -10, 2));
    }

    #[test]
    fn check_bounds_examples() {
        let b = cable_bounds(&PlFunc::zero(), CableParams::new(2, 3).unwrap()).unwrap();
        assert!(check_bounds(&ups_torus(2, 3), &b).unwrap().is_pass());

        let steep = PlFunc::total_from_points(vec![(r(0), r(0)), (r(1), r(-3)), (r(2), r(0))]).unwrap();
        let cert = check_bounds(&steep, &b).unwrap();
        assert!(!cert.is_pass());
        let w = cert.witness.unwrap();
        assert!(steep.eval(w.t).unwrap() < b.constraint_at(w.t).unwrap().0);

        // (T(2,3))_{2,7} from its own staircase against the bound from T(2,3).
        let d = cable_alexander(&torus_alexander(2, 3).unwrap(), 2, 7).unwrap();
        let cable = lspace_knot_complex(&d).unwrap().upsilon().unwrap();
        let b = cable_bounds(&ups_torus(2, 3), CableParams::new(2, 7).unwrap()).unwrap();
        assert!(check_bounds(&cable, &b).unwrap().is_pass());
    }

    #[test]
    fn lspace_cables_of_the_trefoil_lie_in_the_band() {
        let d = torus_alexander(2, 3).unwrap();
        let ups_k = ups_torus(2, 3);
        for qq in [3, 5, 7, 9, 11] {
            let cable = lspace_knot_complex(&cable_alexander(&d, 2, qq).unwrap()).unwrap();
            let b = cable_bounds(&ups_k, CableParams::new(2, qq).unwrap()).unwrap();
            assert!(check_bounds(&cable.upsilon().unwrap(), &b).unwrap().is_pass(), "q = {qq}");
        }
    }

    #[test]
    fn middle_region_is_unconstrained() {
        let b = cable_bounds(&PlFunc::zero(), CableParams::new(3, 4).unwrap()).unwrap();
        assert_eq!(b.constraint_at(r(1)), None);
        assert!(b.constraint_at(q(2, 3)).is_some());
        assert!(b.constraint_at(q(4, 3)).is_some());
        assert_eq!(b.reflected.lower.domain(), (q(4, 3), r(2)));
    }

    #[test]
    fn bounds_json_round_trip() {
        let b = cable_bounds(&ups_torus(2, 3), CableParams::new(2, 5).unwrap()).unwrap();
        let s = serde_json::to_string(&b).unwrap();
        let back: BoundPair = serde_json::from_str(&s).unwrap();
        assert_eq!(back, b);
        back.validate().unwrap();
        let mut swapped = b.clone();
        std::mem::swap(&mut swapped.lower, &mut swapped.upper);
        assert!(swapped.validate().is_err());
    }

    #[test]
    fn grading_transform_examples() {
        assert_eq!(grading_transform(0, 0, 2, 0), Ok(0));
        assert_eq!(grading_transform(1, 2, 3, 2), Ok(11));
        assert_eq!(grading_transform(-1, 0, 2, 3), Ok(1));
        assert_eq!(grading_transform(0, 2, 2, 0), Err(CableError::LOutOfRange { l: 2, p: 2 }));
        assert_eq!(grading_transform(0, -1, 2, 0), Err(CableError::LOutOfRange { l: -1, p: 2 }));
    }

    #[test]
    fn sandwich_examples() {
        let trefoil: Vec<i64> = torus_complex(2, 3).unwrap().generators().iter().map(|g| g.alex).collect();
        let gens: Vec<(i64, i64)> = trefoil.iter().flat_map(|&a| (0..2).map(move |l| (a, l))).collect();
        let samples = default_samples(2);
        assert_eq!(samples.len(), 16);
        assert!(sandwich_check(&gens, 2, 1, &samples).unwrap().is_pass());
        assert!(sandwich_check(&[(0, 0)], 5, -3, &default_samples(5)).unwrap().is_pass());
        assert!(matches!(
            sandwich_check(&[(0, 0)], 2, 0, &[(r(2), r(0))]),
            Err(CableError::SampleOutOfRange { .. })
        ));
    }

    #[test]
    fn trivial_cable_has_no_gap() {
        let f = ups_torus(3, 4);
        let b = cable_bounds(&f, CableParams::new(1, 7).unwrap()).unwrap();
        assert_eq!(b.lower, f);
        assert_eq!(b.upper, f);
        assert!(sandwich_check(&[(2, 0), (-1, 0)], 1, 6, &default_samples(1)).unwrap().is_pass());
    }

    #[test]
    fn hbar_examples() {
        let family: Vec<(i64, PlFunc)> = [3, 5, 7].iter().map(|&qq| (qq, ups_torus(2, qq))).collect();
        assert!(hbar_check(&family, 2).unwrap().is_pass());

        let mut broken = family.clone();
        broken[1].1 = broken[1].1.negate();
        let cert = hbar_check(&broken, 2).unwrap();
        assert!(!cert.is_pass());
        assert!(cert.witness.unwrap().t.is_positive());

        assert!(hbar_check(&family[..1], 2).unwrap().is_pass());
        assert_eq!(
            hbar_check(&[(4, PlFunc::zero())], 2),
            Err(CableError::NotCoprime { p: 2, q: 4 })
        );
        assert_eq!(
            hbar_check(&[(3, PlFunc::zero()), (3, PlFunc::zero())], 2),
            Err(CableError::DuplicateQ(3))
        );
    }

    fn staircase_ups() -> impl Strategy<Value = (PlFunc, i64)> {
        (2i64..5, 3i64..9).prop_filter_map("coprime, p < q", |(p, qq)| {
            let c: Complex = torus_complex(p, qq).ok().filter(|_| p < qq)?;
            Some((c.upsilon().ok()?, c.tau().ok()?))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn band_shape((ups, tau) in staircase_ups(), p in 1i64..5, qq in -9i64..10) {
            prop_assume!(p.gcd(&qq) == 1);
            let b = cable_bounds(&ups, CableParams::new(p, qq).unwrap()).unwrap();
            let width = b.upper.sub(&b.lower).unwrap();
            prop_assert_eq!(width, line_on(r(0), Rational::new(2, p as i128), p - 1, 0));
            // τ-inequalities for the cable are the slopes at 0.
            prop_assert_eq!(-b.upper.initial_slope(), r(p * tau) + Rational::new(((p - 1) * (qq - 1)) as i128, 2));
            prop_assert_eq!(-b.lower.initial_slope(), r(p * tau) + Rational::new(((p - 1) * (qq + 1)) as i128, 2));
            prop_assert!(b.validate().is_ok());
        }

        #[test]
        fn grading_transform_steps_by_one(a in -20i64..20, p in 1i64..8, n in -5i64..6) {
            let values: Vec<i64> = (0..p).map(|l| grading_transform(a, l, p, n).unwrap()).collect();
            prop_assert!(values.windows(2).all(|w| w[1] == w[0] + 1));
        }

        #[test]
        fn sandwich_never_fires(
            gens in proptest::collection::vec((-6i64..7, 0i64..8), 1..5),
            p in 1i64..5,
            n in -3i64..4,
        ) {
            let gens: Vec<(i64, i64)> = gens.into_iter().map(|(a, l)| (a, l % p)).collect();
            prop_assert!(sandwich_check(&gens, p, n, &default_samples(p as u32)).unwrap().is_pass());
        }
    }
}
