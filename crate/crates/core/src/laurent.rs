//! Integer Laurent polynomials, used for Alexander polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "LaurentJson")]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LaurentJson {
    coeffs: BTreeMap<i64, i64>,
}

impl From<LaurentJson> for LaurentPoly {
    fn from(raw: LaurentJson) -> Self {
        LaurentPoly::from_terms(raw.coeffs)
    }
}

impl LaurentPoly {
    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed and zero coefficients dropped.
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (e, c) in terms {
            *coeffs.entry(e).or_insert(0) += c;
        }
        coeffs.retain(|_, c| *c != 0);
        LaurentPoly { coeffs }
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(exp: i64, coeff: i64) -> Self {
        Self::from_terms([(exp, coeff)])
    }

    /// `t^n − 1`
    pub fn t_pow_minus_one(n: i64) -> Self {
        Self::from_terms([(n, 1), (0, -1)])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.coeffs.get(&exp).copied().unwrap_or(0)
    }

    /// Non-zero terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn eval_at_one(&self) -> i64 {
        self.coeffs.values().sum()
    }

    /// `p(t) = p(t⁻¹)`
    pub fn is_symmetric(&self) -> bool {
        self.coeffs.iter().all(|(&e, &c)| self.coeff(-e) == c)
    }

    pub fn shift(&self, by: i64) -> Self {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&e, &c)| (e + by, c)).collect() }
    }

    pub fn negate(&self) -> Self {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&e, &c)| (e, -c)).collect() }
    }

    /// `p(t) ↦ p(tⁿ)`
    pub fn substitute_power(&self, n: i64) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(&e, &c)| (e * n, c)))
    }

    /// Exact division; `None` if `divisor` does not divide `self` over ℤ.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        let (dmax, dmin) = (divisor.max_exp()?, divisor.min_exp()?);
        let lead = divisor.coeff(dmax);
        let mut rem = self.clone();
        let mut quot = BTreeMap::new();
        while let (Some(rmax), Some(rmin)) = (rem.max_exp(), rem.min_exp()) {
            if rmax - rmin < dmax - dmin {
                return None;
            }
            let c = rem.coeff(rmax);
            if c % lead != 0 {
                return None;
            }
            let term = LaurentPoly::monomial(rmax - dmax, c / lead);
            *quot.entry(rmax - dmax).or_insert(0) += c / lead;
            rem = &rem + &(&term * divisor).negate();
        }
        Some(LaurentPoly::from_terms(quot))
    }
}

impl std::ops::Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().chain(rhs.terms()))
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.terms().flat_map(|(e1, c1)| rhs.terms().map(move |(e2, c2)| (e1 + e2, c1 * c2))),
        )
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().rev().enumerate() {
            let sign = if c < 0 { "-" } else if i > 0 { "+" } else { "" };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else {
                write!(f, "{sign}")?;
            }
            let a = c.abs();
            match (e, a) {
                (0, _) => write!(f, "{a}")?,
                (_, 1) => write!(f, "t^{e}")?,
                _ => write!(f, "{a}t^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn arithmetic() {
        let a = LaurentPoly::from_terms([(1, 1), (0, -1), (-1, 1)]);
        let sq = &a * &a;
        assert_eq!(sq, LaurentPoly::from_terms([(2, 1), (1, -2), (0, 3), (-1, -2), (-2, 1)]));
        assert_eq!(sq.div_exact(&a), Some(a.clone()));
        assert_eq!(a.substitute_power(2), LaurentPoly::from_terms([(2, 1), (0, -1), (-2, 1)]));
        assert!(a.is_symmetric());
        assert!(!a.shift(1).is_symmetric());
        assert_eq!(a.eval_at_one(), 1);
        assert_eq!(LaurentPoly::t_pow_minus_one(2).div_exact(&LaurentPoly::t_pow_minus_one(3)), None);
        assert_eq!(a.to_string(), "t^1 - 1 + t^-1");
    }

    #[test]
    fn json_shape() {
        let a = LaurentPoly::from_terms([(1, 1), (0, -1), (-1, 1)]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"coeffs":{"-1":1,"0":-1,"1":1}}"#);
        assert_eq!(serde_json::from_str::<LaurentPoly>(&s).unwrap(), a);
        assert!(serde_json::from_str::<LaurentPoly>(r#"{"coeffs":{},"x":0}"#).is_err());
        // zero coefficients are dropped on input
        let z: LaurentPoly = serde_json::from_str(r#"{"coeffs":{"3":0,"0":1}}"#).unwrap();
        assert_eq!(z, LaurentPoly::one());
    }

    fn poly() -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec((-4i64..=4, -3i64..=3), 0..5).prop_map(LaurentPoly::from_terms)
    }

    proptest! {
        #[test]
        fn division_inverts_multiplication(a in poly(), b in poly()) {
            prop_assume!(!b.is_zero());
            let b = &b * &LaurentPoly::monomial(0, 1);
            let lead = b.coeff(b.max_exp().unwrap());
            prop_assume!(lead.abs() == 1);
            prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
        }
    }
}
