//! Staircase complexes of L-space knots, built from Alexander polynomials.
//!
//! An L-space knot has Alexander polynomial `Σ (−1)ⁱ t^{aᵢ}` with
//! `a₀ > a₁ > … > a₂ₘ = −a₀`, and its full knot Floer complex is the
//! staircase on `2m + 1` generators: odd generators `z_k` have boundary
//! `U^{a_{k−1} − a_k}·z_{k−1} + z_{k+1}`, even generators are cycles.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::cfk::{Complex, Generator, Term};
use crate::laurent::LaurentPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StaircaseError {
    #[error("p = {p} and q = {q} are not coprime")]
    NotCoprime { p: i64, q: i64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("malformed staircase: {0}")]
    MalformedSpec(String),
    #[error("not L-space form: {0}")]
    NotLSpaceForm(String),
}

/// The exponents `a₀ > … > a₂ₘ` of an L-space knot's Alexander polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StaircaseSpec {
    pub exponents: Vec<i64>,
}

impl StaircaseSpec {
    pub fn new(exponents: Vec<i64>) -> Result<Self, StaircaseError> {
        let spec = StaircaseSpec { exponents };
        spec.check()?;
        Ok(spec)
    }

    pub fn check(&self) -> Result<(), StaircaseError> {
        let a = &self.exponents;
        if a.len() % 2 == 0 {
            return Err(StaircaseError::MalformedSpec(format!("even length {}", a.len())));
        }
        if a.windows(2).any(|w| w[0] <= w[1]) {
            return Err(StaircaseError::MalformedSpec("exponents must strictly decrease".into()));
        }
        if a.iter().zip(a.iter().rev()).any(|(x, y)| *x != -*y) {
            return Err(StaircaseError::MalformedSpec("exponents are not symmetric about 0".into()));
        }
        Ok(())
    }

    pub fn generator_count(&self) -> usize {
        self.exponents.len()
    }
}

/// Alexander polynomial of the torus knot `T(p, q)`, symmetrized.
///
/// Negative `q` gives the same polynomial as `T(p, |q|)`.
pub fn torus_alexander(p: i64, q: i64) -> Result<LaurentPoly, StaircaseError> {
    if p < 1 || q == 0 {
        return Err(StaircaseError::InvalidParams(format!("need p >= 1 and q != 0, got ({p}, {q})")));
    }
    let q = q.abs();
    if p.gcd(&q) != 1 {
        return Err(StaircaseError::NotCoprime { p, q });
    }
    let num = &LaurentPoly::t_pow_minus_one(p * q) * &LaurentPoly::t_pow_minus_one(1);
    let den = &LaurentPoly::t_pow_minus_one(p) * &LaurentPoly::t_pow_minus_one(q);
    let quot = num.div_exact(&den).expect("cyclotomic identity");
    let genus = (p - 1) * (q - 1) / 2;
    Ok(quot.shift(-genus))
}

/// Alexander polynomial of the `(p, q)` cable: `Δ_K(tᵖ)·Δ_{T(p,q)}(t)`.
pub fn cable_alexander(dk: &LaurentPoly, p: i64, q: i64) -> Result<LaurentPoly, StaircaseError> {
    Ok(&dk.substitute_power(p) * &torus_alexander(p, q)?)
}

/// The staircase complex for a given exponent sequence.
pub fn staircase_complex(spec: &StaircaseSpec) -> Result<Complex, StaircaseError> {
    spec.check()?;
    let a = &spec.exponents;
    let mut maslov = vec![0i64; a.len()];
    let mut differential = vec![Vec::new(); a.len()];
    for k in (1..a.len()).step_by(2) {
        let step = a[k - 1] - a[k];
        // both terms must lower the Maslov grading by exactly one
        maslov[k] = maslov[k - 1] - 2 * step + 1;
        maslov[k + 1] = maslov[k] - 1;
        differential[k] = vec![
            Term { target: k - 1, upower: step as u32 },
            Term { target: k + 1, upower: 0 },
        ];
    }
    let generators = a
        .iter()
        .zip(&maslov)
        .enumerate()
        .map(|(k, (&alex, &m))| Generator::new(format!("z{k}"), alex, m))
        .collect();
    let name = format!(
        "staircase({})",
        a.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
    );
    Ok(Complex::new(name, generators, differential))
}

/// Exponent sequence of an Alexander polynomial in L-space form.
pub fn lspace_exponents(d: &LaurentPoly) -> Result<StaircaseSpec, StaircaseError> {
    if d.is_zero() {
        return Err(StaircaseError::NotLSpaceForm("zero polynomial".into()));
    }
    if !d.is_symmetric() {
        return Err(StaircaseError::NotLSpaceForm(format!("{d} is not symmetric")));
    }
    let d = if d.eval_at_one() < 0 { d.negate() } else { d.clone() };
    let mut exponents = Vec::new();
    for (i, (e, c)) in d.terms().rev().enumerate() {
        let want = if i % 2 == 0 { 1 } else { -1 };
        if c != want {
            return Err(StaircaseError::NotLSpaceForm(format!(
                "coefficient {c} of t^{e} breaks the +1/-1 alternation"
            )));
        }
        exponents.push(e);
    }
    StaircaseSpec::new(exponents).map_err(|e| StaircaseError::NotLSpaceForm(e.to_string()))
}

/// The staircase complex of an L-space knot with Alexander polynomial `d`.
pub fn lspace_knot_complex(d: &LaurentPoly) -> Result<Complex, StaircaseError> {
    staircase_complex(&lspace_exponents(d)?)
}

/// The complex of `T(p, q)`. Negative `q` is the dual of `T(p, |q|)`.
pub fn torus_complex(p: i64, q: i64) -> Result<Complex, StaircaseError> {
    let c = lspace_knot_complex(&torus_alexander(p, q)?)?.with_name(format!("T({p},{})", q.abs()));
    Ok(if q < 0 { c.dual().with_name(format!("T({p},{q})")) } else { c })
}

/// Every staircase spec with top exponent at most `max_top` and at most
/// `max_generators` generators, in a fixed order.
pub fn enumerate_specs(max_top: i64, max_generators: usize) -> Vec<StaircaseSpec> {
    // Symmetric sequences are fixed by their positive part a₀ > … > a_{m−1} > 0.
    let mut out = Vec::new();
    for mask in 0u32..(1 << max_top) {
        let mut positive: Vec<i64> = (1..=max_top).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        if 2 * positive.len() + 1 > max_generators {
            continue;
        }
        positive.reverse();
        let mut exponents = positive.clone();
        exponents.push(0);
        exponents.extend(positive.iter().rev().map(|e| -e));
        out.push(StaircaseSpec { exponents });
    }
    out.sort_by(|a, b| a.exponents.len().cmp(&b.exponents.len()).then(b.exponents.cmp(&a.exponents)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plfun::PlFunc;
    use crate::rational::Rational;

    fn poly(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    /// Independent check of the torus formula: multiply back out.
    fn satisfies_torus_identity(d: &LaurentPoly, p: i64, q: i64) -> bool {
        let lhs = &(d * &LaurentPoly::t_pow_minus_one(p)) * &LaurentPoly::t_pow_minus_one(q);
        let rhs = &LaurentPoly::t_pow_minus_one(p * q) * &LaurentPoly::t_pow_minus_one(1);
        // equal up to a monomial shift
        match (lhs.min_exp(), rhs.min_exp()) {
            (Some(a), Some(b)) => lhs.shift(b - a) == rhs,
            _ => false,
        }
    }

    #[test]
    fn torus_alexander_examples() {
        assert_eq!(torus_alexander(2, 3).unwrap(), poly(&[(1, 1), (0, -1), (-1, 1)]));
        assert_eq!(torus_alexander(2, 1).unwrap(), LaurentPoly::one());
        assert_eq!(
            torus_alexander(2, 5).unwrap(),
            poly(&[(2, 1), (1, -1), (0, 1), (-1, -1), (-2, 1)])
        );
        assert_eq!(torus_alexander(2, -3).unwrap(), torus_alexander(2, 3).unwrap());
        assert_eq!(torus_alexander(2, 4), Err(StaircaseError::NotCoprime { p: 2, q: 4 }));
        assert!(torus_alexander(0, 3).is_err());
        assert!(torus_alexander(2, 0).is_err());
    }

    #[test]
    fn torus_identity_holds() {
        for p in 1..=7 {
            for q in 1..=9 {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let d = torus_alexander(p, q).unwrap();
                assert!(satisfies_torus_identity(&d, p, q), "T({p},{q})");
                assert!(d.is_symmetric());
                assert_eq!(d.eval_at_one(), 1);
            }
        }
    }

    #[test]
    fn cable_alexander_examples() {
        let t23 = torus_alexander(2, 3).unwrap();
        assert_eq!(cable_alexander(&LaurentPoly::one(), 3, 4).unwrap(), torus_alexander(3, 4).unwrap());
        let expected = &poly(&[(2, 1), (0, -1), (-2, 1)]) * &torus_alexander(2, 7).unwrap();
        assert_eq!(cable_alexander(&t23, 2, 7).unwrap(), expected);
        assert_eq!(cable_alexander(&t23, 2, 1).unwrap(), poly(&[(2, 1), (0, -1), (-2, 1)]));
        for q in [1, 3, 5, 7, -3, -5] {
            let d = cable_alexander(&t23, 2, q).unwrap();
            assert_eq!(d.eval_at_one().abs(), 1);
            assert!(d.is_symmetric());
        }
        assert!(cable_alexander(&t23, 2, 6).is_err());
    }

    #[test]
    fn staircase_examples() {
        let t = staircase_complex(&StaircaseSpec::new(vec![1, 0, -1]).unwrap()).unwrap();
        let g: Vec<_> = t.generators().iter().map(|g| (g.alex, g.maslov)).collect();
        assert_eq!(g, vec![(1, 0), (0, -1), (-1, -2)]);
        assert_eq!(t.boundary(1), &[Term { target: 0, upower: 1 }, Term { target: 2, upower: 0 }]);
        assert_eq!(t.validate(), Ok(()));
        let abs = PlFunc::from_points(vec![
            (Rational::ZERO, Rational::ZERO),
            (Rational::ONE, -Rational::ONE),
            (Rational::TWO, Rational::ZERO),
        ])
        .unwrap();
        assert_eq!(t.upsilon().unwrap(), abs);

        let u = staircase_complex(&StaircaseSpec::new(vec![0]).unwrap()).unwrap();
        let gradings = |c: &Complex| c.generators().iter().map(|g| (g.alex, g.maslov)).collect::<Vec<_>>();
        assert_eq!(gradings(&u), gradings(&Complex::unknot()));
        assert_eq!(u.upsilon().unwrap(), PlFunc::zero());

        let t25 = staircase_complex(&StaircaseSpec::new(vec![2, 1, 0, -1, -2]).unwrap()).unwrap();
        assert_eq!(t25.generators().len(), 5);
        assert_eq!(t25.upsilon().unwrap().initial_slope(), Rational::from_int(-2));
        assert_eq!(t25.tau().unwrap(), 2);
    }

    #[test]
    fn malformed_specs() {
        assert!(StaircaseSpec::new(vec![1, 0]).is_err());
        assert!(StaircaseSpec::new(vec![1, 1, -1]).is_err());
        assert!(StaircaseSpec::new(vec![2, 0, -1]).is_err());
        assert!(StaircaseSpec::new(vec![]).is_err());
        assert!(staircase_complex(&StaircaseSpec { exponents: vec![0, 1, 2] }).is_err());
        assert!(serde_json::from_str::<StaircaseSpec>(r#"{"exponents":[1,0,-1],"x":1}"#).is_err());
    }

    #[test]
    fn lspace_examples() {
        let t = lspace_knot_complex(&torus_alexander(2, 3).unwrap()).unwrap();
        assert_eq!(t, staircase_complex(&StaircaseSpec::new(vec![1, 0, -1]).unwrap()).unwrap());

        // (t² − 1 + t⁻²)(t³ − t² + t − 1 + t⁻¹ − t⁻² + t⁻³), multiplied out by hand
        let d = cable_alexander(&torus_alexander(2, 3).unwrap(), 2, 7).unwrap();
        assert_eq!(d, poly(&[(5, 1), (4, -1), (1, 1), (0, -1), (-1, 1), (-4, -1), (-5, 1)]));
        let cable = lspace_knot_complex(&d).unwrap();
        assert_eq!(cable.generators().len(), 7);
        assert_eq!(cable.validate(), Ok(()));

        let fig8 = poly(&[(1, -1), (0, 3), (-1, -1)]);
        assert!(matches!(lspace_knot_complex(&fig8), Err(StaircaseError::NotLSpaceForm(_))));
        assert!(lspace_knot_complex(&LaurentPoly::default()).is_err());
        assert!(lspace_knot_complex(&poly(&[(1, 1), (0, -1)])).is_err());
    }

    #[test]
    fn negative_torus_knots_are_duals() {
        let m = torus_complex(2, -3).unwrap();
        assert_eq!(m.tau().unwrap(), -1);
        assert_eq!(m.upsilon().unwrap(), torus_complex(2, 3).unwrap().upsilon().unwrap().negate());
    }

    #[test]
    fn enumeration_is_exhaustive() {
        let specs = enumerate_specs(4, 9);
        assert_eq!(specs.len(), 16);
        assert_eq!(specs[0].exponents, vec![0]);
        for s in &specs {
            s.check().unwrap();
        }
        assert_eq!(enumerate_specs(4, 5).len(), 1 + 4 + 6);
    }
}
