//! Self-check suites with a machine-readable report.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cable::{cable_bounds, check_bounds, default_samples, hbar_check, sandwich_check, CableParams};
use crate::cfk::{CfkError, Complex};
use crate::pin::{candidate_singularities, lattice_from_hfk, pin_family_t2m3_cables, pin_t2m3_cable, t2m3_cable_table};
use crate::plfun::{Line, PlFunc};
use crate::rational::Rational;
use crate::staircase::{cable_alexander, enumerate_specs, lspace_knot_complex, staircase_complex, torus_alexander, torus_complex};
use crate::summand::{iterated_lower_bound, j_family, xi_interval, SummandVerdict};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("unknown suite {0:?}; expected paper-values, properties, bounds or summand")]
    UnknownSuite(String),
    #[error("{path}: {msg}")]
    Corpus { path: String, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    PaperValues,
    Properties,
    Bounds,
    Summand,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::PaperValues, Suite::Properties, Suite::Bounds, Suite::Summand];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::PaperValues => "paper-values",
            Suite::Properties => "properties",
            Suite::Bounds => "bounds",
            Suite::Summand => "summand",
        })
    }
}

impl FromStr for Suite {
    type Err = VerifyError;
    fn from_str(s: &str) -> Result<Self, VerifyError> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.to_string() == s)
            .ok_or_else(|| VerifyError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub id: String,
    pub description: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub suite: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
}

struct Builder {
    checks: Vec<Check>,
    warnings: Vec<String>,
}

impl Builder {
    fn new() -> Self {
        Builder { checks: Vec::new(), warnings: Vec::new() }
    }

    fn record(&mut self, id: &str, description: &str, outcome: Result<String, String>) {
        let (pass, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.checks.push(Check { id: id.into(), description: description.into(), pass, detail });
    }

    fn finish(self, suite: Suite) -> Report {
        Report {
            suite: suite.to_string(),
            pass: self.checks.iter().all(|c| c.pass),
            checks: self.checks,
            warnings: self.warnings,
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

fn r(n: i64) -> Rational {
    Rational::from_int(n)
}

fn torus_ups(p: i64, q: i64) -> Result<PlFunc, String> {
    torus_complex(p, q).map_err(err)?.upsilon().map_err(err)
}

fn vee(mid: i64) -> PlFunc {
    PlFunc::total_from_points(vec![(r(0), r(0)), (r(1), r(mid)), (r(2), r(0))]).unwrap()
}

/// Runs `suite`. `corpus` only affects the properties suite: when given, its
/// `*.json` complexes replace the built-in staircase battery.
pub fn run_suite(suite: Suite, corpus: Option<&Path>) -> Result<Report, VerifyError> {
    let mut b = Builder::new();
    match suite {
        Suite::PaperValues => reference_values(&mut b),
        Suite::Properties => {
            let base = match corpus {
                Some(dir) => load_corpus(dir)?,
                None => staircase_battery(),
            };
            if base.is_empty() {
                b.warnings.push("corpus is empty; every property holds vacuously".into());
            }
            property_battery(&mut b, &base);
        }
        Suite::Bounds => bounds(&mut b),
        Suite::Summand => summand(&mut b),
    }
    Ok(b.finish(suite))
}

/// Staircases with at most 9 generators and exponents at most 4.
pub fn staircase_battery() -> Vec<Complex> {
    enumerate_specs(4, 9).iter().map(|s| staircase_complex(s).expect("enumerated specs are valid")).collect()
}

fn load_corpus(dir: &Path) -> Result<Vec<Complex>, VerifyError> {
    let corpus_err = |path: &Path, msg: String| VerifyError::Corpus { path: path.display().to_string(), msg };
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| corpus_err(dir, e.to_string()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).map_err(|e| corpus_err(p, e.to_string()))?;
            let c: Complex = serde_json::from_str(&text).map_err(|e| corpus_err(p, e.to_string()))?;
            c.validate().map_err(|v| corpus_err(p, format!("{v:?}")))?;
            Ok(c)
        })
        .collect()
}

fn reference_values(b: &mut Builder) {
    b.record("A1", "Υ of T(2,3) is |1−t|−1", (|| {
        let f = torus_ups(2, 3)?;
        ensure(f == vee(-1), || format!("got {f:?}"))?;
        Ok(format!("{f:?}"))
    })());

    b.record("A2", "Υ of T(2,−3) is 1−|1−t|", (|| {
        let f = torus_ups(2, -3)?;
        ensure(f == vee(1), || format!("got {f:?}"))?;
        Ok(format!("{f:?}"))
    })());

    b.record("A3", "−Υ′(0) of T(p,q) is (p−1)(q−1)/2 for coprime 2 ≤ p < q ≤ 7", (|| {
        let mut n = 0;
        for p in 2..=7i64 {
            for q in p + 1..=7 {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                let slope = torus_ups(p, q)?.initial_slope();
                let want = Rational::new(((p - 1) * (q - 1)) as i128, 2);
                ensure(-slope == want, || format!("T({p},{q}): −Υ′(0) = {}, want {want}", -slope))?;
                n += 1;
            }
        }
        Ok(format!("{n} torus knots"))
    })());

    b.record("A5", "unknot cables attain the upper bound for q > 0 and the lower bound for q < 0", (|| {
        for (p, q, upper) in [(2, 3, true), (3, 4, true), (2, 5, true), (2, -3, false), (3, -4, false)] {
            let bounds = cable_bounds(&PlFunc::zero(), CableParams::new(p, q).map_err(err)?).map_err(err)?;
            let (lo, hi) = bounds.lower.domain();
            let f = torus_ups(p, q)?.restrict(lo, hi).map_err(err)?;
            let side = if upper { &bounds.upper } else { &bounds.lower };
            ensure(&f == side, || format!("T({p},{q}) = {f:?}, bound {side:?}"))?;
        }
        Ok("5 torus knots".into())
    })());

    b.record("cable-band", "bounds for (T(2,−3))_{2,17} on [1/2,1] are 2−11t and 2−10t", (|| {
        let bounds = cable_bounds(&torus_ups(2, -3)?, CableParams::new(2, 17).map_err(err)?).map_err(err)?;
        let half = Rational::new(1, 2);
        let band = |f: &PlFunc| f.restrict(half, r(1)).map_err(err);
        ensure(band(&bounds.lower)? == PlFunc::linear(half, r(1), Line::new(r(-11), r(2))), || "lower".into())?;
        ensure(band(&bounds.upper)? == PlFunc::linear(half, r(1), Line::new(r(-10), r(2))), || "upper".into())?;
        Ok("exact".into())
    })());

    b.record("lattice", "Maslov-0 lattice of (T(2,−3))_{2,17} and its only candidate singularity 2/3", (|| {
        let ls = lattice_from_hfk(&t2m3_cable_table(8).map_err(err)?);
        let mut want: Vec<(i64, i64)> = vec![(0, 7), (7, 0)];
        want.extend((-1..=9).map(|i| (i, 8 - i)));
        ensure(ls.points == want.into_iter().collect(), || format!("got {:?}", ls.points))?;
        let cands: Vec<Rational> = candidate_singularities(&ls).into_iter().collect();
        ensure(cands == vec![Rational::new(2, 3)], || format!("candidates {cands:?}"))?;
        Ok(format!("{} points", ls.points.len()))
    })());

    b.record("A6", "pinning gives −(n−1)t then 2−(n+2)t for n = 8..12; two survivors without bounds", (|| {
        for n in 8..=12 {
            let two_thirds = Rational::new(2, 3);
            let want = PlFunc::from_points(vec![
                (r(0), r(0)),
                (two_thirds, two_thirds * (1 - n)),
                (r(1), r(-n)),
                (Rational::TWO - two_thirds, two_thirds * (1 - n)),
                (r(2), r(0)),
            ])
            .map_err(err)?;
            let got = pin_family_t2m3_cables(n).map_err(err)?;
            ensure(got == want, || format!("n = {n}: got {got:?}"))?;
        }
        let loose = pin_t2m3_cable(8, false).map_err(err)?;
        ensure(loose.len() == 2 && loose.contains(&vee(-7)), || format!("without bounds: {loose:?}"))?;
        Ok("n = 8..12 unique".into())
    })());

    b.record("xi", "ξ intervals for (3,1), (3,2), (2,1)", (|| {
        for (p, n, lo, hi) in [(3, 1, (1, 3), (1, 2)), (3, 2, (1, 9), (1, 5)), (2, 1, (1, 2), (2, 3))] {
            let i = xi_interval(p, n).map_err(err)?;
            ensure((i.lo, i.hi) == (Rational::new(lo.0, lo.1), Rational::new(hi.0, hi.1)), || {
                format!("({p},{n}): [{}, {}]", i.lo, i.hi)
            })?;
        }
        Ok("exact".into())
    })());

    b.record("A7", "J_1..J_6 for p = 3 span an independent summand", a7());
}

fn a7() -> Result<String, String> {
    let cert = j_family(3, 6).map_err(err)?;
    ensure(cert.verdict == SummandVerdict::IndependentSummand, || format!("{:?}", cert.failure))?;
    for w in cert.family.windows(2) {
        ensure(w[0].interval.before(&w[1].interval), || format!("{} overlaps {}", w[0].label, w[1].label))?;
    }
    ensure(cert.family.iter().all(|e| e.slope_change.is_pass()), || "slope change".into())?;
    Ok(format!("rank ≥ {}", cert.rank_lower_bound))
}

/// Property checks on every complex in `base`, on their duals and on all
/// pairwise tensor products `A ⊗ B` and `A ⊗ B*`.
fn property_battery(b: &mut Builder, base: &[Complex]) {
    let mut items: Vec<(Complex, PlFunc)> = Vec::new();
    let mut failures: Vec<(&str, String)> = Vec::new();
    let mut counts = [0usize; 3];
    let mut skipped_oracle = 0;

    let mut computed: Vec<(Complex, PlFunc)> = Vec::new();
    for c in base {
        match c.upsilon() {
            Ok(f) => computed.push((c.clone(), f)),
            Err(e) => failures.push(("compute", format!("{}: {e}", c.name()))),
        }
    }
    for (c, f) in &computed {
        let d = c.dual();
        match d.upsilon() {
            Ok(g) => {
                counts[0] += 1;
                if g != f.negate() {
                    failures.push(("dual", format!("{}: Υ(dual) ≠ −Υ", c.name())));
                }
                items.push((d, g));
            }
            Err(e) => failures.push(("compute", format!("{}: {e}", d.name()))),
        }
    }
    for (i, (a, fa)) in computed.iter().enumerate() {
        for (bc, fb) in &computed[i..] {
            for mirrored in [false, true] {
                let (other, fo) = if mirrored { (bc.dual(), fb.negate()) } else { (bc.clone(), fb.clone()) };
                let t = a.tensor(&other);
                match t.upsilon() {
                    Ok(g) => {
                        counts[1] += 1;
                        if Ok(&g) != fa.add(&fo).as_ref() {
                            failures.push(("tensor", format!("{}: Υ not additive", t.name())));
                        }
                        items.push((t, g));
                    }
                    Err(e) => failures.push(("compute", format!("{}: {e}", t.name()))),
                }
            }
        }
    }
    items.splice(0..0, computed);

    for (c, f) in &items {
        let name = c.name();
        if f.eval(Rational::ZERO) != Ok(Rational::ZERO) {
            failures.push(("zero", format!("{name}: Υ(0) ≠ 0")));
        }
        if &f.reflect() != f {
            failures.push(("symmetry", format!("{name}: Υ(t) ≠ Υ(2−t)")));
        }
        if let Some((_, _, s)) = f.slopes().into_iter().find(|(_, _, s)| !s.is_integer()) {
            failures.push(("slopes", format!("{name}: slope {s}")));
        }
        for t in f.singularities() {
            let jump = t.half() * f.delta_slope(t).unwrap_or(Rational::ZERO);
            if !jump.is_integer() {
                failures.push(("jumps", format!("{name}: (t/2)ΔΥ′ = {jump} at {t}")));
            }
        }
        let g = c.genus_bound();
        let times = PlFunc::comparison_times(&[f], Rational::ZERO, Rational::ONE);
        for t in times {
            let v = f.at(t);
            if v.abs() > t * g {
                failures.push(("genus", format!("{name}: |Υ({t})| = {} > {t}·{g}", v.abs())));
            }
        }
        match c.upsilon_oracle() {
            Ok(o) => {
                counts[2] += 1;
                if &o != f {
                    failures.push(("oracle", format!("{name}: production {f:?} vs oracle {o:?}")));
                }
            }
            Err(CfkError::OracleCapExceeded { .. }) => skipped_oracle += 1,
            Err(e) => failures.push(("oracle", format!("{name}: {e}"))),
        }
    }

    if skipped_oracle > 0 {
        b.warnings.push(format!("{skipped_oracle} complexes exceed the oracle cap and were not cross-checked"));
    }
    let total = items.len();
    let rows: [(&str, &str, String); 9] = [
        ("compute", "Υ computable for every complex", format!("{total} complexes")),
        ("zero", "Υ(0) = 0", format!("{total} complexes")),
        ("symmetry", "Υ(t) = Υ(2−t)", format!("{total} complexes")),
        ("tensor", "Υ(A ⊗ B) = Υ(A) + Υ(B)", format!("{} products", counts[1])),
        ("dual", "Υ(C*) = −Υ(C)", format!("{} duals", counts[0])),
        ("slopes", "every slope is an integer", format!("{total} complexes")),
        ("jumps", "(t/2)ΔΥ′(t) is an integer at every singularity", format!("{total} complexes")),
        ("genus", "|Υ(t)| ≤ t·g on [0,1]", format!("{total} complexes")),
        ("oracle", "sweep agrees with brute-force enumeration", format!("{} compared, {skipped_oracle} beyond cap", counts[2])),
    ];
    for (id, description, ok) in rows {
        let bad: Vec<&String> = failures.iter().filter(|(k, _)| *k == id).map(|(_, m)| m).collect();
        let outcome = if bad.is_empty() {
            Ok(ok)
        } else {
            Err(format!("{} failures; first: {}", bad.len(), bad[0]))
        };
        b.record(id, description, outcome);
    }
}

fn bounds(b: &mut Builder) {
    b.record("A4", "L-space cables (T(2,3))_{2,q}, q = 3..11 odd, lie within the cabling bounds", (|| {
        let d = torus_alexander(2, 3).map_err(err)?;
        let ups_k = torus_ups(2, 3)?;
        for q in [3, 5, 7, 9, 11] {
            let cable = lspace_knot_complex(&cable_alexander(&d, 2, q).map_err(err)?).map_err(err)?;
            let bounds = cable_bounds(&ups_k, CableParams::new(2, q).map_err(err)?).map_err(err)?;
            let cert = check_bounds(&cable.upsilon().map_err(err)?, &bounds).map_err(err)?;
            ensure(cert.is_pass(), || format!("q = {q}: {:?}", cert.witness))?;
        }
        Ok("5 cables".into())
    })());

    b.record("A9-sandwich", "filtration sandwich holds on every staircase battery generator", (|| {
        let mut runs = 0;
        for c in staircase_battery() {
            let alex: Vec<i64> = c.generators().iter().map(|g| g.alex).collect();
            for p in 1..=3i64 {
                let gens: Vec<(i64, i64)> = alex.iter().flat_map(|&a| (0..p).map(move |l| (a, l))).collect();
                for n in -2..=2 {
                    let cert = sandwich_check(&gens, p, n, &default_samples(p as u32)).map_err(err)?;
                    ensure(cert.is_pass(), || format!("{} p={p} n={n}: {:?}", c.name(), cert.witness))?;
                    runs += 1;
                }
            }
        }
        Ok(format!("{runs} runs of 16 samples"))
    })());

    b.record("A9-hbar", "h̄ monotonicity for p = 2 cable families", (|| {
        let unknot: Vec<(i64, PlFunc)> =
            [-7, -5, -3, 3, 5, 7, 9].iter().map(|&q| torus_ups(2, q).map(|f| (q, f))).collect::<Result<_, _>>()?;
        let cert = hbar_check(&unknot, 2).map_err(err)?;
        ensure(cert.is_pass(), || format!("unknot cables: {:?}", cert.witness))?;
        let d = torus_alexander(2, 3).map_err(err)?;
        let mut trefoil = Vec::new();
        for q in [3, 5, 7, 9, 11] {
            let c = lspace_knot_complex(&cable_alexander(&d, 2, q).map_err(err)?).map_err(err)?;
            trefoil.push((q, c.upsilon().map_err(err)?));
        }
        let cert = hbar_check(&trefoil, 2).map_err(err)?;
        ensure(cert.is_pass(), || format!("trefoil cables: {:?}", cert.witness))?;
        Ok("12 knots".into())
    })());
}

fn summand(b: &mut Builder) {
    b.record("A7", "J_1..J_6 for p = 3 span an independent summand", a7());

    b.record("disjoint", "ξ intervals strictly decrease for p = 2..10, n = 2..12", (|| {
        for p in 2..=10 {
            for n in 2..=12 {
                let (now, prev) = (xi_interval(p, n).map_err(err)?, xi_interval(p, n - 1).map_err(err)?);
                ensure(now.before(&prev), || format!("p = {p}, n = {n}"))?;
            }
        }
        Ok("99 pairs".into())
    })());

    b.record("iterated", "iterated lower bound from Υ_D is t−2 on [1/pⁿ, 2/pⁿ]", (|| {
        let ups_d = torus_ups(2, 3)?;
        for p in 2..=6i64 {
            for n in 1..=5u32 {
                let pn = (p as i128).pow(n);
                let want = PlFunc::linear(Rational::new(1, pn), Rational::new(2, pn), Line::new(r(1), r(-2)));
                let got = iterated_lower_bound(&ups_d, p, n).map_err(err)?;
                ensure(got == want, || format!("p = {p}, n = {n}: {got:?}"))?;
            }
        }
        Ok("25 cases".into())
    })());
}
