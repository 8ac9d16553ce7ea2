//! Continuous piecewise-linear functions with exact rational breakpoints.
//!
//! A [`PlFunc`] lives on a closed interval `[lo, hi]`. Upsilon functions are
//! *total*, meaning their domain is `[0, 2]`; the cabling bounds produce
//! *partial* functions on sub-intervals such as `[0, 2/p]`. Binary operations
//! require identical domains.
//!
//! Every value is kept in canonical form: breakpoint times strictly increase
//! and no interior breakpoint has equal slopes on both sides. Two functions
//! are therefore equal exactly when their breakpoint lists are equal, and the
//! derived `PartialEq` is extensional equality.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlError {
    #[error("t = {t} lies outside the domain [{lo}, {hi}]")]
    OutOfDomain { t: Rational, lo: Rational, hi: Rational },
    #[error("domain mismatch: [{0}, {1}] vs [{2}, {3}]")]
    DomainMismatch(Rational, Rational, Rational, Rational),
    #[error("envelope of an empty set of lines")]
    EmptyEnvelope,
    #[error("function is not total on [0, 2] (domain [{0}, {1}])")]
    NotTotal(Rational, Rational),
    #[error("malformed piecewise-linear function: {0}")]
    Malformed(String),
}

/// An affine function `t ↦ slope·t + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Line {
    pub slope: Rational,
    pub intercept: Rational,
}

impl Line {
    pub fn new(slope: Rational, intercept: Rational) -> Self {
        Line { slope, intercept }
    }

    pub fn at(&self, t: Rational) -> Rational {
        self.slope * t + self.intercept
    }

    /// The unique `t` where two non-parallel lines meet.
    pub fn crossing(&self, other: &Line) -> Option<Rational> {
        if self.slope == other.slope {
            None
        } else {
            Some((other.intercept - self.intercept) / (self.slope - other.slope))
        }
    }
}

/// A continuous piecewise-linear function in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlFunc {
    points: Vec<(Rational, Rational)>,
}

fn slope_between(a: &(Rational, Rational), b: &(Rational, Rational)) -> Rational {
    (b.1 - a.1) / (b.0 - a.0)
}

impl PlFunc {
    /// Builds a function from `(t, value)` pairs, canonicalizing. Times must
    /// strictly increase and at least two points are required.
    pub fn from_points(points: Vec<(Rational, Rational)>) -> Result<Self, PlError> {
        if points.len() < 2 {
            return Err(PlError::Malformed("need at least two breakpoints".into()));
        }
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(PlError::Malformed("breakpoint times must strictly increase".into()));
        }
        Ok(Self::canonical(points))
    }

    fn canonical(points: Vec<(Rational, Rational)>) -> Self {
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(points.len());
        for p in points {
            if out.len() >= 2 {
                let n = out.len();
                if slope_between(&out[n - 2], &out[n - 1]) == slope_between(&out[n - 1], &p) {
                    out.pop();
                }
            }
            out.push(p);
        }
        PlFunc { points: out }
    }

    /// Like [`PlFunc::from_points`], but also requires the domain `[0, 2]`.
    pub fn total_from_points(points: Vec<(Rational, Rational)>) -> Result<Self, PlError> {
        let f = Self::from_points(points)?;
        f.require_total()?;
        Ok(f)
    }

    /// The zero function on `[0, 2]`.
    pub fn zero() -> Self {
        Self::constant(Rational::ZERO, Rational::TWO, Rational::ZERO)
    }

    pub fn constant(lo: Rational, hi: Rational, value: Rational) -> Self {
        Self::linear(lo, hi, Line::new(Rational::ZERO, value))
    }

    /// `line` restricted to `[lo, hi]`. Panics unless `lo < hi`.
    pub fn linear(lo: Rational, hi: Rational, line: Line) -> Self {
        assert!(lo < hi, "empty domain [{lo}, {hi}]");
        PlFunc { points: vec![(lo, line.at(lo)), (hi, line.at(hi))] }
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    pub fn domain(&self) -> (Rational, Rational) {
        (self.points[0].0, self.points[self.points.len() - 1].0)
    }

    pub fn is_total(&self) -> bool {
        self.domain() == (Rational::ZERO, Rational::TWO)
    }

    pub fn require_total(&self) -> Result<(), PlError> {
        if self.is_total() {
            Ok(())
        } else {
            let (lo, hi) = self.domain();
            Err(PlError::NotTotal(lo, hi))
        }
    }

    pub fn contains(&self, t: Rational) -> bool {
        let (lo, hi) = self.domain();
        lo <= t && t <= hi
    }

    fn check_domain(&self, other: &PlFunc) -> Result<(), PlError> {
        let (a, b) = self.domain();
        let (c, d) = other.domain();
        if (a, b) == (c, d) {
            Ok(())
        } else {
            Err(PlError::DomainMismatch(a, b, c, d))
        }
    }

    /// Exact linear interpolation.
    pub fn eval(&self, t: Rational) -> Result<Rational, PlError> {
        let (lo, hi) = self.domain();
        if t < lo || t > hi {
            return Err(PlError::OutOfDomain { t, lo, hi });
        }
        let idx = self.points.partition_point(|p| p.0 < t);
        let right = self.points[idx];
        if right.0 == t {
            return Ok(right.1);
        }
        let left = self.points[idx - 1];
        Ok(left.1 + slope_between(&left, &right) * (t - left.0))
    }

    /// Evaluation for callers that already know `t` is in the domain.
    pub(crate) fn at(&self, t: Rational) -> Rational {
        self.eval(t).expect("evaluation inside the domain")
    }

    fn merged_times(&self, other: &PlFunc) -> Vec<Rational> {
        let mut ts: Vec<Rational> = self
            .points
            .iter()
            .chain(other.points.iter())
            .map(|p| p.0)
            .collect();
        ts.sort();
        ts.dedup();
        ts
    }

    fn combine(&self, other: &PlFunc, op: impl Fn(Rational, Rational) -> Rational) -> Result<PlFunc, PlError> {
        self.check_domain(other)?;
        let points = self
            .merged_times(other)
            .into_iter()
            .map(|t| (t, op(self.at(t), other.at(t))))
            .collect();
        Ok(Self::canonical(points))
    }

    fn map_values(&self, op: impl Fn(Rational) -> Rational) -> PlFunc {
        Self::canonical(self.points.iter().map(|&(t, v)| (t, op(v))).collect())
    }

    pub fn add(&self, other: &PlFunc) -> Result<PlFunc, PlError> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &PlFunc) -> Result<PlFunc, PlError> {
        self.combine(other, |a, b| a - b)
    }

    pub fn scale(&self, k: i64) -> PlFunc {
        self.map_values(|v| v * k)
    }

    pub fn negate(&self) -> PlFunc {
        self.map_values(|v| -v)
    }

    /// Adds an affine function on the same domain.
    pub fn add_line(&self, line: Line) -> PlFunc {
        Self::canonical(self.points.iter().map(|&(t, v)| (t, v + line.at(t))).collect())
    }

    /// `t ↦ f(2 − t)`. A function on `[lo, hi]` becomes one on `[2 − hi, 2 − lo]`.
    pub fn reflect(&self) -> PlFunc {
        let points = self
            .points
            .iter()
            .rev()
            .map(|&(t, v)| (Rational::TWO - t, v))
            .collect();
        PlFunc { points }
    }

    /// `t ↦ f(p·t)` on `[lo/p, hi/p]`.
    pub fn precompose_scale(&self, p: u32) -> PlFunc {
        assert!(p >= 1, "scale factor must be positive");
        let p = Rational::from_int(p as i64);
        PlFunc { points: self.points.iter().map(|&(t, v)| (t / p, v)).collect() }
    }

    /// Restriction to the sub-interval `[lo, hi]`.
    pub fn restrict(&self, lo: Rational, hi: Rational) -> Result<PlFunc, PlError> {
        let (a, b) = self.domain();
        if lo < a || hi > b || lo >= hi {
            return Err(PlError::DomainMismatch(a, b, lo, hi));
        }
        let mut points = vec![(lo, self.at(lo))];
        points.extend(self.points.iter().copied().filter(|p| lo < p.0 && p.0 < hi));
        points.push((hi, self.at(hi)));
        Ok(Self::canonical(points))
    }

    fn envelope(lines: &[Line], lo: Rational, hi: Rational, lower: bool) -> Result<PlFunc, PlError> {
        if lines.is_empty() {
            return Err(PlError::EmptyEnvelope);
        }
        assert!(lo < hi, "empty domain [{lo}, {hi}]");
        // Parallel lines never cross, and only the extreme one of each slope
        // can contribute.
        let mut lines = lines.to_vec();
        lines.sort_by(|a, b| a.slope.cmp(&b.slope).then(a.intercept.cmp(&b.intercept)));
        lines.dedup_by(|next, kept| {
            if next.slope != kept.slope {
                return false;
            }
            if !lower {
                *kept = *next;
            }
            true
        });

        let mut cuts = vec![lo, hi];
        for (i, a) in lines.iter().enumerate() {
            for b in &lines[i + 1..] {
                if let Some(t) = a.crossing(b) {
                    if lo < t && t < hi {
                        cuts.push(t);
                    }
                }
            }
        }
        cuts.sort();
        cuts.dedup();

        let pick = |t: Rational| -> Line {
            let better = |a: &Line, b: &Line| {
                let (va, vb) = (a.at(t), b.at(t));
                if lower {
                    va < vb
                } else {
                    va > vb
                }
            };
            let mut best = lines[0];
            for l in &lines[1..] {
                if better(l, &best) {
                    best = *l;
                }
            }
            best
        };

        let mut points = Vec::with_capacity(cuts.len());
        for w in cuts.windows(2) {
            let line = pick(w[0].midpoint(&w[1]));
            if points.is_empty() {
                points.push((w[0], line.at(w[0])));
            }
            points.push((w[1], line.at(w[1])));
        }
        Ok(Self::canonical(points))
    }

    /// Pointwise minimum of a non-empty set of lines on `[lo, hi]`.
    pub fn lower_envelope(lines: &[Line], lo: Rational, hi: Rational) -> Result<PlFunc, PlError> {
        Self::envelope(lines, lo, hi, true)
    }

    /// Pointwise maximum of a non-empty set of lines on `[lo, hi]`.
    pub fn upper_envelope(lines: &[Line], lo: Rational, hi: Rational) -> Result<PlFunc, PlError> {
        Self::envelope(lines, lo, hi, false)
    }

    fn select(&self, other: &PlFunc, take_min: bool) -> Result<PlFunc, PlError> {
        self.check_domain(other)?;
        let ts = self.merged_times(other);
        let diff = |t: Rational| self.at(t) - other.at(t);
        let choose = |t: Rational| {
            let (a, b) = (self.at(t), other.at(t));
            if take_min {
                a.min(b)
            } else {
                a.max(b)
            }
        };
        let mut points = Vec::with_capacity(ts.len() * 2);
        for (i, &t) in ts.iter().enumerate() {
            if i > 0 {
                let s = ts[i - 1];
                let (ds, dt) = (diff(s), diff(t));
                if (ds.is_negative() && dt.is_positive()) || (ds.is_positive() && dt.is_negative()) {
                    let x = s + (t - s) * ds / (ds - dt);
                    points.push((x, self.at(x)));
                }
            }
            points.push((t, choose(t)));
        }
        Ok(Self::canonical(points))
    }

    /// Pointwise minimum of two functions on the same domain.
    pub fn pointwise_min(&self, other: &PlFunc) -> Result<PlFunc, PlError> {
        self.select(other, true)
    }

    /// Pointwise maximum of two functions on the same domain.
    pub fn pointwise_max(&self, other: &PlFunc) -> Result<PlFunc, PlError> {
        self.select(other, false)
    }

    /// The linear pieces as `(start, end, slope)`.
    pub fn slopes(&self) -> Vec<(Rational, Rational, Rational)> {
        self.points
            .windows(2)
            .map(|w| (w[0].0, w[1].0, slope_between(&w[0], &w[1])))
            .collect()
    }

    pub fn initial_slope(&self) -> Rational {
        slope_between(&self.points[0], &self.points[1])
    }

    /// Interior breakpoints, i.e. the points where the slope changes.
    pub fn singularities(&self) -> Vec<Rational> {
        self.points[1..self.points.len() - 1].iter().map(|p| p.0).collect()
    }

    /// Right slope minus left slope at an interior point `t0`; zero if `t0`
    /// is not a breakpoint.
    pub fn delta_slope(&self, t0: Rational) -> Result<Rational, PlError> {
        let (lo, hi) = self.domain();
        if t0 <= lo || t0 >= hi {
            return Err(PlError::OutOfDomain { t: t0, lo, hi });
        }
        match self.points.binary_search_by(|p| p.0.cmp(&t0)) {
            Ok(i) => Ok(slope_between(&self.points[i], &self.points[i + 1])
                - slope_between(&self.points[i - 1], &self.points[i])),
            Err(_) => Ok(Rational::ZERO),
        }
    }

    /// Breakpoint times together with the midpoints between them: the
    /// sample set on which two PL functions can be compared exactly.
    pub fn comparison_times(fs: &[&PlFunc], lo: Rational, hi: Rational) -> Vec<Rational> {
        let mut ts: Vec<Rational> = vec![lo, hi];
        for f in fs {
            ts.extend(f.points.iter().map(|p| p.0).filter(|t| lo <= *t && *t <= hi));
        }
        ts.sort();
        ts.dedup();
        let mids: Vec<Rational> = ts.windows(2).map(|w| w[0].midpoint(&w[1])).collect();
        ts.extend(mids);
        ts.sort();
        ts
    }
}

impl fmt::Debug for PlFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlFunc[")?;
        for (i, (t, v)) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({t}, {v})")?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlFuncJson {
    domain: [Rational; 2],
    breakpoints: Vec<[Rational; 2]>,
}

impl Serialize for PlFunc {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let (lo, hi) = self.domain();
        PlFuncJson {
            domain: [lo, hi],
            breakpoints: self.points.iter().map(|&(t, v)| [t, v]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PlFunc {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = PlFuncJson::deserialize(deserializer)?;
        let f = PlFunc::from_points(raw.breakpoints.into_iter().map(|[t, v]| (t, v)).collect())
            .map_err(D::Error::custom)?;
        if f.domain() != (raw.domain[0], raw.domain[1]) {
            return Err(D::Error::custom("domain does not match the first and last breakpoints"));
        }
        Ok(f)
    }
}
