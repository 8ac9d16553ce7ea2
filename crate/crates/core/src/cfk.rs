//! Finite models of the full knot Floer complex and the computation of
//! τ and Υ from them.
//!
//! A [`Complex`] is described by its *base generators*, each sitting at
//! algebraic grading 0 with an Alexander and a Maslov grading, together with
//! a differential whose terms carry non-negative powers of `U`. The full
//! complex is the free `F₂[U, U⁻¹]`-module on the base generators: the
//! element `U⁻ᵏ·x` has algebraic grading `k`, Alexander grading `A(x) + k`
//! and Maslov grading `M(x) + 2k`.
//!
//! Because `U` shifts the Maslov grading by two, each base generator
//! contributes exactly one element to any fixed Maslov grading. The
//! Maslov-0 chain group is therefore finite and the whole computation of
//!
//! ```text
//! ν(t) = min { s : H₀(F_t ≤ s) → H₀(C) is non-zero },   Υ(t) = −2ν(t)
//! ```
//!
//! happens inside three finite slices (Maslov −1, 0 and 1). On the Maslov-0
//! slice the grading `F_t = (t/2)·Alex + (1 − t/2)·Alg` of `U⁻ᵏ·x` is the line
//! `k + (t/2)·A(x)`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::gf2::{BitVec, EchelonBasis, Gf2Map};
use crate::plfun::{Line, PlError, PlFunc};
use crate::rational::Rational;

/// Largest boundary dimension the brute-force oracle will enumerate.
pub const ORACLE_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Generator {
    pub name: String,
    pub alex: i64,
    pub maslov: i64,
}

impl Generator {
    pub fn new(name: impl Into<String>, alex: i64, maslov: i64) -> Self {
        Generator { name: name.into(), alex, maslov }
    }
}

/// One summand `U^upower · target` of a boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub target: usize,
    pub upower: u32,
}

/// A structural problem found by [`Complex::validate`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("complex has no generators")]
    Empty,
    #[error("generator name {0:?} is used more than once")]
    DuplicateName(String),
    #[error("term {from} -> U^{upower} {to} is listed more than once")]
    DuplicateTerm { from: String, to: String, upower: u32 },
    #[error("term {from} -> U^{upower} {to} does not lower the Maslov grading by one")]
    Maslov { from: String, to: String, upower: u32 },
    #[error("term {from} -> U^{upower} {to} raises the Alexander filtration")]
    Filtration { from: String, to: String, upower: u32 },
    #[error("d^2 {from} contains U^{upower} {to}")]
    DSquared { from: String, to: String, upower: u32 },
    #[error("not knot-like: rank H_0 = {h0}, rank H_1 = {h1} (expected 1 and 0)")]
    NotKnotLike { h0: usize, h1: usize },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CfkError {
    #[error("invalid complex: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("differential of {0:?} given more than once")]
    DuplicateDifferential(String),
    #[error("oracle cap exceeded: boundary dimension {dim} > {cap}")]
    OracleCapExceeded { dim: usize, cap: usize },
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error(transparent)]
    Pl(#[from] PlError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Complex {
    name: String,
    generators: Vec<Generator>,
    differential: Vec<Vec<Term>>,
}

impl Complex {
    /// Builds a complex from generators and, for each generator, the terms of
    /// its boundary. Panics if a term points outside the generator list.
    pub fn new(name: impl Into<String>, generators: Vec<Generator>, differential: Vec<Vec<Term>>) -> Self {
        assert_eq!(generators.len(), differential.len());
        let n = generators.len();
        assert!(
            differential.iter().flatten().all(|t| t.target < n),
            "differential term points outside the generator list"
        );
        Complex { name: name.into(), generators, differential }
    }

    /// Builds a complex with the differential given by generator names.
    pub fn from_named(
        name: impl Into<String>,
        generators: Vec<Generator>,
        differential: &[(&str, &[(&str, u32)])],
    ) -> Result<Self, CfkError> {
        let index: HashMap<&str, usize> =
            generators.iter().enumerate().map(|(i, g)| (g.name.as_str(), i)).collect();
        let lookup = |s: &str| index.get(s).copied().ok_or_else(|| CfkError::UnknownGenerator(s.into()));
        let mut diff = vec![Vec::new(); generators.len()];
        let mut seen = vec![false; generators.len()];
        for (from, terms) in differential {
            let i = lookup(from)?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(CfkError::DuplicateDifferential(from.to_string()));
            }
            for (to, upower) in terms.iter() {
                diff[i].push(Term { target: lookup(to)?, upower: *upower });
            }
        }
        Ok(Complex::new(name, generators, diff))
    }

    /// The one-generator complex of the unknot.
    pub fn unknot() -> Self {
        Complex::new("unknot", vec![Generator::new("x", 0, 0)], vec![vec![]])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn boundary(&self, g: usize) -> &[Term] {
        &self.differential[g]
    }

    /// Checks gradings, filtration, `∂² = 0` and that the homology looks like
    /// that of a knot complex (rank one in each even degree, zero in odd).
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        if self.generators.is_empty() {
            return Err(vec![Violation::Empty]);
        }
        let mut names = std::collections::HashSet::new();
        for g in &self.generators {
            if !names.insert(g.name.as_str()) {
                out.push(Violation::DuplicateName(g.name.clone()));
            }
        }
        let name = |i: usize| self.generators[i].name.clone();
        for (i, terms) in self.differential.iter().enumerate() {
            let src = &self.generators[i];
            let mut seen = std::collections::HashSet::new();
            for t in terms {
                let dst = &self.generators[t.target];
                if !seen.insert(*t) {
                    out.push(Violation::DuplicateTerm { from: name(i), to: name(t.target), upower: t.upower });
                }
                if dst.maslov - 2 * t.upower as i64 != src.maslov - 1 {
                    out.push(Violation::Maslov { from: name(i), to: name(t.target), upower: t.upower });
                }
                if dst.alex - (t.upower as i64) > src.alex {
                    out.push(Violation::Filtration { from: name(i), to: name(t.target), upower: t.upower });
                }
            }
        }
        // ∂²: collect U^a·U^b·h with multiplicity mod 2.
        for (i, terms) in self.differential.iter().enumerate() {
            let mut parity: BTreeMap<(usize, u32), bool> = BTreeMap::new();
            for t in terms {
                for s in &self.differential[t.target] {
                    *parity.entry((s.target, t.upower + s.upower)).or_default() ^= true;
                }
            }
            for ((to, upower), odd) in parity {
                if odd {
                    out.push(Violation::DSquared { from: name(i), to: name(to), upower });
                }
            }
        }
        if out.is_empty() {
            let (h0, h1) = self.homology_ranks();
            if (h0, h1) != (1, 0) {
                out.push(Violation::NotKnotLike { h0, h1 });
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    fn checked(&self) -> Result<(), CfkError> {
        self.validate().map_err(CfkError::Invalid)
    }

    /// The elements of Maslov grading `degree`: one `(generator, k)` per
    /// generator of matching parity, standing for `U⁻ᵏ·x`.
    fn slice(&self, degree: i64) -> Vec<(usize, i64)> {
        self.generators
            .iter()
            .enumerate()
            .filter(|(_, g)| (degree - g.maslov).rem_euclid(2) == 0)
            .map(|(i, g)| (i, (degree - g.maslov) / 2))
            .collect()
    }

    /// The differential from Maslov grading `degree` to `degree − 1`.
    /// Assumes Maslov compatibility has been checked.
    fn boundary_map(&self, degree: i64) -> (Vec<(usize, i64)>, Gf2Map) {
        let src = self.slice(degree);
        let dst = self.slice(degree - 1);
        let mut pos = vec![usize::MAX; self.generators.len()];
        for (j, (g, _)) in dst.iter().enumerate() {
            pos[*g] = j;
        }
        let columns = src
            .iter()
            .map(|&(g, _)| {
                let mut col = BitVec::zeros(dst.len());
                for t in &self.differential[g] {
                    col.flip(pos[t.target]);
                }
                col
            })
            .collect();
        (src, Gf2Map::new(dst.len(), columns))
    }

    fn homology_rank(&self, degree: i64) -> usize {
        let (_, d_out) = self.boundary_map(degree);
        let (_, d_in) = self.boundary_map(degree + 1);
        d_out.kernel_basis().len() - d_in.rank()
    }

    fn homology_ranks(&self) -> (usize, usize) {
        (self.homology_rank(0), self.homology_rank(1))
    }

    /// Everything the Υ computations need about the Maslov-0 slice.
    fn degree_zero(&self) -> Result<DegreeZero, CfkError> {
        self.checked()?;
        let (elements, d0) = self.boundary_map(0);
        let (_, d1) = self.boundary_map(1);
        let boundaries = d1.image_basis();
        let mut boundary_span = EchelonBasis::new(elements.len());
        for b in &boundaries {
            boundary_span.insert(b.clone());
        }
        let distinguished = d0
            .kernel_basis()
            .into_iter()
            .find(|z| !boundary_span.contains(z))
            .ok_or_else(|| CfkError::Internal("no cycle outside the boundaries".into()))?;
        let lines = elements
            .iter()
            .map(|&(g, k)| {
                Line::new(Rational::from_int(self.generators[g].alex).half(), Rational::from_int(k))
            })
            .collect();
        Ok(DegreeZero { elements, lines, d0, boundaries, boundary_span, distinguished })
    }

    /// Υ as an exact function on `[0, 2]`.
    ///
    /// Between consecutive crossing times of the `F_t` lines the order of the
    /// Maslov-0 elements is fixed, so a single filtered sweep at the midpoint
    /// identifies the element whose line realizes `ν` on the whole interval.
    pub fn upsilon(&self) -> Result<PlFunc, CfkError> {
        let dz = self.degree_zero()?;
        let (lo, hi) = (Rational::ZERO, Rational::TWO);
        let mut cuts = vec![lo, hi];
        for (i, a) in dz.lines.iter().enumerate() {
            for b in &dz.lines[i + 1..] {
                if let Some(t) = a.crossing(b) {
                    if lo < t && t < hi {
                        cuts.push(t);
                    }
                }
            }
        }
        cuts.sort();
        cuts.dedup();

        let mut points: Vec<(Rational, Rational)> = Vec::with_capacity(cuts.len());
        for w in cuts.windows(2) {
            let line = dz.lines[self.sweep(&dz, w[0].midpoint(&w[1]))?];
            let (left, right) = (line.at(w[0]), line.at(w[1]));
            match points.last() {
                Some(&(_, v)) if v != left => {
                    return Err(CfkError::Internal(format!("ν is discontinuous at t = {}", w[0])));
                }
                Some(_) => {}
                None => points.push((w[0], left)),
            }
            points.push((w[1], right));
        }
        Ok(PlFunc::from_points(points)?.scale(-2))
    }

    /// Adds Maslov-0 elements in increasing `F_t` order and returns the index
    /// of the element whose arrival first produces a cycle outside the
    /// boundaries.
    fn sweep(&self, dz: &DegreeZero, t: Rational) -> Result<usize, CfkError> {
        let n = dz.elements.len();
        let mut order: Vec<usize> = (0..n).collect();
        let key = |e: usize| {
            let (g, k) = dz.elements[e];
            (dz.lines[e].at(t), self.generators[g].alex + k, self.generators[g].name.as_str())
        };
        order.sort_by(|&a, &b| key(a).cmp(&key(b)));

        let mut sublevel = EchelonBasis::new(dz.d0.rows);
        for e in order {
            let image = dz.d0.columns[e].clone();
            if let Some(cycle) = sublevel.insert_tagged(image, BitVec::unit(n, e)) {
                if !dz.boundary_span.contains(&cycle) {
                    return Ok(e);
                }
            }
        }
        Err(CfkError::Internal(format!("sweep at t = {t} never reached the generator of H_0")))
    }

    /// Υ by brute force: the minimum, over every cycle `z* + b` with `b` a
    /// Maslov-0 boundary, of the largest `F_t` among the cycle's terms.
    pub fn upsilon_oracle(&self) -> Result<PlFunc, CfkError> {
        let dz = self.degree_zero()?;
        let dim = dz.boundaries.len();
        if dim > ORACLE_CAP {
            return Err(CfkError::OracleCapExceeded { dim, cap: ORACLE_CAP });
        }
        // Only the set of distinct F_t lines in a cycle matters, and a cycle
        // whose line set contains another cycle's line set cannot do better.
        let mut distinct: Vec<Line> = dz.lines.clone();
        distinct.sort();
        distinct.dedup();
        let line_of: Vec<usize> = dz.lines.iter().map(|l| distinct.binary_search(l).unwrap()).collect();
        let line_set = |z: &BitVec| {
            let mut m = BitVec::zeros(distinct.len());
            for e in z.ones() {
                m.set(line_of[e]);
            }
            m
        };

        let mut sets = std::collections::HashSet::new();
        let mut z = dz.distinguished.clone();
        sets.insert(line_set(&z));
        // Gray-code walk through the affine space z* + B₀.
        for i in 1u64..(1u64 << dim) {
            z.xor_assign(&dz.boundaries[i.trailing_zeros() as usize]);
            sets.insert(line_set(&z));
        }
        let mut sets: Vec<BitVec> = sets.into_iter().collect();
        sets.sort_by_key(|s| (s.count_ones(), format!("{s:?}")));
        let mut minimal: Vec<BitVec> = Vec::new();
        for s in sets {
            let dominated = minimal.iter().any(|m| {
                let mut both = m.clone();
                both.xor_assign(&s);
                // m ⊆ s  ⇔  m ∧ ¬s = ∅  ⇔  |m ⊕ s| = |s| − |m|
                both.count_ones() == s.count_ones() - m.count_ones()
            });
            if !dominated {
                minimal.push(s);
            }
        }

        let (lo, hi) = (Rational::ZERO, Rational::TWO);
        let mut best: Option<PlFunc> = None;
        for s in &minimal {
            let lines: Vec<Line> = s.ones().map(|i| distinct[i]).collect();
            let env = PlFunc::upper_envelope(&lines, lo, hi)?;
            best = Some(match best {
                None => env,
                Some(b) => b.pointwise_min(&env)?,
            });
        }
        let best = best.ok_or_else(|| CfkError::Internal("no cycles enumerated".into()))?;
        Ok(best.scale(-2))
    }

    /// Dimension of the Maslov-0 boundaries, which decides whether the
    /// oracle can run.
    pub fn boundary_dimension(&self) -> Result<usize, CfkError> {
        Ok(self.degree_zero()?.boundaries.len())
    }

    /// τ is minus the slope of Υ at `t = 0`.
    pub fn tau(&self) -> Result<i64, CfkError> {
        let slope = self.upsilon()?.initial_slope();
        slope
            .to_integer()
            .map(|s| -s)
            .ok_or_else(|| CfkError::Internal(format!("non-integer initial slope {slope}")))
    }

    /// `max |A|` over the base generators.
    pub fn genus_bound(&self) -> i64 {
        self.generators.iter().map(|g| g.alex.abs()).max().unwrap_or(0)
    }

    /// The tensor product, modelling connected sum.
    pub fn tensor(&self, other: &Complex) -> Complex {
        let m = other.generators.len();
        let mut generators = Vec::with_capacity(self.generators.len() * m);
        for a in &self.generators {
            for b in &other.generators {
                generators.push(Generator::new(
                    format!("{}⊗{}", a.name, b.name),
                    a.alex + b.alex,
                    a.maslov + b.maslov,
                ));
            }
        }
        let mut differential = Vec::with_capacity(generators.len());
        for i in 0..self.generators.len() {
            for j in 0..m {
                let mut parity: BTreeMap<Term, bool> = BTreeMap::new();
                for t in &self.differential[i] {
                    *parity.entry(Term { target: t.target * m + j, upower: t.upower }).or_default() ^= true;
                }
                for t in &other.differential[j] {
                    *parity.entry(Term { target: i * m + t.target, upower: t.upower }).or_default() ^= true;
                }
                differential.push(parity.into_iter().filter(|(_, odd)| *odd).map(|(t, _)| t).collect());
            }
        }
        Complex::new(format!("{}#{}", self.name, other.name), generators, differential)
    }

    /// The dual complex, modelling the mirror image.
    pub fn dual(&self) -> Complex {
        let generators = self
            .generators
            .iter()
            .map(|g| Generator::new(g.name.clone(), -g.alex, -g.maslov))
            .collect();
        let mut differential = vec![Vec::new(); self.generators.len()];
        for (i, terms) in self.differential.iter().enumerate() {
            for t in terms {
                differential[t.target].push(Term { target: i, upower: t.upower });
            }
        }
        for terms in &mut differential {
            terms.sort();
        }
        let name = match self.name.strip_prefix("mirror(").and_then(|s| s.strip_suffix(')')) {
            Some(inner) => inner.to_string(),
            None => format!("mirror({})", self.name),
        };
        Complex::new(name, generators, differential)
    }
}

struct DegreeZero {
    elements: Vec<(usize, i64)>,
    lines: Vec<Line>,
    d0: Gf2Map,
    boundaries: Vec<BitVec>,
    boundary_span: EchelonBasis,
    distinguished: BitVec,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    gen: String,
    upower: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundaryJson {
    from: String,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexJson {
    #[serde(default)]
    name: String,
    generators: Vec<Generator>,
    #[serde(default)]
    differential: Vec<BoundaryJson>,
}

impl Serialize for Complex {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let differential = self
            .differential
            .iter()
            .enumerate()
            .filter(|(_, terms)| !terms.is_empty())
            .map(|(i, terms)| BoundaryJson {
                from: self.generators[i].name.clone(),
                terms: terms
                    .iter()
                    .map(|t| TermJson { gen: self.generators[t.target].name.clone(), upower: t.upower })
                    .collect(),
            })
            .collect();
        ComplexJson { name: self.name.clone(), generators: self.generators.clone(), differential }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Complex {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = ComplexJson::deserialize(deserializer)?;
        let owned: Vec<(String, Vec<(String, u32)>)> = raw
            .differential
            .into_iter()
            .map(|b| (b.from, b.terms.into_iter().map(|t| (t.gen, t.upower)).collect()))
            .collect();
        let borrowed: Vec<(&str, Vec<(&str, u32)>)> = owned
            .iter()
            .map(|(f, ts)| (f.as_str(), ts.iter().map(|(g, u)| (g.as_str(), *u)).collect()))
            .collect();
        let spec: Vec<(&str, &[(&str, u32)])> = borrowed.iter().map(|(f, ts)| (*f, ts.as_slice())).collect();
        Complex::from_named(raw.name, raw.generators, &spec).map_err(D::Error::custom)
    }
}
