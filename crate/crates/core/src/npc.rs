//! Sampled curves in state space, geodesics and null phase curves.
//!
//! A curve is stored as a lift `s ↦ ψ(s)` on a uniform grid. A null phase
//! curve (NPC) is one along which the Bargmann invariant of any three points
//! is real and positive, so the geometric phase of every triangle cut from it
//! vanishes. Geodesics are the simplest examples; in dimension three and above
//! real profiles `ψ(s) = Σ x_r(s) e_r` with nonnegative components give many more.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{inner_product, StateVector};
use crate::phase::{principal_arg, wrap_pi};
use crate::Tolerances;

pub const DEFAULT_SAMPLES: usize = 257;
pub const DEFAULT_SUBGRID: usize = 21;
pub const DEFAULT_QUADRATURE_TOLERANCE: f64 = 1e-8;
/// Bound on `‖x_{i+1} - 2x_i + x_{i-1}‖ / h²` accepted for a profile.
pub const MAX_SECOND_DIFFERENCE: f64 = 100.0;
const MAX_LISTED: usize = 50;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Uniform grid `start = s₀ < s₁ < … < s_{N-1} = end`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub samples: usize,
}

impl Grid {
    pub fn new(start: f64, end: f64, samples: usize) -> Result<Self> {
        let g = Self { start, end, samples };
        g.validate()?;
        Ok(g)
    }

    /// `[0, 1]` with `samples` points.
    pub fn unit(samples: usize) -> Result<Self> {
        Self::new(0.0, 1.0, samples)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < 3 {
            return Err(Error::OutOfRange {
                name: "grid samples",
                value: self.samples as f64,
                range: "≥ 3",
            });
        }
        if !(self.start.is_finite() && self.end.is_finite() && self.start < self.end) {
            return Err(Error::InvalidCurve(format!(
                "grid interval [{}, {}] is empty",
                self.start, self.end
            )));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        (self.end - self.start) / (self.samples - 1) as f64
    }

    /// Position `s_i`; the last point is `end` exactly.
    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.samples {
            self.end
        } else {
            self.start + i as f64 * self.step()
        }
    }

    /// `(s_i - start) / (end - start)`.
    pub fn fraction(&self, i: usize) -> f64 {
        if i + 1 == self.samples {
            1.0
        } else {
            i as f64 / (self.samples - 1) as f64
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.samples).map(|i| self.point(i)).collect()
    }

    /// Recovers a grid from sample positions, which must be uniform to
    /// within `1e-9` of the step.
    pub fn from_points(points: &[f64]) -> Result<Self> {
        let (&first, &last) = match (points.first(), points.last()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::InvalidCurve("no samples".into())),
        };
        let grid = Self::new(first, last, points.len())?;
        let h = grid.step();
        for (i, &s) in points.iter().enumerate() {
            if (s - grid.point(i)).abs() > 1e-9 * h.max(1.0) {
                return Err(Error::InvalidCurve(format!("sample {i} at s = {s} is off the uniform grid")));
            }
        }
        Ok(grid)
    }
}

/// Unit vectors sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveLift {
    grid: Grid,
    states: Vec<StateVector>,
}

impl CurveLift {
    pub fn new(grid: Grid, states: Vec<StateVector>) -> Result<Self> {
        Self::with_tolerances(grid, states, &Tolerances::default())
    }

    pub fn with_tolerances(grid: Grid, states: Vec<StateVector>, tol: &Tolerances) -> Result<Self> {
        grid.validate()?;
        if states.len() != grid.samples {
            return Err(Error::DimensionMismatch {
                expected: grid.samples,
                found: states.len(),
            });
        }
        let dim = states[0].dim();
        for (i, psi) in states.iter().enumerate() {
            if psi.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: psi.dim(),
                });
            }
            if !psi.is_normalized(1e-10) {
                return Err(Error::InvalidCurve(format!(
                    "sample {i} has norm {}",
                    psi.norm()
                )));
            }
        }
        for (i, pair) in states.windows(2).enumerate() {
            let o = inner_product(&pair[0], &pair[1])?.norm();
            if o <= tol.degeneracy {
                return Err(Error::InvalidCurve(format!(
                    "samples {i} and {} are orthogonal",
                    i + 1
                )));
            }
        }
        Ok(Self { grid, states })
    }

    /// The same vector at every sample.
    pub fn constant(psi: &StateVector, grid: Grid) -> Result<Self> {
        Self::new(grid, vec![psi.normalized()?; grid.samples])
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn first(&self) -> &StateVector {
        &self.states[0]
    }

    pub fn last(&self) -> &StateVector {
        &self.states[self.states.len() - 1]
    }

    /// `ψ(s) → e^{iχ(s)} ψ(s)`.
    pub fn regauged(&self, chi: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid,
            states: self
                .states
                .iter()
                .enumerate()
                .map(|(i, psi)| psi.with_phase(chi(self.grid.point(i))))
                .collect(),
        }
    }
}

/// Orthonormal basis `e₁ … e_n` with `ψ₁ = e₁`, `ψ₂ = C₀e₁ + S₀e₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveFrame {
    basis: Vec<StateVector>,
    theta0: f64,
}

impl CurveFrame {
    pub fn new(basis: Vec<StateVector>, theta0: f64) -> Result<Self> {
        if !(theta0 > 0.0 && theta0 < PI) {
            return Err(Error::OutOfRange {
                name: "theta0",
                value: theta0,
                range: "(0, π)",
            });
        }
        let n = basis.len();
        if n < 2 {
            return Err(Error::TooFewVectors { min: 2, found: n });
        }
        for e in &basis {
            if e.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: e.dim(),
                });
            }
        }
        for i in 0..n {
            for j in i..n {
                let g = inner_product(&basis[i], &basis[j])?;
                let target = if i == j { ONE } else { Complex64::new(0.0, 0.0) };
                if (g - target).norm() > 1e-12 {
                    return Err(Error::Inconsistent {
                        what: format!("frame vectors {} and {} are not orthonormal", i + 1, j + 1),
                        residual: (g - target).norm(),
                    });
                }
            }
        }
        Ok(Self { basis, theta0 })
    }

    /// Standard basis of `C^n`.
    pub fn standard(n: usize, theta0: f64) -> Result<Self> {
        Self::new((0..n).map(|k| StateVector::basis(n, k)).collect(), theta0)
    }

    /// Frame adapted to a pair of unit vectors after moving `ψ₂` into phase
    /// with `ψ₁`; the remaining vectors complete the basis by Gram–Schmidt.
    pub fn from_pair(psi1: &StateVector, psi2: &StateVector) -> Result<Self> {
        let pair = in_phase_gauge(psi1, psi2)?;
        let (c0, s0) = half(pair.theta0);
        if s0 <= 1e-12 {
            return Err(Error::Coincident(1, 2));
        }
        let e1 = pair.psi1.clone();
        let e2 = pair.psi2.combine(ONE, &e1, Complex64::new(-c0, 0.0))?.normalized()?;
        let n = e1.dim();
        let mut basis = vec![e1, e2];
        for k in 0..n {
            if basis.len() == n {
                break;
            }
            let mut v = StateVector::basis(n, k);
            for _ in 0..2 {
                for e in &basis {
                    let proj = inner_product(e, &v)?;
                    v = v.combine(ONE, e, -proj)?;
                }
            }
            if v.norm() > 1e-6 {
                basis.push(v.normalized()?);
            }
        }
        Self::new(basis, pair.theta0)
    }

    pub fn basis(&self) -> &[StateVector] {
        &self.basis
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn psi1(&self) -> StateVector {
        self.basis[0].clone()
    }

    pub fn psi2(&self) -> StateVector {
        let (c0, s0) = half(self.theta0);
        self.basis[0]
            .combine(Complex64::new(c0, 0.0), &self.basis[1], Complex64::new(s0, 0.0))
            .expect("frame vectors share a dimension")
    }

    /// `Σ_r x_r e_r`.
    pub fn combine(&self, x: &[f64]) -> Result<StateVector> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        let n = self.dim();
        let mut amps = vec![Complex64::new(0.0, 0.0); n];
        for (xr, e) in x.iter().zip(&self.basis) {
            for (a, b) in amps.iter_mut().zip(e.amplitudes()) {
                *a += b * *xr;
            }
        }
        StateVector::new(amps)
    }
}

/// Real vectors `x(s)` sampled on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealProfile {
    pub grid: Grid,
    pub values: Vec<Vec<f64>>,
}

impl RealProfile {
    pub fn dim(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    /// Samples `f` on `grid`.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Vec<f64>) -> Self {
        Self {
            grid,
            values: grid.points().into_iter().map(f).collect(),
        }
    }
}

fn half(theta: f64) -> (f64, f64) {
    let (s, c) = (theta / 2.0).sin_cos();
    (c, s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InPhasePair {
    pub psi1: StateVector,
    pub psi2: StateVector,
    /// `(ψ₁, ψ₂) = cos(θ₀/2)`.
    pub theta0: f64,
}

/// Normalizes both vectors and rotates the phase of `ψ₂` so that
/// `(ψ₁, ψ₂)` is real and positive.
pub fn in_phase_gauge(psi1: &StateVector, psi2: &StateVector) -> Result<InPhasePair> {
    in_phase_gauge_with(psi1, psi2, &Tolerances::default())
}

pub fn in_phase_gauge_with(psi1: &StateVector, psi2: &StateVector, tol: &Tolerances) -> Result<InPhasePair> {
    let a = psi1.normalized()?;
    let b = psi2.normalized()?;
    let o = inner_product(&a, &b)?;
    if o.norm() <= tol.degeneracy {
        return Err(Error::Orthogonal(1, 2));
    }
    let b = b.scaled(o.conj() / o.norm());
    let c = inner_product(&a, &b)?.re.min(1.0);
    Ok(InPhasePair {
        psi1: a,
        psi2: b,
        theta0: 2.0 * c.acos(),
    })
}

/// Geodesic from `ψ₁` to the in-phase representative of `ψ₂`:
/// `ψ(s) = [ψ₁ sin((1-t)θ₀/2) + ψ₂ sin(tθ₀/2)] / sin(θ₀/2)` with `t` the grid fraction.
pub fn geodesic_lift(psi1: &StateVector, psi2: &StateVector, grid: Grid) -> Result<CurveLift> {
    grid.validate()?;
    let pair = in_phase_gauge(psi1, psi2)?;
    let theta0 = pair.theta0;
    let (_, s0) = half(theta0);
    if !(theta0 > 0.0 && theta0 < PI) || s0 <= 1e-12 {
        return Err(Error::OutOfRange {
            name: "theta0",
            value: theta0,
            range: "(0, π)",
        });
    }
    let mut states = Vec::with_capacity(grid.samples);
    for i in 0..grid.samples {
        let psi = if i == 0 {
            pair.psi1.clone()
        } else if i + 1 == grid.samples {
            pair.psi2.clone()
        } else {
            let t = grid.fraction(i);
            let a = ((1.0 - t) * theta0 / 2.0).sin() / s0;
            let b = (t * theta0 / 2.0).sin() / s0;
            pair.psi1.combine(Complex64::new(a, 0.0), &pair.psi2, Complex64::new(b, 0.0))?
        };
        states.push(psi);
    }
    CurveLift::new(grid, states)
}

/// Conditions violated by a real profile, with sample indices.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ProfileReport {
    /// `0` for `x(s₁) ≠ (1,0,…)`, `1` for `x(s₂) ≠ (C₀,S₀,0,…)`.
    pub boundary: Vec<usize>,
    pub norm: Vec<usize>,
    /// Samples with `x₁ ≤ 0` or `C₀x₁ + S₀x₂ ≤ 0`.
    pub positivity: Vec<usize>,
    /// Pairs with `x(s)·x(s′) ∉ (0, 1]`, at most 50 listed.
    pub nonlocal: Vec<(usize, usize)>,
    pub nonlocal_count: usize,
    /// Samples whose second difference exceeds [`MAX_SECOND_DIFFERENCE`].
    pub roughness: Vec<usize>,
    pub dimension: Option<usize>,
}

impl ProfileReport {
    pub fn is_valid(&self) -> bool {
        self.boundary.is_empty()
            && self.norm.is_empty()
            && self.positivity.is_empty()
            && self.nonlocal_count == 0
            && self.roughness.is_empty()
            && self.dimension.is_none()
    }

    fn summary(&self) -> String {
        let mut parts = Vec::new();
        if let Some(i) = self.dimension {
            parts.push(format!("sample {i} has the wrong length"));
        }
        if !self.boundary.is_empty() {
            parts.push(format!("boundary {:?}", self.boundary));
        }
        if !self.norm.is_empty() {
            parts.push(format!("norm at {:?}", self.norm));
        }
        if !self.positivity.is_empty() {
            parts.push(format!("positivity at {:?}", self.positivity));
        }
        if self.nonlocal_count > 0 {
            parts.push(format!("{} nonlocal pairs", self.nonlocal_count));
        }
        if !self.roughness.is_empty() {
            parts.push(format!("not smooth at {:?}", self.roughness));
        }
        parts.join("; ")
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Checks boundary values, unit norm, positivity, the pairwise overlap
/// condition over all sample pairs, and smoothness.
pub fn validate_profile(profile: &RealProfile, theta0: f64) -> ProfileReport {
    let mut report = ProfileReport::default();
    let n = profile.dim();
    let values = &profile.values;
    if let Some(i) = values.iter().position(|x| x.len() != n || n < 2) {
        report.dimension = Some(i);
        return report;
    }
    let (c0, s0) = half(theta0);
    let mut start = vec![0.0; n];
    start[0] = 1.0;
    let mut end = vec![0.0; n];
    end[0] = c0;
    end[1] = s0;
    let off = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if off(&values[0], &start) > 1e-10 {
        report.boundary.push(0);
    }
    if off(&values[values.len() - 1], &end) > 1e-10 {
        report.boundary.push(1);
    }
    for (i, x) in values.iter().enumerate() {
        if (dot(x, x).sqrt() - 1.0).abs() > 1e-10 {
            report.norm.push(i);
        }
        if !(x[0] > 0.0 && c0 * x[0] + s0 * x[1] > 0.0) {
            report.positivity.push(i);
        }
    }
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            let d = dot(&values[i], &values[j]);
            if !(d > 0.0 && d <= 1.0 + 1e-12) {
                report.nonlocal_count += 1;
                if report.nonlocal.len() < MAX_LISTED {
                    report.nonlocal.push((i, j));
                }
            }
        }
    }
    let h = profile.grid.step();
    for i in 1..values.len().saturating_sub(1) {
        let second: f64 = (0..n)
            .map(|r| {
                let d = values[i + 1][r] - 2.0 * values[i][r] + values[i - 1][r];
                d * d
            })
            .sum::<f64>()
            .sqrt()
            / (h * h);
        if !(second <= MAX_SECOND_DIFFERENCE) {
            report.roughness.push(i);
        }
    }
    report
}

/// `ψ(s) = Σ_r x_r(s) e_r` for a profile that passes [`validate_profile`].
pub fn profile_to_lift(frame: &CurveFrame, profile: &RealProfile) -> Result<CurveLift> {
    if profile.dim() != frame.dim() {
        return Err(Error::DimensionMismatch {
            expected: frame.dim(),
            found: profile.dim(),
        });
    }
    let report = validate_profile(profile, frame.theta0());
    if !report.is_valid() {
        return Err(Error::InvalidProfile(report.summary()));
    }
    let states = profile
        .values
        .iter()
        .map(|x| frame.combine(x))
        .collect::<Result<Vec<_>>>()?;
    CurveLift::new(profile.grid, states)
}

/// `x(t) = (cos a, sin a cos b, sin a sin b, 0, …)` with `a = tθ₀/2`,
/// `b = ε sin(πt)` and `t` the grid fraction. All components are
/// nonnegative, which is enough for the pairwise conditions; `ε = 0` is the geodesic.
pub fn generate_npc_profile(theta0: f64, n: usize, epsilon: f64, grid: Grid) -> Result<RealProfile> {
    grid.validate()?;
    if n < 3 {
        return Err(Error::OutOfRange {
            name: "dimension",
            value: n as f64,
            range: "≥ 3",
        });
    }
    if !(theta0 > 0.0 && theta0 < PI) {
        return Err(Error::OutOfRange {
            name: "theta0",
            value: theta0,
            range: "(0, π)",
        });
    }
    if !(0.0..FRAC_PI_2).contains(&epsilon) {
        return Err(Error::OutOfRange {
            name: "epsilon",
            value: epsilon,
            range: "[0, π/2)",
        });
    }
    let values = (0..grid.samples)
        .map(|i| {
            let t = grid.fraction(i);
            let a = t * theta0 / 2.0;
            let b = if i == 0 || i + 1 == grid.samples {
                0.0
            } else {
                epsilon * (PI * t).sin()
            };
            let mut x = vec![0.0; n];
            x[0] = a.cos();
            x[1] = a.sin() * b.cos();
            x[2] = a.sin() * b.sin();
            x
        })
        .collect();
    let profile = RealProfile { grid, values };
    let report = validate_profile(&profile, theta0);
    if !report.is_valid() {
        return Err(Error::InvalidProfile(report.summary()));
    }
    Ok(profile)
}

/// Generated NPC from `ψ₁` to the in-phase representative of `ψ₂`, built in
/// the frame adapted to the pair. Needs dimension ≥ 3.
pub fn npc_lift_between(psi1: &StateVector, psi2: &StateVector, epsilon: f64, grid: Grid) -> Result<CurveLift> {
    let frame = CurveFrame::from_pair(psi1, psi2)?;
    let profile = generate_npc_profile(frame.theta0(), frame.dim(), epsilon, grid)?;
    profile_to_lift(&frame, &profile)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TripleViolation {
    pub indices: [usize; 3],
    pub s: [f64; 3],
    pub delta: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NpcReport {
    pub subgrid: Vec<usize>,
    pub triples_checked: usize,
    pub violation_count: usize,
    /// First violations found, at most 50.
    pub violations: Vec<TripleViolation>,
    /// Same scan with the first subgrid sample held fixed.
    pub fixed_base_violation_count: usize,
    pub fixed_base_violations: Vec<TripleViolation>,
    /// Whether both scans reached the same verdict.
    pub consistent: bool,
    pub passed: bool,
}

/// Indices of `m` roughly equally spaced samples out of `samples`.
pub fn subgrid_indices(samples: usize, m: usize) -> Vec<usize> {
    if m >= samples || m < 2 {
        return (0..samples).collect();
    }
    let mut idx: Vec<usize> = (0..m)
        .map(|j| ((j as f64) * (samples - 1) as f64 / (m - 1) as f64).round() as usize)
        .collect();
    idx.dedup();
    idx
}

/// Scans all triples on a subgrid for `Re Δ₃ > 0` and
/// `|Im Δ₃| ≤ τ_npc |Δ₃|`, plus the variant with one point fixed at the start.
pub fn verify_npc(lift: &CurveLift, subgrid: usize, tol: &Tolerances) -> Result<NpcReport> {
    let idx = subgrid_indices(lift.grid.samples, subgrid);
    let m = idx.len();
    let states: Vec<&StateVector> = idx.iter().map(|&i| &lift.states[i]).collect();
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); m]; m];
    for a in 0..m {
        for b in a..m {
            let g = inner_product(states[a], states[b])?;
            gram[a][b] = g;
            gram[b][a] = g.conj();
        }
    }
    let bad = |d: Complex64| !(d.re > 0.0 && d.im.abs() <= tol.npc * d.norm());
    let violation = |a: usize, b: usize, c: usize, delta| TripleViolation {
        indices: [idx[a], idx[b], idx[c]],
        s: [idx[a], idx[b], idx[c]].map(|i| lift.grid.point(i)),
        delta,
    };
    let mut report = NpcReport {
        subgrid: idx.clone(),
        triples_checked: 0,
        violation_count: 0,
        violations: Vec::new(),
        fixed_base_violation_count: 0,
        fixed_base_violations: Vec::new(),
        consistent: true,
        passed: true,
    };
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                report.triples_checked += 1;
                let d = gram[a][b] * gram[b][c] * gram[c][a];
                if bad(d) {
                    report.violation_count += 1;
                    if report.violations.len() < MAX_LISTED {
                        report.violations.push(violation(a, b, c, d));
                    }
                }
            }
        }
    }
    for b in 1..m {
        for c in b + 1..m {
            let d = gram[0][b] * gram[b][c] * gram[c][0];
            if bad(d) {
                report.fixed_base_violation_count += 1;
                if report.fixed_base_violations.len() < MAX_LISTED {
                    report.fixed_base_violations.push(violation(0, b, c, d));
                }
            }
        }
    }
    let full = report.violation_count == 0;
    let fixed = report.fixed_base_violation_count == 0;
    report.consistent = full == fixed;
    report.passed = full && fixed;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConnectionIntegral {
    pub value: f64,
    /// `|S_h - S_2h| / 15`, or `|S_h - T_h|` when the panel count is not a multiple of four.
    pub error_estimate: f64,
}

fn derivative(f: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = f.len();
    let d = 12.0 * h;
    (0..n)
        .map(|i| {
            if i >= 2 && i + 2 < n {
                (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / d
            } else if i == 0 {
                (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / d
            } else if i == 1 {
                (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / d
            } else if i == n - 1 {
                (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) / d
            } else {
                (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / d
            }
        })
        .collect()
}

fn simpson(f: &[f64], h: f64) -> f64 {
    let n = f.len();
    let inner: f64 = f[1..n - 1]
        .iter()
        .enumerate()
        .map(|(k, v)| if k % 2 == 0 { 4.0 * v } else { 2.0 * v })
        .sum();
    h / 3.0 * (f[0] + inner + f[n - 1])
}

fn trapezoid(f: &[f64], h: f64) -> f64 {
    let n = f.len();
    h * (0.5 * (f[0] + f[n - 1]) + f[1..n - 1].iter().sum::<f64>())
}

/// `∫ Im(ψ, dψ/ds) ds` by Simpson's rule with fourth-order finite
/// differences. Needs an odd number of samples, at least five.
pub fn connection_integral(lift: &CurveLift, tolerance: f64) -> Result<ConnectionIntegral> {
    let n = lift.grid.samples;
    if n < 5 || n.is_multiple_of(2) {
        return Err(Error::InvalidCurve(format!(
            "quadrature needs an odd number of samples ≥ 5, got {n}"
        )));
    }
    let h = lift.grid.step();
    let dim = lift.dim();
    let mut integrand = vec![0.0; n];
    for r in 0..dim {
        let component: Vec<Complex64> = lift.states.iter().map(|s| s.amplitudes()[r]).collect();
        for (i, dc) in derivative(&component, h).iter().enumerate() {
            integrand[i] += (component[i].conj() * dc).im;
        }
    }
    let value = simpson(&integrand, h);
    let error_estimate = if (n - 1).is_multiple_of(4) {
        let coarse: Vec<f64> = integrand.iter().step_by(2).copied().collect();
        (value - simpson(&coarse, 2.0 * h)).abs() / 15.0
    } else {
        (value - trapezoid(&integrand, h)).abs()
    };
    if !(error_estimate <= tolerance) {
        return Err(Error::GridTooCoarse {
            estimate: error_estimate,
            tolerance,
        });
    }
    Ok(ConnectionIntegral { value, error_estimate })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopPhase {
    /// On `(-π, π]`.
    pub phase: f64,
    /// `arg(start_{k+1}, end_k)` at each junction.
    pub junction_phases: Vec<f64>,
    pub connection_integrals: Vec<f64>,
}

/// Geometric phase of a closed loop made of NPC segments, each ending on the
/// ray where the next begins: `Σ arg(start_{k+1}, end_k) - Σ ∫ Im(ψ, ψ′)`.
pub fn loop_geometric_phase(segments: &[CurveLift], subgrid: usize, quadrature_tol: f64, tol: &Tolerances) -> Result<LoopPhase> {
    if segments.is_empty() {
        return Err(Error::TooFewVectors { min: 1, found: 0 });
    }
    let k = segments.len();
    let mut junction_phases = Vec::with_capacity(k);
    for j in 0..k {
        let end = segments[j].last();
        let next = segments[(j + 1) % k].first();
        let o = inner_product(next, end)?;
        if o.norm() < 1.0 - 1e-9 {
            return Err(Error::JunctionMismatch {
                junction: j,
                overlap: o.norm(),
            });
        }
        junction_phases.push(principal_arg(o));
    }
    let mut connection_integrals = Vec::with_capacity(k);
    for (j, seg) in segments.iter().enumerate() {
        if !verify_npc(seg, subgrid, tol)?.passed {
            return Err(Error::NotNullPhaseCurve(j));
        }
        connection_integrals.push(connection_integral(seg, quadrature_tol)?.value);
    }
    let phase = wrap_pi(junction_phases.iter().sum::<f64>() - connection_integrals.iter().sum::<f64>());
    Ok(LoopPhase {
        phase,
        junction_phases,
        connection_integrals,
    })
}
