//! Schwinger oscillator basis and the Majorana factorization.
//!
//! Dimension `n` is identified with spin `J = (n-1)/2` built from two modes.
//! Position `k` of a [`StateVector`] is `|J, M⟩` with `M = J - k`, i.e. `n₁ = 2J - k`
//! quanta in the first mode and `n₂ = k` in the second. Every vector factors as
//! `c Π_j (α_j a₁† + β_j a₂†)|0,0⟩` for `n - 1` unit spinors `(α_j, β_j)`,
//! unique up to ordering and per-spinor phases.
//!
//! Majorana polynomial: `p(z) = Σ_k A_k √binom(2J,k) z^k ∝ Π_j (α_j + β_j z)`.
//! A root `w` corresponds to the spinor `∝ (-w, 1)`, and each missing top
//! degree to `(1, 0)`.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::StateVector;
use crate::permanent::permanent;
use crate::polynomial::{self, multiply};
use crate::Tolerances;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `|J, M⟩` stored as doubled quantum numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisIndex {
    pub two_j: u32,
    pub two_m: i32,
}

impl BasisIndex {
    pub fn new(two_j: u32, two_m: i32) -> Result<Self> {
        let j = two_j as i32;
        if two_m.abs() > j || (j - two_m) % 2 != 0 {
            return Err(Error::OutOfRange {
                name: "2M",
                value: two_m as f64,
                range: "-2J..=2J in steps of 2",
            });
        }
        Ok(Self { two_j, two_m })
    }

    /// Position `k` in dimension `n`.
    pub fn from_position(n: usize, k: usize) -> Result<Self> {
        if n == 0 || k >= n {
            return Err(Error::OutOfRange {
                name: "basis position",
                value: k as f64,
                range: "0..n",
            });
        }
        let two_j = (n - 1) as u32;
        Ok(Self {
            two_j,
            two_m: two_j as i32 - 2 * k as i32,
        })
    }

    pub fn position(&self) -> usize {
        ((self.two_j as i32 - self.two_m) / 2) as usize
    }

    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    pub fn m(&self) -> f64 {
        self.two_m as f64 / 2.0
    }

    /// `J + M`.
    pub fn n1(&self) -> u32 {
        ((self.two_j as i32 + self.two_m) / 2) as u32
    }

    /// `J - M`.
    pub fn n2(&self) -> u32 {
        ((self.two_j as i32 - self.two_m) / 2) as u32
    }
}

/// Unit two-component spinor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[Complex64; 2]", into = "[Complex64; 2]")]
pub struct Spinor {
    alpha: Complex64,
    beta: Complex64,
}

impl TryFrom<[Complex64; 2]> for Spinor {
    type Error = Error;

    fn try_from([alpha, beta]: [Complex64; 2]) -> Result<Self> {
        Spinor::new(alpha, beta)
    }
}

impl From<Spinor> for [Complex64; 2] {
    fn from(s: Spinor) -> Self {
        [s.alpha, s.beta]
    }
}

impl Spinor {
    /// Normalizes `(α, β)`; phases are kept.
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        for z in [alpha, beta] {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite("spinor"));
            }
        }
        let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            alpha: alpha / norm,
            beta: beta / norm,
        })
    }

    pub fn up() -> Self {
        Self { alpha: ONE, beta: ZERO }
    }

    pub fn down() -> Self {
        Self { alpha: ZERO, beta: ONE }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    /// Same ray with `α` real and nonnegative (`β = 1` when `α = 0`).
    pub fn canonical(&self) -> Self {
        let a = self.alpha.norm();
        if a == 0.0 {
            return Self::down();
        }
        let phase = self.alpha.conj() / a;
        Self {
            alpha: Complex64::new(a, 0.0),
            beta: self.beta * phase,
        }
    }

    /// `ξ′† ξ` with `self = ξ′`.
    pub fn dot(&self, other: &Spinor) -> Complex64 {
        self.alpha.conj() * other.alpha + self.beta.conj() * other.beta
    }

    pub fn star(&self) -> Star {
        spinor_to_star(self)
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let mut g = || Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            if let Ok(s) = Spinor::new(g(), g()) {
                return s;
            }
        }
    }
}

/// Point on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct Star {
    n: [f64; 3],
}

impl TryFrom<[f64; 3]> for Star {
    type Error = Error;

    fn try_from(n: [f64; 3]) -> Result<Self> {
        Star::new(n)
    }
}

impl From<Star> for [f64; 3] {
    fn from(s: Star) -> Self {
        s.n
    }
}

impl Star {
    /// Accepts vectors within `1e-8` of unit length and renormalizes them.
    pub fn new(n: [f64; 3]) -> Result<Self> {
        if n.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("star"));
        }
        let len = n.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (len - 1.0).abs() > 1e-8 {
            return Err(Error::OutOfRange {
                name: "star length",
                value: len,
                range: "1 ± 1e-8",
            });
        }
        Ok(Self {
            n: [n[0] / len, n[1] / len, n[2] / len],
        })
    }

    /// Normalizes any nonzero vector.
    pub fn from_direction(v: [f64; 3]) -> Result<Self> {
        let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(len > 0.0 && len.is_finite()) {
            return Err(Error::ZeroVector);
        }
        Star::new([v[0] / len, v[1] / len, v[2] / len])
    }

    pub fn north() -> Self {
        Self { n: [0.0, 0.0, 1.0] }
    }

    pub fn south() -> Self {
        Self { n: [0.0, 0.0, -1.0] }
    }

    pub fn coords(&self) -> [f64; 3] {
        self.n
    }

    pub fn dot(&self, other: &Star) -> f64 {
        self.n.iter().zip(&other.n).map(|(a, b)| a * b).sum()
    }

    /// Euclidean distance in `R³`.
    pub fn chordal_distance(&self, other: &Star) -> f64 {
        self.n
            .iter()
            .zip(&other.n)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn spinor(&self) -> Spinor {
        star_to_spinor(self)
    }
}

/// `n̂ = ξ†σξ`.
pub fn spinor_to_star(xi: &Spinor) -> Star {
    let cross = xi.alpha.conj() * xi.beta;
    let v = [
        2.0 * cross.re,
        2.0 * cross.im,
        xi.alpha.norm_sqr() - xi.beta.norm_sqr(),
    ];
    let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    Star {
        n: [v[0] / len, v[1] / len, v[2] / len],
    }
}

/// `α = cos(θ/2) ≥ 0`, `β = e^{iφ} sin(θ/2)`.
pub fn star_to_spinor(star: &Star) -> Spinor {
    let [x, y, z] = star.n;
    let theta = x.hypot(y).atan2(z);
    let alpha = (theta / 2.0).cos();
    if alpha < 1e-15 {
        return Spinor::down();
    }
    let phi = y.atan2(x);
    Spinor {
        alpha: Complex64::new(alpha, 0.0),
        beta: Complex64::from_polar((theta / 2.0).sin(), phi),
    }
}

/// `c Π_j (α_j a₁† + β_j a₂†)|0,0⟩`, with spinors in no particular order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajoranaRep {
    pub scale: Complex64,
    pub spinors: Vec<Spinor>,
}

impl MajoranaRep {
    pub fn dim(&self) -> usize {
        self.spinors.len() + 1
    }

    pub fn stars(&self) -> Vec<Star> {
        self.spinors.iter().map(spinor_to_star).collect()
    }

    /// Amplitudes of the expanded vector (not normalized in general).
    pub fn expand(&self) -> Vec<Complex64> {
        let sigma = symmetric_coefficients(&self.spinors);
        let m = self.spinors.len();
        let ln_fact = ln_factorials(m);
        sigma
            .iter()
            .enumerate()
            .map(|(k, s)| self.scale * s * (0.5 * (ln_fact[m - k] + ln_fact[k])).exp())
            .collect()
    }
}

/// Coefficients of `Π_j (α_j + β_j z)` in ascending order.
fn symmetric_coefficients(spinors: &[Spinor]) -> Vec<Complex64> {
    spinors
        .iter()
        .fold(vec![ONE], |acc, s| multiply(&acc, &[s.alpha, s.beta]))
}

fn ln_factorials(m: usize) -> Vec<f64> {
    let mut out = vec![0.0; m + 1];
    for k in 1..=m {
        out[k] = out[k - 1] + (k as f64).ln();
    }
    out
}

/// `√binom(m, k)` for `k = 0..=m`.
fn sqrt_binomials(m: usize) -> Vec<f64> {
    let lf = ln_factorials(m);
    (0..=m)
        .map(|k| (0.5 * (lf[m] - lf[k] - lf[m - k])).exp())
        .collect()
}

/// Majorana polynomial coefficients `A_k √binom(2J, k)`.
pub fn majorana_polynomial(psi: &StateVector) -> Vec<Complex64> {
    let m = psi.dim() - 1;
    psi.amplitudes()
        .iter()
        .zip(sqrt_binomials(m))
        .map(|(a, w)| a * w)
        .collect()
}

/// Factorizes `ψ` into `n - 1` spinors and a scale.
pub fn coefficients_to_roots(psi: &StateVector) -> Result<MajoranaRep> {
    coefficients_to_roots_with(psi, &Tolerances::default())
}

pub fn coefficients_to_roots_with(psi: &StateVector, tol: &Tolerances) -> Result<MajoranaRep> {
    let norm = psi.norm();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let m = psi.dim() - 1;
    let p = majorana_polynomial(psi);
    let biggest = p.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let threshold = tol.leading * biggest;
    let degree = p.iter().rposition(|c| c.norm() >= threshold).unwrap_or(0);
    let mut spinors = vec![Spinor::up(); m - degree];
    for w in polynomial::roots(&p[..=degree])? {
        spinors.push(Spinor::new(-w, ONE)?.canonical());
    }
    let unit_rep = MajoranaRep { scale: ONE, spinors };
    let unit = unit_rep.expand();
    let num: Complex64 = unit.iter().zip(psi.amplitudes()).map(|(u, a)| u.conj() * a).sum();
    let den: f64 = unit.iter().map(|u| u.norm_sqr()).sum();
    let scale = num / den;
    let residual = unit
        .iter()
        .zip(psi.amplitudes())
        .map(|(u, a)| (scale * u - a).norm_sqr())
        .sum::<f64>()
        .sqrt()
        / norm;
    if !(residual <= 1e-6) {
        return Err(Error::RootFinding { residual });
    }
    Ok(MajoranaRep {
        scale,
        spinors: unit_rep.spinors,
    })
}

/// Expands a factorization back into amplitudes.
pub fn roots_to_coefficients(rep: &MajoranaRep) -> Result<StateVector> {
    if rep.scale.norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    StateVector::new(rep.expand())
}

/// `|ξ; n⟩ = (1/√(n-1)!) (α a₁† + β a₂†)^{n-1}|0,0⟩`, a unit vector.
pub fn pure_product_state(xi: &Spinor, n: usize) -> Result<StateVector> {
    if n == 0 {
        return Err(Error::EmptyState);
    }
    let m = n - 1;
    let amps = sqrt_binomials(m)
        .iter()
        .enumerate()
        .map(|(k, w)| *w * xi.alpha.powu((m - k) as u32) * xi.beta.powu(k as u32))
        .collect();
    StateVector::new(amps)
}

/// The factorization of [`pure_product_state`].
pub fn pure_product_rep(xi: &Spinor, n: usize) -> Result<MajoranaRep> {
    if n == 0 {
        return Err(Error::EmptyState);
    }
    let m = n - 1;
    Ok(MajoranaRep {
        scale: Complex64::new((-0.5 * ln_factorials(m)[m]).exp(), 0.0),
        spinors: vec![*xi; m],
    })
}

/// `c̄′ c perm[ξ′_k† ξ_l]`.
pub fn overlap_general(rep_prime: &MajoranaRep, rep: &MajoranaRep) -> Result<Complex64> {
    let m = rep.spinors.len();
    if rep_prime.spinors.len() != m {
        return Err(Error::DimensionMismatch {
            expected: rep_prime.dim(),
            found: rep.dim(),
        });
    }
    let gram = DMatrix::from_fn(m, m, |k, l| rep_prime.spinors[k].dot(&rep.spinors[l]));
    Ok(rep_prime.scale.conj() * rep.scale * permanent(&gram)?)
}

/// `(rep′, |ξ; n⟩) = c̄′ √(n-1)! Π_k ξ′_k† ξ`.
pub fn overlap_with_pure(rep_prime: &MajoranaRep, xi: &Spinor) -> Complex64 {
    let m = rep_prime.spinors.len();
    let root_fact = (0.5 * ln_factorials(m)[m]).exp();
    let prod: Complex64 = rep_prime.spinors.iter().map(|s| s.dot(xi)).product();
    rep_prime.scale.conj() * root_fact * prod
}

/// A 2×2 special unitary matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2 {
    m: Matrix2<Complex64>,
}

impl Su2 {
    pub const TOLERANCE: f64 = 1e-10;

    pub fn new(m: Matrix2<Complex64>) -> Result<Self> {
        let dev = (m.adjoint() * m - Matrix2::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            .max((m.determinant() - ONE).norm());
        if !(dev <= Self::TOLERANCE) {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self { m })
    }

    /// `[[a, -b̄], [b, ā]]` after normalizing `(a, b)`.
    pub fn from_column(a: Complex64, b: Complex64) -> Result<Self> {
        let s = Spinor::new(a, b)?;
        Ok(Self {
            m: Matrix2::new(s.alpha, -s.beta.conj(), s.beta, s.alpha.conj()),
        })
    }

    /// `exp(-i t n̂·σ/2)`.
    pub fn from_axis_angle(axis: [f64; 3], angle: f64) -> Result<Self> {
        let n = Star::from_direction(axis)?.coords();
        let (s, c) = (angle / 2.0).sin_cos();
        let i = Complex64::new(0.0, 1.0);
        Ok(Self {
            m: Matrix2::new(
                c - i * s * n[2],
                -i * s * Complex64::new(n[0], -n[1]),
                -i * s * Complex64::new(n[0], n[1]),
                c + i * s * n[2],
            ),
        })
    }

    pub fn identity() -> Self {
        Self { m: Matrix2::identity() }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let s = Spinor::random(rng);
        Self::from_column(s.alpha, s.beta).expect("unit spinor")
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.m
    }

    pub fn apply(&self, xi: &Spinor) -> Spinor {
        Spinor {
            alpha: self.m[(0, 0)] * xi.alpha + self.m[(0, 1)] * xi.beta,
            beta: self.m[(1, 0)] * xi.alpha + self.m[(1, 1)] * xi.beta,
        }
    }

    /// `R_ij = ½ Tr(σ_i u σ_j u†)`, the rotation carried out on stars.
    pub fn rotation(&self) -> [[f64; 3]; 3] {
        let sigma = pauli();
        let mut r = [[0.0; 3]; 3];
        for (i, si) in sigma.iter().enumerate() {
            for (j, sj) in sigma.iter().enumerate() {
                r[i][j] = 0.5 * (si * self.m * sj * self.m.adjoint()).trace().re;
            }
        }
        r
    }
}

fn pauli() -> [Matrix2<Complex64>; 3] {
    let i = Complex64::new(0.0, 1.0);
    [
        Matrix2::new(ZERO, ONE, ONE, ZERO),
        Matrix2::new(ZERO, -i, i, ZERO),
        Matrix2::new(ONE, ZERO, ZERO, -ONE),
    ]
}

/// `D(u)ψ`: every Majorana spinor is mapped by `u`.
///
/// Computed through the homogeneous form `H(x, y) = Σ_k h_k x^{2J-k} y^k`
/// of `ψ`, since `Π(α′_j x + β′_j y) = H(u₀₀x + u₁₀y, u₀₁x + u₁₁y)`; this
/// avoids root finding entirely.
pub fn su2_apply(u: &Su2, psi: &StateVector) -> Result<StateVector> {
    let m = psi.dim() - 1;
    let lf = ln_factorials(m);
    let weight = |k: usize| (0.5 * (lf[m - k] + lf[k])).exp();
    let [a, b, c, d] = [u.m[(0, 0)], u.m[(0, 1)], u.m[(1, 0)], u.m[(1, 1)]];
    // powers of (a + c t) and (b + d t)
    let mut first = vec![vec![ONE]];
    let mut second = vec![vec![ONE]];
    for _ in 0..m {
        first.push(multiply(first.last().unwrap(), &[a, c]));
        second.push(multiply(second.last().unwrap(), &[b, d]));
    }
    let mut out = vec![ZERO; m + 1];
    for (k, amp) in psi.amplitudes().iter().enumerate() {
        let h = amp / weight(k);
        if h == ZERO {
            continue;
        }
        for (j, coef) in multiply(&first[m - k], &second[k]).iter().enumerate() {
            out[j] += h * coef;
        }
    }
    for (j, z) in out.iter_mut().enumerate() {
        *z *= weight(j);
    }
    StateVector::new(out)
}

/// [`su2_apply`] done literally: factorize, rotate each spinor, re-expand.
pub fn su2_apply_via_roots(u: &Su2, psi: &StateVector) -> Result<StateVector> {
    let rep = coefficients_to_roots(psi)?;
    let moved = MajoranaRep {
        scale: rep.scale,
        spinors: rep.spinors.iter().map(|s| u.apply(s)).collect(),
    };
    roots_to_coefficients(&moved)
}

/// `(J₁, J₂, J₃)` in the position basis of dimension `n`.
pub fn spin_matrices(n: usize) -> [DMatrix<Complex64>; 3] {
    let j = (n as f64 - 1.0) / 2.0;
    let mut raise = DMatrix::<Complex64>::zeros(n, n);
    for k in 1..n {
        let m = j - k as f64;
        raise[(k - 1, k)] = Complex64::new(((j - m) * (j + m + 1.0)).sqrt(), 0.0);
    }
    let lower = raise.adjoint();
    let j1 = (&raise + &lower) * Complex64::new(0.5, 0.0);
    let j2 = (&raise - &lower) * Complex64::new(0.0, -0.5);
    let j3 = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |k, _| {
        Complex64::new(j - k as f64, 0.0)
    }));
    [j1, j2, j3]
}

/// `‖(n̂·Ĵ)ψ - Jψ‖` for a unit `ψ`.
pub fn highest_weight_residual(psi: &StateVector, axis: &Star) -> Result<f64> {
    let n = psi.dim();
    let j = (n as f64 - 1.0) / 2.0;
    let [j1, j2, j3] = spin_matrices(n);
    let [x, y, z] = axis.coords();
    let op = j1 * Complex64::new(x, 0.0) + j2 * Complex64::new(y, 0.0) + j3 * Complex64::new(z, 0.0);
    let v = psi.normalized()?.to_dvector();
    Ok((op * &v - v * Complex64::new(j, 0.0)).norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HighestWeight {
    pub residual: f64,
    pub passed: bool,
}

/// Checks `(ξ†σξ)·Ĵ |ξ; n⟩ = J |ξ; n⟩`.
pub fn highest_weight_check(xi: &Spinor, n: usize) -> Result<HighestWeight> {
    let residual = highest_weight_residual(&pure_product_state(xi, n)?, &spinor_to_star(xi))?;
    Ok(HighestWeight {
        residual,
        passed: residual < 1e-10,
    })
}

/// Optimal pairing of two star multisets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarMatching {
    /// `pairs[i] = j` matches `a[i]` with `b[j]`.
    pub pairs: Vec<usize>,
    /// Largest chordal distance over matched pairs.
    pub max_distance: f64,
    pub total_distance: f64,
}

/// Minimum-total-distance assignment between equally sized star sets.
pub fn match_stars(a: &[Star], b: &[Star]) -> Result<StarMatching> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let cost: Vec<Vec<f64>> = a
        .iter()
        .map(|x| b.iter().map(|y| x.chordal_distance(y)).collect())
        .collect();
    let pairs = hungarian(&cost);
    let dists: Vec<f64> = pairs.iter().enumerate().map(|(i, &j)| cost[i][j]).collect();
    Ok(StarMatching {
        max_distance: dists.iter().copied().fold(0.0, f64::max),
        total_distance: dists.iter().sum(),
        pairs,
    })
}

/// Largest matched chordal distance between two star multisets.
pub fn matched_distance(a: &[Star], b: &[Star]) -> Result<f64> {
    Ok(match_stars(a, b)?.max_distance)
}

// Shortest augmenting path version with row/column potentials.
fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut col0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[col0] = true;
            let i0 = owner[col0];
            let mut delta = f64::INFINITY;
            let mut col1 = 0;
            for col in 1..=n {
                if used[col] {
                    continue;
                }
                let reduced = cost[i0 - 1][col - 1] - u[i0] - v[col];
                if reduced < minv[col] {
                    minv[col] = reduced;
                    way[col] = col0;
                }
                if minv[col] < delta {
                    delta = minv[col];
                    col1 = col;
                }
            }
            for col in 0..=n {
                if used[col] {
                    u[owner[col]] += delta;
                    v[col] -= delta;
                } else {
                    minv[col] -= delta;
                }
            }
            col0 = col1;
            if owner[col0] == 0 {
                break;
            }
        }
        loop {
            let prev = way[col0];
            owner[col0] = owner[prev];
            col0 = prev;
            if col0 == 0 {
                break;
            }
        }
    }
    let mut pairs = vec![0; n];
    for col in 1..=n {
        if owner[col] > 0 {
            pairs[owner[col] - 1] = col - 1;
        }
    }
    pairs
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, TAU};

    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::hilbert::{inner_product, random_state_from};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close_up_to_scalar(a: &StateVector, b: &StateVector) -> f64 {
        let num = inner_product(a, b).unwrap();
        let fit = a.scaled(num / a.norm_sqr());
        fit.combine(ONE, b, -ONE).unwrap().norm() / b.norm()
    }

    #[test]
    fn basis_index_positions() {
        let idx = BasisIndex::from_position(4, 1).unwrap();
        assert_eq!((idx.two_j, idx.two_m), (3, 1));
        assert_eq!((idx.n1(), idx.n2()), (2, 1));
        assert_eq!(idx.position(), 1);
        assert_eq!(idx.m(), 0.5);
        assert!(BasisIndex::new(2, 1).is_err());
        assert!(BasisIndex::from_position(3, 3).is_err());
    }

    #[test]
    fn star_examples() {
        assert_eq!(spinor_to_star(&Spinor::up()).coords(), [0.0, 0.0, 1.0]);
        assert_eq!(spinor_to_star(&Spinor::down()).coords(), [0.0, 0.0, -1.0]);
        let s = Spinor::new(c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)).unwrap();
        let n = spinor_to_star(&s).coords();
        assert!((n[0] - 1.0).abs() < 1e-15 && n[1].abs() < 1e-15 && n[2].abs() < 1e-15);
        assert_eq!(star_to_spinor(&Star::south()), Spinor::down());
        let back = star_to_spinor(&Star::new([1.0, 0.0, 0.0]).unwrap());
        assert!((back.beta() / back.alpha() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn e1_and_e2_stars() {
        let rep = coefficients_to_roots(&StateVector::basis(4, 0)).unwrap();
        assert!(rep.stars().iter().all(|s| s.coords() == [0.0, 0.0, 1.0]));
        let rep = coefficients_to_roots(&StateVector::basis(3, 1)).unwrap();
        let d = matched_distance(&rep.stars(), &[Star::north(), Star::south()]).unwrap();
        assert!(d < 1e-12);
    }

    #[test]
    fn expansion_examples() {
        let e1 = roots_to_coefficients(&MajoranaRep {
            scale: ONE,
            spinors: vec![Spinor::up(); 3],
        })
        .unwrap();
        // (a₁†)³|0⟩ = √3! e₁
        assert!(e1.max_abs_diff(&StateVector::basis(4, 0).scaled(c(6f64.sqrt(), 0.0))).unwrap() < 1e-14);
        let e2 = roots_to_coefficients(&MajoranaRep {
            scale: ONE,
            spinors: vec![Spinor::up(), Spinor::down()],
        })
        .unwrap();
        assert!(e2.max_abs_diff(&StateVector::basis(3, 1)).unwrap() < 1e-15);
    }

    #[test]
    fn pure_product_binomial_oracle() {
        let xi = Spinor::new(c(0.3, 0.4), c(-0.5, 0.2)).unwrap();
        let n = 6;
        let psi = pure_product_state(&xi, n).unwrap();
        let binom = [1.0, 5.0, 10.0, 10.0, 5.0, 1.0];
        for (k, amp) in psi.amplitudes().iter().enumerate() {
            let expect = xi.alpha().powu((5 - k) as u32) * xi.beta().powu(k as u32) * f64::sqrt(binom[k]);
            assert!((amp - expect).norm() < 1e-14);
        }
        assert!((psi.norm() - 1.0).abs() < 1e-14);
        let via_rep = roots_to_coefficients(&pure_product_rep(&xi, n).unwrap()).unwrap();
        assert!(via_rep.max_abs_diff(&psi).unwrap() < 1e-14);
        assert_eq!(pure_product_state(&Spinor::up(), 4).unwrap(), StateVector::basis(4, 0));
    }

    #[test]
    fn pure_overlap_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 2..8 {
            let a = Spinor::random(&mut rng);
            let b = Spinor::random(&mut rng);
            let pa = pure_product_state(&a, n).unwrap();
            let pb = pure_product_state(&b, n).unwrap();
            let law = a.dot(&b).powu((n - 1) as u32);
            assert!((inner_product(&pa, &pb).unwrap() - law).norm() < 1e-13);
            let up = pure_product_state(&Spinor::up(), n).unwrap();
            assert!((inner_product(&up, &pb).unwrap() - b.alpha().powu((n - 1) as u32)).norm() < 1e-13);
            let ra = pure_product_rep(&a, n).unwrap();
            let rb = pure_product_rep(&b, n).unwrap();
            assert!((overlap_general(&ra, &rb).unwrap() - law).norm() < 1e-12);
        }
    }

    #[test]
    fn overlap_general_matches_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 2..=10 {
            let rand_rep = |rng: &mut ChaCha8Rng| MajoranaRep {
                scale: c(0.3, -0.7),
                spinors: (0..n - 1).map(|_| Spinor::random(rng)).collect(),
            };
            let (a, b) = (rand_rep(&mut rng), rand_rep(&mut rng));
            let direct = inner_product(&roots_to_coefficients(&a).unwrap(), &roots_to_coefficients(&b).unwrap()).unwrap();
            let perm = overlap_general(&a, &b).unwrap();
            assert!((direct - perm).norm() < 1e-10 * (1.0 + direct.norm()));
            let xi = Spinor::random(&mut rng);
            let pure = pure_product_state(&xi, n).unwrap();
            let expect = inner_product(&roots_to_coefficients(&a).unwrap(), &pure).unwrap();
            assert!((overlap_with_pure(&a, &xi) - expect).norm() < 1e-10 * (1.0 + expect.norm()));
        }
    }

    #[test]
    fn overlap_rejects_large_orders() {
        let rep = MajoranaRep {
            scale: ONE,
            spinors: vec![Spinor::up(); 13],
        };
        assert!(matches!(overlap_general(&rep, &rep), Err(Error::SizeExceeded { .. })));
    }

    #[test]
    fn round_trip_with_deficit() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for n in [3, 7, 12, 20] {
            let mut amps = random_state_from(&mut rng, n).into_amplitudes();
            for a in amps.iter_mut().skip(n - 2) {
                *a = ZERO;
            }
            let psi = StateVector::new(amps).unwrap();
            let rep = coefficients_to_roots(&psi).unwrap();
            assert_eq!(rep.spinors.len(), n - 1);
            let north = rep.stars().iter().filter(|s| s.coords() == [0.0, 0.0, 1.0]).count();
            assert_eq!(north, 2);
            let back = roots_to_coefficients(&rep).unwrap();
            assert!(close_up_to_scalar(&back, &psi) < 1e-8);
        }
    }

    #[test]
    fn zero_vector_rejected() {
        let z = StateVector::new(vec![ZERO; 3]).unwrap();
        assert_eq!(coefficients_to_roots(&z), Err(Error::ZeroVector));
    }

    #[test]
    fn su2_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let psi = random_state_from(&mut rng, 5);
        let same = su2_apply(&Su2::identity(), &psi).unwrap();
        assert!(same.max_abs_diff(&psi).unwrap() < 1e-15);
        let u = Su2::random(&mut rng);
        let xi = Spinor::random(&mut rng);
        let moved = su2_apply(&u, &pure_product_state(&xi, 5).unwrap()).unwrap();
        let expect = pure_product_state(&u.apply(&xi), 5).unwrap();
        assert!(moved.max_abs_diff(&expect).unwrap() < 1e-13);
        let bad = Matrix2::new(ONE, ONE, ZERO, ONE);
        assert!(matches!(Su2::new(bad), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn axis_angle_rotation() {
        // quarter turn about z takes x̂ to ŷ
        let u = Su2::from_axis_angle([0.0, 0.0, 1.0], TAU / 4.0).unwrap();
        let r = u.rotation();
        assert!((r[1][0] - 1.0).abs() < 1e-15 && r[0][0].abs() < 1e-15);
        let x = Spinor::new(c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        let n = spinor_to_star(&u.apply(&x)).coords();
        assert!((n[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn spin_algebra() {
        let [j1, j2, j3] = spin_matrices(4);
        let i = c(0.0, 1.0);
        let comm = &j1 * &j2 - &j2 * &j1 - &j3 * i;
        assert!(comm.norm() < 1e-13);
        let casimir = &j1 * &j1 + &j2 * &j2 + &j3 * &j3;
        let expect = DMatrix::<Complex64>::identity(4, 4) * c(1.5 * 2.5, 0.0);
        assert!((casimir - expect).norm() < 1e-13);
    }

    #[test]
    fn highest_weight_examples() {
        let up = highest_weight_check(&Spinor::up(), 4).unwrap();
        assert!(up.passed && up.residual < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let hw = highest_weight_check(&Spinor::random(&mut rng), 5).unwrap();
        assert!(hw.passed);
        let r = highest_weight_residual(&StateVector::basis(3, 1), &Star::north()).unwrap();
        assert!((r - 1.0).abs() < 1e-15);
    }

    #[test]
    fn matching_finds_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a: Vec<Star> = (0..9).map(|_| Spinor::random(&mut rng).star()).collect();
        let order = [4, 0, 8, 2, 7, 1, 3, 6, 5];
        let b: Vec<Star> = order.iter().map(|&k| a[k]).collect();
        let m = match_stars(&a, &b).unwrap();
        assert_eq!(m.max_distance, 0.0);
        for (i, &j) in m.pairs.iter().enumerate() {
            assert_eq!(order[j], i);
        }
        assert!(match_stars(&a, &b[..3]).is_err());
    }

    #[test]
    fn json_shapes() {
        let rep = MajoranaRep {
            scale: c(2.0, 0.0),
            spinors: vec![Spinor::up()],
        };
        let text = serde_json::to_string(&rep).unwrap();
        assert_eq!(text, r#"{"scale":[2.0,0.0],"spinors":[[[1.0,0.0],[0.0,0.0]]]}"#);
        assert_eq!(serde_json::from_str::<MajoranaRep>(&text).unwrap(), rep);
        assert!(serde_json::from_str::<Star>("[0.0,0.0,2.0]").is_err());
    }

    proptest! {
        #[test]
        fn star_spinor_round_trip(th in 0.0..std::f64::consts::PI, ph in 0.0..TAU) {
            let s = Star::new([th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()]).unwrap();
            let back = spinor_to_star(&star_to_spinor(&s));
            prop_assert!(back.chordal_distance(&s) < 1e-12);
            let xi = star_to_spinor(&s);
            prop_assert!(xi.alpha().im == 0.0 && xi.alpha().re >= 0.0);
        }

        #[test]
        fn round_trip_random(seed in any::<u64>(), n in 2usize..=20) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let psi = random_state_from(&mut rng, n);
            let rep = coefficients_to_roots(&psi).unwrap();
            prop_assert_eq!(rep.spinors.len(), n - 1);
            let back = roots_to_coefficients(&rep).unwrap();
            prop_assert!(back.max_abs_diff(&psi).unwrap() < 1e-8);
        }

        #[test]
        fn ordering_is_irrelevant(seed in any::<u64>(), n in 2usize..=9, shift in 0usize..8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let spinors: Vec<Spinor> = (0..n - 1).map(|_| Spinor::random(&mut rng)).collect();
            let mut rotated = spinors.clone();
            rotated.rotate_left(shift % (n - 1));
            rotated.reverse();
            let a = roots_to_coefficients(&MajoranaRep { scale: ONE, spinors }).unwrap();
            let b = roots_to_coefficients(&MajoranaRep { scale: ONE, spinors: rotated }).unwrap();
            prop_assert!(a.max_abs_diff(&b).unwrap() < 1e-13);
        }

        #[test]
        fn su2_routes_agree_and_rotate_stars(seed in any::<u64>(), n in 2usize..=8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let psi = random_state_from(&mut rng, n);
            let u = Su2::random(&mut rng);
            let fast = su2_apply(&u, &psi).unwrap();
            let slow = su2_apply_via_roots(&u, &psi).unwrap();
            prop_assert!(fast.max_abs_diff(&slow).unwrap() < 1e-8);
            prop_assert!((fast.norm() - 1.0).abs() < 1e-12);
            let r = u.rotation();
            let before = coefficients_to_roots(&psi).unwrap().stars();
            let rotated: Vec<Star> = before.iter().map(|s| {
                let v = s.coords();
                Star::new([0, 1, 2].map(|i| (0..3).map(|j| r[i][j] * v[j]).sum())).unwrap()
            }).collect();
            let after = coefficients_to_roots(&fast).unwrap().stars();
            prop_assert!(matched_distance(&rotated, &after).unwrap() < 1e-7);
        }
    }
}
