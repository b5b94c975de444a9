//! Reference computations that share no code with the library.
//!
//! Everything here works on plain slices and arrays so that a bug in the
//! library types cannot leak into the values it is checked against.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;

pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn bargmann(a: &[Complex64], b: &[Complex64], c: &[Complex64]) -> Complex64 {
    inner(a, b) * inner(b, c) * inner(c, a)
}

/// `-arg Δ₃` by direct multiplication.
pub fn bi_phase(a: &[Complex64], b: &[Complex64], c: &[Complex64]) -> f64 {
    -bargmann(a, b, c).arg()
}

/// Distance between two angles on the circle.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// `min_λ |a - λ b| / |a|`.
pub fn relative_error_up_to_scalar(a: &[Complex64], b: &[Complex64]) -> f64 {
    let bb = inner(b, b).re;
    let aa = inner(a, a).re;
    if bb == 0.0 {
        return if aa == 0.0 { 0.0 } else { 1.0 };
    }
    let lambda = inner(b, a) / bb;
    let r: f64 = a.iter().zip(b).map(|(x, y)| (x - lambda * y).norm_sqr()).sum();
    (r / aa).sqrt()
}

pub fn normalize(v: &mut [Complex64]) {
    let n = inner(v, v).re.sqrt();
    for x in v.iter_mut() {
        *x /= n;
    }
}

/// Gaussian amplitudes, normalized.
pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..dim).map(|_| Complex64::new(gauss(rng), gauss(rng))).collect();
    normalize(&mut v);
    v
}

fn gauss<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box–Muller; u in (0, 1] keeps the log finite
    let u: f64 = 1.0 - rng.random::<f64>();
    let v: f64 = rng.random();
    (-2.0 * u.ln()).sqrt() * (TAU * v).cos()
}

pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..TAU);
    let rho = (1.0 - z * z).max(0.0).sqrt();
    [rho * phi.cos(), rho * phi.sin(), z]
}

/// An angle strictly inside `(0, π)`.
pub fn open_angle<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let t: f64 = rng.random_range(0.0..PI);
        if t > 0.0 {
            return t;
        }
    }
}

/// First `terms` Fock amplitudes of the coherent state `|z⟩`.
pub fn fock_coherent(z: Complex64, terms: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(terms);
    let mut c = Complex64::new((-z.norm_sqr() / 2.0).exp(), 0.0);
    for k in 0..terms {
        if k > 0 {
            c = c * z / (k as f64).sqrt();
        }
        out.push(c);
    }
    out
}

/// Rotation by `angle` about `axis`, right-handed.
pub fn rodrigues(axis: [f64; 3], angle: f64) -> [[f64; 3]; 3] {
    let [x, y, z] = axis;
    let (s, c) = angle.sin_cos();
    let t = 1.0 - c;
    [
        [c + t * x * x, t * x * y - s * z, t * x * z + s * y],
        [t * x * y + s * z, c + t * y * y, t * y * z - s * x],
        [t * x * z - s * y, t * y * z + s * x, c + t * z * z],
    ]
}

pub fn rotate(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [0, 1, 2].map(|i| m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2])
}

/// `exp(-i t n̂·σ/2)` written out.
pub fn su2_matrix(axis: [f64; 3], angle: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = (angle / 2.0).sin_cos();
    let [x, y, z] = axis;
    [
        [Complex64::new(c, -s * z), Complex64::new(-s * y, -s * x)],
        [Complex64::new(s * y, -s * x), Complex64::new(c, s * z)],
    ]
}

pub fn apply2(m: &[[Complex64; 2]; 2], v: [Complex64; 2]) -> [Complex64; 2] {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

/// Bloch vector `ξ†σξ` of a unit spinor.
pub fn bloch(v: [Complex64; 2]) -> [f64; 3] {
    let p = v[0].conj() * v[1];
    [2.0 * p.re, 2.0 * p.im, v[0].norm_sqr() - v[1].norm_sqr()]
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `(α a₁† + β a₂†)^{n-1} / √(n-1)! |0,0⟩` in the `|n₁, n₂⟩` basis with
/// `n₁` decreasing.
pub fn pure_product(alpha: Complex64, beta: Complex64, n: usize) -> Vec<Complex64> {
    let m = n - 1;
    (0..n)
        .map(|k| binomial(m, k).sqrt() * alpha.powu((m - k) as u32) * beta.powu(k as u32))
        .collect()
}

/// Expansion of `Π_j (α_j a₁† + β_j a₂†)|0,0⟩`, amplitude of `|m-k, k⟩` at `k`.
pub fn symmetric_product(spinors: &[[Complex64; 2]]) -> Vec<Complex64> {
    let m = spinors.len();
    // coefficients of the monomial (a₁†)^{m-k} (a₂†)^k
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for s in spinors {
        let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k] += c * s[0];
            next[k + 1] += c * s[1];
        }
        poly = next;
    }
    let fact = |j: usize| (1..=j).fold(1.0, |acc, i| acc * i as f64);
    poly.iter()
        .enumerate()
        .map(|(k, c)| c * (fact(m - k) * fact(k)).sqrt())
        .collect()
}
