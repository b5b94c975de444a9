//! Finite-dimensional Hilbert-space primitives: state vectors, rays, unitary
//! matrices and Bargmann invariants.
//!
//! Amplitudes are stored in the angular-momentum ordering `M = J, J-1, …, -J`
//! with `J = (n-1)/2`, so index 0 is the highest-weight vector `|J,J⟩`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::{principal_arg, wrap_pi};
use crate::Tolerances;

/// A vector of complex amplitudes. Not necessarily normalized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateJson", into = "StateJson")]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct StateJson {
    dim: usize,
    amplitudes: Vec<Complex64>,
}

impl TryFrom<StateJson> for StateVector {
    type Error = Error;

    fn try_from(json: StateJson) -> Result<Self> {
        if json.dim != json.amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: json.dim,
                found: json.amplitudes.len(),
            });
        }
        StateVector::new(json.amplitudes)
    }
}

impl From<StateVector> for StateJson {
    fn from(state: StateVector) -> Self {
        StateJson {
            dim: state.dim(),
            amplitudes: state.amplitudes,
        }
    }
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::EmptyState);
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("state amplitudes"));
        }
        Ok(Self { amplitudes })
    }

    /// Builds a state from `(re, im)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(re, im)| Complex64::new(re, im)).collect())
    }

    /// Builds a state from real amplitudes.
    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The unit vector `e_{k+1}`, i.e. `|J, J-k⟩`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dimension {dim}");
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[k] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() < tol
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(self.scaled(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            amplitudes: self.amplitudes.iter().map(|z| z * factor).collect(),
        }
    }

    /// Multiplies by `e^{iα}`.
    pub fn with_phase(&self, alpha: f64) -> Self {
        self.scaled(Complex64::from_polar(1.0, alpha))
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: Complex64, other: &StateVector, b: Complex64) -> Result<Self> {
        check_dims(self, other)?;
        Ok(Self {
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    pub fn to_dvector(&self) -> DVector<Complex64> {
        DVector::from_column_slice(&self.amplitudes)
    }

    pub fn from_dvector(v: &DVector<Complex64>) -> Result<Self> {
        Self::new(v.iter().copied().collect())
    }

    /// Rank-one projector `|ψ⟩⟨ψ|` of the normalized vector.
    pub fn projector(&self) -> Result<DMatrix<Complex64>> {
        let v = self.normalized()?.to_dvector();
        Ok(&v * v.adjoint())
    }

    /// Largest componentwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        check_dims(self, other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max))
    }
}

fn check_dims(a: &StateVector, b: &StateVector) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// Modulus threshold above which an amplitude may carry the canonical phase.
const RAY_PHASE_THRESHOLD: f64 = 1e-9;

/// A unit ray, stored through a canonical representative: unit norm, first
/// amplitude of modulus above `1e-9` made real positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Ray {
    representative: StateVector,
}

impl Ray {
    pub fn from_state(state: &StateVector) -> Result<Self> {
        let unit = state.normalized()?;
        let pivot = unit
            .amplitudes()
            .iter()
            .find(|z| z.norm() > RAY_PHASE_THRESHOLD)
            .copied()
            .ok_or(Error::ZeroVector)?;
        let representative = unit.scaled(pivot.conj() / pivot.norm());
        Ok(Self { representative })
    }

    pub fn representative(&self) -> &StateVector {
        &self.representative
    }

    /// Transition probability `Tr(ρ₁ρ₂) = |⟨ψ₁|ψ₂⟩|²`.
    pub fn transition_probability(&self, other: &Ray) -> Result<f64> {
        Ok(inner_product(&self.representative, &other.representative)?.norm_sqr())
    }
}

/// A square matrix with `U†U = I` to within the tolerance it was checked at.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    matrix: DMatrix<Complex64>,
}

/// Entrywise tolerance used by [`UnitaryMatrix::new`].
pub const UNITARITY_TOLERANCE: f64 = 1e-12;

impl UnitaryMatrix {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        Self::with_tolerance(matrix, UNITARITY_TOLERANCE)
    }

    pub fn with_tolerance(matrix: DMatrix<Complex64>, tol: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let deviation = unitarity_deviation(&matrix);
        if !(deviation < tol) {
            return Err(Error::NotUnitary(deviation));
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: DMatrix::identity(dim, dim),
        }
    }

    /// `diag(e^{iα₀}, e^{iα₁}, …)`.
    pub fn diagonal_phases(phases: &[f64]) -> Self {
        let diag = DVector::from_iterator(
            phases.len(),
            phases.iter().map(|&a| Complex64::from_polar(1.0, a)),
        );
        Self {
            matrix: DMatrix::from_diagonal(&diag),
        }
    }

    /// Haar-distributed unitary: QR of a complex Ginibre matrix with the
    /// phases of `diag(R)` moved into `Q`.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let ginibre = DMatrix::from_fn(dim, dim, |_, _| gaussian_complex(rng));
        let qr = ginibre.qr();
        let (q, r) = qr.unpack();
        let phases = DMatrix::from_diagonal(&DVector::from_iterator(
            dim,
            (0..dim).map(|i| {
                let d = r[(i, i)];
                if d.norm() == 0.0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    d / d.norm()
                }
            }),
        ));
        Self { matrix: q * phases }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &UnitaryMatrix) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Self {
            matrix: &self.matrix * &other.matrix,
        })
    }
}

fn unitarity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let product = m.adjoint() * m;
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((product[(i, j)] - target).norm());
        }
    }
    worst
}

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// `(φ, ψ) = Σ φ_k* ψ_k`.
pub fn inner_product(phi: &StateVector, psi: &StateVector) -> Result<Complex64> {
    check_dims(phi, psi)?;
    Ok(phi
        .amplitudes
        .iter()
        .zip(&psi.amplitudes)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// Cyclic Bargmann invariant `(ψ₁,ψ₂)(ψ₂,ψ₃)…(ψ_k,ψ₁)` for `k ≥ 3` vectors.
pub fn bargmann_invariant(states: &[StateVector]) -> Result<Complex64> {
    bargmann_invariant_with(states, &Tolerances::default())
}

pub fn bargmann_invariant_with(states: &[StateVector], tol: &Tolerances) -> Result<Complex64> {
    if states.len() < 3 {
        return Err(Error::TooFewVectors {
            min: 3,
            found: states.len(),
        });
    }
    let k = states.len();
    let mut product = Complex64::new(1.0, 0.0);
    for i in 0..k {
        let (a, b) = (&states[i], &states[(i + 1) % k]);
        let overlap = inner_product(a, b)?;
        let scale = a.norm() * b.norm();
        if scale == 0.0 {
            return Err(Error::ZeroVector);
        }
        if overlap.norm() <= tol.degeneracy * scale {
            return Err(Error::Degenerate {
                what: format!("overlap of vectors {} and {}", i + 1, (i + 1) % k + 1),
                modulus: overlap.norm() / scale,
            });
        }
        product *= overlap;
    }
    Ok(product)
}

/// Geometric phase `-arg Δ₃(ψ₁,ψ₂,ψ₃)` on the branch `(-π, π]`.
pub fn bi_phase(psi1: &StateVector, psi2: &StateVector, psi3: &StateVector) -> Result<f64> {
    bi_phase_with(psi1, psi2, psi3, &Tolerances::default())
}

pub fn bi_phase_with(
    psi1: &StateVector,
    psi2: &StateVector,
    psi3: &StateVector,
    tol: &Tolerances,
) -> Result<f64> {
    let delta = bargmann_invariant_with(&[psi1.clone(), psi2.clone(), psi3.clone()], tol)?;
    Ok(wrap_pi(-principal_arg(delta)))
}

pub fn apply_unitary(u: &UnitaryMatrix, psi: &StateVector) -> Result<StateVector> {
    if u.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: psi.dim(),
        });
    }
    StateVector::from_dvector(&(u.matrix() * psi.to_dvector()))
}

/// Haar-uniform unit vector from a seeded ChaCha stream.
pub fn random_state(dim: usize, seed: u64) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_state_from(&mut rng, dim)
}

/// Haar-uniform unit vector: complex Gaussian amplitudes, then normalized.
pub fn random_state_from<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> StateVector {
    assert!(dim >= 1, "dimension must be positive");
    loop {
        let amplitudes: Vec<Complex64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
        let state = StateVector { amplitudes };
        if let Ok(unit) = state.normalized() {
            return unit;
        }
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn octant() -> [StateVector; 3] {
        let s = FRAC_1_SQRT_2;
        [
            StateVector::from_pairs(&[(1.0, 0.0), (0.0, 0.0)]).unwrap(),
            StateVector::from_pairs(&[(s, 0.0), (s, 0.0)]).unwrap(),
            StateVector::from_pairs(&[(s, 0.0), (0.0, s)]).unwrap(),
        ]
    }

    #[test]
    fn inner_product_examples() {
        let e1 = StateVector::basis(2, 0);
        let e2 = StateVector::basis(2, 1);
        assert_eq!(inner_product(&e1, &e1).unwrap(), c(1.0, 0.0));
        assert_eq!(inner_product(&e1, &e2).unwrap(), c(0.0, 0.0));
        let [_, b, d] = octant();
        let z = inner_product(&b, &d).unwrap();
        assert!((z - c(0.5, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn inner_product_dimension_mismatch() {
        let err = inner_product(&StateVector::basis(2, 0), &StateVector::basis(3, 0));
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn bargmann_octant() {
        let tri = octant();
        let delta = bargmann_invariant(&tri).unwrap();
        assert!((delta - c(0.25, 0.25)).norm() < 1e-15);
        let phase = bi_phase(&tri[0], &tri[1], &tri[2]).unwrap();
        assert!((phase + PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn bargmann_identical_vectors() {
        let e = StateVector::basis(4, 0);
        let delta = bargmann_invariant(&[e.clone(), e.clone(), e.clone()]).unwrap();
        assert_eq!(delta, c(1.0, 0.0));
        assert_eq!(bi_phase(&e, &e, &e).unwrap(), 0.0);
    }

    #[test]
    fn bargmann_degenerate_and_short() {
        let e1 = StateVector::basis(2, 0);
        let e2 = StateVector::basis(2, 1);
        let err = bargmann_invariant(&[e1.clone(), e2, e1.clone()]);
        assert!(matches!(err, Err(Error::Degenerate { .. })));
        let err = bargmann_invariant(&[e1.clone(), e1]);
        assert!(matches!(err, Err(Error::TooFewVectors { .. })));
    }

    #[test]
    fn bargmann_trace_of_projectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 2..7 {
            let tri: Vec<_> = (0..3).map(|_| random_state_from(&mut rng, n)).collect();
            let delta = bargmann_invariant(&tri).unwrap();
            let product =
                tri[0].projector().unwrap() * tri[1].projector().unwrap() * tri[2].projector().unwrap();
            assert!((delta - product.trace()).norm() < 1e-12);
        }
    }

    #[test]
    fn bargmann_cyclic_and_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_state_from(&mut rng, 5);
        let b = random_state_from(&mut rng, 5);
        let d = random_state_from(&mut rng, 5);
        let delta = bargmann_invariant(&[a.clone(), b.clone(), d.clone()]).unwrap();
        let rotated = bargmann_invariant(&[b.clone(), d.clone(), a.clone()]).unwrap();
        let reversed = bargmann_invariant(&[a, d, b]).unwrap();
        assert!((delta - rotated).norm() < 1e-15);
        assert!((delta.conj() - reversed).norm() < 1e-15);
    }

    #[test]
    fn gauge_phases_leave_bi_phase_unchanged() {
        let [a, b, d] = octant();
        let phase = bi_phase(&a, &b, &d).unwrap();
        let gauged = bi_phase(&a.with_phase(0.3), &b.with_phase(-1.1), &d.with_phase(2.9)).unwrap();
        assert!((phase - gauged).abs() < 1e-15);
    }

    #[test]
    fn unitary_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for n in 2..9 {
            let u = UnitaryMatrix::random(n, &mut rng);
            let tri: Vec<_> = (0..3).map(|_| random_state_from(&mut rng, n)).collect();
            let moved: Vec<_> = tri.iter().map(|p| apply_unitary(&u, p).unwrap()).collect();
            let before = bargmann_invariant(&tri).unwrap();
            let after = bargmann_invariant(&moved).unwrap();
            assert!((before - after).norm() < 1e-12);
            for (p, q) in tri.iter().zip(&moved) {
                assert!((p.norm() - q.norm()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn apply_identity_and_phase() {
        let psi = random_state(4, 3);
        let same = apply_unitary(&UnitaryMatrix::identity(4), &psi).unwrap();
        assert_eq!(same, psi);
        let u = UnitaryMatrix::diagonal_phases(&[0.7, 0.0, 0.0]);
        let out = apply_unitary(&u, &StateVector::basis(3, 0)).unwrap();
        assert!((out.amplitudes()[0] - Complex64::from_polar(1.0, 0.7)).norm() < 1e-15);
        assert!(apply_unitary(&u, &psi).is_err());
    }

    #[test]
    fn non_unitary_rejected() {
        let m = DMatrix::from_element(2, 2, c(1.0, 0.0));
        assert!(matches!(UnitaryMatrix::new(m), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn random_state_properties() {
        let one = random_state(1, 42);
        assert!((one.norm() - 1.0).abs() < 1e-15);
        assert_eq!(random_state(6, 7), random_state(6, 7));
        assert_ne!(random_state(6, 7), random_state(6, 8));
    }

    #[test]
    fn random_state_haar_moment() {
        // E|⟨e₁|ψ⟩|² = 1/n, Var = (n-1)/(n²(n+1)) for Haar vectors.
        let n = 4;
        let draws = 100_000;
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mean = (0..draws)
            .map(|_| random_state_from(&mut rng, n).amplitudes()[0].norm_sqr())
            .sum::<f64>()
            / draws as f64;
        let nf = n as f64;
        let sigma = ((nf - 1.0) / (nf * nf * (nf + 1.0)) / draws as f64).sqrt();
        assert!((mean - 1.0 / nf).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn ray_representative() {
        let psi = random_state(3, 1);
        let r1 = Ray::from_state(&psi).unwrap();
        let r2 = Ray::from_state(&psi.with_phase(2.2).scaled(c(3.0, 0.0))).unwrap();
        assert!(r1.representative().max_abs_diff(r2.representative()).unwrap() < 1e-12);
        let lead = r1.representative().amplitudes()[0];
        assert!(lead.im.abs() < 1e-15 && lead.re > 0.0);
        assert!((r1.transition_probability(&r2).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn json_format() {
        let psi = StateVector::from_pairs(&[(1.0, 0.0), (0.0, -0.5)]).unwrap();
        let text = serde_json::to_string(&psi).unwrap();
        assert_eq!(text, r#"{"dim":2,"amplitudes":[[1.0,0.0],[0.0,-0.5]]}"#);
        let back: StateVector = serde_json::from_str(&text).unwrap();
        assert_eq!(back, psi);
        let bad = serde_json::from_str::<StateVector>(r#"{"dim":3,"amplitudes":[[1,0]]}"#);
        assert!(bad.is_err());
    }
}
