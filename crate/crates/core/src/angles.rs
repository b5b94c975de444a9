//! Intrinsic angle parameters of a vector triad and canonical triads for
//! dimensions two and three.
//!
//! Each pairwise overlap is written `(ψ_j, ψ_k) = e^{iφ_jk} cos(θ_jk/2)` with
//! `θ_jk ∈ (0, π)` and `φ_jk ∈ [0, 2π)`. The six angles are invariant under a
//! common unitary, and `φ_g = -(φ₁₂ + φ₂₃ + φ₃₁)` is the geometric phase of the
//! geodesic triangle through the three rays.
//!
//! In dimension two only five of the six angles are independent: with `ψ₁`,
//! `ψ₂` in canonical position the third vector carries one free relative
//! phase `φ`, and `(θ₂₃, φ_g)` follow from
//! `cos(θ₂₃/2) = e^{iφ_g}(C₁₂C₃₁ + e^{iφ} S₁₂S₃₁)`.
//! In dimension three a further angle `ξ` scales the second term by `cos ξ`,
//! and all six become independent.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{apply_unitary, bargmann_invariant_with, inner_product, StateVector, UnitaryMatrix};
use crate::phase::{principal_arg, wrap_pi, wrap_two_pi};
use crate::Tolerances;

/// Three unit vectors of equal dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<StateVector>", into = "Vec<StateVector>")]
pub struct Triad {
    states: [StateVector; 3],
}

impl TryFrom<Vec<StateVector>> for Triad {
    type Error = Error;

    fn try_from(states: Vec<StateVector>) -> Result<Self> {
        match <[StateVector; 3]>::try_from(states) {
            Ok([a, b, c]) => Triad::new(a, b, c),
            Err(v) => Err(Error::DimensionMismatch {
                expected: 3,
                found: v.len(),
            }),
        }
    }
}

impl From<Triad> for Vec<StateVector> {
    fn from(triad: Triad) -> Self {
        triad.states.into()
    }
}

impl Triad {
    /// Normalizes the three vectors. Phases are kept as given.
    pub fn new(psi1: StateVector, psi2: StateVector, psi3: StateVector) -> Result<Self> {
        for other in [&psi2, &psi3] {
            if other.dim() != psi1.dim() {
                return Err(Error::DimensionMismatch {
                    expected: psi1.dim(),
                    found: other.dim(),
                });
            }
        }
        Ok(Self {
            states: [psi1.normalized()?, psi2.normalized()?, psi3.normalized()?],
        })
    }

    pub fn states(&self) -> &[StateVector; 3] {
        &self.states
    }

    pub fn get(&self, index: usize) -> &StateVector {
        &self.states[index]
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn bargmann(&self, tol: &Tolerances) -> Result<Complex64> {
        bargmann_invariant_with(&self.states, tol)
    }

    /// `-arg Δ₃` on `(-π, π]`.
    pub fn geometric_phase(&self, tol: &Tolerances) -> Result<f64> {
        Ok(wrap_pi(-principal_arg(self.bargmann(tol)?)))
    }

    pub fn apply_unitary(&self, u: &UnitaryMatrix) -> Result<Self> {
        Ok(Self {
            states: [
                apply_unitary(u, &self.states[0])?,
                apply_unitary(u, &self.states[1])?,
                apply_unitary(u, &self.states[2])?,
            ],
        })
    }

    /// `ψ_j → e^{iα_j} ψ_j`.
    pub fn with_phases(&self, alphas: [f64; 3]) -> Self {
        Self {
            states: [
                self.states[0].with_phase(alphas[0]),
                self.states[1].with_phase(alphas[1]),
                self.states[2].with_phase(alphas[2]),
            ],
        }
    }

    /// Pads every vector with zeros up to `dim`.
    pub fn embed(&self, dim: usize) -> Result<Self> {
        if dim < self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: dim,
            });
        }
        let pad = |s: &StateVector| {
            let mut amps = s.amplitudes().to_vec();
            amps.resize(dim, Complex64::new(0.0, 0.0));
            StateVector::new(amps)
        };
        Triad::new(pad(&self.states[0])?, pad(&self.states[1])?, pad(&self.states[2])?)
    }
}

/// The six unitary-invariant angles of a triad.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntrinsicAngles {
    pub theta12: f64,
    pub theta23: f64,
    pub theta31: f64,
    pub phi12: f64,
    pub phi23: f64,
    pub phi31: f64,
}

impl IntrinsicAngles {
    /// `φ_g = -(φ₁₂ + φ₂₃ + φ₃₁)` on `(-π, π]`.
    pub fn geometric_phase(&self) -> f64 {
        wrap_pi(-(self.phi12 + self.phi23 + self.phi31))
    }

    pub fn thetas(&self) -> [f64; 3] {
        [self.theta12, self.theta23, self.theta31]
    }

    pub fn phis(&self) -> [f64; 3] {
        [self.phi12, self.phi23, self.phi31]
    }

    pub fn validate(&self) -> Result<()> {
        check_theta("theta12", self.theta12)?;
        check_theta("theta23", self.theta23)?;
        check_theta("theta31", self.theta31)?;
        for (name, phi) in [("phi12", self.phi12), ("phi23", self.phi23), ("phi31", self.phi31)] {
            if !phi.is_finite() {
                return Err(Error::NonFinite(name));
            }
        }
        Ok(())
    }
}

/// `θ₂₃` and `φ_g` fixed by the remaining parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DependentPair {
    pub theta23: f64,
    /// On `(-π, π]`; only its value mod 2π is meaningful.
    pub phi_g: f64,
}

impl DependentPair {
    /// `φ₂₃ = -(φ_g + φ₁₂ + φ₃₁)` in `[0, 2π)`.
    pub fn phi23(&self, phi12: f64, phi31: f64) -> f64 {
        wrap_two_pi(-(self.phi_g + phi12 + phi31))
    }
}

pub(crate) fn check_theta(name: &'static str, theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::OutOfRange {
            name,
            value: theta,
            range: "(0, π)",
        });
    }
    Ok(())
}

fn half_angles(theta: f64) -> (f64, f64) {
    let (s, c) = (theta / 2.0).sin_cos();
    (c, s)
}

/// `cos(θ/2) = |w|`, `φ_g = -arg w`.
pub(crate) fn dependent_from_overlap(w: Complex64, tol: &Tolerances) -> Result<DependentPair> {
    let modulus = w.norm();
    if modulus <= tol.degeneracy {
        return Err(Error::Degenerate {
            what: "ψ₂ and ψ₃ orthogonal".into(),
            modulus,
        });
    }
    if modulus > 1.0 + 1e-12 {
        return Err(Error::Inconsistent {
            what: "|cos(θ₂₃/2)| exceeds one".into(),
            residual: modulus - 1.0,
        });
    }
    if modulus >= 1.0 - tol.degeneracy {
        return Err(Error::Coincident(2, 3));
    }
    Ok(DependentPair {
        theta23: 2.0 * modulus.acos(),
        phi_g: wrap_pi(-principal_arg(w)),
    })
}

/// Reads the six angles off the pairwise overlaps.
pub fn extract_angles(triad: &Triad) -> Result<IntrinsicAngles> {
    extract_angles_with(triad, &Tolerances::default())
}

pub fn extract_angles_with(triad: &Triad, tol: &Tolerances) -> Result<IntrinsicAngles> {
    let mut thetas = [0.0; 3];
    let mut phis = [0.0; 3];
    for (slot, (j, k)) in [(0, 1), (1, 2), (2, 0)].into_iter().enumerate() {
        let overlap = inner_product(triad.get(j), triad.get(k))?;
        let modulus = overlap.norm();
        if modulus <= tol.degeneracy {
            return Err(Error::Orthogonal(j + 1, k + 1));
        }
        if modulus >= 1.0 - tol.degeneracy {
            return Err(Error::Coincident(j + 1, k + 1));
        }
        thetas[slot] = 2.0 * modulus.acos();
        phis[slot] = wrap_two_pi(principal_arg(overlap));
    }
    Ok(IntrinsicAngles {
        theta12: thetas[0],
        theta23: thetas[1],
        theta31: thetas[2],
        phi12: phis[0],
        phi23: phis[1],
        phi31: phis[2],
    })
}

/// `(θ₂₃, φ_g)` for a two-dimensional triad from `θ₁₂, θ₃₁` and the relative
/// phase `φ` of the canonical third vector.
pub fn solve_dependent_n2(theta12: f64, theta31: f64, phi: f64) -> Result<DependentPair> {
    solve_dependent_n2_with(theta12, theta31, phi, &Tolerances::default())
}

pub fn solve_dependent_n2_with(
    theta12: f64,
    theta31: f64,
    phi: f64,
    tol: &Tolerances,
) -> Result<DependentPair> {
    solve_dependent_n3_with(theta12, theta31, phi, 0.0, tol)
}

/// Three-dimensional analogue of [`solve_dependent_n2`]; `ξ = 0` reduces to it.
pub fn solve_dependent_n3(theta12: f64, theta31: f64, phi: f64, xi: f64) -> Result<DependentPair> {
    solve_dependent_n3_with(theta12, theta31, phi, xi, &Tolerances::default())
}

pub fn solve_dependent_n3_with(
    theta12: f64,
    theta31: f64,
    phi: f64,
    xi: f64,
    tol: &Tolerances,
) -> Result<DependentPair> {
    check_theta("theta12", theta12)?;
    check_theta("theta31", theta31)?;
    check_xi_closed(xi)?;
    let (c12, s12) = half_angles(theta12);
    let (c31, s31) = half_angles(theta31);
    let w = c12 * c31 + Complex64::from_polar(s12 * s31 * xi.cos(), phi);
    dependent_from_overlap(w, tol)
}

fn check_xi_closed(xi: f64) -> Result<()> {
    if !(0.0..=FRAC_PI_2).contains(&xi) {
        return Err(Error::OutOfRange {
            name: "xi",
            value: xi,
            range: "[0, π/2]",
        });
    }
    Ok(())
}

/// Free parameters of the canonical two-dimensional triad
/// `ψ₁ = (1,0)`, `ψ₂ = e^{iφ₁₂}(C₁₂,S₁₂)`, `ψ₃ = e^{-iφ₃₁}(C₃₁, e^{iφ}S₃₁)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalParamsN2 {
    pub theta12: f64,
    pub theta31: f64,
    pub phi12: f64,
    pub phi31: f64,
    pub phi: f64,
}

impl CanonicalParamsN2 {
    /// Recovers `φ` from a full angle set, which must satisfy the
    /// two-dimensional constraint to within `1e-8`.
    pub fn from_angles(angles: &IntrinsicAngles) -> Result<Self> {
        angles.validate()?;
        let (c12, s12) = half_angles(angles.theta12);
        let (c23, _) = half_angles(angles.theta23);
        let (c31, s31) = half_angles(angles.theta31);
        let rotated =
            (Complex64::from_polar(c23, -angles.geometric_phase()) - c12 * c31) / (s12 * s31);
        let residual = (rotated.norm() - 1.0).abs();
        if residual > 1e-8 {
            return Err(Error::Inconsistent {
                what: "angles violate the two-dimensional constraint".into(),
                residual,
            });
        }
        Ok(Self {
            theta12: angles.theta12,
            theta31: angles.theta31,
            phi12: angles.phi12,
            phi31: angles.phi31,
            phi: wrap_two_pi(principal_arg(rotated)),
        })
    }

    /// Canonical coordinates of a triad living in a two-dimensional span.
    pub fn from_triad(triad: &Triad) -> Result<Self> {
        let p = CanonicalParamsN3::from_triad(triad)?;
        let (_, s31) = half_angles(p.theta31);
        let off_plane = s31 * p.xi.sin();
        if off_plane > 1e-10 {
            return Err(Error::Inconsistent {
                what: "triad does not lie in a two-dimensional subspace".into(),
                residual: off_plane,
            });
        }
        Ok(Self {
            theta12: p.theta12,
            theta31: p.theta31,
            phi12: p.phi12,
            phi31: p.phi31,
            phi: p.phi,
        })
    }
}

/// Reconstructs the canonical two-dimensional triad.
pub fn build_canonical_n2(params: &CanonicalParamsN2) -> Result<Triad> {
    solve_dependent_n2(params.theta12, params.theta31, params.phi)?;
    let (c12, s12) = half_angles(params.theta12);
    let (c31, s31) = half_angles(params.theta31);
    let e12 = Complex64::from_polar(1.0, params.phi12);
    let e31 = Complex64::from_polar(1.0, -params.phi31);
    let psi1 = StateVector::from_real(&[1.0, 0.0])?;
    let psi2 = StateVector::new(vec![e12 * c12, e12 * s12])?;
    let psi3 = StateVector::new(vec![e31 * c31, e31 * Complex64::from_polar(s31, params.phi)])?;
    Triad::new(psi1, psi2, psi3)
}

/// Coefficients `(a, b)` with `ψ₃ = a ψ₁ + b ψ₂` for a two-dimensional triad.
pub fn psi3_in_span(angles: &IntrinsicAngles) -> Result<(Complex64, Complex64)> {
    CanonicalParamsN2::from_angles(angles)?;
    let (c12, s12) = half_angles(angles.theta12);
    let (c23, _) = half_angles(angles.theta23);
    let (c31, _) = half_angles(angles.theta31);
    let phi_g = angles.geometric_phase();
    let s12_sq = s12 * s12;
    let a = Complex64::from_polar(1.0, -angles.phi31)
        * (c31 - Complex64::from_polar(c12 * c23, -phi_g))
        / s12_sq;
    let b = Complex64::from_polar(1.0, angles.phi23)
        * (c23 - Complex64::from_polar(c31 * c12, phi_g))
        / s12_sq;
    Ok((a, b))
}

/// Free parameters of the canonical three-dimensional triad
/// `ψ₃ = e^{-iφ₃₁}(C₃₁, e^{iφ}S₃₁ cos ξ, S₃₁ sin ξ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalParamsN3 {
    pub theta12: f64,
    pub theta31: f64,
    pub phi12: f64,
    pub phi31: f64,
    pub phi: f64,
    pub xi: f64,
}

/// `ξ` sitting on an end of its interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum XiBoundary {
    /// `ξ = 0`: the triad lies in a two-dimensional subspace.
    Lower,
    /// `ξ = π/2`: `ψ₃` has no component along the `ψ₂` direction orthogonal to `ψ₁`.
    Upper,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalTriadN3 {
    pub triad: Triad,
    pub boundary: Option<XiBoundary>,
}

impl CanonicalParamsN3 {
    /// Canonical coordinates of any triad of dimension ≥ 2, read through a
    /// Gram–Schmidt frame built from `ψ₁, ψ₂`.
    pub fn from_triad(triad: &Triad) -> Result<Self> {
        let angles = extract_angles(triad)?;
        let [psi1, psi2, psi3] = triad.states();
        let (_, s12) = half_angles(angles.theta12);
        let (_, s31) = half_angles(angles.theta31);
        let e2 = psi2
            .combine(Complex64::new(1.0, 0.0), psi1, -inner_product(psi1, psi2)?)?
            .scaled(Complex64::new(1.0 / s12, 0.0));
        let along_e1 = inner_product(psi1, psi3)?;
        let along_e2 = inner_product(&e2, psi3)?;
        let rest = psi3
            .combine(Complex64::new(1.0, 0.0), psi1, -along_e1)?
            .combine(Complex64::new(1.0, 0.0), &e2, -along_e2)?
            .norm();
        let rotated = along_e2 * Complex64::from_polar(1.0, angles.phi12 + angles.phi31);
        Ok(Self {
            theta12: angles.theta12,
            theta31: angles.theta31,
            phi12: angles.phi12,
            phi31: angles.phi31,
            phi: wrap_two_pi(principal_arg(rotated)),
            xi: (rest / s31).atan2(rotated.norm() / s31),
        })
    }
}

/// Reconstructs the canonical three-dimensional triad. `ξ` on an end of
/// `[0, π/2]` is reported through [`CanonicalTriadN3::boundary`].
pub fn build_canonical_n3(params: &CanonicalParamsN3) -> Result<CanonicalTriadN3> {
    check_xi_closed(params.xi)?;
    solve_dependent_n3(params.theta12, params.theta31, params.phi, params.xi)?;
    let boundary = if params.xi == 0.0 {
        Some(XiBoundary::Lower)
    } else if params.xi == FRAC_PI_2 {
        Some(XiBoundary::Upper)
    } else {
        None
    };
    let (c12, s12) = half_angles(params.theta12);
    let (c31, s31) = half_angles(params.theta31);
    let (sin_xi, cos_xi) = params.xi.sin_cos();
    let e12 = Complex64::from_polar(1.0, params.phi12);
    let e31 = Complex64::from_polar(1.0, -params.phi31);
    let zero = Complex64::new(0.0, 0.0);
    let psi1 = StateVector::from_real(&[1.0, 0.0, 0.0])?;
    let psi2 = StateVector::new(vec![e12 * c12, e12 * s12, zero])?;
    let psi3 = StateVector::new(vec![
        e31 * c31,
        e31 * Complex64::from_polar(s31 * cos_xi, params.phi),
        e31 * (s31 * sin_xi),
    ])?;
    Ok(CanonicalTriadN3 {
        triad: Triad::new(psi1, psi2, psi3)?,
        boundary,
    })
}

/// Closed-form geometric phase of the canonical geodesic triangle,
/// `-arg(1 + e^{iφ} tan(θ₁₂/2) tan(θ₃₁/2) [cos ξ])`.
///
/// Without `ξ` this is the two-level formula; with it, the three-level one.
pub fn pancharatnam_phase(theta12: f64, theta31: f64, phi: f64, xi: Option<f64>) -> Result<f64> {
    pancharatnam_phase_with(theta12, theta31, phi, xi, &Tolerances::default())
}

pub fn pancharatnam_phase_with(
    theta12: f64,
    theta31: f64,
    phi: f64,
    xi: Option<f64>,
    tol: &Tolerances,
) -> Result<f64> {
    check_theta("theta12", theta12)?;
    check_theta("theta31", theta31)?;
    let xi_factor = match xi {
        Some(xi) => {
            check_xi_closed(xi)?;
            xi.cos()
        }
        None => 1.0,
    };
    let t = (theta12 / 2.0).tan() * (theta31 / 2.0).tan() * xi_factor;
    let w = 1.0 + Complex64::from_polar(t, phi);
    if w.norm() <= tol.degeneracy {
        return Err(Error::PhaseSingularity(w.norm()));
    }
    Ok(wrap_pi(-principal_arg(w)))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_3, FRAC_PI_4, TAU};

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::hilbert::random_state_from;
    use crate::phase::angle_distance;

    fn octant_triad() -> Triad {
        let s = FRAC_1_SQRT_2;
        Triad::new(
            StateVector::from_pairs(&[(1.0, 0.0), (0.0, 0.0)]).unwrap(),
            StateVector::from_pairs(&[(s, 0.0), (s, 0.0)]).unwrap(),
            StateVector::from_pairs(&[(s, 0.0), (0.0, s)]).unwrap(),
        )
        .unwrap()
    }

    fn random_triad(rng: &mut ChaCha8Rng, n: usize) -> Triad {
        Triad::new(
            random_state_from(rng, n),
            random_state_from(rng, n),
            random_state_from(rng, n),
        )
        .unwrap()
    }

    fn random_n2(rng: &mut ChaCha8Rng) -> CanonicalParamsN2 {
        CanonicalParamsN2 {
            theta12: rng.random_range(0.05..PI - 0.05),
            theta31: rng.random_range(0.05..PI - 0.05),
            phi12: rng.random_range(0.0..TAU),
            phi31: rng.random_range(0.0..TAU),
            phi: rng.random_range(0.05..TAU - 0.05),
        }
    }

    fn overlap_of(theta: f64, phi: f64) -> Complex64 {
        Complex64::from_polar((theta / 2.0).cos(), phi)
    }

    #[test]
    fn octant_angles() {
        let a = extract_angles(&octant_triad()).unwrap();
        for theta in a.thetas() {
            assert!((theta - FRAC_PI_2).abs() < 1e-14);
        }
        assert!(a.phi12.abs() < 1e-15);
        assert!(a.phi31.abs() < 1e-15);
        assert!((a.phi23 - FRAC_PI_4).abs() < 1e-15);
        assert!((a.geometric_phase() + FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn extraction_reproduces_overlaps() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 2..6 {
            let t = random_triad(&mut rng, n);
            let a = extract_angles(&t).unwrap();
            let pairs = [(0, 1, a.theta12, a.phi12), (1, 2, a.theta23, a.phi23), (2, 0, a.theta31, a.phi31)];
            for (j, k, theta, phi) in pairs {
                let direct = inner_product(t.get(j), t.get(k)).unwrap();
                assert!((direct - overlap_of(theta, phi)).norm() < 1e-12);
            }
            let phase = t.geometric_phase(&Tolerances::default()).unwrap();
            assert!(angle_distance(phase, a.geometric_phase()) < 1e-12);
        }
    }

    #[test]
    fn gauge_change_shifts_phis() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let t = random_triad(&mut rng, 3);
        let alphas = [0.4, -2.0, 5.5];
        let a = extract_angles(&t).unwrap();
        let b = extract_angles(&t.with_phases(alphas)).unwrap();
        for (x, y) in a.thetas().iter().zip(b.thetas()) {
            assert!((x - y).abs() < 1e-12);
        }
        let shifts = [(0, 1), (1, 2), (2, 0)];
        for ((old, new), (j, k)) in a.phis().iter().zip(b.phis()).zip(shifts) {
            assert!(angle_distance(new, old - alphas[j] + alphas[k]) < 1e-12);
        }
    }

    #[test]
    fn extraction_rejects_boundaries() {
        let e1 = StateVector::basis(2, 0);
        let e2 = StateVector::basis(2, 1);
        let mixed = StateVector::from_real(&[1.0, 1.0]).unwrap();
        let t = Triad::new(e1.clone(), e2, mixed.clone()).unwrap();
        assert_eq!(extract_angles(&t), Err(Error::Orthogonal(1, 2)));
        let t = Triad::new(e1.clone(), e1.with_phase(0.3), mixed).unwrap();
        assert_eq!(extract_angles(&t), Err(Error::Coincident(1, 2)));
    }

    #[test]
    fn solve_n2_octant() {
        let d = solve_dependent_n2(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2).unwrap();
        assert!((d.theta23 - FRAC_PI_2).abs() < 1e-14);
        assert!((d.phi_g + FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn solve_n2_coincident_boundary() {
        assert_eq!(solve_dependent_n2(1.0, 1.0, 0.0), Err(Error::Coincident(2, 3)));
        assert!(matches!(solve_dependent_n2(0.0, 1.0, 0.0), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn solve_n2_against_constructed_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let p = random_n2(&mut rng);
            let Ok(t) = build_canonical_n2(&p) else { continue };
            let d = solve_dependent_n2(p.theta12, p.theta31, p.phi).unwrap();
            let a = extract_angles(&t).unwrap();
            assert!((a.theta23 - d.theta23).abs() < 1e-10);
            assert!(angle_distance(a.phi23, d.phi23(p.phi12, p.phi31)) < 1e-10);
        }
    }

    #[test]
    fn build_n2_octant() {
        let t = build_canonical_n2(&CanonicalParamsN2 {
            theta12: FRAC_PI_2,
            theta31: FRAC_PI_2,
            phi12: 0.0,
            phi31: 0.0,
            phi: FRAC_PI_2,
        })
        .unwrap();
        let octant = octant_triad();
        for k in 0..3 {
            assert!(t.get(k).max_abs_diff(octant.get(k)).unwrap() < 1e-15);
        }
    }

    #[test]
    fn build_n2_degenerate() {
        let p = CanonicalParamsN2 {
            theta12: 1.2,
            theta31: 1.2,
            phi12: 0.0,
            phi31: 0.0,
            phi: 0.0,
        };
        assert_eq!(build_canonical_n2(&p), Err(Error::Coincident(2, 3)));
    }

    #[test]
    fn n2_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let p = random_n2(&mut rng);
            let Ok(t) = build_canonical_n2(&p) else { continue };
            let a = extract_angles(&t).unwrap();
            let back = CanonicalParamsN2::from_angles(&a).unwrap();
            assert!((back.theta12 - p.theta12).abs() < 1e-10);
            assert!((back.theta31 - p.theta31).abs() < 1e-10);
            assert!(angle_distance(back.phi12, p.phi12) < 1e-10);
            assert!(angle_distance(back.phi31, p.phi31) < 1e-10);
            assert!(angle_distance(back.phi, p.phi) < 1e-10);
            let via_frame = CanonicalParamsN2::from_triad(&t).unwrap();
            assert!(angle_distance(via_frame.phi, p.phi) < 1e-10);
        }
    }

    #[test]
    fn span_coefficients_octant() {
        let t = octant_triad();
        let a = extract_angles(&t).unwrap();
        let (x, y) = psi3_in_span(&a).unwrap();
        // Direct 2×2 solve: (1, i)/√2 = x (1, 0) + y (1, 1)/√2.
        let y_direct = Complex64::new(0.0, 1.0);
        let x_direct = Complex64::new(FRAC_1_SQRT_2, 0.0) - y_direct * FRAC_1_SQRT_2;
        assert!((x - x_direct).norm() < 1e-12);
        assert!((y - y_direct).norm() < 1e-12);
    }

    #[test]
    fn span_coefficients_reproduce_overlaps() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let t = random_triad(&mut rng, 2);
            let a = extract_angles(&t).unwrap();
            let (x, y) = psi3_in_span(&a).unwrap();
            let rebuilt = t.get(0).combine(x, t.get(1), y).unwrap();
            assert!(rebuilt.max_abs_diff(t.get(2)).unwrap() < 1e-10);
            let o31 = inner_product(&rebuilt, t.get(0)).unwrap();
            let o23 = inner_product(t.get(1), &rebuilt).unwrap();
            assert!((o31 - overlap_of(a.theta31, a.phi31)).norm() < 1e-10);
            assert!((o23 - overlap_of(a.theta23, a.phi23)).norm() < 1e-10);
        }
    }

    #[test]
    fn span_rejects_limits_and_inconsistency() {
        let mut a = extract_angles(&octant_triad()).unwrap();
        a.theta31 = 0.0;
        assert!(psi3_in_span(&a).is_err());
        let mut b = extract_angles(&octant_triad()).unwrap();
        b.theta23 = 0.3;
        assert!(matches!(psi3_in_span(&b), Err(Error::Inconsistent { .. })));
    }

    #[test]
    fn build_n3_worked_example() {
        let p = CanonicalParamsN3 {
            theta12: FRAC_PI_2,
            theta31: FRAC_PI_2,
            phi12: 0.0,
            phi31: 0.0,
            phi: FRAC_PI_2,
            xi: FRAC_PI_3,
        };
        let out = build_canonical_n3(&p).unwrap();
        assert_eq!(out.boundary, None);
        let a = extract_angles(&out.triad).unwrap();
        let c23 = (a.theta23 / 2.0).cos();
        assert!((c23 - 5f64.sqrt() / 4.0).abs() < 1e-14);
        // 1/2 + i/4 has argument atan(1/2)
        assert!((a.geometric_phase() + 0.5f64.atan()).abs() < 1e-14);
        let d = solve_dependent_n3(p.theta12, p.theta31, p.phi, p.xi).unwrap();
        assert!((d.theta23 - a.theta23).abs() < 1e-14);
        let exact = pancharatnam_phase(p.theta12, p.theta31, p.phi, Some(p.xi)).unwrap();
        assert!((exact + 0.5f64.atan()).abs() < 1e-14);
    }

    #[test]
    fn build_n3_third_vector_exact() {
        let p = CanonicalParamsN3 {
            theta12: 0.7,
            theta31: 2.1,
            phi12: 1.0,
            phi31: 4.0,
            phi: 2.5,
            xi: 0.9,
        };
        let t = build_canonical_n3(&p).unwrap().triad;
        let (c31, s31) = half_angles(p.theta31);
        let e = Complex64::from_polar(1.0, -p.phi31);
        let expect = [
            e * c31,
            e * Complex64::from_polar(s31 * p.xi.cos(), p.phi),
            e * s31 * p.xi.sin(),
        ];
        for (x, y) in t.get(2).amplitudes().iter().zip(expect) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn build_n3_boundaries_are_warnings() {
        let mut p = CanonicalParamsN3 {
            theta12: 1.0,
            theta31: 1.3,
            phi12: 0.2,
            phi31: 0.1,
            phi: 0.4,
            xi: FRAC_PI_2,
        };
        let out = build_canonical_n3(&p).unwrap();
        assert_eq!(out.boundary, Some(XiBoundary::Upper));
        let o23 = inner_product(out.triad.get(1), out.triad.get(2)).unwrap();
        let (c12, _) = half_angles(p.theta12);
        let (c31, _) = half_angles(p.theta31);
        let expect = Complex64::from_polar(c12 * c31, -(p.phi12 + p.phi31));
        assert!((o23 - expect).norm() < 1e-15);
        p.xi = 0.0;
        assert_eq!(build_canonical_n3(&p).unwrap().boundary, Some(XiBoundary::Lower));
        p.xi = 2.0;
        assert!(matches!(build_canonical_n3(&p), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn solve_n3_limits() {
        let d = solve_dependent_n3(1.0, 2.0, 0.7, FRAC_PI_2).unwrap();
        let expect = (0.5f64).cos() * 1f64.cos();
        assert!(((d.theta23 / 2.0).cos() - expect).abs() < 1e-15);
        assert!(d.phi_g.abs() < 1e-15);
        let a = solve_dependent_n3(1.0, 2.0, 0.7, 0.0).unwrap();
        let b = solve_dependent_n2(1.0, 2.0, 0.7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn n3_round_trip_and_solver() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let t = random_triad(&mut rng, 3);
            let p = CanonicalParamsN3::from_triad(&t).unwrap();
            let a = extract_angles(&t).unwrap();
            let d = solve_dependent_n3(p.theta12, p.theta31, p.phi, p.xi).unwrap();
            assert!((d.theta23 - a.theta23).abs() < 1e-10);
            assert!(angle_distance(d.phi_g, a.geometric_phase()) < 1e-10);
            let rebuilt = build_canonical_n3(&p).unwrap().triad;
            let b = extract_angles(&rebuilt).unwrap();
            for (x, y) in a.thetas().iter().zip(b.thetas()) {
                assert!((x - y).abs() < 1e-10);
            }
            for (x, y) in a.phis().iter().zip(b.phis()) {
                assert!(angle_distance(*x, y) < 1e-10);
            }
        }
    }

    #[test]
    fn pancharatnam_examples() {
        assert_eq!(pancharatnam_phase(1.0, 2.0, 0.0, None).unwrap(), 0.0);
        let octant = pancharatnam_phase(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2, None).unwrap();
        assert!((octant + FRAC_PI_4).abs() < 1e-15);
        assert!(matches!(
            pancharatnam_phase(FRAC_PI_2, FRAC_PI_2, PI, None),
            Err(Error::PhaseSingularity(_))
        ));
    }

    #[test]
    fn pancharatnam_matches_bi_phase() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..300 {
            let p = random_n2(&mut rng);
            let Ok(t) = build_canonical_n2(&p) else { continue };
            let direct = t.geometric_phase(&Tolerances::default()).unwrap();
            let closed = pancharatnam_phase(p.theta12, p.theta31, p.phi, None).unwrap();
            assert!(angle_distance(direct, closed) < 1e-10);
        }
    }

    #[test]
    fn triad_json_is_state_array() {
        let t = octant_triad();
        let text = serde_json::to_string(&t).unwrap();
        assert!(text.starts_with("[{\"dim\":2"));
        let back: Triad = serde_json::from_str(&text).unwrap();
        assert_eq!(back, t);
        let two = serde_json::to_string(&t.states()[..2]).unwrap();
        assert!(serde_json::from_str::<Triad>(&two).is_err());
    }
}
