//! Canonical coherent states of one oscillator mode, handled analytically.
//!
//! `⟨z′|z⟩ = exp(-|z′ - z|²/2 + i Im(z̄′ z))`. A [`CoherentLabel`] is the ray
//! representative `e^{iα}|z⟩`, and the group `G₄` generated by
//! displacements, phase-space rotations and overall phases acts on labels
//! while preserving every overlap.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angles::{check_theta, dependent_from_overlap, DependentPair};
use crate::error::{Error, Result};
use crate::phase::{principal_arg, wrap_pi, wrap_two_pi};
use crate::Tolerances;

/// `⟨z′|z⟩`.
pub fn coherent_overlap(z_prime: Complex64, z: Complex64) -> Complex64 {
    let d = (z_prime - z).norm_sqr();
    let im = (z_prime.conj() * z).im;
    Complex64::new(-d / 2.0, im).exp()
}

/// The vector `e^{iα}|z⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherentLabel {
    pub phase: f64,
    pub z: Complex64,
}

impl CoherentLabel {
    pub fn new(phase: f64, z: Complex64) -> Self {
        Self { phase, z }
    }

    /// `(self, other)`, conjugate-linear in `self`.
    pub fn overlap(&self, other: &CoherentLabel) -> Complex64 {
        Complex64::from_polar(1.0, other.phase - self.phase) * coherent_overlap(self.z, other.z)
    }
}

/// `exp(iα₀) D(z₀) R(θ₀)`: rotate phase space by `-θ₀`, displace by `z₀`,
/// multiply by `e^{iα₀}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct G4Element {
    pub alpha0: f64,
    pub z0: Complex64,
    pub theta0: f64,
}

impl G4Element {
    pub fn identity() -> Self {
        Self {
            alpha0: 0.0,
            z0: Complex64::new(0.0, 0.0),
            theta0: 0.0,
        }
    }

    pub fn act(&self, label: &CoherentLabel) -> CoherentLabel {
        g4_action(self, label)
    }
}

/// `α″ = α + α₀ + Im(z₀ z̄ e^{iθ₀})`, `z″ = z e^{-iθ₀} + z₀`.
pub fn g4_action(g: &G4Element, label: &CoherentLabel) -> CoherentLabel {
    let rot = Complex64::from_polar(1.0, g.theta0);
    let shift = (g.z0 * label.z.conj() * rot).im;
    CoherentLabel {
        phase: wrap_two_pi(label.phase + g.alpha0 + shift),
        z: label.z / rot + g.z0,
    }
}

/// Five angles of a coherent-state triad brought to the canonical labels
/// `(0, r, r′e^{iφ′})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherentTriadParams {
    pub theta12: f64,
    pub theta31: f64,
    pub phi12: f64,
    pub phi31: f64,
    pub phi_prime: f64,
}

fn radius(theta: f64) -> f64 {
    (-2.0 * (theta / 2.0).cos().ln()).sqrt()
}

impl CoherentTriadParams {
    pub fn validate(&self) -> Result<()> {
        check_theta("theta12", self.theta12)?;
        check_theta("theta31", self.theta31)?;
        for (name, v) in [("phi12", self.phi12), ("phi31", self.phi31), ("phi_prime", self.phi_prime)] {
            if !v.is_finite() {
                return Err(Error::NonFinite(name));
            }
        }
        Ok(())
    }

    /// `e^{-r²/2} = cos(θ₁₂/2)`.
    pub fn r(&self) -> f64 {
        radius(self.theta12)
    }

    /// `e^{-r′²/2} = cos(θ₃₁/2)`.
    pub fn r_prime(&self) -> f64 {
        radius(self.theta31)
    }

    /// Labels `(0, 0)`, `(φ₁₂, r)`, `(-φ₃₁, r′e^{iφ′})`, which reproduce
    /// `φ₁₂` and `φ₃₁` as overlap phases.
    pub fn labels(&self) -> Result<[CoherentLabel; 3]> {
        self.validate()?;
        Ok([
            CoherentLabel::new(0.0, Complex64::new(0.0, 0.0)),
            CoherentLabel::new(wrap_two_pi(self.phi12), Complex64::new(self.r(), 0.0)),
            CoherentLabel::new(
                wrap_two_pi(-self.phi31),
                Complex64::from_polar(self.r_prime(), self.phi_prime),
            ),
        ])
    }
}

/// `(θ₂₃, φ_g)` for the coherent family:
/// `C₂₃ = C₁₂C₃₁ e^{rr′cos φ′}`, `φ_g = -rr′ sin φ′`.
pub fn solve_dependent_coherent(theta12: f64, theta31: f64, phi_prime: f64) -> Result<DependentPair> {
    solve_dependent_coherent_with(theta12, theta31, phi_prime, &Tolerances::default())
}

pub fn solve_dependent_coherent_with(
    theta12: f64,
    theta31: f64,
    phi_prime: f64,
    tol: &Tolerances,
) -> Result<DependentPair> {
    check_theta("theta12", theta12)?;
    check_theta("theta31", theta31)?;
    let (r, rp) = (radius(theta12), radius(theta31));
    let (c12, c31) = ((theta12 / 2.0).cos(), (theta31 / 2.0).cos());
    let c23 = c12 * c31 * (r * rp * phi_prime.cos()).exp();
    let pair = dependent_from_overlap(Complex64::from_polar(c23, r * rp * phi_prime.sin()), tol)?;
    // keep the closed form rather than the round trip through arg
    Ok(DependentPair {
        theta23: pair.theta23,
        phi_g: wrap_pi(-r * rp * phi_prime.sin()),
    })
}

/// `(ψ₁,ψ₂)(ψ₂,ψ₃)(ψ₃,ψ₁)` over coherent labels.
pub fn coherent_bargmann(labels: &[CoherentLabel; 3]) -> Complex64 {
    labels[0].overlap(&labels[1]) * labels[1].overlap(&labels[2]) * labels[2].overlap(&labels[0])
}

/// `-arg` of [`coherent_bargmann`] on `(-π, π]`.
pub fn coherent_phase(labels: &[CoherentLabel; 3]) -> f64 {
    wrap_pi(-principal_arg(coherent_bargmann(labels)))
}
