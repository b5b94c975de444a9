//! Reduction of a triad to canonical Majorana form, factorization of its
//! Bargmann invariant into two-level invariants, and signed solid angles.
//!
//! After a unitary `U`, `ψ₁ → e₁ = |(1,0); n⟩`, `ψ₂ → |ξ; n⟩` and `ψ₃` is a
//! general state with spinors `ξ′₁ … ξ′_{n-1}`. The Bargmann invariant then splits as
//! `Δ₃ = |c|² (n-1)! Π_k Δ₃((1,0), ξ, ξ′_k)`, so the geometric phase is a sum
//! of `n - 1` spin-½ phases, each half a solid angle on the sphere.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angles::{extract_angles_with, IntrinsicAngles, Triad};
use crate::error::{Error, Result};
use crate::hilbert::{apply_unitary, inner_product, StateVector, UnitaryMatrix};
use crate::majorana::{
    coefficients_to_roots_with, pure_product_state, spinor_to_star, star_to_spinor, MajoranaRep, Spinor, Star,
};
use crate::npc::CurveLift;
use crate::phase::{principal_arg, wrap_pi};
use crate::Tolerances;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `R z = ‖z‖ f₁`, built from a Householder reflection followed by a phase on `f₁`.
fn reflection_to_first(z: &DVector<Complex64>) -> DMatrix<Complex64> {
    let n = z.len();
    let norm = z.norm();
    let phase = if z[0].norm() == 0.0 {
        ONE
    } else {
        z[0] / z[0].norm()
    };
    let mut u = z.clone();
    u[0] += phase * norm;
    let h = DMatrix::<Complex64>::identity(n, n) - (&u * u.adjoint()) * Complex64::new(2.0 / u.norm_squared(), 0.0);
    let mut d = DMatrix::<Complex64>::identity(n, n);
    d[(0, 0)] = -phase.conj();
    d * h
}

/// A unitary taking unit `x` to unit `y`.
fn unitary_between(x: &DVector<Complex64>, y: &DVector<Complex64>) -> DMatrix<Complex64> {
    reflection_to_first(y).adjoint() * reflection_to_first(x)
}

/// Result of [`reduce_triad`].
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalReduction {
    pub angles: IntrinsicAngles,
    /// `U` with `Uψ_j = ψ′_j`.
    pub unitary: UnitaryMatrix,
    /// `ψ′₁ = e₁`.
    pub psi1: StateVector,
    /// `ψ′₂ = |ξ; n⟩`.
    pub psi2: StateVector,
    pub psi3: StateVector,
    pub xi: Spinor,
    /// Factorization of `ψ′₃`.
    pub rep3: MajoranaRep,
    /// `|c̄ √(n-1)! Π ᾱ′_k - e^{iφ₃₁} cos(θ₃₁/2)|`.
    pub residual: f64,
}

impl CanonicalReduction {
    pub fn dim(&self) -> usize {
        self.psi1.dim()
    }

    pub fn triad(&self) -> Result<Triad> {
        Triad::new(self.psi1.clone(), self.psi2.clone(), self.psi3.clone())
    }
}

/// Brings a triad to canonical form. The spinor of `ψ′₂` is
/// `α = e^{iφ₁₂/(n-1)} cos(θ₁₂/2)^{1/(n-1)}` with `β = √(1 - |α|²)` real.
pub fn reduce_triad(triad: &Triad) -> Result<CanonicalReduction> {
    reduce_triad_with(triad, &Tolerances::default())
}

pub fn reduce_triad_with(triad: &Triad, tol: &Tolerances) -> Result<CanonicalReduction> {
    let angles = extract_angles_with(triad, tol)?;
    let n = triad.dim();
    if n < 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: n });
    }
    let m = (n - 1) as f64;
    let [psi1, psi2, psi3] = triad.states();
    let u1 = reflection_to_first(&psi1.to_dvector());

    let alpha = Complex64::from_polar((angles.theta12 / 2.0).cos().powf(1.0 / m), angles.phi12 / m);
    let beta = Complex64::new((1.0 - alpha.norm_sqr()).max(0.0).sqrt(), 0.0);
    let xi = Spinor::new(alpha, beta)?;
    let target = pure_product_state(&xi, n)?.to_dvector();

    let moved = &u1 * psi2.to_dvector();
    let tail = moved.rows(1, n - 1).into_owned();
    let target_tail = target.rows(1, n - 1).into_owned();
    let (tn, ttn) = (tail.norm(), target_tail.norm());
    if tn <= tol.degeneracy || ttn <= tol.degeneracy {
        return Err(Error::Coincident(1, 2));
    }
    let w = unitary_between(&(tail / Complex64::new(tn, 0.0)), &(target_tail / Complex64::new(ttn, 0.0)));
    let mut u2 = DMatrix::<Complex64>::identity(n, n);
    u2.view_mut((1, 1), (n - 1, n - 1)).copy_from(&w);
    let unitary = UnitaryMatrix::with_tolerance(u2 * u1, 1e-10)?;

    let psi1p = apply_unitary(&unitary, psi1)?;
    let psi2p = apply_unitary(&unitary, psi2)?;
    let psi3p = apply_unitary(&unitary, psi3)?;
    let rep3 = coefficients_to_roots_with(&psi3p, tol)?;

    let root_fact = (1..n).map(|k| k as f64).product::<f64>().sqrt();
    let from_rep = rep3.scale.conj() * root_fact * rep3.spinors.iter().map(|s| s.alpha().conj()).product::<Complex64>();
    let expected = Complex64::from_polar((angles.theta31 / 2.0).cos(), angles.phi31);
    let residual = (from_rep - expected).norm();
    if !(residual < 1e-8) {
        return Err(Error::Inconsistent {
            what: "first component of the reduced third vector".into(),
            residual,
        });
    }
    Ok(CanonicalReduction {
        angles,
        unitary,
        psi1: psi1p,
        psi2: psi2p,
        psi3: psi3p,
        xi,
        rep3,
        residual,
    })
}

/// Two-level factors of the reduced Bargmann invariant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiFactorization {
    /// `Δ₃((1,0), ξ, ξ′_k) = α (ξ†ξ′_k) ᾱ′_k`.
    pub factors: Vec<Complex64>,
    /// `-arg` of each factor on `(-π, π]`.
    pub phases: Vec<f64>,
    /// `|c|² (n-1)!`.
    pub prefactor: f64,
    /// `-Σ arg` wrapped to `(-π, π]`.
    pub total_phase: f64,
}

impl BiFactorization {
    pub fn product(&self) -> Complex64 {
        self.factors.iter().product::<Complex64>() * self.prefactor
    }
}

pub fn bi_factorization(red: &CanonicalReduction) -> Result<BiFactorization> {
    bi_factorization_with(red, &Tolerances::default())
}

pub fn bi_factorization_with(red: &CanonicalReduction, tol: &Tolerances) -> Result<BiFactorization> {
    let alpha = red.xi.alpha();
    let mut factors = Vec::with_capacity(red.rep3.spinors.len());
    for (k, s) in red.rep3.spinors.iter().enumerate() {
        let f = alpha * red.xi.dot(s) * s.alpha().conj();
        if f.norm() <= tol.degeneracy {
            return Err(Error::Degenerate {
                what: format!("two-level factor {}", k + 1),
                modulus: f.norm(),
            });
        }
        factors.push(f);
    }
    let phases: Vec<f64> = factors.iter().map(|f| wrap_pi(-principal_arg(*f))).collect();
    let m = red.rep3.spinors.len();
    let prefactor = red.rep3.scale.norm_sqr() * (1..=m).map(|k| k as f64).product::<f64>();
    Ok(BiFactorization {
        total_phase: wrap_pi(phases.iter().sum()),
        phases,
        factors,
        prefactor,
    })
}

/// Three points on the unit sphere, no two antipodal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalTriangle {
    pub vertices: [Star; 3],
}

impl SphericalTriangle {
    pub fn new(a: Star, b: Star, c: Star) -> Result<Self> {
        let v = [a, b, c];
        for (i, j) in [(0, 1), (1, 2), (2, 0)] {
            let [x, y] = [v[i].coords(), v[j].coords()];
            let gap = ((x[0] + y[0]).powi(2) + (x[1] + y[1]).powi(2) + (x[2] + y[2]).powi(2)).sqrt();
            if gap <= 1e-8 {
                return Err(Error::Degenerate {
                    what: format!("vertices {} and {} are antipodal", i + 1, j + 1),
                    modulus: gap,
                });
            }
        }
        Ok(Self { vertices: v })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolidAngle {
    /// `-2 arg[(ξ₁†ξ₂)(ξ₂†ξ₃)(ξ₃†ξ₁)]`.
    pub omega: f64,
    /// Spherical excess from the side lengths.
    pub excess: f64,
    /// `n̂₁ · (n̂₂ × n̂₃)`.
    pub triple_product: f64,
    /// `|Ω + sign(triple) E| ≤ 1e-9`.
    pub consistent: bool,
}

fn arc(a: &Star, b: &Star) -> f64 {
    // atan2 form keeps accuracy for nearly equal and nearly opposite points
    let [x, y] = [a.coords(), b.coords()];
    let cross = [x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]];
    let s = (cross[0].powi(2) + cross[1].powi(2) + cross[2].powi(2)).sqrt();
    s.atan2(a.dot(b))
}

/// Unsigned area by L'Huilier's theorem.
pub fn spherical_excess(tri: &SphericalTriangle) -> f64 {
    let [p, q, r] = &tri.vertices;
    let (a, b, c) = (arc(q, r), arc(r, p), arc(p, q));
    let s = (a + b + c) / 2.0;
    let t = (s / 2.0).tan() * ((s - a) / 2.0).tan() * ((s - b) / 2.0).tan() * ((s - c) / 2.0).tan();
    4.0 * t.max(0.0).sqrt().atan()
}

/// Signed solid angle fixed by the Bargmann invariant of the vertex spinors.
/// With this sign `Ω(ẑ, x̂, ŷ) = -π/2`, i.e. `Ω = -sign(n̂₁·(n̂₂×n̂₃)) E`.
pub fn solid_angle(tri: &SphericalTriangle) -> Result<SolidAngle> {
    let xi = tri.vertices.map(|v| star_to_spinor(&v));
    let mut delta = ONE;
    for (i, j) in [(0, 1), (1, 2), (2, 0)] {
        let o = xi[i].dot(&xi[j]);
        if o.norm() <= 1e-12 {
            return Err(Error::Degenerate {
                what: format!("vertices {} and {} are antipodal", i + 1, j + 1),
                modulus: o.norm(),
            });
        }
        delta *= o;
    }
    let omega = -2.0 * principal_arg(delta);
    let excess = spherical_excess(tri);
    let [a, b, c] = tri.vertices.map(|v| v.coords());
    let triple = a[0] * (b[1] * c[2] - b[2] * c[1]) + a[1] * (b[2] * c[0] - b[0] * c[2]) + a[2] * (b[0] * c[1] - b[1] * c[0]);
    let signed = -triple.signum() * excess;
    let consistent = (omega - signed).abs() <= 1e-9 || (excess <= 1e-9 && omega.abs() <= 1e-9);
    Ok(SolidAngle {
        omega,
        excess,
        triple_product: triple,
        consistent,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolidAnglePhase {
    /// `n̂₁ = ẑ`, `n̂₂` the star of `ξ`.
    pub base: [Star; 2],
    /// Stars of `ψ′₃`.
    pub stars3: Vec<Star>,
    pub solid_angles: Vec<SolidAngle>,
    /// `½ Σ Ω` wrapped to `(-π, π]`.
    pub phase: f64,
}

/// `-arg Δ₃` as half the sum of the solid angles of the triangles
/// `(ẑ, n̂_ξ, n̂′_k)` over the stars of the reduced third vector.
pub fn phase_from_solid_angles(triad: &Triad) -> Result<SolidAnglePhase> {
    let red = reduce_triad(triad)?;
    let base = [Star::north(), spinor_to_star(&red.xi)];
    let stars3 = red.rep3.stars();
    let solid_angles = stars3
        .iter()
        .map(|s| solid_angle(&SphericalTriangle::new(base[0], base[1], *s)?))
        .collect::<Result<Vec<_>>>()?;
    let phase = wrap_pi(0.5 * solid_angles.iter().map(|a| a.omega).sum::<f64>());
    Ok(SolidAnglePhase {
        base,
        stars3,
        solid_angles,
        phase,
    })
}

/// Three-level case: `½ Ω(n̂₁, n̂₂, n̂₃) + ½ Ω(n̂₁, n̂₂, n̂′₃)`.
pub fn phase_from_solid_angles_n3(triad: &Triad) -> Result<SolidAnglePhase> {
    if triad.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: triad.dim(),
        });
    }
    phase_from_solid_angles(triad)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarPairSample {
    pub s: f64,
    pub stars: [Star; 2],
}

fn lexicographic(a: &Star, b: &Star) -> std::cmp::Ordering {
    let (x, y) = (a.coords(), b.coords());
    x[0].total_cmp(&y[0]).then(x[1].total_cmp(&y[1])).then(x[2].total_cmp(&y[2]))
}

/// Majorana star pairs along a three-dimensional curve, ordered so that each
/// star moves continuously: consecutive pairs are matched by least total arc length.
pub fn star_trajectory(lift: &CurveLift) -> Result<Vec<StarPairSample>> {
    star_trajectory_with(lift, &Tolerances::default())
}

pub fn star_trajectory_with(lift: &CurveLift, tol: &Tolerances) -> Result<Vec<StarPairSample>> {
    if lift.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: lift.dim(),
        });
    }
    let mut out: Vec<StarPairSample> = Vec::with_capacity(lift.states().len());
    for (i, psi) in lift.states().iter().enumerate() {
        let stars = coefficients_to_roots_with(psi, tol)?.stars();
        let (a, b) = (stars[0], stars[1]);
        let ordered = match out.last() {
            None => {
                if lexicographic(&a, &b).is_le() {
                    [a, b]
                } else {
                    [b, a]
                }
            }
            Some(prev) => {
                let [p, q] = prev.stars;
                let keep = arc(&p, &a) + arc(&q, &b);
                let swap = arc(&p, &b) + arc(&q, &a);
                if keep < swap || (keep == swap && lexicographic(&a, &b).is_le()) {
                    [a, b]
                } else {
                    [b, a]
                }
            }
        };
        out.push(StarPairSample {
            s: lift.grid().point(i),
            stars: ordered,
        });
    }
    Ok(out)
}

/// `(ψ′₁, ψ′₂, ψ′₃)` overlaps compared with the original triad.
pub fn reduction_overlap_error(triad: &Triad, red: &CanonicalReduction) -> Result<f64> {
    let before = triad.states();
    let after = [&red.psi1, &red.psi2, &red.psi3];
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let d = inner_product(&before[i], &before[j])? - inner_product(after[i], after[j])?;
            worst = worst.max(d.norm());
        }
    }
    Ok(worst)
}
