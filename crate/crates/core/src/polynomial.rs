//! Complex polynomials stored as ascending coefficient lists.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};

const POLISH_STEPS: usize = 8;

/// `Σ c_k z^k` by Horner.
pub fn evaluate(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn evaluate_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    coeffs.iter().rev().fold((zero, zero), |(p, dp), &c| (p * z + c, dp * z + p))
}

/// `|p(z)| / Σ |c_k| |z|^k`: backward error of `z` as a root.
pub fn relative_residual(coeffs: &[Complex64], z: Complex64) -> f64 {
    let scale = coeffs.iter().rev().fold(0.0, |acc, c| acc * z.norm() + c.norm());
    if scale == 0.0 {
        return 0.0;
    }
    evaluate(coeffs, z).norm() / scale
}

/// Monic polynomial `Π (z - r_k)`.
pub fn from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        coeffs.push(Complex64::new(0.0, 0.0));
        for k in (1..coeffs.len()).rev() {
            coeffs[k] = coeffs[k - 1] - r * coeffs[k];
        }
        coeffs[0] *= -r;
    }
    coeffs
}

/// Product of two polynomials.
pub fn multiply(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// All roots of a polynomial whose last coefficient is nonzero.
///
/// Exact zero roots are split off first, the rest come from the eigenvalues
/// of the companion matrix, and each root is then refined by Newton steps
/// that are kept only while they reduce `|p|`.
pub fn roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let lead = *coeffs.last().ok_or(Error::EmptyState)?;
    if lead.norm() == 0.0 {
        return Err(Error::Degenerate {
            what: "leading polynomial coefficient".into(),
            modulus: 0.0,
        });
    }
    if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::NonFinite("polynomial coefficients"));
    }
    let zeros = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = &coeffs[zeros..];
    let degree = reduced.len() - 1;
    let mut out = vec![Complex64::new(0.0, 0.0); zeros];
    if degree == 0 {
        return Ok(out);
    }
    let mut companion = DMatrix::<Complex64>::zeros(degree, degree);
    for i in 1..degree {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..degree {
        companion[(i, degree - 1)] = -reduced[i] / lead;
    }
    let eigen = Schur::new(companion)
        .eigenvalues()
        .ok_or(Error::RootFinding { residual: f64::NAN })?;
    for z in eigen.iter() {
        out.push(polish(reduced, *z));
    }
    let worst = out[zeros..]
        .iter()
        .map(|&z| relative_residual(reduced, z))
        .fold(0.0, f64::max);
    if !worst.is_finite() || worst > 1e-8 {
        return Err(Error::RootFinding { residual: worst });
    }
    Ok(out)
}

fn polish(coeffs: &[Complex64], mut z: Complex64) -> Complex64 {
    let (mut p, _) = evaluate_with_derivative(coeffs, z);
    for _ in 0..POLISH_STEPS {
        let (_, dp) = evaluate_with_derivative(coeffs, z);
        if dp.norm() == 0.0 || p.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        // a large jump means a cluster or multiple root; stay with the eigenvalue
        if step.norm() > 1e-3 * (1.0 + z.norm()) {
            break;
        }
        let candidate = z - step;
        let (pc, _) = evaluate_with_derivative(coeffs, candidate);
        if pc.norm() >= p.norm() {
            break;
        }
        z = candidate;
        p = pc;
    }
    z
}
