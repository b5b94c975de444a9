//! Branch conventions for angles and phases.
//!
//! Every phase reported by this crate lies on the principal branch `(-π, π]`
//! unless a type documents `[0, 2π)` explicitly. Comparisons go through
//! [`angle_distance`], which is insensitive to multiples of `2π`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

/// Maps an angle to `(-π, π]`.
pub fn wrap_pi(angle: f64) -> f64 {
    if angle > -PI && angle <= PI {
        return angle;
    }
    let mut a = angle.rem_euclid(TAU);
    if a > PI {
        a -= TAU;
    }
    if a <= -PI {
        a += TAU;
    }
    a
}

/// Maps an angle to `[0, 2π)`.
pub fn wrap_two_pi(angle: f64) -> f64 {
    if (0.0..TAU).contains(&angle) {
        return angle;
    }
    let a = angle.rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Principal argument in `(-π, π]`.
///
/// `Complex64::arg` returns `-π` for a negative real part with a `-0.0`
/// imaginary part; that value is folded onto `π`.
pub fn principal_arg(z: Complex64) -> f64 {
    let a = z.arg();
    if a <= -PI {
        PI
    } else {
        a
    }
}

/// `min_k |a - b + 2πk|`.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    wrap_pi(a - b).abs()
}
