//! Exact permanents of small complex matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest order accepted by [`permanent`].
pub const MAX_PERMANENT_ORDER: usize = 12;

/// Ryser's formula with Gray-code updates of the row sums, `O(2^m m)`.
pub fn permanent(a: &DMatrix<Complex64>) -> Result<Complex64> {
    let m = a.nrows();
    if a.ncols() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: a.ncols(),
        });
    }
    if m > MAX_PERMANENT_ORDER {
        return Err(Error::SizeExceeded {
            size: m,
            max: MAX_PERMANENT_ORDER,
        });
    }
    if m == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let mut row_sums = vec![Complex64::new(0.0, 0.0); m];
    let mut total = Complex64::new(0.0, 0.0);
    let mut gray: u32 = 0;
    for k in 1u32..(1 << m) {
        let col = k.trailing_zeros() as usize;
        gray ^= 1 << col;
        let adding = gray & (1 << col) != 0;
        for (i, s) in row_sums.iter_mut().enumerate() {
            if adding {
                *s += a[(i, col)];
            } else {
                *s -= a[(i, col)];
            }
        }
        let prod: Complex64 = row_sums.iter().product();
        if gray.count_ones().is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(if m.is_multiple_of(2) { total } else { -total })
}
