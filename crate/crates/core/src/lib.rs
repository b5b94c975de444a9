//! Numerical toolkit for the geometry of finite-dimensional quantum state
//! spaces: Bargmann invariants and their unitary-invariant angle parameters,
//! geodesics and null phase curves, and the Majorana stellar decomposition
//! of states in the Schwinger oscillator basis.
//!
//! All operations are pure functions over immutable values.

pub mod angles;
pub mod coherent;
pub mod error;
pub mod hilbert;
pub mod majorana;
pub mod npc;
pub mod permanent;
pub mod phase;
pub mod polynomial;
pub mod sphere;

use serde::{Deserialize, Serialize};

pub use error::{Error, Result};
pub use hilbert::{StateVector, UnitaryMatrix};

/// Numerical thresholds shared by the library.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Overlaps with modulus below `degeneracy × ‖φ‖‖ψ‖` count as zero.
    pub degeneracy: f64,
    /// Largest `|Im Δ₃| / |Δ₃|` accepted on a null phase curve.
    pub npc: f64,
    /// Majorana coefficients below `leading × max|coefficient|` at the top of
    /// the polynomial are treated as a degree deficit.
    pub leading: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            degeneracy: 1e-12,
            npc: 1e-10,
            leading: 1e-10,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("degeneracy tolerance", self.degeneracy),
            ("npc tolerance", self.npc),
            ("leading-coefficient tolerance", self.leading),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::OutOfRange {
                    name,
                    value,
                    range: "(0, ∞)",
                });
            }
        }
        Ok(())
    }
}
