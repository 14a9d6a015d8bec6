use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Thresholds used for numerical decisions.
///
/// `algebraic` bounds residuals of identities that hold exactly in exact
/// arithmetic, `spectral` decides norm and positivity boundaries, and `grid`
/// is the accuracy expected from optimization over the torus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub algebraic: f64,
    pub spectral: f64,
    pub grid: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            algebraic: 1e-10,
            spectral: 1e-8,
            grid: 1e-3,
        }
    }
}

impl Tolerance {
    pub fn new(algebraic: f64, spectral: f64, grid: f64) -> Result<Self> {
        let t = Self {
            algebraic,
            spectral,
            grid,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.algebraic > 0.0
            && self.spectral > 0.0
            && self.grid > 0.0
            && self.algebraic <= self.spectral
            && self.spectral <= self.grid;
        if ok {
            Ok(())
        } else {
            Err(Error::PreconditionFailed(format!(
                "tolerances must satisfy 0 < algebraic <= spectral <= grid, got {self:?}"
            )))
        }
    }
}
