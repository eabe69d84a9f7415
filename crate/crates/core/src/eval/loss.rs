//! The gated composite loss `L = L_r + P_g * λ * L_g`.

use crate::error::{FagcError, Result};

/// σ values strictly above this threshold switch the augmented term on.
pub const GATE_THRESHOLD: f64 = 0.5;

/// λ grid used by the influence-factor sweep.
pub const LAMBDA_GRID: [f64; 9] = [0.0, 0.1, 0.3, 0.45, 0.5, 0.55, 0.7, 0.9, 1.0];

#[derive(Debug, Clone, PartialEq)]
pub struct LossConfig {
    /// Influence factor of the augmented term, in `[0, 1]`.
    pub lambda: f64,
    /// Seed for the per-step σ draws.
    pub seed: u64,
}

impl Default for LossConfig {
    fn default() -> Self {
        Self {
            lambda: 0.5,
            seed: 0,
        }
    }
}

impl LossConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(FagcError::InvalidConfig(format!(
                "lambda must lie in [0, 1], got {}",
                self.lambda
            )));
        }
        Ok(())
    }
}

/// `P_g`: 1 when `sigma > 0.5`, else 0.
pub fn gate(sigma: f64) -> u8 {
    u8::from(sigma > GATE_THRESHOLD)
}

pub fn fagc_loss(real_loss: f64, augmented_loss: f64, gate: u8, lambda: f64) -> f64 {
    real_loss + f64::from(gate) * lambda * augmented_loss
}
