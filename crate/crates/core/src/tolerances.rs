//! Budgets used by the reproduction checks.

use serde::{Deserialize, Serialize};

use crate::integrals::Quantity;

pub const E1_RUNTIME_SECS: f64 = 5.0;

pub const Z_SERIES_POINTS: [f64; 3] = [1e-1, 1e-2, 1e-3];
/// `mu` at which the fifth-order coefficient is fitted.
pub const Z_SERIES_FIT_MU: f64 = 0.02;
pub const Z_SERIES_FACTOR: f64 = 10.0;
/// Richardson steps for the second-order coefficient.
pub const Z_SECOND_COEFF_STEPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];
pub const Z_SECOND_COEFF_TOL: f64 = 1e-12;
pub const Z_SERIES_RUNTIME_SECS: f64 = 1.0;

pub const DECAY_POINTS: [f64; 3] = [-10.0, -100.0, -1000.0];
pub const DECAY_RUNTIME_SECS: f64 = 1.0;

pub const BVP_MAX_NEWTON: usize = 15;
pub const BVP_RESIDUAL: f64 = 1e-10;
pub const BVP_PROBE_FRACTION: f64 = 0.9;
pub const BVP_LEADING_REL: f64 = 1e-2;
pub const BVP_ANTISYMMETRY: f64 = 1e-6;
pub const BVP_RUNTIME_SECS: f64 = 60.0;

pub const IDENTITY_DELTA: f64 = 1e-3;
pub const IDENTITY_MAX: f64 = 1e-4;
pub const IDENTITY_HALVING_RATIO: f64 = 3.5;

pub const INTEGRAL_HALF_WIDTH: f64 = 16.0;
pub const INTEGRAL_TIMES: [f64; 3] = [0.0, 0.5, -0.5];
pub const INTEGRAL_RUNTIME_SECS: f64 = 300.0;

pub const HAMILTONIAN_FACTOR: f64 = 2.0;
pub const H2_RELATIVE: f64 = 1e-2;

pub const JACOBIAN_NODES: usize = 101;
pub const JACOBIAN_REL: f64 = 1e-6;

/// Per-quantity budgets for regularized totals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralBudgets {
    pub u: f64,
    pub u2: f64,
    pub xu: f64,
    /// Largest admissible error estimate for `H1`; the total itself must
    /// lie within its own estimate.
    pub h1_estimate: f64,
}

impl Default for IntegralBudgets {
    fn default() -> Self {
        IntegralBudgets { u: 5e-3, u2: 1e-2, xu: 1e-2, h1_estimate: 5e-2 }
    }
}

impl IntegralBudgets {
    pub fn for_quantity(&self, q: Quantity) -> f64 {
        match q {
            Quantity::U => self.u,
            Quantity::U2 => self.u2,
            Quantity::Xu => self.xu,
            Quantity::H1 => self.h1_estimate,
        }
    }
}
