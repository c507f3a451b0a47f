//! Desk-scale simulator for variational quantum annealing.
//!
//! The crate compares bang-bang (QAOA) control of `H(t) = u(t)·B + (1 − u(t))·C`
//! against clipped-polynomial schedules. Comparison is by energy-CDF
//! majorization with annealing time as the resource: the emulation factor is
//! the shortest polynomial-schedule time whose CDF dominates the QAOA CDF,
//! divided by the QAOA time.
//!
//! Modules, bottom-up:
//! - [`problems`]: graphs, Max-Cut cost, instance generators and enumeration.
//! - [`quantum`]: state vectors, QAOA layers, product-formula evolution,
//!   energy distributions.
//! - [`schedules`]: bang-bang, clipped-polynomial and piecewise controls,
//!   including the Lagrange embedding of bang-bang into polynomials.
//! - [`optimize`]: Nelder-Mead, Powell, QAOA bootstrapping, adjoint
//!   gradients and polynomial optimization.
//! - [`emulation`]: CDFs, majorization, minimum-time search, emulation factors.

pub mod emulation;
pub mod error;
pub mod optimize;
pub mod problems;
pub mod quantum;
pub mod schedules;

pub use error::{Error, Result};

pub const DEFAULT_MAX_QUBITS: usize = 16;

/// Runtime guard on `2^n` allocations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Limits {
    pub max_qubits: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_qubits: DEFAULT_MAX_QUBITS,
        }
    }
}

impl Limits {
    pub fn check_qubits(&self, n: usize) -> Result<()> {
        if n > self.max_qubits {
            Err(Error::ResourceLimit {
                requested: n,
                limit: self.max_qubits,
            })
        } else {
            Ok(())
        }
    }
}
