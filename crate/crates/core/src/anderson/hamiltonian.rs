//! `H = −½Δ + λV` restricted to a box.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::geometry::LatticeBox;
use crate::error::{invalid, Result};

/// Seven-point operator: diagonal `3 + λV(n)`, off-diagonal `−1/2` between in-box neighbours.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxHamiltonian {
    pub geometry: LatticeBox,
    pub diagonal: Vec<f64>,
}

pub const HOPPING: f64 = -0.5;

pub fn build_hamiltonian(geometry: LatticeBox, potential: &[f64], lambda: f64) -> Result<BoxHamiltonian> {
    if potential.len() != geometry.sites() {
        return Err(invalid(format!(
            "potential has {} sites, box has {}",
            potential.len(),
            geometry.sites()
        )));
    }
    Ok(BoxHamiltonian {
        geometry,
        diagonal: potential.iter().map(|v| 3.0 + lambda * v).collect(),
    })
}

impl BoxHamiltonian {
    pub fn free(geometry: LatticeBox) -> Self {
        BoxHamiltonian {
            geometry,
            diagonal: vec![3.0; geometry.sites()],
        }
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    /// `out = (H + shift) x`.
    pub fn apply_shifted(&self, shift: Complex64, x: &[Complex64], out: &mut [Complex64]) {
        for i in 0..self.dim() {
            let mut s = (self.diagonal[i] + shift) * x[i];
            for j in self.geometry.neighbors(i) {
                s += HOPPING * x[j];
            }
            out[i] = s;
        }
    }

    pub fn apply_real(&self, shift: f64, x: &[f64], out: &mut [f64]) {
        for i in 0..self.dim() {
            let mut s = (self.diagonal[i] + shift) * x[i];
            for j in self.geometry.neighbors(i) {
                s += HOPPING * x[j];
            }
            out[i] = s;
        }
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.diagonal[i] + HOPPING * self.geometry.neighbors(i).count() as f64
    }
}
