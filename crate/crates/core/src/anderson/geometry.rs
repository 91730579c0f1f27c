//! Finite cubic boxes in `ℤ³`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of sites in a box.
pub const DEFAULT_SITE_BUDGET: usize = 400_000;

/// Cube `{lo, …, lo+side−1}³` with Dirichlet truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeBox {
    pub lo: i64,
    pub side: usize,
}

impl LatticeBox {
    /// `side` sites per axis, coordinates from `−⌊side/2⌋`.
    pub fn with_side(side: usize) -> Result<Self> {
        Self::checked(-((side / 2) as i64), side, DEFAULT_SITE_BUDGET)
    }

    /// `{−l, …, l}³`, i.e. `2l+1` sites per axis.
    pub fn centered(l: usize) -> Result<Self> {
        Self::checked(-(l as i64), 2 * l + 1, DEFAULT_SITE_BUDGET)
    }

    pub fn checked(lo: i64, side: usize, budget: usize) -> Result<Self> {
        let n = side.checked_pow(3).unwrap_or(usize::MAX);
        if side == 0 || n > budget {
            return Err(Error::TooLarge {
                what: "box sites",
                size: n,
                limit: budget,
            });
        }
        Ok(LatticeBox { lo, side })
    }

    pub fn sites(&self) -> usize {
        self.side * self.side * self.side
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.side as i64 - 1
    }

    pub fn contains(&self, x: [i64; 3]) -> bool {
        x.iter().all(|&c| c >= self.lo && c <= self.hi())
    }

    pub fn index(&self, x: [i64; 3]) -> Option<usize> {
        if !self.contains(x) {
            return None;
        }
        let s = self.side;
        let i = |c: i64| (c - self.lo) as usize;
        Some((i(x[0]) * s + i(x[1])) * s + i(x[2]))
    }

    pub fn coords(&self, idx: usize) -> [i64; 3] {
        let s = self.side;
        let c = |k: usize| k as i64 + self.lo;
        [c(idx / (s * s)), c(idx / s % s), c(idx % s)]
    }

    /// In-box nearest neighbours.
    pub fn neighbors(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        let x = self.coords(idx);
        (0..6).filter_map(move |k| {
            let mut y = x;
            y[k / 2] += if k % 2 == 0 { 1 } else { -1 };
            self.index(y)
        })
    }

    /// Graph distance from a site to the complement of the box.
    pub fn distance_to_outside(&self, idx: usize) -> i64 {
        let x = self.coords(idx);
        x.iter()
            .map(|&c| (c - self.lo + 1).min(self.hi() - c + 1))
            .min()
            .unwrap()
    }

    /// Sites with a neighbour outside the box.
    pub fn boundary_sites(&self) -> Vec<usize> {
        (0..self.sites())
            .filter(|&i| self.distance_to_outside(i) <= 1)
            .collect()
    }
}
