//! Truncated lattice sums of products of free propagators.

use crate::density::DensitySpec;
use crate::diagrams::cumulant::partition_weight;
use crate::diagrams::{enumerate_partitions, IndexSet, Partition};
use crate::error::{Error, Result};
use crate::green::{green_free_many, LatticeVector};

/// `R_r` on the octant `[0, e₀]×[0, e₁]×[0, e₂]`, extended by reflection.
#[derive(Debug, Clone)]
pub struct DenseGreen {
    pub estar: f64,
    extent: [usize; 3],
    values: Vec<f64>,
}

impl DenseGreen {
    pub fn new(estar: f64, extent: [usize; 3]) -> Result<Self> {
        let count = (extent[0] + 1) * (extent[1] + 1) * (extent[2] + 1);
        if count > 2_000_000 {
            return Err(Error::TooLarge {
                what: "dense green table points",
                size: count,
                limit: 2_000_000,
            });
        }
        let mut pts = Vec::with_capacity(count);
        for a in 0..=extent[0] {
            for b in 0..=extent[1] {
                for c in 0..=extent[2] {
                    pts.push(LatticeVector::new(a as i64, b as i64, c as i64));
                }
            }
        }
        let values = green_free_many(&pts, estar)?;
        Ok(DenseGreen { estar, extent, values })
    }

    pub fn get(&self, d: [i64; 3]) -> f64 {
        let a = d.map(|x| x.unsigned_abs() as usize);
        assert!(
            a[0] <= self.extent[0] && a[1] <= self.extent[1] && a[2] <= self.extent[2],
            "{d:?} outside dense table"
        );
        self.values[(a[0] * (self.extent[1] + 1) + a[1]) * (self.extent[2] + 1) + a[2]]
    }
}

fn diff(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Summation sites: the bounding box of `x` and `y` enlarged by `margin`.
#[derive(Debug, Clone)]
pub struct Region {
    pub sites: Vec<[i64; 3]>,
    pub lo: [i64; 3],
    pub hi: [i64; 3],
}

impl Region {
    pub fn around(x: [i64; 3], y: [i64; 3], margin: i64) -> Self {
        let lo = [0, 1, 2].map(|a| x[a].min(y[a]) - margin);
        let hi = [0, 1, 2].map(|a| x[a].max(y[a]) + margin);
        let mut sites = Vec::new();
        for i in lo[0]..=hi[0] {
            for j in lo[1]..=hi[1] {
                for k in lo[2]..=hi[2] {
                    sites.push([i, j, k]);
                }
            }
        }
        Region { sites, lo, hi }
    }

    /// Octant extent needed to look up `R_r` between any two of `x`, `y` and the region.
    pub fn extent(&self, x: [i64; 3], y: [i64; 3]) -> [usize; 3] {
        [0, 1, 2].map(|a| {
            let lo = self.lo[a].min(x[a]).min(y[a]);
            let hi = self.hi[a].max(x[a]).max(y[a]);
            (hi - lo) as usize
        })
    }
}

/// Propagators restricted to a region.
pub struct RegionKernel {
    pub region: Region,
    /// `R_r(x, z)`.
    pub from_x: Vec<f64>,
    /// `R_r(z, y)`.
    pub to_y: Vec<f64>,
    /// `R_r(0)`.
    pub r0: f64,
    /// Row-major `R_r(z_i, z_j)` when built.
    pub matrix: Option<Vec<f64>>,
}

impl RegionKernel {
    pub fn new(green: &DenseGreen, region: Region, x: [i64; 3], y: [i64; 3], with_matrix: bool) -> Result<Self> {
        let m = region.sites.len();
        if with_matrix && m > 8000 {
            return Err(Error::TooLarge {
                what: "region for pair sums",
                size: m,
                limit: 8000,
            });
        }
        let from_x = region.sites.iter().map(|&z| green.get(diff(x, z))).collect();
        let to_y = region.sites.iter().map(|&z| green.get(diff(z, y))).collect();
        let matrix = with_matrix.then(|| {
            let mut g = vec![0.0; m * m];
            for i in 0..m {
                for j in 0..m {
                    g[i * m + j] = green.get(diff(region.sites[i], region.sites[j]));
                }
            }
            g
        });
        Ok(RegionKernel {
            region,
            from_x,
            to_y,
            r0: green.get([0, 0, 0]),
            matrix,
        })
    }

    pub fn len(&self) -> usize {
        self.region.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.region.sites.is_empty()
    }

    fn g(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.r0;
        }
        let m = self.len();
        self.matrix.as_ref().expect("pair matrix not built")[i * m + j]
    }

    /// `Σ_z Π_chains R(x, z_{b(1)}) ⋯ R(z_{b(l)}, y)` for one partition of `Υ_{l,l}`.
    pub fn partition_sum(&self, l: usize, p: &Partition) -> Result<f64> {
        let blocks = p.blocks().len();
        let m = self.len();
        let total = (m as f64).powi(blocks as i32);
        if total > 4e9 {
            return Err(Error::TooLarge {
                what: "partition lattice sum",
                size: total as usize,
                limit: 4_000_000_000,
            });
        }
        let chains: [Vec<usize>; 2] = [
            (1..=l).map(|i| p.block_of(i).unwrap()).collect(),
            (l + 2..=2 * l + 1).map(|i| p.block_of(i).unwrap()).collect(),
        ];
        let mut z = vec![0usize; blocks];
        let mut sum = 0.0;
        loop {
            let mut prod = 1.0;
            for c in &chains {
                prod *= self.from_x[z[c[0]]] * self.to_y[z[c[l - 1]]];
                for w in c.windows(2) {
                    prod *= self.g(z[w[0]], z[w[1]]);
                }
            }
            sum += prod;
            let mut k = 0;
            loop {
                if k == blocks {
                    return Ok(sum);
                }
                z[k] += 1;
                if z[k] < m {
                    break;
                }
                z[k] = 0;
                k += 1;
            }
        }
    }

    /// Gate-free partition sum `Σ_π Π c_{|S|} · S(π)` for `𝔼 A_l²`, without the `λ^{2l}` factor.
    pub fn gate_free_sum(&self, l: usize, density: &DensitySpec) -> Result<f64> {
        let set = IndexSet::symmetric(l);
        let mut total = 0.0;
        for p in enumerate_partitions(&set, false, true)? {
            let w = partition_weight(&p, density)?;
            total += *w.numer() as f64 / *w.denom() as f64 * self.partition_sum(l, &p)?;
        }
        Ok(total)
    }
}
