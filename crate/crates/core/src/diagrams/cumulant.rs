//! Coefficients `c_{2l}` with `𝔼 Π V(x_j) = Σ_π Π_S c_{|S|} δ(x_S)`.
//!
//! Taking all sites equal, the block containing the first slot has size `2k`
//! and its companions are chosen in `C(2l−1, 2k−1)` ways, which gives
//! `m_{2l} = Σ_{k=1}^{l} C(2l−1, 2k−1) c_{2k} m_{2l−2k}`.

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num};

use crate::density::DensitySpec;
use crate::error::{invalid, Result};

use super::partition::Partition;

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// `c_2, c_4, …, c_{2L}` from even moments `m_0 = 1, m_2, …, m_{2L}`.
///
/// `even_moments[l] = m_{2l}`; the result has `c[l] = c_{2l}` with `c[0] = 0`.
pub fn cumulants_from_moments<T>(even_moments: &[T]) -> Vec<T>
where
    T: Num + Clone + FromPrimitive,
{
    let n = even_moments.len();
    let mut c = vec![T::zero(); n];
    for l in 1..n {
        let mut acc = even_moments[l].clone();
        for k in 1..l {
            let b = T::from_u64(binomial(2 * l as u64 - 1, 2 * k as u64 - 1)).unwrap();
            acc = acc - b * c[k].clone() * even_moments[l - k].clone();
        }
        c[l] = acc;
    }
    c
}

/// Exact `c_{2l}` for the given law.
pub fn cumulant_coefficient(block_size: usize, density: &DensitySpec) -> Result<Ratio<i64>> {
    if block_size == 0 || !block_size.is_multiple_of(2) {
        return Err(invalid(format!(
            "block size must be positive and even, got {block_size}"
        )));
    }
    let l = block_size / 2;
    let moments = (0..=l)
        .map(|j| density.even_moment_exact(j as u32))
        .collect::<Result<Vec<_>>>()?;
    Ok(cumulants_from_moments(&moments)[l])
}

/// Floating-point `c_{2l}`.
pub fn cumulant_coefficient_f64(block_size: usize, density: &DensitySpec) -> Result<f64> {
    let r = cumulant_coefficient(block_size, density)?;
    Ok(*r.numer() as f64 / *r.denom() as f64)
}

/// `Σ_π Π_S c_{|S|}` over even partitions of the slots whose blocks are
/// site-homogeneous, i.e. the partition-sum prediction for `𝔼 Π_j V(site_j)`.
pub fn moment_by_partitions<T>(sites: &[usize], c: &dyn Fn(usize) -> T) -> T
where
    T: Num + Clone,
{
    fn go<T: Num + Clone>(rest: &[usize], sites: &[usize], c: &dyn Fn(usize) -> T) -> T {
        let Some((&first, others)) = rest.split_first() else {
            return T::one();
        };
        let k = others.len();
        let mut total = T::zero();
        for mask in 1u64..(1 << k) {
            let size = mask.count_ones() as usize;
            if size.is_multiple_of(2) {
                continue;
            }
            let mut ok = true;
            let mut left = Vec::with_capacity(k - size);
            for (j, &i) in others.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    if sites[i] != sites[first] {
                        ok = false;
                        break;
                    }
                } else {
                    left.push(i);
                }
            }
            if ok {
                total = total + c(size + 1) * go(&left, sites, c);
            }
        }
        total
    }
    let slots: Vec<usize> = (0..sites.len()).collect();
    go(&slots, sites, c)
}

/// `Π_S c_{|S|}` for a partition.
pub fn partition_weight(p: &Partition, density: &DensitySpec) -> Result<Ratio<i64>> {
    p.blocks().iter().try_fold(Ratio::from_integer(1), |acc, b| {
        Ok(acc * cumulant_coefficient(b.len(), density)?)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_coefficients() {
        let d = DensitySpec::default();
        assert_eq!(cumulant_coefficient(2, &d).unwrap(), Ratio::from_integer(1));
        assert_eq!(cumulant_coefficient(4, &d).unwrap(), Ratio::new(-6, 5));
        assert!(cumulant_coefficient(3, &d).is_err());
        assert!(cumulant_coefficient(0, &d).is_err());
    }

    #[test]
    fn recursion_reproduces_moments() {
        let d = DensitySpec::default();
        let m: Vec<Ratio<i64>> = (0..=5).map(|j| d.even_moment_exact(j).unwrap()).collect();
        let c = cumulants_from_moments(&m);
        for l in 1..=5 {
            let sites = vec![0usize; 2 * l];
            let v = moment_by_partitions(&sites, &|s| c[s / 2]);
            assert_eq!(v, m[l], "l={l}");
        }
        // Gaussian moments (2l−1)!! have only c_2 nonzero.
        let g: Vec<f64> = vec![1.0, 1.0, 3.0, 15.0, 105.0];
        let cg = cumulants_from_moments(&g);
        assert_eq!(cg[1], 1.0);
        assert!(cg[2..].iter().all(|v| v.abs() < 1e-12));
    }
}
