//! Random potentials on a box.

use crate::density::DensitySpec;
use crate::rng::stream_rng;

use super::geometry::LatticeBox;

/// I.i.d. site potential, a deterministic function of `(seed, index)`.
pub fn sample_potential(geometry: &LatticeBox, density: &DensitySpec, seed: u64, index: u64) -> Vec<f64> {
    let mut rng = stream_rng(seed, "potential", index);
    (0..geometry.sites()).map(|_| density.sample(&mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_distinct() {
        let b = LatticeBox::with_side(3).unwrap();
        let d = DensitySpec::default();
        assert_eq!(sample_potential(&b, &d, 1, 2), sample_potential(&b, &d, 1, 2));
        assert_ne!(sample_potential(&b, &d, 1, 2), sample_potential(&b, &d, 1, 3));
    }
}
