//! Probability maps: per-cell target-presence belief over a grid.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridSpec;

/// Compensated (Kahan) summation; keeps normalization checks honest even on
/// maps with 10^5 cells.
pub(crate) fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// One axis-aligned Gaussian component of a target-location mixture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianComponent {
    pub weight: f64,
    /// Mean position (x, y), meters.
    pub mean: [f64; 2],
    /// Standard deviation per axis (x, y), meters.
    pub std: [f64; 2],
}

impl GaussianComponent {
    fn density(&self, x: f64, y: f64) -> f64 {
        let dx = (x - self.mean[0]) / self.std[0];
        let dy = (y - self.mean[1]) / self.std[1];
        let norm = std::f64::consts::TAU * self.std[0] * self.std[1];
        self.weight * (-0.5 * (dx * dx + dy * dy)).exp() / norm
    }
}

/// Family of target-location distributions supported by scenario files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistributionKind {
    Uniform,
    GaussianMixture,
    GaussianUniformMixture,
}

/// Declarative description of the target-location distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionSpec {
    pub kind: DistributionKind,
    /// Mixture components; must be empty for the uniform kind.
    #[serde(default, rename = "component")]
    pub components: Vec<GaussianComponent>,
    /// Mass assigned to the area-wide uniform floor
    /// (gaussian_uniform_mixture only).
    #[serde(default)]
    pub uniform_weight: f64,
}

impl DistributionSpec {
    pub fn uniform() -> Self {
        Self {
            kind: DistributionKind::Uniform,
            components: Vec::new(),
            uniform_weight: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            DistributionKind::Uniform => {
                if !self.components.is_empty() || self.uniform_weight != 0.0 {
                    return Err(Error::InvalidDistribution(
                        "uniform kind takes no components or uniform_weight".into(),
                    ));
                }
                Ok(())
            }
            DistributionKind::GaussianMixture | DistributionKind::GaussianUniformMixture => {
                if self.components.is_empty() {
                    return Err(Error::InvalidDistribution(
                        "mixture kinds need at least one component".into(),
                    ));
                }
                let uniform_weight = match self.kind {
                    DistributionKind::GaussianUniformMixture => {
                        if !(0.0..=1.0).contains(&self.uniform_weight) {
                            return Err(Error::InvalidDistribution(format!(
                                "uniform_weight must lie in [0, 1], got {}",
                                self.uniform_weight
                            )));
                        }
                        self.uniform_weight
                    }
                    _ => {
                        if self.uniform_weight != 0.0 {
                            return Err(Error::InvalidDistribution(
                                "uniform_weight requires kind gaussian_uniform_mixture".into(),
                            ));
                        }
                        0.0
                    }
                };
                for (i, c) in self.components.iter().enumerate() {
                    if !c.weight.is_finite() || c.weight < 0.0 {
                        return Err(Error::InvalidDistribution(format!(
                            "component {i} weight must be non-negative, got {}",
                            c.weight
                        )));
                    }
                    if c.std.iter().any(|&s| !s.is_finite() || s <= 0.0) {
                        return Err(Error::InvalidDistribution(format!(
                            "component {i} stds must be strictly positive"
                        )));
                    }
                }
                let total = kahan_sum(self.components.iter().map(|c| c.weight)) + uniform_weight;
                if (total - 1.0).abs() > 1e-9 {
                    return Err(Error::InvalidDistribution(format!(
                        "component weights plus uniform_weight must sum to 1, got {total}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Mixture density at a ground point; the uniform floor is spread over
    /// the grid's nominal area rectangle.
    fn density(&self, x: f64, y: f64, area: f64) -> f64 {
        let gaussians: f64 = self.components.iter().map(|c| c.density(x, y)).sum();
        match self.kind {
            DistributionKind::Uniform => 1.0 / area,
            DistributionKind::GaussianMixture => gaussians,
            DistributionKind::GaussianUniformMixture => gaussians + self.uniform_weight / area,
        }
    }
}

/// Per-cell target-presence probabilities over a shared grid.
///
/// The grid is immutable and shared; the probability vector is cloned per
/// trial so concurrent workers never alias mutable state.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMap {
    grid: Arc<GridSpec>,
    p: Vec<f64>,
}

impl ProbabilityMap {
    /// Discretize a distribution onto the grid: density at each cell center
    /// times the cell area, renormalized to sum to one.
    ///
    /// Deterministic for every defined kind; `_seed` is reserved for future
    /// stochastic map kinds.
    pub fn build(grid: Arc<GridSpec>, dist: &DistributionSpec, _seed: u64) -> Result<Self> {
        dist.validate()?;
        let m = grid.cell_count();
        let area = grid.area_width() * grid.area_height();
        let cell_area = grid.cell_width() * grid.cell_height();
        let mut p: Vec<f64> = (0..m)
            .map(|i| {
                let [x, y] = grid.waypoint(i);
                dist.density(x, y, area) * cell_area
            })
            .collect();
        let total = kahan_sum(p.iter().copied());
        if !total.is_finite() || total <= 0.0 {
            return Err(Error::InvalidDistribution(
                "distribution puts no mass on the grid".into(),
            ));
        }
        for v in &mut p {
            *v /= total;
        }
        Ok(Self { grid, p })
    }

    /// Map with explicit per-cell probabilities (must already be normalized).
    pub fn from_probs(grid: Arc<GridSpec>, p: Vec<f64>) -> Result<Self> {
        if p.len() != grid.cell_count() {
            return Err(Error::InvalidProbability(format!(
                "expected {} cells, got {}",
                grid.cell_count(),
                p.len()
            )));
        }
        if p.iter().any(|&v| !v.is_finite() || !(0.0..=1.0).contains(&v)) {
            return Err(Error::InvalidProbability(
                "probabilities must lie in [0, 1]".into(),
            ));
        }
        let total = kahan_sum(p.iter().copied());
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidProbability(format!(
                "probabilities must sum to 1, got {total}"
            )));
        }
        Ok(Self { grid, p })
    }

    pub fn uniform(grid: Arc<GridSpec>) -> Self {
        let m = grid.cell_count();
        let p = vec![1.0 / m as f64; m];
        Self { grid, p }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn grid_arc(&self) -> &Arc<GridSpec> {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn prob(&self, cell: usize) -> f64 {
        self.p[cell]
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    pub(crate) fn probs_mut(&mut self) -> &mut [f64] {
        &mut self.p
    }

    /// Compensated sum of all cell probabilities.
    pub fn total(&self) -> f64 {
        kahan_sum(self.p.iter().copied())
    }

    /// Index of the most probable cell (lowest index on ties).
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &v) in self.p.iter().enumerate() {
            if v > self.p[best] {
                best = i;
            }
        }
        best
    }

    /// Draw a cell index with probability proportional to its mass
    /// (inverse-CDF walk over the cell vector).
    pub fn sample_target<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut last_massive = 0;
        for (i, &v) in self.p.iter().enumerate() {
            if v > 0.0 {
                last_massive = i;
            }
            acc += v;
            if u < acc {
                return i;
            }
        }
        // Rounding left a sliver of the unit interval uncovered; attribute
        // it to the last cell that carries mass.
        last_massive
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid(rows: usize, cols: usize) -> Arc<GridSpec> {
        Arc::new(GridSpec::with_cell_grid(cols as f64 * 10.0, rows as f64 * 10.0, rows, cols).unwrap())
    }

    fn gaussian(weight: f64, mean: [f64; 2], std: f64) -> GaussianComponent {
        GaussianComponent {
            weight,
            mean,
            std: [std, std],
        }
    }

    #[test]
    fn uniform_map_splits_mass_evenly() {
        let map = ProbabilityMap::build(grid(2, 2), &DistributionSpec::uniform(), 0).unwrap();
        assert_eq!(map.probs(), &[0.25, 0.25, 0.25, 0.25]);
    }

    #[test]
    fn narrow_gaussian_peaks_at_its_cell() {
        let g = grid(4, 4);
        let spec = DistributionSpec {
            kind: DistributionKind::GaussianMixture,
            components: vec![gaussian(1.0, g.waypoint(10), 2.0)],
            uniform_weight: 0.0,
        };
        let map = ProbabilityMap::build(g, &spec, 0).unwrap();
        assert_eq!(map.argmax(), 10);
    }

    #[test]
    fn symmetric_bimodal_mixture_balances_its_peaks() {
        let g = grid(4, 4);
        let spec = DistributionSpec {
            kind: DistributionKind::GaussianMixture,
            components: vec![
                gaussian(0.5, g.waypoint(5), 8.0),
                gaussian(0.5, g.waypoint(10), 8.0),
            ],
            uniform_weight: 0.0,
        };
        let map = ProbabilityMap::build(g, &spec, 0).unwrap();
        assert!((map.prob(5) - map.prob(10)).abs() < 1e-9);
        assert!((map.total() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn gaussian_uniform_mixture_keeps_a_floor_everywhere() {
        let g = grid(6, 6);
        let spec = DistributionSpec {
            kind: DistributionKind::GaussianUniformMixture,
            components: vec![gaussian(0.7, g.waypoint(14), 5.0)],
            uniform_weight: 0.3,
        };
        let map = ProbabilityMap::build(g, &spec, 0).unwrap();
        assert!(map.probs().iter().all(|&p| p > 0.0));
        assert!((map.total() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn mixture_validation_rejects_bad_specs() {
        let empty = DistributionSpec {
            kind: DistributionKind::GaussianMixture,
            components: vec![],
            uniform_weight: 0.0,
        };
        assert!(empty.validate().is_err());

        let wrong_sum = DistributionSpec {
            kind: DistributionKind::GaussianMixture,
            components: vec![gaussian(0.6, [0.0, 0.0], 1.0)],
            uniform_weight: 0.0,
        };
        assert!(wrong_sum.validate().is_err());

        let bad_std = DistributionSpec {
            kind: DistributionKind::GaussianMixture,
            components: vec![GaussianComponent {
                weight: 1.0,
                mean: [0.0, 0.0],
                std: [1.0, 0.0],
            }],
            uniform_weight: 0.0,
        };
        assert!(bad_std.validate().is_err());
    }

    #[test]
    fn from_probs_checks_shape_and_mass() {
        let g = grid(2, 2);
        assert!(ProbabilityMap::from_probs(g.clone(), vec![0.5, 0.5]).is_err());
        assert!(ProbabilityMap::from_probs(g.clone(), vec![0.5, 0.5, 0.25, 0.25]).is_err());
        assert!(ProbabilityMap::from_probs(g, vec![0.1, 0.2, 0.3, 0.4]).is_ok());
    }

    #[test]
    fn point_mass_always_sampled() {
        let map = ProbabilityMap::from_probs(grid(1, 3), vec![1.0, 0.0, 0.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            assert_eq!(map.sample_target(&mut rng), 0);
        }
    }

    #[test]
    fn sample_frequencies_track_the_map() {
        let map = ProbabilityMap::from_probs(grid(1, 2), vec![0.7, 0.3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 100_000;
        let hits = (0..n).filter(|_| map.sample_target(&mut rng) == 0).count();
        let freq = hits as f64 / n as f64;
        assert!((freq - 0.7).abs() < 0.01, "freq = {freq}");
    }

    #[test]
    fn sample_frequencies_pass_chi_square_on_uniform() {
        let g = grid(4, 4);
        let map = ProbabilityMap::uniform(g);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let n = 100_000usize;
        let mut counts = [0usize; 16];
        for _ in 0..n {
            counts[map.sample_target(&mut rng)] += 1;
        }
        let expected = n as f64 / 16.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        // 15 degrees of freedom, alpha = 0.01.
        assert!(chi2 < 30.578, "chi2 = {chi2}");
    }

    proptest! {
        #[test]
        fn built_maps_are_normalized(
            rows in 1usize..6,
            cols in 1usize..6,
            weights in prop::collection::vec(0.05f64..1.0, 1..4),
            uniform_share in 0.0f64..0.9,
        ) {
            let g = grid(rows, cols);
            let total: f64 = weights.iter().sum();
            let scale = (1.0 - uniform_share) / total;
            let components: Vec<GaussianComponent> = weights
                .iter()
                .enumerate()
                .map(|(i, &w)| gaussian(
                    w * scale,
                    [5.0 + 7.0 * i as f64, 5.0 + 3.0 * i as f64],
                    4.0 + i as f64,
                ))
                .collect();
            let spec = DistributionSpec {
                kind: DistributionKind::GaussianUniformMixture,
                components,
                uniform_weight: uniform_share,
            };
            let map = ProbabilityMap::build(g, &spec, 0).unwrap();
            prop_assert!((map.total() - 1.0).abs() < 1e-9);
            prop_assert!(map.probs().iter().all(|&p| (0.0..=1.0).contains(&p)));
        }
    }
}
