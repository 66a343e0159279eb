//! Degree grids for sampled checks and seeded random relation generation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::relation::FuzzyRelation;

/// A sorted, deduplicated set of degrees in `[0,1]` that always contains 0 and 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    points: Vec<f64>,
}

impl Grid {
    /// `divisions + 1` equally spaced points.
    pub fn uniform(divisions: usize) -> Self {
        let n = divisions.max(1);
        Grid::from_points((0..=n).map(|k| k as f64 / n as f64))
    }

    /// Any degrees; 0 and 1 are always added, values outside `[0,1]` dropped.
    pub fn from_points(points: impl IntoIterator<Item = f64>) -> Self {
        let mut pts: Vec<f64> = points
            .into_iter()
            .filter(|p| (0.0..=1.0).contains(p))
            .chain([0.0, 0.5, 1.0])
            .collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        Grid { points: pts }
    }

    /// Uniform grid with extra breakpoints merged in.
    pub fn with_breakpoints(mut self, extra: &[f64]) -> Self {
        self.points.extend_from_slice(extra);
        Grid::from_points(self.points)
    }

    /// Step 1/1000 plus {0, 0.5, 1}.
    pub fn standard() -> Self {
        Grid::uniform(1000)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// At most `max` points, taken with a constant stride (0 and 1 kept).
    pub fn thinned(&self, max: usize) -> Grid {
        if self.points.len() <= max || max < 2 {
            return self.clone();
        }
        let stride = self.points.len().div_ceil(max);
        Grid::from_points(self.points.iter().copied().step_by(stride))
    }
}

/// How to draw random relations for sampled checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSpec {
    pub count: usize,
    pub size: usize,
    pub seed: u64,
    /// Quantise degrees to multiples of `1/levels`; `None` draws uniform reals.
    pub levels: Option<usize>,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec {
            count: 50,
            size: 3,
            seed: 0x5eed,
            levels: Some(20),
        }
    }
}

impl SampleSpec {
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    pub fn relations(&self) -> Vec<FuzzyRelation> {
        let mut rng = self.rng();
        (0..self.count)
            .map(|_| random_relation(&mut rng, self.size, self.levels))
            .collect()
    }
}

pub fn random_degree(rng: &mut impl Rng, levels: Option<usize>) -> f64 {
    match levels {
        Some(n) => rng.gen_range(0..=n) as f64 / n as f64,
        None => rng.gen::<f64>(),
    }
}

pub fn random_relation(rng: &mut impl Rng, size: usize, levels: Option<usize>) -> FuzzyRelation {
    let degrees = (0..size * size).map(|_| random_degree(rng, levels)).collect();
    FuzzyRelation::with_default_labels(size, degrees).expect("sampled degrees lie in [0,1]")
}
