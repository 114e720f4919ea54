use crate::rng::MAX_MEMBERS;

/// Optimizer parameters. [`Default`] gives the reference settings:
/// 100 iterations, 400 antibodies, 50 clones each, selection rate 0.25,
/// affinity threshold 0.2, gap filling on, seed 0.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    /// Iteration count `K`.
    pub iterations: usize,
    /// Population size.
    pub population: usize,
    /// Clones per antibody and iteration.
    pub clones: usize,
    /// Fraction `B` of the population kept as elites by immune-remove.
    pub selection_rate: f64,
    /// Members closer than this affinity to an elite are removed.
    pub affinity_threshold: f64,
    /// Gap filling (single neighbourhood search) in the decoder.
    pub sns: bool,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            iterations: 100,
            population: 400,
            clones: 50,
            selection_rate: 0.25,
            affinity_threshold: 0.2,
            sns: true,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("iteration count must be at least 1")]
    Iterations,
    #[error("population size must be between 2 and {MAX_MEMBERS}, got {0}")]
    Population(usize),
    #[error("clone count must be at least 1")]
    Clones,
    #[error("selection rate must lie in (0, 1], got {0}")]
    SelectionRate(f64),
    #[error("affinity threshold must lie in [0, 1], got {0}")]
    Affinity(f64),
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.iterations < 1 {
            return Err(ConfigError::Iterations);
        }
        if self.population < 2 || self.population as u64 > MAX_MEMBERS {
            return Err(ConfigError::Population(self.population));
        }
        if self.clones < 1 {
            return Err(ConfigError::Clones);
        }
        if !(self.selection_rate > 0.0 && self.selection_rate <= 1.0) {
            return Err(ConfigError::SelectionRate(self.selection_rate));
        }
        if !(0.0..=1.0).contains(&self.affinity_threshold) {
            return Err(ConfigError::Affinity(self.affinity_threshold));
        }
        Ok(())
    }

    /// `⌈B · population⌉`, at least 1.
    pub fn elite_count(&self) -> usize {
        let exact = self.selection_rate * self.population as f64;
        let floor = exact as usize;
        // 0.1 * 30 must give 3, not 4
        let count = if exact - floor as f64 > 1e-9 {
            floor + 1
        } else {
            floor
        };
        count.clamp(1, self.population)
    }
}
