//! Fully connected heterogeneous cluster: processor count and the
//! communication rate (time units per data unit) between every pair.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PlatformError {
    #[error("processor count must be positive")]
    NoProcessors,
    #[error("processor index {index} out of range for {procs} processors")]
    IndexOutOfRange { index: usize, procs: usize },
    #[error("communication rate {i}<->{j} declared as both {a} and {b}")]
    Asymmetric { i: usize, j: usize, a: f64, b: f64 },
    #[error("communication rate {i}<->{j} is {rate}; rates must be finite and non-negative")]
    NegativeRate { i: usize, j: usize, rate: f64 },
    #[error("diagonal rate of processor {i} is {rate}; must be 0")]
    NonzeroDiagonal { i: usize, rate: f64 },
    #[error("rate matrix is {found}x{found}-shaped, expected {expected}x{expected}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("no communication rate for processors {i} and {j} and no uniform default")]
    MissingRate { i: usize, j: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Platform {
    procs: usize,
    /// Row-major `procs × procs`, symmetric, zero diagonal.
    comm: Vec<f64>,
}

fn check_rate(i: usize, j: usize, rate: f64) -> Result<(), PlatformError> {
    if rate.is_finite() && rate >= 0.0 {
        Ok(())
    } else {
        Err(PlatformError::NegativeRate { i, j, rate })
    }
}

impl Platform {
    /// Every distinct pair communicates at `rate`.
    pub fn uniform(procs: usize, rate: f64) -> Result<Self, PlatformError> {
        Platform::from_pairs(procs, Some(rate), &[])
    }

    /// Builds a platform from explicit `(i, j, rate)` pairs, each implying its
    /// mirror. Pairs not listed get `default`. Listing both orientations is
    /// allowed when the rates agree.
    pub fn from_pairs(
        procs: usize,
        default: Option<f64>,
        pairs: &[(usize, usize, f64)],
    ) -> Result<Self, PlatformError> {
        if procs == 0 {
            return Err(PlatformError::NoProcessors);
        }
        if let Some(rate) = default {
            check_rate(0, 1, rate)?;
        }
        let mut set: Vec<Option<f64>> = vec![None; procs * procs];
        for &(i, j, rate) in pairs {
            for index in [i, j] {
                if index >= procs {
                    return Err(PlatformError::IndexOutOfRange { index, procs });
                }
            }
            if i == j {
                if rate != 0.0 {
                    return Err(PlatformError::NonzeroDiagonal { i, rate });
                }
                continue;
            }
            check_rate(i, j, rate)?;
            match set[i * procs + j] {
                Some(prev) if prev != rate => {
                    return Err(PlatformError::Asymmetric {
                        i: i.min(j),
                        j: i.max(j),
                        a: prev,
                        b: rate,
                    })
                }
                _ => {
                    set[i * procs + j] = Some(rate);
                    set[j * procs + i] = Some(rate);
                }
            }
        }
        let mut comm = vec![0.0; procs * procs];
        for i in 0..procs {
            for j in 0..procs {
                if i == j {
                    continue;
                }
                comm[i * procs + j] = match (set[i * procs + j], default) {
                    (Some(r), _) | (None, Some(r)) => r,
                    (None, None) => return Err(PlatformError::MissingRate { i, j }),
                };
            }
        }
        Ok(Platform { procs, comm })
    }

    /// Full matrix form. Must be square, symmetric, with a zero diagonal.
    pub fn from_matrix(rows: &[Vec<f64>]) -> Result<Self, PlatformError> {
        let procs = rows.len();
        if procs == 0 {
            return Err(PlatformError::NoProcessors);
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != procs) {
            return Err(PlatformError::SizeMismatch {
                expected: procs,
                found: bad.len(),
            });
        }
        for (i, row) in rows.iter().enumerate() {
            if row[i] != 0.0 {
                return Err(PlatformError::NonzeroDiagonal { i, rate: row[i] });
            }
            for (j, &rate) in row.iter().enumerate() {
                check_rate(i, j, rate)?;
                if rate != rows[j][i] {
                    return Err(PlatformError::Asymmetric {
                        i: i.min(j),
                        j: i.max(j),
                        a: rate,
                        b: rows[j][i],
                    });
                }
            }
        }
        Ok(Platform {
            procs,
            comm: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn procs(&self) -> usize {
        self.procs
    }

    /// Rate between `i` and `j`; zero when `i == j`.
    pub fn processor_comm(&self, i: usize, j: usize) -> Result<f64, PlatformError> {
        for index in [i, j] {
            if index >= self.procs {
                return Err(PlatformError::IndexOutOfRange {
                    index,
                    procs: self.procs,
                });
            }
        }
        Ok(self.rate(i, j))
    }

    /// Unchecked form of [`Platform::processor_comm`] for hot loops.
    #[inline]
    pub fn rate(&self, i: usize, j: usize) -> f64 {
        self.comm[i * self.procs + j]
    }

    /// Mean rate over ordered pairs `i != j`; zero on a single processor.
    pub fn mean_rate(&self) -> f64 {
        if self.procs < 2 {
            return 0.0;
        }
        let pairs = (self.procs * (self.procs - 1)) as f64;
        self.comm.iter().sum::<f64>() / pairs
    }

    /// The common rate when every distinct pair shares one, else `None`.
    pub fn uniform_rate(&self) -> Option<f64> {
        let mut rates = (0..self.procs)
            .flat_map(|i| {
                (0..self.procs)
                    .filter(move |&j| j != i)
                    .map(move |j| (i, j))
            })
            .map(|(i, j)| self.rate(i, j));
        let first = rates.next().unwrap_or(0.0);
        rates.all(|r| r == first).then_some(first)
    }
}
