//! Fitness normalization, swap hypermutation and Hamming affinity.

use alloc::vec::Vec;

use rand::Rng;

use crate::decoder::Antibody;
use crate::Time;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OperatorError {
    #[error("cannot normalize an empty set of makespans")]
    Empty,
    #[error("antibody lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
}

/// Min-max normalization `(m - min) / (max - min)`; all zeros when every
/// makespan is equal. The best (smallest) makespan maps to 0.
pub fn fitness_normalize(makespans: &[Time]) -> Result<Vec<f64>, OperatorError> {
    let (min, max) = makespans
        .iter()
        .fold(None, |acc: Option<(f64, f64)>, &m| {
            Some(acc.map_or((m, m), |(lo, hi)| (lo.min(m), hi.max(m))))
        })
        .ok_or(OperatorError::Empty)?;
    let spread = max - min;
    Ok(makespans
        .iter()
        .map(|&m| {
            if spread > 0.0 {
                (m - min) / spread
            } else {
                0.0
            }
        })
        .collect())
}

/// Exchanges the values of cells `i` and `j`.
pub fn mutate_swap_at(a: &Antibody, i: usize, j: usize) -> Antibody {
    let mut out = a.clone();
    out.cells_mut().swap(i, j);
    out
}

/// Swaps the values of two distinct, uniformly chosen cells. Antibodies
/// shorter than two cells come back unchanged.
pub fn mutate_swap<R: Rng + ?Sized>(a: &Antibody, rng: &mut R) -> Antibody {
    let len = a.len();
    if len < 2 {
        return a.clone();
    }
    let i = rng.gen_range(0..len);
    let mut j = rng.gen_range(0..len - 1);
    if j >= i {
        j += 1;
    }
    mutate_swap_at(a, i, j)
}

/// Number of cells in which `a` and `b` differ.
pub fn hamming_distance(a: &Antibody, b: &Antibody) -> Result<usize, OperatorError> {
    if a.len() != b.len() {
        return Err(OperatorError::LengthMismatch(a.len(), b.len()));
    }
    Ok(a.cells()
        .iter()
        .zip(b.cells())
        .filter(|(x, y)| x != y)
        .count())
}

/// Hamming distance divided by the antibody length; 0 for empty antibodies.
pub fn affinity(a: &Antibody, b: &Antibody) -> Result<f64, OperatorError> {
    let d = hamming_distance(a, b)?;
    Ok(if a.is_empty() {
        0.0
    } else {
        d as f64 / a.len() as f64
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn normalize_examples() {
        let f = fitness_normalize(&[14.0, 15.0, 20.0]).unwrap();
        assert_eq!(f[0], 0.0);
        assert!((f[1] - 1.0 / 6.0).abs() < 1e-12);
        assert_eq!(f[2], 1.0);
        assert_eq!(fitness_normalize(&[7.0, 7.0, 7.0]).unwrap(), vec![0.0; 3]);
        assert_eq!(fitness_normalize(&[42.0]).unwrap(), vec![0.0]);
        assert_eq!(fitness_normalize(&[]), Err(OperatorError::Empty));
    }

    #[test]
    fn swap_examples() {
        let a = Antibody::new(vec![0, 1, 2]);
        assert_eq!(mutate_swap_at(&a, 0, 2), Antibody::new(vec![2, 1, 0]));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let flat = Antibody::uniform(4, 1);
        for _ in 0..10 {
            assert_eq!(mutate_swap(&flat, &mut rng), flat);
        }
        let one = Antibody::new(vec![3]);
        assert_eq!(mutate_swap(&one, &mut rng), one);
        assert_eq!(mutate_swap(&Antibody::new(vec![]), &mut rng).len(), 0);
    }

    #[test]
    fn swap_touches_two_distinct_cells() {
        let a = Antibody::new(vec![0, 1, 2, 3, 4, 5]);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            assert_eq!(hamming_distance(&a, &mutate_swap(&a, &mut rng)).unwrap(), 2);
        }
    }

    #[test]
    fn distance_examples() {
        let i = Antibody::new(vec![3, 2, 0, 2, 2, 1]);
        let j = Antibody::new(vec![3, 1, 0, 3, 3, 2]);
        assert_eq!(hamming_distance(&i, &j).unwrap(), 4);
        assert!((affinity(&i, &j).unwrap() - 4.0 / 6.0).abs() < 1e-12);
        assert_eq!(affinity(&i, &i).unwrap(), 0.0);
        let k = Antibody::new(vec![0, 0, 1, 0, 0, 0]);
        assert_eq!(affinity(&i, &k).unwrap(), 1.0);
        assert_eq!(
            hamming_distance(&i, &Antibody::new(vec![1])),
            Err(OperatorError::LengthMismatch(6, 1))
        );
    }
}
