use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::DatasetError;

/// Size of a low-resource subsample: `round_half_even(n * ratio)`, at least 1
/// for a non-empty input.
pub fn low_resource_size(n: usize, ratio: f64) -> Result<usize, DatasetError> {
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(DatasetError::InvalidRatio(ratio));
    }
    if n == 0 {
        return Ok(0);
    }
    let k = (n as f64 * ratio).round_ties_even() as usize;
    Ok(k.clamp(1, n))
}

/// Uniform sample without replacement; survivors keep their original order.
pub fn sample_low_resource<T: Clone>(items: &[T], ratio: f64, seed: u64) -> Result<Vec<T>, DatasetError> {
    let k = low_resource_size(items.len(), ratio)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = rand::seq::index::sample(&mut rng, items.len(), k).into_vec();
    picked.sort_unstable();
    Ok(picked.into_iter().map(|i| items[i].clone()).collect())
}
