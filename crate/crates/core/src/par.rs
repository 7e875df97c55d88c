//! Data-parallel execution with a sequential fallback.
//!
//! Monte Carlo work is split into fixed-size chunks, each driven by its own
//! ChaCha stream derived from `(seed, chunk index)`, so results are
//! bit-identical whether chunks run on the rayon pool or in order on the
//! calling thread.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Trials per RNG stream.
pub const CHUNK: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Uses the rayon pool when the `parallel` feature is enabled, otherwise
    /// identical to `Sequential`.
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// SplitMix64 finalizer; derives independent seeds for labelled sub-runs.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs `trials` Bernoulli trials and counts the `true` outcomes.
pub fn count_trials<F>(trials: u64, seed: u64, exec: Exec, trial: F) -> u64
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    let chunks = trials.div_ceil(CHUNK);
    let run_chunk = |c: u64| -> u64 {
        let mut rng = chunk_rng(seed, c);
        let len = CHUNK.min(trials - c * CHUNK);
        (0..len).filter(|_| trial(&mut rng)).count() as u64
    };
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => (0..chunks).into_par_iter().map(run_chunk).sum(),
        _ => (0..chunks).map(run_chunk).sum(),
    }
}

/// `f(0), ..., f(n-1)` collected in index order.
pub fn map_indexed<T, F>(n: usize, exec: Exec, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => (0..n).into_par_iter().map(f).collect(),
        _ => (0..n).map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn modes_agree_bit_for_bit() {
        let trial = |rng: &mut ChaCha8Rng| rng.random::<f64>() < 0.3;
        let n = 3 * CHUNK + 17;
        let s = count_trials(n, 9, Exec::Sequential, trial);
        let p = count_trials(n, 9, Exec::Parallel, trial);
        assert_eq!(s, p);
        assert_ne!(s, count_trials(n, 10, Exec::Sequential, trial));
    }

    #[test]
    fn exact_trial_count() {
        assert_eq!(
            count_trials(CHUNK + 1, 1, Exec::default(), |_| true),
            CHUNK + 1
        );
        assert_eq!(count_trials(0, 1, Exec::default(), |_| true), 0);
    }

    #[test]
    fn map_preserves_order() {
        let v = map_indexed(100, Exec::Parallel, |i| i * i);
        assert_eq!(v, (0..100).map(|i| i * i).collect::<Vec<_>>());
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(42, 1), derive_seed(42, 2));
        assert_eq!(derive_seed(42, 1), derive_seed(42, 1));
    }
}
