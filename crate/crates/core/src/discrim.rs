//! Minimum-error discrimination of two pure states, and its improvement when
//! the cloning machine supplies N copies.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{kron, CMat, Ket, C64};
use crate::machines::{blank_state, cloning_operator, state_pair};
use crate::par::{count_trials, Exec};
use crate::pseudo::check_theta;

/// Largest copy count simulated in the full 2^N-dimensional space.
pub const MAX_EXPLICIT_COPIES: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiscrimSpec {
    pub p1: f64,
    pub p2: f64,
    /// `|⟨ψ₁|ψ₂⟩|` for a single copy.
    pub overlap: f64,
    pub copies: u32,
}

impl DiscrimSpec {
    pub fn new(p1: f64, overlap: f64, copies: u32) -> Result<Self> {
        if !(0.0..=1.0).contains(&p1) {
            return Err(Error::InvalidArgument(format!(
                "prior p1 = {p1} outside [0, 1]"
            )));
        }
        if !(0.0..=1.0).contains(&overlap) {
            return Err(Error::InvalidArgument(format!(
                "overlap {overlap} outside [0, 1]"
            )));
        }
        if copies == 0 {
            return Err(Error::InvalidArgument("copies must be at least 1".into()));
        }
        Ok(DiscrimSpec {
            p1,
            p2: 1.0 - p1,
            overlap,
            copies,
        })
    }
}

/// Helstrom bound `(1 − sqrt(1 − 4 p₁ p₂ s²)) / 2` with `s` the overlap of the
/// `copies`-fold product states.
pub fn helstrom_error(spec: &DiscrimSpec) -> f64 {
    let s2 = spec.overlap.powi(2 * spec.copies as i32);
    let x = (4.0 * spec.p1 * spec.p2 * s2).clamp(0.0, 1.0);
    // (1 − √(1−x))/2 without cancellation for small x
    x / (2.0 * (1.0 + (1.0 - x).sqrt()))
}

/// Single-copy bound for the designated pair, overlap `|tanh θ|`.
pub fn helstrom_error_pair(theta: f64, p1: f64) -> Result<f64> {
    helstrom_error_ncopy(theta, p1, 1)
}

/// Bound for `|α₁⟩^⊗n` versus `|α₂⟩^⊗n`.
pub fn helstrom_error_ncopy(theta: f64, p1: f64, n: u32) -> Result<f64> {
    check_theta(theta)?;
    Ok(helstrom_error(&DiscrimSpec::new(
        p1,
        theta.tanh().abs(),
        n,
    )?))
}

/// `|αᵢ⟩^⊗n` produced by `n − 1` cloning steps, each appending `|+⟩` and
/// cloning the last qubit into it. Normalized after every step.
pub fn cloned_copies(theta: f64, which: usize, n: usize) -> Result<Ket> {
    if n == 0 || n > MAX_EXPLICIT_COPIES {
        return Err(Error::InvalidArgument(format!(
            "explicit copies limited to 1..={MAX_EXPLICIT_COPIES}, got {n}"
        )));
    }
    let pair = state_pair(theta)?;
    let clone = cloning_operator(theta)?;
    let plus = blank_state();
    let mut state = pair.get(which).clone();
    for k in 1..n {
        // identity on the first k − 1 qubits, machine on (qubit k, fresh blank)
        let op = if k == 1 {
            clone.op.clone()
        } else {
            kron(&CMat::identity(1 << (k - 1)), &clone.op)
        };
        state = op.apply(&state.tensor(&plus)?)?.normalized()?;
    }
    Ok(state)
}

/// Optimal two-outcome measurement restricted to the span of two pure states.
///
/// The states are written in an orthonormal basis of their span as
/// `s₁ = (1, 0)` and `s₂ = (g, r)`, with `g = ⟨ψ₁|ψ₂⟩`. The measurement
/// projects onto the positive eigenspace of `p₁ρ₁ − p₂ρ₂`.
#[derive(Clone, Copy, Debug)]
pub struct HelstromMeasurement {
    /// P(guess 1 | state 1), P(guess 1 | state 2)
    pub guess1_given: [f64; 2],
    pub p1: f64,
}

impl HelstromMeasurement {
    pub fn new(p1: f64, overlap: C64) -> Self {
        let p2 = 1.0 - p1;
        let g = overlap;
        let r = (1.0 - g.norm_sqr()).max(0.0).sqrt();
        // Γ = p₁ s₁s₁† − p₂ s₂s₂† = [[α, β], [β*, δ]]
        let alpha = p1 - p2 * g.norm_sqr();
        let beta = -g * (p2 * r);
        let delta = -p2 * r * r;
        let mean = 0.5 * (alpha + delta);
        let mu = mean + (0.25 * (alpha - delta).powi(2) + beta.norm_sqr()).sqrt();
        let guess1_given = if mu <= 0.0 {
            [0.0, 0.0]
        } else {
            // eigenvector for μ: pick the better-conditioned of two forms
            let (w0, w1) = {
                let a = (beta, C64::new(mu - alpha, 0.0));
                let b = (C64::new(mu - delta, 0.0), beta.conj());
                let na = a.0.norm_sqr() + a.1.norm_sqr();
                let nb = b.0.norm_sqr() + b.1.norm_sqr();
                if na >= nb {
                    (a.0 / na.sqrt(), a.1 / na.sqrt())
                } else {
                    (b.0 / nb.sqrt(), b.1 / nb.sqrt())
                }
            };
            let on1 = w0.norm_sqr();
            let on2 = (w0.conj() * g + w1.conj() * r).norm_sqr();
            [on1.min(1.0), on2.min(1.0)]
        };
        HelstromMeasurement { guess1_given, p1 }
    }

    /// Error probability of this measurement.
    pub fn error_probability(&self) -> f64 {
        self.p1 * (1.0 - self.guess1_given[0]) + (1.0 - self.p1) * self.guess1_given[1]
    }

    /// One round: draw the true label, then the measurement outcome.
    /// Returns true on a wrong guess.
    pub fn trial<R: Rng + ?Sized>(&self, rng: &mut R) -> bool {
        let first = rng.random::<f64>() < self.p1;
        let idx = if first { 0 } else { 1 };
        let guess_first = rng.random::<f64>() < self.guess1_given[idx];
        guess_first != first
    }
}

/// The measurement for the n-copy designated pair. For `n <= 3` the copies are
/// produced by the cloning machine and the overlap is read off the resulting
/// states; larger `n` uses the analytic overlap `tanh^n θ`.
pub fn ncopy_measurement(theta: f64, p1: f64, n: u32) -> Result<HelstromMeasurement> {
    check_theta(theta)?;
    DiscrimSpec::new(p1, theta.tanh().abs(), n)?;
    let overlap = if (n as usize) <= MAX_EXPLICIT_COPIES {
        let s1 = cloned_copies(theta, 0, n as usize)?;
        let s2 = cloned_copies(theta, 1, n as usize)?;
        s1.inner(&s2)?
    } else {
        C64::new(theta.tanh().powi(n as i32), 0.0)
    };
    Ok(HelstromMeasurement::new(p1, overlap))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiscrimSample {
    pub errors: u64,
    pub trials: u64,
    pub empirical_error: f64,
}

/// Monte Carlo estimate of the error rate of the optimal measurement on the
/// clone-amplified states. Deterministic for a given `(seed, trials)`.
pub fn simulate_discrimination(
    theta: f64,
    p1: f64,
    n: u32,
    trials: u64,
    seed: u64,
) -> Result<DiscrimSample> {
    simulate_discrimination_with(theta, p1, n, trials, seed, Exec::default())
}

pub fn simulate_discrimination_with(
    theta: f64,
    p1: f64,
    n: u32,
    trials: u64,
    seed: u64,
    exec: Exec,
) -> Result<DiscrimSample> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let m = ncopy_measurement(theta, p1, n)?;
    let errors = count_trials(trials, seed, exec, |rng| m.trial(rng));
    Ok(DiscrimSample {
        errors,
        trials,
        empirical_error: errors as f64 / trials as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthogonal_and_identical_limits() {
        assert_eq!(helstrom_error(&DiscrimSpec::new(0.5, 0.0, 1).unwrap()), 0.0);
        assert_eq!(helstrom_error(&DiscrimSpec::new(0.5, 1.0, 1).unwrap()), 0.5);
    }

    #[test]
    fn pair_bound_at_theta_one() {
        // (1 − sech 1)/2, 40-digit reference
        let p = helstrom_error_pair(1.0, 0.5).unwrap();
        assert!((p - 0.175_972_863_168_057_3).abs() < 1e-15);
        assert_eq!(helstrom_error_pair(0.0, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn pair_bound_is_definitional() {
        let spec = DiscrimSpec::new(0.3, 0.7_f64.tanh(), 1).unwrap();
        assert_eq!(
            helstrom_error_pair(0.7, 0.3).unwrap(),
            helstrom_error(&spec)
        );
        assert_eq!(
            helstrom_error_ncopy(0.7, 0.3, 1).unwrap(),
            helstrom_error_pair(0.7, 0.3).unwrap()
        );
    }

    #[test]
    fn invalid_specs() {
        assert!(DiscrimSpec::new(1.5, 0.2, 1).is_err());
        assert!(DiscrimSpec::new(0.5, -0.1, 1).is_err());
        assert!(DiscrimSpec::new(0.5, 0.2, 0).is_err());
        assert!(helstrom_error_ncopy(6.0, 0.5, 2).is_err());
    }

    #[test]
    fn measurement_attains_bound() {
        for (p1, ov) in [(0.5, 0.3), (0.2, 0.9), (0.9, 0.5), (0.5, 0.0)] {
            let m = HelstromMeasurement::new(p1, C64::new(ov, 0.0));
            let bound = helstrom_error(&DiscrimSpec::new(p1, ov, 1).unwrap());
            assert!(
                (m.error_probability() - bound).abs() < 1e-14,
                "p1={p1} ov={ov}"
            );
        }
        // complex overlap phase does not matter
        let m = HelstromMeasurement::new(0.4, C64::from_polar(0.6, 1.1));
        let bound = helstrom_error(&DiscrimSpec::new(0.4, 0.6, 1).unwrap());
        assert!((m.error_probability() - bound).abs() < 1e-14);
    }

    #[test]
    fn explicit_copy_limit() {
        assert!(cloned_copies(1.0, 0, 4).is_err());
        assert_eq!(cloned_copies(1.0, 0, 3).unwrap().dim(), 8);
    }

    #[test]
    fn theta_zero_never_errs() {
        let s = simulate_discrimination(0.0, 0.5, 2, 20_000, 3).unwrap();
        assert_eq!(s.errors, 0);
    }
}
