//! Unitary dilation of a 4×4 operator onto system ⊗ ancilla, and the
//! post-selection that recovers it.
//!
//! With `op = U Σ V†`, the normalized operator is `Ũ = op / λ_max` when
//! `λ_max > 1` (otherwise `Ũ = op`) and the complement is `𝒱 = U Σ' V†` with
//! `Σ' = sqrt(1 − Σ̃²)`. Then
//!
//! ```text
//! U_tot = Ũ⊗|0⟩⟨0| + 𝒱⊗|1⟩⟨0| − 𝒱⊗|0⟩⟨1| + Ũ⊗|1⟩⟨1|
//! ```
//!
//! is unitary. The ancilla is the last tensor factor: the 8-dimensional basis
//! index is `2 * system_index + ancilla`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{kron, svd, CMat, Ket, ONE, ZERO};
use crate::par::{count_trials, Exec};

use rand::Rng;

/// `λ_max` within this distance of 1 takes the unscaled branch.
pub const BRANCH_TOL: f64 = 1e-12;
/// Branch probabilities below this leave the branch state undefined.
pub const ZERO_BRANCH: f64 = 1e-14;
/// Input states must be normalized to this tolerance.
pub const NORM_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `λ_max > 1`: the operator was divided by `λ_max`.
    Scaled,
    Unscaled,
}

#[derive(Clone, Debug)]
pub struct DilationResult {
    pub u_tilde: CMat,
    pub v_comp: CMat,
    pub u_tot: CMat,
    pub lambda_max: f64,
    /// Singular values of the input operator, descending.
    pub singulars: Vec<f64>,
    pub branch: Branch,
}

/// Residuals of the four block identities, in order:
/// `ŨŨ† + 𝒱𝒱† − 1`, `Ũ†Ũ + 𝒱†𝒱 − 1`, `Ũ𝒱† − 𝒱Ũ†`, `𝒱†Ũ − Ũ†𝒱`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BlockResiduals {
    pub left_completeness: f64,
    pub right_completeness: f64,
    pub left_commutation: f64,
    pub right_commutation: f64,
}

impl BlockResiduals {
    pub fn max(&self) -> f64 {
        self.left_completeness
            .max(self.right_completeness)
            .max(self.left_commutation)
            .max(self.right_commutation)
    }
}

pub fn dilate(op: &CMat) -> Result<DilationResult> {
    if op.shape() != (4, 4) {
        return Err(Error::DimensionMismatch {
            op: "dilate",
            left: op.shape(),
            right: (4, 4),
        });
    }
    let dec = svd(op)?;
    let lambda_max = dec.max_singular();
    let (branch, u_tilde, norm) = if lambda_max > 1.0 + BRANCH_TOL {
        (Branch::Scaled, op.scale_real(1.0 / lambda_max), lambda_max)
    } else {
        (Branch::Unscaled, op.clone(), 1.0)
    };
    let complement: Vec<f64> = dec
        .singulars
        .iter()
        .map(|&s| {
            let r = s / norm;
            (1.0 - r * r).max(0.0).sqrt()
        })
        .collect();
    let v_comp = dec.reconstruct_with(&complement);

    let p00 = CMat::from_rows(&[[ONE, ZERO], [ZERO, ZERO]]);
    let p11 = CMat::from_rows(&[[ZERO, ZERO], [ZERO, ONE]]);
    let p10 = CMat::from_rows(&[[ZERO, ZERO], [ONE, ZERO]]);
    let p01 = CMat::from_rows(&[[ZERO, ONE], [ZERO, ZERO]]);
    let u_tot = &(&(&kron(&u_tilde, &p00) + &kron(&v_comp, &p10)) - &kron(&v_comp, &p01))
        + &kron(&u_tilde, &p11);

    Ok(DilationResult {
        u_tilde,
        v_comp,
        u_tot,
        lambda_max,
        singulars: dec.singulars,
        branch,
    })
}

impl DilationResult {
    /// `max |U_tot† U_tot − 1|`.
    pub fn unitarity_residual(&self) -> f64 {
        self.u_tot.unitarity_residual()
    }

    pub fn block_residuals(&self) -> BlockResiduals {
        let (u, v) = (&self.u_tilde, &self.v_comp);
        let (ud, vd) = (u.adjoint(), v.adjoint());
        let id = CMat::identity(4);
        let res = |m: CMat| m.max_abs();
        BlockResiduals {
            left_completeness: res(&(&(u * &ud) + &(v * &vd)) - &id),
            right_completeness: res(&(&(&ud * u) + &(&vd * v)) - &id),
            left_commutation: res(&(u * &vd) - &(v * &ud)),
            right_commutation: res(&(&vd * u) - &(&ud * v)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Ancilla {
    Keep0,
    Keep1,
}

#[derive(Clone, Debug)]
pub struct PostSelectOutcome {
    /// True for the `|0⟩` (desired) branch.
    pub success: bool,
    /// Normalized system state in the selected branch.
    pub out_state: Ket,
    pub probability: f64,
}

fn check_input(psi: &Ket) -> Result<()> {
    if psi.dim() != 4 {
        return Err(Error::KetDimension(psi.dim()));
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

/// Runs `U_tot` on `|ψ⟩⊗|0⟩` and projects the ancilla onto `outcome`.
pub fn post_select(d: &DilationResult, psi: &Ket, outcome: Ancilla) -> Result<PostSelectOutcome> {
    check_input(psi)?;
    let joint = d.u_tot.apply(&psi.tensor(&Ket::basis(2, 0)?)?)?;
    let anc = match outcome {
        Ancilla::Keep0 => 0,
        Ancilla::Keep1 => 1,
    };
    let branch = Ket::new((0..4).map(|s| joint[2 * s + anc]).collect())?;
    let probability = branch.norm().powi(2);
    if probability < ZERO_BRANCH {
        return Err(Error::ZeroBranch { probability });
    }
    Ok(PostSelectOutcome {
        success: outcome == Ancilla::Keep0,
        out_state: branch.normalized()?,
        probability,
    })
}

/// `N₁ = ⟨ψ|Ũ†Ũ|ψ⟩`.
pub fn success_probability(d: &DilationResult, psi: &Ket) -> Result<f64> {
    check_input(psi)?;
    Ok(d.u_tilde.apply(psi)?.norm().powi(2))
}

/// `N₂ = ⟨ψ|𝒱†𝒱|ψ⟩`.
pub fn failure_probability(d: &DilationResult, psi: &Ket) -> Result<f64> {
    check_input(psi)?;
    Ok(d.v_comp.apply(psi)?.norm().powi(2))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SampleSummary {
    pub successes: u64,
    pub trials: u64,
    pub empirical_p: f64,
}

impl SampleSummary {
    pub fn new(successes: u64, trials: u64) -> Self {
        SampleSummary {
            successes,
            trials,
            empirical_p: successes as f64 / trials as f64,
        }
    }
}

/// Samples the ancilla measurement `trials` times; success with probability
/// `N₁` per trial.
pub fn sample_post_selection(
    d: &DilationResult,
    psi: &Ket,
    trials: u64,
    seed: u64,
) -> Result<SampleSummary> {
    sample_post_selection_with(d, psi, trials, seed, Exec::default())
}

pub fn sample_post_selection_with(
    d: &DilationResult,
    psi: &Ket,
    trials: u64,
    seed: u64,
    exec: Exec,
) -> Result<SampleSummary> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let p = success_probability(d, psi)?;
    let successes = count_trials(trials, seed, exec, |rng| rng.random::<f64>() < p);
    Ok(SampleSummary::new(successes, trials))
}
