//! Deleting and cloning machines built from `exp(∓iHτ)` at `τ = π/2`.
//!
//! The designated pair `|α₁⟩, |α₂⟩` has euclidean overlap `tanh θ` but is
//! orthogonal under `η₀`. The cloning machine maps `|αᵢ⟩|+⟩ → |αᵢ⟩|αᵢ⟩` and
//! the deleting machine maps `|αᵢ⟩|αᵢ⟩ → |αᵢ⟩|+⟩`, each up to a complex
//! factor. Any other nonorthogonal pair is handled by conjugating with a
//! qubit unitary (see [`fit_theta_and_frame`] and [`conjugated_machine`]).

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, SQRT_2};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, c, collinearity, kron, pauli, proportionality, CMat, Ket, C64, I};
use crate::pseudo::{check_theta, hamiltonian, THETA_CAP};

/// Interaction time of both machines.
pub const TAU: f64 = FRAC_PI_2;

/// Tolerance for accepting a frame rotation as unitary.
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MachineKind {
    Delete,
    Clone,
}

#[derive(Clone, Debug)]
pub struct StatePair {
    pub alpha1: Ket,
    pub alpha2: Ket,
    pub theta: f64,
}

impl StatePair {
    pub fn get(&self, which: usize) -> &Ket {
        match which {
            0 => &self.alpha1,
            _ => &self.alpha2,
        }
    }
}

/// `|α₁⟩ = (cosh θ/2, sinh θ/2)/√cosh θ`, `|α₂⟩ = (sinh θ/2, cosh θ/2)/√cosh θ`.
pub fn state_pair(theta: f64) -> Result<StatePair> {
    check_theta(theta)?;
    let k = 1.0 / theta.cosh().sqrt();
    let (ch, sh) = ((theta / 2.0).cosh() * k, (theta / 2.0).sinh() * k);
    Ok(StatePair {
        alpha1: Ket::from_real(&[ch, sh])?,
        alpha2: Ket::from_real(&[sh, ch])?,
        theta,
    })
}

/// `|+⟩ = (|0⟩ + |1⟩)/√2`.
pub fn blank_state() -> Ket {
    Ket::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).expect("fixed state")
}

#[derive(Clone, Debug)]
pub struct MachineOp {
    pub op: CMat,
    pub kind: MachineKind,
    pub theta: f64,
    pub tau: f64,
}

/// Outcome of running a machine on one input, compared with its target.
#[derive(Clone, Debug)]
pub struct MachineAction {
    pub input: Ket,
    pub output: Ket,
    pub target: Ket,
    pub collinearity: f64,
    /// `k` with `output ≈ k · target`.
    pub constant: C64,
}

impl MachineOp {
    pub fn apply(&self, v: &Ket) -> Result<Ket> {
        self.op.apply(v)
    }

    /// Runs the machine on the designated input built from `|αᵢ⟩`
    /// (`which` = 0 or 1).
    pub fn act_on_pair(&self, pair: &StatePair, which: usize) -> Result<MachineAction> {
        let alpha = pair.get(which);
        let plus = blank_state();
        let (input, target) = match self.kind {
            MachineKind::Delete => (alpha.tensor(alpha)?, alpha.tensor(&plus)?),
            MachineKind::Clone => (alpha.tensor(&plus)?, alpha.tensor(alpha)?),
        };
        let output = self.apply(&input)?;
        Ok(MachineAction {
            collinearity: collinearity(&output, &target)?,
            constant: proportionality(&output, &target)?,
            input,
            output,
            target,
        })
    }
}

/// Closed form of `exp(+iHπ/2)`:
/// `(1/2√2)(aσz − ibσy)⊗(−1 + σx + (a+b)(σz − iσy)) + (1/2√2) 1⊗(1 + σx + (a−b)(σz + iσy))`.
pub fn deleting_operator(theta: f64) -> Result<MachineOp> {
    check_theta(theta)?;
    Ok(MachineOp {
        op: machine_closed_form(theta, MachineKind::Delete),
        kind: MachineKind::Delete,
        theta,
        tau: TAU,
    })
}

/// Closed form of `exp(−iHπ/2)`:
/// `(1/2√2)(aσz − ibσy)⊗(−1 + σx + (a−b)(σz + iσy)) + (1/2√2) 1⊗(1 + σx + (a+b)(σz − iσy))`.
pub fn cloning_operator(theta: f64) -> Result<MachineOp> {
    check_theta(theta)?;
    Ok(MachineOp {
        op: machine_closed_form(theta, MachineKind::Clone),
        kind: MachineKind::Clone,
        theta,
        tau: TAU,
    })
}

// The two machines differ only in which term carries (a+b)(σz − iσy) and
// which carries (a−b)(σz + iσy).
fn machine_closed_form(theta: f64, kind: MachineKind) -> CMat {
    let (a, b) = (theta.cosh(), theta.sinh());
    let (id, x, y, z) = (pauli::id(), pauli::x(), pauli::y(), pauli::z());
    let zmy = (&z - &y.scale(I)).scale_real(a + b);
    let zpy = (&z + &y.scale(I)).scale_real(a - b);
    let (t1, t2) = match kind {
        MachineKind::Delete => (zmy, zpy),
        MachineKind::Clone => (zpy, zmy),
    };
    let left = &z.scale_real(a) - &y.scale(I * b);
    let r1 = &(&x - &id) + &t1;
    let r2 = &(&id + &x) + &t2;
    (&kron(&left, &r1) + &kron(&id, &r2)).scale_real(1.0 / (2.0 * SQRT_2))
}

/// `exp(−i·H_kind·π/2)` evaluated numerically, with `H_delete = −H` and
/// `H_clone = H`.
pub fn machine_from_generator(kind: MachineKind, theta: f64) -> Result<CMat> {
    check_theta(theta)?;
    let sign = match kind {
        MachineKind::Delete => 1.0,
        MachineKind::Clone => -1.0,
    };
    linalg::expm_series(&hamiltonian(theta).scale(c(0.0, sign * TAU)))
}

fn check_unitary(v: &CMat) -> Result<()> {
    if v.shape() != (2, 2) {
        return Err(Error::DimensionMismatch {
            op: "qubit frame",
            left: v.shape(),
            right: (2, 2),
        });
    }
    let residual = v.unitarity_residual();
    if residual > UNITARY_TOL {
        return Err(Error::NotUnitary { residual });
    }
    Ok(())
}

/// `(v†⊗v†) · machine · (v⊗v)`; pseudo-unitary w.r.t. `(v†⊗v†)η(v⊗v)`.
pub fn conjugated_machine(machine: &MachineOp, v: &CMat) -> Result<CMat> {
    check_unitary(v)?;
    let vv = kron(v, v);
    Ok(&(&vv.adjoint() * &machine.op) * &vv)
}

/// Finds θ ≥ 0 and a qubit unitary `v` with `v|ψ₁⟩ ∥ |α₁(θ)⟩` and
/// `v|ψ₂⟩ ∥ |α₂(θ)⟩`, so that `tanh θ = |⟨ψ₁|ψ₂⟩|`.
///
/// Orthogonal inputs give θ = 0. Inputs that coincide up to phase, or whose
/// overlap needs θ beyond the supported range, are rejected.
pub fn fit_theta_and_frame(psi1: &Ket, psi2: &Ket) -> Result<(f64, CMat)> {
    if psi1.dim() != 2 || psi2.dim() != 2 {
        return Err(Error::KetDimension(psi1.dim().max(psi2.dim())));
    }
    let f1 = psi1.normalized()?;
    let psi2 = psi2.normalized()?;
    let ov = f1.inner(&psi2)?;
    let r = ov.norm();
    if r >= 1.0 - 1e-12 {
        return Err(Error::IdenticalStates);
    }
    let theta = r.atanh();
    if theta > THETA_CAP {
        return Err(Error::ThetaOutOfRange {
            theta,
            cap: THETA_CAP,
        });
    }
    // gauge ψ₂ so that ⟨ψ₁|ψ₂⟩ = r ≥ 0
    let gauge = if r > 0.0 {
        (ov / r).conj()
    } else {
        c(1.0, 0.0)
    };
    let psi2 = psi2.scale(gauge);
    let f2 = orthonormal_complement(&f1, &psi2, r)?;

    let pair = state_pair(theta)?;
    let g1 = pair.alpha1.clone();
    let g2 = orthonormal_complement(&g1, &pair.alpha2, theta.tanh())?;

    let v = &CMat::outer(&g1, &f1) + &CMat::outer(&g2, &f2);
    Ok((theta, v))
}

/// Unit vector along `w − ⟨u|w⟩u` for unit `u`, where `⟨u|w⟩ = overlap` is
/// real.
fn orthonormal_complement(u: &Ket, w: &Ket, overlap: f64) -> Result<Ket> {
    w.add(&u.scale(c(-overlap, 0.0)))?.normalized()
}
