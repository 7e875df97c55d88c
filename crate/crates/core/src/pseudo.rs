//! The two-qubit pseudo-Hermitian Hamiltonian `H(θ)`, its metric
//! `η = η₀ ⊗ η₀` with `η₀ = cosh θ·1 − sinh θ·σx`, and the metric inner
//! product and pseudo-unitarity predicates.
//!
//! Basis ordering is `|q_A q_B⟩` with `q_A` most significant, i.e. the order of
//! the Kronecker products in the Hamiltonian.

use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::linalg::{self, c, eig_general, kron, pauli, re, CMat, EigPair, Ket, C64, I};

/// Largest supported |θ|. cosh 5 ≈ 74 keeps the metric well conditioned.
pub const THETA_CAP: f64 = 5.0;

/// Right eigenvalues of `H(θ)` for every θ, in the order of the closed-form
/// eigenstates (`E₁ … E₄`).
pub const CLOSED_FORM_EIGENVALUES: [f64; 4] = [0.5, -0.5, 2.0, 0.0];

pub fn check_theta(theta: f64) -> Result<()> {
    if !theta.is_finite() || theta.abs() > THETA_CAP {
        return Err(Error::ThetaOutOfRange {
            theta,
            cap: THETA_CAP,
        });
    }
    Ok(())
}

/// θ together with everything derived from it.
#[derive(Clone, Debug)]
pub struct PseudoSystem {
    pub theta: f64,
    /// cosh θ
    pub a: f64,
    /// sinh θ
    pub b: f64,
    /// cosh θ + i√2 sinh θ
    pub c: C64,
    /// √2 cosh θ − i sinh θ
    pub d: C64,
    pub h: CMat,
    pub eta0: CMat,
    pub eta0_inv: CMat,
    pub eta: CMat,
    pub eta_inv: CMat,
    /// Numerical eigenpairs of `h`, descending by real part.
    pub eigs: Vec<EigPair>,
}

pub fn build_system(theta: f64) -> Result<PseudoSystem> {
    check_theta(theta)?;
    let (a, b) = (theta.cosh(), theta.sinh());
    let cc = c(a, SQRT_2 * b);
    let d = c(SQRT_2 * a, -b);
    let h = hamiltonian_from(a, b, cc, d);
    let eta0 = metric_qubit(theta);
    // (a1 - bσx)(a1 + bσx) = (a² - b²) 1 = 1
    let eta0_inv = &pauli::id().scale_real(a) + &pauli::x().scale_real(b);
    let eta = kron(&eta0, &eta0);
    let eta_inv = kron(&eta0_inv, &eta0_inv);
    let eigs = eig_general(&h)?;
    Ok(PseudoSystem {
        theta,
        a,
        b,
        c: cc,
        d,
        h,
        eta0,
        eta0_inv,
        eta,
        eta_inv,
        eigs,
    })
}

/// `H(θ) = ¼(aσz − ibσy)⊗(2·1 − √2σx − c*σy − d*σz) + ¼ 1⊗(2·1 − √2σx + cσy − dσz)`.
pub fn hamiltonian(theta: f64) -> CMat {
    let (a, b) = (theta.cosh(), theta.sinh());
    hamiltonian_from(a, b, c(a, SQRT_2 * b), c(SQRT_2 * a, -b))
}

fn hamiltonian_from(a: f64, b: f64, cc: C64, d: C64) -> CMat {
    let (id, x, y, z) = (pauli::id(), pauli::x(), pauli::y(), pauli::z());
    let left = &z.scale_real(a) - &y.scale(I * b);
    let right1 = &(&(&id.scale_real(2.0) - &x.scale_real(SQRT_2)) - &y.scale(cc.conj()))
        - &z.scale(d.conj());
    let right2 = &(&(&id.scale_real(2.0) - &x.scale_real(SQRT_2)) + &y.scale(cc)) - &z.scale(d);
    (&kron(&left, &right1) + &kron(&id, &right2)).scale_real(0.25)
}

/// `η₀ = cosh θ·1 − sinh θ·σx`.
pub fn metric_qubit(theta: f64) -> CMat {
    &pauli::id().scale_real(theta.cosh()) - &pauli::x().scale_real(theta.sinh())
}

impl PseudoSystem {
    pub fn eigenvalues(&self) -> Vec<C64> {
        self.eigs.iter().map(|p| p.value).collect()
    }

    /// `U(t) = exp(−iHt)`.
    pub fn evolution(&self, t: f64) -> Result<CMat> {
        linalg::expm(&self.h.scale(c(0.0, -t)))
    }

    /// `⟨u|η|v⟩` on the two-qubit space.
    pub fn eta_inner(&self, u: &Ket, v: &Ket) -> Result<C64> {
        u.inner(&self.eta.apply(v)?)
    }

    /// `⟨u|η₀|v⟩` on a single qubit.
    pub fn eta_inner_qubit(&self, u: &Ket, v: &Ket) -> Result<C64> {
        u.inner(&self.eta0.apply(v)?)
    }

    /// Rescales `v` to unit η-norm. η is positive definite, so this is
    /// defined for every nonzero `v`.
    pub fn eta_normalized(&self, v: &Ket) -> Result<Ket> {
        let n2 = self.eta_inner(v, v)?.re;
        if n2 <= 0.0 {
            return Err(Error::InvalidArgument("vector has zero eta-norm".into()));
        }
        Ok(v.scale(re(1.0 / n2.sqrt())))
    }

    /// `max |H† − ηHη⁻¹|` using the closed-form η⁻¹.
    pub fn pseudo_hermiticity_residual(&self) -> f64 {
        let rhs = &(&self.eta * &self.h) * &self.eta_inv;
        (&self.h.adjoint() - &rhs).max_abs()
    }

    /// Gram matrix `⟨E_i|η|E_j⟩` of the given vectors.
    pub fn eta_gram(&self, vs: &[Ket]) -> Result<Vec<Vec<C64>>> {
        vs.iter()
            .map(|u| vs.iter().map(|v| self.eta_inner(u, v)).collect())
            .collect()
    }
}

/// True iff `max |h† − η h η⁻¹| <= tol`. η⁻¹ is computed by elimination;
/// singular η is an error.
pub fn is_pseudo_hermitian(h: &CMat, eta: &CMat, tol: f64) -> Result<bool> {
    let eta_inv = eta.inverse()?;
    let rhs = eta.matmul(h)?.matmul(&eta_inv)?;
    Ok(h.adjoint().max_abs_diff(&rhs)? <= tol)
}

/// `max |u†ηu − η|`.
pub fn pseudo_unitarity_residual(u: &CMat, eta: &CMat) -> Result<f64> {
    let lhs = u.adjoint().matmul(eta)?.matmul(u)?;
    lhs.max_abs_diff(eta)
}

pub fn is_pseudo_unitary(u: &CMat, eta: &CMat, tol: f64) -> Result<bool> {
    Ok(pseudo_unitarity_residual(u, eta)? <= tol)
}

/// Exchanges the two qubits of a two-qubit ket (`|q_A q_B⟩ → |q_B q_A⟩`).
pub fn swap_qubits(v: &Ket) -> Result<Ket> {
    if v.dim() != 4 {
        return Err(Error::KetDimension(v.dim()));
    }
    Ket::new(vec![v[0], v[2], v[1], v[3]])
}

/// The closed-form eigenstates `E₁ … E₄` in their uncorrected form.
///
/// These are NOT eigenvectors of [`hamiltonian`]: they are written in the
/// reversed qubit order, and the second components of `E₁`/`E₂` are missing a
/// factor `i` on `b`. Use [`closed_form_eigenstates`] for the corrected set.
pub fn raw_eigenstates(theta: f64) -> [Ket; 4] {
    let (a, b) = (theta.cosh(), theta.sinh());
    let s = SQRT_2;
    let k12 = 1.0 / s;
    let e1 = [
        c(a - 1.0, -b),
        -I * (1.0 + a + b),
        I * (1.0 - a) + b,
        c(a + 1.0, -b),
    ];
    let e2 = [
        c(a - 1.0, b),
        I * (1.0 + a + b),
        I * (a - 1.0) + b,
        c(a + 1.0, b),
    ];
    let (e1, e2) = (e1.map(|z| z * k12), e2.map(|z| z * k12));
    let e3 = e34(a, b, 1.0 - s, 4.0 - 2.0 * s);
    let e4 = e34(a, b, 1.0 + s, 4.0 + 2.0 * s);
    [e1, e2, e3, e4].map(|v| Ket::new(v.to_vec()).expect("finite closed form"))
}

fn e34(a: f64, b: f64, r: f64, denom: f64) -> [C64; 4] {
    [
        r * (a + 1.0) + b,
        a + r * b - 1.0,
        a + r * b + 1.0,
        r * (a - 1.0) + b,
    ]
    .map(|x| re(x / denom))
}

/// Closed-form right eigenstates `E₁ … E₄` (eigenvalues ½, −½, 2, 0) with the
/// same prefactors as [`raw_eigenstates`], expressed in this crate's
/// `|q_A q_B⟩` ordering.
///
/// With these prefactors `⟨E_i|η|E_j⟩ = diag(4, 4, 2+√2, 2−√2)`: the set is
/// η-orthogonal but not η-normalized.
pub fn closed_form_eigenstates(sys: &PseudoSystem) -> [Ket; 4] {
    let (a, b) = (sys.a, sys.b);
    let k12 = 1.0 / SQRT_2;
    // reversed order: (a−ib−1, −i(1+a+ib), i(1−a)+b, a−ib+1)/√2
    let e1 = [
        c(a - 1.0, -b),
        -I * c(1.0 + a, b),
        I * (1.0 - a) + b,
        c(a + 1.0, -b),
    ]
    .map(|z| z * k12);
    let e2 = [
        c(a - 1.0, b),
        I * c(1.0 + a, -b),
        I * (a - 1.0) + b,
        c(a + 1.0, b),
    ]
    .map(|z| z * k12);
    let s = SQRT_2;
    let e3 = e34(a, b, 1.0 - s, 4.0 - 2.0 * s);
    let e4 = e34(a, b, 1.0 + s, 4.0 + 2.0 * s);
    [e1, e2, e3, e4].map(|v| {
        let k = Ket::new(v.to_vec()).expect("finite closed form");
        swap_qubits(&k).expect("two-qubit ket")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::collinearity;

    #[test]
    fn theta_zero_is_hermitian_with_trivial_metric() {
        let sys = build_system(0.0).unwrap();
        assert_eq!(sys.eta, CMat::identity(4));
        assert!(sys.h.is_hermitian(1e-15));
    }

    #[test]
    fn metric_inverse_is_exact() {
        for theta in [-5.0, -1.0, 0.3, 2.0, 5.0] {
            let sys = build_system(theta).unwrap();
            let prod = &sys.eta * &sys.eta_inv;
            // entries of η and η⁻¹ are O(cosh²θ)
            let tol = 1e-15 * sys.a.powi(4);
            assert!(
                prod.max_abs_diff(&CMat::identity(4)).unwrap() < tol,
                "θ={theta}"
            );
            assert!((sys.a * sys.a - sys.b * sys.b - 1.0).abs() < 1e-12 * sys.a * sys.a);
        }
    }

    #[test]
    fn out_of_range_theta() {
        assert!(matches!(
            build_system(5.5),
            Err(Error::ThetaOutOfRange { .. })
        ));
        assert!(matches!(
            build_system(f64::NAN),
            Err(Error::ThetaOutOfRange { .. })
        ));
        assert!(build_system(-5.0).is_ok());
    }

    #[test]
    fn h00_matches_scalar_expansion() {
        // (aσz − ibσy)[0,0] = a, (2 − d*) and (2 − d) are the [0,0] entries of
        // the right-hand factors.
        let theta = 1.0_f64;
        let (a, b) = (theta.cosh(), theta.sinh());
        let d = c(SQRT_2 * a, -b);
        let expected = (re(a) * (re(2.0) - d.conj()) + (re(2.0) - d)) * 0.25;
        let sys = build_system(theta).unwrap();
        assert!((sys.h[(0, 0)] - expected).norm() < 1e-15);
    }

    #[test]
    fn raw_e1_direction_at_theta_zero() {
        let e1 = &raw_eigenstates(0.0)[0];
        let dir = Ket::new(vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((collinearity(e1, &dir).unwrap() - 1.0).abs() < 1e-15);
        // In the crate ordering the same vector is |q_A q_B⟩ = (0, 0, −i, 1).
        let sys = build_system(0.0).unwrap();
        let ours = &closed_form_eigenstates(&sys)[0];
        let swapped = swap_qubits(&dir).unwrap();
        assert!((collinearity(ours, &swapped).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn raw_eigenstates_fail_in_crate_ordering() {
        let sys = build_system(0.8).unwrap();
        let raw = raw_eigenstates(0.8);
        let hv = sys.h.apply(&raw[2]).unwrap();
        assert!(hv.max_abs_diff(&raw[2].scale(re(2.0))) > 1e-3);
    }

    #[test]
    fn corrected_e3_is_eigenvector() {
        let sys = build_system(0.8).unwrap();
        let e3 = &closed_form_eigenstates(&sys)[2];
        let hv = sys.h.apply(e3).unwrap();
        assert!(hv.max_abs_diff(&e3.scale(re(2.0))) <= 1e-9 * e3.norm());
    }

    #[test]
    fn eta_inner_reduces_to_euclidean_at_zero() {
        let sys = build_system(0.0).unwrap();
        let u = Ket::new(vec![c(1.0, 2.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.5, 0.5)]).unwrap();
        let v = Ket::new(vec![c(0.0, 1.0), c(1.0, 1.0), c(2.0, 0.0), c(0.0, -0.5)]).unwrap();
        assert!((sys.eta_inner(&u, &v).unwrap() - u.inner(&v).unwrap()).norm() < 1e-15);
        assert!(sys.eta_inner(&u, &Ket::basis(2, 0).unwrap()).is_err());
    }

    #[test]
    fn pseudo_hermitian_predicates() {
        let sys = build_system(1.0).unwrap();
        assert!(is_pseudo_hermitian(&sys.h, &sys.eta, 1e-9).unwrap());
        assert!(!is_pseudo_hermitian(&sys.h, &CMat::identity(4), 1e-9).unwrap());
        let herm = CMat::from_rows(&[[c(1.0, 0.0), c(2.0, -1.0)], [c(2.0, 1.0), c(-3.0, 0.0)]]);
        assert!(is_pseudo_hermitian(&herm, &CMat::identity(2), 1e-12).unwrap());
        let singular = CMat::from_real_rows(&[[1.0, 1.0], [1.0, 1.0]]);
        assert_eq!(
            is_pseudo_hermitian(&herm, &singular, 1e-9),
            Err(Error::Singular)
        );
    }

    #[test]
    fn pseudo_unitary_predicates() {
        let sys = build_system(1.0).unwrap();
        assert!(is_pseudo_unitary(&CMat::identity(4), &sys.eta, 1e-12).unwrap());
        let u = sys.evolution(1.0).unwrap();
        assert!(is_pseudo_unitary(&u, &sys.eta, 1e-9).unwrap());
        assert!(!is_pseudo_unitary(&u, &CMat::identity(4), 1e-9).unwrap());
    }
}
