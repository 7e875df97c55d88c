#![allow(clippy::excessive_precision)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pseudo_unitary::dilation::{
    dilate, failure_probability, post_select, sample_post_selection_with, success_probability,
    Ancilla, Branch,
};
use pseudo_unitary::linalg::{collinearity, kron, random, CMat, Ket, C64};
use pseudo_unitary::machines::{
    blank_state, cloning_operator, conjugated_machine, deleting_operator, fit_theta_and_frame,
    state_pair, MachineKind, MachineOp,
};
use pseudo_unitary::par::Exec;
use pseudo_unitary::Error;

const GRID: [f64; 7] = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn machine(kind: MachineKind, theta: f64) -> MachineOp {
    match kind {
        MachineKind::Delete => deleting_operator(theta).unwrap(),
        MachineKind::Clone => cloning_operator(theta).unwrap(),
    }
}

#[test]
fn generalized_machines_under_random_frames() {
    let mut r = rng(2024);
    let plus = blank_state();
    for k in 0..20 {
        let theta = GRID[k % GRID.len()];
        let v = random::haar_unitary(2, &mut r);
        let vd = v.adjoint();
        let pair = state_pair(theta).unwrap();
        let blank = vd.apply(&plus).unwrap();
        let del = conjugated_machine(&machine(MachineKind::Delete, theta), &v).unwrap();
        let clo = conjugated_machine(&machine(MachineKind::Clone, theta), &v).unwrap();
        for which in 0..2 {
            let psi = vd.apply(pair.get(which)).unwrap();
            let doubled = psi.tensor(&psi).unwrap();
            let with_blank = psi.tensor(&blank).unwrap();
            let deleted = del.apply(&doubled).unwrap();
            let cloned = clo.apply(&with_blank).unwrap();
            assert!(
                collinearity(&deleted, &with_blank).unwrap() >= 1.0 - 1e-9,
                "frame {k}"
            );
            assert!(
                collinearity(&cloned, &doubled).unwrap() >= 1.0 - 1e-9,
                "frame {k}"
            );
        }
    }
}

#[test]
fn fitted_frames_delete_arbitrary_pairs() {
    let mut r = rng(99);
    for k in 0..20 {
        let psi1 = random::state(2, &mut r);
        let psi2 = random::state(2, &mut r);
        let (theta, v) = match fit_theta_and_frame(&psi1, &psi2) {
            Ok(fit) => fit,
            Err(Error::ThetaOutOfRange { .. }) => continue,
            Err(e) => panic!("pair {k}: {e}"),
        };
        let overlap = psi1.inner(&psi2).unwrap().norm();
        assert!((theta.tanh() - overlap).abs() <= 1e-12);
        assert!(v.unitarity_residual() <= 1e-12);
        let pair = state_pair(theta).unwrap();
        assert!(collinearity(&v.apply(&psi1).unwrap(), &pair.alpha1).unwrap() >= 1.0 - 1e-12);
        assert!(collinearity(&v.apply(&psi2).unwrap(), &pair.alpha2).unwrap() >= 1.0 - 1e-12);

        let del = conjugated_machine(&deleting_operator(theta).unwrap(), &v).unwrap();
        let blank = v.adjoint().apply(&blank_state()).unwrap();
        for psi in [&psi1, &psi2] {
            let out = del.apply(&psi.tensor(psi).unwrap()).unwrap();
            let target = psi.tensor(&blank).unwrap();
            assert!(
                collinearity(&out, &target).unwrap() >= 1.0 - 1e-9,
                "pair {k}"
            );
        }
    }
}

#[test]
fn superpositions_are_not_cloned() {
    // linearity: the designated pair clones, their superposition does not
    let theta = 1.0;
    let pair = state_pair(theta).unwrap();
    let chi = pair
        .alpha1
        .add(&pair.alpha2.scale(C64::new(0.0, 1.0)))
        .unwrap()
        .normalized()
        .unwrap();
    let clo = cloning_operator(theta).unwrap();
    let out = clo.apply(&chi.tensor(&blank_state()).unwrap()).unwrap();
    let target = chi.tensor(&chi).unwrap();
    assert!(collinearity(&out, &target).unwrap() < 1.0 - 1e-3);

    let del = deleting_operator(theta).unwrap();
    let out = del.apply(&target).unwrap();
    assert!(collinearity(&out, &chi.tensor(&blank_state()).unwrap()).unwrap() < 1.0 - 1e-3);
}

#[test]
fn conjugation_rejects_non_unitary_frames() {
    let clo = cloning_operator(0.5).unwrap();
    let bad = CMat::diag_real(&[1.0, 2.0]);
    assert!(matches!(
        conjugated_machine(&clo, &bad),
        Err(Error::NotUnitary { .. })
    ));
    assert!(matches!(
        conjugated_machine(&clo, &CMat::identity(4)),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn dilation_of_gaussian_matrices() {
    let mut r = rng(7);
    for k in 0..50 {
        let a = random::gaussian_matrix(4, &mut r);
        let d = dilate(&a).unwrap();
        assert!(d.unitarity_residual() <= 1e-9, "matrix {k}");
        assert!(d.block_residuals().max() <= 1e-9, "matrix {k}");
        for _ in 0..20 {
            let psi = random::state(4, &mut r);
            let n1 = success_probability(&d, &psi).unwrap();
            let n2 = failure_probability(&d, &psi).unwrap();
            assert!((n1 + n2 - 1.0).abs() <= 1e-10);
        }
    }
}

#[test]
fn dilation_of_machines_on_grid() {
    for theta in GRID {
        for kind in [MachineKind::Delete, MachineKind::Clone] {
            let d = dilate(&machine(kind, theta).op).unwrap();
            assert!(d.unitarity_residual() <= 1e-9);
            assert!(d.block_residuals().max() <= 1e-9);
            let expected = if theta == 0.0 {
                Branch::Unscaled
            } else {
                Branch::Scaled
            };
            assert_eq!(d.branch, expected, "{kind:?} at {theta}");
        }
    }
}

#[test]
fn post_selected_branches_match_blocks() {
    let mut r = rng(31);
    let a = random::gaussian_matrix(4, &mut r);
    let d = dilate(&a).unwrap();
    let psi = random::state(4, &mut r);
    let keep = post_select(&d, &psi, Ancilla::Keep0).unwrap();
    let drop = post_select(&d, &psi, Ancilla::Keep1).unwrap();
    assert!(keep.success && !drop.success);
    assert!((keep.probability - success_probability(&d, &psi).unwrap()).abs() <= 1e-12);
    assert!((drop.probability - failure_probability(&d, &psi).unwrap()).abs() <= 1e-12);
    let direct = d.u_tilde.apply(&psi).unwrap();
    assert!(collinearity(&keep.out_state, &direct).unwrap() >= 1.0 - 1e-12);
    let comp = d.v_comp.apply(&psi).unwrap();
    assert!(collinearity(&drop.out_state, &comp).unwrap() >= 1.0 - 1e-12);
}

#[test]
fn dilation_is_scale_invariant_above_unit_norm() {
    let mut r = rng(3);
    let a = random::gaussian_matrix(4, &mut r);
    let d1 = dilate(&a.scale_real(3.0)).unwrap();
    let d2 = dilate(&a.scale_real(7.0)).unwrap();
    assert!(d1.u_tilde.max_abs_diff(&d2.u_tilde).unwrap() <= 1e-12);
    assert!((d1.lambda_max * 7.0 / 3.0 - d2.lambda_max).abs() <= 1e-11);
}

#[test]
fn unitary_input_has_empty_complement() {
    let u = random::haar_unitary(4, &mut rng(8));
    let d = dilate(&u).unwrap();
    assert_eq!(d.branch, Branch::Unscaled);
    assert!(d.v_comp.max_abs() <= 1e-6);
    let psi = random::state(4, &mut rng(9));
    assert!((success_probability(&d, &psi).unwrap() - 1.0).abs() <= 1e-12);
}

#[test]
fn contraction_is_left_unscaled() {
    let d = dilate(&CMat::diag_real(&[0.5, 0.25, 0.0, 1.0])).unwrap();
    assert_eq!(d.branch, Branch::Unscaled);
    let e3 = Ket::basis(4, 2).unwrap();
    assert!(matches!(
        post_select(&d, &e3, Ancilla::Keep0),
        Err(Error::ZeroBranch { .. })
    ));
    assert_eq!(failure_probability(&d, &e3).unwrap(), 1.0);
}

#[test]
fn golden_success_probabilities() {
    let pair = state_pair(1.0).unwrap();
    let plus = blank_state();
    let clo = dilate(&cloning_operator(1.0).unwrap().op).unwrap();
    assert!((clo.lambda_max - std::f64::consts::E).abs() <= 1e-12);
    let del = dilate(&deleting_operator(1.0).unwrap().op).unwrap();
    assert!((del.lambda_max - 5.596_908_965_654_578_5).abs() <= 1e-12);
    for which in 0..2 {
        let a = pair.get(which);
        let n1 = success_probability(&clo, &a.tensor(&plus).unwrap()).unwrap();
        assert!((n1 - 0.076_825_461_062_673_436).abs() <= 1e-12);
        let n1 = success_probability(&del, &a.tensor(a).unwrap()).unwrap();
        assert!((n1 - 0.056_235_346_396_411_625).abs() <= 1e-12);
    }
}

#[test]
fn success_probability_is_quotient_of_norms() {
    let theta = 0.7;
    let op = cloning_operator(theta).unwrap().op;
    let d = dilate(&op).unwrap();
    let psi = state_pair(theta)
        .unwrap()
        .alpha1
        .tensor(&blank_state())
        .unwrap();
    let quotient = op.apply(&psi).unwrap().norm().powi(2) / d.lambda_max.powi(2);
    assert!((success_probability(&d, &psi).unwrap() - quotient).abs() <= 1e-14);
}

#[test]
fn sampling_is_identical_across_executors() {
    let d = dilate(&cloning_operator(1.0).unwrap().op).unwrap();
    let psi = state_pair(1.0)
        .unwrap()
        .alpha1
        .tensor(&blank_state())
        .unwrap();
    let seq = sample_post_selection_with(&d, &psi, 50_000, 17, Exec::Sequential).unwrap();
    let par = sample_post_selection_with(&d, &psi, 50_000, 17, Exec::Parallel).unwrap();
    assert_eq!(seq, par);
    assert!(sample_post_selection_with(&d, &psi, 0, 17, Exec::Sequential).is_err());
}

#[test]
fn unnormalized_inputs_are_rejected() {
    let d = dilate(&CMat::identity(4)).unwrap();
    let v = Ket::from_real(&[1.0, 1.0, 0.0, 0.0]).unwrap();
    assert!(matches!(
        success_probability(&d, &v),
        Err(Error::NotNormalized { .. })
    ));
    assert!(dilate(&kron(&CMat::identity(2), &CMat::identity(4))).is_err());
}
