use nalgebra::DMatrix;
use proptest::prelude::*;
use tnq_tensor::*;
use tnq_testkit as tk;

fn t(m: &DMatrix<C64>) -> Tensor {
    Tensor::from_dmatrix(m).unwrap()
}

fn kron_t(a: &Tensor, b: &Tensor) -> Tensor {
    // (A (x) B) as an operator: outputs (a,b), inputs (a,b)
    let p = tensor_product(a, b).unwrap();
    permute_legs(&p, &[0, 2, 1, 3]).unwrap()
}

fn phi_plus(d: usize) -> Tensor {
    Tensor::from_fn(vec![Leg::down(d), Leg::down(d)], |ix| {
        if ix[0] == ix[1] {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
    .unwrap()
}

fn cup(d: usize) -> Tensor {
    phi_plus(d)
}

fn cap(d: usize) -> Tensor {
    bend_all(&phi_plus(d))
}

fn swap(d: usize) -> Tensor {
    Tensor::from_fn(vec![Leg::down(d), Leg::down(d), Leg::up(d), Leg::up(d)], |ix| {
        if ix[0] == ix[3] && ix[1] == ix[2] {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
    .unwrap()
}

#[test]
fn snake_equation() {
    for d in 1..=4 {
        // cap on legs (0,1), cup on legs (0,1); join cap.1 with cup.0
        let s = contract(&cap(d), &[1], &cup(d), &[0]).unwrap();
        // s legs: cap.0 (Up), cup.1 (Down) -> reorder to operator form
        let s = permute_legs(&s, &[1, 0]).unwrap();
        assert!(s.approx_eq(&Tensor::identity(d).unwrap(), 0.0));
    }
}

#[test]
fn matrix_product_matches_loop_oracle() {
    let mut rng = tk::rng(1);
    let a = tk::random_matrix(&mut rng, 2, 3);
    let b = tk::random_matrix(&mut rng, 3, 4);
    let r = contract(&t(&a), &[1], &t(&b), &[0]).unwrap();
    for i in 0..2 {
        for j in 0..4 {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..3 {
                acc += a[(i, k)] * b[(k, j)];
            }
            assert!((r.get(&[i, j]) - acc).norm() < 1e-14);
        }
    }
}

#[test]
fn juxtaposition() {
    let mut rng = tk::rng(2);
    let a = t(&tk::random_matrix(&mut rng, 2, 2));
    let b = t(&tk::random_matrix(&mut rng, 2, 2));
    let id = Tensor::identity(2).unwrap();
    let lhs = compose(&kron_t(&id, &b), &kron_t(&a, &id)).unwrap();
    assert!(lhs.max_abs_diff(&kron_t(&a, &b)).unwrap() < 1e-14);
}

#[test]
fn trace_through_bell_state() {
    let mut rng = tk::rng(3);
    for d in 2..=4 {
        let a = t(&tk::random_matrix(&mut rng, d, d));
        let phi = phi_plus(d);
        let ia = kron_t(&Tensor::identity(d).unwrap(), &a);
        let v = apply(&ia, &phi).unwrap();
        let val = phi.inner(&v).unwrap();
        assert!((val - trace(&a).unwrap()).norm() < 1e-12);
    }
}

#[test]
fn bell_partial_trace_is_identity() {
    let phi = phi_plus(2);
    let rho = tensor_product(&phi, &dagger(&phi)).unwrap();
    // legs: out a, out b, in a, in b
    let over_b = trace_pairs(&rho, &[(1, 3)]).unwrap();
    let over_a = trace_pairs(&rho, &[(0, 2)]).unwrap();
    let id = Tensor::identity(2).unwrap();
    assert!(over_a.approx_eq(&id, 0.0));
    assert!(over_b.approx_eq(&id, 0.0));
}

#[test]
fn swap_is_self_inverse_and_swaps_basis() {
    let s2 = swap(2);
    assert!(compose(&s2, &s2).unwrap().max_abs_diff(&kron_t(&Tensor::identity(2).unwrap(), &Tensor::identity(2).unwrap())).unwrap() == 0.0);
    let s3 = swap(3);
    for x in 0..3 {
        for y in 0..3 {
            let out = apply(&s3, &Tensor::ket(&[3, 3], &[x, y]).unwrap()).unwrap();
            assert_eq!(out, Tensor::ket(&[3, 3], &[y, x]).unwrap());
            // the same swap as a pure leg permutation
            let p = permute_legs(&Tensor::ket(&[3, 3], &[x, y]).unwrap(), &[1, 0]).unwrap();
            assert_eq!(p, out);
        }
    }
}

#[test]
fn ricochet() {
    let mut rng = tk::rng(4);
    for d in 2..=3 {
        let m = tk::random_matrix(&mut rng, d, d);
        let id = Tensor::identity(d).unwrap();
        let lhs = apply(&kron_t(&t(&m), &id), &phi_plus(d)).unwrap();
        let rhs = apply(&kron_t(&id, &t(&m.transpose())), &phi_plus(d)).unwrap();
        assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-14);
    }
}

#[test]
fn vectorization_through_phi_plus() {
    let mut rng = tk::rng(5);
    let d = 3;
    let a = t(&tk::random_matrix(&mut rng, d, d));
    let id = Tensor::identity(d).unwrap();
    let col = apply(&kron_t(&id, &a), &phi_plus(d)).unwrap();
    let row = apply(&kron_t(&a, &id), &phi_plus(d)).unwrap();
    assert!(vectorize(&a, VecConvention::Col).unwrap().max_abs_diff(&col).unwrap() < 1e-14);
    assert!(vectorize(&a, VecConvention::Row).unwrap().max_abs_diff(&row).unwrap() < 1e-14);
    // col and row forms differ by a wire exchange
    let swapped = apply(&swap(d), &vectorize(&a, VecConvention::Row).unwrap()).unwrap();
    assert!(swapped.max_abs_diff(&col).unwrap() < 1e-14);
}

#[test]
fn col_reshuffle_matches_index_oracle() {
    let mut rng = tk::rng(6);
    let (dx, dy) = (2, 3);
    let m = tk::random_matrix(&mut rng, dx * dy, dx * dy);
    let r = reshuffle(&t(&m), dx, dy, VecConvention::Col).unwrap();
    assert_eq!(r.dims(), vec![dy * dy, dx * dx]);
    for mm in 0..dx {
        for mu in 0..dy {
            for n in 0..dx {
                for nu in 0..dy {
                    assert_eq!(r.get(&[nu * dy + mu, n * dx + mm]), m[(mm * dy + mu, n * dy + nu)]);
                }
            }
        }
    }
    let rr = reshuffle(&t(&m), dx, dy, VecConvention::Row).unwrap();
    assert_eq!(rr.dims(), vec![dx * dx, dy * dy]);
    for mm in 0..dx {
        for mu in 0..dy {
            for n in 0..dx {
                for nu in 0..dy {
                    assert_eq!(rr.get(&[mm * dx + n, mu * dy + nu]), m[(mm * dy + mu, n * dy + nu)]);
                }
            }
        }
    }
}

#[test]
fn bell_projector_reshuffles_to_identity_superop() {
    // the identity channel's superoperator is I (x) I; its reshuffle is |Phi+><Phi+|
    let d = 2;
    let phi = phi_plus(d);
    let proj = tensor_product(&phi, &dagger(&phi)).unwrap().reshape_operator(&[4], &[4]).unwrap();
    let sop = Tensor::identity(d * d).unwrap();
    let r = reshuffle(&sop, d, d, VecConvention::Col).unwrap();
    assert_eq!(r, proj);
}

#[test]
fn reshuffle_rejects_bad_factorization() {
    let m = Tensor::identity(6).unwrap();
    assert!(reshuffle(&m, 2, 2, VecConvention::Col).is_err());
}

#[test]
fn dagger_matches_conjugate_transpose() {
    let mut rng = tk::rng(7);
    let a = tk::random_matrix(&mut rng, 3, 4);
    let d = dagger(&t(&a));
    assert_eq!(d, t(&a.adjoint()));
}

#[test]
fn conj_basics() {
    let mut rng = tk::rng(8);
    let real = tk::random_real_matrix(&mut rng, 2, 2);
    assert_eq!(conj(&t(&real)), t(&real));
    let a = t(&tk::random_matrix(&mut rng, 2, 3));
    let i = C64::new(0.0, 1.0);
    assert!(conj(&a.scale(i)).approx_eq(&conj(&a).scale(-i), 0.0));
    assert_eq!(conj(&conj(&a)), a);
}

#[test]
fn bending_both_legs_transposes() {
    let mut rng = tk::rng(9);
    let a = tk::random_matrix(&mut rng, 3, 3);
    let bent = bend_all(&t(&a));
    let as_op = permute_legs(&bent, &[1, 0]).unwrap();
    assert_eq!(as_op, t(&a.transpose()));
}

#[test]
fn bent_density_operator_norm() {
    // psi_rho from I + aX + bY + cZ; its norm is the entrywise |.|^2 sum
    let mut rng = tk::rng(10);
    for _ in 0..20 {
        let (a, b, c) = (tk::normal(&mut rng), tk::normal(&mut rng), tk::normal(&mut rng));
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[C64::new(1.0 + c, 0.0), C64::new(a, -b), C64::new(a, b), C64::new(1.0 - c, 0.0)],
        );
        let psi = bend_leg(&t(&m), 1).unwrap();
        let bra = dagger(&psi);
        let n = contract(&bra, &[0, 1], &psi, &[0, 1]).unwrap().scalar_value().unwrap();
        let direct: f64 = m.iter().map(|z| z.norm_sqr()).sum();
        assert!((n.re - direct).abs() < 1e-12 && n.im.abs() < 1e-12);
        assert!((n.re - (2.0 + 2.0 * (a * a + b * b + c * c))).abs() < 1e-10);
    }
}

#[test]
fn hadamard_and_scalar_comparison() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let had = Tensor::matrix(2, 2, [h, h, h, -h].iter().map(|&x| C64::new(x, 0.0)).collect()).unwrap();
    // AND-state |000>+|010>+|100>+|111>, last leg contracted with <-|/sqrt2
    let and = Tensor::from_fn(vec![Leg::down(2); 3], |ix| {
        C64::new(if ix[2] == (ix[0] & ix[1]) { 1.0 } else { 0.0 }, 0.0)
    })
    .unwrap();
    let minus = Tensor::new(vec![Leg::up(2)], vec![C64::new(h, 0.0), C64::new(-h, 0.0)]).unwrap();
    let r = contract(&and, &[2], &minus, &[0]).unwrap();
    let had_as_state = bend_leg(&had, 1).unwrap();
    let s = equal_up_to_scalar(&r, &had_as_state, 1e-12).unwrap();
    assert!((s - C64::new(1.0, 0.0)).norm() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn roth_lemma(seed in any::<u64>(), d in 1usize..=5) {
        let mut rng = tk::rng(seed);
        let a = tk::random_matrix(&mut rng, d, d);
        let b = tk::random_matrix(&mut rng, d, d);
        let c = tk::random_matrix(&mut rng, d, d);
        let lhs = vectorize(&t(&(&a * &b * &c)), VecConvention::Col).unwrap();
        let op = kron_t(&t(&c.transpose()), &t(&a));
        let rhs = apply(&op, &vectorize(&t(&b), VecConvention::Col).unwrap()).unwrap();
        let scale = lhs.max_abs().max(1.0);
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-10 * scale);
    }

    #[test]
    fn reshuffle_is_involution(seed in any::<u64>(), dx in 1usize..=3, dy in 1usize..=3, row in any::<bool>()) {
        let mut rng = tk::rng(seed);
        let m = t(&tk::random_matrix(&mut rng, dx * dy, dx * dy));
        let conv = if row { VecConvention::Row } else { VecConvention::Col };
        let back = reshuffle(&reshuffle(&m, dx, dy, conv).unwrap(), dx, dy, conv).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn bend_is_involution(seed in any::<u64>(), leg in 0usize..3) {
        let mut rng = tk::rng(seed);
        let v = tk::random_vector(&mut rng, 12);
        let a = Tensor::new(vec![Leg::down(2), Leg::up(3), Leg::down(2)], v).unwrap();
        prop_assert_eq!(bend_leg(&bend_leg(&a, leg).unwrap(), leg).unwrap(), a);
    }

    #[test]
    fn vectorize_round_trip(seed in any::<u64>(), r in 1usize..=4, c in 1usize..=4, row in any::<bool>()) {
        let mut rng = tk::rng(seed);
        let a = t(&tk::random_matrix(&mut rng, r, c));
        let conv = if row { VecConvention::Row } else { VecConvention::Col };
        let v = vectorize(&a, conv).unwrap();
        prop_assert_eq!(unvectorize(&v, r, c, conv).unwrap(), a);
    }

    #[test]
    fn contract_is_bilinear(seed in any::<u64>()) {
        let mut rng = tk::rng(seed);
        let a = t(&tk::random_matrix(&mut rng, 2, 3));
        let b = t(&tk::random_matrix(&mut rng, 2, 3));
        let c = t(&tk::random_matrix(&mut rng, 3, 2));
        let lhs = contract(&a.add(&b).unwrap(), &[1], &c, &[0]).unwrap();
        let rhs = contract(&a, &[1], &c, &[0]).unwrap().add(&contract(&b, &[1], &c, &[0]).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
    }

    #[test]
    fn svd_reconstruction(seed in any::<u64>(), r in 1usize..=16, c in 1usize..=16) {
        let mut rng = tk::rng(seed);
        let m = t(&tk::random_matrix(&mut rng, r, c));
        let s = svd(&m).unwrap();
        let err = s.reconstruct().unwrap().sub(&m).unwrap().norm();
        prop_assert!(err <= 1e-10 * m.norm());
        prop_assert!(s.sigma.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(s.sigma.iter().all(|&x| x >= 0.0));
        let u = s.u.to_dmatrix().unwrap();
        let v = s.v_dagger.to_dmatrix().unwrap();
        let k = s.sigma.len();
        prop_assert!(linalg::max_abs_diff(&(u.adjoint() * &u), &DMatrix::identity(k, k)) < 1e-10);
        prop_assert!(linalg::max_abs_diff(&(&v * v.adjoint()), &DMatrix::identity(k, k)) < 1e-10);
    }

    #[test]
    fn permutation_twice_is_identity(seed in any::<u64>(), i in 0usize..3, j in 0usize..3) {
        let mut rng = tk::rng(seed);
        let a = Tensor::new(vec![Leg::down(2), Leg::up(3), Leg::down(4)], tk::random_vector(&mut rng, 24)).unwrap();
        let mut p = vec![0, 1, 2];
        p.swap(i, j);
        prop_assert_eq!(permute_legs(&permute_legs(&a, &p).unwrap(), &p).unwrap(), a);
    }

    #[test]
    fn tntx_round_trip(seed in any::<u64>(), d0 in 1usize..4, d1 in 1usize..4) {
        let mut rng = tk::rng(seed);
        let a = Tensor::new(vec![Leg::down(d0), Leg::up(d1)], tk::random_vector(&mut rng, d0 * d1)).unwrap();
        prop_assert_eq!(tntx::read_tntx(&tntx::write_tntx(&a)).unwrap(), a);
    }
}

#[test]
fn size_cap_is_enforced() {
    let big = Tensor::zeros(vec![Leg::down(1 << 13); 2]).unwrap();
    match tensor_product(&big, &big) {
        Err(TensorError::SizeCap { shape, .. }) => assert_eq!(shape, vec![1 << 13; 4]),
        other => panic!("expected size cap error, got {other:?}"),
    }
}
