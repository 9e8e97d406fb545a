use nalgebra::{Matrix4, Vector3};
use qdual::channel::Channel;
use qdual::extremal::{is_extremal_tp, pure_output_inputs, INDEPENDENCE_TOL};
use qdual::numkit::{self, c, cr, eigh, kron, pauli, CMat, CVec};
use qdual::qubit::concurrence::{entanglement_fidelity, ppt_min_eigenvalue, pure_concurrence};
use qdual::qubit::extremal_form::standard_kraus;
use qdual::qubit::slocc::{filtered_kraus, lorentz_of, sl2_of, slocc_normal_form_of_ptm};
use qdual::qubit::{self, *};
use qdual::random;

#[test]
fn ptm_routes_agree_on_random_channels() {
    let mut rng = random::rng(200);
    for k in 0..200 {
        let ch = random::channel(&mut rng, 2, 1 + k % 4).unwrap();
        let p = qubit::ptm(&ch).unwrap();
        assert!((p.r.row(0) - Matrix4::identity().row(0)).abs().max() < 1e-10);
        let x = Vector3::new(0.3, -0.2, 0.5);
        let rho = (pauli(0) + pauli(1) * cr(x[0]) + pauli(2) * cr(x[1]) + pauli(3) * cr(x[2])) * cr(0.5);
        let out = ch.apply(&rho).unwrap();
        let y = p.apply_bloch(&x);
        for i in 0..3 {
            assert!((numkit::trace(&(pauli(i + 1) * &out)).re - y[i]).abs() < 1e-10);
        }
    }
}

#[test]
fn ellipsoid_examples() {
    let e = qubit::ellipsoid(&Channel::identity(2)).unwrap();
    assert!(e.center.norm() < 1e-14);
    assert!(e.semi_axes.iter().all(|a| (a - 1.0).abs() < 1e-12));

    let e = qubit::ellipsoid(&Channel::amplitude_damping(0.5).unwrap()).unwrap();
    assert!((e.center - Vector3::new(0.0, 0.0, 0.5)).norm() < 1e-14);
    let h = 0.5f64.sqrt();
    for (a, b) in e.semi_axes.iter().zip([h, h, 0.5]) {
        assert!((a - b).abs() < 1e-12);
    }
    // touches the sphere at the north pole
    assert!(e.contains(&Vector3::new(0.0, 0.0, 1.0), 1e-12));

    let e = qubit::ellipsoid(&Channel::completely_depolarizing(2)).unwrap();
    assert!(e.center.norm() < 1e-14 && e.semi_axes.iter().all(|a| a.abs() < 1e-12));
    assert!((e.orientation.determinant() - 1.0).abs() < 1e-12);
}

#[test]
fn bloch_sphere_maps_inside_ellipsoid() {
    let mut rng = random::rng(7);
    let ch = random::channel(&mut rng, 2, 3).unwrap();
    let e = qubit::ellipsoid(&ch).unwrap();
    let p = qubit::ptm(&ch).unwrap();
    for _ in 0..1000 {
        let mut v = Vector3::new(random::gaussian(&mut rng), random::gaussian(&mut rng), random::gaussian(&mut rng));
        v /= v.norm();
        assert!(e.contains(&p.apply_bloch(&v), 1e-9));
    }
}

#[test]
fn lu_normal_form_examples() {
    let g: f64 = 0.36;
    let lu = qubit::lu_normal_form(&Channel::amplitude_damping(g).unwrap()).unwrap();
    let s = (1.0 - g).sqrt();
    for (a, b) in lu.lambdas.iter().zip([s, s, 1.0 - g]) {
        assert!((a - b).abs() < 1e-12);
    }
    assert!((lu.shift[2] - g).abs() < 1e-12 && lu.shift[0].abs() < 1e-12 && lu.shift[1].abs() < 1e-12);

    let lu = qubit::lu_normal_form(&Channel::unitary(&random::unitary(&mut random::rng(1), 2)).unwrap()).unwrap();
    assert!(lu.lambdas.iter().all(|l| (l - 1.0).abs() < 1e-12));
    assert!(lu.shift.iter().all(|x| x.abs() < 1e-12));
}

#[test]
fn lu_normal_form_invariance_and_reconstruction() {
    let mut rng = random::rng(10);
    let ch = random::channel(&mut rng, 2, 2).unwrap();
    let base = qubit::lu_normal_form(&ch).unwrap();
    assert!(base.lambdas[0] >= base.lambdas[1] && base.lambdas[1] >= base.lambdas[2].abs());
    assert!(base.shift[0] >= -1e-12 && base.shift[1] >= -1e-12);
    let conj = ch.conjugated(&base.u_out, &base.u_in).unwrap();
    assert!(qubit::ptm(&conj).unwrap().max_abs_diff(&base.ptm()) < 1e-9);
    for _ in 0..20 {
        let u = random::unitary(&mut rng, 2);
        let v = random::unitary(&mut rng, 2);
        let other = qubit::lu_normal_form(&ch.conjugated(&u, &v).unwrap()).unwrap();
        for k in 0..3 {
            assert!((other.lambdas[k] - base.lambdas[k]).abs() < 1e-9);
        }
    }
}

#[test]
fn sl2_lorentz_round_trip() {
    let mut rng = random::rng(3);
    for _ in 0..10 {
        let mut a = random::ginibre(&mut rng, 2, 2);
        let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
        a /= det.sqrt();
        let l = lorentz_of(&a);
        let back = sl2_of(&l).unwrap();
        assert!((lorentz_of(&back) - l).abs().max() < 1e-9);
    }
}

#[test]
fn slocc_depolarizing_generic() {
    let p = 0.3;
    let f = qubit::slocc_normal_form(&Channel::depolarizing(p).unwrap()).unwrap();
    match f.kind {
        SloccKind::Generic { s } => {
            for v in s {
                assert!((v - (1.0 - p)).abs() < 1e-10);
            }
            assert!(1.0 - s[0] - s[1] + s[2] >= -1e-12);
        }
        other => panic!("expected generic, got {other:?}"),
    }
    for m in [&f.a, &f.b] {
        let ph = m[(0, 0)] / cr(m[(0, 0)].norm());
        assert!(numkit::max_abs_diff(&(m / ph), &numkit::identity(2)) < 1e-9);
    }
}

#[test]
fn slocc_amplitude_damping_non_generic() {
    for g in [0.2, 0.5, 0.9] {
        let ch = Channel::amplitude_damping(g).unwrap();
        let f = qubit::slocc_normal_form(&ch).unwrap();
        let SloccKind::NonGeneric { x } = f.kind else {
            panic!("γ={g}: expected non-generic, got {:?}", f.kind);
        };
        assert!((0.0..=1.0).contains(&x));
        let r = qubit::ptm(&ch).unwrap().r;
        assert!((f.reconstruct() - r).abs().max() < 1e-8);
        // b·Ω(aρa†)·b† ∝ Φ(ρ) on the Pauli basis
        for k in 0..4 {
            let lhs = f.apply_filtered(&pauli(k)).unwrap() * cr(f.scale);
            let rhs = ch.apply(&pauli(k)).unwrap();
            assert!(numkit::max_abs_diff(&lhs, &rhs) < 1e-8);
        }
    }
}

#[test]
fn slocc_complete_damping_point() {
    let f = qubit::slocc_normal_form(&Channel::amplitude_damping(1.0).unwrap()).unwrap();
    assert_eq!(f.kind, SloccKind::Point);
}

#[test]
fn slocc_filtered_pauli_channels_recover_diagonal() {
    let mut rng = random::rng(17);
    let mut checked = 0;
    while checked < 20 {
        // random Pauli-diagonal channel with s₁ > s₂ > |s₃|
        let w: Vec<f64> = (0..4).map(|_| random::gaussian(&mut rng).abs() + 0.05).collect();
        let tot: f64 = w.iter().sum();
        let p: Vec<f64> = w.iter().map(|x| x / tot).collect();
        let kraus: Vec<CMat> = (0..4).map(|k| pauli(k) * cr(p[k].sqrt())).collect();
        let ch = Channel::from_kraus(kraus.clone(), true).unwrap();
        let mut seed_s = {
            let d = qubit::ptm(&ch).unwrap().r;
            [d[(1, 1)], d[(2, 2)], d[(3, 3)]]
        };
        seed_s.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
        if (seed_s[0].abs() - seed_s[1].abs()).abs() < 1e-3 || (seed_s[1].abs() - seed_s[2].abs()).abs() < 1e-3 {
            continue;
        }
        let mut a = random::ginibre(&mut rng, 2, 2) * cr(0.3) + numkit::identity(2);
        let mut b = random::ginibre(&mut rng, 2, 2) * cr(0.3) + numkit::identity(2);
        for m in [&mut a, &mut b] {
            let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
            *m /= det.sqrt();
        }
        let filtered = Channel::from_kraus(filtered_kraus(&kraus, &a, &b), false).unwrap();
        let r = qubit::ptm_from_action(&filtered).unwrap().r;
        let f = slocc_normal_form_of_ptm(&r).unwrap();
        let SloccKind::Generic { s } = f.kind else {
            panic!("expected generic, got {:?}", f.kind);
        };
        for k in 0..2 {
            assert!((s[k] - seed_s[k].abs()).abs() < 1e-6, "{s:?} vs {seed_s:?}");
        }
        assert!((s[2].abs() - seed_s[2].abs()).abs() < 1e-6);
        assert!(1.0 - s[0] - s[1] + s[2] >= -1e-9);
        checked += 1;
    }
}

#[test]
fn canonical_extremal_examples() {
    let ch = canonical_extremal(0.0, 0.0).unwrap();
    // the angle form at α = β = 0 is conjugation by σ_x
    assert!(ch.action_distance(&Channel::unitary(&pauli(1)).unwrap()) < 1e-12);

    let (a, b) = (0.7, 1.9);
    let ch = canonical_extremal(a, b).unwrap();
    let d = qubit::dual_r_matrix(&ch.choi().jam);
    let expect = Matrix4::new(
        1.0,
        0.0,
        0.0,
        0.0,
        0.0,
        f64::cos(a),
        0.0,
        0.0,
        0.0,
        0.0,
        f64::cos(b),
        0.0,
        f64::sin(a) * f64::sin(b),
        0.0,
        0.0,
        -f64::cos(a) * f64::cos(b),
    );
    assert!((d - expect).abs().max() < 1e-12);
}

#[test]
fn canonical_extremal_random_property() {
    let mut rng = random::rng(55);
    let pi = std::f64::consts::PI;
    for _ in 0..100 {
        let a = pi * (random::gaussian(&mut rng).abs() % 1.0);
        let b = pi * (random::gaussian(&mut rng).abs() % 1.0);
        let ch = canonical_extremal(a, b).unwrap();
        assert!(ch.tp_defect() < 1e-12);
        assert!(ch.rank() <= 2);
        let ext = is_extremal_tp(&ch, INDEPENDENCE_TOL).unwrap();
        if (a.sin() * b.sin()).abs() > 1e-3 {
            assert!(ext, "α={a} β={b}");
        }
    }
    for (a, b) in [(0.0, 1.0), (pi, 0.4), (0.8, 0.0)] {
        let ch = canonical_extremal(a, b).unwrap();
        assert!(!is_extremal_tp(&ch, INDEPENDENCE_TOL).unwrap() || ch.rank() == 1);
    }
}

#[test]
fn s_parameters_match_on_grid() {
    for i in 0..=8 {
        for j in 0..=8 {
            let a = i as f64 * std::f64::consts::PI / 8.0;
            let b = j as f64 * std::f64::consts::PI / 8.0;
            let (s0, s1) = qubit::extremal_form::s_params(a, b);
            let [k1, k2] = standard_kraus(s0, s1);
            let ch = Channel::from_kraus(vec![k1, k2], true).unwrap();
            let r = qubit::ptm(&ch).unwrap().r;
            // diagonal magnitudes and translation agree with the angle form
            let target = qubit::extremal_form::canonical_ptm(a, b);
            assert!((r[(3, 0)] - target[(3, 0)]).abs() < 1e-10);
            assert!((r[(3, 3)] - target[(3, 3)]).abs() < 1e-10);
            let mut got = [r[(1, 1)].abs(), r[(2, 2)].abs()];
            let mut want = [target[(1, 1)].abs(), target[(2, 2)].abs()];
            got.sort_by(f64::total_cmp);
            want.sort_by(f64::total_cmp);
            assert!((got[0] - want[0]).abs() < 1e-10 && (got[1] - want[1]).abs() < 1e-10);
        }
    }
}

#[test]
fn extremal_form_recovery() {
    let g: f64 = 0.4;
    let f = extremal_form_of(&Channel::amplitude_damping(g).unwrap()).unwrap();
    assert!((f.s0 - 1.0).abs() < 1e-9 && (f.s1 - (1.0 - g).sqrt()).abs() < 1e-9);

    let mut rng = random::rng(77);
    for _ in 0..30 {
        let ch = random::channel(&mut rng, 2, 2).unwrap();
        let f = extremal_form_of(&ch).unwrap();
        assert!(f.channel().unwrap().action_distance(&ch) < 1e-9);
        let [a1, a2] = f.kraus();
        let s = a1.adjoint() * &a1 + a2.adjoint() * &a2;
        assert!(numkit::max_abs_diff(&s, &numkit::identity(2)) < 1e-12);
    }
    let u = Channel::unitary(&random::unitary(&mut rng, 2)).unwrap();
    let f = extremal_form_of(&u).unwrap();
    assert!(f.channel().unwrap().action_distance(&u) < 1e-9);
    assert!(matches!(extremal_form_of(&Channel::depolarizing(0.2).unwrap()), Err(qdual::Error::NotExtremal)));
}

#[test]
fn preserved_pure_inputs_of_extremal_qubit_channels() {
    for (a, b) in [(0.7, 1.9), (1.2, 0.4), (2.5, 2.0)] {
        let ch = canonical_extremal(a, b).unwrap();
        let found = pure_output_inputs(&ch, 1).unwrap();
        assert_eq!(found.len(), 2);
        for psi in &found {
            let out = ch.apply(&numkit::projector(psi)).unwrap();
            let purity = numkit::trace(&(&out * &out)).re;
            assert!(purity >= 1.0 - 1e-9);
        }
        assert!(found[0].dotc(&found[1]).norm() > 1e-6);
    }
}

fn bell_jam() -> CMat {
    Channel::identity(2).choi().jam.clone()
}

#[test]
fn concurrence_examples() {
    assert!((concurrence(&bell_jam()).unwrap() - 1.0).abs() < 1e-10);
    for p in [0.0, 0.2, 0.5, 0.66, 0.7, 1.0] {
        let jam = Channel::depolarizing(p).unwrap().choi().jam.clone();
        let expect = (1.0 - 1.5 * p).max(0.0);
        assert!((concurrence(&jam).unwrap() - expect).abs() < 1e-9, "p={p}");
    }
    let mut rng = random::rng(2);
    let a = random::density_matrix(&mut rng, 2, 2);
    let b = random::density_matrix(&mut rng, 2, 2);
    assert!(concurrence(&kron(&a, &b)).unwrap() < 1e-9);
    assert!(concurrence(&numkit::identity(4)).is_err());
}

#[test]
fn separable_mixtures_have_zero_concurrence() {
    let mut rng = random::rng(9);
    for _ in 0..50 {
        let mut rho = CMat::zeros(4, 4);
        for _ in 0..3 {
            rho += kron(&random::pure_state(&mut rng, 2), &random::pure_state(&mut rng, 2)) * cr(1.0 / 3.0);
        }
        assert!(concurrence(&rho).unwrap() < 1e-8);
    }
}

#[test]
fn concurrence_zero_iff_ppt() {
    let mut rng = random::rng(500);
    for k in 0..500 {
        let rho = random::density_matrix(&mut rng, 4, 1 + k % 4);
        let conc = concurrence(&rho).unwrap();
        let lmin = ppt_min_eigenvalue(&rho).unwrap();
        assert_eq!(conc <= 1e-9, lmin >= -1e-9, "k={k} C={conc} λ={lmin}");
    }
}

#[test]
fn equal_concurrence_decomposition_property() {
    let mut rng = random::rng(12);
    for k in 0..40 {
        let rho = random::density_matrix(&mut rng, 4, 1 + k % 4);
        let d = equal_concurrence_decomposition(&rho).unwrap();
        assert!((d.c - concurrence(&rho).unwrap()).abs() < 1e-8, "k={k} {} {}", d.c, concurrence(&rho).unwrap());
        assert!(numkit::max_abs_diff(&d.mixture(), &rho) < 1e-10);
        for s in &d.states {
            assert!((pure_concurrence(s) - d.c).abs() < 1e-8);
        }
    }
}

#[test]
fn bell_diagonal_rank_two_decomposition() {
    let b1 = numkit::max_entangled(2) / cr(2f64.sqrt());
    let b2 = CVec::from_vec(vec![cr(0.0), cr(1.0), cr(1.0), cr(0.0)]) / cr(2f64.sqrt());
    let rho = numkit::projector(&b1) * cr(0.8) + numkit::projector(&b2) * cr(0.2);
    let d = equal_concurrence_decomposition(&rho).unwrap();
    assert!((d.c - 0.6).abs() < 1e-10);
    assert_eq!(d.states.len(), 2);
    for s in &d.states {
        assert!((pure_concurrence(s) - 0.6).abs() < 1e-8);
    }
}

#[test]
fn kraus_contraction_examples() {
    let d = kraus_contraction_form(&Channel::completely_depolarizing(2)).unwrap();
    assert!(d.c < 1e-12);
    assert!(numkit::max_abs_diff(&d.contraction, &numkit::diag_real(&[1.0, 0.0])) < 1e-12);
    for k in d.kraus() {
        let s = numkit::svd(&k);
        assert!(s.s[1] < 1e-10);
    }
    let d = kraus_contraction_form(&Channel::identity(2)).unwrap();
    let h = 1.0 / 2f64.sqrt();
    assert!(numkit::max_abs_diff(&d.contraction, &numkit::diag_real(&[h, h])) < 1e-12);

    let mut rng = random::rng(4);
    for m in 1..=4 {
        let ch = random::channel(&mut rng, 2, m).unwrap();
        let d = kraus_contraction_form(&ch).unwrap();
        let rebuilt = Channel::from_kraus(d.kraus(), true).unwrap();
        assert!(rebuilt.action_distance(&ch) < 1e-9);
        for (u, v) in &d.unitaries {
            assert!(numkit::max_abs_diff(&(u.adjoint() * u), &numkit::identity(2)) < 1e-10);
            assert!(numkit::max_abs_diff(&(v.adjoint() * v), &numkit::identity(2)) < 1e-10);
        }
    }
}

#[test]
fn entanglement_breaking_examples() {
    assert!(is_entanglement_breaking(&Channel::depolarizing(0.7).unwrap()).unwrap());
    assert!(!is_entanglement_breaking(&Channel::depolarizing(0.6).unwrap()).unwrap());
    assert!(is_entanglement_breaking(&Channel::completely_depolarizing(2)).unwrap());
    for g in [0.1, 0.5, 0.9, 0.99] {
        let ch = Channel::amplitude_damping(g).unwrap();
        assert!(!is_entanglement_breaking(&ch).unwrap());
        assert!(can_distribute_entanglement(&ch).unwrap());
        let top = eigh(&ch.choi().jam).unwrap().max_value();
        assert!((top - (1.0 - g / 2.0)).abs() < 1e-12);
    }
    assert!(!can_distribute_entanglement(&Channel::depolarizing(0.7).unwrap()).unwrap());
}

#[test]
fn fidelity_examples() {
    let (f, chi) = max_entanglement_fidelity(&Channel::identity(2)).unwrap();
    assert!((f - 1.0).abs() < 1e-12);
    let bell = numkit::max_entangled(2) / cr(2f64.sqrt());
    assert!((chi.dotc(&bell).norm() - 1.0).abs() < 1e-10);

    let g: f64 = 0.5;
    let ad = Channel::amplitude_damping(g).unwrap();
    let (f, _) = max_entanglement_fidelity(&ad).unwrap();
    assert!((f - 0.75).abs() < 1e-12);
    let via_bell = entanglement_fidelity(&ad, &bell).unwrap();
    let expect = (2.0 - g + 2.0 * (1.0 - g).sqrt()) / 4.0;
    assert!((via_bell - expect).abs() < 1e-12);
    assert!((via_bell - 0.728553).abs() < 1e-6);
    assert!(via_bell < f);

    for p in [0.7, 0.9, 1.0] {
        let (f, _) = max_entanglement_fidelity(&Channel::depolarizing(p).unwrap()).unwrap();
        assert!(f <= 0.5 + 1e-12);
    }
    let _ = c(0.0, 0.0);
}
