mod common;

use common::*;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use spinforge_core::evolve::*;
use spinforge_core::linalg::{eigh, CMatrix};
use spinforge_core::models::*;
use spinforge_core::observables::{bell_q, FrameMode};
use spinforge_core::spinspace::*;
use std::f64::consts::PI;

fn random_hermitian(dim: usize, seed: u64) -> CMatrix {
    use rand::Rng;
    let mut r = rng(seed);
    let mut m = CMatrix::zeros(dim);
    for i in 0..dim {
        m[(i, i)] = C64::new(r.gen_range(-2.0..2.0), 0.0);
        for j in 0..i {
            let z = C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigh_reconstructs_and_is_orthonormal(dim in 1usize..24, seed in any::<u64>()) {
        let a = random_hermitian(dim, seed);
        let e = eigh(&a).unwrap();
        prop_assert!(e.reconstruct().max_abs_diff(&a) < 1e-12 * a.max_abs().max(1.0));
        let vtv = e.vectors.adjoint().matmul(&e.vectors);
        prop_assert!(vtv.max_abs_diff(&CMatrix::identity(dim)) < 1e-12);
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn exact_evolution_is_unitary_and_conserves_pm(
        kind in 0usize..4,
        seed in any::<u64>(),
        t in 0.0f64..40.0,
    ) {
        let n = 6;
        let spec = [
            ModelSpec::staggered_xxx(n, 1.0, 0.3),
            ModelSpec::longrange_xxz(n, 1.0, 0.6, 1.0, true),
            ModelSpec::longrange_xxz(n, 1.0, 0.6, 1.0, true).with_kind(ModelKind::IsingLimit),
            ModelSpec::oat(n, 0.2),
        ][kind].clone();
        let psi = random_state(n, seed);
        let out = exact_evolve(&spec.build().unwrap(), &psi, &[t]).unwrap().remove(0);
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-10);
        let (a, b) = (magnetization_distribution(&psi).unwrap(), magnetization_distribution(&out).unwrap());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x.1 - y.1).abs() < 1e-10);
        }
    }

    #[test]
    fn trotter_keeps_sector_weights(seed in any::<u64>(), steps in 1usize..40, t in 0.0f64..10.0) {
        let n = 6;
        let spec = ModelSpec::staggered_xxx(n, 1.0, 0.4);
        let psi = random_state(n, seed);
        let out = trotter_evolve(&spec, &psi, t, steps).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-10);
        let (a, b) = (magnetization_distribution(&psi).unwrap(), magnetization_distribution(&out).unwrap());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x.1 - y.1).abs() < 1e-10);
        }
    }
}

#[test]
fn propagator_reconstruction_on_every_kind() {
    for spec in [
        ModelSpec::staggered_xxx(8, 1.0, 0.15),
        ModelSpec::longrange_xxz(8, 1.0, -0.5, 2.0, true),
        ModelSpec::oat(8, 0.1),
    ] {
        let h = spec.build().unwrap();
        assert!(Propagator::new(&h).unwrap().reconstruction_error(&h).unwrap() < 1e-10);
    }
}

#[test]
fn propagator_matches_dense_exponential() {
    let n = 4;
    let h = ModelSpec::staggered_xxx(n, 1.0, 0.35).build().unwrap();
    let psi = random_state(n, 3);
    let t = 2.7;
    let u = rotation(&to_dense(h.dense().unwrap()), t);
    let expect = matvec(&u, psi.amplitudes());
    let got = exact_evolve(&h, &psi, &[t]).unwrap().remove(0);
    for (a, b) in got.amplitudes().iter().zip(&expect) {
        assert!((a - b).norm() < 1e-12);
    }
}

#[test]
fn energy_conserved_over_400_steps() {
    let spec = ModelSpec::staggered_xxx(8, 1.0, 0.1);
    let h = spec.build().unwrap();
    let psi = coherent_x_state(8).unwrap();
    let times = uniform_times(400.0, 400).unwrap();
    let e0 = h.expectation(psi.amplitudes()).unwrap();
    for s in exact_evolve(&h, &psi, &times).unwrap() {
        assert!((h.expectation(s.amplitudes()).unwrap() - e0).abs() < 1e-10);
    }
}

#[test]
fn oat_creates_ghz_at_quarter_period() {
    for n in [4, 6, 8, 10] {
        let chi = 0.05;
        let h = build_oat(n, chi).unwrap();
        let psi = coherent_x_state(n).unwrap();
        let out = exact_evolve(&h, &psi, &[PI / (2.0 * chi)]).unwrap().remove(0);
        let r = bell_q(&out, &FrameMode::Optimize).unwrap();
        assert!((r.q - (n as f64 - 2.0)).abs() < 1e-6, "n={n} q={}", r.q);
    }
}

#[test]
fn trotter_converges_to_exact() {
    let spec = ModelSpec::staggered_xxx(6, 1.0, 0.15);
    let psi = coherent_x_state(6).unwrap();
    let exact = exact_evolve(&spec.build().unwrap(), &psi, &[5.0]).unwrap().remove(0);
    let trot = trotter_evolve(&spec, &psi, 5.0, 2000).unwrap();
    assert!(trot.distance(&exact).unwrap() < 1e-3);
}

#[test]
fn trotter_oracle_equivalence_n4() {
    let spec = ModelSpec::staggered_xxx(4, 1.0, 0.25);
    let h = spec.build().unwrap();
    for (seed, t) in [(1u64, 0.3), (2, 0.9), (3, 1.6)] {
        let psi = random_state(4, seed);
        let exact = exact_evolve(&h, &psi, &[t]).unwrap().remove(0);
        let trot = trotter_evolve(&spec, &psi, t, 10_000).unwrap();
        assert!(trot.distance(&exact).unwrap() < 1e-6);
    }
}

#[test]
fn zero_field_plan_has_identity_field_layers() {
    let spec = ModelSpec::staggered_xxx(6, 1.0, 0.0);
    let plan = build_trotter_plan(&spec, 3.0, 7).unwrap();
    for layer in plan.layers.iter().filter(|l| l.kind == LayerKind::Field) {
        assert!(plan.field_angles(layer.duration).iter().all(|&a| a == 0.0));
    }
    let psi = random_state(6, 9);
    let out = plan.apply(&psi).unwrap();
    assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
}

#[test]
fn field_layer_angles_alternate() {
    let spec = ModelSpec::staggered_xxx(4, 1.0, 0.2);
    let plan = build_trotter_plan(&spec, 1.0, 10).unwrap();
    let a = plan.field_angles(plan.dt / 2.0);
    for (i, x) in a.iter().enumerate() {
        let expect = if i % 2 == 0 { -0.2 * 0.05 } else { 0.2 * 0.05 };
        assert!((x - expect).abs() < 1e-16);
    }
}

#[test]
fn layer_gates_have_disjoint_support() {
    for n in [4, 6, 8, 10] {
        let (even, odd) = ring_bonds(n);
        for layer in [even, odd] {
            let mut seen = vec![false; n];
            for (a, b) in layer {
                assert!(!seen[a] && !seen[b]);
                seen[a] = true;
                seen[b] = true;
            }
            assert!(seen.iter().all(|&x| x));
        }
    }
}

#[test]
fn symmetric_ordering_is_second_order() {
    let spec = ModelSpec::staggered_xxx(6, 1.0, 0.4);
    let psi = coherent_x_state(6).unwrap();
    let t = 4.0;
    let exact = exact_evolve(&spec.build().unwrap(), &psi, &[t]).unwrap().remove(0);
    let err = |steps: usize, ord: TrotterOrdering| {
        build_trotter_plan_with(&spec, t, steps, ord)
            .unwrap()
            .apply(&psi)
            .unwrap()
            .distance(&exact)
            .unwrap()
    };
    let sym = (err(100, TrotterOrdering::Symmetric) / err(200, TrotterOrdering::Symmetric)).log2();
    let alt = (err(100, TrotterOrdering::Alternating) / err(200, TrotterOrdering::Alternating)).log2();
    assert!((sym - 2.0).abs() < 0.1, "symmetric order {sym}");
    assert!((alt - 1.0).abs() < 0.2, "alternating order {alt}");
}

#[test]
fn trotter_series_matches_single_runs() {
    let spec = ModelSpec::staggered_xxx(4, 1.0, 0.3);
    let psi = coherent_x_state(4).unwrap();
    let times = [0.0, 0.5, 1.0, 2.0];
    let series = trotter_series(&spec, &psi, &times, 0.01).unwrap();
    let exact = exact_evolve(&spec.build().unwrap(), &psi, &times).unwrap();
    for (a, b) in series.iter().zip(&exact) {
        assert!(a.distance(b).unwrap() < 1e-4);
    }
    assert!(trotter_series(&spec, &psi, &[1.0, 0.5], 0.01).is_err());
}
