mod common;

use common::*;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use spinforge_core::linalg::eigh;
use spinforge_core::linalg::CMatrix;
use spinforge_core::spinspace::*;
use std::f64::consts::{FRAC_PI_2, PI};

#[test]
fn collective_operators_match_kronecker_construction() {
    for n in 1..=5 {
        for (a, axis) in SpinAxis::ALL.into_iter().enumerate() {
            let op = collective_operator(axis, n).unwrap();
            let got = to_dense(op.dense().unwrap());
            assert!(max_abs_diff(&got, &collective_dense(n, a)) < 1e-15);
        }
    }
}

#[test]
fn su2_closure_up_to_six_sites() {
    let i = C64::new(0.0, 1.0);
    for n in 1..=6 {
        let s: Vec<CMatrix> = SpinAxis::ALL
            .iter()
            .map(|&ax| collective_operator(ax, n).unwrap().dense().unwrap().clone())
            .collect();
        for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            let lhs = s[a].commutator(&s[b]);
            assert!(lhs.max_abs_diff(&s[c].scale(i)) < 1e-12, "n={n}");
        }
    }
}

#[test]
fn coherent_state_mean_spin_n10() {
    let psi = coherent_x_state(10).unwrap();
    let expect = [5.0, 0.0, 0.0];
    for (axis, e) in SpinAxis::ALL.into_iter().zip(expect) {
        let v = collective_operator(axis, 10).unwrap().expectation(psi.amplitudes()).unwrap();
        assert!((v - e).abs() < 1e-12);
    }
}

#[test]
fn wigner_matches_matrix_exponential_and_factorial_sum() {
    for two_j in 0..=14 {
        let (_, jy, _) = spin_matrices(two_j);
        for beta in [0.3, FRAC_PI_2, 2.2, PI] {
            let table = wigner_d(two_j, beta).unwrap();
            let u = rotation(&jy, beta);
            let j = two_j as f64 / 2.0;
            for r in 0..=two_j {
                for c in 0..=two_j {
                    // spin_matrices index k ↔ m = J - k.
                    let (mr, mc) = (j - r as f64, j - c as f64);
                    let d = table.get(mr, mc).unwrap();
                    assert!((u[r][c].re - d).abs() < 1e-12, "2J={two_j} β={beta}");
                    assert!(u[r][c].im.abs() < 1e-12);
                    let f = wigner_factorial(two_j, (2.0 * mr) as i64, (2.0 * mc) as i64, beta);
                    assert!((f - d).abs() < 1e-11, "2J={two_j} β={beta} m'={mr} m={mc}");
                }
            }
        }
    }
}

#[test]
fn wigner_parity_zeros_at_half_pi() {
    // d^J_{0,m}(π/2) vanishes for integer J when J + m is odd.
    for j in 1..=7usize {
        let table = wigner_d(2 * j, FRAC_PI_2).unwrap();
        for m in -(j as i64)..=(j as i64) {
            let d = table.get(0.0, m as f64).unwrap();
            if (j as i64 + m) % 2 != 0 {
                assert!(d.abs() < 1e-12, "J={j} m={m}");
            } else {
                assert!(d.abs() > 1e-3);
            }
        }
    }
}

#[test]
fn wigner_columns_unit_norm() {
    let t = wigner_d(10, 1.1).unwrap();
    for c in 0..t.dim() {
        let s: f64 = (0..t.dim()).map(|r| t.at(r, c).powi(2)).sum();
        assert!((s - 1.0).abs() < 1e-12);
    }
}

fn projector_dense(n: usize) -> CMatrix {
    symmetric_projector(n).unwrap().dense()
}

#[test]
fn projector_matches_total_spin_eigenspace() {
    for n in 1..=6 {
        let s: Vec<CMatrix> = SpinAxis::ALL
            .iter()
            .map(|&ax| collective_operator(ax, n).unwrap().dense().unwrap().clone())
            .collect();
        let dim = 1usize << n;
        let mut s2 = CMatrix::zeros(dim);
        for m in &s {
            let sq = m.matmul(m);
            for r in 0..dim {
                for c in 0..dim {
                    s2[(r, c)] += sq[(r, c)];
                }
            }
        }
        let eig = eigh(&s2).unwrap();
        let target = n as f64 / 2.0 * (n as f64 / 2.0 + 1.0);
        let cols: Vec<usize> = (0..dim).filter(|&k| (eig.values[k] - target).abs() < 1e-8).collect();
        assert_eq!(cols.len(), n + 1);
        let oracle = CMatrix::from_fn(dim, |r, c| {
            cols.iter()
                .map(|&k| eig.vectors[(r, k)] * eig.vectors[(c, k)].conj())
                .sum()
        });
        assert!(oracle.max_abs_diff(&projector_dense(n)) < 1e-10, "n={n}");
    }
}

#[test]
fn two_site_projection_identity() {
    for n in 3..=5 {
        let p = projector_dense(n);
        let dim = 1usize << n;
        let sz = collective_operator(SpinAxis::Z, n).unwrap().dense().unwrap().clone();
        let sz2 = sz.matmul(&sz);
        let shifted = CMatrix::from_fn(dim, |r, c| {
            let id = if r == c { n as f64 / 4.0 } else { 0.0 };
            (sz2[(r, c)] - id) / (n * (n - 1)) as f64
        });
        let rhs = shifted.matmul(&p);
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let zz = CMatrix::from_fn(dim, |r, c| {
                    if r != c {
                        return C64::new(0.0, 0.0);
                    }
                    let si = if r >> i & 1 == 0 { 0.5 } else { -0.5 };
                    let sj = if r >> j & 1 == 0 { 0.5 } else { -0.5 };
                    C64::new(si * sj, 0.0)
                });
                let lhs = p.matmul(&zz).matmul(&p);
                assert!(lhs.max_abs_diff(&rhs) < 1e-12, "n={n} i={i} j={j}");
            }
        }
    }
}

#[test]
fn one_body_projection_identity() {
    for n in 1..=5 {
        let p = projector_dense(n);
        for (a, axis) in SpinAxis::ALL.into_iter().enumerate() {
            let s = collective_operator(axis, n).unwrap().dense().unwrap().clone();
            let rhs = s.matmul(&p).scale(C64::new(1.0 / n as f64, 0.0));
            for site in 0..n {
                let mut single = spinforge_core::operator::HamiltonianOp::new(n).unwrap();
                single.push(0.5, &[(site, axis)]).unwrap();
                let lhs = p.matmul(single.dense().unwrap()).matmul(&p);
                assert!(lhs.max_abs_diff(&rhs) < 1e-12, "n={n} axis={a} site={site}");
            }
        }
    }
}

#[test]
fn magnetization_distribution_oracles() {
    let p = magnetization_distribution(&coherent_x_state(2).unwrap()).unwrap();
    let expect = [(-1.0, 0.25), (0.0, 0.5), (1.0, 0.25)];
    for (a, b) in p.iter().zip(expect) {
        assert!((a.0 - b.0).abs() < 1e-15 && (a.1 - b.1).abs() < 1e-15);
    }
    let p8 = magnetization_distribution(&coherent_x_state(8).unwrap()).unwrap();
    for (k, &(m, pm)) in p8.iter().enumerate() {
        assert_eq!(m, k as f64 - 4.0);
        assert!((pm - binomial(8, k) / 256.0).abs() < 1e-15);
    }
    for seed in 0..5 {
        let psi = random_state(6, seed);
        let a = magnetization_distribution(&psi).unwrap();
        let b = brute_force_pm(&psi);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.0, y.0);
            assert!((x.1 - y.1).abs() < 1e-14);
        }
        let total: f64 = a.iter().map(|x| x.1).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}

#[test]
fn rotation_matches_dense_exponential() {
    let n = 3;
    let psi = random_state(n, 11);
    for (a, axis) in SpinAxis::ALL.into_iter().enumerate() {
        let u = rotation(&collective_dense(n, a), 0.83);
        let expect = matvec(&u, psi.amplitudes());
        let got = rotate(&psi, axis, 0.83).unwrap();
        for (x, y) in got.amplitudes().iter().zip(&expect) {
            assert!((x - y).norm() < 1e-13);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rotations_preserve_norm(
        seed in any::<u64>(),
        n in 1usize..=8,
        steps in proptest::collection::vec((0usize..3, -10.0f64..10.0), 1..12),
    ) {
        let mut psi = random_state(n, seed);
        for (a, angle) in steps {
            psi = rotate(&psi, SpinAxis::ALL[a], angle).unwrap();
        }
        prop_assert!((psi.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn projector_idempotent_and_bounded(seed in any::<u64>(), n in 1usize..=7) {
        let proj = symmetric_projector(n).unwrap();
        let psi = random_state(n, seed);
        let once = proj.apply(&psi).unwrap();
        let twice = proj.apply(&once).unwrap();
        prop_assert!(once.distance(&twice).unwrap() < 1e-12);
        let f = proj.fidelity(&psi).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&f));
    }

    #[test]
    fn two_pi_rotation_sign(seed in any::<u64>(), n in 1usize..=7) {
        let psi = random_state(n, seed);
        let r = rotate(&psi, SpinAxis::Y, 2.0 * PI).unwrap();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        for (a, b) in r.amplitudes().iter().zip(psi.amplitudes()) {
            prop_assert!((a - b * sign).norm() < 1e-12);
        }
    }
}
