#![allow(dead_code)]

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinforge_core::spinspace::StateVector;

pub type Dense = Vec<Vec<C64>>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_state(n: usize, seed: u64) -> StateVector {
    let mut r = rng(seed);
    let amps = (0..1usize << n)
        .map(|_| C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
        .collect();
    StateVector::new(n, false, amps).unwrap().normalized().unwrap()
}

pub fn random_symmetric_state(n: usize, seed: u64) -> StateVector {
    let mut r = rng(seed);
    let c: Vec<C64> = (0..=n)
        .map(|_| C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
        .collect();
    StateVector::from_dicke(n, &c).unwrap().normalized().unwrap()
}

pub fn zeros(n: usize) -> Dense {
    vec![vec![C64::new(0.0, 0.0); n]; n]
}

pub fn identity(n: usize) -> Dense {
    let mut m = zeros(n);
    for i in 0..n {
        m[i][i] = C64::new(1.0, 0.0);
    }
    m
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut c = zeros(n);
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

pub fn matvec(a: &Dense, v: &[C64]) -> Vec<C64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn scale(a: &Dense, s: C64) -> Dense {
    a.iter().map(|r| r.iter().map(|x| x * s).collect()).collect()
}

/// `exp(A)` by scaling and squaring with a long Taylor series.
pub fn expm(a: &Dense) -> Dense {
    let n = a.len();
    let norm: f64 = a
        .iter()
        .map(|r| r.iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut squarings = 0;
    let mut s = 1.0;
    while norm * s > 0.25 {
        s /= 2.0;
        squarings += 1;
    }
    let x = scale(a, C64::new(s, 0.0));
    let mut term = identity(n);
    let mut sum = identity(n);
    for k in 1..30 {
        term = scale(&matmul(&term, &x), C64::new(1.0 / k as f64, 0.0));
        for i in 0..n {
            for j in 0..n {
                sum[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        sum = matmul(&sum, &sum);
    }
    sum
}

/// Spin-`J` matrices in the basis `m = J, J-1, …, -J` (index `k` ↔ `m = J-k`),
/// Condon–Shortley phases: `⟨m+1|J_+|m⟩ = sqrt(J(J+1) - m(m+1))`.
pub fn spin_matrices(two_j: usize) -> (Dense, Dense, Dense) {
    let d = two_j + 1;
    let j = two_j as f64 / 2.0;
    let mut jp = zeros(d);
    for k in 1..d {
        let m = j - k as f64;
        jp[k - 1][k] = C64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let jm: Dense = (0..d).map(|r| (0..d).map(|c| jp[c][r].conj()).collect()).collect();
    let mut jx = zeros(d);
    let mut jy = zeros(d);
    let mut jz = zeros(d);
    for r in 0..d {
        for c in 0..d {
            jx[r][c] = (jp[r][c] + jm[r][c]) * 0.5;
            jy[r][c] = (jp[r][c] - jm[r][c]) * C64::new(0.0, -0.5);
        }
        jz[r][r] = C64::new(j - r as f64, 0.0);
    }
    (jx, jy, jz)
}

/// `exp(-i angle J)` for a spin matrix `J`.
pub fn rotation(j: &Dense, angle: f64) -> Dense {
    expm(&scale(j, C64::new(0.0, -angle)))
}

/// Wigner `d^J_{m'm}(β)` from the factorial sum.
pub fn wigner_factorial(two_j: usize, two_mp: i64, two_m: i64, beta: f64) -> f64 {
    let fact = |n: i64| -> f64 { (1..=n).map(|x| x as f64).product() };
    let tj = two_j as i64;
    let (jpm, jmm) = ((tj + two_m) / 2, (tj - two_m) / 2);
    let (jpmp, jmmp) = ((tj + two_mp) / 2, (tj - two_mp) / 2);
    let pref = (fact(jpmp) * fact(jmmp) * fact(jpm) * fact(jmm)).sqrt();
    let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
    let mut sum = 0.0;
    for k in 0..=tj {
        let a = jpm - k;
        let b = k;
        let cc = jmmp - k;
        let dd = k + (two_mp - two_m) / 2;
        if a < 0 || cc < 0 || dd < 0 {
            continue;
        }
        let sign = if (k + (two_mp - two_m) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let pc = (tj + (two_m - two_mp) / 2 - 2 * k) as i32;
        let ps = (2 * k + (two_mp - two_m) / 2) as i32;
        sum += sign * c.powi(pc) * s.powi(ps) / (fact(a) * fact(b) * fact(cc) * fact(dd));
    }
    pref * sum
}

/// Dense product-basis matrix of `Σ_i σ_i^α / 2` built from Kronecker
/// products, independent of the Pauli-string machinery.
pub fn collective_dense(n: usize, axis: usize) -> Dense {
    let dim = 1usize << n;
    let mut m = zeros(dim);
    for i in 0..dim {
        for site in 0..n {
            let bit = (i >> site) & 1;
            let j = i ^ (1 << site);
            match axis {
                0 => m[j][i] += C64::new(0.5, 0.0),
                1 => {
                    // σ^y|↑⟩ = i|↓⟩, σ^y|↓⟩ = -i|↑⟩
                    let v = if bit == 0 { C64::new(0.0, 0.5) } else { C64::new(0.0, -0.5) };
                    m[j][i] += v;
                }
                _ => m[i][i] += C64::new(if bit == 0 { 0.5 } else { -0.5 }, 0.0),
            }
        }
    }
    m
}

pub fn max_abs_diff(a: &Dense, b: &Dense) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn to_dense(m: &spinforge_core::linalg::CMatrix) -> Dense {
    (0..m.dim()).map(|r| m.row(r).to_vec()).collect()
}

/// Probability of magnetization `m` by explicit projection onto the
/// eigenspaces of a Kronecker-built `S_z`.
pub fn brute_force_pm(state: &StateVector) -> Vec<(f64, f64)> {
    let n = state.n_sites();
    let sz = collective_dense(n, 2);
    (0..=n)
        .map(|k| {
            let m = n as f64 / 2.0 - (n - k) as f64;
            let p = state
                .amplitudes()
                .iter()
                .enumerate()
                .filter(|(i, _)| (sz[*i][*i].re - m).abs() < 1e-12)
                .map(|(_, a)| a.norm_sqr())
                .sum();
            (m, p)
        })
        .collect()
}
