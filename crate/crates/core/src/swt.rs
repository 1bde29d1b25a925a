//! Effective collective couplings: magnon dispersions, analytic twisting
//! strengths, the second-order coupling tensor of an inhomogeneous field and
//! the one-magnon-sector numerics used to check them.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::linalg::{eigh, CMatrix};
use crate::models::{pair_couplings, HamiltonianOp, ModelKind, ModelSpec};
use crate::spinspace::SpinAxis;
use crate::{Error, Result};

/// Translation-invariant pair couplings `J(r)` by site offset `r = 1..N-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingProfile {
    n_sites: usize,
    j_of_r: Vec<f64>,
}

impl CouplingProfile {
    /// `j_of_r[r-1] = J(r)`.
    pub fn new(n_sites: usize, j_of_r: Vec<f64>) -> Result<Self> {
        if n_sites < 2 {
            return Err(Error::arg("a coupling profile needs at least two sites"));
        }
        if j_of_r.len() != n_sites - 1 {
            return Err(Error::arg(format!(
                "{} couplings given for offsets 1..{}",
                j_of_r.len(),
                n_sites - 1
            )));
        }
        if j_of_r.iter().any(|x| !x.is_finite()) {
            return Err(Error::arg("couplings must be finite"));
        }
        Ok(CouplingProfile { n_sites, j_of_r })
    }

    /// Ring with `J(1) = J(N-1) = J0`, all other offsets zero.
    pub fn nearest_neighbor(n_sites: usize, j0: f64) -> Result<Self> {
        let mut j = vec![0.0; n_sites.saturating_sub(1)];
        if let Some(first) = j.first_mut() {
            *first = j0;
        }
        if let Some(last) = j.last_mut() {
            *last = j0;
        }
        Self::new(n_sites, j)
    }

    /// Couplings of site 0 in a power-law model spec.
    /// Nearest-neighbour `J0` for staggered XXX, the power law otherwise.
    pub fn from_spec(spec: &ModelSpec) -> Result<Self> {
        if spec.kind == ModelKind::StaggeredXxx {
            spec.validate()?;
            return Self::nearest_neighbor(spec.n_sites, spec.j0);
        }
        let j = pair_couplings(spec)?;
        Self::new(spec.n_sites, j[1..spec.n_sites].to_vec())
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// `J(r)` for `r = 1..N-1`.
    pub fn j(&self, r: usize) -> f64 {
        self.j_of_r[r - 1]
    }

    pub fn couplings(&self) -> &[f64] {
        &self.j_of_r
    }

    /// `J̃(q) = Σ_r J(r) e^{iqr}` (real part; the imaginary part vanishes for
    /// profiles symmetric under `r ↔ N-r`).
    pub fn j_tilde(&self, q: f64) -> f64 {
        self.j_of_r
            .iter()
            .enumerate()
            .map(|(k, &j)| j * (q * (k + 1) as f64).cos())
            .sum()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let n = self.n_sites;
        (1..n).all(|r| (self.j(r) - self.j(n - r)).abs() <= tol)
    }
}

/// Allowed momenta `q_k = 2πk/N`, `k = 0..N-1`.
pub fn momentum_grid(n_sites: usize) -> Vec<f64> {
    (0..n_sites).map(|k| 2.0 * PI * k as f64 / n_sites as f64).collect()
}

fn grid_index(n_sites: usize, q: f64) -> Result<usize> {
    let x = q * n_sites as f64 / (2.0 * PI);
    let k = x.round();
    if !q.is_finite() || (x - k).abs() > 1e-9 {
        return Err(Error::arg(format!("q = {q} is not of the form 2πk/{n_sites}")));
    }
    Ok((k as i64).rem_euclid(n_sites as i64) as usize)
}

/// `ε(q) = ½[(1+δ) J̃(0) − J̃(q)]` for `q` on the momentum grid.
pub fn dispersion(profile: &CouplingProfile, delta: f64, q: f64) -> Result<f64> {
    grid_index(profile.n_sites, q)?;
    Ok(dispersion_unchecked(profile, delta, q))
}

fn dispersion_unchecked(profile: &CouplingProfile, delta: f64, q: f64) -> f64 {
    0.5 * ((1.0 + delta) * profile.j_tilde(0.0) - profile.j_tilde(q))
}

/// `min_{q≠0} ε(q)`.
pub fn magnon_gap(profile: &CouplingProfile, delta: f64) -> f64 {
    momentum_grid(profile.n_sites)
        .into_iter()
        .skip(1)
        .map(|q| dispersion_unchecked(profile, delta, q))
        .fold(f64::INFINITY, f64::min)
}

/// `χ = h_z² / (2 J0 (N−1))`.
pub fn chi_staggered(n_sites: usize, j0: f64, hz: f64) -> Result<f64> {
    if n_sites < 4 || !n_sites.is_multiple_of(2) {
        return Err(Error::arg("the staggered coupling needs an even ring with N ≥ 4"));
    }
    if !(j0 > 0.0) {
        return Err(Error::arg("J0 must be positive"));
    }
    Ok(hz * hz / (2.0 * j0 * (n_sites - 1) as f64))
}

/// `χ = −(δ/2) J̃(0) / (N−1)`.
pub fn chi_xxz(n_sites: usize, profile: &CouplingProfile, delta: f64) -> Result<f64> {
    if n_sites < 2 || n_sites != profile.n_sites {
        return Err(Error::arg("profile size does not match N"));
    }
    Ok(-0.5 * delta * profile.j_tilde(0.0) / (n_sites - 1) as f64)
}

/// Per-site field vectors `h_j = (h_j^x, h_j^y, h_j^z)`, entering as
/// `Σ_j h_j·S_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldProfile {
    h: Vec<[f64; 3]>,
}

impl FieldProfile {
    pub fn new(h: Vec<[f64; 3]>) -> Result<Self> {
        if h.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::arg("field components must be finite"));
        }
        Ok(FieldProfile { h })
    }

    /// The field of `−h_z Σ_j (−1)^j S_j^z`.
    pub fn staggered_z(n_sites: usize, hz: f64) -> Result<Self> {
        Self::new(
            (0..n_sites)
                .map(|j| [0.0, 0.0, if j % 2 == 0 { -hz } else { hz }])
                .collect(),
        )
    }

    pub fn n_sites(&self) -> usize {
        self.h.len()
    }

    pub fn components(&self) -> &[[f64; 3]] {
        &self.h
    }

    /// `f̃_α(q) = N^{-1/2} Σ_j f_j^α e^{iqj}` of the site-dependent part.
    pub fn fourier_inhomogeneous(&self, q: f64) -> [C64; 3] {
        let n = self.h.len();
        let mut mean = [0.0; 3];
        for v in &self.h {
            for a in 0..3 {
                mean[a] += v[a] / n as f64;
            }
        }
        let mut out = [C64::new(0.0, 0.0); 3];
        for (j, v) in self.h.iter().enumerate() {
            let phase = C64::from_polar(1.0, q * j as f64);
            for a in 0..3 {
                out[a] += phase * (v[a] - mean[a]);
            }
        }
        let norm = (n as f64).sqrt();
        out.map(|z| z / norm)
    }
}

/// Second-order collective couplings generated by an inhomogeneous field:
/// `H_eff = Σ_αβ χ_αβ S_α S_β + Σ_γ B_γ S_γ` on the symmetric sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiTensor {
    pub chi: [[f64; 3]; 3],
    pub linear_term: [f64; 3],
}

impl ChiTensor {
    pub fn get(&self, a: SpinAxis, b: SpinAxis) -> f64 {
        self.chi[a.index()][b.index()]
    }
}

pub fn chi_tensor(profile: &CouplingProfile, field: &FieldProfile) -> Result<ChiTensor> {
    let n = profile.n_sites;
    if field.n_sites() != n {
        return Err(Error::arg("field and coupling profile sizes differ"));
    }
    let scale = profile.couplings().iter().map(|j| j.abs()).sum::<f64>().max(f64::MIN_POSITIVE);
    let mut lambda = [[C64::new(0.0, 0.0); 3]; 3];
    for q in momentum_grid(n).into_iter().skip(1) {
        let eps = dispersion_unchecked(profile, 0.0, q);
        if eps.abs() <= 1e-12 * scale {
            return Err(Error::Singular { q });
        }
        let ht = field.fourier_inhomogeneous(q);
        for a in 0..3 {
            for b in 0..3 {
                lambda[a][b] += ht[a] * ht[b].conj() / eps;
            }
        }
    }
    let norm = (n * (n - 1)) as f64;
    let mut chi = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            chi[a][b] = 0.5 * (lambda[a][b].re + lambda[b][a].re) / norm;
        }
    }
    // B_γ = −(i/2N) Σ ε_αβγ Λ_αβ = Im Λ_αβ / N for cyclic (α, β, γ).
    let linear_term = [
        lambda[1][2].im / n as f64,
        lambda[2][0].im / n as f64,
        lambda[0][1].im / n as f64,
    ];
    Ok(ChiTensor { chi, linear_term })
}

/// `E_F = ⟨F|H|F⟩` and the `N×N` block of `H` on single flips `|j⟩ = σ^-_j|F⟩`.
pub fn single_flip_block(h: &HamiltonianOp) -> Result<(f64, CMatrix)> {
    let n = h.n_qubits();
    let e_f = h.element(0, 0).re;
    let scale = h.terms().iter().map(|t| t.coeff.abs()).sum::<f64>().max(f64::MIN_POSITIVE);
    let mut m = CMatrix::zeros(n);
    for b in 0..n {
        for (j, amp) in h.act_on_basis(1u64 << b) {
            if j.count_ones() != 1 {
                if amp.norm() > 1e-13 * scale {
                    return Err(Error::arg("Hamiltonian does not conserve S_z"));
                }
                continue;
            }
            m[(j.trailing_zeros() as usize, b)] += amp;
        }
    }
    Ok((e_f, m))
}

/// `ε(q_k) = ⟨q_k|H|q_k⟩ − E_F` with `|q⟩ = N^{-1/2} Σ_j e^{iqj}|j⟩`.
pub fn one_magnon_energies(h: &HamiltonianOp) -> Result<Vec<(f64, f64)>> {
    let n = h.n_qubits();
    let (e_f, m) = single_flip_block(h)?;
    let tol = 1e-12 * m.max_abs().max(1.0);
    for a in 0..n {
        for b in 0..n {
            if (m[(a, b)] - m[((a + 1) % n, (b + 1) % n)]).norm() > tol {
                return Err(Error::arg("Hamiltonian is not translation invariant"));
            }
        }
    }
    Ok(momentum_grid(n)
        .into_iter()
        .map(|q| {
            let mut e = C64::new(0.0, 0.0);
            for a in 0..n {
                for b in 0..n {
                    e += C64::from_polar(1.0, q * (b as f64 - a as f64)) * m[(a, b)];
                }
            }
            (q, e.re / n as f64 - e_f)
        })
        .collect())
}

/// `(E_F − E_W)/(N−1)`, with `E_W` the lowest single-flip eigenvalue.
pub fn chi_numeric(h: &HamiltonianOp, n_sites: usize) -> Result<f64> {
    if n_sites != h.n_qubits() || n_sites < 2 {
        return Err(Error::arg("n_sites does not match the Hamiltonian"));
    }
    let (e_f, m) = single_flip_block(h)?;
    let e_w = eigh(&m)?.values[0];
    Ok((e_f - e_w) / (n_sites - 1) as f64)
}

/// Twisting strength of the collective model a spec maps onto.
///
/// Staggered XXX: `h_z²/(2J0(N−1))`. Long-range XXZ: `−(δ/2)J̃(0)/(N−1)`.
/// Ising limit: `−(1+δ)J̃(0)/(2(N−1))`, its exact projection on the symmetric
/// sector. OAT: the model's own `chi`.
pub fn effective_chi(spec: &ModelSpec) -> Result<f64> {
    spec.validate()?;
    let n = spec.n_sites;
    match spec.kind {
        ModelKind::StaggeredXxx => chi_staggered(n, spec.j0, spec.hz),
        ModelKind::LongRangeXxz => chi_xxz(n, &CouplingProfile::from_spec(spec)?, spec.delta),
        ModelKind::IsingLimit => {
            let p = CouplingProfile::from_spec(spec)?;
            Ok(-(1.0 + spec.delta) * p.j_tilde(0.0) / (2.0 * (n - 1) as f64))
        }
        ModelKind::Oat => Ok(spec.chi),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Validity {
    pub ratio: f64,
    pub valid: bool,
}

/// Largest `h/Δ` at which the second-order couplings are trusted.
pub const VALIDITY_THRESHOLD: f64 = 0.3;

pub fn perturbative_validity(h: f64, gap: f64) -> Result<Validity> {
    if !(gap > 0.0) || !h.is_finite() {
        return Err(Error::arg("gap must be positive and h finite"));
    }
    let ratio = h.abs() / gap;
    Ok(Validity {
        ratio,
        valid: ratio <= VALIDITY_THRESHOLD,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_oat, build_staggered_xxx};

    #[test]
    fn nearest_neighbor_dispersion() {
        let p = CouplingProfile::nearest_neighbor(10, 1.0).unwrap();
        assert!((dispersion(&p, 0.0, PI).unwrap() - 2.0).abs() < 1e-14);
        assert!(dispersion(&p, 0.0, 0.0).unwrap().abs() < 1e-14);
        assert!((dispersion(&p, 1.0, PI).unwrap() - 3.0).abs() < 1e-14);
        assert!(dispersion(&p, 0.0, 0.1).is_err());
        let expect = 1.0 - (2.0 * PI / 10.0).cos();
        assert!((magnon_gap(&p, 0.0) - expect).abs() < 1e-14);
    }

    #[test]
    fn flat_band_at_gamma_zero() {
        let p = CouplingProfile::from_spec(&ModelSpec::longrange_xxz(7, 1.0, 0.0, 0.0, true)).unwrap();
        for q in momentum_grid(7).into_iter().skip(1) {
            assert!((dispersion(&p, 0.0, q).unwrap() - 0.5 * (1.0 + 1.0 / 6.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn closed_forms() {
        assert!((chi_staggered(10, 1.0, 0.15).unwrap() - 0.00125).abs() < 1e-16);
        assert_eq!(chi_staggered(10, 1.0, 0.0).unwrap(), 0.0);
        assert!(chi_staggered(7, 1.0, 0.1).is_err());
        let p = CouplingProfile::from_spec(&ModelSpec::longrange_xxz(8, 1.0, 0.4, 1.0, true)).unwrap();
        assert!((chi_xxz(8, &p, 0.4).unwrap() + 0.2 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn staggered_tensor() {
        let p = CouplingProfile::nearest_neighbor(8, 1.0).unwrap();
        let t = chi_tensor(&p, &FieldProfile::staggered_z(8, 0.1).unwrap()).unwrap();
        let expect = chi_staggered(8, 1.0, 0.1).unwrap();
        assert!((t.chi[2][2] - expect).abs() < 1e-15);
        assert_eq!(t.linear_term, [0.0; 3]);
        let uniform = FieldProfile::new(vec![[0.3, -0.2, 0.5]; 8]).unwrap();
        let u = chi_tensor(&p, &uniform).unwrap();
        assert!(u.chi.iter().flatten().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn singular_gap_detected() {
        // Only next-nearest neighbours: ε(π) = ½[J̃(0) − J̃(π)] = 0.
        let p = CouplingProfile::new(4, vec![0.0, 1.0, 0.0]).unwrap();
        let f = FieldProfile::staggered_z(4, 0.1).unwrap();
        assert!(matches!(chi_tensor(&p, &f), Err(Error::Singular { .. })));
    }

    #[test]
    fn exact_two_level_staggered_gap() {
        // The field couples only the q=0 and q=π magnons.
        let (n, j0, hz) = (8, 1.0, 0.1);
        let h = build_staggered_xxx(&ModelSpec::staggered_xxx(n, j0, hz)).unwrap();
        let chi = chi_numeric(&h, n).unwrap();
        let expect = ((j0 * j0 + hz * hz).sqrt() - j0) / (n - 1) as f64;
        assert!((chi - expect).abs() < 1e-14);
    }

    #[test]
    fn oat_chi_numeric() {
        let h = build_oat(6, 0.37).unwrap();
        assert!((chi_numeric(&h, 6).unwrap() - 0.37).abs() < 1e-14);
    }

    #[test]
    fn translation_breaking_rejected() {
        let h = build_staggered_xxx(&ModelSpec::staggered_xxx(6, 1.0, 0.2)).unwrap();
        assert!(one_magnon_energies(&h).is_err());
    }

    #[test]
    fn ising_limit_projection() {
        use crate::models::build_ising_limit;
        let spec = ModelSpec::longrange_xxz(6, 1.0, 0.3, 1.5, true).with_kind(ModelKind::IsingLimit);
        let chi = effective_chi(&spec).unwrap();
        let h = build_ising_limit(&spec).unwrap();
        assert!((chi_numeric(&h, 6).unwrap() - chi).abs() < 1e-14);
    }

    #[test]
    fn validity_threshold() {
        let v = perturbative_validity(0.15, 2.0).unwrap();
        assert!((v.ratio - 0.075).abs() < 1e-15 && v.valid);
        assert!(perturbative_validity(0.6, 2.0).unwrap().valid);
        assert!(!perturbative_validity(1.0, 2.0).unwrap().valid);
        assert!(perturbative_validity(1.0, 0.0).is_err());
    }
}
