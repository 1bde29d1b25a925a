//! Single-probe-qubit readout. A probe prepared along `+x` and coupled by
//! `κ S_z S_z^{(p)}` picks up the magnetization distribution of the chain as
//! a Fourier series in `τ = κt`; sampling it on `N+1` times inverts the
//! series, and a second transform over the phase `θ` isolates the extremal
//! Dicke coherence.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use num_complex::Complex64 as C64;

use crate::models::attach_probe_coupling;
use crate::observables::{check_theta_points, phase_probe_state, theta_grid};
use crate::spinspace::{magnetization_of, wigner_d, StateVector};
use crate::{Error, Result};

/// Coherence samples `a(τ_k, θ_j)` on `τ_k = 2πk/(N+1)` and a uniform `θ` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeGrid {
    n_sites: usize,
    tau_grid: Vec<f64>,
    theta_grid: Vec<f64>,
    /// Row-major, `a[k * n_theta + j]`.
    a: Vec<C64>,
}

impl ProbeGrid {
    pub fn new(n_sites: usize, theta_grid: Vec<f64>, a: Vec<C64>) -> Result<Self> {
        if a.len() != (n_sites + 1) * theta_grid.len() {
            return Err(Error::arg("probe grid has the wrong number of samples"));
        }
        Ok(ProbeGrid {
            n_sites,
            tau_grid: tau_grid(n_sites),
            theta_grid,
            a,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_theta(&self) -> usize {
        self.theta_grid.len()
    }

    pub fn tau_grid(&self) -> &[f64] {
        &self.tau_grid
    }

    pub fn theta_grid(&self) -> &[f64] {
        &self.theta_grid
    }

    pub fn get(&self, k: usize, j: usize) -> C64 {
        self.a[k * self.n_theta() + j]
    }

    pub fn samples(&self) -> &[C64] {
        &self.a
    }
}

/// `τ_k = 2πk/(N+1)`, `k = 0..=N`.
pub fn tau_grid(n_sites: usize) -> Vec<f64> {
    (0..=n_sites)
        .map(|k| 2.0 * PI * k as f64 / (n_sites + 1) as f64)
        .collect()
}

/// Probe coherence `a(τ) = ⟨σ^-_p⟩ = ρ_{↑↓}` after the composite evolution,
/// with the chain in `chain_state` and the probe starting in `|+x⟩`.
///
/// Equals `½ Σ_m p_m e^{-imτ}`.
pub fn probe_coherence(chain_state: &StateVector, tau: f64) -> Result<C64> {
    chain_state.require_no_probe()?;
    if !tau.is_finite() {
        return Err(Error::arg("tau must be finite"));
    }
    let n = chain_state.n_sites();
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let joint = chain_state.attach_probe([h, h])?;
    let energies = attach_probe_coupling(n, 1.0)?
        .diagonal()
        .ok_or_else(|| Error::Numerical("probe coupling is not diagonal".into()))?;
    let evolved: Vec<C64> = joint
        .amplitudes()
        .iter()
        .zip(&energies)
        .map(|(a, e)| a * C64::from_polar(1.0, -e * tau))
        .collect();
    let dim = 1usize << n;
    let (up, down) = evolved.split_at(dim);
    Ok(up.iter().zip(down).map(|(u, d)| u * d.conj()).sum())
}

pub fn sample_probe_grid(psi_t: &StateVector, n_theta: usize) -> Result<ProbeGrid> {
    psi_t.require_no_probe()?;
    let n = psi_t.n_sites();
    check_theta_points(n_theta, n)?;
    let taus = tau_grid(n);
    let thetas = theta_grid(n_theta);
    let mut a = alloc::vec![C64::new(0.0, 0.0); (n + 1) * n_theta];
    for (j, &theta) in thetas.iter().enumerate() {
        let rotated = phase_probe_state(psi_t, theta)?;
        for (k, &tau) in taus.iter().enumerate() {
            a[k * n_theta + j] = probe_coherence(&rotated, tau)?;
        }
    }
    ProbeGrid::new(n, thetas, a)
}

/// Magnetization distribution `p_m(θ_j)`, `m = -N/2..=N/2` ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct PmTable {
    n_sites: usize,
    theta: Vec<f64>,
    /// Row-major, `p[j * (N+1) + i]` with `m_i = i - N/2`.
    p: Vec<f64>,
}

impl PmTable {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn m_values(&self) -> Vec<f64> {
        (0..=self.n_sites)
            .map(|i| i as f64 - self.n_sites as f64 / 2.0)
            .collect()
    }

    /// Distribution at phase index `j`, ascending in `m`.
    pub fn row(&self, j: usize) -> &[f64] {
        let w = self.n_sites + 1;
        &self.p[j * w..(j + 1) * w]
    }

    /// `p_0(θ_j)` for every `j`; requires even `N`.
    pub fn p0(&self) -> Result<Vec<f64>> {
        if !self.n_sites.is_multiple_of(2) {
            return Err(Error::UnsupportedParity(self.n_sites));
        }
        let mid = self.n_sites / 2;
        Ok((0..self.theta.len()).map(|j| self.row(j)[mid]).collect())
    }
}

/// Inverts `a(τ_k) = ½ Σ_m p_m e^{-imτ_k}`:
/// `p_m = (2/(N+1)) Σ_k a(τ_k) e^{+imτ_k}`.
pub fn reconstruct_pm(grid: &ProbeGrid) -> PmTable {
    let n = grid.n_sites;
    let w = n + 1;
    let n_theta = grid.n_theta();
    let mut p = Vec::with_capacity(w * n_theta);
    for j in 0..n_theta {
        for i in 0..w {
            let m = i as f64 - n as f64 / 2.0;
            let s: C64 = (0..w)
                .map(|k| grid.get(k, j) * C64::from_polar(1.0, m * grid.tau_grid[k]))
                .sum();
            p.push(2.0 * s.re / w as f64);
        }
    }
    PmTable {
        n_sites: n,
        theta: grid.theta_grid.clone(),
        p,
    }
}

/// Extremal coherence `⟨↑^N|ψ'⟩⟨ψ'|↓^N⟩` of the y-aligned state
/// `ψ' = exp(-iπ/2 S_y) ψ`, read from `p_0(θ)` on a uniform grid.
///
/// Only the `m = ±N/2` pair oscillates as `e^{∓iNθ}`. The coefficient of
/// `e^{-iNθ}` in `p_0` is `d_{0,N/2} d_{0,-N/2} e^{-iNπ/2} ρ'`, where the
/// Wigner elements come from `d^{N/2}(π/2)` and the phase `e^{-iNπ/2}`
/// accounts for the final `exp(-iπ/2 S_x)`, which equals
/// `exp(iπ/2 S_z) exp(-iπ/2 S_y) exp(-iπ/2 S_z)`. The product of the two
/// Wigner elements has magnitude `d²_{0,N/2}`.
pub fn extract_ghz_coherence(p0_of_theta: &[f64], n_sites: usize) -> Result<C64> {
    if !n_sites.is_multiple_of(2) {
        return Err(Error::UnsupportedParity(n_sites));
    }
    let n_theta = p0_of_theta.len();
    check_theta_points(n_theta, n_sites)?;
    let f: C64 = p0_of_theta
        .iter()
        .enumerate()
        .map(|(j, &p)| {
            let phase = 2.0 * PI * ((n_sites * j) % n_theta) as f64 / n_theta as f64;
            C64::from_polar(p, phase)
        })
        .sum::<C64>()
        / n_theta as f64;
    let d = wigner_d(n_sites, FRAC_PI_2)?;
    let j = n_sites as f64 / 2.0;
    let d_top = d.get(0.0, j).unwrap_or(0.0);
    let d_bottom = d.get(0.0, -j).unwrap_or(0.0);
    if d_top.abs() < 1e-14 {
        return Err(Error::Conditioning { value: d_top });
    }
    let phase = C64::from_polar(1.0, n_sites as f64 * FRAC_PI_2);
    Ok(f * phase / (d_top * d_bottom))
}

/// End-to-end readout of one state.
#[derive(Debug, Clone, PartialEq)]
pub struct Certification {
    pub table: PmTable,
    pub coherence: C64,
    /// `N + log2|ρ|²`.
    pub q: f64,
}

pub fn certify(psi: &StateVector, n_theta: usize) -> Result<Certification> {
    let n = psi.n_sites();
    if !n.is_multiple_of(2) {
        return Err(Error::UnsupportedParity(n));
    }
    let table = reconstruct_pm(&sample_probe_grid(psi, n_theta)?);
    let coherence = extract_ghz_coherence(&table.p0()?, n)?;
    let e = coherence.norm_sqr();
    let q = if e > 0.0 {
        n as f64 + e.log2()
    } else {
        f64::NEG_INFINITY
    };
    Ok(Certification {
        table,
        coherence,
        q,
    })
}

/// `½ Σ_b |ψ_b|² e^{-i m_b τ}` evaluated directly from the amplitudes.
pub fn fourier_coherence(chain_state: &StateVector, tau: f64) -> Result<C64> {
    chain_state.require_no_probe()?;
    let n = chain_state.n_sites();
    Ok(chain_state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| C64::from_polar(a.norm_sqr(), -magnetization_of(n, i) * tau))
        .sum::<C64>()
        * 0.5)
}
