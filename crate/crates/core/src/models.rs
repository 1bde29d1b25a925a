//! Microscopic and effective chain Hamiltonians.

use alloc::format;
use alloc::vec::Vec;

pub use crate::operator::{HamiltonianOp, PauliTerm};
use crate::spinspace::{check_sites, SpinAxis};
use crate::{Error, Result, MAX_SITES};

use SpinAxis::{X, Y, Z};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// `-J0 Σ S_i·S_{i+1} - h_z Σ (-1)^i S_i^z` on a ring.
    StaggeredXxx,
    /// `-(1/2) Σ_{i≠j} J(r_ij) [S_i·S_j + δ S_i^z S_j^z]`, `J(r) = J0 r^-γ`.
    LongRangeXxz,
    /// `χ S_z²`.
    Oat,
    /// Ising part of the long-range XXZ model,
    /// `-(1+δ)/2 Σ_{i≠j} J(r_ij) S_i^z S_j^z`.
    IsingLimit,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::StaggeredXxx => "staggered_xxx",
            ModelKind::LongRangeXxz => "longrange_xxz",
            ModelKind::Oat => "oat",
            ModelKind::IsingLimit => "ising_limit",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            ModelKind::StaggeredXxx,
            ModelKind::LongRangeXxz,
            ModelKind::Oat,
            ModelKind::IsingLimit,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }
}

/// How the separation of two ring sites is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distance {
    /// `min(|i-j|, N-|i-j|)`; keeps the ring translation invariant.
    RingMinimal,
    /// `|i-j|`.
    Linear,
}

impl Distance {
    pub fn name(self) -> &'static str {
        match self {
            Distance::RingMinimal => "ring_minimal",
            Distance::Linear => "linear",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ring_minimal" => Some(Distance::RingMinimal),
            "linear" => Some(Distance::Linear),
            _ => None,
        }
    }

    pub fn between(self, n_sites: usize, i: usize, j: usize) -> usize {
        let d = i.abs_diff(j);
        match self {
            Distance::RingMinimal => d.min(n_sites - d),
            Distance::Linear => d,
        }
    }
}

/// Declarative description of one model instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub n_sites: usize,
    pub j0: f64,
    /// Staggered field amplitude.
    pub hz: f64,
    /// Easy-axis anisotropy.
    pub delta: f64,
    /// Power-law range exponent.
    pub gamma: f64,
    pub kac: bool,
    pub distance: Distance,
    /// Twisting strength, read only by [`ModelKind::Oat`].
    pub chi: f64,
}

impl ModelSpec {
    pub fn staggered_xxx(n_sites: usize, j0: f64, hz: f64) -> Self {
        ModelSpec {
            kind: ModelKind::StaggeredXxx,
            n_sites,
            j0,
            hz,
            delta: 0.0,
            gamma: 0.0,
            kac: false,
            distance: Distance::RingMinimal,
            chi: 0.0,
        }
    }

    pub fn longrange_xxz(n_sites: usize, j0: f64, delta: f64, gamma: f64, kac: bool) -> Self {
        ModelSpec {
            kind: ModelKind::LongRangeXxz,
            n_sites,
            j0,
            hz: 0.0,
            delta,
            gamma,
            kac,
            distance: Distance::RingMinimal,
            chi: 0.0,
        }
    }

    pub fn oat(n_sites: usize, chi: f64) -> Self {
        ModelSpec {
            kind: ModelKind::Oat,
            n_sites,
            j0: 1.0,
            hz: 0.0,
            delta: 0.0,
            gamma: 0.0,
            kac: false,
            distance: Distance::RingMinimal,
            chi,
        }
    }

    pub fn with_kind(mut self, kind: ModelKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 2 {
            return Err(Error::arg("a chain needs at least two sites"));
        }
        let finite = [self.j0, self.hz, self.delta, self.gamma, self.chi]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::arg("model parameters must be finite"));
        }
        if self.kind != ModelKind::Oat && self.j0 <= 0.0 {
            return Err(Error::arg("J0 must be positive"));
        }
        if self.gamma < 0.0 {
            return Err(Error::arg("gamma must be non-negative"));
        }
        if self.kind == ModelKind::StaggeredXxx && !self.n_sites.is_multiple_of(2) {
            return Err(Error::arg(format!(
                "staggered XXX needs an even ring, got N = {}",
                self.n_sites
            )));
        }
        Ok(())
    }

    /// Microscopic Hamiltonian for this spec.
    pub fn build(&self) -> Result<HamiltonianOp> {
        match self.kind {
            ModelKind::StaggeredXxx => build_staggered_xxx(self),
            ModelKind::LongRangeXxz => build_longrange_xxz(self),
            ModelKind::Oat => build_oat(self.n_sites, self.chi),
            ModelKind::IsingLimit => build_ising_limit(self),
        }
    }
}

fn check_kind(spec: &ModelSpec, kind: ModelKind) -> Result<()> {
    if spec.kind != kind {
        return Err(Error::arg(format!(
            "expected a {} spec, got {}",
            kind.name(),
            spec.kind.name()
        )));
    }
    spec.validate()
}

/// Pushes `coeff * S_i·S_j` (as `coeff/4 Σ_α σ^α σ^α`).
fn push_heisenberg(h: &mut HamiltonianOp, coeff: f64, i: usize, j: usize, zz_extra: f64) -> Result<()> {
    let c = coeff / 4.0;
    h.push(c, &[(i, X), (j, X)])?;
    h.push(c, &[(i, Y), (j, Y)])?;
    h.push(c * (1.0 + zz_extra), &[(i, Z), (j, Z)])
}

pub fn build_staggered_xxx(spec: &ModelSpec) -> Result<HamiltonianOp> {
    check_kind(spec, ModelKind::StaggeredXxx)?;
    let n = spec.n_sites;
    let mut h = HamiltonianOp::new(n)?;
    for i in 0..n {
        push_heisenberg(&mut h, -spec.j0, i, (i + 1) % n, 0.0)?;
    }
    for i in 0..n {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        // -h_z (-1)^i S_i^z = -h_z (-1)^i σ^z / 2
        h.push(-spec.hz * sign / 2.0, &[(i, Z)])?;
    }
    Ok(h)
}

/// Pair couplings `J_ij` (Kac-normalized when requested). Row-major, zero
/// diagonal.
pub fn pair_couplings(spec: &ModelSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let n = spec.n_sites;
    let mut j = alloc::vec![0.0; n * n];
    for a in 0..n {
        for b in 0..n {
            if a != b {
                let r = spec.distance.between(n, a, b) as f64;
                j[a * n + b] = spec.j0 * r.powf(-spec.gamma);
            }
        }
    }
    if spec.kac {
        // Divisor = row sum / J0; rows agree on a ring, the largest is used
        // for linear distance.
        let max_row = (0..n)
            .map(|a| j[a * n..(a + 1) * n].iter().sum::<f64>())
            .fold(0.0, f64::max);
        let divisor = max_row / spec.j0;
        for x in j.iter_mut() {
            *x /= divisor;
        }
    }
    Ok(j)
}

pub fn build_longrange_xxz(spec: &ModelSpec) -> Result<HamiltonianOp> {
    check_kind(spec, ModelKind::LongRangeXxz)?;
    let n = spec.n_sites;
    let j = pair_couplings(spec)?;
    let mut h = HamiltonianOp::new(n)?;
    for a in 0..n {
        for b in a + 1..n {
            // -(1/2) Σ_{i≠j} = -Σ_{i<j}
            push_heisenberg(&mut h, -j[a * n + b], a, b, spec.delta)?;
        }
    }
    Ok(h)
}

pub fn build_ising_limit(spec: &ModelSpec) -> Result<HamiltonianOp> {
    check_kind(spec, ModelKind::IsingLimit)?;
    let n = spec.n_sites;
    let j = pair_couplings(spec)?;
    let mut h = HamiltonianOp::new(n)?;
    for a in 0..n {
        for b in a + 1..n {
            h.push(-(1.0 + spec.delta) * j[a * n + b] / 4.0, &[(a, Z), (b, Z)])?;
        }
    }
    Ok(h)
}

/// `χ S_z² = χ N/4 + (χ/2) Σ_{i<j} σ^z_i σ^z_j`.
pub fn build_oat(n_sites: usize, chi: f64) -> Result<HamiltonianOp> {
    check_sites(n_sites)?;
    if !chi.is_finite() {
        return Err(Error::arg("chi must be finite"));
    }
    let mut h = HamiltonianOp::new(n_sites)?;
    h.push(chi * n_sites as f64 / 4.0, &[])?;
    for a in 0..n_sites {
        for b in a + 1..n_sites {
            h.push(chi / 2.0, &[(a, Z), (b, Z)])?;
        }
    }
    Ok(h)
}

/// `κ S_z S_z^{(p)}` on `N` chain sites plus the probe in bit `N`.
pub fn attach_probe_coupling(n_sites: usize, kappa: f64) -> Result<HamiltonianOp> {
    if n_sites == 0 || n_sites > MAX_SITES {
        return Err(Error::Capacity {
            requested: n_sites + 1,
            max: MAX_SITES + 1,
        });
    }
    let mut h = HamiltonianOp::new(n_sites + 1)?;
    for i in 0..n_sites {
        h.push(kappa / 4.0, &[(i, Z), (n_sites, Z)])?;
    }
    Ok(h)
}
