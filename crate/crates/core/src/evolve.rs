//! Time evolution: exact propagation through a sector-blocked Hermitian
//! eigendecomposition, and Trotter circuits for the staggered XXX ring.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;

use crate::linalg::{eigh, CMatrix};
use crate::models::{HamiltonianOp, ModelKind, ModelSpec};
use crate::operator::check_dense;
use crate::spinspace::StateVector;
use crate::{Error, Result};

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Debug, Clone)]
struct Block {
    indices: Vec<usize>,
    values: Vec<f64>,
    vectors: CMatrix,
}

/// Spectral decomposition of a Hamiltonian, `H = V diag(E) V†`.
///
/// When `H` conserves the number of down spins, each magnetization sector is
/// diagonalized separately; otherwise a single dense block is used.
#[derive(Debug, Clone)]
pub struct Propagator {
    n_qubits: usize,
    blocks: Vec<Block>,
}

impl Propagator {
    pub fn new(h: &HamiltonianOp) -> Result<Self> {
        let n = h.n_qubits();
        check_dense(n)?;
        let dim = 1usize << n;

        if let Some(diag) = h.diagonal() {
            let blocks = diag
                .into_iter()
                .enumerate()
                .map(|(i, e)| Block {
                    indices: vec![i],
                    values: vec![e],
                    vectors: CMatrix::identity(1),
                })
                .collect();
            return Ok(Propagator { n_qubits: n, blocks });
        }

        let sectors: Vec<Vec<usize>> = if conserves_popcount(h) {
            let mut s = vec![Vec::new(); n + 1];
            for i in 0..dim {
                s[i.count_ones() as usize].push(i);
            }
            s
        } else {
            vec![(0..dim).collect()]
        };

        let mut position = vec![0usize; dim];
        let mut sector_of = vec![0usize; dim];
        for (s, indices) in sectors.iter().enumerate() {
            for (p, &i) in indices.iter().enumerate() {
                position[i] = p;
                sector_of[i] = s;
            }
        }
        let mut blocks = Vec::with_capacity(sectors.len());
        for (s, indices) in sectors.into_iter().enumerate() {
            let m = indices.len();
            let mut block = CMatrix::zeros(m);
            for (col, &i) in indices.iter().enumerate() {
                for (j, amp) in h.act_on_basis(i as u64) {
                    // Cross-sector images cancel to (numerically) zero.
                    if sector_of[j as usize] != s {
                        continue;
                    }
                    block[(position[j as usize], col)] += amp;
                }
            }
            let eig = eigh(&block)?;
            blocks.push(Block {
                indices,
                values: eig.values,
                vectors: eig.vectors,
            });
        }
        Ok(Propagator { n_qubits: n, blocks })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self.blocks.iter().flat_map(|b| b.values.iter().copied()).collect();
        e.sort_by(f64::total_cmp);
        e
    }

    /// Sizes of the independently diagonalized blocks.
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.indices.len()).collect()
    }

    /// Full eigenvector matrix (columns), in block order.
    pub fn eigenvectors(&self) -> CMatrix {
        let dim = 1usize << self.n_qubits;
        let mut v = CMatrix::zeros(dim);
        let mut col = 0;
        for b in &self.blocks {
            for k in 0..b.indices.len() {
                for (r, &i) in b.indices.iter().enumerate() {
                    v[(i, col)] = b.vectors[(r, k)];
                }
                col += 1;
            }
        }
        v
    }

    /// `max|V E V† − H| / max(|H|, 1e-300)`.
    pub fn reconstruction_error(&self, h: &HamiltonianOp) -> Result<f64> {
        let dense = h.dense()?;
        let mut err: f64 = 0.0;
        for b in &self.blocks {
            let m = b.indices.len();
            for r in 0..m {
                for c in 0..m {
                    let v: C64 = (0..m)
                        .map(|k| b.vectors[(r, k)] * b.vectors[(c, k)].conj() * b.values[k])
                        .sum();
                    err = err.max((v - dense[(b.indices[r], b.indices[c])]).norm());
                }
            }
        }
        // Entries outside the blocks must vanish in H.
        let mut block_of = vec![0usize; dense.dim()];
        for (bi, b) in self.blocks.iter().enumerate() {
            for &i in &b.indices {
                block_of[i] = bi;
            }
        }
        for r in 0..dense.dim() {
            for c in 0..dense.dim() {
                if block_of[r] != block_of[c] {
                    err = err.max(dense[(r, c)].norm());
                }
            }
        }
        Ok(err / dense.max_abs().max(1e-300))
    }

    /// `exp(-iHt) ψ` on raw amplitudes.
    pub fn evolve_amplitudes(&self, psi: &[C64], t: f64) -> Result<Vec<C64>> {
        let dim = 1usize << self.n_qubits;
        if psi.len() != dim {
            return Err(Error::arg("state and propagator dimensions differ"));
        }
        if !t.is_finite() {
            return Err(Error::arg("evolution time must be finite"));
        }
        let mut out = vec![ZERO; dim];
        let mut coeffs = Vec::new();
        for b in &self.blocks {
            let m = b.indices.len();
            coeffs.clear();
            coeffs.extend((0..m).map(|k| {
                let c: C64 = (0..m)
                    .map(|r| b.vectors[(r, k)].conj() * psi[b.indices[r]])
                    .sum();
                c * C64::from_polar(1.0, -b.values[k] * t)
            }));
            for (r, &i) in b.indices.iter().enumerate() {
                out[i] = (0..m).map(|k| b.vectors[(r, k)] * coeffs[k]).sum();
            }
        }
        Ok(out)
    }

    pub fn evolve(&self, psi: &StateVector, t: f64) -> Result<StateVector> {
        let amps = self.evolve_amplitudes(psi.amplitudes(), t)?;
        StateVector::new(psi.n_sites(), psi.has_probe(), amps)
    }
}

fn conserves_popcount(h: &HamiltonianOp) -> bool {
    let dim = 1u64 << h.n_qubits();
    let scale = h.terms().iter().map(|t| t.coeff.abs()).fold(0.0, f64::max);
    (0..dim).all(|i| {
        h.act_on_basis(i)
            .into_iter()
            .all(|(j, a)| j.count_ones() == i.count_ones() || a.norm() <= 1e-14 * scale)
    })
}

/// `exp(-iHt) ψ0` for every requested time.
pub fn exact_evolve(h: &HamiltonianOp, psi0: &StateVector, times: &[f64]) -> Result<Vec<StateVector>> {
    if h.n_qubits() != psi0.n_sites() + psi0.has_probe() as usize {
        return Err(Error::arg("state and Hamiltonian act on different numbers of qubits"));
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::arg("evolution times must be finite"));
    }
    let prop = Propagator::new(h)?;
    times.iter().map(|&t| prop.evolve(psi0, t)).collect()
}

/// Operator ordering inside one Trotter step of length `δt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TrotterOrdering {
    /// `U_V U_e U_o U_o U_e U_V`, each factor over `δt/2`; palindromic and
    /// therefore second order.
    #[default]
    Symmetric,
    /// `U_V U_e U_o U_e U_o U_V`, each factor over `δt/2`. The bond part is not
    /// palindromic, so the global error is first order in `δt`.
    Alternating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerKind {
    EvenBonds,
    OddBonds,
    Field,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrotterLayer {
    pub kind: LayerKind,
    pub duration: f64,
}

/// Gate schedule for the staggered XXX ring.
#[derive(Debug, Clone, PartialEq)]
pub struct TrotterPlan {
    pub n_sites: usize,
    pub n_steps: usize,
    pub dt: f64,
    pub j0: f64,
    pub hz: f64,
    pub even_bonds: Vec<(usize, usize)>,
    pub odd_bonds: Vec<(usize, usize)>,
    /// Layers of one step, first applied first.
    pub layers: Vec<TrotterLayer>,
    pub ordering: TrotterOrdering,
}

impl TrotterPlan {
    pub fn two_site_gates_per_step(&self) -> usize {
        self.layers
            .iter()
            .map(|l| match l.kind {
                LayerKind::EvenBonds => self.even_bonds.len(),
                LayerKind::OddBonds => self.odd_bonds.len(),
                LayerKind::Field => 0,
            })
            .sum()
    }

    pub fn field_layers_per_step(&self) -> usize {
        self.layers.iter().filter(|l| l.kind == LayerKind::Field).count()
    }

    /// Single-site z-rotation angles of a field layer of the given duration:
    /// `exp(-i angle_i S_i^z)` with `angle_i = -h_z (-1)^i duration`.
    pub fn field_angles(&self, duration: f64) -> Vec<f64> {
        (0..self.n_sites)
            .map(|i| {
                let s = if i % 2 == 0 { 1.0 } else { -1.0 };
                -self.hz * s * duration
            })
            .collect()
    }

    /// Runs all steps on `psi0`.
    pub fn apply(&self, psi0: &StateVector) -> Result<StateVector> {
        psi0.require_no_probe()?;
        if psi0.n_sites() != self.n_sites {
            return Err(Error::arg("state size does not match the Trotter plan"));
        }
        let mut amps = psi0.amplitudes().to_vec();
        let kernels: Vec<LayerKernel> = self.layers.iter().map(|l| self.kernel(l)).collect();
        for _ in 0..self.n_steps {
            for k in &kernels {
                k.apply(&mut amps);
            }
        }
        StateVector::new(self.n_sites, false, amps)
    }

    fn kernel(&self, layer: &TrotterLayer) -> LayerKernel {
        match layer.kind {
            LayerKind::Field => {
                let angles = self.field_angles(layer.duration);
                let dim = 1usize << self.n_sites;
                let phases = (0..dim)
                    .map(|i| {
                        // exp(-i Σ angle_i σ_i/2), σ_i = +1 for a zero bit.
                        let phi: f64 = angles
                            .iter()
                            .enumerate()
                            .map(|(s, a)| if i >> s & 1 == 0 { a / 2.0 } else { -a / 2.0 })
                            .sum();
                        C64::from_polar(1.0, -phi)
                    })
                    .collect();
                LayerKernel::Diagonal(phases)
            }
            LayerKind::EvenBonds | LayerKind::OddBonds => {
                let bonds = if layer.kind == LayerKind::EvenBonds {
                    self.even_bonds.clone()
                } else {
                    self.odd_bonds.clone()
                };
                LayerKernel::Bonds(bonds, heisenberg_gate(self.j0, layer.duration))
            }
        }
    }
}

enum LayerKernel {
    Diagonal(Vec<C64>),
    Bonds(Vec<(usize, usize)>, BondGate),
}

impl LayerKernel {
    fn apply(&self, amps: &mut [C64]) {
        match self {
            LayerKernel::Diagonal(p) => {
                for (a, f) in amps.iter_mut().zip(p) {
                    *a *= f;
                }
            }
            LayerKernel::Bonds(bonds, g) => {
                for &(i, j) in bonds {
                    g.apply(amps, i, j);
                }
            }
        }
    }
}

/// `exp(+i J0 d S_i·S_j)`: phase `t` on the triplet, `s` on the singlet.
#[derive(Debug, Clone, Copy)]
struct BondGate {
    triplet: C64,
    diag: C64,
    off: C64,
}

fn heisenberg_gate(j0: f64, duration: f64) -> BondGate {
    // S·S = 1/4 on the triplet and -3/4 on the singlet.
    let triplet = C64::from_polar(1.0, j0 * duration / 4.0);
    let singlet = C64::from_polar(1.0, -3.0 * j0 * duration / 4.0);
    BondGate {
        triplet,
        diag: (triplet + singlet) * 0.5,
        off: (triplet - singlet) * 0.5,
    }
}

impl BondGate {
    fn apply(&self, amps: &mut [C64], i: usize, j: usize) {
        let (bi, bj) = (1usize << i, 1usize << j);
        for idx in 0..amps.len() {
            match (idx & bi != 0, idx & bj != 0) {
                (false, false) | (true, true) => amps[idx] *= self.triplet,
                (false, true) => {
                    let partner = idx ^ bi ^ bj;
                    let (a, b) = (amps[idx], amps[partner]);
                    amps[idx] = self.diag * a + self.off * b;
                    amps[partner] = self.off * a + self.diag * b;
                }
                (true, false) => {}
            }
        }
    }
}

/// Even bonds `(0,1),(2,3),…` and odd bonds `(1,2),…,(N-1,0)` of a ring.
pub fn ring_bonds(n_sites: usize) -> (Vec<(usize, usize)>, Vec<(usize, usize)>) {
    let even = (0..n_sites / 2).map(|k| (2 * k, 2 * k + 1)).collect();
    let odd = (0..n_sites / 2)
        .map(|k| (2 * k + 1, (2 * k + 2) % n_sites))
        .collect();
    (even, odd)
}

pub fn build_trotter_plan(spec: &ModelSpec, t: f64, n_steps: usize) -> Result<TrotterPlan> {
    build_trotter_plan_with(spec, t, n_steps, TrotterOrdering::Symmetric)
}

pub fn build_trotter_plan_with(
    spec: &ModelSpec,
    t: f64,
    n_steps: usize,
    ordering: TrotterOrdering,
) -> Result<TrotterPlan> {
    if spec.kind != ModelKind::StaggeredXxx {
        return Err(Error::arg("Trotter circuits are defined for the staggered XXX model only"));
    }
    spec.validate()?;
    crate::spinspace::check_sites(spec.n_sites)?;
    if n_steps == 0 {
        return Err(Error::arg("n_steps must be at least 1"));
    }
    if !t.is_finite() {
        return Err(Error::arg("evolution time must be finite"));
    }
    let dt = t / n_steps as f64;
    let half = dt / 2.0;
    let (even_bonds, odd_bonds) = ring_bonds(spec.n_sites);
    use LayerKind::*;
    let kinds = match ordering {
        TrotterOrdering::Symmetric => [Field, EvenBonds, OddBonds, OddBonds, EvenBonds, Field],
        TrotterOrdering::Alternating => [Field, EvenBonds, OddBonds, EvenBonds, OddBonds, Field],
    };
    let layers = kinds
        .into_iter()
        .map(|kind| TrotterLayer { kind, duration: half })
        .collect();
    Ok(TrotterPlan {
        n_sites: spec.n_sites,
        n_steps,
        dt,
        j0: spec.j0,
        hz: spec.hz,
        even_bonds,
        odd_bonds,
        layers,
        ordering,
    })
}

pub fn trotter_evolve(spec: &ModelSpec, psi0: &StateVector, t: f64, n_steps: usize) -> Result<StateVector> {
    build_trotter_plan(spec, t, n_steps)?.apply(psi0)
}

/// Smallest step count with `δt·max(J0, h_z) ≤ max_phase`.
pub fn trotter_steps_for(spec: &ModelSpec, t: f64, max_phase: f64) -> usize {
    let scale = spec.j0.abs().max(spec.hz.abs());
    let n = (t.abs() * scale / max_phase).ceil();
    if n.is_finite() && n >= 1.0 {
        n as usize
    } else {
        1
    }
}

/// Default step count, `δt·max(J0, h_z) ≤ 0.05`.
pub fn default_trotter_steps(spec: &ModelSpec, t: f64) -> usize {
    trotter_steps_for(spec, t, 0.05)
}

/// Trotter states on an increasing time grid starting at or after zero; each
/// interval is split so that `δt·max(J0, h_z) ≤ max_phase`.
pub fn trotter_series(
    spec: &ModelSpec,
    psi0: &StateVector,
    times: &[f64],
    max_phase: f64,
) -> Result<Vec<StateVector>> {
    if !(max_phase > 0.0) {
        return Err(Error::arg("max_phase must be positive"));
    }
    let mut out = Vec::with_capacity(times.len());
    let mut state = psi0.clone();
    let mut now = 0.0;
    for &t in times {
        if !(t >= now) {
            return Err(Error::arg("Trotter times must be non-negative and non-decreasing"));
        }
        let span = t - now;
        if span > 0.0 {
            let n = trotter_steps_for(spec, span, max_phase);
            state = build_trotter_plan(spec, span, n)?.apply(&state)?;
        }
        now = t;
        out.push(state.clone());
    }
    Ok(out)
}

/// Default number of points on a time grid. Odd, so that the midpoint
/// `t_max/2` is a grid point.
pub const DEFAULT_TIME_POINTS: usize = 401;

/// `n_points` uniform times on `[0, t_max]`.
pub fn uniform_times(t_max: f64, n_points: usize) -> Result<Vec<f64>> {
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::arg("t_max must be positive and finite"));
    }
    if n_points < 2 {
        return Err(Error::arg("a time grid needs at least two points"));
    }
    let last = (n_points - 1) as f64;
    Ok((0..n_points).map(|i| t_max * i as f64 / last).collect())
}
