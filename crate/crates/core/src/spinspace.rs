//! Hilbert-space kinematics of a spin-1/2 chain: product-basis states,
//! collective spin operators, rotations, Wigner d-matrices, the projector on
//! the fully symmetric (Dicke) sector and magnetization bookkeeping.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;

use crate::linalg::{eigh, inner, norm_sqr, CMatrix};
use crate::operator::{check_dense, HamiltonianOp};
use crate::{Error, Result, MAX_SITES};

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinAxis {
    X,
    Y,
    Z,
}

impl SpinAxis {
    pub const ALL: [SpinAxis; 3] = [SpinAxis::X, SpinAxis::Y, SpinAxis::Z];

    pub fn index(self) -> usize {
        match self {
            SpinAxis::X => 0,
            SpinAxis::Y => 1,
            SpinAxis::Z => 2,
        }
    }
}

/// Magnetization `m = (n_up - n_down) / 2` of a basis index on `n_sites` sites.
#[inline]
pub fn magnetization_of(n_sites: usize, index: usize) -> f64 {
    let mask = (1usize << n_sites) - 1;
    let downs = (index & mask).count_ones() as f64;
    n_sites as f64 / 2.0 - downs
}

/// Binomial coefficient as a float (exact for the sizes used here).
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub(crate) fn check_sites(n_sites: usize) -> Result<()> {
    if n_sites == 0 || n_sites > MAX_SITES {
        return Err(Error::Capacity {
            requested: n_sites,
            max: MAX_SITES,
        });
    }
    Ok(())
}

/// Pure state of `n_sites` chain spins, optionally followed by one probe
/// qubit stored in bit `n_sites`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_sites: usize,
    has_probe: bool,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(n_sites: usize, has_probe: bool, amps: Vec<C64>) -> Result<Self> {
        check_sites(n_sites)?;
        let expected = 1usize << (n_sites + has_probe as usize);
        if amps.len() != expected {
            return Err(Error::arg(format!(
                "{} amplitudes given, {} expected",
                amps.len(),
                expected
            )));
        }
        Ok(StateVector {
            n_sites,
            has_probe,
            amps,
        })
    }

    pub fn basis_state(n_sites: usize, index: usize) -> Result<Self> {
        check_sites(n_sites)?;
        let dim = 1usize << n_sites;
        if index >= dim {
            return Err(Error::arg("basis index out of range"));
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = C64::new(1.0, 0.0);
        Self::new(n_sites, false, amps)
    }

    pub fn all_up(n_sites: usize) -> Result<Self> {
        Self::basis_state(n_sites, 0)
    }

    pub fn all_down(n_sites: usize) -> Result<Self> {
        Self::basis_state(n_sites, (1usize << n_sites.min(63)) - 1)
    }

    /// `(|↑…↑⟩ + |↓…↓⟩)/√2`.
    pub fn ghz_z(n_sites: usize) -> Result<Self> {
        check_sites(n_sites)?;
        let dim = 1usize << n_sites;
        let mut amps = vec![ZERO; dim];
        amps[0] = C64::new(FRAC_1_SQRT_2, 0.0);
        amps[dim - 1] += C64::new(FRAC_1_SQRT_2, 0.0);
        Self::new(n_sites, false, amps)
    }

    /// Symmetric state `Σ_k c_k |J, J-k⟩` from Dicke coefficients indexed by
    /// the number of down spins `k = 0..=N`.
    pub fn from_dicke(n_sites: usize, coeffs: &[C64]) -> Result<Self> {
        check_sites(n_sites)?;
        if coeffs.len() != n_sites + 1 {
            return Err(Error::arg("need N+1 Dicke coefficients"));
        }
        let dim = 1usize << n_sites;
        let norms: Vec<f64> = (0..=n_sites).map(|k| binomial(n_sites, k).sqrt()).collect();
        let amps = (0..dim)
            .map(|i| {
                let k = i.count_ones() as usize;
                coeffs[k] / norms[k]
            })
            .collect();
        Self::new(n_sites, false, amps)
    }

    #[inline]
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    #[inline]
    pub fn has_probe(&self) -> bool {
        self.has_probe
    }

    #[inline]
    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::arg("cannot normalize a zero or non-finite state"));
        }
        for a in self.amps.iter_mut() {
            *a /= n;
        }
        Ok(self)
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::arg("overlap of states with different dimensions"));
        }
        Ok(inner(&self.amps, &other.amps))
    }

    /// Euclidean distance `‖self − other‖`.
    pub fn distance(&self, other: &StateVector) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::arg("distance between states with different dimensions"));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Tensor product with a probe qubit in `probe[0]|↑⟩ + probe[1]|↓⟩`.
    pub fn attach_probe(&self, probe: [C64; 2]) -> Result<Self> {
        self.require_no_probe()?;
        let dim = self.amps.len();
        let mut amps = Vec::with_capacity(2 * dim);
        amps.extend(self.amps.iter().map(|a| a * probe[0]));
        amps.extend(self.amps.iter().map(|a| a * probe[1]));
        Self::new(self.n_sites, true, amps)
    }

    pub(crate) fn require_no_probe(&self) -> Result<()> {
        if self.has_probe {
            return Err(Error::arg("operation requires a chain state without probe"));
        }
        Ok(())
    }

    /// Projections `A_k = Σ_{popcount(i)=k} ψ_i` for `k = 0..=N`; the Dicke
    /// amplitudes are `A_k / sqrt(C(N,k))`.
    pub(crate) fn symmetric_sums(&self) -> Vec<C64> {
        let n = self.n_sites;
        let mask = (1usize << n) - 1;
        let mut sums = vec![ZERO; n + 1];
        for (i, a) in self.amps.iter().enumerate() {
            sums[(i & mask).count_ones() as usize] += a;
        }
        sums
    }

    /// Dicke amplitudes `⟨J, J-k|ψ⟩`, `k = 0..=N`.
    pub fn dicke_amplitudes(&self) -> Result<Vec<C64>> {
        self.require_no_probe()?;
        let n = self.n_sites;
        Ok(self
            .symmetric_sums()
            .into_iter()
            .enumerate()
            .map(|(k, s)| s / binomial(n, k).sqrt())
            .collect())
    }
}

/// `|+x⟩^{⊗N}`: every amplitude equals `2^{-N/2}`.
pub fn coherent_x_state(n_sites: usize) -> Result<StateVector> {
    check_sites(n_sites)?;
    let dim = 1usize << n_sites;
    let a = C64::new((dim as f64).sqrt().recip(), 0.0);
    StateVector::new(n_sites, false, vec![a; dim])
}

/// `S_α = Σ_i σ_i^α / 2`.
pub fn collective_operator(axis: SpinAxis, n_sites: usize) -> Result<HamiltonianOp> {
    check_sites(n_sites)?;
    let mut h = HamiltonianOp::new(n_sites)?;
    for i in 0..n_sites {
        h.push(0.5, &[(i, axis)])?;
    }
    Ok(h)
}

/// Single-site `exp(-i θ σ^α / 2)` in the (↑, ↓) basis, row-major.
fn site_rotation(axis: SpinAxis, angle: f64) -> [C64; 4] {
    let (s, c) = (angle / 2.0).sin_cos();
    match axis {
        SpinAxis::X => [
            C64::new(c, 0.0),
            C64::new(0.0, -s),
            C64::new(0.0, -s),
            C64::new(c, 0.0),
        ],
        SpinAxis::Y => [
            C64::new(c, 0.0),
            C64::new(-s, 0.0),
            C64::new(s, 0.0),
            C64::new(c, 0.0),
        ],
        SpinAxis::Z => [C64::new(c, -s), ZERO, ZERO, C64::new(c, s)],
    }
}

pub(crate) fn apply_site_gate(amps: &mut [C64], site: usize, g: &[C64; 4]) {
    let bit = 1usize << site;
    for i in 0..amps.len() {
        if i & bit != 0 {
            continue;
        }
        let (a, b) = (amps[i], amps[i | bit]);
        amps[i] = g[0] * a + g[1] * b;
        amps[i | bit] = g[2] * a + g[3] * b;
    }
}

/// `exp(-i·angle·S_axis) ψ`, acting on the chain sites only.
pub fn rotate(state: &StateVector, axis: SpinAxis, angle: f64) -> Result<StateVector> {
    if !angle.is_finite() {
        return Err(Error::arg("rotation angle must be finite"));
    }
    let mut out = state.clone();
    rotate_in_place(&mut out, axis, angle);
    Ok(out)
}

pub(crate) fn rotate_in_place(state: &mut StateVector, axis: SpinAxis, angle: f64) {
    let n = state.n_sites;
    if angle == 0.0 {
        return;
    }
    match axis {
        SpinAxis::Z => {
            // Diagonal: phase exp(-i angle m) on every chain configuration.
            let mask = (1usize << n) - 1;
            let phases: Vec<C64> = (0..=n)
                .map(|k| C64::from_polar(1.0, -angle * (n as f64 / 2.0 - k as f64)))
                .collect();
            for (i, a) in state.amps.iter_mut().enumerate() {
                *a *= phases[(i & mask).count_ones() as usize];
            }
        }
        _ => {
            let g = site_rotation(axis, angle);
            for site in 0..n {
                apply_site_gate(&mut state.amps, site, &g);
            }
        }
    }
}

/// Sequence of collective rotations, applied in list order (first entry acts
/// first on the state).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CollectiveFrame {
    rotations: Vec<(SpinAxis, f64)>,
}

impl CollectiveFrame {
    pub const MAX_ROTATIONS: usize = 4;

    pub fn new(rotations: Vec<(SpinAxis, f64)>) -> Result<Self> {
        if rotations.len() > Self::MAX_ROTATIONS {
            return Err(Error::arg("a frame holds at most four rotations"));
        }
        if rotations.iter().any(|(_, a)| !a.is_finite()) {
            return Err(Error::arg("frame angles must be finite"));
        }
        Ok(CollectiveFrame { rotations })
    }

    pub fn identity() -> Self {
        CollectiveFrame::default()
    }

    /// `exp(-i β S_y) exp(-i α S_z)`: the frame whose z axis points along the
    /// polar angle `β`, azimuth `-α` direction of the original sphere.
    pub fn tilt(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(vec![(SpinAxis::Z, alpha), (SpinAxis::Y, beta)])
    }

    pub fn rotations(&self) -> &[(SpinAxis, f64)] {
        &self.rotations
    }

    pub fn apply(&self, state: &StateVector) -> StateVector {
        let mut out = state.clone();
        for &(axis, angle) in &self.rotations {
            rotate_in_place(&mut out, axis, angle);
        }
        out
    }
}

/// Real Wigner small-d matrix `d^J_{m'm}(β) = ⟨J m'| exp(-iβ J_y) |J m⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerDTable {
    two_j: usize,
    beta: f64,
    /// Row-major over `(m' + J, m + J)`.
    entries: Vec<f64>,
}

impl WignerDTable {
    pub fn two_j(&self) -> usize {
        self.two_j
    }

    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn dim(&self) -> usize {
        self.two_j + 1
    }

    /// Entry by offsets `m' + J`, `m + J`.
    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim() + col]
    }

    /// Entry by magnetic quantum numbers; `None` off the `-J..=J` ladder.
    pub fn get(&self, m_row: f64, m_col: f64) -> Option<f64> {
        let to_idx = |m: f64| {
            let x = m + self.j();
            let r = x.round();
            ((x - r).abs() < 1e-9 && r >= 0.0 && r <= self.two_j as f64).then_some(r as usize)
        };
        Some(self.at(to_idx(m_row)?, to_idx(m_col)?))
    }
}

/// `J_y` in the standard basis ordered `m = -J..=J` (Condon–Shortley).
pub(crate) fn jy_matrix(two_j: usize) -> CMatrix {
    let j = two_j as f64 / 2.0;
    let dim = two_j + 1;
    let mut m = CMatrix::zeros(dim);
    for c in 0..two_j {
        let mz = c as f64 - j;
        let raise = (j * (j + 1.0) - mz * (mz + 1.0)).sqrt();
        // ⟨m+1|J_y|m⟩ = raise / (2i)
        m[(c + 1, c)] = C64::new(0.0, -raise / 2.0);
        m[(c, c + 1)] = C64::new(0.0, raise / 2.0);
    }
    m
}

/// Wigner d-matrix for total spin `two_j / 2`, built from the eigenbasis of
/// `J_y`.
pub fn wigner_d(two_j: usize, beta: f64) -> Result<WignerDTable> {
    if !beta.is_finite() {
        return Err(Error::arg("rotation angle must be finite"));
    }
    let dim = two_j + 1;
    let eig = eigh(&jy_matrix(two_j))?;
    let v = &eig.vectors;
    let phases: Vec<C64> = eig
        .values
        .iter()
        .map(|&l| C64::from_polar(1.0, -beta * l))
        .collect();
    let mut entries = Vec::with_capacity(dim * dim);
    for r in 0..dim {
        for c in 0..dim {
            let z: C64 = (0..dim).map(|k| v[(r, k)] * phases[k] * v[(c, k)].conj()).sum();
            entries.push(z.re);
        }
    }
    Ok(WignerDTable {
        two_j,
        beta,
        entries,
    })
}

/// `(m, p_m)` pairs for `m = -N/2 ..= N/2` ascending.
pub fn magnetization_distribution(state: &StateVector) -> Result<Vec<(f64, f64)>> {
    state.require_no_probe()?;
    let n = state.n_sites;
    let mut p = vec![0.0; n + 1];
    for (i, a) in state.amps.iter().enumerate() {
        p[i.count_ones() as usize] += a.norm_sqr();
    }
    // k down spins ↔ m = N/2 - k, so reverse for ascending m.
    Ok((0..=n)
        .rev()
        .map(|k| (n as f64 / 2.0 - k as f64, p[k]))
        .collect())
}

/// Projector on the total-spin `S = N/2` sector, kept as its `N+1`
/// orthonormal Dicke vectors.
#[derive(Debug, Clone)]
pub struct SymmetricProjector {
    n_sites: usize,
    basis: Vec<Vec<C64>>,
}

impl SymmetricProjector {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Dicke vector `|J, J-k⟩` as a full amplitude array.
    pub fn basis_vector(&self, k: usize) -> &[C64] {
        &self.basis[k]
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        self.check(state)?;
        let mut out = vec![ZERO; state.dim()];
        for b in &self.basis {
            let c = inner(b, state.amplitudes());
            for (o, x) in out.iter_mut().zip(b) {
                *o += c * x;
            }
        }
        StateVector::new(self.n_sites, false, out)
    }

    /// `⟨ψ|Π|ψ⟩`.
    pub fn fidelity(&self, state: &StateVector) -> Result<f64> {
        self.check(state)?;
        Ok(self
            .basis
            .iter()
            .map(|b| inner(b, state.amplitudes()).norm_sqr())
            .sum())
    }

    /// Dense `Π` (tests and small systems).
    pub fn dense(&self) -> CMatrix {
        let dim = 1usize << self.n_sites;
        let mut m = CMatrix::zeros(dim);
        for b in &self.basis {
            for r in 0..dim {
                if b[r] == ZERO {
                    continue;
                }
                for c in 0..dim {
                    m[(r, c)] += b[r] * b[c].conj();
                }
            }
        }
        m
    }

    fn check(&self, state: &StateVector) -> Result<()> {
        state.require_no_probe()?;
        if state.n_sites() != self.n_sites {
            return Err(Error::arg("projector and state have different chain lengths"));
        }
        Ok(())
    }
}

pub fn symmetric_projector(n_sites: usize) -> Result<SymmetricProjector> {
    check_sites(n_sites)?;
    check_dense(n_sites)?;
    let dim = 1usize << n_sites;
    let basis = (0..=n_sites)
        .map(|k| {
            let a = binomial(n_sites, k).sqrt().recip();
            (0..dim)
                .map(|i| if i.count_ones() as usize == k { C64::new(a, 0.0) } else { ZERO })
                .collect()
        })
        .collect();
    Ok(SymmetricProjector { n_sites, basis })
}
