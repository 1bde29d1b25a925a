//! Figures of merit: GHZ coherence and the Bell correlator, Wineland
//! squeezing, symmetric-sector fidelity and the harmonic content of the
//! probe signal.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64 as C64;

use crate::linalg::inner;
use crate::models::ModelSpec;
use crate::spinspace::{
    collective_operator, rotate, CollectiveFrame, SpinAxis, StateVector, SymmetricProjector,
};
use crate::{Error, Result};

/// GHZ coherence and Bell correlator `Q = N + log2 E`.
#[derive(Debug, Clone, PartialEq)]
pub struct BellResult {
    pub e: f64,
    /// `-∞` when `E = 0`.
    pub q: f64,
    pub frame: CollectiveFrame,
}

/// How the reading frame of the GHZ coherence is chosen.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum FrameMode {
    Identity,
    Fixed(CollectiveFrame),
    /// Maximize over `exp(-iβS_y) exp(-iαS_z)` (α applied first).
    #[default]
    Optimize,
}

/// `exp(-i π/2 S_y)`: the frame in which the probe readout sees the
/// extremal coherence.
pub fn y_aligned_frame() -> CollectiveFrame {
    CollectiveFrame::new(vec![(SpinAxis::Y, FRAC_PI_2)]).expect("finite angle")
}

/// Grid resolution of the frame scan along each angle.
pub const FRAME_GRID: usize = 64;

/// `E = |⟨↑^N|ψ'⟩|² |⟨↓^N|ψ'⟩|²` with `ψ'` the frame-rotated state.
pub fn ghz_coherence(state: &StateVector, frame: &CollectiveFrame) -> Result<f64> {
    state.require_no_probe()?;
    let rotated = frame.apply(state);
    let a = rotated.amplitudes();
    Ok(a[0].norm_sqr() * a[a.len() - 1].norm_sqr())
}

fn correlator(n_sites: usize, e: f64) -> f64 {
    if e > 0.0 {
        n_sites as f64 + e.log2()
    } else {
        f64::NEG_INFINITY
    }
}

/// GHZ coherence in the tilted frame, from the projections `A_k` onto the
/// magnetization sectors (only the symmetric part of the state contributes).
struct TiltEvaluator {
    n: usize,
    sums: Vec<C64>,
}

impl TiltEvaluator {
    fn coherence(&self, alpha: f64, beta: f64) -> f64 {
        let (s, c) = (beta / 2.0).sin_cos();
        let n = self.n;
        let (mut up, mut down) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        for (k, a) in self.sums.iter().enumerate() {
            let m = n as f64 / 2.0 - k as f64;
            let phased = a * C64::from_polar(1.0, -alpha * m);
            up += phased * (c.powi((n - k) as i32) * (-s).powi(k as i32));
            down += phased * (s.powi((n - k) as i32) * c.powi(k as i32));
        }
        up.norm_sqr() * down.norm_sqr()
    }

    fn optimize(&self) -> (f64, f64, f64) {
        let n = self.n;
        let da = 2.0 * PI / FRAME_GRID as f64;
        let db = PI / (FRAME_GRID - 1) as f64;
        // Separable tables: e^{-iα m_k} per α, and the β-dependent weights.
        let phases: Vec<Vec<C64>> = (0..FRAME_GRID)
            .map(|i| {
                (0..=n)
                    .map(|k| C64::from_polar(1.0, -(i as f64 * da) * (n as f64 / 2.0 - k as f64)))
                    .collect()
            })
            .collect();
        let weights: Vec<Vec<(f64, f64)>> = (0..FRAME_GRID)
            .map(|j| {
                let (s, c) = (j as f64 * db / 2.0).sin_cos();
                (0..=n)
                    .map(|k| {
                        (
                            c.powi((n - k) as i32) * (-s).powi(k as i32),
                            s.powi((n - k) as i32) * c.powi(k as i32),
                        )
                    })
                    .collect()
            })
            .collect();
        let mut best = (self.coherence(0.0, 0.0), 0.0, 0.0);
        let mut phased = vec![C64::new(0.0, 0.0); n + 1];
        for (i, ph) in phases.iter().enumerate() {
            for k in 0..=n {
                phased[k] = self.sums[k] * ph[k];
            }
            for (j, w) in weights.iter().enumerate() {
                let (mut up, mut down) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
                for k in 0..=n {
                    up += phased[k] * w[k].0;
                    down += phased[k] * w[k].1;
                }
                let e = up.norm_sqr() * down.norm_sqr();
                if e > best.0 {
                    best = (e, i as f64 * da, j as f64 * db);
                }
            }
        }
        // Compass search around the best grid point.
        let (mut e, mut a, mut b) = best;
        let (mut sa, mut sb) = (da, db);
        while sa > 1e-12 {
            let mut moved = false;
            for (ta, tb) in [(a + sa, b), (a - sa, b), (a, b + sb), (a, b - sb)] {
                let et = self.coherence(ta, tb);
                if et > e {
                    (e, a, b) = (et, ta, tb);
                    moved = true;
                }
            }
            if !moved {
                sa /= 2.0;
                sb /= 2.0;
            }
        }
        (e, a.rem_euclid(2.0 * PI), b)
    }
}

pub fn bell_q(state: &StateVector, mode: &FrameMode) -> Result<BellResult> {
    state.require_no_probe()?;
    let n = state.n_sites();
    let (e, frame) = match mode {
        FrameMode::Identity => {
            let f = CollectiveFrame::identity();
            (ghz_coherence(state, &f)?, f)
        }
        FrameMode::Fixed(f) => (ghz_coherence(state, f)?, f.clone()),
        FrameMode::Optimize => {
            let eval = TiltEvaluator {
                n,
                sums: state.symmetric_sums(),
            };
            let (e, a, b) = eval.optimize();
            (e, CollectiveFrame::tilt(a, b)?)
        }
    };
    Ok(BellResult {
        e,
        q: correlator(n, e),
        frame,
    })
}

/// Wineland squeezing parameter and the data it is built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingResult {
    pub xi2: f64,
    pub mean_spin: [f64; 3],
    /// Angle in the plane perpendicular to the mean spin, measured from the
    /// first basis vector returned by [`perpendicular_basis`], in `[0, π)`.
    pub optimal_angle: f64,
}

/// Mean-spin length below which squeezing is undefined.
pub const MEAN_SPIN_THRESHOLD: f64 = 1e-8;

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    v.map(|x| x / n)
}

/// Orthonormal `(e1, e2)` with `e1 × e2 = n` for a unit vector `n`.
pub fn perpendicular_basis(n: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    // Cross with the coordinate axis least aligned with n.
    let k = (0..3)
        .min_by(|&i, &j| n[i].abs().total_cmp(&n[j].abs()))
        .unwrap_or(0);
    let mut axis = [0.0; 3];
    axis[k] = 1.0;
    let e1 = normalize(cross(axis, n));
    let e2 = cross(n, e1);
    (e1, e2)
}

/// First and second moments `⟨S_α⟩` and `Re⟨S_α S_β⟩`.
pub fn spin_moments(state: &StateVector) -> Result<([f64; 3], [[f64; 3]; 3])> {
    state.require_no_probe()?;
    let n = state.n_sites();
    let psi = state.amplitudes();
    let mut v = Vec::with_capacity(3);
    for axis in SpinAxis::ALL {
        v.push(collective_operator(axis, n)?.apply(psi)?);
    }
    let mean = [0, 1, 2].map(|a| inner(psi, &v[a]).re);
    let mut second = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            second[a][b] = inner(&v[a], &v[b]).re;
        }
    }
    Ok((mean, second))
}

/// `ξ² = N (ΔS_⊥²)_min / |⟨S⟩|²`.
pub fn spin_squeezing(state: &StateVector) -> Result<SqueezingResult> {
    let (mean, second) = spin_moments(state)?;
    let length = (mean.iter().map(|x| x * x).sum::<f64>()).sqrt();
    if !(length >= MEAN_SPIN_THRESHOLD) {
        return Err(Error::UndefinedMeanSpin { length });
    }
    let cov = |u: [f64; 3], w: [f64; 3]| -> f64 {
        let mut s = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                s += u[a] * w[b] * (second[a][b] - mean[a] * mean[b]);
            }
        }
        s
    };
    let (e1, e2) = perpendicular_basis(normalize(mean));
    let (a, b, d) = (cov(e1, e1), cov(e1, e2), cov(e2, e2));
    let lambda_min = 0.5 * (a + d) - (0.25 * (a - d) * (a - d) + b * b).sqrt();
    let optimal_angle = (0.5 * (2.0 * b).atan2(a - d) + FRAC_PI_2).rem_euclid(PI);
    Ok(SqueezingResult {
        xi2: state.n_sites() as f64 * lambda_min / (length * length),
        mean_spin: mean,
        optimal_angle,
    })
}

/// `F_sym = ⟨ψ|Π|ψ⟩`.
pub fn symmetric_fidelity(state: &StateVector, projector: &SymmetricProjector) -> Result<f64> {
    projector.fidelity(state)
}

/// `exp(-iπ/2 S_x) exp(-iθ S_z) exp(-iπ/2 S_y) ψ`.
pub fn phase_probe_state(state: &StateVector, theta: f64) -> Result<StateVector> {
    state.require_no_probe()?;
    let s = rotate(state, SpinAxis::Y, FRAC_PI_2)?;
    let s = rotate(&s, SpinAxis::Z, theta)?;
    rotate(&s, SpinAxis::X, FRAC_PI_2)
}

/// Default number of phase samples, `4(N+1)`.
pub fn default_theta_points(n_sites: usize) -> usize {
    4 * (n_sites + 1)
}

/// `θ_j = 2πj/n_theta`.
pub fn theta_grid(n_theta: usize) -> Vec<f64> {
    (0..n_theta).map(|j| 2.0 * PI * j as f64 / n_theta as f64).collect()
}

pub(crate) fn check_theta_points(n_theta: usize, max_harmonic: usize) -> Result<()> {
    let required = 2 * max_harmonic + 1;
    if n_theta < required {
        return Err(Error::Aliasing {
            n_theta,
            max_harmonic,
            required,
        });
    }
    Ok(())
}

/// `|F_k|²` for `k = 0..=max_harmonic`, `F_k = (1/N_θ) Σ_j p(θ_j) e^{-ikθ_j}`.
pub fn harmonic_spectrum(p0_of_theta: &[f64], max_harmonic: usize) -> Result<Vec<f64>> {
    let n_theta = p0_of_theta.len();
    check_theta_points(n_theta, max_harmonic)?;
    Ok((0..=max_harmonic)
        .map(|k| {
            let f: C64 = p0_of_theta
                .iter()
                .enumerate()
                .map(|(j, &p)| {
                    let phase = -2.0 * PI * ((k * j) % n_theta) as f64 / n_theta as f64;
                    C64::from_polar(p, phase)
                })
                .sum();
            (f / n_theta as f64).norm_sqr()
        })
        .collect())
}

/// Ordered `(t, value)` records with an optional `|χ|t/π` axis.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub rescaled_axis: Option<Vec<f64>>,
    pub model: Option<ModelSpec>,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::arg("times and values differ in length"));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::arg("times must be strictly increasing"));
        }
        Ok(TimeSeries {
            times,
            values,
            rescaled_axis: None,
            model: None,
        })
    }

    /// Adds the `|χ|t/π` axis.
    pub fn with_chi(mut self, chi: f64) -> Self {
        self.rescaled_axis = Some(self.times.iter().map(|t| chi.abs() * t / PI).collect());
        self
    }

    pub fn with_model(mut self, spec: ModelSpec) -> Self {
        self.model = Some(spec);
        self
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `(t, value)` of the largest value (first one on ties).
    pub fn argmax(&self) -> Option<(f64, f64)> {
        let mut best: Option<(f64, f64)> = None;
        for (&t, &v) in self.times.iter().zip(&self.values) {
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((t, v));
            }
        }
        best
    }

    /// `(t, value)` of the smallest value (first one on ties).
    pub fn argmin(&self) -> Option<(f64, f64)> {
        let mut best: Option<(f64, f64)> = None;
        for (&t, &v) in self.times.iter().zip(&self.values) {
            if best.is_none_or(|(_, b)| v < b) {
                best = Some((t, v));
            }
        }
        best
    }
}
