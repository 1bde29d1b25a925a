//! Hermitian operators written as real-weighted sums of Pauli strings.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;
use once_cell::race::OnceBox;

use crate::linalg::CMatrix;
use crate::spinspace::SpinAxis;
use crate::{Error, Result, MAX_SITES};

/// Most qubits any dense path accepts: a full chain plus the probe.
pub const MAX_DENSE_QUBITS: usize = MAX_SITES + 1;

/// Most qubits representable by the bit-mask encoding of a term.
pub const MAX_MASK_QUBITS: usize = 64;

/// `coeff * σ^{a1}_{s1} σ^{a2}_{s2} ...` on distinct sites.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coeff: f64,
    pub factors: Vec<(usize, SpinAxis)>,
    flip: u64,
    sign: u64,
    y_count: u32,
}

impl PauliTerm {
    pub fn new(coeff: f64, factors: &[(usize, SpinAxis)]) -> Result<Self> {
        if !coeff.is_finite() {
            return Err(Error::arg("non-finite Pauli coefficient"));
        }
        let (mut flip, mut sign, mut seen, mut y_count) = (0u64, 0u64, 0u64, 0u32);
        for &(site, axis) in factors {
            if site >= MAX_MASK_QUBITS {
                return Err(Error::Capacity {
                    requested: site + 1,
                    max: MAX_MASK_QUBITS,
                });
            }
            let bit = 1u64 << site;
            if seen & bit != 0 {
                return Err(Error::arg(format!("site {site} repeated in one Pauli string")));
            }
            seen |= bit;
            match axis {
                SpinAxis::X => flip |= bit,
                SpinAxis::Y => {
                    flip |= bit;
                    sign |= bit;
                    y_count += 1;
                }
                SpinAxis::Z => sign |= bit,
            }
        }
        Ok(PauliTerm {
            coeff,
            factors: factors.to_vec(),
            flip,
            sign,
            y_count,
        })
    }

    fn max_site(&self) -> Option<usize> {
        self.factors.iter().map(|&(s, _)| s).max()
    }

    /// Image of basis state `index`: `(index', amplitude)`.
    #[inline]
    pub fn act(&self, index: u64) -> (u64, C64) {
        // σ^y = i σ^x σ^z, so each Y contributes a factor i and a Z-type sign.
        let parity = (index & self.sign).count_ones() & 1;
        let s = if parity == 0 { self.coeff } else { -self.coeff };
        let amp = match self.y_count & 3 {
            0 => C64::new(s, 0.0),
            1 => C64::new(0.0, s),
            2 => C64::new(-s, 0.0),
            _ => C64::new(0.0, -s),
        };
        (index ^ self.flip, amp)
    }

    pub fn is_diagonal(&self) -> bool {
        self.flip == 0
    }
}

/// Hermitian operator on `n_qubits` spin-1/2 sites.
///
/// Matrix-free application is the main path; the dense matrix is built on
/// first request and cached. The cache is written at most once, so concurrent
/// readers observe either no matrix or the complete one.
#[derive(Debug, Default)]
pub struct HamiltonianOp {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
    dense: OnceBox<CMatrix>,
}

impl Clone for HamiltonianOp {
    fn clone(&self) -> Self {
        HamiltonianOp {
            n_qubits: self.n_qubits,
            terms: self.terms.clone(),
            dense: OnceBox::new(),
        }
    }
}

impl HamiltonianOp {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_MASK_QUBITS {
            return Err(Error::Capacity {
                requested: n_qubits,
                max: MAX_MASK_QUBITS,
            });
        }
        Ok(HamiltonianOp {
            n_qubits,
            terms: Vec::new(),
            dense: OnceBox::new(),
        })
    }

    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits)
    }

    /// Adds `coeff * Π σ`. Zero coefficients are dropped.
    pub fn push(&mut self, coeff: f64, factors: &[(usize, SpinAxis)]) -> Result<()> {
        let term = PauliTerm::new(coeff, factors)?;
        if let Some(s) = term.max_site() {
            if s >= self.n_qubits {
                return Err(Error::arg(format!(
                    "site {s} outside a {}-qubit operator",
                    self.n_qubits
                )));
            }
        }
        if coeff != 0.0 {
            self.terms.push(term);
            self.dense = OnceBox::new();
        }
        Ok(())
    }

    pub fn with_term(mut self, coeff: f64, factors: &[(usize, SpinAxis)]) -> Result<Self> {
        self.push(coeff, factors)?;
        Ok(self)
    }

    /// Sum of two operators on the same space.
    pub fn plus(&self, other: &HamiltonianOp) -> Result<HamiltonianOp> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::arg("operator sum over different qubit counts"));
        }
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        Ok(out)
    }

    pub fn scaled(&self, s: f64) -> HamiltonianOp {
        let mut out = self.clone();
        for t in out.terms.iter_mut() {
            t.coeff *= s;
        }
        out.terms.retain(|t| t.coeff != 0.0);
        out
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn dim(&self) -> Result<usize> {
        check_dense(self.n_qubits)?;
        Ok(1usize << self.n_qubits)
    }

    /// Nonzero images of a single basis state, with repeated targets merged.
    pub fn act_on_basis(&self, index: u64) -> Vec<(u64, C64)> {
        let mut out: Vec<(u64, C64)> = Vec::new();
        for t in &self.terms {
            let (j, a) = t.act(index);
            match out.iter_mut().find(|(k, _)| *k == j) {
                Some(slot) => slot.1 += a,
                None => out.push((j, a)),
            }
        }
        out
    }

    /// Matrix element `<row|H|col>` between basis states.
    pub fn element(&self, row: u64, col: u64) -> C64 {
        self.terms
            .iter()
            .map(|t| t.act(col))
            .filter(|(j, _)| *j == row)
            .map(|(_, a)| a)
            .sum()
    }

    /// `H psi` without materializing `H`.
    pub fn apply(&self, psi: &[C64]) -> Result<Vec<C64>> {
        let dim = self.dim()?;
        if psi.len() != dim {
            return Err(Error::arg(format!(
                "state of length {} applied to a {}-dimensional operator",
                psi.len(),
                dim
            )));
        }
        let mut out = vec![C64::new(0.0, 0.0); dim];
        for t in &self.terms {
            for (i, &a) in psi.iter().enumerate() {
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let (j, amp) = t.act(i as u64);
                out[j as usize] += amp * a;
            }
        }
        Ok(out)
    }

    /// `<psi|H|psi>` (real part; the imaginary part vanishes for Hermitian `H`).
    pub fn expectation(&self, psi: &[C64]) -> Result<f64> {
        let h = self.apply(psi)?;
        Ok(crate::linalg::inner(psi, &h).re)
    }

    /// Diagonal entries when every term is diagonal in the product basis.
    pub fn diagonal(&self) -> Option<Vec<f64>> {
        if !self.terms.iter().all(PauliTerm::is_diagonal) || self.dim().is_err() {
            return None;
        }
        let dim = 1usize << self.n_qubits;
        let mut d = vec![0.0; dim];
        for t in &self.terms {
            for (i, di) in d.iter_mut().enumerate() {
                *di += t.act(i as u64).1.re;
            }
        }
        Some(d)
    }

    /// Dense matrix, cached after the first call.
    pub fn dense(&self) -> Result<&CMatrix> {
        if let Some(m) = self.dense.get() {
            return Ok(m);
        }
        let dim = self.dim()?;
        let mut m = CMatrix::zeros(dim);
        for t in &self.terms {
            for col in 0..dim {
                let (row, amp) = t.act(col as u64);
                m[(row as usize, col)] += amp;
            }
        }
        Ok(self.dense.get_or_init(|| alloc::boxed::Box::new(m)))
    }

    pub fn is_dense_cached(&self) -> bool {
        self.dense.get().is_some()
    }
}

pub(crate) fn check_dense(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_DENSE_QUBITS {
        return Err(Error::Capacity {
            requested: n_qubits,
            max: MAX_DENSE_QUBITS,
        });
    }
    Ok(())
}
