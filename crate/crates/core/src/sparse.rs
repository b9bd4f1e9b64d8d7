//! Complex sparse matrices and exponential action on vectors.
//!
//! The Fock-space backend works at dimensions up to 64³ = 262144, where dense
//! operators (let alone dense exponentials) are out of the question. Mode
//! operators and everything composed from them have only a handful of entries
//! per column, so a compressed-sparse-column layout keeps every product and
//! matrix-vector apply cheap.
//!
//! [`expm_action`] computes exp(A)·v without ever forming exp(A): A is split
//! into s substeps so that ‖A/s‖₁ stays small, and each substep is a plain
//! Taylor sum of matrix-vector products with a fixed, a-priori chosen order.
//! Summation order is fixed, so results are bit-reproducible run to run.

use num_complex::Complex64 as C64;

use crate::{Error, Result};

// Per-substep 1-norm target. Small enough that the alternating-sum roundoff
// stays near machine precision, large enough to keep the substep count low.
const SUBSTEP_NORM: f64 = 2.0;
const MAX_TAYLOR_TERMS: usize = 96;

/// Square complex sparse matrix in compressed-sparse-column form.
#[derive(Debug, Clone)]
pub struct CsMat {
    dim: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    vals: Vec<C64>,
}

impl CsMat {
    /// Build from (row, col, value) triplets; duplicates are summed and exact
    /// zeros dropped.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, C64)>) -> Self {
        triplets.retain(|&(_, _, v)| v != C64::new(0.0, 0.0));
        triplets.sort_unstable_by_key(|&(r, c, _)| (c, r));
        let mut col_ptr = vec![0usize; dim + 1];
        let mut row_idx: Vec<usize> = Vec::with_capacity(triplets.len());
        let mut vals: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            debug_assert!(r < dim && c < dim, "triplet out of range");
            if last == Some((c, r)) {
                *vals.last_mut().unwrap() += v;
            } else {
                row_idx.push(r);
                vals.push(v);
                col_ptr[c + 1] += 1;
                last = Some((c, r));
            }
        }
        for c in 0..dim {
            col_ptr[c + 1] += col_ptr[c];
        }
        Self {
            dim,
            col_ptr,
            row_idx,
            vals,
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            col_ptr: vec![0; dim + 1],
            row_idx: Vec::new(),
            vals: Vec::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let triplets = (0..dim).map(|i| (i, i, C64::new(1.0, 0.0))).collect();
        Self::from_triplets(dim, triplets)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// y = A·x.
    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.dim, "vector length mismatch");
        let mut y = vec![C64::new(0.0, 0.0); self.dim];
        for col in 0..self.dim {
            let xc = x[col];
            if xc == C64::new(0.0, 0.0) {
                continue;
            }
            for k in self.col_ptr[col]..self.col_ptr[col + 1] {
                y[self.row_idx[k]] += self.vals[k] * xc;
            }
        }
        y
    }

    /// A + B.
    pub fn add(&self, other: &CsMat) -> CsMat {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut triplets = self.triplets();
        triplets.extend(other.triplets());
        CsMat::from_triplets(self.dim, triplets)
    }

    /// s·A.
    pub fn scaled(&self, s: C64) -> CsMat {
        let mut out = self.clone();
        for v in &mut out.vals {
            *v *= s;
        }
        out
    }

    /// A·B; cheap here because our operators carry few entries per column.
    pub fn matmul(&self, other: &CsMat) -> CsMat {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let dim = self.dim;
        let mut col_ptr = vec![0usize; dim + 1];
        let mut row_idx = Vec::new();
        let mut vals = Vec::new();
        // Dense scratch column with an occupancy stamp to avoid clearing.
        let mut scratch = vec![C64::new(0.0, 0.0); dim];
        let mut stamp = vec![usize::MAX; dim];
        let mut touched: Vec<usize> = Vec::new();
        for col in 0..dim {
            touched.clear();
            for kb in other.col_ptr[col]..other.col_ptr[col + 1] {
                let b_row = other.row_idx[kb];
                let b_val = other.vals[kb];
                for ka in self.col_ptr[b_row]..self.col_ptr[b_row + 1] {
                    let r = self.row_idx[ka];
                    if stamp[r] != col {
                        stamp[r] = col;
                        scratch[r] = C64::new(0.0, 0.0);
                        touched.push(r);
                    }
                    scratch[r] += self.vals[ka] * b_val;
                }
            }
            touched.sort_unstable();
            for &r in &touched {
                if scratch[r] != C64::new(0.0, 0.0) {
                    row_idx.push(r);
                    vals.push(scratch[r]);
                }
            }
            col_ptr[col + 1] = row_idx.len();
        }
        CsMat {
            dim,
            col_ptr,
            row_idx,
            vals,
        }
    }

    /// Conjugate transpose A†.
    pub fn adjoint(&self) -> CsMat {
        let triplets = self
            .triplets()
            .into_iter()
            .map(|(r, c, v)| (c, r, v.conj()))
            .collect();
        CsMat::from_triplets(self.dim, triplets)
    }

    /// Maximum absolute column sum ‖A‖₁.
    pub fn one_norm(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for col in 0..self.dim {
            let s: f64 = (self.col_ptr[col]..self.col_ptr[col + 1])
                .map(|k| self.vals[k].norm())
                .sum();
            worst = worst.max(s);
        }
        worst
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.vals.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn triplets(&self) -> Vec<(usize, usize, C64)> {
        let mut out = Vec::with_capacity(self.nnz());
        for col in 0..self.dim {
            for k in self.col_ptr[col]..self.col_ptr[col + 1] {
                out.push((self.row_idx[k], col, self.vals[k]));
            }
        }
        out
    }
}

/// Euclidean norm of a complex vector.
pub fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// ⟨a|b⟩ = Σ conj(a_i)·b_i.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    assert_eq!(a.len(), b.len(), "vector length mismatch");
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// exp(A)·v by scaled Taylor steps.
///
/// The remainder is kept below `tol` in the vector 2-norm: the per-substep
/// Taylor order is chosen so its a-priori tail bound is below `tol/s`, which
/// is conservative for the anti-Hermitian generators this crate feeds in
/// (their exponentials have unit spectral norm, so substep errors do not
/// amplify). Fails with a resource error when more than `max_substeps`
/// substeps would be needed.
pub fn expm_action(a: &CsMat, v: &[C64], tol: f64, max_substeps: usize) -> Result<Vec<C64>> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if v.len() != a.dim() {
        return Err(Error::InvalidArgument(format!(
            "vector length {} does not match matrix dimension {}",
            v.len(),
            a.dim()
        )));
    }
    let norm = a.one_norm();
    if norm == 0.0 {
        return Ok(v.to_vec());
    }
    let substeps = ((norm / SUBSTEP_NORM).ceil() as usize).max(1);
    if substeps > max_substeps {
        return Err(Error::Resource(format!(
            "exp action needs {substeps} substeps (1-norm {norm:.3e}), budget is {max_substeps}"
        )));
    }
    let theta = norm / substeps as f64;
    let tol_sub = tol / substeps as f64;
    let order = taylor_order(theta, tol_sub).ok_or_else(|| {
        Error::Resource(format!(
            "Taylor series would not reach tolerance {tol_sub:.3e} within {MAX_TAYLOR_TERMS} terms"
        ))
    })?;

    let inv_s = 1.0 / substeps as f64;
    let mut w = v.to_vec();
    for _ in 0..substeps {
        let mut acc = w.clone();
        let mut term = w;
        for k in 1..=order {
            term = a.apply(&term);
            let scale = inv_s / k as f64;
            for (t, a_i) in term.iter_mut().zip(acc.iter_mut()) {
                *t *= scale;
                *a_i += *t;
            }
            if term.iter().all(|x| *x == C64::new(0.0, 0.0)) {
                break;
            }
        }
        w = acc;
    }
    Ok(w)
}

// Smallest order n with e^theta-safe tail bound theta^{n+1}/(n+1)! /
// (1 - theta/(n+2)) <= tol_sub, relative to a unit-norm vector.
fn taylor_order(theta: f64, tol_sub: f64) -> Option<usize> {
    let mut term = 1.0f64;
    for n in 1..=MAX_TAYLOR_TERMS {
        term *= theta / n as f64;
        let geo = 1.0 - theta / (n as f64 + 2.0);
        if geo > 0.0 && term / geo <= tol_sub {
            return Some(n);
        }
    }
    None
}
