//! Wigner function of the squeezed vacuum.
//!
//! Closed form: W(q, p) = π⁻³ exp(−qᵀe^{2Λ}q − pᵀe^{−2Λ}p), a positive
//! Gaussian normalized to ∫W = 1 because det e^{2Λ}·det e^{−2Λ} = 1. The
//! Λ = 0 limit is the product of three vacuum Wigner functions
//! π⁻¹ exp(−q_i² − p_i²), which pins the normalization convention.
//!
//! Numerical oracle: the displaced-parity form W(q, p) =
//! π⁻³ ⟨ψ| D(α) Π D†(α) |ψ⟩ with α_i = (q_i + i p_i)/√2, D the product of
//! single-mode displacements (applied by exponential action of
//! α a† − α* a) and Π = (−1)^{n₁+n₂+n₃} the total parity. The oracle knows
//! nothing about Λ; it only sees the truncated state vector.

use num_complex::Complex64 as C64;

use crate::fock::{self, FockState};
use crate::generator::{det3, GeneratorMatrix, Sign};
use crate::sparse;
use crate::{ensure_finite, Error, Result};

const PI: f64 = std::f64::consts::PI;
// Exponential-action settings for the displacement operators.
const DISPLACEMENT_TOL: f64 = 1e-11;
const DISPLACEMENT_SUBSTEPS: usize = 512;

/// A point of six-dimensional phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub q: [f64; 3],
    pub p: [f64; 3],
}

impl PhasePoint {
    pub fn new(q: [f64; 3], p: [f64; 3]) -> Result<Self> {
        for (i, v) in q.iter().enumerate() {
            ensure_finite(&format!("q{}", i + 1), *v)?;
        }
        for (i, v) in p.iter().enumerate() {
            ensure_finite(&format!("p{}", i + 1), *v)?;
        }
        Ok(Self { q, p })
    }

    pub fn origin() -> Self {
        Self {
            q: [0.0; 3],
            p: [0.0; 3],
        }
    }

    /// The same point with one coordinate replaced.
    pub fn with_axis(mut self, axis: Axis, value: f64) -> Self {
        match axis {
            Axis::Q1 => self.q[0] = value,
            Axis::Q2 => self.q[1] = value,
            Axis::Q3 => self.q[2] = value,
            Axis::P1 => self.p[0] = value,
            Axis::P2 => self.p[1] = value,
            Axis::P3 => self.p[2] = value,
        }
        self
    }

    pub fn coordinate(&self, axis: Axis) -> f64 {
        match axis {
            Axis::Q1 => self.q[0],
            Axis::Q2 => self.q[1],
            Axis::Q3 => self.q[2],
            Axis::P1 => self.p[0],
            Axis::P2 => self.p[1],
            Axis::P3 => self.p[2],
        }
    }
}

/// One of the six phase-space coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Q1,
    Q2,
    Q3,
    P1,
    P2,
    P3,
}

impl Axis {
    pub const ALL: [Axis; 6] = [Axis::Q1, Axis::Q2, Axis::Q3, Axis::P1, Axis::P2, Axis::P3];

    pub fn label(&self) -> &'static str {
        match self {
            Axis::Q1 => "q1",
            Axis::Q2 => "q2",
            Axis::Q3 => "q3",
            Axis::P1 => "p1",
            Axis::P2 => "p2",
            Axis::P3 => "p3",
        }
    }

    pub fn parse(s: &str) -> Option<Axis> {
        Axis::ALL.iter().copied().find(|a| a.label() == s)
    }
}

/// A linearly spaced sweep along one coordinate.
#[derive(Debug, Clone, Copy)]
pub struct AxisSpec {
    pub axis: Axis,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

/// Up to two swept coordinates; the rest stay fixed at `fixed`.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub sweeps: Vec<AxisSpec>,
    pub fixed: PhasePoint,
}

impl GridSpec {
    /// A single point, no sweeps.
    pub fn point(fixed: PhasePoint) -> Self {
        Self {
            sweeps: Vec::new(),
            fixed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.sweeps.len() > 2 {
            return Err(Error::InvalidArgument(format!(
                "at most 2 swept axes supported, got {}",
                self.sweeps.len()
            )));
        }
        for (i, s) in self.sweeps.iter().enumerate() {
            ensure_finite("sweep min", s.min)?;
            ensure_finite("sweep max", s.max)?;
            if s.count < 2 {
                return Err(Error::InvalidArgument(format!(
                    "swept axis {} needs at least 2 points, got {}",
                    s.axis.label(),
                    s.count
                )));
            }
            if s.min > s.max {
                return Err(Error::InvalidArgument(format!(
                    "swept axis {}: min {} above max {}",
                    s.axis.label(),
                    s.min,
                    s.max
                )));
            }
            if self.sweeps[..i].iter().any(|prev| prev.axis == s.axis) {
                return Err(Error::InvalidArgument(format!(
                    "axis {} swept twice",
                    s.axis.label()
                )));
            }
        }
        Ok(())
    }

    /// All grid points in row-major sweep order (first sweep outermost).
    pub fn points(&self) -> Vec<PhasePoint> {
        let lattice =
            |s: &AxisSpec, i: usize| s.min + (s.max - s.min) * i as f64 / (s.count - 1) as f64;
        match self.sweeps.len() {
            0 => vec![self.fixed],
            1 => {
                let s = self.sweeps[0];
                (0..s.count)
                    .map(|i| self.fixed.with_axis(s.axis, lattice(&s, i)))
                    .collect()
            }
            _ => {
                let (s0, s1) = (self.sweeps[0], self.sweeps[1]);
                let mut out = Vec::with_capacity(s0.count * s1.count);
                for i in 0..s0.count {
                    for j in 0..s1.count {
                        out.push(
                            self.fixed
                                .with_axis(s0.axis, lattice(&s0, i))
                                .with_axis(s1.axis, lattice(&s1, j)),
                        );
                    }
                }
                out
            }
        }
    }
}

/// Closed-form Wigner values over a grid.
#[derive(Debug, Clone)]
pub struct WignerGrid {
    spec: GridSpec,
    values: Vec<f64>,
}

impl WignerGrid {
    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// (point, value) rows in emission order.
    pub fn rows(&self) -> Vec<(PhasePoint, f64)> {
        self.spec
            .points()
            .into_iter()
            .zip(self.values.iter().copied())
            .collect()
    }
}

/// Closed-form Wigner function of the squeezed vacuum at one point.
pub fn wigner_closed_form(mu: f64, nu: f64, pt: &PhasePoint) -> Result<f64> {
    let doubled = GeneratorMatrix::new(mu, nu)?.doubled();
    let e_pos = doubled.exp_closed_form(Sign::Plus);
    let e_neg = doubled.exp_closed_form(Sign::Minus);
    let quad = |m: &ndarray::Array2<f64>, v: &[f64; 3]| -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += v[i] * m[[i, j]] * v[j];
            }
        }
        s
    };
    Ok((-(quad(&e_pos, &pt.q)) - quad(&e_neg, &pt.p)).exp() / PI.powi(3))
}

/// Displaced-parity Wigner value measured on a truncated state.
///
/// The state must be normalized with tail mass below 1e-8, and the
/// displacement must keep the support inside the cutoff; otherwise a
/// precision error is returned.
pub fn wigner_numeric(state: &FockState, pt: &PhasePoint) -> Result<f64> {
    let tail = state.tail_mass();
    if tail > 1e-8 {
        return Err(Error::Precision(format!(
            "input tail mass {tail:.3e} too large for a trustworthy Wigner value"
        )));
    }
    let norm = state.norm();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidArgument(format!(
            "wigner_numeric expects a normalized state, got norm {norm:.8}"
        )));
    }
    let cutoff = state.cutoff();
    // φ = D†(α) ψ, one mode at a time (the three displacements commute).
    let mut phi = state.amplitudes().to_vec();
    for mode in 0..3 {
        let alpha = C64::new(pt.q[mode], pt.p[mode]) * std::f64::consts::FRAC_1_SQRT_2;
        if alpha == C64::new(0.0, 0.0) {
            continue;
        }
        let gen = fock::displacement_generator(cutoff, mode, alpha).scaled(C64::new(-1.0, 0.0));
        phi = sparse::expm_action(&gen, &phi, DISPLACEMENT_TOL, DISPLACEMENT_SUBSTEPS)?;
    }
    let displaced_tail: f64 = phi
        .iter()
        .enumerate()
        .filter(|(idx, _)| cutoff.multi_index(*idx).contains(&cutoff.n_max()))
        .map(|(_, a)| a.norm_sqr())
        .sum();
    if displaced_tail > 1e-6 {
        return Err(Error::Precision(format!(
            "displacement pushed tail mass to {displaced_tail:.3e}; raise the cutoff"
        )));
    }
    let mut w = 0.0;
    for (idx, a) in phi.iter().enumerate() {
        let n = cutoff.multi_index(idx);
        let sign = if (n[0] + n[1] + n[2]) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        w += sign * a.norm_sqr();
    }
    Ok(w / PI.powi(3))
}

/// The analytic normalization integral ∫ W d³q d³p, evaluated through the
/// Gaussian integral π^{3/2}/√det of each factor. Equals 1 because the two
/// determinants are mutual inverses.
pub fn wigner_marginal_norm(mu: f64, nu: f64) -> Result<f64> {
    let doubled = GeneratorMatrix::new(mu, nu)?.doubled();
    let det_pos = det3(&doubled.exp_closed_form(Sign::Plus));
    let det_neg = det3(&doubled.exp_closed_form(Sign::Minus));
    Ok(1.0 / (det_pos * det_neg).sqrt())
}

/// Closed-form Wigner function evaluated on a grid, deterministic ordering.
pub fn wigner_grid(mu: f64, nu: f64, spec: GridSpec) -> Result<WignerGrid> {
    spec.validate()?;
    let mut values = Vec::new();
    for pt in spec.points() {
        values.push(wigner_closed_form(mu, nu, &pt)?);
    }
    Ok(WignerGrid { spec, values })
}
