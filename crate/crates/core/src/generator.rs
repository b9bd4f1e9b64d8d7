//! Quadratic generator of the three-mode squeeze and its closed-form
//! exponential.
//!
//! Written on quadratures, S₃ = exp[i Q_i Λ_ij P_j] with the real symmetric
//! coupling matrix
//!
//! ```text
//!         ⎛ 0  μ  ν ⎞
//!     Λ = ⎜ μ  0  0 ⎟ ,    r = √(μ² + ν²),  cos θ = μ/r,  sin θ = ν/r.
//!         ⎝ ν  0  0 ⎠
//! ```
//!
//! Λ = r·H with H = e₁vᵀ + v e₁ᵀ for the unit vector v = (0, cos θ, sin θ),
//! and H³ = H, so the exponential closes after two powers:
//!
//! ```text
//!     e^{±Λ} = I ± sinh(r)·H + (cosh(r) − 1)·H².
//! ```
//!
//! S₃ transforms quadratures as Q → e^{−Λ}Q, P → e^{Λ}P, and mode operators
//! by the Bogoliubov mix a_k → Σ_i (cosh Λ)_{ki} a_i ∓ (sinh Λ)_{ki} a_i†.
//!
//! Mode labels 1, 2, 3 map to array indices 0, 1, 2 throughout the crate;
//! matrices are dense row-major 3×3 reals.

use ndarray::Array2;

use crate::{ensure_finite, expm, Result};

/// Sign of the exponent in e^{±Λ}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Direction of a Bogoliubov coefficient table.
///
/// `Inverse` expresses S₃⁻¹ a_k S₃, `Forward` expresses S₃ a_k S₃⁻¹.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// The coupling matrix Λ together with its polar parameters (r, θ).
///
/// θ is normalized to [0, 2π); when r = 0 the angle is undefined and set to
/// 0 by convention, which makes every closed form below a continuous limit
/// (all matrices reduce to the identity).
#[derive(Debug, Clone)]
pub struct GeneratorMatrix {
    mu: f64,
    nu: f64,
    lambda: Array2<f64>,
    r: f64,
    theta: f64,
}

/// The pair (e^{−Λ}, e^{Λ}) governing how S₃ transforms Q- and P-quadratures.
///
/// Both matrices are symmetric and mutually inverse; see
/// [`SymplecticPair::inversion_residual`].
#[derive(Debug, Clone)]
pub struct SymplecticPair {
    pub exp_neg: Array2<f64>,
    pub exp_pos: Array2<f64>,
}

/// Coefficients of the linear Bogoliubov mix a_k → Σ_i A_{ki} a_i + B_{ki} a_i†.
#[derive(Debug, Clone)]
pub struct BogoliubovTable {
    /// Coefficients on the annihilation operators (cosh Λ).
    pub a_part: Array2<f64>,
    /// Coefficients on the creation operators (∓ sinh Λ).
    pub adag_part: Array2<f64>,
    pub direction: Direction,
}

impl GeneratorMatrix {
    /// Build Λ and its polar parameters from the couplings.
    pub fn new(mu: f64, nu: f64) -> Result<Self> {
        ensure_finite("mu", mu)?;
        ensure_finite("nu", nu)?;
        let mut lambda = Array2::zeros((3, 3));
        lambda[[0, 1]] = mu;
        lambda[[1, 0]] = mu;
        lambda[[0, 2]] = nu;
        lambda[[2, 0]] = nu;
        let r = mu.hypot(nu);
        let theta = if r == 0.0 {
            0.0
        } else {
            let t = nu.atan2(mu);
            if t < 0.0 {
                t + 2.0 * std::f64::consts::PI
            } else {
                t
            }
        };
        Ok(Self {
            mu,
            nu,
            lambda,
            r,
            theta,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Squeeze strength r = √(μ² + ν²).
    pub fn r(&self) -> f64 {
        self.r
    }

    /// Coupling angle θ ∈ [0, 2π); 0 when r = 0.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn lambda(&self) -> &Array2<f64> {
        &self.lambda
    }

    /// The generator with both couplings doubled: r → 2r at fixed θ.
    ///
    /// e^{±2Λ} enters every variance and Wigner formula; computing it as the
    /// closed form at doubled couplings (rather than squaring e^{±Λ}) keeps
    /// the two routes independent, and the squaring identity becomes a free
    /// consistency test.
    pub fn doubled(&self) -> Self {
        Self::new(2.0 * self.mu, 2.0 * self.nu).expect("finite couplings stay finite")
    }

    /// Closed-form e^{+Λ} or e^{−Λ}.
    pub fn exp_closed_form(&self, sign: Sign) -> Array2<f64> {
        let s = match sign {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        };
        let (h, m) = self.direction_matrices();
        let sh = s * self.r.sinh();
        let ch1 = self.r.cosh() - 1.0;
        let mut out = Array2::eye(3);
        for i in 0..3 {
            for j in 0..3 {
                out[[i, j]] += sh * h[[i, j]] + ch1 * m[[i, j]];
            }
        }
        out
    }

    /// Both closed-form exponentials as one value.
    pub fn symplectic_pair(&self) -> SymplecticPair {
        SymplecticPair {
            exp_neg: self.exp_closed_form(Sign::Minus),
            exp_pos: self.exp_closed_form(Sign::Plus),
        }
    }

    /// Bogoliubov coefficients of S₃^{∓1} a_k S₃^{±1}.
    ///
    /// The annihilation part is cosh Λ = I + (cosh r − 1)H² for either
    /// direction; the creation part is −sinh(r)H for `Inverse` and +sinh(r)H
    /// for `Forward`. At r = 0 this is the identity transform.
    pub fn bogoliubov(&self, direction: Direction) -> BogoliubovTable {
        let pair = self.symplectic_pair();
        let mut a_part = Array2::zeros((3, 3));
        let mut adag_part = Array2::zeros((3, 3));
        let dir_sign = match direction {
            Direction::Inverse => -1.0,
            Direction::Forward => 1.0,
        };
        for i in 0..3 {
            for j in 0..3 {
                a_part[[i, j]] = 0.5 * (pair.exp_pos[[i, j]] + pair.exp_neg[[i, j]]);
                adag_part[[i, j]] = dir_sign * 0.5 * (pair.exp_pos[[i, j]] - pair.exp_neg[[i, j]]);
            }
        }
        BogoliubovTable {
            a_part,
            adag_part,
            direction,
        }
    }

    // H (the unit-strength coupling pattern) and M = H² (the projector onto
    // the coupled subspace).
    fn direction_matrices(&self) -> (Array2<f64>, Array2<f64>) {
        let c = self.theta.cos();
        let s = self.theta.sin();
        let mut h = Array2::zeros((3, 3));
        h[[0, 1]] = c;
        h[[1, 0]] = c;
        h[[0, 2]] = s;
        h[[2, 0]] = s;
        let mut m = Array2::zeros((3, 3));
        m[[0, 0]] = 1.0;
        m[[1, 1]] = c * c;
        m[[2, 2]] = s * s;
        m[[1, 2]] = c * s;
        m[[2, 1]] = c * s;
        (h, m)
    }
}

impl SymplecticPair {
    /// Max-abs entry of e^{−Λ}·e^{Λ} − I.
    pub fn inversion_residual(&self) -> f64 {
        let prod = self.exp_neg.dot(&self.exp_pos);
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((prod[[i, j]] - target).abs());
            }
        }
        worst
    }
}

/// Determinant of a 3×3 matrix.
pub fn det3(m: &Array2<f64>) -> f64 {
    assert_eq!(m.dim(), (3, 3), "det3 expects a 3x3 matrix");
    m[[0, 0]] * (m[[1, 1]] * m[[2, 2]] - m[[1, 2]] * m[[2, 1]])
        - m[[0, 1]] * (m[[1, 0]] * m[[2, 2]] - m[[1, 2]] * m[[2, 0]])
        + m[[0, 2]] * (m[[1, 0]] * m[[2, 1]] - m[[1, 1]] * m[[2, 0]])
}

/// Verification oracle: matrix exponential of a small dense matrix by
/// scaling-and-squaring of a truncated Taylor series. See [`expm::expm_oracle`].
///
/// Kept re-exported here because the generator module is its main client:
/// the closed forms above must agree with it entrywise.
pub fn expm_oracle(m: &Array2<f64>) -> Result<Array2<f64>> {
    expm::expm_oracle(m)
}

impl BogoliubovTable {
    /// Residual of the canonical-commutator condition A·Aᵀ − B·Bᵀ = I
    /// (max-abs entry). Zero means the mix preserves [a_i, a_j†] = δ_ij.
    pub fn commutator_residual(&self) -> f64 {
        let aat = self.a_part.dot(&self.a_part.t());
        let bbt = self.adag_part.dot(&self.adag_part.t());
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((aat[[i, j]] - bbt[[i, j]] - target).abs());
            }
        }
        worst
    }

    /// Coefficients of applying `self` after `first`, as (a-part, a†-part).
    ///
    /// Substituting one linear mix into another (with real coefficients)
    /// composes as A = A₂A₁ + B₂B₁, B = A₂B₁ + B₂A₁.
    pub fn compose(&self, first: &BogoliubovTable) -> (Array2<f64>, Array2<f64>) {
        let a = self.a_part.dot(&first.a_part) + self.adag_part.dot(&first.adag_part);
        let b = self.a_part.dot(&first.adag_part) + self.adag_part.dot(&first.a_part);
        (a, b)
    }
}
