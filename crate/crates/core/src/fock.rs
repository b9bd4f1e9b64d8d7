//! Truncated three-mode Fock-space backend.
//!
//! States live on the photon-number basis |n₁, n₂, n₃⟩ with a common per-mode
//! cutoff n_max (local dimension d = n_max + 1). The flat index is
//! `(n₁·d + n₂)·d + n₃`, i.e. **n₁ is slowest-varying**; this is the one
//! place that convention is defined, everything else goes through
//! [`FockCutoff::flat_index`] / [`FockCutoff::multi_index`]. Mode labels
//! 1, 2, 3 map to indices 0, 1, 2.
//!
//! The squeeze operator is applied two independent ways:
//!
//! * [`apply_s3_numeric`] exponentiates the anti-Hermitian generator
//!   K = μ(a₁a₂ − a₁†a₂†) + ν(a₁a₃ − a₁†a₃†) onto the state by sparse
//!   exponential action — numerically exact up to the requested tolerance
//!   and the truncation itself.
//! * [`squeezed_vacuum_analytic`] writes the squeezed vacuum
//!   S₃|000⟩ = sech r · exp[−(a₂†cos θ + a₃†sin θ)a₁†tanh r]|000⟩ directly:
//!   amplitude sech r (−tanh r)ⁿ √C(n,k) cosⁿ⁻ᵏθ sinᵏθ at (n, n−k, k).
//!
//! Truncated analytic states are deliberately **not** renormalized; the lost
//! tail is what the cross-backend fidelity checks are sensitive to.

use num_complex::Complex64 as C64;

use crate::generator::GeneratorMatrix;
use crate::sparse::{self, CsMat};
use crate::{ensure_finite, Error, Result};

/// Default bound on the total dimension d³ (64³).
pub const DEFAULT_DIM_BUDGET: usize = 64 * 64 * 64;
/// Largest per-mode photon number the default budget allows.
pub const MAX_N_MAX: usize = 63;
/// Default truncation-tail budget ε_trunc for analytic states.
pub const DEFAULT_TRUNCATION_EPS: f64 = 1e-10;
// Above this value of tanh r no affordable cutoff is meaningful.
const TANH_GUARD: f64 = 0.999;
// Budget for exp-action substeps before reporting a resource error.
const MAX_SUBSTEPS: usize = 4096;
// Budget for terminating operator series (all our series hit an exact zero
// long before this).
const MAX_SERIES_TERMS: usize = 512;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Per-mode photon-number cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockCutoff {
    n_max: usize,
}

impl FockCutoff {
    /// A cutoff with per-mode maximum photon number `n_max` ≥ 1, subject to
    /// the d³ dimension budget.
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::InvalidArgument("cutoff must be at least 1".into()));
        }
        if n_max > MAX_N_MAX {
            return Err(Error::InvalidArgument(format!(
                "cutoff {n_max} exceeds the dimension budget (max {MAX_N_MAX})"
            )));
        }
        Ok(Self { n_max })
    }

    /// Smallest cutoff keeping both the boundary mass and the omitted mass of
    /// the squeezed vacuum at couplings (μ, ν) below `eps`.
    ///
    /// The pair-number distribution of the squeezed vacuum is geometric,
    /// P(n) = sech²r · tanh²ⁿr, so the boundary mass at level N is
    /// (1 − tanh²r)·tanh²ᴺr and the truncated-away mass is tanh²⁽ᴺ⁺¹⁾r;
    /// the bound solves for the larger of the two.
    pub fn auto_for_squeezing(mu: f64, nu: f64, eps: f64) -> Result<Self> {
        ensure_finite("mu", mu)?;
        ensure_finite("nu", nu)?;
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "truncation budget must lie in (0, 1), got {eps}"
            )));
        }
        let r = mu.hypot(nu);
        let t = r.tanh();
        if t >= TANH_GUARD {
            return Err(Error::InvalidArgument(format!(
                "squeeze strength r = {r:.4} too large (tanh r must stay below {TANH_GUARD})"
            )));
        }
        if t == 0.0 {
            return Self::new(2);
        }
        let t2 = t * t;
        let worst_factor = t2.max(1.0 - t2);
        let needed = ((eps / worst_factor).ln() / (2.0 * t.ln())).ceil().max(2.0);
        let n = needed as usize;
        if n > MAX_N_MAX {
            return Err(Error::Truncation {
                msg: format!("squeezing r = {r:.4} needs cutoff {n} for tail {eps:.1e}"),
                suggested_cutoff: n,
            });
        }
        Self::new(n)
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Local dimension d = n_max + 1.
    pub fn local_dim(&self) -> usize {
        self.n_max + 1
    }

    /// Total dimension d³.
    pub fn total_dim(&self) -> usize {
        self.local_dim().pow(3)
    }

    /// Flat index of |n₁, n₂, n₃⟩ (n₁ slowest-varying).
    pub fn flat_index(&self, n: [usize; 3]) -> usize {
        let d = self.local_dim();
        debug_assert!(n[0] < d && n[1] < d && n[2] < d, "occupation beyond cutoff");
        (n[0] * d + n[1]) * d + n[2]
    }

    /// Occupations (n₁, n₂, n₃) of a flat index.
    pub fn multi_index(&self, idx: usize) -> [usize; 3] {
        let d = self.local_dim();
        debug_assert!(idx < self.total_dim());
        [idx / (d * d), (idx / d) % d, idx % d]
    }
}

/// Complex amplitude vector over the truncated basis.
#[derive(Debug, Clone)]
pub struct FockState {
    cutoff: FockCutoff,
    amps: Vec<C64>,
}

impl FockState {
    /// |0, 0, 0⟩.
    pub fn vacuum(cutoff: FockCutoff) -> Self {
        let mut amps = vec![ZERO; cutoff.total_dim()];
        amps[0] = C64::new(1.0, 0.0);
        Self { cutoff, amps }
    }

    /// The basis state |n₁, n₂, n₃⟩.
    pub fn basis(cutoff: FockCutoff, n: [usize; 3]) -> Result<Self> {
        if n.iter().any(|&ni| ni > cutoff.n_max()) {
            return Err(Error::InvalidArgument(format!(
                "occupation {n:?} beyond cutoff {}",
                cutoff.n_max()
            )));
        }
        let mut amps = vec![ZERO; cutoff.total_dim()];
        amps[cutoff.flat_index(n)] = C64::new(1.0, 0.0);
        Ok(Self { cutoff, amps })
    }

    /// The product coherent state |z₁⟩|z₂⟩|z₃⟩, amplitude
    /// e^{−|z|²/2} zⁿ/√n! per mode. Errors when the cutoff cannot hold the
    /// Poisson tails below the default truncation budget.
    pub fn coherent(cutoff: FockCutoff, z: [C64; 3]) -> Result<Self> {
        for (i, zi) in z.iter().enumerate() {
            ensure_finite(&format!("Re z{}", i + 1), zi.re)?;
            ensure_finite(&format!("Im z{}", i + 1), zi.im)?;
        }
        let d = cutoff.local_dim();
        let mut locals: Vec<Vec<C64>> = Vec::with_capacity(3);
        for (i, &zi) in z.iter().enumerate() {
            let mut local = Vec::with_capacity(d);
            let mut amp = C64::new((-0.5 * zi.norm_sqr()).exp(), 0.0);
            local.push(amp);
            for n in 1..d {
                amp *= zi / (n as f64).sqrt();
                local.push(amp);
            }
            let kept: f64 = local.iter().map(|a| a.norm_sqr()).sum();
            let tail = (1.0 - kept).max(0.0);
            if tail > DEFAULT_TRUNCATION_EPS {
                return Err(Error::Truncation {
                    msg: format!(
                        "coherent amplitude |z{}| = {:.3} leaves tail {:.3e} at cutoff {}",
                        i + 1,
                        zi.norm(),
                        tail,
                        cutoff.n_max()
                    ),
                    suggested_cutoff: coherent_cutoff_suggestion(zi.norm()),
                });
            }
            locals.push(local);
        }
        let mut amps = vec![ZERO; cutoff.total_dim()];
        for (idx, amp) in amps.iter_mut().enumerate() {
            let n = cutoff.multi_index(idx);
            *amp = locals[0][n[0]] * locals[1][n[1]] * locals[2][n[2]];
        }
        Ok(Self { cutoff, amps })
    }

    /// Wrap an amplitude vector of the right length.
    pub fn from_amplitudes(cutoff: FockCutoff, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != cutoff.total_dim() {
            return Err(Error::InvalidArgument(format!(
                "amplitude vector length {} does not match dimension {}",
                amps.len(),
                cutoff.total_dim()
            )));
        }
        Ok(Self { cutoff, amps })
    }

    pub fn cutoff(&self) -> FockCutoff {
        self.cutoff
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, n: [usize; 3]) -> C64 {
        self.amps[self.cutoff.flat_index(n)]
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &FockState) -> Result<C64> {
        if self.cutoff != other.cutoff {
            return Err(Error::InvalidArgument(
                "states have different cutoffs".into(),
            ));
        }
        Ok(sparse::inner(&self.amps, &other.amps))
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &FockState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Probability weight on basis states with any occupation at the cutoff.
    /// Always recomputed from the amplitudes.
    pub fn tail_mass(&self) -> f64 {
        let n_max = self.cutoff.n_max();
        self.amps
            .iter()
            .enumerate()
            .filter(|(idx, _)| self.cutoff.multi_index(*idx).contains(&n_max))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    fn scaled(mut self, s: C64) -> Self {
        for a in &mut self.amps {
            *a *= s;
        }
        self
    }
}

// Smallest cutoff holding a coherent amplitude of the given magnitude.
fn coherent_cutoff_suggestion(abs_z: f64) -> usize {
    let mut kept = 0.0f64;
    let mut term = (-abs_z * abs_z).exp();
    for n in 0..=MAX_N_MAX {
        kept += term;
        if 1.0 - kept <= DEFAULT_TRUNCATION_EPS {
            return n;
        }
        term *= abs_z * abs_z / (n as f64 + 1.0);
    }
    MAX_N_MAX + 1
}

/// Which ladder operator a [`ModeOperator`] embeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Annihilation,
    Creation,
    Number,
}

/// A single-mode ladder operator embedded in the full truncated space.
#[derive(Debug, Clone)]
pub struct ModeOperator {
    matrix: CsMat,
    kind: OperatorKind,
    mode: usize,
}

impl ModeOperator {
    /// Build a_i, a_i† or n̂_i for `mode` ∈ {0, 1, 2}.
    pub fn build(cutoff: FockCutoff, kind: OperatorKind, mode: usize) -> Self {
        assert!(mode < 3, "mode index must be 0, 1 or 2");
        let dim = cutoff.total_dim();
        let mut triplets = Vec::new();
        for idx in 0..dim {
            let n = cutoff.multi_index(idx);
            match kind {
                OperatorKind::Annihilation => {
                    if n[mode] >= 1 {
                        let mut to = n;
                        to[mode] -= 1;
                        triplets.push((
                            cutoff.flat_index(to),
                            idx,
                            C64::new((n[mode] as f64).sqrt(), 0.0),
                        ));
                    }
                }
                OperatorKind::Creation => {
                    if n[mode] < cutoff.n_max() {
                        let mut to = n;
                        to[mode] += 1;
                        triplets.push((
                            cutoff.flat_index(to),
                            idx,
                            C64::new((n[mode] as f64 + 1.0).sqrt(), 0.0),
                        ));
                    }
                }
                OperatorKind::Number => {
                    if n[mode] > 0 {
                        triplets.push((idx, idx, C64::new(n[mode] as f64, 0.0)));
                    }
                }
            }
        }
        Self {
            matrix: CsMat::from_triplets(dim, triplets),
            kind,
            mode,
        }
    }

    pub fn matrix(&self) -> &CsMat {
        &self.matrix
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn mode(&self) -> usize {
        self.mode
    }

    pub fn apply(&self, state: &FockState) -> FockState {
        FockState {
            cutoff: state.cutoff,
            amps: self.matrix.apply(&state.amps),
        }
    }
}

/// Q_i = (a_i + a_i†)/√2 on the truncated space.
pub fn quadrature_q(cutoff: FockCutoff, mode: usize) -> CsMat {
    let a = ModeOperator::build(cutoff, OperatorKind::Annihilation, mode);
    let adag = ModeOperator::build(cutoff, OperatorKind::Creation, mode);
    a.matrix()
        .add(adag.matrix())
        .scaled(C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0))
}

/// P_i = (a_i − a_i†)/(i√2) on the truncated space.
pub fn quadrature_p(cutoff: FockCutoff, mode: usize) -> CsMat {
    let a = ModeOperator::build(cutoff, OperatorKind::Annihilation, mode);
    let adag = ModeOperator::build(cutoff, OperatorKind::Creation, mode);
    a.matrix()
        .add(&adag.matrix().scaled(C64::new(-1.0, 0.0)))
        .scaled(C64::new(0.0, -std::f64::consts::FRAC_1_SQRT_2))
}

/// α a_i† − α* a_i, the anti-Hermitian generator of a single-mode
/// displacement by α.
pub fn displacement_generator(cutoff: FockCutoff, mode: usize, alpha: C64) -> CsMat {
    let a = ModeOperator::build(cutoff, OperatorKind::Annihilation, mode);
    let adag = ModeOperator::build(cutoff, OperatorKind::Creation, mode);
    adag.matrix()
        .scaled(alpha)
        .add(&a.matrix().scaled(-alpha.conj()))
}

/// The anti-Hermitian squeeze generator
/// K = μ(a₁a₂ − a₁†a₂†) + ν(a₁a₃ − a₁†a₃†), built entry by entry.
///
/// K† = −K holds exactly by construction: every pair-annihilation entry is
/// accompanied by the negated transpose entry.
pub fn build_s3_generator(cutoff: FockCutoff, mu: f64, nu: f64) -> CsMat {
    let dim = cutoff.total_dim();
    let n_max = cutoff.n_max();
    let mut triplets = Vec::new();
    let pair_terms = |coupling: f64, partner: usize, triplets: &mut Vec<(usize, usize, C64)>| {
        if coupling == 0.0 {
            return;
        }
        for idx in 0..dim {
            let n = cutoff.multi_index(idx);
            // a₁ a_partner
            if n[0] >= 1 && n[partner] >= 1 {
                let mut to = n;
                to[0] -= 1;
                to[partner] -= 1;
                let val = coupling * ((n[0] * n[partner]) as f64).sqrt();
                triplets.push((cutoff.flat_index(to), idx, C64::new(val, 0.0)));
            }
            // −a₁† a_partner†
            if n[0] < n_max && n[partner] < n_max {
                let mut to = n;
                to[0] += 1;
                to[partner] += 1;
                let val = -coupling * (((n[0] + 1) * (n[partner] + 1)) as f64).sqrt();
                triplets.push((cutoff.flat_index(to), idx, C64::new(val, 0.0)));
            }
        }
    };
    pair_terms(mu, 1, &mut triplets);
    pair_terms(nu, 2, &mut triplets);
    CsMat::from_triplets(dim, triplets)
}

fn check_normalized(state: &FockState, what: &str) -> Result<()> {
    let norm = state.norm();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidArgument(format!(
            "{what} expects a normalized state, got norm {norm:.8}"
        )));
    }
    Ok(())
}

/// exp(K)·state by sparse exponential action, with remainder below `tol`
/// (2-norm). `tol` must lie in (0, 1e-6].
pub fn apply_s3_numeric(state: &FockState, mu: f64, nu: f64, tol: f64) -> Result<FockState> {
    ensure_finite("mu", mu)?;
    ensure_finite("nu", nu)?;
    if !(tol > 0.0 && tol <= 1e-6) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must lie in (0, 1e-6], got {tol}"
        )));
    }
    check_normalized(state, "apply_s3_numeric")?;
    let k = build_s3_generator(state.cutoff, mu, nu);
    let amps = sparse::expm_action(&k, &state.amps, tol, MAX_SUBSTEPS)?;
    Ok(FockState {
        cutoff: state.cutoff,
        amps,
    })
}

/// The squeezed vacuum S₃|000⟩ from its closed-form Fock expansion, truncated
/// raw (not renormalized), with the default truncation budget.
pub fn squeezed_vacuum_analytic(cutoff: FockCutoff, mu: f64, nu: f64) -> Result<FockState> {
    squeezed_vacuum_analytic_tol(cutoff, mu, nu, DEFAULT_TRUNCATION_EPS)
}

/// Same as [`squeezed_vacuum_analytic`] with an explicit truncation budget;
/// `eps_trunc` ≥ 1 disables the tail check (useful to demonstrate
/// under-truncation on purpose).
pub fn squeezed_vacuum_analytic_tol(
    cutoff: FockCutoff,
    mu: f64,
    nu: f64,
    eps_trunc: f64,
) -> Result<FockState> {
    ensure_finite("mu", mu)?;
    ensure_finite("nu", nu)?;
    let g = GeneratorMatrix::new(mu, nu)?;
    let t = g.r().tanh();
    if t >= TANH_GUARD {
        return Err(Error::InvalidArgument(format!(
            "squeeze strength r = {:.4} too large (tanh r must stay below {TANH_GUARD})",
            g.r()
        )));
    }
    let n_max = cutoff.n_max();
    if eps_trunc < 1.0 && t > 0.0 {
        let boundary = (1.0 - t * t) * t.powi(2 * n_max as i32);
        let omitted = t.powi(2 * (n_max as i32 + 1));
        if boundary.max(omitted) > eps_trunc {
            let suggested = match FockCutoff::auto_for_squeezing(mu, nu, eps_trunc) {
                Ok(c) => c.n_max(),
                Err(Error::Truncation {
                    suggested_cutoff, ..
                }) => suggested_cutoff,
                Err(e) => return Err(e),
            };
            return Err(Error::Truncation {
                msg: format!(
                    "cutoff {n_max} leaves truncation tail {:.3e} > {eps_trunc:.1e} at r = {:.4}",
                    boundary.max(omitted),
                    g.r()
                ),
                suggested_cutoff: suggested,
            });
        }
    }
    let sech = 1.0 / g.r().cosh();
    let cos_t = g.theta().cos();
    let sin_t = g.theta().sin();
    let mut amps = vec![ZERO; cutoff.total_dim()];
    for n in 0..=n_max {
        let level = sech * (-t).powi(n as i32);
        if level == 0.0 && n > 0 {
            break;
        }
        for k in 0..=n {
            let amp =
                level * sqrt_binomial(n, k) * cos_t.powi((n - k) as i32) * sin_t.powi(k as i32);
            if amp != 0.0 {
                amps[cutoff.flat_index([n, n - k, k])] = C64::new(amp, 0.0);
            }
        }
    }
    Ok(FockState { cutoff, amps })
}

fn sqrt_binomial(n: usize, k: usize) -> f64 {
    let mut b = 1.0f64;
    for i in 0..k.min(n - k) {
        b *= (n - i) as f64 / (i + 1) as f64;
    }
    b.sqrt()
}

/// 2-norms of the three eigen-relation residuals of the squeezed vacuum:
///
/// ```text
///     (a₁ + tanh r (cos θ a₂† + sin θ a₃†)) |ψ⟩,
///     (a₂ + tanh r cos θ a₁†) |ψ⟩,
///     (a₃ + tanh r sin θ a₁†) |ψ⟩.
/// ```
///
/// All three vanish on the untruncated squeezed vacuum; on a truncated one
/// they are bounded by 10·√tail_mass.
pub fn check_eigen_relations(state: &FockState, mu: f64, nu: f64) -> Result<[f64; 3]> {
    ensure_finite("mu", mu)?;
    ensure_finite("nu", nu)?;
    let g = GeneratorMatrix::new(mu, nu)?;
    let t = g.r().tanh();
    let (c, s) = (g.theta().cos(), g.theta().sin());
    let cutoff = state.cutoff;
    let a: Vec<_> = (0..3)
        .map(|m| ModeOperator::build(cutoff, OperatorKind::Annihilation, m))
        .collect();
    let adag: Vec<_> = (0..3)
        .map(|m| ModeOperator::build(cutoff, OperatorKind::Creation, m))
        .collect();
    let re = |x: f64| C64::new(x, 0.0);
    let ops = [
        a[0].matrix()
            .add(&adag[1].matrix().scaled(re(t * c)))
            .add(&adag[2].matrix().scaled(re(t * s))),
        a[1].matrix().add(&adag[0].matrix().scaled(re(t * c))),
        a[2].matrix().add(&adag[0].matrix().scaled(re(t * s))),
    ];
    let mut out = [0.0f64; 3];
    for (slot, op) in out.iter_mut().zip(ops.iter()) {
        *slot = sparse::norm2(&op.apply(&state.amps));
    }
    Ok(out)
}

/// exp(op)·v for operators whose power series terminates on the truncated
/// space (pure raising, pure lowering, or products thereof).
pub fn apply_exp_series(op: &CsMat, v: &[C64]) -> Result<Vec<C64>> {
    let mut acc = v.to_vec();
    let mut term = v.to_vec();
    for k in 1..=MAX_SERIES_TERMS {
        term = op.apply(&term);
        let scale = 1.0 / k as f64;
        let mut all_zero = true;
        for (t, a) in term.iter_mut().zip(acc.iter_mut()) {
            *t *= scale;
            *a += *t;
            all_zero &= *t == ZERO;
        }
        if all_zero {
            return Ok(acc);
        }
    }
    // The series did not hit an exact zero; accept only a negligible leftover.
    if sparse::norm2(&term) <= 1e-14 * sparse::norm2(&acc).max(1.0) {
        Ok(acc)
    } else {
        Err(Error::Resource(format!(
            "operator series still significant after {MAX_SERIES_TERMS} terms"
        )))
    }
}

// Σ_j (gamma^j / j!) raise^j lower^j applied to v: the series expansion of a
// normally ordered exponential of a number-like quadratic. Terminates when
// lower^j wipes the state out.
fn apply_normal_ordered_number_series(
    lower: &CsMat,
    raise: &CsMat,
    gamma: f64,
    v: &[C64],
) -> Vec<C64> {
    let mut acc = v.to_vec();
    let mut lowered = v.to_vec();
    let mut coeff = 1.0f64;
    for j in 1..=MAX_SERIES_TERMS {
        lowered = lower.apply(&lowered);
        if lowered.iter().all(|x| *x == ZERO) {
            break;
        }
        coeff *= gamma / j as f64;
        let mut term = lowered.clone();
        for _ in 0..j {
            term = raise.apply(&term);
        }
        for (a, t) in acc.iter_mut().zip(&term) {
            *a += coeff * t;
        }
    }
    acc
}

/// Apply the squeeze through its normally ordered factorization,
/// right to left:
///
/// ```text
///     S₃ = sech r · exp[−a₁†(a₂†cos θ + a₃†sin θ) tanh r]
///          · : exp[(sech r − 1)(a₁†a₁ + b†b)] :
///          · exp[a₁(a₂cos θ + a₃sin θ) tanh r],        b = a₂cos θ + a₃sin θ,
/// ```
///
/// each exponential expanded as a series in the truncated space. The middle
/// normally ordered factor splits into the mode-1 series and the b-mode
/// series, Σ_j (γ^j/j!) (a†)^j a^j each.
pub fn apply_s3_normal_ordered(state: &FockState, mu: f64, nu: f64) -> Result<FockState> {
    ensure_finite("mu", mu)?;
    ensure_finite("nu", nu)?;
    check_normalized(state, "apply_s3_normal_ordered")?;
    let g = GeneratorMatrix::new(mu, nu)?;
    let t = g.r().tanh();
    let (c, s) = (g.theta().cos(), g.theta().sin());
    let sech = 1.0 / g.r().cosh();
    let cutoff = state.cutoff;

    let a: Vec<_> = (0..3)
        .map(|m| ModeOperator::build(cutoff, OperatorKind::Annihilation, m))
        .collect();
    let adag: Vec<_> = (0..3)
        .map(|m| ModeOperator::build(cutoff, OperatorKind::Creation, m))
        .collect();
    let re = |x: f64| C64::new(x, 0.0);

    // Rightmost factor: pair annihilation.
    let lowering_pair = a[0]
        .matrix()
        .matmul(a[1].matrix())
        .scaled(re(t * c))
        .add(&a[0].matrix().matmul(a[2].matrix()).scaled(re(t * s)));
    let psi = apply_exp_series(&lowering_pair, &state.amps)?;

    // Middle factor: normally ordered Gaussian in n̂₁ and b†b.
    let gamma = sech - 1.0;
    let b = a[1]
        .matrix()
        .scaled(re(c))
        .add(&a[2].matrix().scaled(re(s)));
    let b_dag = b.adjoint();
    let psi = apply_normal_ordered_number_series(a[0].matrix(), adag[0].matrix(), gamma, &psi);
    let psi = apply_normal_ordered_number_series(&b, &b_dag, gamma, &psi);

    // Leftmost factor: pair creation.
    let raising_pair = adag[0]
        .matrix()
        .matmul(adag[1].matrix())
        .scaled(re(-t * c))
        .add(&adag[0].matrix().matmul(adag[2].matrix()).scaled(re(-t * s)));
    let psi = apply_exp_series(&raising_pair, &psi)?;

    Ok(FockState { cutoff, amps: psi }.scaled(re(sech)))
}

/// S₃|z₁z₂z₃⟩ built directly from its disentangled form: a scalar prefactor,
/// a creation-only displacement whose coefficients are the coherent
/// amplitudes dragged through the squeeze, and the squeezed-vacuum kernel.
pub fn s3_on_coherent(z: [C64; 3], mu: f64, nu: f64, cutoff: FockCutoff) -> Result<FockState> {
    let g = GeneratorMatrix::new(mu, nu)?;
    let t = g.r().tanh();
    let ch = g.r().cosh();
    let (c, s) = (g.theta().cos(), g.theta().sin());

    // Validates |z| against the cutoff as a side effect.
    let _ = FockState::coherent(cutoff, z)?;

    let kernel = squeezed_vacuum_analytic(cutoff, mu, nu)?;

    let half_sin2t = c * s; // sin(2θ)/2
    let w1 = z[0];
    let w2 = z[1] * (s * s * ch + c * c) - z[2] * (ch - 1.0) * half_sin2t;
    let w3 = z[2] * (s * s + c * c * ch) - z[1] * (ch - 1.0) * half_sin2t;

    let adag: Vec<_> = (0..3)
        .map(|m| ModeOperator::build(cutoff, OperatorKind::Creation, m))
        .collect();
    let displacement = adag[0]
        .matrix()
        .scaled(w1 / ch)
        .add(&adag[1].matrix().scaled(w2 / ch))
        .add(&adag[2].matrix().scaled(w3 / ch));
    let psi = apply_exp_series(&displacement, kernel.amplitudes())?;

    let norm_sq: f64 = z.iter().map(|zi| zi.norm_sqr()).sum();
    let prefactor = (C64::new(-0.5 * norm_sq, 0.0) + (z[0] * z[1] * c + z[0] * z[2] * s) * t).exp();
    Ok(FockState { cutoff, amps: psi }.scaled(prefactor))
}

/// ⟨state|op|state⟩.
pub fn expectation(state: &FockState, op: &CsMat) -> Result<C64> {
    if op.dim() != state.amps.len() {
        return Err(Error::InvalidArgument(format!(
            "operator dimension {} does not match state dimension {}",
            op.dim(),
            state.amps.len()
        )));
    }
    Ok(sparse::inner(&state.amps, &op.apply(&state.amps)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cutoff(n: usize) -> FockCutoff {
        FockCutoff::new(n).unwrap()
    }

    #[test]
    fn index_mapping_roundtrips() {
        let c = cutoff(3);
        assert_eq!(c.flat_index([0, 0, 0]), 0);
        assert_eq!(c.flat_index([0, 0, 1]), 1);
        assert_eq!(c.flat_index([1, 0, 0]), 16);
        for idx in 0..c.total_dim() {
            assert_eq!(c.flat_index(c.multi_index(idx)), idx);
        }
    }

    #[test]
    fn cutoff_validates_range() {
        assert!(FockCutoff::new(0).is_err());
        assert!(FockCutoff::new(64).is_err());
        assert_eq!(cutoff(63).total_dim(), DEFAULT_DIM_BUDGET);
    }

    #[test]
    fn vacuum_is_unit_delta_at_origin() {
        for n in [1, 4] {
            let v = FockState::vacuum(cutoff(n));
            assert_eq!(v.amplitude([0, 0, 0]), C64::new(1.0, 0.0));
            assert!((v.norm() - 1.0).abs() < 1e-15);
            assert_eq!(v.tail_mass(), 0.0);
        }
        // ⟨vacuum| N_total |vacuum⟩ = 0.
        let c = cutoff(4);
        let v = FockState::vacuum(c);
        let n_total = ModeOperator::build(c, OperatorKind::Number, 0)
            .matrix()
            .add(ModeOperator::build(c, OperatorKind::Number, 1).matrix())
            .add(ModeOperator::build(c, OperatorKind::Number, 2).matrix());
        assert_eq!(expectation(&v, &n_total).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn ladder_operators_act_on_basis_states() {
        let c = cutoff(2);
        let a1 = ModeOperator::build(c, OperatorKind::Annihilation, 0);
        let from = FockState::basis(c, [1, 0, 0]).unwrap();
        let to = a1.apply(&from);
        assert_eq!(to.amplitude([0, 0, 0]), C64::new(1.0, 0.0));
        assert!((to.norm() - 1.0).abs() < 1e-15);

        let a2dag = ModeOperator::build(c, OperatorKind::Creation, 1);
        let raised = a2dag.apply(&FockState::vacuum(c));
        assert_eq!(raised.amplitude([0, 1, 0]), C64::new(1.0, 0.0));

        let n1 = ModeOperator::build(c, OperatorKind::Number, 0);
        let two = FockState::basis(c, [2, 0, 0]).unwrap();
        let counted = n1.apply(&two);
        assert_eq!(counted.amplitude([2, 0, 0]), C64::new(2.0, 0.0));
    }

    #[test]
    fn creation_is_adjoint_of_annihilation() {
        let c = cutoff(3);
        for mode in 0..3 {
            let a = ModeOperator::build(c, OperatorKind::Annihilation, mode);
            let adag = ModeOperator::build(c, OperatorKind::Creation, mode);
            let diff = adag
                .matrix()
                .add(&a.matrix().adjoint().scaled(C64::new(-1.0, 0.0)));
            assert_eq!(diff.max_abs(), 0.0);
        }
    }

    #[test]
    fn commutator_holds_below_cutoff() {
        let c = cutoff(4);
        let a = ModeOperator::build(c, OperatorKind::Annihilation, 1);
        let adag = ModeOperator::build(c, OperatorKind::Creation, 1);
        let comm = a
            .matrix()
            .matmul(adag.matrix())
            .add(&adag.matrix().matmul(a.matrix()).scaled(C64::new(-1.0, 0.0)));
        // [a, a†] = 1 wherever n₂ < n_max; the top level sees the truncation.
        for n2 in 0..4 {
            let basis = FockState::basis(c, [1, n2, 2]).unwrap();
            let applied = FockState {
                cutoff: c,
                amps: comm.apply(basis.amplitudes()),
            };
            let expected = if n2 < 4 { 1.0 } else { -4.0 };
            assert!((applied.amplitude([1, n2, 2]).re - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn generator_is_zero_without_coupling() {
        let k = build_s3_generator(cutoff(3), 0.0, 0.0);
        assert_eq!(k.nnz(), 0);
    }

    #[test]
    fn generator_has_no_vacuum_diagonal() {
        let c = cutoff(5);
        let k = build_s3_generator(c, 0.7, -0.3);
        let v = FockState::vacuum(c);
        let kv = k.apply(v.amplitudes());
        assert_eq!(kv[c.flat_index([0, 0, 0])], C64::new(0.0, 0.0));
    }

    #[test]
    fn generator_is_anti_hermitian() {
        let c = cutoff(8);
        let k = build_s3_generator(c, 0.8, 0.5);
        let sum = k.add(&k.adjoint());
        assert!(sum.max_abs() < 1e-14);
    }

    #[test]
    fn numeric_squeeze_is_identity_at_zero_coupling() {
        let c = cutoff(4);
        let v = FockState::vacuum(c);
        let out = apply_s3_numeric(&v, 0.0, 0.0, 1e-10).unwrap();
        assert_eq!(out.amplitudes(), v.amplitudes());
    }

    #[test]
    fn numeric_squeeze_matches_two_mode_closed_form() {
        // With ν = 0 the vacuum squeezes to sech μ (−tanh μ)ⁿ on |n,n,0⟩.
        let mu = 0.6;
        let c = cutoff(24);
        let out = apply_s3_numeric(&FockState::vacuum(c), mu, 0.0, 1e-12).unwrap();
        let sech = 1.0 / f64::cosh(mu);
        let t = f64::tanh(mu);
        for n in 0..=8 {
            let expected = sech * (-t).powi(n as i32);
            let got = out.amplitude([n, n, 0]);
            assert!(
                (got.re - expected).abs() < 1e-9 && got.im.abs() < 1e-12,
                "amplitude at |{n},{n},0>: got {got}, expected {expected}"
            );
        }
        // Nothing lands outside the pair ladder.
        assert!(out.amplitude([1, 0, 0]).norm() < 1e-12);
        assert!(out.amplitude([0, 0, 1]).norm() < 1e-12);
    }

    #[test]
    fn numeric_squeeze_conserves_norm() {
        let c = cutoff(20);
        let tol = 1e-10;
        let out = apply_s3_numeric(&FockState::vacuum(c), 0.5, 0.3, tol).unwrap();
        let leak = out.tail_mass();
        assert!(
            (out.norm() - 1.0).abs() < tol + 10.0 * leak.sqrt(),
            "norm {} drifted beyond tol {} + leakage {}",
            out.norm(),
            tol,
            leak
        );
    }

    #[test]
    fn numeric_squeeze_validates_inputs() {
        let c = cutoff(4);
        let v = FockState::vacuum(c);
        assert!(matches!(
            apply_s3_numeric(&v, 0.1, 0.1, 1e-3),
            Err(Error::InvalidArgument(_))
        ));
        let unnormalized = FockState::from_amplitudes(c, vec![ZERO; c.total_dim()]).unwrap();
        assert!(apply_s3_numeric(&unnormalized, 0.1, 0.1, 1e-9).is_err());
    }

    #[test]
    fn analytic_state_at_zero_is_vacuum() {
        let c = cutoff(6);
        let st = squeezed_vacuum_analytic(c, 0.0, 0.0).unwrap();
        assert_eq!(st.amplitude([0, 0, 0]), C64::new(1.0, 0.0));
        assert!((st.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn analytic_state_two_mode_amplitudes() {
        let mu = 0.6;
        let c = cutoff(24);
        let st = squeezed_vacuum_analytic(c, mu, 0.0).unwrap();
        let sech = 1.0 / f64::cosh(mu);
        let t = f64::tanh(mu);
        for n in 0..=10 {
            let expected = sech * (-t).powi(n as i32);
            assert!((st.amplitude([n, n, 0]).re - expected).abs() < 1e-15);
        }
        // Mode 3 marginal is exactly vacuum at ν = 0.
        for idx in 0..c.total_dim() {
            let n = c.multi_index(idx);
            if n[2] > 0 {
                assert_eq!(st.amplitudes()[idx], ZERO);
            }
        }
    }

    #[test]
    fn analytic_norm_matches_geometric_tail() {
        let (mu, nu) = (0.6, 0.45);
        let c = cutoff(26);
        let st = squeezed_vacuum_analytic(c, mu, nu).unwrap();
        let t = f64::hypot(mu, nu).tanh();
        let omitted = t.powi(2 * 27);
        assert!((st.norm_sq() - (1.0 - omitted)).abs() < 1e-12);
    }

    #[test]
    fn analytic_state_swapping_couplings_swaps_modes() {
        // Truncation is irrelevant to the symmetry, so bypass the tail check.
        let c = cutoff(10);
        let ab = squeezed_vacuum_analytic_tol(c, 0.4, 0.7, 1.0).unwrap();
        let ba = squeezed_vacuum_analytic_tol(c, 0.7, 0.4, 1.0).unwrap();
        for idx in 0..c.total_dim() {
            let n = c.multi_index(idx);
            let swapped = ba.amplitude([n[0], n[2], n[1]]);
            assert!((ab.amplitudes()[idx] - swapped).norm() < 1e-14);
        }
    }

    #[test]
    fn analytic_state_reports_undersized_cutoff() {
        let err = squeezed_vacuum_analytic(cutoff(4), 0.9, 0.0).unwrap_err();
        match err {
            Error::Truncation {
                suggested_cutoff, ..
            } => {
                assert!(suggested_cutoff > 4);
                let fixed = FockCutoff::new(suggested_cutoff).unwrap();
                assert!(squeezed_vacuum_analytic(fixed, 0.9, 0.0).is_ok());
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn analytic_state_guards_extreme_squeezing() {
        let too_big = 4.0; // tanh 4 > 0.999
        assert!(matches!(
            squeezed_vacuum_analytic(cutoff(10), too_big, 0.0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn auto_cutoff_meets_tail_budget() {
        for (mu, nu) in [(0.6, 0.0), (0.0, 0.6), (0.6, 0.45), (0.3, 0.8)] {
            let c = FockCutoff::auto_for_squeezing(mu, nu, 1e-10).unwrap();
            assert!(c.n_max() <= 32, "auto cutoff {} too large", c.n_max());
            let st = squeezed_vacuum_analytic(c, mu, nu).unwrap();
            assert!(st.tail_mass() <= 1e-10);
            assert!(st.norm_sq() >= 1.0 - 1e-10);
        }
    }

    #[test]
    fn eigen_relations_zero_on_vacuum_without_coupling() {
        let v = FockState::vacuum(cutoff(4));
        assert_eq!(
            check_eigen_relations(&v, 0.0, 0.0).unwrap(),
            [0.0, 0.0, 0.0]
        );
    }

    #[test]
    fn eigen_relations_third_residual_vanishes_at_theta_zero() {
        let c = cutoff(18);
        let st = squeezed_vacuum_analytic(c, 0.5, 0.0).unwrap();
        let res = check_eigen_relations(&st, 0.5, 0.0).unwrap();
        assert_eq!(res[2], 0.0, "mode 3 is decoupled at sin θ = 0");
    }

    #[test]
    fn eigen_relations_bounded_by_tail() {
        let c = cutoff(26);
        let st = squeezed_vacuum_analytic(c, 0.6, 0.45).unwrap();
        let bound = 10.0 * st.tail_mass().sqrt();
        for r in check_eigen_relations(&st, 0.6, 0.45).unwrap() {
            assert!(r <= bound, "residual {r} above 10·√tail = {bound}");
        }
    }

    #[test]
    fn normal_ordered_form_is_identity_at_zero_coupling() {
        let c = cutoff(5);
        let st = FockState::basis(c, [1, 2, 0]).unwrap();
        let out = apply_s3_normal_ordered(&st, 0.0, 0.0).unwrap();
        for (a, b) in out.amplitudes().iter().zip(st.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn normal_ordered_form_reproduces_analytic_vacuum_action() {
        let (mu, nu) = (0.5, 0.35);
        let c = cutoff(20);
        let out = apply_s3_normal_ordered(&FockState::vacuum(c), mu, nu).unwrap();
        let analytic = squeezed_vacuum_analytic(c, mu, nu).unwrap();
        let diff: f64 = out
            .amplitudes()
            .iter()
            .zip(analytic.amplitudes())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(diff < 1e-10, "vector difference {diff}");
    }

    #[test]
    fn coherent_state_has_poisson_marginals() {
        let c = cutoff(16);
        let z = C64::new(0.3, -0.2);
        let st = FockState::coherent(c, [z, ZERO, ZERO]).unwrap();
        assert!((st.norm() - 1.0).abs() < 1e-12);
        let expected1 = (-0.5 * z.norm_sqr()).exp() * z.norm();
        assert!((st.amplitude([1, 0, 0]).norm() - expected1).abs() < 1e-13);
    }

    #[test]
    fn coherent_state_rejects_oversized_amplitude() {
        let err = FockState::coherent(cutoff(2), [C64::new(2.0, 0.0), ZERO, ZERO]).unwrap_err();
        assert!(matches!(err, Error::Truncation { .. }));
    }

    #[test]
    fn s3_on_coherent_reduces_to_analytic_at_zero_displacement() {
        let (mu, nu) = (0.5, 0.4);
        let c = cutoff(22);
        let out = s3_on_coherent([ZERO, ZERO, ZERO], mu, nu, c).unwrap();
        let analytic = squeezed_vacuum_analytic(c, mu, nu).unwrap();
        for (a, b) in out.amplitudes().iter().zip(analytic.amplitudes()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn s3_on_coherent_is_coherent_at_zero_coupling() {
        let c = cutoff(16);
        let z = [C64::new(0.3, 0.0), C64::new(0.0, 0.2), C64::new(-0.1, 0.1)];
        let out = s3_on_coherent(z, 0.0, 0.0, c).unwrap();
        let coherent = FockState::coherent(c, z).unwrap();
        let diff: f64 = out
            .amplitudes()
            .iter()
            .zip(coherent.amplitudes())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(diff < 1e-12, "vector difference {diff}");
    }

    #[test]
    fn expectation_examples_on_squeezed_vacuum() {
        let (mu, nu) = (0.6, 0.45);
        let c = FockCutoff::auto_for_squeezing(mu, nu, 1e-12).unwrap();
        let st = squeezed_vacuum_analytic_tol(c, mu, nu, 1e-12).unwrap();
        let g = GeneratorMatrix::new(mu, nu).unwrap();
        let sinh2 = g.r().sinh().powi(2);
        let n1 = ModeOperator::build(c, OperatorKind::Number, 0);
        let n2 = ModeOperator::build(c, OperatorKind::Number, 1);
        let got1 = expectation(&st, n1.matrix()).unwrap();
        let got2 = expectation(&st, n2.matrix()).unwrap();
        assert!(
            (got1.re - sinh2).abs() < 1e-9,
            "⟨n₁⟩ = {} vs sinh²r = {sinh2}",
            got1.re
        );
        let expected2 = g.theta().cos().powi(2) * sinh2;
        assert!((got2.re - expected2).abs() < 1e-9);
        assert!(got1.im.abs() < 1e-12 && got2.im.abs() < 1e-12);
    }

    #[test]
    fn expectation_rejects_dimension_mismatch() {
        let st = FockState::vacuum(cutoff(2));
        let op = CsMat::identity(8);
        assert!(matches!(
            expectation(&st, &op),
            Err(Error::InvalidArgument(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn prop_numeric_squeeze_unitary_on_random_states(
            seed_re in proptest::collection::vec(-1.0f64..1.0, 8),
            seed_im in proptest::collection::vec(-1.0f64..1.0, 8),
            mu in -0.8f64..0.8,
            nu in -0.8f64..0.8,
        ) {
            let c = cutoff(9);
            let mut amps = vec![ZERO; c.total_dim()];
            for (i, (re, im)) in seed_re.iter().zip(&seed_im).enumerate() {
                amps[c.flat_index([i % 2, i % 3, i % 2])] += C64::new(*re, *im);
                let _ = i;
            }
            let norm = sparse::norm2(&amps);
            prop_assume!(norm > 1e-3);
            for a in &mut amps { *a /= norm; }
            let st = FockState::from_amplitudes(c, amps).unwrap();
            let out = apply_s3_numeric(&st, mu, nu, 1e-9).unwrap();
            // Low-lying input, moderate squeeze: leakage is tiny, so the norm
            // must be conserved to the requested tolerance.
            prop_assert!((out.norm() - 1.0).abs() < 1e-8 + 10.0 * out.tail_mass().sqrt());
        }

        #[test]
        fn prop_index_roundtrip(n_max in 1usize..12, idx_seed in 0usize..100000) {
            let c = cutoff(n_max);
            let idx = idx_seed % c.total_dim();
            prop_assert_eq!(c.flat_index(c.multi_index(idx)), idx);
        }
    }
}
