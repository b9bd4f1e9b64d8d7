//! Deterministic CSV/JSON rendering and the figure tables.
//!
//! Floats in CSV are rendered in scientific notation with 17 significant
//! digits, locale-independent, so identical configurations produce
//! byte-identical output. JSON goes through serde structs whose key order is
//! fixed by declaration order.

use serde::Serialize;
use trisqueeze::fock::FockState;
use trisqueeze::squeezing::{self, QuadratureStats};
use trisqueeze::wigner::{PhasePoint, WignerGrid};
use trisqueeze::Result;

/// 17 significant digits, scientific notation.
pub fn g17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Join one CSV row, LF-terminated by the caller.
pub fn csv_row(fields: &[String]) -> String {
    fields.join(",")
}

pub fn csv_document(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&csv_row(&row));
        out.push('\n');
    }
    out
}

/* State dump *****************************************************************/

/// JSON shape of a Fock state: cutoff, ordering tag, dense amplitude list as
/// [re, im] pairs in flat-index order, and the recomputed tail mass.
#[derive(Debug, Serialize)]
pub struct StateDump {
    pub cutoff: usize,
    pub ordering: &'static str,
    pub amplitudes: Vec<[f64; 2]>,
    pub tail_mass: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify_fidelity: Option<f64>,
}

impl StateDump {
    pub fn from_state(state: &FockState, verify_fidelity: Option<f64>) -> Self {
        Self {
            cutoff: state.cutoff().n_max(),
            ordering: "n1-major",
            amplitudes: state.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
            tail_mass: state.tail_mass(),
            verify_fidelity,
        }
    }
}

/* Variance / uncertainty *****************************************************/

#[derive(Debug, Serialize)]
pub struct VarianceRow {
    pub mu: f64,
    pub nu: f64,
    pub pathway: &'static str,
    pub var_x1: f64,
    pub var_x2: f64,
    pub product: f64,
}

impl VarianceRow {
    pub fn new(mu: f64, nu: f64, stats: &QuadratureStats) -> Self {
        Self {
            mu,
            nu,
            pathway: stats.pathway.as_str(),
            var_x1: stats.var_x1,
            var_x2: stats.var_x2,
            product: stats.product,
        }
    }

    pub fn csv_fields(&self) -> Vec<String> {
        vec![
            g17(self.mu),
            g17(self.nu),
            self.pathway.to_string(),
            g17(self.var_x1),
            g17(self.var_x2),
            g17(self.product),
        ]
    }
}

pub const VARIANCE_HEADER: [&str; 6] = ["mu", "nu", "pathway", "var_x1", "var_x2", "product"];

#[derive(Debug, Serialize)]
pub struct UncertaintyRow {
    pub mu: f64,
    pub nu: f64,
    pub r: f64,
    pub theta: f64,
    pub product: f64,
}

pub const UNCERTAINTY_HEADER: [&str; 5] = ["mu", "nu", "r", "theta", "product"];

/* Wigner rows ****************************************************************/

#[derive(Debug, Serialize)]
pub struct WignerRow {
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub w: f64,
}

pub const WIGNER_HEADER: [&str; 7] = ["q1", "q2", "q3", "p1", "p2", "p3", "w"];

impl WignerRow {
    pub fn new(pt: &PhasePoint, w: f64) -> Self {
        Self {
            q1: pt.q[0],
            q2: pt.q[1],
            q3: pt.q[2],
            p1: pt.p[0],
            p2: pt.p[1],
            p3: pt.p[2],
            w,
        }
    }

    pub fn csv_fields(&self) -> Vec<String> {
        [self.q1, self.q2, self.q3, self.p1, self.p2, self.p3, self.w]
            .iter()
            .map(|&x| g17(x))
            .collect()
    }
}

pub fn wigner_rows(grid: &WignerGrid) -> Vec<WignerRow> {
    grid.rows()
        .iter()
        .map(|(pt, w)| WignerRow::new(pt, *w))
        .collect()
}

/* Figure tables **************************************************************/

/// Variances against μ at ν = 0 and ν = 0.5, μ ∈ [0, 1] in steps of 0.01.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Fig1Row {
    pub mu: f64,
    pub var_x1_nu0: f64,
    pub var_x2_nu0: f64,
    pub var_x1_nu05: f64,
    pub var_x2_nu05: f64,
}

pub const FIG1_HEADER: [&str; 5] = [
    "mu",
    "var_x1_nu0",
    "var_x2_nu0",
    "var_x1_nu05",
    "var_x2_nu05",
];

pub fn fig1_table() -> Result<Vec<Fig1Row>> {
    let mut rows = Vec::with_capacity(101);
    for i in 0..=100u32 {
        let mu = i as f64 * 0.01;
        let base = squeezing::variance_closed_form(mu, 0.0)?;
        let lifted = squeezing::variance_closed_form(mu, 0.5)?;
        rows.push(Fig1Row {
            mu,
            var_x1_nu0: base.var_x1,
            var_x2_nu0: base.var_x2,
            var_x1_nu05: lifted.var_x1,
            var_x2_nu05: lifted.var_x2,
        });
    }
    Ok(rows)
}

pub fn fig1_csv(rows: &[Fig1Row]) -> String {
    csv_document(
        &FIG1_HEADER,
        rows.iter()
            .map(|r| {
                vec![
                    g17(r.mu),
                    g17(r.var_x1_nu0),
                    g17(r.var_x2_nu0),
                    g17(r.var_x1_nu05),
                    g17(r.var_x2_nu05),
                ]
            })
            .collect(),
    )
}

/// The θ samples of the uncertainty sweep: the two pure two-mode extremes,
/// the balanced coupling, and the two midpoints.
pub const FIG2_THETAS: [f64; 5] = [
    0.0,
    std::f64::consts::FRAC_PI_8,
    std::f64::consts::FRAC_PI_4,
    3.0 * std::f64::consts::FRAC_PI_8,
    std::f64::consts::FRAC_PI_2,
];

pub const FIG2_HEADER: [&str; 6] = [
    "r",
    "product_theta_0",
    "product_theta_pi_8",
    "product_theta_pi_4",
    "product_theta_3pi_8",
    "product_theta_pi_2",
];

/// Uncertainty product against r ∈ [0, 1.5] in steps of 0.01 for each θ,
/// with μ = r cos θ, ν = r sin θ.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Fig2Row {
    pub r: f64,
    pub products: [f64; 5],
}

pub fn fig2_table() -> Result<Vec<Fig2Row>> {
    let mut rows = Vec::with_capacity(151);
    for i in 0..=150u32 {
        let r = i as f64 * 0.01;
        let mut products = [0.0; 5];
        for (slot, theta) in products.iter_mut().zip(FIG2_THETAS) {
            *slot = squeezing::uncertainty_product(r * theta.cos(), r * theta.sin())?;
        }
        rows.push(Fig2Row { r, products });
    }
    Ok(rows)
}

pub fn fig2_csv(rows: &[Fig2Row]) -> String {
    csv_document(
        &FIG2_HEADER,
        rows.iter()
            .map(|row| {
                let mut fields = vec![g17(row.r)];
                fields.extend(row.products.iter().map(|&p| g17(p)));
                fields
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_is_full_precision_and_stable() {
        assert_eq!(g17(0.25), "2.5000000000000000e-1");
        assert_eq!(g17(1.0 / 3.0), "3.3333333333333331e-1");
        let x = 0.1 + 0.2;
        assert_eq!(g17(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn fig1_table_shape_and_origin_row() {
        let rows = fig1_table().unwrap();
        assert_eq!(rows.len(), 101);
        assert_eq!(rows[0].mu, 0.0);
        assert_eq!(rows[0].var_x1_nu0, 0.25);
        assert_eq!(rows[0].var_x2_nu0, 0.25);
        let at_half_nu = trisqueeze::squeezing::variance_closed_form(0.0, 0.5).unwrap();
        assert_eq!(rows[0].var_x1_nu05, at_half_nu.var_x1);
        assert_eq!(rows[0].var_x2_nu05, at_half_nu.var_x2);
    }

    #[test]
    fn fig2_table_shape_and_origin_row() {
        let rows = fig2_table().unwrap();
        assert_eq!(rows.len(), 151);
        for p in rows[0].products {
            assert!((p - 0.25).abs() < 1e-15);
        }
        assert!(rows
            .iter()
            .all(|row| row.products.iter().all(|&p| p >= 0.25 - 1e-12)));
    }

    #[test]
    fn csv_has_lf_line_endings_only() {
        let rows = fig1_table().unwrap();
        let doc = fig1_csv(&rows);
        assert!(!doc.contains('\r'));
        assert_eq!(doc.lines().count(), 102);
    }
}
