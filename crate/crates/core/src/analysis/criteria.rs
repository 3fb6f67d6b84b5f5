use std::fmt::Write;

use crate::data::mask_complexity;
use crate::objectives::{aic, bic, CriterionForm};
use crate::pareto::Frontier;

#[derive(Clone, Debug, PartialEq)]
pub struct CriteriaRow {
    /// Number of selected predictors.
    pub complexity: usize,
    /// Coefficient count used in the penalty terms.
    pub coefficients: usize,
    pub mse: f64,
    /// `None` where the criterion is undefined (zero error).
    pub aic: Option<f64>,
    pub bic: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriteriaTable {
    pub rows: Vec<CriteriaRow>,
    /// Row index minimizing AIC, ties toward fewer coefficients.
    pub aic_argmin: Option<usize>,
    pub bic_argmin: Option<usize>,
}

fn argmin(values: impl Iterator<Item = Option<f64>>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.enumerate() {
        if let Some(v) = v {
            if best.is_none_or(|(_, b)| v < b) {
                best = Some((i, v));
            }
        }
    }
    best.map(|(i, _)| i)
}

/// AIC and BIC of every frontier model. The coefficient count is the number
/// of predictors, plus one when `count_intercept` is set.
pub fn criteria_scan(frontier: &Frontier, n: usize, count_intercept: bool, form: CriterionForm) -> CriteriaTable {
    let rows: Vec<CriteriaRow> = frontier
        .iter()
        .map(|m| {
            let k = mask_complexity(&m.mask, count_intercept);
            CriteriaRow {
                complexity: m.objective.complexity,
                coefficients: k,
                mse: m.objective.error,
                aic: aic(m.objective.error, k, n, form).ok(),
                bic: bic(m.objective.error, k, n, form).ok(),
            }
        })
        .collect();
    let aic_argmin = argmin(rows.iter().map(|r| r.aic));
    let bic_argmin = argmin(rows.iter().map(|r| r.bic));
    CriteriaTable { rows, aic_argmin, bic_argmin }
}

impl CriteriaTable {
    /// Fixed-width text table; `*` marks the minimizing rows.
    pub fn to_text(&self) -> String {
        let fmt = |v: Option<f64>| v.map_or_else(|| "undefined".to_string(), |v| format!("{v:.6}"));
        let mut out = format!("{:>10} {:>12} {:>14} {:>14}  {:>14}\n", "variables", "coefficients", "mse", "aic", "bic");
        for (i, r) in self.rows.iter().enumerate() {
            let a_mark = if self.aic_argmin == Some(i) { "*" } else { " " };
            let b_mark = if self.bic_argmin == Some(i) { "*" } else { " " };
            let _ = writeln!(
                out,
                "{:>10} {:>12} {:>14.6e} {:>14}{a_mark} {:>14}{b_mark}",
                r.complexity,
                r.coefficients,
                r.mse,
                fmt(r.aic),
                fmt(r.bic)
            );
        }
        out
    }
}
