//! Reference selectors: exhaustive best-subset search and greedy
//! forward/backward/stepwise selection driven by partial F statistics.

use rayon::prelude::*;

use crate::data::{Dataset, EvaluatedModel, ModelMask, ObjectiveVector};
use crate::error::{Error, Result};
use crate::pareto::Frontier;
use crate::regress::fit_ols;

/// Largest predictor count enumerated without an explicit override.
pub const EXHAUSTIVE_LIMIT: usize = 25;

/// Fits `mask` on all rows and wraps the result with in-sample objectives.
pub fn evaluate_in_sample(data: &Dataset, mask: &ModelMask) -> EvaluatedModel {
    let fit = fit_ols(data, mask);
    EvaluatedModel {
        mask: mask.clone(),
        objective: ObjectiveVector::new(mask.count_ones(), fit.mse),
        intercept: fit.intercept,
        coefficients: fit.coefficients,
    }
}

fn gray_mask(code: u64, k: usize) -> ModelMask {
    let g = code ^ (code >> 1);
    ModelMask::new((0..k).map(|j| g >> j & 1 == 1).collect())
}

fn better(candidate: &(f64, ModelMask), incumbent: &Option<(f64, ModelMask)>) -> bool {
    match incumbent {
        None => true,
        Some((e, m)) => candidate.0 < *e || (candidate.0 == *e && candidate.1 < *m),
    }
}

/// Minimum in-sample MSE mask for each complexity `0..=min(d, K)`, ties
/// broken toward the lexicographically smallest mask.
///
/// Masks are enumerated in Gray-code order; the code range is split across
/// worker threads and the per-complexity minima merged afterwards.
pub fn best_subsets(data: &Dataset, max_complexity: usize, allow_large: bool) -> Result<Vec<EvaluatedModel>> {
    let k = data.k();
    if k > EXHAUSTIVE_LIMIT && !allow_large {
        return Err(Error::TooManyPredictors { k, limit: EXHAUSTIVE_LIMIT });
    }
    if k >= 63 {
        return Err(Error::InvalidParameter(format!("cannot enumerate 2^{k} masks")));
    }
    let d = max_complexity.min(k);
    let total: u64 = 1 << k;
    let chunk: u64 = 1 << 10.min(k);
    let merge = |mut acc: Vec<Option<(f64, ModelMask)>>, other: Vec<Option<(f64, ModelMask)>>| {
        for (slot, cand) in acc.iter_mut().zip(other) {
            if let Some(c) = cand {
                if better(&c, slot) {
                    *slot = Some(c);
                }
            }
        }
        acc
    };
    let best = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|block| {
            let mut local: Vec<Option<(f64, ModelMask)>> = vec![None; d + 1];
            for code in block * chunk..((block + 1) * chunk).min(total) {
                let mask = gray_mask(code, k);
                let c = mask.count_ones();
                if c > d {
                    continue;
                }
                let cand = (fit_ols(data, &mask).mse, mask);
                if better(&cand, &local[c]) {
                    local[c] = Some(cand);
                }
            }
            local
        })
        .reduce(|| vec![None; d + 1], merge);
    Ok(best
        .into_iter()
        .map(|slot| {
            let (_, mask) = slot.expect("every complexity up to K has at least one mask");
            evaluate_in_sample(data, &mask)
        })
        .collect())
}

/// Non-dominated set of the per-complexity best subsets.
pub fn exhaustive_frontier(data: &Dataset, max_complexity: usize, allow_large: bool) -> Result<Frontier> {
    Ok(Frontier::from_models(&best_subsets(data, max_complexity, allow_large)?))
}

/// Models visited by a greedy selector. Each step adds or removes one
/// variable relative to the previous model (the first step relative to
/// `start`).
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub start: EvaluatedModel,
    pub steps: Vec<EvaluatedModel>,
}

impl Trajectory {
    pub fn final_model(&self) -> &EvaluatedModel {
        self.steps.last().unwrap_or(&self.start)
    }

    /// Every model on the path, `start` included.
    pub fn models(&self) -> impl Iterator<Item = &EvaluatedModel> {
        std::iter::once(&self.start).chain(&self.steps)
    }
}

fn sse(model: &EvaluatedModel, n: usize) -> f64 {
    model.objective.error * n as f64
}

/// Partial F statistic for the larger of two nested models:
/// `(SSE(small) - SSE(large)) / (SSE(large) / (n - |small| - 2))`.
pub fn partial_f(small: &EvaluatedModel, large: &EvaluatedModel, n: usize) -> f64 {
    let dof = n as f64 - small.objective.complexity as f64 - 2.0;
    let gain = sse(small, n) - sse(large, n);
    if dof <= 0.0 || gain <= 0.0 {
        return 0.0;
    }
    let rest = sse(large, n);
    if rest <= 0.0 {
        return f64::INFINITY;
    }
    gain / (rest / dof)
}

fn check_threshold(name: &str, t: f64) -> Result<()> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::InvalidParameter(format!("{name} threshold must be positive, got {t}")));
    }
    Ok(())
}

/// Best single addition to `current`, if its partial F exceeds `enter`.
fn forward_step(data: &Dataset, current: &EvaluatedModel, enter: f64) -> Option<EvaluatedModel> {
    let n = data.n();
    let candidates: Vec<usize> = (0..data.k()).filter(|&j| !current.mask.get(j)).collect();
    let mut best: Option<(f64, EvaluatedModel)> = None;
    for j in candidates {
        let mut mask = current.mask.clone();
        mask.set(j, true);
        let model = evaluate_in_sample(data, &mask);
        let f = partial_f(current, &model, n);
        if best.as_ref().is_none_or(|(bf, _)| f > *bf) {
            best = Some((f, model));
        }
    }
    best.filter(|(f, _)| *f > enter).map(|(_, m)| m)
}

/// Least useful variable of `current`, if its partial F is below `exit`.
fn backward_step(data: &Dataset, current: &EvaluatedModel, exit: f64) -> Option<EvaluatedModel> {
    let n = data.n();
    let mut worst: Option<(f64, EvaluatedModel)> = None;
    for j in current.mask.indices() {
        let mut mask = current.mask.clone();
        mask.set(j, false);
        let model = evaluate_in_sample(data, &mask);
        let f = partial_f(&model, current, n);
        if worst.as_ref().is_none_or(|(wf, _)| f < *wf) {
            worst = Some((f, model));
        }
    }
    worst.filter(|(f, _)| *f < exit).map(|(_, m)| m)
}

/// Starts from the intercept-only model and adds the variable with the
/// largest partial F while that statistic exceeds `enter_threshold`.
pub fn forward_selection(data: &Dataset, enter_threshold: f64) -> Result<Trajectory> {
    check_threshold("enter", enter_threshold)?;
    let start = evaluate_in_sample(data, &ModelMask::empty(data.k()));
    let mut steps = Vec::new();
    let mut current = start.clone();
    while let Some(next) = forward_step(data, &current, enter_threshold) {
        steps.push(next.clone());
        current = next;
    }
    Ok(Trajectory { start, steps })
}

/// Greedy subset of linearly independent columns, in column order.
fn max_rank_mask(data: &Dataset) -> ModelMask {
    let mut mask = ModelMask::empty(data.k());
    for j in 0..data.k() {
        mask.set(j, true);
        if fit_ols(data, &mask).rank_deficient {
            mask.set(j, false);
        }
    }
    mask
}

/// Starts from the full model and removes the variable with the smallest
/// partial F while that statistic is below `exit_threshold`.
///
/// A rank-deficient full model is replaced by a maximal set of linearly
/// independent columns (a warning is logged).
pub fn backward_elimination(data: &Dataset, exit_threshold: f64) -> Result<Trajectory> {
    check_threshold("exit", exit_threshold)?;
    let full = ModelMask::full(data.k());
    let mask = if fit_ols(data, &full).rank_deficient {
        let reduced = max_rank_mask(data);
        log::warn!(
            "full model is rank deficient; backward elimination starts from {} of {} columns",
            reduced.count_ones(),
            data.k()
        );
        reduced
    } else {
        full
    };
    let start = evaluate_in_sample(data, &mask);
    let mut steps = Vec::new();
    let mut current = start.clone();
    while let Some(next) = backward_step(data, &current, exit_threshold) {
        steps.push(next.clone());
        current = next;
    }
    Ok(Trajectory { start, steps })
}

/// Forward step followed by a backward sweep, repeated until no variable
/// enters. Requires `exit_threshold <= enter_threshold`.
pub fn stepwise(data: &Dataset, enter_threshold: f64, exit_threshold: f64) -> Result<Trajectory> {
    check_threshold("enter", enter_threshold)?;
    check_threshold("exit", exit_threshold)?;
    if exit_threshold > enter_threshold {
        return Err(Error::InvalidParameter(format!(
            "exit threshold {exit_threshold} exceeds enter threshold {enter_threshold}"
        )));
    }
    let start = evaluate_in_sample(data, &ModelMask::empty(data.k()));
    let mut steps = Vec::new();
    let mut current = start.clone();
    // Each add/remove pair strictly lowers SSE by a margin tied to the
    // thresholds, so cycling is impossible; the cap guards float edge cases.
    let cap = 4 * data.k() * data.k() + 16;
    while steps.len() < cap {
        let Some(added) = forward_step(data, &current, enter_threshold) else { break };
        steps.push(added.clone());
        current = added;
        while let Some(removed) = backward_step(data, &current, exit_threshold) {
            steps.push(removed.clone());
            current = removed;
        }
    }
    Ok(Trajectory { start, steps })
}
