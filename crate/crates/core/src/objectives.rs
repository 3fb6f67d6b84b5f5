//! Objective evaluation: complexity and error of a candidate mask.
//!
//! The error objective is either the in-sample MSE or a k-fold
//! cross-validated MSE. A single fold partition is drawn once per run and
//! reused for every mask, so that masks are compared on the same splits.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::RwLock;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::data::{Dataset, EvaluatedModel, ModelMask, ObjectiveVector};
use crate::error::{Error, Result};
use crate::regress::{fit_ols, fit_ols_rows, mse, predict_with};

/// `k` disjoint, balanced folds covering `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldPartition {
    folds: Vec<Vec<usize>>,
    seed: u64,
}

impl FoldPartition {
    pub fn folds(&self) -> &[Vec<usize>] {
        &self.folds
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn k(&self) -> usize {
        self.folds.len()
    }

    pub fn n(&self) -> usize {
        self.folds.iter().map(Vec::len).sum()
    }

    /// Row indices outside fold `f`, ascending.
    pub fn training_rows(&self, f: usize) -> Vec<usize> {
        let mut held = vec![false; self.n()];
        for &i in &self.folds[f] {
            held[i] = true;
        }
        (0..held.len()).filter(|&i| !held[i]).collect()
    }
}

/// Shuffles `0..n` with a seeded ChaCha8 stream and deals it into `k` folds
/// whose sizes differ by at most one.
pub fn make_partition(n: usize, k: usize, seed: u64) -> Result<FoldPartition> {
    if k < 2 || k > n {
        return Err(Error::InvalidParameter(format!("fold count {k} must be in 2..={n}")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let base = n / k;
    let extra = n % k;
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for f in 0..k {
        let size = base + usize::from(f < extra);
        let mut fold = order[start..start + size].to_vec();
        fold.sort_unstable();
        folds.push(fold);
        start += size;
    }
    Ok(FoldPartition { folds, seed })
}

#[derive(Clone, Debug, PartialEq)]
pub enum ObjectiveSpec {
    InSample,
    CrossValidation(FoldPartition),
}

impl ObjectiveSpec {
    pub fn cross_validation(n: usize, k: usize, seed: u64) -> Result<Self> {
        make_partition(n, k, seed).map(ObjectiveSpec::CrossValidation)
    }
}

pub fn in_sample_objective(data: &Dataset, mask: &ModelMask) -> ObjectiveVector {
    ObjectiveVector::new(mask.count_ones(), fit_ols(data, mask).mse)
}

/// Mean over folds of the validation MSE of a model trained on the other
/// folds.
pub fn cv_objective(data: &Dataset, mask: &ModelMask, partition: &FoldPartition) -> Result<ObjectiveVector> {
    if partition.n() != data.n() {
        return Err(Error::Dimension(format!(
            "partition covers {} rows, dataset has {}",
            partition.n(),
            data.n()
        )));
    }
    let mut total = 0.0;
    for (f, held_out) in partition.folds().iter().enumerate() {
        let train = partition.training_rows(f);
        if train.is_empty() {
            return Err(Error::InvalidParameter(format!("fold {f} leaves no training rows")));
        }
        let fit = fit_ols_rows(data, mask, &train);
        let x = data.x().select_rows(held_out);
        let yhat = predict_with(fit.intercept, &fit.coefficients, mask, &x)?;
        let y: Vec<f64> = held_out.iter().map(|&i| data.y()[i]).collect();
        total += mse(&y, &yhat)?;
    }
    Ok(ObjectiveVector::new(mask.count_ones(), total / partition.k() as f64))
}

/// Memoizing objective evaluator for one run.
///
/// Cached entries are keyed on the raw mask. Values are deterministic, so a
/// concurrent duplicate insert stores an identical entry.
pub struct Evaluator<'a> {
    data: &'a Dataset,
    spec: ObjectiveSpec,
    cache: RwLock<HashMap<ModelMask, EvaluatedModel>>,
    queries: AtomicUsize,
}

impl<'a> Evaluator<'a> {
    pub fn new(data: &'a Dataset, spec: ObjectiveSpec) -> Result<Self> {
        if let ObjectiveSpec::CrossValidation(p) = &spec {
            if p.n() != data.n() {
                return Err(Error::Dimension(format!(
                    "partition covers {} rows, dataset has {}",
                    p.n(),
                    data.n()
                )));
            }
        }
        Ok(Self { data, spec, cache: RwLock::new(HashMap::new()), queries: AtomicUsize::new(0) })
    }

    pub fn data(&self) -> &Dataset {
        self.data
    }

    pub fn spec(&self) -> &ObjectiveSpec {
        &self.spec
    }

    /// Fits the mask on all rows (coefficients are always the full-data fit)
    /// and scores it under the configured error objective.
    fn compute(&self, mask: &ModelMask) -> EvaluatedModel {
        let fit = fit_ols(self.data, mask);
        let error = match &self.spec {
            ObjectiveSpec::InSample => fit.mse,
            ObjectiveSpec::CrossValidation(p) => {
                cv_objective(self.data, mask, p).expect("partition validated at construction").error
            }
        };
        EvaluatedModel {
            mask: mask.clone(),
            objective: ObjectiveVector::new(mask.count_ones(), error),
            intercept: fit.intercept,
            coefficients: fit.coefficients,
        }
    }

    pub fn evaluate(&self, mask: &ModelMask) -> EvaluatedModel {
        self.queries.fetch_add(1, Ordering::Relaxed);
        if let Some(hit) = self.cache.read().unwrap().get(mask) {
            return hit.clone();
        }
        let model = self.compute(mask);
        self.cache.write().unwrap().insert(mask.clone(), model.clone());
        model
    }

    /// Evaluates a batch, fitting each distinct uncached mask once, in
    /// parallel. Output order follows the input.
    pub fn evaluate_batch(&self, masks: &[ModelMask]) -> Vec<EvaluatedModel> {
        self.queries.fetch_add(masks.len(), Ordering::Relaxed);
        let missing: Vec<&ModelMask> = {
            let cache = self.cache.read().unwrap();
            let mut seen = std::collections::HashSet::new();
            masks.iter().filter(|m| !cache.contains_key(*m) && seen.insert(*m)).collect()
        };
        let fresh: Vec<EvaluatedModel> = missing.par_iter().map(|m| self.compute(m)).collect();
        let mut cache = self.cache.write().unwrap();
        for model in fresh {
            cache.insert(model.mask.clone(), model);
        }
        masks.iter().map(|m| cache[m].clone()).collect()
    }

    /// Number of objective queries, cache hits included.
    pub fn queries(&self) -> usize {
        self.queries.load(Ordering::Relaxed)
    }

    /// Number of distinct masks actually fitted.
    pub fn unique_evaluations(&self) -> usize {
        self.cache.read().unwrap().len()
    }

    /// Every model evaluated so far, in mask order.
    pub fn evaluated_models(&self) -> Vec<EvaluatedModel> {
        let mut all: Vec<EvaluatedModel> = self.cache.read().unwrap().values().cloned().collect();
        all.sort_by(|a, b| a.mask.cmp(&b.mask));
        all
    }
}

/// Which algebraic form of AIC/BIC to evaluate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CriterionForm {
    /// `2k/n + ln(mse)` and `k ln(n)/n + ln(mse)`.
    #[default]
    LogMse,
    /// `2k/n - 2 ln(mse)` and `k ln(n)/n - 2 ln(mse)`. Kept for auditing
    /// published tables that print this form; it rewards larger errors and
    /// is not a usable selection criterion.
    NegTwoLogMse,
}

fn log_term(mse: f64, form: CriterionForm) -> Result<f64> {
    if mse.is_nan() || mse <= 0.0 || mse.is_infinite() {
        return Err(Error::UndefinedCriterion(mse));
    }
    Ok(match form {
        CriterionForm::LogMse => mse.ln(),
        CriterionForm::NegTwoLogMse => -2.0 * mse.ln(),
    })
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("sample size must be positive".into()));
    }
    Ok(())
}

/// Per-observation Akaike criterion for a Gaussian linear model with `k`
/// coefficients.
pub fn aic(mse: f64, k: usize, n: usize, form: CriterionForm) -> Result<f64> {
    check_n(n)?;
    Ok(2.0 * k as f64 / n as f64 + log_term(mse, form)?)
}

/// Per-observation Bayesian criterion for a Gaussian linear model with `k`
/// coefficients.
pub fn bic(mse: f64, k: usize, n: usize, form: CriterionForm) -> Result<f64> {
    check_n(n)?;
    Ok(k as f64 * (n as f64).ln() / n as f64 + log_term(mse, form)?)
}
