use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::pareto::Frontier;
use crate::regress::{mse, predict_with};

/// Random split of `0..n` into a training part of `round(n * fraction)` rows
/// and an evaluation part holding the rest. Both parts are sorted.
pub fn train_eval_split(n: usize, train_fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!("train fraction {train_fraction} outside (0, 1)")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let cut = (n as f64 * train_fraction).round() as usize;
    let (mut train, mut eval) = (order[..cut].to_vec(), order[cut..].to_vec());
    train.sort_unstable();
    eval.sort_unstable();
    Ok((train, eval))
}

/// Mean evaluation-set MSE of the frontier models with `lo <= complexity <=
/// hi`, using each model's stored (training) coefficients.
pub fn kappa_single(frontier: &Frontier, eval: &Dataset, lo: usize, hi: usize) -> Result<f64> {
    let y = eval.y().as_slice();
    let mut total = 0.0;
    let mut count = 0usize;
    for m in frontier.in_range(lo, hi) {
        let yhat = predict_with(m.intercept, &m.coefficients, &m.mask, eval.x())?;
        total += mse(y, &yhat)?;
        count += 1;
    }
    if count == 0 {
        return Err(Error::EmptySelection(format!("no frontier model with complexity in {lo}..={hi}")));
    }
    Ok(total / count as f64)
}

/// Average of [`kappa_single`] over paired frontiers and evaluation sets.
/// Every model in range counts equally within its frontier.
pub fn kappa_metric(pairs: &[(&Frontier, &Dataset)], lo: usize, hi: usize) -> Result<f64> {
    if lo > hi {
        return Err(Error::InvalidParameter(format!("empty complexity range {lo}..={hi}")));
    }
    if pairs.is_empty() {
        return Err(Error::EmptySelection("no frontiers given".into()));
    }
    let mut per_split = pairs
        .iter()
        .map(|(f, d)| kappa_single(f, d, lo, hi))
        .collect::<Result<Vec<f64>>>()?;
    // summation order fixed by value so the result ignores pair order
    per_split.sort_by(f64::total_cmp);
    Ok(per_split.iter().sum::<f64>() / per_split.len() as f64)
}
