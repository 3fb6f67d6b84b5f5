//! Synthetic benchmarks with known true models.
//!
//! All generators draw from a ChaCha8 stream seeded with `seed`; Gaussian
//! variates use the ziggurat sampler of `rand_distr::StandardNormal`. Both are
//! platform independent, so a seed names the same dataset everywhere.
//!
//! * **Additive functional forms.** Five uniform predictors
//!   `x1~U(0,1), x2~U(0,2), x3~U(0,1), x4~U(0,4), x5~U(0,5)` and
//!   `y = 10 + 5 x1 + 2 exp(x2) + 5 x3 + 3 x3^3 + 0.1 x4^3 + 0.2 e`. Expanding
//!   every predictor into `{x, x^2, x^3, ln x, exp x}` gives 25 candidates.
//! * **Correlated predictors.** `x_i = 2 z + d_i` with shared `z` and
//!   independent `d_i`, all standard normal (pairwise correlation 0.8), and
//!   `y = sum_{j<=10} (j/10) x_j + e`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, ModelMask};
use crate::error::{Error, Result};

/// The generating model: which columns are truly active and with what
/// coefficients (in mask order).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrueModel {
    pub names: Vec<String>,
    #[serde(with = "mask_string")]
    pub mask: ModelMask,
    pub intercept: f64,
    pub coefficients: Vec<f64>,
}

mod mask_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::data::ModelMask;

    pub fn serialize<S: Serializer>(mask: &ModelMask, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&mask.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ModelMask, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl TrueModel {
    pub fn active_names(&self) -> Vec<&str> {
        self.mask.indices().into_iter().map(|j| self.names[j].as_str()).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Simulated {
    pub data: Dataset,
    pub truth: TrueModel,
    /// The noise term added to each response, unscaled draws times the
    /// noise standard deviation.
    pub noise: Vec<f64>,
}

const EXAMPLE1_UPPER: [f64; 5] = [1.0, 2.0, 1.0, 4.0, 5.0];
const FORM_SUFFIXES: [&str; 5] = ["lin", "sq", "cube", "log", "exp"];

/// Additive functional-form benchmark with the standard noise level 0.2.
/// Returns the five raw predictors; `truth` is expressed over the expanded
/// 25-column space produced by [`expand_features`].
pub fn gen_example1(n: usize, seed: u64) -> Result<Simulated> {
    gen_example1_with_noise(n, seed, 0.2)
}

pub fn gen_example1_with_noise(n: usize, seed: u64, noise_sd: f64) -> Result<Simulated> {
    if n < 10 {
        return Err(Error::InvalidParameter(format!("need n >= 10, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<f64>> = (0..5).map(|_| Vec::with_capacity(n)).collect();
    let mut y = Vec::with_capacity(n);
    let mut noise = Vec::with_capacity(n);
    while y.len() < n {
        let row: [f64; 5] = EXAMPLE1_UPPER.map(|hi| rng.random_range(0.0..hi));
        let e: f64 = rng.sample::<f64, _>(StandardNormal) * noise_sd;
        // a zero draw has no logarithm; redraw the whole row
        if row.contains(&0.0) {
            continue;
        }
        let [x1, x2, x3, x4, _] = row;
        y.push(10.0 + 5.0 * x1 + 2.0 * x2.exp() + 5.0 * x3 + 3.0 * x3.powi(3) + 0.1 * x4.powi(3) + e);
        noise.push(e);
        for (c, v) in cols.iter_mut().zip(row) {
            c.push(v);
        }
    }
    let raw_names = (1..=5).map(|i| format!("x{i}")).collect();
    let data = Dataset::from_columns(cols, y, raw_names)?;
    let names = expanded_names(data.names());
    let active = ["x1_lin", "x2_exp", "x3_lin", "x3_cube", "x4_cube"];
    let idx: Vec<usize> = active.iter().map(|a| names.iter().position(|n| n == a).unwrap()).collect();
    let truth = TrueModel {
        mask: ModelMask::from_indices(names.len(), &idx),
        names,
        intercept: 10.0,
        coefficients: vec![5.0, 2.0, 5.0, 3.0, 0.1],
    };
    Ok(Simulated { data, truth, noise })
}

fn expanded_names(raw: &[String]) -> Vec<String> {
    raw.iter().flat_map(|r| FORM_SUFFIXES.iter().map(move |s| format!("{r}_{s}"))).collect()
}

/// Replaces each column `x` with `x, x^2, x^3, ln x, exp x`, named with the
/// suffixes `_lin, _sq, _cube, _log, _exp`.
pub fn expand_features(data: &Dataset) -> Result<Dataset> {
    let mut cols = Vec::with_capacity(data.k() * 5);
    for (j, name) in data.names().iter().enumerate() {
        let x = data.column(j);
        if let Some((row, &value)) = x.iter().enumerate().find(|(_, &v)| v <= 0.0) {
            return Err(Error::NonPositiveLog { column: name.clone(), row: row + 1, value });
        }
        cols.push(x.to_vec());
        cols.push(x.iter().map(|v| v * v).collect());
        cols.push(x.iter().map(|v| v * v * v).collect());
        cols.push(x.iter().map(|v| v.ln()).collect());
        cols.push(x.iter().map(|v| v.exp()).collect());
    }
    Dataset::from_columns(cols, data.y().as_slice().to_vec(), expanded_names(data.names()))
}

/// Correlated-predictor benchmark with unit noise.
pub fn gen_example2(n: usize, p: usize, seed: u64) -> Result<Simulated> {
    gen_example2_with_noise(n, p, seed, 1.0)
}

pub fn gen_example2_with_noise(n: usize, p: usize, seed: u64, noise_sd: f64) -> Result<Simulated> {
    if n < 20 || p < 10 {
        return Err(Error::InvalidParameter(format!("need n >= 20 and p >= 10, got n={n}, p={p}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<f64>> = (0..p).map(|_| Vec::with_capacity(n)).collect();
    let mut y = Vec::with_capacity(n);
    let mut noise = Vec::with_capacity(n);
    let coefficients: Vec<f64> = (1..=10).map(|j| j as f64 / 10.0).collect();
    for _ in 0..n {
        let z: f64 = rng.sample(StandardNormal);
        for c in cols.iter_mut() {
            let d: f64 = rng.sample(StandardNormal);
            c.push(2.0 * z + d);
        }
        let e = rng.sample::<f64, _>(StandardNormal) * noise_sd;
        let row = cols[0].len() - 1;
        y.push(coefficients.iter().zip(&cols).map(|(b, c)| b * c[row]).sum::<f64>() + e);
        noise.push(e);
    }
    let names: Vec<String> = (1..=p).map(|i| format!("x{i}")).collect();
    let data = Dataset::from_columns(cols, y, names.clone())?;
    let truth = TrueModel {
        mask: ModelMask::from_indices(p, &(0..10).collect::<Vec<_>>()),
        names,
        intercept: 0.0,
        coefficients,
    };
    Ok(Simulated { data, truth, noise })
}

impl Simulated {
    /// Keeps the first `k` predictors; the true model is restricted
    /// accordingly.
    pub fn truncate_predictors(&self, k: usize) -> Result<Simulated> {
        let data = self.data.truncate_predictors(k)?;
        let k = data.k();
        let kept: Vec<usize> = self.truth.mask.indices().into_iter().filter(|&j| j < k).collect();
        let coefficients = kept.iter().map(|&j| {
            let pos = self.truth.mask.indices().iter().position(|&i| i == j).unwrap();
            self.truth.coefficients[pos]
        });
        let truth = TrueModel {
            names: self.truth.names[..k].to_vec(),
            mask: ModelMask::from_indices(k, &kept),
            intercept: self.truth.intercept,
            coefficients: coefficients.collect(),
        };
        Ok(Simulated { data, truth, noise: self.noise.clone() })
    }
}

/// Number of truly active variables selected minus the number of inactive
/// ones selected.
pub fn correct_minus_incorrect(mask: &ModelMask, truth: &TrueModel) -> Result<i64> {
    if mask.len() != truth.mask.len() {
        return Err(Error::Dimension(format!(
            "mask has {} bits, true model {}",
            mask.len(),
            truth.mask.len()
        )));
    }
    let (mut right, mut wrong) = (0i64, 0i64);
    for (&sel, &act) in mask.bits().iter().zip(truth.mask.bits()) {
        match (sel, act) {
            (true, true) => right += 1,
            (true, false) => wrong += 1,
            _ => {}
        }
    }
    Ok(right - wrong)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regress::fit_ols;

    #[test]
    fn example1_ranges_and_moments() {
        let sim = gen_example1(1000, 7).unwrap();
        assert_eq!((sim.data.n(), sim.data.k()), (1000, 5));
        for (j, hi) in EXAMPLE1_UPPER.iter().enumerate() {
            assert!(sim.data.column(j).iter().all(|v| *v > 0.0 && v < hi));
        }
        // E[y] = 10 + 2.5 + (e^2 - 1) + 2.5 + 0.75 + 1.6
        let expected = 10.0 + 2.5 + (std::f64::consts::E.powi(2) - 1.0) + 2.5 + 0.75 + 1.6;
        assert!((sim.data.y().mean() - expected).abs() < 0.5);
    }

    #[test]
    fn example1_response_reconstructs_from_columns() {
        let sim = gen_example1(200, 3).unwrap();
        let expanded = expand_features(&sim.data).unwrap();
        let idx = sim.truth.mask.indices();
        for i in 0..200 {
            let mut v = sim.truth.intercept + sim.noise[i];
            for (&j, b) in idx.iter().zip(&sim.truth.coefficients) {
                v += b * expanded.column(j)[i];
            }
            assert!((v - sim.data.y()[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn noiseless_example1_is_fit_exactly() {
        let sim = gen_example1_with_noise(100, 4, 0.0).unwrap();
        let expanded = expand_features(&sim.data).unwrap();
        assert!(fit_ols(&expanded, &sim.truth.mask).mse <= 1e-10);
        assert_eq!(sim.truth.active_names(), ["x1_lin", "x2_exp", "x3_lin", "x3_cube", "x4_cube"]);
    }

    #[test]
    fn expansion_examples() {
        let d = Dataset::from_columns(vec![vec![1.0, 2.0]], vec![0.0, 1.0], vec!["a".into()]).unwrap();
        let e = expand_features(&d).unwrap();
        assert_eq!(e.names(), ["a_lin", "a_sq", "a_cube", "a_log", "a_exp"]);
        let row0: Vec<f64> = (0..5).map(|j| e.column(j)[0]).collect();
        assert_eq!(row0, vec![1.0, 1.0, 1.0, 0.0, std::f64::consts::E]);
        let row1: Vec<f64> = (0..5).map(|j| e.column(j)[1]).collect();
        assert_eq!(row1, vec![2.0, 4.0, 8.0, 2f64.ln(), 2f64.exp()]);

        let sim = gen_example1(50, 1).unwrap();
        let e = expand_features(&sim.data).unwrap();
        assert_eq!(e.k(), 25);
        for j in 0..5 {
            let x = sim.data.column(j);
            for (i, v) in x.iter().enumerate() {
                assert_eq!(e.column(5 * j + 3)[i], v.ln());
                assert_eq!(e.column(5 * j + 4)[i], v.exp());
            }
        }

        let bad = Dataset::from_columns(vec![vec![1.0, 0.0]], vec![0.0, 1.0], vec!["a".into()]).unwrap();
        assert!(matches!(expand_features(&bad), Err(Error::NonPositiveLog { row: 2, .. })));
    }

    #[test]
    fn example2_shape_and_noiseless_fit() {
        let sim = gen_example2(500, 100, 1).unwrap();
        assert_eq!((sim.data.n(), sim.data.k()), (500, 100));
        let quiet = gen_example2_with_noise(60, 12, 2, 0.0).unwrap();
        assert!(fit_ols(&quiet.data, &quiet.truth.mask).mse <= 1e-10);
        assert!(gen_example2(19, 10, 0).is_err());
        assert!(gen_example2(20, 9, 0).is_err());
    }

    #[test]
    fn generators_are_deterministic_in_seed() {
        assert_eq!(gen_example2(30, 10, 5).unwrap().data, gen_example2(30, 10, 5).unwrap().data);
        assert_ne!(gen_example2(30, 10, 5).unwrap().data, gen_example2(30, 10, 6).unwrap().data);
        assert_eq!(gen_example1(30, 5).unwrap().data, gen_example1(30, 5).unwrap().data);
        assert_ne!(gen_example1(30, 5).unwrap().data, gen_example1(30, 6).unwrap().data);
    }

    #[test]
    fn correct_minus_incorrect_examples() {
        let sim = gen_example2(20, 100, 0).unwrap();
        assert_eq!(correct_minus_incorrect(&sim.truth.mask, &sim.truth).unwrap(), 10);
        assert_eq!(correct_minus_incorrect(&ModelMask::empty(100), &sim.truth).unwrap(), 0);
        assert_eq!(correct_minus_incorrect(&ModelMask::full(100), &sim.truth).unwrap(), -80);
        assert!(correct_minus_incorrect(&ModelMask::full(99), &sim.truth).is_err());
    }

    #[test]
    fn truncation_restricts_truth() {
        let sim = gen_example2(30, 20, 0).unwrap().truncate_predictors(8).unwrap();
        assert_eq!(sim.data.k(), 8);
        assert_eq!(sim.truth.mask.count_ones(), 8);
        assert_eq!(sim.truth.coefficients.len(), 8);
        assert_eq!(sim.truth.coefficients[7], 0.8);
    }
}
