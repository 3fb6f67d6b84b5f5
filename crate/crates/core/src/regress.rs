//! Least-squares fitting of masked submodels.
//!
//! Every model carries an intercept. The design matrix `[1 | X_mask]` is
//! reduced with a Householder QR, and the small triangular factor is then
//! decomposed with an SVD. Singular values below `max(n, p) * eps * s_max`
//! are treated as zero, which yields the minimum-norm solution for
//! rank-deficient designs.

use nalgebra::{DMatrix, DVector};

use crate::data::{Dataset, ModelMask};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct FitResult {
    pub intercept: f64,
    /// One per selected column, in mask order.
    pub coefficients: Vec<f64>,
    /// Mean squared residual over the rows used for fitting (divisor n).
    pub mse: f64,
    pub rank_deficient: bool,
}

/// Fits `y ~ 1 + X[:, mask]` over all rows.
///
/// Panics if the mask length differs from the predictor count.
pub fn fit_ols(data: &Dataset, mask: &ModelMask) -> FitResult {
    assert_eq!(mask.len(), data.k(), "mask length must equal predictor count");
    let n = data.n();
    let cols = mask.indices();
    let design = DMatrix::from_fn(n, cols.len() + 1, |i, c| {
        if c == 0 {
            1.0
        } else {
            data.column(cols[c - 1])[i]
        }
    });
    finish(design, data.y().clone())
}

/// Fits `y ~ 1 + X[:, mask]` using only the listed rows.
pub fn fit_ols_rows(data: &Dataset, mask: &ModelMask, rows: &[usize]) -> FitResult {
    assert_eq!(mask.len(), data.k(), "mask length must equal predictor count");
    let cols = mask.indices();
    let design = DMatrix::from_fn(rows.len(), cols.len() + 1, |r, c| {
        if c == 0 {
            1.0
        } else {
            data.column(cols[c - 1])[rows[r]]
        }
    });
    let y = DVector::from_iterator(rows.len(), rows.iter().map(|&i| data.y()[i]));
    finish(design, y)
}

fn finish(design: DMatrix<f64>, y: DVector<f64>) -> FitResult {
    let (beta, rank_deficient) = least_squares(design.clone(), &y);
    let residual = y - &design * &beta;
    let mse = residual.norm_squared() / residual.len() as f64;
    FitResult {
        intercept: beta[0],
        coefficients: beta.as_slice()[1..].to_vec(),
        mse,
        rank_deficient,
    }
}

/// Minimum-norm least-squares solution of `a * beta = b`, plus a flag for
/// numerical rank deficiency.
pub fn least_squares(a: DMatrix<f64>, b: &DVector<f64>) -> (DVector<f64>, bool) {
    let (n, p) = a.shape();
    if n >= p {
        let qr = a.qr();
        let mut qtb = b.clone();
        qr.q_tr_mul(&mut qtb);
        let r = qr.r();
        let rhs = qtb.rows(0, p).into_owned();
        solve_svd(r, &rhs, n.max(p))
    } else {
        solve_svd(a, b, n.max(p))
    }
}

// The SVD comes from faer: nalgebra's bidiagonal SVD can return a wrong
// factorization for some well-conditioned upper-triangular inputs.
fn solve_svd(m: DMatrix<f64>, rhs: &DVector<f64>, scale: usize) -> (DVector<f64>, bool) {
    let p = m.ncols();
    let fm = faer::Mat::from_fn(m.nrows(), p, |i, j| m[(i, j)]);
    let Ok(svd) = fm.thin_svd() else {
        return (DVector::zeros(p), true);
    };
    let (u, s, v) = (svd.U(), svd.S().column_vector(), svd.V());
    let s_max = (0..s.nrows()).map(|i| s[i]).fold(0.0, f64::max);
    let tol = scale as f64 * f64::EPSILON * s_max;
    let mut beta = DVector::zeros(p);
    let mut rank = 0;
    for c in 0..s.nrows() {
        if s[c] <= tol {
            continue;
        }
        rank += 1;
        let w = (0..u.nrows()).map(|i| u[(i, c)] * rhs[i]).sum::<f64>() / s[c];
        for j in 0..p {
            beta[j] += w * v[(j, c)];
        }
    }
    (beta, rank < p)
}

/// `intercept + X[:, mask] * coefficients` for every row of `x` (m x K).
pub fn predict(fit: &FitResult, mask: &ModelMask, x: &DMatrix<f64>) -> Result<Vec<f64>> {
    predict_with(fit.intercept, &fit.coefficients, mask, x)
}

pub fn predict_with(intercept: f64, coefficients: &[f64], mask: &ModelMask, x: &DMatrix<f64>) -> Result<Vec<f64>> {
    if x.ncols() != mask.len() {
        return Err(Error::Dimension(format!(
            "matrix has {} columns but mask has {} bits",
            x.ncols(),
            mask.len()
        )));
    }
    let cols = mask.indices();
    if cols.len() != coefficients.len() {
        return Err(Error::Dimension(format!(
            "{} coefficients for {} selected columns",
            coefficients.len(),
            cols.len()
        )));
    }
    let mut out = vec![intercept; x.nrows()];
    for (&j, &b) in cols.iter().zip(coefficients) {
        for (o, v) in out.iter_mut().zip(x.column(j).iter()) {
            *o += b * v;
        }
    }
    Ok(out)
}

/// Mean squared difference, `(1/n) * sum (y_i - yhat_i)^2`.
pub fn mse(y: &[f64], yhat: &[f64]) -> Result<f64> {
    if y.len() != yhat.len() {
        return Err(Error::Dimension(format!("{} observations vs {} predictions", y.len(), yhat.len())));
    }
    if y.is_empty() {
        return Err(Error::Dimension("mse of an empty vector".into()));
    }
    Ok(y.iter().zip(yhat).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / y.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dataset(columns: Vec<Vec<f64>>, y: Vec<f64>) -> Dataset {
        let names = (0..columns.len()).map(|j| format!("x{}", j + 1)).collect();
        Dataset::from_columns(columns, y, names).unwrap()
    }

    fn random_dataset(n: usize, k: usize, seed: u64) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cols: Vec<Vec<f64>> = (0..k).map(|_| (0..n).map(|_| rng.random_range(-2.0..2.0)).collect()).collect();
        let y = (0..n)
            .map(|i| cols.iter().enumerate().map(|(j, c)| (j as f64 - 1.5) * c[i]).sum::<f64>() + rng.random_range(-1.0..1.0))
            .collect();
        dataset(cols, y)
    }

    #[test]
    fn exact_linear_relation_is_recovered() {
        let x1: Vec<f64> = (0..10).map(|i| i as f64 * 0.7 - 1.0).collect();
        let y = x1.iter().map(|v| 2.0 * v).collect();
        let d = dataset(vec![x1], y);
        let fit = fit_ols(&d, &ModelMask::full(1));
        assert!(fit.intercept.abs() < 1e-10);
        assert!((fit.coefficients[0] - 2.0).abs() < 1e-10);
        assert!(fit.mse < 1e-10);
        assert!(!fit.rank_deficient);
    }

    #[test]
    fn empty_mask_gives_mean_and_population_variance() {
        let y = vec![1.0, 2.0, 4.0, 9.0];
        let d = dataset(vec![vec![0.0, 1.0, 0.0, 1.0]], y.clone());
        let fit = fit_ols(&d, &ModelMask::empty(1));
        let mean = 4.0;
        let var = y.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / 4.0;
        assert!((fit.intercept - mean).abs() < 1e-12);
        assert!((fit.mse - var).abs() < 1e-12);
        assert!(fit.coefficients.is_empty());
    }

    #[test]
    fn duplicated_columns_give_minimum_norm_solution() {
        let x: Vec<f64> = (0..8).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 1.0 + 4.0 * v).collect();
        let d = dataset(vec![x.clone(), x], y);
        let fit = fit_ols(&d, &ModelMask::full(2));
        assert!(fit.rank_deficient);
        // minimum norm splits the weight evenly between identical columns
        assert!((fit.coefficients[0] - 2.0).abs() < 1e-9);
        assert!((fit.coefficients[1] - 2.0).abs() < 1e-9);
        assert!(fit.mse < 1e-20);
    }

    #[test]
    fn more_columns_than_rows() {
        let d = random_dataset(4, 6, 1);
        let fit = fit_ols(&d, &ModelMask::full(6));
        assert!(fit.rank_deficient);
        assert!(fit.mse < 1e-20);
        assert!(fit.coefficients.iter().all(|c| c.is_finite()));
    }

    #[test]
    fn predict_examples() {
        let fit = FitResult { intercept: 1.0, coefficients: vec![2.0], mse: 0.0, rank_deficient: false };
        let mask: ModelMask = "10".parse().unwrap();
        let x = DMatrix::from_row_slice(1, 2, &[3.0, 99.0]);
        assert_eq!(predict(&fit, &mask, &x).unwrap(), vec![7.0]);

        let constant = FitResult { intercept: 5.0, coefficients: vec![], mse: 0.0, rank_deficient: false };
        let x = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(predict(&constant, &ModelMask::empty(2), &x).unwrap(), vec![5.0; 3]);

        let wide = DMatrix::zeros(1, 3);
        assert!(predict(&fit, &mask, &wide).is_err());
    }

    #[test]
    fn training_residuals_reproduce_fit_mse() {
        let d = random_dataset(40, 4, 9);
        let mask: ModelMask = "1101".parse().unwrap();
        let fit = fit_ols(&d, &mask);
        let yhat = predict(&fit, &mask, d.x()).unwrap();
        // independent recomputation from residuals
        let mut acc = 0.0;
        for (a, b) in d.y().iter().zip(&yhat) {
            acc += (a - b).powi(2);
        }
        assert!((acc / 40.0 - fit.mse).abs() < 1e-12);
    }

    #[test]
    fn mse_examples() {
        assert_eq!(mse(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(mse(&[0.0, 0.0], &[1.0, 1.0]).unwrap(), 1.0);
        assert!((mse(&[1.0, 2.0, 3.0], &[1.0, 1.0, 1.0]).unwrap() - 5.0 / 3.0).abs() < 1e-15);
        assert!(mse(&[1.0], &[1.0, 2.0]).is_err());
        assert!(mse(&[], &[]).is_err());
    }

    #[test]
    fn row_subset_fit_matches_fit_on_subset_dataset() {
        let d = random_dataset(30, 3, 4);
        let rows: Vec<usize> = (0..30).filter(|i| i % 3 != 0).collect();
        let mask: ModelMask = "101".parse().unwrap();
        let a = fit_ols_rows(&d, &mask, &rows);
        let b = fit_ols(&d.select_rows(&rows).unwrap(), &mask);
        assert_eq!(a, b);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn residuals_orthogonal_to_design(seed in any::<u64>(), bits in proptest::collection::vec(any::<bool>(), 5)) {
            let d = random_dataset(25, 5, seed);
            let mask = ModelMask::new(bits);
            let fit = fit_ols(&d, &mask);
            prop_assume!(!fit.rank_deficient);
            let yhat = predict(&fit, &mask, d.x()).unwrap();
            let r: Vec<f64> = d.y().iter().zip(&yhat).map(|(a, b)| a - b).collect();
            let tol = 1e-8 * d.y().norm();
            prop_assert!(r.iter().sum::<f64>().abs() < tol);
            for j in mask.indices() {
                let dot: f64 = r.iter().zip(d.column(j)).map(|(a, b)| a * b).sum();
                prop_assert!(dot.abs() < tol);
            }
        }

        #[test]
        fn nested_masks_never_increase_mse(seed in any::<u64>(), a in proptest::collection::vec(any::<bool>(), 6), extra in proptest::collection::vec(any::<bool>(), 6)) {
            let d = random_dataset(20, 6, seed);
            let small = ModelMask::new(a.clone());
            let big = ModelMask::new(a.iter().zip(&extra).map(|(x, y)| *x || *y).collect());
            prop_assert!(fit_ols(&d, &big).mse <= fit_ols(&d, &small).mse + 1e-12);
        }

        #[test]
        fn column_scaling_rescales_coefficient(seed in any::<u64>(), c in prop_oneof![-50.0..-0.1f64, 0.1..50.0f64]) {
            let d = random_dataset(30, 3, seed);
            let mask = ModelMask::full(3);
            let base = fit_ols(&d, &mask);
            let mut cols: Vec<Vec<f64>> = (0..3).map(|j| d.column(j).to_vec()).collect();
            cols[1].iter_mut().for_each(|v| *v *= c);
            let scaled = Dataset::from_columns(cols, d.y().as_slice().to_vec(), d.names().to_vec()).unwrap();
            let fit = fit_ols(&scaled, &mask);
            prop_assert!((fit.coefficients[1] * c - base.coefficients[1]).abs() < 1e-8 * (1.0 + base.coefficients[1].abs()));
            prop_assert!((fit.mse - base.mse).abs() < 1e-10);
        }

        #[test]
        fn fitting_is_deterministic(seed in any::<u64>()) {
            let d = random_dataset(15, 4, seed);
            let mask: ModelMask = "1011".parse().unwrap();
            prop_assert_eq!(fit_ols(&d, &mask), fit_ols(&d, &mask));
        }
    }
}
