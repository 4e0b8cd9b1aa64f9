//! Maximum likelihood probit estimation with analytic first and second
//! derivatives, plus Wald tests of coefficient restrictions.
//!
//! The log-likelihood for response `y_t` in {0,1} and index `eta_t = x_t'
//! beta` is `sum y ln Phi(eta) + (1-y) ln(1-Phi(eta))`, globally concave
//! in `beta`. Newton-Raphson with step-halving therefore converges from
//! `beta = 0` whenever a maximizer exists; when the data are perfectly
//! separated no maximizer exists and the iterates diverge, which is
//! detected and reported rather than returned as a huge "estimate".

pub mod normal;

use nalgebra::{Cholesky, DMatrix, DVector};
use statrs::distribution::{ChiSquared, ContinuousCDF, FisherSnedecor};

use self::normal::{log_cdf_pair, std_normal_cdf};
use crate::error::{Error, Result};

/// Convergence: estimation stops when the gradient max-norm drops below
/// this...
pub const GRADIENT_TOLERANCE: f64 = 1e-8;
/// ...or when the relative log-likelihood improvement drops below this.
pub const RELATIVE_LL_TOLERANCE: f64 = 1e-12;
/// Hard cap on Newton iterations.
pub const MAX_ITERATIONS: usize = 100;
/// Coefficient norm beyond which improving steps are declared divergent.
const DIVERGENCE_NORM: f64 = 1e4;
/// Condition estimate beyond which the information matrix is treated as
/// singular.
const CONDITION_LIMIT: f64 = 1e12;
/// Step-halving attempts per Newton iteration.
const MAX_HALVINGS: usize = 40;

/// `ln(1/sqrt(2 pi))`, the log normal density at zero, quoted past f64
/// precision; the literal rounds to the nearest representable double.
#[allow(clippy::excessive_precision)]
const LN_FRAC_1_SQRT_2PI: f64 = -0.9189385332046727418;

/// A regression design with a leading intercept column and a binary
/// response. Construction validates shapes, finiteness, and that the
/// response carries both classes; estimation can then assume all of it.
#[derive(Debug, Clone)]
pub struct DesignMatrix {
    names: Vec<String>,
    x: DMatrix<f64>,
    y: Vec<u8>,
}

impl DesignMatrix {
    /// Builds a design from named regressor columns; an intercept column
    /// named `const` is prepended automatically.
    pub fn with_intercept(regressors: Vec<(String, Vec<f64>)>, response: Vec<u8>) -> Result<Self> {
        let n = response.len();
        if n == 0 {
            return Err(Error::EmptyInput {
                context: "design matrix with zero rows",
            });
        }
        for (row, &v) in response.iter().enumerate() {
            if v > 1 {
                return Err(Error::InvalidResponse { row, value: v });
            }
        }
        let ones = response.iter().filter(|&&v| v == 1).count();
        if ones == 0 || ones == n {
            return Err(Error::DegenerateDummy {
                all_ones: ones == n,
                context: "design matrix response".to_string(),
            });
        }

        let k = regressors.len() + 1;
        let mut names = Vec::with_capacity(k);
        names.push("const".to_string());
        let mut x = DMatrix::zeros(n, k);
        for row in 0..n {
            x[(row, 0)] = 1.0;
        }
        for (j, (name, column)) in regressors.into_iter().enumerate() {
            if column.len() != n {
                return Err(Error::DimensionMismatch {
                    context: "regressor column length vs response length",
                    expected: n,
                    got: column.len(),
                });
            }
            for (row, &v) in column.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFiniteRegressor {
                        row,
                        column: name.clone(),
                    });
                }
                x[(row, j + 1)] = v;
            }
            names.push(name);
        }
        Ok(DesignMatrix {
            names,
            x,
            y: response,
        })
    }

    /// Number of observations.
    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    /// Number of coefficients, intercept included.
    pub fn k(&self) -> usize {
        self.x.ncols()
    }

    /// Column names, starting with `const`.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn response(&self) -> &[u8] {
        &self.y
    }

    /// The full design matrix, intercept column included.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.x
    }

    fn check_beta_len(&self, beta: &[f64]) -> Result<()> {
        if beta.len() != self.k() {
            return Err(Error::DimensionMismatch {
                context: "coefficient vector length vs design columns",
                expected: self.k(),
                got: beta.len(),
            });
        }
        Ok(())
    }
}

/// Per-observation pieces of the likelihood and its derivatives at a
/// given index value. `lambda` is the generalized residual; `weight` the
/// observed-information weight, strictly positive for both classes.
fn obs_terms(eta: f64, y: u8) -> (f64, f64, f64) {
    let (ln_cdf, ln_one_minus) = log_cdf_pair(eta);
    let ln_pdf = LN_FRAC_1_SQRT_2PI - 0.5 * eta * eta;
    if y == 1 {
        // s = phi/Phi, the inverse Mills ratio of the lower tail.
        let s = (ln_pdf - ln_cdf).exp();
        (ln_cdf, s, s * (eta + s))
    } else {
        let r = (ln_pdf - ln_one_minus).exp();
        (ln_one_minus, -r, r * (r - eta))
    }
}

/// Log-likelihood at `beta`.
pub fn log_likelihood(design: &DesignMatrix, beta: &[f64]) -> Result<f64> {
    design.check_beta_len(beta)?;
    let b = DVector::from_column_slice(beta);
    let eta = &design.x * &b;
    let mut ll = 0.0;
    for (t, &y) in design.y.iter().enumerate() {
        let (term, _, _) = obs_terms(eta[t], y);
        ll += term;
    }
    Ok(ll)
}

/// Score (gradient of the log-likelihood) at `beta`.
pub fn score(design: &DesignMatrix, beta: &[f64]) -> Result<Vec<f64>> {
    design.check_beta_len(beta)?;
    let b = DVector::from_column_slice(beta);
    let eta = &design.x * &b;
    let mut g = vec![0.0; design.k()];
    for (t, &y) in design.y.iter().enumerate() {
        let (_, lambda, _) = obs_terms(eta[t], y);
        for (j, gj) in g.iter_mut().enumerate() {
            *gj += lambda * design.x[(t, j)];
        }
    }
    Ok(g)
}

/// Observed information (negative Hessian of the log-likelihood) at
/// `beta`; symmetric positive semidefinite by construction.
pub fn observed_information(design: &DesignMatrix, beta: &[f64]) -> Result<DMatrix<f64>> {
    design.check_beta_len(beta)?;
    let b = DVector::from_column_slice(beta);
    let eta = &design.x * &b;
    let k = design.k();
    let mut info = DMatrix::zeros(k, k);
    for (t, &y) in design.y.iter().enumerate() {
        let (_, _, w) = obs_terms(eta[t], y);
        debug_assert!(w >= 0.0, "information weight must not be negative");
        for a in 0..k {
            let xa = design.x[(t, a)];
            if xa == 0.0 {
                continue;
            }
            for c in a..k {
                info[(a, c)] += w * xa * design.x[(t, c)];
            }
        }
    }
    // Mirror the upper triangle.
    for a in 0..k {
        for c in 0..a {
            info[(a, c)] = info[(c, a)];
        }
    }
    Ok(info)
}

/// Estimation result. All diagnostics are derived from the observed
/// information at the maximum.
#[derive(Debug, Clone)]
pub struct ProbitFit {
    /// Coefficient names, `const` first.
    pub names: Vec<String>,
    pub coefficients: Vec<f64>,
    /// Inverse observed information at the maximum.
    pub covariance: DMatrix<f64>,
    pub std_errors: Vec<f64>,
    /// z statistics, coefficient over standard error.
    pub z_stats: Vec<f64>,
    /// Two-sided normal p-values of the z statistics.
    pub p_values: Vec<f64>,
    pub log_likelihood: f64,
    /// Intercept-only log-likelihood `n (pbar ln pbar + (1-pbar) ln(1-pbar))`.
    pub null_log_likelihood: f64,
    /// McFadden pseudo R-squared; exactly 0 for an intercept-only model.
    pub mcfadden_r2: f64,
    /// In-sample `Phi(x_t' beta)` per observation.
    pub fitted_probabilities: Vec<f64>,
    /// Newton updates applied before convergence.
    pub iterations: usize,
    pub converged: bool,
    pub n_obs: usize,
}

/// Fits the probit model by Newton-Raphson from `beta = 0` with
/// step-halving, converging on gradient max-norm below
/// [`GRADIENT_TOLERANCE`] or relative likelihood change below
/// [`RELATIVE_LL_TOLERANCE`].
pub fn fit_probit(design: &DesignMatrix) -> Result<ProbitFit> {
    let k = design.k();
    let n = design.n();
    let mut beta = DVector::zeros(k);
    let mut ll = log_likelihood(design, beta.as_slice())?;
    let mut iterations = 0usize;
    let mut converged = false;

    while iterations < MAX_ITERATIONS {
        let grad = DVector::from_vec(score(design, beta.as_slice())?);
        if grad.amax() < GRADIENT_TOLERANCE {
            converged = true;
            break;
        }
        let info = observed_information(design, beta.as_slice())?;
        let condition = condition_estimate(&info);
        if !condition.is_finite() || condition > CONDITION_LIMIT {
            return Err(Error::SingularInformation { condition });
        }
        let chol = Cholesky::new(info).ok_or(Error::SingularInformation { condition })?;
        let delta = chol.solve(&grad);

        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..MAX_HALVINGS {
            let candidate = &beta + step * &delta;
            let cand_ll = log_likelihood(design, candidate.as_slice())?;
            if cand_ll >= ll && cand_ll.is_finite() {
                let rel_change = (cand_ll - ll).abs() / ll.abs().max(f64::MIN_POSITIVE);
                beta = candidate;
                ll = cand_ll;
                iterations += 1;
                accepted = true;
                if beta.norm() > DIVERGENCE_NORM {
                    // The likelihood is still improving while the
                    // coefficients run off to infinity: separation.
                    return Err(Error::PerfectSeparation {
                        iterations,
                        beta_norm: beta.norm(),
                    });
                }
                if rel_change < RELATIVE_LL_TOLERANCE {
                    converged = true;
                }
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            // No step length improves the likelihood; the quadratic model
            // has collapsed to noise around the maximum.
            return Err(Error::NotConverged {
                iterations,
                gradient_norm: grad.amax(),
            });
        }
        if converged {
            break;
        }
    }

    if !converged {
        let grad = DVector::from_vec(score(design, beta.as_slice())?);
        if grad.amax() < GRADIENT_TOLERANCE {
            converged = true;
        } else {
            return Err(Error::NotConverged {
                iterations,
                gradient_norm: grad.amax(),
            });
        }
    }
    debug_assert!(converged);

    let info = observed_information(design, beta.as_slice())?;
    let condition = condition_estimate(&info);
    if !condition.is_finite() || condition > CONDITION_LIMIT {
        return Err(Error::SingularInformation { condition });
    }
    let covariance = Cholesky::new(info)
        .ok_or(Error::SingularInformation { condition })?
        .inverse();

    let std_errors: Vec<f64> = (0..k).map(|j| covariance[(j, j)].sqrt()).collect();
    let z_stats: Vec<f64> = beta.iter().zip(&std_errors).map(|(b, se)| b / se).collect();
    let p_values: Vec<f64> = z_stats
        .iter()
        .map(|z| 2.0 * std_normal_cdf(-z.abs()))
        .collect();
    let eta = &design.x * &beta;
    let fitted_probabilities: Vec<f64> = eta.iter().map(|&e| std_normal_cdf(e)).collect();

    let ones = design.y.iter().filter(|&&v| v == 1).count() as f64;
    let pbar = ones / n as f64;
    let null_log_likelihood = n as f64 * (pbar * pbar.ln() + (1.0 - pbar) * (1.0 - pbar).ln());
    // An intercept-only model *is* the null model, so its pseudo
    // R-squared is zero by definition, not merely up to rounding.
    let mcfadden_r2 = if k == 1 {
        0.0
    } else {
        (1.0 - ll / null_log_likelihood).max(0.0)
    };

    Ok(ProbitFit {
        names: design.names.clone(),
        coefficients: beta.iter().copied().collect(),
        covariance,
        std_errors,
        z_stats,
        p_values,
        log_likelihood: ll,
        null_log_likelihood,
        mcfadden_r2,
        fitted_probabilities,
        iterations,
        converged,
        n_obs: n,
    })
}

/// Ratio of extreme singular values; infinite when the smallest is zero.
fn condition_estimate(m: &DMatrix<f64>) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.max();
    let min = sv.min();
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Out-of-design prediction: `Phi(beta0 + sum beta_j v_j)` where `values`
/// supplies the non-intercept regressors in design order.
pub fn predict_prob(fit: &ProbitFit, values: &[f64]) -> Result<f64> {
    if values.len() + 1 != fit.coefficients.len() {
        return Err(Error::DimensionMismatch {
            context: "prediction regressor count vs fitted coefficients",
            expected: fit.coefficients.len() - 1,
            got: values.len(),
        });
    }
    let eta = fit.coefficients[0]
        + fit.coefficients[1..]
            .iter()
            .zip(values)
            .map(|(b, v)| b * v)
            .sum::<f64>();
    Ok(std_normal_cdf(eta))
}

/// Wald test of the joint restriction that the listed coefficients are
/// all zero, reported both as a chi-squared statistic and as its F-form.
#[derive(Debug, Clone)]
pub struct WaldTest {
    /// Indices of the restricted coefficients in the fit.
    pub restricted: Vec<usize>,
    pub chi2_stat: f64,
    pub chi2_p_value: f64,
    pub f_stat: f64,
    pub f_p_value: f64,
    /// Numerator degrees of freedom (number of restrictions).
    pub df_restrictions: usize,
    /// Denominator degrees of freedom, `n - k`.
    pub df_residual: usize,
}

/// Computes `W = b_R' [V_RR]^{-1} b_R` for the restricted subvector and
/// its covariance block, with `W ~ chi2(q)` and `W/q ~ F(q, n-k)` as the
/// reference distributions.
pub fn wald_test(fit: &ProbitFit, restricted: &[usize]) -> Result<WaldTest> {
    let k = fit.coefficients.len();
    let q = restricted.len();
    if q == 0 {
        return Err(Error::EmptyInput {
            context: "Wald test with no restrictions",
        });
    }
    if q > k.saturating_sub(1) {
        return Err(Error::DimensionMismatch {
            context: "more restrictions than non-intercept coefficients",
            expected: k.saturating_sub(1),
            got: q,
        });
    }
    let mut seen = vec![false; k];
    for &idx in restricted {
        if idx >= k {
            return Err(Error::DimensionMismatch {
                context: "restricted coefficient index out of range",
                expected: k,
                got: idx,
            });
        }
        if seen[idx] {
            return Err(Error::DimensionMismatch {
                context: "duplicate restricted coefficient index",
                expected: q,
                got: idx,
            });
        }
        seen[idx] = true;
    }
    if fit.n_obs <= k {
        return Err(Error::DimensionMismatch {
            context: "residual degrees of freedom for the F form",
            expected: k + 1,
            got: fit.n_obs,
        });
    }

    let b_r = DVector::from_iterator(q, restricted.iter().map(|&i| fit.coefficients[i]));
    let mut v_rr = DMatrix::zeros(q, q);
    for (a, &ia) in restricted.iter().enumerate() {
        for (c, &ic) in restricted.iter().enumerate() {
            v_rr[(a, c)] = fit.covariance[(ia, ic)];
        }
    }
    let chol = Cholesky::new(v_rr).ok_or(Error::SingularSubcovariance)?;
    let w = b_r.dot(&chol.solve(&b_r));
    let w = w.max(0.0);

    let df_residual = fit.n_obs - k;
    let chi2 = ChiSquared::new(q as f64).expect("q >= 1");
    let f_dist =
        FisherSnedecor::new(q as f64, df_residual as f64).expect("positive degrees of freedom");
    let f_stat = w / q as f64;
    Ok(WaldTest {
        restricted: restricted.to_vec(),
        chi2_stat: w,
        chi2_p_value: chi2.sf(w),
        f_stat,
        f_p_value: f_dist.sf(f_stat),
        df_restrictions: q,
        df_residual,
    })
}
