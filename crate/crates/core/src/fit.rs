//! Growth-law fit `q(N) ≈ A·μ^N·N^(γ−1)`.
//!
//! Taking logarithms gives `ln q = ln A + N·ln μ + (γ−1)·ln N`, linear in the
//! three unknowns; the fit is ordinary least squares on that system, solved by
//! Householder QR.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitParams {
    pub amplitude: f64,
    pub mu: f64,
    pub gamma_minus_1: f64,
    /// Smallest `N` among the fitted samples. Below it the count is known to
    /// vanish and estimates are 0.
    pub first_n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    pub params: FitParams,
    /// Root mean square of the residuals of `ln q`.
    pub residual_rms: f64,
    pub samples: Vec<(usize, u64)>,
}

/// Least-squares fit over samples `(N, q)`. Zero counts are skipped.
pub fn fit(samples: &[(usize, u64)]) -> Result<FitReport> {
    let used: Vec<(usize, u64)> = samples.iter().copied().filter(|&(n, q)| q > 0 && n > 0).collect();
    let mut distinct: Vec<usize> = used.iter().map(|s| s.0).collect();
    distinct.sort_unstable();
    distinct.dedup();
    if used.len() < 3 {
        return Err(Error::TooFewSamples(used.len()));
    }
    if distinct.len() < 3 {
        return Err(Error::RankDeficient);
    }
    let rows: Vec<[f64; 3]> = used.iter().map(|&(n, _)| [1.0, n as f64, (n as f64).ln()]).collect();
    let rhs: Vec<f64> = used.iter().map(|&(_, q)| (q as f64).ln()).collect();
    let x = least_squares(&rows, &rhs)?;
    let rss: f64 = rows
        .iter()
        .zip(&rhs)
        .map(|(r, y)| {
            let e = r[0] * x[0] + r[1] * x[1] + r[2] * x[2] - y;
            e * e
        })
        .sum();
    Ok(FitReport {
        params: FitParams {
            amplitude: x[0].exp(),
            mu: x[1].exp(),
            gamma_minus_1: x[2],
            first_n: distinct[0],
        },
        residual_rms: (rss / used.len() as f64).sqrt(),
        samples: used,
    })
}

/// Solves `min ‖A x − b‖` for a tall `m × 3` matrix.
#[allow(clippy::needless_range_loop)]
fn least_squares(a: &[[f64; 3]], b: &[f64]) -> Result<[f64; 3]> {
    let m = a.len();
    let mut r: Vec<[f64; 3]> = a.to_vec();
    let mut y = b.to_vec();
    let scale = a.iter().flatten().fold(0.0f64, |s, v| s.max(v.abs()));
    for k in 0..3 {
        let norm = (k..m).map(|i| r[i][k] * r[i][k]).sum::<f64>().sqrt();
        if norm <= 1e-12 * scale.max(1.0) {
            return Err(Error::RankDeficient);
        }
        let alpha = if r[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..m).map(|i| r[i][k]).collect();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|t| t * t).sum();
        for j in k..3 {
            let dot: f64 = (k..m).map(|i| v[i - k] * r[i][j]).sum();
            for i in k..m {
                r[i][j] -= 2.0 * dot / vv * v[i - k];
            }
        }
        let dot: f64 = (k..m).map(|i| v[i - k] * y[i]).sum();
        for i in k..m {
            y[i] -= 2.0 * dot / vv * v[i - k];
        }
    }
    let mut x = [0.0; 3];
    for k in (0..3).rev() {
        let s: f64 = (k + 1..3).map(|j| r[k][j] * x[j]).sum();
        x[k] = (y[k] - s) / r[k][k];
    }
    Ok(x)
}

impl FitParams {
    pub fn new(amplitude: f64, mu: f64, gamma_minus_1: f64) -> Result<Self> {
        if !(amplitude > 0.0 && mu > 0.0 && amplitude.is_finite() && mu.is_finite() && gamma_minus_1.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "need A > 0, μ > 0 and finite γ−1, got ({amplitude}, {mu}, {gamma_minus_1})"
            )));
        }
        Ok(FitParams {
            amplitude,
            mu,
            gamma_minus_1,
            first_n: 1,
        })
    }

    /// `ln(A·μ^N·N^(γ−1))`.
    pub fn log_estimate(&self, n: usize) -> f64 {
        let x = n as f64;
        self.amplitude.ln() + x * self.mu.ln() + self.gamma_minus_1 * x.ln()
    }

    /// The fitted law at `N`, without the support cut-off.
    pub fn estimate(&self, n: usize) -> f64 {
        self.log_estimate(n).exp()
    }

    /// Estimate rounded half away from zero; 0 below `first_n`.
    pub fn estimate_rounded(&self, n: usize) -> Result<u64> {
        if n < self.first_n {
            return Ok(0);
        }
        let log = self.log_estimate(n);
        // u64::MAX ≈ e^44.36
        if !log.is_finite() || log > 44.0 {
            return Err(Error::EstimateOverflow(n as u32));
        }
        Ok(log.exp().round() as u64)
    }

    /// `exact_base` plus the rounded estimates over `range`.
    pub fn cumulative_estimate(&self, exact_base: u64, range: std::ops::RangeInclusive<usize>) -> Result<u128> {
        let mut total = exact_base as u128;
        for n in range {
            total += self.estimate_rounded(n)? as u128;
        }
        Ok(total)
    }
}

/// `fit_params.csv`: one row with the fitted constants and the residual.
pub fn params_csv(report: &FitReport) -> String {
    let p = &report.params;
    format!(
        "amplitude,mu,gamma_minus_1,first_n,residual_rms,samples\n{:.10e},{:.10},{:.10},{},{:.6e},{}\n",
        p.amplitude,
        p.mu,
        p.gamma_minus_1,
        p.first_n,
        report.residual_rms,
        report.samples.len()
    )
}

/// `fit_estimates.csv`: observed and estimated counts per `N`.
pub fn estimates_csv(report: &FitReport, range: std::ops::RangeInclusive<usize>) -> Result<String> {
    let mut s = String::from("n,observed,estimate,rounded\n");
    for n in range {
        let observed = report
            .samples
            .iter()
            .find(|x| x.0 == n)
            .map_or(String::new(), |x| x.1.to_string());
        let est = if n < report.params.first_n {
            0.0
        } else {
            report.params.estimate(n)
        };
        writeln!(s, "{n},{observed},{est:.6},{}", report.params.estimate_rounded(n)?).unwrap();
    }
    Ok(s)
}

/// Whitespace-separated plot data: `N ln(q_observed) ln(q_fit)`, with `nan`
/// where no observation exists.
pub fn plot_data(report: &FitReport, range: std::ops::RangeInclusive<usize>) -> String {
    let mut s = String::from("# n log_observed log_fit\n");
    for n in range {
        let obs = report
            .samples
            .iter()
            .find(|x| x.0 == n)
            .map_or(f64::NAN, |x| (x.1 as f64).ln());
        writeln!(s, "{n} {obs:.8} {:.8}", report.params.log_estimate(n)).unwrap();
    }
    s
}
