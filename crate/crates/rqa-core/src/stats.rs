//! Corpus-level statistical battery: Pearson correlation, Welch t-test and
//! F-test for variance homogeneity.
//!
//! Sample variance uses the n-1 denominator throughout. All p-values are
//! two-sided.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, FisherSnedecor, StudentsT};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub r: f64,
    pub n: usize,
    /// Two-sided p via t = r*sqrt((n-2)/(1-r^2)) with n-2 df. `None` when r
    /// is +-1 exactly (p underflows to 0 conceptually; reported as 0.0 there).
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTestResult {
    pub t: f64,
    /// Welch-Satterthwaite degrees of freedom (fractional).
    pub df: f64,
    pub p: f64,
    /// Set when both samples were constant and equal; t is reported as 0.
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FTestResult {
    /// Larger sample variance over smaller, so F >= 1.
    pub f: f64,
    pub df_num: usize,
    pub df_den: usize,
    pub p: f64,
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample variance, n-1 denominator.
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

pub fn std_dev(xs: &[f64]) -> f64 {
    variance(xs).sqrt()
}

/// Two-sided p of a t statistic.
fn t_two_sided_p(t: f64, df: f64) -> f64 {
    let dist = StudentsT::new(0.0, 1.0, df).expect("df > 0");
    let p = 2.0 * (1.0 - dist.cdf(t.abs()));
    p.clamp(0.0, 1.0)
}

/// Two-sided critical value of the t distribution at significance `alpha`.
pub fn t_critical(df: f64, alpha: f64) -> f64 {
    let dist = StudentsT::new(0.0, 1.0, df).expect("df > 0");
    dist.inverse_cdf(1.0 - alpha / 2.0)
}

/// Product-moment correlation with its two-sided significance.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<CorrelationResult, Error> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::SampleTooSmall { need: 3, got: n });
    }
    let (mx, my) = (mean(x), mean(y));
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let r = (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0);
    let df = (n - 2) as f64;
    let p = if (1.0 - r * r) <= 0.0 {
        0.0
    } else {
        t_two_sided_p(r * (df / (1.0 - r * r)).sqrt(), df)
    };
    Ok(CorrelationResult { r, n, p })
}

/// Welch two-sample t-test (unequal variances).
pub fn welch_t(a: &[f64], b: &[f64]) -> Result<TTestResult, Error> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::SampleTooSmall {
            need: 2,
            got: a.len().min(b.len()),
        });
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (va, vb) = (variance(a), variance(b));
    let se2 = va / na + vb / nb;
    if se2 == 0.0 {
        // both samples constant; equal means give t = 0, p = 1
        let diff = mean(a) - mean(b);
        if diff == 0.0 {
            return Ok(TTestResult {
                t: 0.0,
                df: na + nb - 2.0,
                p: 1.0,
                degenerate: true,
            });
        }
        return Ok(TTestResult {
            t: if diff > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY },
            df: na + nb - 2.0,
            p: 0.0,
            degenerate: true,
        });
    }
    let t = (mean(a) - mean(b)) / se2.sqrt();
    // Welch-Satterthwaite approximation
    let df = se2 * se2
        / ((va / na).powi(2) / (na - 1.0) + (vb / nb).powi(2) / (nb - 1.0));
    Ok(TTestResult {
        t,
        df,
        p: t_two_sided_p(t, df),
        degenerate: false,
    })
}

/// F-test for homogeneity of variances. Symmetric in its arguments: the
/// larger sample variance goes in the numerator.
pub fn f_test(a: &[f64], b: &[f64]) -> Result<FTestResult, Error> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::SampleTooSmall {
            need: 2,
            got: a.len().min(b.len()),
        });
    }
    let (va, vb) = (variance(a), variance(b));
    if va == 0.0 || vb == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let (v_num, df_num, v_den, df_den) = if va >= vb {
        (va, a.len() - 1, vb, b.len() - 1)
    } else {
        (vb, b.len() - 1, va, a.len() - 1)
    };
    let f = v_num / v_den;
    let dist = FisherSnedecor::new(df_num as f64, df_den as f64).expect("df > 0");
    let p = (2.0 * (1.0 - dist.cdf(f))).clamp(0.0, 1.0);
    Ok(FTestResult {
        f,
        df_num,
        df_den,
        p,
    })
}
