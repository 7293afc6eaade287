//! Welch's t-test and Cohen's d on summary statistics.

use crate::error::{Error, Result};

const BETA_EPSILON: f64 = 1e-15;
const BETA_TINY: f64 = 1e-300;
const BETA_MAX_ITERATIONS: usize = 100_000;

/// Regularized incomplete beta function `I_x(a, b)`.
///
/// Evaluated with the modified Lentz continued fraction, switching to
/// `1 - I_{1-x}(b, a)` above the mean where the fraction converges slowly.
pub fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::domain("incomplete beta needs finite a, b > 0"));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain("incomplete beta needs 0 <= x <= 1"));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(x);
    }
    let log_front = libm::lgamma(a + b) - libm::lgamma(a) - libm::lgamma(b)
        + a * libm::log(x)
        + b * libm::log1p(-x);
    let front = libm::exp(log_front);
    if x < (a + 1.0) / (a + b + 2.0) {
        Ok(front * beta_continued_fraction(x, a, b) / a)
    } else {
        Ok(1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b)
    }
}

fn beta_continued_fraction(x: f64, a: f64, b: f64) -> f64 {
    let clamp = |v: f64| if libm::fabs(v) < BETA_TINY { BETA_TINY } else { v };
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 / clamp(1.0 - qab * x / qap);
    let mut h = d;
    for step in 1..=BETA_MAX_ITERATIONS {
        let m = step as f64;
        let m2 = 2.0 * m;
        let even = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 / clamp(1.0 + even * d);
        c = clamp(1.0 + even / c);
        h *= d * c;
        let odd = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 / clamp(1.0 + odd * d);
        c = clamp(1.0 + odd / c);
        let delta = d * c;
        h *= delta;
        if libm::fabs(delta - 1.0) < BETA_EPSILON {
            break;
        }
    }
    h
}

/// CDF of Student's t distribution with `df` degrees of freedom.
pub fn student_t_cdf(t: f64, df: f64) -> Result<f64> {
    if df.is_nan() || df <= 0.0 || t.is_nan() {
        return Err(Error::domain("Student t needs df > 0 and a numeric t"));
    }
    if t.is_infinite() {
        return Ok(if t > 0.0 { 1.0 } else { 0.0 });
    }
    let tail = 0.5 * regularized_incomplete_beta(df / (df + t * t), df / 2.0, 0.5)?;
    Ok(if t > 0.0 { 1.0 - tail } else { tail })
}

/// Two-sided p-value of Welch's t-test from group means, standard
/// deviations and sizes.
///
/// When both standard deviations are zero the test degenerates: equal means
/// give `p = 1` and different means give `p = 0`.
pub fn welch_t_test(
    mean_a: f64,
    std_a: f64,
    n_a: usize,
    mean_b: f64,
    std_b: f64,
    n_b: usize,
) -> Result<f64> {
    if n_a < 2 || n_b < 2 {
        return Err(Error::domain("Welch's t-test needs at least two samples per group"));
    }
    let finite = [mean_a, std_a, mean_b, std_b].iter().all(|v| v.is_finite());
    if !finite || std_a < 0.0 || std_b < 0.0 {
        return Err(Error::domain("means must be finite and standard deviations >= 0"));
    }
    let va = std_a * std_a / n_a as f64;
    let vb = std_b * std_b / n_b as f64;
    if va + vb == 0.0 {
        return Ok(if mean_a == mean_b { 1.0 } else { 0.0 });
    }
    let t = (mean_a - mean_b) / libm::sqrt(va + vb);
    let df = (va + vb) * (va + vb) / (va * va / (n_a - 1) as f64 + vb * vb / (n_b - 1) as f64);
    // P(|T| >= |t|) = I_{df / (df + t^2)}(df / 2, 1 / 2)
    let p = regularized_incomplete_beta(df / (df + t * t), df / 2.0, 0.5)?;
    Ok(p.clamp(0.0, 1.0))
}

/// Cohen's d with the equal-size pooled deviation `sqrt((s_a^2 + s_b^2) / 2)`.
/// Positive when `mean_a` is larger.
pub fn cohens_d(mean_a: f64, std_a: f64, mean_b: f64, std_b: f64) -> Result<f64> {
    let finite = [mean_a, std_a, mean_b, std_b].iter().all(|v| v.is_finite());
    if !finite || std_a < 0.0 || std_b < 0.0 {
        return Err(Error::domain("means must be finite and standard deviations >= 0"));
    }
    if std_a == 0.0 && std_b == 0.0 {
        return Err(Error::UndefinedEffect);
    }
    Ok((mean_a - mean_b) / libm::sqrt((std_a * std_a + std_b * std_b) / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use statrs::distribution::{ContinuousCDF, StudentsT};

    #[test]
    fn incomplete_beta_matches_reference() {
        for &(x, a, b) in &[
            (0.3, 2.0, 3.0),
            (0.9, 0.5, 0.5),
            (0.01, 5.0, 0.5),
            (0.999, 50.0, 0.5),
            (0.5, 200.0, 200.0),
            (0.2, 1.0, 1.0),
        ] {
            let reference = statrs::function::beta::beta_reg(a, b, x);
            let got = regularized_incomplete_beta(x, a, b).unwrap();
            assert_relative_eq!(got, reference, max_relative = 1e-10);
        }
        assert_eq!(regularized_incomplete_beta(0.0, 2.0, 2.0).unwrap(), 0.0);
        assert_eq!(regularized_incomplete_beta(1.0, 2.0, 2.0).unwrap(), 1.0);
        assert!(regularized_incomplete_beta(1.5, 2.0, 2.0).is_err());
        assert!(regularized_incomplete_beta(0.5, 0.0, 2.0).is_err());
    }

    #[test]
    fn student_t_matches_reference() {
        for &df in &[1.0, 2.5, 9.0, 17.3, 100.0] {
            let dist = StudentsT::new(0.0, 1.0, df).unwrap();
            for &t in &[-6.0, -2.0, -0.3, 0.0, 0.7, 3.1, 12.0] {
                let got = student_t_cdf(t, df).unwrap();
                assert_relative_eq!(got, dist.cdf(t), max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn published_anchors() {
        let p = welch_t_test(98.9, 0.2, 10, 98.3, 0.5, 10).unwrap();
        assert!((p - 0.004).abs() <= 0.001, "{p}");
        let p = welch_t_test(98.9, 0.2, 10, 98.5, 0.5, 10).unwrap();
        assert!((p - 0.037).abs() <= 0.001, "{p}");
        assert_eq!(welch_t_test(98.9, 0.2, 10, 98.9, 0.2, 10).unwrap(), 1.0);

        assert!((cohens_d(98.9, 0.2, 98.3, 0.5).unwrap() - 1.576).abs() <= 0.001);
        assert!((cohens_d(98.9, 0.2, 98.5, 0.5).unwrap() - 1.050).abs() <= 0.001);
        assert_eq!(cohens_d(98.9, 0.2, 98.9, 0.2).unwrap(), 0.0);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(welch_t_test(1.0, 0.0, 5, 1.0, 0.0, 5).unwrap(), 1.0);
        assert_eq!(welch_t_test(1.0, 0.0, 5, 2.0, 0.0, 5).unwrap(), 0.0);
        assert!(welch_t_test(1.0, 0.1, 1, 2.0, 0.1, 5).is_err());
        assert!(welch_t_test(1.0, -0.1, 3, 2.0, 0.1, 5).is_err());
        assert_eq!(cohens_d(1.0, 0.0, 2.0, 0.0), Err(Error::UndefinedEffect));
        // one zero deviation is still a valid test
        let p = welch_t_test(1.0, 0.0, 10, 1.5, 0.5, 10).unwrap();
        assert!(p > 0.0 && p < 1.0);
    }

    proptest! {
        #[test]
        fn symmetry(
            ma in -100.0f64..100.0, sa in 0.01f64..10.0, na in 2usize..50,
            mb in -100.0f64..100.0, sb in 0.01f64..10.0, nb in 2usize..50,
        ) {
            let p = welch_t_test(ma, sa, na, mb, sb, nb).unwrap();
            let q = welch_t_test(mb, sb, nb, ma, sa, na).unwrap();
            prop_assert!((0.0..=1.0).contains(&p));
            prop_assert_eq!(p, q);
            let d = cohens_d(ma, sa, mb, sb).unwrap();
            prop_assert_eq!(d, -cohens_d(mb, sb, ma, sa).unwrap());
        }

        #[test]
        fn p_shrinks_as_gap_grows(gap in 0.0f64..5.0, extra in 0.0f64..5.0, s in 0.1f64..3.0) {
            let near = welch_t_test(0.0, s, 10, gap, s, 10).unwrap();
            let far = welch_t_test(0.0, s, 10, gap + extra, s, 10).unwrap();
            prop_assert!(far <= near + 1e-12);
        }
    }
}
