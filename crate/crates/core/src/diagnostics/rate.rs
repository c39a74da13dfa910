use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RateModel {
    /// values ≈ C·k^slope
    Power { slope: f64 },
    /// values ≈ C·μᵏ
    Linear { factor: f64 },
    Superlinear,
}

/// Least-squares line y ≈ a + b·t.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFit {
    pub intercept: f64,
    pub slope: f64,
    pub r2: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateFit {
    pub model: RateModel,
    pub r2: f64,
    /// Inclusive range of k actually used.
    pub window: (usize, usize),
    pub power: LineFit,
    pub linear: LineFit,
    /// Entries dropped for being +∞.
    pub excluded: usize,
}

pub const DEFAULT_BURN_IN: f64 = 0.1;

pub fn least_squares(t: &[f64], y: &[f64]) -> LineFit {
    let n = t.len() as f64;
    let tm = t.iter().sum::<f64>() / n;
    let ym = y.iter().sum::<f64>() / n;
    let (mut stt, mut sty, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in t.iter().zip(y) {
        stt += (a - tm) * (a - tm);
        sty += (a - tm) * (b - ym);
        syy += (b - ym) * (b - ym);
    }
    let slope = if stt > 0.0 { sty / stt } else { 0.0 };
    let intercept = ym - slope * tm;
    let sse: f64 = t.iter().zip(y).map(|(&a, &b)| (b - intercept - slope * a).powi(2)).sum();
    let r2 = if syy > 1e-24 * n * (1.0 + ym * ym) { 1.0 - sse / syy } else { 1.0 };
    LineFit { intercept, slope, r2 }
}

/// Fits (k, value) pairs with k inside `window` (default: drop the first 10% of entries).
pub fn fit_rate<T: Scalar>(values: &[(usize, T)], window: Option<(usize, usize)>) -> Result<RateFit> {
    let values = match window {
        Some(_) => values,
        None => &values[(values.len() as f64 * DEFAULT_BURN_IN).floor() as usize..],
    };
    let mut excluded = 0;
    let finite: Vec<(usize, f64)> = values
        .iter()
        .filter(|(_, v)| {
            let inf = *v == T::infinity();
            excluded += inf as usize;
            !inf
        })
        .map(|&(k, v)| (k, v.as_f64()))
        .collect();
    let used: Vec<(usize, f64)> = match window {
        Some((a, b)) => finite.into_iter().filter(|&(k, _)| k >= a && k <= b).collect(),
        None => finite,
    };
    if used.len() < 2 {
        return Err(Error::RateFit(format!("need at least two values in the window, got {}", used.len())));
    }
    if let Some(&(k, v)) = used.iter().find(|(_, v)| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::RateFit(format!("nonpositive or non-finite value {v} at k = {k}")));
    }
    if used.iter().any(|&(k, _)| k == 0) {
        return Err(Error::RateFit("power fit needs k ≥ 1".into()));
    }
    let ks: Vec<f64> = used.iter().map(|&(k, _)| k as f64).collect();
    let logk: Vec<f64> = ks.iter().map(|k| k.ln()).collect();
    let logv: Vec<f64> = used.iter().map(|&(_, v)| v.ln()).collect();
    let power = least_squares(&logk, &logv);
    let linear = least_squares(&ks, &logv);
    let window = (used[0].0, used[used.len() - 1].0);

    let superlinear = used.len() >= 4 && {
        let tail = &used[used.len() - 4..];
        let ratios: Vec<f64> = tail.windows(2).map(|w| w[1].1 / w[0].1).collect();
        ratios.windows(2).all(|r| r[1] <= 0.5 * r[0])
    };
    let (model, r2) = if superlinear {
        (RateModel::Superlinear, linear.r2)
    } else if linear.r2 > power.r2 + 1e-12 {
        (RateModel::Linear { factor: linear.slope.exp() }, linear.r2)
    } else {
        (RateModel::Power { slope: power.slope }, power.r2)
    };
    Ok(RateFit { model, r2, window, power, linear, excluded })
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    #[test]
    fn inverse_k() {
        let v: Vec<(usize, f64)> = (10..=1000).map(|k| (k, 3.0 / k as f64)).collect();
        let fit = fit_rate(&v, Some((10, 1000))).unwrap();
        match fit.model {
            RateModel::Power { slope } => assert!((slope + 1.0).abs() < 0.05),
            m => panic!("{m:?}"),
        }
    }

    #[test]
    fn geometric() {
        let v: Vec<(usize, f64)> = (1..=200).map(|k| (k, 2.0 * 0.9f64.powi(k as i32))).collect();
        let fit = fit_rate(&v, None).unwrap();
        match fit.model {
            RateModel::Linear { factor } => assert!((factor - 0.9).abs() < 0.005),
            m => panic!("{m:?}"),
        }
    }

    #[test]
    fn constant() {
        let v: Vec<(usize, f64)> = (1..=100).map(|k| (k, 0.7)).collect();
        match fit_rate(&v, None).unwrap().model {
            RateModel::Power { slope } => assert!(slope.abs() < 0.01),
            m => panic!("{m:?}"),
        }
    }

    #[test]
    fn quadratic_convergence_is_superlinear() {
        let mut e = 0.5f64;
        let v: Vec<(usize, f64)> = (1..=6)
            .map(|k| {
                let out = (k, e);
                e = e * e;
                out
            })
            .collect();
        assert_eq!(fit_rate(&v, Some((1, 6))).unwrap().model, RateModel::Superlinear);
    }

    #[test]
    fn burn_in_and_infinities() {
        let mut v: Vec<(usize, f64)> = (1..=100).map(|k| (k, 1.0 / (k * k) as f64)).collect();
        v[50].1 = f64::INFINITY;
        let fit = fit_rate(&v, None).unwrap();
        assert_eq!(fit.window.0, 11);
        assert_eq!(fit.excluded, 1);
        assert!((fit.power.slope + 2.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_nonpositive() {
        let v = [(1usize, 1.0f64), (2, 0.0), (3, 0.5)];
        assert!(matches!(fit_rate(&v, Some((1, 3))), Err(Error::RateFit(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn planted_power(slope in -3.0f64..-0.3, c in 0.01f64..100.0) {
            let v: Vec<(usize, f64)> = (10..=1000).map(|k| (k, c * (k as f64).powf(slope))).collect();
            let fit = fit_rate(&v, Some((10, 1000))).unwrap();
            prop_assert!((fit.power.slope - slope).abs() < 0.05);
            let is_power = matches!(fit.model, RateModel::Power { .. });
            prop_assert!(is_power);
        }

        #[test]
        fn planted_linear(mu in 0.5f64..0.99, c in 0.01f64..100.0) {
            let v: Vec<(usize, f64)> = (1..=150).map(|k| (k, c * mu.powi(k as i32))).collect();
            let fit = fit_rate(&v, None).unwrap();
            match fit.model {
                RateModel::Linear { factor } => prop_assert!((factor - mu).abs() < 0.005),
                m => prop_assert!(false, "{:?}", m),
            }
        }
    }
}
