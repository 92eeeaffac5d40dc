use super::weight::WeightFunction;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Smallest `n0` in `1..=n_max` with `1 - eps <= f(n0 + k)/f(n0) <= 1 + eps` for
/// every `k` in `0..=m`, or `None` when there is none (or a table runs out first).
pub fn sub_exponential_window<T: Scalar>(
    f: &WeightFunction<T>,
    m: usize,
    eps: T,
    n_max: usize,
) -> Result<Option<usize>> {
    check_window_params(m, eps)?;
    let slack = T::metric_slack();
    let (lo, hi) = (T::one() - eps - slack, T::one() + eps + slack);
    let last = match f.domain_len() {
        Some(len) if len <= m => return Ok(None),
        Some(len) => n_max.min(len - 1 - m),
        None => n_max,
    };
    'outer: for n0 in 1..=last {
        for k in 1..=m {
            let r = f.ratio(n0, k)?;
            if !(r >= lo && r <= hi) {
                continue 'outer;
            }
        }
        return Ok(Some(n0));
    }
    Ok(None)
}

/// Sampled evidence that `f(n + m)/f(n) → 1`: a window exists for every
/// tolerance in `eps_schedule`. Sampling can refute, never prove, the limit.
pub fn is_additively_subexponential_sample<T: Scalar>(
    f: &WeightFunction<T>,
    m: usize,
    eps_schedule: &[T],
    n_max: usize,
) -> Result<bool> {
    if eps_schedule.is_empty() {
        return Err(Error::InvalidParameter("empty eps schedule".into()));
    }
    if eps_schedule.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidParameter("eps schedule must be strictly decreasing".into()));
    }
    for &eps in eps_schedule {
        if sub_exponential_window(f, m, eps, n_max)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub(crate) fn check_window_params<T: Scalar>(m: usize, eps: T) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    if !(eps > T::zero() && eps < T::one()) {
        return Err(Error::InvalidParameter(format!("eps must lie in (0, 1), got {eps}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(text: &str) -> WeightFunction<f64> {
        text.parse().unwrap()
    }

    /// Oracle: smallest n with (n+2)/(n+1) <= 1 + eps, i.e. n >= 1/eps - 1, in exact integers.
    fn linear_window(inv_eps: usize) -> usize {
        (inv_eps - 1).max(1)
    }

    #[test]
    fn linear_function_windows() {
        assert_eq!(sub_exponential_window(&f("poly(1,1)"), 1, 0.1, 1_000_000).unwrap(), Some(9));
        assert_eq!(linear_window(10), 9);
        assert_eq!(sub_exponential_window(&f("poly(1,1)"), 1, 0.5, 1_000_000).unwrap(), Some(linear_window(2)));
        assert_eq!(sub_exponential_window(&f("poly(1,1)"), 1, 0.01, 1_000_000).unwrap(), Some(linear_window(100)));
    }

    #[test]
    fn constant_function_window_is_one() {
        for m in 1..5 {
            for eps in [0.9, 0.1, 1e-6] {
                assert_eq!(sub_exponential_window(&f("constant(3)"), m, eps, 10).unwrap(), Some(1));
            }
        }
    }

    #[test]
    fn geometric_never_enters_window() {
        assert_eq!(sub_exponential_window(&f("geometric(2)"), 1, 0.5, 1_000_000).unwrap(), None);
        assert_eq!(sub_exponential_window(&f("geometric(2)"), 1, 0.5, 10_000).unwrap(), None);
    }

    #[test]
    fn window_respects_n_max_and_tables() {
        assert_eq!(sub_exponential_window(&f("poly(1,1)"), 1, 0.1, 8).unwrap(), None);
        assert_eq!(sub_exponential_window(&f("table(1,5,5,5)"), 1, 0.1, 100).unwrap(), Some(1));
        assert_eq!(sub_exponential_window(&f("table(1,5,9)"), 1, 0.1, 100).unwrap(), None);
        assert_eq!(sub_exponential_window(&f("table(1,5)"), 3, 0.1, 100).unwrap(), None);
    }

    #[test]
    fn window_parameter_errors() {
        assert!(sub_exponential_window(&f("constant(1)"), 0, 0.1, 10).is_err());
        assert!(sub_exponential_window(&f("constant(1)"), 1, 1.0, 10).is_err());
        assert!(sub_exponential_window(&f("constant(1)"), 1, 0.0, 10).is_err());
    }

    #[test]
    fn subexponential_samples() {
        assert!(is_additively_subexponential_sample(&f("poly(1,1)"), 1, &[0.5, 0.1, 0.01], 1_000_000).unwrap());
        assert!(!is_additively_subexponential_sample(&f("geometric(2)"), 1, &[0.5, 0.1], 1_000_000).unwrap());
        assert!(is_additively_subexponential_sample(&f("expsqrt"), 1, &[0.5, 0.1], 1_000_000).unwrap());
        assert!(is_additively_subexponential_sample(&f("log(2)"), 3, &[0.5, 0.1], 1_000_000).unwrap());
        assert!(is_additively_subexponential_sample(&f("rational(1;1,1,1)"), 2, &[0.5, 0.1], 1_000_000).unwrap());
        assert!(is_additively_subexponential_sample(&f("atan"), 2, &[0.5, 0.1, 0.01], 1_000_000).unwrap());
        assert!(is_additively_subexponential_sample(&f("invsquare"), 2, &[0.5, 0.1], 1_000_000).unwrap());
        assert!(is_additively_subexponential_sample(&f("poly(1,1)"), 1, &[0.1, 0.5], 100).is_err());
    }

    #[test]
    fn expsqrt_window_matches_closed_form() {
        // e^{√(n+1) - √n} <= 1.1  <=>  √(n+1) - √n <= ln 1.1; scan integers directly.
        let oracle = (1..).find(|&n: &usize| ((n + 1) as f64).sqrt() - (n as f64).sqrt() <= 1.1f64.ln()).unwrap();
        assert_eq!(sub_exponential_window(&f("expsqrt"), 1, 0.1, 1_000_000).unwrap(), Some(oracle));
    }
}
