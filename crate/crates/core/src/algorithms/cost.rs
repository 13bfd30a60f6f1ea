/// Linear-linear cost: `a|e|` for `e > 0`, `b|e|` otherwise.
pub fn cost_llc(e: f64, a: f64, b: f64) -> f64 {
    if e > 0.0 {
        a * e.abs()
    } else {
        b * e.abs()
    }
}

/// Quadratic-quadratic cost: `½ae²` for `e > 0`, `½be²` otherwise.
pub fn cost_qqc(e: f64, a: f64, b: f64) -> f64 {
    let weight = if e > 0.0 { a } else { b };
    0.5 * weight * e * e
}

/// Linear-exponential cost `b(exp(ae) − ae − 1)`, with `ae` saturated at
/// `±clamp`.
pub fn cost_lec(e: f64, a: f64, b: f64, clamp: f64) -> f64 {
    let x = (a * e).clamp(-clamp, clamp);
    b * (x.exp_m1() - x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::DEFAULT_EXP_CLAMP;

    #[test]
    fn llc_substitution() {
        assert!((cost_llc(2.0, 0.8, 4.0) - 1.6).abs() < 1e-15);
        assert!((cost_llc(-2.0, 0.8, 4.0) - 8.0).abs() < 1e-15);
        assert_eq!(cost_llc(0.0, 0.8, 4.0), 0.0);
    }

    #[test]
    fn qqc_substitution() {
        assert!((cost_qqc(2.0, 0.8, 6.0) - 1.6).abs() < 1e-15);
        assert!((cost_qqc(-1.0, 0.8, 6.0) - 3.0).abs() < 1e-15);
        assert_eq!(cost_qqc(0.0, 0.8, 6.0), 0.0);
    }

    #[test]
    fn lec_against_high_precision_values() {
        // 40-digit evaluations of 6·(e^{±0.32} ∓ 0.32 − 1)
        assert!((cost_lec(1.0, 0.32, 6.0, DEFAULT_EXP_CLAMP) - 0.342_766_586_015_742_5).abs() < 1e-14);
        assert!((cost_lec(-1.0, 0.32, 6.0, DEFAULT_EXP_CLAMP) - 0.276_894_222_442_145_5).abs() < 1e-14);
        assert_eq!(cost_lec(0.0, 0.32, 6.0, DEFAULT_EXP_CLAMP), 0.0);
    }

    #[test]
    fn lec_is_nonnegative_and_saturates() {
        for i in -200..=200 {
            let e = i as f64 * 0.37;
            assert!(cost_lec(e, 0.5, 2.0, DEFAULT_EXP_CLAMP) >= 0.0);
        }
        let big = cost_lec(1e6, 1.0, 1.0, DEFAULT_EXP_CLAMP);
        assert!(big.is_finite());
        assert_eq!(big, cost_lec(50.0, 1.0, 1.0, DEFAULT_EXP_CLAMP));
    }
}
