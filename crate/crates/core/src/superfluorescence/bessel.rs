//! Modified Bessel function of the first kind, order zero.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Power series below, asymptotic expansion at and above.
pub const SERIES_CROSSOVER: f64 = 20.0;

/// Largest argument whose I0 is representable.
pub const MAX_ARGUMENT: f64 = 700.0;

fn series(y: f64) -> f64 {
    let q = 0.25 * y * y;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= q / (k * k);
        sum += term;
        if term < 1e-17 * sum {
            return sum;
        }
        k += 1.0;
    }
}

/// Asymptotic sum  sum_k [(2k-1)!!]^2 / (k! 8^k y^k), truncated at its smallest term.
fn asymptotic_sum(y: f64) -> f64 {
    let mut term = 1.0f64;
    let mut sum = 1.0;
    let mut k = 1.0f64;
    loop {
        let next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * y);
        if next >= term || next < 1e-18 * sum {
            return sum;
        }
        sum += next;
        term = next;
        k += 1.0;
    }
}

/// I0(y); even in y. Fails above [`MAX_ARGUMENT`].
pub fn bessel_i0(y: f64) -> Result<f64> {
    let y = y.abs();
    if y.is_nan() {
        return Err(Error::invalid("y", "NaN argument"));
    }
    if y > MAX_ARGUMENT {
        return Err(Error::Overflow(y));
    }
    if y < SERIES_CROSSOVER {
        Ok(series(y))
    } else {
        // split e^y to keep the product finite near the top of the range
        let h = (0.5 * y).exp();
        Ok(h * (asymptotic_sum(y) / (2.0 * PI * y).sqrt()) * h)
    }
}

/// e^{-y} I0(y), finite for every y >= 0.
pub fn bessel_i0_scaled(y: f64) -> f64 {
    let y = y.abs();
    if y < SERIES_CROSSOVER {
        series(y) * (-y).exp()
    } else {
        asymptotic_sum(y) / (2.0 * PI * y).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_zero_and_one() {
        assert_eq!(bessel_i0(0.0).unwrap(), 1.0);
        let i1 = 1.266_065_877_752_008_4;
        assert!(((bessel_i0(1.0).unwrap() - i1) / i1).abs() < 1e-12);
    }

    #[test]
    fn asymptotic_correction_at_twenty() {
        // 1 + 1/(8y) + 9/(128 y^2) + O(y^-3)
        let r = bessel_i0(20.0).unwrap() * (40.0 * PI).sqrt() / 20f64.exp();
        assert!((r - (1.0 + 1.0 / 160.0 + 9.0 / 51200.0)).abs() < 1e-4);
        assert!((r - (1.0 + 1.0 / 160.0)).abs() < 2e-4);
    }

    #[test]
    fn crossover_is_continuous() {
        let a = series(SERIES_CROSSOVER);
        let b = bessel_i0(SERIES_CROSSOVER).unwrap();
        assert!(((a - b) / a).abs() < 2e-14);
    }

    #[test]
    fn overflow_reported() {
        assert!(matches!(bessel_i0(700.5), Err(Error::Overflow(_))));
        assert!(bessel_i0(700.0).unwrap().is_finite());
    }

    #[test]
    fn even_extension() {
        assert_eq!(bessel_i0(-3.5).unwrap(), bessel_i0(3.5).unwrap());
    }

    #[test]
    fn scaled_matches_unscaled() {
        for y in [0.5, 5.0, 19.9, 20.0, 50.0, 300.0] {
            let a = bessel_i0_scaled(y);
            let b = bessel_i0(y).unwrap() * (-y).exp();
            assert!(((a - b) / a).abs() < 1e-13, "{y}");
        }
    }

    #[test]
    fn ode_residual_is_second_order() {
        // y I0'' + I0' - y I0 = 0; central differences leave an O(h^2) residual
        let resid = |y: f64, h: f64| {
            let f = |x: f64| bessel_i0(x).unwrap();
            let d1 = (f(y + h) - f(y - h)) / (2.0 * h);
            let d2 = (f(y + h) - 2.0 * f(y) + f(y - h)) / (h * h);
            ((y * d2 + d1 - y * f(y)) / (y * f(y))).abs()
        };
        for y in [0.7, 3.0, 12.0, 30.0] {
            let r1 = resid(y, 1e-2);
            let r2 = resid(y, 5e-3);
            let order = (r1 / r2).log2();
            assert!((order - 2.0).abs() < 0.3, "y = {y}: order {order}");
        }
    }
}
