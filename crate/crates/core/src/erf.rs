//! Gauss error function.
//!
//! For |z| < 2.5 the positive-term series
//! `erf(z) = 2/sqrt(pi) * exp(-z^2) * sum_n 2^n z^(2n+1) / (1*3*...*(2n+1))`
//! is summed directly; every term is positive so there is no cancellation.
//! Beyond that, `erfc` is evaluated with the Laplace continued fraction
//! using the modified Lentz algorithm. Both branches reach close to full
//! double precision.

use std::f64::consts::PI;

const SERIES_LIMIT: f64 = 2.5;
const MAX_ITER: usize = 500;

/// Error function, odd in `z`, with `erf(0) = 0` and `|erf(z)| <= 1`.
pub fn erf(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    let a = z.abs();
    let v = if a < SERIES_LIMIT {
        erf_series(a)
    } else {
        1.0 - erfc_continued_fraction(a)
    };
    v.copysign(z)
}

/// Complementary error function `1 - erf(z)`, accurate in the far tail.
pub fn erfc(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    if z < 0.0 {
        return 2.0 - erfc(-z);
    }
    if z < SERIES_LIMIT {
        1.0 - erf_series(z)
    } else {
        erfc_continued_fraction(z)
    }
}

fn erf_series(z: f64) -> f64 {
    let z2 = z * z;
    let mut term = z;
    let mut sum = z;
    for n in 1..MAX_ITER {
        term *= 2.0 * z2 / (2 * n + 1) as f64;
        sum += term;
        if term < sum * f64::EPSILON * 0.5 {
            break;
        }
    }
    2.0 / PI.sqrt() * (-z2).exp() * sum
}

// erfc(z) = exp(-z^2)/sqrt(pi) * 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))
fn erfc_continued_fraction(z: f64) -> f64 {
    const TINY: f64 = 1e-300;
    // exp(-z^2) underflows past this point.
    if z > 27.3 {
        return 0.0;
    }
    let mut f = z;
    let mut c = z;
    let mut d = 0.0;
    for k in 1..MAX_ITER {
        let a = k as f64 * 0.5;
        d = z + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = z + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-z * z).exp() / (f * PI.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite Simpson quadrature of 2/sqrt(pi) * exp(-t^2) over [0, z].
    fn erf_quadrature(z: f64) -> f64 {
        let n = 20_000;
        let h = z / n as f64;
        let f = |t: f64| (-t * t).exp();
        let mut s = f(0.0) + f(z);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(i as f64 * h);
        }
        2.0 / PI.sqrt() * s * h / 3.0
    }

    #[test]
    fn reference_values() {
        assert_eq!(erf(0.0), 0.0);
        assert!((erf(1.0) - 0.842_700_792_9).abs() < 1e-10);
        assert_eq!(erf(-1.0), -erf(1.0));
        assert!((erf(0.5) - 0.520_499_877_813_046_5).abs() < 1e-14);
        assert!((erf(2.0) - 0.995_322_265_018_952_7).abs() < 1e-14);
        assert!((erfc(3.0) - 2.209_049_699_858_544e-5).abs() < 1e-18);
        assert!((erfc(6.0) - 2.151_973_671_249_891_3e-17).abs() < 1e-28);
    }

    #[test]
    fn matches_quadrature_oracle() {
        let mut z = -4.0;
        while z <= 4.0 {
            let err = (erf(z) - erf_quadrature(z)).abs();
            assert!(err <= 1e-7, "z={z}: |erf - quad| = {err:e}");
            z += 0.0625;
        }
    }

    #[test]
    fn branches_agree_at_switch_point() {
        let below = erf(SERIES_LIMIT - 1e-12);
        let above = erf(SERIES_LIMIT);
        assert!((below - above).abs() < 1e-14);
    }

    #[test]
    fn saturation_and_bounds() {
        assert_eq!(erf(f64::INFINITY), 1.0);
        assert_eq!(erf(f64::NEG_INFINITY), -1.0);
        assert!(erf(6.0) < 1.0 || (1.0 - erf(6.0)) < 1e-15);
        assert!(erf(f64::NAN).is_nan());
    }

    proptest::proptest! {
        #[test]
        fn odd_and_bounded(z in -50.0f64..50.0) {
            proptest::prop_assert_eq!(erf(-z), -erf(z));
            proptest::prop_assert!(erf(z).abs() <= 1.0);
            proptest::prop_assert!((erf(z) + erfc(z) - 1.0).abs() < 1e-15);
        }
    }
}
