//! Exponential integral pieces needed by the flat-exponential family.

#[allow(unused_imports)]
use num_traits::Float;

/// e^x · E₁(x) for x > 0.
///
/// Continued fraction (modified Lentz) for x ≥ 1, power series below.
pub fn scaled_exp_e1(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 1.0 {
        return x.exp() * e1_series(x);
    }
    // e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- ...)))
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let a = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

fn e1_series(x: f64) -> f64 {
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= -x / kf;
        let add = -term / kf;
        sum += add;
        if add.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    -EULER_GAMMA - x.ln() + sum
}

/// G(y) = ∫₀^y e^{-1/t} dt for y > 0, via G(y) = e^{-s}(1/s − e^s E₁(s)), s = 1/y.
pub fn flat_exp_integral(y: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    let s = 1.0 / y;
    if s > 745.0 {
        return 0.0;
    }
    (-s).exp() * (1.0 / s - scaled_exp_e1(s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e1_reference_values() {
        // E1(1) = 0.219383934395520, E1(0.5) = 0.559773594776161
        assert!(((-1.0f64).exp() * scaled_exp_e1(1.0) - 0.219_383_934_395_520_3).abs() < 1e-14);
        assert!(((-0.5f64).exp() * scaled_exp_e1(0.5) - 0.559_773_594_776_160_8).abs() < 1e-14);
    }

    #[test]
    fn continued_fraction_matches_series_at_switch() {
        let cf = scaled_exp_e1(1.0);
        let series = 1f64.exp() * e1_series(1.0);
        assert!((cf - series).abs() < 1e-13);
    }

    #[test]
    fn integral_asymptotics_small_y() {
        // G(y) ~ y^2 e^{-1/y} (1 - 2y + 6y^2 - 24y^3 + 120y^4 - ...)
        let y = 0.01;
        let g = flat_exp_integral(y);
        let approx = y * y * (-1.0 / y).exp() * (1.0 - 2.0 * y + 6.0 * y * y - 24.0 * y.powi(3) + 120.0 * y.powi(4));
        assert!(((g - approx) / g).abs() < 1e-6);
    }
}
