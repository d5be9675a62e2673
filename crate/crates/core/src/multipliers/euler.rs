//! The halves `f₁(z) = Σ_n e^{2πi(6n²+n)z}` and
//! `f₂(z) = −Σ_n e^{2πi(6n²+7n+2)z}` of Euler's series, and the major-arc
//! main term for `f₁` near a rational.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::theta::{Gated, RegimeGate};
use crate::arith::{check_coprime, euler_weyl_sum};
use crate::summation::{phase_neg, ComplexSum};
use crate::{Error, Result};

const TAIL_EXPONENT: f64 = 45.0;

fn theta_half(x: f64, y: f64, cutoff: Option<i64>, exponent: impl Fn(i64) -> i64) -> Result<Complex64> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::param("y", format!("must be > 0, got {y}")));
    }
    // 6n² − |n| ≥ 45/(2πy) bounds both exponent families from below.
    let bound = cutoff.unwrap_or_else(|| {
        let t = TAIL_EXPONENT / (2.0 * PI * y);
        ((1.0 + (1.0 + 24.0 * t).sqrt()) / 12.0).ceil() as i64 + 2
    });
    let mut acc = ComplexSum::new();
    for n in -bound..=bound {
        let e = exponent(n);
        let mag = (-2.0 * PI * e as f64 * y).exp();
        if mag == 0.0 {
            continue;
        }
        acc.add(mag * phase_neg(e as u128, x));
    }
    Ok(acc.value())
}

/// `f₁(−x + iy) = Σ_n e^{−2π(6n²+n)y} e^{−2πi(6n²+n)x}`.
pub fn euler_f1_direct(x: f64, y: f64, cutoff: Option<i64>) -> Result<Complex64> {
    theta_half(x, y, cutoff, |n| 6 * n * n + n)
}

/// `f₂(−x + iy) = −Σ_n e^{−2π(6n²+7n+2)y} e^{−2πi(6n²+7n+2)x}`.
pub fn euler_f2_direct(x: f64, y: f64, cutoff: Option<i64>) -> Result<Complex64> {
    Ok(-theta_half(x, y, cutoff, |n| 6 * n * n + 7 * n + 2)?)
}

/// `(12w)^{−1/2} q^{−1} e^{πw/12} S(p/q)` with `w = y + iδ`, the main term
/// of `f₁(−x + iy)` at `x = p/q + δ` (principal branch).
pub fn lemma2_main_term(p: i64, q: i64, delta: f64, y: f64, gate: &RegimeGate) -> Result<Gated<Complex64>> {
    check_coprime(p, q)?;
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::param("y", format!("must be > 0, got {y}")));
    }
    let w = Complex64::new(y, delta);
    let value = euler_weyl_sum(p, q)? * (PI * w / 12.0).exp() / (q as f64 * (12.0 * w).sqrt());
    Ok(Gated {
        value,
        in_regime: gate.contains(q, delta, y),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::pentagonal_coefficients;

    #[test]
    fn f1_examples() {
        let v = euler_f1_direct(0.0, 5.0, None).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let v = euler_f1_direct(0.0, 0.5, None).unwrap();
        let expected = 1.0 + (-7.0 * PI).exp() + (-5.0 * PI).exp();
        assert!((v.re - expected).abs() < 1e-15);
        let y = 0.05;
        let bound: f64 = (-50i64..=50).map(|n| (-2.0 * PI * (6 * n * n + n) as f64 * y).exp()).sum();
        for x in [0.1, 0.37, 0.5, 0.91] {
            assert!(euler_f1_direct(x, y, None).unwrap().norm() <= bound + 1e-12);
        }
    }

    #[test]
    fn halves_sum_to_euler_series() {
        let (x, y) = (0.23, 0.02);
        let f = euler_f1_direct(x, y, None).unwrap() + euler_f2_direct(x, y, None).unwrap();
        let a = pentagonal_coefficients(4000);
        let direct: Complex64 = a
            .iter()
            .enumerate()
            .map(|(n, &c)| {
                c as f64
                    * (-2.0 * PI * n as f64 * y).exp()
                    * Complex64::from_polar(1.0, -2.0 * PI * n as f64 * x)
            })
            .sum();
        assert!((f - direct).norm() < 1e-12);
    }

    #[test]
    fn main_term_examples() {
        let gate = RegimeGate::default();
        let g = lemma2_main_term(1, 1, 0.0, 0.01, &gate).unwrap();
        assert!((g.value.re - 2.8943187446787).abs() < 1e-12, "{}", g.value);
        assert!(g.in_regime);
        let g = lemma2_main_term(1, 2, 0.0, 0.01, &gate).unwrap();
        assert!(g.value.norm() < 1e-14);
    }

    #[test]
    fn main_term_tracks_f1_at_small_y() {
        let gate = RegimeGate::default();
        for j in [10, 14, 18] {
            let y = 2f64.powi(-j);
            let v = euler_f1_direct(0.0 + 1.0, y, None).unwrap();
            let m = lemma2_main_term(1, 1, 0.0, y, &gate).unwrap().value;
            assert!((v - m).norm() * y.powf(0.25) < 1.0);
        }
    }
}
