//! Compensated summation and exactly reduced phases.
//!
//! Every exponential sum in the crate goes through these helpers: terms are
//! accumulated with Neumaier's variant of Kahan summation, and phases
//! `e^{2πi·t}` are formed from `t mod 1` computed in integer arithmetic
//! wherever the argument is an integer multiple of a rational or of an `f64`.

use std::f64::consts::TAU;

use num_complex::Complex64;

/// Neumaier-compensated accumulator for `f64`.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated accumulator for complex terms (independent real and
/// imaginary parts).
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl FromIterator<Complex64> for ComplexSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut acc = ComplexSum::new();
        for z in iter {
            acc.add(z);
        }
        acc
    }
}

/// Compensated sum of complex terms.
pub fn sum_complex<I: IntoIterator<Item = Complex64>>(terms: I) -> Complex64 {
    terms.into_iter().collect::<ComplexSum>().value()
}

/// Compensated sum of real terms.
pub fn sum_real<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut acc = NeumaierSum::new();
    for v in terms {
        acc.add(v);
    }
    acc.value()
}

/// `e^{2πi·r/n}` for integers, with `r` reduced modulo `n` before any
/// floating-point work. Quarter turns are returned exactly.
pub fn unit_root(r: i64, n: u64) -> Complex64 {
    debug_assert!(n > 0);
    let n_i = n as i128;
    let r = (r as i128).rem_euclid(n_i);
    if (4 * r) % n_i == 0 {
        return match 4 * r / n_i {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    // Fold into (-1/2, 1/2] turns to keep the argument small.
    let r = if 2 * r > n_i { r - n_i } else { r };
    let angle = TAU * (r as f64) / (n as f64);
    Complex64::from_polar(1.0, angle)
}

/// `e^{2πi·t}` for a real number of turns `t`.
#[inline]
pub fn cis_turns(t: f64) -> Complex64 {
    let t = t - t.round();
    Complex64::from_polar(1.0, TAU * t)
}

/// Fractional part of `k·x` (in `[0, 1)`), computed without the rounding
/// error of forming the product `k·x` in floating point.
///
/// `x` is decomposed as `m·2^{-e}`. Only `k mod 2^e` matters, so the residue
/// `k·m mod 2^e` is exact in wrapping 128-bit arithmetic whenever `e ≤ 127`;
/// callers may therefore pass frequencies that have wrapped modulo `2^128`.
/// Smaller `|x|` falls back to the direct product.
pub fn frac_mul(k: u128, x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    if x == 0.0 || k == 0 {
        return 0.0;
    }
    let neg = x < 0.0;
    let bits = x.abs().to_bits();
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let (mant, exp) = if exp_bits == 0 {
        (bits & ((1u64 << 52) - 1), -1074i64)
    } else {
        ((bits & ((1u64 << 52) - 1)) | (1u64 << 52), exp_bits - 1075)
    };
    let frac = if exp >= 0 {
        0.0
    } else if -exp > 127 {
        let prod = (k as f64) * x.abs();
        prod - prod.floor()
    } else {
        let mask = (1u128 << (-exp) as u32) - 1;
        let res = k.wrapping_mul(mant as u128) & mask;
        (res as f64) * 2f64.powi(exp as i32)
    };
    if neg && frac != 0.0 {
        1.0 - frac
    } else {
        frac
    }
}

/// `e^{-2πi·k·x}` with the phase reduced by [`frac_mul`].
#[inline]
pub fn phase_neg(k: u128, x: f64) -> Complex64 {
    cis_turns(-frac_mul(k, x))
}
