//! The theta function `S_y(x) = Σ_{n∈Z} χ(n) e^{−πn²(y+2ix)}`, its dual
//! expansion in quadratic Gauss sums, and its major-arc main term.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::arith::{check_coprime, gauss_sum, quadratic_gauss_sum, DirichletCharacter};
use crate::summation::{phase_neg, sum_complex, ComplexSum};
use crate::{Error, Result};

/// Gaussian tails are cut where the exponent passes 45.
const TAIL_EXPONENT: f64 = 45.0;

/// Thresholds of the constraint region `q ≤ c₁ y^{−1/2}`, `q|δ| ≤ c₂ y^{1/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeGate {
    pub c1: f64,
    pub c2: f64,
}

impl Default for RegimeGate {
    fn default() -> Self {
        Self { c1: 1.0, c2: 1.0 }
    }
}

impl RegimeGate {
    pub fn contains(&self, q: i64, delta: f64, y: f64) -> bool {
        let q = q as f64;
        q <= self.c1 / y.sqrt() && q * delta.abs() <= self.c2 * y.sqrt()
    }
}

/// A value together with whether its inputs satisfied the regime gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gated<T> {
    pub value: T,
    pub in_regime: bool,
}

fn check_y(y: f64) -> Result<()> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::param("y", format!("must be > 0, got {y}")));
    }
    Ok(())
}

/// `S_y(x)`, truncated at `|n| ≤ cutoff` (default: where `πn²y > 45`).
///
/// For odd `χ` the terms `n` and `−n` cancel and the result is exactly 0.
pub fn theta_s_y(chi: &DirichletCharacter, x: f64, y: f64, cutoff: Option<u64>) -> Result<Complex64> {
    check_y(y)?;
    if chi.parity() == -1 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let cutoff = cutoff.unwrap_or_else(|| (TAIL_EXPONENT / (PI * y)).sqrt().ceil() as u64);
    let mut acc = ComplexSum::new();
    acc.add(chi.value(0));
    for n in 1..=cutoff {
        let c = chi.value(n as i64);
        if c.re == 0.0 && c.im == 0.0 {
            continue;
        }
        let n2 = (n as u128) * (n as u128);
        let gauss = (-PI * (n as f64).powi(2) * y).exp();
        acc.add(2.0 * gauss * c * phase_neg(n2, x));
    }
    Ok(acc.value())
}

/// Principal square root of `y + 2iδ`.
fn sqrt_z(z: Complex64) -> Complex64 {
    z.sqrt()
}

/// `Σ_m S(p/q, m/q) e^{−(π/z)(m/q − k/N)²}` with `z = y + 2iδ`, summed over
/// the given `m` range or over the Gaussian's effective support.
fn dual_sum(p: i64, q: i64, delta: f64, y: f64, n_mod: u64, k: i64, m_cutoff: Option<i64>) -> Complex64 {
    let z = Complex64::new(y, 2.0 * delta);
    let inv_z = PI / z;
    let center = k as f64 / n_mod as f64;
    let (lo, hi) = match m_cutoff {
        Some(c) => (-c, c),
        None => {
            // |e^{−(π/z)u²}| = e^{−π y u²/|z|²}
            let u = (TAIL_EXPONENT * z.norm_sqr() / (PI * y)).sqrt();
            (
                ((center - u) * q as f64).floor() as i64,
                ((center + u) * q as f64).ceil() as i64,
            )
        }
    };
    let mut cache: HashMap<i64, Complex64> = HashMap::new();
    sum_complex((lo..=hi).map(|m| {
        let s = *cache.entry(m.rem_euclid(q)).or_insert_with(|| {
            crate::arith::quadratic_sum_unchecked(p, q, m.rem_euclid(q))
        });
        // u = m/q − k/N exactly over the common denominator qN.
        let num = m as i128 * n_mod as i128 - k as i128 * q as i128;
        let u = num as f64 / (q as f64 * n_mod as f64);
        s * (-inv_z * u * u).exp()
    }))
}

/// `T_y = (q z^{1/2})^{−1} Σ_m S(p/q, m/q) e^{−(π/z)(m/q − k/N)²}` with
/// `z = y + 2iδ` (principal branch). Callers normally use `k = 1`.
pub fn t_y_direct(
    p: i64,
    q: i64,
    delta: f64,
    y: f64,
    n_mod: u64,
    k: i64,
    m_cutoff: Option<i64>,
) -> Result<Complex64> {
    check_coprime(p, q)?;
    check_y(y)?;
    if n_mod == 0 {
        return Err(Error::param("N", "must be >= 1"));
    }
    let z = Complex64::new(y, 2.0 * delta);
    Ok(dual_sum(p, q, delta, y, n_mod, k, m_cutoff) / (q as f64 * sqrt_z(z)))
}

/// The dual (Poisson) expansion
/// `(χ(−1)τ(χ)/N) Σ_{k mod N} χ̄(k) T_y^{(k)}`.
///
/// With the sign conventions of the expansion this equals `S_y` evaluated
/// at `−p/q + δ`, i.e. at `(q − p)/q + δ`.
pub fn theta_dual(chi: &DirichletCharacter, p: i64, q: i64, delta: f64, y: f64) -> Result<Complex64> {
    let n_mod = chi.modulus();
    let tau = gauss_sum(chi)?;
    let mut acc = ComplexSum::new();
    for k in 0..n_mod as i64 {
        let c = chi.value(k);
        if c.re == 0.0 && c.im == 0.0 {
            continue;
        }
        acc.add(c.conj() * t_y_direct(p, q, delta, y, n_mod, k, None)?);
    }
    Ok(chi.parity() as f64 * tau / n_mod as f64 * acc.value())
}

/// Major-arc main term `S(p/q, m₀/q)/(q z^{1/2})` with `m₀/q = k/N` when
/// `N | kq`, else 0. The gate flags inputs outside the constraint region.
pub fn lemma1_main_term(
    p: i64,
    q: i64,
    delta: f64,
    y: f64,
    n_mod: u64,
    k: i64,
    gate: &RegimeGate,
) -> Result<Gated<Complex64>> {
    check_coprime(p, q)?;
    check_y(y)?;
    if n_mod == 0 {
        return Err(Error::param("N", "must be >= 1"));
    }
    let kq = k as i128 * q as i128;
    let value = if kq % n_mod as i128 == 0 {
        let m0 = (kq / n_mod as i128) as i64;
        let z = Complex64::new(y, 2.0 * delta);
        quadratic_gauss_sum(p, q, m0)? / (q as f64 * sqrt_z(z))
    } else {
        Complex64::new(0.0, 0.0)
    };
    Ok(Gated {
        value,
        in_regime: gate.contains(q, delta, y),
    })
}
