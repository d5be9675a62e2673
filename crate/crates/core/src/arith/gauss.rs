//! Gauss sums and quadratic Weyl sums, with phases reduced exactly in
//! integer arithmetic before touching floating point.

use num_complex::Complex64;

use super::{check_coprime, DirichletCharacter};
use crate::summation::{sum_complex, unit_root};
use crate::{Error, Result};

/// `τ(χ) = Σ_{n mod N} χ(n) e^{2πi n/N}` for primitive `χ`.
pub fn gauss_sum(chi: &DirichletCharacter) -> Result<Complex64> {
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive {
            modulus: chi.modulus(),
            conductor: chi.conductor(),
        });
    }
    let n = chi.modulus();
    let l = chi.order();
    // χ(a) e^{2πi a/N} = e^{2πi (r N + a L)/(L N)}.
    Ok(sum_complex((0..n).filter_map(|a| {
        chi.exponent(a as i64)
            .map(|r| unit_root((r * n + a * l) as i64, l * n))
    })))
}

/// `S(p/q, m/q) = Σ_{ℓ=1}^{q} e^{2πi (pℓ² + mℓ)/q}`.
pub fn quadratic_gauss_sum(p: i64, q: i64, m: i64) -> Result<Complex64> {
    check_coprime(p, q)?;
    Ok(quadratic_sum_unchecked(p, q, m))
}

pub(crate) fn quadratic_sum_unchecked(p: i64, q: i64, m: i64) -> Complex64 {
    let qq = q as i128;
    let (p, m) = ((p as i128).rem_euclid(qq), (m as i128).rem_euclid(qq));
    sum_complex((1..=q as i128).map(|l| {
        let r = (p * (l * l % qq) + m * l) % qq;
        unit_root(r as i64, q as u64)
    }))
}

/// `S(p/q) = Σ_{ℓ=1}^{q} e^{−2πi (p/q)(6ℓ² + ℓ)}`.
pub fn euler_weyl_sum(p: i64, q: i64) -> Result<Complex64> {
    check_coprime(p, q)?;
    let qq = q as i128;
    let p = (p as i128).rem_euclid(qq);
    Ok(sum_complex((1..=q as i128).map(|l| {
        let r = p * ((6 * l * l + l) % qq) % qq;
        unit_root(-(r as i64), q as u64)
    })))
}
