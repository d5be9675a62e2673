//! Exact number-theoretic kernels.

mod characters;
mod forms;
mod gauss;
mod pentagonal;
mod stream;

pub use characters::{enumerate_characters, is_primitive, primitive_characters, DirichletCharacter};
pub use forms::{
    ideal_norm_counts, ideal_norm_table, is_fundamental_discriminant, reduced_forms,
    representation_counts, unit_count, QuadraticForm,
};
pub use gauss::{euler_weyl_sum, gauss_sum, quadratic_gauss_sum};
pub(crate) use gauss::quadratic_sum_unchecked;
pub use pentagonal::{euler_split_coefficients, pentagonal_coefficients};
pub use stream::CoefficientStream;

/// Prime factorization by trial division, as `(p, e)` pairs in increasing `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut acc: u128 = 1;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    base = acc as u64;
    base
}

pub(crate) fn gcd_i64(a: i64, b: i64) -> i64 {
    num_integer::Integer::gcd(&a, &b)
}

pub(crate) fn check_coprime(p: i64, q: i64) -> crate::Result<()> {
    if q < 1 {
        return Err(crate::Error::param("q", format!("must be >= 1, got {q}")));
    }
    let g = gcd_i64(p, q);
    if g != 1 {
        return Err(crate::Error::NotCoprime { p, q, gcd: g });
    }
    Ok(())
}
