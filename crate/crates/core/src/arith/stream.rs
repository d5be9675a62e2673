//! Coefficient sequences `{a_n}` feeding the multipliers and operators.

use std::sync::Arc;

use num_complex::Complex64;

use super::{ideal_norm_table, pentagonal_coefficients, DirichletCharacter};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum CoefficientStream {
    /// `a_n = 1` iff `n` is a `k`-th power. `k = 1` is the all-ones stream.
    Power { k: u32 },
    CharTwisted(DirichletCharacter),
    /// Signs of Euler's series, `a_0 = 1`.
    Pentagonal,
    /// Ideal counts of `Q(√D)`; `cache[n]` holds `a_n` for `n < cache.len()`.
    IdealNorm { disc: i64, cache: Arc<Vec<u64>> },
    /// Explicit coefficients, `values[n] = a_n`, zero beyond the end.
    Custom(Arc<Vec<Complex64>>),
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl CoefficientStream {
    pub fn all_ones() -> Self {
        CoefficientStream::Power { k: 1 }
    }

    pub fn power(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::param("k", "power must be >= 1"));
        }
        Ok(CoefficientStream::Power { k })
    }

    pub fn ideal_norm(disc: i64) -> Result<Self> {
        Ok(CoefficientStream::IdealNorm {
            disc,
            cache: Arc::new(ideal_norm_table(disc, 0)?),
        })
    }

    pub fn custom(values: Vec<Complex64>) -> Self {
        CoefficientStream::Custom(Arc::new(values))
    }

    /// Single-term stream `a_n = 1`, all others zero.
    pub fn single(n: usize) -> Self {
        let mut v = vec![ZERO; n + 1];
        v[n] = ONE;
        Self::custom(v)
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            CoefficientStream::Power { .. } => "power",
            CoefficientStream::CharTwisted(_) => "char",
            CoefficientStream::Pentagonal => "pentagonal",
            CoefficientStream::IdealNorm { .. } => "ideal-norm",
            CoefficientStream::Custom(_) => "custom",
        }
    }

    /// `a_0, a_1, …, a_{n_max}`.
    pub fn terms(&self, n_max: usize) -> Vec<Complex64> {
        match self {
            CoefficientStream::Power { k } => {
                let mut v = vec![ZERO; n_max + 1];
                for m in 1.. {
                    match checked_pow(m, *k) {
                        Some(n) if n <= n_max as u128 => v[n as usize] = ONE,
                        _ => break,
                    }
                }
                v
            }
            CoefficientStream::CharTwisted(chi) => {
                let mut v: Vec<Complex64> = (0..=n_max as i64).map(|n| chi.value(n)).collect();
                v[0] = ZERO;
                v
            }
            CoefficientStream::Pentagonal => pentagonal_coefficients(n_max)
                .into_iter()
                .map(|a| Complex64::new(a as f64, 0.0))
                .collect(),
            CoefficientStream::IdealNorm { disc, cache } => {
                let owned;
                let table: &[u64] = if cache.len() > n_max {
                    cache
                } else {
                    owned = ideal_norm_table(*disc, n_max).expect("validated at construction");
                    &owned
                };
                table[..=n_max]
                    .iter()
                    .map(|&a| Complex64::new(a as f64, 0.0))
                    .collect()
            }
            CoefficientStream::Custom(values) => (0..=n_max)
                .map(|n| values.get(n).copied().unwrap_or(ZERO))
                .collect(),
        }
    }

    /// Nonzero `(n, a_n)` with `1 ≤ n ≤ n_max`, in increasing `n`. Sparse
    /// streams are enumerated directly without materializing zeros.
    pub fn support(&self, n_max: u64) -> Vec<(u64, Complex64)> {
        match self {
            CoefficientStream::Power { k } if *k > 1 => (1..)
                .map_while(|m| checked_pow(m, *k).filter(|&n| n <= n_max as u128))
                .map(|n| (n as u64, ONE))
                .collect(),
            CoefficientStream::Pentagonal => {
                let mut out = Vec::new();
                for m in 1i64.. {
                    let mut any = false;
                    for j in [m, -m] {
                        let n = j * (3 * j + 1) / 2;
                        if n as u64 <= n_max {
                            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                            out.push((n as u64, Complex64::new(sign, 0.0)));
                            any = true;
                        }
                    }
                    if !any {
                        break;
                    }
                }
                out.sort_by_key(|&(n, _)| n);
                out
            }
            CoefficientStream::Custom(values) => values
                .iter()
                .enumerate()
                .take((n_max as usize).saturating_add(1))
                .skip(1)
                .filter(|(_, a)| **a != ZERO)
                .map(|(n, a)| (n as u64, *a))
                .collect(),
            _ => self
                .terms(n_max as usize)
                .into_iter()
                .enumerate()
                .skip(1)
                .filter(|(_, a)| *a != ZERO)
                .map(|(n, a)| (n as u64, a))
                .collect(),
        }
    }

    /// Upper bound on the number of nonzero terms with `1 ≤ n ≤ n_max`,
    /// without materializing them.
    pub fn support_size_hint(&self, n_max: u64) -> u64 {
        match self {
            CoefficientStream::Power { k } => (n_max as f64).powf(1.0 / *k as f64).ceil() as u64 + 1,
            CoefficientStream::Pentagonal => 2 * ((2.0 * n_max as f64 / 3.0).sqrt().ceil() as u64 + 1),
            CoefficientStream::Custom(values) => n_max.min(values.len() as u64),
            _ => n_max,
        }
    }

    /// The coefficient of a single index, for spot checks.
    pub fn coeff(&self, n: u64) -> Complex64 {
        match self {
            CoefficientStream::IdealNorm { cache, .. } if (n as usize) < cache.len() => {
                Complex64::new(cache[n as usize] as f64, 0.0)
            }
            CoefficientStream::CharTwisted(chi) if n > 0 => chi.value(n as i64),
            _ => self.terms(n as usize)[n as usize],
        }
    }
}

fn checked_pow(m: u128, k: u32) -> Option<u128> {
    m.checked_pow(k)
}
