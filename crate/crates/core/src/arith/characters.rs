//! Dirichlet characters built from a cyclic decomposition of `(Z/NZ)*`.
//!
//! Each odd prime power contributes one cyclic factor generated by a
//! primitive root; `2^e` contributes `{±1}` (for `e ≥ 2`) and `⟨5⟩` (for
//! `e ≥ 3`). Values are stored both as complex numbers and as exact phase
//! exponents `r` with `χ(n) = e^{2πi r/L}`, `L` the exponent of the group.

use num_complex::Complex64;
use num_integer::Integer;

use super::{factorize, pow_mod};
use crate::summation::unit_root;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DirichletCharacter {
    modulus: u64,
    order: u64,
    index: Vec<u64>,
    exps: Vec<Option<u64>>,
    values: Vec<Complex64>,
    conductor: u64,
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Exponent `L` of the group: every value is an `L`-th root of unity.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Position of the character in the dual group, one coordinate per
    /// cyclic factor. The principal character is all zeros.
    pub fn index(&self) -> &[u64] {
        &self.index
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, n: i64) -> Complex64 {
        self.values[n.rem_euclid(self.modulus as i64) as usize]
    }

    /// `r` with `χ(n) = e^{2πi r/L}`, or `None` when `gcd(n, N) > 1`.
    pub fn exponent(&self, n: i64) -> Option<u64> {
        self.exps[n.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    pub fn is_principal(&self) -> bool {
        self.exps.iter().all(|e| matches!(e, None | Some(0)))
    }

    /// `χ(−1)`, always `±1`.
    pub fn parity(&self) -> i32 {
        match self.exponent(-1) {
            Some(0) => 1,
            _ => -1,
        }
    }

    pub fn is_real(&self) -> bool {
        self.exps.iter().flatten().all(|&r| (2 * r) % self.order == 0)
    }
}

pub fn is_primitive(chi: &DirichletCharacter) -> bool {
    chi.is_primitive()
}

struct CyclicFactor {
    generator: u64,
    order: u64,
}

fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let divisors: Vec<u64> = factorize(p - 1).into_iter().map(|(r, _)| r).collect();
    (2..p)
        .find(|&g| divisors.iter().all(|&r| pow_mod(g, (p - 1) / r, p) != 1))
        .expect("every prime has a primitive root")
}

/// Lift `g mod pe` to the residue `≡ g (mod pe)`, `≡ 1 (mod n/pe)`.
fn crt_lift(g: u64, pe: u64, n: u64) -> u64 {
    let rest = n / pe;
    if rest == 1 {
        return g % n;
    }
    let e = (rest as i64 % pe as i64).extended_gcd(&(pe as i64));
    let inv = e.x.rem_euclid(pe as i64) as u128;
    let t = ((g as i128 - 1).rem_euclid(pe as i128) as u128 * inv) % pe as u128;
    ((1 + rest as u128 * t) % n as u128) as u64
}

fn cyclic_factors(n: u64) -> Vec<CyclicFactor> {
    let mut out = Vec::new();
    for (p, e) in factorize(n) {
        let pe = p.pow(e);
        if p == 2 {
            if e >= 2 {
                out.push(CyclicFactor {
                    generator: crt_lift(pe - 1, pe, n),
                    order: 2,
                });
            }
            if e >= 3 {
                out.push(CyclicFactor {
                    generator: crt_lift(5, pe, n),
                    order: pe / 4,
                });
            }
        } else {
            let mut g = primitive_root(p);
            if e >= 2 && pow_mod(g, p - 1, p * p) == 1 {
                g += p;
            }
            out.push(CyclicFactor {
                generator: crt_lift(g, pe, n),
                order: pe / p * (p - 1),
            });
        }
    }
    out
}

/// Discrete-log table: coordinates of each unit with respect to the factors.
fn log_table(n: u64, factors: &[CyclicFactor]) -> Vec<Option<Vec<u64>>> {
    let mut table = vec![None; n as usize];
    let mut coords = vec![0u64; factors.len()];
    // Walk every coordinate tuple in mixed radix, maintaining the element.
    let mut elem = 1 % n;
    loop {
        table[elem as usize] = Some(coords.clone());
        let mut i = factors.len();
        loop {
            if i == 0 {
                return table;
            }
            i -= 1;
            coords[i] += 1;
            if coords[i] < factors[i].order {
                elem = (elem as u128 * factors[i].generator as u128 % n as u128) as u64;
                break;
            }
            // Wrap: g^order = 1 so the element is unchanged by this factor.
            coords[i] = 0;
            elem = (elem as u128 * factors[i].generator as u128 % n as u128) as u64;
        }
    }
}

fn conductor_of(n: u64, exps: &[Option<u64>]) -> u64 {
    let mut divisors: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    divisors.sort_unstable();
    for d in divisors {
        let trivial_on_kernel = (0..n / d)
            .map(|t| (1 + d * t) % n)
            .all(|a| matches!(exps[a as usize], None | Some(0)));
        if trivial_on_kernel {
            return d;
        }
    }
    n
}

/// All `φ(N)` characters modulo `N`, principal first, in mixed-radix order
/// of their dual-group coordinates.
pub fn enumerate_characters(n: u64) -> Result<Vec<DirichletCharacter>> {
    if n == 0 {
        return Err(Error::param("N", "modulus must be >= 1"));
    }
    let factors = cyclic_factors(n);
    let order = factors.iter().fold(1u64, |acc, f| acc.lcm(&f.order));
    let logs = log_table(n, &factors);

    let mut out = Vec::new();
    let mut index = vec![0u64; factors.len()];
    loop {
        let exps: Vec<Option<u64>> = logs
            .iter()
            .map(|slot| {
                slot.as_ref().map(|coords| {
                    coords
                        .iter()
                        .zip(&index)
                        .zip(&factors)
                        .map(|((&c, &k), f)| (c * k % f.order) * (order / f.order))
                        .sum::<u64>()
                        % order
                })
            })
            .collect();
        let values = exps
            .iter()
            .map(|e| match e {
                Some(r) => unit_root(*r as i64, order),
                None => Complex64::new(0.0, 0.0),
            })
            .collect();
        let conductor = conductor_of(n, &exps);
        out.push(DirichletCharacter {
            modulus: n,
            order,
            index: index.clone(),
            exps,
            values,
            conductor,
        });

        let mut i = factors.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            index[i] += 1;
            if index[i] < factors[i].order {
                break;
            }
            index[i] = 0;
        }
    }
}

pub fn primitive_characters(n: u64) -> Result<Vec<DirichletCharacter>> {
    Ok(enumerate_characters(n)?
        .into_iter()
        .filter(|c| c.is_primitive())
        .collect())
}
