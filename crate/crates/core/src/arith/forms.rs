//! Positive definite binary quadratic forms, their reduced representatives,
//! and ideal counts of imaginary quadratic fields.

use std::sync::Arc;

use num_integer::Integer;

use super::CoefficientStream;
use crate::{Error, Result};

/// Primitive positive definite form `a m² + b m n + c n²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadraticForm {
    a: i64,
    b: i64,
    c: i64,
}

impl QuadraticForm {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let disc = b * b - 4 * a * c;
        if disc >= 0 || a <= 0 {
            return Err(Error::NotPositiveDefinite { a, b, c });
        }
        if a.gcd(&b).gcd(&c) != 1 {
            return Err(Error::param(
                "form",
                format!("({a}, {b}, {c}) is not primitive"),
            ));
        }
        Ok(Self { a, b, c })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    #[inline]
    pub fn eval(&self, m: i64, n: i64) -> i64 {
        self.a * m * m + self.b * m * n + self.c * n * n
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    /// Smallest eigenvalue of the Gram matrix `[[a, b/2], [b/2, c]]`.
    pub fn min_eigenvalue(&self) -> f64 {
        let (a, b, c) = (self.a as f64, self.b as f64, self.c as f64);
        0.5 * (a + c - ((a - c).powi(2) + b * b).sqrt())
    }
}

fn check_discriminant(disc: i64) -> Result<()> {
    if disc >= 0 || !matches!(disc.rem_euclid(4), 0 | 1) {
        return Err(Error::InvalidDiscriminant { disc });
    }
    Ok(())
}

fn is_squarefree(n: u64) -> bool {
    super::factorize(n).iter().all(|&(_, e)| e == 1)
}

pub fn is_fundamental_discriminant(disc: i64) -> bool {
    if disc >= 0 {
        return false;
    }
    let m = disc.unsigned_abs();
    match disc.rem_euclid(4) {
        1 => is_squarefree(m),
        0 => {
            let k = disc / 4;
            matches!(k.rem_euclid(4), 2 | 3) && is_squarefree(k.unsigned_abs())
        }
        _ => false,
    }
}

/// Every reduced primitive form of discriminant `D`, ordered by `(a, b)`.
pub fn reduced_forms(disc: i64) -> Result<Vec<QuadraticForm>> {
    check_discriminant(disc)?;
    let mut out = Vec::new();
    let a_max = ((disc.unsigned_abs() as f64 / 3.0).sqrt() as i64) + 1;
    for a in 1..=a_max {
        for b in -a..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if let Ok(f) = QuadraticForm::new(a, b, c) {
                if f.is_reduced() {
                    out.push(f);
                }
            }
        }
    }
    Ok(out)
}

/// `r(n) = #{(m₁, m₂) ≠ 0 : φ(m₁, m₂) = n}` for `n = 0..=n_max` (index 0 is
/// always 0).
pub fn representation_counts(form: &QuadraticForm, n_max: usize) -> Vec<u64> {
    let mut r = vec![0u64; n_max + 1];
    let nm = n_max as i64;
    let (a, b, c) = (form.a, form.b, form.c);
    let bound = (n_max as f64 / form.min_eigenvalue()).sqrt().ceil() as i64 + 1;
    for m2 in -bound..=bound {
        // a m1² + b m2 m1 + (c m2² − n_max) ≤ 0
        let disc = (b * m2) as f64 * (b * m2) as f64 - 4.0 * a as f64 * (c * m2 * m2 - nm) as f64;
        if disc < 0.0 {
            continue;
        }
        let root = disc.sqrt();
        let lo = ((-(b * m2) as f64 - root) / (2.0 * a as f64)).floor() as i64 - 1;
        let hi = ((-(b * m2) as f64 + root) / (2.0 * a as f64)).ceil() as i64 + 1;
        for m1 in lo..=hi {
            if m1 == 0 && m2 == 0 {
                continue;
            }
            let v = form.eval(m1, m2);
            if v <= nm {
                r[v as usize] += 1;
            }
        }
    }
    r
}

/// Number of roots of unity in the field of discriminant `D`.
pub fn unit_count(disc: i64) -> u64 {
    match disc {
        -3 => 6,
        -4 => 4,
        _ => 2,
    }
}

/// Number of integral ideals of each norm `0..=n_max` (index 0 is 0).
pub fn ideal_norm_table(disc: i64, n_max: usize) -> Result<Vec<u64>> {
    check_discriminant(disc)?;
    if !is_fundamental_discriminant(disc) {
        return Err(Error::NotFundamental { disc });
    }
    let w = unit_count(disc);
    let mut total = vec![0u64; n_max + 1];
    for form in reduced_forms(disc)? {
        for (t, r) in total.iter_mut().zip(representation_counts(&form, n_max)) {
            *t += r;
        }
    }
    Ok(total
        .into_iter()
        .map(|t| {
            debug_assert_eq!(t % w, 0);
            t / w
        })
        .collect())
}

/// Ideal-norm coefficient stream of `Q(√D)`, with counts precomputed up to
/// `n_max`.
pub fn ideal_norm_counts(disc: i64, n_max: usize) -> Result<CoefficientStream> {
    let table = ideal_norm_table(disc, n_max)?;
    Ok(CoefficientStream::IdealNorm {
        disc,
        cache: Arc::new(table),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_class_groups() {
        let f = |a, b, c| QuadraticForm::new(a, b, c).unwrap();
        assert_eq!(reduced_forms(-4).unwrap(), vec![f(1, 0, 1)]);
        assert_eq!(reduced_forms(-3).unwrap(), vec![f(1, 1, 1)]);
        let mut h23 = reduced_forms(-23).unwrap();
        h23.sort();
        assert_eq!(h23, vec![f(1, 1, 6), f(2, -1, 3), f(2, 1, 3)]);
        assert!(matches!(reduced_forms(-5), Err(Error::InvalidDiscriminant { .. })));
        assert!(matches!(reduced_forms(8), Err(Error::InvalidDiscriminant { .. })));
    }

    #[test]
    fn sums_of_two_squares() {
        let r = representation_counts(&QuadraticForm::new(1, 0, 1).unwrap(), 25);
        assert_eq!(r[1], 4);
        assert_eq!(r[3], 0);
        assert_eq!(r[5], 8);
        assert_eq!(r[25], 12);
    }

    #[test]
    fn form_validation() {
        assert!(matches!(
            QuadraticForm::new(1, 3, 1),
            Err(Error::NotPositiveDefinite { .. })
        ));
        assert!(QuadraticForm::new(2, 2, 2).is_err());
    }

    #[test]
    fn fundamental_discriminants() {
        let fund: Vec<i64> = (-30..0).filter(|&d| is_fundamental_discriminant(d)).collect();
        assert_eq!(fund, vec![-24, -23, -20, -19, -15, -11, -8, -7, -4, -3]);
        assert!(matches!(
            ideal_norm_table(-12, 10),
            Err(Error::NotFundamental { disc: -12 })
        ));
    }

    #[test]
    fn gaussian_ideals() {
        let a = ideal_norm_table(-4, 10).unwrap();
        assert_eq!(&a[1..6], &[1, 1, 0, 1, 2]);
        assert_eq!(ideal_norm_table(-3, 3).unwrap()[1], 1);
        // 2 splits in Q(√−23) since −23 ≡ 1 (mod 8).
        assert_eq!(ideal_norm_table(-23, 2).unwrap()[2], 2);
    }
}
