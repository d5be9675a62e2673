//! `m_{s,K}(x) = Σ_A m_{s,A}(x)` for an imaginary quadratic field, with
//! `m_{s,A}(x) = (1/w) Σ_{(m,n) ≠ 0} e^{−2πix φ_A(m,n)} φ_A(m,n)^{−s}`.
//!
//! Two routes are computed and returned side by side: a direct lattice sum
//! over every form in the class group, and the Dirichlet series with ideal
//! counts as coefficients.

use num_complex::Complex64;

use crate::arith::{ideal_norm_table, reduced_forms, unit_count, QuadraticForm};
use crate::summation::{phase_neg, sum_complex, ComplexSum};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ClassTerm {
    pub form: QuadraticForm,
    pub lattice: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadfieldValue {
    /// Sum of the per-class lattice sums.
    pub lattice: Complex64,
    /// `Σ_{n ≤ n_max} a_n e^{−2πinx} n^{−s}` with `a_n` the ideal counts.
    pub norm_counts: Complex64,
    pub classes: Vec<ClassTerm>,
}

fn lattice_sum(form: &QuadraticForm, s: f64, x: f64, n_max: u64) -> Complex64 {
    let (b, c) = (form.b() as f64, form.c() as f64);
    // φ(m, n) ≥ (4ac − b²)/(4c) · m², so |m| ≤ √(4c·n_max/|D|).
    let disc = -(form.discriminant() as f64);
    let m_bound = (4.0 * c * n_max as f64 / disc).sqrt().ceil() as i64 + 1;
    let mut acc = ComplexSum::new();
    for m in -m_bound..=m_bound {
        // Complete the square in n: c(n + bm/(2c))² + (|D|/(4c)) m².
        let center = -b * m as f64 / (2.0 * c);
        let rest = (n_max as f64 - disc / (4.0 * c) * (m * m) as f64) / c;
        if rest < 0.0 {
            continue;
        }
        let r = rest.sqrt();
        for n in (center - r).floor() as i64 - 1..=(center + r).ceil() as i64 + 1 {
            if m == 0 && n == 0 {
                continue;
            }
            let v = form.eval(m, n);
            if v as u64 > n_max {
                continue;
            }
            acc.add((v as f64).powf(-s) * phase_neg(v as u128, x));
        }
    }
    acc.value()
}

pub fn quadfield_multiplier(disc: i64, s: f64, x: f64, n_max: u64) -> Result<QuadfieldValue> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::param("s", format!("must be > 0, got {s}")));
    }
    let counts = ideal_norm_table(disc, n_max as usize)?;
    let w = unit_count(disc) as f64;
    let classes: Vec<ClassTerm> = reduced_forms(disc)?
        .into_iter()
        .map(|form| ClassTerm {
            form,
            lattice: lattice_sum(&form, s, x, n_max) / w,
        })
        .collect();
    let lattice = sum_complex(classes.iter().map(|c| c.lattice));
    let norm_counts = sum_complex(
        counts
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &a)| a > 0)
            .map(|(n, &a)| a as f64 * (n as f64).powf(-s) * phase_neg(n as u128, x)),
    );
    Ok(QuadfieldValue {
        lattice,
        norm_counts,
        classes,
    })
}
