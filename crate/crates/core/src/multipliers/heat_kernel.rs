//! The multiplier as a Mellin transform of its generating function:
//! `Σ a_n e^{−2πinx} n^{−s} = (2π)^s/Γ(s) ∫₀^∞ f(−x + iy) y^{s−1} dy`
//! with `f(z) = Σ_{n ≥ 1} a_n e^{2πinz}`.
//!
//! The constant term `a_0` would make the integral diverge, so it is handled
//! separately: the integrand carries `a_0 e^{−2πy}`, whose transform is
//! exactly `a_0`, and `a_0` is subtracted afterwards. For cusp-form-like
//! series (Euler's product) the full series vanishes at every rational, and
//! this makes the integrand decay as `y → 0`.
//!
//! The integral is taken in the variable `t = ln y`, where the integrand
//! decays doubly exponentially as `t → ∞` and is smooth, so the trapezoid
//! rule converges geometrically as the step is halved.

use std::f64::consts::TAU;

use num_complex::Complex64;
use statrs::function::gamma::gamma;

use super::spec::{MultiplierSpec, Phase};
use crate::summation::{phase_neg, ComplexSum};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatKernelParams {
    /// Target absolute error of the integral.
    pub tol: f64,
    /// Smallest `y` the lower limit may be pushed to.
    pub y_min: f64,
    /// Most nonzero coefficients materialized to evaluate `f` near `y_min`.
    pub max_terms: u64,
    pub max_halvings: u32,
}

impl Default for HeatKernelParams {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            y_min: 1e-40,
            max_terms: 20_000_000,
            max_halvings: 14,
        }
    }
}

const TAIL_EXPONENT: f64 = 45.0;

struct Integrand {
    terms: Vec<(u64, Complex64)>,
    a0: Complex64,
    s: f64,
    x: f64,
}

impl Integrand {
    /// `f(−x + i e^t) e^{st}`.
    fn eval(&self, t: f64) -> Complex64 {
        let y = t.exp();
        let n_cut = TAIL_EXPONENT / (TAU * y);
        let mut acc = ComplexSum::new();
        acc.add(self.a0 * (-TAU * y).exp());
        for &(n, a) in &self.terms {
            if n as f64 > n_cut {
                break;
            }
            acc.add(a * (-TAU * n as f64 * y).exp() * phase_neg(n as u128, self.x));
        }
        acc.value() * (self.s * t).exp()
    }
}

fn trapezoid(g: &Integrand, lo: f64, hi: f64, params: &HeatKernelParams) -> Result<(Complex64, f64)> {
    let mut n = ((hi - lo) / 0.25).ceil().max(4.0) as usize;
    let mut h = (hi - lo) / n as f64;
    let mut sum = ComplexSum::new();
    sum.add(0.5 * (g.eval(lo) + g.eval(hi)));
    for i in 1..n {
        sum.add(g.eval(lo + i as f64 * h));
    }
    let mut est = sum.value() * h;
    for _ in 0..params.max_halvings {
        for i in 0..n {
            sum.add(g.eval(lo + (i as f64 + 0.5) * h));
        }
        n *= 2;
        h *= 0.5;
        let next = sum.value() * h;
        let diff = (next - est).norm();
        est = next;
        if diff < params.tol {
            return Ok((est, diff));
        }
    }
    Err(Error::QuadratureNonConvergence {
        achieved: (sum.value() * h - est).norm().max(params.tol * 2.0),
        tolerance: params.tol,
    })
}

/// Heat-kernel evaluation of a plain-phase multiplier. The stream's `a_0`
/// is excluded. Fails with the achieved error estimate when the integral
/// cannot be resolved within the parameters (typically when `f(−x + iy)`
/// does not decay fast enough as `y → 0`).
pub fn heat_kernel_eval(spec: &MultiplierSpec, x: f64, params: &HeatKernelParams) -> Result<Complex64> {
    if spec.phase() != Phase::Plain {
        return Err(Error::param("phase", "the heat-kernel path needs a plain phase"));
    }
    let s = spec.s();
    let n_for = |y: f64| (TAIL_EXPONENT / (TAU * y)).ceil().min(u64::MAX as f64 / 2.0) as u64;
    let too_many = |y: f64| spec.stream().support_size_hint(n_for(y)) > params.max_terms;
    let a0 = spec.stream().coeff(0);
    let first = spec.stream().support(1 << 20).first().map(|&(n, _)| n);
    let Some(n_min) = first else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    // Above t_hi every term is below e^{−45}.
    let t_hi = (TAIL_EXPONENT / (TAU * n_min as f64)).ln() + 0.5;
    let mut t_lo = t_hi - 6.0;
    let t_floor = params.y_min.ln();

    // Push the lower limit down until two consecutive unit slabs are
    // negligible.
    let mut quiet = 0;
    let mut last_slab = f64::INFINITY;
    let mut g = Integrand {
        terms: spec.stream().support(n_for(t_lo.exp())),
        a0,
        s,
        x,
    };
    while quiet < 2 {
        if t_lo - 1.0 < t_floor || too_many((t_lo - 1.0).exp()) {
            return Err(Error::QuadratureNonConvergence {
                achieved: last_slab,
                tolerance: params.tol,
            });
        }
        g.terms = spec.stream().support(n_for((t_lo - 1.0).exp()));
        let slab = (0..=16)
            .map(|i| {
                let w = if i == 0 || i == 16 { 0.5 } else { 1.0 };
                w * g.eval(t_lo - i as f64 / 16.0).norm()
            })
            .sum::<f64>()
            / 16.0;
        last_slab = slab;
        quiet = if slab < 0.1 * params.tol { quiet + 1 } else { 0 };
        t_lo -= 1.0;
    }
    let (integral, _) = trapezoid(&g, t_lo, t_hi, params)?;
    Ok(integral * (TAU.powf(s) / gamma(s)) - a0)
}
