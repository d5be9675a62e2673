use num_complex::Complex64;
use rayon::prelude::*;

use super::{BoxRegion, LatticeFunction};
use crate::arith::CoefficientStream;
use crate::multipliers::{MultiplierSpec, Phase};
use crate::{Error, Result};

/// Base indices covered by the default window, at least.
pub const MIN_KERNEL_TERMS: u64 = 16;

/// `I g(m) = Σ_{n ≥ 1} a_n n^{−s} g(m − n)` on the default window
/// `[lo + 1, hi + φ(n_max)]` of a function supported on `[lo, hi]`, where
/// `n_max = max(width, 16)`.
///
/// A `power_k` stream convolves along `n^k` with weight `n^{−s}`.
pub fn apply_fractional(f: &LatticeFunction, stream: &CoefficientStream, s: f64) -> Result<LatticeFunction> {
    let (lo, hi) = interval_of(f)?;
    let spec = MultiplierSpec::new(s, stream.clone(), Phase::Plain)?;
    let n_max = ((hi - lo + 1) as u64).max(MIN_KERNEL_TERMS);
    let reach = i64::try_from(spec.frequency(n_max)).map_err(|_| Error::param("f", "support too wide"))?;
    apply_convolution(f, &spec, &BoxRegion::interval(lo + 1, hi + reach)?)
}

/// [`apply_fractional`] evaluated on an explicit window.
pub fn apply_fractional_on(
    f: &LatticeFunction,
    stream: &CoefficientStream,
    s: f64,
    window: &BoxRegion,
) -> Result<LatticeFunction> {
    let spec = MultiplierSpec::new(s, stream.clone(), Phase::Plain)?;
    apply_convolution(f, &spec, window)
}

/// Convolution by the kernel of a multiplier spec: offsets `φ(n)`, weights
/// `b_n n^{−s}`.
pub fn apply_convolution(f: &LatticeFunction, spec: &MultiplierSpec, window: &BoxRegion) -> Result<LatticeFunction> {
    let (lo, hi) = interval_of(f)?;
    let vals = f.values();
    if window.dim() != 1 {
        return Err(Error::param("window", "must be one-dimensional"));
    }
    let (wlo, whi) = (window.lo()[0], window.hi()[0]);
    let reach = (whi - lo).max(0) as u64;
    let kernel = spec.kernel(reach);
    let out: Vec<Complex64> = (wlo..=whi)
        .into_par_iter()
        .map(|m| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(d, w) in &kernel {
                let src = m - d as i64;
                if src < lo {
                    break;
                }
                if src <= hi {
                    acc += w * vals[(src - lo) as usize];
                }
            }
            acc
        })
        .collect();
    LatticeFunction::from_values(vec![1], window.clone(), out)
}

fn interval_of(f: &LatticeFunction) -> Result<(i64, i64)> {
    if f.dims() != [1] {
        return Err(Error::param("f", "fractional integrals act on functions on Z"));
    }
    Ok((f.region().lo()[0], f.region().hi()[0]))
}
