use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::arith::{pow_mod, CoefficientStream};
use crate::multipliers::EvalParams;
use crate::summation::ComplexSum;
use crate::{Error, Result};

/// Kernel `a_n n^{−s} e^{−πn²ε}` folded onto `Z/GZ`. A `power_k` stream
/// folds `n^k` with the base weight `n^{−s}`.
pub fn folded_kernel(stream: &CoefficientStream, s: f64, g: usize, params: &EvalParams) -> Result<Vec<Complex64>> {
    if g < 2 {
        return Err(Error::param("G", "must be >= 2"));
    }
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::param("s", "must be >= 0"));
    }
    let ones = CoefficientStream::all_ones();
    let (base, k) = match stream {
        CoefficientStream::Power { k } => (&ones, *k as u64),
        other => (other, 1),
    };
    let mut bins = vec![ComplexSum::new(); g];
    for (n, a) in base.support(params.n_max) {
        let reg = (-std::f64::consts::PI * (n as f64).powi(2) * params.epsilon).exp();
        bins[pow_mod(n, k, g as u64) as usize].add(a * ((n as f64).powf(-s) * reg));
    }
    Ok(bins.iter().map(|b| b.value()).collect())
}

/// Eigenvalues `λ_j = Σ_r c_r e^{−2πirj/G}` of the circulant.
pub fn circulant_symbol(stream: &CoefficientStream, s: f64, g: usize, params: &EvalParams) -> Result<Vec<Complex64>> {
    let mut buf = folded_kernel(stream, s, g, params)?;
    FftPlanner::new().plan_fft_forward(g).process(&mut buf);
    Ok(buf)
}

/// `ℓ² → ℓ²` norm of convolution by the folded kernel on `Z/GZ`: the
/// largest eigenvalue modulus, since circulants are normal.
pub fn circulant_l2_norm(stream: &CoefficientStream, s: f64, g: usize, params: &EvalParams) -> Result<f64> {
    Ok(circulant_symbol(stream, s, g, params)?
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max))
}
