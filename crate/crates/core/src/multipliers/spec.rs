use num_complex::Complex64;

use crate::arith::CoefficientStream;
use crate::summation::{phase_neg, sum_complex};
use crate::{Error, Result};

/// Phase polynomial `φ(n)` in `e^{−2πi·φ(n)x}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Plain,
    Power(u32),
}

/// `m(x) = Σ_{n ≥ 1} b_n e^{−2πi·φ(n)x} n^{−s}` with `b_n` the stream.
///
/// A `power_k` stream with plain phase is normalized to the all-ones stream
/// with phase `n^k`, so both spellings of `m_{s,k}` agree and the weight is
/// taken at the base `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierSpec {
    s: f64,
    stream: CoefficientStream,
    phase: Phase,
}

impl MultiplierSpec {
    pub fn new(s: f64, stream: CoefficientStream, phase: Phase) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::param("s", format!("must be > 0, got {s}")));
        }
        let (stream, phase) = match (stream, phase) {
            (CoefficientStream::Power { k }, Phase::Plain) if k > 1 => {
                (CoefficientStream::all_ones(), Phase::Power(k))
            }
            (_, Phase::Power(0)) => return Err(Error::param("k", "power must be >= 1")),
            (st, Phase::Power(1)) => (st, Phase::Plain),
            other => other,
        };
        Ok(Self { s, stream, phase })
    }

    /// `m_{s,k}(x) = Σ e^{−2πi n^k x} n^{−s}`.
    pub fn power(k: u32, s: f64) -> Result<Self> {
        Self::new(s, CoefficientStream::all_ones(), Phase::Power(k))
    }

    pub fn plain(stream: CoefficientStream, s: f64) -> Result<Self> {
        Self::new(s, stream, Phase::Plain)
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn stream(&self) -> &CoefficientStream {
        &self.stream
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    /// `φ(n)`, wrapping modulo `2^128` (phases only need it modulo `2^e`).
    #[inline]
    pub fn frequency(&self, n: u64) -> u128 {
        match self.phase {
            Phase::Plain => n as u128,
            Phase::Power(k) => (0..k).fold(1u128, |acc, _| acc.wrapping_mul(n as u128)),
        }
    }

    /// Nonzero `(n, b_n n^{−s})` for base indices `1 ≤ n ≤ n_max`.
    pub fn weights(&self, n_max: u64) -> Vec<(u64, Complex64)> {
        self.stream
            .support(n_max)
            .into_iter()
            .map(|(n, a)| (n, a * (n as f64).powf(-self.s)))
            .collect()
    }

    /// Convolution kernel `(φ(n), b_n n^{−s})` with `φ(n) ≤ reach`, sorted
    /// by offset.
    pub fn kernel(&self, reach: u64) -> Vec<(u64, Complex64)> {
        let base_max = match self.phase {
            Phase::Plain => reach,
            Phase::Power(k) => (reach as f64).powf(1.0 / k as f64).floor() as u64 + 1,
        };
        let mut out: Vec<(u64, Complex64)> = self
            .weights(base_max)
            .into_iter()
            .filter_map(|(n, w)| {
                let f = match self.phase {
                    Phase::Plain => Some(n as u128),
                    Phase::Power(k) => (n as u128).checked_pow(k),
                }?;
                (f <= reach as u128).then_some((f as u64, w))
            })
            .collect();
        out.sort_by_key(|&(f, _)| f);
        out
    }
}

/// Truncation and Abel–Gauss regularization `e^{−πn²ε}` of the series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalParams {
    pub n_max: u64,
    pub epsilon: f64,
}

/// `e^{−45} ≈ 3·10^{−20}` keeps the regularized tail below `10^{−15}` even
/// for `ε` as small as `2^{−40}`.
const TAIL_EXPONENT: f64 = 45.0;

impl EvalParams {
    pub fn new(n_max: u64, epsilon: f64) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::param("n_max", "must be >= 1"));
        }
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::param("epsilon", format!("must be >= 0, got {epsilon}")));
        }
        Ok(Self { n_max, epsilon })
    }

    /// Truncation where the Gaussian regularizer is negligible.
    pub fn for_epsilon(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(Error::param("epsilon", "automatic truncation needs epsilon > 0"));
        }
        let n_max = (TAIL_EXPONENT / (std::f64::consts::PI * epsilon)).sqrt().ceil() as u64;
        Self::new(n_max.max(1), epsilon)
    }

    /// `ε = G^{−2}`, matching the regularization scale to the grid spacing.
    pub fn for_grid(g: usize) -> Result<Self> {
        Self::for_epsilon((g as f64).powi(-2))
    }
}

/// A multiplier with its weights and regularizer folded in, for repeated
/// evaluation.
#[derive(Debug, Clone)]
pub struct PreparedMultiplier {
    terms: Vec<(u128, Complex64)>,
}

impl PreparedMultiplier {
    pub fn new(spec: &MultiplierSpec, params: &EvalParams) -> Self {
        let eps = params.epsilon;
        let terms = spec
            .weights(params.n_max)
            .into_iter()
            .map(|(n, w)| {
                let reg = if eps > 0.0 {
                    (-std::f64::consts::PI * (n as f64).powi(2) * eps).exp()
                } else {
                    1.0
                };
                (spec.frequency(n), w * reg)
            })
            .filter(|(_, w)| *w != Complex64::new(0.0, 0.0))
            .collect();
        Self { terms }
    }

    /// `(φ(n), weight)` pairs, including the regularizer.
    pub fn terms(&self) -> &[(u128, Complex64)] {
        &self.terms
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        sum_complex(self.terms.iter().map(|&(f, w)| w * phase_neg(f, x)))
    }
}

/// `Σ_{n=1}^{n_max} b_n e^{−2πi·φ(n)x} e^{−πn²ε} n^{−s}`.
pub fn eval_multiplier(spec: &MultiplierSpec, x: f64, params: &EvalParams) -> Complex64 {
    PreparedMultiplier::new(spec, params).eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::enumerate_characters;

    #[test]
    fn leibniz_series() {
        let chi = enumerate_characters(4).unwrap()[1].clone();
        let spec = MultiplierSpec::plain(CoefficientStream::CharTwisted(chi), 1.0).unwrap();
        let v = eval_multiplier(&spec, 0.0, &EvalParams::new(1_000_000, 0.0).unwrap());
        assert!((v.re - std::f64::consts::FRAC_PI_4).abs() < 1e-4);
        assert!(v.im.abs() < 1e-15);
    }

    /// Independent oracle: −η(1/2) by Euler's transform of the alternating
    /// series, written without any of the evaluator's code.
    fn neg_eta_half() -> f64 {
        // Average successive partial sums repeatedly (Euler–van Wijngaarden).
        let n = 60;
        let mut partial = Vec::with_capacity(n);
        let mut acc = 0.0;
        for k in 1..=n {
            acc += if k % 2 == 0 { 1.0 } else { -1.0 } / (k as f64).sqrt();
            partial.push(acc);
        }
        while partial.len() > 1 {
            partial = partial.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        }
        partial[0]
    }

    #[test]
    fn alternating_series_at_half() {
        let oracle = neg_eta_half();
        assert!((oracle + 0.604898643421630).abs() < 1e-9);
        // The raw partial sums oscillate by n^{-1/2}; regularize instead.
        let spec = MultiplierSpec::power(1, 0.5).unwrap();
        let v = eval_multiplier(&spec, 0.5, &EvalParams::for_epsilon(1e-8).unwrap());
        assert!((v.re - oracle).abs() < 1e-6, "{v}");
    }

    #[test]
    fn pentagonal_seven_terms() {
        let spec = MultiplierSpec::plain(CoefficientStream::Pentagonal, 0.3).unwrap();
        let x = 0.137;
        let v = eval_multiplier(&spec, x, &EvalParams::new(7, 0.0).unwrap());
        let term = |n: f64, a: f64| {
            a * n.powf(-0.3) * Complex64::from_polar(1.0, -std::f64::consts::TAU * n * x)
        };
        let expected = term(1.0, -1.0) + term(2.0, -1.0) + term(5.0, 1.0) + term(7.0, 1.0);
        assert!((v - expected).norm() < 1e-14);
    }

    #[test]
    fn power_stream_normalizes_to_power_phase() {
        let a = MultiplierSpec::plain(CoefficientStream::power(2).unwrap(), 0.6).unwrap();
        let b = MultiplierSpec::power(2, 0.6).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.frequency(3), 9);
        let w = b.weights(3);
        assert_eq!(w.len(), 3);
        assert!((w[2].1.re - 3f64.powf(-0.6)).abs() < 1e-15);
    }

    #[test]
    fn parameter_validation() {
        assert!(MultiplierSpec::power(2, 0.0).is_err());
        assert!(MultiplierSpec::power(0, 0.5).is_err());
        assert!(EvalParams::new(0, 0.0).is_err());
        assert!(EvalParams::new(5, -1.0).is_err());
        let p = EvalParams::for_grid(1 << 10).unwrap();
        assert_eq!(p.epsilon, 2f64.powi(-20));
        assert!(p.n_max > 3 * 1024);
    }
}
