//! Distribution functions and weak-`L^r` estimates of sampled multipliers.
//!
//! Multipliers are sampled at the midpoints `x_j = (j + ½)/G` by folding the
//! regularized series onto `Z/GZ` and taking one FFT, so a grid of size `G`
//! costs `O(n_max + G log G)`.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::multipliers::{EvalParams, MultiplierSpec, Phase};
use crate::summation::{unit_root, ComplexSum};
use crate::{Error, Result};

/// Ratio of consecutive α on the ladder.
pub const LADDER_RATIO: f64 = 1.189_207_115_002_721; // 2^{1/4}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleGrid {
    magnitudes: Vec<f64>,
    sorted: Vec<f64>,
    pub epsilon: f64,
    pub n_max: u64,
}

impl SampleGrid {
    pub fn from_magnitudes(magnitudes: Vec<f64>, epsilon: f64, n_max: u64) -> Result<Self> {
        if magnitudes.len() < 2 {
            return Err(Error::param("G", "grid needs at least 2 points"));
        }
        if magnitudes.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
            return Err(Error::param("magnitudes", "must be finite and >= 0"));
        }
        let mut sorted = magnitudes.clone();
        sorted.sort_by(f64::total_cmp);
        Ok(Self {
            magnitudes,
            sorted,
            epsilon,
            n_max,
        })
    }

    /// Grid of `|f(x_j)|` for a function given in closed form.
    pub fn from_fn(g: usize, f: impl Fn(f64) -> f64 + Sync) -> Result<Self> {
        let mags: Vec<f64> = (0..g)
            .into_par_iter()
            .map(|j| f((j as f64 + 0.5) / g as f64).abs())
            .collect();
        Self::from_magnitudes(mags, 0.0, 0)
    }

    pub fn len(&self) -> usize {
        self.magnitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.magnitudes.is_empty()
    }

    pub fn x(&self, j: usize) -> f64 {
        (j as f64 + 0.5) / self.len() as f64
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    pub fn max(&self) -> f64 {
        *self.sorted.last().expect("nonempty")
    }

    /// `#{j : |m(x_j)| > α}`.
    fn count_above(&self, alpha: f64) -> usize {
        self.len() - self.sorted.partition_point(|&v| v <= alpha)
    }

    /// `#{j : |m(x_j)| ≥ α}`.
    fn count_at_least(&self, alpha: f64) -> usize {
        self.len() - self.sorted.partition_point(|&v| v < alpha)
    }

    /// `α` with `λ(α) ≤ 1/2` for the first time: the median magnitude.
    pub fn median(&self) -> f64 {
        self.sorted[self.len() / 2]
    }
}

/// `|m(x_j)|` at `x_j = (j + ½)/G` for the regularized multiplier.
///
/// With `φ(n) = aG + r`, the sample is
/// `Σ_r [e^{−πir/G} Σ_{φ(n) ≡ r} (−1)^a w_n] e^{−2πirj/G}`, a forward DFT.
pub fn sample_multiplier(spec: &MultiplierSpec, g: usize, params: &EvalParams) -> Result<SampleGrid> {
    if g < 2 {
        return Err(Error::param("G", "grid needs at least 2 points"));
    }
    let two_g = 2 * g as u128;
    let eps = params.epsilon;
    let mut bins = vec![ComplexSum::new(); g];
    for (n, w) in spec.weights(params.n_max) {
        let reg = (-std::f64::consts::PI * (n as f64).powi(2) * eps).exp();
        if reg == 0.0 {
            break;
        }
        let f = match spec.phase() {
            Phase::Plain => n as u128 % two_g,
            Phase::Power(k) => (0..k).fold(1u128, |acc, _| acc * (n as u128 % two_g) % two_g),
        };
        let (r, sign) = if f >= g as u128 { (f - g as u128, -1.0) } else { (f, 1.0) };
        bins[r as usize].add(w * (sign * reg));
    }
    let mut buf: Vec<Complex64> = bins
        .iter()
        .enumerate()
        .map(|(r, b)| b.value() * unit_root(-(r as i64), two_g as u64))
        .collect();
    FftPlanner::new().plan_fft_forward(g).process(&mut buf);
    SampleGrid::from_magnitudes(
        buf.into_iter().map(|z| z.norm()).collect(),
        eps,
        params.n_max,
    )
}

/// `λ(α) = #{j : |m(x_j)| > α}/G` for each α.
pub fn distribution_function(grid: &SampleGrid, alphas: &[f64]) -> Vec<f64> {
    let g = grid.len() as f64;
    alphas.iter().map(|&a| grid.count_above(a) as f64 / g).collect()
}

/// Ladder points `2^{k/4}` inside `[lo, hi]`.
pub fn alpha_ladder(lo: f64, hi: f64) -> Vec<f64> {
    if !(lo > 0.0 && hi >= lo) {
        return Vec::new();
    }
    let k0 = (4.0 * lo.log2()).ceil() as i64;
    let k1 = (4.0 * hi.log2()).floor() as i64;
    (k0..=k1).map(|k| 2f64.powf(k as f64 / 4.0)).collect()
}

/// `sup_{α ∈ [lo, hi]} α·λ(α)^{1/r}`, exact for the step function `λ`.
///
/// On each step `λ` is constant and `α` increases, so the supremum is the
/// left limit at a sample value `v`, `v·(#{≥ v}/G)^{1/r}`, or the value at
/// `hi`.
pub fn weak_norm(grid: &SampleGrid, r: f64, alpha_range: (f64, f64)) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::param("r", "must be > 0"));
    }
    let (lo, hi) = alpha_range;
    let g = grid.len() as f64;
    let mut best = if hi.is_finite() {
        hi * (grid.count_above(hi) as f64 / g).powf(1.0 / r)
    } else {
        0.0
    };
    let start = grid.sorted.partition_point(|&v| v <= lo);
    let end = grid.sorted.partition_point(|&v| v <= hi);
    let mut i = start;
    while i < end {
        let v = grid.sorted[i];
        best = best.max(v * (grid.count_at_least(v) as f64 / g).powf(1.0 / r));
        i = grid.sorted.partition_point(|&u| u <= v);
    }
    Ok(best)
}

/// `λ` on the ladder over an `α` range, with the fit window marked.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderProfile {
    pub alphas: Vec<f64>,
    pub lambdas: Vec<f64>,
    /// Whether each ladder point lies in the fit window
    /// (`λ ≤ 1/2` and `λG ≥ 10`).
    pub resolved: Vec<bool>,
}

impl LadderProfile {
    pub fn resolved_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.alphas
            .iter()
            .zip(&self.lambdas)
            .zip(&self.resolved)
            .filter(|(_, &ok)| ok)
            .map(|((&a, &l), _)| (a, l))
    }

    pub fn resolved_count(&self) -> usize {
        self.resolved.iter().filter(|&&ok| ok).count()
    }

    /// `sup α^r λ(α)` over the resolved window; 0 when nothing resolves.
    pub fn sup_scaled(&self, r: f64) -> f64 {
        self.resolved_points()
            .map(|(a, l)| a.powf(r) * l)
            .fold(0.0, f64::max)
    }
}

/// Ladder profile over `alpha_range` (default: median magnitude to the
/// maximum).
pub fn ladder_profile(grid: &SampleGrid, alpha_range: Option<(f64, f64)>) -> LadderProfile {
    let (lo, hi) = alpha_range.unwrap_or((grid.median().max(f64::MIN_POSITIVE), grid.max()));
    let alphas = alpha_ladder(lo, hi);
    let lambdas = distribution_function(grid, &alphas);
    let g = grid.len() as f64;
    let resolved = lambdas.iter().map(|&l| l <= 0.5 && l * g >= 10.0).collect();
    LadderProfile {
        alphas,
        lambdas,
        resolved,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeakTypeFit {
    pub r_target: Option<f64>,
    pub profile: LadderProfile,
    /// `sup α^r λ(α)` over resolved ladder points, with `r = r_target` when
    /// given and the fitted `r̂` otherwise.
    pub c_hat: f64,
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the log-log fit.
    pub residual: f64,
    pub r_hat: f64,
}

pub const MIN_RESOLVED: usize = 8;

/// Least-squares fit of `ln λ` against `ln α` over the resolved ladder
/// points in `alpha_range` (default: median magnitude to the maximum).
pub fn exponent_fit(grid: &SampleGrid, alpha_range: Option<(f64, f64)>, r_target: Option<f64>) -> Result<WeakTypeFit> {
    let profile = ladder_profile(grid, alpha_range);
    let pts: Vec<(f64, f64)> = profile.resolved_points().map(|(a, l)| (a.ln(), l.ln())).collect();
    if pts.len() < MIN_RESOLVED {
        return Err(Error::InsufficientResolution {
            resolved: pts.len(),
            required: MIN_RESOLVED,
        });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    let c_hat = profile.sup_scaled(r_target.unwrap_or(-slope));
    Ok(WeakTypeFit {
        r_target,
        profile,
        c_hat,
        slope,
        intercept,
        residual,
        r_hat: -slope,
    })
}
