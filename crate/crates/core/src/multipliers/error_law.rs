//! Empirical error laws for the theta and Euler main terms, and the
//! stability of regularized evaluation as `ε → 0`.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::euler::{euler_f1_direct, lemma2_main_term};
use super::spec::{eval_multiplier, EvalParams, MultiplierSpec};
use super::theta::{lemma1_main_term, t_y_direct, RegimeGate};
use crate::arith::gcd_i64;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub levels: std::ops::RangeInclusive<u32>,
    pub samples_per_level: usize,
    pub seed: u64,
    pub gate: RegimeGate,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            levels: 6..=20,
            samples_per_level: 20,
            seed: 0x5eed,
            gate: RegimeGate::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorLawSample {
    pub level: u32,
    pub p: i64,
    pub q: i64,
    pub delta: f64,
    pub y: f64,
    /// Modulus `N` (1 for the Euler scan).
    pub modulus: u64,
    pub residual: f64,
    /// `residual · y^{1/4}`.
    pub scaled: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorLawReport {
    pub samples: Vec<ErrorLawSample>,
    /// `(j, max scaled residual at level j)`, ascending in `j`.
    pub per_level_max: Vec<(u32, f64)>,
    pub overall_max: f64,
    /// Least-squares slope of `log₂(per-level max)` against `j`.
    pub log_slope: f64,
}

/// Least-squares slope of `log₂ v` against `j`.
pub fn log2_slope(points: &[(u32, f64)]) -> f64 {
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), &(j, v)| (a + j as f64, b + v.log2()));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = points.iter().fold((0.0, 0.0), |(a, b), &(j, v)| {
        let dx = j as f64 - mx;
        (a + dx * (v.log2() - my), b + dx * dx)
    });
    num / den
}

/// Random `(p/q, δ)` inside the constraint region at `y = 2^{−j}`. When
/// `divisor > 1`, half of the draws force `divisor | q` so the main term is
/// exercised.
fn draw(rng: &mut ChaCha8Rng, y: f64, gate: &RegimeGate, divisor: i64) -> (i64, i64, f64) {
    let q_max = ((gate.c1 / y.sqrt()).floor() as i64).max(1);
    let q = if divisor > 1 && q_max >= divisor && rng.random::<bool>() {
        divisor * rng.random_range(1..=q_max / divisor)
    } else {
        rng.random_range(1..=q_max)
    };
    let p = loop {
        let p = rng.random_range(1..=q);
        if gcd_i64(p, q) == 1 {
            break p;
        }
    };
    let dmax = gate.c2 * y.sqrt() / q as f64;
    let delta = rng.random_range(-dmax..=dmax);
    (p, q, delta)
}

fn summarize(samples: Vec<ErrorLawSample>) -> Result<ErrorLawReport> {
    if samples.is_empty() {
        return Err(Error::param("levels", "the scan produced no samples"));
    }
    let mut per_level: std::collections::BTreeMap<u32, f64> = Default::default();
    for s in &samples {
        let e = per_level.entry(s.level).or_insert(0.0);
        *e = e.max(s.scaled);
    }
    let per_level_max: Vec<(u32, f64)> = per_level.into_iter().collect();
    let overall_max = per_level_max.iter().map(|p| p.1).fold(0.0, f64::max);
    let log_slope = log2_slope(&per_level_max);
    Ok(ErrorLawReport {
        samples,
        per_level_max,
        overall_max,
        log_slope,
    })
}

/// Residuals `|T_y − main term|·y^{1/4}` for each modulus at each level.
pub fn lemma1_error_scan(moduli: &[u64], config: &ScanConfig) -> Result<ErrorLawReport> {
    let jobs: Vec<(u32, u64)> = config
        .levels
        .clone()
        .flat_map(|j| moduli.iter().map(move |&n| (j, n)))
        .collect();
    let chunks: Vec<Vec<ErrorLawSample>> = jobs
        .par_iter()
        .map(|&(j, n_mod)| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(((j as u64) << 32) | n_mod);
            let y = 2f64.powi(-(j as i32));
            (0..config.samples_per_level)
                .map(|_| {
                    let (p, q, delta) = draw(&mut rng, y, &config.gate, n_mod as i64);
                    let t = t_y_direct(p, q, delta, y, n_mod, 1, None)?;
                    let main = lemma1_main_term(p, q, delta, y, n_mod, 1, &config.gate)?;
                    let residual = (t - main.value).norm();
                    Ok(ErrorLawSample {
                        level: j,
                        p,
                        q,
                        delta,
                        y,
                        modulus: n_mod,
                        residual,
                        scaled: residual * y.powf(0.25),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    summarize(chunks.into_iter().flatten().collect())
}

/// Residuals `|f₁(−x + iy) − main term|·y^{1/4}` at `x = p/q + δ`.
pub fn lemma2_error_scan(config: &ScanConfig) -> Result<ErrorLawReport> {
    let levels: Vec<u32> = config.levels.clone().collect();
    let chunks: Vec<Vec<ErrorLawSample>> = levels
        .par_iter()
        .map(|&j| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(j as u64);
            let y = 2f64.powi(-(j as i32));
            (0..config.samples_per_level)
                .map(|_| {
                    let (p, q, delta) = draw(&mut rng, y, &config.gate, 1);
                    let x = p as f64 / q as f64 + delta;
                    let direct = euler_f1_direct(x, y, None)?;
                    let main = lemma2_main_term(p, q, delta, y, &config.gate)?;
                    let residual = (direct - main.value).norm();
                    Ok(ErrorLawSample {
                        level: j,
                        p,
                        q,
                        delta,
                        y,
                        modulus: 1,
                        residual,
                        scaled: residual * y.powf(0.25),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    summarize(chunks.into_iter().flatten().collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonStability {
    pub x: f64,
    /// `(ε, n_max, value)` for the halving sequence.
    pub values: Vec<(f64, u64, Complex64)>,
    /// `|m_{ε/2} − m_ε|` for consecutive entries.
    pub differences: Vec<f64>,
}

/// Values of the regularized multiplier at `x` along `ε₀, ε₀/2, …` (with
/// `n_max ≥ 10 ε^{−1/2}`); convergence is reported, not assumed.
pub fn epsilon_stability(spec: &MultiplierSpec, x: f64, eps0: f64, halvings: u32) -> Result<EpsilonStability> {
    let mut values = Vec::new();
    for i in 0..=halvings {
        let eps = eps0 * 0.5f64.powi(i as i32);
        let auto = EvalParams::for_epsilon(eps)?;
        let n_max = auto.n_max.max((10.0 / eps.sqrt()).ceil() as u64);
        let params = EvalParams::new(n_max, eps)?;
        values.push((eps, n_max, eval_multiplier(spec, x, &params)));
    }
    let differences = values.windows(2).map(|w| (w[1].2 - w[0].2).norm()).collect();
    Ok(EpsilonStability {
        x,
        values,
        differences,
    })
}
