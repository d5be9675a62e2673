use std::fmt;

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::fractional::apply_convolution;
use super::stein_weiss::apply_stein_weiss;
use super::{lp_norm, BoxRegion, LatticeFunction, SWParams};
use crate::multipliers::MultiplierSpec;
use crate::{Error, Result};

/// An operator acting on lattice functions, evaluated on a window.
pub trait LatticeOperator: Sync {
    fn dims(&self) -> Vec<usize>;
    fn label(&self) -> String;
    fn apply(&self, f: &LatticeFunction, window: &BoxRegion) -> Result<LatticeFunction>;
}

#[derive(Debug, Clone)]
pub struct Identity {
    pub dims: Vec<usize>,
}

impl LatticeOperator for Identity {
    fn dims(&self) -> Vec<usize> {
        self.dims.clone()
    }

    fn label(&self) -> String {
        "identity".into()
    }

    fn apply(&self, f: &LatticeFunction, window: &BoxRegion) -> Result<LatticeFunction> {
        LatticeFunction::from_fn(self.dims.clone(), window.clone(), |p| f.get(p))
    }
}

/// Convolution along the kernel of a multiplier spec on `Z`.
#[derive(Debug, Clone)]
pub struct Fractional {
    pub spec: MultiplierSpec,
}

impl LatticeOperator for Fractional {
    fn dims(&self) -> Vec<usize> {
        vec![1]
    }

    fn label(&self) -> String {
        format!("fractional[{}, s={}]", self.spec.stream().kind_name(), self.spec.s())
    }

    fn apply(&self, f: &LatticeFunction, window: &BoxRegion) -> Result<LatticeFunction> {
        apply_convolution(f, &self.spec, window)
    }
}

#[derive(Debug, Clone)]
pub struct SteinWeiss {
    pub params: SWParams,
    pub dims: Vec<usize>,
}

impl LatticeOperator for SteinWeiss {
    fn dims(&self) -> Vec<usize> {
        self.dims.clone()
    }

    fn label(&self) -> String {
        format!(
            "stein-weiss[alpha={:?}, gamma={}, delta={}]",
            self.params.alphas, self.params.gamma, self.params.delta
        )
    }

    fn apply(&self, f: &LatticeFunction, window: &BoxRegion) -> Result<LatticeFunction> {
        apply_stein_weiss(f, &self.params, window)
    }
}

/// Test functions on the box `[−M, M]^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// `δ` at `(1, 0, …, 0)`.
    Delta,
    /// `δ` at `(−M, …, −M)`.
    DeltaCorner,
    /// Indicator of the box without the origin.
    Box,
    /// `|m|^{−N/p} / (1 + ln |m|)`, origin excluded.
    PowerDecay,
    /// Random signs on about one point in sixteen.
    SparseSigns,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Delta,
        Family::DeltaCorner,
        Family::Box,
        Family::PowerDecay,
        Family::SparseSigns,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Delta => "delta",
            Family::DeltaCorner => "delta-corner",
            Family::Box => "box",
            Family::PowerDecay => "power-decay",
            Family::SparseSigns => "sparse-signs",
        }
    }

    pub fn build(self, dims: &[usize], m: i64, p: f64, seed: u64) -> Result<LatticeFunction> {
        let dim: usize = dims.iter().sum();
        let region = BoxRegion::cube(dim, m)?;
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let is_origin = |pt: &[i64]| pt.iter().all(|&c| c == 0);
        match self {
            Family::Delta => {
                let mut pt = vec![0; dim];
                pt[0] = 1;
                LatticeFunction::from_fn(dims.to_vec(), region, |x| if x == pt.as_slice() { one } else { zero })
            }
            Family::DeltaCorner => {
                let pt = vec![-m; dim];
                LatticeFunction::from_fn(dims.to_vec(), region, |x| if x == pt.as_slice() { one } else { zero })
            }
            Family::Box => LatticeFunction::from_fn(dims.to_vec(), region, |x| if is_origin(x) { zero } else { one }),
            Family::PowerDecay => LatticeFunction::from_fn(dims.to_vec(), region, |x| {
                if is_origin(x) {
                    return zero;
                }
                let r = x.iter().map(|&c| (c * c) as f64).sum::<f64>().sqrt();
                Complex64::new(r.powf(-(dim as f64) / p) / (1.0 + r.ln()), 0.0)
            }),
            Family::SparseSigns => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(m as u64);
                let len = region.len();
                let count = (len / 16).max(4).min(len);
                let mut values = vec![zero; len];
                let mut placed = 0;
                while placed < count {
                    let i = rng.random_range(0..len);
                    if values[i] == zero {
                        values[i] = if rng.random::<bool>() { one } else { -one };
                        placed += 1;
                    }
                }
                LatticeFunction::from_values(dims.to_vec(), region, values)
            }
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioScanConfig {
    pub families: Vec<Family>,
    /// Box half-widths `M`, expected to double.
    pub boxes: Vec<i64>,
    /// The output window is `[−w·M, w·M]^N`.
    pub window_scale: i64,
    /// Allowed growth of the running maximum per doubling.
    pub growth_threshold: f64,
    pub seed: u64,
}

impl Default for RatioScanConfig {
    fn default() -> Self {
        Self {
            families: Family::ALL.to_vec(),
            boxes: vec![8, 16, 32],
            window_scale: 1,
            growth_threshold: 0.05,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioRow {
    pub box_size: i64,
    pub family: Family,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioScanReport {
    pub label: String,
    pub p: f64,
    pub q: f64,
    pub rows: Vec<RatioRow>,
    /// `(M, max ratio, family attaining it)`.
    pub per_box_max: Vec<(i64, f64, Family)>,
    /// `max(2M)/max(M) − 1` for consecutive boxes.
    pub growth: Vec<f64>,
    pub growth_flag: bool,
}

impl RatioScanReport {
    pub fn max_growth(&self) -> f64 {
        self.growth.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_growth(&self) -> f64 {
        self.growth.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// `‖op f‖_q / ‖f‖_p` for every family and box size; these are lower
/// bounds for the operator norm on the window.
pub fn operator_ratio_scan(op: &dyn LatticeOperator, p: f64, q: f64, cfg: &RatioScanConfig) -> Result<RatioScanReport> {
    if cfg.families.is_empty() || cfg.boxes.is_empty() {
        return Err(Error::param("families/boxes", "must be nonempty"));
    }
    if !(p >= 1.0 && q >= 1.0) {
        return Err(Error::param("p/q", "must be >= 1"));
    }
    if cfg.boxes.iter().any(|&m| m < 1) || cfg.window_scale < 1 {
        return Err(Error::param("boxes", "box sizes and window scale must be >= 1"));
    }
    let dims = op.dims();
    let dim: usize = dims.iter().sum();
    let jobs: Vec<(i64, Family)> = cfg
        .boxes
        .iter()
        .flat_map(|&m| cfg.families.iter().map(move |&f| (m, f)))
        .collect();
    let rows: Vec<Result<RatioRow>> = jobs
        .par_iter()
        .map(|&(m, family)| {
            let f = family.build(&dims, m, p, cfg.seed)?;
            let window = BoxRegion::cube(dim, cfg.window_scale * m)?;
            let out = op.apply(&f, &window)?;
            let denom = lp_norm(&f, p)?;
            Ok(RatioRow {
                box_size: m,
                family,
                ratio: lp_norm(&out, q)? / denom,
            })
        })
        .collect();
    let rows: Vec<RatioRow> = rows.into_iter().collect::<Result<_>>()?;
    let per_box_max: Vec<(i64, f64, Family)> = cfg
        .boxes
        .iter()
        .map(|&m| {
            rows.iter()
                .filter(|r| r.box_size == m)
                .fold((m, f64::NEG_INFINITY, cfg.families[0]), |best, r| {
                    if r.ratio > best.1 {
                        (m, r.ratio, r.family)
                    } else {
                        best
                    }
                })
        })
        .collect();
    let growth: Vec<f64> = per_box_max.windows(2).map(|w| w[1].1 / w[0].1 - 1.0).collect();
    let growth_flag = growth.iter().any(|&g| g > cfg.growth_threshold);
    Ok(RatioScanReport {
        label: op.label(),
        p,
        q,
        rows,
        per_box_max,
        growth,
        growth_flag,
    })
}
