//! Step extension `F = |f|` on unit cubes and the continuous operator
//! `T*F(x) = ∫ F(y) |x|^{−γ} |y|^{−δ} ∏ |x_i − y_i|^{α_i − 1} dy`.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{stein_weiss::apply_stein_weiss, BoxRegion, LatticeFunction, SWParams, WeightNorm};
use crate::{Error, Result};

const NEAR_NODES: usize = 12;
const NEAR_PANELS: usize = 2;
const FAR_NODES: usize = 5;

fn rule(n: usize) -> &'static [(f64, f64)] {
    static NEAR: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    static FAR: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    let cell = if n == NEAR_NODES { &NEAR } else { &FAR };
    cell.get_or_init(|| {
        GaussLegendre::new(NonZeroUsize::new(n).expect("positive"))
            .as_node_weight_pairs()
            .to_vec()
    })
}

/// `∫_c^d |x − y|^{a−1} dy` in closed form.
fn kernel_mass(c: f64, d: f64, x: f64, a: f64) -> f64 {
    let prim = |y: f64| (y - x).signum() * (y - x).abs().powf(a) / a;
    prim(d) - prim(c)
}

/// Nodes and weights with `Σ w h(y) ≈ ∫_lo^hi h(y) |x − y|^{a−1} dy` for
/// smooth `h`. Each piece on one side of `x` is mapped by `u = w^{1/a}`,
/// `u = |x − y|`, which absorbs the kernel exactly.
fn kernel_rule(lo: f64, hi: f64, x: f64, a: f64, near: bool, out: &mut Vec<(f64, f64)>) {
    out.clear();
    let mut cuts = vec![lo, hi];
    for b in [x, 0.0] {
        if lo < b && b < hi {
            cuts.push(b);
        }
    }
    cuts.sort_by(f64::total_cmp);
    let (nodes, panels) = if near {
        (rule(NEAR_NODES), NEAR_PANELS)
    } else {
        (rule(FAR_NODES), 1)
    };
    for piece in cuts.windows(2) {
        let (c, d) = (piece[0], piece[1]);
        let right = c >= x;
        let (u1, u2) = if right { (c - x, d - x) } else { (x - d, x - c) };
        let (w1, w2) = (u1.powf(a), u2.powf(a));
        let width = (w2 - w1) / panels as f64;
        for k in 0..panels {
            let (pa, pb) = (w1 + k as f64 * width, w1 + (k + 1) as f64 * width);
            let (mid, half) = (0.5 * (pa + pb), 0.5 * (pb - pa));
            for &(t, wt) in nodes {
                let u = (mid + half * t).powf(1.0 / a);
                let y = if right { x + u } else { x - u };
                out.push((y, half * wt / a));
            }
        }
    }
}

fn check_one_dim_factors(f: &LatticeFunction, params: &SWParams) -> Result<()> {
    params.validate_dims(f.dims())?;
    if f.dims().iter().any(|&n| n != 1) {
        return Err(Error::param("dims", "the continuous majorant needs one-dimensional factors"));
    }
    Ok(())
}

/// `T*F(x)` for `F = |f|` extended as a step function on the cubes
/// `m + (−½, ½]^N`.
///
/// With `δ = 0` the cube integrals factor and are exact; otherwise each
/// axis uses a kernel-absorbing Gauss–Legendre rule and the weight
/// `|y|^{−δ}` is integrated on the tensor grid.
pub fn continuous_majorant(f: &LatticeFunction, params: &SWParams, x: &[f64]) -> Result<f64> {
    check_one_dim_factors(f, params)?;
    if x.len() != f.region().dim() || x.iter().any(|c| !c.is_finite()) {
        return Err(Error::param("x", "dimension mismatch or non-finite coordinate"));
    }
    if x.iter().all(|&c| c == 0.0) {
        return Err(Error::SingularPoint("continuous majorant at |x| = 0".into()));
    }
    let support = f.support();
    if support
        .iter()
        .any(|(m, _)| m.iter().zip(x).all(|(&a, &b)| a as f64 == b))
    {
        return Err(Error::SingularPoint("x coincides with a support point".into()));
    }
    let dim = x.len();
    let mut total = 0.0;
    let mut axis_rules: Vec<Vec<(f64, f64)>> = vec![Vec::new(); dim];
    let mut y = vec![0.0; dim];
    for (m, v) in &support {
        let fm = v.norm();
        if params.delta == 0.0 {
            let mut prod = 1.0;
            for c in 0..dim {
                let lo = m[c] as f64 - 0.5;
                prod *= kernel_mass(lo, lo + 1.0, x[c], params.alphas[c]);
            }
            total += fm * prod;
            continue;
        }
        for c in 0..dim {
            let lo = m[c] as f64 - 0.5;
            let near = (x[c] - m[c] as f64).abs() < 1.5 || m[c].abs() <= 1;
            kernel_rule(lo, lo + 1.0, x[c], params.alphas[c], near, &mut axis_rules[c]);
        }
        total += fm * tensor_sum(&axis_rules, params, 0, 1.0, &mut y);
    }
    Ok(total * params.norm.of(x).powf(-params.gamma))
}

fn tensor_sum(rules: &[Vec<(f64, f64)>], params: &SWParams, axis: usize, weight: f64, y: &mut [f64]) -> f64 {
    if axis == rules.len() {
        return weight * params.norm.of(y).powf(-params.delta);
    }
    let mut acc = 0.0;
    for &(node, w) in &rules[axis] {
        y[axis] = node;
        acc += tensor_sum(rules, params, axis + 1, weight * w, y);
    }
    acc
}

/// Constant `C` of the pointwise comparisons behind the transference:
/// `|n_i − m_i|^{α_i − N_i} ≤ C_i |x_i − y_i|^{α_i − N_i}` with
/// `C_i = (1 + √N_i)^{N_i − α_i}`, and `|n|^{−t} ≤ c(t)|x|^{−t}` for both
/// weights, where `x ∈ n + Q` and `|n| ≥ 1`.
pub fn transference_constant(params: &SWParams, dims: &[usize]) -> Result<f64> {
    params.validate_dims(dims)?;
    let n_total = dims.iter().sum::<usize>() as f64;
    let kernel: f64 = params
        .alphas
        .iter()
        .zip(dims)
        .map(|(&a, &n)| (1.0 + (n as f64).sqrt()).powf(n as f64 - a))
        .product();
    // Largest |x|/|n| and |n|/|x| over x ∈ n + Q, |n| ≥ 1.
    let (grow, shrink) = match params.norm {
        WeightNorm::Euclidean => (1.0 + n_total.sqrt() / 2.0, 1.0 + n_total.sqrt()),
        WeightNorm::Sup => (1.5, 2.0),
    };
    let weight = |t: f64| if t >= 0.0 { grow.powf(t) } else { shrink.powf(-t) };
    Ok(kernel * weight(params.gamma) * weight(params.delta))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferenceReport {
    /// Largest `|T f(n)| / T*F(x)` over the sampled `x ∈ n + Q`.
    pub max_ratio: f64,
    pub worst_point: Vec<i64>,
    pub bound: f64,
    pub samples: usize,
    /// Samples with ratio above `bound`.
    pub violations: usize,
}

/// Compares the discrete operator with the continuous majorant at
/// `samples_per_point` uniform points of each cube `n + Q`, `n ∈ eval`,
/// `n ≠ 0`.
pub fn transference_scan(
    f: &LatticeFunction,
    params: &SWParams,
    eval: &BoxRegion,
    samples_per_point: usize,
    seed: u64,
) -> Result<TransferenceReport> {
    check_one_dim_factors(f, params)?;
    let bound = transference_constant(params, f.dims())?;
    let discrete = apply_stein_weiss(f, params, eval)?;
    let per_point: Vec<Result<(f64, usize, usize)>> = (0..eval.len())
        .into_par_iter()
        .map(|i| {
            let n = eval.point(i);
            if n.iter().all(|&c| c == 0) {
                return Ok((0.0, 0, 0));
            }
            let t = discrete.get(&n).norm();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let (mut worst, mut count, mut bad) = (0.0f64, 0, 0);
            for _ in 0..samples_per_point {
                // Q = (−½, ½]^N.
                let x: Vec<f64> = n.iter().map(|&c| c as f64 + 0.5 - rng.random::<f64>()).collect();
                let Ok(major) = continuous_majorant(f, params, &x) else {
                    continue;
                };
                count += 1;
                let ratio = if t == 0.0 { 0.0 } else { t / major };
                if ratio > bound {
                    bad += 1;
                }
                worst = worst.max(ratio);
            }
            Ok((worst, count, bad))
        })
        .collect();
    let mut report = TransferenceReport {
        max_ratio: 0.0,
        worst_point: Vec::new(),
        bound,
        samples: 0,
        violations: 0,
    };
    for (i, r) in per_point.into_iter().enumerate() {
        let (worst, count, bad) = r?;
        report.samples += count;
        report.violations += bad;
        if worst > report.max_ratio {
            report.max_ratio = worst;
            report.worst_point = eval.point(i);
        }
    }
    Ok(report)
}
