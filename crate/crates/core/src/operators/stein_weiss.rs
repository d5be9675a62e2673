use num_complex::Complex64;
use rayon::prelude::*;

use super::{BoxRegion, LatticeFunction};
use crate::{Error, Result};

/// Norm used for the weights `|n|^{−γ}` and `|m|^{−δ}` on the full product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightNorm {
    #[default]
    Euclidean,
    Sup,
}

impl WeightNorm {
    pub fn of(self, v: &[f64]) -> f64 {
        match self {
            WeightNorm::Euclidean => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            WeightNorm::Sup => v.iter().map(|x| x.abs()).fold(0.0, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SWParams {
    pub alphas: Vec<f64>,
    pub gamma: f64,
    pub delta: f64,
    pub p: f64,
    pub q: f64,
    pub norm: WeightNorm,
}

impl SWParams {
    pub fn new(alphas: Vec<f64>, gamma: f64, delta: f64, p: f64, q: f64) -> Result<Self> {
        if alphas.is_empty() || alphas.iter().any(|a| !(*a > 0.0)) {
            return Err(Error::param("alphas", "need k >= 1 values, each > 0"));
        }
        if !(gamma.is_finite() && delta.is_finite()) {
            return Err(Error::param("gamma/delta", "must be finite"));
        }
        if !(1.0 < p && p <= q && q.is_finite()) {
            return Err(Error::param("p/q", format!("need 1 < p <= q < inf, got p={p}, q={q}")));
        }
        Ok(Self {
            alphas,
            gamma,
            delta,
            p,
            q,
            norm: WeightNorm::Euclidean,
        })
    }

    pub fn with_norm(mut self, norm: WeightNorm) -> Self {
        self.norm = norm;
        self
    }

    pub fn alpha(&self) -> f64 {
        self.alphas.iter().sum()
    }

    /// `0 < α_i < N_i` against a factor structure.
    pub fn validate_dims(&self, dims: &[usize]) -> Result<()> {
        if dims.len() != self.alphas.len() {
            return Err(Error::param("dims", "one alpha per factor required"));
        }
        for (i, (&a, &n)) in self.alphas.iter().zip(dims).enumerate() {
            if a >= n as f64 {
                return Err(Error::param("alphas", format!("alpha_{} = {a} must be < N_{} = {n}", i + 1, i + 1)));
            }
        }
        Ok(())
    }
}

/// Offsets of each factor block within a point of `Z^N`.
pub(crate) fn blocks(dims: &[usize]) -> Vec<std::ops::Range<usize>> {
    let mut start = 0;
    dims.iter()
        .map(|&d| {
            let r = start..start + d;
            start += d;
            r
        })
        .collect()
}

/// Precomputed kernel `∏ |n_i − m_i|^{α_i − N_i}`, zero when some block
/// coincides.
struct ProductKernel {
    blocks: Vec<std::ops::Range<usize>>,
    exps: Vec<f64>,
    // 1-D factors use a table indexed by |n_i − m_i|.
    tables: Vec<Option<Vec<f64>>>,
}

impl ProductKernel {
    fn new(dims: &[usize], params: &SWParams, max_offset: i64) -> Self {
        let exps: Vec<f64> = params.alphas.iter().zip(dims).map(|(a, &n)| a - n as f64).collect();
        let tables = dims
            .iter()
            .zip(&exps)
            .map(|(&n, &e)| {
                (n == 1).then(|| (0..=max_offset).map(|d| if d == 0 { 0.0 } else { (d as f64).powf(e) }).collect())
            })
            .collect();
        Self {
            blocks: blocks(dims),
            exps,
            tables,
        }
    }

    #[inline]
    fn eval(&self, n: &[i64], m: &[i64]) -> f64 {
        let mut k = 1.0;
        for (i, r) in self.blocks.iter().enumerate() {
            if let Some(t) = &self.tables[i] {
                let d = (n[r.start] - m[r.start]).unsigned_abs() as usize;
                k *= t[d];
                if k == 0.0 {
                    return 0.0;
                }
            } else {
                let d2: i64 = r.clone().map(|c| (n[c] - m[c]).pow(2)).sum();
                if d2 == 0 {
                    return 0.0;
                }
                k *= (d2 as f64).powf(0.5 * self.exps[i]);
            }
        }
        k
    }
}

struct Prepared {
    kernel: ProductKernel,
    // (m, f(m)|m|^{−δ}) over the support with m ≠ 0.
    sources: Vec<(Vec<i64>, Complex64)>,
}

fn prepare(f: &LatticeFunction, params: &SWParams, eval: &BoxRegion) -> Result<Prepared> {
    params.validate_dims(f.dims())?;
    if eval.dim() != f.region().dim() {
        return Err(Error::param("eval", "dimension differs from the support box"));
    }
    let sources: Vec<(Vec<i64>, Complex64)> = f
        .support()
        .into_iter()
        .filter(|(m, _)| m.iter().any(|&c| c != 0))
        .map(|(m, v)| {
            let w = params.norm.of(&m.iter().map(|&c| c as f64).collect::<Vec<_>>()).powf(-params.delta);
            (m, v * w)
        })
        .collect();
    let max_offset = (0..eval.dim())
        .map(|c| {
            (eval.hi()[c] - f.region().lo()[c])
                .abs()
                .max((f.region().hi()[c] - eval.lo()[c]).abs())
        })
        .max()
        .unwrap_or(0);
    Ok(Prepared {
        kernel: ProductKernel::new(f.dims(), params, max_offset),
        sources,
    })
}

fn eval_point(prep: &Prepared, params: &SWParams, n: &[i64]) -> Complex64 {
    if n.iter().all(|&c| c == 0) {
        return Complex64::new(0.0, 0.0);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (m, v) in &prep.sources {
        let k = prep.kernel.eval(n, m);
        if k != 0.0 {
            acc += v * k;
        }
    }
    let nf: Vec<f64> = n.iter().map(|&c| c as f64).collect();
    acc * params.norm.of(&nf).powf(-params.gamma)
}

/// `T f(n) = Σ f(m) |n|^{−γ} |m|^{−δ} ∏ |n_i − m_i|^{α_i − N_i}` over
/// `m_i ≠ n_i` for every factor and `m ≠ 0`, evaluated on `eval`.
///
/// The value at `n = 0` is excluded from the operator and reported as 0.
pub fn apply_stein_weiss(f: &LatticeFunction, params: &SWParams, eval: &BoxRegion) -> Result<LatticeFunction> {
    let prep = prepare(f, params, eval)?;
    let out: Vec<Complex64> = (0..eval.len())
        .into_par_iter()
        .map(|i| eval_point(&prep, params, &eval.point(i)))
        .collect();
    LatticeFunction::from_values(f.dims().to_vec(), eval.clone(), out)
}

/// `T f(n)` at a single point; `n = 0` is rejected.
pub fn stein_weiss_at(f: &LatticeFunction, params: &SWParams, n: &[i64]) -> Result<Complex64> {
    if n.iter().all(|&c| c == 0) {
        return Err(Error::SingularPoint("evaluation at |n| = 0".into()));
    }
    let eval = BoxRegion::new(n.to_vec(), n.to_vec())?;
    let prep = prepare(f, params, &eval)?;
    Ok(eval_point(&prep, params, n))
}
