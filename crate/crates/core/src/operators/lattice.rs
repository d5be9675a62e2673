use num_complex::Complex64;

use crate::summation::NeumaierSum;
use crate::{Error, Result};

/// Integer box `∏ [lo_c, hi_c]` over all coordinates of `Z^N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoxRegion {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl BoxRegion {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::param("box", "bounds must be nonempty and of equal length"));
        }
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::param("box", "lower bound exceeds upper bound"));
        }
        Ok(Self { lo, hi })
    }

    pub fn interval(lo: i64, hi: i64) -> Result<Self> {
        Self::new(vec![lo], vec![hi])
    }

    /// `[−radius, radius]^dim`.
    pub fn cube(dim: usize, radius: i64) -> Result<Self> {
        Self::new(vec![-radius; dim], vec![radius; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    pub fn shape(&self) -> Vec<usize> {
        self.lo.iter().zip(&self.hi).map(|(a, b)| (b - a + 1) as usize).collect()
    }

    pub fn len(&self) -> usize {
        self.shape().iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, point: &[i64]) -> bool {
        point.len() == self.dim()
            && point.iter().zip(self.lo.iter().zip(&self.hi)).all(|(x, (a, b))| a <= x && x <= b)
    }

    /// Row-major position of `point`, if inside.
    pub fn index(&self, point: &[i64]) -> Option<usize> {
        if !self.contains(point) {
            return None;
        }
        let mut idx = 0usize;
        for (c, &x) in point.iter().enumerate() {
            let width = (self.hi[c] - self.lo[c] + 1) as usize;
            idx = idx * width + (x - self.lo[c]) as usize;
        }
        Some(idx)
    }

    pub fn point(&self, mut idx: usize) -> Vec<i64> {
        let mut p = vec![0; self.dim()];
        for c in (0..self.dim()).rev() {
            let width = (self.hi[c] - self.lo[c] + 1) as usize;
            p[c] = self.lo[c] + (idx % width) as i64;
            idx /= width;
        }
        p
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }
}

/// Finitely supported complex function on `Z^{N₁} × … × Z^{N_k}`, stored
/// densely over its support box.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeFunction {
    dims: Vec<usize>,
    region: BoxRegion,
    values: Vec<Complex64>,
}

impl LatticeFunction {
    pub fn zeros(dims: Vec<usize>, region: BoxRegion) -> Result<Self> {
        let len = region.len();
        Self::from_values(dims, region, vec![Complex64::new(0.0, 0.0); len])
    }

    pub fn from_values(dims: Vec<usize>, region: BoxRegion, values: Vec<Complex64>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::param("dims", "need k >= 1 factors of positive dimension"));
        }
        if dims.iter().sum::<usize>() != region.dim() {
            return Err(Error::param("dims", "factor dimensions must sum to the box dimension"));
        }
        if values.len() != region.len() {
            return Err(Error::param("values", "length must match the box"));
        }
        Ok(Self { dims, region, values })
    }

    pub fn from_fn(dims: Vec<usize>, region: BoxRegion, mut f: impl FnMut(&[i64]) -> Complex64) -> Result<Self> {
        let values = region.points().map(|p| f(&p)).collect();
        Self::from_values(dims, region, values)
    }

    /// Function on `Z` with `values[i]` at `lo + i`.
    pub fn on_z(lo: i64, values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::param("values", "must be nonempty"));
        }
        let hi = lo + values.len() as i64 - 1;
        Self::from_values(vec![1], BoxRegion::interval(lo, hi)?, values)
    }

    pub fn delta(dims: Vec<usize>, point: &[i64]) -> Result<Self> {
        let region = BoxRegion::new(point.to_vec(), point.to_vec())?;
        Self::from_values(dims, region, vec![Complex64::new(1.0, 0.0)])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn region(&self) -> &BoxRegion {
        &self.region
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, point: &[i64]) -> Complex64 {
        self.region
            .index(point)
            .map_or(Complex64::new(0.0, 0.0), |i| self.values[i])
    }

    pub fn set(&mut self, point: &[i64], value: Complex64) -> Result<()> {
        let i = self
            .region
            .index(point)
            .ok_or_else(|| Error::param("point", "outside the support box"))?;
        self.values[i] = value;
        Ok(())
    }

    /// Nonzero `(point, value)` pairs.
    pub fn support(&self) -> Vec<(Vec<i64>, Complex64)> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != Complex64::new(0.0, 0.0))
            .map(|(i, v)| (self.region.point(i), *v))
            .collect()
    }

    /// `a·self + b·other` on the smallest box holding both.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::param("dims", "factor structures differ"));
        }
        let lo = self.region.lo.iter().zip(&other.region.lo).map(|(x, y)| *x.min(y)).collect();
        let hi = self.region.hi.iter().zip(&other.region.hi).map(|(x, y)| *x.max(y)).collect();
        let region = BoxRegion::new(lo, hi)?;
        Self::from_fn(self.dims.clone(), region, |p| a * self.get(p) + b * other.get(p))
    }
}

/// `(Σ |f|^p)^{1/p}`; `p = ∞` gives the maximum.
pub fn lp_norm(f: &LatticeFunction, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::param("p", format!("must be >= 1, got {p}")));
    }
    let abs = f.values.iter().map(|v| v.norm());
    if p.is_infinite() {
        return Ok(abs.fold(0.0, f64::max));
    }
    // Scale by the maximum so large p cannot overflow.
    let top = f.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if top == 0.0 {
        return Ok(0.0);
    }
    let mut acc = NeumaierSum::new();
    for a in abs {
        acc.add((a / top).powf(p));
    }
    Ok(top * acc.value().powf(1.0 / p))
}
