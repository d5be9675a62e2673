use super::SWParams;
use crate::{Error, Result};

/// Slack allowed on the non-strict inequalities.
const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SwCondition {
    pub label: String,
    /// Right side minus left side; positive means satisfied with room.
    pub margin: f64,
    pub strict: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwReport {
    pub passed: bool,
    pub conditions: Vec<SwCondition>,
}

impl SwReport {
    pub fn condition(&self, label: &str) -> Option<&SwCondition> {
        self.conditions.iter().find(|c| c.label == label)
    }
}

fn cond(label: impl Into<String>, margin: f64, strict: bool) -> SwCondition {
    let holds = if strict { margin > 0.0 } else { margin >= -BOUNDARY_TOL };
    SwCondition {
        label: label.into(),
        margin,
        strict,
        holds,
    }
}

/// Every inequality of the product-space Stein–Weiss theorem, with the
/// discrete relaxation `1/q ≤ 1/p + (γ + δ − α)/N` of the balance relation.
///
/// Per-factor conditions are reported once per factor; the case conditions
/// apply only in their sign regime of `(γ, δ)`, and `γ = δ = 0` falls in
/// two regimes at once.
pub fn sw_conditions_check(params: &SWParams, dims: &[usize]) -> Result<SwReport> {
    if dims.len() != params.alphas.len() || dims.contains(&0) {
        return Err(Error::param("dims", "one positive dimension per alpha required"));
    }
    let n_total: f64 = dims.iter().sum::<usize>() as f64;
    let (g, d, p, q) = (params.gamma, params.delta, params.p, params.q);
    let alpha = params.alpha();
    let mut out = Vec::new();
    for (i, (&a, &n)) in params.alphas.iter().zip(dims).enumerate() {
        out.push(cond(format!("alpha_{} < N_{}", i + 1, i + 1), n as f64 - a, true));
    }
    out.push(cond("gamma < N/q", n_total / q - g, true));
    out.push(cond("delta < N(p-1)/p", n_total * (p - 1.0) / p - d, true));
    out.push(cond("gamma + delta >= 0", g + d, false));
    out.push(cond(
        "1/q <= 1/p + (gamma+delta-alpha)/N",
        1.0 / p + (g + d - alpha) / n_total - 1.0 / q,
        false,
    ));
    if g >= 0.0 && d <= 0.0 {
        for (i, (&a, &n)) in params.alphas.iter().zip(dims).enumerate() {
            out.push(cond(format!("alpha_{} - N_{}/p < delta", i + 1, i + 1), d - (a - n as f64 / p), true));
        }
    }
    if g <= 0.0 && d >= 0.0 {
        for (i, (&a, &n)) in params.alphas.iter().zip(dims).enumerate() {
            let rhs = g - (a - n as f64 * (q - 1.0) / q);
            out.push(cond(format!("alpha_{} - N_{}(q-1)/q < gamma", i + 1, i + 1), rhs, true));
        }
    }
    if g > 0.0 && d > 0.0 {
        let excess_p: f64 = params
            .alphas
            .iter()
            .zip(dims)
            .map(|(&a, &n)| a - n as f64 / p)
            .filter(|e| *e >= 0.0)
            .sum();
        let excess_q: f64 = params
            .alphas
            .iter()
            .zip(dims)
            .map(|(&a, &n)| a - n as f64 * (q - 1.0) / q)
            .filter(|e| *e >= 0.0)
            .sum();
        out.push(cond("sum over alpha_i >= N_i/p of (alpha_i - N_i/p) < delta", d - excess_p, true));
        out.push(cond(
            "sum over alpha_i >= N_i(q-1)/q of (alpha_i - N_i(q-1)/q) < gamma",
            g - excess_q,
            true,
        ));
    }
    Ok(SwReport {
        passed: out.iter().all(|c| c.holds),
        conditions: out,
    })
}

/// Exponents sitting `eta` below the discrete critical line,
/// `1/q = 1/p + (γ + δ − α)/N − η`, with `p` at the midpoint of the range
/// where every condition other than `γ + δ ≥ 0` holds.
///
/// Leaving out `γ + δ ≥ 0` gives violating weight pairs the same footing as
/// admissible ones, so scans compare like with like.
pub fn interior_exponents(alphas: &[f64], gamma: f64, delta: f64, dims: &[usize], eta: f64) -> Result<(f64, f64)> {
    if !(eta >= 0.0) {
        return Err(Error::param("eta", "must be >= 0"));
    }
    let n_total: f64 = dims.iter().sum::<usize>() as f64;
    let alpha: f64 = alphas.iter().sum();
    let shift = (gamma + delta - alpha) / n_total - eta;
    let admissible = |t: f64| -> bool {
        let inv_q = t + shift;
        if !(inv_q > 0.0 && inv_q <= t) {
            return false;
        }
        let Ok(params) = SWParams::new(alphas.to_vec(), gamma, delta, 1.0 / t, 1.0 / inv_q) else {
            return false;
        };
        sw_conditions_check(&params, dims)
            .map(|r| r.conditions.iter().filter(|c| c.label != "gamma + delta >= 0").all(|c| c.holds))
            .unwrap_or(false)
    };
    // Scan t = 1/p over (0, 1); the admissible set is an interval.
    const STEPS: usize = 100_000;
    let ts: Vec<f64> = (1..STEPS).map(|i| i as f64 / STEPS as f64).filter(|&t| admissible(t)).collect();
    let (Some(&t_lo), Some(&t_hi)) = (ts.first(), ts.last()) else {
        return Err(Error::param("exponents", "no admissible p for these weights"));
    };
    let p = 0.5 * (1.0 / t_lo + 1.0 / t_hi);
    let inv_q = 1.0 / p + shift;
    if !admissible(1.0 / p) {
        return Err(Error::param("exponents", "admissible set is not an interval"));
    }
    Ok((p, 1.0 / inv_q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hls_point_passes_on_the_boundary() {
        let params = SWParams::new(vec![0.5], 0.0, 0.0, 4.0 / 3.0, 4.0).unwrap();
        let r = sw_conditions_check(&params, &[1]).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.condition("1/q <= 1/p + (gamma+delta-alpha)/N").unwrap().margin.abs() < 1e-12);
        assert_eq!(r.condition("gamma + delta >= 0").unwrap().margin, 0.0);
    }

    #[test]
    fn negative_weight_sum_fails() {
        let params = SWParams::new(vec![0.5], 0.0, -0.1, 4.0 / 3.0, 8.0).unwrap();
        let r = sw_conditions_check(&params, &[1]).unwrap();
        assert!(!r.passed);
        assert!(!r.condition("gamma + delta >= 0").unwrap().holds);
    }

    #[test]
    fn positive_weights_use_the_summed_conditions() {
        let params = SWParams::new(vec![0.6, 0.6], 0.3, 0.3, 2.0, 2.0).unwrap();
        let r = sw_conditions_check(&params, &[1, 1]).unwrap();
        // α_i = 0.6 ≥ 1/2 in both factors: excess 0.2 < 0.3 on each side.
        let c = r.condition("sum over alpha_i >= N_i/p of (alpha_i - N_i/p) < delta").unwrap();
        assert!((c.margin - 0.1).abs() < 1e-12);
        let balance = r.condition("1/q <= 1/p + (gamma+delta-alpha)/N").unwrap();
        assert!((balance.margin - (0.5 + (0.6 - 1.2) / 2.0 - 0.5)).abs() < 1e-12);
        assert!(!r.passed);
    }

    #[test]
    fn interior_exponents_match_hand_derivation() {
        // γ = δ = 0: p ∈ (1, 1/0.65), q from the shifted line.
        let (p, q) = interior_exponents(&[0.5, 0.5], 0.0, 0.0, &[1, 1], 0.15).unwrap();
        assert!((p - 0.5 * (1.0 + 1.0 / 0.65)).abs() < 1e-3, "{p}");
        assert!((1.0 / q - (1.0 / p - 0.65)).abs() < 1e-12);
        let params = SWParams::new(vec![0.5, 0.5], 0.0, 0.0, p, q).unwrap();
        assert!(sw_conditions_check(&params, &[1, 1]).unwrap().passed);
        let (p, q) = interior_exponents(&[0.5, 0.5], -0.1, -0.1, &[1, 1], 0.15).unwrap();
        let params = SWParams::new(vec![0.5, 0.5], -0.1, -0.1, p, q).unwrap();
        let r = sw_conditions_check(&params, &[1, 1]).unwrap();
        assert!(!r.passed);
        assert_eq!(r.conditions.iter().filter(|c| !c.holds).count(), 1);
    }
}
