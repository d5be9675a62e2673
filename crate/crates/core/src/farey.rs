//! Farey dissections of the circle `(0, 1]` and the major/minor arc split.
//!
//! At level `j` the dissection uses every fraction with `q ≤ 2^{j/2}`; the
//! arc around `p/q` runs between the mediants with its two Farey neighbours.
//! The arc around `1/1` wraps through 0, so its upper end is reported as a
//! number above 1. All endpoint arithmetic is exact.

use num_integer::Integer;
use num_rational::Ratio;

use crate::{Error, Result};

/// Reduced fraction `p/q` with `0 < p/q ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FareyFraction {
    p: i64,
    q: i64,
}

impl FareyFraction {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if q < 1 || p < 1 || p > q {
            return Err(Error::param("p/q", format!("{p}/{q} is not in (0, 1]")));
        }
        let g = p.gcd(&q);
        if g != 1 {
            return Err(Error::NotCoprime { p, q, gcd: g });
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn value(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    pub fn ratio(&self) -> Ratio<i64> {
        Ratio::new_raw(self.p, self.q)
    }

    /// The `j`-independent interval `|x − p/q| ≤ 1/(10q²)`.
    pub fn tilde_interval(&self) -> (Ratio<i64>, Ratio<i64>) {
        let r = Ratio::new(1, 10 * self.q * self.q);
        (self.ratio() - r, self.ratio() + r)
    }
}

impl std::fmt::Display for FareyFraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArcKind {
    Major,
    Minor,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArcClassification {
    pub fraction: FareyFraction,
    pub level: u32,
    pub kind: ArcKind,
    pub interval: (Ratio<i64>, Ratio<i64>),
    pub tilde_interval: (Ratio<i64>, Ratio<i64>),
}

/// Default major-arc threshold `1/10`.
pub fn default_threshold() -> Ratio<i64> {
    Ratio::new(1, 10)
}

/// Largest denominator in the level-`j` dissection, `⌊2^{j/2}⌋`.
pub fn level_bound(j: u32) -> i64 {
    let target = 1i128 << j;
    let mut q = (2f64.powf(j as f64 / 2.0)) as i128;
    while q * q > target {
        q -= 1;
    }
    while (q + 1) * (q + 1) <= target {
        q += 1;
    }
    q as i64
}

/// All `p/q` with `q ≤ Q`, `0 < p/q ≤ 1`, ascending.
pub fn farey_sequence(q_max: i64) -> Result<Vec<FareyFraction>> {
    if q_max < 1 {
        return Err(Error::param("Q", "must be >= 1"));
    }
    let mut out = Vec::new();
    let (mut a, mut b, mut c, mut d) = (0i64, 1i64, 1i64, q_max);
    loop {
        out.push(FareyFraction { p: c, q: d });
        if c == d {
            return Ok(out);
        }
        let k = (q_max + b) / d;
        let next = (k * c - a, k * d - b);
        (a, b) = (c, d);
        (c, d) = next;
    }
}

/// Sign of `x·b − a` for integers below `2^53`; exact because the fused
/// multiply-add rounds once and rounding preserves sign.
#[inline]
fn cmp_to(x: f64, a: i64, b: i64) -> std::cmp::Ordering {
    let v = x.mul_add(b as f64, -(a as f64));
    v.partial_cmp(&0.0).expect("finite")
}

/// Farey neighbours `a/b ≤ x ≤ c/d` in `F_Q ∪ {0/1}`; equal when `x` hits a
/// fraction exactly.
fn bracket(x: f64, q_max: i64) -> ((i64, i64), (i64, i64)) {
    use std::cmp::Ordering::*;
    let (mut a, mut b, mut c, mut d) = (0i64, 1i64, 1i64, 1i64);
    loop {
        if b + d > q_max {
            return ((a, b), (c, d));
        }
        let (mp, mq) = (a + c, b + d);
        match cmp_to(x, mp, mq) {
            Equal => return ((mp, mq), (mp, mq)),
            Greater => {
                // Move the left end k times toward c/d: largest k with
                // (a + kc)/(b + kd) ≤ x and b + kd ≤ Q.
                let mut k = ((x * b as f64 - a as f64) / (c as f64 - x * d as f64)).floor() as i64;
                k = k.clamp(1, (q_max - b) / d);
                while k > 1 && cmp_to(x, a + k * c, b + k * d) == Less {
                    k -= 1;
                }
                while b + (k + 1) * d <= q_max && cmp_to(x, a + (k + 1) * c, b + (k + 1) * d) != Less {
                    k += 1;
                }
                a += k * c;
                b += k * d;
                if cmp_to(x, a, b) == Equal {
                    return ((a, b), (a, b));
                }
            }
            Less => {
                let mut k = ((c as f64 - x * d as f64) / (x * b as f64 - a as f64)).floor() as i64;
                k = k.clamp(1, (q_max - d) / b);
                while k > 1 && cmp_to(x, c + k * a, d + k * b) == Greater {
                    k -= 1;
                }
                while d + (k + 1) * b <= q_max && cmp_to(x, c + (k + 1) * a, d + (k + 1) * b) != Greater {
                    k += 1;
                }
                c += k * a;
                d += k * b;
                if cmp_to(x, c, d) == Equal {
                    return ((c, d), (c, d));
                }
            }
        }
    }
}

/// The fraction of `F_Q` whose Farey arc contains `x`, and `δ = x − p/q`.
///
/// `x` is split between its two bracketing neighbours at their mediant, so
/// the result is the level-`Q` arc assignment and always satisfies
/// `|δ| ≤ 1/(q(Q+1))`. It is the nearest fraction whenever that fraction
/// meets this bound. A result of `0/1` is reported as `1/1` on the circle,
/// with `δ = x`.
pub fn nearest_fraction(x: f64, q_max: i64) -> Result<(FareyFraction, f64)> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::param("x", format!("{x} is not in (0, 1]")));
    }
    if q_max < 1 {
        return Err(Error::param("Q", "must be >= 1"));
    }
    let ((a, b), (c, d)) = bracket(x, q_max);
    let (p, q) = if (a, b) == (c, d) {
        (a, b)
    } else {
        // Split at the mediant; ties go to the smaller denominator.
        match cmp_to(x, a + c, b + d) {
            std::cmp::Ordering::Less => (a, b),
            std::cmp::Ordering::Greater => (c, d),
            std::cmp::Ordering::Equal => {
                if b <= d {
                    (a, b)
                } else {
                    (c, d)
                }
            }
        }
    };
    let delta = x - p as f64 / q as f64;
    if p == 0 {
        return Ok((FareyFraction { p: 1, q: 1 }, x));
    }
    Ok((FareyFraction { p, q }, delta))
}

/// Major iff `q ≤ t·2^{j/2}`, minor iff `t·2^{j/2} < q ≤ 2^{j/2}`.
pub fn classify_arc(j: u32, q: i64, threshold: Ratio<i64>) -> Result<ArcKind> {
    let pow = 1i128 << j;
    let q2 = (q as i128) * (q as i128);
    if q < 1 || q2 > pow {
        return Err(Error::OutsideDissection {
            level: j,
            q: q.max(0) as u64,
        });
    }
    let (num, den) = (*threshold.numer() as i128, *threshold.denom() as i128);
    if num >= 0 && q2 * den * den <= pow * num * num {
        Ok(ArcKind::Major)
    } else {
        Ok(ArcKind::Minor)
    }
}

/// Left and right neighbours of `p/q` in `F_Q` (the right neighbour of
/// `1/1` is `(Q+1)/Q`, i.e. `1/Q` shifted by one turn).
fn neighbours(f: FareyFraction, q_max: i64) -> ((i64, i64), (i64, i64)) {
    let (p, q) = (f.p, f.q);
    let inv = if q == 1 {
        0
    } else {
        let e = p.extended_gcd(&q);
        e.x.rem_euclid(q)
    };
    // Left: p b − a q = 1, b ≡ p⁻¹ (mod q).
    let b = inv + q * ((q_max - inv) / q);
    let a = (p * b - 1) / q;
    // Right: c q − p d = 1, d ≡ −p⁻¹ (mod q).
    let d0 = (-inv).rem_euclid(q);
    let d = d0 + q * ((q_max - d0) / q);
    let c = (p * d + 1) / q;
    ((a, b), (c, d))
}

/// Arc data for `p/q` at level `j`.
pub fn arc(fraction: FareyFraction, j: u32, threshold: Ratio<i64>) -> Result<ArcClassification> {
    let kind = classify_arc(j, fraction.q, threshold)?;
    let q_max = level_bound(j);
    let ((a, b), (c, d)) = neighbours(fraction, q_max);
    let lo = Ratio::new(a + fraction.p, b + fraction.q);
    let hi = Ratio::new(c + fraction.p, d + fraction.q);
    Ok(ArcClassification {
        fraction,
        level: j,
        kind,
        interval: (lo, hi),
        tilde_interval: fraction.tilde_interval(),
    })
}

/// Every arc of the level-`j` dissection, ascending.
pub fn farey_arcs(j: u32, threshold: Ratio<i64>) -> Result<Vec<ArcClassification>> {
    farey_sequence(level_bound(j))?
        .into_iter()
        .map(|f| arc(f, j, threshold))
        .collect()
}

/// True iff every two fractions with `q ≤ q′ ≤ 2q` have disjoint or
/// identical intervals `Ĩ`.
pub fn tilde_disjointness(fractions: &[FareyFraction]) -> bool {
    tilde_overlap(fractions).is_none()
}

/// First pair violating [`tilde_disjointness`], if any.
pub fn tilde_overlap(fractions: &[FareyFraction]) -> Option<(FareyFraction, FareyFraction)> {
    let mut sorted: Vec<FareyFraction> = fractions.to_vec();
    sorted.sort_by_key(|x| x.ratio());
    sorted.dedup();
    for (i, f) in sorted.iter().enumerate() {
        // Any partner with q′ ≥ q/2 lies within 1/(10q²) + 4/(10q²).
        let reach = f.ratio() + Ratio::new(1, 2 * f.q * f.q);
        for g in sorted[i + 1..].iter().take_while(|g| g.ratio() <= reach) {
            let (lo, hi) = if f.q <= g.q { (f, g) } else { (g, f) };
            if hi.q > 2 * lo.q {
                continue;
            }
            let cross = (lo.p as i128 * hi.q as i128 - hi.p as i128 * lo.q as i128).abs();
            let (q, q2) = (lo.q as i128, hi.q as i128);
            if 10 * cross * q * q2 <= q * q + q2 * q2 {
                return Some((*f, *g));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::totient;

    fn ff(p: i64, q: i64) -> FareyFraction {
        FareyFraction::new(p, q).unwrap()
    }

    #[test]
    fn small_sequences() {
        assert_eq!(farey_sequence(1).unwrap(), vec![ff(1, 1)]);
        assert_eq!(
            farey_sequence(3).unwrap(),
            vec![ff(1, 3), ff(1, 2), ff(2, 3), ff(1, 1)]
        );
        for q in 1..60 {
            let n: u64 = (1..=q as u64).map(totient).sum();
            assert_eq!(farey_sequence(q).unwrap().len() as u64, n);
        }
    }

    #[test]
    fn nearest_examples() {
        assert_eq!(nearest_fraction(0.5, 10).unwrap(), (ff(1, 2), 0.0));
        let (f, d) = nearest_fraction(0.333, 5).unwrap();
        assert_eq!(f, ff(1, 3));
        assert!((d + 1.0 / 3000.0).abs() < 1e-15);
        let (f, d) = nearest_fraction(std::f64::consts::PI - 3.0, 10).unwrap();
        assert_eq!(f, ff(1, 7));
        assert!((d + 0.001264489).abs() < 1e-9);
        let (f, d) = nearest_fraction(0.01, 10).unwrap();
        assert_eq!(f, ff(1, 1));
        assert_eq!(d, 0.01);
    }

    #[test]
    fn nearest_agrees_with_scan() {
        // Oracle: bracket x by scanning all of F_Q, then split at the
        // mediant with exact rationals.
        let mut state = 12345u64;
        for _ in 0..3000 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let x = ((state >> 11) as f64 + 1.0) / (1u64 << 53) as f64;
            let q_max = 1 + (state % 40) as i64;
            let xr = Ratio::<i128>::new((state >> 11) as i128 + 1, 1i128 << 53);
            let all: Vec<Ratio<i128>> = std::iter::once(Ratio::from_integer(0))
                .chain(farey_sequence(q_max).unwrap().iter().map(|f| Ratio::new(f.p as i128, f.q as i128)))
                .collect();
            let lo = *all.iter().filter(|&&g| g <= xr).max().unwrap();
            let hi = *all.iter().filter(|&&g| g >= xr).min().unwrap();
            let med = Ratio::new(lo.numer() + hi.numer(), lo.denom() + hi.denom());
            let pick = if xr < med || (xr == med && lo.denom() <= hi.denom()) { lo } else { hi };
            let pick = if pick == Ratio::from_integer(0) { Ratio::from_integer(1) } else { pick };
            let (f, d) = nearest_fraction(x, q_max).unwrap();
            assert_eq!(Ratio::new(f.p as i128, f.q as i128), pick, "x={x} Q={q_max}");
            assert!(d.abs() <= 1.0 / (f.q as f64 * (q_max + 1) as f64) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn arc_thresholds() {
        let t = default_threshold();
        assert_eq!(classify_arc(10, 3, t).unwrap(), ArcKind::Major);
        assert_eq!(classify_arc(10, 20, t).unwrap(), ArcKind::Minor);
        assert_eq!(classify_arc(0, 1, t).unwrap(), ArcKind::Minor);
        assert!(matches!(
            classify_arc(10, 33, t),
            Err(Error::OutsideDissection { .. })
        ));
        assert_eq!(classify_arc(10, 32, t).unwrap(), ArcKind::Minor);
    }

    #[test]
    fn arcs_tile_the_circle() {
        for j in 0..=20 {
            let arcs = farey_arcs(j, default_threshold()).unwrap();
            let q_max = level_bound(j);
            assert_eq!(arcs[0].interval.0, Ratio::new(1, q_max + 1));
            for w in arcs.windows(2) {
                assert_eq!(w[0].interval.1, w[1].interval.0);
            }
            let last = arcs.last().unwrap();
            assert_eq!(last.interval.1, Ratio::new(q_max + 2, q_max + 1));
            for a in &arcs {
                let bound = 1.0 / (a.fraction.q as f64 * 2f64.powf(j as f64 / 2.0));
                let c = a.fraction.ratio();
                assert!(*(c - a.interval.0).numer() as f64 / *(c - a.interval.0).denom() as f64 <= bound);
                assert!(*(a.interval.1 - c).numer() as f64 / *(a.interval.1 - c).denom() as f64 <= bound);
            }
        }
    }

    #[test]
    fn tilde_examples() {
        assert!(tilde_disjointness(&[ff(1, 2), ff(1, 3)]));
        assert!(tilde_disjointness(&[ff(1, 5), ff(1, 5)]));
        assert!(tilde_disjointness(&farey_sequence(50).unwrap()));
        // Overlaps between denominators more than a factor 2 apart do not count.
        assert!(tilde_disjointness(&[ff(1, 1), ff(10, 11)]));
    }
}
