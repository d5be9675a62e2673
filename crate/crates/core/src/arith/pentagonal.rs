//! Coefficients of Euler's product `∏(1 − xⁿ)` from the pentagonal number
//! theorem, and their split into the two theta series `f₁`, `f₂`.

/// `a_0..a_M` with `a_j = (−1)^n` when `j = n(3n+1)/2`, `n ∈ Z`, else 0.
pub fn pentagonal_coefficients(m: usize) -> Vec<i64> {
    let mut a = vec![0i64; m + 1];
    for n in 0i64.. {
        let mut any = false;
        for k in [n, -n - 1] {
            let j = k * (3 * k + 1) / 2;
            if (j as usize) <= m {
                a[j as usize] = if k.rem_euclid(2) == 0 { 1 } else { -1 };
                any = true;
            }
        }
        if !any {
            break;
        }
    }
    a
}

/// Coefficient arrays of `f₁ = Σ_n x^{6n²+n}` and `f₂ = −Σ_n x^{6n²+7n+2}`
/// (the even and odd `n` halves of Euler's series), each up to degree `M`.
pub fn euler_split_coefficients(m: usize) -> (Vec<i64>, Vec<i64>) {
    let mut f1 = vec![0i64; m + 1];
    let mut f2 = vec![0i64; m + 1];
    let bound = ((m as f64 / 6.0).sqrt() as i64) + 2;
    for n in -bound..=bound {
        let e1 = 6 * n * n + n;
        if e1 >= 0 && (e1 as usize) <= m {
            f1[e1 as usize] += 1;
        }
        let e2 = 6 * n * n + 7 * n + 2;
        if e2 >= 0 && (e2 as usize) <= m {
            f2[e2 as usize] -= 1;
        }
    }
    (f1, f2)
}
