//! Gamma function wrappers and the closed-form kernel weights shared by the
//! product quadratures.

use libm::{expm1, log1p, pow};

#[inline]
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `(k + 1)^p - k^p` without cancellation for large `k`.
pub fn pow_forward_diff(k: f64, p: f64) -> f64 {
    if k == 0.0 {
        1.0
    } else {
        pow(k, p) * expm1(p * log1p(1.0 / k))
    }
}

/// `∫_k^{k+1} y^q dy` for `k ≥ 0` (`q > -1` when `k = 0`).
pub fn power_integral(q: f64, k: f64) -> f64 {
    let e = q + 1.0;
    if k == 0.0 {
        return 1.0 / e;
    }
    let l = log1p(1.0 / k);
    if libm::fabs(e) < 1e-12 {
        // limit e -> 0 of k^e (exp(e l) - 1) / e
        return l * (1.0 + 0.5 * e * l) * pow(k, e);
    }
    pow(k, e) * expm1(e * l) / e
}

/// Weights of the cell `y ∈ [k, k+1]` for the kernel `y^q` against a linear
/// function: returns `(near, far)` with
/// `near = ∫ y^q (k + 1 - y) dy` (multiplies the value at `y = k`) and
/// `far = ∫ y^q (y - k) dy` (multiplies the value at `y = k + 1`).
pub fn lag_weights(q: f64, k: f64) -> (f64, f64) {
    if k == 0.0 {
        // ∫_0^1 y^q (1 - y) dy and ∫_0^1 y^{q+1} dy
        let far = 1.0 / (q + 2.0);
        let near = 1.0 / (q + 1.0) - far;
        return (near, far);
    }
    let i0 = power_integral(q, k);
    let i1 = power_integral(q + 1.0, k);
    let far = i1 - k * i0;
    let near = i0 - far;
    (near, far)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let x = a + i as f64 * h;
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
        }
        s * h / 3.0
    }

    #[test]
    fn forward_diff_matches_direct_for_small_k() {
        for &p in &[0.3, 0.5, 1.7] {
            for k in 0..20 {
                let k = k as f64;
                let direct = pow(k + 1.0, p) - pow(k, p);
                assert!((pow_forward_diff(k, p) - direct).abs() < 1e-13 * direct.abs().max(1.0));
            }
        }
    }

    #[test]
    fn lag_weights_against_simpson() {
        for &q in &[-0.5, -0.3, 0.4, -1.5, -1.8, 0.0] {
            let k0 = if q <= -1.0 { 1 } else { 0 };
            for k in [k0, 1, 2, 7, 50] {
                let kf = k as f64;
                let (near, far) = lag_weights(q, kf);
                let (a, b) = if k == 0 {
                    // y = u^4 smooths the endpoint singularity
                    let jac = |u: f64| 4.0 * pow(u, 3.0 + 4.0 * q);
                    (
                        simpson(|u| jac(u) * (1.0 - u.powi(4)), 0.0, 1.0, 20000),
                        simpson(|u| jac(u) * u.powi(4), 0.0, 1.0, 20000),
                    )
                } else {
                    (
                        simpson(|y| pow(y, q) * (kf + 1.0 - y), kf, kf + 1.0, 2000),
                        simpson(|y| pow(y, q) * (y - kf), kf, kf + 1.0, 2000),
                    )
                };
                assert!((near - a).abs() < 1e-7, "q={q} k={k} near {near} vs {a}");
                assert!((far - b).abs() < 1e-7, "q={q} k={k} far {far} vs {b}");
            }
        }
    }

    #[test]
    fn power_integral_log_limit() {
        let v = power_integral(-1.0, 3.0);
        assert!((v - (4.0f64 / 3.0).ln()).abs() < 1e-15);
        let near = power_integral(-1.0 + 1e-9, 3.0);
        assert!((near - v).abs() < 1e-8);
    }
}
