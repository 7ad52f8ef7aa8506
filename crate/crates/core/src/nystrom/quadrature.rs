//! Gauss–Legendre nodes on `[-1, 1]` with interpolatory product weights.
//!
//! For a target `t` and smooth `f`, the rows satisfy
//!
//! ```text
//! ∫ log|t - y| f(y) dy ≈ Σ_j W^log_j(t) f(ξ_j)
//! ∫ |t - y| f(y) dy    ≈ Σ_j W^abs_j(t) f(ξ_j)
//! ```
//!
//! exactly when `f` is a polynomial of degree below the node count. The
//! weights come from the Legendre moments of the singular factors,
//! `W_j(t) = w_j Σ_n (n + ½) P_n(ξ_j) I_n(t)`. A third table, built on
//! request, integrates the one-sided kink `max(0, log((1+y)/(1+t)))`.

use nalgebra::DMatrix;

use crate::specfun::gauss_legendre_unit;

/// Base rule plus the two product-weight tables at the nodes themselves.
#[derive(Debug, Clone)]
pub(crate) struct ProductRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `log_w[(i, j)]`: weight of node `j` for target node `i`.
    pub log_w: DMatrix<f64>,
    pub abs_w: DMatrix<f64>,
    /// Weights for `max(0, log((1+y)/(1+t)))`; only built for 2D rules.
    pub kink_w: Option<DMatrix<f64>>,
}

impl ProductRule {
    pub fn new(m: usize) -> Self {
        let (nodes, weights): (Vec<f64>, Vec<f64>) = gauss_legendre_unit(m).into_iter().unzip();
        let log_w = product_weights(&nodes, &weights, &nodes, log_moments);
        let abs_w = product_weights(&nodes, &weights, &nodes, abs_moments);
        Self { nodes, weights, log_w, abs_w, kink_w: None }
    }

    pub fn with_kink(m: usize) -> Self {
        let mut rule = Self::new(m);
        rule.kink_w = Some(product_weights(&rule.nodes, &rule.weights, &rule.nodes, kink_moments));
        rule
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Index of the node `-ξ_j`.
    pub fn mirror(&self, j: usize) -> usize {
        self.nodes.len() - 1 - j
    }
}

/// `P_0(x), ..., P_n(x)`.
pub(crate) fn legendre_upto(x: f64, n: usize) -> Vec<f64> {
    let mut p = Vec::with_capacity(n + 1);
    p.push(1.0);
    if n >= 1 {
        p.push(x);
    }
    for k in 1..n {
        let kf = k as f64;
        p.push(((2.0 * kf + 1.0) * x * p[k] - kf * p[k - 1]) / (kf + 1.0));
    }
    p
}

/// `I_n(t) = ∫_{-1}^{1} log|t - y| P_n(y) dy` for `n < m`, `|t| < 1`.
///
/// Uses `I_n = 2(Q_{n+1} - Q_{n-1})/(2n+1)` with Ferrers' `Q_n` on the cut,
/// whose forward recurrence is stable for `|t| < 1`.
pub(crate) fn log_moments(t: f64, m: usize) -> Vec<f64> {
    let mut q = Vec::with_capacity(m + 1);
    q.push(0.5 * ((1.0 + t) / (1.0 - t)).ln());
    q.push(t * q[0] - 1.0);
    for k in 1..m {
        let kf = k as f64;
        q.push(((2.0 * kf + 1.0) * t * q[k] - kf * q[k - 1]) / (kf + 1.0));
    }
    let mut out = Vec::with_capacity(m);
    out.push((1.0 + t) * (1.0 + t).ln() + (1.0 - t) * (1.0 - t).ln() - 2.0);
    for n in 1..m {
        out.push(2.0 * (q[n + 1] - q[n - 1]) / (2.0 * n as f64 + 1.0));
    }
    out
}

/// `J_n(t) = ∫_{-1}^{1} |t - y| P_n(y) dy` for `n < m`.
///
/// For `n ≥ 2`, `J_n = 2F_n(t)` where `F_n'' = P_n` and `F_n, F_n'` vanish at
/// `±1`.
pub(crate) fn abs_moments(t: f64, m: usize) -> Vec<f64> {
    let p = legendre_upto(t, m + 1);
    let mut out = Vec::with_capacity(m);
    out.push(1.0 + t * t);
    if m > 1 {
        out.push(t * t * t / 3.0 - t);
    }
    for n in 2..m {
        let nf = n as f64;
        let f = ((p[n + 2] - p[n]) / (2.0 * nf + 3.0) - (p[n] - p[n - 2]) / (2.0 * nf - 1.0)) / (2.0 * nf + 1.0);
        out.push(2.0 * f);
    }
    out
}

/// `K_n(t) = ∫_t^1 log((1+y)/(1+t)) P_n(y) dy` for `n < m`.
///
/// By parts, `K_n = -∫_t^1 T_n(y)/(1+y) dy` with `T_n` the antiderivative of
/// `P_n` vanishing at 1; `T_n` also vanishes at -1 for `n ≥ 1`, so the
/// integrand is a polynomial of degree `n - 1` and a GL rule on `[t, 1]` is
/// exact.
pub(crate) fn kink_moments(t: f64, m: usize) -> Vec<f64> {
    let mut out = vec![0.0; m];
    out[0] = 2.0 * (2.0 / (1.0 + t)).ln() - (1.0 - t);
    if m == 1 {
        return out;
    }
    let half = 0.5 * (1.0 - t);
    for (x, w) in gauss_legendre_unit(m.div_ceil(2)) {
        let y = t + half * (1.0 + x);
        let p = legendre_upto(y, m);
        for n in 1..m {
            let tn = (p[n + 1] - p[n - 1]) / (2.0 * n as f64 + 1.0);
            out[n] -= half * w * tn / (1.0 + y);
        }
    }
    out
}

/// Weight table for the given targets; rows are targets.
pub(crate) fn product_weights(
    nodes: &[f64],
    weights: &[f64],
    targets: &[f64],
    moments: fn(f64, usize) -> Vec<f64>,
) -> DMatrix<f64> {
    let m = nodes.len();
    // B[(n, j)] = (n + ½) P_n(ξ_j) w_j
    let mut b = DMatrix::<f64>::zeros(m, m);
    for (j, (&x, &w)) in nodes.iter().zip(weights).enumerate() {
        let p = legendre_upto(x, m - 1);
        for n in 0..m {
            b[(n, j)] = (n as f64 + 0.5) * p[n] * w;
        }
    }
    let mut mom = DMatrix::<f64>::zeros(targets.len(), m);
    for (i, &t) in targets.iter().enumerate() {
        for (n, v) in moments(t, m).into_iter().enumerate() {
            mom[(i, n)] = v;
        }
    }
    mom * b
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::testutil::graded;

    /// `∫_{-1}^{1} k(|t - y|) f(y) dy` with the distance as integration
    /// variable, so `log u` is exact near the singularity.
    fn singular(k: impl Fn(f64) -> f64, f: impl Fn(f64) -> f64, t: f64) -> f64 {
        graded(|u| k(u) * f(t - u), 1.0 + t) + graded(|u| k(u) * f(t + u), 1.0 - t)
    }

    #[test]
    fn moments_match_quadrature() {
        for &t in &[-0.93, -0.2, 0.0, 0.51, 0.999] {
            let lm = log_moments(t, 12);
            let am = abs_moments(t, 12);
            for n in 0..12 {
                let pn = |y: f64| legendre_upto(y, n)[n];
                let want_log = singular(f64::ln, pn, t);
                let want_abs = singular(|u| u, pn, t);
                assert!((lm[n] - want_log).abs() < 1e-12, "log n={n} t={t}: {} vs {want_log}", lm[n]);
                assert!((am[n] - want_abs).abs() < 1e-12, "abs n={n} t={t}");
            }
        }
    }

    #[test]
    fn weights_integrate_singular_products() {
        let rule = ProductRule::new(24);
        let f = |y: f64| (1.3 * y).cos() + y * y * y;
        for i in [0, 5, 11, 23] {
            let t = rule.nodes[i];
            let got: f64 = (0..24).map(|j| rule.log_w[(i, j)] * f(rule.nodes[j])).sum();
            let want = singular(f64::ln, f, t);
            assert!((got - want).abs() < 1e-13, "log i={i}: {got} vs {want}");
            let got: f64 = (0..24).map(|j| rule.abs_w[(i, j)] * f(rule.nodes[j])).sum();
            let want = singular(|u| u, f, t);
            assert!((got - want).abs() < 1e-13, "abs i={i}");
        }
    }

    #[test]
    fn kink_weights_integrate_one_sided_log() {
        let rule = ProductRule::with_kink(24);
        let kink = rule.kink_w.as_ref().unwrap();
        let f = |y: f64| (1.3 * y).cos() + y * y * y;
        for i in [0, 5, 11, 23] {
            let t = rule.nodes[i];
            let got: f64 = (0..24).map(|j| kink[(i, j)] * f(rule.nodes[j])).sum();
            let want = graded(|u| ((1.0 + t + u) / (1.0 + t)).ln() * f(t + u), 1.0 - t);
            assert!((got - want).abs() < 1e-13 * want.abs().max(1.0), "kink i={i}: {got} vs {want}");
        }
    }

    #[test]
    fn weights_are_stable_for_large_rules() {
        let rule = ProductRule::new(256);
        let i = 200;
        let t = rule.nodes[i];
        let got: f64 = (0..256).map(|j| rule.log_w[(i, j)]).sum();
        let want = log_moments(t, 1)[0];
        assert!((got - want).abs() < 1e-12);
        assert!((rule.weights.iter().sum::<f64>() - 2.0).abs() < 1e-13);
        assert!(rule.weights.iter().all(|&w| w > 0.0));
        assert_eq!(rule.mirror(0), 255);
        assert!((rule.nodes[0] + rule.nodes[255]).abs() < 1e-15);
    }
}
