//! Reference quadratures for unit tests.

/// Double-exponential quadrature on `[a, b]`.
pub fn de(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    quadrature::double_exponential::integrate(f, a, b, 1e-14).integral
}

/// `∫_0^len f(u) du` for `f` integrably singular at `u = 0`, on geometric
/// pieces `[len·10^{-k-1}, len·10^{-k}]`; the dropped `[0, len·10^{-40}]`
/// carries nothing at double precision for log-type singularities.
pub fn graded(f: impl Fn(f64) -> f64, len: f64) -> f64 {
    if len <= 0.0 {
        return 0.0;
    }
    (0..40)
        .map(|k| {
            let hi = len * 10f64.powi(-k);
            de(&f, hi * 0.1, hi)
        })
        .sum()
}
