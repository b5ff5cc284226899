//! Central finite-difference stencils.

/// `[f(x + h) − f(x − h)] / 2h`.
pub fn central_first<F>(f: F, x: f64, h: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Five-point second derivative, exact for polynomials up to degree five.
///
/// ```text
/// f'' ≈ [−f(x+2h) + 16f(x+h) − 30f(x) + 16f(x−h) − f(x−2h)] / 12h²
/// ```
pub fn central_second_5pt<F>(f: F, x: f64, h: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let f0 = f(x);
    let p1 = f(x + h);
    let m1 = f(x - h);
    let p2 = f(x + 2.0 * h);
    let m2 = f(x - 2.0 * h);
    (-p2 + 16.0 * p1 - 30.0 * f0 + 16.0 * m1 - m2) / (12.0 * h * h)
}

/// One Richardson step on the five-point stencil: `[16 D(h/2) − D(h)] / 15`.
pub fn richardson_second<F>(f: F, x: f64, h: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let coarse = central_second_5pt(&f, x, h);
    let fine = central_second_5pt(&f, x, 0.5 * h);
    (16.0 * fine - coarse) / 15.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_derivative_of_sine() {
        let d = central_first(f64::sin, 0.4, 1e-5);
        assert!((d - 0.4_f64.cos()).abs() < 1e-10);
    }

    #[test]
    fn second_derivative_exact_on_quintic() {
        let f = |x: f64| 3.0 * x.powi(5) - x.powi(4) + 2.0 * x * x + 1.0;
        let exact = |x: f64| 60.0 * x.powi(3) - 12.0 * x * x + 4.0;
        let d = central_second_5pt(f, 0.3, 0.1);
        assert!((d - exact(0.3)).abs() < 1e-11);
    }

    #[test]
    fn richardson_improves_on_exp() {
        let h = 0.2;
        let plain = (central_second_5pt(f64::exp, 0.0, h) - 1.0).abs();
        let extrapolated = (richardson_second(f64::exp, 0.0, h) - 1.0).abs();
        assert!(extrapolated < plain / 10.0);
        assert!(extrapolated < 1e-8);
    }
}
