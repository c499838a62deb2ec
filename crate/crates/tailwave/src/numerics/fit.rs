//! Least-squares fits and limit extrapolation.

use super::Scalar;

/// Ordinary least squares line y = a + b x. Returns (a, b, stderr_a).
///
/// The intercept standard error assumes homoscedastic residuals; it is used
/// as an error bar on extrapolated quantities, not for formal inference.
pub fn line<T: Scalar>(x: &[T], y: &[T]) -> (T, T, T) {
    let n = T::c(x.len() as f64);
    assert!(x.len() == y.len() && x.len() >= 2);
    let mut sx = T::zero();
    let mut sy = T::zero();
    for (&xi, &yi) in x.iter().zip(y) {
        sx = sx + xi;
        sy = sy + yi;
    }
    let mx = sx / n;
    let my = sy / n;
    let mut sxx = T::zero();
    let mut sxy = T::zero();
    for (&xi, &yi) in x.iter().zip(y) {
        sxx = sxx + (xi - mx) * (xi - mx);
        sxy = sxy + (xi - mx) * (yi - my);
    }
    if sxx == T::zero() {
        return (my, T::zero(), T::zero());
    }
    let b = sxy / sxx;
    let a = my - b * mx;
    let mut ss = T::zero();
    for (&xi, &yi) in x.iter().zip(y) {
        let r = yi - a - b * xi;
        ss = ss + r * r;
    }
    let dof = if x.len() > 2 { T::c((x.len() - 2) as f64) } else { T::one() };
    let s2 = ss / dof;
    let se_a = (s2 * (T::one() / n + mx * mx / sxx)).sqrt();
    (a, b, se_a)
}

/// Neville tableau evaluated at x = 0: polynomial extrapolation of samples
/// (x_j, y_j) with x_j -> 0. Returns the diagonal of the tableau, i.e. the
/// order-m estimates for m = 0 .. n-1.
pub fn neville_at_zero<T: Scalar>(x: &[T], y: &[T]) -> Vec<T> {
    let n = x.len();
    let mut t: Vec<T> = y.to_vec();
    let mut diag = Vec::with_capacity(n);
    diag.push(t[n - 1]);
    for m in 1..n {
        for j in 0..n - m {
            // P_{j..j+m}(0)
            t[j] = (x[j + m] * t[j] - x[j] * t[j + 1]) / (x[j + m] - x[j]);
        }
        diag.push(t[0.max(n - m - 1)]);
    }
    diag
}

/// Richardson-style limit extraction: extrapolate y(x) to x = 0 with
/// polynomial orders up to `max_order`, returning (value, error bar) where
/// the error bar is the spread between the last two extrapolation orders.
pub fn limit_at_zero<T: Scalar>(x: &[T], y: &[T], max_order: usize) -> (T, T) {
    let n = x.len().min(max_order + 1);
    // use the n samples closest to zero (assumes x sorted descending)
    let xs = &x[x.len() - n..];
    let ys = &y[y.len() - n..];
    let diag = neville_at_zero(xs, ys);
    let last = *diag.last().unwrap();
    let prev = if diag.len() >= 2 { diag[diag.len() - 2] } else { last };
    (last, (last - prev).abs())
}
