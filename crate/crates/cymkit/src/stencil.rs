//! Fourth-order finite differences on uniform 1-D grids.

/// First derivative; one-sided five-point stencils at the two end nodes on
/// each side.
pub fn d1(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 5, "need at least five samples");
    let mut out = vec![0.0; n];
    for i in 2..n - 2 {
        out[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    }
    out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
    out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
    let m = n - 1;
    out[m] = (25.0 * f[m] - 48.0 * f[m - 1] + 36.0 * f[m - 2] - 16.0 * f[m - 3] + 3.0 * f[m - 4]) / (12.0 * h);
    out[m - 1] = (3.0 * f[m] + 10.0 * f[m - 1] - 18.0 * f[m - 2] + 6.0 * f[m - 3] - f[m - 4]) / (12.0 * h);
    out
}

/// Second derivative, same layout as [`d1`].
pub fn d2(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 6, "need at least six samples");
    let h2 = 12.0 * h * h;
    let mut out = vec![0.0; n];
    for i in 2..n - 2 {
        out[i] = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / h2;
    }
    let fwd0 = |g: &dyn Fn(usize) -> f64| {
        (45.0 * g(0) - 154.0 * g(1) + 214.0 * g(2) - 156.0 * g(3) + 61.0 * g(4) - 10.0 * g(5)) / h2
    };
    let fwd1 = |g: &dyn Fn(usize) -> f64| {
        (10.0 * g(0) - 15.0 * g(1) - 4.0 * g(2) + 14.0 * g(3) - 6.0 * g(4) + g(5)) / h2
    };
    out[0] = fwd0(&|k| f[k]);
    out[1] = fwd1(&|k| f[k]);
    let m = n - 1;
    out[m] = fwd0(&|k| f[m - k]);
    out[m - 1] = fwd1(&|k| f[m - k]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_quartics() {
        let h = 0.1;
        let f: Vec<f64> = (0..12).map(|i| (i as f64 * h).powi(4) - 2.0 * (i as f64 * h)).collect();
        let a = d1(&f, h);
        let b = d2(&f, h);
        for i in 0..12 {
            let x = i as f64 * h;
            assert!((a[i] - (4.0 * x.powi(3) - 2.0)).abs() < 1e-11, "d1 at {i}");
            assert!((b[i] - 12.0 * x * x).abs() < 1e-9, "d2 at {i}");
        }
    }
}
