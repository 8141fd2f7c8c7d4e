//! Finite-difference helpers.

/// Step for a central difference at `x`: `h * max(1, |x|)`.
pub fn relative_step(h: f64, x: f64) -> f64 {
    h * x.abs().max(1.0)
}

/// Finite-difference weights for the `order`-th derivative at `z` on the
/// stencil `x` (Fornberg's recursion). Returns one weight per stencil node.
pub fn fornberg_weights(z: f64, x: &[f64], order: usize) -> Vec<f64> {
    let n = x.len();
    let mut c = vec![vec![0.0; order + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// First derivatives of sampled data at every node, from the five nearest
/// nodes (centred where the grid allows, shifted inward at the ends).
/// Fourth-order accurate on smooth data; falls back to fewer nodes on short
/// tables.
pub fn sample_derivatives(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let width = n.min(5);
    (0..n)
        .map(|i| {
            let start = i.saturating_sub(width / 2).min(n - width);
            let stencil = &x[start..start + width];
            let w = fornberg_weights(x[i], stencil, 1);
            w.iter().zip(&y[start..start + width]).map(|(wi, yi)| wi * yi).sum()
        })
        .collect()
}
