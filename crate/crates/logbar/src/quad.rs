//! Gauss–Legendre quadrature with a spectral cumulative-integration matrix.
//!
//! A panel rule carries the usual nodes and weights on [-1, 1] together with a
//! matrix `cum` such that, given samples `g` of a function at the nodes,
//! `cum * g` approximates the cumulative integrals `∫_{-1}^{x_i} g` at every
//! node.  The matrix goes through the Legendre transform: values → Legendre
//! coefficients → exact antiderivatives of Legendre polynomials evaluated back
//! at the nodes.  This is what lets the nested (triangular-domain) structure
//! of iterated integrals be advanced panel by panel at spectral accuracy.

/// Nodes, weights, and cumulative-integration matrix for one panel size.
pub struct PanelRule {
    pub n: usize,
    /// Nodes on [-1, 1], ascending.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `cum[i][k]`: weight of the sample at node `k` in the cumulative
    /// integral up to node `i`.
    pub cum: Vec<Vec<f64>>,
}

impl PanelRule {
    pub fn new(n: usize) -> PanelRule {
        assert!(n >= 2, "panel rule needs at least 2 nodes");
        let (nodes, weights) = gauss_legendre(n);
        let cum = cumulative_matrix(&nodes, &weights);
        PanelRule {
            n,
            nodes,
            weights,
            cum,
        }
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration on the
/// Chebyshev initial guess.  Ascending node order.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x: Vec<f64> = (1..=n)
        .map(|k| (std::f64::consts::PI * (k as f64 - 0.25) / (n as f64 + 0.5)).cos())
        .collect();
    for _ in 0..100 {
        let mut max_dx = 0.0f64;
        for xi in x.iter_mut() {
            let (p, dp) = legendre_with_deriv(n, *xi);
            let dx = p / dp;
            *xi -= dx;
            max_dx = max_dx.max(dx.abs());
        }
        if max_dx < 1e-15 {
            break;
        }
    }
    let mut w: Vec<f64> = x
        .iter()
        .map(|&xi| {
            let (_, dp) = legendre_with_deriv(n, xi);
            2.0 / ((1.0 - xi * xi) * dp * dp)
        })
        .collect();
    // Newton starts from descending Chebyshev points; flip to ascending.
    x.reverse();
    w.reverse();
    (x, w)
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for l in 2..=n {
        let lf = l as f64;
        let p2 = ((2.0 * lf - 1.0) * x * p1 - (lf - 1.0) * p0) / lf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Values of P_0..P_deg at the given points, one row per degree.
fn legendre_table(deg: usize, x: &[f64]) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut p = vec![vec![0.0; n]; deg + 1];
    for k in 0..n {
        p[0][k] = 1.0;
    }
    if deg >= 1 {
        p[1].copy_from_slice(x);
    }
    for l in 2..=deg {
        let lf = l as f64;
        for k in 0..n {
            p[l][k] = ((2.0 * lf - 1.0) * x[k] * p[l - 1][k] - (lf - 1.0) * p[l - 2][k]) / lf;
        }
    }
    p
}

/// The cumulative-integration matrix for the given node set.
fn cumulative_matrix(x: &[f64], w: &[f64]) -> Vec<Vec<f64>> {
    let n = x.len();
    let p = legendre_table(n, x);
    // Values -> Legendre coefficients: c[l][k] = (2l+1)/2 * w_k * P_l(x_k).
    let mut coef = vec![vec![0.0; n]; n];
    for l in 0..n {
        for k in 0..n {
            coef[l][k] = (2.0 * l as f64 + 1.0) / 2.0 * w[k] * p[l][k];
        }
    }
    // Antiderivatives: ∫_{-1}^x P_l = (P_{l+1}(x) - P_{l-1}(x)) / (2l+1),
    // with ∫_{-1}^x P_0 = x + 1.
    let mut integ = vec![vec![0.0; n]; n];
    for k in 0..n {
        integ[0][k] = x[k] + 1.0;
    }
    for l in 1..n {
        for k in 0..n {
            integ[l][k] = (p[l + 1][k] - p[l - 1][k]) / (2.0 * l as f64 + 1.0);
        }
    }
    // cum = integ^T * coef.
    let mut cum = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            let mut s = 0.0;
            for l in 0..n {
                s += integ[l][i] * coef[l][k];
            }
            cum[i][k] = s;
        }
    }
    cum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_and_weights_are_sane() {
        let (x, w) = gauss_legendre(32);
        assert_eq!(x.len(), 32);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
        // Symmetry.
        for k in 0..16 {
            assert!((x[k] + x[31 - k]).abs() < 1e-14);
            assert!((w[k] - w[31 - k]).abs() < 1e-14);
        }
    }

    #[test]
    fn integrates_polynomials_exactly() {
        // GL-n is exact through degree 2n-1.
        let (x, w) = gauss_legendre(8);
        for deg in 0..=15u32 {
            let got: f64 = x
                .iter()
                .zip(&w)
                .map(|(&xi, &wi)| wi * xi.powi(deg as i32))
                .sum();
            let expect = if deg % 2 == 0 {
                2.0 / (deg as f64 + 1.0)
            } else {
                0.0
            };
            assert!(
                (got - expect).abs() < 1e-13,
                "degree {deg}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn cumulative_matrix_matches_antiderivative() {
        // Against exp on [-1,1]: ∫_{-1}^{x} e^u du = e^x - e^{-1}.
        let rule = PanelRule::new(32);
        let g: Vec<f64> = rule.nodes.iter().map(|&x| x.exp()).collect();
        for i in 0..rule.n {
            let mut s = 0.0;
            for k in 0..rule.n {
                s += rule.cum[i][k] * g[k];
            }
            let expect = rule.nodes[i].exp() - (-1.0f64).exp();
            assert!((s - expect).abs() < 1e-14, "node {i}: {s} vs {expect}");
        }
    }

    #[test]
    fn cumulative_matrix_end_matches_weights() {
        // The last row of cum integrates over the whole panel, so it must act
        // like the plain weight vector on smooth data.
        let rule = PanelRule::new(32);
        let g: Vec<f64> = rule.nodes.iter().map(|&x| (3.0 * x).sin()).collect();
        let full: f64 = rule.weights.iter().zip(&g).map(|(w, v)| w * v).sum();
        let last: f64 = rule.cum[rule.n - 1]
            .iter()
            .zip(&g)
            .map(|(c, v)| c * v)
            .sum();
        // Not identical (the last node is not +1) so compare both against truth
        let expect = (-(3.0f64 * rule.nodes[rule.n - 1]).cos() + (3.0f64 * (-1.0)).cos()) / 3.0;
        assert!((last - expect).abs() < 1e-13);
        let expect_full = (-(3.0f64).cos() + (3.0f64 * (-1.0)).cos()) / 3.0;
        assert!((full - expect_full).abs() < 1e-13);
    }
}
