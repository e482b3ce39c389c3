//! Gaussian quadrature rules used by the special functions and the double
//! integral representations: Gauss–Legendre on [-1, 1] and Gauss–Laguerre
//! on [0, ∞) with weight e^{-x}.
//!
//! Nodes and weights are generated by Newton iteration on the orthogonal
//! polynomial recurrences; accurate to ~1e-15 for the orders used here
//! (n ≤ 256).

/// A quadrature rule: nodes and matching weights.
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    /// ∫ f against the rule's weight over its native domain.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Gauss–Legendre rule with `n` nodes on [-1, 1].
pub fn gauss_legendre(n: usize) -> Rule {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(x), p0 = P_{n-1}(x)
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Rule { nodes, weights }
}

/// Gauss–Legendre rule mapped to [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Rule {
    let base = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    Rule {
        nodes: base.nodes.iter().map(|&t| mid + half * t).collect(),
        weights: base.weights.iter().map(|&w| w * half).collect(),
    }
}

/// Gauss–Laguerre rule with `n` nodes for ∫_0^∞ f(x) e^{-x} dx.
pub fn gauss_laguerre(n: usize) -> Rule {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    let mut x = 0.0;
    for i in 0..n {
        // Stroud & Secrest initial guesses.
        x = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => x + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = i as f64 - 1.0;
                x + (1.0 + 2.55 * ai) / (1.9 * ai) * (x - nodes[i - 2])
            }
        };
        let mut dp = 1.0;
        let mut lnm1 = 1.0;
        for _ in 0..200 {
            let mut p0 = 1.0;
            let mut p1 = 1.0 - x;
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0 - x) * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            // p1 = L_n(x), p0 = L_{n-1}(x)
            lnm1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (p1 - p0) / x;
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-14 * x.max(1.0) {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = -1.0 / (dp * nf * lnm1);
    }
    Rule { nodes, weights }
}
