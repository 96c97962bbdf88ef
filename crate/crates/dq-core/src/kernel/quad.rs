//! Gauss-Hermite quadrature for ∫ f(x) e^{−x²} dx.
//!
//! Nodes are the eigenvalues of the Jacobi matrix (zero diagonal,
//! off-diagonals √(k/2)), found by Sturm-count bisection; weights come from
//! the Christoffel formula evaluated with the weighted (bounded) Hermite
//! functions to avoid overflow at the outer nodes.

use crate::oscillator::orthopoly::hermite_function;

/// Number of Jacobi eigenvalues strictly below x (LDLᵀ sign count).
fn sturm_count(n: usize, x: f64) -> usize {
    let mut count = 0;
    let mut d = -x;
    if d < 0.0 {
        count += 1;
    }
    for k in 1..n {
        let b2 = k as f64 / 2.0;
        let mut dk = d;
        if dk == 0.0 {
            dk = f64::EPSILON * (1.0 + x.abs());
        }
        d = -x - b2 / dk;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Nodes and weights of the n-point rule.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one node");
    let bound = (2.0 * n as f64).sqrt() + 2.0;
    let mut nodes = Vec::with_capacity(n);
    for idx in 0..n {
        // bisect for the idx-th smallest eigenvalue
        let mut lo = -bound;
        let mut hi = bound;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if sturm_count(n, mid) <= idx {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        nodes.push(0.5 * (lo + hi));
    }
    // Christoffel weights: λ_i = e^{−x²} / Σ_{k<n} h_k(x)² with h_k the
    // orthonormal weighted Hermite functions
    let weights = nodes
        .iter()
        .map(|&x| {
            let mut sum = 0.0;
            for k in 0..n {
                let h = hermite_function(k as u32, x);
                sum += h * h;
            }
            (-x * x).exp() / sum
        })
        .collect();
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_moments_are_exact() {
        let (x, w) = gauss_hermite(24);
        let total: f64 = w.iter().sum();
        assert!((total - std::f64::consts::PI.sqrt()).abs() < 1e-12, "∫e^{{−x²}} = {total}");
        let second: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
        assert!((second - 0.5 * std::f64::consts::PI.sqrt()).abs() < 1e-12);
        let odd: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x * x).sum();
        assert!(odd.abs() < 1e-13);
    }

    #[test]
    fn polynomial_exactness_up_to_degree_2n_minus_1() {
        // ∫x^8 e^{−x²} = 105/16 √π needs only 5 nodes
        let (x, w) = gauss_hermite(5);
        let m8: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        let exact = 105.0 / 16.0 * std::f64::consts::PI.sqrt();
        assert!((m8 - exact).abs() < 1e-11 * exact, "{m8} vs {exact}");
    }

    #[test]
    fn oscillatory_integrand_converges_with_node_count() {
        // ∫e^{−x²}cos(2bx)dx = √π e^{−b²}
        let b: f64 = 1.3;
        let exact = std::f64::consts::PI.sqrt() * (-b * b).exp();
        let (x, w) = gauss_hermite(48);
        let val: f64 = x.iter().zip(&w).map(|(x, w)| w * (2.0 * b * x).cos()).sum();
        assert!((val - exact).abs() < 1e-13, "{val} vs {exact}");
    }
}
