//! Fixed-order Gauss-Legendre rule on [0, 1].

use alloc::vec::Vec;

use spin::Once;

pub(crate) const ORDER: usize = 24;

static RULE: Once<(Vec<f64>, Vec<f64>)> = Once::new();

/// Nodes and weights on [0, 1], by Newton iteration on P_ORDER.
pub(crate) fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    RULE.call_once(|| {
        let n = ORDER;
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes.push(0.5 * (1.0 - x));
            weights.push(1.0 / ((1.0 - x * x) * dp * dp));
        }
        (nodes, weights)
    })
}
