//! Composite Gauss-Legendre quadrature on `[0, 1]`.

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const NODES_PER_PANEL: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub max_refinements: usize,
    pub base_panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            max_refinements: 30,
            base_panels: 8,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || self.max_refinements < 1 || self.base_panels < 1 {
            return Err(Error::InvalidArgument(format!("bad quadrature config {self:?}")));
        }
        Ok(())
    }
}

/// Nodes and weights of the `n`-point rule on `[-1, 1]`, by Newton iteration
/// on the Legendre polynomial.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
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
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(NODES_PER_PANEL))
}

fn panel<F>(f: &mut F, a: f64, b: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (nodes, weights) = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        acc += w * f(mid + half * x)?;
    }
    Ok(acc * half)
}

/// Fixed composite rule with `panels` equal panels on `[0, 1]`.
pub fn integrate_uniform<F>(mut f: F, panels: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let h = 1.0 / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        total += panel(&mut f, k as f64 * h, (k + 1) as f64 * h)?;
    }
    Ok(total)
}

/// Adaptive integral over `[0, 1]`.
///
/// Starts from `base_panels` equal panels; a panel is halved until the
/// one-panel estimate and the sum over its two halves differ by at most
/// `abs_tol` times the panel width, so the accepted local differences sum to
/// at most `abs_tol`. A panel needing more than `max_refinements` halvings is
/// a non-convergence error.
pub fn integrate_adaptive<F>(mut f: F, cfg: &QuadratureConfig) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    cfg.validate()?;
    let h = 1.0 / cfg.base_panels as f64;
    let mut total = 0.0;
    // depth-first, left to right: the summation order is deterministic
    let mut stack = Vec::new();
    for k in (0..cfg.base_panels).rev() {
        let (a, b) = (k as f64 * h, (k + 1) as f64 * h);
        stack.push((a, b, 0usize, None::<f64>));
    }
    while let Some((a, b, depth, coarse)) = stack.pop() {
        let coarse = match coarse {
            Some(c) => c,
            None => panel(&mut f, a, b)?,
        };
        let m = 0.5 * (a + b);
        let left = panel(&mut f, a, m)?;
        let right = panel(&mut f, m, b)?;
        let fine = left + right;
        if (fine - coarse).abs() <= cfg.abs_tol * (b - a) {
            total += fine;
        } else if depth >= cfg.max_refinements {
            return Err(Error::NonConvergence {
                what: "adaptive quadrature",
                iterations: cfg.max_refinements,
            });
        } else {
            stack.push((m, b, depth + 1, Some(right)));
            stack.push((a, m, depth + 1, Some(left)));
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(10);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // degree 19 is exact: int_{-1}^{1} x^18 = 2/19
        let v: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((v - 2.0 / 19.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_near_singular_integrand() {
        // int_0^1 1/(s + 1e-4) ds = ln(1 + 1e4)
        let v = integrate_adaptive(|s| Ok(1.0 / (s + 1e-4)), &QuadratureConfig::default()).unwrap();
        assert!((v - (1.0f64 + 1e4).ln()).abs() < 1e-9);
    }

    #[test]
    fn adaptive_reports_nonconvergence() {
        let cfg = QuadratureConfig {
            abs_tol: 1e-14,
            max_refinements: 2,
            base_panels: 1,
        };
        assert!(matches!(
            integrate_adaptive(|s| Ok(1.0 / (s + 1e-9)), &cfg),
            Err(Error::NonConvergence { .. })
        ));
        assert!(QuadratureConfig { abs_tol: 0.0, ..cfg }.validate().is_err());
    }
}
