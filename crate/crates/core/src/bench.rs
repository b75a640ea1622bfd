//! Condition numbers of the Poisson operator on a family of skinny quads.

use serde::{Deserialize, Serialize};

use crate::element::{assemble_element_operator, PdeCoefficients};
use crate::error::{invalid, Result};
use crate::quadmap::Quad;

/// The quad `(0,0), (1, 1−ε/2), (1,1), (1/2, 1/2+ε/2)`, which collapses onto
/// the diagonal as `ε → 0`.
pub fn skinny_quad(eps: f64) -> Result<Quad> {
    Quad::new([[0.0, 0.0], [1.0, 1.0 - 0.5 * eps], [1.0, 1.0], [0.5, 0.5 + 0.5 * eps]])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub n: usize,
    pub eps: Vec<f64>,
    pub kappa_inf: Vec<f64>,
    pub kappa_one: Vec<f64>,
}

/// Row-scaled Dirichlet Poisson operator condition numbers for each `ε`.
pub fn condition_bench(n: usize, eps: &[f64]) -> Result<BenchReport> {
    if eps.iter().any(|e| e.is_nan() || *e <= 0.0) {
        return Err(invalid("ε values must be positive"));
    }
    if eps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(invalid("ε values must be strictly descending"));
    }
    let mut kappa_inf = Vec::with_capacity(eps.len());
    let mut kappa_one = Vec::with_capacity(eps.len());
    for &e in eps {
        let m = assemble_element_operator(&PdeCoefficients::laplacian(), &skinny_quad(e)?, n)?;
        let (ki, k1) = m.condition_numbers()?;
        kappa_inf.push(ki);
        kappa_one.push(k1);
    }
    Ok(BenchReport { n, eps: eps.to_vec(), kappa_inf, kappa_one })
}

/// `1, 10⁻¹, …, 10⁻¹²`.
pub fn default_epsilons() -> Vec<f64> {
    (0..=12).map(|k| 10f64.powi(-k)).collect()
}
