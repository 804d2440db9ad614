use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inputs of the gate-count and depth estimates. `alpha` defaults to uniform
/// weights over the `b` bases.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DepthParams {
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "B")]
    pub b: usize,
    pub eps: f64,
    #[serde(rename = "dW")]
    pub d_w: f64,
    #[serde(rename = "dU")]
    pub d_u: f64,
    #[serde(rename = "dK")]
    pub d_k: f64,
    pub delta: f64,
    #[serde(default)]
    pub alpha: Option<Vec<f64>>,
    #[serde(rename = "maxF", default)]
    pub max_f: f64,
}

/// Lower bounds are order estimates with every implicit constant set to 1.
/// `d_upper` is the explicit LCU plus fixed-point amplification depth.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DepthBounds {
    /// Gates for a `K`-sparse state.
    pub m_sparse: f64,
    pub d_sparse: f64,
    /// Gates for the MBR, counting `K B` dimensions.
    pub m_lower: f64,
    pub d_lower: f64,
    pub d_upper: f64,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be positive, got {v}")))
    }
}

/// `(X ln(1/ε) / lnln X + n, X ln(1/ε) / (ln X lnln X) + n)`. The `X` term is
/// dropped while `lnln X ≤ 0` (`X ≤ e`), where the order expression has no meaning.
#[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must take the early return
fn order_pair(x: f64, n: f64, log_inv_eps: f64) -> (f64, f64) {
    let ll = x.ln().ln();
    if !(ll > 0.0) {
        return (n, n);
    }
    (x * log_inv_eps / ll + n, x * log_inv_eps / (x.ln() * ll) + n)
}

pub fn depth_bounds(p: &DepthParams) -> Result<DepthBounds> {
    if p.n == 0 || p.k == 0 || p.b == 0 {
        return Err(Error::invalid("n, K and B must be positive"));
    }
    positive("eps", p.eps)?;
    if p.eps > 1.0 {
        return Err(Error::invalid(format!("eps = {} above 1 makes ln(1/eps) negative", p.eps)));
    }
    positive("delta", p.delta)?;
    if p.delta > 0.1 {
        return Err(Error::invalid(format!("delta = {} above 0.1", p.delta)));
    }
    for (name, v) in [("dW", p.d_w), ("dU", p.d_u), ("dK", p.d_k)] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::invalid(format!("{name} must be nonnegative, got {v}")));
        }
    }
    if !(0.0..=1.0).contains(&p.max_f) {
        return Err(Error::invalid(format!("maxF = {} outside [0, 1]", p.max_f)));
    }
    let alpha = match &p.alpha {
        Some(a) if a.len() != p.b => return Err(Error::invalid(format!("{} weights for B = {}", a.len(), p.b))),
        Some(a) => a.clone(),
        None => vec![1.0; p.b],
    };
    if alpha.iter().any(|w| !(*w >= 0.0 && w.is_finite())) || alpha.iter().all(|w| *w == 0.0) {
        return Err(Error::invalid("alpha must be nonnegative, finite and not all zero"));
    }
    let l1: f64 = alpha.iter().sum();
    let l2sq: f64 = alpha.iter().map(|w| w * w).sum();
    let ratio = l1 * l1 / l2sq;
    let max_f = if p.b == 1 { 0.0 } else { p.max_f };

    let log_inv_eps = (1.0 / p.eps).ln();
    let n = p.n as f64;
    let (m_sparse, d_sparse) = order_pair(p.k as f64, n, log_inv_eps);
    let (m_lower, d_lower) = order_pair((p.k * p.b) as f64, n, log_inv_eps);
    let d_upper = p.d_w
        + 2.0 * (p.d_u + p.d_k) * (p.b as f64).sqrt() * (2.0 / p.delta).ln() * ratio * (1.0 - max_f / 2.0 * (ratio + 1.0));
    Ok(DepthBounds { m_sparse, d_sparse, m_lower, d_lower, d_upper })
}
