//! Real-time propagation `ψ(t) = e^{-Ht} ψ₀` by the Cayley-transform
//! Laguerre series: with `C = H (H+I)^{-1}`,
//!
//! ```text
//! ψ_m(t) = ψ₀ + H Σ_{p=0}^m (L_{p+1}(t) - L_p(t)) u_p,
//! u_0 = (H+I)^{-1} ψ₀,  u_{p+1} = C u_p ,
//! ```
//!
//! which separates the space and time variables: all solves happen once,
//! evaluation at any `t` is a linear combination. `H` must be symmetric
//! positive definite; generators that are not (master-equation operators)
//! belong to the global space-time path instead.

use crate::algebra::{add_tt, add_tt_matrix, mpo_apply};
use crate::decompose::{tt_round, TruncationPolicy};
use crate::dynamics::laguerre::laguerre_eval;
use crate::dynamics::linsolve::{tt_linsolve, SolveOptions};
use crate::error::{Error, Result};
use crate::generators::{samples_to_qtt, RankReport};
use crate::tensor::{TtMatrix, TtTensor};

/// Truncated Laguerre series: the operator, the initial state and the
/// coefficient tensors `u_0 … u_m`, each rounded at the stored tolerance.
#[derive(Debug, Clone)]
pub struct LaguerreSeries {
    h: TtMatrix,
    psi0: TtTensor,
    terms: Vec<TtTensor>,
    eps: f64,
}

impl LaguerreSeries {
    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn terms(&self) -> &[TtTensor] {
        &self.terms
    }

    pub fn initial_state(&self) -> &TtTensor {
        &self.psi0
    }

    pub fn operator(&self) -> &TtMatrix {
        &self.h
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Bond-rank report per coefficient tensor.
    pub fn term_ranks(&self) -> Vec<RankReport> {
        self.terms.iter().map(RankReport::of_tt).collect()
    }
}

/// Build `u_0 … u_m` by the resolvent recursion; every solve targets the
/// shifted operator `H + I` and every term is rounded at `eps`.
pub fn cayley_series(
    h: &TtMatrix,
    psi0: &TtTensor,
    m: usize,
    eps: f64,
    solver: &SolveOptions,
) -> Result<LaguerreSeries> {
    if h.col_shape() != psi0.shape() {
        return Err(Error::ShapeMismatch {
            context: "cayley_series",
            left: h.col_shape().dims().to_vec(),
            right: psi0.shape().dims().to_vec(),
        });
    }
    let shifted = add_tt_matrix(h, &TtMatrix::identity(h.col_shape()))?;
    let shifted = crate::decompose::tt_round_matrix(&shifted, &TruncationPolicy::with_epsilon(1e-14))?;
    let round = TruncationPolicy::with_epsilon(eps);

    let mut terms = Vec::with_capacity(m + 1);
    let (u0, _) = tt_linsolve(&shifted, psi0, solver)?;
    terms.push(tt_round(&u0, &round)?);
    for _ in 0..m {
        let prev = terms.last().unwrap();
        // u_{p+1} = H (H+I)^{-1} u_p.
        let (v, _) = tt_linsolve(&shifted, prev, solver)?;
        let next = mpo_apply(h, &v)?;
        terms.push(tt_round(&next, &round)?);
    }
    Ok(LaguerreSeries { h: h.clone(), psi0: psi0.clone(), terms, eps })
}

/// Evaluate `ψ_m(t)`: the Laguerre differences weight the stored terms,
/// `H` is applied once, and the result gets one final rounding pass at the
/// series tolerance (the accumulation itself rounds at `eps/(m+2)` so the
/// final pass controls the error).
pub fn cayley_apply(series: &LaguerreSeries, t: f64) -> Result<TtTensor> {
    let m = series.order();
    let lag = laguerre_eval(m + 1, t)?;
    let fine = TruncationPolicy::with_epsilon(series.eps / (m as f64 + 2.0));
    let mut acc: Option<TtTensor> = None;
    for (p, u) in series.terms.iter().enumerate() {
        let w = lag[p + 1] - lag[p];
        if w == 0.0 {
            continue;
        }
        let mut term = u.clone();
        term.scale(w);
        acc = Some(match acc {
            None => term,
            Some(prev) => tt_round(&add_tt(&prev, &term)?, &fine)?,
        });
    }
    let combined = match acc {
        None => return Ok(series.psi0.clone()),
        Some(s) => s,
    };
    let hs = mpo_apply(&series.h, &combined)?;
    let sum = add_tt(series.initial_state(), &hs)?;
    tt_round(&sum, &TruncationPolicy::with_epsilon(series.eps))
}

/// Concatenate the series over a quantized time grid: the `(x, t)` tensor
/// `[ψ_m(t_0), …, ψ_m(t_{N_t-1})]` with the time digits appended after the
/// space modes (state index fastest). Returns the tensor and the rank
/// report; the time-bond ranks are the entries of `report.bonds` past the
/// space modes.
pub fn concat_time_tensor(
    series: &LaguerreSeries,
    t_grid: &[f64],
    eps: f64,
) -> Result<(TtTensor, RankReport)> {
    if !t_grid.len().is_power_of_two() || t_grid.len() < 2 {
        return Err(Error::InvalidArgument(
            "time grid length must be a power of two".into(),
        ));
    }
    let m = series.order();
    let fine = TruncationPolicy::with_epsilon(eps / (m as f64 + 2.0));
    // ψ₀ ⊗ 1_t.
    let ones_t: Vec<f64> = vec![1.0; t_grid.len()];
    let (ones_qtt, _) = samples_to_qtt(&ones_t, 2, &fine)?;
    let mut acc = series.psi0.tensor_product(&ones_qtt);
    // Σ_p (H u_p) ⊗ ΔL_p(t-grid).
    for (p, u) in series.terms.iter().enumerate() {
        let mut diffs = Vec::with_capacity(t_grid.len());
        for &t in t_grid {
            let lag = laguerre_eval(p + 1, t)?;
            diffs.push(lag[p + 1] - lag[p]);
        }
        let (time_qtt, _) = samples_to_qtt(&diffs, 2, &fine)?;
        let hu = mpo_apply(&series.h, u)?;
        let term = hu.tensor_product(&time_qtt);
        acc = tt_round(&add_tt(&acc, &term)?, &fine)?;
    }
    let rounded = tt_round(&acc, &TruncationPolicy::with_epsilon(eps))?;
    let report = RankReport::of_tt(&rounded);
    Ok((rounded, report))
}
