//! Logarithmic-cost 1-D integration: the rectangle rule evaluated as a
//! scalar product of two compressed QTT vectors,
//! `∫ w f dx ≈ h Σ w(x_i) f(x_i) = h ⟨W, F⟩`.
//!
//! Sampling is `O(N)`; once both factors are compressed, the scalar
//! product costs `O(L)` in the number of quantization levels.

use crate::algebra::scalar_product_tt;
use crate::decompose::TruncationPolicy;
use crate::error::Result;
use crate::generators::{samples_to_qtt, Grid1D, RankReport, SamplingRule};

/// Piecewise windowed oscillation on `[0, 10]`: on the first half of each
/// of 16 blocks the value is `x + a_k sin(100 x)` with
/// `a_k = 0.3 + 0.05 (k-1)`, on the second half it is zero. Block
/// boundaries are resolved left-closed.
pub fn f3(x: f64) -> f64 {
    const PIECES: usize = 16;
    if !(0.0..10.0).contains(&x) {
        return 0.0;
    }
    let s = x * PIECES as f64 / 10.0;
    let k = (s.floor() as usize).min(PIECES - 1);
    if s - (k as f64) < 0.5 {
        let a = 0.3 + 0.05 * k as f64;
        x + a * (100.0 * x).sin()
    } else {
        0.0
    }
}

/// Fresnel-type oscillation `(x+1) sin(100 (x+1)²)` on `[0, 1]`.
pub fn f4(x: f64) -> f64 {
    (x + 1.0) * (100.0 * (x + 1.0) * (x + 1.0)).sin()
}

/// Outcome of one QTT quadrature run.
#[derive(Debug, Clone)]
pub struct QuadratureResult {
    pub value: f64,
    pub step: f64,
    pub rank_f: RankReport,
    pub rank_w: RankReport,
    /// `2 ε ‖W‖ ‖F‖ h`: worst-case contribution of the two compressions.
    pub compression_bound: f64,
    /// Sample-based estimate of the rectangle-rule discretization error
    /// (midpoint: `A·max|Δ²s|/24`; left rule: `A·max|Δs|/2`).
    pub discretization_estimate: f64,
}

/// Integrate `w·f` over `[0, upper]` with `N = q^L` samples: both sample
/// vectors are folded, compressed at `eps`, and contracted.
pub fn integrate_qtt(
    f: impl Fn(f64) -> f64,
    w: impl Fn(f64) -> f64,
    upper: f64,
    levels: usize,
    q: usize,
    eps: f64,
    rule: SamplingRule,
) -> Result<QuadratureResult> {
    let n = q.pow(levels as u32);
    let grid = Grid1D::over_interval(0.0, upper, n, rule);
    let h = grid.step();
    let fs = grid.samples(&f);
    let ws = grid.samples(&w);
    let policy = TruncationPolicy::new(Some(eps.max(0.0)), None)?;
    let (tf, rank_f) = samples_to_qtt(&fs, q, &policy)?;
    let (tw, rank_w) = samples_to_qtt(&ws, q, &policy)?;
    let value = h * scalar_product_tt(&tw, &tf)?;

    let norm_f = fs.iter().map(|v| v * v).sum::<f64>().sqrt();
    let norm_w = ws.iter().map(|v| v * v).sum::<f64>().sqrt();
    let compression_bound = 2.0 * eps * norm_f * norm_w * h;

    let prod: Vec<f64> = fs.iter().zip(&ws).map(|(a, b)| a * b).collect();
    let discretization_estimate = match rule {
        SamplingRule::Midpoint => {
            let mut curv: f64 = 0.0;
            for i in 1..n - 1 {
                curv = curv.max((prod[i + 1] - 2.0 * prod[i] + prod[i - 1]).abs());
            }
            upper * curv / 24.0
        }
        SamplingRule::LeftEndpoint => {
            let mut slope: f64 = 0.0;
            for i in 0..n - 1 {
                slope = slope.max((prod[i + 1] - prod[i]).abs());
            }
            upper * slope / 2.0
        }
    };
    Ok(QuadratureResult {
        value,
        step: h,
        rank_f,
        rank_w,
        compression_bound,
        discretization_estimate,
    })
}

/// One row of the benchmark rank table.
#[derive(Debug, Clone)]
pub struct RankTableRow {
    pub function: String,
    pub levels: usize,
    pub n: usize,
    pub avg_rank: f64,
    pub max_rank: usize,
    pub value: f64,
}

/// Average/max QTT ranks (mean over the internal bonds `r_1 … r_{L-1}`,
/// one decimal) and quadrature values for a function family.
pub fn rank_table(
    functions: &[(&str, fn(f64) -> f64, f64)],
    levels_list: &[usize],
    eps: f64,
) -> Result<Vec<RankTableRow>> {
    let mut rows = Vec::new();
    for &(name, f, upper) in functions {
        for &levels in levels_list {
            let r = integrate_qtt(f, |_| 1.0, upper, levels, 2, eps, SamplingRule::Midpoint)?;
            rows.push(RankTableRow {
                function: name.to_string(),
                levels,
                n: 1usize << levels,
                avg_rank: (r.rank_f.average * 10.0).round() / 10.0,
                max_rank: r.rank_f.max,
                value: r.value,
            });
        }
    }
    Ok(rows)
}

/// Exact integral of [`f4`] over `[0, 1]` via the substitution
/// `u = (x+1)²`: `(cos 100 - cos 400)/200`.
pub fn f4_exact_integral() -> f64 {
    (100f64.cos() - 400f64.cos()) / 200.0
}

/// Exact integral of [`f3`] over `[0, 10]`: per-piece antiderivatives
/// `x²/2 - a_k cos(100x)/100` over the active half-blocks.
pub fn f3_exact_integral() -> f64 {
    const PIECES: usize = 16;
    let mut total = 0.0;
    for k in 0..PIECES {
        let a = 10.0 * k as f64 / PIECES as f64;
        let b = 10.0 * (k as f64 + 0.5) / PIECES as f64;
        let amp = 0.3 + 0.05 * k as f64;
        total += (b * b - a * a) / 2.0 + amp * ((100.0 * a).cos() - (100.0 * b).cos()) / 100.0;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_integrand_is_exact_at_any_level() {
        for levels in [4usize, 9, 14] {
            let r = integrate_qtt(|_| 1.0, |_| 1.0, 1.0, levels, 2, 1e-10, SamplingRule::Midpoint)
                .unwrap();
            // Exact up to the round-off of the normalized rank-1 cores.
            assert!((r.value - 1.0).abs() < 1e-12);
            assert_eq!(r.rank_f.max, 1);
        }
    }

    #[test]
    fn fresnel_benchmark_matches_closed_form() {
        let exact = f4_exact_integral();
        let r = integrate_qtt(f4, |_| 1.0, 1.0, 17, 2, 1e-6, SamplingRule::Midpoint).unwrap();
        assert!((r.value - exact).abs() < 5e-5, "value {} vs exact {exact}", r.value);
    }

    #[test]
    fn windowed_benchmark_matches_closed_form() {
        let exact = f3_exact_integral();
        let r = integrate_qtt(f3, |_| 1.0, 10.0, 16, 2, 1e-6, SamplingRule::Midpoint).unwrap();
        assert!((r.value - exact).abs() < 5e-5, "value {} vs exact {exact}", r.value);
        assert!((3.6f64 - r.rank_f.average).abs() <= 1.5, "avg rank {}", r.rank_f.average);
    }

    #[test]
    fn zero_tolerance_equals_plain_rectangle_sum() {
        let levels = 10;
        let n = 1usize << levels;
        let grid = Grid1D::over_interval(0.0, 1.0, n, SamplingRule::Midpoint);
        let h = grid.step();
        let direct: f64 = grid.samples(f4).iter().sum::<f64>() * h;
        let r = integrate_qtt(f4, |_| 1.0, 1.0, levels, 2, 0.0, SamplingRule::Midpoint).unwrap();
        assert!((r.value - direct).abs() <= 1e-12 * direct.abs().max(1.0));
    }

    #[test]
    fn value_stable_under_one_sided_rounding() {
        let tight = integrate_qtt(f4, f3, 1.0, 12, 2, 1e-12, SamplingRule::Midpoint).unwrap();
        let loose = integrate_qtt(f4, f3, 1.0, 12, 2, 1e-5, SamplingRule::Midpoint).unwrap();
        assert!((tight.value - loose.value).abs() <= loose.compression_bound.max(1e-10));
    }

    #[test]
    fn refinement_decay_for_lipschitz_integrand() {
        // ∫₀¹ |x - 1/3| dx = 5/18; successive level refinements decay with
        // log2 slope at least 0.9.
        let f = |x: f64| (x - 1.0 / 3.0).abs();
        let exact = 5.0 / 18.0;
        let mut values = Vec::new();
        for levels in 8..=14 {
            let r =
                integrate_qtt(f, |_| 1.0, 1.0, levels, 2, 1e-12, SamplingRule::Midpoint).unwrap();
            values.push(r.value);
        }
        let mut slopes = Vec::new();
        for pair in values.windows(2) {
            let e0 = (pair[0] - exact).abs();
            let e1 = (pair[1] - exact).abs();
            if e1 > 1e-14 {
                slopes.push((e0 / e1).log2());
            }
        }
        let avg = slopes.iter().sum::<f64>() / slopes.len() as f64;
        assert!(avg >= 0.9, "slope {avg}");
    }

    #[test]
    fn left_rule_differs_at_first_order() {
        let mid = integrate_qtt(f4, |_| 1.0, 1.0, 12, 2, 1e-10, SamplingRule::Midpoint).unwrap();
        let left =
            integrate_qtt(f4, |_| 1.0, 1.0, 12, 2, 1e-10, SamplingRule::LeftEndpoint).unwrap();
        let exact = f4_exact_integral();
        let (e_mid, e_left) = ((mid.value - exact).abs(), (left.value - exact).abs());
        assert!(e_left > 10.0 * e_mid, "left {e_left:.3e} vs mid {e_mid:.3e}");
    }

    #[test]
    fn rank_table_shape() {
        let fns: &[(&str, fn(f64) -> f64, f64)] = &[("f4", f4, 1.0)];
        let rows = rank_table(fns, &[12, 13], 1e-6).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].n, 4096);
        assert!(rows[0].avg_rank >= 1.0);
    }
}
