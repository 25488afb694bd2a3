//! Laguerre polynomials by the three-term recurrence.

use crate::error::{Error, Result};

/// Values `L_0(t), …, L_{p_max}(t)` from
/// `(p+1) L_{p+1} = (2p+1-t) L_p - p L_{p-1}` with `L_0 = 1`,
/// `L_1 = 1 - t`. Guarded against overflow of the recurrence (safe for
/// `t <= 400`, `p <= 128` in double precision).
pub fn laguerre_eval(p_max: usize, t: f64) -> Result<Vec<f64>> {
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("laguerre argument {t} must be >= 0")));
    }
    let mut out = Vec::with_capacity(p_max + 1);
    out.push(1.0);
    if p_max == 0 {
        return Ok(out);
    }
    out.push(1.0 - t);
    for p in 1..p_max {
        let lp = out[p];
        let lm = out[p - 1];
        let next = ((2.0 * p as f64 + 1.0 - t) * lp - p as f64 * lm) / (p as f64 + 1.0);
        if !next.is_finite() || next.abs() > 1e120 {
            return Err(Error::InvalidArgument(format!(
                "laguerre recurrence overflow at degree {} for t = {t}",
                p + 1
            )));
        }
        out.push(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degree_closed_forms() {
        // L_0 ≡ 1 for a spread of arguments.
        for &t in &[0.0, 0.5, 3.0, 150.0] {
            assert_eq!(laguerre_eval(0, t).unwrap()[0], 1.0);
        }
        // L_2(t) = t²/2 - 2t + 1, so L_2(2) = -1.
        let v = laguerre_eval(2, 2.0).unwrap();
        assert!((v[2] + 1.0).abs() < 1e-15);
        // L_1(t) = 1 - t.
        assert!((laguerre_eval(1, 0.7).unwrap()[1] - 0.3).abs() < 1e-15);
        // L_p(0) = 1 for all p.
        let v = laguerre_eval(20, 0.0).unwrap();
        assert!(v.iter().all(|&x| (x - 1.0).abs() < 1e-12));
    }

    /// Gauss–Laguerre nodes/weights by Newton iteration on the recurrence;
    /// an independent quadrature oracle for the orthogonality relation
    /// ∫₀^∞ e^{-t} L_p L_q dt = δ_pq.
    fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let mut x = 0.0f64;
        for i in 0..n {
            // Standard initial guesses (Stroud & Secrest).
            x = if i == 0 {
                3.0 / (1.0 + 2.4 * n as f64)
            } else if i == 1 {
                x + 15.0 / (1.0 + 2.5 * n as f64)
            } else {
                let ai = i as f64 - 1.0;
                x + (1.0 + 2.55 * ai) / (1.9 * ai) * (x - nodes[i - 2])
            };
            for _ in 0..100 {
                let l = laguerre_eval(n, x).unwrap();
                // L'_n(x) = n (L_n(x) - L_{n-1}(x)) / x.
                let dp = n as f64 * (l[n] - l[n - 1]) / x;
                let dx = l[n] / dp;
                x -= dx;
                if dx.abs() < 1e-15 * x.abs().max(1.0) {
                    break;
                }
            }
            let l = laguerre_eval(n, x).unwrap();
            let dp = n as f64 * (l[n] - l[n - 1]) / x;
            nodes.push(x);
            weights.push(1.0 / (x * dp * dp));
        }
        (nodes, weights)
    }

    #[test]
    fn orthogonality_against_gauss_laguerre_oracle() {
        let (nodes, weights) = gauss_laguerre(64);
        // Degree check: the rule integrates polynomials up to degree 127.
        let approx: f64 = nodes.iter().zip(&weights).map(|(&x, &w)| w * x * x).sum();
        assert!((approx - 2.0).abs() < 1e-10, "∫ t² e^-t = 2, got {approx}");
        for p in 0..=10usize {
            for q in 0..=10usize {
                let mut s = 0.0;
                for (&x, &w) in nodes.iter().zip(&weights) {
                    let l = laguerre_eval(10, x).unwrap();
                    s += w * l[p] * l[q];
                }
                let expect = if p == q { 1.0 } else { 0.0 };
                assert!((s - expect).abs() < 1e-10, "p={p} q={q}: {s}");
            }
        }
    }

    #[test]
    fn growth_guard_reports_overflow() {
        // Far outside the documented envelope the recurrence overflows and
        // must be reported rather than returning garbage.
        assert!(laguerre_eval(128, 400.0).is_ok());
        assert!(laguerre_eval(3000, 4000.0).is_err());
    }
}
