//! SVD-based conversion between formats and rank truncation: TT-SVD,
//! TT rounding, HOSVD, RHOSVD and the exact canonical-to-TT embedding.
//!
//! Truncation follows the error-balanced rule: at every SVD step the
//! trailing singular values are dropped while
//! `sqrt(Σ_{j>r} σ_j²) <= (ε/√(d-1)) ‖x‖_F`, which keeps the accumulated
//! relative Frobenius error at most `ε`.

use crate::error::{Error, Result};
use crate::linalg::{qr, svd, truncation_rank, Matrix};
use crate::tensor::{
    check_budget, CanonicalMatrix, CanonicalTensor, CoreOrtho, DenseTensor, Shape, TtCore,
    TtMatCore, TtMatrix, TtTensor, TuckerTensor,
};

pub use crate::linalg::Svd;

/// Frobenius-norm truncation policy: a relative tolerance, a per-bond rank
/// cap, or both (they cannot both be absent).
#[derive(Debug, Clone, Copy)]
pub struct TruncationPolicy {
    epsilon: Option<f64>,
    max_rank: Option<usize>,
}

impl TruncationPolicy {
    pub fn new(epsilon: Option<f64>, max_rank: Option<usize>) -> Result<Self> {
        if epsilon.is_none() && max_rank.is_none() {
            return Err(Error::InvalidArgument(
                "truncation policy needs a tolerance or a rank cap".into(),
            ));
        }
        if let Some(e) = epsilon {
            if !(e >= 0.0) {
                return Err(Error::InvalidArgument(format!("negative tolerance {e}")));
            }
        }
        if let Some(r) = max_rank {
            if r == 0 {
                return Err(Error::InvalidArgument("rank cap must be positive".into()));
            }
        }
        Ok(TruncationPolicy { epsilon, max_rank })
    }

    pub fn with_epsilon(epsilon: f64) -> Self {
        TruncationPolicy::new(Some(epsilon), None).expect("valid")
    }

    pub fn with_max_rank(max_rank: usize) -> Self {
        TruncationPolicy::new(None, Some(max_rank)).expect("valid")
    }

    pub fn and_max_rank(mut self, max_rank: usize) -> Self {
        self.max_rank = Some(max_rank);
        self
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon.unwrap_or(0.0)
    }

    pub fn max_rank(&self) -> Option<usize> {
        self.max_rank
    }

    /// Per-step absolute tail budget for a chain of `steps` truncating SVDs
    /// on a tensor of Frobenius norm `norm`.
    fn step_delta(&self, norm: f64, steps: usize) -> f64 {
        self.epsilon() * norm / (steps.max(1) as f64).sqrt()
    }
}

/// TT-SVD of a dense tensor: sequential truncated SVDs of the unfoldings.
/// Bond rank `p` never exceeds the rank of the `p`-th unfolding, and the
/// result satisfies `‖x - result‖_F <= ε ‖x‖_F`.
pub fn tt_svd(x: &DenseTensor, policy: &TruncationPolicy) -> Result<TtTensor> {
    let dims = x.shape().dims().to_vec();
    let d = dims.len();
    let norm = x.frobenius_norm();
    let delta = policy.step_delta(norm, d.saturating_sub(1));

    let mut cores = Vec::with_capacity(d);
    let mut ortho = Vec::with_capacity(d);
    let mut r_prev = 1usize;
    let mut carry = x.values().to_vec();
    for &n in dims.iter().take(d - 1) {
        let rest = carry.len() / (r_prev * n);
        let m = Matrix::from_vec(r_prev * n, rest, carry);
        let s = svd(&m)?;
        let r = s.truncation_rank(delta, policy.max_rank).max(1);
        let mut u = Matrix::zeros(m.rows, r);
        for j in 0..r {
            u.col_mut(j).copy_from_slice(s.u.col(j));
        }
        cores.push(TtCore::from_unfold_left(&u, r_prev, n));
        ortho.push(CoreOrtho::Left);
        let mut next = Matrix::zeros(r, rest);
        for jj in 0..rest {
            for i in 0..r {
                next.set(i, jj, s.sigma[i] * s.vt.get(i, jj));
            }
        }
        carry = next.data;
        r_prev = r;
    }
    cores.push(TtCore { left: r_prev, mode: dims[d - 1], right: 1, data: carry });
    ortho.push(CoreOrtho::None);
    TtTensor::new_with_ortho(cores, ortho)
}

/// Right-orthogonalize every core except the first, in place. Afterwards
/// the tensor norm is the Frobenius norm of the first core.
pub(crate) fn right_orthogonalize(x: &mut TtTensor) -> Result<()> {
    let d = x.order();
    for l in (1..d).rev() {
        let core = x.core(l);
        let g = core.unfold_right();
        // LQ of g through QR of its transpose: g = rᵀ qᵀ with qᵀ having
        // orthonormal rows.
        let f = qr(&g.transpose());
        let q = f.q();
        let r = f.r();
        let k = q.cols;
        let mode = core.mode;
        let right = core.right;
        x.replace_core(l, TtCore::from_unfold_right(&q.transpose(), mode, right), CoreOrtho::Right);
        // Fold rᵀ (left × k) into the previous core.
        let prev = x.core(l - 1);
        let merged = prev.unfold_left().matmul(&r.transpose());
        let new_prev = TtCore::from_unfold_left(&merged, prev.left, prev.mode);
        debug_assert_eq!(new_prev.right, k);
        x.replace_core(l - 1, new_prev, CoreOrtho::None);
    }
    Ok(())
}

/// SVD-based TT rounding: right-to-left orthogonalization, then a
/// left-to-right truncating sweep. Ranks never increase; the relative
/// Frobenius error is at most the policy tolerance.
pub fn tt_round(x: &TtTensor, policy: &TruncationPolicy) -> Result<TtTensor> {
    let d = x.order();
    let mut y = x.clone();
    if d == 1 {
        return Ok(y);
    }
    right_orthogonalize(&mut y)?;
    let norm = y.core(0).unfold_left().frobenius_norm();
    let delta = policy.step_delta(norm, d - 1);

    for l in 0..d - 1 {
        let m = y.core(l).unfold_left();
        let s = svd(&m)?;
        let r = s.truncation_rank(delta, policy.max_rank).max(1);
        let mut u = Matrix::zeros(m.rows, r);
        for j in 0..r {
            u.col_mut(j).copy_from_slice(s.u.col(j));
        }
        let (left, mode) = (y.core(l).left, y.core(l).mode);
        y.replace_core(l, TtCore::from_unfold_left(&u, left, mode), CoreOrtho::Left);
        let mut carry = Matrix::zeros(r, s.vt.cols);
        for jj in 0..s.vt.cols {
            for i in 0..r {
                carry.set(i, jj, s.sigma[i] * s.vt.get(i, jj));
            }
        }
        let next = y.core(l + 1);
        let merged = carry.matmul(&next.unfold_right());
        let new_next = TtCore::from_unfold_right(&merged, next.mode, next.right);
        y.replace_core(l + 1, new_next, CoreOrtho::None);
    }
    Ok(y)
}

/// Rounding of a TT operator through its paired-mode tensor view.
pub fn tt_round_matrix(a: &TtMatrix, policy: &TruncationPolicy) -> Result<TtMatrix> {
    let rounded = tt_round(&a.to_paired_tt(), policy)?;
    TtMatrix::from_paired_tt(&rounded, a.row_shape(), a.col_shape())
}

/// Higher-order SVD: per-mode truncated SVDs of the unfoldings followed by
/// the core projection. Satisfies the quasi-optimality bound
/// `‖x - result‖ <= ε √d ‖x‖` (per-mode budget `ε/√d`).
pub fn hosvd(x: &DenseTensor, policy: &TruncationPolicy) -> Result<TuckerTensor> {
    let d = x.shape().order();
    let norm = x.frobenius_norm();
    let delta = policy.epsilon() * norm / (d as f64).sqrt();
    let mut factors = Vec::with_capacity(d);
    for p in 0..d {
        let m = x.unfold_mode(p);
        let s = svd(&m)?;
        let r = truncation_rank(&s.sigma, delta, policy.max_rank).max(1);
        let mut u = Matrix::zeros(m.rows, r);
        for j in 0..r {
            u.col_mut(j).copy_from_slice(s.u.col(j));
        }
        factors.push(u);
    }
    let mut core = x.clone();
    for (p, u) in factors.iter().enumerate() {
        core = core.mode_multiply_transposed(p, u);
    }
    TuckerTensor::new(x.shape().clone(), core, factors, true)
}

/// Reduced HOSVD of a canonical tensor.
#[derive(Debug)]
pub struct RhosvdResult {
    pub tucker: TuckerTensor,
    /// Provable Frobenius bound on `‖x - tucker‖`: `Σ_l √R τ_l` with `τ_l`
    /// the discarded singular-value tail of the norm-balanced mode-`l`
    /// factor matrix.
    pub tail_bound: f64,
}

/// RHOSVD: Tucker factors are the dominant left singular vectors of the
/// norm-balanced factor matrices; the core is the projected canonical sum.
/// The dense tensor is never formed (only the `r_1 ⋯ r_d` core is).
pub fn rhosvd(x: &CanonicalTensor, policy: &TruncationPolicy) -> Result<RhosvdResult> {
    let d = x.shape().order();
    let rank = x.rank();
    if rank == 0 {
        return Err(Error::InvalidArgument("RHOSVD needs at least one canonical term".into()));
    }
    let mut col_norms = vec![vec![0.0f64; rank]; d];
    for (l, norms) in col_norms.iter_mut().enumerate() {
        for (a, norm) in norms.iter_mut().enumerate() {
            *norm = x.factor(l).col(a).iter().map(|v| v * v).sum::<f64>().sqrt();
        }
    }
    let norm = x.norm();
    let budget = policy.epsilon() * norm / d as f64;
    let sqrt_rank = (rank as f64).sqrt();

    let mut factors = Vec::with_capacity(d);
    let mut tail_bound = 0.0;
    for l in 0..d {
        let f = x.factor(l);
        let mut scaled = Matrix::zeros(f.rows, rank);
        for a in 0..rank {
            let mut w = 1.0;
            for (m, norms) in col_norms.iter().enumerate() {
                if m != l {
                    w *= norms[a];
                }
            }
            let src = f.col(a);
            let dst = scaled.col_mut(a);
            for (o, v) in dst.iter_mut().zip(src) {
                *o = v * w;
            }
        }
        let s = svd(&scaled)?;
        let delta = if policy.epsilon() > 0.0 { budget / sqrt_rank } else { 0.0 };
        let r = truncation_rank(&s.sigma, delta, policy.max_rank).max(1).min(f.rows);
        let tail: f64 = s.sigma[r.min(s.sigma.len())..].iter().map(|v| v * v).sum::<f64>().sqrt();
        tail_bound += sqrt_rank * tail;
        let mut u = Matrix::zeros(f.rows, r);
        for j in 0..r.min(s.u.cols) {
            u.col_mut(j).copy_from_slice(s.u.col(j));
        }
        factors.push(u);
    }

    // Projected core: Σ_α ⊗_l (U_lᵀ A^(l)_α), materialized densely.
    let ranks: Vec<usize> = factors.iter().map(|u| u.cols).collect();
    let core_shape = Shape::new(ranks)?;
    check_budget(core_shape.total())?;
    let mut core = DenseTensor::zeros(core_shape);
    for a in 0..rank {
        let mut acc: Vec<f64> = factors[0].transpose().matvec(x.factor(0).col(a));
        for (l, u) in factors.iter().enumerate().skip(1) {
            let proj = u.transpose().matvec(x.factor(l).col(a));
            let mut next = Vec::with_capacity(acc.len() * proj.len());
            for &c in &proj {
                for &v in &acc {
                    next.push(v * c);
                }
            }
            acc = next;
        }
        for (o, v) in core.values_mut().iter_mut().zip(&acc) {
            *o += *v;
        }
    }
    let tucker = TuckerTensor::new(x.shape().clone(), core, factors, true)?;
    Ok(RhosvdResult { tucker, tail_bound })
}

/// Exact embedding of a canonical tensor into TT form with all internal
/// bond ranks equal to the canonical rank (round afterwards to compress).
pub fn canonical_to_tt(x: &CanonicalTensor) -> Result<TtTensor> {
    let d = x.shape().order();
    let r = x.rank();
    if r == 0 {
        return Ok(TtTensor::zero(x.shape()));
    }
    if d == 1 {
        let n = x.shape().dim(0);
        let mut data = vec![0.0; n];
        for a in 0..r {
            for (i, v) in data.iter_mut().enumerate() {
                *v += x.factor(0).get(i, a);
            }
        }
        return TtTensor::new(vec![TtCore { left: 1, mode: n, right: 1, data }]);
    }
    let mut cores = Vec::with_capacity(d);
    for l in 0..d {
        let f = x.factor(l);
        let n = f.rows;
        let core = if l == 0 {
            let mut c = TtCore::zeros(1, n, r);
            for a in 0..r {
                for i in 0..n {
                    c.set(0, i, a, f.get(i, a));
                }
            }
            c
        } else if l == d - 1 {
            let mut c = TtCore::zeros(r, n, 1);
            for a in 0..r {
                for i in 0..n {
                    c.set(a, i, 0, f.get(i, a));
                }
            }
            c
        } else {
            let mut c = TtCore::zeros(r, n, r);
            for a in 0..r {
                for i in 0..n {
                    c.set(a, i, a, f.get(i, a));
                }
            }
            c
        };
        cores.push(core);
    }
    TtTensor::new(cores)
}

/// Exact embedding of a canonical operator into TT-operator form
/// (diagonal bond structure, ranks equal to the term count; the term
/// weights are folded into the first mode).
pub fn canonical_matrix_to_tt_matrix(op: &CanonicalMatrix) -> Result<TtMatrix> {
    let d = op.row_shape().order();
    let r = op.rank();
    if r == 0 {
        return Err(Error::InvalidArgument("zero-term canonical operator".into()));
    }
    let mut cores = Vec::with_capacity(d);
    for l in 0..d {
        let (m, n) = (op.row_shape().dim(l), op.col_shape().dim(l));
        let (left, right) = if d == 1 {
            (1, 1)
        } else if l == 0 {
            (1, r)
        } else if l == d - 1 {
            (r, 1)
        } else {
            (r, r)
        };
        let mut c = TtMatCore::zeros(left, m, n, right);
        for k in 0..r {
            let w = if l == 0 { op.weights()[k] } else { 1.0 };
            let blk = op.term_factor(l, k);
            let (a, b) = if d == 1 {
                (0, 0)
            } else if l == 0 {
                (0, k)
            } else if l == d - 1 {
                (k, 0)
            } else {
                (k, k)
            };
            for j in 0..n {
                for i in 0..m {
                    let v = c.get(a, i, j, b) + w * blk.get(i, j);
                    c.set(a, i, j, b, v);
                }
            }
        }
        cores.push(c);
    }
    TtMatrix::new(cores)
}

/// Plain CP-ALS on a small dense core: the optional rank-reduction pass
/// that represents a Tucker core in canonical form. Deterministic seeding
/// from the leading HOSVD vectors; intended for desk-scale cores only.
pub fn core_to_canonical_als(
    core: &DenseTensor,
    rank: usize,
    sweeps: usize,
) -> Result<CanonicalTensor> {
    let d = core.shape().order();
    if rank == 0 {
        return Err(Error::InvalidArgument("als needs a positive target rank".into()));
    }
    let mut factors: Vec<Matrix> = Vec::with_capacity(d);
    for p in 0..d {
        let s = svd(&core.unfold_mode(p))?;
        let n = core.shape().dim(p);
        let mut f = Matrix::zeros(n, rank);
        for j in 0..rank {
            if j < s.u.cols && s.sigma[j] > 0.0 {
                f.col_mut(j).copy_from_slice(s.u.col(j));
            } else {
                f.set(j % n, j, 1.0);
            }
        }
        factors.push(f);
    }
    for _ in 0..sweeps {
        for p in 0..d {
            // min ‖X_(p) - F_p K_pᵀ‖ with K_p the Khatri-Rao product of the
            // other factors; normal equations on the rank × rank Gram.
            let mut gram = Matrix::from_fn(rank, rank, |_, _| 1.0);
            for (m, f) in factors.iter().enumerate() {
                if m == p {
                    continue;
                }
                let g = f.transpose().matmul(f);
                for j in 0..rank {
                    for i in 0..rank {
                        let v = gram.get(i, j) * g.get(i, j);
                        gram.set(i, j, v);
                    }
                }
            }
            let np = core.shape().dim(p);
            let mut rhs = Matrix::zeros(np, rank);
            let total = core.shape().total();
            for off in 0..total {
                let idx = core.shape().multi_index(off);
                let v = core.values()[off];
                if v == 0.0 {
                    continue;
                }
                for jr in 0..rank {
                    let mut w = 1.0;
                    for (m, f) in factors.iter().enumerate() {
                        if m != p {
                            w *= f.get(idx[m], jr);
                        }
                    }
                    let t = rhs.get(idx[p], jr) + v * w;
                    rhs.set(idx[p], jr, t);
                }
            }
            let mut reg = gram.clone();
            for i in 0..rank {
                let t = reg.get(i, i) + 1e-12;
                reg.set(i, i, t);
            }
            let f = crate::linalg::lu(&reg)?;
            let sol = f.solve(&rhs.transpose());
            factors[p] = sol.transpose();
        }
    }
    CanonicalTensor::new(core.shape().clone(), factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_tt(rng: &mut ChaCha8Rng, dims: &[usize], rank: usize) -> TtTensor {
        let d = dims.len();
        let mut bonds = vec![1usize];
        for l in 1..d {
            let cap = dims[..l].iter().product::<usize>().min(dims[l..].iter().product());
            bonds.push(rank.min(cap));
        }
        bonds.push(1);
        let cores = (0..d)
            .map(|l| {
                let mut c = TtCore::zeros(bonds[l], dims[l], bonds[l + 1]);
                for v in &mut c.data {
                    *v = rng.random::<f64>() * 2.0 - 1.0;
                }
                c
            })
            .collect();
        TtTensor::new(cores).unwrap()
    }

    fn rel_err(a: &DenseTensor, b: &DenseTensor) -> f64 {
        a.sub(b).unwrap().frobenius_norm() / b.frobenius_norm().max(1e-300)
    }

    #[test]
    fn tt_svd_round_trips_random_tt() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let x = random_tt(&mut rng, &[2, 3, 4, 3], 3);
        let d = x.to_dense().unwrap();
        let y = tt_svd(&d, &TruncationPolicy::with_epsilon(1e-12)).unwrap();
        assert!(rel_err(&y.to_dense().unwrap(), &d) <= 1e-12);
    }

    #[test]
    fn exact_rank_recovery() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let x = random_tt(&mut rng, &[4, 4, 4, 4], 3);
        let expect = x.bond_ranks();
        let y = tt_svd(&x.to_dense().unwrap(), &TruncationPolicy::with_epsilon(1e-12)).unwrap();
        assert_eq!(y.bond_ranks(), expect);
        // Ranks (1, 2, 3, 1) synthetic chain round-trips exactly.
        let sizes = [(1usize, 3usize, 2usize), (2, 3, 3), (3, 4, 1)];
        let cores = sizes
            .iter()
            .map(|&(a, n, b)| {
                let mut c = TtCore::zeros(a, n, b);
                for v in &mut c.data {
                    *v = rng.random::<f64>() * 2.0 - 1.0;
                }
                c
            })
            .collect();
        let x = TtTensor::new(cores).unwrap();
        let y = tt_svd(&x.to_dense().unwrap(), &TruncationPolicy::with_epsilon(1e-12)).unwrap();
        assert_eq!(y.bond_ranks(), vec![1, 2, 3, 1]);
        assert!(rel_err(&y.to_dense().unwrap(), &x.to_dense().unwrap()) <= 1e-12);
    }

    #[test]
    fn rounding_restores_ranks_of_doubled_tensor() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let x = random_tt(&mut rng, &[3, 4, 3], 2);
        let sum = algebra::add_tt(&x, &x).unwrap();
        assert_eq!(sum.bond_ranks()[1], 2 * x.bond_ranks()[1]);
        let rounded = tt_round(&sum, &TruncationPolicy::with_epsilon(1e-12)).unwrap();
        assert_eq!(rounded.bond_ranks(), x.bond_ranks());
        let mut doubled = x.to_dense().unwrap();
        doubled.scale(2.0);
        assert!(rel_err(&rounded.to_dense().unwrap(), &doubled) <= 1e-12);
        // Left-orthogonality flags are real: Gram check on every core but
        // the last.
        for l in 0..rounded.order() - 1 {
            assert_eq!(rounded.ortho_flags()[l], CoreOrtho::Left);
            let u = rounded.core(l).unfold_left();
            let g = u.transpose().matmul(&u);
            assert!(g.sub(&Matrix::identity(u.cols)).frobenius_norm() < 1e-12);
        }
    }

    #[test]
    fn rounding_error_within_tolerance_and_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let x = random_tt(&mut rng, &[4, 4, 4, 4], 8);
        let dx = x.to_dense().unwrap();
        // Tightening eps never increases the achieved error, and ranks are
        // nonincreasing in eps (so nondecreasing as eps tightens).
        let mut last_err = f64::INFINITY;
        let mut last_rank = 0usize;
        for &eps in &[1e-1, 1e-2, 1e-3, 1e-6, 1e-12] {
            let y = tt_round(&x, &TruncationPolicy::with_epsilon(eps)).unwrap();
            let err = rel_err(&y.to_dense().unwrap(), &dx);
            assert!(err <= eps, "eps {eps:.0e}: err {err:.3e}");
            let rmax = y.max_bond_rank();
            assert!(rmax >= last_rank);
            assert!(err <= last_err + 1e-15);
            last_rank = rmax;
            last_err = err;
        }
        // Idempotence: identical ranks, error within 2 eps.
        let y = tt_round(&x, &TruncationPolicy::with_epsilon(1e-3)).unwrap();
        let yy = tt_round(&y, &TruncationPolicy::with_epsilon(1e-3)).unwrap();
        assert_eq!(y.bond_ranks(), yy.bond_ranks());
        assert!(rel_err(&yy.to_dense().unwrap(), &dx) <= 2e-3);
    }

    /// The rank-2 family ((1+εx)^{⊗d} - 1^{⊗d})/ε approximates the
    /// canonical-rank-d sum of coordinates arbitrarily well; rounding keeps
    /// rank 2 while the dense error stays at the parameter scale.
    #[test]
    fn border_rank_approximant_stays_rank_two() {
        let d = 4;
        let n = 6;
        let eps_param = 1e-6;
        let xs: Vec<f64> = (1..=n).map(|i| i as f64 / n as f64).collect();
        let ones = vec![1.0; n];
        let perturbed: Vec<f64> = xs.iter().map(|&v| 1.0 + eps_param * v).collect();
        let mut t1 = TtTensor::rank_one(&vec![perturbed; d]).unwrap();
        let mut t2 = TtTensor::rank_one(&vec![ones.clone(); d]).unwrap();
        t1.scale(1.0 / eps_param);
        t2.scale(-1.0 / eps_param);
        let approx = algebra::add_tt(&t1, &t2).unwrap();
        let rounded = tt_round(&approx, &TruncationPolicy::with_epsilon(1e-12)).unwrap();
        assert!(rounded.max_bond_rank() <= 2);
        let exact = DenseTensor::from_fn(Shape::cubic(d, n).unwrap(), |idx| {
            idx.iter().map(|&i| xs[i]).sum()
        });
        let err = rel_err(&rounded.to_dense().unwrap(), &exact);
        assert!(err < 100.0 * eps_param, "err {err:.3e}");
    }

    #[test]
    fn hosvd_finds_low_tucker_ranks() {
        // Sum of coordinates: Tucker ranks (2, 2, 2).
        let d = 3;
        let n = 16;
        let xs: Vec<f64> = (1..=n).map(|i| i as f64 / n as f64).collect();
        let x = DenseTensor::from_fn(Shape::cubic(d, n).unwrap(), |idx| {
            idx.iter().map(|&i| xs[i]).sum()
        });
        let t = hosvd(&x, &TruncationPolicy::with_epsilon(1e-10)).unwrap();
        assert_eq!(t.ranks(), vec![2, 2, 2]);
        assert!(rel_err(&t.to_dense().unwrap(), &x) < 1e-10);

        let r1 = CanonicalTensor::rank_one(&[vec![1.0, 2.0], vec![1.0, 0.5], vec![2.0, 2.0]])
            .unwrap()
            .to_dense()
            .unwrap();
        let t = hosvd(&r1, &TruncationPolicy::with_epsilon(1e-12)).unwrap();
        assert_eq!(t.ranks(), vec![1, 1, 1]);

        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let x = DenseTensor::from_fn(Shape::cubic(3, 8).unwrap(), |_| rng.random::<f64>() - 0.5);
        for &eps in &[0.5, 0.2, 0.05] {
            let t = hosvd(&x, &TruncationPolicy::with_epsilon(eps)).unwrap();
            let err = rel_err(&t.to_dense().unwrap(), &x);
            assert!(err <= eps * (3.0f64).sqrt(), "eps {eps}: err {err:.3e}");
        }
    }

    #[test]
    fn rhosvd_on_sum_of_coordinates_avoids_dense() {
        // d = 6, N = 64: the dense tensor would need 64^6 ≈ 6.9e10 entries.
        let d = 6;
        let n = 64;
        let xs: Vec<f64> = (1..=n).map(|i| i as f64 / n as f64).collect();
        let ones = vec![1.0; n];
        let mut factors = Vec::new();
        for l in 0..d {
            let mut f = Matrix::zeros(n, d);
            for a in 0..d {
                let col = if a == l { &xs } else { &ones };
                f.col_mut(a).copy_from_slice(col);
            }
            factors.push(f);
        }
        let x = CanonicalTensor::new(Shape::cubic(d, n).unwrap(), factors).unwrap();
        let r = rhosvd(&x, &TruncationPolicy::with_epsilon(1e-10)).unwrap();
        assert_eq!(r.tucker.ranks(), vec![2; 6]);
    }

    #[test]
    fn rhosvd_rank_one_exact_and_random_within_bound() {
        let x = CanonicalTensor::rank_one(&[vec![1.0, -2.0], vec![3.0, 1.0], vec![0.5, 0.25]])
            .unwrap();
        let r = rhosvd(&x, &TruncationPolicy::with_epsilon(1e-12)).unwrap();
        assert_eq!(r.tucker.ranks(), vec![1, 1, 1]);
        assert!(rel_err(&r.tucker.to_dense().unwrap(), &x.to_dense().unwrap()) < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let shape = Shape::new(vec![32, 32, 32]).unwrap();
        let factors: Vec<Matrix> = (0..3)
            .map(|_| Matrix::from_fn(32, 10, |_, _| rng.random::<f64>() * 2.0 - 1.0))
            .collect();
        let x = CanonicalTensor::new(shape, factors).unwrap();
        let r = rhosvd(&x, &TruncationPolicy::with_epsilon(1e-2)).unwrap();
        let err = r
            .tucker
            .to_dense()
            .unwrap()
            .sub(&x.to_dense().unwrap())
            .unwrap()
            .frobenius_norm();
        assert!(err <= r.tail_bound.max(1e-12), "err {err:.3e} vs bound {:.3e}", r.tail_bound);
    }

    #[test]
    fn canonical_to_tt_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let shape = Shape::new(vec![4, 5, 3]).unwrap();
        let factors: Vec<Matrix> = shape
            .dims()
            .iter()
            .map(|&n| Matrix::from_fn(n, 5, |_, _| rng.random::<f64>() * 2.0 - 1.0))
            .collect();
        let x = CanonicalTensor::new(shape, factors).unwrap();
        let t = canonical_to_tt(&x).unwrap();
        assert!(t.max_bond_rank() <= 5);
        assert!(rel_err(&t.to_dense().unwrap(), &x.to_dense().unwrap()) <= 1e-12);
        let r1 = CanonicalTensor::rank_one(&[vec![1.0, 2.0], vec![0.5, 1.0]]).unwrap();
        assert_eq!(canonical_to_tt(&r1).unwrap().max_bond_rank(), 1);
        let z = canonical_to_tt(&CanonicalTensor::zero(x.shape().clone())).unwrap();
        assert_eq!(z.max_bond_rank(), 1);
        assert_eq!(z.to_dense().unwrap().frobenius_norm(), 0.0);
    }

    #[test]
    fn core_als_recovers_a_separable_core() {
        let a = CanonicalTensor::rank_one(&[vec![1.0, 0.3, -0.2], vec![0.5, 1.0, 0.0]]).unwrap();
        let b = CanonicalTensor::rank_one(&[vec![0.1, -1.0, 0.7], vec![1.0, 0.2, 0.4]]).unwrap();
        let core = a.add(&b).unwrap().to_dense().unwrap();
        let cp = core_to_canonical_als(&core, 2, 25).unwrap();
        assert!(rel_err(&cp.to_dense().unwrap(), &core) < 1e-8);
    }
}
