//! Format-aware multilinear algebra: scalar, Hadamard and convolution
//! products, additions, TT-operator application and diagonal lifting.
//!
//! None of these operations round their result; rank bookkeeping is exact
//! (`R_1 R_2` for Hadamard, `r_1 + r_2` for addition, `r_A ⊙ r_x` for
//! operator application) and callers truncate explicitly when they want to.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::tensor::{CanonicalTensor, Shape, TtCore, TtMatCore, TtMatrix, TtTensor};

fn check_shapes(context: &'static str, a: &Shape, b: &Shape) -> Result<()> {
    if a != b {
        return Err(Error::ShapeMismatch {
            context,
            left: a.dims().to_vec(),
            right: b.dims().to_vec(),
        });
    }
    Ok(())
}

/// `⟨X, Y⟩ = Σ_k Σ_m Π_l ⟨X^(l)_k, Y^(l)_m⟩` via per-mode Gram matrices;
/// cost is linear in the mode sizes.
pub fn scalar_product_canonical(x: &CanonicalTensor, y: &CanonicalTensor) -> Result<f64> {
    check_shapes("canonical scalar product", x.shape(), y.shape())?;
    let (r1, r2) = (x.rank(), y.rank());
    if r1 == 0 || r2 == 0 {
        return Ok(0.0);
    }
    let mut gram = vec![1.0; r1 * r2];
    for l in 0..x.shape().order() {
        let xf = x.factor(l);
        let yf = y.factor(l);
        for m in 0..r2 {
            let ym = yf.col(m);
            for k in 0..r1 {
                let xk = xf.col(k);
                let dot: f64 = xk.iter().zip(ym).map(|(a, b)| a * b).sum();
                gram[k + r1 * m] *= dot;
            }
        }
    }
    Ok(gram.iter().sum())
}

/// TT scalar product `⟨X, Y⟩ = ⟨X ⊙ Y, 1⟩`, contracted core by core.
pub fn scalar_product_tt(x: &TtTensor, y: &TtTensor) -> Result<f64> {
    check_shapes("TT scalar product", x.shape(), y.shape())?;
    let mut v = Matrix::from_vec(1, 1, vec![1.0]);
    for (cx, cy) in x.cores().iter().zip(y.cores()) {
        let mut next = Matrix::zeros(cx.right, cy.right);
        for i in 0..cx.mode {
            // next += X(i)ᵀ v Y(i), slice by slice.
            let xi = cx.slice(i);
            let yi = cy.slice(i);
            let t = xi.transpose().matmul(&v).matmul(&yi);
            next.add_assign(&t);
        }
        v = next;
    }
    Ok(v.get(0, 0))
}

/// Hadamard product of canonical tensors: every term pair multiplies
/// mode-wise, so the rank is exactly `R_1 R_2` (k-major term order).
pub fn hadamard_canonical(x: &CanonicalTensor, y: &CanonicalTensor) -> Result<CanonicalTensor> {
    check_shapes("canonical hadamard", x.shape(), y.shape())?;
    let (r1, r2) = (x.rank(), y.rank());
    let d = x.shape().order();
    let mut factors = Vec::with_capacity(d);
    for l in 0..d {
        let xf = x.factor(l);
        let yf = y.factor(l);
        let n = xf.rows;
        let mut f = Matrix::zeros(n, r1 * r2);
        for k in 0..r1 {
            for m in 0..r2 {
                let dst = f.col_mut(k * r2 + m);
                for (i, v) in dst.iter_mut().enumerate() {
                    *v = xf.get(i, k) * yf.get(i, m);
                }
            }
        }
        factors.push(f);
    }
    CanonicalTensor::new(x.shape().clone(), factors)
}

/// Hadamard product of TT tensors: `Z^(k)(i) = X^(k)(i) ⊗ Y^(k)(i)`, bond
/// ranks multiply exactly (x-bond fastest in the combined index).
pub fn hadamard_tt(x: &TtTensor, y: &TtTensor) -> Result<TtTensor> {
    check_shapes("TT hadamard", x.shape(), y.shape())?;
    let mut cores = Vec::with_capacity(x.order());
    for (cx, cy) in x.cores().iter().zip(y.cores()) {
        let mut z = TtCore::zeros(cx.left * cy.left, cx.mode, cx.right * cy.right);
        for i in 0..cx.mode {
            for by in 0..cy.right {
                for bx in 0..cx.right {
                    for ay in 0..cy.left {
                        for ax in 0..cx.left {
                            z.set(
                                ax + cx.left * ay,
                                i,
                                bx + cx.right * by,
                                cx.get(ax, i, bx) * cy.get(ay, i, by),
                            );
                        }
                    }
                }
            }
        }
        cores.push(z);
    }
    TtTensor::new(cores)
}

/// TT addition: block-diagonal cores, bond ranks add (boundaries stay 1).
pub fn add_tt(x: &TtTensor, y: &TtTensor) -> Result<TtTensor> {
    check_shapes("TT add", x.shape(), y.shape())?;
    let d = x.order();
    if d == 1 {
        let mut data = x.core(0).data.clone();
        for (a, b) in data.iter_mut().zip(&y.core(0).data) {
            *a += *b;
        }
        return TtTensor::new(vec![TtCore { left: 1, mode: x.core(0).mode, right: 1, data }]);
    }
    let mut cores = Vec::with_capacity(d);
    for l in 0..d {
        let cx = x.core(l);
        let cy = y.core(l);
        let (left, right) = if l == 0 {
            (1, cx.right + cy.right)
        } else if l == d - 1 {
            (cx.left + cy.left, 1)
        } else {
            (cx.left + cy.left, cx.right + cy.right)
        };
        let mut z = TtCore::zeros(left, cx.mode, right);
        for i in 0..cx.mode {
            for b in 0..cx.right {
                for a in 0..cx.left {
                    z.set(a, i, b, cx.get(a, i, b));
                }
            }
            let (oa, ob) = (if l == 0 { 0 } else { cx.left }, if l == d - 1 { 0 } else { cx.right });
            for b in 0..cy.right {
                for a in 0..cy.left {
                    z.set(oa + a, i, ob + b, cy.get(a, i, b));
                }
            }
        }
        cores.push(z);
    }
    TtTensor::new(cores)
}

/// Canonical addition: term concatenation, rank `R_1 + R_2`.
pub fn add_canonical(x: &CanonicalTensor, y: &CanonicalTensor) -> Result<CanonicalTensor> {
    x.add(y)
}

/// `y = A x` for a TT operator and TT tensor; output bond ranks are the
/// elementwise products `r_A ⊙ r_x` (x-bond fastest in the combined index).
pub fn mpo_apply(a: &TtMatrix, x: &TtTensor) -> Result<TtTensor> {
    check_shapes("operator apply", a.col_shape(), x.shape())?;
    let mut cores = Vec::with_capacity(a.order());
    for (ca, cx) in a.cores().iter().zip(x.cores()) {
        let mut z = TtCore::zeros(cx.left * ca.left, ca.rows, cx.right * ca.right);
        for i in 0..ca.rows {
            for ba in 0..ca.right {
                for bx in 0..cx.right {
                    for aa in 0..ca.left {
                        for ax in 0..cx.left {
                            let mut s = 0.0;
                            for j in 0..ca.cols {
                                s += ca.get(aa, i, j, ba) * cx.get(ax, j, bx);
                            }
                            z.set(ax + cx.left * aa, i, bx + cx.right * ba, s);
                        }
                    }
                }
            }
        }
        cores.push(z);
    }
    TtTensor::new(cores)
}

/// Transpose of a TT operator: every core swaps its row and column index.
pub fn mpo_transpose(a: &TtMatrix) -> TtMatrix {
    let cores = a
        .cores()
        .iter()
        .map(|c| {
            let mut t = TtMatCore::zeros(c.left, c.cols, c.rows, c.right);
            for b in 0..c.right {
                for j in 0..c.cols {
                    for i in 0..c.rows {
                        for av in 0..c.left {
                            t.set(av, j, i, b, c.get(av, i, j, b));
                        }
                    }
                }
            }
            t
        })
        .collect();
    TtMatrix::new(cores).expect("transpose preserves the chain")
}

/// TT-operator product `C = A B`: core-wise contraction over the shared
/// index, bond ranks multiply (B-bond fastest in the combined index).
pub fn mpo_mul(a: &TtMatrix, b: &TtMatrix) -> Result<TtMatrix> {
    check_shapes("operator product", a.col_shape(), b.row_shape())?;
    let mut cores = Vec::with_capacity(a.order());
    for (ca, cb) in a.cores().iter().zip(b.cores()) {
        let mut z = TtMatCore::zeros(
            cb.left * ca.left,
            ca.rows,
            cb.cols,
            cb.right * ca.right,
        );
        for ba in 0..ca.right {
            for bb in 0..cb.right {
                for aa in 0..ca.left {
                    for ab in 0..cb.left {
                        for k in 0..cb.cols {
                            for i in 0..ca.rows {
                                let mut s = 0.0;
                                for j in 0..ca.cols {
                                    s += ca.get(aa, i, j, ba) * cb.get(ab, j, k, bb);
                                }
                                if s != 0.0 {
                                    z.set(ab + cb.left * aa, i, k, bb + cb.right * ba, s);
                                }
                            }
                        }
                    }
                }
            }
        }
        cores.push(z);
    }
    TtMatrix::new(cores)
}

/// TT-operator addition via the paired-mode tensor view.
pub fn add_tt_matrix(a: &TtMatrix, b: &TtMatrix) -> Result<TtMatrix> {
    check_shapes("operator add (rows)", a.row_shape(), b.row_shape())?;
    check_shapes("operator add (cols)", a.col_shape(), b.col_shape())?;
    let sum = add_tt(&a.to_paired_tt(), &b.to_paired_tt())?;
    TtMatrix::from_paired_tt(&sum, a.row_shape(), a.col_shape())
}

/// Lift a TT tensor to the diagonal TT operator `diag(x)`: same bond
/// ranks, core entries `A[a, i, j, b] = δ_{ij} x[a, i, b]`.
pub fn diag_lift(x: &TtTensor) -> TtMatrix {
    let cores = x
        .cores()
        .iter()
        .map(|c| {
            let mut m = TtMatCore::zeros(c.left, c.mode, c.mode, c.right);
            for b in 0..c.right {
                for i in 0..c.mode {
                    for a in 0..c.left {
                        m.set(a, i, i, b, c.get(a, i, b));
                    }
                }
            }
            m
        })
        .collect();
    TtMatrix::new(cores).expect("diagonal lift preserves the chain")
}

/// Per-factor discrete Fourier spectra of a canonical tensor: the rank-1
/// factorized d-dimensional DFT applies the unitary-up-to-scaling 1-D DFT
/// matrix along each mode of each term independently, so the term count is
/// preserved. Real input; the complex spectrum is stored as a cosine/sine
/// (real/imaginary) split per factor.
#[derive(Debug, Clone)]
pub struct CanonicalSpectrum {
    shape: Shape,
    factors_re: Vec<Matrix>,
    factors_im: Vec<Matrix>,
}

impl CanonicalSpectrum {
    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn rank(&self) -> usize {
        self.factors_re.first().map_or(0, |f| f.cols)
    }

    pub fn factor_re(&self, mode: usize) -> &Matrix {
        &self.factors_re[mode]
    }

    pub fn factor_im(&self, mode: usize) -> &Matrix {
        &self.factors_im[mode]
    }
}

fn dft_columns(f: &Matrix, planner: &mut FftPlanner<f64>) -> (Matrix, Matrix) {
    let n = f.rows;
    let fft = planner.plan_fft_forward(n);
    let mut re = Matrix::zeros(n, f.cols);
    let mut im = Matrix::zeros(n, f.cols);
    let mut buf = vec![Complex::new(0.0, 0.0); n];
    for j in 0..f.cols {
        for (b, &v) in buf.iter_mut().zip(f.col(j)) {
            *b = Complex::new(v, 0.0);
        }
        fft.process(&mut buf);
        for (i, c) in buf.iter().enumerate() {
            re.set(i, j, c.re);
            im.set(i, j, c.im);
        }
    }
    (re, im)
}

/// Mode-wise DFT of every factor of a canonical tensor. Requires cubic
/// power-of-two mode sizes (no implicit padding).
pub fn kron_factorized_fft_apply(x: &CanonicalTensor) -> Result<CanonicalSpectrum> {
    let dims = x.shape().dims();
    let n = dims[0];
    if !n.is_power_of_two() || dims.iter().any(|&m| m != n) {
        return Err(Error::InvalidArgument(format!(
            "factorized FFT needs a cubic power-of-two shape, got {:?}",
            dims
        )));
    }
    let mut planner = FftPlanner::new();
    let mut factors_re = Vec::with_capacity(dims.len());
    let mut factors_im = Vec::with_capacity(dims.len());
    for f in x.factors() {
        let (re, im) = dft_columns(f, &mut planner);
        factors_re.push(re);
        factors_im.push(im);
    }
    Ok(CanonicalSpectrum { shape: x.shape().clone(), factors_re, factors_im })
}

/// Inverse of [`kron_factorized_fft_apply`] for spectra of real tensors:
/// per-factor inverse DFT, real part taken (the imaginary residue of a
/// real-origin spectrum is at round-off level).
pub fn kron_factorized_ifft(spec: &CanonicalSpectrum) -> Result<CanonicalTensor> {
    let mut planner = FftPlanner::new();
    let d = spec.shape.order();
    let mut factors = Vec::with_capacity(d);
    for l in 0..d {
        let re = &spec.factors_re[l];
        let im = &spec.factors_im[l];
        let n = re.rows;
        let fft = planner.plan_fft_inverse(n);
        let mut out = Matrix::zeros(n, re.cols);
        let mut buf = vec![Complex::new(0.0, 0.0); n];
        for j in 0..re.cols {
            for i in 0..n {
                buf[i] = Complex::new(re.get(i, j), im.get(i, j));
            }
            fft.process(&mut buf);
            for (i, c) in buf.iter().enumerate() {
                out.set(i, j, c.re / n as f64);
            }
        }
        factors.push(out);
    }
    CanonicalTensor::new(spec.shape.clone(), factors)
}

fn conv1d_length(n: usize) -> usize {
    (2 * n - 1).next_power_of_two()
}

/// Full discrete convolution of two canonical tensors on equal cubic grids:
/// term `(k, m)` is the outer product of the 1-D convolutions
/// `X^(l)_k ∗ Y^(l)_m`, each of length `2N-1`, computed by padded FFT.
/// The result has rank `R_1 R_2` on the `(2N-1)^d` grid.
pub fn convolve_canonical(x: &CanonicalTensor, y: &CanonicalTensor) -> Result<CanonicalTensor> {
    check_shapes("canonical convolution", x.shape(), y.shape())?;
    let dims = x.shape().dims();
    let n = dims[0];
    if dims.iter().any(|&m| m != n) {
        return Err(Error::InvalidArgument("convolution requires a cubic shape".into()));
    }
    let d = dims.len();
    let (r1, r2) = (x.rank(), y.rank());
    let out_n = 2 * n - 1;
    let len = conv1d_length(n);
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);

    let transform = |f: &Matrix| -> Vec<Vec<Complex<f64>>> {
        (0..f.cols)
            .map(|j| {
                let mut buf = vec![Complex::new(0.0, 0.0); len];
                for (i, &v) in f.col(j).iter().enumerate() {
                    buf[i] = Complex::new(v, 0.0);
                }
                fwd.process(&mut buf);
                buf
            })
            .collect()
    };

    let mut factors = Vec::with_capacity(d);
    for l in 0..d {
        let xhat = transform(x.factor(l));
        let yhat = transform(y.factor(l));
        let mut f = Matrix::zeros(out_n, r1 * r2);
        let mut buf = vec![Complex::new(0.0, 0.0); len];
        for k in 0..r1 {
            for m in 0..r2 {
                for i in 0..len {
                    buf[i] = xhat[k][i] * yhat[m][i];
                }
                inv.process(&mut buf);
                let dst = f.col_mut(k * r2 + m);
                for (i, v) in dst.iter_mut().enumerate() {
                    *v = buf[i].re / len as f64;
                }
            }
        }
        factors.push(f);
    }
    let out_shape = Shape::new(vec![out_n; d])?;
    CanonicalTensor::new(out_shape, factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_canonical(rng: &mut ChaCha8Rng, dims: &[usize], rank: usize) -> CanonicalTensor {
        let shape = Shape::new(dims.to_vec()).unwrap();
        let factors = dims
            .iter()
            .map(|&n| Matrix::from_fn(n, rank, |_, _| rng.random::<f64>() * 2.0 - 1.0))
            .collect();
        CanonicalTensor::new(shape, factors).unwrap()
    }

    pub(crate) fn random_tt(rng: &mut ChaCha8Rng, dims: &[usize], rank: usize) -> TtTensor {
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

    #[test]
    fn scalar_product_all_ones_is_grid_size() {
        let shape = [3usize, 3, 3];
        let x = CanonicalTensor::rank_one(&[vec![1.0; 3], vec![1.0; 3], vec![1.0; 3]]).unwrap();
        let v = scalar_product_canonical(&x, &x).unwrap();
        assert_eq!(v, shape.iter().product::<usize>() as f64);
        let t = TtTensor::ones(x.shape());
        assert_eq!(scalar_product_tt(&t, &t).unwrap(), 27.0);
    }

    #[test]
    fn scalar_products_match_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let x = random_canonical(&mut rng, &[4, 3, 5], 3);
        let y = random_canonical(&mut rng, &[4, 3, 5], 2);
        let sp = scalar_product_canonical(&x, &y).unwrap();
        let dense = x
            .to_dense()
            .unwrap()
            .scalar_product(&y.to_dense().unwrap())
            .unwrap();
        assert!((sp - dense).abs() <= 1e-12 * dense.abs().max(1.0));

        let tx = random_tt(&mut rng, &[4, 3, 5], 3);
        let ty = random_tt(&mut rng, &[4, 3, 5], 2);
        let sp = scalar_product_tt(&tx, &ty).unwrap();
        let dense = tx
            .to_dense()
            .unwrap()
            .scalar_product(&ty.to_dense().unwrap())
            .unwrap();
        assert!((sp - dense).abs() <= 1e-12 * dense.abs().max(1.0));
    }

    #[test]
    fn hadamard_rank_bookkeeping_and_dense_equality() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = random_canonical(&mut rng, &[4, 4], 2);
        let y = random_canonical(&mut rng, &[4, 4], 3);
        let z = hadamard_canonical(&x, &y).unwrap();
        assert_eq!(z.rank(), 6);
        let expect: Vec<f64> = x
            .to_dense()
            .unwrap()
            .values()
            .iter()
            .zip(y.to_dense().unwrap().values().iter())
            .map(|(a, b)| a * b)
            .collect();
        for (u, v) in z.to_dense().unwrap().values().iter().zip(&expect) {
            assert!((u - v).abs() < 1e-12);
        }

        let tx = random_tt(&mut rng, &[4, 4, 4], 3);
        let ty = random_tt(&mut rng, &[4, 4, 4], 3);
        let tz = hadamard_tt(&tx, &ty).unwrap();
        let rx = tx.bond_ranks();
        let ry = ty.bond_ranks();
        let rz = tz.bond_ranks();
        for i in 0..rz.len() {
            assert_eq!(rz[i], rx[i] * ry[i]);
        }
        let dx = tx.to_dense().unwrap();
        let dy = ty.to_dense().unwrap();
        let dz = tz.to_dense().unwrap();
        for ((a, b), c) in dx.values().iter().zip(dy.values()).zip(dz.values()) {
            assert!((a * b - c).abs() < 1e-12);
        }
        // x ⊙ 1 = x.
        let ones = TtTensor::ones(tx.shape());
        let same = hadamard_tt(&tx, &ones).unwrap();
        let ds = same.to_dense().unwrap();
        for (a, b) in dx.values().iter().zip(ds.values()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn addition_ranks_add_and_dense_matches() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let tx = random_tt(&mut rng, &[3, 4, 2], 2);
        let ty = random_tt(&mut rng, &[3, 4, 2], 3);
        let ts = add_tt(&tx, &ty).unwrap();
        let rx = tx.bond_ranks();
        let ry = ty.bond_ranks();
        let rs = ts.bond_ranks();
        for i in 1..rs.len() - 1 {
            assert_eq!(rs[i], rx[i] + ry[i]);
        }
        assert_eq!(rs[0], 1);
        assert_eq!(*rs.last().unwrap(), 1);
        let dsum = ts.to_dense().unwrap();
        let expect = tx.to_dense().unwrap().add(&ty.to_dense().unwrap()).unwrap();
        for (a, b) in dsum.values().iter().zip(expect.values()) {
            assert!((a - b).abs() < 1e-12);
        }
        // x + 0 = x.
        let zero = TtTensor::zero(tx.shape());
        let same = add_tt(&tx, &zero).unwrap().to_dense().unwrap();
        for (a, b) in same.values().iter().zip(tx.to_dense().unwrap().values()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn mpo_apply_identity_and_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = random_tt(&mut rng, &[4, 4, 4], 3);
        let id = TtMatrix::identity(x.shape());
        let y = mpo_apply(&id, &x).unwrap();
        let dx = x.to_dense().unwrap();
        let dy = y.to_dense().unwrap();
        for (a, b) in dx.values().iter().zip(dy.values()) {
            assert!((a - b).abs() < 1e-13);
        }

        // Random operator with bond rank 2 against the dense matrix.
        let dims = [4usize, 4, 4];
        let mut cores = Vec::new();
        let bonds = [1usize, 2, 2, 1];
        for l in 0..3 {
            let mut c = TtMatCore::zeros(bonds[l], dims[l], dims[l], bonds[l + 1]);
            for v in &mut c.data {
                *v = rng.random::<f64>() * 2.0 - 1.0;
            }
            cores.push(c);
        }
        let a = TtMatrix::new(cores).unwrap();
        let y = mpo_apply(&a, &x).unwrap();
        let ra = a.bond_ranks();
        let rx = x.bond_ranks();
        for (i, r) in y.bond_ranks().iter().enumerate() {
            assert_eq!(*r, ra[i] * rx[i]);
        }
        let lhs = a.to_dense_matrix().unwrap().matvec(dx.values());
        let dy = y.to_dense().unwrap();
        let scale = dy.frobenius_norm().max(1.0);
        for (u, v) in lhs.iter().zip(dy.values()) {
            assert!((u - v).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn diag_lift_matches_dense_diag() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = random_tt(&mut rng, &[2, 2, 2, 2], 2);
        let a = diag_lift(&x);
        assert_eq!(a.bond_ranks(), x.bond_ranks());
        let dm = a.to_dense_matrix().unwrap();
        let dx = x.to_dense().unwrap();
        for i in 0..16 {
            for j in 0..16 {
                let expect = if i == j { dx.values()[i] } else { 0.0 };
                assert!((dm.get(i, j) - expect).abs() < 1e-13);
            }
        }
        // ones lifts to the identity.
        let ones = TtTensor::ones(x.shape());
        let id = diag_lift(&ones).to_dense_matrix().unwrap();
        assert!(id.sub(&Matrix::identity(16)).frobenius_norm() < 1e-14);
    }

    #[test]
    fn factorized_fft_is_per_mode_dft_with_parseval() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = random_canonical(&mut rng, &[8, 8, 8], 2);
        let spec = kron_factorized_fft_apply(&x).unwrap();
        assert_eq!(spec.rank(), 2);
        // Direct DFT oracle on one factor column.
        let f = x.factor(1);
        for k in 0..2 {
            for freq in 0..8 {
                let (mut re, mut im) = (0.0, 0.0);
                for t in 0..8 {
                    let ang = -2.0 * std::f64::consts::PI * (freq * t) as f64 / 8.0;
                    re += f.get(t, k) * ang.cos();
                    im += f.get(t, k) * ang.sin();
                }
                assert!((spec.factor_re(1).get(freq, k) - re).abs() < 1e-10);
                assert!((spec.factor_im(1).get(freq, k) - im).abs() < 1e-10);
            }
            // Parseval per mode: ‖F v‖² = N ‖v‖².
            let nv: f64 = f.col(k).iter().map(|v| v * v).sum();
            let ns: f64 = (0..8)
                .map(|i| {
                    spec.factor_re(1).get(i, k).powi(2) + spec.factor_im(1).get(i, k).powi(2)
                })
                .sum();
            assert!((ns - 8.0 * nv).abs() < 1e-10 * nv.max(1.0));
        }
        // Round trip back to the original factors.
        let back = kron_factorized_ifft(&spec).unwrap();
        for l in 0..3 {
            for (a, b) in back.factor(l).data.iter().zip(&x.factor(l).data) {
                assert!((a - b).abs() < 1e-12);
            }
        }
        // Constant rank-1 tensor: spectrum concentrates at frequency zero.
        let c = CanonicalTensor::rank_one(&[vec![1.0; 8], vec![1.0; 8], vec![1.0; 8]]).unwrap();
        let cs = kron_factorized_fft_apply(&c).unwrap();
        for l in 0..3 {
            assert!((cs.factor_re(l).get(0, 0) - 8.0).abs() < 1e-12);
            for i in 1..8 {
                assert!(cs.factor_re(l).get(i, 0).abs() < 1e-12);
                assert!(cs.factor_im(l).get(i, 0).abs() < 1e-12);
            }
        }
        assert!(kron_factorized_fft_apply(&random_canonical(&mut rng, &[6, 6], 1)).is_err());
    }

    #[test]
    fn convolution_identity_and_1d_factors() {
        // One-hot at the origin convolves to an embedding of y.
        let delta = CanonicalTensor::rank_one(&[
            vec![1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
        ])
        .unwrap();
        let y = CanonicalTensor::rank_one(&[vec![1.0, 2.0, 3.0], vec![0.5, -1.0, 2.0]]).unwrap();
        let z = convolve_canonical(&delta, &y).unwrap();
        assert_eq!(z.shape().dims(), &[5, 5]);
        let dz = z.to_dense().unwrap();
        let dy = y.to_dense().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((dz.get(&[i, j]).unwrap() - dy.get(&[i, j]).unwrap()).abs() < 1e-12);
            }
        }
        for i in 3..5 {
            for j in 0..5 {
                assert!(dz.get(&[i, j]).unwrap().abs() < 1e-12);
            }
        }
        // [1,1] ∗ [1,1] = [1,2,1] as a lifted rank-1 factor.
        let a = CanonicalTensor::rank_one(&[vec![1.0, 1.0]]).unwrap();
        let z = convolve_canonical(&a, &a).unwrap();
        let dz = z.to_dense().unwrap();
        assert!((dz.values()[0] - 1.0).abs() < 1e-12);
        assert!((dz.values()[1] - 2.0).abs() < 1e-12);
        assert!((dz.values()[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn convolution_matches_brute_force_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let n = 8;
        let x = random_canonical(&mut rng, &[n, n, n], 2);
        let y = random_canonical(&mut rng, &[n, n, n], 2);
        let z = convolve_canonical(&x, &y).unwrap();
        assert_eq!(z.rank(), 4);
        let dx = x.to_dense().unwrap();
        let dy = y.to_dense().unwrap();
        let dz = z.to_dense().unwrap();
        // Brute-force full convolution, spot-checked on a grid of outputs.
        let idx = [0usize, 3, 7, 10, 14];
        for &j1 in &idx {
            for &j2 in &idx {
                for &j3 in &idx {
                    let mut s = 0.0;
                    for k1 in 0..n {
                        for k2 in 0..n {
                            for k3 in 0..n {
                                let l1 = j1 as isize - k1 as isize;
                                let l2 = j2 as isize - k2 as isize;
                                let l3 = j3 as isize - k3 as isize;
                                if (0..n as isize).contains(&l1)
                                    && (0..n as isize).contains(&l2)
                                    && (0..n as isize).contains(&l3)
                                {
                                    s += dx.get(&[k1, k2, k3]).unwrap()
                                        * dy.get(&[l1 as usize, l2 as usize, l3 as usize]).unwrap();
                                }
                            }
                        }
                    }
                    let v = dz.get(&[j1, j2, j3]).unwrap();
                    assert!((v - s).abs() < 1e-10, "({j1},{j2},{j3}): {v} vs {s}");
                }
            }
        }
    }

    #[test]
    fn bilinearity_of_scalar_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let x = random_tt(&mut rng, &[3, 3, 3], 2);
            let y = random_tt(&mut rng, &[3, 3, 3], 2);
            let z = random_tt(&mut rng, &[3, 3, 3], 3);
            let (a, b) = (rng.random::<f64>(), rng.random::<f64>());
            let mut ax = x.clone();
            ax.scale(a);
            let mut by = y.clone();
            by.scale(b);
            let lhs = scalar_product_tt(&add_tt(&ax, &by).unwrap(), &z).unwrap();
            let rhs = a * scalar_product_tt(&x, &z).unwrap() + b * scalar_product_tt(&y, &z).unwrap();
            assert!((lhs - rhs).abs() <= 1e-11 * (lhs.abs() + rhs.abs()).max(1.0));
        }
    }
}
