//! Dense column-major matrix kernel: multiplication, Householder QR,
//! pivoted LU, Golub–Kahan SVD and the scaling-and-squaring matrix
//! exponential.
//!
//! Everything in the crate that touches a dense matrix goes through this
//! module, so tensor unfoldings reshape into [`Matrix`] without copying
//! (column-major flat storage matches the little-endian index convention of
//! the tensor types).

use crate::error::Error;

/// Dense real matrix, column-major: entry `(i, j)` lives at `data[i + rows*j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i + n * i] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m.data[i + rows * j] = f(i, j);
            }
        }
        m
    }

    /// Wrap an existing column-major buffer. `data.len()` must equal `rows*cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "buffer size mismatch");
        Matrix { rows, cols, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i + self.rows * j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i + self.rows * j] = v;
    }

    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[self.rows * j..self.rows * (j + 1)]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        let r = self.rows;
        &mut self.data[r * j..r * (j + 1)]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            for i in 0..self.rows {
                t.data[j + self.cols * i] = self.data[i + self.rows * j];
            }
        }
        t
    }

    /// `self * other`, accumulated column by column so the inner loop runs
    /// down contiguous memory.
    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let (m, k, n) = (self.rows, self.cols, other.cols);
        let mut c = Matrix::zeros(m, n);
        for j in 0..n {
            let cj = &mut c.data[m * j..m * (j + 1)];
            for p in 0..k {
                let b = other.data[p + k * j];
                if b == 0.0 {
                    continue;
                }
                let ap = &self.data[m * p..m * (p + 1)];
                for i in 0..m {
                    cj[i] += ap[i] * b;
                }
            }
        }
        c
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len(), "matvec dimension mismatch");
        let mut y = vec![0.0; self.rows];
        for j in 0..self.cols {
            let xj = x[j];
            if xj == 0.0 {
                continue;
            }
            let col = self.col(j);
            for i in 0..self.rows {
                y[i] += col[i] * xj;
            }
        }
        y
    }

    pub fn scale(&mut self, a: f64) {
        for v in &mut self.data {
            *v *= a;
        }
    }

    pub fn add_assign(&mut self, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += *b;
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        (0..self.cols)
            .map(|j| self.col(j).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Kronecker product `self ⊗ other` in the convention where `other`
    /// indexes the fast (least significant) block coordinate.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for ja in 0..self.cols {
            for ia in 0..self.rows {
                let a = self.get(ia, ja);
                if a == 0.0 {
                    continue;
                }
                for jb in 0..other.cols {
                    for ib in 0..other.rows {
                        out.set(ia * other.rows + ib, ja * other.cols + jb, a * other.get(ib, jb));
                    }
                }
            }
        }
        out
    }
}

/// Thin singular value decomposition `M = U Σ Vᵀ`.
///
/// `u` is `m×k`, `vt` is `k×n` with `k = min(m, n)`; singular values are
/// nonnegative and sorted in descending order. The sign of each singular
/// pair is fixed so that the first nonzero entry of every left singular
/// vector is positive, which makes repeated factorizations reproducible.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub vt: Matrix,
}

impl Svd {
    /// Smallest rank whose discarded tail satisfies
    /// `sqrt(Σ_{j>r} σ_j²) <= delta`, additionally capped by `max_rank`.
    pub fn truncation_rank(&self, delta: f64, max_rank: Option<usize>) -> usize {
        truncation_rank(&self.sigma, delta, max_rank)
    }
}

pub fn truncation_rank(sigma: &[f64], delta: f64, max_rank: Option<usize>) -> usize {
    let smax = sigma.first().copied().unwrap_or(0.0);
    // Hard floor: values at the round-off level never count towards the rank.
    let floor = smax * 1e-15;
    let mut numerical = sigma.len();
    while numerical > 0 && sigma[numerical - 1] <= floor {
        numerical -= 1;
    }
    let mut r = numerical;
    let mut tail = 0.0;
    while r > 0 {
        let t = tail + sigma[r - 1] * sigma[r - 1];
        if t.sqrt() <= delta {
            tail = t;
            r -= 1;
        } else {
            break;
        }
    }
    let r = r.max(usize::from(numerical > 0 && r == 0 && delta < sigma[0]));
    match max_rank {
        Some(cap) => r.min(cap.max(1)),
        None => r,
    }
}

#[inline]
fn givens(a: f64, b: f64) -> (f64, f64, f64) {
    if b == 0.0 {
        (1.0, 0.0, a)
    } else if a == 0.0 {
        (0.0, 1.0, b)
    } else {
        let r = a.hypot(b);
        (a / r, b / r, r)
    }
}

/// Householder reflector for `x`: returns `(v, beta)` with
/// `(I - beta v vᵀ) x = ∓‖x‖ e₁`, `v[0] = 1`.
fn householder(x: &[f64]) -> (Vec<f64>, f64) {
    let n = x.len();
    let mut v = x.to_vec();
    if n == 0 {
        return (v, 0.0);
    }
    let sigma: f64 = x[1..].iter().map(|t| t * t).sum();
    let x0 = x[0];
    if sigma == 0.0 {
        v[0] = 1.0;
        // For x = x0 e1 with x0 < 0 the reflector is I - 2 e1 e1ᵀ.
        return (v, if x0 >= 0.0 { 0.0 } else { 2.0 });
    }
    let mu = (x0 * x0 + sigma).sqrt();
    let v0 = if x0 <= 0.0 { x0 - mu } else { -sigma / (x0 + mu) };
    let beta = 2.0 * v0 * v0 / (sigma + v0 * v0);
    for t in v.iter_mut() {
        *t /= v0;
    }
    v[0] = 1.0;
    (v, beta)
}

/// Apply `(I - beta v vᵀ)` from the left to `a[row.., col..]`.
fn apply_householder_left(a: &mut Matrix, v: &[f64], beta: f64, row: usize, col: usize) {
    if beta == 0.0 {
        return;
    }
    let m = a.rows;
    for j in col..a.cols {
        let colj = &mut a.data[m * j..m * (j + 1)];
        let mut dot = 0.0;
        for (k, vk) in v.iter().enumerate() {
            dot += vk * colj[row + k];
        }
        dot *= beta;
        for (k, vk) in v.iter().enumerate() {
            colj[row + k] -= dot * vk;
        }
    }
}

/// Apply `(I - beta v vᵀ)` from the right to `a[row.., col..]`.
fn apply_householder_right(a: &mut Matrix, v: &[f64], beta: f64, row: usize, col: usize) {
    if beta == 0.0 {
        return;
    }
    let m = a.rows;
    for i in row..a.rows {
        let mut dot = 0.0;
        for (k, vk) in v.iter().enumerate() {
            dot += vk * a.data[i + m * (col + k)];
        }
        dot *= beta;
        for (k, vk) in v.iter().enumerate() {
            a.data[i + m * (col + k)] -= dot * vk;
        }
    }
}

/// Golub–Kahan bidiagonalization of a tall matrix (`rows >= cols`).
///
/// Returns `(u, d, e, v)` with `a = u * B * vᵀ`, `B` upper bidiagonal with
/// diagonal `d` and superdiagonal `e`; `u` is `m×n` thin, `v` is `n×n`.
fn bidiagonalize(a: &Matrix) -> (Matrix, Vec<f64>, Vec<f64>, Matrix) {
    let (m, n) = (a.rows, a.cols);
    debug_assert!(m >= n);
    let mut b = a.clone();
    let mut col_reflectors: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n);
    let mut row_reflectors: Vec<(Vec<f64>, f64)> = Vec::new();

    for k in 0..n {
        let x: Vec<f64> = (k..m).map(|i| b.get(i, k)).collect();
        let (v, beta) = householder(&x);
        apply_householder_left(&mut b, &v, beta, k, k);
        col_reflectors.push((v, beta));
        if k + 2 < n {
            let x: Vec<f64> = (k + 1..n).map(|j| b.get(k, j)).collect();
            let (v, beta) = householder(&x);
            apply_householder_right(&mut b, &v, beta, k, k + 1);
            row_reflectors.push((v, beta));
        }
    }

    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n.saturating_sub(1)];
    for k in 0..n {
        d[k] = b.get(k, k);
        if k + 1 < n {
            e[k] = b.get(k, k + 1);
        }
    }

    // Back-accumulate the thin U and the square V.
    let mut u = Matrix::zeros(m, n);
    for k in 0..n {
        u.set(k, k, 1.0);
    }
    for k in (0..n).rev() {
        let (v, beta) = &col_reflectors[k];
        apply_householder_left(&mut u, v, *beta, k, k);
    }
    // V = G_0 G_1 ⋯, accumulated backward by left-multiplication (the
    // reflectors are symmetric); columns below k+1 are still unit vectors
    // at that point, so the application window shrinks with k.
    let mut v = Matrix::identity(n);
    for k in (0..row_reflectors.len()).rev() {
        let (h, beta) = &row_reflectors[k];
        apply_householder_left(&mut v, h, *beta, k + 1, k + 1);
    }
    (u, d, e, v)
}

/// Apply a Givens rotation to columns `(j1, j2)` of `m`.
fn rotate_cols(m: &mut Matrix, j1: usize, j2: usize, c: f64, s: f64) {
    let r = m.rows;
    let (lo, hi) = if j1 < j2 { (j1, j2) } else { (j2, j1) };
    let (head, tail) = m.data.split_at_mut(r * hi);
    let c1 = &mut head[r * lo..r * (lo + 1)];
    let c2 = &mut tail[..r];
    if j1 < j2 {
        for i in 0..r {
            let t1 = c1[i];
            let t2 = c2[i];
            c1[i] = c * t1 + s * t2;
            c2[i] = -s * t1 + c * t2;
        }
    } else {
        for i in 0..r {
            let t1 = c2[i];
            let t2 = c1[i];
            c2[i] = c * t1 + s * t2;
            c1[i] = -s * t1 + c * t2;
        }
    }
}

/// One implicit-shift Golub–Kahan SVD step on the bidiagonal block `[p, q]`.
fn gk_step(d: &mut [f64], e: &mut [f64], u: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    // Wilkinson shift from the trailing 2x2 of BᵀB.
    let dq = d[q];
    let dq1 = d[q - 1];
    let eq1 = e[q - 1];
    let eq2 = if q >= 2 && q - 1 > p { e[q - 2] } else { 0.0 };
    let t11 = dq1 * dq1 + eq2 * eq2;
    let t22 = dq * dq + eq1 * eq1;
    let t12 = dq1 * eq1;
    let delta = (t11 - t22) / 2.0;
    let mu = if t12 == 0.0 {
        t22
    } else {
        let sign = if delta >= 0.0 { 1.0 } else { -1.0 };
        t22 - t12 * t12 / (delta + sign * (delta * delta + t12 * t12).sqrt())
    };

    let mut y = d[p] * d[p] - mu;
    let mut z = d[p] * e[p];
    for k in p..q {
        // Right rotation on columns (k, k+1): updates V.
        let (c, s, _) = givens(y, z);
        if k > p {
            e[k - 1] = c * e[k - 1] + s * z;
        }
        let dk = d[k];
        let ek = e[k];
        d[k] = c * dk + s * ek;
        e[k] = -s * dk + c * ek;
        let dk1 = d[k + 1];
        z = s * dk1;
        d[k + 1] = c * dk1;
        rotate_cols(v, k, k + 1, c, s);

        // Left rotation on rows (k, k+1): updates U.
        y = d[k];
        let (c, s, _) = givens(y, z);
        d[k] = c * d[k] + s * z;
        let ek = e[k];
        let dk1 = d[k + 1];
        e[k] = c * ek + s * dk1;
        d[k + 1] = -s * ek + c * dk1;
        rotate_cols(u, k, k + 1, c, s);
        if k + 1 < q {
            let ek1 = e[k + 1];
            z = s * ek1;
            e[k + 1] = c * ek1;
            y = e[k];
        }
    }
}

/// Zero out the superdiagonal entry trailing a negligible diagonal `d[i]`:
/// a sequence of left Givens rotations chases `e[i]` off the bidiagonal.
fn annihilate_row(d: &mut [f64], e: &mut [f64], u: &mut Matrix, i: usize, q: usize) {
    let mut f = e[i];
    e[i] = 0.0;
    for j in i + 1..=q {
        let (c, s, r) = givens(d[j], f);
        d[j] = r;
        // Row i is mixed into row j; U columns (j, i) rotate accordingly.
        rotate_cols(u, j, i, c, s);
        if j < q {
            f = -s * e[j];
            e[j] *= c;
        }
    }
}

/// Thin SVD by Householder bidiagonalization and implicit-shift QR.
///
/// Fails only if the QR iteration exceeds its sweep cap, which is reported
/// rather than silently truncated.
pub fn svd(a: &Matrix) -> Result<Svd, Error> {
    if a.rows == 0 || a.cols == 0 {
        return Ok(Svd {
            u: Matrix::zeros(a.rows, 0),
            sigma: Vec::new(),
            vt: Matrix::zeros(0, a.cols),
        });
    }
    if a.rows < a.cols {
        let s = svd(&a.transpose())?;
        return Ok(Svd { u: s.vt.transpose(), sigma: s.sigma, vt: s.u.transpose() });
    }
    let n = a.cols;
    let (mut u, mut d, mut e, mut v) = bidiagonalize(a);

    let bnorm = d
        .iter()
        .chain(e.iter())
        .fold(0.0f64, |acc, &x| acc.max(x.abs()));
    if bnorm == 0.0 {
        return Ok(finalize(u, d, v));
    }
    let eps = f64::EPSILON;
    let max_iter = 60 * n * n + 200;
    let mut iter = 0;

    loop {
        // Deflate negligible entries.
        for i in 0..n.saturating_sub(1) {
            if e[i].abs() <= eps * (d[i].abs() + d[i + 1].abs()) + eps * bnorm * 1e-2 {
                e[i] = 0.0;
            }
        }
        // Find the trailing fully-diagonal part.
        let mut q = n - 1;
        while q > 0 && e[q - 1] == 0.0 {
            q -= 1;
        }
        if q == 0 {
            break;
        }
        // Active block [p, q] has no interior zero superdiagonal.
        let mut p = q;
        while p > 0 && e[p - 1] != 0.0 {
            p -= 1;
        }
        // A negligible diagonal inside the block requires row annihilation.
        let mut handled = false;
        for i in p..q {
            if d[i].abs() <= eps * bnorm {
                d[i] = 0.0;
                annihilate_row(&mut d, &mut e, &mut u, i, q);
                handled = true;
                break;
            }
        }
        if handled {
            continue;
        }
        if d[q].abs() <= eps * bnorm {
            // Negligible trailing diagonal: rotate e[q-1] away from the right.
            d[q] = 0.0;
            let mut f = e[q - 1];
            e[q - 1] = 0.0;
            for j in (p..q).rev() {
                let (c, s, r) = givens(d[j], f);
                d[j] = r;
                rotate_cols(&mut v, j, q, c, s);
                if j > p {
                    f = -s * e[j - 1];
                    e[j - 1] *= c;
                }
            }
            continue;
        }
        gk_step(&mut d, &mut e, &mut u, &mut v, p, q);
        iter += 1;
        if iter > max_iter {
            return Err(Error::SvdNonConvergence { size: (a.rows, a.cols), sweeps: iter });
        }
    }
    Ok(finalize(u, d, v))
}

fn finalize(u: Matrix, mut d: Vec<f64>, mut v: Matrix) -> Svd {
    let n = d.len();
    // Negative values fold their sign into V.
    for j in 0..n {
        if d[j] < 0.0 {
            d[j] = -d[j];
            for i in 0..v.rows {
                let t = v.get(i, j);
                v.set(i, j, -t);
            }
        }
    }
    // Sort descending (stable on index for determinism).
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[j].partial_cmp(&d[i]).unwrap().then(i.cmp(&j)));
    let mut su = Matrix::zeros(u.rows, n);
    let mut sv = Matrix::zeros(v.rows, n);
    let mut sd = vec![0.0; n];
    for (new, &old) in order.iter().enumerate() {
        sd[new] = d[old];
        su.col_mut(new).copy_from_slice(u.col(old));
        sv.col_mut(new).copy_from_slice(v.col(old));
    }
    // Sign convention: first nonzero of each left vector positive.
    for j in 0..n {
        let col = su.col(j);
        let lead = col.iter().find(|x| **x != 0.0).copied().unwrap_or(0.0);
        if lead < 0.0 {
            for x in su.col_mut(j) {
                *x = -*x;
            }
            for x in sv.col_mut(j) {
                *x = -*x;
            }
        }
    }
    Svd { u: su, sigma: sd, vt: sv.transpose() }
}

/// Householder QR factorization; stores the reflectors in-place.
pub struct Qr {
    qr: Matrix,
    betas: Vec<f64>,
}

pub fn qr(a: &Matrix) -> Qr {
    let (m, n) = (a.rows, a.cols);
    let mut r = a.clone();
    let k = m.min(n);
    let mut betas = vec![0.0; k];
    for j in 0..k {
        let x: Vec<f64> = (j..m).map(|i| r.get(i, j)).collect();
        let (v, beta) = householder(&x);
        apply_householder_left(&mut r, &v, beta, j, j);
        betas[j] = beta;
        for (off, vv) in v.iter().enumerate().skip(1) {
            r.set(j + off, j, *vv);
        }
    }
    Qr { qr: r, betas }
}

impl Qr {
    /// Upper-triangular factor, `k×n` with `k = min(m, n)`.
    pub fn r(&self) -> Matrix {
        let k = self.qr.rows.min(self.qr.cols);
        Matrix::from_fn(k, self.qr.cols, |i, j| if j >= i { self.qr.get(i, j) } else { 0.0 })
    }

    /// Thin orthogonal factor, `m×k`.
    pub fn q(&self) -> Matrix {
        let (m, n) = (self.qr.rows, self.qr.cols);
        let k = m.min(n);
        let mut q = Matrix::zeros(m, k);
        for i in 0..k {
            q.set(i, i, 1.0);
        }
        for j in (0..k).rev() {
            let mut v = vec![0.0; m - j];
            v[0] = 1.0;
            for i in j + 1..m {
                v[i - j] = self.qr.get(i, j);
            }
            apply_householder_left(&mut q, &v, self.betas[j], j, 0);
        }
        q
    }

    /// Least-squares / square solve `min ‖A x - b‖` via the stored factors.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>, Error> {
        let (m, n) = (self.qr.rows, self.qr.cols);
        assert_eq!(b.len(), m, "rhs length mismatch");
        assert!(m >= n, "QR solve requires rows >= cols");
        let mut y = b.to_vec();
        for j in 0..n.min(m) {
            let beta = self.betas[j];
            if beta == 0.0 {
                continue;
            }
            let mut dot = y[j];
            for i in j + 1..m {
                dot += self.qr.get(i, j) * y[i];
            }
            dot *= beta;
            y[j] -= dot;
            for i in j + 1..m {
                y[i] -= dot * self.qr.get(i, j);
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in i + 1..n {
                s -= self.qr.get(i, j) * x[j];
            }
            let piv = self.qr.get(i, i);
            if piv == 0.0 {
                return Err(Error::SingularSystem);
            }
            x[i] = s / piv;
        }
        Ok(x)
    }
}

/// LU factorization with partial pivoting.
pub struct Lu {
    lu: Matrix,
    piv: Vec<usize>,
}

pub fn lu(a: &Matrix) -> Result<Lu, Error> {
    assert_eq!(a.rows, a.cols, "LU requires a square matrix");
    let n = a.rows;
    let mut m = a.clone();
    let mut piv: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let mut p = k;
        let mut best = m.get(k, k).abs();
        for i in k + 1..n {
            let v = m.get(i, k).abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 {
            return Err(Error::SingularSystem);
        }
        if p != k {
            for j in 0..n {
                let t = m.get(k, j);
                m.set(k, j, m.get(p, j));
                m.set(p, j, t);
            }
            piv.swap(k, p);
        }
        let pivot = m.get(k, k);
        for i in k + 1..n {
            let l = m.get(i, k) / pivot;
            m.set(i, k, l);
            if l == 0.0 {
                continue;
            }
            for j in k + 1..n {
                let t = m.get(i, j) - l * m.get(k, j);
                m.set(i, j, t);
            }
        }
    }
    Ok(Lu { lu: m, piv })
}

impl Lu {
    pub fn solve_vec(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.rows;
        let mut x: Vec<f64> = self.piv.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu.get(i, j) * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu.get(i, j) * x[j];
            }
            x[i] = s / self.lu.get(i, i);
        }
        x
    }

    pub fn solve(&self, b: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(b.rows, b.cols);
        for j in 0..b.cols {
            let x = self.solve_vec(b.col(j));
            out.col_mut(j).copy_from_slice(&x);
        }
        out
    }
}

/// Matrix exponential by scaling-and-squaring with a degree-13 Padé
/// approximant (Higham's method), accurate to ~1e-13 in the scaled norm.
pub fn expm(a: &Matrix) -> Result<Matrix, Error> {
    assert_eq!(a.rows, a.cols, "expm requires a square matrix");
    let n = a.rows;
    const THETA_13: f64 = 5.371920351148152;
    #[rustfmt::skip]
    const B: [f64; 14] = [
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0, 129060195264000.0, 10559470521600.0,
        670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
        960960.0, 16380.0, 182.0, 1.0,
    ];

    let norm = a.norm_1();
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as u32
    } else {
        0
    };
    let mut m = a.clone();
    if s > 0 {
        m.scale(1.0 / f64::powi(2.0, s as i32));
    }

    let m2 = m.matmul(&m);
    let m4 = m2.matmul(&m2);
    let m6 = m2.matmul(&m4);

    // U = M (M6 (b13 M6 + b11 M4 + b9 M2) + b7 M6 + b5 M4 + b3 M2 + b1 I)
    let mut w1 = m6.clone();
    w1.scale(B[13]);
    let mut t = m4.clone();
    t.scale(B[11]);
    w1.add_assign(&t);
    let mut t = m2.clone();
    t.scale(B[9]);
    w1.add_assign(&t);
    let mut w = m6.matmul(&w1);
    let mut t = m6.clone();
    t.scale(B[7]);
    w.add_assign(&t);
    let mut t = m4.clone();
    t.scale(B[5]);
    w.add_assign(&t);
    let mut t = m2.clone();
    t.scale(B[3]);
    w.add_assign(&t);
    let mut t = Matrix::identity(n);
    t.scale(B[1]);
    w.add_assign(&t);
    let u = m.matmul(&w);

    // V = M6 (b12 M6 + b10 M4 + b8 M2) + b6 M6 + b4 M4 + b2 M2 + b0 I
    let mut w2 = m6.clone();
    w2.scale(B[12]);
    let mut t = m4.clone();
    t.scale(B[10]);
    w2.add_assign(&t);
    let mut t = m2.clone();
    t.scale(B[8]);
    w2.add_assign(&t);
    let mut v = m6.matmul(&w2);
    let mut t = m6.clone();
    t.scale(B[6]);
    v.add_assign(&t);
    let mut t = m4.clone();
    t.scale(B[4]);
    v.add_assign(&t);
    let mut t = m2.clone();
    t.scale(B[2]);
    v.add_assign(&t);
    let mut t = Matrix::identity(n);
    t.scale(B[0]);
    v.add_assign(&t);

    // Solve (V - U) X = (V + U).
    let mut vm = v.clone();
    for (x, y) in vm.data.iter_mut().zip(&u.data) {
        *x -= *y;
    }
    let mut vp = v;
    for (x, y) in vp.data.iter_mut().zip(&u.data) {
        *x += *y;
    }
    let mut r = lu(&vm)?.solve(&vp);
    for _ in 0..s {
        r = r.matmul(&r);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Matrix {
        Matrix::from_fn(m, n, |_, _| rng.random::<f64>() * 2.0 - 1.0)
    }

    fn check_svd(a: &Matrix, tol: f64) {
        let s = svd(a).unwrap();
        let k = a.rows.min(a.cols);
        assert_eq!(s.u.cols, k);
        assert_eq!(s.vt.rows, k);
        // Reconstruction.
        let mut us = s.u.clone();
        for j in 0..k {
            for i in 0..us.rows {
                let t = us.get(i, j) * s.sigma[j];
                us.set(i, j, t);
            }
        }
        let rec = us.matmul(&s.vt);
        let err = rec.sub(a).frobenius_norm();
        let scale = a.frobenius_norm().max(1e-300);
        assert!(err <= tol * scale, "reconstruction {err:.3e} vs {scale:.3e}");
        // Orthonormality.
        let utu = s.u.transpose().matmul(&s.u);
        let vvt = s.vt.matmul(&s.vt.transpose());
        let gram_err = utu.sub(&Matrix::identity(k)).frobenius_norm()
            + vvt.sub(&Matrix::identity(k)).frobenius_norm();
        assert!(gram_err < 1e-12, "gram {gram_err:.3e}");
        // Ordering and nonnegativity.
        for j in 0..k {
            assert!(s.sigma[j] >= 0.0);
            if j + 1 < k {
                assert!(s.sigma[j] >= s.sigma[j + 1]);
            }
        }
    }

    #[test]
    fn svd_identity() {
        let s = svd(&Matrix::identity(4)).unwrap();
        for v in &s.sigma {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn svd_rank_one() {
        let u = vec![1.0, -2.0, 3.0, 0.5];
        let v = vec![2.0, 0.0, -1.0];
        let a = Matrix::from_fn(4, 3, |i, j| u[i] * v[j]);
        let s = svd(&a).unwrap();
        let nu: f64 = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        let nv: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((s.sigma[0] - nu * nv).abs() < 1e-12);
        for j in 1..s.sigma.len() {
            assert!(s.sigma[j] < 1e-12);
        }
    }

    #[test]
    fn svd_random_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(m, n) in &[(50, 30), (30, 50), (1, 8), (8, 1), (17, 17), (64, 2), (2, 64)] {
            let a = random_matrix(&mut rng, m, n);
            check_svd(&a, 1e-12);
        }
    }

    #[test]
    fn svd_degenerate_and_structured() {
        check_svd(&Matrix::zeros(5, 3), 1e-12);
        // Repeated singular values (orthogonal-ish input).
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_matrix(&mut rng, 12, 12);
        let q = qr(&a).q();
        check_svd(&q, 1e-12);
        // Exactly rank-deficient stack.
        let b = random_matrix(&mut rng, 6, 3);
        let mut stacked = Matrix::zeros(6, 6);
        for j in 0..3 {
            stacked.col_mut(j).copy_from_slice(b.col(j));
            stacked.col_mut(j + 3).copy_from_slice(b.col(j));
        }
        let s = svd(&stacked).unwrap();
        for j in 3..6 {
            assert!(s.sigma[j] < 1e-12 * s.sigma[0]);
        }
        check_svd(&stacked, 1e-12);
        // Wide dynamic range.
        let mut c = random_matrix(&mut rng, 10, 10);
        for j in 0..10 {
            let sc = 10f64.powi(j as i32 - 5);
            for x in c.col_mut(j) {
                *x *= sc;
            }
        }
        check_svd(&c, 1e-12);
    }

    #[test]
    fn svd_sign_convention_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_matrix(&mut rng, 9, 5);
        let s1 = svd(&a).unwrap();
        let s2 = svd(&a).unwrap();
        assert_eq!(s1.u.data, s2.u.data);
        assert_eq!(s1.vt.data, s2.vt.data);
        for j in 0..s1.u.cols {
            let lead = s1.u.col(j).iter().find(|x| **x != 0.0).copied().unwrap();
            assert!(lead > 0.0);
        }
    }

    #[test]
    fn qr_solves_least_squares() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_matrix(&mut rng, 12, 7);
        let xt: Vec<f64> = (0..7).map(|i| i as f64 - 3.0).collect();
        let b = a.matvec(&xt);
        let x = qr(&a).solve(&b).unwrap();
        for (u, v) in x.iter().zip(&xt) {
            assert!((u - v).abs() < 1e-10);
        }
        let q = qr(&a).q();
        let gram = q.transpose().matmul(&q);
        assert!(gram.sub(&Matrix::identity(7)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn lu_inverts() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut a = random_matrix(&mut rng, 20, 20);
        for i in 0..20 {
            let t = a.get(i, i) + 5.0;
            a.set(i, i, t);
        }
        let f = lu(&a).unwrap();
        let inv = f.solve(&Matrix::identity(20));
        let err = a.matmul(&inv).sub(&Matrix::identity(20)).frobenius_norm();
        assert!(err < 1e-11, "{err:.3e}");
    }

    #[test]
    fn expm_matches_series_and_scalar() {
        // Scalar case embedded as 1x1.
        let a = Matrix::from_fn(1, 1, |_, _| -2.5);
        let e = expm(&a).unwrap();
        assert!((e.get(0, 0) - (-2.5f64).exp()).abs() < 1e-14);

        // Nilpotent: exact polynomial.
        let mut n = Matrix::zeros(3, 3);
        n.set(0, 1, 1.0);
        n.set(1, 2, 1.0);
        let e = expm(&n).unwrap();
        let expect = [
            (0, 0, 1.0),
            (1, 1, 1.0),
            (2, 2, 1.0),
            (0, 1, 1.0),
            (1, 2, 1.0),
            (0, 2, 0.5),
        ];
        for (i, j, v) in expect {
            assert!((e.get(i, j) - v).abs() < 1e-14);
        }

        // Symmetric case against a brute Taylor sum with scaling.
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let b = random_matrix(&mut rng, 8, 8);
        let mut sym = Matrix::zeros(8, 8);
        for i in 0..8 {
            for j in 0..8 {
                sym.set(i, j, 0.5 * (b.get(i, j) + b.get(j, i)));
            }
        }
        let e = expm(&sym).unwrap();
        // Oracle: Taylor series of exp(sym/16), squared four times.
        let mut half = sym.clone();
        half.scale(1.0 / 16.0);
        let mut small = Matrix::identity(8);
        let mut pw = Matrix::identity(8);
        let mut fact = 1.0;
        for k in 1..40 {
            pw = pw.matmul(&half);
            fact *= k as f64;
            let mut t = pw.clone();
            t.scale(1.0 / fact);
            small.add_assign(&t);
        }
        let mut oracle = small;
        for _ in 0..4 {
            oracle = oracle.matmul(&oracle);
        }
        let rel = e.sub(&oracle).frobenius_norm() / oracle.frobenius_norm();
        assert!(rel < 1e-12, "{rel:.3e}");
    }
}
