//! Dense tensors and matrices over a [`Scalar`].
//!
//! Tensors are row-major over their declared index order. An operator on
//! `V^{⊗k}` is a rank-`2k` tensor read as `⟨out…|M|in…⟩`: the first `k`
//! indices are outputs, the last `k` inputs.

use alloc::vec;
use alloc::vec::Vec;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TensorError {
    #[error("extent mismatch: index {a} has extent {ea}, index {b} has extent {eb}")]
    Extent { a: usize, ea: usize, b: usize, eb: usize },
    #[error("index {0} out of range")]
    Index(usize),
    #[error("index {0} used twice in a contraction")]
    Repeated(usize),
    #[error("operator rank mismatch: {0} vs {1}")]
    Rank(usize, usize),
    #[error("data length {got} does not match shape product {want}")]
    Length { got: usize, want: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor<S> {
    shape: Vec<usize>,
    data: Vec<S>,
}

impl<S: Scalar> Tensor<S> {
    pub fn zeros(shape: &[usize]) -> Self {
        let len = shape.iter().product();
        Tensor { shape: shape.to_vec(), data: vec![S::zero(); len] }
    }

    pub fn from_vec(shape: &[usize], data: Vec<S>) -> Result<Self, TensorError> {
        let want: usize = shape.iter().product();
        if data.len() != want {
            return Err(TensorError::Length { got: data.len(), want });
        }
        Ok(Tensor { shape: shape.to_vec(), data })
    }

    pub fn from_fn(shape: &[usize], mut f: impl FnMut(&[usize]) -> S) -> Self {
        let len: usize = shape.iter().product();
        let mut idx = vec![0usize; shape.len()];
        let mut data = Vec::with_capacity(len);
        for _ in 0..len {
            data.push(f(&idx));
            bump(&mut idx, shape);
        }
        Tensor { shape: shape.to_vec(), data }
    }

    /// Identity operator on `V^{⊗k}`.
    pub fn identity(n: usize, k: usize) -> Self {
        Tensor::from_fn(&vec![n; 2 * k], |i| {
            if i[..k] == i[k..] {
                S::one()
            } else {
                S::zero()
            }
        })
    }

    /// The flip `⟨n,l|P|k,m⟩ = δ^n_m δ^l_k` on `V⊗V`.
    pub fn flip(n: usize) -> Self {
        Tensor::from_fn(&[n; 4], |i| {
            if i[0] == i[3] && i[1] == i[2] {
                S::one()
            } else {
                S::zero()
            }
        })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn into_data(self) -> Vec<S> {
        self.data
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.shape.len());
        idx.iter().zip(&self.shape).fold(0, |acc, (i, e)| acc * e + i)
    }

    pub fn get(&self, idx: &[usize]) -> &S {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: S) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Tensor { shape: self.shape.clone(), data: self.data.iter().map(f).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.shape, o.shape, "shape mismatch");
        Tensor {
            shape: self.shape.clone(),
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.shape, o.shape, "shape mismatch");
        Tensor {
            shape: self.shape.clone(),
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.magnitude()).fold(0.0, f64::max)
    }

    /// Reshapes an operator tensor of rank `2k` into a square matrix.
    pub fn to_matrix(&self) -> Result<Matrix<S>, TensorError> {
        if !self.rank().is_multiple_of(2) {
            return Err(TensorError::Rank(self.rank(), self.rank() + 1));
        }
        let k = self.rank() / 2;
        let rows: usize = self.shape[..k].iter().product();
        let cols: usize = self.shape[k..].iter().product();
        Ok(Matrix { rows, cols, data: self.data.clone() })
    }

    pub fn from_matrix(m: &Matrix<S>, shape: &[usize]) -> Result<Self, TensorError> {
        Tensor::from_vec(shape, m.data.clone())
    }
}

fn bump(idx: &mut [usize], shape: &[usize]) {
    for p in (0..idx.len()).rev() {
        idx[p] += 1;
        if idx[p] < shape[p] {
            return;
        }
        idx[p] = 0;
    }
}

/// Einstein contraction of `a` and `b` over `pairs` of (a-index, b-index).
/// Free indices keep declared order, `a`'s first.
pub fn contract<S: Scalar>(
    a: &Tensor<S>,
    b: &Tensor<S>,
    pairs: &[(usize, usize)],
) -> Result<Tensor<S>, TensorError> {
    for (i, &(x, y)) in pairs.iter().enumerate() {
        if x >= a.rank() {
            return Err(TensorError::Index(x));
        }
        if y >= b.rank() {
            return Err(TensorError::Index(y));
        }
        if a.shape[x] != b.shape[y] {
            return Err(TensorError::Extent { a: x, ea: a.shape[x], b: y, eb: b.shape[y] });
        }
        if pairs[..i].iter().any(|&(u, v)| u == x || v == y) {
            return Err(TensorError::Repeated(if pairs[..i].iter().any(|p| p.0 == x) {
                x
            } else {
                y
            }));
        }
    }
    let free_a: Vec<usize> = (0..a.rank()).filter(|i| !pairs.iter().any(|p| p.0 == *i)).collect();
    let free_b: Vec<usize> = (0..b.rank()).filter(|i| !pairs.iter().any(|p| p.1 == *i)).collect();
    let sum_shape: Vec<usize> = pairs.iter().map(|p| a.shape[p.0]).collect();
    let out_shape: Vec<usize> =
        free_a.iter().map(|&i| a.shape[i]).chain(free_b.iter().map(|&i| b.shape[i])).collect();
    let sum_len: usize = sum_shape.iter().product();

    let mut ia = vec![0usize; a.rank()];
    let mut ib = vec![0usize; b.rank()];
    Ok(Tensor::from_fn(&out_shape, |out| {
        for (p, &i) in free_a.iter().enumerate() {
            ia[i] = out[p];
        }
        for (p, &i) in free_b.iter().enumerate() {
            ib[i] = out[free_a.len() + p];
        }
        let mut s = vec![0usize; pairs.len()];
        let mut acc = S::zero();
        for _ in 0..sum_len {
            for (p, &(x, y)) in pairs.iter().enumerate() {
                ia[x] = s[p];
                ib[y] = s[p];
            }
            let u = a.get(&ia);
            if !u.is_zero() {
                acc.add_assign(&u.mul(b.get(&ib)));
            }
            bump(&mut s, &sum_shape);
        }
        acc
    }))
}

/// Product `a·b` of two operators on `V^{⊗k}`.
pub fn operator_compose<S: Scalar>(a: &Tensor<S>, b: &Tensor<S>) -> Result<Tensor<S>, TensorError> {
    if a.rank() != b.rank() || !a.rank().is_multiple_of(2) {
        return Err(TensorError::Rank(a.rank(), b.rank()));
    }
    let k = a.rank() / 2;
    let pairs: Vec<(usize, usize)> = (0..k).map(|i| (k + i, i)).collect();
    contract(a, b, &pairs)
}

/// Dense row-major matrix; products skip zero entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &S) {
        self.data[i * self.cols + j].add_assign(v);
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix shape mismatch");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o.data[k * o.cols + j];
                    if !b.is_zero() {
                        out.data[i * o.cols + j].add_assign(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    /// `self += a·b`.
    pub fn add_product(&mut self, a: &Self, b: &Self) {
        assert_eq!((self.rows, self.cols), (a.rows, b.cols), "matrix shape mismatch");
        assert_eq!(a.cols, b.rows, "matrix shape mismatch");
        for i in 0..a.rows {
            for k in 0..a.cols {
                let x = &a.data[i * a.cols + k];
                if x.is_zero() {
                    continue;
                }
                for j in 0..b.cols {
                    let y = &b.data[k * b.cols + j];
                    if !y.is_zero() {
                        self.data[i * b.cols + j].add_assign(&x.mul(y));
                    }
                }
            }
        }
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.rows, "vector length mismatch");
        let mut out = vec![S::zero(); self.cols];
        for (k, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (o, b) in out.iter_mut().zip(&self.data[k * self.cols..(k + 1) * self.cols]) {
                if !b.is_zero() {
                    o.add_assign(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.mul(c)).collect() }
    }

    pub fn add_scaled(&mut self, o: &Self, c: &S) {
        for (a, b) in self.data.iter_mut().zip(&o.data) {
            if !b.is_zero() {
                a.add_assign(&b.mul(c));
            }
        }
    }

    pub fn kron(&self, o: &Self) -> Self {
        Matrix::from_fn(self.rows * o.rows, self.cols * o.cols, |i, j| {
            self.get(i / o.rows, j / o.cols).mul(o.get(i % o.rows, j % o.cols))
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.magnitude()).fold(0.0, f64::max)
    }

    /// Position and value of the largest entry, if any is nonzero.
    pub fn argmax_abs(&self) -> Option<(usize, usize, f64)> {
        let mut best: Option<(usize, usize, f64)> = None;
        for (p, x) in self.data.iter().enumerate() {
            let m = x.magnitude();
            if !x.is_zero() && best.is_none_or(|b| m > b.2) {
                best = Some((p / self.cols, p % self.cols, m));
            }
        }
        best
    }

    /// Gauss-Jordan inverse with largest-magnitude pivoting; `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let mut piv = None;
            let mut best = 0.0;
            for r in col..n {
                let x = a.get(r, col);
                if !x.is_zero() {
                    let m = x.magnitude();
                    if piv.is_none() || m > best {
                        piv = Some(r);
                        best = m;
                    }
                }
            }
            let p = piv?;
            if !S::is_exact() && best < 1e-300 {
                return None;
            }
            if p != col {
                a.swap_rows(p, col);
                inv.swap_rows(p, col);
            }
            let d = a.get(col, col).inv()?;
            a.scale_row(col, &d);
            inv.scale_row(col, &d);
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                a.axpy_row(r, col, &f);
                inv.axpy_row(r, col, &f);
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, c: &S) {
        for j in 0..self.cols {
            let v = self.data[r * self.cols + j].mul(c);
            self.data[r * self.cols + j] = v;
        }
    }

    /// row[r] -= f · row[src]
    fn axpy_row(&mut self, r: usize, src: usize, f: &S) {
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if s.is_zero() {
                continue;
            }
            let v = self.data[r * self.cols + j].sub(&s.mul(f));
            self.data[r * self.cols + j] = v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn graded(signs: &[i64]) -> Tensor<Exact> {
        let n = signs.len();
        Tensor::from_fn(&[n; 4], |i| {
            if i[0] == i[3] && i[1] == i[2] {
                Exact::from_i64(signs[i[0]] * signs[i[1]])
            } else {
                Exact::zero()
            }
        })
    }

    #[test]
    fn flip_squares_to_identity() {
        for n in 1..=3 {
            let f = Tensor::<Exact>::flip(n);
            let sq = contract(&f, &f, &[(2, 0), (3, 1)]).unwrap();
            assert_eq!(sq, Tensor::identity(n, 2));
            assert_eq!(operator_compose(&f, &f).unwrap(), Tensor::identity(n, 2));
        }
    }

    #[test]
    fn identity_contracts_to_vector() {
        for n in 1..=3 {
            let v = Tensor::from_fn(&[n], |i| Exact::from_i64(i[0] as i64 + 2));
            let id = Tensor::<Exact>::identity(n, 1);
            assert_eq!(contract(&id, &v, &[(1, 0)]).unwrap(), v);
            let m = Tensor::from_fn(&[n; 4], |i| Exact::from_i64((i[0] * 7 + i[1] * 3 + i[2] + i[3]) as i64));
            assert_eq!(operator_compose(&Tensor::identity(n, 2), &m).unwrap(), m);
        }
    }

    #[test]
    fn graded_flip_is_involutive() {
        let r = graded(&[1, -1]);
        let sq = contract(&r, &r, &[(2, 0), (3, 1)]).unwrap();
        // brute force: Σ_{a,b} R[n][l][a][b] R[a][b][k][m]
        let mut brute = Tensor::<Exact>::zeros(&[2; 4]);
        for n in 0..2 {
            for l in 0..2 {
                for k in 0..2 {
                    for m in 0..2 {
                        let mut acc = Exact::zero();
                        for a in 0..2 {
                            for b in 0..2 {
                                acc = acc.add(&r.get(&[n, l, a, b]).mul(r.get(&[a, b, k, m])));
                            }
                        }
                        brute.set(&[n, l, k, m], acc);
                    }
                }
            }
        }
        assert_eq!(sq, brute);
        assert_eq!(sq, Tensor::identity(2, 2));
        assert_eq!(operator_compose(&r, &r).unwrap(), Tensor::identity(2, 2));
    }

    #[test]
    fn contraction_errors() {
        let a = Tensor::<Exact>::zeros(&[2, 3]);
        let b = Tensor::<Exact>::zeros(&[2, 2]);
        assert!(matches!(contract(&a, &b, &[(1, 0)]), Err(TensorError::Extent { .. })));
        assert!(matches!(contract(&a, &b, &[(5, 0)]), Err(TensorError::Index(5))));
        let c = Tensor::<Exact>::zeros(&[2; 4]);
        assert!(matches!(operator_compose(&a, &c), Err(TensorError::Rank(2, 4))));
    }

    #[test]
    fn matrix_inverse_roundtrip() {
        let m = Matrix::from_fn(3, 3, |i, j| Exact::from_i64(((i + 1) * (j + 2) % 5) as i64 + (i == j) as i64));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3));
        let sing = Matrix::from_fn(2, 2, |_, _| Exact::one());
        assert!(sing.inverse().is_none());
    }
}
