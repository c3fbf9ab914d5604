//! Dense complex tensors and matrices.
//!
//! A tensor of dimensions `[N_1, .., N_P]` stores its entries in a flat buffer
//! with the first index varying fastest, so that element `(n_1, .., n_P)`
//! (1-based) sits at linear position
//! `n_1 + (n_2 - 1) N_1 + .. + (n_P - 1) N_{P-1} .. N_1`. This layout is the
//! tensorization map itself: reshaping a vector into a tensor and back is a
//! no-op on the buffer, and the vectorization of a rank-one tensor is exactly
//! the reversed Kronecker chain of its factors.
//!
//! Everything in this crate uses 0-based indices and modes; [`linear_index`]
//! is the single place where a multi-index is mapped to a buffer position.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDims {
                dims: vec![rows, cols],
                reason: "matrix dimensions must be positive",
            });
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for c in 0..cols {
            for r in 0..rows {
                m.data[r + c * rows] = f(r, c);
            }
        }
        m
    }

    /// Outer product `left · rightᴴ`.
    pub fn outer_conj(left: &[Complex64], right: &[Complex64]) -> Self {
        Self::from_fn(left.len(), right.len(), |r, c| left[r] * right[c].conj())
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows * columns.len());
        for col in columns {
            if col.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    got: col.len(),
                });
            }
            data.extend_from_slice(col);
        }
        Self::new(rows, columns.len(), data)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row + col * self.rows]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row + col * self.rows] = value;
    }

    #[inline]
    pub fn column(&self, col: usize) -> &[Complex64] {
        &self.data[col * self.rows..(col + 1) * self.rows]
    }

    pub fn row(&self, row: usize) -> Vec<Complex64> {
        (0..self.cols).map(|c| self.get(row, c)).collect()
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    /// `self · x`.
    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols, "mul_vec: length mismatch");
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for (c, xc) in x.iter().enumerate() {
            for (o, m) in out.iter_mut().zip(self.column(c)) {
                *o += m * xc;
            }
        }
        out
    }

    /// `selfᴴ · x`.
    pub fn conj_mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.rows, "conj_mul_vec: length mismatch");
        (0..self.cols)
            .map(|c| {
                self.column(c)
                    .iter()
                    .zip(x)
                    .map(|(m, xr)| m.conj() * xr)
                    .sum()
            })
            .collect()
    }

    /// `self · other`.
    pub fn matmul(&self, other: &ComplexMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "matmul: inner dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for c in 0..other.cols {
            let dst = &mut out.data[c * self.rows..(c + 1) * self.rows];
            for k in 0..self.cols {
                let b = other.get(k, c);
                if b == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (d, a) in dst.iter_mut().zip(self.column(k)) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// Gram matrix `self · selfᴴ` (rows × rows, Hermitian).
    pub fn gram(&self) -> Self {
        let n = self.rows;
        let mut out = Self::zeros(n, n);
        for c in 0..self.cols {
            let col = self.column(c);
            for j in 0..n {
                let cj = col[j].conj();
                for (i, x) in col.iter().enumerate().skip(j) {
                    out.data[i + j * n] += x * cj;
                }
            }
        }
        for j in 0..n {
            out.data[j + j * n].im = 0.0;
            for i in j + 1..n {
                out.data[j + i * n] = out.data[i + j * n].conj();
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm(&self.data)
    }
}

/// Dense order-P complex tensor in first-index-fastest layout.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexTensor {
    dims: Vec<usize>,
    data: Vec<Complex64>,
}

impl ComplexTensor {
    pub fn new(dims: Vec<usize>, data: Vec<Complex64>) -> Result<Self> {
        validate_dims(&dims)?;
        let expected: usize = dims.iter().product();
        if data.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: data.len(),
            });
        }
        Ok(Self { dims, data })
    }

    #[inline]
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.dims.len()
    }

    #[inline]
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    /// Element at the 0-based multi-index `index`.
    pub fn get(&self, index: &[usize]) -> Complex64 {
        self.data[linear_index(&self.dims, index)]
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm(&self.data)
    }
}

pub(crate) fn validate_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::InvalidDims {
            dims: dims.to_vec(),
            reason: "tensor order must be at least one",
        });
    }
    if dims.contains(&0) {
        return Err(Error::InvalidDims {
            dims: dims.to_vec(),
            reason: "every dimension must be positive",
        });
    }
    Ok(())
}

/// Buffer position of the 0-based multi-index `index` (first index fastest).
///
/// Panics if the index has the wrong order or any component is out of range.
pub fn linear_index(dims: &[usize], index: &[usize]) -> usize {
    assert_eq!(dims.len(), index.len(), "multi-index has wrong order");
    let mut pos = 0;
    let mut stride = 1;
    for (&d, &i) in dims.iter().zip(index) {
        assert!(i < d, "index {i} out of range for dimension {d}");
        pos += i * stride;
        stride *= d;
    }
    pos
}

/// Reshapes `y` into a tensor of dimensions `dims`.
pub fn tensorize(y: &[Complex64], dims: &[usize]) -> Result<ComplexTensor> {
    ComplexTensor::new(dims.to_vec(), y.to_vec())
}

/// Inverse of [`tensorize`].
pub fn vectorize(t: &ComplexTensor) -> Vec<Complex64> {
    t.data.clone()
}

/// Mode-`mode` unfolding (0-based mode).
///
/// The result has `N_mode` rows and `∏_{q≠mode} N_q` columns. Columns are
/// ordered with the remaining modes in increasing order, lower modes varying
/// fastest, so that the unfolding of `a_1 ∘ .. ∘ a_P` is
/// `a_mode (a_P ⊗ .. ⊗ a_{mode+1} ⊗ a_{mode-1} ⊗ .. ⊗ a_1)ᵀ`.
pub fn unfold(t: &ComplexTensor, mode: usize) -> Result<ComplexMatrix> {
    if mode >= t.order() {
        return Err(Error::ModeOutOfRange {
            mode,
            order: t.order(),
        });
    }
    let rows = t.dims[mode];
    let inner: usize = t.dims[..mode].iter().product();
    let outer: usize = t.dims[mode + 1..].iter().product();
    let cols = inner * outer;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for o in 0..outer {
        for r in 0..rows {
            let src = inner * (r + rows * o);
            for i in 0..inner {
                out.set(r, i + inner * o, t.data[src + i]);
            }
        }
    }
    Ok(out)
}

/// Kronecker product: element `i·len(b) + j` is `a_i · b_j`.
pub fn kron(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        out.extend(b.iter().map(|y| x * y));
    }
    out
}

/// `factors[P-1] ⊗ .. ⊗ factors[0]`; the first factor varies fastest.
pub fn kron_chain_reversed<V: AsRef<[Complex64]>>(factors: &[V]) -> Vec<Complex64> {
    let mut acc = vec![Complex64::new(1.0, 0.0)];
    for f in factors {
        acc = kron(f.as_ref(), &acc);
    }
    acc
}

/// Rank-one tensor `factors[0] ∘ factors[1] ∘ .. ∘ factors[P-1]`.
pub fn rank_one_tensor<V: AsRef<[Complex64]>>(factors: &[V]) -> Result<ComplexTensor> {
    if factors.is_empty() {
        return Err(Error::EmptyFactors);
    }
    let dims: Vec<usize> = factors.iter().map(|f| f.as_ref().len()).collect();
    validate_dims(&dims)?;
    Ok(ComplexTensor {
        dims,
        data: kron_chain_reversed(factors),
    })
}

pub fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

/// `xᴴ y`.
pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}
