//! Dense symmetric matrices and a Cholesky solver.

use crate::error::{Error, Result};

/// Dense symmetric matrix stored row-major in full.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, v) in diag.iter().enumerate() {
            m.set(i, i, *v);
        }
        m
    }

    /// Builds from the upper triangle `f(i, k)`, `i <= k`.
    pub fn from_upper_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for k in i..dim {
                m.set(i, k, f(i, k));
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.data[i * self.dim + k]
    }

    /// Sets both `(i, k)` and `(k, i)`.
    pub fn set(&mut self, i: usize, k: usize, v: f64) {
        self.data[i * self.dim + k] = v;
        self.data[k * self.dim + i] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: f64, other: &SymMatrix) -> Result<SymMatrix> {
        check_dim(self.dim, other.dim)?;
        Ok(SymMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + s * b)
                .collect(),
        })
    }

    /// Leading `n x n` block.
    pub fn leading(&self, n: usize) -> SymMatrix {
        assert!(n <= self.dim);
        SymMatrix::from_upper_fn(n, |i, k| self.get(i, k))
    }

    pub fn mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim, v.len())?;
        Ok((0..self.dim).map(|i| dot(self.row(i), v)).collect())
    }

    /// `vᵀ A v`.
    pub fn quadratic_form(&self, v: &[f64]) -> Result<f64> {
        Ok(dot(v, &self.mul_vec(v)?))
    }

    /// `D A D` with `D = diag(d)`.
    pub fn congruence_diag(&self, d: &[f64]) -> Result<SymMatrix> {
        check_dim(self.dim, d.len())?;
        Ok(SymMatrix::from_upper_fn(self.dim, |i, k| {
            d[i] * self.get(i, k) * d[k]
        }))
    }

    /// Largest `|A_ik - A_ki|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for k in i + 1..self.dim {
                worst = worst.max((self.get(i, k) - self.get(k, i)).abs());
            }
        }
        worst
    }

    pub fn cholesky(&self) -> Result<Cholesky> {
        Cholesky::factor(self)
    }
}

/// Lower-triangular factor `L` with `A = L Lᵀ`.
#[derive(Clone, Debug)]
pub struct Cholesky {
    dim: usize,
    lower: Vec<f64>,
}

impl Cholesky {
    pub fn factor(a: &SymMatrix) -> Result<Self> {
        let n = a.dim;
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut d = a.get(j, j);
            for p in 0..j {
                d -= l[j * n + p] * l[j * n + p];
            }
            if !d.is_finite() || d <= 0.0 {
                return Err(Error::NotPositiveDefinite { pivot: j, value: d });
            }
            let d = d.sqrt();
            l[j * n + j] = d;
            for i in j + 1..n {
                let mut s = a.get(i, j);
                for p in 0..j {
                    s -= l[i * n + p] * l[j * n + p];
                }
                l[i * n + j] = s / d;
            }
        }
        Ok(Self { dim: n, lower: l })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Factor of the leading `n x n` block of the original matrix, which is
    /// the leading block of `L`.
    pub fn leading(&self, n: usize) -> Cholesky {
        assert!(n <= self.dim);
        let mut lower = vec![0.0; n * n];
        for i in 0..n {
            lower[i * n..i * n + i + 1].copy_from_slice(&self.lower[i * self.dim..i * self.dim + i + 1]);
        }
        Cholesky { dim: n, lower }
    }

    /// Solves `L y = b`.
    pub fn forward(&self, b: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim, b.len())?;
        let n = self.dim;
        let mut y = b.to_vec();
        for i in 0..n {
            let row = &self.lower[i * n..i * n + i];
            let s = row.iter().zip(&y[..i]).fold(y[i], |s, (l, v)| s - l * v);
            y[i] = s / self.lower[i * n + i];
        }
        Ok(y)
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim;
        let mut x = self.forward(b)?;
        for i in (0..n).rev() {
            // column i of L below the diagonal
            let s = (i + 1..n)
                .zip(&x[i + 1..])
                .fold(x[i], |s, (p, v)| s - self.lower[p * n + i] * v);
            x[i] = s / self.lower[i * n + i];
        }
        Ok(x)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |acc, (x, y)| acc + x * y)
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        Err(Error::DimensionMismatch { expected, got })
    } else {
        Ok(())
    }
}
