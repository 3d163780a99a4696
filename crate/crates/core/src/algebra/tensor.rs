use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Symmetric covariant 2-tensor at a point, stored as a dense `n x n` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Sym2Tensor {
    entries: DMatrix<f64>,
}

impl Sym2Tensor {
    /// Accepts a square matrix whose asymmetry is within `1e-12` of its largest
    /// entry (absolute floor `1e-14`) and stores its symmetric part.
    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::InvalidArgument(format!(
                "symmetric tensor needs a square matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let scale = matrix.amax();
        let asym = (&matrix - matrix.transpose()).amax();
        if asym > 1e-12 * scale + 1e-14 {
            return Err(Error::InvalidArgument(format!(
                "matrix is not symmetric (asymmetry {asym:e})"
            )));
        }
        let entries = (&matrix + matrix.transpose()) * 0.5;
        Ok(Self { entries })
    }

    /// Builds the tensor from its upper triangle; `f(i, j)` is only called with `i <= j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                entries[(i, j)] = v;
                entries[(j, i)] = v;
            }
        }
        Self { entries }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            entries: DMatrix::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            entries: DMatrix::identity(n, n),
        }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, |i, j| if i == j { values[i] } else { 0.0 })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.amax()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            entries: &self.entries * s,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim(), other.dim())?;
        Ok(Self {
            entries: &self.entries + &other.entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim(), other.dim())?;
        Ok(Self {
            entries: &self.entries - &other.entries,
        })
    }

    /// Mixed form `g^{ik} h_{kj}`.
    pub fn mixed(&self, g: &Metric) -> Result<DMatrix<f64>> {
        same_dim(self.dim(), g.dim())?;
        Ok(g.inverse().matrix() * &self.entries)
    }

    /// Both indices raised, `g^{ia} h_{ab} g^{bj}`.
    pub fn raised(&self, g: &Metric) -> Result<DMatrix<f64>> {
        same_dim(self.dim(), g.dim())?;
        let inv = g.inverse().matrix();
        Ok(inv * &self.entries * inv)
    }

    /// Metric trace `g^{ij} h_{ij}`.
    pub fn trace(&self, g: &Metric) -> Result<f64> {
        Ok(self.mixed(g)?.trace())
    }

    /// `|h|^2 = g^{ia} g^{jb} h_{ij} h_{ab}`.
    pub fn norm_sq(&self, g: &Metric) -> Result<f64> {
        let m = self.mixed(g)?;
        Ok((&m * &m).trace())
    }

    /// Components in the basis `e'_i = P_{ai} e_a`, i.e. `P^T h P`.
    pub fn change_basis(&self, p: &DMatrix<f64>) -> Result<Self> {
        if p.nrows() != self.dim() || p.ncols() != self.dim() {
            return Err(Error::InvalidArgument(
                "change of basis matrix has the wrong shape".into(),
            ));
        }
        let m = p.transpose() * &self.entries * p;
        Ok(Self {
            entries: (&m + m.transpose()) * 0.5,
        })
    }
}

/// Riemannian metric at a point with its cached inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric {
    value: Sym2Tensor,
    inverse: Sym2Tensor,
    euclidean: bool,
}

impl Metric {
    /// Fails with a degenerate-metric error unless `value` is positive definite.
    pub fn new(value: Sym2Tensor) -> Result<Self> {
        let n = value.dim();
        if !value.matrix().iter().all(|v| v.is_finite()) {
            return Err(Error::DegenerateMetric("non-finite metric entry".into()));
        }
        let chol = value
            .matrix()
            .clone()
            .cholesky()
            .ok_or_else(|| Error::DegenerateMetric("metric is not positive definite".into()))?;
        let inv = chol.inverse();
        let inverse = Sym2Tensor {
            entries: (&inv + inv.transpose()) * 0.5,
        };
        let euclidean = *value.matrix() == DMatrix::<f64>::identity(n, n);
        Ok(Self {
            value,
            inverse,
            euclidean,
        })
    }

    pub fn euclidean(n: usize) -> Self {
        Self {
            value: Sym2Tensor::identity(n),
            inverse: Sym2Tensor::identity(n),
            euclidean: true,
        }
    }

    /// `s * identity`, `s > 0`.
    pub fn scaled_identity(n: usize, s: f64) -> Result<Self> {
        Self::new(Sym2Tensor::identity(n).scaled(s))
    }

    pub fn dim(&self) -> usize {
        self.value.dim()
    }

    pub fn value(&self) -> &Sym2Tensor {
        &self.value
    }

    pub fn inverse(&self) -> &Sym2Tensor {
        &self.inverse
    }

    /// True when the stored value is exactly the identity matrix; contractions skip index raising.
    pub fn is_euclidean(&self) -> bool {
        self.euclidean
    }

    pub fn change_basis(&self, p: &DMatrix<f64>) -> Result<Self> {
        Self::new(self.value.change_basis(p)?)
    }
}

/// Covariant 4-tensor at a point, dense `n^4` storage indexed `(i, j, k, l)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Riem4Tensor {
    n: usize,
    entries: Vec<f64>,
}

impl Riem4Tensor {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![0.0; n * n * n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize, usize) -> f64) -> Self {
        let mut entries = Vec::with_capacity(n * n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        entries.push(f(i, j, k, l));
                    }
                }
            }
        }
        Self { n, entries }
    }

    /// Curvature tensor whose only nonzero components are `T_{ijij} = K_ij`
    /// (and the entries forced by symmetry), for a symmetric table of sectional
    /// curvatures. The diagonal of `sectional` is ignored.
    pub fn from_sectional(sectional: &DMatrix<f64>) -> Result<Self> {
        let n = sectional.nrows();
        if sectional.ncols() != n {
            return Err(Error::InvalidArgument("sectional table must be square".into()));
        }
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let k = 0.5 * (sectional[(i, j)] + sectional[(j, i)]);
                t.set(i, j, i, j, k);
                t.set(i, j, j, i, -k);
            }
        }
        Ok(t)
    }

    #[inline]
    fn index(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.n + j) * self.n + k) * self.n + l
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.entries[self.index(i, j, k, l)]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        let idx = self.index(i, j, k, l);
        self.entries[idx] = v;
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_dim(self.n, other.n)?;
        Ok(Self {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        same_dim(self.n, other.n)?;
        Ok(Self {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Largest violation of antisymmetry in each pair, pair symmetry and the
    /// first Bianchi identity.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let t = self.get(i, j, k, l);
                        worst = worst
                            .max((t + self.get(j, i, k, l)).abs())
                            .max((t + self.get(i, j, l, k)).abs())
                            .max((t - self.get(k, l, i, j)).abs())
                            .max((t + self.get(i, k, l, j) + self.get(i, l, j, k)).abs());
                    }
                }
            }
        }
        worst
    }

    /// Applies `m` to one index slot: `out[.. a ..] = sum_b m[(a, b)] t[.. b ..]`.
    pub(crate) fn contract_slot(&self, slot: usize, m: &DMatrix<f64>) -> Self {
        let n = self.n;
        let stride = n.pow(3 - slot as u32);
        let block = stride * n;
        let mut out = vec![0.0; self.entries.len()];
        for outer in (0..self.entries.len()).step_by(block) {
            for inner in 0..stride {
                for a in 0..n {
                    let mut acc = 0.0;
                    for b in 0..n {
                        acc += m[(a, b)] * self.entries[outer + b * stride + inner];
                    }
                    out[outer + a * stride + inner] = acc;
                }
            }
        }
        Self { n, entries: out }
    }

    /// All four indices raised with `g^{-1}`.
    pub fn raised(&self, g: &Metric) -> Result<Self> {
        same_dim(self.n, g.dim())?;
        if g.is_euclidean() {
            return Ok(self.clone());
        }
        let inv = g.inverse().matrix();
        let mut t = self.contract_slot(0, inv);
        for slot in 1..4 {
            t = t.contract_slot(slot, inv);
        }
        Ok(t)
    }

    /// Components in the basis `e'_i = P_{ai} e_a`.
    pub fn change_basis(&self, p: &DMatrix<f64>) -> Result<Self> {
        if p.nrows() != self.n || p.ncols() != self.n {
            return Err(Error::InvalidArgument(
                "change of basis matrix has the wrong shape".into(),
            ));
        }
        let pt = p.transpose();
        let mut t = self.contract_slot(0, &pt);
        for slot in 1..4 {
            t = t.contract_slot(slot, &pt);
        }
        Ok(t)
    }
}

pub(crate) fn same_dim(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "dimension mismatch: {a} vs {b}"
        )))
    }
}
