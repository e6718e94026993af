//! Uniform sampling on the unit sphere and on the Stiefel manifold.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{check_dims, Error, Result};

/// A point on the unit sphere `S^{d-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector(Vec<f64>);

impl UnitVector {
    /// Normalizes `coords`; fails on an empty or (numerically) zero vector.
    pub fn from_coords(mut coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidDimension { p: 1, d: 0 });
        }
        let norm = coords.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 1e-300) || !norm.is_finite() {
            return Err(Error::Domain("cannot normalize a zero or non-finite vector".into()));
        }
        coords.iter_mut().for_each(|x| *x /= norm);
        Ok(Self(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for UnitVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// A `d x p` matrix with orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    columns: DMatrix<f64>,
}

impl SubspaceBasis {
    /// The first `p` coordinate directions of `R^d`.
    pub fn coordinate(d: usize, p: usize) -> Result<Self> {
        check_dims(p, d)?;
        Ok(Self { columns: DMatrix::identity(d, p) })
    }

    /// Wraps `columns` after checking orthonormality to `1e-10`.
    pub fn from_matrix(columns: DMatrix<f64>) -> Result<Self> {
        check_dims(columns.ncols(), columns.nrows())?;
        let basis = Self { columns };
        let defect = basis.orthonormality_defect();
        if defect > 1e-10 {
            return Err(Error::Domain(format!("columns are not orthonormal (defect {defect:e})")));
        }
        Ok(basis)
    }

    pub fn ambient_dim(&self) -> usize {
        self.columns.nrows()
    }

    pub fn subspace_dim(&self) -> usize {
        self.columns.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.columns
    }

    pub fn column(&self, i: usize) -> &[f64] {
        let d = self.ambient_dim();
        &self.columns.as_slice()[i * d..(i + 1) * d]
    }

    /// `max |B^T B - I|` over all entries.
    pub fn orthonormality_defect(&self) -> f64 {
        let gram = self.columns.tr_mul(&self.columns);
        let p = gram.nrows();
        let mut worst = 0.0f64;
        for j in 0..p {
            for i in 0..p {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[(i, j)] - target).abs());
            }
        }
        worst
    }

    /// `B^T v` for a d-vector `v`.
    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        (0..self.subspace_dim())
            .map(|i| self.column(i).iter().zip(v).map(|(b, x)| b * x).sum())
            .collect()
    }

    /// `B z` for a p-vector `z`.
    pub fn lift(&self, z: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.ambient_dim()];
        for (i, &zi) in z.iter().enumerate() {
            if zi != 0.0 {
                for (o, b) in out.iter_mut().zip(self.column(i)) {
                    *o += zi * b;
                }
            }
        }
        out
    }

    /// Left-multiplies by a `d x d` matrix, e.g. a fixed rotation.
    pub fn rotated(&self, q: &DMatrix<f64>) -> Self {
        Self { columns: q * &self.columns }
    }

    pub fn transpose_square(&self) -> Option<Self> {
        (self.ambient_dim() == self.subspace_dim()).then(|| Self { columns: self.columns.transpose() })
    }
}

/// Draws `g` uniformly on `S^{d-1}` by normalizing a standard Gaussian vector.
pub fn sample_unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<UnitVector> {
    if d == 0 {
        return Err(Error::InvalidDimension { p: 1, d });
    }
    let mut buf = vec![0.0; d];
    fill_unit_vector(&mut buf, rng);
    Ok(UnitVector(buf))
}

/// Allocation-free variant of [`sample_unit_vector`]; `out.len()` is the dimension.
pub fn fill_unit_vector<R: Rng + ?Sized>(out: &mut [f64], rng: &mut R) {
    loop {
        let mut sq = 0.0;
        for x in out.iter_mut() {
            *x = rng.sample(StandardNormal);
            sq += *x * *x;
        }
        let norm = sq.sqrt();
        if norm >= 1e-300 {
            out.iter_mut().for_each(|x| *x /= norm);
            return;
        }
    }
}

/// Draws `B` uniformly on the Stiefel manifold `V_{p,d}`.
///
/// Gaussian `d x p` matrix, thin QR, then each column of `Q` is multiplied by
/// the sign of the matching diagonal entry of `R`. Without the sign fix the
/// result is not Haar distributed.
pub fn sample_stiefel<R: Rng + ?Sized>(d: usize, p: usize, rng: &mut R) -> Result<SubspaceBasis> {
    check_dims(p, d)?;
    let gauss = DMatrix::<f64>::from_fn(d, p, |_, _| rng.sample(StandardNormal));
    let qr = gauss.qr();
    let r_diag: DVector<f64> = qr.r().diagonal();
    let mut q = qr.q();
    for (j, r) in r_diag.iter().enumerate() {
        if *r < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    Ok(SubspaceBasis { columns: q })
}
