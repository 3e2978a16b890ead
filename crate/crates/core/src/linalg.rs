//! Small dense vector utilities: orthonormal bases, projections and kernels.
//!
//! Dimensions here never exceed a few dozen, so everything is plain
//! `DVector<f64>` arithmetic. Orthogonalization is modified Gram-Schmidt
//! with a second pass against the already accepted vectors.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

pub type Vector = DVector<f64>;

/// Acceptance threshold used when completing a basis from a pool of
/// orthonormal candidates. Any orthonormal pool of fewer than 10^6 vectors
/// always contains a candidate whose residual exceeds this.
const COMPLETION_PIVOT: f64 = 1e-3;

/// An ordered orthonormal family.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    vectors: Vec<Vector>,
}

impl Basis {
    /// Wraps vectors that are already orthonormal, checking the claim.
    pub fn from_orthonormal(vectors: Vec<Vector>, tol: f64) -> Result<Self> {
        let defect = orthonormality_defect(&vectors);
        if defect > tol {
            return Err(Error::NotOrthonormal { defect });
        }
        Ok(Basis { vectors })
    }

    pub fn empty() -> Self {
        Basis {
            vectors: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, i: usize) -> &Vector {
        &self.vectors[i]
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Vector> {
        self.vectors.iter()
    }

    pub fn into_vectors(self) -> Vec<Vector> {
        self.vectors
    }

    /// Coordinates of `x` with respect to the basis: `(<x, e_i>)_i`.
    pub fn coordinates(&self, x: &Vector) -> Vec<f64> {
        self.vectors.iter().map(|e| e.dot(x)).collect()
    }

    /// The vector `sum_i c_i e_i`.
    pub fn combine(&self, coeffs: &[f64]) -> Vector {
        let dim = self.vectors.first().map_or(0, |v| v.len());
        let mut out = Vector::zeros(dim);
        for (c, e) in coeffs.iter().zip(&self.vectors) {
            out.axpy(*c, e, 1.0);
        }
        out
    }
}

/// Largest deviation `|<v_i, v_j> - delta_ij|` over the family.
pub fn orthonormality_defect(vectors: &[Vector]) -> f64 {
    let mut worst = 0.0f64;
    for (i, a) in vectors.iter().enumerate() {
        for (j, b) in vectors.iter().enumerate().skip(i) {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((a.dot(b) - target).abs());
        }
    }
    worst
}

fn check_dims(vectors: &[Vector]) -> Result<()> {
    if let Some(first) = vectors.first() {
        for v in vectors {
            if v.len() != first.len() {
                return Err(Error::DimensionMismatch {
                    expected: first.len(),
                    got: v.len(),
                });
            }
        }
    }
    Ok(())
}

/// Removes from `v` its components along the (orthonormal) `against`, twice.
fn orthogonalize(v: &mut Vector, against: &[Vector]) {
    for _ in 0..2 {
        for e in against {
            let c = e.dot(v);
            v.axpy(-c, e, 1.0);
        }
    }
}

/// Orthonormalizes `raw`, leaving the last `keep_tail_fixed` vectors as they
/// are (they must already be orthonormal). The other vectors keep their order
/// and come first in the output.
pub fn gram_schmidt(raw: &[Vector], keep_tail_fixed: usize) -> Result<Basis> {
    check_dims(raw)?;
    if keep_tail_fixed > raw.len() {
        return Err(Error::BadShape(format!(
            "cannot keep {keep_tail_fixed} tail vectors out of {}",
            raw.len()
        )));
    }
    let split = raw.len() - keep_tail_fixed;
    let tail = &raw[split..];
    let defect = orthonormality_defect(tail);
    if defect > Tolerances::default().orthonormality {
        return Err(Error::NotOrthonormal { defect });
    }

    let mut accepted: Vec<Vector> = tail.to_vec();
    let mut head = Vec::with_capacity(split);
    for (index, v) in raw[..split].iter().enumerate() {
        let scale = v.norm();
        let mut w = v.clone();
        orthogonalize(&mut w, &accepted);
        let pivot = w.norm();
        if scale == 0.0 || pivot <= Tolerances::default().rank_pivot * scale {
            return Err(Error::DependentInput {
                index,
                pivot: if scale == 0.0 { 0.0 } else { pivot / scale },
            });
        }
        w /= pivot;
        accepted.push(w.clone());
        head.push(w);
    }
    head.extend_from_slice(tail);
    Ok(Basis { vectors: head })
}

/// Greedily extends the orthonormal `fixed` family with vectors drawn in
/// order from `pool` until it has `target` members. Returns only the new
/// vectors.
pub fn complete_basis(fixed: &[Vector], pool: &[Vector], target: usize) -> Result<Vec<Vector>> {
    check_dims(fixed)?;
    check_dims(pool)?;
    let mut accepted: Vec<Vector> = fixed.to_vec();
    let mut added = Vec::new();
    for v in pool {
        if accepted.len() >= target {
            break;
        }
        let scale = v.norm();
        if scale == 0.0 {
            continue;
        }
        let mut w = v / scale;
        orthogonalize(&mut w, &accepted);
        let pivot = w.norm();
        if pivot > COMPLETION_PIVOT {
            w /= pivot;
            accepted.push(w.clone());
            added.push(w);
        }
    }
    if accepted.len() < target {
        return Err(Error::BadShape(format!(
            "could only complete {} of {target} basis vectors",
            accepted.len()
        )));
    }
    Ok(added)
}

/// Orthogonal projection `sum_i <x, e_i> e_i`.
pub fn project(x: &Vector, onto: &Basis) -> Result<Vector> {
    let mut out = Vector::zeros(x.len());
    for e in onto.iter() {
        if e.len() != x.len() {
            return Err(Error::DimensionMismatch {
                expected: e.len(),
                got: x.len(),
            });
        }
        out.axpy(e.dot(x), e, 1.0);
    }
    Ok(out)
}

/// Norm of the component of `x` orthogonal to `onto`.
pub fn residual_norm(x: &Vector, onto: &Basis) -> Result<f64> {
    Ok((x - project(x, onto)?).norm())
}

/// Orthonormal basis (as coefficient vectors in `R^cols`) of the kernel of
/// `matrix`, counting singular values `<= pivot` as zero.
pub fn null_space(matrix: &DMatrix<f64>, pivot: f64) -> Vec<Vector> {
    let cols = matrix.ncols();
    if cols == 0 {
        return Vec::new();
    }
    // Pad with zero rows so the thin SVD returns a full right factor.
    let rows = matrix.nrows().max(cols);
    let mut padded = DMatrix::zeros(rows, cols);
    padded
        .view_mut((0, 0), (matrix.nrows(), cols))
        .copy_from(matrix);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= pivot)
        .map(|(k, _)| v_t.row(k).transpose())
        .collect()
}
