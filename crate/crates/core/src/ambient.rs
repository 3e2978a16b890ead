//! The ambient metric f-manifold at a point.
//!
//! Coordinates are `(x_1, y_1, ..., x_m, y_m, z_1, z_2)` and the metric is the
//! identity, so `eta_a(X) = <X, xi_a>`. The curvature of a generalized
//! S-space-form is the combination
//!
//! ```text
//! R = F1 R1 + F2 R2 + F3 R3 + sum_{a,b} F_ab R_ab
//! ```
//!
//! evaluated as the 4-form `R(X, Y, Z, W) = g(R(X, Y) Z, W)`. With this sign
//! convention the sectional curvature of an orthonormal pair is
//! `R(X, Y, Y, X)`, and `R1` alone has constant curvature one.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Vector;

/// Values of the seven structure functions at the working point.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFunctions {
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    pub f11: f64,
    pub f12: f64,
    pub f21: f64,
    pub f22: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceFormKind {
    /// S-space-form of constant f-sectional curvature `c`.
    SSpaceForm,
    /// C-space-form of constant f-sectional curvature `c`.
    CSpaceForm,
    /// Real space form of constant sectional curvature `c`.
    RealSpaceForm,
}

impl StructureFunctions {
    pub fn new(values: [f64; 7]) -> Self {
        let [f1, f2, f3, f11, f12, f21, f22] = values;
        StructureFunctions {
            f1,
            f2,
            f3,
            f11,
            f12,
            f21,
            f22,
        }
    }

    /// `(F1, F2, F3, F11, F12, F21, F22)`.
    pub fn to_array(&self) -> [f64; 7] {
        [
            self.f1, self.f2, self.f3, self.f11, self.f12, self.f21, self.f22,
        ]
    }

    pub fn preset(kind: SpaceFormKind, c: f64) -> Self {
        match kind {
            SpaceFormKind::SSpaceForm => StructureFunctions {
                f1: (c + 6.0) / 4.0,
                f2: (c - 2.0) / 4.0,
                f3: (c - 2.0) / 4.0,
                f11: (c + 2.0) / 4.0,
                f12: -1.0,
                f21: -1.0,
                f22: (c + 2.0) / 4.0,
            },
            SpaceFormKind::CSpaceForm => StructureFunctions {
                f1: c / 4.0,
                f2: c / 4.0,
                f3: c / 4.0,
                f11: c / 4.0,
                f12: 0.0,
                f21: 0.0,
                f22: c / 4.0,
            },
            SpaceFormKind::RealSpaceForm => StructureFunctions {
                f1: c,
                ..Default::default()
            },
        }
    }

    /// The curvature constant `c` for which `self` equals the preset of
    /// `kind`, if any (entries compared to `tol`).
    pub fn matching_constant(&self, kind: SpaceFormKind, tol: f64) -> Option<f64> {
        let c = match kind {
            SpaceFormKind::SSpaceForm => 4.0 * self.f1 - 6.0,
            SpaceFormKind::CSpaceForm => 4.0 * self.f1,
            SpaceFormKind::RealSpaceForm => self.f1,
        };
        self.approx_eq(&Self::preset(kind, c), tol).then_some(c)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .all(|(a, b)| (a - b).abs() <= tol)
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    /// `F11 + F22`, the combination that appears in every bound.
    pub fn diagonal_sum(&self) -> f64 {
        self.f11 + self.f22
    }
}

/// A violated f-structure axiom, with the size of the violation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub invariant: String,
    pub magnitude: f64,
}

/// The ambient space `R^{2m+2}` carrying `f`, `xi_1`, `xi_2` and the
/// identity metric.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbientModel {
    m: usize,
    f: DMatrix<f64>,
    xi: [Vector; 2],
}

impl AmbientModel {
    /// The standard model: `f(dx_i) = dy_i`, `f(dy_i) = -dx_i`, `f(dz_a) = 0`,
    /// `xi_a = dz_a`.
    pub fn canonical(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::BadDimension("ambient needs m >= 1".into()));
        }
        let dim = 2 * m + 2;
        let mut f = DMatrix::zeros(dim, dim);
        for k in 0..m {
            f[(2 * k + 1, 2 * k)] = 1.0;
            f[(2 * k, 2 * k + 1)] = -1.0;
        }
        let xi = [unit(dim, 2 * m), unit(dim, 2 * m + 1)];
        Ok(AmbientModel { m, f, xi })
    }

    /// A model with arbitrary `f` and structure vectors. Only shapes are
    /// checked here; use [`AmbientModel::validate`] for the axioms.
    pub fn from_parts(m: usize, f: DMatrix<f64>, xi1: Vector, xi2: Vector) -> Result<Self> {
        let dim = 2 * m + 2;
        if m == 0 {
            return Err(Error::BadDimension("ambient needs m >= 1".into()));
        }
        if f.nrows() != dim || f.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: f.nrows().max(f.ncols()),
            });
        }
        for xi in [&xi1, &xi2] {
            if xi.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: xi.len(),
                });
            }
        }
        Ok(AmbientModel {
            m,
            f,
            xi: [xi1, xi2],
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        2 * self.m + 2
    }

    pub fn f_matrix(&self) -> &DMatrix<f64> {
        &self.f
    }

    /// `xi_1` for `alpha = 0`, `xi_2` for `alpha = 1`.
    pub fn xi(&self, alpha: usize) -> &Vector {
        &self.xi[alpha]
    }

    pub fn eta(&self, alpha: usize, x: &Vector) -> f64 {
        self.xi[alpha].dot(x)
    }

    pub fn apply_f(&self, x: &Vector) -> Vector {
        &self.f * x
    }

    /// Coordinate vector `d/dx_k` (0-based `k < m`).
    pub fn dx(&self, k: usize) -> Vector {
        unit(self.dim(), 2 * k)
    }

    /// Coordinate vector `d/dy_k` (0-based `k < m`).
    pub fn dy(&self, k: usize) -> Vector {
        unit(self.dim(), 2 * k + 1)
    }

    pub fn check_dim(&self, x: &Vector) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Lists every violated f-structure axiom. Empty means the model is valid.
    pub fn validate(&self, tol: f64) -> Vec<Violation> {
        let dim = self.dim();
        let f = &self.f;
        let mut out = Vec::new();
        let mut report = |name: &str, magnitude: f64| {
            if magnitude.is_nan() || magnitude > tol {
                out.push(Violation {
                    invariant: name.to_string(),
                    magnitude,
                });
            }
        };

        let f2 = f * f;
        let f3 = &f2 * f;
        report("f^3 + f = 0", max_abs(&(&f3 + f)));

        let sv = f.clone().svd(false, false).singular_values;
        let rank = sv
            .iter()
            .filter(|s| **s > tol.max(1e-12) * sv.max().max(1.0))
            .count();
        report("rank(f) = 2m", (rank as f64 - 2.0 * self.m as f64).abs());

        for (alpha, xi) in self.xi.iter().enumerate() {
            report(&format!("f xi_{} = 0", alpha + 1), (f * xi).amax());
            // eta_a(f X) = <f X, xi_a> for every X, i.e. f^T xi_a = 0.
            report(
                &format!("eta_{} o f = 0", alpha + 1),
                (f.transpose() * xi).amax(),
            );
        }

        let mut expected = -DMatrix::<f64>::identity(dim, dim);
        for xi in &self.xi {
            expected += xi * xi.transpose();
        }
        report("f^2 = -I + sum eta_a (x) xi_a", max_abs(&(&f2 - &expected)));

        // g(X,Y) = g(fX,fY) + sum eta_a(X) eta_a(Y) on the coordinate basis.
        let mut metric = f.transpose() * f;
        for xi in &self.xi {
            metric += xi * xi.transpose();
        }
        report(
            "g(X,Y) = g(fX,fY) + sum eta_a(X) eta_a(Y)",
            max_abs(&(metric - DMatrix::<f64>::identity(dim, dim))),
        );
        out
    }

    /// `g(R(X, Y) Z, W)` for the generalized S-space-form with functions `sf`.
    pub fn curvature(
        &self,
        sf: &StructureFunctions,
        x: &Vector,
        y: &Vector,
        z: &Vector,
        w: &Vector,
    ) -> Result<f64> {
        for v in [x, y, z, w] {
            self.check_dim(v)?;
        }
        let data = |v: &Vector| (v.clone(), self.apply_f(v), [self.eta(0, v), self.eta(1, v)]);
        let (xs, ys, zs, ws) = (data(x), data(y), data(z), data(w));
        Ok(curvature_from_parts(sf, &xs, &ys, &zs, &ws))
    }
}

/// `(v, f v, [eta_1(v), eta_2(v)])` for one argument slot.
pub(crate) type SlotData = (Vector, Vector, [f64; 2]);

pub(crate) fn curvature_from_parts(
    sf: &StructureFunctions,
    (x, fx, ex): &SlotData,
    (y, fy, ey): &SlotData,
    (z, fz, ez): &SlotData,
    (w, _, ew): &SlotData,
) -> f64 {
    let g = |a: &Vector, b: &Vector| a.dot(b);
    let r1 = g(y, z) * g(x, w) - g(x, z) * g(y, w);
    // g(X,fZ) g(fY,W) - g(Y,fZ) g(fX,W) + 2 g(X,fY) g(fZ,W)
    let r2 = g(x, fz) * g(fy, w) - g(y, fz) * g(fx, w) + 2.0 * g(x, fy) * g(fz, w);
    let r3 = ex[0] * ey[1] * ez[1] * ew[0] - ex[1] * ey[0] * ez[1] * ew[0]
        + ex[1] * ey[0] * ez[0] * ew[1]
        - ex[0] * ey[1] * ez[0] * ew[1];
    let rab = |a: usize, b: usize| {
        ex[a] * ez[b] * g(y, w) - ey[a] * ez[b] * g(x, w) + g(x, z) * ey[a] * ew[b]
            - g(y, z) * ex[a] * ew[b]
    };
    sf.f1 * r1
        + sf.f2 * r2
        + sf.f3 * r3
        + sf.f11 * rab(0, 0)
        + sf.f12 * rab(0, 1)
        + sf.f21 * rab(1, 0)
        + sf.f22 * rab(1, 1)
}

pub(crate) fn unit(dim: usize, i: usize) -> Vector {
    let mut v = Vector::zeros(dim);
    v[i] = 1.0;
    v
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}
