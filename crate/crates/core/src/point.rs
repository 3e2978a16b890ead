//! Pointwise data of a submanifold tangent to both structure vector fields.
//!
//! A [`SubmanifoldPoint`] holds an orthonormal tangent frame
//! `e_1, ..., e_n, xi_1, xi_2`, an orthonormal normal frame completing it to
//! the ambient space, and the coefficients `sigma^r_ij = g(sigma(e_i, e_j), e_r)`
//! of the second fundamental form. The second fundamental form is formal
//! input: nothing requires it to come from an actual immersion, and every
//! derived quantity is computed from the Gauss equation
//!
//! ```text
//! R(X,Y,Z,W) = R~(X,Y,Z,W) + g(sigma(X,W), sigma(Y,Z)) - g(sigma(X,Z), sigma(Y,W))
//! ```
//!
//! All indices are 0-based: `0..n` spans the distribution `L`, `n` and `n + 1`
//! are `xi_1` and `xi_2`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ambient::{curvature_from_parts, AmbientModel, SlotData, StructureFunctions};
use crate::error::{Error, Result};
use crate::linalg::{complete_basis, gram_schmidt, null_space, project, Basis, Vector};
use crate::tolerance::Tolerances;

/// Coefficients `sigma[r][i][j]`, symmetric in `(i, j)` by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondFundamentalForm {
    normal_rank: usize,
    tangent_dim: usize,
    coeffs: Vec<f64>,
}

impl SecondFundamentalForm {
    pub fn zeros(normal_rank: usize, tangent_dim: usize) -> Self {
        SecondFundamentalForm {
            normal_rank,
            tangent_dim,
            coeffs: vec![0.0; normal_rank * tangent_dim * tangent_dim],
        }
    }

    /// Builds the form from one symmetric matrix per normal direction (the
    /// shape operators `A_r` in the tangent frame).
    pub fn from_shape_operators(tangent_dim: usize, ops: &[DMatrix<f64>]) -> Result<Self> {
        let mut out = Self::zeros(ops.len(), tangent_dim);
        for (r, a) in ops.iter().enumerate() {
            if a.nrows() != tangent_dim || a.ncols() != tangent_dim {
                return Err(Error::BadShape(format!(
                    "shape operator {r} is {}x{}, expected {tangent_dim}x{tangent_dim}",
                    a.nrows(),
                    a.ncols()
                )));
            }
            for i in 0..tangent_dim {
                for j in 0..tangent_dim {
                    if a[(i, j)] != a[(j, i)] {
                        return Err(Error::BadShape(format!(
                            "shape operator {r} is not symmetric"
                        )));
                    }
                    let idx = out.index(r, i, j);
                    out.coeffs[idx] = a[(i, j)];
                }
            }
        }
        Ok(out)
    }

    fn index(&self, r: usize, i: usize, j: usize) -> usize {
        (r * self.tangent_dim + i) * self.tangent_dim + j
    }

    pub fn normal_rank(&self) -> usize {
        self.normal_rank
    }

    pub fn tangent_dim(&self) -> usize {
        self.tangent_dim
    }

    pub fn get(&self, r: usize, i: usize, j: usize) -> f64 {
        self.coeffs[self.index(r, i, j)]
    }

    /// Sets `sigma[r][i][j]` and `sigma[r][j][i]`.
    pub fn set(&mut self, r: usize, i: usize, j: usize, value: f64) {
        let a = self.index(r, i, j);
        let b = self.index(r, j, i);
        self.coeffs[a] = value;
        self.coeffs[b] = value;
    }

    pub fn shape_operator(&self, r: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.tangent_dim, self.tangent_dim, |i, j| self.get(r, i, j))
    }

    pub fn trace(&self, r: usize) -> f64 {
        (0..self.tangent_dim).map(|i| self.get(r, i, i)).sum()
    }

    /// `sum_r sum_{i,j} (sigma^r_ij)^2`.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|v| v * v).sum()
    }

    /// Normal coordinates of `sigma(X, Y)` for tangent-frame coordinates `x`, `y`.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        (0..self.normal_rank)
            .map(|r| {
                let mut acc = 0.0;
                for (i, xi) in x.iter().enumerate() {
                    if *xi == 0.0 {
                        continue;
                    }
                    for (j, yj) in y.iter().enumerate() {
                        acc += xi * yj * self.get(r, i, j);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|v| v.is_finite())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointFlags {
    /// Enforce `sigma(X, xi_a) = 0`, as holds for submanifolds of C-manifolds.
    pub c_compatible: bool,
}

/// Result of sampling the angle between `fX` and the tangent space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SlantDiagnosis {
    Angle { theta: f64 },
    NotSlant { spread: f64 },
    Indeterminate,
}

impl SlantDiagnosis {
    pub fn angle(&self) -> Option<f64> {
        match self {
            SlantDiagnosis::Angle { theta } => Some(*theta),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantReport {
    /// Mean curvature vector in normal-frame coordinates.
    pub h: Vec<f64>,
    pub h_norm_sq: f64,
    pub sigma_norm_sq: f64,
    pub t_norm_sq: f64,
    pub n_norm_sq: f64,
    pub tau: f64,
    pub slant: SlantDiagnosis,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalarIdentity {
    /// `2 tau`, summed from sectional curvatures.
    pub lhs: f64,
    /// Closed form in terms of the structure functions, `|T|^2`, `|H|^2`, `|sigma|^2`.
    pub rhs: f64,
    pub abs_diff: f64,
    /// `abs_diff` divided by the largest of 1, `|lhs|`, `|rhs|`, `|sigma|^2`
    /// and `(n+2)^2 |H|^2`, so cancellation between large terms is not penalized.
    pub rel_diff: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SffClass {
    pub minimal: bool,
    pub totally_geodesic: bool,
    pub totally_umbilical: bool,
    pub totally_f_geodesic: bool,
    pub totally_f_umbilical: bool,
}

#[derive(Debug, Clone)]
pub struct SubmanifoldPoint {
    ambient: AmbientModel,
    sf: StructureFunctions,
    tangent: Basis,
    normal: Basis,
    sff: SecondFundamentalForm,
    flags: PointFlags,
    tol: Tolerances,
    slots: Vec<SlotData>,
}

impl SubmanifoldPoint {
    pub fn attach(
        ambient: AmbientModel,
        sf: StructureFunctions,
        raw_tangent: &[Vector],
        sff: SecondFundamentalForm,
        flags: PointFlags,
    ) -> Result<Self> {
        Self::attach_with_tolerances(ambient, sf, raw_tangent, sff, flags, Tolerances::default())
    }

    /// Orthonormalizes `raw_tangent` into `e_1, ..., e_n, xi_1, xi_2` (the
    /// `L`-part keeps the order of the input), completes the normal frame from
    /// the coordinate basis, and validates everything.
    pub fn attach_with_tolerances(
        ambient: AmbientModel,
        sf: StructureFunctions,
        raw_tangent: &[Vector],
        sff: SecondFundamentalForm,
        flags: PointFlags,
        tol: Tolerances,
    ) -> Result<Self> {
        check_ambient(&ambient, tol)?;
        if !sf.is_finite() {
            return Err(Error::BadShape("structure functions must be finite".into()));
        }
        for v in raw_tangent {
            ambient.check_dim(v)?;
        }
        if raw_tangent.len() < 3 {
            return Err(Error::BadShape(format!(
                "tangent space needs dimension n + 2 >= 3, got {}",
                raw_tangent.len()
            )));
        }
        let dim = ambient.dim();
        let n = raw_tangent.len() - 2;

        check_xi_tangent(&ambient, raw_tangent, tol)?;

        let xis = [ambient.xi(0).clone(), ambient.xi(1).clone()];
        let reduced: Vec<Vector> = raw_tangent
            .iter()
            .filter_map(|v| {
                let w = v - &xis[0] * xis[0].dot(v) - &xis[1] * xis[1].dot(v);
                (w.norm() > tol.membership * v.norm()).then_some(w)
            })
            .collect();
        let mut frame = complete_basis(&xis, &reduced, n + 2)?;
        if frame.len() != n {
            return Err(Error::DependentInput {
                index: frame.len(),
                pivot: 0.0,
            });
        }
        frame.extend(xis.iter().cloned());
        let tangent = Basis::from_orthonormal(frame, tol.orthonormality)?;

        let coordinate: Vec<Vector> = (0..dim).map(|i| crate::ambient::unit(dim, i)).collect();
        let normal = complete_basis(tangent.vectors(), &coordinate, dim)?;
        let normal = Basis::from_orthonormal(normal, tol.orthonormality)?;

        Self::from_frames(ambient, sf, tangent, normal, sff, flags, tol)
    }

    /// Assembles a point from frames that are already adapted. `tangent` must
    /// end with `xi_1, xi_2`, and `tangent ++ normal` must be orthonormal.
    pub fn from_frames(
        ambient: AmbientModel,
        sf: StructureFunctions,
        tangent: Basis,
        normal: Basis,
        sff: SecondFundamentalForm,
        flags: PointFlags,
        tol: Tolerances,
    ) -> Result<Self> {
        let dim = ambient.dim();
        if tangent.len() < 3 || tangent.len() + normal.len() != dim {
            return Err(Error::BadShape(format!(
                "frames of sizes {} + {} do not fill dimension {dim}",
                tangent.len(),
                normal.len()
            )));
        }
        let n = tangent.len() - 2;
        if tangent.get(n) != ambient.xi(0) || tangent.get(n + 1) != ambient.xi(1) {
            return Err(Error::BadShape(
                "the last two tangent vectors must be xi_1, xi_2".into(),
            ));
        }
        let mut all = tangent.vectors().to_vec();
        all.extend(normal.iter().cloned());
        Basis::from_orthonormal(all, tol.orthonormality)?;

        if sff.tangent_dim() != n + 2 || sff.normal_rank() != normal.len() {
            return Err(Error::BadShape(format!(
                "second fundamental form is {}x{}x{}, expected {}x{}x{}",
                sff.normal_rank(),
                sff.tangent_dim(),
                sff.tangent_dim(),
                normal.len(),
                n + 2,
                n + 2
            )));
        }
        if !sff.is_finite() {
            return Err(Error::BadShape(
                "second fundamental form must be finite".into(),
            ));
        }
        if flags.c_compatible {
            for r in 0..sff.normal_rank() {
                for i in 0..n + 2 {
                    for xi in [n, n + 1] {
                        if sff.get(r, i, xi) != 0.0 {
                            return Err(Error::BadShape(format!(
                                "c_compatible requires sigma(e_{i}, xi) = 0, found sigma[{r}][{i}][{xi}] = {}",
                                sff.get(r, i, xi)
                            )));
                        }
                    }
                }
            }
        }
        let slots = tangent.iter().map(|e| slot(&ambient, e)).collect();
        Ok(SubmanifoldPoint {
            ambient,
            sf,
            tangent,
            normal,
            sff,
            flags,
            tol,
            slots,
        })
    }

    /// Same frames and structure, different second fundamental form.
    pub fn with_sff(&self, sff: SecondFundamentalForm) -> Result<Self> {
        Self::from_frames(
            self.ambient.clone(),
            self.sf,
            self.tangent.clone(),
            self.normal.clone(),
            sff,
            self.flags,
            self.tol,
        )
    }

    pub fn with_structure(&self, sf: StructureFunctions) -> Self {
        SubmanifoldPoint { sf, ..self.clone() }
    }

    pub fn with_flags(&self, flags: PointFlags) -> Result<Self> {
        Self::from_frames(
            self.ambient.clone(),
            self.sf,
            self.tangent.clone(),
            self.normal.clone(),
            self.sff.clone(),
            flags,
            self.tol,
        )
    }

    pub fn with_tolerances(&self, tol: Tolerances) -> Self {
        SubmanifoldPoint {
            tol,
            ..self.clone()
        }
    }

    /// Re-expresses the point in new frames spanning the same spaces: `l_frame`
    /// is an orthonormal basis of `L` and `normal` one of the normal space.
    pub fn reframed(&self, l_frame: Vec<Vector>, normal: Vec<Vector>) -> Result<Self> {
        let n = self.n();
        if l_frame.len() != n || normal.len() != self.normal.len() {
            return Err(Error::BadShape("reframing must preserve dimensions".into()));
        }
        let mut tangent = l_frame;
        tangent.push(self.ambient.xi(0).clone());
        tangent.push(self.ambient.xi(1).clone());
        for v in &tangent {
            self.check_tangent(v)?;
        }
        let tangent = Basis::from_orthonormal(tangent, self.tol.orthonormality)?;
        let normal = Basis::from_orthonormal(normal, self.tol.orthonormality)?;

        let t_coords: Vec<Vec<f64>> = tangent
            .iter()
            .map(|e| self.tangent.coordinates(e))
            .collect();
        let n_coords: Vec<Vec<f64>> = normal.iter().map(|e| self.normal.coordinates(e)).collect();
        let mut sff = SecondFundamentalForm::zeros(normal.len(), n + 2);
        for i in 0..n + 2 {
            for j in i..n + 2 {
                let s = self.sff.eval(&t_coords[i], &t_coords[j]);
                for (r, nc) in n_coords.iter().enumerate() {
                    let v: f64 = nc.iter().zip(&s).map(|(a, b)| a * b).sum();
                    sff.set(r, i, j, v);
                }
            }
        }
        if self.flags.c_compatible {
            // Exact zeros are part of the flag's contract; rounding must not break it.
            for r in 0..sff.normal_rank() {
                for i in 0..n + 2 {
                    sff.set(r, i, n, 0.0);
                    sff.set(r, i, n + 1, 0.0);
                }
            }
        }
        Self::from_frames(
            self.ambient.clone(),
            self.sf,
            tangent,
            normal,
            sff,
            self.flags,
            self.tol,
        )
    }

    /// Dimension of `L` (the submanifold has dimension `n + 2`).
    pub fn n(&self) -> usize {
        self.tangent.len() - 2
    }

    pub fn ambient(&self) -> &AmbientModel {
        &self.ambient
    }

    pub fn structure(&self) -> &StructureFunctions {
        &self.sf
    }

    pub fn tangent(&self) -> &Basis {
        &self.tangent
    }

    pub fn normal(&self) -> &Basis {
        &self.normal
    }

    /// The first `n` tangent vectors, an orthonormal basis of `L`.
    pub fn l_frame(&self) -> &[Vector] {
        &self.tangent.vectors()[..self.n()]
    }

    pub fn sff(&self) -> &SecondFundamentalForm {
        &self.sff
    }

    pub fn flags(&self) -> PointFlags {
        self.flags
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// Tangent-frame coordinates of `x`, failing if `x` is not tangent.
    pub fn tangent_coords(&self, x: &Vector) -> Result<Vec<f64>> {
        self.ambient.check_dim(x)?;
        let c = self.tangent.coordinates(x);
        let residual = (x - self.tangent.combine(&c)).norm();
        if residual > self.tol.membership * x.norm().max(1.0) {
            return Err(Error::NotTangent { residual });
        }
        Ok(c)
    }

    fn check_tangent(&self, x: &Vector) -> Result<()> {
        self.tangent_coords(x).map(|_| ())
    }

    /// Fails with `NotInL` unless `x` is tangent and orthogonal to both `xi`.
    pub fn check_in_l(&self, x: &Vector) -> Result<()> {
        self.ambient.check_dim(x)?;
        let c = self.tangent.coordinates(x);
        let off_tangent = (x - self.tangent.combine(&c)).norm();
        let n = self.n();
        let residual = (off_tangent.powi(2) + c[n].powi(2) + c[n + 1].powi(2)).sqrt();
        if residual > self.tol.membership * x.norm().max(1.0) {
            return Err(Error::NotInL { residual });
        }
        Ok(())
    }

    /// `sigma(X, Y)` in normal-frame coordinates.
    pub fn sigma(&self, x: &Vector, y: &Vector) -> Result<Vec<f64>> {
        Ok(self
            .sff
            .eval(&self.tangent_coords(x)?, &self.tangent_coords(y)?))
    }

    /// Splits `fX = TX + NX` into its tangential and normal parts.
    pub fn tn_decompose(&self, x: &Vector) -> Result<(Vector, Vector)> {
        self.check_tangent(x)?;
        let fx = self.ambient.apply_f(x);
        let tx = project(&fx, &self.tangent)?;
        let nx = fx - &tx;
        Ok((tx, nx))
    }

    /// `R(X, Y, Z, W)` of the submanifold via the Gauss equation.
    pub fn induced_curvature(&self, x: &Vector, y: &Vector, z: &Vector, w: &Vector) -> Result<f64> {
        let [cx, cy, cz, cw] = [x, y, z, w].map(|v| self.tangent_coords(v));
        let (cx, cy, cz, cw) = (cx?, cy?, cz?, cw?);
        let ambient = curvature_from_parts(
            &self.sf,
            &slot(&self.ambient, x),
            &slot(&self.ambient, y),
            &slot(&self.ambient, z),
            &slot(&self.ambient, w),
        );
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
        let extrinsic = dot(&self.sff.eval(&cx, &cw), &self.sff.eval(&cy, &cz))
            - dot(&self.sff.eval(&cx, &cz), &self.sff.eval(&cy, &cw));
        Ok(ambient + extrinsic)
    }

    /// Sectional curvature of the plane spanned by the orthonormal pair `(X, Y)`.
    pub fn sectional(&self, x: &Vector, y: &Vector) -> Result<f64> {
        self.induced_curvature(x, y, y, x)
    }

    /// `K(e_i ^ e_j)` for tangent-frame indices.
    pub fn induced_sectional(&self, i: usize, j: usize) -> f64 {
        let (si, sj) = (&self.slots[i], &self.slots[j]);
        let ambient = curvature_from_parts(&self.sf, si, sj, sj, si);
        let extrinsic: f64 = (0..self.sff.normal_rank())
            .map(|r| self.sff.get(r, i, i) * self.sff.get(r, j, j) - self.sff.get(r, i, j).powi(2))
            .sum();
        ambient + extrinsic
    }

    /// `R(e_i, e_j, e_k, e_l)` for tangent-frame indices.
    pub fn induced_curvature_frame(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let s = &self.slots;
        let ambient = curvature_from_parts(&self.sf, &s[i], &s[j], &s[k], &s[l]);
        let extrinsic: f64 = (0..self.sff.normal_rank())
            .map(|r| {
                self.sff.get(r, i, l) * self.sff.get(r, j, k)
                    - self.sff.get(r, i, k) * self.sff.get(r, j, l)
            })
            .sum();
        ambient + extrinsic
    }

    /// Scalar curvature `tau = sum_{i<j} K(e_i ^ e_j)` over the whole tangent frame.
    pub fn tau(&self) -> f64 {
        let dim = self.n() + 2;
        let mut acc = 0.0;
        for i in 0..dim {
            for j in i + 1..dim {
                acc += self.induced_sectional(i, j);
            }
        }
        acc
    }

    /// Orthonormal basis of `L` whose first members are `leading` (already
    /// orthonormal and in `L`), completed from the current `L`-frame.
    pub fn adapted_l_frame(&self, leading: &[Vector]) -> Result<Vec<Vector>> {
        let n = self.n();
        let mut fixed = vec![self.ambient.xi(0).clone(), self.ambient.xi(1).clone()];
        fixed.extend(leading.iter().cloned());
        let rest = complete_basis(&fixed, self.l_frame(), n + 2)?;
        let mut out = leading.to_vec();
        out.extend(rest);
        Ok(out)
    }

    /// Normalizes a unit vector of `L`, validating it.
    pub(crate) fn unit_in_l(&self, u: &Vector) -> Result<Vector> {
        self.ambient.check_dim(u)?;
        let norm = u.norm();
        if (norm - 1.0).abs() > self.tol.membership {
            return Err(Error::NotUnitVector { norm });
        }
        self.check_in_l(u)?;
        Ok(u / norm)
    }

    /// Ricci curvature `Ric(U) = sum K(U ^ e)` over a frame completed from `U`.
    pub fn ricci(&self, u: &Vector) -> Result<f64> {
        let u = self.unit_in_l(u)?;
        let frame = self.adapted_l_frame(std::slice::from_ref(&u))?;
        let mut acc = 0.0;
        for e in frame
            .iter()
            .skip(1)
            .chain([self.ambient.xi(0), self.ambient.xi(1)])
        {
            acc += self.sectional(&u, e)?;
        }
        Ok(acc)
    }

    /// Mean curvature vector `H = trace(sigma) / (n + 2)` in normal coordinates.
    pub fn mean_curvature(&self) -> Vec<f64> {
        let dim = (self.n() + 2) as f64;
        (0..self.sff.normal_rank())
            .map(|r| self.sff.trace(r) / dim)
            .collect()
    }

    /// `H` as an ambient vector.
    pub fn mean_curvature_vector(&self) -> Vector {
        self.normal.combine(&self.mean_curvature())
    }

    pub fn h_norm_sq(&self) -> f64 {
        self.mean_curvature().iter().map(|v| v * v).sum()
    }

    pub fn sigma_norm_sq(&self) -> f64 {
        self.sff.norm_sq()
    }

    /// `|T|^2 = sum_{i,j < n} g(e_i, f e_j)^2`.
    pub fn t_norm_sq(&self) -> f64 {
        let n = self.n();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += self.slots[i].0.dot(&self.slots[j].1).powi(2);
            }
        }
        acc
    }

    /// `|N|^2 = sum_{i < n} |N e_i|^2`.
    pub fn n_norm_sq(&self) -> f64 {
        let mut acc = 0.0;
        for s in &self.slots[..self.n()] {
            let fx = &s.1;
            let tx = project(fx, &self.tangent).expect("dimensions checked at construction");
            acc += (fx - tx).norm_squared();
        }
        acc
    }

    pub fn invariant_report(&self) -> InvariantReport {
        let h = self.mean_curvature();
        InvariantReport {
            h_norm_sq: h.iter().map(|v| v * v).sum(),
            h,
            sigma_norm_sq: self.sigma_norm_sq(),
            t_norm_sq: self.t_norm_sq(),
            n_norm_sq: self.n_norm_sq(),
            tau: self.tau(),
            slant: self.slant_probe(),
        }
    }

    /// Compares `2 tau` (frame sum) with its closed form
    ///
    /// ```text
    /// (n+1)(n+2) F1 - 2(n+1)(F11 + F22) + 2 F3 + 3 F2 |T|^2 + (n+2)^2 |H|^2 - |sigma|^2
    /// ```
    pub fn scalar_identity_check(&self) -> ScalarIdentity {
        let n = self.n() as f64;
        let sf = &self.sf;
        let lhs = 2.0 * self.tau();
        let rhs = (n + 1.0) * (n + 2.0) * sf.f1 - 2.0 * (n + 1.0) * sf.diagonal_sum()
            + 2.0 * sf.f3
            + 3.0 * sf.f2 * self.t_norm_sq()
            + (n + 2.0).powi(2) * self.h_norm_sq()
            - self.sigma_norm_sq();
        let abs_diff = (lhs - rhs).abs();
        let scale = [
            lhs.abs(),
            rhs.abs(),
            self.sigma_norm_sq(),
            (n + 2.0).powi(2) * self.h_norm_sq(),
        ]
        .into_iter()
        .fold(1.0, f64::max);
        ScalarIdentity {
            lhs,
            rhs,
            abs_diff,
            rel_diff: abs_diff / scale,
        }
    }

    /// Samples the angle between `fX` and the tangent space over the
    /// `L`-frame and `tol.slant_samples` seeded random unit vectors of `L`.
    pub fn slant_probe(&self) -> SlantDiagnosis {
        let n = self.n();
        let mut rng = ChaCha8Rng::seed_from_u64(self.tol.seed);
        let mut samples: Vec<Vector> = self.l_frame().to_vec();
        for _ in 0..self.tol.slant_samples {
            let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 1e-6 {
                let c: Vec<f64> = c.iter().map(|v| v / norm).collect();
                samples.push(self.tangent.combine(&c));
            }
        }
        let angles: Vec<f64> = samples
            .iter()
            .filter_map(|x| {
                let fx = self.ambient.apply_f(x);
                if fx.norm() <= 1e-9 {
                    return None;
                }
                let tx = project(&fx, &self.tangent).ok()?;
                let nx = &fx - &tx;
                Some(nx.norm().atan2(tx.norm()))
            })
            .collect();
        if angles.is_empty() {
            return SlantDiagnosis::Indeterminate;
        }
        let mean = angles.iter().sum::<f64>() / angles.len() as f64;
        let spread = angles.iter().map(|a| (a - mean).abs()).fold(0.0, f64::max);
        if spread < self.tol.slant_deviation {
            SlantDiagnosis::Angle { theta: mean }
        } else {
            SlantDiagnosis::NotSlant { spread }
        }
    }

    /// Orthonormal basis of `{X tangent : sigma(X, Y) = 0 for all tangent Y}`.
    pub fn relative_null_space(&self) -> Basis {
        let dim = self.n() + 2;
        let rank = self.sff.normal_rank();
        let m = DMatrix::from_fn(rank * dim, dim, |row, i| {
            let (r, j) = (row / dim, row % dim);
            self.sff.get(r, i, j)
        });
        let vectors = null_space(&m, self.tol.null_pivot)
            .iter()
            .map(|c| self.tangent.combine(c.as_slice()))
            .collect();
        Basis::from_orthonormal(vectors, 1e-8).expect("right singular vectors are orthonormal")
    }

    /// Largest `|g(sigma(X, e_j), e_r)|` over the frame: zero iff `X` is in the
    /// relative null space.
    pub fn null_space_residual(&self, x: &Vector) -> Result<f64> {
        let cx = self.tangent_coords(x)?;
        let dim = self.n() + 2;
        let mut worst = 0.0f64;
        for j in 0..dim {
            let mut ej = vec![0.0; dim];
            ej[j] = 1.0;
            for v in self.sff.eval(&cx, &ej) {
                worst = worst.max(v.abs());
            }
        }
        Ok(worst)
    }

    pub fn classify_sff(&self) -> SffClass {
        let tol = self.tol.equality;
        let n = self.n();
        let block_residual = |size: usize, umbilical: bool| {
            let mut worst = 0.0f64;
            for r in 0..self.sff.normal_rank() {
                let v = if umbilical {
                    (0..size).map(|i| self.sff.get(r, i, i)).sum::<f64>() / size as f64
                } else {
                    0.0
                };
                for i in 0..size {
                    for j in 0..size {
                        let target = if i == j { v } else { 0.0 };
                        worst = worst.max((self.sff.get(r, i, j) - target).abs());
                    }
                }
            }
            worst
        };
        SffClass {
            minimal: self.h_norm_sq().sqrt() <= tol,
            totally_geodesic: block_residual(n + 2, false) <= tol,
            totally_umbilical: block_residual(n + 2, true) <= tol,
            totally_f_geodesic: block_residual(n, false) <= tol,
            totally_f_umbilical: block_residual(n, true) <= tol,
        }
    }
}

fn slot(ambient: &AmbientModel, v: &Vector) -> SlotData {
    (
        v.clone(),
        ambient.apply_f(v),
        [ambient.eta(0, v), ambient.eta(1, v)],
    )
}

pub(crate) fn check_ambient(ambient: &AmbientModel, tol: Tolerances) -> Result<()> {
    match ambient.validate(tol.orthonormality).first() {
        Some(v) => Err(Error::InvalidAmbient(format!(
            "{} (magnitude {:.3e})",
            v.invariant, v.magnitude
        ))),
        None => Ok(()),
    }
}

/// Both structure vectors must lie in the span of the raw tangent vectors.
pub(crate) fn check_xi_tangent(
    ambient: &AmbientModel,
    raw_tangent: &[Vector],
    tol: Tolerances,
) -> Result<()> {
    let span = gram_schmidt(raw_tangent, 0)?;
    for alpha in 0..2 {
        let xi = ambient.xi(alpha);
        let residual = (xi - project(xi, &span)?).norm();
        if residual > tol.membership {
            return Err(Error::XiNotTangent {
                alpha: alpha + 1,
                residual,
            });
        }
    }
    Ok(())
}
