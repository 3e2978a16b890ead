use serde::{Deserialize, Serialize};

use super::search::{minimize_sectional, SearchOptions};
use super::BoundReport;
use crate::ambient::{AmbientModel, StructureFunctions};
use crate::error::{Error, Result};
use crate::linalg::{complete_basis, orthonormality_defect, Vector};
use crate::point::{PointFlags, SecondFundamentalForm, SubmanifoldPoint};

/// Bound on `|T e_j|` for the trailing frame vectors to count as anti-invariant.
const ANTI_INVARIANT_TOL: f64 = 1e-8;

/// Parameters of the shape operators at a point of equality:
///
/// ```text
/// A_1 = [[a, b, 0], [b, c - a, 0], [0, 0, c I_n]]    A_r = [[a_r, b_r, 0], [b_r, -a_r, 0], [0, 0, 0]]
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeOperatorForm {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    #[serde(default)]
    pub pairs: Vec<(f64, f64)>,
}

impl ShapeOperatorForm {
    pub fn zero() -> Self {
        ShapeOperatorForm {
            a: 0.0,
            b: 0.0,
            c: 0.0,
            pairs: Vec::new(),
        }
    }

    pub fn is_finite(&self) -> bool {
        [self.a, self.b, self.c].iter().all(|v| v.is_finite())
            && self
                .pairs
                .iter()
                .all(|(a, b)| a.is_finite() && b.is_finite())
    }
}

fn check_plane(point: &SubmanifoldPoint, x: &Vector, y: &Vector) -> Result<()> {
    point.check_in_l(x)?;
    point.check_in_l(y)?;
    let defect = orthonormality_defect(&[x.clone(), y.clone()]);
    if defect > point.tolerances().membership {
        return Err(Error::NotOrthonormal { defect });
    }
    Ok(())
}

/// `F^2(pi) = g(X, fY)^2` for an orthonormal pair spanning `pi`.
pub fn plane_f_squared(point: &SubmanifoldPoint, x: &Vector, y: &Vector) -> Result<f64> {
    check_plane(point, x, y)?;
    Ok(x.dot(&point.ambient().apply_f(y)).powi(2))
}

/// Right-hand side shared by the plane bound and its corollaries, with the
/// `F2` factor `t_half_minus_f` (`|T|^2 / 2 - F^2(pi)` or a bound for it).
fn delta_rhs(point: &SubmanifoldPoint, f2_factor: f64) -> f64 {
    let n = point.n() as f64;
    let sf = point.structure();
    n * (n + 2.0).powi(2) / (2.0 * (n + 1.0)) * point.h_norm_sq()
        + n * (n + 3.0) / 2.0 * sf.f1
        + sf.f3
        - (n + 1.0) * sf.diagonal_sum()
        + 3.0 * sf.f2 * f2_factor
}

/// `tau - K(pi) <= rhs` for the plane spanned by the orthonormal pair `(X, Y)`
/// of `L`. In slant mode `|T|^2` is replaced by `n cos^2 theta`.
pub fn delta_bound(
    point: &SubmanifoldPoint,
    x: &Vector,
    y: &Vector,
    slant_mode: bool,
) -> Result<BoundReport> {
    let f_sq = plane_f_squared(point, x, y)?;
    let t_sq = if slant_mode {
        let theta = point
            .slant_probe()
            .angle()
            .ok_or_else(|| Error::NotSlant("slant probe found no constant angle".into()))?;
        point.n() as f64 * theta.cos().powi(2)
    } else {
        point.t_norm_sq()
    };
    let lhs = point.tau() - point.sectional(x, y)?;
    let rhs = delta_rhs(point, t_sq / 2.0 - f_sq);
    Ok(BoundReport::new(lhs, rhs, point.tolerances().equality))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapeCheck {
    pub matches_forms: bool,
    pub recovered: ShapeOperatorForm,
    /// Largest deviation from the equality forms.
    pub residual: f64,
}

/// Rewrites the second fundamental form in frames with `e_1 = X`, `e_2 = Y`
/// and the first normal vector along `H`, then tests it against the shape
/// operator forms of the equality case.
pub fn delta_equality_shape_check(
    point: &SubmanifoldPoint,
    x: &Vector,
    y: &Vector,
) -> Result<ShapeCheck> {
    check_plane(point, x, y)?;
    let tol = point.tolerances();
    let l_frame = point.adapted_l_frame(&[x.clone(), y.clone()])?;
    let mut normal = point.normal().vectors().to_vec();
    if point.h_norm_sq().sqrt() > tol.equality && !normal.is_empty() {
        let h = point.mean_curvature_vector().normalize();
        let mut fixed = point.tangent().vectors().to_vec();
        fixed.push(h.clone());
        let rest = complete_basis(&fixed, &normal, point.ambient().dim())?;
        normal = std::iter::once(h).chain(rest).collect();
    }
    let adapted = point.reframed(l_frame, normal)?;
    let sff = adapted.sff();
    let dim = point.n() + 2;
    if sff.normal_rank() == 0 {
        return Ok(ShapeCheck {
            matches_forms: true,
            recovered: ShapeOperatorForm::zero(),
            residual: 0.0,
        });
    }

    let mut residual = 0.0f64;
    let a = sff.get(0, 0, 0);
    let b = sff.get(0, 0, 1);
    let c = (2..dim).map(|k| sff.get(0, k, k)).sum::<f64>() / (dim - 2) as f64;
    residual = residual.max((a + sff.get(0, 1, 1) - c).abs());
    for i in 0..dim {
        for j in i..dim {
            let expected = match (i, j) {
                (0, 0) | (0, 1) | (1, 1) => continue,
                _ if i == j => c,
                _ => 0.0,
            };
            residual = residual.max((sff.get(0, i, j) - expected).abs());
        }
    }

    let mut pairs = Vec::with_capacity(sff.normal_rank() - 1);
    for r in 1..sff.normal_rank() {
        let (ar, br) = (sff.get(r, 0, 0), sff.get(r, 0, 1));
        residual = residual.max((sff.get(r, 1, 1) + ar).abs());
        for i in 0..dim {
            for j in i.max(2)..dim {
                residual = residual.max(sff.get(r, i, j).abs());
            }
        }
        pairs.push((ar, br));
    }
    while pairs
        .last()
        .is_some_and(|(a, b)| a.abs().max(b.abs()) <= tol.shape_form)
    {
        pairs.pop();
    }
    Ok(ShapeCheck {
        matches_forms: residual <= tol.shape_form,
        recovered: ShapeOperatorForm { a, b, c, pairs },
        residual,
    })
}

/// Builds a point whose second fundamental form has the equality forms in the
/// frame obtained from `raw_frame`, so that the plane of the first two
/// `L`-vectors attains equality in the plane bound.
pub fn equality_instance(
    ambient: AmbientModel,
    sf: StructureFunctions,
    n: usize,
    form: &ShapeOperatorForm,
    raw_frame: &[Vector],
) -> Result<SubmanifoldPoint> {
    if raw_frame.len() != n + 2 {
        return Err(Error::BadShape(format!(
            "expected {} frame vectors, got {}",
            n + 2,
            raw_frame.len()
        )));
    }
    if n < 2 {
        return Err(Error::BadShape(format!(
            "equality instances need n >= 2, got {n}"
        )));
    }
    if 2 * ambient.m() < n {
        return Err(Error::BadShape(format!(
            "L of dimension {n} does not fit into m = {}",
            ambient.m()
        )));
    }
    let rank = 2 * ambient.m() - n;
    if rank < 1 + form.pairs.len() {
        return Err(Error::BadShape(format!(
            "normal rank {rank} cannot hold the first direction and {} pairs",
            form.pairs.len()
        )));
    }
    if !form.is_finite() {
        return Err(Error::BadShape("shape operator form must be finite".into()));
    }
    let mut sff = SecondFundamentalForm::zeros(rank, n + 2);
    sff.set(0, 0, 0, form.a);
    sff.set(0, 0, 1, form.b);
    sff.set(0, 1, 1, form.c - form.a);
    for k in 2..n + 2 {
        sff.set(0, k, k, form.c);
    }
    for (r, (ar, br)) in form.pairs.iter().enumerate() {
        sff.set(r + 1, 0, 0, *ar);
        sff.set(r + 1, 0, 1, *br);
        sff.set(r + 1, 1, 1, -ar);
    }
    SubmanifoldPoint::attach(ambient, sf, raw_frame, sff, PointFlags::default())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "case")]
pub enum F2Case {
    NonNegative {
        bound: BoundReport,
        /// `|T|^2 = n` with `n` even, the stated characterization of equality.
        invariant_even: bool,
    },
    Negative {
        bound: BoundReport,
        /// `T e_j = 0` for the frame vectors orthogonal to the argmin plane.
        adapted_frame_anti_invariant: bool,
        max_trailing_t: f64,
    },
}

impl F2Case {
    pub fn bound(&self) -> &BoundReport {
        match self {
            F2Case::NonNegative { bound, .. } | F2Case::Negative { bound, .. } => bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourDimSlant {
    pub theta: f64,
    pub bound: BoundReport,
    pub minimal: bool,
    pub c_compatible: bool,
    /// `tau - K(L)` against `5 F1 - 3 (F11 + F22) + F3`; these agree exactly
    /// when `sigma(X, xi) = 0`.
    pub identity_lhs: f64,
    pub identity_rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlobalDelta {
    pub tau: f64,
    pub inf_k: f64,
    pub delta_l: f64,
    pub argmin: [Vec<f64>; 2],
    pub f2_case: F2Case,
    pub four_dim_slant: Option<FourDimSlant>,
    pub search_starts: usize,
    pub search_sweeps: usize,
    pub search_unconverged: usize,
}

/// Pinching of `delta^L = tau - inf K` according to the sign of `F2`, plus
/// the four-dimensional slant corollary when it applies.
pub fn global_delta_bounds(point: &SubmanifoldPoint) -> Result<GlobalDelta> {
    let opts = SearchOptions {
        seed: point.tolerances().seed,
        ..SearchOptions::default()
    };
    let search = minimize_sectional(point, &opts)?;
    let tol = point.tolerances().equality;
    let n = point.n();
    let tau = point.tau();
    let delta_l = tau - search.inf_k;
    let sf = point.structure();

    let f2_case = if sf.f2 >= 0.0 {
        let t_sq = point.t_norm_sq();
        F2Case::NonNegative {
            bound: BoundReport::new(delta_l, delta_rhs(point, n as f64 / 2.0), tol),
            invariant_even: n.is_multiple_of(2) && (t_sq - n as f64).abs() <= tol * n as f64,
        }
    } else {
        let frame = point.adapted_l_frame(&[search.x.clone(), search.y.clone()])?;
        let mut worst = 0.0f64;
        for e in &frame[2..] {
            let (te, _) = point.tn_decompose(e)?;
            worst = worst.max(te.norm());
        }
        F2Case::Negative {
            bound: BoundReport::new(delta_l, delta_rhs(point, 0.0), tol),
            adapted_frame_anti_invariant: worst <= ANTI_INVARIANT_TOL,
            max_trailing_t: worst,
        }
    };

    let four_dim_slant = match (n, point.slant_probe().angle()) {
        (2, Some(theta)) => {
            let l = point.l_frame();
            let k_l = point.sectional(&l[0], &l[1])?;
            Some(FourDimSlant {
                theta,
                bound: BoundReport::new(delta_l, delta_rhs(point, 0.0), tol),
                minimal: point.h_norm_sq().sqrt() <= tol,
                c_compatible: point.flags().c_compatible,
                identity_lhs: tau - k_l,
                identity_rhs: 5.0 * sf.f1 - 3.0 * sf.diagonal_sum() + sf.f3,
            })
        }
        _ => None,
    };

    Ok(GlobalDelta {
        tau,
        inf_k: search.inf_k,
        delta_l,
        argmin: [search.x.as_slice().to_vec(), search.y.as_slice().to_vec()],
        f2_case,
        four_dim_slant,
        search_starts: search.starts,
        search_sweeps: search.sweeps,
        search_unconverged: search.unconverged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::SpaceFormKind;

    fn invariant2(sf: StructureFunctions) -> SubmanifoldPoint {
        let a = AmbientModel::canonical(2).unwrap();
        let frame = vec![a.dx(0), a.dy(0), a.xi(0).clone(), a.xi(1).clone()];
        SubmanifoldPoint::attach(
            a,
            sf,
            &frame,
            SecondFundamentalForm::zeros(2, 4),
            PointFlags::default(),
        )
        .unwrap()
    }

    fn frame(a: &AmbientModel, n: usize) -> Vec<Vector> {
        let mut v: Vec<Vector> = (0..n).map(|k| a.dx(k)).collect();
        v.push(a.xi(0).clone());
        v.push(a.xi(1).clone());
        v
    }

    #[test]
    fn f_squared_of_special_planes() {
        let p = invariant2(StructureFunctions::preset(SpaceFormKind::SSpaceForm, 2.0));
        let a = p.ambient().clone();
        assert!((plane_f_squared(&p, &a.dx(0), &a.dy(0)).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            plane_f_squared(&p, &a.dx(0), &a.dx(0)),
            Err(Error::NotOrthonormal { .. })
        ));
        assert!(matches!(
            plane_f_squared(&p, &a.dx(0), a.xi(0)),
            Err(Error::NotInL { .. })
        ));

        let a = AmbientModel::canonical(2).unwrap();
        let q = SubmanifoldPoint::attach(
            a.clone(),
            StructureFunctions::preset(SpaceFormKind::SSpaceForm, 2.0),
            &frame(&a, 2),
            SecondFundamentalForm::zeros(2, 4),
            PointFlags::default(),
        )
        .unwrap();
        assert_eq!(plane_f_squared(&q, &a.dx(0), &a.dx(1)).unwrap(), 0.0);
    }

    #[test]
    fn invariant_spot_value() {
        let p = invariant2(StructureFunctions::preset(SpaceFormKind::SSpaceForm, 2.0));
        let l = p.l_frame();
        let b = delta_bound(&p, &l[0], &l[1], false).unwrap();
        assert!((b.lhs - 4.0).abs() < 1e-12 && (b.rhs - 4.0).abs() < 1e-12 && b.equality);
        let s = delta_bound(&p, &l[0], &l[1], true).unwrap();
        assert!((s.rhs - 4.0).abs() < 1e-9);

        let g = global_delta_bounds(&p).unwrap();
        assert!((g.delta_l - 4.0).abs() < 1e-12);
        let four = g.four_dim_slant.unwrap();
        assert!((four.bound.rhs - 4.0).abs() < 1e-12 && four.bound.equality && four.minimal);
        assert!((four.identity_lhs - four.identity_rhs).abs() < 1e-12);
    }

    #[test]
    fn equality_instances_attain_the_bound() {
        let cases = [
            (ShapeOperatorForm::zero(), 2, 2),
            (
                ShapeOperatorForm {
                    a: 1.0,
                    b: 0.0,
                    c: 0.0,
                    pairs: vec![],
                },
                2,
                2,
            ),
            (
                ShapeOperatorForm {
                    a: 0.0,
                    b: 0.0,
                    c: 1.0,
                    pairs: vec![],
                },
                3,
                3,
            ),
            (
                ShapeOperatorForm {
                    a: 1.0,
                    b: 0.5,
                    c: 2.0,
                    pairs: vec![(0.3, -0.2)],
                },
                3,
                4,
            ),
            (
                ShapeOperatorForm {
                    a: -0.4,
                    b: 0.9,
                    c: -1.5,
                    pairs: vec![(0.1, 0.0), (-2.0, 0.7)],
                },
                4,
                4,
            ),
        ];
        let sf = StructureFunctions::new([0.7, 1.3, -0.4, 0.2, 3.0, -2.0, 0.5]);
        for (form, n, m) in cases {
            let a = AmbientModel::canonical(m).unwrap();
            let p = equality_instance(a.clone(), sf, n, &form, &frame(&a, n)).unwrap();
            let l = p.l_frame();
            let b = delta_bound(&p, &l[0], &l[1], false).unwrap();
            assert!(b.slack.abs() <= 1e-9, "{form:?}: slack {}", b.slack);

            let check = delta_equality_shape_check(&p, &l[0], &l[1]).unwrap();
            assert!(check.matches_forms, "{form:?}: residual {}", check.residual);
            let sign = if form.c < 0.0 { -1.0 } else { 1.0 };
            let r = &check.recovered;
            assert!((r.a - sign * form.a).abs() < 1e-8);
            assert!((r.b - sign * form.b).abs() < 1e-8);
            assert!((r.c - sign * form.c).abs() < 1e-8);
            assert_eq!(r.pairs.len(), form.pairs.len());
            for (got, want) in r.pairs.iter().zip(&form.pairs) {
                assert!(
                    (got.0.abs() - want.0.abs()).abs() < 1e-8
                        && (got.1.abs() - want.1.abs()).abs() < 1e-8
                );
            }
        }
    }

    #[test]
    fn perturbed_instance_loses_equality() {
        let a = AmbientModel::canonical(4).unwrap();
        let form = ShapeOperatorForm {
            a: 1.0,
            b: 0.5,
            c: 2.0,
            pairs: vec![(0.3, -0.2)],
        };
        let sf = StructureFunctions::new([0.7, 1.3, -0.4, 0.2, 0.0, 0.0, 0.5]);
        let p = equality_instance(a.clone(), sf, 3, &form, &frame(&a, 3)).unwrap();
        let mut sff = p.sff().clone();
        sff.set(1, 2, 2, sff.get(1, 2, 2) + 0.1);
        let q = p.with_sff(sff).unwrap();
        let l = q.l_frame();
        assert!(
            !delta_equality_shape_check(&q, &l[0], &l[1])
                .unwrap()
                .matches_forms
        );
        assert!(delta_bound(&q, &l[0], &l[1], false).unwrap().slack > 1e-6);
    }

    #[test]
    fn equality_instance_rejects_too_many_pairs() {
        let a = AmbientModel::canonical(2).unwrap();
        let form = ShapeOperatorForm {
            a: 0.0,
            b: 0.0,
            c: 0.0,
            pairs: vec![(1.0, 0.0); 2],
        };
        let sf = StructureFunctions::new([0.0; 7]);
        assert!(matches!(
            equality_instance(a.clone(), sf, 2, &form, &frame(&a, 2)),
            Err(Error::BadShape(_))
        ));
    }

    #[test]
    fn f2_sign_cases() {
        let a = AmbientModel::canonical(3).unwrap();
        let sf = StructureFunctions::new([0.5, -1.0, 0.2, 0.1, 0.0, 0.0, 0.3]);
        let p = SubmanifoldPoint::attach(
            a.clone(),
            sf,
            &frame(&a, 3),
            SecondFundamentalForm::zeros(3, 5),
            PointFlags::default(),
        )
        .unwrap();
        let g = global_delta_bounds(&p).unwrap();
        match &g.f2_case {
            F2Case::Negative {
                bound,
                adapted_frame_anti_invariant,
                ..
            } => {
                assert!(bound.holds(1e-9) && *adapted_frame_anti_invariant && bound.equality);
            }
            other => panic!("unexpected {other:?}"),
        }

        // Anti-invariant with n odd: the F2 >= 0 bound has a gap of 3n/2 F2.
        let sf = StructureFunctions::new([0.5, 1.0, 0.2, 0.1, 0.0, 0.0, 0.3]);
        let g = global_delta_bounds(&p.with_structure(sf)).unwrap();
        match &g.f2_case {
            F2Case::NonNegative {
                bound,
                invariant_even,
            } => {
                assert!(!invariant_even && (bound.slack - 4.5).abs() < 1e-9);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invariant_equality_in_the_nonnegative_case() {
        // n = 4 invariant, plane span{dx1, dx2} has F^2 = 0.
        let a = AmbientModel::canonical(4).unwrap();
        let raw = vec![
            a.dx(0),
            a.dx(1),
            a.dy(0),
            a.dy(1),
            a.xi(0).clone(),
            a.xi(1).clone(),
        ];
        let sf = StructureFunctions::new([0.4, 0.8, -0.3, 0.1, 0.0, 0.0, 0.2]);
        let form = ShapeOperatorForm {
            a: 0.3,
            b: -0.6,
            c: 0.9,
            pairs: vec![(0.2, 0.5)],
        };
        let p = equality_instance(a, sf, 4, &form, &raw).unwrap();
        let g = global_delta_bounds(&p).unwrap();
        match &g.f2_case {
            F2Case::NonNegative {
                bound,
                invariant_even,
            } => assert!(*invariant_even && bound.equality),
            other => panic!("unexpected {other:?}"),
        }
    }
}
