use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{BoundReport, DefectTerm};
use crate::ambient::{SpaceFormKind, StructureFunctions};
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::point::SubmanifoldPoint;

/// Residual below which `U` counts as a member of the relative null space.
const NULL_RESIDUAL: f64 = 1e-8;
const CLASSIFIER_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RicciVariant {
    /// Arbitrary structure functions.
    General,
    /// S-space-form of constant f-sectional curvature `c`.
    SForm { c: f64 },
    /// C-space-form with `sigma(X, xi) = 0`.
    CForm,
}

/// Compares only the functions that enter the bounds; `F12`, `F21` never do.
fn matches_preset(sf: &StructureFunctions, preset: &StructureFunctions, tol: f64) -> bool {
    [
        (sf.f1, preset.f1),
        (sf.f2, preset.f2),
        (sf.f3, preset.f3),
        (sf.f11, preset.f11),
        (sf.f22, preset.f22),
    ]
    .iter()
    .all(|(a, b)| (a - b).abs() <= tol * 1f64.max(b.abs()))
}

fn check_variant(point: &SubmanifoldPoint, variant: RicciVariant) -> Result<()> {
    let sf = point.structure();
    let tol = point.tolerances().equality;
    match variant {
        RicciVariant::General => Ok(()),
        RicciVariant::SForm { c } => {
            if matches_preset(
                sf,
                &StructureFunctions::preset(SpaceFormKind::SSpaceForm, c),
                tol,
            ) {
                Ok(())
            } else {
                Err(Error::VariantPreconditionViolated(format!(
                    "structure functions are not those of an S-space-form with c = {c}"
                )))
            }
        }
        RicciVariant::CForm => {
            if !point.flags().c_compatible {
                return Err(Error::VariantPreconditionViolated(
                    "the C-form bound needs the c_compatible flag".into(),
                ));
            }
            let c = 4.0 * sf.f1;
            if matches_preset(
                sf,
                &StructureFunctions::preset(SpaceFormKind::CSpaceForm, c),
                tol,
            ) {
                Ok(())
            } else {
                Err(Error::VariantPreconditionViolated(
                    "structure functions are not those of a C-space-form".into(),
                ))
            }
        }
    }
}

/// The nonnegative terms by which `Ric(U)` falls short of the general bound,
/// read off in a frame with `e_1 = U`.
fn ricci_defects(point: &SubmanifoldPoint, u: &Vector) -> Result<Vec<DefectTerm>> {
    let frame = point.adapted_l_frame(std::slice::from_ref(u))?;
    let adapted = point.reframed(frame, point.normal().vectors().to_vec())?;
    let sff = adapted.sff();
    let dim = point.n() + 2;
    let mut out = Vec::with_capacity(2 * sff.normal_rank());
    for r in 0..sff.normal_rank() {
        let rest: f64 = (1..dim).map(|i| sff.get(r, i, i)).sum();
        out.push(DefectTerm {
            name: format!("trace_split[{}]", r + 1),
            value: 0.25 * (sff.get(r, 0, 0) - rest).powi(2),
        });
        out.push(DefectTerm {
            name: format!("off_diagonal[{}]", r + 1),
            value: (1..dim).map(|i| sff.get(r, 0, i).powi(2)).sum(),
        });
    }
    Ok(out)
}

fn general_rhs(point: &SubmanifoldPoint, tu_sq: f64) -> f64 {
    let n = point.n() as f64;
    let sf = point.structure();
    (n + 2.0).powi(2) / 4.0 * point.h_norm_sq() + (n + 1.0) * sf.f1 + 3.0 * sf.f2 * tu_sq
        - sf.diagonal_sum()
}

/// Chen-Ricci inequality `Ric(U) <= rhs` for a unit `U` in `L`.
pub fn ricci_bound(
    point: &SubmanifoldPoint,
    u: &Vector,
    variant: RicciVariant,
) -> Result<BoundReport> {
    check_variant(point, variant)?;
    let lhs = point.ricci(u)?;
    let u = point.unit_in_l(u)?;
    let (tu, _) = point.tn_decompose(&u)?;
    let tu_sq = tu.norm_squared();
    let n = point.n() as f64;
    let sf = point.structure();
    let h_term = (n + 2.0).powi(2) / 4.0 * point.h_norm_sq();
    let mut defects = ricci_defects(point, &u)?;
    let rhs = match variant {
        RicciVariant::General => general_rhs(point, tu_sq),
        RicciVariant::SForm { .. } => {
            let rhs = h_term + (n - 1.0) * sf.f1 + (3.0 * sf.f1 - 4.0) * tu_sq;
            // This rhs sits 2|NU|^2 below the general one, so the term is
            // -2|NU|^2 and the bound can fail once NU != 0.
            let gap = rhs - general_rhs(point, tu_sq);
            defects.push(DefectTerm {
                name: "normal_part".into(),
                value: gap,
            });
            rhs
        }
        RicciVariant::CForm => h_term + ((n - 1.0) + 3.0 * tu_sq) * sf.f1,
    };
    Ok(BoundReport::new(lhs, rhs, point.tolerances().equality).with_defects(defects))
}

/// The general bound for a slant point, with `|TU|^2` replaced by `cos^2 theta`.
pub fn ricci_bound_slant(point: &SubmanifoldPoint, u: &Vector) -> Result<BoundReport> {
    let theta = point
        .slant_probe()
        .angle()
        .ok_or_else(|| Error::NotSlant("slant probe found no constant angle".into()))?;
    let lhs = point.ricci(u)?;
    let u = point.unit_in_l(u)?;
    let rhs = general_rhs(point, theta.cos().powi(2));
    Ok(BoundReport::new(lhs, rhs, point.tolerances().equality)
        .with_defects(ricci_defects(point, &u)?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RicciEqualityDiagnosis {
    pub equality: bool,
    pub in_null_space: bool,
    /// `equality` iff `in_null_space`.
    pub consistent: bool,
    pub null_space_residual: f64,
    pub bound: BoundReport,
}

/// At a minimal point, equality in the general bound for `U` holds exactly
/// when `U` lies in the relative null space.
pub fn ricci_equality_diagnosis(
    point: &SubmanifoldPoint,
    u: &Vector,
) -> Result<RicciEqualityDiagnosis> {
    let h_norm = point.h_norm_sq().sqrt();
    if h_norm > point.tolerances().equality {
        return Err(Error::NotMinimal { h_norm });
    }
    let bound = ricci_bound(point, u, RicciVariant::General)?;
    let residual = point.null_space_residual(&point.unit_in_l(u)?)?;
    let in_null_space = residual <= NULL_RESIDUAL;
    Ok(RicciEqualityDiagnosis {
        equality: bound.equality,
        in_null_space,
        consistent: bound.equality == in_null_space,
        null_space_residual: residual,
        bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedClass {
    TotallyFUmbilical,
    TotallyGeodesic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CFormClassification {
    pub all_u_equality: bool,
    pub expected_class: ExpectedClass,
    pub class_holds: bool,
    /// `all_u_equality` iff `class_holds`.
    pub matches: bool,
    pub samples: usize,
    pub worst_abs_slack: f64,
}

/// Tests equality in the C-form bound over the `L`-frame and seeded random
/// unit vectors of `L`, and compares with the predicted class of `sigma`.
pub fn c_form_equality_classifier(point: &SubmanifoldPoint) -> Result<CFormClassification> {
    let n = point.n();
    if n < 2 {
        return Err(Error::VariantPreconditionViolated(format!(
            "classifier needs n >= 2, got {n}"
        )));
    }
    check_variant(point, RicciVariant::CForm)?;
    let mut samples: Vec<Vector> = point.l_frame().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(point.tolerances().seed);
    while samples.len() < n + CLASSIFIER_SAMPLES {
        let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-3 {
            let c: Vec<f64> = c.iter().map(|x| x / norm).collect();
            samples.push(point.tangent().combine(&c));
        }
    }
    let mut all_u_equality = true;
    let mut worst = 0.0f64;
    for u in &samples {
        let b = ricci_bound(point, u, RicciVariant::CForm)?;
        all_u_equality &= b.equality;
        worst = worst.max(b.slack.abs());
    }
    let class = point.classify_sff();
    let (expected_class, class_holds) = if n == 2 {
        (ExpectedClass::TotallyFUmbilical, class.totally_f_umbilical)
    } else {
        (ExpectedClass::TotallyGeodesic, class.totally_geodesic)
    };
    Ok(CFormClassification {
        all_u_equality,
        expected_class,
        class_holds,
        matches: all_u_equality == class_holds,
        samples: samples.len(),
        worst_abs_slack: worst,
    })
}
