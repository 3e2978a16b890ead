//! Running scenario checks and assembling reports.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::ambient::StructureFunctions;
use crate::error::{Error, Result};
use crate::inequalities::{
    c_form_equality_classifier, chen_lemma_check, delta_bound, delta_equality_shape_check,
    global_delta_bounds, plane_f_squared, ricci_bound, ricci_bound_slant, ricci_equality_diagnosis,
    BoundReport, F2Case, RicciVariant,
};
use crate::point::{InvariantReport, SubmanifoldPoint};
use crate::scenario::{CheckName, CheckSpec, Direction, Scenario, VariantName};
use crate::tolerance::Tolerances;

pub const TOOL: &str = "gssf";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Bound on `|slack - sum of defects|` for the Ricci defect identity.
pub const DEFECT_IDENTITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: CheckName,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub slack: Option<f64>,
    pub equality: Option<bool>,
    pub passed: bool,
    pub diagnostics: BTreeMap<String, Value>,
}

impl CheckRecord {
    fn new(name: CheckName) -> Self {
        CheckRecord {
            name,
            lhs: None,
            rhs: None,
            slack: None,
            equality: None,
            passed: true,
            diagnostics: BTreeMap::new(),
        }
    }

    fn bound(name: CheckName, b: &BoundReport, tol: f64) -> Self {
        let mut r = CheckRecord {
            name,
            lhs: Some(b.lhs),
            rhs: Some(b.rhs),
            slack: Some(b.slack),
            equality: Some(b.equality),
            passed: b.holds(tol),
            diagnostics: BTreeMap::new(),
        };
        if let Some(terms) = &b.defect_terms {
            let sum: f64 = terms.iter().map(|t| t.value).sum();
            r.note("defect_sum", sum);
            r.note("defect_terms", terms);
            let identity = (b.slack - sum).abs() <= DEFECT_IDENTITY_TOL;
            r.note("defect_identity_holds", identity);
            r.passed &= identity;
        }
        r
    }

    fn note(&mut self, key: &str, value: impl Serialize) {
        self.diagnostics.insert(
            key.to_string(),
            serde_json::to_value(value).expect("diagnostics serialize"),
        );
    }

    /// Compares with the expectations stated in the scenario.
    fn expect(&mut self, spec: &CheckSpec, tol: f64) {
        let close = |got: Option<f64>, want: f64| {
            got.is_some_and(|g| (g - want).abs() <= tol * want.abs().max(1.0))
        };
        if let Some(want) = spec.expect_lhs {
            let ok = close(self.lhs, want);
            self.note("expect_lhs_met", ok);
            self.passed &= ok;
        }
        if let Some(want) = spec.expect_rhs {
            let ok = close(self.rhs, want);
            self.note("expect_rhs_met", ok);
            self.passed &= ok;
        }
        if let Some(want) = spec.expect_equality {
            let ok = self.equality == Some(want);
            self.note("expect_equality_met", ok);
            self.passed &= ok;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub pass_count: usize,
    pub fail_count: usize,
    /// Smallest slack over all checks that have one.
    pub worst_slack: Option<f64>,
}

impl Summary {
    pub fn of(records: &[CheckRecord]) -> Self {
        let pass_count = records.iter().filter(|r| r.passed).count();
        Summary {
            pass_count,
            fail_count: records.len() - pass_count,
            worst_slack: records.iter().filter_map(|r| r.slack).reduce(f64::min),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmbientEcho {
    pub m: usize,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameEcho {
    pub n: usize,
    pub c_compatible: bool,
    pub tangent: Vec<Vec<f64>>,
    pub normal: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub tolerance: f64,
    pub structure: StructureFunctions,
    pub ambient: AmbientEcho,
    pub frame: FrameEcho,
    pub invariants: InvariantReport,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn to_json(&self) -> String {
        crate::json::to_string(self)
    }
}

fn direction(
    point: &SubmanifoldPoint,
    d: &Option<Direction>,
    default: usize,
) -> Result<crate::linalg::Vector> {
    d.clone()
        .unwrap_or(Direction::Index(default))
        .resolve(point)
}

fn variant(point: &SubmanifoldPoint, spec: &CheckSpec, tol: f64) -> Result<RicciVariant> {
    Ok(match spec.variant.unwrap_or_default() {
        VariantName::General => RicciVariant::General,
        VariantName::CForm => RicciVariant::CForm,
        VariantName::SForm => {
            let c = match spec.c {
                Some(c) => c,
                None => {
                    let sf = point.structure();
                    sf.matching_constant(crate::ambient::SpaceFormKind::SSpaceForm, tol)
                        .ok_or_else(|| {
                            Error::VariantPreconditionViolated(
                                "structure functions are not an S-space-form".into(),
                            )
                        })?
                }
            };
            RicciVariant::SForm { c }
        }
    })
}

/// Runs one check; precondition failures are errors, not failed checks.
pub fn run_check(point: &SubmanifoldPoint, spec: &CheckSpec) -> Result<CheckRecord> {
    let tol = point.tolerances().equality;
    let mut record = match spec.name {
        CheckName::ScalarIdentity => {
            let s = point.scalar_identity_check();
            let mut r = CheckRecord::new(spec.name);
            r.lhs = Some(s.lhs);
            r.rhs = Some(s.rhs);
            r.slack = Some(s.rhs - s.lhs);
            r.equality = Some(s.rel_diff <= tol);
            r.passed = s.rel_diff <= tol;
            r.note("abs_diff", s.abs_diff);
            r.note("rel_diff", s.rel_diff);
            r
        }
        CheckName::RicciBound => {
            let u = direction(point, &spec.u, 1)?;
            let v = variant(point, spec, tol)?;
            let mut r = CheckRecord::bound(spec.name, &ricci_bound(point, &u, v)?, tol);
            r.note("variant", v);
            r
        }
        CheckName::RicciSlant => {
            let u = direction(point, &spec.u, 1)?;
            let mut r = CheckRecord::bound(spec.name, &ricci_bound_slant(point, &u)?, tol);
            r.note("theta", point.slant_probe().angle());
            r
        }
        CheckName::RicciEquality => {
            let u = direction(point, &spec.u, 1)?;
            let d = ricci_equality_diagnosis(point, &u)?;
            let mut r = CheckRecord::bound(spec.name, &d.bound, tol);
            r.passed &= d.consistent;
            r.note("in_null_space", d.in_null_space);
            r.note("null_space_residual", d.null_space_residual);
            r.note("consistent", d.consistent);
            r
        }
        CheckName::CFormClassifier => {
            let c = c_form_equality_classifier(point)?;
            let mut r = CheckRecord::new(spec.name);
            r.equality = Some(c.all_u_equality);
            r.passed = c.matches;
            r.note("classification", &c);
            r
        }
        CheckName::DeltaBound => {
            let x = direction(point, &spec.x, 1)?;
            let y = direction(point, &spec.y, 2)?;
            let b = delta_bound(point, &x, &y, spec.slant_mode.unwrap_or(false))?;
            let mut r = CheckRecord::bound(spec.name, &b, tol);
            r.note("f_squared", plane_f_squared(point, &x, &y)?);
            r
        }
        CheckName::DeltaShape => {
            let x = direction(point, &spec.x, 1)?;
            let y = direction(point, &spec.y, 2)?;
            let b = delta_bound(point, &x, &y, false)?;
            let s = delta_equality_shape_check(point, &x, &y)?;
            let mut r = CheckRecord::bound(spec.name, &b, tol);
            // Equality in the plane bound holds exactly for the normal forms.
            r.passed &= s.matches_forms == b.equality;
            r.note("matches_forms", s.matches_forms);
            r.note("recovered", &s.recovered);
            r.note("form_residual", s.residual);
            r
        }
        CheckName::GlobalDelta => {
            let g = global_delta_bounds(point)?;
            let mut r = CheckRecord::bound(spec.name, g.f2_case.bound(), tol);
            match &g.f2_case {
                F2Case::NonNegative { invariant_even, .. } => {
                    r.note("f2_case", "non_negative");
                    r.note("invariant_even", invariant_even);
                }
                F2Case::Negative {
                    adapted_frame_anti_invariant,
                    max_trailing_t,
                    ..
                } => {
                    r.note("f2_case", "negative");
                    r.note("adapted_frame_anti_invariant", adapted_frame_anti_invariant);
                    r.note("max_trailing_t", max_trailing_t);
                }
            }
            if let Some(four) = &g.four_dim_slant {
                r.passed &= four.bound.holds(tol);
                r.note("four_dim_slant", four);
            }
            r.note("tau", g.tau);
            r.note("inf_k", g.inf_k);
            r.note("argmin", &g.argmin);
            r.note("search_starts", g.search_starts);
            r.note("search_sweeps", g.search_sweeps);
            r.note("search_unconverged", g.search_unconverged);
            r
        }
        CheckName::ChenLemma => {
            let a = spec
                .a
                .as_deref()
                .ok_or_else(|| Error::Scenario("chen_lemma needs `a`".into()))?;
            let c = spec
                .c
                .ok_or_else(|| Error::Scenario("chen_lemma needs `c`".into()))?;
            let l = chen_lemma_check(a, c, tol)?;
            let mut r = CheckRecord::new(spec.name);
            r.lhs = Some(c);
            r.rhs = a.get(..2).map(|h| 2.0 * h[0] * h[1]);
            r.equality = Some(l.equality);
            r.passed = !l.hypothesis_holds
                || (l.inequality_holds && l.equality == l.equality_condition_holds);
            r.note("lemma", l);
            r
        }
        CheckName::PlaneFSquared => {
            let x = direction(point, &spec.x, 1)?;
            let y = direction(point, &spec.y, 2)?;
            let mut r = CheckRecord::new(spec.name);
            r.lhs = Some(plane_f_squared(point, &x, &y)?);
            r
        }
    };
    record.expect(spec, tol);
    Ok(record)
}

/// Builds the scenario's point and runs all of its checks.
pub fn run_scenario(scenario: &Scenario, tol: Tolerances) -> Result<Report> {
    let point = scenario.build(tol)?;
    let checks = scenario
        .checks
        .iter()
        .map(|c| run_check(&point, c))
        .collect::<Result<Vec<_>>>()?;
    let rows = |b: &crate::linalg::Basis| b.iter().map(|v| v.as_slice().to_vec()).collect();
    Ok(Report {
        tool: TOOL,
        version: VERSION,
        tolerance: tol.equality,
        structure: *point.structure(),
        ambient: AmbientEcho {
            m: point.ambient().m(),
            dim: point.ambient().dim(),
        },
        frame: FrameEcho {
            n: point.n(),
            c_compatible: point.flags().c_compatible,
            tangent: rows(point.tangent()),
            normal: rows(point.normal()),
        },
        invariants: point.invariant_report(),
        summary: Summary::of(&checks),
        checks,
    })
}

/// Report of the `validate` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub valid: bool,
    pub violations: Vec<Value>,
}

pub fn validate_scenario(scenario: &Scenario, tol: Tolerances) -> Result<ValidationReport> {
    let ambient = scenario.ambient_model()?;
    let violations: Vec<Value> = ambient
        .validate(tol.orthonormality)
        .into_iter()
        .map(|v| json!({ "invariant": v.invariant, "magnitude": v.magnitude }))
        .collect();
    Ok(ValidationReport {
        tool: TOOL,
        version: VERSION,
        valid: violations.is_empty(),
        violations,
    })
}
