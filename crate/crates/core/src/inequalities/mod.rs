//! Chen-type bounds and their equality characterizations.
//!
//! Every bound is reported as a [`BoundReport`] with `slack = rhs - lhs`.
//! The bounds are theorems for arbitrary formal second fundamental forms, so
//! a slack below `-tol` always signals a bug somewhere upstream.

mod delta;
mod lemma;
mod ricci;
mod search;

pub use delta::{
    delta_bound, delta_equality_shape_check, equality_instance, global_delta_bounds,
    plane_f_squared, F2Case, FourDimSlant, GlobalDelta, ShapeCheck, ShapeOperatorForm,
};
pub use lemma::{chen_lemma_check, LemmaCheck};
pub use ricci::{
    c_form_equality_classifier, ricci_bound, ricci_bound_slant, ricci_equality_diagnosis,
    CFormClassification, ExpectedClass, RicciEqualityDiagnosis, RicciVariant,
};
pub use search::{minimize_sectional, PlaneSearch, SearchOptions};

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefectTerm {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    /// Nonnegative contributions that add up to `slack`, when the bound
    /// comes from an exact identity.
    pub defect_terms: Option<Vec<DefectTerm>>,
    pub equality: bool,
}

impl BoundReport {
    pub fn new(lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = rhs - lhs;
        BoundReport {
            lhs,
            rhs,
            slack,
            defect_terms: None,
            equality: slack.abs() <= tol,
        }
    }

    pub fn with_defects(mut self, terms: Vec<DefectTerm>) -> Self {
        self.defect_terms = Some(terms);
        self
    }

    /// `slack >= -tol`.
    pub fn holds(&self, tol: f64) -> bool {
        self.slack >= -tol
    }

    pub fn defect_sum(&self) -> Option<f64> {
        self.defect_terms
            .as_ref()
            .map(|t| t.iter().map(|d| d.value).sum())
    }
}
