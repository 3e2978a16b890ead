//! Scenario files: a JSON description of one submanifold point plus the
//! checks to run on it.
//!
//! All indices in a scenario are 1-based, as in the usual notation
//! `e_1, ..., e_n` for the `L`-frame and `sigma^r_ij` for the coefficients
//! (`r` counts normal directions from 1, `i, j` run over `1..=n+2`).

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::ambient::{AmbientModel, SpaceFormKind, StructureFunctions};
use crate::error::{Error, Result};
use crate::generators::{
    anti_invariant_frame, invariant_frame, random_second_fundamental_form, slant_frame, Constraint,
};
use crate::linalg::Vector;
use crate::point::{PointFlags, SecondFundamentalForm, SubmanifoldPoint};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub ambient: AmbientSpec,
    pub structure: StructureSpec,
    pub frame: FrameSpec,
    #[serde(default)]
    pub sigma: SigmaSpec,
    #[serde(default)]
    pub c_compatible: bool,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbientSpec {
    pub m: usize,
    /// Rows of a replacement for the canonical `f`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<Vec<f64>>>,
    /// Replacements for `xi_1, xi_2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<[Vec<f64>; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetSpec {
    pub kind: SpaceFormKind,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StructureSpec {
    Preset(PresetSpec),
    Values(StructureFunctions),
}

impl StructureSpec {
    pub fn resolve(&self) -> StructureFunctions {
        match *self {
            StructureSpec::Preset(PresetSpec { kind, c }) => StructureFunctions::preset(kind, c),
            StructureSpec::Values(sf) => sf,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode", deny_unknown_fields)]
pub enum FrameSpec {
    Invariant {
        n: usize,
    },
    Slant {
        n: usize,
        theta: f64,
    },
    AntiInvariant {
        n: usize,
    },
    /// Raw tangent vectors in ambient coordinates; must span `xi_1, xi_2`.
    Explicit {
        vectors: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaGenerator {
    #[serde(default)]
    pub constraint: Constraint,
    pub seed: u64,
    #[serde(default = "one")]
    pub scale: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SigmaSpec {
    #[default]
    Zero,
    /// `(r, i, j, value)`, 1-based; the symmetric entry is set too.
    Entries(Vec<(usize, usize, usize, f64)>),
    Generator(SigmaGenerator),
}

/// A tangent direction: an index into the `L`-frame (1-based) or an ambient vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Direction {
    Index(usize),
    Vector(Vec<f64>),
}

impl Direction {
    pub fn resolve(&self, point: &SubmanifoldPoint) -> Result<Vector> {
        match self {
            Direction::Index(i) => {
                if *i == 0 || *i > point.n() {
                    return Err(Error::Scenario(format!(
                        "direction index {i} outside 1..={}",
                        point.n()
                    )));
                }
                Ok(point.l_frame()[i - 1].clone())
            }
            Direction::Vector(v) => {
                let v = Vector::from_column_slice(v);
                point.ambient().check_dim(&v)?;
                Ok(v)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    ScalarIdentity,
    RicciBound,
    RicciSlant,
    RicciEquality,
    CFormClassifier,
    DeltaBound,
    DeltaShape,
    GlobalDelta,
    ChenLemma,
    PlaneFSquared,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantName {
    #[default]
    General,
    SForm,
    CForm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    pub name: CheckName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Direction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Direction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Direction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<VariantName>,
    /// The constant of an S-form bound, or the `c` of Chen's lemma.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slant_mode: Option<bool>,
    /// The numbers of Chen's lemma.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_lhs: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_rhs: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_equality: Option<bool>,
}

impl CheckSpec {
    pub fn new(name: CheckName) -> Self {
        CheckSpec {
            name,
            u: None,
            x: None,
            y: None,
            variant: None,
            c: None,
            slant_mode: None,
            a: None,
            expect_lhs: None,
            expect_rhs: None,
            expect_equality: None,
        }
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Scenario(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        crate::json::to_string(self)
    }

    /// The ambient model, without validating the f-structure axioms.
    pub fn ambient_model(&self) -> Result<AmbientModel> {
        let spec = &self.ambient;
        if spec.f.is_none() && spec.xi.is_none() {
            return AmbientModel::canonical(spec.m);
        }
        let canonical = AmbientModel::canonical(spec.m)?;
        let dim = canonical.dim();
        let f = match &spec.f {
            None => canonical.f_matrix().clone(),
            Some(rows) => {
                if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                    return Err(Error::Scenario(format!(
                        "ambient.f must be a {dim}x{dim} matrix"
                    )));
                }
                DMatrix::from_fn(dim, dim, |i, j| rows[i][j])
            }
        };
        let xi = match &spec.xi {
            None => [canonical.xi(0).clone(), canonical.xi(1).clone()],
            Some([a, b]) => [Vector::from_column_slice(a), Vector::from_column_slice(b)],
        };
        let [xi1, xi2] = xi;
        AmbientModel::from_parts(spec.m, f, xi1, xi2)
    }

    fn raw_frame(&self, ambient: &AmbientModel) -> Result<Vec<Vector>> {
        match &self.frame {
            FrameSpec::Invariant { n } => invariant_frame(ambient, *n),
            FrameSpec::Slant { n, theta } => slant_frame(ambient, *n, *theta),
            FrameSpec::AntiInvariant { n } => anti_invariant_frame(ambient, *n),
            FrameSpec::Explicit { vectors } => Ok(vectors
                .iter()
                .map(|v| Vector::from_column_slice(v))
                .collect()),
        }
    }

    fn sigma(&self, n: usize, rank: usize) -> Result<(SecondFundamentalForm, bool)> {
        let dim = n + 2;
        match &self.sigma {
            SigmaSpec::Zero => Ok((SecondFundamentalForm::zeros(rank, dim), false)),
            SigmaSpec::Entries(entries) => {
                let mut sff = SecondFundamentalForm::zeros(rank, dim);
                for &(r, i, j, v) in entries {
                    if !(1..=rank).contains(&r)
                        || !(1..=dim).contains(&i)
                        || !(1..=dim).contains(&j)
                    {
                        return Err(Error::BadShape(format!(
                            "sigma entry ({r}, {i}, {j}) outside 1..={rank} x 1..={dim} x 1..={dim}"
                        )));
                    }
                    sff.set(r - 1, i - 1, j - 1, v);
                }
                Ok((sff, false))
            }
            SigmaSpec::Generator(g) => Ok((
                random_second_fundamental_form(n, rank, g.scale, g.constraint, g.seed)?,
                g.constraint.c_compatible(),
            )),
        }
    }

    /// Builds and validates the point described by the scenario.
    pub fn build(&self, tol: Tolerances) -> Result<SubmanifoldPoint> {
        let ambient = self.ambient_model()?;
        let raw = self.raw_frame(&ambient)?;
        if raw.len() < 3 {
            return Err(Error::BadShape(format!(
                "frame needs at least 3 vectors, got {}",
                raw.len()
            )));
        }
        let n = raw.len() - 2;
        if n + 2 > ambient.dim() {
            return Err(Error::BadShape(format!(
                "{} frame vectors exceed dimension {}",
                raw.len(),
                ambient.dim()
            )));
        }
        for v in &raw {
            ambient.check_dim(v)?;
        }
        crate::point::check_ambient(&ambient, tol)?;
        crate::point::check_xi_tangent(&ambient, &raw, tol)?;
        let rank = ambient.dim() - n - 2;
        let (sff, generated_c) = self.sigma(n, rank)?;
        let flags = PointFlags {
            c_compatible: self.c_compatible || generated_c,
        };
        SubmanifoldPoint::attach_with_tolerances(
            ambient,
            self.structure.resolve(),
            &raw,
            sff,
            flags,
            tol,
        )
    }
}
