//! Numerical verification of Chen-type curvature inequalities for
//! submanifolds of generalized S-space-forms tangent to both structure
//! vector fields.
//!
//! The ambient space is the canonical model of a metric f-manifold with two
//! structure vector fields, and a submanifold is represented by its data at a
//! single point: an adapted tangent frame, a normal frame and a formal second
//! fundamental form. Every curvature quantity is computed by brute force from
//! the Gauss equation and compared with the closed forms and inequalities.
//!
//! ```
//! use gssf::{AmbientModel, PointFlags, SecondFundamentalForm, SpaceFormKind, StructureFunctions, SubmanifoldPoint};
//! use gssf::generators::invariant_frame;
//! use gssf::inequalities::{ricci_bound, RicciVariant};
//!
//! let ambient = AmbientModel::canonical(2)?;
//! let frame = invariant_frame(&ambient, 2)?;
//! let sf = StructureFunctions::preset(SpaceFormKind::SSpaceForm, 2.0);
//! let p = SubmanifoldPoint::attach(ambient, sf, &frame, SecondFundamentalForm::zeros(2, 4), PointFlags::default())?;
//! assert!((p.tau() - 6.0).abs() < 1e-12);
//!
//! let b = ricci_bound(&p, &p.l_frame()[0], RicciVariant::General)?;
//! assert!(b.equality);
//! # Ok::<(), gssf::Error>(())
//! ```

pub mod ambient;
pub mod error;
pub mod fuzz;
pub mod generators;
pub mod inequalities;
pub mod json;
pub mod linalg;
pub mod point;
pub mod report;
pub mod scenario;
pub mod tolerance;

pub use ambient::{AmbientModel, SpaceFormKind, StructureFunctions};
pub use error::{Error, Result};
pub use linalg::{Basis, Vector};
pub use point::{PointFlags, SecondFundamentalForm, SubmanifoldPoint};
pub use tolerance::Tolerances;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/ambient.md")]
    mod ambient {}
    #[doc = include_str!("../../../book/src/submanifold.md")]
    mod submanifold {}
    #[doc = include_str!("../../../book/src/ricci.md")]
    mod ricci {}
    #[doc = include_str!("../../../book/src/delta.md")]
    mod delta {}
    #[doc = include_str!("../../../book/src/generators.md")]
    mod generators {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
