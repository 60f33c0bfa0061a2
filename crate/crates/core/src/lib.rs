//! Smooth members of pencils and linear systems of hypersurfaces over finite
//! fields.
//!
//! The crate provides exact arithmetic in GF(p^r), homogeneous forms, projective
//! enumeration, smoothness oracles, linear-system verification and search,
//! line/curve incidence statistics in the projective plane, the explicit
//! quadric-surface pencils, and exact threshold arithmetic.

pub mod bounds;
pub mod constructions;
pub mod error;
pub mod gf;
pub mod incidence;
pub mod linalg;
pub mod linsys;
pub mod mpoly;
pub mod projspace;
pub mod smoothness;

pub use error::{Error, Result};
pub use gf::{make_field, Fe, FieldCtx};
pub use mpoly::{BiForm, HomForm};
pub use projspace::{ProjLine, ProjPoint};
