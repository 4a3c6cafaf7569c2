//! Affine cones of varieties of minimal rational tangents for the
//! symplectic Grassmannians and the F4 homogeneous space, their second
//! fundamental forms, and the isotropy actions used to compare sub-cones.

pub mod ambient;
pub mod cones;
pub mod error;
pub mod fd;
pub mod group;
pub mod linalg;
pub mod sff;
pub mod tensor;

pub use ambient::{AmbientVector, GradedAmbient};
pub use cones::{ConeKind, ConeModel, ConePoint, Family, Params, Stratum};
pub use error::{Error, Result};
pub use group::GroupElement;
pub use linalg::{CMat, CVec, Subspace, C64, COMPARE_TOL, RANK_TOL};
