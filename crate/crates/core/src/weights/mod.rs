//! Weight filtrations attached to nilpotent operators.

pub mod admissible;
pub mod deligne;
pub mod isometry;
pub mod monodromy;
pub mod relative;
pub mod sl2;

pub use admissible::{admissible_pipeline, AdmissibleTriple};
pub use deligne::{check_component_heights, deligne_grading, initial_grading, joint_frame, DeligneGrading};
pub use isometry::{is_self_dual, isometry_checks, isometry_failure};
pub use monodromy::{check_monodromy, monodromy_filtration, Quotient};
pub use relative::{jordan_tops, relative_weight_filtration, verify_relative_weight_filtration, RelativeWeightReport};
pub use sl2::{sl2_complete, triple_from_gradings, Sl2Triple};
