//! Mixed Hodge structures as pairs of filtrations.

pub mod bigrading;
pub mod filtration;
pub mod lie;
pub mod membership;
pub mod metric;
pub mod polarization;
pub mod splitting;

pub use bigrading::{deligne_bigrading, grading_of, is_split_real, Bigrading};
pub use filtration::{DecFiltration, IncFiltration};
pub use lie::{chart_algebra, ChartAlgebra, LieBigrading};
pub use membership::{classify_membership, group_membership, GroupMembership, Membership, MembershipReport};
pub use metric::{graded_frame, metric_grading, mixed_hodge_metric, HodgeMetric};
pub use polarization::{GradedCoords, PolarizationSystem};
pub use splitting::{delta_split, DeltaSplitting};
