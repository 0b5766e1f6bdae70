//! Normalized colength sequences and their asymptotics.

pub mod height;
pub mod limit;
pub mod multiplicity;
pub mod sequence;
pub mod trajectory;
pub mod verify;

pub use height::{
    height_sample, hyperplane_grid, lipschitz_audit, lipschitz_constants, HeightPoint,
    HeightSample, LipschitzAudit,
};
pub use limit::{limit_estimate, LimitEstimate, LimitPlan, RateFit};
pub use multiplicity::{hilbert_kunz, hilbert_samuel, newton_multiplicity, HilbertSamuel};
pub use sequence::{
    colength_sequence, irreducible_components, region_volume, scaled_region, ScaledRegion,
    SequencePoint,
};
pub use trajectory::{trajectory_classify, Trajectory, TrajectoryClass};
pub use verify::{
    verify_brosowsky, verify_minkowski, verify_positivity, verify_volume_multiplicity,
};
