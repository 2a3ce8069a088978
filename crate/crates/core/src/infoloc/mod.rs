//! Information measures and the location of quantum information.

mod channel;
mod distribution;
mod lambda;

pub use channel::{
    contextual_basis, decomposition_joint, recovery_residual, pair_projectors, framework_joint, info_in_states, info_in_subsystem,
    locate_channel, ordered_subsets, ChannelLocationReport, ChannelPrep, ChannelTolerance, SubsetVerdictDoc,
    SubsystemFactorization, SubsystemVerdict,
};
pub use distribution::{JointDistribution, PMF_TOL, RECOVERY_TOL};
pub use lambda::{canonicalize, lambda_basis, structured_lambdas, LambdaBasis, LambdaGrid};
