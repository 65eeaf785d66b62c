//! Experiment orchestration: scaling-ratio upper bounds, lower-bound
//! saturation families, kernel decay envelopes, Weyl constancy, and
//! trace-duality sampling, all reported as fits plus tolerance-cited checks.

pub mod duality;
pub mod families;
pub mod fit;
pub mod kernel;
pub mod refine;
pub mod report;
pub mod scaling;
pub mod sharpness;
pub mod weyl;

pub use duality::{duality_sampling, VIOLATION_TOL};
pub use families::{degree_ladder, degree_ladder_in, window_width, SystemFamily, TProfile};
pub use fit::{fit_loglog, fit_logs, FitResult};
pub use kernel::{kernel_decay_check, ENVELOPE_RATIO_BOUND};
pub use refine::{refine_to_stability, Refinement};
pub use report::{csv_file_name, p_token, Check, CheckKind, CsvRow, ExperimentReport, Verdict};
pub use scaling::{
    ratio_upper_scaling, scaling_file_name, RATIO_SLOPE_TOL, REFINE_CAP_FACTOR, REFINE_N0_FACTOR,
    REFINE_TOL,
};
pub use sharpness::{
    sharpness_s2, sharpness_zonal, LOWER_SLOPE_TOL, SPIKE_SLOPE_TOL, WHITEN_TOL, ZONAL_SLOPE_TOL,
};
pub use weyl::{weyl_check, POINTWISE_TOL, SLOPE_TOL};
