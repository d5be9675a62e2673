//! Multipliers `Σ a_n e^{−2πi·φ(n)x} n^{−s}` and their theta-function
//! approximations near rationals.

mod error_law;
mod euler;
mod heat_kernel;
mod quadfield;
mod spec;
mod theta;

pub use error_law::{
    epsilon_stability, lemma1_error_scan, lemma2_error_scan, log2_slope, EpsilonStability,
    ErrorLawReport, ErrorLawSample, ScanConfig,
};
pub use euler::{euler_f1_direct, euler_f2_direct, lemma2_main_term};
pub use heat_kernel::{heat_kernel_eval, HeatKernelParams};
pub use quadfield::{quadfield_multiplier, ClassTerm, QuadfieldValue};
pub use spec::{eval_multiplier, EvalParams, MultiplierSpec, Phase, PreparedMultiplier};
pub use theta::{lemma1_main_term, t_y_direct, theta_dual, theta_s_y, Gated, RegimeGate};
