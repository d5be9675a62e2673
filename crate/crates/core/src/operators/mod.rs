//! Discrete fractional integrals, the product-space Stein–Weiss operator,
//! its continuous majorant, and empirical boundedness probes.

mod circulant;
mod conditions;
mod fractional;
mod lattice;
mod majorant;
mod scan;
mod stein_weiss;

pub use circulant::{circulant_l2_norm, circulant_symbol, folded_kernel};
pub use conditions::{interior_exponents, sw_conditions_check, SwCondition, SwReport};
pub use fractional::{apply_convolution, apply_fractional, apply_fractional_on, MIN_KERNEL_TERMS};
pub use lattice::{lp_norm, BoxRegion, LatticeFunction};
pub use majorant::{continuous_majorant, transference_constant, transference_scan, TransferenceReport};
pub use scan::{
    operator_ratio_scan, Family, Fractional, Identity, LatticeOperator, RatioRow, RatioScanConfig, RatioScanReport,
    SteinWeiss,
};
pub use stein_weiss::{apply_stein_weiss, stein_weiss_at, SWParams, WeightNorm};
