//! Special functions: incomplete elliptic integrals, Lambert W, incomplete Beta.

mod beta;
mod elliptic;
mod lambert;

pub use beta::{beta, inc_beta, sec_power_integral};
pub(crate) use elliptic::ellip_f_signed;
pub use elliptic::{
    carlson_rd, carlson_rf, complete_k_bracket, ellip_e, ellip_f, ellip_k, ellip_k_complement, EllipticArg,
};
pub use lambert::{lambert_w, lower_branch_threshold, LambertBranch};
