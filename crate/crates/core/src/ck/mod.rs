//! Cuntz-Krieger families of partial isometries over directed graphs.

mod family;
mod pattern;
mod verify;

pub use family::{
    pi2_finite, pi2_infinite, pi_n_finite, pi_n_infinite, relation2_claim_params, relation2_infinite, relation_claim,
    sample_claim_params, Backing, CKFamily, ClaimParams, Orientation, RELATION2_RULES,
};
pub use pattern::{AffineRule, PatternOperator};
pub use verify::{
    generated_dimension, verify_ck, verify_ck_matrix, verify_cuntz, CKMatrixReport, CKReport, CuntzReport, Verdict,
};
