//! Exact polynomial machinery for the IID cost/probability families.

pub mod certify;
pub mod checks;
pub mod families;
pub mod numeric;
pub mod ratpoly;

pub use certify::{certify_negative, certify_positive, count_roots_unit, CountMethod, SignCertificate};
pub use checks::{
    alpha_polynomial, derivative, duality_check, factorization35_check, find_alpha, identity38_check,
    lemma1_certificate, lemma2_certificate, prob_increasing_certificate, two_level_consistency,
    AlphaReport,
};
pub use families::{cost_prob, CostProbPair};
pub use ratpoly::RatPoly;
