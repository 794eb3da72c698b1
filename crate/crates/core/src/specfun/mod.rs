//! Special functions used by the closed-form references.

mod airy;
mod hermite;

pub use airy::{airy, airy_eval, airy_prime, AiryBranch, AiryValue, AIRY_MAX_ARG, AI_0, NEG_AI_PRIME_0};
pub use hermite::{hermite, HERMITE_MAX_DEGREE};
