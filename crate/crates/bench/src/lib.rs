//! Shared inputs for the benchmarks.

use tropconic::classify::REFERENCE_TYPES;
use tropconic::tropical::{trop_phi, Config, TropPlucker};

/// One generic triple per configuration type.
pub fn reference_triples() -> Vec<Config> {
    REFERENCE_TYPES.iter().map(|r| r.config()).collect()
}

pub fn reference_images() -> Vec<TropPlucker> {
    reference_triples()
        .iter()
        .map(|c| trop_phi(c).expect("reference triples evaluate").raw)
        .collect()
}
