//! The bundled Tehran Urban and Suburban Railway System network.
//!
//! Reconstructed from public route maps. Lines 6 and 7 were only partly open
//! when the network was studied, so their alignment here is approximate, as is
//! the placement of the short branches off Golshahr and Meydan-e Hazrat Vali Asr.

use crate::document::{parse_network, NetworkDocument};

pub const TUSRS_JSON: &str = include_str!("../data/tusrs.net.json");

pub fn load_bundled_tusrs() -> NetworkDocument {
    parse_network(TUSRS_JSON.as_bytes()).expect("bundled fixture is valid")
}
