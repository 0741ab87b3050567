//! Fans and bundle fixtures shipped with the library.

use crate::error::{Error, Result};
use crate::fan::Fan;

pub const FULTON_FAN: &str = include_str!("../data/fulton.fan.json");
pub const SIGMA_PRIME_FAN: &str = include_str!("../data/sigma_prime.fan.json");
pub const EIKELBERG_FAN: &str = include_str!("../data/eikelberg.fan.json");
pub const P2_FAN: &str = include_str!("../data/p2.fan.json");

pub const EIKELBERG_BUNDLE: &str = include_str!("../data/eikelberg.bundle.json");
pub const FULTON_RANK3_BUNDLE: &str = include_str!("../data/fulton_rank3.bundle.json");
pub const P2_TANGENT_BUNDLE: &str = include_str!("../data/p2_tangent.bundle.json");

pub const FAN_NAMES: [&str; 4] = ["fulton", "sigma_prime", "eikelberg", "p2"];

/// Text of a bundled fan file by short name.
pub fn fan_text(name: &str) -> Option<&'static str> {
    match name.trim_end_matches(".fan.json") {
        "fulton" => Some(FULTON_FAN),
        "sigma_prime" | "sigma-prime" => Some(SIGMA_PRIME_FAN),
        "eikelberg" => Some(EIKELBERG_FAN),
        "p2" => Some(P2_FAN),
        _ => None,
    }
}

/// A bundled fan by short name.
pub fn fan(name: &str) -> Result<Fan> {
    let text = fan_text(name).ok_or_else(|| Error::Format(format!("no bundled fan named {name:?}")))?;
    Fan::from_json(text)
}

pub const BUNDLE_NAMES: [&str; 3] = ["eikelberg", "fulton_rank3", "p2_tangent"];

pub fn bundle_text(name: &str) -> Option<&'static str> {
    match name.trim_end_matches(".bundle.json") {
        "eikelberg" => Some(EIKELBERG_BUNDLE),
        "fulton_rank3" | "fulton-rank3" => Some(FULTON_RANK3_BUNDLE),
        "p2_tangent" | "p2-tangent" => Some(P2_TANGENT_BUNDLE),
        _ => None,
    }
}

/// A bundled fixture by short name.
pub fn bundle(name: &str) -> Result<crate::io::Bundle> {
    let text = bundle_text(name).ok_or_else(|| Error::Format(format!("no bundled fixture named {name:?}")))?;
    crate::io::bundle_from_json(text, None)
}
