//! Bundled example documents.

pub const CP2_SEMITORIC: &str = include_str!("../fixtures/cp2_semitoric.json");
pub const CP2_STANDARD_TORIC: &str = include_str!("../fixtures/cp2_standard_toric.json");
pub const S2S2_SEMITORIC: &str = include_str!("../fixtures/s2s2_semitoric.json");

pub const NAMES: [&str; 3] = ["cp2_semitoric", "cp2_standard_toric", "s2s2_semitoric"];

pub fn fixture(name: &str) -> Option<&'static str> {
    match name.trim_end_matches(".json") {
        "cp2_semitoric" => Some(CP2_SEMITORIC),
        "cp2_standard_toric" => Some(CP2_STANDARD_TORIC),
        "s2s2_semitoric" => Some(S2S2_SEMITORIC),
        _ => None,
    }
}
