//! Scenario files shipped with the crate.

pub const NAMES: &[&str] = &[
    "s4_bf5",
    "s4_bf9000",
    "s54_bt171",
    "s54_bt_search",
    "s4_bf_search",
    "reduced_vs_full",
];

/// Text of a shipped scenario.
pub fn builtin(name: &str) -> Option<&'static str> {
    Some(match name {
        "s4_bf5" => include_str!("../../scenarios/s4_bf5.toml"),
        "s4_bf9000" => include_str!("../../scenarios/s4_bf9000.toml"),
        "s54_bt171" => include_str!("../../scenarios/s54_bt171.toml"),
        "s54_bt_search" => include_str!("../../scenarios/s54_bt_search.toml"),
        "s4_bf_search" => include_str!("../../scenarios/s4_bf_search.toml"),
        "reduced_vs_full" => include_str!("../../scenarios/reduced_vs_full.toml"),
        _ => return None,
    })
}
