// Copyright 2026 windctl contributors
// SPDX-License-Identifier: Apache-2.0

//! Reproduction configs shipped with the binary.

use crate::config::ExperimentConfig;

/// `(name, document)`, sorted by name.
pub const BUNDLED: &[(&str, &str)] = &[
    ("fig2_drive", include_str!("../configs/fig2_drive.cfg")),
    ("fig3_strong", include_str!("../configs/fig3_strong.cfg")),
    ("fig3_strong_trajectory", include_str!("../configs/fig3_strong_trajectory.cfg")),
    ("fig3_weak", include_str!("../configs/fig3_weak.cfg")),
    ("fig3_weak_trajectory", include_str!("../configs/fig3_weak_trajectory.cfg")),
    ("fig4_single_shot", include_str!("../configs/fig4_single_shot.cfg")),
    ("fig5_dsc", include_str!("../configs/fig5_dsc.cfg")),
    ("fig6_qsl", include_str!("../configs/fig6_qsl.cfg")),
    ("fig7_dsc", include_str!("../configs/fig7_dsc.cfg")),
    ("fig7_weak", include_str!("../configs/fig7_weak.cfg")),
    ("fig8_robustness", include_str!("../configs/fig8_robustness.cfg")),
];

pub fn find(name: &str) -> Option<&'static str> {
    let stem = name.strip_suffix(".cfg").unwrap_or(name);
    BUNDLED.iter().find(|(n, _)| *n == stem).map(|(_, text)| *text)
}

/// One line per bundled config: name and description.
pub fn listing() -> String {
    let width = BUNDLED.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (name, text) in BUNDLED {
        let description = ExperimentConfig::parse(text)
            .map(|c| c.description)
            .unwrap_or_else(|e| format!("(invalid: {e})"));
        out.push_str(&format!("{name:<width$}  {description}\n"));
    }
    out
}
