//! Formatted error tables out of results CSV files.

use crate::plan::EntryResult;

/// Formats entries as an error table: one block per noise profile, columns
/// indexed by the back-event count, with a row for the corrected-mean error
/// and a row for the raw-mean error.
pub fn error_table(entries: &[EntryResult]) -> String {
    let mut profiles: Vec<&str> = Vec::new();
    for entry in entries {
        if !profiles.contains(&entry.noise_profile.as_str()) {
            profiles.push(&entry.noise_profile);
        }
    }

    let mut out = String::new();
    for profile in profiles {
        let group: Vec<&EntryResult> = entries
            .iter()
            .filter(|e| e.noise_profile == profile)
            .collect();
        out.push_str(&format!("profile: {profile}\n"));
        out.push_str(&row("tau1", group.iter().map(|e| e.tau1.to_string())));
        out.push_str(&row("eps", group.iter().map(|e| cell(e.stats.eps))));
        out.push_str(&row("eps_raw", group.iter().map(|e| cell(e.stats.eps_raw))));
        out.push('\n');
    }
    out
}

fn cell(value: f64) -> String {
    if value == 0.0 {
        "0".to_string()
    } else {
        format!("{value:.5e}")
    }
}

fn row(label: &str, cells: impl Iterator<Item = String>) -> String {
    let mut line = format!("{label:<8}");
    for cell in cells {
        line.push_str(&format!(" {cell:>12}"));
    }
    line.push('\n');
    line
}
