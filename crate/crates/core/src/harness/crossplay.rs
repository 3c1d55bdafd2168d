use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::sim::simulate_games;
use super::stats::MatchStats;
use super::HarnessError;
use crate::decision::WeightVector;
use crate::engine::RulesConfig;
use crate::Scalar;

/// Mean scores for every unordered pairing, seats pooled.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossplayMatrix {
    pub labels: Vec<String>,
    pub games_per_cell: usize,
    pub seed_base: u64,
    /// Upper triangle including the diagonal, row-major: (0,0), (0,1), ..., (1,1), ...
    pub cells: Vec<MatchStats>,
}

fn triangle_index(k: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * k + j - i - i * i.saturating_sub(1) / 2
}

impl CrossplayMatrix {
    /// Stats for the pairing of `i` and `j`, in either order.
    pub fn cell(&self, i: usize, j: usize) -> &MatchStats {
        &self.cells[triangle_index(self.labels.len(), i, j)]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes") + "\n"
    }

    /// Aligned table of `mean ± ci95`.
    pub fn to_text(&self) -> String {
        let width = self.labels.iter().map(String::len).max().unwrap_or(0).max(13);
        let mut out = format!("{:width$}", "");
        for l in &self.labels {
            let _ = write!(out, "  {l:>width$}");
        }
        out.push('\n');
        for (i, row) in self.labels.iter().enumerate() {
            let _ = write!(out, "{row:width$}");
            for j in 0..self.labels.len() {
                let c = self.cell(i, j);
                let _ = write!(out, "  {:>width$}", format!("{:.2} ± {:.2}", c.mean, c.ci95));
            }
            out.push('\n');
        }
        let _ = writeln!(out, "games per cell: {}, seed base: {}", self.games_per_cell, self.seed_base);
        out
    }
}

/// Plays every unordered pairing (diagonal included) for `n` games each.
///
/// Each cell uses the same seed block, and seats alternate inside it.
pub fn crossplay_matrix<T: Scalar>(
    entries: &[(&str, &WeightVector<T>)],
    n: usize,
    seed_base: u64,
    rules: RulesConfig,
) -> Result<CrossplayMatrix, HarnessError> {
    if entries.len() < 2 {
        return Err(HarnessError::Validation("a cross-play matrix needs at least two policies".into()));
    }
    let mut cells = Vec::new();
    for i in 0..entries.len() {
        for j in i..entries.len() {
            cells.push(simulate_games(entries[i], entries[j], n, seed_base, rules, false)?.stats);
        }
    }
    Ok(CrossplayMatrix {
        labels: entries.iter().map(|(l, _)| l.to_string()).collect(),
        games_per_cell: n,
        seed_base,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision::Preset;

    #[test]
    fn triangle_layout() {
        let k = 4;
        let mut expect = 0;
        for i in 0..k {
            for j in i..k {
                assert_eq!(triangle_index(k, i, j), expect);
                assert_eq!(triangle_index(k, j, i), expect);
                expect += 1;
            }
        }
    }

    #[test]
    fn three_presets_give_six_cells() {
        let ws: Vec<_> = Preset::ALL.iter().map(|p| (p.name(), p.weights::<f64>())).collect();
        let entries: Vec<_> = ws.iter().map(|(l, w)| (*l, w)).collect();
        let m = crossplay_matrix(&entries, 4, 10, RulesConfig::default()).unwrap();
        assert_eq!(m.cells.len(), 6);
        assert_eq!(m.cell(1, 0), m.cell(0, 1));
        let hc_hl = m.cell(0, 1);
        assert_eq!(hc_hl.n, 4);
        assert!(m.to_text().lines().count() == 5);
        let back: CrossplayMatrix = serde_json::from_str(&m.to_json()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn needs_two_entries() {
        let w = Preset::HumanLike.weights::<f64>();
        assert!(crossplay_matrix(&[("a", &w)], 2, 0, RulesConfig::default()).is_err());
    }
}
