//! Sweep orchestration and report output.
//!
//! A sweep runs every `(n, encoding, seed)` combination; both encodings in
//! a cell share the one topology built for `(n, seed)`, so their rows are a
//! paired comparison. Cells execute in parallel and the merged result is
//! sorted by `(n, encoding, seed)`, which keeps the output deterministic.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::codec::{CodecOptions, Encoding};
use crate::netsim::{self, RadioEnergyModel, RunConfig, Topology};
use crate::observation::{canonical_f64, SensorReading};

/// Resolved sweep parameters.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub n_list: Vec<u32>,
    pub seeds: Vec<u64>,
    pub encodings: Vec<Encoding>,
    pub field_side: f64,
    pub radio_range: f64,
    pub rounds: u32,
    pub radio: RadioEnergyModel,
    pub initial_energy_j: f64,
    pub include_timestamp: bool,
    pub template: SensorReading,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n_list: (1..=10).map(|i| i * 10).collect(),
            seeds: vec![1, 2, 3, 4, 5],
            encodings: vec![Encoding::Ssw, Encoding::Es3n],
            field_side: 100.0,
            radio_range: 40.0,
            rounds: 20,
            radio: RadioEnergyModel::default(),
            initial_energy_j: 2.0,
            include_timestamp: true,
            template: crate::observation::default_reading(),
        }
    }
}

/// One sweep cell result.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: u32,
    pub encoding: Encoding,
    pub seed: u64,
    /// Decimal kilobytes: `total_tx_bytes / 1000`.
    pub total_tx_kb: f64,
    /// Round of first node death, 0 if none died within the horizon.
    pub lifetime_rounds: u32,
    pub energy_spent_j: f64,
}

/// A cell whose topology could not be built; the sweep carries on without
/// it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepFailure {
    pub n: u32,
    pub seed: u64,
    pub message: String,
}

/// All rows produced by a sweep, sorted by `(n, encoding, seed)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub failures: Vec<SweepFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SweepError {
    #[error("{0} must not be empty")]
    EmptyInput(&'static str),
    #[error("cannot report an empty result")]
    EmptyResult,
    #[error("malformed row {0:?}: {1}")]
    MalformedRow(String, String),
}

/// Runs the full sweep.
pub fn sweep(config: &SweepConfig) -> Result<SweepResult, SweepError> {
    if config.n_list.is_empty() {
        return Err(SweepError::EmptyInput("n_list"));
    }
    if config.seeds.is_empty() {
        return Err(SweepError::EmptyInput("seeds"));
    }
    if config.encodings.is_empty() {
        return Err(SweepError::EmptyInput("encodings"));
    }

    let cells: Vec<(u32, u64)> = config
        .n_list
        .iter()
        .flat_map(|&n| config.seeds.iter().map(move |&seed| (n, seed)))
        .collect();

    let outcomes: Vec<Result<Vec<SweepRow>, SweepFailure>> = cells
        .par_iter()
        .map(|&(n, seed)| run_cell(config, n, seed))
        .collect();

    let mut result = SweepResult::default();
    for outcome in outcomes {
        match outcome {
            Ok(rows) => result.rows.extend(rows),
            Err(failure) => result.failures.push(failure),
        }
    }
    result
        .rows
        .sort_by(|a, b| (a.n, a.encoding.as_str(), a.seed).cmp(&(b.n, b.encoding.as_str(), b.seed)));
    result
        .failures
        .sort_by(|a, b| (a.n, a.seed).cmp(&(b.n, b.seed)));
    Ok(result)
}

/// Runs every encoding over the one topology built for `(n, seed)`.
fn run_cell(config: &SweepConfig, n: u32, seed: u64) -> Result<Vec<SweepRow>, SweepFailure> {
    let fail = |message: String| SweepFailure { n, seed, message };
    let topology = Topology::random(n, config.field_side, config.radio_range, seed)
        .map_err(|e| fail(e.to_string()))?;

    let mut rows = Vec::with_capacity(config.encodings.len());
    for &encoding in &config.encodings {
        let run_config = RunConfig {
            encoding,
            template: config.template.clone(),
            rounds: config.rounds,
            radio: config.radio,
            initial_energy_j: config.initial_energy_j,
            codec: CodecOptions::with_timestamp(config.include_timestamp),
        };
        let metrics = netsim::run(&topology, &run_config).map_err(|e| fail(e.to_string()))?;
        rows.push(SweepRow {
            n,
            encoding,
            seed,
            total_tx_kb: metrics.total_tx_bytes as f64 / 1000.0,
            lifetime_rounds: metrics.rounds_until_first_death,
            energy_spent_j: metrics.energy_spent_j,
        });
    }
    Ok(rows)
}

/// CSV header used by [`emit_csv`] and [`parse_csv`].
pub const CSV_HEADER: &str = "n,encoding,seed,total_tx_kb,lifetime_rounds,energy_spent_j";

/// Renders the result as CSV. Numeric fields use the canonical shortest
/// round-trip form, so parsing the text recovers the rows exactly.
pub fn emit_csv(result: &SweepResult) -> Result<String, SweepError> {
    if result.rows.is_empty() {
        return Err(SweepError::EmptyResult);
    }
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in &result.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.n,
            row.encoding,
            row.seed,
            canonical_f64(row.total_tx_kb),
            row.lifetime_rounds,
            canonical_f64(row.energy_spent_j)
        ));
    }
    Ok(out)
}

/// Parses [`emit_csv`] output back into rows.
pub fn parse_csv(text: &str) -> Result<Vec<SweepRow>, SweepError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == CSV_HEADER => {}
        other => {
            return Err(SweepError::MalformedRow(
                other.unwrap_or_default().to_string(),
                format!("expected header {CSV_HEADER:?}"),
            ))
        }
    }
    let mut rows = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let bad = |what: &str| SweepError::MalformedRow(line.to_string(), what.to_string());
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(bad("expected 6 fields"));
        }
        rows.push(SweepRow {
            n: fields[0].parse().map_err(|_| bad("bad n"))?,
            encoding: fields[1].parse().map_err(|_| bad("bad encoding"))?,
            seed: fields[2].parse().map_err(|_| bad("bad seed"))?,
            total_tx_kb: fields[3].parse().map_err(|_| bad("bad total_tx_kb"))?,
            lifetime_rounds: fields[4].parse().map_err(|_| bad("bad lifetime_rounds"))?,
            energy_spent_j: fields[5].parse().map_err(|_| bad("bad energy_spent_j"))?,
        });
    }
    Ok(rows)
}

/// Mean `total_tx_kb` per `(n, encoding)` over all seeds.
pub fn mean_tx_kb(result: &SweepResult) -> BTreeMap<(u32, Encoding), f64> {
    let mut sums: BTreeMap<(u32, Encoding), (f64, u32)> = BTreeMap::new();
    for row in &result.rows {
        let entry = sums.entry((row.n, row.encoding)).or_insert((0.0, 0));
        entry.0 += row.total_tx_kb;
        entry.1 += 1;
    }
    sums.into_iter()
        .map(|(key, (sum, count))| (key, sum / f64::from(count)))
        .collect()
}

/// Renders plot-ready columns: one line per `n`, one column per encoding
/// holding the mean `total_tx_kb` over seeds. Tab-separated with a `#`
/// comment header, the layout gnuplot and friends consume directly.
pub fn emit_plotdata(result: &SweepResult) -> Result<String, SweepError> {
    if result.rows.is_empty() {
        return Err(SweepError::EmptyResult);
    }
    let means = mean_tx_kb(result);
    let mut encodings: Vec<Encoding> = result.rows.iter().map(|r| r.encoding).collect();
    encodings.sort_by_key(|e| e.as_str());
    encodings.dedup();
    let mut ns: Vec<u32> = result.rows.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    ns.dedup();

    let mut out = String::from("# n");
    for encoding in &encodings {
        out.push_str(&format!("\t{encoding}_mean_total_tx_kb"));
    }
    out.push('\n');
    for n in ns {
        out.push_str(&n.to_string());
        for &encoding in &encodings {
            match means.get(&(n, encoding)) {
                Some(mean) => out.push_str(&format!("\t{}", canonical_f64(*mean))),
                None => out.push_str("\t-"),
            }
        }
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> SweepConfig {
        SweepConfig {
            n_list: vec![10],
            seeds: vec![1],
            rounds: 2,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn paired_rows_share_topology_and_es3n_dominates() {
        let result = sweep(&small_config()).unwrap();
        assert!(result.failures.is_empty());
        assert_eq!(result.rows.len(), 2);
        let es3n = &result.rows[0];
        let ssw = &result.rows[1];
        assert_eq!(es3n.encoding, Encoding::Es3n);
        assert_eq!(ssw.encoding, Encoding::Ssw);
        assert_eq!((es3n.n, es3n.seed), (ssw.n, ssw.seed));
        assert!(es3n.total_tx_kb > ssw.total_tx_kb);
    }

    #[test]
    fn empty_encodings_is_an_error() {
        let config = SweepConfig {
            encodings: vec![],
            ..small_config()
        };
        assert_eq!(sweep(&config), Err(SweepError::EmptyInput("encodings")));
    }

    #[test]
    fn sweep_is_deterministic() {
        let config = SweepConfig {
            n_list: vec![10, 20],
            seeds: vec![1, 2],
            rounds: 2,
            ..SweepConfig::default()
        };
        let a = sweep(&config).unwrap();
        let b = sweep(&config).unwrap();
        assert_eq!(a, b);
        assert_eq!(emit_csv(&a).unwrap(), emit_csv(&b).unwrap());
    }

    #[test]
    fn csv_round_trips() {
        let result = sweep(&small_config()).unwrap();
        let text = emit_csv(&result).unwrap();
        assert_eq!(text.lines().count(), 3);
        let parsed = parse_csv(&text).unwrap();
        assert_eq!(parsed, result.rows);
    }

    #[test]
    fn csv_of_empty_result_is_an_error() {
        assert_eq!(emit_csv(&SweepResult::default()), Err(SweepError::EmptyResult));
        assert_eq!(
            emit_plotdata(&SweepResult::default()),
            Err(SweepError::EmptyResult)
        );
    }

    #[test]
    fn parse_csv_rejects_garbage() {
        assert!(parse_csv("nonsense\n1,ssw,1,1,0,1").is_err());
        let text = format!("{CSV_HEADER}\n10,ssw,1,not_a_number,0,1\n");
        assert!(parse_csv(&text).is_err());
    }

    #[test]
    fn means_match_hand_computation() {
        let result = SweepResult {
            rows: vec![
                SweepRow {
                    n: 10,
                    encoding: Encoding::Ssw,
                    seed: 1,
                    total_tx_kb: 2.0,
                    lifetime_rounds: 0,
                    energy_spent_j: 0.1,
                },
                SweepRow {
                    n: 10,
                    encoding: Encoding::Ssw,
                    seed: 2,
                    total_tx_kb: 4.0,
                    lifetime_rounds: 0,
                    energy_spent_j: 0.2,
                },
            ],
            failures: vec![],
        };
        let means = mean_tx_kb(&result);
        assert_eq!(means[&(10, Encoding::Ssw)], 3.0);
    }

    #[test]
    fn plotdata_has_one_column_per_encoding() {
        let result = sweep(&small_config()).unwrap();
        let text = emit_plotdata(&result).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("# n\tes3n_mean_total_tx_kb\tssw_mean_total_tx_kb")
        );
        let data = lines.next().unwrap();
        assert!(data.starts_with("10\t"));
        assert_eq!(data.split('\t').count(), 3);
    }
}
