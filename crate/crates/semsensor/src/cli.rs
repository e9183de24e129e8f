//! Implementations behind the `semsensor` command-line tool.
//!
//! Each command returns a classified [`CliError`] so the binary can map
//! failures to stable exit codes: 0 success, 1 validation, 2 I/O,
//! 3 internal.

use std::fmt::Write as _;
use std::path::Path;

use crate::codec::{CodecOptions, Encoding, EncodedPayload};
use crate::report::{self, SweepConfig};
use crate::scenario::{self, OutputNames};
use crate::triple::TripleSet;
use crate::{es3n, ssw};

/// A command failure and its exit-code class.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Io(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::Io(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    std::fs::write(path, bytes)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn encode_with(
    encoding: Encoding,
    reading: &crate::observation::SensorReading,
    options: &CodecOptions,
) -> Result<EncodedPayload, CliError> {
    let encoded = match encoding {
        Encoding::Ssw => ssw::encode(reading, options),
        Encoding::Es3n => es3n::encode(reading, options),
    };
    encoded.map_err(|e| CliError::Validation(e.to_string()))
}

/// `semsensor encode`: reading file in, canonical XML out, size on stdout.
pub fn cmd_encode(
    input: &Path,
    encoding: Encoding,
    out: &Path,
    options: &CodecOptions,
) -> Result<(), CliError> {
    let reading = scenario::parse_reading(&read_file(input)?)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let payload = encode_with(encoding, &reading, options)?;
    write_file(out, payload.bytes())?;
    println!("{}", payload.size_bytes());
    Ok(())
}

/// Root-structure encoding detection: an `rdf:RDF` envelope is ES3N,
/// anything else is the annotated O&M form.
pub fn detect_encoding(root_name: &str) -> Encoding {
    if root_name == "rdf:RDF" {
        Encoding::Es3n
    } else {
        Encoding::Ssw
    }
}

fn extract_auto(text: &str) -> Result<TripleSet, CliError> {
    let root = crate::xml::parse_document(text).map_err(|e| CliError::Validation(e.to_string()))?;
    let triples = match detect_encoding(&root.name) {
        Encoding::Es3n => es3n::extract_element(&root),
        Encoding::Ssw => ssw::extract_element(&root),
    };
    triples.map_err(|e| CliError::Validation(e.to_string()))
}

/// `semsensor extract`: prints the document's triples as canonical
/// N-Triples lines.
pub fn cmd_extract(path: &Path) -> Result<(), CliError> {
    let triples = extract_auto(&read_file(path)?)?;
    print!("{}", triples.to_ntriples());
    Ok(())
}

/// `semsensor compare`: sizes of both encodings, their ratio, and the
/// equivalence verdict.
pub fn cmd_compare(input: &Path, options: &CodecOptions) -> Result<(), CliError> {
    let reading = scenario::parse_reading(&read_file(input)?)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let ssw_payload = encode_with(Encoding::Ssw, &reading, options)?;
    let es3n_payload = encode_with(Encoding::Es3n, &reading, options)?;

    let ssw_triples = ssw::extract(&ssw_payload)
        .map_err(|e| CliError::Internal(format!("ssw extraction failed: {e}")))?;
    let es3n_triples = es3n::extract(&es3n_payload)
        .map_err(|e| CliError::Internal(format!("es3n extraction failed: {e}")))?;
    let same = crate::triple::equivalent(&ssw_triples, &es3n_triples)
        .map_err(|e| CliError::Internal(format!("projection failed: {e}")))?;

    let ssw_size = ssw_payload.size_bytes();
    let es3n_size = es3n_payload.size_bytes();
    println!("ssw: {ssw_size} bytes");
    println!("es3n: {es3n_size} bytes");
    println!("ratio (es3n/ssw): {:.3}", es3n_size as f64 / ssw_size as f64);
    println!("{}", if same { "EQUIVALENT" } else { "DIFFERENT" });
    Ok(())
}

/// `semsensor sweep`: runs the full grid and writes the CSV and plot files.
pub fn cmd_sweep(
    config_path: Option<&Path>,
    seed_override: Option<u64>,
    out_dir: &Path,
) -> Result<(), CliError> {
    let (mut config, outputs) = match config_path {
        Some(path) => scenario::parse_scenario(&read_file(path)?)
            .map_err(|e| CliError::Validation(e.to_string()))?,
        None => (SweepConfig::default(), OutputNames::default()),
    };
    if let Some(seed) = seed_override {
        config.seeds = vec![seed];
    }

    let result = report::sweep(&config).map_err(|e| CliError::Validation(e.to_string()))?;
    for failure in &result.failures {
        eprintln!(
            "warning: cell (n={}, seed={}) failed: {}",
            failure.n, failure.seed, failure.message
        );
    }
    if result.rows.is_empty() {
        return Err(CliError::Validation(
            "every sweep cell failed; nothing to report".into(),
        ));
    }

    let csv = report::emit_csv(&result).map_err(|e| CliError::Internal(e.to_string()))?;
    let plot = report::emit_plotdata(&result).map_err(|e| CliError::Internal(e.to_string()))?;
    let csv_path = out_dir.join(&outputs.csv);
    let plot_path = out_dir.join(&outputs.plot);
    write_file(&csv_path, csv.as_bytes())?;
    write_file(&plot_path, plot.as_bytes())?;

    print!("{}", summary_table(&result));
    println!("wrote {}", csv_path.display());
    println!("wrote {}", plot_path.display());
    Ok(())
}

/// Mean transmitted kilobytes per `(n, encoding)`, as a fixed-width table.
pub fn summary_table(result: &report::SweepResult) -> String {
    let means = report::mean_tx_kb(result);
    let mut encodings: Vec<Encoding> = result.rows.iter().map(|r| r.encoding).collect();
    encodings.sort_by_key(|e| e.as_str());
    encodings.dedup();
    let mut ns: Vec<u32> = result.rows.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    ns.dedup();

    let mut out = String::new();
    let _ = write!(out, "{:>6}", "n");
    for encoding in &encodings {
        let _ = write!(out, "{:>16}", format!("{encoding}_mean_kb"));
    }
    out.push('\n');
    for n in ns {
        let _ = write!(out, "{n:>6}");
        for &encoding in &encodings {
            match means.get(&(n, encoding)) {
                Some(mean) => {
                    let _ = write!(out, "{:>16.3}", mean);
                }
                None => {
                    let _ = write!(out, "{:>16}", "-");
                }
            }
        }
        out.push('\n');
    }
    out
}

/// Parses the `--include-timestamp {on|off}` flag value.
pub fn parse_on_off(value: &str) -> Result<bool, String> {
    match value {
        "on" => Ok(true),
        "off" => Ok(false),
        other => Err(format!("expected \"on\" or \"off\", got {other:?}")),
    }
}
