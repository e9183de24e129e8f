use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use semsensor::cli::{self, parse_on_off};
use semsensor::codec::{CodecOptions, Encoding};

/// Compare the transmission cost of two semantic sensor-data encodings.
#[derive(Parser)]
#[command(name = "semsensor", version, about)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a reading file as canonical XML and print its byte size.
    Encode {
        /// Reading file (TOML, see schema/reading.toml).
        #[arg(short, long)]
        input: PathBuf,
        /// Target encoding: ssw or es3n.
        #[arg(long, value_parser = clap::builder::ValueParser::new(str::parse::<Encoding>))]
        encoding: Encoding,
        /// Where to write the XML document.
        #[arg(short, long)]
        out: PathBuf,
        /// Serialize the reading's time instant too (on|off).
        #[arg(long, default_value = "off", value_parser = parse_on_off, action = clap::ArgAction::Set)]
        include_timestamp: bool,
    },
    /// Extract a document's RDF triples as canonical N-Triples lines.
    Extract {
        /// XML document; the encoding is detected from the root element.
        path: PathBuf,
    },
    /// Encode a reading both ways and report sizes and equivalence.
    Compare {
        /// Reading file (TOML, see schema/reading.toml).
        #[arg(short, long)]
        input: PathBuf,
        /// Serialize the reading's time instant too (on|off).
        #[arg(long, default_value = "off", value_parser = parse_on_off, action = clap::ArgAction::Set)]
        include_timestamp: bool,
    },
    /// Run the network sweep and write CSV plus plot data.
    Sweep {
        /// Scenario file (TOML, see schema/scenario.toml); defaults apply
        /// when omitted.
        #[arg(short, long)]
        config: Option<PathBuf>,
        /// Replace the scenario's seed list with this single seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Directory for the output files.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            // Help and version requests are successes; anything else is an
            // argument-validation failure.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let result = match args.command {
        Command::Encode {
            input,
            encoding,
            out,
            include_timestamp,
        } => cli::cmd_encode(
            &input,
            encoding,
            &out,
            &CodecOptions::with_timestamp(include_timestamp),
        ),
        Command::Extract { path } => cli::cmd_extract(&path),
        Command::Compare {
            input,
            include_timestamp,
        } => cli::cmd_compare(&input, &CodecOptions::with_timestamp(include_timestamp)),
        Command::Sweep { config, seed, out } => {
            cli::cmd_sweep(config.as_deref(), seed, &out)
        }
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
