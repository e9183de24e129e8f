//! Reading and scenario file formats.
//!
//! Both files are TOML with a fixed schema (annotated examples live in
//! `schema/`). Unknown keys are rejected outright rather than warned about:
//! a silently ignored parameter would invalidate a benchmark claim.

use serde::Deserialize;

use crate::codec::Encoding;
use crate::netsim::RadioEnergyModel;
use crate::observation::{
    DataRecord, PhenomenonDefinition, QuantityObservation, SensorReading, TimeInstant,
    UomIdentifier, Violation,
};
use crate::report::SweepConfig;

/// Configuration rejected, with every offending key listed.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("{0}")]
    Parse(String),
    #[error("invalid values for: {}", .0.join(", "))]
    BadValues(Vec<String>),
    #[error("invalid reading: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidReading(Vec<Violation>),
}

/// On-disk form of one sensor reading.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReadingFile {
    pub sensor_id: u32,
    pub timestamp: String,
    pub record: RecordSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordSection {
    pub definition: String,
    #[serde(rename = "field")]
    pub fields: Vec<FieldSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSection {
    pub name: String,
    pub definition: String,
    pub uom_code: String,
    pub uom_iri: String,
    pub value: f64,
}

/// Parses a reading file and validates the reading it describes.
pub fn parse_reading(text: &str) -> Result<SensorReading, ConfigError> {
    let file: ReadingFile = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    let reading = SensorReading {
        sensor_id: file.sensor_id,
        time: TimeInstant::new(file.timestamp),
        record: DataRecord {
            definition: PhenomenonDefinition::new(file.record.definition),
            fields: file
                .record
                .fields
                .into_iter()
                .map(|f| QuantityObservation {
                    name: f.name,
                    definition: PhenomenonDefinition::new(f.definition),
                    uom: UomIdentifier::new(f.uom_code, f.uom_iri),
                    value: f.value,
                })
                .collect(),
        },
    };
    let violations = reading.validate();
    if violations.is_empty() {
        Ok(reading)
    } else {
        Err(ConfigError::InvalidReading(violations))
    }
}

/// On-disk form of a sweep scenario. Every key is optional; defaults come
/// from [`SweepConfig::default`].
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub n_list: Option<Vec<u32>>,
    pub seeds: Option<Vec<u64>>,
    pub encodings: Option<Vec<Encoding>>,
    pub field_side: Option<f64>,
    pub radio_range: Option<f64>,
    pub rounds: Option<u32>,
    pub initial_energy_j: Option<f64>,
    pub include_timestamp: Option<bool>,
    pub energy: Option<EnergySection>,
    /// Inline reading template; the built-in atmospheric reading when
    /// absent.
    pub template: Option<TemplateSection>,
    pub csv_out: Option<String>,
    pub plot_out: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergySection {
    pub e_elec_nj_per_bit: Option<f64>,
    pub eps_amp_pj_per_bit_m2: Option<f64>,
    pub frame_payload_bytes: Option<u32>,
    pub frame_overhead_bytes: Option<u32>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemplateSection {
    pub sensor_id: u32,
    pub timestamp: String,
    pub record: RecordSection,
}

/// Output paths a scenario requests (relative to the sweep output
/// directory).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputNames {
    pub csv: String,
    pub plot: String,
}

impl Default for OutputNames {
    fn default() -> Self {
        Self {
            csv: "sweep.csv".into(),
            plot: "sweep.dat".into(),
        }
    }
}

/// Parses scenario text into a resolved sweep configuration plus output
/// names, applying defaults and validating ranges.
pub fn parse_scenario(text: &str) -> Result<(SweepConfig, OutputNames), ConfigError> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    resolve_scenario(file)
}

fn resolve_scenario(file: ScenarioFile) -> Result<(SweepConfig, OutputNames), ConfigError> {
    let mut config = SweepConfig::default();
    let mut bad = Vec::new();

    if let Some(n_list) = file.n_list {
        if n_list.is_empty() || n_list.iter().any(|&n| n == 0) {
            bad.push("n_list (need at least one positive entry)".into());
        }
        config.n_list = n_list;
    }
    if let Some(seeds) = file.seeds {
        if seeds.is_empty() {
            bad.push("seeds (need at least one entry)".into());
        }
        config.seeds = seeds;
    }
    if let Some(encodings) = file.encodings {
        if encodings.is_empty() {
            bad.push("encodings (need at least one entry)".into());
        }
        config.encodings = encodings;
    }
    if let Some(field_side) = file.field_side {
        if !(field_side > 0.0 && field_side.is_finite()) {
            bad.push("field_side (must be positive)".into());
        }
        config.field_side = field_side;
    }
    if let Some(radio_range) = file.radio_range {
        if !(radio_range > 0.0 && radio_range.is_finite()) {
            bad.push("radio_range (must be positive)".into());
        }
        config.radio_range = radio_range;
    }
    if let Some(rounds) = file.rounds {
        config.rounds = rounds;
    }
    if let Some(initial) = file.initial_energy_j {
        if !(initial > 0.0 && initial.is_finite()) {
            bad.push("initial_energy_j (must be positive)".into());
        }
        config.initial_energy_j = initial;
    }
    if let Some(include_timestamp) = file.include_timestamp {
        config.include_timestamp = include_timestamp;
    }

    if let Some(energy) = file.energy {
        let mut radio = RadioEnergyModel::default();
        if let Some(e_elec) = energy.e_elec_nj_per_bit {
            if !(e_elec > 0.0 && e_elec.is_finite()) {
                bad.push("energy.e_elec_nj_per_bit (must be positive)".into());
            }
            radio.e_elec_j_per_bit = e_elec * 1e-9;
        }
        if let Some(eps) = energy.eps_amp_pj_per_bit_m2 {
            if !(eps > 0.0 && eps.is_finite()) {
                bad.push("energy.eps_amp_pj_per_bit_m2 (must be positive)".into());
            }
            radio.eps_amp_j_per_bit_m2 = eps * 1e-12;
        }
        if let Some(payload) = energy.frame_payload_bytes {
            if payload == 0 {
                bad.push("energy.frame_payload_bytes (must be positive)".into());
            }
            radio.frame_payload_bytes = payload;
        }
        if let Some(overhead) = energy.frame_overhead_bytes {
            if overhead == 0 {
                bad.push("energy.frame_overhead_bytes (must be positive)".into());
            }
            radio.frame_overhead_bytes = overhead;
        }
        config.radio = radio;
    }

    if let Some(template) = file.template {
        let reading = SensorReading {
            sensor_id: template.sensor_id,
            time: TimeInstant::new(template.timestamp),
            record: DataRecord {
                definition: PhenomenonDefinition::new(template.record.definition),
                fields: template
                    .record
                    .fields
                    .into_iter()
                    .map(|f| QuantityObservation {
                        name: f.name,
                        definition: PhenomenonDefinition::new(f.definition),
                        uom: UomIdentifier::new(f.uom_code, f.uom_iri),
                        value: f.value,
                    })
                    .collect(),
            },
        };
        let violations = reading.validate();
        if !violations.is_empty() {
            return Err(ConfigError::InvalidReading(violations));
        }
        config.template = reading;
    }

    if !bad.is_empty() {
        return Err(ConfigError::BadValues(bad));
    }

    let outputs = OutputNames {
        csv: file.csv_out.unwrap_or_else(|| OutputNames::default().csv),
        plot: file.plot_out.unwrap_or_else(|| OutputNames::default().plot),
    };
    Ok((config, outputs))
}

#[cfg(test)]
mod tests {
    use super::*;

    const READING: &str = r#"
sensor_id = 0
timestamp = "2010-03-08T05:00:00"

[record]
definition = "urn:ogc:def:property:OGC:atmosphericConditions"

[[record.field]]
name = "AirTemperature"
definition = "urn:ogc:def:property:OGC:AirTemperature"
uom_code = "Cel"
uom_iri = "http://sweet.jpl.nasa.gov/ontology/units.owl#degreeC"
value = 35.1

[[record.field]]
name = "WinSpeed"
definition = "urn:ogc:def:property:OGC:WinSpeed"
uom_code = "m/s"
uom_iri = "http://sweet.jpl.nasa.gov/ontology/units.owl#meter_persecond"
value = 6.5
"#;

    #[test]
    fn reading_file_parses_to_the_default_reading() {
        let reading = parse_reading(READING).unwrap();
        assert_eq!(reading, crate::observation::default_reading());
    }

    #[test]
    fn unknown_reading_key_is_rejected() {
        let text = format!("{READING}\nmystery = 1\n");
        let err = parse_reading(&text).unwrap_err();
        assert!(matches!(err, ConfigError::Parse(ref m) if m.contains("mystery")));
    }

    #[test]
    fn invalid_reading_is_rejected_with_violations() {
        let text = READING.replace("35.1", "inf");
        let err = parse_reading(&text).unwrap_err();
        assert!(matches!(err, ConfigError::InvalidReading(_)));
    }

    #[test]
    fn empty_scenario_gives_defaults() {
        let (config, outputs) = parse_scenario("").unwrap();
        assert_eq!(config.n_list, vec![10, 20, 30, 40, 50, 60, 70, 80, 90, 100]);
        assert_eq!(config.seeds, vec![1, 2, 3, 4, 5]);
        assert_eq!(outputs, OutputNames::default());
    }

    #[test]
    fn scenario_overrides_apply() {
        let text = r#"
n_list = [5, 15]
seeds = [42]
encodings = ["ssw"]
rounds = 3
include_timestamp = false

[energy]
e_elec_nj_per_bit = 100.0
"#;
        let (config, _) = parse_scenario(text).unwrap();
        assert_eq!(config.n_list, vec![5, 15]);
        assert_eq!(config.seeds, vec![42]);
        assert_eq!(config.encodings, vec![Encoding::Ssw]);
        assert_eq!(config.rounds, 3);
        assert!(!config.include_timestamp);
        assert_eq!(config.radio.e_elec_j_per_bit, 100.0 * 1e-9);
        // Untouched energy parameters keep their defaults.
        assert_eq!(config.radio.frame_payload_bytes, 102);
    }

    #[test]
    fn bad_values_are_listed_by_key() {
        let text = "field_side = -3.0\nradio_range = 0.0\n";
        let err = parse_scenario(text).unwrap_err();
        match err {
            ConfigError::BadValues(keys) => {
                assert_eq!(keys.len(), 2);
                assert!(keys[0].contains("field_side"));
                assert!(keys[1].contains("radio_range"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn unknown_scenario_key_is_rejected() {
        let err = parse_scenario("frobnicate = true\n").unwrap_err();
        assert!(matches!(err, ConfigError::Parse(ref m) if m.contains("frobnicate")));
    }

    #[test]
    fn unknown_encoding_name_is_rejected() {
        let err = parse_scenario("encodings = [\"xml\"]\n").unwrap_err();
        assert!(matches!(err, ConfigError::Parse(_)));
    }
}
