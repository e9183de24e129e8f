//! Domain types for sensor observations, shared by both codecs and the
//! simulator.
//!
//! A [`SensorReading`] binds one [`DataRecord`] (an ordered list of measured
//! quantities) to a sensor id and a [`TimeInstant`]. All types are plain
//! immutable data; invariant checking is separated into [`SensorReading::validate`],
//! which reports violations as values rather than failing construction.

use std::fmt;

/// Required prefix for OGC phenomenon definition URNs.
pub const PROPERTY_URN_PREFIX: &str = "urn:ogc:def:property:";

/// Record-level definition URN of the atmospheric-conditions record.
pub const ATMOSPHERIC_RECORD_URN: &str = "urn:ogc:def:property:OGC:atmosphericConditions";
/// Definition URN of the air-temperature quantity.
pub const AIR_TEMPERATURE_URN: &str = "urn:ogc:def:property:OGC:AirTemperature";
/// Definition URN of the wind-speed quantity.
pub const WIN_SPEED_URN: &str = "urn:ogc:def:property:OGC:WinSpeed";
/// Unit-ontology IRI for degrees Celsius.
pub const DEGREE_CELSIUS_IRI: &str = "http://sweet.jpl.nasa.gov/ontology/units.owl#degreeC";
/// Unit-ontology IRI for metres per second.
pub const METER_PER_SECOND_IRI: &str =
    "http://sweet.jpl.nasa.gov/ontology/units.owl#meter_persecond";
/// Concept IRI (prefixed form) asserted for every time instant.
pub const TIME_INSTANT_TYPE_IRI: &str = "time:Instant";
/// Timestamp used by the default reading template.
pub const DEFAULT_TIMESTAMP: &str = "2010-03-08T05:00:00";

/// OGC definition URN of a phenomenon, e.g. `urn:ogc:def:property:OGC:AirTemperature`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhenomenonDefinition {
    pub urn: String,
}

impl PhenomenonDefinition {
    pub fn new(urn: impl Into<String>) -> Self {
        Self { urn: urn.into() }
    }
}

/// Unit of measure: a short code plus the unit-ontology IRI it stands for.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UomIdentifier {
    pub code: String,
    pub iri: String,
}

impl UomIdentifier {
    pub fn new(code: impl Into<String>, iri: impl Into<String>) -> Self {
        Self {
            code: code.into(),
            iri: iri.into(),
        }
    }
}

/// One measured scalar quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantityObservation {
    pub name: String,
    pub definition: PhenomenonDefinition,
    pub uom: UomIdentifier,
    /// Value in the unit given by `uom`.
    pub value: f64,
}

/// A time instant carried verbatim as an ISO-8601 string once validated.
///
/// The concept IRI is fixed ([`TIME_INSTANT_TYPE_IRI`]); only the timestamp
/// varies per reading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeInstant {
    pub timestamp: String,
}

impl TimeInstant {
    pub fn new(timestamp: impl Into<String>) -> Self {
        Self {
            timestamp: timestamp.into(),
        }
    }

    pub fn type_iri(&self) -> &'static str {
        TIME_INSTANT_TYPE_IRI
    }
}

/// A record of quantities produced by one sensor at one time instant.
#[derive(Debug, Clone, PartialEq)]
pub struct DataRecord {
    /// Record-level definition, e.g. the atmospheric-conditions URN.
    pub definition: PhenomenonDefinition,
    pub fields: Vec<QuantityObservation>,
}

/// A data record bound to the sensor that produced it and the instant it
/// was produced.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorReading {
    pub sensor_id: u32,
    pub time: TimeInstant,
    pub record: DataRecord,
}

/// A violated invariant, reported by [`SensorReading::validate`].
///
/// Violations are data, not failures: validation always succeeds and returns
/// every violation it found.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("empty definition URN")]
    EmptyDefinition,
    #[error("definition URN {0:?} does not begin with {PROPERTY_URN_PREFIX:?}")]
    BadDefinitionPrefix(String),
    #[error("empty unit-of-measure code")]
    EmptyUomCode,
    #[error("unit-of-measure IRI {0:?} is not an absolute IRI")]
    BadUomIri(String),
    #[error("non-finite value in field {0:?}")]
    NonFiniteValue(String),
    #[error("bad timestamp {0:?}: not an ISO-8601 datetime")]
    BadTimestamp(String),
    #[error("duplicate field name {0:?}")]
    DuplicateFieldName(String),
    #[error("empty field name")]
    EmptyFieldName,
    #[error("record has no fields")]
    EmptyRecord,
}

/// True if `s` starts with an RFC 3986 scheme followed by a colon.
pub(crate) fn has_iri_scheme(s: &str) -> bool {
    let Some(colon) = s.find(':') else {
        return false;
    };
    let scheme = &s[..colon];
    let mut chars = scheme.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
}

fn timestamp_is_valid(ts: &str) -> bool {
    // The canonical form is the zone-less ISO-8601 second resolution used by
    // the source data; RFC 3339 zoned timestamps are also accepted.
    chrono::NaiveDateTime::parse_from_str(ts, "%Y-%m-%dT%H:%M:%S").is_ok()
        || chrono::NaiveDateTime::parse_from_str(ts, "%Y-%m-%dT%H:%M:%S%.f").is_ok()
        || chrono::DateTime::parse_from_rfc3339(ts).is_ok()
}

impl PhenomenonDefinition {
    fn check(&self, out: &mut Vec<Violation>) {
        if self.urn.is_empty() {
            out.push(Violation::EmptyDefinition);
        } else if !self.urn.starts_with(PROPERTY_URN_PREFIX) {
            out.push(Violation::BadDefinitionPrefix(self.urn.clone()));
        }
    }
}

impl SensorReading {
    /// Returns every violated invariant; the reading is valid iff the list
    /// is empty.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if !timestamp_is_valid(&self.time.timestamp) {
            out.push(Violation::BadTimestamp(self.time.timestamp.clone()));
        }
        self.record.check(&mut out);
        out
    }
}

impl DataRecord {
    fn check(&self, out: &mut Vec<Violation>) {
        self.definition.check(out);
        if self.fields.is_empty() {
            out.push(Violation::EmptyRecord);
        }
        let mut seen = std::collections::BTreeSet::new();
        for field in &self.fields {
            if field.name.is_empty() {
                out.push(Violation::EmptyFieldName);
            } else if !seen.insert(field.name.as_str()) {
                out.push(Violation::DuplicateFieldName(field.name.clone()));
            }
            field.definition.check(out);
            if field.uom.code.is_empty() {
                out.push(Violation::EmptyUomCode);
            }
            if !has_iri_scheme(&field.uom.iri) {
                out.push(Violation::BadUomIri(field.uom.iri.clone()));
            }
            if !field.value.is_finite() {
                out.push(Violation::NonFiniteValue(field.name.clone()));
            }
        }
    }
}

/// Formats a double in its canonical lexical form: the shortest decimal
/// string that parses back to the same value, plain decimal notation for
/// magnitudes in `[1e-4, 1e15)` and exponent notation outside.
pub fn canonical_f64(v: f64) -> String {
    let a = v.abs();
    if v != 0.0 && (a < 1e-4 || a >= 1e15) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

/// The two-field atmospheric record used throughout: air temperature in
/// degrees Celsius followed by wind speed in metres per second.
pub fn atmospheric_record(
    temp_celsius: f64,
    windspeed_ms: f64,
) -> Result<DataRecord, Violation> {
    if !temp_celsius.is_finite() {
        return Err(Violation::NonFiniteValue("AirTemperature".into()));
    }
    if !windspeed_ms.is_finite() {
        return Err(Violation::NonFiniteValue("WinSpeed".into()));
    }
    Ok(DataRecord {
        definition: PhenomenonDefinition::new(ATMOSPHERIC_RECORD_URN),
        fields: vec![
            QuantityObservation {
                name: "AirTemperature".into(),
                definition: PhenomenonDefinition::new(AIR_TEMPERATURE_URN),
                uom: UomIdentifier::new("Cel", DEGREE_CELSIUS_IRI),
                value: temp_celsius,
            },
            QuantityObservation {
                name: "WinSpeed".into(),
                definition: PhenomenonDefinition::new(WIN_SPEED_URN),
                uom: UomIdentifier::new("m/s", METER_PER_SECOND_IRI),
                value: windspeed_ms,
            },
        ],
    })
}

/// The default reading template: the atmospheric record with the canonical
/// example values, stamped with [`DEFAULT_TIMESTAMP`].
pub fn default_reading() -> SensorReading {
    SensorReading {
        sensor_id: 0,
        time: TimeInstant::new(DEFAULT_TIMESTAMP),
        record: atmospheric_record(35.1, 6.5).expect("finite constants"),
    }
}

impl fmt::Display for QuantityObservation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={} {}", self.name, canonical_f64(self.value), self.uom.code)
    }
}
