//! Deterministic reading generator shared by the integration suites.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use semsensor::observation::{
    DataRecord, PhenomenonDefinition, QuantityObservation, SensorReading, TimeInstant,
    UomIdentifier,
};

pub struct ReadingGen {
    rng: ChaCha12Rng,
}

impl ReadingGen {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    fn pick(&mut self, bound: u64) -> u64 {
        self.rng.next_u64() % bound
    }

    fn name(&mut self, salt: usize) -> String {
        const HEADS: &[&str] = &[
            "Air", "Soil", "Water", "Wind", "Dew", "Leaf", "Snow", "Rain", "Gust", "Sky",
        ];
        const TAILS: &[&str] = &[
            "Temperature",
            "Speed",
            "Pressure",
            "Humidity",
            "Level",
            "Flux",
            "Density",
            "Index",
        ];
        let head = HEADS[self.pick(HEADS.len() as u64) as usize];
        let tail = TAILS[self.pick(TAILS.len() as u64) as usize];
        // Salted suffix keeps names unique within a record.
        format!("{head}{tail}{salt}")
    }

    fn value(&mut self) -> f64 {
        // Mixed magnitudes, always finite.
        let raw = (self.pick(2_000_001) as f64 - 1_000_000.0) / 100.0;
        match self.pick(5) {
            0 => raw / 1000.0,
            1 => raw * 1000.0,
            2 => raw.trunc(),
            _ => raw,
        }
    }

    /// A valid reading with 1..=max_fields quantities.
    pub fn reading(&mut self, max_fields: u64) -> SensorReading {
        let field_count = 1 + self.pick(max_fields);
        let fields = (0..field_count)
            .map(|slot| {
                let name = self.name(slot as usize);
                let code = ["Cel", "m/s", "hPa", "%", "mm", "W/m2"]
                    [self.pick(6) as usize];
                QuantityObservation {
                    definition: PhenomenonDefinition::new(format!(
                        "urn:ogc:def:property:OGC:{name}"
                    )),
                    uom: UomIdentifier::new(
                        code,
                        format!(
                            "http://sweet.jpl.nasa.gov/ontology/units.owl#unit{}",
                            self.pick(40)
                        ),
                    ),
                    value: self.value(),
                    name,
                }
            })
            .collect();
        SensorReading {
            sensor_id: self.pick(10_000) as u32,
            time: TimeInstant::new("2010-03-08T05:00:00"),
            record: DataRecord {
                definition: PhenomenonDefinition::new("urn:ogc:def:property:OGC:generatedRecord"),
                fields,
            },
        }
    }
}
