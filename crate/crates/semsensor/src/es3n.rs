//! The ES3N codec: the same reading serialized as explicit ontology
//! individuals, and the RDF/XML-style striping that recovers its triples.
//!
//! Each quantity becomes a free-standing `swe-om:Quantity` individual
//! (`rdf:ID="Quantity_<Name>"`) spelling out its unit, value, name, and
//! definition as child elements; a `swe-om:DataRecord` individual then
//! references the quantities with `hasField`. Every IRI and datatype is
//! written in full, which is what makes this form heavier on the wire than
//! the annotated O&M document.
//!
//! A bare `rdf:RDF` envelope holds the individuals so the payload stays a
//! single-root document.

use crate::codec::{CodecOptions, EncodeError, Encoding, EncodedPayload, ExtractError};
use crate::observation::{canonical_f64, SensorReading};
use crate::triple::{ns, Iri, Term, Triple, TripleSet};
use crate::xml::Element;

/// Serializes a reading in ES3N form. Canonical output: byte-identical for
/// equal readings.
pub fn encode(reading: &SensorReading, options: &CodecOptions) -> Result<EncodedPayload, EncodeError> {
    let violations = reading.validate();
    if !violations.is_empty() {
        return Err(EncodeError::InvalidReading(violations));
    }

    let mut envelope = Element::new("rdf:RDF");

    if options.include_timestamp {
        envelope = envelope.child(
            Element::new("time:Instant")
                .attr("rdf:ID", format!("time_{}", reading.sensor_id))
                .child(Element::new("xs:date-time").text(&reading.time.timestamp)),
        );
    }

    for field in &reading.record.fields {
        envelope = envelope.child(
            Element::new("swe-om:Quantity")
                .attr("rdf:ID", format!("Quantity_{}", field.name))
                .child(
                    Element::new("swe-om:hasUomIdentifier").attr("rdf:resource", &field.uom.iri),
                )
                .child(
                    Element::new("swe-om:hasDoubleValue")
                        .attr("rdf:datatype", ns::XSD_DOUBLE)
                        .text(canonical_f64(field.value)),
                )
                .child(
                    Element::new("swe-om:hasName")
                        .attr("xml:lang", "en")
                        .text(&field.name),
                )
                .child(
                    Element::new("swe:hasDefinition")
                        .attr("rdf:datatype", ns::XSD_ANY_URI)
                        .text(&field.definition.urn),
                ),
        );
    }

    let mut record = Element::new("swe-om:DataRecord").attr(
        "rdf:ID",
        format!("DataRecord_{}", record_individual_name(&reading.record.definition.urn)),
    );
    for field in &reading.record.fields {
        record = record.child(
            Element::new("swe-om:hasField")
                .attr("rdf:resource", format!("#Quantity_{}", field.name)),
        );
    }
    record = record.child(
        Element::new("swe:hasDefinition")
            .attr("rdf:datatype", ns::XSD_ANY_URI)
            .text(&reading.record.definition.urn),
    );
    envelope = envelope.child(record);

    Ok(EncodedPayload::from_element(&envelope, Encoding::Es3n))
}

/// Individual name for the record: the final URN segment with its first
/// letter uppercased (`…:atmosphericConditions` → `AtmosphericConditions`).
fn record_individual_name(urn: &str) -> String {
    let segment = urn.rsplit(':').next().unwrap_or(urn);
    let mut chars = segment.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Extracts the triples an ES3N document carries and returns them
/// canonicalized.
///
/// Striping rules: an element with `rdf:ID` is an individual (subject
/// `#<ID>`, typed by its element name); each child element is a statement
/// whose predicate is the child's name, with the object taken from
/// `rdf:resource` (IRI), text with `rdf:datatype` (typed literal), text
/// with `xml:lang` (language-tagged literal), or bare text (plain literal).
/// Local `rdf:resource` references must name an `rdf:ID` defined in the
/// same document.
pub fn extract(payload: &EncodedPayload) -> Result<TripleSet, ExtractError> {
    if payload.encoding() != Encoding::Es3n {
        return Err(ExtractError::WrongEncoding {
            expected: Encoding::Es3n,
            found: payload.encoding(),
        });
    }
    let root = payload.parse()?;
    extract_element(&root)
}

pub(crate) fn extract_element(root: &Element) -> Result<TripleSet, ExtractError> {
    let mut ids = Vec::new();
    collect_ids(root, &mut ids);

    let mut triples = TripleSet::new();
    walk(root, &ids, &mut triples)?;
    Ok(triples.canonicalize()?)
}

fn collect_ids(element: &Element, out: &mut Vec<String>) {
    if let Some(id) = element.get_attr("rdf:ID") {
        out.push(id.to_string());
    }
    for child in &element.children {
        collect_ids(child, out);
    }
}

fn walk(element: &Element, ids: &[String], out: &mut TripleSet) -> Result<(), ExtractError> {
    match element.get_attr("rdf:ID") {
        Some(id) => individual(element, id, ids, out),
        None => {
            for child in &element.children {
                walk(child, ids, out)?;
            }
            Ok(())
        }
    }
}

fn individual(
    element: &Element,
    id: &str,
    ids: &[String],
    out: &mut TripleSet,
) -> Result<(), ExtractError> {
    let subject = format!("#{id}");
    out.insert(Triple::new(&subject, "rdf:type", Term::iri(&element.name)));

    for property in &element.children {
        let object = if let Some(resource) = property.get_attr("rdf:resource") {
            if let Some(target) = resource.strip_prefix('#') {
                if !ids.iter().any(|known| known == target) {
                    return Err(ExtractError::DanglingReference(resource.to_string()));
                }
            }
            Term::iri(resource)
        } else {
            let lexical = property.text.clone().unwrap_or_default();
            match (property.get_attr("rdf:datatype"), property.get_attr("xml:lang")) {
                (Some(datatype), _) => Term::Typed {
                    lexical,
                    datatype: Iri::new(datatype),
                },
                (None, Some(lang)) => Term::Plain {
                    lexical,
                    lang: Some(lang.to_string()),
                },
                (None, None) => Term::Plain { lexical, lang: None },
            }
        };
        out.insert(Triple::new(&subject, &property.name, object));
    }
    Ok(())
}
