//! The SSW codec: a reading serialized as RDFa-annotated O&M XML, and the
//! attribute mapping that recovers its triples.
//!
//! The document is the standard `swe:DataRecord` structure with RDFa-style
//! annotation attributes layered on:
//!
//! - `rdfa:about` establishes the subject for an element and its
//!   descendants;
//! - `rdfa:instanceof` asserts `rdf:type`;
//! - `rdfa:property` (optionally with `rdfa:datatype`) asserts a literal
//!   statement whose object is the element text;
//! - `rdfa:rel` + `rdfa:resource` assert a statement whose object is an
//!   IRI;
//! - a `definition` attribute on a subject-bearing element asserts
//!   `swe:hasDefinition` (the O&M attribute the annotations piggyback on).
//!
//! The W3C spellings (`about`, `typeof`, `property`, `rel`, `resource`,
//! `datatype`) are accepted on input; output always uses the `rdfa:` forms.

use crate::codec::{CodecOptions, EncodeError, Encoding, EncodedPayload, ExtractError};
use crate::observation::{canonical_f64, SensorReading};
use crate::triple::{Iri, Term, Triple, TripleSet};
use crate::xml::Element;

/// Serializes a reading in SSW form. Canonical output: byte-identical for
/// equal readings.
pub fn encode(reading: &SensorReading, options: &CodecOptions) -> Result<EncodedPayload, EncodeError> {
    let violations = reading.validate();
    if !violations.is_empty() {
        return Err(EncodeError::InvalidReading(violations));
    }

    let mut record = Element::new("swe:DataRecord").attr("definition", &reading.record.definition.urn);

    if options.include_timestamp {
        record = record.child(time_component(reading));
    }

    for field in &reading.record.fields {
        let quantity = Element::new("swe:Quantity")
            .attr("rdfa:about", format!("#{}", field.name))
            .attr("definition", &field.definition.urn)
            .child(
                Element::new("swe:uom")
                    .attr("code", &field.uom.code)
                    .attr("rdfa:rel", "swe-om:hasUomIdentifier")
                    .attr("rdfa:resource", &field.uom.iri),
            )
            .child(
                Element::new("swe:value")
                    .attr("rdfa:property", "swe-om:hasDoubleValue")
                    .attr("rdfa:datatype", "xsd:double")
                    .text(canonical_f64(field.value)),
            );
        record = record.child(Element::new("swe:field").attr("name", &field.name).child(quantity));
    }

    Ok(EncodedPayload::from_element(&record, Encoding::Ssw))
}

/// The `swe:component` carrying the reading's time instant.
fn time_component(reading: &SensorReading) -> Element {
    Element::new("swe:component")
        .attr("rdfa:about", format!("time_{}", reading.sensor_id))
        .attr("rdfa:instanceof", reading.time.type_iri())
        .child(
            Element::new("swe:Time")
                .attr("rdfa:property", "xs:date-time")
                .text(&reading.time.timestamp),
        )
}

fn annotation<'a>(element: &'a Element, rdfa_name: &str, bare_name: &str) -> Option<&'a str> {
    element
        .get_attr(rdfa_name)
        .or_else(|| element.get_attr(bare_name))
}

/// Extracts the triples an SSW document carries and returns them
/// canonicalized.
pub fn extract(payload: &EncodedPayload) -> Result<TripleSet, ExtractError> {
    if payload.encoding() != Encoding::Ssw {
        return Err(ExtractError::WrongEncoding {
            expected: Encoding::Ssw,
            found: payload.encoding(),
        });
    }
    let root = payload.parse()?;
    extract_element(&root)
}

/// The attribute mapping, applied to an already-parsed document.
pub(crate) fn extract_element(root: &Element) -> Result<TripleSet, ExtractError> {
    let mut triples = TripleSet::new();
    walk(root, None, &mut triples)?;
    Ok(triples.canonicalize()?)
}

fn walk(
    element: &Element,
    inherited_subject: Option<&str>,
    out: &mut TripleSet,
) -> Result<(), ExtractError> {
    let own_about = annotation(element, "rdfa:about", "about");
    let subject = own_about.or(inherited_subject);

    let dangling = |attr: &str, value: &str| ExtractError::DanglingAnnotation {
        attr: attr.to_string(),
        value: value.to_string(),
        line: element.pos.0,
        col: element.pos.1,
    };

    if let Some(class) = annotation(element, "rdfa:instanceof", "typeof") {
        let subject = subject.ok_or_else(|| dangling("rdfa:instanceof", class))?;
        out.insert(Triple::new(subject, "rdf:type", Term::iri(class)));
    }

    if let Some(predicate) = annotation(element, "rdfa:property", "property") {
        let subject = subject.ok_or_else(|| dangling("rdfa:property", predicate))?;
        let lexical = element.text.clone().unwrap_or_default();
        let object = match annotation(element, "rdfa:datatype", "datatype") {
            Some(datatype) => Term::Typed {
                lexical,
                datatype: Iri::new(datatype),
            },
            None => Term::Plain { lexical, lang: None },
        };
        out.insert(Triple::new(subject, predicate, object));
    }

    if let Some(predicate) = annotation(element, "rdfa:rel", "rel") {
        let subject = subject.ok_or_else(|| dangling("rdfa:rel", predicate))?;
        let resource = annotation(element, "rdfa:resource", "resource")
            .ok_or_else(|| dangling("rdfa:rel", predicate))?;
        out.insert(Triple::new(subject, predicate, Term::iri(resource)));
    }

    // The O&M definition attribute counts as an annotation only where the
    // element itself names a subject; bare structural attributes (the
    // record-level definition, field names) stay syntax.
    if let (Some(subject), Some(definition)) = (own_about, element.get_attr("definition")) {
        out.insert(Triple::new(
            subject,
            "swe:hasDefinition",
            Term::typed(definition, "xsd:anyURI"),
        ));
    }

    for child in &element.children {
        walk(child, subject, out)?;
    }
    Ok(())
}
