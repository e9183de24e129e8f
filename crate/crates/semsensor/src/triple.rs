//! RDF triple model and canonical comparison.
//!
//! Triples extracted from the two encodings are the currency in which their
//! semantic content is compared. Comparison happens at two levels:
//!
//! - [`TripleSet::canonicalize`] expands prefixed names against a fixed
//!   namespace table, removes duplicates, and orders triples
//!   lexicographically by their serialized form;
//! - [`project`] reduces a canonical set to its [`SemanticProjection`] — one
//!   `(name, definition, unit IRI, value)` tuple per value-bearing subject.
//!
//! Equivalence is defined on projections, not raw triples, because the two
//! encodings name their individuals differently (`#AirTemperature` vs
//! `#Quantity_AirTemperature`) while carrying the same information.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Well-known namespace IRIs and expanded terms used by both codecs.
pub mod ns {
    pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
    pub const XS: &str = "http://www.w3.org/2001/XMLSchema#";
    pub const SWE: &str = "http://www.opengis.net/swe/1.0.1#";
    pub const SWE_OM: &str = "http://knoesis.wright.edu/ssw/ont/sensor-observation.owl#";
    pub const TIME: &str = "http://www.w3.org/2006/time#";
    pub const UNITS: &str = "http://sweet.jpl.nasa.gov/ontology/units.owl#";

    pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    pub const XSD_DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
    pub const XSD_ANY_URI: &str = "http://www.w3.org/2001/XMLSchema#anyURI";
    pub const XS_DATE_TIME: &str = "http://www.w3.org/2001/XMLSchema#date-time";
    pub const TIME_INSTANT: &str = "http://www.w3.org/2006/time#Instant";
    pub const HAS_DOUBLE_VALUE: &str =
        "http://knoesis.wright.edu/ssw/ont/sensor-observation.owl#hasDoubleValue";
    pub const HAS_UOM_IDENTIFIER: &str =
        "http://knoesis.wright.edu/ssw/ont/sensor-observation.owl#hasUomIdentifier";
    pub const HAS_NAME: &str =
        "http://knoesis.wright.edu/ssw/ont/sensor-observation.owl#hasName";
    pub const HAS_DEFINITION: &str = "http://www.opengis.net/swe/1.0.1#hasDefinition";
}

/// IRI schemes recognized as absolute; anything else containing a colon is
/// treated as a prefixed name and must resolve against the namespace table.
const KNOWN_SCHEMES: &[&str] = &["http", "https", "urn", "mailto", "ftp", "file", "tag"];

/// An IRI reference: absolute (`http://…`, `urn:…`), prefixed (`rdf:type`),
/// or document-local (`time_1`, `#AirTemperature`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(pub String);

impl Iri {
    pub fn new(iri: impl Into<String>) -> Self {
        Self(iri.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn expand(&self, namespaces: &Namespaces) -> Result<Iri, UnresolvedPrefix> {
        let s = &self.0;
        if s.starts_with('#') {
            return Ok(self.clone());
        }
        let Some(colon) = s.find(':') else {
            return Ok(self.clone());
        };
        let prefix = &s[..colon];
        if let Some(base) = namespaces.get(prefix) {
            return Ok(Iri(format!("{base}{}", &s[colon + 1..])));
        }
        if KNOWN_SCHEMES.contains(&prefix) {
            return Ok(self.clone());
        }
        Err(UnresolvedPrefix(prefix.to_string()))
    }
}

/// An RDF term in object position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Iri(Iri),
    Typed { lexical: String, datatype: Iri },
    Plain { lexical: String, lang: Option<String> },
}

impl Term {
    pub fn iri(s: impl Into<String>) -> Self {
        Term::Iri(Iri::new(s))
    }

    pub fn typed(lexical: impl Into<String>, datatype: impl Into<String>) -> Self {
        Term::Typed {
            lexical: lexical.into(),
            datatype: Iri::new(datatype),
        }
    }

    pub fn plain(lexical: impl Into<String>) -> Self {
        Term::Plain {
            lexical: lexical.into(),
            lang: None,
        }
    }

    pub fn plain_lang(lexical: impl Into<String>, lang: impl Into<String>) -> Self {
        Term::Plain {
            lexical: lexical.into(),
            lang: Some(lang.into()),
        }
    }

    fn expand(&self, namespaces: &Namespaces) -> Result<Term, UnresolvedPrefix> {
        Ok(match self {
            Term::Iri(iri) => Term::Iri(iri.expand(namespaces)?),
            Term::Typed { lexical, datatype } => Term::Typed {
                lexical: lexical.clone(),
                datatype: datatype.expand(namespaces)?,
            },
            plain @ Term::Plain { .. } => plain.clone(),
        })
    }

    fn serialized(&self) -> String {
        match self {
            Term::Iri(iri) => format!("<{}>", iri.as_str()),
            Term::Typed { lexical, datatype } => {
                format!("\"{}\"^^<{}>", escape_literal(lexical), datatype.as_str())
            }
            Term::Plain { lexical, lang } => match lang {
                Some(lang) => format!("\"{}\"@{lang}", escape_literal(lexical)),
                None => format!("\"{}\"", escape_literal(lexical)),
            },
        }
    }
}

fn escape_literal(lexical: &str) -> String {
    let mut out = String::with_capacity(lexical.len());
    for c in lexical.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            _ => out.push(c),
        }
    }
    out
}

/// One RDF statement. Subject and predicate are IRI references by
/// construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triple {
    pub subject: Iri,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: impl Into<String>, predicate: impl Into<String>, object: Term) -> Self {
        Self {
            subject: Iri::new(subject),
            predicate: Iri::new(predicate),
            object,
        }
    }

    /// N-Triples-style line: space-separated terms, `.` terminator.
    pub fn serialized(&self) -> String {
        format!(
            "<{}> <{}> {} .",
            self.subject.as_str(),
            self.predicate.as_str(),
            self.object.serialized()
        )
    }
}

/// Prefix → namespace IRI table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Namespaces(BTreeMap<String, String>);

impl Namespaces {
    /// The fixed table used throughout: rdf, xs/xsd, swe, swe-om, time, and
    /// the sweet.jpl.nasa.gov unit ontology (as both `units` and
    /// `owl-units`).
    pub fn standard() -> Self {
        let mut table = BTreeMap::new();
        for (prefix, iri) in [
            ("rdf", ns::RDF),
            ("xs", ns::XS),
            ("xsd", ns::XS),
            ("swe", ns::SWE),
            ("swe-om", ns::SWE_OM),
            ("time", ns::TIME),
            ("units", ns::UNITS),
            ("owl-units", ns::UNITS),
        ] {
            table.insert(prefix.to_string(), iri.to_string());
        }
        Self(table)
    }

    pub fn get(&self, prefix: &str) -> Option<&str> {
        self.0.get(prefix).map(String::as_str)
    }
}

/// A prefix with no entry in the namespace table.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unresolvable prefix {0:?}")]
pub struct UnresolvedPrefix(pub String);

/// An unordered set of triples plus the namespace table its prefixed names
/// resolve against.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TripleSet {
    triples: Vec<Triple>,
    namespaces: Namespaces,
    canonical: bool,
}

impl Default for Namespaces {
    fn default() -> Self {
        Self::standard()
    }
}

impl TripleSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, triple: Triple) {
        self.triples.push(triple);
        self.canonical = false;
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    /// Expands every prefixed name, removes duplicates, and orders triples
    /// lexicographically by serialized form. Idempotent.
    pub fn canonicalize(&self) -> Result<TripleSet, UnresolvedPrefix> {
        let mut expanded = BTreeMap::new();
        for triple in &self.triples {
            let t = Triple {
                subject: triple.subject.expand(&self.namespaces)?,
                predicate: triple.predicate.expand(&self.namespaces)?,
                object: triple.object.expand(&self.namespaces)?,
            };
            expanded.insert(t.serialized(), t);
        }
        Ok(TripleSet {
            triples: expanded.into_values().collect(),
            namespaces: self.namespaces.clone(),
            canonical: true,
        })
    }

    /// Serializes the set as N-Triples-style text, one triple per line in
    /// canonical order, with a trailing newline.
    pub fn to_ntriples(&self) -> String {
        let mut out = String::new();
        for triple in &self.triples {
            out.push_str(&triple.serialized());
            out.push('\n');
        }
        out
    }
}

/// Codec-neutral view of a triple set: one tuple per observed quantity.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SemanticProjection {
    tuples: BTreeSet<ProjectionTuple>,
}

/// `(field name, definition URN, unit IRI, value lexical)` for one
/// value-bearing subject.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ProjectionTuple {
    pub name: String,
    pub definition_urn: String,
    pub uom_iri: String,
    pub value_lexical: String,
}

impl SemanticProjection {
    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ProjectionTuple> {
        self.tuples.iter()
    }

    pub fn contains(&self, tuple: &ProjectionTuple) -> bool {
        self.tuples.contains(tuple)
    }

    fn insert(&mut self, tuple: ProjectionTuple) {
        self.tuples.insert(tuple);
    }
}

/// Projection failure: a subject carries a value but lacks the unit or
/// definition needed to interpret it.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProjectError {
    #[error("subject <{subject}> has a value but is missing {missing}")]
    Incomplete { subject: String, missing: String },
    #[error(transparent)]
    Unresolved(#[from] UnresolvedPrefix),
}

fn literal_lexical(term: &Term) -> Option<&str> {
    match term {
        Term::Typed { lexical, .. } | Term::Plain { lexical, .. } => Some(lexical),
        Term::Iri(_) => None,
    }
}

/// Strips the fragment marker and any `Quantity_` individual prefix, leaving
/// the field name both encodings agree on.
fn name_from_subject(subject: &str) -> String {
    let local = subject.rsplit(['#', '/']).next().unwrap_or(subject);
    local.strip_prefix("Quantity_").unwrap_or(local).to_string()
}

/// Reduces a canonical triple set to its semantic projection.
///
/// Every subject with a `hasDoubleValue` statement yields one tuple; the
/// field name comes from the subject's `hasName` literal when present and
/// from the subject IRI otherwise. Non-canonical input is canonicalized
/// first.
pub fn project(ts: &TripleSet) -> Result<SemanticProjection, ProjectError> {
    let canonical;
    let ts = if ts.is_canonical() {
        ts
    } else {
        canonical = ts.canonicalize()?;
        &canonical
    };

    let mut by_subject: BTreeMap<&str, Vec<&Triple>> = BTreeMap::new();
    for triple in ts.iter() {
        by_subject
            .entry(triple.subject.as_str())
            .or_default()
            .push(triple);
    }

    let mut projection = SemanticProjection::default();
    for (subject, triples) in by_subject {
        let find_object = |predicate: &str| {
            triples
                .iter()
                .find(|t| t.predicate.as_str() == predicate)
                .map(|t| &t.object)
        };
        let Some(value) = find_object(ns::HAS_DOUBLE_VALUE) else {
            continue;
        };
        let value_lexical = literal_lexical(value).unwrap_or_default().to_string();

        let uom_iri = match find_object(ns::HAS_UOM_IDENTIFIER) {
            Some(Term::Iri(iri)) => iri.as_str().to_string(),
            _ => {
                return Err(ProjectError::Incomplete {
                    subject: subject.to_string(),
                    missing: "a unit of measure (hasUomIdentifier)".into(),
                })
            }
        };
        let definition_urn = match find_object(ns::HAS_DEFINITION).and_then(literal_lexical) {
            Some(urn) => urn.to_string(),
            None => {
                return Err(ProjectError::Incomplete {
                    subject: subject.to_string(),
                    missing: "a definition (hasDefinition)".into(),
                })
            }
        };
        let name = match find_object(ns::HAS_NAME).and_then(literal_lexical) {
            Some(name) => name.to_string(),
            None => name_from_subject(subject),
        };

        projection.insert(ProjectionTuple {
            name,
            definition_urn,
            uom_iri,
            value_lexical,
        });
    }
    Ok(projection)
}

/// True iff both sets project to the same tuples.
pub fn equivalent(a: &TripleSet, b: &TripleSet) -> Result<bool, ProjectError> {
    Ok(project(a)? == project(b)?)
}

impl fmt::Display for ProjectionTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.name, self.definition_urn, self.uom_iri, self.value_lexical
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn instant_set() -> TripleSet {
        let mut ts = TripleSet::new();
        ts.insert(Triple::new("time_1", "rdf:type", Term::iri("time:Instant")));
        ts
    }

    #[test]
    fn canonicalize_expands_standard_prefixes() {
        let canonical = instant_set().canonicalize().unwrap();
        assert_eq!(canonical.len(), 1);
        let triple = canonical.iter().next().unwrap();
        assert_eq!(triple.subject.as_str(), "time_1");
        assert_eq!(triple.predicate.as_str(), ns::RDF_TYPE);
        assert_eq!(triple.object, Term::iri(ns::TIME_INSTANT));
    }

    #[test]
    fn canonicalize_empty_set() {
        let canonical = TripleSet::new().canonicalize().unwrap();
        assert!(canonical.is_empty());
        assert_eq!(canonical.to_ntriples(), "");
    }

    #[test]
    fn canonicalize_dedups_across_spellings() {
        let mut ts = instant_set();
        ts.insert(Triple::new(
            "time_1",
            ns::RDF_TYPE,
            Term::iri(ns::TIME_INSTANT),
        ));
        assert_eq!(ts.len(), 2);
        assert_eq!(ts.canonicalize().unwrap().len(), 1);
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let once = instant_set().canonicalize().unwrap();
        let twice = once.canonicalize().unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn canonicalize_reports_unknown_prefix() {
        let mut ts = TripleSet::new();
        ts.insert(Triple::new("s", "mystery:pred", Term::plain("x")));
        let err = ts.canonicalize().unwrap_err();
        assert_eq!(err, UnresolvedPrefix("mystery".into()));
    }

    #[test]
    fn urn_and_http_pass_through() {
        let mut ts = TripleSet::new();
        ts.insert(Triple::new(
            "urn:ogc:def:property:OGC:X",
            "http://example.org/p",
            Term::iri("#frag"),
        ));
        let canonical = ts.canonicalize().unwrap();
        let t = canonical.iter().next().unwrap();
        assert_eq!(t.subject.as_str(), "urn:ogc:def:property:OGC:X");
        assert_eq!(t.predicate.as_str(), "http://example.org/p");
        assert_eq!(t.object, Term::iri("#frag"));
    }

    #[test]
    fn ntriples_ordering_is_lexicographic() {
        let mut ts = instant_set();
        ts.insert(Triple::new(
            "time_1",
            "xs:date-time",
            Term::plain("2010-03-08T05:00:00"),
        ));
        let text = ts.canonicalize().unwrap().to_ntriples();
        let expected = "<time_1> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://www.w3.org/2006/time#Instant> .\n\
             <time_1> <http://www.w3.org/2001/XMLSchema#date-time> \"2010-03-08T05:00:00\" .\n";
        assert_eq!(text, expected);
    }

    fn quantity_triples(subject: &str, name: Option<&str>, value: &str) -> Vec<Triple> {
        let mut triples = vec![
            Triple::new(
                subject,
                "swe-om:hasDoubleValue",
                Term::typed(value, "xsd:double"),
            ),
            Triple::new(
                subject,
                "swe-om:hasUomIdentifier",
                Term::iri("http://sweet.jpl.nasa.gov/ontology/units.owl#degreeC"),
            ),
            Triple::new(
                subject,
                "swe:hasDefinition",
                Term::typed("urn:ogc:def:property:OGC:AirTemperature", "xsd:anyURI"),
            ),
        ];
        if let Some(name) = name {
            triples.push(Triple::new(
                subject,
                "swe-om:hasName",
                Term::plain_lang(name, "en"),
            ));
        }
        triples
    }

    #[test]
    fn projection_joins_value_uom_and_definition() {
        let mut ts = TripleSet::new();
        for t in quantity_triples("#AirTemperature", None, "35.1") {
            ts.insert(t);
        }
        let projection = project(&ts.canonicalize().unwrap()).unwrap();
        assert_eq!(projection.len(), 1);
        let tuple = projection.iter().next().unwrap();
        assert_eq!(tuple.name, "AirTemperature");
        assert_eq!(tuple.definition_urn, "urn:ogc:def:property:OGC:AirTemperature");
        assert_eq!(
            tuple.uom_iri,
            "http://sweet.jpl.nasa.gov/ontology/units.owl#degreeC"
        );
        assert_eq!(tuple.value_lexical, "35.1");
    }

    #[test]
    fn projection_prefers_has_name_and_strips_quantity_prefix() {
        let mut named = TripleSet::new();
        for t in quantity_triples("#Quantity_AirTemperature", Some("AirTemperature"), "35.1") {
            named.insert(t);
        }
        let mut bare = TripleSet::new();
        for t in quantity_triples("#Quantity_AirTemperature", None, "35.1") {
            bare.insert(t);
        }
        let named = project(&named).unwrap();
        let bare = project(&bare).unwrap();
        assert_eq!(named, bare);
        assert_eq!(named.iter().next().unwrap().name, "AirTemperature");
    }

    #[test]
    fn projection_of_empty_set_is_empty() {
        assert!(project(&TripleSet::new()).unwrap().is_empty());
    }

    #[test]
    fn projection_ignores_valueless_subjects() {
        let ts = instant_set();
        assert!(project(&ts).unwrap().is_empty());
    }

    #[test]
    fn projection_incompleteness_names_the_subject() {
        let mut ts = TripleSet::new();
        ts.insert(Triple::new(
            "#Broken",
            "swe-om:hasDoubleValue",
            Term::typed("1.5", "xsd:double"),
        ));
        let err = project(&ts).unwrap_err();
        match err {
            ProjectError::Incomplete { subject, .. } => assert_eq!(subject, "#Broken"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn equivalence_distinguishes_values() {
        let mut a = TripleSet::new();
        let mut b = TripleSet::new();
        for t in quantity_triples("#AirTemperature", None, "35.1") {
            a.insert(t);
        }
        for t in quantity_triples("#AirTemperature", None, "35.2") {
            b.insert(t);
        }
        assert!(equivalent(&a, &a).unwrap());
        assert!(!equivalent(&a, &b).unwrap());
    }
}
