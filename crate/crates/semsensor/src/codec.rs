//! Shared codec surface: the encoded payload, encoding selection, and the
//! error types both codecs report.

use crate::observation::Violation;
use crate::triple::UnresolvedPrefix;
use crate::xml::{self, Element, XmlError};

/// Which of the two encodings produced a payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    /// RDFa-annotated O&M XML.
    Ssw,
    /// Explicit ontology individuals.
    Es3n,
}

impl Encoding {
    pub fn as_str(self) -> &'static str {
        match self {
            Encoding::Ssw => "ssw",
            Encoding::Es3n => "es3n",
        }
    }
}

impl std::fmt::Display for Encoding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Encoding {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ssw" => Ok(Encoding::Ssw),
            "es3n" => Ok(Encoding::Es3n),
            other => Err(format!("unknown encoding {other:?} (expected ssw or es3n)")),
        }
    }
}

/// Options shared by both codecs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CodecOptions {
    /// Serialize the reading's time instant alongside the data record.
    pub include_timestamp: bool,
}

impl CodecOptions {
    pub fn with_timestamp(include_timestamp: bool) -> Self {
        Self { include_timestamp }
    }
}

/// A serialized document plus the encoding that produced it. The byte count
/// is the quantity the network simulation charges for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedPayload {
    bytes: Vec<u8>,
    encoding: Encoding,
}

impl EncodedPayload {
    /// Wraps raw bytes, checking they form a well-formed single-root XML
    /// document.
    pub fn from_bytes(bytes: Vec<u8>, encoding: Encoding) -> Result<Self, ExtractError> {
        let text = std::str::from_utf8(&bytes).map_err(|_| ExtractError::Xml(XmlError {
            line: 0,
            col: 0,
            message: "payload is not valid UTF-8".into(),
        }))?;
        xml::parse_document(text)?;
        Ok(Self { bytes, encoding })
    }

    pub(crate) fn from_element(root: &Element, encoding: Encoding) -> Self {
        Self {
            bytes: root.to_canonical_string().into_bytes(),
            encoding,
        }
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn size_bytes(&self) -> usize {
        self.bytes.len()
    }

    pub fn encoding(&self) -> Encoding {
        self.encoding
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.bytes).expect("payloads are built from UTF-8 strings")
    }

    pub(crate) fn parse(&self) -> Result<Element, XmlError> {
        xml::parse_document(self.as_str())
    }
}

/// Returns the payload's transmitted size in bytes.
pub fn measure(payload: &EncodedPayload) -> usize {
    payload.size_bytes()
}

/// Encoding rejected the reading.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EncodeError {
    #[error("invalid reading: {}", format_violations(.0))]
    InvalidReading(Vec<Violation>),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(Violation::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Extraction failed: the document could not be parsed or its annotations
/// are not usable.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtractError {
    #[error("xml parse error at {0}")]
    Xml(#[from] XmlError),
    #[error("payload is encoded as {found}, expected {expected}")]
    WrongEncoding { expected: Encoding, found: Encoding },
    #[error("{attr}=\"{value}\" at {line}:{col} has no subject in scope")]
    DanglingAnnotation {
        attr: String,
        value: String,
        line: u32,
        col: u32,
    },
    #[error("reference {0:?} does not match any rdf:ID in the document")]
    DanglingReference(String),
    #[error(transparent)]
    Unresolved(#[from] UnresolvedPrefix),
}
