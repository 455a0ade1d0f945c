//! Evidence-document parsing and serialization.
//!
//! The wire format is a single JSON object:
//!
//! ```json
//! {
//!   "frame": ["A", "B", "C"],
//!   "sources": [
//!     {"name": "s1", "masses": [{"set": ["A"], "mass": 0.99},
//!                               {"set": ["C"], "mass": 0.01}]},
//!     {"name": "s2", "masses": [{"set": "Theta", "mass": 1.0}]}
//!   ]
//! }
//! ```
//!
//! A subset is a list of frame labels, or the keyword `"Theta"` for the
//! full set.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::frame::{Frame, SubsetId};
use crate::mass::MassFunction;

/// A subset reference inside a document: label list or the `"Theta"` keyword.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SetSpec {
    Keyword(String),
    Labels(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassEntry {
    pub set: SetSpec,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceDoc {
    pub name: String,
    pub masses: Vec<MassEntry>,
}

/// The parsed shape of an evidence document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDocument {
    pub frame: Vec<String>,
    pub sources: Vec<SourceDoc>,
}

/// Parse failures, each addressed to the offending part of the document.
#[derive(Debug)]
pub enum DocError {
    /// Malformed JSON; carries serde's line/column message.
    Syntax(serde_json::Error),
    /// The frame itself is invalid.
    Frame(Error),
    /// A keyword other than `"Theta"` was used for a subset.
    BadKeyword {
        source: String,
        index: usize,
        entry: usize,
        keyword: String,
    },
    /// A source failed validation (unknown label, not normalized, ...).
    Source {
        source: String,
        index: usize,
        entry: Option<usize>,
        cause: Error,
    },
}

impl fmt::Display for DocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DocError::Syntax(e) => write!(f, "document syntax error: {e}"),
            DocError::Frame(e) => write!(f, "invalid frame: {e}"),
            DocError::BadKeyword {
                source,
                index,
                entry,
                keyword,
            } => write!(
                f,
                "source `{source}` (index {index}), entry {entry}: unknown keyword \"{keyword}\" (only \"Theta\" is recognized)"
            ),
            DocError::Source {
                source,
                index,
                entry: Some(entry),
                cause,
            } => write!(f, "source `{source}` (index {index}), entry {entry}: {cause}"),
            DocError::Source {
                source,
                index,
                entry: None,
                cause,
            } => write!(f, "source `{source}` (index {index}): {cause}"),
        }
    }
}

impl std::error::Error for DocError {}

impl From<serde_json::Error> for DocError {
    fn from(e: serde_json::Error) -> Self {
        DocError::Syntax(e)
    }
}

fn resolve_set(
    frame: &Frame,
    spec: &SetSpec,
    source: &str,
    source_index: usize,
    entry: usize,
) -> Result<SubsetId, DocError> {
    match spec {
        SetSpec::Keyword(word) if word == "Theta" => Ok(frame.full_set()),
        SetSpec::Keyword(word) => Err(DocError::BadKeyword {
            source: source.to_owned(),
            index: source_index,
            entry,
            keyword: word.clone(),
        }),
        SetSpec::Labels(labels) => {
            frame
                .subset_of_labels(labels)
                .map_err(|cause| DocError::Source {
                    source: source.to_owned(),
                    index: source_index,
                    entry: Some(entry),
                    cause,
                })
        }
    }
}

/// Parses and validates an evidence document into a frame plus one BBA per
/// source, in document order.
pub fn parse_input_document(text: &str) -> Result<(Arc<Frame>, Vec<MassFunction>), DocError> {
    let doc: InputDocument = serde_json::from_str(text)?;
    let frame = Arc::new(Frame::new(doc.frame.clone()).map_err(DocError::Frame)?);

    let mut sources = Vec::with_capacity(doc.sources.len());
    for (index, source) in doc.sources.iter().enumerate() {
        let mut entries = Vec::with_capacity(source.masses.len());
        for (entry_idx, entry) in source.masses.iter().enumerate() {
            let subset = resolve_set(&frame, &entry.set, &source.name, index, entry_idx)?;
            entries.push((subset, entry.mass));
        }
        let mass = MassFunction::new(frame.clone(), entries).map_err(|cause| DocError::Source {
            source: source.name.clone(),
            index,
            entry: None,
            cause,
        })?;
        sources.push(mass);
    }
    Ok((frame, sources))
}

/// Builds the serializable document for a set of named sources.
pub fn to_document(frame: &Frame, sources: &[(String, &MassFunction)]) -> InputDocument {
    InputDocument {
        frame: frame.labels().to_vec(),
        sources: sources
            .iter()
            .map(|(name, mass)| SourceDoc {
                name: name.clone(),
                masses: mass
                    .iter()
                    .map(|(subset, value)| MassEntry {
                        set: if subset == frame.full_set() {
                            SetSpec::Keyword("Theta".to_owned())
                        } else {
                            SetSpec::Labels(
                                (0..frame.len())
                                    .filter(|i| subset.contains_singleton(*i))
                                    .map(|i| frame.label(i).to_owned())
                                    .collect(),
                            )
                        },
                        mass: value,
                    })
                    .collect(),
            })
            .collect(),
    }
}

/// Serializes a document as pretty-printed JSON.
pub fn document_to_json(doc: &InputDocument) -> String {
    serde_json::to_string_pretty(doc).expect("document serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mass::MassAssignment;

    const ZADEH_DOC: &str = r#"{
        "frame": ["A", "B", "C"],
        "sources": [
            {"name": "expert1", "masses": [{"set": ["A"], "mass": 0.99},
                                           {"set": ["C"], "mass": 0.01}]},
            {"name": "expert2", "masses": [{"set": ["B"], "mass": 0.99},
                                           {"set": ["C"], "mass": 0.01}]}
        ]
    }"#;

    #[test]
    fn zadeh_document_parses_to_two_valid_sources() {
        let (frame, sources) = parse_input_document(ZADEH_DOC).unwrap();
        assert_eq!(frame.labels(), ["A", "B", "C"]);
        assert_eq!(sources.len(), 2);
        assert!((sources[0].mass(frame.singleton(0)) - 0.99).abs() < 1e-12);
        assert!((sources[1].mass(frame.singleton(1)) - 0.99).abs() < 1e-12);
    }

    #[test]
    fn theta_keyword_resolves_to_full_set() {
        let text = r#"{"frame": ["A", "B"],
                       "sources": [{"name": "s", "masses": [{"set": "Theta", "mass": 1.0}]},
                                   {"name": "t", "masses": [{"set": ["A", "B"], "mass": 1.0}]}]}"#;
        let (frame, sources) = parse_input_document(text).unwrap();
        assert_eq!(sources[0], sources[1]);
        assert!((sources[0].mass(frame.full_set()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unnormalized_source_is_addressed_by_name() {
        let text = r#"{"frame": ["A", "B"],
                       "sources": [{"name": "weak", "masses": [{"set": ["A"], "mass": 0.9}]}]}"#;
        let err = parse_input_document(text).unwrap_err();
        let msg = err.to_string();
        assert!(
            msg.contains("weak"),
            "message should name the source: {msg}"
        );
        assert!(matches!(
            err,
            DocError::Source {
                cause: Error::NotNormalized(_),
                ..
            }
        ));
    }

    #[test]
    fn unknown_label_is_addressed_to_the_entry() {
        let text = r#"{"frame": ["A", "B"],
                       "sources": [{"name": "s", "masses": [{"set": ["A", "D"], "mass": 1.0}]}]}"#;
        let err = parse_input_document(text).unwrap_err();
        assert!(matches!(
            &err,
            DocError::Source {
                entry: Some(0),
                cause: Error::UnknownLabel(l),
                ..
            } if l == "D"
        ));
    }

    #[test]
    fn syntax_errors_carry_location() {
        let err = parse_input_document("{\"frame\": [\"A\"],\n  oops").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2"), "expected a line reference: {msg}");
    }

    #[test]
    fn bad_keyword_is_rejected() {
        let text = r#"{"frame": ["A", "B"],
                       "sources": [{"name": "s", "masses": [{"set": "Omega", "mass": 1.0}]}]}"#;
        let err = parse_input_document(text).unwrap_err();
        assert!(matches!(err, DocError::BadKeyword { keyword, .. } if keyword == "Omega"));
    }

    #[test]
    fn document_round_trip_preserves_masses() {
        let (frame, sources) = parse_input_document(ZADEH_DOC).unwrap();
        let named: Vec<(String, &MassFunction)> = sources
            .iter()
            .enumerate()
            .map(|(i, m)| (format!("expert{}", i + 1), m))
            .collect();
        let doc = to_document(&frame, &named);
        let json = document_to_json(&doc);
        let (frame2, sources2) = parse_input_document(&json).unwrap();
        assert_eq!(*frame, *frame2);
        assert_eq!(sources, sources2);
        // serialization itself is deterministic
        assert_eq!(json, document_to_json(&doc));
    }
}
