//! File formats: machines and encoding schemes as JSON, plus the sequence
//! syntax used on the command line.
//!
//! A machine file is
//! `{"group": ..., "states": S, "start": q, "trans": [[...]], "out": [[...]]}`
//! with one transition/output row per state and one entry per group
//! element. The group is a [`GroupSpec`]:
//! `{"kind": "cyclic", "n": 3}`, `{"kind": "product", "factors": [...]}`
//! or `{"kind": "table", "add": [[...]]}`. Serialization is canonical:
//! for a fixed machine the emitted bytes never change.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::{EncodingScheme, SchemeError};
use crate::group::{FiniteGroup, GroupError, GroupSpec};
use crate::mealy::{MachineError, MealyMachine};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error("declared {declared} states but {actual} table rows")]
    StateCountMismatch { declared: usize, actual: usize },
    #[error("empty sequence")]
    EmptySequence,
    #[error("bad sequence entry {entry:?}")]
    BadSequenceEntry { entry: String },
    #[error("sequence element {value} is not in a group of order {order}")]
    SequenceElementOutOfRange { value: usize, order: usize },
}

/// On-disk form of a [`MealyMachine`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineFile {
    pub group: GroupSpec,
    pub states: usize,
    pub start: usize,
    pub trans: Vec<Vec<usize>>,
    pub out: Vec<Vec<usize>>,
}

impl MachineFile {
    pub fn from_json(text: &str) -> Result<MachineFile, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Canonical bytes: field order is fixed and numbers carry no
    /// formatting choices, so round trips are byte stable.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("machine files serialize infallibly")
    }

    pub fn from_machine(m: &MealyMachine) -> MachineFile {
        MachineFile {
            group: m.group().spec().clone(),
            states: m.state_count(),
            start: m.start(),
            trans: m.trans_rows(),
            out: m.out_rows(),
        }
    }

    /// Builds and validates the machine, including its group.
    pub fn to_machine(&self) -> Result<MealyMachine, FormatError> {
        if self.states != self.trans.len() {
            return Err(FormatError::StateCountMismatch {
                declared: self.states,
                actual: self.trans.len(),
            });
        }
        let group = self.group.build()?;
        Ok(MealyMachine::new(
            group,
            self.start,
            self.trans.clone(),
            self.out.clone(),
        )?)
    }
}

/// Parses machine JSON straight into a validated machine.
pub fn parse_machine(text: &str) -> Result<MealyMachine, FormatError> {
    MachineFile::from_json(text)?.to_machine()
}

/// On-disk form of an [`EncodingScheme`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeFile {
    pub k: GroupSpec,
    pub n: usize,
    pub s: Vec<Vec<usize>>,
    pub beta: Vec<usize>,
    pub alpha_section: Vec<usize>,
    pub g: GroupSpec,
}

impl SchemeFile {
    pub fn from_json(text: &str) -> Result<SchemeFile, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("scheme files serialize infallibly")
    }

    pub fn from_scheme(s: &EncodingScheme) -> SchemeFile {
        SchemeFile {
            k: s.k().spec().clone(),
            n: s.n(),
            s: s.tuples().to_vec(),
            beta: s.beta().to_vec(),
            alpha_section: s.alpha_section().to_vec(),
            g: s.g().spec().clone(),
        }
    }

    /// Builds both groups and validates every scheme invariant.
    pub fn to_scheme(&self) -> Result<EncodingScheme, FormatError> {
        let k = self.k.build()?;
        let g = self.g.build()?;
        Ok(EncodingScheme::new(
            k,
            self.n,
            self.s.clone(),
            self.beta.clone(),
            self.alpha_section.clone(),
            g,
        )?)
    }
}

/// Parses scheme JSON straight into a validated scheme.
pub fn parse_scheme(text: &str) -> Result<EncodingScheme, FormatError> {
    SchemeFile::from_json(text)?.to_scheme()
}

/// Parses a comma-separated sequence of element indices, checked against
/// the group's order. Whitespace around entries is ignored; the empty
/// sequence is rejected.
pub fn parse_sequence(text: &str, group: &FiniteGroup) -> Result<Vec<usize>, FormatError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(FormatError::EmptySequence);
    }
    let mut out = Vec::new();
    for entry in trimmed.split(',') {
        let entry = entry.trim();
        let value: usize = entry.parse().map_err(|_| FormatError::BadSequenceEntry {
            entry: entry.to_string(),
        })?;
        if value >= group.order() {
            return Err(FormatError::SequenceElementOutOfRange {
                value,
                order: group.order(),
            });
        }
        out.push(value);
    }
    Ok(out)
}

/// Renders a sequence in the same comma-separated syntax.
pub fn format_sequence(seq: &[usize]) -> String {
    seq.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
