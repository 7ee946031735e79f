//! The state-set file format: a JSON document with a version tag, explicit
//! dimensions, and per-state (re, im) amplitude pairs.
//!
//! Floats are written with 17 significant digits, which round-trips every
//! f64 exactly; a file produced by [`write_string`] therefore parses back
//! to bit-identical amplitudes, and re-writing it reproduces the bytes.
//! Files from other tools may carry truncated decimals, so the reader
//! accepts norms within 1e-9 of unity, renormalizing (and reporting that
//! it did) whenever the norm misses the construction tolerance of the
//! underlying state type.

use std::io;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sicd_core::{PureState, StateSet, STATE_NORM_TOL};

/// Version tag required in the `format` field.
pub const FORMAT_VERSION: &str = "sicd-stateset/1";

/// Norm slack accepted on read; beyond it a file is rejected.
pub const NORM_READ_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Metadata {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sic_deviation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateSetFile {
    pub format: String,
    pub dim: usize,
    pub n_points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    /// `n_points` rows of `dim` amplitude pairs `[re, im]`.
    pub states: Vec<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("not a state-set document: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("unsupported format tag {found:?}, expected {FORMAT_VERSION:?}")]
    Version { found: String },
    #[error("{0}")]
    Shape(String),
    #[error("state {index} has norm {norm}, outside the read slack {NORM_READ_SLACK:e}")]
    Norm { index: usize, norm: f64 },
    #[error(transparent)]
    Invalid(#[from] sicd_core::Error),
}

/// A parsed file: the validated state set, how many states the reader had
/// to renormalize, and the document itself for lossless re-serialization.
#[derive(Debug, Clone)]
pub struct ReadOutcome {
    pub set: StateSet,
    pub renormalized: usize,
    pub file: StateSetFile,
}

pub fn read_state_set(text: &str) -> Result<ReadOutcome, FormatError> {
    let file: StateSetFile = serde_json::from_str(text)?;
    if file.format != FORMAT_VERSION {
        return Err(FormatError::Version {
            found: file.format.clone(),
        });
    }
    if file.states.len() != file.n_points {
        return Err(FormatError::Shape(format!(
            "n_points is {} but {} states are listed",
            file.n_points,
            file.states.len()
        )));
    }
    let mut states = Vec::with_capacity(file.states.len());
    let mut renormalized = 0;
    for (index, row) in file.states.iter().enumerate() {
        if row.len() != file.dim {
            return Err(FormatError::Shape(format!(
                "state {index} has {} amplitudes, dim is {}",
                row.len(),
                file.dim
            )));
        }
        let amps: Vec<Complex64> = row.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let state = if (norm - 1.0).abs() <= STATE_NORM_TOL {
            PureState::new(amps)?
        } else if (norm - 1.0).abs() <= NORM_READ_SLACK {
            renormalized += 1;
            PureState::normalized_from(amps)?
        } else {
            return Err(FormatError::Norm { index, norm });
        };
        states.push(state);
    }
    let set = StateSet::new(states, file.weights.clone())?;
    Ok(ReadOutcome {
        set,
        renormalized,
        file,
    })
}

/// Builds the document for a state set. Uniform weights are left implicit.
pub fn to_file(set: &StateSet, metadata: Option<Metadata>) -> StateSetFile {
    let states = set
        .states()
        .iter()
        .map(|s| s.amplitudes().iter().map(|z| [z.re, z.im]).collect())
        .collect();
    StateSetFile {
        format: FORMAT_VERSION.to_string(),
        dim: set.dim(),
        n_points: set.len(),
        weights: set.weights().map(<[f64]>::to_vec),
        states,
        metadata,
    }
}

/// Pretty JSON with every float at 17 significant digits.
pub fn write_string(file: &StateSetFile) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sci17Pretty::new());
    file.serialize(&mut ser).expect("in-memory serialization");
    String::from_utf8(out).expect("serializer emits UTF-8")
}

/// Serializes any document with the same 17-digit float convention, for
/// the machine-readable command output.
pub fn machine_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sci17Pretty::new());
    value.serialize(&mut ser).expect("in-memory serialization");
    String::from_utf8(out).expect("serializer emits UTF-8")
}

/// Pretty formatter that prints every f64 as `{:.16e}`: 17 significant
/// digits, enough to reproduce the bits on parse.
struct Sci17Pretty {
    indent: usize,
    has_value: bool,
}

impl Sci17Pretty {
    fn new() -> Self {
        Sci17Pretty {
            indent: 0,
            has_value: false,
        }
    }

    fn newline<W: ?Sized + io::Write>(&self, writer: &mut W) -> io::Result<()> {
        writer.write_all(b"\n")?;
        for _ in 0..self.indent {
            writer.write_all(b"  ")?;
        }
        Ok(())
    }
}

impl serde_json::ser::Formatter for Sci17Pretty {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.indent += 1;
        self.has_value = false;
        writer.write_all(b"[")
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.indent -= 1;
        if self.has_value {
            self.newline(writer)?;
        }
        writer.write_all(b"]")
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        if !first {
            writer.write_all(b",")?;
        }
        self.newline(writer)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, _writer: &mut W) -> io::Result<()> {
        self.has_value = true;
        Ok(())
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.indent += 1;
        self.has_value = false;
        writer.write_all(b"{")
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.indent -= 1;
        if self.has_value {
            self.newline(writer)?;
        }
        writer.write_all(b"}")
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        if !first {
            writer.write_all(b",")?;
        }
        self.newline(writer)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        writer.write_all(b": ")
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, _writer: &mut W) -> io::Result<()> {
        self.has_value = true;
        Ok(())
    }
}
