//! Machine-readable JSON run records: config echo, artifact version,
//! integrator diagnostics, and the result payload. Records round-trip
//! losslessly and can be fed back as `--config` to reproduce a run.

use crate::config::RunConfig;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunRecord {
    pub version: String,
    pub config: RunConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<DiagnosticsDto>,
    pub result: RunResult,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsDto {
    pub max_shell_violation: f64,
    pub max_rotor_drift: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RunResult {
    Series {
        rows: Vec<SeriesRow>,
    },
    TauD {
        tau_d: TaggedTime,
        tau_d_over_tau_s: TaggedTime,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tau_d_years: Option<TaggedTime>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tau_d_years_times_mc_over_w: Option<TaggedTime>,
    },
    Sweep {
        rows: Vec<SweepRow>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesRow {
    pub tau_over_tau_s: f64,
    pub entropy_bits: f64,
    pub bloch_1: f64,
    pub bloch_2: f64,
    pub bloch_3: f64,
    pub centroid_angle_rad: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepRow {
    pub rs_over_r: f64,
    pub inverse_tau_d_over_inverse_tau_s: f64,
}

/// A proper time that may be the distinguished "no decoherence" value.
/// Serialized as a plain number or the string `"inf"`, never as a
/// floating-point infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TaggedTime {
    Finite(f64),
    Infinite,
}

impl TaggedTime {
    pub fn map(self, f: impl FnOnce(f64) -> f64) -> TaggedTime {
        match self {
            TaggedTime::Finite(x) => TaggedTime::Finite(f(x)),
            TaggedTime::Infinite => TaggedTime::Infinite,
        }
    }

    /// Display form: decimal value or `inf`.
    pub fn display(&self) -> String {
        match self {
            TaggedTime::Finite(x) => format!("{x:.12e}"),
            TaggedTime::Infinite => "inf".to_string(),
        }
    }
}

impl Serialize for TaggedTime {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            TaggedTime::Finite(x) => serializer.serialize_f64(*x),
            TaggedTime::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for TaggedTime {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Number(x) if x.is_finite() => Ok(TaggedTime::Finite(x)),
            Raw::Number(x) => Err(D::Error::custom(format!("non-finite time {x}"))),
            Raw::Text(s) if s == "inf" => Ok(TaggedTime::Infinite),
            Raw::Text(s) => Err(D::Error::custom(format!(
                "expected a number or \"inf\", got \"{s}\""
            ))),
        }
    }
}
