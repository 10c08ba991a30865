//! JSON payloads printed by the commands.
//!
//! Results go to standard output as a single JSON object; a short human
//! summary goes to standard error. Payloads are byte-identical across
//! reruns with the same input, flags, and seed, except for the trailing
//! `time_ns` field, which is the one intentionally volatile value.

use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct EvalOutput {
    pub dilation: f64,
    pub witness: Option<(usize, usize)>,
    pub n: usize,
    pub method: &'static str,
    pub profile: &'static str,
    pub time_ns: u128,
}

#[derive(Debug, Serialize)]
pub struct CenterOutput {
    pub center: Vec<f64>,
    pub dilation: f64,
    pub witness: Option<(usize, usize)>,
    pub method: &'static str,
    pub iterations: usize,
    pub seed: u64,
    pub fell_back: bool,
    pub time_ns: u128,
}

#[derive(Debug, Serialize)]
pub struct VertexOutput {
    pub center_index: usize,
    pub center: Vec<f64>,
    pub dilation: f64,
    pub iterations: usize,
    pub seed: u64,
    pub fell_back: bool,
    pub time_ns: u128,
}

#[derive(Debug, Serialize)]
pub struct GenOutput {
    pub kind: &'static str,
    pub n: usize,
    pub dim: usize,
    pub seed: u64,
    pub path: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct RenderOutput {
    pub svg_path: String,
    #[serde(flatten)]
    pub info: crate::svg::RenderInfo,
    pub time_ns: u128,
}

#[derive(Debug, Serialize)]
pub struct ErrorObject {
    pub error: ErrorBody,
}

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
}

impl ErrorObject {
    pub fn new(kind: &str, message: impl ToString) -> Self {
        ErrorObject {
            error: ErrorBody { kind: kind.to_string(), message: message.to_string() },
        }
    }
}
