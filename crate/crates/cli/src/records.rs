//! Line-delimited JSON records. Every record carries `schema_version`.

use std::io::{self, Write};

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Space {
    /// Largest extent seen on working, output, incoming, outgoing.
    pub per_tape: [usize; 4],
    pub overall: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdSummary {
    /// Every agent holds a distinct id in `0..n`.
    pub ids_complete: bool,
    pub max_id: u64,
    pub sizes: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TmSummary {
    /// `running`, `accepted` or `rejected`.
    pub status: &'static str,
    /// Input as laid out on the simulated tape, in id order.
    pub simulated_input: Option<String>,
    pub reference_accepts: Option<bool>,
    pub tape: Option<String>,
    pub handoffs: u64,
    pub violation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub kind: &'static str,
    pub protocol: String,
    pub n: usize,
    pub input: String,
    pub seed: u64,
    pub mode: &'static str,
    pub events: u64,
    pub effective_encounters: u64,
    pub converged: bool,
    /// `converged`, `budget` or `halted`.
    pub stop: &'static str,
    pub outputs: Vec<String>,
    /// The common output, if all agents agree.
    pub consensus: Option<String>,
    pub space: Space,
    pub oracle: Option<bool>,
    pub matched: Option<bool>,
    pub ids: Option<IdSummary>,
    pub tm: Option<TmSummary>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EventRecord {
    pub schema_version: u32,
    pub kind: &'static str,
    pub ordinal: u64,
    pub event: &'static str,
    pub participants: Vec<usize>,
    pub effective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyRecord {
    pub schema_version: u32,
    pub kind: &'static str,
    pub protocol: String,
    pub input: String,
    pub explored: usize,
    pub terminal_sccs: usize,
    /// `stably_computes`, `fails` or `unknown`.
    pub verdict: &'static str,
    pub value: Option<String>,
    pub oracle: Option<bool>,
    pub matched: Option<bool>,
    pub counterexample: Option<Vec<[usize; 2]>>,
    pub reason: Option<String>,
    pub cap: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphRecord {
    pub schema_version: u32,
    pub kind: &'static str,
    pub protocol: String,
    pub n: usize,
    pub nodes: usize,
    pub edges: usize,
    pub initial: usize,
    pub r_max: u64,
    /// Whether `r_max <= 2^|U|`.
    pub r_within_bound: bool,
    pub labels_functional: bool,
    pub q_holds: usize,
    pub q_fails: Vec<u32>,
    pub q_skipped: usize,
    pub r_cap: u64,
    /// Whether the graph for the previous size in this request embeds here.
    pub embeds_previous: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub schema_version: u32,
    pub kind: &'static str,
    pub protocol: String,
    pub n: usize,
    pub runs: usize,
    pub matched: usize,
    pub max_extent: usize,
    pub bound: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepFit {
    pub schema_version: u32,
    pub kind: &'static str,
    pub protocol: String,
    /// `log` or `loglog`.
    pub scale: &'static str,
    pub c1: u64,
    pub c0: i64,
    pub monotone: bool,
}

pub fn to_line<T: Serialize>(record: &T) -> String {
    serde_json::to_string(record).expect("records serialize")
}

/// Writes one record per line.
pub fn write_lines<T: Serialize>(out: &mut dyn Write, records: &[T]) -> io::Result<()> {
    for r in records {
        writeln!(out, "{}", to_line(r))?;
    }
    Ok(())
}
