mod analyze;
mod oracle;
mod verify;

pub use analyze::analyze;
pub use oracle::{oracle_bruteforce, oracle_polarization};
pub use verify::verify;

use std::collections::BTreeMap;

use homchar::Error;
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA: &str = "homchar/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_FAILED: i32 = 3;
pub const EXIT_CAP: i32 = 4;

/// Exit code for a library error: caps and resource limits are 4, every
/// other error is an input problem.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } | Error::Resource(_) => EXIT_CAP,
        _ => EXIT_INVALID,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Symbolic,
    Oracle,
    #[default]
    Both,
}

impl Mode {
    pub fn symbolic(self) -> bool {
        matches!(self, Mode::Symbolic | Mode::Both)
    }

    pub fn oracle(self) -> bool {
        matches!(self, Mode::Oracle | Mode::Both)
    }
}

/// Knobs shared by all commands. Only the numeric layers read `seed`,
/// `samples` and `tolerance`.
#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub seed: u64,
    pub samples: usize,
    pub k: Option<u32>,
    pub tolerance: f64,
    pub real: bool,
    pub mode: Mode,
    pub bindings: BTreeMap<String, String>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 42,
            samples: 32,
            k: None,
            tolerance: 1e-9,
            real: false,
            mode: Mode::Both,
            bindings: BTreeMap::new(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub text: String,
    pub json: Value,
    pub exit: i32,
}

impl Report {
    fn new(command: &str, mut body: Value, text: String, exit: i32) -> Report {
        let obj = body.as_object_mut().expect("report bodies are objects");
        obj.insert("schema".into(), json!(SCHEMA));
        obj.insert("command".into(), json!(command));
        obj.insert("exit_code".into(), json!(exit));
        Report { text, json: body, exit }
    }

    /// Report for a failed command.
    pub fn from_error(command: &str, e: &Error) -> Report {
        let exit = exit_code(e);
        Report::new(command, json!({ "error": e.to_string() }), format!("error: {e}\n"), exit)
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("values serialize");
        s.push('\n');
        s
    }
}

pub(crate) fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report parts serialize")
}

/// Which mathematical result each report section instantiates.
pub(crate) fn provenance(sections: &[&str]) -> Value {
    let all = [
        (
            "condition",
            "condition (C): distinct inner exponents, distinct outer exponents, common degree N > 1",
        ),
        (
            "degree_split",
            "substituting r*x for rational r separates summands of different degree p*q",
        ),
        (
            "identities",
            "symmetrization of each summand into an N-additive symmetric form, evaluated at substitution patterns",
        ),
        (
            "elimination",
            "cancelling the single-argument term between the dependence and pair identities",
        ),
        (
            "constraints",
            "homomorphism ansatz; algebraic independence of distinct homomorphisms makes every monomial coefficient vanish",
        ),
        (
            "families",
            "decomposition of the index set into blocks sharing one homomorphism, with per-block coefficient constraints",
        ),
        (
            "symbolic",
            "reduction by phi(x^k) = phi(x)^k, a(x^k) = k*a(x), phi(1) = 1, a(1) = 0 in the free commutative ring of symbols",
        ),
        (
            "oracle",
            "exact evaluation in Q(t) with d/dt or in Q(sqrt(d)) with its two embeddings",
        ),
        (
            "polarization",
            "polarization formula for the diagonal of a symmetric multiadditive map",
        ),
        (
            "bruteforce",
            "average over all permutations of the symmetrized multiadditive form",
        ),
    ];
    let map: serde_json::Map<String, Value> = all
        .iter()
        .filter(|(k, _)| sections.contains(k))
        .map(|(k, v)| (k.to_string(), json!(v)))
        .collect();
    Value::Object(map)
}

pub(crate) fn provenance_text(sections: &[&str], out: &mut String) {
    if let Value::Object(map) = provenance(sections) {
        out.push_str("provenance:\n");
        for (k, v) in map {
            out.push_str(&format!("  {k}: {}\n", v.as_str().unwrap_or_default()));
        }
    }
}
