use serde_json::{json, Value};

use crate::error::{Error, Result};

/// A certified homological dimension.
///
/// `ExceedsCutoff(c)` means the true value is at least `c`, possibly infinite;
/// `MinusInfinity` is the dimension of the zero object.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtDim {
    Finite(i64),
    ExceedsCutoff(usize),
    MinusInfinity,
}

impl ExtDim {
    pub fn finite(self) -> Option<i64> {
        match self {
            ExtDim::Finite(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtDim::Finite(_))
    }

    /// Supremum of two values; an uncertified operand makes the result uncertified.
    pub fn max(self, o: ExtDim) -> ExtDim {
        match (self, o) {
            (ExtDim::ExceedsCutoff(a), ExtDim::ExceedsCutoff(b)) => ExtDim::ExceedsCutoff(a.min(b)),
            (ExtDim::ExceedsCutoff(c), _) | (_, ExtDim::ExceedsCutoff(c)) => ExtDim::ExceedsCutoff(c),
            (ExtDim::MinusInfinity, x) | (x, ExtDim::MinusInfinity) => x,
            (ExtDim::Finite(a), ExtDim::Finite(b)) => ExtDim::Finite(a.max(b)),
        }
    }

    pub fn plus(self, k: i64) -> ExtDim {
        match self {
            ExtDim::Finite(n) => ExtDim::Finite(n + k),
            x => x,
        }
    }

    pub fn to_json(self) -> Value {
        match self {
            ExtDim::Finite(n) => json!({"finite": n}),
            ExtDim::ExceedsCutoff(c) => json!({"exceeds": c}),
            ExtDim::MinusInfinity => json!({"minus_infinity": true}),
        }
    }

    pub fn from_json(v: &Value) -> Result<ExtDim> {
        if let Some(n) = v.get("finite").and_then(Value::as_i64) {
            Ok(ExtDim::Finite(n))
        } else if let Some(c) = v.get("exceeds").and_then(Value::as_u64) {
            Ok(ExtDim::ExceedsCutoff(c as usize))
        } else if v.get("minus_infinity").is_some() {
            Ok(ExtDim::MinusInfinity)
        } else {
            Err(Error::Parse(format!("not a dimension value: {v}")))
        }
    }
}

impl std::fmt::Display for ExtDim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtDim::Finite(n) => write!(f, "{n}"),
            ExtDim::ExceedsCutoff(c) => write!(f, ">= {c}"),
            ExtDim::MinusInfinity => write!(f, "-inf"),
        }
    }
}

/// Three-valued outcome of a certified check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Verified,
    Inconclusive,
    Violation,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Violation => "VIOLATION",
        }
    }

    /// Process exit code: 0 verified, 2 inconclusive, 3 violation.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Verified => 0,
            Verdict::Inconclusive => 2,
            Verdict::Violation => 3,
        }
    }

    /// The worse of two verdicts.
    pub fn and(self, o: Verdict) -> Verdict {
        self.max(o)
    }

    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Verified
        } else {
            Verdict::Violation
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DimKind {
    Proj,
    Inj,
    Flat,
}

impl DimKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DimKind::Proj => "proj",
            DimKind::Inj => "inj",
            DimKind::Flat => "flat",
        }
    }
}

/// A nonvanishing Ext or Tor group supporting a reported value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub test: String,
    pub degree: i32,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimReport {
    pub subject: String,
    pub kind: DimKind,
    pub value: ExtDim,
    pub window: usize,
    pub witnesses: Vec<Witness>,
    /// Two isomorphic syzygies were found, so an `ExceedsCutoff` value is in fact infinite.
    pub certified_infinite: bool,
}

impl DimReport {
    pub fn to_json(&self) -> Value {
        json!({
            "subject": self.subject,
            "kind": self.kind.as_str(),
            "value": self.value.to_json(),
            "window": self.window,
            "certified_infinite": self.certified_infinite,
            "witnesses": self.witnesses.iter().map(|w| json!({"test": w.test, "degree": w.degree, "dim": w.dim})).collect::<Vec<_>>(),
        })
    }
}
