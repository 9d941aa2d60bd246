//! Checks textual assertions such as `cfNext: "a = 1" --> "return a";`
//! against a flow graph, looking instructions up by their text.

use std::collections::HashMap;
use std::fmt;
use std::sync::LazyLock;

use regex::Regex;
use serde_json::json;
use thiserror::Error;

use crate::model::{FlowGraph, InstrId};

static ASSERTION: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r#"^(?<command>(cfNext|cfPrev|dfNext)):\s*"(?<source>[^"]*)"\s*-->\s*"(?<target>[^"]*)"(;)?$"#)
        .expect("assertion pattern compiles")
});

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    CfNext,
    CfPrev,
    DfNext,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::CfNext => "cfNext",
            Command::CfPrev => "cfPrev",
            Command::DfNext => "dfNext",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "cfNext" => Some(Command::CfNext),
            "cfPrev" => Some(Command::CfPrev),
            "dfNext" => Some(Command::DfNext),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assertion {
    pub command: Command,
    pub source: String,
    pub target: String,
    /// 1-based line in the assertion file.
    pub line: usize,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("line {line}: malformed assertion `{content}`")]
    MalformedAssertion { line: usize, content: String },
}

/// Parses one assertion per line. Blank lines and lines starting with `#`
/// are skipped.
pub fn parse_assertions(text: &str) -> Result<Vec<Assertion>, ValidationError> {
    let mut out = Vec::new();
    for (i, raw) in text.split('\n').enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        match parse_line(line) {
            Some((command, source, target)) => out.push(Assertion {
                command,
                source: source.to_string(),
                target: target.to_string(),
                line: i + 1,
                text: line.to_string(),
            }),
            None => {
                return Err(ValidationError::MalformedAssertion {
                    line: i + 1,
                    content: line.to_string(),
                })
            }
        }
    }
    Ok(out)
}

/// Matches a single line against the assertion pattern.
pub fn parse_line(line: &str) -> Option<(Command, &str, &str)> {
    let caps = ASSERTION.captures(line)?;
    let command = Command::parse(&caps["command"])?;
    Some((
        command,
        caps.name("source").map_or("", |m| m.as_str()),
        caps.name("target").map_or("", |m| m.as_str()),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Holds,
    Violated,
    UnknownSource,
    UnknownTarget,
    Ambiguous,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::UnknownSource => "unknown-source",
            Verdict::UnknownTarget => "unknown-target",
            Verdict::Ambiguous => "ambiguous",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Summary {
    pub total: usize,
    pub holds: usize,
    pub violated: usize,
    pub unknown_source: usize,
    pub unknown_target: usize,
    pub ambiguous: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub entries: Vec<(Assertion, Verdict)>,
}

impl Report {
    pub fn verdicts(&self) -> impl Iterator<Item = Verdict> + '_ {
        self.entries.iter().map(|(_, v)| *v)
    }

    pub fn all_hold(&self) -> bool {
        self.verdicts().all(|v| v == Verdict::Holds)
    }

    pub fn summary(&self) -> Summary {
        let mut s = Summary {
            total: self.entries.len(),
            ..Summary::default()
        };
        for v in self.verdicts() {
            match v {
                Verdict::Holds => s.holds += 1,
                Verdict::Violated => s.violated += 1,
                Verdict::UnknownSource => s.unknown_source += 1,
                Verdict::UnknownTarget => s.unknown_target += 1,
                Verdict::Ambiguous => s.ambiguous += 1,
            }
        }
        s
    }

    pub fn summary_json(&self) -> String {
        let s = self.summary();
        json!({
            "total": s.total,
            "holds": s.holds,
            "violated": s.violated,
            "unknownSource": s.unknown_source,
            "unknownTarget": s.unknown_target,
            "ambiguous": s.ambiguous,
        })
        .to_string()
    }

    /// One `verdict<TAB>line<TAB>assertion` line per assertion, then the
    /// JSON summary.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (a, v) in &self.entries {
            out.push_str(&format!("{v}\t{}\t{}\n", a.line, a.text));
        }
        out.push_str(&self.summary_json());
        out.push('\n');
        out
    }
}

/// Checks every assertion against `graph`.
pub fn check(graph: &FlowGraph, assertions: &[Assertion]) -> Report {
    let mut index: HashMap<&str, Vec<InstrId>> = HashMap::new();
    for instr in graph.instrs() {
        index.entry(instr.txt()).or_default().push(instr.id());
    }
    let entries = assertions
        .iter()
        .map(|a| (a.clone(), verdict(graph, &index, a)))
        .collect();
    Report { entries }
}

fn verdict(graph: &FlowGraph, index: &HashMap<&str, Vec<InstrId>>, a: &Assertion) -> Verdict {
    let Some(sources) = index.get(a.source.as_str()) else {
        return Verdict::UnknownSource;
    };
    let Some(targets) = index.get(a.target.as_str()) else {
        return Verdict::UnknownTarget;
    };
    let ([source], [target]) = (sources.as_slice(), targets.as_slice()) else {
        return Verdict::Ambiguous;
    };
    let instr = graph.get(*source).expect("indexed from this graph");
    let links = match a.command {
        Command::CfNext => instr.cf_next(),
        Command::CfPrev => instr.cf_prev(),
        Command::DfNext => instr.df_next(),
    };
    if links.contains(target) {
        Verdict::Holds
    } else {
        Verdict::Violated
    }
}

#[cfg(test)]
mod tests;
