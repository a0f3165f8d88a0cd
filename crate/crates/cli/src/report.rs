use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::{self, Display, Write as _};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

/// One check: what went in, what came out, and how much search it took.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub name: String,
    pub inputs: BTreeMap<String, String>,
    pub verdict: Verdict,
    /// The identity the witness was checked against.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub witness: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(default)]
    pub budget: u64,
}

impl Record {
    pub fn new(name: impl Into<String>) -> Self {
        Record { name: name.into(), inputs: BTreeMap::new(), verdict: Verdict::Pass, identity: None, witness: BTreeMap::new(), counterexample: None, budget: 0 }
    }

    pub fn input(mut self, key: &str, value: impl Display) -> Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    pub fn witness(mut self, key: &str, value: impl Display) -> Self {
        self.witness.insert(key.to_string(), value.to_string());
        self
    }

    pub fn identity(mut self, text: impl Into<String>) -> Self {
        self.identity = Some(text.into());
        self
    }

    pub fn fail(mut self, counterexample: impl Display) -> Self {
        self.verdict = Verdict::Fail;
        self.counterexample = Some(counterexample.to_string());
        self
    }

    /// Fail without a counterexample when `ok` is false.
    pub fn require(mut self, ok: bool) -> Self {
        if !ok {
            self.verdict = Verdict::Fail;
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
    Budget,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
            Status::Budget => 3,
        }
    }
}

impl Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
            Status::Budget => "budget",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    /// Arguments after the program name.
    pub command: Vec<String>,
    pub records: Vec<Record>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Report {
    pub fn finished(command: Vec<String>, records: Vec<Record>) -> Self {
        let status = if records.iter().all(Record::passed) { Status::Pass } else { Status::Fail };
        Report { command, records, status, error: None }
    }

    pub fn failed(command: Vec<String>, records: Vec<Record>, status: Status, error: String) -> Self {
        Report { command, records, status, error: Some(error) }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", quote_command(&self.command));
        for r in &self.records {
            out.push('\n');
            let _ = writeln!(out, "record: {}", r.name);
            let _ = writeln!(out, "verdict: {}", r.verdict);
            for (k, v) in &r.inputs {
                let _ = writeln!(out, "input.{k}: {v}");
            }
            if let Some(id) = &r.identity {
                let _ = writeln!(out, "identity: {id}");
            }
            for (k, v) in &r.witness {
                let _ = writeln!(out, "witness.{k}: {v}");
            }
            if let Some(c) = &r.counterexample {
                let _ = writeln!(out, "counterexample: {c}");
            }
            let _ = writeln!(out, "budget: {}", r.budget);
        }
        out.push('\n');
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error: {e}");
        }
        let _ = writeln!(out, "status: {}", self.status);
        out
    }

    /// Read either output format back.
    pub fn parse(text: &str) -> Result<Report, String> {
        if text.trim_start().starts_with('{') {
            return serde_json::from_str(text).map_err(|e| format!("malformed JSON report: {e}"));
        }
        parse_text(text)
    }
}

fn parse_text(text: &str) -> Result<Report, String> {
    let mut command = None;
    let mut records: Vec<Record> = Vec::new();
    let mut status = None;
    let mut error = None;
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (key, value) = line.split_once(": ").or_else(|| line.strip_suffix(':').map(|k| (k, ""))).ok_or_else(|| format!("line {}: expected `key: value`", n + 1))?;
        let value = value.to_string();
        let current = records.last_mut();
        match (key, current) {
            ("command", _) => command = Some(split_command(&value)?),
            ("status", _) => status = Some(value),
            ("error", _) => error = Some(value),
            ("record", _) => records.push(Record::new(value)),
            ("verdict", Some(r)) => {
                r.verdict = match value.as_str() {
                    "pass" => Verdict::Pass,
                    "fail" => Verdict::Fail,
                    other => return Err(format!("line {}: unknown verdict `{other}`", n + 1)),
                }
            }
            ("identity", Some(r)) => r.identity = Some(value),
            ("counterexample", Some(r)) => r.counterexample = Some(value),
            ("budget", Some(r)) => r.budget = value.parse().map_err(|_| format!("line {}: bad budget", n + 1))?,
            (k, Some(r)) if k.starts_with("input.") => {
                r.inputs.insert(k["input.".len()..].to_string(), value);
            }
            (k, Some(r)) if k.starts_with("witness.") => {
                r.witness.insert(k["witness.".len()..].to_string(), value);
            }
            (k, _) => return Err(format!("line {}: unexpected key `{k}`", n + 1)),
        }
    }
    let status = match status.as_deref() {
        Some("pass") => Status::Pass,
        Some("fail") => Status::Fail,
        Some("error") => Status::Error,
        Some("budget") => Status::Budget,
        _ => return Err("report has no valid status line".into()),
    };
    Ok(Report { command: command.ok_or("report has no command line")?, records, status, error })
}

fn quote_command(args: &[String]) -> String {
    let quote = |a: &String| {
        if !a.is_empty() && a.chars().all(|c| c.is_ascii_alphanumeric() || "-_=/.,:+<>()".contains(c)) {
            a.clone()
        } else {
            format!("'{}'", a.replace('\'', r"'\''"))
        }
    };
    std::iter::once("ringlift".to_string()).chain(args.iter().map(quote)).collect::<Vec<_>>().join(" ")
}

/// Inverse of `quote_command`: single quotes group, `'\''` is a literal quote.
fn split_command(line: &str) -> Result<Vec<String>, String> {
    let mut words = Vec::new();
    let mut cur = String::new();
    let mut in_word = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '\'' => {
                in_word = true;
                loop {
                    match chars.next() {
                        Some('\'') => break,
                        Some(c) => cur.push(c),
                        None => return Err("unterminated quote in command line".into()),
                    }
                }
            }
            '\\' => {
                in_word = true;
                cur.push(chars.next().ok_or("dangling backslash in command line")?);
            }
            c if c.is_whitespace() => {
                if in_word {
                    words.push(std::mem::take(&mut cur));
                    in_word = false;
                }
            }
            c => {
                in_word = true;
                cur.push(c);
            }
        }
    }
    if in_word {
        words.push(cur);
    }
    if words.first().map(String::as_str) != Some("ringlift") {
        return Err("command line does not start with `ringlift`".into());
    }
    Ok(words.split_off(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let r = Record::new("regular").input("ring", "Z/4").fail(2).identity("xyx = x");
        let rep = Report::finished(vec!["check".into(), "Z/4".into(), "it's odd".into()], vec![r, Record::new("x").witness("y", "[1, 2]")]);
        assert_eq!(Report::parse(&rep.to_text()).unwrap(), rep);
        assert_eq!(Report::parse(&rep.to_json()).unwrap(), rep);
    }
}
