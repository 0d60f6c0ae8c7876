//! Pipeline reports and their text and machine (JSON) renderings.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

pub const FORMAT_VERSION: &str = "report/v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

/// A re-checked claim about a step's output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Step {
    pub operation: String,
    pub inputs: Vec<String>,
    pub outputs: Map<String, Value>,
    pub certificates: Vec<Certificate>,
}

impl Step {
    pub fn new(operation: &str, inputs: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Step {
            operation: operation.to_string(),
            inputs: inputs.into_iter().map(Into::into).collect(),
            outputs: Map::new(),
            certificates: Vec::new(),
        }
    }

    pub fn output(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.outputs.insert(key.to_string(), value.into());
        self
    }

    pub fn certify(&mut self, name: &str, passed: bool) -> &mut Self {
        self.certify_with(name, passed, Value::Null)
    }

    pub fn certify_with(&mut self, name: &str, passed: bool, detail: impl Into<Value>) -> &mut Self {
        self.certificates.push(Certificate { name: name.to_string(), passed, detail: detail.into() });
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessEntry {
    pub class: String,
    pub nontorsion: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    Obstruction { status: String, symmetries: String, witness: Vec<WitnessEntry>, narrative: String },
    Property { holds: bool, summary: String },
}

impl Verdict {
    pub fn from_obstruction(v: &cfk_core::ObstructionVerdict) -> Self {
        Verdict::Obstruction {
            status: v.status.to_string(),
            symmetries: v.symmetries.to_string(),
            witness: v
                .witness
                .iter()
                .map(|w| WitnessEntry { class: w.name.clone(), nontorsion: w.nontorsion })
                .collect(),
            narrative: v.narrative.clone(),
        }
    }

    /// `OBSTRUCTED`, `INCONCLUSIVE`, `HOLDS` or `FAILS`.
    pub fn status(&self) -> &str {
        match self {
            Verdict::Obstruction { status, .. } => status,
            Verdict::Property { holds: true, .. } => "HOLDS",
            Verdict::Property { holds: false, .. } => "FAILS",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub format_version: String,
    pub command: String,
    pub arguments: Vec<String>,
    pub steps: Vec<Step>,
    pub verdict: Option<Verdict>,
    /// The resulting complex as a `.cfk` document, for commands that build one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub document: Option<String>,
}

impl Report {
    pub fn new(command: &str, arguments: &[String]) -> Self {
        Report {
            format_version: FORMAT_VERSION.to_string(),
            command: command.to_string(),
            arguments: arguments.to_vec(),
            steps: Vec::new(),
            verdict: None,
            document: None,
        }
    }

    pub fn step(&self, operation: &str) -> Option<&Step> {
        self.steps.iter().find(|s| s.operation == operation)
    }

    pub fn failed_certificates(&self) -> Vec<(String, String)> {
        self.steps
            .iter()
            .flat_map(|s| s.certificates.iter().filter(|c| !c.passed).map(|c| (s.operation.clone(), c.name.clone())))
            .collect()
    }

    pub fn all_certificates_pass(&self) -> bool {
        self.failed_certificates().is_empty()
    }

    pub fn to_machine(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self, verbose: bool) -> String {
        let mut out = String::new();
        let args = if self.arguments.is_empty() { String::new() } else { format!(" {}", self.arguments.join(" ")) };
        writeln!(out, "cfk {}{args}  [{}]", self.command, self.format_version).unwrap();
        for (k, step) in self.steps.iter().enumerate() {
            writeln!(out).unwrap();
            let inputs = if step.inputs.is_empty() { String::new() } else { format!(" ({})", step.inputs.join(", ")) };
            writeln!(out, "{}. {}{inputs}", k + 1, step.operation).unwrap();
            for (key, value) in &step.outputs {
                render_value(&mut out, key, value, 1);
            }
            for c in &step.certificates {
                let mark = if c.passed { "ok" } else { "FAILED" };
                writeln!(out, "  [{mark}] {}", c.name).unwrap();
                if verbose && !c.detail.is_null() {
                    render_value(&mut out, "detail", &c.detail, 3);
                }
            }
        }
        if let Some(v) = &self.verdict {
            writeln!(out).unwrap();
            match v {
                Verdict::Obstruction { status, symmetries, narrative, .. } => {
                    writeln!(out, "verdict: {status} (invariance under {symmetries})").unwrap();
                    writeln!(out, "  {narrative}").unwrap();
                }
                Verdict::Property { summary, .. } => {
                    writeln!(out, "verdict: {}", v.status()).unwrap();
                    writeln!(out, "  {summary}").unwrap();
                }
            }
        }
        if verbose {
            if let Some(doc) = &self.document {
                writeln!(out, "\n--- document ---\n{}", doc.trim_end()).unwrap();
            }
        }
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::Null => Some("none".into()),
        _ => None,
    }
}

/// Arrays of flat objects sharing their keys are drawn as tables.
fn as_table(items: &[Value]) -> Option<(Vec<String>, Vec<Vec<String>>)> {
    let first = items.first()?.as_object()?;
    let header: Vec<String> = first.keys().cloned().collect();
    let mut rows = Vec::new();
    for item in items {
        let obj = item.as_object()?;
        if obj.keys().ne(header.iter()) {
            return None;
        }
        rows.push(obj.values().map(scalar).collect::<Option<Vec<_>>>()?);
    }
    Some((header, rows))
}

fn render_table(out: &mut String, header: &[String], rows: &[Vec<String>], indent: usize) {
    let widths: Vec<usize> = (0..header.len())
        .map(|c| rows.iter().map(|r| r[c].chars().count()).chain([header[c].chars().count()]).max().unwrap_or(0))
        .collect();
    let pad = "  ".repeat(indent);
    let line = |cells: &[String]| -> String {
        let padded: Vec<String> =
            cells.iter().zip(&widths).map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
        format!("{pad}| {} |", padded.join(" | ")).trim_end().to_string()
    };
    writeln!(out, "{}", line(header)).unwrap();
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    writeln!(out, "{pad}|-{}-|", rule.join("-|-")).unwrap();
    for r in rows {
        writeln!(out, "{}", line(r)).unwrap();
    }
}

fn render_value(out: &mut String, key: &str, value: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    if let Some(s) = scalar(value) {
        writeln!(out, "{pad}{key}: {s}").unwrap();
        return;
    }
    match value {
        Value::Array(items) if items.is_empty() => writeln!(out, "{pad}{key}: (none)").unwrap(),
        Value::Array(items) => {
            writeln!(out, "{pad}{key}:").unwrap();
            if let Some((header, rows)) = as_table(items) {
                render_table(out, &header, &rows, indent + 1);
            } else {
                for item in items {
                    match scalar(item) {
                        Some(s) => writeln!(out, "{pad}  - {s}").unwrap(),
                        None => render_value(out, "-", item, indent + 1),
                    }
                }
            }
        }
        Value::Object(map) => {
            writeln!(out, "{pad}{key}:").unwrap();
            for (k, v) in map {
                render_value(out, k, v, indent + 1);
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn empty_report_is_header_only() {
        let r = Report::new("pipeline custom", &[]);
        assert_eq!(r.to_text(false), "cfk pipeline custom  [report/v1]\n");
        assert!(r.to_machine().contains("\"format_version\": \"report/v1\""));
    }

    #[test]
    fn arrays_of_rows_become_tables() {
        let mut r = Report::new("table", &[]);
        let mut s = Step::new("table", ["a"]);
        s.output("rows", json!([{"class": "[x]", "image": "[x]"}, {"class": "[y]", "image": "0"}]));
        r.steps.push(s);
        let text = r.to_text(false);
        assert!(text.contains("| class | image |"), "{text}");
        assert!(text.contains("| [y]   | 0     |"), "{text}");
    }
}
