//! Reports: one JSON value, rendered as JSON or as indented text.

use std::fmt::Write;

use serde_json::Value;

/// Overall result of a command, mapped to the exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Fails,
    /// A budget was exhausted or a verdict is Unknown.
    Undecided,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Self::Success => 0,
            Self::Fails => 1,
            Self::Undecided => 3,
        }
    }

    /// Fails dominates Undecided, which dominates Success.
    pub fn combine(self, other: Outcome) -> Outcome {
        match (self, other) {
            (Self::Fails, _) | (_, Self::Fails) => Self::Fails,
            (Self::Undecided, _) | (_, Self::Undecided) => Self::Undecided,
            _ => Self::Success,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Success => "success",
            Self::Fails => "fails",
            Self::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub outcome: Outcome,
    /// Command echo, budgets, results and resource usage.
    pub data: Value,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        self.outcome.exit_code()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.data).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        render(&self.data, 0, &mut out);
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Text => self.to_text(),
        }
    }

    pub fn get(&self, path: &str) -> Option<&Value> {
        self.data.pointer(path)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.is_empty() => Some("[]".into()),
        Value::Object(o) if o.is_empty() => Some("{}".into()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
            let parts: Vec<String> = a.iter().map(|x| scalar(x).unwrap()).collect();
            Some(format!("[{}]", parts.join(", ")))
        }
        _ => None,
    }
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => writeln!(out, "{pad}{k}: {s}").unwrap(),
                    None => {
                        writeln!(out, "{pad}{k}:").unwrap();
                        render(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match scalar(x) {
                    Some(s) => writeln!(out, "{pad}- {s}").unwrap(),
                    None => {
                        writeln!(out, "{pad}-").unwrap();
                        render(x, indent + 1, out);
                    }
                }
            }
        }
        _ => writeln!(out, "{pad}{}", scalar(v).unwrap()).unwrap(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn text_mentions_every_leaf() {
        let data = json!({"a": 1, "b": {"c": [1, 2], "d": [{"e": "x"}, [3]]}, "f": null});
        let r = Report {
            outcome: Outcome::Success,
            data,
        };
        let t = r.to_text();
        assert_eq!(
            t,
            "a: 1\nb:\n  c: [1, 2]\n  d:\n    -\n      e: x\n    - [3]\nf: -\n"
        );
    }

    #[test]
    fn outcome_combination() {
        use Outcome::*;
        assert_eq!(Success.combine(Undecided), Undecided);
        assert_eq!(Undecided.combine(Fails), Fails);
        assert_eq!(Success.combine(Success).exit_code(), 0);
    }
}
