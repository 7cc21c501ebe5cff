//! Key-value reports, rendered either for reading or for diffing.

use std::fmt::Write as _;

use clap::ValueEnum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Indented blocks under a title.
    Text,
    /// One `key: value` per line, no decoration.
    Structured,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Text => "text",
            Format::Structured => "structured",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    title: String,
    entries: Vec<(String, String)>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.entries.push((key.into(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Text => {
                let _ = writeln!(out, "{}", self.title);
                let width = self.entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in &self.entries {
                    let _ = writeln!(out, "  {k:<width$} : {v}");
                }
            }
            Format::Structured => {
                let _ = writeln!(out, "report: {}", self.title);
                for (k, v) in &self.entries {
                    let _ = writeln!(out, "{k}: {v}");
                }
            }
        }
        out
    }
}

/// Comma-separated list, or `none`.
pub fn list<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    let v: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    if v.is_empty() {
        "none".into()
    } else {
        v.join(", ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_formats() {
        let mut r = Report::new("bernoulli");
        r.push("n", 12).push("value", "-691/2730");
        assert_eq!(
            r.render(Format::Structured),
            "report: bernoulli\nn: 12\nvalue: -691/2730\n"
        );
        assert_eq!(
            r.render(Format::Text),
            "bernoulli\n  n     : 12\n  value : -691/2730\n"
        );
        assert_eq!(list(Vec::<u64>::new()), "none");
    }
}
