//! Command output: key/value fields and verbatim text, printed either for
//! people (`plain`) or for scripts (`machine`).

use std::fmt::Write as _;

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Machine,
}

/// Whether the queried property holds. Maps to exit codes 0 and 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
}

#[derive(Debug, Clone)]
enum Entry {
    Field(String, String),
    Text(String),
}

#[derive(Debug, Clone)]
pub struct Report {
    pub status: Status,
    entries: Vec<Entry>,
}

impl Default for Report {
    fn default() -> Self {
        Report::new()
    }
}

impl Report {
    pub fn new() -> Self {
        Report {
            status: Status::Holds,
            entries: Vec::new(),
        }
    }

    pub fn field(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries.push(Entry::Field(key.to_string(), value.to_string()));
        self
    }

    /// Multi-line text such as a structure file. In machine format each
    /// line becomes a `line=` field.
    pub fn text(&mut self, text: impl Into<String>) -> &mut Self {
        self.entries.push(Entry::Text(text.into()));
        self
    }

    pub fn fail(&mut self) -> &mut Self {
        self.status = Status::Fails;
        self
    }

    /// Marks the report failed unless `ok`.
    pub fn require(&mut self, ok: bool) -> &mut Self {
        if !ok {
            self.status = Status::Fails;
        }
        self
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        for e in &self.entries {
            match (e, format) {
                (Entry::Field(k, v), Format::Plain) => {
                    let _ = writeln!(out, "{k}: {v}");
                }
                (Entry::Field(k, v), Format::Machine) => {
                    let _ = writeln!(out, "{k}={}", v.replace('\n', "\\n"));
                }
                (Entry::Text(t), Format::Plain) => {
                    out.push_str(t);
                    if !t.ends_with('\n') {
                        out.push('\n');
                    }
                }
                (Entry::Text(t), Format::Machine) => {
                    for line in t.lines() {
                        let _ = writeln!(out, "line={line}");
                    }
                }
            }
        }
        if format == Format::Machine {
            let status = match self.status {
                Status::Holds => "holds",
                Status::Fails => "fails",
            };
            let _ = writeln!(out, "status={status}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        let mut r = Report::new();
        r.field("class", "ortholattice").text("a\nb\n").fail();
        assert_eq!(r.render(Format::Plain), "class: ortholattice\na\nb\n");
        assert_eq!(r.render(Format::Machine), "class=ortholattice\nline=a\nline=b\nstatus=fails\n");
    }
}
