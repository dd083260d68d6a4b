use std::fmt::Display;
use std::io::{self, Write};

enum Entry {
    Field(String, String),
    Record(Vec<(String, String)>),
    Text(String),
    Check { name: String, passed: bool, detail: String },
}

/// Output assembled in order and written once, so parallel work never
/// changes its layout.
pub struct Report {
    machine: bool,
    entries: Vec<Entry>,
}

impl Report {
    pub fn new(machine: bool, command: &str) -> Self {
        let mut r = Report {
            machine,
            entries: Vec::new(),
        };
        r.field("command", command);
        r
    }

    pub fn field(&mut self, key: &str, value: impl Display) {
        self.entries.push(Entry::Field(key.to_string(), value.to_string()));
    }

    /// One row of a table; a single `key=value ...` line in machine mode.
    pub fn record(&mut self, fields: &[(&str, String)]) {
        self.entries.push(Entry::Record(
            fields.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        ));
    }

    /// Free text, dropped in machine mode.
    pub fn text(&mut self, s: impl Into<String>) {
        self.entries.push(Entry::Text(s.into()));
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.entries.push(Entry::Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.entries
            .iter()
            .all(|e| !matches!(e, Entry::Check { passed: false, .. }))
    }

    fn render_record(&self, fields: &[(String, String)]) -> String {
        if self.machine {
            fields.iter().map(|(k, v)| format!("{k}={}", machine_value(v))).collect::<Vec<_>>().join(" ")
        } else {
            fields.iter().map(|(_, v)| format!("{v:>12}")).collect::<Vec<_>>().join(" ")
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut last_header: Option<Vec<String>> = None;
        for e in &self.entries {
            match e {
                Entry::Field(k, v) if self.machine => out.push_str(&format!("{}={}\n", key(k), machine_value(v))),
                Entry::Field(k, v) => {
                    if v.contains('\n') {
                        out.push_str(&format!("{k}:\n{}\n", v.trim_end()));
                    } else {
                        out.push_str(&format!("{k}: {v}\n"));
                    }
                }
                Entry::Record(fields) => {
                    let header: Vec<String> = fields.iter().map(|(k, _)| k.clone()).collect();
                    if !self.machine && last_header.as_ref() != Some(&header) {
                        out.push_str(&header.iter().map(|h| format!("{h:>12}")).collect::<Vec<_>>().join(" "));
                        out.push('\n');
                        last_header = Some(header);
                    }
                    out.push_str(&self.render_record(fields));
                    out.push('\n');
                }
                Entry::Text(_) if self.machine => {}
                Entry::Text(t) => {
                    out.push_str(t.trim_end());
                    out.push('\n');
                }
                Entry::Check { name, passed, .. } if self.machine => {
                    let verdict = if *passed { "pass" } else { "fail" };
                    out.push_str(&format!("check.{}={verdict}\n", key(name)));
                }
                Entry::Check { name, passed, detail } => {
                    let verdict = if *passed { "PASS" } else { "FAIL" };
                    if detail.is_empty() {
                        out.push_str(&format!("{verdict} {name}\n"));
                    } else {
                        out.push_str(&format!("{verdict} {name}: {detail}\n"));
                    }
                }
            }
        }
        let status = if self.passed() { "ok" } else { "failed" };
        if self.machine {
            out.push_str(&format!("status={status}\n"));
        } else {
            out.push_str(&format!("status: {status}\n"));
        }
        out
    }

    pub fn emit(&self) -> io::Result<()> {
        let stdout = io::stdout();
        let mut lock = stdout.lock();
        lock.write_all(self.render().as_bytes())?;
        lock.flush()
    }
}

fn key(k: &str) -> String {
    k.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' { c.to_ascii_lowercase() } else { '_' })
        .collect()
}

/// Values stay on one line; multi-line values are joined with `|`.
fn machine_value(v: &str) -> String {
    v.trim_end().replace('\n', "|")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn machine_keys_are_normalized() {
        let mut r = Report::new(true, "x");
        r.field("Boundary genus", 3);
        r.check("angle in (0deg, 60deg)", true, "");
        let s = r.render();
        assert!(s.contains("boundary_genus=3\n"));
        assert!(s.contains("check.angle_in__0deg__60deg_=pass\n"));
        assert!(s.ends_with("status=ok\n"));
    }

    #[test]
    fn failed_check_sets_status() {
        let mut r = Report::new(false, "x");
        r.check("a", false, "expected 1, observed 2");
        assert!(!r.passed());
        assert!(r.render().contains("FAIL a: expected 1, observed 2\n"));
    }
}
