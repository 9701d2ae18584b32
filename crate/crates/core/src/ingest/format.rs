//! Text serialization of joints.
//!
//! ```text
//! # privacy-funnel joint
//! rows 4
//! dropped 0
//! declared 2 2
//! s 2
//! s=0
//! s=1
//! x 2
//! x=0
//! x=1
//! masses
//! 5.0000000000000000e-1 0.0000000000000000e0
//! 0.0000000000000000e0 5.0000000000000000e-1
//! ```
//!
//! `rows`, `dropped` and `declared` may be omitted. Labels are one per line.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::EmpiricalJoint;
use crate::dist::Joint;
use crate::error::{Error, Result};

const MAGIC: &str = "# privacy-funnel joint";

fn clean(label: &str) -> String {
    label.replace(['\n', '\r'], " ")
}

pub fn format_joint(e: &EmpiricalJoint) -> String {
    let j = &e.joint;
    let mut out = String::new();
    writeln!(out, "{MAGIC}").unwrap();
    writeln!(out, "rows {}", e.rows).unwrap();
    writeln!(out, "dropped {}", e.dropped).unwrap();
    writeln!(out, "declared {} {}", e.declared_s, e.declared_x).unwrap();
    writeln!(out, "s {}", j.rows()).unwrap();
    for l in j.row_labels() {
        writeln!(out, "{}", clean(l)).unwrap();
    }
    writeln!(out, "x {}", j.cols()).unwrap();
    for l in j.col_labels() {
        writeln!(out, "{}", clean(l)).unwrap();
    }
    writeln!(out, "masses").unwrap();
    for row in j.masses().chunks(j.cols()) {
        let cells: Vec<String> = row.iter().map(|m| format!("{m:.16e}")).collect();
        writeln!(out, "{}", cells.join(" ")).unwrap();
    }
    out
}

pub fn write_joint(path: impl AsRef<Path>, e: &EmpiricalJoint) -> Result<()> {
    std::fs::write(path, format_joint(e))?;
    Ok(())
}

pub fn read_joint(path: impl AsRef<Path>) -> Result<EmpiricalJoint> {
    let path = path.as_ref();
    parse_from(&std::fs::read_to_string(path)?, path)
}

pub fn parse_joint(text: &str) -> Result<EmpiricalJoint> {
    parse_from(text, Path::new("<input>"))
}

struct Cursor<'a> {
    lines: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    path: PathBuf,
    last: usize,
}

impl<'a> Cursor<'a> {
    fn fail<T>(&self, reason: impl Into<String>) -> Result<T> {
        Err(Error::Format {
            path: self.path.clone(),
            line: self.last,
            reason: reason.into(),
        })
    }

    fn next(&mut self) -> Result<&'a str> {
        match self.lines.next() {
            Some((i, l)) => {
                self.last = i + 1;
                Ok(l)
            }
            None => {
                self.last += 1;
                self.fail("unexpected end of input")
            }
        }
    }

    fn peek_key(&mut self) -> Option<&'a str> {
        self.lines
            .peek()
            .and_then(|(_, l)| l.split_whitespace().next())
    }

    /// `key v1 v2 ..` with exactly `n` unsigned values.
    fn keyed(&mut self, key: &str, n: usize) -> Result<Vec<usize>> {
        let line = self.next()?;
        let mut parts = line.split_whitespace();
        if parts.next() != Some(key) {
            return self.fail(format!("expected `{key}`"));
        }
        let values: Vec<&str> = parts.collect();
        if values.len() != n {
            return self.fail(format!("`{key}` takes {n} value(s)"));
        }
        values
            .iter()
            .map(|v| {
                v.parse::<usize>()
                    .or_else(|_| self.fail(format!("bad count {v:?}")))
            })
            .collect()
    }

    fn labels(&mut self, key: &str) -> Result<Vec<String>> {
        let n = self.keyed(key, 1)?[0];
        (0..n).map(|_| self.next().map(String::from)).collect()
    }
}

fn parse_from(text: &str, path: &Path) -> Result<EmpiricalJoint> {
    let mut c = Cursor {
        lines: text.lines().enumerate().peekable(),
        path: path.to_path_buf(),
        last: 0,
    };
    while c
        .lines
        .peek()
        .is_some_and(|(_, l)| l.starts_with('#') || l.trim().is_empty())
    {
        c.next()?;
    }
    let rows = match c.peek_key() {
        Some("rows") => Some(c.keyed("rows", 1)?[0]),
        _ => None,
    };
    let dropped = match c.peek_key() {
        Some("dropped") => Some(c.keyed("dropped", 1)?[0]),
        _ => None,
    };
    let declared = match c.peek_key() {
        Some("declared") => Some(c.keyed("declared", 2)?),
        _ => None,
    };
    let s_labels = c.labels("s")?;
    let x_labels = c.labels("x")?;
    c.keyed("masses", 0)?;
    let masses_line = c.last;
    let (ns, nx) = (s_labels.len(), x_labels.len());
    let mut masses = Vec::with_capacity(ns * nx);
    for _ in 0..ns {
        let line = c.next()?;
        let row: Vec<f64> = line
            .split_whitespace()
            .map(|v| {
                v.parse::<f64>()
                    .or_else(|_| c.fail(format!("bad mass {v:?}")))
            })
            .collect::<Result<_>>()?;
        if row.len() != nx {
            return c.fail(format!("expected {nx} masses, found {}", row.len()));
        }
        masses.extend(row);
    }
    if let Some((i, l)) = c.lines.find(|(_, l)| !l.trim().is_empty()) {
        c.last = i + 1;
        return c.fail(format!("trailing content {l:?}"));
    }
    let joint =
        Joint::from_flat(ns, nx, masses, s_labels, x_labels).map_err(|e| Error::Format {
            path: path.to_path_buf(),
            line: masses_line,
            reason: e.to_string(),
        })?;
    let declared = declared.unwrap_or_else(|| vec![joint.rows(), joint.cols()]);
    Ok(EmpiricalJoint {
        rows: rows.unwrap_or(0),
        dropped: dropped.unwrap_or(0),
        declared_s: declared[0],
        declared_x: declared[1],
        issues: Vec::new(),
        joint,
    })
}
