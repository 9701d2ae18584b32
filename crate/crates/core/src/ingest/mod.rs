//! Empirical joints from delimited tables.

mod format;
mod schema;

use std::collections::BTreeSet;
use std::path::Path;

pub use format::{format_joint, parse_joint, read_joint, write_joint};
pub use schema::{
    census_preset, Attribute, BinStrategy, Role, SchemaConfig, Transform, CENSUS_COLUMNS,
    CENSUS_EDUCATION,
};

use crate::dist::Joint;
use crate::error::{Error, Result};

/// What to do with rows that have missing or unparsable values in a used
/// column.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MissingPolicy {
    /// Drop and count the row.
    #[default]
    Lenient,
    /// Fail on the first such row.
    Strict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IssueKind {
    Missing { column: String },
    Unparsable { reason: String },
}

/// A dropped row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowIssue {
    /// 1-based line in the input file.
    pub line: u64,
    pub kind: IssueKind,
}

/// Joint of private and public symbols estimated by counting, with its
/// provenance.
///
/// Symbol dictionaries are the joint's row and column labels: a private
/// symbol is labelled `col=value|col=value` over the private attributes in
/// schema order, a public symbol likewise.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalJoint {
    pub joint: Joint<f64>,
    /// Rows counted.
    pub rows: usize,
    /// Rows dropped for missing or unparsable values.
    pub dropped: usize,
    /// Private alphabet size implied by the schema.
    pub declared_s: usize,
    /// Public alphabet size implied by the schema, before empty public
    /// symbols are removed.
    pub declared_x: usize,
    pub issues: Vec<RowIssue>,
}

impl EmpiricalJoint {
    /// Wraps a joint that did not come from a table.
    pub fn from_joint(joint: Joint<f64>) -> Self {
        Self {
            rows: 0,
            dropped: 0,
            declared_s: joint.rows(),
            declared_x: joint.cols(),
            issues: Vec::new(),
            joint,
        }
    }

    pub fn s_index(&self, label: &str) -> Option<usize> {
        self.joint.row_labels().iter().position(|l| l == label)
    }

    pub fn x_index(&self, label: &str) -> Option<usize> {
        self.joint.col_labels().iter().position(|l| l == label)
    }
}

enum Cell {
    Text(String),
    Number(f64),
}

/// Per-attribute category assignment built after the filtering pass.
struct Coder {
    categories: Vec<String>,
    kind: CoderKind,
}

enum CoderKind {
    Lookup,
    Map(std::collections::BTreeMap<String, String>),
    /// Inner edges; bin = number of edges `<= v`.
    Bins(Vec<f64>),
}

impl Coder {
    fn code(&self, cell: &Cell) -> usize {
        match (&self.kind, cell) {
            (CoderKind::Lookup, Cell::Text(v)) => self.index_of(v),
            (CoderKind::Map(table), Cell::Text(v)) => self.index_of(&table[v]),
            (CoderKind::Bins(edges), Cell::Number(v)) => edges.partition_point(|e| e <= v),
            _ => unreachable!("cell kind follows the transform"),
        }
    }

    fn index_of(&self, category: &str) -> usize {
        self.categories
            .binary_search_by(|c| c.as_str().cmp(category))
            .expect("category collected from the data or table")
    }
}

fn fmt_edge(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v}")
    }
}

fn bin_labels(edges: &[f64]) -> Vec<String> {
    let mut bounds = Vec::with_capacity(edges.len() + 2);
    bounds.push(f64::NEG_INFINITY);
    bounds.extend_from_slice(edges);
    bounds.push(f64::INFINITY);
    bounds
        .windows(2)
        .enumerate()
        .map(|(i, w)| format!("{i}:[{},{})", fmt_edge(w[0]), fmt_edge(w[1])))
        .collect()
}

fn data_edges(values: &mut [f64], k: usize, strategy: BinStrategy) -> Vec<f64> {
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let n = values.len();
    match strategy {
        BinStrategy::Quantile => (1..k).map(|j| values[j * n / k]).collect(),
        BinStrategy::Uniform => {
            let (lo, hi) = (values[0], values[n - 1]);
            (1..k)
                .map(|j| lo + (hi - lo) * j as f64 / k as f64)
                .collect()
        }
    }
}

fn build_coder(attr: &Attribute, column: usize, rows: &[Vec<Cell>]) -> Coder {
    match &attr.transform {
        Transform::Categorical => {
            let seen: BTreeSet<&str> = rows
                .iter()
                .map(|r| match &r[column] {
                    Cell::Text(v) => v.as_str(),
                    Cell::Number(_) => unreachable!(),
                })
                .collect();
            Coder {
                categories: seen.into_iter().map(String::from).collect(),
                kind: CoderKind::Lookup,
            }
        }
        Transform::CategoryMap { table } => {
            let levels: BTreeSet<&String> = table.values().collect();
            Coder {
                categories: levels.into_iter().cloned().collect(),
                kind: CoderKind::Map(table.clone()),
            }
        }
        Transform::NumericBins {
            bins,
            strategy,
            edges,
        } => {
            let edges = match edges {
                Some(e) => e.clone(),
                None => {
                    let mut values: Vec<f64> = rows
                        .iter()
                        .map(|r| match r[column] {
                            Cell::Number(v) => v,
                            Cell::Text(_) => unreachable!(),
                        })
                        .collect();
                    data_edges(&mut values, bins.expect("validated"), *strategy)
                }
            };
            Coder {
                categories: bin_labels(&edges),
                kind: CoderKind::Bins(edges),
            }
        }
    }
}

fn parse_cell(attr: &Attribute, raw: &str) -> std::result::Result<Cell, String> {
    match &attr.transform {
        Transform::Categorical => Ok(Cell::Text(raw.to_string())),
        Transform::CategoryMap { table } => {
            if table.contains_key(raw) {
                Ok(Cell::Text(raw.to_string()))
            } else {
                Err(format!("{}: value {raw:?} has no category", attr.column))
            }
        }
        Transform::NumericBins { .. } => match raw.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Cell::Number(v)),
            _ => Err(format!("{}: {raw:?} is not a finite number", attr.column)),
        },
    }
}

/// Mixed-radix index of a tuple of category codes, first attribute most
/// significant.
fn tuple_index(codes: impl Iterator<Item = (usize, usize)>) -> usize {
    codes.fold(0, |acc, (code, radix)| acc * radix + code)
}

fn tuple_labels(attrs: &[(&Attribute, &Coder)]) -> Vec<String> {
    let mut labels = vec![String::new()];
    for (i, (attr, coder)) in attrs.iter().enumerate() {
        let sep = if i == 0 { "" } else { "|" };
        labels = labels
            .iter()
            .flat_map(|prefix| {
                coder
                    .categories
                    .iter()
                    .map(move |c| format!("{prefix}{sep}{}={c}", attr.column))
            })
            .collect();
    }
    labels
}

/// Counts a delimited file into an empirical joint.
pub fn load_csv(
    path: impl AsRef<Path>,
    schema: &SchemaConfig,
    policy: MissingPolicy,
) -> Result<EmpiricalJoint> {
    let file = std::fs::File::open(path.as_ref())?;
    load_reader(file, schema, policy)
}

pub fn load_reader(
    input: impl std::io::Read,
    schema: &SchemaConfig,
    policy: MissingPolicy,
) -> Result<EmpiricalJoint> {
    schema.validate()?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(schema.delimiter_byte()?)
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut records = reader.records();

    let names: Vec<String> = if schema.header {
        let header = match records.next() {
            Some(r) => r?,
            None => return Err(Error::SchemaMismatch("input has no header row".into())),
        };
        let names: Vec<String> = header.iter().map(String::from).collect();
        if !schema.columns.is_empty() && names != schema.columns {
            return Err(Error::SchemaMismatch(format!(
                "header {names:?} does not match the declared columns {:?}",
                schema.columns
            )));
        }
        names
    } else {
        schema.columns.clone()
    };

    let used: Vec<&Attribute> = schema
        .attributes
        .iter()
        .filter(|a| a.role != Role::Ignored)
        .collect();
    let positions = used
        .iter()
        .map(|a| {
            names.iter().position(|n| *n == a.column).ok_or_else(|| {
                Error::SchemaMismatch(format!("column {:?} not found in the input", a.column))
            })
        })
        .collect::<Result<Vec<usize>>>()?;

    let mut kept: Vec<Vec<Cell>> = Vec::new();
    let mut issues = Vec::new();
    for record in records {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let mut cells = Vec::with_capacity(used.len());
        let mut issue = None;
        for (attr, &pos) in used.iter().zip(&positions) {
            let Some(raw) = record.get(pos) else {
                issue = Some(IssueKind::Unparsable {
                    reason: format!("{} fields, expected at least {}", record.len(), pos + 1),
                });
                break;
            };
            if schema.missing.iter().any(|m| m == raw) {
                issue = Some(IssueKind::Missing {
                    column: attr.column.clone(),
                });
                break;
            }
            match parse_cell(attr, raw) {
                Ok(c) => cells.push(c),
                Err(reason) => {
                    issue = Some(IssueKind::Unparsable { reason });
                    break;
                }
            }
        }
        match issue {
            None => kept.push(cells),
            Some(kind) => {
                if policy == MissingPolicy::Strict {
                    return Err(match kind {
                        IssueKind::Missing { column } => Error::UnparsableRow {
                            line,
                            reason: format!("missing value in column {column:?}"),
                        },
                        IssueKind::Unparsable { reason } => Error::UnparsableRow { line, reason },
                    });
                }
                issues.push(RowIssue { line, kind });
            }
        }
    }
    if kept.is_empty() {
        return Err(Error::EmptyAfterFiltering {
            dropped: issues.len(),
        });
    }

    let coders: Vec<Coder> = used
        .iter()
        .enumerate()
        .map(|(k, a)| build_coder(a, k, &kept))
        .collect();
    let private: Vec<usize> = (0..used.len())
        .filter(|&k| used[k].role.is_private())
        .collect();
    let public: Vec<usize> = (0..used.len())
        .filter(|&k| used[k].role.is_public())
        .collect();
    let radix = |idx: &[usize]| {
        idx.iter()
            .map(|&k| coders[k].categories.len())
            .product::<usize>()
    };
    let (ns, nx) = (radix(&private), radix(&public));

    let mut counts = vec![0u64; ns * nx];
    for row in &kept {
        let codes: Vec<usize> = coders
            .iter()
            .zip(row)
            .map(|(c, cell)| c.code(cell))
            .collect();
        let s = tuple_index(
            private
                .iter()
                .map(|&k| (codes[k], coders[k].categories.len())),
        );
        let x = tuple_index(
            public
                .iter()
                .map(|&k| (codes[k], coders[k].categories.len())),
        );
        counts[s * nx + x] += 1;
    }

    let pairs = |idx: &[usize]| {
        idx.iter()
            .map(|&k| (used[k], &coders[k]))
            .collect::<Vec<_>>()
    };
    let s_labels = tuple_labels(&pairs(&private));
    let x_labels = tuple_labels(&pairs(&public));

    let live: Vec<usize> = (0..nx)
        .filter(|&x| (0..ns).any(|s| counts[s * nx + x] > 0))
        .collect();
    let total = kept.len() as f64;
    let mut masses = Vec::with_capacity(ns * live.len());
    for s in 0..ns {
        masses.extend(live.iter().map(|&x| counts[s * nx + x] as f64 / total));
    }
    let joint = Joint::from_flat(
        ns,
        live.len(),
        masses,
        s_labels,
        live.iter().map(|&x| x_labels[x].clone()).collect(),
    )?;
    Ok(EmpiricalJoint {
        joint,
        rows: kept.len(),
        dropped: issues.len(),
        declared_s: ns,
        declared_x: nx,
        issues,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema(text: &str) -> SchemaConfig {
        SchemaConfig::from_toml(text).unwrap()
    }

    const BINARY: &str = r#"
        [[attribute]]
        column = "s"
        role = "private"
        [[attribute]]
        column = "x"
        role = "public"
    "#;

    #[test]
    fn toy_counts() {
        let e = load_reader(
            "s,x\n0,0\n1,1\n0,0\n1,1\n".as_bytes(),
            &schema(BINARY),
            MissingPolicy::Lenient,
        )
        .unwrap();
        assert_eq!(e.rows, 4);
        assert_eq!(e.joint.masses(), &[0.5, 0.0, 0.0, 0.5]);
        assert_eq!(e.joint.row_labels(), &["s=0", "s=1"]);
        assert_eq!(e.joint.col_labels(), &["x=0", "x=1"]);
    }

    #[test]
    fn unused_malformed_column_is_ignored() {
        let plain = load_reader(
            "s,x\n0,0\n1,1\n0,1\n".as_bytes(),
            &schema(BINARY),
            MissingPolicy::Strict,
        )
        .unwrap();
        let noisy = load_reader(
            "s,junk,x\n0,??,0\n1,,1\n0,\"a,b\",1\n".as_bytes(),
            &schema(BINARY),
            MissingPolicy::Strict,
        )
        .unwrap();
        assert_eq!(plain, noisy);
    }

    #[test]
    fn missing_rows_dropped_or_rejected() {
        let text = "s,x\n0,0\n?,1\n1,\n1,1\n";
        let e = load_reader(text.as_bytes(), &schema(BINARY), MissingPolicy::Lenient).unwrap();
        assert_eq!((e.rows, e.dropped), (2, 2));
        assert_eq!(e.issues[0].line, 3);
        assert_eq!(e.issues[1].line, 4);
        let err = load_reader(text.as_bytes(), &schema(BINARY), MissingPolicy::Strict).unwrap_err();
        assert!(matches!(err, Error::UnparsableRow { line: 3, .. }));
    }

    #[test]
    fn empty_after_filtering() {
        let err = load_reader(
            "s,x\n?,1\n".as_bytes(),
            &schema(BINARY),
            MissingPolicy::Lenient,
        )
        .unwrap_err();
        assert!(matches!(err, Error::EmptyAfterFiltering { dropped: 1 }));
    }

    #[test]
    fn header_must_name_attributes() {
        let err = load_reader(
            "a,b\n0,0\n".as_bytes(),
            &schema(BINARY),
            MissingPolicy::Lenient,
        )
        .unwrap_err();
        assert!(matches!(err, Error::SchemaMismatch(_)));
    }

    #[test]
    fn numeric_bins_and_unparsable() {
        let s = schema(
            r#"
            [[attribute]]
            column = "s"
            role = "private"
            [[attribute]]
            column = "v"
            role = "public"
            transform = { kind = "numeric-bins", bins = 2 }
            "#,
        );
        let e = load_reader(
            "s,v\na,1\na,2\nb,3\nb,4\nb,x\n".as_bytes(),
            &s,
            MissingPolicy::Lenient,
        )
        .unwrap();
        assert_eq!(e.dropped, 1);
        assert!(matches!(e.issues[0].kind, IssueKind::Unparsable { .. }));
        assert_eq!(e.joint.col_labels(), &["v=0:[-inf,3)", "v=1:[3,inf)"]);
        assert_eq!(e.joint.masses(), &[0.5, 0.0, 0.0, 0.5]);
    }

    #[test]
    fn shared_attribute_and_zero_stripping() {
        let s = schema(
            r#"
            [[attribute]]
            column = "a"
            role = "both"
            [[attribute]]
            column = "b"
            role = "public"
            "#,
        );
        let e = load_reader(
            "a,b\n0,0\n1,1\n1,0\n".as_bytes(),
            &s,
            MissingPolicy::Lenient,
        )
        .unwrap();
        assert_eq!(e.declared_s, 2);
        assert_eq!(e.declared_x, 4);
        assert_eq!(e.joint.col_labels(), &["a=0|b=0", "a=1|b=0", "a=1|b=1"]);
        for s in 0..2 {
            for x in 0..3 {
                let m = e.joint.mass(s, x);
                assert!((m * 3.0 - (m * 3.0).round()).abs() < 1e-6);
            }
        }
    }
}
