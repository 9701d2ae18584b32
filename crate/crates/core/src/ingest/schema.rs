use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How a column takes part in the joint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Private,
    Public,
    /// Part of both the private and the public tuple.
    Both,
    Ignored,
}

impl Role {
    pub fn is_private(self) -> bool {
        matches!(self, Role::Private | Role::Both)
    }

    pub fn is_public(self) -> bool {
        matches!(self, Role::Public | Role::Both)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BinStrategy {
    /// Edges at the `j/k` empirical quantiles of the loaded column.
    #[default]
    Quantile,
    /// `k` equal-width bins between the column minimum and maximum.
    Uniform,
}

/// Maps raw cell text to a category.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Transform {
    /// Every distinct value is its own category.
    #[default]
    Categorical,
    /// Left-closed numeric bins. Explicit `edges` take precedence over
    /// `bins`/`strategy`.
    NumericBins {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bins: Option<usize>,
        #[serde(default)]
        strategy: BinStrategy,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        edges: Option<Vec<f64>>,
    },
    /// Lookup table from raw value to category; unmapped values are errors.
    CategoryMap { table: BTreeMap<String, String> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Attribute {
    pub column: String,
    pub role: Role,
    #[serde(default)]
    pub transform: Transform,
}

fn default_delimiter() -> String {
    ",".into()
}

fn default_header() -> bool {
    true
}

fn default_missing() -> Vec<String> {
    vec!["?".into(), String::new()]
}

/// Which columns of a delimited file form the private and public tuples,
/// and how each is discretized.
///
/// Private symbols are tuples of the private attributes in declaration
/// order, public symbols likewise; columns not listed are ignored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemaConfig {
    #[serde(default = "default_delimiter")]
    pub delimiter: String,
    /// Whether the first row holds column names.
    #[serde(default = "default_header")]
    pub header: bool,
    /// Column names; required when the file has no header row.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub columns: Vec<String>,
    /// Cell values treated as missing.
    #[serde(default = "default_missing")]
    pub missing: Vec<String>,
    #[serde(rename = "attribute")]
    pub attributes: Vec<Attribute>,
}

impl SchemaConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let schema: Self = toml::from_str(text)?;
        schema.validate()?;
        Ok(schema)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn delimiter_byte(&self) -> Result<u8> {
        match self.delimiter.as_bytes() {
            [b] => Ok(*b),
            _ => Err(Error::SchemaMismatch(format!(
                "delimiter must be a single byte, got {:?}",
                self.delimiter
            ))),
        }
    }

    pub fn private_attributes(&self) -> impl Iterator<Item = &Attribute> {
        self.attributes.iter().filter(|a| a.role.is_private())
    }

    pub fn public_attributes(&self) -> impl Iterator<Item = &Attribute> {
        self.attributes.iter().filter(|a| a.role.is_public())
    }

    pub fn validate(&self) -> Result<()> {
        self.delimiter_byte()?;
        if !self.header && self.columns.is_empty() {
            return Err(Error::SchemaMismatch(
                "files without a header row need an explicit column list".into(),
            ));
        }
        if self.private_attributes().next().is_none() {
            return Err(Error::SchemaMismatch(
                "no private attribute declared".into(),
            ));
        }
        if self.public_attributes().next().is_none() {
            return Err(Error::SchemaMismatch("no public attribute declared".into()));
        }
        let mut seen = BTreeSet::new();
        for a in &self.attributes {
            if !seen.insert(a.column.as_str()) {
                return Err(Error::SchemaMismatch(format!(
                    "column {:?} declared twice",
                    a.column
                )));
            }
            if !self.columns.is_empty() && !self.columns.contains(&a.column) {
                return Err(Error::SchemaMismatch(format!(
                    "attribute {:?} is not among the declared columns",
                    a.column
                )));
            }
            if let Transform::NumericBins { bins, edges, .. } = &a.transform {
                match edges {
                    Some(e) => {
                        if e.is_empty()
                            || e.windows(2)
                                .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
                        {
                            return Err(Error::SchemaMismatch(format!(
                                "{:?}: bin edges must be non-empty and strictly increasing",
                                a.column
                            )));
                        }
                    }
                    None => match bins {
                        Some(k) if *k >= 2 => {}
                        _ => {
                            return Err(Error::SchemaMismatch(format!(
                                "{:?}: numeric bins need k >= 2",
                                a.column
                            )))
                        }
                    },
                }
            }
            if let Transform::CategoryMap { table } = &a.transform {
                if table.is_empty() {
                    return Err(Error::SchemaMismatch(format!(
                        "{:?}: empty category map",
                        a.column
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("schema serializes")
    }
}

/// Column layout of the 1994 census income extract (`adult.data`).
pub const CENSUS_COLUMNS: [&str; 15] = [
    "age",
    "workclass",
    "fnlwgt",
    "education",
    "education-num",
    "marital-status",
    "occupation",
    "relationship",
    "race",
    "sex",
    "capital-gain",
    "capital-loss",
    "hours-per-week",
    "native-country",
    "income",
];

/// Education grades grouped into four levels.
pub const CENSUS_EDUCATION: [(&str, &str); 16] = [
    ("Preschool", "1-no-diploma"),
    ("1st-4th", "1-no-diploma"),
    ("5th-6th", "1-no-diploma"),
    ("7th-8th", "1-no-diploma"),
    ("9th", "1-no-diploma"),
    ("10th", "1-no-diploma"),
    ("11th", "1-no-diploma"),
    ("12th", "1-no-diploma"),
    ("HS-grad", "2-hs-grad"),
    ("Some-college", "3-some-college"),
    ("Assoc-acdm", "3-some-college"),
    ("Assoc-voc", "3-some-college"),
    ("Bachelors", "4-bachelors-plus"),
    ("Masters", "4-bachelors-plus"),
    ("Prof-school", "4-bachelors-plus"),
    ("Doctorate", "4-bachelors-plus"),
];

/// Private `(age, income)`, public `(age, sex, education)`.
///
/// Age falls into seven quantile bins, education into four levels and
/// income into the two bracket labels (the test split's trailing period is
/// folded away).
pub fn census_preset() -> SchemaConfig {
    let income = [
        ("<=50K", "<=50K"),
        ("<=50K.", "<=50K"),
        (">50K", ">50K"),
        (">50K.", ">50K"),
    ];
    let table = |pairs: &[(&str, &str)]| {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect::<BTreeMap<_, _>>()
    };
    SchemaConfig {
        delimiter: ",".into(),
        header: false,
        columns: CENSUS_COLUMNS.iter().map(|c| c.to_string()).collect(),
        missing: default_missing(),
        attributes: vec![
            Attribute {
                column: "age".into(),
                role: Role::Both,
                transform: Transform::NumericBins {
                    bins: Some(7),
                    strategy: BinStrategy::Quantile,
                    edges: None,
                },
            },
            Attribute {
                column: "income".into(),
                role: Role::Private,
                transform: Transform::CategoryMap {
                    table: table(&income),
                },
            },
            Attribute {
                column: "sex".into(),
                role: Role::Public,
                transform: Transform::Categorical,
            },
            Attribute {
                column: "education".into(),
                role: Role::Public,
                transform: Transform::CategoryMap {
                    table: table(&CENSUS_EDUCATION),
                },
            },
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn census_preset_shape() {
        let s = census_preset();
        s.validate().unwrap();
        assert_eq!(s.private_attributes().count(), 2);
        assert_eq!(s.public_attributes().count(), 3);
        let age = &s.attributes[0];
        assert!(age.role.is_private() && age.role.is_public());
        assert!(matches!(
            age.transform,
            Transform::NumericBins { bins: Some(7), .. }
        ));
        let Transform::CategoryMap { table } = &s.attributes[3].transform else {
            panic!("education is a category map");
        };
        let levels: BTreeSet<&String> = table.values().collect();
        assert_eq!(levels.len(), 4);
    }

    #[test]
    fn preset_round_trips_through_toml() {
        let s = census_preset();
        assert_eq!(SchemaConfig::from_toml(&s.to_toml()).unwrap(), s);
    }

    #[test]
    fn validation_errors() {
        let mut s = census_preset();
        s.attributes.retain(|a| a.role == Role::Public);
        assert!(matches!(s.validate(), Err(Error::SchemaMismatch(_))));

        let mut s = census_preset();
        s.attributes[0].transform = Transform::NumericBins {
            bins: Some(1),
            strategy: BinStrategy::Uniform,
            edges: None,
        };
        assert!(s.validate().is_err());

        let mut s = census_preset();
        s.columns.clear();
        assert!(s.validate().is_err());

        let mut s = census_preset();
        s.delimiter = ";;".into();
        assert!(s.validate().is_err());
    }

    #[test]
    fn parses_handwritten_schema() {
        let s = SchemaConfig::from_toml(
            r#"
            [[attribute]]
            column = "s"
            role = "private"

            [[attribute]]
            column = "x"
            role = "public"
            transform = { kind = "numeric-bins", edges = [10.0, 20.0] }
            "#,
        )
        .unwrap();
        assert!(s.header);
        assert_eq!(s.delimiter, ",");
        assert_eq!(s.missing, vec!["?".to_string(), String::new()]);
        assert_eq!(s.attributes[0].transform, Transform::Categorical);
    }
}
