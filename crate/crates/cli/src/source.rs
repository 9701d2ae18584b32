use std::path::PathBuf;

use clap::{Args, ValueEnum};
use privacy_funnel::ingest::{format_joint, read_joint};
use privacy_funnel::{census_preset, load_csv, EmpiricalJoint, MissingPolicy, SchemaConfig};
use sha2::{Digest, Sha256};

use crate::Failure;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Preset {
    Census,
}

/// Where the joint distribution comes from.
#[derive(Args, Debug, Clone)]
pub struct JointSource {
    /// Serialized joint (as written by `ingest`).
    #[arg(long, value_name = "PATH", conflicts_with_all = ["csv", "schema", "preset"], required_unless_present = "csv")]
    pub joint: Option<PathBuf>,
    /// Delimited table; needs `--schema` or `--preset`.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Schema file describing roles and transforms of the table's columns.
    #[arg(long, value_name = "PATH", requires = "csv", conflicts_with = "preset", required_unless_present_any = ["joint", "preset"])]
    pub schema: Option<PathBuf>,
    /// Built-in schema instead of `--schema`.
    #[arg(long, value_enum, requires = "csv")]
    pub preset: Option<Preset>,
    /// Fail on rows with missing or unparsable values instead of dropping them.
    #[arg(long)]
    pub strict_missing: bool,
}

pub struct Loaded {
    pub data: EmpiricalJoint,
    /// Serialized joint, the basis of the input digest.
    pub serialized: String,
    pub digest: String,
}

impl JointSource {
    pub fn load(&self) -> Result<Loaded, Failure> {
        let data = match (&self.joint, &self.csv) {
            (Some(path), _) => read_joint(path)?,
            (None, Some(csv)) => {
                let schema = match (&self.schema, self.preset) {
                    (Some(path), _) => SchemaConfig::from_path(path)?,
                    (None, Some(Preset::Census)) => census_preset(),
                    (None, None) => return Err(Failure::usage("--csv needs --schema or --preset")),
                };
                let policy = if self.strict_missing {
                    MissingPolicy::Strict
                } else {
                    MissingPolicy::Lenient
                };
                load_csv(csv, &schema, policy)?
            }
            (None, None) => return Err(Failure::usage("give --joint or --csv")),
        };
        let serialized = format_joint(&data);
        let digest = format!(
            "sha256:{}",
            hex::encode(Sha256::digest(serialized.as_bytes()))
        );
        Ok(Loaded {
            data,
            serialized,
            digest,
        })
    }

    pub fn describe(&self) -> serde_json::Value {
        serde_json::json!({
            "joint": self.joint,
            "csv": self.csv,
            "schema": self.schema,
            "preset": self.preset.map(|_| "census"),
            "strict_missing": self.strict_missing,
        })
    }
}
