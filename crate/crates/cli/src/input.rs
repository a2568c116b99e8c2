//! Reading datasets, weights and group specifications from the command line.

use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use infocus_core::geometry::{FeatureMatrix, WeightDistribution};
use infocus_core::ingest::{
    impute_group_mean, load_csv, parse_votes, read_weights, resolve_group, CsvSchema, GroupSpec,
    LabelColumn,
};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::render::object;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    /// UCI house-votes-84 records; missing votes get the party-by-issue mean.
    UciVotes,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Data file, or `-` for standard input.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// First CSV row holds column names.
    #[arg(long)]
    pub header: bool,
    #[arg(long, default_value = ",")]
    pub delimiter: char,
    /// CSV column holding labels: a zero-based index, or a name when `--header` is set.
    #[arg(long)]
    pub label_column: Option<String>,
    /// Context weights, one per individual. Uniform when omitted.
    #[arg(long)]
    pub weights: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(multiple = false)]
pub struct GroupArgs {
    /// Group = every individual carrying this label.
    #[arg(long)]
    pub group_label: Option<String>,
    /// Group = uniform weight on these zero-based indices.
    #[arg(long, value_delimiter = ',')]
    pub group_indices: Option<Vec<usize>>,
    /// Group weights file, one per individual.
    #[arg(long)]
    pub group_weights: Option<PathBuf>,
}

pub struct Dataset {
    pub features: FeatureMatrix,
    pub labels: Option<Vec<String>>,
    pub context: WeightDistribution,
    pub group: Option<WeightDistribution>,
    checksums: Vec<(String, String)>,
}

impl Dataset {
    pub fn n(&self) -> usize {
        self.features.nrows()
    }

    pub fn p(&self) -> usize {
        self.features.ncols()
    }

    pub fn require_group(&self) -> Result<&WeightDistribution, CliError> {
        self.group.as_ref().ok_or_else(|| {
            CliError::Usage(
                "a group is required: --group-label, --group-indices or --group-weights".into(),
            )
        })
    }

    /// `{role: {source, sha256}}` for every file read.
    pub fn inputs(&self) -> Value {
        let mut map = serde_json::Map::new();
        for (role, digest) in &self.checksums {
            map.insert(
                role.clone(),
                object([("sha256", Value::String(digest.clone()))]),
            );
        }
        Value::Object(map)
    }
}

fn read_source(path: &PathBuf) -> Result<Vec<u8>, CliError> {
    let bytes = if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf)?;
        buf
    } else {
        fs::read(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
    };
    Ok(bytes)
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read_weight_file(
    path: &PathBuf,
    role: &str,
    checksums: &mut Vec<(String, String)>,
) -> Result<Vec<f64>, CliError> {
    let bytes = read_source(path)?;
    checksums.push((role.into(), digest(&bytes)));
    Ok(read_weights(bytes.as_slice())?)
}

pub fn load(data: &DataArgs, group: Option<&GroupArgs>) -> Result<Dataset, CliError> {
    let bytes = read_source(&data.data)?;
    let mut checksums = vec![("data".to_string(), digest(&bytes))];

    let (features, labels) = match data.format {
        Format::UciVotes => {
            let votes = impute_group_mean(&parse_votes(bytes.as_slice())?)?;
            (votes.imputed()?.clone(), Some(votes.label_strings()))
        }
        Format::Csv => {
            if !data.delimiter.is_ascii() {
                return Err(CliError::Usage(
                    "the delimiter must be an ASCII character".into(),
                ));
            }
            let label_column = data
                .label_column
                .as_ref()
                .map(|c| match c.parse::<usize>() {
                    Ok(i) => LabelColumn::Index(i),
                    Err(_) => LabelColumn::Name(c.clone()),
                });
            let schema = CsvSchema {
                delimiter: data.delimiter as u8,
                has_header: data.header,
                label_column,
            };
            let loaded = load_csv(bytes.as_slice(), &schema)?;
            (loaded.features, loaded.labels)
        }
    };
    let n = features.nrows();

    let context = match &data.weights {
        Some(path) => {
            let w = read_weight_file(path, "weights", &mut checksums)?;
            if w.len() != n {
                return Err(CliError::Usage(format!(
                    "{} context weights for {n} individuals",
                    w.len()
                )));
            }
            WeightDistribution::from_unnormalized(w)?
        }
        None => WeightDistribution::uniform(n)?,
    };

    let spec = match group {
        Some(GroupArgs {
            group_label: Some(l),
            ..
        }) => Some(GroupSpec::Label(l.clone())),
        Some(GroupArgs {
            group_indices: Some(i),
            ..
        }) => Some(GroupSpec::Indices(i.clone())),
        Some(GroupArgs {
            group_weights: Some(path),
            ..
        }) => Some(GroupSpec::Weights(read_weight_file(
            path,
            "group_weights",
            &mut checksums,
        )?)),
        _ => None,
    };
    let group = spec
        .map(|s| resolve_group(&s, n, labels.as_deref()))
        .transpose()?;

    Ok(Dataset {
        features,
        labels,
        context,
        group,
        checksums,
    })
}
