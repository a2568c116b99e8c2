//! Data loading: the UCI house-votes-84 records, group-mean imputation,
//! generic numeric CSV files, and group selection.

use std::io::{BufRead, BufReader, Read, Write};

use crate::error::{Error, Result};
use crate::geometry::{FeatureMatrix, WeightDistribution};

/// Key votes per record in house-votes-84.
pub const VOTE_FIELDS: usize = 16;

/// Census of the canonical house-votes-84 file.
pub const CANONICAL_RECORDS: usize = 435;
pub const CANONICAL_REPUBLICANS: usize = 168;
pub const CANONICAL_DEMOCRATS: usize = 267;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Party {
    Democrat,
    Republican,
}

impl Party {
    pub fn as_str(self) -> &'static str {
        match self {
            Party::Democrat => "democrat",
            Party::Republican => "republican",
        }
    }

    pub const ALL: [Party; 2] = [Party::Democrat, Party::Republican];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vote {
    Yea,
    Nay,
    Missing,
}

impl Vote {
    fn parse(token: &str) -> Option<Self> {
        match token {
            "y" => Some(Vote::Yea),
            "n" => Some(Vote::Nay),
            "?" => Some(Vote::Missing),
            _ => None,
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Vote::Yea => Some(1.0),
            Vote::Nay => Some(0.0),
            Vote::Missing => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Census {
    pub records: usize,
    pub republicans: usize,
    pub democrats: usize,
}

/// Parsed voting records, in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct VotingDataset {
    labels: Vec<Party>,
    votes: Vec<[Vote; VOTE_FIELDS]>,
    imputed: Option<FeatureMatrix>,
}

impl VotingDataset {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Party] {
        &self.labels
    }

    pub fn label_strings(&self) -> Vec<String> {
        self.labels.iter().map(|p| p.as_str().to_owned()).collect()
    }

    pub fn votes(&self) -> &[[Vote; VOTE_FIELDS]] {
        &self.votes
    }

    pub fn missing_count(&self) -> usize {
        self.votes
            .iter()
            .flatten()
            .filter(|v| **v == Vote::Missing)
            .count()
    }

    pub fn census(&self) -> Census {
        let republicans = self
            .labels
            .iter()
            .filter(|&&p| p == Party::Republican)
            .count();
        Census {
            records: self.len(),
            republicans,
            democrats: self.len() - republicans,
        }
    }

    /// Checks the record and party counts of the canonical file.
    pub fn validate_canonical_census(&self) -> Result<()> {
        let c = self.census();
        let expected = Census {
            records: CANONICAL_RECORDS,
            republicans: CANONICAL_REPUBLICANS,
            democrats: CANONICAL_DEMOCRATS,
        };
        if c != expected {
            return Err(Error::InvalidInput(format!(
                "census {c:?} does not match the canonical {expected:?}"
            )));
        }
        Ok(())
    }

    /// The imputed feature matrix; fails before [`impute_group_mean`] or on an
    /// empty dataset.
    pub fn imputed(&self) -> Result<&FeatureMatrix> {
        if self.is_empty() {
            return Err(Error::InvalidInput("dataset has no records".into()));
        }
        self.imputed
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("missing votes have not been imputed".into()))
    }

    /// Indices of the records belonging to `party`.
    pub fn members(&self, party: Party) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &p)| p == party)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Reads `<party>,<v1>,...,<v16>` records with votes in `{y, n, ?}`.
///
/// Blank lines are skipped; LF and CRLF endings are accepted.
pub fn parse_votes<R: Read>(source: R) -> Result<VotingDataset> {
    let mut labels = Vec::new();
    let mut votes = Vec::new();
    for (index, line) in BufReader::new(source).lines().enumerate() {
        let line_no = index + 1;
        let line = line?;
        let line = line.trim_end_matches('\r').trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != VOTE_FIELDS + 1 {
            return Err(Error::Parse {
                line: line_no,
                message: format!(
                    "expected {} fields, found {}",
                    VOTE_FIELDS + 1,
                    fields.len()
                ),
            });
        }
        let party = match fields[0] {
            "republican" => Party::Republican,
            "democrat" => Party::Democrat,
            other => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unknown party {other:?}"),
                })
            }
        };
        let mut record = [Vote::Missing; VOTE_FIELDS];
        for (k, token) in fields[1..].iter().enumerate() {
            record[k] = Vote::parse(token).ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("vote {} has unknown token {token:?}", k + 1),
            })?;
        }
        labels.push(party);
        votes.push(record);
    }
    Ok(VotingDataset {
        labels,
        votes,
        imputed: None,
    })
}

/// Replaces each missing vote by the mean of the non-missing votes cast on the
/// same issue by members of the same party.
///
/// Each mean is `yeas / non_missing`, a single correctly rounded division.
pub fn impute_group_mean(dataset: &VotingDataset) -> Result<VotingDataset> {
    if dataset.is_empty() {
        return Err(Error::InvalidInput("dataset has no records".into()));
    }
    let mut means = [[0.0; VOTE_FIELDS]; 2];
    for (slot, party) in Party::ALL.into_iter().enumerate() {
        let members = dataset.members(party);
        if members.is_empty() {
            continue;
        }
        for (k, mean) in means[slot].iter_mut().enumerate() {
            let cast: Vec<f64> = members
                .iter()
                .filter_map(|&i| dataset.votes[i][k].value())
                .collect();
            if cast.is_empty() {
                return Err(Error::InvalidInput(format!(
                    "every {} vote on issue {} is missing",
                    party.as_str(),
                    k + 1
                )));
            }
            let yeas = cast.iter().filter(|&&v| v == 1.0).count();
            *mean = yeas as f64 / cast.len() as f64;
        }
    }
    let mut values = Vec::with_capacity(dataset.len() * VOTE_FIELDS);
    for (record, party) in dataset.votes.iter().zip(&dataset.labels) {
        let slot = Party::ALL.iter().position(|p| p == party).unwrap_or(0);
        for (k, vote) in record.iter().enumerate() {
            values.push(vote.value().unwrap_or(means[slot][k]));
        }
    }
    Ok(VotingDataset {
        labels: dataset.labels.clone(),
        votes: dataset.votes.clone(),
        imputed: Some(FeatureMatrix::new(dataset.len(), VOTE_FIELDS, values)?),
    })
}

/// Which column of a CSV file carries labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    Index(usize),
    Name(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvSchema {
    pub delimiter: u8,
    pub has_header: bool,
    pub label_column: Option<LabelColumn>,
}

impl Default for CsvSchema {
    fn default() -> Self {
        Self {
            delimiter: b',',
            has_header: false,
            label_column: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledFeatures {
    pub features: FeatureMatrix,
    pub labels: Option<Vec<String>>,
    /// Names of the feature columns when the file has a header.
    pub feature_names: Option<Vec<String>>,
}

/// Loads a rectangular numeric CSV file. Non-finite cells are rejected.
pub fn load_csv<R: Read>(source: R, schema: &CsvSchema) -> Result<LabeledFeatures> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(schema.delimiter)
        .has_headers(schema.has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);

    let header: Option<Vec<String>> = if schema.has_header {
        let h = reader.headers().map_err(|e| csv_error(e, 1))?;
        Some(h.iter().map(str::to_owned).collect())
    } else {
        None
    };

    let label_index = match (&schema.label_column, &header) {
        (None, _) => None,
        (Some(LabelColumn::Index(i)), _) => Some(*i),
        (Some(LabelColumn::Name(name)), Some(h)) => Some(
            h.iter()
                .position(|c| c == name)
                .ok_or_else(|| Error::InvalidInput(format!("no column named {name:?}")))?,
        ),
        (Some(LabelColumn::Name(name)), None) => {
            return Err(Error::InvalidInput(format!(
                "label column {name:?} given by name but the file has no header"
            )))
        }
    };

    let first_data_line = if schema.has_header { 2 } else { 1 };
    let mut width = None;
    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut rows = 0;
    for (r, record) in reader.records().enumerate() {
        let line = record
            .as_ref()
            .ok()
            .and_then(|rec| rec.position().map(|p| p.line() as usize))
            .unwrap_or(first_data_line + r);
        let record = record.map_err(|e| csv_error(e, line))?;
        if record.len() == 1 && record.get(0) == Some("") {
            continue;
        }
        match width {
            None => width = Some(record.len()),
            Some(w) if w != record.len() => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected {w} columns, found {}", record.len()),
                })
            }
            _ => {}
        }
        if let Some(li) = label_index {
            if li >= record.len() {
                return Err(Error::Parse {
                    line,
                    message: format!("label column {li} out of range"),
                });
            }
        }
        for (c, cell) in record.iter().enumerate() {
            if Some(c) == label_index {
                labels.push(cell.to_owned());
                continue;
            }
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                line,
                message: format!("column {}: {cell:?} is not a number", c + 1),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    message: format!("column {}: non-finite value {cell:?}", c + 1),
                });
            }
            values.push(v);
        }
        rows += 1;
    }
    let width = width.ok_or_else(|| Error::InvalidInput("CSV file has no data rows".into()))?;
    let cols = width - usize::from(label_index.is_some());
    let feature_names = header.map(|h| {
        h.into_iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != label_index)
            .map(|(_, name)| name)
            .collect()
    });
    Ok(LabeledFeatures {
        features: FeatureMatrix::new(rows, cols, values)?,
        labels: label_index.map(|_| labels),
        feature_names,
    })
}

fn csv_error(e: csv::Error, line: usize) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(line);
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

/// Writes features (and optional leading labels) as CSV with round-trip
/// float formatting.
pub fn write_csv<W: Write>(
    mut out: W,
    features: &FeatureMatrix,
    labels: Option<&[String]>,
) -> Result<()> {
    for (i, row) in features.rows().enumerate() {
        let mut cells: Vec<String> = Vec::with_capacity(row.len() + 1);
        if let Some(l) = labels {
            cells.push(l[i].clone());
        }
        cells.extend(row.iter().map(|v| format!("{v:?}")));
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

/// How a group is selected from the individuals.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupSpec {
    /// Uniform over records whose label equals the given value.
    Label(String),
    /// Uniform over the listed (zero-based) indices.
    Indices(Vec<usize>),
    /// Explicit nonnegative weights, normalized to sum to one.
    Weights(Vec<f64>),
}

pub fn resolve_group(
    spec: &GroupSpec,
    n: usize,
    labels: Option<&[String]>,
) -> Result<WeightDistribution> {
    match spec {
        GroupSpec::Label(label) => {
            let labels = labels.ok_or_else(|| {
                Error::InvalidInput("group selected by label but the data have no labels".into())
            })?;
            if labels.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: labels.len(),
                });
            }
            let members: Vec<usize> = labels
                .iter()
                .enumerate()
                .filter(|(_, l)| *l == label)
                .map(|(i, _)| i)
                .collect();
            if members.is_empty() {
                return Err(Error::InvalidInput(format!(
                    "no individual labelled {label:?}"
                )));
            }
            WeightDistribution::indicator(n, &members)
        }
        GroupSpec::Indices(indices) => WeightDistribution::indicator(n, indices),
        GroupSpec::Weights(weights) => {
            if weights.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: weights.len(),
                });
            }
            WeightDistribution::from_unnormalized(weights.clone())
        }
    }
}

/// Reads whitespace-, comma- or newline-separated weights.
pub fn read_weights<R: Read>(mut source: R) -> Result<Vec<f64>> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    let mut weights = Vec::new();
    for (index, line) in text.lines().enumerate() {
        for token in line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let w: f64 = token.parse().map_err(|_| Error::Parse {
                line: index + 1,
                message: format!("{token:?} is not a number"),
            })?;
            if !w.is_finite() || w < 0.0 {
                return Err(Error::Parse {
                    line: index + 1,
                    message: format!("weight {token} must be finite and nonnegative"),
                });
            }
            weights.push(w);
        }
    }
    Ok(weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "republican,n,y,n,y,y,y,n,n,n,y,?,y,y,y,n,y\n\
                          republican,n,y,n,y,y,y,n,n,n,n,n,y,y,y,n,?\r\n\
                          democrat,?,y,y,?,y,y,n,n,n,n,y,n,y,y,n,n\n\
                          republican,y,y,n,y,y,y,n,n,n,n,y,y,y,y,n,y\n\
                          democrat,n,y,y,n,y,y,n,n,n,n,y,n,y,y,n,n\n";

    #[test]
    fn parses_a_record() {
        let d = parse_votes(SAMPLE.as_bytes()).unwrap();
        assert_eq!(d.len(), 5);
        assert_eq!(d.labels()[0], Party::Republican);
        let r = &d.votes()[0];
        assert_eq!(r[10], Vote::Missing);
        assert_eq!(r[0], Vote::Nay);
        assert_eq!(r[1], Vote::Yea);
        assert_eq!(r.iter().filter(|v| **v == Vote::Missing).count(), 1);
        assert_eq!(d.missing_count(), 4);
        assert_eq!(
            d.census(),
            Census {
                records: 5,
                republicans: 3,
                democrats: 2
            }
        );
        assert!(d.validate_canonical_census().is_err());
    }

    #[test]
    fn empty_input() {
        let d = parse_votes("".as_bytes()).unwrap();
        assert_eq!(d.len(), 0);
        assert!(d.imputed().is_err());
        assert!(impute_group_mean(&d).is_err());
    }

    #[test]
    fn malformed_lines_name_their_line() {
        let short = "democrat,y,y,y\nrepublican,n,y,n,y,y,y,n,n,n,y,?,y,y,y,n\n";
        match parse_votes(short.as_bytes()) {
            Err(Error::Parse { line: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        let fifteen = "republican,n,y,n,y,y,y,n,n,n,y,?,y,y,y,n,y\nrepublican,n,y,n,y,y,y,n,n,n,y,?,y,y,y,n\n";
        match parse_votes(fifteen.as_bytes()) {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        let token = "republican,n,y,n,y,y,y,n,n,n,y,x,y,y,y,n,y\n";
        assert!(matches!(
            parse_votes(token.as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
        let party = "whig,n,y,n,y,y,y,n,n,n,y,y,y,y,y,n,y\n";
        assert!(matches!(
            parse_votes(party.as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn imputes_party_means() {
        let d = impute_group_mean(&parse_votes(SAMPLE.as_bytes()).unwrap()).unwrap();
        let x = d.imputed().unwrap();
        // issue 11 among republicans: {?, n, y} -> mean of {0, 1}
        assert_eq!(x.row(0)[10], 0.5);
        // issue 16 among republicans: {y, ?, y}
        assert_eq!(x.row(1)[15], 1.0);
        // non-missing entries untouched
        assert_eq!(x.row(1)[10], 0.0);
        assert_eq!(x.row(3)[0], 1.0);
        // democrats: issue 1 is {?, n}, issue 4 is {?, n}
        assert_eq!(x.row(2)[0], 0.0);
        assert_eq!(x.row(2)[3], 0.0);
        assert!(x.as_slice().iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn imputation_uses_exact_fraction() {
        let text = "republican,y,y,y,y,y,y,y,y,y,y,y,y,y,y,y,y\n\
                    republican,y,y,y,y,y,y,y,y,y,y,y,y,y,y,y,y\n\
                    republican,n,y,y,y,y,y,y,y,y,y,y,y,y,y,y,y\n\
                    republican,?,y,y,y,y,y,y,y,y,y,y,y,y,y,y,y\n";
        let d = impute_group_mean(&parse_votes(text.as_bytes()).unwrap()).unwrap();
        assert_eq!(d.imputed().unwrap().row(3)[0], 2.0 / 3.0);
    }

    #[test]
    fn imputation_is_identity_without_missing_votes() {
        let text = "republican,y,n,y,n,y,n,y,n,y,n,y,n,y,n,y,n\ndemocrat,n,n,y,y,n,n,y,y,n,n,y,y,n,n,y,y\n";
        let d = impute_group_mean(&parse_votes(text.as_bytes()).unwrap()).unwrap();
        let x = d.imputed().unwrap();
        for (record, row) in d.votes().iter().zip(x.rows()) {
            for (v, x) in record.iter().zip(row) {
                assert_eq!(v.value(), Some(*x));
            }
        }
        let again = impute_group_mean(&d).unwrap();
        assert_eq!(again, d);
    }

    #[test]
    fn all_missing_column_is_an_error() {
        let text = "democrat,?,y,y,y,y,y,y,y,y,y,y,y,y,y,y,y\n";
        assert!(impute_group_mean(&parse_votes(text.as_bytes()).unwrap()).is_err());
    }

    #[test]
    fn csv_single_column() {
        let l = load_csv("0\n1\n2\n3\n".as_bytes(), &CsvSchema::default()).unwrap();
        assert_eq!(l.features.nrows(), 4);
        assert_eq!(l.features.ncols(), 1);
        assert_eq!(l.features.as_slice(), &[0.0, 1.0, 2.0, 3.0]);
        assert!(l.labels.is_none());
    }

    #[test]
    fn csv_header_and_labels() {
        let text = "party,x,y\nred,1,2\nblue,3.5,-4\n";
        let schema = CsvSchema {
            has_header: true,
            label_column: Some(LabelColumn::Name("party".into())),
            ..CsvSchema::default()
        };
        let l = load_csv(text.as_bytes(), &schema).unwrap();
        assert_eq!(l.features.as_slice(), &[1.0, 2.0, 3.5, -4.0]);
        assert_eq!(l.labels.unwrap(), vec!["red", "blue"]);
        assert_eq!(l.feature_names.unwrap(), vec!["x", "y"]);

        let tabbed = "1\t\"2\"\n3\t4\n";
        let schema = CsvSchema {
            delimiter: b'\t',
            ..CsvSchema::default()
        };
        assert_eq!(
            load_csv(tabbed.as_bytes(), &schema)
                .unwrap()
                .features
                .as_slice(),
            &[1.0, 2.0, 3.0, 4.0]
        );
    }

    #[test]
    fn csv_rejects_bad_cells() {
        match load_csv("1,2\n3,NaN\n".as_bytes(), &CsvSchema::default()) {
            Err(Error::Parse { line: 2, message }) => assert!(message.contains("column 2")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            load_csv("1,2\n3,abc\n".as_bytes(), &CsvSchema::default()),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            load_csv("1,2\n3\n".as_bytes(), &CsvSchema::default()),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(load_csv("".as_bytes(), &CsvSchema::default()).is_err());
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let x = FeatureMatrix::from_rows(&[
            vec![0.1, 2.0 / 3.0, -1e-300],
            vec![1e22, 5e-324, 123456.789],
        ])
        .unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &x, None).unwrap();
        let back = load_csv(buf.as_slice(), &CsvSchema::default()).unwrap();
        assert_eq!(back.features, x);
    }

    #[test]
    fn group_resolution() {
        let labels: Vec<String> = ["a", "b", "a", "c"].iter().map(|s| s.to_string()).collect();
        let g = resolve_group(&GroupSpec::Label("a".into()), 4, Some(&labels)).unwrap();
        assert_eq!(g.weights(), &[0.5, 0.0, 0.5, 0.0]);
        assert!(resolve_group(&GroupSpec::Label("z".into()), 4, Some(&labels)).is_err());
        assert!(resolve_group(&GroupSpec::Label("a".into()), 4, None).is_err());

        let g = resolve_group(&GroupSpec::Indices(vec![0, 1]), 4, None).unwrap();
        assert_eq!(g.weights(), &[0.5, 0.5, 0.0, 0.0]);
        assert!(resolve_group(&GroupSpec::Indices(vec![]), 4, None).is_err());
        assert!(resolve_group(&GroupSpec::Indices(vec![7]), 4, None).is_err());

        let g = resolve_group(&GroupSpec::Weights(vec![2.0, 2.0, 0.0, 0.0]), 4, None).unwrap();
        assert_eq!(g.weights(), &[0.5, 0.5, 0.0, 0.0]);
        assert!(resolve_group(&GroupSpec::Weights(vec![1.0, -1.0, 1.0, 1.0]), 4, None).is_err());
        assert!(resolve_group(&GroupSpec::Weights(vec![1.0]), 4, None).is_err());
    }

    #[test]
    fn weight_files() {
        assert_eq!(
            read_weights("2\n2\n0 0\n".as_bytes()).unwrap(),
            vec![2.0, 2.0, 0.0, 0.0]
        );
        assert_eq!(
            read_weights("1,2,3".as_bytes()).unwrap(),
            vec![1.0, 2.0, 3.0]
        );
        assert!(matches!(
            read_weights("1\n-2\n".as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
