use clap::{Args, ValueEnum};
use infocus_core::complement::complement_of;
use infocus_core::extensions::{metacontrast_minimize, MetaContrastParams};
use infocus_core::focal::{dispersion_profile, focal_points, FocalAnalysis};
use infocus_core::geometry::{squared_distance, squared_distances};
use infocus_core::mds::{embed, project_point, MdsEmbedding};
use serde_json::Value;

use crate::input::{load, DataArgs, Dataset, GroupArgs};
use crate::render::{json, num, nums, object, FloatFormat, Tsv};
use crate::CliError;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Tsv,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub group: GroupArgs,
    /// Mixing weight of the complement. Implies `--complement`; defaults to the largest admissible value.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Also analyze the complementary group and report the duality residual.
    #[arg(long)]
    pub complement: bool,
    /// Add a two-dimensional MDS block (uniform context only).
    #[arg(long)]
    pub mds: bool,
}

#[derive(Debug, Args)]
pub struct MdsArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub group: GroupArgs,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    pub dims: u64,
    #[arg(long, value_enum, default_value = "tsv")]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub group: GroupArgs,
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    pub eps_min: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub eps_max: f64,
    #[arg(long, default_value_t = 201, value_parser = clap::value_parser!(u64).range(2..))]
    pub steps: u64,
    #[arg(long, value_enum, default_value = "tsv")]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct MetacontrastArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, default_value_t = 0.08)]
    pub lambda: f64,
    #[arg(long, default_value_t = 7.7)]
    pub beta: f64,
    /// Search interval `lo,hi`.
    #[arg(
        long,
        value_delimiter = ',',
        num_args = 1,
        default_value = "0,1",
        allow_hyphen_values = true
    )]
    pub domain: Vec<f64>,
}

fn header(command: &str, data: &Dataset) -> [(&'static str, Value); 4] {
    [
        ("schema_version", Value::from(SCHEMA_VERSION)),
        (
            "tool",
            object([
                ("name", Value::from("infocus")),
                ("version", Value::from(env!("CARGO_PKG_VERSION"))),
            ]),
        ),
        ("command", Value::from(command)),
        ("inputs", data.inputs()),
    ]
}

fn with_header<const N: usize>(
    command: &str,
    data: &Dataset,
    body: [(&'static str, Value); N],
) -> Value {
    let mut report = object(header(command, data));
    let map = report.as_object_mut().expect("object");
    for (k, v) in body {
        map.insert(k.to_string(), v);
    }
    report
}

fn focal_json(r: &FocalAnalysis) -> Value {
    object([
        ("centroid_f", nums(&r.centroid_f)),
        ("centroid_g", nums(&r.centroid_g)),
        ("delta_f", num(r.delta_f)),
        ("delta_g", num(r.delta_g)),
        ("d_fg", num(r.d_fg)),
        ("b_fg", num(r.b_fg)),
        ("eps_minus", num(r.eps_minus)),
        ("eps_plus", num(r.eps_plus)),
        ("a_minus", nums(&r.a_minus)),
        ("a_plus", nums(&r.a_plus)),
        ("delta_at_minus", num(r.delta_at_minus)),
        ("delta_at_plus", num(r.delta_at_plus)),
        ("polarization_ratio", num(r.polarization_ratio)),
    ])
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    squared_distance(a, b).sqrt()
}

/// Centroids and foci mapped into the embedding.
fn projections(
    emb: &MdsEmbedding,
    data: &Dataset,
    r: &FocalAnalysis,
) -> Result<Vec<(&'static str, Vec<f64>)>, CliError> {
    let mut out = Vec::new();
    for (name, point) in [
        ("centroid_f", &r.centroid_f),
        ("centroid_g", &r.centroid_g),
        ("a_minus", &r.a_minus),
        ("a_plus", &r.a_plus),
    ] {
        out.push((
            name,
            project_point(emb, &data.features, &data.context, point)?,
        ));
    }
    Ok(out)
}

fn require_uniform(data: &Dataset, what: &str) -> Result<(), CliError> {
    if data.context.is_uniform(1e-12) {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "{what} requires uniform context weights"
        )))
    }
}

fn embedding(data: &Dataset, dims: usize) -> Result<MdsEmbedding, CliError> {
    require_uniform(data, "MDS")?;
    Ok(embed(&squared_distances(&data.features), dims)?)
}

fn dataset_json(data: &Dataset) -> Value {
    object([
        ("n", Value::from(data.n())),
        ("p", Value::from(data.p())),
        ("context_support", Value::from(data.context.support_size())),
        (
            "group_support",
            data.group
                .as_ref()
                .map_or(Value::Null, |g| Value::from(g.support_size())),
        ),
    ])
}

pub fn analyze(args: &AnalyzeArgs, floats: FloatFormat) -> Result<String, CliError> {
    let data = load(&args.data, Some(&args.group))?;
    let g = data.require_group()?;
    let r = focal_points(&data.features, &data.context, g)?;

    let complement = if args.complement || args.rho.is_some() {
        let c = complement_of(&data.context, g, args.rho)?;
        let dual = focal_points(&data.features, &data.context, &c.gbar)?;
        object([
            ("rho", num(c.rho)),
            ("rho_max", num(c.rho_max)),
            ("focal", focal_json(&dual)),
            ("duality_residual", num(distance(&r.a_plus, &dual.a_minus))),
            (
                "symmetric_residual",
                num(distance(&r.a_minus, &dual.a_plus)),
            ),
        ])
    } else {
        Value::Null
    };

    let mds = if args.mds {
        let emb = embedding(&data, 2)?;
        let coords: Vec<Value> = emb.coordinates.rows().map(nums).collect();
        let mut projected = serde_json::Map::new();
        for (name, p) in projections(&emb, &data, &r)? {
            projected.insert(name.to_string(), nums(&p));
        }
        object([
            ("dims", Value::from(emb.dims())),
            ("eigenvalues", nums(&emb.retained_eigenvalues())),
            ("axis_fractions", nums(&emb.axis_fractions())),
            ("explained_fraction", num(emb.explained_fraction)),
            ("coordinates", Value::Array(coords)),
            ("projections", Value::Object(projected)),
        ])
    } else {
        Value::Null
    };

    let mut report = with_header(
        "analyze",
        &data,
        [("dataset", dataset_json(&data)), ("focal", focal_json(&r))],
    );
    let map = report.as_object_mut().expect("object");
    if !complement.is_null() {
        map.insert("complement".into(), complement);
    }
    if !mds.is_null() {
        map.insert("mds".into(), mds);
    }
    Ok(json(&report, floats))
}

pub fn mds(args: &MdsArgs, floats: FloatFormat) -> Result<String, CliError> {
    let data = load(&args.data, Some(&args.group))?;
    let dims = args.dims as usize;
    let emb = embedding(&data, dims)?;
    let projected = match &data.group {
        Some(g) => projections(
            &emb,
            &data,
            &focal_points(&data.features, &data.context, g)?,
        )?,
        None => Vec::new(),
    };

    if args.output == Output::Json {
        let fractions = emb.axis_fractions();
        let cumulative: Vec<f64> = fractions
            .iter()
            .scan(0.0, |acc, f| {
                *acc += f;
                Some(*acc)
            })
            .collect();
        let mut proj = serde_json::Map::new();
        for (name, p) in &projected {
            proj.insert(name.to_string(), nums(p));
        }
        let report = with_header(
            "mds",
            &data,
            [
                ("dataset", dataset_json(&data)),
                ("dims", Value::from(dims)),
                ("eigenvalues", nums(&emb.eigenvalues)),
                ("axis_fractions", nums(&fractions)),
                ("cumulative_fractions", nums(&cumulative)),
                ("explained_fraction", num(emb.explained_fraction)),
                ("total_dispersion", num(emb.total_dispersion)),
                ("positive_rank", Value::from(emb.positive_rank)),
                ("padded", Value::from(emb.padded)),
                (
                    "projections",
                    if proj.is_empty() {
                        Value::Null
                    } else {
                        Value::Object(proj)
                    },
                ),
            ],
        );
        return Ok(json(&report, floats));
    }

    let names: Vec<String> = (1..=dims).map(|k| format!("dim{k}")).collect();
    let mut columns = vec!["kind", "id", "label", "group"];
    columns.extend(names.iter().map(String::as_str));
    let mut tsv = Tsv::new(&columns, floats);
    for i in 0..data.n() {
        let id = i.to_string();
        let label = data.labels.as_ref().map_or("-", |l| l[i].as_str());
        let member = match &data.group {
            Some(g) if g.get(i) > 0.0 => "1",
            Some(_) => "0",
            None => "-",
        };
        tsv.row(&["individual", &id, label, member], emb.coordinates.row(i));
    }
    for (name, p) in &projected {
        tsv.row(&[name, "-", "-", "-"], p);
    }
    Ok(tsv.finish())
}

pub fn profile(args: &ProfileArgs, floats: FloatFormat) -> Result<String, CliError> {
    if !(args.eps_min < args.eps_max) {
        return Err(CliError::Usage(format!(
            "--eps-min ({}) must be below --eps-max ({})",
            args.eps_min, args.eps_max
        )));
    }
    let data = load(&args.data, Some(&args.group))?;
    let g = data.require_group()?;
    let r = focal_points(&data.features, &data.context, g)?;
    let samples = dispersion_profile(
        &data.features,
        &data.context,
        g,
        (args.eps_min, args.eps_max),
        args.steps as usize,
    )?;

    if args.output == Output::Json {
        let rows: Vec<Value> = samples.iter().map(|&(e, d)| nums(&[e, d])).collect();
        let report = with_header(
            "profile",
            &data,
            [
                ("samples", Value::Array(rows)),
                (
                    "in_focus",
                    object([("eps", num(r.eps_minus)), ("delta", num(r.delta_at_minus))]),
                ),
                (
                    "out_focus",
                    object([("eps", num(r.eps_plus)), ("delta", num(r.delta_at_plus))]),
                ),
            ],
        );
        return Ok(json(&report, floats));
    }

    let mut tsv = Tsv::new(&["kind", "eps", "delta"], floats);
    for (e, d) in samples {
        tsv.row(&["profile"], &[e, d]);
    }
    tsv.row(&["in_focus"], &[r.eps_minus, r.delta_at_minus]);
    tsv.row(&["out_focus"], &[r.eps_plus, r.delta_at_plus]);
    Ok(tsv.finish())
}

pub fn metacontrast(args: &MetacontrastArgs, floats: FloatFormat) -> Result<String, CliError> {
    let [lo, hi] = args.domain[..] else {
        return Err(CliError::Usage(
            "--domain takes exactly two values, lo,hi".into(),
        ));
    };
    let params = MetaContrastParams::new(args.lambda, args.beta)?;
    let data = load(&args.data, None)?;
    require_uniform(&data, "metacontrast")?;
    let minima = metacontrast_minimize(&data.features, params, (lo, hi))?;
    let rows: Vec<Value> = minima
        .iter()
        .map(|m| {
            object([
                ("position", num(m.position)),
                ("value", num(m.value)),
                ("at_boundary", Value::from(m.at_boundary)),
            ])
        })
        .collect();
    let report = with_header(
        "metacontrast",
        &data,
        [
            (
                "params",
                object([
                    ("lambda", num(params.lambda)),
                    ("beta", num(params.beta)),
                    ("domain", nums(&[lo, hi])),
                ]),
            ),
            ("minima", Value::Array(rows)),
        ],
    );
    Ok(json(&report, floats))
}
