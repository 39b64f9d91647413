use serde::Serialize;
use serde_json::Value;

use toric_dt::dtsum::{DtError, QVSeries, RationalFn};

use crate::{rational_string, CheckReport, Format, Prepared, RunConfig};

/// A degree and the outcome of reconstructing its series.
pub type Reconstructed = (Vec<u32>, Result<RationalFn, DtError>);

#[derive(Serialize)]
struct Header<'a> {
    geometry: &'a str,
    classes: &'a [String],
    n_max: i64,
    beta_max: &'a [u32],
    reduced: bool,
    seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesRow {
    pub n: i64,
    pub beta: Vec<u32>,
    pub coefficient: String,
}

#[derive(Serialize)]
struct Reconstruction {
    beta: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    function: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    numerator: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    denominator: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    shift: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct SeriesOutput<'a> {
    #[serde(flatten)]
    header: Header<'a>,
    rows: Vec<SeriesRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rational: Option<Vec<Reconstruction>>,
}

#[derive(Serialize)]
struct CheckOutput<'a> {
    check: &'static str,
    passed: bool,
    summary: &'a str,
    details: &'a Value,
}

#[derive(Serialize)]
pub struct VerifyReport<'a> {
    #[serde(flatten)]
    header: Header<'a>,
    passed: bool,
    checks: Vec<CheckOutput<'a>>,
}

fn header<'a>(config: &'a RunConfig, p: &'a Prepared, reduced: bool) -> Header<'a> {
    Header {
        geometry: &p.name,
        classes: &p.geometry.classes,
        n_max: config.n_max,
        beta_max: &p.beta_max,
        reduced,
        seed: config.seed,
    }
}

/// Every coefficient inside the known window of each degree, zeros included.
pub fn series_rows(series: &QVSeries) -> Vec<SeriesRow> {
    let mut rows = Vec::new();
    for (beta, part) in &series.parts {
        for (k, c) in part.coeffs.iter().enumerate() {
            rows.push(SeriesRow {
                n: part.start + k as i64,
                beta: beta.clone(),
                coefficient: rational_string(c),
            });
        }
    }
    rows
}

fn beta_field(beta: &[u32]) -> String {
    beta.iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(";")
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn render_series(
    config: &RunConfig,
    p: &Prepared,
    series: &QVSeries,
    rational: Option<&[Reconstructed]>,
) -> String {
    let rows = series_rows(series);
    let rational = rational.map(|list| {
        list.iter()
            .map(|(beta, r)| match r {
                Ok(r) => Reconstruction {
                    beta: beta.clone(),
                    function: Some(r.to_string()),
                    numerator: Some(r.num().coeffs().iter().map(rational_string).collect()),
                    denominator: Some(r.den().coeffs().iter().map(rational_string).collect()),
                    shift: Some(r.shift()),
                    error: None,
                },
                Err(e) => Reconstruction {
                    beta: beta.clone(),
                    function: None,
                    numerator: None,
                    denominator: None,
                    shift: None,
                    error: Some(e.to_string()),
                },
            })
            .collect::<Vec<_>>()
    });
    match config.format {
        Format::Json => to_json(&SeriesOutput {
            header: header(config, p, config.reduced),
            rows,
            rational,
        }),
        Format::Csv => {
            let mut out = csv_preamble(config, p, config.reduced);
            out.push_str("n,beta,coefficient\n");
            for row in rows {
                out.push_str(&format!("{},{},{}\n", row.n, beta_field(&row.beta), row.coefficient));
            }
            for r in rational.unwrap_or_default() {
                let text = r.function.or(r.error).unwrap_or_default();
                out.push_str(&format!("# rational {}: {text}\n", beta_field(&r.beta)));
            }
            out
        }
    }
}

fn csv_preamble(config: &RunConfig, p: &Prepared, reduced: bool) -> String {
    format!(
        "# geometry={} classes={} n_max={} beta_max={} reduced={} seed={}\n",
        p.name,
        p.geometry.classes.join(";"),
        config.n_max,
        beta_field(&p.beta_max),
        reduced,
        config.seed
    )
}

pub fn render_verify(config: &RunConfig, p: &Prepared, reports: &[CheckReport]) -> String {
    let passed = reports.iter().all(|r| r.passed);
    match config.format {
        Format::Json => to_json(&VerifyReport {
            header: header(config, p, config.reduced),
            passed,
            checks: reports
                .iter()
                .map(|r| CheckOutput {
                    check: r.check.name(),
                    passed: r.passed,
                    summary: &r.summary,
                    details: &r.details,
                })
                .collect(),
        }),
        Format::Csv => {
            let mut out = csv_preamble(config, p, config.reduced);
            out.push_str("check,passed,summary\n");
            for r in reports {
                out.push_str(&format!(
                    "{},{},\"{}\"\n",
                    r.check.name(),
                    r.passed,
                    r.summary.replace('"', "\"\"")
                ));
            }
            out
        }
    }
}
