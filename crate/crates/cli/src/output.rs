use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use c21_core::certify::CertReport;

use crate::suites::{Plot, Suite, SuiteOutput};

/// Report serialization for files and stdout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format `{s}`; expected json or csv")),
        }
    }
}

/// Keeps `[A-Za-z0-9._-]` and replaces everything else with `_`.
pub fn sanitize(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || matches!(c, '.' | '-' | '_') { c } else { '_' }).collect()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One row per report: `suite,name,passed,empiricalConstant,witnesses,notes`.
pub fn summary_csv(reports: &[(Suite, CertReport)]) -> String {
    let mut s = String::from("suite,name,passed,empiricalConstant,witnesses,notes\n");
    for (suite, r) in reports {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            suite,
            csv_field(&r.name),
            r.passed,
            r.empirical_constant,
            r.witnesses.len(),
            csv_field(&r.notes.join("; "))
        );
    }
    s
}

/// One row per metric: `suite,name,metric,value`.
pub fn metrics_csv(reports: &[(Suite, CertReport)]) -> String {
    let mut s = String::from("suite,name,metric,value\n");
    for (suite, r) in reports {
        for (k, v) in &r.metrics {
            let _ = writeln!(s, "{},{},{},{}", suite, csv_field(&r.name), csv_field(k), v);
        }
    }
    s
}

/// A JSON array of the reports.
pub fn reports_json(reports: &[(Suite, CertReport)]) -> String {
    let values: Vec<&CertReport> = reports.iter().map(|(_, r)| r).collect();
    serde_json::to_string_pretty(&values).expect("reports serialize")
}

pub fn plot_csv(p: &Plot) -> String {
    let mut s = p.header.join(",");
    s.push('\n');
    for row in &p.rows {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

/// Writes reports in `format` and every plot as CSV into `dir`; returns the written paths.
pub fn write_outputs(dir: &Path, out: &SuiteOutput, format: Format) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut put = |name: String, body: String| -> io::Result<()> {
        let path = dir.join(name);
        fs::write(&path, body)?;
        written.push(path);
        Ok(())
    };
    match format {
        Format::Json => {
            let mut seen: BTreeMap<String, usize> = BTreeMap::new();
            for (suite, r) in &out.reports {
                let base = format!("{}.{}", suite, sanitize(&r.name));
                let k = seen.entry(base.clone()).or_insert(0);
                *k += 1;
                let name = if *k == 1 { format!("{base}.json") } else { format!("{base}-{k}.json") };
                put(name, r.to_json() + "\n")?;
            }
        }
        Format::Csv => {
            put("reports.csv".into(), summary_csv(&out.reports))?;
            put("metrics.csv".into(), metrics_csv(&out.reports))?;
        }
    }
    for p in &out.plots {
        put(format!("plot.{}.csv", sanitize(&p.name)), plot_csv(p))?;
    }
    Ok(written)
}

/// Human-readable status line of one report.
pub fn status_line(suite: Suite, r: &CertReport) -> String {
    if r.passed {
        return format!("PASS {suite} {} constant={}", r.name, r.empirical_constant);
    }
    let reason = r.notes.iter().rev().find(|n| !n.contains("sign convention")).cloned().unwrap_or_default();
    let witness = r.witnesses.first().map_or(String::new(), |w| match w.y {
        Some(y) => format!(" witness ({}, {}) value {}", w.x, y, w.value),
        None => format!(" witness x = {} value {}", w.x, w.value),
    });
    format!("FAIL {suite} {}: {reason}{witness}", r.name)
}
