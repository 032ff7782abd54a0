//! Result table: one CSV row per analyzed sweep point.
//!
//! Columns, in order:
//!
//! | column | content |
//! |---|---|
//! | `system` | system id |
//! | `params` | `name=value` pairs joined by `;` |
//! | `seed` | per-point seed |
//! | `n_strobes` | strobed samples (map iterates for maps) |
//! | `gamma`, `threshold_95`, `significant` | locking index and surrogate gate |
//! | `r1`..`r4` | transition rates |
//! | `n1`..`n4` | points per region with a successor |
//! | `x1`..`x4` | counted transitions for each rate |
//! | `sub_ii_iii`, `sub_ii_iv`, `sub_iv_i`, `sub_iv_ii` | destination-resolved exits |
//! | `r3_low_confidence` | region III sparsely visited |
//! | `emp_1`..`emp_5`, `emp_gt5` | empirical duration histogram |
//! | `est_1`..`est_5`, `est_gt5` | Markov rate estimate |
//! | `simple_1`..`simple_5`, `simple_gt5` | single-pass rate estimate |
//! | `events` | desynchronization events counted |
//! | `laminar_runs` | region I runs |
//! | `mean_laminar_emp`, `mean_laminar_rate` | `inf` when never leaving sync |
//! | `status` | `ok` or the failure reason |
//!
//! Undefined values are empty fields.

use std::fmt::Write as _;
use std::io::Write;

use super::desync::{DesyncHistogram, Laminar};
use super::pipeline::AnalysisReport;
use crate::error::Error;

pub const COLUMNS: &[&str] = &[
    "system",
    "params",
    "seed",
    "n_strobes",
    "gamma",
    "threshold_95",
    "significant",
    "r1",
    "r2",
    "r3",
    "r4",
    "n1",
    "n2",
    "n3",
    "n4",
    "x1",
    "x2",
    "x3",
    "x4",
    "sub_ii_iii",
    "sub_ii_iv",
    "sub_iv_i",
    "sub_iv_ii",
    "r3_low_confidence",
    "emp_1",
    "emp_2",
    "emp_3",
    "emp_4",
    "emp_5",
    "emp_gt5",
    "est_1",
    "est_2",
    "est_3",
    "est_4",
    "est_5",
    "est_gt5",
    "simple_1",
    "simple_2",
    "simple_3",
    "simple_4",
    "simple_5",
    "simple_gt5",
    "events",
    "laminar_runs",
    "mean_laminar_emp",
    "mean_laminar_rate",
    "status",
];

/// Header line without the trailing newline.
pub fn header() -> String {
    COLUMNS.join(",")
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

fn laminar(v: Option<Laminar>) -> String {
    match v {
        Some(Laminar::Finite(x)) => format!("{x:?}"),
        Some(Laminar::Infinite) => "inf".into(),
        None => String::new(),
    }
}

fn hist(h: Option<&DesyncHistogram>) -> Vec<String> {
    match h {
        Some(h) => h.bins.iter().map(|b| format!("{b:?}")).collect(),
        None => vec![String::new(); 6],
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn format_params(params: &[(String, f64)]) -> String {
    let mut s = String::new();
    for (i, (k, v)) in params.iter().enumerate() {
        if i > 0 {
            s.push(';');
        }
        let _ = write!(s, "{k}={v:?}");
    }
    s
}

/// Row for a completed analysis.
pub fn report_row(system: &str, params: &[(String, f64)], seed: u64, r: &AnalysisReport) -> String {
    let rt = &r.rates;
    let mut f: Vec<String> = vec![
        quote(system),
        quote(&format_params(params)),
        seed.to_string(),
        r.n_strobes.to_string(),
        format!("{:?}", r.sync.gamma),
        format!("{:?}", r.significance.threshold_95),
        r.significance.significant.to_string(),
    ];
    f.extend(rt.r.iter().map(|v| opt(*v)));
    f.extend(rt.region_counts.iter().map(|v| v.to_string()));
    f.extend(rt.exit_counts.iter().map(|v| v.to_string()));
    let s = &rt.sub_rates;
    f.extend([s.ii_to_iii, s.ii_to_iv, s.iv_to_i, s.iv_to_ii].map(opt));
    f.push(rt.r3_low_confidence.to_string());
    f.extend(hist(Some(&r.empirical)));
    f.extend(hist(r.markov.as_ref()));
    f.extend(hist(r.simple.as_ref()));
    f.push(r.empirical.event_count.to_string());
    f.push(r.laminar_runs.to_string());
    f.push(laminar(r.laminar_empirical));
    f.push(laminar(r.laminar_rate));
    f.push("ok".into());
    f.join(",")
}

/// Row for a point that failed; the gate failure keeps its index values.
pub fn failure_row(system: &str, params: &[(String, f64)], seed: u64, err: &Error) -> String {
    let mut f = vec![String::new(); COLUMNS.len()];
    f[0] = quote(system);
    f[1] = quote(&format_params(params));
    f[2] = seed.to_string();
    if let Error::NoLocking { gamma, threshold } = err {
        f[4] = format!("{gamma:?}");
        f[5] = format!("{threshold:?}");
        f[6] = "false".into();
    }
    let last = COLUMNS.len() - 1;
    f[last] = quote(&err.to_string());
    f.join(",")
}

pub fn write_table<W: Write>(mut w: W, rows: &[String]) -> std::io::Result<()> {
    writeln!(w, "{}", header())?;
    for r in rows {
        writeln!(w, "{r}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::pipeline::{analyze_pipeline, AnalysisConfig};
    use crate::circular::PhaseSeries;

    #[test]
    fn row_width_matches_header() {
        let y = PhaseSeries::from_angles((0..5000).map(|i| i as f64 * 0.05), 0.01).unwrap();
        let r = analyze_pipeline(&y, &y, &AnalysisConfig::default()).unwrap();
        let params = vec![("eps".to_string(), 0.1)];
        let row = report_row("test", &params, 3, &r);
        assert_eq!(row.split(',').count(), COLUMNS.len());
        // r2..r4 undefined for a perfectly locked record
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[7], "0.0");
        assert_eq!(&fields[8..11], &["", "", ""]);
        assert_eq!(fields[fields.len() - 2], "inf");
        let fail = failure_row("test", &params, 3, &Error::NoLocking { gamma: 0.01, threshold: 0.02 });
        assert_eq!(fail.split(',').count(), COLUMNS.len());
        assert!(fail.starts_with("test,eps=0.1,3,,0.01,0.02,false,"));
    }

    #[test]
    fn quoting() {
        assert_eq!(quote("a,b"), "\"a,b\"");
        assert_eq!(quote("plain"), "plain");
    }
}
