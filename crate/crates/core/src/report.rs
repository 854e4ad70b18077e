//! Report rendering: one JSON object or CSV row per fused image.
//!
//! The CSV column order matches the layout the metrics are usually tabled
//! in: iqi, ff, fs, fi, mim, rmse, psnr, entropy, with a leading method
//! column so multi-method tables stay self-describing.

use crate::metrics::MetricsReport;
use serde::Serialize;

/// Context describing what was fused, carried alongside the metric values.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportMeta {
    pub method: String,
    pub input_a: String,
    pub input_b: String,
    pub reference: Option<String>,
    pub weights: Option<(f64, f64)>,
}

#[derive(Serialize)]
struct WeightsOut {
    w1: f64,
    w2: f64,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    method: &'a str,
    input_a: &'a str,
    input_b: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    weights: Option<WeightsOut>,
    #[serde(flatten)]
    metrics: &'a MetricsReport,
}

fn json_row<'a>(meta: &'a ReportMeta, report: &'a MetricsReport) -> JsonReport<'a> {
    JsonReport {
        method: &meta.method,
        input_a: &meta.input_a,
        input_b: &meta.input_b,
        reference: meta.reference.as_deref(),
        weights: meta.weights.map(|(w1, w2)| WeightsOut { w1, w2 }),
        metrics: report,
    }
}

pub fn render_json(meta: &ReportMeta, report: &MetricsReport) -> String {
    let mut s = serde_json::to_string_pretty(&json_row(meta, report))
        .expect("report serialization cannot fail");
    s.push('\n');
    s
}

/// Multi-row report (one object per method) as a JSON array.
pub fn render_json_rows(rows: &[(ReportMeta, MetricsReport)]) -> String {
    let objs: Vec<JsonReport> = rows.iter().map(|(m, r)| json_row(m, r)).collect();
    let mut s = serde_json::to_string_pretty(&objs).expect("report serialization cannot fail");
    s.push('\n');
    s
}

pub fn csv_header() -> &'static str {
    "method,iqi,ff,fs,fi,mim,rmse,psnr,entropy"
}

pub fn render_csv_row(method: &str, report: &MetricsReport) -> String {
    format!(
        "{},{},{:.4},{},{},{:.4},{:.4},{},{:.4}",
        method,
        report.iqi,
        report.ff,
        report.fs,
        report.fi,
        report.mim,
        report.rmse,
        report.psnr,
        report.entropy
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::MetricValue;

    fn sample_report() -> MetricsReport {
        MetricsReport {
            iqi: MetricValue::Num(0.9473),
            ff: 3.8629,
            fs: MetricValue::Num(0.0429),
            fi: MetricValue::Num(1.1879),
            mim: 1.7656,
            rmse: 63.5529,
            psnr: MetricValue::Num(11.3425),
            entropy: 7.3828,
            i_af: 2.0973,
            i_bf: 1.7656,
            surrogate_reference: true,
        }
    }

    fn sample_meta() -> ReportMeta {
        ReportMeta {
            method: "wavelet-max".into(),
            input_a: "a.pgm".into(),
            input_b: "b.pgm".into(),
            reference: None,
            weights: None,
        }
    }

    #[test]
    fn csv_row_follows_the_header_column_order() {
        assert_eq!(
            csv_header(),
            "method,iqi,ff,fs,fi,mim,rmse,psnr,entropy"
        );
        let row = render_csv_row("wavelet-max", &sample_report());
        assert_eq!(
            row,
            "wavelet-max,0.9473,3.8629,0.0429,1.1879,1.7656,63.5529,11.3425,7.3828"
        );
        assert_eq!(
            row.split(',').count(),
            csv_header().split(',').count()
        );
    }

    #[test]
    fn csv_carries_inf_and_degenerate_tags_verbatim() {
        let mut report = sample_report();
        report.psnr = MetricValue::PosInf;
        report.fi = MetricValue::Degenerate;
        let row = render_csv_row("fuzzy", &report);
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells[4], "degenerate");
        assert_eq!(cells[7], "inf");
    }

    #[test]
    fn json_report_contains_metrics_and_context() {
        let text = render_json(&sample_meta(), &sample_report());
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["method"], "wavelet-max");
        assert_eq!(v["input_a"], "a.pgm");
        assert_eq!(v["input_b"], "b.pgm");
        assert_eq!(v["iqi"], 0.9473);
        assert_eq!(v["mim"], 1.7656);
        assert_eq!(v["entropy"], 7.3828);
        assert_eq!(v["surrogate_reference"], true);
        assert!(v.get("reference").is_none());
        assert!(v.get("weights").is_none());
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn json_report_includes_weights_and_reference_when_present() {
        let meta = ReportMeta {
            reference: Some("truth.pgm".into()),
            weights: Some((0.7, 0.3)),
            ..sample_meta()
        };
        let v: serde_json::Value =
            serde_json::from_str(&render_json(&meta, &sample_report())).unwrap();
        assert_eq!(v["reference"], "truth.pgm");
        assert_eq!(v["weights"]["w1"], 0.7);
        assert_eq!(v["weights"]["w2"], 0.3);
    }

    #[test]
    fn json_tags_non_numeric_values() {
        let mut report = sample_report();
        report.psnr = MetricValue::PosInf;
        report.iqi = MetricValue::Degenerate;
        let v: serde_json::Value =
            serde_json::from_str(&render_json(&sample_meta(), &report)).unwrap();
        assert_eq!(v["psnr"], "inf");
        assert_eq!(v["iqi"], "degenerate");
    }

    #[test]
    fn multi_row_report_is_a_json_array_in_order() {
        let rows = vec![
            (sample_meta(), sample_report()),
            (
                ReportMeta {
                    method: "fuzzy".into(),
                    ..sample_meta()
                },
                sample_report(),
            ),
        ];
        let v: serde_json::Value = serde_json::from_str(&render_json_rows(&rows)).unwrap();
        let arr = v.as_array().unwrap();
        assert_eq!(arr.len(), 2);
        assert_eq!(arr[0]["method"], "wavelet-max");
        assert_eq!(arr[1]["method"], "fuzzy");
    }
}
