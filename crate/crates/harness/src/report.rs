use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};

use crate::config::CampaignConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    BoundHolds,
    BoundViolated,
    /// `ω = 0`: no ratio can be formed.
    Degenerate,
    /// Reported without pass/fail semantics.
    Info,
}

impl Status {
    pub fn is_failure(self) -> bool {
        matches!(self, Status::Fail | Status::BoundViolated)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::BoundHolds => "bound-holds",
            Status::BoundViolated => "bound-violated",
            Status::Degenerate => "degenerate",
            Status::Info => "info",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub claim_id: String,
    pub paper_anchor: String,
    pub params: BTreeMap<String, String>,
    pub computed: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub status: Status,
}

/// Builder for report rows.
pub struct RowBuilder {
    claim_id: String,
    anchor: String,
    params: BTreeMap<String, String>,
}

pub fn row(claim_id: impl Into<String>, anchor: &str) -> RowBuilder {
    RowBuilder { claim_id: claim_id.into(), anchor: anchor.to_string(), params: BTreeMap::new() }
}

impl RowBuilder {
    pub fn param(mut self, key: &str, v: impl fmt::Display) -> Self {
        self.params.insert(key.to_string(), v.to_string());
        self
    }

    fn finish(self, computed: f64, reference: f64, tolerance: f64, status: Status) -> Row {
        Row {
            claim_id: self.claim_id,
            paper_anchor: self.anchor,
            params: self.params,
            computed,
            reference,
            tolerance,
            status,
        }
    }

    /// `|computed − reference| ≤ tolerance`.
    pub fn equal(self, computed: f64, reference: f64, tolerance: f64) -> Row {
        let ok = (computed - reference).abs() <= tolerance;
        self.finish(computed, reference, tolerance, if ok { Status::Pass } else { Status::Fail })
    }

    /// `computed ≤ reference + tolerance`.
    pub fn at_most(self, computed: f64, reference: f64, tolerance: f64) -> Row {
        let ok = computed <= reference + tolerance;
        let status = if ok { Status::BoundHolds } else { Status::BoundViolated };
        self.finish(computed, reference, tolerance, status)
    }

    /// `computed ≥ reference − tolerance`.
    pub fn at_least(self, computed: f64, reference: f64, tolerance: f64) -> Row {
        let ok = computed >= reference - tolerance;
        let status = if ok { Status::BoundHolds } else { Status::BoundViolated };
        self.finish(computed, reference, tolerance, status)
    }

    pub fn check(self, ok: bool, computed: f64, reference: f64, tolerance: f64) -> Row {
        self.finish(computed, reference, tolerance, if ok { Status::Pass } else { Status::Fail })
    }

    pub fn with_status(self, computed: f64, reference: f64, tolerance: f64, status: Status) -> Row {
        self.finish(computed, reference, tolerance, status)
    }

    pub fn info(self, computed: f64, reference: f64) -> Row {
        self.finish(computed, reference, 0.0, Status::Info)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub version: String,
    pub campaigns: Vec<String>,
    pub seed: u64,
    pub grid_nodes: usize,
    pub refine_depth: usize,
}

impl Metadata {
    pub fn from_config(cfg: &CampaignConfig) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            campaigns: vec![cfg.campaign.name().to_string()],
            seed: cfg.seed,
            grid_nodes: cfg.grid_nodes,
            refine_depth: cfg.refine_depth,
        }
    }
}

/// One row per checked claim, plus the `E/ω` samples of sweep campaigns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub metadata: Metadata,
    pub rows: Vec<Row>,
    pub ratio_samples: Vec<RatioSample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioSample {
    pub f: String,
    pub n: usize,
    pub r: u32,
    pub alpha: f64,
    pub delta: f64,
    #[serde(rename = "E")]
    pub e: f64,
    pub omega: f64,
    pub ratio_over_gamma: f64,
}

fn params_key(p: &BTreeMap<String, String>) -> String {
    p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
}

impl VerificationReport {
    pub fn new(metadata: Metadata, mut rows: Vec<Row>, mut ratio_samples: Vec<RatioSample>) -> Self {
        rows.sort_by(|a, b| {
            a.claim_id
                .cmp(&b.claim_id)
                .then_with(|| params_key(&a.params).cmp(&params_key(&b.params)))
        });
        ratio_samples.sort_by(|a, b| {
            (a.f.as_str(), a.n, a.r)
                .cmp(&(b.f.as_str(), b.n, b.r))
                .then(a.alpha.total_cmp(&b.alpha))
        });
        Self { metadata, rows, ratio_samples }
    }

    /// Concatenation of several reports, re-sorted.
    pub fn merge(reports: Vec<VerificationReport>) -> Self {
        let mut it = reports.into_iter();
        let Some(first) = it.next() else {
            panic!("merge needs at least one report");
        };
        let mut meta = first.metadata;
        let mut rows = first.rows;
        let mut samples = first.ratio_samples;
        for r in it {
            meta.campaigns.extend(r.metadata.campaigns);
            rows.extend(r.rows);
            samples.extend(r.ratio_samples);
        }
        Self::new(meta, rows, samples)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| r.status.is_failure())
    }

    pub fn all_ok(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises") + "\n"
    }

    pub fn to_csv(&self) -> anyhow::Result<String> {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(["claim_id", "paper_anchor", "params", "computed", "reference", "tolerance", "status"])?;
        for r in &self.rows {
            w.write_record([
                r.claim_id.clone(),
                r.paper_anchor.clone(),
                params_key(&r.params),
                r.computed.to_string(),
                r.reference.to_string(),
                r.tolerance.to_string(),
                r.status.to_string(),
            ])?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    pub fn ratio_csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for s in &self.ratio_samples {
            w.serialize(s)?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Writes the report (and the ratio table when present) into `dir`.
/// Returns the written paths.
pub fn emit_report(report: &VerificationReport, format: Format, dir: &Path, stem: &str) -> anyhow::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::new();
    let (path, body) = match format {
        Format::Json => (dir.join(format!("{stem}.json")), report.to_json()),
        Format::Csv => (dir.join(format!("{stem}.csv")), report.to_csv()?),
    };
    std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
    written.push(path);
    if !report.ratio_samples.is_empty() {
        let path = dir.join(format!("{stem}-ratios.csv"));
        std::fs::write(&path, report.ratio_csv()?).with_context(|| format!("writing {}", path.display()))?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta() -> Metadata {
        Metadata { version: "0".into(), campaigns: vec!["x".into()], seed: 1, grid_nodes: 8, refine_depth: 0 }
    }

    #[test]
    fn statuses() {
        assert_eq!(row("a", "x").equal(1.0, 1.0 + 1e-9, 1e-8).status, Status::Pass);
        assert_eq!(row("a", "x").equal(1.0, 1.1, 1e-8).status, Status::Fail);
        assert_eq!(row("a", "x").at_most(1.0, 0.5, 0.1).status, Status::BoundViolated);
        assert_eq!(row("a", "x").at_least(1.0, 0.5, 0.1).status, Status::BoundHolds);
    }

    #[test]
    fn rows_are_sorted_and_csv_quotes() {
        let rows = vec![
            row("b", "x").param("k", 2).equal(1.0, 1.0, 0.0),
            row("a", "x").param("note", "has,comma").equal(1.0, 1.0, 0.0),
        ];
        let rep = VerificationReport::new(meta(), rows, vec![]);
        assert_eq!(rep.rows[0].claim_id, "a");
        let csv = rep.to_csv().unwrap();
        assert!(csv.contains("\"note=has,comma\""));
        assert!(rep.all_ok());
    }
}
