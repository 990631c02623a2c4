use std::collections::BTreeSet;

use stechkin_harness::report::{emit_report, row, Metadata};
use stechkin_harness::{anchors, corpus, run, Campaign, CampaignConfig, CorpusKind, Format, Status, VerificationReport};

/// Every campaign on a reduced configuration.
fn small(campaign: Campaign) -> CampaignConfig {
    let mut cfg = CampaignConfig::for_campaign(campaign);
    cfg.random_polys = 1;
    if campaign != Campaign::Constants {
        cfg.n_range.truncate(1);
        cfg.r_range.truncate(2);
    }
    cfg
}

#[test]
fn every_row_resolves_to_a_manifest_anchor() {
    let mut used = BTreeSet::new();
    for c in Campaign::ALL {
        let report = run(&small(c)).unwrap();
        assert!(!report.rows.is_empty(), "{}", c.name());
        for r in &report.rows {
            assert!(anchors::resolves(&r.paper_anchor), "{} uses unknown anchor {}", r.claim_id, r.paper_anchor);
            used.insert(r.paper_anchor.clone());
        }
    }
    let mut full = run(&CampaignConfig::for_campaign(Campaign::OmegaStarSharpness)).unwrap().rows;
    full.extend(run(&CampaignConfig::for_campaign(Campaign::LowerBound)).unwrap().rows);
    used.extend(full.into_iter().map(|r| r.paper_anchor));
    for a in anchors::load() {
        assert!(used.contains(&a.id), "anchor {} is never reported", a.id);
    }
}

#[test]
fn manifest_ids_are_unique() {
    let ids: Vec<String> = anchors::load().into_iter().map(|a| a.id).collect();
    let set: BTreeSet<&String> = ids.iter().collect();
    assert_eq!(set.len(), ids.len());
    assert!(!anchors::resolves("no-such-claim"));
}

#[test]
fn small_campaigns_pass() {
    for c in Campaign::ALL {
        let report = run(&small(c)).unwrap();
        let bad: Vec<_> = report.failures().map(|r| format!("{} {:?}", r.claim_id, r.params)).collect();
        assert!(bad.is_empty(), "{}: {bad:?}", c.name());
    }
}

#[test]
fn identical_configs_give_identical_json() {
    for c in [Campaign::Theorem1Upper, Campaign::L2Chernykh, Campaign::OperatorIdentities] {
        let cfg = small(c);
        assert_eq!(run(&cfg).unwrap().to_json(), run(&cfg).unwrap().to_json(), "{}", c.name());
    }
}

#[test]
fn seed_changes_random_members_only() {
    let a = corpus::build(&CorpusKind::ALL, 8, 1, 2);
    let b = corpus::build(&CorpusKind::ALL, 8, 2, 2);
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.id, y.id);
        let same = x.f == y.f;
        let random = matches!(x.kind, CorpusKind::RandomTrig | CorpusKind::SampledNoise);
        assert_eq!(same, !random, "{}", x.id);
    }
}

#[test]
fn rows_are_sorted_and_merge_keeps_order() {
    let meta = Metadata::from_config(&CampaignConfig::default());
    let rows = vec![
        row("b", "gamma-star").param("n", "2").equal(1.0, 1.0, 0.0),
        row("a", "gamma-star").param("n", "9").equal(1.0, 1.0, 0.0),
        row("a", "gamma-star").param("n", "1").at_most(2.0, 1.0, 0.0),
    ];
    let r = VerificationReport::new(meta.clone(), rows, vec![]);
    let order: Vec<(String, String)> = r.rows.iter().map(|x| (x.claim_id.clone(), x.params["n"].clone())).collect();
    assert_eq!(order, [("a", "1"), ("a", "9"), ("b", "2")].map(|(a, b)| (a.to_string(), b.to_string())));
    assert!(!r.all_ok());
    assert_eq!(r.failures().count(), 1);
    assert_eq!(r.rows[0].status, Status::BoundViolated);

    let other = VerificationReport::new(meta, vec![row("0", "mu-squared").info(1.0, 1.0)], vec![]);
    let m = VerificationReport::merge(vec![r, other]);
    assert_eq!(m.rows[0].claim_id, "0");
    assert_eq!(m.metadata.campaigns.len(), 2);
}

#[test]
fn json_round_trips_and_csv_has_header() {
    let report = run(&small(Campaign::LowerBound)).unwrap();
    let back: VerificationReport = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(back, report);
    let csv = report.to_csv().unwrap();
    assert!(csv.starts_with("claim_id,paper_anchor,params,computed,reference,tolerance,status\n"));
    assert_eq!(csv.lines().count(), report.rows.len() + 1);
}

#[test]
fn emit_writes_report_and_ratio_table() {
    let dir = tempfile::tempdir().unwrap();
    let report = run(&small(Campaign::Theorem4SmallR)).unwrap();
    let paths = emit_report(&report, Format::Csv, dir.path(), "t4").unwrap();
    assert_eq!(paths.len(), 2);
    assert!(dir.path().join("t4.csv").exists());
    let ratios = std::fs::read_to_string(dir.path().join("t4-ratios.csv")).unwrap();
    assert!(ratios.starts_with("f,n,r,alpha,delta,E,omega,ratio_over_gamma"));
}

#[test]
fn config_files_merge_over_defaults() {
    let cfg = CampaignConfig::from_toml_str(
        "campaign = \"lower-bound\"\nn_range = [8]\n[tolerances]\nlower-bound-slack = 0.002\n",
    )
    .unwrap();
    assert_eq!(cfg.campaign, Campaign::LowerBound);
    assert_eq!(cfg.n_range, vec![8]);
    assert_eq!(cfg.r_range, (1..=6).collect::<Vec<_>>());
    assert_eq!(cfg.tol("lower-bound-slack", 1.0), 0.002);
    assert_eq!(cfg.tol("absent", 0.5), 0.5);

    assert!(CampaignConfig::from_toml_str("bogus = 1").is_err());
    assert!(CampaignConfig::from_toml_str("campaign = \"nope\"").is_err());
    assert!(CampaignConfig::from_toml_str("n_range = []").is_err());
    assert!(CampaignConfig::from_toml_str("alpha = [-1.0]").is_err());
    assert!(CampaignConfig::from_toml_str("grid_nodes = 2").is_err());
}

#[test]
fn campaign_names_round_trip_through_toml() {
    for c in Campaign::ALL {
        let cfg = CampaignConfig::from_toml_str(&format!("campaign = \"{}\"", c.name())).unwrap();
        assert_eq!(cfg.campaign, c);
    }
}
