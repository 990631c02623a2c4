use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use stechkin_harness::report::{emit_report, Format};
use stechkin_harness::{anchors, campaigns, plots, Campaign, CampaignConfig, CorpusKind, VerificationReport};

#[derive(Parser)]
#[command(name = "stechkin", version, about = "Verification campaigns for direct approximation inequalities")]
struct Cli {
    /// TOML file mirroring the campaign configuration; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for reports and plots.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the constants table.
    Constants {
        /// Tolerance for closed-form comparisons.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Run one inequality campaign over the corpus.
    Sweep {
        #[arg(long, value_enum)]
        campaign: Option<Campaign>,
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        r: Option<Vec<u32>>,
        #[arg(long, value_delimiter = ',')]
        alpha: Option<Vec<f64>>,
        #[arg(long, value_enum, value_delimiter = ',')]
        corpus: Option<Vec<CorpusKind>>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run campaigns (all by default) and write a report.
    Report {
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        plots: bool,
        #[arg(long, value_enum, value_delimiter = ',')]
        campaigns: Option<Vec<Campaign>>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List the claims that report rows refer to.
    ShowAnchors,
}

fn base_config(path: &Option<PathBuf>, campaign: Campaign) -> anyhow::Result<CampaignConfig> {
    match path {
        Some(p) => {
            let mut cfg = CampaignConfig::from_file(p)?;
            if cfg.campaign != campaign {
                let tolerances = cfg.tolerances.clone();
                let seed = cfg.seed;
                cfg = CampaignConfig::for_campaign(campaign);
                cfg.tolerances = tolerances;
                cfg.seed = seed;
            }
            Ok(cfg)
        }
        None => Ok(CampaignConfig::for_campaign(campaign)),
    }
}

fn summarise(report: &VerificationReport) {
    let failures: Vec<_> = report.failures().collect();
    println!("{} rows, {} failing", report.rows.len(), failures.len());
    for r in failures {
        println!(
            "  {} [{}] {:?}: computed {} vs {} (tol {}) -> {}",
            r.claim_id, r.paper_anchor, r.params, r.computed, r.reference, r.tolerance, r.status
        );
    }
}

fn real_main() -> anyhow::Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::Constants { tol } => {
            let mut cfg = base_config(&cli.config, Campaign::Constants)?;
            if let Some(t) = tol {
                cfg.tolerances.insert("constants".into(), t);
            }
            let report = campaigns::run(&cfg)?;
            for r in &report.rows {
                println!("{:<28} {:<44} {:>22.12} {:>22.12}  {}", r.claim_id, fmt_params(r), r.computed, r.reference, r.status);
            }
            emit_report(&report, Format::Json, &cli.out, "constants")?;
            Ok(report.all_ok())
        }
        Command::Sweep { campaign, n, r, alpha, corpus, seed } => {
            let file_campaign = match &cli.config {
                Some(p) => Some(CampaignConfig::from_file(p)?.campaign),
                None => None,
            };
            let campaign = campaign.or(file_campaign).unwrap_or(Campaign::Theorem1Upper);
            let mut cfg = base_config(&cli.config, campaign)?;
            if let Some(v) = n {
                cfg.n_range = v;
            }
            if let Some(v) = r {
                cfg.r_range = v;
            }
            if let Some(v) = alpha {
                cfg.alpha = v;
            }
            if let Some(v) = corpus {
                cfg.corpus = v;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let report = campaigns::run(&cfg)?;
            summarise(&report);
            for p in emit_report(&report, Format::Json, &cli.out, campaign.name())? {
                println!("wrote {}", p.display());
            }
            Ok(report.all_ok())
        }
        Command::Report { format, plots: want_plots, campaigns: which, seed } => {
            let which = which.unwrap_or_else(campaigns::default_campaigns);
            let mut reports = Vec::new();
            for c in which {
                let mut cfg = base_config(&cli.config, c)?;
                if let Some(s) = seed {
                    cfg.seed = s;
                }
                eprintln!("running {}", c.name());
                reports.push(campaigns::run(&cfg).with_context(|| format!("campaign {}", c.name()))?);
            }
            let report = VerificationReport::merge(reports);
            summarise(&report);
            for p in emit_report(&report, format, &cli.out, "report")? {
                println!("wrote {}", p.display());
            }
            if want_plots {
                for p in plots::write_plots(&report, &cli.out)? {
                    println!("wrote {}", p.display());
                }
            }
            Ok(report.all_ok())
        }
        Command::ShowAnchors => {
            for a in anchors::load() {
                println!("{:<26} {}", a.id, a.claim);
            }
            Ok(true)
        }
    }
}

fn fmt_params(r: &stechkin_harness::Row) -> String {
    r.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
