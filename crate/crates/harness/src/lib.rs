//! Experiment campaigns over `stechkin-core`: constants tables, inequality
//! sweeps on a function corpus, machine-readable reports and SVG plots.

pub mod anchors;
pub mod campaigns;
pub mod config;
pub mod corpus;
pub mod plots;
pub mod report;

pub use campaigns::run;
pub use config::{Campaign, CampaignConfig, CorpusKind};
pub use report::{Format, Row, Status, VerificationReport};
