use serde::Deserialize;

/// The bundled manifest of checked claims.
pub const MANIFEST: &str = include_str!("../../../docs/anchors.toml");

/// Anchor value for rows without a claim behind them.
pub const EXPLORATORY: &str = "exploratory";

#[derive(Debug, Clone, Deserialize)]
pub struct Anchor {
    pub id: String,
    pub claim: String,
}

#[derive(Deserialize)]
struct Manifest {
    anchor: Vec<Anchor>,
}

pub fn load() -> Vec<Anchor> {
    toml::from_str::<Manifest>(MANIFEST).expect("bundled manifest parses").anchor
}

pub fn resolves(id: &str) -> bool {
    id == EXPLORATORY || load().iter().any(|a| a.id == id)
}
