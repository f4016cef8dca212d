//! Bundled demo scenarios, one per kind.

use crate::error::Result;
use crate::scenario::{parse_scenarios, Kind, Scenario};

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        [$(($name, include_str!(concat!("../scenarios/", $name, ".json")))),*]
    };
}

const SOURCES: [(&str, &str); 11] = bundled!(
    "axiom-check",
    "chsh",
    "mermin-peres",
    "complementarity",
    "uncertainty",
    "weak-law",
    "effects",
    "hydrogen",
    "moon",
    "dynamics",
    "young-measure",
);

/// The JSON text of the demo for `kind`.
pub fn source(kind: Kind) -> &'static str {
    SOURCES
        .iter()
        .find(|(name, _)| *name == kind.name())
        .map(|(_, text)| *text)
        .expect("every kind has a bundled scenario")
}

pub fn demo(kind: Kind) -> Result<Scenario> {
    let mut scenarios = parse_scenarios(source(kind), kind.name())?;
    Ok(scenarios.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_demo_parses_to_its_kind() {
        for kind in Kind::ALL {
            assert_eq!(demo(kind).unwrap().kind, kind);
        }
    }
}
