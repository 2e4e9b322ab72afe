//! Scenario files.

use std::path::Path;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::engine::{GuMode, Instance, Level, Options, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::form_ideal::{enumerate_form_ideals, gamma_bounds, ideal_closure, FormIdeal};
use crate::ring::{build_ring, lambda_bounds, Elem, FormParameter, FormRing, RingSpec, Symmetry};
use crate::subset::Subset;

/// Rings up to this order get their full form-ideal lattice.
pub const LATTICE_MAX_ORDER: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    Min,
    Max,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamChoice {
    Bound(Bound),
    Members(Vec<Elem>),
}

impl Default for ParamChoice {
    fn default() -> Self {
        ParamChoice::Bound(Bound::Max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaBound {
    GammaMin,
    GammaMax,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GammaChoice {
    Bound(GammaBound),
    Members(Vec<Elem>),
}

impl Default for GammaChoice {
    fn default() -> Self {
        GammaChoice::Bound(GammaBound::GammaMax)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealSpec {
    /// Ideal generators; the ideal is the smallest involution-invariant
    /// two-sided ideal containing them.
    pub generators: Vec<Elem>,
    #[serde(default)]
    pub gamma: GammaChoice,
}

/// One configured check. Unset lists default to the scenario's ideals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideals: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<[String; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triples: Option<Vec<[String; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tuples: Option<Vec<Vec<String>>>,
    /// `exhaustive` or `random` for the relation sweep.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_relation: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Leaves forced to kind E, one at a time.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_positions: Option<Vec<usize>>,
    /// Outer split after leaf `k` (leaves `0..=k` on the left).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugator_length: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub ring: RingSpec,
    pub lambda: Elem,
    #[serde(default)]
    pub form_parameter: ParamChoice,
    pub n: usize,
    #[serde(default)]
    pub ideals: IndexMap<String, IdealSpec>,
    /// Run ideal-quantified checks over the whole lattice.
    #[serde(default)]
    pub lattice: bool,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub gu_mode: GuMode,
}

fn default_budget() -> usize {
    DEFAULT_BUDGET
}

fn default_samples() -> usize {
    1000
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

/// A resolved scenario: the instance and its named form ideals.
pub struct Scenario {
    pub config: ScenarioConfig,
    pub instance: Instance,
    /// User ideals in file order, then `0` and `A` unless already named.
    pub levels: IndexMap<String, Level>,
    /// Default range of ideal-quantified checks.
    pub universe: Vec<Level>,
}

impl Scenario {
    pub fn build(config: ScenarioConfig) -> Result<Self> {
        let ring = Arc::new(build_ring(&config.ring).map_err(|e| Error::Config(e.to_string()))?);
        let sym = Symmetry::new(&ring, config.lambda).map_err(|e| Error::Config(e.to_string()))?;
        let (lmin, lmax) = lambda_bounds(&ring, sym);
        let members = match &config.form_parameter {
            ParamChoice::Bound(Bound::Min) => lmin,
            ParamChoice::Bound(Bound::Max) => lmax,
            ParamChoice::Members(v) => subset_of(ring.order(), v)?,
        };
        let fr = FormRing::new(ring.clone(), sym, FormParameter { members });
        let mut levels = IndexMap::new();
        for (name, spec) in &config.ideals {
            let ideal = ideal_closure(&ring, &spec.generators);
            if spec.generators.iter().any(|&g| g as usize >= ring.order()) {
                return Err(Error::Config(format!("ideal {name}: generator outside the ring")));
            }
            let (gmin, gmax) = gamma_bounds(&fr, ideal);
            let gamma = match &spec.gamma {
                GammaChoice::Bound(GammaBound::GammaMin) => gmin,
                GammaChoice::Bound(GammaBound::GammaMax) => gmax,
                GammaChoice::Members(v) => subset_of(ring.order(), v)?,
            };
            levels.insert(name.clone(), Level { name: name.clone(), ideal: FormIdeal { ideal, gamma } });
        }
        for (name, fi) in [("0", FormIdeal::zero(&fr)), ("A", FormIdeal::unit(&fr))] {
            if !levels.contains_key(name) && !levels.values().any(|l| l.ideal == fi) {
                levels.insert(name.to_string(), Level { name: name.to_string(), ideal: fi });
            }
        }
        let universe = if config.lattice && ring.order() <= LATTICE_MAX_ORDER {
            enumerate_form_ideals(&fr, config.budget)?
                .into_iter()
                .enumerate()
                .map(|(k, fi)| match levels.values().find(|l| l.ideal == fi) {
                    Some(l) => l.clone(),
                    None => Level { name: format!("L{k}"), ideal: fi },
                })
                .collect()
        } else {
            config.ideals.keys().map(|k| levels[k].clone()).collect()
        };
        let options = Options { budget: config.budget, seed: config.seed, gu_mode: config.gu_mode, ..Options::default() };
        let instance = Instance::new(fr, config.n, options).map_err(|e| Error::Config(e.to_string()))?;
        let scenario = Scenario { config, instance, levels, universe };
        scenario.check_references()?;
        Ok(scenario)
    }

    pub fn fr(&self) -> &FormRing {
        &self.instance.fr
    }

    /// Looks a name up among named ideals, then lattice names.
    pub fn level(&self, name: &str) -> Result<Level> {
        self.levels
            .get(name)
            .or_else(|| self.universe.iter().find(|l| l.name == name))
            .cloned()
            .ok_or_else(|| Error::Config(format!("undefined ideal {name:?}")))
    }

    pub fn unit_level(&self) -> Level {
        let unit = FormIdeal::unit(self.fr());
        self.levels.values().find(|l| l.ideal == unit).cloned().expect("unit level is always present")
    }

    fn check_references(&self) -> Result<()> {
        for c in &self.config.checks {
            let names = c
                .ideals
                .iter()
                .flatten()
                .chain(c.pairs.iter().flatten().flatten())
                .chain(c.triples.iter().flatten().flatten())
                .chain(c.tuples.iter().flatten().flatten());
            for name in names {
                self.level(name)?;
            }
        }
        Ok(())
    }
}

fn subset_of(order: usize, v: &[Elem]) -> Result<Subset> {
    let mut s = Subset::EMPTY;
    for &x in v {
        if x as usize >= order {
            return Err(Error::Config(format!("{x} is not a ring element")));
        }
        s.insert(x);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z4: &str = r#"{
        "name": "z4", "ring": {"kind": "zmod", "m": 4}, "lambda": 3, "n": 3, "lattice": true,
        "ideals": {"I": {"generators": [2], "gamma": "gamma_max"}, "I0": {"generators": [2], "gamma": "gamma_min"}}
    }"#;

    #[test]
    fn resolves_names_and_lattice() {
        let s = Scenario::build(ScenarioConfig::from_json(Z4).unwrap()).unwrap();
        assert_eq!(s.level("I").unwrap().ideal.gamma.to_vec(), vec![0, 2]);
        assert_eq!(s.level("I0").unwrap().ideal.gamma.to_vec(), vec![0]);
        let names: Vec<&str> = s.universe.iter().map(|l| l.name.as_str()).collect();
        assert_eq!(names, vec!["0", "I0", "I", "A"]);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(ScenarioConfig::from_json("{").is_err());
        assert!(ScenarioConfig::from_json(r#"{"name":"x","ring":{"kind":"zmod","m":4},"lambda":3,"n":3,"bogus":1}"#).is_err());
        let bad_ref = Z4.replace("\"lattice\": true", "\"checks\": [{\"name\": \"standard\", \"pairs\": [[\"I\", \"J\"]]}]");
        assert!(Scenario::build(ScenarioConfig::from_json(&bad_ref).unwrap()).is_err());
        let bad_lambda = Z4.replace("\"lambda\": 3", "\"lambda\": 2");
        assert!(Scenario::build(ScenarioConfig::from_json(&bad_lambda).unwrap()).is_err());
    }
}
