//! Instance files.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::alphabet::IndependenceAlphabet;
use crate::asyncauto::Distribution;
use crate::automaton::Automaton;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphabetSpec {
    pub actions: Vec<String>,
    #[serde(default)]
    pub independence: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonSpec {
    pub states: Vec<String>,
    pub initial: String,
    #[serde(default)]
    pub finals: Vec<String>,
    #[serde(default)]
    pub transitions: Vec<(String, String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub alphabet: AlphabetSpec,
    pub automaton: AutomatonSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution: Option<Vec<Vec<String>>>,
}

impl InstanceFile {
    pub fn from_parts(
        alphabet: &IndependenceAlphabet,
        automaton: &Automaton,
        distribution: Option<&Distribution>,
    ) -> Self {
        let name = |a| alphabet.name(a).to_string();
        InstanceFile {
            alphabet: AlphabetSpec {
                actions: alphabet.names().to_vec(),
                independence: alphabet
                    .independent_pairs()
                    .into_iter()
                    .map(|(a, b)| (name(a), name(b)))
                    .collect(),
            },
            automaton: AutomatonSpec {
                states: automaton.names().to_vec(),
                initial: automaton.name(automaton.initial()).to_string(),
                finals: automaton
                    .finals()
                    .map(|q| automaton.name(q).to_string())
                    .collect(),
                transitions: automaton
                    .transitions()
                    .iter()
                    .map(|t| {
                        (
                            automaton.name(t.from).to_string(),
                            name(t.action),
                            automaton.name(t.to).to_string(),
                        )
                    })
                    .collect(),
            },
            distribution: distribution.map(|d| d.to_names(alphabet)),
        }
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }

    pub fn validate(&self) -> Result<Instance> {
        let alphabet =
            IndependenceAlphabet::new(&self.alphabet.actions, &self.alphabet.independence)
                .map_err(|e| e.at("alphabet"))?;
        let spec = &self.automaton;
        let automaton = Automaton::from_named(
            &alphabet,
            &spec.states,
            &spec.initial,
            &spec.finals,
            &spec.transitions,
        )?;
        let distribution = match &self.distribution {
            Some(procs) => {
                Distribution::from_names(&alphabet, procs).map_err(|e| e.at("distribution"))?
            }
            None => Distribution::default_for(&alphabet),
        };
        let warnings = automaton
            .check_id(&alphabet)
            .iter()
            .map(|v| {
                format!(
                    "property ID violated: {}",
                    v.describe(&automaton, &alphabet)
                )
            })
            .collect();
        Ok(Instance {
            alphabet,
            automaton,
            distribution,
            warnings,
        })
    }
}

/// A validated instance.
#[derive(Clone, Debug)]
pub struct Instance {
    pub alphabet: IndependenceAlphabet,
    pub automaton: Automaton,
    pub distribution: Distribution,
    /// Property ID violations; the construction still runs but its
    /// language guarantee does not apply.
    pub warnings: Vec<String>,
}

impl Instance {
    pub fn satisfies_id(&self) -> bool {
        self.warnings.is_empty()
    }

    pub fn to_file(&self) -> InstanceFile {
        InstanceFile::from_parts(&self.alphabet, &self.automaton, Some(&self.distribution))
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_str(text)?;
    file.validate()
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let text = std::fs::read_to_string(path.as_ref()).map_err(Error::from)?;
    parse_instance(&text)
}
