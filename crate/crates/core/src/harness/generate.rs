//! Random instances: the global automaton of a random asynchronous
//! automaton, so that property ID holds by construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::IndependenceAlphabet;
use crate::asyncauto::{AsyncAutomaton, Distribution, ExplicitRelations};
use crate::automaton::{Automaton, Transition};
use crate::error::{Error, Result};
use crate::harness::instance::InstanceFile;

pub const MAX_GEN_ACTIONS: usize = 4;
pub const MAX_GEN_LOCAL_STATES: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub seed: u64,
    /// Upper bound on the local states of each process.
    pub local_states: usize,
    pub actions: usize,
    /// Bound on the global states explored.
    pub cap: usize,
}

impl GenParams {
    pub fn new(seed: u64, local_states: usize, actions: usize) -> Self {
        GenParams {
            seed,
            local_states,
            actions,
            cap: 100_000,
        }
    }

    fn check(&self) -> Result<()> {
        if !(1..=MAX_GEN_ACTIONS).contains(&self.actions) {
            return Err(Error::Params(format!(
                "alphabet size must be between 1 and {MAX_GEN_ACTIONS}"
            )));
        }
        if !(1..=MAX_GEN_LOCAL_STATES).contains(&self.local_states) {
            return Err(Error::Params(format!(
                "local state count must be between 1 and {MAX_GEN_LOCAL_STATES}"
            )));
        }
        if self.cap == 0 {
            return Err(Error::Params("cap must be positive".into()));
        }
        Ok(())
    }
}

const NAMES: [&str; MAX_GEN_ACTIONS] = ["a", "b", "c", "d"];

fn all_tuples(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &s in sizes {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..s).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

pub fn generate_instance(params: &GenParams) -> Result<InstanceFile> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let names = &NAMES[..params.actions];
    let mut independence = Vec::new();
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            if rng.gen_bool(0.5) {
                independence.push((names[i], names[j]));
            }
        }
    }
    let alphabet = IndependenceAlphabet::new(names, &independence)?;
    let distribution = Distribution::default_for(&alphabet);
    let counts: Vec<usize> = (0..distribution.len())
        .map(|_| rng.gen_range(1..=params.local_states))
        .collect();
    let mut relations =
        ExplicitRelations::new(counts.clone(), vec![0; counts.len()], alphabet.len());
    for a in alphabet.actions() {
        let sizes: Vec<usize> = distribution
            .location(a)
            .iter()
            .map(|&k| counts[k])
            .collect();
        for from in all_tuples(&sizes) {
            let fanout = match rng.gen_range(0..20) {
                0..=7 => 0,
                8..=16 => 1,
                _ => 2,
            };
            for _ in 0..fanout {
                let to = sizes.iter().map(|&s| rng.gen_range(0..s)).collect();
                relations.add(a, from.clone(), to);
            }
        }
    }
    // explore once without finals to learn the reachable global states
    let probe = AsyncAutomaton::new(distribution.clone(), relations.clone());
    let reachable = probe.global_automaton_bounded(params.cap)?;
    let mut finals: Vec<usize> = (0..reachable.len())
        .filter(|_| rng.gen_bool(0.35))
        .collect();
    if finals.is_empty() {
        finals.push(rng.gen_range(0..reachable.len()));
    }
    let tuple_of = |q: usize| parse_tuple(reachable.name(q));
    for &q in &finals {
        relations.set_final(tuple_of(q));
    }
    let aa = AsyncAutomaton::new(distribution.clone(), relations);
    let global = aa.global_automaton_bounded(params.cap)?;
    let global = rename(&global, |q| format!("g{q}"));
    Ok(InstanceFile::from_parts(
        &alphabet,
        &global,
        Some(&distribution),
    ))
}

fn parse_tuple(name: &str) -> Vec<usize> {
    name.trim_matches(|c| c == '(' || c == ')')
        .split(',')
        .map(|x| x.parse().expect("global state names are tuples"))
        .collect()
}

fn rename(a: &Automaton, f: impl Fn(usize) -> String) -> Automaton {
    let names = (0..a.len()).map(f).collect();
    let transitions: Vec<Transition> = a.transitions().to_vec();
    Automaton::new(
        names,
        a.initial(),
        a.actions(),
        transitions,
        a.finals().collect::<Vec<_>>(),
    )
    .expect("renaming keeps the automaton valid")
}
