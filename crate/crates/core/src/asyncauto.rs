//! Distributions and asynchronous automata with on-the-fly global
//! semantics.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::alphabet::{Action, ActionSet, IndependenceAlphabet, Word};
use crate::automaton::{Automaton, Transition};
use crate::error::{Error, Result};

/// A clique cover of the dependence graph: one action set per process.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    processes: Vec<ActionSet>,
    locations: Vec<Vec<usize>>,
}

impl Distribution {
    /// One process per dependent pair of distinct actions, then one
    /// singleton process per action that is in no such pair.
    pub fn default_for(alphabet: &IndependenceAlphabet) -> Self {
        let mut processes = Vec::new();
        let mut paired = ActionSet::empty();
        for a in alphabet.actions() {
            for b in alphabet.actions().filter(|&b| b > a) {
                if alphabet.dependent(a, b) {
                    processes.push(ActionSet::singleton(a).with(b));
                    paired = paired.with(a).with(b);
                }
            }
        }
        for a in alphabet.all().difference(paired).iter() {
            processes.push(ActionSet::singleton(a));
        }
        Distribution::new(alphabet, processes).expect("default cover is a distribution")
    }

    pub fn new(alphabet: &IndependenceAlphabet, processes: Vec<ActionSet>) -> Result<Self> {
        for (k, p) in processes.iter().enumerate() {
            if !p.is_subset(alphabet.all()) {
                return Err(Error::UnknownAction(format!("in process {}", k + 1)));
            }
        }
        let locations: Vec<Vec<usize>> = alphabet
            .actions()
            .map(|a| {
                (0..processes.len())
                    .filter(|&k| processes[k].contains(a))
                    .collect()
            })
            .collect();
        for a in alphabet.actions() {
            if locations[a.index()].is_empty() {
                return Err(Error::ActionUncovered(alphabet.name(a).into()));
            }
        }
        for a in alphabet.actions() {
            for b in alphabet.actions().filter(|&b| b > a) {
                let shared = locations[a.index()]
                    .iter()
                    .find(|k| locations[b.index()].contains(k));
                match (alphabet.dependent(a, b), shared) {
                    (true, None) => {
                        return Err(Error::DependentPairUncovered(
                            alphabet.name(a).into(),
                            alphabet.name(b).into(),
                        ))
                    }
                    (false, Some(&k)) => {
                        return Err(Error::IndependentPairShared(
                            alphabet.name(a).into(),
                            alphabet.name(b).into(),
                            k + 1,
                        ))
                    }
                    _ => {}
                }
            }
        }
        Ok(Distribution {
            processes,
            locations,
        })
    }

    pub fn from_names<S: AsRef<str>>(
        alphabet: &IndependenceAlphabet,
        processes: &[Vec<S>],
    ) -> Result<Self> {
        let sets = processes
            .iter()
            .enumerate()
            .map(|(k, names)| {
                names
                    .iter()
                    .map(|n| alphabet.action(n.as_ref()))
                    .collect::<Result<ActionSet>>()
                    .map_err(|e| e.at(format!("distribution[{k}]")))
            })
            .collect::<Result<Vec<_>>>()?;
        Distribution::new(alphabet, sets)
    }

    pub fn len(&self) -> usize {
        self.processes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.processes.is_empty()
    }

    pub fn processes(&self) -> &[ActionSet] {
        &self.processes
    }

    pub fn process(&self, k: usize) -> ActionSet {
        self.processes[k]
    }

    /// Processes that take part in `a`, in increasing order.
    pub fn location(&self, a: Action) -> &[usize] {
        &self.locations[a.index()]
    }

    pub fn action_count(&self) -> usize {
        self.locations.len()
    }

    pub fn to_names(&self, alphabet: &IndependenceAlphabet) -> Vec<Vec<String>> {
        self.processes
            .iter()
            .map(|&p| alphabet.set_names(p))
            .collect()
    }
}

/// Local transition relations `∂_a` of an asynchronous automaton, given
/// intensionally. Tuples are indexed like [`Distribution::location`].
pub trait LocalRelations {
    fn local_states(&self, process: usize) -> usize;

    fn initial(&self, process: usize) -> usize;

    /// All `to` with `(from, to) ∈ ∂_a`, sorted and without duplicates.
    fn successors(&self, action: Action, from: &[usize]) -> Vec<Vec<usize>>;

    fn relates(&self, action: Action, from: &[usize], to: &[usize]) -> bool {
        self.successors(action, from).iter().any(|t| t == to)
    }

    fn is_final(&self, global: &[usize]) -> bool;
}

pub type GlobalState = Vec<usize>;

#[derive(Clone, Debug)]
pub struct AsyncAutomaton<R> {
    distribution: Distribution,
    relations: R,
}

impl<R: LocalRelations> AsyncAutomaton<R> {
    pub fn new(distribution: Distribution, relations: R) -> Self {
        AsyncAutomaton {
            distribution,
            relations,
        }
    }

    pub fn distribution(&self) -> &Distribution {
        &self.distribution
    }

    pub fn relations(&self) -> &R {
        &self.relations
    }

    pub fn actions(&self) -> ActionSet {
        ActionSet::first(self.distribution.action_count())
    }

    pub fn initial_state(&self) -> GlobalState {
        (0..self.distribution.len())
            .map(|k| self.relations.initial(k))
            .collect()
    }

    pub fn is_final(&self, g: &[usize]) -> bool {
        self.relations.is_final(g)
    }

    /// Global `a`-successors of `g`: the processes of `Loc(a)` move by
    /// `∂_a`, the others stay put.
    pub fn successors_on(&self, g: &[usize], a: Action) -> Vec<GlobalState> {
        let loc = self.distribution.location(a);
        let from: Vec<usize> = loc.iter().map(|&k| g[k]).collect();
        self.relations
            .successors(a, &from)
            .into_iter()
            .map(|to| {
                let mut r = g.to_vec();
                for (i, &k) in loc.iter().enumerate() {
                    r[k] = to[i];
                }
                r
            })
            .collect()
    }

    pub fn global_successors(&self, g: &[usize]) -> Vec<(Action, GlobalState)> {
        self.actions()
            .iter()
            .flat_map(|a| self.successors_on(g, a).into_iter().map(move |r| (a, r)))
            .collect()
    }

    /// The reachable part of the global automaton; fails once more than
    /// `cap` global states are discovered.
    pub fn global_automaton_bounded(&self, cap: usize) -> Result<Automaton> {
        let mut explorer = Explorer::new(self, cap);
        let init = explorer.intern(&self.initial_state())?;
        let mut transitions = Vec::new();
        let mut next = 0;
        while next < explorer.states.len() {
            let g = explorer.states[next].clone();
            for a in self.actions().iter() {
                for r in self.successors_on(&g, a) {
                    let to = explorer.intern(&r)?;
                    transitions.push(Transition::new(next, a, to as usize));
                }
            }
            next += 1;
        }
        let names = explorer
            .states
            .iter()
            .map(|g| {
                let parts: Vec<String> = g.iter().map(usize::to_string).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let finals: Vec<usize> = (0..explorer.states.len())
            .filter(|&i| self.is_final(&explorer.states[i]))
            .collect();
        Automaton::new(names, init as usize, self.actions(), transitions, finals)
    }

    /// Whether every `∂_a` is a partial function. Enumerates all
    /// `Loc(a)`-tuples of local states.
    pub fn is_deterministic(&self) -> bool {
        self.actions().iter().all(|a| {
            let loc = self.distribution.location(a);
            let sizes: Vec<usize> = loc
                .iter()
                .map(|&k| self.relations.local_states(k))
                .collect();
            let mut tuple = vec![0; loc.len()];
            if sizes.contains(&0) {
                return true;
            }
            loop {
                if self.relations.successors(a, &tuple).len() > 1 {
                    return false;
                }
                let mut i = 0;
                loop {
                    if i == tuple.len() {
                        return true;
                    }
                    tuple[i] += 1;
                    if tuple[i] < sizes[i] {
                        break;
                    }
                    tuple[i] = 0;
                    i += 1;
                }
            }
        })
    }

    /// Accepted words of length at most `maxlen`.
    pub fn enumerate_language(&self, maxlen: usize, cap: usize) -> Result<BTreeSet<Word>> {
        self.enumerate_language_hiding(maxlen, ActionSet::empty(), cap)
    }

    /// Words over the visible actions of length at most `maxlen` whose
    /// some interleaving with hidden actions is accepted. Hidden moves are
    /// unbounded in number.
    pub fn enumerate_language_hiding(
        &self,
        maxlen: usize,
        hidden: ActionSet,
        cap: usize,
    ) -> Result<BTreeSet<Word>> {
        let mut ex = Explorer::new(self, cap);
        let visible: Vec<Action> = self.actions().difference(hidden).iter().collect();
        let init = ex.intern(&self.initial_state())?;
        let init = ex.closure([init].into(), hidden)?;
        let mut out = BTreeSet::new();
        let mut layer: Vec<(Word, BTreeSet<u32>)> = vec![(Vec::new(), init)];
        for len in 0..=maxlen {
            for (w, set) in &layer {
                if ex.any_final(set) {
                    out.insert(w.clone());
                }
            }
            if len == maxlen {
                break;
            }
            let mut next = Vec::new();
            for (w, set) in &layer {
                for &a in &visible {
                    let stepped = ex.step_set(set, a)?;
                    if stepped.is_empty() {
                        continue;
                    }
                    let closed = ex.closure(stepped, hidden)?;
                    let mut w2 = w.clone();
                    w2.push(a);
                    next.push((w2, closed));
                }
            }
            layer = next;
        }
        Ok(out)
    }

    /// Whether some interleaving of `word` with hidden actions is accepted.
    pub fn accepts_hiding(&self, word: &[Action], hidden: ActionSet, cap: usize) -> Result<bool> {
        let mut ex = Explorer::new(self, cap);
        let init = ex.intern(&self.initial_state())?;
        let mut set = ex.closure([init].into(), hidden)?;
        for &a in word {
            let stepped = ex.step_set(&set, a)?;
            if stepped.is_empty() {
                return Ok(false);
            }
            set = ex.closure(stepped, hidden)?;
        }
        Ok(ex.any_final(&set))
    }
}

/// Interns global states and caches their successors.
struct Explorer<'a, R> {
    aa: &'a AsyncAutomaton<R>,
    ids: HashMap<GlobalState, u32>,
    states: Vec<GlobalState>,
    finals: Vec<bool>,
    succ: HashMap<(u32, Action), Vec<u32>>,
    cap: usize,
}

impl<'a, R: LocalRelations> Explorer<'a, R> {
    fn new(aa: &'a AsyncAutomaton<R>, cap: usize) -> Self {
        Explorer {
            aa,
            ids: HashMap::new(),
            states: Vec::new(),
            finals: Vec::new(),
            succ: HashMap::new(),
            cap,
        }
    }

    fn intern(&mut self, g: &[usize]) -> Result<u32> {
        if let Some(&id) = self.ids.get(g) {
            return Ok(id);
        }
        if self.states.len() >= self.cap {
            return Err(Error::CapExceeded(self.cap));
        }
        let id = self.states.len() as u32;
        self.ids.insert(g.to_vec(), id);
        self.states.push(g.to_vec());
        self.finals.push(self.aa.is_final(g));
        Ok(id)
    }

    fn step(&mut self, s: u32, a: Action) -> Result<Vec<u32>> {
        if let Some(v) = self.succ.get(&(s, a)) {
            return Ok(v.clone());
        }
        let g = self.states[s as usize].clone();
        let mut out = Vec::new();
        for r in self.aa.successors_on(&g, a) {
            out.push(self.intern(&r)?);
        }
        self.succ.insert((s, a), out.clone());
        Ok(out)
    }

    fn step_set(&mut self, set: &BTreeSet<u32>, a: Action) -> Result<BTreeSet<u32>> {
        let mut out = BTreeSet::new();
        for &s in set {
            out.extend(self.step(s, a)?);
        }
        Ok(out)
    }

    fn closure(&mut self, mut set: BTreeSet<u32>, hidden: ActionSet) -> Result<BTreeSet<u32>> {
        if hidden.is_empty() {
            return Ok(set);
        }
        let mut stack: Vec<u32> = set.iter().copied().collect();
        while let Some(s) = stack.pop() {
            for a in hidden.iter() {
                for r in self.step(s, a)? {
                    if set.insert(r) {
                        stack.push(r);
                    }
                }
            }
        }
        Ok(set)
    }

    fn any_final(&self, set: &BTreeSet<u32>) -> bool {
        set.iter().any(|&s| self.finals[s as usize])
    }
}

/// Explicitly tabulated local relations.
#[derive(Clone, Debug, Default)]
pub struct ExplicitRelations {
    counts: Vec<usize>,
    initials: Vec<usize>,
    delta: Vec<BTreeMap<Vec<usize>, BTreeSet<Vec<usize>>>>,
    finals: BTreeSet<GlobalState>,
}

impl ExplicitRelations {
    pub fn new(counts: Vec<usize>, initials: Vec<usize>, actions: usize) -> Self {
        ExplicitRelations {
            counts,
            initials,
            delta: vec![BTreeMap::new(); actions],
            finals: BTreeSet::new(),
        }
    }

    pub fn add(&mut self, action: Action, from: Vec<usize>, to: Vec<usize>) {
        self.delta[action.index()]
            .entry(from)
            .or_default()
            .insert(to);
    }

    pub fn set_final(&mut self, g: GlobalState) {
        self.finals.insert(g);
    }
}

impl LocalRelations for ExplicitRelations {
    fn local_states(&self, process: usize) -> usize {
        self.counts[process]
    }

    fn initial(&self, process: usize) -> usize {
        self.initials[process]
    }

    fn successors(&self, action: Action, from: &[usize]) -> Vec<Vec<usize>> {
        self.delta[action.index()]
            .get(from)
            .map(|s| s.iter().cloned().collect())
            .unwrap_or_default()
    }

    fn is_final(&self, global: &[usize]) -> bool {
        self.finals.contains(global)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(actions: &[&str], ind: &[(&str, &str)]) -> IndependenceAlphabet {
        IndependenceAlphabet::new(actions, ind).unwrap()
    }

    fn sets(al: &IndependenceAlphabet, ps: &[&str]) -> Vec<ActionSet> {
        ps.iter()
            .map(|p| {
                p.chars()
                    .map(|c| al.action(&c.to_string()).unwrap())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn default_distributions() {
        let al = alpha(&["a", "b"], &[("a", "b")]);
        assert_eq!(
            Distribution::default_for(&al).processes(),
            sets(&al, &["a", "b"])
        );
        let al = alpha(&["a", "b"], &[]);
        assert_eq!(
            Distribution::default_for(&al).processes(),
            sets(&al, &["ab"])
        );
        let al = alpha(&["a", "b", "c"], &[("a", "c"), ("b", "c")]);
        let d = Distribution::default_for(&al);
        assert_eq!(d.processes(), sets(&al, &["ab", "c"]));
        assert!(al.actions().all(|a| !d.location(a).is_empty()));
    }

    #[test]
    fn validation() {
        let al = alpha(&["a", "b"], &[("a", "b")]);
        assert!(Distribution::new(&al, sets(&al, &["a", "b"])).is_ok());
        assert!(matches!(
            Distribution::new(&al, sets(&al, &["ab"])),
            Err(Error::IndependentPairShared(..))
        ));
        assert!(matches!(
            Distribution::new(&al, sets(&al, &["a"])),
            Err(Error::ActionUncovered(_))
        ));
        let dep = alpha(&["a", "b"], &[]);
        assert!(matches!(
            Distribution::new(&dep, sets(&dep, &["a", "b"])),
            Err(Error::DependentPairUncovered(..))
        ));
    }

    /// One process whose local automaton is (ab)*.
    fn single_process() -> (IndependenceAlphabet, AsyncAutomaton<ExplicitRelations>) {
        let al = alpha(&["a", "b"], &[]);
        let d = Distribution::default_for(&al);
        let mut r = ExplicitRelations::new(vec![2], vec![0], 2);
        r.add(Action::new(0), vec![0], vec![1]);
        r.add(Action::new(1), vec![1], vec![0]);
        r.set_final(vec![0]);
        (al, AsyncAutomaton::new(d, r))
    }

    #[test]
    fn global_semantics_of_one_process() {
        let (al, aa) = single_process();
        assert_eq!(aa.global_successors(&[0]), vec![(Action::new(0), vec![1])]);
        let g = aa.global_automaton_bounded(10).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.transitions().len(), 2);
        let lang = g.enumerate_language(6);
        assert_eq!(lang, aa.enumerate_language(6, 10).unwrap());
        assert_eq!(lang.len(), 4);
        assert!(g.check_id(&al).is_empty());
        assert!(aa.is_deterministic());
        assert!(matches!(
            aa.global_automaton_bounded(1),
            Err(Error::CapExceeded(1))
        ));
    }

    #[test]
    fn empty_relations() {
        let al = alpha(&["a", "b"], &[("a", "b")]);
        let d = Distribution::default_for(&al);
        let r = ExplicitRelations::new(vec![2, 2], vec![0, 0], 2);
        let aa = AsyncAutomaton::new(d, r);
        assert!(aa.global_successors(&[0, 0]).is_empty());
        assert!(aa.is_deterministic());
    }

    #[test]
    fn two_processes_interleave() {
        let al = alpha(&["a", "b"], &[("a", "b")]);
        let d = Distribution::default_for(&al);
        let mut r = ExplicitRelations::new(vec![2, 2], vec![0, 0], 2);
        r.add(Action::new(0), vec![0], vec![1]);
        r.add(Action::new(0), vec![0], vec![0]);
        r.add(Action::new(1), vec![0], vec![1]);
        r.set_final(vec![1, 1]);
        let aa = AsyncAutomaton::new(d, r);
        assert!(!aa.is_deterministic());
        let succ = aa.global_successors(&[0, 0]);
        assert_eq!(
            succ,
            vec![
                (Action::new(0), vec![0, 0]),
                (Action::new(0), vec![1, 0]),
                (Action::new(1), vec![0, 1])
            ]
        );
        let g = aa.global_automaton_bounded(100).unwrap();
        assert_eq!(g.len(), 4);
        assert!(g.check_id(&al).is_empty());
        let w = |s| al.parse_word(s).unwrap();
        assert!(aa.accepts_hiding(&w("ab"), ActionSet::empty(), 10).unwrap());
        assert!(aa.accepts_hiding(&w("ba"), ActionSet::empty(), 10).unwrap());
        // hiding a: b alone is accepted
        let hide_a = ActionSet::singleton(Action::new(0));
        assert!(aa.accepts_hiding(&w("b"), hide_a, 10).unwrap());
        assert_eq!(
            aa.enumerate_language_hiding(2, hide_a, 10).unwrap(),
            [w("b")].into()
        );
    }
}
