//! Finite, possibly non-deterministic automata over a subset of an
//! independence alphabet.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;

use crate::alphabet::{Action, ActionSet, IndependenceAlphabet, Word};
use crate::error::{Error, Result};

pub type StateId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub from: StateId,
    pub action: Action,
    pub to: StateId,
}

impl Transition {
    pub fn new(from: StateId, action: Action, to: StateId) -> Self {
        Transition { from, action, to }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    names: Vec<String>,
    initial: StateId,
    actions: ActionSet,
    transitions: Vec<Transition>,
    out: Vec<Vec<(Action, StateId)>>,
    finals: FixedBitSet,
}

impl Automaton {
    pub fn new(
        names: Vec<String>,
        initial: StateId,
        actions: ActionSet,
        transitions: impl IntoIterator<Item = Transition>,
        finals: impl IntoIterator<Item = StateId>,
    ) -> Result<Self> {
        let n = names.len();
        let state_err = |q: StateId| Error::UnknownState(format!("#{q}"));
        if initial >= n {
            return Err(state_err(initial));
        }
        let mut final_set = FixedBitSet::with_capacity(n);
        for q in finals {
            if q >= n {
                return Err(state_err(q));
            }
            final_set.insert(q);
        }
        let mut transitions: Vec<Transition> = transitions.into_iter().collect();
        for t in &transitions {
            if t.from >= n {
                return Err(state_err(t.from));
            }
            if t.to >= n {
                return Err(state_err(t.to));
            }
            if !actions.contains(t.action) {
                return Err(Error::LabelOutsideActions(format!("#{}", t.action.index())));
            }
        }
        transitions.sort_unstable();
        transitions.dedup();
        let mut out = vec![Vec::new(); n];
        for t in &transitions {
            out[t.from].push((t.action, t.to));
        }
        Ok(Automaton {
            names,
            initial,
            actions,
            transitions,
            out,
            finals: final_set,
        })
    }

    /// Builds an automaton from named states; used by file loaders.
    pub fn from_named<S: AsRef<str>>(
        alphabet: &IndependenceAlphabet,
        states: &[S],
        initial: &str,
        finals: &[S],
        transitions: &[(S, S, S)],
    ) -> Result<Self> {
        let mut index = HashMap::with_capacity(states.len());
        let mut names = Vec::with_capacity(states.len());
        for (i, s) in states.iter().enumerate() {
            let s = s.as_ref();
            if index.insert(s.to_string(), i).is_some() {
                return Err(Error::DuplicateState(s.into()).at(format!("automaton.states[{i}]")));
            }
            names.push(s.to_string());
        }
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::UnknownState(s.into()))
        };
        let initial = lookup(initial).map_err(|e| e.at("automaton.initial"))?;
        let finals = finals
            .iter()
            .enumerate()
            .map(|(i, f)| lookup(f.as_ref()).map_err(|e| e.at(format!("automaton.finals[{i}]"))))
            .collect::<Result<Vec<_>>>()?;
        let transitions = transitions
            .iter()
            .enumerate()
            .map(|(i, (p, a, q))| {
                let at = |e: Error| e.at(format!("automaton.transitions[{i}]"));
                Ok(Transition::new(
                    lookup(p.as_ref()).map_err(at)?,
                    alphabet.action(a.as_ref()).map_err(at)?,
                    lookup(q.as_ref()).map_err(at)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Automaton::new(names, initial, alphabet.all(), transitions, finals)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn actions(&self) -> ActionSet {
        self.actions
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.names[q]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn state(&self, name: &str) -> Result<StateId> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownState(name.into()))
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals.contains(q)
    }

    pub fn finals(&self) -> impl Iterator<Item = StateId> + '_ {
        self.finals.ones()
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn successors(&self, q: StateId) -> &[(Action, StateId)] {
        &self.out[q]
    }

    pub fn has_transition(&self, from: StateId, a: Action, to: StateId) -> bool {
        self.out[from].iter().any(|&(b, r)| b == a && r == to)
    }

    fn check_state(&self, q: StateId) -> Result<()> {
        if q < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownState(format!("#{q}")))
        }
    }

    /// `A_{T,q}`: same states and finals, initial `q`, transitions labelled in `t`.
    pub fn restrict(&self, t: ActionSet, q: StateId) -> Result<Automaton> {
        self.check_state(q)?;
        Automaton::new(
            self.names.clone(),
            q,
            t,
            self.transitions
                .iter()
                .copied()
                .filter(|tr| t.contains(tr.action)),
            self.finals.ones(),
        )
    }

    /// All witnesses of a broken independence diamond.
    pub fn check_id(&self, alphabet: &IndependenceAlphabet) -> Vec<IdViolation> {
        let mut out = Vec::new();
        for t1 in &self.transitions {
            for &(b, q3) in &self.out[t1.to] {
                if !alphabet.independent(t1.action, b) {
                    continue;
                }
                let closed = self.out[t1.from]
                    .iter()
                    .filter(|&&(c, _)| c == b)
                    .any(|&(_, q4)| self.has_transition(q4, t1.action, q3));
                if !closed {
                    out.push(IdViolation {
                        q1: t1.from,
                        a: t1.action,
                        q2: t1.to,
                        b,
                        q3,
                    });
                }
            }
        }
        out
    }

    pub fn step(&self, from: &BTreeSet<StateId>, a: Action) -> BTreeSet<StateId> {
        from.iter()
            .flat_map(|&q| self.out[q].iter())
            .filter(|&&(b, _)| b == a)
            .map(|&(_, r)| r)
            .collect()
    }

    pub fn accepts(&self, word: &[Action]) -> Result<bool> {
        if let Some(a) = word.iter().find(|a| !self.actions.contains(**a)) {
            return Err(Error::UnknownAction(format!("#{}", a.index())));
        }
        let mut current: BTreeSet<StateId> = [self.initial].into();
        for &a in word {
            current = self.step(&current, a);
            if current.is_empty() {
                return Ok(false);
            }
        }
        Ok(current.iter().any(|&q| self.is_final(q)))
    }

    /// Accepted words of length at most `maxlen`, by breadth-first subset
    /// simulation.
    pub fn enumerate_language(&self, maxlen: usize) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        let mut layer: Vec<(Word, BTreeSet<StateId>)> = vec![(Vec::new(), [self.initial].into())];
        for len in 0..=maxlen {
            for (w, set) in &layer {
                if set.iter().any(|&q| self.is_final(q)) {
                    out.insert(w.clone());
                }
            }
            if len == maxlen {
                break;
            }
            let mut next = Vec::new();
            for (w, set) in &layer {
                for a in self.actions.iter() {
                    let succ = self.step(set, a);
                    if !succ.is_empty() {
                        let mut w2 = w.clone();
                        w2.push(a);
                        next.push((w2, succ));
                    }
                }
            }
            layer = next;
        }
        out
    }

    /// States reachable from `from` along transitions labelled outside
    /// `forbidden`; always contains `from`.
    pub fn reach_avoiding(&self, from: StateId, forbidden: ActionSet) -> Result<BTreeSet<StateId>> {
        self.check_state(from)?;
        Ok(
            reach_avoiding_bits(self.len(), |q| &self.out[q], from, forbidden)
                .ones()
                .collect(),
        )
    }

    pub fn reachable(&self) -> FixedBitSet {
        reach_avoiding_bits(
            self.len(),
            |q| &self.out[q],
            self.initial,
            ActionSet::empty(),
        )
    }

    pub fn to_dot(&self, alphabet: &IndependenceAlphabet, title: &str) -> String {
        dot(
            title,
            self.names.iter().map(String::as_str),
            self.initial,
            |q| self.is_final(q),
            self.transitions
                .iter()
                .map(|t| (t.from, alphabet.name(t.action), t.to)),
        )
    }
}

pub(crate) fn reach_avoiding_bits<'a, F>(
    n: usize,
    out: F,
    from: StateId,
    forbidden: ActionSet,
) -> FixedBitSet
where
    F: Fn(StateId) -> &'a [(Action, StateId)],
{
    let mut seen = FixedBitSet::with_capacity(n);
    seen.insert(from);
    let mut queue = VecDeque::from([from]);
    while let Some(q) = queue.pop_front() {
        for &(a, r) in out(q) {
            if !forbidden.contains(a) && !seen.put(r) {
                queue.push_back(r);
            }
        }
    }
    seen
}

/// `q1 -a-> q2 -b-> q3` with `a I b` and no `q1 -b-> q4 -a-> q3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IdViolation {
    pub q1: StateId,
    pub a: Action,
    pub q2: StateId,
    pub b: Action,
    pub q3: StateId,
}

impl IdViolation {
    pub fn describe(&self, automaton: &Automaton, alphabet: &IndependenceAlphabet) -> String {
        format!(
            "{} -{}-> {} -{}-> {} has no {}{} diamond",
            automaton.name(self.q1),
            alphabet.name(self.a),
            automaton.name(self.q2),
            alphabet.name(self.b),
            automaton.name(self.q3),
            alphabet.name(self.b),
            alphabet.name(self.a),
        )
    }
}

/// A total state map between two automata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismMap(pub Vec<StateId>);

impl MorphismMap {
    pub fn identity(n: usize) -> Self {
        MorphismMap((0..n).collect())
    }

    pub fn image(&self, q: StateId) -> StateId {
        self.0[q]
    }
}

pub fn check_morphism(map: &MorphismMap, source: &Automaton, target: &Automaton) -> bool {
    let m = &map.0;
    m.len() == source.len()
        && m.iter().all(|&q| q < target.len())
        && m[source.initial()] == target.initial()
        && source.finals().all(|q| target.is_final(m[q]))
        && source
            .transitions()
            .iter()
            .all(|t| target.has_transition(m[t.from], t.action, m[t.to]))
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub(crate) fn dot<'a>(
    title: &str,
    names: impl Iterator<Item = &'a str>,
    initial: StateId,
    is_final: impl Fn(StateId) -> bool,
    edges: impl Iterator<Item = (StateId, &'a str, StateId)>,
) -> String {
    let names: Vec<String> = names.map(escape).collect();
    let mut s = String::new();
    let _ = writeln!(s, "digraph \"{}\" {{", escape(title));
    s.push_str("  rankdir=LR;\n  __start [shape=point];\n");
    for (q, name) in names.iter().enumerate() {
        let shape = if is_final(q) {
            "doublecircle"
        } else {
            "circle"
        };
        let _ = writeln!(s, "  \"{name}\" [shape={shape}];");
    }
    if let Some(init) = names.get(initial) {
        let _ = writeln!(s, "  __start -> \"{init}\";");
    }
    for (p, a, q) in edges {
        let _ = writeln!(
            s,
            "  \"{}\" -> \"{}\" [label=\"{}\"];",
            names[p],
            names[q],
            escape(a)
        );
    }
    s.push_str("}\n");
    s
}
