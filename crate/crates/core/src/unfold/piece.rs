use std::collections::VecDeque;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde_json::{json, Value};

use super::MarkedState;
use crate::alphabet::{Action, ActionSet, IndependenceAlphabet};
use crate::automaton::{self, Automaton, MorphismMap, StateId, Transition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PieceKind {
    /// Height-0 box.
    BaseBox,
    /// Box over a set whose dependence graph is connected.
    ConnectedBox,
    /// Box over a set whose dependence graph is not connected.
    UnconnectedBox,
    Triangle,
}

impl PieceKind {
    pub fn is_box(self) -> bool {
        !matches!(self, PieceKind::Triangle)
    }

    pub fn label(self) -> &'static str {
        if self.is_box() {
            "box"
        } else {
            "triangle"
        }
    }
}

/// A box or a triangle: an automaton over `over` whose states are
/// [`MarkedState`]s, with a morphism into the source automaton restricted
/// to `over` and re-rooted at `anchor`. The initial state is always index 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnfoldingPiece {
    kind: PieceKind,
    over: ActionSet,
    anchor: StateId,
    states: Vec<Arc<MarkedState>>,
    slots: Vec<u32>,
    image: Vec<StateId>,
    finals: FixedBitSet,
    transitions: Vec<(u32, Action, u32)>,
    out: Vec<Vec<(Action, u32)>>,
}

impl UnfoldingPiece {
    pub(crate) fn base(q: StateId, source: &Automaton) -> Self {
        let mut b = PieceBuilder::default();
        b.states.push(Arc::new(MarkedState::Base(q)));
        b.slots.push(0);
        b.image.push(q);
        b.finish(PieceKind::BaseBox, ActionSet::empty(), q, source)
    }

    pub fn kind(&self) -> PieceKind {
        self.kind
    }

    pub fn over(&self) -> ActionSet {
        self.over
    }

    pub fn anchor(&self) -> StateId {
        self.anchor
    }

    pub fn height(&self) -> usize {
        self.over.len()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn state(&self, i: usize) -> &MarkedState {
        &self.states[i]
    }

    pub fn states(&self) -> impl Iterator<Item = &MarkedState> {
        self.states.iter().map(|s| &**s)
    }

    /// Index of state `i` inside the piece it was copied from.
    pub fn slot(&self, i: usize) -> usize {
        self.slots[i] as usize
    }

    /// Morphism image of state `i` in the source automaton.
    pub fn image(&self, i: usize) -> StateId {
        self.image[i]
    }

    pub fn is_final(&self, i: usize) -> bool {
        self.finals.contains(i)
    }

    pub fn transitions(&self) -> impl Iterator<Item = Transition> + '_ {
        self.transitions
            .iter()
            .map(|&(p, a, q)| Transition::new(p as usize, a, q as usize))
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn successors(&self, i: usize) -> &[(Action, u32)] {
        &self.out[i]
    }

    pub fn morphism(&self) -> MorphismMap {
        MorphismMap(self.image.clone())
    }

    /// The piece as a plain automaton whose state names are the rendered
    /// marked states.
    pub fn to_automaton(&self, alphabet: &IndependenceAlphabet, source: &Automaton) -> Automaton {
        let names = self
            .states
            .iter()
            .map(|s| s.render(alphabet, source))
            .collect();
        Automaton::new(names, 0, self.over, self.transitions(), self.finals.ones())
            .expect("pieces are well-formed")
    }

    /// The piece as a plain automaton with states named by index.
    pub fn to_indexed_automaton(&self) -> Automaton {
        let names = (0..self.len()).map(|i| i.to_string()).collect();
        Automaton::new(names, 0, self.over, self.transitions(), self.finals.ones())
            .expect("pieces are well-formed")
    }

    pub fn to_json(&self, alphabet: &IndependenceAlphabet, source: &Automaton) -> Value {
        let states: Vec<Value> = self
            .states
            .iter()
            .map(|s| s.to_json(alphabet, source))
            .collect();
        let transitions: Vec<Value> = self
            .transitions
            .iter()
            .map(|&(p, a, q)| json!([p, alphabet.name(a), q]))
            .collect();
        json!({
            "kind": self.kind.label(),
            "over": alphabet.set_names(self.over),
            "anchor": source.name(self.anchor),
            "initial": 0,
            "states": states,
            "finals": self.finals.ones().collect::<Vec<_>>(),
            "transitions": transitions,
            "morphism": self.image.iter().map(|&q| source.name(q)).collect::<Vec<_>>(),
        })
    }

    pub fn to_dot(&self, alphabet: &IndependenceAlphabet, source: &Automaton) -> String {
        let names: Vec<String> = self
            .states
            .iter()
            .map(|s| s.render(alphabet, source))
            .collect();
        let title = format!(
            "{}{}{}",
            self.kind.label(),
            alphabet.format_set(self.over),
            source.name(self.anchor)
        );
        automaton::dot(
            &title,
            names.iter().map(String::as_str),
            0,
            |q| self.is_final(q),
            self.transitions
                .iter()
                .map(|&(p, a, q)| (p as usize, alphabet.name(a), q as usize)),
        )
    }
}

/// Least rank `l` of a state `(w, set, anchor, l)` among `states`, or
/// `k + 1` when no copy of that triangle is present.
pub fn min_rank<'a>(
    states: impl IntoIterator<Item = &'a MarkedState>,
    set: ActionSet,
    anchor: StateId,
    k: u32,
) -> u32 {
    let mut f = k + 1;
    for s in states {
        if let Some((t, q, l)) = s.top() {
            if q == anchor && t == set && l < f {
                f = l;
            }
        }
    }
    f
}

#[derive(Default)]
pub(crate) struct PieceBuilder {
    pub(crate) states: Vec<Arc<MarkedState>>,
    pub(crate) slots: Vec<u32>,
    pub(crate) image: Vec<StateId>,
    pub(crate) transitions: Vec<(u32, Action, u32)>,
}

impl PieceBuilder {
    pub(crate) fn len(&self) -> usize {
        self.states.len()
    }

    /// Inserts a copy of `child` with every state marked by
    /// `(set, anchor, rank)`; returns the index of the copy's initial state.
    pub(crate) fn insert_marked(
        &mut self,
        child: &UnfoldingPiece,
        set: ActionSet,
        anchor: StateId,
        rank: u32,
    ) -> u32 {
        let offset = self.states.len() as u32;
        for (i, inner) in child.states.iter().enumerate() {
            self.states.push(Arc::new(MarkedState::mark(
                inner.clone(),
                set,
                anchor,
                rank,
            )));
            self.slots.push(i as u32);
            self.image.push(child.image[i]);
        }
        self.transitions.extend(
            child
                .transitions
                .iter()
                .map(|&(p, a, q)| (p + offset, a, q + offset)),
        );
        offset
    }

    pub(crate) fn add(&mut self, from: u32, a: Action, to: u32) {
        self.transitions.push((from, a, to));
    }

    /// Drops states unreachable from the initial state, keeping the relative
    /// order of the survivors.
    pub(crate) fn clean(&mut self) {
        let n = self.states.len();
        if n == 0 {
            return;
        }
        let mut out = vec![Vec::new(); n];
        for &(p, _, q) in &self.transitions {
            out[p as usize].push(q);
        }
        let mut seen = FixedBitSet::with_capacity(n);
        seen.insert(0);
        let mut queue = VecDeque::from([0u32]);
        while let Some(p) = queue.pop_front() {
            for &q in &out[p as usize] {
                if !seen.put(q as usize) {
                    queue.push_back(q);
                }
            }
        }
        if seen.count_ones(..) == n {
            return;
        }
        let mut remap = vec![u32::MAX; n];
        for (next, i) in seen.ones().enumerate() {
            remap[i] = next as u32;
        }
        retain_marked(&mut self.states, &seen);
        retain_marked(&mut self.slots, &seen);
        retain_marked(&mut self.image, &seen);
        self.transitions
            .retain(|&(p, _, _)| seen.contains(p as usize));
        for t in &mut self.transitions {
            t.0 = remap[t.0 as usize];
            t.2 = remap[t.2 as usize];
        }
    }

    pub(crate) fn finish(
        self,
        kind: PieceKind,
        over: ActionSet,
        anchor: StateId,
        source: &Automaton,
    ) -> UnfoldingPiece {
        let n = self.states.len();
        let mut finals = FixedBitSet::with_capacity(n);
        for (i, &q) in self.image.iter().enumerate() {
            if source.is_final(q) {
                finals.insert(i);
            }
        }
        let mut out = vec![Vec::new(); n];
        for &(p, a, q) in &self.transitions {
            out[p as usize].push((a, q));
        }
        UnfoldingPiece {
            kind,
            over,
            anchor,
            states: self.states,
            slots: self.slots,
            image: self.image,
            finals,
            transitions: self.transitions,
            out,
        }
    }
}

fn retain_marked<T>(v: &mut Vec<T>, keep: &FixedBitSet) {
    let mut i = 0;
    v.retain(|_| {
        i += 1;
        keep.contains(i - 1)
    });
}
