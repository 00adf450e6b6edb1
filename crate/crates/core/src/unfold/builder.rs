use std::collections::BTreeMap;
use std::sync::Arc;

use super::piece::{min_rank, PieceBuilder, PieceKind, UnfoldingPiece};
use super::MarkedState;
use crate::alphabet::{Action, ActionSet, IndependenceAlphabet};
use crate::automaton::{Automaton, StateId};
use crate::error::{Error, Result};

/// Default bound on the total number of states materialized by one
/// [`Unfolder`].
pub const DEFAULT_STATE_LIMIT: usize = 4_000_000;

/// Missing transitions from the triangle `△_{T,q}` towards one source
/// state: pairs of a top-level triangle state and an action.
#[derive(Clone, Debug)]
pub struct MissingSet {
    triangle: Arc<UnfoldingPiece>,
    pairs: Vec<(usize, Action)>,
}

impl MissingSet {
    /// The memoized triangle the pairs refer to.
    pub fn triangle(&self) -> &Arc<UnfoldingPiece> {
        &self.triangle
    }

    /// Pairs as `(triangle state index, action)`.
    pub fn pairs(&self) -> &[(usize, Action)] {
        &self.pairs
    }

    pub fn marked_pairs(&self) -> impl Iterator<Item = (&MarkedState, Action)> {
        self.pairs.iter().map(|&(w, a)| (self.triangle.state(w), a))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// A transition added between two triangle copies of a connected box.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AddedTransition {
    pub from_anchor: StateId,
    pub from_rank: u32,
    /// Index of the source state inside its triangle.
    pub slot: usize,
    pub action: Action,
    pub to_anchor: StateId,
    pub to_rank: u32,
}

/// Construction record of one connected box, taken before cleaning.
#[derive(Clone, Debug)]
pub struct ConnectedBoxLog {
    pub set: ActionSet,
    pub anchor: StateId,
    pub max_out_degree: usize,
    pub copies: u32,
    /// `(triangle anchor, rank)` in insertion order.
    pub inserted: Vec<(StateId, u32)>,
    pub added: Vec<AddedTransition>,
    pub states_before_clean: usize,
    pub states_after_clean: usize,
}

// indexed by target source state
type MissingTable = Arc<Vec<Vec<(usize, Action)>>>;

/// Builds boxes and triangles of one source automaton. Every piece is
/// constructed once and shared afterwards, so the triangles read by
/// [`Unfolder::missing`] are the ones inserted by [`Unfolder::build_box`].
pub struct Unfolder<'a> {
    alphabet: &'a IndependenceAlphabet,
    source: &'a Automaton,
    // successors of each source state ordered by (target, action)
    by_target: Vec<Vec<(StateId, Action)>>,
    boxes: BTreeMap<(ActionSet, StateId), Arc<UnfoldingPiece>>,
    triangles: BTreeMap<(ActionSet, StateId), Arc<UnfoldingPiece>>,
    missing_tables: BTreeMap<(ActionSet, StateId), MissingTable>,
    max_out: BTreeMap<ActionSet, usize>,
    logs: Vec<ConnectedBoxLog>,
    materialized: usize,
    limit: usize,
}

impl<'a> Unfolder<'a> {
    pub fn new(alphabet: &'a IndependenceAlphabet, source: &'a Automaton) -> Result<Self> {
        if !source.actions().is_subset(alphabet.all()) {
            return Err(Error::AlphabetMismatch(
                "source automaton uses actions outside the alphabet".into(),
            ));
        }
        let by_target = (0..source.len())
            .map(|q| {
                let mut succ: Vec<(StateId, Action)> =
                    source.successors(q).iter().map(|&(a, r)| (r, a)).collect();
                succ.sort_unstable();
                succ
            })
            .collect();
        Ok(Unfolder {
            alphabet,
            source,
            by_target,
            boxes: BTreeMap::new(),
            triangles: BTreeMap::new(),
            missing_tables: BTreeMap::new(),
            max_out: BTreeMap::new(),
            logs: Vec::new(),
            materialized: 0,
            limit: DEFAULT_STATE_LIMIT,
        })
    }

    pub fn with_state_limit(mut self, limit: usize) -> Self {
        self.limit = limit;
        self
    }

    pub fn alphabet(&self) -> &'a IndependenceAlphabet {
        self.alphabet
    }

    pub fn source(&self) -> &'a Automaton {
        self.source
    }

    fn check_args(&self, t: ActionSet, q: StateId) -> Result<()> {
        if q >= self.source.len() {
            return Err(Error::UnknownState(format!("#{q}")));
        }
        if !t.is_subset(self.alphabet.all()) {
            return Err(Error::AlphabetMismatch(
                "action set outside the alphabet".into(),
            ));
        }
        Ok(())
    }

    fn charge(&mut self, states: usize) -> Result<()> {
        self.materialized += states;
        if self.materialized > self.limit {
            Err(Error::CapExceeded(self.limit))
        } else {
            Ok(())
        }
    }

    pub fn base_box(&mut self, q: StateId) -> Result<Arc<UnfoldingPiece>> {
        self.build_box(ActionSet::empty(), q)
    }

    /// The unfolding: the box over the whole alphabet at the source's
    /// initial state.
    pub fn unfolding(&mut self) -> Result<Arc<UnfoldingPiece>> {
        self.build_box(self.alphabet.all(), self.source.initial())
    }

    pub fn build_box(&mut self, t: ActionSet, q: StateId) -> Result<Arc<UnfoldingPiece>> {
        self.check_args(t, q)?;
        if let Some(p) = self.boxes.get(&(t, q)) {
            return Ok(p.clone());
        }
        let piece = if t.is_empty() {
            self.charge(1)?;
            UnfoldingPiece::base(q, self.source)
        } else if self.alphabet.is_connected(t) {
            self.connected_box(t, q)?
        } else {
            self.unconnected_box(t, q)?
        };
        let piece = Arc::new(piece);
        self.boxes.insert((t, q), piece.clone());
        Ok(piece)
    }

    pub fn build_triangle(&mut self, t: ActionSet, q: StateId) -> Result<Arc<UnfoldingPiece>> {
        self.check_args(t, q)?;
        if t.is_empty() {
            return Err(Error::EmptyActionSet);
        }
        if let Some(p) = self.triangles.get(&(t, q)) {
            return Ok(p.clone());
        }
        let piece = Arc::new(self.triangle(t, q)?);
        self.triangles.insert((t, q), piece.clone());
        Ok(piece)
    }

    fn triangle(&mut self, t: ActionSet, q0: StateId) -> Result<UnfoldingPiece> {
        let mut b = PieceBuilder::default();
        let base = self.base_box(q0)?;
        b.insert_marked(&base, ActionSet::empty(), q0, 1);
        let mut k = 1u32;
        for h in 1..t.len() {
            let present = b.len();
            for v in 0..present {
                let (tv, _, _) = b.states[v].top().expect("triangle states are marked");
                if tv.len() != h - 1 {
                    continue;
                }
                let image = b.image[v];
                for i in 0..self.by_target[image].len() {
                    let (q2, a) = self.by_target[image][i];
                    if !t.contains(a) || tv.contains(a) {
                        continue;
                    }
                    let t2 = tv.with(a);
                    let inserted = self.build_box(t2, q2)?;
                    k += 1;
                    self.charge(inserted.len())?;
                    let entry = b.insert_marked(&inserted, t2, q2, k);
                    b.add(v as u32, a, entry);
                }
            }
        }
        Ok(b.finish(PieceKind::Triangle, t, q0, self.source))
    }

    /// For each target source state, the missing pairs of `△_{t,q}`.
    fn missing_table(&mut self, t: ActionSet, q: StateId) -> Result<MissingTable> {
        if let Some(m) = self.missing_tables.get(&(t, q)) {
            return Ok(m.clone());
        }
        let tri = self.build_triangle(t, q)?;
        let mut table = vec![Vec::new(); self.source.len()];
        for w in 0..tri.len() {
            let (tw, _, _) = tri.state(w).top().expect("triangle states are marked");
            if tw.len() + 1 != t.len() {
                continue;
            }
            let missing_actions = t.difference(tw);
            for &(a, q2) in self.source.successors(tri.image(w)) {
                if missing_actions.contains(a) {
                    table[q2].push((w, a));
                }
            }
        }
        // successors are sorted by action, pairs end up ordered by (w, a)
        let table = Arc::new(table);
        self.missing_tables.insert((t, q), table.clone());
        Ok(table)
    }

    pub fn missing(&mut self, t: ActionSet, q: StateId, q2: StateId) -> Result<MissingSet> {
        if t.is_empty() {
            return Err(Error::EmptyActionSet);
        }
        self.check_args(t, q2)?;
        let table = self.missing_table(t, q)?;
        Ok(MissingSet {
            triangle: self.triangles[&(t, q)].clone(),
            pairs: table[q2].clone(),
        })
    }

    pub fn max_out_degree(&mut self, t: ActionSet) -> Result<usize> {
        if t.is_empty() {
            return Err(Error::EmptyActionSet);
        }
        if let Some(&m) = self.max_out.get(&t) {
            return Ok(m);
        }
        let mut m = 0;
        for q in 0..self.source.len() {
            let table = self.missing_table(t, q)?;
            m = table.iter().map(Vec::len).fold(m, usize::max);
        }
        self.max_out.insert(t, m);
        Ok(m)
    }

    fn connected_box(&mut self, t: ActionSet, q0: StateId) -> Result<UnfoldingPiece> {
        let n = self.source.len();
        let max_out = self.max_out_degree(t)?;
        let m = max_out as u32 + 1;
        let mut b = PieceBuilder::default();
        let mut k = 0u32;
        // offsets[r - 1] = index of the initial state of the copy with rank r
        let mut offsets = Vec::new();
        let mut inserted = Vec::new();
        let order = std::iter::once(q0).chain((0..n).filter(|&q| q != q0));
        for q in order {
            let tri = self.build_triangle(t, q)?;
            for _ in 0..m {
                k += 1;
                self.charge(tri.len())?;
                offsets.push(b.insert_marked(&tri, t, q, k));
                inserted.push((q, k));
            }
        }
        let first_rank: Vec<u32> = (0..n)
            .map(|q| min_rank(b.states.iter().map(|s| &**s), t, q, k))
            .collect();
        let mut added = Vec::new();
        for q in 0..n {
            let table = self.missing_table(t, q)?;
            for q2 in 0..n {
                let pairs = &table[q2];
                let f = first_rank[q] - 1;
                let f2 = first_rank[q2] - 1;
                for j in 1..=m {
                    let mut c = 0u32;
                    for &(w, a) in pairs {
                        c += 1;
                        if f + j == f2 + c {
                            c += 1;
                        }
                        let from = offsets[(f + j - 1) as usize] + w as u32;
                        let to = offsets[(f2 + c - 1) as usize];
                        b.add(from, a, to);
                        added.push(AddedTransition {
                            from_anchor: q,
                            from_rank: f + j,
                            slot: w,
                            action: a,
                            to_anchor: q2,
                            to_rank: f2 + c,
                        });
                    }
                }
            }
        }
        let before = b.len();
        b.clean();
        self.logs.push(ConnectedBoxLog {
            set: t,
            anchor: q0,
            max_out_degree: max_out,
            copies: m,
            inserted,
            added,
            states_before_clean: before,
            states_after_clean: b.len(),
        });
        Ok(b.finish(PieceKind::ConnectedBox, t, q0, self.source))
    }

    fn unconnected_box(&mut self, t: ActionSet, q0: StateId) -> Result<UnfoldingPiece> {
        let t1 = self.alphabet.decomposition(t)?;
        let t2 = t.difference(t1);
        let inner = self.build_box(t2, q0)?;
        let mut b = PieceBuilder::default();
        self.charge(inner.len())?;
        b.insert_marked(&inner, t2, q0, 1);
        let mut k = 1u32;
        for w in 0..inner.len() {
            let image = inner.image(w);
            for i in 0..self.by_target[image].len() {
                let (q2, a) = self.by_target[image][i];
                if !t1.contains(a) {
                    continue;
                }
                let hung = self.build_box(t1, q2)?;
                k += 1;
                self.charge(hung.len())?;
                let entry = b.insert_marked(&hung, t1, q2, k);
                b.add(w as u32, a, entry);
            }
        }
        Ok(b.finish(PieceKind::UnconnectedBox, t, q0, self.source))
    }

    /// Builds every triangle and box for every subset of the alphabet and
    /// every source state.
    pub fn build_all(&mut self) -> Result<()> {
        let n = self.alphabet.len();
        if n > 16 {
            return Err(Error::Params(format!(
                "{n} actions is too many to build every subset"
            )));
        }
        let mut subsets: Vec<ActionSet> = (0..1u64 << n).map(ActionSet::from_bits).collect();
        subsets.sort_by_key(|s| (s.len(), s.bits()));
        for t in subsets {
            for q in 0..self.source.len() {
                if !t.is_empty() {
                    self.build_triangle(t, q)?;
                }
                self.build_box(t, q)?;
            }
        }
        Ok(())
    }

    pub fn boxes(&self) -> impl Iterator<Item = &Arc<UnfoldingPiece>> {
        self.boxes.values()
    }

    pub fn triangles(&self) -> impl Iterator<Item = &Arc<UnfoldingPiece>> {
        self.triangles.values()
    }

    pub fn connected_logs(&self) -> &[ConnectedBoxLog] {
        &self.logs
    }

    pub fn materialized_states(&self) -> usize {
        self.materialized
    }
}

pub fn unfold(alphabet: &IndependenceAlphabet, source: &Automaton) -> Result<Arc<UnfoldingPiece>> {
    Unfolder::new(alphabet, source)?.unfolding()
}
