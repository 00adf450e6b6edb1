//! Asynchronous automata built from an unfolding: the synthesized
//! automaton `Â_Unf` and the extended automaton `Ā_Unf` with internal
//! catch-up actions.

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde_json::{json, Value};

use crate::alphabet::{Action, ActionSet, IndependenceAlphabet, Word};
use crate::asyncauto::{AsyncAutomaton, Distribution, LocalRelations};
use crate::automaton::Automaton;
use crate::error::{Error, Result};
use crate::par::Strategy;
use crate::unfold::UnfoldingPiece;

/// Largest unfolding accepted by [`synthesize`]; each reach relation takes
/// a quadratic number of bits.
pub const SYNTHESIS_STATE_LIMIT: usize = 20_000;

/// Reachability over a fixed set of allowed actions; row `x` holds every
/// `q` reachable from `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachRelation {
    rows: Vec<FixedBitSet>,
}

impl ReachRelation {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains(&self, x: usize, q: usize) -> bool {
        self.rows[x].contains(q)
    }

    pub fn row(&self, x: usize) -> &FixedBitSet {
        &self.rows[x]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(x, row)| row.ones().map(move |q| (x, q)))
    }

    pub fn pair_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum()
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.rows.len()).all(|x| self.rows[x].contains(x))
    }

    pub fn is_transitive(&self) -> bool {
        self.rows
            .iter()
            .all(|row| row.ones().all(|q| self.rows[q].is_subset(row)))
    }
}

/// `R_k`: pairs `(x, q)` such that `q` is reachable from `x` in `unf`
/// using only actions outside `Σ_k`.
pub fn process_reach(unf: &UnfoldingPiece, distribution: &Distribution, k: usize) -> ReachRelation {
    process_reach_with(unf, distribution, k, Strategy::default())
}

pub fn process_reach_with(
    unf: &UnfoldingPiece,
    distribution: &Distribution,
    k: usize,
    strategy: Strategy,
) -> ReachRelation {
    let forbidden = distribution.process(k);
    let rows = strategy.map_range(unf.len(), |x| reach_row(unf, x, forbidden));
    ReachRelation { rows }
}

fn reach_row(unf: &UnfoldingPiece, from: usize, forbidden: ActionSet) -> FixedBitSet {
    let mut seen = FixedBitSet::with_capacity(unf.len());
    seen.insert(from);
    let mut queue = VecDeque::from([from]);
    while let Some(q) = queue.pop_front() {
        for &(a, r) in unf.successors(q) {
            if !forbidden.contains(a) && !seen.put(r as usize) {
                queue.push_back(r as usize);
            }
        }
    }
    seen
}

/// Transitions of `unf` grouped by action, then by source state.
fn by_action(unf: &UnfoldingPiece, actions: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = vec![vec![Vec::new(); unf.len()]; actions];
    for t in unf.transitions() {
        out[t.action.index()][t.from].push(t.to);
    }
    for per_state in &mut out {
        for succ in per_state {
            succ.sort_unstable();
            succ.dedup();
        }
    }
    out
}

fn check_alphabet(unf: &UnfoldingPiece, distribution: &Distribution) -> Result<()> {
    let all = ActionSet::first(distribution.action_count());
    if unf.over() != all {
        return Err(Error::AlphabetMismatch(format!(
            "unfolding is over {} of the distribution's {} actions",
            unf.over().len(),
            all.len()
        )));
    }
    Ok(())
}

/// Local relations of `Â_Unf`: every process runs on the unfolding's
/// states and may lag behind along its reach relation.
#[derive(Clone, Debug)]
pub struct SynthesizedRelations {
    unfolding: Arc<UnfoldingPiece>,
    distribution: Distribution,
    reach: Vec<ReachRelation>,
    by_action: Vec<Vec<Vec<usize>>>,
    finals: FixedBitSet,
}

impl SynthesizedRelations {
    /// States `q` with `(g_i, q) ∈ R_{procs_i}` for every `i`.
    fn common(&self, procs: &[usize], g: &[usize]) -> FixedBitSet {
        let mut acc = self.reach[procs[0]].row(g[0]).clone();
        for (i, &k) in procs.iter().enumerate().skip(1) {
            acc.intersect_with(self.reach[k].row(g[i]));
        }
        acc
    }

    pub fn reach(&self, k: usize) -> &ReachRelation {
        &self.reach[k]
    }
}

impl LocalRelations for SynthesizedRelations {
    fn local_states(&self, _process: usize) -> usize {
        self.unfolding.len()
    }

    fn initial(&self, _process: usize) -> usize {
        self.unfolding.initial()
    }

    fn successors(&self, action: Action, from: &[usize]) -> Vec<Vec<usize>> {
        let loc = self.distribution.location(action);
        let mut targets: Vec<usize> = self
            .common(loc, from)
            .ones()
            .flat_map(|q| self.by_action[action.index()][q].iter().copied())
            .collect();
        targets.sort_unstable();
        targets.dedup();
        targets.into_iter().map(|r| vec![r; loc.len()]).collect()
    }

    fn relates(&self, action: Action, from: &[usize], to: &[usize]) -> bool {
        let Some(&r) = to.first() else {
            return false;
        };
        if to.iter().any(|&x| x != r) {
            return false;
        }
        let loc = self.distribution.location(action);
        self.common(loc, from)
            .ones()
            .any(|q| self.by_action[action.index()][q].binary_search(&r).is_ok())
    }

    fn is_final(&self, global: &[usize]) -> bool {
        let procs: Vec<usize> = (0..global.len()).collect();
        let mut acc = self.common(&procs, global);
        acc.intersect_with(&self.finals);
        !acc.is_clear()
    }
}

/// The unfolding, the distribution, the reach relations and `Â_Unf`.
#[derive(Clone, Debug)]
pub struct SynthesisBundle {
    automaton: AsyncAutomaton<SynthesizedRelations>,
}

impl SynthesisBundle {
    pub fn unfolding(&self) -> &Arc<UnfoldingPiece> {
        &self.automaton.relations().unfolding
    }

    pub fn distribution(&self) -> &Distribution {
        self.automaton.distribution()
    }

    pub fn reach(&self, k: usize) -> &ReachRelation {
        self.automaton.relations().reach(k)
    }

    pub fn automaton(&self) -> &AsyncAutomaton<SynthesizedRelations> {
        &self.automaton
    }

    /// `|Q_k|` for every process.
    pub fn local_state_counts(&self) -> Vec<usize> {
        (0..self.distribution().len())
            .map(|k| self.automaton.relations().local_states(k))
            .collect()
    }

    pub fn to_json(&self, alphabet: &IndependenceAlphabet, source: &Automaton) -> Value {
        let rel = self.automaton.relations();
        let reach: Vec<Value> = rel
            .reach
            .iter()
            .map(|r| Value::from(r.pairs().map(|(x, q)| json!([x, q])).collect::<Vec<_>>()))
            .collect();
        let transitions: Vec<Value> = alphabet
            .actions()
            .map(|a| {
                let pairs: Vec<Value> = rel.by_action[a.index()]
                    .iter()
                    .enumerate()
                    .flat_map(|(q, succ)| succ.iter().map(move |&r| json!([q, r])))
                    .collect();
                json!({"action": alphabet.name(a), "pairs": pairs})
            })
            .collect();
        json!({
            "distribution": self.distribution().to_names(alphabet),
            "local_states": self.local_state_counts(),
            "unfolding": rel.unfolding.to_json(alphabet, source),
            "reach": reach,
            "transitions": transitions,
        })
    }
}

pub fn synthesize(
    unf: Arc<UnfoldingPiece>,
    distribution: &Distribution,
) -> Result<SynthesisBundle> {
    synthesize_with(unf, distribution, Strategy::default())
}

pub fn synthesize_with(
    unf: Arc<UnfoldingPiece>,
    distribution: &Distribution,
    strategy: Strategy,
) -> Result<SynthesisBundle> {
    check_alphabet(&unf, distribution)?;
    if unf.len() > SYNTHESIS_STATE_LIMIT {
        return Err(Error::CapExceeded(SYNTHESIS_STATE_LIMIT));
    }
    let reach = (0..distribution.len())
        .map(|k| process_reach_with(&unf, distribution, k, strategy))
        .collect();
    let mut finals = FixedBitSet::with_capacity(unf.len());
    finals.extend((0..unf.len()).filter(|&q| unf.is_final(q)));
    let relations = SynthesizedRelations {
        by_action: by_action(&unf, distribution.action_count()),
        unfolding: unf,
        distribution: distribution.clone(),
        reach,
        finals,
    };
    Ok(SynthesisBundle {
        automaton: AsyncAutomaton::new(distribution.clone(), relations),
    })
}

/// `Σ` extended with one internal action `(a,k)` for every process `k`
/// and every action `a ∉ Σ_k`. Base actions keep their indices; internal
/// actions follow, ordered by process then action.
#[derive(Clone, Debug)]
pub struct ExtendedAlphabet {
    base_len: usize,
    alphabet: IndependenceAlphabet,
    internal: Vec<(Action, usize)>,
    distribution: Distribution,
}

impl ExtendedAlphabet {
    pub fn alphabet(&self) -> &IndependenceAlphabet {
        &self.alphabet
    }

    pub fn distribution(&self) -> &Distribution {
        &self.distribution
    }

    pub fn base_len(&self) -> usize {
        self.base_len
    }

    /// The internal actions as `(base action, process)` pairs.
    pub fn internal(&self) -> &[(Action, usize)] {
        &self.internal
    }

    pub fn internal_actions(&self) -> ActionSet {
        self.alphabet
            .all()
            .difference(ActionSet::first(self.base_len))
    }

    pub fn is_base(&self, a: Action) -> bool {
        a.index() < self.base_len
    }

    /// The base action underlying `a` and, for internal actions, its
    /// process.
    pub fn split(&self, a: Action) -> (Action, Option<usize>) {
        if self.is_base(a) {
            (a, None)
        } else {
            let (b, k) = self.internal[a.index() - self.base_len];
            (b, Some(k))
        }
    }
}

pub fn extend_alphabet(
    alphabet: &IndependenceAlphabet,
    distribution: &Distribution,
) -> Result<ExtendedAlphabet> {
    let n = alphabet.len();
    let mut internal = Vec::new();
    for k in 0..distribution.len() {
        for a in alphabet.all().difference(distribution.process(k)).iter() {
            internal.push((a, k));
        }
    }
    let mut names = alphabet.names().to_vec();
    names.extend(
        internal
            .iter()
            .map(|&(a, k)| format!("({},{})", alphabet.name(a), k + 1)),
    );
    let ext = IndependenceAlphabet::from_dependence(names, |i, j| match (i < n, j < n) {
        (true, true) => alphabet.dependent(Action::new(i), Action::new(j)),
        (true, false) => distribution
            .process(internal[j - n].1)
            .contains(Action::new(i)),
        (false, true) => distribution
            .process(internal[i - n].1)
            .contains(Action::new(j)),
        (false, false) => internal[i - n].1 == internal[j - n].1,
    })?;
    let processes = (0..distribution.len())
        .map(|k| {
            let mut p = distribution.process(k);
            for (i, &(_, kk)) in internal.iter().enumerate() {
                if kk == k {
                    p.insert(Action::new(n + i));
                }
            }
            p
        })
        .collect();
    let ext_distribution = Distribution::new(&ext, processes)?;
    Ok(ExtendedAlphabet {
        base_len: n,
        alphabet: ext,
        internal,
        distribution: ext_distribution,
    })
}

/// Erases internal actions.
pub fn project_rho(ext: &ExtendedAlphabet, word: &[Action]) -> Result<Word> {
    ext.alphabet.check_word(word)?;
    Ok(word.iter().copied().filter(|&a| ext.is_base(a)).collect())
}

/// Local relations of `Ā_Unf`: base actions synchronize all participants
/// on one unfolding transition; an internal action `(a,k)` moves process
/// `k` alone along an `a`-transition.
#[derive(Clone, Debug)]
pub struct ExtendedRelations {
    unfolding: Arc<UnfoldingPiece>,
    ext: ExtendedAlphabet,
    by_action: Vec<Vec<Vec<usize>>>,
}

impl LocalRelations for ExtendedRelations {
    fn local_states(&self, _process: usize) -> usize {
        self.unfolding.len()
    }

    fn initial(&self, _process: usize) -> usize {
        self.unfolding.initial()
    }

    fn successors(&self, action: Action, from: &[usize]) -> Vec<Vec<usize>> {
        let (base, _) = self.ext.split(action);
        let q = from[0];
        if from.iter().any(|&x| x != q) {
            return Vec::new();
        }
        self.by_action[base.index()][q]
            .iter()
            .map(|&r| vec![r; from.len()])
            .collect()
    }

    fn is_final(&self, global: &[usize]) -> bool {
        let q = global[0];
        global.iter().all(|&x| x == q) && self.unfolding.is_final(q)
    }
}

pub fn build_extended(
    unf: Arc<UnfoldingPiece>,
    ext: &ExtendedAlphabet,
) -> Result<AsyncAutomaton<ExtendedRelations>> {
    let all = ActionSet::first(ext.base_len);
    if unf.over() != all {
        return Err(Error::AlphabetMismatch(format!(
            "unfolding is over {} of the {} base actions",
            unf.over().len(),
            all.len()
        )));
    }
    let relations = ExtendedRelations {
        by_action: by_action(&unf, ext.base_len),
        unfolding: unf,
        ext: ext.clone(),
    };
    Ok(AsyncAutomaton::new(ext.distribution.clone(), relations))
}

impl AsyncAutomaton<ExtendedRelations> {
    /// `ρ(L(Ā_Unf))` restricted to words of length at most `maxlen`.
    /// Internal moves are not bounded.
    pub fn projected_language(&self, maxlen: usize, cap: usize) -> Result<BTreeSet<Word>> {
        let hidden = self.relations().ext.internal_actions();
        self.enumerate_language_hiding(maxlen, hidden, cap)
    }

    /// Whether `word ∈ ρ(L(Ā_Unf))`.
    pub fn projection_accepts(&self, word: &[Action], cap: usize) -> Result<bool> {
        let hidden = self.relations().ext.internal_actions();
        self.accepts_hiding(word, hidden, cap)
    }
}
