use std::fmt::Write as _;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::alphabet::{ActionSet, IndependenceAlphabet};
use crate::automaton::{Automaton, StateId};

/// A state of a box or triangle: either a source state (height-0 box) or a
/// state of an inserted piece marked with that piece's action set, anchor
/// and copy rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MarkedState {
    Base(StateId),
    Marked {
        inner: Arc<MarkedState>,
        set: ActionSet,
        anchor: StateId,
        rank: u32,
    },
}

impl MarkedState {
    pub fn mark(inner: Arc<MarkedState>, set: ActionSet, anchor: StateId, rank: u32) -> Self {
        debug_assert!(rank >= 1);
        MarkedState::Marked {
            inner,
            set,
            anchor,
            rank,
        }
    }

    /// Outermost `(set, anchor, rank)`.
    pub fn top(&self) -> Option<(ActionSet, StateId, u32)> {
        match self {
            MarkedState::Base(_) => None,
            MarkedState::Marked {
                set, anchor, rank, ..
            } => Some((*set, *anchor, *rank)),
        }
    }

    pub fn inner(&self) -> Option<&MarkedState> {
        match self {
            MarkedState::Base(_) => None,
            MarkedState::Marked { inner, .. } => Some(inner),
        }
    }

    pub fn depth(&self) -> usize {
        let mut d = 0;
        let mut cur = self;
        while let Some(next) = cur.inner() {
            d += 1;
            cur = next;
        }
        d
    }

    /// Compact text form, `(inner,{a,b},anchor,rank)`.
    pub fn render(&self, alphabet: &IndependenceAlphabet, source: &Automaton) -> String {
        let mut s = String::new();
        self.render_into(&mut s, alphabet, source);
        s
    }

    fn render_into(&self, s: &mut String, alphabet: &IndependenceAlphabet, source: &Automaton) {
        match self {
            MarkedState::Base(q) => s.push_str(source.name(*q)),
            MarkedState::Marked {
                inner,
                set,
                anchor,
                rank,
            } => {
                s.push('(');
                inner.render_into(s, alphabet, source);
                let _ = write!(
                    s,
                    ",{},{},{})",
                    alphabet.format_set(*set),
                    source.name(*anchor),
                    rank
                );
            }
        }
    }

    /// Nested-tuple JSON form: a base state is its name, a marked state is
    /// `[inner, [actions...], anchor, rank]`.
    pub fn to_json(&self, alphabet: &IndependenceAlphabet, source: &Automaton) -> Value {
        match self {
            MarkedState::Base(q) => Value::String(source.name(*q).to_string()),
            MarkedState::Marked {
                inner,
                set,
                anchor,
                rank,
            } => json!([
                inner.to_json(alphabet, source),
                alphabet.set_names(*set),
                source.name(*anchor),
                rank
            ]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering() {
        let al = IndependenceAlphabet::new(&["a", "b"], &[("a", "b")]).unwrap();
        let src = Automaton::from_named(&al, &["q0"], "q0", &["q0"], &[]).unwrap();
        let base = Arc::new(MarkedState::Base(0));
        let v = MarkedState::mark(base.clone(), ActionSet::empty(), 0, 1);
        let w = MarkedState::mark(
            Arc::new(v.clone()),
            ActionSet::singleton(al.action("b").unwrap()),
            0,
            2,
        );
        assert_eq!(w.render(&al, &src), "((q0,{},q0,1),{b},q0,2)");
        assert_eq!(
            w.to_json(&al, &src),
            json!([["q0", [], "q0", 1], ["b"], "q0", 2])
        );
        assert_eq!(w.depth(), 2);
        assert_eq!(
            w.top(),
            Some((ActionSet::singleton(al.action("b").unwrap()), 0, 2))
        );
        assert_ne!(v, w);
        assert_eq!(v, MarkedState::mark(base, ActionSet::empty(), 0, 1));
    }
}
