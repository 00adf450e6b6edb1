//! Independence alphabets and action sets.
//!
//! Actions are stored as dense indices in the order they were declared; that
//! order is the total order used by decompositions and normal forms.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

pub const MAX_ACTIONS: usize = 64;

/// An action, identified by its position in the alphabet's total order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Action(u8);

impl Action {
    pub fn new(index: usize) -> Self {
        assert!(index < MAX_ACTIONS, "action index {index} out of range");
        Action(index as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

pub type Word = Vec<Action>;

/// A subset of at most [`MAX_ACTIONS`] actions. Iteration follows the
/// alphabet order.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionSet(u64);

impl ActionSet {
    pub const fn empty() -> Self {
        ActionSet(0)
    }

    pub fn first(n: usize) -> Self {
        assert!(n <= MAX_ACTIONS);
        if n == MAX_ACTIONS {
            ActionSet(u64::MAX)
        } else {
            ActionSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(a: Action) -> Self {
        ActionSet(1 << a.0)
    }

    pub fn from_bits(bits: u64) -> Self {
        ActionSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, a: Action) -> bool {
        self.0 >> a.0 & 1 == 1
    }

    pub fn insert(&mut self, a: Action) {
        self.0 |= 1 << a.0;
    }

    pub fn with(self, a: Action) -> Self {
        ActionSet(self.0 | 1 << a.0)
    }

    pub fn union(self, other: Self) -> Self {
        ActionSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ActionSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        ActionSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Least action w.r.t. the alphabet order.
    pub fn least(self) -> Option<Action> {
        (self.0 != 0).then(|| Action(self.0.trailing_zeros() as u8))
    }

    pub fn iter(self) -> impl Iterator<Item = Action> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let a = bits.trailing_zeros();
            bits &= bits - 1;
            Some(Action(a as u8))
        })
    }
}

impl FromIterator<Action> for ActionSet {
    fn from_iter<I: IntoIterator<Item = Action>>(iter: I) -> Self {
        iter.into_iter().fold(ActionSet::empty(), ActionSet::with)
    }
}

impl fmt::Debug for ActionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.iter().map(Action::index))
            .finish()
    }
}

/// A finite alphabet with an irreflexive, symmetric independence relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceAlphabet {
    names: Vec<String>,
    index: HashMap<String, Action>,
    // independent[a] = set of actions independent of a
    independent: Vec<ActionSet>,
}

impl IndependenceAlphabet {
    pub fn new<S: AsRef<str>>(actions: &[S], independence: &[(S, S)]) -> Result<Self> {
        if actions.len() > MAX_ACTIONS {
            return Err(Error::TooManyActions(actions.len()));
        }
        let mut names = Vec::with_capacity(actions.len());
        let mut index = HashMap::with_capacity(actions.len());
        for (i, name) in actions.iter().enumerate() {
            let name = name.as_ref().to_string();
            if index.insert(name.clone(), Action::new(i)).is_some() {
                return Err(Error::DuplicateAction(name));
            }
            names.push(name);
        }
        let mut independent = vec![ActionSet::empty(); names.len()];
        for (a, b) in independence {
            let (a, b) = (a.as_ref(), b.as_ref());
            let ia = *index.get(a).ok_or_else(|| Error::UnknownAction(a.into()))?;
            let ib = *index.get(b).ok_or_else(|| Error::UnknownAction(b.into()))?;
            if ia == ib {
                return Err(Error::ReflexivePair(a.into()));
            }
            independent[ia.index()].insert(ib);
            independent[ib.index()].insert(ia);
        }
        Ok(IndependenceAlphabet {
            names,
            index,
            independent,
        })
    }

    /// Builds an alphabet from names and a dependence predicate. Used for
    /// derived alphabets; the predicate must be symmetric and reflexive.
    pub(crate) fn from_dependence(
        names: Vec<String>,
        dependent: impl Fn(usize, usize) -> bool,
    ) -> Result<Self> {
        if names.len() > MAX_ACTIONS {
            return Err(Error::TooManyActions(names.len()));
        }
        let n = names.len();
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), Action::new(i)).is_some() {
                return Err(Error::DuplicateAction(name.clone()));
            }
        }
        let independent = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| i != j && !dependent(i, j))
                    .map(Action::new)
                    .collect()
            })
            .collect();
        Ok(IndependenceAlphabet {
            names,
            index,
            independent,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn all(&self) -> ActionSet {
        ActionSet::first(self.len())
    }

    pub fn actions(&self) -> impl Iterator<Item = Action> {
        (0..self.len()).map(Action::new)
    }

    pub fn name(&self, a: Action) -> &str {
        &self.names[a.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn action(&self, name: &str) -> Result<Action> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownAction(name.into()))
    }

    pub fn contains(&self, a: Action) -> bool {
        a.index() < self.len()
    }

    pub fn independent(&self, a: Action, b: Action) -> bool {
        self.independent[a.index()].contains(b)
    }

    pub fn dependent(&self, a: Action, b: Action) -> bool {
        !self.independent(a, b)
    }

    pub fn independent_of(&self, a: Action) -> ActionSet {
        self.independent[a.index()]
    }

    /// Actions dependent on `a`, `a` included.
    pub fn dependent_on(&self, a: Action) -> ActionSet {
        self.all().difference(self.independent[a.index()])
    }

    /// Unordered independent pairs `(a, b)` with `a < b`.
    pub fn independent_pairs(&self) -> Vec<(Action, Action)> {
        self.actions()
            .flat_map(|a| {
                self.independent[a.index()]
                    .iter()
                    .filter(move |&b| a < b)
                    .map(move |b| (a, b))
            })
            .collect()
    }

    /// Connected components of the dependence graph restricted to `t`,
    /// sorted by least action.
    pub fn connected_components(&self, t: ActionSet) -> Vec<ActionSet> {
        let mut rest = t.intersection(self.all());
        let mut out = Vec::new();
        while let Some(seed) = rest.least() {
            let mut component = ActionSet::singleton(seed);
            let mut frontier = component;
            while let Some(a) = frontier.least() {
                frontier = frontier.difference(ActionSet::singleton(a));
                let fresh = self
                    .dependent_on(a)
                    .intersection(rest)
                    .difference(component);
                component = component.union(fresh);
                frontier = frontier.union(fresh);
            }
            rest = rest.difference(component);
            out.push(component);
        }
        out
    }

    pub fn is_connected(&self, t: ActionSet) -> bool {
        self.connected_components(t).len() <= 1
    }

    /// The component of `(t, D)` that contains the least action of `t`.
    pub fn decomposition(&self, t: ActionSet) -> Result<ActionSet> {
        if t.is_empty() {
            return Err(Error::EmptyActionSet);
        }
        Ok(self.connected_components(t)[0])
    }

    pub fn check_word(&self, word: &[Action]) -> Result<()> {
        match word.iter().find(|a| !self.contains(**a)) {
            Some(a) => Err(Error::UnknownAction(format!("#{}", a.index()))),
            None => Ok(()),
        }
    }

    /// Parses whitespace-separated action names. When the text has no
    /// whitespace and is not itself an action name, each character is read
    /// as one action.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(Vec::new());
        }
        if !text.contains(char::is_whitespace) && !self.index.contains_key(text) {
            return text
                .chars()
                .map(|c| self.action(c.encode_utf8(&mut [0; 4])))
                .collect();
        }
        text.split_whitespace().map(|t| self.action(t)).collect()
    }

    pub fn format_word(&self, word: &[Action]) -> String {
        if word.is_empty() {
            return "ε".into();
        }
        let names: Vec<&str> = word.iter().map(|&a| self.name(a)).collect();
        names.join(" ")
    }

    pub fn format_set(&self, t: ActionSet) -> String {
        let names: Vec<&str> = t.iter().map(|a| self.name(a)).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn set_names(&self, t: ActionSet) -> Vec<String> {
        t.iter().map(|a| self.name(a).to_string()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(actions: &[&str], ind: &[(&str, &str)]) -> IndependenceAlphabet {
        IndependenceAlphabet::new(actions, ind).unwrap()
    }

    fn set(al: &IndependenceAlphabet, names: &str) -> ActionSet {
        names
            .chars()
            .map(|c| al.action(&c.to_string()).unwrap())
            .collect()
    }

    #[test]
    fn validation() {
        let al = alpha(&["a", "b"], &[("a", "b")]);
        assert!(al.independent(Action::new(0), Action::new(1)));
        assert!(al.independent(Action::new(1), Action::new(0)));
        assert!(Action::new(0) < Action::new(1));

        let err = IndependenceAlphabet::new(&["a", "b"], &[("a", "a")]).unwrap_err();
        assert!(matches!(err, Error::ReflexivePair(_)));
        let err = IndependenceAlphabet::new(&["a", "a"], &[]).unwrap_err();
        assert!(matches!(err, Error::DuplicateAction(_)));
        let err = IndependenceAlphabet::new(&["a"], &[("a", "z")]).unwrap_err();
        assert!(matches!(err, Error::UnknownAction(_)));

        let al = alpha(&["a"], &[]);
        assert!(al.dependent(Action::new(0), Action::new(0)));
    }

    #[test]
    fn components() {
        let al = alpha(&["a", "b"], &[("a", "b")]);
        assert_eq!(
            al.connected_components(al.all()),
            vec![set(&al, "a"), set(&al, "b")]
        );
        let al = alpha(&["a", "b"], &[]);
        assert_eq!(al.connected_components(al.all()), vec![set(&al, "ab")]);
        let al = alpha(&["a", "b", "c"], &[("a", "c"), ("b", "c")]);
        assert_eq!(
            al.connected_components(al.all()),
            vec![set(&al, "ab"), set(&al, "c")]
        );
        assert!(al.connected_components(ActionSet::empty()).is_empty());
    }

    #[test]
    fn decomposition_picks_least_component() {
        let al = alpha(&["a", "b"], &[("a", "b")]);
        assert_eq!(al.decomposition(al.all()).unwrap(), set(&al, "a"));
        let al = alpha(&["a", "b"], &[]);
        assert_eq!(al.decomposition(al.all()).unwrap(), set(&al, "ab"));
        let al = alpha(&["a", "b", "c"], &[("a", "b"), ("a", "c")]);
        assert_eq!(al.decomposition(al.all()).unwrap(), set(&al, "a"));
        assert!(matches!(
            al.decomposition(ActionSet::empty()),
            Err(Error::EmptyActionSet)
        ));
    }

    #[test]
    fn action_set_ops() {
        let s: ActionSet = [Action::new(3), Action::new(1)].into_iter().collect();
        assert_eq!(s.len(), 2);
        assert_eq!(s.least(), Some(Action::new(1)));
        assert_eq!(
            s.iter().collect::<Vec<_>>(),
            vec![Action::new(1), Action::new(3)]
        );
        assert!(ActionSet::singleton(Action::new(1)).is_subset(s));
        assert_eq!(ActionSet::first(64).len(), 64);
    }

    #[test]
    fn words() {
        let al = alpha(&["a", "b"], &[]);
        let w = al.parse_word("abba").unwrap();
        assert_eq!(al.format_word(&w), "a b b a");
        assert_eq!(al.parse_word("a b").unwrap().len(), 2);
        assert!(al.parse_word("").unwrap().is_empty());
        assert!(al.parse_word("ax").is_err());
    }
}
