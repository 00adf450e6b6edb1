//! Trace equivalence over an independence alphabet.
//!
//! The canonical representative of a trace is its lexicographically least
//! linearization. It is built greedily: at each step the smallest letter
//! that can be commuted to the front is emitted.

use std::collections::BTreeSet;

use crate::alphabet::{Action, ActionSet, IndependenceAlphabet, Word};
use crate::error::Result;
use crate::par::Strategy;

/// Positions of `word` whose letter commutes with every earlier letter.
fn minimal_positions(alphabet: &IndependenceAlphabet, word: &[Action]) -> Vec<usize> {
    let mut blocked = ActionSet::empty();
    let mut out = Vec::new();
    for (i, &a) in word.iter().enumerate() {
        if !blocked.contains(a) {
            out.push(i);
        }
        blocked = blocked.union(alphabet.dependent_on(a));
    }
    out
}

pub fn normal_form(alphabet: &IndependenceAlphabet, word: &[Action]) -> Result<Word> {
    alphabet.check_word(word)?;
    let mut rest = word.to_vec();
    let mut out = Vec::with_capacity(word.len());
    while !rest.is_empty() {
        let pick = minimal_positions(alphabet, &rest)
            .into_iter()
            .min_by_key(|&i| rest[i])
            .expect("non-empty word has a minimal letter");
        out.push(rest.remove(pick));
    }
    Ok(out)
}

pub fn equivalent(alphabet: &IndependenceAlphabet, u: &[Action], v: &[Action]) -> Result<bool> {
    if u.len() != v.len() {
        alphabet.check_word(u)?;
        alphabet.check_word(v)?;
        return Ok(false);
    }
    Ok(normal_form(alphabet, u)? == normal_form(alphabet, v)?)
}

/// All words equivalent to `word`.
pub fn trace_class(alphabet: &IndependenceAlphabet, word: &[Action]) -> Result<BTreeSet<Word>> {
    alphabet.check_word(word)?;
    let mut out = BTreeSet::new();
    let mut prefix = Vec::with_capacity(word.len());
    linearizations(alphabet, word.to_vec(), &mut prefix, &mut out);
    Ok(out)
}

fn linearizations(
    alphabet: &IndependenceAlphabet,
    rest: Word,
    prefix: &mut Word,
    out: &mut BTreeSet<Word>,
) {
    if rest.is_empty() {
        out.insert(prefix.clone());
        return;
    }
    // minimal letters are pairwise distinct, so each choice is a new word
    for i in minimal_positions(alphabet, &rest) {
        let mut next = rest.clone();
        prefix.push(next.remove(i));
        linearizations(alphabet, next, prefix, out);
        prefix.pop();
    }
}

pub fn trace_closure_bounded(
    alphabet: &IndependenceAlphabet,
    words: &BTreeSet<Word>,
) -> Result<BTreeSet<Word>> {
    trace_closure_with(alphabet, words, Strategy::default())
}

pub fn trace_closure_with(
    alphabet: &IndependenceAlphabet,
    words: &BTreeSet<Word>,
    strategy: Strategy,
) -> Result<BTreeSet<Word>> {
    let words: Vec<&Word> = words.iter().collect();
    let classes = strategy.map(&words, |w| trace_class(alphabet, w));
    let mut out = BTreeSet::new();
    for class in classes {
        out.extend(class?);
    }
    Ok(out)
}

/// Whether `words` is closed under trace equivalence.
pub fn is_trace_closed(alphabet: &IndependenceAlphabet, words: &BTreeSet<Word>) -> Result<bool> {
    for w in words {
        if !trace_class(alphabet, w)?.is_subset(words) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab(independent: bool) -> IndependenceAlphabet {
        let ind: &[(&str, &str)] = if independent { &[("a", "b")] } else { &[] };
        IndependenceAlphabet::new(&["a", "b"], ind).unwrap()
    }

    fn nf(al: &IndependenceAlphabet, w: &str) -> String {
        let w = normal_form(al, &al.parse_word(w).unwrap()).unwrap();
        w.iter().map(|&a| al.name(a)).collect()
    }

    #[test]
    fn normal_forms() {
        assert_eq!(nf(&ab(true), "ba"), "ab");
        assert_eq!(nf(&ab(false), "ab"), "ab");
        assert_eq!(nf(&ab(false), "ba"), "ba");
        assert_eq!(nf(&ab(true), "abab"), "aabb");
        assert_eq!(nf(&ab(true), ""), "");
    }

    #[test]
    fn equivalence() {
        let al = ab(true);
        let p = |s| al.parse_word(s).unwrap();
        assert!(equivalent(&al, &p("ab"), &p("ba")).unwrap());
        let al2 = ab(false);
        assert!(!equivalent(&al2, &p("ab"), &p("ba")).unwrap());
        let al3 = IndependenceAlphabet::new(&["a", "b", "c"], &[("a", "c"), ("b", "c")]).unwrap();
        let p3 = |s| al3.parse_word(s).unwrap();
        assert!(equivalent(&al3, &p3("abc"), &p3("cab")).unwrap());
        assert!(!equivalent(&al3, &p3("abc"), &p3("bac")).unwrap());
    }

    #[test]
    fn closure() {
        let al = ab(true);
        let one: BTreeSet<Word> = [al.parse_word("ab").unwrap()].into();
        let got = trace_closure_bounded(&al, &one).unwrap();
        let want: BTreeSet<Word> = ["ab", "ba"]
            .iter()
            .map(|s| al.parse_word(s).unwrap())
            .collect();
        assert_eq!(got, want);
        assert!(trace_closure_bounded(&al, &BTreeSet::new())
            .unwrap()
            .is_empty());

        let al = ab(false);
        let both: BTreeSet<Word> = ["ab", "ba"]
            .iter()
            .map(|s| al.parse_word(s).unwrap())
            .collect();
        assert_eq!(trace_closure_bounded(&al, &both).unwrap(), both);
    }

    #[test]
    fn unknown_letter_is_rejected() {
        let al = ab(true);
        assert!(normal_form(&al, &[Action::new(5)]).is_err());
        assert!(equivalent(&al, &[Action::new(5)], &[Action::new(0)]).is_err());
    }
}
