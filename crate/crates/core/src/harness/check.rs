//! Bounded-language verification of one instance.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::alphabet::{IndependenceAlphabet, Word};
use crate::automaton::check_morphism;
use crate::error::{Error, Result};
use crate::harness::instance::Instance;
use crate::synthesis::{build_extended, extend_alphabet, synthesize_with};
use crate::trace::{normal_form, trace_closure_with};
use crate::unfold::Unfolder;
use crate::Strategy;

pub const MAX_CHECK_LEN: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckItem {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub maxlen: usize,
    /// Set when the input violates property ID and nothing was checked.
    pub skipped: Option<String>,
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.skipped.is_none() && self.items.iter().all(|i| i.passed)
    }

    pub fn item(&self, name: &str) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.name == name)
    }

    pub fn to_json(&self) -> Value {
        let items: Vec<Value> = self
            .items
            .iter()
            .map(|i| json!({"name": i.name, "passed": i.passed, "detail": i.detail}))
            .collect();
        json!({
            "maxlen": self.maxlen,
            "skipped": self.skipped,
            "checks": items,
            "passed": self.passed(),
        })
    }

    pub fn to_text(&self) -> String {
        if let Some(reason) = &self.skipped {
            return format!("skipped: {reason}\n");
        }
        let mut s = String::new();
        for i in &self.items {
            let verdict = if i.passed { "pass" } else { "FAIL" };
            s.push_str(&format!("{verdict} {}: {}\n", i.name, i.detail));
        }
        s
    }
}

fn item(name: &'static str, passed: bool, detail: String) -> CheckItem {
    CheckItem {
        name,
        passed,
        detail,
    }
}

/// Shortest, then least, word of `x` not in `y`.
fn first_missing<'a>(x: &'a BTreeSet<Word>, y: &BTreeSet<Word>) -> Option<&'a Word> {
    x.iter()
        .filter(|w| !y.contains(*w))
        .min_by_key(|w| (w.len(), (*w).clone()))
}

fn compare_sets(
    al: &IndependenceAlphabet,
    name: &'static str,
    left: (&str, &BTreeSet<Word>),
    right: (&str, &BTreeSet<Word>),
) -> CheckItem {
    if let Some(w) = first_missing(left.1, right.1) {
        return item(
            name,
            false,
            format!(
                "`{}` is in {} but not in {}",
                al.format_word(w),
                left.0,
                right.0
            ),
        );
    }
    if let Some(w) = first_missing(right.1, left.1) {
        return item(
            name,
            false,
            format!(
                "`{}` is in {} but not in {}",
                al.format_word(w),
                right.0,
                left.0
            ),
        );
    }
    item(name, true, format!("{} words each", left.1.len()))
}

fn normal_forms(al: &IndependenceAlphabet, words: &BTreeSet<Word>) -> Result<BTreeSet<Word>> {
    words.iter().map(|w| normal_form(al, w)).collect()
}

/// Every word of `words` has an equivalent word in the set whose normal
/// forms are `nfs`.
fn covered(
    al: &IndependenceAlphabet,
    name: &'static str,
    words: &BTreeSet<Word>,
    nfs: &BTreeSet<Word>,
    what: &str,
) -> Result<CheckItem> {
    for w in words {
        if !nfs.contains(&normal_form(al, w)?) {
            return Ok(item(
                name,
                false,
                format!("`{}` has no equivalent word in {what}", al.format_word(w)),
            ));
        }
    }
    Ok(item(name, true, format!("{} words covered", words.len())))
}

pub fn check_instance(instance: &Instance, maxlen: usize, cap: usize) -> Result<CheckReport> {
    check_instance_with(instance, maxlen, cap, Strategy::default())
}

pub fn check_instance_with(
    instance: &Instance,
    maxlen: usize,
    cap: usize,
    strategy: Strategy,
) -> Result<CheckReport> {
    if maxlen > MAX_CHECK_LEN {
        return Err(Error::Params(format!(
            "maxlen must be at most {MAX_CHECK_LEN}"
        )));
    }
    if cap == 0 {
        return Err(Error::Params("cap must be positive".into()));
    }
    if !instance.satisfies_id() {
        return Ok(CheckReport {
            maxlen,
            skipped: Some(format!(
                "the input automaton violates property ID ({}), so its language need not be trace-closed",
                instance.warnings[0].trim_start_matches("property ID violated: ")
            )),
            items: Vec::new(),
        });
    }
    let al = &instance.alphabet;
    let src = &instance.automaton;
    let unf = Unfolder::new(al, src)?.unfolding()?;
    let unf_auto = unf.to_indexed_automaton();
    let bundle = synthesize_with(unf.clone(), &instance.distribution, strategy)?;
    let hat = bundle.automaton();
    let ext = extend_alphabet(al, &instance.distribution)?;
    let bar = build_extended(unf.clone(), &ext)?;

    let lang_a = src.enumerate_language(maxlen);
    let closure = trace_closure_with(al, &lang_a, strategy)?;
    let lang_hat = hat.enumerate_language(maxlen, cap)?;
    let lang_unf = unf_auto.enumerate_language(maxlen);
    let nf_unf = normal_forms(al, &lang_unf)?;
    let rho_bar = bar.projected_language(maxlen, cap)?;

    let mut items = vec![compare_sets(
        al,
        "theorem2",
        ("the trace closure of L(A)", &closure),
        ("L(Â_Unf)", &lang_hat),
    )];
    items.push(item(
        "morphism",
        check_morphism(&unf.morphism(), &unf_auto, src),
        format!("{} unfolding states", unf.len()),
    ));
    items.push(covered(al, "lifting", &lang_a, &nf_unf, "L(A_Unf)")?);
    items.push(compare_sets(
        al,
        "rho_equality",
        ("ρ(L(Ā_Unf))", &rho_bar),
        ("L(Â_Unf)", &lang_hat),
    ));
    items.push(match first_missing(&lang_unf, &rho_bar) {
        None => item(
            "rho_inclusion",
            true,
            format!("{} words included", lang_unf.len()),
        ),
        Some(w) => item(
            "rho_inclusion",
            false,
            format!(
                "`{}` is in L(A_Unf) but not in ρ(L(Ā_Unf))",
                al.format_word(w)
            ),
        ),
    });
    items.push(covered(al, "lemma4", &rho_bar, &nf_unf, "L(A_Unf)")?);
    let global = hat.global_automaton_bounded(cap)?;
    let violations = global.check_id(al);
    items.push(match violations.first() {
        None => item("id", true, format!("{} global states", global.len())),
        Some(v) => item("id", false, v.describe(&global, al)),
    });
    let bad_reach: Vec<usize> = (0..bundle.distribution().len())
        .filter(|&k| !(bundle.reach(k).is_reflexive() && bundle.reach(k).is_transitive()))
        .collect();
    items.push(item(
        "reach",
        bad_reach.is_empty(),
        if bad_reach.is_empty() {
            format!("{} processes", bundle.distribution().len())
        } else {
            format!("processes {bad_reach:?} are not preorders")
        },
    ));
    Ok(CheckReport {
        maxlen,
        skipped: None,
        items,
    })
}
