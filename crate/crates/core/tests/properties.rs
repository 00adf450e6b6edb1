use std::collections::BTreeSet;

use proptest::prelude::*;

use trace_unfold::harness::{generate_instance, GenParams, Instance};
use trace_unfold::trace::{
    equivalent, is_trace_closed, normal_form, trace_class, trace_closure_with,
};
use trace_unfold::{
    check_morphism, extend_alphabet, process_reach, Action, ActionSet, Automaton, Distribution,
    IndependenceAlphabet, Strategy as Exec, Transition, Unfolder, Word,
};

const NAMES: [&str; 4] = ["a", "b", "c", "d"];

/// An alphabet of `n` actions; bit `i` of `pairs` makes the `i`-th pair
/// (in lexicographic order) independent.
fn alphabet(n: usize, pairs: u32) -> IndependenceAlphabet {
    let mut ind = Vec::new();
    let mut bit = 0;
    for (i, &x) in NAMES[..n].iter().enumerate() {
        for &y in &NAMES[i + 1..n] {
            if pairs >> bit & 1 == 1 {
                ind.push((x, y));
            }
            bit += 1;
        }
    }
    IndependenceAlphabet::new(&NAMES[..n], &ind).unwrap()
}

fn arb_alphabet() -> impl Strategy<Value = IndependenceAlphabet> {
    (1usize..=4, any::<u32>()).prop_map(|(n, p)| alphabet(n, p))
}

fn arb_word(al: &IndependenceAlphabet, maxlen: usize) -> impl Strategy<Value = Word> {
    let n = al.len();
    prop::collection::vec((0..n).prop_map(Action::new), 0..=maxlen)
}

/// Words reachable from `w` by swapping adjacent independent letters.
fn swap_closure(al: &IndependenceAlphabet, w: &[Action]) -> BTreeSet<Word> {
    let mut seen: BTreeSet<Word> = [w.to_vec()].into();
    let mut stack = vec![w.to_vec()];
    while let Some(u) = stack.pop() {
        for i in 0..u.len().saturating_sub(1) {
            if al.independent(u[i], u[i + 1]) {
                let mut v = u.clone();
                v.swap(i, i + 1);
                if seen.insert(v.clone()) {
                    stack.push(v);
                }
            }
        }
    }
    seen
}

fn instance(seed: u64, local_states: usize, actions: usize) -> Option<Instance> {
    let inst = generate_instance(&GenParams::new(seed, local_states, actions))
        .ok()?
        .validate()
        .ok()?;
    (inst.automaton.len() <= 8).then_some(inst)
}

fn small_unfolding(inst: &Instance) -> Option<Automaton> {
    let mut u = Unfolder::new(&inst.alphabet, &inst.automaton)
        .ok()?
        .with_state_limit(20_000);
    u.unfolding().ok().map(|p| p.to_indexed_automaton())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn normal_form_is_a_canonical_representative(
        (al, w) in arb_alphabet().prop_flat_map(|al| { let w = arb_word(&al, 7); (Just(al), w) })
    ) {
        let nf = normal_form(&al, &w).unwrap();
        prop_assert_eq!(normal_form(&al, &nf).unwrap(), nf.clone());
        let class = swap_closure(&al, &w);
        prop_assert!(class.contains(&nf));
        prop_assert_eq!(class.iter().next().unwrap(), &nf);
        prop_assert_eq!(trace_class(&al, &w).unwrap(), class.clone());
        for v in &class {
            prop_assert_eq!(normal_form(&al, v).unwrap(), nf.clone());
        }
    }

    #[test]
    fn equivalence_matches_swap_closure(
        (al, u, v) in arb_alphabet().prop_flat_map(|al| {
            let u = arb_word(&al, 6);
            let v = arb_word(&al, 6);
            (Just(al), u, v)
        })
    ) {
        prop_assert_eq!(equivalent(&al, &u, &v).unwrap(), swap_closure(&al, &u).contains(&v));
    }

    #[test]
    fn components_partition_and_separate(al in arb_alphabet(), bits in any::<u64>()) {
        let t = ActionSet::from_bits(bits).intersection(al.all());
        let comps = al.connected_components(t);
        let mut union = ActionSet::empty();
        for (i, c) in comps.iter().enumerate() {
            prop_assert!(!c.is_empty());
            prop_assert!(al.is_connected(*c));
            prop_assert!(union.intersection(*c).is_empty());
            union = union.union(*c);
            for d in &comps[i + 1..] {
                for a in c.iter() {
                    for b in d.iter() {
                        prop_assert!(al.independent(a, b));
                    }
                }
            }
        }
        prop_assert_eq!(union, t);
        if !t.is_empty() {
            prop_assert_eq!(al.decomposition(t).unwrap(), comps[0]);
            prop_assert!(comps[0].contains(t.least().unwrap()));
        }
    }

    #[test]
    fn default_distribution_and_extension_validate(al in arb_alphabet()) {
        let d = Distribution::default_for(&al);
        prop_assert!(Distribution::new(&al, d.processes().to_vec()).is_ok());
        let ext = extend_alphabet(&al, &d).unwrap();
        prop_assert!(Distribution::new(ext.alphabet(), ext.distribution().processes().to_vec()).is_ok());
        let internal: usize = d.processes().iter().map(|p| al.len() - p.len()).sum();
        prop_assert_eq!(ext.alphabet().len(), al.len() + internal);
    }

    #[test]
    fn closure_strategies_agree(
        (al, words) in arb_alphabet().prop_flat_map(|al| {
            let ws = prop::collection::btree_set(arb_word(&al, 5), 0..12);
            (Just(al), ws)
        })
    ) {
        let seq = trace_closure_with(&al, &words, Exec::Sequential).unwrap();
        let par = trace_closure_with(&al, &words, Exec::Parallel).unwrap();
        prop_assert!(is_trace_closed(&al, &seq).unwrap());
        prop_assert!(words.is_subset(&seq));
        prop_assert_eq!(seq, par);
    }

    #[test]
    fn reach_avoiding_is_antitone(seed in any::<u64>(), f1 in any::<u64>(), f2 in any::<u64>()) {
        if let Some(inst) = instance(seed, 2, 3) {
            let all = inst.alphabet.all();
            let small = ActionSet::from_bits(f1).intersection(all);
            let big = small.union(ActionSet::from_bits(f2).intersection(all));
            for q in 0..inst.automaton.len() {
                let r_small = inst.automaton.reach_avoiding(q, small).unwrap();
                let r_big = inst.automaton.reach_avoiding(q, big).unwrap();
                prop_assert!(r_big.is_subset(&r_small));
                prop_assert!(r_big.contains(&q));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_instances_are_trace_closed(seed in any::<u64>(), k in 1usize..=3, s in 1usize..=3) {
        if let Some(inst) = instance(seed, s, k) {
            prop_assert!(inst.satisfies_id());
            prop_assert!(is_trace_closed(&inst.alphabet, &inst.automaton.enumerate_language(5)).unwrap());
            let again = generate_instance(&GenParams::new(seed, s, k)).unwrap();
            prop_assert_eq!(again, inst.to_file());
        }
    }

    #[test]
    fn unfoldings_lift_every_word(seed in any::<u64>(), k in 1usize..=3) {
        let Some(inst) = instance(seed, 2, k) else { return Ok(()) };
        let Some(unf) = small_unfolding(&inst) else { return Ok(()) };
        let lang_a = inst.automaton.enumerate_language(5);
        let lang_u = unf.enumerate_language(5);
        // a morphism implies inclusion
        prop_assert!(lang_u.is_subset(&lang_a));
        let nfs: BTreeSet<Word> = lang_u.iter().map(|w| normal_form(&inst.alphabet, w).unwrap()).collect();
        for w in &lang_a {
            prop_assert!(nfs.contains(&normal_form(&inst.alphabet, w).unwrap()));
        }
    }

    #[test]
    fn reach_relations_are_preorders(seed in any::<u64>(), k in 1usize..=3) {
        let Some(inst) = instance(seed, 2, k) else { return Ok(()) };
        let mut u = Unfolder::new(&inst.alphabet, &inst.automaton).unwrap().with_state_limit(20_000);
        let Ok(unf) = u.unfolding() else { return Ok(()) };
        for p in 0..inst.distribution.len() {
            let r = process_reach(&unf, &inst.distribution, p);
            prop_assert!(r.is_reflexive());
            prop_assert!(r.is_transitive());
        }
    }
}

#[test]
fn morphism_detects_broken_maps() {
    let al = alphabet(2, 1);
    let a = Automaton::from_named(&al, &["p", "q"], "p", &["q"], &[("p", "a", "q")]).unwrap();
    let unf = Unfolder::new(&al, &a).unwrap().unfolding().unwrap();
    let auto = unf.to_indexed_automaton();
    assert!(check_morphism(&unf.morphism(), &auto, &a));
    let mut broken = unf.morphism();
    broken.0.iter_mut().for_each(|q| *q = 0);
    assert!(!check_morphism(&broken, &auto, &a));
    let extra = Automaton::new(
        auto.names().to_vec(),
        0,
        auto.actions(),
        auto.transitions()
            .iter()
            .copied()
            .chain([Transition::new(0, Action::new(1), 0)]),
        auto.finals().collect::<Vec<_>>(),
    )
    .unwrap();
    assert!(!check_morphism(&unf.morphism(), &extra, &a));
}
