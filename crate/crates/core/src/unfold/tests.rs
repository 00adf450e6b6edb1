use std::collections::BTreeSet;
use std::sync::Arc;

use super::*;
use crate::alphabet::{ActionSet, IndependenceAlphabet, Word};
use crate::automaton::{check_morphism, Automaton};

fn ab(independent: bool) -> IndependenceAlphabet {
    let ind: &[(&str, &str)] = if independent { &[("a", "b")] } else { &[] };
    IndependenceAlphabet::new(&["a", "b"], ind).unwrap()
}

/// One final state with an a-loop and a b-loop, a I b.
fn i1() -> (IndependenceAlphabet, Automaton) {
    let al = ab(true);
    let a = Automaton::from_named(
        &al,
        &["q0"],
        "q0",
        &["q0"],
        &[("q0", "a", "q0"), ("q0", "b", "q0")],
    )
    .unwrap();
    (al, a)
}

/// (ab)* with a D b.
fn i2() -> (IndependenceAlphabet, Automaton) {
    let al = ab(false);
    let a = Automaton::from_named(
        &al,
        &["q0", "q1"],
        "q0",
        &["q0"],
        &[("q0", "a", "q1"), ("q1", "b", "q0")],
    )
    .unwrap();
    (al, a)
}

fn set(al: &IndependenceAlphabet, s: &str) -> ActionSet {
    s.chars()
        .map(|c| al.action(&c.to_string()).unwrap())
        .collect()
}

#[test]
fn base_boxes() {
    let (al, a) = i1();
    let mut u = Unfolder::new(&al, &a).unwrap();
    let b = u.base_box(0).unwrap();
    assert_eq!(b.len(), 1);
    assert!(b.is_final(0));
    assert_eq!(
        b.to_automaton(&al, &a).enumerate_language(3),
        [Word::new()].into()
    );

    let nf = Automaton::from_named(&al, &["q0"], "q0", &[], &[]).unwrap();
    let mut u = Unfolder::new(&al, &nf).unwrap();
    let b = u.base_box(0).unwrap();
    assert_eq!(b.len(), 1);
    assert!(b.to_automaton(&al, &nf).enumerate_language(3).is_empty());
    assert!(u.base_box(3).is_err());
}

#[test]
fn triangles() {
    let (al, a) = i1();
    let mut u = Unfolder::new(&al, &a).unwrap();
    assert_eq!(u.build_triangle(set(&al, "a"), 0).unwrap().len(), 1);
    let t = u.build_triangle(al.all(), 0).unwrap();
    // base, plus a 2-state {a}-box and a 2-state {b}-box
    assert_eq!(t.len(), 5);
    assert_eq!(t.transition_count(), 2 + 2 + 2);
    assert!(matches!(
        u.build_triangle(ActionSet::empty(), 0),
        Err(crate::Error::EmptyActionSet)
    ));

    let lonely = Automaton::from_named(&al, &["q0"], "q0", &["q0"], &[]).unwrap();
    let mut u = Unfolder::new(&al, &lonely).unwrap();
    assert_eq!(u.build_triangle(al.all(), 0).unwrap().len(), 1);
}

#[test]
fn missing_sets() {
    let (al, a) = i1();
    let mut u = Unfolder::new(&al, &a).unwrap();
    let m = u.missing(set(&al, "b"), 0, 0).unwrap();
    assert_eq!(m.len(), 1);
    let (w, act) = m.marked_pairs().next().unwrap();
    assert_eq!(act, al.action("b").unwrap());
    assert_eq!(w.top(), Some((ActionSet::empty(), 0, 1)));
    assert_eq!(w.inner(), Some(&MarkedState::Base(0)));

    // same object as the memoized triangle
    let tri = u.build_triangle(set(&al, "b"), 0).unwrap();
    assert!(Arc::ptr_eq(m.triangle(), &tri));

    let (al2, a2) = i2();
    let mut u = Unfolder::new(&al2, &a2).unwrap();
    // nothing enters q1 via b
    assert!(u.missing(set(&al2, "b"), 0, 1).unwrap().is_empty());
    // △_{ab,q0} = base(q0) -a-> box_{a,q1} (one state, image q1); q1 -b-> q0
    let m = u.missing(al2.all(), 0, 0).unwrap();
    assert_eq!(m.pairs(), &[(1, al2.action("b").unwrap())]);
    assert!(u.missing(al2.all(), 0, 1).unwrap().is_empty());
}

#[test]
fn max_out_degrees() {
    let (al, a) = i1();
    let mut u = Unfolder::new(&al, &a).unwrap();
    assert_eq!(u.max_out_degree(set(&al, "b")).unwrap(), 1);

    let none = Automaton::from_named(&al, &["q0", "q1"], "q0", &["q0"], &[]).unwrap();
    let mut u = Unfolder::new(&al, &none).unwrap();
    assert_eq!(u.max_out_degree(al.all()).unwrap(), 0);
    assert!(u.max_out_degree(ActionSet::empty()).is_err());
}

#[test]
fn boxes_of_i1() {
    let (al, a) = i1();
    let b_act = al.action("b").unwrap();
    let mut u = Unfolder::new(&al, &a).unwrap();
    let bb = u.build_box(set(&al, "b"), 0).unwrap();
    assert_eq!(bb.kind(), PieceKind::ConnectedBox);
    assert_eq!(bb.len(), 2);
    let edges: Vec<_> = bb.transitions().map(|t| (t.from, t.to)).collect();
    assert_eq!(edges, vec![(0, 1), (1, 0)]);
    assert!(bb.transitions().all(|t| t.action == b_act));
    assert_eq!(bb.state(0).top().unwrap().2, 1);
    assert_eq!(bb.state(1).top().unwrap().2, 2);

    let log = &u.connected_logs()[0];
    assert_eq!(log.copies, 2);
    assert_eq!(
        log.added
            .iter()
            .map(|t| (t.from_rank, t.to_rank))
            .collect::<Vec<_>>(),
        vec![(1, 2), (2, 1)]
    );

    let full = u.build_box(al.all(), 0).unwrap();
    assert_eq!(full.kind(), PieceKind::UnconnectedBox);
    assert_eq!(full.len(), 6);
}

#[test]
fn unfolding_of_i1() {
    let (al, a) = i1();
    let unf = unfold(&al, &a).unwrap();
    assert_eq!(unf.len(), 6);
    assert!((0..6).all(|s| unf.image(s) == 0 && unf.is_final(s)));
    let lang = unf.to_automaton(&al, &a).enumerate_language(3);
    let (ia, ib) = (al.action("a").unwrap(), al.action("b").unwrap());
    let mut want = BTreeSet::new();
    for m in 0..=3 {
        for n in 0..=3 - m {
            let mut w = vec![ib; m];
            w.extend(std::iter::repeat_n(ia, n));
            want.insert(w);
        }
    }
    assert_eq!(lang, want);
    assert!(check_morphism(
        &unf.morphism(),
        &unf.to_automaton(&al, &a),
        &a
    ));
}

#[test]
fn trivial_unfolding() {
    let (al, _) = i1();
    let lonely = Automaton::from_named(&al, &["q0"], "q0", &["q0"], &[]).unwrap();
    assert_eq!(unfold(&al, &lonely).unwrap().len(), 1);
}

#[test]
fn every_piece_is_a_morphic_image() {
    for (al, a) in [i1(), i2()] {
        let mut u = Unfolder::new(&al, &a).unwrap();
        u.build_all().unwrap();
        for p in u.boxes().chain(u.triangles()) {
            let target = a.restrict(p.over(), p.anchor()).unwrap();
            assert!(check_morphism(
                &p.morphism(),
                &p.to_automaton(&al, &a),
                &target
            ));
            assert_eq!(p.image(0), p.anchor());
            assert!((0..p.len()).all(|s| p.is_final(s) == a.is_final(p.image(s))));
        }
    }
}

#[test]
fn audits_pass_on_small_instances() {
    for (al, a) in [i1(), i2()] {
        let mut u = Unfolder::new(&al, &a).unwrap();
        u.build_all().unwrap();
        for t in u.triangles() {
            assert!(audit::triangle_path_violations(t, 8).is_empty());
        }
        for b in u.boxes().filter(|b| b.kind() == PieceKind::ConnectedBox) {
            assert!(audit::box_path_violations(b, 8).is_empty());
        }
        for log in u.connected_logs() {
            assert!(audit::link_violations(log).is_empty());
        }
    }
}

#[test]
fn state_limit_is_enforced() {
    let (al, a) = i1();
    let mut u = Unfolder::new(&al, &a).unwrap().with_state_limit(3);
    assert!(matches!(u.unfolding(), Err(crate::Error::CapExceeded(3))));
}

#[test]
fn rebuilds_are_identical() {
    let (al, a) = i2();
    let x = unfold(&al, &a).unwrap();
    let y = unfold(&al, &a).unwrap();
    assert_eq!(x, y);
    assert_eq!(x.to_json(&al, &a), y.to_json(&al, &a));
}
