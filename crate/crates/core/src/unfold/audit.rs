//! Executable forms of the structural facts about boxes and triangles:
//! action coverage along paths, and the copy-linking discipline of
//! connected boxes.

use std::collections::{BTreeMap, HashSet};

use super::builder::ConnectedBoxLog;
use super::piece::{PieceKind, UnfoldingPiece};
use crate::alphabet::ActionSet;

/// A path of bounded length that misses some required action.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PathViolation {
    pub from: usize,
    pub to: usize,
    pub used: ActionSet,
    pub required: ActionSet,
}

/// Every `(state, used actions)` pair reachable from `start` by a path of
/// length `1..=maxlen` (or `0..=maxlen` when `include_empty`).
fn reachable_with_actions(
    piece: &UnfoldingPiece,
    start: usize,
    maxlen: usize,
    include_empty: bool,
) -> HashSet<(usize, ActionSet)> {
    let mut seen = HashSet::new();
    let mut frontier = vec![(start, ActionSet::empty())];
    if include_empty {
        seen.insert((start, ActionSet::empty()));
    }
    for _ in 0..maxlen {
        let mut next = Vec::new();
        for &(s, used) in &frontier {
            for &(a, t) in piece.successors(s) {
                let item = (t as usize, used.with(a));
                if seen.insert(item) {
                    next.push(item);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    seen
}

/// Paths from a triangle's initial state to a state `(w, T, q, l)` that do
/// not use every action of `T`.
pub fn triangle_path_violations(piece: &UnfoldingPiece, maxlen: usize) -> Vec<PathViolation> {
    assert_eq!(piece.kind(), PieceKind::Triangle);
    let mut out: Vec<PathViolation> = reachable_with_actions(piece, 0, maxlen, true)
        .into_iter()
        .filter_map(|(s, used)| {
            let (required, _, _) = piece.state(s).top()?;
            (!required.is_subset(used)).then_some(PathViolation {
                from: 0,
                to: s,
                used,
                required,
            })
        })
        .collect();
    out.sort_by_key(|v| (v.to, v.used));
    out
}

/// Non-empty paths between initial states of triangle copies inside a
/// connected box that do not use every action of the box.
pub fn box_path_violations(piece: &UnfoldingPiece, maxlen: usize) -> Vec<PathViolation> {
    assert_eq!(piece.kind(), PieceKind::ConnectedBox);
    let required = piece.over();
    let starts: Vec<usize> = (0..piece.len()).filter(|&s| piece.slot(s) == 0).collect();
    let mut out = Vec::new();
    for &s in &starts {
        for (t, used) in reachable_with_actions(piece, s, maxlen, false) {
            if piece.slot(t) == 0 && !required.is_subset(used) {
                out.push(PathViolation {
                    from: s,
                    to: t,
                    used,
                    required,
                });
            }
        }
    }
    out.sort_by_key(|v| (v.from, v.to, v.used));
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinkViolation {
    /// An added transition links a copy to itself.
    SelfLink { anchor: usize, rank: u32 },
    /// Two added transitions link the same ordered pair of copies.
    DoubleLink {
        from: (usize, u32),
        to: (usize, u32),
        count: usize,
    },
    /// The copies of one triangle do not have consecutive ranks.
    NonConsecutive { anchor: usize, ranks: Vec<u32> },
}

type RankedCopy = (usize, u32);

pub fn link_violations(log: &ConnectedBoxLog) -> Vec<LinkViolation> {
    let mut out = Vec::new();
    let mut pairs: BTreeMap<(RankedCopy, RankedCopy), usize> = BTreeMap::new();
    for t in &log.added {
        if t.from_anchor == t.to_anchor && t.from_rank == t.to_rank {
            out.push(LinkViolation::SelfLink {
                anchor: t.from_anchor,
                rank: t.from_rank,
            });
        }
        *pairs
            .entry(((t.from_anchor, t.from_rank), (t.to_anchor, t.to_rank)))
            .or_default() += 1;
    }
    for (&(from, to), &count) in &pairs {
        if count > 1 {
            out.push(LinkViolation::DoubleLink { from, to, count });
        }
    }
    let mut ranks: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    for &(anchor, rank) in &log.inserted {
        ranks.entry(anchor).or_default().push(rank);
    }
    for (anchor, ranks) in ranks {
        if ranks.windows(2).any(|w| w[1] != w[0] + 1) {
            out.push(LinkViolation::NonConsecutive { anchor, ranks });
        }
    }
    out
}
