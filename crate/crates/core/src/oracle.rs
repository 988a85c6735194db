//! Exhaustive search for homing and synchronizing sequences.
//!
//! This is a test instrument: it enumerates timed sequences level by level
//! and judges them only with the predicates of [`crate::semantics`].

use std::collections::HashSet;

use num_rational::Ratio;

use crate::fsm_analysis::Goal;
use crate::guard::TimedGuard;
use crate::machine::{InputId, OutputId, StateId, Tfsm};
use crate::search::SearchStats;
use crate::semantics::{induce_run, is_homing, is_synchronizing, TimedInputSeq};
use crate::time::{Rational, TimeStamp};

/// Relative delays tried for each input: `k + θ` for every integer `k` in
/// a half-open guard and the value of every point guard.
fn grid(m: &Tfsm, theta: TimeStamp) -> Vec<(InputId, TimeStamp)> {
    let mut out = Vec::new();
    for i in m.input_ids() {
        let mut delays: Vec<TimeStamp> = Vec::new();
        for t in m.transitions().iter().filter(|t| t.input == i) {
            match t.guard {
                TimedGuard::HalfOpen { lo, hi } => {
                    delays.extend((lo..hi).map(|k| TimeStamp::from_int(k) + theta))
                }
                TimedGuard::Point { at } => delays.push(TimeStamp::from_int(at)),
            }
        }
        delays.sort();
        delays.dedup();
        out.extend(delays.into_iter().map(|d| (i, d)));
    }
    out
}

/// Everything about a prefix that matters for its extensions: final
/// states, outputs still pending at the last input (relative to it), and,
/// for homing, which start states have emitted identical outputs so far.
#[derive(PartialEq, Eq, Hash)]
struct Signature {
    finals: Vec<StateId>,
    pending: Vec<Vec<(Rational, OutputId)>>,
    classes: Vec<usize>,
}

/// `None` if some start state leaves the domain.
fn signature(m: &Tfsm, goal: Goal, alpha: &TimedInputSeq) -> Option<Signature> {
    let end = alpha.end_time();
    let mut finals = Vec::new();
    let mut pending = Vec::new();
    let mut past = Vec::new();
    for s in m.state_ids() {
        let run = induce_run(m, s, alpha)?;
        finals.push(run.final_state());
        if goal == Goal::Hs {
            let mut p: Vec<_> = run
                .steps
                .iter()
                .filter(|st| st.out_time >= end)
                .map(|st| (st.out_time.value() - end.value(), st.output()))
                .collect();
            p.sort();
            pending.push(p);
            past.push(run.output_word().before(end));
        }
    }
    let classes = past
        .iter()
        .map(|w| past.iter().position(|x| x == w).unwrap())
        .collect();
    Some(Signature {
        finals,
        pending,
        classes,
    })
}

pub fn brute_force_derive(m: &Tfsm, goal: Goal, max_len: usize) -> Option<TimedInputSeq> {
    brute_force_with_stats(m, goal, max_len).0
}

/// Shortest sequence of length at most `max_len` over the grid with
/// `θ = 1/(max_len+1)`; the first in input-then-delay order among equals.
pub fn brute_force_with_stats(
    m: &Tfsm,
    goal: Goal,
    max_len: usize,
) -> (Option<TimedInputSeq>, SearchStats) {
    let holds = |a: &TimedInputSeq| match goal {
        Goal::Hs => is_homing(m, a),
        Goal::Ss => is_synchronizing(m, a),
    };
    let mut stats = SearchStats { nodes: 1, depth: 0 };
    let root = TimedInputSeq::empty();
    if holds(&root) {
        return (Some(root), stats);
    }
    let theta = TimeStamp::new(Ratio::new(1, max_len as i64 + 1)).expect("positive");
    let grid = grid(m, theta);
    let mut seen: HashSet<Signature> = signature(m, goal, &root).into_iter().collect();
    let mut level = vec![root];
    for depth in 1..=max_len {
        let mut next = Vec::new();
        for prefix in &level {
            for &(i, d) in &grid {
                let mut a = prefix.clone();
                a.push_relative(i, d);
                let Some(sig) = signature(m, goal, &a) else {
                    continue;
                };
                stats.nodes += 1;
                stats.depth = depth;
                if holds(&a) {
                    return (Some(a), stats);
                }
                if seen.insert(sig) {
                    next.push(a);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        level = next;
    }
    (None, stats)
}
