//! Structural classification of timed and untimed machines.

use std::collections::BTreeMap;

use crate::guard::GuardUnion;
use crate::machine::{Fsm, InputId, Tfsm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassReport {
    /// Guards of transitions sharing `(src, input)` are disjoint.
    pub deterministic: bool,
    /// For each input the union of guards is the same set at every state.
    pub weakly_complete: bool,
    /// Every input is enabled at every relative time; impossible with
    /// bounded guards, so true only for machines without inputs.
    pub strongly_complete: bool,
    pub point_interval: bool,
    pub half_open_only: bool,
    /// `(U_i, V_i)`: smallest left and largest right guard boundary of each
    /// input that has transitions. Equal for a lone point guard.
    pub per_input_bounds: BTreeMap<InputId, (u64, u64)>,
}

pub fn classify(m: &Tfsm) -> ClassReport {
    let mut deterministic = true;
    'outer: for s in m.state_ids() {
        for i in m.input_ids() {
            let ts: Vec<_> = m.transitions_from(s, i).collect();
            for (a, ta) in ts.iter().enumerate() {
                if ts[a + 1..].iter().any(|tb| ta.guard.intersects(tb.guard)) {
                    deterministic = false;
                    break 'outer;
                }
            }
        }
    }

    let weakly_complete = m.input_ids().all(|i| {
        let mut unions = m
            .state_ids()
            .map(|s| GuardUnion::of(m.transitions_from(s, i).map(|t| t.guard)));
        let first = unions.next().unwrap_or_default();
        unions.all(|u| u == first)
    });

    let point_interval = m.transitions().iter().all(|t| t.guard.is_point());
    let half_open_only = m.transitions().iter().all(|t| !t.guard.is_point());

    let mut per_input_bounds = BTreeMap::new();
    for t in m.transitions() {
        let e = per_input_bounds
            .entry(t.input)
            .or_insert((t.guard.lo(), t.guard.hi()));
        e.0 = e.0.min(t.guard.lo());
        e.1 = e.1.max(t.guard.hi());
    }

    ClassReport {
        deterministic,
        weakly_complete,
        strongly_complete: m.inputs().is_empty(),
        point_interval,
        half_open_only,
        per_input_bounds,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FsmReport {
    pub deterministic: bool,
    pub observable: bool,
    pub complete: bool,
}

pub fn fsm_classify(m: &Fsm) -> FsmReport {
    let mut report = FsmReport {
        deterministic: true,
        observable: true,
        complete: true,
    };
    for s in m.state_ids() {
        for i in m.input_ids() {
            let ts: Vec<_> = m.transitions_from(s, i).collect();
            if ts.is_empty() {
                report.complete = false;
            }
            if ts.len() > 1 {
                report.deterministic = false;
            }
            for (a, ta) in ts.iter().enumerate() {
                if ts[a + 1..].iter().any(|tb| tb.output == ta.output) {
                    report.observable = false;
                }
            }
        }
    }
    report
}
