//! Truncated successor tree over timed inputs for weakly-complete machines
//! with half-open guards.
//!
//! Each edge applies an input `k + θ` time units after the previous one,
//! for every integer `k` in the input's guard range. With `θ ≤ 1/|S|²`
//! every path up to the depth cap is a non-integer sequence, and one
//! representative per refined interval is enough.

use std::collections::BTreeMap;

use num_rational::Ratio;

use crate::classify::classify;
use crate::error::AnalysisError;
use crate::fsm_analysis::Goal;
use crate::machine::{InputId, OutputId, StateId, Tfsm};
use crate::search::{bfs, finish, Blocks, HomingLabel, SearchStats, SyncLabel};
use crate::semantics::{is_homing, is_synchronizing, TimedInputSeq};
use crate::time::TimeStamp;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeConfig {
    pub theta: TimeStamp,
    pub goal: Goal,
    pub max_depth: usize,
}

impl TreeConfig {
    /// `θ = 1/(|S|²+1)`; depth cap `|S|²` for homing, `|S|³` for
    /// synchronizing.
    pub fn for_machine(m: &Tfsm, goal: Goal) -> Self {
        let n = m.states().len();
        TreeConfig {
            theta: TimeStamp::new(Ratio::new(1, (n * n) as i64 + 1)).expect("positive"),
            goal,
            max_depth: goal.depth_cap(n),
        }
    }
}

/// Applies `(i, delay)` to every block. States of a block stay together
/// when they emit the same output with the same delay; `None` if some
/// state has no enabled transition.
pub fn block_successor(m: &Tfsm, blocks: &Blocks, i: InputId, delay: TimeStamp) -> Option<Blocks> {
    let mut out = Vec::new();
    for block in blocks.blocks() {
        let mut by_out: BTreeMap<(OutputId, u64), Vec<StateId>> = BTreeMap::new();
        for &s in block {
            let t = m.enabled(s, i, delay)?;
            by_out.entry((t.output, t.delay)).or_default().push(t.dst);
        }
        out.extend(by_out.into_values());
    }
    Some(Blocks::new(out))
}

fn sync_successor(m: &Tfsm, states: &[StateId], i: InputId, delay: TimeStamp) -> Option<SyncLabel> {
    let next = states
        .iter()
        .map(|&s| m.enabled(s, i, delay).map(|t| t.dst))
        .collect::<Option<Vec<_>>>()?;
    Some(SyncLabel::new(next))
}

/// Edge offsets `k + θ` for each input, in declaration order.
fn edges(m: &Tfsm, theta: TimeStamp) -> Vec<(InputId, TimeStamp)> {
    let bounds = classify(m).per_input_bounds;
    m.input_ids()
        .flat_map(|i| {
            let (u, v) = bounds.get(&i).copied().unwrap_or((0, 0));
            (u..v).map(move |k| (i, TimeStamp::from_int(k) + theta))
        })
        .collect()
}

pub fn derive_shortest(m: &Tfsm, goal: Goal) -> Result<Option<TimedInputSeq>, AnalysisError> {
    derive_shortest_with_stats(m, goal).map(|(s, _)| s)
}

pub fn derive_shortest_with_stats(
    m: &Tfsm,
    goal: Goal,
) -> Result<(Option<TimedInputSeq>, SearchStats), AnalysisError> {
    derive_with_config(m, TreeConfig::for_machine(m, goal))
}

pub fn derive_with_config(
    m: &Tfsm,
    cfg: TreeConfig,
) -> Result<(Option<TimedInputSeq>, SearchStats), AnalysisError> {
    let report = classify(m);
    for (ok, what) in [
        (report.deterministic, "deterministic"),
        (report.weakly_complete, "weakly-complete"),
        (report.half_open_only, "restricted to half-open guards"),
    ] {
        if !ok {
            return Err(AnalysisError::Unsupported(format!(
                "machine `{}` is not {what}",
                m.name()
            )));
        }
    }
    let edges = edges(m, cfg.theta);
    let all: Vec<StateId> = m.state_ids().collect();
    let (r, stats) = match cfg.goal {
        Goal::Hs => bfs(
            HomingLabel(Blocks::new([all])),
            cfg.max_depth,
            usize::MAX,
            |l| {
                edges
                    .iter()
                    .map(|&(i, d)| ((i, d), block_successor(m, &l.0, i, d).map(HomingLabel)))
                    .collect()
            },
        ),
        Goal::Ss => bfs(SyncLabel::new(all), cfg.max_depth, usize::MAX, |l| {
            edges
                .iter()
                .map(|&(i, d)| ((i, d), sync_successor(m, &l.0, i, d)))
                .collect()
        }),
    };
    let Some(path) = finish(r, cfg.max_depth)? else {
        return Ok((None, stats));
    };
    let alpha = TimedInputSeq::from_relative(path);
    let ok = match cfg.goal {
        Goal::Hs => is_homing(m, &alpha),
        Goal::Ss => is_synchronizing(m, &alpha),
    };
    if !ok {
        return Err(AnalysisError::Internal(format!(
            "tree result {} fails the {} check",
            alpha.render(m.inputs()),
            cfg.goal
        )));
    }
    Ok((Some(alpha), stats))
}
