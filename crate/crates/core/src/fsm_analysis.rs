//! Shortest homing and synchronizing sequences of deterministic complete
//! untimed FSMs.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::classify::fsm_classify;
use crate::error::AnalysisError;
use crate::machine::{Fsm, InputId, OutputId, StateId};
use crate::search::{bfs, finish, Blocks, HomingLabel, SearchStats, SyncLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Goal {
    Hs,
    Ss,
}

impl Goal {
    /// Depth cap of the tree search on an `n`-state machine.
    pub fn depth_cap(self, n: usize) -> usize {
        match self {
            Goal::Hs => n * n,
            Goal::Ss => n * n * n,
        }
    }
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Goal::Hs => "hs",
            Goal::Ss => "ss",
        })
    }
}

fn require_det_complete(m: &Fsm) -> Result<(), AnalysisError> {
    let r = fsm_classify(m);
    if !r.deterministic {
        return Err(AnalysisError::Unsupported(format!(
            "fsm `{}` is not deterministic",
            m.name()
        )));
    }
    if !r.complete {
        return Err(AnalysisError::Unsupported(format!(
            "fsm `{}` is not complete",
            m.name()
        )));
    }
    Ok(())
}

fn step(m: &Fsm, s: StateId, i: InputId) -> (OutputId, StateId) {
    let t = m.step(s, i).expect("complete machine");
    (t.output, t.dst)
}

/// Successor of a homing label: each block is split by output and mapped
/// to its image.
pub(crate) fn split_blocks(m: &Fsm, label: &Blocks, i: InputId) -> Blocks {
    let mut out = Vec::new();
    for block in label.blocks() {
        let mut by_out: BTreeMap<OutputId, Vec<StateId>> = BTreeMap::new();
        for &s in block {
            let (o, d) = step(m, s, i);
            by_out.entry(o).or_default().push(d);
        }
        out.extend(by_out.into_values());
    }
    Blocks::new(out)
}

pub fn fsm_derive(m: &Fsm, goal: Goal) -> Result<Option<Vec<InputId>>, AnalysisError> {
    fsm_derive_with_stats(m, goal).map(|(w, _)| w)
}

/// Shortest word for `goal`; ties go to the earlier input in declaration
/// order at the earliest position.
pub fn fsm_derive_with_stats(
    m: &Fsm,
    goal: Goal,
) -> Result<(Option<Vec<InputId>>, SearchStats), AnalysisError> {
    require_det_complete(m)?;
    let n = m.states().len();
    let inputs: Vec<InputId> = m.input_ids().collect();
    let all: Vec<StateId> = m.state_ids().collect();
    let cap = goal.depth_cap(n);
    let (r, stats) = match goal {
        Goal::Hs => bfs(HomingLabel(Blocks::new([all])), cap, usize::MAX, |l| {
            inputs
                .iter()
                .map(|&i| (i, Some(HomingLabel(split_blocks(m, &l.0, i)))))
                .collect()
        }),
        Goal::Ss => bfs(SyncLabel::new(all), cap, usize::MAX, |l| {
            inputs
                .iter()
                .map(|&i| {
                    (
                        i,
                        Some(SyncLabel::new(
                            l.0.iter().map(|&s| step(m, s, i).1).collect(),
                        )),
                    )
                })
                .collect()
        }),
    };
    Ok((finish(r, cap)?, stats))
}

pub fn fsm_check(m: &Fsm, goal: Goal, word: &[InputId]) -> Result<bool, AnalysisError> {
    require_det_complete(m)?;
    if let Some(bad) = word.iter().find(|i| i.0 >= m.inputs().len()) {
        return Err(AnalysisError::UnknownSymbol(format!("input #{}", bad.0)));
    }
    let runs: Vec<(Vec<OutputId>, StateId)> = m
        .state_ids()
        .map(|s| {
            let mut cur = s;
            let outs = word
                .iter()
                .map(|&i| {
                    let (o, d) = step(m, cur, i);
                    cur = d;
                    o
                })
                .collect();
            (outs, cur)
        })
        .collect();
    Ok(match goal {
        Goal::Ss => runs.windows(2).all(|w| w[0].1 == w[1].1),
        Goal::Hs => {
            let mut seen: HashMap<&[OutputId], StateId> = HashMap::new();
            runs.iter()
                .all(|(outs, fin)| *seen.entry(outs).or_insert(*fin) == *fin)
        }
    })
}

/// [`fsm_check`] over input names.
pub fn fsm_check_names(m: &Fsm, goal: Goal, word: &[&str]) -> Result<bool, AnalysisError> {
    let ids = word
        .iter()
        .map(|n| {
            m.input(n)
                .ok_or_else(|| AnalysisError::UnknownSymbol(n.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    fsm_check(m, goal, &ids)
}
