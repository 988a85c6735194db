//! Region FSM: an untimed abstraction whose inputs pair an input with a
//! refined guard interval and whose outputs pair an output with its delay.

use std::collections::BTreeMap;

use num_rational::Ratio;

use crate::classify::classify;
use crate::error::AnalysisError;
use crate::fsm_analysis::{fsm_derive_with_stats, Goal};
use crate::guard::TimedGuard;
use crate::machine::{Fsm, FsmTransition, InputId, OutputId, Tfsm};
use crate::search::SearchStats;
use crate::semantics::{is_homing, is_synchronizing, TimedInputSeq};
use crate::time::TimeStamp;

/// Untimed projection of a timed sequence: each input with the refined
/// interval containing its relative delay.
pub type AbstractWord = Vec<(InputId, TimedGuard)>;

/// Splits the guards of `i` at every boundary point.
///
/// Half-open guards yield the intervals between consecutive boundary
/// points that lie inside some guard; point guards are returned as they
/// are. An input mixing both kinds cannot be refined.
pub fn refine_guards(m: &Tfsm, i: InputId) -> Result<Vec<TimedGuard>, AnalysisError> {
    let guards = m.guards_of(i);
    if guards.iter().all(|g| g.is_point()) {
        return Ok(guards);
    }
    if guards.iter().any(|g| g.is_point()) {
        return Err(AnalysisError::Unsupported(format!(
            "input `{}` mixes point and half-open guards",
            m.input_name(i)
        )));
    }
    let mut points: Vec<u64> = guards.iter().flat_map(|g| [g.lo(), g.hi()]).collect();
    points.sort_unstable();
    points.dedup();
    Ok(points
        .windows(2)
        .map(|w| TimedGuard::HalfOpen { lo: w[0], hi: w[1] })
        .filter(|r| guards.iter().any(|g| r.is_subset_of(*g)))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionFsm {
    fsm: Fsm,
    /// Abstract input `k` of `fsm` is `abstract_inputs[k]`.
    abstract_inputs: Vec<(InputId, TimedGuard)>,
    /// Abstract output `k` of `fsm` is `abstract_outputs[k]`.
    abstract_outputs: Vec<(OutputId, u64)>,
    refined: BTreeMap<InputId, Vec<TimedGuard>>,
}

impl RegionFsm {
    pub fn fsm(&self) -> &Fsm {
        &self.fsm
    }

    pub fn abstract_inputs(&self) -> &[(InputId, TimedGuard)] {
        &self.abstract_inputs
    }

    pub fn abstract_outputs(&self) -> &[(OutputId, u64)] {
        &self.abstract_outputs
    }

    pub fn refined(&self, i: InputId) -> &[TimedGuard] {
        self.refined.get(&i).map_or(&[], Vec::as_slice)
    }

    /// Region input id of `(i, g)`.
    pub fn abstract_input(&self, i: InputId, g: TimedGuard) -> Option<InputId> {
        self.abstract_inputs
            .iter()
            .position(|&p| p == (i, g))
            .map(InputId)
    }

    pub fn encode(&self, w: &[(InputId, TimedGuard)]) -> Option<Vec<InputId>> {
        w.iter().map(|&(i, g)| self.abstract_input(i, g)).collect()
    }

    pub fn decode(&self, w: &[InputId]) -> AbstractWord {
        w.iter().map(|a| self.abstract_inputs[a.0]).collect()
    }

    /// Classifies each relative delay into the refinement; `None` if some
    /// delay falls outside every refined interval.
    pub fn project(&self, alpha: &TimedInputSeq) -> Option<AbstractWord> {
        alpha
            .relative()
            .map(|(i, d)| {
                self.refined(i)
                    .iter()
                    .find(|g| g.contains(d))
                    .map(|&g| (i, g))
            })
            .collect()
    }
}

/// Builds the region FSM of a deterministic machine.
pub fn build_region_fsm(m: &Tfsm) -> Result<RegionFsm, AnalysisError> {
    if !classify(m).deterministic {
        return Err(AnalysisError::Unsupported(format!(
            "machine `{}` is not deterministic",
            m.name()
        )));
    }
    let mut refined = BTreeMap::new();
    let mut abstract_inputs = Vec::new();
    for i in m.input_ids() {
        let r = refine_guards(m, i)?;
        abstract_inputs.extend(r.iter().map(|&g| (i, g)));
        refined.insert(i, r);
    }
    let mut abstract_outputs: Vec<(OutputId, u64)> = m
        .transitions()
        .iter()
        .map(|t| (t.output, t.delay))
        .collect();
    abstract_outputs.sort_unstable();
    abstract_outputs.dedup();

    let mut transitions = Vec::new();
    for s in m.state_ids() {
        for (k, &(i, g)) in abstract_inputs.iter().enumerate() {
            for t in m.transitions_from(s, i).filter(|t| g.is_subset_of(t.guard)) {
                let o = abstract_outputs
                    .binary_search(&(t.output, t.delay))
                    .expect("collected above");
                transitions.push(FsmTransition {
                    src: s,
                    input: InputId(k),
                    output: OutputId(o),
                    dst: t.dst,
                });
            }
        }
    }
    let input_names = abstract_inputs
        .iter()
        .map(|&(i, g)| format!("({},{})", m.input_name(i), g))
        .collect();
    let output_names = abstract_outputs
        .iter()
        .map(|&(o, d)| format!("({},{})", m.output_name(o), d))
        .collect();
    let fsm = Fsm::new(
        format!("R({})", m.name()),
        m.states().names().to_vec(),
        input_names,
        output_names,
        transitions,
    )?;
    Ok(RegionFsm {
        fsm,
        abstract_inputs,
        abstract_outputs,
        refined,
    })
}

pub fn project(m: &Tfsm, alpha: &TimedInputSeq) -> Result<Option<AbstractWord>, AnalysisError> {
    let mut refined = BTreeMap::new();
    for i in m.input_ids() {
        refined.insert(i, refine_guards(m, i)?);
    }
    Ok(alpha
        .relative()
        .map(|(i, d)| refined[&i].iter().find(|g| g.contains(d)).map(|&g| (i, g)))
        .collect())
}

fn check_refined(m: &Tfsm, w: &[(InputId, TimedGuard)]) -> Result<(), AnalysisError> {
    for &(i, g) in w {
        if i.0 >= m.inputs().len() {
            return Err(AnalysisError::UnknownSymbol(format!("input #{}", i.0)));
        }
        if !refine_guards(m, i)?.contains(&g) {
            return Err(AnalysisError::Contract(format!(
                "{} is not a refined interval of `{}`",
                g,
                m.input_name(i)
            )));
        }
    }
    Ok(())
}

/// A non-integer timed sequence projecting to `w`: the `k`-th relative
/// delay is the left end of its interval plus `1/(|w|+1)`.
pub fn lift(m: &Tfsm, w: &[(InputId, TimedGuard)]) -> Result<TimedInputSeq, AnalysisError> {
    if !classify(m).half_open_only {
        return Err(AnalysisError::Unsupported(format!(
            "machine `{}` has point guards, which admit no non-integer sequence",
            m.name()
        )));
    }
    check_refined(m, w)?;
    let theta = TimeStamp::new(Ratio::new(1, w.len() as i64 + 1)).expect("positive");
    Ok(TimedInputSeq::from_relative(
        w.iter()
            .map(|&(i, g)| (i, TimeStamp::from_int(g.lo()) + theta)),
    ))
}

/// Exact integer timestamps for words over point intervals.
fn lift_points(w: &[(InputId, TimedGuard)]) -> TimedInputSeq {
    TimedInputSeq::from_relative(w.iter().map(|&(i, g)| (i, TimeStamp::from_int(g.lo()))))
}

pub fn derive_via_region(m: &Tfsm, goal: Goal) -> Result<Option<TimedInputSeq>, AnalysisError> {
    derive_via_region_with_stats(m, goal).map(|(s, _)| s)
}

/// Region FSM, then untimed derivation, then lifting. The lifted sequence
/// is re-checked against the timed semantics.
pub fn derive_via_region_with_stats(
    m: &Tfsm,
    goal: Goal,
) -> Result<(Option<TimedInputSeq>, SearchStats), AnalysisError> {
    let report = classify(m);
    if !report.deterministic {
        return Err(AnalysisError::Unsupported(format!(
            "machine `{}` is not deterministic",
            m.name()
        )));
    }
    if !report.weakly_complete {
        return Err(AnalysisError::Unsupported(format!(
            "machine `{}` is not weakly-complete",
            m.name()
        )));
    }
    let points = report.point_interval && !report.half_open_only;
    if goal == Goal::Hs && !report.half_open_only {
        return Err(AnalysisError::Unsupported(format!(
            "homing via the region FSM needs half-open guards only; `{}` has point guards",
            m.name()
        )));
    }
    if !report.half_open_only && !report.point_interval {
        return Err(AnalysisError::Unsupported(format!(
            "machine `{}` mixes guard kinds",
            m.name()
        )));
    }
    let region = build_region_fsm(m)?;
    let (word, stats) = fsm_derive_with_stats(&region.fsm, goal)?;
    let Some(word) = word else {
        return Ok((None, stats));
    };
    let abs = region.decode(&word);
    let alpha = if points {
        lift_points(&abs)
    } else {
        lift(m, &abs)?
    };
    let ok = match goal {
        Goal::Hs => is_homing(m, &alpha),
        Goal::Ss => is_synchronizing(m, &alpha),
    };
    if !ok {
        return Err(AnalysisError::Internal(format!(
            "lifted sequence {} fails the {goal} check",
            alpha.render(m.inputs())
        )));
    }
    Ok((Some(alpha), stats))
}
