//! Exact execution semantics: runs, timed output responses and the
//! merging, synchronizing and homing predicates.
//!
//! Inputs carry absolute timestamps; guards are checked against the time
//! elapsed since the previous input (the first input is measured from 0).
//! An output produced at time `t` with delay `d` is observed at `t + d`.

use std::collections::HashMap;
use std::fmt;

use crate::error::AnalysisError;
use crate::machine::{Alphabet, InputId, OutputId, StateId, Tfsm, Transition};
use crate::time::TimeStamp;

/// A timed input sequence with non-decreasing absolute timestamps.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TimedInputSeq {
    items: Vec<(InputId, TimeStamp)>,
}

impl TimedInputSeq {
    pub fn empty() -> Self {
        TimedInputSeq::default()
    }

    pub fn new(items: Vec<(InputId, TimeStamp)>) -> Result<Self, AnalysisError> {
        if items.windows(2).any(|w| w[1].1 < w[0].1) {
            return Err(AnalysisError::Contract(
                "timestamps must be non-decreasing".into(),
            ));
        }
        Ok(TimedInputSeq { items })
    }

    /// Builds absolute timestamps from relative delays.
    pub fn from_relative(items: impl IntoIterator<Item = (InputId, TimeStamp)>) -> Self {
        let mut now = TimeStamp::ZERO;
        let items = items
            .into_iter()
            .map(|(i, d)| {
                now += d;
                (i, now)
            })
            .collect();
        TimedInputSeq { items }
    }

    pub fn items(&self) -> &[(InputId, TimeStamp)] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Timestamp of the last input, or 0.
    pub fn end_time(&self) -> TimeStamp {
        self.items.last().map_or(TimeStamp::ZERO, |&(_, t)| t)
    }

    pub fn inputs(&self) -> impl Iterator<Item = InputId> + '_ {
        self.items.iter().map(|&(i, _)| i)
    }

    /// `(input, t_k - t_{k-1})` with `t_0 = 0`.
    pub fn relative(&self) -> impl Iterator<Item = (InputId, TimeStamp)> + '_ {
        let mut prev = TimeStamp::ZERO;
        self.items.iter().map(move |&(i, t)| {
            let d = t.checked_sub(prev).expect("timestamps are non-decreasing");
            prev = t;
            (i, d)
        })
    }

    /// Appends an input `delay` after the current end.
    pub fn push_relative(&mut self, i: InputId, delay: TimeStamp) {
        let t = self.end_time() + delay;
        self.items.push((i, t));
    }

    /// Parses `i1@21/10,i2@4.2`; whitespace around items is ignored.
    pub fn parse(inputs: &Alphabet, text: &str) -> Result<Self, AnalysisError> {
        let mut items = Vec::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, t) = part.split_once('@').ok_or_else(|| {
                AnalysisError::Contract(format!("expected input@time, got `{part}`"))
            })?;
            let i = inputs
                .lookup(name.trim())
                .ok_or_else(|| AnalysisError::UnknownSymbol(name.trim().to_string()))?;
            let t: TimeStamp = t.parse().map_err(|e: crate::error::ParseTimeError| {
                AnalysisError::Contract(e.to_string())
            })?;
            items.push((InputId(i), t));
        }
        TimedInputSeq::new(items)
    }

    /// Renders as `i1@21/10,i2@21/5`.
    pub fn render(&self, inputs: &Alphabet) -> String {
        self.items
            .iter()
            .map(|&(i, t)| format!("{}@{}", inputs.name(i.0), t))
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl FromIterator<(InputId, TimeStamp)> for TimedInputSeq {
    /// Panics if timestamps decrease.
    fn from_iter<T: IntoIterator<Item = (InputId, TimeStamp)>>(iter: T) -> Self {
        TimedInputSeq::new(iter.into_iter().collect()).expect("non-decreasing timestamps")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub input: InputId,
    pub time: TimeStamp,
    pub transition: Transition,
    /// `time + delay`
    pub out_time: TimeStamp,
}

impl Step {
    pub fn state(&self) -> StateId {
        self.transition.dst
    }

    pub fn output(&self) -> OutputId {
        self.transition.output
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub start: StateId,
    pub steps: Vec<Step>,
}

impl Run {
    pub fn final_state(&self) -> StateId {
        self.steps.last().map_or(self.start, Step::state)
    }

    pub fn output_word(&self) -> TimedOutputWord {
        TimedOutputWord::from_outputs(self.steps.iter().map(|s| (s.out_time, s.output())))
    }
}

/// Outputs grouped by observation time. Outputs sharing a timestamp may be
/// observed in any order, so one grouping stands for the whole set of
/// admissible interleavings.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TimedOutputWord {
    groups: Vec<(TimeStamp, Vec<OutputId>)>,
}

impl TimedOutputWord {
    pub fn from_outputs(outputs: impl IntoIterator<Item = (TimeStamp, OutputId)>) -> Self {
        let mut all: Vec<_> = outputs.into_iter().collect();
        all.sort();
        let mut groups: Vec<(TimeStamp, Vec<OutputId>)> = Vec::new();
        for (t, o) in all {
            match groups.last_mut() {
                Some((gt, os)) if *gt == t => os.push(o),
                _ => groups.push((t, vec![o])),
            }
        }
        TimedOutputWord { groups }
    }

    pub fn groups(&self) -> &[(TimeStamp, Vec<OutputId>)] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.iter().map(|(_, os)| os.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Outputs observed strictly before `t`.
    pub fn before(&self, t: TimeStamp) -> TimedOutputWord {
        TimedOutputWord {
            groups: self
                .groups
                .iter()
                .filter(|(g, _)| *g < t)
                .cloned()
                .collect(),
        }
    }

    pub fn display<'a>(&'a self, outputs: &'a Alphabet) -> impl fmt::Display + 'a {
        DisplayWord {
            word: self,
            outputs,
        }
    }
}

struct DisplayWord<'a> {
    word: &'a TimedOutputWord,
    outputs: &'a Alphabet,
}

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, os) in &self.word.groups {
            let names: Vec<_> = os.iter().map(|o| self.outputs.name(o.0)).collect();
            write!(f, "({t},{{{}}})", names.join(","))?;
        }
        Ok(())
    }
}

/// Longest defined prefix of the run and whether it covers all of `α`.
fn run_prefix(m: &Tfsm, s: StateId, alpha: &TimedInputSeq) -> (Run, bool) {
    let mut run = Run {
        start: s,
        steps: Vec::with_capacity(alpha.len()),
    };
    let mut cur = s;
    let mut prev = TimeStamp::ZERO;
    for &(i, t) in alpha.items() {
        let Some(delta) = t.checked_sub(prev) else {
            return (run, false);
        };
        let Some(tr) = m.enabled(cur, i, delta) else {
            return (run, false);
        };
        run.steps.push(Step {
            input: i,
            time: t,
            transition: *tr,
            out_time: t + tr.delay,
        });
        cur = tr.dst;
        prev = t;
    }
    (run, true)
}

/// `None` stands for the undefined state.
pub fn next_state_seq(m: &Tfsm, s: StateId, alpha: &TimedInputSeq) -> Option<StateId> {
    induce_run(m, s, alpha).map(|r| r.final_state())
}

pub fn induce_run(m: &Tfsm, s: StateId, alpha: &TimedInputSeq) -> Option<Run> {
    match run_prefix(m, s, alpha) {
        (run, true) => Some(run),
        _ => None,
    }
}

pub fn timed_out(m: &Tfsm, s: StateId, alpha: &TimedInputSeq) -> Option<TimedOutputWord> {
    induce_run(m, s, alpha).map(|r| r.output_word())
}

/// No two timestamps differ by a natural number, zero included.
pub fn is_non_integer(alpha: &TimedInputSeq) -> bool {
    let ts: Vec<_> = alpha.items().iter().map(|&(_, t)| t.value()).collect();
    ts.iter()
        .enumerate()
        .all(|(a, x)| ts[a + 1..].iter().all(|y| !(y - x).is_integer()))
}

pub fn is_merging(m: &Tfsm, s: StateId, s2: StateId, alpha: &TimedInputSeq) -> bool {
    match (next_state_seq(m, s, alpha), next_state_seq(m, s2, alpha)) {
        (Some(a), Some(b)) => a == b,
        _ => false,
    }
}

pub fn is_synchronizing(m: &Tfsm, alpha: &TimedInputSeq) -> bool {
    let mut finals = m.state_ids().map(|s| next_state_seq(m, s, alpha));
    match finals.next() {
        Some(Some(first)) => finals.all(|f| f == Some(first)),
        _ => false,
    }
}

/// Equal responses imply equal final states. Any undefined start state
/// makes the sequence non-homing.
pub fn is_homing(m: &Tfsm, alpha: &TimedInputSeq) -> bool {
    let mut seen: HashMap<TimedOutputWord, StateId> = HashMap::new();
    for s in m.state_ids() {
        let Some(run) = induce_run(m, s, alpha) else {
            return false;
        };
        let fin = run.final_state();
        if let Some(&other) = seen.get(&run.output_word()) {
            if other != fin {
                return false;
            }
        } else {
            seen.insert(run.output_word(), fin);
        }
    }
    true
}

/// Both sequences take the same transitions from every state, failing at
/// the same step if they fail.
pub fn sequences_equivalent(
    m: &Tfsm,
    alpha: &TimedInputSeq,
    beta: &TimedInputSeq,
) -> Result<bool, AnalysisError> {
    if alpha.len() != beta.len() || !alpha.inputs().eq(beta.inputs()) {
        return Err(AnalysisError::Contract(
            "equivalence needs sequences over the same input word".into(),
        ));
    }
    Ok(m.state_ids().all(|s| {
        let (ra, fa) = run_prefix(m, s, alpha);
        let (rb, fb) = run_prefix(m, s, beta);
        fa == fb
            && ra.steps.len() == rb.steps.len()
            && ra
                .steps
                .iter()
                .zip(&rb.steps)
                .all(|(x, y)| x.transition == y.transition)
    }))
}
