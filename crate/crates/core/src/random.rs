//! Random machines and sequences for property tests.

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::guard::TimedGuard;
use crate::machine::{Fsm, FsmTransition, InputId, OutputId, Pfa, StateId, Tfsm, Transition};
use crate::semantics::TimedInputSeq;
use crate::time::TimeStamp;

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_states: usize,
    pub max_inputs: usize,
    pub max_outputs: usize,
    /// Guard boundaries lie in `0..=max_bound`.
    pub max_bound: u64,
    pub max_delay: u64,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            max_states: 4,
            max_inputs: 2,
            max_outputs: 2,
            max_bound: 4,
            max_delay: 4,
        }
    }
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|k| format!("{prefix}{k}")).collect()
}

/// Machine sizes; the delay cap is also drawn per machine so that small
/// label alphabets, which make homing harder, are common.
fn sizes<R: Rng>(rng: &mut R, shape: &mut Shape, min_states: usize) -> (usize, usize, usize) {
    shape.max_delay = rng.gen_range(1..=shape.max_delay.max(1));
    (
        rng.gen_range(min_states..=shape.max_states.max(min_states)),
        rng.gen_range(1..=shape.max_inputs.max(1)),
        rng.gen_range(1..=shape.max_outputs.max(1)),
    )
}

fn build(n: usize, ni: usize, no: usize, transitions: Vec<Transition>, name: &str) -> Tfsm {
    Tfsm::new(
        name,
        names("s", n),
        names("i", ni),
        names("o", no),
        transitions,
    )
    .expect("generated ids are valid")
}

fn label<R: Rng>(rng: &mut R, n: usize, no: usize, shape: &Shape) -> (OutputId, u64, StateId) {
    (
        OutputId(rng.gen_range(0..no)),
        rng.gen_range(1..=shape.max_delay),
        StateId(rng.gen_range(0..n)),
    )
}

/// Deterministic weakly-complete machine with half-open guards. Each input
/// gets a domain made of unit-aligned pieces (possibly with gaps) and every
/// state covers it with its own random coarsening.
pub fn half_open_machine<R: Rng>(rng: &mut R, shape: &Shape) -> Tfsm {
    let mut local = *shape;
    let shape = &mut local;
    let (n, ni, no) = sizes(rng, shape, 2);
    let mut transitions = Vec::new();
    for i in 0..ni {
        let mut points: Vec<u64> = (0..=shape.max_bound)
            .filter(|_| rng.gen_bool(0.5))
            .collect();
        while points.len() < 2 {
            points.push(rng.gen_range(0..=shape.max_bound));
            points.sort_unstable();
            points.dedup();
        }
        let mut pieces: Vec<(u64, u64)> = points.windows(2).map(|w| (w[0], w[1])).collect();
        if pieces.len() > 1 && rng.gen_bool(0.2) {
            pieces.remove(rng.gen_range(0..pieces.len()));
        }
        for s in 0..n {
            let mut k = 0;
            while k < pieces.len() {
                let (lo, mut hi) = pieces[k];
                k += 1;
                while k < pieces.len() && pieces[k].0 == hi && rng.gen_bool(0.5) {
                    hi = pieces[k].1;
                    k += 1;
                }
                let (output, delay, dst) = label(rng, n, no, shape);
                transitions.push(Transition {
                    src: StateId(s),
                    input: InputId(i),
                    guard: TimedGuard::HalfOpen { lo, hi },
                    output,
                    delay,
                    dst,
                });
            }
        }
    }
    build(n, ni, no, transitions, "random")
}

/// Deterministic machine with point guards in `1..=max_bound`. Unless
/// `partial`, every state has the same point guards for each input.
pub fn point_machine<R: Rng>(rng: &mut R, shape: &Shape, partial: bool) -> Tfsm {
    let mut local = *shape;
    let shape = &mut local;
    let (n, ni, no) = sizes(rng, shape, 2);
    let mut transitions = Vec::new();
    for i in 0..ni {
        let mut pts: Vec<u64> = (1..=shape.max_bound.max(1))
            .filter(|_| rng.gen_bool(0.4))
            .collect();
        if pts.is_empty() {
            pts.push(rng.gen_range(1..=shape.max_bound.max(1)));
        }
        for s in 0..n {
            for &u in &pts {
                if partial && rng.gen_bool(0.25) {
                    continue;
                }
                let (output, delay, dst) = label(rng, n, no, shape);
                transitions.push(Transition {
                    src: StateId(s),
                    input: InputId(i),
                    guard: TimedGuard::Point { at: u },
                    output,
                    delay,
                    dst,
                });
            }
        }
    }
    build(n, ni, no, transitions, "random-point")
}

/// Partial deterministic automaton; each transition is present with
/// probability `density`.
pub fn pfa<R: Rng>(rng: &mut R, max_states: usize, max_letters: usize, density: f64) -> Pfa {
    let n = rng.gen_range(1..=max_states);
    let k = rng.gen_range(1..=max_letters);
    let mut ts = Vec::new();
    for q in 0..n {
        for a in 0..k {
            if rng.gen_bool(density) {
                ts.push((StateId(q), InputId(a), StateId(rng.gen_range(0..n))));
            }
        }
    }
    Pfa::new("random-pfa", names("q", n), names("a", k), &ts).expect("generated ids are valid")
}

/// Deterministic complete untimed machine.
pub fn complete_fsm<R: Rng>(
    rng: &mut R,
    max_states: usize,
    max_inputs: usize,
    max_outputs: usize,
) -> Fsm {
    let n = rng.gen_range(1..=max_states);
    let ni = rng.gen_range(1..=max_inputs);
    let no = rng.gen_range(1..=max_outputs);
    let mut ts = Vec::new();
    for s in 0..n {
        for i in 0..ni {
            ts.push(FsmTransition {
                src: StateId(s),
                input: InputId(i),
                output: OutputId(rng.gen_range(0..no)),
                dst: StateId(rng.gen_range(0..n)),
            });
        }
    }
    Fsm::new(
        "random-fsm",
        names("s", n),
        names("i", ni),
        names("o", no),
        ts,
    )
    .expect("generated ids are valid")
}

/// A value inside `g`: exact for points, otherwise `lo` plus a random
/// fraction with a small denominator.
pub fn delay_in<R: Rng>(rng: &mut R, g: TimedGuard) -> TimeStamp {
    match g {
        TimedGuard::Point { at } => TimeStamp::from_int(at),
        TimedGuard::HalfOpen { lo, hi } => {
            let den = rng.gen_range(1..=7i64);
            let num = rng.gen_range(0..(hi - lo) as i64 * den);
            TimeStamp::from_int(lo) + TimeStamp::new(Ratio::new(num, den)).expect("non-negative")
        }
    }
}

/// Random walk of `len` steps from `s`, choosing an enabled guard at each
/// step. Stops early at a state without transitions.
pub fn walk<R: Rng>(rng: &mut R, m: &Tfsm, s: StateId, len: usize) -> TimedInputSeq {
    let mut alpha = TimedInputSeq::empty();
    let mut cur = s;
    for _ in 0..len {
        let options: Vec<_> = m.transitions().iter().filter(|t| t.src == cur).collect();
        let Some(t) = options.choose(rng) else { break };
        let d = delay_in(rng, t.guard);
        alpha.push_relative(t.input, d);
        cur = m
            .enabled(cur, t.input, d)
            .expect("delay chosen inside the guard")
            .dst;
    }
    alpha
}
