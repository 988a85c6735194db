#![allow(dead_code)]

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tfsm::guard::TimedGuard;
use tfsm::machine::{InputId, Tfsm};
use tfsm::random::{delay_in, Shape};
use tfsm::semantics::{is_non_integer, TimedInputSeq};
use tfsm::time::TimeStamp;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn shape() -> Shape {
    Shape::default()
}

/// Guards of `i` at the first state; on weakly-complete machines every
/// state has the same domain.
pub fn domain(m: &Tfsm, i: InputId) -> Vec<TimedGuard> {
    m.transitions()
        .iter()
        .filter(|t| t.input == i && t.src.0 == 0)
        .map(|t| t.guard)
        .collect()
}

/// Random relative step inside the domain of a weakly-complete machine.
pub fn random_step<R: Rng>(rng: &mut R, m: &Tfsm) -> Option<(InputId, TimeStamp)> {
    let i = InputId(rng.gen_range(0..m.inputs().len()));
    let gs = domain(m, i);
    if gs.is_empty() {
        return None;
    }
    let g = gs[rng.gen_range(0..gs.len())];
    Some((i, delay_in(rng, g)))
}

/// Random sequence in the common domain of a weakly-complete machine.
pub fn random_seq<R: Rng>(rng: &mut R, m: &Tfsm, len: usize) -> TimedInputSeq {
    let mut a = TimedInputSeq::empty();
    for _ in 0..len {
        if let Some((i, d)) = random_step(rng, m) {
            a.push_relative(i, d);
        }
    }
    a
}

/// Appends up to `extra` steps with fresh fractional parts so that the
/// result stays non-integer; `None` if no such step was found.
pub fn non_integer_right<R: Rng>(
    rng: &mut R,
    m: &Tfsm,
    a: &TimedInputSeq,
    extra: usize,
) -> Option<TimedInputSeq> {
    let mut out = a.clone();
    for _ in 0..extra {
        let mut ok = false;
        for _ in 0..50 {
            let (i, _) = random_step(rng, m)?;
            let gs = domain(m, i);
            let g = gs[rng.gen_range(0..gs.len())];
            let den = 97i64;
            let frac = Ratio::new(rng.gen_range(1..den), den);
            let base = rng.gen_range(g.lo()..g.hi().max(g.lo() + 1));
            let d = TimeStamp::new(Ratio::from_integer(base as i64) + frac).unwrap();
            if !g.contains(d) {
                continue;
            }
            let mut cand = out.clone();
            cand.push_relative(i, d);
            if is_non_integer(&cand) {
                out = cand;
                ok = true;
                break;
            }
        }
        if !ok {
            return None;
        }
    }
    Some(out)
}

/// Prepends `extra` random steps while keeping the sequence non-integer.
pub fn non_integer_left<R: Rng>(
    rng: &mut R,
    m: &Tfsm,
    a: &TimedInputSeq,
    extra: usize,
) -> Option<TimedInputSeq> {
    for _ in 0..50 {
        let prefix = non_integer_right(rng, m, &TimedInputSeq::empty(), extra)?;
        let cand =
            TimedInputSeq::from_relative(prefix.relative().chain(a.relative()).collect::<Vec<_>>());
        if is_non_integer(&cand) {
            return Some(cand);
        }
    }
    None
}
