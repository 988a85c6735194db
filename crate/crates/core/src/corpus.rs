//! Reference machines bundled with the crate.

use crate::format::{parse, parse_tfsm, Machine};
use crate::machine::{Fsm, Tfsm};

pub const S1: &str = include_str!("../corpus/S1.tfsm");
pub const S2: &str = include_str!("../corpus/S2.tfsm");
pub const S3: &str = include_str!("../corpus/S3.tfsm");
pub const S4: &str = include_str!("../corpus/S4.tfsm");
pub const B4: &str = include_str!("../corpus/B4.tfsm");
pub const M1: &str = include_str!("../corpus/M1.fsm");
pub const M3: &str = include_str!("../corpus/M3.fsm");

/// `(file name, text)` for every bundled machine.
pub const ALL: [(&str, &str); 7] = [
    ("S1.tfsm", S1),
    ("S2.tfsm", S2),
    ("S3.tfsm", S3),
    ("S4.tfsm", S4),
    ("B4.tfsm", B4),
    ("M1.fsm", M1),
    ("M3.fsm", M3),
];

fn tfsm(text: &str) -> Tfsm {
    parse_tfsm(text).expect("bundled machine parses")
}

fn fsm(text: &str) -> Fsm {
    match parse(text).expect("bundled machine parses") {
        Machine::Fsm(m) => m,
        other => panic!("expected an fsm, got {}", other.kind()),
    }
}

pub fn s1() -> Tfsm {
    tfsm(S1)
}

pub fn s2() -> Tfsm {
    tfsm(S2)
}

pub fn s3() -> Tfsm {
    tfsm(S3)
}

pub fn s4() -> Tfsm {
    tfsm(S4)
}

pub fn b4() -> Tfsm {
    tfsm(B4)
}

pub fn m1() -> Fsm {
    fsm(M1)
}

pub fn m3() -> Fsm {
    fsm(M3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::serialize;

    #[test]
    fn every_corpus_machine_round_trips() {
        for (name, text) in ALL {
            let m = parse(text).unwrap();
            let again = parse(&serialize(&m)).unwrap();
            assert_eq!(m, again, "{name}");
            assert_eq!(serialize(&again), serialize(&m), "{name}");
        }
    }

    #[test]
    fn s1_has_eleven_transitions() {
        assert_eq!(s1().transitions().len(), 11);
    }
}
