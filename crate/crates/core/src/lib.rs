//! Timed finite state machines with output delays.
//!
//! The crate executes the concurrent-output semantics of such machines with
//! exact rational time, and derives or checks homing and synchronizing
//! sequences in three ways: a truncated successor tree over timed inputs,
//! an untimed region abstraction, and a tail-based abstraction for machines
//! whose guards are single points.

pub mod classify;
pub mod corpus;
pub mod error;
pub mod format;
pub mod fsm_analysis;
pub mod guard;
pub mod machine;
pub mod oracle;
pub mod point;
pub mod random;
pub mod region;
mod search;
pub mod semantics;
pub mod time;
pub mod tree;

pub use classify::{classify, fsm_classify, ClassReport, FsmReport};
pub use error::{AnalysisError, ModelError, ParseTimeError};
pub use fsm_analysis::{fsm_check, fsm_derive, Goal};
pub use guard::{GuardUnion, TimedGuard};
pub use machine::{Fsm, FsmTransition, InputId, OutputId, Pfa, StateId, Tfsm, Transition};
pub use oracle::brute_force_derive;
pub use point::{
    careful_sync_brute, delta, derive_hs_point, gen_bn, hs_exists_point, pfa_to_tfsm, tail_of,
    tail_step, PairState, SearchOutcome, Tail,
};
pub use region::{
    build_region_fsm, derive_via_region, lift, project, refine_guards, AbstractWord, RegionFsm,
};
pub use search::{Blocks, SearchStats};
pub use semantics::{TimedInputSeq, TimedOutputWord};
pub use time::{Rational, TimeStamp};
pub use tree::{block_successor, derive_shortest, TreeConfig};
