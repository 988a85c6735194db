//! Machines whose guards are all single points `[u,u]`.
//!
//! Such machines only accept integer-timestamped sequences, and outputs of
//! different states can collide in time, so homing is decided over pending
//! outputs ("tails") rather than over states alone.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use crate::classify::classify;
use crate::error::AnalysisError;
use crate::guard::TimedGuard;
use crate::machine::{InputId, OutputId, Pfa, StateId, Tfsm, Transition};
use crate::search::{bfs, Label, SearchStats, Stop};
use crate::semantics::{induce_run, is_homing, TimedInputSeq};
use crate::time::TimeStamp;

/// Node budget of the point-interval searches unless `TFSM_NODE_BUDGET`
/// says otherwise.
pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

pub fn node_budget() -> usize {
    std::env::var("TFSM_NODE_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_NODE_BUDGET)
}

/// Result of a bounded exhaustive search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    /// The whole search space was explored without success.
    Absent,
    /// The search stopped at its limit; nothing is known.
    BudgetExhausted,
}

impl<T> SearchOutcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_conclusive(&self) -> bool {
        !matches!(self, SearchOutcome::BudgetExhausted)
    }
}

/// Pending outputs relative to the current time: a sorted multiset of
/// `(output, offset)`. Offset 0 means the output is due right now.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tail(Vec<(OutputId, i64)>);

impl Tail {
    pub fn new(mut entries: Vec<(OutputId, i64)>) -> Self {
        entries.sort_unstable();
        Tail(entries)
    }

    pub fn empty() -> Self {
        Tail::default()
    }

    pub fn entries(&self) -> &[(OutputId, i64)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn display<'a>(&'a self, m: &'a Tfsm) -> impl fmt::Display + 'a {
        DisplayTail(self, m)
    }
}

struct DisplayTail<'a>(&'a Tail, &'a Tfsm);

impl fmt::Display for DisplayTail<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<_> = self
            .0
             .0
            .iter()
            .map(|&(o, d)| format!("({},{d})", self.1.output_name(o)))
            .collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// A state together with its pending outputs.
pub type Config = (StateId, Tail);

/// Outputs released by one step, offsets relative to the step time.
pub type Emitted = Vec<(OutputId, i64)>;

fn require_point(m: &Tfsm) -> Result<(), AnalysisError> {
    let r = classify(m);
    if !r.deterministic {
        return Err(AnalysisError::Unsupported(format!(
            "machine `{}` is not deterministic",
            m.name()
        )));
    }
    if !r.point_interval {
        return Err(AnalysisError::Unsupported(format!(
            "machine `{}` has guards that are not single points",
            m.name()
        )));
    }
    Ok(())
}

fn enabled_at(m: &Tfsm, s: StateId, i: InputId, g: u64) -> Option<&Transition> {
    m.enabled(s, i, TimeStamp::from_int(g))
}

/// Applies `i` after `g` time units: pending outputs move `g` closer,
/// those now in the past are emitted, and the new output joins the tail.
pub fn tail_step(m: &Tfsm, cfg: &Config, i: InputId, g: u64) -> Option<(Config, Emitted)> {
    let t = enabled_at(m, cfg.0, i, g)?;
    let g = g as i64;
    let mut emitted = Vec::new();
    let mut rest = Vec::with_capacity(cfg.1.len() + 1);
    for &(o, d) in cfg.1.entries() {
        if d - g < 0 {
            emitted.push((o, d - g));
        } else {
            rest.push((o, d - g));
        }
    }
    rest.push((t.output, t.delay as i64));
    emitted.sort_unstable();
    Some(((t.dst, Tail::new(rest)), emitted))
}

/// Outputs of the run from `s` observed at or after the last input, rebased
/// to that time. `None` outside the domain or for non-integer timestamps.
pub fn tail_of(m: &Tfsm, s: StateId, alpha: &TimedInputSeq) -> Option<Tail> {
    let run = induce_run(m, s, alpha)?;
    let end = alpha.end_time();
    if !end.is_integer() {
        return None;
    }
    let end = end.numer();
    let mut entries = Vec::new();
    for step in &run.steps {
        if !step.out_time.is_integer() {
            return None;
        }
        let off = step.out_time.numer() - end;
        if off >= 0 {
            entries.push((step.output(), off));
        }
    }
    Some(Tail::new(entries))
}

/// Element of the pairwise abstraction: a pair of configurations with
/// distinct states that is still unresolved, or the resolved marker.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairState {
    Resolved,
    Live(Config, Config),
}

impl PairState {
    /// Orders the pair; equal states give [`PairState::Resolved`].
    pub fn new(a: Config, b: Config) -> Self {
        if a.0 == b.0 {
            PairState::Resolved
        } else if a <= b {
            PairState::Live(a, b)
        } else {
            PairState::Live(b, a)
        }
    }

    /// Both tails differ, so the full responses differ.
    fn distinguished(&self) -> bool {
        match self {
            PairState::Resolved => true,
            PairState::Live(a, b) => a.1 != b.1,
        }
    }
}

/// One step of the pairwise abstraction. `None` if either side has no
/// transition; resolved when the states merge or the outputs released now
/// differ.
pub fn delta(m: &Tfsm, p: &PairState, i: InputId, g: u64) -> Option<PairState> {
    let PairState::Live(a, b) = p else {
        return Some(PairState::Resolved);
    };
    let (a2, ea) = tail_step(m, a, i, g)?;
    let (b2, eb) = tail_step(m, b, i, g)?;
    if a2.0 == b2.0 || ea != eb {
        return Some(PairState::Resolved);
    }
    Some(PairState::new(a2, b2))
}

/// Distinct point values of the guards of each input, in input order.
fn point_edges(m: &Tfsm) -> Vec<(InputId, u64)> {
    m.input_ids()
        .flat_map(|i| m.guards_of(i).into_iter().map(move |g| (i, g.lo())))
        .collect()
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct PairwiseNode {
    pairs: Vec<PairState>,
    image: Vec<StateId>,
}

impl PairwiseNode {
    fn accepting(&self) -> bool {
        self.pairs.iter().all(PairState::distinguished)
    }

    fn step(&self, m: &Tfsm, i: InputId, g: u64) -> Option<PairwiseNode> {
        let mut image = Vec::with_capacity(self.image.len());
        for &s in &self.image {
            image.push(enabled_at(m, s, i, g)?.dst);
        }
        image.sort_unstable();
        image.dedup();
        let mut pairs = Vec::with_capacity(self.pairs.len());
        for p in &self.pairs {
            match delta(m, p, i, g)? {
                PairState::Resolved => {}
                live => pairs.push(live),
            }
        }
        pairs.sort();
        pairs.dedup();
        Some(PairwiseNode { pairs, image })
    }
}

/// Decides homing for a point-interval machine by breadth-first search over
/// sets of unresolved pairs, tracking the set of reachable states so that
/// the sequence stays defined from every start state. The witness is a
/// shortest homing sequence.
/// Parent index, edge from the parent, depth.
type TraceNode = (usize, Option<(InputId, u64)>, usize);

pub fn hs_exists_point(
    m: &Tfsm,
    budget: usize,
) -> Result<(SearchOutcome<TimedInputSeq>, SearchStats), AnalysisError> {
    require_point(m)?;
    let states: Vec<StateId> = m.state_ids().collect();
    let mut pairs = Vec::new();
    for (k, &a) in states.iter().enumerate() {
        for &b in &states[k + 1..] {
            pairs.push(PairState::new((a, Tail::empty()), (b, Tail::empty())));
        }
    }
    let root = PairwiseNode {
        pairs,
        image: states,
    };
    let edges = point_edges(m);
    let mut stats = SearchStats { nodes: 1, depth: 0 };
    let mut nodes: Vec<TraceNode> = vec![(0, None, 0)];
    let mut seen: HashSet<PairwiseNode> = HashSet::new();
    let mut queue: VecDeque<(usize, PairwiseNode)> = VecDeque::new();
    let found = |nodes: &[TraceNode], mut idx: usize| {
        let mut path = Vec::new();
        while let Some((i, g)) = nodes[idx].1 {
            path.push((i, TimeStamp::from_int(g)));
            idx = nodes[idx].0;
        }
        path.reverse();
        TimedInputSeq::from_relative(path)
    };
    let verify = |alpha: TimedInputSeq| {
        if is_homing(m, &alpha) {
            Ok(alpha)
        } else {
            Err(AnalysisError::Internal(format!(
                "pairwise witness {} is not homing",
                alpha.render(m.inputs())
            )))
        }
    };
    if root.accepting() {
        return Ok((SearchOutcome::Found(TimedInputSeq::empty()), stats));
    }
    seen.insert(root.clone());
    queue.push_back((0, root));
    while let Some((idx, node)) = queue.pop_front() {
        let depth = nodes[idx].2 + 1;
        for &(i, g) in &edges {
            let Some(child) = node.step(m, i, g) else {
                continue;
            };
            if seen.contains(&child) {
                continue;
            }
            if seen.len() >= budget {
                return Ok((SearchOutcome::BudgetExhausted, stats));
            }
            stats.nodes += 1;
            stats.depth = stats.depth.max(depth);
            nodes.push((idx, Some((i, g)), depth));
            let cidx = nodes.len() - 1;
            if child.accepting() {
                return Ok((SearchOutcome::Found(verify(found(&nodes, cidx))?), stats));
            }
            seen.insert(child.clone());
            queue.push_back((cidx, child));
        }
    }
    Ok((SearchOutcome::Absent, stats))
}

/// Blocks of configurations; configurations share a block while their
/// emitted outputs agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct ConfigBlocks(Vec<Vec<Config>>);

impl ConfigBlocks {
    fn new(blocks: impl IntoIterator<Item = Vec<Config>>) -> Self {
        let mut v: Vec<Vec<Config>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort();
                b.dedup();
                b
            })
            .filter(|b| !b.is_empty())
            .collect();
        v.sort();
        v.dedup();
        ConfigBlocks(v)
    }

    fn successor(&self, m: &Tfsm, i: InputId, g: u64) -> Option<ConfigBlocks> {
        let mut out = Vec::new();
        for block in &self.0 {
            let mut by_emitted: BTreeMap<Emitted, Vec<Config>> = BTreeMap::new();
            for cfg in block {
                let (next, emitted) = tail_step(m, cfg, i, g)?;
                by_emitted.entry(emitted).or_default().push(next);
            }
            out.extend(by_emitted.into_values());
        }
        Some(ConfigBlocks::new(out))
    }
}

impl Label for ConfigBlocks {
    /// Within every block, configurations with equal tails have equal
    /// states.
    fn resolved(&self) -> bool {
        self.0.iter().all(|b| {
            b.iter()
                .enumerate()
                .all(|(k, x)| b[k + 1..].iter().all(|y| x.0 == y.0 || x.1 != y.1))
        })
    }

    fn subsumed_by(&self, earlier: &Self) -> bool {
        earlier
            .0
            .iter()
            .filter(|b| b.len() > 1)
            .all(|b| self.0.binary_search(b).is_ok())
    }
}

/// Shortest homing sequence of a point-interval machine: a successor tree
/// over (state, tail) configurations for weakly-complete machines, the
/// pairwise search otherwise.
pub fn derive_hs_point(
    m: &Tfsm,
    budget: usize,
) -> Result<(SearchOutcome<TimedInputSeq>, SearchStats), AnalysisError> {
    require_point(m)?;
    if !classify(m).weakly_complete {
        return hs_exists_point(m, budget);
    }
    let root = ConfigBlocks::new([m.state_ids().map(|s| (s, Tail::empty())).collect()]);
    let edges = point_edges(m);
    let (r, stats) = bfs(root, usize::MAX, budget, |l| {
        edges
            .iter()
            .map(|&(i, g)| ((i, g), l.successor(m, i, g)))
            .collect()
    });
    let path = match r {
        Ok(p) => p,
        Err(Stop::Budget) => return Ok((SearchOutcome::BudgetExhausted, stats)),
        Err(_) => return Ok((SearchOutcome::Absent, stats)),
    };
    let alpha =
        TimedInputSeq::from_relative(path.into_iter().map(|(i, g)| (i, TimeStamp::from_int(g))));
    if !is_homing(m, &alpha) {
        return Err(AnalysisError::Internal(format!(
            "tail-tree result {} is not homing",
            alpha.render(m.inputs())
        )));
    }
    Ok((SearchOutcome::Found(alpha), stats))
}

/// The cyclic one-input machine with `n` states: delays 2 along the cycle
/// except 3 into the last state and 1 back to the first.
pub fn gen_bn(n: usize) -> Result<Tfsm, AnalysisError> {
    if n < 4 {
        return Err(AnalysisError::Contract(format!(
            "gen_bn needs n >= 4, got {n}"
        )));
    }
    let guard = TimedGuard::Point { at: 1 };
    let transitions = (0..n)
        .map(|k| Transition {
            src: StateId(k),
            input: InputId(0),
            guard,
            output: OutputId(0),
            delay: match k {
                _ if k + 1 == n => 1,
                _ if k + 2 == n => 3,
                _ => 2,
            },
            dst: StateId((k + 1) % n),
        })
        .collect();
    Ok(Tfsm::new(
        format!("B{n}"),
        (0..n).map(|k| format!("s{k}")).collect(),
        vec!["i1".into()],
        vec!["o1".into()],
        transitions,
    )?)
}

/// Encodes a partial automaton as a point-interval machine with one output,
/// guard `[1,1]` and delay 1 on every transition.
pub fn pfa_to_tfsm(a: &Pfa) -> Tfsm {
    let transitions = a
        .transitions()
        .map(|(q, l, r)| Transition {
            src: q,
            input: l,
            guard: TimedGuard::Point { at: 1 },
            output: OutputId(0),
            delay: 1,
            dst: r,
        })
        .collect();
    Tfsm::new(
        a.name(),
        a.states().names().to_vec(),
        a.letters().names().to_vec(),
        vec!["o".into()],
        transitions,
    )
    .expect("automaton ids are valid")
}

/// `(a_1,1)(a_2,2)…(a_n,n)`
pub fn word_to_sequence(word: &[InputId]) -> TimedInputSeq {
    TimedInputSeq::from_relative(word.iter().map(|&l| (l, TimeStamp::from_int(1))))
}

/// Shortest word that takes every state to one state, using at each step
/// only letters defined on all current states. `BudgetExhausted` if words
/// up to `max_len` do not settle the question.
pub fn careful_sync_brute(a: &Pfa, max_len: usize) -> SearchOutcome<Vec<InputId>> {
    let root: Vec<StateId> = (0..a.states().len()).map(StateId).collect();
    if root.len() <= 1 {
        return SearchOutcome::Found(Vec::new());
    }
    let letters: Vec<InputId> = (0..a.letters().len()).map(InputId).collect();
    let mut seen: HashSet<Vec<StateId>> = HashSet::from([root.clone()]);
    let mut frontier = vec![(root, Vec::new())];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (set, word) in &frontier {
            for &l in &letters {
                let Some(mut img) = set
                    .iter()
                    .map(|&q| a.step(q, l))
                    .collect::<Option<Vec<_>>>()
                else {
                    continue;
                };
                img.sort_unstable();
                img.dedup();
                let mut w: Vec<InputId> = word.clone();
                w.push(l);
                if img.len() == 1 {
                    return SearchOutcome::Found(w);
                }
                if seen.insert(img.clone()) {
                    next.push((img, w));
                }
            }
        }
        if next.is_empty() {
            return SearchOutcome::Absent;
        }
        frontier = next;
    }
    SearchOutcome::BudgetExhausted
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::fsm_analysis::{fsm_check, Goal};
    use crate::region::build_region_fsm;

    fn o1(d: i64) -> (OutputId, i64) {
        (OutputId(0), d)
    }

    fn tail(ds: &[i64]) -> Tail {
        Tail::new(ds.iter().map(|&d| o1(d)).collect())
    }

    fn st(m: &Tfsm, s: &str) -> StateId {
        m.state(s).unwrap()
    }

    #[test]
    fn tail_step_examples() {
        let m = corpus::b4();
        let (next, emitted) = tail_step(&m, &(st(&m, "s2"), tail(&[0, 1])), InputId(0), 1).unwrap();
        assert_eq!(next, (st(&m, "s3"), tail(&[0, 3])));
        assert_eq!(emitted, vec![o1(-1)]);
        let (next, emitted) = tail_step(&m, &(st(&m, "s0"), Tail::empty()), InputId(0), 1).unwrap();
        assert_eq!(next, (st(&m, "s1"), tail(&[2])));
        assert!(emitted.is_empty());
        assert!(tail_step(&m, &(st(&m, "s0"), Tail::empty()), InputId(0), 2).is_none());
    }

    #[test]
    fn tails_of_runs() {
        let m = corpus::b4();
        let s0 = st(&m, "s0");
        let seq = |t: &str| TimedInputSeq::parse(m.inputs(), t).unwrap();
        assert_eq!(
            tail_of(&m, s0, &seq("i1@1,i1@2,i1@3,i1@4")).unwrap(),
            tail(&[0, 1, 2])
        );
        assert_eq!(
            tail_of(&m, s0, &TimedInputSeq::empty()).unwrap(),
            Tail::empty()
        );
        assert_eq!(tail_of(&m, s0, &seq("i1@1")).unwrap(), tail(&[2]));
        assert_eq!(tail_of(&m, s0, &seq("i1@3/2")), None);
    }

    #[test]
    fn delta_trace_of_b4() {
        let m = corpus::b4();
        let i = InputId(0);
        let w0 = PairState::new((st(&m, "s0"), Tail::empty()), (st(&m, "s3"), Tail::empty()));
        let w1 = delta(&m, &w0, i, 1).unwrap();
        assert_eq!(
            w1,
            PairState::new((st(&m, "s1"), tail(&[2])), (st(&m, "s0"), tail(&[1])))
        );
        let w2 = delta(&m, &w1, i, 1).unwrap();
        assert_eq!(
            w2,
            PairState::new((st(&m, "s2"), tail(&[1, 2])), (st(&m, "s1"), tail(&[0, 2])))
        );
        assert_eq!(delta(&m, &w2, i, 1), Some(PairState::Resolved));
        assert_eq!(
            delta(&m, &PairState::Resolved, i, 1),
            Some(PairState::Resolved)
        );
        assert_eq!(delta(&m, &w0, i, 3), None);
    }

    #[test]
    fn b_family_cannot_be_homed() {
        let b4 = corpus::b4();
        assert_eq!(gen_bn(4).unwrap().transitions(), b4.transitions());
        for n in [4, 6] {
            let m = gen_bn(n).unwrap();
            assert_eq!(
                hs_exists_point(&m, DEFAULT_NODE_BUDGET).unwrap().0,
                SearchOutcome::Absent
            );
        }
        assert_eq!(
            derive_hs_point(&b4, DEFAULT_NODE_BUDGET).unwrap().0,
            SearchOutcome::Absent
        );
        let r = build_region_fsm(&b4).unwrap();
        assert!(fsm_check(r.fsm(), Goal::Hs, &[InputId(0), InputId(0)]).unwrap());
        assert!(!is_homing(
            &b4,
            &TimedInputSeq::parse(b4.inputs(), "i1@1,i1@2").unwrap()
        ));
    }

    #[test]
    fn gen_bn_shape() {
        let m = gen_bn(5).unwrap();
        assert_eq!(m.states().len(), 5);
        let delays: Vec<u64> = m.transitions().iter().map(|t| t.delay).collect();
        assert_eq!(delays, vec![2, 2, 2, 3, 1]);
        assert!(gen_bn(3).is_err());
    }

    fn reset_pfa() -> Pfa {
        Pfa::from_names(
            "reset",
            ["q0", "q1"],
            ["a"],
            &[("q0", "a", "q0"), ("q1", "a", "q0")],
        )
        .unwrap()
    }

    #[test]
    fn reset_letter_homes_the_encoding() {
        let p = reset_pfa();
        let m = pfa_to_tfsm(&p);
        let a = TimedInputSeq::parse(m.inputs(), "a@1").unwrap();
        assert_eq!(
            hs_exists_point(&m, DEFAULT_NODE_BUDGET).unwrap().0,
            SearchOutcome::Found(a.clone())
        );
        assert_eq!(
            derive_hs_point(&m, DEFAULT_NODE_BUDGET).unwrap().0,
            SearchOutcome::Found(a)
        );
        assert_eq!(
            careful_sync_brute(&p, 4),
            SearchOutcome::Found(vec![InputId(0)])
        );
    }

    #[test]
    fn two_orbits_never_synchronize() {
        let p = Pfa::from_names(
            "orbits",
            ["a0", "a1", "b0", "b1"],
            ["x", "y"],
            &[
                ("a0", "x", "a1"),
                ("a1", "x", "a0"),
                ("b0", "x", "b1"),
                ("b1", "x", "b0"),
                ("a0", "y", "a0"),
                ("a1", "y", "a1"),
                ("b0", "y", "b0"),
                ("b1", "y", "b1"),
            ],
        )
        .unwrap();
        assert_eq!(careful_sync_brute(&p, 8), SearchOutcome::Absent);
        assert_eq!(
            hs_exists_point(&pfa_to_tfsm(&p), DEFAULT_NODE_BUDGET)
                .unwrap()
                .0,
            SearchOutcome::Absent
        );
    }

    #[test]
    fn partial_letters_must_be_defined_everywhere() {
        // `b` merges everything but is undefined at q2; `a` moves q2 away first
        let p = Pfa::from_names(
            "careful",
            ["q0", "q1", "q2"],
            ["a", "b"],
            &[
                ("q0", "a", "q0"),
                ("q1", "a", "q1"),
                ("q2", "a", "q1"),
                ("q0", "b", "q0"),
                ("q1", "b", "q0"),
            ],
        )
        .unwrap();
        let w = careful_sync_brute(&p, 5).found().unwrap();
        assert_eq!(w, vec![InputId(0), InputId(1)]);
        let m = pfa_to_tfsm(&p);
        let alpha = word_to_sequence(&w);
        assert!(is_homing(&m, &alpha));
        let (found, _) = derive_hs_point(&m, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(found.found().unwrap().len(), 2);
    }

    #[test]
    fn trivial_machines() {
        let one = Pfa::from_names("one", ["q"], Vec::<&str>::new(), &[]).unwrap();
        assert_eq!(careful_sync_brute(&one, 3), SearchOutcome::Found(vec![]));
        let m = pfa_to_tfsm(&one);
        assert_eq!(
            hs_exists_point(&m, 10).unwrap().0,
            SearchOutcome::Found(TimedInputSeq::empty())
        );
        assert_eq!(
            derive_hs_point(&m, 10).unwrap().0,
            SearchOutcome::Found(TimedInputSeq::empty())
        );
    }

    #[test]
    fn half_open_machines_are_rejected() {
        assert!(matches!(
            hs_exists_point(&corpus::s1(), 10),
            Err(AnalysisError::Unsupported(_))
        ));
    }

    #[test]
    fn budget_is_reported() {
        let m = gen_bn(8).unwrap();
        assert_eq!(
            hs_exists_point(&m, 2).unwrap().0,
            SearchOutcome::BudgetExhausted
        );
    }
}
