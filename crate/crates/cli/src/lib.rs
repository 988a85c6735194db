//! Command-line front end: argument handling, JSON results and DOT output.
//!
//! Exit codes: 0 success, 1 the queried sequence does not exist (or the
//! checked one fails), 2 usage or parse error, 3 unsupported machine class,
//! 4 search budget exhausted, 5 internal error.

pub mod dot;

use std::fs;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tfsm::format::{self, Machine};
use tfsm::point::{node_budget, SearchOutcome};
use tfsm::semantics::{induce_run, is_homing, is_synchronizing};
use tfsm::{
    build_region_fsm, classify, fsm_classify, AnalysisError, Goal, SearchStats, Tfsm, TimeStamp,
    TimedInputSeq,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ABSENT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "tfsm",
    version,
    about = "Homing and synchronizing sequences for timed FSMs with output delays"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a machine.
    Analyze {
        file: String,
        /// Emit the machine as DOT instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// Derive a shortest homing or synchronizing sequence.
    Derive {
        #[arg(long, value_enum)]
        goal: GoalArg,
        #[arg(long, value_enum, default_value = "tree")]
        method: Method,
        file: String,
    },
    /// Check a timed input sequence against the timed semantics.
    Check {
        #[arg(long, value_enum)]
        goal: GoalArg,
        #[arg(long)]
        seq: String,
        file: String,
    },
    /// Run a timed input sequence from one state.
    Simulate {
        #[arg(long)]
        from: String,
        #[arg(long)]
        seq: String,
        file: String,
    },
    /// Build the region FSM.
    Region {
        file: String,
        #[arg(long)]
        dot: bool,
    },
    /// Print the cyclic point-interval machine with N states.
    GenBn { n: usize },
    /// Exhaustive search over a discretized grid up to a length bound.
    Oracle {
        #[arg(long, value_enum)]
        goal: GoalArg,
        #[arg(long)]
        max_len: usize,
        file: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GoalArg {
    Hs,
    Ss,
}

impl From<GoalArg> for Goal {
    fn from(g: GoalArg) -> Goal {
        match g {
            GoalArg::Hs => Goal::Hs,
            GoalArg::Ss => Goal::Ss,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Tree,
    Region,
    Point,
}

/// What a command produced: exit code plus the text for each stream.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(code: i32, stdout: String) -> Self {
        Output {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, msg: impl std::fmt::Display) -> Self {
        Output {
            code,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

#[derive(Serialize, Debug, PartialEq, Eq)]
pub struct TimedInput {
    pub input: String,
    pub t: String,
}

#[derive(Serialize, Debug, PartialEq, Eq)]
pub struct Stats {
    pub nodes: usize,
    pub depth: usize,
}

/// Result object of `derive`, `check` and `oracle`. `exists` is null when
/// a search ran out of budget.
#[derive(Serialize, Debug, PartialEq, Eq)]
pub struct QueryResult {
    pub query: String,
    pub machine: String,
    pub exists: Option<bool>,
    pub sequence: Vec<TimedInput>,
    pub verified: bool,
    pub stats: Stats,
}

#[derive(Serialize)]
struct AnalyzeTimed {
    query: &'static str,
    machine: String,
    kind: &'static str,
    states: usize,
    inputs: usize,
    outputs: usize,
    transitions: usize,
    deterministic: bool,
    weakly_complete: bool,
    strongly_complete: bool,
    point_interval: bool,
    half_open_only: bool,
    bounds: Vec<InputBounds>,
}

#[derive(Serialize)]
struct InputBounds {
    input: String,
    lo: u64,
    hi: u64,
}

#[derive(Serialize)]
struct AnalyzeFsm {
    query: &'static str,
    machine: String,
    kind: &'static str,
    states: usize,
    inputs: usize,
    outputs: usize,
    transitions: usize,
    deterministic: bool,
    observable: bool,
    complete: bool,
}

#[derive(Serialize)]
struct AnalyzePfa {
    query: &'static str,
    machine: String,
    kind: &'static str,
    states: usize,
    letters: usize,
    transitions: usize,
}

#[derive(Serialize)]
struct Simulation {
    query: &'static str,
    machine: String,
    from: String,
    sequence: Vec<TimedInput>,
    defined: bool,
    states: Vec<String>,
    outputs: Vec<OutputGroup>,
}

#[derive(Serialize)]
struct OutputGroup {
    t: String,
    outputs: Vec<String>,
}

#[derive(Serialize)]
struct RegionJson {
    query: &'static str,
    machine: String,
    states: Vec<String>,
    inputs: Vec<String>,
    outputs: Vec<String>,
    transitions: Vec<RegionEdge>,
}

#[derive(Serialize)]
struct RegionEdge {
    src: String,
    input: String,
    output: String,
    dst: String,
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

fn sequence_json(m: &Tfsm, a: &TimedInputSeq) -> Vec<TimedInput> {
    a.items()
        .iter()
        .map(|&(i, t)| TimedInput {
            input: m.input_name(i).to_string(),
            t: t.to_string(),
        })
        .collect()
}

fn error_code(e: &AnalysisError) -> i32 {
    match e {
        AnalysisError::Unsupported(_) => EXIT_UNSUPPORTED,
        AnalysisError::Contract(_) | AnalysisError::UnknownSymbol(_) | AnalysisError::Model(_) => {
            EXIT_USAGE
        }
        AnalysisError::Internal(_) => EXIT_INTERNAL,
    }
}

fn from_error(e: AnalysisError) -> Output {
    Output::fail(error_code(&e), e)
}

fn load(path: &str) -> Result<Machine, Output> {
    let text =
        fs::read_to_string(path).map_err(|e| Output::fail(EXIT_USAGE, format!("{path}: {e}")))?;
    format::parse(&text).map_err(|e| Output::fail(EXIT_USAGE, format!("{path}:{e}")))
}

fn load_tfsm(path: &str, what: &str) -> Result<Tfsm, Output> {
    match load(path)? {
        Machine::Tfsm(m) => Ok(m),
        other => Err(Output::fail(
            EXIT_UNSUPPORTED,
            format!(
                "{what} needs a tfsm machine; `{}` is a {}",
                other.name(),
                other.kind()
            ),
        )),
    }
}

fn holds(m: &Tfsm, goal: Goal, a: &TimedInputSeq) -> bool {
    match goal {
        Goal::Hs => is_homing(m, a),
        Goal::Ss => is_synchronizing(m, a),
    }
}

fn query_output(
    query: String,
    m: &Tfsm,
    goal: Goal,
    outcome: SearchOutcome<TimedInputSeq>,
    stats: SearchStats,
) -> Output {
    let (exists, sequence, verified) = match &outcome {
        SearchOutcome::Found(a) => (Some(true), sequence_json(m, a), holds(m, goal, a)),
        SearchOutcome::Absent => (Some(false), Vec::new(), false),
        SearchOutcome::BudgetExhausted => (None, Vec::new(), false),
    };
    let result = QueryResult {
        query,
        machine: m.name().to_string(),
        exists,
        sequence,
        verified,
        stats: Stats {
            nodes: stats.nodes,
            depth: stats.depth,
        },
    };
    let mut out = Output::ok(EXIT_OK, to_json(&result));
    match outcome {
        SearchOutcome::Found(_) if !verified => {
            out.code = EXIT_INTERNAL;
            out.stderr = "error: derived sequence failed re-verification\n".into();
        }
        SearchOutcome::Found(_) => {}
        SearchOutcome::Absent => out.code = EXIT_ABSENT,
        SearchOutcome::BudgetExhausted => {
            out.code = EXIT_BUDGET;
            out.stderr = format!(
                "warning: node budget of {} exhausted; result unknown\n",
                node_budget()
            );
        }
    }
    out
}

fn outcome_of(r: Option<TimedInputSeq>) -> SearchOutcome<TimedInputSeq> {
    match r {
        Some(a) => SearchOutcome::Found(a),
        None => SearchOutcome::Absent,
    }
}

fn analyze(file: &str, dot_out: bool) -> Output {
    let machine = match load(file) {
        Ok(m) => m,
        Err(o) => return o,
    };
    if dot_out {
        return match &machine {
            Machine::Tfsm(m) => Output::ok(EXIT_OK, dot::tfsm_dot(m)),
            Machine::Fsm(m) => Output::ok(EXIT_OK, dot::fsm_dot(m)),
            Machine::Pfa(_) => {
                Output::fail(EXIT_UNSUPPORTED, "DOT export covers tfsm and fsm machines")
            }
        };
    }
    let json = match &machine {
        Machine::Tfsm(m) => {
            let r = classify(m);
            to_json(&AnalyzeTimed {
                query: "analyze",
                machine: m.name().to_string(),
                kind: "tfsm",
                states: m.states().len(),
                inputs: m.inputs().len(),
                outputs: m.outputs().len(),
                transitions: m.transitions().len(),
                deterministic: r.deterministic,
                weakly_complete: r.weakly_complete,
                strongly_complete: r.strongly_complete,
                point_interval: r.point_interval,
                half_open_only: r.half_open_only,
                bounds: r
                    .per_input_bounds
                    .iter()
                    .map(|(&i, &(lo, hi))| InputBounds {
                        input: m.input_name(i).to_string(),
                        lo,
                        hi,
                    })
                    .collect(),
            })
        }
        Machine::Fsm(m) => {
            let r = fsm_classify(m);
            to_json(&AnalyzeFsm {
                query: "analyze",
                machine: m.name().to_string(),
                kind: "fsm",
                states: m.states().len(),
                inputs: m.inputs().len(),
                outputs: m.outputs().len(),
                transitions: m.transitions().len(),
                deterministic: r.deterministic,
                observable: r.observable,
                complete: r.complete,
            })
        }
        Machine::Pfa(a) => to_json(&AnalyzePfa {
            query: "analyze",
            machine: a.name().to_string(),
            kind: "pfa",
            states: a.states().len(),
            letters: a.letters().len(),
            transitions: a.transitions().count(),
        }),
    };
    Output::ok(EXIT_OK, json)
}

fn derive(goal: Goal, method: Method, file: &str) -> Output {
    let m = match load_tfsm(file, "derive") {
        Ok(m) => m,
        Err(o) => return o,
    };
    let (name, result) = match method {
        Method::Tree => ("tree", tfsm::tree::derive_shortest_with_stats(&m, goal).map(|(r, s)| (outcome_of(r), s))),
        Method::Region => ("region", tfsm::region::derive_via_region_with_stats(&m, goal).map(|(r, s)| (outcome_of(r), s))),
        Method::Point => match goal {
            Goal::Hs => ("point", tfsm::derive_hs_point(&m, node_budget())),
            Goal::Ss => {
                return Output::fail(
                    EXIT_UNSUPPORTED,
                    "the point method derives homing sequences only; use --method region for synchronizing sequences",
                )
            }
        },
    };
    match result {
        Ok((outcome, stats)) => {
            query_output(format!("derive {goal} {name}"), &m, goal, outcome, stats)
        }
        Err(e) => from_error(e),
    }
}

fn check(goal: Goal, seq: &str, file: &str) -> Output {
    let m = match load_tfsm(file, "check") {
        Ok(m) => m,
        Err(o) => return o,
    };
    let a = match TimedInputSeq::parse(m.inputs(), seq) {
        Ok(a) => a,
        Err(e) => return Output::fail(EXIT_USAGE, e),
    };
    let verified = holds(&m, goal, &a);
    let result = QueryResult {
        query: format!("check {goal}"),
        machine: m.name().to_string(),
        exists: Some(verified),
        sequence: sequence_json(&m, &a),
        verified,
        stats: Stats {
            nodes: 0,
            depth: a.len(),
        },
    };
    Output::ok(
        if verified { EXIT_OK } else { EXIT_ABSENT },
        to_json(&result),
    )
}

fn simulate(from: &str, seq: &str, file: &str) -> Output {
    let m = match load_tfsm(file, "simulate") {
        Ok(m) => m,
        Err(o) => return o,
    };
    let Some(s) = m.state(from) else {
        return Output::fail(EXIT_USAGE, AnalysisError::UnknownSymbol(from.to_string()));
    };
    let a = match TimedInputSeq::parse(m.inputs(), seq) {
        Ok(a) => a,
        Err(e) => return Output::fail(EXIT_USAGE, e),
    };
    let run = induce_run(&m, s, &a);
    let mut sim = Simulation {
        query: "simulate",
        machine: m.name().to_string(),
        from: from.to_string(),
        sequence: sequence_json(&m, &a),
        defined: run.is_some(),
        states: vec![from.to_string()],
        outputs: Vec::new(),
    };
    if let Some(run) = &run {
        sim.states.extend(
            run.steps
                .iter()
                .map(|st| m.state_name(st.state()).to_string()),
        );
        sim.outputs = run
            .output_word()
            .groups()
            .iter()
            .map(|(t, os): &(TimeStamp, Vec<_>)| OutputGroup {
                t: t.to_string(),
                outputs: os.iter().map(|&o| m.output_name(o).to_string()).collect(),
            })
            .collect();
    }
    Output::ok(
        if run.is_some() { EXIT_OK } else { EXIT_ABSENT },
        to_json(&sim),
    )
}

fn region(file: &str, dot_out: bool) -> Output {
    let m = match load_tfsm(file, "region") {
        Ok(m) => m,
        Err(o) => return o,
    };
    let r = match build_region_fsm(&m) {
        Ok(r) => r,
        Err(e) => return from_error(e),
    };
    if dot_out {
        return Output::ok(EXIT_OK, dot::region_dot(&r));
    }
    let f = r.fsm();
    let names = |a: &tfsm::machine::Alphabet| a.names().to_vec();
    let json = RegionJson {
        query: "region",
        machine: f.name().to_string(),
        states: names(f.states()),
        inputs: names(f.inputs()),
        outputs: names(f.outputs()),
        transitions: f
            .transitions()
            .iter()
            .map(|t| RegionEdge {
                src: f.states().name(t.src.0).to_string(),
                input: f.inputs().name(t.input.0).to_string(),
                output: f.outputs().name(t.output.0).to_string(),
                dst: f.states().name(t.dst.0).to_string(),
            })
            .collect(),
    };
    Output::ok(EXIT_OK, to_json(&json))
}

fn gen_bn(n: usize) -> Output {
    match tfsm::gen_bn(n) {
        Ok(m) => Output::ok(EXIT_OK, format::serialize(&Machine::Tfsm(m))),
        Err(e) => from_error(e),
    }
}

fn oracle(goal: Goal, max_len: usize, file: &str) -> Output {
    let m = match load_tfsm(file, "oracle") {
        Ok(m) => m,
        Err(o) => return o,
    };
    let (r, stats) = tfsm::oracle::brute_force_with_stats(&m, goal, max_len);
    query_output(
        format!("oracle {goal} {max_len}"),
        &m,
        goal,
        outcome_of(r),
        stats,
    )
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run_command<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Output::ok(EXIT_OK, text)
            };
        }
    };
    match cli.command {
        Command::Analyze { file, dot } => analyze(&file, dot),
        Command::Derive { goal, method, file } => derive(goal.into(), method, &file),
        Command::Check { goal, seq, file } => check(goal.into(), &seq, &file),
        Command::Simulate { from, seq, file } => simulate(&from, &seq, &file),
        Command::Region { file, dot } => region(&file, dot),
        Command::GenBn { n } => gen_bn(n),
        Command::Oracle {
            goal,
            max_len,
            file,
        } => oracle(goal.into(), max_len, &file),
    }
}
