//! Machine data model: timed FSMs with output delays, untimed FSMs and
//! partial automata.
//!
//! Identifiers are dense indices in declaration order. All iteration and
//! tie-breaking in the crate follows that order.

use std::collections::HashMap;
use std::fmt;

use crate::error::ModelError;
use crate::guard::TimedGuard;
use crate::time::TimeStamp;

macro_rules! id_type {
    ($name:ident) => {
        #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
        pub struct $name(pub usize);

        impl $name {
            pub fn index(self) -> usize {
                self.0
            }
        }
    };
}

id_type!(StateId);
id_type!(InputId);
id_type!(OutputId);

/// `src --input, guard / output, delay--> dst`
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Transition {
    pub src: StateId,
    pub input: InputId,
    pub guard: TimedGuard,
    pub output: OutputId,
    pub delay: u64,
    pub dst: StateId,
}

/// Name tables shared by all machine kinds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Alphabet {
    fn new(kind: &'static str, names: Vec<String>) -> Result<Self, ModelError> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(ModelError::Duplicate {
                    kind,
                    name: n.clone(),
                });
            }
        }
        Ok(Alphabet { names, index })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    fn resolve(&self, kind: &'static str, name: &str) -> Result<usize, ModelError> {
        self.lookup(name).ok_or_else(|| ModelError::Undeclared {
            kind,
            name: name.to_string(),
        })
    }
}

/// Per `(state, input)` list of transition indices, in declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
struct SourceIndex {
    inputs: usize,
    slots: Vec<Vec<usize>>,
}

impl SourceIndex {
    fn build(states: usize, inputs: usize, keys: impl Iterator<Item = (usize, usize)>) -> Self {
        let mut slots = vec![Vec::new(); states * inputs];
        for (k, (s, i)) in keys.enumerate() {
            slots[s * inputs + i].push(k);
        }
        SourceIndex { inputs, slots }
    }

    fn get(&self, s: usize, i: usize) -> &[usize] {
        &self.slots[s * self.inputs + i]
    }
}

/// A timed FSM with output delays `(S, I, O, G, D, h_S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tfsm {
    name: String,
    states: Alphabet,
    inputs: Alphabet,
    outputs: Alphabet,
    transitions: Vec<Transition>,
    by_source: SourceIndex,
}

impl Tfsm {
    pub fn builder(name: impl Into<String>) -> TfsmBuilder {
        TfsmBuilder {
            name: name.into(),
            ..Default::default()
        }
    }

    /// Assembles a machine from index-based transitions.
    pub fn new(
        name: impl Into<String>,
        states: Vec<String>,
        inputs: Vec<String>,
        outputs: Vec<String>,
        transitions: Vec<Transition>,
    ) -> Result<Self, ModelError> {
        if states.is_empty() {
            return Err(ModelError::NoStates);
        }
        let states = Alphabet::new("state", states)?;
        let inputs = Alphabet::new("input", inputs)?;
        let outputs = Alphabet::new("output", outputs)?;
        for t in &transitions {
            let undeclared = |kind, idx: usize| ModelError::Undeclared {
                kind,
                name: format!("#{idx}"),
            };
            if t.src.0 >= states.len() {
                return Err(undeclared("state", t.src.0));
            }
            if t.dst.0 >= states.len() {
                return Err(undeclared("state", t.dst.0));
            }
            if t.input.0 >= inputs.len() {
                return Err(undeclared("input", t.input.0));
            }
            if t.output.0 >= outputs.len() {
                return Err(undeclared("output", t.output.0));
            }
            if t.delay == 0 {
                return Err(ModelError::ZeroDelay);
            }
        }
        let by_source = SourceIndex::build(
            states.len(),
            inputs.len(),
            transitions.iter().map(|t| (t.src.0, t.input.0)),
        );
        Ok(Tfsm {
            name: name.into(),
            states,
            inputs,
            outputs,
            transitions,
            by_source,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn states(&self) -> &Alphabet {
        &self.states
    }

    pub fn inputs(&self) -> &Alphabet {
        &self.inputs
    }

    pub fn outputs(&self) -> &Alphabet {
        &self.outputs
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> + Clone {
        (0..self.states.len()).map(StateId)
    }

    pub fn input_ids(&self) -> impl Iterator<Item = InputId> + Clone {
        (0..self.inputs.len()).map(InputId)
    }

    pub fn state(&self, name: &str) -> Option<StateId> {
        self.states.lookup(name).map(StateId)
    }

    pub fn input(&self, name: &str) -> Option<InputId> {
        self.inputs.lookup(name).map(InputId)
    }

    pub fn output(&self, name: &str) -> Option<OutputId> {
        self.outputs.lookup(name).map(OutputId)
    }

    pub fn state_name(&self, s: StateId) -> &str {
        self.states.name(s.0)
    }

    pub fn input_name(&self, i: InputId) -> &str {
        self.inputs.name(i.0)
    }

    pub fn output_name(&self, o: OutputId) -> &str {
        self.outputs.name(o.0)
    }

    pub fn transitions_from(&self, s: StateId, i: InputId) -> impl Iterator<Item = &Transition> {
        self.by_source
            .get(s.0, i.0)
            .iter()
            .map(move |&k| &self.transitions[k])
    }

    /// Transition taken at `s` when `i` arrives `delta` after the previous
    /// input. The first matching transition wins if guards overlap.
    pub fn enabled(&self, s: StateId, i: InputId, delta: TimeStamp) -> Option<&Transition> {
        self.transitions_from(s, i)
            .find(|t| t.guard.contains(delta))
    }

    /// Guards of input `i` across all states, deduplicated and sorted.
    pub fn guards_of(&self, i: InputId) -> Vec<TimedGuard> {
        let mut g: Vec<TimedGuard> = self
            .transitions
            .iter()
            .filter(|t| t.input == i)
            .map(|t| t.guard)
            .collect();
        g.sort();
        g.dedup();
        g
    }

    pub fn max_delay(&self) -> Option<u64> {
        self.transitions.iter().map(|t| t.delay).max()
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "s#{} --i#{},{}/o#{},+{}--> s#{}",
            self.src.0, self.input.0, self.guard, self.output.0, self.delay, self.dst.0
        )
    }
}

/// Name-based construction; ids are resolved in [`TfsmBuilder::build`].
#[derive(Clone, Debug, Default)]
pub struct TfsmBuilder {
    name: String,
    states: Vec<String>,
    inputs: Vec<String>,
    outputs: Vec<String>,
    transitions: Vec<(String, String, TimedGuard, String, u64, String)>,
}

impl TfsmBuilder {
    pub fn states<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        self.states.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn inputs<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        self.inputs.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn outputs<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        self.outputs.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn transition(
        mut self,
        src: &str,
        input: &str,
        guard: TimedGuard,
        output: &str,
        delay: u64,
        dst: &str,
    ) -> Self {
        self.transitions.push((
            src.into(),
            input.into(),
            guard,
            output.into(),
            delay,
            dst.into(),
        ));
        self
    }

    pub fn build(self) -> Result<Tfsm, ModelError> {
        if self.states.is_empty() {
            return Err(ModelError::NoStates);
        }
        let states = Alphabet::new("state", self.states)?;
        let inputs = Alphabet::new("input", self.inputs)?;
        let outputs = Alphabet::new("output", self.outputs)?;
        let mut transitions = Vec::with_capacity(self.transitions.len());
        for (src, input, guard, output, delay, dst) in &self.transitions {
            transitions.push(Transition {
                src: StateId(states.resolve("state", src)?),
                input: InputId(inputs.resolve("input", input)?),
                guard: *guard,
                output: OutputId(outputs.resolve("output", output)?),
                delay: *delay,
                dst: StateId(states.resolve("state", dst)?),
            });
        }
        Tfsm::new(
            self.name,
            states.names,
            inputs.names,
            outputs.names,
            transitions,
        )
    }
}

/// Untimed transition `(src, input, output, dst)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FsmTransition {
    pub src: StateId,
    pub input: InputId,
    pub output: OutputId,
    pub dst: StateId,
}

/// An FSM `(S, I, O, h_S)`, possibly non-deterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fsm {
    name: String,
    states: Alphabet,
    inputs: Alphabet,
    outputs: Alphabet,
    transitions: Vec<FsmTransition>,
    by_source: SourceIndex,
}

impl Fsm {
    pub fn new(
        name: impl Into<String>,
        states: Vec<String>,
        inputs: Vec<String>,
        outputs: Vec<String>,
        transitions: Vec<FsmTransition>,
    ) -> Result<Self, ModelError> {
        if states.is_empty() {
            return Err(ModelError::NoStates);
        }
        let states = Alphabet::new("state", states)?;
        let inputs = Alphabet::new("input", inputs)?;
        let outputs = Alphabet::new("output", outputs)?;
        for t in &transitions {
            let bad = |kind, idx: usize| ModelError::Undeclared {
                kind,
                name: format!("#{idx}"),
            };
            if t.src.0 >= states.len() || t.dst.0 >= states.len() {
                return Err(bad("state", t.src.0.max(t.dst.0)));
            }
            if t.input.0 >= inputs.len() {
                return Err(bad("input", t.input.0));
            }
            if t.output.0 >= outputs.len() {
                return Err(bad("output", t.output.0));
            }
        }
        let by_source = SourceIndex::build(
            states.len(),
            inputs.len(),
            transitions.iter().map(|t| (t.src.0, t.input.0)),
        );
        Ok(Fsm {
            name: name.into(),
            states,
            inputs,
            outputs,
            transitions,
            by_source,
        })
    }

    /// Builds from name-based `(src, input, output, dst)` tuples.
    pub fn from_names<S: Into<String>>(
        name: impl Into<String>,
        states: impl IntoIterator<Item = S>,
        inputs: impl IntoIterator<Item = S>,
        outputs: impl IntoIterator<Item = S>,
        transitions: &[(&str, &str, &str, &str)],
    ) -> Result<Self, ModelError> {
        let states = Alphabet::new("state", states.into_iter().map(Into::into).collect())?;
        let inputs = Alphabet::new("input", inputs.into_iter().map(Into::into).collect())?;
        let outputs = Alphabet::new("output", outputs.into_iter().map(Into::into).collect())?;
        let mut ts = Vec::with_capacity(transitions.len());
        for (src, input, output, dst) in transitions {
            ts.push(FsmTransition {
                src: StateId(states.resolve("state", src)?),
                input: InputId(inputs.resolve("input", input)?),
                output: OutputId(outputs.resolve("output", output)?),
                dst: StateId(states.resolve("state", dst)?),
            });
        }
        Fsm::new(name, states.names, inputs.names, outputs.names, ts)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn states(&self) -> &Alphabet {
        &self.states
    }

    pub fn inputs(&self) -> &Alphabet {
        &self.inputs
    }

    pub fn outputs(&self) -> &Alphabet {
        &self.outputs
    }

    pub fn transitions(&self) -> &[FsmTransition] {
        &self.transitions
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> + Clone {
        (0..self.states.len()).map(StateId)
    }

    pub fn input_ids(&self) -> impl Iterator<Item = InputId> + Clone {
        (0..self.inputs.len()).map(InputId)
    }

    pub fn input(&self, name: &str) -> Option<InputId> {
        self.inputs.lookup(name).map(InputId)
    }

    pub fn state(&self, name: &str) -> Option<StateId> {
        self.states.lookup(name).map(StateId)
    }

    pub fn transitions_from(&self, s: StateId, i: InputId) -> impl Iterator<Item = &FsmTransition> {
        self.by_source
            .get(s.0, i.0)
            .iter()
            .map(move |&k| &self.transitions[k])
    }

    /// First transition for `(s, i)`; the only one on deterministic machines.
    pub fn step(&self, s: StateId, i: InputId) -> Option<&FsmTransition> {
        self.transitions_from(s, i).next()
    }
}

/// A partial deterministic automaton `(Q, Σ, δ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pfa {
    name: String,
    states: Alphabet,
    letters: Alphabet,
    /// `delta[q][a]`
    delta: Vec<Vec<Option<StateId>>>,
}

impl Pfa {
    /// Rejects a second transition for the same `(state, letter)`.
    pub fn from_names<S: Into<String>>(
        name: impl Into<String>,
        states: impl IntoIterator<Item = S>,
        letters: impl IntoIterator<Item = S>,
        transitions: &[(&str, &str, &str)],
    ) -> Result<Self, ModelError> {
        let states = Alphabet::new("state", states.into_iter().map(Into::into).collect())?;
        let letters = Alphabet::new("letter", letters.into_iter().map(Into::into).collect())?;
        let mut ts = Vec::with_capacity(transitions.len());
        for (q, a, r) in transitions {
            ts.push((
                StateId(states.resolve("state", q)?),
                InputId(letters.resolve("letter", a)?),
                StateId(states.resolve("state", r)?),
            ));
        }
        Pfa::new(name, states.names, letters.names, &ts)
    }

    pub fn new(
        name: impl Into<String>,
        states: Vec<String>,
        letters: Vec<String>,
        transitions: &[(StateId, InputId, StateId)],
    ) -> Result<Self, ModelError> {
        if states.is_empty() {
            return Err(ModelError::NoStates);
        }
        let states = Alphabet::new("state", states)?;
        let letters = Alphabet::new("letter", letters)?;
        let mut delta = vec![vec![None; letters.len()]; states.len()];
        for &(q, a, r) in transitions {
            if q.0 >= states.len() || r.0 >= states.len() {
                return Err(ModelError::Undeclared {
                    kind: "state",
                    name: format!("#{}", q.0.max(r.0)),
                });
            }
            if a.0 >= letters.len() {
                return Err(ModelError::Undeclared {
                    kind: "letter",
                    name: format!("#{}", a.0),
                });
            }
            if delta[q.0][a.0].replace(r).is_some() {
                return Err(ModelError::Duplicate {
                    kind: "transition",
                    name: format!("{} {}", states.name(q.0), letters.name(a.0)),
                });
            }
        }
        Ok(Pfa {
            name: name.into(),
            states,
            letters,
            delta,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn states(&self) -> &Alphabet {
        &self.states
    }

    pub fn letters(&self) -> &Alphabet {
        &self.letters
    }

    pub fn step(&self, q: StateId, a: InputId) -> Option<StateId> {
        self.delta[q.0][a.0]
    }

    /// Defined transitions in `(state, letter)` order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, InputId, StateId)> + '_ {
        self.delta.iter().enumerate().flat_map(|(q, row)| {
            row.iter()
                .enumerate()
                .filter_map(move |(a, r)| r.map(|r| (StateId(q), InputId(a), r)))
        })
    }
}
