//! Line-oriented text format for machines.
//!
//! ```text
//! tfsm S1
//! states s0 s1 s2
//! inputs i1 i2
//! outputs o1 o2 o3
//! trans s0 i1 [1,3) o1 4 s1
//! trans s0 i2 [1,1] o1 2 s0     # point guard
//! ```
//!
//! `fsm` blocks write `trans src input output dst` and `pfa` blocks write
//! `trans src letter dst`; a `pfa` declares its letters with `inputs` and
//! has no `outputs` line. `#` starts a comment.

use std::fmt::Write as _;

use thiserror::Error;

use crate::error::ModelError;
use crate::guard::TimedGuard;
use crate::machine::{Fsm, FsmTransition, InputId, OutputId, Pfa, StateId, Tfsm, Transition};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Machine {
    Tfsm(Tfsm),
    Fsm(Fsm),
    Pfa(Pfa),
}

impl Machine {
    pub fn kind(&self) -> &'static str {
        match self {
            Machine::Tfsm(_) => "tfsm",
            Machine::Fsm(_) => "fsm",
            Machine::Pfa(_) => "pfa",
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Machine::Tfsm(m) => m.name(),
            Machine::Fsm(m) => m.name(),
            Machine::Pfa(m) => m.name(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("{line}:{column}: expected {expected}, found {found}")]
    Syntax {
        line: usize,
        column: usize,
        expected: String,
        found: String,
    },
    #[error("{line}:{column}: {error}")]
    Semantic {
        line: usize,
        column: usize,
        error: ModelError,
    },
}

#[derive(Clone, Debug)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

/// Splits a line into words; a bracketed guard is one token even if it
/// contains spaces.
fn tokenize(line: &str) -> Result<Vec<Token<'_>>, (usize, String)> {
    let code = line.split('#').next().unwrap_or("");
    let bytes = code.as_bytes();
    let mut out = Vec::new();
    let mut k = 0;
    while k < bytes.len() {
        if bytes[k].is_ascii_whitespace() {
            k += 1;
            continue;
        }
        let start = k;
        if bytes[k] == b'[' {
            while k < bytes.len() && bytes[k] != b')' && bytes[k] != b']' {
                k += 1;
            }
            if k == bytes.len() {
                return Err((start + 1, "closing `)` or `]`".into()));
            }
            k += 1;
        } else {
            while k < bytes.len() && !bytes[k].is_ascii_whitespace() {
                k += 1;
            }
        }
        out.push(Token {
            text: &code[start..k],
            column: start + 1,
        });
    }
    Ok(out)
}

struct Parser<'a> {
    line: usize,
    tokens: Vec<Token<'a>>,
    pos: usize,
    eol_column: usize,
}

impl<'a> Parser<'a> {
    fn syntax(&self, column: usize, expected: &str, found: &str) -> FormatError {
        FormatError::Syntax {
            line: self.line,
            column,
            expected: expected.into(),
            found: found.into(),
        }
    }

    fn next(&mut self, expected: &str) -> Result<Token<'a>, FormatError> {
        let t = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| self.syntax(self.eol_column, expected, "end of line"))?;
        self.pos += 1;
        Ok(t)
    }

    fn rest(&mut self) -> Vec<Token<'a>> {
        let r = self.tokens[self.pos..].to_vec();
        self.pos = self.tokens.len();
        r
    }

    fn finish(&self) -> Result<(), FormatError> {
        match self.tokens.get(self.pos) {
            Some(t) => Err(self.syntax(t.column, "end of line", &format!("`{}`", t.text))),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Tfsm,
    Fsm,
    Pfa,
}

struct Named {
    text: String,
    line: usize,
    column: usize,
}

struct Decl {
    line: usize,
    names: Vec<Named>,
}

enum RawTrans {
    Timed {
        src: Named,
        input: Named,
        guard: TimedGuard,
        output: Named,
        delay: u64,
        dst: Named,
    },
    Plain {
        src: Named,
        input: Named,
        output: Named,
        dst: Named,
    },
    Letter {
        src: Named,
        letter: Named,
        dst: Named,
    },
}

fn named(tok: &Token<'_>, line: usize) -> Named {
    Named {
        text: tok.text.to_string(),
        line,
        column: tok.column,
    }
}

fn parse_guard(p: &Parser<'_>, tok: &Token<'_>) -> Result<TimedGuard, FormatError> {
    let bad = || {
        p.syntax(
            tok.column,
            "guard `[u,v)` or `[u,u]`",
            &format!("`{}`", tok.text),
        )
    };
    let inner = tok.text.strip_prefix('[').ok_or_else(bad)?;
    let (body, closed) = if let Some(b) = inner.strip_suffix(')') {
        (b, false)
    } else if let Some(b) = inner.strip_suffix(']') {
        (b, true)
    } else {
        return Err(bad());
    };
    let (lo, hi) = body.split_once(',').ok_or_else(bad)?;
    let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
    let semantic = |error| FormatError::Semantic {
        line: p.line,
        column: tok.column,
        error,
    };
    if closed {
        if lo != hi {
            return Err(semantic(ModelError::InvalidGuard(format!(
                "closed guard [{lo},{hi}] must be a point"
            ))));
        }
        TimedGuard::point(lo).map_err(semantic)
    } else {
        TimedGuard::half_open(lo, hi).map_err(semantic)
    }
}

pub fn parse(text: &str) -> Result<Machine, FormatError> {
    let mut header: Option<(Kind, String)> = None;
    let mut states: Option<Decl> = None;
    let mut inputs: Option<Decl> = None;
    let mut outputs: Option<Decl> = None;
    let mut trans: Vec<RawTrans> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let tokens = tokenize(raw).map_err(|(column, expected)| FormatError::Syntax {
            line,
            column,
            expected,
            found: "end of line".into(),
        })?;
        if tokens.is_empty() {
            continue;
        }
        let mut p = Parser {
            line,
            tokens,
            pos: 0,
            eol_column: raw.len() + 1,
        };
        let kw = p.next("keyword")?;
        let Some((kind, _)) = &header else {
            let kind = match kw.text {
                "tfsm" => Kind::Tfsm,
                "fsm" => Kind::Fsm,
                "pfa" => Kind::Pfa,
                other => {
                    return Err(p.syntax(
                        kw.column,
                        "`tfsm`, `fsm` or `pfa`",
                        &format!("`{other}`"),
                    ))
                }
            };
            let name = p.next("machine name")?;
            p.finish()?;
            header = Some((kind, name.text.to_string()));
            continue;
        };
        let kind = *kind;
        match kw.text {
            "states" | "inputs" | "outputs" => {
                let slot = match kw.text {
                    "states" => &mut states,
                    "inputs" => &mut inputs,
                    _ if kind == Kind::Pfa => {
                        return Err(p.syntax(
                            kw.column,
                            "`states`, `inputs` or `trans`",
                            "`outputs`",
                        ))
                    }
                    _ => &mut outputs,
                };
                if slot.is_some() {
                    return Err(FormatError::Semantic {
                        line,
                        column: kw.column,
                        error: ModelError::Duplicate {
                            kind: "declaration",
                            name: kw.text.into(),
                        },
                    });
                }
                let names = p.rest().iter().map(|t| named(t, line)).collect();
                *slot = Some(Decl { line, names });
            }
            "trans" => {
                let t = match kind {
                    Kind::Tfsm => {
                        let src = p.next("source state")?;
                        let input = p.next("input")?;
                        let g = p.next("guard")?;
                        let guard = parse_guard(&p, &g)?;
                        let output = p.next("output")?;
                        let d = p.next("delay")?;
                        let delay: u64 = d.text.parse().map_err(|_| {
                            p.syntax(d.column, "positive integer delay", &format!("`{}`", d.text))
                        })?;
                        if delay == 0 {
                            return Err(FormatError::Semantic {
                                line,
                                column: d.column,
                                error: ModelError::ZeroDelay,
                            });
                        }
                        let dst = p.next("target state")?;
                        RawTrans::Timed {
                            src: named(&src, line),
                            input: named(&input, line),
                            guard,
                            output: named(&output, line),
                            delay,
                            dst: named(&dst, line),
                        }
                    }
                    Kind::Fsm => {
                        let src = p.next("source state")?;
                        let input = p.next("input")?;
                        let output = p.next("output")?;
                        let dst = p.next("target state")?;
                        RawTrans::Plain {
                            src: named(&src, line),
                            input: named(&input, line),
                            output: named(&output, line),
                            dst: named(&dst, line),
                        }
                    }
                    Kind::Pfa => {
                        let src = p.next("source state")?;
                        let letter = p.next("letter")?;
                        let dst = p.next("target state")?;
                        RawTrans::Letter {
                            src: named(&src, line),
                            letter: named(&letter, line),
                            dst: named(&dst, line),
                        }
                    }
                };
                p.finish()?;
                trans.push(t);
            }
            other => {
                let expected = if kind == Kind::Pfa {
                    "`states`, `inputs` or `trans`"
                } else {
                    "`states`, `inputs`, `outputs` or `trans`"
                };
                return Err(p.syntax(kw.column, expected, &format!("`{other}`")));
            }
        }
    }

    let Some((kind, name)) = header else {
        return Err(FormatError::Syntax {
            line: last_line.max(1),
            column: 1,
            expected: "`tfsm`, `fsm` or `pfa` header".into(),
            found: "end of input".into(),
        });
    };
    let states = states.ok_or_else(|| FormatError::Syntax {
        line: last_line,
        column: 1,
        expected: "`states` declaration".into(),
        found: "end of input".into(),
    })?;
    let decl_line = states.line;
    let table = |d: Option<Decl>, kind: &'static str| -> Result<Vec<String>, FormatError> {
        let mut out: Vec<String> = Vec::new();
        for n in d.map(|d| d.names).unwrap_or_default() {
            if out.contains(&n.text) {
                return Err(FormatError::Semantic {
                    line: n.line,
                    column: n.column,
                    error: ModelError::Duplicate { kind, name: n.text },
                });
            }
            out.push(n.text);
        }
        Ok(out)
    };
    let state_names = table(Some(states), "state")?;
    let input_kind = if kind == Kind::Pfa { "letter" } else { "input" };
    let input_names = table(inputs, input_kind)?;
    let output_names = table(outputs, "output")?;
    if state_names.is_empty() {
        return Err(FormatError::Semantic {
            line: decl_line,
            column: 1,
            error: ModelError::NoStates,
        });
    }

    let resolve = |names: &[String], kind: &'static str, n: &Named| -> Result<usize, FormatError> {
        names
            .iter()
            .position(|x| *x == n.text)
            .ok_or_else(|| FormatError::Semantic {
                line: n.line,
                column: n.column,
                error: ModelError::Undeclared {
                    kind,
                    name: n.text.clone(),
                },
            })
    };
    let semantic = |e: ModelError| FormatError::Semantic {
        line: decl_line,
        column: 1,
        error: e,
    };

    match kind {
        Kind::Tfsm => {
            let mut ts = Vec::with_capacity(trans.len());
            for t in &trans {
                let RawTrans::Timed {
                    src,
                    input,
                    guard,
                    output,
                    delay,
                    dst,
                } = t
                else {
                    unreachable!()
                };
                ts.push(Transition {
                    src: StateId(resolve(&state_names, "state", src)?),
                    input: InputId(resolve(&input_names, "input", input)?),
                    guard: *guard,
                    output: OutputId(resolve(&output_names, "output", output)?),
                    delay: *delay,
                    dst: StateId(resolve(&state_names, "state", dst)?),
                });
            }
            Tfsm::new(name, state_names, input_names, output_names, ts)
                .map(Machine::Tfsm)
                .map_err(semantic)
        }
        Kind::Fsm => {
            let mut ts = Vec::with_capacity(trans.len());
            for t in &trans {
                let RawTrans::Plain {
                    src,
                    input,
                    output,
                    dst,
                } = t
                else {
                    unreachable!()
                };
                ts.push(FsmTransition {
                    src: StateId(resolve(&state_names, "state", src)?),
                    input: InputId(resolve(&input_names, "input", input)?),
                    output: OutputId(resolve(&output_names, "output", output)?),
                    dst: StateId(resolve(&state_names, "state", dst)?),
                });
            }
            Fsm::new(name, state_names, input_names, output_names, ts)
                .map(Machine::Fsm)
                .map_err(semantic)
        }
        Kind::Pfa => {
            let mut ts = Vec::with_capacity(trans.len());
            for t in &trans {
                let RawTrans::Letter { src, letter, dst } = t else {
                    unreachable!()
                };
                let q = StateId(resolve(&state_names, "state", src)?);
                let a = InputId(resolve(&input_names, "letter", letter)?);
                if ts.iter().any(|&(q2, a2, _)| (q2, a2) == (q, a)) {
                    return Err(FormatError::Semantic {
                        line: src.line,
                        column: src.column,
                        error: ModelError::Duplicate {
                            kind: "transition",
                            name: format!("{} {}", src.text, letter.text),
                        },
                    });
                }
                ts.push((q, a, StateId(resolve(&state_names, "state", dst)?)));
            }
            Pfa::new(name, state_names, input_names, &ts)
                .map(Machine::Pfa)
                .map_err(semantic)
        }
    }
}

fn header(out: &mut String, kw: &str, names: &[String]) {
    out.push_str(kw);
    for n in names {
        out.push(' ');
        out.push_str(n);
    }
    out.push('\n');
}

/// Canonical text: header, declarations, then transitions in stored order.
pub fn serialize(m: &Machine) -> String {
    let mut out = String::new();
    match m {
        Machine::Tfsm(m) => {
            let _ = writeln!(out, "tfsm {}", m.name());
            header(&mut out, "states", m.states().names());
            header(&mut out, "inputs", m.inputs().names());
            header(&mut out, "outputs", m.outputs().names());
            for t in m.transitions() {
                let _ = writeln!(
                    out,
                    "trans {} {} {} {} {} {}",
                    m.state_name(t.src),
                    m.input_name(t.input),
                    t.guard,
                    m.output_name(t.output),
                    t.delay,
                    m.state_name(t.dst)
                );
            }
        }
        Machine::Fsm(m) => {
            let _ = writeln!(out, "fsm {}", m.name());
            header(&mut out, "states", m.states().names());
            header(&mut out, "inputs", m.inputs().names());
            header(&mut out, "outputs", m.outputs().names());
            for t in m.transitions() {
                let _ = writeln!(
                    out,
                    "trans {} {} {} {}",
                    m.states().name(t.src.0),
                    m.inputs().name(t.input.0),
                    m.outputs().name(t.output.0),
                    m.states().name(t.dst.0)
                );
            }
        }
        Machine::Pfa(m) => {
            let _ = writeln!(out, "pfa {}", m.name());
            header(&mut out, "states", m.states().names());
            header(&mut out, "inputs", m.letters().names());
            for (q, a, r) in m.transitions() {
                let _ = writeln!(
                    out,
                    "trans {} {} {}",
                    m.states().name(q.0),
                    m.letters().name(a.0),
                    m.states().name(r.0)
                );
            }
        }
    }
    out
}

/// Parses text that must describe a timed machine.
pub fn parse_tfsm(text: &str) -> Result<Tfsm, FormatError> {
    match parse(text)? {
        Machine::Tfsm(m) => Ok(m),
        other => Err(FormatError::Syntax {
            line: 1,
            column: 1,
            expected: "`tfsm` header".into(),
            found: format!("`{}`", other.kind()),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "tfsm T\nstates s0 s1\ninputs i1\noutputs o1\n";

    #[test]
    fn parses_guards_comments_and_points() {
        let m = parse_tfsm(&format!(
            "# leading comment\n{SMALL}trans s0 i1 [1, 3) o1 4 s1  # note\ntrans s1 i1 [2,2] o1 1 s0\n"
        ))
        .unwrap();
        assert_eq!(m.transitions().len(), 2);
        assert_eq!(
            m.transitions()[0].guard,
            TimedGuard::half_open(1, 3).unwrap()
        );
        assert_eq!(m.transitions()[1].guard, TimedGuard::point(2).unwrap());
    }

    #[test]
    fn reversed_guard_is_a_semantic_error() {
        let err = parse(&format!("{SMALL}trans s0 i1 [3,1) o1 4 s1\n")).unwrap_err();
        assert!(matches!(
            err,
            FormatError::Semantic {
                line: 5,
                column: 13,
                error: ModelError::InvalidGuard(_)
            }
        ));
    }

    #[test]
    fn undeclared_ids_are_positioned() {
        let err = parse(&format!("{SMALL}trans s0 i1 [1,3) o9 4 s1\n")).unwrap_err();
        assert_eq!(
            err,
            FormatError::Semantic {
                line: 5,
                column: 19,
                error: ModelError::Undeclared {
                    kind: "output",
                    name: "o9".into()
                }
            }
        );
    }

    #[test]
    fn syntax_errors_name_the_expected_token() {
        let err = parse(&format!("{SMALL}trans s0 i1 [1,3) o1\n")).unwrap_err();
        match err {
            FormatError::Syntax {
                line,
                expected,
                found,
                ..
            } => {
                assert_eq!(
                    (line, expected.as_str(), found.as_str()),
                    (5, "delay", "end of line")
                );
            }
            other => panic!("{other:?}"),
        }
        let err = parse("machine X\n").unwrap_err();
        assert!(matches!(
            err,
            FormatError::Syntax {
                line: 1,
                column: 1,
                ..
            }
        ));
        assert!(parse("tfsm T\nstates s\nbogus\n").is_err());
        assert!(parse(&format!("{SMALL}trans s0 i1 [1,3) o1 0 s1\n")).is_err());
        assert!(parse(&format!("{SMALL}trans s0 i1 [1,3 o1 1 s1\n")).is_err());
    }

    #[test]
    fn machine_without_transitions_is_valid() {
        let m = parse_tfsm(SMALL).unwrap();
        assert!(m.transitions().is_empty());
        assert!(crate::classify::classify(&m).weakly_complete);
    }

    #[test]
    fn fsm_and_pfa_round_trip() {
        let fsm = "fsm F\nstates a b\ninputs x\noutputs y z\ntrans a x y b\ntrans b x z a\n";
        let m = parse(fsm).unwrap();
        assert_eq!(serialize(&m), fsm);
        let pfa = "pfa P\nstates q0 q1\ninputs a b\ntrans q0 a q1\ntrans q1 b q1\n";
        let p = parse(pfa).unwrap();
        assert_eq!(serialize(&p), pfa);
        assert!(parse("pfa P\nstates q\ninputs a\ntrans q a q\ntrans q a q\n").is_err());
        assert!(parse("pfa P\nstates q\noutputs o\n").is_err());
    }
}
