//! Graphviz export.

use std::fmt::Write;

use tfsm::{Fsm, RegionFsm, Tfsm};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Edges labelled `i,[u,v)/o,+d`.
pub fn tfsm_dot(m: &Tfsm) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(m.name())).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    for s in m.states().names() {
        writeln!(out, "  {};", quote(s)).unwrap();
    }
    for t in m.transitions() {
        let label = format!(
            "{},{}/{},+{}",
            m.input_name(t.input),
            t.guard,
            m.output_name(t.output),
            t.delay
        );
        writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(m.state_name(t.src)),
            quote(m.state_name(t.dst)),
            quote(&label)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// Edges labelled `input/output`.
pub fn fsm_dot(m: &Fsm) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(m.name())).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    for s in m.states().names() {
        writeln!(out, "  {};", quote(s)).unwrap();
    }
    for t in m.transitions() {
        let label = format!(
            "{}/{}",
            m.inputs().name(t.input.0),
            m.outputs().name(t.output.0)
        );
        writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(m.states().name(t.src.0)),
            quote(m.states().name(t.dst.0)),
            quote(&label)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// Edges labelled `(i1,[0,1))/(o1,3)`.
pub fn region_dot(r: &RegionFsm) -> String {
    fsm_dot(r.fsm())
}
