use std::fmt::Write as _;

use super::{Gate, Issue, Netlist, Technology};
use crate::error::{ParseError, Result};
use crate::GateKind;

/// Whitespace-separated token with its 1-based column.
struct Token<'a> {
    text: &'a str,
    col: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token {
                    text: &line[s..i],
                    col: line[..s].chars().count() + 1,
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            col: line[..s].chars().count() + 1,
        });
    }
    out
}

/// Parses the line-oriented netlist format:
///
/// ```text
/// name adder1
/// tech rtl
/// input a b cin
/// output s cout
/// gate g1 AND in=a,b out=ab delay=4.5e-7
/// ```
pub fn parse_netlist(text: &str) -> Result<Netlist> {
    let mut name: Option<(String, usize)> = None;
    let mut tech: Option<Technology> = None;
    let mut inputs: Vec<(String, usize)> = Vec::new();
    let mut outputs: Vec<(String, usize)> = Vec::new();
    let mut gates: Vec<Gate> = Vec::new();
    let mut gate_lines: Vec<usize> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(head) = toks.first() else { continue };
        let err = |col: usize, msg: String| ParseError::new(line, col, msg);
        match head.text {
            "name" | "tech" => {
                if toks.len() != 2 {
                    return Err(err(head.col, format!("`{}` takes exactly one argument", head.text)).into());
                }
                let arg = &toks[1];
                if head.text == "name" {
                    if name.is_some() {
                        return Err(err(head.col, "duplicate `name` statement".into()).into());
                    }
                    if !super::is_identifier(arg.text) {
                        return Err(err(arg.col, format!("invalid name `{}`", arg.text)).into());
                    }
                    name = Some((arg.text.to_string(), line));
                } else {
                    if tech.is_some() {
                        return Err(err(head.col, "duplicate `tech` statement".into()).into());
                    }
                    tech = Some(arg.text.parse().map_err(|e: String| err(arg.col, e))?);
                }
            }
            "input" | "output" => {
                let list = if head.text == "input" {
                    &mut inputs
                } else {
                    &mut outputs
                };
                for t in &toks[1..] {
                    if !super::is_identifier(t.text) {
                        return Err(err(t.col, format!("invalid net name `{}`", t.text)).into());
                    }
                    list.push((t.text.to_string(), line));
                }
            }
            "gate" => {
                if toks.len() < 5 {
                    return Err(err(
                        head.col,
                        "expected `gate <id> <KIND> in=<nets> out=<net> [delay=<s>]`".into(),
                    )
                    .into());
                }
                let id = &toks[1];
                if !super::is_identifier(id.text) {
                    return Err(err(id.col, format!("invalid gate id `{}`", id.text)).into());
                }
                let kind: GateKind = toks[2].text.parse().map_err(|e: String| err(toks[2].col, e))?;
                let mut ins: Option<Vec<String>> = None;
                let mut out: Option<String> = None;
                let mut delay: Option<f64> = None;
                for t in &toks[3..] {
                    let Some((key, value)) = t.text.split_once('=') else {
                        return Err(err(t.col, format!("expected key=value, got `{}`", t.text)).into());
                    };
                    let vcol = t.col + key.len() + 1;
                    match key {
                        "in" if ins.is_none() => {
                            let nets: Vec<String> = value.split(',').map(str::to_string).collect();
                            if let Some(bad) = nets.iter().find(|n| !super::is_identifier(n)) {
                                return Err(err(vcol, format!("invalid net name `{bad}`")).into());
                            }
                            ins = Some(nets);
                        }
                        "out" if out.is_none() => {
                            if !super::is_identifier(value) {
                                return Err(err(vcol, format!("invalid net name `{value}`")).into());
                            }
                            out = Some(value.to_string());
                        }
                        "delay" if delay.is_none() => {
                            let d: f64 = value
                                .parse()
                                .ok()
                                .filter(|d: &f64| d.is_finite() && *d >= 0.0)
                                .ok_or_else(|| err(vcol, format!("bad delay `{value}`")))?;
                            delay = Some(d);
                        }
                        _ => return Err(err(t.col, format!("unexpected or repeated field `{key}`")).into()),
                    }
                }
                let (Some(ins), Some(out)) = (ins, out) else {
                    return Err(err(head.col, "gate needs both in= and out=".into()).into());
                };
                gates.push(Gate {
                    id: id.text.to_string(),
                    kind,
                    inputs: ins,
                    output: out,
                    delay_override: delay,
                });
                gate_lines.push(line);
            }
            other => {
                return Err(err(head.col, format!("unknown statement `{other}`")).into());
            }
        }
    }

    let Some((name, _)) = name else {
        return Err(ParseError::new(last_line.max(1), 1, "missing `name` statement").into());
    };
    let input_lines: Vec<usize> = inputs.iter().map(|(_, l)| *l).collect();
    let output_lines: Vec<usize> = outputs.iter().map(|(_, l)| *l).collect();
    Netlist::build(
        name,
        tech.unwrap_or(Technology::Rtl),
        inputs.into_iter().map(|(n, _)| n).collect(),
        outputs.into_iter().map(|(n, _)| n).collect(),
        gates,
    )
    .map_err(|issue: Issue| {
        let line = issue
            .gate
            .map(|g| gate_lines[g])
            .or(issue.output.map(|o| output_lines[o]))
            .or(issue.input.map(|i| input_lines[i]))
            .unwrap_or(1);
        ParseError::new(line, 1, issue.message).into()
    })
}

pub fn emit_netlist(n: &Netlist) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "name {}", n.name());
    let _ = writeln!(s, "tech {}", n.technology());
    if !n.inputs().is_empty() {
        let _ = writeln!(s, "input {}", n.inputs().join(" "));
    }
    if !n.outputs().is_empty() {
        let _ = writeln!(s, "output {}", n.outputs().join(" "));
    }
    for g in n.gates() {
        let _ = write!(s, "gate {} {} in={} out={}", g.id, g.kind, g.inputs.join(","), g.output);
        if let Some(d) = g.delay_override {
            let _ = write!(s, " delay={d:e}");
        }
        s.push('\n');
    }
    s
}
