//! Two-level netlist construction from covers.

use std::collections::HashSet;

use super::table::Cover;
use crate::error::{arg_err, Result};
use crate::netlist::{decompose_fanin, is_identifier, Gate, Netlist, Technology, CONST0, CONST1};
use crate::GateKind;

/// Name of the synthesized output net when a gate drives it (suffixed
/// with `_` if a variable already uses it).
pub const OUTPUT_NET: &str = "f";

/// Two-level RTL netlist: shared NOTs for complemented literals, one AND
/// per multi-literal implicant and one OR over all implicants.
///
/// Degenerate covers need no gate: an empty cover outputs `const0`, a
/// literal-free implicant `const1`, and a lone positive literal the input
/// net itself.
pub fn synthesize_rtl(cover: &Cover, vars: &[String]) -> Result<Netlist> {
    if vars.is_empty() {
        return arg_err("synthesis needs at least one variable");
    }
    if vars.len() != cover.num_vars {
        return arg_err(format!(
            "cover has {} variables but {} names were given",
            cover.num_vars,
            vars.len()
        ));
    }
    for v in vars {
        if !is_identifier(v) || v == CONST0 || v == CONST1 {
            return arg_err(format!("invalid variable name `{v}`"));
        }
    }
    let n = vars.len();
    let mut used: HashSet<String> = vars.iter().cloned().collect();
    used.insert(CONST0.into());
    used.insert(CONST1.into());
    let mut fresh = |base: String| {
        let mut name = base;
        while used.contains(&name) {
            name.push('_');
        }
        used.insert(name.clone());
        name
    };

    let out_net = fresh(OUTPUT_NET.into());
    let build = |gates: Vec<Gate>, out: &str| {
        Netlist::new("synth", Technology::Rtl, vars.to_vec(), vec![out.to_string()], gates)
    };
    if cover.implicants.is_empty() {
        return build(Vec::new(), CONST0);
    }
    if cover.implicants.iter().any(|c| c.literal_count() == 0) {
        return build(Vec::new(), CONST1);
    }

    let single = cover.implicants.len() == 1;
    let mut gates = Vec::new();
    let mut negated: Vec<Option<String>> = vec![None; n];
    let mut complemented: Vec<bool> = vec![false; n];
    for c in &cover.implicants {
        for (i, pos) in c.literals(n) {
            complemented[i] |= !pos;
        }
    }
    let lone_negative = single && cover.implicants[0].literal_count() == 1;
    for i in (0..n).filter(|&i| complemented[i]) {
        let net = if lone_negative {
            out_net.clone()
        } else {
            fresh(format!("n_{}", vars[i]))
        };
        let id = fresh(format!("not_{}", vars[i]));
        gates.push(Gate::new(id, GateKind::Not, vec![vars[i].clone()], &net));
        negated[i] = Some(net);
    }

    let mut terms = Vec::with_capacity(cover.implicants.len());
    for (k, c) in cover.implicants.iter().enumerate() {
        let lits: Vec<String> = c
            .literals(n)
            .into_iter()
            .map(|(i, pos)| {
                if pos {
                    vars[i].clone()
                } else {
                    negated[i].clone().expect("complement was created")
                }
            })
            .collect();
        if lits.len() == 1 {
            terms.push(lits.into_iter().next().expect("one literal"));
            continue;
        }
        let net = if single {
            out_net.clone()
        } else {
            fresh(format!("t{k}"))
        };
        let id = fresh(format!("and_t{k}"));
        gates.push(Gate::new(id, GateKind::And, lits, &net));
        terms.push(net);
    }

    if single {
        return build(gates, &terms[0]);
    }
    let id = fresh("or_out".into());
    gates.push(Gate::new(id, GateKind::Or, terms, &out_net));
    build(gates, &out_net)
}

/// [`synthesize_rtl`] followed by fan-in decomposition, tagged CMOS.
pub fn synthesize_cmos(cover: &Cover, vars: &[String], fanin_cap: usize) -> Result<Netlist> {
    if fanin_cap < 2 {
        return arg_err(format!("fan-in cap must be at least 2, got {fanin_cap}"));
    }
    let rtl = synthesize_rtl(cover, vars)?;
    Ok(decompose_fanin(&rtl, fanin_cap)?.with_technology(Technology::Cmos))
}
