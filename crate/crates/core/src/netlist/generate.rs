use super::{Gate, Netlist, Technology};
use crate::error::{arg_err, Result};
use crate::GateKind;

/// Ripple-carry adder built from unreduced single-bit adders.
///
/// Each bit uses 3 NOT, 3 AND2 and an OR3 for the carry `ab + bc + ac`, and
/// 4 AND3 with an OR4 for the canonical sum of products of the sum bit.
/// Inputs are `a0..`, `b0..`, `cin`; outputs `s0..` and `cout`.
pub fn gen_ripple_adder(bits: usize) -> Result<Netlist> {
    if bits == 0 {
        return arg_err("adder needs at least one bit");
    }
    let mut inputs: Vec<String> = (0..bits).map(|i| format!("a{i}")).collect();
    inputs.extend((0..bits).map(|i| format!("b{i}")));
    inputs.push("cin".into());
    let mut outputs: Vec<String> = (0..bits).map(|i| format!("s{i}")).collect();
    outputs.push("cout".into());

    let mut gates = Vec::with_capacity(12 * bits);
    let mut carry = "cin".to_string();
    for i in 0..bits {
        let a = format!("a{i}");
        let b = format!("b{i}");
        let c = carry.clone();
        let (na, nb, nc) = (format!("na{i}"), format!("nb{i}"), format!("nc{i}"));
        let p = |s: &str| format!("b{i}_{s}");
        let nets = |v: [&String; 3]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();

        gates.push(Gate::new(p("not_a"), GateKind::Not, vec![a.clone()], &na));
        gates.push(Gate::new(p("not_b"), GateKind::Not, vec![b.clone()], &nb));
        gates.push(Gate::new(p("not_c"), GateKind::Not, vec![c.clone()], &nc));

        let (ab, bc, ac) = (format!("ab{i}"), format!("bc{i}"), format!("ac{i}"));
        gates.push(Gate::new(p("and_ab"), GateKind::And, vec![a.clone(), b.clone()], &ab));
        gates.push(Gate::new(p("and_bc"), GateKind::And, vec![b.clone(), c.clone()], &bc));
        gates.push(Gate::new(p("and_ac"), GateKind::And, vec![a.clone(), c.clone()], &ac));
        let next = if i + 1 == bits {
            "cout".to_string()
        } else {
            format!("c{}", i + 1)
        };
        gates.push(Gate::new(p("or_carry"), GateKind::Or, nets([&ab, &bc, &ac]), &next));

        let minterms = [
            ("m1", [&na, &nb, &c]),
            ("m2", [&na, &b, &nc]),
            ("m4", [&a, &nb, &nc]),
            ("m7", [&a, &b, &c]),
        ];
        let mut terms = Vec::with_capacity(4);
        for (tag, lits) in minterms {
            let net = format!("{tag}_{i}");
            gates.push(Gate::new(p(tag), GateKind::And, nets(lits), &net));
            terms.push(net);
        }
        gates.push(Gate::new(p("or_sum"), GateKind::Or, terms, format!("s{i}")));
        carry = next;
    }
    Netlist::new(format!("adder{bits}"), Technology::Rtl, inputs, outputs, gates)
}

/// `n_data`-to-1 multiplexer as one wide AND per data line and a wide OR.
///
/// Inputs are select lines `s0..` (LSB first) then `d0..`; output `y`.
pub fn gen_mux(n_data: usize) -> Result<Netlist> {
    if n_data < 2 || !n_data.is_power_of_two() {
        return arg_err(format!("mux size must be a power of two >= 2, got {n_data}"));
    }
    let sel = n_data.trailing_zeros() as usize;
    let mut inputs: Vec<String> = (0..sel).map(|j| format!("s{j}")).collect();
    inputs.extend((0..n_data).map(|i| format!("d{i}")));

    let mut gates = Vec::with_capacity(sel + n_data + 1);
    for j in 0..sel {
        gates.push(Gate::new(
            format!("not_s{j}"),
            GateKind::Not,
            vec![format!("s{j}")],
            format!("ns{j}"),
        ));
    }
    let mut terms = Vec::with_capacity(n_data);
    for i in 0..n_data {
        let mut lits: Vec<String> = (0..sel)
            .map(|j| {
                if i >> j & 1 == 1 {
                    format!("s{j}")
                } else {
                    format!("ns{j}")
                }
            })
            .collect();
        lits.push(format!("d{i}"));
        let net = format!("t{i}");
        gates.push(Gate::new(format!("and_d{i}"), GateKind::And, lits, &net));
        terms.push(net);
    }
    gates.push(Gate::new("or_out", GateKind::Or, terms, "y"));
    Netlist::new(format!("mux{n_data}"), Technology::Rtl, inputs, vec!["y".into()], gates)
}
