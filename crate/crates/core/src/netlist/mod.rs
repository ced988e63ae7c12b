//! Gate-level combinational netlists shared by the RTL and CMOS flows.

mod decompose;
mod generate;
mod stats;
mod text;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::GateKind;

pub use decompose::decompose_fanin;
pub use generate::{gen_mux, gen_ripple_adder};
pub use stats::{cmos_transistors, component_stats, AreaModel, ComponentStats};
pub use text::{emit_netlist, parse_netlist};

/// Implicitly driven constant nets.
pub const CONST0: &str = "const0";
pub const CONST1: &str = "const1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Technology {
    /// Resistive threshold logic: any fan-in per gate.
    Rtl,
    /// Static CMOS baseline.
    Cmos,
}

impl Technology {
    pub fn as_str(self) -> &'static str {
        match self {
            Technology::Rtl => "rtl",
            Technology::Cmos => "cmos",
        }
    }
}

impl fmt::Display for Technology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Technology {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "rtl" => Ok(Technology::Rtl),
            "cmos" => Ok(Technology::Cmos),
            _ => Err(format!("unknown technology `{s}` (expected rtl or cmos)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub id: String,
    pub kind: GateKind,
    pub inputs: Vec<String>,
    pub output: String,
    /// Overrides the delay model for this gate (seconds).
    pub delay_override: Option<f64>,
}

impl Gate {
    pub fn new(id: impl Into<String>, kind: GateKind, inputs: Vec<String>, output: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            kind,
            inputs,
            output: output.into(),
            delay_override: None,
        }
    }

    pub fn fan_in(&self) -> usize {
        self.inputs.len()
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A structural problem, pointing at the gate or output that caused it.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Issue {
    pub message: String,
    pub gate: Option<usize>,
    pub output: Option<usize>,
    pub input: Option<usize>,
}

impl Issue {
    fn at_gate(gate: usize, message: String) -> Self {
        Self {
            message,
            gate: Some(gate),
            output: None,
            input: None,
        }
    }
}

/// Resolved connectivity: nets are numbered `const0`, `const1`, primary
/// inputs, then gate outputs in gate order.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Graph {
    pub net_names: Vec<String>,
    pub net_index: HashMap<String, usize>,
    pub gate_inputs: Vec<Vec<usize>>,
    pub gate_output: Vec<usize>,
    pub output_nets: Vec<usize>,
    /// Gates reading each net.
    pub fanout: Vec<Vec<usize>>,
    pub topo: Vec<usize>,
}

/// Immutable, validated combinational netlist.
#[derive(Debug, Clone, PartialEq)]
pub struct Netlist {
    name: String,
    technology: Technology,
    inputs: Vec<String>,
    outputs: Vec<String>,
    gates: Vec<Gate>,
    graph: Graph,
}

impl Netlist {
    pub fn new(
        name: impl Into<String>,
        technology: Technology,
        inputs: Vec<String>,
        outputs: Vec<String>,
        gates: Vec<Gate>,
    ) -> Result<Self> {
        Self::build(name.into(), technology, inputs, outputs, gates).map_err(|issue| Error::Argument(issue.message))
    }

    pub(crate) fn build(
        name: String,
        technology: Technology,
        inputs: Vec<String>,
        outputs: Vec<String>,
        gates: Vec<Gate>,
    ) -> std::result::Result<Self, Issue> {
        let plain = |message: String| Issue {
            message,
            gate: None,
            output: None,
            input: None,
        };
        if !is_identifier(&name) {
            return Err(plain(format!("invalid netlist name `{name}`")));
        }
        let mut net_names = vec![CONST0.to_string(), CONST1.to_string()];
        let mut net_index: HashMap<String, usize> =
            net_names.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
        for (i, net) in inputs.iter().enumerate() {
            if !is_identifier(net) {
                return Err(Issue {
                    input: Some(i),
                    ..plain(format!("invalid net name `{net}`"))
                });
            }
            if net_index.insert(net.clone(), net_names.len()).is_some() {
                return Err(Issue {
                    input: Some(i),
                    ..plain(format!("net `{net}` has more than one driver"))
                });
            }
            net_names.push(net.clone());
        }
        let mut ids = HashSet::new();
        for (g, gate) in gates.iter().enumerate() {
            if !is_identifier(&gate.id) {
                return Err(Issue::at_gate(g, format!("invalid gate id `{}`", gate.id)));
            }
            if !ids.insert(gate.id.as_str()) {
                return Err(Issue::at_gate(g, format!("duplicate gate id `{}`", gate.id)));
            }
            if gate.inputs.is_empty() {
                return Err(Issue::at_gate(g, format!("gate `{}` has no inputs", gate.id)));
            }
            if gate.kind == GateKind::Not && gate.inputs.len() != 1 {
                return Err(Issue::at_gate(
                    g,
                    format!("NOT gate `{}` must have exactly one input", gate.id),
                ));
            }
            if let Some(d) = gate.delay_override {
                if !(d >= 0.0 && d.is_finite()) {
                    return Err(Issue::at_gate(g, format!("gate `{}` has a bad delay", gate.id)));
                }
            }
            let out = &gate.output;
            if !is_identifier(out) {
                return Err(Issue::at_gate(g, format!("invalid net name `{out}`")));
            }
            if net_index.insert(out.clone(), net_names.len()).is_some() {
                return Err(Issue::at_gate(g, format!("net `{out}` has more than one driver")));
            }
            net_names.push(out.clone());
        }

        let mut gate_inputs = Vec::with_capacity(gates.len());
        let mut fanout = vec![Vec::new(); net_names.len()];
        for (g, gate) in gates.iter().enumerate() {
            let ids = gate
                .inputs
                .iter()
                .map(|net| {
                    net_index
                        .get(net)
                        .copied()
                        .ok_or_else(|| Issue::at_gate(g, format!("net `{net}` read by `{}` is undriven", gate.id)))
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            for &n in &ids {
                if fanout[n].last() != Some(&g) {
                    fanout[n].push(g);
                }
            }
            gate_inputs.push(ids);
        }
        let gate_output: Vec<usize> = gates.iter().map(|g| net_index[&g.output]).collect();

        let mut output_nets = Vec::with_capacity(outputs.len());
        for (i, net) in outputs.iter().enumerate() {
            match net_index.get(net) {
                Some(&id) => output_nets.push(id),
                None => {
                    return Err(Issue {
                        output: Some(i),
                        ..plain(format!("output net `{net}` does not exist"))
                    })
                }
            }
        }

        let topo = topological_order(&gates, &gate_inputs, &gate_output, &fanout, net_names.len())
            .map_err(|g| Issue::at_gate(g, format!("combinational cycle through gate `{}`", gates[g].id)))?;

        Ok(Self {
            name,
            technology,
            inputs,
            outputs,
            gates,
            graph: Graph {
                net_names,
                net_index,
                gate_inputs,
                gate_output,
                output_nets,
                fanout,
                topo,
            },
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn technology(&self) -> Technology {
        self.technology
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate(&self, id: &str) -> Option<&Gate> {
        self.gates.iter().find(|g| g.id == id)
    }

    pub(crate) fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Gate indices in topological order.
    pub fn topological_order(&self) -> &[usize] {
        &self.graph.topo
    }

    /// Gate driving `net`, if any.
    pub fn driver(&self, net: &str) -> Option<usize> {
        self.gates.iter().position(|g| g.output == net)
    }

    pub fn with_technology(self, technology: Technology) -> Self {
        Self { technology, ..self }
    }

    pub fn with_name(self, name: impl Into<String>) -> Result<Self> {
        Self::new(name, self.technology, self.inputs, self.outputs, self.gates)
    }

    /// Side-by-side union of two netlists that share no nets or gate ids.
    pub fn disjoint_union(&self, other: &Netlist, name: &str) -> Result<Netlist> {
        if self.technology != other.technology {
            return Err(Error::Argument(
                "cannot merge netlists of different technologies".into(),
            ));
        }
        let cat = |a: &[String], b: &[String]| a.iter().chain(b).cloned().collect::<Vec<_>>();
        Netlist::new(
            name,
            self.technology,
            cat(&self.inputs, &other.inputs),
            cat(&self.outputs, &other.outputs),
            self.gates.iter().chain(&other.gates).cloned().collect(),
        )
    }

    /// Count of gates per `(kind, fan_in)`.
    pub fn inventory(&self) -> std::collections::BTreeMap<(GateKind, usize), usize> {
        let mut m = std::collections::BTreeMap::new();
        for g in &self.gates {
            *m.entry((g.kind, g.fan_in())).or_insert(0) += 1;
        }
        m
    }
}

/// Kahn's algorithm; on a cycle returns a gate on it.
fn topological_order(
    gates: &[Gate],
    gate_inputs: &[Vec<usize>],
    gate_output: &[usize],
    fanout: &[Vec<usize>],
    net_count: usize,
) -> std::result::Result<Vec<usize>, usize> {
    let mut driver = vec![None; net_count];
    for (g, &out) in gate_output.iter().enumerate() {
        driver[out] = Some(g);
    }
    let mut pending: Vec<usize> = gate_inputs
        .iter()
        .map(|ins| {
            let mut seen: Vec<usize> = ins.iter().filter(|n| driver[**n].is_some()).copied().collect();
            seen.sort_unstable();
            seen.dedup();
            seen.len()
        })
        .collect();
    let mut ready: std::collections::VecDeque<usize> = (0..gates.len()).filter(|&g| pending[g] == 0).collect();
    let mut order = Vec::with_capacity(gates.len());
    while let Some(g) = ready.pop_front() {
        order.push(g);
        for &reader in &fanout[gate_output[g]] {
            pending[reader] -= 1;
            if pending[reader] == 0 {
                ready.push_back(reader);
            }
        }
    }
    if order.len() == gates.len() {
        Ok(order)
    } else {
        Err((0..gates.len()).find(|&g| pending[g] > 0).unwrap_or(0))
    }
}
