use std::collections::HashSet;

use super::{Gate, Netlist};
use crate::error::{arg_err, Result};
use crate::GateKind;

/// Replaces every gate wider than `cap` by a balanced tree of gates with at
/// most `cap` inputs. AND/OR trees use the same kind throughout; NAND/NOR
/// trees use AND/OR internally and the original inverting kind at the root.
/// The root keeps the original gate id and output net.
pub fn decompose_fanin(n: &Netlist, cap: usize) -> Result<Netlist> {
    if cap < 2 {
        return arg_err(format!("fan-in cap must be at least 2, got {cap}"));
    }
    let mut used: HashSet<String> = n
        .graph()
        .net_names
        .iter()
        .cloned()
        .chain(n.gates().iter().map(|g| g.id.clone()))
        .collect();
    let mut fresh = |base: String| {
        let mut name = base;
        while used.contains(&name) {
            name.push('_');
        }
        used.insert(name.clone());
        name
    };

    let mut gates = Vec::with_capacity(n.gates().len());
    for g in n.gates() {
        if g.fan_in() <= cap || g.kind == GateKind::Not {
            gates.push(g.clone());
            continue;
        }
        let inner = match g.kind {
            GateKind::Nand | GateKind::And => GateKind::And,
            _ => GateKind::Or,
        };
        let mut level_nets = g.inputs.clone();
        let mut level = 0;
        while level_nets.len() > cap {
            let groups = level_nets.len().div_ceil(cap);
            let base = level_nets.len() / groups;
            let extra = level_nets.len() % groups;
            let mut next = Vec::with_capacity(groups);
            let mut rest = level_nets.as_slice();
            for k in 0..groups {
                let size = base + usize::from(k < extra);
                let (chunk, tail) = rest.split_at(size);
                rest = tail;
                if size == 1 {
                    next.push(chunk[0].clone());
                    continue;
                }
                let net = fresh(format!("{}_l{level}_{k}", g.output));
                let id = fresh(format!("{}_l{level}_{k}", g.id));
                gates.push(Gate {
                    id,
                    kind: inner,
                    inputs: chunk.to_vec(),
                    output: net.clone(),
                    delay_override: g.delay_override,
                });
                next.push(net);
            }
            level_nets = next;
            level += 1;
        }
        gates.push(Gate {
            inputs: level_nets,
            ..g.clone()
        });
    }
    Netlist::new(
        n.name(),
        n.technology(),
        n.inputs().to_vec(),
        n.outputs().to_vec(),
        gates,
    )
}
