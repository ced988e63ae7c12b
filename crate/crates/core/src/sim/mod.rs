//! Event-driven gate-level simulation with transport delays.

mod delay;

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

pub use delay::{picos_to_seconds, seconds_to_picos, DelayCurve, DelayModel, Picos, RtlDelays, PICOS_PER_SECOND};

use crate::error::{arg_err, Error, ParseError, Result};
use crate::netlist::Netlist;

/// Latest representable stimulus time, in seconds.
pub const MAX_TIME_SECONDS: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StimulusEvent {
    pub time: Picos,
    pub net: String,
    pub level: bool,
}

/// Input edges. Every primary input needs a level at time 0; later events
/// are ideal edges.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Stimulus {
    events: Vec<StimulusEvent>,
}

fn time_to_picos(seconds: f64) -> Result<Picos> {
    if !(seconds.is_finite() && (0.0..=MAX_TIME_SECONDS).contains(&seconds)) {
        return arg_err(format!("time {seconds} s is outside [0, {MAX_TIME_SECONDS}] s"));
    }
    Ok(seconds_to_picos(seconds))
}

impl Stimulus {
    pub fn new() -> Self {
        Self::default()
    }

    /// Stimulus holding each `(net, level)` from time 0.
    pub fn constant<'a>(levels: impl IntoIterator<Item = (&'a str, bool)>) -> Self {
        let mut s = Self::new();
        for (net, level) in levels {
            s.events.push(StimulusEvent {
                time: 0,
                net: net.to_string(),
                level,
            });
        }
        s
    }

    /// Appends an edge; times must not decrease per net.
    pub fn push(&mut self, seconds: f64, net: impl Into<String>, level: bool) -> Result<()> {
        let time = time_to_picos(seconds)?;
        let net = net.into();
        if let Some(prev) = self.events.iter().rev().find(|e| e.net == net) {
            if prev.time > time {
                return arg_err(format!("stimulus times for `{net}` decrease"));
            }
        }
        self.events.push(StimulusEvent { time, net, level });
        Ok(())
    }

    /// Events in time order; equal times keep insertion order.
    pub fn events(&self) -> Vec<&StimulusEvent> {
        let mut v: Vec<&StimulusEvent> = self.events.iter().collect();
        v.sort_by_key(|e| e.time);
        v
    }

    pub fn last_time(&self) -> Picos {
        self.events.iter().map(|e| e.time).max().unwrap_or(0)
    }

    /// Parses CSV with header `time_us,net,level`.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let csv_err = |e: csv::Error| -> Error {
            let line = e.position().map_or(1, |p| p.line() as usize);
            ParseError::new(line, 1, format!("malformed CSV: {e}")).into()
        };
        let header = rdr.headers().map_err(csv_err)?.clone();
        if header.iter().collect::<Vec<_>>() != ["time_us", "net", "level"] {
            return Err(ParseError::new(1, 1, "expected header `time_us,net,level`").into());
        }
        let mut s = Self::new();
        for rec in rdr.records() {
            let rec = rec.map_err(csv_err)?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            if rec.len() != 3 {
                return Err(ParseError::new(line, 1, "expected 3 fields").into());
            }
            let time_us: f64 = rec[0]
                .parse()
                .map_err(|_| ParseError::new(line, 1, format!("bad time `{}`", &rec[0])))?;
            let net = &rec[1];
            if !crate::netlist::is_identifier(net) {
                return Err(ParseError::new(line, 2, format!("invalid net name `{net}`")).into());
            }
            let level = match &rec[2] {
                "0" => false,
                "1" => true,
                other => return Err(ParseError::new(line, 3, format!("bad level `{other}`")).into()),
            };
            s.push(time_us * 1e-6, net, level)
                .map_err(|e| ParseError::new(line, 1, e.to_string()))?;
        }
        Ok(s)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("time_us,net,level\n");
        for e in self.events() {
            out.push_str(&format!("{},{},{}\n", format_us(e.time), e.net, u8::from(e.level)));
        }
        out
    }
}

/// Fixed six-decimal microseconds, exact for integer picoseconds.
pub fn format_us(p: Picos) -> String {
    format!("{}.{:06}", p / 1_000_000, p % 1_000_000)
}

/// Per-net change records. The first record of every net is its level at
/// time 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Waveform {
    nets: Vec<String>,
    records: Vec<Vec<(Picos, bool)>>,
    t_end: Picos,
}

impl Waveform {
    pub fn t_end(&self) -> Picos {
        self.t_end
    }

    pub fn nets(&self) -> &[String] {
        &self.nets
    }

    pub fn records(&self, net: &str) -> Option<&[(Picos, bool)]> {
        let i = self.nets.iter().position(|n| n == net)?;
        Some(&self.records[i])
    }

    pub fn level_at(&self, net: &str, t: Picos) -> Option<bool> {
        let r = self.records(net)?;
        r.iter().take_while(|(time, _)| *time <= t).last().map(|&(_, l)| l)
    }

    pub fn final_level(&self, net: &str) -> Option<bool> {
        self.records(net)?.last().map(|&(_, l)| l)
    }

    /// Time of the last change on `net` (0 if it never changed).
    pub fn last_change(&self, net: &str) -> Option<Picos> {
        self.records(net)?.last().map(|&(t, _)| t)
    }

    /// Change records as CSV `time_us,net,level`, sorted by time then by
    /// net declaration order.
    pub fn to_csv(&self) -> String {
        let mut rows: Vec<(Picos, usize, bool)> = self
            .records
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |&(t, l)| (t, i, l)))
            .collect();
        rows.sort_by_key(|&(t, i, _)| (t, i));
        let mut out = String::from("time_us,net,level\n");
        for (t, i, l) in rows {
            out.push_str(&format!("{},{},{}\n", format_us(t), self.nets[i], u8::from(l)));
        }
        out
    }
}

/// Levels of every net (in graph numbering) for the given input levels.
pub(crate) fn evaluate_all_nets(n: &Netlist, inputs: &[bool]) -> Vec<bool> {
    let g = n.graph();
    let mut levels = vec![false; g.net_names.len()];
    levels[1] = true;
    levels[2..2 + inputs.len()].copy_from_slice(inputs);
    let mut buf = Vec::new();
    for &gi in &g.topo {
        buf.clear();
        buf.extend(g.gate_inputs[gi].iter().map(|&x| levels[x]));
        levels[g.gate_output[gi]] = n.gates()[gi].kind.eval(&buf);
    }
    levels
}

/// Zero-delay output levels for input levels given in `n.inputs()` order.
pub fn steady_state(n: &Netlist, input_levels: &[bool]) -> Result<Vec<bool>> {
    if input_levels.len() != n.inputs().len() {
        return arg_err(format!(
            "expected {} input levels, got {}",
            n.inputs().len(),
            input_levels.len()
        ));
    }
    let levels = evaluate_all_nets(n, input_levels);
    Ok(n.graph().output_nets.iter().map(|&o| levels[o]).collect())
}

/// Runs the netlist from its steady state at time 0 until `t_end` seconds.
///
/// Events at one timestamp are applied together, then affected gates are
/// evaluated in declaration order and their output changes scheduled after
/// the gate delay. Every scheduled change that differs from the net's level
/// at its time is recorded (transport semantics).
pub fn simulate(n: &Netlist, s: &Stimulus, t_end: f64, delays: &DelayModel) -> Result<Waveform> {
    if !(t_end >= 0.0) {
        return arg_err(format!("end time must be nonnegative, got {t_end}"));
    }
    let t_end = time_to_picos(t_end.min(MAX_TIME_SECONDS))?;
    let g = n.graph();
    let n_inputs = n.inputs().len();

    let mut init: Vec<Option<bool>> = vec![None; n_inputs];
    let mut later = Vec::new();
    for e in s.events() {
        let Some(pos) = n.inputs().iter().position(|i| *i == e.net) else {
            return arg_err(format!("stimulus drives `{}`, which is not a primary input", e.net));
        };
        if e.time == 0 {
            init[pos] = Some(e.level);
        } else if e.time <= t_end {
            later.push((e.time, pos + 2, e.level));
        }
    }
    let init: Vec<bool> = init
        .iter()
        .enumerate()
        .map(|(i, l)| l.ok_or_else(|| Error::Argument(format!("input `{}` has no level at time 0", n.inputs()[i]))))
        .collect::<Result<_>>()?;

    let mut levels = evaluate_all_nets(n, &init);
    let mut projected = levels.clone();
    let mut records: Vec<Vec<(Picos, bool)>> = levels.iter().map(|&l| vec![(0, l)]).collect();
    let gate_delays: Vec<Picos> = n
        .gates()
        .iter()
        .map(|gate| delays.gate_delay_picos(n.technology(), gate))
        .collect();

    let mut queue: BinaryHeap<Reverse<(Picos, u64, usize, bool)>> = BinaryHeap::new();
    let mut seq = 0u64;
    for (t, net, l) in later {
        queue.push(Reverse((t, seq, net, l)));
        seq += 1;
    }
    let mut affected = BTreeSet::new();
    let mut buf = Vec::new();
    while let Some(&Reverse((now, ..))) = queue.peek() {
        if now > t_end {
            break;
        }
        while let Some(&Reverse((t, _, net, level))) = queue.peek() {
            if t != now {
                break;
            }
            queue.pop();
            if net < n_inputs + 2 {
                projected[net] = level;
            }
            if levels[net] != level {
                levels[net] = level;
                let r = &mut records[net];
                if r.last().is_some_and(|&(rt, _)| rt == now) {
                    r.pop();
                }
                if r.last().map(|&(_, l)| l) != Some(level) {
                    r.push((now, level));
                }
                affected.extend(g.fanout[net].iter().copied());
            }
        }
        for gi in std::mem::take(&mut affected) {
            buf.clear();
            buf.extend(g.gate_inputs[gi].iter().map(|&x| levels[x]));
            let v = n.gates()[gi].kind.eval(&buf);
            let out = g.gate_output[gi];
            if v != projected[out] {
                projected[out] = v;
                queue.push(Reverse((now.saturating_add(gate_delays[gi]), seq, out, v)));
                seq += 1;
            }
        }
    }

    Ok(Waveform {
        nets: g.net_names[2..].to_vec(),
        records: records.split_off(2),
        t_end,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPath {
    /// Gate ids from the path's first gate to the output driver.
    pub path: Vec<String>,
    pub delay: f64,
    pub delay_picos: Picos,
}

/// Longest input-to-output path under per-gate delays, summed in integer
/// picoseconds as the simulator does.
pub fn critical_path(n: &Netlist, delays: &DelayModel) -> CriticalPath {
    let g = n.graph();
    let mut arrival: Vec<Picos> = vec![0; g.net_names.len()];
    let mut via: Vec<Option<usize>> = vec![None; g.net_names.len()];
    for &gi in &g.topo {
        let d = delays.gate_delay_picos(n.technology(), &n.gates()[gi]);
        let latest = g.gate_inputs[gi]
            .iter()
            .copied()
            .max_by_key(|&x| (arrival[x], Reverse(x)))
            .expect("gates have inputs");
        let out = g.gate_output[gi];
        arrival[out] = arrival[latest].saturating_add(d);
        via[out] = Some(gi);
    }
    let Some(&end) = g.output_nets.iter().max_by_key(|&&o| (arrival[o], Reverse(o))) else {
        return CriticalPath {
            path: Vec::new(),
            delay: 0.0,
            delay_picos: 0,
        };
    };
    let mut path = Vec::new();
    let mut net = end;
    while let Some(gi) = via[net] {
        path.push(n.gates()[gi].id.clone());
        net = g.gate_inputs[gi]
            .iter()
            .copied()
            .max_by_key(|&x| (arrival[x], Reverse(x)))
            .expect("gates have inputs");
    }
    path.reverse();
    CriticalPath {
        path,
        delay: picos_to_seconds(arrival[end]),
        delay_picos: arrival[end],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::{decompose_fanin, gen_mux, gen_ripple_adder, parse_netlist, Gate, Technology};
    use crate::GateKind;

    fn inverter() -> Netlist {
        parse_netlist("name inv\ninput a\noutput y\ngate g NOT in=a out=y\n").unwrap()
    }

    #[test]
    fn not_gate_transport() {
        let n = inverter();
        let mut s = Stimulus::constant([("a", false)]);
        s.push(10e-6, "a", true).unwrap();
        let w = simulate(&n, &s, 20e-6, &DelayModel::default()).unwrap();
        assert_eq!(w.records("y").unwrap(), &[(0, true), (10_450_000, false)]);
        assert_eq!(w.records("a").unwrap(), &[(0, false), (10_000_000, true)]);
        assert_eq!(
            w.to_csv(),
            "time_us,net,level\n0.000000,a,0\n0.000000,y,1\n10.000000,a,1\n10.450000,y,0\n"
        );
    }

    #[test]
    fn transport_keeps_short_pulses() {
        let n = inverter();
        let mut s = Stimulus::constant([("a", false)]);
        s.push(1e-6, "a", true).unwrap();
        s.push(1.1e-6, "a", false).unwrap();
        let w = simulate(&n, &s, 5e-6, &DelayModel::default()).unwrap();
        assert_eq!(
            w.records("y").unwrap(),
            &[(0, true), (1_450_000, false), (1_550_000, true)]
        );
    }

    #[test]
    fn end_time_cuts_events() {
        let n = inverter();
        let mut s = Stimulus::constant([("a", false)]);
        s.push(10e-6, "a", true).unwrap();
        let w = simulate(&n, &s, 10.2e-6, &DelayModel::default()).unwrap();
        assert_eq!(w.final_level("y"), Some(true));
        assert_eq!(w.final_level("a"), Some(true));
    }

    #[test]
    fn errors() {
        let n = inverter();
        let d = DelayModel::default();
        assert!(simulate(&n, &Stimulus::new(), 1e-6, &d).is_err());
        assert!(simulate(&n, &Stimulus::constant([("a", false)]), -1.0, &d).is_err());
        assert!(simulate(&n, &Stimulus::constant([("a", false), ("y", true)]), 1.0, &d).is_err());
        let mut s = Stimulus::new();
        s.push(2e-6, "a", true).unwrap();
        assert!(s.push(1e-6, "a", false).is_err());
        assert!(s.push(f64::NAN, "a", false).is_err());
    }

    #[test]
    fn stimulus_csv() {
        let s = Stimulus::parse_csv("time_us,net,level\n0,a,0\n10, a ,1\n").unwrap();
        assert_eq!(s.events().len(), 2);
        assert_eq!(s.last_time(), 10_000_000);
        assert_eq!(Stimulus::parse_csv(&s.to_csv()).unwrap(), s);
        let line = |t: &str| match Stimulus::parse_csv(t) {
            Err(Error::Parse(p)) => p.line,
            other => panic!("{other:?}"),
        };
        assert_eq!(line("time,net,level\n"), 1);
        assert_eq!(line("time_us,net,level\n0,a,0\n1,a,2\n"), 3);
        assert_eq!(line("time_us,net,level\n0,a,0\nx,a,1\n"), 3);
        assert_eq!(line("time_us,net,level\n5,a,0\n1,a,1\n"), 3);
        assert_eq!(line("time_us,net,level\n-1,a,0\n"), 2);
    }

    fn adder_inputs(bits: usize, a: u64, b: u64, cin: bool) -> Vec<bool> {
        let mut v: Vec<bool> = (0..bits).map(|i| a >> i & 1 == 1).collect();
        v.extend((0..bits).map(|i| b >> i & 1 == 1));
        v.push(cin);
        v
    }

    #[test]
    fn adder_steady_state() {
        let n = gen_ripple_adder(16).unwrap();
        let out = steady_state(&n, &adder_inputs(16, 0xFFFF, 1, false)).unwrap();
        assert!(out[..16].iter().all(|&b| !b));
        assert!(out[16]);
    }

    #[test]
    fn mux_select() {
        let n = gen_mux(16).unwrap();
        let mut v = vec![true, false, true, false];
        v.extend((0..16).map(|i| i == 5));
        assert_eq!(steady_state(&n, &v).unwrap(), vec![true]);
        v[4 + 5] = false;
        assert_eq!(steady_state(&n, &v).unwrap(), vec![false]);
    }

    #[test]
    fn no_changes_equals_steady_state() {
        let n = gen_ripple_adder(4).unwrap();
        let lv = adder_inputs(4, 9, 7, true);
        let s = Stimulus::constant(n.inputs().iter().map(String::as_str).zip(lv.iter().copied()));
        let w = simulate(&n, &s, 1e-3, &DelayModel::default()).unwrap();
        let ss = steady_state(&n, &lv).unwrap();
        for (o, l) in n.outputs().iter().zip(ss) {
            assert_eq!(w.records(o).unwrap(), &[(0, l)]);
        }
    }

    #[test]
    fn critical_path_examples() {
        let d = DelayModel::default();
        let cp = critical_path(&inverter(), &d);
        assert_eq!(cp.path, vec!["g"]);
        assert_eq!(cp.delay_picos, 450_000);

        let ins: Vec<String> = (0..16).map(|i| format!("x{i}")).collect();
        let or16 = Netlist::new(
            "or16",
            Technology::Rtl,
            ins.clone(),
            vec!["y".into()],
            vec![Gate::new("g", GateKind::Or, ins, "y")],
        )
        .unwrap();
        assert_eq!(critical_path(&or16, &d).delay_picos, 600_000);
        let split = decompose_fanin(&or16, 5).unwrap();
        let cp = critical_path(&split, &d);
        assert_eq!(cp.delay_picos, 1_200_000);
        assert_eq!(cp.path.len(), 2);
        assert_eq!(cp.path.last().unwrap(), "g");
    }

    #[test]
    fn adder_carry_ripple_settles_within_bound() {
        let n = gen_ripple_adder(16).unwrap();
        let d = DelayModel::default();
        let cp = critical_path(&n, &d);
        // Per bit: AND2 then OR3 on the carry chain; the last sum bit adds
        // NOT, AND3 and OR4 after the incoming carry.
        assert_eq!(cp.delay_picos, 15 * 1_050_000 + 450_000 + 450_000 + 600_000);
        let zeros = adder_inputs(16, 0xFFFF, 0, false);
        let mut s = Stimulus::constant(n.inputs().iter().map(String::as_str).zip(zeros.iter().copied()));
        s.push(10e-6, "b0", true).unwrap();
        let w = simulate(&n, &s, 100e-6, &d).unwrap();
        for o in n.outputs() {
            assert!(w.last_change(o).unwrap() <= 10_000_000 + cp.delay_picos);
        }
        assert_eq!(w.final_level("cout"), Some(true));
        assert_eq!(w.final_level("s15"), Some(false));
        assert!(w.last_change("s15").unwrap() > 10_000_000 + 14 * 1_050_000);
    }
}
