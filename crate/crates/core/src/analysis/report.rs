//! Side-by-side comparison of two netlists.

use std::fmt::Write as _;

use super::power::{power_estimate, Activity, PowerModel};
use crate::error::Result;
use crate::netlist::{component_stats, AreaModel, Netlist, Technology};
use crate::sim::{critical_path, DelayModel};

/// Models used to measure a netlist.
#[derive(Debug, Clone, PartialEq)]
pub struct Models {
    pub area: AreaModel,
    pub delay: DelayModel,
    pub power: PowerModel,
    pub activity: Activity,
}

impl Default for Models {
    fn default() -> Self {
        Self {
            area: AreaModel::default(),
            delay: DelayModel::default(),
            power: PowerModel::default(),
            activity: Activity::AllHigh,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metrics {
    pub name: String,
    pub technology: Technology,
    pub gates: usize,
    pub memristors: usize,
    pub transistors: usize,
    pub opamps: usize,
    pub area_um2: f64,
    pub delay_s: f64,
    pub power_w: f64,
}

pub fn measure(n: &Netlist, models: &Models) -> Result<Metrics> {
    let s = component_stats(n, &models.area);
    Ok(Metrics {
        name: n.name().to_string(),
        technology: n.technology(),
        gates: s.gate_count(),
        memristors: s.memristor_count,
        transistors: s.transistor_count,
        opamps: s.opamp_count,
        area_um2: s.area_um2,
        delay_s: critical_path(n, &models.delay).delay,
        power_w: power_estimate(n, &models.power, &models.activity)?,
    })
}

/// `a - b` for every metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Delta {
    pub gates: i64,
    pub memristors: i64,
    pub transistors: i64,
    pub opamps: i64,
    pub area_um2: f64,
    pub delay_s: f64,
    pub power_w: f64,
}

impl std::ops::Neg for Delta {
    type Output = Delta;

    fn neg(self) -> Delta {
        Delta {
            gates: -self.gates,
            memristors: -self.memristors,
            transistors: -self.transistors,
            opamps: -self.opamps,
            area_um2: -self.area_um2,
            delay_s: -self.delay_s,
            power_w: -self.power_w,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expectation {
    pub claim: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub a: Metrics,
    pub b: Metrics,
    pub delta: Delta,
    /// Directional checks, present when the pair is a known RTL/CMOS
    /// example (`mux16` or `adder16` in both technologies).
    pub expectations: Vec<Expectation>,
}

fn diff(a: usize, b: usize) -> i64 {
    a as i64 - b as i64
}

fn expectations(a: &Metrics, b: &Metrics) -> Vec<Expectation> {
    let (rtl, cmos) = match (a.technology, b.technology) {
        (Technology::Rtl, Technology::Cmos) => (a, b),
        (Technology::Cmos, Technology::Rtl) => (b, a),
        _ => return Vec::new(),
    };
    let base = |name: &str| name.trim_end_matches(|c: char| !c.is_ascii_digit()).to_string();
    let kind = base(&rtl.name);
    if kind != base(&cmos.name) {
        return Vec::new();
    }
    let check = |claim: &str, passed: bool| Expectation {
        claim: claim.to_string(),
        passed,
    };
    match kind.as_str() {
        "mux16" => vec![
            check("RTL area < CMOS area", rtl.area_um2 < cmos.area_um2),
            check("RTL delay < CMOS delay", rtl.delay_s < cmos.delay_s),
            check("CMOS power < RTL power", cmos.power_w < rtl.power_w),
        ],
        "adder16" => vec![
            check("CMOS area < RTL area", cmos.area_um2 < rtl.area_um2),
            check("CMOS power < RTL power", cmos.power_w < rtl.power_w),
        ],
        _ => Vec::new(),
    }
}

pub fn compare_report(a: &Netlist, b: &Netlist, models: &Models) -> Result<Report> {
    let a = measure(a, models)?;
    let b = measure(b, models)?;
    let delta = Delta {
        gates: diff(a.gates, b.gates),
        memristors: diff(a.memristors, b.memristors),
        transistors: diff(a.transistors, b.transistors),
        opamps: diff(a.opamps, b.opamps),
        area_um2: a.area_um2 - b.area_um2,
        delay_s: a.delay_s - b.delay_s,
        power_w: a.power_w - b.power_w,
    };
    let expectations = expectations(&a, &b);
    Ok(Report {
        a,
        b,
        delta,
        expectations,
    })
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.expectations.iter().all(|e| e.passed)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<14} {:>16} {:>16} {:>16}",
            "metric", self.a.name, self.b.name, "a - b"
        );
        let _ = writeln!(
            s,
            "{:<14} {:>16} {:>16} {:>16}",
            "technology",
            self.a.technology.as_str(),
            self.b.technology.as_str(),
            "-"
        );
        let d = &self.delta;
        let ints = [
            ("gates", self.a.gates, self.b.gates, d.gates),
            ("memristors", self.a.memristors, self.b.memristors, d.memristors),
            ("transistors", self.a.transistors, self.b.transistors, d.transistors),
            ("opamps", self.a.opamps, self.b.opamps, d.opamps),
        ];
        for (k, a, b, d) in ints {
            let _ = writeln!(s, "{k:<14} {a:>16} {b:>16} {d:>16}");
        }
        let reals = [
            ("area_um2", self.a.area_um2, self.b.area_um2, d.area_um2),
            ("delay_us", self.a.delay_s * 1e6, self.b.delay_s * 1e6, d.delay_s * 1e6),
            ("power_uw", self.a.power_w * 1e6, self.b.power_w * 1e6, d.power_w * 1e6),
        ];
        for (k, a, b, d) in reals {
            let _ = writeln!(s, "{k:<14} {a:>16.6} {b:>16.6} {d:>16.6}");
        }
        for e in &self.expectations {
            let _ = writeln!(s, "{} {}", if e.passed { "PASS" } else { "FAIL" }, e.claim);
        }
        s.push_str("note: noise margins are divider-node margins of the cell model, not transistor-level values\n");
        s
    }

    /// CSV `metric,a,b,delta`.
    pub fn to_csv(&self) -> String {
        let d = &self.delta;
        let mut s = String::from("metric,a,b,delta\n");
        let _ = writeln!(s, "name,{},{},", self.a.name, self.b.name);
        let _ = writeln!(
            s,
            "technology,{},{},",
            self.a.technology.as_str(),
            self.b.technology.as_str()
        );
        let _ = writeln!(s, "gates,{},{},{}", self.a.gates, self.b.gates, d.gates);
        let _ = writeln!(
            s,
            "memristors,{},{},{}",
            self.a.memristors, self.b.memristors, d.memristors
        );
        let _ = writeln!(
            s,
            "transistors,{},{},{}",
            self.a.transistors, self.b.transistors, d.transistors
        );
        let _ = writeln!(s, "opamps,{},{},{}", self.a.opamps, self.b.opamps, d.opamps);
        let _ = writeln!(
            s,
            "area_um2,{:e},{:e},{:e}",
            self.a.area_um2, self.b.area_um2, d.area_um2
        );
        let _ = writeln!(s, "delay_s,{:e},{:e},{:e}", self.a.delay_s, self.b.delay_s, d.delay_s);
        let _ = writeln!(s, "power_w,{:e},{:e},{:e}", self.a.power_w, self.b.power_w, d.power_w);
        s
    }
}
