use crate::netlist::{Gate, Technology};
use crate::GateKind;

/// Simulation time unit: picoseconds.
pub type Picos = u64;

pub const PICOS_PER_SECOND: f64 = 1e12;

pub fn seconds_to_picos(s: f64) -> Picos {
    (s * PICOS_PER_SECOND).round() as Picos
}

pub fn picos_to_seconds(p: Picos) -> f64 {
    p as f64 / PICOS_PER_SECOND
}

/// Fan-in independent RTL cell delays (seconds).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RtlDelays {
    pub nand_and: f64,
    pub nor_or: f64,
    pub not: f64,
}

/// Piecewise-linear CMOS delay curve through `(fan_in, seconds)` anchors.
/// Below the first and above the last anchor the end segments extrapolate.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayCurve {
    pub anchors: Vec<(f64, f64)>,
}

impl DelayCurve {
    pub fn at(&self, fan_in: usize) -> f64 {
        let x = fan_in as f64;
        let a = &self.anchors;
        let seg = a.windows(2).position(|w| x <= w[1].0).unwrap_or(a.len() - 2);
        let ((x0, y0), (x1, y1)) = (a[seg], a[seg + 1]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

/// Per-gate transport delays for both technologies.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayModel {
    pub rtl: RtlDelays,
    /// NAND and AND gates.
    pub cmos_nand: DelayCurve,
    /// NOR, OR and NOT gates use `cmos_nor` except NOT, which uses the NAND
    /// curve at fan-in 1.
    pub cmos_nor: DelayCurve,
}

impl Default for DelayModel {
    /// RTL opamp-cell delays and CMOS anchors at 3, 10 and 1000 inputs.
    fn default() -> Self {
        Self {
            rtl: RtlDelays {
                nand_and: 0.45e-6,
                nor_or: 0.60e-6,
                not: 0.45e-6,
            },
            cmos_nand: DelayCurve {
                anchors: vec![(3.0, 0.47e-6), (10.0, 0.54e-6), (1000.0, 0.65e-6)],
            },
            cmos_nor: DelayCurve {
                anchors: vec![(3.0, 0.50e-6), (10.0, 0.52e-6), (1000.0, 0.66e-6)],
            },
        }
    }
}

impl DelayModel {
    pub fn rtl_delay(&self, kind: GateKind) -> f64 {
        match kind {
            GateKind::Nand | GateKind::And => self.rtl.nand_and,
            GateKind::Nor | GateKind::Or => self.rtl.nor_or,
            GateKind::Not => self.rtl.not,
        }
    }

    pub fn cmos_delay(&self, kind: GateKind, fan_in: usize) -> f64 {
        match kind {
            GateKind::Nand | GateKind::And => self.cmos_nand.at(fan_in),
            GateKind::Nor | GateKind::Or => self.cmos_nor.at(fan_in),
            GateKind::Not => self.cmos_nand.at(1),
        }
    }

    pub fn delay(&self, tech: Technology, kind: GateKind, fan_in: usize) -> f64 {
        match tech {
            Technology::Rtl => self.rtl_delay(kind),
            Technology::Cmos => self.cmos_delay(kind, fan_in),
        }
    }

    /// Delay of a netlist gate, honoring its override.
    pub fn gate_delay(&self, tech: Technology, gate: &Gate) -> f64 {
        gate.delay_override
            .unwrap_or_else(|| self.delay(tech, gate.kind, gate.fan_in()))
    }

    pub fn gate_delay_picos(&self, tech: Technology, gate: &Gate) -> Picos {
        seconds_to_picos(self.gate_delay(tech, gate))
    }
}
