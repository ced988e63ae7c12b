use std::fmt;
use std::str::FromStr;

/// Boolean function realized by a single gate or cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    Nand,
    Nor,
    And,
    Or,
    Not,
}

impl GateKind {
    pub const ALL: [GateKind; 5] = [
        GateKind::Nand,
        GateKind::Nor,
        GateKind::And,
        GateKind::Or,
        GateKind::Not,
    ];

    pub fn eval(self, inputs: &[bool]) -> bool {
        match self {
            GateKind::And => inputs.iter().all(|&b| b),
            GateKind::Nand => !inputs.iter().all(|&b| b),
            GateKind::Or => inputs.iter().any(|&b| b),
            GateKind::Nor => !inputs.iter().any(|&b| b),
            GateKind::Not => !inputs[0],
        }
    }

    /// Output as a function of the number of high inputs out of `n`.
    pub fn eval_count(self, high: usize, n: usize) -> bool {
        match self {
            GateKind::And => high == n,
            GateKind::Nand => high != n,
            GateKind::Or => high > 0,
            GateKind::Nor | GateKind::Not => high == 0,
        }
    }

    /// NAND, NOR and NOT invert the comparator decision.
    pub fn is_inverting(self) -> bool {
        matches!(self, GateKind::Nand | GateKind::Nor | GateKind::Not)
    }

    /// True for functions whose comparator detects "all inputs high".
    pub fn detects_all_high(self) -> bool {
        matches!(self, GateKind::Nand | GateKind::And)
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Nand => "NAND",
            GateKind::Nor => "NOR",
            GateKind::And => "AND",
            GateKind::Or => "OR",
            GateKind::Not => "NOT",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "NAND" => Ok(GateKind::Nand),
            "NOR" => Ok(GateKind::Nor),
            "AND" => Ok(GateKind::And),
            "OR" => Ok(GateKind::Or),
            "NOT" => Ok(GateKind::Not),
            _ => Err(format!("unknown gate kind `{s}`")),
        }
    }
}
