//! Threshold devices and feasible threshold windows.
//!
//! A divider-plus-comparator cell realizes a symmetric boolean function when
//! the comparator threshold separates the divider voltages of the input
//! counts that must assert the comparator from those that must not.

use std::fmt;
use std::ops::RangeInclusive;

use crate::analog::{divider_output, DividerConfig};
use crate::error::{arg_err, domain_err, Error, Result};
use crate::GateKind;

/// Boltzmann constant over elementary charge (V/K).
pub const BOLTZMANN_OVER_Q: f64 = 1.380649e-23 / 1.602176634e-19;

/// Largest fan-in accepted by [`window_by_enumeration`].
pub const ENUMERATION_MAX_FAN_IN: usize = 24;
/// Up to this fan-in every input pattern is enumerated, not only every count.
pub const EXHAUSTIVE_MAX_FAN_IN: usize = 12;

/// Symmetric boolean functions a single divider cell may be asked to realize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WindowFunction {
    Nand,
    Nor,
    And,
    Or,
    Not,
    Xor,
}

impl WindowFunction {
    pub fn eval_count(self, high: usize, n: usize) -> bool {
        match self {
            WindowFunction::Xor => high % 2 == 1,
            other => GateKind::from(other).eval_count(high, n),
        }
    }

    /// Whether the comparator should assert for this output value.
    fn comparator_high(self, output: bool) -> bool {
        match self {
            WindowFunction::Nand | WindowFunction::Nor | WindowFunction::Not => !output,
            _ => output,
        }
    }
}

impl From<GateKind> for WindowFunction {
    fn from(k: GateKind) -> Self {
        match k {
            GateKind::Nand => WindowFunction::Nand,
            GateKind::Nor => WindowFunction::Nor,
            GateKind::And => WindowFunction::And,
            GateKind::Or => WindowFunction::Or,
            GateKind::Not => WindowFunction::Not,
        }
    }
}

impl From<WindowFunction> for GateKind {
    /// # Panics
    /// On [`WindowFunction::Xor`], which has no gate kind.
    fn from(f: WindowFunction) -> Self {
        match f {
            WindowFunction::Nand => GateKind::Nand,
            WindowFunction::Nor => GateKind::Nor,
            WindowFunction::And => GateKind::And,
            WindowFunction::Or => GateKind::Or,
            WindowFunction::Not => GateKind::Not,
            WindowFunction::Xor => panic!("XOR is not a gate kind"),
        }
    }
}

/// Open interval `(low, high)` of comparator thresholds that realize
/// `function`. `low >= high` is an infeasible window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdWindow {
    pub low: f64,
    pub high: f64,
    pub function: WindowFunction,
}

impl ThresholdWindow {
    pub fn is_feasible(&self) -> bool {
        self.low < self.high
    }

    pub fn width(&self) -> f64 {
        self.high - self.low
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.low + self.high)
    }

    /// Strict containment; a threshold equal to a bound is rejected.
    pub fn contains(&self, v: f64) -> bool {
        self.low < v && v < self.high
    }
}

impl fmt::Display for ThresholdWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_feasible() {
            write!(f, "({:.4}, {:.4})", self.low, self.high)
        } else {
            write!(f, "infeasible [{:.4} >= {:.4}]", self.low, self.high)
        }
    }
}

fn check_window_args(n: usize, m: f64, v_h: f64, v_l: f64) -> Result<()> {
    DividerConfig {
        n,
        r_input: 1.0,
        m,
        v_high: v_h,
        v_low: v_l,
    }
    .validate()
}

/// NOR window `N m V_L / (1 + N m) < V_th < (V_H + (N-1) V_L) m / (N m + 1)`.
pub fn nor_window(n: usize, m: f64, v_h: f64, v_l: f64) -> Result<ThresholdWindow> {
    check_window_args(n, m, v_h, v_l)?;
    let nf = n as f64;
    let den = nf * m + 1.0;
    Ok(ThresholdWindow {
        low: m * (nf * v_l) / den,
        high: (v_h + (nf - 1.0) * v_l) * m / den,
        function: WindowFunction::Nor,
    })
}

/// NAND window `m (V_L + (N-1) V_H) / (N m + 1) < V_th < m N V_H / (N m + 1)`.
pub fn nand_window(n: usize, m: f64, v_h: f64, v_l: f64) -> Result<ThresholdWindow> {
    check_window_args(n, m, v_h, v_l)?;
    let nf = n as f64;
    let den = nf * m + 1.0;
    Ok(ThresholdWindow {
        low: m * (v_l + (nf - 1.0) * v_h) / den,
        high: m * (nf * v_h) / den,
        function: WindowFunction::Nand,
    })
}

/// Window for any gate kind: AND shares the NAND window, OR and NOT the NOR one.
pub fn gate_window(kind: GateKind, n: usize, m: f64, v_h: f64, v_l: f64) -> Result<ThresholdWindow> {
    let mut w = if kind.detects_all_high() {
        nand_window(n, m, v_h, v_l)?
    } else {
        nor_window(n, m, v_h, v_l)?
    };
    w.function = kind.into();
    Ok(w)
}

/// Reference ratio `m = 1/(N-2)`, which puts the NAND lower bound at
/// `(V_H + V_L)/2` when `V_L = 0`. Fan-in 2 uses `m = 1`.
pub fn select_m(n: usize) -> Result<f64> {
    match n {
        0 | 1 => arg_err(format!("select_m needs fan-in >= 2, got {n}")),
        2 => Ok(1.0),
        _ => Ok(1.0 / (n - 2) as f64),
    }
}

/// Threshold window found by evaluating the divider for every input
/// pattern (fan-in up to 12) or every high-input count (up to 24).
///
/// Functions that no single threshold separates yield an infeasible window.
pub fn window_by_enumeration(
    n: usize,
    m: f64,
    v_h: f64,
    v_l: f64,
    function: WindowFunction,
) -> Result<ThresholdWindow> {
    check_window_args(n, m, v_h, v_l)?;
    if n > ENUMERATION_MAX_FAN_IN {
        return Err(Error::Capacity {
            what: "enumeration fan-in",
            found: n,
            limit: ENUMERATION_MAX_FAN_IN,
        });
    }
    let cfg = DividerConfig {
        n,
        r_input: 1.0,
        m,
        v_high: v_h,
        v_low: v_l,
    };
    let mut low = f64::NEG_INFINITY;
    let mut high = f64::INFINITY;
    let mut visit = |high_count: usize, v0: f64| {
        if function.comparator_high(function.eval_count(high_count, n)) {
            high = high.min(v0);
        } else {
            low = low.max(v0);
        }
    };
    if n <= EXHAUSTIVE_MAX_FAN_IN {
        let mut levels = vec![false; n];
        for row in 0u32..(1 << n) {
            for (i, l) in levels.iter_mut().enumerate() {
                *l = row >> i & 1 == 1;
            }
            visit(row.count_ones() as usize, divider_output(&cfg, &levels)?);
        }
    } else {
        for k in 0..=n {
            visit(k, cfg.output_for_count(k));
        }
    }
    Ok(ThresholdWindow { low, high, function })
}

/// `phi_s = 2 (k_B T / q) ln(N_a / n_i)`.
pub fn surface_potential(n_a: f64, n_i: f64, temp: f64) -> Result<f64> {
    if !(n_a > 0.0 && n_i > 0.0 && temp > 0.0) {
        return domain_err(format!(
            "surface potential needs positive n_a, n_i, temp (got {n_a}, {n_i}, {temp})"
        ));
    }
    Ok(2.0 * BOLTZMANN_OVER_Q * temp * (n_a / n_i).ln())
}

/// Body-bias threshold model parameters for the NMOS device.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MosfetBiasParams {
    /// Zero-bias threshold voltage (V).
    pub v_tn0: f64,
    /// Substrate bias (V).
    pub v_bs: f64,
    /// Maximum substrate bias (V).
    pub v_bm: f64,
    pub v_bx: f64,
    /// Substrate doping (cm^-3).
    pub n_a: f64,
    /// Intrinsic carrier density (cm^-3).
    pub n_i: f64,
    pub temp: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    /// Narrow-channel shift (V).
    pub c_narrow: f64,
}

impl Default for MosfetBiasParams {
    fn default() -> Self {
        Self {
            v_tn0: 0.37,
            v_bs: 0.0,
            v_bm: -2.5,
            v_bx: -0.2,
            n_a: 1e17,
            n_i: 1.45e10,
            temp: 300.0,
            gamma1: 0.5,
            gamma2: 0.3,
            c_narrow: 0.0,
        }
    }
}

impl MosfetBiasParams {
    pub fn surface_potential(&self) -> Result<f64> {
        surface_potential(self.n_a, self.n_i, self.temp)
    }
}

fn sqrt_term(name: &str, radicand: f64) -> Result<f64> {
    if radicand < 0.0 {
        return domain_err(format!("negative radicand in {name}: {radicand}"));
    }
    Ok(radicand.sqrt())
}

/// `(K1, K2)` body-effect coefficients at surface potential `phi_s`.
pub fn body_coefficients(p: &MosfetBiasParams, phi_s: f64) -> Result<(f64, f64)> {
    let sp = sqrt_term("sqrt(phi_s)", phi_s)?;
    let s_bm = sqrt_term("sqrt(phi_s - V_bm)", phi_s - p.v_bm)?;
    let s_bx = sqrt_term("sqrt(phi_s - V_bx)", phi_s - p.v_bx)?;
    let den = 2.0 * sp * (s_bm - sp) + p.v_bm;
    let k2 = if p.gamma1 == p.gamma2 {
        0.0
    } else {
        if den == 0.0 {
            return domain_err("K2 denominator vanishes");
        }
        (p.gamma1 - p.gamma2) * (s_bx - sp) / den
    };
    let k1 = p.gamma2 - 2.0 * k2 * s_bm;
    Ok((k1, k2))
}

/// Threshold voltage at an explicit surface potential.
pub fn body_bias_vtn_at(p: &MosfetBiasParams, phi_s: f64) -> Result<f64> {
    let (k1, _) = body_coefficients(p, phi_s)?;
    let s_bs = sqrt_term("sqrt(phi_s - V_bs)", phi_s - p.v_bs)?;
    Ok(p.v_tn0 + k1 * (s_bs - phi_s.sqrt()) + p.c_narrow)
}

/// `V_tn = V_tn0 + K1 (sqrt(phi_s - V_bs) - sqrt(phi_s)) + C`, with the
/// surface potential derived from the doping parameters.
pub fn body_bias_vtn(p: &MosfetBiasParams) -> Result<f64> {
    body_bias_vtn_at(p, p.surface_potential()?)
}

/// Substrate bias in `[V_bm, 0]` that yields `target_vtn`, if any.
pub fn bias_for_vtn(p: &MosfetBiasParams, target_vtn: f64) -> Result<Option<f64>> {
    let phi_s = p.surface_potential()?;
    let (k1, _) = body_coefficients(p, phi_s)?;
    if k1 == 0.0 {
        return Ok((target_vtn == p.v_tn0 + p.c_narrow).then_some(0.0));
    }
    let root = phi_s.sqrt() + (target_vtn - p.v_tn0 - p.c_narrow) / k1;
    if root < 0.0 {
        return Ok(None);
    }
    let v_bs = phi_s - root * root;
    Ok((p.v_bm..=0.0).contains(&v_bs).then_some(v_bs))
}

/// Static CMOS inverter parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverterParams {
    pub v_tn: f64,
    /// PMOS threshold (negative).
    pub v_tp: f64,
    pub mu_p_w_p: f64,
    pub mu_n_w_n: f64,
    pub v_dd: f64,
}

impl Default for InverterParams {
    fn default() -> Self {
        Self {
            v_tn: 0.4,
            v_tp: -0.4,
            mu_p_w_p: 1.0,
            mu_n_w_n: 1.0,
            v_dd: 1.0,
        }
    }
}

impl InverterParams {
    /// `r = sqrt(mu_p W_p / (mu_n W_n))`.
    pub fn drive_ratio(&self) -> Result<f64> {
        if !(self.mu_p_w_p > 0.0 && self.mu_n_w_n > 0.0) {
            return domain_err("mobility-width products must be positive");
        }
        Ok((self.mu_p_w_p / self.mu_n_w_n).sqrt())
    }

    fn validate(&self) -> Result<f64> {
        if !(self.v_dd > 0.0) {
            return domain_err(format!("v_dd must be positive, got {}", self.v_dd));
        }
        self.drive_ratio()
    }
}

/// Switching threshold `(V_tn + r (V_DD - |V_tp|)) / (1 + r)`.
pub fn inverter_threshold(p: &InverterParams) -> Result<f64> {
    let r = p.validate()?;
    Ok((p.v_tn + r * (p.v_dd - p.v_tp.abs())) / (1.0 + r))
}

/// NMOS threshold that places the inverter switching point at `v_th`.
pub fn vtn_for_threshold(p: &InverterParams, v_th: f64) -> Result<f64> {
    let r = p.validate()?;
    Ok(v_th * (1.0 + r) - r * (p.v_dd - p.v_tp.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub v_high: f64,
    pub v_low: f64,
    /// Fraction of the window width above its lower bound at which the
    /// inverter threshold is placed.
    pub guard: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            v_high: 1.0,
            v_low: 0.0,
            guard: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub m: f64,
    pub window: ThresholdWindow,
    /// Inverter threshold just above the NAND window's lower bound.
    pub v_th: f64,
    /// NMOS threshold required for `v_th`.
    pub v_tn: f64,
    /// Substrate bias reaching `v_tn`; `None` when unrealizable.
    pub v_bs: Option<f64>,
}

impl SweepRow {
    pub fn realizable(&self) -> bool {
        self.v_bs.is_some()
    }
}

/// Minimum NAND inverter threshold and the NMOS threshold reaching it, per
/// fan-in, with `m = select_m(n)`.
pub fn vtn_vth_sweep(
    n_range: RangeInclusive<usize>,
    inverter_base: &InverterParams,
    bias_base: &MosfetBiasParams,
    cfg: &SweepConfig,
) -> Result<Vec<SweepRow>> {
    if *n_range.start() < 3 || *n_range.end() > 1000 {
        return arg_err(format!(
            "sweep range must lie within [3, 1000], got {}..={}",
            n_range.start(),
            n_range.end()
        ));
    }
    if !(cfg.guard > 0.0 && cfg.guard < 1.0) {
        return arg_err("sweep guard must lie in (0, 1)");
    }
    n_range
        .map(|n| {
            let m = select_m(n)?;
            let window = nand_window(n, m, cfg.v_high, cfg.v_low)?;
            let v_th = window.low + cfg.guard * window.width();
            let v_tn = vtn_for_threshold(inverter_base, v_th)?;
            let v_bs = bias_for_vtn(bias_base, v_tn)?;
            Ok(SweepRow {
                n,
                m,
                window,
                v_th,
                v_tn,
                v_bs,
            })
        })
        .collect()
}
