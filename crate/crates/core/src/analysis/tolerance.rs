//! Resistor-tolerance Monte Carlo on the divider node.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analog::{divider_output_general, DividerConfig};
use crate::cell::GateCellConfig;
use crate::error::{arg_err, Result};
use crate::threshold::EXHAUSTIVE_MAX_FAN_IN;

/// How the perturbed resistors of one trial are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PerturbationMode {
    /// One uniform factor per trial shared by all perturbed resistors, as
    /// for a global process shift.
    #[default]
    Common,
    /// An independent uniform factor per resistor.
    Independent,
}

impl PerturbationMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PerturbationMode::Common => "common",
            PerturbationMode::Independent => "independent",
        }
    }
}

impl std::str::FromStr for PerturbationMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "common" => Ok(PerturbationMode::Common),
            "independent" => Ok(PerturbationMode::Independent),
            other => Err(format!("unknown perturbation mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationSpec {
    /// Relative half-width of the uniform band, e.g. 0.10.
    pub tolerance: f64,
    /// Input resistors perturbed per trial; `None` perturbs all of them.
    pub count_perturbed: Option<usize>,
    pub trials: usize,
    pub seed: u64,
    pub mode: PerturbationMode,
}

impl PerturbationSpec {
    pub fn new(tolerance: f64, trials: usize, seed: u64) -> Self {
        Self {
            tolerance,
            count_perturbed: None,
            trials,
            seed,
            mode: PerturbationMode::default(),
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if !(0.0..1.0).contains(&self.tolerance) {
            return arg_err(format!("tolerance must be in [0, 1), got {}", self.tolerance));
        }
        if self.trials == 0 {
            return arg_err("at least one trial is required");
        }
        if let Some(k) = self.count_perturbed {
            if k > n {
                return arg_err(format!("cannot perturb {k} of {n} resistors"));
            }
        }
        Ok(())
    }

    fn k(&self, n: usize) -> usize {
        self.count_perturbed.unwrap_or(n)
    }

    /// Generator for one trial: the seed selects the family, the trial
    /// index the stream, so any subset of trials can be replayed.
    fn rng(&self, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial as u64);
        rng
    }

    /// Perturbed input resistances for one trial.
    fn resistances(&self, c: &DividerConfig, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut r = vec![c.r_input; c.n];
        let k = self.k(c.n);
        if self.tolerance == 0.0 || k == 0 {
            return r;
        }
        let chosen: Vec<usize> = if k == c.n {
            (0..c.n).collect()
        } else {
            index::sample(rng, c.n, k).into_vec()
        };
        let lo = 1.0 - self.tolerance;
        let hi = 1.0 + self.tolerance;
        let common = rng.random_range(lo..=hi);
        for i in chosen {
            let f = match self.mode {
                PerturbationMode::Common => common,
                PerturbationMode::Independent => rng.random_range(lo..=hi),
            };
            r[i] = c.r_input * f;
        }
        r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sensitivity {
    pub nominal: f64,
    /// Largest absolute percentage change over all trials.
    pub max_pct_change: f64,
    /// Mean absolute percentage change.
    pub mean_pct_change: f64,
    /// Signed percentage change per trial, in trial order.
    pub samples: Vec<f64>,
}

impl Sensitivity {
    /// Samples as CSV `trial,delta_pct`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("trial,delta_pct\n");
        for (i, d) in self.samples.iter().enumerate() {
            s.push_str(&format!("{i},{d:.9}\n"));
        }
        s
    }
}

fn pct_change(nominal: f64, v: f64) -> f64 {
    if nominal == 0.0 {
        if v == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        100.0 * (v - nominal) / nominal
    }
}

fn voltages(c: &DividerConfig, levels: &[bool]) -> Vec<f64> {
    levels.iter().map(|&b| if b { c.v_high } else { c.v_low }).collect()
}

fn check(c: &DividerConfig, levels: &[bool], spec: &PerturbationSpec) -> Result<()> {
    c.validate()?;
    if levels.len() != c.n {
        return arg_err(format!("expected {} input levels, got {}", c.n, levels.len()));
    }
    spec.validate(c.n)
}

/// Percentage change of the divider node when input resistors drift within
/// the tolerance band. Trials run in parallel; results are reduced in trial
/// order, so the output depends only on `spec`.
pub fn perturb_sensitivity(c: &DividerConfig, levels: &[bool], spec: &PerturbationSpec) -> Result<Sensitivity> {
    check(c, levels, spec)?;
    let volts = voltages(c, levels);
    let nominal = divider_output_general(&vec![c.r_input; c.n], c.r0(), &volts)?;
    let samples = (0..spec.trials)
        .into_par_iter()
        .map(|t| {
            let r = spec.resistances(c, &mut spec.rng(t));
            Ok(pct_change(nominal, divider_output_general(&r, c.r0(), &volts)?))
        })
        .collect::<Result<Vec<f64>>>()?;
    let max_pct_change = samples.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let mean_pct_change = samples.iter().map(|d| d.abs()).sum::<f64>() / samples.len() as f64;
    Ok(Sensitivity {
        nominal,
        max_pct_change,
        mean_pct_change,
        samples,
    })
}

/// Largest absolute percentage change attainable when every input resistor
/// may move anywhere in the band: the node is pushed up (down) by lowering
/// the resistors of inputs above (below) it and raising the others.
pub fn analytic_worst_case(c: &DividerConfig, levels: &[bool], tolerance: f64) -> Result<f64> {
    check(c, levels, &PerturbationSpec::new(tolerance, 1, 0))?;
    let volts = voltages(c, levels);
    let nominal = divider_output_general(&vec![c.r_input; c.n], c.r0(), &volts)?;
    let extreme = |up: bool| -> Result<f64> {
        let mut v0 = nominal;
        // The favourable corner depends on which inputs sit above the node;
        // iterate until that partition is stable.
        for _ in 0..c.n + 2 {
            let r: Vec<f64> = volts
                .iter()
                .map(|&v| {
                    let pull_up = v > v0;
                    if pull_up == up {
                        c.r_input * (1.0 - tolerance)
                    } else {
                        c.r_input * (1.0 + tolerance)
                    }
                })
                .collect();
            let next = divider_output_general(&r, c.r0(), &volts)?;
            if next == v0 {
                break;
            }
            v0 = next;
        }
        Ok(v0)
    };
    let hi = pct_change(nominal, extreme(true)?).abs();
    let lo = pct_change(nominal, extreme(false)?).abs();
    Ok(hi.max(lo))
}

/// Input vectors exercised by [`logic_failure_rate`]: all of them up to the
/// exhaustive fan-in, otherwise one random placement per high-input count.
fn failure_vectors(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<bool>> {
    if n <= EXHAUSTIVE_MAX_FAN_IN {
        return (0..1usize << n)
            .map(|r| (0..n).map(|i| r >> i & 1 == 1).collect())
            .collect();
    }
    (0..=n)
        .map(|h| {
            let mut v = vec![false; n];
            for i in index::sample(rng, n, h) {
                v[i] = true;
            }
            v
        })
        .collect()
}

/// Fraction of (trial, input vector) samples whose perturbed divider
/// voltage makes the cell output differ from its boolean function.
pub fn logic_failure_rate(cell: &GateCellConfig, spec: &PerturbationSpec) -> Result<f64> {
    cell.validate()?;
    let c = &cell.divider;
    spec.validate(c.n)?;
    let counts = (0..spec.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = spec.rng(t);
            let r = spec.resistances(c, &mut rng);
            let vectors = failure_vectors(c.n, &mut rng);
            let mut fails = 0usize;
            for v in &vectors {
                let v0 = divider_output_general(&r, c.r0(), &voltages(c, v))?;
                if cell.decide(v0) != cell.function.eval(v) {
                    fails += 1;
                }
            }
            Ok((fails, vectors.len()))
        })
        .collect::<Result<Vec<(usize, usize)>>>()?;
    let (fails, total) = counts.iter().fold((0usize, 0usize), |(f, t), (a, b)| (f + a, t + b));
    Ok(fails as f64 / total as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell::build_cell;
    use crate::profile::{DeviceChoice, Profile};
    use crate::GateKind;

    #[test]
    fn zero_tolerance_is_zero() {
        let c = DividerConfig::new(10, 1.0);
        let s = perturb_sensitivity(&c, &[true; 10], &PerturbationSpec::new(0.0, 50, 1)).unwrap();
        assert!(s.samples.iter().all(|&d| d == 0.0));
        assert_eq!(s.max_pct_change, 0.0);
    }

    #[test]
    fn analytic_worst_case_matches_closed_form() {
        let c = DividerConfig::new(100, 1.0);
        let w = analytic_worst_case(&c, &[true; 100], 0.10).unwrap();
        // n / (n + 0.9) against n / (n + 1).
        let oracle = 100.0 * ((100.0 / 100.9) / (100.0 / 101.0) - 1.0);
        assert!((w - oracle).abs() < 1e-12, "{w} vs {oracle}");
        assert!((w - 0.0991).abs() < 1e-4);
    }

    #[test]
    fn deterministic_and_bounded() {
        let c = DividerConfig::new(20, 0.5);
        let levels: Vec<bool> = (0..20).map(|i| i % 3 == 0).collect();
        for mode in [PerturbationMode::Common, PerturbationMode::Independent] {
            let spec = PerturbationSpec {
                count_perturbed: Some(7),
                mode,
                ..PerturbationSpec::new(0.2, 300, 9)
            };
            let a = perturb_sensitivity(&c, &levels, &spec).unwrap();
            let b = perturb_sensitivity(&c, &levels, &spec).unwrap();
            assert_eq!(a, b);
            let bound = analytic_worst_case(&c, &levels, 0.2).unwrap();
            assert!(a.max_pct_change <= bound + 1e-9);
            assert!(a.max_pct_change > 0.0);
        }
    }

    #[test]
    fn rejects_bad_specs() {
        let c = DividerConfig::new(4, 1.0);
        let spec = PerturbationSpec {
            count_perturbed: Some(5),
            ..PerturbationSpec::new(0.1, 10, 0)
        };
        assert!(perturb_sensitivity(&c, &[true; 4], &spec).is_err());
        assert!(perturb_sensitivity(&c, &[true; 4], &PerturbationSpec::new(1.0, 10, 0)).is_err());
        assert!(perturb_sensitivity(&c, &[true; 4], &PerturbationSpec::new(0.1, 0, 0)).is_err());
        assert!(perturb_sensitivity(&c, &[true; 3], &PerturbationSpec::new(0.1, 1, 0)).is_err());
    }

    #[test]
    fn csv_dump() {
        let c = DividerConfig::new(3, 1.0);
        let s = perturb_sensitivity(&c, &[true, false, true], &PerturbationSpec::new(0.1, 3, 5)).unwrap();
        let csv = s.to_csv();
        assert!(csv.starts_with("trial,delta_pct\n0,"));
        assert_eq!(csv.lines().count(), 4);
    }

    #[test]
    fn nand2_is_robust() {
        let p = Profile::default().with_device(DeviceChoice::Inverter);
        let cell = build_cell(GateKind::Nand, 2, &p).unwrap();
        let rate = logic_failure_rate(&cell, &PerturbationSpec::new(0.10, 200, 3)).unwrap();
        assert_eq!(rate, 0.0);
        assert_eq!(
            logic_failure_rate(&cell, &PerturbationSpec::new(0.0, 5, 3)).unwrap(),
            0.0
        );
    }
}
