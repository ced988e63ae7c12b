use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rtlogic::analog::{divider_output, DividerConfig};
use rtlogic::analysis::{
    analytic_worst_case, compare_report, logic_failure_rate, perturb_sensitivity, power_estimate, Activity, Models,
    PerturbationMode, PerturbationSpec, PowerModel,
};
use rtlogic::cell::{build_cell, build_cell_with_m, GateCellConfig, ThresholdDevice};
use rtlogic::netlist::{
    component_stats, decompose_fanin, emit_netlist, gen_mux, gen_ripple_adder, parse_netlist, AreaModel, Netlist,
    Technology,
};
use rtlogic::profile::{DeviceChoice, Profile};
use rtlogic::sim::{critical_path, format_us, seconds_to_picos, simulate, DelayModel, Stimulus};
use rtlogic::synth::{
    minimize, parse_expr, parse_table_source, synthesize_cmos, synthesize_rtl, to_truth_table, Cover, QM_MAX_VARS,
};
use rtlogic::{repro, Error, GateKind};

const EXIT_FAILED_CHECKS: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_PARSE: u8 = 65;
const EXIT_IO: u8 = 66;

/// Resistive threshold logic design kit.
#[derive(Debug, Parser)]
#[command(name = "rtlogic", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Design a single threshold gate cell and print its report.
    Gate(GateArgs),
    /// Compile a Boolean expression or truth table to a netlist.
    Compile(CompileArgs),
    /// Generate an example circuit netlist.
    Gen(GenArgs),
    /// Event-driven simulation of a netlist under a stimulus file.
    Sim(SimArgs),
    /// Resistor tolerance Monte Carlo on a divider node.
    Mc(McArgs),
    /// Compare area, delay and power of two netlists.
    Compare(CompareArgs),
    /// Static power estimate of a netlist.
    Power(PowerArgs),
    /// Run reproduction scripts and print their pass/fail summary.
    Repro(ReproArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Tech {
    Rtl,
    Cmos,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Device {
    Inverter,
    Opamp,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Common,
    Independent,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ActivityArg {
    AllHigh,
    AllLow,
    Random,
}

fn parse_kind(s: &str) -> Result<GateKind, String> {
    s.parse::<GateKind>()
        .map_err(|_| format!("unsupported function `{s}` (expected nand, nor, and, or or not)"))
}

#[derive(Debug, Args)]
struct GateArgs {
    /// Gate function: nand, nor, and, or or not.
    #[arg(long = "fn", value_parser = parse_kind)]
    function: GateKind,
    /// Fan-in.
    #[arg(long)]
    n: usize,
    /// Divider ratio R0/Ri; defaults to the centred-threshold choice.
    #[arg(long, allow_negative_numbers = true)]
    m: Option<f64>,
    /// Device profile file.
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Threshold device, overriding the profile.
    #[arg(long, value_enum)]
    device: Option<Device>,
    /// Write the cell configuration to this file.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["expr", "table"]))]
struct CompileArgs {
    /// Boolean expression over `! & ^ |`, e.g. "a&b|c".
    #[arg(long)]
    expr: Option<String>,
    /// Truth-table file.
    #[arg(long)]
    table: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "rtl")]
    tech: Tech,
    /// Maximum gate fan-in for CMOS output.
    #[arg(long, default_value_t = 5)]
    fanin_cap: usize,
    /// Netlist output file; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[command(subcommand)]
    circuit: Circuit,
}

#[derive(Debug, Subcommand)]
enum Circuit {
    /// Ripple-carry adder.
    Adder {
        #[arg(long)]
        bits: usize,
        #[command(flatten)]
        out: GenOut,
    },
    /// Multiplexer with `size` data inputs.
    Mux {
        #[arg(long)]
        size: usize,
        #[command(flatten)]
        out: GenOut,
    },
}

#[derive(Debug, Args)]
struct GenOut {
    #[arg(long, value_enum, default_value = "rtl")]
    tech: Tech,
    /// Maximum gate fan-in for CMOS output.
    #[arg(long, default_value_t = 5)]
    fanin_cap: usize,
    /// Netlist output file; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimArgs {
    #[arg(long)]
    netlist: PathBuf,
    /// Stimulus CSV with header `time_us,net,level`.
    #[arg(long)]
    stim: PathBuf,
    /// End time in microseconds; defaults to the last stimulus edge plus
    /// the critical path delay plus 1 us.
    #[arg(long, allow_negative_numbers = true)]
    t_end: Option<f64>,
    /// Waveform CSV output file; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct McArgs {
    /// Divider fan-in.
    #[arg(long)]
    n: usize,
    /// Relative tolerance half-width, e.g. 0.10.
    #[arg(long, allow_negative_numbers = true)]
    tol: f64,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Resistors perturbed per trial; all when absent.
    #[arg(long)]
    k: Option<usize>,
    /// Divider ratio R0/Ri.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    m: f64,
    /// Number of high inputs; all when absent.
    #[arg(long)]
    high: Option<usize>,
    #[arg(long, value_enum, default_value = "common")]
    mode: Mode,
    /// Also estimate the logic failure rate of this gate function at fan-in n.
    #[arg(long = "fn", value_parser = parse_kind)]
    function: Option<GateKind>,
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Sample CSV (`trial,delta_pct`) output file.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ActivityArgs {
    /// Input statistics for RTL divider power.
    #[arg(long, value_enum, default_value = "all-high")]
    activity: ActivityArg,
    /// Probability of a high primary input for random activity.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    p: f64,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

impl ActivityArgs {
    fn activity(&self) -> Activity {
        match self.activity {
            ActivityArg::AllHigh => Activity::AllHigh,
            ActivityArg::AllLow => Activity::AllLow,
            ActivityArg::Random => Activity::Random {
                p: self.p,
                samples: self.samples,
                seed: self.seed,
            },
        }
    }
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[command(flatten)]
    activity: ActivityArgs,
    /// Also write the report as CSV `metric,a,b,delta`.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PowerArgs {
    #[arg(long)]
    netlist: PathBuf,
    #[command(flatten)]
    activity: ActivityArgs,
}

#[derive(Debug, Args)]
struct ReproArgs {
    /// Script name or `all`.
    #[arg(default_value = "all")]
    script: String,
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Directory for one `<script>.csv` per script.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Infeasible(_) => EXIT_INFEASIBLE,
            Error::Parse(_) => EXIT_PARSE,
            Error::Argument(_) | Error::Domain(_) | Error::Capacity { .. } => EXIT_USAGE,
        };
        Failure::new(code, e.to_string())
    }
}

type CmdResult = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))
}

/// Reads and parses an input file. Every error raised while parsing is an
/// input error, including structural checks such as cycles.
fn load<T>(path: &Path, parse: impl FnOnce(&str) -> rtlogic::Result<T>) -> Result<T, Failure> {
    let text = read(path)?;
    parse(&text).map_err(|e| parse_failure(&path.display().to_string(), e))
}

fn parse_failure(source: &str, e: Error) -> Failure {
    match e {
        Error::Parse(p) => Failure::new(EXIT_PARSE, format!("{source}:{p}")),
        other => Failure::new(EXIT_PARSE, format!("{source}: {other}")),
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_profile(path: Option<&Path>) -> Result<Profile, Failure> {
    match path {
        Some(p) => load(p, Profile::parse),
        None => Ok(Profile::default()),
    }
}

fn technology(t: Tech) -> Technology {
    match t {
        Tech::Rtl => Technology::Rtl,
        Tech::Cmos => Technology::Cmos,
    }
}

fn check_cap(cap: usize) -> Result<(), Failure> {
    if cap < 2 {
        return Err(Failure::new(
            EXIT_USAGE,
            format!("--fanin-cap must be at least 2, got {cap}"),
        ));
    }
    Ok(())
}

fn stats_summary(n: &Netlist) -> String {
    let s = component_stats(n, &AreaModel::default());
    let mut out = format!(
        "{} ({}): {} gates, {} memristors, {} transistors, {} opamps, area {:.3} um^2\n",
        n.name(),
        n.technology().as_str(),
        s.gate_count(),
        s.memristor_count,
        s.transistor_count,
        s.opamp_count,
        s.area_um2
    );
    for ((kind, fan_in), count) in n.inventory() {
        let _ = writeln!(out, "  {kind}{fan_in} x {count}");
    }
    out
}

/// Rows of the per-high-count truth summary to print.
fn summary_rows(n: usize) -> Vec<Option<usize>> {
    if n <= 8 {
        (0..=n).map(Some).collect()
    } else {
        let mut rows: Vec<Option<usize>> = (0..3).map(Some).collect();
        rows.push(None);
        rows.extend((n - 2..=n).map(Some));
        rows
    }
}

fn gate_report(cell: &GateCellConfig) -> Result<String, Failure> {
    let w = cell.window()?;
    let nm = cell.noise_margin()?;
    let mut s = String::new();
    let _ = writeln!(s, "function   {}", cell.function);
    let _ = writeln!(s, "fan-in     {}", cell.n);
    let _ = writeln!(s, "m          {:.6}", cell.divider.m);
    let _ = writeln!(s, "window     {w}");
    let _ = writeln!(s, "threshold  {:.6} V", cell.effective_threshold);
    let _ = writeln!(s, "margins    low {:.6} V, high {:.6} V", nm.nm_low, nm.nm_high);
    match &cell.device {
        ThresholdDevice::InverterChain {
            stage_thresholds,
            stage_vdds,
        } => {
            let _ = writeln!(s, "device     inverter chain, {} stage(s)", stage_vdds.len());
            for (i, (th, vdd)) in stage_thresholds.iter().zip(stage_vdds).enumerate() {
                let _ = writeln!(s, "  stage {}  vth {:.6} V, vdd {} V", i + 1, th, vdd);
            }
        }
        ThresholdDevice::Opamp {
            v_ref,
            delta,
            inverting_stages,
        } => {
            let _ = writeln!(
                s,
                "device     opamp, v_ref {v_ref:.6} V, delta {delta:.6} V, {inverting_stages} inverting stage(s)"
            );
        }
    }
    let _ = writeln!(s, "delay      {:.3} us", cell.delay * 1e6);
    let _ = writeln!(s, "high_inputs  v0           out");
    for row in summary_rows(cell.n) {
        match row {
            Some(high) => {
                let levels: Vec<bool> = (0..cell.n).map(|i| i < high).collect();
                let v0 = divider_output(&cell.divider, &levels)?;
                let _ = writeln!(s, "{high:<12} {v0:<12.6} {}", u8::from(cell.decide(v0)));
            }
            None => s.push_str("...\n"),
        }
    }
    Ok(s)
}

fn cmd_gate(a: &GateArgs) -> CmdResult {
    let mut profile = load_profile(a.profile.as_deref())?;
    if let Some(d) = a.device {
        profile = profile.with_device(match d {
            Device::Inverter => DeviceChoice::Inverter,
            Device::Opamp => DeviceChoice::Opamp,
        });
    }
    let cell = match a.m {
        Some(m) => build_cell_with_m(a.function, a.n, m, &profile)?,
        None => build_cell(a.function, a.n, &profile)?,
    };
    print!("{}", gate_report(&cell)?);
    if let Some(p) = &a.output {
        write_out(Some(p), &cell.emit())?;
    }
    Ok(0)
}

fn cmd_compile(a: &CompileArgs) -> CmdResult {
    if matches!(a.tech, Tech::Cmos) {
        check_cap(a.fanin_cap)?;
    }
    let (cover, vars): (Cover, Vec<String>) = match (&a.expr, &a.table) {
        (Some(text), None) => {
            let e = parse_expr(text).map_err(|e| parse_failure("<expr>", e))?;
            let t = to_truth_table(&e).map_err(|e| parse_failure("<expr>", e))?;
            (minimize(&t)?, e.vars)
        }
        (None, Some(path)) => {
            let src = load(path, parse_table_source)?;
            let cover = if src.table.num_vars() <= QM_MAX_VARS {
                minimize(&src.table)?
            } else {
                src.on_cubes
            };
            (cover, src.table.vars().to_vec())
        }
        _ => {
            return Err(Failure::new(
                EXIT_USAGE,
                "exactly one of --expr and --table is required",
            ))
        }
    };
    let net = match a.tech {
        Tech::Rtl => synthesize_rtl(&cover, &vars)?,
        Tech::Cmos => synthesize_cmos(&cover, &vars, a.fanin_cap)?,
    };
    let text = emit_netlist(&net);
    match &a.output {
        Some(p) => {
            write_out(Some(p), &text)?;
            print!("{}", stats_summary(&net));
        }
        None => {
            print!("{text}");
            eprint!("{}", stats_summary(&net));
        }
    }
    Ok(0)
}

fn cmd_gen(a: &GenArgs) -> CmdResult {
    let (net, out) = match &a.circuit {
        Circuit::Adder { bits, out } => (gen_ripple_adder(*bits)?, out),
        Circuit::Mux { size, out } => (gen_mux(*size)?, out),
    };
    let net = match out.tech {
        Tech::Rtl => net,
        Tech::Cmos => {
            check_cap(out.fanin_cap)?;
            decompose_fanin(&net, out.fanin_cap)?.with_technology(technology(out.tech))
        }
    };
    let text = emit_netlist(&net);
    match &out.output {
        Some(p) => {
            write_out(Some(p), &text)?;
            print!("{}", stats_summary(&net));
        }
        None => print!("{text}"),
    }
    Ok(0)
}

fn cmd_sim(a: &SimArgs) -> CmdResult {
    if let Some(t) = a.t_end {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Failure::new(
                EXIT_USAGE,
                format!("--t-end must be a nonnegative time, got {t}"),
            ));
        }
    }
    let net = load(&a.netlist, parse_netlist)?;
    let stim = load(&a.stim, Stimulus::parse_csv)?;
    let delays = DelayModel::default();
    let t_end = match a.t_end {
        Some(us) => us * 1e-6,
        None => {
            let last = stim.last_time() as f64 * 1e-12;
            last + critical_path(&net, &delays).delay + 1e-6
        }
    };
    let wave = simulate(&net, &stim, t_end, &delays)?;
    write_out(a.output.as_deref(), &wave.to_csv())?;
    if a.output.is_some() {
        let changes: usize = wave
            .nets()
            .iter()
            .filter_map(|n| wave.records(n))
            .map(|r| r.len())
            .sum();
        println!(
            "simulated {} to {} us: {} nets, {} records",
            net.name(),
            format_us(seconds_to_picos(t_end)),
            wave.nets().len(),
            changes
        );
    }
    Ok(0)
}

fn cmd_mc(a: &McArgs) -> CmdResult {
    let profile = load_profile(a.profile.as_deref())?;
    let high = a.high.unwrap_or(a.n);
    if high > a.n {
        return Err(Failure::new(EXIT_USAGE, format!("--high {high} exceeds --n {}", a.n)));
    }
    let c = DividerConfig {
        n: a.n,
        r_input: profile.r_input,
        m: a.m,
        v_high: profile.v_high,
        v_low: profile.v_low,
    };
    c.validate()?;
    let spec = PerturbationSpec {
        tolerance: a.tol,
        count_perturbed: a.k,
        trials: a.trials,
        seed: a.seed,
        mode: match a.mode {
            Mode::Common => PerturbationMode::Common,
            Mode::Independent => PerturbationMode::Independent,
        },
    };
    spec.validate(a.n)?;
    let levels: Vec<bool> = (0..a.n).map(|i| i < high).collect();
    let s = perturb_sensitivity(&c, &levels, &spec)?;
    let worst = analytic_worst_case(&c, &levels, a.tol)?;
    println!("n              {}", a.n);
    println!("high inputs    {high}");
    println!("tolerance      {}", a.tol);
    println!("perturbed      {}", a.k.unwrap_or(a.n));
    println!("mode           {}", spec.mode.as_str());
    println!("trials         {}", a.trials);
    println!("seed           {}", a.seed);
    println!("nominal v0     {:.9} V", s.nominal);
    println!("max |dV0|      {:.6} %", s.max_pct_change);
    println!("mean |dV0|     {:.6} %", s.mean_pct_change);
    println!("worst case     {worst:.6} %");
    if let Some(kind) = a.function {
        let cell = build_cell(kind, a.n, &profile)?;
        let rate = logic_failure_rate(&cell, &spec)?;
        println!("failure rate   {rate:.6} ({kind}{})", a.n);
    }
    if let Some(p) = &a.output {
        write_out(Some(p), &s.to_csv())?;
    }
    Ok(0)
}

fn cmd_compare(a: &CompareArgs) -> CmdResult {
    let na = load(&a.a, parse_netlist)?;
    let nb = load(&a.b, parse_netlist)?;
    let models = Models {
        activity: a.activity.activity(),
        ..Models::default()
    };
    let r = compare_report(&na, &nb, &models)?;
    print!("{}", r.to_text());
    if let Some(p) = &a.csv {
        write_out(Some(p), &r.to_csv())?;
    }
    Ok(0)
}

fn cmd_power(a: &PowerArgs) -> CmdResult {
    let net = load(&a.netlist, parse_netlist)?;
    let p = power_estimate(&net, &PowerModel::default(), &a.activity.activity())?;
    print!("{}", stats_summary(&net));
    println!("power {:.6} uW ({:e} W)", p * 1e6, p);
    Ok(0)
}

fn cmd_repro(a: &ReproArgs) -> CmdResult {
    let names: Vec<&str> = if a.script == "all" {
        repro::SCRIPTS.to_vec()
    } else if repro::SCRIPTS.contains(&a.script.as_str()) {
        vec![a.script.as_str()]
    } else {
        return Err(Failure::new(
            EXIT_USAGE,
            format!(
                "unknown script `{}`; expected all or one of {}",
                a.script,
                repro::SCRIPTS.join(", ")
            ),
        ));
    };
    let profile = load_profile(a.profile.as_deref())?;
    if let Some(dir) = &a.out_dir {
        fs::create_dir_all(dir).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", dir.display())))?;
    }
    let mut all_passed = true;
    for name in names {
        let out = repro::run(name, &profile)?;
        print!("{}", out.summary());
        all_passed &= out.passed();
        if let Some(dir) = &a.out_dir {
            write_out(Some(&dir.join(format!("{name}.csv"))), &out.csv)?;
        }
    }
    Ok(if all_passed { 0 } else { EXIT_FAILED_CHECKS })
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Gate(a) => cmd_gate(a),
        Command::Compile(a) => cmd_compile(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Sim(a) => cmd_sim(a),
        Command::Mc(a) => cmd_mc(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Power(a) => cmd_power(a),
        Command::Repro(a) => cmd_repro(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("rtlogic: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
