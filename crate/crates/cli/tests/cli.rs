use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rtlogic::netlist::{gen_mux, parse_netlist, Netlist};
use rtlogic::sim::{critical_path, steady_state, DelayModel, Stimulus};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rtlogic"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn rtlogic")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gate_nand2_window() {
    let o = run(&["gate", "--fn", "nand", "--n", "2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("window     (0.3333, 0.6667)"), "{out}");
    assert!(out.contains("m          1.000000"), "{out}");
    // Truth summary: 0 and 1 high inputs give 1, both high gives 0.
    assert!(out.contains("2            0.666667     0"), "{out}");
}

#[test]
fn gate_nor10_window() {
    let o = run(&["gate", "--fn", "nor", "--n", "10"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("window     (0.0000, 0.0556)"), "{out}");
    assert!(out.contains("m          0.125000"), "{out}");
    assert!(out.contains("..."), "large fan-in prints first and last rows only");
}

#[test]
fn gate_rejects_unsupported_function() {
    let o = run(&["gate", "--fn", "xor", "--n", "2"]);
    assert_eq!(code(&o), 64);
    assert!(stderr(&o).contains("unsupported function"));
}

#[test]
fn gate_bad_values_are_usage_errors() {
    assert_eq!(code(&run(&["gate", "--fn", "nand", "--n", "4", "--m", "-1"])), 64);
    assert_eq!(code(&run(&["gate", "--fn", "not", "--n", "2"])), 64);
    assert_eq!(code(&run(&["gate", "--fn", "nand", "--n", "x"])), 64);
    assert_eq!(code(&run(&[])), 64);
}

#[test]
fn gate_infeasible_threshold_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let profile = dir.path().join("narrow.profile");
    // A first-stage inverter that cannot reach any threshold inside the
    // NOR10 window.
    std::fs::write(&profile, "inverter_vth_min = 0.3\ninverter_vth_max = 0.7\n").unwrap();
    let o = run(&["gate", "--fn", "nor", "--n", "10", "--profile", s(&profile)]);
    assert_eq!(code(&o), 2, "{}{}", stdout(&o), stderr(&o));
    assert!(stderr(&o).contains("infeasible"));
}

#[test]
fn gate_writes_cell_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nand3.cell");
    let o = run(&["gate", "--fn", "nand", "--n", "3", "--device", "opamp", "-o", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let cell = rtlogic::cell::GateCellConfig::parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(cell.n, 3);
    assert!(stdout(&o).contains("device     opamp"));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
    assert_eq!(code(&run(&["mc", "--help"])), 0);
}

#[test]
fn compile_expression_to_two_gates() {
    let o = run(&["compile", "--expr", "a&b|c", "--tech", "rtl"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let n = parse_netlist(&stdout(&o)).unwrap();
    let inv = n.inventory();
    assert_eq!(n.gates().len(), 2);
    assert_eq!(inv[&(rtlogic::GateKind::And, 2)], 1);
    assert_eq!(inv[&(rtlogic::GateKind::Or, 2)], 1);
}

#[test]
fn compile_requires_exactly_one_source() {
    assert_eq!(code(&run(&["compile", "--tech", "rtl"])), 64);
    assert_eq!(code(&run(&["compile", "--expr", "a", "--table", "x.tt"])), 64);
}

#[test]
fn compile_parse_error_has_location() {
    let o = run(&["compile", "--expr", "a & (b |"]);
    assert_eq!(code(&o), 65);
    assert!(stderr(&o).contains("<expr>:1:"), "{}", stderr(&o));
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("bad.tt");
    std::fs::write(&t, "a b\n01 1\n1x 0\n").unwrap();
    let o = run(&["compile", "--table", s(&t)]);
    assert_eq!(code(&o), 65);
    assert!(stderr(&o).contains("bad.tt:3:"), "{}", stderr(&o));
}

fn equivalent_on(a: &Netlist, b: &Netlist, vectors: impl Iterator<Item = Vec<bool>>) {
    for v in vectors {
        let la = steady_state(a, &v).unwrap();
        let lb = steady_state(b, &v).unwrap();
        assert_eq!(la, lb, "{v:?}");
    }
}

#[test]
fn compile_mux_table_to_cmos() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mux.net");
    let o = run(&[
        "compile",
        "--table",
        s(&data("mux16.tt")),
        "--tech",
        "cmos",
        "--fanin-cap",
        "5",
        "-o",
        s(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let n = parse_netlist(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(n.gates().iter().all(|g| g.fan_in() <= 5));
    let reference = gen_mux(16).unwrap();
    assert_eq!(n.inputs(), reference.inputs());
    // Every select with one-hot, all-high and alternating data words.
    let words = [0u32, 0xffff, 0xaaaa, 0x5555, 0x0001, 0x8000];
    let vectors = (0..16u32).flat_map(|sel| {
        words.iter().map(move |w| {
            let mut v: Vec<bool> = (0..4).map(|j| sel >> j & 1 == 1).collect();
            v.extend((0..16).map(|i| w >> i & 1 == 1));
            v
        })
    });
    equivalent_on(&n, &reference, vectors);
}

#[test]
fn gen_and_sim_adder_pulses() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("a.net");
    let wave = dir.path().join("wave.csv");
    assert_eq!(code(&run(&["gen", "adder", "--bits", "16", "-o", s(&net)])), 0);
    let o = run(&[
        "sim",
        "--netlist",
        s(&net),
        "--stim",
        s(&data("fig8.stim")),
        "-o",
        s(&wave),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));

    let adder = parse_netlist(&std::fs::read_to_string(&net).unwrap()).unwrap();
    let stim = Stimulus::parse_csv(&std::fs::read_to_string(data("fig8.stim")).unwrap()).unwrap();
    let csv = std::fs::read_to_string(&wave).unwrap();
    let mut rows = csv.lines();
    assert_eq!(rows.next(), Some("time_us,net,level"));
    let records: Vec<(f64, String, bool)> = rows
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].to_string(), f[2] == "1")
        })
        .collect();

    // Final levels agree with integer addition of the last input vector.
    let mut last = std::collections::HashMap::new();
    for e in stim.events() {
        last.insert(e.net.clone(), e.level);
    }
    let word = |p: &str| (0..16).fold(0u32, |acc, i| acc | (u32::from(last[&format!("{p}{i}")]) << i));
    let sum = word("a") + word("b") + u32::from(last["cin"]);
    let final_level = |net: &str| records.iter().rev().find(|r| r.1 == net).map(|r| r.2).unwrap();
    for i in 0..16 {
        assert_eq!(final_level(&format!("s{i}")), sum >> i & 1 == 1, "s{i}");
    }
    assert_eq!(final_level("cout"), sum >> 16 & 1 == 1);

    // Nothing changes later than the critical path after the last edge.
    let cp = critical_path(&adder, &DelayModel::default()).delay * 1e6;
    let last_edge = stim.last_time() as f64 * 1e-6;
    assert!(records.iter().all(|r| r.0 <= last_edge + cp + 1e-6));

    // Carry out rises once per a-pulse, after a ripple from the first edge.
    let cout: Vec<&(f64, String, bool)> = records.iter().filter(|r| r.1 == "cout").collect();
    let first_rise = cout.iter().find(|r| r.2).unwrap().0;
    assert!((first_rise - 26.8).abs() < 1e-9, "{first_rise}");
    assert!(cout.iter().any(|r| !r.2 && r.0 > first_rise));
}

#[test]
fn sim_missing_file_is_io_error() {
    let o = run(&[
        "sim",
        "--netlist",
        "/nonexistent/a.net",
        "--stim",
        s(&data("fig8.stim")),
    ]);
    assert_eq!(code(&o), 66);
}

#[test]
fn mc_fig2_band() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("mc.csv");
    let args = [
        "mc",
        "--n",
        "100",
        "--tol",
        "0.10",
        "--trials",
        "10000",
        "--seed",
        "42",
        "-o",
        s(&csv),
    ];
    let o = run(&args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    let max: f64 = out
        .lines()
        .find(|l| l.starts_with("max |dV0|"))
        .and_then(|l| l.split_whitespace().nth(2))
        .unwrap()
        .parse()
        .unwrap();
    assert!((0.05..=0.15).contains(&max), "{max}");
    let samples = std::fs::read_to_string(&csv).unwrap();
    assert!(samples.starts_with("trial,delta_pct\n"));
    assert_eq!(samples.lines().count(), 10_001);
    // Deterministic given identical flags.
    assert_eq!(stdout(&run(&args)), out);
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), samples);
}

#[test]
fn mc_rejects_bad_tolerance() {
    assert_eq!(code(&run(&["mc", "--n", "10", "--tol", "1.5"])), 64);
    assert_eq!(code(&run(&["mc", "--n", "10", "--tol", "0.1", "--k", "11"])), 64);
}

#[test]
fn compare_mux_area_direction() {
    let dir = tempfile::tempdir().unwrap();
    let rtl = dir.path().join("mux_rtl.net");
    let cmos = dir.path().join("mux_cmos.net");
    let csv = dir.path().join("cmp.csv");
    assert_eq!(code(&run(&["gen", "mux", "--size", "16", "-o", s(&rtl)])), 0);
    assert_eq!(
        code(&run(&["gen", "mux", "--size", "16", "--tech", "cmos", "-o", s(&cmos)])),
        0
    );
    let o = run(&["compare", "--a", s(&rtl), "--b", s(&cmos), "--csv", s(&csv)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("PASS RTL area < CMOS area"), "{}", stdout(&o));
    let table = std::fs::read_to_string(&csv).unwrap();
    let area = table.lines().find(|l| l.starts_with("area_um2,")).unwrap();
    let delta: f64 = area.rsplit(',').next().unwrap().parse().unwrap();
    assert!(delta < 0.0);
}

#[test]
fn power_nor10_calibration() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("nor.net");
    std::fs::write(
        &net,
        "name nor10\ntech rtl\ninput x0 x1 x2 x3 x4 x5 x6 x7 x8 x9\noutput y\n\
         gate g NOR in=x0,x1,x2,x3,x4,x5,x6,x7,x8,x9 out=y\n",
    )
    .unwrap();
    let o = run(&["power", "--netlist", s(&net)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("power 10.600000 uW"), "{}", stdout(&o));
}

#[test]
fn repro_single_script() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["repro", "table2", "--out-dir", s(dir.path())]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| !l.starts_with("FAIL")));
    assert!(dir.path().join("table2.csv").exists());
    assert_eq!(code(&run(&["repro", "table9"])), 64);
}
