//! Command-line front end. Every data file is a comma-separated table with
//! a header row, `%.17g`-style numbers and LF line endings, written next to
//! a `.manifest` file recording what the run used.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::databus::{self, equivalence_report};
use crate::dynamics::{closed_form_deviation, QuantizedOracle, QubitInitial};
use crate::hilbert::FockTruncation;
use crate::observables::{kappa_from_joint, kappa_q_series, KappaTrace};
use crate::params::{
    classify_drive, derive_couplings, CircuitConfig, DerivedCouplings, CONFIG_KEYS,
};
use crate::photon_states::{coherent, even_cat, squeezed_vacuum, FieldState, DEFAULT_TAIL_BOUND};
use crate::Error;

/// Mean photon number of every figure field.
pub const FIGURE_NBAR: f64 = 7.0;
pub const FIG3_TAU_MAX: f64 = 50.0;
pub const FIG3_TAU_STEP: f64 = 0.02;
/// τ values at which each figure trace is re-derived by dense propagation.
pub const FIG3_SPOT_TAUS: [f64; 5] = [0.5, 5.0, 12.5, 25.0, 50.0];
pub const FIG3_SPOT_TOL: f64 = 1e-8;
pub const DEFAULT_TOL: f64 = 0.01;
/// Fock levels kept for the plasma mode in `equiv`.
pub const EQUIV_FOCK_LEVELS: usize = 8;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "qubitflux",
    version,
    about = "Charge qubits coupled through a large Josephson junction",
    after_help = "QUBITFLUX_SEED is reserved; no command draws random numbers."
)]
pub struct Cli {
    /// Circuit parameter file (`key = value` lines, `#` comments).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output CSV path. Defaults to `<command>.csv`.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Largest photon-number probability dropped by field truncation.
    #[arg(long, global = true, value_name = "X", default_value_t = DEFAULT_TAIL_BOUND)]
    pub tail_bound: f64,
    /// Relative tolerance for drive-frequency matching.
    #[arg(long, global = true, value_name = "X", default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Also write a gnuplot script next to the CSV.
    #[arg(long, global = true)]
    pub gnuplot: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Photon-number distributions of the coherent, cat and squeezed fields.
    Fig2,
    /// κ traces for the four field states, θ = π/4.
    Fig3,
    /// Derived couplings and drive classification along one parameter.
    Sweep(SweepArgs),
    /// Classical versus eliminated-bus coupling and the dynamical check.
    Equiv,
    /// Print the derived couplings of a config.
    Couplings,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Config key to vary.
    #[arg(long)]
    pub key: String,
    #[arg(long)]
    pub from: f64,
    #[arg(long)]
    pub to: f64,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
}

/// Failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Invariant(_) => EXIT_INVARIANT,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn invariant(message: String) -> Failure {
    Failure {
        code: EXIT_INVARIANT,
        message,
    }
}

fn usage(message: String) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message,
    }
}

/// `%.17g`: 17 significant digits, trailing zeros dropped, exponent form
/// below 1e-4 and from 1e17.
pub fn fmt_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        trim_zeros(&format!("{x:.*}", (16 - exp) as usize)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }
}

/// Ordered `key = value` record written next to each CSV.
struct Manifest {
    entries: Vec<(String, String)>,
}

impl Manifest {
    fn new(command: &str, cfg: &CircuitConfig, opts: &Cli) -> Self {
        let mut m = Self {
            entries: Vec::new(),
        };
        m.put("command", command);
        for key in CONFIG_KEYS {
            m.num(&format!("config.{key}"), cfg.get(key).expect("known key"));
        }
        m.put(
            "config.source",
            opts.config
                .as_ref()
                .map_or("built-in demo".into(), |p| p.display().to_string()),
        );
        m.num("tail_bound", opts.tail_bound);
        m.num("tol", opts.tol);
        m
    }

    fn put(&mut self, key: &str, value: impl Into<String>) {
        self.entries.push((key.to_string(), value.into()));
    }

    fn num(&mut self, key: &str, value: f64) {
        self.put(key, fmt_g17(value));
    }

    fn render(&self) -> String {
        self.entries.iter().fold(String::new(), |mut s, (k, v)| {
            let _ = writeln!(s, "{k} = {v}");
            s
        })
    }
}

fn with_extension(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

/// Writes the CSV, the optional gnuplot script and the manifest.
fn emit(
    opts: &Cli,
    out: &Path,
    table: &Table,
    mut manifest: Manifest,
    plot: impl FnOnce(&str) -> String,
    started: Instant,
) -> Result<(), Failure> {
    write_file(out, &table.render())?;
    manifest.put("output.csv", out.display().to_string());
    if opts.gnuplot {
        let gp = with_extension(out, "gp");
        let name = out
            .file_name()
            .map_or(String::new(), |n| n.to_string_lossy().into_owned());
        write_file(&gp, &plot(&name))?;
        manifest.put("output.gnuplot", gp.display().to_string());
    }
    let mpath = with_extension(out, "manifest");
    manifest.put("output.manifest", mpath.display().to_string());
    manifest.put(
        "wall_clock_seconds",
        format!("{:.3}", started.elapsed().as_secs_f64()),
    );
    write_file(&mpath, &manifest.render())
}

fn gnuplot_header(csv: &str, title: &str, xlabel: &str, ylabel: &str) -> String {
    format!(
        "set datafile separator ','\nset key autotitle columnhead\nset title '{title}'\n\
         set xlabel '{xlabel}'\nset ylabel '{ylabel}'\ndata = '{csv}'\n"
    )
}

fn load_config(opts: &Cli) -> Result<CircuitConfig, Failure> {
    let cfg = match &opts.config {
        Some(p) => CircuitConfig::from_file(p)?,
        None => CircuitConfig::demo(),
    };
    if !(opts.tail_bound > 0.0 && opts.tail_bound <= crate::hilbert::MAX_TAIL_BOUND) {
        return Err(usage(format!(
            "--tail-bound {} outside (0, 1e-3]",
            opts.tail_bound
        )));
    }
    if !(opts.tol > 0.0 && opts.tol < 0.1) {
        return Err(usage(format!("--tol {} outside (0, 0.1)", opts.tol)));
    }
    Ok(cfg)
}

fn out_path(opts: &Cli, command: &str) -> PathBuf {
    opts.out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{command}.csv")))
}

fn figure_fields(bound: f64) -> Result<[(&'static str, FieldState); 3], Failure> {
    Ok([
        ("coherent", coherent(FIGURE_NBAR, 0.0, bound)?),
        ("cat", even_cat(FIGURE_NBAR, bound)?),
        ("squeezed", squeezed_vacuum(FIGURE_NBAR, 0.0, bound)?),
    ])
}

fn cmd_fig2(opts: &Cli) -> Result<(), Failure> {
    let started = Instant::now();
    let cfg = load_config(opts)?;
    let fields = figure_fields(opts.tail_bound)?;
    for (name, f) in &fields {
        let total: f64 = f.probabilities().iter().sum();
        if (total + f.tail_mass() - 1.0).abs() > 1e-10 || f.tail_mass() >= opts.tail_bound {
            return Err(invariant(format!(
                "{name} field normalization off: {total}"
            )));
        }
        if f.kind().even_only()
            && (1..=f.n_max())
                .step_by(2)
                .any(|n| f.amp(n).norm_sqr() != 0.0)
        {
            return Err(invariant(format!(
                "{name} field populates odd photon numbers"
            )));
        }
    }
    let n_top = fields.iter().map(|(_, f)| f.n_max()).max().unwrap_or(0);
    let mut table = Table::new(&["n", "P_coherent", "P_cat", "P_squeezed"]);
    for n in 0..=n_top {
        let mut row = vec![n.to_string()];
        row.extend(fields.iter().map(|(_, f)| fmt_g17(f.amp(n).norm_sqr())));
        table.push(row);
    }
    let mut manifest = Manifest::new("fig2", &cfg, opts);
    manifest.num("nbar", FIGURE_NBAR);
    manifest.num("coherent.phase", 0.0);
    manifest.num("squeezed.beta", 0.0);
    for (name, f) in &fields {
        manifest.put(&format!("{name}.n_max"), f.n_max().to_string());
        manifest.num(&format!("{name}.tail_mass"), f.tail_mass());
        manifest.num(
            &format!("{name}.mean_photon_number"),
            f.mean_photon_number(),
        );
    }
    let out = out_path(opts, "fig2");
    emit(
        opts,
        &out,
        &table,
        manifest,
        |csv| {
            gnuplot_header(csv, "Photon-number distributions, nbar = 7", "n", "P(n)")
                + "plot for [c=2:4] data using 1:c with impulses lw 2\n"
        },
        started,
    )
}

/// Figure-3 panels: label, qubit phase φ, field.
fn fig3_panels(bound: f64) -> Result<Vec<(&'static str, FieldState)>, Failure> {
    Ok(vec![
        ("kappa_a", coherent(FIGURE_NBAR, FRAC_PI_2, bound)?),
        ("kappa_b", coherent(FIGURE_NBAR, 0.0, bound)?),
        ("kappa_c", even_cat(FIGURE_NBAR, bound)?),
        ("kappa_d", squeezed_vacuum(FIGURE_NBAR, 0.0, bound)?),
    ])
}

pub fn fig3_grid() -> Vec<f64> {
    let n = (FIG3_TAU_MAX / FIG3_TAU_STEP).round() as usize;
    (0..=n).map(|i| i as f64 * FIG3_TAU_STEP).collect()
}

fn cmd_fig3(opts: &Cli) -> Result<(), Failure> {
    let started = Instant::now();
    let cfg = load_config(opts)?;
    let init = QubitInitial::new(FRAC_PI_4, 0.0)?;
    let grid = fig3_grid();
    let panels = fig3_panels(opts.tail_bound)?;
    let mut manifest = Manifest::new("fig3", &cfg, opts);
    manifest.num("nbar", FIGURE_NBAR);
    manifest.num("theta", init.theta());
    manifest.num("phi", init.phi());
    manifest.num("tau_step", FIG3_TAU_STEP);
    manifest.num("tau_max", FIG3_TAU_MAX);
    manifest.put("spot_taus", FIG3_SPOT_TAUS.map(fmt_g17).join(" "));
    manifest.num("spot_tolerance", FIG3_SPOT_TOL);
    manifest.put("fields", "kappa_a coherent phase pi/2; kappa_b coherent phase 0; kappa_c even cat; kappa_d squeezed vacuum beta 0");

    let mut traces = Vec::new();
    for (label, field) in &panels {
        let trace = KappaTrace::quantized(&init, field, &grid)?;
        let oracle = QuantizedOracle::for_field(field)?;
        let dev = closed_form_deviation(&oracle, &init, field, &FIG3_SPOT_TAUS)?;
        let mut kdev = 0.0_f64;
        for state in oracle.evolve(&init, field, &FIG3_SPOT_TAUS)? {
            kdev = kdev
                .max((kappa_from_joint(&state)? - kappa_q_series(&init, field, state.tau)).abs());
        }
        if dev >= FIG3_SPOT_TOL || kdev >= FIG3_SPOT_TOL {
            return Err(invariant(format!(
                "{label}: closed form departs from dense propagation (state {dev:e}, kappa {kdev:e})"
            )));
        }
        manifest.put(&format!("{label}.n_max"), oracle.n_max().to_string());
        manifest.num(&format!("{label}.tail_mass"), field.tail_mass());
        manifest.num(&format!("{label}.oracle_state_distance"), dev);
        manifest.num(&format!("{label}.oracle_kappa_difference"), kdev);
        traces.push(trace);
    }
    let mut table = Table::new(&["tau", "kappa_a", "kappa_b", "kappa_c", "kappa_d"]);
    for (i, &tau) in grid.iter().enumerate() {
        let mut row = vec![fmt_g17(tau)];
        row.extend(traces.iter().map(|t| fmt_g17(t.kappa[i])));
        table.push(row);
    }
    let out = out_path(opts, "fig3");
    emit(
        opts,
        &out,
        &table,
        manifest,
        |csv| {
            gnuplot_header(csv, "Reduced supercurrent", "tau", "kappa")
                + "set multiplot layout 4,1\nset yrange [0:2]\n\
                   do for [c=2:5] { plot data using 1:c with lines }\nunset multiplot\n"
        },
        started,
    )
}

const COUPLING_COLUMNS: [&str; 19] = [
    "eta1",
    "eta2",
    "ebar_j1",
    "ebar_j2",
    "chi12",
    "eps01",
    "eps02",
    "detuning",
    "chi_prime",
    "omega1",
    "omega2",
    "g1",
    "g2",
    "g12",
    "xi1",
    "xi2",
    "xi12_re",
    "xi12_im",
    "drive_freq",
];

fn coupling_values(dc: &DerivedCouplings) -> [f64; 19] {
    [
        dc.eta1,
        dc.eta2,
        dc.ebar_j1,
        dc.ebar_j2,
        dc.chi12,
        dc.eps01,
        dc.eps02,
        dc.detuning,
        dc.chi_prime,
        dc.omega1,
        dc.omega2,
        dc.g1,
        dc.g2,
        dc.g12,
        dc.xi1,
        dc.xi2,
        dc.xi12.re,
        dc.xi12.im,
        dc.drive_freq,
    ]
}

fn cmd_sweep(opts: &Cli, args: &SweepArgs) -> Result<(), Failure> {
    let started = Instant::now();
    let cfg = load_config(opts)?;
    if !CONFIG_KEYS.contains(&args.key.as_str()) {
        return Err(usage(format!(
            "unknown sweep key '{}' (expected one of {})",
            args.key,
            CONFIG_KEYS.join(", ")
        )));
    }
    if args.points == 0 || !args.from.is_finite() || !args.to.is_finite() {
        return Err(usage(
            "sweep needs finite bounds and at least one point".into(),
        ));
    }
    let mut header = vec![args.key.as_str()];
    header.extend(COUPLING_COLUMNS);
    header.extend(["match_kind", "weak_detuning"]);
    let mut table = Table::new(&header);
    for i in 0..args.points {
        let x = if args.points == 1 {
            args.from
        } else {
            args.from + (args.to - args.from) * i as f64 / (args.points - 1) as f64
        };
        let mut c = cfg.clone();
        c.set(&args.key, x)?;
        let dc = derive_couplings(&c)
            .map_err(|e| usage(format!("sweep point {} = {}: {e}", args.key, fmt_g17(x))))?;
        let kind = classify_drive(dc.drive_freq, &dc, opts.tol)?;
        let mut row = vec![fmt_g17(x)];
        row.extend(coupling_values(&dc).map(fmt_g17));
        row.push(kind.as_str().to_string());
        row.push(dc.flags.weak_detuning.to_string());
        table.push(row);
    }
    let mut manifest = Manifest::new("sweep", &cfg, opts);
    manifest.put("sweep.key", args.key.clone());
    manifest.num("sweep.from", args.from);
    manifest.num("sweep.to", args.to);
    manifest.put("sweep.points", args.points.to_string());
    let out = out_path(opts, "sweep");
    let key = args.key.clone();
    emit(
        opts,
        &out,
        &table,
        manifest,
        |csv| {
            gnuplot_header(csv, "Derived couplings", &key, "energy")
                + "plot data using 1:'chi12' with lines, data using 1:'g12' with lines\n"
        },
        started,
    )
}

fn cmd_equiv(opts: &Cli) -> Result<(), Failure> {
    let started = Instant::now();
    let cfg = load_config(opts)?;
    let trunc = FockTruncation::new(EQUIV_FOCK_LEVELS, opts.tail_bound)?;
    let report = equivalence_report(&cfg, trunc)?;
    let mut table = Table::new(&[
        "flux",
        "omega_p_multiplier",
        "chi_classical",
        "chi_quantum",
        "ratio",
        "dyn_distance",
    ]);
    let mut min_occupancy = 1.0_f64;
    for r in report.rows() {
        min_occupancy = min_occupancy.min(r.min_ground_occupancy);
        table.push(
            [
                r.flux,
                r.omega_p_multiplier,
                r.chi_classical,
                r.chi_quantum,
                r.ratio,
                r.dyn_distance,
            ]
            .map(fmt_g17)
            .to_vec(),
        );
    }
    let mut manifest = Manifest::new("equiv", &cfg, opts);
    manifest.put("fock_n_max", EQUIV_FOCK_LEVELS.to_string());
    manifest.put(
        "omega_p_multipliers",
        databus::OMEGA_P_MULTIPLIERS.map(fmt_g17).join(" "),
    );
    manifest.num("flux_sweep_multiplier", databus::SWEEP_MULTIPLIER);
    manifest.put("flux_sweep_points", databus::SWEEP_POINTS.to_string());
    manifest.put(
        "dynamics_samples_per_period",
        databus::DYNAMICS_SAMPLES.to_string(),
    );
    manifest.num("max_qubit_splitting", report.max_splitting);
    manifest.num("ratio_mean", report.ratio_mean);
    manifest.num("ratio_relative_std", report.ratio_rel_std);
    manifest.num("min_bus_ground_occupancy", min_occupancy);
    let out = out_path(opts, "equiv");
    emit(
        opts,
        &out,
        &table,
        manifest,
        |csv| {
            gnuplot_header(csv, "Coupling ratio over flux", "flux", "ratio")
                + "plot data every ::4 using 1:5 with linespoints\n"
        },
        started,
    )
}

fn cmd_couplings(opts: &Cli) -> Result<(), Failure> {
    let cfg = load_config(opts)?;
    let dc = derive_couplings(&cfg)?;
    let kind = classify_drive(dc.drive_freq, &dc, opts.tol)?;
    let mut s = String::new();
    for (k, v) in COUPLING_COLUMNS.iter().zip(coupling_values(&dc)) {
        let _ = writeln!(s, "{k} = {}", fmt_g17(v));
    }
    let _ = writeln!(s, "match_kind = {}", kind.as_str());
    let _ = writeln!(s, "zero_detuning = {}", dc.flags.zero_detuning);
    let _ = writeln!(s, "weak_detuning = {}", dc.flags.weak_detuning);
    match &opts.out {
        Some(p) => write_file(p, &s),
        None => {
            print!("{s}");
            Ok(())
        }
    }
}

/// Runs a parsed command and returns the process exit code.
pub fn execute(cli: &Cli) -> i32 {
    let result = match &cli.command {
        Command::Fig2 => cmd_fig2(cli),
        Command::Fig3 => cmd_fig3(cli),
        Command::Sweep(args) => cmd_sweep(cli, args),
        Command::Equiv => cmd_equiv(cli),
        Command::Couplings => cmd_couplings(cli),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("qubitflux: {}", f.message);
            f.code
        }
    }
}

/// Parses `args` (program name first) and runs.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_OK
            }
        }
    }
}

pub fn run() -> i32 {
    run_from(std::env::args_os())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_matches_printf() {
        // Reference strings from C printf("%.17g").
        let cases = [
            (0.1, "0.10000000000000001"),
            (1.0, "1"),
            (-2.5, "-2.5"),
            (1e-5, "1.0000000000000001e-05"),
            (123456789.0, "123456789"),
            (1e17, "1e+17"),
            (1e16, "10000000000000000"),
            (0.0001, "0.0001"),
            (std::f64::consts::PI, "3.1415926535897931"),
            (6.02214076e23, "6.0221407599999999e+23"),
            (0.0, "0"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_g17(x), want, "{x}");
        }
    }

    #[test]
    fn g17_round_trips() {
        for x in [1.0 / 3.0, 2.0f64.sqrt(), 1e-300, 5e-324, f64::MAX, -7.25e-7] {
            assert_eq!(fmt_g17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn fig3_grid_spacing() {
        let g = fig3_grid();
        assert_eq!(g.len(), 2501);
        assert_eq!(g[0], 0.0);
        assert_eq!(*g.last().unwrap(), 50.0);
    }

    #[test]
    fn table_rendering() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), "2".into()]);
        assert_eq!(t.render(), "a,b\n1,2\n");
    }
}
