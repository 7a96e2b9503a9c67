//! Command-line frontend for the dual-NOPA coherent feedback analysis.
//!
//! Exit codes: 0 success (or stable), 2 unstable (stability subcommand),
//! 64 usage or parameter validation, 70 numerical failure, 74 I/O failure,
//! 1 any other error.

mod manifest;
mod output;

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dual_nopa::{
    build_state_space, closed_form_stable, entanglement_region, find_boundary, optimal_phi,
    reproduce_table, run_equivalence, squeezing_spectra, stability_report, sweep, AxisSpec,
    Engine, Error as CoreError, GridValue, PhiBranch, Quantity, RateParams, RawConfig, SweepVar,
    SystemConfig, TableKind, TableRow, TABLE_TOL,
};

use manifest::{Format, ManifestEngine, ResolvedConfig, RunManifest};
use output::{emit, sig9};

/// Failure with its process exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, bad config file, out-of-range parameters (64).
    Usage(String),
    /// Numerical trouble: singular resolvent, non-convergence, unstable
    /// configuration where stability is required (70).
    Numerical(String),
    /// Filesystem or stream errors (74).
    Io(String),
    /// Anything else (1).
    Other(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 64,
            Failure::Numerical(_) => 70,
            Failure::Io(_) => 74,
            Failure::Other(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Numerical(m) | Failure::Io(m) | Failure::Other(m) => m,
        }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidConfig { .. } | CoreError::InvalidAxis(_) => {
                Failure::Usage(e.to_string())
            }
            CoreError::SingularResolvent { .. }
            | CoreError::EigenNonConvergence { .. }
            | CoreError::Unstable { .. }
            | CoreError::NoEntanglement { .. } => Failure::Numerical(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "dual-nopa",
    version,
    about = "Stability, squeezing spectra and entanglement analysis of a dual-NOPA coherent feedback network"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide closed-loop stability both numerically and in closed form.
    ///
    /// Exits 0 when stable, 2 when unstable.
    Stability(StabilityCmd),
    /// Two-mode squeezing spectra at one or more frequencies.
    Spectra(SpectraCmd),
    /// Optimal output phase compensation for the configured channel phases.
    Optimize(OptimizeCmd),
    /// Entanglement boundary roots and the surviving intervals of m.
    Boundary(BoundaryCmd),
    /// Evaluate a quantity over a grid of phase variables.
    Sweep(SweepCmd),
    /// Reproduce the published loss tables with pass/fail verdicts.
    Tables(TablesCmd),
    /// Cross-validate the closed-form and state-space routes on random
    /// stable configurations.
    Validate(ValidateCmd),
}

/// Network parameters; explicit flags override `--config` file values,
/// which override the built-in defaults (x = 0.4, y = 1, α = 1, reference
/// rates, no phase shifts).
#[derive(Args, Clone, Debug)]
struct ConfigArgs {
    /// Pump ratio x in [0, 1] (epsilon = x·gamma_r).
    #[arg(long, allow_negative_numbers = true)]
    x: Option<f64>,
    /// Decay divisor y in (0, 1] (gamma = gamma_r/y).
    #[arg(long, allow_negative_numbers = true)]
    y: Option<f64>,
    /// Beamsplitter transmission rate alpha in (0, 1].
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Amplification-loss coefficient per unit x, rad/s.
    #[arg(long, allow_negative_numbers = true)]
    kappa_scale: Option<f64>,
    /// Amplification-loss rate override, rad/s (beats kappa-scale).
    #[arg(long, allow_negative_numbers = true)]
    kappa: Option<f64>,
    /// Reference decay rate, rad/s.
    #[arg(long, allow_negative_numbers = true)]
    gamma_r: Option<f64>,
    /// Channel phase shift theta1, radians.
    #[arg(long, allow_negative_numbers = true)]
    theta1: Option<f64>,
    /// Channel phase shift theta2, radians.
    #[arg(long, allow_negative_numbers = true)]
    theta2: Option<f64>,
    /// Output phase shifter phi1, radians.
    #[arg(long, allow_negative_numbers = true)]
    phi1: Option<f64>,
    /// Output phase shifter phi2, radians.
    #[arg(long, allow_negative_numbers = true)]
    phi2: Option<f64>,
    /// JSON parameter file with keys matching the flag names; unknown
    /// keys are rejected.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<SystemConfig, Failure> {
        let mut raw = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
                serde_json::from_str::<RawConfig>(&text).map_err(|e| {
                    Failure::Usage(format!("invalid config file {}: {e}", path.display()))
                })?
            }
            None => RawConfig::default(),
        };
        if let Some(v) = self.x {
            raw.x = v;
        }
        if let Some(v) = self.y {
            raw.y = v;
        }
        if let Some(v) = self.alpha {
            raw.alpha = v;
        }
        if let Some(v) = self.kappa_scale {
            raw.kappa_scale = Some(v);
        }
        if let Some(v) = self.kappa {
            raw.kappa = Some(v);
        }
        if let Some(v) = self.gamma_r {
            raw.gamma_r = Some(v);
        }
        if let Some(v) = self.theta1 {
            raw.theta1 = v;
        }
        if let Some(v) = self.theta2 {
            raw.theta2 = v;
        }
        if let Some(v) = self.phi1 {
            raw.phi1 = v;
        }
        if let Some(v) = self.phi2 {
            raw.phi2 = v;
        }
        Ok(SystemConfig::validate(&raw)?)
    }
}

/// Output destination and manifest emission, shared by every subcommand.
#[derive(Args, Clone, Debug)]
struct OutputArgs {
    /// Write results here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the resolved run manifest (JSON) to this path.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct StabilityCmd {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct SpectraCmd {
    #[command(flatten)]
    config: ConfigArgs,
    /// Evaluation frequencies, rad/s (repeatable or comma-separated).
    #[arg(long, value_delimiter = ',', default_values_t = [0.0], allow_negative_numbers = true)]
    omega: Vec<f64>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct OptimizeCmd {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct BoundaryCmd {
    #[command(flatten)]
    config: ConfigArgs,
    /// Verification samples per reported interval.
    #[arg(long, default_value_t = 100)]
    resolution: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct SweepCmd {
    #[command(flatten)]
    config: ConfigArgs,
    /// Quantity to evaluate.
    #[arg(long, value_enum)]
    quantity: QuantityArg,
    /// Axis spec `var:lo:hi:count` with var one of m, n, phi; one or two.
    #[arg(long = "axis", required = true)]
    axes: Vec<String>,
    /// Evaluation engine; `both` cross-checks them and emits closed form.
    #[arg(long, value_enum, default_value_t = EngineArg::ClosedForm)]
    engine: EngineArg,
    /// Emit dB values (differences of dBs for difference quantities).
    #[arg(long)]
    db: bool,
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct TablesCmd {
    /// Which table to reproduce.
    #[arg(long, value_enum, default_value_t = WhichArg::Both)]
    which: WhichArg,
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct ValidateCmd {
    /// Random stable configurations per loss mode.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Sample-stream seed.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Text => Format::Text,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum QuantityArg {
    #[value(name = "v_ps")]
    VPs,
    #[value(name = "v_im")]
    VIm,
    F,
    G,
    H,
    #[value(name = "v_ps_minus_v_nops")]
    VPsMinusVNops,
    #[value(name = "v_im_minus_v_ps")]
    VImMinusVPs,
}

impl QuantityArg {
    fn core(self) -> Quantity {
        match self {
            QuantityArg::VPs => Quantity::VPs,
            QuantityArg::VIm => Quantity::VIm,
            QuantityArg::F => Quantity::F,
            QuantityArg::G => Quantity::G,
            QuantityArg::H => Quantity::H,
            QuantityArg::VPsMinusVNops => Quantity::VPsMinusVNops,
            QuantityArg::VImMinusVPs => Quantity::VImMinusVPs,
        }
    }

    fn name(self) -> &'static str {
        match self {
            QuantityArg::VPs => "v_ps",
            QuantityArg::VIm => "v_im",
            QuantityArg::F => "f",
            QuantityArg::G => "g",
            QuantityArg::H => "h",
            QuantityArg::VPsMinusVNops => "v_ps_minus_v_nops",
            QuantityArg::VImMinusVPs => "v_im_minus_v_ps",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum EngineArg {
    ClosedForm,
    StateSpace,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum WhichArg {
    Transmission,
    Amplification,
    Both,
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.code()
        }
    }
}

fn run(command: Command) -> Result<i32, Failure> {
    match command {
        Command::Stability(cmd) => cmd_stability(cmd),
        Command::Spectra(cmd) => cmd_spectra(cmd),
        Command::Optimize(cmd) => cmd_optimize(cmd),
        Command::Boundary(cmd) => cmd_boundary(cmd),
        Command::Sweep(cmd) => cmd_sweep(cmd),
        Command::Tables(cmd) => cmd_tables(cmd),
        Command::Validate(cmd) => cmd_validate(cmd),
    }
}

fn write_manifest(
    subcommand: &str,
    cfg: &SystemConfig,
    axes: &[AxisSpec],
    output: &OutputArgs,
    format: Format,
    engine: ManifestEngine,
) -> Result<(), Failure> {
    let Some(path) = &output.manifest else {
        return Ok(());
    };
    let manifest = RunManifest {
        subcommand: subcommand.into(),
        config: ResolvedConfig::from_validated(cfg),
        axes: axes.iter().map(|&a| a.into()).collect(),
        out: output.out.as_ref().map(|p| p.display().to_string()),
        format,
        engine,
    };
    let json = serde_json::to_string_pretty(&manifest)
        .map_err(|e| Failure::Other(format!("manifest serialization: {e}")))?;
    fs::write(path, json + "\n")
        .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

fn to_pretty_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Failure::Other(format!("serialization: {e}")))
}

fn cmd_stability(cmd: StabilityCmd) -> Result<i32, Failure> {
    let cfg = cmd.config.resolve()?;
    write_manifest(
        "stability",
        &cfg,
        &[],
        &cmd.output,
        Format::Json,
        ManifestEngine::ClosedForm,
    )?;
    let report = stability_report(&cfg)?;
    emit(cmd.output.out.as_deref(), &to_pretty_json(&report)?)?;
    Ok(if report.hurwitz { 0 } else { 2 })
}

/// Row schema of the spectra output.
#[derive(Serialize)]
struct SpectraRow {
    omega: f64,
    v_plus: f64,
    v_minus: f64,
    v_total: f64,
    v_plus_db: f64,
    entangled: bool,
}

fn cmd_spectra(cmd: SpectraCmd) -> Result<i32, Failure> {
    let cfg = cmd.config.resolve()?;
    write_manifest(
        "spectra",
        &cfg,
        &[],
        &cmd.output,
        cmd.format.into(),
        ManifestEngine::StateSpace,
    )?;
    let (stable, margin) = closed_form_stable(&cfg);
    if !stable {
        return Err(Failure::Numerical(format!(
            "configuration is unstable (margin {margin}); spectra are undefined"
        )));
    }
    let ss = build_state_space(&cfg);
    let mut rows = Vec::with_capacity(cmd.omega.len());
    for &omega in &cmd.omega {
        let s = squeezing_spectra(&ss, omega)?;
        rows.push(SpectraRow {
            omega,
            v_plus: s.v_plus,
            v_minus: s.v_minus,
            v_total: s.v_total,
            v_plus_db: s.v_plus_db,
            entangled: s.entangled,
        });
    }
    let content = match cmd.format {
        FormatArg::Json => to_pretty_json(&rows)?,
        FormatArg::Csv => {
            let mut text = String::from("omega,v_plus,v_minus,v_total,v_plus_db,entangled\n");
            for r in &rows {
                text.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    sig9(r.omega),
                    sig9(r.v_plus),
                    sig9(r.v_minus),
                    sig9(r.v_total),
                    sig9(r.v_plus_db),
                    r.entangled
                ));
            }
            text
        }
        FormatArg::Text => {
            return Err(Failure::Usage(
                "spectra supports --format csv or json".into(),
            ))
        }
    };
    emit(cmd.output.out.as_deref(), &content)?;
    Ok(0)
}

#[derive(Serialize)]
struct OptimizeReport {
    m: f64,
    n: f64,
    canonical: bool,
    phi0: f64,
    alternates: Vec<f64>,
    branch: PhiBranch,
    effective: bool,
    v_im: f64,
}

fn cmd_optimize(cmd: OptimizeCmd) -> Result<i32, Failure> {
    let cfg = cmd.config.resolve()?;
    write_manifest(
        "optimize",
        &cfg,
        &[],
        &cmd.output,
        Format::Json,
        ManifestEngine::ClosedForm,
    )?;
    let (stable, margin) = closed_form_stable(&cfg);
    if !stable {
        return Err(Failure::Numerical(format!(
            "configuration is unstable (margin {margin}); compensation is undefined"
        )));
    }
    let phases = cfg.phases();
    let plan = optimal_phi(RateParams::from_config(&cfg), phases.m, phases.n);
    let report = OptimizeReport {
        m: phases.m,
        n: phases.n,
        canonical: phases.canonical,
        phi0: plan.phi0,
        alternates: plan.alternates,
        branch: plan.branch,
        effective: plan.effective,
        v_im: plan.v_im,
    };
    emit(cmd.output.out.as_deref(), &to_pretty_json(&report)?)?;
    Ok(0)
}

#[derive(Serialize)]
struct BoundaryReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    roots: Option<dual_nopa::BoundaryRoots>,
    region: Vec<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

fn cmd_boundary(cmd: BoundaryCmd) -> Result<i32, Failure> {
    let cfg = cmd.config.resolve()?;
    write_manifest(
        "boundary",
        &cfg,
        &[],
        &cmd.output,
        Format::Json,
        ManifestEngine::ClosedForm,
    )?;
    let rates = RateParams::from_config(&cfg);
    let report = match find_boundary(rates) {
        Ok(roots) => BoundaryReport {
            region: entanglement_region(rates, cmd.resolution)?,
            roots: Some(roots),
            note: None,
        },
        Err(CoreError::NoEntanglement { v_at_zero }) => BoundaryReport {
            roots: None,
            region: Vec::new(),
            note: Some(format!(
                "no EPR entanglement for any m: V_im(0) = {v_at_zero} >= 2"
            )),
        },
        Err(e) => return Err(e.into()),
    };
    emit(cmd.output.out.as_deref(), &to_pretty_json(&report)?)?;
    Ok(0)
}

fn parse_axis(text: &str) -> Result<AxisSpec, Failure> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 4 {
        return Err(Failure::Usage(format!(
            "axis '{text}' must be var:lo:hi:count"
        )));
    }
    let var = match parts[0] {
        "m" => SweepVar::M,
        "n" => SweepVar::N,
        "phi" => SweepVar::Phi,
        other => {
            return Err(Failure::Usage(format!(
                "axis variable '{other}' must be m, n or phi"
            )))
        }
    };
    let lo: f64 = parts[1]
        .parse()
        .map_err(|e| Failure::Usage(format!("axis '{text}': bad lo: {e}")))?;
    let hi: f64 = parts[2]
        .parse()
        .map_err(|e| Failure::Usage(format!("axis '{text}': bad hi: {e}")))?;
    let count: usize = parts[3]
        .parse()
        .map_err(|e| Failure::Usage(format!("axis '{text}': bad count: {e}")))?;
    Ok(AxisSpec { var, lo, hi, count })
}

fn axis_name(var: SweepVar) -> &'static str {
    match var {
        SweepVar::M => "m",
        SweepVar::N => "n",
        SweepVar::Phi => "phi",
    }
}

fn cmd_sweep(cmd: SweepCmd) -> Result<i32, Failure> {
    let cfg = cmd.config.resolve()?;
    let axes: Vec<AxisSpec> = cmd
        .axes
        .iter()
        .map(|s| parse_axis(s))
        .collect::<Result<_, _>>()?;
    let manifest_engine = match cmd.engine {
        EngineArg::ClosedForm | EngineArg::Both => ManifestEngine::ClosedForm,
        EngineArg::StateSpace => ManifestEngine::StateSpace,
    };
    write_manifest(
        "sweep",
        &cfg,
        &axes,
        &cmd.output,
        cmd.format.into(),
        manifest_engine,
    )?;

    let quantity = cmd.quantity.core();
    let grid = match cmd.engine {
        EngineArg::ClosedForm => sweep(&cfg, quantity, &axes, Engine::ClosedForm, cmd.db)?,
        EngineArg::StateSpace => sweep(&cfg, quantity, &axes, Engine::StateSpace, cmd.db)?,
        EngineArg::Both => {
            let closed = sweep(&cfg, quantity, &axes, Engine::ClosedForm, cmd.db)?;
            let state = sweep(&cfg, quantity, &axes, Engine::StateSpace, cmd.db)?;
            let mut worst = 0.0f64;
            for (k, (c, s)) in closed.values.iter().zip(&state.values).enumerate() {
                match (c, s) {
                    (GridValue::Value(c), GridValue::Value(s)) => {
                        let dev = (c - s).abs() / c.abs().max(1.0);
                        if dev > 1e-9 {
                            return Err(Failure::Numerical(format!(
                                "engines disagree at cell {k}: closed-form {c} vs state-space {s}"
                            )));
                        }
                        worst = worst.max(dev);
                    }
                    (a, b) if a != b => {
                        return Err(Failure::Numerical(format!(
                            "engines disagree on stability at cell {k}"
                        )))
                    }
                    _ => {}
                }
            }
            eprintln!("engines agree: max relative deviation {worst:.3e}");
            closed
        }
    };

    let mut quantity_name = cmd.quantity.name().to_string();
    if cmd.db {
        quantity_name.push_str("_db");
    }
    let n1 = grid.axes.get(1).map_or(1, |a| a.count);

    // One record per grid point in both formats: axis coordinates first,
    // then the quantity value or the explicit `unstable` sentinel.
    let content = match cmd.format {
        FormatArg::Json => {
            let mut rows = Vec::with_capacity(grid.values.len());
            for (k, value) in grid.values.iter().enumerate() {
                let (i0, i1) = (k / n1, k % n1);
                let mut row = serde_json::Map::new();
                row.insert(
                    axis_name(grid.axes[0].var).into(),
                    serde_json::json!(grid.axes[0].value(i0)),
                );
                if let Some(ax1) = grid.axes.get(1) {
                    row.insert(axis_name(ax1.var).into(), serde_json::json!(ax1.value(i1)));
                }
                let cell = match value {
                    GridValue::Value(v) => serde_json::json!(v),
                    GridValue::Unstable => serde_json::json!("unstable"),
                };
                row.insert(quantity_name.clone(), cell);
                rows.push(serde_json::Value::Object(row));
            }
            to_pretty_json(&rows)?
        }
        FormatArg::Csv => {
            let mut text = String::new();
            for ax in &grid.axes {
                text.push_str(axis_name(ax.var));
                text.push(',');
            }
            text.push_str(&quantity_name);
            text.push('\n');
            for (k, value) in grid.values.iter().enumerate() {
                let (i0, i1) = (k / n1, k % n1);
                text.push_str(&sig9(grid.axes[0].value(i0)));
                text.push(',');
                if let Some(ax1) = grid.axes.get(1) {
                    text.push_str(&sig9(ax1.value(i1)));
                    text.push(',');
                }
                match value {
                    GridValue::Value(v) => text.push_str(&sig9(*v)),
                    GridValue::Unstable => text.push_str("unstable"),
                }
                text.push('\n');
            }
            text
        }
        FormatArg::Text => {
            return Err(Failure::Usage("sweep supports --format csv or json".into()))
        }
    };
    emit(cmd.output.out.as_deref(), &content)?;
    Ok(0)
}

fn render_table_text(kind: TableKind, rows: &[TableRow]) -> String {
    let (title, param) = match kind {
        TableKind::Transmission => ("Transmission losses (x = 0.4, y = 1, full kappa)", "alpha"),
        TableKind::Amplification => (
            "Amplification losses (x = 0.4, y = 1, alpha = 0.95)",
            "kappa/kappa_full",
        ),
    };
    let mut text = format!("{title}\n");
    text.push_str(&format!(
        "{param:>16}  {:>10} {:>10}  {:>10} {:>10}  status\n",
        "m1", "m2", "ref m1", "ref m2"
    ));
    for r in rows {
        let p = match kind {
            TableKind::Transmission => r.alpha,
            TableKind::Amplification => r.kappa_fraction,
        };
        text.push_str(&format!(
            "{p:>16}  {:>10.6} {:>10.6}  {:>10.6} {:>10.6}  {}\n",
            r.m1,
            r.m2,
            r.expected_m1,
            r.expected_m2,
            if r.within_tol { "pass" } else { "FAIL" }
        ));
    }
    text
}

#[derive(Serialize)]
struct TablesReport {
    tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    transmission: Option<Vec<TableRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    amplification: Option<Vec<TableRow>>,
    all_pass: bool,
}

fn cmd_tables(cmd: TablesCmd) -> Result<i32, Failure> {
    let kinds: Vec<TableKind> = match cmd.which {
        WhichArg::Transmission => vec![TableKind::Transmission],
        WhichArg::Amplification => vec![TableKind::Amplification],
        WhichArg::Both => vec![TableKind::Transmission, TableKind::Amplification],
    };
    let mut transmission = None;
    let mut amplification = None;
    for kind in &kinds {
        let rows = reproduce_table(*kind)?;
        match kind {
            TableKind::Transmission => transmission = Some(rows),
            TableKind::Amplification => amplification = Some(rows),
        }
    }
    let all_pass = transmission
        .iter()
        .chain(amplification.iter())
        .flatten()
        .all(|r| r.within_tol);

    let content = match cmd.format {
        FormatArg::Json => to_pretty_json(&TablesReport {
            tolerance: TABLE_TOL,
            transmission,
            amplification,
            all_pass,
        })?,
        FormatArg::Text => {
            let mut text = String::new();
            if let Some(rows) = &transmission {
                text.push_str(&render_table_text(TableKind::Transmission, rows));
                text.push('\n');
            }
            if let Some(rows) = &amplification {
                text.push_str(&render_table_text(TableKind::Amplification, rows));
                text.push('\n');
            }
            text.push_str(&format!(
                "tolerance {TABLE_TOL:.0e} per endpoint: {}\n",
                if all_pass {
                    "all rows pass"
                } else {
                    "FAILURES present"
                }
            ));
            text
        }
        FormatArg::Csv => {
            return Err(Failure::Usage(
                "tables supports --format text or json".into(),
            ))
        }
    };
    emit(cmd.output.out.as_deref(), &content)?;
    Ok(if all_pass { 0 } else { 1 })
}

fn cmd_validate(cmd: ValidateCmd) -> Result<i32, Failure> {
    let outcome = run_equivalence(cmd.seed, cmd.samples)?;
    let passed = outcome.passed();
    let mut value = serde_json::to_value(&outcome)
        .map_err(|e| Failure::Other(format!("serialization: {e}")))?;
    value
        .as_object_mut()
        .expect("outcome serializes to an object")
        .insert("passed".into(), serde_json::Value::Bool(passed));
    let content = serde_json::to_string_pretty(&value)
        .map_err(|e| Failure::Other(format!("serialization: {e}")))?
        + "\n";
    emit(cmd.output.out.as_deref(), &content)?;
    Ok(if passed { 0 } else { 1 })
}
