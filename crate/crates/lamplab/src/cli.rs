//! Command-line surface: every experiment as a subcommand with
//! machine-readable JSON (canonical) or CSV (table view) output.
//!
//! Exit codes: 0 success, 1 quantitative-threshold failure, 2 usage or
//! parse error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use serde_json::{json, Value};
use std::io::Write;

use crate::diagonal::{
    build_diagonal_program, check_consistency, check_diagonal_consistency, Behavior, OracleClaim,
    ProgramTable,
};
use crate::optics::{
    synthesize_equal_phase_diag, synthesize_general, synthesize_opposite_phase_diag, OpticsError,
    SynthesisResult,
};
use crate::qubit::{
    conjugated_diagonal, eigensystem, fixed_points, stream_rng, DiagPhases, QubitState, U2Params,
    Unitary2, FIXED_POINT_TOL,
};
use crate::summability::{
    euler_error_bound, euler_exact, euler_series_partial, geometric_exposure_fractions,
    superasymptotic_truncation,
};
use crate::supertask::{detector_exposure, extrinsic_time, simulate_trace, LampState};
use rand::Rng;

#[derive(Parser)]
#[command(name = "lamp", version, about = "Thomson-lamp numerics: supertask brightness, Abel sums, quantum fixed points")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputOpts {
    /// Output format; JSON is canonical, CSV is a lossy table view
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to this path instead of standard output
    #[arg(long)]
    output: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Exposure fractions, analytic average brightness, and a Monte Carlo check
    Brightness {
        /// Detector resolution: the cutoff intrinsic step t (delta = 2^-t)
        #[arg(long, default_value_t = 10)]
        resolution_steps: u64,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Euler series vs exact solution with the exponential error bound
    Euler {
        /// Evaluation points z > 0 (repeatable)
        #[arg(long = "z")]
        z_list: Vec<f64>,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Conjugated-diagonal unitary, eigensystem, and fixed-point list
    Fixedpoint {
        #[arg(long, default_value_t = 0.0)]
        mu: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0)]
        omega: f64,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Born-rule measurement statistics of a qubit state
    Measure {
        /// "psi+", "psi-", "|0>", "|1>", "a0,a1", or "re0,im0,re1,im1"
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Beam-splitter parameter synthesis for a target unitary
    Synthesize {
        /// "equal:<lambda>", "opposite:<lambda>", or a JSON matrix of [re,im] pairs
        #[arg(long)]
        target: String,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Diagonal-argument consistency check on program tables
    Diagonal {
        /// Program table JSON path
        #[arg(long, required_unless_present = "sweep3")]
        table: Option<std::path::PathBuf>,
        /// Oracle claim JSON path
        #[arg(long, required_unless_present = "sweep3")]
        oracle: Option<std::path::PathBuf>,
        /// Extend the universe by the induced diagonal program before checking
        #[arg(long)]
        extend: bool,
        /// Exhaustive sweep over all 3-program behavior tables and oracle claims
        #[arg(long)]
        sweep3: bool,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Lamp trace on the extrinsic clock, with optional detector window
    Trace {
        #[arg(long, default_value_t = 8)]
        t_max: u64,
        #[arg(long, value_enum, default_value = "on")]
        initial: InitialState,
        #[arg(long)]
        open: Option<f64>,
        #[arg(long)]
        close: Option<f64>,
        #[command(flatten)]
        out: OutputOpts,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum InitialState {
    On,
    Off,
}

impl From<InitialState> for LampState {
    fn from(s: InitialState) -> Self {
        match s {
            InitialState::On => LampState::On,
            InitialState::Off => LampState::Off,
        }
    }
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Self { code: 2, message: msg.into() }
    }

    fn threshold(msg: impl Into<String>) -> Self {
        Self { code: 1, message: msg.into() }
    }
}

/// Round every number in the tree to 15 significant digits.
fn round_numbers(value: &mut Value) {
    match value {
        Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if f.is_finite() && f.fract() != 0.0 {
                    let rounded: f64 = format!("{f:.14e}").parse().unwrap();
                    if let Some(num) = serde_json::Number::from_f64(rounded) {
                        *n = num;
                    }
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_numbers),
        Value::Object(map) => map.values_mut().for_each(round_numbers),
        _ => {}
    }
}

fn flatten_into(prefix: &str, value: &Value, rows: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten_into(&key, v, rows);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten_into(&format!("{prefix}[{i}]"), v, rows);
            }
        }
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}

fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(value).unwrap()),
        Format::Csv => {
            // table-shaped reports get real columns, everything else key,value
            if let Some(rows) = value.get("rows").and_then(Value::as_array) {
                let mut out = String::new();
                if let Some(Value::Object(first)) = rows.first() {
                    let headers: Vec<&String> = first.keys().collect();
                    out.push_str(&headers.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(","));
                    out.push('\n');
                    for row in rows {
                        let cells: Vec<String> = headers
                            .iter()
                            .map(|h| row.get(h.as_str()).map_or(String::new(), |v| v.to_string()))
                            .collect();
                        out.push_str(&cells.join(","));
                        out.push('\n');
                    }
                }
                out
            } else {
                let mut rows = Vec::new();
                flatten_into("", value, &mut rows);
                let mut out = String::from("key,value\n");
                for (k, v) in rows {
                    out.push_str(&format!("{k},{v}\n"));
                }
                out
            }
        }
    }
}

fn emit(mut value: Value, out: &OutputOpts) -> Result<(), Failure> {
    round_numbers(&mut value);
    let text = render(&value, out.format);
    match &out.output {
        None => {
            print!("{text}");
            std::io::stdout().flush().ok();
        }
        Some(path) => {
            std::fs::write(path, text)
                .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
        }
    }
    Ok(())
}

fn complex_json(z: C64) -> Value {
    json!([z.re, z.im])
}

fn state_json(s: &QubitState) -> Value {
    json!([[s.amp0.re, s.amp0.im], [s.amp1.re, s.amp1.im]])
}

fn unitary_json(u: &Unitary2) -> Value {
    let e = u.entries();
    json!([
        [complex_json(e[0][0]), complex_json(e[0][1])],
        [complex_json(e[1][0]), complex_json(e[1][1])]
    ])
}

fn parse_state(spec: &str) -> Result<QubitState, Failure> {
    match spec.trim() {
        "psi+" | "psi_plus" => return Ok(QubitState::psi_plus()),
        "psi-" | "psi_minus" => return Ok(QubitState::psi_minus()),
        "|0>" | "0" => return Ok(QubitState::zero()),
        "|1>" | "1" => return Ok(QubitState::one()),
        _ => {}
    }
    let parts: Vec<f64> = spec
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::usage(format!("cannot parse state spec {spec:?}")))?;
    let (amp0, amp1) = match parts.as_slice() {
        [a, b] => (C64::new(*a, 0.0), C64::new(*b, 0.0)),
        [a, b, c, d] => (C64::new(*a, *b), C64::new(*c, *d)),
        _ => return Err(Failure::usage("state spec needs 2 or 4 numbers")),
    };
    QubitState::new(amp0, amp1).map_err(|e| Failure::usage(e.to_string()))
}

fn cmd_brightness(resolution_steps: u64, samples: u64, seed: u64) -> Result<Value, Failure> {
    if resolution_steps < 1 {
        return Err(Failure::usage("resolution-steps must be at least 1"));
    }
    if samples < 1 {
        return Err(Failure::usage("samples must be at least 1"));
    }
    let analytic: Value = {
        let on = geometric_exposure_fractions(LampState::On);
        let off = geometric_exposure_fractions(LampState::Off);
        json!({
            "on_at_cutoff": {"on_fraction": on.on_fraction, "off_fraction": on.off_fraction},
            "off_at_cutoff": {"on_fraction": off.on_fraction, "off_fraction": off.off_fraction},
        })
    };
    // numeric route: detector exposure over the tail window for both phases
    let open = extrinsic_time(resolution_steps);
    let numeric: Value = {
        let mut per_state = serde_json::Map::new();
        for (label, initial) in [("on_at_cutoff", LampState::On), ("off_at_cutoff", LampState::Off)] {
            // pick the initial state so that the cutoff state matches the label
            let init = if resolution_steps % 2 == 0 { initial } else { initial.flip() };
            let trace = simulate_trace(resolution_steps, init);
            let e = detector_exposure(&trace, open, 2.0)
                .map_err(|e| Failure::usage(e.to_string()))?;
            let on_fraction = e.on_time / (2.0 - open);
            per_state.insert(
                label.to_string(),
                json!({"on_fraction": on_fraction, "off_fraction": 1.0 - on_fraction}),
            );
        }
        Value::Object(per_state)
    };
    let mut rng = stream_rng(seed, 0);
    let mut total = 0.0;
    let mut draws = Vec::new();
    for _ in 0..samples {
        let on_at_cutoff = rng.random::<f64>() < 0.5;
        let b = if on_at_cutoff { 2.0 / 3.0 } else { 1.0 / 3.0 };
        total += b;
        if samples <= 16 {
            draws.push(b);
        }
    }
    let mean = total / samples as f64;
    // the spread comes from a fair coin scaled by 1/3
    let three_sigma = 3.0 / 3.0 * (0.25 / samples as f64).sqrt();
    let mut mc = json!({
        "samples": samples,
        "seed": seed,
        "mean": mean,
        "three_sigma": three_sigma,
        "within_band": (mean - 0.5).abs() <= three_sigma,
    });
    if !draws.is_empty() {
        mc["draws"] = json!(draws);
    }
    Ok(json!({
        "resolution_steps": resolution_steps,
        "window_open": open,
        "fractions_analytic": analytic,
        "fractions_numeric": numeric,
        "analytic_average": 0.5,
        "monte_carlo": mc,
    }))
}

fn cmd_euler(z_list: &[f64]) -> Result<Value, Failure> {
    let mut rows = Vec::new();
    for &z in z_list {
        if z <= 0.0 {
            return Err(Failure::usage(format!("z must be positive, got {z}")));
        }
        let exact = euler_exact(z).map_err(|e| Failure::threshold(e.to_string()))?;
        let k = superasymptotic_truncation(z);
        let truncated = euler_series_partial(z, k).map_err(|e| Failure::threshold(e.to_string()))?;
        let abs_error = (exact - truncated).abs();
        let bound = euler_error_bound(z);
        rows.push(json!({
            "z": z,
            "exact": exact,
            "truncation_index": k,
            "truncated": truncated,
            "abs_error": abs_error,
            "bound": bound,
            "bound_satisfied": abs_error <= bound,
        }));
    }
    Ok(json!({ "rows": rows }))
}

fn cmd_fixedpoint(mu: f64, lambda: f64, omega: f64, alpha: f64, beta: f64, phi: f64) -> Result<Value, Failure> {
    let params = U2Params::new(omega, alpha, beta, phi).map_err(|e| Failure::usage(e.to_string()))?;
    let phases = DiagPhases::new(mu, lambda);
    let m = conjugated_diagonal(&params, &phases);
    let es = eigensystem(&m);
    let fps = fixed_points(&m, FIXED_POINT_TOL);
    let degenerate = (es.pairs[0].0 - es.pairs[1].0).norm() < 1e-9;
    Ok(json!({
        "params": {"omega": omega, "alpha": alpha, "beta": beta, "phi": phi},
        "phases": {"mu": phases.mu, "lambda": phases.lambda},
        "matrix": unitary_json(&m),
        "eigensystem": es.pairs.iter().map(|(l, v)| json!({
            "eigenvalue": complex_json(*l),
            "eigenvector": state_json(v),
        })).collect::<Vec<_>>(),
        "degenerate": degenerate,
        "fixed_points": fps.iter().map(state_json).collect::<Vec<_>>(),
        "has_fixed_point": !fps.is_empty(),
    }))
}

fn cmd_measure(spec: &str, samples: u64, seed: u64) -> Result<Value, Failure> {
    if samples < 1 {
        return Err(Failure::usage("samples must be at least 1"));
    }
    let state = parse_state(spec)?;
    let report = crate::diagonal::classical_readout(&state, seed, samples);
    Ok(json!({
        "state": state_json(&state),
        "samples": samples,
        "seed": seed,
        "count0": report.count0,
        "count1": report.count1,
        "freq0": report.freq0,
        "freq1": report.freq1,
        "std_error": report.std_error,
    }))
}

fn synthesis_json(r: &SynthesisResult, target: &Unitary2) -> Value {
    json!({
        "params": {
            "omega": r.params.omega,
            "alpha": r.params.alpha,
            "beta": r.params.beta,
            "phi": r.params.phi,
        },
        "residual": r.residual,
        "global_phase": r.global_phase,
        "target": unitary_json(target),
    })
}

fn cmd_synthesize(target_spec: &str) -> Result<Value, Failure> {
    let spec = target_spec.trim();
    let map_optics = |e: OpticsError| match e {
        OpticsError::TargetNotUnitary { .. } => Failure::usage(e.to_string()),
        _ => Failure::threshold(e.to_string()),
    };
    if let Some(rest) = spec.strip_prefix("equal:") {
        let lambda: f64 = rest.parse().map_err(|_| Failure::usage("bad lambda"))?;
        let r = synthesize_equal_phase_diag(lambda).map_err(map_optics)?;
        let target = crate::optics::ubs(r.params.omega, r.params.alpha, r.params.beta, r.params.phi);
        return Ok(synthesis_json(&r, &target));
    }
    if let Some(rest) = spec.strip_prefix("opposite:") {
        let lambda: f64 = rest.parse().map_err(|_| Failure::usage("bad lambda"))?;
        let r = synthesize_opposite_phase_diag(lambda).map_err(map_optics)?;
        let target = crate::optics::ubs(r.params.omega, r.params.alpha, r.params.beta, r.params.phi);
        return Ok(synthesis_json(&r, &target));
    }
    let target: Unitary2 = serde_json::from_str(spec)
        .map_err(|e| Failure::usage(format!("cannot parse target matrix: {e}")))?;
    let r = synthesize_general(&target).map_err(map_optics)?;
    Ok(synthesis_json(&r, &target))
}

fn load_json<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("cannot parse {}: {e}", path.display())))
}

fn diagonal_sweep3() -> Value {
    let ids: Vec<String> = vec!["p1".into(), "p2".into(), "p3".into()];
    let mut total = 0u64;
    let mut inconsistent = 0u64;
    let mut witness_self = 0u64;
    for behavior_mask in 0..512u32 {
        let mut table = ProgramTable::new(ids.clone()).unwrap();
        for (i, p) in ids.iter().enumerate() {
            for (j, x) in ids.iter().enumerate() {
                table.set_behavior(p, x, Behavior::from_bit(((behavior_mask >> (3 * i + j)) & 1) as u8));
            }
        }
        for oracle_mask in 0..512u32 {
            let mut oracle = OracleClaim::new();
            for (i, p) in ids.iter().enumerate() {
                for (j, x) in ids.iter().enumerate() {
                    oracle.set(p, x, ((oracle_mask >> (3 * i + j)) & 1) as u8);
                }
            }
            let (ext, a) = build_diagonal_program(&table, &oracle).unwrap();
            for aa_bit in [0u8, 1] {
                let mut o = oracle.clone();
                o.set(&a, &a, aa_bit);
                let report = check_diagonal_consistency(&ext, &o, &a).unwrap();
                total += 1;
                if !report.consistent {
                    inconsistent += 1;
                    if report.witness == Some((a.clone(), a.clone())) {
                        witness_self += 1;
                    }
                }
            }
        }
    }
    json!({
        "universe_size": 3,
        "behavior_tables": 512,
        "oracle_claims_per_table": 1024,
        "total_cases": total,
        "inconsistent": inconsistent,
        "witness_is_self_application": witness_self,
        "all_inconsistent_at_self": total == inconsistent && inconsistent == witness_self,
    })
}

fn cmd_diagonal(
    table_path: Option<&std::path::Path>,
    oracle_path: Option<&std::path::Path>,
    extend: bool,
    sweep3: bool,
) -> Result<Value, Failure> {
    if sweep3 {
        return Ok(diagonal_sweep3());
    }
    let table: ProgramTable = load_json(table_path.expect("clap enforces presence"))?;
    let oracle: OracleClaim = load_json(oracle_path.expect("clap enforces presence"))?;
    if !extend {
        let report = check_consistency(&table, &oracle, None)
            .map_err(|e| Failure::usage(e.to_string()))?;
        return Ok(json!({
            "extended": false,
            "consistent": report.consistent,
            "witness": report.witness,
        }));
    }
    let (ext, a) = build_diagonal_program(&table, &oracle)
        .map_err(|e| Failure::usage(e.to_string()))?;
    let mut cases = Vec::new();
    let self_answers: Vec<u8> = match oracle.get(&a, &a) {
        Some(bit) => vec![bit],
        None => vec![0, 1],
    };
    for bit in self_answers {
        let mut o = oracle.clone();
        o.set(&a, &a, bit);
        let report = check_diagonal_consistency(&ext, &o, &a)
            .map_err(|e| Failure::usage(e.to_string()))?;
        cases.push(json!({
            "oracle_self_answer": bit,
            "consistent": report.consistent,
            "witness": report.witness,
        }));
    }
    Ok(json!({
        "extended": true,
        "diagonal_program": a,
        "cases": cases,
    }))
}

fn cmd_trace(t_max: u64, initial: LampState, open: Option<f64>, close: Option<f64>) -> Result<Value, Failure> {
    if t_max < 1 {
        return Err(Failure::usage("t-max must be at least 1"));
    }
    let trace = simulate_trace(t_max, initial);
    let mut report = serde_json::to_value(&trace).unwrap();
    if let (Some(open), Some(close)) = (open, close) {
        let e = detector_exposure(&trace, open, close).map_err(|e| Failure::usage(e.to_string()))?;
        report["exposure"] = json!({
            "window": [open, close],
            "on_time": e.on_time,
            "brightness": e.on_time / (close - open),
        });
    }
    Ok(report)
}

/// Parse argv and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version with code 0, usage errors with 2
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (result, out) = match &cli.command {
        Command::Brightness { resolution_steps, samples, seed, out } => {
            (cmd_brightness(*resolution_steps, *samples, *seed), out)
        }
        Command::Euler { z_list, out } => (cmd_euler(z_list), out),
        Command::Fixedpoint { mu, lambda, omega, alpha, beta, phi, out } => {
            (cmd_fixedpoint(*mu, *lambda, *omega, *alpha, *beta, *phi), out)
        }
        Command::Measure { state, samples, seed, out } => (cmd_measure(state, *samples, *seed), out),
        Command::Synthesize { target, out } => (cmd_synthesize(target), out),
        Command::Diagonal { table, oracle, extend, sweep3, out } => (
            cmd_diagonal(table.as_deref(), oracle.as_deref(), *extend, *sweep3),
            out,
        ),
        Command::Trace { t_max, initial, open, close, out } => {
            (cmd_trace(*t_max, LampState::from(*initial), *open, *close), out)
        }
    };
    match result {
        Ok(value) => match emit(value, out) {
            Ok(()) => 0,
            Err(f) => {
                eprintln!("error: {}", f.message);
                f.code
            }
        },
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
