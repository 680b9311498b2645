//! Scenario files and CSV reports for the `lambda-elim` command.
//!
//! A scenario is a plain `key = value` file; `#` starts a comment. Values
//! are arithmetic expressions (`sqrt(1/3)`, `-pi/3`, ...). Complex initial
//! amplitudes are written `re` or `re, im`.
//!
//! ```text
//! delta = 0.1
//! big_delta = 1
//! omega_a_mag = 0.1
//! omega_a_phase = -pi/3
//! omega_b_mag = 0.1
//! omega_b_phase = -pi/2
//! alpha0 = sqrt(1/3)
//! beta0 = sqrt(2/3)
//! ```

use std::fmt::Write as _;
use std::str::FromStr;

use lambda_elim::analysis::{
    compare_trajectories, effective_hamiltonian, expansion_check, expansion_convergence, scaling_study, ExpectedOrder,
    Method as Pipeline, OrderCheck, Picture, TimeWindow,
};
use lambda_elim::elim::propagate_effective;
use lambda_elim::exact::{decompose, propagate_exact};
use lambda_elim::system::NORM_TOL;
use lambda_elim::{LambdaParams, State2, State3, Trajectory2, Trajectory3, C64};

/// Coupling scale factors used by the `scaling` report.
pub const SCALING_FACTORS: [f64; 3] = [1.0, 0.5, 0.25];

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("regime error: {0}")]
    Regime(String),
    #[error("numerical degeneracy: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Regime(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl From<lambda_elim::Error> for CliError {
    fn from(e: lambda_elim::Error) -> Self {
        use lambda_elim::Error as E;
        let msg = e.to_string();
        match e {
            E::InvalidRegime(_) | E::SingularPicture(_) => CliError::Regime(msg),
            E::InvalidState(_) | E::InvalidParameter(_) => CliError::Config(msg),
            E::DegenerateInput(_)
            | E::PoleOfDisplacement(_)
            | E::DegeneratePoles(..)
            | E::Resonance(_)
            | E::GridMismatch(_)
            | E::DegenerateData(_) => CliError::Numerical(msg),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMethod {
    Exact,
    Rough,
    Shifted,
    Green,
    Compare,
    Scaling,
    Expansion,
}

impl FromStr for RunMethod {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "exact" => RunMethod::Exact,
            "rough" => RunMethod::Rough,
            "shifted" => RunMethod::Shifted,
            "green" => RunMethod::Green,
            "compare" => RunMethod::Compare,
            "scaling" => RunMethod::Scaling,
            "expansion" => RunMethod::Expansion,
            other => return Err(CliError::Config(format!("unknown method {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub delta: f64,
    pub big_delta: f64,
    pub omega_a_mag: f64,
    pub omega_a_phase: f64,
    pub omega_b_mag: f64,
    pub omega_b_phase: f64,
    pub alpha0: C64,
    pub beta0: C64,
    pub gamma0: C64,
    pub eta: f64,
    pub e0: f64,
    pub t_max_delta: f64,
    pub n_samples: usize,
    pub method: RunMethod,
    /// Compare the exact trajectory against itself.
    pub self_check: bool,
}

const KEYS: [&str; 14] = [
    "delta",
    "big_delta",
    "omega_a_mag",
    "omega_a_phase",
    "omega_b_mag",
    "omega_b_phase",
    "alpha0",
    "beta0",
    "gamma0",
    "eta",
    "e0",
    "t_max_delta",
    "n_samples",
    "method",
];

const REQUIRED: [&str; 6] = ["delta", "big_delta", "omega_a_mag", "omega_a_phase", "omega_b_mag", "omega_b_phase"];

fn eval_real(key: &str, expr: &str) -> Result<f64> {
    let v = meval::eval_str(expr).map_err(|e| CliError::Config(format!("{key}: cannot evaluate {expr:?}: {e}")))?;
    if !v.is_finite() {
        return Err(CliError::Config(format!("{key}: {expr:?} is not finite")));
    }
    Ok(v)
}

/// `re` or `re, im`, splitting on the first comma outside parentheses.
fn eval_complex(key: &str, expr: &str) -> Result<C64> {
    let mut depth = 0i32;
    for (i, ch) in expr.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                return Ok(C64::new(eval_real(key, &expr[..i])?, eval_real(key, &expr[i + 1..])?));
            }
            _ => {}
        }
    }
    Ok(C64::new(eval_real(key, expr)?, 0.0))
}

pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let mut seen: Vec<(&str, &str)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(CliError::Config(format!("line {}: unknown key {key:?}", lineno + 1)));
        }
        if seen.iter().any(|(k, _)| *k == key) {
            return Err(CliError::Config(format!("line {}: duplicate key {key:?}", lineno + 1)));
        }
        seen.push((key, value));
    }
    let get = |k: &str| seen.iter().find(|(key, _)| *key == k).map(|(_, v)| *v);
    let missing: Vec<&str> = REQUIRED.iter().copied().filter(|k| get(k).is_none()).collect();
    if !missing.is_empty() {
        return Err(CliError::Config(format!("missing required key(s): {}", missing.join(", "))));
    }
    let real = |k: &str, default: f64| get(k).map_or(Ok(default), |v| eval_real(k, v));
    let complex = |k: &str, default: C64| get(k).map_or(Ok(default), |v| eval_complex(k, v));

    let n_samples = match get("n_samples") {
        None => 2001,
        Some(v) => {
            let x = eval_real("n_samples", v)?;
            if x.fract() != 0.0 || x < 2.0 {
                return Err(CliError::Config(format!("n_samples must be an integer >= 2, got {v}")));
            }
            x as usize
        }
    };
    let cfg = ScenarioConfig {
        delta: real("delta", 0.0)?,
        big_delta: real("big_delta", 0.0)?,
        omega_a_mag: real("omega_a_mag", 0.0)?,
        omega_a_phase: real("omega_a_phase", 0.0)?,
        omega_b_mag: real("omega_b_mag", 0.0)?,
        omega_b_phase: real("omega_b_phase", 0.0)?,
        alpha0: complex("alpha0", C64::new(1.0, 0.0))?,
        beta0: complex("beta0", C64::new(0.0, 0.0))?,
        gamma0: complex("gamma0", C64::new(0.0, 0.0))?,
        eta: real("eta", 0.0)?,
        e0: real("e0", 0.0)?,
        t_max_delta: real("t_max_delta", 200.0)?,
        n_samples,
        method: get("method").map_or(Ok(RunMethod::Exact), str::parse)?,
        self_check: false,
    };
    let norm = cfg.alpha0.norm_sqr() + cfg.beta0.norm_sqr() + cfg.gamma0.norm_sqr();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(CliError::Config(format!("initial state has squared norm {norm}, expected 1")));
    }
    if cfg.t_max_delta.is_nan() || cfg.t_max_delta <= 0.0 {
        return Err(CliError::Config(format!("t_max_delta must be positive, got {}", cfg.t_max_delta)));
    }
    Ok(cfg)
}

impl ScenarioConfig {
    pub fn params(&self) -> Result<LambdaParams> {
        Ok(LambdaParams::new(
            self.delta,
            self.big_delta,
            C64::from_polar(self.omega_a_mag, self.omega_a_phase),
            C64::from_polar(self.omega_b_mag, self.omega_b_phase),
        )?)
    }

    pub fn window(&self) -> TimeWindow {
        TimeWindow { t_max_delta: self.t_max_delta, n_samples: self.n_samples }
    }

    /// Elimination route selected by the config: Green's function when
    /// `e0` is set, otherwise the rough Ansatz in the `eta` picture.
    pub fn pipeline(&self) -> Result<Pipeline> {
        match self.method {
            RunMethod::Rough => Ok(Pipeline::Rough),
            RunMethod::Shifted => Ok(Pipeline::Shifted { eta: self.eta }),
            RunMethod::Green => Ok(Pipeline::Green { e0: self.e0 }),
            _ if self.e0 != 0.0 && self.eta != 0.0 => {
                Err(CliError::Config("set either eta or e0 for the effective method, not both".into()))
            }
            _ if self.e0 != 0.0 => Ok(Pipeline::Green { e0: self.e0 }),
            _ if self.eta != 0.0 => Ok(Pipeline::Shifted { eta: self.eta }),
            _ => Ok(Pipeline::Rough),
        }
    }

    fn state3(&self) -> Result<State3> {
        Ok(State3::new(self.alpha0, self.beta0, self.gamma0)?)
    }

    fn state2(&self) -> Result<State2> {
        if self.gamma0 != C64::new(0.0, 0.0) {
            return Err(CliError::Config("effective methods start in the ground manifold; gamma0 must be 0".into()));
        }
        Ok(State2::new(self.alpha0, self.beta0)?)
    }
}

/// 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn row(out: &mut String, cells: &[f64]) {
    let line: Vec<String> = cells.iter().map(|&x| num(x)).collect();
    out.push_str(&line.join(","));
    out.push('\n');
}

fn exact_trajectory(cfg: &ScenarioConfig, params: &LambdaParams) -> Result<Trajectory3> {
    let times = cfg.window().times(params.big_delta());
    Ok(propagate_exact(&decompose(params, &cfg.state3()?), &times))
}

fn effective_trajectory(cfg: &ScenarioConfig, params: &LambdaParams) -> Result<Trajectory2> {
    let h = effective_hamiltonian(params, cfg.pipeline()?)?;
    let times = cfg.window().times(params.big_delta());
    Ok(propagate_effective(&h, &cfg.state2()?, &times))
}

const EXACT_HEADER: &str = "t_delta,re_alpha,im_alpha,re_beta,im_beta,re_gamma,im_gamma,pop_a,pop_b,pop_e,norm";

fn exact_cells(a: &[C64; 3]) -> [f64; 10] {
    let pops = a.map(|x| x.norm_sqr());
    [
        a[0].re,
        a[0].im,
        a[1].re,
        a[1].im,
        a[2].re,
        a[2].im,
        pops[0],
        pops[1],
        pops[2],
        (pops[0] + pops[1] + pops[2]).sqrt(),
    ]
}

fn run_exact(cfg: &ScenarioConfig, params: &LambdaParams) -> Result<String> {
    let traj = exact_trajectory(cfg, params)?;
    let bd = params.big_delta().abs();
    let mut out = format!("{EXACT_HEADER}\n");
    for (t, a) in traj.iter() {
        let mut cells = vec![t * bd];
        cells.extend(exact_cells(a));
        row(&mut out, &cells);
    }
    Ok(out)
}

fn run_effective(cfg: &ScenarioConfig, params: &LambdaParams) -> Result<String> {
    let traj = effective_trajectory(cfg, params)?;
    let bd = params.big_delta().abs();
    let mut out = format!("# method={}\nt_delta,re_alpha,im_alpha,re_beta,im_beta,pop_a,pop_b,norm\n", cfg.pipeline()?);
    for (t, a) in traj.iter() {
        let (pa, pb) = (a[0].norm_sqr(), a[1].norm_sqr());
        row(&mut out, &[t * bd, a[0].re, a[0].im, a[1].re, a[1].im, pa, pb, (pa + pb).sqrt()]);
    }
    Ok(out)
}

fn run_compare(cfg: &ScenarioConfig, params: &LambdaParams) -> Result<String> {
    let exact = exact_trajectory(cfg, params)?;
    let (label, test): (String, Vec<[C64; 2]>) = if cfg.self_check {
        ("exact".into(), exact.amplitudes().iter().map(|a| [a[0], a[1]]).collect())
    } else {
        let eff = effective_trajectory(cfg, params)?;
        (cfg.pipeline()?.to_string(), eff.amplitudes().to_vec())
    };
    let test_traj = Trajectory2::new(exact.times().to_vec(), test);
    let test_method = if cfg.self_check { Pipeline::Exact } else { cfg.pipeline()? };
    let report = compare_trajectories(&exact, &test_traj, params, Picture::Natural, (Pipeline::Exact, test_method))?;

    let bd = params.big_delta().abs();
    let mut out = format!("# reference=exact test={label}\n");
    writeln!(out, "{EXACT_HEADER},re_alpha_eff,im_alpha_eff,re_beta_eff,im_beta_eff,pop_a_eff,pop_b_eff,error")
        .unwrap();
    for ((t, a), b) in exact.iter().zip(test_traj.amplitudes()) {
        let err = ((a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr()).sqrt();
        let mut cells = vec![t * bd];
        cells.extend(exact_cells(a));
        cells.extend([b[0].re, b[0].im, b[1].re, b[1].im, b[0].norm_sqr(), b[1].norm_sqr(), err]);
        row(&mut out, &cells);
    }
    writeln!(
        out,
        "# epsilon={} max_error={} max_population_error={} t_delta_of_max={}",
        num(report.epsilon),
        num(report.max_amplitude_error),
        num(report.max_population_error),
        num(report.time_of_max * bd)
    )
    .unwrap();
    Ok(out)
}

fn run_scaling(cfg: &ScenarioConfig, params: &LambdaParams) -> Result<String> {
    let method = cfg.pipeline()?;
    let fit = scaling_study(params, &SCALING_FACTORS, method, &cfg.state2()?, &cfg.window())?;
    let mut out = format!("# method={method}\nepsilon,max_error\n");
    for (e, err) in &fit.points {
        row(&mut out, &[*e, *err]);
    }
    writeln!(out, "# slope={} intercept={} fit_residual={}", num(fit.slope), num(fit.intercept), num(fit.residual))
        .unwrap();
    Ok(out)
}

fn order_label(o: ExpectedOrder) -> String {
    match o {
        ExpectedOrder::Exact => "exact".into(),
        ExpectedOrder::Eps(n) => format!("eps^{n}"),
    }
}

fn run_expansion(cfg: &ScenarioConfig, params: &LambdaParams) -> Result<String> {
    let s = cfg.state2()?;
    let table = expansion_check(params, &s)?;
    let mut out = format!("# branch={} epsilon={}\n", table.branch, num(table.epsilon));
    out.push_str("quantity,expected_order,re_predicted,im_predicted,re_computed,im_computed,residual\n");
    for r in &table.rows {
        let cells = [r.predicted.re, r.predicted.im, r.computed.re, r.computed.im, r.residual].map(num);
        writeln!(out, "{},{},{}", r.quantity, order_label(r.expected), cells.join(",")).unwrap();
    }
    let conv = expansion_convergence(params, &s, &SCALING_FACTORS, OrderCheck::AtLeast)?;
    for (q, expected, t) in conv {
        let ratios: Vec<String> = t.ratios.iter().map(|&r| num(r)).collect();
        writeln!(out, "# {q} {} ratios={} passed={}", order_label(expected), ratios.join(";"), t.passed).unwrap();
    }
    Ok(out)
}

/// Runs the configured pipeline and returns the CSV text.
pub fn run(cfg: &ScenarioConfig) -> Result<String> {
    let params = cfg.params()?;
    match cfg.method {
        RunMethod::Exact => run_exact(cfg, &params),
        RunMethod::Rough | RunMethod::Shifted | RunMethod::Green => run_effective(cfg, &params),
        RunMethod::Compare => run_compare(cfg, &params),
        RunMethod::Scaling => run_scaling(cfg, &params),
        RunMethod::Expansion => run_expansion(cfg, &params),
    }
}
