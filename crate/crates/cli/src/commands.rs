use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use log::{info, warn};
use serde::Serialize;
use twisted_ore::algebra::check_associativity;
use twisted_ore::error::CoreError;
use twisted_ore::family::{cross_validate, quantum_twisted_algebra, Example4Params};
use twisted_ore::field::FieldSpec;
use twisted_ore::homology::{check_d_squared, check_exactness};
use twisted_ore::modules::{build_tau_bm, compat_conditions_report, verify_compatibility, TTPModule};
use twisted_ore::operator::{verify_automorphism, verify_sigma_derivation};
use twisted_ore::pipeline::resolve_ground_field;
use twisted_ore::report::{Report, Witness};
use twisted_ore::shuffle::verify_truncation_conditions;
use twisted_ore::twist::{
    build_tau_over, twisted_algebra, twisted_product_unchecked, verify_twisting_axioms, TwistedAlgebra,
};

use crate::complex_file::ComplexFile;
use crate::spec_file::{Inputs, SpecFile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exit {
    Pass,
    Fail,
    BadInput,
}

impl Exit {
    pub fn code(self) -> i32 {
        match self {
            Exit::Pass => 0,
            Exit::Fail => 1,
            Exit::BadInput => 2,
        }
    }
}

/// Result of one command: a report when certification ran, an error
/// message when the input was rejected.
#[derive(Debug, Serialize)]
pub struct Outcome {
    pub command: &'static str,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<Report>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl Outcome {
    fn from_report(command: &'static str, report: Report) -> Self {
        let exit = if report.passed { Exit::Pass } else { Exit::Fail };
        Self {
            command,
            exit_code: exit.code(),
            report: Some(report),
            error: None,
            output: None,
        }
    }

    fn bad_input(command: &'static str, err: anyhow::Error) -> Self {
        Self {
            command,
            exit_code: Exit::BadInput.code(),
            report: None,
            error: Some(format!("{err:#}")),
            output: None,
        }
    }

    pub fn exit(&self) -> Exit {
        match self.exit_code {
            0 => Exit::Pass,
            1 => Exit::Fail,
            _ => Exit::BadInput,
        }
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            return serde_json::to_string_pretty(self).expect("outcome serializes") + "\n";
        }
        let mut out = String::new();
        if let Some(r) = &self.report {
            out.push_str(&r.to_string());
            if !out.ends_with('\n') {
                out.push('\n');
            }
        }
        if let Some(e) = &self.error {
            out.push_str(&format!("error: {e}\n"));
        }
        if let Some(p) = &self.output {
            out.push_str(&format!("wrote {}\n", p.display()));
        }
        out
    }
}

/// Input-shaped core errors; everything else is a failed certification.
fn is_input_error(e: &CoreError) -> bool {
    matches!(
        e,
        CoreError::InvalidField(_)
            | CoreError::InvalidDimension(_)
            | CoreError::Domain(_)
            | CoreError::Parse(_)
            | CoreError::Range { .. }
    )
}

fn witness_of(e: &CoreError) -> Option<Witness> {
    match *e {
        CoreError::RejectedTwist { i, j } | CoreError::RejectedCompat { i, j } => {
            Some(Witness::Pair { first: i, second: j })
        }
        CoreError::RejectedTauChain { degree, i, j } => Some(Witness::Tuple {
            indices: vec![degree, i, j],
        }),
        CoreError::NoLift { degree, generator } => Some(Witness::Entry {
            degree,
            row: 0,
            col: generator,
        }),
        CoreError::Construction { degree, .. } => Some(Witness::Degree { degree }),
        _ => None,
    }
}

fn error_report(check: &str, e: &CoreError) -> Report {
    Report::fail(check, e.to_string(), witness_of(e))
}

/// Splits a core error into the two non-passing outcomes.
enum Stop {
    Input(anyhow::Error),
    Failed(Box<Report>),
}

impl Stop {
    fn core(check: &str, e: CoreError) -> Self {
        if is_input_error(&e) {
            Stop::Input(anyhow!(e).context(check.to_string()))
        } else {
            Stop::Failed(Box::new(error_report(check, &e)))
        }
    }
}

/// Runs the operator checks, the gate and the twisting-map certification.
/// Returns the reports so far and the twisted algebra when everything
/// passed.
fn certify_twist(inputs: &Inputs) -> Result<(Vec<Report>, Option<Arc<TwistedAlgebra>>), Stop> {
    let mut reports = Vec::new();
    let a = &inputs.a;
    let sigma = verify_automorphism(a, &inputs.sigma).map_err(|e| Stop::core("automorphism", e))?;
    reports.push(sigma.report.clone());
    let Some(sigma) = sigma.value else {
        return Ok((reports, None));
    };
    let delta = verify_sigma_derivation(a, &sigma, &inputs.delta).map_err(|e| Stop::core("sigma-derivation", e))?;
    reports.push(delta.report.clone());
    let Some(delta) = delta.value else {
        return Ok((reports, None));
    };
    let n = inputs.b.dim();
    let gate = verify_truncation_conditions(&sigma, &delta, n).map_err(|e| Stop::core("truncation-conditions", e))?;
    let gate_passed = gate.passed;
    reports.push(gate);
    if !gate_passed {
        return Ok((reports, None));
    }
    let tau = Arc::new(
        build_tau_over(a.clone(), inputs.b.clone(), &sigma, &delta).map_err(|e| Stop::core("build-tau", e))?,
    );
    match twisted_algebra(tau.clone()) {
        Ok(tw) => {
            reports.extend(tw.certificate().children.iter().cloned());
            Ok((reports, Some(Arc::new(tw))))
        }
        Err(CoreError::TwistAxioms(_)) => {
            reports.push(verify_twisting_axioms(&tau));
            Ok((reports, None))
        }
        Err(CoreError::InvariantBreach(_)) => {
            reports.push(verify_twisting_axioms(&tau));
            let product = twisted_product_unchecked(&tau).map_err(|e| Stop::core("associativity", e))?;
            reports.push(check_associativity(&product));
            Ok((reports, None))
        }
        Err(e) => Err(Stop::core("twisted-algebra", e)),
    }
}

fn load_inputs(path: &Path) -> anyhow::Result<Inputs> {
    SpecFile::read(path)?.inputs()
}

fn module_reports(tw: &Arc<TwistedAlgebra>, inputs: &Inputs) -> Result<Vec<Report>, Stop> {
    let Some(m) = &inputs.module else {
        return Ok(Vec::new());
    };
    let module = match TTPModule::from_generator_actions(tw.clone(), m.x.clone(), m.y.clone()) {
        Ok(module) => Arc::new(module),
        Err(e) => return Err(Stop::core("module-axioms", e)),
    };
    let mut reports = vec![module.check_axioms(), compat_conditions_report(&module, &m.phi)];
    match build_tau_bm(module, &m.phi) {
        Ok(cm) => reports.push(verify_compatibility(&cm).report),
        Err(e) if is_input_error(&e) => return Err(Stop::core("compatibility", e)),
        Err(e) => reports.push(error_report("compatibility", &e)),
    }
    Ok(reports)
}

pub fn cmd_verify(spec: &Path) -> Outcome {
    const CMD: &str = "verify";
    let inputs = match load_inputs(spec) {
        Ok(i) => i,
        Err(e) => return Outcome::bad_input(CMD, e),
    };
    let run = || -> Result<Report, Stop> {
        let (mut reports, tw) = certify_twist(&inputs)?;
        if let Some(tw) = tw {
            reports.extend(module_reports(&tw, &inputs)?);
        }
        Ok(Report::all("verify", reports))
    };
    finish(CMD, run())
}

fn finish(cmd: &'static str, r: Result<Report, Stop>) -> Outcome {
    match r {
        Ok(report) => Outcome::from_report(cmd, report),
        Err(Stop::Input(e)) => Outcome::bad_input(cmd, e),
        Err(Stop::Failed(report)) => Outcome::from_report(cmd, Report::all(cmd, vec![*report])),
    }
}

pub fn cmd_resolve(spec: &Path, degree: usize, out: &Path) -> Outcome {
    const CMD: &str = "resolve";
    let inputs = match load_inputs(spec) {
        Ok(i) => i,
        Err(e) => return Outcome::bad_input(CMD, e),
    };
    if degree < 1 {
        return Outcome::bad_input(CMD, anyhow!("--degree must be at least 1"));
    }
    if inputs.module.is_some() {
        warn!("resolve builds the resolution of the ground field; the module block is ignored");
    }
    let (mut reports, tw) = match certify_twist(&inputs) {
        Ok(x) => x,
        Err(e) => return finish(CMD, Err(e)),
    };
    let Some(tw) = tw else {
        return Outcome::from_report(CMD, Report::all(CMD, reports));
    };
    info!("resolving through degree {degree}");
    let resolution = match resolve_ground_field(&tw, degree) {
        Ok(r) => r,
        Err(e) => return finish(CMD, Err(Stop::core("resolution", e))),
    };
    reports.push(resolution.report.clone());
    let report = Report::all(CMD, reports);
    let mut outcome = Outcome::from_report(CMD, report);
    if outcome.exit() == Exit::Pass {
        let file = ComplexFile::from_complex(resolution.complex(), tw.a().dim(), tw.b().dim());
        if let Err(e) = file.write(out) {
            return Outcome::bad_input(CMD, e);
        }
        outcome.output = Some(out.to_path_buf());
    }
    outcome
}

pub fn cmd_check(path: &Path, exact_through: Option<usize>) -> Outcome {
    const CMD: &str = "check";
    let parsed = ComplexFile::read(path).and_then(|(file, text)| Ok((file.to_complex()?, file, text)));
    let (complex, file, text) = match parsed {
        Ok(x) => x,
        Err(e) => return Outcome::bad_input(CMD, e),
    };
    let through = exact_through.unwrap_or(complex.top());
    let exactness = match check_exactness(&complex, through) {
        Ok(r) => r,
        Err(e) => return Outcome::bad_input(CMD, anyhow!(e).context("--exact-through")),
    };
    let canonical = file.to_canonical_string() == text;
    let report = Report::all(
        CMD,
        vec![check_associativity(complex.algebra()), check_d_squared(&complex), exactness],
    )
    .with_note(format!("ranks {:?}", complex.ranks()))
    .with_note(format!("canonical encoding: {canonical}"));
    Outcome::from_report(CMD, report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    Nichols,
    Quantum,
}

#[derive(Clone, Debug, Default)]
pub struct Example4Args {
    pub p: Option<u64>,
    pub t: Option<usize>,
    pub alpha: Option<String>,
    pub preset: Option<Preset>,
    pub q: Option<String>,
    pub degree: usize,
}

pub fn cmd_example4(args: &Example4Args) -> Outcome {
    const CMD: &str = "example4";
    if args.degree < 1 {
        return Outcome::bad_input(CMD, anyhow!("--degree must be at least 1"));
    }
    if args.preset == Some(Preset::Quantum) {
        return quantum(args);
    }
    let params = match example_params(args) {
        Ok(p) => p,
        Err(e) => return Outcome::bad_input(CMD, e),
    };
    info!("cross-validating {params} through degree {}", args.degree);
    match cross_validate(&params, args.degree) {
        Ok(cv) => Outcome::from_report(
            CMD,
            Report::all(CMD, vec![cv.closed.report.clone(), cv.report.clone()]).with_note(params.to_string()),
        ),
        Err(e) => finish(CMD, Err(Stop::core("cross-validation", e))),
    }
}

fn example_params(args: &Example4Args) -> anyhow::Result<Example4Params> {
    let p = args.p.context("--p is required")?;
    if args.preset == Some(Preset::Nichols) {
        if args.t.is_some() || args.alpha.is_some() {
            bail!("--preset nichols fixes t = 2 and alpha = 1/2");
        }
        return Ok(Example4Params::nichols(p)?);
    }
    let t = args.t.context("--t is required without a preset")?;
    let alpha = args.alpha.as_deref().context("--alpha is required without a preset")?;
    let field = FieldSpec::prime(p)?;
    let alpha = field.parse(alpha).context("--alpha")?;
    Ok(Example4Params::new(p, t, alpha)?)
}

fn quantum(args: &Example4Args) -> Outcome {
    const CMD: &str = "example4";
    let setup = || -> anyhow::Result<Arc<TwistedAlgebra>> {
        let p = args.p.context("--p is required (0 for the rationals)")?;
        let field = FieldSpec::new(p)?;
        let q = field.parse(args.q.as_deref().context("--preset quantum needs --q")?).context("--q")?;
        Ok(quantum_twisted_algebra(field, &q)?)
    };
    let tw = match setup() {
        Ok(tw) => tw,
        Err(e) => return Outcome::bad_input(CMD, e),
    };
    match resolve_ground_field(&tw, args.degree) {
        Ok(r) => Outcome::from_report(CMD, Report::all(CMD, vec![tw.certificate().clone(), r.report])),
        Err(e) => finish(CMD, Err(Stop::core("resolution", e))),
    }
}
