//! Experiment dispatch shared by the command-line binary and the tests.
//!
//! A [`RunSpec`] names one experiment, the configuration file that drives
//! it, and how to emit the result. [`dispatch`] runs it end to end and
//! returns the process exit code: 0 on success, 1 for configuration or
//! validation problems, 2 for runtime failures such as an undefined weak
//! value. Data goes to the output stream (or file) only; every diagnostic
//! goes to the error stream. File output is written to a temporary sibling
//! and renamed into place, so a failed run never leaves a partial file.
//!
//! Configuration keys per subcommand (grammar in [`crate::config`]):
//!
//! * `walk`, `walk-exact`: `width`, `horizon`, `epsilon`, `initial_x`,
//!   `initial_v`, `final_x`, `final_v`, plus `tries`, `seed`, `workers`
//!   (the last three are ignored by `walk-exact`).
//! * `abl`, `weak`: `pre`, `post`, `observable` and optionally
//!   `measurement_index` (default 0) with unitary steps `step1`, `step2`, ...
//! * `hbt`: `mode` (`coherent` | `phase_averaged` | `distinguishable`) and
//!   `phase` (radians, default 0).
//! * `splitter`: `phi1`, `phi2`.
//! * `slit`: `source_x`, `source_y`, `detector_x`, `detector_y`,
//!   `slit_a_center`, `slit_a_width`, `slit_b_center`, `slit_b_width`,
//!   `wave_number`.
//! * `laser`: `n2`, `n1`, `w`, `kappa`, `n0`, `t_end`, `dt`.
//! * `born-recovery`: `pre`, `observable`, `samples`, `seed`.
//!
//! `--seed` and `--workers` override the config values; unknown keys for the
//! chosen subcommand are rejected.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::config::{parse_config, ConfigDocument, ConfigError, Entry};
use crate::interference::{
    hbt_coincidence, slit_intensities, splitter_outputs, stationary_point, HbtMode, HbtSetup,
    SlitGeometry,
};
use crate::laser::{simulate, LaserParams};
use crate::report::{render, roundtrip, significant, Format, ProfileReport, Report, RowsReport};
use crate::tsvf::{
    abl_probability, born_recovery, weak_value, Operator, StateVector, TwoStateScenario,
};
use crate::walk::{exact_conditioned_density, run_ensemble, WalkConfig};

/// The experiments reachable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Walk,
    WalkExact,
    Abl,
    Weak,
    Hbt,
    Splitter,
    Slit,
    Laser,
    BornRecovery,
}

impl Subcommand {
    pub fn name(&self) -> &'static str {
        match self {
            Subcommand::Walk => "walk",
            Subcommand::WalkExact => "walk-exact",
            Subcommand::Abl => "abl",
            Subcommand::Weak => "weak",
            Subcommand::Hbt => "hbt",
            Subcommand::Splitter => "splitter",
            Subcommand::Slit => "slit",
            Subcommand::Laser => "laser",
            Subcommand::BornRecovery => "born-recovery",
        }
    }
}

/// One fully specified run.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub subcommand: Subcommand,
    pub config_path: PathBuf,
    /// Target file; standard output when absent.
    pub output_path: Option<PathBuf>,
    /// Overrides the config `seed`.
    pub seed: Option<u64>,
    /// Overrides the config `workers`.
    pub workers: Option<usize>,
    pub format: Format,
}

/// Exit code for configuration and validation failures.
pub const EXIT_CONFIG: i32 = 1;

/// Exit code for runtime failures.
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
enum CliError {
    /// Bad input: config syntax, types, unknown keys, invalid parameters.
    Config(String),
    /// The experiment itself failed or the result could not be written.
    Runtime(String),
}

impl From<ConfigError> for CliError {
    fn from(error: ConfigError) -> Self {
        CliError::Config(error.to_string())
    }
}

/// Runs the experiment described by `spec`, writing data to `out` (or the
/// spec's output file) and diagnostics to `diag`. Returns the exit code.
pub fn dispatch(spec: &RunSpec, out: &mut dyn Write, diag: &mut dyn Write) -> i32 {
    let (report, notes) = match execute(spec) {
        Ok(result) => result,
        Err(error) => return report_error(&error, diag),
    };
    let rendered = match render(&report, spec.format) {
        Ok(rendered) => rendered,
        Err(error) => return report_error(&CliError::Config(error.to_string()), diag),
    };
    for note in notes {
        let _ = writeln!(diag, "note: {note}");
    }
    for warning in &rendered.warnings {
        let _ = writeln!(diag, "warning: {warning}");
    }
    let write_result = match &spec.output_path {
        Some(path) => atomic_write(path, &rendered.text)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display()))),
        None => out
            .write_all(rendered.text.as_bytes())
            .map_err(|e| CliError::Runtime(format!("cannot write output: {e}"))),
    };
    match write_result {
        Ok(()) => 0,
        Err(error) => report_error(&error, diag),
    }
}

fn report_error(error: &CliError, diag: &mut dyn Write) -> i32 {
    match error {
        CliError::Config(message) => {
            let _ = writeln!(diag, "error: {message}");
            EXIT_CONFIG
        }
        CliError::Runtime(message) => {
            let _ = writeln!(diag, "error: {message}");
            EXIT_RUNTIME
        }
    }
}

/// Writes via a temporary sibling plus rename, so the target appears
/// complete or not at all.
fn atomic_write(path: &Path, text: &str) -> std::io::Result<()> {
    let parent = match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => dir,
        _ => Path::new("."),
    };
    let mut file = tempfile::NamedTempFile::new_in(parent)?;
    file.write_all(text.as_bytes())?;
    file.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn execute(spec: &RunSpec) -> Result<(Report, Vec<String>), CliError> {
    let text = std::fs::read_to_string(&spec.config_path).map_err(|e| {
        CliError::Config(format!(
            "cannot read config {}: {e}",
            spec.config_path.display()
        ))
    })?;
    let doc = parse_config(&text)?;
    check_keys(&doc, spec.subcommand)?;
    match spec.subcommand {
        Subcommand::Walk => run_walk(spec, &doc),
        Subcommand::WalkExact => run_walk_exact(&doc),
        Subcommand::Abl => run_abl(&doc),
        Subcommand::Weak => run_weak(&doc),
        Subcommand::Hbt => run_hbt(&doc),
        Subcommand::Splitter => run_splitter(&doc),
        Subcommand::Slit => run_slit(&doc),
        Subcommand::Laser => run_laser(&doc),
        Subcommand::BornRecovery => run_born_recovery(spec, &doc),
    }
}

const WALK_KEYS: &[&str] = &[
    "width",
    "horizon",
    "epsilon",
    "initial_x",
    "initial_v",
    "final_x",
    "final_v",
    "tries",
    "seed",
    "workers",
];
const SCENARIO_KEYS: &[&str] = &["pre", "post", "observable", "measurement_index"];
const HBT_KEYS: &[&str] = &["mode", "phase"];
const SPLITTER_KEYS: &[&str] = &["phi1", "phi2"];
const SLIT_KEYS: &[&str] = &[
    "source_x",
    "source_y",
    "detector_x",
    "detector_y",
    "slit_a_center",
    "slit_a_width",
    "slit_b_center",
    "slit_b_width",
    "wave_number",
];
const LASER_KEYS: &[&str] = &["n2", "n1", "w", "kappa", "n0", "t_end", "dt"];
const BORN_KEYS: &[&str] = &["pre", "observable", "samples", "seed"];

fn is_step_key(key: &str) -> bool {
    key.strip_prefix("step")
        .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
}

fn check_keys(doc: &ConfigDocument, subcommand: Subcommand) -> Result<(), CliError> {
    let allowed: &[&str] = match subcommand {
        Subcommand::Walk | Subcommand::WalkExact => WALK_KEYS,
        Subcommand::Abl | Subcommand::Weak => SCENARIO_KEYS,
        Subcommand::Hbt => HBT_KEYS,
        Subcommand::Splitter => SPLITTER_KEYS,
        Subcommand::Slit => SLIT_KEYS,
        Subcommand::Laser => LASER_KEYS,
        Subcommand::BornRecovery => BORN_KEYS,
    };
    let allow_steps = matches!(subcommand, Subcommand::Abl | Subcommand::Weak);
    for entry in doc.entries() {
        if allowed.contains(&entry.key.as_str()) || (allow_steps && is_step_key(&entry.key)) {
            continue;
        }
        return Err(ConfigError::UnknownKey {
            key: entry.key.clone(),
            line: entry.line,
            subcommand: subcommand.name().to_string(),
        }
        .into());
    }
    Ok(())
}

fn bind_walk_config(doc: &ConfigDocument) -> Result<WalkConfig, CliError> {
    WalkConfig::new(
        doc.require("width")?.as_usize()?,
        doc.require("horizon")?.as_usize()?,
        doc.require("epsilon")?.as_f64()?,
        doc.require("initial_x")?.as_i64()?,
        doc.require("initial_v")?.as_i32()?,
        doc.require("final_x")?.as_i64()?,
        doc.require("final_v")?.as_i32()?,
    )
    .map_err(|e| CliError::Config(e.to_string()))
}

fn resolve_seed(spec: &RunSpec, doc: &ConfigDocument) -> Result<u64, CliError> {
    match spec.seed {
        Some(seed) => Ok(seed),
        None => match doc.get("seed") {
            Some(entry) => Ok(entry.as_u64()?),
            None => Ok(0),
        },
    }
}

fn resolve_workers(spec: &RunSpec, doc: &ConfigDocument) -> Result<usize, CliError> {
    let workers = match spec.workers {
        Some(workers) => workers,
        None => match doc.get("workers") {
            Some(entry) => entry.as_usize()?,
            None => 1,
        },
    };
    if workers == 0 {
        return Err(CliError::Config("workers must be at least 1".to_string()));
    }
    Ok(workers)
}

fn run_walk(spec: &RunSpec, doc: &ConfigDocument) -> Result<(Report, Vec<String>), CliError> {
    let config = bind_walk_config(doc)?;
    let tries = doc.require("tries")?.as_u64()?;
    if tries == 0 {
        return Err(CliError::Config("tries must be at least 1".to_string()));
    }
    let seed = resolve_seed(spec, doc)?;
    let workers = resolve_workers(spec, doc)?;
    let profile = run_ensemble(&config, tries, seed, workers)
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    let bins = (config.horizon + 1) * config.width;
    let mut counts = Vec::with_capacity(bins);
    let mut frequencies = Vec::with_capacity(bins);
    for t in 0..=config.horizon {
        for x in 0..config.width {
            counts.push(profile.count(t, x));
            frequencies.push(profile.frequency(t, x));
        }
    }
    let note = format!(
        "accepted {} of {} tries (rate {})",
        profile.accepted(),
        profile.tries(),
        roundtrip(profile.acceptance_rate())
    );
    Ok((
        Report::Profile(ProfileReport {
            width: config.width,
            horizon: config.horizon,
            counts: Some(counts),
            frequencies,
            accepted: Some(profile.accepted()),
            tries: Some(profile.tries()),
            total_weight: None,
        }),
        vec![note],
    ))
}

fn run_walk_exact(doc: &ConfigDocument) -> Result<(Report, Vec<String>), CliError> {
    let config = bind_walk_config(doc)?;
    let density =
        exact_conditioned_density(&config).map_err(|e| CliError::Runtime(e.to_string()))?;
    let mut frequencies = Vec::with_capacity((config.horizon + 1) * config.width);
    for t in 0..=config.horizon {
        for x in 0..config.width {
            frequencies.push(density.frequency(t, x));
        }
    }
    let note = format!(
        "total weight {} (acceptance probability of rejection sampling)",
        roundtrip(density.total_weight())
    );
    Ok((
        Report::Profile(ProfileReport {
            width: config.width,
            horizon: config.horizon,
            counts: None,
            frequencies,
            accepted: None,
            tries: None,
            total_weight: Some(density.total_weight()),
        }),
        vec![note],
    ))
}

fn state_vector(entry: &Entry) -> Result<StateVector, CliError> {
    StateVector::new(entry.as_complex_vector()?).map_err(|e| CliError::Config(e.to_string()))
}

fn operator(entry: &Entry) -> Result<Operator, CliError> {
    Operator::from_rows(entry.as_complex_matrix()?).map_err(|e| CliError::Config(e.to_string()))
}

fn bind_scenario(doc: &ConfigDocument) -> Result<TwoStateScenario, CliError> {
    let pre = state_vector(doc.require("pre")?)?;
    let post = state_vector(doc.require("post")?)?;
    let observable = operator(doc.require("observable")?)?;
    let mut steps: Vec<(usize, Operator)> = Vec::new();
    for entry in doc.entries() {
        if is_step_key(&entry.key) {
            let index: usize = entry.key["step".len()..].parse().map_err(|_| {
                CliError::Config(format!("step index in `{}` overflows", entry.key))
            })?;
            steps.push((index, operator(entry)?));
        }
    }
    steps.sort_by_key(|(index, _)| *index);
    for (position, (index, _)) in steps.iter().enumerate() {
        if *index != position + 1 {
            return Err(CliError::Config(
                "evolution steps must be numbered contiguously from step1".to_string(),
            ));
        }
    }
    let measurement_index = match doc.get("measurement_index") {
        Some(entry) => entry.as_usize()?,
        None => 0,
    };
    TwoStateScenario::new(
        pre,
        post,
        steps.into_iter().map(|(_, step)| step).collect(),
        observable,
        measurement_index,
    )
    .map_err(|e| CliError::Config(e.to_string()))
}

fn run_abl(doc: &ConfigDocument) -> Result<(Report, Vec<String>), CliError> {
    let scenario = bind_scenario(doc)?;
    let probabilities = abl_probability(&scenario).map_err(|e| CliError::Runtime(e.to_string()))?;
    let eigenvalues = scenario
        .observable()
        .eigendecompose()
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    let rows = eigenvalues
        .eigenvalues()
        .iter()
        .zip(&probabilities)
        .map(|(value, probability)| vec![roundtrip(*value), roundtrip(*probability)])
        .collect();
    Ok((
        Report::Rows(RowsReport {
            columns: vec!["eigenvalue".into(), "probability".into()],
            rows,
        }),
        Vec::new(),
    ))
}

fn run_weak(doc: &ConfigDocument) -> Result<(Report, Vec<String>), CliError> {
    let scenario = bind_scenario(doc)?;
    let value = weak_value(&scenario).map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok((
        Report::Rows(RowsReport {
            columns: vec!["quantity".into(), "value".into()],
            rows: vec![
                vec!["weak_value_re".into(), roundtrip(value.re)],
                vec!["weak_value_im".into(), roundtrip(value.im)],
            ],
        }),
        Vec::new(),
    ))
}

fn run_hbt(doc: &ConfigDocument) -> Result<(Report, Vec<String>), CliError> {
    let mode = match doc.require("mode")?.as_keyword()? {
        "coherent" => HbtMode::Coherent,
        "phase_averaged" => HbtMode::PhaseAveraged,
        "distinguishable" => HbtMode::Distinguishable,
        other => {
            return Err(CliError::Config(format!(
                "mode must be coherent, phase_averaged or distinguishable, got `{other}`"
            )))
        }
    };
    let phase = match doc.get("phase") {
        Some(entry) => entry.as_f64()?,
        None => 0.0,
    };
    let setup = HbtSetup {
        phase_difference: phase,
        mode,
    };
    Ok((
        Report::Rows(RowsReport {
            columns: vec!["quantity".into(), "value".into()],
            rows: vec![vec![
                "enhancement".into(),
                roundtrip(hbt_coincidence(&setup)),
            ]],
        }),
        Vec::new(),
    ))
}

fn run_splitter(doc: &ConfigDocument) -> Result<(Report, Vec<String>), CliError> {
    let phi1 = doc.require("phi1")?.as_f64()?;
    let phi2 = doc.require("phi2")?.as_f64()?;
    let (suppressed, enhanced) = splitter_outputs(phi1, phi2);
    Ok((
        Report::Rows(RowsReport {
            columns: vec!["quantity".into(), "value".into()],
            rows: vec![
                vec!["p_out1".into(), roundtrip(suppressed)],
                vec!["p_out2".into(), roundtrip(enhanced)],
            ],
        }),
        Vec::new(),
    ))
}

fn run_slit(doc: &ConfigDocument) -> Result<(Report, Vec<String>), CliError> {
    let geometry = SlitGeometry::new(
        (
            doc.require("source_x")?.as_f64()?,
            doc.require("source_y")?.as_f64()?,
        ),
        (
            doc.require("detector_x")?.as_f64()?,
            doc.require("detector_y")?.as_f64()?,
        ),
        doc.require("slit_a_center")?.as_f64()?,
        doc.require("slit_a_width")?.as_f64()?,
        doc.require("slit_b_center")?.as_f64()?,
        doc.require("slit_b_width")?.as_f64()?,
        doc.require("wave_number")?.as_f64()?,
    )
    .map_err(|e| CliError::Config(e.to_string()))?;
    let stationary = stationary_point(&geometry).map_err(|e| CliError::Runtime(e.to_string()))?;
    let report = slit_intensities(&geometry).map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok((
        Report::Rows(RowsReport {
            columns: vec!["quantity".into(), "value".into()],
            rows: vec![
                vec!["stationary_x".into(), roundtrip(stationary)],
                vec!["amp_a_re".into(), roundtrip(report.amp_a.re)],
                vec!["amp_a_im".into(), roundtrip(report.amp_a.im)],
                vec!["amp_b_re".into(), roundtrip(report.amp_b.re)],
                vec!["amp_b_im".into(), roundtrip(report.amp_b.im)],
                vec!["intensity_a".into(), roundtrip(report.intensity_a)],
                vec!["intensity_b".into(), roundtrip(report.intensity_b)],
                vec!["detour_ratio".into(), roundtrip(report.detour_ratio)],
            ],
        }),
        Vec::new(),
    ))
}

fn run_laser(doc: &ConfigDocument) -> Result<(Report, Vec<String>), CliError> {
    let params = LaserParams::new(
        doc.require("n2")?.as_f64()?,
        doc.require("n1")?.as_f64()?,
        doc.require("w")?.as_f64()?,
        doc.require("kappa")?.as_f64()?,
    )
    .map_err(|e| CliError::Config(e.to_string()))?;
    let n0 = doc.require("n0")?.as_f64()?;
    let t_end = doc.require("t_end")?.as_f64()?;
    let dt = doc.require("dt")?.as_f64()?;
    let series = simulate(&params, n0, t_end, dt).map_err(|e| CliError::Config(e.to_string()))?;
    let rows = series
        .times
        .iter()
        .zip(&series.photon_counts)
        .map(|(t, n)| vec![significant(*t), significant(*n)])
        .collect();
    Ok((
        Report::Rows(RowsReport {
            columns: vec!["t".into(), "n".into()],
            rows,
        }),
        Vec::new(),
    ))
}

fn run_born_recovery(
    spec: &RunSpec,
    doc: &ConfigDocument,
) -> Result<(Report, Vec<String>), CliError> {
    let pre = state_vector(doc.require("pre")?)?;
    let observable = operator(doc.require("observable")?)?;
    let samples = doc.require("samples")?.as_usize()?;
    if samples < crate::tsvf::MIN_BORN_SAMPLES {
        return Err(CliError::Config(format!(
            "samples must be at least {}",
            crate::tsvf::MIN_BORN_SAMPLES
        )));
    }
    let seed = resolve_seed(spec, doc)?;
    let recovery = born_recovery(&pre, &observable, samples, seed)
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    let rows = recovery
        .eigenvalues
        .iter()
        .zip(recovery.means.iter().zip(&recovery.std_errors))
        .map(|(value, (mean, std_error))| {
            vec![
                roundtrip(*value),
                significant(*mean),
                significant(*std_error),
            ]
        })
        .collect();
    let note = format!(
        "averaged {} samples ({} discarded for vanishing denominators)",
        recovery.samples_used, recovery.discarded
    );
    Ok((
        Report::Rows(RowsReport {
            columns: vec!["eigenvalue".into(), "mean".into(), "std_error".into()],
            rows,
        }),
        vec![note],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_config(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
        let path = dir.path().join(name);
        let mut file = std::fs::File::create(&path).unwrap();
        file.write_all(text.as_bytes()).unwrap();
        path
    }

    fn spec(subcommand: Subcommand, config_path: PathBuf) -> RunSpec {
        RunSpec {
            subcommand,
            config_path,
            output_path: None,
            seed: None,
            workers: None,
            format: Format::Csv,
        }
    }

    fn run(spec: &RunSpec) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut diag = Vec::new();
        let code = dispatch(spec, &mut out, &mut diag);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(diag).unwrap(),
        )
    }

    #[test]
    fn hbt_factor_two_in_csv() {
        let dir = tempfile::tempdir().unwrap();
        let config = write_config(&dir, "hbt.cfg", "mode = coherent\nphase = 0.0\n");
        let (code, out, _) = run(&spec(Subcommand::Hbt, config));
        assert_eq!(code, 0);
        assert!(out.contains("enhancement,2.0"), "{out}");
    }

    #[test]
    fn weak_orthogonal_boundaries_exit_2() {
        let dir = tempfile::tempdir().unwrap();
        let config = write_config(
            &dir,
            "weak.cfg",
            "pre = [1+0i, 0+0i]\npost = [0+0i, 1+0i]\nobservable = [[1, 0], [0, -1]]\n",
        );
        let (code, out, diag) = run(&spec(Subcommand::Weak, config));
        assert_eq!(code, EXIT_RUNTIME);
        assert!(out.is_empty());
        assert!(diag.contains("undefined weak value"), "{diag}");
    }

    #[test]
    fn unknown_key_is_a_config_error() {
        let dir = tempfile::tempdir().unwrap();
        let config = write_config(&dir, "bad.cfg", "phi1 = 0.0\nphi2 = 0.0\nepsilon = 0.1\n");
        let (code, _, diag) = run(&spec(Subcommand::Splitter, config));
        assert_eq!(code, EXIT_CONFIG);
        assert!(diag.contains("unknown key `epsilon`"), "{diag}");
    }

    #[test]
    fn missing_config_file_is_a_config_error() {
        let missing = spec(Subcommand::Hbt, PathBuf::from("/nonexistent/x.cfg"));
        let (code, _, diag) = run(&missing);
        assert_eq!(code, EXIT_CONFIG);
        assert!(diag.contains("cannot read config"));
    }

    #[test]
    fn abl_qubit_distribution() {
        let dir = tempfile::tempdir().unwrap();
        let config = write_config(
            &dir,
            "abl.cfg",
            "pre = [1+0i, 0+0i]\npost = [1+0i, 1+0i]\nobservable = [[1, 0], [0, -1]]\n",
        );
        let (code, out, _) = run(&spec(Subcommand::Abl, config));
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "eigenvalue,probability");
        assert_eq!(lines[1], "-1.0,0.0");
        assert_eq!(lines[2], "1.0,1.0");
    }

    #[test]
    fn walk_runs_are_deterministic_and_atomic() {
        let dir = tempfile::tempdir().unwrap();
        let config = write_config(
            &dir,
            "walk.cfg",
            "width = 16\nhorizon = 10\nepsilon = 0.1\ninitial_x = 0\ninitial_v = 1\n\
             final_x = 0\nfinal_v = 0\ntries = 20000\nseed = 5\nworkers = 2\n",
        );
        let first_path = dir.path().join("first.csv");
        let second_path = dir.path().join("second.csv");
        let mut first_spec = spec(Subcommand::Walk, config.clone());
        first_spec.output_path = Some(first_path.clone());
        let mut second_spec = spec(Subcommand::Walk, config);
        second_spec.output_path = Some(second_path.clone());
        let (first_code, _, diag) = run(&first_spec);
        let (second_code, _, _) = run(&second_spec);
        assert_eq!(first_code, 0);
        assert_eq!(second_code, 0);
        assert!(diag.contains("accepted"), "{diag}");
        let first = std::fs::read(&first_path).unwrap();
        let second = std::fs::read(&second_path).unwrap();
        assert!(!first.is_empty());
        assert_eq!(first, second);
    }

    #[test]
    fn failed_run_leaves_no_output_file() {
        let dir = tempfile::tempdir().unwrap();
        let config = write_config(
            &dir,
            "weak.cfg",
            "pre = [1+0i, 0+0i]\npost = [0+0i, 1+0i]\nobservable = [[1, 0], [0, -1]]\n",
        );
        let output = dir.path().join("weak.csv");
        let mut failing = spec(Subcommand::Weak, config);
        failing.output_path = Some(output.clone());
        let (code, _, _) = run(&failing);
        assert_eq!(code, EXIT_RUNTIME);
        assert!(!output.exists());
    }

    #[test]
    fn seed_override_changes_the_histogram() {
        let dir = tempfile::tempdir().unwrap();
        let config = write_config(
            &dir,
            "walk.cfg",
            "width = 16\nhorizon = 10\nepsilon = 0.1\ninitial_x = 0\ninitial_v = 1\n\
             final_x = 0\nfinal_v = 0\ntries = 20000\nseed = 5\nworkers = 1\n",
        );
        let base = spec(Subcommand::Walk, config.clone());
        let mut overridden = spec(Subcommand::Walk, config);
        overridden.seed = Some(6);
        let (_, base_out, _) = run(&base);
        let (_, overridden_out, _) = run(&overridden);
        assert_ne!(base_out, overridden_out);
    }

    #[test]
    fn ascii_format_for_scalar_results_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let config = write_config(&dir, "hbt.cfg", "mode = coherent\n");
        let mut bad = spec(Subcommand::Hbt, config);
        bad.format = Format::Ascii;
        let (code, _, diag) = run(&bad);
        assert_eq!(code, EXIT_CONFIG);
        assert!(diag.contains("cannot render"), "{diag}");
    }

    #[test]
    fn walk_exact_tolerates_sampling_keys() {
        let dir = tempfile::tempdir().unwrap();
        let config = write_config(
            &dir,
            "walk.cfg",
            "width = 16\nhorizon = 10\nepsilon = 0.1\ninitial_x = 0\ninitial_v = 1\n\
             final_x = 0\nfinal_v = 0\ntries = 20000\nseed = 5\nworkers = 2\n",
        );
        let (code, out, diag) = run(&spec(Subcommand::WalkExact, config));
        assert_eq!(code, 0);
        assert!(out.starts_with("t,x,frequency\n"));
        assert!(diag.contains("total weight"), "{diag}");
    }

    #[test]
    fn scenario_with_steps_and_split_measurement() {
        let dir = tempfile::tempdir().unwrap();
        let config = write_config(
            &dir,
            "abl.cfg",
            "pre = [1+0i, 0+0i]\n\
             post = [1+0i, 1+0i]\n\
             observable = [[1, 0], [0, -1]]\n\
             step1 = [[0, 1], [1, 0]]\n\
             measurement_index = 1\n",
        );
        let (code, out, _) = run(&spec(Subcommand::Abl, config));
        assert_eq!(code, 0);
        // Pre evolves through the flip to |1>: all weight on eigenvalue -1.
        assert!(out.contains("-1.0,1.0"), "{out}");
    }

    #[test]
    fn non_contiguous_steps_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let config = write_config(
            &dir,
            "abl.cfg",
            "pre = [1+0i, 0+0i]\npost = [1+0i, 1+0i]\nobservable = [[1, 0], [0, -1]]\n\
             step2 = [[0, 1], [1, 0]]\n",
        );
        let (code, _, diag) = run(&spec(Subcommand::Abl, config));
        assert_eq!(code, EXIT_CONFIG);
        assert!(diag.contains("contiguously"), "{diag}");
    }

    #[test]
    fn laser_csv_has_pinned_significant_digits() {
        let dir = tempfile::tempdir().unwrap();
        let config = write_config(
            &dir,
            "laser.cfg",
            "n2 = 2.0\nn1 = 1.0\nw = 1.0\nkappa = 0.25\nn0 = 1.0\nt_end = 1.0\ndt = 0.5\n",
        );
        let (code, out, _) = run(&spec(Subcommand::Laser, config));
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "t,n");
        assert!(
            lines[1].starts_with("0.00000000000e0,1.00000000000e0"),
            "{}",
            lines[1]
        );
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn born_recovery_reports_means_and_errors() {
        let dir = tempfile::tempdir().unwrap();
        let config = write_config(
            &dir,
            "born.cfg",
            "pre = [1+0i, 0+0i]\nobservable = [[1, 0], [0, -1]]\nsamples = 200\nseed = 3\n",
        );
        let (code, out, diag) = run(&spec(Subcommand::BornRecovery, config));
        assert_eq!(code, 0);
        assert!(out.starts_with("eigenvalue,mean,std_error\n"));
        // pre = |0> is the +1 eigenvector: the mean concentrates there.
        assert!(out.contains("1.0,1.00000000000e0"), "{out}");
        assert!(diag.contains("averaged 200 samples"), "{diag}");
    }
}
