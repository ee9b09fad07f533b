//! Scenario runner and artifact emission.
//!
//! A scenario is a single JSON document selecting one mode (`dispersion`,
//! `hill` or `verify`); running it writes deterministic CSV/JSON artifacts
//! plus a manifest echoing the inputs. Repeated runs of the same config
//! produce byte-identical data files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::arith::TrigPoly;
use crate::dispersion::{
    synthesize, uniform_axis, DispersionLaw, LawKind, ParticleParams, SpectrumGrid,
};
use crate::error::{Error, Result};
use crate::hill::{
    gamma_closed_form, iterated_operator_solve, nested_sum_eval, product_solution,
    recurrence_solve, Branch, FunctionalEquation, HFactorization, LatticeSolution,
};
use crate::oracle::{integrate_ode, OdeProblem};
use crate::specfun::Polynomial;
use crate::verify::{self, Suite};

// ---------------------------------------------------------------------------
// configuration
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ScenarioConfig {
    Dispersion(DispersionScenario),
    Hill(HillScenario),
    Verify(VerifyScenario),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn build(&self) -> Result<Vec<f64>> {
        uniform_axis(self.min, self.max, self.count)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParticleSpec {
    Preset { preset: String },
    Natural { natural_units: bool, l0: f64 },
    Si { m0: f64, c: f64, hbar: f64 },
}

impl ParticleSpec {
    pub fn build(&self) -> Result<ParticleParams> {
        match self {
            ParticleSpec::Preset { preset } => match preset.as_str() {
                "electron" => Ok(ParticleParams::electron()),
                "neutrino" => Ok(ParticleParams::neutrino()),
                other => Err(Error::InvalidInput(format!(
                    "unknown particle preset '{other}'"
                ))),
            },
            ParticleSpec::Natural { natural_units, l0 } => {
                if !natural_units {
                    return Err(Error::InvalidInput(
                        "set natural_units: true or give SI fields".into(),
                    ));
                }
                ParticleParams::natural(*l0)
            }
            ParticleSpec::Si { m0, c, hbar } => ParticleParams::si(*m0, *c, *hbar),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SpectrumSpec {
    Gaussian {
        center: f64,
        width: f64,
    },
    /// Explicit modes `(gamma, re, im)` placed on the nearest grid sample.
    Modes {
        modes: Vec<(f64, f64, f64)>,
    },
}

impl SpectrumSpec {
    pub fn build(&self, axis: Vec<f64>, band: Option<f64>) -> Result<SpectrumGrid> {
        match self {
            SpectrumSpec::Gaussian { center, width } => {
                SpectrumGrid::gaussian_1d(axis, *center, *width, band)
            }
            SpectrumSpec::Modes { modes } => {
                let mut amps = vec![Complex64::default(); axis.len()];
                for &(gamma, re, im) in modes {
                    let idx = axis
                        .iter()
                        .enumerate()
                        .min_by(|a, b| {
                            (a.1 - gamma)
                                .abs()
                                .partial_cmp(&(b.1 - gamma).abs())
                                .unwrap()
                        })
                        .map(|(i, _)| i)
                        .ok_or_else(|| Error::InvalidInput("empty axis".into()))?;
                    amps[idx] += Complex64::new(re, im);
                }
                SpectrumGrid::new_1d(axis, amps, band)
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DispersionScenario {
    pub particle: ParticleSpec,
    pub laws: Vec<LawKind>,
    pub grid: AxisSpec,
    pub spectrum: SpectrumSpec,
    pub times: Vec<f64>,
    pub x_window: AxisSpec,
    #[serde(default)]
    pub curve_points: Option<usize>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum HillMethod {
    Recurrence,
    Gamma,
    Product,
    Nested,
    Iterated,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HFactorSpec {
    pub c: (f64, f64),
    pub m: i32,
    #[serde(default)]
    pub r: Vec<(f64, f64)>,
    #[serde(default)]
    pub roots: Vec<(f64, f64)>,
    #[serde(default)]
    pub poles: Vec<(f64, f64)>,
    #[serde(default)]
    pub ratio: Option<(f64, f64)>,
}

impl HFactorSpec {
    fn build(&self) -> HFactorization {
        let to_c = |p: &(f64, f64)| Complex64::new(p.0, p.1);
        let mut h = HFactorization::monomial(to_c(&self.c), self.m)
            .with_exponent(Polynomial::new(self.r.iter().map(to_c)))
            .with_roots(self.roots.iter().map(to_c).collect())
            .with_poles(self.poles.iter().map(to_c).collect());
        if let Some(ratio) = &self.ratio {
            h = h.with_ratio(to_c(ratio));
        }
        h
    }
}

fn default_order() -> usize {
    24
}

fn default_depth() -> usize {
    5
}

fn default_iters() -> usize {
    30
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HillScenario {
    #[serde(default)]
    pub potential: Option<TrigPoly>,
    pub method: HillMethod,
    /// Operator polynomial `B`, ascending `(re, im)` coefficients;
    /// defaults to `z^2`.
    #[serde(default)]
    pub operator: Option<Vec<(f64, f64)>>,
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default)]
    pub branch: usize,
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default = "default_iters")]
    pub iters: usize,
    /// Complex probe point for residual reports.
    #[serde(default)]
    pub probe: Option<(f64, f64)>,
    #[serde(default)]
    pub nu: Option<(f64, f64)>,
    #[serde(default)]
    pub gamma_form: Option<HFactorSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyScenario {
    #[serde(default)]
    pub suite: Option<String>,
}

// ---------------------------------------------------------------------------
// plot data
// ---------------------------------------------------------------------------

/// One whitespace-separated column block of plot-ready data.
#[derive(Debug, Clone)]
pub struct PlotBlock {
    pub comment: String,
    pub rows: Vec<Vec<f64>>,
}

/// Write blocks separated by blank lines; an empty set produces a lone
/// header comment.
pub fn emit_plotdata<W: Write>(w: &mut W, blocks: &[PlotBlock]) -> Result<()> {
    if blocks.is_empty() {
        writeln!(w, "# no data")?;
        return Ok(());
    }
    for (i, block) in blocks.iter().enumerate() {
        if i > 0 {
            writeln!(w)?;
        }
        writeln!(w, "# {}", block.comment)?;
        for row in &block.rows {
            let cols: Vec<String> = row.iter().map(|x| format!("{x:.15e}")).collect();
            writeln!(w, "{}", cols.join(" "))?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// runner
// ---------------------------------------------------------------------------

/// Outcome of a scenario run.
#[derive(Debug)]
pub struct RunSummary {
    pub files: Vec<PathBuf>,
    /// `(passed, total)` when the scenario ran the verification suite.
    pub verified: Option<(usize, usize)>,
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Execute a scenario, writing artifacts under `out_dir`.
pub fn run_scenario(config: &ScenarioConfig, out_dir: &Path) -> Result<RunSummary> {
    fs::create_dir_all(out_dir)?;
    let mut files = Vec::new();
    let mut verified = None;
    match config {
        ScenarioConfig::Dispersion(s) => run_dispersion(s, out_dir, &mut files)?,
        ScenarioConfig::Hill(s) => run_hill(s, out_dir, &mut files)?,
        ScenarioConfig::Verify(s) => {
            let suite = Suite::parse(s.suite.as_deref())?;
            let outcomes = verify::run_suite(suite);
            for o in &outcomes {
                println!("{o}");
            }
            let passed = outcomes.iter().filter(|o| o.passed).count();
            verified = Some((passed, outcomes.len()));
            let report: Vec<_> = outcomes
                .iter()
                .map(|o| {
                    json!({
                        "id": o.id,
                        "name": o.name,
                        "suite": o.suite.label(),
                        "passed": o.passed,
                        "detail": o.detail,
                    })
                })
                .collect();
            files.push(write_json(out_dir, "verify_report.json", &json!(report))?);
        }
    }
    let manifest = json!({
        "config": config,
        "version": env!("CARGO_PKG_VERSION"),
        "tolerances": {
            "lambert_round_trip": 1e-13,
            "two_adic_identity": 1e-14,
            "binomial_series": 1e-12,
            "spectral_residual_k40": 1e-10,
            "unitarity_drift": 1e-15,
            "semigroup_composition": 1e-12,
            "ode_oracle_agreement": 1e-8,
            "gamma_functional_identity": 1e-9,
            "shift_coefficient_routes": 1e-8,
            "factorization_lattice": 1e-13,
            "product_telescoping": 1e-12,
            "mellin_lorentzian": 1e-6,
        },
        "outputs": files
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect::<Vec<_>>(),
    });
    files.push(write_json(out_dir, "manifest.json", &manifest)?);
    Ok(RunSummary { files, verified })
}

fn write_json(dir: &Path, name: &str, value: &serde_json::Value) -> Result<PathBuf> {
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(&path, text)?;
    Ok(path)
}

fn write_file(dir: &Path, name: &str, contents: &[u8]) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}

fn complex_pair(v: Option<(f64, f64)>, default: Complex64) -> Complex64 {
    v.map(|(re, im)| Complex64::new(re, im)).unwrap_or(default)
}

fn run_dispersion(s: &DispersionScenario, out: &Path, files: &mut Vec<PathBuf>) -> Result<()> {
    if s.laws.is_empty() {
        return Err(Error::InvalidInput("select at least one law".into()));
    }
    let params = s.particle.build()?;
    let axis = s.grid.build()?;
    let band_ok = axis.iter().all(|g| g.abs() < params.band_limit());
    let grid = s
        .spectrum
        .build(axis.clone(), band_ok.then(|| params.band_limit()))?;
    let xs = s.x_window.build()?;

    let mut blocks = Vec::new();
    for law_kind in &s.laws {
        let law = DispersionLaw::new(*law_kind, params);
        for (ti, &t) in s.times.iter().enumerate() {
            let evolved = grid.evolve(t, &law)?;
            let syn = synthesize(&evolved, &xs)?;
            let mut csv = Vec::new();
            writeln!(csv, "x,re,im,abs")?;
            let mut rows = Vec::with_capacity(xs.len());
            for (&x, v) in xs.iter().zip(&syn.values) {
                writeln!(
                    csv,
                    "{:.15e},{:.15e},{:.15e},{:.15e}",
                    x,
                    v.re,
                    v.im,
                    v.norm()
                )?;
                rows.push(vec![x, v.re, v.im, v.norm()]);
            }
            files.push(write_file(
                out,
                &format!("snapshot_{}_t{}.csv", law_kind.label(), ti),
                &csv,
            )?);
            blocks.push(PlotBlock {
                comment: format!("snapshot law={} t={t}", law_kind.label()),
                rows,
            });
        }
    }

    // dispersion curves over a band-safe range for all three laws
    let count = s.curve_points.unwrap_or(101).max(2);
    let limit = params.band_limit() * 0.99;
    let lo = s.grid.min.max(-limit);
    let hi = s.grid.max.min(limit);
    let curve_axis = uniform_axis(lo, hi, count)?;
    let mut csv = Vec::new();
    writeln!(csv, "gamma,e_schrodinger,e_relativistic,e_klein_gordon")?;
    let mut rows = Vec::with_capacity(count);
    for &g in &curve_axis {
        let es = DispersionLaw::new(LawKind::Schrodinger, params).energy(g)?;
        let er = DispersionLaw::new(LawKind::Relativistic, params).energy(g)?;
        let ek = DispersionLaw::new(LawKind::KleinGordon, params).energy(g)?;
        writeln!(csv, "{:.15e},{:.15e},{:.15e},{:.15e}", g, es, er, ek)?;
        rows.push(vec![g, es, er, ek]);
    }
    files.push(write_file(out, "dispersion_curves.csv", &csv)?);
    blocks.push(PlotBlock {
        comment: "dispersion curves: gamma, schrodinger, relativistic, klein_gordon".into(),
        rows,
    });

    let mut plot = Vec::new();
    emit_plotdata(&mut plot, &blocks)?;
    files.push(write_file(out, "plotdata.txt", &plot)?);
    Ok(())
}

fn hill_operator(s: &HillScenario) -> Polynomial {
    match &s.operator {
        Some(coeffs) => Polynomial::new(coeffs.iter().map(|&(re, im)| Complex64::new(re, im))),
        None => Polynomial::from_real([0.0, 0.0, 1.0]),
    }
}

fn require_potential(s: &HillScenario) -> Result<&TrigPoly> {
    s.potential
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("this method needs a potential".into()))
}

fn run_hill(s: &HillScenario, out: &Path, files: &mut Vec<PathBuf>) -> Result<()> {
    match s.method {
        HillMethod::Recurrence => {
            let v = require_potential(s)?;
            let b = hill_operator(s);
            let sol = recurrence_solve(v, &b, Branch::Index(s.branch), s.order)?;
            files.push(write_coefficients(out, "coefficients.csv", &sol)?);

            let xs = uniform_axis(0.0, v.period(), 257)?;
            let analytic = sol.ode_residual_max(&b, v, &xs);
            let vf = v.clone();
            let traj = integrate_ode(&OdeProblem {
                v: move |x: f64| vf.eval(x),
                x0: 0.0,
                y0: sol.eval(0.0),
                dy0: sol.eval_derivative(0.0, 1),
                x_end: v.period(),
                step: 1e-3,
            })?;
            let mut rk4_dev = 0.0f64;
            for (i, &x) in traj.xs.iter().enumerate().step_by(16) {
                rk4_dev = rk4_dev.max((traj.ys[i] - sol.eval(x)).norm());
            }
            let eq = FunctionalEquation::from_ode(&b, v);
            files.push(write_json(
                out,
                "ode_residual.json",
                &json!({
                    "analytic_max_residual": analytic,
                    "rk4_max_deviation": rk4_dev,
                    "lattice_residual_max": eq.lattice_residual_max(&sol),
                    "nu": [sol.nu().re, sol.nu().im],
                }),
            )?);
        }
        HillMethod::Gamma => {
            let spec = s
                .gamma_form
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("gamma method needs gamma_form".into()))?;
            let form = gamma_closed_form(&spec.build())?;
            let probes = strip_probes(100);
            let samples: Vec<_> = probes
                .iter()
                .map(|&z| {
                    let r = form.functional_residual(z)?;
                    Ok(json!({"z": [z.re, z.im], "normalized": r}))
                })
                .collect::<Result<_>>()?;
            files.push(write_json(
                out,
                "gamma_form.json",
                &json!({
                    "base": [form.base.re, form.base.im],
                    "gamma_power": form.gamma_power,
                    "r1": form.r1.coeffs().iter().map(|c| vec![c.re, c.im]).collect::<Vec<_>>(),
                    "roots": form.roots.iter().map(|c| vec![c.re, c.im]).collect::<Vec<_>>(),
                    "poles": form.poles.iter().map(|c| vec![c.re, c.im]).collect::<Vec<_>>(),
                }),
            )?);
            files.push(write_json(
                out,
                "functional_residuals.json",
                &json!(samples),
            )?);
        }
        HillMethod::Product => {
            let spec = s
                .gamma_form
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("product method needs gamma_form".into()))?;
            let h = spec.build();
            let z = complex_pair(s.probe, Complex64::new(0.8, 0.3));
            let sol = product_solution(|w| h.eval(w), Complex64::new(1.0, 0.0), z, s.order)?;
            files.push(write_json(
                out,
                "product.json",
                &json!({
                    "z": [z.re, z.im],
                    "value": [sol.value.re, sol.value.im],
                    "telescoping_deviation": sol.telescoping_deviation,
                    "equation_residual": sol.equation_residual,
                    "convergent": sol.convergent,
                    "terms": s.order,
                }),
            )?);
        }
        HillMethod::Nested => {
            let v = require_potential(s)?;
            let b = hill_operator(s);
            let z = complex_pair(s.probe, Complex64::new(0.3, 0.1));
            let report = nested_sum_eval(v, &b, z, s.depth)?;
            files.push(write_json(
                out,
                "nested.json",
                &json!({
                    "z": [z.re, z.im],
                    "depth": s.depth,
                    "value": [report.value.re, report.value.im],
                    "construction_residual": report.construction_residual,
                    "equation_residual": report.equation_residual,
                    "normalized_equation_residual": report.normalized_equation_residual,
                }),
            )?);
        }
        HillMethod::Iterated => {
            let v = require_potential(s)?;
            let nu = complex_pair(s.nu, Complex64::new(0.0, -1.0));
            let seed = LatticeSolution::delta_seed(nu, v.lattice_step(), s.order);
            let (sol, report) = iterated_operator_solve(v, nu, s.iters, &seed)?;
            files.push(write_coefficients(out, "coefficients.csv", &sol)?);
            files.push(write_json(
                out,
                "iterated.json",
                &json!({
                    "iterations": report.iterations,
                    "converged": report.converged,
                    "final_delta": report.final_delta,
                    "residuals": report.residuals,
                }),
            )?);
        }
    }
    Ok(())
}

fn write_coefficients(out: &Path, name: &str, sol: &LatticeSolution) -> Result<PathBuf> {
    let mut csv = Vec::new();
    writeln!(csv, "k,re,im")?;
    for (k, a) in sol.coeffs().iter().enumerate() {
        writeln!(csv, "{k},{:.15e},{:.15e}", a.re, a.im)?;
    }
    write_file(out, name, &csv)
}

/// Deterministic strip probe points shared by residual reports.
pub fn strip_probes(count: usize) -> Vec<Complex64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5d15);
    (0..count)
        .map(|_| Complex64::new(rng.gen_range(0.5..5.0), rng.gen_range(-3.0..3.0)))
        .collect()
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    fn demo_dispersion() -> ScenarioConfig {
        serde_json::from_str(include_str!("../../../configs/demo_dispersion.json")).unwrap()
    }

    fn demo_hill() -> ScenarioConfig {
        serde_json::from_str(include_str!("../../../configs/demo_hill.json")).unwrap()
    }

    fn read_all(dir: &Path) -> Vec<(String, Vec<u8>)> {
        let mut entries: Vec<_> = fs::read_dir(dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .collect();
        entries.sort();
        entries
            .into_iter()
            .map(|p| {
                (
                    p.file_name().unwrap().to_string_lossy().into_owned(),
                    fs::read(&p).unwrap(),
                )
            })
            .collect()
    }

    #[test]
    fn dispersion_demo_outputs_and_determinism() {
        let cfg = demo_dispersion();
        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        let s1 = run_scenario(&cfg, d1.path()).unwrap();
        let s2 = run_scenario(&cfg, d2.path()).unwrap();
        assert!(s1
            .files
            .iter()
            .any(|f| f.ends_with("dispersion_curves.csv")));
        assert!(s1.files.iter().any(|f| f
            .file_name()
            .unwrap()
            .to_string_lossy()
            .starts_with("snapshot_")));
        let a = read_all(d1.path());
        let b = read_all(d2.path());
        assert_eq!(a.len(), b.len());
        for ((name_a, bytes_a), (name_b, bytes_b)) in a.iter().zip(&b) {
            assert_eq!(name_a, name_b);
            assert_eq!(bytes_a, bytes_b, "file {name_a} differs between runs");
        }
        let _ = s2;
    }

    #[test]
    fn hill_demo_reproduces_reciprocal_factorials() {
        let cfg = demo_hill();
        let dir = tempfile::tempdir().unwrap();
        run_scenario(&cfg, dir.path()).unwrap();
        let coeffs = fs::read_to_string(dir.path().join("coefficients.csv")).unwrap();
        let mut lines = coeffs.lines();
        assert_eq!(lines.next().unwrap(), "k,re,im");
        let mut fact = 1.0f64;
        for (k, line) in lines.enumerate() {
            let cols: Vec<f64> = line
                .split(',')
                .skip(1)
                .map(|s| s.parse().unwrap())
                .collect();
            if k > 0 {
                fact *= k as f64;
            }
            let want = if k % 2 == 0 { 1.0 } else { -1.0 } / (fact * fact);
            assert!((cols[0] - want).abs() < 1e-12, "k = {k}");
        }
        let residual: serde_json::Value = serde_json::from_str(
            &fs::read_to_string(dir.path().join("ode_residual.json")).unwrap(),
        )
        .unwrap();
        assert!(residual["rk4_max_deviation"].as_f64().unwrap() < 1e-8);
        assert!(residual["analytic_max_residual"].as_f64().unwrap() < 1e-8);
    }

    #[test]
    fn plotdata_blocks_and_empty_file() {
        let mut buf = Vec::new();
        emit_plotdata(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "# no data\n");

        let mut buf = Vec::new();
        emit_plotdata(
            &mut buf,
            &[
                PlotBlock {
                    comment: "one".into(),
                    rows: vec![vec![1.0, 2.0]],
                },
                PlotBlock {
                    comment: "two".into(),
                    rows: vec![vec![3.0, 4.0]],
                },
            ],
        )
        .unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# one\n"));
        assert!(text.contains("\n\n# two\n"));
        // 16 significant digits per number
        assert!(text.contains("1.000000000000000e0"));
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let bad: std::result::Result<ScenarioConfig, _> =
            serde_json::from_str(r#"{"mode": "nonsense"}"#);
        assert!(bad.is_err());

        let cfg = ScenarioConfig::Dispersion(DispersionScenario {
            particle: ParticleSpec::Preset {
                preset: "muon".into(),
            },
            laws: vec![LawKind::Schrodinger],
            grid: AxisSpec {
                min: -1.0,
                max: 1.0,
                count: 11,
            },
            spectrum: SpectrumSpec::Gaussian {
                center: 0.0,
                width: 1.0,
            },
            times: vec![0.0],
            x_window: AxisSpec {
                min: -1.0,
                max: 1.0,
                count: 11,
            },
            curve_points: None,
        });
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            run_scenario(&cfg, dir.path()),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn explicit_mode_spectrum_lands_on_grid() {
        let spec = SpectrumSpec::Modes {
            modes: vec![(0.52, 1.0, 0.0)],
        };
        let grid = spec
            .build(uniform_axis(0.0, 1.0, 11).unwrap(), None)
            .unwrap();
        let amps = grid.amplitudes();
        assert_eq!(amps[5], Complex64::new(1.0, 0.0));
        assert_eq!(
            amps.iter().filter(|a| **a != Complex64::default()).count(),
            1
        );
    }
}
