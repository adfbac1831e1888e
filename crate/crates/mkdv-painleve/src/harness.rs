//! End-to-end verification pipeline: build scattering data from an
//! initial-data family, assemble the asymptotic series, evolve the PDE
//! reference solver, and measure sup-errors over the self-similar
//! sector |x| <= M t^{1/3} together with their decay slopes in t.
//!
//! The sign and normalization conventions linking the scattering data
//! to the Painleve II Stokes constant are probed empirically: the
//! leading-order comparison is run under all four candidate
//! conventions on a cheap configuration and the decisively best one is
//! stamped into every report.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{series_eval, AsymptoticSeries, SimilarityPoint};
use crate::error::{Error, Result};
use crate::io;
use crate::pde::{evolve_with_options, sample, EvolveOptions, Snapshot, WindowMonitor};
use crate::scattering::{
    compute_reflection, default_k_grid, InitialDatum, Profile, ReflectionData,
};

/// 3^{1/3}.
const CBRT3: f64 = 1.4422495703074083;

/// Named initial-data family with parameters. `eps` scales the
/// amplitude, `center` translates the profile, `path` points at a CSV
/// datum for the "custom-csv" family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilySpec {
    pub name: String,
    #[serde(default)]
    pub eps: Option<f64>,
    #[serde(default)]
    pub center: Option<f64>,
    #[serde(default)]
    pub path: Option<String>,
}

impl FamilySpec {
    pub fn builtin(name: &str, eps: f64) -> FamilySpec {
        FamilySpec {
            name: name.to_string(),
            eps: Some(eps),
            center: None,
            path: None,
        }
    }

    pub fn with_center(mut self, center: f64) -> FamilySpec {
        self.center = Some(center);
        self
    }
}

/// Pseudospectral solver resolution: domain [-half_length, half_length],
/// n_modes Fourier modes, time step dt. The default is sized so that
/// dispersive radiation cannot wrap around the torus and contaminate
/// the sector before t = 160 at more than a fraction of the smallest
/// measured error.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SolverParams {
    pub half_length: f64,
    pub n_modes: usize,
    pub dt: f64,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            half_length: 16384.0,
            n_modes: 1 << 18,
            dt: 0.04,
        }
    }
}

/// Tolerance presets for the pass flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ToleranceProfile {
    #[default]
    Default,
    Strict,
}

impl ToleranceProfile {
    /// Allowed deviation of a fitted slope from -(N+1)/3.
    pub fn slope_tol(self) -> f64 {
        match self {
            ToleranceProfile::Default => 0.15,
            ToleranceProfile::Strict => 0.10,
        }
    }

    /// Relative drift budget for the conserved quantities.
    pub fn conservation_tol(self) -> f64 {
        1e-8
    }

    /// Wrap-around corridor amplitude threshold.
    pub fn corridor_amplitude(self) -> f64 {
        match self {
            ToleranceProfile::Default => 1e-7,
            ToleranceProfile::Strict => 5e-8,
        }
    }
}

fn default_sector_width() -> f64 {
    2.0
}

fn default_out_dir() -> String {
    "out".to_string()
}

/// Full experiment description (JSON-deserializable).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub family: FamilySpec,
    /// Sector width M: errors are measured over |x| <= M t^{1/3}.
    #[serde(default = "default_sector_width")]
    pub sector_width: f64,
    /// Ascending measurement times, all >= 1.
    pub t_list: Vec<f64>,
    /// Series truncation order N in {1, 2, 3}.
    pub order: u8,
    #[serde(default)]
    pub solver: SolverParams,
    #[serde(default)]
    pub tolerances: ToleranceProfile,
    #[serde(default = "default_out_dir")]
    pub out_dir: String,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sector_width > 0.0) {
            return Err(Error::Usage(format!(
                "sector width must be positive, got {}",
                self.sector_width
            )));
        }
        if self.order == 0 || self.order > 3 {
            return Err(Error::Usage(format!(
                "order must be in 1..=3, got {}",
                self.order
            )));
        }
        if self.t_list.is_empty() {
            return Err(Error::Usage("t_list is empty".into()));
        }
        let mut prev = 1.0;
        for &t in &self.t_list {
            if !(t >= prev) {
                return Err(Error::Usage(format!(
                    "t_list must ascend within [1, inf), got {:?}",
                    self.t_list
                )));
            }
            prev = t;
        }
        if !(self.solver.dt > 0.0)
            || !(self.solver.half_length > 0.0)
            || !self.solver.n_modes.is_power_of_two()
        {
            return Err(Error::Usage(format!(
                "invalid solver parameters {:?}",
                self.solver
            )));
        }
        Ok(())
    }
}

/// Construct a sampled initial datum from a named family.
///
/// Built-in names: "sech" (eps sech(x - c)), "gaussian"
/// (eps exp(-(x-c)^2)), "zero-mass" (eps d/dx sech(x - c), exactly zero
/// mass), "two-scale" (eps [sech(x-c) - sech((x-c)/2)/8], zero second
/// Fourier moment at leading order), and "custom-csv" (two-column x, u0
/// file via `path`).
pub fn builtin_family(spec: &FamilySpec) -> Result<InitialDatum> {
    let center = spec.center.unwrap_or(0.0);
    let need_eps = || -> Result<f64> {
        spec.eps
            .ok_or_else(|| Error::Usage(format!("family {:?} needs eps", spec.name)))
    };
    let profile = match spec.name.as_str() {
        "sech" => Profile::Sech {
            eps: need_eps()?,
            center,
        },
        "gaussian" => Profile::Gaussian {
            eps: need_eps()?,
            center,
        },
        "zero-mass" => Profile::ZeroMass {
            eps: need_eps()?,
            center,
        },
        "two-scale" => Profile::TwoScale {
            eps: need_eps()?,
            center,
        },
        "custom-csv" => {
            let path = spec.path.as_ref().ok_or_else(|| {
                Error::Usage("family custom-csv needs a path".into())
            })?;
            return io::read_datum_csv(std::path::Path::new(path));
        }
        other => {
            return Err(Error::Usage(format!(
                "unknown family {other:?}; known: sech, gaussian, zero-mass, two-scale, custom-csv"
            )))
        }
    };
    InitialDatum::from_profile(profile, profile.support_radius(), 0.05)
}

/// Least-squares slope of log errs against log ts, with its standard
/// error. Requires at least 4 strictly positive samples.
pub fn fit_slope(ts: &[f64], errs: &[f64]) -> Result<(f64, f64)> {
    if ts.len() != errs.len() {
        return Err(Error::DegenerateFit(format!(
            "length mismatch: {} times vs {} errors",
            ts.len(),
            errs.len()
        )));
    }
    if ts.len() < 4 {
        return Err(Error::DegenerateFit(format!(
            "need at least 4 samples for a slope, got {}",
            ts.len()
        )));
    }
    for (&t, &e) in ts.iter().zip(errs.iter()) {
        if !(t > 0.0) || !(e > 0.0) {
            return Err(Error::DegenerateFit(format!(
                "nonpositive sample (t = {t}, err = {e})"
            )));
        }
    }
    let n = ts.len() as f64;
    let xs: Vec<f64> = ts.iter().map(|&t| t.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|&e| e.ln()).collect();
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    if sxx < 1e-12 {
        return Err(Error::DegenerateFit(
            "time samples too close for a slope".into(),
        ));
    }
    let sxy: f64 = xs
        .iter()
        .zip(ys.iter())
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let rss: f64 = xs
        .iter()
        .zip(ys.iter())
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let stderr = (rss / (n - 2.0) / sxx).sqrt();
    Ok((slope, stderr))
}

/// The convention combination selected by the empirical probe, stamped
/// into every report.
#[derive(Debug, Clone, Serialize)]
pub struct ConventionStamp {
    /// How the Stokes constant is built from the reflection at 0.
    pub s_definition: String,
    /// Sign convention of the reflection coefficient itself.
    pub reflection_sign: String,
    /// Leading-order probe error of the selected combination.
    pub selected_error: f64,
    /// Best error among the rejected combinations.
    pub runner_up_error: f64,
    /// Selected error < 0.5 x runner-up error.
    pub decisive: bool,
    #[serde(skip)]
    combo: usize,
}

impl ConventionStamp {
    /// Apply the stamped convention to measured reflection data:
    /// returns (s, r'(0), r''(0)) as the series expects them.
    pub fn apply(
        &self,
        r0: Complex64,
        r0_prime: Complex64,
        r0_second: Complex64,
    ) -> (Complex64, Complex64, Complex64) {
        let sign = if self.combo >= 2 { -1.0 } else { 1.0 };
        let (r0, r0p, r0pp) = (r0 * sign, r0_prime * sign, r0_second * sign);
        let s = if self.combo % 2 == 1 {
            Complex64::new(0.0, 1.0) * r0
        } else {
            r0
        };
        (s, r0p, r0pp)
    }
}

static CONVENTION: OnceLock<ConventionStamp> = OnceLock::new();

/// Probe all four convention candidates (s from r(0) directly or times
/// i, reflection sign -i b/a or +i b/a) against the PDE on a cheap sech
/// configuration and return the decisively best one. A successful probe
/// is cached for the process; failures are not cached.
pub fn convention_stamp() -> Result<ConventionStamp> {
    if let Some(stamp) = CONVENTION.get() {
        return Ok(stamp.clone());
    }
    let stamp = probe_conventions()?;
    Ok(CONVENTION.get_or_init(|| stamp).clone())
}

fn probe_conventions() -> Result<ConventionStamp> {
    let profile = Profile::Sech {
        eps: 0.2,
        center: 0.0,
    };
    let datum = InitialDatum::from_profile(profile, profile.support_radius(), 0.05)?;
    let rd = compute_reflection(&datum, &[-0.02, -0.01, 0.0, 0.01, 0.02])?;
    let r0 = rd.r0;

    let t = 8.0;
    // Seam energy is reported, not gated: the 1e-10 default gate trips
    // on spectral-tail noise far below the 1e-2-scale comparison this
    // probe makes. Wrap-around protection at measurement scale comes
    // from the corridor window in run_experiment.
    let opts = EvolveOptions {
        seam_energy_threshold: None,
        window: None,
        monitor_interval: 1.0,
    };
    let snaps = evolve_with_options(&datum, &[t], 512.0, 1 << 14, 0.005, &opts)?;
    let state = &snaps[0].state;
    let ys: Vec<f64> = (-4..=4).map(|i| 0.25 * i as f64).collect();
    let scale = (3.0 * t).cbrt();
    let xs: Vec<f64> = ys.iter().map(|&y| y * scale).collect();
    let u_pde = sample(state, &xs)?;

    let combos = [
        ("s = r(0)", "r = -i b / a", r0),
        ("s = i r(0)", "r = -i b / a", Complex64::new(0.0, 1.0) * r0),
        ("s = r(0)", "r = +i b / a", -r0),
        ("s = i r(0)", "r = +i b / a", -Complex64::new(0.0, 1.0) * r0),
    ];
    let zero = Complex64::new(0.0, 0.0);
    let mut errs = [f64::INFINITY; 4];
    for (idx, &(_, _, s)) in combos.iter().enumerate() {
        // Structurally invalid candidates (s not purely imaginary or
        // |s| >= 1) simply fail to build and stay at infinite error.
        let series = match AsymptoticSeries::new(1, s, 0.0, zero, (-1.5, 6.0)) {
            Ok(series) => series,
            Err(_) => continue,
        };
        let mut worst = 0.0_f64;
        let mut ok = true;
        for (i, &x) in xs.iter().enumerate() {
            let pt = SimilarityPoint::new(x, t)?;
            match series_eval(&pt, &series) {
                Ok(v) => worst = worst.max((u_pde[i] - v).abs()),
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            errs[idx] = worst;
        }
    }

    let best = (0..4)
        .min_by(|&a, &b| errs[a].partial_cmp(&errs[b]).unwrap())
        .unwrap();
    if !errs[best].is_finite() {
        return Err(Error::Convention(
            "no convention candidate produced a finite probe error".into(),
        ));
    }
    let runner_up = (0..4)
        .filter(|&i| i != best)
        .map(|i| errs[i])
        .fold(f64::INFINITY, f64::min);
    let decisive = errs[best] < 0.5 * runner_up;
    if !decisive {
        return Err(Error::Convention(format!(
            "convention probe not decisive: best {:.3e} vs runner-up {:.3e}",
            errs[best], runner_up
        )));
    }
    Ok(ConventionStamp {
        s_definition: combos[best].0.to_string(),
        reflection_sign: combos[best].1.to_string(),
        selected_error: errs[best],
        runner_up_error: runner_up,
        decisive,
        combo: best,
    })
}

/// Scattering summary stamped into the report.
#[derive(Debug, Clone, Serialize)]
pub struct ScatteringSummary {
    pub r0: [f64; 2],
    pub r0_prime: [f64; 2],
    pub r0_second: [f64; 2],
    pub sup_abs_r: f64,
    pub unitarity_residual: f64,
    pub symmetry_residual: f64,
    pub mass: f64,
}

/// Errors and solver diagnostics at one measurement time.
#[derive(Debug, Clone, Serialize)]
pub struct TimeErrors {
    pub t: f64,
    /// sup over the whole sector.
    pub e_all: f64,
    /// sup over y <= 0.
    pub e_left: f64,
    /// sup over y >= 0.
    pub e_right: f64,
    pub mass_drift_rel: f64,
    pub l2_drift_rel: f64,
    pub seam_energy: f64,
    pub window_amplitude: Option<f64>,
}

/// One sampled comparison point.
#[derive(Debug, Clone, Serialize)]
pub struct ErrorRow {
    pub t: f64,
    pub y: f64,
    pub u_pde: f64,
    pub u_series: f64,
    pub abs_err: f64,
}

/// A fitted decay slope with its acceptance verdict.
#[derive(Debug, Clone, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub stderr: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub within: bool,
}

/// Pass/fail summary. Slope flags are true when the fitted slope lies
/// within tolerance of -(N+1)/3, or trivially when every error
/// vanishes identically; with fewer than 4 times and nonzero errors the
/// slope is unverifiable and the flags are false.
#[derive(Debug, Clone, Serialize)]
pub struct PassFlags {
    pub slopes_evaluated: bool,
    pub slope_all: bool,
    pub slope_left: bool,
    pub slope_right: bool,
    pub conservation: bool,
    pub convention: bool,
    pub overall: bool,
}

/// Build metadata; deliberately free of wall-clock content so reports
/// are bit-reproducible.
#[derive(Debug, Clone, Serialize)]
pub struct EnvironmentManifest {
    pub package: String,
    pub version: String,
    pub target_os: String,
    pub target_arch: String,
    pub threads: usize,
    pub solver: SolverParams,
    pub tolerance_profile: ToleranceProfile,
}

/// Complete result of one experiment.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub family: FamilySpec,
    pub sector_width: f64,
    pub order: u8,
    pub expected_slope: f64,
    pub convention: ConventionStamp,
    pub scattering: ScatteringSummary,
    pub per_time: Vec<TimeErrors>,
    pub slope: Option<SlopeFit>,
    pub slope_left: Option<SlopeFit>,
    pub slope_right: Option<SlopeFit>,
    pub pass: PassFlags,
    pub environment: EnvironmentManifest,
    pub raw_errors: Vec<ErrorRow>,
}

fn slope_fit(ts: &[f64], errs: &[f64], expected: f64, tol: f64) -> Option<SlopeFit> {
    match fit_slope(ts, errs) {
        Ok((slope, stderr)) => Some(SlopeFit {
            slope,
            stderr,
            expected,
            tolerance: tol,
            within: (slope - expected).abs() <= tol,
        }),
        Err(_) => None,
    }
}

/// Run the full pipeline for one configuration. Pure computation: file
/// emission is the caller's concern.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let datum = builtin_family(&cfg.family)?;
    let rd = compute_reflection(&datum, &default_k_grid())?;
    let stamp = convention_stamp()?;
    let (s_raw, r0p_raw, r0pp_raw) = stamp.apply(rd.r0, rd.r0_prime, rd.r0_second);
    if !r0p_raw.re.is_finite() || !r0pp_raw.im.is_finite() {
        return Err(Error::Domain(
            "reflection derivatives at k = 0 unavailable on this k-grid".into(),
        ));
    }

    // Order gating: u_2, u_3 are defined only for r(0) = 0; a measured
    // |r(0)| below the scattering accuracy floor counts as zero.
    let s_used = if cfg.order >= 2 {
        if s_raw.norm() > 1e-8 {
            return Err(Error::UnsupportedOrder(format!(
                "order {} needs r(0) = 0; family {:?} has r(0) = {s_raw}",
                cfg.order, cfg.family.name
            )));
        }
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::new(0.0, s_raw.im)
    };
    let y_half = cfg.sector_width / CBRT3;
    let series = AsymptoticSeries::new(
        cfg.order,
        s_used,
        r0p_raw.re,
        Complex64::new(0.0, r0pp_raw.im),
        (-y_half - 0.5, y_half + 0.5),
    )?;

    // Reference solve with the wrap-around corridor monitor placed just
    // outside the largest sector extent.
    let t_max = *cfg.t_list.last().unwrap();
    let corridor_lo = cfg.sector_width * t_max.cbrt() + 50.0;
    let opts = EvolveOptions {
        seam_energy_threshold: None,
        window: Some(WindowMonitor {
            x_lo: corridor_lo,
            x_hi: corridor_lo + 150.0,
            amp_threshold: cfg.tolerances.corridor_amplitude(),
        }),
        monitor_interval: 1.0,
    };
    let snaps = evolve_with_options(
        &datum,
        &cfg.t_list,
        cfg.solver.half_length,
        cfg.solver.n_modes,
        cfg.solver.dt,
        &opts,
    )?;

    let ys: Vec<f64> = (0..=200)
        .map(|i| y_half * ((i as f64) - 100.0) / 100.0)
        .collect();
    let mut per_time = Vec::with_capacity(snaps.len());
    let mut raw_errors = Vec::with_capacity(snaps.len() * ys.len());
    for snap in &snaps {
        let t = snap.state.t;
        let scale = (3.0 * t).cbrt();
        let xs: Vec<f64> = ys.iter().map(|&y| y * scale).collect();
        let u_pde = sample(&snap.state, &xs)?;
        let (mut e_left, mut e_right) = (0.0_f64, 0.0_f64);
        for (i, (&y, &x)) in ys.iter().zip(xs.iter()).enumerate() {
            let pt = SimilarityPoint::new(x, t)?;
            let u_series = series_eval(&pt, &series)?;
            let err = (u_pde[i] - u_series).abs();
            if y <= 0.0 {
                e_left = e_left.max(err);
            }
            if y >= 0.0 {
                e_right = e_right.max(err);
            }
            raw_errors.push(ErrorRow {
                t,
                y,
                u_pde: u_pde[i],
                u_series,
                abs_err: err,
            });
        }
        per_time.push(TimeErrors {
            t,
            e_all: e_left.max(e_right),
            e_left,
            e_right,
            mass_drift_rel: snap.diag.mass_drift_rel,
            l2_drift_rel: snap.diag.l2_drift_rel,
            seam_energy: snap.diag.seam_energy,
            window_amplitude: snap.diag.window_amplitude,
        });
    }

    let expected_slope = -((cfg.order + 1) as f64) / 3.0;
    let tol = cfg.tolerances.slope_tol();
    let ts: Vec<f64> = per_time.iter().map(|p| p.t).collect();
    let all: Vec<f64> = per_time.iter().map(|p| p.e_all).collect();
    let left: Vec<f64> = per_time.iter().map(|p| p.e_left).collect();
    let right: Vec<f64> = per_time.iter().map(|p| p.e_right).collect();
    let slope = slope_fit(&ts, &all, expected_slope, tol);
    let slope_left = slope_fit(&ts, &left, expected_slope, tol);
    let slope_right = slope_fit(&ts, &right, expected_slope, tol);

    let zero_errors = all.iter().all(|&e| e == 0.0);
    let slope_ok = |s: &Option<SlopeFit>| s.as_ref().map(|f| f.within).unwrap_or(zero_errors);
    let conservation = per_time.iter().all(|p| {
        p.mass_drift_rel <= cfg.tolerances.conservation_tol()
            && p.l2_drift_rel <= cfg.tolerances.conservation_tol()
    });
    let flags = PassFlags {
        slopes_evaluated: slope.is_some(),
        slope_all: slope_ok(&slope),
        slope_left: slope_ok(&slope_left),
        slope_right: slope_ok(&slope_right),
        conservation,
        convention: stamp.decisive,
        overall: false,
    };
    let overall = flags.slope_all
        && flags.slope_left
        && flags.slope_right
        && flags.conservation
        && flags.convention;
    let flags = PassFlags { overall, ..flags };

    Ok(VerificationReport {
        family: cfg.family.clone(),
        sector_width: cfg.sector_width,
        order: cfg.order,
        expected_slope,
        convention: stamp,
        scattering: summarize_scattering(&rd, &datum),
        per_time,
        slope,
        slope_left,
        slope_right,
        pass: flags,
        environment: EnvironmentManifest {
            package: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            target_os: std::env::consts::OS.to_string(),
            target_arch: std::env::consts::ARCH.to_string(),
            threads: rayon::current_num_threads(),
            solver: cfg.solver,
            tolerance_profile: cfg.tolerances,
        },
        raw_errors,
    })
}

fn summarize_scattering(rd: &ReflectionData, datum: &InitialDatum) -> ScatteringSummary {
    ScatteringSummary {
        r0: [rd.r0.re, rd.r0.im],
        r0_prime: [rd.r0_prime.re, rd.r0_prime.im],
        r0_second: [rd.r0_second.re, rd.r0_second.im],
        sup_abs_r: rd.sup_abs,
        unitarity_residual: rd.unitarity_residual,
        symmetry_residual: rd.symmetry_residual(),
        mass: datum.mass,
    }
}

/// Write the raw error table of a report as CSV (columns t, y, u_pde,
/// u_series, abs_err).
pub fn write_error_table(path: &std::path::Path, report: &VerificationReport) -> Result<()> {
    let rows: Vec<Vec<String>> = report
        .raw_errors
        .iter()
        .map(|r| {
            vec![
                io::fmt_float(r.t),
                io::fmt_float(r.y),
                io::fmt_float(r.u_pde),
                io::fmt_float(r.u_series),
                io::fmt_float(r.abs_err),
            ]
        })
        .collect();
    io::write_csv(path, &["t", "y", "u_pde", "u_series", "abs_err"], &rows)
}

/// Snapshot diagnostics for the evolve manifest.
#[derive(Debug, Clone, Serialize)]
pub struct SnapshotManifest {
    pub half_length: f64,
    pub n_modes: usize,
    pub dt: f64,
    pub times: Vec<f64>,
    pub mass_drift_rel: Vec<f64>,
    pub l2_drift_rel: Vec<f64>,
    pub seam_energy: Vec<f64>,
    pub reality_residual: Vec<f64>,
}

pub fn snapshot_manifest(snaps: &[Snapshot], solver: &SolverParams) -> SnapshotManifest {
    SnapshotManifest {
        half_length: solver.half_length,
        n_modes: solver.n_modes,
        dt: solver.dt,
        times: snaps.iter().map(|s| s.state.t).collect(),
        mass_drift_rel: snaps.iter().map(|s| s.diag.mass_drift_rel).collect(),
        l2_drift_rel: snaps.iter().map(|s| s.diag.l2_drift_rel).collect(),
        seam_energy: snaps.iter().map(|s| s.diag.seam_energy).collect(),
        reality_residual: snaps.iter().map(|s| s.diag.reality_residual).collect(),
    }
}
