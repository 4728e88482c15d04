//! Subcommand bodies. Each returns an artifact; the binary decides whether
//! it goes to stdout or into the output directory.

use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thermospec_core::fit::{
    choose_window_with, fit_expansion_with, recover_geometry, rigidity_check, weyl_check, FitDelta, FitReport,
    RecoveredGeometry, RigidityVerdict, Window, DEFAULT_RIGIDITY_TOL,
};
use thermospec_core::spectra::{
    coupled_fd_eigenvalues, disk_decoupled_spectrum, fd_spectrum_with, interval_spectrum,
    rectangle_decoupled_spectrum, torus_spectrum, DomainKind, FdOptions, FdSpectrum,
};
use thermospec_core::symbol::Parametrix;
use thermospec_core::trace::Provenance;
use thermospec_core::{Complex64, HeatCoefficients, MetricChart, SpectrumSample};

use crate::config::RunConfig;

/// Output of a subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub file_name: &'static str,
    pub contents: String,
}

impl Artifact {
    fn json<T: Serialize>(file_name: &'static str, value: &T) -> Result<Self> {
        let mut contents = serde_json::to_string_pretty(value)?;
        contents.push('\n');
        Ok(Self { file_name, contents })
    }
}

/// Spectrum for a configuration together with how it was obtained.
pub enum ConfiguredSpectrum {
    Exact(SpectrumSample),
    FiniteDifference(Box<FdSpectrum>),
}

impl ConfiguredSpectrum {
    /// Sample used for traces and fits.
    pub fn for_fitting(&self) -> &SpectrumSample {
        match self {
            ConfiguredSpectrum::Exact(s) => s,
            ConfiguredSpectrum::FiniteDifference(fd) => &fd.discrete,
        }
    }

    /// Values below the cutoff that are reliable as continuum eigenvalues.
    pub fn reliable(&self) -> &SpectrumSample {
        match self {
            ConfiguredSpectrum::Exact(s) => s,
            ConfiguredSpectrum::FiniteDifference(fd) => &fd.sample,
        }
    }
}

fn lame_sum_zero(cfg: &RunConfig) -> bool {
    (cfg.params.lambda + cfg.params.mu).abs() <= 1e-12
}

pub fn spectrum_for(cfg: &RunConfig) -> Result<ConfiguredSpectrum> {
    let p = &cfg.params;
    let sample = match cfg.domain.kind() {
        DomainKind::Interval { length } => interval_spectrum(p, *length, cfg.bc, cfg.cutoff)?,
        DomainKind::Torus { lengths } => torus_spectrum(p, lengths, cfg.cutoff)?,
        DomainKind::Disk { radius } => disk_decoupled_spectrum(p, *radius, cfg.bc, cfg.cutoff)?,
        DomainKind::Rectangle { a, b } if lame_sum_zero(cfg) && cfg.fd_spacing.is_none() => {
            rectangle_decoupled_spectrum(p, *a, *b, cfg.bc, cfg.cutoff)?
        }
        DomainKind::Rectangle { a, b } => {
            let h = cfg
                .fd_spacing
                .context("fd_spacing: required for a rectangle with lambda + mu != 0")?;
            let opts = FdOptions {
                requested_cutoff: Some(cfg.cutoff),
                ..FdOptions::default()
            };
            let fd = fd_spectrum_with(p, *a, *b, h, cfg.bc, &opts)?;
            if fd.capped {
                eprintln!(
                    "warning: cutoff {} exceeds the finite-difference completeness estimate {}",
                    cfg.cutoff, fd.completeness
                );
            }
            return Ok(ConfiguredSpectrum::FiniteDifference(Box::new(fd)));
        }
    };
    Ok(ConfiguredSpectrum::Exact(sample))
}

#[derive(Serialize)]
struct CoeffsReport {
    domain: String,
    n: usize,
    vol: f64,
    vol_boundary: f64,
    a0: f64,
    a1_dirichlet: f64,
    a1_neumann: f64,
    provenance: Provenance,
}

pub fn coeffs(cfg: &RunConfig) -> Result<Artifact> {
    let d = &cfg.domain;
    let c = HeatCoefficients::closed_form(&cfg.params, d.dim(), d.vol(), d.vol_boundary())?;
    Artifact::json(
        "coeffs.json",
        &CoeffsReport {
            domain: d.to_string(),
            n: c.n,
            vol: d.vol(),
            vol_boundary: d.vol_boundary(),
            a0: c.a0,
            a1_dirichlet: c.a1_dirichlet,
            a1_neumann: c.a1_neumann,
            provenance: c.provenance,
        },
    )
}

/// Default chart of the right dimension when the config names none.
fn chart_for(cfg: &RunConfig) -> MetricChart {
    match (&cfg.chart, cfg.domain.kind()) {
        (Some(c), _) => c.clone(),
        (None, DomainKind::Disk { radius }) => MetricChart::polar_disk(*radius),
        (None, _) => MetricChart::euclidean(cfg.dim()),
    }
}

/// Composition defects at 20 seeded points of the chart.
pub fn symbol_check(cfg: &RunConfig) -> Result<Artifact> {
    let chart = chart_for(cfg);
    let par = Parametrix::new(&chart, cfg.params);
    let n = chart.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = String::from("point,order,x,xi,tau_re,tau_im,right,left\n");
    for point in 0..20 {
        let u: Vec<f64> = (0..n).map(|_| rng.gen_range(0.15..0.85)).collect();
        let x = chart.domain().lerp(&u);
        let xi: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let tau = Complex64::new(-rng.gen_range(0.5..3.0), rng.gen_range(-2.0..2.0));
        for d in par.verify(&x, &xi, tau, par.max_order())? {
            writeln!(
                out,
                "{point},{},{},{},{},{},{},{}",
                d.order,
                join(&x),
                join(&xi),
                tau.re,
                tau.im,
                d.right,
                d.left
            )?;
        }
    }
    Ok(Artifact {
        file_name: "symbol_check.csv",
        contents: out,
    })
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn spectrum(cfg: &RunConfig) -> Result<Artifact> {
    if !cfg.params.is_decoupled() {
        return coupled_spectrum(cfg);
    }
    let s = spectrum_for(cfg)?;
    let sample = s.reliable();
    let mut out = String::from("value,multiplicity\n");
    for (v, m) in sample.values().iter().zip(sample.multiplicities()) {
        writeln!(out, "{v},{m}")?;
    }
    Ok(Artifact {
        file_name: "spectrum.csv",
        contents: out,
    })
}

fn coupled_spectrum(cfg: &RunConfig) -> Result<Artifact> {
    let DomainKind::Rectangle { a, b } = cfg.domain.kind() else {
        bail!("domain: the coupled solver supports rectangles only");
    };
    let h = cfg.fd_spacing.context("fd_spacing: required by the coupled solver")?;
    let values = coupled_fd_eigenvalues(&cfg.params, *a, *b, h)?;
    let mut out = String::from("re,im\n");
    for z in values.iter().filter(|z| z.re <= cfg.cutoff) {
        writeln!(out, "{},{}", z.re, z.im)?;
    }
    Ok(Artifact {
        file_name: "spectrum.csv",
        contents: out,
    })
}

fn window_for(cfg: &RunConfig, sample: &SpectrumSample) -> Result<(Window, usize)> {
    let opts = cfg.fit_options();
    Ok((choose_window_with(sample, cfg.dim(), &opts)?, opts.points))
}

/// Heat trace, its rescaled form and the two-term prediction on the window.
pub fn trace(cfg: &RunConfig) -> Result<Artifact> {
    let s = spectrum_for(cfg)?;
    let sample = s.for_fitting();
    let (window, points) = window_for(cfg, sample)?;
    let d = &cfg.domain;
    let exact = HeatCoefficients::closed_form(&cfg.params, d.dim(), d.vol(), d.vol_boundary())?;
    let a1 = if d.has_boundary() { exact.a1(cfg.bc) } else { 0.0 };
    let half = d.dim() as f64 / 2.0;
    let mut out = String::from("t,heat_trace,scaled,two_term\n");
    for t in window.grid(points) {
        let h = if cfg.experimental.override_tail_guard {
            sample.heat_trace_unguarded(t)
        } else {
            sample.heat_trace(t)?
        };
        let two_term = (exact.a0 + a1 * t.sqrt()) * t.powf(-half);
        writeln!(out, "{t},{h},{},{two_term}", h * t.powf(half))?;
    }
    Ok(Artifact {
        file_name: "trace.csv",
        contents: out,
    })
}

#[derive(Serialize)]
pub struct FitSummary {
    pub domain: String,
    pub bc: Option<&'static str>,
    pub source: &'static str,
    pub cutoff: f64,
    pub fit: FitReport,
    pub trusted_coefficients: usize,
    pub closed_form: FitDelta,
    pub recovered: Option<RecoveredGeometry>,
}

pub fn fit_summary(cfg: &RunConfig) -> Result<FitSummary> {
    let s = spectrum_for(cfg)?;
    let sample = s.for_fitting();
    let fit = fit_expansion_with(sample, cfg.dim(), &cfg.fit_options())?;
    if fit.ill_conditioned {
        eprintln!(
            "warning: condition number {:e} above limit; coefficients beyond a1 are untrusted",
            fit.condition
        );
    }
    let d = &cfg.domain;
    let exact = HeatCoefficients::closed_form(&cfg.params, d.dim(), d.vol(), d.vol_boundary())?;
    let recovered = if d.has_boundary() {
        Some(recover_geometry(&fit, &cfg.params, d.dim(), cfg.bc)?)
    } else {
        None
    };
    Ok(FitSummary {
        domain: d.to_string(),
        bc: sample.bc().map(|b| b.as_str()),
        source: sample.source().as_str(),
        cutoff: sample.cutoff(),
        trusted_coefficients: fit.trusted(),
        closed_form: fit.compare(&exact),
        recovered,
        fit,
    })
}

pub fn fit(cfg: &RunConfig) -> Result<Artifact> {
    Artifact::json("fit.json", &fit_summary(cfg)?)
}

pub fn weyl(cfg: &RunConfig) -> Result<Artifact> {
    let s = spectrum_for(cfg)?;
    let r = weyl_check(s.reliable(), &cfg.params, &cfg.domain, cfg.cutoff, 50);
    let mut out = String::from("tau,count,prediction,ratio\n");
    for p in &r.points {
        writeln!(out, "{},{},{},{}", p.tau, p.count, p.prediction, p.ratio)?;
    }
    eprintln!(
        "terminal ratio {}; last 2% excursion at tau = {}",
        r.terminal_ratio,
        r.last_excursion.map_or_else(|| String::from("none"), |t| t.to_string())
    );
    Ok(Artifact {
        file_name: "weyl.csv",
        contents: out,
    })
}

#[derive(Serialize)]
struct RigidityReport {
    vol: f64,
    vol_boundary: f64,
    n: usize,
    source: &'static str,
    verdict: &'static str,
    #[serde(flatten)]
    detail: RigidityVerdict,
}

/// Rigidity verdict for explicit `(V, S)` or, without them, for the
/// geometry recovered from the fitted heat trace.
pub fn rigidity(cfg: &RunConfig, explicit: Option<(f64, f64)>, tolerance: Option<f64>) -> Result<Artifact> {
    let n = cfg.dim();
    let (vol, vol_boundary, source) = match explicit {
        Some((v, s)) => (v, s, "explicit"),
        None => {
            let g = fit_summary(cfg)?
                .recovered
                .context("domain: rigidity needs a domain with boundary")?;
            (g.vol, g.vol_boundary, "spectrum")
        }
    };
    let detail = rigidity_check(vol, vol_boundary, n, tolerance.unwrap_or(DEFAULT_RIGIDITY_TOL))?;
    Artifact::json(
        "rigidity.json",
        &RigidityReport {
            vol,
            vol_boundary,
            n,
            source,
            verdict: if detail.is_ball { "ball" } else { "not-ball" },
            detail,
        },
    )
}
