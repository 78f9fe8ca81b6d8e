//! Scripted experiments: one runner per construction, each producing a [`SweepReport`].

use std::f64::consts::{LN_2, PI, SQRT_2};
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bupu::{build_bupu, BlockDecomposer, Bupu};
use crate::corpus::{corpus, corpus_entry, CorpusEntry};
use crate::error::{Error, Result};
use crate::grid::{fourier_inverse, weighted_lp_norm, Domain, Exponent, Grid, SampledSignal, C64};
use crate::io::{matrix_to_csv, read_signal};
use crate::measures::{disjointness_spacing, measure_signal_convolve, rudin_shapiro, Normalization};
use crate::norms::{algebra_ratio, embedding_ratio, modulation_norm, modulation_norm_stft, norm, NormSpec, Space};
use crate::report::{Artifact, Assertion, Row, SweepReport};
use crate::stft::{gaussian_window, moyal_residual, stft_l2_identity_ratio, StftEngine};
use crate::wiener_levy::{
    global_compose, plateau_window, reciprocal_on_compact, translation_difference_bound, AnalyticFunction, LocalSetup,
};
use crate::windows::{classic_bump, plateau_bump};

fn spec(p: f64, q: f64, s: f64) -> NormSpec {
    NormSpec::modulation(p, q, s).expect("static spec")
}

fn l2(f: &SampledSignal) -> Result<f64> {
    weighted_lp_norm(f, Exponent::Finite(2.0), 0.0)
}

/// `|b/a - 1|`.
fn rel_change(a: f64, b: f64) -> f64 {
    (b / a - 1.0).abs()
}

// ---------------------------------------------------------------- parameters

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StftParams {
    pub signal: String,
    /// Number of `(x, ξ)` points checked against direct quadrature.
    pub probes: usize,
    /// Side of the decimated `|V_φ f|` image written as CSV.
    pub image_size: usize,
}

impl Default for StftParams {
    fn default() -> Self {
        StftParams { signal: "modulated-3".into(), probes: 32, image_size: 128 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MoyalParams {}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormParams {
    pub signal: String,
    /// CSV signal file (with its JSON sidecar); overrides `signal`.
    pub input: Option<PathBuf>,
    pub space: Space,
    pub p: Exponent,
    pub q: Exponent,
    pub s: f64,
}

impl Default for NormParams {
    fn default() -> Self {
        NormParams {
            signal: "gaussian".into(),
            input: None,
            space: Space::Modulation,
            p: Exponent::Finite(1.0),
            q: Exponent::Finite(1.0),
            s: 0.0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BupuParams {}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RudinShapiroParams {
    pub m: u32,
    pub samples: usize,
    pub spacing: u64,
}

impl Default for RudinShapiroParams {
    fn default() -> Self {
        RudinShapiroParams { m: 12, samples: 4096, spacing: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlateauParams {
    /// `(t₀, R)` pairs.
    pub cases: Vec<(f64, f64)>,
}

impl Default for PlateauParams {
    fn default() -> Self {
        PlateauParams { cases: vec![(0.0, 1.0), (2.0, 0.5), (-3.0, 0.25)] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TranslationParams {
    pub t0: f64,
    pub r: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    pub thetas: usize,
    pub s_values: Vec<f64>,
}

impl Default for TranslationParams {
    fn default() -> Self {
        TranslationParams { t0: 0.0, r: 1.0, theta_min: 0.1, theta_max: 10.0, thetas: 21, s_values: vec![0.0, 0.5, 0.9] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ComposeParams {
    pub function: String,
    pub signal: String,
    pub spec: NormSpec,
    pub c_hat: f64,
}

impl Default for ComposeParams {
    fn default() -> Self {
        ComposeParams { function: "z^2".into(), signal: "gaussian".into(), spec: spec(2.0, 1.0, 0.0), c_hat: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReciprocalParams {
    pub k: (f64, f64),
    pub spec: NormSpec,
    pub c_hat: f64,
}

impl Default for ReciprocalParams {
    fn default() -> Self {
        ReciprocalParams { k: (-5.0, 5.0), spec: spec(2.0, 1.0, 0.0), c_hat: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ApproxUnitParams {
    pub signal: String,
    pub spec: NormSpec,
    pub lambdas: Vec<f64>,
}

impl Default for ApproxUnitParams {
    fn default() -> Self {
        ApproxUnitParams {
            signal: "gaussian".into(),
            spec: spec(1.0, 1.0, 0.5),
            lambdas: (0..7).map(|i| 0.5f64.powi(i)).collect(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmbeddingParams {}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlgebraParams {
    pub specs: Vec<NormSpec>,
}

impl Default for AlgebraParams {
    fn default() -> Self {
        AlgebraParams { specs: vec![spec(1.0, 1.0, 0.0), spec(2.0, 1.0, 0.0), spec(1.0, 1.0, 0.5)] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlatParams {
    pub p: Vec<f64>,
    pub m: u32,
    pub r: u32,
    /// Depth increment for the two-point scaling run.
    pub step: u32,
    /// Half-width `a` of `supp φ = [-a, a]`.
    pub support: f64,
}

impl Default for FlatParams {
    fn default() -> Self {
        FlatParams { p: vec![1.0, 1.5], m: 1, r: 2, step: 2, support: 0.05 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct L2Params {
    pub k0: u64,
    pub checkpoints: Vec<f64>,
}

impl Default for L2Params {
    fn default() -> Self {
        L2Params { k0: 3, checkpoints: vec![1e3, 1e6, 1e12] }
    }
}

// ---------------------------------------------------------------- stft, moyal

pub fn stft_check(grid: Grid, seed: u64, params: &StftParams) -> Result<SweepReport> {
    let mut rep = SweepReport::new("stft", "signal");
    let window = gaussian_window(grid);
    let f = corpus_entry(grid, seed, &params.signal)?;
    let engine = StftEngine::new(&f, &window)?;
    let n = grid.n();
    let scale = (0..n).step_by((n / 64).max(1)).map(|k| engine.row(k).iter().map(|z| z.norm()).fold(0.0, f64::max)).fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for i in 0..params.probes {
        let j = (i * 977 + n / 3) % n;
        let k = (i * 613 + n / 2) % n;
        let direct = crate::stft::stft_direct(&f, &window, j, grid.xi(k))?;
        worst = worst.max((engine.row(k)[j] - direct).norm() / scale);
    }
    rep.assertions.push(Assertion::at_most("fft_vs_direct_rel", worst, 1e-10));

    let side = params.image_size.clamp(1, n);
    let step = n / side;
    let image: Vec<Vec<f64>> = (0..side).map(|r| engine.row(r * step).iter().step_by(step).map(|z| z.norm()).collect()).collect();
    rep.artifacts.push(Artifact {
        file_name: "stft_magnitude.csv".into(),
        contents: matrix_to_csv(side, side, |r, c| image[r][c]),
    });

    let expected = (2.0 * PI).sqrt() * l2(&window)?;
    let entries = corpus(grid, seed)?;
    let ratios: Vec<f64> = entries
        .par_iter()
        .map(|e| stft_l2_identity_ratio(&e.signal, &window))
        .collect::<Result<_>>()?;
    for (e, r) in entries.iter().zip(&ratios) {
        rep.rows.push(Row::new().with("signal", e.name.as_str()).with("l2_identity_ratio", *r).with("expected", expected));
    }
    let dev = ratios.iter().map(|r| rel_change(expected, *r)).fold(0.0, f64::max);
    let spread = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    rep.assertions.push(Assertion::at_most("l2_identity_rel", dev, 1e-6));
    rep.assertions.push(Assertion::at_most("l2_identity_spread_rel", spread / expected, 1e-6));
    Ok(rep)
}

/// Second analysis window for the cross terms: `e^{-x²/8} e^{ix}`.
pub fn moyal_second_window(grid: Grid) -> Result<SampledSignal> {
    SampledSignal::from_fn(grid, Domain::Space, |x| C64::from_polar((-x * x / 8.0).exp(), x))
}

pub fn moyal(grid: Grid, seed: u64, _params: &MoyalParams) -> Result<SweepReport> {
    let mut rep = SweepReport::new("moyal", "signal pair");
    let phi = gaussian_window(grid);
    let psi = moyal_second_window(grid)?;
    let entries = corpus(grid, seed)?;
    let m = entries.len();
    let residuals: Vec<(f64, f64)> = (0..m)
        .into_par_iter()
        .map(|i| {
            let f = &entries[i].signal;
            let g = &entries[(i + 1) % m].signal;
            Ok((moyal_residual(f, f, &phi, &phi)?, moyal_residual(f, g, &phi, &psi)?))
        })
        .collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for (i, (same, cross)) in residuals.iter().enumerate() {
        rep.rows.push(
            Row::new()
                .with("f", entries[i].name.as_str())
                .with("g", entries[(i + 1) % m].name.as_str())
                .with("residual_same_window", *same)
                .with("residual_cross", *cross),
        );
        worst = worst.max(*same).max(*cross);
    }
    rep.assertions.push(Assertion::at_most("moyal_residual", worst, 1e-6));
    Ok(rep)
}

// ---------------------------------------------------------------- norms, bupu

pub fn norm_report(grid: Grid, seed: u64, params: &NormParams) -> Result<SweepReport> {
    let f = match &params.input {
        Some(path) => read_signal(path)?,
        None => corpus_entry(grid, seed, &params.signal)?,
    };
    let spec = NormSpec::new(params.space, params.p, params.q, params.s)?;
    let bupu = build_bupu(*f.grid());
    let mut rep = SweepReport::new("norm", "block");
    if spec.space == Space::Modulation {
        let nr = modulation_norm(&f, spec.p, spec.q, spec.s, &bupu)?;
        for b in &nr.blocks {
            rep.rows.push(Row::new().with("k", b.k).with("contribution", b.contribution));
        }
        let mut summary = Row::new().with("k", "total").with("contribution", nr.value).with("tail_estimate", nr.tail_estimate);
        if f.grid().n() <= crate::stft::MAX_STFT_N {
            let via_stft = modulation_norm_stft(&f, spec.p, spec.q, spec.s, &gaussian_window(*f.grid()))?;
            summary = summary.with("stft_norm", via_stft).with("stft_over_bupu", via_stft / nr.value);
        }
        rep.rows.push(summary);
        let rel = if nr.value == 0.0 { 0.0 } else { nr.tail_estimate / nr.value };
        rep.assertions.push(Assertion::at_most("edge_block_rel", rel, 1e-6));
        rep.assertions.push(Assertion::at_least("finite", if nr.value.is_finite() { 1.0 } else { 0.0 }, 1.0));
    } else {
        let v = norm(&f, &spec, &bupu)?;
        rep.rows.push(Row::new().with("spec", spec.label()).with("value", v));
        rep.assertions.push(Assertion::at_least("finite", if v.is_finite() { 1.0 } else { 0.0 }, 1.0));
    }
    Ok(rep)
}

/// `max |Σ_k φ(D-k) f - f| / ‖f‖_∞`.
pub fn reconstruction_error(f: &SampledSignal, bupu: &Bupu) -> Result<f64> {
    let dec = BlockDecomposer::new(f, bupu)?;
    let mut sum = vec![C64::new(0.0, 0.0); f.len()];
    for k in bupu.blocks() {
        if let Some(b) = dec.block(k) {
            for (s, v) in sum.iter_mut().zip(b) {
                *s += v;
            }
        }
    }
    let err = sum.iter().zip(f.samples()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    Ok(err / f.sup_norm())
}

pub fn bupu_check(grid: Grid, seed: u64, _params: &BupuParams) -> Result<SweepReport> {
    let mut rep = SweepReport::new("bupu-check", "signal");
    let bupu = build_bupu(grid);
    let partition = bupu.partition_sum().iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max);
    let entries = corpus(grid, seed)?;
    let errs: Vec<f64> = entries.par_iter().map(|e| reconstruction_error(&e.signal, &bupu)).collect::<Result<_>>()?;
    for (e, v) in entries.iter().zip(&errs) {
        rep.rows.push(Row::new().with("signal", e.name.as_str()).with("reconstruction_rel", *v));
    }
    rep.assertions.push(Assertion::at_most("partition_sum", partition, 1e-12));
    rep.assertions.push(Assertion::at_most("reconstruction_rel", errs.iter().cloned().fold(0.0, f64::max), 1e-8));
    Ok(rep)
}

// ---------------------------------------------------------------- measures

pub fn rudin_shapiro_check(params: &RudinShapiroParams) -> Result<SweepReport> {
    let mut rep = SweepReport::new("rudin-shapiro", "m");
    let mut worst_identity: f64 = 0.0;
    let mut worst_flat: f64 = 0.0;
    for m in 1..=params.m {
        let pair = rudin_shapiro(m, params.spacing, Normalization::TotalVariation)?;
        let count = params.samples * params.spacing as usize;
        let (_, mu) = pair.mu.fourier_stieltjes_period(count)?;
        let (_, nu) = pair.nu.fourier_stieltjes_period(count)?;
        let target = pair.identity_target();
        let identity = mu.iter().zip(&nu).map(|(a, b)| ((a.norm_sqr() + b.norm_sqr()) - target).abs() / target).fold(0.0, f64::max);
        let sup = mu.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let bound = 2f64.powf((1.0 - m as f64) / 2.0);
        rep.rows.push(
            Row::new()
                .with("m", m)
                .with("atoms", pair.mu.len())
                .with("total_variation", pair.mu.total_variation())
                .with("identity_rel_error", identity)
                .with("sup_mu_hat", sup)
                .with("flatness_bound", bound),
        );
        worst_identity = worst_identity.max(identity);
        worst_flat = worst_flat.max(sup / bound);
    }
    rep.assertions.push(Assertion::at_most("identity_rel_error", worst_identity, 1e-12));
    rep.assertions.push(Assertion::at_most("sup_over_flatness_bound", worst_flat, 1.0));
    Ok(rep)
}

// ---------------------------------------------------------------- plateau windows

pub fn plateau_check(grid: Grid, params: &PlateauParams) -> Result<SweepReport> {
    let mut rep = SweepReport::new("plateau", "(t0, R)");
    let (mut plateau, mut outside, mut negative, mut fubini) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for &(t0, r) in &params.cases {
        let w = plateau_window(t0, r, grid)?;
        let int = |s: &SampledSignal| s.samples().iter().map(|z| z.re).sum::<f64>() * grid.dx();
        let mut dev: f64 = 0.0;
        let mut out: f64 = 0.0;
        let mut min = f64::INFINITY;
        for (j, z) in w.psi.samples().iter().enumerate() {
            let d = (grid.x(j) - t0).abs();
            if d <= r {
                dev = dev.max((z.re - 1.0).abs());
            }
            if d >= 5.0 * r + grid.dx() {
                out = out.max(z.norm());
            }
            min = min.min(z.re);
        }
        let fub = (int(&w.psi) - int(&w.psi1) * int(&w.psi2)).abs();
        rep.rows.push(
            Row::new()
                .with("t0", t0)
                .with("R", r)
                .with("plateau_dev", dev)
                .with("outside_max", out)
                .with("min", min)
                .with("fubini_error", fub),
        );
        plateau = plateau.max(dev);
        outside = outside.max(out);
        negative = negative.max(-min);
        fubini = fubini.max(fub);
    }
    rep.assertions.push(Assertion::at_most("plateau_dev", plateau, 1e-6));
    rep.assertions.push(Assertion::at_most("outside_max", outside, 1e-10));
    rep.assertions.push(Assertion::at_most("negative_part", negative, 1e-10));
    rep.assertions.push(Assertion::at_most("fubini_error", fubini, 1e-8));
    Ok(rep)
}

/// `count` log-spaced points from `a` to `b`.
pub fn geomspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![a];
    }
    (0..count).map(|i| a * (b / a).powf(i as f64 / (count - 1) as f64)).collect()
}

/// Fits `C_ψ = max lhs/rhs` on even θ indices, checks `lhs ≤ C_ψ rhs` on odd ones.
pub fn translation_bound_check(grid: Grid, params: &TranslationParams) -> Result<SweepReport> {
    let mut rep = SweepReport::new("translation-bound", "theta");
    let w = plateau_window(params.t0, params.r, grid)?;
    let thetas = geomspace(params.theta_min, params.theta_max, params.thetas);
    let mut pts = Vec::new();
    for &s in &params.s_values {
        for (i, &th) in thetas.iter().enumerate() {
            let (lhs, rhs) = translation_difference_bound(&w, s, th)?;
            pts.push((s, i, th, lhs, rhs));
        }
    }
    let c_fit = pts.iter().filter(|p| p.1 % 2 == 0).map(|p| p.3 / p.4).fold(0.0, f64::max);
    let mut held_out: f64 = 0.0;
    for &(s, i, th, lhs, rhs) in &pts {
        let ratio = lhs / rhs;
        if i % 2 == 1 {
            held_out = held_out.max(lhs / (c_fit * rhs));
        }
        rep.rows.push(
            Row::new()
                .with("s", s)
                .with("theta", th)
                .with("lhs", lhs)
                .with("rhs", rhs)
                .with("ratio", ratio)
                .with("fit", i % 2 == 0),
        );
    }
    for &s in &params.s_values {
        let r: Vec<f64> = pts.iter().filter(|p| p.0 == s).map(|p| p.3 / p.4).collect();
        let spread = r.iter().cloned().fold(0.0, f64::max) / r.iter().cloned().fold(f64::INFINITY, f64::min);
        rep.rows.push(Row::new().with("s", s).with("theta", "all").with("ratio_spread", spread).with("c_psi", c_fit));
    }
    rep.assertions.push(Assertion::at_least("c_psi_finite", if c_fit.is_finite() && c_fit > 0.0 { 1.0 } else { 0.0 }, 1.0));
    rep.assertions.push(Assertion::at_most("held_out_lhs_over_c_rhs", held_out, 1.0));
    Ok(rep)
}

// ---------------------------------------------------------------- composition

pub fn compose_check(grid: Grid, seed: u64, params: &ComposeParams) -> Result<SweepReport> {
    let function = AnalyticFunction::parse(&params.function)?;
    let f = corpus_entry(grid, seed, &params.signal)?;
    let setup = LocalSetup::new(params.spec, params.c_hat)?;
    let bupu = build_bupu(grid);
    let gc = global_compose(&f, function, &setup, &bupu)?;
    let mut rep = SweepReport::new("compose", "patch");
    for p in &gc.local.patches {
        rep.rows.push(
            Row::new()
                .with("center", p.center)
                .with("lambda", p.lambda)
                .with("truncation_J", p.series.truncation)
                .with("tail_bound", p.tail_bound)
                .with("dilation_norm", p.dilation_norm),
        );
    }
    rep.rows.push(
        Row::new()
            .with("center", "global")
            .with("lambda", gc.unit_lambda)
            .with("truncation_J", gc.tail_truncation)
            .with("tail_bound", gc.tail_bound)
            .with("sup_error", gc.sup_error),
    );
    rep.artifacts.push(Artifact {
        file_name: "composition.json".into(),
        contents: serde_json::to_string_pretty(&gc.local.report)?,
    });
    let tail = gc.tail_bound.max(gc.local.report.tail_bound);
    rep.assertions.push(Assertion::at_most("sup_error_minus_tail_bound", gc.sup_error - tail, 1e-7));
    rep.assertions.push(Assertion::at_most("partition_error", gc.local.partition_error, 1e-10));
    Ok(rep)
}

pub fn reciprocal_check(grid: Grid, params: &ReciprocalParams) -> Result<SweepReport> {
    let mut rep = SweepReport::new("reciprocal", "grid");
    let setup = LocalSetup::new(params.spec, params.c_hat)?;
    let mut norms = Vec::new();
    let mut worst: f64 = 0.0;
    for g in [grid, grid.refine()] {
        let f = SampledSignal::from_real_fn(g, Domain::Space, |x| 2.0 + x.sin())?;
        let bupu = build_bupu(g);
        let c = reciprocal_on_compact(&f, params.k, &setup, &bupu)?;
        let residual = f
            .samples()
            .iter()
            .zip(c.g.samples())
            .enumerate()
            .filter(|(j, _)| (params.k.0..=params.k.1).contains(&g.x(*j)))
            .map(|(_, (a, b))| (a * b - 1.0).norm())
            .fold(0.0, f64::max);
        rep.rows.push(
            Row::new()
                .with("n", g.n())
                .with("patches", c.patches.len())
                .with("max_lambda", c.report.lambda_per_patch.iter().cloned().fold(0.0, f64::max))
                .with("truncation_J", c.report.truncation)
                .with("tail_bound", c.report.tail_bound)
                .with("residual", residual)
                .with("norm_value", c.report.norm_value),
        );
        if norms.is_empty() {
            rep.artifacts.push(Artifact {
                file_name: "composition.json".into(),
                contents: serde_json::to_string_pretty(&c.report)?,
            });
        }
        worst = worst.max(residual);
        norms.push(c.report.norm_value);
    }
    rep.assertions.push(Assertion::at_most("sup_fg_minus_1", worst, 1e-6));
    rep.assertions.push(Assertion::at_most("norm_refinement_rel", rel_change(norms[0], norms[1]), 0.05));
    Ok(rep)
}

// ---------------------------------------------------------------- approximate units

/// Absolute floor below which residual changes are treated as roundoff.
pub const APPROX_UNIT_FLOOR: f64 = 1e-14;

/// `‖f - ψ(λ·) f‖_spec` along `lambdas`, with `ψ` the plateau bump (1 on `[-1, 1]`).
pub fn approximate_unit_sweep(f: &SampledSignal, spec: &NormSpec, lambdas: &[f64]) -> Result<SweepReport> {
    let mut rep = SweepReport::new("approx-unit", "lambda");
    let bupu = build_bupu(*f.grid());
    let fnorm = norm(f, spec, &bupu)?;
    let mut residuals = Vec::new();
    for &l in lambdas {
        let r = norm(&f.map(|x, z| z * (1.0 - plateau_bump(l * x, 1.0)))?, spec, &bupu)?;
        rep.rows.push(Row::new().with("lambda", l).with("residual", r).with("relative", r / fnorm));
        residuals.push(r);
    }
    let floor = APPROX_UNIT_FLOOR * fnorm;
    let excess = residuals.windows(2).map(|w| w[1] / (1.05 * w[0] + floor)).fold(0.0, f64::max);
    rep.assertions.push(Assertion::at_most("monotone_with_5pct_slack", excess, 1.0));
    let last = residuals.last().copied().unwrap_or(f64::NAN);
    rep.assertions.push(Assertion::at_most("final_relative", last / fnorm, 1e-3));
    Ok(rep)
}

pub fn approx_unit_check(grid: Grid, seed: u64, params: &ApproxUnitParams) -> Result<SweepReport> {
    let f = corpus_entry(grid, seed, &params.signal)?;
    let mut rep = approximate_unit_sweep(&f, &params.spec, &params.lambdas)?;
    let bump = SampledSignal::from_real_fn(grid, Domain::Space, |x| classic_bump(x, 1.0))?;
    let bupu = build_bupu(grid);
    let absorbed = norm(&bump.map(|x, z| z * (1.0 - plateau_bump(x, 1.0)))?, &params.spec, &bupu)?;
    rep.rows.push(Row::new().with("lambda", 1.0).with("residual", absorbed).with("signal", "bump-1"));
    rep.assertions.push(Assertion::at_most("plateau_absorption", absorbed, 1e-10));
    Ok(rep)
}

// ---------------------------------------------------------------- sweeps over the corpus

/// One embedding to measure, with the corpus subset it applies to.
#[derive(Clone, Debug)]
pub struct EmbeddingPair {
    pub from: NormSpec,
    pub to: NormSpec,
    pub compact_only: bool,
}

pub fn default_embedding_pairs() -> Vec<EmbeddingPair> {
    let m111 = spec(1.0, 1.0, 1.0);
    let m210 = spec(2.0, 1.0, 0.0);
    let m22 = spec(2.0, 2.0, 0.0);
    let fl1 = NormSpec::fourier_beurling(0.0).expect("static spec");
    let l2 = NormSpec::weighted_lebesgue(2.0, 0.0).expect("static spec");
    let pair = |from, to, compact_only| EmbeddingPair { from, to, compact_only };
    vec![
        pair(m111, m210, false),
        pair(m210, fl1, true),
        pair(fl1, m210, true),
        pair(m22, l2, false),
        pair(l2, m22, false),
    ]
}

/// Corpus maxima of every embedding ratio on two resolutions of the same corpus.
pub fn embedding_sweep(coarse: &[CorpusEntry], fine: &[CorpusEntry], pairs: &[EmbeddingPair]) -> Result<SweepReport> {
    let mut rep = SweepReport::new("embedding-sweep", "pair");
    let mut worst: f64 = 0.0;
    let mut finite = true;
    for pair in pairs {
        let max_over = |entries: &[CorpusEntry]| -> Result<f64> {
            let bupu = build_bupu(*entries[0].signal.grid());
            let v: Vec<f64> = entries
                .par_iter()
                .filter(|e| e.compact || !pair.compact_only)
                .map(|e| embedding_ratio(&e.signal, &pair.from, &pair.to, &bupu))
                .collect::<Result<_>>()?;
            Ok(v.into_iter().fold(0.0, f64::max))
        };
        let (a, b) = (max_over(coarse)?, max_over(fine)?);
        let change = rel_change(a, b);
        rep.rows.push(
            Row::new()
                .with("from", pair.from.label())
                .with("to", pair.to.label())
                .with("max_ratio", a)
                .with("max_ratio_refined", b)
                .with("refinement_rel", change),
        );
        worst = worst.max(change);
        finite &= a.is_finite() && b.is_finite() && a > 0.0;
    }
    rep.assertions.push(Assertion::at_least("ratios_finite", if finite { 1.0 } else { 0.0 }, 1.0));
    rep.assertions.push(Assertion::at_most("refinement_rel", worst, 0.05));
    Ok(rep)
}

pub fn embedding_check(grid: Grid, seed: u64, _params: &EmbeddingParams) -> Result<SweepReport> {
    embedding_sweep(&corpus(grid, seed)?, &corpus(grid.refine(), seed)?, &default_embedding_pairs())
}

/// `ĉ(spec) = max_{f,g} ‖fg‖/(‖f‖‖g‖)` over unordered corpus pairs, including `f = g`.
pub fn algebra_constant(entries: &[CorpusEntry], spec: &NormSpec) -> Result<f64> {
    let bupu = build_bupu(*entries[0].signal.grid());
    let norms: Vec<f64> = entries.par_iter().map(|e| norm(&e.signal, spec, &bupu)).collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..entries.len()).flat_map(|i| (i..entries.len()).map(move |j| (i, j))).collect();
    let v: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| Ok(norm(&entries[i].signal.mul(&entries[j].signal)?, spec, &bupu)? / (norms[i] * norms[j])))
        .collect::<Result<_>>()?;
    Ok(v.into_iter().fold(0.0, f64::max))
}

pub fn algebra_sweep(coarse: &[CorpusEntry], fine: &[CorpusEntry], specs: &[NormSpec]) -> Result<SweepReport> {
    let mut rep = SweepReport::new("algebra-sweep", "spec");
    let mut worst: f64 = 0.0;
    let mut dominates = true;
    for s in specs {
        if !s.is_algebra() {
            return Err(Error::NotAlgebra(s.label()));
        }
        let (a, b) = (algebra_constant(coarse, s)?, algebra_constant(fine, s)?);
        let bupu = build_bupu(*coarse[0].signal.grid());
        for e in coarse {
            dominates &= algebra_ratio(&e.signal, &e.signal, s, &bupu)? <= a;
        }
        let change = rel_change(a, b);
        rep.rows.push(
            Row::new().with("spec", s.label()).with("c_hat", a).with("c_hat_refined", b).with("refinement_rel", change),
        );
        worst = worst.max(change);
    }
    rep.assertions.push(Assertion::at_least("c_hat_dominates_diagonal", if dominates { 1.0 } else { 0.0 }, 1.0));
    rep.assertions.push(Assertion::at_most("refinement_rel", worst, 0.10));
    Ok(rep)
}

pub fn algebra_check(grid: Grid, seed: u64, params: &AlgebraParams) -> Result<SweepReport> {
    algebra_sweep(&corpus(grid, seed)?, &corpus(grid.refine(), seed)?, &params.specs)
}

// ---------------------------------------------------------------- flat counterexample

/// `φ(ξ) = exp(1 - 1/(1 - (ξ/a)²))` on `|ξ| < a`.
fn flat_phi(a: f64) -> impl Fn(f64) -> f64 {
    move |xi| classic_bump(xi, a)
}

/// Smallest `R` with `∫_{|x|>R} |F^{-1}φ|^p ≤ η`, and `‖F^{-1}φ‖_p^p`.
fn tail_radius(p: f64, a: f64, eta_fraction: f64) -> Result<(f64, f64)> {
    let mut q = 10;
    loop {
        let l = PI * 2f64.powi(q);
        // dξ = 2^-q resolves φ; the frequency half-width 2 covers supp φ.
        let grid = Grid::new(1usize << (q + 2), l)?;
        let h = SampledSignal::from_real_fn(grid, Domain::Frequency, flat_phi(a))?;
        let g = fourier_inverse(&h)?;
        let dx = grid.dx();
        let mass: Vec<f64> = g.samples().iter().map(|z| z.norm().powf(p) * dx).collect();
        let total: f64 = mass.iter().sum();
        let eta = eta_fraction * total;
        let edge: f64 = (0..grid.n()).filter(|&j| grid.x(j).abs() >= 0.9 * l).map(|j| mass[j]).sum();
        if edge <= 1e-3 * eta {
            // Accumulate from the outside in, by distance from 0.
            let mut idx: Vec<usize> = (0..grid.n()).collect();
            idx.sort_by(|&i, &j| grid.x(j).abs().total_cmp(&grid.x(i).abs()));
            let mut tail = 0.0;
            for &i in &idx {
                if tail + mass[i] > eta {
                    return Ok((grid.x(i).abs(), total));
                }
                tail += mass[i];
            }
            return Ok((0.0, total));
        }
        if q >= 20 {
            return Err(Error::DomainTooSmall("F^{-1}φ tail does not settle".into()));
        }
        q += 1;
    }
}

/// Measured quantities of one flat-counterexample run.
#[derive(Clone, Debug)]
pub struct FlatRun {
    pub p: f64,
    pub m: u32,
    pub r: u32,
    pub grid: Grid,
    pub r_eta: f64,
    pub nu_spacing: u64,
    pub m_norm: f64,
    pub fa_norm: f64,
    pub f_hat_l1: f64,
    pub f_lp: f64,
    pub phi_l1: f64,
    pub inv_phi_lp: f64,
    pub inv_phi_l1: f64,
    pub mu_hat_sup: f64,
    pub nu_hat_sup: f64,
    pub nu_conv_lp: f64,
    pub epsilon: f64,
}

impl FlatRun {
    pub fn ratio(&self) -> f64 {
        self.m_norm / self.fa_norm
    }
}

/// Sup of a trigonometric polynomial with integer atoms, sampled 64× per degree.
fn sampled_sup(mu: &crate::measures::DiscreteMeasure, degree: usize) -> Result<f64> {
    let (_, v) = mu.fourier_stieltjes_period(64 * degree.max(1))?;
    Ok(v.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// `f̂ = μ ∗ (ν̂ φ)` with `μ` a TV-normalized flat measure of depth `m` on the
/// integers and `ν` an `ℓ^p`-normalized one of depth `r` spaced past the `L^p` tail of `F^{-1}φ`.
pub fn counterexample_flat_run(p: f64, m: u32, r: u32, a: f64) -> Result<FlatRun> {
    if !(1.0..2.0).contains(&p) {
        return Err(Error::InvalidExponent(format!("p = {p} outside [1, 2)")));
    }
    if !(a > 0.0 && a <= 0.1) {
        return Err(Error::InvalidArgument(format!("supp φ = [-{a}, {a}] must lie in [-1/10, 1/10]")));
    }
    let eta_fraction = 1.0 / (2f64.powf(p + 1.0) * (1.0 + 2f64.powf(r as f64 * p)));
    let (r_eta, _) = tail_radius(p, a, eta_fraction)?;
    let mu_spacing = disjointness_spacing(a, m)?;
    let nu_spacing = disjointness_spacing(r_eta, r)?;
    let reach = ((1u64 << r) - 1) as f64 * nu_spacing as f64 + 2.0 * r_eta;
    let mut q = 0;
    while PI * 2f64.powi(q) < reach {
        q += 1;
    }
    let l = PI * 2f64.powi(q);
    let top = (1u64 << m) as f64 * mu_spacing as f64 + 2.0;
    let n = ((2.0 * l * top / PI).ceil() as usize).next_power_of_two().max(8);
    if n > 1 << 24 {
        return Err(Error::CostGate(format!("grid with n = {n} for m = {m}, r = {r}")));
    }
    let grid = Grid::new(n, l)?;

    let mu = rudin_shapiro(m, mu_spacing, Normalization::TotalVariation)?.mu;
    let nu = rudin_shapiro(r, nu_spacing, Normalization::LpAtoms(p))?.nu;
    let phi = SampledSignal::from_real_fn(grid, Domain::Frequency, flat_phi(a))?;
    let support: Vec<usize> = (0..n).filter(|&k| phi.samples()[k].re != 0.0).collect();
    let nu_hat_support = nu.fourier_stieltjes(&support.iter().map(|&k| grid.xi(k)).collect::<Vec<_>>());
    let mut nu_phi = vec![C64::new(0.0, 0.0); n];
    for (&k, v) in support.iter().zip(&nu_hat_support) {
        nu_phi[k] = v * phi.samples()[k].re;
    }
    let nu_phi = SampledSignal::new(grid, Domain::Frequency, nu_phi)?;
    let f_hat = measure_signal_convolve(&mu, &nu_phi)?;
    let f = fourier_inverse(&f_hat)?;
    let inv_phi = fourier_inverse(&phi)?;
    let nu_conv = fourier_inverse(&nu_phi)?;

    let pe = Exponent::new(p)?;
    let one = Exponent::Finite(1.0);
    let bupu = build_bupu(grid);
    let m_norm = modulation_norm(&f, pe, one, 0.0, &bupu)?.value;
    let f_lp = weighted_lp_norm(&f, pe, 0.0)?;
    let f_hat_l1 = weighted_lp_norm(&f_hat, one, 0.0)?;

    let unit_nu = rudin_shapiro(r, 1, Normalization::LpAtoms(p))?.nu;
    let unit_mu = rudin_shapiro(m, 1, Normalization::TotalVariation)?.mu;
    let nu_hat_sup = nu_hat_support.iter().map(|z| z.norm()).fold(sampled_sup(&unit_nu, 1 << r)?, f64::max);
    let mu_hat_sup = sampled_sup(&unit_mu, 1 << m)?;
    let epsilon = 2f64.powf((1.0 - m as f64) / 2.0).max(2f64.powf(0.5 - r as f64 * (1.0 / p - 0.5)));
    Ok(FlatRun {
        p,
        m,
        r,
        grid,
        r_eta,
        nu_spacing,
        m_norm,
        fa_norm: f_lp + f_hat_l1,
        f_hat_l1,
        f_lp,
        phi_l1: weighted_lp_norm(&phi, one, 0.0)?,
        inv_phi_lp: weighted_lp_norm(&inv_phi, pe, 0.0)?,
        inv_phi_l1: weighted_lp_norm(&inv_phi, one, 0.0)?,
        mu_hat_sup: mu_hat_sup.max(0.0),
        nu_hat_sup,
        nu_conv_lp: weighted_lp_norm(&nu_conv, pe, 0.0)?,
        epsilon,
    })
}

pub fn counterexample_flat(params: &FlatParams) -> Result<SweepReport> {
    let mut rep = SweepReport::new("counterexample-flat", "(p, m, r)");
    for &p in &params.p {
        let runs = [
            counterexample_flat_run(p, params.m, params.r, params.support)?,
            counterexample_flat_run(p, params.m + params.step, params.r + params.step, params.support)?,
        ];
        for run in &runs {
            let lower_lp = run.inv_phi_lp / 2f64.powf(1.0 + 1.0 / p);
            let lower_l1 = run.inv_phi_l1 / 2f64.powf(1.0 + 1.0 / p);
            rep.rows.push(
                Row::new()
                    .with("p", p)
                    .with("m", run.m)
                    .with("r", run.r)
                    .with("n", run.grid.n())
                    .with("L", run.grid.half_width())
                    .with("R_eta", run.r_eta)
                    .with("nu_spacing", run.nu_spacing)
                    .with("epsilon", run.epsilon)
                    .with("mu_hat_sup", run.mu_hat_sup)
                    .with("nu_hat_sup", run.nu_hat_sup)
                    .with("M_p1_norm", run.m_norm)
                    .with("FA_p_norm", run.fa_norm)
                    .with("ratio", run.ratio())
                    .with("A_lower_bound_Lp", lower_lp)
                    .with("A_lower_bound_L1_variant", lower_l1)
                    .with("A_L1_variant_holds", run.m_norm >= lower_l1)
                    .with("B_lhs", run.f_hat_l1)
                    .with("B_rhs", run.nu_hat_sup * run.phi_l1)
                    .with("C_lhs", run.f_lp)
                    .with("C_rhs", run.nu_hat_sup * run.inv_phi_lp)
                    .with("C_swapped_rhs", run.mu_hat_sup * run.nu_conv_lp),
            );
            let tag = format!("p={p},m={},r={}", run.m, run.r);
            rep.assertions.push(Assertion::at_least(format!("A_lower_bound_Lp[{tag}]"), run.m_norm / lower_lp, 1.0));
            rep.assertions.push(Assertion::at_most(
                format!("B_fhat_l1_over_bound[{tag}]"),
                run.f_hat_l1 / (run.nu_hat_sup * run.phi_l1),
                1.0,
            ));
            rep.assertions.push(Assertion::at_most(
                format!("C_f_lp_over_bound[{tag}]"),
                run.f_lp / (run.nu_hat_sup * run.inv_phi_lp),
                1.0,
            ));
            rep.assertions.push(Assertion::at_most(
                format!("C_swapped_f_lp_over_bound[{tag}]"),
                run.f_lp / (run.mu_hat_sup * run.nu_conv_lp),
                1.0,
            ));
        }
        rep.assertions.push(Assertion::at_least(format!("ratio_growth[p={p}]"), runs[1].ratio() / runs[0].ratio(), 1.6));
    }
    Ok(rep)
}

// ---------------------------------------------------------------- p = 2 counterexample

/// Largest `k` summed term by term; beyond it the sums switch to Euler–Maclaurin.
pub const DIRECT_CUTOFF: u64 = 1 << 20;

/// `E₁(x) = ∫_x^∞ e^{-t}/t dt` for `x ≥ 1`, by its continued fraction.
fn exp_integral_e1(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h * (-x).exp()
}

/// The three per-block series of the `p = 2` example.
#[derive(Clone, Copy, Debug, PartialEq)]
enum L2Series {
    /// `‖χ_{I_k}‖_{L²}/k = √2/(k ln k)`.
    Modulation,
    /// `|I_k|/k = 2/(k ln²k)`.
    FourierL1,
    /// `‖χ_{I_k}‖²_{L²}/k² = 2/(k² ln²k)`.
    L2,
}

impl L2Series {
    fn term(self, k: f64) -> f64 {
        let lk = k.ln();
        match self {
            L2Series::Modulation => SQRT_2 / (k * lk),
            L2Series::FourierL1 => 2.0 / (k * lk * lk),
            L2Series::L2 => 2.0 / (k * k * lk * lk),
        }
    }

    fn derivative(self, k: f64) -> f64 {
        let lk = k.ln();
        match self {
            L2Series::Modulation => -SQRT_2 * (lk + 1.0) / (k * k * lk * lk),
            L2Series::FourierL1 => -2.0 * (lk + 2.0) / (k * k * lk.powi(3)),
            L2Series::L2 => -4.0 * (lk + 1.0) / (k.powi(3) * lk.powi(3)),
        }
    }

    /// `∫_k^∞` of the term, or `None` if it diverges.
    fn upper_integral(self, k: f64) -> Option<f64> {
        let lk = k.ln();
        match self {
            L2Series::Modulation => None,
            L2Series::FourierL1 => Some(2.0 / lk),
            // ∫_{ln k}^∞ e^{-u}/u² du = e^{-A}/A - E₁(A)
            L2Series::L2 => Some(2.0 * ((-lk).exp() / lk - exp_integral_e1(lk))),
        }
    }

    fn integral(self, a: f64, b: f64) -> f64 {
        match self {
            L2Series::Modulation => SQRT_2 * (b.ln().ln() - a.ln().ln()),
            _ => self.upper_integral(a).unwrap() - self.upper_integral(b).unwrap(),
        }
    }

    /// `Σ_{k=a}^{b}` by Euler–Maclaurin through the first derivative correction.
    fn euler_maclaurin(self, a: f64, b: f64) -> f64 {
        self.integral(a, b) + 0.5 * (self.term(a) + self.term(b)) + (self.derivative(b) - self.derivative(a)) / 12.0
    }

    /// `Σ_{k>b}` by Euler–Maclaurin.
    fn tail_after(self, b: f64) -> Option<f64> {
        let a = b + 1.0;
        Some(self.upper_integral(a)? + 0.5 * self.term(a) - self.derivative(a) / 12.0)
    }
}

/// Partial sums `Σ_{k0 ≤ k ≤ K}` at each checkpoint, ascending in `k`.
fn partial_sums(series: L2Series, k0: u64, checkpoints: &[u64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut sum = 0.0;
    let mut k = k0;
    for &c in checkpoints {
        let stop = c.min(DIRECT_CUTOFF);
        while k <= stop {
            sum += series.term(k as f64);
            k += 1;
        }
        if c > DIRECT_CUTOFF {
            out.push(sum + series.euler_maclaurin(DIRECT_CUTOFF as f64 + 1.0, c as f64));
        } else {
            out.push(sum);
        }
    }
    out
}

pub fn counterexample_l2(k0: u64, checkpoints: &[f64]) -> Result<SweepReport> {
    if k0 < 3 {
        return Err(Error::InvalidArgument(format!("k0 = {k0} must be >= 3")));
    }
    if checkpoints.is_empty() || checkpoints.iter().any(|c| !(c.is_finite() && *c >= k0 as f64 && *c < 9e15)) {
        return Err(Error::InvalidArgument("checkpoints must be finite and in [k0, 9e15)".into()));
    }
    if checkpoints.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("checkpoints must be increasing".into()));
    }
    let ks: Vec<u64> = checkpoints.iter().map(|c| c.floor() as u64).collect();
    let sm = partial_sums(L2Series::Modulation, k0, &ks);
    let sf = partial_sums(L2Series::FourierL1, k0, &ks);
    let sl = partial_sums(L2Series::L2, k0, &ks);
    let mut rep = SweepReport::new("counterexample-l2", "K");
    let target = SQRT_2 * LN_2;
    let mut worst_increment: f64 = 0.0;
    let mut worst_tail: f64 = 0.0;
    for (i, &k) in ks.iter().enumerate() {
        let kf = k as f64;
        let fl_tail = L2Series::FourierL1.tail_after(kf).unwrap();
        let l2_tail = L2Series::L2.tail_after(kf).unwrap();
        let mut row = Row::new()
            .with("K", k)
            .with("S_M21", sm[i])
            .with("S_FL1", sf[i])
            .with("S_L2", sl[i])
            .with("FL1_tail", fl_tail)
            .with("FL1_tail_bound", 2.0 / kf.ln())
            .with("L2_tail", l2_tail);
        worst_tail = worst_tail.max(fl_tail / (2.0 / kf.ln()));
        if i > 0 {
            let prev = ks[i - 1] as f64;
            let inc = sm[i] - sm[i - 1];
            let expected = SQRT_2 * (kf.ln() / prev.ln()).ln();
            row = row
                .with("M21_increment", inc)
                .with("M21_increment_expected", expected)
                .with("increment_over_sqrt2_ln2", inc / target)
                .with("L2_increment", sl[i] - sl[i - 1]);
            worst_increment = worst_increment.max(rel_change(expected, inc));
        }
        rep.rows.push(row);
    }
    let last = *ks.last().unwrap() as f64;
    if ks.len() > 1 {
        rep.assertions.push(Assertion::at_most("M21_increment_rel", worst_increment, 0.10));
        let diffs: Vec<f64> = sl.windows(2).map(|w| w[1] - w[0]).collect();
        let growth = diffs.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
        rep.assertions.push(Assertion::at_most("L2_increments_shrink", growth, 1.0));
    }
    rep.assertions.push(Assertion::at_most("FL1_tail_over_2_div_lnK", worst_tail, 1.0));
    rep.assertions.push(Assertion::at_most("L2_tail_after_last", L2Series::L2.tail_after(last).unwrap(), 1e-6));
    Ok(rep)
}

// ---------------------------------------------------------------- registry

/// Every runnable experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Stft,
    Moyal,
    Norm,
    BupuCheck,
    RudinShapiro,
    Plateau,
    TranslationBound,
    Compose,
    Reciprocal,
    ApproxUnit,
    EmbeddingSweep,
    AlgebraSweep,
    CounterexampleFlat,
    CounterexampleL2,
}

impl Experiment {
    pub const ALL: [Experiment; 14] = [
        Experiment::Stft,
        Experiment::Moyal,
        Experiment::Norm,
        Experiment::BupuCheck,
        Experiment::RudinShapiro,
        Experiment::Plateau,
        Experiment::TranslationBound,
        Experiment::Compose,
        Experiment::Reciprocal,
        Experiment::ApproxUnit,
        Experiment::EmbeddingSweep,
        Experiment::AlgebraSweep,
        Experiment::CounterexampleFlat,
        Experiment::CounterexampleL2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Stft => "stft",
            Experiment::Moyal => "moyal",
            Experiment::Norm => "norm",
            Experiment::BupuCheck => "bupu-check",
            Experiment::RudinShapiro => "rudin-shapiro",
            Experiment::Plateau => "plateau",
            Experiment::TranslationBound => "translation-bound",
            Experiment::Compose => "compose",
            Experiment::Reciprocal => "reciprocal",
            Experiment::ApproxUnit => "approx-unit",
            Experiment::EmbeddingSweep => "embedding-sweep",
            Experiment::AlgebraSweep => "algebra-sweep",
            Experiment::CounterexampleFlat => "counterexample-flat",
            Experiment::CounterexampleL2 => "counterexample-l2",
        }
    }

    /// One-line description of the construction being reproduced.
    pub fn anchor(self) -> &'static str {
        match self {
            Experiment::Stft => "STFT with a Gaussian window; FFT rows vs direct quadrature; L2 isometry constant",
            Experiment::Moyal => "Moyal orthogonality relation for STFTs over the corpus",
            Experiment::Norm => "Modulation / Fourier-Beurling / Fourier-Segal / weighted Lebesgue norm of one signal",
            Experiment::BupuCheck => "Frequency partition of unity: sum to one and block reconstruction",
            Experiment::RudinShapiro => "Rudin-Shapiro measures: |mu^|^2 + |nu^|^2 identity and flat spectrum",
            Experiment::Plateau => "Plateau window as a convolution of two bumps",
            Experiment::TranslationBound => "Weighted L1 bound on translated Fourier transforms of the plateau window",
            Experiment::Compose => "Analytic F acting on f via approximate unit, local series and gluing",
            Experiment::Reciprocal => "Local inverse 1/f on a compact set where f does not vanish",
            Experiment::ApproxUnit => "Dilated plateau windows as an approximate unit",
            Experiment::EmbeddingSweep => "Embedding constants between modulation, Fourier-Lebesgue and L2 norms",
            Experiment::AlgebraSweep => "Empirical multiplication-algebra constants",
            Experiment::CounterexampleFlat => "Flat-measure construction separating M^{p,1} from FA_p, 1 <= p < 2",
            Experiment::CounterexampleL2 => "Block-sum construction separating M^{2,1} from FA_2",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown experiment {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e1_matches_series() {
        // E₁(x) = -γ - ln x - Σ (-x)^k/(k k!) for moderate x.
        let x = 2.5f64;
        let mut s = 0.0;
        let mut t = 1.0;
        for k in 1..80 {
            t *= -x / k as f64;
            s += t / k as f64;
        }
        let series = -0.577_215_664_901_532_9 - x.ln() - s;
        assert!((exp_integral_e1(x) - series).abs() < 1e-13);
    }

    #[test]
    fn euler_maclaurin_matches_direct_sums() {
        for series in [L2Series::Modulation, L2Series::FourierL1, L2Series::L2] {
            let direct: f64 = (1000..=50_000u64).map(|k| series.term(k as f64)).sum();
            let em = series.euler_maclaurin(1000.0, 50_000.0);
            assert!((direct - em).abs() <= 1e-12 * direct.max(1e-300) + 1e-18, "{series:?}: {direct} {em}");
        }
    }

    #[test]
    fn l2_example_default() {
        let rep = counterexample_l2(3, &[1e3, 1e6, 1e12]).unwrap();
        assert!(rep.passed(), "{:?}", rep.assertions);
        let cli = counterexample_l2(3, &[1e2, 1e4, 1e8]).unwrap();
        assert!(cli.passed(), "{:?}", cli.assertions);
        assert!(counterexample_l2(2, &[1e3]).is_err());
        assert!(counterexample_l2(3, &[1e4, 1e3]).is_err());
    }

    #[test]
    fn geomspace_endpoints() {
        let g = geomspace(0.1, 10.0, 21);
        assert_eq!(g.len(), 21);
        assert!((g[0] - 0.1).abs() < 1e-15 && (g[20] - 10.0).abs() < 1e-12 && (g[10] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn experiment_names_round_trip() {
        for e in Experiment::ALL {
            assert_eq!(Experiment::parse(e.name()).unwrap(), e);
            assert_eq!(serde_json::to_string(&e).unwrap(), format!("\"{}\"", e.name()));
        }
    }
}
