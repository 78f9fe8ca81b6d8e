//! Plateau windows, the translation-difference estimate, and composition
//! `F ∘ f` of an analytic `F` with a signal by local power series glued
//! together with a telescoping partition of unity.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bupu::{build_bupu, Bupu};
use crate::error::{Error, Result};
use crate::grid::{convolve, fourier_forward, weight, Domain, Grid, SampledSignal, C64};
use crate::norms::{norm, NormSpec};
use crate::windows::{plateau_bump, transition_bump};

/// Analytic functions the composition engine knows how to expand.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnalyticFunction {
    Identity,
    Square,
    Reciprocal,
    /// `z / (1 + z/a)`, with a pole at `-a`.
    Saturating { a: f64 },
    ExpMinusOne,
}

impl AnalyticFunction {
    pub fn name(&self) -> String {
        match self {
            AnalyticFunction::Identity => "z".into(),
            AnalyticFunction::Square => "z^2".into(),
            AnalyticFunction::Reciprocal => "1/z".into(),
            AnalyticFunction::Saturating { a } => format!("z/(1+z/{a})"),
            AnalyticFunction::ExpMinusOne => "exp(z)-1".into(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "z" | "identity" => Ok(AnalyticFunction::Identity),
            "z^2" | "square" => Ok(AnalyticFunction::Square),
            "1/z" | "reciprocal" => Ok(AnalyticFunction::Reciprocal),
            "saturating" | "z/(1+z/4)" => Ok(AnalyticFunction::Saturating { a: 4.0 }),
            "exp(z)-1" | "exp-minus-one" => Ok(AnalyticFunction::ExpMinusOne),
            other => Err(Error::Parse(format!("unknown analytic function {other:?}"))),
        }
    }

    pub fn eval(&self, z: C64) -> C64 {
        match *self {
            AnalyticFunction::Identity => z,
            AnalyticFunction::Square => z * z,
            AnalyticFunction::Reciprocal => z.inv(),
            AnalyticFunction::Saturating { a } => z / (1.0 + z / a),
            AnalyticFunction::ExpMinusOne => z.exp() - 1.0,
        }
    }

    /// Radius of convergence of the expansion about `z0`.
    pub fn radius(&self, z0: C64) -> f64 {
        match *self {
            AnalyticFunction::Identity | AnalyticFunction::Square | AnalyticFunction::ExpMinusOne => f64::INFINITY,
            AnalyticFunction::Reciprocal => z0.norm(),
            AnalyticFunction::Saturating { a } => (z0 + a).norm(),
        }
    }

    fn degree(&self) -> Option<usize> {
        match self {
            AnalyticFunction::Identity => Some(1),
            AnalyticFunction::Square => Some(2),
            _ => None,
        }
    }

    /// `c_1, …, c_J` of the expansion about `z0`.
    fn coefficients(&self, z0: C64, j_max: usize) -> Vec<C64> {
        let mut c = Vec::with_capacity(j_max);
        match *self {
            AnalyticFunction::Identity => c.extend((1..=j_max).map(|j| C64::new(if j == 1 { 1.0 } else { 0.0 }, 0.0))),
            AnalyticFunction::Square => c.extend((1..=j_max).map(|j| match j {
                1 => 2.0 * z0,
                2 => C64::new(1.0, 0.0),
                _ => C64::new(0.0, 0.0),
            })),
            AnalyticFunction::Reciprocal => {
                // 1/(z0 + w) = Σ (-1)^j w^j / z0^{j+1}
                let r = -z0.inv();
                let mut t = z0.inv();
                for _ in 0..j_max {
                    t *= r;
                    c.push(t);
                }
            }
            AnalyticFunction::Saturating { a } => {
                // a - a²/(a + z0 + w)
                let b = z0 + a;
                let r = -b.inv();
                let mut t = -a * a * b.inv();
                for _ in 0..j_max {
                    t *= r;
                    c.push(t);
                }
            }
            AnalyticFunction::ExpMinusOne => {
                let mut t = z0.exp();
                for j in 1..=j_max {
                    t /= j as f64;
                    c.push(t);
                }
            }
        }
        c
    }

    /// Upper bound on `max_{|w| = r} |F(z0 + w)|`, for `r` below the radius.
    fn circle_bound(&self, z0: C64, r: f64) -> f64 {
        let m = z0.norm();
        match *self {
            AnalyticFunction::Identity => m + r,
            AnalyticFunction::Square => (m + r).powi(2),
            AnalyticFunction::Reciprocal => 1.0 / (m - r),
            AnalyticFunction::Saturating { a } => a.abs() + a * a / ((z0 + a).norm() - r),
            AnalyticFunction::ExpMinusOne => z0.re.exp() * r.exp() + 1.0,
        }
    }
}

/// Truncated expansion `F(z0 + w) ≈ F(z0) + Σ_{j ≤ J} c_j w^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries {
    pub function: AnalyticFunction,
    pub center: C64,
    pub constant: C64,
    pub coefficients: Vec<C64>,
    pub radius: f64,
    pub truncation: usize,
}

/// Largest truncation order tried when searching for a tail bound.
pub const MAX_TRUNCATION: usize = 2000;

impl PowerSeries {
    pub fn expand(function: AnalyticFunction, center: C64, truncation: usize) -> Result<Self> {
        let radius = function.radius(center);
        if !(radius > 0.0) {
            return Err(Error::InvalidArgument(format!("{} is not analytic at {center}", function.name())));
        }
        Ok(PowerSeries {
            function,
            center,
            constant: function.eval(center),
            coefficients: function.coefficients(center, truncation),
            radius,
            truncation,
        })
    }

    /// Smallest truncation whose tail bound on `|w| ≤ w_max` is below `tol`.
    pub fn with_tail_below(function: AnalyticFunction, center: C64, w_max: f64, tol: f64) -> Result<Self> {
        let probe = PowerSeries::expand(function, center, 0)?;
        if w_max >= probe.radius {
            return Err(Error::NotConverged(format!(
                "|w| = {w_max} reaches the convergence radius {}",
                probe.radius
            )));
        }
        let j = (0..=MAX_TRUNCATION)
            .find(|&j| probe.tail_bound_at(j, w_max) < tol)
            .ok_or_else(|| Error::NotConverged(format!("no truncation <= {MAX_TRUNCATION} reaches {tol:e}")))?;
        PowerSeries::expand(function, center, j)
    }

    /// Cauchy estimate `M(r) (|w|/r)^{J+1} / (1 - |w|/r)` of the remainder.
    pub fn tail_bound(&self, w_max: f64) -> f64 {
        self.tail_bound_at(self.truncation, w_max)
    }

    fn tail_bound_at(&self, j: usize, w_max: f64) -> f64 {
        if let Some(d) = self.function.degree() {
            if j >= d {
                return 0.0;
            }
        }
        if w_max == 0.0 {
            return 0.0;
        }
        if w_max >= self.radius {
            return f64::INFINITY;
        }
        let r = if self.radius.is_finite() { 0.5 * (w_max + self.radius) } else { (2.0 * w_max).max(1.0) };
        let rho = w_max / r;
        self.function.circle_bound(self.center, r) * rho.powi(j as i32 + 1) / (1.0 - rho)
    }

    /// `Σ_{j=1}^{J} c_j w^j` by Horner's rule.
    pub fn series_part(&self, w: C64) -> C64 {
        self.coefficients.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| (acc + c) * w)
    }

    pub fn eval(&self, w: C64) -> C64 {
        self.constant + self.series_part(w)
    }
}

/// Trigonometric interpolant of a spatial signal, evaluated anywhere in the domain.
pub struct BandLimited {
    grid: Grid,
    spectrum: Vec<C64>,
}

impl BandLimited {
    pub fn new(f: &SampledSignal) -> Result<Self> {
        Ok(BandLimited { grid: *f.grid(), spectrum: fourier_forward(f)?.into_samples() })
    }

    /// `f` multiplied by a smooth taper equal to 1 on `[c - inner, c + inner]`
    /// and vanishing outside `[c - outer, c + outer]`, which must lie in the domain.
    pub fn localized(f: &SampledSignal, center: f64, inner: f64, outer: f64) -> Result<Self> {
        let g = f.grid();
        let l = g.half_width();
        if !(outer > inner && center - outer >= -l && center + outer <= l - g.dx()) {
            return Err(Error::DomainTooSmall(format!(
                "taper [{:.4}, {:.4}] leaves the domain [-{l}, {l})",
                center - outer,
                center + outer
            )));
        }
        let w = f.map(|x, z| z * transition_bump(x - center, inner, outer))?;
        BandLimited::new(&w)
    }

    /// `(dxi/2π) Σ_k f̂_k e^{ixξ_k}`.
    pub fn eval(&self, x: f64) -> C64 {
        const CHUNK: usize = 64;
        let g = &self.grid;
        let step = C64::from_polar(1.0, x * g.dxi());
        let mut sum = C64::new(0.0, 0.0);
        for (c, block) in self.spectrum.chunks(CHUNK).enumerate() {
            let mut e = C64::from_polar(1.0, x * g.xi(c * CHUNK));
            for s in block {
                sum += s * e;
                e *= step;
            }
        }
        sum * (g.dxi() / (2.0 * PI))
    }
}

/// `f(x0)`: the sample itself when `x0` is a grid point, otherwise a local interpolant.
pub fn value_at(f: &SampledSignal, x0: f64) -> Result<C64> {
    let g = f.grid();
    if let Some(j) = Grid::aligned_steps(x0 + g.half_width(), g.dx()) {
        if (0..g.n() as i64).contains(&j) {
            return Ok(f.samples()[j as usize]);
        }
    }
    let room = (g.half_width() - x0.abs() - g.dx()).min(2.0);
    let inner = 8.0 * g.dx();
    BandLimited::localized(f, x0, inner, room.max(inner * 2.0))?.eval(x0).pipe(Ok)
}

trait Pipe: Sized {
    fn pipe<T>(self, f: impl FnOnce(Self) -> T) -> T {
        f(self)
    }
}
impl<T> Pipe for T {}

/// `ψ = ψ₁ ∗ ψ₂` with `ψ = 1` on `B_R(t₀)` and `supp ψ ⊂ B_{5R}(t₀)`.
#[derive(Clone, Debug)]
pub struct PlateauWindow {
    pub psi1: SampledSignal,
    pub psi2: SampledSignal,
    pub psi: SampledSignal,
    pub center: f64,
    pub radius: f64,
}

impl PlateauWindow {
    /// Radius of a ball about the origin containing the supports of `ψ₁` and `ψ₂`.
    pub fn common_support_radius(&self) -> f64 {
        (4.0 * self.radius).max(self.center.abs() + self.radius)
    }
}

pub fn plateau_window(t0: f64, r: f64, grid: Grid) -> Result<PlateauWindow> {
    if !(r > 0.0 && r.is_finite() && t0.is_finite()) {
        return Err(Error::InvalidArgument(format!("plateau radius {r} and center {t0}")));
    }
    if 5.0 * r + t0.abs() >= grid.half_width() / 2.0 {
        return Err(Error::DomainTooSmall(format!(
            "5R + |t0| = {} needs L > {}",
            5.0 * r + t0.abs(),
            2.0 * (5.0 * r + t0.abs())
        )));
    }
    if 2.0 * r < 16.0 * grid.dx() {
        return Err(Error::DomainTooSmall(format!("R = {r} is not resolved by dx = {}", grid.dx())));
    }
    let psi1 = SampledSignal::from_real_fn(grid, Domain::Space, |x| plateau_bump(x / 2.0, r))?;
    let raw2 = SampledSignal::from_real_fn(grid, Domain::Space, |x| plateau_bump(2.0 * (x - t0), r))?;
    let mass: f64 = raw2.samples().iter().map(|z| z.re).sum::<f64>() * grid.dx();
    let psi2 = raw2.scale(C64::new(1.0 / mass, 0.0));
    let psi = convolve(&psi1, &psi2)?;
    Ok(PlateauWindow { psi1, psi2, psi, center: t0, radius: r })
}

/// `(∫⟨ξ⟩^s |ψ̂(ξ-θ) - ψ̂(ξ)| dξ, |θ|^s (max_{|t|≤R₀} |e^{iθt} - 1|)^{1-s})`.
pub fn translation_difference_bound(w: &PlateauWindow, s: f64, theta: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&s) {
        return Err(Error::InvalidExponent(format!("s = {s} outside [0, 1)")));
    }
    let shifted = fourier_forward(&w.psi.modulate(theta)?)?;
    let base = fourier_forward(&w.psi)?;
    let lhs = shifted
        .samples()
        .iter()
        .zip(base.samples())
        .enumerate()
        .map(|(k, (a, b))| weight(base.coordinate(k), s) * (a - b).norm())
        .sum::<f64>()
        * base.spacing();
    let r0 = w.common_support_radius();
    let osc = if theta.abs() * r0 <= PI { 2.0 * (0.5 * theta * r0).sin().abs() } else { 2.0 };
    let rhs = theta.abs().powf(s) * osc.powf(1.0 - s);
    Ok((lhs, rhs))
}

/// Fixed rescaled window `τ` (1 on `[-1, 1]`, support `[-2, 2]`) with its own grid and BUPU.
pub struct LocalSetup {
    pub spec: NormSpec,
    pub c_hat: f64,
    tau: SampledSignal,
    bupu: Bupu,
}

/// Radius of `supp τ` in rescaled coordinates.
pub const TAU_SUPPORT: f64 = 2.0;
/// Series tail tolerance per patch.
pub const SERIES_TOL: f64 = 1e-8;

impl LocalSetup {
    pub fn new(spec: NormSpec, c_hat: f64) -> Result<Self> {
        LocalSetup::with_grid(spec, c_hat, Grid::new(1024, 8.0)?)
    }

    pub fn with_grid(spec: NormSpec, c_hat: f64, tau_grid: Grid) -> Result<Self> {
        if !(c_hat.is_finite() && c_hat > 0.0) {
            return Err(Error::InvalidArgument(format!("algebra constant {c_hat}")));
        }
        let tau = SampledSignal::from_real_fn(tau_grid, Domain::Space, |y| plateau_bump(y, 1.0))?;
        Ok(LocalSetup { spec, c_hat, tau, bupu: build_bupu(tau_grid) })
    }

    pub fn tau(&self) -> &SampledSignal {
        &self.tau
    }

    /// `radius / (2 max(ĉ, 1))`.
    pub fn gate(&self, radius: f64) -> f64 {
        radius / (2.0 * self.c_hat.max(1.0))
    }
}

/// Dilation factors `2^0 … 2^8`. The difference norm decays like `1/λ`, so
/// eight doublings are needed for a hundredfold drop.
pub const DILATION_SWEEP: [f64; 9] = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0];

/// `‖(f(x0 + ·/λ) - f(x0)) τ‖_spec` on `τ`'s grid.
pub fn dilation_difference_norm(
    f: &SampledSignal,
    x0: f64,
    tau: &SampledSignal,
    lambda: f64,
    spec: &NormSpec,
    tau_bupu: &Bupu,
) -> Result<f64> {
    Ok(norm(&dilation_difference(f, x0, tau, lambda)?, spec, tau_bupu)?)
}

/// `G^λ_{x0}(y) = (f(x0 + y/λ) - f(x0)) τ(y)` sampled on `τ`'s grid.
pub fn dilation_difference(f: &SampledSignal, x0: f64, tau: &SampledSignal, lambda: f64) -> Result<SampledSignal> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("lambda = {lambda}")));
    }
    f.require(Domain::Space)?;
    let reach = tau
        .samples()
        .iter()
        .enumerate()
        .filter(|(_, z)| z.norm() != 0.0)
        .map(|(i, _)| tau.coordinate(i).abs())
        .fold(0.0, f64::max)
        / lambda;
    let g = f.grid();
    let c = value_at(f, x0)?;
    let centered = f.map(|_, z| z - c)?;
    if centered.is_zero() {
        return Ok(SampledSignal::zeros(*tau.grid(), Domain::Space));
    }
    let inner = reach + 4.0 * g.dx();
    let room = g.half_width() - g.dx() - x0.abs();
    let outer = (inner + inner.max(32.0 * g.dx())).min(room);
    if outer < inner + 16.0 * g.dx() {
        return Err(Error::DomainTooSmall(format!(
            "resampling f at {x0} ± {reach:.4} leaves no room for a taper in [-{}, {})",
            g.half_width(),
            g.half_width()
        )));
    }
    let interp = BandLimited::localized(&centered, x0, inner, outer)?;
    tau.map(|y, t| if t.norm() == 0.0 { t } else { interp.eval(x0 + y / lambda) * t })
}

/// One local solution `g = F∘f` on `[x0 - 1/λ, x0 + 1/λ]`.
#[derive(Clone, Debug)]
pub struct LocalPatch {
    pub center: f64,
    pub lambda: f64,
    pub series: PowerSeries,
    pub tail_bound: f64,
    pub dilation_norm: f64,
    /// `τ(λ(x - x0))` on `f`'s grid.
    pub tau: SampledSignal,
    pub g: SampledSignal,
    /// `(λ, ‖G^λ‖)` for every λ tried.
    pub history: Vec<(f64, f64)>,
}

impl LocalPatch {
    pub fn neighborhood(&self) -> (f64, f64) {
        (self.center - 1.0 / self.lambda, self.center + 1.0 / self.lambda)
    }
}

/// Expands `function` about `f(x0)` and builds the local patch.
pub fn local_compose_fn(f: &SampledSignal, x0: f64, function: AnalyticFunction, setup: &LocalSetup) -> Result<LocalPatch> {
    let z0 = value_at(f, x0)?;
    local_compose(f, x0, &PowerSeries::expand(function, z0, 0)?, setup)
}

/// Doubles λ until `‖G^λ_{x0}‖_spec < radius / (2 max(ĉ,1))` and the sampled range
/// with a 10% margin fits in the disc of convergence, then sums the series.
pub fn local_compose(f: &SampledSignal, x0: f64, series: &PowerSeries, setup: &LocalSetup) -> Result<LocalPatch> {
    let z0 = value_at(f, x0)?;
    if (z0 - series.center).norm() > 1e-12 * z0.norm().max(1.0) {
        return Err(Error::InvalidArgument(format!("series centered at {} but f(x0) = {z0}", series.center)));
    }
    let function = series.function;
    let radius = series.radius;
    let g = f.grid();
    let lambda_max = 1.0 / (4.0 * g.dx());
    let mut history = Vec::new();
    let mut lambda = 1.0;
    while lambda <= lambda_max {
        let dn = match dilation_difference_norm(f, x0, &setup.tau, lambda, &setup.spec, &setup.bupu) {
            Ok(v) => v,
            Err(Error::DomainTooSmall(_)) => {
                lambda *= 2.0;
                continue;
            }
            Err(e) => return Err(e),
        };
        history.push((lambda, dn));
        if dn < setup.gate(radius) {
            let tau = SampledSignal::from_real_fn(*g, Domain::Space, |x| plateau_bump(lambda * (x - x0), 1.0))?;
            let w = f.zip(&tau, |v, t| (v - z0) * t)?;
            let w_max = w.sup_norm();
            if 1.1 * w_max < radius {
                let series = PowerSeries::with_tail_below(function, z0, w_max, SERIES_TOL)?;
                let gv = w.zip(&tau, |wv, t| series.constant * t + series.series_part(wv))?;
                return Ok(LocalPatch {
                    center: x0,
                    lambda,
                    tail_bound: series.tail_bound(w_max),
                    series,
                    dilation_norm: dn,
                    tau,
                    g: gv,
                    history,
                });
            }
        }
        lambda *= 2.0;
    }
    Err(Error::NotConverged(format!(
        "no lambda <= {lambda_max} met the gate {:.3e} at x0 = {x0}; tried {history:?}",
        setup.gate(radius)
    )))
}

/// `g = Σ h_j g_j` with `h_j = χ_j Π_{i<j} (1 - χ_i)`, where `χ_j` is 1 on the
/// inner half `|x - x_j| ≤ 1/(2λ_j)` of patch `j` and vanishes off its plateau.
#[derive(Clone, Debug)]
pub struct Glued {
    pub g: SampledSignal,
    /// `max_{x ∈ K} |Σ h_j(x) - 1|`.
    pub partition_error: f64,
}

pub fn glue_local(f: &SampledSignal, k: (f64, f64), patches: &[LocalPatch]) -> Result<Glued> {
    if patches.is_empty() {
        return Err(Error::InvalidArgument("no patches".into()));
    }
    let mut inner: Vec<(f64, f64)> =
        patches.iter().map(|p| (p.center - 0.5 / p.lambda, p.center + 0.5 / p.lambda)).collect();
    inner.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut reach = k.0;
    for &(a, b) in &inner {
        if a > reach {
            break;
        }
        reach = reach.max(b);
    }
    if inner[0].0 > k.0 || reach < k.1 {
        return Err(Error::InvalidArgument(format!("patches do not cover [{}, {}]", k.0, k.1)));
    }
    let grid = *f.grid();
    let mut out = vec![C64::new(0.0, 0.0); grid.n()];
    let mut partition_error: f64 = 0.0;
    for (i, x) in grid.xs().into_iter().enumerate() {
        let mut remaining = 1.0;
        let mut acc = C64::new(0.0, 0.0);
        for p in patches {
            let chi = plateau_bump(x - p.center, 0.5 / p.lambda);
            if chi == 0.0 {
                continue;
            }
            acc += p.g.samples()[i] * (chi * remaining);
            remaining *= 1.0 - chi;
        }
        out[i] = acc;
        if x >= k.0 && x <= k.1 {
            partition_error = partition_error.max(remaining.abs());
        }
    }
    Ok(Glued { g: SampledSignal::new(grid, Domain::Space, out)?, partition_error })
}

/// Composition summary in the JSON shape used by reports.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompositionReport {
    #[serde(rename = "F")]
    pub function: String,
    #[serde(rename = "K")]
    pub k: (f64, f64),
    pub lambda_per_patch: Vec<f64>,
    #[serde(rename = "truncation_J")]
    pub truncation: usize,
    pub tail_bound: f64,
    pub sup_error: f64,
    pub norm_value: f64,
}

#[derive(Clone, Debug)]
pub struct Composition {
    pub g: SampledSignal,
    pub patches: Vec<LocalPatch>,
    pub partition_error: f64,
    pub report: CompositionReport,
}

/// Greedy left-to-right cover of `K`: each next center sits at the right edge of
/// the previous inner plateau, so consecutive inner plateaus overlap.
pub fn compose_on_compact(
    f: &SampledSignal,
    k: (f64, f64),
    function: AnalyticFunction,
    setup: &LocalSetup,
    bupu: &Bupu,
) -> Result<Composition> {
    if !(k.0 <= k.1) {
        return Err(Error::InvalidArgument(format!("empty interval [{}, {}]", k.0, k.1)));
    }
    let mut patches = Vec::new();
    let mut x = k.0;
    loop {
        let p = local_compose_fn(f, x, function, setup)?;
        let right = p.center + 0.5 / p.lambda;
        patches.push(p);
        if right >= k.1 {
            break;
        }
        x = right;
    }
    let glued = glue_local(f, k, &patches)?;
    let sup_error = sup_error_on(f, &glued.g, k, function);
    let report = CompositionReport {
        function: function.name(),
        k,
        lambda_per_patch: patches.iter().map(|p| p.lambda).collect(),
        truncation: patches.iter().map(|p| p.series.truncation).max().unwrap_or(0),
        tail_bound: patches.iter().map(|p| p.tail_bound).fold(0.0, f64::max),
        sup_error,
        norm_value: norm(&glued.g, &setup.spec, bupu)?,
    };
    Ok(Composition { g: glued.g, patches, partition_error: glued.partition_error, report })
}

/// `max_{x_j ∈ K} |g(x_j) - F(f(x_j))|`.
pub fn sup_error_on(f: &SampledSignal, g: &SampledSignal, k: (f64, f64), function: AnalyticFunction) -> f64 {
    f.samples()
        .iter()
        .zip(g.samples())
        .enumerate()
        .filter(|(j, _)| (k.0..=k.1).contains(&f.coordinate(*j)))
        .map(|(_, (a, b))| (b - function.eval(*a)).norm())
        .fold(0.0, f64::max)
}

/// `g ≈ 1/f` on `K`, requiring `f` to stay away from zero there.
pub fn reciprocal_on_compact(f: &SampledSignal, k: (f64, f64), setup: &LocalSetup, bupu: &Bupu) -> Result<Composition> {
    let min = f
        .samples()
        .iter()
        .enumerate()
        .filter(|(j, _)| (k.0..=k.1).contains(&f.coordinate(*j)))
        .map(|(_, z)| z.norm())
        .fold(f64::INFINITY, f64::min);
    if !(min > 0.0) {
        return Err(Error::InvalidArgument(format!("f vanishes on [{}, {}]", k.0, k.1)));
    }
    compose_on_compact(f, k, AnalyticFunction::Reciprocal, setup, bupu)
}

#[derive(Clone, Debug)]
pub struct GlobalComposition {
    pub g: SampledSignal,
    /// Dilation of the approximate unit `ψ(λx)` that split off the small tail.
    pub unit_lambda: f64,
    pub tail_truncation: usize,
    pub tail_bound: f64,
    pub local: Composition,
    pub sup_error: f64,
}

/// `g = (1 - τ₀) g₀ + τ₀ g₁` with `g₀ = Σ c_j (f - φf)^j`, `φ = ψ(λ·)` and `g₁`
/// the glued local composition on `supp τ₀`.
pub fn global_compose(f: &SampledSignal, function: AnalyticFunction, setup: &LocalSetup, bupu: &Bupu) -> Result<GlobalComposition> {
    let zero = C64::new(0.0, 0.0);
    if function.eval(zero).norm() != 0.0 {
        return Err(Error::InvalidArgument(format!("{} does not vanish at 0", function.name())));
    }
    let probe = PowerSeries::expand(function, zero, 0)?;
    let gate = setup.gate(probe.radius);
    let grid = *f.grid();
    let l = grid.half_width();
    let mut lambda: f64 = 1.0;
    loop {
        // supp φ = B_{2/λ}; τ₀ = 1 there with support B_{4/λ}; patches reach 2 further.
        if 4.0 / lambda + 2.0 >= l {
            return Err(Error::NotConverged(format!(
                "tail condition unachievable on this grid: need lambda < {lambda} with L = {l}"
            )));
        }
        let phi = SampledSignal::from_real_fn(grid, Domain::Space, |x| plateau_bump(lambda * x, 1.0))?;
        let u = f.zip(&phi, |a, b| a - a * b)?;
        let sup = u.sup_norm();
        if norm(&u, &setup.spec, bupu)? < gate && 1.1 * sup < probe.radius {
            let series = PowerSeries::with_tail_below(function, zero, sup, SERIES_TOL)?;
            let g0 = u.map(|_, w| series.eval(w))?;
            let plateau = 2.0 / lambda;
            let tau0 = SampledSignal::from_real_fn(grid, Domain::Space, |x| plateau_bump(x, plateau))?;
            let k = (-2.0 * plateau, 2.0 * plateau);
            let local = compose_on_compact(f, k, function, setup, bupu)?;
            let g = SampledSignal::new(
                grid,
                Domain::Space,
                (0..grid.n())
                    .map(|j| {
                        let t = tau0.samples()[j].re;
                        g0.samples()[j] * (1.0 - t) + local.g.samples()[j] * t
                    })
                    .collect(),
            )?;
            let sup_error = sup_error_on(f, &g, (-l, l), function);
            return Ok(GlobalComposition {
                g,
                unit_lambda: lambda,
                tail_truncation: series.truncation,
                tail_bound: series.tail_bound(sup),
                local,
                sup_error,
            });
        }
        lambda /= 2.0;
    }
}

/// Result of the point-Ditkin window search.
#[derive(Clone, Debug)]
pub struct DitkinWindow {
    pub tau: SampledSignal,
    pub lambda: f64,
    pub residual: f64,
    /// `τ = 1` on this interval.
    pub neighborhood: (f64, f64),
    /// `(λ, ‖(f - f(x0)) ψ_λ‖)` for every λ tried.
    pub history: Vec<(f64, f64)>,
}

/// Doubles λ in `ψ(λ(x - x0))` until `‖(f - f(x0)) ψ_λ‖_spec < eps`.
pub fn point_ditkin_window(
    f: &SampledSignal,
    x0: f64,
    spec: &NormSpec,
    eps: f64,
    window: &PlateauWindow,
    bupu: &Bupu,
) -> Result<DitkinWindow> {
    if !(0.0..1.0).contains(&spec.s) {
        return Err(Error::InvalidExponent(format!("s = {} outside [0, 1)", spec.s)));
    }
    let grid = *f.grid();
    let z0 = value_at(f, x0)?;
    let psi = BandLimited::new(&window.psi)?;
    let reach = 5.0 * window.radius + window.center.abs();
    let lambda_max = reach / (8.0 * grid.dx());
    let mut history = Vec::new();
    let mut lambda = 1.0;
    while lambda <= lambda_max {
        if x0.abs() + reach / lambda < grid.half_width() {
            let tau = SampledSignal::from_fn(grid, Domain::Space, |x| {
                let y = lambda * (x - x0);
                if y.abs() < reach {
                    C64::new(psi.eval(y).re, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            })?;
            let r = norm(&f.zip(&tau, |v, t| (v - z0) * t)?, spec, bupu)?;
            history.push((lambda, r));
            if r < eps {
                let plateau = window.radius / lambda;
                return Ok(DitkinWindow {
                    tau,
                    lambda,
                    residual: r,
                    neighborhood: (x0 + window.center / lambda - plateau, x0 + window.center / lambda + plateau),
                    history,
                });
            }
        }
        lambda *= 2.0;
    }
    Err(Error::NotConverged(format!("residual never fell below {eps:e}; tried {history:?}")))
}
