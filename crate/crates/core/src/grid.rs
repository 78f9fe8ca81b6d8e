//! Uniform grids, sampled signals and the Fourier transform pair.
//!
//! The forward transform is `f̂(ξ) = ∫ f(x) e^{-ixξ} dx` and the inverse
//! carries the `1/(2π)` factor. The spatial grid starts at `-L` with spacing
//! `dx = 2L/n`; the frequency grid starts at `-nπ/(2L)` with spacing
//! `dxi = π/L`. On these grids the continuous transform is a DFT up to a
//! checkerboard sign, so the discrete pair is exact up to rounding.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, LazyLock, Mutex};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

static PLANNER: LazyLock<Mutex<FftPlanner<f64>>> =
    LazyLock::new(|| Mutex::new(FftPlanner::new()));

pub(crate) fn fft_plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut planner = PLANNER.lock().unwrap_or_else(|e| e.into_inner());
    if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    }
}

/// Checkerboard sign `(-1)^j`.
#[inline]
pub(crate) fn alt(j: usize) -> f64 {
    if j & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Grid {
    n: usize,
    #[serde(rename = "L")]
    half_width: f64,
}

impl Grid {
    pub fn new(n: usize, half_width: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("n = {n} must be a power of two >= 8")));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!("L = {half_width} must be positive")));
        }
        Ok(Grid { n, half_width })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn dxi(&self) -> f64 {
        PI / self.half_width
    }

    pub fn nyquist(&self) -> f64 {
        self.n as f64 * PI / (2.0 * self.half_width)
    }

    /// Spatial sample position `x_j = -L + j dx`.
    pub fn x(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.dx()
    }

    /// Frequency sample position `ξ_k = (k - n/2) dxi`.
    pub fn xi(&self, k: usize) -> f64 {
        (k as f64 - (self.n / 2) as f64) * self.dxi()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    pub fn xis(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.xi(k)).collect()
    }

    /// Same domain, twice the samples.
    pub fn refine(&self) -> Grid {
        Grid { n: 2 * self.n, half_width: self.half_width }
    }

    /// Index of a grid-aligned offset `t / spacing`, if it is an integer.
    pub(crate) fn aligned_steps(t: f64, spacing: f64) -> Option<i64> {
        let r = t / spacing;
        let k = r.round();
        if (r - k).abs() <= 1e-9 * k.abs().max(1.0) {
            Some(k as i64)
        } else {
            None
        }
    }
}

impl<'de> Deserialize<'de> for Grid {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            #[serde(rename = "L")]
            half_width: f64,
        }
        let raw = Raw::deserialize(d)?;
        Grid::new(raw.n, raw.half_width).map_err(serde::de::Error::custom)
    }
}

/// Which axis a signal is sampled on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    #[default]
    Space,
    Frequency,
}

impl Domain {
    fn name(self) -> &'static str {
        match self {
            Domain::Space => "space",
            Domain::Frequency => "frequency",
        }
    }
}

/// Lebesgue exponent in `[1, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Exponent::Infinity)
        } else if p.is_finite() && p >= 1.0 {
            Ok(Exponent::Finite(p))
        } else {
            Err(Error::InvalidExponent(format!("exponent {p} outside [1, inf]")))
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    /// `1/p`, zero for `p = ∞`.
    pub fn reciprocal(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinity => 0.0,
        }
    }

    /// Combines magnitudes `a_i` with weights `w` as `(w Σ a_i^p)^{1/p}` or `max a_i`.
    pub(crate) fn combine<I: IntoIterator<Item = f64>>(self, values: I, w: f64) -> f64 {
        match self {
            Exponent::Infinity => values.into_iter().fold(0.0, f64::max),
            Exponent::Finite(p) if p == 1.0 => w * values.into_iter().fold(0.0, |a, b| a + b),
            Exponent::Finite(p) if p == 2.0 => {
                (w * values.into_iter().fold(0.0, |s, a| s + a * a)).sqrt()
            }
            Exponent::Finite(p) => {
                (w * values.into_iter().fold(0.0, |s, a| s + a.powf(p))).powf(1.0 / p)
            }
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            _ => {
                let p: f64 = t.parse().map_err(|_| Error::Parse(format!("bad exponent {t:?}")))?;
                Exponent::new(p)
            }
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => s.serialize_f64(*p),
            Exponent::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(p) => Exponent::new(p),
            Raw::Str(s) => s.parse(),
        }
        .map_err(serde::de::Error::custom)
    }
}

/// Complex samples of a function on one axis of a [`Grid`].
#[derive(Clone, Debug, PartialEq)]
pub struct SampledSignal {
    grid: Grid,
    domain: Domain,
    samples: Vec<C64>,
}

impl SampledSignal {
    pub fn new(grid: Grid, domain: Domain, samples: Vec<C64>) -> Result<Self> {
        if samples.len() != grid.n() {
            return Err(Error::LengthMismatch { expected: grid.n(), got: samples.len() });
        }
        if let Some(j) = samples.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite(j));
        }
        Ok(SampledSignal { grid, domain, samples })
    }

    /// Internal constructor for results of finite arithmetic on valid inputs.
    pub(crate) fn from_parts(grid: Grid, domain: Domain, samples: Vec<C64>) -> Self {
        debug_assert_eq!(samples.len(), grid.n());
        SampledSignal { grid, domain, samples }
    }

    pub fn zeros(grid: Grid, domain: Domain) -> Self {
        SampledSignal { grid, domain, samples: vec![C64::new(0.0, 0.0); grid.n()] }
    }

    /// Samples `f` at the coordinates of `domain`.
    pub fn from_fn(grid: Grid, domain: Domain, f: impl Fn(f64) -> C64) -> Result<Self> {
        let samples = (0..grid.n()).map(|j| f(coordinate(&grid, domain, j))).collect();
        SampledSignal::new(grid, domain, samples)
    }

    pub fn from_real_fn(grid: Grid, domain: Domain, f: impl Fn(f64) -> f64) -> Result<Self> {
        SampledSignal::from_fn(grid, domain, |t| C64::new(f(t), 0.0))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<C64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn coordinate(&self, j: usize) -> f64 {
        coordinate(&self.grid, self.domain, j)
    }

    pub fn coordinates(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.coordinate(j)).collect()
    }

    /// Quadrature weight of one sample on this axis.
    pub fn spacing(&self) -> f64 {
        spacing(&self.grid, self.domain)
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn map(&self, f: impl Fn(f64, C64) -> C64) -> Result<Self> {
        let samples = self.samples.iter().enumerate().map(|(j, &z)| f(self.coordinate(j), z)).collect();
        SampledSignal::new(self.grid, self.domain, samples)
    }

    pub fn scale(&self, a: C64) -> Self {
        SampledSignal::from_parts(self.grid, self.domain, self.samples.iter().map(|z| z * a).collect())
    }

    pub fn add(&self, other: &SampledSignal) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SampledSignal) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &SampledSignal) -> Result<Self> {
        self.zip(other, |a, b| a * b)
    }

    pub fn zip(&self, other: &SampledSignal, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        check_compatible(self, other)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(&a, &b)| f(a, b)).collect();
        SampledSignal::new(self.grid, self.domain, samples)
    }

    /// Multiplies by `e^{iηx}`, shifting the spectrum by `η`.
    pub fn modulate(&self, eta: f64) -> Result<Self> {
        self.require(Domain::Space)?;
        self.map(|x, z| z * C64::from_polar(1.0, eta * x))
    }

    /// Circular shift by `steps` samples: `out[j] = in[j - steps]`.
    pub fn roll(&self, steps: i64) -> Self {
        let n = self.len() as i64;
        let samples = (0..n).map(|j| self.samples[(j - steps).rem_euclid(n) as usize]).collect();
        SampledSignal::from_parts(self.grid, self.domain, samples)
    }

    pub(crate) fn require(&self, domain: Domain) -> Result<()> {
        if self.domain == domain {
            Ok(())
        } else {
            Err(Error::DomainMismatch { expected: domain.name() })
        }
    }
}

pub(crate) fn coordinate(grid: &Grid, domain: Domain, j: usize) -> f64 {
    match domain {
        Domain::Space => grid.x(j),
        Domain::Frequency => grid.xi(j),
    }
}

pub(crate) fn spacing(grid: &Grid, domain: Domain) -> f64 {
    match domain {
        Domain::Space => grid.dx(),
        Domain::Frequency => grid.dxi(),
    }
}

pub(crate) fn check_compatible(f: &SampledSignal, g: &SampledSignal) -> Result<()> {
    if f.grid != g.grid {
        return Err(Error::GridMismatch);
    }
    if f.domain != g.domain {
        return Err(Error::DomainMismatch { expected: f.domain.name() });
    }
    Ok(())
}

/// `f̂_k = dx (-1)^k DFT((-1)^j f_j)_k`.
pub fn fourier_forward(f: &SampledSignal) -> Result<SampledSignal> {
    f.require(Domain::Space)?;
    let mut buf = f.samples().to_vec();
    forward_raw(f.grid(), &mut buf);
    Ok(SampledSignal::from_parts(*f.grid(), Domain::Frequency, buf))
}

/// `f_j = (dxi/2π) (-1)^j IDFT((-1)^k h_k)_j`, with the unnormalized IDFT.
pub fn fourier_inverse(h: &SampledSignal) -> Result<SampledSignal> {
    h.require(Domain::Frequency)?;
    let mut buf = h.samples().to_vec();
    inverse_raw(h.grid(), &mut buf);
    Ok(SampledSignal::from_parts(*h.grid(), Domain::Space, buf))
}

pub(crate) fn forward_raw(grid: &Grid, buf: &mut [C64]) {
    for (j, z) in buf.iter_mut().enumerate() {
        *z *= alt(j);
    }
    fft_plan(grid.n(), false).process(buf);
    let dx = grid.dx();
    for (k, z) in buf.iter_mut().enumerate() {
        *z *= dx * alt(k);
    }
}

pub(crate) fn inverse_raw(grid: &Grid, buf: &mut [C64]) {
    for (k, z) in buf.iter_mut().enumerate() {
        *z *= alt(k);
    }
    fft_plan(grid.n(), true).process(buf);
    let c = grid.dxi() / (2.0 * PI);
    for (j, z) in buf.iter_mut().enumerate() {
        *z *= c * alt(j);
    }
}

/// Circular convolution on the signals' own axis:
/// `(f∗g)_j = d Σ_m f_{(j-m+n/2) mod n} g_m`, the Riemann sum of `∫ f(t-y) g(y) dy`.
pub fn convolve(f: &SampledSignal, g: &SampledSignal) -> Result<SampledSignal> {
    check_compatible(f, g)?;
    let n = f.len();
    let fwd = fft_plan(n, false);
    let inv = fft_plan(n, true);
    let mut u: Vec<C64> = (0..n).map(|j| f.samples()[(j + n / 2) % n]).collect();
    let mut v = g.samples().to_vec();
    fwd.process(&mut u);
    fwd.process(&mut v);
    for (a, b) in u.iter_mut().zip(&v) {
        *a *= b;
    }
    inv.process(&mut u);
    let c = f.spacing() / n as f64;
    for z in u.iter_mut() {
        *z *= c;
    }
    Ok(SampledSignal::from_parts(*f.grid(), f.domain(), u))
}

/// Fraction of the L¹ mass sitting in the outer 10% of the axis on either side.
pub fn edge_mass_fraction(f: &SampledSignal) -> f64 {
    let n = f.len();
    let band = n / 10;
    let total: f64 = f.samples().iter().map(|z| z.norm()).sum();
    if total == 0.0 {
        return 0.0;
    }
    let edge: f64 = f.samples()[..band].iter().chain(&f.samples()[n - band..]).map(|z| z.norm()).sum();
    edge / total
}

/// `⟨t⟩ = (1 + t²)^{1/2}`.
#[inline]
pub fn japanese(t: f64) -> f64 {
    (1.0 + t * t).sqrt()
}

#[inline]
pub(crate) fn weight(t: f64, s: f64) -> f64 {
    if s == 0.0 {
        1.0
    } else {
        (1.0 + t * t).powf(0.5 * s)
    }
}

/// `‖⟨t⟩^s f‖_{L^p}` on the signal's own axis.
pub fn weighted_lp_norm(f: &SampledSignal, p: Exponent, s: f64) -> Result<f64> {
    if !s.is_finite() {
        return Err(Error::InvalidExponent(format!("weight power {s}")));
    }
    let values = f.samples().iter().enumerate().map(|(j, z)| weight(f.coordinate(j), s) * z.norm());
    Ok(p.combine(values, f.spacing()))
}

/// `⟨f, g⟩ = d Σ f conj(g)`.
pub fn inner_product(f: &SampledSignal, g: &SampledSignal) -> Result<C64> {
    check_compatible(f, g)?;
    let sum: C64 = f.samples().iter().zip(g.samples()).map(|(a, b)| a * b.conj()).sum();
    Ok(sum * f.spacing())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(grid: Grid) -> SampledSignal {
        SampledSignal::from_real_fn(grid, Domain::Space, |x| (-0.5 * x * x).exp()).unwrap()
    }

    #[test]
    fn grid_rejects_bad_sizes() {
        assert!(Grid::new(4, 1.0).is_err());
        assert!(Grid::new(12, 1.0).is_err());
        assert!(Grid::new(16, 0.0).is_err());
        assert!(Grid::new(16, f64::NAN).is_err());
        let g = Grid::new(1024, 7.0).unwrap();
        assert!((g.dx() * g.dxi() * g.n() as f64 - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn non_finite_samples_rejected() {
        let g = Grid::new(8, 1.0).unwrap();
        let mut v = vec![C64::new(0.0, 0.0); 8];
        v[3] = C64::new(f64::NAN, 0.0);
        assert!(matches!(SampledSignal::new(g, Domain::Space, v), Err(Error::NonFinite(3))));
    }

    #[test]
    fn gaussian_transform() {
        let g = Grid::new(4096, 20.0).unwrap();
        let fh = fourier_forward(&gaussian(g)).unwrap();
        let err = fh
            .samples()
            .iter()
            .enumerate()
            .map(|(k, z)| (z - (2.0 * PI).sqrt() * (-0.5 * g.xi(k).powi(2)).exp()).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-8, "{err}");
    }

    #[test]
    fn modulated_gaussian_transform() {
        let g = Grid::new(4096, 20.0).unwrap();
        let f = SampledSignal::from_real_fn(g, Domain::Space, |x| (-0.5 * x * x).exp() * (3.0 * x).cos()).unwrap();
        let fh = fourier_forward(&f).unwrap();
        let c = (2.0 * PI).sqrt() / 2.0;
        for (k, z) in fh.samples().iter().enumerate() {
            let xi = g.xi(k);
            let want = c * ((-0.5 * (xi - 3.0).powi(2)).exp() + (-0.5 * (xi + 3.0).powi(2)).exp());
            assert!((z - want).norm() < 1e-8);
        }
    }

    #[test]
    fn zero_transforms_to_zero() {
        let g = Grid::new(64, 3.0).unwrap();
        let z = SampledSignal::zeros(g, Domain::Space);
        assert!(fourier_forward(&z).unwrap().is_zero());
    }

    #[test]
    fn inverse_of_gaussian_spectrum() {
        let g = Grid::new(2048, 20.0).unwrap();
        let h = SampledSignal::from_real_fn(g, Domain::Frequency, |xi| (2.0 * PI).sqrt() * (-0.5 * xi * xi).exp())
            .unwrap();
        let f = fourier_inverse(&h).unwrap();
        for (j, z) in f.samples().iter().enumerate() {
            assert!((z - (-0.5 * g.x(j).powi(2)).exp()).norm() < 1e-10);
        }
    }

    #[test]
    fn inverse_is_linear() {
        let g = Grid::new(256, 10.0).unwrap();
        let h = SampledSignal::from_real_fn(g, Domain::Frequency, |xi| (-xi * xi).exp()).unwrap();
        let a = C64::new(2.0, 0.0);
        let lhs = fourier_inverse(&h.scale(a)).unwrap();
        let rhs = fourier_inverse(&h).unwrap().scale(a);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn domain_is_checked() {
        let g = Grid::new(64, 3.0).unwrap();
        let z = SampledSignal::zeros(g, Domain::Frequency);
        assert!(fourier_forward(&z).is_err());
        assert!(fourier_inverse(&fourier_inverse(&z).unwrap()).is_err());
    }

    #[test]
    fn gaussian_self_convolution() {
        let g = Grid::new(4096, 40.0).unwrap();
        let f = SampledSignal::from_real_fn(g, Domain::Space, |x| (-x * x).exp()).unwrap();
        let h = convolve(&f, &f).unwrap();
        let c = (PI / 2.0).sqrt();
        for (j, z) in h.samples().iter().enumerate() {
            assert!((z - c * (-0.5 * g.x(j).powi(2)).exp()).norm() < 1e-10);
        }
        let zero = SampledSignal::zeros(g, Domain::Space);
        assert!(convolve(&f, &zero).unwrap().sup_norm() == 0.0);
    }

    #[test]
    fn convolution_needs_same_grid() {
        let a = SampledSignal::zeros(Grid::new(64, 3.0).unwrap(), Domain::Space);
        let b = SampledSignal::zeros(Grid::new(64, 4.0).unwrap(), Domain::Space);
        assert!(matches!(convolve(&a, &b), Err(Error::GridMismatch)));
        assert!(matches!(inner_product(&a, &b), Err(Error::GridMismatch)));
    }

    #[test]
    fn gaussian_l2_norm() {
        let g = Grid::new(4096, 40.0).unwrap();
        let v = weighted_lp_norm(&gaussian(g), Exponent::Finite(2.0), 0.0).unwrap();
        assert!((v - PI.powf(0.25)).abs() < 1e-12);
        let z = SampledSignal::zeros(g, Domain::Space);
        assert_eq!(weighted_lp_norm(&z, Exponent::Finite(1.5), 2.0).unwrap(), 0.0);
    }

    #[test]
    fn weighted_l1_against_refined_trapezoid() {
        // Oracle: trapezoid at 4x and 8x resolution, Richardson-combined.
        let integrand = |x: f64| (1.0 + x * x).sqrt() * (-0.5 * x * x).exp();
        let trap = |m: usize| {
            let (a, b) = (-40.0f64, 40.0f64);
            let h = (b - a) / m as f64;
            let mut s = 0.5 * (integrand(a) + integrand(b));
            for i in 1..m {
                s += integrand(a + i as f64 * h);
            }
            s * h
        };
        let (t4, t8) = (trap(4 * 4096), trap(8 * 4096));
        let oracle = (4.0 * t8 - t4) / 3.0;
        let g = Grid::new(4096, 40.0).unwrap();
        let v = weighted_lp_norm(&gaussian(g), Exponent::Finite(1.0), 1.0).unwrap();
        assert!((v - oracle).abs() < 1e-6 * oracle);
    }

    #[test]
    fn parity_orthogonality() {
        let g = Grid::new(1024, 20.0).unwrap();
        let f = gaussian(g);
        let h = SampledSignal::from_real_fn(g, Domain::Space, |x| x * (-0.5 * x * x).exp()).unwrap();
        assert!(inner_product(&f, &h).unwrap().norm() < 1e-14);
        let ff = inner_product(&f, &f).unwrap();
        assert!(ff.re > 0.0 && ff.im == 0.0);
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinity);
        assert_eq!(" 1.5 ".parse::<Exponent>().unwrap(), Exponent::Finite(1.5));
        assert!("0.5".parse::<Exponent>().is_err());
        assert!("nan".parse::<Exponent>().is_err());
        let e: Exponent = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(e, Exponent::Infinity);
        assert_eq!(serde_json::to_string(&Exponent::Finite(2.0)).unwrap(), "2.0");
    }

    #[test]
    fn roll_and_modulate() {
        let g = Grid::new(64, 8.0).unwrap();
        let f = gaussian(g);
        assert_eq!(f.roll(3).roll(-3), f);
        let m = f.modulate(2.0 * g.dxi()).unwrap();
        assert!((m.sup_norm() - f.sup_norm()).abs() < 1e-15);
    }
}
