//! Modulation, Fourier–Beurling, Fourier–Segal and weighted Lebesgue norms.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bupu::{BlockDecomposer, Bupu};
use crate::error::{Error, Result};
use crate::grid::{fourier_forward, weight, weighted_lp_norm, Domain, Exponent, SampledSignal};
use crate::stft::StftEngine;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    Modulation,
    FourierBeurling,
    FourierSegal,
    WeightedLebesgue,
}

/// `(space, p, q, s)`. Fourier–Beurling ignores `p, q`; Fourier–Segal ignores `q, s`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct NormSpec {
    pub space: Space,
    pub p: Exponent,
    pub q: Exponent,
    pub s: f64,
}

#[derive(Deserialize)]
struct RawSpec {
    space: Space,
    #[serde(default = "one")]
    p: Exponent,
    #[serde(default = "one")]
    q: Exponent,
    #[serde(default)]
    s: f64,
}

fn one() -> Exponent {
    Exponent::Finite(1.0)
}

impl TryFrom<RawSpec> for NormSpec {
    type Error = Error;

    fn try_from(r: RawSpec) -> Result<Self> {
        NormSpec::new(r.space, r.p, r.q, r.s)
    }
}

impl NormSpec {
    pub fn new(space: Space, p: Exponent, q: Exponent, s: f64) -> Result<Self> {
        Exponent::new(p.value())?;
        Exponent::new(q.value())?;
        if !(s.is_finite() && s >= 0.0) {
            return Err(Error::InvalidExponent(format!("weight power s = {s} must be >= 0")));
        }
        if space == Space::FourierSegal && p == Exponent::Infinity {
            return Err(Error::InvalidExponent("Fourier-Segal needs p < inf".into()));
        }
        Ok(NormSpec { space, p, q, s })
    }

    pub fn modulation(p: f64, q: f64, s: f64) -> Result<Self> {
        NormSpec::new(Space::Modulation, Exponent::new(p)?, Exponent::new(q)?, s)
    }

    pub fn fourier_beurling(s: f64) -> Result<Self> {
        NormSpec::new(Space::FourierBeurling, one(), one(), s)
    }

    pub fn fourier_segal(p: f64) -> Result<Self> {
        NormSpec::new(Space::FourierSegal, Exponent::new(p)?, one(), 0.0)
    }

    pub fn weighted_lebesgue(p: f64, s: f64) -> Result<Self> {
        NormSpec::new(Space::WeightedLebesgue, Exponent::new(p)?, one(), s)
    }

    /// Modulation spaces that are multiplication algebras: `q = 1, s ≥ 0` or `s > 1/q'`.
    pub fn is_algebra(&self) -> bool {
        self.space == Space::Modulation && (self.q == Exponent::Finite(1.0) || self.s > 1.0 - self.q.reciprocal())
    }

    pub fn label(&self) -> String {
        match self.space {
            Space::Modulation => format!("M^{{{},{}}}_{}", self.p, self.q, self.s),
            Space::FourierBeurling => format!("FL^1_{}", self.s),
            Space::FourierSegal => format!("FA_{}", self.p),
            Space::WeightedLebesgue => format!("L^{}_{}", self.p, self.s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockContribution {
    pub k: i64,
    pub contribution: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    #[serde(flatten)]
    pub spec: NormSpec,
    pub value: f64,
    pub tail_estimate: f64,
    pub blocks: Vec<BlockContribution>,
}

/// `(k, ‖φ(D-k) f‖_{L^p})` for every block whose spectral slice is nonzero, ascending in `k`.
pub fn block_norms(f: &SampledSignal, p: Exponent, bupu: &Bupu) -> Result<Vec<(i64, f64)>> {
    f.require(Domain::Space)?;
    let dec = BlockDecomposer::new(f, bupu)?;
    let dx = f.grid().dx();
    let ks: Vec<i64> = bupu.blocks().collect();
    let out = ks
        .par_iter()
        .filter_map(|&k| dec.block(k).map(|b| (k, p.combine(b.iter().map(|z| z.norm()), dx))))
        .collect();
    Ok(out)
}

/// BUPU characterization `(Σ_k ⟨k⟩^{sq} ‖φ(D-k) f‖_p^q)^{1/q}`.
pub fn modulation_norm(f: &SampledSignal, p: Exponent, q: Exponent, s: f64, bupu: &Bupu) -> Result<NormReport> {
    let spec = NormSpec::new(Space::Modulation, p, q, s)?;
    let blocks: Vec<BlockContribution> = block_norms(f, p, bupu)?
        .into_iter()
        .map(|(k, v)| BlockContribution { k, contribution: weight(k as f64, s) * v })
        .collect();
    let value = q.combine(blocks.iter().map(|b| b.contribution), 1.0);
    let edge = bupu.max_block();
    let tail_estimate = q.combine(blocks.iter().filter(|b| b.k.abs() == edge).map(|b| b.contribution), 1.0);
    Ok(NormReport { spec, value, tail_estimate, blocks })
}

/// Def. 2.1 by tensor quadrature over the STFT with the given window.
pub fn modulation_norm_stft(f: &SampledSignal, p: Exponent, q: Exponent, s: f64, window: &SampledSignal) -> Result<f64> {
    NormSpec::new(Space::Modulation, p, q, s)?;
    let engine = StftEngine::new(f, window)?;
    let grid = *f.grid();
    let dx = grid.dx();
    let inner: Vec<f64> = (0..grid.n())
        .into_par_iter()
        .map(|k| {
            let row = engine.row(k);
            weight(grid.xi(k), s) * p.combine(row.iter().map(|z| z.norm()), dx)
        })
        .collect();
    Ok(q.combine(inner, grid.dxi()))
}

/// `∫ ⟨ξ⟩^s |f̂(ξ)| dξ`.
pub fn fourier_beurling_norm(f: &SampledSignal, s: f64) -> Result<f64> {
    if !(s.is_finite() && s >= 0.0) {
        return Err(Error::InvalidExponent(format!("weight power s = {s} must be >= 0")));
    }
    weighted_lp_norm(&fourier_forward(f)?, Exponent::Finite(1.0), s)
}

/// `‖f‖_{L^p} + ‖f̂‖_{L^1}`.
pub fn fourier_segal_norm(f: &SampledSignal, p: Exponent) -> Result<f64> {
    if p == Exponent::Infinity {
        return Err(Error::InvalidExponent("Fourier-Segal needs p < inf".into()));
    }
    Ok(weighted_lp_norm(f, p, 0.0)? + fourier_beurling_norm(f, 0.0)?)
}

/// Value of any [`NormSpec`]; the BUPU is used only for modulation norms.
pub fn norm(f: &SampledSignal, spec: &NormSpec, bupu: &Bupu) -> Result<f64> {
    match spec.space {
        Space::Modulation => Ok(modulation_norm(f, spec.p, spec.q, spec.s, bupu)?.value),
        Space::FourierBeurling => fourier_beurling_norm(f, spec.s),
        Space::FourierSegal => fourier_segal_norm(f, spec.p),
        Space::WeightedLebesgue => weighted_lp_norm(f, spec.p, spec.s),
    }
}

/// `‖f‖_to / ‖f‖_from`.
pub fn embedding_ratio(f: &SampledSignal, from: &NormSpec, to: &NormSpec, bupu: &Bupu) -> Result<f64> {
    if f.is_zero() {
        return Err(Error::ZeroInput("embedding ratio of the zero signal"));
    }
    Ok(norm(f, to, bupu)? / norm(f, from, bupu)?)
}

fn algebra_inputs(f: &SampledSignal, g: &SampledSignal, spec: &NormSpec) -> Result<SampledSignal> {
    if !spec.is_algebra() {
        return Err(Error::NotAlgebra(spec.label()));
    }
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroInput("algebra ratio of a zero factor"));
    }
    f.mul(g)
}

/// `‖fg‖ / (‖f‖ ‖g‖)` in an algebra-regime modulation space.
pub fn algebra_ratio(f: &SampledSignal, g: &SampledSignal, spec: &NormSpec, bupu: &Bupu) -> Result<f64> {
    let fg = algebra_inputs(f, g, spec)?;
    Ok(norm(&fg, spec, bupu)? / (norm(f, spec, bupu)? * norm(g, spec, bupu)?))
}

/// `‖fg‖_{M^{p,q}_s} / (‖f‖_{M^{∞,q}_s} ‖g‖_{M^{p,q}_s})`.
pub fn algebra_ratio_mixed(f: &SampledSignal, g: &SampledSignal, spec: &NormSpec, bupu: &Bupu) -> Result<f64> {
    let fg = algebra_inputs(f, g, spec)?;
    let sup = NormSpec { p: Exponent::Infinity, ..*spec };
    Ok(norm(&fg, spec, bupu)? / (norm(f, &sup, bupu)? * norm(g, spec, bupu)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bupu::build_bupu;
    use crate::grid::{fourier_inverse, Grid, C64};
    use std::f64::consts::PI;

    fn gaussian(g: Grid) -> SampledSignal {
        SampledSignal::from_real_fn(g, Domain::Space, |x| (-0.5 * x * x).exp()).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(NormSpec::modulation(0.5, 1.0, 0.0).is_err());
        assert!(NormSpec::modulation(1.0, 1.0, -1.0).is_err());
        assert!(NormSpec::fourier_segal(f64::INFINITY).is_err());
        assert!(NormSpec::modulation(2.0, 1.0, 0.0).unwrap().is_algebra());
        assert!(!NormSpec::modulation(2.0, 2.0, 0.5).unwrap().is_algebra());
        assert!(NormSpec::modulation(2.0, 2.0, 0.6).unwrap().is_algebra());
        assert!(!NormSpec::fourier_beurling(1.0).unwrap().is_algebra());
        let spec: NormSpec = serde_json::from_str(r#"{"space":"modulation","p":"inf","q":1,"s":0.5}"#).unwrap();
        assert_eq!(spec, NormSpec::modulation(f64::INFINITY, 1.0, 0.5).unwrap());
        assert!(serde_json::from_str::<NormSpec>(r#"{"space":"modulation","p":0.2}"#).is_err());
    }

    #[test]
    fn zero_and_homogeneity() {
        let g = Grid::new(1024, 20.0).unwrap();
        let b = build_bupu(g);
        let z = SampledSignal::zeros(g, Domain::Space);
        let one = Exponent::Finite(1.0);
        assert_eq!(modulation_norm(&z, one, one, 0.5, &b).unwrap().value, 0.0);
        let f = gaussian(g).modulate(2.0).unwrap();
        let f2 = f.scale(C64::new(2.0, 0.0));
        for (p, q) in [(1.0, 1.0), (2.0, 2.0), (2.0, 1.0), (f64::INFINITY, 1.0)] {
            let (p, q) = (Exponent::new(p).unwrap(), Exponent::new(q).unwrap());
            let a = modulation_norm(&f, p, q, 0.5, &b).unwrap().value;
            let c = modulation_norm(&f2, p, q, 0.5, &b).unwrap().value;
            assert_eq!(c, 2.0 * a);
        }
    }

    #[test]
    fn q_one_value_is_block_sum() {
        let g = Grid::new(2048, 30.0).unwrap();
        let b = build_bupu(g);
        let r = modulation_norm(&gaussian(g), Exponent::Finite(1.5), Exponent::Finite(1.0), 1.0, &b).unwrap();
        let sum: f64 = r.blocks.iter().map(|c| c.contribution).sum();
        assert!((r.value - sum).abs() <= 1e-12 * r.value);
        let json = serde_json::to_value(&r).unwrap();
        for key in ["space", "p", "q", "s", "value", "tail_estimate", "blocks"] {
            assert!(json.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn single_block_collapse() {
        let g = Grid::new(2048, 200.0).unwrap();
        let h = SampledSignal::from_real_fn(g, Domain::Frequency, |xi| crate::windows::classic_bump(xi, 0.09)).unwrap();
        let f = fourier_inverse(&h).unwrap();
        let b = build_bupu(g);
        for (p, q, s) in [(1.0, 1.0, 0.0), (2.0, 1.0, 1.0), (1.5, f64::INFINITY, 2.0)] {
            let (p, q) = (Exponent::new(p).unwrap(), Exponent::new(q).unwrap());
            let v = modulation_norm(&f, p, q, s, &b).unwrap().value;
            assert!((v - weighted_lp_norm(&f, p, 0.0).unwrap()).abs() <= 1e-12 * v);
        }
    }

    #[test]
    fn closed_form_fourier_norms() {
        let g = Grid::new(4096, 40.0).unwrap();
        let f = gaussian(g);
        assert!((fourier_beurling_norm(&f, 0.0).unwrap() - 2.0 * PI).abs() < 1e-10);
        let fa = fourier_segal_norm(&f, Exponent::Finite(2.0)).unwrap();
        assert!((fa - PI.powf(0.25) - 2.0 * PI).abs() < 1e-10);
        assert!(fourier_beurling_norm(&f, 1.0).unwrap() >= fourier_beurling_norm(&f, 0.5).unwrap());
        let m = f.modulate(5.0 * g.dxi()).unwrap();
        let fm = fourier_segal_norm(&m, Exponent::Finite(1.5)).unwrap();
        assert!((fm - fourier_segal_norm(&f, Exponent::Finite(1.5)).unwrap()).abs() < 1e-12 * fm);
    }

    #[test]
    fn even_signal_half_line() {
        let g = Grid::new(2048, 30.0).unwrap();
        let f = SampledSignal::from_real_fn(g, Domain::Space, |x| (-x * x / 3.0).exp() * (1.0 + x * x)).unwrap();
        let fh = fourier_forward(&f).unwrap();
        let s = 0.7;
        let full = fourier_beurling_norm(&f, s).unwrap();
        let n = g.n();
        // Positive half: indices n/2+1..n plus the mirrored Nyquist sample at index 0.
        let mut half = 0.5 * fh.samples()[n / 2].norm();
        for k in n / 2 + 1..n {
            half += weight(g.xi(k), s) * fh.samples()[k].norm();
        }
        half += 0.5 * weight(g.xi(0), s) * fh.samples()[0].norm();
        assert!((full - 2.0 * half * g.dxi()).abs() <= 1e-10 * full);
    }

    #[test]
    fn identical_specs_give_unit_ratio() {
        let g = Grid::new(1024, 20.0).unwrap();
        let b = build_bupu(g);
        let spec = NormSpec::modulation(1.0, 1.0, 1.0).unwrap();
        assert_eq!(embedding_ratio(&gaussian(g), &spec, &spec, &b).unwrap(), 1.0);
        let z = SampledSignal::zeros(g, Domain::Space);
        assert!(embedding_ratio(&z, &spec, &spec, &b).is_err());
    }

    #[test]
    fn algebra_ratio_rules() {
        let g = Grid::new(1024, 20.0).unwrap();
        let b = build_bupu(g);
        let f = gaussian(g);
        let h = f.modulate(1.0).unwrap();
        let bad = NormSpec::modulation(2.0, 2.0, 0.0).unwrap();
        assert!(matches!(algebra_ratio(&f, &h, &bad, &b), Err(Error::NotAlgebra(_))));
        let spec = NormSpec::modulation(2.0, 1.0, 0.0).unwrap();
        let r = algebra_ratio(&f, &h, &spec, &b).unwrap();
        let r2 = algebra_ratio(&f.scale(C64::new(2.0, 0.0)), &h.scale(C64::new(0.5, 0.0)), &spec, &b).unwrap();
        assert_eq!(r, r2);
        assert!(algebra_ratio_mixed(&f, &h, &spec, &b).unwrap().is_finite());
    }
}
