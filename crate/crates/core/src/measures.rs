//! Finite atomic measures `Σ w_j δ_{x_j}` and the Rudin–Shapiro pairs.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, SampledSignal, C64};

/// Largest atom-count product accepted by [`convolve_measures`].
pub const MAX_CONVOLUTION_PAIRS: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub location: f64,
    pub weight: C64,
}

/// Atoms sorted by location, pairwise distinct, no zero weights.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct DiscreteMeasure {
    atoms: Vec<Atom>,
}

impl DiscreteMeasure {
    /// Sorts and merges; equal locations are combined by exact comparison.
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            if !(a.location.is_finite() && a.weight.re.is_finite() && a.weight.im.is_finite()) {
                return Err(Error::InvalidArgument(format!("non-finite atom at {}", a.location)));
            }
        }
        Ok(Self::merged(atoms))
    }

    fn merged(mut atoms: Vec<Atom>) -> Self {
        atoms.sort_by(|a, b| a.location.total_cmp(&b.location));
        let mut out: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match out.last_mut() {
                // -0.0 and 0.0 compare equal here, which is the intended merge.
                Some(last) if last.location == a.location => last.weight += a.weight,
                _ => out.push(a),
            }
        }
        out.retain(|a| a.weight.re != 0.0 || a.weight.im != 0.0);
        for a in out.iter_mut() {
            if a.location == 0.0 {
                a.location = 0.0;
            }
        }
        DiscreteMeasure { atoms: out }
    }

    pub fn zero() -> Self {
        DiscreteMeasure::default()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_variation(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight.norm()).sum()
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::merged(self.atoms.iter().map(|a| Atom { location: a.location, weight: a.weight * c }).collect())
    }

    pub fn add(&self, other: &DiscreteMeasure) -> Self {
        Self::merged(self.atoms.iter().chain(&other.atoms).copied().collect())
    }

    pub fn sub(&self, other: &DiscreteMeasure) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// `μ ∗ δ_a`.
    pub fn translate(&self, a: f64) -> Self {
        Self::merged(self.atoms.iter().map(|t| Atom { location: t.location + a, weight: t.weight }).collect())
    }

    pub fn to_json(&self) -> String {
        let atoms: Vec<AtomJson> =
            self.atoms.iter().map(|a| AtomJson { x: a.location, re: a.weight.re, im: a.weight.im }).collect();
        serde_json::to_string(&MeasureJson { atoms }).expect("finite atoms serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: MeasureJson = serde_json::from_str(text)?;
        DiscreteMeasure::new(
            raw.atoms.into_iter().map(|a| Atom { location: a.x, weight: C64::new(a.re, a.im) }).collect(),
        )
    }

    /// `μ̂(ξ) = Σ w_j e^{-i x_j ξ}` at each requested frequency.
    pub fn fourier_stieltjes(&self, xis: &[f64]) -> Vec<C64> {
        xis.par_iter()
            .map(|&xi| self.atoms.iter().map(|a| a.weight * C64::from_polar(1.0, -a.location * xi)).sum())
            .collect()
    }

    /// `μ̂` over one period `ξ_s = 2π s / count`, `0 ≤ s < count`, for integer-located atoms.
    /// Phases are reduced exactly in integer arithmetic.
    pub fn fourier_stieltjes_period(&self, count: usize) -> Result<(Vec<f64>, Vec<C64>)> {
        if count == 0 {
            return Err(Error::InvalidArgument("need at least one sample".into()));
        }
        let mut residues = Vec::with_capacity(self.atoms.len());
        for a in &self.atoms {
            let x = a.location;
            if x.fract() != 0.0 || x.abs() >= 9.0e15 {
                return Err(Error::InvalidArgument(format!("atom at {x} is not an integer location")));
            }
            residues.push((x as i64).rem_euclid(count as i64) as u128);
        }
        let twiddle: Vec<C64> = (0..count).map(|r| C64::from_polar(1.0, -2.0 * PI * r as f64 / count as f64)).collect();
        let c = count as u128;
        let values = (0..count)
            .into_par_iter()
            .map(|s| {
                self.atoms
                    .iter()
                    .zip(&residues)
                    .map(|(a, &r)| a.weight * twiddle[((r * s as u128) % c) as usize])
                    .sum()
            })
            .collect();
        let xis = (0..count).map(|s| 2.0 * PI * s as f64 / count as f64).collect();
        Ok((xis, values))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomJson {
    x: f64,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureJson {
    atoms: Vec<AtomJson>,
}

pub fn dirac(a: f64) -> DiscreteMeasure {
    DiscreteMeasure { atoms: vec![Atom { location: if a == 0.0 { 0.0 } else { a }, weight: C64::new(1.0, 0.0) }] }
}

pub fn convolve_measures(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<DiscreteMeasure> {
    let pairs = mu.len().saturating_mul(nu.len());
    if pairs > MAX_CONVOLUTION_PAIRS {
        return Err(Error::CostGate(format!("{pairs} atom pairs exceed {MAX_CONVOLUTION_PAIRS}")));
    }
    let mut atoms = Vec::with_capacity(pairs);
    for a in &mu.atoms {
        for b in &nu.atoms {
            atoms.push(Atom { location: a.location + b.location, weight: a.weight * b.weight });
        }
    }
    DiscreteMeasure::new(atoms)
}

pub fn fourier_stieltjes(mu: &DiscreteMeasure, xis: &[f64]) -> Vec<C64> {
    mu.fourier_stieltjes(xis)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    Raw,
    TotalVariation,
    /// Weights `±2^{-m/p}`, so that `Σ |w|^p = 1`.
    LpAtoms(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RudinShapiroPair {
    pub mu: DiscreteMeasure,
    pub nu: DiscreteMeasure,
    pub m: u32,
    pub spacing: u64,
    pub normalization: Normalization,
}

impl RudinShapiroPair {
    /// Common magnitude of every weight.
    pub fn atom_weight(&self) -> f64 {
        atom_weight(self.m, self.normalization)
    }

    /// `|μ̂|² + |ν̂|²`, constant in `ξ`.
    pub fn identity_target(&self) -> f64 {
        self.atom_weight().powi(2) * 2f64.powi(self.m as i32 + 1)
    }

    /// `sup |μ̂|` and `sup |ν̂|` are bounded by `c 2^{(m+1)/2}` for atom weight `c`.
    pub fn flatness_bound(&self) -> f64 {
        self.atom_weight() * 2f64.powf((self.m as f64 + 1.0) / 2.0)
    }
}

fn atom_weight(m: u32, normalization: Normalization) -> f64 {
    match normalization {
        Normalization::Raw => 1.0,
        Normalization::TotalVariation => 2f64.powi(-(m as i32)),
        Normalization::LpAtoms(p) => 2f64.powf(-(m as f64) / p),
    }
}

/// Runs `μ_j = μ_{j-1} + ν_{j-1} ∗ δ_{N_j}`, `ν_j = μ_{j-1} - ν_{j-1} ∗ δ_{N_j}` with
/// `N_j = 2^{j-1} N`, from `μ_0 = ν_0 = δ_0`.
pub fn rudin_shapiro(m: u32, spacing: u64, normalization: Normalization) -> Result<RudinShapiroPair> {
    if spacing == 0 {
        return Err(Error::InvalidArgument("spacing N must be >= 1".into()));
    }
    if m > 24 {
        return Err(Error::CostGate(format!("depth {m} gives 2^{m} atoms")));
    }
    if let Normalization::LpAtoms(p) = normalization {
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::InvalidExponent(format!("atom exponent {p}")));
        }
    }
    if (spacing as f64) * 2f64.powi(m as i32) >= 9.0e15 {
        return Err(Error::InvalidArgument("support exceeds exact integer range".into()));
    }
    let mut mu = dirac(0.0);
    let mut nu = dirac(0.0);
    for j in 1..=m {
        let shift = (spacing << (j - 1)) as f64;
        let nu_shift = nu.translate(shift);
        let next_mu = mu.add(&nu_shift);
        nu = mu.sub(&nu_shift);
        mu = next_mu;
    }
    let c = C64::new(atom_weight(m, normalization), 0.0);
    Ok(RudinShapiroPair { mu: mu.scale(c), nu: nu.scale(c), m, spacing, normalization })
}

/// Smallest `N` making the translates `-x + [-K, K]`, `x ∈ supp μ`, pairwise disjoint.
pub fn disjointness_spacing(k_halfwidth: f64, _m: u32) -> Result<u64> {
    if !(k_halfwidth.is_finite() && k_halfwidth > 0.0) {
        return Err(Error::InvalidArgument(format!("half-width {k_halfwidth} must be positive")));
    }
    Ok((2.0 * k_halfwidth).floor() as u64 + 1)
}

/// `Σ_j w_j f(· - x_j)` by index shifts on `f`'s own axis.
///
/// Samples pushed past either end are dropped; if they carry more than `1e-12`
/// of the L¹ mass the call fails.
pub fn measure_signal_convolve(mu: &DiscreteMeasure, f: &SampledSignal) -> Result<SampledSignal> {
    let n = f.len() as i64;
    let d = f.spacing();
    let total: f64 = f.samples().iter().map(|z| z.norm()).sum();
    let mut out = vec![C64::new(0.0, 0.0); f.len()];
    for a in mu.atoms() {
        let steps = Grid::aligned_steps(a.location, d).ok_or(Error::NotGridAligned(a.location))?;
        let mut lost = 0.0;
        for (j, z) in f.samples().iter().enumerate() {
            let t = j as i64 + steps;
            if (0..n).contains(&t) {
                out[t as usize] += a.weight * z;
            } else {
                lost += z.norm();
            }
        }
        if lost > 1e-12 * total {
            return Err(Error::SupportOverflow(format!(
                "shift by {} moves {:.3e} of the mass off the grid",
                a.location,
                lost / total
            )));
        }
    }
    SampledSignal::new(*f.grid(), f.domain(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{weighted_lp_norm, Domain, Exponent};

    fn m(atoms: &[(f64, f64)]) -> DiscreteMeasure {
        DiscreteMeasure::new(atoms.iter().map(|&(x, w)| Atom { location: x, weight: C64::new(w, 0.0) }).collect())
            .unwrap()
    }

    #[test]
    fn dirac_basics() {
        assert_eq!(dirac(0.0).total_variation(), 1.0);
        let xi = [0.3, -2.0, 7.5];
        for (v, &x) in dirac(1.7).fourier_stieltjes(&xi).iter().zip(&xi) {
            assert!((v - C64::from_polar(1.0, -1.7 * x)).norm() < 1e-15);
        }
        assert_eq!(convolve_measures(&dirac(2.0), &dirac(-0.5)).unwrap(), dirac(1.5));
    }

    #[test]
    fn convolution_examples() {
        let a = m(&[(1.0, 1.0), (2.0, 1.0)]);
        assert_eq!(convolve_measures(&a, &dirac(3.0)).unwrap(), m(&[(4.0, 1.0), (5.0, 1.0)]));
        assert_eq!(convolve_measures(&a, &dirac(0.0)).unwrap(), a);
        let cancel = m(&[(0.0, 1.0), (0.0, -1.0)]);
        assert!(cancel.is_empty());
    }

    #[test]
    fn merging_sorts_and_combines() {
        let a = m(&[(3.0, 1.0), (-1.0, 2.0), (3.0, 0.5)]);
        assert_eq!(a.atoms().len(), 2);
        assert_eq!(a.atoms()[0].location, -1.0);
        assert_eq!(a.atoms()[1].weight, C64::new(1.5, 0.0));
    }

    #[test]
    fn json_round_trip() {
        let a = m(&[(0.5, 1.0), (-2.0, -0.25)]);
        assert_eq!(DiscreteMeasure::from_json(&a.to_json()).unwrap(), a);
        assert!(DiscreteMeasure::from_json(r#"{"atoms":[{"x":1}]}"#).is_err());
        assert!(DiscreteMeasure::from_json(r#"{"atoms":[{"x":1,"re":1,"im":0,"y":2}]}"#).is_err());
    }

    #[test]
    fn period_path_matches_direct_evaluation() {
        let rs = rudin_shapiro(5, 3, Normalization::Raw).unwrap();
        let (xis, v) = rs.mu.fourier_stieltjes_period(64).unwrap();
        let direct = rs.mu.fourier_stieltjes(&xis);
        for (a, b) in v.iter().zip(&direct) {
            assert!((a - b).norm() < 1e-11);
        }
        assert!(m(&[(0.5, 1.0)]).fourier_stieltjes_period(8).is_err());
    }

    #[test]
    fn small_depths() {
        let rs0 = rudin_shapiro(0, 1, Normalization::Raw).unwrap();
        assert_eq!(rs0.mu, dirac(0.0));
        assert_eq!(rs0.identity_target(), 2.0);
        let rs1 = rudin_shapiro(1, 5, Normalization::Raw).unwrap();
        assert_eq!(rs1.mu, m(&[(0.0, 1.0), (5.0, 1.0)]));
        assert_eq!(rs1.nu, m(&[(0.0, 1.0), (5.0, -1.0)]));
    }

    #[test]
    fn total_variation_normalization() {
        let rs = rudin_shapiro(10, 1, Normalization::TotalVariation).unwrap();
        assert!((rs.mu.total_variation() - 1.0).abs() < 1e-15);
        let (_, v) = rs.mu.fourier_stieltjes_period(4096).unwrap();
        let sup = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(sup <= 2f64.powf(-4.5) * (1.0 + 1e-12));
    }

    #[test]
    fn spacing_rule() {
        assert_eq!(disjointness_spacing(0.1, 4).unwrap(), 1);
        assert_eq!(disjointness_spacing(1e-9, 4).unwrap(), 1);
        assert_eq!(disjointness_spacing(3.0, 2).unwrap(), 7);
        assert!(disjointness_spacing(0.0, 1).is_err());
        // Brute-force interval check for K = 3, m = 2.
        let k = 3.0;
        let rs = rudin_shapiro(2, disjointness_spacing(k, 2).unwrap(), Normalization::Raw).unwrap();
        let pts: Vec<f64> = rs.mu.atoms().iter().map(|a| -a.location).collect();
        assert_eq!(pts.len(), 4);
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let (a, b) = (pts[i].min(pts[j]), pts[i].max(pts[j]));
                assert!(a + k < b - k);
            }
        }
        let rs6 = rudin_shapiro(2, 6, Normalization::Raw).unwrap();
        let pts6: Vec<f64> = rs6.mu.atoms().iter().map(|a| a.location).collect();
        assert!(pts6.windows(2).any(|w| w[1] - w[0] <= 2.0 * k));
    }

    #[test]
    fn signal_shifts() {
        let g = Grid::new(512, 16.0).unwrap();
        let f = SampledSignal::from_real_fn(g, Domain::Space, |x| crate::windows::classic_bump(x, 1.0)).unwrap();
        assert_eq!(measure_signal_convolve(&dirac(0.0), &f).unwrap(), f);
        let a = 4.0;
        let two = measure_signal_convolve(&m(&[(0.0, 1.0), (a, 1.0)]), &f).unwrap();
        let p = Exponent::Finite(1.5);
        let lhs = weighted_lp_norm(&two, p, 0.0).unwrap().powf(1.5);
        let rhs = 2.0 * weighted_lp_norm(&f, p, 0.0).unwrap().powf(1.5);
        assert!((lhs - rhs).abs() < 1e-12 * rhs);
        assert!(matches!(measure_signal_convolve(&dirac(0.01), &f), Err(Error::NotGridAligned(_))));
        assert!(matches!(measure_signal_convolve(&dirac(30.0), &f), Err(Error::SupportOverflow(_))));
    }
}
