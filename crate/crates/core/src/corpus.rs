//! The fixed 12-signal test corpus.
//!
//! Every entry is defined by a closed formula in `x`, so the same signal is
//! obtained on any grid that resolves it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::grid::{Domain, Grid, SampledSignal, C64};
use crate::windows::classic_bump;

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub signal: SampledSignal,
    /// Support is contained in a compact interval well inside the domain.
    pub compact: bool,
}

/// Number of terms in each random trigonometric sum.
const RANDOM_TERMS: usize = 16;

/// `(frequency, coefficient)` pairs of a random band-limited signal.
fn random_terms(seed: u64, stream: u64) -> Vec<(f64, C64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    (0..RANDOM_TERMS)
        .map(|_| {
            let xi = rng.gen_range(-3.0..3.0);
            let c = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            (xi, c)
        })
        .collect()
}

fn random_signal(grid: Grid, seed: u64, stream: u64) -> Result<SampledSignal> {
    let terms = random_terms(seed, stream);
    SampledSignal::from_fn(grid, Domain::Space, |x| {
        let env = (-x * x / 32.0).exp();
        terms.iter().map(|&(xi, c)| c * C64::from_polar(env, xi * x)).sum()
    })
}

fn gaussian(w: f64) -> impl Fn(f64) -> f64 {
    move |x| (-x * x / (2.0 * w * w)).exp()
}

fn modulated(w: f64, eta: f64) -> impl Fn(f64) -> C64 {
    move |x| C64::from_polar((-x * x / (2.0 * w * w)).exp(), eta * x)
}

/// Gaussians, modulated Gaussians, bumps, a chirp and two random band-limited sums.
pub fn corpus(grid: Grid, seed: u64) -> Result<Vec<CorpusEntry>> {
    let real = |f: &dyn Fn(f64) -> f64| SampledSignal::from_real_fn(grid, Domain::Space, f);
    let cplx = |f: &dyn Fn(f64) -> C64| SampledSignal::from_fn(grid, Domain::Space, f);
    let e = |name: &str, signal, compact| CorpusEntry { name: name.into(), signal, compact };
    Ok(vec![
        e("gaussian", real(&gaussian(1.0))?, false),
        e("gaussian-wide", real(&gaussian(2.0))?, false),
        e("gaussian-narrow", real(&gaussian(0.5))?, false),
        e("modulated-3", cplx(&modulated(1.0, 3.0))?, false),
        e("modulated-minus-5", cplx(&modulated(1.0, -5.0))?, false),
        e("modulated-1.5-wide", cplx(&modulated(2.0, 1.5))?, false),
        e("bump-1", real(&|x| classic_bump(x, 1.0))?, true),
        e("bump-2", real(&|x| classic_bump(x, 2.0))?, true),
        e("bump-4", real(&|x| classic_bump(x, 4.0))?, true),
        e("chirp", cplx(&|x| C64::from_polar((-x * x / 50.0).exp(), x * x / 4.0))?, false),
        e("random-a", random_signal(grid, seed, 1)?, false),
        e("random-b", random_signal(grid, seed, 2)?, false),
    ])
}

pub fn corpus_entry(grid: Grid, seed: u64, name: &str) -> Result<SampledSignal> {
    corpus(grid, seed)?
        .into_iter()
        .find(|e| e.name == name)
        .map(|e| e.signal)
        .ok_or_else(|| crate::Error::InvalidArgument(format!("no corpus signal named {name:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::edge_mass_fraction;

    #[test]
    fn corpus_is_localized_and_deterministic() {
        // The chirp's e^{-x²/50} envelope is the slowest to decay; 1e-6 is the leakage warning level.
        let g = Grid::new(4096, 40.0).unwrap();
        let a = corpus(g, 0).unwrap();
        assert_eq!(a.len(), 12);
        for e in &a {
            assert!(edge_mass_fraction(&e.signal) < 1e-6, "{}", e.name);
            assert!(!e.signal.is_zero());
        }
        let b = corpus(g, 0).unwrap();
        assert!(a.iter().zip(&b).all(|(x, y)| x.signal == y.signal));
        let c = corpus(g, 1).unwrap();
        assert_ne!(a[10].signal, c[10].signal);
    }

    #[test]
    fn refinement_samples_agree() {
        let g = Grid::new(1024, 30.0).unwrap();
        let coarse = corpus(g, 7).unwrap();
        let fine = corpus(g.refine(), 7).unwrap();
        for (c, f) in coarse.iter().zip(&fine) {
            for j in 0..g.n() {
                assert!((c.signal.samples()[j] - f.signal.samples()[2 * j]).norm() < 1e-15);
            }
        }
    }
}
