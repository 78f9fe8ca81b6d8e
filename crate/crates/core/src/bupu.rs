//! Smooth bounded uniform partition of unity `{φ(· - k)}` on the frequency line
//! and the block projections `φ(D - k) f = F^{-1}(φ(· - k) f̂)`.
//!
//! `φ` is evaluated analytically at `ξ - k`, so integer shifts need not land on
//! frequency samples and every grid is accepted.

use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::grid::{fourier_forward, inverse_raw, Domain, Grid, SampledSignal, C64};
use crate::windows::transition_bump;

pub const PLATEAU: f64 = 0.1;
pub const SUPPORT: f64 = 1.0;

/// Bump `b`: 1 on `[-1/10, 1/10]`, supported in `[-9/10, 9/10]`.
pub fn bupu_bump(xi: f64) -> f64 {
    transition_bump(xi, PLATEAU, 0.9)
}

/// `φ(ξ) = b(ξ) / Σ_k b(ξ - k)`; only `k ∈ {-1, 0, 1}` contribute on `|ξ| < 1`.
pub fn bupu_profile(xi: f64) -> f64 {
    if xi.abs() >= SUPPORT {
        return 0.0;
    }
    let b0 = bupu_bump(xi);
    if b0 == 0.0 {
        return 0.0;
    }
    b0 / (bupu_bump(xi - 1.0) + b0 + bupu_bump(xi + 1.0))
}

#[derive(Clone, Debug)]
pub struct Bupu {
    profile: SampledSignal,
}

pub fn build_bupu(grid: Grid) -> Bupu {
    let samples = grid.xis().into_iter().map(|xi| C64::new(bupu_profile(xi), 0.0)).collect();
    Bupu { profile: SampledSignal::from_parts(grid, Domain::Frequency, samples) }
}

impl Bupu {
    pub fn new(grid: Grid) -> Self {
        build_bupu(grid)
    }

    /// `φ` sampled on the frequency grid.
    pub fn profile(&self) -> &SampledSignal {
        &self.profile
    }

    pub fn grid(&self) -> &Grid {
        self.profile.grid()
    }

    /// Largest block index whose support meets the frequency grid.
    pub fn max_block(&self) -> i64 {
        self.grid().nyquist().floor() as i64 + 1
    }

    pub fn blocks(&self) -> RangeInclusive<i64> {
        -self.max_block()..=self.max_block()
    }

    /// First frequency index and the weights `φ(ξ_i - k)` over `|ξ_i - k| < 1`.
    pub fn weights(&self, k: i64) -> (usize, Vec<f64>) {
        let g = self.grid();
        let (dxi, nyq, n) = (g.dxi(), g.nyquist(), g.n() as i64);
        let lo = (((k as f64 - 1.0 + nyq) / dxi).ceil() as i64).clamp(0, n);
        let hi = (((k as f64 + 1.0 + nyq) / dxi).floor() as i64).clamp(-1, n - 1);
        if hi < lo {
            return (0, Vec::new());
        }
        let w = (lo..=hi).map(|i| bupu_profile(g.xi(i as usize) - k as f64)).collect();
        (lo as usize, w)
    }

    /// `Σ_k φ(ξ_i - k)` at every frequency sample.
    pub fn partition_sum(&self) -> Vec<f64> {
        let mut sum = vec![0.0; self.grid().n()];
        for k in self.blocks() {
            let (start, w) = self.weights(k);
            for (i, v) in w.into_iter().enumerate() {
                sum[start + i] += v;
            }
        }
        sum
    }

    pub(crate) fn check_grid(&self, f: &SampledSignal) -> Result<()> {
        if f.grid() != self.grid() {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }
}

/// `φ(D - k) f`.
pub fn frequency_block(f: &SampledSignal, k: i64, bupu: &Bupu) -> Result<SampledSignal> {
    bupu.check_grid(f)?;
    let d = BlockDecomposer::new(f, bupu)?;
    d.check_index(k)?;
    let samples = d.block(k).unwrap_or_else(|| vec![C64::new(0.0, 0.0); f.len()]);
    Ok(SampledSignal::from_parts(*f.grid(), Domain::Space, samples))
}

/// Holds `f̂` once so that many blocks can be extracted cheaply.
pub(crate) struct BlockDecomposer<'a> {
    bupu: &'a Bupu,
    spectrum: Vec<C64>,
}

impl<'a> BlockDecomposer<'a> {
    pub(crate) fn new(f: &SampledSignal, bupu: &'a Bupu) -> Result<Self> {
        bupu.check_grid(f)?;
        let spectrum = fourier_forward(f)?.into_samples();
        Ok(BlockDecomposer { bupu, spectrum })
    }

    pub(crate) fn check_index(&self, k: i64) -> Result<()> {
        let max = self.bupu.max_block();
        if k.abs() > max {
            return Err(Error::BlockOutOfRange { k, max });
        }
        Ok(())
    }

    /// Block `k` in space, or `None` when its spectral slice is exactly zero.
    pub(crate) fn block(&self, k: i64) -> Option<Vec<C64>> {
        let (start, w) = self.bupu.weights(k);
        let mut buf = vec![C64::new(0.0, 0.0); self.spectrum.len()];
        let mut any = false;
        for (i, v) in w.into_iter().enumerate() {
            let z = self.spectrum[start + i] * v;
            any |= z.re != 0.0 || z.im != 0.0;
            buf[start + i] = z;
        }
        if !any {
            return None;
        }
        inverse_raw(self.bupu.grid(), &mut buf);
        Some(buf)
    }
}
