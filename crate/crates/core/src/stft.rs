//! Short-time Fourier transform `V_φ f(x, ξ) = ∫ f(t) conj(φ(t - x)) e^{-itξ} dt`.
//!
//! Rows of fixed `ξ_k` come from the convolution form `e^{-ixξ}(f ∗ M_ξ φ*)(x)`.
//! On the grid, `M_ξ φ*` has a DFT that is a cyclic shift of one fixed
//! spectrum, so each row costs one inverse FFT.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{alt, check_compatible, fft_plan, inner_product, weighted_lp_norm, Domain, Exponent, Grid, SampledSignal, C64};

/// Largest grid the full STFT is computed on.
pub const MAX_STFT_N: usize = 4096;

/// Precomputed spectra for the rows of `V_φ f`.
pub struct StftEngine {
    grid: Grid,
    f_hat: Vec<C64>,
    window_hat: Vec<C64>,
}

impl StftEngine {
    pub fn new(f: &SampledSignal, window: &SampledSignal) -> Result<Self> {
        check_compatible(f, window)?;
        f.require(Domain::Space)?;
        let grid = *f.grid();
        let n = grid.n();
        if n > MAX_STFT_N {
            return Err(Error::CostGate(format!(
                "full STFT needs n <= {MAX_STFT_N} (got {n}); use the BUPU norms instead"
            )));
        }
        if window.is_zero() {
            return Err(Error::ZeroInput("STFT window"));
        }
        let fwd = fft_plan(n, false);
        let mut f_hat: Vec<C64> = (0..n).map(|j| f.samples()[(j + n / 2) % n]).collect();
        fwd.process(&mut f_hat);
        let phi = window.samples();
        let mut window_hat: Vec<C64> = (0..n).map(|m| phi[(n - m) % n].conj() * alt(m)).collect();
        fwd.process(&mut window_hat);
        Ok(StftEngine { grid, f_hat, window_hat })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `V_φ f(x_j, ξ_k)` for all `j`.
    pub fn row(&self, k: usize) -> Vec<C64> {
        let n = self.grid.n();
        let mut z: Vec<C64> = (0..n).map(|l| self.f_hat[(l + k) % n] * self.window_hat[l]).collect();
        fft_plan(n, true).process(&mut z);
        let c = self.grid.dx() / n as f64;
        for (j, v) in z.iter_mut().enumerate() {
            *v *= c * alt(j);
        }
        z
    }
}

/// `V_φ f` on the full grid; stored by `ξ`-rows.
#[derive(Clone, Debug)]
pub struct TimeFrequencyMatrix {
    grid: Grid,
    rows: Vec<C64>,
    window_norm: f64,
}

impl TimeFrequencyMatrix {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `V_φ f(x_j, ξ_k)`.
    pub fn value(&self, j: usize, k: usize) -> C64 {
        self.rows[k * self.grid.n() + j]
    }

    pub fn row(&self, k: usize) -> &[C64] {
        let n = self.grid.n();
        &self.rows[k * n..(k + 1) * n]
    }

    pub fn window_norm(&self) -> f64 {
        self.window_norm
    }

    /// `|V_φ f|` as CSV, one line per `x_j`, one column per `ξ_k`.
    pub fn magnitude_csv(&self) -> String {
        let n = self.grid.n();
        crate::io::matrix_to_csv(n, n, |j, k| self.value(j, k).norm())
    }
}

pub fn stft(f: &SampledSignal, window: &SampledSignal) -> Result<TimeFrequencyMatrix> {
    let engine = StftEngine::new(f, window)?;
    let n = engine.grid.n();
    let rows: Vec<Vec<C64>> = (0..n).into_par_iter().map(|k| engine.row(k)).collect();
    Ok(TimeFrequencyMatrix {
        grid: engine.grid,
        rows: rows.concat(),
        window_norm: weighted_lp_norm(window, Exponent::Finite(2.0), 0.0)?,
    })
}

/// One entry from the defining sum `dx Σ_a f(t_a) conj(φ(t_a - x_j)) e^{-i t_a ξ}`.
pub fn stft_direct(f: &SampledSignal, window: &SampledSignal, j: usize, xi: f64) -> Result<C64> {
    check_compatible(f, window)?;
    let g = f.grid();
    let n = g.n();
    let sum: C64 = (0..n)
        .map(|a| {
            let t = g.x(a);
            f.samples()[a] * window.samples()[(a + n + n / 2 - j) % n].conj() * C64::from_polar(1.0, -t * xi)
        })
        .sum();
    Ok(sum * g.dx())
}

/// `Σ_k Σ_j V_φ f conj(V_ψ g) dx dξ`, streamed row by row.
fn tf_inner(a: &StftEngine, b: &StftEngine) -> C64 {
    let n = a.grid.n();
    let rows: Vec<C64> = (0..n)
        .into_par_iter()
        .map(|k| a.row(k).iter().zip(b.row(k)).map(|(u, v)| u * v.conj()).sum())
        .collect();
    rows.into_iter().sum::<C64>() * (a.grid.dx() * a.grid.dxi())
}

/// Both sides of Moyal's identity: `⟨V_φ f, V_ψ g⟩` and `2π ⟨f, g⟩ ⟨ψ, φ⟩`.
pub fn moyal_sides(f: &SampledSignal, g: &SampledSignal, phi: &SampledSignal, psi: &SampledSignal) -> Result<(C64, C64)> {
    check_compatible(f, g)?;
    let lhs = tf_inner(&StftEngine::new(f, phi)?, &StftEngine::new(g, psi)?);
    let rhs = 2.0 * PI * inner_product(f, g)? * inner_product(psi, phi)?;
    Ok((lhs, rhs))
}

/// `|⟨V_φ f, V_ψ g⟩ - 2π⟨ψ,φ⟩⟨f,g⟩| / (‖f‖ ‖g‖ ‖φ‖ ‖ψ‖)`.
pub fn moyal_residual(f: &SampledSignal, g: &SampledSignal, phi: &SampledSignal, psi: &SampledSignal) -> Result<f64> {
    let two = Exponent::Finite(2.0);
    let scale = [f, g, phi, psi].iter().map(|h| weighted_lp_norm(h, two, 0.0)).product::<Result<f64>>()?;
    if scale == 0.0 {
        return Err(Error::ZeroInput("Moyal residual with a zero argument"));
    }
    let (lhs, rhs) = moyal_sides(f, g, phi, psi)?;
    Ok((lhs - rhs).norm() / scale)
}

/// `‖V_φ f‖_{L²(ℝ²)} / ‖f‖_{L²}`; Moyal predicts `√(2π) ‖φ‖_{L²}`.
pub fn stft_l2_identity_ratio(f: &SampledSignal, window: &SampledSignal) -> Result<f64> {
    let nf = weighted_lp_norm(f, Exponent::Finite(2.0), 0.0)?;
    if nf == 0.0 {
        return Err(Error::ZeroInput("STFT identity ratio of the zero signal"));
    }
    let engine = StftEngine::new(f, window)?;
    let n = engine.grid.n();
    let rows: Vec<f64> = (0..n).into_par_iter().map(|k| engine.row(k).iter().map(|z| z.norm_sqr()).sum()).collect();
    let energy = rows.into_iter().sum::<f64>() * engine.grid.dx() * engine.grid.dxi();
    Ok(energy.sqrt() / nf)
}

/// The Gaussian `e^{-t²/2}`, the default window.
pub fn gaussian_window(grid: Grid) -> SampledSignal {
    SampledSignal::from_parts(
        grid,
        Domain::Space,
        grid.xs().into_iter().map(|x| C64::new((-0.5 * x * x).exp(), 0.0)).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_oracle() {
        let g = Grid::new(512, 16.0).unwrap();
        let w = gaussian_window(g);
        let v = stft(&w, &w).unwrap();
        let mut worst: f64 = 0.0;
        for j in (0..512).step_by(7) {
            for k in (0..512).step_by(5) {
                let (x, xi) = (g.x(j), g.xi(k));
                let want = PI.sqrt() * C64::from_polar(1.0, -x * xi / 2.0) * (-(x * x + xi * xi) / 4.0).exp();
                worst = worst.max((v.value(j, k) - want).norm());
            }
        }
        assert!(worst < 1e-10, "{worst}");
    }

    #[test]
    fn convolution_form_matches_direct_sum() {
        let g = Grid::new(256, 12.0).unwrap();
        let f = SampledSignal::from_fn(g, Domain::Space, |x| C64::new((-x * x / 3.0).exp(), x * (-x * x).exp())).unwrap();
        let w = SampledSignal::from_real_fn(g, Domain::Space, |x| (-(x - 0.5).powi(2)).exp()).unwrap();
        let v = stft(&f, &w).unwrap();
        for (j, k) in [(0, 0), (17, 200), (128, 128), (255, 3), (90, 40)] {
            let d = stft_direct(&f, &w, j, g.xi(k)).unwrap();
            assert!((v.value(j, k) - d).norm() < 1e-12, "{j} {k}");
        }
    }

    #[test]
    fn zero_signal_and_zero_window() {
        let g = Grid::new(64, 8.0).unwrap();
        let z = SampledSignal::zeros(g, Domain::Space);
        let w = gaussian_window(g);
        let v = stft(&z, &w).unwrap();
        assert!((0..64).all(|k| v.row(k).iter().all(|c| c.norm() == 0.0)));
        assert!(matches!(stft(&w, &z), Err(Error::ZeroInput(_))));
    }

    #[test]
    fn cost_gate() {
        let g = Grid::new(8192, 8.0).unwrap();
        let w = gaussian_window(g);
        assert!(matches!(StftEngine::new(&w, &w), Err(Error::CostGate(_))));
    }

    #[test]
    fn modulation_and_translation_covariance() {
        let g = Grid::new(256, 16.0).unwrap();
        let n = 256;
        let f = SampledSignal::from_real_fn(g, Domain::Space, |x| (-(x - 1.0).powi(2) / 2.0).exp() * (1.0 + 0.3 * x)).unwrap();
        let w = gaussian_window(g);
        let v = stft(&f, &w).unwrap();
        let h = 7;
        let vm = stft(&f.modulate(h as f64 * g.dxi()).unwrap(), &w).unwrap();
        let u = 11;
        let vt = stft(&f.roll(u as i64), &w).unwrap();
        for j in 0..n {
            for k in 0..n {
                let a = vm.value(j, k).norm() - v.value(j, (k + n - h) % n).norm();
                let b = vt.value(j, k).norm() - v.value((j + n - u) % n, k).norm();
                assert!(a.abs() < 1e-8 && b.abs() < 1e-8);
            }
        }
    }

    #[test]
    fn moyal_on_gaussians_and_parity() {
        let g = Grid::new(512, 20.0).unwrap();
        let w = gaussian_window(g);
        assert!(moyal_residual(&w, &w, &w, &w).unwrap() < 1e-12);
        let odd = SampledSignal::from_real_fn(g, Domain::Space, |x| x * (-x * x / 2.0).exp()).unwrap();
        let (lhs, rhs) = moyal_sides(&w, &odd, &w, &w).unwrap();
        assert!(lhs.norm() < 1e-12 && rhs.norm() < 1e-12);
        let r1 = moyal_residual(&w, &odd, &w, &w).unwrap();
        let r2 = moyal_residual(&w.scale(C64::new(2.0, 0.0)), &odd, &w, &w).unwrap();
        assert!((r1 - r2).abs() < 1e-12);
    }

    #[test]
    fn identity_ratio_tracks_window_norm() {
        let g = Grid::new(512, 20.0).unwrap();
        let w = gaussian_window(g);
        let f = SampledSignal::from_real_fn(g, Domain::Space, |x| (-(x - 2.0).powi(2)).exp()).unwrap();
        let r = stft_l2_identity_ratio(&f, &w).unwrap();
        assert!((r - (2.0 * PI).sqrt() * PI.powf(0.25)).abs() < 1e-10 * r);
        let r3 = stft_l2_identity_ratio(&f, &w.scale(C64::new(3.0, 0.0))).unwrap();
        assert!((r3 - 3.0 * r).abs() < 1e-12 * r3);
    }
}
