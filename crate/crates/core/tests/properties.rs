use modspace::bupu::{build_bupu, frequency_block};
use modspace::experiments::counterexample_l2;
use modspace::grid::{convolve, fourier_forward, fourier_inverse, inner_product, weighted_lp_norm};
use modspace::measures::{convolve_measures, rudin_shapiro, Atom, DiscreteMeasure, Normalization};
use modspace::norms::{modulation_norm, norm, NormSpec};
use modspace::stft::{gaussian_window, stft};
use modspace::wiener_levy::{
    dilation_difference_norm, global_compose, DILATION_SWEEP, AnalyticFunction, LocalSetup,
};
use modspace::{Domain, Exponent, Grid, SampledSignal, C64};
use proptest::prelude::*;

fn grid_strategy() -> impl Strategy<Value = Grid> {
    (5u32..=9, 4.0f64..30.0).prop_map(|(e, l)| Grid::new(1 << e, l).unwrap())
}

fn samples(n: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| C64::new(a, b)), n)
}

/// Grid plus a spatial signal with spectrum confined to the inner 80% of the frequency grid.
fn band_limited() -> impl Strategy<Value = SampledSignal> {
    grid_strategy().prop_flat_map(|g| {
        samples(g.n()).prop_map(move |s| {
            let n = g.n();
            let lo = n / 10 + 1;
            let h: Vec<C64> = s.iter().enumerate().map(|(k, z)| if k >= lo && k < n - lo { *z } else { C64::new(0.0, 0.0) }).collect();
            fourier_inverse(&SampledSignal::new(g, Domain::Frequency, h).unwrap()).unwrap()
        })
    })
}

fn pair() -> impl Strategy<Value = (SampledSignal, SampledSignal)> {
    grid_strategy().prop_flat_map(|g| {
        (samples(g.n()), samples(g.n())).prop_map(move |(a, b)| {
            (SampledSignal::new(g, Domain::Space, a).unwrap(), SampledSignal::new(g, Domain::Space, b).unwrap())
        })
    })
}

/// Gaussian packet `A e^{-(x-c)²/(2w²)} e^{iηx}` on a fixed grid.
fn packet(g: Grid, c: f64, w: f64, eta: f64, amp: f64) -> SampledSignal {
    SampledSignal::from_fn(g, Domain::Space, |x| C64::from_polar(amp * (-(x - c) * (x - c) / (2.0 * w * w)).exp(), eta * x))
        .unwrap()
}

fn l2(f: &SampledSignal) -> f64 {
    weighted_lp_norm(f, Exponent::Finite(2.0), 0.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn fourier_round_trip(f in band_limited()) {
        let back = fourier_inverse(&fourier_forward(&f).unwrap()).unwrap();
        let err = back.sub(&f).unwrap().sup_norm();
        prop_assert!(err <= 1e-10 * f.sup_norm().max(1e-300));
    }

    #[test]
    fn parseval((f, g) in pair()) {
        let lhs = inner_product(&f, &g).unwrap();
        let rhs = inner_product(&fourier_forward(&f).unwrap(), &fourier_forward(&g).unwrap()).unwrap()
            / (2.0 * std::f64::consts::PI);
        prop_assert!((lhs - rhs).norm() <= 1e-8 * l2(&f) * l2(&g));
    }

    #[test]
    fn convolution_theorem((f, g) in pair()) {
        let lhs = fourier_forward(&convolve(&f, &g).unwrap()).unwrap();
        let (fh, gh) = (fourier_forward(&f).unwrap(), fourier_forward(&g).unwrap());
        let rhs = fh.mul(&gh).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().sup_norm() <= 1e-8 * fh.sup_norm() * gh.sup_norm());
    }

    #[test]
    fn lp_norm_axioms((f, g) in pair(), c in -5.0f64..5.0, p in prop_oneof![Just(1.0), Just(1.5), Just(2.0), Just(3.0), Just(f64::INFINITY)], s in 0.0f64..2.0) {
        let p = Exponent::new(p).unwrap();
        let nf = weighted_lp_norm(&f, p, s).unwrap();
        let scaled = weighted_lp_norm(&f.scale(C64::new(c, 0.0)), p, s).unwrap();
        prop_assert!((scaled - c.abs() * nf).abs() <= 1e-12 * (1.0 + c.abs() * nf));
        let sum = weighted_lp_norm(&f.add(&g).unwrap(), p, s).unwrap();
        prop_assert!(sum <= nf + weighted_lp_norm(&g, p, s).unwrap() + 1e-12 * (1.0 + sum));
    }

    #[test]
    fn bupu_reconstruction_and_band_limitation(f in band_limited()) {
        let b = build_bupu(*f.grid());
        let g = *f.grid();
        let mut sum = SampledSignal::zeros(g, Domain::Space);
        for k in b.blocks() {
            let blk = frequency_block(&f, k, &b).unwrap();
            let spec = fourier_forward(&blk).unwrap();
            for (i, z) in spec.samples().iter().enumerate() {
                if (g.xi(i) - k as f64).abs() >= 1.0 {
                    prop_assert!(z.norm() <= 1e-12 * (1.0 + fourier_forward(&f).unwrap().sup_norm()));
                }
            }
            sum = sum.add(&blk).unwrap();
        }
        prop_assert!(l2(&sum.sub(&f).unwrap()) <= 1e-8 * l2(&f).max(1e-300));
    }

    #[test]
    fn modulation_norm_monotone_and_nested(f in band_limited(), p in prop_oneof![Just(1.0), Just(2.0), Just(f64::INFINITY)], s1 in 0.0f64..2.0, s2 in 0.0f64..2.0) {
        let b = build_bupu(*f.grid());
        let p = Exponent::new(p).unwrap();
        let one = Exponent::Finite(1.0);
        let (lo, hi) = if s1 <= s2 { (s1, s2) } else { (s2, s1) };
        let n_lo = modulation_norm(&f, p, one, lo, &b).unwrap().value;
        let n_hi = modulation_norm(&f, p, one, hi, &b).unwrap().value;
        prop_assert!(n_lo <= n_hi * (1.0 + 1e-12));
        let q1 = modulation_norm(&f, p, one, 0.0, &b).unwrap().value;
        let q2 = modulation_norm(&f, p, Exponent::Finite(2.0), 0.0, &b).unwrap().value;
        let qi = modulation_norm(&f, p, Exponent::Infinity, 0.0, &b).unwrap().value;
        prop_assert!(q2 <= q1 * (1.0 + 1e-12) && qi <= q2 * (1.0 + 1e-12));
    }

    #[test]
    fn norm_axioms_all_specs((f, g) in pair(), c in -4.0f64..4.0) {
        let b = build_bupu(*f.grid());
        let specs = [
            NormSpec::modulation(1.0, 1.0, 0.0).unwrap(),
            NormSpec::modulation(2.0, 2.0, 0.5).unwrap(),
            NormSpec::modulation(1.5, f64::INFINITY, 1.0).unwrap(),
            NormSpec::fourier_beurling(0.5).unwrap(),
            NormSpec::fourier_segal(1.0).unwrap(),
            NormSpec::weighted_lebesgue(2.0, 1.0).unwrap(),
        ];
        for s in &specs {
            let nf = norm(&f, s, &b).unwrap();
            let ng = norm(&g, s, &b).unwrap();
            let scaled = norm(&f.scale(C64::new(c, 0.0)), s, &b).unwrap();
            prop_assert!((scaled - c.abs() * nf).abs() <= 1e-12 * (1.0 + c.abs() * nf), "{}", s.label());
            let sum = norm(&f.add(&g).unwrap(), s, &b).unwrap();
            prop_assert!(sum <= (nf + ng) * (1.0 + 1e-12), "{}", s.label());
        }
    }

    #[test]
    fn rudin_shapiro_identity_and_shape(m in 0u32..=12, spacing in 1u64..5) {
        let pair = rudin_shapiro(m, spacing, Normalization::Raw).unwrap();
        prop_assert_eq!(pair.mu.len(), 1usize << m);
        prop_assert_eq!(pair.nu.len(), 1usize << m);
        prop_assert!(pair.mu.atoms().iter().chain(pair.nu.atoms()).all(|a| a.weight.norm() == 1.0));
        let count = 4096 * spacing as usize;
        let (_, mu) = pair.mu.fourier_stieltjes_period(count).unwrap();
        let (_, nu) = pair.nu.fourier_stieltjes_period(count).unwrap();
        let target = 2f64.powi(m as i32 + 1);
        for (a, b) in mu.iter().zip(&nu) {
            prop_assert!((a.norm_sqr() + b.norm_sqr() - target).abs() <= 1e-12 * target);
            prop_assert!(a.norm() <= 2f64.powf((m as f64 + 1.0) / 2.0) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn lp_atoms_flatness(r in 1u32..=10, p in 1.0f64..2.0) {
        let pair = rudin_shapiro(r, 1, Normalization::LpAtoms(p)).unwrap();
        let sum: f64 = pair.nu.atoms().iter().map(|a| a.weight.norm().powf(p)).sum();
        prop_assert!((sum - 1.0).abs() < 1e-12);
        let (_, nu) = pair.nu.fourier_stieltjes_period(4096).unwrap();
        let bound = 2f64.powf(0.5 - r as f64 * (1.0 / p - 0.5));
        prop_assert!(nu.iter().all(|z| z.norm() <= bound * (1.0 + 1e-12)));
    }

    #[test]
    fn measure_convolution_commutes_and_associates(
        a in prop::collection::vec((-20i32..20, -3i32..=3), 1..6),
        b in prop::collection::vec((-20i32..20, -3i32..=3), 1..6),
        c in prop::collection::vec((-20i32..20, -3i32..=3), 1..6),
    ) {
        let m = |v: &Vec<(i32, i32)>| DiscreteMeasure::new(
            v.iter().map(|&(x, w)| Atom { location: x as f64, weight: C64::new(w as f64, 0.0) }).collect()
        ).unwrap();
        let (a, b, c) = (m(&a), m(&b), m(&c));
        prop_assert_eq!(convolve_measures(&a, &b).unwrap(), convolve_measures(&b, &a).unwrap());
        let left = convolve_measures(&convolve_measures(&a, &b).unwrap(), &c).unwrap();
        let right = convolve_measures(&a, &convolve_measures(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn stft_covariance(c in -3.0f64..3.0, w in 0.7f64..2.0, eta in -2.0f64..2.0, shift in -8i64..8, mshift in -6i64..6) {
        let g = Grid::new(256, 16.0).unwrap();
        let f = packet(g, c, w, eta, 1.0);
        let window = gaussian_window(g);
        let base = stft(&f, &window).unwrap();
        let scale = (0..g.n()).flat_map(|k| base.row(k).iter().map(|z| z.norm()).collect::<Vec<_>>()).fold(0.0, f64::max);
        let n = g.n() as i64;

        let modulated = stft(&f.modulate(mshift as f64 * g.dxi()).unwrap(), &window).unwrap();
        let translated = stft(&f.roll(shift), &window).unwrap();
        for k in 0..n {
            for j in 0..n {
                let km = k - mshift;
                if (0..n).contains(&km) {
                    let d = modulated.value(j as usize, k as usize).norm() - base.value(j as usize, km as usize).norm();
                    prop_assert!(d.abs() <= 1e-8 * scale);
                }
                let jt = (j - shift).rem_euclid(n);
                let d = translated.value(j as usize, k as usize).norm() - base.value(jt as usize, k as usize).norm();
                prop_assert!(d.abs() <= 1e-8 * scale);
            }
        }
    }

    #[test]
    fn composition_matches_pointwise(amp in 0.2f64..1.0, w in 0.8f64..2.0, which in 0usize..4) {
        let g = Grid::new(1024, 24.0).unwrap();
        let f = packet(g, 0.0, w, 0.0, amp);
        let function = [
            AnalyticFunction::Identity,
            AnalyticFunction::Square,
            AnalyticFunction::Saturating { a: 4.0 },
            AnalyticFunction::ExpMinusOne,
        ][which];
        let setup = LocalSetup::new(NormSpec::modulation(2.0, 1.0, 0.0).unwrap(), 1.0).unwrap();
        let gc = global_compose(&f, function, &setup, &build_bupu(g)).unwrap();
        let tail = gc.tail_bound.max(gc.local.report.tail_bound);
        prop_assert!(gc.sup_error <= tail + 1e-7, "{}: {} vs {}", function.name(), gc.sup_error, tail);
    }

    #[test]
    fn dilation_sweep_decays(w in 1.0f64..3.0, x0 in -2.0f64..2.0) {
        let g = Grid::new(4096, 32.0).unwrap();
        let f = packet(g, 0.0, w, 0.0, 1.0);
        let setup = LocalSetup::new(NormSpec::modulation(2.0, 1.0, 0.0).unwrap(), 1.0).unwrap();
        let bupu = build_bupu(*setup.tau().grid());
        let v: Vec<f64> = DILATION_SWEEP
            .iter()
            .map(|&l| dilation_difference_norm(&f, x0, setup.tau(), l, &setup.spec, &bupu).unwrap())
            .collect();
        prop_assert!(v[v.len() - 1] < v[0] / 100.0, "{:?}", v);
        let tail = &v[2..];
        prop_assert!(tail.windows(2).all(|p| p[1] <= 1.05 * p[0]), "{:?}", v);
    }
}

#[test]
fn l2_counterexample_is_reproducible() {
    let a = counterexample_l2(3, &[1e2, 1e4, 1e8]).unwrap();
    let b = counterexample_l2(3, &[1e2, 1e4, 1e8]).unwrap();
    assert_eq!(a, b);
    assert!(a.passed());
}

#[test]
fn serde_round_trips() {
    let g = Grid::new(512, 12.5).unwrap();
    let back: Grid = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
    assert_eq!(g, back);
    assert!(serde_json::from_str::<Grid>(r#"{"n":100,"L":1}"#).is_err());
    for p in ["1", "2.5", "inf"] {
        let e: Exponent = p.parse().unwrap();
        let back: Exponent = serde_json::from_str(&serde_json::to_string(&e).unwrap()).unwrap();
        assert_eq!(e, back);
    }
    let s = NormSpec::modulation(1.0, f64::INFINITY, 0.5).unwrap();
    let back: NormSpec = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
    assert_eq!(s, back);
}
