//! Smooth steps and compactly supported bumps shared by the constructions.

/// C^∞ step: 0 for `t ≤ 0`, 1 for `t ≥ 1`, `e^{-1/t}/(e^{-1/t}+e^{-1/(1-t)})` between.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        1.0 / (1.0 + (1.0 / t - 1.0 / (1.0 - t)).exp())
    }
}

/// Even bump equal to 1 on `|x| ≤ inner`, 0 on `|x| ≥ outer`, smooth in between.
pub fn transition_bump(x: f64, inner: f64, outer: f64) -> f64 {
    debug_assert!(outer > inner);
    1.0 - smooth_step((x.abs() - inner) / (outer - inner))
}

/// Bump with plateau radius `r` and support radius `2r`.
pub fn plateau_bump(x: f64, r: f64) -> f64 {
    transition_bump(x, r, 2.0 * r)
}

/// `exp(1 - 1/(1 - (x/a)²))` on `|x| < a`: peak 1, support `[-a, a]`.
pub fn classic_bump(x: f64, a: f64) -> f64 {
    let u = x / a;
    if u.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - u * u)).exp()
    }
}
