//! Spherical Bessel functions of the first kind.

/// `j_l(x)` for `x >= 0`.
///
/// Below `x = l + 1` (and below 0.5 for every order) the ascending series is
/// summed; above it the closed forms of `j_0`, `j_1` are carried upward by the
/// three-term recurrence, which is stable while the order stays below `x`.
pub fn spherical_bessel_j(l: u32, x: f64) -> f64 {
    let x = x.abs();
    if x < (l as f64 + 1.0).max(0.5) {
        return series(l, x);
    }
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    if l == 0 {
        return j0;
    }
    let mut prev = j0;
    let mut cur = (j0 - c) / x;
    for n in 1..l {
        let next = (2 * n + 1) as f64 / x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn series(l: u32, x: f64) -> f64 {
    // x^l / (2l+1)!!
    let mut lead = 1.0;
    for k in 1..=l {
        lead *= x / (2 * k + 1) as f64;
    }
    let y = -0.5 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200u32 {
        term *= y / (k as f64 * (2 * l + 2 * k + 1) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

/// Coefficients of `sin x` and `cos x` in `j_l(x) = s_l(x) sin x + c_l(x) cos x`.
///
/// Both are polynomials in `1/x`; they are only well conditioned for `x`
/// comfortably above `l`.
pub(crate) fn trig_coefficients(l: u32, x: f64) -> (f64, f64) {
    let inv = 1.0 / x;
    let (mut s_prev, mut c_prev) = (inv, 0.0);
    if l == 0 {
        return (s_prev, c_prev);
    }
    let (mut s, mut c) = (inv * inv, -inv);
    for n in 1..l {
        let f = (2 * n + 1) as f64 * inv;
        let (s_next, c_next) = (f * s - s_prev, f * c - c_prev);
        s_prev = s;
        c_prev = c;
        s = s_next;
        c = c_next;
    }
    (s, c)
}
