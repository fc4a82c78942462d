//! Metric geometry of hyperbolic pairs of pants and one-holed tori.
//!
//! From the three boundary lengths of a pants we derive the perpendicular
//! lengths via right-angled hexagon trigonometry: with a_i = l_i/2,
//!
//!   cosh m_k = (cosh a_k + cosh a_i cosh a_j) / (sinh a_i sinh a_j),
//!
//! where m_k joins boundaries i and j ({i,j,k} = {1,2,3}), and the
//! boundary-to-self perpendicular n_i satisfies
//!
//!   cosh(n_i / 2) = sinh a_{i+1} sinh m_{i+2} = sinh a_{i+2} sinh m_{i+1}
//!
//! (two right-angled pentagons sharing the half of N_i cut off by the seam
//! M_i). These formulas are validated against the matrix oracle in the
//! orthospectrum module rather than trusted.
//!
//! The module also hosts the Mirzakhani gap functions D and R, the cusp gap,
//! the Basmajian projection width, the Luo-Tan summands f(P) and the torus
//! summand, and the lasso function in closed and integral form.

use crate::numerics::{
    integrate_with_singularities, rogers, KahanSum, NumericsError, QuadratureSpec,
};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum PantTorusError {
    #[error("invalid length: {0}")]
    InvalidLength(String),
    #[error("Rogers argument {arg} from {context} exits [0,1] by more than 1e-12")]
    RogersArgumentOutOfRange { arg: f64, context: &'static str },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Boundary lengths of a pants together with the derived perpendiculars.
///
/// `m[i]` is the length of the simple orthogeodesic joining boundaries i+1
/// and i+2 (cyclically), `n[i]` of the one from boundary i to itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PantsMetric {
    pub l: [f64; 3],
    pub m: [f64; 3],
    pub n: [f64; 3],
}

fn check_positive_length(l: f64, what: &str) -> Result<(), PantTorusError> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(PantTorusError::InvalidLength(format!(
            "{what} = {l} must be positive and finite"
        )));
    }
    Ok(())
}

/// ln(1 + e^t) without overflow.
fn softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

/// ln cosh t without overflow.
fn ln_cosh(t: f64) -> f64 {
    let a = t.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// ln sinh t for t > 0 without overflow.
fn ln_sinh(t: f64) -> f64 {
    t + (-(-2.0 * t).exp_m1()).ln() - std::f64::consts::LN_2
}

/// acosh(e^t) for t >= 0, stable when e^t would overflow.
fn acosh_exp(t: f64) -> f64 {
    if t > 350.0 {
        // acosh x = ln(2x) - 1/(4x^2) - ...; the correction is below 1e-300
        t + std::f64::consts::LN_2
    } else {
        t.exp().acosh()
    }
}

/// Perpendicular lengths m_i, n_i of the pants with boundary lengths
/// (l1, l2, l3), by hexagon trigonometry. Large boundary lengths (above 100)
/// are handled in log-space.
pub fn pants_perpendiculars(l1: f64, l2: f64, l3: f64) -> Result<PantsMetric, PantTorusError> {
    check_positive_length(l1, "l1")?;
    check_positive_length(l2, "l2")?;
    check_positive_length(l3, "l3")?;
    let l = [l1, l2, l3];
    let a = [l1 / 2.0, l2 / 2.0, l3 / 2.0];
    let big = l.iter().cloned().fold(0.0, f64::max) > 100.0;

    let mut m = [0.0; 3];
    for k in 0..3 {
        let i = (k + 1) % 3;
        let j = (k + 2) % 3;
        if big {
            // ln cosh m_k = ln(cosh a_k + cosh a_i cosh a_j) - ln sinh a_i - ln sinh a_j
            let t1 = ln_cosh(a[k]);
            let t2 = ln_cosh(a[i]) + ln_cosh(a[j]);
            let hi = t1.max(t2);
            let ln_num = hi + ((t1 - hi).exp() + (t2 - hi).exp()).ln();
            m[k] = acosh_exp(ln_num - ln_sinh(a[i]) - ln_sinh(a[j]));
        } else {
            let ch = (a[k].cosh() + a[i].cosh() * a[j].cosh()) / (a[i].sinh() * a[j].sinh());
            m[k] = ch.acosh();
        }
    }

    let mut n = [0.0; 3];
    for i in 0..3 {
        let j = (i + 1) % 3; // boundary i+1
        let k = (i + 2) % 3; // seam m_{i+2} joins boundaries i, i+1
        if big {
            n[i] = 2.0 * acosh_exp(ln_sinh(a[j]) + ln_sinh(m[k]));
        } else {
            n[i] = 2.0 * (a[j].sinh() * m[k].sinh()).acosh();
        }
    }

    Ok(PantsMetric { l, m, n })
}

/// Mirzakhani gap function for a pants with boundary x and interior cuffs
/// y, z:  D(x,y,z) = 2 ln((e^{x/2} + e^{(y+z)/2})/(e^{-x/2} + e^{(y+z)/2})).
///
/// Evaluated as 2(softplus((x-s)/2) - softplus(-(x+s)/2)) with s = y + z, so
/// it neither overflows nor loses the leading digits for s up to thousands.
pub fn gap_d(x: f64, y: f64, z: f64) -> Result<f64, PantTorusError> {
    check_positive_length(x, "x")?;
    if y < 0.0 || z < 0.0 || y.is_nan() || z.is_nan() {
        return Err(PantTorusError::InvalidLength(
            "gap_d: y and z must be >= 0".into(),
        ));
    }
    let s = y + z;
    Ok(2.0 * (softplus((x - s) / 2.0) - softplus(-(x + s) / 2.0)))
}

/// Mirzakhani gap function for a pants with boundaries x, y and interior
/// cuff z: R(x,y,z) = x - ln((cosh(y/2) + cosh((x+z)/2)) /
/// (cosh(y/2) + cosh((x-z)/2))).
pub fn gap_r(x: f64, y: f64, z: f64) -> Result<f64, PantTorusError> {
    check_positive_length(x, "x")?;
    if y < 0.0 || z < 0.0 || y.is_nan() || z.is_nan() {
        return Err(PantTorusError::InvalidLength(
            "gap_r: y and z must be >= 0".into(),
        ));
    }
    // cosh p + cosh q = 2 cosh((p+q)/2) cosh((p-q)/2)
    let ln_sum = |p: f64, q: f64| {
        std::f64::consts::LN_2 + ln_cosh((p + q) / 2.0) + ln_cosh((p - q) / 2.0)
    };
    let num = ln_sum(y / 2.0, (x + z) / 2.0);
    let den = ln_sum(y / 2.0, (x - z) / 2.0);
    Ok(x - (num - den))
}

/// Gap function at a cusp (both McShane sums degenerate to the same form):
/// 1 / (1 + e^{(y+z)/2}), in (0, 1/2].
pub fn cusp_gap(y: f64, z: f64) -> Result<f64, PantTorusError> {
    if y < 0.0 || z < 0.0 || y.is_nan() || z.is_nan() {
        return Err(PantTorusError::InvalidLength(
            "cusp_gap: y and z must be >= 0".into(),
        ));
    }
    Ok(1.0 / (1.0 + ((y + z) / 2.0).exp()))
}

/// Basmajian projection width 2 ln coth(l/2): the length of the orthogonal
/// projection of one boundary lift onto another at distance l, equivalently
/// V_1(r) with sinh r sinh l = 1.
pub fn basmajian_width(l: f64) -> Result<f64, PantTorusError> {
    check_positive_length(l, "l")?;
    // coth(l/2) = 1 + 2/(e^l - 1)
    Ok(2.0 * (2.0 / l.exp_m1()).ln_1p())
}

fn rogers_checked(arg: f64, context: &'static str) -> Result<f64, PantTorusError> {
    rogers(arg).map_err(|_| PantTorusError::RogersArgumentOutOfRange { arg, context })
}

/// The four-term Rogers bracket shared by the Luo-Tan summands:
/// 2R((1-x)/(1-xy)) - 2R((1-y)/(1-xy)) - c R(y) - R((1-y)^2 x / ((1-x)^2 y)),
/// where c = 1 for the pants function and c = 2 for the torus summand.
///
/// The last argument equals sech^2(n/2) for the self-perpendicular n with
/// cosh(n/2) = sinh(m) sinh(l/2) (pentagon relation), which is how the
/// bracket ties back to the measure computation f(P) = Vol T_1(P)
/// - 8 sum R(sech^2(m_i/2)) - 8 sum R(sech^2(n_i/2)) - 4 sum La(l_i, m_j);
/// the test suite checks that equality against the lasso function.
fn luo_tan_bracket(x: f64, y: f64, y_weight: f64, context: &'static str) -> Result<f64, PantTorusError> {
    let denom = 1.0 - x * y;
    let a1 = (1.0 - x) / denom;
    let a2 = (1.0 - y) / denom;
    let a3 = y;
    let a4 = (1.0 - y).powi(2) * x / ((1.0 - x).powi(2) * y);
    Ok(2.0 * rogers_checked(a1, context)? - 2.0 * rogers_checked(a2, context)?
        - y_weight * rogers_checked(a3, context)?
        - rogers_checked(a4, context)?)
}

/// Luo-Tan pants function f(P): the unit-tangent volume of the vectors whose
/// spun graph stays inside P, as a sum of 4 x 6 Rogers terms over ordered
/// pairs i != j with x_i = e^{-l_i}, y_j = tanh^2(m_j / 2).
///
/// The index set is read literally as ordered pairs (i, j), i != j — six
/// bracket terms. Every Rogers argument must lie in [0,1]; an excursion
/// beyond 1e-12 is an error, not a clamp.
pub fn luo_tan_f(p: &PantsMetric) -> Result<f64, PantTorusError> {
    let x: Vec<f64> = p.l.iter().map(|&l| (-l).exp()).collect();
    let y: Vec<f64> = p.m.iter().map(|&m| (m / 2.0).tanh().powi(2)).collect();
    let mut sum = KahanSum::new();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            sum.add(luo_tan_bracket(x[i], y[j], 1.0, "luo_tan_f")?);
        }
    }
    Ok(4.0 * sum.value())
}

/// Input for one term of the Luo-Tan torus function: an interior simple
/// closed geodesic of length `a` at distance `m_a` from the boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusSummandInput {
    pub a: f64,
    pub m_a: f64,
}

impl TorusSummandInput {
    pub fn new(a: f64, m_a: f64) -> Result<Self, PantTorusError> {
        check_positive_length(a, "a")?;
        check_positive_length(m_a, "m_a")?;
        Ok(Self { a, m_a })
    }

    /// m_A from cutting the torus along A: the boundary-to-cuff
    /// perpendicular of the resulting pants (a, a, boundary).
    pub fn from_cut_torus(a: f64, boundary_length: f64) -> Result<Self, PantTorusError> {
        let pants = pants_perpendiculars(a, a, boundary_length)?;
        // Both cuff copies of A are equidistant from the torus boundary, so
        // d(dT, A) survives the cut as the seam m_1 = m_2 joining the
        // boundary (index 3) to a copy of A.
        Ok(Self { a, m_a: pants.m[0] })
    }
}

/// One summand of the Luo-Tan torus function g(T).
pub fn luo_tan_g_summand(s: &TorusSummandInput) -> Result<f64, PantTorusError> {
    let x = (-s.a).exp();
    let y = (s.m_a / 2.0).tanh().powi(2);
    luo_tan_bracket(x, y, 2.0, "luo_tan_g_summand")
}

/// Closed form of the lasso function:
/// La(l, m) = 2 (R(y) - R((1-x)/(1-xy)) + R((1-y)/(1-xy))),
/// x = e^{-l}, y = tanh^2(m/2).
pub fn lasso_closed(l: f64, m: f64) -> Result<f64, PantTorusError> {
    check_positive_length(l, "l")?;
    check_positive_length(m, "m")?;
    let x = (-l).exp();
    let y = (m / 2.0).tanh().powi(2);
    let denom = 1.0 - x * y;
    Ok(2.0
        * (rogers_checked(y, "lasso_closed")? - rogers_checked((1.0 - x) / denom, "lasso_closed")?
            + rogers_checked((1.0 - y) / denom, "lasso_closed")?))
}

/// Integral form of the lasso function:
///
///   La(l, m) = \int_0^1 \int_c^d ln| y (x-c)(x-d) / (x (y-c)(y-d)) |
///              / (y-x)^2 dy dx,
///
/// with c = e^l and d = e^l coth^2(m/2). The integrand has integrable
/// logarithmic singularities at x = 0 and y in {c, d}, which sit at the
/// integration endpoints and are handled by adaptive subdivision.
pub fn lasso_integral(l: f64, m: f64, spec: &QuadratureSpec) -> Result<f64, PantTorusError> {
    check_positive_length(l, "l")?;
    check_positive_length(m, "m")?;
    let c = l.exp();
    let d = l.exp() * (m / 2.0).tanh().powi(-2);

    let inner_spec = QuadratureSpec::new(
        (spec.abs_tol / 10.0).max(1e-14),
        (spec.rel_tol / 10.0).max(1e-14),
        spec.max_subdivisions,
    )?;

    let outer = |x: f64| -> f64 {
        let inner = |y: f64| -> f64 {
            let arg = y * (x - c) * (x - d) / (x * (y - c) * (y - d));
            arg.abs().ln() / (y - x).powi(2)
        };
        match integrate_with_singularities(inner, c, d, &[], &inner_spec) {
            Ok(r) => r.value,
            Err(_) => f64::NAN,
        }
    };
    let result = integrate_with_singularities(outer, 0.0, 1.0, &[], spec)?
        .require_converged(spec)?;
    Ok(result.value)
}
