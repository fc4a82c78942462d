//! Adaptive Gauss-Kronrod quadrature with singularity splitting.
//!
//! A 7-15 rule drives a global-error heap; intervals with the largest error
//! estimate are bisected until the requested tolerance is met or the
//! subdivision budget runs out. Integrable endpoint singularities (the
//! log-type singularities of the lasso and hitting-time integrands) are
//! handled by subdivision — the rule never evaluates the endpoints — and
//! interior singular points can be declared up front so the initial
//! partition splits there. Non-convergence is always reported through the
//! `converged` flag, never silently.

use super::{KahanSum, NumericsError};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

// QUADPACK 15-point Kronrod abscissae and weights, with the embedded
// 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Tolerances and budget for one adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self, NumericsError> {
        if !(abs_tol > 0.0) || !(rel_tol > 0.0) {
            return Err(NumericsError::Domain(
                "quadrature tolerances must be positive".into(),
            ));
        }
        if max_subdivisions < 1 {
            return Err(NumericsError::Domain(
                "max_subdivisions must be >= 1".into(),
            ));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        })
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 5000,
        }
    }
}

/// Result of an adaptive integration: estimate, error bound, and whether the
/// requested tolerance was met.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
    pub subdivisions: usize,
}

impl QuadResult {
    /// Promote the non-convergence flag to a hard error.
    pub fn require_converged(self, spec: &QuadratureSpec) -> Result<Self, NumericsError> {
        if self.converged {
            Ok(self)
        } else {
            Err(NumericsError::NonConvergence {
                error: self.error,
                tol: spec.abs_tol.max(spec.rel_tol * self.value.abs()),
                subdivisions: self.subdivisions,
            })
        }
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);

    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut res_abs = kronrod.abs();
    let mut fv = [0.0f64; 15];
    fv[7] = fc;

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = f1;
        fv[14 - j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            // odd Kronrod indices are the embedded Gauss nodes
            gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = kronrod * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }

    let value = kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();

    let mut err = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

#[derive(Debug)]
struct Interval {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
            .then_with(|| self.a.partial_cmp(&other.a).unwrap_or(Ordering::Equal))
    }
}

/// Adaptive integration of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult, NumericsError> {
    integrate_with_singularities(f, a, b, &[], spec)
}

/// Adaptive integration with declared interior singular points; the initial
/// partition splits there so each singularity sits at an interval endpoint.
pub fn integrate_with_singularities<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    singular_points: &[f64],
    spec: &QuadratureSpec,
) -> Result<QuadResult, NumericsError> {
    if a.is_nan() || b.is_nan() {
        return Err(NumericsError::Domain("integrate: NaN endpoint".into()));
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            converged: true,
            subdivisions: 0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };

    let mut cuts: Vec<f64> = singular_points
        .iter()
        .copied()
        .filter(|&p| p > lo && p < hi)
        .collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();

    let mut heap = BinaryHeap::new();
    let mut prev = lo;
    for &p in cuts.iter().chain(std::iter::once(&hi)) {
        let (v, e) = gk15(&f, prev, p);
        heap.push(Interval {
            a: prev,
            b: p,
            value: v,
            error: e,
        });
        prev = p;
    }

    let mut subdivisions = 0usize;
    loop {
        let (total, total_err) = heap_totals(&heap);
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err <= tol {
            return Ok(QuadResult {
                value: sign * total,
                error: total_err,
                converged: true,
                subdivisions,
            });
        }
        if subdivisions >= spec.max_subdivisions || !total_err.is_finite() && subdivisions > 64 {
            return Ok(QuadResult {
                value: sign * total,
                error: total_err,
                converged: false,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval at floating-point resolution; cannot split further
            let mut rest = heap.into_vec();
            rest.push(worst);
            let total: f64 = KahanSum::sum_iter(rest.iter().map(|i| i.value));
            let err: f64 = rest.iter().map(|i| i.error).sum();
            let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
            return Ok(QuadResult {
                value: sign * total,
                error: err,
                converged: err <= tol,
                subdivisions,
            });
        }
        let (v1, e1) = gk15(&f, worst.a, mid);
        let (v2, e2) = gk15(&f, mid, worst.b);
        heap.push(Interval {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Interval {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
        subdivisions += 1;
    }
}

fn heap_totals(heap: &BinaryHeap<Interval>) -> (f64, f64) {
    let mut value = KahanSum::new();
    let mut error = 0.0;
    for iv in heap.iter() {
        value.add(iv.value);
        error += iv.error;
    }
    (value.value(), error)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_is_exact() {
        let spec = QuadratureSpec::default();
        let r = integrate(|_| 1.0, 0.0, 1.0, &spec).unwrap();
        assert!(r.converged);
        assert!((r.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn log_singularity_at_endpoint() {
        // \int_0^1 -ln x dx = 1, singular at x = 0.
        let spec = QuadratureSpec::new(1e-12, 1e-12, 10_000).unwrap();
        let r = integrate(|x| -x.ln(), 0.0, 1.0, &spec).unwrap();
        assert!(r.converged, "error estimate {:.3e}", r.error);
        assert!((r.value - 1.0).abs() < 1e-11, "value {}", r.value);
    }

    #[test]
    fn declared_interior_singularity() {
        // \int_0^2 -ln|x-1| dx = 2, singular at the declared point x = 1.
        let spec = QuadratureSpec::new(1e-11, 1e-11, 20_000).unwrap();
        let r =
            integrate_with_singularities(|x| -(x - 1.0f64).abs().ln(), 0.0, 2.0, &[1.0], &spec)
                .unwrap();
        assert!(r.converged);
        assert!((r.value - 2.0).abs() < 1e-10);
    }

    #[test]
    fn basmajian_width_as_integral() {
        // \int_0^{log coth(l/2)} 2 dr at l = 1.
        let spec = QuadratureSpec::default();
        let upper = (1.0f64 / 2.0).tanh().recip().ln();
        let r = integrate(|_| 2.0, 0.0, upper, &spec).unwrap();
        assert!((r.value - 2.0 * upper).abs() < 1e-13);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let spec = QuadratureSpec::default();
        let r = integrate(|x| x, 1.0, 0.0, &spec).unwrap();
        assert!((r.value + 0.5).abs() < 1e-14);
    }

    #[test]
    fn non_convergence_is_flagged() {
        // 1/x is not integrable on (0,1]; the budget must run out with
        // converged = false rather than a silent wrong answer.
        let spec = QuadratureSpec::new(1e-10, 1e-10, 50).unwrap();
        let r = integrate(|x| 1.0 / x, 0.0, 1.0, &spec).unwrap();
        assert!(!r.converged);
        assert!(r.require_converged(&spec).is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::new(0.0, 1e-10, 10).is_err());
        assert!(QuadratureSpec::new(1e-10, -1.0, 10).is_err());
        assert!(QuadratureSpec::new(1e-10, 1e-10, 0).is_err());
    }

    #[test]
    fn smooth_oscillatory_reference() {
        let spec = QuadratureSpec::new(1e-12, 1e-12, 2000).unwrap();
        let r = integrate(|x: f64| (10.0 * x).sin(), 0.0, std::f64::consts::PI, &spec).unwrap();
        let exact = (1.0 - (10.0 * std::f64::consts::PI).cos()) / 10.0;
        assert!(r.converged);
        assert!((r.value - exact).abs() < 1e-12);
    }
}
