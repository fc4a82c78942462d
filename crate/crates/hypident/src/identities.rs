//! Identity evaluators: assemble terms from the enumeration engines into
//! verification reports with partial sums, residuals, and monotonicity
//! certificates.
//!
//! Conventions fixed here, once:
//!
//! * Once-punctured-torus sums run over distinct simple-closed-curve
//!   classes, each exactly once. The McShane term per class is
//!   1/(1 + e^l) = (1 - sqrt(1 - 4/x^2))/2, which sums to the target 1/2;
//!   the Hu-Tan-Zhang term is the same expression with the mu-correction
//!   factor, normalized identically so the two agree termwise at mu = 0.
//! * Orthospectrum sums run over oriented records. Each oriented record
//!   contributes the full projection width 2 ln coth(l/2) to the Basmajian
//!   identity and 4 R(sech^2(l/2)) to the Bridgeman identity; unoriented
//!   geodesics are counted twice through their two orientations. The ideal
//!   polygon identity is stated over unordered side pairs, hence the
//!   constant 8 there.
//! * Term lists are summed in deterministic order (magnitude descending,
//!   label ascending) with compensated accumulation, so reports are
//!   schedule-independent and bit-reproducible.

use crate::moebius::IdealPolygon;
use crate::numerics::{rogers, KahanSum, NumericsError};
use crate::orthospectrum::{pants_group, OrthoError, OrthoRecord};
use crate::panttorus::{basmajian_width, gap_d, PantTorusError};
use crate::tracetree::{
    bq_check, enumerate_primitives, exp_complex_length, length_from_trace, BqOutcome, BqWitness,
    TraceTreeError, TraceTriple,
};
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

const BQ_BUDGET: u32 = 64;

#[derive(Debug, Clone, Error)]
pub enum IdentityError {
    #[error("seed violates the Bowditch Q-conditions: witness trace {value} at depth {depth}", value = .0.value, depth = .0.depth)]
    BqViolated(BqWitness),
    #[error("Bowditch Q-conditions undetermined within the depth budget")]
    BqUndetermined,
    #[error("seed is not type-preserving: mu = {0} is not 0")]
    NotTypePreserving(Complex64),
    #[error("seed invariant mu = {mu} does not match tau + 2 = {expected}")]
    TauMismatch { mu: Complex64, expected: Complex64 },
    #[error("tau = {0} is excluded (tau = 2 is degenerate; tau = -2 is the cusp case handled by the McShane evaluator)")]
    ExcludedTau(Complex64),
    #[error("non-real trace {0} in a Fuchsian-only identity")]
    NonFuchsianTrace(Complex64),
    #[error("singular term: trace {x} has x^2 = mu")]
    SingularTerm { x: Complex64 },
    #[error(transparent)]
    TraceTree(#[from] TraceTreeError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    PantTorus(#[from] PantTorusError),
    #[error(transparent)]
    Ortho(#[from] OrthoError),
    #[error("moebius error: {0}")]
    Moebius(#[from] crate::moebius::MoebiusError),
}

/// One summand with its index descriptor.
#[derive(Debug, Clone, PartialEq)]
pub struct TermEntry {
    pub label: String,
    pub value: Complex64,
}

/// The universal verification output: target, partial sum, term count, and
/// a monotonicity certificate. The residual is recomputed on access.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub identity_name: String,
    pub target: Complex64,
    pub partial_sum: Complex64,
    pub n_terms: usize,
    pub cutoff: f64,
    /// all terms are real and nonnegative, so partial sums increase in the
    /// cutoff
    pub monotone_increasing: bool,
    /// compare the imaginary part modulo 2 pi (the TWZ identity holds mod
    /// 2 pi i)
    pub compare_mod_2pi_im: bool,
    pub terms: Vec<TermEntry>,
    pub warnings: Vec<String>,
}

impl IdentityReport {
    /// |target - partial_sum|, with the imaginary part reduced mod 2 pi
    /// when the identity is only defined up to that period.
    pub fn residual(&self) -> f64 {
        let mut delta = self.partial_sum - self.target;
        if self.compare_mod_2pi_im {
            let tau = 2.0 * PI;
            delta.im = delta.im.rem_euclid(tau);
            if delta.im > PI {
                delta.im -= tau;
            }
        }
        delta.norm()
    }

    /// For real monotone identities: the partial sum never exceeds the
    /// target (up to roundoff).
    pub fn bounded_below_target(&self) -> bool {
        self.partial_sum.im.abs() < 1e-12 && self.partial_sum.re <= self.target.re + 1e-12
    }
}

/// Deterministic assembly: sort by magnitude descending (label ascending on
/// ties), accumulate with compensated sums.
fn assemble(
    identity_name: &str,
    target: Complex64,
    cutoff: f64,
    mut terms: Vec<TermEntry>,
) -> IdentityReport {
    terms.sort_by(|a, b| {
        b.value
            .norm()
            .partial_cmp(&a.value.norm())
            .unwrap()
            .then_with(|| a.label.cmp(&b.label))
    });
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    for t in &terms {
        re.add(t.value.re);
        im.add(t.value.im);
    }
    let monotone = terms
        .iter()
        .all(|t| t.value.im.abs() <= 1e-13 && t.value.re >= -1e-15);
    IdentityReport {
        identity_name: identity_name.to_string(),
        target,
        partial_sum: Complex64::new(re.value(), im.value()),
        n_terms: terms.len(),
        cutoff,
        monotone_increasing: monotone,
        compare_mod_2pi_im: false,
        terms,
        warnings: Vec::new(),
    }
}

fn require_bq(seed: &TraceTriple) -> Result<(), IdentityError> {
    match bq_check(seed, BQ_BUDGET) {
        BqOutcome::Satisfied => Ok(()),
        BqOutcome::Violated(w) => Err(IdentityError::BqViolated(w)),
        BqOutcome::Undetermined => Err(IdentityError::BqUndetermined),
    }
}

fn require_type_preserving(seed: &TraceTriple) -> Result<(), IdentityError> {
    if seed.mu.norm() > 1e-9 * seed.fricke_scale() {
        return Err(IdentityError::NotTypePreserving(seed.mu));
    }
    Ok(())
}

fn real_trace(x: Complex64) -> Result<f64, IdentityError> {
    if x.im.abs() > 1e-9 * (1.0 + x.norm()) {
        return Err(IdentityError::NonFuchsianTrace(x));
    }
    Ok(x.re)
}

/// McShane term per simple closed curve: 1/(1 + e^l) with
/// cosh(l/2) = |x|/2. Equals (1 - sqrt(1 - 4/x^2))/2.
fn mcshane_term(x: f64) -> Result<f64, IdentityError> {
    let l = length_from_trace(Complex64::new(x, 0.0))?;
    Ok(1.0 / (1.0 + l.exp()))
}

/// McShane identity on the once-punctured torus (Bowditch form): the sum of
/// 1/(1 + e^{l(gamma)}) over all simple closed geodesics equals 1/2.
pub fn mcshane_torus(seed: &TraceTriple, trace_cutoff: f64) -> Result<IdentityReport, IdentityError> {
    require_bq(seed)?;
    require_type_preserving(seed)?;
    let prims = enumerate_primitives(seed, trace_cutoff)?;
    let mut terms = Vec::with_capacity(prims.len());
    for (k, p) in prims.iter().enumerate() {
        let x = real_trace(p.value)?;
        terms.push(TermEntry {
            label: format!("class{k};x={x:.12};d={}", p.depth),
            value: Complex64::new(mcshane_term(x)?, 0.0),
        });
    }
    Ok(assemble(
        "mcshane_torus",
        Complex64::new(0.5, 0.0),
        trace_cutoff,
        terms,
    ))
}

/// The Tan-Wong-Zhang h-function: h_tau(x) = log((e^nu + e^l)/(e^-nu + e^l))
/// with nu = acosh(-tau/2) and e^l the complex translation length
/// exponential.
fn twz_term(nu: Complex64, x: Complex64) -> Complex64 {
    let el = exp_complex_length(x);
    ((nu.exp() + el) / ((-nu).exp() + el)).ln()
}

/// Tan-Wong-Zhang identity for a tau-representation satisfying the
/// BQ-conditions: sum of h_tau over all classes equals nu = acosh(-tau/2),
/// mod 2 pi i.
pub fn twz(
    seed: &TraceTriple,
    tau: Complex64,
    trace_cutoff: f64,
) -> Result<IdentityReport, IdentityError> {
    if (tau - Complex64::new(2.0, 0.0)).norm() < 1e-9
        || (tau + Complex64::new(2.0, 0.0)).norm() < 1e-9
    {
        return Err(IdentityError::ExcludedTau(tau));
    }
    let expected = tau + Complex64::new(2.0, 0.0);
    if (seed.mu - expected).norm() > 1e-6 * (1.0 + expected.norm()) {
        return Err(IdentityError::TauMismatch {
            mu: seed.mu,
            expected,
        });
    }
    require_bq(seed)?;
    let nu = (-tau / 2.0).acosh();
    let prims = enumerate_primitives(seed, trace_cutoff)?;
    let terms: Vec<TermEntry> = prims
        .iter()
        .enumerate()
        .map(|(k, p)| TermEntry {
            label: format!("class{k};|x|={:.12};d={}", p.value.norm(), p.depth),
            value: twz_term(nu, p.value),
        })
        .collect();
    let mut report = assemble("twz", nu, trace_cutoff, terms);
    report.compare_mod_2pi_im = true;
    let im_gap = (report.partial_sum - nu).im.abs();
    if (im_gap - PI).abs() < 1e-3 {
        report.warnings.push(format!(
            "imaginary part of the defect is within 1e-3 of pi ({im_gap}); the mod-2-pi-i comparison is ambiguous here"
        ));
    }
    Ok(report)
}

/// Hu-Tan-Zhang term, normalized like the McShane term:
/// (1 - (3x^2 - 2 mu)/(3(x^2 - mu)) sqrt(1 - 4/x^2)) / 2.
fn htz_term(mu: Complex64, x: Complex64) -> Result<Complex64, IdentityError> {
    let x2 = x * x;
    if (x2 - mu).norm() < 1e-12 * (1.0 + x2.norm()) {
        return Err(IdentityError::SingularTerm { x });
    }
    let one = Complex64::new(1.0, 0.0);
    let factor = (3.0 * x2 - 2.0 * mu) / (3.0 * (x2 - mu));
    let root = (one - 4.0 / x2).sqrt();
    Ok((one - factor * root) / 2.0)
}

/// Hu-Tan-Zhang identity: the mu-corrected McShane sum equals 1/2 for any
/// BQ representation; at mu = 0 it reduces termwise to the McShane sum.
pub fn htz(seed: &TraceTriple, trace_cutoff: f64) -> Result<IdentityReport, IdentityError> {
    require_bq(seed)?;
    let prims = enumerate_primitives(seed, trace_cutoff)?;
    let mut terms = Vec::with_capacity(prims.len());
    for (k, p) in prims.iter().enumerate() {
        terms.push(TermEntry {
            label: format!("class{k};|x|={:.12};d={}", p.value.norm(), p.depth),
            value: htz_term(seed.mu, p.value)?,
        });
    }
    Ok(assemble(
        "htz",
        Complex64::new(0.5, 0.0),
        trace_cutoff,
        terms,
    ))
}

/// Luo-Tan identity for the once-punctured torus: the sum over simple
/// closed geodesics of
/// R(sech^2(l/2)) + 2 (R((1+e^-l)/2) - R((1-e^-l)/2)) equals pi^2/2.
pub fn luo_tan_torus(
    seed: &TraceTriple,
    trace_cutoff: f64,
) -> Result<IdentityReport, IdentityError> {
    require_bq(seed)?;
    require_type_preserving(seed)?;
    let prims = enumerate_primitives(seed, trace_cutoff)?;
    let mut terms = Vec::with_capacity(prims.len());
    for (k, p) in prims.iter().enumerate() {
        let x = real_trace(p.value)?;
        let l = length_from_trace(Complex64::new(x, 0.0))?;
        let sech2 = (l / 2.0).cosh().powi(-2);
        let em = (-l).exp();
        let v = rogers(sech2)?
            + 2.0 * (rogers((1.0 + em) / 2.0)? - rogers((1.0 - em) / 2.0)?);
        terms.push(TermEntry {
            label: format!("class{k};l={l:.12};d={}", p.depth),
            value: Complex64::new(v, 0.0),
        });
    }
    Ok(assemble(
        "luo_tan_torus",
        Complex64::new(PI * PI / 2.0, 0.0),
        trace_cutoff,
        terms,
    ))
}

/// mu invariant of a Fuchsian one-holed torus with boundary length l1:
/// tau = -2 cosh(l1/2), mu = tau + 2.
pub fn torus_mu_for_boundary(l1: f64) -> f64 {
    2.0 - 2.0 * (l1 / 2.0).cosh()
}

/// Symmetric Fuchsian trace triple (s, s, s) for the one-holed torus with
/// boundary length l1: the root s > 3 of 3 s^2 - s^3 = mu.
pub fn fuchsian_torus_seed(l1: f64) -> Result<TraceTriple, IdentityError> {
    if !(l1 > 0.0) || !l1.is_finite() {
        return Err(IdentityError::PantTorus(PantTorusError::InvalidLength(
            format!("boundary length {l1} must be positive"),
        )));
    }
    let mu = torus_mu_for_boundary(l1);
    // Newton on f(s) = s^3 - 3 s^2 + mu, root above 3.
    let mut s = 3.0 + (-mu).cbrt().max(0.1);
    for _ in 0..80 {
        let f = s * s * s - 3.0 * s * s + mu;
        let df = 3.0 * s * s - 6.0 * s;
        let step = f / df;
        s -= step;
        if step.abs() < 1e-15 * s {
            break;
        }
    }
    let seed = TraceTriple::from_real(s, s, s)?;
    debug_assert!((seed.mu.re - mu).abs() < 1e-9);
    Ok(seed)
}

/// Mirzakhani identity on the one-holed torus with boundary length L1: the
/// sum of D(L1, l, l) over simple closed geodesics equals L1.
pub fn mirzakhani_torus(
    l1: f64,
    seed: &TraceTriple,
    trace_cutoff: f64,
) -> Result<IdentityReport, IdentityError> {
    let expected = Complex64::new(torus_mu_for_boundary(l1), 0.0);
    if (seed.mu - expected).norm() > 1e-6 * (1.0 + expected.norm()) {
        return Err(IdentityError::TauMismatch {
            mu: seed.mu,
            expected,
        });
    }
    require_bq(seed)?;
    let prims = enumerate_primitives(seed, trace_cutoff)?;
    let mut terms = Vec::with_capacity(prims.len());
    for (k, p) in prims.iter().enumerate() {
        let x = real_trace(p.value)?;
        let l = length_from_trace(Complex64::new(x, 0.0))?;
        terms.push(TermEntry {
            label: format!("class{k};l={l:.12};d={}", p.depth),
            value: Complex64::new(gap_d(l1, l, l)?, 0.0),
        });
    }
    Ok(assemble(
        "mirzakhani_torus",
        Complex64::new(l1, 0.0),
        trace_cutoff,
        terms,
    ))
}

/// The two finite forms of the Bridgeman identity on an ideal n-gon.
#[derive(Debug, Clone)]
pub struct PolygonReport {
    /// sum of 8 R(sech^2(l_ij/2)) over unordered non-adjacent side pairs
    /// against 4 pi^2 (n-3)/3
    pub ortho_form: IdentityReport,
    /// sum of R([x_i, x_{i+1}; x_j, x_{j+1}]) against (n-3) pi^2 / 6
    pub cross_ratio_form: IdentityReport,
}

/// Exact finite Bridgeman identity for an ideal polygon, evaluated through
/// both the ortholength route and the cross-ratio route.
pub fn polygon_bridgeman(p: &IdealPolygon) -> Result<PolygonReport, IdentityError> {
    let n = p.n_vertices() as f64;
    let orth = p.ortholengths()?;
    let mut max_l: f64 = 0.0;
    let mut terms = Vec::with_capacity(orth.len());
    for &(i, j, l) in &orth {
        max_l = max_l.max(l);
        let sech2 = (l / 2.0).cosh().powi(-2);
        terms.push(TermEntry {
            label: format!("sides({i},{j});l={l:.12}"),
            value: Complex64::new(8.0 * rogers(sech2)?, 0.0),
        });
    }
    let ortho_form = assemble(
        "polygon_bridgeman",
        Complex64::new(4.0 * PI * PI * (n - 3.0) / 3.0, 0.0),
        max_l,
        terms,
    );

    let crs = p.side_cross_ratios()?;
    let mut terms = Vec::with_capacity(crs.len());
    for &(i, j, t) in &crs {
        terms.push(TermEntry {
            label: format!("sides({i},{j});cr={t:.12}"),
            value: Complex64::new(rogers(t)?, 0.0),
        });
    }
    let cross_ratio_form = assemble(
        "polygon_bridgeman_cross_ratio",
        Complex64::new((n - 3.0) * PI * PI / 6.0, 0.0),
        max_l,
        terms,
    );

    Ok(PolygonReport {
        ortho_form,
        cross_ratio_form,
    })
}

fn record_label(r: &OrthoRecord) -> String {
    format!("{}->{};{};l={:.12}", r.from_boundary, r.to_boundary, r.word, r.length)
}

/// Basmajian identity on a pants from an already-enumerated spectrum: each
/// oriented record contributes 2 ln coth(l/2); the sum tends to
/// l1 + l2 + l3 from below.
pub fn basmajian_pants_from_records(
    lengths: [f64; 3],
    records: &[OrthoRecord],
    cutoff: f64,
) -> Result<IdentityReport, IdentityError> {
    let mut terms = Vec::with_capacity(records.len());
    for r in records {
        terms.push(TermEntry {
            label: record_label(r),
            value: Complex64::new(basmajian_width(r.length)?, 0.0),
        });
    }
    Ok(assemble(
        "basmajian_pants",
        Complex64::new(lengths[0] + lengths[1] + lengths[2], 0.0),
        cutoff,
        terms,
    ))
}

/// Bridgeman identity on a pants from an already-enumerated spectrum: each
/// oriented record contributes 4 R(sech^2(l/2)); the sum tends to
/// Vol T_1(P) = 4 pi^2 from below.
pub fn bridgeman_pants_from_records(
    records: &[OrthoRecord],
    cutoff: f64,
) -> Result<IdentityReport, IdentityError> {
    let mut terms = Vec::with_capacity(records.len());
    for r in records {
        let sech2 = (r.length / 2.0).cosh().powi(-2);
        terms.push(TermEntry {
            label: record_label(r),
            value: Complex64::new(4.0 * rogers(sech2)?, 0.0),
        });
    }
    Ok(assemble(
        "bridgeman_pants",
        Complex64::new(4.0 * PI * PI, 0.0),
        cutoff,
        terms,
    ))
}

/// Basmajian identity on a pants: enumerates the spectrum and sums the
/// projection widths against l1 + l2 + l3.
pub fn basmajian_pants(
    l1: f64,
    l2: f64,
    l3: f64,
    cutoff: f64,
) -> Result<IdentityReport, IdentityError> {
    let g = pants_group(l1, l2, l3)?;
    let records = g.enumerate_orthogeodesics(cutoff)?;
    basmajian_pants_from_records([l1, l2, l3], &records, cutoff)
}

/// Bridgeman identity on a pants against 4 pi^2.
pub fn bridgeman_pants(
    l1: f64,
    l2: f64,
    l3: f64,
    cutoff: f64,
) -> Result<IdentityReport, IdentityError> {
    let g = pants_group(l1, l2, l3)?;
    let records = g.enumerate_orthogeodesics(cutoff)?;
    bridgeman_pants_from_records(&records, cutoff)
}
