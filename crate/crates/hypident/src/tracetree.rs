//! Trace triples on the trivalent tree dual to the Farey tessellation.
//!
//! A vertex of the tree carries the traces (x, y, z) of three simple closed
//! curves meeting pairwise once; crossing an edge replaces one coordinate by
//! the Fricke edge relation z' = xy - z, which preserves the invariant
//! mu = x^2 + y^2 + z^2 - xyz = tau + 2 (tau the commutator trace). The
//! simple closed curve classes are the complementary regions of the tree:
//! three at the seed vertex plus exactly one fresh region per
//! non-backtracking edge crossing, which is how the enumeration counts each
//! class exactly once.
//!
//! Pruning uses the monotone-growth certificate: once both retained traces
//! exceed 2 + delta in modulus and the newest dominates them, every deeper
//! new trace grows by a factor of at least min(|kept|) - 1 > 1, so a subtree
//! whose newest trace already exceeds the cutoff is complete. The Bowditch
//! Q-conditions are semi-decided with the same certificate under an explicit
//! depth budget.

use crate::moebius::Matrix2;
use num_complex::Complex64;
use thiserror::Error;

/// Certificate margin: growth is only certified when both retained traces
/// have modulus at least 2 + CERT_DELTA, so the certified growth factor is
/// at least 1 + CERT_DELTA per step.
const CERT_DELTA: f64 = 0.05;

/// Hard caps on explored states and branch depth, to keep non-BQ inputs
/// from diverging.
const NODE_BUDGET: usize = 10_000_000;
const ENUM_DEPTH_BUDGET: u32 = 100_000;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum TraceTreeError {
    #[error("invalid seed: {0}")]
    InvalidSeed(String),
    #[error("enumeration budget exceeded after visiting {visited} states; the growth certificate never held (seed is not BQ-like)")]
    BudgetExceeded { visited: usize },
    #[error("trace {0} is elliptic or parabolic (real with |x| <= 2), no geodesic length")]
    EllipticOrParabolic(f64),
}

/// A triple of traces at a tree vertex with its cached Fricke invariant.
///
/// The invariant is carried, not recomputed, across flips so that drift of
/// the coordinates against it can be measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceTriple {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
    pub mu: Complex64,
}

fn fricke(x: Complex64, y: Complex64, z: Complex64) -> Complex64 {
    x * x + y * y + z * z - x * y * z
}

impl TraceTriple {
    pub fn new(x: Complex64, y: Complex64, z: Complex64) -> Result<Self, TraceTreeError> {
        for (v, name) in [(x, "x"), (y, "y"), (z, "z")] {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(TraceTreeError::InvalidSeed(format!(
                    "coordinate {name} = {v} is not finite"
                )));
            }
        }
        Ok(Self {
            x,
            y,
            z,
            mu: fricke(x, y, z),
        })
    }

    pub fn from_real(x: f64, y: f64, z: f64) -> Result<Self, TraceTreeError> {
        Self::new(
            Complex64::new(x, 0.0),
            Complex64::new(y, 0.0),
            Complex64::new(z, 0.0),
        )
    }

    /// Trace triple (tr X, tr Y, tr XY) of a pair of holonomy generators.
    pub fn from_generators(x: &Matrix2, y: &Matrix2) -> Result<Self, TraceTreeError> {
        Self::new(x.trace(), y.trace(), x.mul(y).trace())
    }

    /// Replace the indicated coordinate c by (product of the other two) - c.
    /// The cached invariant is carried over unchanged; in exact arithmetic
    /// the flip preserves it.
    pub fn flip(&self, slot: u8) -> TraceTriple {
        let (x, y, z) = (self.x, self.y, self.z);
        let (x, y, z) = match slot {
            1 => (y * z - x, y, z),
            2 => (x, x * z - y, z),
            3 => (x, y, x * y - z),
            _ => panic!("flip slot must be 1, 2 or 3, got {slot}"),
        };
        TraceTriple {
            x,
            y,
            z,
            mu: self.mu,
        }
    }

    /// |x^2 + y^2 + z^2 - xyz - mu|: the accumulated drift of the
    /// coordinates against the carried invariant.
    pub fn fricke_residual(&self) -> f64 {
        (fricke(self.x, self.y, self.z) - self.mu).norm()
    }

    /// Scale for relative drift: the magnitude of the terms entering the
    /// invariant.
    pub fn fricke_scale(&self) -> f64 {
        let (x, y, z) = (self.x.norm(), self.y.norm(), self.z.norm());
        1.0 + x * x + y * y + z * z + x * y * z
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.x.im.abs() <= tol && self.y.im.abs() <= tol && self.z.im.abs() <= tol
    }
}

/// One simple-closed-curve class: its trace and the tree distance from the
/// seed vertex at which it first appears.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimitiveTrace {
    pub value: Complex64,
    pub depth: u32,
}

/// Geodesic length from a trace: cosh^2(l/2) = x^2/4, so l = 2 acosh(|x|/2)
/// for real traces and twice the real part of the principal acosh(x/2) in
/// general. Real traces with |x| <= 2 have no geodesic representative.
pub fn length_from_trace(x: Complex64) -> Result<f64, TraceTreeError> {
    let real_tol = 1e-12 * (1.0 + x.norm());
    if x.im.abs() <= real_tol {
        let t = x.re.abs();
        if t <= 2.0 + 1e-14 {
            return Err(TraceTreeError::EllipticOrParabolic(x.re));
        }
        return Ok(2.0 * (t / 2.0).acosh());
    }
    Ok(2.0 * (x / 2.0).acosh().re)
}

/// e^{l(x)} for the complex translation length l(x) = 2 acosh(x/2); equals
/// w^2 for the root w = x/2 + sqrt(x^2/4 - 1) with |w| >= 1.
pub fn exp_complex_length(x: Complex64) -> Complex64 {
    let half = x / 2.0;
    let s = (half * half - Complex64::new(1.0, 0.0)).sqrt();
    let w = half + s;
    let w = if w.norm() >= 1.0 { w } else { half - s };
    w * w
}

struct Walker {
    cutoff: f64,
    visited: usize,
    out: Vec<PrimitiveTrace>,
}

#[derive(Debug, Clone, Copy)]
struct State {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    depth: u32,
}

fn certified(a: Complex64, b: Complex64, c: Complex64) -> bool {
    let (na, nb, nc) = (a.norm(), b.norm(), c.norm());
    na > 2.0 + CERT_DELTA && nb > 2.0 + CERT_DELTA && na <= nc && nb <= nc
}

impl Walker {
    fn walk(&mut self, root: State) -> Result<(), TraceTreeError> {
        let mut stack = vec![root];
        while let Some(s) = stack.pop() {
            self.visited += 1;
            if self.visited > NODE_BUDGET || s.depth > ENUM_DEPTH_BUDGET {
                return Err(TraceTreeError::BudgetExceeded {
                    visited: self.visited,
                });
            }
            let nc = s.c.norm();
            if !nc.is_finite() {
                // overflowed traces are far beyond any finite cutoff
                continue;
            }
            if nc <= self.cutoff {
                self.out.push(PrimitiveTrace {
                    value: s.c,
                    depth: s.depth,
                });
            }
            if certified(s.a, s.b, s.c) && nc > self.cutoff {
                continue; // every deeper trace strictly exceeds nc
            }
            stack.push(State {
                a: s.b,
                b: s.c,
                c: s.b * s.c - s.a,
                depth: s.depth + 1,
            });
            stack.push(State {
                a: s.a,
                b: s.c,
                c: s.a * s.c - s.b,
                depth: s.depth + 1,
            });
        }
        Ok(())
    }
}

/// All distinct primitive-class traces of modulus at most `trace_cutoff`,
/// each class exactly once, sorted by (modulus, depth).
///
/// The seed must be BQ-like so that growth certificates eventually hold in
/// every direction; otherwise the node budget is exhausted and reported.
pub fn enumerate_primitives(
    seed: &TraceTriple,
    trace_cutoff: f64,
) -> Result<Vec<PrimitiveTrace>, TraceTreeError> {
    if !(trace_cutoff > 0.0) {
        return Err(TraceTreeError::InvalidSeed(
            "trace cutoff must be positive".into(),
        ));
    }
    let mut w = Walker {
        cutoff: trace_cutoff,
        visited: 0,
        out: Vec::new(),
    };
    for v in [seed.x, seed.y, seed.z] {
        if v.norm() <= trace_cutoff {
            w.out.push(PrimitiveTrace { value: v, depth: 0 });
        }
    }
    // Three non-backtracking directions out of the seed vertex.
    let (x, y, z) = (seed.x, seed.y, seed.z);
    for (a, b, c) in [(y, z, y * z - x), (x, z, x * z - y), (x, y, x * y - z)] {
        w.walk(State { a, b, c, depth: 1 })?;
    }
    let mut out = w.out;
    out.sort_by(|p, q| {
        p.value
            .norm()
            .partial_cmp(&q.value.norm())
            .unwrap()
            .then(p.depth.cmp(&q.depth))
            .then(p.value.re.partial_cmp(&q.value.re).unwrap())
            .then(p.value.im.partial_cmp(&q.value.im).unwrap())
    });
    Ok(out)
}

/// Witness for a Bowditch Q-condition violation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BqWitness {
    pub value: Complex64,
    pub depth: u32,
    /// true if the witness trace lies in the real segment [-2, 2]
    /// (condition 1); false if it heads a non-escaping small-trace subtree
    /// (condition 2).
    pub real_segment: bool,
}

/// Outcome of the BQ semi-decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BqOutcome {
    Satisfied,
    Violated(BqWitness),
    Undetermined,
}

const SMALL_RUN_LIMIT: u32 = 40;

fn in_real_segment(v: Complex64) -> bool {
    v.im.abs() <= 1e-12 * (1.0 + v.re.abs()) && v.re.abs() <= 2.0 + 1e-12
}

/// Semi-decide the Bowditch Q-conditions for the representation with the
/// given seed triple.
///
/// Violated: some primitive trace lies in [-2, 2] (condition 1), or a
/// branch keeps modulus <= 2 for `SMALL_RUN_LIMIT` consecutive steps — a
/// non-escaping subtree witnessing condition 2. Satisfied: every branch
/// reaches the growth certificate within the depth budget. Undetermined:
/// some branch exhausts the budget uncertified.
pub fn bq_check(seed: &TraceTriple, depth_budget: u32) -> BqOutcome {
    for v in [seed.x, seed.y, seed.z] {
        if in_real_segment(v) {
            return BqOutcome::Violated(BqWitness {
                value: v,
                depth: 0,
                real_segment: true,
            });
        }
    }

    struct Frame {
        st: State,
        small_run: u32,
    }
    let mut undetermined = false;
    let mut visited = 0usize;
    let (x, y, z) = (seed.x, seed.y, seed.z);
    let mut stack: Vec<Frame> = [(y, z, y * z - x), (x, z, x * z - y), (x, y, x * y - z)]
        .into_iter()
        .map(|(a, b, c)| Frame {
            st: State { a, b, c, depth: 1 },
            small_run: 0,
        })
        .collect();

    while let Some(Frame { st, small_run }) = stack.pop() {
        visited += 1;
        if visited > NODE_BUDGET {
            return BqOutcome::Undetermined;
        }
        let c = st.c;
        if !c.re.is_finite() || !c.im.is_finite() {
            // numeric overflow: treat as escaped to infinity
            continue;
        }
        if in_real_segment(c) {
            return BqOutcome::Violated(BqWitness {
                value: c,
                depth: st.depth,
                real_segment: true,
            });
        }
        let run = if c.norm() <= 2.0 { small_run + 1 } else { 0 };
        if run >= SMALL_RUN_LIMIT {
            return BqOutcome::Violated(BqWitness {
                value: c,
                depth: st.depth,
                real_segment: false,
            });
        }
        if certified(st.a, st.b, st.c) {
            continue; // branch escapes monotonically
        }
        if st.depth >= depth_budget {
            undetermined = true;
            continue;
        }
        stack.push(Frame {
            st: State {
                a: st.b,
                b: st.c,
                c: st.b * st.c - st.a,
                depth: st.depth + 1,
            },
            small_run: run,
        });
        stack.push(Frame {
            st: State {
                a: st.a,
                b: st.c,
                c: st.a * st.c - st.b,
                depth: st.depth + 1,
            },
            small_run: run,
        });
    }
    if undetermined {
        BqOutcome::Undetermined
    } else {
        BqOutcome::Satisfied
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn markov_seed() -> TraceTriple {
        TraceTriple::from_real(3.0, 3.0, 3.0).unwrap()
    }

    #[test]
    fn flip_basic_and_involution() {
        let t = markov_seed();
        let f = t.flip(3);
        assert_eq!(f.z.re, 6.0);
        assert_eq!(f.x.re, 3.0);
        let back = f.flip(3);
        assert_eq!(back.z.re, 3.0);
        // mu stays zero on both vertices
        assert!(t.fricke_residual() < 1e-12);
        assert!(f.fricke_residual() < 1e-12);
    }

    #[test]
    fn mu_drift_over_random_walks() {
        let mut rng = StdRng::seed_from_u64(7);
        let mut worst: f64 = 0.0;
        for _ in 0..10_000 {
            let mut t = markov_seed();
            for _ in 0..12 {
                let slot = rng.gen_range(1..=3u8);
                t = t.flip(slot);
                if t.x.norm().max(t.y.norm()).max(t.z.norm()) > 1e60 {
                    break;
                }
            }
            worst = worst.max(t.fricke_residual() / t.fricke_scale());
        }
        assert!(worst <= 1e-9, "relative mu drift {worst}");
    }

    #[test]
    fn enumerate_markov_small_cutoffs() {
        let seed = markov_seed();
        let at3 = enumerate_primitives(&seed, 3.0).unwrap();
        assert_eq!(at3.len(), 3);
        assert!(at3.iter().all(|p| (p.value.re - 3.0).abs() < 1e-14));
        let at7 = enumerate_primitives(&seed, 7.0).unwrap();
        assert_eq!(at7.len(), 6);
        let sixes = at7.iter().filter(|p| (p.value.re - 6.0).abs() < 1e-14).count();
        assert_eq!(sixes, 3);
        // next layer: six curves of trace 15
        let at20 = enumerate_primitives(&seed, 20.0).unwrap();
        assert_eq!(at20.len(), 12);
        let fifteens = at20.iter().filter(|p| (p.value.re - 15.0).abs() < 1e-12).count();
        assert_eq!(fifteens, 6);
    }

    #[test]
    fn enumerate_matches_brute_force_tree_walk() {
        // unpruned walk to depth 12 is a complete oracle for cutoff 100
        let seed = markov_seed();
        let mut brute: Vec<f64> = Vec::new();
        for v in [seed.x, seed.y, seed.z] {
            if v.norm() <= 100.0 {
                brute.push(v.re);
            }
        }
        let (x, y, z) = (seed.x, seed.y, seed.z);
        let mut stack = vec![
            (y, z, y * z - x, 1u32),
            (x, z, x * z - y, 1),
            (x, y, x * y - z, 1),
        ];
        while let Some((a, b, c, d)) = stack.pop() {
            if c.norm() <= 100.0 {
                brute.push(c.re);
            }
            if d < 12 && c.norm() < 1e9 {
                stack.push((b, c, b * c - a, d + 1));
                stack.push((a, c, a * c - b, d + 1));
            }
        }
        brute.sort_by(|p, q| p.partial_cmp(q).unwrap());
        let mut pruned: Vec<f64> = enumerate_primitives(&seed, 100.0)
            .unwrap()
            .iter()
            .map(|p| p.value.re)
            .collect();
        pruned.sort_by(|p, q| p.partial_cmp(q).unwrap());
        assert_eq!(brute, pruned);
    }

    #[test]
    fn markov_positivity_and_growth() {
        let seed = markov_seed();
        let records = enumerate_primitives(&seed, 1e6).unwrap();
        assert!(records.iter().all(|p| p.value.re >= 3.0));
        let n_small = enumerate_primitives(&seed, 1e2).unwrap().len();
        let n_big = records.len();
        assert!(n_big > n_small, "{n_big} vs {n_small}");
    }

    #[test]
    fn enumeration_deterministic_under_sorting() {
        let seed = markov_seed();
        let a = enumerate_primitives(&seed, 1e4).unwrap();
        let b = enumerate_primitives(&seed, 1e4).unwrap();
        assert_eq!(a.len(), b.len());
        for (p, q) in a.iter().zip(b.iter()) {
            assert_eq!(p.value, q.value);
            assert_eq!(p.depth, q.depth);
        }
    }

    #[test]
    fn bq_markov_satisfied() {
        assert_eq!(bq_check(&markov_seed(), 64), BqOutcome::Satisfied);
    }

    #[test]
    fn bq_elliptic_violated_immediately() {
        let seed = TraceTriple::from_real(2.0, 2.0, 2.0).unwrap();
        match bq_check(&seed, 64) {
            BqOutcome::Violated(w) => {
                assert!(w.real_segment);
                assert_eq!(w.depth, 0);
                assert!((w.value.re - 2.0).abs() < 1e-14);
            }
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn bq_outcomes_stable_across_budgets() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..200 {
            let x = rng.gen_range(-4.0..4.0);
            let y = rng.gen_range(-4.0..4.0);
            let z = rng.gen_range(-4.0..4.0);
            let seed = TraceTriple::from_real(x, y, z).unwrap();
            let small = bq_check(&seed, 24);
            let large = bq_check(&seed, 48);
            match (small, large) {
                (BqOutcome::Satisfied, BqOutcome::Satisfied) => {}
                (BqOutcome::Violated(_), BqOutcome::Violated(_)) => {}
                (BqOutcome::Undetermined, _) => {}
                (s, l) => panic!("unstable outcome for ({x},{y},{z}): {s:?} then {l:?}"),
            }
        }
    }

    #[test]
    fn length_from_trace_values() {
        // inverse pair: x = 2 cosh(l/2)
        let l = 1.37f64;
        let x = Complex64::new(2.0 * (l / 2.0).cosh(), 0.0);
        assert!((length_from_trace(x).unwrap() - l).abs() < 1e-13);
        // x = 3 -> 2 acosh(1.5), and cosh^2(l/2) = 9/4
        let l3 = length_from_trace(Complex64::new(3.0, 0.0)).unwrap();
        assert!((l3 - 2.0 * 1.5f64.acosh()).abs() < 1e-15);
        assert!(((l3 / 2.0).cosh().powi(2) - 2.25).abs() < 1e-13);
        // boundary limit
        assert!(length_from_trace(Complex64::new(2.0 + 1e-9, 0.0)).unwrap() < 1e-4);
        assert!(length_from_trace(Complex64::new(1.99, 0.0)).is_err());
        assert!(length_from_trace(Complex64::new(-2.0, 0.0)).is_err());
    }

    #[test]
    fn exp_complex_length_consistent() {
        let x = Complex64::new(3.0, 0.0);
        let el = exp_complex_length(x);
        let l = length_from_trace(x).unwrap();
        assert!((el.re - l.exp()).abs() < 1e-12 * l.exp());
        assert!(el.im.abs() < 1e-12);
        // complex trace: |e^l| = e^{Re l}
        let xc = Complex64::new(2.5, 1.3);
        let lc = length_from_trace(xc).unwrap();
        assert!((exp_complex_length(xc).norm() - lc.exp()).abs() < 1e-10 * lc.exp());
    }

    #[test]
    fn budget_error_for_degenerate_seed() {
        // (0, 0, 0) flips forever inside the small ball; enumeration must
        // fail loudly instead of spinning silently.
        let seed = TraceTriple::from_real(0.0, 0.0, 0.0).unwrap();
        match enumerate_primitives(&seed, 10.0) {
            Err(TraceTreeError::BudgetExceeded { .. }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }
}
