//! Reproducibility checks over the closed forms, with optional deliberate
//! mutations to confirm the checks can fail.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::alexander_torus;
use crate::complex::{tensor, validate};
use crate::error::Result;
use crate::involutive::{verify_basis_identities, CoefficientRule};
use crate::knots::{
    cable2_adjusted, cable_genus, eval_with_middle_adjust, p_knot, staircase_from_alexander,
    sum_with_t2, tau_cable_formula, KnotExpr,
};
use crate::standard::{
    decompose, epsilon, seq_to_complex, simplify_basis, sum_gamma0, tau, top_alexander, ParamSeq,
};

/// A deliberate fault injected into the closed forms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mutation {
    #[default]
    None,
    /// Cable middle run one entry too long.
    CableMiddle,
    /// Basis coefficients β and 2β kept as integers instead of reduced mod 2.
    NoMod2,
}

impl Mutation {
    fn middle_adjust(self) -> i64 {
        i64::from(self == Mutation::CableMiddle)
    }

    fn rule(self) -> CoefficientRule {
        if self == Mutation::NoMod2 {
            CoefficientRule::NonzeroIsOne
        } else {
            CoefficientRule::Mod2
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CriterionResult {
    fn new(id: u8, title: &str) -> Self {
        CriterionResult {
            id,
            title: title.into(),
            cases: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn check_result<T>(&mut self, r: Result<T>, ctx: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.cases += 1;
                self.failures.push(format!("{}: {e}", ctx()));
                None
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub criteria: Vec<CriterionResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(CriterionResult::passed)
    }
}

fn seq(v: &[i64]) -> ParamSeq {
    ParamSeq::new(v.to_vec()).expect("nonzero literal")
}

fn torus_staircase(p: i64, q: i64) -> Result<ParamSeq> {
    staircase_from_alexander(&alexander_torus(p, q)?)
}

/// Staircase of T(2,q) for q > 0, its negation for q < 0.
pub fn t2_seq(q: i64) -> Result<ParamSeq> {
    let s = torus_staircase(2, q.abs())?;
    Ok(if q > 0 { s } else { s.negate() })
}

/// Every sequence (1, b_1, ..., 1, b_n, -b_n, -1, ..., -b_1, -1) with
/// n <= 3 and each b_i in {-1, -2, -3}.
pub fn unit_staircase_grid() -> Vec<ParamSeq> {
    let mut out = vec![ParamSeq::unknot()];
    let mut halves: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..3 {
        let mut next = Vec::new();
        for h in &halves {
            for b in [-1, -2, -3] {
                let mut h2 = h.clone();
                h2.extend([1, b]);
                next.push(h2);
            }
        }
        for h in &next {
            let mut full = h.clone();
            full.extend(h.iter().rev().map(|e| -e));
            out.push(seq(&full));
        }
        halves = next;
    }
    out
}

pub fn criterion_1() -> CriterionResult {
    let mut r = CriterionResult::new(1, "staircases from torus Alexander polynomials");
    for (p, q, want) in [
        (4, 5, seq(&[1, -3, 2, -2, 3, -1])),
        (2, 3, seq(&[1, -1])),
        (2, 7, seq(&[1, -1, 1, -1, 1, -1])),
    ] {
        if let Some(got) = r.check_result(torus_staircase(p, q), || format!("T({p},{q})")) {
            r.check(got == want, || {
                format!("T({p},{q}): got {got}, expected {want}")
            });
        }
    }
    r
}

pub fn criterion_2(m: Mutation) -> CriterionResult {
    let mut r = CriterionResult::new(2, "cable closed forms reproduce the reference sequences");
    let cases = [
        (seq(&[1, -1]), 1, -1, seq(&[1, -2, -1, 1, -1, 1, 2, -1])),
        (
            seq(&[1, -3, 2, -2, 3, -1]),
            6,
            27,
            seq(&[
                1, -7, 1, -1, 1, -5, 1, -1, 1, -1, 1, -3, 1, -1, 3, -1, 1, -1, 1, -1, 5, -1, 1, -1,
                7, -1,
            ]),
        ),
    ];
    for (s, g, q, want) in cases {
        let got = cable2_adjusted(&s, g, q, m.middle_adjust());
        if let Some(got) = r.check_result(got, || format!("cable2({s}, {g}, {q})")) {
            r.check(got == want, || {
                format!("cable2({s}, {g}, {q}) = {got}, expected {want}")
            });
        }
    }
    r
}

pub fn criterion_3() -> CriterionResult {
    let mut r = CriterionResult::new(3, "sum with T(2,q) closed form equals the tensor pipeline");
    for s in unit_staircase_grid() {
        for q in [3, 5, 7] {
            for sign in [1, -1] {
                let ctx = || format!("{s} # T(2,{})", sign * q);
                let Some(closed) = r.check_result(sum_with_t2(&s, q, sign), ctx) else {
                    continue;
                };
                let piped = t2_seq(sign * q).and_then(|t| sum_gamma0(&s, &t));
                let Some(piped) = r.check_result(piped, ctx) else {
                    continue;
                };
                r.check(closed == piped.seq, || {
                    format!("{}: closed form {closed}, pipeline {}", ctx(), piped.seq)
                });
            }
        }
    }
    r
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Band {
    Above,
    Below,
    Negative,
}

fn band(g: i64, q: i64) -> Band {
    if q < 0 {
        Band::Negative
    } else if q > 4 * g {
        Band::Above
    } else {
        Band::Below
    }
}

/// Companions and cable parameters used for the regime checks.
pub fn regime_cases() -> Vec<(KnotExpr, Vec<i64>)> {
    vec![
        (
            KnotExpr::Torus { p: 2, q: 3 },
            vec![5, 7, 9, 1, 3, -1, -3, -5],
        ),
        (
            KnotExpr::Torus { p: 3, q: 4 },
            vec![13, 15, 3, 5, 7, -1, -3],
        ),
    ]
}

pub fn criterion_4(m: Mutation) -> CriterionResult {
    let mut r = CriterionResult::new(4, "regimes for cable sums and the P(K,q1,q2) family");
    let adj = m.middle_adjust();
    for (k, qs) in regime_cases() {
        let Some(g) = k.genus() else { continue };
        let Some(tau_k) = r.check_result(eval_with_middle_adjust(&k, adj), || k.to_string()) else {
            continue;
        };
        let tau_k = tau(&tau_k.gamma0);
        let gamma = |q1: i64, q2: i64| -> Result<ParamSeq> {
            let e = k.clone().cable2(q1)?.sum(KnotExpr::torus(2, q2)?);
            Ok(eval_with_middle_adjust(&e, adj)?.gamma0)
        };
        for &q1 in &qs {
            for &q2 in &qs {
                if q1 == q2 {
                    continue;
                }
                let same = band(g, q1) == band(g, q2);
                let ctx = || format!("K={k}, q1={q1}, q2={q2}");
                let lhs = r.check_result(gamma(q1, q2), ctx);
                let rhs = r.check_result(gamma(q2, q1), ctx);
                if let (Some(a), Some(b)) = (lhs, rhs) {
                    r.check((a == b) == same, || {
                        format!(
                            "{}: {a} vs {b}, expected {}",
                            ctx(),
                            if same { "equal" } else { "different" }
                        )
                    });
                }
                let pk = p_knot(&k, q1, q2).and_then(|e| eval_with_middle_adjust(&e, adj));
                let Some(pk) = r.check_result(pk, ctx) else {
                    continue;
                };
                r.check(pk.gamma0.is_empty() == same, || {
                    format!("{}: gamma0(P) = {}", ctx(), pk.gamma0)
                });
                let formula = tau_cable_formula(tau_k, 1, 2, q1)
                    .and_then(|a| Ok(a - tau_cable_formula(tau_k, 1, 2, q2)?))
                    .and_then(|a| Ok(a + tau_cable_formula(0, 0, 2, q2)?))
                    .and_then(|a| Ok(a - tau_cable_formula(0, 0, 2, q1)?));
                let Some(formula) = r.check_result(formula, ctx) else {
                    continue;
                };
                let t = tau(&pk.gamma0);
                r.check(t == formula, || {
                    format!("{}: tau {t}, formula {formula}", ctx())
                });
                if q1 > 0 && q2 < 0 {
                    r.check(t == 1, || format!("{}: tau {t}, expected 1", ctx()));
                }
            }
        }
    }
    r
}

pub fn criterion_5(m: Mutation) -> CriterionResult {
    let mut r = CriterionResult::new(5, "cable genus and tau agree with the closed forms");
    for (p, q) in [(2, 3), (2, 5), (3, 4), (4, 5)] {
        let Some(s) = r.check_result(torus_staircase(p, q), || format!("T({p},{q})")) else {
            continue;
        };
        let g = top_alexander(&s);
        let tk = tau(&s);
        let bound = 4 * g + 5;
        for c in (-bound..=bound).filter(|c| c % 2 != 0) {
            let ctx = || format!("C2({c}; T({p},{q}))");
            let Some(cab) = r.check_result(cable2_adjusted(&s, g, c, m.middle_adjust()), ctx)
            else {
                continue;
            };
            if let Some(genus) = r.check_result(cable_genus(g, 2, c), ctx) {
                let top = top_alexander(&cab);
                r.check(top == genus, || {
                    format!("{}: topA {top}, genus {genus}", ctx())
                });
            }
            if let Some(want) = r.check_result(tau_cable_formula(tk, 1, 2, c), ctx) {
                let got = tau(&cab);
                r.check(got == want, || {
                    format!("{}: tau {got}, formula {want}", ctx())
                });
            }
        }
    }
    r
}

pub fn criterion_6(m: Mutation) -> CriterionResult {
    let mut r = CriterionResult::new(6, "involutive basis identities");
    for s in unit_staircase_grid() {
        for q in [3, 5, 7] {
            let ctx = || format!("{s} # T(2,{q})");
            let Some(rep) = r.check_result(verify_basis_identities(&s, q, m.rule()), ctx) else {
                continue;
            };
            for line in &rep.lines {
                r.check(line.ok, || {
                    format!("{}: {} ({})", ctx(), line.name, line.detail)
                });
            }
        }
    }
    r
}

/// A random sequence satisfying the knot-like invariants.
pub fn random_valid_seq<R: Rng>(rng: &mut R, max_half: usize, max_entry: i64) -> ParamSeq {
    let half_len = rng.gen_range(0..=max_half);
    let half: Vec<i64> = (0..half_len)
        .map(|_| {
            let mag = rng.gen_range(1..=max_entry);
            if rng.gen_bool(0.5) {
                mag
            } else {
                -mag
            }
        })
        .collect();
    let mut full = half.clone();
    full.extend(half.iter().rev().map(|e| -e));
    seq(&full)
}

fn random_lspace<R: Rng>(rng: &mut R, depth: u32) -> KnotExpr {
    let leaves = [(2, 3), (2, 5), (3, 4), (2, 7), (3, 5)];
    match rng.gen_range(0..if depth == 0 { 2 } else { 3 }) {
        0 => KnotExpr::Unknot,
        1 => {
            let &(p, q) = leaves.choose(rng).expect("nonempty");
            KnotExpr::Torus { p, q }
        }
        _ => {
            let inner = random_lspace(rng, depth - 1);
            let g = inner.genus().expect("fibered");
            let q = 4 * g - 1 + 2 * rng.gen_range(0..3);
            KnotExpr::Cable2 {
                q,
                companion: Box::new(inner),
            }
        }
    }
}

/// A random expression that `eval` accepts.
pub fn random_expr<R: Rng>(rng: &mut R, depth: u32) -> KnotExpr {
    let pick = rng.gen_range(0..if depth == 0 { 2 } else { 5 });
    match pick {
        0 => random_lspace(rng, depth.min(1)),
        1 => {
            let &(p, q) = [(2, -3), (2, -5), (3, -4)].choose(rng).expect("nonempty");
            KnotExpr::Torus { p, q }
        }
        2 => random_expr(rng, depth - 1).mirror(),
        3 => random_expr(rng, depth - 1).sum(random_expr(rng, depth - 1)),
        _ => {
            let inner = random_lspace(rng, 0);
            let g = inner.genus().expect("fibered");
            let q = 2 * rng.gen_range(-3..=2 * g + 2) + 1;
            KnotExpr::Cable2 {
                q,
                companion: Box::new(inner),
            }
        }
    }
}

/// Deterministic randomized sweep over the invariants of criterion 7.
pub fn property_sweep(cases: usize, seed: u64) -> CriterionResult {
    let mut r = CriterionResult::new(7, "randomized invariants");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cases {
        let s = random_valid_seq(&mut rng, 10, 5);
        check_sequence(&mut r, &s);
        let e = random_expr(&mut rng, 2);
        check_expression(&mut r, &e);
    }
    r
}

fn check_sequence(r: &mut CriterionResult, s: &ParamSeq) {
    let Some(c) = r.check_result(seq_to_complex(s), || s.to_string()) else {
        return;
    };
    r.check(validate(&c).is_ok(), || {
        format!("{s}: standard complex invalid")
    });
    let back = simplify_basis(&c).and_then(|x| decompose(&x));
    if let Some(back) = r.check_result(back, || s.to_string()) {
        r.check(back.seq == *s && back.closed_components == 0, || {
            format!("{s}: round trip gave {}", back.seq)
        });
    }
    r.check(tau(s).abs() <= top_alexander(s), || {
        format!("{s}: |tau| > topA")
    });
    r.check(tau(&s.negate()) == -tau(s), || format!("{s}: tau of dual"));
    r.check(epsilon(&s.negate()) == -epsilon(s), || {
        format!("{s}: epsilon of dual")
    });
}

fn check_expression(r: &mut CriterionResult, e: &KnotExpr) {
    let Some(ev) = r.check_result(eval_with_middle_adjust(e, 0), || e.to_string()) else {
        return;
    };
    let g = &ev.gamma0;
    r.check(g.check().is_ok(), || {
        format!("{e}: gamma0 {g} not symmetric")
    });
    r.check(tau(g).abs() <= top_alexander(g), || {
        format!("{e}: |tau| > topA for {g}")
    });
    if let Some(full) = &ev.full {
        r.check(validate(full).is_ok(), || {
            format!("{e}: full complex invalid")
        });
    }
    let both = e.clone().sum(e.clone().mirror());
    if let Some(z) = r.check_result(eval_with_middle_adjust(&both, 0), || both.to_string()) {
        r.check(z.gamma0.is_empty(), || {
            format!("{both}: gamma0 {}", z.gamma0)
        });
    }
    let Ok(a) = seq_to_complex(g) else { return };
    if let Ok(t) = tensor(&a, &a) {
        r.check(validate(&t).is_ok(), || {
            format!("{e}: tensor square invalid")
        });
    }
}

/// Criteria 1 to 6 and a property sweep of `sweep_cases` cases.
pub fn run_suite(m: Mutation, sweep_cases: usize) -> SuiteReport {
    SuiteReport {
        criteria: vec![
            criterion_1(),
            criterion_2(m),
            criterion_3(),
            criterion_4(m),
            criterion_5(m),
            criterion_6(m),
            property_sweep(sweep_cases, 0x5eed),
        ],
    }
}
