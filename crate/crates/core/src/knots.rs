//! Knot expressions, closed-form sequence transforms for (2,q)-cables and for
//! sums with T(2,q), and evaluation to γ₀.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{alexander_torus, gcd, LaurentPoly, Mode};
use crate::complex::{dual, reduce, tensor, ChainComplex, Generator};
use crate::error::{Error, Result};
use crate::standard::{seq_to_complex_in, sum_gamma0, top_alexander, ParamSeq};

/// Largest generator count for which `eval` keeps the full-ring complex of a sum.
pub const FULL_COMPLEX_LIMIT: usize = 600;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KnotExpr {
    Unknot,
    Torus { p: i64, q: i64 },
    Mirror(Box<KnotExpr>),
    Sum(Box<KnotExpr>, Box<KnotExpr>),
    Cable2 { q: i64, companion: Box<KnotExpr> },
}

impl KnotExpr {
    pub fn torus(p: i64, q: i64) -> Result<KnotExpr> {
        if p < 2 || q == 0 || gcd(p, q) != 1 {
            return Err(Error::InvalidTorus { p, q });
        }
        Ok(KnotExpr::Torus { p, q })
    }

    pub fn mirror(self) -> KnotExpr {
        KnotExpr::Mirror(Box::new(self))
    }

    pub fn sum(self, other: KnotExpr) -> KnotExpr {
        KnotExpr::Sum(Box::new(self), Box::new(other))
    }

    pub fn cable2(self, q: i64) -> Result<KnotExpr> {
        if q % 2 == 0 {
            return Err(Error::Precondition(format!(
                "cable winding {q} must be odd"
            )));
        }
        Ok(KnotExpr::Cable2 {
            q,
            companion: Box::new(self),
        })
    }

    /// The summands of a (possibly nested) connected sum, left to right.
    pub fn summands(&self) -> Vec<&KnotExpr> {
        match self {
            KnotExpr::Sum(a, b) => {
                let mut v = a.summands();
                v.extend(b.summands());
                v
            }
            other => vec![other],
        }
    }

    /// Check leaf and cable constraints throughout the tree.
    pub fn check(&self) -> Result<()> {
        match self {
            KnotExpr::Unknot => Ok(()),
            KnotExpr::Torus { p, q } => KnotExpr::torus(*p, *q).map(|_| ()),
            KnotExpr::Mirror(e) => e.check(),
            KnotExpr::Sum(a, b) => a.check().and_then(|_| b.check()),
            KnotExpr::Cable2 { q, companion } => {
                if q % 2 == 0 {
                    return Err(Error::Precondition(format!(
                        "cable winding {q} must be odd"
                    )));
                }
                companion.check()
            }
        }
    }

    /// Syntactic L-space test: positive torus knots and their (2,q)-cables
    /// with q at least 4g - 1, plus the unknot.
    pub fn is_lspace(&self) -> bool {
        match self {
            KnotExpr::Unknot => true,
            KnotExpr::Torus { q, .. } => *q > 0,
            KnotExpr::Mirror(e) => match e.as_ref() {
                KnotExpr::Torus { q, .. } => *q < 0,
                KnotExpr::Mirror(inner) => inner.is_lspace(),
                KnotExpr::Unknot => true,
                _ => false,
            },
            KnotExpr::Sum(a, b) => {
                matches!(a.as_ref(), KnotExpr::Unknot) && b.is_lspace()
                    || matches!(b.as_ref(), KnotExpr::Unknot) && a.is_lspace()
            }
            KnotExpr::Cable2 { q, companion } => {
                companion.is_lspace() && fibered_genus(companion).is_some_and(|g| *q >= 4 * g - 1)
            }
        }
    }

    /// Seifert genus where a closed formula is known (torus knots, their
    /// mirrors, (2,q)-cables of those, and sums of such).
    pub fn genus(&self) -> Option<i64> {
        fibered_genus(self)
    }
}

fn fibered_genus(e: &KnotExpr) -> Option<i64> {
    match e {
        KnotExpr::Unknot => Some(0),
        KnotExpr::Torus { p, q } => Some((p - 1) * (q.abs() - 1) / 2),
        KnotExpr::Mirror(k) => fibered_genus(k),
        KnotExpr::Sum(a, b) => Some(fibered_genus(a)? + fibered_genus(b)?),
        KnotExpr::Cable2 { q, companion } => cable_genus(fibered_genus(companion)?, 2, *q).ok(),
    }
}

impl fmt::Display for KnotExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KnotExpr::Unknot => write!(f, "U"),
            KnotExpr::Torus { p, q } => write!(f, "T({p},{q})"),
            KnotExpr::Mirror(e) => match e.as_ref() {
                KnotExpr::Mirror(_) | KnotExpr::Sum(..) => write!(f, "-({e})"),
                _ => write!(f, "-{e}"),
            },
            KnotExpr::Sum(a, b) => match b.as_ref() {
                KnotExpr::Sum(..) => write!(f, "{a} # ({b})"),
                _ => write!(f, "{a} # {b}"),
            },
            KnotExpr::Cable2 { q, companion } => write!(f, "C2({q}; {companion})"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {}", self.pos))
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        self.skip_ws();
        let digits = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if digits == self.pos {
            return Err(self.err("expected an integer"));
        }
        let text: String = std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii")
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        text.parse().map_err(|_| self.err("integer out of range"))
    }

    fn expr(&mut self) -> Result<KnotExpr> {
        let mut acc = self.term()?;
        while self.peek() == Some(b'#') {
            self.pos += 1;
            let rhs = self.term()?;
            acc = acc.sum(rhs);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<KnotExpr> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.atom()?.mirror());
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<KnotExpr> {
        match self.peek() {
            Some(b'U') => {
                self.pos += 1;
                Ok(KnotExpr::Unknot)
            }
            Some(b'T') => {
                self.pos += 1;
                self.expect(b'(')?;
                let p = self.int()?;
                self.expect(b',')?;
                let q = self.int()?;
                self.expect(b')')?;
                KnotExpr::torus(p, q)
            }
            Some(b'C') => {
                self.pos += 1;
                if self.src.get(self.pos) != Some(&b'2') {
                    return Err(self.err("expected 'C2('"));
                }
                self.pos += 1;
                self.expect(b'(')?;
                let q = self.int()?;
                self.expect(b';')?;
                let e = self.expr()?;
                self.expect(b')')?;
                e.cable2(q)
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parse an expression in the grammar
/// `expr := term ('#' term)*`, `term := ['-'] atom`,
/// `atom := 'T(' int ',' int ')' | 'C2(' int ';' expr ')' | 'U' | '(' expr ')'`.
pub fn parse_expr(s: &str) -> Result<KnotExpr> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

impl FromStr for KnotExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_expr(s)
    }
}

/// Staircase sequence of an L-space Alexander polynomial.
pub fn staircase_from_alexander(d: &LaurentPoly) -> Result<ParamSeq> {
    let terms = d.terms_desc();
    let bad = |why: &str| Error::NotStaircase(format!("{d}: {why}"));
    if terms.is_empty() {
        return Err(bad("zero polynomial"));
    }
    if !d.is_symmetric() {
        return Err(bad("not symmetric"));
    }
    if terms.len().is_multiple_of(2) {
        return Err(bad("even number of terms"));
    }
    for (i, &(e, c)) in terms.iter().enumerate() {
        let want = if i % 2 == 0 { 1 } else { -1 };
        if c != want {
            return Err(bad(&format!("coefficient {c} at t^{e}")));
        }
    }
    let entries = terms
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let gap = w[0].0 - w[1].0;
            if i % 2 == 0 {
                gap
            } else {
                -gap
            }
        })
        .collect();
    ParamSeq::new(entries)
}

/// Which side of 4g the cable parameter lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Above,
    Below,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CableRegime {
    pub regime: Regime,
    pub g: i64,
    pub q: i64,
}

impl CableRegime {
    pub fn of(g: i64, q: i64) -> Result<CableRegime> {
        if q % 2 == 0 {
            return Err(Error::Precondition(format!(
                "cable winding {q} must be odd"
            )));
        }
        let regime = if q > 4 * g {
            Regime::Above
        } else {
            Regime::Below
        };
        Ok(CableRegime { regime, g, q })
    }
}

/// γ₀ of the (2,q)-cable of an L-space knot with staircase `s` and genus `g`.
pub fn cable2(s: &ParamSeq, g: i64, q: i64) -> Result<ParamSeq> {
    cable2_adjusted(s, g, q, 0)
}

/// As [`cable2`], with the middle run lengthened by `middle_adjust` entries.
/// Nonzero values give deliberately wrong output for mutation checks.
pub fn cable2_adjusted(s: &ParamSeq, g: i64, q: i64, middle_adjust: i64) -> Result<ParamSeq> {
    let regime = CableRegime::of(g, q)?;
    if !s.is_staircase() {
        return Err(Error::NotStaircase(format!("{s}")));
    }
    s.check()?;
    if top_alexander(s) != g {
        return Err(Error::Precondition(format!(
            "genus {g} differs from the top Alexander grading {} of {s}",
            top_alexander(s)
        )));
    }
    let pairs: Vec<(i64, i64)> = s.entries().chunks(2).map(|c| (c[0], c[1])).collect();
    let mut first = Vec::new();
    for (i, &(a, b)) in pairs.iter().enumerate() {
        first.extend((0..2 * a - 1).map(|k| if k % 2 == 0 { 1 } else { -1 }));
        let last = i + 1 == pairs.len();
        first.push(if regime.regime == Regime::Below && last {
            2 * b
        } else {
            2 * b - 1
        });
    }
    let (middle_len, lead) = match regime.regime {
        Regime::Above => (q - 4 * g - 1, 1),
        Regime::Below => (4 * g - 1 - q, -1),
    };
    let middle_len = (middle_len + middle_adjust).max(0);
    let mut out = first.clone();
    out.extend((0..middle_len).map(|k| if k % 2 == 0 { lead } else { -lead }));
    out.extend(first.iter().rev().map(|e| -e));
    ParamSeq::new(out)
}

/// The first half `(1, b_1, ..., 1, b_n)` of a sequence of the shape
/// `(1, b_1, ..., 1, b_n, -b_n, -1, ..., -b_1, -1)` with every `b_i < 0`.
pub(crate) fn unit_staircase_half(s: &ParamSeq) -> Result<&[i64]> {
    let e = s.entries();
    let shape = |why: &str| Error::Precondition(format!("{s} {why}"));
    if !e.len().is_multiple_of(4) {
        return Err(shape("does not have length divisible by 4"));
    }
    if !s.is_symmetric() {
        return Err(shape("is not palindromic"));
    }
    let half = &e[..e.len() / 2];
    for pair in half.chunks(2) {
        if pair[0] != 1 {
            return Err(shape(
                "has a horizontal entry other than 1 in its first half",
            ));
        }
        if pair[1] >= 0 {
            return Err(shape("has a nonnegative vertical entry in its first half"));
        }
    }
    Ok(half)
}

/// γ₀ of K # T(2,q) (sign +1) or K # T(2,-q) (sign -1) for K of the shape
/// accepted by [`unit_staircase_half`], q odd and greater than 2.
pub fn sum_with_t2(s: &ParamSeq, q: i64, sign: i64) -> Result<ParamSeq> {
    if q <= 2 || q % 2 == 0 {
        return Err(Error::Precondition(format!(
            "q = {q} must be odd and greater than 2"
        )));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::Precondition(format!("sign {sign} must be +1 or -1")));
    }
    let half = unit_staircase_half(s)?;
    // Trailing (1,-1) pairs of the half merge with the inserted run.
    let trailing = half.rchunks(2).take_while(|p| p == &[1, -1]).count();
    let keep = &half[..half.len() - 2 * trailing];
    let run = 2 * trailing as i64 + sign * (q - 1) / 2;
    let mut out = keep.to_vec();
    let (x, y) = if run > 0 { (1, -1) } else { (-1, 1) };
    for _ in 0..run.abs() {
        out.extend([x, y]);
    }
    out.extend(keep.iter().rev().map(|e| -e));
    ParamSeq::new(out)
}

/// The literal insertion of q - 1 alternating entries between the halves.
pub fn insert_t2_run(s: &ParamSeq, q: i64, sign: i64) -> Result<ParamSeq> {
    let half = unit_staircase_half(s)?;
    let mut out = half.to_vec();
    out.extend((0..q - 1).map(|k| if k % 2 == 0 { sign } else { -sign }));
    out.extend(half.iter().rev().map(|e| -e));
    ParamSeq::new(out)
}

/// Result of evaluating a knot expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub gamma0: ParamSeq,
    /// The complex over F2[U,V], when it is known and small enough to keep.
    pub full: Option<ChainComplex>,
    /// Closed components discarded while evaluating connected sums.
    pub closed_components: usize,
    pub genus: Option<i64>,
}

fn unknot_complex() -> ChainComplex {
    ChainComplex::new(Mode::Full, vec![Generator::new("z0", 0, 0)]).expect("one generator")
}

/// Evaluate to γ₀ (and the full complex where available).
pub fn eval(e: &KnotExpr) -> Result<Evaluation> {
    eval_with_middle_adjust(e, 0)
}

/// As [`eval`], passing `middle_adjust` to every cable (see [`cable2_adjusted`]).
pub fn eval_with_middle_adjust(e: &KnotExpr, middle_adjust: i64) -> Result<Evaluation> {
    e.check()?;
    eval_inner(e, middle_adjust)
}

fn eval_inner(e: &KnotExpr, adj: i64) -> Result<Evaluation> {
    match e {
        KnotExpr::Unknot => Ok(Evaluation {
            gamma0: ParamSeq::unknot(),
            full: Some(unknot_complex()),
            closed_components: 0,
            genus: Some(0),
        }),
        KnotExpr::Torus { p, q } => {
            let stair = staircase_from_alexander(&alexander_torus(*p, *q)?)?;
            let seq = if *q > 0 { stair } else { stair.negate() };
            Ok(Evaluation {
                full: Some(seq_to_complex_in(&seq, Mode::Full)?),
                gamma0: seq,
                closed_components: 0,
                genus: e.genus(),
            })
        }
        KnotExpr::Mirror(inner) => {
            let ev = eval_inner(inner, adj)?;
            Ok(Evaluation {
                gamma0: ev.gamma0.negate(),
                full: ev.full.as_ref().map(dual),
                closed_components: ev.closed_components,
                genus: ev.genus,
            })
        }
        KnotExpr::Sum(..) => {
            let parts = e
                .summands()
                .into_iter()
                .map(|p| eval_inner(p, adj))
                .collect::<Result<Vec<_>>>()?;
            eval_sum(parts)
        }
        KnotExpr::Cable2 { q, companion } => {
            let ev = eval_inner(companion, adj)?;
            if !companion.is_lspace() || !ev.gamma0.is_staircase() {
                return Err(Error::ClosedFormInapplicable(format!(
                    "companion {companion} is not an L-space knot"
                )));
            }
            let g = top_alexander(&ev.gamma0);
            let seq = cable2_adjusted(&ev.gamma0, g, *q, adj)?;
            let full = if seq.is_staircase() {
                Some(seq_to_complex_in(&seq, Mode::Full)?)
            } else {
                None
            };
            Ok(Evaluation {
                gamma0: seq,
                full,
                closed_components: 0,
                genus: e.genus(),
            })
        }
    }
}

fn eval_sum(mut parts: Vec<Evaluation>) -> Result<Evaluation> {
    let genus = parts.iter().map(|p| p.genus).sum::<Option<i64>>();
    let mut closed: usize = parts.iter().map(|p| p.closed_components).sum();
    let full = full_sum(&parts);
    let mut seqs: Vec<ParamSeq> = parts.drain(..).map(|p| p.gamma0).collect();
    while seqs.len() > 1 {
        let mut best = (usize::MAX, 0, 1);
        for i in 0..seqs.len() {
            for j in i + 1..seqs.len() {
                let cost = (seqs[i].len() + 1) * (seqs[j].len() + 1);
                if cost < best.0 {
                    best = (cost, i, j);
                }
            }
        }
        let (_, i, j) = best;
        let b = seqs.remove(j);
        let g = sum_gamma0(&seqs[i], &b)?;
        closed += g.closed_components;
        seqs[i] = g.seq;
    }
    Ok(Evaluation {
        gamma0: seqs.pop().unwrap_or_default(),
        full,
        closed_components: closed,
        genus,
    })
}

fn full_sum(parts: &[Evaluation]) -> Option<ChainComplex> {
    let mut acc: Option<ChainComplex> = None;
    for p in parts {
        let c = p.full.as_ref()?;
        acc = Some(match acc {
            None => c.clone(),
            Some(a) => {
                if a.len() * c.len() > FULL_COMPLEX_LIMIT {
                    return None;
                }
                reduce(&tensor(&a, c).ok()?)
            }
        });
    }
    acc
}

/// Equality of γ₀ after evaluation.
pub fn locally_equivalent(e1: &KnotExpr, e2: &KnotExpr) -> Result<bool> {
    Ok(eval(e1)?.gamma0 == eval(e2)?.gamma0)
}

/// K_{2,q1} # -K_{2,q2} # T(2,q2) # -T(2,q1).
pub fn p_knot(k: &KnotExpr, q1: i64, q2: i64) -> Result<KnotExpr> {
    if q1 == q2 {
        return Err(Error::Precondition(format!("q1 = q2 = {q1}")));
    }
    if q1 % 2 == 0 || q2 % 2 == 0 {
        return Err(Error::Precondition(format!(
            "q1 = {q1} and q2 = {q2} must be odd"
        )));
    }
    let t2 = |q: i64| KnotExpr::torus(2, q);
    Ok(k.clone()
        .cable2(q1)?
        .sum(k.clone().cable2(q2)?.mirror())
        .sum(t2(q2)?)
        .sum(t2(q1)?.mirror()))
}

/// τ of the (p,q)-cable from τ and ε of the companion.
pub fn tau_cable_formula(tau_k: i64, eps_k: i64, p: i64, q: i64) -> Result<i64> {
    if p < 2 {
        return Err(Error::Precondition(format!("p = {p} must be at least 2")));
    }
    match eps_k {
        1 => Ok(p * tau_k + (p - 1) * (q - 1) / 2),
        0 if q > 0 => Ok((p - 1) * (q - 1) / 2),
        0 => Ok((p - 1) * (q + 1) / 2),
        -1 => Err(Error::Unsupported(
            "epsilon = -1 companion; mirror first".into(),
        )),
        other => Err(Error::Precondition(format!(
            "epsilon {other} is not -1, 0 or 1"
        ))),
    }
}

/// Genus of the (p,q)-cable of a fibered knot of genus g.
pub fn cable_genus(g: i64, p: i64, q: i64) -> Result<i64> {
    if p < 2 {
        return Err(Error::Precondition(format!("p = {p} must be at least 2")));
    }
    if q == 0 {
        return Err(Error::Precondition("q must be nonzero".into()));
    }
    Ok(p * g + (p - 1) * (q.abs() - 1) / 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> ParamSeq {
        s.parse().unwrap()
    }

    #[test]
    fn staircases_of_torus_knots() {
        let st = |p, q| staircase_from_alexander(&alexander_torus(p, q).unwrap()).unwrap();
        assert_eq!(st(4, 5), seq("[1,-3,2,-2,3,-1]"));
        assert_eq!(st(2, 3), seq("[1,-1]"));
        assert_eq!(st(2, 7), seq("[1,-1,1,-1,1,-1]"));
        assert_eq!(st(3, 4), seq("[1,-2,2,-1]"));
    }

    #[test]
    fn non_lspace_polynomial_rejected() {
        let d: LaurentPoly = "1*t^1 -3*t^0 1*t^-1".parse().unwrap();
        assert!(matches!(
            staircase_from_alexander(&d),
            Err(Error::NotStaircase(_))
        ));
    }

    #[test]
    fn cable_examples() {
        assert_eq!(
            cable2(&seq("[1,-1]"), 1, -1).unwrap(),
            seq("[1,-2,-1,1,-1,1,2,-1]")
        );
        assert_eq!(
            cable2(&seq("[1,-3,2,-2,3,-1]"), 6, 27).unwrap(),
            seq("[1,-7,1,-1,1,-5,1,-1,1,-1,1,-3,1,-1,3,-1,1,-1,1,-1,5,-1,1,-1,7,-1]")
        );
        let c = cable2(&seq("[1,-1]"), 1, 5).unwrap();
        assert_eq!(c, seq("[1,-3,3,-1]"));
        assert_eq!(top_alexander(&c), 4);
        assert!(cable2(&seq("[1,-1]"), 1, 4).is_err());
        assert!(cable2(&seq("[-1,1]"), 1, 5).is_err());
    }

    #[test]
    fn sum_with_t2_examples() {
        assert_eq!(
            sum_with_t2(&seq("[1,-1,1,-1]"), 3, 1).unwrap(),
            seq("[1,-1,1,-1,1,-1]")
        );
        assert_eq!(
            sum_with_t2(&seq("[1,-1,1,-1]"), 3, -1).unwrap(),
            seq("[1,-1]")
        );
        assert_eq!(
            sum_with_t2(&seq("[1,-2,2,-1]"), 5, -1).unwrap(),
            seq("[1,-2,-1,1,-1,1,2,-1]")
        );
        assert!(sum_with_t2(&seq("[1,-2,-1,1,-1,1,2,-1]"), 5, 1).is_err());
        assert_eq!(
            sum_with_t2(&ParamSeq::unknot(), 5, -1).unwrap(),
            seq("[-1,1,-1,1]")
        );
    }

    #[test]
    fn parse_round_trip() {
        for s in [
            "U",
            "T(2,3)",
            "-T(2,-5)",
            "C2(5; T(2,3)) # -C2(7; T(2,3)) # T(2,7) # -T(2,5)",
            "-(T(2,3) # T(2,5))",
            "T(2,3) # (T(2,5) # U)",
            "C2(-1; C2(13; T(2,3)))",
        ] {
            let e = parse_expr(s).unwrap();
            assert_eq!(parse_expr(&e.to_string()).unwrap(), e, "{s}");
        }
        assert!(parse_expr("T(2,4)").is_err());
        assert!(parse_expr("C2(4; U)").is_err());
        assert!(parse_expr("T(2,3) #").is_err());
        assert!(parse_expr("--T(2,3)").is_err());
    }

    #[test]
    fn evaluation_basics() {
        let g = |s: &str| eval(&parse_expr(s).unwrap()).unwrap().gamma0;
        assert_eq!(g("T(2,3)"), seq("[1,-1]"));
        assert_eq!(g("T(2,-3)"), seq("[-1,1]"));
        assert_eq!(g("T(2,3) # -T(2,3)"), ParamSeq::unknot());
        assert_eq!(g("C2(-1; T(2,3))"), seq("[1,-2,-1,1,-1,1,2,-1]"));
        assert_eq!(g("C2(3; U)"), seq("[1,-1]"));
        let err = eval(&parse_expr("C2(3; T(2,3) # T(2,3))").unwrap());
        assert!(matches!(err, Err(Error::ClosedFormInapplicable(_))));
        let err = eval(&parse_expr("C2(3; C2(1; T(2,3)))").unwrap());
        assert!(matches!(err, Err(Error::ClosedFormInapplicable(_))));
        assert_eq!(g("C2(3; C2(3; T(2,3)))").len() % 2, 0);
    }

    #[test]
    fn tau_and_genus_formulas() {
        assert_eq!(tau_cable_formula(1, 1, 2, -1).unwrap(), 1);
        assert_eq!(tau_cable_formula(0, 0, 2, 7).unwrap(), 3);
        assert_eq!(tau_cable_formula(0, 0, 2, -3).unwrap(), -1);
        assert!(tau_cable_formula(1, -1, 2, 3).is_err());
        assert_eq!(cable_genus(1, 2, -1).unwrap(), 2);
        assert_eq!(cable_genus(6, 2, 27).unwrap(), 25);
        assert_eq!(cable_genus(0, 2, 7).unwrap(), 3);
    }

    #[test]
    fn p_knot_shape() {
        let k = KnotExpr::torus(2, 3).unwrap();
        let p = p_knot(&k, 5, 7).unwrap();
        assert_eq!(
            p.to_string(),
            "C2(5; T(2,3)) # -C2(7; T(2,3)) # T(2,7) # -T(2,5)"
        );
        assert!(p_knot(&k, 3, 3).is_err());
        assert!(p_knot(&k, 1, 3).is_ok());
    }
}
