//! Standard complexes: integer sequences, their complexes, simplification to a
//! basis of paths and loops, and the sequence-level invariants.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{Mode, Mono};
use crate::bunch::{band_inverse, bunch_reduce, Role};
use crate::complex::{quotient_uv, reduce, tensor, validate, ChainComplex, Generator};
use crate::error::{Error, Result};

/// Default cap on reduction steps in `simplify_basis`.
pub const DEFAULT_ITERATION_CAP: usize = 10_000;

/// A finite sequence of nonzero integers. Odd positions (1st, 3rd, ...) are
/// horizontal steps, even positions vertical; the sign is + when the step runs
/// against its arrow.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParamSeq(Vec<i64>);

impl ParamSeq {
    /// Wrap raw entries; only rejects zeros. Use [`ParamSeq::check`] for the knot invariants.
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if let Some(i) = entries.iter().position(|&e| e == 0) {
            return Err(Error::InvalidSequence(format!("entry {} is zero", i + 1)));
        }
        Ok(ParamSeq(entries))
    }

    pub fn unknot() -> Self {
        ParamSeq(Vec::new())
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Reverse the order and negate every entry.
    pub fn reverse_negate(&self) -> ParamSeq {
        ParamSeq(self.0.iter().rev().map(|e| -e).collect())
    }

    /// Negate every entry (the sequence of the dual complex).
    pub fn negate(&self) -> ParamSeq {
        ParamSeq(self.0.iter().map(|e| -e).collect())
    }

    pub fn is_symmetric(&self) -> bool {
        self.reverse_negate() == *self
    }

    /// Alexander gradings z_0 .. z_m along the walk, normalized so the
    /// endpoints are antisymmetric.
    pub fn a_walk(&self) -> Vec<i64> {
        let mut a = Vec::with_capacity(self.len() + 1);
        a.push(0);
        for (i, &e) in self.0.iter().enumerate() {
            let prev = a[i];
            a.push(if i % 2 == 0 { prev - e } else { prev + e });
        }
        let shift = -a[self.len()] / 2;
        a.iter().map(|x| x + shift).collect()
    }

    /// Even length, reverse-negate symmetry, and an integral start grading.
    pub fn check(&self) -> Result<()> {
        if self.0.contains(&0) {
            return Err(Error::InvalidSequence("zero entry".into()));
        }
        if !self.len().is_multiple_of(2) {
            return Err(Error::InvalidSequence(format!("odd length {}", self.len())));
        }
        if !self.is_symmetric() {
            return Err(Error::InvalidSequence(format!(
                "{self} is not reverse-negate symmetric"
            )));
        }
        let total: i64 = self
            .0
            .iter()
            .enumerate()
            .map(|(i, &e)| if i % 2 == 0 { -e } else { e })
            .sum();
        if total % 2 != 0 {
            return Err(Error::InvalidSequence(format!("{self} has odd walk sum")));
        }
        Ok(())
    }

    /// Horizontal entries positive and vertical entries negative.
    pub fn is_staircase(&self) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, &e)| if i % 2 == 0 { e > 0 } else { e < 0 })
    }
}

impl fmt::Display for ParamSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl FromStr for ParamSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected a bracketed list, got {s:?}")))?;
        if inner.trim().is_empty() {
            return Ok(ParamSeq::unknot());
        }
        let entries = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        ParamSeq::new(entries)
    }
}

impl From<ParamSeq> for Vec<i64> {
    fn from(s: ParamSeq) -> Self {
        s.0
    }
}

/// The standard complex over F2[U,V]/(UV).
pub fn seq_to_complex(s: &ParamSeq) -> Result<ChainComplex> {
    seq_to_complex_in(s, Mode::UvZero)
}

/// The standard generators and arrows in either ring. Over the full ring the
/// result squares to zero only for staircases; other sequences need extra
/// diagonal arrows, which callers add themselves.
pub fn seq_to_complex_in(s: &ParamSeq, mode: Mode) -> Result<ChainComplex> {
    s.check()?;
    let a = s.a_walk();
    let n = s.len();
    let mut gu = vec![0i64; n + 1];
    let mut arrows = Vec::with_capacity(n);
    for (idx, &e) in s.entries().iter().enumerate() {
        let i = idx + 1;
        let p = e.unsigned_abs() as u32;
        let horizontal = i % 2 == 1;
        let mono = if horizontal {
            Mono::new(p, 0)
        } else {
            Mono::new(0, p)
        };
        let upow = mono.u as i64;
        if e > 0 {
            arrows.push((i, i - 1, mono));
            gu[i] = gu[i - 1] + 1 - 2 * upow;
        } else {
            arrows.push((i - 1, i, mono));
            gu[i] = gu[i - 1] - 1 + 2 * upow;
        }
    }
    let gens = (0..=n)
        .map(|i| Generator::new(format!("z{i}"), gu[i], gu[i] - 2 * a[i]))
        .collect();
    let mut c = ChainComplex::new(mode, gens)?;
    for (src, tgt, m) in arrows {
        c.add_mono(src, tgt, m)?;
    }
    if mode == Mode::UvZero || s.is_staircase() {
        debug_assert_eq!(validate(&c), Ok(()));
    }
    Ok(c)
}

/// Change basis so each generator meets at most one horizontal and at most one
/// vertical arrow. Closed components carrying a nontrivial local system keep
/// that system on their vertical arrows.
pub fn simplify_basis(c: &ChainComplex) -> Result<ChainComplex> {
    simplify_basis_capped(c, DEFAULT_ITERATION_CAP)
}

pub fn simplify_basis_capped(c: &ChainComplex, cap: usize) -> Result<ChainComplex> {
    if c.mode() != Mode::UvZero {
        return Err(Error::Precondition(
            "simplify_basis needs a complex over F2[U,V]/(UV)".into(),
        ));
    }
    if c.has_unit_entry() {
        return Err(Error::Precondition(
            "simplify_basis needs a reduced complex".into(),
        ));
    }
    let red = bunch_reduce(c, cap.max(4 * c.len()))?;
    let n = c.len();
    let mut rows_of_col: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut cols_of_row: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(r, col) in &red.nodes {
        rows_of_col[col] = vec![r];
        cols_of_row[r] = vec![col];
    }
    for band in &red.bands {
        for (j, &col) in band.cols.iter().enumerate() {
            rows_of_col[col] = band
                .rows
                .iter()
                .enumerate()
                .filter(|(i, _)| band.a[*i].contains(j))
                .map(|(_, &r)| r)
                .collect();
        }
        let inv = band_inverse(band)?;
        for (i, &r) in band.rows.iter().enumerate() {
            cols_of_row[r] = band
                .cols
                .iter()
                .enumerate()
                .filter(|(j, _)| inv[*j].contains(i))
                .map(|(_, &k)| k)
                .collect();
        }
    }
    let mut out = ChainComplex::new(Mode::UvZero, c.gens().to_vec())?;
    for (g, role) in red.h_roles.iter().enumerate() {
        if let Role::Source { power, partner } = *role {
            out.add_mono(g, partner, Mono::new(power, 0))?;
        }
    }
    for (r, cols) in cols_of_row.iter().enumerate() {
        for &col in cols {
            if let Role::Source { power, partner } = red.v_roles[col] {
                for &r2 in &rows_of_col[partner] {
                    out.add_mono(r, r2, Mono::new(0, power))?;
                }
            }
        }
    }
    validate(&out)?;
    Ok(out)
}

/// γ₀ together with the number of closed components that were discarded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gamma0 {
    pub seq: ParamSeq,
    pub closed_components: usize,
}

#[derive(Clone, Copy)]
struct Step {
    to: usize,
    power: u32,
    incoming: bool,
}

/// Split a simplified complex into its open path and closed components.
pub fn decompose(c: &ChainComplex) -> Result<Gamma0> {
    let n = c.len();
    let mut h: Vec<Vec<Step>> = vec![Vec::new(); n];
    let mut v: Vec<Vec<Step>> = vec![Vec::new(); n];
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for (s, t, e) in c.arrows() {
        let m = e
            .as_mono()
            .ok_or_else(|| Error::NotKnotLike("entry with several terms".into()))?;
        let (list, power) = match (m.u, m.v) {
            (u, 0) if u > 0 => (&mut h, u),
            (0, w) if w > 0 => (&mut v, w),
            _ => {
                return Err(Error::NotKnotLike(format!(
                    "entry {m} is not a pure U or V power"
                )))
            }
        };
        list[s].push(Step {
            to: t,
            power,
            incoming: false,
        });
        list[t].push(Step {
            to: s,
            power,
            incoming: true,
        });
        let (a, b) = (find(&mut parent, s), find(&mut parent, t));
        parent[a] = b;
    }
    let h_free: Vec<usize> = (0..n).filter(|&g| h[g].is_empty()).collect();
    let v_free: Vec<usize> = (0..n).filter(|&g| v[g].is_empty()).collect();
    if h_free.is_empty() || v_free.is_empty() {
        return Err(Error::NoOpenPath);
    }
    if h_free.len() > 1 || v_free.len() > 1 {
        return Err(Error::MultipleOpenPaths);
    }
    let start = v_free[0];
    let mut seq = Vec::new();
    let mut cur = start;
    let mut horizontal = true;
    loop {
        let adj = if horizontal { &h[cur] } else { &v[cur] };
        match adj.len() {
            0 => break,
            1 => {}
            _ => {
                return Err(Error::NotKnotLike(
                    "γ₀ meets a generator with two arrows of one kind".into(),
                ))
            }
        }
        let st = adj[0];
        seq.push(if st.incoming {
            st.power as i64
        } else {
            -(st.power as i64)
        });
        cur = st.to;
        horizontal = !horizontal;
        if seq.len() > n {
            return Err(Error::NotKnotLike("walk does not terminate".into()));
        }
    }
    if cur != h_free[0] {
        return Err(Error::NotKnotLike(
            "open path ends away from the horizontal endpoint".into(),
        ));
    }
    let seq = ParamSeq::new(seq)?;
    seq.check()
        .map_err(|e| Error::NotKnotLike(format!("extracted path is not knot-like: {e}")))?;
    let root = find(&mut parent, start);
    let mut roots = std::collections::BTreeSet::new();
    for g in 0..n {
        let r = find(&mut parent, g);
        if r != root {
            roots.insert(r);
        }
    }
    Ok(Gamma0 {
        seq,
        closed_components: roots.len(),
    })
}

/// The sequence of the open path of a simplified complex.
pub fn extract_gamma0(c: &ChainComplex) -> Result<ParamSeq> {
    decompose(c).map(|g| g.seq)
}

/// Quotient, reduce, simplify and decompose.
pub fn gamma0_pipeline(c: &ChainComplex) -> Result<Gamma0> {
    let q = reduce(&quotient_uv(c));
    decompose(&simplify_basis(&q)?)
}

/// γ₀ of the tensor product of two standard complexes.
pub fn sum_gamma0(s1: &ParamSeq, s2: &ParamSeq) -> Result<Gamma0> {
    let c = tensor(&seq_to_complex(s1)?, &seq_to_complex(s2)?)?;
    gamma0_pipeline(&c)
}

/// Assert the reverse-negate symmetry and return the input.
pub fn normalize_seq(s: &ParamSeq) -> Result<ParamSeq> {
    if !s.is_symmetric() {
        return Err(Error::InvalidSequence(format!(
            "{s} is not reverse-negate symmetric"
        )));
    }
    Ok(s.clone())
}

/// Largest Alexander grading met by the walk.
pub fn top_alexander(s: &ParamSeq) -> i64 {
    s.a_walk().into_iter().max().unwrap_or(0)
}

/// Alexander grading of the start of the walk.
pub fn tau(s: &ParamSeq) -> i64 {
    s.a_walk()[0]
}

/// Sign of the first entry; zero for the empty sequence.
pub fn epsilon(s: &ParamSeq) -> i64 {
    s.entries().first().map_or(0, |e| e.signum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SharpnessReport {
    pub genus: i64,
    pub gamma0_top_a: i64,
    pub sharp: bool,
}

pub fn sharpness(genus: i64, s: &ParamSeq) -> Result<SharpnessReport> {
    if genus < 0 {
        return Err(Error::Precondition(format!("negative genus {genus}")));
    }
    let top = top_alexander(s);
    Ok(SharpnessReport {
        genus,
        gamma0_top_a: top,
        sharp: top == genus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[i64]) -> ParamSeq {
        ParamSeq::new(v.to_vec()).unwrap()
    }

    #[test]
    fn trefoil_complex() {
        let c = seq_to_complex(&seq(&[1, -1])).unwrap();
        assert_eq!(c.len(), 3);
        let a: Vec<i64> = c.gens().iter().map(|g| g.alexander()).collect();
        assert_eq!(a, vec![1, 0, -1]);
        assert_eq!(
            c.entry(1, 0).and_then(|e| e.as_mono()),
            Some(Mono::new(1, 0))
        );
        assert_eq!(
            c.entry(1, 2).and_then(|e| e.as_mono()),
            Some(Mono::new(0, 1))
        );
    }

    #[test]
    fn walk_of_t45() {
        assert_eq!(
            seq(&[1, -3, 2, -2, 3, -1]).a_walk(),
            vec![6, 5, 2, 0, -2, -5, -6]
        );
    }

    #[test]
    fn parse_and_print() {
        let s: ParamSeq = "[1, -2,-1,1,-1,1,2,-1]".parse().unwrap();
        assert_eq!(s.to_string(), "[1,-2,-1,1,-1,1,2,-1]");
        assert_eq!("[]".parse::<ParamSeq>().unwrap(), ParamSeq::unknot());
        assert!("[1,0]".parse::<ParamSeq>().is_err());
    }

    #[test]
    fn invariants_of_small_sequences() {
        assert_eq!(tau(&seq(&[1, -1])), 1);
        assert_eq!(tau(&seq(&[-1, 1])), -1);
        assert_eq!(epsilon(&seq(&[-1, 1])), -1);
        assert_eq!(epsilon(&ParamSeq::unknot()), 0);
        assert_eq!(top_alexander(&ParamSeq::unknot()), 0);
        assert!(normalize_seq(&seq(&[1, -2])).is_err());
    }

    #[test]
    fn staircase_round_trip() {
        let s = seq(&[1, -3, 2, -2, 3, -1]);
        let c = seq_to_complex(&s).unwrap();
        let simp = simplify_basis(&c).unwrap();
        assert_eq!(simp, c);
        assert_eq!(extract_gamma0(&simp).unwrap(), s);
    }

    #[test]
    fn closed_loop_only_has_no_open_path() {
        let mut c = ChainComplex::new(
            Mode::UvZero,
            vec![
                Generator::new("a", 0, 0),
                Generator::new("b", -1, 1),
                Generator::new("c", 1, -1),
                Generator::new("d", 0, 0),
            ],
        )
        .unwrap();
        // a square: a -> b (U), a -> c (V), b -> d (V), c -> d (U)
        c.add_mono(0, 1, Mono::new(1, 0)).unwrap();
        c.add_mono(0, 2, Mono::new(0, 1)).unwrap();
        c.add_mono(1, 3, Mono::new(0, 1)).unwrap();
        c.add_mono(2, 3, Mono::new(1, 0)).unwrap();
        assert_eq!(extract_gamma0(&c), Err(Error::NoOpenPath));
    }
}
