//! Bigraded free chain complexes over F2[U,V] and F2[U,V]/(UV).
//!
//! Gradings: U has bidegree (-2, 0), V has (0, -2), and the differential
//! lowers both gradings by one. The Alexander grading is (grU - grV) / 2.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{ring_mul, Mode, Mono, RingElem};
use crate::error::{Error, Result};

/// A bigrading (grU, grV).
pub type Grading = (i64, i64);

/// A chain: a sparse F2[U,V]-combination of generators, keyed by index.
pub type Chain = BTreeMap<usize, RingElem>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub id: String,
    pub gr_u: i64,
    pub gr_v: i64,
}

impl Generator {
    pub fn new(id: impl Into<String>, gr_u: i64, gr_v: i64) -> Self {
        Generator {
            id: id.into(),
            gr_u,
            gr_v,
        }
    }

    pub fn grading(&self) -> Grading {
        (self.gr_u, self.gr_v)
    }

    pub fn alexander(&self) -> i64 {
        (self.gr_u - self.gr_v) / 2
    }
}

/// A failed complex invariant, with witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    /// An entry whose ring does not match the complex.
    Mode { src: String, tgt: String },
    /// An entry `src -> tgt` whose monomial does not lower both gradings by one.
    Grading {
        src: String,
        tgt: String,
        mono: Mono,
    },
    /// The coefficient of `tgt` in the square of the differential applied to `src`.
    DSquared {
        src: String,
        tgt: String,
        coeff: RingElem,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Mode { src, tgt } => write!(f, "entry {src} -> {tgt} has the wrong ring"),
            Violation::Grading { src, tgt, mono } => {
                write!(
                    f,
                    "entry {src} -> {tgt} with {mono} breaks the grading rule"
                )
            }
            Violation::DSquared { src, tgt, coeff } => {
                write!(f, "d^2({src}) has coefficient {coeff} on {tgt}")
            }
        }
    }
}

/// A finitely generated free bigraded complex. `out[y]` holds the entries of the
/// differential of generator `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    mode: Mode,
    gens: Vec<Generator>,
    out: Vec<Chain>,
}

impl ChainComplex {
    /// A complex with the given generators and zero differential.
    pub fn new(mode: Mode, gens: Vec<Generator>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for g in &gens {
            if !seen.insert(g.id.as_str()) {
                return Err(Error::InvalidComplex(format!(
                    "duplicate generator id {}",
                    g.id
                )));
            }
            if (g.gr_u - g.gr_v).rem_euclid(2) != 0 {
                return Err(Error::InvalidComplex(format!(
                    "generator {} has a half-integral Alexander grading",
                    g.id
                )));
            }
            if g.id.is_empty() || g.id.contains(char::is_whitespace) {
                return Err(Error::InvalidComplex(format!(
                    "bad generator id {:?}",
                    g.id
                )));
            }
        }
        let n = gens.len();
        Ok(ChainComplex {
            mode,
            gens,
            out: vec![Chain::new(); n],
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn gen(&self, i: usize) -> &Generator {
        &self.gens[i]
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.id == id)
    }

    /// Entries of the differential of generator `src`.
    pub fn boundary_of(&self, src: usize) -> &Chain {
        &self.out[src]
    }

    pub fn entry(&self, src: usize, tgt: usize) -> Option<&RingElem> {
        self.out[src].get(&tgt)
    }

    /// All nonzero entries as (source, target, coefficient).
    pub fn arrows(&self) -> impl Iterator<Item = (usize, usize, &RingElem)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(s, row)| row.iter().map(move |(&t, c)| (s, t, c)))
    }

    pub fn arrow_count(&self) -> usize {
        self.out.iter().map(|r| r.len()).sum()
    }

    /// Add `coeff` to the entry `src -> tgt`.
    pub fn add_entry(&mut self, src: usize, tgt: usize, coeff: &RingElem) -> Result<()> {
        if coeff.mode() != self.mode {
            return Err(Error::ModeMismatch);
        }
        if src >= self.len() || tgt >= self.len() {
            return Err(Error::InvalidComplex(format!(
                "entry {src} -> {tgt} out of range"
            )));
        }
        add_to_chain(&mut self.out[src], tgt, coeff);
        Ok(())
    }

    /// Add the monomial `m` to the entry `src -> tgt`.
    pub fn add_mono(&mut self, src: usize, tgt: usize, m: Mono) -> Result<()> {
        let c = RingElem::mono(m, self.mode);
        self.add_entry(src, tgt, &c)
    }

    /// Remove the entry `src -> tgt`.
    pub fn remove_entry(&mut self, src: usize, tgt: usize) {
        self.out[src].remove(&tgt);
    }

    /// Apply the differential to a chain.
    pub fn boundary(&self, c: &Chain) -> Chain {
        let mut acc = Chain::new();
        for (&y, cy) in c {
            for (&x, e) in &self.out[y] {
                let p = ring_mul(cy, e).expect("same mode");
                add_to_chain(&mut acc, x, &p);
            }
        }
        acc
    }

    /// The same complex with relabeled generator ids.
    pub fn with_ids<F: Fn(usize, &str) -> String>(&self, f: F) -> Result<ChainComplex> {
        let gens = self
            .gens
            .iter()
            .enumerate()
            .map(|(i, g)| Generator::new(f(i, &g.id), g.gr_u, g.gr_v))
            .collect();
        let mut c = ChainComplex::new(self.mode, gens)?;
        c.out = self.out.clone();
        Ok(c)
    }

    /// The subcomplex spanned by the listed generators, in that order.
    pub fn restrict(&self, keep: &[usize]) -> Result<ChainComplex> {
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let gens = keep.iter().map(|&g| self.gens[g].clone()).collect();
        let mut c = ChainComplex::new(self.mode, gens)?;
        for (&g, &i) in &pos {
            for (t, e) in &self.out[g] {
                if let Some(&j) = pos.get(t) {
                    c.out[i].insert(j, e.clone());
                }
            }
        }
        Ok(c)
    }

    /// True if some entry is the unit U^0 V^0 (or has a unit term).
    pub fn has_unit_entry(&self) -> bool {
        self.arrows().any(|(_, _, c)| c.has_unit_term())
    }
}

/// Add `coeff` to `chain[idx]`, dropping the key when the result is zero.
pub fn add_to_chain(chain: &mut Chain, idx: usize, coeff: &RingElem) {
    if coeff.is_zero() {
        return;
    }
    match chain.get_mut(&idx) {
        Some(e) => {
            e.add_assign(coeff);
            if e.is_zero() {
                chain.remove(&idx);
            }
        }
        None => {
            chain.insert(idx, coeff.clone());
        }
    }
}

/// Sum of two chains.
pub fn chain_sum(a: &Chain, b: &Chain) -> Chain {
    let mut r = a.clone();
    for (&i, c) in b {
        add_to_chain(&mut r, i, c);
    }
    r
}

fn mono_respects(src: &Generator, tgt: &Generator, m: Mono, shift: Grading, skew: bool) -> bool {
    let (su, sv) = if skew {
        (src.gr_v, src.gr_u)
    } else {
        (src.gr_u, src.gr_v)
    };
    tgt.gr_u - 2 * m.u as i64 == su + shift.0 && tgt.gr_v - 2 * m.v as i64 == sv + shift.1
}

/// Check the grading rule, the ring of every entry, and that the differential squares to zero.
pub fn validate(c: &ChainComplex) -> std::result::Result<(), Violation> {
    for (s, t, e) in c.arrows() {
        if e.mode() != c.mode {
            return Err(Violation::Mode {
                src: c.gens[s].id.clone(),
                tgt: c.gens[t].id.clone(),
            });
        }
        for m in e.terms() {
            if !mono_respects(&c.gens[s], &c.gens[t], m, (-1, -1), false) {
                return Err(Violation::Grading {
                    src: c.gens[s].id.clone(),
                    tgt: c.gens[t].id.clone(),
                    mono: m,
                });
            }
        }
    }
    for y in 0..c.len() {
        let dd = c.boundary(&c.out[y]);
        if let Some((&x, coeff)) = dd.iter().next() {
            return Err(Violation::DSquared {
                src: c.gens[y].id.clone(),
                tgt: c.gens[x].id.clone(),
                coeff: coeff.clone(),
            });
        }
    }
    Ok(())
}

/// Tensor product; generator `a*b` has the summed gradings.
pub fn tensor(c1: &ChainComplex, c2: &ChainComplex) -> Result<ChainComplex> {
    if c1.mode != c2.mode {
        return Err(Error::ModeMismatch);
    }
    let n2 = c2.len();
    let mut gens = Vec::with_capacity(c1.len() * n2);
    for a in &c1.gens {
        for b in &c2.gens {
            gens.push(Generator::new(
                format!("{}*{}", a.id, b.id),
                a.gr_u + b.gr_u,
                a.gr_v + b.gr_v,
            ));
        }
    }
    let mut c = ChainComplex::new(c1.mode, gens)?;
    for i in 0..c1.len() {
        for j in 0..n2 {
            let src = i * n2 + j;
            for (&t, e) in &c1.out[i] {
                add_to_chain(&mut c.out[src], t * n2 + j, e);
            }
            for (&t, e) in &c2.out[j] {
                add_to_chain(&mut c.out[src], i * n2 + t, e);
            }
        }
    }
    Ok(c)
}

/// Transpose the differential and negate all gradings.
pub fn dual(c: &ChainComplex) -> ChainComplex {
    let gens = c
        .gens
        .iter()
        .map(|g| Generator::new(g.id.clone(), -g.gr_u, -g.gr_v))
        .collect();
    let mut d = ChainComplex::new(c.mode, gens).expect("ids already valid");
    for (s, t, e) in c.arrows() {
        d.out[t].insert(s, e.clone());
    }
    d
}

/// Pass to F2[U,V]/(UV). Idempotent on complexes already in that ring.
pub fn quotient_uv(c: &ChainComplex) -> ChainComplex {
    let mut d = ChainComplex::new(Mode::UvZero, c.gens.clone()).expect("ids already valid");
    for (s, t, e) in c.arrows() {
        let q = e.with_mode(Mode::UvZero);
        if !q.is_zero() {
            d.out[s].insert(t, q);
        }
    }
    d
}

/// Cancel unit entries until none remain, always taking the entry whose
/// (source id, target id) is lexicographically first.
pub fn reduce(c: &ChainComplex) -> ChainComplex {
    let n = c.len();
    let mut out = c.out.clone();
    let mut inc: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (s, t, _) in c.arrows() {
        inc[t].insert(s);
    }
    let mut alive = vec![true; n];
    let mut units: BTreeSet<(&str, &str, usize, usize)> = BTreeSet::new();
    for (s, t, e) in c.arrows() {
        if e.is_one() {
            units.insert((&c.gens[s].id, &c.gens[t].id, s, t));
        }
    }
    type Units<'a> = BTreeSet<(&'a str, &'a str, usize, usize)>;
    fn set_entry<'a>(
        gens: &'a [Generator],
        out: &mut [Chain],
        inc: &mut [BTreeSet<usize>],
        units: &mut Units<'a>,
        s: usize,
        t: usize,
        delta: &RingElem,
    ) {
        let was_unit = out[s].get(&t).is_some_and(|e| e.is_one());
        add_to_chain(&mut out[s], t, delta);
        let now = out[s].get(&t);
        if now.is_some() {
            inc[t].insert(s);
        } else {
            inc[t].remove(&s);
        }
        let is_unit = now.is_some_and(|e| e.is_one());
        let key = (gens[s].id.as_str(), gens[t].id.as_str(), s, t);
        if was_unit && !is_unit {
            units.remove(&key);
        } else if is_unit && !was_unit {
            units.insert(key);
        }
    }
    let gens = c.gens.as_slice();
    while let Some(&(_, _, b, a)) = units.iter().next() {
        // d b = a + rest; every x with d x = c_x a + ... picks up c_x * rest.
        let rest: Vec<(usize, RingElem)> = out[b]
            .iter()
            .filter(|(&y, _)| y != a)
            .map(|(&y, e)| (y, e.clone()))
            .collect();
        let preds: Vec<(usize, RingElem)> = inc[a]
            .iter()
            .filter(|&&x| x != b)
            .map(|&x| (x, out[x][&a].clone()))
            .collect();
        for (x, cx) in &preds {
            for (y, dy) in &rest {
                let p = ring_mul(cx, dy).expect("same mode");
                set_entry(gens, &mut out, &mut inc, &mut units, *x, *y, &p);
            }
        }
        for g in [a, b] {
            let targets: Vec<usize> = out[g].keys().copied().collect();
            for t in targets {
                let e = out[g][&t].clone();
                set_entry(gens, &mut out, &mut inc, &mut units, g, t, &e);
            }
            let sources: Vec<usize> = inc[g].iter().copied().collect();
            for s in sources {
                let e = out[s][&g].clone();
                set_entry(gens, &mut out, &mut inc, &mut units, s, g, &e);
            }
            alive[g] = false;
        }
    }
    let keep: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
    let mut r = ChainComplex {
        mode: c.mode,
        gens: c.gens.clone(),
        out,
    };
    r = r.restrict(&keep).expect("ids already valid");
    r
}

/// Homology after setting V = 0, as a module over F2[U].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerticalHomology {
    /// Alexander grading of the generator of the free summand.
    pub free_a: i64,
    /// Orders of the torsion summands F2[U]/(U^k), ascending.
    pub torsion: Vec<u32>,
}

/// Compute the F2[U]-homology of C with V set to zero.
pub fn vertical_homology(c: &ChainComplex) -> Result<VerticalHomology> {
    let mut h = PowerComplex::from_complex(c, Kind::U);
    let pairs = h.snf();
    let mut paired = vec![false; c.len()];
    let mut torsion = Vec::new();
    for &(m, y, x) in &pairs {
        paired[y] = true;
        paired[x] = true;
        if m > 0 {
            torsion.push(m);
        }
    }
    let free: Vec<usize> = (0..c.len()).filter(|&i| !paired[i]).collect();
    if free.len() != 1 {
        return Err(Error::NotKnotLike(format!(
            "free part of the vertical homology has rank {}",
            free.len()
        )));
    }
    torsion.sort_unstable();
    Ok(VerticalHomology {
        free_a: c.gens[free[0]].alexander(),
        torsion,
    })
}

/// Largest Alexander grading among the generators.
pub fn max_alexander(c: &ChainComplex) -> Result<i64> {
    c.gens
        .iter()
        .map(Generator::alexander)
        .max()
        .ok_or_else(|| Error::InvalidComplex("empty complex".into()))
}

/// Which variable a single-variable arrow carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Kind {
    U,
    V,
}

impl Kind {
    /// The power of this variable if `m` is a pure positive power of it.
    pub(crate) fn power(self, m: Mono) -> Option<u32> {
        match self {
            Kind::U if m.v == 0 && m.u > 0 => Some(m.u),
            Kind::V if m.u == 0 && m.v > 0 => Some(m.v),
            _ => None,
        }
    }
}

/// The arrows of one kind, as a complex over a PID with single-power entries.
/// Supports the min-pivot Smith normal form with a record of unit basis changes.
pub(crate) struct PowerComplex {
    out: Vec<BTreeMap<usize, u32>>,
    inc: Vec<BTreeSet<usize>>,
    /// Called with (x, x2) whenever basis element x is replaced by x + x2.
    unit_changes: Vec<(usize, usize)>,
}

impl PowerComplex {
    pub(crate) fn from_complex(c: &ChainComplex, kind: Kind) -> Self {
        let n = c.len();
        let mut out = vec![BTreeMap::new(); n];
        let mut inc = vec![BTreeSet::new(); n];
        for (s, t, e) in c.arrows() {
            let Some(m) = e.as_mono() else { continue };
            if let Some(p) = kind.power(m) {
                out[s].insert(t, p);
                inc[t].insert(s);
            }
        }
        PowerComplex {
            out,
            inc,
            unit_changes: Vec::new(),
        }
    }

    fn toggle(&mut self, s: usize, t: usize, p: u32) {
        if self.out[s].remove(&t).is_some() {
            self.inc[t].remove(&s);
        } else {
            self.out[s].insert(t, p);
            self.inc[t].insert(s);
        }
    }

    /// Replace basis element x by x + X^c x2.
    fn change(&mut self, x: usize, x2: usize, c: u32) {
        if c == 0 {
            self.unit_changes.push((x, x2));
        }
        let row: Vec<(usize, u32)> = self.out[x2].iter().map(|(&t, &p)| (t, p)).collect();
        for (t, p) in row {
            self.toggle(x, t, p + c);
        }
        let col: Vec<(usize, u32)> = self.inc[x].iter().map(|&s| (s, self.out[s][&x])).collect();
        for (s, p) in col {
            self.toggle(s, x2, p + c);
        }
    }

    /// Reduce to a normal form where each generator meets at most one arrow.
    /// Returns the surviving arrows (power, source, target).
    pub(crate) fn snf(&mut self) -> Vec<(u32, usize, usize)> {
        let n = self.out.len();
        let mut done = vec![false; n];
        loop {
            let mut best: Option<(u32, usize, usize)> = None;
            for y in 0..n {
                if done[y] {
                    continue;
                }
                for (&x, &p) in &self.out[y] {
                    if !done[x] && best.is_none_or(|b| (p, y, x) < b) {
                        best = Some((p, y, x));
                    }
                }
            }
            let Some((m, y, x)) = best else { break };
            let others: Vec<(usize, u32)> = self.out[y]
                .iter()
                .filter(|(&t, _)| t != x)
                .map(|(&t, &p)| (t, p))
                .collect();
            for (x2, m2) in others {
                self.change(x, x2, m2 - m);
            }
            let sources: Vec<usize> = self.inc[x].iter().copied().filter(|&s| s != y).collect();
            for y2 in sources {
                let m2 = self.out[y2][&x];
                self.change(y2, y, m2 - m);
            }
            done[y] = true;
            done[x] = true;
        }
        let mut res = Vec::new();
        for (y, row) in self.out.iter().enumerate() {
            for (&x, &p) in row {
                res.push((p, y, x));
            }
        }
        res
    }

    pub(crate) fn unit_changes(&self) -> &[(usize, usize)] {
        &self.unit_changes
    }
}

/// A module map between free modules over the same generators, possibly
/// skew-linear (exchanging U and V in coefficients).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endomorphism {
    mode: Mode,
    skew: bool,
    shift: Grading,
    map: Vec<Chain>,
}

impl Endomorphism {
    pub fn zero(n: usize, mode: Mode, shift: Grading, skew: bool) -> Self {
        Endomorphism {
            mode,
            skew,
            shift,
            map: vec![Chain::new(); n],
        }
    }

    pub fn identity(n: usize, mode: Mode) -> Self {
        let mut e = Self::zero(n, mode, (0, 0), false);
        for i in 0..n {
            e.map[i].insert(i, RingElem::one(mode));
        }
        e
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn is_skew(&self) -> bool {
        self.skew
    }

    pub fn shift(&self) -> Grading {
        self.shift
    }

    pub fn image_of(&self, i: usize) -> &Chain {
        &self.map[i]
    }

    pub fn set_image(&mut self, i: usize, img: Chain) {
        self.map[i] = img;
    }

    pub fn add_to_image(&mut self, i: usize, tgt: usize, coeff: &RingElem) {
        add_to_chain(&mut self.map[i], tgt, coeff);
    }

    /// Apply to a chain, honoring skew-linearity.
    pub fn apply(&self, c: &Chain) -> Chain {
        let mut acc = Chain::new();
        for (&y, cy) in c {
            let k = if self.skew { cy.swap_uv() } else { cy.clone() };
            for (&x, e) in &self.map[y] {
                add_to_chain(&mut acc, x, &ring_mul(&k, e).expect("same mode"));
            }
        }
        acc
    }

    /// self after other.
    pub fn compose(&self, other: &Endomorphism) -> Endomorphism {
        let mut r = Endomorphism {
            mode: self.mode,
            skew: self.skew != other.skew,
            shift: if other.skew {
                (other.shift.0 + self.shift.1, other.shift.1 + self.shift.0)
            } else {
                (other.shift.0 + self.shift.0, other.shift.1 + self.shift.1)
            },
            map: Vec::with_capacity(self.len()),
        };
        for i in 0..other.len() {
            r.map.push(self.apply(&other.map[i]));
        }
        r
    }

    pub fn sum(&self, other: &Endomorphism) -> Endomorphism {
        let mut r = self.clone();
        for (i, img) in other.map.iter().enumerate() {
            r.map[i] = chain_sum(&r.map[i], img);
        }
        r
    }

    /// Check every entry against the declared grading shift.
    pub fn respects_grading(&self, c: &ChainComplex) -> bool {
        self.map.iter().enumerate().all(|(y, img)| {
            img.iter().all(|(&x, e)| {
                e.terms()
                    .all(|m| mono_respects(&c.gens[y], &c.gens[x], m, self.shift, self.skew))
            })
        })
    }

    /// d f = f d, on every generator.
    pub fn is_chain_map(&self, c: &ChainComplex) -> bool {
        (0..c.len()).all(|y| {
            let lhs = c.boundary(&self.map[y]);
            let rhs = self.apply(&c.out[y]);
            lhs == rhs
        })
    }
}

impl fmt::Display for ChainComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# mode {}", self.mode)?;
        for g in &self.gens {
            writeln!(f, "{} {} {}", g.id, g.gr_u, g.gr_v)?;
        }
        for (s, t, e) in self.arrows() {
            writeln!(f, "{} -> {} : {}", self.gens[s].id, self.gens[t].id, e)?;
        }
        Ok(())
    }
}

fn parse_mono(tok: &str) -> Result<Mono> {
    let bad = || Error::Parse(format!("bad monomial {tok:?}"));
    let mut u = 0;
    let mut v = 0;
    for part in tok.split_whitespace() {
        let (var, pow) = part.split_once('^').ok_or_else(bad)?;
        let pow: u32 = pow.parse().map_err(|_| bad())?;
        match var {
            "U" => u += pow,
            "V" => v += pow,
            _ => return Err(bad()),
        }
    }
    Ok(Mono::new(u, v))
}

impl FromStr for ChainComplex {
    type Err = Error;

    /// Parse the line format produced by `Display`. The mode line is optional
    /// and defaults to FULL.
    fn from_str(s: &str) -> Result<Self> {
        let mut mode = Mode::Full;
        let mut gens = Vec::new();
        let mut arrows = Vec::new();
        for (lineno, raw) in s.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let mut w = rest.split_whitespace();
                if w.next() == Some("mode") {
                    mode = match w.next() {
                        Some("FULL") => Mode::Full,
                        Some("UVZERO") => Mode::UvZero,
                        other => return Err(Error::Parse(format!("unknown mode {other:?}"))),
                    };
                }
                continue;
            }
            let bad = |what: &str| Error::Parse(format!("line {}: {what}: {raw:?}", lineno + 1));
            if let Some((lhs, rhs)) = line.split_once(':') {
                let (src, tgt) = lhs.split_once("->").ok_or_else(|| bad("missing ->"))?;
                let monos = rhs
                    .split('+')
                    .map(|t| parse_mono(t.trim()))
                    .collect::<Result<Vec<_>>>()?;
                arrows.push((src.trim().to_string(), tgt.trim().to_string(), monos));
            } else {
                let w: Vec<&str> = line.split_whitespace().collect();
                if w.len() != 3 {
                    return Err(bad("expected `id grU grV`"));
                }
                let gu = w[1].parse().map_err(|_| bad("grU"))?;
                let gv = w[2].parse().map_err(|_| bad("grV"))?;
                gens.push(Generator::new(w[0], gu, gv));
            }
        }
        let mut c = ChainComplex::new(mode, gens)?;
        for (src, tgt, monos) in arrows {
            let s = c
                .index_of(&src)
                .ok_or_else(|| Error::Parse(format!("unknown id {src}")))?;
            let t = c
                .index_of(&tgt)
                .ok_or_else(|| Error::Parse(format!("unknown id {tgt}")))?;
            c.add_entry(s, t, &RingElem::from_monos(monos, mode))?;
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t23() -> ChainComplex {
        let mut c = ChainComplex::new(
            Mode::UvZero,
            vec![
                Generator::new("x0", 0, -2),
                Generator::new("x1", -1, -1),
                Generator::new("x2", -2, 0),
            ],
        )
        .unwrap();
        c.add_mono(1, 0, Mono::new(1, 0)).unwrap();
        c.add_mono(1, 2, Mono::new(0, 1)).unwrap();
        c
    }

    #[test]
    fn staircase_is_valid() {
        assert_eq!(validate(&t23()), Ok(()));
        let mut c = t23();
        c.remove_entry(1, 2);
        assert_eq!(validate(&c), Ok(()));
    }

    #[test]
    fn bad_grading_is_reported() {
        let mut c = t23();
        c.add_mono(1, 2, Mono::new(0, 1)).unwrap();
        c.add_mono(1, 2, Mono::new(0, 2)).unwrap();
        assert!(matches!(validate(&c), Err(Violation::Grading { .. })));
    }

    #[test]
    fn cancel_pair() {
        let mut c = ChainComplex::new(
            Mode::Full,
            vec![Generator::new("a", 0, 0), Generator::new("b", 1, 1)],
        )
        .unwrap();
        c.add_mono(1, 0, Mono::ONE).unwrap();
        assert!(reduce(&c).is_empty());
    }

    #[test]
    fn dual_transposes() {
        let d = dual(&t23());
        assert_eq!(
            d.entry(0, 1).and_then(|e| e.as_mono()),
            Some(Mono::new(1, 0))
        );
        assert_eq!(
            d.entry(2, 1).and_then(|e| e.as_mono()),
            Some(Mono::new(0, 1))
        );
        assert_eq!(validate(&d), Ok(()));
        assert_eq!(dual(&d), t23());
    }

    #[test]
    fn vertical_homology_of_trefoil() {
        let h = vertical_homology(&t23()).unwrap();
        assert_eq!(
            h,
            VerticalHomology {
                free_a: -1,
                torsion: vec![1]
            }
        );
        let h = vertical_homology(&dual(&t23())).unwrap();
        assert_eq!(
            h,
            VerticalHomology {
                free_a: 1,
                torsion: vec![1]
            }
        );
    }

    #[test]
    fn text_round_trip() {
        let c = t23();
        let back: ChainComplex = c.to_string().parse().unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn quotient_kills_mixed() {
        let mut c = ChainComplex::new(
            Mode::Full,
            vec![Generator::new("a", 0, 0), Generator::new("b", 3, 3)],
        )
        .unwrap();
        c.add_mono(1, 0, Mono::new(1, 1)).unwrap();
        let q = quotient_uv(&c);
        assert_eq!(q.arrow_count(), 0);
        assert_eq!(quotient_uv(&q), q);
    }

    #[test]
    fn skew_identity_swap() {
        let c = t23();
        let mut iota = Endomorphism::zero(3, Mode::UvZero, (0, 0), true);
        for i in 0..3 {
            iota.add_to_image(i, 2 - i, &RingElem::one(Mode::UvZero));
        }
        assert!(iota.respects_grading(&c));
        assert!(iota.is_chain_map(&c));
        let sq = iota.compose(&iota);
        assert_eq!(sq, Endomorphism::identity(3, Mode::UvZero));
    }
}
