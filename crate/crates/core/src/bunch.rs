//! Simplification of reduced complexes over F2[U,V]/(UV) by a bunch-of-chains
//! matrix reduction.
//!
//! The horizontal (U) and vertical (V) parts are each put in Smith normal form
//! separately. Modulo (U,V) the two resulting bases differ by an invertible
//! matrix in each bigrading; that matrix is then reduced with the row and
//! column operations allowed by both normal forms. Matched (row, column) pairs
//! become generators of a basis in which every generator meets at most one
//! horizontal and one vertical arrow; what cannot be matched is a closed
//! component carrying an invertible local system (a band).

use std::collections::{BTreeMap, BTreeSet, HashMap};

use fixedbitset::FixedBitSet;

use crate::complex::{ChainComplex, Grading, Kind, PowerComplex};
use crate::error::{Error, Result};

type Bits = FixedBitSet;

fn unit(k: usize, i: usize) -> Bits {
    let mut b = Bits::with_capacity(k);
    b.insert(i);
    b
}

fn top(b: &Bits) -> Option<usize> {
    b.ones().last()
}

fn xor(a: &mut Bits, b: &Bits) {
    a.symmetric_difference_with(b);
}

fn fail(msg: &str) -> Error {
    Error::NotKnotLike(msg.to_string())
}

/// Position of a generator in the Smith normal form of one arrow kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Role {
    Source { power: u32, partner: usize },
    Target { power: u32, partner: usize },
    Free,
}

impl Role {
    fn rank_key(self) -> (u8, i64) {
        match self {
            Role::Source { power, .. } => (0, power as i64),
            Role::Free => (1, 0),
            Role::Target { power, .. } => (2, -(power as i64)),
        }
    }
}

/// Smith normal form of one arrow kind, plus the unit part of the basis change
/// written in the original generators.
fn snf_track(c: &ChainComplex, kind: Kind) -> (Vec<Role>, Vec<Bits>) {
    let n = c.len();
    let mut pc = PowerComplex::from_complex(c, kind);
    let mut roles = vec![Role::Free; n];
    for (power, y, x) in pc.snf() {
        roles[y] = Role::Source { power, partner: x };
        roles[x] = Role::Target { power, partner: y };
    }
    let mut basis: Vec<Bits> = (0..n).map(|g| unit(n, g)).collect();
    for &(x, x2) in pc.unit_changes() {
        let add = basis[x2].clone();
        xor(&mut basis[x], &add);
    }
    (roles, basis)
}

/// Coefficients expressing `v` in the given basis, or `None` if it is not in the span.
fn solve_in_basis(basis: &[Bits], v: &Bits, k: usize) -> Option<Bits> {
    let mut piv: Vec<(Bits, Bits, usize)> = Vec::new();
    for (i, b) in basis.iter().enumerate() {
        let mut row = b.clone();
        let mut comb = unit(basis.len(), i);
        for (pv, pc, pb) in &piv {
            if row.contains(*pb) {
                xor(&mut row, pv);
                xor(&mut comb, pc);
            }
        }
        let pb = top(&row)?;
        piv.push((row, comb, pb));
    }
    let mut x = v.clone();
    x.grow(k);
    let mut comb = Bits::with_capacity(basis.len());
    for (pv, pc, pb) in &piv {
        if x.contains(*pb) {
            xor(&mut x, pv);
            xor(&mut comb, pc);
        }
    }
    if x.ones().next().is_some() {
        return None;
    }
    Some(comb)
}

/// Solve A x = v over F2 where `rows[i]` lists the nonzero columns of row i.
fn solve_square(rows: &[Bits], v: &Bits) -> Option<Bits> {
    let n = rows.len();
    let mut piv: Vec<(Bits, bool, usize)> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut r = r.clone();
        let mut b = v.contains(i);
        for (pr, pb, pc) in &piv {
            if r.contains(*pc) {
                xor(&mut r, pr);
                b ^= pb;
            }
        }
        let pc = top(&r)?;
        piv.push((r, b, pc));
    }
    piv.sort_by_key(|t| t.2);
    let mut x = Bits::with_capacity(n);
    for (pr, pb, pc) in &piv {
        let mut val = *pb;
        for j in pr.ones() {
            if j != *pc && x.contains(j) {
                val = !val;
            }
        }
        if val {
            x.insert(*pc);
        }
    }
    Some(x)
}

/// Inverse of a square F2 matrix given by rows.
fn invert(rows: &[Bits]) -> Option<Vec<Bits>> {
    let n = rows.len();
    let mut m: Vec<(Bits, Bits)> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.grow(n);
            (r, unit(n, i))
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| m[r].0.contains(c))?;
        m.swap(c, p);
        let (pr, pi) = m[c].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != c && row.0.contains(c) {
                xor(&mut row.0, &pr);
                xor(&mut row.1, &pi);
            }
        }
    }
    Some(m.into_iter().map(|(_, inv)| inv).collect())
}

/// Matrix acting on column vectors: `cols[j]` is the image of basis vector j.
fn apply(cols: &[Bits], v: &Bits, k: usize) -> Bits {
    let mut r = Bits::with_capacity(k);
    for j in v.ones() {
        xor(&mut r, &cols[j]);
    }
    r
}

fn power(cols: &[Bits], j: usize, k: usize) -> Vec<Bits> {
    let mut p: Vec<Bits> = (0..k).map(|i| unit(k, i)).collect();
    for _ in 0..j {
        p = p.iter().map(|v| apply(cols, v, k)).collect();
    }
    p
}

fn reduce_against(piv: &BTreeMap<usize, Bits>, x: &Bits) -> Bits {
    let mut x = x.clone();
    for (b, p) in piv.iter().rev() {
        if x.contains(*b) {
            xor(&mut x, p);
        }
    }
    x
}

fn add_pivot(piv: &mut BTreeMap<usize, Bits>, x: &Bits) -> bool {
    let x = reduce_against(piv, x);
    let Some(b) = top(&x) else { return false };
    for p in piv.values_mut() {
        if p.contains(b) {
            xor(p, &x);
        }
    }
    piv.insert(b, x);
    true
}

fn span_basis(vs: &[Bits]) -> Vec<Bits> {
    let mut piv = BTreeMap::new();
    vs.iter()
        .filter(|v| add_pivot(&mut piv, v))
        .cloned()
        .collect()
}

fn kernel(cols: &[Bits], k: usize) -> Vec<Bits> {
    let mut piv: BTreeMap<usize, (Bits, Bits)> = BTreeMap::new();
    let mut ker = Vec::new();
    for (j, img) in cols.iter().enumerate() {
        let mut x = img.clone();
        x.grow(k);
        let mut c = unit(k, j);
        for (b, (pv, pc)) in piv.iter().rev() {
            if x.contains(*b) {
                xor(&mut x, pv);
                xor(&mut c, pc);
            }
        }
        match top(&x) {
            Some(b) => {
                piv.insert(b, (x, c));
            }
            None => ker.push(c),
        }
    }
    ker
}

/// Fitting decomposition of an endomorphism: a basis of the invertible part and
/// Jordan chains `[top, T top, ..., bottom]` spanning the nilpotent part.
fn jordan(cols: &[Bits], k: usize) -> Result<(Vec<Bits>, Vec<Vec<Bits>>)> {
    let tk = power(cols, k, k);
    let invertible = span_basis(&tk);
    let nil = kernel(&tk, k);
    let depth = |v: &Bits| {
        let mut v = v.clone();
        let mut d = 0;
        while v.ones().next().is_some() {
            v = apply(cols, &v, k);
            d += 1;
        }
        d
    };
    let maxd = nil.iter().map(depth).max().unwrap_or(0);
    let mut chains: Vec<Vec<Bits>> = Vec::new();
    for d in (1..=maxd).rev() {
        let kd = kernel(&power(cols, d, k), k);
        let kd1 = kernel(&power(cols, d - 1, k), k);
        let mut piv = BTreeMap::new();
        for v in &kd1 {
            add_pivot(&mut piv, v);
        }
        for ch in &chains {
            for (idx, v) in ch.iter().enumerate() {
                if ch.len() - idx <= d {
                    add_pivot(&mut piv, v);
                }
            }
        }
        for v in &kd {
            if add_pivot(&mut piv, v) {
                let mut ch = vec![v.clone()];
                let mut x = apply(cols, v, k);
                while x.ones().next().is_some() {
                    ch.push(x.clone());
                    x = apply(cols, &x, k);
                }
                if ch.len() != d {
                    return Err(fail("inconsistent Jordan chain"));
                }
                for y in &ch[1..] {
                    add_pivot(&mut piv, y);
                }
                chains.push(ch);
            }
        }
    }
    Ok((invertible, chains))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Side {
    Row,
    Col,
}

#[derive(Clone, Debug)]
struct Block {
    w: Grading,
    side: Side,
    labels: Vec<usize>,
    cls: usize,
}

/// A closed component with an invertible local system `a` (rows of the matrix
/// pairing `rows` with `cols`).
#[derive(Clone, Debug)]
pub(crate) struct Band {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub a: Vec<Bits>,
}

pub(crate) struct Reduction {
    pub h_roles: Vec<Role>,
    pub v_roles: Vec<Role>,
    /// Matched (row label, column label) pairs.
    pub nodes: Vec<(usize, usize)>,
    pub bands: Vec<Band>,
}

struct State {
    m: BTreeMap<Grading, BTreeMap<usize, BTreeSet<usize>>>,
    blocks: Vec<Block>,
    classes: Vec<Vec<usize>>,
    chains: HashMap<(Grading, Side), Vec<usize>>,
    nodes: Vec<(usize, usize)>,
    bands: Vec<Band>,
}

impl State {
    fn row(&self, w: Grading, r: usize) -> Option<&BTreeSet<usize>> {
        self.m.get(&w).and_then(|mw| mw.get(&r))
    }

    fn has(&self, w: Grading, r: usize, c: usize) -> bool {
        self.row(w, r).is_some_and(|s| s.contains(&c))
    }

    /// row q += row p
    fn rowop(&mut self, w: Grading, q: usize, p: usize) {
        let Some(mw) = self.m.get_mut(&w) else { return };
        let Some(src) = mw.get(&p).cloned() else {
            return;
        };
        if let Some(dst) = mw.get_mut(&q) {
            for c in src {
                if !dst.remove(&c) {
                    dst.insert(c);
                }
            }
        }
    }

    /// col p += col q
    fn colop(&mut self, w: Grading, p: usize, q: usize) {
        let Some(mw) = self.m.get_mut(&w) else { return };
        for s in mw.values_mut() {
            if s.contains(&q) && !s.remove(&p) {
                s.insert(p);
            }
        }
    }

    /// Basis change e_i -> e_i + e_j applied to every block of a class.
    fn clsop(&mut self, cl: usize, i: usize, j: usize) {
        for b in self.classes[cl].clone() {
            let (w, side, li, lj) = {
                let blk = &self.blocks[b];
                (blk.w, blk.side, blk.labels[i], blk.labels[j])
            };
            match side {
                Side::Row => self.rowop(w, lj, li),
                Side::Col => self.colop(w, li, lj),
            }
        }
    }

    fn clsswap(&mut self, cl: usize, i: usize, j: usize) {
        for b in self.classes[cl].clone() {
            self.blocks[b].labels.swap(i, j);
        }
    }

    /// Change the class basis so that new e_i = sum_j g[i]_j e_j.
    fn cls_basis_change(&mut self, cl: usize, g: &[Bits], k: usize) -> Result<()> {
        let mut g = g.to_vec();
        let mut ops = Vec::new();
        for t in 0..k {
            let p = (t..k)
                .find(|&i| g[i].contains(t))
                .ok_or_else(|| fail("singular basis change"))?;
            if p != t {
                g.swap(p, t);
                ops.push((true, p, t));
            }
            let gt = g[t].clone();
            for (i, gi) in g.iter_mut().enumerate() {
                if i != t && gi.contains(t) {
                    xor(gi, &gt);
                    ops.push((false, i, t));
                }
            }
        }
        for &(swap, a, b) in ops.iter().rev() {
            if swap {
                self.clsswap(cl, a, b);
            } else {
                self.clsop(cl, a, b);
            }
        }
        Ok(())
    }

    fn replace_in_chain(&mut self, b: usize, new: Vec<usize>) {
        let key = (self.blocks[b].w, self.blocks[b].side);
        let ch = self.chains.get_mut(&key).expect("chain exists");
        if let Some(idx) = ch.iter().position(|&x| x == b) {
            ch.splice(idx..idx + 1, new);
        }
    }

    fn new_block(&mut self, w: Grading, side: Side, labels: Vec<usize>, cls: usize) -> usize {
        self.blocks.push(Block {
            w,
            side,
            labels,
            cls,
        });
        let id = self.blocks.len() - 1;
        self.classes[cls].push(id);
        id
    }

    fn new_class(&mut self) -> usize {
        self.classes.push(Vec::new());
        self.classes.len() - 1
    }

    fn match_pair(&mut self, w: Grading, r: usize, c: usize) {
        self.nodes.push((r, c));
        if let Some(mw) = self.m.get_mut(&w) {
            mw.remove(&r);
        }
    }

    /// Clear row r and column c apart from their common entry.
    fn clear_outside(&mut self, w: Grading, r: usize, c: usize) {
        let cols: Vec<usize> = self
            .row(w, r)
            .map(|s| s.iter().copied().collect())
            .unwrap_or_default();
        for c2 in cols {
            if c2 != c {
                self.colop(w, c2, c);
            }
        }
        let rows: Vec<usize> = self.m[&w].keys().copied().collect();
        for r2 in rows {
            if r2 != r && self.has(w, r2, c) {
                self.rowop(w, r2, r);
            }
        }
    }

    fn live_chain(&mut self, w: Grading, side: Side) -> Vec<usize> {
        let blocks = &self.blocks;
        let ch = self.chains.get_mut(&(w, side)).expect("chain exists");
        ch.retain(|&b| !blocks[b].labels.is_empty());
        ch.clone()
    }

    /// Pivot cells of bigrading w: a row block and the column block holding its
    /// extreme entries, where the row block is also extreme for that column block.
    fn cells(&mut self, w: Grading) -> Vec<(usize, usize)> {
        let rch = self.live_chain(w, Side::Row);
        let cch = self.live_chain(w, Side::Col);
        let mut out = Vec::new();
        for &rb in &rch {
            let mut rset = BTreeSet::new();
            for &r in &self.blocks[rb].labels {
                if let Some(s) = self.row(w, r) {
                    rset.extend(s.iter().copied());
                }
            }
            let Some(&kb) = cch
                .iter()
                .rev()
                .find(|&&b| self.blocks[b].labels.iter().any(|c| rset.contains(c)))
            else {
                continue;
            };
            let kset: BTreeSet<usize> = self.blocks[kb].labels.iter().copied().collect();
            let lowest = rch.iter().find(|&&b| {
                self.blocks[b]
                    .labels
                    .iter()
                    .any(|&r| self.row(w, r).is_some_and(|s| !s.is_disjoint(&kset)))
            });
            if lowest == Some(&rb) {
                out.push((rb, kb));
            }
        }
        out
    }

    /// Split every block of a class after its first `rk` labels. Returns the
    /// class of the leading parts and the map old block -> leading part.
    fn split(&mut self, cl: usize, rk: usize, lead_last: bool) -> (usize, HashMap<usize, usize>) {
        let lead = self.new_class();
        let rest = self.new_class();
        let mut map = HashMap::new();
        for b in self.classes[cl].clone() {
            let (w, side, labels) = {
                let blk = &self.blocks[b];
                (blk.w, blk.side, blk.labels.clone())
            };
            let b1 = self.new_block(w, side, labels[..rk].to_vec(), lead);
            let b2 = self.new_block(w, side, labels[rk..].to_vec(), rest);
            self.replace_in_chain(
                b,
                if lead_last {
                    vec![b2, b1]
                } else {
                    vec![b1, b2]
                },
            );
            self.blocks[b].labels.clear();
            map.insert(b, b1);
        }
        (lead, map)
    }

    fn ordinary_cell(&mut self, w: Grading, rb: usize, kb: usize) -> Result<()> {
        let rcl = self.blocks[rb].cls;
        let kcl = self.blocks[kb].cls;
        let mut t = 0;
        loop {
            let (nr, nk) = (self.blocks[rb].labels.len(), self.blocks[kb].labels.len());
            let mut found = None;
            'outer: for i in t..nr {
                for j in t..nk {
                    if self.has(w, self.blocks[rb].labels[i], self.blocks[kb].labels[j]) {
                        found = Some((i, j));
                        break 'outer;
                    }
                }
            }
            let Some((i, j)) = found else { break };
            if i != t {
                self.clsswap(rcl, i, t);
            }
            if j != t {
                self.clsswap(kcl, j, t);
            }
            let kc = self.blocks[kb].labels[t];
            for i2 in 0..nr {
                if i2 != t && self.has(w, self.blocks[rb].labels[i2], kc) {
                    self.clsop(rcl, t, i2);
                }
            }
            let rr = self.blocks[rb].labels[t];
            for j2 in 0..nk {
                if j2 != t && self.has(w, rr, self.blocks[kb].labels[j2]) {
                    self.clsop(kcl, j2, t);
                }
            }
            t += 1;
        }
        let rk = t;
        if rk == 0 {
            return Err(fail("empty pivot cell"));
        }
        for i in 0..rk {
            let (r, c) = (self.blocks[rb].labels[i], self.blocks[kb].labels[i]);
            self.clear_outside(w, r, c);
        }
        let (mr, rmap) = self.split(rcl, rk, true);
        let (mk, kmap) = self.split(kcl, rk, false);
        let r1 = rmap[&rb];
        let k1 = kmap[&kb];
        for i in 0..rk {
            let (r, c) = (self.blocks[r1].labels[i], self.blocks[k1].labels[i]);
            self.match_pair(w, r, c);
        }
        let merged = self.new_class();
        let members: Vec<usize> = self.classes[mr]
            .iter()
            .chain(self.classes[mk].iter())
            .copied()
            .filter(|&b| b != r1 && b != k1)
            .collect();
        for &b in &members {
            self.blocks[b].cls = merged;
        }
        self.classes[merged] = members;
        self.blocks[r1].labels.clear();
        self.blocks[k1].labels.clear();
        Ok(())
    }

    /// A cell whose row and column blocks share one class: the cell matrix is an
    /// endomorphism of the class space, split into invertible and nilpotent parts.
    fn linked_cell(&mut self, w: Grading, rb: usize, kb: usize) -> Result<()> {
        let cl = self.blocks[rb].cls;
        let k = self.blocks[rb].labels.len();
        if self.classes[cl].len() != 2 || self.blocks[kb].labels.len() != k {
            return Err(fail("malformed linked cell"));
        }
        let cell_cols = |st: &State| -> Vec<Bits> {
            let (rl, kl) = (&st.blocks[rb].labels, &st.blocks[kb].labels);
            (0..k)
                .map(|j| {
                    let mut col = Bits::with_capacity(k);
                    for (i, &r) in rl.iter().enumerate() {
                        if st.has(w, r, kl[j]) {
                            col.insert(i);
                        }
                    }
                    col
                })
                .collect()
        };
        let tc = cell_cols(self);
        let (eb, jch) = jordan(&tc, k)?;
        let mut newbasis = eb.clone();
        for ch in &jch {
            newbasis.extend(ch.iter().rev().cloned());
        }
        if newbasis.len() != k {
            return Err(fail("incomplete Jordan basis"));
        }
        self.cls_basis_change(cl, &newbasis, k)?;
        let e = eb.len();
        let rl = self.blocks[rb].labels.clone();
        let kl = self.blocks[kb].labels.clone();
        if e > 0 {
            let rbnd = rl[..e].to_vec();
            let kbnd = kl[..e].to_vec();
            let arows: Vec<Bits> = rbnd
                .iter()
                .map(|&r| {
                    let mut b = Bits::with_capacity(e);
                    for (j, &c) in kbnd.iter().enumerate() {
                        if self.has(w, r, c) {
                            b.insert(j);
                        }
                    }
                    b
                })
                .collect();
            let acols: Vec<Bits> = (0..e)
                .map(|j| {
                    let mut b = Bits::with_capacity(e);
                    for (i, row) in arows.iter().enumerate() {
                        if row.contains(j) {
                            b.insert(i);
                        }
                    }
                    b
                })
                .collect();
            let kset: BTreeSet<usize> = kbnd.iter().copied().collect();
            let mut extra = BTreeSet::new();
            for &r in &rbnd {
                if let Some(s) = self.row(w, r) {
                    extra.extend(s.iter().copied().filter(|c| !kset.contains(c)));
                }
            }
            for c in extra {
                let mut v = Bits::with_capacity(e);
                for (i, &r) in rbnd.iter().enumerate() {
                    if self.has(w, r, c) {
                        v.insert(i);
                    }
                }
                let x = solve_square(&arows, &v).ok_or_else(|| fail("singular band"))?;
                for j in x.ones() {
                    self.colop(w, c, kbnd[j]);
                }
            }
            let rset: BTreeSet<usize> = rbnd.iter().copied().collect();
            let rows: Vec<usize> = self.m[&w]
                .keys()
                .copied()
                .filter(|r| !rset.contains(r))
                .collect();
            for r2 in rows {
                let mut v = Bits::with_capacity(e);
                for (j, &c) in kbnd.iter().enumerate() {
                    if self.has(w, r2, c) {
                        v.insert(j);
                    }
                }
                if v.ones().next().is_some() {
                    let y = solve_square(&acols, &v).ok_or_else(|| fail("singular band"))?;
                    for i in y.ones() {
                        self.rowop(w, r2, rbnd[i]);
                    }
                }
            }
            self.bands.push(Band {
                rows: rbnd,
                cols: kbnd,
                a: arows,
            });
        }
        let mut pos = e;
        let mut tops: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut bots: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for ch in &jch {
            let s = ch.len();
            for i in 0..s - 1 {
                let (r, c) = (rl[pos + i], kl[pos + i + 1]);
                if !self.has(w, r, c) {
                    return Err(fail("Jordan chain entry missing"));
                }
                self.clear_outside(w, r, c);
            }
            for i in 0..s - 1 {
                self.match_pair(w, rl[pos + i], kl[pos + i + 1]);
            }
            tops.entry(s).or_default().push(rl[pos + s - 1]);
            bots.entry(s).or_default().push(kl[pos]);
            pos += s;
        }
        if let Some(mw) = self.m.get_mut(&w) {
            for r in &rl[..e] {
                mw.remove(r);
            }
        }
        let mut new_rows = Vec::new();
        let mut col_of_size = BTreeMap::new();
        for (&s, t) in tops.iter().rev() {
            let cl2 = self.new_class();
            let br = self.new_block(w, Side::Row, t.clone(), cl2);
            let bk = self.new_block(w, Side::Col, bots[&s].clone(), cl2);
            new_rows.push(br);
            col_of_size.insert(s, bk);
        }
        let new_cols: Vec<usize> = col_of_size.values().copied().collect();
        self.replace_in_chain(rb, new_rows);
        self.replace_in_chain(kb, new_cols);
        self.blocks[rb].labels.clear();
        self.blocks[kb].labels.clear();
        Ok(())
    }
}

/// Run the reduction on a reduced complex over F2[U,V]/(UV).
pub(crate) fn bunch_reduce(c: &ChainComplex, cap: usize) -> Result<Reduction> {
    let (h_roles, bh) = snf_track(c, Kind::U);
    let (v_roles, bv) = snf_track(c, Kind::V);
    let mut byw: BTreeMap<Grading, Vec<usize>> = BTreeMap::new();
    for (g, gen) in c.gens().iter().enumerate() {
        byw.entry(gen.grading()).or_default().push(g);
    }
    let mut st = State {
        m: BTreeMap::new(),
        blocks: Vec::new(),
        classes: Vec::new(),
        chains: HashMap::new(),
        nodes: Vec::new(),
        bands: Vec::new(),
    };
    for (&w, gs) in &byw {
        let k = gs.len();
        let pos: HashMap<usize, usize> = gs.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let localize = |b: &Bits| -> Result<Bits> {
            let mut l = Bits::with_capacity(k);
            for g in b.ones() {
                l.insert(
                    *pos.get(&g)
                        .ok_or_else(|| fail("basis change leaves its grading"))?,
                );
            }
            Ok(l)
        };
        let hb: Vec<Bits> = gs
            .iter()
            .map(|&g| localize(&bh[g]))
            .collect::<Result<_>>()?;
        let mut mw: BTreeMap<usize, BTreeSet<usize>> =
            gs.iter().map(|&r| (r, BTreeSet::new())).collect();
        for &col in gs {
            let coef = solve_in_basis(&hb, &localize(&bv[col])?, k)
                .ok_or_else(|| fail("singular basis change"))?;
            for i in coef.ones() {
                mw.get_mut(&gs[i]).expect("row").insert(col);
            }
        }
        st.m.insert(w, mw);
    }
    for (side, roles) in [(Side::Row, &h_roles), (Side::Col, &v_roles)] {
        let mut by_key: HashMap<(Grading, (u8, i64)), usize> = HashMap::new();
        for (&w, gs) in &byw {
            let mut groups: BTreeMap<(u8, i64), Vec<usize>> = BTreeMap::new();
            for &g in gs {
                groups.entry(roles[g].rank_key()).or_default().push(g);
            }
            let mut ch = Vec::new();
            for (key, labels) in groups {
                st.blocks.push(Block {
                    w,
                    side,
                    labels,
                    cls: usize::MAX,
                });
                let id = st.blocks.len() - 1;
                ch.push(id);
                by_key.insert((w, key), id);
            }
            st.chains.insert((w, side), ch);
        }
        let mut keys: Vec<_> = by_key.keys().copied().collect();
        keys.sort();
        for (w, key) in keys {
            let b = by_key[&(w, key)];
            match key.0 {
                0 => {
                    let partners: Vec<usize> = st.blocks[b]
                        .labels
                        .iter()
                        .map(|&g| match roles[g] {
                            Role::Source { partner, .. } => partner,
                            _ => unreachable!("source block"),
                        })
                        .collect();
                    let pw = c.gen(partners[0]).grading();
                    let pb = *by_key
                        .get(&(pw, (2, -key.1)))
                        .ok_or_else(|| fail("unpaired block"))?;
                    let mut a = st.blocks[pb].labels.clone();
                    let mut bsorted = partners.clone();
                    a.sort_unstable();
                    bsorted.sort_unstable();
                    if a != bsorted {
                        return Err(fail("source and target blocks disagree"));
                    }
                    st.blocks[pb].labels = partners;
                    st.classes.push(vec![b, pb]);
                    let cl = st.classes.len() - 1;
                    st.blocks[b].cls = cl;
                    st.blocks[pb].cls = cl;
                }
                1 => {
                    st.classes.push(vec![b]);
                    st.blocks[b].cls = st.classes.len() - 1;
                }
                _ => {}
            }
        }
    }
    let work: Vec<Grading> = byw.keys().copied().collect();
    let mut iters = 0;
    loop {
        iters += 1;
        if iters > cap {
            return Err(fail("iteration cap exceeded"));
        }
        let mut pick = None;
        let mut first = None;
        for &w in &work {
            let cs = st.cells(w);
            if first.is_none() {
                first = cs.first().map(|&(r, k)| (w, r, k));
            }
            if let Some(&(r, k)) = cs
                .iter()
                .find(|(r, k)| st.blocks[*r].cls != st.blocks[*k].cls)
            {
                pick = Some((w, r, k));
                break;
            }
        }
        match (pick, first) {
            (Some((w, r, k)), _) => st.ordinary_cell(w, r, k)?,
            (None, Some((w, r, k))) => st.linked_cell(w, r, k)?,
            (None, None) => break,
        }
    }
    if st.m.values().any(|mw| !mw.is_empty()) {
        return Err(fail("unmatched rows remain"));
    }
    Ok(Reduction {
        h_roles,
        v_roles,
        nodes: st.nodes,
        bands: st.bands,
    })
}

/// Inverse of the band matrix, as rows.
pub(crate) fn band_inverse(b: &Band) -> Result<Vec<Bits>> {
    invert(&b.a).ok_or_else(|| fail("singular band"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_rows(rows: &[&[usize]], n: usize) -> Vec<Bits> {
        rows.iter()
            .map(|r| {
                let mut b = Bits::with_capacity(n);
                for &i in *r {
                    b.insert(i);
                }
                b
            })
            .collect()
    }

    #[test]
    fn solve_and_invert() {
        let a = from_rows(&[&[0, 1], &[1]], 2);
        let inv = invert(&a).unwrap();
        assert_eq!(inv, from_rows(&[&[0, 1], &[1]], 2));
        let mut v = Bits::with_capacity(2);
        v.insert(0);
        let x = solve_square(&a, &v).unwrap();
        assert_eq!(x.ones().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn jordan_of_nilpotent_shift() {
        // e0 -> 0, e1 -> e0, e2 -> e1
        let cols = from_rows(&[&[], &[0], &[1]], 3);
        let (inv, chains) = jordan(&cols, 3).unwrap();
        assert!(inv.is_empty());
        assert_eq!(chains.len(), 1);
        assert_eq!(chains[0].len(), 3);
    }

    #[test]
    fn jordan_mixed() {
        // identity on e0, zero on e1
        let cols = from_rows(&[&[0], &[]], 2);
        let (inv, chains) = jordan(&cols, 2).unwrap();
        assert_eq!(inv.len(), 1);
        assert_eq!(chains.len(), 1);
        assert_eq!(chains[0].len(), 1);
    }
}
