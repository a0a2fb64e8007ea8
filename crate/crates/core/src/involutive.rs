//! Involutions on standard complexes and their tensor products, and exact
//! checks of the X/Y/Z basis identities for K # T(2,q).

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::algebra::{Mode, Mono, RingElem};
use crate::complex::{add_to_chain, tensor, Chain, ChainComplex, Endomorphism, Grading};
use crate::error::{Error, Result};
use crate::knots::{insert_t2_run, unit_staircase_half};
use crate::standard::{decompose, seq_to_complex_in, ParamSeq};

/// A complex with a skew-linear involution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IotaData {
    pub complex: ChainComplex,
    pub iota: Endomorphism,
}

fn single(idx: usize, mode: Mode) -> Chain {
    let mut c = Chain::new();
    c.insert(idx, RingElem::one(mode));
    c
}

/// The reflection x_i <-> x_{2n-i} of a staircase whose generators are listed
/// in path order.
pub fn basic_involution(c: &ChainComplex) -> Result<IotaData> {
    let uv = crate::complex::quotient_uv(c);
    let seq = decompose(&uv)?.seq;
    if !seq.is_staircase() {
        return Err(Error::NotStaircase(format!("{seq}")));
    }
    let model = seq_to_complex_in(&seq, c.mode())?;
    let same_arrows =
        c.len() == model.len() && (0..c.len()).all(|i| c.boundary_of(i) == model.boundary_of(i));
    if !same_arrows {
        return Err(Error::NotStaircase(
            "generators are not listed in path order".into(),
        ));
    }
    let n = c.len();
    let shift = reflected_shift(c, 0, n - 1);
    let mut iota = Endomorphism::zero(n, c.mode(), shift, true);
    for i in 0..n {
        iota.set_image(i, single(n - 1 - i, c.mode()));
    }
    if !iota.is_chain_map(c) || !iota.respects_grading(c) {
        return Err(Error::Precondition(
            "reflection is not a graded chain map".into(),
        ));
    }
    Ok(IotaData {
        complex: c.clone(),
        iota,
    })
}

/// Involution of the staircase complex of `s` over `mode`.
pub fn staircase_involution(s: &ParamSeq, mode: Mode) -> Result<IotaData> {
    basic_involution(&seq_to_complex_in(s, mode)?)
}

fn reflected_shift(c: &ChainComplex, from: usize, to: usize) -> Grading {
    let (a, b) = (c.gen(from), c.gen(to));
    (b.gr_u - a.gr_v, b.gr_v - a.gr_u)
}

/// Formal U- and V-derivatives of the differential, mod 2.
pub fn phi_psi(c: &ChainComplex) -> (Endomorphism, Endomorphism) {
    let n = c.len();
    let mut phi = Endomorphism::zero(n, c.mode(), (1, -1), false);
    let mut psi = Endomorphism::zero(n, c.mode(), (-1, 1), false);
    for (s, t, e) in c.arrows() {
        let du = e.d_du();
        if !du.is_zero() {
            phi.add_to_image(s, t, &du);
        }
        let dv = e.d_dv();
        if !dv.is_zero() {
            psi.add_to_image(s, t, &dv);
        }
    }
    (phi, psi)
}

/// f ⊗ g on the tensor product indexed as `i * n2 + j`.
fn tensor_map(f: &Endomorphism, g: &Endomorphism, mode: Mode) -> Result<Endomorphism> {
    if f.is_skew() != g.is_skew() {
        return Err(Error::Precondition(
            "cannot tensor a skew map with a linear one".into(),
        ));
    }
    let (n1, n2) = (f.len(), g.len());
    let shift = (f.shift().0 + g.shift().0, f.shift().1 + g.shift().1);
    let mut out = Endomorphism::zero(n1 * n2, mode, shift, f.is_skew());
    for i in 0..n1 {
        for j in 0..n2 {
            let mut img = Chain::new();
            for (&a, ca) in f.image_of(i) {
                for (&b, cb) in g.image_of(j) {
                    add_to_chain(&mut img, a * n2 + b, &crate::algebra::ring_mul(ca, cb)?);
                }
            }
            out.set_image(i * n2 + j, img);
        }
    }
    Ok(out)
}

/// Which correction term accompanies ι₁ ⊗ ι₂.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Correction {
    /// (1 + Φ₁ ⊗ Ψ₂)(ι₁ ⊗ ι₂)
    PhiPsi,
    /// (1 + Ψ₁ ⊗ Φ₂)(ι₁ ⊗ ι₂)
    PsiPhi,
}

/// The involution (1 + Φ₁ ⊗ Ψ₂)(ι₁ ⊗ ι₂) on the tensor product.
pub fn tensor_involution(d1: &IotaData, d2: &IotaData) -> Result<IotaData> {
    tensor_involution_with(d1, d2, Correction::PhiPsi)
}

pub fn tensor_involution_with(d1: &IotaData, d2: &IotaData, corr: Correction) -> Result<IotaData> {
    let complex = tensor(&d1.complex, &d2.complex)?;
    let mode = complex.mode();
    let base = tensor_map(&d1.iota, &d2.iota, mode)?;
    let (phi1, psi1) = phi_psi(&d1.complex);
    let (phi2, psi2) = phi_psi(&d2.complex);
    let fix = match corr {
        Correction::PhiPsi => tensor_map(&phi1, &psi2, mode)?,
        Correction::PsiPhi => tensor_map(&psi1, &phi2, mode)?,
    };
    let iota = base.sum(&fix.compose(&base));
    if !iota.is_chain_map(&complex) {
        return Err(Error::Precondition(
            "tensor involution is not a chain map".into(),
        ));
    }
    Ok(IotaData { complex, iota })
}

/// How the integer coefficients β and 2β in the displayed basis elements are read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoefficientRule {
    /// Reduce mod 2 (the ground field is F2).
    Mod2,
    /// Keep any nonzero integer as 1. Wrong on purpose; used for mutation checks.
    NonzeroIsOne,
}

impl CoefficientRule {
    fn present(self, c: i64) -> bool {
        match self {
            CoefficientRule::Mod2 => c % 2 != 0,
            CoefficientRule::NonzeroIsOne => c != 0,
        }
    }
}

/// Four basis elements spanning a square, in the order
/// (corner, U-neighbour, V-neighbour, opposite corner) for Y and Z, and
/// (corner, V-neighbour, U-neighbour, opposite corner) for Y' and Z'.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Square {
    pub i: usize,
    pub j: usize,
    pub beta: u32,
    pub elems: [Chain; 4],
}

/// The X/Y/Z/Y'/Z' basis of CFK(K # T(2,q)).
#[derive(Clone, Debug)]
pub struct BasisFamily {
    pub n: usize,
    pub k: usize,
    pub rule: CoefficientRule,
    pub setup: IotaData,
    /// The same complex with the other correction term.
    pub iota_back: Endomorphism,
    pub x: Vec<usize>,
    pub y: Vec<Square>,
    pub y_prime: Vec<Square>,
    pub z: Vec<Square>,
    pub z_prime: Vec<Square>,
    /// Expected backward images of Y' (these carry the 2β term).
    pub y_prime_images: Vec<[Chain; 4]>,
}

struct Idx {
    big_n: usize,
    big_m: usize,
    mode: Mode,
}

impl Idx {
    fn x(&self, m: usize) -> usize {
        m
    }
    fn xp(&self, m: usize) -> usize {
        self.big_n - m
    }
    fn y(&self, j: usize) -> usize {
        j
    }
    fn yp(&self, j: usize) -> usize {
        self.big_m - j
    }
    fn gen(&self, a: usize, b: usize) -> usize {
        a * (self.big_m + 1) + b
    }
    fn chain(&self, terms: &[(Mono, usize, usize, bool)]) -> Chain {
        let mut c = Chain::new();
        for &(m, a, b, on) in terms {
            if on {
                add_to_chain(&mut c, self.gen(a, b), &RingElem::mono(m, self.mode));
            }
        }
        c
    }
}

fn label(idx: &Idx, n: usize, k: usize, g: usize) -> String {
    let (a, b) = (g / (idx.big_m + 1), g % (idx.big_m + 1));
    let xs = if a <= 2 * n {
        format!("x{a}")
    } else {
        format!("x'{}", idx.big_n - a)
    };
    let ys = if b <= k {
        format!("y{b}")
    } else {
        format!("y'{}", idx.big_m - b)
    };
    format!("{xs}{ys}")
}

/// Build the basis for K # T(2,q), K given by a sequence of the shape
/// (1, b_1, ..., 1, b_n, -b_n, -1, ..., -b_1, -1) and q odd, q > 2.
pub fn build_xyz_basis(s: &ParamSeq, q: i64, rule: CoefficientRule) -> Result<BasisFamily> {
    if q < 0 {
        return Err(Error::Unsupported(
            "involutive basis for K # T(2,-q)".into(),
        ));
    }
    if q <= 2 || q % 2 == 0 {
        return Err(Error::Precondition(format!(
            "q = {q} must be odd and greater than 2"
        )));
    }
    let half = unit_staircase_half(s)?.to_vec();
    let n = half.len() / 2;
    let k = ((q - 1) / 2) as usize;
    let t2 = ParamSeq::new(
        (0..q - 1)
            .map(|i| if i % 2 == 0 { 1 } else { -1 })
            .collect(),
    )?;
    let d1 = staircase_involution(s, Mode::Full)?;
    let d2 = staircase_involution(&t2, Mode::Full)?;
    let mut setup = tensor_involution_with(&d1, &d2, Correction::PhiPsi)?;
    let back = tensor_involution_with(&d1, &d2, Correction::PsiPhi)?;
    let idx = Idx {
        big_n: 4 * n,
        big_m: 2 * k,
        mode: Mode::Full,
    };
    setup.complex = setup.complex.with_ids(|g, _| label(&idx, n, k, g))?;

    let mut x = Vec::new();
    for m in 0..=2 * n {
        x.push(idx.gen(idx.x(m), idx.y(0)));
    }
    for j in 1..=k {
        x.push(idx.gen(idx.x(2 * n), idx.y(j)));
    }
    for j in (1..k).rev() {
        x.push(idx.gen(idx.x(2 * n), idx.yp(j)));
    }
    for m in (0..=2 * n).rev() {
        x.push(idx.gen(idx.xp(m), idx.yp(0)));
    }

    let one = Mono::ONE;
    let mut y = Vec::new();
    let mut yp = Vec::new();
    let mut yp_img = Vec::new();
    let mut z = Vec::new();
    let mut zp = Vec::new();
    for i in (1..2 * n).step_by(2) {
        let b = -half[i];
        let beta = b as u32;
        let u = Mono::new(beta - 1, 0);
        let v = Mono::new(0, beta - 1);
        let lone = rule.present(b);
        let double = rule.present(2 * b);
        for j in (1..=k).step_by(2) {
            y.push(Square {
                i,
                j,
                beta,
                elems: [
                    idx.chain(&[(one, idx.x(i), idx.y(j), true)]),
                    idx.chain(&[
                        (one, idx.x(i - 1), idx.y(j), true),
                        (one, idx.x(i), idx.y(j - 1), true),
                    ]),
                    idx.chain(&[
                        (one, idx.x(i), idx.y(j + 1), true),
                        (v, idx.x(i + 1), idx.y(j), true),
                    ]),
                    idx.chain(&[
                        (one, idx.x(i - 1), idx.y(j + 1), true),
                        (v, idx.x(i + 1), idx.y(j - 1), true),
                    ]),
                ],
            });
            yp.push(Square {
                i,
                j,
                beta,
                elems: [
                    idx.chain(&[
                        (one, idx.xp(i), idx.yp(j), true),
                        (u, idx.xp(i + 1), idx.yp(j - 1), lone),
                    ]),
                    idx.chain(&[
                        (one, idx.xp(i - 1), idx.yp(j), true),
                        (one, idx.xp(i), idx.yp(j - 1), true),
                    ]),
                    idx.chain(&[
                        (one, idx.xp(i), idx.yp(j + 1), true),
                        (u, idx.xp(i + 1), idx.yp(j), true),
                    ]),
                    idx.chain(&[
                        (one, idx.xp(i - 1), idx.yp(j + 1), true),
                        (u, idx.xp(i + 1), idx.yp(j - 1), true),
                    ]),
                ],
            });
            let ysq = &y.last().expect("just pushed").elems;
            yp_img.push([
                idx.chain(&[
                    (one, idx.x(i), idx.y(j), true),
                    (v, idx.x(i + 1), idx.y(j - 1), double),
                ]),
                ysq[1].clone(),
                ysq[2].clone(),
                ysq[3].clone(),
            ]);
        }
        for j in (1..k).step_by(2) {
            z.push(Square {
                i,
                j,
                beta,
                elems: [
                    idx.chain(&[(one, idx.x(i), idx.yp(j), true)]),
                    idx.chain(&[
                        (one, idx.x(i - 1), idx.yp(j), true),
                        (one, idx.x(i), idx.yp(j + 1), true),
                    ]),
                    idx.chain(&[
                        (one, idx.x(i), idx.yp(j - 1), true),
                        (v, idx.x(i + 1), idx.yp(j), true),
                    ]),
                    idx.chain(&[
                        (one, idx.x(i - 1), idx.yp(j - 1), true),
                        (v, idx.x(i + 1), idx.yp(j + 1), true),
                    ]),
                ],
            });
            zp.push(Square {
                i,
                j,
                beta,
                elems: [
                    idx.chain(&[
                        (one, idx.xp(i), idx.y(j), true),
                        (u, idx.xp(i + 1), idx.y(j + 1), lone),
                    ]),
                    idx.chain(&[
                        (one, idx.xp(i - 1), idx.y(j), true),
                        (one, idx.xp(i), idx.y(j + 1), true),
                    ]),
                    idx.chain(&[
                        (one, idx.xp(i), idx.y(j - 1), true),
                        (u, idx.xp(i + 1), idx.y(j), true),
                    ]),
                    idx.chain(&[
                        (one, idx.xp(i - 1), idx.y(j - 1), true),
                        (u, idx.xp(i + 1), idx.y(j + 1), true),
                    ]),
                ],
            });
        }
    }
    Ok(BasisFamily {
        n,
        k,
        rule,
        setup,
        iota_back: back.iota,
        x,
        y,
        y_prime: yp,
        z,
        z_prime: zp,
        y_prime_images: yp_img,
    })
}

/// One checked identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisReport {
    pub lines: Vec<CheckLine>,
}

impl BasisReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckLine> {
        self.lines.iter().filter(|l| !l.ok)
    }

    fn push(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.lines.push(CheckLine {
            name: name.into(),
            ok,
            detail: detail.into(),
        });
    }
}

fn show(c: &ChainComplex, ch: &Chain) -> String {
    if ch.is_empty() {
        return "0".into();
    }
    ch.iter()
        .map(|(&g, e)| {
            if e.is_one() {
                c.gen(g).id.clone()
            } else {
                format!("({e}){}", c.gen(g).id)
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn scale(ch: &Chain, m: Mono, mode: Mode) -> Chain {
    let mut out = Chain::new();
    for (&g, e) in ch {
        add_to_chain(&mut out, g, &e.mul_mono(m).with_mode(mode));
    }
    out
}

fn f2_rank(mut rows: Vec<FixedBitSet>) -> usize {
    let mut rank = 0;
    let width = rows.first().map_or(0, |r| r.len());
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r].contains(col)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.contains(col) {
                row.symmetric_difference_with(&pivot);
            }
        }
        rank += 1;
    }
    rank
}

/// Exact verification of the X subcomplex, the involution on X, the forward
/// and backward images of every Y/Z square, the square differentials, and the
/// basis property.
pub fn verify_basis_identities(s: &ParamSeq, q: i64, rule: CoefficientRule) -> Result<BasisReport> {
    let fam = build_xyz_basis(s, q, rule)?;
    let c = &fam.setup.complex;
    let iota = &fam.setup.iota;
    let mode = c.mode();
    let mut rep = BasisReport::default();

    rep.push("iota chain map", iota.is_chain_map(c), "");
    rep.push("reverse iota chain map", fam.iota_back.is_chain_map(c), "");

    let all: Vec<&Chain> = fam
        .y
        .iter()
        .chain(&fam.y_prime)
        .chain(&fam.z)
        .chain(&fam.z_prime)
        .flat_map(|sq| sq.elems.iter())
        .collect();
    let x_chains: Vec<Chain> = fam.x.iter().map(|&g| single(g, mode)).collect();
    let rows: Vec<FixedBitSet> = x_chains
        .iter()
        .chain(all.iter().copied())
        .map(|ch| {
            let mut bits = FixedBitSet::with_capacity(c.len());
            for (&g, e) in ch {
                if e.constant_term() {
                    bits.insert(g);
                }
            }
            bits
        })
        .collect();
    let count = rows.len();
    let rank = f2_rank(rows);
    rep.push(
        "basis",
        count == c.len() && rank == c.len(),
        format!(
            "{count} elements, rank {rank} mod (U,V), {} generators",
            c.len()
        ),
    );

    let in_x: std::collections::BTreeSet<usize> = fam.x.iter().copied().collect();
    let closed = fam
        .x
        .iter()
        .all(|&g| c.boundary_of(g).keys().all(|t| in_x.contains(t)));
    rep.push("X subcomplex", closed, format!("{} elements", fam.x.len()));
    let want = insert_t2_run(s, q, 1)?;
    let got = c
        .restrict(&fam.x)
        .and_then(|sub| decompose(&crate::complex::quotient_uv(&sub)));
    match got {
        Ok(g) => rep.push(
            "X sequence",
            g.seq == want,
            format!("got {}, expected {want}", g.seq),
        ),
        Err(e) => rep.push("X sequence", false, e.to_string()),
    }
    let len = fam.x.len();
    for (l, xc) in x_chains.iter().enumerate() {
        let img = iota.apply(xc);
        let expect = &x_chains[len - 1 - l];
        rep.push(
            format!("iota X[{l}]"),
            &img == expect,
            format!("{} -> {}", show(c, xc), show(c, &img)),
        );
    }

    let forward = |rep: &mut BasisReport, tag: &str, from: &[Square], to: &[Square]| {
        for (a, b) in from.iter().zip(to) {
            for m in 0..4 {
                let img = iota.apply(&a.elems[m]);
                rep.push(
                    format!("iota {tag}({},{})[{m}]", a.i, a.j),
                    img == b.elems[m],
                    format!(
                        "{} -> {}, expected {}",
                        show(c, &a.elems[m]),
                        show(c, &img),
                        show(c, &b.elems[m])
                    ),
                );
            }
        }
    };
    forward(&mut rep, "Y", &fam.y, &fam.y_prime);
    forward(&mut rep, "Z", &fam.z, &fam.z_prime);

    let back = &fam.iota_back;
    for (a, want) in fam.y_prime.iter().zip(&fam.y_prime_images) {
        for (m, (elem, want)) in a.elems.iter().zip(want).enumerate() {
            let img = back.apply(elem);
            rep.push(
                format!("iota Y'({},{})[{m}]", a.i, a.j),
                img == *want,
                format!(
                    "{} -> {}, expected {}",
                    show(c, elem),
                    show(c, &img),
                    show(c, want)
                ),
            );
        }
    }
    for (a, b) in fam.z_prime.iter().zip(&fam.z) {
        for m in 0..4 {
            let img = back.apply(&a.elems[m]);
            rep.push(
                format!("iota Z'({},{})[{m}]", a.i, a.j),
                img == b.elems[m],
                format!(
                    "{} -> {}, expected {}",
                    show(c, &a.elems[m]),
                    show(c, &img),
                    show(c, &b.elems[m])
                ),
            );
        }
    }

    let u = Mono::new(1, 0);
    let v = Mono::new(0, 1);
    let square = |rep: &mut BasisReport, tag: &str, sqs: &[Square], primed: bool| {
        for sq in sqs {
            let e = &sq.elems;
            let (h, w) = if primed { (2, 1) } else { (1, 2) };
            let d0 = c.boundary(&e[0]);
            let want0 = crate::complex::chain_sum(&scale(&e[h], u, mode), &scale(&e[w], v, mode));
            let ok = d0 == want0
                && c.boundary(&e[h]) == scale(&e[3], v, mode)
                && c.boundary(&e[w]) == scale(&e[3], u, mode)
                && c.boundary(&e[3]).is_empty();
            rep.push(format!("square {tag}({},{})", sq.i, sq.j), ok, show(c, &d0));
        }
    };
    square(&mut rep, "Y", &fam.y, false);
    square(&mut rep, "Z", &fam.z, false);
    square(&mut rep, "Y'", &fam.y_prime, true);
    square(&mut rep, "Z'", &fam.z_prime, true);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> ParamSeq {
        s.parse().unwrap()
    }

    #[test]
    fn trefoil_reflection() {
        let d = staircase_involution(&seq("[1,-1]"), Mode::Full).unwrap();
        assert_eq!(d.iota.image_of(0), &single(2, Mode::Full));
        assert_eq!(d.iota.image_of(1), &single(1, Mode::Full));
        let twice = d.iota.compose(&d.iota);
        for i in 0..3 {
            assert_eq!(twice.image_of(i), &single(i, Mode::Full));
        }
    }

    #[test]
    fn derivatives_of_t45() {
        let c = seq_to_complex_in(&seq("[1,-3,2,-2,3,-1]"), Mode::Full).unwrap();
        let (phi, psi) = phi_psi(&c);
        assert_eq!(phi.image_of(1), &single(0, Mode::Full));
        assert!(phi.image_of(3).is_empty());
        let mut u2 = Chain::new();
        u2.insert(4, RingElem::u_pow(2, Mode::Full));
        assert_eq!(phi.image_of(5), &u2);
        assert!(phi.is_chain_map(&c) && psi.is_chain_map(&c));
        assert!(phi.respects_grading(&c) && psi.respects_grading(&c));
    }

    #[test]
    fn unknot_reflection_is_identity() {
        let d = staircase_involution(&ParamSeq::unknot(), Mode::Full).unwrap();
        assert_eq!(d.iota.image_of(0), &single(0, Mode::Full));
    }

    #[test]
    fn small_basis_cases() {
        for (s, q) in [("[1,-1,1,-1]", 3), ("[1,-1,1,-1]", 5), ("[1,-2,2,-1]", 7)] {
            let rep = verify_basis_identities(&seq(s), q, CoefficientRule::Mod2).unwrap();
            let bad: Vec<_> = rep.failures().collect();
            assert!(bad.is_empty(), "{s} q={q}: {bad:#?}");
        }
    }

    #[test]
    fn unreduced_coefficient_is_caught() {
        let rep =
            verify_basis_identities(&seq("[1,-2,2,-1]"), 5, CoefficientRule::NonzeroIsOne).unwrap();
        assert!(!rep.passed());
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(build_xyz_basis(&seq("[1,-2,-1,1,-1,1,2,-1]"), 3, CoefficientRule::Mod2).is_err());
        assert!(build_xyz_basis(&seq("[1,-1,1,-1]"), 4, CoefficientRule::Mod2).is_err());
        assert!(matches!(
            build_xyz_basis(&seq("[1,-1,1,-1]"), -3, CoefficientRule::Mod2),
            Err(Error::Unsupported(_))
        ));
    }
}
