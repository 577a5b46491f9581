//! Rational complex representation rings of abelian groups via character
//! groups: cyclotomic polynomials, the CRT splitting of Q[x]/(x^n - 1),
//! restriction and induction of characters, transfer images, the
//! representation-ring Mackey functor, and cyclotomic field certificates
//! for its quotients V_H.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::bigint::BigInt;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::groups::{divisors, SubgroupLattice};
use crate::linalg::{QMatrix, Subspace};
use crate::mackey::{Level, MackeyBuilder, MackeyFunctor, VModule};
use crate::rat::{format_rat, rat, Rational};

pub fn euler_phi(n: usize) -> usize {
    (1..=n).filter(|k| gcd(*k, n) == 1).count()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

// ---------------------------------------------------------------------------
// integer polynomials (dense, low -> high)

fn poly_trim(p: &mut Vec<BigInt>) {
    while p.len() > 1 && p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            out[i + j] += x * y;
        }
    }
    poly_trim(&mut out);
    out
}

/// Exact division by a monic polynomial; panics if the division is not exact
/// (never the case in the cyclotomic recursion).
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map_or(false, |c| c.is_one()), "divisor must be monic");
    let mut rem: Vec<BigInt> = num.to_vec();
    let dn = den.len() - 1;
    if rem.len() <= dn {
        assert!(rem.iter().all(|c| c.is_zero()), "inexact polynomial division");
        return vec![BigInt::zero()];
    }
    let mut quo = vec![BigInt::zero(); rem.len() - dn];
    for k in (0..quo.len()).rev() {
        let c = rem[k + dn].clone();
        if c.is_zero() {
            continue;
        }
        quo[k] = c.clone();
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= &c * d;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact polynomial division");
    poly_trim(&mut quo);
    quo
}

/// x^n - 1.
fn poly_xn_minus_1(n: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); n + 1];
    p[0] = -BigInt::one();
    p[n] = BigInt::one();
    p
}

/// The n-th cyclotomic polynomial with exact integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicPoly {
    pub n: usize,
    /// coefficients low -> high; monic of degree phi(n)
    pub coeffs: Vec<BigInt>,
}

impl CyclotomicPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn rational_coeffs(&self) -> Vec<Rational> {
        self.coeffs
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect()
    }

    pub fn to_display(&self, var: &str) -> String {
        poly_display(&self.rational_coeffs(), var)
    }
}

/// Computed by exact division: Phi_n = (x^n - 1) / prod_{d|n, d<n} Phi_d.
pub fn cyclotomic(n: usize) -> CyclotomicPoly {
    assert!(n >= 1, "cyclotomic index must be positive");
    let mut den = vec![BigInt::one()];
    for d in divisors(n) {
        if d < n {
            den = poly_mul(&den, &cyclotomic(d).coeffs);
        }
    }
    let coeffs = poly_div_exact(&poly_xn_minus_1(n), &den);
    assert_eq!(coeffs.len() - 1, euler_phi(n), "degree of Phi_n is phi(n)");
    assert!(coeffs.last().unwrap().is_one(), "Phi_n is monic");
    CyclotomicPoly { n, coeffs }
}

pub fn poly_display(coeffs: &[Rational], var: &str) -> String {
    let mut terms: Vec<String> = Vec::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = format_rat(&c.abs());
        let body = match i {
            0 => mag,
            1 if mag == "1" => var.to_string(),
            1 => format!("{mag}*{var}"),
            _ if mag == "1" => format!("{var}^{i}"),
            _ => format!("{mag}*{var}^{i}"),
        };
        if terms.is_empty() {
            terms.push(if c < &Rational::zero() {
                format!("-{body}")
            } else {
                body
            });
        } else if c < &Rational::zero() {
            terms.push(format!("- {body}"));
        } else {
            terms.push(format!("+ {body}"));
        }
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" ")
    }
}

// ---------------------------------------------------------------------------
// CRT splitting of Q[x]/(x^n - 1)

/// One factor Q[x]/(Phi_j) of the splitting.
#[derive(Clone, Debug)]
pub struct CrtFactor {
    pub j: usize,
    pub phi: CyclotomicPoly,
    /// offset of this factor's coordinate block in the CRT vector
    pub offset: usize,
}

/// The isomorphism Q[x]/(x^n - 1) -> prod_{j|n} Q[x]/(Phi_j) as explicit
/// matrices, verified exactly against its inverse.
#[derive(Clone, Debug)]
pub struct CrtDecomposition {
    pub n: usize,
    pub factors: Vec<CrtFactor>,
    /// n x n; column a is the tuple of reductions of x^a
    pub forward: QMatrix,
    pub inverse: QMatrix,
}

impl CrtDecomposition {
    /// The coordinate block of a CRT vector belonging to factor j.
    pub fn block<'a>(&self, v: &'a [Rational], j: usize) -> &'a [Rational] {
        let f = self.factors.iter().find(|f| f.j == j).expect("factor");
        &v[f.offset..f.offset + f.phi.degree()]
    }

    /// Projection matrix onto the factor j (block rows of `forward`).
    pub fn projection(&self, j: usize) -> QMatrix {
        let f = self.factors.iter().find(|f| f.j == j).expect("factor");
        QMatrix::from_fn(f.phi.degree(), self.n, |r, c| {
            self.forward.at(f.offset + r, c).clone()
        })
    }
}

/// Reduce x^a modulo a monic integer polynomial, returning rational coords
/// of the remainder on 1, x, ..., x^{deg-1}.
fn reduce_power(a: usize, modulus: &[BigInt]) -> Vec<Rational> {
    let deg = modulus.len() - 1;
    if deg == 0 {
        return vec![];
    }
    let mut dense = vec![Rational::zero(); (a + 1).max(deg)];
    dense[a] = Rational::one();
    for k in (deg..dense.len()).rev() {
        let c = dense[k].clone();
        if c.is_zero() {
            continue;
        }
        dense[k] = Rational::zero();
        for (i, m) in modulus.iter().enumerate().take(deg) {
            let m = Rational::from_integer(m.clone());
            let t = &dense[k - deg + i] - &c * m;
            dense[k - deg + i] = t;
        }
    }
    dense[..deg].to_vec()
}

pub fn crt_split(n: usize) -> CrtDecomposition {
    assert!(n >= 1);
    let mut factors = Vec::new();
    let mut offset = 0;
    for j in divisors(n) {
        let phi = cyclotomic(j);
        let deg = phi.degree();
        factors.push(CrtFactor { j, phi, offset });
        offset += deg;
    }
    assert_eq!(offset, n, "degrees of the factors sum to n");
    let mut forward = QMatrix::zeros(n, n);
    for f in &factors {
        for a in 0..n {
            let red = reduce_power(a, &f.phi.coeffs);
            for (r, v) in red.iter().enumerate() {
                *forward.at_mut(f.offset + r, a) = v.clone();
            }
        }
    }
    let inverse = forward.inverse().expect("the CRT map is an isomorphism");
    assert!(forward.mul(&inverse).is_identity());
    CrtDecomposition {
        n,
        factors,
        forward,
        inverse,
    }
}

// ---------------------------------------------------------------------------
// character groups of abelian subgroups

/// A chosen direct-product decomposition of an abelian subgroup: generators
/// with their orders and the exponent tuple of every element.
#[derive(Clone, Debug)]
pub struct AbelianBasis {
    pub gens: Vec<usize>,
    pub orders: Vec<usize>,
    pub exponent: usize,
    pub elem_tuple: BTreeMap<usize, Vec<usize>>,
}

fn abelian_basis(lattice: &SubgroupLattice, h: usize) -> Result<AbelianBasis> {
    let g = lattice.group().as_ref();
    let sub = lattice.subgroup(h);
    for &a in &sub.elements {
        for &b in &sub.elements {
            if g.mul(a, b) != g.mul(b, a) {
                return Err(Error::UnsupportedGroup(format!(
                    "subgroup {h} is not abelian"
                )));
            }
        }
    }
    // Greedy split: a maximal-order element (the lattice's chosen generator
    // when H is cyclic) plus a complement found in the lattice.
    let mut gens = Vec::new();
    let mut orders = Vec::new();
    let mut current = h;
    loop {
        let cur = lattice.subgroup(current);
        if cur.order == 1 {
            break;
        }
        let max_order = cur
            .elements
            .iter()
            .map(|&e| g.element_order(e))
            .max()
            .unwrap();
        let x = cur
            .elements
            .iter()
            .copied()
            .find(|&e| g.element_order(e) == max_order)
            .unwrap();
        gens.push(x);
        orders.push(max_order);
        if max_order == cur.order {
            break;
        }
        // cyclic subgroup generated by x
        let mut xmask = 0u64;
        let mut p = 0usize;
        loop {
            xmask |= 1 << p;
            p = g.mul(p, x);
            if p == 0 {
                break;
            }
        }
        let target = cur.order / max_order;
        let complement = lattice
            .subgroups_of(current)
            .into_iter()
            .find(|&c| lattice.subgroup(c).order == target && lattice.subgroup(c).mask & xmask == 1)
            .expect("a maximal-order cyclic factor splits off");
        current = complement;
    }
    let exponent = orders.iter().fold(1, |a, &b| a / gcd(a, b) * b);
    // exponent tuples by enumeration
    let mut elem_tuple = BTreeMap::new();
    let k = gens.len();
    let mut tuple = vec![0usize; k];
    loop {
        let mut e = 0usize;
        for (i, &t) in tuple.iter().enumerate() {
            e = g.mul(e, g.pow(gens[i], t as i64));
        }
        elem_tuple.insert(e, tuple.clone());
        // increment mixed radix
        let mut i = 0;
        loop {
            if i == k {
                break;
            }
            tuple[i] += 1;
            if tuple[i] < orders[i] {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
        if i == k {
            break;
        }
    }
    assert_eq!(elem_tuple.len(), sub.order, "tuples enumerate the subgroup");
    Ok(AbelianBasis {
        gens,
        orders,
        exponent,
        elem_tuple,
    })
}

/// The dual group of an abelian subgroup: characters labeled by exponent
/// tuples, evaluated as exact root-of-unity symbols (order, exponent).
#[derive(Clone, Debug)]
pub struct CharacterGroup {
    pub sub: usize,
    pub basis: AbelianBasis,
    pub count: usize,
}

impl CharacterGroup {
    pub fn tuple(&self, idx: usize) -> Vec<usize> {
        let mut t = Vec::with_capacity(self.basis.orders.len());
        let mut rest = idx;
        for &d in &self.basis.orders {
            t.push(rest % d);
            rest /= d;
        }
        t
    }

    pub fn index(&self, tuple: &[usize]) -> usize {
        let mut idx = 0;
        for (i, &d) in self.basis.orders.iter().enumerate().rev() {
            idx = idx * d + tuple[i] % d;
        }
        idx
    }

    /// Pointwise product of characters is addition of tuples.
    pub fn product(&self, a: usize, b: usize) -> usize {
        let (ta, tb) = (self.tuple(a), self.tuple(b));
        let sum: Vec<usize> = ta
            .iter()
            .zip(&tb)
            .zip(&self.basis.orders)
            .map(|((x, y), &d)| (x + y) % d)
            .collect();
        self.index(&sum)
    }

    /// Evaluate character `idx` on an ambient element of the subgroup as a
    /// root-of-unity symbol: the value is zeta_N^r with N the exponent.
    pub fn eval(&self, idx: usize, elem: usize) -> (usize, usize) {
        let n = self.basis.exponent.max(1);
        let t = self.tuple(idx);
        let e = &self.basis.elem_tuple[&elem];
        let mut r = 0usize;
        for ((a, x), &d) in t.iter().zip(e).zip(&self.basis.orders) {
            r = (r + a * x % d * (n / d)) % n;
        }
        (n, r)
    }

    pub fn label(&self, idx: usize) -> String {
        let t = self.tuple(idx);
        match t.len() {
            0 => "1".to_string(),
            1 => format!("x^{}", t[0]),
            _ => format!(
                "x^({})",
                t.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
            ),
        }
    }
}

/// Character data for every subgroup of an abelian group, with restriction
/// and induction matrices for every comparable pair.
pub struct CharacterTheory {
    lattice: Arc<SubgroupLattice>,
    pub chars: Vec<CharacterGroup>,
    res: BTreeMap<(usize, usize), QMatrix>,
}

impl CharacterTheory {
    pub fn new(lattice: &Arc<SubgroupLattice>) -> Result<CharacterTheory> {
        if !lattice.group().is_abelian() {
            return Err(Error::UnsupportedGroup(format!(
                "representation rings are supported for abelian groups only, got {}",
                lattice.group().name()
            )));
        }
        let chars: Vec<CharacterGroup> = (0..lattice.subgroup_count())
            .map(|h| {
                let basis = abelian_basis(lattice, h)?;
                Ok(CharacterGroup {
                    sub: h,
                    count: lattice.subgroup(h).order,
                    basis,
                })
            })
            .collect::<Result<_>>()?;
        let mut res = BTreeMap::new();
        for h in 0..lattice.subgroup_count() {
            for k in lattice.subgroups_of(h) {
                res.insert((h, k), restriction_matrix(&chars[h], &chars[k]));
            }
        }
        Ok(CharacterTheory {
            lattice: Arc::clone(lattice),
            chars,
            res,
        })
    }

    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        &self.lattice
    }

    /// Characters restrict pointwise: RU(H) -> RU(K) for K <= H.
    pub fn res_matrix(&self, h: usize, k: usize) -> &QMatrix {
        &self.res[&(h, k)]
    }

    /// Induction RU(K) -> RU(H): on characters, ind(psi) is the sum of the
    /// characters of H restricting to psi; the matrix is the transpose of
    /// restriction (Frobenius reciprocity on the character basis).
    pub fn ind_matrix(&self, h: usize, k: usize) -> QMatrix {
        self.res[&(h, k)].transpose()
    }

    /// Multiplication by the character `idx` on RU(H): a permutation matrix.
    pub fn mult_by_char(&self, h: usize, idx: usize) -> QMatrix {
        let cg = &self.chars[h];
        let mut m = QMatrix::zeros(cg.count, cg.count);
        for a in 0..cg.count {
            *m.at_mut(cg.product(idx, a), a) = Rational::one();
        }
        m
    }
}

fn restriction_matrix(big: &CharacterGroup, small: &CharacterGroup) -> QMatrix {
    let mut m = QMatrix::zeros(small.count, big.count);
    for chi in 0..big.count {
        // the restricted character, determined by evaluating on the
        // subgroup's chosen generators
        let mut tuple = Vec::with_capacity(small.basis.gens.len());
        for (gi, &gen) in small.basis.gens.iter().enumerate() {
            let (n, r) = big.eval(chi, gen);
            let d = small.basis.orders[gi];
            assert_eq!(r * d % n, 0, "character value has order dividing d");
            tuple.push(r * d / n % d);
        }
        let row = small.index(&tuple);
        *m.at_mut(row, chi) = Rational::one();
    }
    m
}

/// An element of RU(H) tensor Q on the character basis.
#[derive(Clone, Debug, PartialEq)]
pub struct RepRingElement {
    pub subgroup: usize,
    pub coeffs: Vec<Rational>,
}

impl RepRingElement {
    pub fn character(theory: &CharacterTheory, subgroup: usize, idx: usize) -> RepRingElement {
        let mut coeffs = vec![Rational::zero(); theory.chars[subgroup].count];
        coeffs[idx] = Rational::one();
        RepRingElement { subgroup, coeffs }
    }

    pub fn unit(theory: &CharacterTheory, subgroup: usize) -> RepRingElement {
        let idx = theory.chars[subgroup]
            .index(&vec![0; theory.chars[subgroup].basis.orders.len()]);
        Self::character(theory, subgroup, idx)
    }
}

/// Restriction of a representation-ring element along K <= H (both abelian).
pub fn restriction(
    theory: &CharacterTheory,
    h: usize,
    k: usize,
    e: &RepRingElement,
) -> Result<RepRingElement> {
    if e.subgroup != h {
        return Err(Error::Shape("element does not live at the source level".into()));
    }
    if !theory.lattice.leq(k, h) {
        return Err(Error::Containment(format!("{k} is not a subgroup of {h}")));
    }
    Ok(RepRingElement {
        subgroup: k,
        coeffs: theory.res_matrix(h, k).mul_vec(&e.coeffs),
    })
}

/// Induction of a representation-ring element along K <= H (both abelian).
pub fn induction(
    theory: &CharacterTheory,
    h: usize,
    k: usize,
    e: &RepRingElement,
) -> Result<RepRingElement> {
    if e.subgroup != k {
        return Err(Error::Shape("element does not live at the source level".into()));
    }
    if !theory.lattice.leq(k, h) {
        return Err(Error::Containment(format!("{k} is not a subgroup of {h}")));
    }
    Ok(RepRingElement {
        subgroup: h,
        coeffs: theory.ind_matrix(h, k).mul_vec(&e.coeffs),
    })
}

/// The representation-ring Mackey functor of an abelian group: level H is
/// RU(H) tensor Q on the character basis, restriction/transfer are the
/// character-theoretic maps, conjugation is the identity.
pub fn repring_mackey(lattice: &Arc<SubgroupLattice>) -> Result<MackeyFunctor> {
    let theory = CharacterTheory::new(lattice)?;
    repring_mackey_from(&theory)
}

pub fn repring_mackey_from(theory: &CharacterTheory) -> Result<MackeyFunctor> {
    let lattice = theory.lattice();
    let nsub = lattice.subgroup_count();
    let levels: Vec<Level> = (0..nsub)
        .map(|h| {
            let cg = &theory.chars[h];
            Level {
                dim: cg.count,
                labels: (0..cg.count).map(|i| cg.label(i)).collect(),
            }
        })
        .collect();
    let mut res = BTreeMap::new();
    let mut tr = BTreeMap::new();
    for h in 0..nsub {
        for k in lattice.subgroups_of(h) {
            res.insert((h, k), theory.res_matrix(h, k).clone());
            tr.insert((h, k), theory.ind_matrix(h, k));
        }
    }
    Ok(MackeyBuilder {
        name: "repring".into(),
        lattice: Arc::clone(lattice),
        levels,
        res,
        tr,
        conj: BTreeMap::new(),
    }
    .finish())
}

// ---------------------------------------------------------------------------
// transfer images in CRT coordinates (cyclic case)

/// Context for the cyclic group C_n with its character theory and CRT data.
pub struct CyclicRepRing {
    pub lattice: Arc<SubgroupLattice>,
    pub theory: CharacterTheory,
    pub crt: CrtDecomposition,
}

pub fn cyclic_repring(n: usize) -> Result<CyclicRepRing> {
    let group = Arc::new(crate::groups::parse_group_spec(&format!("C{n}"))?);
    let lattice = crate::groups::enumerate_subgroups(&group)?;
    let theory = CharacterTheory::new(&lattice)?;
    let crt = crt_split(n);
    Ok(CyclicRepRing {
        lattice,
        theory,
        crt,
    })
}

impl CyclicRepRing {
    pub fn n(&self) -> usize {
        self.lattice.group().order()
    }

    /// The subgroup of order d.
    pub fn subgroup_of_order(&self, d: usize) -> usize {
        (0..self.lattice.subgroup_count())
            .find(|&i| self.lattice.subgroup(i).order == d)
            .expect("cyclic groups have one subgroup per divisor")
    }

    /// Induction of the full character basis of the order-d subgroup into
    /// RU(C_n), columns on the character basis of C_n.
    pub fn induction_from(&self, d: usize) -> QMatrix {
        let h = self.lattice.full_index();
        let k = self.subgroup_of_order(d);
        self.theory.ind_matrix(h, k)
    }
}

/// The image of induction from the order-d subgroup of C_n, expressed in CRT
/// coordinates. Requires d | n, d < n.
pub fn transfer_image(n: usize, d: usize) -> Result<Subspace> {
    if d == 0 || n % d != 0 {
        return Err(Error::Domain(format!("{d} does not divide {n}")));
    }
    if d >= n {
        return Err(Error::Domain("a proper divisor is required".into()));
    }
    let ctx = cyclic_repring(n)?;
    let ind = ctx.induction_from(d);
    let rows: Vec<Vec<Rational>> = (0..ind.cols())
        .map(|c| ctx.crt.forward.mul_vec(&ind.col(c)))
        .collect();
    Ok(Subspace::from_rows(n, rows))
}

/// The transfer of the unit from the order-d subgroup, as a polynomial in x
/// (character-basis coefficients) and in CRT coordinates, together with the
/// scalar observed at the factors j | d. The observed scalar is n/d; the
/// closed form n-d+1 sometimes written for it disagrees with direct
/// evaluation (the span of the image is unaffected either way).
pub struct TransferUnitReport {
    pub n: usize,
    pub d: usize,
    pub polynomial: Vec<Rational>,
    pub crt_coords: Vec<Rational>,
    pub observed_scalar: Rational,
    pub closed_form_candidate: Rational,
}

impl TransferUnitReport {
    pub fn note(&self) -> String {
        format!(
            "tr of the unit from the order-{} subgroup: scalar {} at factors j | {} by direct evaluation; \
             the closed form n-d+1 = {} disagrees and is rejected; the span of the image is unaffected",
            self.d,
            format_rat(&self.observed_scalar),
            self.d,
            format_rat(&self.closed_form_candidate),
        )
    }
}

pub fn transfer_unit_report(n: usize, d: usize) -> Result<TransferUnitReport> {
    if d == 0 || n % d != 0 || d >= n {
        return Err(Error::Domain(format!("{d} is not a proper divisor of {n}")));
    }
    let ctx = cyclic_repring(n)?;
    let k = ctx.subgroup_of_order(d);
    let unit = RepRingElement::unit(&ctx.theory, k);
    let ind = induction(&ctx.theory, ctx.lattice.full_index(), k, &unit)?;
    let crt_coords = ctx.crt.forward.mul_vec(&ind.coeffs);
    // at each factor j | d, the block is the constant polynomial n/d
    let expected = rat((n / d) as i64);
    for f in &ctx.crt.factors {
        let block = &crt_coords[f.offset..f.offset + f.phi.degree()];
        if d % f.j == 0 {
            assert_eq!(block[0], expected, "constant term at factor {}", f.j);
            assert!(block[1..].iter().all(|v| v.is_zero()));
        } else {
            assert!(block.iter().all(|v| v.is_zero()), "vanishes at j = {}", f.j);
        }
    }
    Ok(TransferUnitReport {
        n,
        d,
        polynomial: ind.coeffs,
        crt_coords,
        observed_scalar: expected,
        closed_form_candidate: rat((n as i64) - (d as i64) + 1),
    })
}

// ---------------------------------------------------------------------------
// cyclotomic field certificates for V_H

/// Certification that V_H for a cyclic subgroup of order n is the degree
/// phi(n) field given by the n-th cyclotomic polynomial, with the Weyl
/// action acting through conjugation exponents.
#[derive(Clone, Debug)]
pub struct FieldCertificate {
    pub n: usize,
    pub dim: usize,
    /// matrix of multiplication by the generator character on V_H
    pub generator_matrix: QMatrix,
    /// monic minimal polynomial, low -> high
    pub min_poly: Vec<Rational>,
    /// conjugation exponent of each Weyl element
    pub weyl_exponents: Vec<usize>,
    pub weyl_trivial: bool,
    pub notes: Vec<String>,
}

impl FieldCertificate {
    pub fn describe(&self) -> String {
        format!(
            "V = Q(zeta_{}): dim {}, min poly {}, Weyl action {}",
            self.n,
            self.dim,
            poly_display(&self.min_poly, "x"),
            if self.weyl_trivial {
                "trivial".to_string()
            } else {
                format!("exponents {:?}", self.weyl_exponents)
            }
        )
    }
}

/// Certify V_H = Q(zeta_n) for a cyclic class: the quotient has dimension
/// phi(n), multiplication by the generator character has minimal polynomial
/// exactly Phi_n, and the Weyl action is the one given by the conjugation
/// exponents (trivial for abelian groups).
pub fn identify_cyclotomic_field(
    theory: &CharacterTheory,
    mackey: &MackeyFunctor,
    class: usize,
    v: &VModule,
) -> Result<FieldCertificate> {
    let lattice = theory.lattice();
    let h = lattice.class_rep(class);
    let sub = lattice.subgroup(h);
    if !sub.cyclic {
        return Err(Error::Shape(format!(
            "class {class} is not cyclic; no cyclotomic certificate exists"
        )));
    }
    let n = sub.order;
    let cg = &theory.chars[h];
    // generator character: exponent tuple (1, 0, ...) — for cyclic H there
    // is a single factor generated by the lattice's chosen generator
    let gen_char = if cg.basis.orders.is_empty() {
        0
    } else {
        let mut t = vec![0; cg.basis.orders.len()];
        t[0] = 1 % cg.basis.orders[0];
        cg.index(&t)
    };
    let mult = theory.mult_by_char(h, gen_char);
    let xbar = v.projection.mul(&mult).mul(&v.section.transpose());
    // multiplication by x must descend: P . M = Xbar . P
    if v.projection.mul(&mult) != xbar.mul(&v.projection) {
        return Err(Error::Internal(
            "multiplication by the generator character does not preserve the transfer image"
                .into(),
        ));
    }
    let phi_n = cyclotomic(n);
    let expected_dim = phi_n.degree();
    if v.dim != expected_dim {
        return Err(Error::Certification(format!(
            "V has dimension {}, expected phi({n}) = {expected_dim}",
            v.dim
        )));
    }
    let min_poly = xbar.min_poly();
    if min_poly != phi_n.rational_coeffs() {
        return Err(Error::Certification(format!(
            "minimal polynomial is {} but Phi_{n} = {}",
            poly_display(&min_poly, "x"),
            phi_n.to_display("x")
        )));
    }
    // Weyl action through conjugation exponents
    let weyl = lattice.weyl(h);
    let mut weyl_exponents = Vec::new();
    let mut weyl_trivial = true;
    for (w, &g) in weyl.coset_reps.iter().enumerate() {
        let m = lattice.m_h(h, g)?;
        weyl_exponents.push(m);
        let action = &v.weyl.matrices[w];
        if !action.is_identity() {
            weyl_trivial = false;
        }
        // the action is the field automorphism xbar -> xbar^m: it conjugates
        // multiplication by xbar to multiplication by xbar^m and fixes 1
        let mut power = QMatrix::identity(v.dim);
        for _ in 0..m {
            power = power.mul(&xbar);
        }
        if action.mul(&xbar) != power.mul(action) {
            return Err(Error::Certification(format!(
                "Weyl element {w} does not act by the exponent {m} automorphism"
            )));
        }
        let unit_class = v
            .projection
            .mul_vec(&RepRingElement::unit(theory, h).coeffs);
        if action.mul_vec(&unit_class) != unit_class {
            return Err(Error::Certification(format!(
                "Weyl element {w} does not fix the unit class"
            )));
        }
    }
    let mut notes = vec![format!(
        "certificate over the {} functor; generator character fixed by the lattice",
        mackey.name()
    )];
    if lattice.group().is_abelian() {
        notes.push("abelian ambient group: conjugation exponents are all 1".into());
    }
    Ok(FieldCertificate {
        n,
        dim: v.dim,
        generator_matrix: xbar,
        min_poly,
        weyl_exponents,
        weyl_trivial,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{enumerate_subgroups, parse_group_spec};

    fn lattice(spec: &str) -> Arc<SubgroupLattice> {
        enumerate_subgroups(&Arc::new(parse_group_spec(spec).unwrap())).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic(1).coeffs, big(&[-1, 1]));
        assert_eq!(cyclotomic(4).coeffs, big(&[1, 0, 1]));
        assert_eq!(cyclotomic(6).coeffs, big(&[1, -1, 1]));
        assert_eq!(cyclotomic(12).coeffs, big(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn cyclotomic_product_identity() {
        for n in 1..=48 {
            let mut prod = vec![BigInt::one()];
            for d in divisors(n) {
                prod = poly_mul(&prod, &cyclotomic(d).coeffs);
            }
            assert_eq!(prod, poly_xn_minus_1(n), "n = {n}");
        }
    }

    #[test]
    fn crt_examples() {
        let c1 = crt_split(1);
        assert!(c1.forward.is_identity());

        let c2 = crt_split(2);
        // x maps to (1, -1)
        assert_eq!(c2.forward.col(1), vec![rat(1), rat(-1)]);

        let c4 = crt_split(4);
        let dims: Vec<usize> = c4.factors.iter().map(|f| f.phi.degree()).collect();
        assert_eq!(dims, vec![1, 1, 2]);

        for n in [1usize, 2, 3, 4, 6, 8, 12, 24] {
            let c = crt_split(n);
            assert!(c.forward.mul(&c.inverse).is_identity(), "n = {n}");
        }
    }

    #[test]
    fn restriction_examples() {
        let lat = lattice("C4");
        let theory = CharacterTheory::new(&lat).unwrap();
        let top = lat.full_index();
        let c2 = (0..lat.subgroup_count())
            .find(|&i| lat.subgroup(i).order == 2)
            .unwrap();
        // trivial character restricts to the trivial character
        let unit = RepRingElement::unit(&theory, top);
        let r = restriction(&theory, top, c2, &unit).unwrap();
        assert_eq!(r, RepRingElement::unit(&theory, c2));
        // the chosen-generator convention: res(x_4) = x_2
        let x4 = RepRingElement::character(&theory, top, 1);
        let r = restriction(&theory, top, c2, &x4).unwrap();
        assert_eq!(r, RepRingElement::character(&theory, c2, 1));
        // restriction to the subgroup itself is the identity
        let r = restriction(&theory, top, top, &x4).unwrap();
        assert_eq!(r, x4);
    }

    #[test]
    fn induction_examples() {
        // e <= C2: ind(1) = 1 + x
        let lat = lattice("C2");
        let theory = CharacterTheory::new(&lat).unwrap();
        let unit = RepRingElement::unit(&theory, lat.trivial_index());
        let i = induction(&theory, lat.full_index(), lat.trivial_index(), &unit).unwrap();
        assert_eq!(i.coeffs, vec![rat(1), rat(1)]);

        // H_2 <= C4: ind(1) = 1 + x^2
        let lat = lattice("C4");
        let theory = CharacterTheory::new(&lat).unwrap();
        let c2 = (0..lat.subgroup_count())
            .find(|&i| lat.subgroup(i).order == 2)
            .unwrap();
        let unit = RepRingElement::unit(&theory, c2);
        let i = induction(&theory, lat.full_index(), c2, &unit).unwrap();
        assert_eq!(i.coeffs, vec![rat(1), rat(0), rat(1), rat(0)]);

        // induction from H to H is the identity
        let x = RepRingElement::character(&theory, c2, 1);
        assert_eq!(induction(&theory, c2, c2, &x).unwrap(), x);
    }

    #[test]
    fn frobenius_reciprocity() {
        // ind(res(y) . x) = y . ind(x) on all basis pairs, as matrices
        for spec in ["C6", "C2xC4", "C12"] {
            let lat = lattice(spec);
            let theory = CharacterTheory::new(&lat).unwrap();
            for h in 0..lat.subgroup_count() {
                for k in lat.subgroups_of(h) {
                    let res = theory.res_matrix(h, k);
                    let ind = theory.ind_matrix(h, k);
                    for y in 0..theory.chars[h].count {
                        let ry = (0..theory.chars[k].count)
                            .find(|&r| !res.at(r, y).is_zero())
                            .unwrap();
                        let lhs = ind.mul(&theory.mult_by_char(k, ry));
                        let rhs = theory.mult_by_char(h, y).mul(&ind);
                        assert_eq!(lhs, rhs, "{spec}: pair ({h},{k}), y={y}");
                    }
                }
            }
        }
    }

    #[test]
    fn transfer_image_examples() {
        // n = 4, d = 2: tr(1) = 1 + x^2, CRT coords (2, 2, 0, 0)
        let rep = transfer_unit_report(4, 2).unwrap();
        assert_eq!(rep.polynomial, vec![rat(1), rat(0), rat(1), rat(0)]);
        assert_eq!(rep.crt_coords, vec![rat(2), rat(2), rat(0), rat(0)]);
        assert_eq!(rep.observed_scalar, rat(2));
        assert_eq!(rep.closed_form_candidate, rat(3));

        // the image vanishes in every factor j not dividing d
        let img = transfer_image(4, 2).unwrap();
        let crt = crt_split(4);
        for row in 0..img.dim() {
            let v = img.basis().row(row);
            assert!(crt.block(v, 4).iter().all(|x| x.is_zero()));
        }

        // n = p prime, d = 1: the image is the ray through (p, 0, ..., 0)
        for p in [2usize, 3, 5, 7] {
            let img = transfer_image(p, 1).unwrap();
            assert_eq!(img.dim(), 1);
            let mut expect = vec![rat(0); p];
            expect[0] = rat(p as i64);
            assert!(img.contains_vec(&expect));
        }

        // d must divide n properly
        assert!(transfer_image(4, 3).is_err());
        assert!(transfer_image(4, 4).is_err());
    }

    #[test]
    fn transfers_avoid_the_top_factor_and_kill_the_rest() {
        for n in [4usize, 6, 8, 12] {
            let crt = crt_split(n);
            let phi = euler_phi(n);
            let mut total = Subspace::zero(n);
            for d in divisors(n) {
                if d == n {
                    continue;
                }
                let img = transfer_image(n, d).unwrap();
                for row in 0..img.dim() {
                    let v = img.basis().row(row);
                    assert!(
                        crt.block(v, n).iter().all(|x| x.is_zero()),
                        "n={n}, d={d}"
                    );
                }
                total = total.sum(&img);
            }
            assert_eq!(total.dim(), n - phi, "n={n}: inductive kill-off");
        }
    }

    #[test]
    fn repring_mackey_dimensions() {
        let lat = lattice("C2");
        let m = repring_mackey(&lat).unwrap();
        assert_eq!(m.level(lat.trivial_index()).dim, 1);
        assert_eq!(m.level(lat.full_index()).dim, 2);
        assert!(m.axioms_check().is_empty());

        // C6: V dims (1, 1, 2, 2) at (e, C2, C3, C6)
        let lat = lattice("C6");
        let m = repring_mackey(&lat).unwrap();
        let dims: Vec<usize> = (0..lat.class_count())
            .map(|class| m.quotient_by_transfers(class).unwrap().dim)
            .collect();
        assert_eq!(dims, vec![1, 1, 2, 2]);

        // C2xC2: V at the whole group is 0
        let lat = lattice("C2xC2");
        let m = repring_mackey(&lat).unwrap();
        let top_class = lat.class_of(lat.full_index());
        assert_eq!(m.quotient_by_transfers(top_class).unwrap().dim, 0);
        assert!(m.axioms_check().is_empty());

        // nonabelian groups are rejected
        assert!(repring_mackey(&lattice("S3")).is_err());
    }

    #[test]
    fn field_certificates() {
        // n = 1: V = Q, xbar = 1
        let lat = lattice("C1");
        let theory = CharacterTheory::new(&lat).unwrap();
        let m = repring_mackey(&lat).unwrap();
        let v = m.quotient_by_transfers(0).unwrap();
        let cert = identify_cyclotomic_field(&theory, &m, 0, &v).unwrap();
        assert_eq!(cert.dim, 1);
        assert!(cert.generator_matrix.is_identity());

        // n = 4: dim 2, min poly x^2 + 1
        let lat = lattice("C4");
        let theory = CharacterTheory::new(&lat).unwrap();
        let m = repring_mackey(&lat).unwrap();
        let top_class = lat.class_of(lat.full_index());
        let v = m.quotient_by_transfers(top_class).unwrap();
        let cert = identify_cyclotomic_field(&theory, &m, top_class, &v).unwrap();
        assert_eq!(cert.dim, 2);
        assert_eq!(cert.min_poly, vec![rat(1), rat(0), rat(1)]);
        assert!(cert.weyl_trivial);

        // n = 6 inside C6: min poly x^2 - x + 1, trivial Weyl action
        let lat = lattice("C6");
        let theory = CharacterTheory::new(&lat).unwrap();
        let m = repring_mackey(&lat).unwrap();
        let top_class = lat.class_of(lat.full_index());
        let v = m.quotient_by_transfers(top_class).unwrap();
        let cert = identify_cyclotomic_field(&theory, &m, top_class, &v).unwrap();
        assert_eq!(cert.dim, 2);
        assert_eq!(cert.min_poly, vec![rat(1), rat(-1), rat(1)]);
        assert!(cert.weyl_trivial);
        assert!(cert.weyl_exponents.iter().all(|&m| m == 1));
    }

    #[test]
    fn repring_crosscheck_on_abelian_groups() {
        for spec in ["C6", "C2xC4"] {
            let lat = lattice(spec);
            let m = repring_mackey(&lat).unwrap();
            for class in 0..lat.class_count() {
                let rep = m.crosscheck_split(class).unwrap();
                assert!(rep.passed(), "{spec} class {class}: {:?}", rep.mismatches);
                let expect = if lat.subgroup(lat.class_rep(class)).cyclic {
                    euler_phi(lat.subgroup(lat.class_rep(class)).order)
                } else {
                    0
                };
                assert_eq!(rep.dim_quotient, expect, "{spec} class {class}");
            }
        }
    }
}
