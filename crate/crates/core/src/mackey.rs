//! Rational Mackey functors as finite linear data: levels with restriction,
//! transfer, and conjugation matrices, the Burnside-ring action, idempotent
//! pieces, quotients by transfers, and the built-in constant and Burnside
//! functors. Graded variants carry a degree window and optional periodicity.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{One, Zero};

use crate::burnside::{gluck_idempotent, BurnsideElement};
use crate::error::{Error, Result};
use crate::groups::{SubgroupLattice, WeylAction};
use crate::linalg::{quotient, QMatrix, Subspace};
use crate::rat::{rat, Rational};

/// One value of a Mackey functor.
#[derive(Clone, Debug)]
pub struct Level {
    pub dim: usize,
    pub labels: Vec<String>,
}

/// A rational Mackey functor. Levels are stored at every subgroup;
/// restriction and transfer matrices at every comparable pair, conjugation
/// matrices for every (g, H) with the identity maps elided.
pub struct MackeyFunctor {
    name: String,
    lattice: Arc<SubgroupLattice>,
    levels: Vec<Level>,
    /// (h, k) with k <= h: M(G/H) -> M(G/K)
    res: BTreeMap<(usize, usize), QMatrix>,
    /// (h, k) with k <= h: M(G/K) -> M(G/H)
    tr: BTreeMap<(usize, usize), QMatrix>,
    /// (g, h): M(G/H) -> M(G/gHg^{-1}); absent means identity on the level
    conj: BTreeMap<(usize, usize), QMatrix>,
}

impl std::fmt::Debug for MackeyFunctor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MackeyFunctor({} over {})", self.name, self.lattice.group().name())
    }
}

/// One idempotent piece or quotient V_H: a W_G H-module with the projection
/// from the level and a section of coset representatives.
#[derive(Clone, Debug)]
pub struct VModule {
    pub dim: usize,
    pub weyl: WeylAction,
    /// dim x level_dim
    pub projection: QMatrix,
    /// dim x level_dim; rows are representatives in the level
    pub section: QMatrix,
    pub labels: Vec<String>,
}

/// Outcome of the two-route split comparison at one class.
#[derive(Clone, Debug)]
pub struct CrosscheckReport {
    pub class: usize,
    pub dim_idempotent: usize,
    pub dim_quotient: usize,
    pub mismatches: Vec<String>,
}

impl CrosscheckReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl MackeyFunctor {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        &self.lattice
    }

    pub fn level(&self, sub: usize) -> &Level {
        &self.levels[sub]
    }

    pub fn res(&self, h: usize, k: usize) -> &QMatrix {
        assert!(self.lattice.leq(k, h), "res requires K <= H");
        &self.res[&(h, k)]
    }

    pub fn tr(&self, h: usize, k: usize) -> &QMatrix {
        assert!(self.lattice.leq(k, h), "tr requires K <= H");
        &self.tr[&(h, k)]
    }

    /// Conjugation c_{g,H}: M(G/H) -> M(G/gHg^{-1}).
    pub fn conj_matrix(&self, g: usize, h: usize) -> QMatrix {
        match self.conj.get(&(g, h)) {
            Some(m) => m.clone(),
            None => {
                let target = self.lattice.conjugate_subgroup(h, g);
                assert_eq!(
                    self.levels[h].dim, self.levels[target].dim,
                    "elided conjugation must connect levels of equal dimension"
                );
                QMatrix::identity(self.levels[h].dim)
            }
        }
    }

    /// The zero Mackey functor.
    pub fn zero(lattice: &Arc<SubgroupLattice>) -> MackeyFunctor {
        let levels = (0..lattice.subgroup_count())
            .map(|_| Level { dim: 0, labels: vec![] })
            .collect();
        let mut res = BTreeMap::new();
        let mut tr = BTreeMap::new();
        for h in 0..lattice.subgroup_count() {
            for k in lattice.subgroups_of(h) {
                res.insert((h, k), QMatrix::zeros(0, 0));
                tr.insert((h, k), QMatrix::zeros(0, 0));
            }
        }
        MackeyFunctor {
            name: "zero".into(),
            lattice: Arc::clone(lattice),
            levels,
            res,
            tr,
            conj: BTreeMap::new(),
        }
    }

    /// Verify the Mackey axioms: identities, transitivity of res and tr,
    /// conjugation cocycle and compatibility, and the double coset formula.
    /// Violations are returned, not thrown.
    pub fn axioms_check(&self) -> Vec<String> {
        let lat = &self.lattice;
        let g = lat.group().as_ref();
        let mut bad = Vec::new();
        let nsub = lat.subgroup_count();

        for h in 0..nsub {
            if !self.res[&(h, h)].is_identity() {
                bad.push(format!("res^{h}_{h} is not the identity"));
            }
            if !self.tr[&(h, h)].is_identity() {
                bad.push(format!("tr^{h}_{h} is not the identity"));
            }
        }

        // transitivity along chains K <= H <= L
        for l in 0..nsub {
            for h in lat.subgroups_of(l) {
                for k in lat.subgroups_of(h) {
                    let lhs = self.res[&(h, k)].mul(&self.res[&(l, h)]);
                    if lhs != self.res[&(l, k)] {
                        bad.push(format!("res transitivity fails on {k} <= {h} <= {l}"));
                    }
                    let lhs = self.tr[&(l, h)].mul(&self.tr[&(h, k)]);
                    if lhs != self.tr[&(l, k)] {
                        bad.push(format!("tr transitivity fails on {k} <= {h} <= {l}"));
                    }
                }
            }
        }

        // conjugation: inner elements act trivially, cocycle, compatibility
        for h in 0..nsub {
            for &x in &lat.subgroup(h).elements {
                if !self.conj_matrix(x, h).is_identity() {
                    bad.push(format!(
                        "conjugation by inner element {x} at level {h} is not the identity"
                    ));
                }
            }
        }
        for h in 0..nsub {
            for g1 in 0..g.order() {
                let h1 = lat.conjugate_subgroup(h, g1);
                for g2 in 0..g.order() {
                    let lhs = self.conj_matrix(g2, h1).mul(&self.conj_matrix(g1, h));
                    let rhs = self.conj_matrix(g.mul(g2, g1), h);
                    if lhs != rhs {
                        bad.push(format!("conjugation cocycle fails at ({g2},{g1},{h})"));
                    }
                }
            }
        }
        for k in 0..nsub {
            for h in lat.subgroups_of(k) {
                for x in 0..g.order() {
                    let xh = lat.conjugate_subgroup(h, x);
                    let xk = lat.conjugate_subgroup(k, x);
                    // c_{x,K} tr^K_H = tr^{xK}_{xH} c_{x,H}
                    let lhs = self.conj_matrix(x, k).mul(&self.tr[&(k, h)]);
                    let rhs = self.tr[&(xk, xh)].mul(&self.conj_matrix(x, h));
                    if lhs != rhs {
                        bad.push(format!(
                            "conjugation/transfer compatibility fails at (g={x}, {h} <= {k})"
                        ));
                    }
                    let lhs = self.conj_matrix(x, h).mul(&self.res[&(k, h)]);
                    let rhs = self.res[&(xk, xh)].mul(&self.conj_matrix(x, k));
                    if lhs != rhs {
                        bad.push(format!(
                            "conjugation/restriction compatibility fails at (g={x}, {h} <= {k})"
                        ));
                    }
                }
            }
        }

        // double coset formula: res^L_K tr^L_H = sum over K g H inside L
        for l in 0..nsub {
            let l_elems = &lat.subgroup(l).elements;
            for k in lat.subgroups_of(l) {
                for h in lat.subgroups_of(l) {
                    let mut total = QMatrix::zeros(self.levels[k].dim, self.levels[h].dim);
                    let mut seen = vec![false; g.order()];
                    for &x in l_elems {
                        if seen[x] {
                            continue;
                        }
                        for &a in &lat.subgroup(k).elements {
                            for &b in &lat.subgroup(h).elements {
                                seen[g.mul(g.mul(a, x), b)] = true;
                            }
                        }
                        // A = x^{-1} K x cap H <= H, and x A x^{-1} <= K
                        let mut a_mask = 0u64;
                        for &e in &lat.subgroup(h).elements {
                            if lat.subgroup(k).mask >> g.conj(x, e) & 1 == 1 {
                                a_mask |= 1 << e;
                            }
                        }
                        let a_idx =
                            lat.index_of_mask(a_mask).expect("intersection is a subgroup");
                        let xa_idx = lat.conjugate_subgroup(a_idx, x);
                        let term = self.tr[&(k, xa_idx)]
                            .mul(&self.conj_matrix(x, a_idx))
                            .mul(&self.res[&(h, a_idx)]);
                        total = total.add(&term);
                    }
                    if total != self.res[&(l, k)].mul(&self.tr[&(l, h)]) {
                        bad.push(format!(
                            "double coset formula fails for K={k}, H={h} inside L={l}"
                        ));
                    }
                }
            }
        }

        bad
    }

    /// The action of a Burnside element on the level M(G/K) for the class
    /// representative K: restrict to A(K), then each orbit [K/J] acts as
    /// tr^K_J res^K_J. Unital: [G/G] acts as the identity.
    pub fn burnside_action(&self, class: usize, a: &BurnsideElement) -> Result<QMatrix> {
        if !Arc::ptr_eq(a.lattice(), &self.lattice) {
            return Err(Error::LatticeMismatch);
        }
        let k = self.lattice.class_rep(class);
        let dim = self.levels[k].dim;
        let mut total = QMatrix::zeros(dim, dim);
        for (j, coeff) in a.restrict_terms(k) {
            let m = self.tr[&(k, j)].mul(&self.res[&(k, j)]);
            total = total.add(&m.scale(&coeff));
        }
        Ok(total)
    }

    /// The Weyl action on the level at a class representative, through the
    /// conjugation matrices of the chosen coset representatives.
    pub fn weyl_action_on_level(&self, class: usize) -> WeylAction {
        let h = self.lattice.class_rep(class);
        let w = self.lattice.weyl(h);
        let matrices = w
            .coset_reps
            .iter()
            .map(|&g| self.conj_matrix(g, h))
            .collect();
        WeylAction {
            weyl: Arc::clone(&w.group),
            matrices,
        }
    }

    /// V_H as the image of the idempotent projector: the matrix of e_H acting
    /// on M(G/H) is verified idempotent and its image is returned with the
    /// restricted Weyl action.
    pub fn idempotent_piece(&self, class: usize) -> Result<VModule> {
        let h = self.lattice.class_rep(class);
        let e = gluck_idempotent(&self.lattice, class);
        let p = self.burnside_action(class, &e)?;
        if p.mul(&p) != p {
            return Err(Error::Internal(format!(
                "idempotent action is not a projector at class {class}; the Mackey structure is broken"
            )));
        }
        let dim_level = self.levels[h].dim;
        let image = Subspace::from_rows(dim_level, (0..dim_level).map(|j| p.col(j)).collect());
        let q = image.dim();
        let basis = image.basis().clone();
        // coordinates on the image = entries at the RREF pivot columns
        let mut coord = QMatrix::zeros(q, dim_level);
        for (i, &pv) in image.pivots().iter().enumerate() {
            *coord.at_mut(i, pv) = Rational::one();
        }
        let projection = coord.mul(&p);
        let labels = image
            .pivots()
            .iter()
            .map(|&pv| format!("e*{}", self.levels[h].labels[pv]))
            .collect();
        // restricted Weyl action
        let w = self.lattice.weyl(h);
        let mut mats = Vec::new();
        for &g in &w.coset_reps {
            let a = self.conj_matrix(g, h);
            let on_image = coord.mul(&a).mul(&basis.transpose());
            // the image must be preserved: A . basis^T = basis^T . on_image
            if a.mul(&basis.transpose()) != basis.transpose().mul(&on_image) {
                return Err(Error::Internal(format!(
                    "Weyl action does not preserve the idempotent image at class {class}"
                )));
            }
            mats.push(on_image);
        }
        let weyl = WeylAction {
            weyl: Arc::clone(&w.group),
            matrices: mats,
        };
        weyl.validate()?;
        Ok(VModule {
            dim: q,
            weyl,
            projection,
            section: basis,
            labels,
        })
    }

    /// V_H as the quotient of the level by the transfers from all proper
    /// subgroups, with the descended Weyl action.
    pub fn quotient_by_transfers(&self, class: usize) -> Result<VModule> {
        let h = self.lattice.class_rep(class);
        let dim_level = self.levels[h].dim;
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for k in self.lattice.subgroups_of(h) {
            if k == h {
                continue;
            }
            let t = &self.tr[&(h, k)];
            for j in 0..t.cols() {
                rows.push(t.col(j));
            }
        }
        let transfers = Subspace::from_rows(dim_level, rows);
        let full = Subspace::full(dim_level);
        let dec = quotient(&full, &transfers)?;
        // labels: representatives are standard basis rows of the full space
        let labels = (0..dec.dim)
            .map(|i| {
                let row = dec.section.row(i);
                let support: Vec<usize> =
                    (0..dim_level).filter(|&j| !row[j].is_zero()).collect();
                match support.as_slice() {
                    [j] if row[*j].is_one() => format!("[{}]", self.levels[h].labels[*j]),
                    _ => format!("q{i}"),
                }
            })
            .collect();
        // descended Weyl action: P A_g S^T, verified to intertwine
        let w = self.lattice.weyl(h);
        let mut mats = Vec::new();
        for &g in &w.coset_reps {
            let a = self.conj_matrix(g, h);
            let descended = dec.projection.mul(&a).mul(&dec.section.transpose());
            if dec.projection.mul(&a) != descended.mul(&dec.projection) {
                return Err(Error::Internal(format!(
                    "Weyl action does not descend to the quotient at class {class}"
                )));
            }
            mats.push(descended);
        }
        let weyl = WeylAction {
            weyl: Arc::clone(&w.group),
            matrices: mats,
        };
        weyl.validate()?;
        Ok(VModule {
            dim: dec.dim,
            weyl,
            projection: dec.projection,
            section: dec.section,
            labels,
        })
    }

    /// Compare the two independent computations of V_H: equal dimensions and
    /// the quotient projection restricted to the idempotent image is an
    /// equivariant isomorphism, verified matrix by matrix.
    pub fn crosscheck_split(&self, class: usize) -> Result<CrosscheckReport> {
        let piece = self.idempotent_piece(class)?;
        let quot = self.quotient_by_transfers(class)?;
        let mut mismatches = Vec::new();
        if piece.dim != quot.dim {
            mismatches.push(format!(
                "dimension mismatch: idempotent image {} vs quotient {}",
                piece.dim, quot.dim
            ));
        } else if piece.dim > 0 {
            // the quotient projection restricted to the image
            let iso = quot.projection.mul(&piece.section.transpose());
            if iso.inverse().is_none() {
                mismatches
                    .push("quotient projection is singular on the idempotent image".into());
            } else {
                for (w, (a, b)) in piece
                    .weyl
                    .matrices
                    .iter()
                    .zip(&quot.weyl.matrices)
                    .enumerate()
                {
                    if iso.mul(a) != b.mul(&iso) {
                        mismatches.push(format!(
                            "Weyl element {w} acts differently on the two models"
                        ));
                    }
                }
            }
        }
        Ok(CrosscheckReport {
            class,
            dim_idempotent: piece.dim,
            dim_quotient: quot.dim,
            mismatches,
        })
    }
}

/// Builder used by the functor constructors in this crate.
pub(crate) struct MackeyBuilder {
    pub name: String,
    pub lattice: Arc<SubgroupLattice>,
    pub levels: Vec<Level>,
    pub res: BTreeMap<(usize, usize), QMatrix>,
    pub tr: BTreeMap<(usize, usize), QMatrix>,
    pub conj: BTreeMap<(usize, usize), QMatrix>,
}

impl MackeyBuilder {
    pub fn finish(self) -> MackeyFunctor {
        MackeyFunctor {
            name: self.name,
            lattice: self.lattice,
            levels: self.levels,
            res: self.res,
            tr: self.tr,
            conj: self.conj,
        }
    }
}

/// The constant Green functor: every level is Q, restrictions and
/// conjugations are identities, and the transfer from K up to H multiplies
/// by |W_H K|.
pub fn constant_green(lattice: &Arc<SubgroupLattice>) -> MackeyFunctor {
    let nsub = lattice.subgroup_count();
    let levels = (0..nsub)
        .map(|_| Level {
            dim: 1,
            labels: vec!["1".to_string()],
        })
        .collect();
    let mut res = BTreeMap::new();
    let mut tr = BTreeMap::new();
    for h in 0..nsub {
        for k in lattice.subgroups_of(h) {
            res.insert((h, k), QMatrix::identity(1));
            // tr^H_K sums the trivial action over the cosets H/K, so it
            // multiplies by the index [H:K] (= |W_H K| when H is abelian).
            let index = lattice.subgroup(h).order / lattice.subgroup(k).order;
            let mut t = QMatrix::identity(1);
            *t.at_mut(0, 0) = rat(index as i64);
            tr.insert((h, k), t);
        }
    }
    MackeyBuilder {
        name: "constant".into(),
        lattice: Arc::clone(lattice),
        levels,
        res,
        tr,
        conj: BTreeMap::new(),
    }
    .finish()
}

/// H-conjugacy classes of subgroups of H, as ambient lattice indices: the
/// orbit basis of A(H). Returns (class representatives, member -> rep map).
fn inner_classes(lattice: &SubgroupLattice, h: usize) -> (Vec<usize>, BTreeMap<usize, usize>) {
    let subs = lattice.subgroups_of(h);
    let mut rep_of: BTreeMap<usize, usize> = BTreeMap::new();
    let mut reps = Vec::new();
    for &j in &subs {
        if rep_of.contains_key(&j) {
            continue;
        }
        let mut members: Vec<usize> = lattice
            .subgroup(h)
            .elements
            .iter()
            .map(|&x| lattice.conjugate_subgroup(j, x))
            .collect();
        members.sort_unstable();
        members.dedup();
        let rep = members[0];
        for m in members {
            rep_of.insert(m, rep);
        }
        reps.push(rep);
    }
    reps.sort_unstable();
    reps.dedup();
    (reps, rep_of)
}

/// Decompose the K-set H/J into K-orbits inside the ambient group
/// (J <= H, K <= H); returns stabilizer subgroup indices with multiplicity.
fn inner_orbit_decomposition(
    lattice: &SubgroupLattice,
    h: usize,
    j: usize,
    k: usize,
) -> BTreeMap<usize, usize> {
    let g = lattice.group().as_ref();
    let h_elems = &lattice.subgroup(h).elements;
    let j_sub = lattice.subgroup(j);
    let k_sub = lattice.subgroup(k);
    let coset_id = |a: usize| -> usize { j_sub.elements.iter().map(|&e| g.mul(a, e)).min().unwrap() };
    let mut seen: BTreeMap<usize, bool> = h_elems.iter().map(|&x| (coset_id(x), false)).collect();
    let mut out: BTreeMap<usize, usize> = BTreeMap::new();
    for &a in h_elems {
        let id = coset_id(a);
        if seen[&id] {
            continue;
        }
        for &x in &k_sub.elements {
            *seen.get_mut(&coset_id(g.mul(x, a))).unwrap() = true;
        }
        let mut stab_mask = 0u64;
        for &x in &k_sub.elements {
            if j_sub.mask >> g.mul(g.mul(g.inv(a), x), a) & 1 == 1 {
                stab_mask |= 1 << x;
            }
        }
        let stab = lattice
            .index_of_mask(stab_mask)
            .expect("stabilizer is a subgroup");
        *out.entry(stab).or_insert(0) += 1;
    }
    out
}

/// The Burnside Mackey functor: level H is A(H) on the orbit basis,
/// restriction decomposes orbits, the transfer sends [K/J] to [H/J], and
/// conjugation relabels.
pub fn burnside_mackey(lattice: &Arc<SubgroupLattice>) -> MackeyFunctor {
    let nsub = lattice.subgroup_count();
    let classes: Vec<(Vec<usize>, BTreeMap<usize, usize>)> =
        (0..nsub).map(|h| inner_classes(lattice, h)).collect();
    let levels: Vec<Level> = (0..nsub)
        .map(|h| {
            let reps = &classes[h].0;
            Level {
                dim: reps.len(),
                labels: reps
                    .iter()
                    .map(|&j| format!("[{}/{}]", lattice.label(h), lattice.label(j)))
                    .collect(),
            }
        })
        .collect();
    let index_in = |h: usize, j: usize| -> usize {
        let rep = classes[h].1[&j];
        classes[h].0.iter().position(|&r| r == rep).unwrap()
    };
    let mut res = BTreeMap::new();
    let mut tr = BTreeMap::new();
    for h in 0..nsub {
        for k in lattice.subgroups_of(h) {
            // res^H_K: [H/J] -> sum of [K/stab] over K-orbits of H/J
            let mut rm = QMatrix::zeros(levels[k].dim, levels[h].dim);
            for (col, &j) in classes[h].0.iter().enumerate() {
                for (stab, mult) in inner_orbit_decomposition(lattice, h, j, k) {
                    let row = index_in(k, stab);
                    *rm.at_mut(row, col) += rat(mult as i64);
                }
            }
            res.insert((h, k), rm);
            // tr^H_K: [K/J] -> [H/J]
            let mut tm = QMatrix::zeros(levels[h].dim, levels[k].dim);
            for (col, &j) in classes[k].0.iter().enumerate() {
                let row = index_in(h, j);
                *tm.at_mut(row, col) += rat(1);
            }
            tr.insert((h, k), tm);
        }
    }
    // conjugation: [H/J] -> [gHg^{-1} / gJg^{-1}]
    let g = lattice.group().as_ref();
    let mut conj = BTreeMap::new();
    for h in 0..nsub {
        for x in 0..g.order() {
            let xh = lattice.conjugate_subgroup(h, x);
            let mut cm = QMatrix::zeros(levels[xh].dim, levels[h].dim);
            for (col, &j) in classes[h].0.iter().enumerate() {
                let xj = lattice.conjugate_subgroup(j, x);
                let row = index_in(xh, xj);
                *cm.at_mut(row, col) += rat(1);
            }
            if xh != h || !cm.is_identity() {
                conj.insert((x, h), cm);
            }
        }
    }
    MackeyBuilder {
        name: "burnside".into(),
        lattice: Arc::clone(lattice),
        levels,
        res,
        tr,
        conj,
    }
    .finish()
}

/// A graded Mackey functor over a declared degree window. Degrees outside
/// the window are undefined, never silently zero.
pub struct GradedMackeyFunctor {
    lo: i64,
    hi: i64,
    degrees: BTreeMap<i64, Arc<MackeyFunctor>>,
    periodicity: Option<Periodicity>,
}

/// Declared periodicity: the shift isomorphism from degree k to k + period
/// is the identity on the shared level bases.
#[derive(Clone, Copy, Debug)]
pub struct Periodicity {
    pub period: i64,
}

impl GradedMackeyFunctor {
    pub fn new(
        lo: i64,
        hi: i64,
        degrees: BTreeMap<i64, Arc<MackeyFunctor>>,
        periodicity: Option<Periodicity>,
    ) -> Result<GradedMackeyFunctor> {
        if lo > hi {
            return Err(Error::Shape("empty degree window".into()));
        }
        for k in lo..=hi {
            if !degrees.contains_key(&k) {
                return Err(Error::Shape(format!("degree {k} missing from the window")));
            }
        }
        Ok(GradedMackeyFunctor {
            lo,
            hi,
            degrees,
            periodicity,
        })
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn periodicity(&self) -> Option<Periodicity> {
        self.periodicity
    }

    pub fn at(&self, degree: i64) -> Result<&Arc<MackeyFunctor>> {
        self.degrees.get(&degree).ok_or_else(|| {
            Error::Shape(format!(
                "degree {degree} is outside the declared window [{}, {}]",
                self.lo, self.hi
            ))
        })
    }

    /// The declared shift isomorphism on a level (identity on shared bases).
    pub fn shift_iso(&self, degree: i64, sub: usize) -> Result<QMatrix> {
        let p = self
            .periodicity
            .ok_or_else(|| Error::Shape("no periodicity declared".into()))?;
        let source = self.at(degree)?;
        let target = self.at(degree + p.period)?;
        assert_eq!(source.level(sub).dim, target.level(sub).dim);
        Ok(QMatrix::identity(source.level(sub).dim))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{enumerate_subgroups, parse_group_spec};

    fn lattice(spec: &str) -> Arc<SubgroupLattice> {
        enumerate_subgroups(&Arc::new(parse_group_spec(spec).unwrap())).unwrap()
    }

    #[test]
    fn builtins_pass_axioms() {
        assert!(constant_green(&lattice("C2")).axioms_check().is_empty());
        assert!(constant_green(&lattice("C2xC4")).axioms_check().is_empty());
        assert!(burnside_mackey(&lattice("S3")).axioms_check().is_empty());
        assert!(burnside_mackey(&lattice("C6")).axioms_check().is_empty());
        assert!(constant_green(&lattice("D4")).axioms_check().is_empty());
        assert!(burnside_mackey(&lattice("D4")).axioms_check().is_empty());
    }

    #[test]
    fn corrupted_transfer_is_reported() {
        let lat = lattice("C4");
        let mut m = constant_green(&lat);
        let key = (lat.full_index(), lat.trivial_index());
        let t = m.tr.get_mut(&key).unwrap();
        *t.at_mut(0, 0) = rat(17);
        let report = m.axioms_check();
        assert!(!report.is_empty());
        assert!(
            report
                .iter()
                .any(|v| v.contains("tr transitivity") || v.contains("double coset")),
            "violation names the broken law: {report:?}"
        );
    }

    #[test]
    fn constant_green_transfer_is_weyl_order() {
        let lat = lattice("C2");
        let m = constant_green(&lat);
        assert_eq!(*m.tr(lat.full_index(), lat.trivial_index()).at(0, 0), rat(2));
    }

    #[test]
    fn burnside_mackey_examples() {
        let lat = lattice("C2");
        let m = burnside_mackey(&lat);
        // level e = A(e) has dim 1, level C2 = A(C2) has dim 2
        assert_eq!(m.level(lat.trivial_index()).dim, 1);
        assert_eq!(m.level(lat.full_index()).dim, 2);
        // tr^{C2}_e ([e/e]) = [C2/e]: basis of A(C2) is [C2/e], [C2/C2]
        let t = m.tr(lat.full_index(), lat.trivial_index());
        assert_eq!(t.mul_vec(&[rat(1)]), vec![rat(1), rat(0)]);
    }

    #[test]
    fn action_examples() {
        let lat = lattice("C4");
        let m = constant_green(&lat);
        // [G/G] acts as the identity everywhere
        let unit = BurnsideElement::unit(&lat);
        for class in 0..lat.class_count() {
            assert!(m.burnside_action(class, &unit).unwrap().is_identity());
        }
        // [G/e] acts on the top level of the constant functor as |G|
        let free = BurnsideElement::orbit(&lat, lat.trivial_index());
        let top_class = lat.class_of(lat.full_index());
        let a = m.burnside_action(top_class, &free).unwrap();
        assert_eq!(*a.at(0, 0), rat(4));
        // lattice mismatch
        let other = BurnsideElement::unit(&lattice("C4"));
        assert!(m.burnside_action(0, &other).is_err());
    }

    #[test]
    fn burnside_functor_action_is_multiplication() {
        // On the Burnside Mackey functor, a acts on A(K) as multiplication
        // by restrict(a, K); compare against the mark-based product.
        for spec in ["C4", "C6", "S3"] {
            let lat = lattice(spec);
            let m = burnside_mackey(&lat);
            for class in 0..lat.class_count() {
                let k = lat.class_rep(class);
                let sub = lat.sublattice(k).unwrap();
                let (reps, _) = inner_classes(&lat, k);
                for a_class in 0..lat.class_count() {
                    let a = BurnsideElement::orbit(&lat, lat.class_rep(a_class));
                    let action = m.burnside_action(class, &a).unwrap();
                    let ra = a.restrict(k).unwrap();
                    for (col, &j) in reps.iter().enumerate() {
                        let inner_j = sub.to_inner[&j];
                        let basis_el = BurnsideElement::orbit(&ra.sub.lattice, inner_j);
                        let product = ra.element.multiply(&basis_el).unwrap();
                        let col_vec = action.col(col);
                        for (row, &jr) in reps.iter().enumerate() {
                            let inner_class = ra.sub.lattice.class_of(sub.to_inner[&jr]);
                            assert_eq!(
                                col_vec[row],
                                product.coeff(inner_class),
                                "{spec}: class {class}, a from {a_class}, basis {col}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn idempotent_piece_examples() {
        // Burnside functor: V_H is one-dimensional for every H
        let lat = lattice("C6");
        let m = burnside_mackey(&lat);
        for class in 0..lat.class_count() {
            let v = m.idempotent_piece(class).unwrap();
            assert_eq!(v.dim, 1, "class {class}");
        }
        // constant functor: V_e = Q, V_H = 0 otherwise
        let m = constant_green(&lat);
        for class in 0..lat.class_count() {
            let v = m.idempotent_piece(class).unwrap();
            let expect = if lat.class_rep(class) == lat.trivial_index() { 1 } else { 0 };
            assert_eq!(v.dim, expect, "class {class}");
        }
    }

    #[test]
    fn quotient_by_transfers_examples() {
        let lat = lattice("C6");
        let mb = burnside_mackey(&lat);
        let mc = constant_green(&lat);
        for class in 0..lat.class_count() {
            assert_eq!(mb.quotient_by_transfers(class).unwrap().dim, 1);
            let expect = if lat.class_rep(class) == lat.trivial_index() { 1 } else { 0 };
            assert_eq!(mc.quotient_by_transfers(class).unwrap().dim, expect);
        }
    }

    #[test]
    fn crosscheck_and_projector_resolution() {
        for spec in ["C6", "S3"] {
            let lat = lattice(spec);
            for m in [burnside_mackey(&lat), constant_green(&lat)] {
                for class in 0..lat.class_count() {
                    let rep = m.crosscheck_split(class).unwrap();
                    assert!(rep.passed(), "{spec}/{}: {:?}", m.name(), rep.mismatches);
                }
                // sum of idempotent projectors at each level is the identity
                for class in 0..lat.class_count() {
                    let k = lat.class_rep(class);
                    let dim = m.level(k).dim;
                    let mut total = QMatrix::zeros(dim, dim);
                    for hc in 0..lat.class_count() {
                        let e = gluck_idempotent(&lat, hc);
                        total = total.add(&m.burnside_action(class, &e).unwrap());
                    }
                    assert!(total.is_identity(), "{spec}/{}: level {k}", m.name());
                }
            }
        }
    }

    #[test]
    fn action_is_a_unital_ring_action() {
        let lat = lattice("C6");
        let m = burnside_mackey(&lat);
        let mut state: u64 = 42;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 5) as i64 - 2
        };
        for _ in 0..10 {
            let a = BurnsideElement::from_class_coeffs(
                &lat,
                (0..lat.class_count()).map(|c| (c, rat(next()))).collect(),
            );
            let b = BurnsideElement::from_class_coeffs(
                &lat,
                (0..lat.class_count()).map(|c| (c, rat(next()))).collect(),
            );
            let ab = a.multiply(&b).unwrap();
            for class in 0..lat.class_count() {
                let lhs = m.burnside_action(class, &ab).unwrap();
                let rhs = m
                    .burnside_action(class, &a)
                    .unwrap()
                    .mul(&m.burnside_action(class, &b).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn graded_window_discipline() {
        let lat = lattice("C2");
        let m = Arc::new(constant_green(&lat));
        let degrees: BTreeMap<i64, Arc<MackeyFunctor>> =
            (-2..=2).map(|k| (k, Arc::clone(&m))).collect();
        let g =
            GradedMackeyFunctor::new(-2, 2, degrees, Some(Periodicity { period: 2 })).unwrap();
        assert!(g.at(0).is_ok());
        assert!(g.at(3).is_err(), "outside the window is undefined, not zero");
        assert!(g.shift_iso(0, 0).unwrap().is_identity());
        assert_eq!(MackeyFunctor::zero(&lat).level(0).dim, 0);
    }
}

