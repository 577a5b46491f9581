//! Finite groups by multiplication table, their full subgroup lattices with
//! conjugacy classes, normalizers, Weyl groups, Mobius values, and the
//! conjugation-exponent homomorphism on cyclic subgroups.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::QMatrix;

/// Hard bound on constructible group order (tables are dense).
const MAX_TABLE_ORDER: usize = 256;
/// Default bound for subgroup-lattice enumeration.
pub const DEFAULT_LATTICE_BOUND: usize = 48;

/// A finite group given by an explicit multiplication table. The identity is
/// always element 0; the table is verified at construction.
#[derive(Clone)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    element_names: Vec<String>,
    abelian: bool,
    abelian_factors: Option<Vec<usize>>,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order)
    }
}

impl FiniteGroup {
    pub fn from_table(
        name: String,
        element_names: Vec<String>,
        table: Vec<Vec<usize>>,
        abelian_factors: Option<Vec<usize>>,
    ) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 || n > MAX_TABLE_ORDER {
            return Err(Error::OrderBound {
                order: n,
                bound: MAX_TABLE_ORDER,
            });
        }
        if element_names.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("multiplication table is not square".into()));
        }
        let mul: Vec<usize> = table.into_iter().flatten().collect();
        if mul.iter().any(|&x| x >= n) {
            return Err(Error::Shape("table entry out of range".into()));
        }
        let at = |a: usize, b: usize| mul[a * n + b];
        // identity at index 0
        for x in 0..n {
            if at(0, x) != x || at(x, 0) != x {
                return Err(Error::Shape("element 0 is not an identity".into()));
            }
        }
        // associativity
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(Error::Shape(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        // inverses
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| at(a, b) == 0 && at(b, a) == 0) {
                Some(b) => inv[a] = b,
                None => return Err(Error::Shape(format!("element {a} has no inverse"))),
            }
        }
        let abelian = (0..n).all(|a| (0..n).all(|b| at(a, b) == at(b, a)));
        if abelian_factors.is_some() && !abelian {
            return Err(Error::Shape(
                "abelian factor description on a nonabelian table".into(),
            ));
        }
        Ok(FiniteGroup {
            name,
            order: n,
            mul,
            inv,
            element_names,
            abelian,
            abelian_factors,
        })
    }

    pub fn cyclic(n: usize) -> Result<FiniteGroup> {
        if n == 0 {
            return Err(Error::Shape("cyclic group of order 0".into()));
        }
        if n > MAX_TABLE_ORDER {
            return Err(Error::OrderBound {
                order: n,
                bound: MAX_TABLE_ORDER,
            });
        }
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        let names = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{k}"),
            })
            .collect();
        FiniteGroup::from_table(format!("C{n}"), names, table, Some(vec![n]))
    }

    pub fn direct_product(&self, other: &FiniteGroup) -> Result<FiniteGroup> {
        let n = self.order * other.order;
        if n > MAX_TABLE_ORDER {
            return Err(Error::OrderBound {
                order: n,
                bound: MAX_TABLE_ORDER,
            });
        }
        let idx = |a: usize, b: usize| a * other.order + b;
        let mut table = vec![vec![0usize; n]; n];
        for a1 in 0..self.order {
            for b1 in 0..other.order {
                for a2 in 0..self.order {
                    for b2 in 0..other.order {
                        table[idx(a1, b1)][idx(a2, b2)] =
                            idx(self.mul(a1, a2), other.mul(b1, b2));
                    }
                }
            }
        }
        let names = (0..self.order)
            .flat_map(|a| {
                (0..other.order).map(move |b| (a, b))
            })
            .map(|(a, b)| format!("({},{})", self.element_names[a], other.element_names[b]))
            .collect();
        let factors = match (&self.abelian_factors, &other.abelian_factors) {
            (Some(f), Some(g)) => {
                let mut v = f.clone();
                v.extend(g);
                Some(v)
            }
            _ => None,
        };
        FiniteGroup::from_table(
            format!("{}x{}", self.name, other.name),
            names,
            table,
            factors,
        )
    }

    fn from_permutations(name: &str, gens: &[Vec<usize>]) -> Result<FiniteGroup> {
        let deg = gens[0].len();
        let id: Vec<usize> = (0..deg).collect();
        let mut elems: Vec<Vec<usize>> = vec![id.clone()];
        let mut seen: BTreeSet<Vec<usize>> = elems.iter().cloned().collect();
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let p = &elems[i];
                let q: Vec<usize> = (0..deg).map(|x| g[p[x]]).collect();
                if seen.insert(q.clone()) {
                    elems.push(q);
                }
            }
            i += 1;
        }
        let mut rest: Vec<Vec<usize>> = elems.into_iter().filter(|p| *p != id).collect();
        rest.sort();
        let mut elems = vec![id];
        elems.append(&mut rest);
        let index: BTreeMap<Vec<usize>, usize> =
            elems.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let n = elems.len();
        let mut table = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                let p: Vec<usize> = (0..deg).map(|x| elems[a][elems[b][x]]).collect();
                table[a][b] = index[&p];
            }
        }
        let names = elems.iter().map(|p| cycle_notation(p)).collect();
        FiniteGroup::from_table(name.to_string(), names, table, None)
    }

    pub fn symmetric_3() -> FiniteGroup {
        FiniteGroup::from_permutations("S3", &[vec![1, 0, 2], vec![1, 2, 0]])
            .expect("S3 table is a group")
    }

    pub fn dihedral_4() -> FiniteGroup {
        // Symmetries of the square: rotation and a reflection.
        FiniteGroup::from_permutations("D4", &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]])
            .expect("D4 table is a group")
    }

    pub fn quaternion_8() -> FiniteGroup {
        // Elements 1, -1, i, -i, j, -j, k, -k as (sign, letter) pairs.
        let letters = ["1", "i", "j", "k"];
        let name = |s: usize, l: usize| {
            if s == 0 {
                letters[l].to_string()
            } else {
                format!("-{}", letters[l])
            }
        };
        // letter products: (result letter, sign), with 0 = "1".
        let lt = |a: usize, b: usize| -> (usize, usize) {
            match (a, b) {
                (0, x) => (x, 0),
                (x, 0) => (x, 0),
                (1, 1) | (2, 2) | (3, 3) => (0, 1),
                (1, 2) => (3, 0),
                (2, 1) => (3, 1),
                (2, 3) => (1, 0),
                (3, 2) => (1, 1),
                (3, 1) => (2, 0),
                (1, 3) => (2, 1),
                _ => unreachable!(),
            }
        };
        let idx = |s: usize, l: usize| 2 * l + s;
        let mut table = vec![vec![0usize; 8]; 8];
        let mut names = vec![String::new(); 8];
        for s in 0..2 {
            for l in 0..4 {
                names[idx(s, l)] = name(s, l);
            }
        }
        for s1 in 0..2 {
            for l1 in 0..4 {
                for s2 in 0..2 {
                    for l2 in 0..4 {
                        let (l, s) = lt(l1, l2);
                        table[idx(s1, l1)][idx(s2, l2)] = idx((s1 + s2 + s) % 2, l);
                    }
                }
            }
        }
        FiniteGroup::from_table("Q8".to_string(), names, table, None)
            .expect("Q8 table is a group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let mut base = if k < 0 { self.inv(a) } else { a };
        let mut e = k.unsigned_abs();
        let mut acc = 0usize;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    pub fn abelian_factors(&self) -> Option<&[usize]> {
        self.abelian_factors.as_deref()
    }

    pub fn element_name(&self, i: usize) -> &str {
        &self.element_names[i]
    }
}

fn cycle_notation(p: &[usize]) -> String {
    let n = p.len();
    let mut seen = vec![false; n];
    let mut out = String::new();
    for start in 0..n {
        if seen[start] || p[start] == start {
            seen[start] = true;
            continue;
        }
        let mut cyc = vec![start];
        seen[start] = true;
        let mut x = p[start];
        while x != start {
            seen[x] = true;
            cyc.push(x);
            x = p[x];
        }
        out.push('(');
        out.push_str(&cyc.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(""));
        out.push(')');
    }
    if out.is_empty() {
        "e".to_string()
    } else {
        out
    }
}

/// Group-spec grammar: `spec := atom ("x" atom)*`,
/// `atom := "C" int | "S3" | "D4" | "Q8"`; case-insensitive, no whitespace.
pub fn parse_group_spec(text: &str) -> Result<FiniteGroup> {
    if text.is_empty() {
        return Err(Error::Parse {
            pos: 0,
            msg: "empty group spec".into(),
        });
    }
    if let Some(pos) = text.find(char::is_whitespace) {
        return Err(Error::Parse {
            pos,
            msg: "whitespace is not allowed in a group spec".into(),
        });
    }
    let mut atoms: Vec<(usize, &str)> = Vec::new();
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        if ch == 'x' || ch == 'X' {
            atoms.push((start, &text[start..i]));
            start = i + 1;
        }
    }
    atoms.push((start, &text[start..]));
    let mut group: Option<FiniteGroup> = None;
    for (pos, atom) in atoms {
        if atom.is_empty() {
            return Err(Error::Parse {
                pos,
                msg: "empty atom in group spec".into(),
            });
        }
        let g = parse_atom(atom, pos)?;
        group = Some(match group {
            None => g,
            Some(acc) => acc.direct_product(&g)?,
        });
    }
    Ok(group.unwrap())
}

fn parse_atom(atom: &str, pos: usize) -> Result<FiniteGroup> {
    let upper = atom.to_ascii_uppercase();
    match upper.as_str() {
        "S3" => return Ok(FiniteGroup::symmetric_3()),
        "D4" => return Ok(FiniteGroup::dihedral_4()),
        "Q8" => return Ok(FiniteGroup::quaternion_8()),
        _ => {}
    }
    if let Some(num) = upper.strip_prefix('C') {
        if num.is_empty() || !num.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse {
                pos,
                msg: format!("malformed cyclic atom {atom:?}"),
            });
        }
        let n: usize = num.parse().map_err(|_| Error::OrderBound {
            order: usize::MAX,
            bound: MAX_TABLE_ORDER,
        })?;
        if n == 0 {
            return Err(Error::Parse {
                pos,
                msg: "cyclic group of order 0".into(),
            });
        }
        return FiniteGroup::cyclic(n);
    }
    Err(Error::UnknownGroup(atom.to_string()))
}

/// A subgroup as a membership bit-set over the ambient group's elements.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub mask: u64,
    pub order: usize,
    pub elements: Vec<usize>,
    pub cyclic: bool,
    /// Chosen generator for cyclic subgroups: the smallest element index that
    /// generates the subgroup. Fixed at lattice construction; character
    /// labels downstream depend on it.
    pub generator: Option<usize>,
    /// Structure label, e.g. "C4", "C2xC2", or "N8" for nonabelian.
    pub structure: String,
}

/// The Weyl group W_G H = N_G H / H with its own multiplication table and a
/// chosen ambient coset representative for each element.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub group: Arc<FiniteGroup>,
    /// Ambient element representing each Weyl element (index-aligned).
    pub coset_reps: Vec<usize>,
}

/// A Weyl group together with one invertible matrix per element.
#[derive(Clone, Debug)]
pub struct WeylAction {
    pub weyl: Arc<FiniteGroup>,
    pub matrices: Vec<QMatrix>,
}

impl WeylAction {
    pub fn trivial(weyl: Arc<FiniteGroup>, dim: usize) -> WeylAction {
        let matrices = (0..weyl.order()).map(|_| QMatrix::identity(dim)).collect();
        WeylAction { weyl, matrices }
    }

    /// Check the group law, identity and invertibility of the matrices.
    pub fn validate(&self) -> Result<()> {
        let n = self.weyl.order();
        if self.matrices.len() != n {
            return Err(Error::Shape("one matrix per Weyl element required".into()));
        }
        if !self.matrices[0].is_identity() {
            return Err(Error::Shape("identity element must act as identity".into()));
        }
        for a in 0..n {
            if self.matrices[a].inverse().is_none() {
                return Err(Error::Shape(format!("action of element {a} is singular")));
            }
            for b in 0..n {
                let ab = self.weyl.mul(a, b);
                if self.matrices[a].mul(&self.matrices[b]) != self.matrices[ab] {
                    return Err(Error::Shape(format!(
                        "action matrices violate the group law at ({a},{b})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Full subgroup lattice: all subgroups, inclusion, conjugacy classes with
/// representatives, normalizers, Weyl groups, and the Mobius table.
pub struct SubgroupLattice {
    group: Arc<FiniteGroup>,
    subgroups: Vec<Subgroup>,
    mask_index: BTreeMap<u64, usize>,
    class_of: Vec<usize>,
    class_reps: Vec<usize>,
    class_members: Vec<Vec<usize>>,
    normalizers: Vec<u64>,
    weyl: Vec<WeylGroup>,
    mobius: BTreeMap<(usize, usize), i64>,
}

impl std::fmt::Debug for SubgroupLattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "SubgroupLattice({}, {} subgroups, {} classes)",
            self.group.name(),
            self.subgroups.len(),
            self.class_reps.len()
        )
    }
}

fn mask_elements(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// Enumerate the subgroup lattice (default order bound).
pub fn enumerate_subgroups(group: &Arc<FiniteGroup>) -> Result<Arc<SubgroupLattice>> {
    enumerate_subgroups_bounded(group, DEFAULT_LATTICE_BOUND)
}

pub fn enumerate_subgroups_bounded(
    group: &Arc<FiniteGroup>,
    bound: usize,
) -> Result<Arc<SubgroupLattice>> {
    if group.order() > bound {
        return Err(Error::OrderBound {
            order: group.order(),
            bound,
        });
    }
    let g = group.as_ref();
    let n = g.order();
    let closure = |seed: u64| -> u64 {
        let mut elems: Vec<usize> = mask_elements(seed | 1);
        let mut mask = seed | 1;
        let mut i = 0;
        while i < elems.len() {
            let a = elems[i];
            for j in 0..elems.len() {
                let b = elems[j];
                for p in [g.mul(a, b), g.mul(b, a)] {
                    if mask >> p & 1 == 0 {
                        mask |= 1 << p;
                        elems.push(p);
                    }
                }
            }
            i += 1;
        }
        mask
    };
    // Cyclic subgroups, then close under pairwise joins with cyclic atoms.
    let mut set: BTreeSet<u64> = BTreeSet::new();
    set.insert(1);
    let atoms: Vec<u64> = (0..n).map(|a| closure(1 | (1 << a))).collect();
    set.extend(atoms.iter().copied());
    loop {
        let mut fresh: Vec<u64> = Vec::new();
        for &h in &set {
            for &a in &atoms {
                if a & h == a {
                    continue;
                }
                let j = closure(h | a);
                if !set.contains(&j) {
                    fresh.push(j);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        set.extend(fresh);
    }
    let mut masks: Vec<u64> = set.into_iter().collect();
    masks.sort_by_key(|&m| (m.count_ones(), m));
    let mask_index: BTreeMap<u64, usize> = masks.iter().copied().enumerate().map(|(i, m)| (m, i)).collect();

    let subgroups: Vec<Subgroup> = masks
        .iter()
        .map(|&mask| {
            let elements = mask_elements(mask);
            let order = elements.len();
            let generator = elements
                .iter()
                .copied()
                .find(|&e| g.element_order(e) == order);
            let cyclic = generator.is_some();
            let structure = structure_name(g, &elements);
            Subgroup {
                mask,
                order,
                elements,
                cyclic,
                generator,
                structure,
            }
        })
        .collect();

    // Conjugacy classes of subgroups.
    let conj_mask = |mask: u64, x: usize| -> u64 {
        let mut out = 0u64;
        for e in mask_elements(mask) {
            out |= 1 << g.conj(x, e);
        }
        out
    };
    let mut class_of = vec![usize::MAX; subgroups.len()];
    let mut class_reps = Vec::new();
    let mut class_members: Vec<Vec<usize>> = Vec::new();
    for i in 0..subgroups.len() {
        if class_of[i] != usize::MAX {
            continue;
        }
        let cid = class_reps.len();
        let mut members = BTreeSet::new();
        for x in 0..n {
            members.insert(mask_index[&conj_mask(subgroups[i].mask, x)]);
        }
        for &m in &members {
            class_of[m] = cid;
        }
        class_reps.push(i);
        class_members.push(members.into_iter().collect());
    }

    // Normalizers and Weyl groups at every subgroup.
    let normalizers: Vec<u64> = subgroups
        .iter()
        .map(|h| {
            let mut m = 0u64;
            for x in 0..n {
                if conj_mask(h.mask, x) == h.mask {
                    m |= 1 << x;
                }
            }
            m
        })
        .collect();
    let weyl: Vec<WeylGroup> = (0..subgroups.len())
        .map(|i| build_weyl(g, &subgroups[i], normalizers[i]))
        .collect::<Result<_>>()?;

    // Mobius values for every pair K <= H by chain counting:
    // alt(K,H) = [K=H] - sum_{K<L<=H} alt(L,H).
    let mut mobius: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for h in 0..subgroups.len() {
        let hm = subgroups[h].mask;
        let inside: Vec<usize> = (0..subgroups.len())
            .filter(|&l| subgroups[l].mask & hm == subgroups[l].mask)
            .collect();
        // Process K from large to small so that alt(L,H) is known for L > K.
        for &k in inside.iter().rev() {
            let km = subgroups[k].mask;
            let mut v: i64 = if k == h { 1 } else { 0 };
            for &l in &inside {
                if l == k {
                    continue;
                }
                let lm = subgroups[l].mask;
                if lm & km == km {
                    v -= mobius[&(l, h)];
                }
            }
            mobius.insert((k, h), v);
        }
    }

    Ok(Arc::new(SubgroupLattice {
        group: Arc::clone(group),
        subgroups,
        mask_index,
        class_of,
        class_reps,
        class_members,
        normalizers,
        weyl,
        mobius,
    }))
}

fn build_weyl(g: &FiniteGroup, h: &Subgroup, normalizer: u64) -> Result<WeylGroup> {
    let nor = mask_elements(normalizer);
    let mut coset_of: BTreeMap<usize, usize> = BTreeMap::new();
    let mut reps: Vec<usize> = Vec::new();
    for &x in &nor {
        if coset_of.contains_key(&x) {
            continue;
        }
        let idx = reps.len();
        for &e in &h.elements {
            coset_of.insert(g.mul(x, e), idx);
        }
        reps.push(x);
    }
    let w = reps.len();
    let table: Vec<Vec<usize>> = (0..w)
        .map(|a| (0..w).map(|b| coset_of[&g.mul(reps[a], reps[b])]).collect())
        .collect();
    let names = reps.iter().map(|&r| g.element_name(r).to_string()).collect();
    let group = FiniteGroup::from_table(format!("W({})", h.structure), names, table, None)?;
    Ok(WeylGroup {
        group: Arc::new(group),
        coset_reps: reps,
    })
}

/// Structure label for a subgroup: invariant factors for abelian subgroups
/// (matched through element-order counts), named small nonabelian groups,
/// otherwise "N{order}".
fn structure_name(g: &FiniteGroup, elements: &[usize]) -> String {
    let order = elements.len();
    if order == 1 {
        return "e".to_string();
    }
    let abelian = elements
        .iter()
        .all(|&a| elements.iter().all(|&b| g.mul(a, b) == g.mul(b, a)));
    if abelian {
        let counts: BTreeMap<usize, usize> = divisors(order)
            .into_iter()
            .map(|m| {
                let c = elements.iter().filter(|&&e| g.pow(e, m as i64) == 0).count();
                (m, c)
            })
            .collect();
        for candidate in invariant_factor_chains(order) {
            let ok = counts.iter().all(|(&m, &c)| {
                candidate.iter().map(|&d| gcd(m, d)).product::<usize>() == c
            });
            if ok {
                return candidate
                    .iter()
                    .map(|d| format!("C{d}"))
                    .collect::<Vec<_>>()
                    .join("x");
            }
        }
        unreachable!("abelian group matches an invariant-factor chain");
    }
    match order {
        6 => "S3".to_string(),
        8 => {
            let order2 = elements.iter().filter(|&&e| g.element_order(e) == 2).count();
            if order2 == 1 {
                "Q8".to_string()
            } else {
                "D4".to_string()
            }
        }
        _ => format!("N{order}"),
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// All chains d1 | d2 | ... | dk with product n, each di > 1.
fn invariant_factor_chains(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize) -> Vec<Vec<usize>> {
        // chains (d1 | ... | dk), product n, dk = last <= max, read reversed
        let mut out = Vec::new();
        for d in divisors(n) {
            if d == 1 || d > max || max % d != 0 {
                continue;
            }
            if d == n {
                out.push(vec![d]);
            } else {
                for mut rest in rec(n / d, d) {
                    rest.push(d);
                    out.push(rest);
                }
            }
        }
        out
    }
    rec(n, n)
}

impl SubgroupLattice {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn subgroup_count(&self) -> usize {
        self.subgroups.len()
    }

    pub fn subgroup(&self, i: usize) -> &Subgroup {
        &self.subgroups[i]
    }

    pub fn index_of_mask(&self, mask: u64) -> Option<usize> {
        self.mask_index.get(&mask).copied()
    }

    pub fn trivial_index(&self) -> usize {
        0
    }

    pub fn full_index(&self) -> usize {
        self.subgroups.len() - 1
    }

    /// Containment K <= H as subgroups.
    pub fn leq(&self, k: usize, h: usize) -> bool {
        let (km, hm) = (self.subgroups[k].mask, self.subgroups[h].mask);
        km & hm == km
    }

    /// Indices of all subgroups contained in H (including H).
    pub fn subgroups_of(&self, h: usize) -> Vec<usize> {
        (0..self.subgroups.len())
            .filter(|&k| self.leq(k, h))
            .collect()
    }

    pub fn class_count(&self) -> usize {
        self.class_reps.len()
    }

    pub fn class_of(&self, sub: usize) -> usize {
        self.class_of[sub]
    }

    /// Representative subgroup index of a class (canonical order: classes are
    /// sorted by (order, lattice index) of their representative).
    pub fn class_rep(&self, class: usize) -> usize {
        self.class_reps[class]
    }

    pub fn class_members(&self, class: usize) -> &[usize] {
        &self.class_members[class]
    }

    pub fn normalizer_mask(&self, sub: usize) -> u64 {
        self.normalizers[sub]
    }

    pub fn weyl(&self, sub: usize) -> &WeylGroup {
        &self.weyl[sub]
    }

    /// Index of g H g^{-1}.
    pub fn conjugate_subgroup(&self, sub: usize, g: usize) -> usize {
        let gr = self.group.as_ref();
        let mut m = 0u64;
        for &e in &self.subgroups[sub].elements {
            m |= 1 << gr.conj(g, e);
        }
        self.mask_index[&m]
    }

    /// Mobius value mu(K, H) = sum_i (-1)^i c_i over strictly increasing
    /// chains from K to H; mu(H, H) = 1.
    pub fn mobius(&self, k: usize, h: usize) -> Result<i64> {
        if !self.leq(k, h) {
            return Err(Error::Containment(format!(
                "subgroup {k} is not contained in subgroup {h}"
            )));
        }
        Ok(self.mobius[&(k, h)])
    }

    /// Conjugation exponent: for cyclic H with chosen generator g0 and a
    /// normalizing element a, the unique m in 1..=n with a^{-1} g0 a = g0^m.
    pub fn m_h(&self, h: usize, a: usize) -> Result<usize> {
        let sub = &self.subgroups[h];
        let Some(g0) = sub.generator else {
            return Err(Error::Shape(format!(
                "subgroup {h} is not cyclic; the conjugation exponent needs a generator"
            )));
        };
        if self.normalizers[h] >> a & 1 != 1 {
            return Err(Error::Domain(format!(
                "element {a} does not normalize subgroup {h}"
            )));
        }
        let g = self.group.as_ref();
        let x = g.mul(g.mul(g.inv(a), g0), a);
        let n = sub.order;
        for m in 1..=n {
            if g.pow(g0, m as i64) == x {
                return Ok(m);
            }
        }
        Err(Error::Internal(
            "conjugate of a generator must be a power of it".into(),
        ))
    }

    /// The subgroup as a group in its own right: re-indexed multiplication
    /// table plus the element map back to the ambient group.
    pub fn subgroup_group(&self, sub: usize) -> Result<SubgroupContext> {
        let s = &self.subgroups[sub];
        let g = self.group.as_ref();
        let to_parent = s.elements.clone();
        let from_parent: BTreeMap<usize, usize> =
            to_parent.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let table: Vec<Vec<usize>> = to_parent
            .iter()
            .map(|&a| {
                to_parent
                    .iter()
                    .map(|&b| from_parent[&g.mul(a, b)])
                    .collect()
            })
            .collect();
        let names = to_parent
            .iter()
            .map(|&e| g.element_name(e).to_string())
            .collect();
        let abelian_factors = invariant_factors_of(g, &s.elements);
        let group = FiniteGroup::from_table(s.structure.clone(), names, table, abelian_factors)?;
        Ok(SubgroupContext {
            group: Arc::new(group),
            to_parent,
            from_parent,
        })
    }

    /// The subgroup's own lattice plus the translation of ambient subgroups
    /// contained in it to its internal lattice indices.
    pub fn sublattice(&self, sub: usize) -> Result<SubLattice> {
        let ctx = self.subgroup_group(sub)?;
        let lattice = enumerate_subgroups_bounded(&ctx.group, DEFAULT_LATTICE_BOUND)?;
        let mut to_inner = BTreeMap::new();
        for &j in &self.subgroups_of(sub) {
            let mut inner_mask = 0u64;
            for &e in &self.subgroups[j].elements {
                inner_mask |= 1 << ctx.from_parent[&e];
            }
            let idx = lattice
                .index_of_mask(inner_mask)
                .expect("subgroups restrict to subgroups");
            to_inner.insert(j, idx);
        }
        Ok(SubLattice {
            context: ctx,
            lattice,
            to_inner,
        })
    }

    /// Display label for a subgroup, e.g. "H3=C2".
    pub fn label(&self, sub: usize) -> String {
        format!("H{}={}", sub, self.subgroups[sub].structure)
    }
}

fn invariant_factors_of(g: &FiniteGroup, elements: &[usize]) -> Option<Vec<usize>> {
    let abelian = elements
        .iter()
        .all(|&a| elements.iter().all(|&b| g.mul(a, b) == g.mul(b, a)));
    if !abelian {
        return None;
    }
    let order = elements.len();
    if order == 1 {
        return Some(vec![]);
    }
    let counts: BTreeMap<usize, usize> = divisors(order)
        .into_iter()
        .map(|m| {
            let c = elements.iter().filter(|&&e| g.pow(e, m as i64) == 0).count();
            (m, c)
        })
        .collect();
    invariant_factor_chains(order).into_iter().find(|candidate| {
        counts
            .iter()
            .all(|(&m, &c)| candidate.iter().map(|&d| gcd(m, d)).product::<usize>() == c)
    })
}

/// A subgroup re-indexed as a standalone group.
pub struct SubgroupContext {
    pub group: Arc<FiniteGroup>,
    pub to_parent: Vec<usize>,
    pub from_parent: BTreeMap<usize, usize>,
}

/// A subgroup's own lattice together with the ambient-to-internal map.
pub struct SubLattice {
    pub context: SubgroupContext,
    pub lattice: Arc<SubgroupLattice>,
    /// ambient subgroup index (contained in the subgroup) -> internal index
    pub to_inner: BTreeMap<usize, usize>,
}
