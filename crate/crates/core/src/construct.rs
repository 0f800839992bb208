//! Derived hyperrings: quotients, 2×2 hypermatrices and localizations,
//! plus good homomorphisms and the transfer of the `(u,v)` property along
//! them.
//!
//! None of the constructions is assumed to be well defined. Each builds
//! its tables from representatives, checks that the choice of
//! representative does not matter, and validates the resulting laws.

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{is_uv_absorbing_primary, RingContext, UVParams};
use crate::error::{ConstructionError, HyperringError, UsageError};
use crate::ideals::{hyperideal_violation, HyperIdeal};
use crate::ring::{Axiom, FiniteHyperring, ValidationReport};
use crate::set::ElementSet;

/// A map preserving `+` exactly and `∘` setwise.
#[derive(Debug, Clone)]
pub struct GoodHom {
    pub source: Arc<RingContext>,
    pub target: Arc<RingContext>,
    pub map: Vec<usize>,
}

impl GoodHom {
    pub fn new(
        source: Arc<RingContext>,
        target: Arc<RingContext>,
        map: Vec<usize>,
    ) -> Result<Self, ConstructionError> {
        if let Some(why) = hom_violation(&source.ring, &target.ring, &map) {
            return Err(ConstructionError::NotWellDefined(why));
        }
        Ok(Self {
            source,
            target,
            map,
        })
    }

    pub fn identity(ctx: Arc<RingContext>) -> Self {
        let map = (0..ctx.ring.size()).collect();
        Self {
            source: ctx.clone(),
            target: ctx,
            map,
        }
    }

    pub fn image(&self, s: &ElementSet) -> ElementSet {
        self.target.ring.set_of(s.iter().map(|x| self.map[x]))
    }

    pub fn preimage(&self, s: &ElementSet) -> ElementSet {
        self.source
            .ring
            .set_of((0..self.map.len()).filter(|&x| s.contains(self.map[x])))
    }

    pub fn kernel(&self) -> ElementSet {
        self.preimage(&self.target.ring.singleton(self.target.ring.zero()))
    }

    pub fn is_surjective(&self) -> bool {
        self.image(&self.source.ring.full_set()).len() == self.target.ring.size()
    }

    /// First nonunit sent to a unit, if any.
    pub fn nonunit_to_unit(&self) -> Option<usize> {
        self.source
            .units
            .nonunits
            .iter()
            .find(|&x| self.target.units.is_unit(self.map[x]))
    }
}

fn hom_violation(src: &FiniteHyperring, tgt: &FiniteHyperring, map: &[usize]) -> Option<String> {
    let n = src.size();
    if map.len() != n || map.iter().any(|&y| y >= tgt.size()) {
        return Some("map is not total into the target carrier".into());
    }
    for x in 0..n {
        for y in 0..n {
            if map[src.add(x, y)] != tgt.add(map[x], map[y]) {
                return Some(format!("η({x}+{y}) ≠ η({x})+η({y})"));
            }
            let img = tgt.set_of(src.mul(x, y).iter().map(|z| map[z]));
            if img != *tgt.mul(map[x], map[y]) {
                return Some(format!("η({x}∘{y}) ≠ η({x})∘η({y})"));
            }
        }
    }
    None
}

/// `A/P` with its projection.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub ring: Arc<RingContext>,
    pub projection: GoodHom,
    /// Class index of every element of `A`.
    pub class_of: Vec<usize>,
    /// Least representative of every class.
    pub reps: Vec<usize>,
}

/// Cosets of `P`, with `(a+P)∘(b+P) = {c+P : c ∈ a∘b}`.
pub fn quotient(source: Arc<RingContext>, p: &HyperIdeal) -> Result<Quotient, ConstructionError> {
    let ring = &source.ring;
    if !p.is_proper(ring) {
        return Err(UsageError::NotProper.into());
    }
    let n = ring.size();
    let mut class_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for a in 0..n {
        if class_of[a] == usize::MAX {
            let k = reps.len();
            reps.push(a);
            for q in p.members() {
                class_of[ring.add(a, q)] = k;
            }
        }
    }
    let k = reps.len();
    let mut add = vec![0; k * k];
    let mut hmul = vec![ElementSet::empty(k); k * k];
    for i in 0..k {
        for j in 0..k {
            add[i * k + j] = class_of[ring.add(reps[i], reps[j])];
            hmul[i * k + j] =
                ElementSet::from_elems(k, ring.mul(reps[i], reps[j]).iter().map(|c| class_of[c]));
        }
    }
    for a in 0..n {
        for b in 0..n {
            let (i, j) = (class_of[a], class_of[b]);
            let got = ElementSet::from_elems(k, ring.mul(a, b).iter().map(|c| class_of[c]));
            if got != hmul[i * k + j] {
                return Err(ConstructionError::NotWellDefined(format!(
                    "{a}∘{b} gives cosets {got}, representatives {}∘{} give {}",
                    reps[i],
                    reps[j],
                    hmul[i * k + j]
                )));
            }
        }
    }
    let names = reps
        .iter()
        .map(|&r| format!("{}+P", ring.element_name(r)))
        .collect();
    let label = format!("{}/{}", ring.label(), p.members());
    let q = FiniteHyperring::from_flat(k, add, hmul, label)
        .with_names(names)
        .validated()
        .map_err(|e| ConstructionError::Invalid(Box::new(e)))?;
    let target = Arc::new(RingContext::new(q));
    let projection = GoodHom::new(source.clone(), target.clone(), class_of.clone())?;
    Ok(Quotient {
        ring: target,
        projection,
        class_of,
        reps,
    })
}

/// Largest matrix carrier built by default.
pub const DEFAULT_MATRIX_CAP: usize = 256;

/// `M_m(A)` for `m ∈ {1, 2}`. Matrix multiplication does not commute, so
/// the commutativity law is reported in `report` but does not block
/// construction; every other law must hold.
#[derive(Debug, Clone)]
pub struct MatrixHyperring {
    pub ring: FiniteHyperring,
    pub base_size: usize,
    pub m: usize,
    pub report: ValidationReport,
}

impl MatrixHyperring {
    pub fn entries(&self, x: usize) -> Vec<usize> {
        decode(x, self.base_size, self.m)
    }

    pub fn encode(&self, entries: &[usize]) -> usize {
        encode(entries, self.base_size)
    }

    /// The matrix with `a` in the top-left corner and zeros elsewhere.
    pub fn corner(&self, a: usize, zero: usize) -> usize {
        let mut e = vec![zero; self.m * self.m];
        e[0] = a;
        self.encode(&e)
    }

    pub fn is_commutative(&self) -> bool {
        !self
            .report
            .violations
            .iter()
            .any(|v| v.axiom == Axiom::MultiplicativeCommutativity)
    }
}

fn decode(mut x: usize, n: usize, m: usize) -> Vec<usize> {
    let mut e = vec![0; m * m];
    for slot in e.iter_mut().rev() {
        *slot = x % n;
        x /= n;
    }
    e
}

fn encode(entries: &[usize], n: usize) -> usize {
    entries.iter().fold(0, |acc, &e| acc * n + e)
}

/// Entry `(i,j)` of a product is any element of `Σ_k a_ik∘b_kj` (setwise
/// sum), chosen independently per entry.
pub fn matrix_hyperring(
    base: &FiniteHyperring,
    m: usize,
    cap: usize,
) -> Result<MatrixHyperring, ConstructionError> {
    let ring = matrix_tables(base, m, cap)?;
    let report = ring.axiom_report();
    if report
        .violations
        .iter()
        .any(|v| v.axiom != Axiom::MultiplicativeCommutativity)
    {
        return Err(ConstructionError::Invalid(Box::new(
            HyperringError::Axioms(report),
        )));
    }
    Ok(MatrixHyperring {
        ring,
        base_size: base.size(),
        m,
        report,
    })
}

/// The matrix tables without any law checks.
pub fn matrix_tables(
    base: &FiniteHyperring,
    m: usize,
    cap: usize,
) -> Result<FiniteHyperring, ConstructionError> {
    if !(1..=2).contains(&m) {
        return Err(ConstructionError::TooLarge {
            size: (base.size() as u128).saturating_pow((m * m) as u32),
            cap,
        });
    }
    let n = base.size();
    let size = (n as u128).pow((m * m) as u32);
    if size > cap as u128 {
        return Err(ConstructionError::TooLarge { size, cap });
    }
    let size = size as usize;
    let mm = m * m;
    let decoded: Vec<Vec<usize>> = (0..size).map(|x| decode(x, n, m)).collect();

    let add: Vec<usize> = (0..size * size)
        .map(|ab| {
            let (a, b) = (&decoded[ab / size], &decoded[ab % size]);
            let e: Vec<usize> = (0..mm).map(|k| base.add(a[k], b[k])).collect();
            encode(&e, n)
        })
        .collect();

    let hmul: Vec<ElementSet> = (0..size * size)
        .into_par_iter()
        .map(|ab| {
            let (a, b) = (&decoded[ab / size], &decoded[ab % size]);
            let entry_sets: Vec<Vec<usize>> = (0..mm)
                .map(|ij| {
                    let (i, j) = (ij / m, ij % m);
                    let mut acc = base.singleton(base.zero());
                    for k in 0..m {
                        acc = base.add_sets(&acc, base.mul(a[i * m + k], b[k * m + j]));
                    }
                    acc.to_vec()
                })
                .collect();
            let mut out = ElementSet::empty(size);
            cartesian(&entry_sets, &mut Vec::with_capacity(mm), &mut |e| {
                out.insert(encode(e, n));
            });
            out
        })
        .collect();

    let label = format!("M{m}({})", base.label());
    let names = decoded
        .iter()
        .map(|e| {
            let parts: Vec<String> = e.iter().map(|&x| base.element_name(x)).collect();
            format!("[{}]", parts.join(","))
        })
        .collect();
    Ok(FiniteHyperring::from_flat(size, add, hmul, label).with_names(names))
}

fn cartesian(sets: &[Vec<usize>], cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == sets.len() {
        f(cur);
        return;
    }
    for &x in &sets[cur.len()] {
        cur.push(x);
        cartesian(sets, cur, f);
        cur.pop();
    }
}

/// Matrices with every entry in `P`, checked to be a two-sided hyperideal.
pub fn embed_diagonal_ideal(
    mat: &MatrixHyperring,
    p: &HyperIdeal,
) -> Result<ElementSet, UsageError> {
    let ring = &mat.ring;
    let members =
        ring.set_of((0..ring.size()).filter(|&x| mat.entries(x).iter().all(|&e| p.contains(e))));
    if let Some(why) = hyperideal_violation(ring, &members) {
        return Err(UsageError::NotHyperideal(why));
    }
    let right =
        (0..ring.size()).all(|r| members.iter().all(|x| ring.mul(x, r).is_subset(&members)));
    if !right {
        return Err(UsageError::NotHyperideal(
            "not closed under right multiplication".into(),
        ));
    }
    Ok(members)
}

/// A subset containing an identity and closed under `∘`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mcs {
    members: ElementSet,
    identity: usize,
}

impl Mcs {
    pub fn new(ctx: &RingContext, members: ElementSet) -> Result<Self, ConstructionError> {
        let ring = &ctx.ring;
        let Some(identity) = members.intersection(&ctx.units.identities).first() else {
            return Err(ConstructionError::NotMultiplicativelyClosed(format!(
                "{members} has no identity"
            )));
        };
        for s in &members {
            for t in &members {
                if !ring.mul(s, t).is_subset(&members) {
                    return Err(ConstructionError::NotMultiplicativelyClosed(format!(
                        "{members}: {s}∘{t} leaves the set"
                    )));
                }
            }
        }
        Ok(Self { members, identity })
    }

    pub fn members(&self) -> &ElementSet {
        &self.members
    }

    pub fn identity(&self) -> usize {
        self.identity
    }
}

/// Every multiplicatively closed subset, as closures of an identity plus
/// further elements.
pub fn enumerate_mcs(ctx: &RingContext) -> Vec<Mcs> {
    let ring = &ctx.ring;
    let close = |seed: ElementSet| {
        let mut s = seed;
        loop {
            let mut next = s.clone();
            for a in &s {
                for b in &s {
                    next.union_with(ring.mul(a, b));
                }
            }
            if next == s {
                return s;
            }
            s = next;
        }
    };
    let mut seen: BTreeSet<ElementSet> = BTreeSet::new();
    let mut queue: Vec<ElementSet> = ctx
        .units
        .identities
        .iter()
        .map(|e| close(ring.singleton(e)))
        .collect();
    while let Some(s) = queue.pop() {
        if !seen.insert(s.clone()) {
            continue;
        }
        for a in s.complement(ring.size()).iter() {
            let mut t = s.clone();
            t.insert(a);
            let t = close(t);
            if !seen.contains(&t) {
                queue.push(t);
            }
        }
    }
    seen.into_iter()
        .map(|s| Mcs::new(ctx, s).expect("closure of an identity is closed"))
        .collect()
}

/// `S⁻¹A`: classes of pairs `(x, r)` under `(x,r) ~ (y,s)` iff
/// `t∘r∘y = t∘s∘x` as sets for some `t ∈ S`.
#[derive(Debug, Clone)]
pub struct LocalizedRing {
    pub ring: Arc<RingContext>,
    pub s: Mcs,
    s_list: Vec<usize>,
    /// Class of the pair `(x, s_list[i])` at `x * |S| + i`.
    class_of_pair: Vec<usize>,
    /// `a ↦ a/1`; `Err` holds the reason it is not a good homomorphism.
    pub pi: Result<Vec<usize>, String>,
}

impl LocalizedRing {
    pub fn class(&self, x: usize, r: usize) -> usize {
        let i = self
            .s_list
            .iter()
            .position(|&s| s == r)
            .expect("denominator in S");
        self.class_of_pair[x * self.s_list.len() + i]
    }

    /// `S⁻¹B = {b/s : b ∈ B, s ∈ S}`.
    pub fn localize_set(&self, b: &ElementSet) -> ElementSet {
        let k = self.s_list.len();
        self.ring.ring.set_of(
            b.iter()
                .flat_map(|x| (0..k).map(move |i| self.class_of_pair[x * k + i])),
        )
    }

    /// `{a ∈ A : a/1 ∈ T}`.
    pub fn contract(&self, t: &ElementSet) -> Vec<usize> {
        let one = self.s.identity;
        (0..self.class_of_pair.len() / self.s_list.len())
            .filter(|&a| t.contains(self.class(a, one)))
            .collect()
    }
}

pub fn localize(source: &RingContext, s: &Mcs) -> Result<LocalizedRing, ConstructionError> {
    let ring = &source.ring;
    if !source.units.has_identity() {
        return Err(ConstructionError::NoIdentity);
    }
    let n = ring.size();
    let s_list = s.members.to_vec();
    let k = s_list.len();
    let pairs = n * k;
    // t∘r∘y for every t, r ∈ S and y ∈ A.
    let triple = |t: usize, r: usize, y: usize| ring.hyperproduct(&[t, r, y]).unwrap();
    let products: Vec<ElementSet> = (0..k * k * n)
        .map(|idx| triple(s_list[idx / (k * n)], s_list[(idx / n) % k], idx % n))
        .collect();
    let prod = |ti: usize, ri: usize, y: usize| &products[(ti * k + ri) * n + y];
    let related = |p: usize, q: usize| {
        let (x, ri) = (p / k, p % k);
        let (y, si) = (q / k, q % k);
        (0..k).any(|ti| prod(ti, ri, y) == prod(ti, si, x))
    };
    let rel: Vec<Vec<bool>> = (0..pairs)
        .into_par_iter()
        .map(|p| (0..pairs).map(|q| related(p, q)).collect())
        .collect();

    let mut class_of_pair = vec![usize::MAX; pairs];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for p in 0..pairs {
        if class_of_pair[p] != usize::MAX {
            continue;
        }
        let c = classes.len();
        let mut members = vec![p];
        class_of_pair[p] = c;
        let mut i = 0;
        while i < members.len() {
            let q = members[i];
            for r in 0..pairs {
                if class_of_pair[r] == usize::MAX && rel[q][r] {
                    class_of_pair[r] = c;
                    members.push(r);
                }
            }
            i += 1;
        }
        classes.push(members);
    }
    let show = |p: usize| format!("{}/{}", p / k, s_list[p % k]);
    for members in &classes {
        for &p in members {
            for &q in members {
                if !rel[p][q] {
                    let mid = members.iter().copied().find(|&m| rel[p][m] && rel[m][q]);
                    let why = match mid {
                        Some(m) => format!(
                            "{} ~ {} ~ {} but {} ≁ {}",
                            show(p),
                            show(m),
                            show(q),
                            show(p),
                            show(q)
                        ),
                        None => format!(
                            "{} and {} are linked only through a longer chain",
                            show(p),
                            show(q)
                        ),
                    };
                    return Err(ConstructionError::NotTransitive(why));
                }
            }
        }
    }

    let c = classes.len();
    let idx =
        |x: usize, r: usize| class_of_pair[x * k + s_list.iter().position(|&s| s == r).unwrap()];
    let mut add = vec![0; c * c];
    let mut hmul = vec![ElementSet::empty(c); c * c];
    let mut seen = vec![false; c * c];
    for p in 0..pairs {
        for q in 0..pairs {
            let (x, r) = (p / k, s_list[p % k]);
            let (y, s2) = (q / k, s_list[q % k]);
            let (cp, cq) = (class_of_pair[p], class_of_pair[q]);
            let rs = ring.mul(r, s2);
            let mut sum = ElementSet::empty(c);
            for a in ring.mul(r, y) {
                for b in ring.mul(s2, x) {
                    for d in rs {
                        sum.insert(idx(ring.add(a, b), d));
                    }
                }
            }
            let mut prod = ElementSet::empty(c);
            for a in ring.mul(x, y) {
                for d in rs {
                    prod.insert(idx(a, d));
                }
            }
            if sum.len() != 1 {
                return Err(ConstructionError::MultiValuedSum(format!(
                    "{} ⊕ {} = {sum}",
                    show(p),
                    show(q)
                )));
            }
            let slot = cp * c + cq;
            let sum = sum.first().unwrap();
            if !seen[slot] {
                seen[slot] = true;
                add[slot] = sum;
                hmul[slot] = prod;
            } else if add[slot] != sum || hmul[slot] != prod {
                return Err(ConstructionError::NotWellDefined(format!(
                    "{} and {} give different results on other representatives",
                    show(p),
                    show(q)
                )));
            }
        }
    }
    let names = classes.iter().map(|m| show(m[0])).collect();
    let label = format!("{}[S^-1 {}]", ring.label(), s.members);
    let loc = FiniteHyperring::from_flat(c, add, hmul, label)
        .with_names(names)
        .validated()
        .map_err(|e| ConstructionError::Invalid(Box::new(e)))?;
    let one = s.identity;
    let pi_map: Vec<usize> = (0..n).map(|a| idx(a, one)).collect();
    let pi = match hom_violation(ring, &loc, &pi_map) {
        None => Ok(pi_map),
        Some(why) => Err(why),
    };
    Ok(LocalizedRing {
        ring: Arc::new(RingContext::new(loc)),
        s: s.clone(),
        s_list,
        class_of_pair,
        pi,
    })
}

/// `Γ = {a : a∘b ⊆ P for some b ∉ P}`.
pub fn gamma(ring: &FiniteHyperring, p: &ElementSet) -> ElementSet {
    let outside = p.complement(ring.size());
    ring.set_of((0..ring.size()).filter(|&a| outside.iter().any(|b| ring.mul(a, b).is_subset(p))))
}

/// Result of checking one implication of the transfer theorem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TransferOutcome {
    Skipped { reason: String },
    Checked { premise: bool, conclusion: bool },
}

impl TransferOutcome {
    pub fn is_violation(&self) -> bool {
        matches!(
            self,
            TransferOutcome::Checked {
                premise: true,
                conclusion: false
            }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `P` lives in the target; check `η⁻¹(P)`.
    Preimage,
    /// `P` lives in the source; check `η(P)`.
    Image,
}

/// One direction of the transfer of "`(u,v)`-absorbing primary
/// C-hyperideal" along `h`. Unmet side hypotheses are reported as skipped;
/// the map must send nonunits to nonunits in both directions.
pub fn transfer_check(
    h: &GoodHom,
    p: &HyperIdeal,
    uv: UVParams,
    direction: Direction,
) -> Result<TransferOutcome, UsageError> {
    let skip = |reason: String| Ok(TransferOutcome::Skipped { reason });
    let (from, to) = match direction {
        Direction::Preimage => (&h.target, &h.source),
        Direction::Image => (&h.source, &h.target),
    };
    if !p.is_proper(&from.ring) {
        return Err(UsageError::NotProper);
    }
    if let Some(x) = h.nonunit_to_unit() {
        return skip(format!("nonunit {x} maps to a unit"));
    }
    if direction == Direction::Image {
        if !h.is_surjective() {
            return skip("map is not surjective".into());
        }
        if !h.kernel().is_subset(p.members()) {
            return skip("kernel not contained in P".into());
        }
    }
    let premise = from.is_c(p.members()).is_holds()
        && is_uv_absorbing_primary(from, p, &from.rad(p.members()), uv)?.is_holds();
    let moved = match direction {
        Direction::Preimage => h.preimage(p.members()),
        Direction::Image => h.image(p.members()),
    };
    if let Some(why) = hyperideal_violation(&to.ring, &moved) {
        return skip(format!("transported set is not a hyperideal: {why}"));
    }
    let moved = HyperIdeal::new_unchecked(moved);
    if !moved.is_proper(&to.ring) {
        return skip("transported hyperideal is the whole ring".into());
    }
    let conclusion = to.is_c(moved.members()).is_holds()
        && is_uv_absorbing_primary(to, &moved, &to.rad(moved.members()), uv)?.is_holds();
    Ok(TransferOutcome::Checked {
        premise,
        conclusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: usize, phi: &[i64]) -> Arc<RingContext> {
        Arc::new(RingContext::new(FiniteHyperring::zn_phi(n, phi).unwrap()))
    }

    fn ideal(c: &RingContext, xs: &[usize]) -> HyperIdeal {
        HyperIdeal::new(&c.ring, c.ring.set_of(xs.iter().copied())).unwrap()
    }

    #[test]
    fn quotient_z8_by_four() {
        let a = ctx(8, &[1, 3]);
        let q = quotient(a.clone(), &ideal(&a, &[0, 4])).unwrap();
        assert_eq!(q.ring.ring.size(), 4);
        assert_eq!(q.reps, vec![0, 1, 2, 3]);
        assert_eq!(q.projection.kernel().to_vec(), vec![0, 4]);
        // (2+P)∘(2+P) = {4+P} = {P}
        assert_eq!(q.ring.ring.mul(2, 2).to_vec(), vec![0]);
        assert!(q.ring.ring.axiom_report().passed());
    }

    #[test]
    fn quotient_by_zero_is_isomorphic() {
        let a = ctx(6, &[2, 3]);
        let q = quotient(a.clone(), &ideal(&a, &[0])).unwrap();
        assert_eq!(q.class_of, (0..6).collect::<Vec<_>>());
        assert_eq!(q.ring.ring.to_tables(), a.ring.to_tables());
    }

    #[test]
    fn quotient_by_whole_ring_rejected() {
        let a = ctx(6, &[2, 3]);
        let whole = HyperIdeal::new(&a.ring, a.ring.full_set()).unwrap();
        assert!(matches!(
            quotient(a, &whole),
            Err(ConstructionError::Usage(UsageError::NotProper))
        ));
    }

    #[test]
    fn matrix_m1_is_base() {
        let a = FiniteHyperring::zn_phi(6, &[2, 3]).unwrap();
        let m = matrix_hyperring(&a, 1, DEFAULT_MATRIX_CAP).unwrap();
        assert_eq!(m.ring.to_tables(), a.to_tables());
        assert!(m.report.passed());
    }

    #[test]
    fn matrix_over_z2() {
        let a = FiniteHyperring::zn_phi(2, &[0, 1]).unwrap();
        let m = matrix_hyperring(&a, 2, DEFAULT_MATRIX_CAP).unwrap();
        assert_eq!(m.ring.size(), 16);
        assert!(!m.is_commutative());
        let p = ideal(&RingContext::new(a.clone()), &[0]);
        let mp = embed_diagonal_ideal(&m, &p).unwrap();
        assert_eq!(mp.to_vec(), vec![0]);
        let whole = HyperIdeal::new(&a, a.full_set()).unwrap();
        assert_eq!(embed_diagonal_ideal(&m, &whole).unwrap().len(), 16);
    }

    #[test]
    fn matrix_cap() {
        let a = FiniteHyperring::zn_phi(8, &[1, 3]).unwrap();
        assert!(matches!(
            matrix_hyperring(&a, 3, DEFAULT_MATRIX_CAP),
            Err(ConstructionError::TooLarge { .. })
        ));
        assert!(matches!(
            matrix_hyperring(&a, 2, DEFAULT_MATRIX_CAP),
            Err(ConstructionError::TooLarge { size: 4096, .. })
        ));
    }

    #[test]
    fn matrix_corner_products() {
        let a = FiniteHyperring::zn_phi(3, &[1, 2]).unwrap();
        let m = matrix_tables(&a, 2, DEFAULT_MATRIX_CAP).unwrap();
        let corner = |x: usize| x * 27;
        for x in 0..3 {
            for y in 0..3 {
                let got = m.mul(corner(x), corner(y));
                let want = m.set_of(a.mul(x, y).iter().map(corner));
                assert_eq!(*got, want);
            }
        }
    }

    #[test]
    fn matrix_associativity_can_fail() {
        // Over Z_3 with a∘b = {ab, 2ab}, the entries of a product are chosen
        // independently, which loses the correlation between entries that
        // share a row of the left factor.
        let a = FiniteHyperring::zn_phi(3, &[1, 2]).unwrap();
        match matrix_hyperring(&a, 2, DEFAULT_MATRIX_CAP) {
            Err(ConstructionError::Invalid(e)) => match *e {
                HyperringError::Axioms(r) => {
                    assert!(r
                        .violations
                        .iter()
                        .any(|v| v.axiom == Axiom::MultiplicativeAssociativity))
                }
                other => panic!("{other:?}"),
            },
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mcs_enumeration() {
        let a = ctx(6, &[1]);
        let all: Vec<Vec<usize>> = enumerate_mcs(&a)
            .iter()
            .map(|s| s.members().to_vec())
            .collect();
        assert!(all.contains(&vec![1]));
        assert!(all.contains(&vec![1, 5]));
        assert!(all.contains(&vec![1, 2, 4]));
        assert!(all.contains(&vec![0, 1]));
        for s in &all {
            for &x in s {
                for &y in s {
                    assert!(s.contains(&((x * y) % 6)));
                }
            }
        }
        assert!(Mcs::new(&a, a.ring.set_of([2, 4])).is_err());
        assert!(Mcs::new(&a, a.ring.set_of([1, 2])).is_err());
    }

    #[test]
    fn localization_of_ordinary_z6() {
        let a = ctx(6, &[1]);
        let l = localize(&a, &Mcs::new(&a, a.ring.set_of([1])).unwrap()).unwrap();
        assert_eq!(l.ring.ring.size(), 6);
        let l = localize(&a, &Mcs::new(&a, a.ring.set_of([1, 5])).unwrap()).unwrap();
        assert_eq!(l.ring.ring.size(), 6);
        // Inverting 2 kills the 2-part: Z_6[1/2] ≅ Z_3.
        let l = localize(&a, &Mcs::new(&a, a.ring.set_of([1, 2, 4])).unwrap()).unwrap();
        assert_eq!(l.ring.ring.size(), 3);
        assert!(l.pi.is_ok());
        assert_eq!(l.class(3, 1), l.class(0, 1));
        let l = localize(&a, &Mcs::new(&a, a.ring.set_of([0, 1])).unwrap()).unwrap();
        assert_eq!(l.ring.ring.size(), 1);
    }

    #[test]
    fn localization_multivalued_sum_reported() {
        let a = ctx(8, &[1, 3]);
        let s = Mcs::new(&a, a.ring.set_of([1, 3])).unwrap();
        match localize(&a, &s) {
            Err(ConstructionError::MultiValuedSum(w)) => assert!(w.contains('⊕')),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn localization_needs_identity() {
        let a = ctx(6, &[2, 3]);
        let s = Mcs {
            members: a.ring.set_of([0]),
            identity: 0,
        };
        assert!(matches!(
            localize(&a, &s),
            Err(ConstructionError::NoIdentity)
        ));
    }

    #[test]
    fn gamma_examples() {
        let a = FiniteHyperring::zn_phi(6, &[1]).unwrap();
        // Zero divisors mod {0,3}: a·b ∈ {0,3} with b ∉ {0,3} means 3 | a.
        assert_eq!(gamma(&a, &a.set_of([0, 3])).to_vec(), vec![0, 3]);
        assert_eq!(gamma(&a, &a.set_of([0])).to_vec(), vec![0, 2, 3, 4]);
    }

    #[test]
    fn identity_transfer_is_consistent() {
        let a = ctx(8, &[1, 3]);
        let h = GoodHom::identity(a.clone());
        let uv = UVParams::new(3, 2).unwrap();
        for p in a.lattice().proper_ideals(&a.ring) {
            for dir in [Direction::Preimage, Direction::Image] {
                match transfer_check(&h, p, uv, dir).unwrap() {
                    TransferOutcome::Checked {
                        premise,
                        conclusion,
                    } => {
                        if a.is_c(p.members()).is_holds() {
                            assert_eq!(premise, conclusion);
                        }
                    }
                    TransferOutcome::Skipped { reason } => panic!("{reason}"),
                }
            }
        }
    }

    #[test]
    fn transfer_skips_on_unit_hypothesis() {
        // Z_4 → Z_4/{0,2} sends the nonunits 0 and 2 to zero.
        let a = ctx(4, &[1]);
        let q = quotient(a.clone(), &ideal(&a, &[0, 2])).unwrap();
        assert!(q.projection.nonunit_to_unit().is_none());
        let b = ctx(6, &[1]);
        let q6 = quotient(b.clone(), &ideal(&b, &[0, 3])).unwrap();
        // 2 is a nonunit of Z_6 but 2+{0,3} is a unit of Z_6/{0,3} ≅ Z_3.
        assert_eq!(q6.projection.nonunit_to_unit(), Some(2));
        let p = ideal(&q6.ring, &[0]);
        let out = transfer_check(
            &q6.projection,
            &p,
            UVParams::new(2, 1).unwrap(),
            Direction::Preimage,
        )
        .unwrap();
        assert!(matches!(out, TransferOutcome::Skipped { .. }));
    }

    #[test]
    fn bad_hom_rejected() {
        let a = ctx(4, &[1]);
        let err = GoodHom::new(a.clone(), a.clone(), vec![0, 2, 0, 2]).unwrap_err();
        assert!(matches!(err, ConstructionError::NotWellDefined(_)));
    }
}
