//! Hyperideals: generation, the full lattice, colon ideals, the two
//! radicals, and the C / strong-C closure conditions.

use std::collections::{HashMap, HashSet};

use crate::error::UsageError;
use crate::ring::FiniteHyperring;
use crate::set::ElementSet;
use crate::verdict::{CheckedSpace, Verdict, Witness};

/// Default cap on the number of distinct sets a closure may visit.
pub const DEFAULT_CLOSURE_CAP: usize = 1 << 20;

/// A subset closed under subtraction and absorbing under `∘`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HyperIdeal {
    members: ElementSet,
}

impl HyperIdeal {
    pub fn new(ring: &FiniteHyperring, members: ElementSet) -> Result<Self, UsageError> {
        match hyperideal_violation(ring, &members) {
            None => Ok(Self { members }),
            Some(why) => Err(UsageError::NotHyperideal(format!("{members} ({why})"))),
        }
    }

    pub(crate) fn new_unchecked(members: ElementSet) -> Self {
        Self { members }
    }

    pub fn members(&self) -> &ElementSet {
        &self.members
    }

    pub fn into_members(self) -> ElementSet {
        self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn is_proper(&self, ring: &FiniteHyperring) -> bool {
        self.members.len() < ring.size()
    }
}

/// Why `set` fails to be a hyperideal, if it does.
pub fn hyperideal_violation(ring: &FiniteHyperring, set: &ElementSet) -> Option<String> {
    if set.is_empty() {
        return Some("empty".into());
    }
    for a in set {
        for b in set {
            if !set.contains(ring.sub(a, b)) {
                return Some(format!("{a}-{b} not a member"));
            }
        }
        for r in 0..ring.size() {
            if !ring.mul(r, a).is_subset(set) {
                return Some(format!("{r}∘{a} not contained"));
            }
        }
    }
    None
}

pub fn is_hyperideal(ring: &FiniteHyperring, set: &ElementSet) -> bool {
    hyperideal_violation(ring, set).is_none()
}

/// The least hyperideal containing `seed`.
pub fn generate(ring: &FiniteHyperring, seed: &ElementSet) -> HyperIdeal {
    let zero = ring.singleton(ring.zero());
    extend(ring, &zero, seed.iter())
}

/// Least hyperideal containing the hyperideal `closed` and `extra`.
fn extend(
    ring: &FiniteHyperring,
    closed: &ElementSet,
    extra: impl Iterator<Item = usize>,
) -> HyperIdeal {
    let mut members = closed.clone();
    let mut queue: Vec<usize> = extra.filter(|&x| members.insert(x)).collect();
    while let Some(x) = queue.pop() {
        let mut fresh = Vec::new();
        for r in 0..ring.size() {
            for y in ring.mul(r, x) {
                if !members.contains(y) {
                    fresh.push(y);
                }
            }
        }
        fresh.push(ring.neg(x));
        for y in &members {
            fresh.push(ring.add(x, y));
        }
        for y in fresh {
            if members.insert(y) {
                queue.push(y);
            }
        }
    }
    HyperIdeal::new_unchecked(members)
}

/// Every hyperideal of a ring, with primes, maximals and `J(A)` marked.
#[derive(Debug, Clone)]
pub struct IdealLattice {
    /// Sorted by size, then by members.
    pub all: Vec<HyperIdeal>,
    pub primes: Vec<usize>,
    pub maximals: Vec<usize>,
    pub jacobson: ElementSet,
    pub local: bool,
}

impl IdealLattice {
    pub fn index_of(&self, members: &ElementSet) -> Option<usize> {
        self.all.iter().position(|i| i.members() == members)
    }

    pub fn prime_ideals(&self) -> impl Iterator<Item = &HyperIdeal> {
        self.primes.iter().map(|&i| &self.all[i])
    }

    pub fn maximal_ideals(&self) -> impl Iterator<Item = &HyperIdeal> {
        self.maximals.iter().map(|&i| &self.all[i])
    }

    pub fn proper_ideals<'a>(
        &'a self,
        ring: &'a FiniteHyperring,
    ) -> impl Iterator<Item = &'a HyperIdeal> {
        self.all.iter().filter(|i| i.is_proper(ring))
    }

    /// The unique maximal hyperideal of a local ring.
    pub fn unique_maximal(&self) -> Option<&HyperIdeal> {
        if self.local {
            Some(&self.all[self.maximals[0]])
        } else {
            None
        }
    }
}

/// Enumerate every hyperideal by closing single-element extensions from
/// `{0}`. Each hyperideal is reached along some chain of principal
/// extensions inside it, so nothing is missed.
pub fn enumerate_hyperideals(ring: &FiniteHyperring) -> IdealLattice {
    let n = ring.size();
    let bottom = generate(ring, &ring.empty_set());
    let mut seen: HashSet<ElementSet> = HashSet::from([bottom.members().clone()]);
    let mut queue = vec![bottom];
    let mut all = Vec::new();
    while let Some(ideal) = queue.pop() {
        for g in 0..n {
            if ideal.contains(g) {
                continue;
            }
            let next = extend(ring, ideal.members(), std::iter::once(g));
            if seen.insert(next.members().clone()) {
                queue.push(next);
            }
        }
        all.push(ideal);
    }
    all.sort_by(|a, b| (a.members().len(), a.members()).cmp(&(b.members().len(), b.members())));

    let primes: Vec<usize> = (0..all.len())
        .filter(|&i| all[i].is_proper(ring) && prime_witness(ring, all[i].members()).is_none())
        .collect();
    let maximals: Vec<usize> = (0..all.len())
        .filter(|&i| {
            all[i].is_proper(ring)
                && !all.iter().any(|j| {
                    j.is_proper(ring) && j != &all[i] && all[i].members().is_subset(j.members())
                })
        })
        .collect();
    let mut jacobson = ring.full_set();
    for &m in &maximals {
        jacobson.intersect_with(all[m].members());
    }
    let local = maximals.len() == 1;
    IdealLattice {
        all,
        primes,
        maximals,
        jacobson,
        local,
    }
}

/// First `(x, y)` with `x ≤ y`, `x∘y ⊆ set`, and neither factor in `set`.
pub(crate) fn prime_witness(ring: &FiniteHyperring, set: &ElementSet) -> Option<(usize, usize)> {
    let n = ring.size();
    (0..n)
        .flat_map(|x| (x..n).map(move |y| (x, y)))
        .find(|&(x, y)| !set.contains(x) && !set.contains(y) && ring.mul(x, y).is_subset(set))
}

/// `(B₂ : B₁) = {a : a∘B₁ ⊆ B₂}`.
pub fn colon(ring: &FiniteHyperring, b2: &HyperIdeal, b1: &ElementSet) -> HyperIdeal {
    let members = ring.set_of(
        (0..ring.size()).filter(|&a| b1.iter().all(|b| ring.mul(a, b).is_subset(b2.members()))),
    );
    debug_assert!(is_hyperideal(ring, &members));
    HyperIdeal::new_unchecked(members)
}

/// Intersection of the prime hyperideals containing `b`; the whole
/// carrier when there are none.
pub fn radical_prime_intersection(
    ring: &FiniteHyperring,
    lattice: &IdealLattice,
    b: &ElementSet,
) -> ElementSet {
    let mut rad = ring.full_set();
    for p in lattice.prime_ideals() {
        if b.is_subset(p.members()) {
            rad.intersect_with(p.members());
        }
    }
    rad
}

/// `{a : a^k ⊆ B for some k ≥ 1}`.
///
/// Powers follow `a^{k+1} = a^k ∘ a`, so the sequence is eventually
/// periodic; iteration stops at the first repeated power set, which makes
/// the result exact rather than bounded.
pub fn radical_nilpotent(ring: &FiniteHyperring, b: &ElementSet) -> ElementSet {
    ring.set_of((0..ring.size()).filter(|&a| nilpotent_exponent(ring, a, b).is_some()))
}

/// Smallest `k` with `a^k ⊆ B`.
pub fn nilpotent_exponent(ring: &FiniteHyperring, a: usize, b: &ElementSet) -> Option<usize> {
    let mut seen = HashSet::new();
    let mut power = ring.singleton(a);
    let mut k = 1;
    loop {
        if power.is_subset(b) {
            return Some(k);
        }
        if !seen.insert(power.clone()) {
            return None;
        }
        power = ring.mul_set_elem(&power, a);
        k += 1;
    }
}

/// Every set of the form `x₁∘⋯∘x_k`, `k ≥ 1`, with a shortest tuple
/// realising it.
///
/// Built breadth-first by multiplying known product sets by one more
/// factor until no new set appears, so the list is the complete fixed
/// point unless the cap was hit.
#[derive(Debug, Clone)]
pub struct ProductClosure {
    pub sets: Vec<ElementSet>,
    pub tuples: Vec<Vec<usize>>,
    /// Longest tuple needed to reach a new set.
    pub depth: usize,
    pub complete: bool,
}

impl ProductClosure {
    pub fn compute(ring: &FiniteHyperring, cap: usize) -> Self {
        let n = ring.size();
        let mut index: HashMap<ElementSet, usize> = HashMap::new();
        let mut sets = Vec::new();
        let mut tuples = Vec::new();
        for a in 0..n {
            let s = ring.singleton(a);
            index.insert(s.clone(), sets.len());
            sets.push(s);
            tuples.push(vec![a]);
        }
        let mut head = 0;
        let mut complete = true;
        while head < sets.len() {
            for a in 0..n {
                let next = ring.mul_set_elem(&sets[head], a);
                if !index.contains_key(&next) {
                    if sets.len() >= cap {
                        complete = false;
                        break;
                    }
                    let mut t = tuples[head].clone();
                    t.push(a);
                    index.insert(next.clone(), sets.len());
                    sets.push(next);
                    tuples.push(t);
                }
            }
            if !complete {
                break;
            }
            head += 1;
        }
        let depth = tuples.iter().map(Vec::len).max().unwrap_or(1);
        Self {
            sets,
            tuples,
            depth,
            complete,
        }
    }
}

/// Every finite sum of product sets, `Σᵢ (x_{i1}∘⋯∘x_{ik_i})`, with a
/// realising list of summand tuples.
#[derive(Debug, Clone)]
pub struct SumClosure {
    pub sets: Vec<ElementSet>,
    pub summands: Vec<Vec<Vec<usize>>>,
    pub complete: bool,
}

impl SumClosure {
    pub fn compute(ring: &FiniteHyperring, products: &ProductClosure, cap: usize) -> Self {
        let mut index: HashMap<ElementSet, usize> = HashMap::new();
        let mut sets = Vec::new();
        let mut summands = Vec::new();
        for (s, t) in products.sets.iter().zip(&products.tuples) {
            index.insert(s.clone(), sets.len());
            sets.push(s.clone());
            summands.push(vec![t.clone()]);
        }
        let mut complete = products.complete;
        let mut head = 0;
        'outer: while head < sets.len() {
            for (p, t) in products.sets.iter().zip(&products.tuples) {
                let next = ring.add_sets(&sets[head], p);
                if !index.contains_key(&next) {
                    if sets.len() >= cap {
                        complete = false;
                        break 'outer;
                    }
                    let mut w = summands[head].clone();
                    w.push(t.clone());
                    index.insert(next.clone(), sets.len());
                    sets.push(next);
                    summands.push(w);
                }
            }
            head += 1;
        }
        Self {
            sets,
            summands,
            complete,
        }
    }
}

/// C-hyperideal test: every product set meeting `b` lies inside `b`.
pub fn is_c_hyperideal(ring: &FiniteHyperring, b: &ElementSet) -> Verdict {
    is_c_hyperideal_in(&ProductClosure::compute(ring, DEFAULT_CLOSURE_CAP), b)
}

pub fn is_c_hyperideal_in(closure: &ProductClosure, b: &ElementSet) -> Verdict {
    let mut tested = 0;
    for (s, t) in closure.sets.iter().zip(&closure.tuples) {
        if s.intersects(b) {
            tested += 1;
            if !s.is_subset(b) {
                let space =
                    CheckedSpace::new("distinct product sets", closure.sets.len() as u64, tested);
                return Verdict::fails(
                    Witness::from_elems(
                        t.iter().copied(),
                        "product meets B but is not contained in B",
                    ),
                    space,
                );
            }
        }
    }
    let space = CheckedSpace::new(
        format!(
            "distinct product sets (fixed point at length {})",
            closure.depth
        ),
        closure.sets.len() as u64,
        tested,
    );
    if closure.complete {
        Verdict::holds(space)
    } else {
        Verdict::inconclusive(format!("{} product sets", closure.sets.len()), space)
    }
}

/// Strong C-hyperideal test over every finite sum of product sets.
pub fn is_strong_c_hyperideal(ring: &FiniteHyperring, b: &ElementSet) -> Verdict {
    let products = ProductClosure::compute(ring, DEFAULT_CLOSURE_CAP);
    is_strong_c_hyperideal_in(
        &SumClosure::compute(ring, &products, DEFAULT_CLOSURE_CAP),
        b,
    )
}

pub fn is_strong_c_hyperideal_in(sums: &SumClosure, b: &ElementSet) -> Verdict {
    let mut tested = 0;
    for (s, w) in sums.sets.iter().zip(&sums.summands) {
        if s.intersects(b) {
            tested += 1;
            if !s.is_subset(b) {
                let space = CheckedSpace::new(
                    "distinct sums of product sets",
                    sums.sets.len() as u64,
                    tested,
                );
                let parts = w
                    .iter()
                    .map(|t| t.iter().map(|&x| x as i64).collect())
                    .collect();
                return Verdict::fails(
                    Witness::new(parts, "sum of products meets B but is not contained in B"),
                    space,
                );
            }
        }
    }
    let space = CheckedSpace::new(
        "distinct sums of product sets (fixed point)",
        sums.sets.len() as u64,
        tested,
    );
    if sums.complete {
        Verdict::holds(space)
    } else {
        Verdict::inconclusive(format!("{} sum sets", sums.sets.len()), space)
    }
}

/// `⋃ p∘q` over `p ∈ P`, `q ∈ Q`.
pub fn setwise_product(ring: &FiniteHyperring, p: &ElementSet, q: &ElementSet) -> ElementSet {
    ring.mul_sets(p, q)
}

/// The hyperideal generated by all pointwise products `p∘q`.
pub fn ideal_product(ring: &FiniteHyperring, p: &HyperIdeal, q: &HyperIdeal) -> HyperIdeal {
    generate(ring, &setwise_product(ring, p.members(), q.members()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize, phi: &[i64]) -> FiniteHyperring {
        FiniteHyperring::zn_phi(n, phi).unwrap()
    }

    fn members(lattice: &IdealLattice) -> Vec<Vec<usize>> {
        lattice.all.iter().map(|i| i.members().to_vec()).collect()
    }

    #[test]
    fn generate_examples() {
        let r = z(8, &[1, 3]);
        assert_eq!(generate(&r, &r.set_of([4])).members().to_vec(), vec![0, 4]);
        assert_eq!(generate(&r, &r.empty_set()).members().to_vec(), vec![0]);
        let r = z(6, &[2, 3]);
        assert_eq!(
            generate(&r, &r.set_of([2])).members().to_vec(),
            vec![0, 2, 4]
        );
    }

    #[test]
    fn lattice_examples() {
        let r = z(6, &[2, 3]);
        let l = enumerate_hyperideals(&r);
        assert_eq!(
            members(&l),
            vec![vec![0], vec![0, 3], vec![0, 2, 4], vec![0, 1, 2, 3, 4, 5]]
        );

        let r = z(8, &[1, 3]);
        let l = enumerate_hyperideals(&r);
        assert_eq!(
            members(&l),
            vec![vec![0], vec![0, 4], vec![0, 2, 4, 6], (0..8).collect()]
        );
        assert_eq!(
            l.maximal_ideals()
                .map(|m| m.members().to_vec())
                .collect::<Vec<_>>(),
            vec![vec![0, 2, 4, 6]]
        );
        assert!(l.local);
        assert_eq!(l.jacobson.to_vec(), vec![0, 2, 4, 6]);

        let l = enumerate_hyperideals(&z(7, &[1, 2]));
        assert_eq!(members(&l), vec![vec![0], (0..7).collect()]);
    }

    #[test]
    fn lattice_matches_subset_filter() {
        // Brute force over all 2^n subsets.
        for (n, phi) in [
            (6, vec![2, 3]),
            (8, vec![1, 3]),
            (12, vec![2, 5]),
            (9, vec![3, 4, 0]),
        ] {
            let r = z(n, &phi);
            let brute: Vec<ElementSet> = (0u32..1 << n)
                .map(|mask| r.set_of((0..n).filter(|&i| mask >> i & 1 == 1)))
                .filter(|s| is_hyperideal(&r, s))
                .collect();
            let l = enumerate_hyperideals(&r);
            let mut got: Vec<ElementSet> = l.all.iter().map(|i| i.members().clone()).collect();
            got.sort();
            let mut brute = brute;
            brute.sort();
            assert_eq!(got, brute, "z{n}:{phi:?}");
        }
    }

    #[test]
    fn generate_is_least() {
        let r = z(12, &[1, 5]);
        let l = enumerate_hyperideals(&r);
        for seed in [vec![3], vec![4, 6], vec![], vec![8, 9]] {
            let s = r.set_of(seed.iter().copied());
            let g = generate(&r, &s);
            assert!(s.is_subset(g.members()));
            for i in &l.all {
                if s.is_subset(i.members()) {
                    assert!(g.members().is_subset(i.members()));
                }
            }
        }
    }

    #[test]
    fn colon_examples() {
        let r = z(8, &[1, 3]);
        let p = HyperIdeal::new(&r, r.set_of([0, 4])).unwrap();
        assert_eq!(
            colon(&r, &p, &r.set_of([2])).members().to_vec(),
            vec![0, 2, 4, 6]
        );
        assert_eq!(colon(&r, &p, &r.singleton(0)).members().len(), 8);
        assert!(p.members().is_subset(colon(&r, &p, p.members()).members()));
    }

    #[test]
    fn radical_examples() {
        let r = z(8, &[1, 3]);
        let l = enumerate_hyperideals(&r);
        assert_eq!(
            radical_prime_intersection(&r, &l, &r.set_of([0, 4])).to_vec(),
            vec![0, 2, 4, 6]
        );
        assert_eq!(
            radical_prime_intersection(&r, &l, &r.set_of([0])).to_vec(),
            vec![0, 2, 4, 6]
        );
        let evens = r.set_of([0, 2, 4, 6]);
        assert_eq!(radical_prime_intersection(&r, &l, &evens), evens);
        assert_eq!(
            radical_nilpotent(&r, &r.set_of([0])).to_vec(),
            vec![0, 2, 4, 6]
        );
        assert_eq!(nilpotent_exponent(&r, 2, &r.set_of([0])), Some(3));
        assert_eq!(nilpotent_exponent(&r, 4, &r.set_of([0])), Some(2));
        assert_eq!(radical_nilpotent(&r, &r.full_set()), r.full_set());
    }

    #[test]
    fn radical_forms_on_z6() {
        let r = z(6, &[2, 3]);
        let l = enumerate_hyperideals(&r);
        let b = r.set_of([0, 3]);
        // {0,3} is prime (x∘y ⊆ {0,3} iff 3 | xy) and no power of a residue
        // prime to 3 lands in it, so both forms agree although 1∘1 = {2,3}
        // stops it from being a C-hyperideal.
        assert!(is_c_hyperideal(&r, &b).is_fails());
        assert_eq!(radical_nilpotent(&r, &b), b);
        assert_eq!(radical_prime_intersection(&r, &l, &b), b);
    }

    #[test]
    fn c_hyperideal_examples() {
        let r = z(8, &[1, 3]);
        assert!(is_c_hyperideal(&r, &r.set_of([0, 4])).is_holds());
        assert!(is_c_hyperideal(&r, &r.full_set()).is_holds());

        let r = z(6, &[2, 3]);
        let v = is_c_hyperideal(&r, &r.set_of([0]));
        assert!(v.is_fails());
        let w = v.witness.unwrap().flat();
        let tuple: Vec<usize> = w.iter().map(|&x| x as usize).collect();
        let p = r.hyperproduct(&tuple).unwrap();
        assert!(p.contains(0) && p.len() > 1);
    }

    #[test]
    fn strong_c_examples() {
        let r = z(8, &[1, 3]);
        assert!(is_strong_c_hyperideal(&r, &r.full_set()).is_holds());
        let v = is_strong_c_hyperideal(&r, &r.set_of([0, 2, 4, 6]));
        // Every product set of Z_8 with Φ={1,3} is {x, 3x}, which stays in
        // one coset of the evens.
        assert!(v.is_holds(), "{v}");
        let r = z(6, &[2, 3]);
        let b = r.set_of([0]);
        assert!(is_c_hyperideal(&r, &b).is_fails());
        assert!(is_strong_c_hyperideal(&r, &b).is_fails());
    }

    #[test]
    fn ideal_product_examples() {
        let r = z(8, &[1, 3]);
        let p = HyperIdeal::new(&r, r.set_of([0, 4])).unwrap();
        let q = HyperIdeal::new(&r, r.set_of([0, 2, 4, 6])).unwrap();
        let zero = HyperIdeal::new(&r, r.set_of([0])).unwrap();
        assert_eq!(ideal_product(&r, &p, &q).members().to_vec(), vec![0]);
        assert_eq!(ideal_product(&r, &p, &zero).members().to_vec(), vec![0]);
        assert_eq!(ideal_product(&r, &p, &q), ideal_product(&r, &q, &p));
    }

    #[test]
    fn product_closure_reaches_fixed_point() {
        let r = z(12, &[2, 3, 5]);
        let c = ProductClosure::compute(&r, DEFAULT_CLOSURE_CAP);
        assert!(c.complete);
        for s in &c.sets {
            for a in 0..12 {
                assert!(c.sets.contains(&r.mul_set_elem(s, a)));
            }
        }
        for (s, t) in c.sets.iter().zip(&c.tuples) {
            assert_eq!(&r.hyperproduct(t).unwrap(), s);
        }
    }

    #[test]
    fn rejects_non_ideals() {
        let r = z(8, &[1, 3]);
        assert!(HyperIdeal::new(&r, r.set_of([0, 2])).is_err());
        assert!(HyperIdeal::new(&r, r.empty_set()).is_err());
    }
}
