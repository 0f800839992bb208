//! Certificate-producing deciders for the hyperideal classes.
//!
//! Tuple quantifiers range over multisets: hypermultiplication is
//! commutative and associative, so the order of factors inside a product
//! never matters. The split of a `u`-tuple into its first `v` factors and
//! the rest is tested for every way of choosing which `v` elements of the
//! multiset come first, which is exactly the ordered-tuple reading.

use std::fmt;
use std::sync::OnceLock;

use rustc_hash::FxHashMap;
use serde::Serialize;
use smallvec::SmallVec;

use crate::error::UsageError;
use crate::ideals::{
    self, colon, enumerate_hyperideals, generate, prime_witness, radical_nilpotent,
    radical_prime_intersection, HyperIdeal, IdealLattice, ProductClosure, SumClosure,
    DEFAULT_CLOSURE_CAP,
};
use crate::ring::{FiniteHyperring, UnitReport};
use crate::set::ElementSet;
use crate::verdict::{CheckedSpace, Verdict, Witness};

pub use crate::verdict::Status;

/// Arity parameters `u > v ≥ 1`, with `u ≤ 31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct UVParams {
    u: usize,
    v: usize,
}

impl UVParams {
    pub fn new(u: usize, v: usize) -> Result<Self, UsageError> {
        if u > v && v >= 1 && u <= 31 {
            Ok(Self { u, v })
        } else {
            Err(UsageError::BadParams { u, v })
        }
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn v(&self) -> usize {
        self.v
    }

    /// Every `(u, v)` with `u_max ≥ u > v ≥ 1`.
    pub fn all_up_to(u_max: usize) -> Vec<Self> {
        (2..=u_max)
            .flat_map(|u| (1..u).map(move |v| Self { u, v }))
            .collect()
    }
}

impl fmt::Display for UVParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.u, self.v)
    }
}

/// A ring with its unit report and lazily computed lattice and closures.
#[derive(Debug)]
pub struct RingContext {
    pub ring: FiniteHyperring,
    pub units: UnitReport,
    lattice: OnceLock<IdealLattice>,
    products: OnceLock<ProductClosure>,
    sums: OnceLock<SumClosure>,
}

impl RingContext {
    pub fn new(ring: FiniteHyperring) -> Self {
        let units = ring.unit_report();
        Self {
            ring,
            units,
            lattice: OnceLock::new(),
            products: OnceLock::new(),
            sums: OnceLock::new(),
        }
    }

    pub fn lattice(&self) -> &IdealLattice {
        self.lattice
            .get_or_init(|| enumerate_hyperideals(&self.ring))
    }

    pub fn products(&self) -> &ProductClosure {
        self.products
            .get_or_init(|| ProductClosure::compute(&self.ring, DEFAULT_CLOSURE_CAP))
    }

    pub fn sums(&self) -> &SumClosure {
        self.sums
            .get_or_init(|| SumClosure::compute(&self.ring, self.products(), DEFAULT_CLOSURE_CAP))
    }

    /// Prime-intersection radical.
    pub fn rad(&self, b: &ElementSet) -> ElementSet {
        radical_prime_intersection(&self.ring, self.lattice(), b)
    }

    pub fn rad_nilpotent(&self, b: &ElementSet) -> ElementSet {
        radical_nilpotent(&self.ring, b)
    }

    pub fn is_c(&self, b: &ElementSet) -> Verdict {
        ideals::is_c_hyperideal_in(self.products(), b)
    }

    pub fn is_strong_c(&self, b: &ElementSet) -> Verdict {
        ideals::is_strong_c_hyperideal_in(self.sums(), b)
    }

    pub fn nonunit_list(&self) -> Vec<usize> {
        self.units.nonunits.to_vec()
    }
}

fn require_proper(ring: &FiniteHyperring, p: &HyperIdeal) -> Result<(), UsageError> {
    if p.is_proper(ring) {
        Ok(())
    } else {
        Err(UsageError::NotProper)
    }
}

/// `x∘y ⊆ P ⇒ x ∈ P or y ∈ P`.
pub fn is_prime(ring: &FiniteHyperring, p: &HyperIdeal) -> Result<Verdict, UsageError> {
    require_proper(ring, p)?;
    let n = ring.size() as u64;
    let space = CheckedSpace::new(
        "unordered pairs",
        n * (n + 1) / 2,
        count_pairs_inside(ring, p.members()),
    );
    Ok(match prime_witness(ring, p.members()) {
        None => Verdict::holds(space),
        Some((x, y)) => Verdict::fails(
            Witness::from_elems([x, y], "x∘y ⊆ P but x ∉ P and y ∉ P"),
            space,
        ),
    })
}

/// `x∘y ⊆ P ⇒ x ∈ P or y ∈ rad`, over ordered pairs.
pub fn is_primary(
    ring: &FiniteHyperring,
    p: &HyperIdeal,
    rad: &ElementSet,
) -> Result<Verdict, UsageError> {
    require_proper(ring, p)?;
    let n = ring.size();
    let mut tested = 0;
    for x in 0..n {
        for y in 0..n {
            if ring.mul(x, y).is_subset(p.members()) {
                tested += 1;
                if !p.contains(x) && !rad.contains(y) {
                    let space = CheckedSpace::new("ordered pairs", (n * n) as u64, tested);
                    return Ok(Verdict::fails(
                        Witness::from_elems([x, y], "x∘y ⊆ P but x ∉ P and y ∉ rad(P)"),
                        space,
                    ));
                }
            }
        }
    }
    Ok(Verdict::holds(CheckedSpace::new(
        "ordered pairs",
        (n * n) as u64,
        tested,
    )))
}

fn count_pairs_inside(ring: &FiniteHyperring, p: &ElementSet) -> u64 {
    let n = ring.size();
    (0..n)
        .flat_map(|x| (x..n).map(move |y| (x, y)))
        .filter(|&(x, y)| ring.mul(x, y).is_subset(p))
        .count() as u64
}

type Key = SmallVec<[usize; 8]>;

/// Memoized products of sorted sub-multisets.
struct ProductMemo<'a> {
    ring: &'a FiniteHyperring,
    cache: FxHashMap<Key, ElementSet>,
}

impl<'a> ProductMemo<'a> {
    fn new(ring: &'a FiniteHyperring) -> Self {
        Self {
            ring,
            cache: FxHashMap::default(),
        }
    }

    fn get(&mut self, xs: &[usize]) -> &ElementSet {
        let key: Key = xs.iter().copied().collect();
        let ring = self.ring;
        self.cache
            .entry(key)
            .or_insert_with(|| ring.hyperproduct(xs).expect("nonempty product"))
    }
}

/// One `(u, v)` search: for every `u`-multiset from `domain` whose total
/// product satisfies `hypothesis`, some split must put the `v`-part
/// inside `vpart_target` or the remainder inside `rem_target`.
struct UvSearch<'a> {
    domain: &'a [usize],
    uv: UVParams,
    hypothesis: &'a dyn Fn(&ElementSet) -> bool,
    vpart_target: &'a ElementSet,
    rem_target: &'a ElementSet,
    description: &'a str,
    clause: &'a str,
}

impl UvSearch<'_> {
    fn run(&self, ring: &FiniteHyperring) -> Verdict {
        let u = self.uv.u;
        let mut memo = ProductMemo::new(ring);
        let mut enumerated = 0u64;
        let mut tested = 0u64;
        let mut idx = vec![0usize; u];
        let mut tuple = vec![0usize; u];
        let mut prefix: Vec<ElementSet> = vec![ring.empty_set(); u];
        let splits: Vec<u32> = combinations(u, self.uv.v)
            .iter()
            .map(|c| c.iter().fold(0, |m, &i| m | 1 << i))
            .collect();
        let forced = Forced {
            active: absorbs(ring, self.vpart_target) && absorbs(ring, self.rem_target),
        };
        let d = self.domain.len();
        if d == 0 {
            return Verdict::holds(CheckedSpace::new(self.description, 0, 0));
        }

        // Odometer over non-decreasing index vectors, recomputing prefix
        // products from the first changed position.
        let mut from = 0;
        loop {
            for k in from..u {
                if k > 0 {
                    idx[k] = idx[k].max(idx[k - 1]);
                }
                tuple[k] = self.domain[idx[k]];
                prefix[k] = if k == 0 {
                    ring.singleton(tuple[0])
                } else {
                    ring.mul_set_elem(&prefix[k - 1], tuple[k])
                };
            }
            enumerated += 1;
            if (self.hypothesis)(&prefix[u - 1]) {
                tested += 1;
                if let Some(w) = self.find_bad_split(&mut memo, &tuple, &splits, &forced) {
                    return Verdict::fails(
                        w,
                        CheckedSpace::new(self.description, enumerated, tested),
                    );
                }
            }
            // advance
            let mut k = u;
            loop {
                if k == 0 {
                    return Verdict::holds(CheckedSpace::new(self.description, enumerated, tested));
                }
                k -= 1;
                if idx[k] + 1 < d {
                    idx[k] += 1;
                    for j in k + 1..u {
                        idx[j] = idx[k];
                    }
                    from = k;
                    break;
                }
            }
        }
    }

    fn find_bad_split(
        &self,
        memo: &mut ProductMemo<'_>,
        tuple: &[usize],
        splits: &[u32],
        forced: &Forced,
    ) -> Option<Witness> {
        // With absorbing targets, a factor inside the remainder target
        // forces the whole remainder inside it, so it must sit in the
        // v-part; symmetrically for the v-part target.
        let (mut to_v, mut to_rem) = (0u32, 0u32);
        if forced.active {
            for (i, &x) in tuple.iter().enumerate() {
                let (in_v, in_r) = (self.vpart_target.contains(x), self.rem_target.contains(x));
                if in_v && in_r {
                    return None;
                }
                to_v |= (in_r as u32) << i;
                to_rem |= (in_v as u32) << i;
            }
        }
        // Equal factors are interchangeable: only the split taking the
        // leftmost copies of each value is tried.
        let mut runs = 0u32;
        for i in 1..tuple.len() {
            runs |= ((tuple[i] == tuple[i - 1]) as u32) << i;
        }
        for &mask in splits {
            if mask & to_v != to_v || mask & to_rem != 0 || (mask & runs) & !(mask << 1) != 0 {
                continue;
            }
            let vpart: Key = (0..tuple.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| tuple[i])
                .collect();
            if memo.get(&vpart).is_subset(self.vpart_target) {
                continue;
            }
            let rem: Key = (0..tuple.len())
                .filter(|i| mask >> i & 1 == 0)
                .map(|i| tuple[i])
                .collect();
            if !memo.get(&rem).is_subset(self.rem_target) {
                return Some(Witness::new(
                    vec![
                        vpart.iter().map(|&x| x as i64).collect(),
                        rem.iter().map(|&x| x as i64).collect(),
                    ],
                    self.clause,
                ));
            }
        }
        None
    }
}

/// Whether forced-placement pruning is sound for a search.
struct Forced {
    active: bool,
}

fn absorbs(ring: &FiniteHyperring, t: &ElementSet) -> bool {
    t.iter()
        .all(|x| (0..ring.size()).all(|r| ring.mul(r, x).is_subset(t)))
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `(u,v)`-absorbing prime: the remainder must land in `P` itself.
pub fn is_uv_absorbing_prime(
    ctx: &RingContext,
    p: &HyperIdeal,
    uv: UVParams,
) -> Result<Verdict, UsageError> {
    require_proper(&ctx.ring, p)?;
    let domain = ctx.nonunit_list();
    let hyp = |s: &ElementSet| s.is_subset(p.members());
    Ok(UvSearch {
        domain: &domain,
        uv,
        hypothesis: &hyp,
        vpart_target: p.members(),
        rem_target: p.members(),
        description: "nonunit multisets × splits",
        clause: "product ⊆ P but v-part ⊄ P and remainder ⊄ P",
    }
    .run(&ctx.ring))
}

/// `(u,v)`-absorbing primary with the given radical.
pub fn is_uv_absorbing_primary(
    ctx: &RingContext,
    p: &HyperIdeal,
    rad: &ElementSet,
    uv: UVParams,
) -> Result<Verdict, UsageError> {
    is_uv_absorbing_primary_over(ctx, p, rad, uv, &ctx.units.nonunits)
}

/// As [`is_uv_absorbing_primary`] but with factors drawn from `domain`
/// instead of the nonunits.
pub fn is_uv_absorbing_primary_over(
    ctx: &RingContext,
    p: &HyperIdeal,
    rad: &ElementSet,
    uv: UVParams,
    domain: &ElementSet,
) -> Result<Verdict, UsageError> {
    require_proper(&ctx.ring, p)?;
    let domain = domain.to_vec();
    let hyp = |s: &ElementSet| s.is_subset(p.members());
    Ok(UvSearch {
        domain: &domain,
        uv,
        hypothesis: &hyp,
        vpart_target: p.members(),
        rem_target: rad,
        description: "multisets × splits",
        clause: "product ⊆ P but v-part ⊄ P and remainder ⊄ rad(P)",
    }
    .run(&ctx.ring))
}

/// `(u,v)`-absorbing `I`-primary: hypothesis is `product ⊆ P` and
/// `product ∩ IP = ∅`, where `IP` is the ideal product.
pub fn is_uv_absorbing_i_primary(
    ctx: &RingContext,
    p: &HyperIdeal,
    i: &HyperIdeal,
    rad: &ElementSet,
    uv: UVParams,
) -> Result<Verdict, UsageError> {
    require_proper(&ctx.ring, p)?;
    require_proper(&ctx.ring, i)?;
    let ip = ideals::ideal_product(&ctx.ring, i, p);
    let domain = ctx.nonunit_list();
    let hyp = |s: &ElementSet| s.is_subset(p.members()) && !s.intersects(ip.members());
    Ok(UvSearch {
        domain: &domain,
        uv,
        hypothesis: &hyp,
        vpart_target: p.members(),
        rem_target: rad,
        description: "nonunit multisets × splits",
        clause: "product ⊆ P∖IP but v-part ⊄ P and remainder ⊄ rad(P)",
    }
    .run(&ctx.ring))
}

/// 1-absorbing primary: `x∘y∘z ⊆ P ⇒ x∘y ⊆ P or z ∈ rad`, nonunits.
///
/// Deliberately enumerated over ordered triples rather than through the
/// multiset search so the two can be compared.
pub fn is_1_absorbing_primary(
    ctx: &RingContext,
    p: &HyperIdeal,
    rad: &ElementSet,
) -> Result<Verdict, UsageError> {
    require_proper(&ctx.ring, p)?;
    let ring = &ctx.ring;
    let nu = ctx.nonunit_list();
    let mut tested = 0;
    let total = (nu.len() as u64).pow(3);
    for &x in &nu {
        for &y in &nu {
            let xy = ring.mul(x, y);
            for &z in &nu {
                if ring.mul_set_elem(xy, z).is_subset(p.members()) {
                    tested += 1;
                    if !xy.is_subset(p.members()) && !rad.contains(z) {
                        return Ok(Verdict::fails(
                            Witness::new(
                                vec![vec![x as i64, y as i64], vec![z as i64]],
                                "x∘y∘z ⊆ P but x∘y ⊄ P and z ∉ rad(P)",
                            ),
                            CheckedSpace::new("ordered nonunit triples", total, tested),
                        ));
                    }
                }
            }
        }
    }
    Ok(Verdict::holds(CheckedSpace::new(
        "ordered nonunit triples",
        total,
        tested,
    )))
}

/// Replay a `(u,v)` witness `[v-part, remainder]`: true when it still
/// demonstrates a failure of the definition with the given remainder
/// target (`rad(P)` for primary, `P` for prime).
pub fn replay_uv_witness(
    ctx: &RingContext,
    p: &ElementSet,
    rem_target: &ElementSet,
    domain: &ElementSet,
    witness: &Witness,
) -> bool {
    let [vpart, rem] = witness.parts.as_slice() else {
        return false;
    };
    let to_idx = |xs: &[i64]| -> Option<Vec<usize>> {
        xs.iter()
            .map(|&x| usize::try_from(x).ok().filter(|&x| x < ctx.ring.size()))
            .collect()
    };
    let (Some(vpart), Some(rem)) = (to_idx(vpart), to_idx(rem)) else {
        return false;
    };
    if vpart.is_empty() || rem.is_empty() || !vpart.iter().chain(&rem).all(|&x| domain.contains(x))
    {
        return false;
    }
    let all: Vec<usize> = vpart.iter().chain(&rem).copied().collect();
    let ring = &ctx.ring;
    ring.hyperproduct(&all).unwrap().is_subset(p)
        && !ring.hyperproduct(&vpart).unwrap().is_subset(p)
        && !ring.hyperproduct(&rem).unwrap().is_subset(rem_target)
}

/// The four conditions of the `(v+1, v)` characterization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharacterizationReport {
    pub v: usize,
    /// `(v+1, v)`-absorbing primary.
    pub absorbing: bool,
    /// `(P : a₁∘⋯∘a_v) ⊆ rad(P)` whenever the product is not in `P`.
    pub colon_in_radical: bool,
    /// `a₁∘⋯∘a_v∘Q ⊆ P ⇒ a-product ⊆ P or Q ⊆ rad(P)`.
    pub ideal_absorbing: bool,
    /// `P₁∘⋯∘P_{v+1} ⊆ P ⇒ P₁∘⋯∘P_v ⊆ P or P_{v+1} ⊆ rad(P)`.
    pub ideal_chain_absorbing: bool,
}

impl CharacterizationReport {
    pub fn all_agree(&self) -> bool {
        let x = self.absorbing;
        self.colon_in_radical == x && self.ideal_absorbing == x && self.ideal_chain_absorbing == x
    }
}

pub fn check_v1v_characterization(
    ctx: &RingContext,
    p: &HyperIdeal,
    rad: &ElementSet,
    v: usize,
) -> Result<CharacterizationReport, UsageError> {
    let uv = UVParams::new(v + 1, v)?;
    let absorbing = is_uv_absorbing_primary(ctx, p, rad, uv)?.is_holds();
    let ring = &ctx.ring;
    let nu = ctx.nonunit_list();
    let lattice = ctx.lattice();

    let vproducts: Vec<ElementSet> = multisets(nu.len(), v)
        .map(|m| {
            let xs: Vec<usize> = m.iter().map(|&i| nu[i]).collect();
            ring.hyperproduct(&xs).unwrap()
        })
        .collect();

    let colon_in_radical = vproducts
        .iter()
        .filter(|s| !s.is_subset(p.members()))
        .all(|s| colon(ring, p, s).members().is_subset(rad));

    let ideal_absorbing = vproducts.iter().all(|s| {
        lattice.all.iter().all(|q| {
            !ring.mul_sets(s, q.members()).is_subset(p.members())
                || s.is_subset(p.members())
                || q.members().is_subset(rad)
        })
    });

    let proper: Vec<&ElementSet> = lattice
        .proper_ideals(ring)
        .map(HyperIdeal::members)
        .collect();
    let ideal_chain_absorbing = multisets(proper.len(), v).all(|m| {
        let mut head = proper[m[0]].clone();
        for &i in &m[1..] {
            head = ring.mul_sets(&head, proper[i]);
        }
        proper.iter().all(|last| {
            !ring.mul_sets(&head, last).is_subset(p.members())
                || head.is_subset(p.members())
                || last.is_subset(rad)
        })
    });

    Ok(CharacterizationReport {
        v,
        absorbing,
        colon_in_radical,
        ideal_absorbing,
        ideal_chain_absorbing,
    })
}

/// Non-decreasing index vectors of length `k` over `0..n`.
pub(crate) fn multisets(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur = if n == 0 && k > 0 {
        None
    } else {
        Some(vec![0; k])
    };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let next = {
            let c = cur.as_mut().unwrap();
            let mut j = k;
            loop {
                if j == 0 {
                    break None;
                }
                j -= 1;
                if c[j] + 1 < n {
                    c[j] += 1;
                    let v = c[j];
                    for x in &mut c[j + 1..] {
                        *x = v;
                    }
                    break Some(());
                }
            }
        };
        if next.is_none() {
            cur = None;
        }
        Some(out)
    })
}

/// Divided: every prime `Q` lies in `⟨a⟩` for each `a ∉ Q`.
pub fn is_divided(ctx: &RingContext) -> Verdict {
    let ring = &ctx.ring;
    let lattice = ctx.lattice();
    let principal: Vec<HyperIdeal> = (0..ring.size())
        .map(|a| generate(ring, &ring.singleton(a)))
        .collect();
    let mut tested = 0;
    for q in lattice.prime_ideals() {
        for (a, generated) in principal.iter().enumerate() {
            if q.contains(a) {
                continue;
            }
            tested += 1;
            if !q.members().is_subset(generated.members()) {
                let qm: Vec<i64> = q.members().iter().map(|x| x as i64).collect();
                return Verdict::fails(
                    Witness::new(vec![qm, vec![a as i64]], "prime Q ⊄ ⟨a⟩ for a ∉ Q"),
                    CheckedSpace::new("prime × outside element pairs", tested, tested),
                );
            }
        }
    }
    Verdict::holds(CheckedSpace::new(
        "prime × outside element pairs",
        tested,
        tested,
    ))
}

/// Named properties, for callers that select one at run time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Prime,
    Primary,
    C,
    StrongC,
    UvPrime,
    UvPrimary,
    UvIPrimary,
    OneAbsorbingPrimary,
}

impl Property {
    pub const ALL: [Property; 8] = [
        Property::Prime,
        Property::Primary,
        Property::C,
        Property::StrongC,
        Property::UvPrime,
        Property::UvPrimary,
        Property::UvIPrimary,
        Property::OneAbsorbingPrimary,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Property::Prime => "prime",
            Property::Primary => "primary",
            Property::C => "c",
            Property::StrongC => "strong-c",
            Property::UvPrime => "uv-prime",
            Property::UvPrimary => "uv-primary",
            Property::UvIPrimary => "uv-i-primary",
            Property::OneAbsorbingPrimary => "one-absorbing-primary",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s)
    }

    pub fn needs_uv(&self) -> bool {
        matches!(
            self,
            Property::UvPrime | Property::UvPrimary | Property::UvIPrimary
        )
    }
}

/// Evaluate one property on one hyperideal, using the prime-intersection
/// radical wherever a radical is needed.
pub fn evaluate(
    ctx: &RingContext,
    p: &HyperIdeal,
    prop: Property,
    uv: Option<UVParams>,
    i: Option<&HyperIdeal>,
) -> Result<Verdict, UsageError> {
    let uv_or = || uv.ok_or(UsageError::BadParams { u: 0, v: 0 });
    let rad = || ctx.rad(p.members());
    match prop {
        Property::Prime => is_prime(&ctx.ring, p),
        Property::Primary => is_primary(&ctx.ring, p, &rad()),
        Property::C => Ok(ctx.is_c(p.members())),
        Property::StrongC => Ok(ctx.is_strong_c(p.members())),
        Property::UvPrime => is_uv_absorbing_prime(ctx, p, uv_or()?),
        Property::UvPrimary => is_uv_absorbing_primary(ctx, p, &rad(), uv_or()?),
        Property::UvIPrimary => {
            let i = i.ok_or_else(|| UsageError::NotHyperideal("missing I".into()))?;
            is_uv_absorbing_i_primary(ctx, p, i, &rad(), uv_or()?)
        }
        Property::OneAbsorbingPrimary => is_1_absorbing_primary(ctx, p, &rad()),
    }
}

/// Re-check a failure witness against the definition of `prop`.
pub fn replay(
    ctx: &RingContext,
    p: &HyperIdeal,
    prop: Property,
    i: Option<&HyperIdeal>,
    witness: &Witness,
) -> bool {
    let ring = &ctx.ring;
    let flat: Option<Vec<usize>> = witness
        .flat()
        .iter()
        .map(|&x| usize::try_from(x).ok().filter(|&x| x < ring.size()))
        .collect();
    let Some(flat) = flat else { return false };
    let pm = p.members();
    match prop {
        Property::Prime | Property::Primary => {
            let [x, y] = flat[..] else { return false };
            let target = if prop == Property::Prime {
                pm.clone()
            } else {
                ctx.rad(pm)
            };
            ring.mul(x, y).is_subset(pm) && !pm.contains(x) && !target.contains(y)
        }
        Property::C => match ring.hyperproduct(&flat) {
            Ok(s) => s.intersects(pm) && !s.is_subset(pm),
            Err(_) => false,
        },
        Property::StrongC => {
            let mut sum: Option<ElementSet> = None;
            for part in &witness.parts {
                let idx: Vec<usize> = part.iter().map(|&x| x as usize).collect();
                let Ok(s) = ring.hyperproduct(&idx) else {
                    return false;
                };
                sum = Some(match sum {
                    None => s,
                    Some(acc) => ring.add_sets(&acc, &s),
                });
            }
            sum.is_some_and(|s| s.intersects(pm) && !s.is_subset(pm))
        }
        Property::UvPrime => replay_uv_witness(ctx, pm, pm, &ctx.units.nonunits, witness),
        Property::UvPrimary | Property::OneAbsorbingPrimary => {
            replay_uv_witness(ctx, pm, &ctx.rad(pm), &ctx.units.nonunits, witness)
        }
        Property::UvIPrimary => {
            let Some(i) = i else { return false };
            let ip = ideals::ideal_product(ring, i, p);
            replay_uv_witness(ctx, pm, &ctx.rad(pm), &ctx.units.nonunits, witness)
                && !ring.hyperproduct(&flat).unwrap().intersects(ip.members())
        }
    }
}
