//! The integers with `a∘b = {a·x·b : x ∈ Φ}` for a finite multiplier set
//! `Φ`, and bounded checks on principal hyperideals `dℤ`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{combinations, multisets, UVParams};
use crate::error::UsageError;
use crate::verdict::{CheckedSpace, Verdict, Witness};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZPhiRing {
    phi: Vec<i64>,
}

impl ZPhiRing {
    /// `phi` needs at least two distinct nonzero entries; order is not
    /// significant.
    pub fn new(phi: &[i64]) -> Result<Self, UsageError> {
        let mut phi = phi.to_vec();
        phi.sort_unstable();
        let before = phi.len();
        phi.dedup();
        if phi.len() < 2 || phi.len() != before || phi.contains(&0) {
            return Err(UsageError::BadMultipliers);
        }
        Ok(Self { phi })
    }

    pub fn phi(&self) -> &[i64] {
        &self.phi
    }

    /// `e` is an identity iff `e·x = 1` for some `x ∈ Φ`, i.e. `e = x = ±1`.
    pub fn identities(&self) -> Vec<i64> {
        self.phi.iter().copied().filter(|x| x.abs() == 1).collect()
    }

    /// Units divide an identity, so they are among `±1`, and both are
    /// units as soon as any identity exists.
    pub fn is_unit(&self, x: i64) -> bool {
        !self.identities().is_empty() && x.abs() == 1
    }

    /// All products of `k` multipliers, with repetition.
    pub fn multiplier_products(&self, k: usize) -> BTreeSet<BigInt> {
        let mut acc: BTreeSet<BigInt> = [BigInt::one()].into();
        for _ in 0..k {
            acc = acc
                .iter()
                .flat_map(|w| self.phi.iter().map(move |&x| w * x))
                .collect();
        }
        acc
    }

    fn multiplier_products_small(&self, k: usize) -> Option<Vec<i128>> {
        self.multiplier_products(k)
            .into_iter()
            .map(|w| i128::try_from(w).ok())
            .collect()
    }
}

impl fmt::Display for ZPhiRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let phi: Vec<String> = self.phi.iter().map(|x| x.to_string()).collect();
        write!(f, "Z_Φ, Φ={{{}}}", phi.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntProductSet {
    values: BTreeSet<BigInt>,
}

impl IntProductSet {
    pub fn values(&self) -> &BTreeSet<BigInt> {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.values.iter().map(|v| i64::try_from(v).ok()).collect()
    }
}

impl<T: Into<BigInt>> FromIterator<T> for IntProductSet {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        Self {
            values: iter.into_iter().map(Into::into).collect(),
        }
    }
}

impl fmt::Display for IntProductSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", vals.join(","))
    }
}

/// `x₁∘⋯∘x_k = {x₁⋯x_k · w : w a product of k−1 multipliers}`.
pub fn int_product(ring: &ZPhiRing, xs: &[i64]) -> Result<IntProductSet, UsageError> {
    if xs.is_empty() {
        return Err(UsageError::EmptyProduct);
    }
    let base: BigInt = xs.iter().map(|&x| BigInt::from(x)).product();
    Ok(ring
        .multiplier_products(xs.len() - 1)
        .into_iter()
        .map(|w| &base * w)
        .collect())
}

/// `dℤ` for a positive generator `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PrincipalIdeal {
    d: u64,
}

impl PrincipalIdeal {
    pub fn new(d: i64) -> Result<Self, UsageError> {
        if d >= 1 {
            Ok(Self { d: d as u64 })
        } else {
            Err(UsageError::BadGenerator(d))
        }
    }

    pub fn generator(&self) -> u64 {
        self.d
    }

    pub fn contains(&self, m: &BigInt) -> bool {
        (m % BigInt::from(self.d)).is_zero()
    }
}

impl fmt::Display for PrincipalIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}Z", self.d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    Subset,
    Disjoint,
    Mixed,
}

pub fn principal_membership(p: &PrincipalIdeal, s: &IntProductSet) -> Membership {
    let inside = s.values.iter().filter(|m| p.contains(m)).count();
    if inside == s.len() {
        Membership::Subset
    } else if inside == 0 {
        Membership::Disjoint
    } else {
        Membership::Mixed
    }
}

fn factorize(mut d: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= d {
        if d.is_multiple_of(p) {
            let mut e = 0;
            while d.is_multiple_of(p) {
                d /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if d > 1 {
        out.push((d, 1));
    }
    out
}

fn valuation(x: i128, p: u64) -> u32 {
    debug_assert!(x != 0);
    let p = p as i128;
    let mut x = x;
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn valuation_big(x: &BigInt, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    while (&x % &p).is_zero() {
        x /= &p;
        v += 1;
    }
    v
}

/// For each prime `p | d`: its exponent `e_p` in `d` and `m_p`, the least
/// `p`-adic valuation over `Φ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RadicalProfile {
    pub d: u64,
    pub primes: Vec<PrimeEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrimeEntry {
    pub p: u64,
    pub e: u32,
    pub m: u32,
}

impl RadicalProfile {
    pub fn new(ring: &ZPhiRing, ideal: &PrincipalIdeal) -> Self {
        let primes = factorize(ideal.d)
            .into_iter()
            .map(|(p, e)| PrimeEntry {
                p,
                e,
                m: ring
                    .phi
                    .iter()
                    .map(|&x| valuation(x as i128, p))
                    .min()
                    .unwrap(),
            })
            .collect();
        Self { d: ideal.d, primes }
    }

    /// `a^n ⊆ dℤ` for large `n` iff every `p | d` divides `a` or every
    /// multiplier: the valuation of each element of `a^n` is at least
    /// `n·v_p(a) + (n−1)·m_p`, with equality attained.
    pub fn contains(&self, a: i128) -> bool {
        a == 0 || self.primes.iter().all(|q| valuation(a, q.p) + q.m >= 1)
    }

    pub fn contains_big(&self, a: &BigInt) -> bool {
        a.is_zero() || self.primes.iter().all(|q| valuation_big(a, q.p) + q.m >= 1)
    }
}

/// Whether some power of `a` lies entirely in `dℤ`.
pub fn radical_membership(ring: &ZPhiRing, ideal: &PrincipalIdeal, a: i64) -> bool {
    RadicalProfile::new(ring, ideal).contains(a as i128)
}

/// Which conclusion the remainder must meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Remainder product inside `rad(dℤ)`.
    Primary,
    /// Remainder product inside `dℤ`.
    Prime,
}

/// Exact predicates on sets `{c·w : w ∈ W_k}`, with an `i128` fast path.
struct SetOracle<'a> {
    ring: &'a ZPhiRing,
    ideal: PrincipalIdeal,
    profile: RadicalProfile,
    small: Vec<Option<Vec<i128>>>,
}

impl<'a> SetOracle<'a> {
    fn new(ring: &'a ZPhiRing, ideal: PrincipalIdeal, max_k: usize) -> Self {
        Self {
            ring,
            ideal,
            profile: RadicalProfile::new(ring, &ideal),
            small: (0..=max_k)
                .map(|k| ring.multiplier_products_small(k))
                .collect(),
        }
    }

    /// Every element of `∏xs · W_{|xs|−1}` satisfies `pred`.
    fn product_within(&self, xs: &[i64], target: Target) -> bool {
        let small = xs
            .iter()
            .try_fold(1i128, |acc, &x| acc.checked_mul(x as i128))
            .and_then(|c| {
                let ws = self.small[xs.len() - 1].as_ref()?;
                ws.iter()
                    .map(|w| c.checked_mul(*w))
                    .collect::<Option<Vec<_>>>()
            });
        match small {
            Some(vals) => vals.into_iter().all(|z| match target {
                Target::Ideal => z % self.ideal.d as i128 == 0,
                Target::Radical => self.profile.contains(z),
            }),
            None => int_product(self.ring, xs)
                .unwrap()
                .values
                .iter()
                .all(|z| match target {
                    Target::Ideal => self.ideal.contains(z),
                    Target::Radical => self.profile.contains_big(z),
                }),
        }
    }
}

#[derive(Clone, Copy)]
enum Target {
    Ideal,
    Radical,
}

/// Window values in canonical order `1, −1, 2, −2, …`, units removed.
/// Zero is left out: a tuple containing 0 has a part equal to `{0}`, so it
/// can never be a counterexample.
fn window_values(ring: &ZPhiRing, window: i64) -> Vec<i64> {
    (1..=window)
        .flat_map(|k| [k, -k])
        .filter(|&x| !ring.is_unit(x))
        .collect()
}

/// Search nonunit multisets with entries in `[−W, W]` for a failure of the
/// `(u,v)` condition on `dℤ`. With no counterexample the status is
/// inconclusive at the window: the carrier is infinite.
///
/// Multisets are visited graded by their largest canonical index, then
/// lexicographically, so the reported witness is the first in that order.
pub fn bounded_uv_primary_check(
    ring: &ZPhiRing,
    ideal: &PrincipalIdeal,
    uv: UVParams,
    window: i64,
    variant: Variant,
) -> Result<Verdict, UsageError> {
    if window < 2 {
        return Err(UsageError::BadWindow(window));
    }
    let values = window_values(ring, window);
    let oracle = SetOracle::new(ring, *ideal, uv.u() - 1);
    let rem_target = match variant {
        Variant::Primary => Target::Radical,
        Variant::Prime => Target::Ideal,
    };
    let splits = combinations(uv.u(), uv.v());
    let clause = match variant {
        Variant::Primary => "product ⊆ P but v-part ⊄ P and remainder ⊄ rad(P)",
        Variant::Prime => "product ⊆ P but v-part ⊄ P and remainder ⊄ P",
    };

    let per_grade: Vec<(u64, u64, Option<Witness>)> = (0..values.len())
        .into_par_iter()
        .map(|g| {
            let (mut enumerated, mut tested) = (0u64, 0u64);
            let mut tuple = vec![0i64; uv.u()];
            for head in multisets(g + 1, uv.u() - 1) {
                for (slot, &i) in tuple.iter_mut().zip(&head) {
                    *slot = values[i];
                }
                tuple[uv.u() - 1] = values[g];
                enumerated += 1;
                if !oracle.product_within(&tuple, Target::Ideal) {
                    continue;
                }
                tested += 1;
                if let Some(w) = bad_split(&oracle, &tuple, &splits, rem_target, clause) {
                    return (enumerated, tested, Some(w));
                }
            }
            (enumerated, tested, None)
        })
        .collect();

    let mut enumerated = 0;
    let mut tested = 0;
    let description = format!("nonzero nonunit multisets in [-{window},{window}] × splits");
    for (e, t, w) in per_grade {
        enumerated += e;
        tested += t;
        if let Some(w) = w {
            return Ok(Verdict::fails(
                w,
                CheckedSpace::new(description, enumerated, tested),
            ));
        }
    }
    Ok(Verdict::inconclusive(
        format!("W={window}"),
        CheckedSpace::new(description, enumerated, tested),
    ))
}

fn bad_split(
    oracle: &SetOracle<'_>,
    tuple: &[i64],
    splits: &[Vec<usize>],
    rem_target: Target,
    clause: &str,
) -> Option<Witness> {
    let mut seen = HashSet::new();
    for split in splits {
        let vpart: Vec<i64> = split.iter().map(|&i| tuple[i]).collect();
        if !seen.insert(vpart.clone()) || oracle.product_within(&vpart, Target::Ideal) {
            continue;
        }
        let rem: Vec<i64> = (0..tuple.len())
            .filter(|i| !split.contains(i))
            .map(|i| tuple[i])
            .collect();
        if !oracle.product_within(&rem, rem_target) {
            return Some(Witness::new(vec![vpart, rem], clause));
        }
    }
    None
}

/// True when some split of `tuple` (nonunits, total product in `dℤ`) has
/// both parts failing their clause. `tuple` need not come from a search.
pub fn is_counterexample(
    ring: &ZPhiRing,
    ideal: &PrincipalIdeal,
    uv: UVParams,
    variant: Variant,
    tuple: &[i64],
) -> bool {
    if tuple.len() != uv.u() || tuple.iter().any(|&x| ring.is_unit(x)) {
        return false;
    }
    let oracle = SetOracle::new(ring, *ideal, uv.u() - 1);
    let rem_target = match variant {
        Variant::Primary => Target::Radical,
        Variant::Prime => Target::Ideal,
    };
    oracle.product_within(tuple, Target::Ideal)
        && bad_split(
            &oracle,
            tuple,
            &combinations(uv.u(), uv.v()),
            rem_target,
            "",
        )
        .is_some()
}

/// Re-check a witness `[v-part, remainder]` directly through product sets.
pub fn replay_witness(
    ring: &ZPhiRing,
    ideal: &PrincipalIdeal,
    variant: Variant,
    witness: &Witness,
) -> bool {
    let [vpart, rem] = witness.parts.as_slice() else {
        return false;
    };
    if vpart.is_empty() || rem.is_empty() || witness.flat().iter().any(|&x| ring.is_unit(x)) {
        return false;
    }
    let profile = RadicalProfile::new(ring, ideal);
    let all = int_product(ring, &witness.flat()).unwrap();
    let v = int_product(ring, vpart).unwrap();
    let r = int_product(ring, rem).unwrap();
    let rem_ok = match variant {
        Variant::Primary => r.values.iter().all(|z| profile.contains_big(z)),
        Variant::Prime => principal_membership(ideal, &r) == Membership::Subset,
    };
    principal_membership(ideal, &all) == Membership::Subset
        && principal_membership(ideal, &v) != Membership::Subset
        && !rem_ok
}

/// `⋂ dᵢℤ = lcm(dᵢ)ℤ`.
pub fn ideal_intersection(ds: &[i64]) -> Result<PrincipalIdeal, UsageError> {
    if ds.is_empty() {
        return Err(UsageError::EmptyGenerators);
    }
    let mut l = BigInt::one();
    for &d in ds {
        PrincipalIdeal::new(d)?;
        l = l.lcm(&BigInt::from(d));
    }
    let l = i64::try_from(l.abs()).map_err(|_| UsageError::BadGenerator(i64::MAX))?;
    PrincipalIdeal::new(l)
}
