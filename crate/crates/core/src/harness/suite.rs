//! The theorem suite: every implication between the hyperideal classes
//! that the theory predicts, checked exhaustively on a family of `Z_n/Φ`
//! rings, together with the derived constructions.
//!
//! Implications whose statement assumes a multiplicative identity are
//! skipped (with that reason) on rings that have none. Purely
//! combinatorial implications are checked on every ring.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use rayon::prelude::*;

use crate::classify::{
    check_v1v_characterization, is_1_absorbing_primary, is_divided, is_primary, is_prime,
    is_uv_absorbing_primary_over, is_uv_absorbing_prime, RingContext, UVParams,
};
use crate::construct::{
    enumerate_mcs, gamma, localize, matrix_hyperring, matrix_tables, quotient, transfer_check,
    Direction, LocalizedRing, MatrixHyperring, TransferOutcome,
};
use crate::error::ConstructionError;
use crate::harness::config::{ConfigError, FamilyMember, Mutation, RingFamilySpec};
use crate::harness::report::{Record, Report, Violation};
use crate::ideals::{colon, hyperideal_violation, ideal_product, radical_nilpotent, HyperIdeal};
use crate::ring::FiniteHyperring;
use crate::set::ElementSet;
use crate::verdict::{Verdict, Witness};

const NO_IDENTITY: &str = "ring has no identity";
const OVER_BUDGET: &str = "tuple budget exceeded";

/// Run every invariant over the family. Rings are processed in parallel;
/// the report lists them in family order.
pub fn run_theorem_suite(spec: &RingFamilySpec) -> Result<Report, ConfigError> {
    let members = spec.members()?;
    let parts: Vec<Report> = members.par_iter().map(|m| ring_suite(m, spec)).collect();
    let mut report = Report::new(format!("theorem suite over {} rings", members.len()));
    let mut radical_example = false;
    for mut part in parts {
        // One example of differing radicals is enough.
        part.notes.retain(|n| {
            if n.starts_with(NON_C_EXAMPLE) {
                !std::mem::replace(&mut radical_example, true)
            } else {
                true
            }
        });
        report.absorb(part);
    }
    Ok(report)
}

const NON_C_EXAMPLE: &str = "non-C hyperideal with differing radicals";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Kind {
    Primary,
    Prime,
    /// Primary with factors drawn from the whole carrier.
    PrimaryAll,
}

/// One ring with its ideals and a memo of decider outcomes.
struct Ring<'a> {
    ctx: Arc<RingContext>,
    spec: &'a RingFamilySpec,
    label: String,
    ideals: Vec<HyperIdeal>,
    proper: Vec<usize>,
    rad: Vec<ElementSet>,
    rad_nil: Vec<ElementSet>,
    c: Vec<Verdict>,
    strong_c: Vec<Verdict>,
    prime: Vec<Option<Verdict>>,
    primary: Vec<Option<Verdict>>,
    memo: Mutex<HashMap<(usize, UVParams, Kind), Option<Timed>>>,
}

/// A verdict and its wall time in milliseconds.
type Timed = (Verdict, u64);

fn multiset_count(d: usize, u: usize) -> u128 {
    // C(d+u-1, u)
    let mut acc: u128 = 1;
    for k in 0..u {
        acc = acc * (d + k) as u128 / (k + 1) as u128;
    }
    acc
}

impl<'a> Ring<'a> {
    fn new(ring: FiniteHyperring, spec: &'a RingFamilySpec) -> Self {
        let ctx = Arc::new(RingContext::new(ring));
        let ideals = ctx.lattice().all.clone();
        let proper: Vec<usize> = (0..ideals.len())
            .filter(|&i| ideals[i].is_proper(&ctx.ring))
            .collect();
        let rad = ideals.iter().map(|p| ctx.rad(p.members())).collect();
        let rad_nil = ideals
            .iter()
            .map(|p| ctx.rad_nilpotent(p.members()))
            .collect();
        let c = ideals.iter().map(|p| ctx.is_c(p.members())).collect();
        let strong_c = ideals
            .iter()
            .map(|p| ctx.is_strong_c(p.members()))
            .collect();
        let prime = ideals.iter().map(|p| is_prime(&ctx.ring, p).ok()).collect();
        let primary = ideals
            .iter()
            .map(|p| is_primary(&ctx.ring, p, &ctx.rad(p.members())).ok())
            .collect();
        Self {
            label: ctx.ring.label().to_string(),
            ctx,
            spec,
            ideals,
            proper,
            rad,
            rad_nil,
            c,
            strong_c,
            prime,
            primary,
            memo: Mutex::new(HashMap::new()),
        }
    }

    fn has_identity(&self) -> bool {
        self.ctx.units.has_identity()
    }

    fn name(&self, i: usize) -> String {
        self.ideals[i].members().to_string()
    }

    fn index(&self, s: &ElementSet) -> usize {
        self.ctx
            .lattice()
            .index_of(s)
            .expect("hyperideal of the ring is in its lattice")
    }

    fn is_c(&self, i: usize) -> bool {
        self.c[i].is_holds()
    }

    fn is_strong_c(&self, i: usize) -> bool {
        self.strong_c[i].is_holds()
    }

    fn is_prime(&self, i: usize) -> bool {
        self.prime[i].as_ref().is_some_and(Verdict::is_holds)
    }

    fn is_primary(&self, i: usize) -> bool {
        self.primary[i].as_ref().is_some_and(Verdict::is_holds)
    }

    /// Decider outcome, or `None` when the tuple space exceeds the budget.
    fn verdict(&self, i: usize, uv: UVParams, kind: Kind) -> Option<Timed> {
        let key = (i, uv, kind);
        if let Some(v) = self.memo.lock().unwrap().get(&key) {
            return v.clone();
        }
        let domain = match kind {
            Kind::PrimaryAll => self.ctx.ring.full_set(),
            _ => self.ctx.units.nonunits.clone(),
        };
        let out = if multiset_count(domain.len(), uv.u()) > self.spec.tuple_budget as u128 {
            None
        } else {
            let p = &self.ideals[i];
            let start = Instant::now();
            let v = match kind {
                Kind::Prime => is_uv_absorbing_prime(&self.ctx, p, uv),
                Kind::Primary | Kind::PrimaryAll => {
                    let rad = match self.spec.mutation {
                        Some(Mutation::DropRemainderClause) => self.ctx.ring.empty_set(),
                        None => self.rad[i].clone(),
                    };
                    is_uv_absorbing_primary_over(&self.ctx, p, &rad, uv, &domain)
                }
            }
            .expect("proper ideal and valid params");
            Some((v, start.elapsed().as_millis() as u64))
        };
        self.memo.lock().unwrap().insert(key, out.clone());
        out
    }

    fn holds(&self, i: usize, uv: UVParams, kind: Kind) -> Option<bool> {
        self.verdict(i, uv, kind).map(|(v, _)| v.is_holds())
    }

    fn witness(&self, i: usize, uv: UVParams, kind: Kind) -> Option<Witness> {
        self.verdict(i, uv, kind).and_then(|(v, _)| v.witness)
    }

    fn violation(
        &self,
        i: usize,
        params: impl Into<String>,
        detail: impl Into<String>,
        witness: Option<Witness>,
    ) -> Violation {
        Violation {
            invariant: String::new(),
            ring: self.label.clone(),
            ideal: self.name(i),
            params: params.into(),
            detail: detail.into(),
            witness,
        }
    }

    fn uvs(&self) -> Vec<UVParams> {
        UVParams::all_up_to(self.spec.u_max)
    }
}

fn uv(u: usize, v: usize) -> UVParams {
    UVParams::new(u, v).expect("u > v ≥ 1")
}

/// `holds` with budget accounting: `None` records a skip.
fn need(rep: &mut Report, inv: &str, x: Option<bool>) -> Option<bool> {
    if x.is_none() {
        rep.skip(inv, OVER_BUDGET);
        rep.incomplete = true;
    }
    x
}

fn ring_suite(member: &FamilyMember, spec: &RingFamilySpec) -> Report {
    let r = Ring::new(member.ring.clone(), spec);
    let mut rep = Report::new(r.label.clone());
    records(&r, &mut rep);
    combinatorial(&r, &mut rep);
    radical_forms(&r, &mut rep);
    if r.has_identity() {
        identity_theorems(&r, &mut rep);
    } else {
        for inv in IDENTITY_INVARIANTS {
            rep.skip(inv, NO_IDENTITY);
        }
    }
    quotients(&r, &mut rep);
    matrices(&r, &mut rep);
    localizations(&r, &mut rep);
    rep
}

const IDENTITY_INVARIANTS: [&str; 11] = [
    "radical-is-prime",
    "product-with-maximal",
    "colon-lowers-arity",
    "radical-keeps-strong-c",
    "units-allowed",
    "nonlocal-arity-drop",
    "nonlocal-equals-primary",
    "arity-drop-or-local",
    "equal-radical-intersection",
    "v1v-characterization",
    "divided-equals-primary",
];

fn records(r: &Ring, rep: &mut Report) {
    if !r.spec.records {
        return;
    }
    let timed = |millis: u64| r.spec.timing.then_some(millis);
    for &i in &r.proper {
        let name = r.name(i);
        let basic: [(&str, &Verdict); 4] = [
            ("prime", r.prime[i].as_ref().expect("proper")),
            ("primary", r.primary[i].as_ref().expect("proper")),
            ("c", &r.c[i]),
            ("strong-c", &r.strong_c[i]),
        ];
        for (prop, v) in basic {
            rep.records
                .push(Record::from_verdict(&r.label, &name, prop, "", v));
        }
        for p in r.uvs() {
            for (prop, kind) in [("uv-prime", Kind::Prime), ("uv-primary", Kind::Primary)] {
                if let Some((v, ms)) = r.verdict(i, p, kind) {
                    let mut rec = Record::from_verdict(&r.label, &name, prop, p.to_string(), &v);
                    rec.millis = timed(ms);
                    rep.records.push(rec);
                }
            }
        }
    }
}

fn combinatorial(r: &Ring, rep: &mut Report) {
    for &i in &r.proper {
        for p in r.uvs() {
            // prime-implies-primary
            let inv = "prime-implies-primary";
            match (r.holds(i, p, Kind::Prime), r.holds(i, p, Kind::Primary)) {
                (Some(false), _) => rep.vacuous(inv),
                (Some(true), Some(ok)) => rep.check(inv, ok, || {
                    r.violation(
                        i,
                        p.to_string(),
                        "absorbing prime but not absorbing primary",
                        r.witness(i, p, Kind::Primary),
                    )
                }),
                _ => {
                    need(rep, inv, None);
                }
            }

            // absorbing-monotone
            let inv = "absorbing-monotone";
            match need(rep, inv, r.holds(i, p, Kind::Primary)) {
                Some(true) => {
                    let mut targets = vec![uv(p.u() + 1, p.v() + 1)];
                    targets.extend((p.u() + 1..=p.u() + 3).map(|w| uv(w, p.v())));
                    for t in targets {
                        if let Some(ok) = need(rep, inv, r.holds(i, t, Kind::Primary)) {
                            rep.check(inv, ok, || {
                                r.violation(
                                    i,
                                    format!("{p}→{t}"),
                                    format!("holds at {p} but not at {t}"),
                                    r.witness(i, t, Kind::Primary),
                                )
                            });
                        }
                    }
                }
                Some(false) => rep.vacuous(inv),
                None => {}
            }

            // primary-implies-absorbing
            let inv = "primary-implies-absorbing";
            if r.is_primary(i) {
                if let Some(ok) = need(rep, inv, r.holds(i, p, Kind::Primary)) {
                    rep.check(inv, ok, || {
                        r.violation(
                            i,
                            p.to_string(),
                            "primary but not absorbing primary",
                            r.witness(i, p, Kind::Primary),
                        )
                    });
                }
            } else {
                rep.vacuous(inv);
            }
        }

        // one-absorbing-is-3-2
        let inv = "one-absorbing-is-3-2";
        if r.spec.u_max >= 3 {
            let direct = is_1_absorbing_primary(&r.ctx, &r.ideals[i], &r.rad[i]).expect("proper");
            if let Some(multi) = need(rep, inv, r.holds(i, uv(3, 2), Kind::Primary)) {
                rep.check(inv, direct.is_holds() == multi, || {
                    r.violation(
                        i,
                        "(3,2)",
                        format!(
                            "ordered triples say {}, multiset search says {multi}",
                            direct.is_holds()
                        ),
                        direct
                            .witness
                            .clone()
                            .or_else(|| r.witness(i, uv(3, 2), Kind::Primary)),
                    )
                });
            }
        }
    }
}

fn radical_forms(r: &Ring, rep: &mut Report) {
    let inv = "radical-forms-agree";
    for &i in &r.proper {
        let equal = r.rad[i] == r.rad_nil[i];
        if r.is_c(i) {
            rep.check(inv, equal, || {
                r.violation(
                    i,
                    "",
                    format!(
                        "prime-intersection radical {} ≠ nilpotent radical {}",
                        r.rad[i], r.rad_nil[i]
                    ),
                    None,
                )
            });
        } else {
            rep.vacuous(inv);
            rep.observe(if equal {
                "non-C hyperideal: radicals equal"
            } else {
                "non-C hyperideal: radicals differ"
            });
            if !equal {
                rep.notes.push(format!(
                    "{NON_C_EXAMPLE}: {} ideal {}: prime-intersection {} vs nilpotent {}",
                    r.label,
                    r.name(i),
                    r.rad[i],
                    r.rad_nil[i]
                ));
            }
        }
    }
}

fn identity_theorems(r: &Ring, rep: &mut Report) {
    let ring = &r.ctx.ring;
    let lattice = r.ctx.lattice();
    let local = lattice.local;
    let maximal = lattice.unique_maximal().cloned();
    let divided = is_divided(&r.ctx).is_holds();
    let uvs = r.uvs();

    for &i in &r.proper {
        let p = &r.ideals[i];

        // radical-is-prime
        let inv = "radical-is-prime";
        let any_uv = uvs
            .iter()
            .map(|&q| r.holds(i, q, Kind::Primary))
            .any(|h| h == Some(true));
        if r.is_c(i) && any_uv {
            let ok = HyperIdeal::new(ring, r.rad_nil[i].clone())
                .ok()
                .and_then(|q| is_prime(ring, &q).ok())
                .is_some_and(|v| v.is_holds());
            rep.check(inv, ok, || {
                r.violation(
                    i,
                    "",
                    format!("nilpotent radical {} is not prime", r.rad_nil[i]),
                    None,
                )
            });
        } else {
            rep.vacuous(inv);
        }

        // product-with-maximal
        let inv = "product-with-maximal";
        match &maximal {
            Some(m) if local && r.is_prime(i) && r.is_c(i) => {
                let pm = ideal_product(ring, p, m);
                let j = r.index(pm.members());
                for &q in &uvs {
                    if let Some(ok) = need(rep, inv, r.holds(j, q, Kind::Primary)) {
                        rep.check(inv, ok, || {
                            r.violation(
                                i,
                                q.to_string(),
                                format!("P∘M = {} is not absorbing primary", pm.members()),
                                r.witness(j, q, Kind::Primary),
                            )
                        });
                    }
                }
            }
            _ => rep.vacuous(inv),
        }

        for &q in &uvs {
            // colon-lowers-arity
            let inv = "colon-lowers-arity";
            if q.v() >= 2 {
                match need(rep, inv, r.holds(i, q, Kind::Primary)) {
                    Some(true) => {
                        let lower = uv(q.u() - 1, q.v() - 1);
                        for x in r.ctx.units.nonunits.iter().filter(|&x| !p.contains(x)) {
                            let col = colon(ring, p, &ring.singleton(x));
                            if !col.is_proper(ring) {
                                rep.skip(inv, "(P : x) is the whole ring");
                                continue;
                            }
                            let j = r.index(col.members());
                            if let Some(ok) = need(rep, inv, r.holds(j, lower, Kind::Primary)) {
                                rep.check(inv, ok, || {
                                    r.violation(
                                        i,
                                        format!("{q} x={x}"),
                                        format!(
                                            "(P : x) = {} is not {lower}-absorbing primary",
                                            col.members()
                                        ),
                                        r.witness(j, lower, Kind::Primary),
                                    )
                                });
                            }
                        }
                    }
                    Some(false) => rep.vacuous(inv),
                    None => {}
                }
            }

            // units-allowed
            let inv = "units-allowed";
            let shifted_nonunit = r.ctx.units.identities.iter().any(|e| {
                p.members()
                    .iter()
                    .any(|a| !r.ctx.units.is_unit(ring.add(a, e)))
            });
            if r.is_strong_c(i) && shifted_nonunit {
                let (Some(a), Some(b)) = (
                    need(rep, inv, r.holds(i, q, Kind::Primary)),
                    need(rep, inv, r.holds(i, q, Kind::PrimaryAll)),
                ) else {
                    continue;
                };
                rep.check(inv, a == b, || {
                    r.violation(
                        i,
                        q.to_string(),
                        format!("over nonunits {a}, over all elements {b}"),
                        r.witness(i, q, Kind::PrimaryAll)
                            .or_else(|| r.witness(i, q, Kind::Primary)),
                    )
                });
            } else {
                rep.vacuous(inv);
            }

            if r.is_strong_c(i) && q.u() < r.spec.u_max {
                let up_both = uv(q.u() + 1, q.v() + 1);
                let up_u = uv(q.u() + 1, q.v());
                let (Some(here), Some(hb), Some(hu)) = (
                    r.holds(i, q, Kind::Primary),
                    r.holds(i, up_both, Kind::Primary),
                    r.holds(i, up_u, Kind::Primary),
                ) else {
                    need(rep, "nonlocal-arity-drop", None);
                    need(rep, "arity-drop-or-local", None);
                    continue;
                };

                // nonlocal-arity-drop
                let inv = "nonlocal-arity-drop";
                if !local && (hb || hu) {
                    rep.check(inv, here, || {
                        r.violation(
                            i,
                            q.to_string(),
                            format!(
                                "holds at {} but not at {q} in a non-local ring",
                                if hb { up_both } else { up_u }
                            ),
                            r.witness(i, q, Kind::Primary),
                        )
                    });
                } else {
                    rep.vacuous(inv);
                }

                // arity-drop-or-local
                let inv = "arity-drop-or-local";
                if hu && !here {
                    let ok = local
                        && maximal
                            .as_ref()
                            .is_some_and(|m| *m.members() == r.rad_nil[i]);
                    rep.check(inv, ok, || {
                        r.violation(i, q.to_string(), format!("holds at {up_u} but not at {q}; local={local}, nilpotent radical {}", r.rad_nil[i]), r.witness(i, q, Kind::Primary))
                    });
                } else {
                    rep.vacuous(inv);
                }
            }

            // nonlocal-equals-primary
            let inv = "nonlocal-equals-primary";
            if !local && r.is_strong_c(i) && q.v() >= 2 {
                if let Some(h) = need(rep, inv, r.holds(i, q, Kind::Primary)) {
                    rep.check(inv, h == r.is_primary(i), || {
                        r.violation(
                            i,
                            q.to_string(),
                            format!("absorbing primary {h}, primary {}", r.is_primary(i)),
                            r.witness(i, q, Kind::Primary),
                        )
                    });
                }
            } else {
                rep.vacuous(inv);
            }

            // divided-equals-primary
            let inv = "divided-equals-primary";
            if divided && r.is_c(i) {
                if let Some(h) = need(rep, inv, r.holds(i, q, Kind::Primary)) {
                    rep.check(inv, h == r.is_primary(i), || {
                        r.violation(
                            i,
                            q.to_string(),
                            format!(
                                "divided ring: absorbing primary {h}, primary {}",
                                r.is_primary(i)
                            ),
                            r.witness(i, q, Kind::Primary),
                        )
                    });
                }
            } else {
                rep.vacuous(inv);
            }
        }

        // radical-keeps-strong-c
        let inv = "radical-keeps-strong-c";
        if r.is_strong_c(i) {
            let rad = &r.rad[i];
            rep.check(inv, r.ctx.is_strong_c(rad).is_holds(), || {
                r.violation(
                    i,
                    "",
                    format!("radical {rad} is not strong C"),
                    r.ctx.is_strong_c(rad).witness,
                )
            });
        } else {
            rep.vacuous(inv);
        }

        // v1v-characterization
        let inv = "v1v-characterization";
        if r.is_c(i) {
            for v in 1..r.spec.u_max {
                if multiset_count(r.ctx.units.nonunits.len(), v + 1) > r.spec.tuple_budget as u128 {
                    need(rep, inv, None);
                    continue;
                }
                let c = check_v1v_characterization(&r.ctx, p, &r.rad[i], v).expect("proper");
                rep.check(inv, c.all_agree(), || {
                    r.violation(i, format!("v={v}"), format!("{c:?}"), None)
                });
            }
        } else {
            rep.vacuous(inv);
        }
    }

    equal_radical_intersections(r, rep);
}

fn equal_radical_intersections(r: &Ring, rep: &mut Report) {
    let inv = "equal-radical-intersection";
    for q in r.uvs() {
        let mut groups: BTreeMap<ElementSet, Vec<usize>> = BTreeMap::new();
        for &i in &r.proper {
            if r.is_c(i) && r.holds(i, q, Kind::Primary) == Some(true) {
                groups.entry(r.rad[i].clone()).or_default().push(i);
            }
        }
        for members in groups.values().filter(|g| g.len() >= 2) {
            for family in subfamilies(members) {
                let mut meet = r.ideals[family[0]].members().clone();
                for &j in &family[1..] {
                    meet.intersect_with(r.ideals[j].members());
                }
                let k = r.index(&meet);
                if let Some(ok) = need(rep, inv, r.holds(k, q, Kind::Primary)) {
                    let names: Vec<String> = family.iter().map(|&j| r.name(j)).collect();
                    rep.check(inv, ok, || {
                        r.violation(
                            k,
                            q.to_string(),
                            format!(
                                "intersection of {} is not absorbing primary",
                                names.join(" ")
                            ),
                            r.witness(k, q, Kind::Primary),
                        )
                    });
                }
            }
        }
    }
}

/// Every subfamily of size ≥ 2 for small groups; pairs and the whole
/// group otherwise.
fn subfamilies(g: &[usize]) -> Vec<Vec<usize>> {
    if g.len() <= 8 {
        (1u32..1 << g.len())
            .filter(|m| m.count_ones() >= 2)
            .map(|m| {
                (0..g.len())
                    .filter(|&b| m >> b & 1 == 1)
                    .map(|b| g[b])
                    .collect()
            })
            .collect()
    } else {
        let mut out: Vec<Vec<usize>> = crate::classify::combinations(g.len(), 2)
            .into_iter()
            .map(|c| c.iter().map(|&b| g[b]).collect())
            .collect();
        out.push(g.to_vec());
        out
    }
}

fn construction_error_kind(e: &ConstructionError) -> &'static str {
    match e {
        ConstructionError::Usage(_) => "usage error",
        ConstructionError::TooLarge { .. } => "over size cap",
        ConstructionError::NotWellDefined(_) => "not well defined",
        ConstructionError::NotTransitive(_) => "relation not transitive",
        ConstructionError::MultiValuedSum(_) => "sum not single-valued",
        ConstructionError::NotMultiplicativelyClosed(_) => "not multiplicatively closed",
        ConstructionError::NoIdentity => "no identity",
        ConstructionError::Invalid(_) => "fails hyperring laws",
    }
}

fn record_transfer(
    rep: &mut Report,
    inv: &str,
    out: TransferOutcome,
    violation: impl FnOnce() -> Violation,
) {
    match out {
        TransferOutcome::Skipped { reason } => {
            let reason = if reason.starts_with("nonunit") {
                "a nonunit maps to a unit".to_string()
            } else {
                reason
            };
            rep.skip(inv, reason);
        }
        TransferOutcome::Checked { premise: false, .. } => rep.vacuous(inv),
        TransferOutcome::Checked {
            premise: true,
            conclusion,
        } => rep.check(inv, conclusion, violation),
    }
}

fn quotients(r: &Ring, rep: &mut Report) {
    for &i in &r.proper {
        let q = match quotient(r.ctx.clone(), &r.ideals[i]) {
            Ok(q) => {
                rep.observe("quotient: built and validated");
                q
            }
            Err(e) => {
                let kind = construction_error_kind(&e);
                rep.observe(format!("quotient: {kind}"));
                if matches!(e, ConstructionError::Invalid(_)) {
                    rep.notes.push(format!("{} / {}: {e}", r.label, r.name(i)));
                }
                continue;
            }
        };
        if !r.has_identity() {
            for inv in ["transfer-preimage", "transfer-image", "quotient-iff"] {
                rep.skip(inv, NO_IDENTITY);
            }
            continue;
        }
        let over: Vec<usize> = r
            .proper
            .iter()
            .copied()
            .filter(|&j| r.ideals[i].members().is_subset(r.ideals[j].members()))
            .collect();
        let target = &q.ring;
        let target_proper: Vec<HyperIdeal> = target
            .lattice()
            .proper_ideals(&target.ring)
            .cloned()
            .collect();

        for p in r.uvs() {
            for t in &target_proper {
                let out = transfer_check(&q.projection, t, p, Direction::Preimage).expect("proper");
                record_transfer(rep, "transfer-preimage", out, || Violation {
                    invariant: String::new(),
                    ring: r.label.clone(),
                    ideal: format!("preimage of {} under A → A/{}", t.members(), r.name(i)),
                    params: p.to_string(),
                    detail: "image-side absorbing primary C, preimage not".into(),
                    witness: None,
                });
            }
            for &j in &over {
                let out = transfer_check(&q.projection, &r.ideals[j], p, Direction::Image)
                    .expect("proper");
                record_transfer(rep, "transfer-image", out, || {
                    r.violation(
                        j,
                        p.to_string(),
                        format!("image in A/{} is not absorbing primary C", r.name(i)),
                        None,
                    )
                });
            }
        }

        // quotient-iff
        let inv = "quotient-iff";
        if q.projection.nonunit_to_unit().is_some() {
            rep.skip(inv, "x+P is a unit for some nonunit x");
            continue;
        }
        for &j in over.iter().filter(|&&j| r.is_c(j)) {
            let image = HyperIdeal::new(&target.ring, q.projection.image(r.ideals[j].members()));
            let Ok(image) = image else {
                rep.skip(inv, "Q/P is not a hyperideal");
                continue;
            };
            if !image.is_proper(&target.ring) {
                rep.skip(inv, "Q/P is the whole quotient");
                continue;
            }
            let rad = target.rad(image.members());
            for p in r.uvs() {
                let Some(here) = need(rep, inv, r.holds(j, p, Kind::Primary)) else {
                    continue;
                };
                let there =
                    is_uv_absorbing_primary_over(target, &image, &rad, p, &target.units.nonunits)
                        .expect("proper")
                        .is_holds();
                rep.check(inv, here == there, || {
                    r.violation(
                        j,
                        p.to_string(),
                        format!("in A: {here}, in A/{}: {there}", r.name(i)),
                        None,
                    )
                });
            }
        }
    }
}

fn matrices(r: &Ring, rep: &mut Report) {
    let base = &r.ctx.ring;
    let n = base.size();
    if n.pow(4) > r.spec.matrix_cap {
        for inv in ["matrix-corner-products", "matrix-reflects"] {
            rep.skip(inv, "matrix ring over size cap");
        }
        return;
    }
    match matrix_hyperring(base, 1, r.spec.matrix_cap) {
        Ok(_) => rep.observe("1×1 matrix ring: built and validated"),
        Err(e) => {
            rep.observe(format!("1×1 matrix ring: {}", construction_error_kind(&e)));
            rep.notes.push(format!("{} 1×1 matrices: {e}", r.label));
        }
    }

    // Corner products depend only on the base ring, whatever the matrix
    // ring's off-diagonal behaviour.
    let tables = matrix_tables(base, 2, r.spec.matrix_cap).expect("within cap");
    let zero = base.zero();
    let corner = |a: usize| -> usize {
        let mut e = [zero; 4];
        e[0] = a;
        e.iter().fold(0, |acc, &x| acc * n + x)
    };
    let mut bad = None;
    'outer: for a in 0..n {
        for b in 0..n {
            let expect = tables.set_of(base.mul(a, b).iter().map(corner));
            if *tables.mul(corner(a), corner(b)) != expect {
                bad = Some((a, b));
                break 'outer;
            }
        }
    }
    rep.check("matrix-corner-products", bad.is_none(), || Violation {
        invariant: String::new(),
        ring: r.label.clone(),
        ideal: String::new(),
        params: "m=2".into(),
        detail: "corner product differs from the corner of the base product".into(),
        witness: bad.map(|(a, b)| Witness::from_elems([a, b], "corner(a)∘corner(b)")),
    });

    let mat = match matrix_hyperring(base, 2, r.spec.matrix_cap) {
        Ok(m) => {
            rep.observe("2×2 matrix ring: built and validated");
            m
        }
        Err(e) => {
            rep.observe(format!("2×2 matrix ring: {}", construction_error_kind(&e)));
            if let ConstructionError::Invalid(inner) = &e {
                if let crate::error::HyperringError::Axioms(report) = inner.as_ref() {
                    let first = report
                        .violations
                        .iter()
                        .find(|v| v.axiom != crate::ring::Axiom::MultiplicativeCommutativity);
                    if let Some(v) = first {
                        rep.notes.push(format!(
                            "{} 2×2 matrices: {} fails at {:?}",
                            r.label, v.axiom, v.witness
                        ));
                    }
                }
            }
            rep.skip("matrix-reflects", "2×2 matrix ring fails hyperring laws");
            return;
        }
    };
    if !r.has_identity() {
        rep.skip("matrix-reflects", NO_IDENTITY);
        return;
    }
    matrix_reflects(r, rep, &mat);
}

/// `M₂(P)` absorbing primary C ⇒ `P` absorbing primary C, by
/// contraposition: a failure for `P` lifts through corner matrices to a
/// failure for `M₂(P)`. The radical of `M₂(P)` is read as its nilpotent
/// radical.
fn matrix_reflects(r: &Ring, rep: &mut Report, mat: &MatrixHyperring) {
    let inv = "matrix-reflects";
    let m = &mat.ring;
    let units = m.unit_report();
    let zero = r.ctx.ring.zero();
    let lift =
        |xs: &[i64]| -> Vec<usize> { xs.iter().map(|&x| mat.corner(x as usize, zero)).collect() };
    for &i in &r.proper {
        let mp = match crate::construct::embed_diagonal_ideal(mat, &r.ideals[i]) {
            Ok(s) => s,
            Err(_) => {
                rep.skip(inv, "M₂(P) is not a hyperideal");
                continue;
            }
        };
        let mp_rad = radical_nilpotent(m, &mp);
        for p in r.uvs() {
            let Some(absorbing) = need(rep, inv, r.holds(i, p, Kind::Primary)) else {
                continue;
            };
            if r.is_c(i) && absorbing {
                rep.check(inv, true, || unreachable!());
                continue;
            }
            let refuted = if !r.is_c(i) {
                let w = r.c[i]
                    .witness
                    .as_ref()
                    .expect("failing verdict has a witness");
                let prod = m.hyperproduct(&lift(&w.flat())).expect("non-empty");
                prod.intersects(&mp) && !prod.is_subset(&mp)
            } else {
                let w = r
                    .witness(i, p, Kind::Primary)
                    .expect("failing verdict has a witness");
                let (vpart, rem) = (lift(&w.parts[0]), lift(&w.parts[1]));
                let all: Vec<usize> = vpart.iter().chain(&rem).copied().collect();
                all.iter().all(|&x| !units.is_unit(x))
                    && m.hyperproduct(&all).expect("non-empty").is_subset(&mp)
                    && !m.hyperproduct(&vpart).expect("non-empty").is_subset(&mp)
                    && !m.hyperproduct(&rem).expect("non-empty").is_subset(&mp_rad)
            };
            if refuted {
                rep.vacuous(inv);
            } else {
                rep.check(inv, false, || {
                    r.violation(
                        i,
                        p.to_string(),
                        "P fails but its corner witness does not break M₂(P)",
                        r.witness(i, p, Kind::Primary),
                    )
                });
            }
        }
    }
}

fn localizations(r: &Ring, rep: &mut Report) {
    const INVS: [&str; 3] = [
        "localization-radical",
        "localization-lowers-arity",
        "localization-reflects",
    ];
    if !r.has_identity() {
        for inv in INVS {
            rep.skip(inv, NO_IDENTITY);
        }
        return;
    }
    for s in enumerate_mcs(&r.ctx) {
        match localize(&r.ctx, &s) {
            Ok(l) => {
                rep.observe("localization: built and validated");
                if l.pi.is_err() {
                    rep.observe("localization: a ↦ a/1 is not a good homomorphism");
                }
                localized_invariants(r, rep, &l);
            }
            Err(e) => {
                rep.observe(format!("localization: {}", construction_error_kind(&e)));
                if matches!(e, ConstructionError::Invalid(_)) {
                    rep.notes
                        .push(format!("{} S={}: {e}", r.label, s.members()));
                }
            }
        }
    }
}

fn localized_invariants(r: &Ring, rep: &mut Report, l: &LocalizedRing) {
    let loc = &l.ring;
    let s = l.s.members();
    let mut memo: HashMap<(ElementSet, UVParams), bool> = HashMap::new();
    let mut loc_holds = |t: &HyperIdeal, p: UVParams| -> bool {
        *memo.entry((t.members().clone(), p)).or_insert_with(|| {
            is_uv_absorbing_primary_over(loc, t, &loc.rad(t.members()), p, &loc.units.nonunits)
                .expect("proper")
                .is_holds()
        })
    };
    for &i in &r.proper {
        let pm = r.ideals[i].members();
        if !r.is_c(i) || pm.intersects(s) {
            for inv in [
                "localization-radical",
                "localization-lowers-arity",
                "localization-reflects",
            ] {
                rep.vacuous(inv);
            }
            continue;
        }
        let sp = l.localize_set(pm);
        if let Some(why) = hyperideal_violation(&loc.ring, &sp) {
            rep.skip(
                "localization-radical",
                format!("S⁻¹P is not a hyperideal: {why}"),
            );
            continue;
        }
        let sp = HyperIdeal::new(&loc.ring, sp).expect("checked");
        if !sp.is_proper(&loc.ring) {
            rep.skip("localization-radical", "S⁻¹P is the whole ring");
            continue;
        }
        let lifted = l.localize_set(&r.rad[i]);
        let direct = loc.rad(sp.members());
        rep.check("localization-radical", lifted == direct, || {
            r.violation(
                i,
                format!("S={s}"),
                format!("S⁻¹rad(P) = {lifted}, rad(S⁻¹P) = {direct}"),
                None,
            )
        });

        let gamma_clear = !gamma(&r.ctx.ring, pm).intersects(s);
        for p in r.uvs() {
            let inv = "localization-lowers-arity";
            if p.v() >= 2 {
                match need(rep, inv, r.holds(i, p, Kind::Primary)) {
                    Some(true) => {
                        let lower = uv(p.u() - 1, p.v() - 1);
                        let ok = loc_holds(&sp, lower);
                        rep.check(inv, ok, || {
                            r.violation(
                                i,
                                format!("{p} S={s}"),
                                format!("S⁻¹P = {} is not {lower}-absorbing primary", sp.members()),
                                None,
                            )
                        });
                    }
                    Some(false) => rep.vacuous(inv),
                    None => {}
                }
            }

            let inv = "localization-reflects";
            if !gamma_clear {
                rep.vacuous(inv);
            } else if loc_holds(&sp, p) {
                if let Some(ok) = need(rep, inv, r.holds(i, p, Kind::Primary)) {
                    rep.check(inv, ok, || {
                        r.violation(
                            i,
                            format!("{p} S={s}"),
                            "S⁻¹P absorbing primary but P not",
                            r.witness(i, p, Kind::Primary),
                        )
                    });
                }
            } else {
                rep.vacuous(inv);
            }
        }
    }
}
