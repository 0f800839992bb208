//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion, with
//! supporting detail indented beneath it.
//!
//! Two criteria cannot pass as stated; for those the test asserts that the
//! failure is real (an independently confirmed counterexample) rather than
//! asserting a pass.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperlab_core::classify::UVParams;
use hyperlab_core::construct::matrix_hyperring;
use hyperlab_core::harness::{run_golden_examples, run_theorem_suite, Report, RingFamilySpec};
use hyperlab_core::ring::Axiom;
use hyperlab_core::zphi::{
    bounded_uv_primary_check, ideal_intersection, int_product, principal_membership,
    radical_membership, replay_witness, Membership, PrincipalIdeal, Variant, ZPhiRing,
};
use hyperlab_core::{ConstructionError, FiniteHyperring, HyperringError, Status, Verdict};

struct Line {
    label: &'static str,
    pass: bool,
    elapsed: Duration,
    details: Vec<String>,
}

impl Line {
    fn print(&self) {
        let mark = if self.pass { "PASS" } else { "FAIL" };
        println!(
            "[{mark}] {} ({:.2} s)",
            self.label,
            self.elapsed.as_secs_f64()
        );
        for d in &self.details {
            println!("       {d}");
        }
    }
}

// Independent integer oracles: everything is recomputed from the
// definition a∘b = {a·φ·b : φ ∈ Φ}, with no code shared with the library.

fn product_set(phi: &[i64], xs: &[i64]) -> BTreeSet<i128> {
    let mut acc: BTreeSet<i128> = [xs[0] as i128].into();
    for &x in &xs[1..] {
        acc = acc
            .iter()
            .flat_map(|&s| phi.iter().map(move |&f| s * f as i128 * x as i128))
            .collect();
    }
    acc
}

/// Some power set of `a` lies in `dℤ`, searching exponents up to 20.
fn in_radical_brute(phi: &[i64], d: i64, a: i64) -> bool {
    let d = d as i128;
    let a = (a as i128).rem_euclid(d);
    let mut s: BTreeSet<i128> = [a].into();
    for _ in 0..20 {
        if s.iter().all(|&z| z == 0) {
            return true;
        }
        s = s
            .iter()
            .flat_map(|&z| {
                phi.iter()
                    .map(move |&f| (z * f as i128 % d * a).rem_euclid(d))
            })
            .collect();
    }
    s.iter().all(|&z| z == 0)
}

fn within_ideal(set: &BTreeSet<i128>, d: i64) -> bool {
    set.iter().all(|z| z % d as i128 == 0)
}

fn within_radical(phi: &[i64], d: i64, set: &BTreeSet<i128>) -> bool {
    set.iter()
        .all(|&z| in_radical_brute(phi, d, (z % d as i128) as i64))
}

/// `[v-part, remainder]` breaks the `(u,v)` condition on `dℤ`.
fn confirm_counterexample(
    phi: &[i64],
    d: i64,
    vpart: &[i64],
    rem: &[i64],
    variant: Variant,
) -> bool {
    let all: Vec<i64> = vpart.iter().chain(rem).copied().collect();
    let rem_set = product_set(phi, rem);
    let rem_ok = match variant {
        Variant::Primary => within_radical(phi, d, &rem_set),
        Variant::Prime => within_ideal(&rem_set, d),
    };
    within_ideal(&product_set(phi, &all), d)
        && !within_ideal(&product_set(phi, vpart), d)
        && !rem_ok
}

fn witness_parts(v: &Verdict) -> Option<(Vec<i64>, Vec<i64>)> {
    let w = v.witness.as_ref()?;
    match w.parts.as_slice() {
        [a, b] => Some((a.clone(), b.clone())),
        _ => None,
    }
}

fn uv(u: usize, v: usize) -> UVParams {
    UVParams::new(u, v).unwrap()
}

fn golden_values() -> Line {
    let start = Instant::now();
    let ring = ZPhiRing::new(&[2, 3]).unwrap();
    let twelve = PrincipalIdeal::new(12).unwrap();
    let mut details = Vec::new();
    let mut pass = true;
    let cases: [(&[i64], &[i64], Membership); 4] = [
        (&[2, 3], &[12, 18], Membership::Mixed),
        (&[2, 2], &[8, 12], Membership::Mixed),
        (&[2, 2, 3], &[48, 72, 108], Membership::Subset),
        (&[2, 2, 2, 3], &[192, 288, 432, 648], Membership::Subset),
    ];
    for (xs, expected, membership) in cases {
        let set = int_product(&ring, xs).unwrap();
        let got = set.to_i64s().unwrap();
        let m = principal_membership(&twelve, &set);
        let ok = got == expected && m == membership;
        pass &= ok;
        details.push(format!("{xs:?} -> {got:?}, {m:?} vs 12Z"));
    }
    for a in [2, 3] {
        let inside = radical_membership(&ring, &twelve, a);
        pass &= !inside && !in_radical_brute(&[2, 3], 12, a);
        details.push(format!("{a} in rad(12Z): {inside}"));
    }
    let golden = run_golden_examples();
    pass &= golden.passed();
    details.push(format!(
        "{} golden rows, all passing: {}",
        golden.golden.len(),
        golden.passed()
    ));
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(1);
    Line {
        label: "golden product sets, memberships against 12Z and radical non-membership",
        pass,
        elapsed,
        details,
    }
}

/// Returns the line and whether the failure is backed by confirmed
/// counterexamples.
fn four_two_on_twelve() -> (Line, bool) {
    let start = Instant::now();
    let phi = [2, 3];
    let ring = ZPhiRing::new(&phi).unwrap();
    let twelve = PrincipalIdeal::new(12).unwrap();
    let mut details = Vec::new();

    let primary = bounded_uv_primary_check(&ring, &twelve, uv(4, 2), 50, Variant::Primary).unwrap();
    let no_counterexample = matches!(primary.status, Status::Inconclusive { .. });
    let mut backed = false;
    if let Some((a, b)) = witness_parts(&primary) {
        let replayed = replay_witness(
            &ring,
            &twelve,
            Variant::Primary,
            primary.witness.as_ref().unwrap(),
        );
        let confirmed = confirm_counterexample(&phi, 12, &a, &b, Variant::Primary);
        // The same failure without ±1 in the tuple.
        let without_units = confirm_counterexample(&phi, 12, &[2, 2], &[3, 3], Variant::Primary);
        backed = replayed && confirmed && without_units;
        details.push(format!(
            "(4,2)-absorbing primary at W=50: counterexample {a:?} | {b:?}, replayed {replayed}, oracle {confirmed}"
        ));
        details.push(format!(
            "2,2 | 3,3 is also a counterexample by the oracle: {without_units}"
        ));
    } else {
        details.push(format!(
            "(4,2)-absorbing primary at W=50: {}",
            primary.status
        ));
    }

    let prime = bounded_uv_primary_check(&ring, &twelve, uv(4, 2), 50, Variant::Prime).unwrap();
    let prime_ok = witness_parts(&prime).is_some_and(|(a, b)| {
        replay_witness(
            &ring,
            &twelve,
            Variant::Prime,
            prime.witness.as_ref().unwrap(),
        ) && confirm_counterexample(&phi, 12, &a, &b, Variant::Prime)
    });
    let listed = confirm_counterexample(&phi, 12, &[2, 2], &[2, 3], Variant::Prime);
    details.push(format!(
        "(4,2)-absorbing prime at W=50: {}, witness {}, replayed {prime_ok}",
        prime.status,
        prime
            .witness
            .as_ref()
            .map(|w| w.to_string())
            .unwrap_or_default()
    ));
    details.push(format!(
        "2,2 | 2,3 breaks (4,2)-absorbing prime by the oracle: {listed}"
    ));

    let elapsed = start.elapsed();
    let within_time = elapsed < Duration::from_secs(300);
    let line = Line {
        label: "12Z under Φ={2,3}: (4,2)-absorbing primary with no counterexample at W=50, prime variant fails",
        pass: no_counterexample && prime_ok && listed && within_time,
        elapsed,
        details,
    };
    (line, backed && prime_ok && listed && within_time)
}

fn three_two_on_twelve() -> Line {
    let start = Instant::now();
    let phi = [2, 3];
    let ring = ZPhiRing::new(&phi).unwrap();
    let twelve = PrincipalIdeal::new(12).unwrap();
    let mut pass = true;
    let mut windows = Vec::new();
    for w in [3, 4, 5, 10, 20] {
        let v = bounded_uv_primary_check(&ring, &twelve, uv(3, 2), w, Variant::Primary).unwrap();
        let ok = witness_parts(&v).is_some_and(|(a, b)| {
            let flat: Vec<i64> = a.iter().chain(&b).copied().collect();
            flat == [2, 2, 3] && confirm_counterexample(&phi, 12, &a, &b, Variant::Primary)
        });
        pass &= ok;
        windows.push(format!(
            "W={w}: {}",
            v.witness.map(|w| w.to_string()).unwrap_or("none".into())
        ));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(1);
    Line {
        label: "12Z under Φ={2,3}: (3,2)-absorbing primary fails with 2,2,3 at every window",
        pass,
        elapsed,
        details: windows,
    }
}

fn coprime_intersection() -> Line {
    let start = Instant::now();
    let phi = [2, 4];
    let ring = ZPhiRing::new(&phi).unwrap();
    let mut details = Vec::new();
    let meet = ideal_intersection(&[3, 5, 7]).unwrap();
    let mut pass = meet.generator() == 105;
    details.push(format!("3Z ∩ 5Z ∩ 7Z = {}Z", meet.generator()));
    let golden = run_golden_examples();
    let flagged = golden
        .golden
        .iter()
        .any(|g| g.observed == "105Z" && g.flag.as_deref().is_some_and(|f| f.contains("150Z")));
    pass &= flagged;
    details.push(format!(
        "disagreement with the printed 150Z flagged: {flagged}"
    ));
    for d in [3, 5, 7] {
        let p = PrincipalIdeal::new(d).unwrap();
        let v = bounded_uv_primary_check(&ring, &p, uv(3, 2), 30, Variant::Primary).unwrap();
        pass &= matches!(v.status, Status::Inconclusive { .. });
        details.push(format!("{d}Z at W=30: {}", v.status));
    }
    let v = bounded_uv_primary_check(&ring, &meet, uv(3, 2), 30, Variant::Primary).unwrap();
    let confirmed = witness_parts(&v).is_some_and(|(a, b)| {
        replay_witness(&ring, &meet, Variant::Primary, v.witness.as_ref().unwrap())
            && confirm_counterexample(&phi, 105, &a, &b, Variant::Primary)
    });
    pass &= confirmed;
    details.push(format!(
        "105Z at W=30: {}, witness {}, confirmed {confirmed}",
        v.status,
        v.witness
            .as_ref()
            .map(|w| w.to_string())
            .unwrap_or_default()
    ));
    Line {
        label: "3Z ∩ 5Z ∩ 7Z under Φ={2,4}: generator, flag, and (3,2) checks at W=30",
        pass,
        elapsed: start.elapsed(),
        details,
    }
}

fn theorem_suite(report: &Report, elapsed: Duration) -> Line {
    let mut details = vec![format!(
        "{} records, {} violations, {} skipped, incomplete {}",
        report.records.len(),
        report.violation_count(),
        report.skipped_count(),
        report.incomplete
    )];
    for (name, t) in &report.tallies {
        details.push(format!(
            "{name}: {} checked, {} vacuous, {} skipped, {} violations",
            t.checked,
            t.vacuous,
            t.skipped.values().sum::<u64>(),
            t.violations
        ));
    }
    for v in report.violations.iter().take(10) {
        details.push(format!(
            "VIOLATION {} on {} {}: {}",
            v.invariant, v.ring, v.ideal, v.detail
        ));
    }
    Line {
        label: "theorem suite over Z_n/Φ, n ≤ 12, |Φ| ∈ {2,3}, u ≤ 5: zero violations",
        pass: report.violations.is_empty()
            && !report.incomplete
            && elapsed < Duration::from_secs(1800),
        elapsed,
        details,
    }
}

fn radical_consistency(report: &Report) -> Line {
    let t = report
        .tallies
        .get("radical-forms-agree")
        .cloned()
        .unwrap_or_default();
    let equal = report
        .observations
        .get("non-C hyperideal: radicals equal")
        .copied()
        .unwrap_or(0);
    let differ = report
        .observations
        .get("non-C hyperideal: radicals differ")
        .copied()
        .unwrap_or(0);
    Line {
        label: "radical forms agree on C-hyperideals; compared on non-C hyperideals",
        pass: t.checked > 0 && t.violations == 0 && equal + differ > 0,
        elapsed: Duration::ZERO,
        details: vec![
            format!(
                "C-hyperideals: {} compared, {} disagreements",
                t.checked, t.violations
            ),
            format!(
                "non-C hyperideals: {equal} with equal radicals, {differ} with differing radicals"
            ),
        ],
    }
}

fn radical_oracle() -> Line {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut disagreements = Vec::new();
    let mut members = 0;
    let instances = 12_000;
    for k in 0..instances {
        let size = rng.gen_range(2..=3);
        let mut phi = BTreeSet::new();
        while phi.len() < size {
            let x: i64 = rng.gen_range(-12..=12);
            if x != 0 {
                phi.insert(x);
            }
        }
        let phi: Vec<i64> = phi.into_iter().collect();
        let d: i64 = if k % 2 == 0 {
            rng.gen_range(1..=300)
        } else {
            [2i64, 3, 5, 7]
                .iter()
                .map(|&p| p.pow(rng.gen_range(0..=3)))
                .product()
        };
        let a: i64 = rng.gen_range(-100..=100);
        let ring = ZPhiRing::new(&phi).unwrap();
        let fast = radical_membership(&ring, &PrincipalIdeal::new(d).unwrap(), a);
        let slow = in_radical_brute(&phi, d, a);
        members += fast as u32;
        if fast != slow {
            disagreements.push(format!(
                "Φ={phi:?} d={d} a={a}: criterion {fast}, brute force {slow}"
            ));
        }
    }
    let mut details = vec![format!(
        "{instances} seeded instances, {members} in the radical, {} disagreements",
        disagreements.len()
    )];
    details.extend(disagreements.iter().take(5).cloned());
    Line {
        label: "valuation criterion for radical membership against brute-force powers",
        pass: disagreements.is_empty(),
        elapsed: start.elapsed(),
        details,
    }
}

/// Entry `(i,j)` of a product is any element of `Σ_k a_ik∘b_kj`, chosen
/// independently per entry; matrices are row-major `[a00, a01, a10, a11]`.
fn matrix_product(ring: &FiniteHyperring, a: &[usize; 4], b: &[usize; 4]) -> BTreeSet<[usize; 4]> {
    let entry = |i: usize, j: usize| -> Vec<usize> {
        let left: Vec<usize> = ring.mul(a[2 * i], b[j]).iter().collect();
        let right: Vec<usize> = ring.mul(a[2 * i + 1], b[2 + j]).iter().collect();
        let sums: BTreeSet<usize> = left
            .iter()
            .flat_map(|&x| right.iter().map(move |&y| ring.add(x, y)))
            .collect();
        sums.into_iter().collect()
    };
    let e = [entry(0, 0), entry(0, 1), entry(1, 0), entry(1, 1)];
    let mut out = BTreeSet::new();
    for &p in &e[0] {
        for &q in &e[1] {
            for &r in &e[2] {
                for &s in &e[3] {
                    out.insert([p, q, r, s]);
                }
            }
        }
    }
    out
}

fn set_product(
    ring: &FiniteHyperring,
    xs: &BTreeSet<[usize; 4]>,
    ys: &BTreeSet<[usize; 4]>,
) -> BTreeSet<[usize; 4]> {
    xs.iter()
        .flat_map(|x| ys.iter().flat_map(|y| matrix_product(ring, x, y)))
        .collect()
}

fn matrix_of(code: usize, n: usize) -> [usize; 4] {
    [
        code / (n * n * n) % n,
        code / (n * n) % n,
        code / n % n,
        code % n,
    ]
}

/// Returns the line and whether every matrix failure is a confirmed
/// non-associative triple while quotients and localizations are clean.
fn construction_soundness(report: &Report) -> (Line, bool) {
    let obs = |k: &str| report.observations.get(k).copied().unwrap_or(0);
    let mut details = Vec::new();
    let mut unexplained = 0;
    for (k, v) in &report.observations {
        let construction =
            k.starts_with("quotient") || k.starts_with("localization") || k.contains("matrix ring");
        if construction {
            details.push(format!("{k}: {v}"));
        }
        let explained = k.ends_with("built and validated")
            || k.ends_with("is not a good homomorphism")
            || k.ends_with("not well defined")
            || k.ends_with("relation not transitive")
            || k.ends_with("sum not single-valued")
            || k.ends_with("no identity")
            || (k.contains("matrix ring") && k.ends_with("fails hyperring laws"));
        if construction && !explained {
            unexplained += v;
        }
    }
    let quotients_ok =
        obs("quotient: built and validated") > 0 && obs("quotient: fails hyperring laws") == 0;
    let localizations_ok = obs("localization: built and validated") > 0
        && obs("localization: fails hyperring laws") == 0;
    let matrix_failures =
        obs("2×2 matrix ring: fails hyperring laws") + obs("1×1 matrix ring: fails hyperring laws");

    // Rebuild every capped matrix ring and confirm each failure through an
    // independent product.
    let spec = RingFamilySpec::default();
    let mut confirmed = 0;
    let mut rebuilt_failures = 0;
    for member in spec.members().unwrap() {
        let n = member.ring.size();
        if n.pow(4) > spec.matrix_cap {
            continue;
        }
        let Err(ConstructionError::Invalid(inner)) =
            matrix_hyperring(&member.ring, 2, spec.matrix_cap)
        else {
            continue;
        };
        rebuilt_failures += 1;
        let HyperringError::Axioms(laws) = inner.as_ref() else {
            continue;
        };
        let Some(v) = laws
            .violations
            .iter()
            .find(|v| v.axiom == Axiom::MultiplicativeAssociativity)
        else {
            continue;
        };
        let [a, b, c] = [0, 1, 2].map(|i| matrix_of(v.witness[i], n));
        let ring = &member.ring;
        let left = set_product(ring, &matrix_product(ring, &a, &b), &[c].into());
        let right = set_product(ring, &[a].into(), &matrix_product(ring, &b, &c));
        if left != right {
            confirmed += 1;
            details.push(format!(
                "{}: 2×2 product not associative at A={a:?} B={b:?} C={c:?}: |(AB)C| = {}, |A(BC)| = {}",
                ring.label(),
                left.len(),
                right.len()
            ));
        }
    }
    details.push(format!("unexplained construction errors: {unexplained}"));
    let pass = quotients_ok && localizations_ok && matrix_failures == 0 && unexplained == 0;
    let backed = quotients_ok
        && localizations_ok
        && unexplained == 0
        && rebuilt_failures == matrix_failures
        && confirmed == matrix_failures;
    let line = Line {
        label: "every quotient, matrix and localization built in the sweep is a hyperring",
        pass,
        elapsed: Duration::ZERO,
        details,
    };
    (line, backed)
}

fn main() {
    let mut lines = Vec::new();
    lines.push(golden_values());
    let (four_two, four_two_backed) = four_two_on_twelve();
    lines.push(four_two);
    lines.push(three_two_on_twelve());
    lines.push(coprime_intersection());

    let start = Instant::now();
    let suite = run_theorem_suite(&RingFamilySpec::default()).unwrap();
    let suite_time = start.elapsed();
    lines.push(theorem_suite(&suite, suite_time));
    lines.push(radical_consistency(&suite));
    lines.push(radical_oracle());
    let (construction, construction_backed) = construction_soundness(&suite);
    lines.push(construction);

    println!();
    for l in &lines {
        l.print();
    }
    let passed = lines.iter().filter(|l| l.pass).count();
    println!("{passed} of {} criteria pass", lines.len());

    // The (4,2) primary claim and the matrix laws fail for reasons outside
    // the implementation; require those failures to be confirmed.
    for (i, l) in lines.iter().enumerate() {
        match i {
            1 if !l.pass => assert!(four_two_backed, "unconfirmed failure: {}", l.label),
            7 if !l.pass => assert!(construction_backed, "unconfirmed failure: {}", l.label),
            _ => assert!(l.pass, "{}", l.label),
        }
    }
}
