//! Replay of reference integer computations for `Z_Φ`: concrete product sets,
//! memberships, radical memberships, window searches and the intersection
//! of coprime principal ideals.

use crate::classify::UVParams;
use crate::harness::report::{GoldenRow, Report};
use crate::verdict::{Status, Verdict};
use crate::zphi::{
    bounded_uv_primary_check, ideal_intersection, int_product, is_counterexample,
    principal_membership, radical_membership, replay_witness, Membership, PrincipalIdeal, Variant,
    ZPhiRing,
};

/// Window used for the searches on the coprime generators.
pub const COPRIME_WINDOW: i64 = 30;

fn row(
    name: impl Into<String>,
    expected: impl Into<String>,
    observed: impl Into<String>,
    pass: bool,
) -> GoldenRow {
    GoldenRow {
        name: name.into(),
        expected: expected.into(),
        observed: observed.into(),
        pass,
        flag: None,
    }
}

fn list(xs: &[i64]) -> String {
    xs.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

fn describe(v: &Verdict) -> String {
    match (&v.status, &v.witness) {
        (Status::Fails, Some(w)) => format!("fails with {w}"),
        (status, _) => status.to_string(),
    }
}

pub fn run_golden_examples() -> Report {
    let mut report = Report::new("golden examples");
    let r23 = ZPhiRing::new(&[2, 3]).expect("two multipliers");
    let twelve = PrincipalIdeal::new(12).expect("positive");

    let products: [(&[i64], &[i64], bool); 4] = [
        (&[2, 3], &[12, 18], false),
        (&[2, 2], &[8, 12], false),
        (&[2, 2, 3], &[48, 72, 108], true),
        (&[2, 2, 2, 3], &[192, 288, 432, 648], true),
    ];
    for (xs, expected, inside) in products {
        let set = int_product(&r23, xs).expect("non-empty");
        let got = set.to_i64s().unwrap_or_default();
        report.golden.push(row(
            format!("Φ={{2,3}}: product of {}", list(xs)),
            format!("{{{}}}", list(expected)),
            format!("{{{}}}", list(&got)),
            got == expected,
        ));
        let membership = principal_membership(&twelve, &set);
        let want = if inside {
            Membership::Subset
        } else {
            Membership::Mixed
        };
        report.golden.push(row(
            format!("Φ={{2,3}}: product of {} against 12Z", list(xs)),
            format!("{want:?}"),
            format!("{membership:?}"),
            membership == want,
        ));
    }

    for a in [2, 3] {
        let inside = radical_membership(&r23, &twelve, a);
        report.golden.push(row(
            format!("Φ={{2,3}}: {a} in rad(12Z)"),
            "false",
            inside.to_string(),
            !inside,
        ));
    }

    // (4,2): prime variant.
    let uv42 = UVParams::new(4, 2).expect("4 > 2");
    let direct = is_counterexample(&r23, &twelve, uv42, Variant::Prime, &[2, 2, 2, 3]);
    report.golden.push(row(
        "Φ={2,3}: 2,2,2,3 breaks (4,2)-absorbing prime on 12Z",
        "true",
        direct.to_string(),
        direct,
    ));
    let search =
        bounded_uv_primary_check(&r23, &twelve, uv42, 10, Variant::Prime).expect("valid window");
    let replays = search
        .witness
        .as_ref()
        .is_some_and(|w| replay_witness(&r23, &twelve, Variant::Prime, w));
    report.golden.push(row(
        "Φ={2,3}: (4,2)-absorbing prime search on 12Z at W=10",
        "fails with a replayable witness",
        describe(&search),
        search.is_fails() && replays,
    ));

    // (4,2): primary variant. The definition admits the counterexamples
    // below, so these rows are flagged against the claim that it holds.
    let claims = [[2, 2, 3, 3], [2, 2, 2, 3]];
    for tuple in claims {
        let broken = is_counterexample(&r23, &twelve, uv42, Variant::Primary, &tuple);
        let mut g = row(
            format!(
                "Φ={{2,3}}: {} against (4,2)-absorbing primary on 12Z",
                list(&tuple)
            ),
            "counterexample",
            if broken {
                "counterexample"
            } else {
                "no counterexample"
            },
            broken,
        );
        g.flag = Some("contradicts the claim that 12Z is (4,2)-absorbing primary".into());
        report.golden.push(g);
    }

    // (3,2): primary fails on 12Z through 2,2,3 at every window.
    let uv32 = UVParams::new(3, 2).expect("3 > 2");
    for w in [3, 10] {
        let v = bounded_uv_primary_check(&r23, &twelve, uv32, w, Variant::Primary)
            .expect("valid window");
        let ok = v.witness.as_ref().is_some_and(|wit| {
            wit.flat() == [2, 2, 3] && replay_witness(&r23, &twelve, Variant::Primary, wit)
        });
        report.golden.push(row(
            format!("Φ={{2,3}}: (3,2)-absorbing primary on 12Z at W={w}"),
            "fails with 2,2,3",
            describe(&v),
            ok,
        ));
    }

    // Intersection of 3Z, 5Z, 7Z under Φ={2,4}.
    let meet = ideal_intersection(&[3, 5, 7]).expect("positive generators");
    let mut g = row(
        "3Z ∩ 5Z ∩ 7Z",
        "105Z",
        format!("{}Z", meet.generator()),
        meet.generator() == 105,
    );
    g.flag = Some("contradicts the claimed value 150Z; lcm(3,5,7) = 105".into());
    report.golden.push(g);

    let r24 = ZPhiRing::new(&[2, 4]).expect("two multipliers");
    for d in [3, 5, 7] {
        let p = PrincipalIdeal::new(d).expect("positive");
        let v = bounded_uv_primary_check(&r24, &p, uv32, COPRIME_WINDOW, Variant::Primary)
            .expect("valid window");
        report.golden.push(row(
            format!("Φ={{2,4}}: (3,2)-absorbing primary on {d}Z at W={COPRIME_WINDOW}"),
            "no counterexample",
            describe(&v),
            matches!(v.status, Status::Inconclusive { .. }),
        ));
    }
    let v = bounded_uv_primary_check(&r24, &meet, uv32, COPRIME_WINDOW, Variant::Primary)
        .expect("valid window");
    let replays = v
        .witness
        .as_ref()
        .is_some_and(|w| replay_witness(&r24, &meet, Variant::Primary, w));
    report.golden.push(row(
        format!("Φ={{2,4}}: (3,2)-absorbing primary on 105Z at W={COPRIME_WINDOW}"),
        "fails with a replayable witness",
        describe(&v),
        v.is_fails() && replays,
    ));
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_row_passes() {
        let r = run_golden_examples();
        for g in &r.golden {
            assert!(g.pass, "{g:?}");
        }
        assert!(r.passed());
        assert_eq!(r.golden.iter().filter(|g| g.flag.is_some()).count(), 3);
    }
}
