//! Finite commutative multiplicative hyperrings.
//!
//! A hyperring here is an abelian group `(A, +)` on the carrier `{0..n}`
//! together with a commutative, associative hyperoperation `∘` whose
//! values are nonempty subsets of the carrier, subject to the sign rule
//! `(-a)∘b = -(a∘b)` and weak distributivity `(a+b)∘c ⊆ a∘c + b∘c`.
//! Both tables are stored fully materialized.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HyperringError, StructureError, UsageError};
use crate::set::ElementSet;

/// Unvalidated operation tables, as read from a config file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawTables {
    pub add: Vec<Vec<usize>>,
    pub hmul: Vec<Vec<Vec<usize>>>,
}

/// The laws a table pair can violate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    AdditiveAssociativity,
    AdditiveCommutativity,
    AdditiveIdentity,
    AdditiveInverse,
    MultiplicativeAssociativity,
    SignRule,
    WeakDistributivity,
    MultiplicativeCommutativity,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::AdditiveAssociativity => "(a+b)+c = a+(b+c)",
            Axiom::AdditiveCommutativity => "a+b = b+a",
            Axiom::AdditiveIdentity => "additive identity exists",
            Axiom::AdditiveInverse => "additive inverses exist",
            Axiom::MultiplicativeAssociativity => "(a∘b)∘c = a∘(b∘c)",
            Axiom::SignRule => "(-a)∘b = -(a∘b)",
            Axiom::WeakDistributivity => "(a+b)∘c ⊆ a∘c + b∘c",
            Axiom::MultiplicativeCommutativity => "a∘b = b∘a",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub witness: Vec<usize>,
}

/// Outcome of checking the hyperring axioms on well-formed tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub n: usize,
    /// First violating tuple found for each failed law.
    pub violations: Vec<AxiomViolation>,
    /// Distributivity holds with equality for every triple.
    pub strongly_distributive: bool,
    /// A triple where the inclusion is strict, when not strongly distributive.
    pub strict_distributivity_witness: Option<Vec<usize>>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Structurally check raw tables, then check every hyperring law.
///
/// Malformed tables are an `Err`; law violations are reported inside the
/// `Ok` value.
pub fn validate_hyperring(tables: &RawTables) -> Result<ValidationReport, StructureError> {
    let ring = FiniteHyperring::from_raw_unchecked(tables, "tables")?;
    Ok(ring.axiom_report())
}

/// A finite commutative multiplicative hyperring.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteHyperring {
    n: usize,
    add: Vec<usize>,
    neg: Vec<usize>,
    hmul: Vec<ElementSet>,
    zero: usize,
    label: String,
    names: Option<Vec<String>>,
}

impl fmt::Debug for FiniteHyperring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteHyperring")
            .field("label", &self.label)
            .field("n", &self.n)
            .finish()
    }
}

impl FiniteHyperring {
    /// Build from raw tables and require every axiom to hold.
    pub fn from_tables(tables: &RawTables, label: &str) -> Result<Self, HyperringError> {
        let ring = Self::from_raw_unchecked(tables, label)?;
        ring.validated()
    }

    /// `Z_n` with `a∘b = {a·x·b mod n : x ∈ Φ}`.
    ///
    /// `phi` is reduced mod `n`; the induced set must be nonempty. A
    /// single residue gives an ordinary ring viewed as a hyperring.
    pub fn zn_phi(n: usize, phi: &[i64]) -> Result<Self, HyperringError> {
        if n == 0 {
            return Err(StructureError::EmptyCarrier.into());
        }
        let mut residues: Vec<usize> = phi
            .iter()
            .map(|&x| x.rem_euclid(n as i64) as usize)
            .collect();
        residues.sort_unstable();
        residues.dedup();
        if residues.is_empty() {
            return Err(StructureError::EmptyMultiplierSet.into());
        }
        let add = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        let hmul = (0..n * n)
            .map(|i| {
                let ab = (i / n) * (i % n) % n;
                ElementSet::from_elems(n, residues.iter().map(|&x| ab * x % n))
            })
            .collect();
        let label = format!(
            "z{n}:{}",
            residues
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        // Φ-induced rings satisfy every law by construction.
        Ok(Self::from_flat(n, add, hmul, label))
    }

    pub(crate) fn from_raw_unchecked(
        tables: &RawTables,
        label: &str,
    ) -> Result<Self, StructureError> {
        let n = tables.add.len();
        if n == 0 {
            return Err(StructureError::EmptyCarrier);
        }
        if tables.hmul.len() != n {
            return Err(StructureError::RowCount {
                table: "hmul",
                rows: tables.hmul.len(),
                n,
            });
        }
        let mut add = Vec::with_capacity(n * n);
        for (a, row) in tables.add.iter().enumerate() {
            if row.len() != n {
                return Err(StructureError::RowLength {
                    table: "add",
                    row: a,
                    len: row.len(),
                    n,
                });
            }
            for (b, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(StructureError::OutOfRange { a, b, value: v, n });
                }
                add.push(v);
            }
        }
        let mut hmul = Vec::with_capacity(n * n);
        for (a, row) in tables.hmul.iter().enumerate() {
            if row.len() != n {
                return Err(StructureError::RowLength {
                    table: "hmul",
                    row: a,
                    len: row.len(),
                    n,
                });
            }
            for (b, cell) in row.iter().enumerate() {
                if cell.is_empty() {
                    return Err(StructureError::EmptyProduct { a, b });
                }
                if let Some(&v) = cell.iter().find(|&&v| v >= n) {
                    return Err(StructureError::OutOfRange { a, b, value: v, n });
                }
                hmul.push(ElementSet::from_elems(n, cell.iter().copied()));
            }
        }
        Ok(Self::from_flat(n, add, hmul, label.to_string()))
    }

    /// Assemble from flat tables. Zero and negation are inferred; if the
    /// tables are not a group, the inferred values are placeholders and
    /// [`FiniteHyperring::axiom_report`] will say so.
    pub(crate) fn from_flat(
        n: usize,
        add: Vec<usize>,
        hmul: Vec<ElementSet>,
        label: String,
    ) -> Self {
        let zero = (0..n)
            .find(|&e| (0..n).all(|a| add[e * n + a] == a && add[a * n + e] == a))
            .unwrap_or(0);
        let neg = (0..n)
            .map(|a| (0..n).find(|&b| add[a * n + b] == zero).unwrap_or(a))
            .collect();
        Self {
            n,
            add,
            neg,
            hmul,
            zero,
            label,
            names: None,
        }
    }

    pub(crate) fn with_names(mut self, names: Vec<String>) -> Self {
        debug_assert_eq!(names.len(), self.n);
        self.names = Some(names);
        self
    }

    pub(crate) fn validated(self) -> Result<Self, HyperringError> {
        let report = self.axiom_report();
        if report.passed() {
            Ok(self)
        } else {
            Err(HyperringError::Axioms(report))
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn element_name(&self, x: usize) -> String {
        match &self.names {
            Some(names) => names[x].clone(),
            None => x.to_string(),
        }
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.n + b]
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg[b])
    }

    /// The hyperproduct `a∘b`.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> &ElementSet {
        &self.hmul[a * self.n + b]
    }

    pub fn empty_set(&self) -> ElementSet {
        ElementSet::empty(self.n)
    }

    pub fn full_set(&self) -> ElementSet {
        ElementSet::full(self.n)
    }

    pub fn singleton(&self, x: usize) -> ElementSet {
        ElementSet::singleton(self.n, x)
    }

    pub fn set_of<I: IntoIterator<Item = usize>>(&self, elems: I) -> ElementSet {
        ElementSet::from_elems(self.n, elems)
    }

    /// `S∘b`, the union of `s∘b` over `s ∈ S`.
    #[inline]
    pub fn mul_set_elem(&self, s: &ElementSet, b: usize) -> ElementSet {
        let mut out = self.empty_set();
        for a in s {
            out.union_with(self.mul(a, b));
        }
        out
    }

    /// `S∘T`, the union of `s∘t` over both sets.
    pub fn mul_sets(&self, s: &ElementSet, t: &ElementSet) -> ElementSet {
        let mut out = self.empty_set();
        for b in t {
            for a in s {
                out.union_with(self.mul(a, b));
            }
        }
        out
    }

    /// Setwise sum `S + T = {s + t}`.
    pub fn add_sets(&self, s: &ElementSet, t: &ElementSet) -> ElementSet {
        let mut out = self.empty_set();
        for a in s {
            for b in t {
                out.insert(self.add(a, b));
            }
        }
        out
    }

    pub fn neg_set(&self, s: &ElementSet) -> ElementSet {
        self.set_of(s.iter().map(|a| self.neg(a)))
    }

    /// Left fold of the set-extended hyperproduct over `xs`.
    pub fn hyperproduct(&self, xs: &[usize]) -> Result<ElementSet, UsageError> {
        let (&first, rest) = xs.split_first().ok_or(UsageError::EmptyProduct)?;
        if let Some(&bad) = xs.iter().find(|&&x| x >= self.n) {
            return Err(UsageError::NotInCarrier(bad as i64));
        }
        let mut acc = self.singleton(first);
        for &x in rest {
            acc = self.mul_set_elem(&acc, x);
        }
        Ok(acc)
    }

    /// `a^k` as a set, `k ≥ 1`.
    pub fn power(&self, a: usize, k: usize) -> ElementSet {
        assert!(k >= 1, "power exponent must be positive");
        let mut acc = self.singleton(a);
        for _ in 1..k {
            acc = self.mul_set_elem(&acc, a);
        }
        acc
    }

    /// Check every law, returning the first violating tuple for each.
    pub fn axiom_report(&self) -> ValidationReport {
        let n = self.n;
        let mut violations = Vec::new();
        let mut push = |axiom, witness: Option<Vec<usize>>| {
            if let Some(witness) = witness {
                violations.push(AxiomViolation { axiom, witness });
            }
        };

        let zero_ok = (0..n).all(|a| self.add(self.zero, a) == a && self.add(a, self.zero) == a);
        push(Axiom::AdditiveIdentity, (!zero_ok).then(Vec::new));
        if zero_ok {
            push(
                Axiom::AdditiveInverse,
                (0..n)
                    .find(|&a| self.add(a, self.neg[a]) != self.zero)
                    .map(|a| vec![a]),
            );
        }
        push(
            Axiom::AdditiveCommutativity,
            pairs(n)
                .find(|&(a, b)| self.add(a, b) != self.add(b, a))
                .map(|(a, b)| vec![a, b]),
        );
        push(
            Axiom::AdditiveAssociativity,
            self.first_triple(|a, b, c| self.add(self.add(a, b), c) != self.add(a, self.add(b, c))),
        );
        push(
            Axiom::MultiplicativeCommutativity,
            pairs(n)
                .find(|&(a, b)| self.mul(a, b) != self.mul(b, a))
                .map(|(a, b)| vec![a, b]),
        );
        push(
            Axiom::MultiplicativeAssociativity,
            self.first_triple(|a, b, c| {
                let left = self.mul_set_elem(self.mul(a, b), c);
                let mut right = self.empty_set();
                for d in self.mul(b, c) {
                    right.union_with(self.mul(a, d));
                }
                left != right
            }),
        );
        push(
            Axiom::SignRule,
            pairs(n)
                .find(|&(a, b)| {
                    let lhs = self.mul(self.neg[a], b);
                    *lhs != self.neg_set(self.mul(a, b)) || lhs != self.mul(a, self.neg[b])
                })
                .map(|(a, b)| vec![a, b]),
        );
        push(
            Axiom::WeakDistributivity,
            self.first_triple(|a, b, c| {
                !self
                    .mul(self.add(a, b), c)
                    .is_subset(&self.add_sets(self.mul(a, c), self.mul(b, c)))
            }),
        );
        let strict = self.first_triple(|a, b, c| {
            *self.mul(self.add(a, b), c) != self.add_sets(self.mul(a, c), self.mul(b, c))
        });

        ValidationReport {
            n,
            violations,
            strongly_distributive: strict.is_none(),
            strict_distributivity_witness: strict,
        }
    }

    fn first_triple<F>(&self, bad: F) -> Option<Vec<usize>>
    where
        F: Fn(usize, usize, usize) -> bool + Sync,
    {
        let n = self.n;
        (0..n).into_par_iter().find_map_first(|a| {
            for b in 0..n {
                for c in 0..n {
                    if bad(a, b, c) {
                        return Some(vec![a, b, c]);
                    }
                }
            }
            None
        })
    }

    /// Raw tables equivalent to this ring.
    pub fn to_tables(&self) -> RawTables {
        let n = self.n;
        RawTables {
            add: (0..n)
                .map(|a| (0..n).map(|b| self.add(a, b)).collect())
                .collect(),
            hmul: (0..n)
                .map(|a| (0..n).map(|b| self.mul(a, b).to_vec()).collect())
                .collect(),
        }
    }

    /// Identities, units and nonunits.
    pub fn unit_report(&self) -> UnitReport {
        let n = self.n;
        let identities =
            self.set_of((0..n).filter(|&e| (0..n).all(|a| self.mul(e, a).contains(a))));
        let units = if identities.is_empty() {
            self.empty_set()
        } else {
            self.set_of((0..n).filter(|&x| (0..n).any(|y| self.mul(y, x).intersects(&identities))))
        };
        let nonunits = units.complement(n);
        UnitReport {
            identities,
            units,
            nonunits,
        }
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)))
}

/// Identities and units of a hyperring.
///
/// `e` is an identity when `a ∈ e∘a` for every `a`; `x` is a unit when
/// some `y∘x` contains an identity. Hyperrings without identity have no
/// units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitReport {
    pub identities: ElementSet,
    pub units: ElementSet,
    pub nonunits: ElementSet,
}

impl UnitReport {
    pub fn has_identity(&self) -> bool {
        !self.identities.is_empty()
    }

    pub fn is_unit(&self, x: usize) -> bool {
        self.units.contains(x)
    }
}
