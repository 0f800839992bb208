use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Status {
    Holds,
    Fails,
    /// No counterexample inside a finite search bound; not a proof.
    Inconclusive {
        bound: String,
    },
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Holds => f.write_str("holds"),
            Status::Fails => f.write_str("fails"),
            Status::Inconclusive { bound } => write!(f, "inconclusive at bound {bound}"),
        }
    }
}

/// A concrete counterexample.
///
/// `parts` groups the tuple the way the violated clause reads it, e.g.
/// `[[2, 2], [3]]` for a v-part and a remainder.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub parts: Vec<Vec<i64>>,
    pub clause: String,
}

impl Witness {
    pub fn new(parts: Vec<Vec<i64>>, clause: impl Into<String>) -> Self {
        Self {
            parts,
            clause: clause.into(),
        }
    }

    pub fn from_elems<I: IntoIterator<Item = usize>>(elems: I, clause: impl Into<String>) -> Self {
        Self::new(vec![elems.into_iter().map(|x| x as i64).collect()], clause)
    }

    /// All elements in order, ignoring grouping.
    pub fn flat(&self) -> Vec<i64> {
        self.parts.iter().flatten().copied().collect()
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .parts
            .iter()
            .map(|p| {
                p.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        write!(f, "{} ({})", parts.join(" | "), self.clause)
    }
}

/// What a decider enumerated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckedSpace {
    pub description: String,
    /// Candidates enumerated.
    pub enumerated: u64,
    /// Candidates that satisfied the hypothesis and so exercised the conclusion.
    pub tested: u64,
}

impl CheckedSpace {
    pub fn new(description: impl Into<String>, enumerated: u64, tested: u64) -> Self {
        Self {
            description: description.into(),
            enumerated,
            tested,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<Witness>,
    pub space: CheckedSpace,
}

impl Verdict {
    pub fn holds(space: CheckedSpace) -> Self {
        Self {
            status: Status::Holds,
            witness: None,
            space,
        }
    }

    pub fn fails(witness: Witness, space: CheckedSpace) -> Self {
        Self {
            status: Status::Fails,
            witness: Some(witness),
            space,
        }
    }

    pub fn inconclusive(bound: impl Into<String>, space: CheckedSpace) -> Self {
        Self {
            status: Status::Inconclusive {
                bound: bound.into(),
            },
            witness: None,
            space,
        }
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn is_fails(&self) -> bool {
        self.status == Status::Fails
    }

    /// Universally quantified and no candidate met the hypothesis.
    pub fn is_vacuous(&self) -> bool {
        self.is_holds() && self.space.tested == 0
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.status)?;
        if let Some(w) = &self.witness {
            write!(f, ", witness {w}")?;
        }
        write!(
            f,
            " [{}: {} enumerated, {} tested]",
            self.space.description, self.space.enumerated, self.space.tested
        )
    }
}
