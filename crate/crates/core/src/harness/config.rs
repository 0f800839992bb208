//! Ring specifications and sweep family configuration.
//!
//! A ring is named either by the shortcut `z<n>:<c1>,<c2>,...` (residues
//! mod `n` used as the multiplier set) or by a path to a TOML file with
//! explicit tables:
//!
//! ```toml
//! n = 2
//! add = [[0, 1], [1, 0]]
//! hmul = [[[0], [0]], [[0], [0, 1]]]
//! ```

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::HyperringError;
use crate::ring::{FiniteHyperring, RawTables};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("bad ring spec {0:?}: expected z<n>:<c1>,<c2>,... or a path to a TOML table file")]
    BadSpec(String),
    #[error("bad integer list {0:?}")]
    BadList(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Toml {
        path: String,
        source: toml::de::Error,
    },
    #[error("{path}: n = {n} but the add table has {rows} rows")]
    SizeMismatch { path: String, n: usize, rows: usize },
    #[error("bad family: {0}")]
    BadFamily(String),
    #[error(transparent)]
    Ring(#[from] HyperringError),
}

/// Where a ring spec points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingSource {
    Zn { n: usize, phi: Vec<i64> },
    File(String),
}

pub fn parse_ring_source(spec: &str) -> Result<RingSource, ConfigError> {
    if let Some(rest) = spec.strip_prefix('z').or_else(|| spec.strip_prefix('Z')) {
        if let Some((n, list)) = rest.split_once(':') {
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| ConfigError::BadSpec(spec.into()))?;
            if n == 0 {
                return Err(ConfigError::BadSpec(spec.into()));
            }
            let phi = parse_int_list(list)?;
            return Ok(RingSource::Zn { n, phi });
        }
    }
    if Path::new(spec).is_file() {
        Ok(RingSource::File(spec.into()))
    } else {
        Err(ConfigError::BadSpec(spec.into()))
    }
}

/// Comma-separated integers; whitespace is ignored.
pub fn parse_int_list(s: &str) -> Result<Vec<i64>, ConfigError> {
    let out: Result<Vec<i64>, _> = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect();
    match out {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(ConfigError::BadList(s.into())),
    }
}

#[derive(Debug, Deserialize)]
struct TableFile {
    n: usize,
    add: Vec<Vec<usize>>,
    hmul: Vec<Vec<Vec<usize>>>,
}

/// Raw tables from a TOML file, without any law checks.
pub fn load_tables(path: &Path) -> Result<RawTables, ConfigError> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: name.clone(),
        source,
    })?;
    let file: TableFile = toml::from_str(&text).map_err(|source| ConfigError::Toml {
        path: name.clone(),
        source,
    })?;
    if file.add.len() != file.n {
        return Err(ConfigError::SizeMismatch {
            path: name,
            n: file.n,
            rows: file.add.len(),
        });
    }
    Ok(RawTables {
        add: file.add,
        hmul: file.hmul,
    })
}

/// Raw tables for any ring spec (shortcut rings are tabulated).
pub fn ring_tables(spec: &str) -> Result<(RawTables, String), ConfigError> {
    match parse_ring_source(spec)? {
        RingSource::Zn { n, phi } => {
            let ring = FiniteHyperring::zn_phi(n, &phi)?;
            let label = ring.label().to_string();
            Ok((ring.to_tables(), label))
        }
        RingSource::File(path) => Ok((load_tables(Path::new(&path))?, path)),
    }
}

/// A validated ring from a spec.
pub fn parse_ring(spec: &str) -> Result<FiniteHyperring, ConfigError> {
    match parse_ring_source(spec)? {
        RingSource::Zn { n, phi } => Ok(FiniteHyperring::zn_phi(n, &phi)?),
        RingSource::File(path) => {
            let tables = load_tables(Path::new(&path))?;
            Ok(FiniteHyperring::from_tables(&tables, &path)?)
        }
    }
}

/// Deliberate checker faults, used to show the suite notices broken
/// deciders.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// The `(u,v)`-absorbing primary decider never accepts the remainder
    /// clause.
    DropRemainderClause,
}

/// The family of `Z_n/Φ` rings a sweep covers, and its budgets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RingFamilySpec {
    pub moduli: Vec<usize>,
    pub phi_sizes: Vec<usize>,
    /// Residues Φ is drawn from (reduced mod `n`); all residues if absent.
    pub phi_universe: Option<Vec<i64>>,
    pub u_max: usize,
    /// Largest number of nonunit multisets of size `u` a single ring may
    /// need; `(u,v)` rows beyond it are skipped and the run is marked
    /// incomplete.
    pub tuple_budget: u64,
    /// Largest matrix carrier built for the matrix invariants. The default
    /// admits 2×2 matrices over rings of at most 3 elements.
    pub matrix_cap: usize,
    /// Keep one verdict record per (ring, ideal, property, params).
    pub records: bool,
    /// Fill in the `millis` field of verdict records.
    pub timing: bool,
    #[serde(skip)]
    #[doc(hidden)]
    pub mutation: Option<Mutation>,
}

impl Default for RingFamilySpec {
    fn default() -> Self {
        Self {
            moduli: (2..=12).collect(),
            phi_sizes: vec![2, 3],
            phi_universe: None,
            u_max: 5,
            tuple_budget: 2_000_000,
            matrix_cap: 81,
            records: true,
            timing: false,
            mutation: None,
        }
    }
}

/// One ring of the family together with every Φ that induces it.
#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub n: usize,
    pub phi: Vec<usize>,
    pub aliases: Vec<Vec<usize>>,
    pub ring: FiniteHyperring,
}

impl RingFamilySpec {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let spec: Self = toml::from_str(text).map_err(|source| ConfigError::Toml {
            path: "<family>".into(),
            source,
        })?;
        spec.check()?;
        Ok(spec)
    }

    pub fn check(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::BadFamily(m.into()));
        if self.moduli.is_empty() || self.moduli.iter().any(|&n| n < 2) {
            return bad("moduli must be non-empty and all ≥ 2");
        }
        if self.phi_sizes.is_empty() || self.phi_sizes.contains(&0) {
            return bad("phi sizes must be non-empty and positive");
        }
        if self.u_max < 2 {
            return bad("u_max must be at least 2");
        }
        if self.tuple_budget == 0 || self.matrix_cap == 0 {
            return bad("budgets must be positive");
        }
        Ok(())
    }

    /// Every ring of the family, deduplicated by hypermultiplication
    /// table, in order of `n` then the least inducing Φ.
    pub fn members(&self) -> Result<Vec<FamilyMember>, ConfigError> {
        self.check()?;
        let mut moduli = self.moduli.clone();
        moduli.sort_unstable();
        moduli.dedup();
        let mut out = Vec::new();
        for n in moduli {
            let universe: BTreeSet<usize> = match &self.phi_universe {
                Some(u) => u.iter().map(|&x| x.rem_euclid(n as i64) as usize).collect(),
                None => (0..n).collect(),
            };
            let universe: Vec<usize> = universe.into_iter().collect();
            let mut sizes = self.phi_sizes.clone();
            sizes.sort_unstable();
            sizes.dedup();
            let mut by_table: Vec<(RawTables, FamilyMember)> = Vec::new();
            for k in sizes {
                for pick in crate::classify::combinations(universe.len(), k) {
                    let phi: Vec<usize> = pick.iter().map(|&i| universe[i]).collect();
                    let phi_i: Vec<i64> = phi.iter().map(|&x| x as i64).collect();
                    let ring = FiniteHyperring::zn_phi(n, &phi_i)?;
                    let tables = ring.to_tables();
                    match by_table.iter_mut().find(|(t, _)| t.hmul == tables.hmul) {
                        Some((_, m)) => m.aliases.push(phi),
                        None => by_table.push((
                            tables,
                            FamilyMember {
                                n,
                                phi,
                                aliases: Vec::new(),
                                ring,
                            },
                        )),
                    }
                }
            }
            out.extend(by_table.into_iter().map(|(_, m)| m));
        }
        Ok(out)
    }
}
