//! Finite-level Dirichlet and Neumann spectra of the gasket graph Laplacians,
//! built by spectral decimation with lineage bookkeeping.
//!
//! Dirichlet:
//! `A_1 = {2, 5}`, `A_2 = Φ±(A_1) ∪ {5, 6}`,
//! `A_m = Φ±(A_{m-1} \ {6}) ∪ {3, 5, 6}` for `m ≥ 3`.
//!
//! Neumann:
//! `A_0 = {0, 6}`, `A_1 = {0, 3, 6}`,
//! `A_m = Φ±(A_{m-1} \ {6}) ∪ {3, 6}` for `m ≥ 2`.
//!
//! Only distinct values are tracked. The value 3 added at level `m` is
//! recorded as the `+` child of the 6 born at level `m - 1` (`Φ+(6) = 3`).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::dynamics::{phi, phi_word, Branch, BranchWord};
use crate::error::{Error, Result};
use crate::scalar::{Ball, Certified};

/// Highest precision tried when ordering a level.
const SORT_PRECISION_CAP: u32 = 8192;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Dirichlet => "dirichlet",
            Self::Neumann => "neumann",
        })
    }
}

impl FromStr for BoundaryCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dirichlet" | "d" => Ok(Self::Dirichlet),
            "neumann" | "n" => Ok(Self::Neumann),
            _ => Err(Error::InvalidParameter(format!(
                "unknown boundary condition {s:?}"
            ))),
        }
    }
}

/// First ancestor of a lineage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Seed {
    Zero,
    Two,
    Five,
    Six,
}

impl Seed {
    pub fn value(self) -> i64 {
        match self {
            Seed::Zero => 0,
            Seed::Two => 2,
            Seed::Five => 5,
            Seed::Six => 6,
        }
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl Serialize for Seed {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.value())
    }
}

/// Lineage of one eigenvalue: seed, generation of birth and the branch word
/// applied since birth.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EigenDescriptor {
    pub seed: Seed,
    pub birth: usize,
    pub word: BranchWord,
    /// Level from which the lineage continues with `Φ-` only. `None` for a 6
    /// at its birth level, which the recursions never continue.
    pub fixation: Option<usize>,
}

impl EigenDescriptor {
    pub fn new(seed: Seed, birth: usize, word: BranchWord) -> Self {
        let fixation = if seed == Seed::Six && word.is_empty() {
            None
        } else {
            Some(birth + word.last_plus().unwrap_or(0))
        };
        Self {
            seed,
            birth,
            word,
            fixation,
        }
    }

    pub fn seed(seed: Seed, birth: usize) -> Self {
        Self::new(seed, birth, BranchWord::empty())
    }

    /// Level of the graph Laplacian this descriptor lives on.
    pub fn level(&self) -> usize {
        self.birth + self.word.len()
    }

    pub fn child(&self, b: Branch) -> Self {
        Self::new(self.seed, self.birth, self.word.then(b))
    }

    pub fn descend_minus(&self, n: usize) -> Self {
        Self::new(self.seed, self.birth, self.word.then_minus(n))
    }

    /// True for the value 6 at its birth level.
    pub fn is_terminal_six(&self) -> bool {
        self.fixation.is_none()
    }

    /// Recomputes the value at any precision.
    pub fn evaluate(&self, prec: u32) -> Result<Ball> {
        phi_word(&self.word, &Ball::from_int(self.seed.value(), prec))
    }
}

impl fmt::Display for EigenDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.seed, self.birth)?;
        if !self.word.is_empty() {
            write!(f, ":{}", self.word)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumEntry {
    pub value: Ball,
    pub descriptor: EigenDescriptor,
}

/// The distinct eigenvalues of `-Δ_m`, strictly increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSpectrum {
    pub level: usize,
    pub bc: BoundaryCondition,
    /// Precision at which the ordering was certified.
    pub precision: u32,
    pub entries: Vec<SpectrumEntry>,
}

impl FiniteSpectrum {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn values(&self) -> Vec<Ball> {
        self.entries.iter().map(|e| e.value.clone()).collect()
    }

    /// Entries other than the value 6.
    pub fn without_six(&self) -> impl Iterator<Item = &SpectrumEntry> {
        self.entries.iter().filter(|e| !e.descriptor.is_terminal_six())
    }

    pub fn position(&self, d: &EigenDescriptor) -> Option<usize> {
        self.entries.iter().position(|e| &e.descriptor == d)
    }

    /// CSV with columns `level,bc,index,value,radius,seed,birth,word`.
    pub fn to_csv(&self, digits: u32) -> String {
        let mut out = String::from("level,bc,index,value,radius,seed,birth,word\n");
        for (i, e) in self.entries.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                self.level,
                self.bc,
                i,
                e.value.mid_decimal(digits),
                e.value.rad_decimal(),
                e.descriptor.seed,
                e.descriptor.birth,
                e.descriptor.word
            ));
        }
        out
    }
}

/// `N_m = (3^{m+1} - 3) / 2`, the number of Dirichlet eigenvalues of `Δ_m`
/// counted with multiplicity.
pub fn count_with_multiplicity(m: u32) -> u128 {
    (3u128.pow(m + 1) - 3) / 2
}

fn seeded(seed: Seed, birth: usize, prec: u32) -> SpectrumEntry {
    SpectrumEntry {
        value: Ball::from_int(seed.value(), prec),
        descriptor: EigenDescriptor::seed(seed, birth),
    }
}

/// The 3 at level `m`, as the `+` child of the 6 born at `m - 1`.
fn three(m: usize, prec: u32) -> SpectrumEntry {
    SpectrumEntry {
        value: Ball::from_int(3, prec),
        descriptor: EigenDescriptor::new(Seed::Six, m - 1, BranchWord::from(vec![Branch::Plus])),
    }
}

fn pull_back(prev: &[SpectrumEntry]) -> Result<Vec<SpectrumEntry>> {
    let mut out = Vec::with_capacity(2 * prev.len() + 3);
    for e in prev.iter().filter(|e| !e.descriptor.is_terminal_six()) {
        for b in [Branch::Minus, Branch::Plus] {
            out.push(SpectrumEntry {
                value: phi(b, &e.value)?,
                descriptor: e.descriptor.child(b),
            });
        }
    }
    Ok(out)
}

fn next_level(
    bc: BoundaryCondition,
    m: usize,
    prev: Option<&FiniteSpectrum>,
    prec: u32,
) -> Result<Vec<SpectrumEntry>> {
    use BoundaryCondition::*;
    let prev_entries = prev.map(|s| s.entries.as_slice()).unwrap_or(&[]);
    let mut entries = match (bc, m) {
        (Dirichlet, 0) => Vec::new(),
        (Dirichlet, 1) => vec![seeded(Seed::Two, 1, prec), seeded(Seed::Five, 1, prec)],
        (Dirichlet, 2) => {
            let mut v = pull_back(prev_entries)?;
            v.push(seeded(Seed::Five, 2, prec));
            v.push(seeded(Seed::Six, 2, prec));
            v
        }
        (Dirichlet, _) => {
            let mut v = pull_back(prev_entries)?;
            v.push(three(m, prec));
            v.push(seeded(Seed::Five, m, prec));
            v.push(seeded(Seed::Six, m, prec));
            v
        }
        (Neumann, 0) => vec![seeded(Seed::Zero, 0, prec), seeded(Seed::Six, 0, prec)],
        (Neumann, 1) => {
            let zero = &prev_entries[0];
            vec![
                SpectrumEntry {
                    value: phi(Branch::Minus, &zero.value)?,
                    descriptor: zero.descriptor.child(Branch::Minus),
                },
                three(1, prec),
                seeded(Seed::Six, 1, prec),
            ]
        }
        (Neumann, _) => {
            let mut v = pull_back(prev_entries)?;
            v.push(three(m, prec));
            v.push(seeded(Seed::Six, m, prec));
            v
        }
    };
    entries.sort_by(|a, b| a.value.mid().cmp(b.value.mid()));
    Ok(entries)
}

fn ordering_certified(entries: &[SpectrumEntry]) -> bool {
    entries
        .windows(2)
        .all(|w| w[0].value.certified_cmp(&w[1].value) == Certified::Less)
}

/// Builds levels `0..=m` at a single precision; `Ok(None)` if some ordering
/// could not be certified.
fn build_levels(bc: BoundaryCondition, m: usize, prec: u32) -> Result<Option<Vec<Arc<FiniteSpectrum>>>> {
    let mut levels: Vec<Arc<FiniteSpectrum>> = Vec::with_capacity(m + 1);
    for level in 0..=m {
        let entries = next_level(bc, level, levels.last().map(|s| s.as_ref()), prec)?;
        if !ordering_certified(&entries) {
            return Ok(None);
        }
        levels.push(Arc::new(FiniteSpectrum {
            level,
            bc,
            precision: prec,
            entries,
        }));
    }
    Ok(Some(levels))
}

type Cache = Mutex<HashMap<(BoundaryCondition, u32), Vec<Arc<FiniteSpectrum>>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Level `m` spectrum for either boundary condition. Results are memoized per
/// `(bc, prec)`; the precision is doubled automatically when two entries
/// cannot be ordered.
pub fn level(bc: BoundaryCondition, m: usize, prec: u32) -> Result<Arc<FiniteSpectrum>> {
    if bc == BoundaryCondition::Dirichlet && m == 0 {
        return Err(Error::Domain("the level-0 Dirichlet spectrum is empty".into()));
    }
    if let Some(levels) = cache().lock().unwrap().get(&(bc, prec)) {
        if let Some(s) = levels.get(m) {
            return Ok(Arc::clone(s));
        }
    }
    let mut p = prec;
    let levels = loop {
        if let Some(levels) = build_levels(bc, m, p)? {
            break levels;
        }
        p = p.saturating_mul(2);
        if p > SORT_PRECISION_CAP {
            return Err(Error::PrecisionExhausted {
                what: format!("{bc} level {m}"),
                cap_bits: SORT_PRECISION_CAP,
            });
        }
    };
    let out = Arc::clone(&levels[m]);
    let mut guard = cache().lock().unwrap();
    let slot = guard.entry((bc, prec)).or_default();
    if slot.len() < levels.len() {
        *slot = levels;
    }
    Ok(out)
}

pub fn dirichlet_level(m: usize, prec: u32) -> Result<Arc<FiniteSpectrum>> {
    level(BoundaryCondition::Dirichlet, m, prec)
}

pub fn neumann_level(m: usize, prec: u32) -> Result<Arc<FiniteSpectrum>> {
    level(BoundaryCondition::Neumann, m, prec)
}
