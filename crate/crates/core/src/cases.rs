//! Four reference tiling configurations, each reduced to a
//! side-by-side report of `G_D` (harvest presentation) and `H_D` (subgroup
//! of ℝ generated by the tile lengths).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::exactnum::{QuadField, QuadraticRational};
use crate::pointset::{hd_invariants, LengthFunction, PointSet1D};
use crate::presentation::{tietze_simplify, Certificate};
use crate::sequences::{two_sided_window, IndexedWord, SequenceSpec};
use crate::universal::{harvest_equal_length_relations, maxset_presentation, HarvestReport, MaxsetSource, UniversalError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableCase {
    Fib,
    PeriodicAb21,
    SpliceIrrational,
    SpliceRational32,
}

impl TableCase {
    pub const ALL: [TableCase; 4] = [TableCase::Fib, TableCase::PeriodicAb21, TableCase::SpliceIrrational, TableCase::SpliceRational32];

    pub fn name(self) -> &'static str {
        match self {
            TableCase::Fib => "fib",
            TableCase::PeriodicAb21 => "periodic-ab-2-1",
            TableCase::SpliceIrrational => "splice-irrational",
            TableCase::SpliceRational32 => "splice-rational-3-2",
        }
    }

    pub fn sequence(self) -> SequenceSpec {
        match self {
            TableCase::Fib => SequenceSpec::fibonacci(),
            TableCase::PeriodicAb21 => SequenceSpec::periodic("ab"),
            TableCase::SpliceIrrational | TableCase::SpliceRational32 => SequenceSpec::spliced("a", "b"),
        }
    }

    pub fn lengths(self) -> LengthFunction {
        let (g, q) = (QuadField::golden(), QuadField::rationals());
        let pairs = match self {
            TableCase::Fib | TableCase::SpliceIrrational => [('a', g.tau()), ('b', g.one())],
            TableCase::PeriodicAb21 => [('a', q.int(2)), ('b', q.int(1))],
            TableCase::SpliceRational32 => [('a', q.int(3)), ('b', q.int(2))],
        };
        LengthFunction::new(pairs).expect("positive injective lengths")
    }

    /// Default `(half_width, max_len)`.
    pub fn truncation(self) -> (usize, usize) {
        match self {
            TableCase::SpliceIrrational => (40, 16),
            _ => (40, 12),
        }
    }

    /// Whether every harvested pair must have equal letter counts: the
    /// lengths are independent, or the period forces it.
    pub fn forces_equal_counts(self) -> bool {
        self != TableCase::SpliceRational32
    }

    /// Expected isomorphism types `(G_D, H_D)` as usually tabulated.
    pub fn table_cells(self) -> (&'static str, &'static str) {
        match self {
            TableCase::Fib => ("ℤ^2", "ℤ^2"),
            TableCase::PeriodicAb21 => ("ℤ^2", "ℤ"),
            TableCase::SpliceIrrational => ("F_2", "ℤ"),
            TableCase::SpliceRational32 => ("ℤ", "ℤ"),
        }
    }
}

impl fmt::Display for TableCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TableCase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        TableCase::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown case {s:?}; expected one of fib, periodic-ab-2-1, splice-irrational, splice-rational-3-2"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GdCell {
    pub label: String,
    pub certificate: Certificate,
    pub free_rank: usize,
    pub torsion: Vec<String>,
    pub relation_count: usize,
    pub equal_counts: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HdCell {
    pub label: String,
    pub rank: usize,
    pub basis: Vec<QuadraticRational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub case: TableCase,
    pub half_width: usize,
    pub max_len: usize,
    pub g_d: GdCell,
    pub h_d: HdCell,
    pub table: (String, String),
    /// Set when the computed `H_D` rank disagrees with the expected type.
    pub table_discrepancy: Option<String>,
    pub harvest: HarvestReport,
}

fn label_for(free: usize, torsion: &[String]) -> String {
    let mut parts = Vec::new();
    match free {
        0 => {}
        1 => parts.push("ℤ".to_string()),
        n => parts.push(format!("ℤ^{n}")),
    }
    parts.extend(torsion.iter().map(|t| format!("ℤ/{t}")));
    if parts.is_empty() {
        "trivial".into()
    } else {
        parts.join(" ⊕ ")
    }
}

/// Build the window, harvest, and fill both cells.
pub fn run_case(case: TableCase, half_width: usize, max_len: usize) -> Result<CaseReport, UniversalError> {
    let word = two_sided_window(&case.sequence(), half_width).expect("case sequences are valid");
    let lengths = case.lengths();
    let harvest = harvest_equal_length_relations(&word, &lengths, max_len)?;
    let p = &harvest.presentation;
    let (free_rank, torsion) = p.abelian_invariants();
    let torsion: Vec<String> = torsion.iter().map(|t| t.to_string()).collect();
    let certificate = p.certificate();
    let label = match certificate {
        Certificate::Free(n) => format!("free rank {n} (no relations up to window)"),
        Certificate::FreeAbelian(n) => format!("{} certificate", label_for(n, &[])),
        Certificate::None => format!("abelianization {}", label_for(free_rank, &torsion)),
    };
    let g_d = GdCell {
        label,
        certificate,
        free_rank,
        torsion,
        relation_count: harvest.pairs.len(),
        equal_counts: harvest.count_violations().is_empty(),
    };
    let values: Vec<QuadraticRational> = lengths.iter().map(|(_, l)| l.clone()).collect();
    let hd = hd_invariants(&values)?;
    let h_d = HdCell { label: hd.label(), rank: hd.rank, basis: hd.basis };
    let (tg, th) = case.table_cells();
    let table_rank = if th == "ℤ^2" { 2 } else { 1 };
    let table_discrepancy =
        (h_d.rank != table_rank).then(|| format!("computed H_D has rank {}, the reference lists {th}", h_d.rank));
    Ok(CaseReport {
        case,
        half_width,
        max_len,
        g_d,
        h_d,
        table: (tg.into(), th.into()),
        table_discrepancy,
        harvest,
    })
}

pub fn run_default(case: TableCase) -> Result<CaseReport, UniversalError> {
    let (h, n) = case.truncation();
    run_case(case, h, n)
}

/// The point set of a case on its window, anchored at 0.
pub fn case_pointset(case: TableCase, half_width: usize) -> PointSet1D {
    let word: IndexedWord = two_sided_window(&case.sequence(), half_width).expect("case sequences are valid");
    let lengths = case.lengths();
    let zero = lengths.field().expect("non-empty lengths").zero();
    PointSet1D::build(&word, &lengths, &zero).expect("window covers index 0")
}

/// Abelian invariants of the universal group of `(D − D, ⊕)` truncated at
/// `|ξ| ≤ bound`, after simplification.
pub fn oplus_invariants(case: TableCase, half_width: usize, bound: &QuadraticRational) -> Result<(usize, Vec<String>), UniversalError> {
    let ps = case_pointset(case, half_width);
    let p = tietze_simplify(&maxset_presentation(MaxsetSource::Oplus(&ps, bound))?, 10_000);
    let (free, torsion) = p.abelian_invariants();
    Ok((free, torsion.iter().map(|t| t.to_string()).collect()))
}
