//! PMH grid over accordion parameters and the published reference grid.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use super::decide::{is_pmh, DeciderOptions, Status, Verdict};
use crate::error::Result;
use crate::graph::{accordion, AccordionParams};

/// A cell of the published table for `3 <= n <= 21`, `1 <= k <= 10`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReferenceCell {
    Pmh,
    NotPmh,
    Unknown,
    Invalid,
}

// One row per n = 3..=21, one char per k = 1..=10.
// P: PMH, X: not PMH, ?: unknown, .: k > n/2.
const REFERENCE_ROWS: [&str; 19] = [
    "P.........", // 3
    "PP........", // 4
    "PP........", // 5
    "PPP.......", // 6
    "PPP.......", // 7
    "PPPP......", // 8
    "PPPP......", // 9
    "PPPPX.....", // 10
    "PPPPP.....", // 11
    "PPPPPX....", // 12
    "PPXPPP....", // 13
    "PPXPPPX...", // 14
    "PPXXXPP...", // 15
    "PPXPPPXX..", // 16
    "PPXXXXPP..", // 17
    "PPXPXXX?X.", // 18
    "PPXXXXXXX.", // 19
    "PPX?X?X?XX", // 20
    "PPXXXXX???", // 21
];

/// Reference entry, or `None` outside the published range.
pub fn reference_cell(n: usize, k: usize) -> Option<ReferenceCell> {
    if !(3..=21).contains(&n) || !(1..=10).contains(&k) {
        return None;
    }
    let c = REFERENCE_ROWS[n - 3].as_bytes()[k - 1];
    Some(match c {
        b'P' => ReferenceCell::Pmh,
        b'X' => ReferenceCell::NotPmh,
        b'?' => ReferenceCell::Unknown,
        _ => ReferenceCell::Invalid,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CellStatus {
    NotApplicable,
    Holds,
    Fails,
    BudgetExceeded,
}

impl From<Status> for CellStatus {
    fn from(s: Status) -> Self {
        match s {
            Status::Holds => CellStatus::Holds,
            Status::Fails => CellStatus::Fails,
            Status::BudgetExceeded => CellStatus::BudgetExceeded,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableCell {
    pub n: usize,
    pub k: usize,
    pub status: CellStatus,
    pub verdict: Option<Verdict>,
    /// Loaded from a checkpoint rather than computed in this run.
    pub cached: bool,
}

/// Per-cell persistence so interrupted table runs can resume.
pub trait CellStore: Sync {
    fn load(&self, params: AccordionParams) -> Option<Verdict>;
    fn save(&self, params: AccordionParams, verdict: &Verdict) -> Result<()>;
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PmhTable {
    pub cells: Vec<TableCell>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Agreement {
    pub compared: usize,
    pub agreed: usize,
    pub mismatches: Vec<(usize, usize)>,
    /// Cells the reference leaves open; the computed value is informational.
    pub reference_unknown: Vec<(usize, usize)>,
    /// Definitive reference cells the run could not decide.
    pub undecided: Vec<(usize, usize)>,
}

impl Agreement {
    pub fn percent(&self) -> f64 {
        if self.compared == 0 {
            100.0
        } else {
            100.0 * self.agreed as f64 / self.compared as f64
        }
    }
}

impl PmhTable {
    pub fn get(&self, n: usize, k: usize) -> Option<&TableCell> {
        self.cells.iter().find(|c| c.n == n && c.k == k)
    }

    /// Compares definitive reference cells against the computed grid.
    /// Undecided cells count as compared and not agreed.
    pub fn agreement(&self) -> Agreement {
        let mut a = Agreement::default();
        for c in &self.cells {
            let expected = match reference_cell(c.n, c.k) {
                Some(ReferenceCell::Pmh) => CellStatus::Holds,
                Some(ReferenceCell::NotPmh) => CellStatus::Fails,
                Some(ReferenceCell::Unknown) => {
                    a.reference_unknown.push((c.n, c.k));
                    continue;
                }
                Some(ReferenceCell::Invalid) | None => continue,
            };
            a.compared += 1;
            if c.status == expected {
                a.agreed += 1;
            } else if c.status == CellStatus::BudgetExceeded {
                a.undecided.push((c.n, c.k));
            } else {
                a.mismatches.push((c.n, c.k));
            }
        }
        a
    }
}

/// Decides PMH for every `A[n,k]` in the given ranges. Cells with invalid
/// parameters are `NotApplicable`. With a store, decided cells are loaded
/// and saved so a killed run resumes where it stopped.
pub fn pmh_table(
    ns: RangeInclusive<usize>,
    ks: RangeInclusive<usize>,
    opts: &DeciderOptions,
    store: Option<&dyn CellStore>,
) -> Result<PmhTable> {
    let mut cells = Vec::new();
    for n in ns {
        for k in ks.clone() {
            let Ok(params) = AccordionParams::new(n, k) else {
                cells.push(TableCell {
                    n,
                    k,
                    status: CellStatus::NotApplicable,
                    verdict: None,
                    cached: false,
                });
                continue;
            };
            if let Some(v) = store.and_then(|s| s.load(params)) {
                cells.push(TableCell {
                    n,
                    k,
                    status: v.status.into(),
                    verdict: Some(v),
                    cached: true,
                });
                continue;
            }
            let v = is_pmh(&accordion(params)?, opts)?;
            if let Some(s) = store {
                if v.status != Status::BudgetExceeded {
                    s.save(params, &v)?;
                }
            }
            cells.push(TableCell {
                n,
                k,
                status: v.status.into(),
                verdict: Some(v),
                cached: false,
            });
        }
    }
    Ok(PmhTable { cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonicity::Budget;
    use std::collections::HashMap;
    use std::sync::Mutex;

    #[test]
    fn reference_shape() {
        for n in 3..=21 {
            for k in 1..=10 {
                let valid = 2 * k <= n;
                let cell = reference_cell(n, k).unwrap();
                assert_eq!(cell != ReferenceCell::Invalid, valid, "({n},{k})");
            }
        }
        assert_eq!(reference_cell(10, 5), Some(ReferenceCell::NotPmh));
        assert_eq!(reference_cell(18, 8), Some(ReferenceCell::Unknown));
        assert_eq!(reference_cell(13, 3), Some(ReferenceCell::NotPmh));
        assert_eq!(reference_cell(22, 1), None);
    }

    #[test]
    fn gcd_at_least_five_is_never_pmh_in_reference() {
        for n in 3..=21 {
            for k in 1..=10usize {
                if 2 * k <= n && num_integer::gcd(n, k) >= 5 {
                    assert_eq!(reference_cell(n, k), Some(ReferenceCell::NotPmh));
                }
            }
        }
    }

    #[derive(Default)]
    struct MemStore(Mutex<HashMap<(usize, usize), Verdict>>);

    impl CellStore for MemStore {
        fn load(&self, p: AccordionParams) -> Option<Verdict> {
            self.0.lock().unwrap().get(&(p.n(), p.k())).cloned()
        }
        fn save(&self, p: AccordionParams, v: &Verdict) -> Result<()> {
            self.0.lock().unwrap().insert((p.n(), p.k()), v.clone());
            Ok(())
        }
    }

    #[test]
    fn small_table_and_resume() {
        let opts = DeciderOptions {
            budget: Budget::unlimited(),
            workers: 2,
        };
        let store = MemStore::default();
        let first = pmh_table(3..=6, 1..=4, &opts, Some(&store)).unwrap();
        assert_eq!(first.get(5, 3).unwrap().status, CellStatus::NotApplicable);
        let agreement = first.agreement();
        assert_eq!(agreement.mismatches, vec![]);
        assert_eq!(agreement.percent(), 100.0);
        let second = pmh_table(3..=6, 1..=4, &opts, Some(&store)).unwrap();
        assert!(second.cells.iter().all(|c| c.verdict.is_none() || c.cached));
        let statuses = |t: &PmhTable| t.cells.iter().map(|c| c.status).collect::<Vec<_>>();
        assert_eq!(statuses(&first), statuses(&second));
    }
}
