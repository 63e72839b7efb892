use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::extend::{extend_with_limits, Extension, SearchLimits};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matching::{enumerate_pairings, enumerate_perfect_matchings, Matching, MatchingStream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Holds,
    Fails,
    BudgetExceeded,
}

/// Resource limits. Hitting any of them yields [`Status::BudgetExceeded`]
/// unless a failure has already been proven.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_seconds: Option<f64>,
    pub max_nodes_per_matching: Option<u64>,
    pub max_seconds_per_matching: Option<f64>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeciderOptions {
    pub budget: Budget,
    pub workers: usize,
}

impl Default for DeciderOptions {
    fn default() -> Self {
        DeciderOptions {
            budget: Budget::default(),
            workers: default_workers(),
        }
    }
}

/// `ACCORDION_WORKERS` if set, else the machine's available parallelism.
pub fn default_workers() -> usize {
    std::env::var("ACCORDION_WORKERS")
        .ok()
        .and_then(|s| s.parse().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub nodes: u64,
    pub matchings_checked: u64,
    pub elapsed_secs: f64,
    pub workers: usize,
    /// The witness is the first failing matching in enumeration order.
    pub canonical_witness: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    /// The non-extendable matching or pairing when `status` is `Fails`.
    pub witness: Option<Matching>,
    /// An extension `N` answering a single extension query.
    pub certificate: Option<Matching>,
    pub stats: Stats,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn fails(&self) -> bool {
        self.status == Status::Fails
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum PartEnd {
    Exhausted,
    Failed,
    Cancelled,
    OutOfBudget,
}

struct PartResult {
    end: PartEnd,
    /// Some matching in this part was left undecided.
    undecided: bool,
}

/// Checks that every matching produced by `stream` extends. The stream is
/// split into ordered parts that run on a worker pool; the reported witness
/// is the failure in the lowest-numbered part, which with an unlimited
/// budget is the first failure in enumeration order.
pub fn check_stream(g: &Graph, stream: MatchingStream, opts: &DeciderOptions) -> Result<Verdict> {
    let start = Instant::now();
    let workers = opts.workers.max(1);
    let budget = &opts.budget;
    let deadline = budget
        .max_seconds
        .map(|s| start + Duration::from_secs_f64(s));
    let parts = if workers == 1 {
        vec![stream]
    } else {
        stream.split_into(workers * 16)
    };

    let best_idx = AtomicUsize::new(usize::MAX);
    let best: Mutex<Option<(usize, Matching)>> = Mutex::new(None);
    let nodes = AtomicU64::new(0);
    let checked = AtomicU64::new(0);
    let stop = AtomicBool::new(false);

    let run_part = |idx: usize, part: MatchingStream| -> Result<PartResult> {
        let mut undecided = false;
        for m in part {
            if best_idx.load(Ordering::Acquire) < idx {
                return Ok(PartResult {
                    end: PartEnd::Cancelled,
                    undecided,
                });
            }
            let used = nodes.load(Ordering::Relaxed);
            let over_nodes = budget.max_nodes.is_some_and(|max| used >= max);
            let over_time = deadline.is_some_and(|d| Instant::now() >= d);
            if over_nodes || over_time || stop.load(Ordering::Relaxed) {
                stop.store(true, Ordering::Relaxed);
                return Ok(PartResult {
                    end: PartEnd::OutOfBudget,
                    undecided,
                });
            }
            let remaining = budget.max_nodes.map(|max| max - used);
            let max_nodes = match (remaining, budget.max_nodes_per_matching) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
            let per_deadline = budget
                .max_seconds_per_matching
                .map(|s| Instant::now() + Duration::from_secs_f64(s));
            let limits = SearchLimits {
                max_nodes,
                deadline: match (deadline, per_deadline) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, b) => a.or(b),
                },
                cancel: Some(&stop),
            };
            let (outcome, used_here) = extend_with_limits(g, &m, limits)?;
            nodes.fetch_add(used_here, Ordering::Relaxed);
            checked.fetch_add(1, Ordering::Relaxed);
            match outcome {
                Extension::Found(_) => {}
                Extension::NotExtendable => {
                    let mut slot = best.lock().expect("witness lock");
                    if slot.as_ref().is_none_or(|(i, _)| idx < *i) {
                        *slot = Some((idx, m));
                        best_idx.store(idx, Ordering::Release);
                    }
                    return Ok(PartResult {
                        end: PartEnd::Failed,
                        undecided,
                    });
                }
                Extension::Aborted => {
                    let global_hit = stop.load(Ordering::Relaxed)
                        || deadline.is_some_and(|d| Instant::now() >= d)
                        || budget
                            .max_nodes
                            .is_some_and(|max| nodes.load(Ordering::Relaxed) >= max);
                    if global_hit {
                        stop.store(true, Ordering::Relaxed);
                        return Ok(PartResult {
                            end: PartEnd::OutOfBudget,
                            undecided: true,
                        });
                    }
                    // Per-matching limit: leave this one undecided, keep looking.
                    undecided = true;
                }
            }
        }
        Ok(PartResult {
            end: PartEnd::Exhausted,
            undecided,
        })
    };

    let results: Vec<PartResult> = if workers == 1 {
        parts
            .into_iter()
            .enumerate()
            .map(|(i, p)| run_part(i, p))
            .collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Internal(format!("worker pool: {e}")))?;
        pool.install(|| {
            parts
                .into_par_iter()
                .enumerate()
                .map(|(i, p)| run_part(i, p))
                .collect::<Result<_>>()
        })?
    };

    let mut stats = Stats {
        nodes: nodes.into_inner(),
        matchings_checked: checked.into_inner(),
        elapsed_secs: start.elapsed().as_secs_f64(),
        workers,
        canonical_witness: false,
    };
    let best = best.into_inner().expect("witness lock");
    let verdict = match best {
        Some((idx, witness)) => {
            stats.canonical_witness = results[..idx]
                .iter()
                .all(|r| r.end == PartEnd::Exhausted && !r.undecided)
                && !results[idx].undecided;
            Verdict {
                status: Status::Fails,
                witness: Some(witness),
                certificate: None,
                stats,
            }
        }
        None => {
            let complete = results
                .iter()
                .all(|r| r.end == PartEnd::Exhausted && !r.undecided);
            Verdict {
                status: if complete {
                    Status::Holds
                } else {
                    Status::BudgetExceeded
                },
                witness: None,
                certificate: None,
                stats,
            }
        }
    };
    Ok(verdict)
}

/// Whether every perfect matching of `g` extends to a Hamiltonian cycle.
pub fn is_pmh(g: &Graph, opts: &DeciderOptions) -> Result<Verdict> {
    let stream = enumerate_perfect_matchings(g, None)?;
    check_stream(g, stream, opts)
}

/// Whether every pairing of `V(g)` extends to a Hamiltonian cycle of the
/// complete graph using edges of `g`. Not PMH implies not PH, so the PMH
/// check runs first and its witness is reused.
pub fn is_ph(g: &Graph, opts: &DeciderOptions) -> Result<Verdict> {
    let pmh = is_pmh(g, opts)?;
    if pmh.status != Status::Holds {
        return Ok(pmh);
    }
    let stream = enumerate_pairings(g.vertex_count())?;
    let mut budget = opts.budget.clone();
    if let Some(s) = budget.max_seconds.as_mut() {
        *s = (*s - pmh.stats.elapsed_secs).max(0.0);
    }
    if let Some(n) = budget.max_nodes.as_mut() {
        *n = n.saturating_sub(pmh.stats.nodes);
    }
    let opts = DeciderOptions {
        budget,
        workers: opts.workers,
    };
    let mut v = check_stream(g, stream, &opts)?;
    v.stats.nodes += pmh.stats.nodes;
    v.stats.matchings_checked += pmh.stats.matchings_checked;
    v.stats.elapsed_secs += pmh.stats.elapsed_secs;
    Ok(v)
}

/// A single extension query wrapped as a verdict: `Holds` with the
/// extension as certificate, or `Fails` with the pairing as witness.
pub fn extend_query(g: &Graph, m: &Matching, budget: &Budget) -> Result<Verdict> {
    let start = Instant::now();
    let limits = SearchLimits {
        max_nodes: match (budget.max_nodes, budget.max_nodes_per_matching) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        },
        deadline: budget
            .max_seconds
            .into_iter()
            .chain(budget.max_seconds_per_matching)
            .reduce(f64::min)
            .map(|s| start + Duration::from_secs_f64(s)),
        cancel: None,
    };
    let (outcome, nodes) = extend_with_limits(g, m, limits)?;
    let stats = Stats {
        nodes,
        matchings_checked: 1,
        elapsed_secs: start.elapsed().as_secs_f64(),
        workers: 1,
        canonical_witness: true,
    };
    let (status, witness, certificate) = match outcome {
        Extension::Found(n) => (Status::Holds, None, Some(n)),
        Extension::NotExtendable => (Status::Fails, Some(m.clone()), None),
        Extension::Aborted => (Status::BudgetExceeded, None, None),
    };
    Ok(Verdict {
        status,
        witness,
        certificate,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{accordion, antiprism, AccordionParams};
    use crate::hamiltonicity::extend_to_hamiltonian;

    fn opts(workers: usize) -> DeciderOptions {
        DeciderOptions {
            budget: Budget::unlimited(),
            workers,
        }
    }

    #[test]
    fn antiprism6_pmh() {
        let v = is_pmh(&antiprism(6).unwrap(), &opts(2)).unwrap();
        assert_eq!(v.status, Status::Holds);
        assert!(v.witness.is_none());
    }

    #[test]
    fn accordion_10_5_not_pmh() {
        let g = accordion(AccordionParams::new(10, 5).unwrap()).unwrap();
        let v = is_pmh(&g, &opts(4)).unwrap();
        assert_eq!(v.status, Status::Fails);
        assert!(v.stats.canonical_witness);
        let w = v.witness.unwrap();
        assert_eq!(extend_to_hamiltonian(&g, &w).unwrap(), None);
    }

    #[test]
    fn witness_is_independent_of_worker_count() {
        let g = accordion(AccordionParams::new(10, 5).unwrap()).unwrap();
        let a = is_pmh(&g, &opts(1)).unwrap();
        let b = is_pmh(&g, &opts(3)).unwrap();
        let c = is_pmh(&g, &opts(8)).unwrap();
        assert_eq!(a.witness, b.witness);
        assert_eq!(a.witness, c.witness);
    }

    #[test]
    fn ph_small_antiprisms() {
        assert!(is_ph(&antiprism(4).unwrap(), &opts(2)).unwrap().holds());
        let g = accordion(AccordionParams::new(5, 2).unwrap()).unwrap();
        assert!(is_ph(&g, &opts(2)).unwrap().holds());
    }

    #[test]
    fn tiny_budget_is_honest() {
        let g = antiprism(6).unwrap();
        let o = DeciderOptions {
            budget: Budget {
                max_nodes: Some(10),
                ..Default::default()
            },
            workers: 2,
        };
        assert_eq!(is_pmh(&g, &o).unwrap().status, Status::BudgetExceeded);
        let o = DeciderOptions {
            budget: Budget {
                max_nodes_per_matching: Some(1),
                ..Default::default()
            },
            workers: 1,
        };
        assert_eq!(is_ph(&g, &o).unwrap().status, Status::BudgetExceeded);
    }

    #[test]
    fn odd_order_is_an_error() {
        let g = crate::graph::cycle(5).unwrap();
        assert!(matches!(
            is_pmh(&g, &opts(1)),
            Err(Error::OddVertexCount(5))
        ));
        assert!(is_ph(&g, &opts(1)).is_err());
    }

    #[test]
    fn extend_query_verdicts() {
        let g = antiprism(7).unwrap();
        let m = Matching::from_line(&g, "u1-v5 u2-v2 u3-v3 u4-v4 u5-v6 u6-v7 u7-v1").unwrap();
        let v = extend_query(&g, &m, &Budget::default()).unwrap();
        assert_eq!(v.status, Status::Fails);
        assert_eq!(v.witness.as_ref(), Some(&m));
        let m = Matching::from_line(&g, "u1-v1 u2-v2 u3-v3 u4-v4 u5-v5 u6-v6 u7-v7").unwrap();
        let v = extend_query(&g, &m, &Budget::default()).unwrap();
        assert_eq!(v.status, Status::Holds);
        assert!(v.certificate.is_some());
    }
}
