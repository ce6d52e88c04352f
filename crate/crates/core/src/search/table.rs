//! The published table of maximum k-uniform local arcs for small q.

use std::fmt;
use std::time::Duration;

use super::{exact_max, SearchConfig, SearchError, SearchStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PublishedCell {
    Exact(usize),
    AtLeast(usize),
}

impl PublishedCell {
    pub fn value(self) -> usize {
        match self {
            PublishedCell::Exact(v) | PublishedCell::AtLeast(v) => v,
        }
    }
}

impl fmt::Display for PublishedCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PublishedCell::Exact(v) => write!(f, "{v}"),
            PublishedCell::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

use PublishedCell::{AtLeast as A, Exact as E};

/// Rows by q; entry i is the cell for k = i + 2.
pub const PUBLISHED_TABLE: &[(u64, &[PublishedCell])] = &[
    (2, &[E(3), E(1), E(1)]),
    (3, &[E(4), E(1), E(1)]),
    (4, &[E(7), E(4), E(1), E(1), E(1)]),
    (5, &[E(9), E(5), E(1), E(1), E(1)]),
    (7, &[E(13), E(8), E(3), E(1), E(1), E(1), E(1)]),
    (8, &[A(17), E(9), E(4), E(3), E(1), E(1), E(1), E(1), E(1)]),
    (9, &[A(20), A(9), E(4), E(2), E(1), E(1), E(1), E(1), E(1)]),
    (11, &[A(24), A(10), E(7), E(2), E(2), E(1), E(1), E(1), E(1), E(1), E(1)]),
];

pub fn published_cell(q: u64, k: usize) -> Option<PublishedCell> {
    let (_, row) = PUBLISHED_TABLE.iter().find(|(r, _)| *r == q)?;
    row.get(k.checked_sub(2)?).copied()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Agreement {
    /// Same value, proven where the published value is exact.
    Match,
    /// Our lower bound does not contradict the published value.
    Consistent,
    Conflict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableCell {
    pub q: u64,
    pub k: usize,
    pub published: Option<PublishedCell>,
    pub found: usize,
    pub status: SearchStatus,
    pub nodes: u64,
    pub elapsed: Duration,
}

impl TableCell {
    pub fn agreement(&self) -> Agreement {
        let optimal = self.status == SearchStatus::Optimal;
        match self.published {
            None => Agreement::Consistent,
            Some(PublishedCell::Exact(v)) => {
                if optimal && self.found == v {
                    Agreement::Match
                } else if !optimal && self.found <= v {
                    Agreement::Consistent
                } else {
                    Agreement::Conflict
                }
            }
            Some(PublishedCell::AtLeast(v)) => {
                if self.found >= v {
                    Agreement::Match
                } else if optimal {
                    Agreement::Conflict
                } else {
                    Agreement::Consistent
                }
            }
        }
    }

    pub fn tsv(&self) -> String {
        let status = match self.status {
            SearchStatus::Optimal => "exact",
            SearchStatus::Timeout => "lower-bound",
        };
        let published = self.published.map_or("-".to_string(), |p| p.to_string());
        format!(
            "{}\t{}\t{}\t{}\t{}\t{:?}\t{}\t{:.3}",
            self.q,
            self.k,
            published,
            self.found,
            status,
            self.agreement(),
            self.nodes,
            self.elapsed.as_secs_f64()
        )
    }
}

pub const TSV_HEADER: &str = "q\tk\tpublished\tfound\tstatus\tagreement\tnodes\tseconds";

/// Run the search on every requested cell. An empty `k_list` means the k
/// values the published row lists.
pub fn reproduce_table(
    q_list: &[u64],
    k_list: &[usize],
    budget: Option<Duration>,
    workers: usize,
) -> Result<Vec<TableCell>, SearchError> {
    let mut out = Vec::new();
    for &q in q_list {
        let ks: Vec<usize> = if k_list.is_empty() {
            let len = PUBLISHED_TABLE.iter().find(|(r, _)| *r == q).map_or(0, |(_, row)| row.len());
            (2..len + 2).collect()
        } else {
            k_list.to_vec()
        };
        for k in ks {
            let mut cfg = SearchConfig::new(q, k).with_workers(workers);
            cfg.budget = budget;
            let r = exact_max(&cfg)?;
            out.push(TableCell {
                q,
                k,
                published: published_cell(q, k),
                found: r.best,
                status: r.status,
                nodes: r.nodes,
                elapsed: r.elapsed,
            });
        }
    }
    Ok(out)
}

/// Pairs (q, k) where a proven value at k exceeds a proven value at k - 1.
/// Removing a point from every set keeps a local arc, so none should exist.
pub fn monotonicity_violations(cells: &[TableCell]) -> Vec<(u64, usize)> {
    let proven = |q: u64, k: usize| {
        cells.iter().find(|c| c.q == q && c.k == k && c.status == SearchStatus::Optimal).map(|c| c.found)
    };
    cells
        .iter()
        .filter(|c| c.k > 2)
        .filter_map(|c| match (proven(c.q, c.k - 1), proven(c.q, c.k)) {
            (Some(lo), Some(hi)) if hi > lo => Some((c.q, c.k)),
            _ => None,
        })
        .collect()
}
