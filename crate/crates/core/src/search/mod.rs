//! Exact maximum local-arc search, the ILP model and the table of small
//! values.

mod ilp;
mod table;

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::arcs::LocalArcFamily;
use crate::bounds::{eml_upper, BoundError};
use crate::gf::{prime_power, Fe, Field, FieldError};
use crate::plane::{Plane, PlaneError, Point};

pub use ilp::{emit_ilp, IlpModel, Row, Sense};
pub use table::{monotonicity_violations, published_cell, reproduce_table, Agreement, PublishedCell, TableCell, PUBLISHED_TABLE, TSV_HEADER};

/// Largest q the bitset search supports (q^2+q+1 <= 192).
pub const MAX_SEARCH_Q: u64 = 13;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("k must be at least 2, got {0}")]
    InvalidK(usize),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("q = {0} is above the search limit {MAX_SEARCH_Q}")]
    TooLarge(u64),
    #[error("fixing the first arc needs k <= 4, got {0}")]
    SymmetryUnsupported(usize),
    #[error("cap must be at least 1")]
    InvalidCap,
    #[error("could not start worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error(transparent)]
    Arc(#[from] crate::arcs::ArcError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    /// Only the canonical set order.
    None,
    /// The first set is the first k points of the frame (k <= 4).
    FixFirstArc,
    /// The first set contains the first min(k, 4) frame points.
    FixFrame,
}

impl Symmetry {
    pub fn default_for(k: usize) -> Symmetry {
        if k <= 4 {
            Symmetry::FixFirstArc
        } else {
            Symmetry::FixFrame
        }
    }
}

/// Worker count from LOCALARC_WORKERS, else the machine's parallelism.
pub fn default_workers() -> usize {
    std::env::var("LOCALARC_WORKERS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub q: u64,
    pub k: usize,
    pub budget: Option<Duration>,
    pub workers: usize,
    pub symmetry: Symmetry,
    /// Upper cap on the number of sets; the expander-mixing bound by default.
    pub cap: Option<usize>,
}

impl SearchConfig {
    pub fn new(q: u64, k: usize) -> SearchConfig {
        SearchConfig { q, k, budget: None, workers: default_workers(), symmetry: Symmetry::default_for(k), cap: None }
    }

    pub fn with_budget(mut self, budget: Duration) -> SearchConfig {
        self.budget = Some(budget);
        self
    }

    pub fn with_workers(mut self, workers: usize) -> SearchConfig {
        self.workers = workers.max(1);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    /// Tree exhausted, or the cap was reached.
    Optimal,
    /// Budget ran out; `best` is a lower bound.
    Timeout,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub q: u64,
    pub k: usize,
    pub best: usize,
    pub certificate: LocalArcFamily,
    pub status: SearchStatus,
    pub cap: usize,
    pub nodes: u64,
    pub elapsed: Duration,
}

impl SearchResult {
    pub fn optimal(&self) -> bool {
        self.status == SearchStatus::Optimal
    }
}

/// Default cap: the expander-mixing bound, or q^2+q+1 when it is undefined.
pub fn default_cap(q: u64, k: usize) -> Result<usize, SearchError> {
    match eml_upper(k as u64, q) {
        Ok(r) => Ok(r.sets as usize),
        Err(BoundError::NegativeRadicand { .. }) => Ok((q * q + q + 1) as usize / k),
        Err(e) => Err(e.into()),
    }
}

type Bits = [u64; 3];

#[cfg(test)]
fn has(b: &Bits, i: usize) -> bool {
    b[i >> 6] >> (i & 63) & 1 == 1
}

fn put(b: &mut Bits, i: usize) {
    b[i >> 6] |= 1 << (i & 63);
}

fn or(a: &Bits, b: &Bits) -> Bits {
    [a[0] | b[0], a[1] | b[1], a[2] | b[2]]
}

fn meets(a: &Bits, b: &Bits) -> bool {
    a[0] & b[0] != 0 || a[1] & b[1] != 0 || a[2] & b[2] != 0
}

fn count(b: &Bits) -> usize {
    b.iter().map(|w| w.count_ones() as usize).sum()
}

/// Indices at least `i` among the first `n`.
fn from(i: usize, n: usize) -> Bits {
    let mut b = [0u64; 3];
    for (w, word) in b.iter_mut().enumerate() {
        let lo = w * 64;
        let hi = lo + 64;
        let start = i.max(lo).min(hi);
        let end = n.max(lo).min(hi);
        if start < end {
            let len = end - start;
            let ones = if len == 64 { !0 } else { (1u64 << len) - 1 };
            *word = ones << (start - lo);
        }
    }
    b
}

fn iter_bits(b: Bits) -> impl Iterator<Item = usize> {
    (0..3).flat_map(move |w| {
        let mut word = b[w];
        std::iter::from_fn(move || {
            if word == 0 {
                None
            } else {
                let t = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + t)
            }
        })
    })
}

struct Geometry {
    n: usize,
    points: Vec<Point>,
    lines: Vec<Bits>,
    line_of: Vec<u16>,
}

impl Geometry {
    /// Points of PG(2,q) with the frame (1:0:0), (0:1:0), (0:0:1), (1:1:1)
    /// first, then the rest in canonical order.
    fn new(plane: &Plane) -> Geometry {
        let pts = plane.points();
        let o = Fe::ONE;
        let z = Fe::ZERO;
        let frame: Vec<Point> =
            [[o, z, z], [z, o, z], [z, z, o], [o, o, o]].iter().map(|c| plane.hom_point(*c).expect("nonzero")).collect();
        let mut points = frame.clone();
        points.extend(pts.into_iter().filter(|p| !frame.contains(p)));
        let n = points.len();
        let index: rustc_hash::FxHashMap<Point, usize> = points.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let all_lines = plane.lines();
        let mut lines = Vec::with_capacity(all_lines.len());
        let mut line_of = vec![u16::MAX; n * n];
        for (li, l) in all_lines.iter().enumerate() {
            let on: Vec<usize> = plane.points_on(l).expect("own line").iter().map(|p| index[p]).collect();
            let mut b = [0u64; 3];
            for &i in &on {
                put(&mut b, i);
            }
            for &i in &on {
                for &j in &on {
                    line_of[i * n + j] = li as u16;
                }
            }
            lines.push(b);
        }
        Geometry { n, points, lines, line_of }
    }

    fn line(&self, a: usize, b: usize) -> &Bits {
        &self.lines[self.line_of[a * self.n + b] as usize]
    }
}

#[derive(Clone)]
struct Node {
    used: Bits,
    blocked: Bits,
    /// Smallest point of the last set; later sets start above it.
    floor: usize,
    sets: Vec<Vec<u8>>,
}

struct Shared {
    incumbent: AtomicUsize,
    best: Mutex<Option<Vec<Vec<u8>>>>,
    stop: AtomicBool,
    timed_out: AtomicBool,
    deadline: Option<Instant>,
    nodes: AtomicU64,
    cap: usize,
}

struct Searcher<'a> {
    g: &'a Geometry,
    k: usize,
    shared: &'a Shared,
}

const FLUSH: u64 = 4096;

impl Searcher<'_> {
    fn tick(&self, local: &mut u64) -> bool {
        *local += 1;
        if *local == FLUSH {
            self.shared.nodes.fetch_add(FLUSH, Ordering::Relaxed);
            *local = 0;
            if self.shared.deadline.is_some_and(|d| Instant::now() >= d) {
                self.shared.timed_out.store(true, Ordering::Relaxed);
                self.shared.stop.store(true, Ordering::Relaxed);
            }
        }
        self.shared.stop.load(Ordering::Relaxed)
    }

    fn record(&self, node: &Node) {
        let c = node.sets.len();
        if c > self.shared.incumbent.load(Ordering::Relaxed) {
            let mut best = self.shared.best.lock().expect("poisoned");
            if c > best.as_ref().map_or(0, Vec::len) {
                *best = Some(node.sets.clone());
                self.shared.incumbent.fetch_max(c, Ordering::Relaxed);
            }
            if c >= self.shared.cap {
                self.shared.stop.store(true, Ordering::Relaxed);
            }
        }
    }

    fn avail(&self, node: &Node, start: usize) -> Bits {
        let mut a = from(start, self.g.n);
        for w in 0..3 {
            a[w] &= !node.blocked[w];
        }
        a
    }

    /// Every k-set with smallest point `a` that can join `node`, in
    /// lexicographic order. The callback returns false to stop.
    fn sets_from(&self, node: &Node, a: usize, f: &mut dyn FnMut(&[usize], Bits) -> bool) -> bool {
        let avail = self.avail(node, a + 1);
        let mut partial = vec![a];
        self.extend(node, &avail, &mut partial, [0; 3], f)
    }

    fn extend(
        &self,
        node: &Node,
        avail: &Bits,
        partial: &mut Vec<usize>,
        shadow: Bits,
        f: &mut dyn FnMut(&[usize], Bits) -> bool,
    ) -> bool {
        if partial.len() == self.k {
            return f(partial, shadow);
        }
        let last = *partial.last().expect("nonempty");
        let mut cand = *avail;
        for w in 0..3 {
            cand[w] &= !shadow[w];
        }
        let cand = {
            let above = from(last + 1, self.g.n);
            [cand[0] & above[0], cand[1] & above[1], cand[2] & above[2]]
        };
        let need = self.k - partial.len();
        if count(&cand) < need {
            return true;
        }
        for x in iter_bits(cand) {
            let mut s = shadow;
            let mut ok = true;
            for &p in partial.iter() {
                let l = self.g.line(x, p);
                if meets(l, &node.used) {
                    ok = false;
                    break;
                }
                s = or(&s, l);
            }
            if !ok {
                continue;
            }
            partial.push(x);
            let go = self.extend(node, avail, partial, s, f);
            partial.pop();
            if !go {
                return false;
            }
        }
        true
    }

    fn child(&self, node: &Node, set: &[usize], shadow: Bits) -> Node {
        let mut used = node.used;
        for &p in set {
            put(&mut used, p);
        }
        Node {
            used,
            blocked: or(&or(&node.blocked, &shadow), &used),
            floor: set[0],
            sets: {
                let mut s = node.sets.clone();
                s.push(set.iter().map(|&p| p as u8).collect());
                s
            },
        }
    }

    fn bound_from(&self, node: &Node, a: usize) -> usize {
        node.sets.len() + count(&self.avail(node, a)) / self.k
    }

    /// Maximize below `node`, restricted to next sets starting at `only`.
    fn dfs(&self, node: &Node, only: Option<usize>, local: &mut u64) {
        if self.tick(local) {
            return;
        }
        self.record(node);
        let start = if node.sets.is_empty() { 0 } else { node.floor + 1 };
        let firsts: Vec<usize> = match only {
            Some(a) => vec![a],
            None => iter_bits(self.avail(node, start)).collect(),
        };
        for a in firsts {
            if self.bound_from(node, a) <= self.shared.incumbent.load(Ordering::Relaxed) {
                break;
            }
            let go = self.sets_from(node, a, &mut |set, shadow| {
                let c = self.child(node, set, shadow);
                self.dfs(&c, None, local);
                !self.shared.stop.load(Ordering::Relaxed)
            });
            if !go {
                return;
            }
        }
    }

    /// First family of `target` sets below `node` in search order.
    fn first(&self, node: &Node, only: Option<usize>, target: usize) -> Option<Vec<Vec<u8>>> {
        if node.sets.len() >= target {
            return Some(node.sets.clone());
        }
        let start = if node.sets.is_empty() { 0 } else { node.floor + 1 };
        let firsts: Vec<usize> = match only {
            Some(a) => vec![a],
            None => iter_bits(self.avail(node, start)).collect(),
        };
        let mut found = None;
        for a in firsts {
            if self.bound_from(node, a) < target {
                break;
            }
            self.sets_from(node, a, &mut |set, shadow| {
                let c = self.child(node, set, shadow);
                found = self.first(&c, None, target);
                found.is_none()
            });
            if found.is_some() {
                break;
            }
        }
        found
    }
}

/// Starting nodes after symmetry breaking.
fn roots(g: &Geometry, k: usize, symmetry: Symmetry, shared: &Shared) -> Result<Vec<Node>, SearchError> {
    let empty = Node { used: [0; 3], blocked: [0; 3], floor: 0, sets: Vec::new() };
    let s = Searcher { g, k, shared };
    match symmetry {
        Symmetry::None => Ok(vec![empty]),
        Symmetry::FixFirstArc if k > 4 => Err(SearchError::SymmetryUnsupported(k)),
        Symmetry::FixFirstArc | Symmetry::FixFrame => {
            let prefix: Vec<usize> = (0..k.min(4)).collect();
            let mut shadow = [0u64; 3];
            for (i, &a) in prefix.iter().enumerate() {
                for &b in &prefix[..i] {
                    shadow = or(&shadow, g.line(a, b));
                }
            }
            let mut out = Vec::new();
            let avail = s.avail(&empty, 4);
            let mut partial = prefix;
            s.extend(&empty, &avail, &mut partial, shadow, &mut |set, sh| {
                out.push(s.child(&empty, set, sh));
                true
            });
            Ok(out)
        }
    }
}

fn validate(q: u64, k: usize) -> Result<Plane, SearchError> {
    if k < 2 {
        return Err(SearchError::InvalidK(k));
    }
    prime_power(q).ok_or(SearchError::NotPrimePower(q))?;
    if q > MAX_SEARCH_Q {
        return Err(SearchError::TooLarge(q));
    }
    Ok(Plane::homogeneous(Field::of_order(q)?))
}

/// Maximum number of sets in a k-uniform local arc of PG(2,q), by
/// backtracking over sets in order of their smallest point.
pub fn exact_max(config: &SearchConfig) -> Result<SearchResult, SearchError> {
    let t0 = Instant::now();
    let (q, k) = (config.q, config.k);
    let plane = validate(q, k)?;
    let cap = match config.cap {
        Some(0) => return Err(SearchError::InvalidCap),
        Some(c) => c,
        None => default_cap(q, k)?,
    };
    let g = Geometry::new(&plane);
    let shared = Shared {
        incumbent: AtomicUsize::new(0),
        best: Mutex::new(None),
        stop: AtomicBool::new(false),
        timed_out: AtomicBool::new(false),
        deadline: config.budget.map(|b| t0 + b),
        nodes: AtomicU64::new(0),
        cap,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .map_err(|e| SearchError::Pool(e.to_string()))?;

    let roots = roots(&g, k, config.symmetry, &shared)?;
    let searcher = Searcher { g: &g, k, shared: &shared };
    // branches: (root, smallest point of the next set)
    let mut branches: Vec<(usize, Option<usize>)> = Vec::new();
    for (ri, r) in roots.iter().enumerate() {
        searcher.record(r);
        let start = if r.sets.is_empty() { 0 } else { r.floor + 1 };
        let firsts: Vec<usize> = iter_bits(searcher.avail(r, start)).collect();
        if firsts.is_empty() {
            branches.push((ri, None));
        }
        branches.extend(firsts.into_iter().map(|a| (ri, Some(a))));
    }
    pool.install(|| {
        branches.par_iter().for_each(|&(ri, a)| {
            let mut local = 0;
            match a {
                Some(a) => searcher.dfs(&roots[ri], Some(a), &mut local),
                None => searcher.record(&roots[ri]),
            }
            shared.nodes.fetch_add(local, Ordering::Relaxed);
        })
    });

    let timed_out = shared.timed_out.load(Ordering::Relaxed);
    let best = shared.incumbent.load(Ordering::Relaxed);
    let mut sets = shared.best.lock().expect("poisoned").take().unwrap_or_default();
    if !timed_out && best > 0 {
        // canonical certificate: first family of the optimal size in search order
        let canon = pool.install(|| {
            branches.par_iter().find_map_first(|&(ri, a)| match a {
                Some(a) => searcher.first(&roots[ri], Some(a), best),
                None => (roots[ri].sets.len() >= best).then(|| roots[ri].sets.clone()),
            })
        });
        if let Some(c) = canon {
            sets = c;
        }
    }
    let fam_sets: Vec<Vec<Point>> = sets.iter().map(|s| s.iter().map(|&i| g.points[i as usize]).collect()).collect();
    let certificate = LocalArcFamily::new(plane, fam_sets).expect("search points belong to the plane");
    Ok(SearchResult {
        q,
        k,
        best,
        certificate,
        status: if timed_out { SearchStatus::Timeout } else { SearchStatus::Optimal },
        cap,
        nodes: shared.nodes.load(Ordering::Relaxed),
        elapsed: t0.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcs::{reduce_uniformity, verify_local_arc, Reduced, SetFamily};

    fn run(q: u64, k: usize) -> SearchResult {
        let r = exact_max(&SearchConfig::new(q, k).with_budget(Duration::from_secs(120))).unwrap();
        assert!(verify_local_arc(&r.certificate).is_accept());
        assert_eq!(r.certificate.num_sets(), r.best);
        r
    }

    #[test]
    fn bitset_helpers() {
        let b = from(60, 130);
        assert_eq!(count(&b), 70);
        assert!(has(&b, 60) && has(&b, 129) && !has(&b, 59) && !has(&b, 130));
        assert_eq!(iter_bits(from(126, 131)).collect::<Vec<_>>(), vec![126, 127, 128, 129, 130]);
    }

    #[test]
    fn small_cells() {
        for (q, k, want) in [(2, 2, 3), (2, 3, 1), (3, 2, 4), (3, 3, 1), (4, 2, 7), (4, 3, 4), (5, 3, 5), (5, 4, 1)] {
            let r = run(q, k);
            assert!(r.optimal(), "q={q} k={k}");
            assert_eq!(r.best, want, "q={q} k={k}");
        }
    }

    #[test]
    fn q7_k4() {
        let r = run(7, 4);
        assert!(r.optimal());
        assert_eq!(r.best, 3);
    }

    #[test]
    fn symmetry_modes_agree() {
        for (q, k) in [(3, 2), (4, 3), (4, 5), (5, 4)] {
            let a = run(q, k).best;
            let mut cfg = SearchConfig::new(q, k);
            cfg.symmetry = Symmetry::None;
            let b = exact_max(&cfg).unwrap();
            assert_eq!(a, b.best, "q={q} k={k}");
            let mut cfg = SearchConfig::new(q, k);
            cfg.symmetry = Symmetry::FixFrame;
            assert_eq!(a, exact_max(&cfg).unwrap().best, "q={q} k={k}");
        }
        let mut cfg = SearchConfig::new(5, 5);
        cfg.symmetry = Symmetry::FixFirstArc;
        assert_eq!(exact_max(&cfg).unwrap_err(), SearchError::SymmetryUnsupported(5));
    }

    #[test]
    fn deterministic_certificate() {
        let a = exact_max(&SearchConfig::new(4, 2).with_workers(1)).unwrap();
        let b = exact_max(&SearchConfig::new(4, 2).with_workers(4)).unwrap();
        assert_eq!(a.certificate, b.certificate);
    }

    #[test]
    fn reduction_gives_lower_uniformity() {
        let r = run(4, 3);
        match reduce_uniformity(&r.certificate).unwrap() {
            Reduced::Family(f) => assert_eq!(f.num_sets(), 4),
            Reduced::Matching(_) => panic!("k = 3 reduces to pairs"),
        }
    }

    #[test]
    fn timeout_reports_lower_bound() {
        let r = exact_max(&SearchConfig::new(9, 2).with_budget(Duration::from_millis(300))).unwrap();
        assert_eq!(r.status, SearchStatus::Timeout);
        assert!(r.best >= 1);
        assert!(verify_local_arc(&r.certificate).is_accept());
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(exact_max(&SearchConfig::new(6, 2)).unwrap_err(), SearchError::NotPrimePower(6));
        assert_eq!(exact_max(&SearchConfig::new(16, 2)).unwrap_err(), SearchError::TooLarge(16));
        assert_eq!(exact_max(&SearchConfig::new(5, 1)).unwrap_err(), SearchError::InvalidK(1));
    }
}
