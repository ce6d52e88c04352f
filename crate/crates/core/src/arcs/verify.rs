use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use super::{ArcError, SetFamily};
use crate::plane::{format_line, format_point, Line, Plane, Point};

/// Guard for the literal-definition oracle.
pub const ORACLE_POINT_LIMIT: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Two sets share a point.
    Overlap { point: Point, sets: (usize, usize) },
    /// At least three points of a union of at most m sets on one line.
    CollinearTriple { line: Line, sets: Vec<usize>, points: Vec<Point> },
}

impl Violation {
    pub fn describe(&self, plane: &Plane) -> String {
        match self {
            Violation::Overlap { point, sets } => {
                format!("overlap: point {} in sets {} and {}", format_point(plane, point), sets.0, sets.1)
            }
            Violation::CollinearTriple { line, sets, points } => {
                let pts: Vec<String> = points.iter().map(|p| format_point(plane, p)).collect();
                format!(
                    "collinear: line {} holds {} from sets {:?}",
                    format_line(plane, line),
                    pts.join(" "),
                    sets
                )
            }
        }
    }

    pub fn to_json(&self, plane: &Plane) -> serde_json::Value {
        match self {
            Violation::Overlap { point, sets } => json!({
                "kind": "overlap",
                "point": format_point(plane, point),
                "sets": [sets.0, sets.1],
            }),
            Violation::CollinearTriple { line, sets, points } => json!({
                "kind": "collinear_triple",
                "line": format_line(plane, line),
                "sets": sets,
                "points": points.iter().map(|p| format_point(plane, p)).collect::<Vec<_>>(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(Violation),
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }

    pub fn describe(&self, plane: &Plane) -> String {
        match self {
            Verdict::Accept => "accept".to_string(),
            Verdict::Reject(v) => format!("reject: {}", v.describe(plane)),
        }
    }

    pub fn to_json(&self, plane: &Plane) -> serde_json::Value {
        match self {
            Verdict::Accept => json!({ "verdict": "accept" }),
            Verdict::Reject(v) => json!({ "verdict": "reject", "violation": v.to_json(plane) }),
        }
    }
}

/// Union points tagged with their set, sorted by point.
fn flatten<F: SetFamily + ?Sized>(f: &F) -> Vec<(Point, u32)> {
    let mut pts: Vec<(Point, u32)> =
        (0..f.num_sets()).into_par_iter().flat_map_iter(|i| f.set(i).into_iter().map(move |p| (p, i as u32))).collect();
    pts.par_sort_unstable();
    pts
}

fn first_overlap(pts: &[(Point, u32)]) -> Option<Violation> {
    pts.windows(2).find(|w| w[0].0 == w[1].0).map(|w| Violation::Overlap {
        point: w[0].0,
        sets: (w[0].1 as usize, w[1].1 as usize),
    })
}

/// Per-set counts on one line, largest first, ties by set index.
fn tally(sets: impl Iterator<Item = u32>) -> Vec<(usize, u32)> {
    let mut ids: Vec<u32> = sets.collect();
    ids.sort_unstable();
    let mut out: Vec<(usize, u32)> = Vec::new();
    for id in ids {
        match out.last_mut() {
            Some((c, last)) if *last == id => *c += 1,
            _ => out.push((1, id)),
        }
    }
    out.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    out
}

fn violates(t: &[(usize, u32)], m: usize) -> bool {
    t.iter().take(m).map(|x| x.0).sum::<usize>() >= 3
}

/// Accepts iff the sets are pairwise disjoint and every union of at most `m`
/// sets is an arc. Rejections name the smallest offending line.
pub fn verify_mwise<F: SetFamily + ?Sized>(f: &F, m: usize) -> Result<Verdict, ArcError> {
    if m < 2 {
        return Err(ArcError::InvalidM);
    }
    let plane = f.plane();
    let pts = flatten(f);
    if let Some(v) = first_overlap(&pts) {
        return Ok(Verdict::Reject(v));
    }
    // Every line with three or more union points is seen from the pencil
    // of its first point.
    let worst = (0..pts.len())
        .into_par_iter()
        .filter_map(|i| {
            let (p, sid) = pts[i];
            let mut pencil: Vec<(Line, u32)> =
                pts[i + 1..].iter().map(|(r, s)| (plane.join_unchecked(&p, r), *s)).collect();
            pencil.sort_unstable();
            let mut best: Option<Line> = None;
            for run in pencil.chunk_by(|a, b| a.0 == b.0) {
                if run.len() < 2 {
                    continue;
                }
                let t = tally(run.iter().map(|x| x.1).chain([sid]));
                if violates(&t, m) {
                    best = Some(best.map_or(run[0].0, |b: Line| b.min(run[0].0)));
                }
            }
            best
        })
        .min();
    let Some(line) = worst else {
        return Ok(Verdict::Accept);
    };
    let on: Vec<(Point, u32)> = pts.iter().filter(|(p, _)| plane.on(p, &line)).copied().collect();
    let t = tally(on.iter().map(|x| x.1));
    let mut sets: Vec<usize> = t.iter().take(m).map(|x| x.1 as usize).collect();
    sets.sort_unstable();
    let points = on.iter().filter(|(_, s)| sets.contains(&(*s as usize))).map(|x| x.0).collect();
    Ok(Verdict::Reject(Violation::CollinearTriple { line, sets, points }))
}

pub fn verify_local_arc<F: SetFamily + ?Sized>(f: &F) -> Verdict {
    verify_mwise(f, 2).expect("m = 2 is valid")
}

/// Literal check of the definition: each pair of sets is disjoint with an
/// arc as union. Quadratic in the number of sets, cubic in the set size.
pub fn verify_local_arc_oracle<F: SetFamily + ?Sized>(f: &F) -> Result<Verdict, ArcError> {
    let plane = f.plane();
    let sets: Vec<Vec<Point>> = (0..f.num_sets()).map(|i| f.set(i)).collect();
    let total: usize = sets.iter().map(Vec::len).sum();
    if total > ORACLE_POINT_LIMIT {
        return Err(ArcError::TooLarge(total));
    }
    if sets.len() == 1 {
        if let Some(v) = union_violation(plane, &sets[0], &[], 0, 0) {
            return Ok(Verdict::Reject(v));
        }
    }
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if let Some(v) = union_violation(plane, &sets[i], &sets[j], i, j) {
                return Ok(Verdict::Reject(v));
            }
        }
    }
    Ok(Verdict::Accept)
}

/// Disjointness and the arc property of `a ∪ b`, by brute force over
/// triples.
fn union_violation(plane: &Plane, a: &[Point], b: &[Point], ia: usize, ib: usize) -> Option<Violation> {
    if let Some(p) = a.iter().find(|p| b.contains(p)) {
        return Some(Violation::Overlap { point: *p, sets: (ia, ib) });
    }
    let u: Vec<(Point, usize)> = a.iter().map(|p| (*p, ia)).chain(b.iter().map(|p| (*p, ib))).collect();
    for x in 0..u.len() {
        for y in x + 1..u.len() {
            let line = plane.join_unchecked(&u[x].0, &u[y].0);
            for z in y + 1..u.len() {
                if plane.on(&u[z].0, &line) {
                    let mut sets = vec![ia, ib];
                    sets.dedup();
                    let mut points = vec![u[x].0, u[y].0, u[z].0];
                    points.sort_unstable();
                    return Some(Violation::CollinearTriple { line, sets, points });
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleVerdict {
    pub samples: u64,
    pub seed: u64,
    /// First failing sample: its index, the pair drawn, and the violation.
    pub failure: Option<(u64, usize, usize, Violation)>,
}

impl SampleVerdict {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// The pair drawn by sample `s`: stream `s` of a ChaCha8 generator keyed by
/// `seed`, so the draw does not depend on scheduling.
pub fn sample_pair(seed: u64, s: u64, n: usize) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(s);
    let i = rng.gen_range(0..n);
    let mut j = rng.gen_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    (i.min(j), i.max(j))
}

/// Check `samples` random pairs of sets in full.
pub fn sample_verify<F: SetFamily + ?Sized>(f: &F, samples: u64, seed: u64) -> SampleVerdict {
    let n = f.num_sets();
    let plane = f.plane();
    let failure = if n < 2 {
        None
    } else {
        (0..samples).into_par_iter().find_map_first(|s| {
            let (i, j) = sample_pair(seed, s, n);
            union_violation_fast(plane, &f.set(i), &f.set(j), i, j).map(|v| (s, i, j, v))
        })
    };
    SampleVerdict { samples, seed, failure }
}

fn union_violation_fast(plane: &Plane, a: &[Point], b: &[Point], ia: usize, ib: usize) -> Option<Violation> {
    if let Some(p) = a.iter().find(|p| b.contains(p)) {
        return Some(Violation::Overlap { point: *p, sets: (ia, ib) });
    }
    let u: Vec<Point> = a.iter().chain(b).copied().collect();
    if super::is_arc(plane, &u) {
        return None;
    }
    union_violation(plane, a, b, ia, ib)
}

#[cfg(test)]
mod tests {
    use super::super::LocalArcFamily;
    use super::*;
    use crate::gf::{Fe, Field};
    use proptest::prelude::{prop, prop_assert, proptest, any, ProptestConfig};

    fn planar(q: u64) -> Plane {
        Plane::planar(Field::of_order(q).unwrap()).unwrap()
    }

    fn aff(x: u32, y: u32) -> Point {
        Point::Affine(Fe(x), Fe(y))
    }

    fn example_i() -> LocalArcFamily {
        let sets = vec![vec![aff(0, 4), aff(4, 4)], vec![aff(0, 3), aff(2, 3)], vec![aff(1, 3), aff(3, 3)]];
        LocalArcFamily::new(planar(5), sets).unwrap()
    }

    #[test]
    fn example_i_accepted_by_both() {
        let f = example_i();
        assert_eq!(verify_local_arc(&f), Verdict::Accept);
        assert_eq!(verify_local_arc_oracle(&f).unwrap(), Verdict::Accept);
    }

    #[test]
    fn planted_point_on_secant() {
        let pl = planar(13);
        let s1 = vec![aff(2, 4), aff(3, 9)];
        let sec = pl.join(&s1[0], &s1[1]).unwrap();
        let on = pl.points_on(&sec).unwrap();
        let third = *on.iter().find(|p| p.is_affine() && !s1.contains(p)).unwrap();
        let fam = LocalArcFamily::new(pl.clone(), vec![s1, vec![third, aff(7, 1)]]).unwrap();
        match verify_local_arc(&fam) {
            Verdict::Reject(Violation::CollinearTriple { line, sets, points }) => {
                assert_eq!(line, sec);
                assert_eq!(sets, vec![0, 1]);
                assert_eq!(points.len(), 3);
            }
            v => panic!("unexpected {v:?}"),
        }
        assert!(!verify_local_arc_oracle(&fam).unwrap().is_accept());
    }

    #[test]
    fn overlap_rejected() {
        let pl = planar(7);
        let fam = LocalArcFamily::new(pl, vec![vec![aff(0, 0), aff(1, 1)], vec![aff(1, 1), aff(2, 5)]]).unwrap();
        let want = Violation::Overlap { point: aff(1, 1), sets: (0, 1) };
        assert_eq!(verify_local_arc(&fam), Verdict::Reject(want.clone()));
        assert_eq!(verify_local_arc_oracle(&fam).unwrap(), Verdict::Reject(want));
    }

    #[test]
    fn single_arc_accepted() {
        let pl = planar(11);
        let f = pl.field().clone();
        let arc: Vec<Point> = f.elements().map(|x| Point::Affine(x, f.double(f.square(x)))).collect();
        let fam = LocalArcFamily::new(pl, vec![arc]).unwrap();
        assert!(verify_local_arc(&fam).is_accept());
    }

    /// Three sets over GF(11), each with one point on a common line and the
    /// rest chosen so that every pair still forms an arc.
    fn three_on_a_line() -> LocalArcFamily {
        let pl = planar(11);
        let f = pl.field().clone();
        let line = Line::Vertical(Fe(0));
        let mut sets: Vec<Vec<Point>> = Vec::new();
        let mut used: Vec<Point> = Vec::new();
        let cands: Vec<Point> = pl.points().into_iter().filter(|p| p.is_affine() && !pl.on(p, &line)).collect();
        for y in 0..3u32 {
            let anchor = Point::Affine(Fe(0), f.int(y as i64));
            let mut chosen = None;
            for c in &cands {
                if used.contains(c) {
                    continue;
                }
                let mut trial = sets.clone();
                trial.push(vec![anchor, *c]);
                let fam = LocalArcFamily::new(pl.clone(), trial).unwrap();
                if verify_local_arc(&fam).is_accept() {
                    chosen = Some(*c);
                    break;
                }
            }
            let c = chosen.unwrap();
            used.push(c);
            sets.push(vec![anchor, c]);
        }
        LocalArcFamily::new(pl, sets).unwrap()
    }

    #[test]
    fn mwise_catches_three_sets() {
        let fam = three_on_a_line();
        assert!(verify_mwise(&fam, 2).unwrap().is_accept());
        match verify_mwise(&fam, 3).unwrap() {
            Verdict::Reject(Violation::CollinearTriple { sets, points, .. }) => {
                assert_eq!(sets, vec![0, 1, 2]);
                assert_eq!(points.len(), 3);
            }
            v => panic!("unexpected {v:?}"),
        }
        assert_eq!(verify_mwise(&fam, 1), Err(ArcError::InvalidM));
    }

    #[test]
    fn oval_partitions_pass_every_m() {
        for q in [5u64, 7, 9, 11] {
            let pl = planar(q);
            let f = pl.field().clone();
            let mut oval: Vec<Point> = f.elements().map(|x| Point::Affine(x, f.double(f.square(x)))).collect();
            oval.push(Point::Infinity);
            for k in 2..=4 {
                let sets: Vec<Vec<Point>> = oval.chunks_exact(k).map(|c| c.to_vec()).collect();
                let fam = LocalArcFamily::new(pl.clone(), sets).unwrap();
                for m in 2..=fam.sets().len().max(2) {
                    assert!(verify_mwise(&fam, m).unwrap().is_accept(), "q={q} k={k} m={m}");
                }
            }
        }
    }

    #[test]
    fn sampling_is_deterministic_and_finds_plants() {
        let good = example_i();
        assert!(sample_verify(&good, 200, 1).passed());
        let pl = planar(5);
        let mut sets = good.sets().to_vec();
        sets.push(vec![aff(4, 4), aff(1, 0)]);
        let bad = LocalArcFamily::new(pl, sets).unwrap();
        let a = sample_verify(&bad, 100, 7);
        let b = sample_verify(&bad, 100, 7);
        assert_eq!(a, b);
        assert!(!a.passed());
        assert_eq!(a.failure.as_ref().unwrap().2, 3);
    }

    /// Random families: sets of random points, sometimes arcs, sometimes not.
    fn random_family(q: u64, sizes: &[usize], seed: u64) -> LocalArcFamily {
        let pl = Plane::homogeneous(Field::of_order(q).unwrap());
        let pts = pl.points();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sets = sizes
            .iter()
            .map(|&k| {
                let mut s: Vec<Point> = Vec::new();
                while s.len() < k {
                    let p = pts[rng.gen_range(0..pts.len())];
                    if !s.contains(&p) {
                        s.push(p);
                    }
                }
                s
            })
            .collect();
        LocalArcFamily::new(pl, sets).unwrap()
    }

    /// Greedily grow an accepted family, then perturb one point.
    fn grown_family(q: u64, k: usize, seed: u64, perturb: bool) -> LocalArcFamily {
        let pl = if q % 2 == 1 {
            Plane::planar(Field::of_order(q).unwrap()).unwrap()
        } else {
            Plane::homogeneous(Field::of_order(q).unwrap())
        };
        let pts = pl.points();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sets: Vec<Vec<Point>> = Vec::new();
        for _ in 0..40 {
            if sets.iter().map(Vec::len).sum::<usize>() + k > 60 {
                break;
            }
            let mut s = Vec::new();
            while s.len() < k {
                let p = pts[rng.gen_range(0..pts.len())];
                if !s.contains(&p) {
                    s.push(p);
                }
            }
            let mut trial = sets.clone();
            trial.push(s);
            if verify_local_arc_oracle(&LocalArcFamily::new(pl.clone(), trial.clone()).unwrap()).unwrap().is_accept() {
                sets = trial;
            }
        }
        if perturb && !sets.is_empty() {
            let i = rng.gen_range(0..sets.len());
            let j = rng.gen_range(0..sets[i].len());
            let p = pts[rng.gen_range(0..pts.len())];
            if !sets[i].contains(&p) {
                sets[i][j] = p;
            }
        }
        LocalArcFamily::new(pl, sets).unwrap()
    }

    fn same_outcome(a: &Verdict, b: &Verdict) -> bool {
        a.is_accept() == b.is_accept()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn fast_matches_oracle_random(qi in 0usize..3, sizes in prop::collection::vec(2usize..5, 1..8), seed in any::<u64>()) {
            let q = [5u64, 7, 9][qi];
            let fam = random_family(q, &sizes, seed);
            let fast = verify_local_arc(&fam);
            let slow = verify_local_arc_oracle(&fam).unwrap();
            prop_assert!(same_outcome(&fast, &slow), "fast {:?} oracle {:?}", fast, slow);
        }

        #[test]
        fn fast_matches_oracle_grown(qi in 0usize..3, k in 2usize..5, seed in any::<u64>(), perturb in any::<bool>()) {
            let q = [5u64, 7, 9][qi];
            let fam = grown_family(q, k, seed, perturb);
            let fast = verify_local_arc(&fam);
            let slow = verify_local_arc_oracle(&fam).unwrap();
            prop_assert!(same_outcome(&fast, &slow), "fast {:?} oracle {:?}", fast, slow);
            if fast.is_accept() {
                // dropping whole sets keeps it valid
                let keep: Vec<usize> = (0..fam.sets().len()).step_by(2).collect();
                prop_assert!(verify_local_arc(&fam.subfamily(&keep)).is_accept());
                prop_assert!(verify_mwise(&fam, 2).unwrap().is_accept());
                prop_assert!(super::super::derive_phi(&fam).unwrap().ok());
            }
        }
    }
}
