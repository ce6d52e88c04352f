//! Local arcs: data model, verification and derived structures.

mod io;
mod verify;

use rustc_hash::FxHashSet;
use thiserror::Error;

use crate::gf::FieldError;
use crate::plane::{Line, Plane, PlaneError, Point, Presentation};

pub use io::FamilyFile;
pub use verify::{
    sample_verify, verify_local_arc, verify_local_arc_oracle, verify_mwise, SampleVerdict, Verdict, Violation,
    ORACLE_POINT_LIMIT,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArcError {
    #[error("point set is not an arc")]
    NotAnArc,
    #[error("family has {0} points, above the oracle limit")]
    TooLarge(usize),
    #[error("set {0} has fewer than two points")]
    SetTooSmall(usize),
    #[error("family does not verify: {0}")]
    NotVerified(String),
    #[error("family is 1-uniform")]
    UniformityOne,
    #[error("family is not uniform")]
    NotUniform,
    #[error("family is not 4-uniform")]
    NotFourUniform,
    #[error("need at least two sets")]
    TooFewSets,
    #[error("set {0} repeats a point")]
    RepeatedPoint(usize),
    #[error("m must be at least 2")]
    InvalidM,
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("bad family file: {0}")]
    Format(String),
}

/// Read access to a family of point sets. Large constructed families
/// implement this lazily.
pub trait SetFamily: Sync {
    fn plane(&self) -> &Plane;
    fn num_sets(&self) -> usize;
    /// The `i`-th set in canonical order.
    fn set(&self, i: usize) -> Vec<Point>;
}

/// A k-arc with points in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KArc {
    points: Vec<Point>,
}

impl KArc {
    pub fn new(plane: &Plane, mut points: Vec<Point>) -> Result<KArc, ArcError> {
        for p in &points {
            plane.validate_point(p)?;
        }
        points.sort_unstable();
        let n = points.len();
        points.dedup();
        if points.len() != n || !is_arc(plane, &points) {
            return Err(ArcError::NotAnArc);
        }
        Ok(KArc { points })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn secants(&self, plane: &Plane) -> Vec<Line> {
        secants_of(plane, &self.points).expect("arc invariant")
    }
}

/// A collection of point sets with plane metadata. Sets are stored sorted;
/// the local-arc property is established by the verifiers, not here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalArcFamily {
    plane: Plane,
    sets: Vec<Vec<Point>>,
}

impl LocalArcFamily {
    pub fn new(plane: Plane, sets: Vec<Vec<Point>>) -> Result<LocalArcFamily, ArcError> {
        let mut sets = sets;
        for (i, s) in sets.iter_mut().enumerate() {
            for p in s.iter() {
                plane.validate_point(p)?;
            }
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(ArcError::RepeatedPoint(i));
            }
        }
        Ok(LocalArcFamily { plane, sets })
    }

    pub fn from_family<F: SetFamily + ?Sized>(f: &F) -> LocalArcFamily {
        let sets = (0..f.num_sets()).map(|i| f.set(i)).collect();
        LocalArcFamily::new(f.plane().clone(), sets).expect("family points belong to its plane")
    }

    pub fn sets(&self) -> &[Vec<Point>] {
        &self.sets
    }

    pub fn into_sets(self) -> Vec<Vec<Point>> {
        self.sets
    }

    pub fn num_points(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }

    /// Common set size, or 0 for mixed sizes or an empty family.
    pub fn uniform_k(&self) -> usize {
        uniform_k(self)
    }

    /// Drop whole sets, keeping those at `keep`.
    pub fn subfamily(&self, keep: &[usize]) -> LocalArcFamily {
        LocalArcFamily { plane: self.plane.clone(), sets: keep.iter().map(|&i| self.sets[i].clone()).collect() }
    }

    /// The same family in the other presentation (odd q).
    pub fn converted(&self) -> Result<LocalArcFamily, ArcError> {
        let twin = self.plane.twin()?;
        let sets = self
            .sets
            .iter()
            .map(|s| s.iter().map(|p| self.plane.convert_point(p)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        LocalArcFamily::new(twin, sets)
    }
}

impl SetFamily for LocalArcFamily {
    fn plane(&self) -> &Plane {
        &self.plane
    }

    fn num_sets(&self) -> usize {
        self.sets.len()
    }

    fn set(&self, i: usize) -> Vec<Point> {
        self.sets[i].clone()
    }
}

pub fn uniform_k<F: SetFamily + ?Sized>(f: &F) -> usize {
    if f.num_sets() == 0 {
        return 0;
    }
    let k = f.set(0).len();
    if (1..f.num_sets()).all(|i| f.set(i).len() == k) {
        k
    } else {
        0
    }
}

/// True iff no line contains three of the (distinct) points.
pub fn is_arc(plane: &Plane, points: &[Point]) -> bool {
    let mut seen = FxHashSet::default();
    for (i, p) in points.iter().enumerate() {
        for r in &points[i + 1..] {
            if p == r {
                return false;
            }
            if !seen.insert(plane.join_unchecked(p, r)) {
                return false;
            }
        }
    }
    true
}

/// The C(k,2) secants of an arc, in canonical order.
pub fn secants_of(plane: &Plane, points: &[Point]) -> Result<Vec<Line>, ArcError> {
    let mut lines = Vec::with_capacity(points.len() * points.len().saturating_sub(1) / 2);
    for (i, p) in points.iter().enumerate() {
        for r in &points[i + 1..] {
            lines.push(plane.join(p, r).map_err(|_| ArcError::NotAnArc)?);
        }
    }
    let n = lines.len();
    lines.sort_unstable();
    lines.dedup();
    if lines.len() != n {
        return Err(ArcError::NotAnArc);
    }
    Ok(lines)
}

/// Number of tangents through each point of `set`, in the given order.
pub fn tangent_profile(plane: &Plane, set: &[Point]) -> Vec<usize> {
    let q1 = plane.q() as usize + 1;
    set.iter()
        .map(|p| {
            let joins: FxHashSet<Line> = set.iter().filter(|r| *r != p).map(|r| plane.join_unchecked(p, r)).collect();
            q1 - joins.len()
        })
        .collect()
}

pub fn is_t_quasiarc(plane: &Plane, set: &[Point], t: usize) -> bool {
    tangent_profile(plane, set).iter().all(|&c| c >= t)
}

pub fn is_semiarc(plane: &Plane, set: &[Point], t: usize) -> bool {
    tangent_profile(plane, set).iter().all(|&c| c == t)
}

/// One secant per set and the two checks that it behaves like a dual
/// 2-quasiarc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiReport {
    pub phi: Vec<Line>,
    /// Every line of phi has two points on no other line of phi.
    pub direct_ok: bool,
    /// The dual point set, in the homogeneous plane, is a 2-quasiarc.
    pub dual_ok: bool,
}

impl PhiReport {
    pub fn ok(&self) -> bool {
        self.direct_ok && self.dual_ok
    }
}

pub fn derive_phi<F: SetFamily + ?Sized>(f: &F) -> Result<PhiReport, ArcError> {
    let plane = f.plane();
    let mut phi = Vec::with_capacity(f.num_sets());
    for i in 0..f.num_sets() {
        let s = f.set(i);
        if s.len() < 2 {
            return Err(ArcError::SetTooSmall(i));
        }
        phi.push(secants_of(plane, &s)?[0]);
    }

    // points of l on some other line of phi are exactly its meets with them
    let q1 = plane.q() as usize + 1;
    let direct_ok = phi.iter().enumerate().all(|(i, l)| {
        let mut hit = FxHashSet::default();
        for (j, m) in phi.iter().enumerate() {
            if j != i {
                match plane.meet(l, m) {
                    Ok(p) => {
                        hit.insert(p);
                    }
                    Err(_) => return false,
                }
            }
        }
        q1 - hit.len() >= 2
    });

    let (hom, hom_lines) = match plane.presentation() {
        Presentation::Homogeneous => (plane.clone(), phi.clone()),
        Presentation::Planar => {
            (plane.twin()?, phi.iter().map(|l| plane.convert_line(l)).collect::<Result<Vec<_>, _>>()?)
        }
    };
    let mut dual: Vec<Point> = hom_lines.iter().map(|l| hom.dual_of_line(l)).collect::<Result<_, _>>()?;
    let n = dual.len();
    dual.sort_unstable();
    dual.dedup();
    let dual_ok = dual.len() == n && is_t_quasiarc(&hom, &dual, 2);

    Ok(PhiReport { phi, direct_ok, dual_ok })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reduced {
    Family(LocalArcFamily),
    /// Point-line pairs forming an induced matching of the incidence graph.
    Matching(Vec<(Point, Line)>),
}

/// Remove the smallest point of every set.
pub fn reduce_uniformity<F: SetFamily + ?Sized>(f: &F) -> Result<Reduced, ArcError> {
    let plane = f.plane();
    let k = uniform_k(f);
    if k == 0 {
        return Err(ArcError::NotUniform);
    }
    if k == 1 {
        return Err(ArcError::UniformityOne);
    }
    if let Verdict::Reject(v) = verify_local_arc(f) {
        return Err(ArcError::NotVerified(v.describe(plane)));
    }
    if k > 2 {
        let sets = (0..f.num_sets()).map(|i| f.set(i)[1..].to_vec()).collect();
        let out = LocalArcFamily::new(plane.clone(), sets)?;
        if let Verdict::Reject(v) = verify_local_arc(&out) {
            return Err(ArcError::NotVerified(v.describe(plane)));
        }
        return Ok(Reduced::Family(out));
    }
    let pairs: Vec<(Point, Line)> = (0..f.num_sets())
        .map(|i| {
            let s = f.set(i);
            (s[1], plane.join_unchecked(&s[0], &s[1]))
        })
        .collect();
    if !is_induced_matching(plane, &pairs) {
        return Err(ArcError::NotVerified("pairs are not an induced matching".into()));
    }
    Ok(Reduced::Matching(pairs))
}

pub fn is_induced_matching(plane: &Plane, pairs: &[(Point, Line)]) -> bool {
    pairs.iter().enumerate().all(|(i, (p, l))| {
        plane.on(p, l) && pairs.iter().enumerate().all(|(j, (r, m))| i == j || (!plane.on(p, m) && !plane.on(r, l)))
    })
}

/// Parameters of the locally repairable code given by a 4-uniform local arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LrcParams {
    pub n: usize,
    pub dimension: usize,
    pub distance: usize,
    pub locality: usize,
    pub alphabet: u64,
}

impl std::fmt::Display for LrcParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "n={} k={} d={} r={}", self.n, self.dimension, self.distance, self.locality)
    }
}

pub fn lrc_params<F: SetFamily + ?Sized>(f: &F) -> Result<LrcParams, ArcError> {
    if uniform_k(f) != 4 {
        return Err(ArcError::NotFourUniform);
    }
    let s = f.num_sets();
    if s < 2 {
        return Err(ArcError::TooFewSets);
    }
    if let Verdict::Reject(v) = verify_local_arc(f) {
        return Err(ArcError::NotVerified(v.describe(f.plane())));
    }
    Ok(LrcParams { n: 4 * s, dimension: 3 * s - 3, distance: 6, locality: 3, alphabet: f.plane().q() })
}

/// Lines through `p` that are not a secant of any set.
pub fn uncovered_line_count<F: SetFamily + ?Sized>(f: &F, p: &Point) -> Result<usize, ArcError> {
    let plane = f.plane();
    let mut secants = FxHashSet::default();
    for i in 0..f.num_sets() {
        secants.extend(secants_of(plane, &f.set(i))?);
    }
    Ok(plane.lines_through(p)?.iter().filter(|l| !secants.contains(*l)).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{Fe, Field};

    fn planar(q: u64) -> Plane {
        Plane::planar(Field::of_order(q).unwrap()).unwrap()
    }

    fn aff(x: u32, y: u32) -> Point {
        Point::Affine(Fe(x), Fe(y))
    }

    pub(crate) fn example_i() -> LocalArcFamily {
        let sets = vec![vec![aff(0, 4), aff(4, 4)], vec![aff(0, 3), aff(2, 3)], vec![aff(1, 3), aff(3, 3)]];
        LocalArcFamily::new(planar(5), sets).unwrap()
    }

    fn brute_is_arc(pl: &Plane, pts: &[Point]) -> bool {
        pl.lines().iter().all(|l| pts.iter().filter(|p| pl.on(p, l)).count() <= 2)
    }

    #[test]
    fn is_arc_examples() {
        let pl = planar(13);
        assert!(is_arc(&pl, &[aff(6, 12), aff(2, 4), aff(3, 9)]));
        let s = [aff(0, 0), aff(1, 1), aff(2, 4)];
        assert_eq!(is_arc(&pl, &s), brute_is_arc(&pl, &s));
        assert!(is_arc(&pl, &[aff(0, 0), aff(5, 1)]));
    }

    #[test]
    fn secants_examples() {
        let pl = planar(13);
        let s = secants_of(&pl, &[aff(6, 12), aff(2, 4), aff(3, 9)]).unwrap();
        let nv = |a, b| Line::NonVertical(Fe(a), Fe(b));
        assert_eq!(s, vec![nv(0, 0), nv(3, 3), nv(4, 8)]);
        assert_eq!(secants_of(&pl, &[aff(1, 1), aff(2, 2)]).unwrap().len(), 1);
        let f = pl.field();
        let four: Vec<_> = (1..5).map(|x| Point::Affine(Fe(x), f.double(f.square(Fe(x))))).collect();
        assert_eq!(secants_of(&pl, &four).unwrap().len(), 6);
        let s3 = [aff(0, 0), aff(1, 1), aff(5, 1)];
        assert_eq!(secants_of(&pl, &s3).is_ok(), brute_is_arc(&pl, &s3));
    }

    #[test]
    fn tangent_profiles() {
        for q in [5u64, 7] {
            let pl = planar(q);
            let f = pl.field();
            let mut oval: Vec<Point> = f.elements().map(|x| Point::Affine(x, f.double(f.square(x)))).collect();
            // every vertical line meets the curve once, so (inf) completes it
            oval.push(Point::Infinity);
            assert!(is_arc(&pl, &oval));
            assert!(is_semiarc(&pl, &oval, 1));
            assert_eq!(tangent_profile(&pl, &[aff(1, 1)]), vec![q as usize + 1]);
            let line = pl.points_on(&Line::Vertical(Fe(2))).unwrap();
            // the other q lines through each point meet the line only there
            assert!(tangent_profile(&pl, &line).iter().all(|&c| c == q as usize));
        }
    }

    #[test]
    fn phi_of_example_i() {
        let fam = example_i();
        let r = derive_phi(&fam).unwrap();
        let nv = |a, b| Line::NonVertical(Fe(a), Fe(b));
        assert_eq!(r.phi, vec![nv(2, 0), nv(1, 2), nv(2, 2)]);
        assert!(r.ok());
        let single = fam.subfamily(&[1]);
        let r1 = derive_phi(&single).unwrap();
        assert_eq!(r1.phi.len(), 1);
        assert!(r1.ok());
    }

    #[test]
    fn reduce_examples() {
        let pl = planar(13);
        let fam = LocalArcFamily::new(pl, vec![vec![aff(6, 12), aff(2, 4), aff(3, 9)]]).unwrap();
        match reduce_uniformity(&fam).unwrap() {
            Reduced::Family(g) => {
                assert_eq!(g.uniform_k(), 2);
                assert_eq!(g.sets(), &[vec![aff(3, 9), aff(6, 12)]]);
            }
            _ => panic!("expected a family"),
        }
        match reduce_uniformity(&example_i()).unwrap() {
            Reduced::Matching(m) => assert_eq!(m.len(), 3),
            _ => panic!("expected a matching"),
        }
    }

    #[test]
    fn lrc_and_uncovered() {
        let pl = planar(13);
        let f = pl.field().clone();
        let conic: Vec<Point> = f.elements().map(|x| Point::Affine(x, f.double(f.square(x)))).collect();
        let sets: Vec<Vec<Point>> = conic.chunks(4).take(3).map(|c| c.to_vec()).collect();
        let fam = LocalArcFamily::new(pl.clone(), sets).unwrap();
        let p = lrc_params(&fam).unwrap();
        assert_eq!(p.to_string(), "n=12 k=6 d=6 r=3");
        assert_eq!(lrc_params(&fam.subfamily(&[0])), Err(ArcError::TooFewSets));
        assert_eq!(lrc_params(&example_i()), Err(ArcError::NotFourUniform));

        let empty = LocalArcFamily::new(pl.clone(), vec![]).unwrap();
        assert_eq!(uncovered_line_count(&empty, &aff(1, 1)).unwrap(), 14);
        let one = LocalArcFamily::new(pl, vec![vec![aff(1, 1), aff(2, 3)]]).unwrap();
        assert_eq!(uncovered_line_count(&one, &aff(1, 1)).unwrap(), 13);
    }

    #[test]
    fn phi_direct_matches_point_count() {
        for (q, k) in [(7u64, 2usize), (8, 3), (9, 2), (11, 3)] {
            let f = crate::construct::oval_partition(q, k).unwrap();
            let r = derive_phi(&f).unwrap();
            let plane = f.plane();
            let brute = r.phi.iter().enumerate().all(|(i, l)| {
                let free = plane
                    .points_on(l)
                    .unwrap()
                    .iter()
                    .filter(|p| r.phi.iter().enumerate().all(|(j, m)| j == i || !plane.on(p, m)))
                    .count();
                free >= 2
            });
            assert_eq!(r.direct_ok, brute, "q={q} k={k}");
        }
    }
}
