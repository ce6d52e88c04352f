//! Constructions: oval partitions, generic seeds, the digit lifting over
//! primes and the prime-power liftings.

mod best;
mod generic;
mod lift;
mod seed;

use std::fmt;

use thiserror::Error;

use crate::arcs::{
    sample_verify, verify_local_arc, ArcError, LocalArcFamily, SampleVerdict, SetFamily, Verdict,
};
use crate::gf::{prime_power, Fe, Field, FieldError};
use crate::plane::{Plane, PlaneError, Point};
use crate::sdf::SdfError;

pub use best::{best_construction, Best, Candidate, Method};
pub use generic::{affine_conic_partition, generic_k_arc, validate_generic, GenericSeed, GenericVerdict, IntPair};
pub use lift::{
    case1_lift, case2_lift, case3_lift, choose_m1_m2, lift_prime, lift_prime_integer, lift_prime_with, Case3Params,
    LiftParams, Lifted, XRange,
};
pub use seed::affine_seed_search;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructError {
    #[error("k = {k} is too large for q = {q}")]
    KTooLarge { k: usize, q: u64 },
    #[error("k must be at least 2, got {0}")]
    InvalidK(usize),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("p = {p} is below the admissible bound {need}")]
    PTooSmall { p: u64, need: u128 },
    #[error("seed fails validation: {0}")]
    InvalidSeed(String),
    #[error("seed has a non-affine point or a vertical secant")]
    NonAffineSeed,
    #[error("seed must live in the planar plane over a prime field")]
    SeedNotPlanar,
    #[error("seed must live over GF(p^2) in flat representation")]
    NotTower,
    #[error("square-difference-free set is empty")]
    EmptySdf,
    #[error("translation set is empty")]
    EmptyTranslations,
    #[error("degree {0} has no lifting in this branch")]
    InvalidM(u32),
    #[error("M1 = {m1}, M2 = {m2} violate the constraints")]
    InvalidM1M2 { m1: f64, m2: f64 },
    #[error("odd characteristic required")]
    EvenCharacteristic,
    #[error("secant through {p0:?} and {p1:?} is not integral")]
    NonIntegralSecant { p0: IntPair, p1: IntPair },
    #[error("family of {0} sets does not fit in memory indices")]
    TooLarge(u128),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error(transparent)]
    Arc(#[from] ArcError),
    #[error(transparent)]
    Sdf(#[from] SdfError),
}

/// Full check up to this many points, sampling beyond.
pub const FULL_CHECK_POINTS: usize = 10_000;
pub const DEFAULT_SAMPLES: u64 = 100_000;
pub const DEFAULT_SAMPLE_SEEDS: [u64; 3] = [1, 2, 3];

/// Partition of an oval (odd q) or hyperoval (even q) into k-sets.
pub fn oval_partition(q: u64, k: usize) -> Result<LocalArcFamily, ConstructError> {
    let (p, _) = prime_power(q).ok_or(ConstructError::NotPrimePower(q))?;
    if k < 2 {
        return Err(ConstructError::InvalidK(k));
    }
    let field = Field::of_order(q)?;
    let (plane, pts) = if p == 2 {
        if k as u64 > q + 2 {
            return Err(ConstructError::KTooLarge { k, q });
        }
        // x1^2 = x0 x2 with nucleus (0:1:0)
        let plane = Plane::homogeneous(field.clone());
        let mut pts: Vec<Point> = field
            .elements()
            .map(|t| plane.hom_point([Fe::ONE, t, field.square(t)]).expect("nonzero"))
            .collect();
        pts.push(plane.hom_point([Fe::ZERO, Fe::ZERO, Fe::ONE]).expect("nonzero"));
        pts.push(plane.hom_point([Fe::ZERO, Fe::ONE, Fe::ZERO]).expect("nonzero"));
        (plane, pts)
    } else {
        if k as u64 > q + 1 {
            return Err(ConstructError::KTooLarge { k, q });
        }
        let plane = Plane::planar(field.clone())?;
        let mut pts: Vec<Point> = field.elements().map(|x| Point::Affine(x, field.double(field.square(x)))).collect();
        pts.push(Point::Infinity);
        (plane, pts)
    };
    let mut pts = pts;
    pts.sort_unstable();
    let sets = pts.chunks_exact(k).map(<[Point]>::to_vec).collect();
    Ok(LocalArcFamily::new(plane, sets)?)
}

/// Mixed-radix translation set: translation `i` is the sum of one entry per
/// slot, the last slot varying fastest.
#[derive(Debug, Clone)]
pub struct Translations {
    slots: Vec<Vec<(Fe, Fe)>>,
}

impl Translations {
    pub fn new(slots: Vec<Vec<(Fe, Fe)>>) -> Translations {
        Translations { slots }
    }

    pub fn slot_sizes(&self) -> Vec<usize> {
        self.slots.iter().map(Vec::len).collect()
    }

    /// Number of translations as the product of slot sizes.
    pub fn count(&self) -> u128 {
        self.slots.iter().map(|s| s.len() as u128).product()
    }

    pub fn get(&self, field: &Field, mut i: usize) -> (Fe, Fe) {
        let (mut u, mut v) = (Fe::ZERO, Fe::ZERO);
        for slot in self.slots.iter().rev() {
            let (du, dv) = slot[i % slot.len()];
            i /= slot.len();
            u = field.add(u, du);
            v = field.add(v, dv);
        }
        (u, v)
    }
}

/// Every seed set translated by every element of a translation set, built
/// on demand.
#[derive(Debug, Clone)]
pub struct TranslatedFamily {
    plane: Plane,
    seeds: Vec<Vec<Point>>,
    translations: Translations,
    len: usize,
}

impl TranslatedFamily {
    pub fn new(plane: Plane, seeds: Vec<Vec<Point>>, translations: Translations) -> Result<TranslatedFamily, ConstructError> {
        let total = translations.count() * seeds.len() as u128;
        let len = usize::try_from(total).map_err(|_| ConstructError::TooLarge(total))?;
        if seeds.iter().flatten().any(|p| !p.is_affine()) {
            return Err(ConstructError::NonAffineSeed);
        }
        Ok(TranslatedFamily { plane, seeds, translations, len })
    }

    pub fn translations(&self) -> &Translations {
        &self.translations
    }

    pub fn seed_count(&self) -> usize {
        self.seeds.len()
    }

    pub fn num_points(&self) -> usize {
        self.seeds.iter().map(Vec::len).sum::<usize>() * (self.len / self.seeds.len().max(1))
    }

    pub fn materialize(&self) -> LocalArcFamily {
        LocalArcFamily::from_family(self)
    }
}

impl SetFamily for TranslatedFamily {
    fn plane(&self) -> &Plane {
        &self.plane
    }

    fn num_sets(&self) -> usize {
        self.len
    }

    fn set(&self, i: usize) -> Vec<Point> {
        let n = self.seeds.len();
        let f = self.plane.field();
        let (u, v) = self.translations.get(f, i / n);
        let mut out: Vec<Point> = self.seeds[i % n]
            .iter()
            .map(|p| match *p {
                Point::Affine(x, y) => Point::Affine(f.add(x, u), f.add(y, v)),
                _ => unreachable!("seeds are affine"),
            })
            .collect();
        out.sort_unstable();
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Full,
    Sample { samples: u64, seed: u64 },
    /// Full up to FULL_CHECK_POINTS, otherwise DEFAULT_SAMPLES at each of
    /// DEFAULT_SAMPLE_SEEDS.
    Auto,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check {
    Full(Verdict),
    Sampled(Vec<SampleVerdict>),
}

impl Check {
    pub fn passed(&self) -> bool {
        match self {
            Check::Full(v) => v.is_accept(),
            Check::Sampled(v) => v.iter().all(SampleVerdict::passed),
        }
    }

    pub fn is_full(&self) -> bool {
        matches!(self, Check::Full(_))
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::Full(v) => write!(f, "full check: {}", if v.is_accept() { "accept" } else { "reject" }),
            Check::Sampled(v) => {
                let seeds: Vec<String> = v.iter().map(|s| s.seed.to_string()).collect();
                let samples = v.first().map_or(0, |s| s.samples);
                let ok = if self.passed() { "pass" } else { "fail" };
                write!(f, "sampled check: {samples} pairs at seeds {}: {ok}", seeds.join(","))
            }
        }
    }
}

pub fn check_family<F: SetFamily + ?Sized>(f: &F, mode: CheckMode) -> Check {
    match mode {
        CheckMode::Full => Check::Full(verify_local_arc(f)),
        CheckMode::Sample { samples, seed } => Check::Sampled(vec![sample_verify(f, samples, seed)]),
        CheckMode::Auto => {
            let points: usize = if f.num_sets() == 0 { 0 } else { f.set(0).len() * f.num_sets() };
            if points <= FULL_CHECK_POINTS {
                Check::Full(verify_local_arc(f))
            } else {
                Check::Sampled(DEFAULT_SAMPLE_SEEDS.iter().map(|&s| sample_verify(f, DEFAULT_SAMPLES, s)).collect())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcs::{reduce_uniformity, Reduced};

    #[test]
    fn oval_partition_counts() {
        assert_eq!(oval_partition(11, 2).unwrap().sets().len(), 6);
        assert_eq!(oval_partition(4, 3).unwrap().sets().len(), 2);
        assert_eq!(oval_partition(7, 8).unwrap().sets().len(), 1);
        assert!(matches!(oval_partition(7, 9), Err(ConstructError::KTooLarge { .. })));
        assert!(matches!(oval_partition(4, 7), Err(ConstructError::KTooLarge { .. })));
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 16, 25, 27] {
            let even = q % 2 == 0;
            for k in 2..=(q as usize + if even { 2 } else { 1 }) {
                let f = oval_partition(q, k).unwrap();
                let want = (q as usize + if even { 2 } else { 1 }) / k;
                assert_eq!(f.sets().len(), want, "q={q} k={k}");
                assert!(verify_local_arc(&f).is_accept(), "q={q} k={k}");
            }
        }
    }

    #[test]
    fn hyperoval_full() {
        // q+2 points, no three collinear
        let f = oval_partition(8, 10).unwrap();
        assert_eq!(f.num_points(), 10);
        assert!(crate::arcs::is_arc(f.plane(), &f.sets()[0]));
    }

    #[test]
    fn translations_decode() {
        let f = Field::prime(7).unwrap();
        let t = Translations::new(vec![
            vec![(Fe(0), Fe(0)), (Fe(1), Fe(0))],
            vec![(Fe(0), Fe(0)), (Fe(0), Fe(2)), (Fe(0), Fe(4))],
        ]);
        assert_eq!(t.count(), 6);
        let all: Vec<_> = (0..6).map(|i| t.get(&f, i)).collect();
        assert_eq!(all[0], (Fe(0), Fe(0)));
        assert_eq!(all[1], (Fe(0), Fe(2)));
        assert_eq!(all[3], (Fe(1), Fe(0)));
        assert_eq!(all[5], (Fe(1), Fe(4)));
    }

    #[test]
    fn oval_reduces() {
        let f = oval_partition(9, 4).unwrap();
        match reduce_uniformity(&f).unwrap() {
            Reduced::Family(g) => assert!(verify_local_arc(&g).is_accept()),
            Reduced::Matching(m) => assert!(crate::arcs::is_induced_matching(f.plane(), &m)),
        }
    }
}
