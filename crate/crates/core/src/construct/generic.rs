//! Integer seeds that stay local arcs modulo every large prime.

use serde::{Deserialize, Serialize};

use crate::arcs::{secants_of, verify_local_arc, LocalArcFamily, SetFamily, Verdict};
use crate::gf::{is_prime, next_prime_above, reduce_int, Fe, Field};
use crate::plane::{Line, Plane, Point};

use super::ConstructError;

pub type IntPair = (i64, i64);

/// Integer point sets with their integer secant sets, valid modulo `r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericSeed {
    pub sets: Vec<Vec<IntPair>>,
    pub lines: Vec<Vec<IntPair>>,
    pub r: u64,
}

impl GenericSeed {
    /// Three pairs modulo 5.
    pub fn example_i() -> GenericSeed {
        GenericSeed {
            sets: vec![vec![(0, 4), (4, 4)], vec![(0, 3), (2, 3)], vec![(1, 3), (3, 3)]],
            lines: vec![vec![(2, 0)], vec![(1, 2)], vec![(2, 2)]],
            r: 5,
        }
    }

    /// One 3-arc modulo 13.
    pub fn example_ii() -> GenericSeed {
        GenericSeed { sets: vec![vec![(6, 12), (2, 4), (3, 9)]], lines: vec![vec![(0, 0), (4, 8), (3, 3)]], r: 13 }
    }

    pub fn k(&self) -> usize {
        self.sets.first().map_or(0, Vec::len)
    }

    /// Seed whose secants are solved over Q from the points. Fails when a
    /// secant is not integral.
    pub fn from_sets(sets: Vec<Vec<IntPair>>, r: u64) -> Result<GenericSeed, ConstructError> {
        let mut lines = Vec::with_capacity(sets.len());
        for s in &sets {
            let mut l = Vec::new();
            for (i, &(x0, y0)) in s.iter().enumerate() {
                for &(x1, y1) in &s[i + 1..] {
                    let num = x0 * x0 - x1 * x1 - (y0 - y1);
                    let den = 2 * (x0 - x1);
                    if den == 0 || num % den != 0 {
                        return Err(ConstructError::NonIntegralSecant { p0: (x0, y0), p1: (x1, y1) });
                    }
                    let a = num / den;
                    l.push((a, y0 - (x0 - a) * (x0 - a)));
                }
            }
            lines.push(l);
        }
        Ok(GenericSeed { sets, lines, r })
    }

    fn max_coordinate(&self) -> i64 {
        self.sets.iter().flatten().flat_map(|&(x, y)| [x, y]).max().unwrap_or(0)
    }

    /// Smallest prime at least `r` exceeding every point coordinate, so the
    /// points lie in I_r'^2.
    pub fn covering_prime(&self) -> u64 {
        let m = self.max_coordinate().max(0) as u64;
        if self.r > m {
            self.r
        } else {
            next_prime_above(m)
        }
    }

    /// The reduced family in planar PG(2,r).
    pub fn reduce(&self, r: u64) -> Result<LocalArcFamily, ConstructError> {
        let plane = Plane::planar(Field::prime(r)?)?;
        let sets = self
            .sets
            .iter()
            .map(|s| s.iter().map(|&(x, y)| Point::Affine(red(x, r), red(y, r))).collect())
            .collect();
        Ok(LocalArcFamily::new(plane, sets)?)
    }
}

fn red(x: i64, r: u64) -> Fe {
    Fe(reduce_int(x, r) as u32)
}

/// Outcome of checking conditions (a), (b), (c).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericVerdict {
    pub a: bool,
    pub b: bool,
    pub c: bool,
    /// max (x-a)^2 - (y-b) over all point/line pairs.
    pub max_excess: i64,
    /// Every prime r' at least this keeps the family a local arc.
    pub threshold: u64,
    pub notes: Vec<String>,
}

impl GenericVerdict {
    pub fn ok(&self) -> bool {
        self.a && self.b && self.c
    }
}

pub fn validate_generic(seed: &GenericSeed) -> Result<GenericVerdict, ConstructError> {
    let r = seed.r;
    if !is_prime(r) {
        return Err(ConstructError::NotPrime(r));
    }
    let mut notes = Vec::new();
    let fam = seed.reduce(r)?;
    let plane = fam.plane().clone();

    let verdict = verify_local_arc(&fam);
    let k = seed.k();
    let a = verdict.is_accept() && fam.uniform_k() == k;
    if let Verdict::Reject(v) = &verdict {
        notes.push(format!("(a) {}", v.describe(&plane)));
    }

    let mut b = seed.lines.len() == seed.sets.len();
    for (j, s) in fam.sets().iter().enumerate() {
        let Some(lines) = seed.lines.get(j) else { break };
        let mut given: Vec<Line> = lines.iter().map(|&(a, bb)| Line::NonVertical(red(a, r), red(bb, r))).collect();
        given.sort_unstable();
        match secants_of(&plane, s) {
            Ok(sec) if sec == given && given.len() == lines.len() => {}
            _ => {
                b = false;
                notes.push(format!("(b) set {j}: secant set differs"));
            }
        }
    }

    let mut c = true;
    for &(x, y) in seed.sets.iter().flatten().chain(seed.lines.iter().flatten()) {
        if x < 0 || y < 0 {
            c = false;
            notes.push(format!("(c) coordinate pair ({x},{y}) leaves I_n"));
        }
    }
    let mut max_excess = i64::MIN;
    let ri = r as i64;
    for &(x, y) in seed.sets.iter().flatten() {
        for &(la, lb) in seed.lines.iter().flatten() {
            let dx = (x - la) as i128;
            let excess = dx * dx - (y - lb) as i128;
            max_excess = max_excess.max(excess as i64);
            let incident = (dx * dx - (y - lb) as i128).rem_euclid(ri as i128) == 0;
            if incident && !(excess == 0 && y >= lb) {
                c = false;
                notes.push(format!("(c) ({x},{y}) on [{la},{lb}] only modulo {r}"));
            }
        }
    }
    let threshold = r.max((max_excess + 1).max(0) as u64);
    Ok(GenericVerdict { a, b, c, max_excess, threshold, notes })
}

/// The k points (x, 2x) with x = ceil(k^2/2) + 2i and their integer secants.
pub fn generic_k_arc(k: usize) -> Result<GenericSeed, ConstructError> {
    if k < 2 {
        return Err(ConstructError::InvalidK(k));
    }
    let k = k as i64;
    let x0 = (k * k + 1) / 2;
    let xs: Vec<i64> = (0..k).map(|i| x0 + 2 * i).collect();
    let pts: Vec<IntPair> = xs.iter().map(|&x| (x, 2 * x)).collect();
    let mut lines = Vec::new();
    for (i, &u) in xs.iter().enumerate() {
        for &v in &xs[i + 1..] {
            let a = (u + v) / 2 - 1;
            let h = (u - v) / 2 + 1;
            lines.push((a, 2 * u - h * h));
        }
    }
    let r = next_prime_above((k * k + 4 * k - 7).max(1) as u64);
    Ok(GenericSeed { sets: vec![pts], lines: vec![lines], r })
}

/// The affine conic {(x, 2x^2)} in PG(2,p) cut into consecutive k-sets.
/// All points are affine and all secants non-vertical.
pub fn affine_conic_partition(p: u64, k: usize) -> Result<LocalArcFamily, ConstructError> {
    let f = Field::prime(p)?;
    if k < 2 || k as u64 > p {
        return Err(ConstructError::InvalidK(k));
    }
    let pts: Vec<Point> = f.elements().map(|x| Point::Affine(x, f.double(f.square(x)))).collect();
    let sets = pts.chunks_exact(k).map(|c| c.to_vec()).collect();
    Ok(LocalArcFamily::new(Plane::planar(f)?, sets)?)
}
