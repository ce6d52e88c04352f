//! Exhaustive search for small affine seeds.

use crate::arcs::{is_arc, secants_of, LocalArcFamily};
use crate::gf::Field;
use crate::plane::{Line, Plane, Point};

use super::ConstructError;

/// Candidate limit for the compatibility table.
const MAX_CANDIDATES: usize = 20_000;

/// First (in lexicographic candidate order) family of `target` k-sets of
/// affine points of PG(2,p) with distinct x-coordinates in each set, so
/// every secant is non-vertical. `None` when no such family exists.
pub fn affine_seed_search(p: u64, k: usize, target: usize) -> Result<Option<LocalArcFamily>, ConstructError> {
    if k < 2 || k as u64 > p {
        return Err(ConstructError::InvalidK(k));
    }
    let field = Field::prime(p)?;
    let plane = Plane::planar(field.clone())?;
    let pts: Vec<Point> = plane.points().into_iter().filter(Point::is_affine).collect();

    let mut cands: Vec<(Vec<Point>, Vec<Line>)> = Vec::new();
    let mut idx = Vec::with_capacity(k);
    extend(&plane, &pts, k, 0, &mut idx, &mut cands)?;
    let n = cands.len();
    let words = n.div_ceil(64);
    let mut compat = vec![vec![0u64; words]; n];
    for i in 0..n {
        for j in i + 1..n {
            if compatible(&plane, &cands[i], &cands[j]) {
                compat[i][j / 64] |= 1 << (j % 64);
                compat[j][i / 64] |= 1 << (i % 64);
            }
        }
    }
    let all: Vec<u64> = (0..words)
        .map(|w| if (w + 1) * 64 <= n { !0 } else { (1u64 << (n % 64)) - 1 })
        .collect();
    let mut chosen = Vec::new();
    if clique(&compat, all, target, &mut chosen) {
        let sets = chosen.iter().map(|&i| cands[i].0.clone()).collect();
        Ok(Some(LocalArcFamily::new(plane, sets)?))
    } else {
        Ok(None)
    }
}

fn extend(
    plane: &Plane,
    pts: &[Point],
    k: usize,
    start: usize,
    idx: &mut Vec<usize>,
    out: &mut Vec<(Vec<Point>, Vec<Line>)>,
) -> Result<(), ConstructError> {
    if idx.len() == k {
        let set: Vec<Point> = idx.iter().map(|&i| pts[i]).collect();
        let sec = secants_of(plane, &set)?;
        if sec.iter().all(|l| matches!(l, Line::NonVertical(..))) {
            if out.len() == MAX_CANDIDATES {
                return Err(ConstructError::TooLarge(MAX_CANDIDATES as u128));
            }
            out.push((set, sec));
        }
        return Ok(());
    }
    for i in start..pts.len() {
        idx.push(i);
        let set: Vec<Point> = idx.iter().map(|&j| pts[j]).collect();
        if is_arc(plane, &set) {
            extend(plane, pts, k, i + 1, idx, out)?;
        }
        idx.pop();
    }
    Ok(())
}

fn compatible(plane: &Plane, a: &(Vec<Point>, Vec<Line>), b: &(Vec<Point>, Vec<Line>)) -> bool {
    let hits = |pts: &[Point], lines: &[Line]| pts.iter().any(|p| lines.iter().any(|l| plane.on(p, l)));
    !a.0.iter().any(|p| b.0.contains(p)) && !hits(&a.0, &b.1) && !hits(&b.0, &a.1)
}

fn clique(compat: &[Vec<u64>], cand: Vec<u64>, need: usize, chosen: &mut Vec<usize>) -> bool {
    if need == 0 {
        return true;
    }
    let count: u32 = cand.iter().map(|w| w.count_ones()).sum();
    if (count as usize) < need {
        return false;
    }
    let mut cand = cand;
    while let Some(w) = cand.iter().position(|&w| w != 0) {
        let v = w * 64 + cand[w].trailing_zeros() as usize;
        cand[w] &= cand[w] - 1;
        let next: Vec<u64> = cand.iter().zip(&compat[v]).map(|(a, b)| a & b).collect();
        chosen.push(v);
        if clique(compat, next, need - 1, chosen) {
            return true;
        }
        chosen.pop();
        if (cand.iter().map(|w| w.count_ones()).sum::<u32>() as usize) < need {
            return false;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcs::verify_local_arc;

    #[test]
    fn five_pairs_in_pg25() {
        let f = affine_seed_search(5, 2, 5).unwrap().unwrap();
        assert_eq!(f.sets().len(), 5);
        assert!(verify_local_arc(&f).is_accept());
        assert!(f.sets().iter().flatten().all(Point::is_affine));
    }

    #[test]
    fn impossible_target() {
        // the table maximum for q = 3, k = 2 is 4 overall
        assert!(affine_seed_search(3, 2, 5).unwrap().is_none());
    }
}
