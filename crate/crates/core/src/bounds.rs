//! Closed-form upper bounds and the lower-bound exponents, in exact integer
//! arithmetic wherever the formula floors.

use num_rational::Ratio;
use thiserror::Error;

use crate::gf::prime_power;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("k must be at least 2, got {0}")]
    InvalidK(u64),
    #[error("radicand is negative for q = {q}, k = {k}")]
    NegativeRadicand { q: u64, k: u64 },
    #[error("invalid parameters q = {q}, k = {k}, t = {t}")]
    InvalidParams { q: u64, k: u64, t: u64 },
    #[error("the exponent is not defined for m = {0}")]
    UndefinedCase(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// q^{3/2} + q + 1 on induced matchings.
    Trivial,
    /// The earlier bound for 4-uniform local arcs.
    Fftc,
    /// Expander-mixing bound.
    Eml,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub q: u64,
    pub k: Option<u64>,
    /// Bound on the number of sets.
    pub sets: u64,
    /// Bound on the number of points, when k is known.
    pub points: Option<u64>,
}

fn check_q(q: u64) -> Result<(), BoundError> {
    prime_power(q).map(|_| ()).ok_or(BoundError::NotPrimePower(q))
}

fn isqrt(n: i128) -> i128 {
    (n as u128).isqrt() as i128
}

pub fn trivial_upper(q: u64) -> Result<BoundReport, BoundError> {
    check_q(q)?;
    let sets = (q as u128 * q as u128 * q as u128).isqrt() as u64 + q + 1;
    Ok(BoundReport { kind: BoundKind::Trivial, q, k: None, sets, points: None })
}

/// 4 * floor((7q + 3 + floor(sqrt(24q^3 + q^2 - 6q - 63))) / 24)
pub fn fftc_upper(q: u64) -> Result<BoundReport, BoundError> {
    let qq = q as i128;
    let rad = 24 * qq * qq * qq + qq * qq - 6 * qq - 63;
    if rad < 0 {
        return Err(BoundError::NegativeRadicand { q, k: 4 });
    }
    check_q(q)?;
    let sets = ((7 * qq + 3 + isqrt(rad)) / 24) as u64;
    Ok(BoundReport { kind: BoundKind::Fftc, q, k: Some(4), sets, points: Some(4 * sets) })
}

/// k * floor((4(k-1) + (3k-5)q + floor(sqrt(q(8(k-1)(q^2+k-2) - q(7k^2-10k-1))))) / (2k(k-1)))
pub fn eml_upper(k: u64, q: u64) -> Result<BoundReport, BoundError> {
    if k < 2 {
        return Err(BoundError::InvalidK(k));
    }
    check_q(q)?;
    let (kk, qq) = (k as i128, q as i128);
    let rad = qq * (8 * (kk - 1) * (qq * qq + kk - 2) - qq * (7 * kk * kk - 10 * kk - 1));
    if rad < 0 {
        return Err(BoundError::NegativeRadicand { q, k });
    }
    let num = 4 * (kk - 1) + (3 * kk - 5) * qq + isqrt(rad);
    let sets = (num / (2 * kk * (kk - 1))) as u64;
    Ok(BoundReport { kind: BoundKind::Eml, q, k: Some(k), sets, points: Some(k * sets) })
}

/// k + (q+1-k)q/t for a t-quasiarc meeting some line in k points.
pub fn quasiarc_upper(q: u64, k: u64, t: u64) -> Result<Ratio<u64>, BoundError> {
    if t == 0 || k > q + 1 {
        return Err(BoundError::InvalidParams { q, k, t });
    }
    Ok(Ratio::from_integer(k) + Ratio::new((q + 1 - k) * q, t))
}

/// Exponent d in the Omega(q^d) lower bound for q = p^m.
pub fn lower_exponent(m: u32) -> Result<f64, BoundError> {
    let mf = m as f64;
    match m {
        0 | 4 => Err(BoundError::UndefinedCase(m)),
        1 => Ok(1.2334),
        2 => Ok(1.1167),
        _ if m % 2 == 1 => Ok(1.1167 - 0.3833 / mf),
        _ if m % 4 == 2 => Ok(1.25 - 0.0166 / mf),
        _ => Ok(1.25 - 0.7666 / mf),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompareRow {
    pub q: u64,
    pub k: u64,
    pub trivial: u64,
    /// Only for k = 4.
    pub fftc: Option<u64>,
    pub eml: Option<u64>,
}

impl CompareRow {
    pub fn eml_below_fftc(&self) -> Option<bool> {
        Some(self.eml? < self.fftc?)
    }

    /// Smallest available bound on the number of sets.
    pub fn min(&self) -> u64 {
        [Some(self.trivial), self.fftc, self.eml].into_iter().flatten().min().unwrap()
    }

    pub fn tsv(&self) -> String {
        let opt = |v: Option<u64>| v.map_or("-".to_string(), |x| x.to_string());
        format!("{}\t{}\t{}\t{}\t{}\t{}", self.q, self.k, self.trivial, opt(self.fftc), opt(self.eml), self.min())
    }
}

pub const TSV_HEADER: &str = "q\tk\ttrivial\tfftc\teml\tmin";

pub fn bound_row(k: u64, q: u64) -> Result<CompareRow, BoundError> {
    if k < 2 {
        return Err(BoundError::InvalidK(k));
    }
    let trivial = trivial_upper(q)?.sets;
    let fftc = if k == 4 { Some(fftc_upper(q)?.sets) } else { None };
    let eml = match eml_upper(k, q) {
        Ok(r) => Some(r.sets),
        Err(BoundError::NegativeRadicand { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(CompareRow { q, k, trivial, fftc, eml })
}

/// One row per prime power q in [2, q_max].
pub fn compare_upper_bounds(k: u64, q_max: u64) -> Result<Vec<CompareRow>, BoundError> {
    (2..=q_max).filter(|&q| prime_power(q).is_some()).map(|q| bound_row(k, q)).collect()
}

/// Prime powers where the expander-mixing bound is not strictly below the
/// earlier 4-uniform bound.
pub fn fftc_exceptions(rows: &[CompareRow]) -> Vec<u64> {
    rows.iter().filter(|r| r.eml_below_fftc() == Some(false)).map(|r| r.q).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::Plane;

    #[test]
    fn trivial_values() {
        assert_eq!(trivial_upper(4).unwrap().sets, 13);
        assert_eq!(trivial_upper(9).unwrap().sets, 37);
        assert_eq!(trivial_upper(2).unwrap().sets, 5);
        assert_eq!(trivial_upper(6), Err(BoundError::NotPrimePower(6)));
    }

    #[test]
    fn fftc_values() {
        let r = fftc_upper(7).unwrap();
        assert_eq!((r.sets, r.points), (5, Some(20)));
        assert_eq!(fftc_upper(2).unwrap().sets, 1);
        assert_eq!(fftc_upper(3).unwrap().points, Some(8));
        assert!(matches!(fftc_upper(1), Err(BoundError::NegativeRadicand { .. })));
    }

    #[test]
    fn eml_values() {
        let r = eml_upper(2, 2).unwrap();
        assert_eq!((r.sets, r.points), (3, Some(6)));
        assert_eq!(eml_upper(3, 4).unwrap().points, Some(12));
        assert_eq!(eml_upper(4, 7).unwrap().points, Some(20));
        assert_eq!(eml_upper(1, 7), Err(BoundError::InvalidK(1)));
    }

    #[test]
    fn quasiarc_values() {
        assert_eq!(quasiarc_upper(5, 2, 2).unwrap(), Ratio::from_integer(12));
        let r = quasiarc_upper(7, 3, 2).unwrap();
        assert_eq!(r, Ratio::new(41, 2));
        assert_eq!(r.floor().to_integer(), 20);
        assert_eq!(quasiarc_upper(7, 3, 7 * 5).unwrap(), Ratio::from_integer(4));
        assert!(quasiarc_upper(7, 9, 1).is_err());
    }

    #[test]
    fn exponents() {
        assert_eq!(lower_exponent(1).unwrap(), 1.2334);
        assert_eq!(lower_exponent(2).unwrap(), 1.1167);
        assert!((lower_exponent(6).unwrap() - 1.247233).abs() < 1e-6);
        assert!((lower_exponent(3).unwrap() - (1.1167 - 0.3833 / 3.0)).abs() < 1e-12);
        assert!((lower_exponent(8).unwrap() - (1.25 - 0.7666 / 8.0)).abs() < 1e-12);
        assert_eq!(lower_exponent(4), Err(BoundError::UndefinedCase(4)));
    }

    #[test]
    fn comparison_exceptions() {
        let rows = compare_upper_bounds(4, 1024).unwrap();
        assert_eq!(fftc_exceptions(&rows), vec![2, 4, 5, 7, 11, 16]);
        let r3 = rows.iter().find(|r| r.q == 3).unwrap();
        assert_eq!((r3.eml, r3.fftc), (Some(1), Some(2)));
        let r7 = rows.iter().find(|r| r.q == 7).unwrap();
        assert_eq!(r7.eml, r7.fftc);
    }

    #[test]
    fn eml_never_exceeds_trivial() {
        for k in 3..=12 {
            for r in compare_upper_bounds(k, 1024).unwrap() {
                if let Some(e) = r.eml {
                    assert!(e <= r.trivial, "k={k} q={}", r.q);
                }
            }
        }
    }

    /// N N^T = qI + J for the point-line incidence matrix N, which gives the
    /// square of the bipartite adjacency matrix blockwise.
    #[test]
    fn incidence_matrix_square() {
        for q in [2u64, 3] {
            let pl = Plane::homogeneous(crate::gf::Field::prime(q).unwrap());
            let pts = pl.points();
            let lines = pl.lines();
            let n: Vec<Vec<u64>> = pts.iter().map(|p| lines.iter().map(|l| pl.on(p, l) as u64).collect()).collect();
            let v = pts.len();
            for i in 0..v {
                for j in 0..v {
                    let pp: u64 = (0..v).map(|c| n[i][c] * n[j][c]).sum();
                    let ll: u64 = (0..v).map(|r| n[r][i] * n[r][j]).sum();
                    let want = if i == j { q + 1 } else { 1 };
                    assert_eq!(pp, want);
                    assert_eq!(ll, want);
                }
            }
        }
    }
}
