//! Square-difference-free sets, over the integers and modulo m.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SdfError {
    #[error("residue {0} is outside [0, {1})")]
    OutOfRange(u64, u64),
    #[error("({m}, {a:?}) is not square-difference-free modulo m")]
    InvalidBasis { m: u64, a: Vec<u64> },
    #[error("digit count must be even and at least 2, got {0}")]
    InvalidT(u32),
    #[error("construction output is not square-difference-free")]
    NotSdf,
    #[error("exhaustive search is limited to N <= {MAX_BRUTE_N}, got {0}")]
    TooLarge(u64),
    #[error("construction would have {0} elements")]
    TooMany(u128),
}

pub const MAX_BRUTE_N: u64 = 60;
/// Digit outputs up to this size are re-checked pairwise.
const REVERIFY_LIMIT: usize = 10_000;
const DIGIT_OUTPUT_LIMIT: u128 = 50_000_000;

/// Residue set of the squares modulo `m`.
pub fn squares_mod(m: u64) -> Vec<bool> {
    let mut sq = vec![false; m as usize];
    for z in 0..m {
        sq[((z as u128 * z as u128) % m as u128) as usize] = true;
    }
    sq
}

pub fn is_sdf_mod(a: &[u64], m: u64) -> Result<bool, SdfError> {
    if let Some(&x) = a.iter().find(|&&x| x >= m) {
        return Err(SdfError::OutOfRange(x, m));
    }
    let sq = squares_mod(m);
    for (i, &x) in a.iter().enumerate() {
        for &y in &a[i + 1..] {
            if x == y {
                continue;
            }
            if sq[((x + m - y) % m) as usize] || sq[((y + m - x) % m) as usize] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn is_square(n: u64) -> bool {
    let r = n.isqrt();
    r * r == n
}

/// No positive difference of two elements is a perfect square.
pub fn is_sdf_int(a: &[u64]) -> bool {
    let mut v = a.to_vec();
    v.sort_unstable();
    v.dedup();
    v.iter().enumerate().all(|(i, &x)| v[i + 1..].iter().all(|&y| !is_square(y - x)))
}

/// A residue set that is square-difference-free modulo `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SdfBasis {
    m: u64,
    a: Vec<u64>,
}

impl SdfBasis {
    pub fn new(m: u64, mut a: Vec<u64>) -> Result<SdfBasis, SdfError> {
        a.sort_unstable();
        a.dedup();
        if m < 2 || a.is_empty() || !is_sdf_mod(&a, m)? {
            return Err(SdfError::InvalidBasis { m, a });
        }
        Ok(SdfBasis { m, a })
    }

    /// The twelve-element set modulo 205.
    pub fn a205() -> SdfBasis {
        SdfBasis::new(205, A205.to_vec()).expect("known basis")
    }

    /// The small basis ({0, 2} modulo 5).
    pub fn small() -> SdfBasis {
        SdfBasis::new(5, vec![0, 2]).expect("known basis")
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn residues(&self) -> &[u64] {
        &self.a
    }

    /// log_m sqrt|A| + 1, the growth exponent of the prime construction.
    pub fn exponent(&self) -> f64 {
        1.0 + (self.a.len() as f64).sqrt().ln() / (self.m as f64).ln()
    }
}

pub const A205: [u64; 12] = [0, 2, 8, 14, 77, 79, 85, 96, 103, 109, 111, 181];

fn is_squarefree(mut n: u64) -> bool {
    let mut d = 2;
    while d * d <= n {
        if n % (d * d) == 0 {
            return false;
        }
        if n % d == 0 {
            n /= d;
        }
        d += 1;
    }
    true
}

/// Base-m digit sums with even-position digits in A and odd-position
/// digits free, for t digits. Sorted.
pub fn digit_construct(basis: &SdfBasis, t: u32) -> Result<Vec<u64>, SdfError> {
    if t < 2 || t % 2 == 1 {
        return Err(SdfError::InvalidT(t));
    }
    let m = basis.m;
    let count = (basis.a.len() as u128 * m as u128).pow(t / 2);
    if count > DIGIT_OUTPUT_LIMIT || (m as u128).pow(t) > u64::MAX as u128 {
        return Err(SdfError::TooMany(count));
    }
    let mut out = vec![0u64];
    let mut place = 1u64;
    for i in 0..t {
        let digits: Vec<u64> = if i % 2 == 0 { basis.a.clone() } else { (0..m).collect() };
        out = out.iter().flat_map(|&v| digits.iter().map(move |&d| v + d * place)).collect();
        place = place.saturating_mul(m);
    }
    out.sort_unstable();
    // An odd lowest differing digit only rules out squares when m is
    // squarefree, so other moduli are always re-checked.
    if (!is_squarefree(m) || out.len() <= REVERIFY_LIMIT) && !is_sdf_int(&out) {
        return Err(SdfError::NotSdf);
    }
    Ok(out)
}

/// Largest square-difference-free subset of {1..N}; lexicographically
/// smallest among the largest.
pub fn max_sdf_bruteforce(n: u64) -> Result<Vec<u64>, SdfError> {
    if n > MAX_BRUTE_N {
        return Err(SdfError::TooLarge(n));
    }
    let n = n as usize;
    if n == 0 {
        return Ok(Vec::new());
    }
    // bit i stands for the integer i + 1
    let allowed: Vec<u64> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i && !is_square(i.abs_diff(j) as u64)).fold(0u64, |acc, j| acc | 1 << j))
        .collect();
    let above = |i: usize| if i + 1 >= 64 { 0 } else { !0u64 << (i + 1) };
    let full = if n == 64 { !0 } else { (1u64 << n) - 1 };

    // Russian-doll bounds: best[i] is the maximum with all elements >= i + 1.
    let mut best = vec![0usize; n + 1];
    let mut stack = Vec::new();
    for i in (0..n).rev() {
        let target = best[i + 1] + 1;
        stack.clear();
        stack.push(i);
        let found = extend(&allowed, &best, &mut stack, allowed[i] & above(i) & full, target);
        best[i] = if found { target } else { best[i + 1] };
    }
    stack.clear();
    let found = extend(&allowed, &best, &mut stack, full, best[0]);
    debug_assert!(found);
    Ok(stack.iter().map(|&i| i as u64 + 1).collect())
}

fn extend(allowed: &[u64], best: &[usize], stack: &mut Vec<usize>, mut cand: u64, target: usize) -> bool {
    if stack.len() == target {
        return true;
    }
    while cand != 0 {
        let j = cand.trailing_zeros() as usize;
        if stack.len() + (cand.count_ones() as usize) < target || stack.len() + best[j] < target {
            return false;
        }
        stack.push(j);
        let next = cand & allowed[j] & if j + 1 >= 64 { 0 } else { !0u64 << (j + 1) };
        if extend(allowed, best, stack, next, target) {
            return true;
        }
        stack.pop();
        cand &= !(1u64 << j);
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdfMethod {
    /// Brute force up to the guard, digits beyond.
    Auto,
    Digits,
    BruteForce,
}

/// A square-difference-free subset of {1..N}.
pub fn sdf_subset(n: u64, method: SdfMethod, basis: Option<&SdfBasis>) -> Result<Vec<u64>, SdfError> {
    let brute = match method {
        SdfMethod::Auto => n <= MAX_BRUTE_N,
        SdfMethod::Digits => false,
        SdfMethod::BruteForce => true,
    };
    if brute {
        return max_sdf_bruteforce(n);
    }
    let bases = match basis {
        Some(b) => vec![b.clone()],
        None => vec![SdfBasis::a205(), SdfBasis::small()],
    };
    let mut best: Vec<u64> = Vec::new();
    for b in &bases {
        let mut t = 2;
        loop {
            let out = match digit_construct(b, t) {
                Ok(v) => v,
                Err(SdfError::TooMany(_)) => break,
                Err(e) => return Err(e),
            };
            let cut: Vec<u64> = out.iter().filter(|&&v| v < n).map(|v| v + 1).collect();
            if cut.len() > best.len() {
                best = cut;
            }
            if (b.m as u128).pow(t) >= n as u128 {
                break;
            }
            t += 2;
        }
    }
    if best.is_empty() && n >= 1 {
        best.push(1);
    }
    Ok(best)
}
