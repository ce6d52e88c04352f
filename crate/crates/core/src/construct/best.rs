//! Run every applicable construction for (q, k) and keep the largest family
//! that verifies.

use std::fmt;

use crate::arcs::{LocalArcFamily, SetFamily};
use crate::gf::prime_power;
use crate::sdf::SdfBasis;

use super::generic::{affine_conic_partition, generic_k_arc};
use super::lift::{case1_lift, case2_lift, case3_lift, choose_m1_m2, lift_prime, Case3Params, LiftParams};
use super::{check_family, oval_partition, Check, CheckMode, ConstructError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Oval,
    /// Digit lifting with the basis of this modulus.
    LiftPrime(u64),
    Case1,
    Case2,
    Case3,
    Case4,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Oval => write!(f, "oval"),
            Method::LiftPrime(m) => write!(f, "lift-prime(m={m})"),
            Method::Case1 => write!(f, "case1"),
            Method::Case2 => write!(f, "case2"),
            Method::Case3 => write!(f, "case3"),
            Method::Case4 => write!(f, "case4"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub method: Method,
    /// Closed-form number of sets, or why the branch does not apply.
    pub sets: Result<u128, String>,
}

/// The winning family and the record of every branch tried.
pub struct Best {
    pub family: Box<dyn SetFamily + Send>,
    pub method: Method,
    pub candidates: Vec<Candidate>,
    pub check: Check,
}

impl fmt::Debug for Best {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Best")
            .field("method", &self.method)
            .field("sets", &self.family.num_sets())
            .field("candidates", &self.candidates)
            .field("check", &self.check)
            .finish()
    }
}

/// Largest affine seed in PG(2,p) with non-vertical secants: the affine
/// conic partition or a digit lifting when p is admissible.
fn prime_seed(p: u64, k: usize) -> Result<LocalArcFamily, ConstructError> {
    let mut best = affine_conic_partition(p, k)?;
    for basis in [SdfBasis::small(), SdfBasis::a205()] {
        let seed = generic_k_arc(k)?;
        if let Ok(lp) = LiftParams::new(&seed, &basis, p) {
            let n = lp.sets_per_seed();
            if n > best.sets().len() as u128 && n <= 1 << 20 {
                best = lift_prime(&seed, &basis, p)?.family.materialize();
            }
        }
    }
    Ok(best)
}

type Builder<'a> = Box<dyn FnOnce() -> Result<Box<dyn SetFamily + Send>, ConstructError> + 'a>;

/// Every applicable construction for q = p^m and k, largest verified wins.
pub fn best_construction(q: u64, k: usize) -> Result<Best, ConstructError> {
    let (p, m) = prime_power(q).ok_or(ConstructError::NotPrimePower(q))?;
    let mut candidates = Vec::new();
    let mut builders: Vec<(Method, u128, Builder)> = Vec::new();

    match oval_partition(q, k) {
        Ok(f) => {
            let n = f.sets().len() as u128;
            candidates.push(Candidate { method: Method::Oval, sets: Ok(n) });
            builders.push((Method::Oval, n, Box::new(move || Ok(Box::new(f) as Box<dyn SetFamily + Send>))));
        }
        Err(e) => candidates.push(Candidate { method: Method::Oval, sets: Err(e.to_string()) }),
    }

    if p > 2 && (k as u64) <= p {
        if m == 1 {
            for basis in [SdfBasis::small(), SdfBasis::a205()] {
                let method = Method::LiftPrime(basis.m());
                let seed = generic_k_arc(k)?;
                match LiftParams::new(&seed, &basis, p) {
                    Ok(lp) => {
                        let n = lp.sets_per_seed();
                        candidates.push(Candidate { method, sets: Ok(n) });
                        builders.push((
                            method,
                            n,
                            Box::new(move || Ok(Box::new(lift_prime(&seed, &basis, p)?.family) as Box<dyn SetFamily + Send>)),
                        ));
                    }
                    Err(e) => candidates.push(Candidate { method, sets: Err(e.to_string()) }),
                }
            }
        } else {
            let seed = prime_seed(p, k)?;
            let n0 = seed.sets().len() as u128;
            if m == 2 {
                let n = n0 * p as u128;
                candidates.push(Candidate { method: Method::Case1, sets: Ok(n) });
                builders.push((
                    Method::Case1,
                    n,
                    Box::new(move || Ok(Box::new(case1_lift(&seed)?.family) as Box<dyn SetFamily + Send>)),
                ));
            } else {
                let t = m / 2;
                if m % 2 == 0 {
                    let exp = if t % 2 == 1 { 5 * ((t + 1) / 2 - 1) } else { 5 * ((t + 1) / 2) - 3 };
                    let n = n0 * p as u128 * (p as u128).pow(exp);
                    candidates.push(Candidate { method: Method::Case2, sets: Ok(n) });
                    let s2 = seed.clone();
                    builders.push((
                        Method::Case2,
                        n,
                        Box::new(move || {
                            let mid = case1_lift(&s2)?.family.materialize();
                            Ok(Box::new(case2_lift(&mid, t)?.family) as Box<dyn SetFamily + Send>)
                        }),
                    ));
                }
                let method = if m % 2 == 1 { Method::Case3 } else { Method::Case4 };
                let (m1, m2) = choose_m1_m2(t);
                match Case3Params::from_m1_m2(p, m1, m2) {
                    Ok(params) if !params.a.is_empty() && (t == 1 || params.f_max > 0) => {
                        let even = (m - 1) / 2;
                        let odd = m - 1 - even;
                        let n = n0
                            * (params.f_max as u128).pow(t - 1)
                            * (p as u128).pow(odd)
                            * (params.a.len() as u128).pow(even);
                        candidates.push(Candidate { method, sets: Ok(n) });
                        builders.push((
                            method,
                            n,
                            Box::new(move || Ok(Box::new(case3_lift(&seed, m, &params)?.family) as Box<dyn SetFamily + Send>)),
                        ));
                    }
                    Ok(_) => candidates.push(Candidate { method, sets: Err("empty translation set".into()) }),
                    Err(e) => candidates.push(Candidate { method, sets: Err(e.to_string()) }),
                }
            }
        }
    }

    builders.sort_by(|a, b| b.1.cmp(&a.1));
    let mut last_err = None;
    for (method, _, build) in builders {
        match build() {
            Ok(family) => {
                let check = check_family(family.as_ref(), CheckMode::Auto);
                if check.passed() {
                    return Ok(Best { family, method, candidates, check });
                }
                last_err = Some(ConstructError::Arc(crate::arcs::ArcError::NotVerified(check.to_string())));
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or(ConstructError::KTooLarge { k, q }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_below_threshold_use_ovals() {
        for p in [11u64, 101, 997] {
            let b = best_construction(p, 2).unwrap();
            assert_eq!(b.method, Method::Oval);
            assert_eq!(b.family.num_sets() as u64, (p + 1) / 2);
            assert!(b.check.passed());
            assert!(b.candidates.iter().any(|c| matches!(c.method, Method::LiftPrime(_)) && c.sets.is_err()));
        }
    }

    #[test]
    fn q121_compares_counts() {
        for k in 2..=4usize {
            let b = best_construction(121, k).unwrap();
            let case1 = (11 / k as u128) * 11;
            let oval = 122 / k as u128;
            let want = if case1 > oval { Method::Case1 } else { Method::Oval };
            assert_eq!(b.method, want, "k={k}");
            assert!(b.check.passed());
        }
    }

    #[test]
    fn records_every_branch() {
        let b = best_construction(125, 2).unwrap();
        let methods: Vec<Method> = b.candidates.iter().map(|c| c.method).collect();
        assert!(methods.contains(&Method::Oval) && methods.contains(&Method::Case3));
        let b = best_construction(81, 2).unwrap();
        let methods: Vec<Method> = b.candidates.iter().map(|c| c.method).collect();
        assert!(methods.contains(&Method::Case2) && methods.contains(&Method::Case4));
        assert!(b.check.passed());
    }

    #[test]
    fn even_q_only_oval() {
        let b = best_construction(16, 3).unwrap();
        assert_eq!((b.method, b.family.num_sets()), (Method::Oval, 6));
    }
}
