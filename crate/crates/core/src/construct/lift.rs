//! Translation liftings: the digit lifting over a prime and the four
//! prime-power cases.

use crate::arcs::{secants_of, LocalArcFamily, SetFamily};
use crate::gf::{is_prime, next_prime_above, Fe, Field};
use crate::plane::{Line, Plane, Point, Presentation};
use crate::sdf::{sdf_subset, SdfBasis, SdfMethod};

use super::generic::{validate_generic, GenericSeed, IntPair};
use super::{ConstructError, TranslatedFamily, Translations};

/// A lifted family with the closed-form count it must match.
#[derive(Debug, Clone)]
pub struct Lifted {
    pub family: TranslatedFamily,
    pub closed_form: u128,
}

impl Lifted {
    /// Sets enumerated through the translation slots.
    pub fn enumerated(&self) -> u128 {
        self.family.num_sets() as u128
    }
}

/// Range of the x-component of a translation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XRange {
    /// Base-m digit numbers 0..=B, as the uniqueness step of the proof reads
    /// them. The default.
    Digits,
    /// [-B, B] as printed in the definition of T. Translations then collide:
    /// x*m^{t/2} - B and (x-1)*m^{t/2} + 1 agree, so sets overlap.
    Symmetric,
}

/// Parameters of the digit lifting for one (seed, basis, p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftParams {
    pub basis: SdfBasis,
    /// Prime the seed coordinates and secants fit below.
    pub r: u64,
    pub t: u32,
    pub b: u64,
    pub x_range: XRange,
}

impl LiftParams {
    pub fn new(seed: &GenericSeed, basis: &SdfBasis, p: u64) -> Result<LiftParams, ConstructError> {
        LiftParams::with_range(seed, basis, p, XRange::Digits)
    }

    pub fn with_range(seed: &GenericSeed, basis: &SdfBasis, p: u64, x_range: XRange) -> Result<LiftParams, ConstructError> {
        let r = lift_modulus(seed);
        let c = (r as u128).pow(2) + 3 * r as u128 + 1;
        let m = basis.m() as u128;
        let need = c * m * m;
        if (p as u128) < need {
            return Err(ConstructError::PTooSmall { p, need });
        }
        let mut t = 2u32;
        while c * m.pow(t + 2) <= p as u128 {
            t += 2;
        }
        let b = (m.pow(t / 2) - 1) as u64;
        Ok(LiftParams { basis: basis.clone(), r, t, b, x_range })
    }

    fn x_values(&self) -> std::ops::RangeInclusive<i128> {
        let b = self.b as i128;
        match self.x_range {
            XRange::Digits => 0..=b,
            XRange::Symmetric => -b..=b,
        }
    }

    /// |T|: (B+1) or (2B+1) x-values, times |A|^{t/2} m^{t/2}.
    pub fn sets_per_seed(&self) -> u128 {
        let m = self.basis.m() as u128;
        let a = self.basis.residues().len() as u128;
        let xs = self.x_values().count() as u128;
        xs * a.pow(self.t / 2) * m.pow(self.t / 2)
    }
}

/// A prime at least the seed's own r, its validity threshold and every
/// coordinate (points and secants), so that seed data lies in I_r^2.
fn lift_modulus(seed: &GenericSeed) -> u64 {
    let max = seed.sets.iter().chain(&seed.lines).flatten().flat_map(|&(x, y)| [x, y]).max().unwrap_or(0).max(0) as u64;
    let r = seed.r.max(seed.covering_prime());
    if r > max {
        r
    } else {
        next_prime_above(max)
    }
}

/// Digit lifting of a generic seed to PG(2,p).
pub fn lift_prime(seed: &GenericSeed, basis: &SdfBasis, p: u64) -> Result<Lifted, ConstructError> {
    lift_prime_with(seed, basis, p, XRange::Digits)
}

pub fn lift_prime_with(seed: &GenericSeed, basis: &SdfBasis, p: u64, x_range: XRange) -> Result<Lifted, ConstructError> {
    if !is_prime(p) {
        return Err(ConstructError::NotPrime(p));
    }
    let v = validate_generic(seed)?;
    if !v.ok() {
        return Err(ConstructError::InvalidSeed(v.notes.join("; ")));
    }
    let lp = LiftParams::with_range(seed, basis, p, x_range)?;
    let (m, r, t, b) = (basis.m() as u128, lp.r as u128, lp.t, lp.b as u128);
    let scale_x = m.pow(t / 2);
    let scale_y = m.pow(t);
    // |x - a| <= (r-1) m^{t/2} + 2B < (r+1) m^{t/2}, covering both ranges
    let dx = (r - 1) * scale_x + 2 * b;
    assert!(dx * dx < (r + 1).pow(2) * scale_y);
    assert!((r + 1).pow(2) * scale_y <= p as u128 - r * scale_y);

    let field = Field::prime(p)?;
    let plane = Plane::planar(field.clone())?;
    let red = |v: i128| Fe(v.rem_euclid(p as i128) as u32);
    let seeds: Vec<Vec<Point>> = seed
        .sets
        .iter()
        .map(|s| s.iter().map(|&(x, y)| Point::Affine(red(x as i128 * scale_x as i128), red(y as i128 * scale_y as i128))).collect())
        .collect();
    let translations = Translations::new(lift_slots(&lp).into_iter().map(|s| s.into_iter().map(|(x, y)| (red(x), red(y))).collect()).collect());
    let closed_form = seed.sets.len() as u128 * lp.sets_per_seed();
    Ok(Lifted { family: TranslatedFamily::new(plane, seeds, translations)?, closed_form })
}

/// Integer translation slots: x, then y digits 0..t-1.
fn lift_slots(lp: &LiftParams) -> Vec<Vec<(i128, i128)>> {
    let m = lp.basis.m() as i128;
    let mut slots = vec![lp.x_values().map(|x| (x, 0)).collect::<Vec<_>>()];
    for i in 0..lp.t {
        let w = m.pow(i);
        let digits: Vec<i128> =
            if i % 2 == 0 { lp.basis.residues().iter().map(|&a| a as i128).collect() } else { (0..m).collect() };
        slots.push(digits.into_iter().map(|d| (0, d * w)).collect());
    }
    slots
}

/// The un-reduced integer family of the lifting, with modulus p. Its
/// reduction is the lifted family.
pub fn lift_prime_integer(seed: &GenericSeed, basis: &SdfBasis, p: u64) -> Result<GenericSeed, ConstructError> {
    let lp = LiftParams::new(seed, basis, p)?;
    let m = basis.m() as i64;
    let (sx, sy) = (m.pow(lp.t / 2), m.pow(lp.t));
    let slots = lift_slots(&lp);
    let sizes: Vec<usize> = slots.iter().map(Vec::len).collect();
    let total: usize = sizes.iter().product();
    let mut sets = Vec::with_capacity(total * seed.sets.len());
    let mut lines = Vec::with_capacity(sets.capacity());
    for mut i in 0..total {
        let (mut u, mut v) = (0i64, 0i64);
        for (slot, &n) in slots.iter().zip(&sizes).rev() {
            u += slot[i % n].0 as i64;
            v += slot[i % n].1 as i64;
            i /= n;
        }
        let mv = |&(x, y): &IntPair, s: (i64, i64)| (x * s.0 + u, y * s.1 + v);
        for (s, l) in seed.sets.iter().zip(&seed.lines) {
            sets.push(s.iter().map(|pt| mv(pt, (sx, sy))).collect());
            lines.push(l.iter().map(|ln| mv(ln, (sx, sy))).collect());
        }
    }
    Ok(GenericSeed { sets, lines, r: p })
}

fn check_affine_seed(seed: &LocalArcFamily) -> Result<(), ConstructError> {
    let plane = seed.plane();
    for s in seed.sets() {
        if s.iter().any(|p| !p.is_affine()) {
            return Err(ConstructError::NonAffineSeed);
        }
        if secants_of(plane, s)?.iter().any(|l| !matches!(l, Line::NonVertical(..))) {
            return Err(ConstructError::NonAffineSeed);
        }
    }
    Ok(())
}

fn prime_seed(seed: &LocalArcFamily) -> Result<u64, ConstructError> {
    let plane = seed.plane();
    let f = plane.field();
    if plane.presentation() != Presentation::Planar || f.degree() != 1 {
        return Err(ConstructError::SeedNotPlanar);
    }
    check_affine_seed(seed)?;
    Ok(f.characteristic())
}

/// m = 2: translate by (0, g α) for g in GF(p), GF(p^2) = GF(p)[α].
pub fn case1_lift(seed: &LocalArcFamily) -> Result<Lifted, ConstructError> {
    let p = prime_seed(seed)?;
    let field = Field::new(p, 2, false)?;
    let alpha = field.generator().expect("degree 2");
    let slot = field.elements().take(p as usize).map(|g| (Fe::ZERO, field.mul(g, alpha))).collect();
    let closed_form = seed.sets().len() as u128 * p as u128;
    let plane = Plane::planar(field)?;
    let family = TranslatedFamily::new(plane, seed.sets().to_vec(), Translations::new(vec![slot]))?;
    Ok(Lifted { family, closed_form })
}

/// m = 2t, t >= 2, over the tower GF(p^2)[θ]. Even g-indices range over
/// β·GF(p) for a primitive β of GF(p^2), which is a nonsquare there.
pub fn case2_lift(seed: &LocalArcFamily, t: u32) -> Result<Lifted, ConstructError> {
    let plane = seed.plane();
    let base = plane.field();
    if plane.presentation() != Presentation::Planar || base.degree() != 2 || base.is_tower() {
        return Err(ConstructError::NotTower);
    }
    if t < 2 {
        return Err(ConstructError::InvalidM(2 * t));
    }
    check_affine_seed(seed)?;
    let p = base.characteristic();
    let tower = Field::new(p, 2 * t, true)?;
    assert_eq!(tower.base().expect("tower").spec(), base.spec(), "seed field must be the tower's base");
    let theta = tower.generator().expect("relative degree t");
    let beta = base.primitive_element();
    debug_assert!(!base.is_square(beta));

    let s = (t + 1) / 2;
    let powers: Vec<Fe> = (0..t).map(|i| tower.pow(theta, i as u64)).collect();
    let mut slots = Vec::new();
    for i in 1..s {
        slots.push(base.elements().map(|c| (tower.mul(c, powers[i as usize]), Fe::ZERO)).collect());
    }
    for i in 1..t {
        let coeffs: Vec<Fe> = if i % 2 == 0 {
            base.elements().take(p as usize).map(|c| base.mul(beta, c)).collect()
        } else {
            base.elements().collect()
        };
        slots.push(coeffs.into_iter().map(|c| (Fe::ZERO, tower.mul(c, powers[i as usize]))).collect());
    }
    let pp = p as u128;
    let exp = if t % 2 == 1 { 5 * (s - 1) } else { 5 * s - 3 };
    let closed_form = seed.sets().len() as u128 * pp.pow(exp);
    let family = TranslatedFamily::new(Plane::planar(tower)?, seed.sets().to_vec(), Translations::new(slots))?;
    Ok(Lifted { family, closed_form })
}

const M_EPS: f64 = 1e-6;

fn m2_of(m1: f64) -> f64 {
    (4.0f64).max(4.0 * m1 / (m1 - 2.0)) * (1.0 + M_EPS)
}

/// Minimize M1^t M2^{(t-1)/2} with M2 tied to M1 by the constraint.
pub fn choose_m1_m2(t: u32) -> (f64, f64) {
    assert!(t >= 1, "t must be positive");
    if t == 1 {
        let m1 = 2.001;
        return (m1, m2_of(m1));
    }
    let tf = t as f64;
    let obj = |m1: f64| tf * m1.ln() + (tf - 1.0) / 2.0 * m2_of(m1).ln();
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (2.0 + 1e-12, 100.0);
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    while hi - lo > 1e-9 {
        if obj(c) < obj(d) {
            hi = d;
        } else {
            lo = c;
        }
        c = hi - g * (hi - lo);
        d = lo + g * (hi - lo);
    }
    let m1 = (lo + hi) / 2.0;
    (m1, m2_of(m1))
}

/// Translation data of Cases III and IV: f-coefficients from {1..f_max}
/// and even g-coefficients from `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Case3Params {
    pub f_max: u64,
    pub a: Vec<u64>,
}

impl Case3Params {
    /// A = sdf_subset(floor(p/M1)) and f_max = floor(sqrt(p/M2)).
    pub fn from_m1_m2(p: u64, m1: f64, m2: f64) -> Result<Case3Params, ConstructError> {
        if !(m1 >= 2.0 && m2 >= 4.0 && 4.0 / m2 < 1.0 - 2.0 / m1) {
            return Err(ConstructError::InvalidM1M2 { m1, m2 });
        }
        let n = (p as f64 / m1).floor() as u64;
        let a = if n == 0 { Vec::new() } else { sdf_subset(n, SdfMethod::Auto, None)? };
        let mut f_max = (p as f64 / m2).sqrt().floor() as u64;
        while (f_max + 1) as f64 * (f_max + 1) as f64 * m2 <= p as f64 {
            f_max += 1;
        }
        while f_max > 0 && f_max as f64 * f_max as f64 * m2 > p as f64 {
            f_max -= 1;
        }
        Ok(Case3Params { f_max, a })
    }

    /// M2 from M1 through the constraint, as choose_m1_m2 does.
    pub fn from_m1(p: u64, m1: f64) -> Result<Case3Params, ConstructError> {
        Case3Params::from_m1_m2(p, m1, m2_of(m1))
    }
}

/// m = 2t+1 (Case III) or m = 2t with t >= 2 (Case IV), over GF(p)[α].
/// `a` is used as given; the lifting is only a local arc when it is
/// square-difference-free.
pub fn case3_lift(seed: &LocalArcFamily, m: u32, params: &Case3Params) -> Result<Lifted, ConstructError> {
    let p = prime_seed(seed)?;
    if m < 3 {
        return Err(ConstructError::InvalidM(m));
    }
    if params.a.is_empty() {
        return Err(ConstructError::EmptySdf);
    }
    let t = m / 2;
    if t > 1 && params.f_max == 0 {
        return Err(ConstructError::EmptyTranslations);
    }
    let field = Field::new(p, m, false)?;
    let alpha = field.generator().expect("degree at least 3");
    let powers: Vec<Fe> = (0..m).map(|i| field.pow(alpha, i as u64)).collect();
    let int = |c: u64| field.int((c % p) as i64);
    let mut slots = Vec::new();
    for i in 1..t {
        slots.push((1..=params.f_max).map(|c| (field.mul(int(c), powers[i as usize]), Fe::ZERO)).collect());
    }
    let (mut odd, mut even) = (0u32, 0u32);
    for i in 1..m {
        let coeffs: Vec<u64> = if i % 2 == 0 {
            even += 1;
            params.a.clone()
        } else {
            odd += 1;
            (0..p).collect()
        };
        slots.push(coeffs.into_iter().map(|c| (Fe::ZERO, field.mul(int(c), powers[i as usize]))).collect());
    }
    let closed_form = seed.sets().len() as u128
        * (params.f_max as u128).pow(t - 1)
        * (p as u128).pow(odd)
        * (params.a.len() as u128).pow(even);
    let family = TranslatedFamily::new(Plane::planar(field)?, seed.sets().to_vec(), Translations::new(slots))?;
    Ok(Lifted { family, closed_form })
}
