//! Dense univariate polynomials over a [`Field`], little-endian `Vec<Fe>`.

use super::{Fe, Field};

fn trim(mut a: Vec<Fe>) -> Vec<Fe> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

pub(super) fn mul(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Fe::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

fn sub(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(Fe::ZERO);
            let y = b.get(i).copied().unwrap_or(Fe::ZERO);
            f.sub(x, y)
        })
        .collect();
    trim(out)
}

/// Remainder of `a` modulo a nonzero `m`.
pub(super) fn rem(f: &Field, a: &[Fe], m: &[Fe]) -> Vec<Fe> {
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = f.inv(m[dm]).expect("nonzero leading coefficient");
    let mut r = trim(a.to_vec());
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = f.mul(*r.last().unwrap(), lead_inv);
        for (i, &mc) in m.iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, mc));
        }
        r = trim(r);
    }
    r
}

fn gcd(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    a
}

fn powmod(f: &Field, a: &[Fe], mut e: u64, m: &[Fe]) -> Vec<Fe> {
    let mut base = rem(f, a, m);
    let mut acc = vec![Fe::ONE];
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(f, &mul(f, &acc, &base), m);
        }
        base = rem(f, &mul(f, &base, &base), m);
        e >>= 1;
    }
    acc
}

/// Ben-Or test: a monic `g` of degree d is irreducible iff
/// gcd(g, x^(b^i) - x) = 1 for every i <= d/2, b the base order.
pub(super) fn is_irreducible(f: &Field, g: &[Fe]) -> bool {
    let d = g.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    if g[0].is_zero() {
        return false;
    }
    let x = vec![Fe::ZERO, Fe::ONE];
    let mut h = x.clone();
    for _ in 1..=d / 2 {
        h = powmod(f, &h, f.order(), g);
        let diff = sub(f, &h, &x);
        if gcd(f, g, &diff).len() > 1 {
            return false;
        }
    }
    true
}

/// The monic irreducible polynomial of degree `d` whose lower coefficients,
/// read as a base-|F| integer, are smallest.
pub(super) fn smallest_irreducible(f: &Field, d: usize) -> Option<Vec<Fe>> {
    let b = f.order();
    let total = b.checked_pow(d as u32)?;
    (0..total).find_map(|idx| {
        let mut g = Vec::with_capacity(d + 1);
        let mut v = idx;
        for _ in 0..d {
            g.push(Fe((v % b) as u32));
            v /= b;
        }
        g.push(Fe::ONE);
        is_irreducible(f, &g).then_some(g)
    })
}
