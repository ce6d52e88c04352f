//! PG(2,q) in two presentations.
//!
//! *Planar*: the coordinatization by the planar function x^2 (odd q only).
//! Points are `(x,y)`, `(z)` and `(inf)`; lines are `[a,b]`, `[c]` and
//! `[inf]`. `(x,y)` lies on `[a,b]` iff `y - b = (x - a)^2`, on `[c]` iff
//! `x = c`; `(z)` lies on `[a,b]` iff `z = a` and on `[inf]`; `(inf)` lies on
//! every `[c]` and on `[inf]`.
//!
//! *Homogeneous*: nonzero triples up to scalars, normalized so the first
//! nonzero coordinate is 1, with incidence given by the dot product.
//!
//! The shear `(x, y) -> (x, y - x^2)` carries the planar presentation onto
//! the affine part of the homogeneous one.

mod literal;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{Fe, Field};

pub use literal::{format_line, format_point, parse_line, parse_point};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlaneError {
    #[error("the planar presentation needs odd characteristic")]
    EvenCharPlanar,
    #[error("object does not belong to the {0:?} presentation")]
    PresentationMismatch(Presentation),
    #[error("coordinates outside the field or not normalized")]
    InvalidCoordinates,
    #[error("the two points coincide")]
    SamePoint,
    #[error("the two lines coincide")]
    SameLine,
    #[error("cannot parse literal {0:?}")]
    BadLiteral(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Presentation {
    Planar,
    Homogeneous,
}

/// Points are ordered by variant, then by coordinate encodings. This is the
/// canonical order used for every "smallest" choice in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Affine(Fe, Fe),
    Slope(Fe),
    Infinity,
    Hom([Fe; 3]),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Line {
    NonVertical(Fe, Fe),
    Vertical(Fe),
    AtInfinity,
    Hom([Fe; 3]),
}

impl Point {
    pub fn presentation(&self) -> Presentation {
        match self {
            Point::Hom(_) => Presentation::Homogeneous,
            _ => Presentation::Planar,
        }
    }

    pub fn is_affine(&self) -> bool {
        matches!(self, Point::Affine(..))
    }
}

impl Line {
    pub fn presentation(&self) -> Presentation {
        match self {
            Line::Hom(_) => Presentation::Homogeneous,
            _ => Presentation::Planar,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plane {
    field: Field,
    presentation: Presentation,
}

impl Plane {
    pub fn new(field: Field, presentation: Presentation) -> Result<Plane, PlaneError> {
        if presentation == Presentation::Planar && field.characteristic() == 2 {
            return Err(PlaneError::EvenCharPlanar);
        }
        Ok(Plane { field, presentation })
    }

    pub fn planar(field: Field) -> Result<Plane, PlaneError> {
        Plane::new(field, Presentation::Planar)
    }

    pub fn homogeneous(field: Field) -> Plane {
        Plane { field, presentation: Presentation::Homogeneous }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn presentation(&self) -> Presentation {
        self.presentation
    }

    pub fn q(&self) -> u64 {
        self.field.order()
    }

    pub fn num_points(&self) -> usize {
        let q = self.q() as usize;
        q * q + q + 1
    }

    /// The same plane in the other presentation.
    pub fn twin(&self) -> Result<Plane, PlaneError> {
        match self.presentation {
            Presentation::Planar => Ok(Plane::homogeneous(self.field.clone())),
            Presentation::Homogeneous => Plane::planar(self.field.clone()),
        }
    }

    fn check_point(&self, p: &Point) -> Result<(), PlaneError> {
        let f = &self.field;
        let ok = match (self.presentation, p) {
            (Presentation::Planar, Point::Affine(x, y)) => f.contains(*x) && f.contains(*y),
            (Presentation::Planar, Point::Slope(z)) => f.contains(*z),
            (Presentation::Planar, Point::Infinity) => true,
            (Presentation::Homogeneous, Point::Hom(c)) => is_normalized(f, c),
            _ => return Err(PlaneError::PresentationMismatch(self.presentation)),
        };
        ok.then_some(()).ok_or(PlaneError::InvalidCoordinates)
    }

    fn check_line(&self, l: &Line) -> Result<(), PlaneError> {
        let f = &self.field;
        let ok = match (self.presentation, l) {
            (Presentation::Planar, Line::NonVertical(a, b)) => f.contains(*a) && f.contains(*b),
            (Presentation::Planar, Line::Vertical(c)) => f.contains(*c),
            (Presentation::Planar, Line::AtInfinity) => true,
            (Presentation::Homogeneous, Line::Hom(c)) => is_normalized(f, c),
            _ => return Err(PlaneError::PresentationMismatch(self.presentation)),
        };
        ok.then_some(()).ok_or(PlaneError::InvalidCoordinates)
    }

    pub fn validate_point(&self, p: &Point) -> Result<(), PlaneError> {
        self.check_point(p)
    }

    pub fn validate_line(&self, l: &Line) -> Result<(), PlaneError> {
        self.check_line(l)
    }

    /// Normalized homogeneous point; `None` for the zero vector.
    pub fn hom_point(&self, c: [Fe; 3]) -> Option<Point> {
        normalize(&self.field, c).map(Point::Hom)
    }

    pub fn hom_line(&self, c: [Fe; 3]) -> Option<Line> {
        normalize(&self.field, c).map(Line::Hom)
    }

    pub fn incident(&self, p: &Point, l: &Line) -> Result<bool, PlaneError> {
        self.check_point(p)?;
        self.check_line(l)?;
        Ok(self.on(p, l))
    }

    /// Incidence without validation.
    pub(crate) fn on(&self, p: &Point, l: &Line) -> bool {
        let f = &self.field;
        match (p, l) {
            (Point::Affine(x, y), Line::NonVertical(a, b)) => f.sub(*y, *b) == f.square(f.sub(*x, *a)),
            (Point::Affine(x, _), Line::Vertical(c)) => x == c,
            (Point::Affine(..), Line::AtInfinity) => false,
            (Point::Slope(z), Line::NonVertical(a, _)) => z == a,
            (Point::Slope(_), Line::Vertical(_)) => false,
            (Point::Slope(_), Line::AtInfinity) => true,
            (Point::Infinity, Line::NonVertical(..)) => false,
            (Point::Infinity, Line::Vertical(_) | Line::AtInfinity) => true,
            (Point::Hom(u), Line::Hom(v)) => dot(f, u, v).is_zero(),
            _ => false,
        }
    }

    /// The unique line through two distinct points.
    pub fn join(&self, p: &Point, q: &Point) -> Result<Line, PlaneError> {
        self.check_point(p)?;
        self.check_point(q)?;
        if p == q {
            return Err(PlaneError::SamePoint);
        }
        Ok(self.join_unchecked(p, q))
    }

    /// Join of two distinct, valid points.
    pub(crate) fn join_unchecked(&self, p: &Point, q: &Point) -> Line {
        let f = &self.field;
        match (p, q) {
            (Point::Affine(x0, y0), Point::Affine(x1, y1)) => {
                if x0 == x1 {
                    return Line::Vertical(*x0);
                }
                // y0 - y1 = (x0 - x1)(x0 + x1 - 2a)
                let slope = f.div(f.sub(*y0, *y1), f.sub(*x0, *x1)).expect("distinct x");
                let a = f.half(f.sub(f.add(*x0, *x1), slope));
                let b = f.sub(*y0, f.square(f.sub(*x0, a)));
                Line::NonVertical(a, b)
            }
            (Point::Affine(x, y), Point::Slope(z)) | (Point::Slope(z), Point::Affine(x, y)) => {
                Line::NonVertical(*z, f.sub(*y, f.square(f.sub(*x, *z))))
            }
            (Point::Affine(x, _), Point::Infinity) | (Point::Infinity, Point::Affine(x, _)) => Line::Vertical(*x),
            (Point::Slope(_) | Point::Infinity, Point::Slope(_) | Point::Infinity) => Line::AtInfinity,
            (Point::Hom(u), Point::Hom(v)) => Line::Hom(normalize(f, cross(f, u, v)).expect("distinct points")),
            _ => unreachable!("mixed presentations"),
        }
    }

    /// The common point of two distinct lines.
    pub fn meet(&self, l: &Line, m: &Line) -> Result<Point, PlaneError> {
        self.check_line(l)?;
        self.check_line(m)?;
        if l == m {
            return Err(PlaneError::SameLine);
        }
        let f = &self.field;
        Ok(match (l, m) {
            (Line::NonVertical(a0, b0), Line::NonVertical(a1, b1)) => {
                if a0 == a1 {
                    Point::Slope(*a0)
                } else {
                    // (x-a0)^2 + b0 = (x-a1)^2 + b1
                    let num = f.sub(f.add(f.square(*a1), *b1), f.add(f.square(*a0), *b0));
                    let den = f.double(f.sub(*a1, *a0));
                    let x = f.div(num, den).expect("distinct a");
                    Point::Affine(x, f.add(*b0, f.square(f.sub(x, *a0))))
                }
            }
            (Line::NonVertical(a, b), Line::Vertical(c)) | (Line::Vertical(c), Line::NonVertical(a, b)) => {
                Point::Affine(*c, f.add(*b, f.square(f.sub(*c, *a))))
            }
            (Line::NonVertical(a, _), Line::AtInfinity) | (Line::AtInfinity, Line::NonVertical(a, _)) => Point::Slope(*a),
            (Line::Vertical(_) | Line::AtInfinity, Line::Vertical(_) | Line::AtInfinity) => Point::Infinity,
            (Line::Hom(u), Line::Hom(v)) => Point::Hom(normalize(f, cross(f, u, v)).expect("distinct lines")),
            _ => unreachable!("mixed presentations"),
        })
    }

    /// All points in canonical order.
    pub fn points(&self) -> Vec<Point> {
        let f = &self.field;
        match self.presentation {
            Presentation::Planar => {
                let mut v: Vec<Point> =
                    f.elements().flat_map(|x| f.elements().map(move |y| Point::Affine(x, y))).collect();
                v.extend(f.elements().map(Point::Slope));
                v.push(Point::Infinity);
                v
            }
            Presentation::Homogeneous => hom_triples(f).into_iter().map(Point::Hom).collect(),
        }
    }

    /// All lines in canonical order.
    pub fn lines(&self) -> Vec<Line> {
        let f = &self.field;
        match self.presentation {
            Presentation::Planar => {
                let mut v: Vec<Line> =
                    f.elements().flat_map(|a| f.elements().map(move |b| Line::NonVertical(a, b))).collect();
                v.extend(f.elements().map(Line::Vertical));
                v.push(Line::AtInfinity);
                v
            }
            Presentation::Homogeneous => hom_triples(f).into_iter().map(Line::Hom).collect(),
        }
    }

    /// The q+1 points of `l`, in canonical order.
    pub fn points_on(&self, l: &Line) -> Result<Vec<Point>, PlaneError> {
        self.check_line(l)?;
        let f = &self.field;
        let mut v: Vec<Point> = match l {
            Line::NonVertical(a, b) => f
                .elements()
                .map(|x| Point::Affine(x, f.add(*b, f.square(f.sub(x, *a)))))
                .chain(std::iter::once(Point::Slope(*a)))
                .collect(),
            Line::Vertical(c) => f.elements().map(|y| Point::Affine(*c, y)).chain([Point::Infinity]).collect(),
            Line::AtInfinity => f.elements().map(Point::Slope).chain([Point::Infinity]).collect(),
            Line::Hom(c) => kernel_points(f, c).into_iter().map(Point::Hom).collect(),
        };
        v.sort_unstable();
        Ok(v)
    }

    /// The q+1 lines through `p`, in canonical order.
    pub fn lines_through(&self, p: &Point) -> Result<Vec<Line>, PlaneError> {
        self.check_point(p)?;
        let f = &self.field;
        let mut v: Vec<Line> = match p {
            Point::Affine(x, y) => f
                .elements()
                .map(|a| Line::NonVertical(a, f.sub(*y, f.square(f.sub(*x, a)))))
                .chain([Line::Vertical(*x)])
                .collect(),
            Point::Slope(z) => f.elements().map(|b| Line::NonVertical(*z, b)).chain([Line::AtInfinity]).collect(),
            Point::Infinity => f.elements().map(Line::Vertical).chain([Line::AtInfinity]).collect(),
            Point::Hom(c) => kernel_points(f, c).into_iter().map(Line::Hom).collect(),
        };
        v.sort_unstable();
        Ok(v)
    }

    /// Shear isomorphism between the presentations, in whichever direction
    /// `p` calls for.
    pub fn convert_point(&self, p: &Point) -> Result<Point, PlaneError> {
        let f = &self.field;
        if f.characteristic() == 2 {
            return Err(PlaneError::EvenCharPlanar);
        }
        Ok(match *p {
            Point::Affine(x, y) => Point::Hom(normalize(f, [x, f.sub(y, f.square(x)), Fe::ONE]).unwrap()),
            Point::Slope(z) => Point::Hom(normalize(f, [Fe::ONE, f.neg(f.double(z)), Fe::ZERO]).unwrap()),
            Point::Infinity => Point::Hom([Fe::ZERO, Fe::ONE, Fe::ZERO]),
            Point::Hom([x, y, w]) => {
                if !w.is_zero() {
                    let u = f.div(x, w).unwrap();
                    let v = f.div(y, w).unwrap();
                    Point::Affine(u, f.add(v, f.square(u)))
                } else if !x.is_zero() {
                    let s = f.div(y, x).unwrap();
                    Point::Slope(f.half(f.neg(s)))
                } else {
                    Point::Infinity
                }
            }
        })
    }

    pub fn convert_line(&self, l: &Line) -> Result<Line, PlaneError> {
        let f = &self.field;
        if f.characteristic() == 2 {
            return Err(PlaneError::EvenCharPlanar);
        }
        Ok(match *l {
            // v = -2a u + (a^2 + b)
            Line::NonVertical(a, b) => {
                Line::Hom(normalize(f, [f.neg(f.double(a)), f.neg(Fe::ONE), f.add(f.square(a), b)]).unwrap())
            }
            Line::Vertical(c) => Line::Hom([Fe::ONE, Fe::ZERO, f.neg(c)]),
            Line::AtInfinity => Line::Hom([Fe::ZERO, Fe::ZERO, Fe::ONE]),
            Line::Hom([a, b, c]) => {
                if !b.is_zero() {
                    let a2 = f.half(f.div(a, b).unwrap());
                    let cc = f.neg(f.div(c, b).unwrap());
                    Line::NonVertical(a2, f.sub(cc, f.square(a2)))
                } else if !a.is_zero() {
                    Line::Vertical(f.neg(f.div(c, a).unwrap()))
                } else {
                    Line::AtInfinity
                }
            }
        })
    }

    /// Homogeneous duality: the line with the same coordinates as `p`.
    pub fn dual_of_point(&self, p: &Point) -> Result<Line, PlaneError> {
        match p {
            Point::Hom(c) => Ok(Line::Hom(*c)),
            _ => Err(PlaneError::PresentationMismatch(Presentation::Homogeneous)),
        }
    }

    pub fn dual_of_line(&self, l: &Line) -> Result<Point, PlaneError> {
        match l {
            Line::Hom(c) => Ok(Point::Hom(*c)),
            _ => Err(PlaneError::PresentationMismatch(Presentation::Homogeneous)),
        }
    }
}

fn is_normalized(f: &Field, c: &[Fe; 3]) -> bool {
    c.iter().all(|&x| f.contains(x)) && c.iter().find(|x| !x.is_zero()) == Some(&Fe::ONE)
}

pub(crate) fn normalize(f: &Field, c: [Fe; 3]) -> Option<[Fe; 3]> {
    let lead = *c.iter().find(|x| !x.is_zero())?;
    if lead == Fe::ONE {
        return Some(c);
    }
    let s = f.inv(lead).unwrap();
    Some(c.map(|x| f.mul(x, s)))
}

fn dot(f: &Field, u: &[Fe; 3], v: &[Fe; 3]) -> Fe {
    f.add(f.add(f.mul(u[0], v[0]), f.mul(u[1], v[1])), f.mul(u[2], v[2]))
}

fn cross(f: &Field, u: &[Fe; 3], v: &[Fe; 3]) -> [Fe; 3] {
    [
        f.sub(f.mul(u[1], v[2]), f.mul(u[2], v[1])),
        f.sub(f.mul(u[2], v[0]), f.mul(u[0], v[2])),
        f.sub(f.mul(u[0], v[1]), f.mul(u[1], v[0])),
    ]
}

fn hom_triples(f: &Field) -> Vec<[Fe; 3]> {
    let mut v = vec![[Fe::ZERO, Fe::ZERO, Fe::ONE]];
    v.extend(f.elements().map(|c| [Fe::ZERO, Fe::ONE, c]));
    for b in f.elements() {
        for c in f.elements() {
            v.push([Fe::ONE, b, c]);
        }
    }
    v
}

/// Normalized nonzero vectors orthogonal to `c`, one per projective point.
fn kernel_points(f: &Field, c: &[Fe; 3]) -> Vec<[Fe; 3]> {
    let [l0, l1, l2] = *c;
    let (u, v) = if !l2.is_zero() {
        let i = f.inv(l2).unwrap();
        ([Fe::ONE, Fe::ZERO, f.neg(f.mul(l0, i))], [Fe::ZERO, Fe::ONE, f.neg(f.mul(l1, i))])
    } else if !l1.is_zero() {
        ([Fe::ONE, f.neg(f.div(l0, l1).unwrap()), Fe::ZERO], [Fe::ZERO, Fe::ZERO, Fe::ONE])
    } else {
        ([Fe::ZERO, Fe::ONE, Fe::ZERO], [Fe::ZERO, Fe::ZERO, Fe::ONE])
    };
    let mut out: Vec<[Fe; 3]> = f
        .elements()
        .map(|t| normalize(f, [0, 1, 2].map(|i| f.add(u[i], f.mul(t, v[i])))).unwrap())
        .collect();
    out.push(normalize(f, v).unwrap());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64) -> Field {
        Field::of_order(q).unwrap()
    }

    fn aff(x: u32, y: u32) -> Point {
        Point::Affine(Fe(x), Fe(y))
    }

    fn nv(a: u32, b: u32) -> Line {
        Line::NonVertical(Fe(a), Fe(b))
    }

    #[test]
    fn planar_examples_gf13() {
        let pl = Plane::planar(gf(13)).unwrap();
        assert!(pl.incident(&aff(2, 4), &nv(0, 0)).unwrap());
        assert!(pl.incident(&aff(6, 12), &nv(4, 8)).unwrap());
        assert!(pl.incident(&aff(0, 0), &nv(0, 0)).unwrap());
        assert_eq!(pl.join(&aff(2, 4), &aff(3, 9)).unwrap(), nv(0, 0));
        assert_eq!(pl.join(&aff(5, 7), &aff(5, 9)).unwrap(), Line::Vertical(Fe(5)));
        // the figure joins (6,12) to [4,8] and [3,3]; (3,9) is on [4,8]
        assert_eq!(pl.join(&aff(6, 12), &aff(3, 9)).unwrap(), nv(4, 8));
        assert_eq!(pl.join(&aff(6, 12), &aff(2, 4)).unwrap(), nv(3, 3));
        assert_eq!(pl.join(&aff(1, 1), &aff(1, 1)), Err(PlaneError::SamePoint));
    }

    #[test]
    fn even_char_rejects_planar() {
        assert_eq!(Plane::planar(gf(8)).unwrap_err(), PlaneError::EvenCharPlanar);
    }

    #[test]
    fn points_on_examples() {
        let pl = Plane::homogeneous(gf(3));
        for l in pl.lines() {
            assert_eq!(pl.points_on(&l).unwrap().len(), 4);
        }
        let p5 = Plane::planar(gf(5)).unwrap();
        let pts = p5.points_on(&nv(0, 0)).unwrap();
        let f = p5.field();
        let mut expect: Vec<Point> = f.elements().map(|x| Point::Affine(x, f.square(x))).collect();
        expect.push(Point::Slope(Fe(0)));
        assert_eq!(pts, expect);
        let inf = p5.points_on(&Line::AtInfinity).unwrap();
        assert_eq!(inf.len(), 6);
        assert!(inf.iter().all(|p| matches!(p, Point::Slope(_) | Point::Infinity)));
    }

    fn check_axioms(pl: &Plane) {
        let q = pl.q() as usize;
        let pts = pl.points();
        let lines = pl.lines();
        assert_eq!(pts.len(), q * q + q + 1);
        assert_eq!(lines.len(), q * q + q + 1);
        for l in &lines {
            let on: Vec<_> = pts.iter().filter(|p| pl.on(p, l)).copied().collect();
            assert_eq!(on.len(), q + 1);
            assert_eq!(on, pl.points_on(l).unwrap());
        }
        for p in &pts {
            let thru: Vec<_> = lines.iter().filter(|l| pl.on(p, l)).copied().collect();
            assert_eq!(thru.len(), q + 1);
            assert_eq!(thru, pl.lines_through(p).unwrap());
        }
    }

    fn check_two_point_axiom(pl: &Plane) {
        let pts = pl.points();
        let lines = pl.lines();
        for (i, p) in pts.iter().enumerate() {
            for r in &pts[i + 1..] {
                let common: Vec<_> = lines.iter().filter(|l| pl.on(p, l) && pl.on(r, l)).collect();
                assert_eq!(common.len(), 1);
                assert_eq!(*common[0], pl.join(p, r).unwrap());
            }
        }
        for (i, l) in lines.iter().enumerate() {
            for m in &lines[i + 1..] {
                let common: Vec<_> = pts.iter().filter(|p| pl.on(p, l) && pl.on(p, m)).collect();
                assert_eq!(common.len(), 1);
                assert_eq!(*common[0], pl.meet(l, m).unwrap());
            }
        }
    }

    #[test]
    fn counting_exhaustive() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13] {
            check_axioms(&Plane::homogeneous(gf(q)));
            if q % 2 == 1 {
                check_axioms(&Plane::planar(gf(q)).unwrap());
            }
        }
    }

    #[test]
    fn unique_join_and_meet_exhaustive() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            check_two_point_axiom(&Plane::homogeneous(gf(q)));
            if q % 2 == 1 {
                check_two_point_axiom(&Plane::planar(gf(q)).unwrap());
            }
        }
    }

    #[test]
    fn twice_square_curve_is_an_arc() {
        for q in [3u64, 5, 7, 9, 11, 13] {
            let pl = Plane::planar(gf(q)).unwrap();
            let f = pl.field();
            let curve: Vec<Point> = f.elements().map(|x| Point::Affine(x, f.double(f.square(x)))).collect();
            for l in pl.lines() {
                assert!(curve.iter().filter(|p| pl.on(p, &l)).count() <= 2);
            }
        }
    }

    #[test]
    fn conversion_preserves_incidence_gf5() {
        let pl = Plane::planar(gf(5)).unwrap();
        let hom = pl.twin().unwrap();
        assert_eq!(pl.convert_point(&aff(2, 4)).unwrap(), hom.hom_point([Fe(2), Fe(0), Fe(1)]).unwrap());
        for p in pl.points() {
            let hp = pl.convert_point(&p).unwrap();
            hom.validate_point(&hp).unwrap();
            assert_eq!(pl.convert_point(&hp).unwrap(), p);
            for l in pl.lines() {
                let hl = pl.convert_line(&l).unwrap();
                assert_eq!(pl.convert_line(&hl).unwrap(), l);
                assert_eq!(pl.on(&p, &l), hom.on(&hp, &hl));
            }
        }
    }

    #[test]
    fn conversion_round_trip_gf13() {
        let pl = Plane::planar(gf(13)).unwrap();
        let f13 = pl.q() as u32;
        let check = pl.convert_point(&aff(2, 4)).unwrap();
        assert_eq!(check, pl.twin().unwrap().hom_point([Fe(2), Fe(0), Fe(1)]).unwrap());
        for i in 0..100u32 {
            let p = aff((i * 7) % f13, (i * i + 3) % f13);
            assert_eq!(pl.convert_point(&pl.convert_point(&p).unwrap()).unwrap(), p);
        }
    }
}
