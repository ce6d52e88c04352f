//! Text literals for points and lines.
//!
//! Field elements are integers for prime fields and little-endian
//! coefficient arrays such as `[1,2]` otherwise. Homogeneous points and lines
//! are both written `<x0:x1:x2>`; the caller knows which one it expects.

use super::{Line, Plane, PlaneError, Point};
use crate::gf::{Fe, Field};

fn fmt_elem(f: &Field, a: Fe) -> String {
    if f.degree() == 1 {
        a.0.to_string()
    } else {
        let c: Vec<String> = f.coeffs(a).iter().map(|c| c.to_string()).collect();
        format!("[{}]", c.join(","))
    }
}

fn fmt_triple(f: &Field, c: &[Fe; 3]) -> String {
    format!("<{}:{}:{}>", fmt_elem(f, c[0]), fmt_elem(f, c[1]), fmt_elem(f, c[2]))
}

pub fn format_point(plane: &Plane, p: &Point) -> String {
    let f = plane.field();
    match p {
        Point::Affine(x, y) => format!("({},{})", fmt_elem(f, *x), fmt_elem(f, *y)),
        Point::Slope(z) => format!("({})", fmt_elem(f, *z)),
        Point::Infinity => "(inf)".to_string(),
        Point::Hom(c) => fmt_triple(f, c),
    }
}

pub fn format_line(plane: &Plane, l: &Line) -> String {
    let f = plane.field();
    match l {
        Line::NonVertical(a, b) => format!("[{},{}]", fmt_elem(f, *a), fmt_elem(f, *b)),
        Line::Vertical(c) => format!("[{}]", fmt_elem(f, *c)),
        Line::AtInfinity => "[inf]".to_string(),
        Line::Hom(c) => fmt_triple(f, c),
    }
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        self.skip_ws();
        if self.s[self.pos..].starts_with(w.as_bytes()) {
            self.pos += w.len();
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Option<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).ok()?.parse().ok()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

fn elem(cur: &mut Cursor, f: &Field) -> Option<Fe> {
    if f.degree() == 1 {
        let v = cur.uint()?;
        return (v < f.order()).then_some(Fe(v as u32));
    }
    if !cur.eat(b'[') {
        return None;
    }
    let mut coeffs = vec![cur.uint()?];
    while cur.eat(b',') {
        coeffs.push(cur.uint()?);
    }
    if !cur.eat(b']') {
        return None;
    }
    f.from_coeffs(&coeffs).ok()
}

fn triple(cur: &mut Cursor, f: &Field) -> Option<[Fe; 3]> {
    let a = elem(cur, f)?;
    cur.eat(b':').then_some(())?;
    let b = elem(cur, f)?;
    cur.eat(b':').then_some(())?;
    let c = elem(cur, f)?;
    cur.eat(b'>').then_some([a, b, c])
}

fn parse_point_inner(plane: &Plane, cur: &mut Cursor) -> Option<Point> {
    let f = plane.field();
    if cur.eat(b'<') {
        return plane.hom_point(triple(cur, f)?);
    }
    if !cur.eat(b'(') {
        return None;
    }
    if cur.eat_word("inf") {
        return cur.eat(b')').then_some(Point::Infinity);
    }
    let x = elem(cur, f)?;
    if cur.eat(b')') {
        return Some(Point::Slope(x));
    }
    cur.eat(b',').then_some(())?;
    let y = elem(cur, f)?;
    cur.eat(b')').then_some(Point::Affine(x, y))
}

fn parse_line_inner(plane: &Plane, cur: &mut Cursor) -> Option<Line> {
    let f = plane.field();
    if cur.eat(b'<') {
        return plane.hom_line(triple(cur, f)?);
    }
    if !cur.eat(b'[') {
        return None;
    }
    if cur.eat_word("inf") {
        return cur.eat(b']').then_some(Line::AtInfinity);
    }
    let a = elem(cur, f)?;
    if cur.eat(b']') {
        return Some(Line::Vertical(a));
    }
    cur.eat(b',').then_some(())?;
    let b = elem(cur, f)?;
    cur.eat(b']').then_some(Line::NonVertical(a, b))
}

/// Parse a point literal and check it belongs to `plane`.
pub fn parse_point(plane: &Plane, s: &str) -> Result<Point, PlaneError> {
    let mut cur = Cursor { s: s.as_bytes(), pos: 0 };
    let p = parse_point_inner(plane, &mut cur)
        .filter(|_| cur.at_end())
        .ok_or_else(|| PlaneError::BadLiteral(s.to_string()))?;
    plane.validate_point(&p)?;
    Ok(p)
}

pub fn parse_line(plane: &Plane, s: &str) -> Result<Line, PlaneError> {
    let mut cur = Cursor { s: s.as_bytes(), pos: 0 };
    let l = parse_line_inner(plane, &mut cur)
        .filter(|_| cur.at_end())
        .ok_or_else(|| PlaneError::BadLiteral(s.to_string()))?;
    plane.validate_line(&l)?;
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_all_objects() {
        for (q, planar) in [(5u64, true), (9, true), (4, false), (9, false)] {
            let f = Field::of_order(q).unwrap();
            let pl = if planar { Plane::planar(f).unwrap() } else { Plane::homogeneous(f) };
            for p in pl.points() {
                assert_eq!(parse_point(&pl, &format_point(&pl, &p)).unwrap(), p);
            }
            for l in pl.lines() {
                assert_eq!(parse_line(&pl, &format_line(&pl, &l)).unwrap(), l);
            }
        }
    }

    #[test]
    fn literal_shapes() {
        let pl = Plane::planar(Field::prime(13).unwrap()).unwrap();
        assert_eq!(parse_point(&pl, " ( 6 , 12 ) ").unwrap(), Point::Affine(Fe(6), Fe(12)));
        assert_eq!(parse_point(&pl, "(inf)").unwrap(), Point::Infinity);
        assert_eq!(parse_line(&pl, "[inf]").unwrap(), Line::AtInfinity);
        assert_eq!(parse_line(&pl, "[3]").unwrap(), Line::Vertical(Fe(3)));
        assert!(parse_point(&pl, "(13,0)").is_err());
        assert!(parse_point(&pl, "(1,2").is_err());
        assert!(parse_point(&pl, "<0:1:2>").is_err());
        let f9 = Field::of_order(9).unwrap();
        let h = Plane::homogeneous(f9);
        assert_eq!(format_point(&h, &Point::Hom([Fe(0), Fe(1), Fe(5)])), "<[0,0]:[1,0]:[2,1]>");
        // non-normalized input is rescaled
        assert_eq!(parse_point(&h, "<[0]:[2]:[1]>").unwrap(), h.hom_point([Fe(0), Fe(2), Fe(1)]).unwrap());
    }
}
