//! The binary program over P_i_j (point i in set j), L_i_j (line i is a
//! secant of set j) and M_j (set j is present).

use std::fmt::Write;

use rustc_hash::FxHashMap;

use crate::arcs::{secants_of, LocalArcFamily, SetFamily};
use crate::gf::Fe;
use crate::plane::{Plane, PlaneError, Point, Presentation};

use super::{validate, SearchError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub name: String,
    pub terms: Vec<(i64, usize)>,
    pub sense: Sense,
    pub rhs: i64,
}

impl Row {
    fn holds(&self, x: &[bool]) -> bool {
        let lhs: i64 = self.terms.iter().map(|&(c, v)| if x[v] { c } else { 0 }).sum();
        match self.sense {
            Sense::Le => lhs <= self.rhs,
            Sense::Ge => lhs >= self.rhs,
            Sense::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Debug, Clone)]
pub struct IlpModel {
    pub q: u64,
    pub k: usize,
    pub cap: usize,
    /// Number of points (and of lines), q^2+q+1.
    pub n: usize,
    pub rows: Vec<Row>,
    plane: Plane,
    points: Vec<Point>,
}

impl IlpModel {
    /// Variable layout: P block, L block, then M.
    pub fn p(&self, i: usize, j: usize) -> usize {
        j * self.n + i
    }

    pub fn l(&self, i: usize, j: usize) -> usize {
        self.cap * self.n + j * self.n + i
    }

    pub fn m(&self, j: usize) -> usize {
        2 * self.cap * self.n + j
    }

    pub fn num_binaries(&self) -> usize {
        (2 * self.n + 1) * self.cap
    }

    /// Name with 1-based indices.
    pub fn var_name(&self, v: usize) -> String {
        let block = self.cap * self.n;
        if v < block {
            format!("P_{}_{}", v % self.n + 1, v / self.n + 1)
        } else if v < 2 * block {
            let v = v - block;
            format!("L_{}_{}", v % self.n + 1, v / self.n + 1)
        } else {
            format!("M_{}", v - 2 * block + 1)
        }
    }

    /// LP text: objective, constraints, binaries.
    pub fn to_lp(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "\\ k = {} uniform local arcs in PG(2,{}), at most {} sets", self.k, self.q, self.cap);
        s.push_str("Maximize\n obj:");
        let obj: Vec<(i64, usize)> = (0..self.cap).map(|j| (1, self.m(j))).collect();
        self.write_terms(&mut s, &obj);
        s.push_str("\nSubject To\n");
        for r in &self.rows {
            let _ = write!(s, " {}:", r.name);
            self.write_terms(&mut s, &r.terms);
            let op = match r.sense {
                Sense::Le => "<=",
                Sense::Ge => ">=",
                Sense::Eq => "=",
            };
            let _ = writeln!(s, " {op} {}", r.rhs);
        }
        s.push_str("Binaries\n");
        for v in 0..self.num_binaries() {
            let _ = write!(s, " {}", self.var_name(v));
            if v % 10 == 9 {
                s.push('\n');
            }
        }
        s.push_str("\nEnd\n");
        s
    }

    fn write_terms(&self, s: &mut String, terms: &[(i64, usize)]) {
        for (t, &(c, v)) in terms.iter().enumerate() {
            if t > 0 && t % 8 == 0 {
                s.push_str("\n   ");
            }
            let sign = if c < 0 { '-' } else { '+' };
            if c.abs() == 1 {
                let _ = write!(s, " {sign} {}", self.var_name(v));
            } else {
                let _ = write!(s, " {sign} {} {}", c.abs(), self.var_name(v));
            }
        }
    }

    /// The 0/1 assignment encoding `family`, set j in slot j.
    pub fn assignment(&self, family: &LocalArcFamily) -> Result<Vec<bool>, SearchError> {
        if family.plane().presentation() != Presentation::Homogeneous || family.plane().field().order() != self.q {
            return Err(PlaneError::PresentationMismatch(Presentation::Homogeneous).into());
        }
        if family.sets().len() > self.cap {
            return Err(SearchError::InvalidCap);
        }
        let index: FxHashMap<Point, usize> = self.points.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let line_index: FxHashMap<_, usize> = self.plane.lines().into_iter().enumerate().map(|(i, l)| (l, i)).collect();
        let mut x = vec![false; self.num_binaries()];
        for (j, s) in family.sets().iter().enumerate() {
            x[self.m(j)] = true;
            for p in s {
                x[self.p(index[p], j)] = true;
            }
            for l in secants_of(&self.plane, s)? {
                x[self.l(line_index[&l], j)] = true;
            }
        }
        Ok(x)
    }

    /// Names of the rows `x` violates.
    pub fn violations(&self, x: &[bool]) -> Vec<&str> {
        self.rows.iter().filter(|r| !r.holds(x)).map(|r| r.name.as_str()).collect()
    }
}

/// The model for k-uniform local arcs with at most `cap` sets. With
/// `fix_first` (k <= 4) set 1 is pinned to the first k frame points.
pub fn emit_ilp(q: u64, k: usize, cap: usize, fix_first: bool) -> Result<IlpModel, SearchError> {
    let plane = validate(q, k)?;
    if cap == 0 {
        return Err(SearchError::InvalidCap);
    }
    if fix_first && k > 4 {
        return Err(SearchError::SymmetryUnsupported(k));
    }
    let points = plane.points();
    let lines = plane.lines();
    let n = points.len();
    let index: FxHashMap<Point, usize> = points.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let on: Vec<Vec<usize>> =
        lines.iter().map(|l| plane.points_on(l).expect("own line").iter().map(|p| index[p]).collect()).collect();
    let mut model = IlpModel { q, k, cap, n, rows: Vec::new(), plane: plane.clone(), points: points.clone() };
    let mut rows = Vec::new();
    let ci = cap as i64;

    for j in 0..cap.saturating_sub(1) {
        rows.push(Row {
            name: format!("order_{}", j + 1),
            terms: vec![(1, model.m(j)), (-1, model.m(j + 1))],
            sense: Sense::Ge,
            rhs: 0,
        });
    }
    for j in 0..cap {
        let mut terms = vec![(-(k as i64), model.m(j))];
        terms.extend((0..n).map(|i| (1, model.p(i, j))));
        rows.push(Row { name: format!("size_{}", j + 1), terms, sense: Sense::Eq, rhs: 0 });
    }
    for j in 0..cap {
        for (li, pts) in on.iter().enumerate() {
            let terms: Vec<(i64, usize)> = pts.iter().map(|&i| (1, model.p(i, j))).collect();
            rows.push(Row { name: format!("arc_{}_{}", li + 1, j + 1), terms, sense: Sense::Le, rhs: 2 });
        }
    }
    for j in 0..cap {
        for (li, pts) in on.iter().enumerate() {
            let mut terms = vec![(-2, model.l(li, j))];
            terms.extend(pts.iter().map(|&i| (1, model.p(i, j))));
            rows.push(Row { name: format!("sec_lo_{}_{}", li + 1, j + 1), terms: terms.clone(), sense: Sense::Ge, rhs: 0 });
            rows.push(Row { name: format!("sec_hi_{}_{}", li + 1, j + 1), terms, sense: Sense::Le, rhs: 1 });
        }
    }
    for i in 0..n {
        let terms = (0..cap).map(|j| (1, model.p(i, j))).collect();
        rows.push(Row { name: format!("once_{}", i + 1), terms, sense: Sense::Le, rhs: 1 });
    }
    for j in 0..cap {
        for (li, pts) in on.iter().enumerate() {
            let mut terms = vec![(ci, model.l(li, j))];
            for jj in (0..cap).filter(|&jj| jj != j) {
                terms.extend(pts.iter().map(|&i| (1, model.p(i, jj))));
            }
            rows.push(Row { name: format!("avoid_{}_{}", li + 1, j + 1), terms, sense: Sense::Le, rhs: ci });
        }
    }
    if fix_first {
        let o = Fe::ONE;
        let z = Fe::ZERO;
        for c in [[o, z, z], [z, o, z], [z, z, o], [o, o, o]].iter().take(k) {
            let i = index[&plane.hom_point(*c).expect("nonzero")];
            rows.push(Row { name: format!("fix_{}", i + 1), terms: vec![(1, model.p(i, 0))], sense: Sense::Eq, rhs: 1 });
        }
    }
    model.rows = rows;
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{exact_max, SearchConfig};

    #[test]
    fn variable_count() {
        let m = emit_ilp(2, 2, 3, false).unwrap();
        assert_eq!(m.num_binaries(), 45);
        let lp = m.to_lp();
        assert!(lp.starts_with("\\") && lp.contains("Maximize") && lp.contains("Subject To"));
        assert!(lp.contains("P_7_3") && lp.contains("L_7_3") && lp.contains("M_3") && !lp.contains("P_8_1"));
        let binaries = lp.split("Binaries").nth(1).unwrap();
        assert_eq!(binaries.split_whitespace().filter(|w| *w != "End").count(), 45);
    }

    #[test]
    fn six_families() {
        let m = emit_ilp(3, 2, 4, false).unwrap();
        let mut kinds: Vec<&str> = m.rows.iter().map(|r| r.name.split('_').next().unwrap()).collect();
        kinds.dedup();
        assert_eq!(kinds, ["order", "size", "arc", "sec", "once", "avoid"]);
        let lines = 13;
        assert_eq!(m.rows.len(), 3 + 4 + 4 * lines + 2 * 4 * lines + lines + 4 * lines);
    }

    #[test]
    fn certificates_are_feasible() {
        for (q, k) in [(2u64, 2usize), (3, 2), (4, 2), (4, 3), (5, 3), (5, 2)] {
            let r = exact_max(&SearchConfig::new(q, k)).unwrap();
            for fix in [false, true] {
                let m = emit_ilp(q, k, r.cap, fix).unwrap();
                let x = m.assignment(&r.certificate).unwrap();
                assert!(m.violations(&x).is_empty(), "q={q} k={k}: {:?}", m.violations(&x));
                let obj = (0..m.cap).filter(|&j| x[m.m(j)]).count();
                assert_eq!(obj, r.best);
            }
        }
    }

    #[test]
    fn checker_catches_bad_assignments() {
        let r = exact_max(&SearchConfig::new(4, 3)).unwrap();
        let m = emit_ilp(4, 3, r.cap, false).unwrap();
        let mut x = m.assignment(&r.certificate).unwrap();
        // drop a secant indicator of set 1
        let v = (0..m.n).map(|i| m.l(i, 0)).find(|&v| x[v]).unwrap();
        x[v] = false;
        assert!(m.violations(&x).iter().any(|n| n.starts_with("sec_hi")));
        // a point in two sets
        let mut y = m.assignment(&r.certificate).unwrap();
        let i = (0..m.n).find(|&i| y[m.p(i, 0)]).unwrap();
        y[m.p(i, 1)] = true;
        assert!(m.violations(&y).iter().any(|n| n.starts_with("once")));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(emit_ilp(4, 2, 0, false).unwrap_err(), SearchError::InvalidCap);
        assert_eq!(emit_ilp(7, 5, 3, true).unwrap_err(), SearchError::SymmetryUnsupported(5));
    }
}
