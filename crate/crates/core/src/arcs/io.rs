//! JSON family files.

use serde::{Deserialize, Serialize};

use super::{ArcError, LocalArcFamily, SetFamily};
use crate::gf::Field;
use crate::plane::{format_point, parse_point, Plane, Presentation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyFile {
    pub q: u64,
    pub p: u64,
    pub m: u32,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub tower: bool,
    pub presentation: Presentation,
    pub sets: Vec<Vec<String>>,
}

impl FamilyFile {
    pub fn from_family<F: SetFamily + ?Sized>(f: &F) -> FamilyFile {
        let plane = f.plane();
        let field = plane.field();
        FamilyFile {
            q: field.order(),
            p: field.characteristic(),
            m: field.degree(),
            tower: field.is_tower(),
            presentation: plane.presentation(),
            sets: (0..f.num_sets()).map(|i| f.set(i).iter().map(|pt| format_point(plane, pt)).collect()).collect(),
        }
    }

    pub fn to_family(&self) -> Result<LocalArcFamily, ArcError> {
        let field = Field::new(self.p, self.m, self.tower)?;
        if field.order() != self.q {
            return Err(ArcError::Format(format!("q = {} but p^m = {}", self.q, field.order())));
        }
        let plane = Plane::new(field, self.presentation)?;
        let sets = self
            .sets
            .iter()
            .map(|s| s.iter().map(|lit| parse_point(&plane, lit)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        LocalArcFamily::new(plane, sets)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<FamilyFile, ArcError> {
        serde_json::from_str(s).map_err(|e| ArcError::Format(e.to_string()))
    }
}

impl LocalArcFamily {
    pub fn to_json(&self) -> String {
        FamilyFile::from_family(self).to_json()
    }

    pub fn from_json(s: &str) -> Result<LocalArcFamily, ArcError> {
        FamilyFile::from_json(s)?.to_family()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Fe;
    use crate::plane::Point;

    #[test]
    fn json_round_trip() {
        let pl = Plane::planar(Field::prime(5).unwrap()).unwrap();
        let a = |x, y| Point::Affine(Fe(x), Fe(y));
        let fam = LocalArcFamily::new(pl, vec![vec![a(0, 4), a(4, 4)], vec![a(0, 3), a(2, 3)]]).unwrap();
        let text = fam.to_json();
        assert!(text.contains("\"(0,4)\""));
        assert!(!text.contains("tower"));
        assert_eq!(LocalArcFamily::from_json(&text).unwrap(), fam);

        let tower = Plane::homogeneous(Field::new(5, 4, true).unwrap());
        let pts = tower.points();
        let fam = LocalArcFamily::new(tower, vec![vec![pts[7], pts[1000]]]).unwrap();
        assert_eq!(LocalArcFamily::from_json(&fam.to_json()).unwrap(), fam);
    }

    #[test]
    fn rejects_bad_files() {
        let bad = r#"{"q": 7, "p": 5, "m": 1, "presentation": "planar", "sets": []}"#;
        assert!(matches!(LocalArcFamily::from_json(bad), Err(ArcError::Format(_))));
        let bad = r#"{"q": 4, "p": 2, "m": 2, "presentation": "planar", "sets": []}"#;
        assert!(LocalArcFamily::from_json(bad).is_err());
    }
}
