use super::{Fe, Field, FieldError, TABLE_LIMIT};

/// Explicit isomorphism between the flat and tower presentations of
/// GF(p^(2t)). Built by locating a root of the flat modulus in the tower.
pub struct TowerIso {
    flat: Field,
    tower: Field,
    root: Fe,
    back: Vec<u32>,
}

impl TowerIso {
    pub fn new(flat: &Field, tower: &Field) -> Result<TowerIso, FieldError> {
        if flat.is_tower()
            || !tower.is_tower()
            || flat.characteristic() != tower.characteristic()
            || flat.degree() != tower.degree()
            || flat.order() > TABLE_LIMIT
        {
            return Err(FieldError::Mismatch(flat.to_string(), tower.to_string()));
        }
        let modulus = flat.modulus();
        let root = tower
            .elements()
            .find(|&r| {
                let mut acc = Fe::ZERO;
                for c in modulus.iter().rev() {
                    acc = tower.add(tower.mul(acc, r), *c);
                }
                acc.is_zero()
            })
            .ok_or_else(|| FieldError::Mismatch(flat.to_string(), tower.to_string()))?;
        let mut iso = TowerIso { flat: flat.clone(), tower: tower.clone(), root, back: Vec::new() };
        let mut back = vec![0u32; flat.order() as usize];
        for a in flat.elements() {
            back[iso.to_tower(a).0 as usize] = a.0;
        }
        iso.back = back;
        Ok(iso)
    }

    pub fn to_tower(&self, a: Fe) -> Fe {
        // prime-field digits embed unchanged in the tower
        let mut acc = Fe::ZERO;
        for c in self.flat.coeffs(a).iter().rev() {
            acc = self.tower.add(self.tower.mul(acc, self.root), Fe(*c));
        }
        acc
    }

    pub fn to_flat(&self, b: Fe) -> Fe {
        Fe(self.back[b.0 as usize])
    }
}
