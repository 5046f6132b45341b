use crate::field_tower::{FieldTower, LElem};

/// A `d x d` matrix over `O_L / q`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiMatrix {
    d: usize,
    entries: Vec<LElem>,
}

impl PhiMatrix {
    pub fn new(d: usize, entries: Vec<LElem>) -> Self {
        assert_eq!(entries.len(), d * d, "matrix entry count");
        Self { d, entries }
    }

    pub fn identity(tower: &FieldTower) -> Self {
        let d = tower.d();
        let entries = (0..d * d)
            .map(|i| if i % (d + 1) == 0 { tower.one() } else { tower.zero() })
            .collect();
        Self::new(d, entries)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn entry(&self, r: usize, c: usize) -> &LElem {
        &self.entries[r * self.d + c]
    }

    pub fn transpose(&self) -> Self {
        let d = self.d;
        let entries = (0..d * d)
            .map(|i| self.entry(i % d, i / d).clone())
            .collect();
        Self::new(d, entries)
    }

    /// Matrix-vector product; `d^2` L-multiplications.
    pub fn apply(&self, tower: &FieldTower, v: &[LElem]) -> Vec<LElem> {
        assert_eq!(v.len(), self.d, "vector length");
        (0..self.d)
            .map(|r| {
                let mut acc = tower.mul(self.entry(r, 0), &v[0]);
                for (c, vc) in v.iter().enumerate().skip(1) {
                    acc = tower.add(&acc, &tower.mul(self.entry(r, c), vc));
                }
                tower.to_coeffs(&acc)
            })
            .collect()
    }

    pub fn mul(&self, other: &Self, tower: &FieldTower) -> Self {
        assert_eq!(self.d, other.d, "matrix size");
        let d = self.d;
        let mut entries = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                let mut acc = tower.zero();
                for k in 0..d {
                    acc = tower.add(&acc, &tower.mul(self.entry(r, k), other.entry(k, c)));
                }
                entries.push(tower.to_coeffs(&acc));
            }
        }
        Self::new(d, entries)
    }

    /// Entries in coefficient form.
    pub fn normalize(&self, tower: &FieldTower) -> Self {
        Self::new(self.d, self.entries.iter().map(|e| tower.to_coeffs(e)).collect())
    }
}
