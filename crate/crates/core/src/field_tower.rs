//! `O_L / q O_L` for a degree-`d` cyclic extension `L/K` in which `q` splits
//! completely.
//!
//! An element is stored as its `d` coordinates over the orthonormal cyclic
//! idempotent basis `l_1..l_d`: `l_i l_j = delta_ij l_i` and
//! `theta(l_i) = l_{i+1}`. Multiplication is coordinatewise and `theta`
//! rotates coordinates. Indices are zero-based in code, so `basis(0)` is
//! `l_1`.

use std::sync::Arc;

use crate::base_ring::{CyclotomicRing, KElem, Monomial};
use crate::error::{ClweError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LElem {
    coords: Vec<KElem>,
}

impl LElem {
    pub fn coords(&self) -> &[KElem] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<KElem> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(KElem::is_zero)
    }
}

#[derive(Clone, Debug)]
pub struct FieldTower {
    ring: Arc<CyclotomicRing>,
    d: usize,
}

impl FieldTower {
    pub fn new(ring: Arc<CyclotomicRing>, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(ClweError::Params("extension degree must be positive".into()));
        }
        Ok(Self { ring, d })
    }

    pub fn ring(&self) -> &CyclotomicRing {
        &self.ring
    }

    pub fn ring_arc(&self) -> &Arc<CyclotomicRing> {
        &self.ring
    }

    pub fn d(&self) -> usize {
        self.d
    }

    fn check(&self, a: &LElem) {
        assert_eq!(a.coords.len(), self.d, "element has wrong number of l-coordinates");
    }

    pub fn from_coords(&self, coords: Vec<KElem>) -> Result<LElem> {
        if coords.len() != self.d {
            return Err(ClweError::Shape {
                expected: self.d,
                actual: coords.len(),
            });
        }
        if let Some(bad) = coords.iter().find(|k| k.len() != self.ring.n()) {
            return Err(ClweError::Shape {
                expected: self.ring.n(),
                actual: bad.len(),
            });
        }
        Ok(LElem { coords })
    }

    pub fn zero(&self) -> LElem {
        self.embed_k(&self.ring.zero())
    }

    pub fn one(&self) -> LElem {
        self.embed_k(&self.ring.one())
    }

    /// The idempotent `l_{j+1}`.
    pub fn basis(&self, j: usize) -> LElem {
        assert!(j < self.d, "basis index out of range");
        let mut coords = vec![self.ring.zero(); self.d];
        coords[j] = self.ring.one();
        LElem { coords }
    }

    /// `c` viewed in `L`: the same value in every coordinate, since the
    /// idempotents sum to one.
    pub fn embed_k(&self, c: &KElem) -> LElem {
        LElem {
            coords: vec![c.clone(); self.d],
        }
    }

    fn zip_with(&self, a: &LElem, b: &LElem, f: impl Fn(&KElem, &KElem) -> KElem) -> LElem {
        self.check(a);
        self.check(b);
        LElem {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| f(x, y)).collect(),
        }
    }

    fn map(&self, a: &LElem, f: impl Fn(&KElem) -> KElem) -> LElem {
        self.check(a);
        LElem {
            coords: a.coords.iter().map(f).collect(),
        }
    }

    pub fn add(&self, a: &LElem, b: &LElem) -> LElem {
        self.zip_with(a, b, |x, y| self.ring.add(x, y))
    }

    pub fn sub(&self, a: &LElem, b: &LElem) -> LElem {
        self.zip_with(a, b, |x, y| self.ring.sub(x, y))
    }

    pub fn neg(&self, a: &LElem) -> LElem {
        self.map(a, |x| self.ring.neg(x))
    }

    /// Exactly `d` K-multiplications.
    pub fn mul(&self, a: &LElem, b: &LElem) -> LElem {
        self.zip_with(a, b, |x, y| self.ring.mul(x, y))
    }

    /// `theta^power(a)`; negative powers run the automorphism backwards.
    pub fn theta(&self, a: &LElem, power: i64) -> LElem {
        self.check(a);
        let d = self.d as i64;
        let p = power.rem_euclid(d) as usize;
        let mut coords = a.coords.clone();
        coords.rotate_right(p);
        LElem { coords }
    }

    /// Product with `c` in `K`, one K-multiplication per coordinate.
    pub fn scale_k(&self, a: &LElem, c: &KElem) -> LElem {
        self.map(a, |x| self.ring.mul(x, c))
    }

    /// Product with a root of unity of `K`, by shifting.
    pub fn mul_monomial(&self, a: &LElem, mono: Monomial) -> LElem {
        self.map(a, |x| self.ring.mul_monomial(x, mono))
    }

    pub fn to_slots(&self, a: &LElem) -> LElem {
        self.map(a, |x| self.ring.to_slots(x))
    }

    pub fn to_coeffs(&self, a: &LElem) -> LElem {
        self.map(a, |x| self.ring.to_coeffs(x))
    }

    /// Coordinates in coefficient form, for equality checks across
    /// representations.
    pub fn normalize(&self, a: &LElem) -> LElem {
        self.to_coeffs(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tower(m: u64, q: u64, d: usize) -> FieldTower {
        FieldTower::new(Arc::new(CyclotomicRing::new(m, q).unwrap()), d).unwrap()
    }

    fn lelem(t: &FieldTower, vals: &[u64]) -> LElem {
        let n = t.ring().n();
        let coords = vals
            .chunks(n)
            .map(|c| t.ring().from_coeffs(c.to_vec()).unwrap())
            .collect();
        t.from_coords(coords).unwrap()
    }

    /// Gaussian integers mod 5, the concrete `O_L / 5` for `L = Q(i)`.
    #[derive(Clone, Copy, PartialEq, Eq, Debug)]
    struct Gauss5 {
        a: i64,
        b: i64,
    }

    impl Gauss5 {
        fn mul(self, o: Self) -> Self {
            Gauss5 {
                a: (self.a * o.a - self.b * o.b).rem_euclid(5),
                b: (self.a * o.b + self.b * o.a).rem_euclid(5),
            }
        }

        fn conj(self) -> Self {
            Gauss5 {
                a: self.a,
                b: (-self.b).rem_euclid(5),
            }
        }

        /// Residues modulo (2 + i) and (2 - i): i = -2 and i = 2 respectively.
        fn residues(self) -> (u64, u64) {
            (
                (self.a - 2 * self.b).rem_euclid(5) as u64,
                (self.a + 2 * self.b).rem_euclid(5) as u64,
            )
        }
    }

    /// `l_1 = -2 - i` vanishes at (2 + i); `l_2 = -2 + i` at (2 - i). The
    /// l_1-coordinate of an element is therefore its residue at (2 - i).
    fn to_tower(t: &FieldTower, g: Gauss5) -> LElem {
        let (r_plus, r_minus) = g.residues();
        lelem(t, &[r_minus, r_plus])
    }

    #[test]
    fn gaussian_integers_mod_five_golden_vectors() {
        let t = tower(1, 5, 2);
        let l1 = Gauss5 { a: 3, b: 4 };
        let l2 = Gauss5 { a: 3, b: 1 };
        assert_eq!(l1.residues(), (0, 1));
        assert_eq!(l2.residues(), (1, 0));
        assert_eq!(to_tower(&t, l1), t.basis(0));
        assert_eq!(to_tower(&t, l2), t.basis(1));
        assert_eq!(l1.mul(l2), Gauss5 { a: 0, b: 0 });
        assert_eq!(l1.mul(l1), l1);
        assert_eq!(t.mul(&t.basis(0), &t.basis(0)), t.basis(0));
        assert!(t.mul(&t.basis(0), &t.basis(1)).is_zero());
        assert_eq!(t.theta(&t.basis(0), 1), t.basis(1));
    }

    #[test]
    fn gaussian_integers_mod_five_full_table() {
        let t = tower(1, 5, 2);
        let all: Vec<Gauss5> = (0..25).map(|k| Gauss5 { a: k / 5, b: k % 5 }).collect();
        for &x in &all {
            assert_eq!(t.theta(&to_tower(&t, x), 1), to_tower(&t, x.conj()));
            for &y in &all {
                let want = to_tower(&t, x.mul(y));
                let got = t.mul(&to_tower(&t, x), &to_tower(&t, y));
                assert_eq!(got, want, "{x:?} * {y:?}");
            }
        }
    }

    #[test]
    fn theta_order_and_fixed_field() {
        let t = tower(16, 97, 4);
        let x = lelem(&t, &(0..32).map(|i| i * 3 % 97).collect::<Vec<_>>());
        assert_eq!(t.theta(&x, 4), x);
        assert_eq!(t.theta(&t.theta(&x, 3), -3), x);
        for i in 0..4 {
            assert_eq!(t.theta(&t.basis(i), 1), t.basis((i + 1) % 4));
        }
        let c = t.ring().from_coeffs((1..=8).collect()).unwrap();
        assert_eq!(t.theta(&t.embed_k(&c), 1), t.embed_k(&c));
        assert!(t.embed_k(&t.ring().zero()).is_zero());
        assert_eq!(t.mul(&x, &t.one()), x);
    }

    fn arb_l(q: u64, len: usize) -> impl Strategy<Value = Vec<u64>> {
        proptest::collection::vec(0..q, len)
    }

    proptest! {
        #[test]
        fn theta_is_a_ring_homomorphism(a in arb_l(97, 24), b in arb_l(97, 24), p in -5i64..5) {
            let t = tower(16, 97, 3);
            let (a, b) = (lelem(&t, &a), lelem(&t, &b));
            prop_assert_eq!(
                t.theta(&t.mul(&a, &b), p),
                t.mul(&t.theta(&a, p), &t.theta(&b, p))
            );
            prop_assert_eq!(t.theta(&t.add(&a, &b), p), t.add(&t.theta(&a, p), &t.theta(&b, p)));
        }

        #[test]
        fn l_mul_commutative_and_associative(
            a in arb_l(97, 16), b in arb_l(97, 16), c in arb_l(97, 16)
        ) {
            let t = tower(16, 97, 2);
            let (a, b, c) = (lelem(&t, &a), lelem(&t, &b), lelem(&t, &c));
            prop_assert_eq!(t.mul(&a, &b), t.mul(&b, &a));
            prop_assert_eq!(t.mul(&t.mul(&a, &b), &c), t.mul(&a, &t.mul(&b, &c)));
        }

        #[test]
        fn embedded_scalar_scales_every_coordinate(a in arb_l(97, 16), c in arb_l(97, 8)) {
            let t = tower(16, 97, 2);
            let a = lelem(&t, &a);
            let c = t.ring().from_coeffs(c).unwrap();
            let prod = t.mul(&t.embed_k(&c), &a);
            for (got, orig) in prod.coords().iter().zip(a.coords()) {
                prop_assert_eq!(got, &t.ring().mul(orig, &c));
            }
            prop_assert_eq!(prod, t.scale_k(&a, &c));
        }
    }
}
