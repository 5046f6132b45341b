//! The natural order `Lambda_q = sum_i u^i (O_L / q)` of a cyclic algebra
//! `(L/K, theta, gamma)`, with relations `x u = u theta(x)` for `x` in `L`
//! and `u^d = gamma`.
//!
//! Two multiplication paths are provided. [`CyclicAlgebra::mul_naive`] is
//! the left regular matrix `phi(x)` applied to `Vec(y)`, costing `d^2`
//! L-multiplications. [`CyclicAlgebra::mul`] moves both operands to slots
//! once, multiplies the `n` skew blocks independently and moves back.
//!
//! `gamma` is the root of unity `zeta_{m*}^t` with `m* = lcm(2, m)`, so odd
//! conductors (including `m = 1`) can still carry `gamma = -1`.
//!
//! Every public operation returns its result in coefficient form.

mod blocks;
mod phi;

use std::sync::Arc;

pub use blocks::{SkewBlock, SkewBlocks};
pub use phi::PhiMatrix;

use crate::base_ring::{CyclotomicRing, KElem, Monomial, Rep};
use crate::error::{ClweError, Result};
use crate::field_tower::{FieldTower, LElem};

/// `gamma = zeta_{m*}^t` together with its slot values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gamma {
    exponent: u64,
    order: u64,
    mono: Monomial,
    slots: Vec<u64>,
}

impl Gamma {
    pub fn new(ring: &CyclotomicRing, exponent: u64) -> Self {
        let m = ring.m();
        let order = if m.is_multiple_of(2) { m } else { 2 * m };
        let t = exponent % order;
        let mono = if m.is_multiple_of(2) {
            Monomial {
                negate: false,
                power: t,
            }
        } else {
            // zeta_{2m} = -x^((m+1)/2) for odd m
            Monomial {
                negate: t % 2 == 1,
                power: (t * (m + 1) / 2) % m,
            }
        };
        let zq = ring.modulus();
        let slots = ring
            .slot_exponents()
            .iter()
            .map(|&j| {
                let v = zq.pow(ring.zeta(), (j * mono.power) % m);
                if mono.negate {
                    zq.neg(v)
                } else {
                    v
                }
            })
            .collect();
        Self {
            exponent: t,
            order,
            mono,
            slots,
        }
    }

    /// `t` reduced modulo `m*`.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// `m* = lcm(2, m)`, the order of the root of unity `zeta_{m*}`.
    pub fn root_order(&self) -> u64 {
        self.order
    }

    pub fn monomial(&self) -> Monomial {
        self.mono
    }

    /// `gamma` evaluated at each slot.
    pub fn slots(&self) -> &[u64] {
        &self.slots
    }

    /// Exponent of `gamma^-1`.
    pub fn inverse_exponent(&self) -> u64 {
        (self.order - self.exponent) % self.order
    }

    pub fn is_one(&self) -> bool {
        self.slots.iter().all(|&s| s == 1)
    }
}

/// `sum_i u^i x_i`, stored as the `d` coordinates `x_0..x_{d-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AElem {
    coords: Vec<LElem>,
}

impl AElem {
    pub fn coords(&self) -> &[LElem] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<LElem> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(LElem::is_zero)
    }
}

#[derive(Clone, Debug)]
pub struct CyclicAlgebra {
    tower: FieldTower,
    gamma: Gamma,
}

impl CyclicAlgebra {
    pub fn new(tower: FieldTower, gamma_exponent: u64) -> Self {
        let gamma = Gamma::new(tower.ring(), gamma_exponent);
        Self { tower, gamma }
    }

    /// Convenience constructor building the ring and tower.
    pub fn from_params(m: u64, d: usize, q: u64, gamma_exponent: u64) -> Result<Self> {
        let ring = Arc::new(CyclotomicRing::new(m, q)?);
        Ok(Self::new(FieldTower::new(ring, d)?, gamma_exponent))
    }

    /// The algebra with `gamma^-1`, sharing this one's ring and counters.
    pub fn dual(&self) -> Self {
        Self::new(self.tower.clone(), self.gamma.inverse_exponent())
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn ring(&self) -> &CyclotomicRing {
        self.tower.ring()
    }

    pub fn gamma(&self) -> &Gamma {
        &self.gamma
    }

    pub fn d(&self) -> usize {
        self.tower.d()
    }

    pub fn n(&self) -> usize {
        self.ring().n()
    }

    pub fn q(&self) -> u64 {
        self.ring().q()
    }

    /// Total dimension `N = n d^2` over F_q.
    pub fn dimension(&self) -> usize {
        self.n() * self.d() * self.d()
    }

    fn check(&self, x: &AElem) {
        assert_eq!(x.coords.len(), self.d(), "element has wrong number of u-coordinates");
    }

    pub fn from_coords(&self, coords: Vec<LElem>) -> Result<AElem> {
        if coords.len() != self.d() {
            return Err(ClweError::Shape {
                expected: self.d(),
                actual: coords.len(),
            });
        }
        let coords = coords
            .into_iter()
            .map(|l| self.tower.from_coords(l.into_coords()))
            .collect::<Result<_>>()?;
        Ok(AElem { coords })
    }

    /// Builds an element from `N` residues ordered u-index outer, l-index
    /// middle, K-coefficient inner.
    pub fn from_flat(&self, values: &[u64]) -> Result<AElem> {
        if values.len() != self.dimension() {
            return Err(ClweError::Shape {
                expected: self.dimension(),
                actual: values.len(),
            });
        }
        let (n, d) = (self.n(), self.d());
        let ring = self.ring();
        let coords = values
            .chunks(n * d)
            .map(|u_chunk| {
                let ks = u_chunk
                    .chunks(n)
                    .map(|c| ring.from_coeffs(c.to_vec()))
                    .collect::<Result<Vec<_>>>()?;
                self.tower.from_coords(ks)
            })
            .collect::<Result<_>>()?;
        Ok(AElem { coords })
    }

    pub fn from_signed_flat(&self, values: &[i64]) -> Result<AElem> {
        let zq = self.ring().modulus();
        let v: Vec<u64> = values.iter().map(|&x| zq.from_i64(x)).collect();
        self.from_flat(&v)
    }

    /// Inverse of [`CyclicAlgebra::from_flat`], in coefficient form.
    pub fn to_flat(&self, x: &AElem) -> Vec<u64> {
        self.check(x);
        let ring = self.ring();
        let mut out = Vec::with_capacity(self.dimension());
        for l in &x.coords {
            for k in l.coords() {
                if k.rep() == Rep::Coeff {
                    out.extend_from_slice(k.values());
                } else {
                    out.extend_from_slice(ring.to_coeffs(k).values());
                }
            }
        }
        out
    }

    pub fn zero(&self) -> AElem {
        AElem {
            coords: vec![self.tower.zero(); self.d()],
        }
    }

    pub fn one(&self) -> AElem {
        self.embed_l(&self.tower.one())
    }

    pub fn embed_l(&self, x: &LElem) -> AElem {
        let mut coords = vec![self.tower.zero(); self.d()];
        coords[0] = x.clone();
        AElem { coords }
    }

    pub fn embed_k(&self, c: &KElem) -> AElem {
        self.embed_l(&self.tower.embed_k(c))
    }

    /// The generator `u^i`, for `i < d`.
    pub fn u_power(&self, i: usize) -> AElem {
        assert!(i < self.d(), "u power out of range");
        let mut coords = vec![self.tower.zero(); self.d()];
        coords[i] = self.tower.one();
        AElem { coords }
    }

    /// `gamma` as an element of `K`.
    pub fn gamma_k(&self) -> KElem {
        self.ring().monomial(self.gamma.mono)
    }

    pub(crate) fn gamma_l(&self, x: &LElem) -> LElem {
        self.tower.mul_monomial(x, self.gamma.mono)
    }

    fn zip_with(&self, a: &AElem, b: &AElem, f: impl Fn(&LElem, &LElem) -> LElem) -> AElem {
        self.check(a);
        self.check(b);
        AElem {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| f(x, y)).collect(),
        }
    }

    pub fn add(&self, a: &AElem, b: &AElem) -> AElem {
        self.zip_with(a, b, |x, y| self.tower.to_coeffs(&self.tower.add(x, y)))
    }

    pub fn sub(&self, a: &AElem, b: &AElem) -> AElem {
        self.zip_with(a, b, |x, y| self.tower.to_coeffs(&self.tower.sub(x, y)))
    }

    pub fn neg(&self, a: &AElem) -> AElem {
        self.check(a);
        AElem {
            coords: a
                .coords
                .iter()
                .map(|x| self.tower.to_coeffs(&self.tower.neg(x)))
                .collect(),
        }
    }

    /// Multiplies every F_q coordinate by the scalar `c`.
    pub fn scalar_mul(&self, a: &AElem, c: u64) -> AElem {
        self.check(a);
        let ring = self.ring();
        AElem {
            coords: a
                .coords
                .iter()
                .map(|l| {
                    let ks = l
                        .coords()
                        .iter()
                        .map(|k| ring.to_coeffs(&ring.scalar_mul(k, c)))
                        .collect();
                    self.tower.from_coords(ks).expect("shape preserved")
                })
                .collect(),
        }
    }

    /// The left regular representation: entry `(r, c)` is
    /// `gamma^[r < c] theta^c(x_{(r - c) mod d})`.
    pub fn phi(&self, x: &AElem) -> PhiMatrix {
        self.check(x);
        let d = self.d();
        let mut entries = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                let src = &x.coords[(r + d - c) % d];
                let rotated = self.tower.theta(src, c as i64);
                entries.push(if r < c { self.gamma_l(&rotated) } else { rotated });
            }
        }
        PhiMatrix::new(d, entries)
    }

    /// `Vec(x)`: the column of u-coordinates.
    pub fn vec_of<'a>(&self, x: &'a AElem) -> &'a [LElem] {
        &x.coords
    }

    pub fn from_vec(&self, v: Vec<LElem>) -> Result<AElem> {
        self.from_coords(v)
    }

    /// `phi(x) Vec(y)`: exactly `d^3` K-multiplications.
    pub fn mul_naive(&self, x: &AElem, y: &AElem) -> AElem {
        self.check(x);
        self.check(y);
        let coords = self.phi(x).apply(&self.tower, &y.coords);
        AElem { coords }
    }

    /// Product through the skew block decomposition.
    pub fn mul(&self, x: &AElem, y: &AElem) -> AElem {
        let bx = self.decompose(x);
        let by = self.decompose(y);
        self.recompose(&bx.mul(&by, self))
    }

    pub fn decompose(&self, x: &AElem) -> SkewBlocks {
        SkewBlocks::decompose(self, x)
    }

    pub fn recompose(&self, b: &SkewBlocks) -> AElem {
        b.recompose(self)
    }

    /// The element `x'` of the dual algebra (`gamma^-1`) whose left regular
    /// matrix is `phi(x)^T`: `x'_0 = x_0` and
    /// `x'_i = gamma theta^i(x_{d-i})` for `i >= 1`.
    pub fn transpose_dual(&self, x: &AElem) -> AElem {
        self.check(x);
        let d = self.d();
        let coords = (0..d)
            .map(|i| {
                if i == 0 {
                    self.tower.to_coeffs(&x.coords[0])
                } else {
                    let rotated = self.tower.theta(&x.coords[d - i], i as i64);
                    self.tower.to_coeffs(&self.gamma_l(&rotated))
                }
            })
            .collect();
        AElem { coords }
    }

    pub fn is_invertible(&self, x: &AElem) -> bool {
        self.decompose(x).is_invertible(self)
    }

    /// Two-sided inverse, or [`ClweError::NotInvertible`] when some block is
    /// singular.
    pub fn invert(&self, x: &AElem) -> Result<AElem> {
        let blocks = self.decompose(x).invert(self)?;
        Ok(self.recompose(&blocks))
    }

    /// Coordinates in coefficient form, for representation-independent
    /// comparison.
    pub fn normalize(&self, x: &AElem) -> AElem {
        self.check(x);
        AElem {
            coords: x.coords.iter().map(|l| self.tower.to_coeffs(l)).collect(),
        }
    }
}

#[cfg(test)]
mod tests;
