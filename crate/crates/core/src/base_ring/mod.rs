//! The base cyclotomic ring `O_K / q O_K = Z_q[x] / Phi_m(x)` for a prime
//! `q = 1 mod m`, held either in coefficient form or as the vector of its
//! evaluations ("slots") at `zeta^j`, `j` running over `(Z/mZ)^*` in
//! ascending order.
//!
//! Power-of-two conductors use the negacyclic NTT; every other conductor
//! goes through precomputed `n x n` evaluation and interpolation matrices.
//! Both paths produce identical slot vectors.

pub mod field;
pub mod ntt;

use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

pub use field::{
    euler_phi, gcd, is_prime, is_quadratic_residue, multiplicative_generator, prime_factors,
    prime_power_base, primitive_root_of_unity, Modulus, MAX_MODULUS,
};
pub use ntt::NegacyclicNtt;

use crate::error::{ClweError, Result};
use crate::linalg::FqMatrix;
use ntt::bit_reverse;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rep {
    Coeff,
    Slot,
}

/// Element of `Z_q[x] / Phi_m(x)` tagged with its representation.
///
/// Values are always reduced into `[0, q)`. Elements carry no reference to
/// their ring; the owning [`CyclotomicRing`] checks lengths on every
/// operation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KElem {
    rep: Rep,
    values: Vec<u64>,
}

impl KElem {
    pub fn rep(&self) -> Rep {
        self.rep
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }
}

/// `sign * x^power`, used for roots of unity such as the algebra's `gamma`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub negate: bool,
    pub power: u64,
}

/// Operation counters shared by everything built on one ring.
#[derive(Debug, Default)]
pub struct OpCounters {
    k_mul: AtomicU64,
    forward: AtomicU64,
    inverse: AtomicU64,
    slot_mul: AtomicU64,
}

/// Snapshot of [`OpCounters`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OpCounts {
    /// Full multiplications in `O_K / q`.
    pub k_mul: u64,
    /// Coefficient-to-slot transforms.
    pub forward: u64,
    /// Slot-to-coefficient transforms.
    pub inverse: u64,
    /// Scalar products in F_q performed in the slot domain.
    pub slot_mul: u64,
}

impl std::ops::Sub for OpCounts {
    type Output = OpCounts;

    fn sub(self, rhs: Self) -> Self {
        OpCounts {
            k_mul: self.k_mul - rhs.k_mul,
            forward: self.forward - rhs.forward,
            inverse: self.inverse - rhs.inverse,
            slot_mul: self.slot_mul - rhs.slot_mul,
        }
    }
}

impl OpCounters {
    pub fn snapshot(&self) -> OpCounts {
        OpCounts {
            k_mul: self.k_mul.load(Ordering::Relaxed),
            forward: self.forward.load(Ordering::Relaxed),
            inverse: self.inverse.load(Ordering::Relaxed),
            slot_mul: self.slot_mul.load(Ordering::Relaxed),
        }
    }

    pub(crate) fn add_slot_mul(&self, k: u64) {
        self.slot_mul.fetch_add(k, Ordering::Relaxed);
    }
}

#[derive(Clone, Debug)]
enum Transform {
    Negacyclic(NegacyclicNtt),
    Dense { eval: FqMatrix, interp: FqMatrix },
}

#[derive(Debug)]
pub struct CyclotomicRing {
    m: u64,
    n: usize,
    zq: Modulus,
    zeta: u64,
    exponents: Vec<u64>,
    cyclotomic: Vec<u64>,
    transform: Transform,
    counters: OpCounters,
}

impl CyclotomicRing {
    /// Ring for conductor `m` modulo the prime `q = 1 mod m`, using the fast
    /// transform when `m` is a power of two (at least 4).
    pub fn new(m: u64, q: u64) -> Result<Self> {
        Self::build(m, q, m >= 4 && m.is_power_of_two())
    }

    /// Same ring, always using the dense evaluation matrices.
    pub fn with_dense_transform(m: u64, q: u64) -> Result<Self> {
        Self::build(m, q, false)
    }

    fn build(m: u64, q: u64, negacyclic: bool) -> Result<Self> {
        if m == 0 {
            return Err(ClweError::Params("conductor must be positive".into()));
        }
        let zq = Modulus::new(q)?;
        let zeta = primitive_root_of_unity(q, m)?;
        let exponents: Vec<u64> = (0..m).filter(|&j| gcd(j, m) == 1).collect();
        let n = exponents.len();
        let points: Vec<u64> = exponents.iter().map(|&j| zq.pow(zeta, j)).collect();

        // Phi_m = prod (x - zeta^j) over the primitive roots
        let mut cyclotomic = vec![1u64];
        for &p in &points {
            let mut next = vec![0u64; cyclotomic.len() + 1];
            for (i, &c) in cyclotomic.iter().enumerate() {
                next[i + 1] = zq.add(next[i + 1], c);
                next[i] = zq.sub(next[i], zq.mul(c, p));
            }
            cyclotomic = next;
        }

        let transform = if negacyclic {
            Transform::Negacyclic(NegacyclicNtt::new(n, zeta, zq))
        } else {
            let mut eval = FqMatrix::zero(n, n);
            for (i, &p) in points.iter().enumerate() {
                let mut pw = 1;
                for k in 0..n {
                    eval[(i, k)] = pw;
                    pw = zq.mul(pw, p);
                }
            }
            let interp = eval
                .inverse(&zq)
                .ok_or_else(|| ClweError::Params("evaluation points not distinct".into()))?;
            Transform::Dense { eval, interp }
        };

        Ok(Self {
            m,
            n,
            zq,
            zeta,
            exponents,
            cyclotomic,
            transform,
            counters: OpCounters::default(),
        })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &Modulus {
        &self.zq
    }

    pub fn q(&self) -> u64 {
        self.zq.value()
    }

    /// The primitive `m`-th root of unity defining the slots.
    pub fn zeta(&self) -> u64 {
        self.zeta
    }

    /// Exponents `j` with slot `i` equal to the evaluation at `zeta^j`.
    pub fn slot_exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// `Phi_m` mod q, low degree first, monic of degree `n`.
    pub fn cyclotomic_poly(&self) -> &[u64] {
        &self.cyclotomic
    }

    pub fn uses_fast_transform(&self) -> bool {
        matches!(self.transform, Transform::Negacyclic(_))
    }

    pub fn counters(&self) -> &OpCounters {
        &self.counters
    }

    fn check(&self, x: &KElem) {
        assert_eq!(
            x.values.len(),
            self.n,
            "element length does not match ring dimension"
        );
    }

    pub fn zero(&self) -> KElem {
        KElem {
            rep: Rep::Coeff,
            values: vec![0; self.n],
        }
    }

    pub fn one(&self) -> KElem {
        self.constant(1)
    }

    pub fn constant(&self, c: u64) -> KElem {
        let mut values = vec![0; self.n];
        values[0] = self.zq.reduce(c);
        KElem {
            rep: Rep::Coeff,
            values,
        }
    }

    pub fn from_coeffs(&self, coeffs: Vec<u64>) -> Result<KElem> {
        self.element(Rep::Coeff, coeffs)
    }

    pub fn from_slots(&self, slots: Vec<u64>) -> Result<KElem> {
        self.element(Rep::Slot, slots)
    }

    pub fn from_signed_coeffs(&self, coeffs: &[i64]) -> Result<KElem> {
        let values = coeffs.iter().map(|&c| self.zq.from_i64(c)).collect();
        self.element(Rep::Coeff, values)
    }

    fn element(&self, rep: Rep, mut values: Vec<u64>) -> Result<KElem> {
        if values.len() != self.n {
            return Err(ClweError::Shape {
                expected: self.n,
                actual: values.len(),
            });
        }
        for v in &mut values {
            *v = self.zq.reduce(*v);
        }
        Ok(KElem { rep, values })
    }

    /// Coefficient to slot representation; a no-op on slot input.
    pub fn to_slots(&self, x: &KElem) -> KElem {
        self.check(x);
        match x.rep {
            Rep::Slot => x.clone(),
            Rep::Coeff => KElem {
                rep: Rep::Slot,
                values: self.forward(&x.values),
            },
        }
    }

    /// Slot to coefficient representation; a no-op on coefficient input.
    pub fn to_coeffs(&self, x: &KElem) -> KElem {
        self.check(x);
        match x.rep {
            Rep::Coeff => x.clone(),
            Rep::Slot => KElem {
                rep: Rep::Coeff,
                values: self.inverse(&x.values),
            },
        }
    }

    pub fn into_slots(&self, x: KElem) -> KElem {
        match x.rep {
            Rep::Slot => x,
            Rep::Coeff => self.to_slots(&x),
        }
    }

    pub fn into_coeffs(&self, x: KElem) -> KElem {
        match x.rep {
            Rep::Coeff => x,
            Rep::Slot => self.to_coeffs(&x),
        }
    }

    pub(crate) fn forward(&self, coeffs: &[u64]) -> Vec<u64> {
        self.counters.forward.fetch_add(1, Ordering::Relaxed);
        match &self.transform {
            Transform::Negacyclic(ntt) => {
                let mut buf = coeffs.to_vec();
                ntt.forward(&mut buf);
                let bits = ntt.log_len();
                let mut slots = vec![0; self.n];
                for (i, v) in buf.into_iter().enumerate() {
                    slots[bit_reverse(i, bits)] = v;
                }
                slots
            }
            Transform::Dense { eval, .. } => eval.mul_vec(coeffs, &self.zq),
        }
    }

    pub(crate) fn inverse(&self, slots: &[u64]) -> Vec<u64> {
        self.counters.inverse.fetch_add(1, Ordering::Relaxed);
        match &self.transform {
            Transform::Negacyclic(ntt) => {
                let bits = ntt.log_len();
                let mut buf: Vec<u64> = (0..self.n).map(|i| slots[bit_reverse(i, bits)]).collect();
                ntt.inverse(&mut buf);
                buf
            }
            Transform::Dense { interp, .. } => interp.mul_vec(slots, &self.zq),
        }
    }

    fn zip_with(&self, a: &KElem, b: &KElem, f: impl Fn(u64, u64) -> u64) -> KElem {
        self.check(a);
        self.check(b);
        let convert;
        let b = if a.rep == b.rep {
            b
        } else {
            convert = match a.rep {
                Rep::Coeff => self.to_coeffs(b),
                Rep::Slot => self.to_slots(b),
            };
            &convert
        };
        KElem {
            rep: a.rep,
            values: a.values.iter().zip(&b.values).map(|(&x, &y)| f(x, y)).collect(),
        }
    }

    pub fn add(&self, a: &KElem, b: &KElem) -> KElem {
        self.zip_with(a, b, |x, y| self.zq.add(x, y))
    }

    pub fn sub(&self, a: &KElem, b: &KElem) -> KElem {
        self.zip_with(a, b, |x, y| self.zq.sub(x, y))
    }

    pub fn neg(&self, a: &KElem) -> KElem {
        self.check(a);
        KElem {
            rep: a.rep,
            values: a.values.iter().map(|&x| self.zq.neg(x)).collect(),
        }
    }

    pub fn scalar_mul(&self, a: &KElem, c: u64) -> KElem {
        self.check(a);
        let c = self.zq.reduce(c);
        KElem {
            rep: a.rep,
            values: a.values.iter().map(|&x| self.zq.mul(x, c)).collect(),
        }
    }

    /// Ring product. Pointwise when both inputs hold slots (result in slots);
    /// otherwise both go through the transform and the result comes back in
    /// coefficient form.
    pub fn mul(&self, a: &KElem, b: &KElem) -> KElem {
        self.check(a);
        self.check(b);
        self.counters.k_mul.fetch_add(1, Ordering::Relaxed);
        self.counters.add_slot_mul(self.n as u64);
        let both_slots = a.rep == Rep::Slot && b.rep == Rep::Slot;
        let sa = self.to_slots(a);
        let sb = self.to_slots(b);
        let prod: Vec<u64> = sa
            .values
            .iter()
            .zip(&sb.values)
            .map(|(&x, &y)| self.zq.mul(x, y))
            .collect();
        if both_slots {
            KElem {
                rep: Rep::Slot,
                values: prod,
            }
        } else {
            KElem {
                rep: Rep::Coeff,
                values: self.inverse(&prod),
            }
        }
    }

    /// Multiplication by `sign * x^power`, done by shifting rather than a
    /// full ring product; not counted as a K-multiplication.
    pub fn mul_monomial(&self, a: &KElem, mono: Monomial) -> KElem {
        self.check(a);
        let zq = &self.zq;
        let mut out = match a.rep {
            Rep::Slot => {
                let values = a
                    .values
                    .iter()
                    .zip(&self.exponents)
                    .map(|(&v, &j)| {
                        zq.mul(v, zq.pow(self.zeta, (j * (mono.power % self.m)) % self.m))
                    })
                    .collect();
                KElem {
                    rep: Rep::Slot,
                    values,
                }
            }
            Rep::Coeff => {
                let values = if self.uses_fast_transform() {
                    // x^n = -1
                    let n = self.n as u64;
                    let k = mono.power % (2 * n);
                    let mut v = vec![0; self.n];
                    for (i, &c) in a.values.iter().enumerate() {
                        let e = i as u64 + k;
                        let (idx, flip) = ((e % n) as usize, (e / n) % 2 == 1);
                        v[idx] = if flip { zq.neg(c) } else { c };
                    }
                    v
                } else {
                    let mut v = a.values.clone();
                    for _ in 0..mono.power % self.m {
                        self.shift_reduce(&mut v);
                    }
                    v
                };
                KElem {
                    rep: Rep::Coeff,
                    values,
                }
            }
        };
        if mono.negate {
            for v in &mut out.values {
                *v = zq.neg(*v);
            }
        }
        out
    }

    /// v <- x * v mod Phi_m
    fn shift_reduce(&self, v: &mut Vec<u64>) {
        let zq = &self.zq;
        let top = v.pop().expect("nonempty");
        v.insert(0, 0);
        if top != 0 {
            for (c, &p) in v.iter_mut().zip(&self.cyclotomic[..self.n]) {
                *c = zq.sub(*c, zq.mul(top, p));
            }
        }
    }

    /// The element `sign * x^power` itself, in coefficient form.
    pub fn monomial(&self, mono: Monomial) -> KElem {
        self.mul_monomial(&self.one(), mono)
    }

    /// Horner evaluation of a coefficient vector at `point`.
    pub fn evaluate(&self, coeffs: &[u64], point: u64) -> u64 {
        coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.zq.add(self.zq.mul(acc, point), c))
    }
}
