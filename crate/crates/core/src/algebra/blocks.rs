//! Slot-wise decomposition of `Lambda_q` into `n` skew blocks
//! `R_i = sum_j u^j F_q^d`, one per slot of `K`.
//!
//! Inside block `i`, an element is a `d x d` array `X[j][l]` (u-power `j`,
//! l-coordinate `l`) and
//! `(u^j v)(u^k w) = u^((j+k) mod d) gamma_i^[j+k >= d] theta^k(v) w`,
//! where `theta` rotates the `l` index.

use super::{AElem, CyclicAlgebra};
use crate::base_ring::Rep;
use crate::error::{ClweError, Result};
use crate::linalg::FqMatrix;

/// All `n` blocks, stored coordinate-major with the slot index innermost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewBlocks {
    n: usize,
    d: usize,
    data: Vec<u64>,
}

/// One block viewed on its own.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewBlock {
    pub index: usize,
    pub d: usize,
    pub gamma: u64,
    /// Row-major `d x d`: `entries[j * d + l]`.
    pub entries: Vec<u64>,
}

impl SkewBlock {
    pub fn get(&self, j: usize, l: usize) -> u64 {
        self.entries[j * self.d + l]
    }

    /// The skew product of two blocks of the same index.
    pub fn mul(&self, other: &Self, alg: &CyclicAlgebra) -> Self {
        assert_eq!(self.index, other.index, "blocks from different slots");
        let zq = alg.ring().modulus();
        let d = self.d;
        let mut out = vec![0; d * d];
        for j in 0..d {
            for k in 0..d {
                let r = (j + k) % d;
                for l in 0..d {
                    let mut t = zq.mul(self.get(j, (l + d - k) % d), other.get(k, l));
                    if j + k >= d {
                        t = zq.mul(t, self.gamma);
                    }
                    out[r * d + l] = zq.add(out[r * d + l], t);
                }
            }
        }
        Self {
            index: self.index,
            d,
            gamma: self.gamma,
            entries: out,
        }
    }

    /// The `d^2 x d^2` matrix of `Y -> X Y` on `vec(Y)[k * d + l]`.
    pub fn left_mul_matrix(&self, alg: &CyclicAlgebra) -> FqMatrix {
        let zq = alg.ring().modulus();
        let d = self.d;
        let mut m = FqMatrix::zero(d * d, d * d);
        for r in 0..d {
            for k in 0..d {
                let j = (r + d - k) % d;
                for l in 0..d {
                    let x = self.get(j, (l + d - k) % d);
                    m[(r * d + l, k * d + l)] = if r < k { zq.mul(x, self.gamma) } else { x };
                }
            }
        }
        m
    }
}

impl SkewBlocks {
    /// Moves every K-coordinate of `x` to slots and regroups by slot.
    pub fn decompose(alg: &CyclicAlgebra, x: &AElem) -> Self {
        let (n, d) = (alg.n(), alg.d());
        let ring = alg.ring();
        let mut data = Vec::with_capacity(n * d * d);
        for l_elem in x.coords() {
            assert_eq!(l_elem.coords().len(), d, "element has wrong number of l-coordinates");
            for k in l_elem.coords() {
                if k.rep() == Rep::Slot {
                    data.extend_from_slice(k.values());
                } else {
                    data.extend_from_slice(ring.to_slots(k).values());
                }
            }
        }
        assert_eq!(data.len(), n * d * d, "element has wrong number of u-coordinates");
        Self { n, d, data }
    }

    pub fn recompose(&self, alg: &CyclicAlgebra) -> AElem {
        let ring = alg.ring();
        let coords = self
            .data
            .chunks(self.n * self.d)
            .map(|u_chunk| {
                let ks = u_chunk
                    .chunks(self.n)
                    .map(|s| {
                        ring.into_coeffs(ring.from_slots(s.to_vec()).expect("slot vector length"))
                    })
                    .collect();
                alg.tower().from_coords(ks).expect("shape preserved")
            })
            .collect();
        alg.from_coords(coords).expect("shape preserved")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn block(&self, i: usize, alg: &CyclicAlgebra) -> SkewBlock {
        let d = self.d;
        SkewBlock {
            index: i,
            d,
            gamma: alg.gamma().slots()[i],
            entries: (0..d * d).map(|c| self.data[c * self.n + i]).collect(),
        }
    }

    pub fn set_block(&mut self, block: &SkewBlock) {
        assert_eq!(block.entries.len(), self.d * self.d, "block size");
        for (c, &v) in block.entries.iter().enumerate() {
            self.data[c * self.n + block.index] = v;
        }
    }

    fn chunk(&self, j: usize, l: usize) -> &[u64] {
        let start = (j * self.d + l) * self.n;
        &self.data[start..start + self.n]
    }

    /// Blockwise skew product, vectorised across slots: `d^3 n` scalar
    /// products plus `d^2 n` for `gamma`.
    pub fn mul(&self, other: &Self, alg: &CyclicAlgebra) -> Self {
        assert_eq!((self.n, self.d), (other.n, other.d), "block shapes");
        let (n, d) = (self.n, self.d);
        let zq = alg.ring().modulus();
        let mut plain = vec![0u64; n * d * d];
        let mut wrapped = vec![0u64; n * d * d];
        for j in 0..d {
            for k in 0..d {
                let r = (j + k) % d;
                let target = if j + k >= d { &mut wrapped } else { &mut plain };
                for l in 0..d {
                    let xs = self.chunk(j, (l + d - k) % d);
                    let ys = other.chunk(k, l);
                    let start = (r * d + l) * n;
                    let zs = &mut target[start..start + n];
                    for ((z, &x), &y) in zs.iter_mut().zip(xs).zip(ys) {
                        *z = zq.add(*z, zq.mul(x, y));
                    }
                }
            }
        }
        let counters = alg.ring().counters();
        counters.add_slot_mul((d * d * d * n) as u64);
        if d > 1 {
            let g = alg.gamma().slots();
            for (chunk_p, chunk_w) in plain.chunks_mut(n).zip(wrapped.chunks(n)) {
                for ((p, &w), &gs) in chunk_p.iter_mut().zip(chunk_w).zip(g) {
                    *p = zq.add(*p, zq.mul(w, gs));
                }
            }
            counters.add_slot_mul((d * d * n) as u64);
        }
        Self { n, d, data: plain }
    }

    pub fn is_invertible(&self, alg: &CyclicAlgebra) -> bool {
        let zq = alg.ring().modulus();
        (0..self.n).all(|i| self.block(i, alg).left_mul_matrix(alg).is_invertible(zq))
    }

    /// Solves `X Z = 1` in every block.
    pub fn invert(&self, alg: &CyclicAlgebra) -> Result<Self> {
        let zq = alg.ring().modulus();
        let d = self.d;
        let mut one = vec![0u64; d * d];
        one[..d].fill(1);
        let mut out = self.clone();
        for i in 0..self.n {
            let block = self.block(i, alg);
            let z = block
                .left_mul_matrix(alg)
                .solve(&one, zq)
                .ok_or(ClweError::NotInvertible)?;
            out.set_block(&SkewBlock {
                index: i,
                d,
                gamma: block.gamma,
                entries: z,
            });
        }
        Ok(out)
    }
}
