//! In-place negacyclic NTT over Z_q[x]/(x^n + 1) for power-of-two `n`.
//!
//! Forward uses Cooley-Tukey butterflies with twiddles in bit-reversed
//! order, so output index `i` holds the evaluation at `psi^(2 * brv(i) + 1)`.
//! The inverse runs Gentleman-Sande with inverse twiddles and scales by
//! `n^-1`. Twiddle multiplications use Shoup's precomputed quotients.

use super::field::Modulus;

#[derive(Clone, Debug)]
pub struct NegacyclicNtt {
    n: usize,
    log_n: u32,
    zq: Modulus,
    twiddles: Vec<u64>,
    twiddles_shoup: Vec<u64>,
    inv_twiddles: Vec<u64>,
    inv_twiddles_shoup: Vec<u64>,
    n_inv: u64,
    n_inv_shoup: u64,
}

pub(crate) fn bit_reverse(x: usize, bits: u32) -> usize {
    if bits == 0 {
        0
    } else {
        x.reverse_bits() >> (usize::BITS - bits)
    }
}

impl NegacyclicNtt {
    /// `psi` must be a primitive `2n`-th root of unity mod `q`.
    pub fn new(n: usize, psi: u64, zq: Modulus) -> Self {
        assert!(n.is_power_of_two(), "negacyclic NTT needs a power-of-two size");
        let log_n = n.trailing_zeros();
        let psi_inv = zq.inv(psi).expect("root of unity is a unit");
        let twiddles: Vec<u64> = (0..n)
            .map(|k| zq.pow(psi, bit_reverse(k, log_n) as u64))
            .collect();
        let inv_twiddles: Vec<u64> = (0..n)
            .map(|k| zq.pow(psi_inv, bit_reverse(k, log_n) as u64))
            .collect();
        let n_inv = zq.inv(n as u64 % zq.value()).expect("n invertible mod q");
        Self {
            n,
            log_n,
            twiddles_shoup: twiddles.iter().map(|&w| zq.shoup(w)).collect(),
            inv_twiddles_shoup: inv_twiddles.iter().map(|&w| zq.shoup(w)).collect(),
            twiddles,
            inv_twiddles,
            n_inv,
            n_inv_shoup: zq.shoup(n_inv),
            zq,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn log_len(&self) -> u32 {
        self.log_n
    }

    pub fn forward(&self, a: &mut [u64]) {
        assert_eq!(a.len(), self.n);
        let zq = &self.zq;
        let mut k = 0;
        let mut len = self.n / 2;
        while len >= 1 {
            for start in (0..self.n).step_by(2 * len) {
                k += 1;
                let (w, ws) = (self.twiddles[k], self.twiddles_shoup[k]);
                for j in start..start + len {
                    let t = zq.mul_shoup(a[j + len], w, ws);
                    a[j + len] = zq.sub(a[j], t);
                    a[j] = zq.add(a[j], t);
                }
            }
            len >>= 1;
        }
    }

    pub fn inverse(&self, a: &mut [u64]) {
        assert_eq!(a.len(), self.n);
        let zq = &self.zq;
        let mut len = 1;
        while len < self.n {
            let blocks = self.n / (2 * len);
            for b in 0..blocks {
                let k = blocks + b;
                let (w, ws) = (self.inv_twiddles[k], self.inv_twiddles_shoup[k]);
                let start = b * 2 * len;
                for j in start..start + len {
                    let x = a[j];
                    let y = a[j + len];
                    a[j] = zq.add(x, y);
                    a[j + len] = zq.mul_shoup(zq.sub(x, y), w, ws);
                }
            }
            len <<= 1;
        }
        for v in a.iter_mut() {
            *v = zq.mul_shoup(*v, self.n_inv, self.n_inv_shoup);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_ring::field::primitive_root_of_unity;

    #[test]
    fn output_order_is_bit_reversed_odd_powers() {
        let q = 97;
        let zq = Modulus::new(q).unwrap();
        let n = 8;
        let psi = primitive_root_of_unity(q, 16).unwrap();
        let ntt = NegacyclicNtt::new(n, psi, zq);
        let poly: Vec<u64> = (0..n as u64).map(|i| (7 * i + 3) % q).collect();
        let mut a = poly.clone();
        ntt.forward(&mut a);
        for (i, &v) in a.iter().enumerate() {
            let root = zq.pow(psi, 2 * bit_reverse(i, 3) as u64 + 1);
            let eval = poly
                .iter()
                .rev()
                .fold(0, |acc, &c| zq.add(zq.mul(acc, root), c));
            assert_eq!(v, eval, "index {i}");
        }
        ntt.inverse(&mut a);
        assert_eq!(a, poly);
    }
}
