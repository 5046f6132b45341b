//! Arithmetic in the prime field F_q and the elementary number theory the
//! rest of the crate relies on (primality, generators, residuosity).

use crate::error::{ClweError, Result};

/// Largest modulus accepted anywhere in the crate. Products of two reduced
/// residues must fit in 62 bits for the Barrett step, and the wire format
/// stores residues as 32-bit words.
pub const MAX_MODULUS: u64 = (1 << 31) - 1;

/// A prime modulus with a precomputed Barrett constant.
///
/// Residues are plain `u64` values in `[0, q)`; the modulus carries no
/// per-element state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Modulus {
    q: u64,
    barrett: u64,
}

impl Modulus {
    pub fn new(q: u64) -> Result<Self> {
        if !(2..=MAX_MODULUS).contains(&q) {
            return Err(ClweError::Params(format!(
                "modulus {q} outside [2, {MAX_MODULUS}]"
            )));
        }
        if !is_prime(q) {
            return Err(ClweError::Params(format!("modulus {q} is not prime")));
        }
        Ok(Self {
            q,
            barrett: ((1u128 << 64) / q as u128) as u64,
        })
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.q
    }

    /// Reduces any `x < 2^64`.
    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        let qhat = ((x as u128 * self.barrett as u128) >> 64) as u64;
        let mut r = x.wrapping_sub(qhat.wrapping_mul(self.q));
        // qhat undershoots by at most 2 over the full u64 range
        if r >= self.q {
            r -= self.q;
        }
        if r >= self.q {
            r -= self.q;
        }
        debug_assert!(r < self.q);
        r
    }

    #[inline]
    pub fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64) as u64
    }

    /// Centered representative in `(-q/2, q/2]`.
    #[inline]
    pub fn center(&self, x: u64) -> i64 {
        if x > self.q / 2 {
            x as i64 - self.q as i64
        } else {
            x as i64
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }

    pub fn pow(&self, base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.q;
        let mut b = self.reduce(base);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat; `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        let a = self.reduce(a);
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.q - 2))
        }
    }

    /// `round(q/2)`, the scaling factor for a message bit.
    pub fn half(&self) -> u64 {
        self.q.div_ceil(2)
    }

    /// Precomputed companion for [`Modulus::mul_shoup`].
    #[inline]
    pub fn shoup(&self, w: u64) -> u64 {
        (((w as u128) << 64) / self.q as u128) as u64
    }

    /// `a * w mod q` using the precomputed `w_shoup = shoup(w)`; requires `a < q`.
    #[inline]
    pub fn mul_shoup(&self, a: u64, w: u64, w_shoup: u64) -> u64 {
        let qhat = ((a as u128 * w_shoup as u128) >> 64) as u64;
        let r = a.wrapping_mul(w).wrapping_sub(qhat.wrapping_mul(self.q));
        if r >= self.q {
            r - self.q
        } else {
            r
        }
    }
}

fn mul_mod_u64(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn pow_mod_u64(mut b: u64, mut e: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    b %= n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, b, n);
        }
        b = mul_mod_u64(b, b, n);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Distinct prime factors in ascending order, by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn euler_phi(m: u64) -> u64 {
    prime_factors(m)
        .into_iter()
        .fold(m, |acc, p| acc / p * (p - 1))
}

/// `Some(p)` when `m = p^k` for a prime `p` and `k >= 1`.
pub fn prime_power_base(m: u64) -> Option<u64> {
    match prime_factors(m).as_slice() {
        [p] => Some(*p),
        _ => None,
    }
}

/// Smallest generator of `F_q^*`.
pub fn multiplicative_generator(q: u64) -> Result<u64> {
    let zq = Modulus::new(q)?;
    if q == 2 {
        return Ok(1);
    }
    let factors = prime_factors(q - 1);
    (2..q)
        .find(|&g| factors.iter().all(|&p| zq.pow(g, (q - 1) / p) != 1))
        .ok_or_else(|| ClweError::Params(format!("no generator found mod {q}")))
}

/// Euler's criterion: `a` is a nonzero square mod the odd prime `q`.
pub fn is_quadratic_residue(a: u64, q: u64) -> Result<bool> {
    let zq = Modulus::new(q)?;
    if q == 2 {
        return Err(ClweError::Params("quadratic residuosity needs an odd prime".into()));
    }
    let a = zq.reduce(a);
    if a == 0 {
        return Err(ClweError::Degenerate(format!("0 mod {q} has no residue symbol")));
    }
    Ok(zq.pow(a, (q - 1) / 2) == 1)
}

/// An element of exact multiplicative order `m`, namely `g^((q-1)/m)` for the
/// smallest generator `g`.
pub fn primitive_root_of_unity(q: u64, m: u64) -> Result<u64> {
    if q < 2 || m == 0 || !(q - 1).is_multiple_of(m) {
        return Err(ClweError::Params(format!("{q} is not 1 mod {m}")));
    }
    let zq = Modulus::new(q)?;
    let g = multiplicative_generator(q)?;
    Ok(zq.pow(g, (q - 1) / m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact_order(x: u64, q: u64) -> u64 {
        let mut acc = x % q;
        let mut k = 1;
        while acc != 1 {
            acc = acc * x % q;
            k += 1;
        }
        k
    }

    #[test]
    fn primality_small_and_known() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            small,
            [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        for p in [97, 257, 3329, 7681, 10753, 12289, 26407, 1_183_411] {
            assert!(is_prime(p), "{p}");
        }
        assert!(!is_prime(3_932_673 * 3));
        assert!(!is_prime(561));
    }

    #[test]
    fn barrett_matches_remainder() {
        let zq = Modulus::new(12289).unwrap();
        for x in [0u64, 1, 12288, 12289, 12290, 12288 * 12288, u64::MAX] {
            assert_eq!(zq.reduce(x), x % 12289);
        }
        let big = Modulus::new(2_147_483_647).unwrap();
        let a = 2_147_483_646;
        assert_eq!(big.mul(a, a), 1);
        let w = 123_456_789;
        assert_eq!(big.mul_shoup(a, w, big.shoup(w)), big.mul(a, w));
    }

    #[test]
    fn quadratic_residue_examples() {
        assert!(is_quadratic_residue(7681, 12289).unwrap());
        assert_eq!(3788u64 * 3788 % 12289, 7681);
        for q in [3, 5, 97, 12289] {
            assert!(is_quadratic_residue(1, q).unwrap());
        }
        assert!(is_quadratic_residue(0, 12289).is_err());
        assert!(is_quadratic_residue(12289, 12289).is_err());
    }

    #[test]
    fn least_non_residue_mod_12289_matches_square_table() {
        let q = 12289u64;
        let mut is_square = vec![false; q as usize];
        for x in 1..q {
            is_square[(x * x % q) as usize] = true;
        }
        let least = (1..q).find(|&a| !is_square[a as usize]).unwrap();
        assert!(!is_quadratic_residue(least, q).unwrap());
        for a in 1..200 {
            assert_eq!(is_quadratic_residue(a, q).unwrap(), is_square[a as usize]);
        }
    }

    #[test]
    fn roots_of_unity_have_exact_order() {
        assert_eq!(primitive_root_of_unity(5, 4).unwrap(), 2);
        assert_eq!(exact_order(2, 5), 4);
        assert_eq!(primitive_root_of_unity(97, 1).unwrap(), 1);
        let z = primitive_root_of_unity(97, 16).unwrap();
        assert_eq!(exact_order(z, 97), 16);
        for (q, m) in [(12289, 512), (12289, 1024), (7681, 256), (26407, 162), (3457, 576)] {
            let z = primitive_root_of_unity(q, m).unwrap();
            assert_eq!(exact_order(z, q), m, "q={q} m={m}");
        }
        assert!(primitive_root_of_unity(3329, 512).is_err());
    }

    #[test]
    fn phi_and_prime_powers() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(81), 54);
        assert_eq!(euler_phi(512), 256);
        assert_eq!(euler_phi(576), 192);
        assert_eq!(prime_power_base(243), Some(3));
        assert_eq!(prime_power_base(192), None);
        assert_eq!(prime_power_base(1), None);
    }
}
