//! Pairwise difference sets in `M_d(F_q)`: the image of `F_{q^d}` under the
//! regular representation, realised as polynomials in the companion matrix
//! of a random monic irreducible polynomial of degree `d`. Distinct members
//! differ by a nonzero field element, hence by an invertible matrix.

use rand::Rng;

use crate::base_ring::Modulus;
use crate::error::{ClweError, Result};
use crate::linalg::FqMatrix;

/// Largest `q^d` for which [`DifferenceSet::verify`] runs.
pub const VERIFY_LIMIT: u64 = 10_000;

#[derive(Clone, Debug)]
pub struct DifferenceSet {
    zq: Modulus,
    d: usize,
    poly: Vec<u64>,
    companion: FqMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub members: u64,
    pub distinct: bool,
    pub pairs_checked: u64,
    pub all_invertible: bool,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.distinct && self.all_invertible
    }
}

impl DifferenceSet {
    pub fn build<R: Rng + ?Sized>(q: u64, d: usize, rng: &mut R) -> Result<Self> {
        let zq = Modulus::new(q)?;
        if d == 0 {
            return Err(ClweError::Params("degree must be positive".into()));
        }
        loop {
            let mut poly: Vec<u64> = (0..d).map(|_| rng.random_range(0..q)).collect();
            poly.push(1);
            if is_irreducible(&poly, &zq) {
                return Self::from_poly(q, poly);
            }
        }
    }

    /// From a given monic polynomial, low degree first.
    pub fn from_poly(q: u64, poly: Vec<u64>) -> Result<Self> {
        let zq = Modulus::new(q)?;
        let d = poly.len().saturating_sub(1);
        if d == 0 || poly[d] != 1 {
            return Err(ClweError::Params("generator must be monic of positive degree".into()));
        }
        if !is_irreducible(&poly, &zq) {
            return Err(ClweError::Params("generator polynomial is reducible".into()));
        }
        let mut companion = FqMatrix::zero(d, d);
        for i in 1..d {
            companion[(i, i - 1)] = 1;
        }
        for i in 0..d {
            companion[(i, d - 1)] = zq.neg(poly[i]);
        }
        Ok(Self {
            zq,
            d,
            poly,
            companion,
        })
    }

    pub fn q(&self) -> u64 {
        self.zq.value()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn generator(&self) -> &[u64] {
        &self.poly
    }

    pub fn companion(&self) -> &FqMatrix {
        &self.companion
    }

    pub fn size(&self) -> u64 {
        self.q().pow(self.d as u32)
    }

    /// `sum_i c_i C^i` for the companion matrix `C`.
    pub fn member(&self, coeffs: &[u64]) -> FqMatrix {
        assert_eq!(coeffs.len(), self.d, "member needs d coefficients");
        let mut acc = FqMatrix::zero(self.d, self.d);
        let mut power = FqMatrix::identity(self.d);
        for &c in coeffs {
            acc = acc.add(&power.scale(self.zq.reduce(c), &self.zq), &self.zq);
            power = power.mul(&self.companion, &self.zq);
        }
        acc
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> FqMatrix {
        let c: Vec<u64> = (0..self.d).map(|_| rng.random_range(0..self.q())).collect();
        self.member(&c)
    }

    /// All `q^d` members, in base-`q` order of their coefficient vectors.
    pub fn members(&self) -> Result<Vec<FqMatrix>> {
        let size = self.size();
        if size > VERIFY_LIMIT {
            return Err(ClweError::TooLarge(size));
        }
        let q = self.q();
        Ok((0..size)
            .map(|mut k| {
                let c: Vec<u64> = (0..self.d)
                    .map(|_| {
                        let v = k % q;
                        k /= q;
                        v
                    })
                    .collect();
                self.member(&c)
            })
            .collect())
    }

    /// Brute force over all pairs of distinct members.
    pub fn verify(&self) -> Result<VerifyReport> {
        let members = self.members()?;
        let mut distinct = true;
        let mut all_invertible = true;
        let mut pairs = 0u64;
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                pairs += 1;
                if a == b {
                    distinct = false;
                }
                if !a.sub(b, &self.zq).is_invertible(&self.zq) {
                    all_invertible = false;
                }
            }
        }
        Ok(VerifyReport {
            members: members.len() as u64,
            distinct,
            pairs_checked: pairs,
            all_invertible,
        })
    }
}

fn trim(mut p: Vec<u64>) -> Vec<u64> {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

fn poly_rem(a: &[u64], f: &[u64], zq: &Modulus) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let df = f.len() - 1;
    let lead_inv = zq.inv(f[df]).expect("nonzero leading coefficient");
    while r.len() > df {
        let shift = r.len() - 1 - df;
        let c = zq.mul(*r.last().expect("nonempty"), lead_inv);
        for (i, &fi) in f.iter().enumerate() {
            r[shift + i] = zq.sub(r[shift + i], zq.mul(c, fi));
        }
        r = trim(r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], zq: &Modulus) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = zq.add(out[i + j], zq.mul(x, y));
        }
    }
    poly_rem(&out, f, zq)
}

fn poly_powmod(base: &[u64], mut e: u64, f: &[u64], zq: &Modulus) -> Vec<u64> {
    let mut acc = poly_rem(&[1], f, zq);
    let mut b = poly_rem(base, f, zq);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, f, zq);
        }
        b = poly_mulmod(&b, &b, f, zq);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], zq: &Modulus) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, zq);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or: `f` of degree `d` is irreducible iff
/// `gcd(x^(q^i) - x, f) = 1` for every `i <= d/2`.
pub fn is_irreducible(f: &[u64], zq: &Modulus) -> bool {
    let f = trim(f.to_vec());
    let d = match f.len() {
        0 | 1 => return false,
        len => len - 1,
    };
    let q = zq.value();
    let mut h = poly_rem(&[0, 1], &f, zq);
    for _ in 0..d / 2 {
        h = poly_powmod(&h, q, &f, zq);
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = zq.sub(diff[1], 1);
        let g = poly_gcd(&f, &diff, zq);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    /// Reducible iff some monic polynomial of degree `1..=d/2` divides `f`.
    fn irreducible_by_trial_division(f: &[u64], zq: &Modulus) -> bool {
        let d = f.len() - 1;
        let q = zq.value();
        for deg in 1..=d / 2 {
            for k in 0..q.pow(deg as u32) {
                let mut g: Vec<u64> = (0..deg).map(|i| k / q.pow(i as u32) % q).collect();
                g.push(1);
                if poly_rem(f, &g, zq).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn ben_or_matches_trial_division() {
        for (q, d) in [(2u64, 4usize), (3, 2), (3, 3), (3, 4), (5, 2), (5, 3)] {
            let zq = Modulus::new(q).unwrap();
            let mut irreducible = 0u64;
            for k in 0..q.pow(d as u32) {
                let mut f: Vec<u64> = (0..d).map(|i| k / q.pow(i as u32) % q).collect();
                f.push(1);
                let got = is_irreducible(&f, &zq);
                assert_eq!(got, irreducible_by_trial_division(&f, &zq), "q={q} f={f:?}");
                irreducible += got as u64;
            }
            // Gauss's count of monic irreducibles
            let expected = match d {
                2 => (q * q - q) / 2,
                3 => (q * q * q - q) / 3,
                4 => (q.pow(4) - q * q) / 4,
                _ => unreachable!(),
            };
            assert_eq!(irreducible, expected, "q={q} d={d}");
        }
    }

    #[test]
    fn q3_d2_all_pairs_invertible() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let ds = DifferenceSet::build(3, 2, &mut rng).unwrap();
        let report = ds.verify().unwrap();
        assert!(report.passed());
        assert_eq!(report.members, 9);
        assert_eq!(report.pairs_checked, 36);
    }

    #[test]
    fn q3_d4_has_81_members_and_3240_pairs() {
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        let report = DifferenceSet::build(3, 4, &mut rng).unwrap().verify().unwrap();
        assert!(report.passed());
        assert_eq!(report.members, 81);
        assert_eq!(report.pairs_checked, 3240);
    }

    #[test]
    fn zero_and_identity_are_members() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let ds = DifferenceSet::build(7, 3, &mut rng).unwrap();
        let zq = Modulus::new(7).unwrap();
        let zero = ds.member(&[0, 0, 0]);
        let one = ds.member(&[1, 0, 0]);
        assert_eq!(one.sub(&zero, &zq), FqMatrix::identity(3));
        let a = ds.sample(&mut rng);
        let b = ds.sample(&mut rng);
        let sum = a.add(&b, &zq);
        // closed under products too: the image of a field
        let prod = a.mul(&b, &zq);
        let members = ds.members().unwrap();
        assert!(members.contains(&sum) && members.contains(&prod));
    }

    #[test]
    fn verify_refuses_large_sets() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let ds = DifferenceSet::build(97, 3, &mut rng).unwrap();
        assert_eq!(ds.verify().unwrap_err(), ClweError::TooLarge(912_673));
        assert!(DifferenceSet::from_poly(3, vec![2, 0, 1]).is_err());
    }
}
