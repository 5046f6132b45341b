//! Parameter packs for concrete cyclic algebras, the built-in registry,
//! validation, and the searches for moduli that split completely.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::CyclicAlgebra;
use crate::base_ring::{
    euler_phi, gcd, is_prime, is_quadratic_residue, prime_power_base, Modulus, MAX_MODULUS,
};
use crate::error::{ClweError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    Subfield,
    Compositum,
    Toy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub construction: Construction,
    pub q_prime: Option<u64>,
    /// Declared, not verified, that `q` splits completely in `L`.
    #[serde(rename = "split_in_L")]
    pub split_in_l: bool,
}

/// One cyclic algebra instance. `gamma = zeta_{m*}^t`, `m* = lcm(2, m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamPack {
    pub m: u64,
    pub n: u64,
    pub d: u64,
    pub q: u64,
    pub gamma_exponent: u64,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    ZeroConductor,
    ZeroDegree,
    ModulusOutOfRange(u64),
    ModulusNotPrime(u64),
    ModulusNotOneModM { q: u64, m: u64 },
    WrongDimension { m: u64, expected: u64, actual: u64 },
    ConductorNotPrimePower(u64),
    DegreeNotDividing { d: u64, m: u64 },
    GammaNotCoprime { t: u64, m: u64 },
    GammaTrivial,
    QPrimeNotPrime(u64),
    QPrimeNotOneModM { q_prime: u64, m: u64 },
    QPrimeOneModPM { q_prime: u64, pm: u64 },
    NotSplit,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ZeroConductor => write!(f, "conductor m must be positive"),
            Self::ZeroDegree => write!(f, "degree d must be positive"),
            Self::ModulusOutOfRange(q) => write!(f, "q = {q} outside [2, {MAX_MODULUS}]"),
            Self::ModulusNotPrime(q) => write!(f, "q = {q} is not prime"),
            Self::ModulusNotOneModM { q, m } => write!(f, "q = {q} is not 1 mod {m}"),
            Self::WrongDimension { m, expected, actual } => {
                write!(f, "n = {actual} but phi({m}) = {expected}")
            }
            Self::ConductorNotPrimePower(m) => write!(f, "m = {m} is not a prime power"),
            Self::DegreeNotDividing { d, m } => write!(f, "d = {d} does not divide m = {m}"),
            Self::GammaNotCoprime { t, m } => write!(f, "gamma exponent {t} not coprime to {m}"),
            Self::GammaTrivial => write!(f, "gamma = 1 gives a split algebra"),
            Self::QPrimeNotPrime(p) => write!(f, "q' = {p} is not prime"),
            Self::QPrimeNotOneModM { q_prime, m } => write!(f, "q' = {q_prime} is not 1 mod {m}"),
            Self::QPrimeOneModPM { q_prime, pm } => write!(f, "q' = {q_prime} is 1 mod {pm}"),
            Self::NotSplit => write!(f, "fast path needs q declared split in L"),
        }
    }
}

impl ParamPack {
    pub fn new(m: u64, d: u64, q: u64, gamma_exponent: u64, provenance: Provenance) -> Self {
        Self {
            m,
            n: euler_phi(m.max(1)),
            d,
            q,
            gamma_exponent,
            provenance,
        }
    }

    /// Short identifier such as `m512-d2-q12289`.
    pub fn label(&self) -> String {
        format!("m{}-d{}-q{}", self.m, self.d, self.q)
    }

    /// `N = n d^2`.
    pub fn total_dimension(&self) -> u64 {
        self.n * self.d * self.d
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| ClweError::Format(format!("parameter pack: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("pack serialises")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ClweError::Format(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Every rule violated by the pack; empty means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let (m, d, q, t) = (self.m, self.d, self.q, self.gamma_exponent);
        if m == 0 {
            out.push(Violation::ZeroConductor);
        }
        if d == 0 {
            out.push(Violation::ZeroDegree);
        }
        if !(2..=MAX_MODULUS).contains(&q) {
            out.push(Violation::ModulusOutOfRange(q));
        } else if !is_prime(q) {
            out.push(Violation::ModulusNotPrime(q));
        }
        if m == 0 || d == 0 {
            return out;
        }
        if q >= 1 && (q - 1) % m != 0 {
            out.push(Violation::ModulusNotOneModM { q, m });
        }
        let phi = euler_phi(m);
        if self.n != phi {
            out.push(Violation::WrongDimension {
                m,
                expected: phi,
                actual: self.n,
            });
        }
        let construction = self.provenance.construction;
        if construction == Construction::Subfield {
            match prime_power_base(m) {
                None => out.push(Violation::ConductorNotPrimePower(m)),
                Some(p) => {
                    if let Some(qp) = self.provenance.q_prime {
                        if is_prime(qp) && (qp - 1) % (p * m) == 0 {
                            out.push(Violation::QPrimeOneModPM {
                                q_prime: qp,
                                pm: p * m,
                            });
                        }
                    }
                }
            }
            if m % d != 0 {
                out.push(Violation::DegreeNotDividing { d, m });
            }
        }
        if construction != Construction::Compositum && gcd(t, m) != 1 {
            out.push(Violation::GammaNotCoprime { t, m });
        }
        let order = if m % 2 == 0 { m } else { 2 * m };
        if d > 1 && t % order == 0 {
            out.push(Violation::GammaTrivial);
        }
        if let Some(qp) = self.provenance.q_prime {
            if !is_prime(qp) {
                out.push(Violation::QPrimeNotPrime(qp));
            } else if (qp - 1) % m != 0 {
                out.push(Violation::QPrimeNotOneModM { q_prime: qp, m });
            }
        }
        out
    }

    /// [`ParamPack::validate`] plus the declared complete splitting that the
    /// block multiplication relies on.
    pub fn validate_fast_path(&self) -> Vec<Violation> {
        let mut out = self.validate();
        if !self.provenance.split_in_l {
            out.push(Violation::NotSplit);
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// The algebra described by a valid pack.
    pub fn instantiate(&self) -> Result<CyclicAlgebra> {
        let violations = self.validate();
        if let Some(v) = violations.first() {
            return Err(ClweError::Params(format!("{}: {v}", self.label())));
        }
        CyclicAlgebra::from_params(self.m, self.d as usize, self.q, self.gamma_exponent)
    }
}

fn subfield(m: u64, d: u64, q: u64, t: u64, q_prime: Option<u64>) -> ParamPack {
    ParamPack::new(
        m,
        d,
        q,
        t,
        Provenance {
            construction: Construction::Subfield,
            q_prime,
            split_in_l: true,
        },
    )
}

fn compositum(m: u64, d: u64, q: u64, t: u64) -> ParamPack {
    ParamPack::new(
        m,
        d,
        q,
        t,
        Provenance {
            construction: Construction::Compositum,
            q_prime: None,
            split_in_l: false,
        },
    )
}

fn toy(m: u64, d: u64, q: u64, t: u64) -> ParamPack {
    ParamPack::new(
        m,
        d,
        q,
        t,
        Provenance {
            construction: Construction::Toy,
            q_prime: None,
            split_in_l: true,
        },
    )
}

/// The sample algebras (nine rows: six subfield, three compositum), the
/// quartic reference modulus and the toy packs.
pub fn registry() -> Vec<ParamPack> {
    vec![
        subfield(81, 3, 26407, 2, Some(163)),
        subfield(256, 2, 7681, 1, Some(257)),
        subfield(64, 4, 3329, 1, Some(193)),
        subfield(512, 2, 12289, 1, Some(7681)),
        subfield(128, 4, 3329, 1, None),
        subfield(243, 3, 1_183_411, 2, Some(487)),
        compositum(192, 3, 3457, 64),
        compositum(576, 2, 3457, 9),
        compositum(384, 3, 3457, 128),
        subfield(256, 4, 10753, 1, None),
        toy(1, 2, 5, 1),
        toy(1, 2, 3, 1),
        toy(16, 2, 97, 1),
    ]
}

/// Registry entry with the given `(m, d, q)`.
pub fn find_pack(m: u64, d: u64, q: u64) -> Option<ParamPack> {
    registry().into_iter().find(|p| (p.m, p.d, p.q) == (m, d, q))
}

/// Primes `q = 1 mod m`, `q <= max`, in which the quadratic subfield of
/// `Q(zeta_{q'})` splits: its discriminant `+-q'` is a square mod `q`.
pub fn find_q_quadratic(m: u64, q_prime: u64, max: u64) -> Result<Vec<u64>> {
    if m == 0 || !is_prime(q_prime) || q_prime == 2 || !(q_prime - 1).is_multiple_of(m) {
        return Err(ClweError::Params(format!(
            "q' = {q_prime} must be an odd prime that is 1 mod {m}"
        )));
    }
    let disc: i64 = if q_prime % 4 == 1 {
        q_prime as i64
    } else {
        -(q_prime as i64)
    };
    let mut out = Vec::new();
    let mut q = m + 1;
    while q <= max.min(MAX_MODULUS) {
        if q != q_prime && q > 2 && is_prime(q) {
            let a = Modulus::new(q)?.from_i64(disc);
            if is_quadratic_residue(a, q)? {
                out.push(q);
            }
        }
        q += m;
    }
    Ok(out)
}

/// Primes `q = 1 mod m q'` with `q <= max`; these split in `Q(zeta_{m q'})`
/// and therefore in every subfield.
pub fn find_q_naive(m: u64, q_prime: u64, max: u64) -> Result<Vec<u64>> {
    if m == 0 || q_prime == 0 {
        return Err(ClweError::Params("m and q' must be positive".into()));
    }
    let step = m
        .checked_mul(q_prime)
        .ok_or_else(|| ClweError::Params("m q' overflows".into()))?;
    let mut out = Vec::new();
    let mut q = step + 1;
    while q <= max {
        if is_prime(q) {
            out.push(q);
        }
        q = match q.checked_add(step) {
            Some(v) => v,
            None => break,
        };
    }
    Ok(out)
}

/// First-principles check that `(-1, -1)` over `Q` is a division algebra:
/// a norm from `Q(i)` is `x^2 + y^2 >= 0`, so the negative `gamma = -1` is
/// never a norm.
pub fn verify_quaternion_nonnorm() -> bool {
    let gamma: i64 = -1;
    let norm = |x: i64, y: i64| x * x + y * y;
    // every norm is a sum of two squares, hence non-negative
    let sample_norms_nonnegative = (-50..=50).all(|x| (-50..=50).all(|y| norm(x, y) >= 0));
    gamma < 0 && sample_norms_nonnegative && norm(2, 1) == 5
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `q` splits completely in the degree-`d` subfield of `Q(zeta_{q'})`
    /// exactly when `q^((q'-1)/d) = 1 mod q'`.
    fn splits_in_prime_cyclotomic_subfield(q: u64, q_prime: u64, d: u64) -> bool {
        let zp = Modulus::new(q_prime).unwrap();
        zp.pow(q % q_prime, (q_prime - 1) / d) == 1
    }

    #[test]
    fn registry_packs_are_valid() {
        for pack in registry() {
            assert!(pack.validate().is_empty(), "{}: {:?}", pack.label(), pack.validate());
        }
    }

    #[test]
    fn table_dimensions() {
        let want = [
            (81, 54, 3, 486),
            (256, 128, 2, 512),
            (64, 32, 4, 512),
            (512, 256, 2, 1024),
            (128, 64, 4, 1024),
            (243, 162, 3, 1458),
            (192, 64, 3, 576),
            (576, 192, 2, 768),
            (384, 128, 3, 1152),
        ];
        let reg = registry();
        for (pack, (m, n, d, big_n)) in reg.iter().zip(want) {
            assert_eq!((pack.m, pack.n, pack.d, pack.total_dimension()), (m, n, d, big_n));
        }
    }

    #[test]
    fn declared_splitting_matches_residue_test() {
        for pack in registry() {
            if let Some(qp) = pack.provenance.q_prime {
                assert!(
                    splits_in_prime_cyclotomic_subfield(pack.q, qp, pack.d),
                    "{}",
                    pack.label()
                );
            }
        }
        // 3329 does not split in the quartic subfield for q' = 641
        assert!(!splits_in_prime_cyclotomic_subfield(3329, 641, 4));
    }

    #[test]
    fn validation_examples() {
        let ok = find_pack(512, 2, 12289).unwrap();
        assert!(ok.is_valid());
        assert_eq!(12288, 24 * 512);
        assert_eq!(3328, 26 * 128);
        let mut bad = ok.clone();
        bad.d = 3;
        assert!(bad.validate().contains(&Violation::DegreeNotDividing { d: 3, m: 512 }));
        let mut bad = ok.clone();
        bad.q = 12291;
        assert!(bad.validate().contains(&Violation::ModulusNotPrime(12291)));
        let mut bad = ok.clone();
        bad.gamma_exponent = 2;
        assert!(bad.validate().contains(&Violation::GammaNotCoprime { t: 2, m: 512 }));
        let mut bad = ok.clone();
        bad.gamma_exponent = 0;
        assert!(bad.validate().contains(&Violation::GammaTrivial));
        let comp = find_pack(192, 3, 3457).unwrap();
        assert!(comp.is_valid());
        assert!(comp.validate_fast_path().contains(&Violation::NotSplit));
        let mut bad = ok;
        bad.provenance.q_prime = Some(12289);
        assert!(!bad.is_valid());
    }

    #[test]
    fn json_round_trip_uses_fixed_field_names() {
        let pack = find_pack(16, 2, 97).unwrap();
        let text = pack.to_json();
        for key in ["\"m\"", "\"n\"", "\"d\"", "\"q\"", "\"gamma_exponent\"", "\"split_in_L\"", "\"q_prime\""] {
            assert!(text.contains(key), "{key} missing from {text}");
        }
        assert_eq!(ParamPack::from_json(&text).unwrap(), pack);
        assert!(ParamPack::from_json("{\"m\": 1}").is_err());
    }

    #[test]
    fn quadratic_search() {
        let found = find_q_quadratic(512, 7681, 1 << 14).unwrap();
        assert_eq!(found, vec![10753, 11777, 12289, 13313, 15361]);
        // oracle: a full table of squares mod each candidate
        for (m, qp, max) in [(512u64, 7681u64, 1u64 << 14), (256, 257, 16_000)] {
            let found = find_q_quadratic(m, qp, max).unwrap();
            for q in (m + 1..=max).step_by(m as usize).filter(|&q| is_prime(q) && q != qp) {
                let squares: std::collections::HashSet<u64> = (1..q).map(|x| x * x % q).collect();
                let disc = if qp % 4 == 1 { qp % q } else { q - qp % q };
                assert_eq!(found.contains(&q), squares.contains(&disc), "m = {m}, q = {q}");
            }
        }
        assert!(find_q_quadratic(256, 257, 16_000).unwrap().contains(&7681));
        assert!(find_q_quadratic(512, 7680, 1000).is_err());
    }

    #[test]
    fn naive_search() {
        assert_eq!(find_q_naive(81, 163, 30_000).unwrap(), vec![26407]);
        assert!(find_q_naive(512, 7681, 3_932_672).unwrap().is_empty());
        let first = find_q_naive(512, 7681, 200_000_000).unwrap()[0];
        assert!(first > 3_932_672);
        assert_eq!(find_q_naive(128, 641, 1_000_000).unwrap()[0], 820_481);
        assert!(find_pack(256, 4, 10753).unwrap().is_valid());
    }

    #[test]
    fn quaternion_nonnorm() {
        assert!(verify_quaternion_nonnorm());
        // gamma = 1 would be the norm of 1
        let mut pack = find_pack(1, 2, 5).unwrap();
        pack.gamma_exponent = 2;
        assert!(pack.validate().contains(&Violation::GammaTrivial));
    }
}
