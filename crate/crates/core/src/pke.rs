//! Compact public-key encryption over `Lambda_q`.
//!
//! Keys are a CLWE sample `b = a s + e` with `s` drawn from the error
//! distribution. A ciphertext is `u = phi(a)^T t + e1` and
//! `v = phi(b)^T t + e2 + round(q/2) m`, and decryption rounds
//! `v - phi(s)^T u`. Every `phi(x)^T w` is computed as the product
//! `x' w` in the algebra with `gamma^-1`, where `x'` is the transpose dual
//! of `x`; the explicit transposed matrix serves as a cross-check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::algebra::{AElem, CyclicAlgebra};
use crate::error::{ClweError, Result};
use crate::sampler::{uniform_a, DiscreteGaussian, GaussianParams};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicKey {
    pub a: AElem,
    pub b: AElem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecretKey {
    pub s: AElem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ciphertext {
    pub u: AElem,
    pub v: AElem,
}

/// `n d^2` bits indexed u-index outer, l-index middle, K-coefficient inner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Message {
    bits: Vec<bool>,
}

impl Message {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            bits: vec![false; len],
        }
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Self {
            bits: (0..len).map(|_| rng.random()).collect(),
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Number of positions where the two messages differ.
    pub fn hamming_distance(&self, other: &Self) -> usize {
        self.bits.iter().zip(&other.bits).filter(|(a, b)| a != b).count()
    }
}

/// Key-generation error term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyLog {
    pub e: AElem,
}

/// Encryption randomness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncryptionLog {
    pub t: AElem,
    pub e1: AElem,
    pub e2: AElem,
}

/// Outcome of checking one logged run against the exact residual identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualCheck {
    pub residual: AElem,
    /// Largest centered absolute coefficient of the residual.
    pub max_abs: u64,
    /// `max_abs < round(q/4)`.
    pub within_bound: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FailureReport {
    pub sigma: f64,
    pub trials: usize,
    pub failures: usize,
    pub rate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SigmaSelection {
    /// Largest pilot sigma with no failures, if any.
    pub sigma: Option<f64>,
    pub pilot: Vec<FailureReport>,
}

/// `round(q/4)`, the residual bound for correct decryption.
pub fn residual_bound(q: u64) -> u64 {
    (q + 2) / 4
}

#[derive(Clone, Debug)]
pub struct Pke {
    alg: CyclicAlgebra,
    dual: CyclicAlgebra,
    cross_check: bool,
}

impl Pke {
    pub fn new(alg: CyclicAlgebra) -> Self {
        let dual = alg.dual();
        Self {
            alg,
            dual,
            cross_check: false,
        }
    }

    /// Also evaluate every transposed product through the explicit matrix
    /// and fail with [`ClweError::CrossCheck`] on disagreement.
    pub fn with_cross_check(mut self, on: bool) -> Self {
        self.cross_check = on;
        self
    }

    pub fn algebra(&self) -> &CyclicAlgebra {
        &self.alg
    }

    pub fn dual_algebra(&self) -> &CyclicAlgebra {
        &self.dual
    }

    /// Message length `n d^2`.
    pub fn capacity(&self) -> usize {
        self.alg.dimension()
    }

    /// `phi(x)^T w` through the dual algebra.
    pub fn phi_t(&self, x: &AElem, w: &AElem) -> Result<AElem> {
        let fast = self.dual.mul(&self.alg.transpose_dual(x), w);
        if self.cross_check {
            let explicit = self.phi_t_explicit(x, w);
            if self.alg.to_flat(&fast) != self.alg.to_flat(&explicit) {
                return Err(ClweError::CrossCheck);
            }
        }
        Ok(fast)
    }

    /// `phi(x)^T w` as an L-matrix times an L-vector.
    pub fn phi_t_explicit(&self, x: &AElem, w: &AElem) -> AElem {
        let v = self.alg.phi(x).transpose().apply(self.alg.tower(), w.coords());
        self.alg.from_vec(v).expect("algebra degree")
    }

    pub fn keygen<R: Rng + ?Sized>(&self, gp: &GaussianParams, rng: &mut R) -> (PublicKey, SecretKey) {
        let (pk, sk, _) = self.keygen_logged(gp, rng);
        (pk, sk)
    }

    pub fn keygen_logged<R: Rng + ?Sized>(
        &self,
        gp: &GaussianParams,
        rng: &mut R,
    ) -> (PublicKey, SecretKey, KeyLog) {
        let dg = DiscreteGaussian::new(*gp);
        let s = dg.sample_a(&self.alg, rng);
        let e = dg.sample_a(&self.alg, rng);
        let a = uniform_a(&self.alg, rng);
        let b = self.alg.add(&self.alg.mul(&a, &s), &e);
        (PublicKey { a, b }, SecretKey { s }, KeyLog { e })
    }

    /// Bits as 0/1 coefficients.
    pub fn encode(&self, msg: &Message) -> Result<AElem> {
        if msg.len() != self.capacity() {
            return Err(ClweError::Shape {
                expected: self.capacity(),
                actual: msg.len(),
            });
        }
        let v: Vec<u64> = msg.bits().iter().map(|&b| b as u64).collect();
        self.alg.from_flat(&v)
    }

    /// Coefficient `x` decodes to 1 iff `ceil(q/4) < x <= floor(3q/4)`.
    pub fn decode(&self, x: &AElem) -> Message {
        let q = self.alg.q();
        let (lo, hi) = (q.div_ceil(4), 3 * q / 4);
        Message::new(self.alg.to_flat(x).into_iter().map(|c| lo < c && c <= hi).collect())
    }

    fn scaled_message(&self, msg: &Message) -> Result<AElem> {
        let half = self.alg.ring().modulus().half();
        Ok(self.alg.scalar_mul(&self.encode(msg)?, half))
    }

    pub fn encrypt<R: Rng + ?Sized>(
        &self,
        pk: &PublicKey,
        msg: &Message,
        gp: &GaussianParams,
        rng: &mut R,
    ) -> Result<Ciphertext> {
        Ok(self.encrypt_logged(pk, msg, gp, rng)?.0)
    }

    pub fn encrypt_logged<R: Rng + ?Sized>(
        &self,
        pk: &PublicKey,
        msg: &Message,
        gp: &GaussianParams,
        rng: &mut R,
    ) -> Result<(Ciphertext, EncryptionLog)> {
        let scaled = self.scaled_message(msg)?;
        let dg = DiscreteGaussian::new(*gp);
        let t = dg.sample_a(&self.alg, rng);
        let e1 = dg.sample_a(&self.alg, rng);
        let e2 = dg.sample_a(&self.alg, rng);
        let u = self.alg.add(&self.phi_t(&pk.a, &t)?, &e1);
        let v = self.alg.add(&self.alg.add(&self.phi_t(&pk.b, &t)?, &e2), &scaled);
        Ok((Ciphertext { u, v }, EncryptionLog { t, e1, e2 }))
    }

    /// `v - phi(s)^T u`.
    pub fn decrypt_raw(&self, sk: &SecretKey, ct: &Ciphertext) -> Result<AElem> {
        Ok(self.alg.sub(&ct.v, &self.phi_t(&sk.s, &ct.u)?))
    }

    pub fn decrypt(&self, sk: &SecretKey, ct: &Ciphertext) -> Result<Message> {
        Ok(self.decode(&self.decrypt_raw(sk, ct)?))
    }

    /// Checks `v - phi(s)^T u - round(q/2) m = phi(e)^T t + e2 - phi(s)^T e1`
    /// coefficient by coefficient. The left side uses the dual-algebra
    /// route, the right side the explicit transposed matrices.
    pub fn correctness_residual(
        &self,
        sk: &SecretKey,
        ct: &Ciphertext,
        msg: &Message,
        key: &KeyLog,
        enc: &EncryptionLog,
    ) -> Result<ResidualCheck> {
        let lhs = self.alg.sub(&self.decrypt_raw(sk, ct)?, &self.scaled_message(msg)?);
        let rhs = self.alg.sub(
            &self.alg.add(&self.phi_t_explicit(&key.e, &enc.t), &enc.e2),
            &self.phi_t_explicit(&sk.s, &enc.e1),
        );
        let (l, r) = (self.alg.to_flat(&lhs), self.alg.to_flat(&rhs));
        if let Some(index) = (0..l.len()).find(|&i| l[i] != r[i]) {
            return Err(ClweError::IdentityViolation {
                index,
                lhs: l[index],
                rhs: r[index],
            });
        }
        let zq = self.alg.ring().modulus();
        let max_abs = l.iter().map(|&c| zq.center(c).unsigned_abs()).max().unwrap_or(0);
        Ok(ResidualCheck {
            residual: lhs,
            max_abs,
            within_bound: max_abs < residual_bound(self.alg.q()),
        })
    }

    /// A full keygen, encrypt, decrypt round with a random message; true on
    /// exact recovery.
    pub fn trial<R: Rng + ?Sized>(&self, gp: &GaussianParams, rng: &mut R) -> Result<bool> {
        let (pk, sk) = self.keygen(gp, rng);
        let msg = Message::random(self.capacity(), rng);
        let ct = self.encrypt(&pk, &msg, gp, rng)?;
        Ok(self.decrypt(&sk, &ct)? == msg)
    }

    /// Fraction of failed trials. Trial `i` draws from stream `i` of the
    /// ChaCha20 generator seeded with `seed`, so runs are reproducible and
    /// paired across sigmas.
    pub fn failure_rate(&self, gp: &GaussianParams, trials: usize, seed: u64) -> Result<FailureReport> {
        if trials < 100 {
            return Err(ClweError::Params(format!("need at least 100 trials, got {trials}")));
        }
        let mut failures = 0;
        for i in 0..trials {
            if !self.trial(gp, &mut trial_rng(seed, i as u64))? {
                failures += 1;
            }
        }
        Ok(FailureReport {
            sigma: gp.sigma(),
            trials,
            failures,
            rate: failures as f64 / trials as f64,
        })
    }

    /// Scans `sigma = start, start + step, ...` up to `max` and returns the
    /// largest value before the first pilot with a failure.
    pub fn select_sigma(
        &self,
        start: f64,
        step: f64,
        max: f64,
        pilot_trials: usize,
        seed: u64,
    ) -> Result<SigmaSelection> {
        if !(start > 0.0 && step > 0.0 && max >= start) {
            return Err(ClweError::Params("sigma grid must be increasing and positive".into()));
        }
        let mut pilot = Vec::new();
        let mut best = None;
        let mut k = 0u32;
        loop {
            let sigma = start + step * k as f64;
            if sigma > max {
                break;
            }
            let report = self.failure_rate(&GaussianParams::new(sigma)?, pilot_trials, seed)?;
            pilot.push(report);
            if report.failures > 0 {
                break;
            }
            best = Some(sigma);
            k += 1;
        }
        Ok(SigmaSelection { sigma: best, pilot })
    }
}

/// Generator for trial `index` under a master seed.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
