//! Multiplication cost at matched total dimension `N`: naive `phi(x) Vec(y)`,
//! the block path, a Ring-LWE product in dimension `N` and a Module-LWE
//! `d x d` matrix-vector product over rings of dimension `N / d`.

use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use crate::algebra::{AElem, CyclicAlgebra};
use crate::base_ring::{is_prime, CyclotomicRing, KElem, OpCounts};
use crate::error::{ClweError, Result};
use crate::params::ParamPack;
use crate::sampler::uniform_a;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct PathStats {
    pub median_ns: u64,
    /// Per product.
    pub counts: OpCounts,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub pack: String,
    pub total_dimension: usize,
    pub d: usize,
    pub reps: usize,
    pub naive_phi: PathStats,
    pub crt_block: PathStats,
    pub rlwe_baseline: Option<PathStats>,
    pub mlwe_baseline: Option<PathStats>,
    /// Ring elements of `O_K / q` in the public data: `2 d` for CLWE.
    pub clwe_public_elems: usize,
    /// `d^2 + d` for Module-LWE.
    pub mlwe_public_elems: usize,
}

impl BenchReport {
    /// Naive median over block median.
    pub fn speedup(&self) -> f64 {
        self.naive_phi.median_ns as f64 / self.crt_block.median_ns.max(1) as f64
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn to_table(&self) -> String {
        let mut out = format!(
            "pack {}  N = {}  d = {}  reps = {}\n{:<10} {:>12} {:>8} {:>8} {:>8} {:>10}\n",
            self.pack, self.total_dimension, self.d, self.reps, "path", "median ns", "k_mul", "fwd", "inv", "slot_mul"
        );
        let rows = [
            ("naive", Some(self.naive_phi)),
            ("block", Some(self.crt_block)),
            ("rlwe", self.rlwe_baseline),
            ("mlwe", self.mlwe_baseline),
        ];
        for (name, stats) in rows {
            if let Some(s) = stats {
                out.push_str(&format!(
                    "{:<10} {:>12} {:>8} {:>8} {:>8} {:>10}\n",
                    name, s.median_ns, s.counts.k_mul, s.counts.forward, s.counts.inverse, s.counts.slot_mul
                ));
            }
        }
        out.push_str(&format!("speedup naive/block: {:.2}x\n", self.speedup()));
        out
    }
}

fn median(mut v: Vec<u64>) -> u64 {
    v.sort_unstable();
    v[v.len() / 2]
}

fn per_product(total: OpCounts, reps: u64) -> OpCounts {
    OpCounts {
        k_mul: total.k_mul / reps,
        forward: total.forward / reps,
        inverse: total.inverse / reps,
        slot_mul: total.slot_mul / reps,
    }
}

fn time_path<T>(
    counters: impl Fn() -> OpCounts,
    reps: usize,
    mut f: impl FnMut(usize) -> T,
) -> (PathStats, Vec<T>) {
    let before = counters();
    let mut times = Vec::with_capacity(reps);
    let mut outputs = Vec::with_capacity(reps);
    for i in 0..reps {
        let start = Instant::now();
        let out = f(i);
        times.push(start.elapsed().as_nanos() as u64);
        outputs.push(out);
    }
    let counts = per_product(counters() - before, reps as u64);
    (
        PathStats {
            median_ns: median(times),
            counts,
        },
        outputs,
    )
}

/// Times naive and block products on the same coefficient-form operands
/// and checks that they agree on every pair.
pub fn bench_algebra<R: Rng + ?Sized>(
    alg: &CyclicAlgebra,
    label: &str,
    reps: usize,
    rng: &mut R,
) -> Result<BenchReport> {
    if reps < 10 {
        return Err(ClweError::Params(format!("need at least 10 reps, got {reps}")));
    }
    let operands: Vec<(AElem, AElem)> = (0..reps)
        .map(|_| (uniform_a(alg, rng), uniform_a(alg, rng)))
        .collect();
    let counters = || alg.ring().counters().snapshot();
    let (naive_phi, naive) = time_path(counters, reps, |i| alg.mul_naive(&operands[i].0, &operands[i].1));
    let (crt_block, block) = time_path(counters, reps, |i| alg.mul(&operands[i].0, &operands[i].1));
    if naive.iter().zip(&block).any(|(x, y)| alg.to_flat(x) != alg.to_flat(y)) {
        return Err(ClweError::CrossCheck);
    }
    let d = alg.d();
    Ok(BenchReport {
        pack: label.to_string(),
        total_dimension: alg.dimension(),
        d,
        reps,
        naive_phi,
        crt_block,
        rlwe_baseline: None,
        mlwe_baseline: None,
        clwe_public_elems: 2 * d,
        mlwe_public_elems: d * d + d,
    })
}

/// [`bench_algebra`] for a pack with the split fast path, plus both
/// baselines at the same `N` when `N` is a power of two.
pub fn bench_mul<R: Rng + ?Sized>(pack: &ParamPack, reps: usize, rng: &mut R) -> Result<BenchReport> {
    if let Some(v) = pack.validate_fast_path().first() {
        return Err(ClweError::Params(format!("{}: {v}", pack.label())));
    }
    let alg = pack.instantiate()?;
    let mut report = bench_algebra(&alg, &pack.label(), reps, rng)?;
    let big_n = alg.dimension();
    if big_n.is_power_of_two() && big_n >= 2 {
        let q = ntt_prime(2 * big_n as u64)?;
        let base = bench_baselines(big_n, alg.d(), q, reps, rng)?;
        report.rlwe_baseline = Some(base.rlwe);
        report.mlwe_baseline = Some(base.mlwe);
    }
    Ok(report)
}

/// Smallest prime `q = 1 mod m`.
pub fn ntt_prime(m: u64) -> Result<u64> {
    let mut q = m + 1;
    while q < crate::base_ring::MAX_MODULUS {
        if is_prime(q) {
            return Ok(q);
        }
        q += m;
    }
    Err(ClweError::Params(format!("no prime 1 mod {m} below 2^31")))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Baselines {
    pub rlwe: PathStats,
    pub mlwe: PathStats,
}

/// Ring-LWE: one product in `Z_q[x]/(x^N + 1)`. Module-LWE: a `d x d`
/// matrix times a length-`d` vector over `Z_q[x]/(x^(N/d) + 1)`, with all
/// `d^2 + d` operands sent through the transform once.
pub fn bench_baselines<R: Rng + ?Sized>(
    big_n: usize,
    d: usize,
    q: u64,
    reps: usize,
    rng: &mut R,
) -> Result<Baselines> {
    if reps < 10 {
        return Err(ClweError::Params(format!("need at least 10 reps, got {reps}")));
    }
    if !big_n.is_power_of_two() || big_n < 2 || d == 0 || !big_n.is_multiple_of(d) || !(big_n / d).is_power_of_two() {
        return Err(ClweError::Params(format!("incompatible N = {big_n}, d = {d}")));
    }
    let rlwe_ring = CyclotomicRing::new(2 * big_n as u64, q)?;
    let rand_k = |ring: &CyclotomicRing, rng: &mut R| -> KElem {
        ring.from_coeffs((0..ring.n()).map(|_| rng.random_range(0..q)).collect())
            .expect("ring dimension")
    };
    let pairs: Vec<(KElem, KElem)> = (0..reps)
        .map(|_| (rand_k(&rlwe_ring, rng), rand_k(&rlwe_ring, rng)))
        .collect();
    let (rlwe, _) = time_path(|| rlwe_ring.counters().snapshot(), reps, |i| {
        rlwe_ring.mul(&pairs[i].0, &pairs[i].1)
    });

    let ring = CyclotomicRing::new(2 * (big_n / d) as u64, q)?;
    let systems: Vec<(Vec<KElem>, Vec<KElem>)> = (0..reps)
        .map(|_| {
            let a = (0..d * d).map(|_| rand_k(&ring, rng)).collect();
            let s = (0..d).map(|_| rand_k(&ring, rng)).collect();
            (a, s)
        })
        .collect();
    let (mlwe, _) = time_path(|| ring.counters().snapshot(), reps, |i| {
        let (a, s) = &systems[i];
        let a_hat: Vec<KElem> = a.iter().map(|x| ring.to_slots(x)).collect();
        let s_hat: Vec<KElem> = s.iter().map(|x| ring.to_slots(x)).collect();
        (0..d)
            .map(|r| {
                let mut acc = ring.mul(&a_hat[r * d], &s_hat[0]);
                for c in 1..d {
                    acc = ring.add(&acc, &ring.mul(&a_hat[r * d + c], &s_hat[c]));
                }
                ring.into_coeffs(acc)
            })
            .collect::<Vec<_>>()
    });
    Ok(Baselines { rlwe, mlwe })
}
