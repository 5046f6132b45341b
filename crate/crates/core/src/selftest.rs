//! The invariant suite behind the acceptance target and `clwe selftest`.
//!
//! Each check returns one [`Check`]; sizes come from a [`Config`], so the
//! same code runs at full acceptance scale or as a quick smoke test.

use std::fmt;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::algebra::{AElem, CyclicAlgebra};
use crate::base_ring::{is_quadratic_residue, Modulus};
use crate::bench::{bench_baselines, bench_mul, ntt_prime};
use crate::clwe::{clwe_sample_logged, invertible_fraction_exact, invertible_fraction_mc, normal_form};
use crate::difference_set::DifferenceSet;
use crate::error::{ClweError, Result};
use crate::fixtures;
use crate::oracle::{count_invertible, relation_chase};
use crate::params::{find_pack, find_q_naive, find_q_quadratic, registry, Construction};
use crate::pke::{residual_bound, trial_rng, Message, Pke};
use crate::sampler::{uniform_a, DiscreteGaussian, GaussianParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
    pub warning: Option<String>,
    /// A failure that is machine-relative and does not fail the suite.
    pub advisory: bool,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self {
            name,
            status: if passed { Status::Pass } else { Status::Fail },
            detail,
            warning: None,
            advisory: false,
        }
    }

    fn error(name: &'static str, e: ClweError) -> Self {
        Self::new(name, false, format!("error: {e}"))
    }

    /// Fails the suite.
    pub fn is_hard_failure(&self) -> bool {
        self.status == Status::Fail && !self.advisory
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        write!(f, "[{tag}] {}: {}", self.name, self.detail)?;
        if self.advisory && self.status == Status::Fail {
            write!(f, " (advisory)")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Config {
    pub seed: u64,
    pub pairs: usize,
    pub mul_time_limit: Duration,
    pub residual_runs: usize,
    pub residual_sigma: f64,
    /// `None` runs the sigma pilot.
    pub pke_sigma: Option<f64>,
    pub pilot_trials: usize,
    pub pke_trials: usize,
    pub mc_draws: usize,
    pub normal_form_samples: usize,
    pub bench_reps: usize,
    pub speedup_gate: f64,
    pub fixture_dir: PathBuf,
}

impl Config {
    pub fn full() -> Self {
        Self {
            seed: 2024,
            pairs: 1000,
            mul_time_limit: Duration::from_secs(10),
            residual_runs: 100,
            residual_sigma: 12.0,
            pke_sigma: None,
            pilot_trials: 1000,
            pke_trials: 1000,
            mc_draws: 10_000,
            normal_form_samples: 100,
            bench_reps: 200,
            speedup_gate: 2.0,
            fixture_dir: fixtures::default_dir(),
        }
    }

    pub fn quick() -> Self {
        Self {
            pairs: 100,
            residual_runs: 20,
            pke_sigma: Some(3.0),
            pke_trials: 100,
            mc_draws: 2000,
            normal_form_samples: 20,
            bench_reps: 30,
            ..Self::full()
        }
    }
}

fn rng(cfg: &Config, salt: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(cfg.seed.wrapping_mul(1000).wrapping_add(salt))
}

fn pack_algebra(m: u64, d: u64, q: u64) -> Result<CyclicAlgebra> {
    find_pack(m, d, q)
        .ok_or_else(|| ClweError::Params(format!("no registry pack m={m} d={d} q={q}")))?
        .instantiate()
}

fn flat_eq(alg: &CyclicAlgebra, x: &AElem, y: &AElem) -> bool {
    alg.to_flat(x) == alg.to_flat(y)
}

pub fn multiplication_equivalence(cfg: &Config) -> Check {
    const NAME: &str = "multiplication equivalence";
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut ok = true;
    for (m, d, q) in [(16, 2, 97), (1, 2, 5)] {
        let alg = match pack_algebra(m, d, q) {
            Ok(a) => a,
            Err(e) => return Check::error(NAME, e),
        };
        let mut r = rng(cfg, 1 + m);
        let agree = (0..cfg.pairs)
            .filter(|_| {
                let (x, y) = (uniform_a(&alg, &mut r), uniform_a(&alg, &mut r));
                flat_eq(&alg, &alg.mul(&x, &y), &alg.mul_naive(&x, &y))
            })
            .count();
        ok &= agree == cfg.pairs;
        parts.push(format!("m{m}-d{d}-q{q} {agree}/{}", cfg.pairs));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < cfg.mul_time_limit;
    Check::new(
        NAME,
        ok,
        format!("{} pairs agree in {:.2?} (limit {:?})", parts.join(", "), elapsed, cfg.mul_time_limit),
    )
}

fn toy_elements(alg: &CyclicAlgebra) -> Vec<AElem> {
    let q = alg.q();
    let dim = alg.dimension() as u32;
    (0..q.pow(dim))
        .map(|k| {
            let v: Vec<u64> = (0..dim).map(|i| k / q.pow(i) % q).collect();
            alg.from_flat(&v).expect("toy dimension")
        })
        .collect()
}

pub fn exhaustive_toy(cfg: &Config) -> Check {
    const NAME: &str = "exhaustive toy equivalence (n=1, q=3, d=2)";
    let alg = match pack_algebra(1, 2, 3) {
        Ok(a) => a,
        Err(e) => return Check::error(NAME, e),
    };
    let gamma = alg.gamma_k().values()[0];
    let elems = toy_elements(&alg);
    let table = |x: &AElem| -> Vec<Vec<u64>> { alg.to_flat(x).chunks(2).map(<[u64]>::to_vec).collect() };
    let mut agree = 0usize;
    let mut ours = Vec::with_capacity(elems.len() * elems.len());
    for x in &elems {
        for y in &elems {
            let want: Vec<u64> = relation_chase(&table(x), &table(y), 2, 3, gamma).concat();
            let naive = alg.to_flat(&alg.mul_naive(x, y));
            let block = alg.to_flat(&alg.mul(x, y));
            if naive == want && block == want {
                agree += 1;
            }
            ours.push((alg.to_flat(x), alg.to_flat(y), block));
        }
    }
    let total = ours.len();
    let chase = format!("in-repo relation chase {agree}/{total}");
    match fixtures::skew_mult(&cfg.fixture_dir, 3) {
        Err(e) => Check::error(NAME, e),
        Ok(None) => Check {
            name: NAME,
            status: if agree == total { Status::Skip } else { Status::Fail },
            detail: format!("{chase}; fixture comparison skipped"),
            warning: Some("WARNING: fixtures/skew_mult_q3.json not found; oracle fixture comparison skipped".into()),
            advisory: false,
        },
        Ok(Some(f)) => {
            let header_ok = (f.q, f.d, f.n, f.gamma) == (3, 2, 1, gamma);
            let mut matched = 0usize;
            let lookup: std::collections::HashMap<(Vec<u64>, Vec<u64>), Vec<u64>> =
                ours.into_iter().map(|(x, y, p)| ((x, y), p)).collect();
            for entry in &f.products {
                if lookup.get(&(entry.x.clone(), entry.y.clone())) == Some(&entry.product) {
                    matched += 1;
                }
            }
            let ok = header_ok && agree == total && f.products.len() == total && matched == total;
            Check::new(NAME, ok, format!("{chase}; fixture {matched}/{} products match", f.products.len()))
        }
    }
}

fn phi_algebras() -> Result<Vec<(CyclicAlgebra, usize)>> {
    Ok(vec![(pack_algebra(16, 2, 97)?, 1), (pack_algebra(81, 3, 26407)?, 10)])
}

pub fn left_regular(cfg: &Config) -> Check {
    const NAME: &str = "left-regular and homomorphism properties";
    let algs = match phi_algebras() {
        Ok(a) => a,
        Err(e) => return Check::error(NAME, e),
    };
    let mut ok = true;
    let mut parts = Vec::new();
    for (alg, divisor) in &algs {
        let tower = alg.tower();
        let pairs = (cfg.pairs / divisor).max(1);
        let mut r = rng(cfg, 10 + alg.ring().m());
        let mut good = 0;
        for _ in 0..pairs {
            let (x, y) = (uniform_a(alg, &mut r), uniform_a(alg, &mut r));
            let xy = alg.mul(&x, &y);
            let applied = alg.from_vec(alg.phi(&x).apply(tower, alg.vec_of(&y))).expect("degree");
            let hom = alg.phi(&xy).normalize(tower) == alg.phi(&x).mul(&alg.phi(&y), tower).normalize(tower);
            if flat_eq(alg, &applied, &xy) && hom {
                good += 1;
            }
        }
        ok &= good == pairs;
        parts.push(format!("m{}-d{} {good}/{pairs}", alg.ring().m(), alg.d()));
    }
    Check::new(NAME, ok, format!("{} pairs exact", parts.join(", ")))
}

pub fn transpose_dual(cfg: &Config) -> Check {
    const NAME: &str = "transpose-dual";
    let algs = match phi_algebras() {
        Ok(a) => a,
        Err(e) => return Check::error(NAME, e),
    };
    let mut ok = true;
    let mut parts = Vec::new();
    for (alg, divisor) in &algs {
        let dual = alg.dual();
        let tower = alg.tower();
        let count = (cfg.pairs / divisor).max(1);
        let mut r = rng(cfg, 20 + alg.ring().m());
        let good = (0..count)
            .filter(|_| {
                let x = uniform_a(alg, &mut r);
                alg.phi(&x).transpose().normalize(tower) == dual.phi(&alg.transpose_dual(&x)).normalize(tower)
            })
            .count();
        ok &= good == count;
        parts.push(format!("m{}-d{} {good}/{count}", alg.ring().m(), alg.d()));
    }
    Check::new(NAME, ok, format!("{} elements match entrywise", parts.join(", ")))
}

pub fn correctness_identity(cfg: &Config) -> Check {
    const NAME: &str = "correctness identity";
    let pke = match pack_algebra(512, 2, 12289) {
        Ok(a) => Pke::new(a),
        Err(e) => return Check::error(NAME, e),
    };
    let gp = match GaussianParams::new(cfg.residual_sigma) {
        Ok(g) => g,
        Err(e) => return Check::error(NAME, e),
    };
    let q = pke.algebra().q();
    let zq = *pke.algebra().ring().modulus();
    let bound = residual_bound(q) as i64;
    let (mut identity_ok, mut failures, mut boundary_hits) = (0, 0, 0);
    let mut contradictions = 0;
    for i in 0..cfg.residual_runs {
        let mut r = trial_rng(cfg.seed ^ 0x5eed, i as u64);
        let (pk, sk, key) = pke.keygen_logged(&gp, &mut r);
        let msg = Message::random(pke.capacity(), &mut r);
        let (ct, enc) = match pke.encrypt_logged(&pk, &msg, &gp, &mut r) {
            Ok(v) => v,
            Err(e) => return Check::error(NAME, e),
        };
        let check = match pke.correctness_residual(&sk, &ct, &msg, &key, &enc) {
            Ok(c) => c,
            Err(e) => return Check::error(NAME, e),
        };
        identity_ok += 1;
        let decrypted = match pke.decrypt(&sk, &ct) {
            Ok(m) => m,
            Err(e) => return Check::error(NAME, e),
        };
        let success = decrypted == msg;
        if !success {
            failures += 1;
        }
        if check.within_bound && !success {
            contradictions += 1;
        }
        if !check.within_bound && success {
            // only the rounding edge of a zero bit can still decode
            let flat = pke.algebra().to_flat(&check.residual);
            let edge_only = flat.iter().zip(msg.bits()).all(|(&c, &bit)| {
                let r = zq.center(c);
                r.abs() < bound || (!bit && (r == -bound || r == bound || r == bound + 1))
            });
            if edge_only {
                boundary_hits += 1;
            } else {
                contradictions += 1;
            }
        }
    }
    let ok = identity_ok == cfg.residual_runs && contradictions == 0;
    Check::new(
        NAME,
        ok,
        format!(
            "identity exact on {identity_ok}/{} runs at sigma {}; {failures} decryption failures, \
             all explained by a residual coefficient >= {bound}; {boundary_hits} successes at the rounding edge; \
             {contradictions} contradictions",
            cfg.residual_runs, cfg.residual_sigma
        ),
    )
}

pub fn end_to_end(cfg: &Config) -> Check {
    const NAME: &str = "end-to-end PKE (m=512, d=2, q=12289)";
    let pke = match pack_algebra(512, 2, 12289) {
        Ok(a) => Pke::new(a),
        Err(e) => return Check::error(NAME, e),
    };
    let capacity = pke.capacity();
    let (sigma, pilot_note) = match cfg.pke_sigma {
        Some(s) => (s, format!("sigma {s} fixed")),
        None => match pke.select_sigma(1.0, 0.5, 64.0, cfg.pilot_trials, cfg.seed) {
            Err(e) => return Check::error(NAME, e),
            Ok(sel) => match sel.sigma {
                None => return Check::new(NAME, false, "pilot failed already at sigma 1".into()),
                Some(s) => {
                    let stop = sel.pilot.last().map(|r| format!("{} failures at sigma {}", r.failures, r.sigma));
                    (s, format!("pilot chose sigma {s} ({})", stop.unwrap_or_default()))
                }
            },
        },
    };
    let gp = match GaussianParams::new(sigma) {
        Ok(g) => g,
        Err(e) => return Check::error(NAME, e),
    };
    let checked = Pke::new(pke.algebra().clone()).with_cross_check(true);
    let cross = checked.trial(&gp, &mut rng(cfg, 30));
    let report = match pke.failure_rate(&gp, cfg.pke_trials, cfg.seed.wrapping_add(1_000_003)) {
        Ok(r) => r,
        Err(e) => return Check::error(NAME, e),
    };
    let ok = report.failures == 0 && capacity == 1024 && matches!(cross, Ok(true));
    Check::new(
        NAME,
        ok,
        format!(
            "{pilot_note}; {} failures in {} fresh trials; capacity {capacity} bits; cross-checked round trip {}",
            report.failures,
            report.trials,
            if matches!(cross, Ok(true)) { "ok" } else { "failed" }
        ),
    )
}

pub fn number_facts(cfg: &Config) -> Check {
    const NAME: &str = "number-theoretic facts";
    let mut failed: Vec<String> = Vec::new();
    let mut require = |cond: bool, what: &str| {
        if !cond {
            failed.push(what.to_string());
        }
    };
    let z = Modulus::new(12289).expect("prime");
    require(is_quadratic_residue(7681, 12289) == Ok(true), "7681 QR mod 12289");
    require(z.mul(3788, 3788) == 7681, "3788^2 = 7681 mod 12289");
    for (q, m) in [(12289u64, 512u64), (3329, 128)] {
        require(Modulus::new(q).is_ok() && q % m == 1, &format!("{q} = 1 mod {m}"));
    }
    for (m, d, q) in [(256, 4, 10753), (81, 3, 26407), (512, 2, 12289), (128, 4, 3329)] {
        require(
            find_pack(m, d, q).is_some_and(|p| p.is_valid()),
            &format!("pack m{m}-d{d}-q{q} valid"),
        );
    }
    require(
        find_q_quadratic(512, 7681, 1 << 14).is_ok_and(|v| v.contains(&12289)),
        "quadratic search finds 12289",
    );
    require(
        find_q_naive(81, 163, 30_000).is_ok_and(|v| v.contains(&26407)),
        "naive search finds 26407",
    );
    require(
        find_q_naive(512, 7681, 3_932_672).is_ok_and(|v| v.is_empty()),
        "no naive q up to 512 * 7681",
    );
    let table: Vec<_> = registry()
        .into_iter()
        .filter(|p| p.provenance.construction != Construction::Toy)
        .take(9)
        .collect();
    let expected_n = [486, 512, 512, 1024, 1024, 1458, 576, 768, 1152];
    require(
        table.len() == 9 && table.iter().zip(expected_n).all(|(p, n)| p.total_dimension() == n && p.n * p.d * p.d == n),
        "nine table rows with N = n d^2",
    );
    let fixture = match fixtures::qr_table(&cfg.fixture_dir, 12289) {
        Ok(Some(f)) => {
            require(f.q == 12289 && f.squares.binary_search(&7681).is_ok(), "7681 in fixture square table");
            " (square-table fixture agrees)"
        }
        Ok(None) => "",
        Err(_) => {
            require(false, "square-table fixture readable");
            ""
        }
    };
    let ok = failed.is_empty();
    let detail = if ok {
        format!("7681 = 3788^2 mod 12289, 12289 = 1 mod 512, 3329 = 1 mod 128, 10753 and 26407 packs valid, nine N = n d^2 rows{fixture}")
    } else {
        format!("failed: {}", failed.join(", "))
    };
    Check::new(NAME, ok, detail)
}

pub fn invertibility(cfg: &Config) -> Check {
    const NAME: &str = "invertibility statistics";
    let alg = match pack_algebra(16, 2, 97) {
        Ok(a) => a,
        Err(e) => return Check::error(NAME, e),
    };
    let est = match invertible_fraction_mc(&alg, cfg.mc_draws, &mut rng(cfg, 40)) {
        Ok(e) => e,
        Err(e) => return Check::error(NAME, e),
    };
    let exact = invertible_fraction_exact(97, 2, 8);
    let within = (est.fraction - exact).abs() <= 3.0 * est.std_error;
    let lower_ok = [(97u64, 2u32, 8u64), (3, 2, 1), (2, 3, 4), (12289, 2, 256), (7681, 2, 128)]
        .iter()
        .all(|&(q, d, n)| invertible_fraction_exact(q, d, n) >= (1.0 - 1.0 / q as f64).powf((n * d as u64) as f64));
    let enum_ok = [(2u64, 2usize), (3, 2), (2, 3)]
        .iter()
        .all(|&(q, d)| {
            let total = q.pow((d * d) as u32);
            (count_invertible(q, d) as f64 / total as f64 - invertible_fraction_exact(q, d as u32, 1)).abs() < 1e-12
        });
    let fixture_ok = match fixtures::gl_counts(&cfg.fixture_dir) {
        Ok(Some(f)) => f.entries.iter().all(|g| {
            (g.invertible as f64 / g.total as f64 - invertible_fraction_exact(g.q, g.d as u32, 1)).abs() < 1e-12
        }),
        Ok(None) => true,
        Err(_) => false,
    };
    Check::new(
        NAME,
        within && lower_ok && enum_ok && fixture_ok,
        format!(
            "Monte Carlo {:.5} +- {:.5} over {} draws vs exact {exact:.5} ({:.2} standard errors); lower bound {}; enumeration {}",
            est.fraction,
            est.std_error,
            est.trials,
            (est.fraction - exact).abs() / est.std_error.max(f64::MIN_POSITIVE),
            if lower_ok { "holds" } else { "violated" },
            if enum_ok && fixture_ok { "agrees" } else { "disagrees" }
        ),
    )
}

pub fn difference_set(cfg: &Config) -> Check {
    const NAME: &str = "difference set";
    let mut parts = Vec::new();
    let mut ok = true;
    for (d, salt) in [(2usize, 50u64), (4, 51)] {
        let report = DifferenceSet::build(3, d, &mut rng(cfg, salt)).and_then(|ds| ds.verify());
        match report {
            Ok(r) => {
                let size_ok = r.members == 3u64.pow(d as u32);
                ok &= r.passed() && size_ok;
                parts.push(format!(
                    "q=3, d={d}: {} members, {} pairwise differences {}",
                    r.members,
                    r.pairs_checked,
                    if r.all_invertible { "all invertible" } else { "NOT all invertible" }
                ));
            }
            Err(e) => return Check::error(NAME, e),
        }
    }
    Check::new(NAME, ok, parts.join("; "))
}

pub fn normal_form_replay(cfg: &Config) -> Check {
    const NAME: &str = "normal form";
    let alg = match pack_algebra(512, 2, 12289) {
        Ok(a) => a,
        Err(e) => return Check::error(NAME, e),
    };
    let mut r = rng(cfg, 60);
    let dg = DiscreteGaussian::new(GaussianParams::new(3.0).expect("positive sigma"));
    let s = uniform_a(&alg, &mut r);
    let (samples, errors): (Vec<_>, Vec<_>) = (0..cfg.normal_form_samples)
        .map(|_| clwe_sample_logged(&alg, &s, &dg, &mut r))
        .unzip();
    let nf = match normal_form(&alg, &samples) {
        Ok(nf) => nf,
        Err(e) => return Check::error(NAME, e),
    };
    let e1 = &errors[nf.pivot];
    let good = nf
        .samples
        .iter()
        .zip(&errors)
        .filter(|(smp, e)| flat_eq(&alg, &smp.b, &alg.sub(&alg.mul(&smp.a, e1), e)))
        .count();
    Check::new(
        NAME,
        good == samples.len(),
        format!("b' = a' e_1 - e_i exact on {good}/{} samples (pivot {})", samples.len(), nf.pivot),
    )
}

pub fn benchmark(cfg: &Config) -> Check {
    const NAME: &str = "benchmark counters";
    let mut r = rng(cfg, 70);
    let mut count_errors = Vec::new();
    let mut gate_speedup = 0.0;
    for (m, d, q) in [(256u64, 2u64, 7681u64), (64, 4, 3329)] {
        let pack = find_pack(m, d, q).expect("registry pack");
        let rep = match bench_mul(&pack, cfg.bench_reps, &mut r) {
            Ok(rep) => rep,
            Err(e) => return Check::error(NAME, e),
        };
        if rep.naive_phi.counts.k_mul != d * d * d {
            count_errors.push(format!("{}: naive {} K-mults", pack.label(), rep.naive_phi.counts.k_mul));
        }
        if rep.mlwe_baseline.map(|s| s.counts.forward) != Some(d * d + d) {
            count_errors.push(format!("{}: MLWE transforms", pack.label()));
        }
        if let Some(rl) = rep.rlwe_baseline {
            if (rl.counts.forward, rl.counts.inverse) != (2, 1) {
                count_errors.push(format!("{}: RLWE transforms", pack.label()));
            }
        }
        if m == 256 {
            gate_speedup = rep.speedup();
        }
    }
    match ntt_prime(1024).and_then(|q| bench_baselines(512, 4, q, 10, &mut r)) {
        Ok(b) if b.mlwe.counts.forward == 20 => {}
        _ => count_errors.push("MLWE d=4 baseline".into()),
    }
    let gate_ok = gate_speedup >= cfg.speedup_gate;
    let counts = if count_errors.is_empty() {
        "naive d^3 K-mults, MLWE d^2+d transforms, RLWE 2+1 transforms exact".to_string()
    } else {
        format!("count errors: {}", count_errors.join(", "))
    };
    Check {
        name: NAME,
        status: if count_errors.is_empty() && gate_ok { Status::Pass } else { Status::Fail },
        detail: format!(
            "{counts}; block vs naive at N=512 (m=256, d=2): {gate_speedup:.2}x, gate {:.1}x",
            cfg.speedup_gate
        ),
        warning: None,
        advisory: count_errors.is_empty(),
    }
}

/// Every check, in acceptance order.
pub fn run_all(cfg: &Config) -> Vec<Check> {
    let checks: [fn(&Config) -> Check; 11] = [
        multiplication_equivalence,
        exhaustive_toy,
        left_regular,
        transpose_dual,
        correctness_identity,
        end_to_end,
        number_facts,
        invertibility,
        difference_set,
        normal_form_replay,
        benchmark,
    ];
    checks.iter().map(|f| f(cfg)).collect()
}
