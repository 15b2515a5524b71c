//! Invariant suites run by `qcap selftest`.
//!
//! Each suite counts individual checks and records a named message for
//! every failure. All randomness is derived from one seed.

use rand_xoshiro::SplitMix64;

use crate::channels::{
    completely_depolarizing, erasure_channel, flagged_mixture, horodecki_channel_4, horodecki_channel_4_with_q,
    horodecki_q, identity_channel, is_ppt, switch_channel, KrausChannel,
};
use crate::constructions::{horodecki_ensemble_h4, nonconvexity_analysis, verify_halving_identity};
use crate::error::Result;
use crate::information::{
    binary_entropy, coherent_information, conditional_mutual_information, private_information_value,
    von_neumann_entropy, Ensemble,
};
use crate::linops::{hermitian_eigenvalues, purify, QuantumState, SubsystemShape};
use crate::optimizer::{maximize_coherent_information, OptimizerConfig};
use crate::random::{
    random_channel, random_pure_state, random_state, random_state_of_rank, random_unitary, rng_from_seed,
};

pub const DEFAULT_SEED: u64 = 0x5eed_0001;

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestOptions {
    pub seed: u64,
    /// Replace the Horodecki mixing weight by a slightly wrong value, to
    /// demonstrate that the suites notice.
    pub corrupt_horodecki: bool,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, corrupt_horodecki: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestReport {
    pub suites: Vec<SuiteOutcome>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteOutcome::passed)
    }

    pub fn total_checks(&self) -> usize {
        self.suites.iter().map(|s| s.checks).sum()
    }
}

struct Suite {
    outcome: SuiteOutcome,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Self { outcome: SuiteOutcome { name, checks: 0, failures: Vec::new() } }
    }

    fn check(&mut self, ok: bool, invariant: impl FnOnce() -> String) {
        self.outcome.checks += 1;
        if !ok {
            self.outcome.failures.push(invariant());
        }
    }

    /// Records an error from the computation itself as a failure.
    fn run(&mut self, invariant: &str, f: impl FnOnce(&mut Self) -> Result<()>) {
        if let Err(e) = f(self) {
            self.outcome.checks += 1;
            self.outcome.failures.push(format!("{invariant}: {e}"));
        }
    }

    fn finish(self) -> SuiteOutcome {
        self.outcome
    }
}

const TOL: f64 = 1e-9;

fn horodecki(opts: &SelftestOptions) -> KrausChannel<f64> {
    if opts.corrupt_horodecki {
        horodecki_channel_4_with_q(horodecki_q::<f64>() * 1.01)
    } else {
        horodecki_channel_4()
    }
}

fn system(label: &str, d: usize) -> SubsystemShape {
    SubsystemShape::single(label, d)
}

/// Every channel the crate builds, plus a few random ones.
fn channel_zoo(opts: &SelftestOptions, rng: &mut SplitMix64) -> Result<Vec<(String, KrausChannel<f64>)>> {
    let nh = horodecki(opts);
    let ae = erasure_channel(4, 0.5)?;
    let mut zoo = vec![
        ("identity(2)".to_string(), identity_channel(2)),
        ("depolarizing(3)".to_string(), completely_depolarizing(3)),
        ("erasure(4, 0.5)".to_string(), ae.clone()),
        ("erasure(3, 0.2)".to_string(), erasure_channel(3, 0.2)?),
        ("horodecki".to_string(), nh.clone()),
        ("flagged(horodecki, erasure, 0.3)".to_string(), flagged_mixture(&nh, &ae, 0.3)?),
        ("switch(horodecki, erasure)".to_string(), switch_channel(&nh, &ae)?),
    ];
    for (k, (din, dout, n)) in [(2, 2, 3), (3, 2, 4), (2, 3, 2)].into_iter().enumerate() {
        zoo.push((format!("random channel {k} ({din}->{dout}, {n} Kraus)"), random_channel(din, dout, n, rng)?));
    }
    Ok(zoo)
}

fn entropy_axioms(rng: &mut SplitMix64) -> SuiteOutcome {
    let mut s = Suite::new("entropy axioms");
    s.run("entropy axioms", |s| {
        for d in 2..=6 {
            for _ in 0..4 {
                let rho = random_state::<f64, _>(system("A", d), rng);
                let sigma = random_state::<f64, _>(system("B", 3), rng);
                let h = von_neumann_entropy(&rho)?;
                let bound = (d as f64).log2();
                s.check(h >= -TOL && h <= bound + TOL, || format!("0 <= H <= log2 d violated: H = {h}, d = {d}"));
                let joint = von_neumann_entropy(&rho.tensor(&sigma)?)?;
                let sum = h + von_neumann_entropy(&sigma)?;
                s.check((joint - sum).abs() <= TOL, || {
                    format!("additivity H(ρ⊗σ) = H(ρ)+H(σ) off by {:e}", joint - sum)
                });
                let u = random_unitary::<f64, _>(d, rng)?;
                let rotated = QuantumState::new(u.conjugate(rho.matrix()), rho.shape().clone())?;
                let hu = von_neumann_entropy(&rotated)?;
                s.check((hu - h).abs() <= TOL, || format!("unitary invariance off by {:e}", hu - h));
            }
        }
        let pure = random_pure_state::<f64, _>(system("A", 5), rng).density();
        let h = von_neumann_entropy(&pure)?;
        s.check(h.abs() <= TOL, || format!("pure state entropy {h:e} is not 0"));
        Ok(())
    });
    s.finish()
}

fn kraus_completeness(zoo: &[(String, KrausChannel<f64>)], rng: &mut SplitMix64) -> SuiteOutcome {
    let mut s = Suite::new("Kraus completeness and trace preservation");
    for (name, ch) in zoo {
        s.run(name, |s| {
            let dev = ch.completeness_deviation();
            s.check(dev <= 1e-10, || format!("{name}: Σ K†K = I off by {dev:e}"));
            for _ in 0..100 {
                let rho = random_state::<f64, _>(system("A", ch.din()), rng);
                let out = ch.output_state(&rho)?;
                let tr = out.matrix().trace().re;
                let min = hermitian_eigenvalues(out.matrix())?[0];
                s.check((tr - 1.0).abs() <= 1e-10 && min >= -1e-10, || {
                    format!("{name}: output trace {tr} / min eigenvalue {min:e} not a state")
                });
            }
            Ok(())
        });
    }
    s.finish()
}

fn purity_law(zoo: &[(String, KrausChannel<f64>)], rng: &mut SplitMix64) -> SuiteOutcome {
    let mut s = Suite::new("purity law H(B) = H(E) on pure inputs");
    for (name, ch) in zoo {
        s.run(name, |s| {
            for _ in 0..20 {
                let psi = random_pure_state::<f64, _>(system("A", ch.din()), rng).density();
                let ic = coherent_information(ch, &psi)?;
                s.check(ic.abs() <= TOL, || format!("{name}: H(B) - H(E) = {ic:e} on a pure input"));
            }
            Ok(())
        });
    }
    s.finish()
}

fn purification_round_trip(rng: &mut SplitMix64) -> SuiteOutcome {
    let mut s = Suite::new("purification round trip");
    s.run("purification", |s| {
        for d in 2..=5 {
            for rank in 1..=d {
                let rho = random_state_of_rank::<f64, _>(system("A", d), rank, rng);
                let psi = purify(&rho)?;
                let back = psi.reduced_state(&["A"])?;
                let diff = back.matrix().max_abs_diff(rho.matrix());
                s.check(diff <= TOL, || format!("tr_R |ψ⟩⟨ψ| differs from ρ by {diff:e} (d = {d}, rank {rank})"));
                let rdim = psi.shape().dim_of("R")?;
                s.check(rdim == rank, || format!("reference dimension {rdim} for rank {rank}"));
            }
        }
        Ok(())
    });
    s.finish()
}

fn strong_subadditivity(rng: &mut SplitMix64) -> SuiteOutcome {
    let mut s = Suite::new("strong subadditivity");
    s.run("strong subadditivity", |s| {
        let shape = SubsystemShape::new([("X", 2), ("B", 2), ("C", 2)])?;
        for trial in 0..100 {
            let state = if trial % 2 == 0 {
                random_pure_state::<f64, _>(shape.clone(), rng).density()
            } else {
                random_state::<f64, _>(shape.clone(), rng)
            };
            let cmi = conditional_mutual_information(&state, &["X"], &["B"], &["C"])?;
            s.check(cmi >= -TOL, || format!("I(X;B|C) = {cmi:e} < 0 (trial {trial})"));
        }
        Ok(())
    });
    s.finish()
}

fn erasure_complement(rng: &mut SplitMix64) -> SuiteOutcome {
    let mut s = Suite::new("erasure complement spectrum");
    s.run("erasure complement", |s| {
        for d in 2..=4 {
            for p in [0.1, 0.3, 0.5, 0.8] {
                let ch = erasure_channel::<f64>(d, p)?;
                let flipped = erasure_channel::<f64>(d, 1.0 - p)?;
                for _ in 0..5 {
                    let rho = random_state::<f64, _>(system("A", d), rng);
                    let env = hermitian_eigenvalues(ch.environment_state(&rho)?.matrix())?;
                    let out = hermitian_eigenvalues(flipped.output_state(&rho)?.matrix())?;
                    let diff = env.iter().zip(&out).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                    s.check(env.len() == out.len() && diff <= TOL, || {
                        format!(
                            "spectrum of E for erasure({d}, {p}) differs from B of erasure({d}, {}) by {diff:e}",
                            1.0 - p
                        )
                    });
                }
            }
        }
        Ok(())
    });
    s.finish()
}

fn halving_identity(opts: &SelftestOptions, rng: &mut SplitMix64) -> SuiteOutcome {
    let mut s = Suite::new("halving identity");
    s.run("halving identity (Horodecki instance)", |s| {
        let r = verify_halving_identity(&horodecki(opts), &horodecki_ensemble_h4())?;
        s.check(r.abs_diff <= TOL, || format!("Horodecki instance: |lhs - rhs| = {:e}", r.abs_diff));
        Ok(())
    });
    for k in 0..5 {
        s.run(&format!("halving identity (random instance {k})"), |s| {
            let nkraus = 2 + k % 3;
            let ch = random_channel::<f64, _>(2, 2, nkraus, rng)?;
            let states = (0..2).map(|_| random_state_of_rank(system("A", 2), 1 + k % 2, rng)).collect();
            let e = Ensemble::new(vec![0.4, 0.6], states)?;
            let r = verify_halving_identity(&ch, &e)?;
            s.check(r.abs_diff <= TOL, || format!("random instance {k}: |lhs - rhs| = {:e}", r.abs_diff));
            Ok(())
        });
    }
    s.finish()
}

fn horodecki_properties(opts: &SelftestOptions) -> SuiteOutcome {
    let mut s = Suite::new("Horodecki channel");
    s.run("Horodecki channel", |s| {
        let nh = horodecki(opts);
        let (ok, min) = is_ppt(&nh.choi_matrix(), &["R"])?;
        s.check(ok, || format!("Choi matrix is PPT: min partial-transpose eigenvalue {min:e}"));
        let expected = 1.0 - binary_entropy(horodecki_q::<f64>());
        let value = private_information_value(&nh, &horodecki_ensemble_h4())?;
        s.check((value - expected).abs() <= TOL, || {
            format!("private value equals 1 - h2(q) = {expected}: got {value}")
        });
        s.check(value > 0.02, || format!("private value exceeds 0.02: got {value}"));
        Ok(())
    });
    s.finish()
}

fn nonconvexity() -> SuiteOutcome {
    let mut s = Suite::new("flagged-mixture decomposition");
    s.run("flagged-mixture decomposition", |s| {
        let r = nonconvexity_analysis::<f64>(&[0.0, 0.002, 0.5])?;
        for sample in &r.samples {
            let diff = (sample.direct - sample.decomposition).abs();
            s.check(diff <= 1e-8, || format!("p = {}: direct and decomposed I_c differ by {diff:e}", sample.p));
        }
        let floor = -2.0 * r.c_bound;
        s.check(r.i_hh <= TOL && r.i_hh >= floor, || format!("I_c(N_H ⊗ N_H) = {} outside [{floor}, 0]", r.i_hh));
        s.check(r.i_ee.abs() <= TOL, || format!("I_c(A_e ⊗ A_e) = {:e} is not 0", r.i_ee));
        Ok(())
    });
    s.finish()
}

fn optimizer_sanity() -> SuiteOutcome {
    let mut s = Suite::new("optimizer sanity");
    s.run("optimizer", |s| {
        let cfg = OptimizerConfig { restarts: 4, max_iters: 300, ..OptimizerConfig::default() };
        let id = maximize_coherent_information(&identity_channel::<f64>(2), &cfg)?;
        s.check((id.best_value - 1.0).abs() <= 1e-6, || format!("identity qubit optimum {} is not 1", id.best_value));
        let ch = erasure_channel::<f64>(2, 0.25)?;
        let er = maximize_coherent_information(&ch, &cfg)?;
        s.check((er.best_value - 0.5).abs() <= 1e-3, || {
            format!("erasure(2, 0.25) optimum {} is not 0.5", er.best_value)
        });
        let again = coherent_information(&ch, &er.best_state)?;
        s.check((again - er.best_value).abs() <= 1e-10, || "best value does not re-evaluate".to_string());
        Ok(())
    });
    s.finish()
}

/// Runs every suite in a fixed order.
pub fn run_selftest(opts: &SelftestOptions) -> SelftestReport {
    let mut rng = rng_from_seed(opts.seed);
    let mut suites = vec![entropy_axioms(&mut rng)];
    match channel_zoo(opts, &mut rng) {
        Ok(zoo) => {
            suites.push(kraus_completeness(&zoo, &mut rng));
            suites.push(purity_law(&zoo, &mut rng));
        }
        Err(e) => suites.push(SuiteOutcome {
            name: "channel construction",
            checks: 1,
            failures: vec![format!("building the channel list: {e}")],
        }),
    }
    suites.push(purification_round_trip(&mut rng));
    suites.push(strong_subadditivity(&mut rng));
    suites.push(erasure_complement(&mut rng));
    suites.push(halving_identity(opts, &mut rng));
    suites.push(horodecki_properties(opts));
    suites.push(nonconvexity());
    suites.push(optimizer_sanity());
    SelftestReport { suites }
}
