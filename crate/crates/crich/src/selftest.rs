//! The acceptance suite, shared by `crich selftest` and the `acceptance`
//! test target.
//!
//! Each criterion returns a one-line detail on success or the first failure
//! found. A criterion also fails when it overruns its time allowance.

use std::time::{Duration, Instant};

use crich_core::cr::{find_r, CrWitness, find_witness, verify_witness, FunFamily, SeqFun, TableFuns, WitnessCheck};
use crich_core::exec::Ctx;
use crich_core::finset::{count_blockseqs, enumerate_blockseqs, is_ip_r_star_within, random_blockseq};
use crich_core::product::{estimate_l_exhaustive, product_witness, ProductOutcome, ProductQuery};
use crich_core::semigroup::{direct_product, Family};
use crich_core::transfer::{
    compress_witness, lemma1_check, verify_compression, CompressionCheck, CompressionPlan, Lemma1Options,
    Lemma1Verdict,
};
use crich_core::{Budget, Element, ElementSet, FinSet, FiniteSemigroup, Sequential, SetFamily};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::formats::{semigroup_doc, semigroup_from_value};
use crate::{cli, oracle};

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl CriterionReport {
    /// Verdict without timing; stable across runs.
    pub fn verdict_line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        format!("{tag} [{}] {}: {}", self.id, self.name, self.detail)
    }

    pub fn line(&self) -> String {
        format!(
            "{} ({:.2} s, limit {} s)",
            self.verdict_line(),
            self.elapsed.as_secs_f64(),
            self.limit.as_secs()
        )
    }
}

type Check = fn() -> Result<String, String>;

/// `(id, name, time allowance in seconds, check)`.
pub const CRITERIA: [(u8, &str, u64, Check); 9] = [
    (1, "semigroup soundness", 1, semigroup_soundness),
    (2, "witness search agrees with brute force", 30, witness_oracle_agreement),
    (3, "least r ground truths", 10, r_ground_truths),
    (4, "compression identity", 60, compression_identity),
    (5, "block-system statement at desk scale", 120, block_statement),
    (6, "product witnesses", 120, product_soundness),
    (7, "IP* monotonicity", 30, ip_monotonicity),
    (8, "intersection-level estimator sanity", 60, estimator_sanity),
    (9, "determinism", 60, determinism),
];

pub fn run_one(id: u8) -> Option<CriterionReport> {
    let &(id, name, limit, check) = CRITERIA.iter().find(|c| c.0 == id)?;
    let limit = Duration::from_secs(limit);
    let start = Instant::now();
    let result = check();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if elapsed > limit {
        passed = false;
        detail = format!("{detail}; over the time allowance");
    }
    Some(CriterionReport { id, name, passed, detail, elapsed, limit })
}

/// Runs the listed criteria (all when `ids` is empty), reporting each as it
/// finishes.
pub fn run(ids: &[u8], mut on_done: impl FnMut(&CriterionReport)) -> Vec<CriterionReport> {
    CRITERIA
        .iter()
        .filter(|c| ids.is_empty() || ids.contains(&c.0))
        .filter_map(|c| run_one(c.0))
        .inspect(|r| on_done(r))
        .collect()
}

fn seq() -> Ctx<Sequential> {
    Ctx::new(Sequential, Budget::unlimited())
}

fn build(f: Family) -> FiniteSemigroup {
    f.build().expect("valid family parameters")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn nonempty_subsets(sgp: &FiniteSemigroup) -> Vec<ElementSet> {
    let n = sgp.order() as u32;
    (1u32..1 << n)
        .map(|mask| ElementSet::from_indices(sgp, (0..n).filter(|i| mask >> i & 1 == 1)).expect("in range"))
        .collect()
}

/// Every family of one or two distinct tables over `{1..r}`.
fn small_families(order: usize, r: usize) -> Vec<Vec<SeqFun>> {
    let tables = TableFuns::new(order, r);
    let all: Vec<SeqFun> = (0..tables.count()).map(|i| tables.nth(i)).collect();
    let mut out: Vec<Vec<SeqFun>> = all.iter().map(|f| vec![f.clone()]).collect();
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            out.push(vec![all[i].clone(), all[j].clone()]);
        }
    }
    out
}

// 1

fn semigroup_soundness() -> Result<String, String> {
    let mut fams = vec![Family::Trivial, Family::FullTransformation(2)];
    fams.extend((1..=6).map(Family::Cyclic));
    fams.extend((1..=4).map(Family::LeftZero));
    fams.extend((1..=4).map(Family::RightZero));
    let built: Vec<(String, FiniteSemigroup)> = fams.iter().map(|&f| (f.to_string(), build(f))).collect();
    let mut checked = 0;
    let mut check = |name: &str, s: &FiniteSemigroup| -> Result<(), String> {
        s.validate().map_err(|v| format!("{name}: {v}"))?;
        let (back, _) = semigroup_from_value(semigroup_doc(s, Some(name)), false).map_err(|e| format!("{name}: {e}"))?;
        ensure(back.rows() == s.rows(), || format!("{name}: table changed in a round trip"))?;
        checked += 1;
        Ok(())
    };
    for (name, s) in &built {
        check(name, s)?;
    }
    for (ln, l) in &built {
        for (rn, r) in &built {
            let p = direct_product(l, r).map_err(|e| e.to_string())?;
            check(&format!("{ln} x {rn}"), &p)?;
        }
    }
    Ok(format!("{checked} tables associative, {} families and all ordered products", built.len()))
}

// 2

fn witness_oracle_agreement() -> Result<String, String> {
    let mut cases = Vec::new();
    for n in 1..=3 {
        for s in oracle::all_semigroups(n) {
            for mask in 0u32..1 << n {
                cases.push((s.clone(), mask));
            }
        }
    }
    let families: Vec<Vec<Vec<Vec<SeqFun>>>> =
        (1..=3).map(|n| (1..=3).map(|r| small_families(n, r)).collect()).collect();
    let outcome: Result<Vec<(usize, usize)>, String> = cases
        .par_iter()
        .map(|(s, mask)| {
            let target = ElementSet::from_indices(s, (0..s.order() as u32).filter(|i| mask >> i & 1 == 1)).expect("in range");
            let ctx = seq();
            let (mut instances, mut found) = (0, 0);
            for r in 1..=3 {
                for funs in &families[s.order() - 1][r - 1] {
                    let fam = FunFamily::new(funs.clone()).map_err(|e| e.to_string())?;
                    let fast = find_witness(&ctx, s, &target, &fam, r).map_err(|e| e.to_string())?;
                    let slow = oracle::least_witness(s, &target, funs, r);
                    if fast != slow {
                        return Err(format!("table {:?}, target mask {mask}, r {r}: {fast:?} vs {slow:?}", s.rows()));
                    }
                    instances += 1;
                    found += usize::from(fast.is_some());
                }
            }
            Ok((instances, found))
        })
        .collect();
    let (instances, found) = outcome?.into_iter().fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(format!("{instances} instances agree ({found} with a witness)"))
}

// 3 and 5

/// `(label, semigroup, target, k, least r)`.
fn ground_truths() -> Vec<(String, FiniteSemigroup, ElementSet, usize, usize)> {
    let mut out = Vec::new();
    let trivial = build(Family::Trivial);
    for k in 1..=3 {
        out.push((format!("trivial, k={k}"), trivial.clone(), ElementSet::full(1), k, 1));
    }
    let lz = build(Family::LeftZero(2));
    for set in nonempty_subsets(&lz) {
        for k in 1..=3 {
            let idx: Vec<u32> = set.iter().map(|e| e.0).collect();
            out.push((format!("left_zero(2), A={idx:?}, k={k}"), lz.clone(), set.clone(), k, 1));
        }
    }
    let z2 = build(Family::Cyclic(2));
    let zero = ElementSet::from_indices(&z2, [0]).expect("in range");
    out.push(("cyclic(2), A=[0], k=1".into(), z2.clone(), zero.clone(), 1, 1));
    out.push(("cyclic(2), A=[0], k=2".into(), z2, zero, 2, 2));
    out
}

fn r_ground_truths() -> Result<String, String> {
    let cases = ground_truths();
    for (label, s, a, k, want) in &cases {
        let got = find_r(&seq(), s, a, *k, 4).map_err(|e| format!("{label}: {e}"))?;
        ensure(got == Some(*want), || format!("{label}: expected {want}, got {got:?}"))?;
    }
    Ok(format!("{} instances match exactly", cases.len()))
}

fn block_statement() -> Result<String, String> {
    let ctx = Ctx::new(Sequential, Budget::default());
    let mut runs = 0;
    let mut families = 0u128;
    for (label, s, a, k, _) in ground_truths() {
        let r = find_r(&ctx, &s, &a, k, 4)
            .map_err(|e| format!("{label}: {e}"))?
            .ok_or_else(|| format!("{label}: no r found"))?;
        for n in 1..=5 {
            let opts = Lemma1Options { constructive: true, filler: Element(0) };
            let verdict = lemma1_check(&ctx, &s, &a, k, r, n, opts).map_err(|e| format!("{label}, n={n}: {e}"))?;
            match verdict {
                Lemma1Verdict::Holds { families: f, .. } => families += f,
                cx => return Err(format!("{label}, r={r}, n={n}: {cx:?}")),
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} runs, {families} families, no counterexample"))
}

// 4

fn compression_case(
    s: &FiniteSemigroup,
    fam: &FunFamily,
    plan: &CompressionPlan,
    short: &CrWitness,
) -> Result<(), String> {
    let out = compress_witness(plan, short).map_err(|e| e.to_string())?;
    let (set, word) = oracle::expand(plan, short);
    let describe = || format!("table {:?}, plan {plan:?}, witness {short:?}", s.rows());
    ensure(out.set.to_vec() == set && out.word == word, || format!("expansion differs: {}", describe()))?;
    match verify_compression(s, fam, plan, short, &out).map_err(|e| e.to_string())? {
        CompressionCheck::Identical => {}
        d => return Err(format!("{d:?}: {}", describe())),
    }
    for f in fam.funs() {
        let (long, compressed) = oracle::compression_sides(s, f, plan, short);
        ensure(long == compressed, || format!("brute-force sides differ for {f:?}: {}", describe()))?;
    }
    Ok(())
}

fn random_instance_pool() -> Vec<FiniteSemigroup> {
    let mut pool = vec![build(Family::Trivial), build(Family::FullTransformation(2))];
    for n in 2..=4 {
        pool.extend([Family::Cyclic(n), Family::LeftZero(n), Family::RightZero(n), Family::ModMult(n)].map(build));
    }
    let z2 = build(Family::Cyclic(2));
    pool.push(direct_product(&z2, &z2).expect("small"));
    pool.push(direct_product(&build(Family::LeftZero(2)), &build(Family::RightZero(2))).expect("small"));
    pool.extend(oracle::all_semigroups(2));
    pool
}

fn compression_identity() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let pool = random_instance_pool();
    let mut random_checks = 0;
    for _ in 0..1000 {
        let s = pool.choose(&mut rng).expect("nonempty pool");
        let order = s.order() as u32;
        let r = rng.gen_range(1..=3);
        let blocks = random_blockseq(&mut rng, r, 8).expect("r <= 8");
        let funs: Vec<SeqFun> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let values = (0..8).map(|_| Element(rng.gen_range(0..order))).collect();
                SeqFun::new(values, Element(rng.gen_range(0..order))).expect("nonempty")
            })
            .collect();
        let fam = FunFamily::new(funs).map_err(|e| e.to_string())?;
        let m = rng.gen_range(1..=r);
        let mut t: Vec<u32> = rand::seq::index::sample(&mut rng, r, m).into_iter().map(|i| i as u32 + 1).collect();
        t.sort_unstable();
        let a = (0..=m).map(|_| Element(rng.gen_range(0..order))).collect();
        let short = CrWitness::new(a, t).map_err(|e| e.to_string())?;
        let fillers: Vec<u32> = if order <= 2 { (0..order).collect() } else { vec![rng.gen_range(0..order)] };
        for d in fillers {
            let plan = CompressionPlan::new(blocks.clone(), Element(d));
            compression_case(s, &fam, &plan, &short)?;
            random_checks += 1;
        }
    }

    let mut exhaustive = 0;
    let tables = TableFuns::new(2, 4);
    let all_funs = FunFamily::new((0..tables.count()).map(|i| tables.nth(i)).collect()).map_err(|e| e.to_string())?;
    for s in oracle::all_semigroups(2) {
        for r in 1..=2usize {
            let systems: Vec<_> = enumerate_blockseqs(r, 4).map_err(|e| e.to_string())?.collect();
            ensure(systems.len() as u128 == count_blockseqs(r, 4), || "block-system count".into())?;
            for blocks in systems {
                for d in 0..2 {
                    let plan = CompressionPlan::new(blocks.clone(), Element(d));
                    for mask in 1u32..1 << r {
                        let t: Vec<u32> = (1..=r as u32).filter(|i| mask >> (i - 1) & 1 == 1).collect();
                        for word in 0u32..1 << (t.len() + 1) {
                            let a = (0..=t.len()).map(|i| Element(word >> i & 1)).collect();
                            let short = CrWitness::new(a, t.clone()).map_err(|e| e.to_string())?;
                            compression_case(&s, &all_funs, &plan, &short)?;
                            exhaustive += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!(
        "{random_checks} seeded checks and {exhaustive} exhaustive checks (x{} sequences), zero failures",
        all_funs.len()
    ))
}

// 6

fn product_soundness() -> Result<String, String> {
    let factors = [
        (Family::Trivial, vec![vec![0u32]]),
        (Family::LeftZero(2), vec![vec![0], vec![1], vec![0, 1]]),
        (Family::RightZero(2), vec![vec![0], vec![1], vec![0, 1]]),
        (Family::Cyclic(2), vec![vec![0]]),
    ];
    let mut jobs = Vec::new();
    for (sf, s_sets) in &factors {
        for (tf, t_sets) in &factors {
            for a in s_sets {
                for b in t_sets {
                    jobs.push((*sf, a.clone(), *tf, b.clone()));
                }
            }
        }
    }
    let mut families_by_order = std::collections::BTreeMap::new();
    for order in [1, 2, 4] {
        families_by_order.insert(order, small_families(order, 4));
    }
    let results: Result<Vec<(usize, usize)>, String> = jobs
        .iter()
        .map(|(sf, a, tf, b)| {
            let (s, t) = (build(*sf), build(*tf));
            let sa = ElementSet::from_indices(&s, a.iter().copied()).expect("in range");
            let tb = ElementSet::from_indices(&t, b.iter().copied()).expect("in range");
            let st = direct_product(&s, &t).map_err(|e| e.to_string())?;
            let target = sa.product(&tb, &st).map_err(|e| e.to_string())?;
            let label = format!("{sf} A={a:?} x {tf} B={b:?}");
            let fams = &families_by_order[&st.order()];
            let per: Result<Vec<usize>, String> = fams
                .par_iter()
                .map(|funs| {
                    let fam = FunFamily::new(funs.clone()).map_err(|e| e.to_string())?;
                    let query = ProductQuery { k: 2, l_max: 4, l_start: None };
                    let found = match product_witness(&seq(), &s, &sa, &t, &tb, &fam, query) {
                        Ok(ProductOutcome::Found(pw)) => pw,
                        other => return Err(format!("{label}, family {funs:?}: {other:?}")),
                    };
                    let w = &found.witness;
                    ensure(found.l_used <= 4 && w.reach() as usize <= found.l_used, || {
                        format!("{label}: l_used {}", found.l_used)
                    })?;
                    ensure(verify_witness(&st, &target, &fam, w) == Ok(WitnessCheck::Verified), || {
                        format!("{label}, family {funs:?}: witness does not verify")
                    })?;
                    for f in funs {
                        let v = oracle::fold(&st, &oracle::spelled(w.word(), f, w.indices()));
                        let (x, y) = st.split(v).map_err(|e| e.to_string())?;
                        ensure(sa.contains(x) && tb.contains(y), || format!("{label}: brute force leaves A x B"))?;
                    }
                    Ok(found.l_used)
                })
                .collect();
            let per = per?;
            Ok((per.len(), per.into_iter().max().unwrap_or(0)))
        })
        .collect();
    let results = results?;
    let total: usize = results.iter().map(|r| r.0).sum();
    let worst = results.iter().map(|r| r.1).max().unwrap_or(0);
    Ok(format!("{total} families over {} target pairs, largest l_used {worst}", jobs.len()))
}

// 7

fn ip_monotonicity() -> Result<String, String> {
    let ctx = seq();
    let mut with_level = 0;
    for n in 1..=7usize {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0700 + n as u64);
        for trial in 0..200 {
            let density: f64 = rng.gen_range(0.05..0.95);
            let sets: Vec<FinSet> = (1u64..1 << n)
                .filter(|_| rng.gen_bool(density))
                .map(|m| FinSet::from_mask(m).expect("nonempty"))
                .collect();
            let fam = SetFamily::new(sets);
            let holds: Vec<bool> = (1..=n)
                .map(|u| is_ip_r_star_within(&ctx, &fam, u, n).map(|v| v.holds()))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            if let Some(first) = holds.iter().position(|&h| h) {
                with_level += 1;
                ensure(holds[first..].iter().all(|&h| h), || {
                    format!("n={n}, family #{trial}: passes at {} but not above: {holds:?}", first + 1)
                })?;
            }
        }
    }
    Ok(format!("1400 families, {with_level} pass at some level, no violation"))
}

// 8

fn estimator_sanity() -> Result<String, String> {
    let ctx = seq();
    for n in 1..=4 {
        let rep = estimate_l_exhaustive(&ctx, 1, 1, n).map_err(|e| e.to_string())?;
        ensure(rep.bound == Some(1), || format!("u=v=1, n={n}: bound {:?}", rep.bound))?;
    }
    let mut runs = 0;
    for n in 1..=5 {
        for u in 1..=n {
            for v in 1..=n {
                let rep = estimate_l_exhaustive(&ctx, u, v, n).map_err(|e| e.to_string())?;
                ensure(rep.bound.is_some_and(|b| b >= u.max(v)), || {
                    format!("u={u}, v={v}, n={n}: bound {:?}", rep.bound)
                })?;
                runs += 1;
            }
        }
    }
    Ok(format!("bound 1 for u=v=1 and n<=4; {runs} runs with n<=5 all at least max(u,v)"))
}

// 9

/// One invocation of every subcommand except `selftest`. Later entries may
/// splice in the standard output of earlier ones through `{0}`, `{1}`, ….
pub fn determinism_script() -> Vec<Vec<String>> {
    let z3_funs = r#"[{"values":[1,2,1],"default":0},{"values":[2,2,0],"default":0}]"#;
    let z2_funs = r#"[{"values":[1,1,0,1],"default":0},{"values":[0,1,1,1],"default":0}]"#;
    let long_funs = r#"[{"values":[1,2,0,2,1,1],"default":0},{"values":[2,0,2,1,2,1],"default":2}]"#;
    let plan = r#"{"format":1,"blocks":[[1,2],[3,5],[6]],"d":1}"#;
    let product_funs = r#"[{"values":[1,2,3,0],"default":0},{"values":[3,3,1,2],"default":1}]"#;
    let script: Vec<Vec<&str>> = vec![
        vec!["semigroup", "validate", r#"{"n":2,"table":[[0,1],[1,0]]}"#],
        vec!["semigroup", "gen", "full_transformation", "2"],
        vec!["semigroup", "product", "--left", "cyclic:2", "--right", "left_zero:2"],
        vec!["fu", "--blocks", "[[1,2],[4],[5,7]]"],
        vec!["ipstar", "--family", "[[1],[2,3],[4]]", "--r", "2", "--n", "6"],
        vec!["ipstar", "--family", "[[1],[2],[3,4]]", "--r", "3", "--n", "18", "--samples", "500"],
        vec!["cr", "check", "--sgp", "cyclic:3", "--set", "[0]", "--k", "2", "--r", "3"],
        vec!["cr", "find-r", "--sgp", "cyclic:2", "--set", "[0]", "--k", "2"],
        vec!["cr", "witness", "--sgp", "cyclic:3", "--set", "[0]", "--funs", z3_funs, "--r", "3"],
        vec!["cr", "verify", "--sgp", "cyclic:3", "--set", "[0]", "--funs", z3_funs, "--witness", "{8}"],
        vec!["theta", "compute", "--sgp", "cyclic:2", "--set", "[0]", "--funs", z2_funs, "--n", "4"],
        vec!["transfer", "derive-g", "--sgp", "cyclic:3", "--funs", long_funs, "--plan", plan],
        vec!["cr", "witness", "--sgp", "cyclic:3", "--set", "[0]", "--funs", "{11}", "--r", "3"],
        vec!["transfer", "compress", "--sgp", "cyclic:3", "--plan", plan, "--witness", "{12}"],
        vec!["transfer", "verify", "--sgp", "cyclic:3", "--funs", long_funs, "--plan", plan, "--witness", "{12}", "--compressed", "{13}"],
        vec!["cr", "verify", "--sgp", "cyclic:3", "--set", "[0]", "--funs", long_funs, "--witness", "{13}"],
        vec!["lemma1", "check", "--sgp", "cyclic:2", "--set", "[0]", "--k", "2", "--n", "4", "--constructive"],
        vec![
            "product", "witness", "--sgp-a", "left_zero:2", "--set-a", "[0]", "--sgp-b", "cyclic:2", "--set-b", "[0]",
            "--funs", product_funs, "--k", "2", "--l-max", "4",
        ],
        vec!["semigroup", "product", "--left", "left_zero:2", "--right", "cyclic:2"],
        vec!["cr", "verify", "--sgp", "{18}", "--set", "[0]", "--funs", product_funs, "--witness", "{17}"],
        vec!["lemma2", "estimate", "--u", "2", "--v", "2", "--n", "4", "--mode", "exhaustive"],
        vec!["lemma2", "estimate", "--u", "1", "--v", "2", "--n", "4", "--mode", "sampled", "--seed", "5", "--samples", "8"],
        vec!["--format", "text", "cr", "find-r", "--sgp", "cyclic:2", "--set", "[0]", "--k", "2"],
    ];
    script.into_iter().map(|argv| argv.into_iter().map(str::to_owned).collect()).collect()
}

/// Runs the script in-process with the given worker count, returning each
/// step's exit code and standard output.
pub fn run_script(script: &[Vec<String>], jobs: usize) -> Vec<(i32, Vec<u8>)> {
    let mut results: Vec<(i32, Vec<u8>)> = Vec::new();
    for argv in script {
        let mut args = vec!["crich".to_string(), "--jobs".into(), jobs.to_string()];
        for a in argv {
            let mut a = a.clone();
            for (i, (_, prev)) in results.iter().enumerate() {
                a = a.replace(&format!("{{{i}}}"), &String::from_utf8_lossy(prev));
            }
            args.push(a);
        }
        let mut out = Vec::new();
        let code = cli::execute(args, &mut out, &mut std::io::sink());
        results.push((code, out));
    }
    results
}

fn determinism() -> Result<String, String> {
    let script = determinism_script();
    let first = run_script(&script, 1);
    let again = run_script(&script, 1);
    let wide = run_script(&script, 4);
    for (i, argv) in script.iter().enumerate() {
        ensure(first[i] == again[i], || format!("step {i} ({}) differs between runs", argv.join(" ")))?;
        ensure(first[i] == wide[i], || format!("step {i} ({}) differs between 1 and 4 jobs", argv.join(" ")))?;
        let expected: &[i32] = if argv.iter().any(|a| a == "verify" || a == "validate") {
            &[cli::EXIT_VERIFIED]
        } else {
            &[cli::EXIT_VERIFIED, cli::EXIT_REFUTED]
        };
        ensure(expected.contains(&first[i].0), || {
            format!("step {i} ({}) exited with {}", argv.join(" "), first[i].0)
        })?;
    }
    Ok(format!("{} invocations byte-identical across runs and job counts; all re-verifications pass", script.len()))
}
