//! Command-line entry point.
//!
//! Exit codes: 0 verified, 1 refuted or nothing found, 2 input error,
//! 3 search refused by the cost guard.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use crich_core::cr::{
    check_cr_at, compute_theta, evaluate_interleaved, find_r, find_witness, verify_witness, CrCheck, WitnessCheck,
};
use crich_core::exec::{Ctx, DEFAULT_MAX_COST};
use crich_core::finset::{fu_enumerate, is_ip_r_star_within, sample_ip_r_star_within, IpStar, DEFAULT_ENUM_LIMIT};
use crich_core::product::{
    estimate_l_exhaustive, estimate_l_sampled, product_witness, Lemma2Report, ProbeClass, ProductOutcome,
    ProductQuery,
};
use crich_core::semigroup::{direct_product, Family, Violation};
use crich_core::transfer::{
    compress_witness, derive_g, lemma1_check, verify_compression, CompressionCheck, Lemma1Failure, Lemma1Options,
    Lemma1Verdict,
};
use crich_core::{Budget, Element, Error, FiniteSemigroup};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::formats::*;
use crate::workers::Workers;
use crate::{selftest, CliError};

pub const EXIT_VERIFIED: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_COST: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "crich", version, about = "Combinatorially rich sets in finite semigroups")]
pub struct Cli {
    /// Largest admissible search size, in search-node units
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_COST)]
    pub max_cost: u128,
    /// Seed for every sampled mode
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=256))]
    pub jobs: u64,
    /// Accept semigroup tables without the associativity check
    #[arg(long, global = true)]
    pub skip_validate: bool,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Write the result here instead of standard output
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    /// One short human-readable line
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cayley tables: validation, named families, products
    #[command(subcommand)]
    Semigroup(SemigroupCmd),
    /// All finite unions of a block system
    Fu(FuArgs),
    /// IP_r* check of a set family inside {1..n}
    Ipstar(IpstarArgs),
    /// Witnesses and the least admissible r
    #[command(subcommand)]
    Cr(CrCmd),
    /// Realisable index sets
    #[command(subcommand)]
    Theta(ThetaCmd),
    /// Block compression of witnesses
    #[command(subcommand)]
    Transfer(TransferCmd),
    /// Bounded check that realisable index sets meet every block system
    #[command(subcommand)]
    Lemma1(Lemma1Cmd),
    /// Witnesses for products of target sets
    #[command(subcommand)]
    Product(ProductCmd),
    /// Estimates of the IP* intersection level
    #[command(subcommand)]
    Lemma2(Lemma2Cmd),
    /// Run the acceptance suite
    Selftest(SelftestArgs),
}

#[derive(Debug, Subcommand)]
pub enum SemigroupCmd {
    /// Check closure and associativity of a table file
    Validate { input: String },
    /// Emit a named family, e.g. `gen cyclic 2`
    Gen { family: String, param: Option<usize> },
    /// Emit the direct product of two semigroups
    Product {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
}

#[derive(Debug, Args)]
pub struct FuArgs {
    #[arg(long)]
    pub blocks: String,
}

#[derive(Debug, Args)]
pub struct IpstarArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub n: usize,
    /// Sample block systems even when exhaustive checking is feasible
    #[arg(long)]
    pub sampled: bool,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct Target {
    /// Semigroup: JSON, a file, or a family name like `cyclic:2`
    #[arg(long)]
    pub sgp: String,
    /// Target subset: JSON array of elements, a file, or `all`
    #[arg(long)]
    pub set: String,
}

#[derive(Debug, Subcommand)]
pub enum CrCmd {
    /// Does every family of k tables over {1..r} have a witness within r?
    Check {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
    },
    /// Least r at which `check` holds
    FindR {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 4)]
        r_max: usize,
    },
    /// Canonically least witness for a family
    Witness {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        funs: String,
        #[arg(long)]
        r: usize,
    },
    /// Re-check a witness against a family
    Verify {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        funs: String,
        #[arg(long)]
        witness: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum ThetaCmd {
    Compute {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        funs: String,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum TransferCmd {
    /// Compressed sequences for a family and plan
    DeriveG {
        #[arg(long)]
        sgp: String,
        #[arg(long)]
        funs: String,
        #[arg(long)]
        plan: String,
    },
    /// Expand a witness of the compressed family
    Compress {
        #[arg(long)]
        sgp: String,
        #[arg(long)]
        plan: String,
        #[arg(long)]
        witness: String,
    },
    /// Compare long and short products for every sequence
    Verify {
        #[arg(long)]
        sgp: String,
        #[arg(long)]
        funs: String,
        #[arg(long)]
        plan: String,
        #[arg(long)]
        witness: String,
        #[arg(long)]
        compressed: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum Lemma1Cmd {
    Check {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        k: usize,
        /// Number of blocks; found with `cr find-r` when omitted
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        n: usize,
        /// Also expand and re-check a compressed witness for every system
        #[arg(long)]
        constructive: bool,
        #[arg(long, default_value_t = 0)]
        filler: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum ProductCmd {
    Witness {
        #[arg(long)]
        sgp_a: String,
        #[arg(long)]
        set_a: String,
        #[arg(long)]
        sgp_b: String,
        #[arg(long)]
        set_b: String,
        /// Family over the product, elements encoded as `i * |T| + j`
        #[arg(long)]
        funs: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l_max: usize,
        #[arg(long)]
        l_start: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EstimateMode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Subcommand)]
pub enum Lemma2Cmd {
    Estimate {
        #[arg(long)]
        u: usize,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = EstimateMode::Exhaustive)]
        mode: EstimateMode,
        #[arg(long, default_value_t = 32)]
        samples: usize,
    },
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Run only these criteria
    #[arg(long = "criterion")]
    pub criteria: Vec<u8>,
}

/// Budget, seed, worker count and destination of one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub max_cost: u128,
    pub seed: u64,
    pub jobs: usize,
    pub output: Option<PathBuf>,
    pub skip_validate: bool,
}

impl RunConfig {
    fn ctx(&self) -> Ctx<Workers> {
        Ctx::new(Workers::new(self.jobs), Budget::new(self.max_cost))
    }

    fn sgp(&self, arg: &str) -> Result<FiniteSemigroup, CliError> {
        Ok(load_semigroup(arg, self.skip_validate)?.0)
    }
}

struct Outcome {
    doc: Value,
    text: String,
    verified: bool,
}

impl Outcome {
    fn new(mut doc: Value, text: impl Into<String>, verified: bool) -> Self {
        if let Value::Object(map) = &mut doc {
            map.insert("format".into(), json!(FORMAT));
        }
        Self { doc, text: text.into(), verified }
    }
}

/// Counts as JSON numbers, or as strings past `u64`.
fn count(x: u128) -> Value {
    u64::try_from(x).map_or_else(|_| json!(x.to_string()), |v| json!(v))
}

fn compact(v: &Value) -> String {
    serde_json::to_string(v).expect("serialisable")
}

/// Parses `argv`, runs the command, writes the result, and returns the
/// exit code. Diagnostics and progress go to `err`.
pub fn execute<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
                EXIT_INPUT
            } else {
                let _ = out.write_all(rendered.as_bytes());
                EXIT_VERIFIED
            };
        }
    };
    let cfg = RunConfig {
        max_cost: cli.max_cost,
        seed: cli.seed,
        jobs: cli.jobs as usize,
        output: cli.output.clone(),
        skip_validate: cli.skip_validate,
    };
    let outcome = match dispatch(&cli.command, &cfg, err) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    let body = match cli.format {
        OutputFormat::Json => serde_json::to_string_pretty(&outcome.doc).expect("serialisable") + "\n",
        OutputFormat::Text => outcome.text + "\n",
    };
    let written = match &cfg.output {
        Some(path) => std::fs::write(path, body.as_bytes())
            .map_err(|source| CliError::Io { path: path.display().to_string(), source }),
        None => out.write_all(body.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return e.exit_code();
    }
    if outcome.verified {
        EXIT_VERIFIED
    } else {
        EXIT_REFUTED
    }
}

fn dispatch(cmd: &Command, cfg: &RunConfig, err: &mut dyn Write) -> Result<Outcome, CliError> {
    match cmd {
        Command::Semigroup(c) => semigroup(c, cfg),
        Command::Fu(a) => fu(a),
        Command::Ipstar(a) => ipstar(a, cfg),
        Command::Cr(c) => cr(c, cfg),
        Command::Theta(ThetaCmd::Compute { target, funs, n }) => theta(target, funs, *n, cfg),
        Command::Transfer(c) => transfer(c, cfg),
        Command::Lemma1(c) => lemma1(c, cfg),
        Command::Product(c) => product(c, cfg),
        Command::Lemma2(c) => lemma2(c, cfg),
        Command::Selftest(a) => Ok(run_selftest(a, err)),
    }
}

fn violation_value(v: Violation) -> Value {
    match v {
        Violation::NotClosed { x, y, value } => json!({"kind": "not_closed", "x": x, "y": y, "value": value}),
        Violation::NotAssociative { x, y, z } => json!({"kind": "not_associative", "x": x, "y": y, "z": z}),
    }
}

fn semigroup(cmd: &SemigroupCmd, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cmd {
        SemigroupCmd::Validate { input } => {
            let (sgp, name) = match load_semigroup(input, true) {
                Ok(found) => found,
                Err(CliError::Core(Error::NotASemigroup(v))) => {
                    let doc = json!({"valid": false, "violation": violation_value(v)});
                    return Ok(Outcome::new(doc, format!("invalid: {v}"), false));
                }
                Err(e) => return Err(e),
            };
            Ok(match sgp.validate() {
                Ok(()) => Outcome::new(json!({"valid": true, "n": sgp.order(), "name": name}), "valid", true),
                Err(v) => {
                    let doc = json!({"valid": false, "n": sgp.order(), "name": name, "violation": violation_value(v)});
                    Outcome::new(doc, format!("invalid: {v}"), false)
                }
            })
        }
        SemigroupCmd::Gen { family, param } => {
            let fam = match param {
                Some(p) => Family::from_name(family, Some(*p))?,
                None => family.parse::<Family>()?,
            };
            let sgp = fam.build()?;
            let name = fam.to_string();
            let text = sgp.rows().iter().map(|r| compact(&json!(r))).collect::<Vec<_>>().join("\n");
            Ok(Outcome::new(semigroup_doc(&sgp, Some(&name)), text, true))
        }
        SemigroupCmd::Product { left, right } => {
            let (s, sn) = load_semigroup(left, cfg.skip_validate)?;
            let (t, tn) = load_semigroup(right, cfg.skip_validate)?;
            let st = direct_product(&s, &t)?;
            let name = format!("{} x {}", sn.as_deref().unwrap_or("left"), tn.as_deref().unwrap_or("right"));
            let text = format!("{name}: order {}", st.order());
            Ok(Outcome::new(semigroup_doc(&st, Some(&name)), text, true))
        }
    }
}

fn fu(args: &FuArgs) -> Result<Outcome, CliError> {
    let blocks = load_blockseq(&args.blocks)?;
    let fam = fu_enumerate(&blocks)?;
    let family = set_family_value(&fam);
    let text = compact(&family);
    Ok(Outcome::new(json!({"blocks": blockseq_value(&blocks), "family": family, "size": fam.len()}), text, true))
}

fn ipstar(args: &IpstarArgs, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let fam = load_set_family(&args.family)?;
    let sampled = args.sampled || args.n > DEFAULT_ENUM_LIMIT;
    let verdict = if sampled {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        sample_ip_r_star_within(&mut rng, &fam, args.r, args.n, args.samples)?
    } else {
        is_ip_r_star_within(&cfg.ctx(), &fam, args.r, args.n)?
    };
    let mode = if sampled { "sampled" } else { "exhaustive" };
    let mut doc = json!({"r": args.r, "n": args.n, "mode": mode, "holds": verdict.holds()});
    if sampled {
        doc["seed"] = json!(cfg.seed);
        doc["samples"] = json!(args.samples);
    }
    let text = match &verdict {
        IpStar::Holds { systems } => {
            doc["systems"] = count(*systems);
            format!("holds ({mode}, {systems} systems)")
        }
        IpStar::Fails(b) => {
            doc["failing_system"] = blockseq_value(b);
            format!("fails ({mode}): {}", compact(&blockseq_value(b)))
        }
    };
    Ok(Outcome::new(doc, text, verdict.holds()))
}

fn cr(cmd: &CrCmd, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ctx = cfg.ctx();
    match cmd {
        CrCmd::Check { target, k, r } => {
            let sgp = cfg.sgp(&target.sgp)?;
            let set = load_element_set(&target.set, &sgp)?;
            Ok(match check_cr_at(&ctx, &sgp, &set, *k, *r)? {
                CrCheck::Holds { families } => {
                    let doc = json!({"k": k, "r": r, "holds": true, "families": count(families)});
                    Outcome::new(doc, format!("holds ({families} families)"), true)
                }
                CrCheck::Counterexample(fam) => {
                    let cx = family_value(fam.funs());
                    let text = format!("counterexample: {}", compact(&cx["funs"]));
                    Outcome::new(json!({"k": k, "r": r, "holds": false, "counterexample": cx}), text, false)
                }
            })
        }
        CrCmd::FindR { target, k, r_max } => {
            let sgp = cfg.sgp(&target.sgp)?;
            let set = load_element_set(&target.set, &sgp)?;
            let r = find_r(&ctx, &sgp, &set, *k, *r_max)?;
            let text = r.map_or_else(|| "none".to_string(), |r| r.to_string());
            Ok(Outcome::new(json!({"k": k, "r_max": r_max, "r": r}), text, r.is_some()))
        }
        CrCmd::Witness { target, funs, r } => {
            let sgp = cfg.sgp(&target.sgp)?;
            let set = load_element_set(&target.set, &sgp)?;
            let fam = load_family(funs, &sgp)?;
            let w = find_witness(&ctx, &sgp, &set, &fam, *r)?;
            let wv = w.as_ref().map_or(Value::Null, witness_value);
            let text = w.as_ref().map_or_else(|| "none".to_string(), |_| compact(&wv));
            Ok(Outcome::new(json!({"r": r, "witness": wv}), text, w.is_some()))
        }
        CrCmd::Verify { target, funs, witness } => {
            let sgp = cfg.sgp(&target.sgp)?;
            let set = load_element_set(&target.set, &sgp)?;
            let fam = load_family(funs, &sgp)?;
            let w = load_witness(witness, &sgp)?;
            Ok(match verify_witness(&sgp, &set, &fam, &w)? {
                WitnessCheck::Verified => Outcome::new(json!({"verified": true}), "verified", true),
                WitnessCheck::Fails { fun, value } => Outcome::new(
                    json!({"verified": false, "fun": fun, "value": value.0}),
                    format!("fails: sequence {fun} evaluates to {value}"),
                    false,
                ),
            })
        }
    }
}

fn theta(target: &Target, funs: &str, n: usize, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let sgp = cfg.sgp(&target.sgp)?;
    let set = load_element_set(&target.set, &sgp)?;
    let fam = load_family(funs, &sgp)?;
    let theta = compute_theta(&cfg.ctx(), &sgp, &set, &fam, n)?;
    let sets = set_family_value(theta.family());
    let witnesses: Vec<Value> = theta
        .iter()
        .map(|(l, w)| json!({"set": l.to_vec(), "word": w.iter().map(|e| e.0).collect::<Vec<_>>()}))
        .collect();
    let text = format!("{} sets: {}", theta.family().len(), compact(&sets));
    let found = !theta.family().is_empty();
    Ok(Outcome::new(json!({"n": n, "sets": sets, "witnesses": witnesses}), text, found))
}

fn transfer(cmd: &TransferCmd, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cmd {
        TransferCmd::DeriveG { sgp, funs, plan } => {
            let sgp = cfg.sgp(sgp)?;
            let fam = load_family(funs, &sgp)?;
            let plan = load_plan(plan, &sgp)?;
            let derived = fam.funs().iter().map(|f| derive_g(&sgp, f, &plan)).collect::<Result<Vec<_>, _>>()?;
            let doc = family_value(&derived);
            let text = compact(&doc["funs"]);
            Ok(Outcome::new(doc, text, true))
        }
        TransferCmd::Compress { sgp, plan, witness } => {
            let sgp = cfg.sgp(sgp)?;
            let plan = load_plan(plan, &sgp)?;
            let short = load_witness(witness, &sgp)?;
            let out = compress_witness(&plan, &short)?;
            let doc = compressed_value(&out)?;
            let text = format!("set {} word {}", compact(&doc["set"]), compact(&doc["word"]));
            Ok(Outcome::new(doc, text, true))
        }
        TransferCmd::Verify { sgp, funs, plan, witness, compressed } => {
            let sgp = cfg.sgp(sgp)?;
            let fam = load_family(funs, &sgp)?;
            let plan = load_plan(plan, &sgp)?;
            let short = load_witness(witness, &sgp)?;
            let out = load_compressed(compressed, &sgp)?;
            Ok(match verify_compression(&sgp, &fam, &plan, &short, &out)? {
                CompressionCheck::Identical => Outcome::new(json!({"identical": true}), "identical", true),
                CompressionCheck::Differs { fun, long, short } => Outcome::new(
                    json!({"identical": false, "fun": fun, "long": long.0, "short": short.0}),
                    format!("differs on sequence {fun}: long {long}, short {short}"),
                    false,
                ),
            })
        }
    }
}

fn failure_name(f: Lemma1Failure) -> &'static str {
    match f {
        Lemma1Failure::ThetaMissesSystem => "theta_misses_system",
        Lemma1Failure::NoShortWitness => "no_short_witness",
        Lemma1Failure::CompressedOutsideTheta => "compressed_outside_theta",
        Lemma1Failure::CompressionMismatch => "compression_mismatch",
    }
}

fn lemma1(cmd: &Lemma1Cmd, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let Lemma1Cmd::Check { target, k, r, n, constructive, filler } = cmd;
    let ctx = cfg.ctx();
    let sgp = cfg.sgp(&target.sgp)?;
    let set = load_element_set(&target.set, &sgp)?;
    let (r, source) = match r {
        Some(r) => (*r, "given"),
        None => match find_r(&ctx, &sgp, &set, *k, (*n).max(1))? {
            Some(r) => (r, "find-r"),
            None => {
                let doc = json!({"k": k, "n": n, "r": null});
                return Ok(Outcome::new(doc, format!("no r <= {} for k = {k}", (*n).max(1)), false));
            }
        },
    };
    let opts = Lemma1Options { constructive: *constructive, filler: Element(*filler) };
    let verdict = lemma1_check(&ctx, &sgp, &set, *k, r, *n, opts)?;
    let mut doc = json!({"k": k, "r": r, "r_source": source, "n": n, "constructive": constructive, "holds": verdict.holds()});
    let text = match &verdict {
        Lemma1Verdict::Holds { families, systems } => {
            doc["families"] = count(*families);
            doc["systems"] = count(*systems);
            format!("holds ({families} families, {systems} systems)")
        }
        Lemma1Verdict::Counterexample { family, system, failure } => {
            doc["family"] = family_value(family.funs());
            doc["system"] = blockseq_value(system);
            doc["failure"] = json!(failure_name(*failure));
            format!("counterexample ({}): system {}", failure_name(*failure), compact(&blockseq_value(system)))
        }
    };
    Ok(Outcome::new(doc, text, verdict.holds()))
}

fn product(cmd: &ProductCmd, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ProductCmd::Witness { sgp_a, set_a, sgp_b, set_b, funs, k, l_max, l_start } = cmd;
    let s = cfg.sgp(sgp_a)?;
    let t = cfg.sgp(sgp_b)?;
    let a = load_element_set(set_a, &s)?;
    let b = load_element_set(set_b, &t)?;
    let st = direct_product(&s, &t)?;
    let fam = load_family(funs, &st)?;
    let query = ProductQuery { k: *k, l_max: *l_max, l_start: *l_start };
    match product_witness(&cfg.ctx(), &s, &a, &t, &b, &fam, query)? {
        ProductOutcome::Found(pw) => {
            let target = a.product(&b, &st)?;
            let mut transcript = Vec::new();
            for (i, f) in fam.funs().iter().enumerate() {
                let value = evaluate_interleaved(&st, pw.witness.word(), f, pw.witness.indices())?;
                let (x, y) = st.split(value)?;
                transcript.push(json!({
                    "fun": i,
                    "value": value.0,
                    "pair": [x.0, y.0],
                    "in_target": target.contains(value),
                }));
            }
            let doc = json!({
                "witness": witness_value(&pw.witness),
                "l_used": pw.l_used,
                "l_start": pw.l_start,
                "left_word": pw.left.iter().map(|e| e.0).collect::<Vec<_>>(),
                "right_word": pw.right.iter().map(|e| e.0).collect::<Vec<_>>(),
                "product_order": st.order(),
                "transcript": transcript,
            });
            let text = format!("l_used {}: {}", pw.l_used, compact(&witness_value(&pw.witness)));
            Ok(Outcome::new(doc, text, true))
        }
        ProductOutcome::NotFound(gap) => {
            let doc = json!({
                "witness": null,
                "l_max": gap.l_max,
                "left_empty": gap.left_empty,
                "right_empty": gap.right_empty,
            });
            Ok(Outcome::new(doc, format!("none up to l = {}", gap.l_max), false))
        }
    }
}

fn report_value(rep: &Lemma2Report) -> Value {
    let class = match rep.class {
        ProbeClass::CanonicalSuffixes => json!({"kind": "canonical_suffixes"}),
        ProbeClass::RandomMinimal { samples } => json!({"kind": "random_minimal", "samples": samples}),
    };
    json!({
        "u": rep.u,
        "v": rep.v,
        "n": rep.n,
        "class": class,
        "pairs_probed": count(rep.pairs_probed),
        "pairs_admissible": count(rep.pairs_admissible),
        "pairs_unbounded": count(rep.pairs_unbounded),
        "bound": rep.bound,
        "witness": rep.witness.as_ref().map(|(x, y)| json!({"left": set_family_value(x), "right": set_family_value(y)})),
    })
}

fn lemma2(cmd: &Lemma2Cmd, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let Lemma2Cmd::Estimate { u, v, n, mode, samples } = cmd;
    let ctx = cfg.ctx();
    let rep = match mode {
        EstimateMode::Exhaustive => estimate_l_exhaustive(&ctx, *u, *v, *n)?,
        EstimateMode::Sampled => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            estimate_l_sampled(&ctx, &mut rng, *u, *v, *n, *samples)?
        }
    };
    let mut doc = report_value(&rep);
    if *mode == EstimateMode::Sampled {
        doc["seed"] = json!(cfg.seed);
    }
    let text = match rep.bound {
        Some(l) => format!("l >= {l} ({} admissible pairs, {} unbounded)", rep.pairs_admissible, rep.pairs_unbounded),
        None => "no admissible pairs".to_string(),
    };
    Ok(Outcome::new(doc, text, rep.bound.is_some()))
}

fn run_selftest(args: &SelftestArgs, err: &mut dyn Write) -> Outcome {
    let reports = selftest::run(&args.criteria, |rep| {
        let _ = writeln!(err, "{}", rep.line());
    });
    let passed = reports.iter().all(|r| r.passed);
    let criteria: Vec<Value> = reports
        .iter()
        .map(|r| json!({"id": r.id, "name": r.name, "passed": r.passed, "detail": r.detail}))
        .collect();
    let text = reports.iter().map(|r| r.verdict_line()).collect::<Vec<_>>().join("\n");
    Outcome::new(json!({"criteria": criteria, "passed": passed}), text, passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = execute(std::iter::once("crich").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn find_r_prints_two() {
        let (code, out) = run(&["--format", "text", "cr", "find-r", "--sgp", "cyclic:2", "--set", "[0]", "--k", "2"]);
        assert_eq!((code, out.as_str()), (0, "2\n"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(&["semigroup", "gen", "cyclic", "2"]).0, EXIT_VERIFIED);
        assert_eq!(run(&["semigroup", "gen", "nonsense", "2"]).0, EXIT_INPUT);
        assert_eq!(run(&["cr", "find-r", "--sgp", "cyclic:2", "--set", "[0]", "--k", "2", "--r-max", "1"]).0, EXIT_REFUTED);
        let guarded = ["--max-cost", "1", "cr", "check", "--sgp", "cyclic:3", "--set", "[0]", "--k", "2", "--r", "3"];
        assert_eq!(run(&guarded).0, EXIT_COST);
        assert_eq!(run(&["cr", "bogus"]).0, EXIT_INPUT);
        assert_eq!(run(&["--help"]).0, EXIT_VERIFIED);
    }

    #[test]
    fn validate_reports_violations() {
        let (code, out) = run(&["semigroup", "validate", r#"{"n": 2, "table": [[1, 0], [0, 0]]}"#]);
        assert_eq!(code, EXIT_REFUTED);
        assert!(out.contains("not_associative"));
        let (code, out) = run(&["semigroup", "validate", r#"{"n": 2, "table": [[0, 2], [0, 0]]}"#]);
        assert_eq!(code, EXIT_REFUTED);
        assert!(out.contains("not_closed"));
        assert_eq!(run(&["semigroup", "validate", r#"{"n": 2, "table": [[0], [0, 0]]}"#]).0, EXIT_INPUT);
    }

    #[test]
    fn unvalidated_tables_need_the_flag() {
        let table = r#"{"n": 2, "table": [[1, 0], [0, 0]]}"#;
        let args = ["cr", "find-r", "--sgp", table, "--set", "[0]", "--k", "1"];
        assert_eq!(run(&args).0, EXIT_INPUT);
        let mut flagged = vec!["--skip-validate"];
        flagged.extend(args);
        assert_ne!(run(&flagged).0, EXIT_INPUT);
    }
}
