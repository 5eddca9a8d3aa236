use std::fmt;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};

use sgx_core::construct::{
    adjoin_identity, adjoin_zero, build_free_nilpotent_with, direct_product, quotient_by_partition,
    rees_quotient, zero_direct_union,
};
use sgx_core::function::term_to_function;
use sgx_core::gallery::{self, CheckOptions};
use sgx_core::imt::degree_lower_bound_probe_with;
use sgx_core::io::{self, Catalog, OracleSpec};
use sgx_core::membership::{imt_with_tester, Membership, NotATerm, Strategy, TermTester};
use sgx_core::partition::congruence_closure;
use sgx_core::semigroup::{cyclic_group, semilattice2, trivial};
use sgx_core::synth::{
    synthesize_term_4nilpotent, synthesize_term_nilpotent_free, Synthesis, SynthesisConfig,
};
use sgx_core::{nilpotency_profile, Error, FiniteFunction, FiniteSemigroup, Limits};

use crate::{BuildArgs, BuildKind, CatalogAction, Cli, Command, ImtArgs, InspectArgs, ProbeArgs, SynthArgs, VerifyArgs};

/// A flag or input problem; exits with status 2.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

/// 2 for usage and format errors, 1 for everything else.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<Usage>().is_some() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::Parse(_)
                | Error::Format(_)
                | Error::UniverseMismatch { .. }
                | Error::UnknownElement(_)
                | Error::ElementOutOfRange(_)
                | Error::DuplicateLabel(_)
                | Error::InvalidTable(_)
                | Error::NotAssociative { .. }
                | Error::ArityMismatch { .. }
                | Error::ArityTooSmall { .. }
                | Error::InvalidArgument(_)
                | Error::Io(_) => 2,
                _ => 1,
            };
        }
    }
    1
}

fn limits(cli: &Cli) -> Result<Limits> {
    let mut limits = Limits {
        max_order: cli.max_order,
        max_cells: cli.max_cells,
        ..Limits::default()
    };
    if let Ok(v) = std::env::var("SGX_MEM_BUDGET") {
        limits.mem_budget = v
            .trim()
            .parse()
            .map_err(|_| usage(format!("SGX_MEM_BUDGET must be a byte count, got {v:?}")))?;
    }
    Ok(limits)
}

pub fn run(cli: Cli) -> Result<u8> {
    let limits = limits(&cli)?;
    match cli.command {
        Command::Build(args) => build(args, &limits),
        Command::Verify(args) => verify(args),
        Command::Imt(args) => imt(args, &limits),
        Command::Synthesize(args) => synthesize(args, &limits),
        Command::Probe(args) => probe(args, &limits),
        Command::Inspect(args) => inspect(args),
        Command::Catalog(args) => catalog(args.action),
    }
}

fn load(path: &Path) -> Result<FiniteSemigroup> {
    io::read_semigroup(path).with_context(|| format!("loading {}", path.display()))
}

fn apply_merges(s: &FiniteSemigroup, merges: &[String]) -> Result<FiniteSemigroup> {
    let mut pairs = Vec::new();
    for m in merges {
        let (l, r) = io::parse_merge_spec(m)?;
        pairs.push((s.element(&l)?, s.element(&r)?));
    }
    let p = congruence_closure(s, &pairs);
    let name = format!("{}/~", s.name());
    Ok(quotient_by_partition(s, &p)?.with_name(name))
}

fn build(args: BuildArgs, limits: &Limits) -> Result<u8> {
    let s = match &args.kind {
        BuildKind::Fn {
            alphabet,
            d,
            merges,
            adjoin_one,
            reuse_identity,
        } => {
            let letters: Vec<String> = alphabet.chars().map(String::from).collect();
            if letters.is_empty() {
                return Err(usage("--alphabet must not be empty"));
            }
            if *d == 0 {
                return Err(usage("--d must be at least 1"));
            }
            if *reuse_identity && !adjoin_one {
                return Err(usage("--reuse-identity needs --adjoin-one"));
            }
            let mut s = build_free_nilpotent_with(&letters, *d, limits)?;
            if !merges.is_empty() {
                s = apply_merges(&s, merges)?;
            }
            if *adjoin_one {
                s = adjoin_identity(&s, *reuse_identity)?;
            }
            s
        }
        BuildKind::Quotient { input, merges } => apply_merges(&load(input)?, merges)?,
        BuildKind::AdjoinOne { input, reuse_identity } => adjoin_identity(&load(input)?, *reuse_identity)?,
        BuildKind::AdjoinZero { input } => adjoin_zero(&load(input)?)?,
        BuildKind::Product { left, right } => direct_product(&load(left)?, &load(right)?)?,
        BuildKind::ZeroUnion { left, right } => zero_direct_union(&load(left)?, &load(right)?)?.semigroup,
        BuildKind::Rees { input, ideal } => {
            let s = load(input)?;
            let ideal = ideal
                .iter()
                .map(|l| s.element(l.trim()))
                .collect::<sgx_core::Result<Vec<_>>>()?;
            rees_quotient(&s, &ideal)?
        }
        BuildKind::Named { which } => match which.as_str() {
            "theta" => gallery::theta_monoid()?,
            "semilattice" => semilattice2(),
            "trivial" => trivial(),
            "z2" => cyclic_group(2)?,
            other => return Err(usage(format!("unknown named semigroup {other:?} (theta, semilattice, trivial, z2)"))),
        },
    };
    limits.check_order(s.order() as u128)?;
    let summary = format!("name: {}\norder: {}\nprofile: {}", s.name(), s.order(), nilpotency_profile(&s));
    match &args.output {
        Some(path) => {
            io::write_semigroup(path, &s)?;
            println!("{summary}\nwrote {}", path.display());
        }
        None => {
            print!("{}", io::to_sg_json(&s));
            eprintln!("{summary}");
        }
    }
    if let Some(dir) = &args.catalog {
        let name = match (&args.name, &args.output) {
            (Some(n), _) => n.clone(),
            (None, Some(p)) => p
                .file_name()
                .and_then(|f| f.to_str())
                .map(|f| f.trim_end_matches(".json").trim_end_matches(".sg").to_string())
                .unwrap_or_default(),
            (None, None) => return Err(usage("--catalog needs --name or -o")),
        };
        let mut cat = Catalog::open(dir)?;
        let entry = cat.add(&name, &s)?;
        println!("catalog: {} -> {}", entry.name, dir.join(&entry.path).display());
    }
    Ok(0)
}

fn verify(args: VerifyArgs) -> Result<u8> {
    let opts = CheckOptions {
        arity: args.arity,
        seed: args.seed,
        samples: args.samples,
    };
    let report = gallery::run_check(&args.check, &opts)?;
    io::write_report(&args.output, &report)?;
    println!("check: {}", report.check);
    println!("status: {}", if report.passed() { "pass" } else { "fail" });
    for (k, v) in &report.stats {
        println!("  {k}: {v}");
    }
    if let Some(w) = &report.witness {
        println!("witness: {w}");
    }
    println!("seed: {}", report.seed);
    println!("wrote {}", args.output.display());
    Ok(if report.passed() { 0 } else { 1 })
}

fn oracle_function(
    s: &Arc<FiniteSemigroup>,
    spec: &str,
    arity: Option<usize>,
    limits: &Limits,
    tabulate: bool,
) -> Result<FiniteFunction> {
    match io::parse_oracle_spec(spec)? {
        OracleSpec::Term(t) => {
            let n = arity.unwrap_or(t.arity());
            let t = t.with_arity(n)?;
            if tabulate {
                return Ok(term_to_function(s.clone(), &t, limits));
            }
            let u = s.clone();
            Ok(FiniteFunction::from_oracle(
                s.clone(),
                n,
                Arc::new(move |a| t.eval_unchecked(&u, a)),
            ))
        }
        OracleSpec::Table(path) => {
            let f = io::read_sgfn(&path, s.clone()).with_context(|| format!("loading {}", path.display()))?;
            if let Some(n) = arity {
                if n != f.arity() {
                    return Err(Error::ArityMismatch { expected: n, got: f.arity() }.into());
                }
            }
            Ok(f)
        }
    }
}

fn describe_not_a_term(why: &NotATerm) -> String {
    match why {
        NotATerm::ClosureMiss { closure_size } => {
            format!("not among the {closure_size} word functions of this arity")
        }
        NotATerm::Exhausted { candidates, exponents } => {
            format!("no match among {candidates} candidate words (exponents {exponents:?})")
        }
        NotATerm::NotAPower { var } => format!("unary restriction at x{var} is not a power"),
    }
}

fn imt(args: ImtArgs, limits: &Limits) -> Result<u8> {
    let s = Arc::new(load(&args.semigroup)?);
    let spec = match (&args.function, &args.oracle) {
        (Some(p), _) => format!("table:{}", p.display()),
        (None, Some(o)) => o.clone(),
        (None, None) => return Err(usage("give --function or --oracle")),
    };
    let f = oracle_function(&s, &spec, args.arity, limits, true)?;
    let strategy: Strategy = args.strategy.parse()?;
    let mut tester = TermTester::new(&s, f.arity(), strategy, limits)?;
    let report = imt_with_tester(&f, &mut tester)?;
    println!("universe: {} (order {})", s.name(), s.order());
    println!("arity: {}", f.arity());
    match &report.failing {
        None => println!("IMT: yes"),
        Some((m, why)) => println!("IMT: no (f{m}: {})", describe_not_a_term(why)),
    }
    for (m, t) in &report.witnesses {
        println!("  f{m} = {t}");
    }
    match tester.test(&f)? {
        Membership::Term(t) => println!("term function: yes, witness {t}"),
        Membership::NotATerm(why) => println!("term function: no ({})", describe_not_a_term(&why)),
    }
    Ok(0)
}

fn synthesize(args: SynthArgs, limits: &Limits) -> Result<u8> {
    let s = Arc::new(load(&args.semigroup)?);
    let f = oracle_function(&s, &args.oracle, args.arity, limits, false)?;
    let config = SynthesisConfig {
        samples: args.samples,
        seed: args.seed,
    };
    let profile = nilpotency_profile(&s);
    let four = match args.path.as_str() {
        "free" => false,
        "four" | "4" => true,
        "auto" => profile.d.is_some_and(|d| d <= 4),
        other => return Err(usage(format!("unknown path {other:?} (free, four, auto)"))),
    };
    let outcome = if four {
        synthesize_term_4nilpotent(&f, &config)
    } else {
        synthesize_term_nilpotent_free(&f, &config)
    };
    println!("path: {}", if four { "4-nilpotent" } else { "free-nilpotent" });
    match outcome {
        Ok(out) => {
            print_synthesis(&out);
            Ok(0)
        }
        Err(e) => {
            if let sgx_core::synth::SynthesisFailure::Algebra(inner) = e {
                return Err(inner.into());
            }
            println!("synthesis failed: {}: {e}", e.kind());
            Ok(1)
        }
    }
}

fn print_synthesis(out: &Synthesis) {
    let tr = &out.trace;
    println!("term: {}", out.term);
    let exps: Vec<String> = tr.exponents.iter().map(|e| e.to_string()).collect();
    println!("exponents: {}", exps.join(" "));
    for ((i, j), t) in &tr.pairwise {
        println!("  restriction ({},{}): {t}", i + 1, j + 1);
    }
    for ((i, m), shapes) in &tr.shapes {
        let shown: Vec<String> = shapes
            .iter()
            .map(|s| s.to_string().replace("x_i", &format!("x{}", i + 1)).replace("x_m", &format!("x{}", m + 1)))
            .collect();
        println!("  w({},{}): {}", i + 1, m + 1, shown.join(" ~ "));
    }
    for (m, (a, b)) in &tr.cuts {
        println!("  cuts for x{}: alpha={a} beta={b}", m + 1);
    }
    if let Some(c) = tr.case {
        println!("case: {c}");
    }
    println!("order edges: {}", tr.digraph.graph().edge_count());
    println!("checked: {} tuples ({} sampled, seed {})", tr.tuples_checked, tr.samples, tr.seed);
}

fn probe(args: ProbeArgs, limits: &Limits) -> Result<u8> {
    let s = Arc::new(load(&args.semigroup)?);
    let report = degree_lower_bound_probe_with(s.clone(), args.max_arity, limits)?;
    println!("universe: {} (order {})", s.name(), s.order());
    for v in &report.verdicts {
        println!(
            "n={}: {} IMT functions, {} not term functions",
            v.arity, v.imt_functions, v.non_term_functions
        );
    }
    match report.degree_at_least {
        Some(n) => println!("degree ≥ {n}"),
        None => println!("no bad arity found up to {}", report.max_arity),
    }
    if let Some(path) = &args.output {
        let mut text = serde_json::to_string_pretty(&report)?;
        text.push('\n');
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(0)
}

fn inspect(args: InspectArgs) -> Result<u8> {
    let is_sgfn = args.file.extension().is_some_and(|e| e == "sgfn");
    if is_sgfn {
        let bytes = fs::read(&args.file).map_err(|e| usage(format!("{}: {e}", args.file.display())))?;
        let data = io::decode_sgfn_raw(&bytes, &Limits::default())?;
        println!("format: sgfn v{}", io::SGFN_VERSION);
        println!("arity: {}", data.arity);
        println!("universe order: {}", data.order);
        println!("cells: {}", data.values.len());
        if let Some(u) = &args.universe {
            let s = load(u)?;
            if s.order() != data.order {
                return Err(Error::UniverseMismatch {
                    expected: s.order(),
                    found: data.order,
                }
                .into());
            }
            println!("universe {}: matches", s.name());
        }
        return Ok(0);
    }
    let s = load(&args.file)?;
    println!("name: {}", s.name());
    println!("order: {}", s.order());
    println!("elements: {}", s.labels().join(" "));
    let label = |e: Option<sgx_core::ElementId>| e.map(|e| s.label(e).to_string()).unwrap_or_else(|| "none".into());
    println!("identity: {}", label(s.identity()));
    println!("zero: {}", label(s.zero()));
    println!("commutative: {}", if s.is_commutative() { "yes" } else { "no" });
    println!("profile: {}", nilpotency_profile(&s));
    Ok(0)
}

fn catalog(action: CatalogAction) -> Result<u8> {
    match action {
        CatalogAction::List { dir } => {
            let cat = Catalog::open(&dir)?;
            for e in cat.entries() {
                println!("{}\t{}\torder {}\t{}\t{}", e.name, e.path, e.order, e.profile, &e.sha256[..12]);
            }
            Ok(0)
        }
        CatalogAction::Verify { dir } => {
            if !dir.join(io::CATALOG_INDEX).exists() {
                bail!(usage(format!("no catalog index in {}", dir.display())));
            }
            let cat = Catalog::open(&dir)?;
            let bad = cat.verify();
            for name in &bad {
                println!("mismatch: {name}");
            }
            println!("{} entries, {} mismatched", cat.entries().len(), bad.len());
            Ok(if bad.is_empty() { 0 } else { 1 })
        }
    }
}
