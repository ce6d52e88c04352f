//! Command-line front end for the localarc library.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use localarc::arcs::{lrc_params, verify_local_arc_oracle, FamilyFile, LocalArcFamily, SetFamily, Verdict};
use localarc::bounds::{bound_row, compare_upper_bounds, TSV_HEADER as BOUND_HEADER};
use localarc::construct::{
    affine_conic_partition, best_construction, case1_lift, case2_lift, case3_lift, check_family, choose_m1_m2,
    generic_k_arc, lift_prime, oval_partition, validate_generic, Case3Params, Check, CheckMode, GenericSeed,
    DEFAULT_SAMPLES,
};
use localarc::gf::prime_power;
use localarc::sdf::{digit_construct, is_sdf_mod, sdf_subset, SdfBasis, SdfMethod};
use localarc::search::{
    default_cap, default_workers, emit_ilp, exact_max, monotonicity_violations, reproduce_table, SearchConfig,
    SearchStatus, Symmetry, TSV_HEADER as TABLE_HEADER,
};

#[derive(Parser)]
#[command(name = "localarc", version, about = "k-uniform local arcs in PG(2,q)")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a family and write it as JSON.
    Construct(ConstructArgs),
    /// Verify a family file, or validate a generic seed file.
    Verify(VerifyArgs),
    /// Upper bounds on the number of sets.
    Bound(BoundArgs),
    /// Exact maximum by backtracking.
    Search(SearchArgs),
    /// Square-difference-free sets.
    Sdf(SdfArgs),
    /// Write the binary program as an LP file.
    IlpExport(IlpArgs),
    /// Code parameters of a 4-uniform family.
    LrcParams(InArgs),
    /// Reproduce the table of small maxima.
    Table(TableArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Oval,
    Generic,
    LiftPrime,
    Case1,
    Case2,
    Case3,
    Best,
}

#[derive(clap::Args)]
struct ConstructArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value = "best")]
    method: MethodArg,
    /// SDF basis: "small", "a205" or "M:a1,a2,...".
    #[arg(long, default_value = "small")]
    basis: String,
    /// Generic seed JSON for lift-prime, family JSON for case1..case3.
    #[arg(long)]
    seed_file: Option<PathBuf>,
    /// M1 for case3 (default from the optimizer).
    #[arg(long)]
    m1: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// full, auto, none or sample:N:SEED.
    #[arg(long, default_value = "auto")]
    verify: String,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// full, auto or sample:N:SEED.
    #[arg(long, default_value = "full")]
    mode: String,
    /// Also run the brute-force oracle (small families).
    #[arg(long)]
    oracle: bool,
}

#[derive(clap::Args)]
struct InArgs {
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(clap::Args)]
struct BoundArgs {
    #[arg(long)]
    k: u64,
    #[arg(long, required_unless_present = "q_max")]
    q: Option<u64>,
    /// Every prime power up to this value.
    #[arg(long)]
    q_max: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SymmetryArg {
    Auto,
    None,
    FixFirstArc,
    FixFrame,
}

#[derive(clap::Args)]
struct SearchArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    k: usize,
    /// Seconds.
    #[arg(long)]
    budget: Option<f64>,
    #[arg(long, env = "LOCALARC_WORKERS")]
    workers: Option<usize>,
    #[arg(long, value_enum, default_value = "auto")]
    symmetry: SymmetryArg,
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long)]
    emit_lp: Option<PathBuf>,
    #[arg(long)]
    certificate: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SdfArgs {
    /// Check this comma-separated residue set modulo --modulus.
    #[arg(long, requires = "modulus")]
    check: Option<String>,
    #[arg(long)]
    modulus: Option<u64>,
    /// Build an SDF subset of {1..N}.
    #[arg(long, conflicts_with = "check")]
    n: Option<u64>,
    #[arg(long, value_enum, default_value = "auto")]
    method: SdfMethodArg,
    /// Digit construction from this basis with --digits digits.
    #[arg(long)]
    basis: Option<String>,
    #[arg(long)]
    digits: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SdfMethodArg {
    Auto,
    Digits,
    Brute,
}

#[derive(clap::Args)]
struct IlpArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long)]
    fix_first: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct TableArgs {
    /// Comma-separated q values.
    #[arg(long, default_value = "2,3,4,5")]
    q: String,
    /// Comma-separated k values; all listed columns when omitted.
    #[arg(long)]
    k: Option<String>,
    /// Seconds per cell.
    #[arg(long)]
    budget: Option<f64>,
    #[arg(long, env = "LOCALARC_WORKERS")]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure that maps to exit status 1.
#[derive(Debug)]
struct Rejected(String);

impl std::fmt::Display for Rejected {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for Rejected {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Construct(a) => construct(a),
        Cmd::Verify(a) => verify(a),
        Cmd::Bound(a) => bound(a),
        Cmd::Search(a) => search(a),
        Cmd::Sdf(a) => sdf(a),
        Cmd::IlpExport(a) => ilp_export(a),
        Cmd::LrcParams(a) => lrc(a),
        Cmd::Table(a) => table(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.downcast_ref::<Rejected>().is_some() => {
            eprintln!("rejected: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<T>().map_err(|e| anyhow::anyhow!("bad list entry {t:?}: {e}")))
        .collect()
}

fn parse_basis(s: &str) -> Result<SdfBasis> {
    match s {
        "small" => Ok(SdfBasis::small()),
        "a205" => Ok(SdfBasis::a205()),
        _ => {
            let (m, a) = s.split_once(':').context("basis must be small, a205 or M:a1,a2,...")?;
            Ok(SdfBasis::new(m.trim().parse()?, parse_list(a)?)?)
        }
    }
}

fn parse_check(s: &str) -> Result<Option<CheckMode>> {
    Ok(match s {
        "full" => Some(CheckMode::Full),
        "auto" => Some(CheckMode::Auto),
        "none" => None,
        _ => {
            let parts: Vec<&str> = s.split(':').collect();
            match parts.as_slice() {
                ["sample", n, seed] => Some(CheckMode::Sample { samples: n.parse()?, seed: seed.parse()? }),
                ["sample", n] => Some(CheckMode::Sample { samples: n.parse()?, seed: 1 }),
                ["sample"] => Some(CheckMode::Sample { samples: DEFAULT_SAMPLES, seed: 1 }),
                _ => bail!("verification mode must be full, auto, none or sample:N:SEED, got {s:?}"),
            }
        }
    })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_family(path: &Path) -> Result<LocalArcFamily> {
    Ok(LocalArcFamily::from_json(&read(path)?)?)
}

fn report_check(check: &Check, plane: &localarc::plane::Plane) -> Result<()> {
    println!("{check}");
    if check.passed() {
        return Ok(());
    }
    let witness = match check {
        Check::Full(Verdict::Reject(v)) => v.describe(plane),
        Check::Sampled(s) => s
            .iter()
            .find_map(|s| s.failure.as_ref().map(|(n, i, j, v)| format!("sample {n}, sets {i} and {j}: {}", v.describe(plane))))
            .unwrap_or_default(),
        Check::Full(Verdict::Accept) => String::new(),
    };
    Err(Rejected(witness).into())
}

fn prime_family_seed(args: &ConstructArgs, p: u64) -> Result<LocalArcFamily> {
    match &args.seed_file {
        Some(path) => load_family(path),
        None => Ok(affine_conic_partition(p, args.k)?),
    }
}

fn construct(args: ConstructArgs) -> Result<()> {
    let (p, m) = prime_power(args.q).with_context(|| format!("{} is not a prime power", args.q))?;
    let check = parse_check(&args.verify)?;
    let family: Box<dyn SetFamily + Send> = match args.method {
        MethodArg::Oval => Box::new(oval_partition(args.q, args.k)?),
        MethodArg::Generic => {
            if m != 1 {
                bail!("generic seeds live over a prime field");
            }
            let seed = generic_k_arc(args.k)?;
            let v = validate_generic(&seed)?;
            eprintln!("generic {}-arc valid modulo every prime >= {}", args.k, v.threshold);
            if (p as u128) < v.threshold as u128 {
                bail!("p = {p} is below the validity threshold {}", v.threshold);
            }
            Box::new(seed.reduce(p)?)
        }
        MethodArg::LiftPrime => {
            if m != 1 {
                bail!("lift-prime needs a prime q");
            }
            let seed: GenericSeed = match &args.seed_file {
                Some(path) => serde_json::from_str(&read(path)?).context("parsing generic seed")?,
                None => generic_k_arc(args.k)?,
            };
            let lifted = lift_prime(&seed, &parse_basis(&args.basis)?, p)?;
            eprintln!("closed form {} sets", lifted.closed_form);
            Box::new(lifted.family)
        }
        MethodArg::Case1 => {
            if m != 2 {
                bail!("case1 needs q = p^2");
            }
            Box::new(case1_lift(&prime_family_seed(&args, p)?)?.family)
        }
        MethodArg::Case2 => {
            if m % 2 != 0 || m < 4 {
                bail!("case2 needs q = p^m with m even and at least 4");
            }
            let base = case1_lift(&prime_family_seed(&args, p)?)?.family.materialize();
            let lifted = case2_lift(&base, m / 2)?;
            eprintln!("closed form {} sets", lifted.closed_form);
            Box::new(lifted.family)
        }
        MethodArg::Case3 => {
            if m < 3 {
                bail!("case3 needs q = p^m with m at least 3");
            }
            let params = match args.m1 {
                Some(m1) => Case3Params::from_m1(p, m1)?,
                None => {
                    let (m1, m2) = choose_m1_m2(m / 2);
                    Case3Params::from_m1_m2(p, m1, m2)?
                }
            };
            let lifted = case3_lift(&prime_family_seed(&args, p)?, m, &params)?;
            eprintln!("closed form {} sets", lifted.closed_form);
            Box::new(lifted.family)
        }
        MethodArg::Best => {
            let best = best_construction(args.q, args.k)?;
            for c in &best.candidates {
                match &c.sets {
                    Ok(n) => eprintln!("{}\t{n}", c.method),
                    Err(e) => eprintln!("{}\t-\t{e}", c.method),
                }
            }
            eprintln!("chosen {}", best.method);
            best.family
        }
    };
    eprintln!("{} sets, {} points", family.num_sets(), family.num_sets() * args.k);
    write_or_print(args.out.as_deref(), &(FamilyFile::from_family(family.as_ref()).to_json() + "\n"))?;
    match check {
        Some(mode) => report_check(&check_family(family.as_ref(), mode), family.plane()),
        None => Ok(()),
    }
}

fn verify(args: VerifyArgs) -> Result<()> {
    let text = read(&args.input)?;
    let json: serde_json::Value = serde_json::from_str(&text).context("parsing JSON")?;
    if json.get("lines").is_some() && json.get("r").is_some() {
        let seed: GenericSeed = serde_json::from_value(json)?;
        let v = validate_generic(&seed)?;
        println!("(a) {}\t(b) {}\t(c) {}\tthreshold {}", v.a, v.b, v.c, v.threshold);
        for n in &v.notes {
            println!("{n}");
        }
        return if v.ok() { Ok(()) } else { Err(Rejected("generic seed fails validation".into()).into()) };
    }
    let fam = LocalArcFamily::from_json(&text)?;
    let mode = parse_check(&args.mode)?.context("--mode none verifies nothing")?;
    let check = check_family(&fam, mode);
    if args.oracle {
        let o = verify_local_arc_oracle(&fam)?;
        println!("oracle: {}", if o.is_accept() { "accept" } else { "reject" });
        if o.is_accept() != check.passed() && check.is_full() {
            bail!("verifier and oracle disagree");
        }
    }
    report_check(&check, fam.plane())
}

fn bound(args: BoundArgs) -> Result<()> {
    println!("{BOUND_HEADER}");
    let rows = match (args.q_max, args.q) {
        (Some(qm), _) => compare_upper_bounds(args.k, qm)?,
        (None, Some(q)) => vec![bound_row(args.k, q)?],
        (None, None) => unreachable!("clap requires one"),
    };
    for r in rows {
        println!("{}", r.tsv());
    }
    Ok(())
}

fn search(args: SearchArgs) -> Result<()> {
    let mut cfg = SearchConfig::new(args.q, args.k).with_workers(args.workers.unwrap_or_else(default_workers));
    cfg.budget = args.budget.map(Duration::from_secs_f64);
    cfg.cap = args.cap;
    cfg.symmetry = match args.symmetry {
        SymmetryArg::Auto => Symmetry::default_for(args.k),
        SymmetryArg::None => Symmetry::None,
        SymmetryArg::FixFirstArc => Symmetry::FixFirstArc,
        SymmetryArg::FixFrame => Symmetry::FixFrame,
    };
    if let Some(path) = &args.emit_lp {
        let cap = match args.cap {
            Some(c) => c,
            None => default_cap(args.q, args.k)?,
        };
        let fix = matches!(cfg.symmetry, Symmetry::FixFirstArc);
        fs::write(path, emit_ilp(args.q, args.k, cap, fix)?.to_lp())?;
    }
    let r = exact_max(&cfg)?;
    let status = match r.status {
        SearchStatus::Optimal => "optimal",
        SearchStatus::Timeout => "lower-bound",
    };
    println!("q={} k={} best={} status={status} cap={} nodes={}", r.q, r.k, r.best, r.cap, r.nodes);
    eprintln!("elapsed {:.3}s", r.elapsed.as_secs_f64());
    if let Some(path) = &args.certificate {
        fs::write(path, r.certificate.to_json() + "\n")?;
    }
    Ok(())
}

fn sdf(args: SdfArgs) -> Result<()> {
    if let Some(list) = &args.check {
        let a: Vec<u64> = parse_list(list)?;
        let n = args.modulus.expect("clap requires modulus");
        let ok = is_sdf_mod(&a, n)?;
        println!("{ok}");
        return if ok { Ok(()) } else { Err(Rejected(format!("not square-difference-free modulo {n}")).into()) };
    }
    if let (Some(b), Some(t)) = (&args.basis, args.digits) {
        let v = digit_construct(&parse_basis(b)?, t)?;
        println!("{}", serde_json::to_string(&v)?);
        return Ok(());
    }
    let n = args.n.context("give --check with --modulus, --n, or --basis with --digits")?;
    let method = match args.method {
        SdfMethodArg::Auto => SdfMethod::Auto,
        SdfMethodArg::Digits => SdfMethod::Digits,
        SdfMethodArg::Brute => SdfMethod::BruteForce,
    };
    let basis = args.basis.as_deref().map(parse_basis).transpose()?;
    let v = sdf_subset(n, method, basis.as_ref())?;
    eprintln!("{} elements", v.len());
    println!("{}", serde_json::to_string(&v)?);
    Ok(())
}

fn ilp_export(args: IlpArgs) -> Result<()> {
    let cap = match args.cap {
        Some(c) => c,
        None => default_cap(args.q, args.k)?,
    };
    let model = emit_ilp(args.q, args.k, cap, args.fix_first)?;
    eprintln!("{} binaries, {} rows", model.num_binaries(), model.rows.len());
    write_or_print(args.out.as_deref(), &model.to_lp())
}

fn lrc(args: InArgs) -> Result<()> {
    let fam = load_family(&args.input)?;
    println!("{}", lrc_params(&fam)?);
    Ok(())
}

fn table(args: TableArgs) -> Result<()> {
    let qs: Vec<u64> = parse_list(&args.q)?;
    let ks: Vec<usize> = args.k.as_deref().map(parse_list).transpose()?.unwrap_or_default();
    let workers = args.workers.unwrap_or_else(default_workers);
    let cells = reproduce_table(&qs, &ks, args.budget.map(Duration::from_secs_f64), workers)?;
    let mut text = format!("{TABLE_HEADER}\n");
    for c in &cells {
        text.push_str(&c.tsv());
        text.push('\n');
    }
    write_or_print(args.out.as_deref(), &text)?;
    let bad = monotonicity_violations(&cells);
    if !bad.is_empty() {
        bail!("monotonicity fails at {bad:?}");
    }
    Ok(())
}
