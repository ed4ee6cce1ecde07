//! `ntru-vfk`: batch experiments for the VFK message-recovery attack.
//!
//! Exit codes: 0 success, 2 parameter error, 3 verification failure.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use ntru_vfk::attack::{AttackInstance, AttackRecord, Scheme};
use ntru_vfk::codec::encode;
use ntru_vfk::cvp::{cvp_vfk, Babai};
use ntru_vfk::registry::{ParamSet, Registry};
use ntru_vfk::ring::Poly;
use ntru_vfk::vfk::{choose_p, max_k, VfkLattice};
use ntru_vfk::{seed, Execution};

use output::{Format, Sink};

/// Default master seed; every random choice descends from it.
const DEFAULT_SEED: u64 = 2024;

const TABLE1_Q: [i64; 11] = [32, 64, 128, 256, 512, 1024, 2048, 4096, 4621, 4591, 5167];

#[derive(Parser)]
#[command(name = "ntru-vfk", version, about = "Message-recovery experiments on NTRU via VFK lattices")]
struct Cli {
    /// Parameter registry (TOML); defaults to the built-in sets.
    #[arg(long, global = true)]
    registry: Option<PathBuf>,

    /// Write results here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Master seed.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Run trials one after another instead of on the thread pool.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximal k and its shift P for the tabulated moduli.
    Table1,
    /// Shortest vector length of a set's attack lattice.
    Lambda1(LatticeArgs),
    /// Generate a key pair and print it as hex-encoded JSON.
    Keygen(SetArg),
    /// Encapsulation/decapsulation round trips.
    KemRoundtrip {
        #[command(flatten)]
        set: SetArg,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Attack one fresh encapsulation with `calls` oracle calls at range R.
    Attack {
        #[command(flatten)]
        set: SetArg,
        #[arg(long = "R", default_value_t = 0)]
        range: i64,
        #[arg(long, default_value_t = 100)]
        calls: usize,
        #[command(flatten)]
        timing: Timing,
    },
    /// Attack every range in [R-min, R-max] and report the largest success.
    Sweep {
        #[command(flatten)]
        set: SetArg,
        #[arg(long = "R-min", default_value_t = 0)]
        r_min: i64,
        #[arg(long = "R-max")]
        r_max: i64,
        #[arg(long, default_value_t = 100)]
        calls: usize,
        #[command(flatten)]
        timing: Timing,
    },
    /// Babai's nearest plane against min-cut CVP on random targets.
    BenchBabai {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[command(flatten)]
        timing: Timing,
    },
}

#[derive(Args)]
struct SetArg {
    /// Registered parameter set name.
    #[arg(long)]
    set: String,
}

/// A lattice named by set, or given directly by `--n --q [--k]`.
#[derive(Args)]
struct LatticeArgs {
    #[arg(long, conflicts_with_all = ["n", "q", "k"])]
    set: Option<String>,
    #[arg(long, requires = "q")]
    n: Option<usize>,
    #[arg(long, requires = "n")]
    q: Option<i64>,
    /// Multiplier; defaults to the largest admissible one.
    #[arg(long, requires = "q")]
    k: Option<i64>,
}

#[derive(Args, Clone, Copy)]
struct Timing {
    /// Report wall_ms as 0 so reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

impl Timing {
    fn ms(self, v: f64) -> f64 {
        if self.no_timing {
            0.0
        } else {
            v
        }
    }
}

enum Failure {
    Param(String),
    Verify(String),
    Io(String),
}

impl From<ntru_vfk::Error> for Failure {
    fn from(e: ntru_vfk::Error) -> Self {
        match e {
            ntru_vfk::Error::Consistency(_) => Failure::Verify(e.to_string()),
            _ => Failure::Param(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

struct Ctx {
    registry: Registry,
    sink: Sink,
    seed: u64,
    exec: Execution,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let registry = match &cli.registry {
        Some(p) => Registry::from_path(p),
        None => Ok(Registry::builtin()),
    };
    let result = registry.map_err(Failure::from).and_then(|registry| {
        let mut ctx = Ctx {
            registry,
            sink: Sink::new(cli.out.clone(), cli.format),
            seed: cli.seed,
            exec: if cli.sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            },
        };
        run(&mut ctx, cli.command)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Param(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Verify(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Io(m)) => {
            eprintln!("i/o error: {m}");
            ExitCode::from(1)
        }
    }
}

fn run(ctx: &mut Ctx, cmd: Command) -> CmdResult {
    match cmd {
        Command::Table1 => table1(ctx),
        Command::Lambda1(l) => lambda1(ctx, &l),
        Command::Keygen(s) => keygen(ctx, &s.set),
        Command::KemRoundtrip { set, trials } => kem_roundtrip(ctx, &set.set, trials),
        Command::Attack {
            set,
            range,
            calls,
            timing,
        } => sweep(ctx, &set.set, range, range, calls, timing),
        Command::Sweep {
            set,
            r_min,
            r_max,
            calls,
            timing,
        } => sweep(ctx, &set.set, r_min, r_max, calls, timing),
        Command::BenchBabai {
            lattice,
            trials,
            timing,
        } => bench_babai(ctx, &lattice, trials, timing),
    }
}

fn lookup<'a>(ctx: &'a Ctx, name: &str) -> Result<&'a ParamSet, Failure> {
    Ok(ctx.registry.get(name)?)
}

fn scheme_of(set: &ParamSet) -> Result<Scheme, Failure> {
    set.scheme()
        .copied()
        .ok_or_else(|| Failure::Param(format!("set `{}` is a bare lattice, not a KEM", set.name())))
}

fn resolve_lattice(ctx: &Ctx, args: &LatticeArgs) -> Result<(String, VfkLattice), Failure> {
    match (&args.set, args.n, args.q) {
        (Some(name), _, _) => {
            let set = lookup(ctx, name)?;
            Ok((name.clone(), *set.lattice()))
        }
        (None, Some(n), Some(q)) => {
            let (k, p) = match args.k {
                Some(k) => (k, choose_p(k, q)),
                None => max_k(q)?,
            };
            Ok((format!("N{n}_q{q}_k{k}"), VfkLattice::build(n, q, k, p)?))
        }
        _ => Err(Failure::Param("give --set or both --n and --q".into())),
    }
}

fn hex_poly(p: &Poly) -> Result<String, Failure> {
    Ok(hex::encode(encode(p)?))
}

#[derive(Serialize)]
struct Table1Row {
    q: i64,
    k: i64,
    #[serde(rename = "P")]
    p: i64,
}

fn table1(ctx: &mut Ctx) -> CmdResult {
    let rows = TABLE1_Q
        .iter()
        .map(|&q| max_k(q).map(|(k, p)| Table1Row { q, k, p }))
        .collect::<Result<Vec<_>, _>>()?;
    ctx.sink.rows(&rows)
}

#[derive(Serialize)]
struct Lambda1Row {
    param_set: String,
    #[serde(rename = "N")]
    n: usize,
    q: i64,
    k: i64,
    #[serde(rename = "P")]
    p: i64,
    lambda1_sq: i64,
    lambda1: f64,
    closed_form: f64,
}

fn lambda1(ctx: &mut Ctx, args: &LatticeArgs) -> CmdResult {
    let (name, lat) = resolve_lattice(ctx, args)?;
    let sq = lat.lambda1_sq(ctx.exec);
    let row = Lambda1Row {
        param_set: name,
        n: lat.n(),
        q: lat.q(),
        k: lat.k(),
        p: lat.shift(),
        lambda1_sq: sq,
        lambda1: (sq as f64).sqrt(),
        closed_form: lat.lambda1_closed_form(),
    };
    ctx.sink.rows(&[row])
}

fn keygen(ctx: &mut Ctx, name: &str) -> CmdResult {
    let set = lookup(ctx, name)?;
    let mut rng = seed::rng(ctx.seed);
    let doc = match scheme_of(set)? {
        Scheme::Hps(p) => {
            let kp = p.keygen(&mut rng)?;
            json!({
                "param_set": name,
                "variant": "hps",
                "seed": ctx.seed,
                "public_key": { "h": hex_poly(kp.public.h())? },
                "secret_key": {
                    "f": hex_poly(kp.secret.f())?,
                    "f3": hex_poly(kp.secret.f3())?,
                    "hq": hex_poly(kp.secret.hq())?,
                    "s": hex::encode(kp.secret.rejection_seed()),
                },
            })
        }
        Scheme::Prime(p) => {
            let kp = p.keygen(&mut rng)?;
            json!({
                "param_set": name,
                "variant": "prime",
                "seed": ctx.seed,
                "public_key": { "h": hex_poly(kp.public.h())? },
                "secret_key": {
                    "f": hex_poly(kp.secret.f())?,
                    "g3": hex_poly(kp.secret.g3())?,
                },
            })
        }
    };
    ctx.sink.json(&doc)
}

#[derive(Serialize)]
struct KemRow {
    param_set: String,
    trial: usize,
    shared_secret: String,
    agree: bool,
}

fn kem_roundtrip(ctx: &mut Ctx, name: &str, trials: usize) -> CmdResult {
    if trials == 0 {
        return Err(Failure::Param("trials must be at least 1".into()));
    }
    let set = lookup(ctx, name)?;
    let scheme = scheme_of(set)?;
    let mut rng = seed::rng(ctx.seed);
    // one key pair, then independent encapsulations
    let rows: Vec<KemRow> = match scheme {
        Scheme::Hps(p) => {
            let kp = p.keygen(&mut rng)?;
            let base = seed::derive(ctx.seed, 1);
            ctx.exec
                .map(trials, |i| -> Result<KemRow, ntru_vfk::Error> {
                    let mut r = seed::rng(seed::derive(base, i as u64));
                    let (c, k) = kp.public.encap(&mut r)?;
                    let k2 = kp.decap(&c)?;
                    Ok(kem_row(name, i, k.as_bytes(), k == k2))
                })
                .into_iter()
                .collect::<Result<_, _>>()?
        }
        Scheme::Prime(p) => {
            let kp = p.keygen(&mut rng)?;
            let base = seed::derive(ctx.seed, 1);
            ctx.exec
                .map(trials, |i| -> Result<KemRow, ntru_vfk::Error> {
                    let mut r = seed::rng(seed::derive(base, i as u64));
                    let e = kp.public.encap_with_witness(&mut r)?;
                    let ok = kp.decap(&e.ciphertext)? == Some(e.shared_secret) && e.m.is_ternary();
                    Ok(kem_row(name, i, e.shared_secret.as_bytes(), ok))
                })
                .into_iter()
                .collect::<Result<_, _>>()?
        }
    };
    let failed = rows.iter().filter(|r| !r.agree).count();
    ctx.sink.rows(&rows)?;
    if failed > 0 {
        return Err(Failure::Verify(format!("{failed} of {trials} round trips disagree")));
    }
    Ok(())
}

fn kem_row(name: &str, trial: usize, key: &[u8], agree: bool) -> KemRow {
    KemRow {
        param_set: name.to_string(),
        trial,
        shared_secret: hex::encode(key),
        agree,
    }
}

#[derive(Serialize)]
struct AttackRow<'a> {
    param_set: &'a str,
    variant: String,
    #[serde(rename = "N")]
    n: usize,
    q: i64,
    k: i64,
    #[serde(rename = "P")]
    p: i64,
    #[serde(rename = "R")]
    range: i64,
    call_index: usize,
    seed: u64,
    success: bool,
    cvp_distance: f64,
    cvp_iterations: usize,
    wall_ms: f64,
}

fn sweep(ctx: &mut Ctx, name: &str, r_min: i64, r_max: i64, calls: usize, timing: Timing) -> CmdResult {
    let start = Instant::now();
    let set = lookup(ctx, name)?;
    let scheme = scheme_of(set)?;
    let lat = *set.lattice();
    let inst = AttackInstance::generate(scheme, lat, seed::derive(ctx.seed, u64::MAX))?;
    let (r0, records): (Option<i64>, Vec<AttackRecord>) = if r_min == r_max {
        let recs = inst.run_attack(r_min, calls, ctx.seed, ctx.exec)?;
        (recs.iter().any(|r| r.success).then_some(r_min), recs)
    } else {
        let s = inst.sweep_r0(r_min, r_max, calls, ctx.seed, ctx.exec)?;
        (s.r0, s.records)
    };
    if let Some(bad) = records
        .iter()
        .find(|r| r.success && r.recovered_m.as_ref() != Some(inst.true_message()))
    {
        return Err(Failure::Verify(format!("call {} reported a wrong message", bad.call_index)));
    }
    let rows: Vec<AttackRow> = records
        .iter()
        .map(|r| AttackRow {
            param_set: name,
            variant: scheme.variant().to_string(),
            n: lat.n(),
            q: lat.q(),
            k: lat.k(),
            p: lat.shift(),
            range: r.range,
            call_index: r.call_index,
            seed: r.seed,
            success: r.success,
            cvp_distance: r.cvp_distance,
            cvp_iterations: r.cvp_iterations,
            wall_ms: timing.ms(r.wall_ms),
        })
        .collect();
    let summary = json!({
        "param_set": name,
        "R0": r0,
        "calls_per_R": calls,
        "total_wall_s": timing.ms(start.elapsed().as_secs_f64()),
    });
    match ctx.sink.format() {
        Format::Csv => {
            ctx.sink.rows(&rows)?;
            eprintln!("{summary}");
            Ok(())
        }
        Format::Json => {
            let mut doc = summary;
            doc["records"] = serde_json::to_value(&rows).map_err(|e| Failure::Io(e.to_string()))?;
            ctx.sink.json(&doc)
        }
    }
}

#[derive(Serialize)]
struct BenchRow {
    instance_id: usize,
    solver: &'static str,
    distance: f64,
    wall_ms: f64,
    iterations: usize,
}

fn bench_babai(ctx: &mut Ctx, args: &LatticeArgs, trials: usize, timing: Timing) -> CmdResult {
    use rand::Rng;
    let (_, lat) = resolve_lattice(ctx, args)?;
    let n = lat.n();
    let babai = Babai::new(lat.basis_rows())?;
    let targets: Vec<Vec<i64>> = (0..trials)
        .map(|i| {
            let mut rng = seed::rng(seed::derive(ctx.seed, i as u64));
            let mut y: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=1)).collect();
            y.extend((0..n).map(|_| rng.gen_range(-1000..=1000)));
            y
        })
        .collect();
    let solved = ctx
        .exec
        .map(trials, |i| -> Result<[BenchRow; 2], ntru_vfk::Error> {
            let y = &targets[i];
            let t0 = Instant::now();
            let (bp, _) = babai.solve(y)?;
            let tb = t0.elapsed().as_secs_f64() * 1e3;
            let t1 = Instant::now();
            let exact = cvp_vfk(&lat, y)?;
            let tm = t1.elapsed().as_secs_f64() * 1e3;
            let bd: i64 = y.iter().zip(&bp).map(|(a, b)| (a - b) * (a - b)).sum();
            Ok([
                BenchRow {
                    instance_id: i,
                    solver: "babai",
                    distance: (bd as f64).sqrt(),
                    wall_ms: timing.ms(tb),
                    iterations: 0,
                },
                BenchRow {
                    instance_id: i,
                    solver: "mincut",
                    distance: exact.distance(),
                    wall_ms: timing.ms(tm),
                    iterations: exact.iterations,
                },
            ])
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let worse = solved.iter().filter(|[b, m]| m.distance > b.distance).count();
    let rows: Vec<BenchRow> = solved.into_iter().flatten().collect();
    ctx.sink.rows(&rows)?;
    if worse > 0 {
        return Err(Failure::Verify(format!("min-cut farther than Babai on {worse} targets")));
    }
    Ok(())
}
