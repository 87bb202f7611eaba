//! Command-line frontend. Every run is determined by its arguments; seeds
//! have fixed defaults and output never depends on the thread count unless
//! `--timing` is given.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{Map, Value};

use crate::arithgeo::{self, RationalPoint, WeierstrassCurve};
use crate::chebotarev::{self, DensityEstimate};
use crate::error::{Error, ErrorKind};
use crate::fqdyn::{self, FqQuadratic};
use crate::numpoly::{BigRat, Fq};
use crate::towerff::{self, Maximality};
use crate::treegrp::{self, TreeAut};
use crate::zdyn::{self, MaximalityStatus, QuadraticMap, WieferichStatus, Witness};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_INTEGRITY: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "arboreal", version, about = "Experiments on iterated quadratic maps and their Galois towers")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Emit::Json)]
    pub emit: Emit,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true, env = "ARBOREAL_THREADS")]
    pub threads: Option<usize>,
    /// Add wall-clock columns (output is then no longer reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Orbit of a point under a map over ℚ.
    Orbit {
        #[arg(long, default_value = "1,0,3")]
        map: QuadraticMap,
        /// Starting point; the critical point when omitted.
        #[arg(long)]
        start: Option<BigRat>,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Square class of Disc φⁿ.
    Disc {
        #[arg(long, default_value = "1,0,3")]
        map: QuadraticMap,
        #[arg(long, default_value_t = 10)]
        depth: usize,
    },
    /// Maximality certificates for the levels of the arboreal tower.
    Maximality {
        #[arg(long, default_value = "1,0,3")]
        map: QuadraticMap,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Primitive prime divisors with odd valuation along an orbit.
    Wieferich {
        #[arg(long, default_value = "1,0,3")]
        map: QuadraticMap,
        #[arg(long, default_value = "2")]
        start: BigRat,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Fraction of primes dividing some term of an orbit.
    DivisorDensity {
        #[arg(long, default_value = "1,0,3")]
        map: QuadraticMap,
        #[arg(long, default_value = "2")]
        start: BigInt,
        #[arg(long, default_value_t = 1_000_000)]
        bound: u64,
    },
    /// Fraction of primes at which φⁿ has a root.
    RootDensity {
        #[arg(long, default_value = "1,0,3")]
        map: QuadraticMap,
        #[arg(long, default_value_t = 1)]
        level: usize,
        #[arg(long, default_value_t = 1_000_000)]
        bound: u64,
    },
    /// Fraction of primes at which a point is periodic.
    Periodicity {
        #[arg(long, default_value = "1,0,1")]
        map: QuadraticMap,
        #[arg(long, default_value = "0")]
        alpha: BigInt,
        #[arg(long, default_value_t = 1_000_000)]
        bound: u64,
    },
    /// Truncated density of periodic points over F_p-bar.
    PerDensity {
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value = "1,0,1")]
        map: QuadraticMap,
        #[arg(long, default_value_t = 8)]
        max_degree: u32,
    },
    /// Stable factors of iterates over F_p.
    Settled {
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value = "1,0,1")]
        map: QuadraticMap,
        #[arg(long, default_value_t = 10)]
        depth: usize,
    },
    /// How factors of fⁿ behave under one more composition.
    Markov {
        #[arg(long, default_value_t = 5)]
        p: u64,
        #[arg(long, default_value = "1,0,2")]
        map: QuadraticMap,
        #[arg(long, default_value_t = 10)]
        depth: usize,
    },
    /// Mandelbrot approximants Iₙ over F_p-bar, n = 0..=level.
    Mandelbrot {
        #[arg(long, default_value_t = 5)]
        p: u64,
        #[arg(long, default_value_t = 6)]
        level: usize,
        #[arg(long, default_value_t = 3)]
        max_degree: u32,
    },
    /// Primitive parts of the F_p(t) tower for x² + t.
    TowerPhi {
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 12)]
        depth: usize,
    },
    /// Fixed-leaf martingale of Haar-random tree automorphisms.
    TreeSim {
        #[arg(long, default_value_t = 16)]
        depth: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Orders and Hausdorff profile of a subgroup of Aut(T).
    Hausdorff {
        /// "adding-machine", "full", "haar:SEED" or a portrait bit string.
        #[arg(long = "gen", default_value = "adding-machine")]
        generators: Vec<String>,
        #[arg(long, default_value_t = 5)]
        depth: usize,
    },
    /// Fraction of primes at which a rational point has odd order.
    EcOddOrder {
        #[arg(long, default_value = "0,0,1,-1,0")]
        curve: WeierstrassCurve,
        #[arg(long, default_value = "0,0")]
        point: String,
        #[arg(long, default_value_t = 1_000_000)]
        bound: u64,
    },
    /// Monte Carlo for the ℓ-adic Haar integral.
    LadicIntegral {
        #[arg(long, default_value_t = 2)]
        ell: u64,
        #[arg(long, default_value_t = 12)]
        depth: u32,
        #[arg(long, default_value_t = 2_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Exact value of the ℓ-adic integral.
    ClosedForm {
        #[arg(long, default_value_t = 2)]
        ell: u64,
    },
}

type Record = Map<String, Value>;

macro_rules! record {
    ($($k:expr => $v:expr),* $(,)?) => {{
        let mut r = Record::new();
        $( r.insert($k.to_string(), Value::from($v)); )*
        r
    }};
}

fn rat(x: &BigRat) -> String {
    x.to_string()
}

/// Descending terms in t with unit coefficients elided.
pub fn format_poly(coeffs: &[u64], var: &str) -> String {
    let mut terms = Vec::new();
    for (k, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        terms.push(match (c, k) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}*{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

fn density_records(estimates: &[DensityEstimate]) -> Vec<Record> {
    estimates
        .iter()
        .map(|e| {
            record! {
                "bound" => e.bound, "hits" => e.hits, "total" => e.total, "excluded" => e.excluded,
                "value" => e.value(), "stderr" => e.stderr(),
            }
        })
        .collect()
}

fn fq_map(p: u64, map: &QuadraticMap) -> crate::Result<FqQuadratic> {
    let field = Fq::prime(p)?;
    let (a, b, c) = map.reduce(p);
    FqQuadratic::new(field, a, b, c)
}

fn parse_generator(spec: &str, depth: usize) -> crate::Result<Vec<TreeAut>> {
    if spec == "adding-machine" {
        return Ok(vec![treegrp::adding_machine(depth)]);
    }
    if spec == "full" {
        return Ok(treegrp::full_generators(depth));
    }
    if let Some(seed) = spec.strip_prefix("haar:") {
        let seed = seed.parse().map_err(|_| Error::precondition(format!("bad seed in {spec:?}")))?;
        return Ok(vec![treegrp::haar_sample(depth, seed)]);
    }
    let bits: Vec<bool> = spec
        .chars()
        .map(|ch| match ch {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::precondition(format!("unknown generator {spec:?}"))),
        })
        .collect::<crate::Result<_>>()?;
    let given = (bits.len() + 1).trailing_zeros() as usize;
    let aut = TreeAut::from_bits(given, bits)?;
    if given < depth {
        return Err(Error::DepthMismatch { left: given, right: depth });
    }
    Ok(vec![aut.truncate(depth)])
}

fn execute(command: &Command, timing: bool) -> crate::Result<Vec<Record>> {
    Ok(match command {
        Command::Orbit { map, start, depth } => {
            let x = start.clone().unwrap_or_else(|| map.critical_point());
            map.orbit(&x, *depth)
                .iter()
                .enumerate()
                .map(|(n, v)| record! { "n" => n, "value" => rat(v) })
                .collect()
        }
        Command::Disc { map, depth } => (1..=*depth)
            .map(|n| {
                let class = zdyn::disc_square_class(map, n)?;
                Ok(record! { "n" => n, "square_class" => format!("{class:?}") })
            })
            .collect::<crate::Result<_>>()?,
        Command::Maximality { map, depth } => zdyn::maximality_profile(map, *depth)?
            .iter()
            .map(|r| {
                let witness = match r.witness {
                    Witness::Prime(p) => Value::from(p),
                    Witness::NonSquareCofactor => Value::from("nonconstructive"),
                    Witness::None => Value::Null,
                };
                let status = match r.status {
                    MaximalityStatus::CertifiedMaximal => "CertifiedMaximal",
                    MaximalityStatus::NoCertificate => "NoCertificate",
                };
                record! { "n" => r.n, "status" => status, "witness" => witness, "cofactor_digits" => r.cofactor_digits() }
            })
            .collect(),
        Command::Wieferich { map, start, depth } => zdyn::wieferich_scan(map, start, *depth)?
            .iter()
            .map(|l| {
                let (status, prime) = match l.status {
                    WieferichStatus::Exists(p) => ("Exists", Value::from(p)),
                    WieferichStatus::ExistsNonconstructive => ("ExistsNonconstructive", Value::Null),
                    WieferichStatus::NotFound => ("NotFound", Value::Null),
                };
                record! { "n" => l.n, "status" => status, "prime" => prime, "cofactor_digits" => l.cofactor.to_string().trim_start_matches('-').len() }
            })
            .collect(),
        Command::DivisorDensity { map, start, bound } => density_records(&chebotarev::divisor_density_checkpoints(
            map,
            start,
            &chebotarev::decade_checkpoints(*bound),
        )),
        Command::RootDensity { map, level, bound } => {
            if *level == 0 {
                return Err(Error::precondition("level must be at least 1"));
            }
            density_records(&chebotarev::root_proportion_checkpoints(map, *level, &chebotarev::decade_checkpoints(*bound)))
        }
        Command::Periodicity { map, alpha, bound } => density_records(&chebotarev::periodicity_density_checkpoints(
            map,
            alpha,
            &chebotarev::decade_checkpoints(*bound),
        )),
        Command::PerDensity { p, map, max_degree } => {
            let f = fq_map(*p, map)?;
            fqdyn::per_density_profile(&f, *max_degree)?
                .iter()
                .map(|l| {
                    record! {
                        "p" => *p, "d" => l.d, "count" => l.count, "periodic" => l.members,
                        "layer_fraction" => l.layer_fraction, "cumulative_density" => l.cumulative_density,
                        "degenerate" => f.is_degenerate(),
                    }
                })
                .collect()
        }
        Command::Settled { p, map, depth } => fqdyn::settled_report(&fq_map(*p, map)?, *depth)?
            .iter()
            .map(|r| {
                let degrees: Vec<String> = r.factor_degrees.iter().map(usize::to_string).collect();
                record! {
                    "n" => r.n, "factor_degrees" => degrees.join(" "), "certified_degree" => r.certified_degree,
                    "heuristic_degree" => r.heuristic_degree, "stable_degree" => r.stable_degree,
                    "ratio" => r.ratio, "certified_ratio" => r.certified_ratio,
                }
            })
            .collect(),
        Command::Markov { p, map, depth } => fqdyn::markov_transition_estimate(&fq_map(*p, map)?, *depth)?
            .iter()
            .map(|r| {
                record! { "n" => r.n, "degree" => r.degree, "inert" => r.inert, "split" => r.split, "ramified" => r.ramified }
            })
            .collect(),
        Command::Mandelbrot { p, level, max_degree } => {
            let mut out = Vec::new();
            for n in 0..=*level {
                for l in fqdyn::mandelbrot_in(*p, n, *max_degree)? {
                    out.push(record! {
                        "p" => *p, "n" => n, "d" => l.d, "count" => l.layer.count, "members" => l.layer.members,
                        "layer_fraction" => l.layer.layer_fraction, "cumulative_density" => l.layer.cumulative_density,
                    });
                }
            }
            out
        }
        Command::TowerPhi { p, depth } => towerff::maximality_squarefree_report(*p, *depth)?
            .iter()
            .map(|l| {
                let deg = l.phi_degree();
                let (square_test, maximal) = match l.maximal {
                    Maximality::NonSquareCertified => ("parity", "NonSquareCertified"),
                    Maximality::CertifiedMaximal => ("non-square", "CertifiedMaximal"),
                    Maximality::NotMaximal => ("square", "NotMaximal"),
                    Maximality::Unknown => ("skipped", "Unknown"),
                };
                let mut r = record! {
                    "n" => l.n, "mu" => l.mu, "deg_cn" => l.cn.degree().unwrap(), "deg_phi" => deg,
                    "parity_certificate" => deg % 2 == 1, "square_test" => square_test, "maximal" => maximal,
                    "phi" => if deg <= 64 { format_poly(l.phi.coeffs(), "t") } else { String::new() },
                };
                if timing {
                    r.insert("elapsed_ms".into(), Value::from(l.elapsed_ms));
                }
                r
            })
            .collect(),
        Command::TreeSim { depth, trials, seed } => {
            let report = treegrp::martingale_sim(*depth, *trials, *seed)?;
            report
                .levels
                .iter()
                .map(|l| {
                    record! {
                        "n" => l.n, "mean" => l.mean, "stderr" => l.stderr, "positive" => l.positive,
                        "positive_exact" => treegrp::fix_proportion(l.n), "constant_from_here" => l.constant_from_here,
                    }
                })
                .collect()
        }
        Command::Hausdorff { generators, depth } => {
            let gens: Vec<TreeAut> = generators
                .iter()
                .map(|g| parse_generator(g, *depth))
                .collect::<crate::Result<Vec<_>>>()?
                .into_iter()
                .flatten()
                .collect();
            let est = treegrp::hausdorff_profile(&gens, *depth)?;
            est.log2_orders
                .iter()
                .zip(&est.dim_profile)
                .enumerate()
                .map(|(i, (e, d))| {
                    record! { "n" => i + 1, "log2_order" => *e, "dimension" => *d, "complete" => est.complete }
                })
                .collect()
        }
        Command::EcOddOrder { curve, point, bound } => {
            let alpha = RationalPoint::parse(point)?;
            let target = arithgeo::closed_form_density(2);
            let estimates =
                arithgeo::odd_order_density_checkpoints(curve, &alpha, &chebotarev::decade_checkpoints(*bound))?;
            density_records(&estimates)
                .into_iter()
                .map(|mut r| {
                    r.insert("target".into(), Value::from(target.to_string()));
                    r.insert("target_value".into(), Value::from(target.to_f64().unwrap()));
                    r
                })
                .collect()
        }
        Command::LadicIntegral { ell, depth, samples, seed } => {
            let est = arithgeo::kummer_integral_mc(*ell, *depth, *samples, *seed)?;
            let exact = arithgeo::closed_form_density(*ell);
            vec![record! {
                "ell" => *ell, "depth" => *depth, "samples" => *samples, "seed" => *seed,
                "estimate" => est.estimate, "stderr" => est.stderr, "truncated" => est.truncated,
                "closed_form" => exact.to_string(), "closed_form_value" => exact.to_f64().unwrap(),
            }]
        }
        Command::ClosedForm { ell } => {
            if !crate::numpoly::arith::is_prime_u64(*ell) {
                return Err(Error::precondition(format!("{ell} is not prime")));
            }
            let v = arithgeo::closed_form_density(*ell);
            vec![record! { "ell" => *ell, "density" => v.to_string(), "value" => v.to_f64().unwrap() }]
        }
    })
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// CSV with a header row, or a JSON array of flat records.
pub fn render(records: &[Record], emit: Emit) -> io::Result<Vec<u8>> {
    match emit {
        Emit::Json => {
            let mut out = serde_json::to_vec_pretty(records)?;
            out.push(b'\n');
            Ok(out)
        }
        Emit::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            if let Some(first) = records.first() {
                w.write_record(first.keys())?;
            }
            for r in records {
                w.write_record(r.values().map(csv_cell))?;
            }
            w.into_inner().map_err(|e| e.into_error())
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e.kind() {
        ErrorKind::Precondition => EXIT_PRECONDITION,
        ErrorKind::Budget => EXIT_BUDGET,
        ErrorKind::Integrity => EXIT_INTEGRITY,
    }
}

/// Parse, run and emit; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    run(&cli)
}

pub fn run(cli: &Cli) -> i32 {
    if let Some(n) = cli.global.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return EXIT_USAGE;
        }
        // a pool already built by an earlier run in this process is kept
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let start = Instant::now();
    let records = match execute(&cli.command, cli.global.timing) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    if cli.global.timing {
        eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    }
    let bytes = match render(&records, cli.global.emit) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let written = match &cli.global.output {
        Some(path) => File::create(path).and_then(|mut f| f.write_all(&bytes)),
        None => io::stdout().lock().write_all(&bytes),
    };
    match written {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
