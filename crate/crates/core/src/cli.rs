//! Command-line front end: parses lattice / character / code specifications,
//! dispatches to the library, and emits machine-readable reports.
//!
//! Output is JSON by default (schema version "1", complex numbers as
//! `[re, im]` arrays) or CSV with `--format csv`. Exit codes: 0 all checks
//! pass, 1 verification failure, 2 malformed input.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_traits::Zero;
use serde_json::{json, Map, Value};
use std::str::FromStr;
use std::time::Instant;

use crate::characters::{DirichletCharacter, DirichletCharacterFamily};
use crate::codes::{
    code_from_generators, dual_code, hamming_we, parity_check_code, LinearCode,
};
use crate::exact::{rat_i64, Rat};
use crate::heat::{
    code_heat_solution, eta_heat_limit, eta_heat_probe, heat_kernel_index,
    heat_solve_convolution, heat_solve_ode_oracle, kernel_window, InitialData,
};
use crate::lattice::Lattice;
use crate::lattice_sums::{discrete_torus_trace, verify_identity};
use crate::report::complex_json;
use crate::theta::{
    continuum_limit_probe, dedekind_eta, jacobi_theta_identity_check, sqrt_principal,
    theta_char_sides, ContinuumLimitSchedule,
};
use crate::{Error, Result};

#[derive(Parser)]
#[command(
    name = "besselsum",
    about = "Verification-grade Bessel lattice-sum identities",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Omit command echo and wall-clock metadata (for byte-stable output).
    #[arg(long, global = true)]
    no_meta: bool,
    /// Worker threads (falls back to BESSELSUM_THREADS; evaluation is
    /// deterministic regardless).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the character-twisted Bessel lattice-sum identity.
    VerifyIdentity(IdentityArgs),
    /// Verify the continuum-limit theta identity with characters.
    ThetaCheck(IdentityArgs),
    /// Dedekind eta: two routes plus the functional equation.
    EtaCheck {
        /// tau as "re+imi", e.g. "0.3+1.7i".
        #[arg(long)]
        tau: String,
    },
    /// Rescaled Bessel identity along an increasing list of scales L.
    ContinuumLimit {
        #[arg(long = "L", value_delimiter = ',', required = true)]
        l_values: Vec<u64>,
        #[command(flatten)]
        identity: IdentityArgs,
    },
    /// Jacobi theta-2 / theta-4 inversion identity.
    ThetaIdentity {
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<f64>,
    },
    /// Complete weight enumerator and its Bessel-sum identity.
    CodeCwe(CodeArgs),
    /// MacWilliams-type identity between a code and its dual.
    CodeMacwilliams(CodeArgs),
    /// Heat kernel values and mass check on a window.
    HeatKernel {
        #[arg(long, default_value = "1")]
        lattice: String,
        #[arg(long)]
        t: f64,
    },
    /// Solve the heat equation by kernel convolution.
    HeatSolve {
        #[arg(long, default_value = "1")]
        lattice: String,
        #[arg(long)]
        t: f64,
        /// Initial data: "delta", "ones", or "coset:<code spec>".
        #[arg(long, default_value = "delta")]
        u0: String,
        #[arg(long, default_value_t = 3)]
        radius: i64,
        /// Also run the Runge-Kutta oracle and report the max deviation.
        #[arg(long)]
        oracle: bool,
    },
    /// Eta heat probe along a list of scales L coprime to 12.
    EtaProbe {
        #[arg(long = "L", value_delimiter = ',', required = true)]
        l_values: Vec<u64>,
        #[arg(long)]
        t: f64,
    },
    /// Run the cross-module verification suite.
    Suite {
        /// Reduced matrix (the full matrix lives in the acceptance tests).
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Args)]
struct IdentityArgs {
    /// Basis rows "2,1;0,3"; a bare integer means a 1-D lattice.
    #[arg(long)]
    lattice: String,
    /// Character spec per coordinate ("trivial", "principal:q",
    /// "kronecker:q"); one spec applies to all coordinates.
    #[arg(long, default_value = "trivial")]
    chi: String,
    #[arg(long, value_delimiter = ',', required = true)]
    x: Vec<i64>,
    /// Rational offsets "1/2,0".
    #[arg(long, value_delimiter = ',')]
    y: Option<Vec<String>>,
    /// Complex components "0.5", "1+0.5i".
    #[arg(long, value_delimiter = ',', required = true)]
    t: Vec<String>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    allow_imprimitive: bool,
}

#[derive(Args)]
struct CodeArgs {
    #[arg(long)]
    m: u64,
    #[arg(long)]
    n: usize,
    /// Generators "111;101" (one digit per coordinate; use "." to separate
    /// multi-digit entries).
    #[arg(long)]
    generators: Option<String>,
    /// Parity-check rows in the same format.
    #[arg(long)]
    parity_check: Option<String>,
    #[arg(long, value_delimiter = ',')]
    x: Option<Vec<i64>>,
    #[arg(long, default_value = "0.7")]
    t: String,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

/// Basis rows separated by ';', entries by ','.
pub fn parse_lattice(spec: &str) -> Result<Lattice> {
    let rows: Vec<Vec<i64>> = spec
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|v| {
                    v.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad matrix entry {v:?} in {spec:?}")))
                })
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<Vec<Vec<i64>>>>()?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse(format!("matrix {spec:?} is not square")));
    }
    Lattice::from_i64(&rows)
}

/// "trivial", "principal:q", or "kronecker:q".
pub fn parse_character(spec: &str) -> Result<DirichletCharacter> {
    match spec.split_once(':') {
        None if spec == "trivial" => Ok(DirichletCharacter::trivial()),
        Some(("principal", q)) => {
            let q: u64 = q
                .parse()
                .map_err(|_| Error::Parse(format!("bad modulus in {spec:?}")))?;
            Ok(DirichletCharacter::principal(q))
        }
        Some(("kronecker", d)) => {
            let d: i64 = d
                .parse()
                .map_err(|_| Error::Parse(format!("bad discriminant in {spec:?}")))?;
            DirichletCharacter::kronecker(d)
        }
        _ => Err(Error::Parse(format!("unknown character spec {spec:?}"))),
    }
}

/// "m=2,n=3,gen=111" or "m=2,n=3,parity=111"; vectors separated by ';',
/// entries single digits or '.'-separated.
pub fn parse_code(spec: &str) -> Result<LinearCode> {
    let mut m: Option<u64> = None;
    let mut n: Option<usize> = None;
    let mut gens: Option<String> = None;
    let mut parity: Option<String> = None;
    for field in spec.split(',') {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad code field {field:?} in {spec:?}")))?;
        match key.trim() {
            "m" => m = Some(value.parse().map_err(|_| Error::Parse(format!("bad m {value:?}")))?),
            "n" => n = Some(value.parse().map_err(|_| Error::Parse(format!("bad n {value:?}")))?),
            "gen" => gens = Some(value.to_string()),
            "parity" => parity = Some(value.to_string()),
            other => return Err(Error::Parse(format!("unknown code field {other:?}"))),
        }
    }
    let m = m.ok_or_else(|| Error::Parse(format!("code spec {spec:?} missing m=")))?;
    let n = n.ok_or_else(|| Error::Parse(format!("code spec {spec:?} missing n=")))?;
    match (gens, parity) {
        (Some(g), None) => code_from_generators(m, n, &parse_vectors(&g, n, m)?),
        (None, Some(p)) => {
            let rows: Vec<Vec<i64>> = parse_vectors(&p, n, m)?
                .into_iter()
                .map(|r| r.into_iter().map(|v| v as i64).collect())
                .collect();
            parity_check_code(m, n, &rows)
        }
        (None, None) => code_from_generators(m, n, &[]),
        (Some(_), Some(_)) => Err(Error::Parse(
            "code spec cannot have both gen= and parity=".into(),
        )),
    }
}

fn parse_vectors(spec: &str, n: usize, m: u64) -> Result<Vec<Vec<u64>>> {
    spec.split(';')
        .filter(|v| !v.is_empty())
        .map(|v| {
            let entries: Vec<u64> = if v.contains('.') {
                v.split('.')
                    .map(|d| {
                        d.parse::<u64>()
                            .map_err(|_| Error::Parse(format!("bad code entry {d:?}")))
                    })
                    .collect::<Result<Vec<u64>>>()?
            } else {
                v.chars()
                    .map(|c| {
                        c.to_digit(10)
                            .map(u64::from)
                            .ok_or_else(|| Error::Parse(format!("bad code digit {c:?}")))
                    })
                    .collect::<Result<Vec<u64>>>()?
            };
            if entries.len() != n {
                return Err(Error::Parse(format!(
                    "vector {v:?} has {} entries, expected {n}",
                    entries.len()
                )));
            }
            if entries.iter().any(|&e| e >= m) {
                return Err(Error::Parse(format!("vector {v:?} has entries >= {m}")));
            }
            Ok(entries)
        })
        .collect()
}

/// "p/q", integer, or decimal with an exactly representable denominator
/// (power of ten).
pub fn parse_rat(spec: &str) -> Result<Rat> {
    let s = spec.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational {spec:?}")))?;
        let den: i64 = den
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational {spec:?}")))?;
        if den == 0 {
            return Err(Error::Parse(format!("zero denominator in {spec:?}")));
        }
        return Ok(rat_i64(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let sign = if int.starts_with('-') { -1 } else { 1 };
        let int: i64 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse()
                .map_err(|_| Error::Parse(format!("bad decimal {spec:?}")))?
        };
        let scale = 10i64
            .checked_pow(frac.len() as u32)
            .ok_or_else(|| Error::Parse(format!("decimal {spec:?} too long")))?;
        let frac: i64 = frac
            .parse()
            .map_err(|_| Error::Parse(format!("bad decimal {spec:?}")))?;
        return Ok(rat_i64(int * scale + sign * frac, scale));
    }
    let v: i64 = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {spec:?}")))?;
    Ok(rat_i64(v, 1))
}

/// "1.5", "1+0.5i", "-2i", "i".
pub fn parse_complex(spec: &str) -> Result<Complex64> {
    let s: String = spec.trim().chars().filter(|c| !c.is_whitespace()).collect();
    if let Ok(re) = f64::from_str(&s) {
        return Ok(Complex64::new(re, 0.0));
    }
    if let Some(body) = s.strip_suffix('i') {
        // split off the trailing imaginary part at the last +/- that is not
        // an exponent sign
        let split = body
            .char_indices()
            .rev()
            .find(|&(i, c)| {
                (c == '+' || c == '-')
                    && i > 0
                    && !matches!(body.as_bytes()[i - 1], b'e' | b'E')
            })
            .map(|(i, _)| i);
        let (re_str, im_str) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("", body),
        };
        let re = if re_str.is_empty() {
            0.0
        } else {
            f64::from_str(re_str)
                .map_err(|_| Error::Parse(format!("bad complex number {spec:?}")))?
        };
        let im = match im_str {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => f64::from_str(other)
                .map_err(|_| Error::Parse(format!("bad complex number {spec:?}")))?,
        };
        return Ok(Complex64::new(re, im));
    }
    Err(Error::Parse(format!("bad complex number {spec:?}")))
}

/// One verification item in a run report.
struct Item {
    name: String,
    fields: Map<String, Value>,
    pass: bool,
    wall_ms: f64,
}

impl Item {
    fn new(name: &str, pass: bool) -> Self {
        Item {
            name: name.to_string(),
            fields: Map::new(),
            pass,
            wall_ms: 0.0,
        }
    }

    fn field(mut self, key: &str, value: Value) -> Self {
        self.fields.insert(key.to_string(), value);
        self
    }

    fn from_report(name: &str, rep: &crate::report::IdentityReport, tol: f64) -> Self {
        Item::new(name, rep.passes(tol))
            .field("lhs", json!(rep.lhs))
            .field("rhs", json!(rep.rhs))
            .field("abs_residual", json!(rep.abs_residual))
            .field("tolerance", json!(tol))
            .field("tail_bound", json!(rep.lhs_tail_bound))
            .field("truncation_radius", json!(rep.lhs_truncation_radius))
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            // clap handles --help/--version with a success exit
            if err.use_stderr() {
                eprintln!("{err}");
                return 2;
            }
            print!("{err}");
            return 0;
        }
    };
    let _threads = cli
        .threads
        .or_else(|| {
            std::env::var("BESSELSUM_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(1);
    let started = Instant::now();
    let items = match dispatch(&cli.command) {
        Ok(items) => items,
        Err(Error::Parse(msg)) => {
            eprintln!("error: {msg}");
            return 2;
        }
        Err(err) => {
            eprintln!("error: {err}");
            return 1;
        }
    };
    let all_pass = items.iter().all(|i| i.pass);
    emit(&cli, &items, all_pass, started.elapsed().as_secs_f64() * 1e3);
    if all_pass {
        0
    } else {
        1
    }
}

fn emit(cli: &Cli, items: &[Item], all_pass: bool, wall_ms: f64) {
    match cli.format {
        Format::Json => {
            let mut root = Map::new();
            root.insert("schema".into(), json!("1"));
            if !cli.no_meta {
                root.insert(
                    "command".into(),
                    json!(std::env::args().skip(1).collect::<Vec<_>>()),
                );
                root.insert("wall_ms".into(), json!(wall_ms));
            }
            let items_json: Vec<Value> = items
                .iter()
                .map(|i| {
                    let mut o = Map::new();
                    o.insert("name".into(), json!(i.name));
                    for (k, v) in &i.fields {
                        o.insert(k.clone(), v.clone());
                    }
                    o.insert("pass".into(), json!(i.pass));
                    if !cli.no_meta {
                        o.insert("wall_ms".into(), json!(i.wall_ms));
                    }
                    Value::Object(o)
                })
                .collect();
            root.insert("items".into(), Value::Array(items_json));
            root.insert(
                "verdict".into(),
                json!(if all_pass { "pass" } else { "fail" }),
            );
            println!("{}", serde_json::to_string_pretty(&Value::Object(root)).unwrap());
        }
        Format::Csv => {
            println!("name,abs_residual,tolerance,tail_bound,pass");
            for i in items {
                let get = |k: &str| {
                    i.fields
                        .get(k)
                        .and_then(Value::as_f64)
                        .map(|v| v.to_string())
                        .unwrap_or_default()
                };
                println!(
                    "{},{},{},{},{}",
                    i.name,
                    get("abs_residual"),
                    get("tolerance"),
                    get("tail_bound"),
                    i.pass
                );
            }
        }
    }
}

fn family_for(lat: &Lattice, spec: &str) -> Result<DirichletCharacterFamily> {
    let chi = parse_character(spec)?;
    DirichletCharacterFamily::new(vec![chi; lat.dimension()])
}

type IdentityInputs = (Lattice, DirichletCharacterFamily, Vec<i64>, Vec<Rat>, Vec<Complex64>);

fn identity_inputs(args: &IdentityArgs) -> Result<IdentityInputs> {
    let lat = parse_lattice(&args.lattice)?;
    let n = lat.dimension();
    let fam = family_for(&lat, &args.chi)?;
    if args.x.len() != n {
        return Err(Error::Parse(format!("--x needs {n} components")));
    }
    let y: Vec<Rat> = match &args.y {
        None => vec![Rat::zero(); n],
        Some(specs) => {
            if specs.len() != n {
                return Err(Error::Parse(format!("--y needs {n} components")));
            }
            specs.iter().map(|s| parse_rat(s)).collect::<Result<_>>()?
        }
    };
    let t: Vec<Complex64> = args.t.iter().map(|s| parse_complex(s)).collect::<Result<_>>()?;
    if t.len() != n {
        return Err(Error::Parse(format!("--t needs {n} components")));
    }
    Ok((lat, fam, args.x.clone(), y, t))
}

fn timed(mut item: Item, start: Instant) -> Item {
    item.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    item
}

fn dispatch(command: &Command) -> Result<Vec<Item>> {
    match command {
        Command::VerifyIdentity(args) => {
            let start = Instant::now();
            let (lat, fam, x, y, t) = identity_inputs(args)?;
            let rep = verify_identity(&lat, &fam, &x, &y, &t, args.tol, args.allow_imprimitive)?;
            let mut item = Item::from_report("verify-identity", &rep, args.tol);
            if let Some(w) = &rep.warning {
                item = item.field("warning", json!(w));
            }
            Ok(vec![timed(item, start)])
        }
        Command::ThetaCheck(args) => {
            let start = Instant::now();
            let (lat, fam, x, y, t) = identity_inputs(args)?;
            let t: Vec<f64> = t
                .iter()
                .map(|z| {
                    if z.im != 0.0 || z.re <= 0.0 {
                        Err(Error::Parse("theta-check needs real positive t".into()))
                    } else {
                        Ok(z.re)
                    }
                })
                .collect::<Result<_>>()?;
            let rep = theta_char_sides(&lat, &fam, &x, &y, &t)?;
            Ok(vec![timed(Item::from_report("theta-check", &rep, args.tol), start)])
        }
        Command::EtaCheck { tau } => {
            let start = Instant::now();
            let tau = parse_complex(tau)?;
            if tau.im <= 0.0 {
                return Err(Error::Parse("tau must have positive imaginary part".into()));
            }
            let (a, b) = dedekind_eta(tau);
            let route_gap = (a.complex() - b.complex()).norm();
            let (inv_a, _) = dedekind_eta(-1.0 / tau);
            let inversion =
                (sqrt_principal(Complex64::new(0.0, 1.0) / tau) * inv_a.complex() - a.complex())
                    .norm();
            let tol = 1e-12;
            let item = Item::new("eta-check", route_gap < tol && inversion < tol)
                .field("eta_series", json!(complex_json(a.complex())))
                .field("eta_product", json!(complex_json(b.complex())))
                .field("route_gap", json!(route_gap))
                .field("inversion_residual", json!(inversion))
                .field("tolerance", json!(tol))
                .field("tail_bound", json!(a.tail_bound.max(b.tail_bound)));
            Ok(vec![timed(item, start)])
        }
        Command::ContinuumLimit { l_values, identity } => {
            let start = Instant::now();
            let (lat, fam, x, y, t) = identity_inputs(identity)?;
            let t: Vec<f64> = t
                .iter()
                .map(|z| {
                    if z.im != 0.0 || z.re <= 0.0 {
                        Err(Error::Parse("continuum-limit needs real positive t".into()))
                    } else {
                        Ok(z.re)
                    }
                })
                .collect::<Result<_>>()?;
            let schedule = ContinuumLimitSchedule {
                l_values: l_values.clone(),
                lattice: lat,
                family: fam,
                x,
                y,
                t,
            };
            let rows = continuum_limit_probe(&schedule)?;
            let decreasing = rows
                .windows(2)
                .all(|w| w[1].limit_residual < w[0].limit_residual);
            let table: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "L": r.l,
                        "lhs": complex_json(r.lhs),
                        "rhs": complex_json(r.rhs),
                        "identity_residual": r.identity_residual,
                        "limit_residual": r.limit_residual,
                    })
                })
                .collect();
            let item = Item::new("continuum-limit", decreasing)
                .field("rows", Value::Array(table))
                .field("monotone_decreasing", json!(decreasing));
            Ok(vec![timed(item, start)])
        }
        Command::ThetaIdentity { t } => t
            .iter()
            .map(|&tv| {
                if tv <= 0.0 {
                    return Err(Error::Parse("theta-identity needs t > 0".into()));
                }
                let start = Instant::now();
                let rep = jacobi_theta_identity_check(tv);
                let tol = 1e-13;
                Ok(timed(
                    Item::from_report(&format!("theta-identity t={tv}"), &rep, tol),
                    start,
                ))
            })
            .collect(),
        Command::CodeCwe(args) => {
            let start = Instant::now();
            let (code, x, t) = code_inputs(args)?;
            let rep = crate::codes::verify_cwe_bessel(&code, &x, t, args.tol)?;
            let poly = code.coset_cwe(&x);
            let poly_json: Map<String, Value> = poly
                .terms
                .iter()
                .map(|(exps, &c)| {
                    let key = exps
                        .iter()
                        .map(|e| e.to_string())
                        .collect::<Vec<_>>()
                        .join(",");
                    (key, json!(c))
                })
                .collect();
            let hamming: Map<String, Value> = hamming_we(&poly)
                .iter()
                .map(|(&(xe, ye), &c)| (format!("{xe},{ye}"), json!(c)))
                .collect();
            let item = Item::from_report("code-cwe", &rep, args.tol)
                .field("code_size", json!(code.size()))
                .field("cwe", Value::Object(poly_json))
                .field("hamming_we", Value::Object(hamming));
            Ok(vec![timed(item, start)])
        }
        Command::CodeMacwilliams(args) => {
            let start = Instant::now();
            let (code, x, t) = code_inputs(args)?;
            let rep = crate::codes::verify_macwilliams_bessel(&code, &x, t)?;
            let dual = dual_code(&code)?;
            let item = Item::from_report("code-macwilliams", &rep, args.tol)
                .field("code_size", json!(code.size()))
                .field("dual_size", json!(dual.size()));
            Ok(vec![timed(item, start)])
        }
        Command::HeatKernel { lattice, t } => {
            let start = Instant::now();
            if *t < 0.0 {
                return Err(Error::Parse("heat-kernel needs t >= 0".into()));
            }
            let lat = parse_lattice(lattice)?;
            let n = lat.dimension();
            let (radius, tail) = kernel_window(n, *t, 1e-12);
            let coord: f64 = (-radius..=radius)
                .map(|k| crate::special::bessel_i_scaled(k, *t / n as f64))
                .sum();
            let mass = coord.powi(n as i32);
            let tol = 1e-12;
            let origin = heat_kernel_index(n, &vec![0; n], *t);
            let item = Item::new("heat-kernel", (mass - 1.0).abs() < tol + tail)
                .field("kernel_at_origin", json!(origin))
                .field("window_radius", json!(radius))
                .field("mass", json!(mass))
                .field("abs_residual", json!((mass - 1.0).abs()))
                .field("tolerance", json!(tol))
                .field("tail_bound", json!(tail));
            Ok(vec![timed(item, start)])
        }
        Command::HeatSolve {
            lattice,
            t,
            u0,
            radius,
            oracle,
        } => {
            let start = Instant::now();
            if *t < 0.0 {
                return Err(Error::Parse("heat-solve needs t >= 0".into()));
            }
            let lat = parse_lattice(lattice)?;
            let n = lat.dimension();
            let data = match u0.split_once(':') {
                None if u0 == "delta" => InitialData::Delta,
                None if u0 == "ones" => InitialData::Ones,
                Some(("coset", spec)) => {
                    let code = parse_code(spec)?;
                    if code.length() != n {
                        return Err(Error::Parse(format!(
                            "code length {} does not match lattice dimension {n}",
                            code.length()
                        )));
                    }
                    InitialData::CosetIndicator(code)
                }
                _ => return Err(Error::Parse(format!("unknown initial data {u0:?}"))),
            };
            let state = heat_solve_convolution(&lat, &data, *t, *radius)?;
            let mut points: Vec<(&Vec<i64>, &f64)> = state.window().collect();
            points.sort_by(|a, b| a.0.cmp(b.0));
            let values: Vec<Value> = points
                .iter()
                .map(|(k, v)| json!({"k": k, "value": v}))
                .collect();
            let mut item = Item::new("heat-solve", true)
                .field("time", json!(t))
                .field("values", Value::Array(values))
                .field("tail_bound", json!(data.sup_bound() * 1e-10))
                .field("tolerance", json!(1e-6));
            if *oracle {
                let box_radius = (*radius + kernel_window(n, *t, 1e-8).0).min(40);
                let oracle_state = heat_solve_ode_oracle(&lat, &data, *t, box_radius, 0.1)?;
                let mut max_dev = 0.0f64;
                for (k, v) in state.window() {
                    max_dev = max_dev.max((v - oracle_state.value(k)?).abs());
                }
                item = item.field("oracle_max_deviation", json!(max_dev));
                item.pass = max_dev < 1e-6;
            }
            Ok(vec![timed(item, start)])
        }
        Command::EtaProbe { l_values, t } => {
            let start = Instant::now();
            if *t <= 0.0 {
                return Err(Error::Parse("eta-probe needs t > 0".into()));
            }
            let limit = eta_heat_limit(*t);
            let mut rows = Vec::new();
            let mut residuals = Vec::new();
            for &l in l_values {
                let value = eta_heat_probe(l, *t)?;
                let residual = (value - limit).abs();
                rows.push(json!({"L": l, "value": value, "residual": residual}));
                residuals.push(residual);
            }
            let decreasing = residuals.windows(2).all(|w| w[1] < w[0]);
            let item = Item::new("eta-probe", decreasing || residuals.len() < 2)
                .field("limit", json!(limit))
                .field("rows", Value::Array(rows))
                .field("tolerance", json!("monotone decrease"))
                .field("tail_bound", json!(1e-14));
            Ok(vec![timed(item, start)])
        }
        Command::Suite { quick: _ } => suite(),
    }
}

fn code_inputs(args: &CodeArgs) -> Result<(LinearCode, Vec<i64>, Complex64)> {
    let code = match (&args.generators, &args.parity_check) {
        (Some(g), None) => code_from_generators(args.m, args.n, &parse_vectors(g, args.n, args.m)?),
        (None, Some(p)) => {
            let rows: Vec<Vec<i64>> = parse_vectors(p, args.n, args.m)?
                .into_iter()
                .map(|r| r.into_iter().map(|v| v as i64).collect())
                .collect();
            parity_check_code(args.m, args.n, &rows)
        }
        (None, None) => code_from_generators(args.m, args.n, &[]),
        (Some(_), Some(_)) => Err(Error::Parse(
            "give either --generators or --parity-check, not both".into(),
        )),
    }?;
    let x = args.x.clone().unwrap_or_else(|| vec![0; args.n]);
    if x.len() != args.n {
        return Err(Error::Parse(format!("--x needs {} components", args.n)));
    }
    let t = parse_complex(&args.t)?;
    Ok((code, x, t))
}

/// Cross-module smoke matrix: one representative check per identity family.
fn suite() -> Result<Vec<Item>> {
    let mut items = Vec::new();

    let start = Instant::now();
    let lat = parse_lattice("12")?;
    let fam = family_for(&lat, "kronecker:12")?;
    let rep = verify_identity(
        &lat,
        &fam,
        &[0],
        &[Rat::zero()],
        &[Complex64::new(2.0, 0.0)],
        1e-9,
        false,
    )?;
    items.push(timed(Item::from_report("identity kronecker-12", &rep, 1e-9), start));

    let start = Instant::now();
    let rep = discrete_torus_trace(&[4, 6], Complex64::new(0.8, 0.0))?;
    items.push(timed(Item::from_report("discrete-torus 4x6", &rep, 1e-10), start));

    let start = Instant::now();
    let tau = Complex64::new(0.3, 1.7);
    let (a, b) = dedekind_eta(tau);
    let route_gap = (a.complex() - b.complex()).norm();
    let (inv_a, _) = dedekind_eta(-1.0 / tau);
    let inversion =
        (sqrt_principal(Complex64::new(0.0, 1.0) / tau) * inv_a.complex() - a.complex()).norm();
    items.push(timed(
        Item::new("eta functional equation", route_gap < 1e-12 && inversion < 1e-12)
            .field("route_gap", json!(route_gap))
            .field("inversion_residual", json!(inversion))
            .field("tolerance", json!(1e-12))
            .field("tail_bound", json!(a.tail_bound.max(b.tail_bound))),
        start,
    ));

    let start = Instant::now();
    let rep = jacobi_theta_identity_check(0.25);
    items.push(timed(Item::from_report("jacobi theta", &rep, 1e-13), start));

    let start = Instant::now();
    let code = code_from_generators(2, 3, &[vec![1, 1, 1]])?;
    let rep = crate::codes::verify_cwe_bessel(&code, &[0, 0, 0], Complex64::new(0.7, 0.0), 1e-10)?;
    items.push(timed(Item::from_report("code cwe repetition", &rep, 1e-9), start));

    let start = Instant::now();
    let rep = crate::codes::verify_macwilliams_bessel(&code, &[0, 0, 0], Complex64::new(0.7, 0.0))?;
    items.push(timed(Item::from_report("code macwilliams repetition", &rep, 1e-9), start));

    let start = Instant::now();
    let t = 1.5;
    let lat3 = parse_lattice("1,0,0;0,1,0;0,0,1")?;
    let conv = heat_solve_convolution(&lat3, &InitialData::CosetIndicator(code.clone()), t, 1)?;
    let formula = code_heat_solution(&code, &[0, 0, 0], t)?;
    let dev = (conv.value(&[0, 0, 0])? - formula).abs();
    items.push(timed(
        Item::new("heat code solution", dev < 1e-8)
            .field("abs_residual", json!(dev))
            .field("tolerance", json!(1e-8))
            .field("tail_bound", json!(1e-10)),
        start,
    ));

    let start = Instant::now();
    let limit = eta_heat_limit(0.2);
    let e5 = (eta_heat_probe(5, 0.2)? - limit).abs();
    let e25 = (eta_heat_probe(25, 0.2)? - limit).abs();
    items.push(timed(
        Item::new("eta heat probe", e25 < e5)
            .field("residual_L5", json!(e5))
            .field("residual_L25", json!(e25))
            .field("tolerance", json!("monotone decrease"))
            .field("tail_bound", json!(1e-14)),
        start,
    ));

    Ok(items)
}
