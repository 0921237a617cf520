use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use godel_duality::chainspace::ChainPoset;
use godel_duality::coproduct::{coproduct_gan, coproduct_godel, depth_check};
use godel_duality::corpus::{named, named_algebra_dual};
use godel_duality::format::{parse_lattice, parse_poset, to_dot, ChainPosetJson, LatticeJson, PosetJson};
use godel_duality::freealg::{
    certify_free, certify_free_generators, free_dual, free_gan, free_gan_over_lattice, free_godel,
    free_godel_over_lattice, FreeAlgebra, Route,
};
use godel_duality::lattice::{dual_poset, upset_lattice, DistLattice, HeytingAlgebra, LatticeHom};
use godel_duality::nerve::{implication_box_formula_check, nerve, nerve_upset_characterization_check, z_iso_check};
use godel_duality::suites::{run_suite, twohead_suite, Certificate};
use godel_duality::{Error, Limits, Poset};

#[derive(Parser)]
#[command(name = "godel", version, about = "Closed-chain duality for finite Gödel algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Largest number of chains a single enumeration may produce.
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    cap_chains: u64,
    /// Largest number of search nodes a morphism search may visit.
    #[arg(long, global = true, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    cap_homs: u64,
    /// Seed for the randomized parts of `check`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
    Graph,
}

#[derive(Subcommand)]
enum Command {
    /// The dual poset of a lattice, or the upset lattice of a poset.
    Dual {
        #[arg(long)]
        poset: Option<String>,
        #[arg(long)]
        lattice: Option<String>,
    },
    /// The free (depth-bounded) Gödel algebra on generators or over a lattice.
    Free {
        #[arg(long, conflicts_with = "lattice")]
        generators: Option<usize>,
        #[arg(long)]
        lattice: Option<String>,
        #[arg(long)]
        depth: Option<usize>,
        /// Also certify the universal property into this Gödel algebra.
        #[arg(long)]
        into: Option<String>,
    },
    /// The coproduct of Gödel algebras.
    Coproduct {
        #[arg(long, required = true)]
        alg: Vec<String>,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// The depth of a coproduct: formula against the computed value.
    Depth {
        #[arg(long, required = true)]
        alg: Vec<String>,
    },
    /// The nerve of a poset, optionally with one of its checks.
    Nerve {
        #[arg(long)]
        poset: String,
        #[arg(long, value_enum)]
        check: Option<NerveCheck>,
    },
    /// Runs a named certificate suite.
    Check {
        /// box-diamond, twohead, basic-upsets, implication, upsets, z-iso, free, product, depth or roundtrip.
        suite: String,
        /// Restrict the suite to these posets instead of its default corpus.
        #[arg(long)]
        poset: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum NerveCheck {
    ZIso,
    Implication,
    Upsets,
    Twohead,
}

/// What a command produced, before rendering.
struct Report {
    command: &'static str,
    inputs: Value,
    result: Value,
    certificates: Vec<Certificate>,
    lines: Vec<String>,
    graph: Option<String>,
}

impl Report {
    fn new(command: &'static str, inputs: Value) -> Self {
        Report { command, inputs, result: Value::Null, certificates: Vec::new(), lines: Vec::new(), graph: None }
    }

    fn certify(&mut self, cert: Certificate) {
        self.lines.extend(cert_lines(&cert));
        self.certificates.push(cert);
    }

    fn failed(&self) -> Option<&Certificate> {
        self.certificates.iter().find(|c| !c.passed())
    }
}

fn cert_lines(cert: &Certificate) -> Vec<String> {
    if cert.name == "z-iso" && cert.passed() && cert.notes.len() == 1 && cert.notes[0].contains('↔') {
        return vec![format!("{}, isomorphism verified", cert.notes[0])];
    }
    let mut out = vec![cert.summary()];
    out.extend(cert.notes.iter().map(|n| format!("  {n}")));
    out.extend(cert.failures.iter().map(|f| format!("  failure: {f}")));
    out
}

enum Failure {
    Lib(Error),
    Io(String, std::io::Error),
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn first_line(&self) -> String {
        match self {
            Failure::Lib(Error::Resource { cap, limit }) => format!("ERROR resource {cap} reached {limit}"),
            Failure::Lib(Error::Dimension { expected, found }) => {
                format!("ERROR dimension expected {expected}, found {found}")
            }
            Failure::Lib(Error::Invalid(m)) => format!("ERROR invalid {m}"),
            Failure::Lib(Error::Precondition(m)) => format!("ERROR precondition {m}"),
            Failure::Io(path, e) => format!("ERROR io {path}: {e}"),
            Failure::Usage(m) => format!("ERROR usage {m}"),
            Failure::Check(name) => format!("ERROR check {name} failed"),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Lib(Error::Resource { .. }) => 3,
            _ => 2,
        }
    }
}

fn read(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_string(), e))
}

fn load_poset(arg: &str) -> Result<Poset, Failure> {
    if Path::new(arg).is_file() {
        Ok(parse_poset(&read(arg)?)?)
    } else {
        Ok(named(arg)?)
    }
}

fn load_lattice(arg: &str, limits: &Limits) -> Result<DistLattice, Failure> {
    if Path::new(arg).is_file() {
        Ok(parse_lattice(&read(arg)?, limits.upsets)?)
    } else {
        Ok(upset_lattice(&named_algebra_dual(arg)?, limits.upsets)?.lattice().clone())
    }
}

fn load_algebra(arg: &str, limits: &Limits) -> Result<HeytingAlgebra, Failure> {
    if Path::new(arg).is_file() {
        Ok(HeytingAlgebra::from_lattice(parse_lattice(&read(arg)?, limits.upsets)?))
    } else {
        Ok(upset_lattice(&named_algebra_dual(arg)?, limits.upsets)?.algebra().clone())
    }
}

fn covers_line(p: &Poset) -> String {
    let covers: Vec<String> = p.covers().iter().map(|&(a, b)| format!("{}<{}", p.label(a), p.label(b))).collect();
    format!("covers: {}", if covers.is_empty() { "none".to_string() } else { covers.join(", ") })
}

fn cmd_dual(poset: Option<String>, lattice: Option<String>, limits: &Limits) -> Result<Report, Failure> {
    match (poset, lattice) {
        (None, Some(l)) => {
            let lat = load_lattice(&l, limits)?;
            let (p, _) = dual_poset(&lat);
            let mut r = Report::new("dual", json!({ "lattice": l }));
            if p.is_empty() {
                r.lines.push("empty poset".into());
            } else {
                r.lines.push(format!("poset: {} elements", p.size()));
                r.lines.push(covers_line(&p));
            }
            r.result = json!(PosetJson::from_poset(&p));
            r.graph = Some(to_dot(&p, "dual"));
            Ok(r)
        }
        (Some(p), None) => {
            let x = load_poset(&p)?;
            let alg = upset_lattice(&x, limits.upsets)?;
            let mut r = Report::new("dual", json!({ "poset": p }));
            let order = alg.lattice().order();
            r.lines.push(format!("lattice: {} elements", alg.size()));
            r.lines.push(format!("godel: {}", alg.algebra().is_godel()));
            r.lines.push(covers_line(&order));
            let upsets: Vec<Vec<usize>> = alg.upsets().iter().map(|u| u.to_vec()).collect();
            r.result = json!({
                "lattice": LatticeJson::from_lattice(alg.lattice()),
                "upsets": upsets,
                "godel": alg.algebra().is_godel(),
            });
            r.graph = Some(to_dot(&order, "upsets"));
            Ok(r)
        }
        _ => Err(Failure::Usage("dual needs exactly one of --poset and --lattice".into())),
    }
}

fn describe_free(r: &mut Report, f: &FreeAlgebra) {
    r.lines.push(format!("dual: {} elements; algebra: {} elements", f.dual.len(), f.size()));
    r.result = json!({
        "dual": ChainPosetJson::from_space(&f.dual),
        "dual_size": f.dual.len(),
        "algebra_size": f.size(),
        "materialized": true,
    });
    r.graph = Some(to_dot(f.dual.order(), "free"));
}

fn cmd_free(
    generators: Option<usize>,
    lattice: Option<String>,
    depth: Option<usize>,
    into: Option<String>,
    limits: &Limits,
) -> Result<Report, Failure> {
    let inputs = json!({ "generators": generators, "lattice": lattice, "depth": depth, "into": into });
    let mut r = Report::new("free", inputs);
    let target = into.map(|a| load_algebra(&a, limits)).transpose()?;
    match (generators, lattice) {
        (Some(k), None) => {
            let built = match depth {
                Some(n) => free_gan(k, n, limits),
                None => free_godel(k, limits),
            };
            match built {
                Ok(f) => {
                    describe_free(&mut r, &f);
                    if let Some(h) = &target {
                        r.certify(certify_free_generators(&f, h, limits)?);
                    }
                }
                // Too many upsets to list: count them on the root system instead.
                Err(Error::Resource { cap: "upsets", .. }) if target.is_none() => {
                    let (space, _) = free_dual(k, depth, limits)?;
                    let count = space.order().count_upsets_root_system()?;
                    r.lines.push(format!("dual: {} elements; algebra: {count} elements (counted)", space.len()));
                    r.result = json!({
                        "dual": ChainPosetJson::from_space(&space),
                        "dual_size": space.len(),
                        "algebra_size": count.to_string(),
                        "materialized": false,
                    });
                    r.graph = Some(to_dot(space.order(), "free"));
                }
                Err(e) => return Err(e.into()),
            }
        }
        (None, Some(l)) => {
            let lat = load_lattice(&l, limits)?;
            let f = match depth {
                Some(n) => free_gan_over_lattice(&lat, n, limits)?,
                None => free_godel_over_lattice(&lat, limits)?,
            };
            describe_free(&mut r, &f);
            if let Some(h) = &target {
                r.certify(certify_free(&f, &lat, h, Route::Auto, limits)?);
            }
        }
        _ => return Err(Failure::Usage("free needs exactly one of --generators and --lattice".into())),
    }
    Ok(r)
}

fn cmd_coproduct(algs: Vec<String>, depth: Option<usize>, limits: &Limits) -> Result<Report, Failure> {
    let gs = algs.iter().map(|a| load_algebra(a, limits)).collect::<Result<Vec<_>, _>>()?;
    let c = match depth {
        Some(n) => coproduct_gan(&gs, n, limits)?,
        None => coproduct_godel(&gs, limits)?,
    };
    let mut r = Report::new("coproduct", json!({ "alg": algs, "depth": depth }));
    let dual_depth = if c.space.is_empty() { 0 } else { c.space.order().depth_of()? };
    r.lines.push(format!("tensor: {} chains; algebra: {} elements", c.space.len(), c.algebra.size()));
    r.lines.push(format!("depth: {dual_depth}"));
    let mut cert = Certificate::new("injections");
    for (i, (g, e)) in gs.iter().zip(&c.injections).enumerate() {
        let ok = LatticeHom::preserves_heyting(&e.map, g, c.algebra.algebra());
        cert.case(ok, || format!("injection {i} is not a Heyting homomorphism"));
    }
    r.certify(cert);
    r.result = json!({
        "space": ChainPosetJson::from_space(&c.space),
        "algebra_size": c.algebra.size(),
        "depth": dual_depth,
        "injections": c.injections.iter().map(|e| e.map.clone()).collect::<Vec<_>>(),
    });
    r.graph = Some(to_dot(c.space.order(), "coproduct"));
    Ok(r)
}

fn cmd_depth(algs: Vec<String>, limits: &Limits) -> Result<Report, Failure> {
    let gs = algs.iter().map(|a| load_algebra(a, limits)).collect::<Result<Vec<_>, _>>()?;
    let (formula, computed) = depth_check(&gs, limits)?;
    let mut r = Report::new("depth", json!({ "alg": algs }));
    let mut cert = Certificate::new("depth");
    cert.case(formula == computed, || format!("formula {formula} differs from computed {computed}"));
    r.certificates.push(cert);
    r.lines.push(format!("formula {formula}, computed {computed}"));
    r.result = json!({ "formula": formula, "computed": computed });
    Ok(r)
}

fn nerve_summary(space: &ChainPoset) -> String {
    format!("nerve: {} chains; {} covers", space.len(), space.order().covers().len())
}

fn cmd_nerve(poset: String, check: Option<NerveCheck>, limits: &Limits) -> Result<Report, Failure> {
    let x = load_poset(&poset)?;
    let mut r = Report::new("nerve", json!({ "poset": poset }));
    let space = nerve(&x, limits)?;
    r.graph = Some(to_dot(space.order(), "nerve"));
    r.result = json!(ChainPosetJson::from_space(&space));
    match check {
        None => r.lines.push(nerve_summary(&space)),
        Some(NerveCheck::ZIso) => r.certify(z_iso_check(&x, limits)?),
        Some(NerveCheck::Implication) => r.certify(implication_box_formula_check(&x, limits)?),
        Some(NerveCheck::Upsets) => r.certify(nerve_upset_characterization_check(&x, limits)?),
        Some(NerveCheck::Twohead) => r.certify(twohead_suite(&[x], 3)?),
    }
    Ok(r)
}

fn cmd_check(suite: String, posets: Vec<String>, seed: u64, limits: &Limits) -> Result<Report, Failure> {
    let loaded = posets.iter().map(|p| load_poset(p)).collect::<Result<Vec<_>, _>>()?;
    let mut r = Report::new("check", json!({ "suite": suite, "poset": posets, "seed": seed }));
    let cert = if suite == "z-iso" && loaded.len() == 1 {
        z_iso_check(&loaded[0], limits)?
    } else {
        run_suite(&suite, (!loaded.is_empty()).then_some(loaded), seed, limits)?
    };
    r.result = json!({ "passed": cert.passed(), "cases": cert.cases });
    r.certify(cert);
    Ok(r)
}

fn render(r: &Report, format: Format) -> Result<String, Failure> {
    match format {
        Format::Text => Ok(r.lines.iter().map(|l| format!("{l}\n")).collect()),
        Format::Structured => {
            let doc = json!({
                "command": r.command,
                "inputs": r.inputs,
                "result": r.result,
                "certificates": r.certificates,
            });
            Ok(serde_json::to_string_pretty(&doc).expect("plain data serializes") + "\n")
        }
        Format::Graph => r
            .graph
            .clone()
            .ok_or_else(|| Failure::Usage(format!("`{}` has no graph output", r.command))),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let limits = Limits {
        chains: cli.cap_chains as usize,
        homs: cli.cap_homs as usize,
        ..Limits::default()
    };
    let report = match cli.command {
        Command::Dual { poset, lattice } => cmd_dual(poset, lattice, &limits)?,
        Command::Free { generators, lattice, depth, into } => cmd_free(generators, lattice, depth, into, &limits)?,
        Command::Coproduct { alg, depth } => cmd_coproduct(alg, depth, &limits)?,
        Command::Depth { alg } => cmd_depth(alg, &limits)?,
        Command::Nerve { poset, check } => cmd_nerve(poset, check, &limits)?,
        Command::Check { suite, poset } => cmd_check(suite, poset, cli.seed, &limits)?,
    };
    let text = render(&report, cli.format)?;
    match &cli.output {
        Some(path) => std::fs::write(path, &text).map_err(|e| Failure::Io(path.display().to_string(), e))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| Failure::Io("stdout".into(), e))?;
        }
    }
    match report.failed() {
        Some(c) => Err(Failure::Check(c.name.clone())),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let kind = e.kind().to_string();
            eprintln!("ERROR usage {kind}");
            eprint!("{e}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.first_line());
            ExitCode::from(f.exit_code())
        }
    }
}
