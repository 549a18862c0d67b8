//! `polystoch`: exact permanents, Latin hypercubes and hull certificates.
//!
//! Exit status 0 means the command succeeded or the checked claim holds, 1
//! that the claim was refuted, 2 an error or an exceeded search cap.

mod input;

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polystoch::constructions::{self, FamilyMode, ZeroFamilySpec};
use polystoch::latin::{self, SpeciesOutcome};
use polystoch::permanent;
use polystoch::polytope;
use polystoch::rational;
use polystoch::repro;
use polystoch::tensor;
use polystoch::{Diagonal, Error, LatinHypercube, Limits, Rational, Tensor};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "polystoch", version, about = "Exact permanents of multidimensional matrices")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Write the output here instead of standard output.
    #[arg(short, long, global = true, value_name = "FILE")]
    output: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// The s-permanent of a matrix (a hypercube is read as its permutation matrix).
    Permanent {
        #[arg(long, default_value_t = 1)]
        s: usize,
        file: String,
    },
    /// Counts the transversals of a Latin hypercube.
    Transversals {
        /// Also print every transversal.
        #[arg(long)]
        list: bool,
        file: String,
    },
    /// Looks for a mixed transversal of several hypercubes of the same shape.
    Mixed {
        #[arg(required = true, num_args = 2..)]
        files: Vec<String>,
    },
    /// Checks a property of a matrix or a certificate.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Builds one of the named constructions.
    Construct {
        #[command(subcommand)]
        what: Construct,
    },
    /// Writes a matrix as a convex combination of permutation matrices.
    Decompose {
        #[command(subcommand)]
        what: Decompose,
    },
    /// Permanents of (1-ε)U + εV for the uniform U and a polystochastic V.
    Scan {
        /// Comma-separated rationals in [0, 1].
        #[arg(long, value_name = "LIST", value_delimiter = ',')]
        eps: Option<Vec<String>>,
        file: String,
    },
    /// Species (main-class) equivalence and counts.
    Species {
        #[command(subcommand)]
        what: Species,
    },
    /// Runs a named reproduction check; `list` shows them, `all` runs every one.
    Repro { id: String },
    /// Same as `verify certificate`.
    VerifyCertificate { file: String },
}

#[derive(Subcommand)]
enum Verify {
    /// Every s-plane sums to one and no entry is negative.
    Polystochastic(PlaneArgs),
    /// A (0,1)-matrix with exactly one 1 in every s-plane.
    Permutation(PlaneArgs),
    /// A 1-polystochastic matrix that is a vertex of its polytope.
    Vertex { file: String },
    /// Re-checks a hull certificate exactly.
    Certificate { file: String },
}

#[derive(Args)]
struct PlaneArgs {
    #[arg(long, default_value_t = 1)]
    s: usize,
    file: String,
}

#[derive(Subcommand)]
enum Construct {
    /// The cyclic hypercube x_1 + .. + x_k mod n.
    Cyclic { k: usize, n: usize },
    /// shift + Σ c_i x_i mod n; the dimension is the number of coefficients.
    Linear {
        n: usize,
        #[arg(required = true, allow_negative_numbers = true)]
        coeffs: Vec<i64>,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        shift: i64,
    },
    /// Lifts of squares agreeing with the cyclic square outside a window of rows.
    ZeroFamily {
        d: usize,
        n: usize,
        /// Window size; defaults to the largest allowed.
        #[arg(long)]
        r: Option<usize>,
        /// First row of the window, wrapping mod n; defaults to the last r rows.
        #[arg(long)]
        window_start: Option<usize>,
        #[arg(long, default_value_t = 0)]
        axis: usize,
        /// Draw this many members instead of listing all.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The square L_(a,b) of even order n, with a and b counted from one.
    Lab { n: usize, a: usize, b: usize },
    /// The order-six matrix with its hull certificate.
    A6 {
        #[arg(long)]
        certificate: bool,
    },
    /// A pair of orthogonal Latin squares.
    Mols { n: usize },
    /// A polystochastic matrix whose scaling lies in the hull of (d-1)-permutation matrices.
    HullWitness {
        d: usize,
        n: usize,
        #[arg(long)]
        certificate: bool,
    },
}

#[derive(Subcommand)]
enum Decompose {
    /// Birkhoff decomposition of a doubly stochastic matrix.
    Birkhoff { file: String },
    /// Disjoint transversals covering a Latin square, i.e. an orthogonal mate.
    TransversalCover { file: String },
}

#[derive(Subcommand)]
enum Species {
    /// Whether two hypercubes lie in the same species.
    Equiv { a: String, b: String },
    /// Species among the zero-permanent lifts of order n to dimension d-1.
    Count { n: usize, d: usize },
}

/// What a command prints in each output mode, and whether its claim held.
struct Report {
    holds: bool,
    text: String,
    json: Value,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { holds: true, text, json }
    }
}

type Outcome = polystoch::Result<Report>;

fn r(x: &Rational) -> String {
    rational::format(x)
}

fn cells(d: &Diagonal) -> Value {
    json!(d.cells)
}

fn dump(v: &impl serde::Serialize) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn compact(v: &Value) -> String {
    serde_json::to_string(v).expect("serializable") + "\n"
}

fn run_permanent(s: usize, file: &str, limits: &Limits) -> Outcome {
    let a = input::tensor(file)?;
    let res = if s == 1 { permanent::permanent1(&a)? } else { permanent::permanent_s_with(&a, s, limits)? };
    let mut text = format!("{}\n", r(&res.value));
    writeln!(text, "# nonzero diagonals: {}", res.diagonal_count).unwrap();
    if let Some(w) = &res.witness {
        writeln!(text, "# first: {}", w.to_json()).unwrap();
    }
    let json = json!({
        "s": s,
        "value": r(&res.value),
        "nonzero_diagonals": res.diagonal_count,
        "witness": res.witness.as_ref().map(cells),
    });
    Ok(Report::ok(text, json))
}

fn run_transversals(list: bool, file: &str) -> Outcome {
    let h = input::hypercube(file)?;
    if !list {
        let count = permanent::count_transversals(&h);
        return Ok(Report::ok(format!("{count}\n"), json!({ "count": count })));
    }
    let all = permanent::transversals(&h);
    let mut text = format!("{}\n", all.len());
    for t in &all {
        writeln!(text, "{}", t.to_json()).unwrap();
    }
    let json = json!({ "count": all.len(), "transversals": all.iter().map(cells).collect::<Vec<_>>() });
    Ok(Report::ok(text, json))
}

fn run_mixed(files: &[String]) -> Outcome {
    let hs = files.iter().map(|f| input::hypercube(f)).collect::<polystoch::Result<Vec<_>>>()?;
    let found = permanent::mixed_transversal_exists(&hs)?;
    let text = match &found {
        Some(d) => format!("found {}\n", d.to_json()),
        None => "none\n".to_string(),
    };
    let json = json!({ "exists": found.is_some(), "witness": found.as_ref().map(cells) });
    Ok(Report { holds: found.is_some(), text, json })
}

fn violation_report(kind: &str, s: usize, v: Option<tensor::Violation>) -> Report {
    let text = match &v {
        None => format!("pass: {kind} (s={s})\n"),
        Some(v) => format!("fail: {v}\n"),
    };
    let json = json!({ "check": kind, "s": s, "passed": v.is_none(), "reason": v.map(|v| v.to_string()) });
    Report { holds: json["passed"] == json!(true), text, json }
}

fn run_verify(what: &Verify) -> Outcome {
    match what {
        Verify::Polystochastic(p) => {
            let a = input::tensor(&p.file)?;
            Ok(violation_report("polystochastic", p.s, tensor::polystochastic_violation(&a, p.s)?))
        }
        Verify::Permutation(p) => {
            let a = input::tensor(&p.file)?;
            Ok(violation_report("permutation", p.s, tensor::permutation_violation(&a, p.s)?))
        }
        Verify::Vertex { file } => {
            let v = polytope::is_vertex(&input::tensor(file)?)?;
            let mut text = if v.is_vertex { "pass: vertex\n".to_string() } else { "fail: not a vertex\n".to_string() };
            writeln!(text, "# freedom: {}", v.freedom_dim).unwrap();
            let json = json!({
                "vertex": v.is_vertex,
                "freedom_dim": v.freedom_dim,
                "direction": v.witness_direction.as_ref().map(dump),
            });
            Ok(Report { holds: v.is_vertex, text, json })
        }
        Verify::Certificate { file } => {
            let cert = input::certificate(file)?;
            let result = cert.verify();
            let text = match &result {
                Ok(()) => format!("pass: {} terms in Λ_{} recombine to the target\n", cert.terms.len(), cert.s),
                Err(e) => format!("fail: {e}\n"),
            };
            let json = json!({
                "passed": result.is_ok(),
                "s": cert.s,
                "terms": cert.terms.len(),
                "reason": result.as_ref().err().map(ToString::to_string),
            });
            Ok(Report { holds: result.is_ok(), text, json })
        }
    }
}

fn latin_report(h: &LatinHypercube) -> Report {
    Report::ok(h.to_text(), dump(h))
}

fn tensor_report(t: &Tensor) -> Report {
    let v = dump(t);
    Report::ok(compact(&v), v)
}

fn run_construct(what: &Construct, limits: &Limits) -> Outcome {
    match what {
        Construct::Cyclic { k, n } => Ok(latin_report(&latin::cyclic(*k, *n)?)),
        Construct::Linear { n, coeffs, shift } => {
            Ok(latin_report(&latin::linear_hypercube(coeffs.len(), *n, *shift, coeffs)?))
        }
        Construct::ZeroFamily { d, n, r, window_start, axis, sample, seed } => {
            let mut spec = ZeroFamilySpec::new(*d, *n).with_axis(*axis);
            if let Some(r) = r {
                spec = spec.with_r(*r);
            }
            if let Some(w) = window_start {
                spec = spec.with_window_start(*w);
            }
            let mode = match sample {
                Some(count) => FamilyMode::Sample { count: *count, seed: *seed },
                None => FamilyMode::Enumerate,
            };
            let members = constructions::zero_family_with(&spec, mode, limits)?;
            let mut text = String::new();
            for (i, h) in members.iter().enumerate() {
                writeln!(text, "# member {i}").unwrap();
                text.push_str(&h.to_text());
                text.push('\n');
            }
            Ok(Report::ok(text, json!(members.iter().map(dump).collect::<Vec<_>>())))
        }
        Construct::Lab { n, a, b } => Ok(latin_report(&constructions::lab(*n, *a, *b)?)),
        Construct::A6 { certificate } => {
            if *certificate {
                let v = dump(&constructions::a6_certificate());
                Ok(Report::ok(compact(&v), v))
            } else {
                Ok(tensor_report(&constructions::a6()))
            }
        }
        Construct::Mols { n } => {
            let (a, b) = constructions::mols_pair_with(*n, limits)?;
            Ok(Report::ok(format!("{}\n{}", a.to_text(), b.to_text()), json!([dump(&a), dump(&b)])))
        }
        Construct::HullWitness { d, n, certificate } => {
            let w = constructions::hull_witness_with(*d, *n, limits)?;
            if *certificate {
                let v = dump(&w.certificate);
                Ok(Report::ok(compact(&v), v))
            } else {
                Ok(tensor_report(&w.matrix))
            }
        }
    }
}

fn run_decompose(what: &Decompose, limits: &Limits) -> Outcome {
    match what {
        Decompose::Birkhoff { file } => {
            let v = dump(&polytope::birkhoff_decompose(&input::tensor(file)?)?);
            Ok(Report::ok(compact(&v), v))
        }
        Decompose::TransversalCover { file } => {
            let p = latin::p_of_h(&input::hypercube(file)?);
            match polytope::transversal_cover_with(&p, limits)? {
                Some(cover) => {
                    let cert = cover.certificate()?;
                    let text = format!("# orthogonal mate\n{}", cover.mate.to_text());
                    Ok(Report::ok(text, json!({ "mate": dump(&cover.mate), "certificate": dump(&cert) })))
                }
                None => Ok(Report { holds: false, text: "none\n".into(), json: json!({ "mate": null }) }),
            }
        }
    }
}

fn run_scan(eps: &Option<Vec<String>>, file: &str) -> Outcome {
    let epsilons = match eps {
        Some(list) => list.iter().map(|e| rational::parse(e)).collect::<polystoch::Result<Vec<_>>>()?,
        None => constructions::default_epsilons(),
    };
    let v = input::tensor(file)?;
    let scan = constructions::perturbation_scan(&v, &epsilons)?;
    let mut text = format!("# Per(U) = {}\n", r(&scan.baseline));
    let mut rows = Vec::new();
    for (e, value) in scan.epsilons.iter().zip(&scan.values) {
        let cmp = match value.cmp(&scan.baseline) {
            std::cmp::Ordering::Less => "<",
            std::cmp::Ordering::Equal => "=",
            std::cmp::Ordering::Greater => ">",
        };
        writeln!(text, "{}\t{}\t{cmp}", r(e), r(value)).unwrap();
        rows.push(json!({ "eps": r(e), "value": r(value), "vs_baseline": cmp }));
    }
    Ok(Report::ok(text, json!({ "baseline": r(&scan.baseline), "values": rows })))
}

/// `Undecided` surfaces as a cap error so that it exits with status 2.
fn run_species(what: &Species, limits: &Limits) -> Outcome {
    match what {
        Species::Equiv { a, b } => {
            let (a, b) = (input::hypercube(a)?, input::hypercube(b)?);
            match latin::species_equivalent_with(&a, &b, limits)? {
                SpeciesOutcome::Equivalent => {
                    Ok(Report { holds: true, text: "equivalent\n".into(), json: json!({ "equivalent": true }) })
                }
                SpeciesOutcome::Inequivalent => {
                    Ok(Report { holds: false, text: "inequivalent\n".into(), json: json!({ "equivalent": false }) })
                }
                SpeciesOutcome::Undecided { cap } => Err(Error::CapExceeded { what: "species search", cap }),
            }
        }
        Species::Count { n, d } => {
            let count = constructions::count_zero_species_with(*n, *d, limits)?;
            Ok(Report::ok(format!("{count}\n"), json!({ "n": n, "d": d, "species": count })))
        }
    }
}

fn claim_text(rep: &repro::ClaimReport) -> String {
    let mut text = format!("{} {}: {}\n", if rep.passed { "PASS" } else { "FAIL" }, rep.id, rep.title);
    for d in &rep.details {
        writeln!(text, "  {d}").unwrap();
    }
    text
}

fn claim_json(rep: &repro::ClaimReport) -> Value {
    json!({ "id": rep.id, "title": rep.title, "passed": rep.passed, "details": rep.details })
}

fn run_repro(id: &str, limits: &Limits) -> Outcome {
    match id {
        "list" => {
            let text = repro::CLAIMS.iter().map(|c| format!("{}\t{}\n", c.id, c.title)).collect();
            let json = json!(repro::CLAIMS.iter().map(|c| json!({ "id": c.id, "title": c.title })).collect::<Vec<_>>());
            Ok(Report::ok(text, json))
        }
        "all" => {
            let reports = repro::CLAIMS.iter().map(|c| c.check(limits)).collect::<polystoch::Result<Vec<_>>>()?;
            let holds = reports.iter().all(|r| r.passed);
            let text = reports.iter().map(claim_text).collect();
            Ok(Report { holds, text, json: json!(reports.iter().map(claim_json).collect::<Vec<_>>()) })
        }
        _ => {
            let rep = repro::run(id, limits)?;
            Ok(Report { holds: rep.passed, text: claim_text(&rep), json: claim_json(&rep) })
        }
    }
}

fn dispatch(cli: &Cli, limits: &Limits) -> Outcome {
    match &cli.command {
        Command::Permanent { s, file } => run_permanent(*s, file, limits),
        Command::Transversals { list, file } => run_transversals(*list, file),
        Command::Mixed { files } => run_mixed(files),
        Command::Verify { what } => run_verify(what),
        Command::Construct { what } => run_construct(what, limits),
        Command::Decompose { what } => run_decompose(what, limits),
        Command::Scan { eps, file } => run_scan(eps, file),
        Command::Species { what } => run_species(what, limits),
        Command::Repro { id } => run_repro(id, limits),
        Command::VerifyCertificate { file } => run_verify(&Verify::Certificate { file: file.clone() }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let limits = Limits::from_env();
    let report = match dispatch(&cli, &limits) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let out = if cli.json { compact(&report.json) } else { report.text };
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, out) {
                eprintln!("error: {path}: {e}");
                return ExitCode::from(2);
            }
        }
        None => print!("{out}"),
    }
    if report.holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
