//! The `nakamura` command line. Exit codes: 0 success, 1 domain violation,
//! 2 I/O or parse error.

mod document;

pub use document::{SpecDocument, TauDocument};

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::automorphisms::{
    commutant_search, e_mode_space, h_coset_group, verify_candidate, AutCandidate,
};
use crate::cohomology::{
    dolbeault_generators, pkahler_status, AdmissibleCharacters, Analyzer, FrolicherVerdict,
    PKahlerVerdict, PKahlerWitness, DEFAULT_MAX_N,
};
use crate::construct::{analyze_lattice, LatticeSpec};
use crate::error::{Error, Result};
use crate::forms::MultiIndex;
use crate::model::{kodaira_dimension, validate_spec, LambdaSpec, ManifoldSpec, TauSpec};
use crate::scalars::IntMatrix;
use crate::tau::{canonical_triple, same_fiber, tau_from_triple, Triple};

/// Environment variable overriding the cap on `n` for subset enumeration.
pub const MAX_N_VAR: &str = "NAKAMURA_MAX_N";

#[derive(Parser, Debug)]
#[command(name = "nakamura", version, about = "Exact invariants of split Nakamura manifolds")]
struct Cli {
    /// Emit JSON, with rationals as "p/q" strings.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a spec file.
    Validate { file: PathBuf },
    /// Hodge numbers h^{p,q}.
    Hodge {
        file: PathBuf,
        /// Fail unless the table has the Serre and conjugation symmetries.
        #[arg(long)]
        check_serre: bool,
    },
    /// De Rham Betti numbers.
    Betti { file: PathBuf },
    /// Degeneration of the Frölicher spectral sequence at E1.
    Frolicher { file: PathBuf },
    /// Whether the ddbar-lemma holds.
    Ddbar { file: PathBuf },
    /// Kuranishi space dimension h^{1,n} and unobstructedness.
    Deformations { file: PathBuf },
    /// h^{1,0} and whether the Albanese map is the projection to C/Λ.
    Albanese { file: PathBuf },
    /// p-Kähler verdict with a witness checked in the form engine.
    Pkahler {
        file: PathBuf,
        #[arg(long)]
        p: usize,
    },
    /// Kodaira dimension.
    Kodaira { file: PathBuf },
    /// Admissible characters c_IJ.
    Characters { file: PathBuf },
    /// Explicit Dolbeault cohomology generators of bidegree (p, q).
    Generators {
        file: PathBuf,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
    },
    /// Weights λ from a matrix in SL(n, Z), e.g. "2,1;1,1".
    Construct {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        /// Print only the resulting spec document (generic τ).
        #[arg(long)]
        emit_spec: bool,
    },
    /// Arithmetic of τ(c, h, k).
    #[command(subcommand)]
    Tau(TauCommand),
    /// Automorphism lifts.
    #[command(subcommand)]
    Aut(AutCommand),
}

#[derive(Subcommand, Debug)]
enum TauCommand {
    /// Divide the triple by gcd(h, k).
    Canonical {
        #[arg(allow_hyphen_values = true)]
        c: String,
        #[arg(allow_hyphen_values = true)]
        h: BigInt,
        #[arg(allow_hyphen_values = true)]
        k: BigInt,
    },
    /// Whether two triples define the same τ.
    Same {
        #[arg(allow_hyphen_values = true)]
        c1: String,
        #[arg(allow_hyphen_values = true)]
        h1: BigInt,
        #[arg(allow_hyphen_values = true)]
        k1: BigInt,
        #[arg(allow_hyphen_values = true)]
        c2: String,
        #[arg(allow_hyphen_values = true)]
        h2: BigInt,
        #[arg(allow_hyphen_values = true)]
        k2: BigInt,
    },
    /// The special τ spec for a triple.
    FromTriple {
        #[arg(allow_hyphen_values = true)]
        c: String,
        #[arg(allow_hyphen_values = true)]
        h: BigInt,
        #[arg(allow_hyphen_values = true)]
        k: BigInt,
    },
}

#[derive(Subcommand, Debug)]
enum AutCommand {
    /// Check a candidate JSON {t, A_prime, x1, x2, e_modes}.
    Verify { file: PathBuf, candidate: PathBuf },
    /// All A' with entries in [-bound, bound], M^t A' = A' M, det A' = ±1.
    Search {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        t: i64,
        #[arg(long, default_value_t = 3)]
        bound: u32,
    },
    /// The group of admissible translations modulo the lattice.
    Cosets { file: PathBuf },
    /// Exponential modes (m, k) per coordinate.
    Emodes {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
        t: i64,
    },
}

/// What a command produced.
struct Outcome {
    text: String,
    json: Value,
    code: i32,
}

impl Outcome {
    fn ok(text: impl Into<String>, json: Value) -> Self {
        Outcome {
            text: text.into(),
            json,
            code: 0,
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    let json = cli.json;
    match execute(cli.command) {
        Ok(o) => {
            let written = if json {
                serde_json::to_string_pretty(&o.json)
                    .map_err(std::io::Error::other)
                    .and_then(|s| writeln!(out, "{s}"))
            } else {
                writeln!(out, "{}", o.text)
            };
            if written.is_err() {
                return 2;
            }
            o.code
        }
        Err(e) => {
            if json {
                let _ = writeln!(out, "{}", json!({ "error": e.to_string() }));
            }
            let _ = writeln!(err, "error: {e}");
            if e.is_domain() {
                1
            } else {
                2
            }
        }
    }
}

fn max_n() -> Result<usize> {
    match std::env::var(MAX_N_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("{MAX_N_VAR}={v:?} is not a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_MAX_N),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_document(path: &Path) -> Result<SpecDocument> {
    SpecDocument::parse(&read(path)?).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn load_spec(path: &Path) -> Result<ManifoldSpec> {
    let spec = load_document(path)?.into_spec()?;
    spec.require_valid()?;
    Ok(spec)
}

fn indices_json(m: MultiIndex) -> Value {
    json!(m.indices())
}

fn frolicher_outcome(v: &FrolicherVerdict, analyzer: &Analyzer) -> Outcome {
    match v.witness {
        None => Outcome::ok("YES", json!({ "holds": true })),
        Some((i, j)) => {
            let sums = analyzer.spec().lambdas();
            let character = i
                .indices()
                .into_iter()
                .chain(j.indices())
                .fold(crate::scalars::QVec::zero(analyzer.spec().basis_dim()), |acc, k| {
                    &acc + &sums[k - 1]
                });
            Outcome::ok(
                format!("NO, witness I={i} J={j}"),
                json!({
                    "holds": false,
                    "witness": {"I": indices_json(i), "J": indices_json(j), "character": character},
                }),
            )
        }
    }
}

fn parse_triple(c: &str, h: BigInt, k: BigInt) -> Result<Triple> {
    Ok(Triple {
        c: c.parse()?,
        h,
        k,
    })
}

fn parse_matrix(text: &str) -> Result<IntMatrix> {
    let rows = text
        .split(';')
        .map(|row| {
            row.split(|ch: char| ch == ',' || ch.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<BigInt>()
                        .map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    IntMatrix::from_rows(rows)
}

fn execute(command: Command) -> Result<Outcome> {
    match command {
        Command::Validate { file } => validate(&file),
        Command::Hodge { file, check_serre } => {
            let spec = load_spec(&file)?;
            let table = Analyzer::with_cap(&spec, max_n()?)?.hodge_table();
            let mut json = json!({ "n": table.n, "h": table.h, "degree_sums": table.degree_sums() });
            let mut o = Outcome::ok(table.to_string(), Value::Null);
            if check_serre {
                let violations = table.symmetry_violations();
                json["symmetry_violations"] = json!(violations);
                if !violations.is_empty() {
                    o.text = format!("{}\nSYMMETRY VIOLATED: {}", o.text, violations.join("; "));
                    o.code = 1;
                }
            }
            o.json = json;
            Ok(o)
        }
        Command::Betti { file } => {
            let spec = load_spec(&file)?;
            let b = Analyzer::with_cap(&spec, max_n()?)?.betti_numbers();
            let text: Vec<String> = b.iter().map(ToString::to_string).collect();
            Ok(Outcome::ok(text.join(" "), json!({ "betti": b })))
        }
        Command::Frolicher { file } | Command::Ddbar { file } => {
            let spec = load_spec(&file)?;
            let analyzer = Analyzer::with_cap(&spec, max_n()?)?;
            Ok(frolicher_outcome(&analyzer.frolicher(), &analyzer))
        }
        Command::Deformations { file } => {
            let spec = load_spec(&file)?;
            let d = Analyzer::with_cap(&spec, max_n()?)?.deformations();
            let mut text = format!(
                "h^{{1,n}} = {}\nunobstructed: {}",
                d.h1n,
                if d.unobstructed { "yes" } else { "no" }
            );
            if let Some(c) = d.closed_form {
                text.push_str(&format!("\nclosed form: {c}"));
            }
            Ok(Outcome::ok(text, serde_json::to_value(&d).map_err(|e| Error::Parse(e.to_string()))?))
        }
        Command::Albanese { file } => {
            let spec = load_spec(&file)?;
            let a = Analyzer::with_cap(&spec, max_n()?)?.albanese();
            Ok(Outcome::ok(
                format!("h^{{1,0}} = {}\nalbanese map is the projection: {}", a.h10, a.albanese_is_projection),
                json!({ "h10": a.h10, "albanese_is_projection": a.albanese_is_projection.to_string() }),
            ))
        }
        Command::Pkahler { file, p } => pkahler(&load_spec(&file)?, p),
        Command::Kodaira { file } => {
            let k = kodaira_dimension(&load_spec(&file)?)?;
            Ok(Outcome::ok(k.to_string(), json!({ "kodaira_dimension": k })))
        }
        Command::Characters { file } => {
            let spec = load_spec(&file)?;
            characters(&Analyzer::with_cap(&spec, max_n()?)?.admissible_characters())
        }
        Command::Generators { file, p, q } => {
            let spec = load_spec(&file)?;
            Analyzer::with_cap(&spec, max_n()?)?;
            let gens = dolbeault_generators(&spec, p, q)?;
            let n = spec.n();
            let text: Vec<String> = gens.iter().map(|g| g.to_form(n).to_string()).collect();
            let json: Vec<Value> = gens
                .iter()
                .map(|g| {
                    json!({
                        "family": g.family,
                        "I": indices_json(g.i),
                        "J": indices_json(g.j),
                        "character": g.character,
                        "form": g.to_form(n).to_string(),
                    })
                })
                .collect();
            Ok(Outcome::ok(
                format!("{} generators\n{}", gens.len(), text.join("\n")).trim_end().to_string(),
                json!({ "p": p, "q": q, "generators": json }),
            ))
        }
        Command::Construct { matrix, emit_spec } => {
            let lattice = LatticeSpec::new(parse_matrix(&matrix)?);
            let report = analyze_lattice(&lattice)?;
            let spec = ManifoldSpec {
                lambda: LambdaSpec::new(report.basis_dim, report.lambdas.clone()),
                tau: TauSpec::Generic,
                lattice: Some(lattice),
            };
            spec.require_valid()?;
            let doc = SpecDocument::from_spec(&spec);
            let doc_json = serde_json::to_value(&doc).map_err(|e| Error::Parse(e.to_string()))?;
            if emit_spec {
                let text = serde_json::to_string_pretty(&doc_json).map_err(|e| Error::Parse(e.to_string()))?;
                return Ok(Outcome::ok(text, doc_json));
            }
            let report_json = serde_json::to_value(&report).map_err(|e| Error::Parse(e.to_string()))?;
            Ok(Outcome::ok(report.to_string(), json!({ "report": report_json, "spec": doc_json })))
        }
        Command::Tau(t) => tau(t),
        Command::Aut(a) => aut(a),
    }
}

fn validate(file: &Path) -> Result<Outcome> {
    let doc = load_document(file)?;
    let spec = match doc.into_spec() {
        Ok(s) => s,
        Err(Error::InvalidSpec(v)) => {
            return Ok(Outcome {
                text: v.iter().map(|m| format!("violation: {m}")).collect::<Vec<_>>().join("\n"),
                json: json!({ "valid": false, "violations": v, "warnings": [] }),
                code: 1,
            })
        }
        Err(e) => return Err(e),
    };
    let report = validate_spec(&spec);
    let mut lines: Vec<String> = report.violations.iter().map(|v| format!("violation: {v}")).collect();
    lines.extend(report.warnings.iter().map(|w| format!("warning: {w}")));
    if report.is_valid() {
        lines.insert(0, "valid".into());
    }
    Ok(Outcome {
        text: lines.join("\n"),
        json: json!({
            "valid": report.is_valid(),
            "violations": report.violations.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "warnings": report.warnings,
        }),
        code: if report.is_valid() { 0 } else { 1 },
    })
}

fn pkahler(spec: &ManifoldSpec, p: usize) -> Result<Outcome> {
    let r = pkahler_status(spec, p)?;
    let verdict = match r.verdict {
        PKahlerVerdict::PKahler => "p-Kahler",
        PKahlerVerdict::NotPKahler => "not p-Kahler",
        PKahlerVerdict::TorusAllP => "p-Kahler (torus)",
    };
    let (detail, witness) = match &r.witness {
        PKahlerWitness::Exact {
            indices,
            theta,
            theta_wedge_conj,
            eta,
            kappa,
            i_power,
            p,
        } => (
            format!(
                "theta = {theta}, I = {indices}\n\
                 i^{i_power} 2^-{p} theta^conj(theta) = d(i^{i_power} 2^-{p} eta / kappa)\n\
                 eta = {eta}\nkappa = {kappa}"
            ),
            json!({
                "kind": "exact",
                "I": indices_json(*indices),
                "theta": theta.to_string(),
                "theta_wedge_conj": theta_wedge_conj.to_string(),
                "eta": eta.to_string(),
                "kappa": kappa.to_string(),
                "i_power": i_power,
                "two_power": -(*p as i64),
            }),
        ),
        PKahlerWitness::Closed { form } => (
            format!("closed transverse form: {form}"),
            json!({ "kind": "closed", "form": form.to_string() }),
        ),
    };
    Ok(Outcome::ok(
        format!("p = {}: {verdict}\n{detail}", r.p),
        json!({ "p": r.p, "verdict": r.verdict, "witness": witness }),
    ))
}

fn characters(c: &AdmissibleCharacters) -> Result<Outcome> {
    Ok(match c {
        AdmissibleCharacters::ZeroOnly => Outcome::ok(
            "only the zero character is admissible",
            json!({ "kind": "zero_only" }),
        ),
        AdmissibleCharacters::Cyclic { c_ref, gcd, realized } => {
            let mut lines = vec![format!("admissible characters m * {c_ref} / {gcd}:")];
            let mut rows = Vec::new();
            for r in realized {
                lines.push(format!(
                    "m = {}: c = {}, witness I={} J={}",
                    r.m, r.character, r.witness_i, r.witness_j
                ));
                rows.push(json!({
                    "m": r.m.to_string(),
                    "character": r.character,
                    "I": indices_json(r.witness_i),
                    "J": indices_json(r.witness_j),
                }));
            }
            Outcome::ok(
                lines.join("\n"),
                json!({ "kind": "cyclic", "c_ref": c_ref, "gcd": gcd.to_string(), "realized": rows }),
            )
        }
    })
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Parse(e.to_string()))
}

fn tau(cmd: TauCommand) -> Result<Outcome> {
    match cmd {
        TauCommand::Canonical { c, h, k } => {
            let t = canonical_triple(&parse_triple(&c, h, k)?)?;
            Ok(Outcome::ok(t.to_string(), to_json(&t)?))
        }
        TauCommand::Same { c1, h1, k1, c2, h2, k2 } => {
            let same = same_fiber(&parse_triple(&c1, h1, k1)?, &parse_triple(&c2, h2, k2)?);
            Ok(Outcome::ok(same.to_string(), json!({ "same": same })))
        }
        TauCommand::FromTriple { c, h, k } => {
            let spec = tau_from_triple(&parse_triple(&c, h, k)?)?;
            let doc = TauDocument::from(&spec);
            let text = serde_json::to_string(&doc).map_err(|e| Error::Parse(e.to_string()))?;
            Ok(Outcome::ok(text, to_json(&doc)?))
        }
    }
}

fn aut(cmd: AutCommand) -> Result<Outcome> {
    match cmd {
        AutCommand::Verify { file, candidate } => {
            let spec = load_spec(&file)?;
            let text = read(&candidate)?;
            let c: AutCandidate = serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("{}: {e}", candidate.display())))?;
            let violations = verify_candidate(&spec, &c)?;
            let lines: Vec<String> = violations.iter().map(ToString::to_string).collect();
            Ok(Outcome {
                text: if lines.is_empty() { "OK".into() } else { lines.join("\n") },
                json: json!({ "ok": lines.is_empty(), "violations": violations }),
                code: if lines.is_empty() { 0 } else { 1 },
            })
        }
        AutCommand::Search { file, t, bound } => {
            let spec = load_spec(&file)?;
            let found = commutant_search(&spec, t, bound)?;
            let rows: Vec<Value> = found.iter().map(to_json).collect::<Result<_>>()?;
            let mut lines: Vec<String> = rows.iter().map(Value::to_string).collect();
            lines.push(format!("{} matrices", found.len()));
            Ok(Outcome::ok(
                lines.join("\n"),
                json!({ "t": t, "bound": bound, "matrices": rows }),
            ))
        }
        AutCommand::Cosets { file } => {
            let g = h_coset_group(&load_spec(&file)?)?;
            let mut json = to_json(&g)?;
            json["representatives"] = to_json(
                &g.representatives()
                    .into_iter()
                    .map(crate::scalars::QVec::new)
                    .collect::<Vec<_>>(),
            )?;
            Ok(Outcome::ok(g.to_string(), json))
        }
        AutCommand::Emodes { file, t } => {
            let spec = load_spec(&file)?;
            let mut lines = Vec::new();
            let mut rows = Vec::new();
            for i in 1..=spec.n() {
                match e_mode_space(&spec, t, i)? {
                    Some((m, k)) => {
                        lines.push(format!("i = {i}: (m, k) = ({m}, {k})"));
                        rows.push(json!({ "i": i, "m": m.to_string(), "k": k.to_string() }));
                    }
                    None => {
                        lines.push(format!("i = {i}: none"));
                        rows.push(json!({ "i": i, "m": null, "k": null }));
                    }
                }
            }
            Ok(Outcome::ok(lines.join("\n"), json!({ "t": t, "modes": rows })))
        }
    }
}
