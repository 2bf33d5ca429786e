use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use khoveq::complex::{build_complex, max_crossings, verify_delta_squared, verify_grading, ComplexRepr, Cube};
use khoveq::conditions::{brute_force, full_report};
use khoveq::corpus;
use khoveq::diagram::{find_move_sites, parse_pd, random_move_sequence, LinkDiagram, MoveKind};
use khoveq::frobenius::FrobeniusCalculus;
use khoveq::homology::homology_at;
use khoveq::invariants::{bracket_side, euler_side, graded_euler, kauffman_bracket};
use khoveq::moves::{verify_invariance, verify_move};
use khoveq::polyring::Specialization;
use khoveq::{Error, Result};

#[derive(Parser)]
#[command(name = "khoveq", version, about = "Khovanov-type homology under the universal differential over Z[s,t]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Homology at a specialization of s and t.
    Homology(HomologyArgs),
    /// Chain-level verification.
    #[command(subcommand)]
    Verify(Verify),
    /// Decide the invariance conditions for a Frobenius calculus.
    CheckCalculus(CalculusArgs),
    /// Graded Euler characteristic, checked against the Kauffman bracket.
    Jones(DiagramArgs),
    /// Parse a diagram and print its data.
    Parse(DiagramArgs),
}

#[derive(Subcommand)]
enum Verify {
    /// δ² = 0 over Z[s,t] on every generator.
    DeltaSquared(DiagramArgs),
    /// Every matrix entry s^a t^b has Δi = 1 and Δj = 2a + 4b.
    Grading(DiagramArgs),
    /// Retraction and homotopy identities at every removal site of one move type.
    Move(MoveArgs),
    /// Homology before and after each step of a seeded random move sequence.
    Invariance(InvarianceArgs),
}

#[derive(Args)]
struct Common {
    /// PD file, corpus name or inline PD text.
    #[arg(long)]
    pd: String,
    /// Calculus JSON file; the universal calculus if absent.
    #[arg(long)]
    calculus: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DiagramArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum Ring {
    Z,
    Mod2,
    Mod2poly,
}

#[derive(Args, Clone)]
struct SpecArgs {
    /// Value of s: an integer, or `s` to keep it symbolic over Z/2[s].
    #[arg(long)]
    s: Option<String>,
    #[arg(long)]
    t: Option<String>,
    #[arg(long, value_enum)]
    ring: Option<Ring>,
}

#[derive(Args)]
struct HomologyArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    spec: SpecArgs,
    /// Split by quantum degree; needs s = t = 0.
    #[arg(long)]
    bigraded: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum MoveType {
    R1,
    R2,
    R3,
}

#[derive(Args)]
struct MoveArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long = "type", value_enum)]
    kind: MoveType,
}

#[derive(Args)]
struct InvarianceArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    spec: SpecArgs,
    /// `random:N` for N seeded random moves.
    #[arg(long, default_value = "random:5")]
    moves: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct CalculusArgs {
    #[arg(long)]
    calculus: Option<PathBuf>,
    /// Also compare homology across actual moves.
    #[arg(long)]
    brute_force: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load_diagram(arg: &str) -> Result<LinkDiagram> {
    if Path::new(arg).is_file() {
        let text = fs::read_to_string(arg).map_err(|e| Error::Format(format!("{arg}: {e}")))?;
        return parse_pd(&text);
    }
    match corpus::get(arg) {
        Some(d) => Ok(d),
        None => parse_pd(arg),
    }
}

fn load_calculus(path: &Option<PathBuf>) -> Result<FrobeniusCalculus> {
    match path {
        None => Ok(FrobeniusCalculus::universal()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Error::Format(format!("{}: {e}", p.display())))?;
            FrobeniusCalculus::load(&text)
        }
    }
}

fn int_arg(v: &Option<String>, name: &str) -> Result<i64> {
    match v {
        None => Ok(0),
        Some(x) => x.parse().map_err(|_| Error::Format(format!("--{name} expects an integer, got {x:?}"))),
    }
}

fn specialization(a: &SpecArgs) -> Result<Specialization> {
    match a.ring.unwrap_or(Ring::Z) {
        Ring::Z => Ok(Specialization::Integers { s: int_arg(&a.s, "s")?.into(), t: int_arg(&a.t, "t")?.into() }),
        Ring::Mod2 => {
            let bit = |v: i64, n: &str| match v {
                0 | 1 => Ok(v == 1),
                _ => Err(Error::Format(format!("--{n} must be 0 or 1 over Z/2"))),
            };
            Ok(Specialization::Mod2 { s: bit(int_arg(&a.s, "s")?, "s")?, t: bit(int_arg(&a.t, "t")?, "t")? })
        }
        Ring::Mod2poly => {
            if a.s.as_deref().is_some_and(|s| s != "s") || int_arg(&a.t, "t")? != 0 {
                return Err(Error::Format("mod2poly keeps s symbolic and needs --t 0".into()));
            }
            Ok(Specialization::Mod2Poly)
        }
    }
}

fn cmd_homology(a: &HomologyArgs) -> Result<(Value, bool)> {
    let d = load_diagram(&a.common.pd)?;
    let calc = load_calculus(&a.common.calculus)?;
    let sp = specialization(&a.spec)?;
    let cx = build_complex(&d, &calc)?;
    let h = homology_at(&cx, &sp, a.bigraded)?;
    let mut v = h.to_json();
    v["diagram"] = json!(d.to_pd_string());
    v["bigraded"] = json!(a.bigraded);
    v["total_rank"] = json!(h.total_rank());
    Ok((v, true))
}

fn cmd_verify(v: &Verify) -> Result<(Value, bool)> {
    match v {
        Verify::DeltaSquared(a) | Verify::Grading(a) => {
            let d = load_diagram(&a.common.pd)?;
            let cx = build_complex(&d, &load_calculus(&a.common.calculus)?)?;
            let r = if matches!(v, Verify::DeltaSquared(_)) { verify_delta_squared(&cx) } else { verify_grading(&cx) };
            let mut out = r.to_json();
            out["diagram"] = json!(d.to_pd_string());
            Ok((out, r.ok))
        }
        Verify::Move(a) => cmd_verify_move(a),
        Verify::Invariance(a) => cmd_invariance(a),
    }
}

fn cmd_verify_move(a: &MoveArgs) -> Result<(Value, bool)> {
    let d = load_diagram(&a.common.pd)?;
    let calc = load_calculus(&a.common.calculus)?;
    let kind = match a.kind {
        MoveType::R1 => MoveKind::R1,
        MoveType::R2 => MoveKind::R2,
        MoveType::R3 => MoveKind::R3,
    };
    let sites = find_move_sites(&d, kind);
    if sites.is_empty() {
        return Err(Error::Move(format!("no {kind} site in {}", d.to_pd_string())));
    }
    let mut reports = Vec::new();
    let mut ok = true;
    let mut verified = 0;
    for site in &sites {
        match verify_move(&d, site, &calc) {
            Ok(rs) => {
                for r in rs {
                    ok &= r.ok();
                    verified += 1;
                    reports.push(r.to_json());
                }
            }
            Err(Error::Unsupported(msg)) => {
                reports.push(json!({"site": site.to_json(), "status": "unsupported", "reason": msg}))
            }
            Err(e) => return Err(e),
        }
    }
    if verified == 0 {
        return Err(Error::Unsupported(format!("every {kind} site of this diagram is unsupported")));
    }
    let out = json!({"diagram": d.to_pd_string(), "move": kind.to_string(), "status": if ok { "pass" } else { "fail" }, "sites": reports});
    Ok((out, ok))
}

fn cmd_invariance(a: &InvarianceArgs) -> Result<(Value, bool)> {
    let d = load_diagram(&a.common.pd)?;
    let calc = load_calculus(&a.common.calculus)?;
    let steps: usize = a
        .moves
        .strip_prefix("random:")
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| Error::Format(format!("--moves expects random:N, got {:?}", a.moves)))?;
    let specs = if a.spec.s.is_none() && a.spec.t.is_none() && a.spec.ring.is_none() {
        vec![Specialization::khovanov(), Specialization::lee(), Specialization::khovanov_mod2()]
    } else {
        vec![specialization(&a.spec)?]
    };
    let cap = (d.n_crossings() + 4).min(max_crossings());
    let plan = random_move_sequence(&d, steps, a.seed, cap);
    let moves: Vec<_> = plan.iter().map(|p| (p.site.clone(), p.direction)).collect();
    let r = verify_invariance(&d, &moves, &calc, &specs)?;
    let mut out = r.to_json();
    out["diagram"] = json!(d.to_pd_string());
    out["seed"] = json!(a.seed);
    out["specializations"] = json!(specs.iter().map(Specialization::label).collect::<Vec<_>>());
    Ok((out, r.ok()))
}

fn cmd_check_calculus(a: &CalculusArgs) -> Result<(Value, bool)> {
    let calc = load_calculus(&a.calculus)?;
    let ds: Vec<(String, LinkDiagram)> = corpus::all().into_iter().map(|(n, d)| (n.to_string(), d)).collect();
    let r = full_report(&calc, &ds)?;
    let mut out = r.to_json();
    out["calculus"] = calc.to_json();
    let mut ok = r.ok();
    if a.brute_force {
        let b = brute_force(&calc)?;
        let agree =
            b.r1() == (r.verdict_r1 && r.delta_squared_ok()) && b.r23() == (r.verdict_r23 && r.delta_squared_ok());
        out["brute_force"] = b.to_json();
        out["brute_force"]["agrees"] = json!(agree);
        ok &= agree;
    }
    Ok((out, ok))
}

fn cmd_jones(a: &DiagramArgs) -> Result<(Value, bool)> {
    let d = load_diagram(&a.common.pd)?;
    let cx = ComplexRepr::from_cube(Cube::new(&d, &FrobeniusCalculus::universal())?);
    let chi = graded_euler(&cx);
    let ok = euler_side(&cx) == bracket_side(&d);
    let out = json!({
        "diagram": d.to_pd_string(),
        "euler": chi.to_json(),
        "text": chi.to_string(),
        "bracket": kauffman_bracket(&d).to_json(),
        "identity": "euler_bracket",
        "status": if ok { "pass" } else { "fail" },
    });
    Ok((out, ok))
}

fn run(cli: &Cli) -> Result<(Value, bool, Option<PathBuf>)> {
    let (v, ok) = match &cli.command {
        Command::Homology(a) => cmd_homology(a)?,
        Command::Verify(v) => cmd_verify(v)?,
        Command::CheckCalculus(a) => cmd_check_calculus(a)?,
        Command::Jones(a) => cmd_jones(a)?,
        Command::Parse(a) => (load_diagram(&a.common.pd)?.to_json(), true),
    };
    let out = match &cli.command {
        Command::Homology(a) => a.common.out.clone(),
        Command::Verify(Verify::DeltaSquared(a) | Verify::Grading(a)) => a.common.out.clone(),
        Command::Verify(Verify::Move(a)) => a.common.out.clone(),
        Command::Verify(Verify::Invariance(a)) => a.common.out.clone(),
        Command::CheckCalculus(a) => a.out.clone(),
        Command::Jones(a) | Command::Parse(a) => a.common.out.clone(),
    };
    Ok((v, ok, out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((v, ok, out)) => {
            let text = serde_json::to_string_pretty(&v).expect("serializable") + "\n";
            match out {
                Some(p) => {
                    if let Err(e) = fs::write(&p, text) {
                        eprintln!("{}", json!({"error": format!("{}: {e}", p.display())}));
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{}", json!({"error": e.to_string()}));
            ExitCode::from(2)
        }
    }
}
