//! `projcalc`: infer classes and levels, check derivations, run the
//! finite-model oracles and solve finite games.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use projcalc::derivation::{self, check};
use projcalc::expr::{self, Environment};
use projcalc::finite_model::{
    check_identity, run_suite, FiniteModel, Identity, IdentityCase, Params, Verdict,
};
use projcalc::games::{self, FiniteGame, GameError};
use projcalc::infer::{run_program, AxiomMode};

const SCHEMA: &str = "projcalc/1";

#[derive(Parser)]
#[command(name = "projcalc", version, about = "Projective-hierarchy class and level inference")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Infer every binding of a .pjc program and evaluate its assertions.
    Infer {
        program: PathBuf,
        /// Run under ZFC + PD instead of plain ZFC.
        #[arg(long)]
        assume_pd: bool,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
        /// Write one .pjd file per derivation into this directory.
        #[arg(long, value_name = "DIR")]
        emit_derivations: Option<PathBuf>,
    },
    /// Check a .pjd derivation against a program's declarations.
    Check { derivation: PathBuf, program: PathBuf },
    /// Run randomized identity oracles, or one identity on a .pjm model.
    Oracle {
        /// An identity id such as SUM-PRE, or "all".
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: u64,
        /// Check this model instead of random ones.
        #[arg(long, value_name = "FILE")]
        model: Option<PathBuf>,
        #[arg(long)]
        c: Option<String>,
        #[arg(long)]
        r: Option<String>,
        #[arg(long)]
        eps: Option<String>,
        #[arg(long)]
        d: Option<String>,
    },
    /// Solve a .pjg finite game.
    Game {
        game: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print a program in canonical form.
    Fmt {
        program: PathBuf,
        /// Exit 1 instead of printing when the file is not canonical.
        #[arg(long)]
        check: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Infer { program, assume_pd, json, emit_derivations } => {
            cmd_infer(&program, assume_pd, json, emit_derivations.as_deref())
        }
        Command::Check { derivation, program } => cmd_check(&derivation, &program),
        Command::Oracle { suite, seed, count, model, c, r, eps, d } => match model {
            Some(path) => cmd_oracle_model(&suite, &path, Params { c: None, r: None, eps: None, d }, [c, r, eps]),
            None => cmd_oracle(&suite, seed, count),
        },
        Command::Game { game, json } => cmd_game(&game, json),
        Command::Fmt { program, check } => cmd_fmt(&program, check),
    };
    ExitCode::from(code)
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("report serializes"));
}

fn cmd_infer(path: &Path, assume_pd: bool, as_json: bool, emit: Option<&Path>) -> u8 {
    let text = match read(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let program = match expr::parse(&text) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{}:{e}", path.display());
            return 2;
        }
    };
    let mode = if assume_pd { AxiomMode::ZfcPd } else { AxiomMode::Zfc };
    let report = match run_program(&program, mode) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            return 2;
        }
    };

    let mut written = Vec::new();
    if let Some(dir) = emit {
        if let Err(e) = fs::create_dir_all(dir) {
            eprintln!("error: {}: {e}", dir.display());
            return 2;
        }
        for (name, d) in report.derivations() {
            let file = dir.join(format!("{name}.pjd"));
            if let Err(e) = fs::write(&file, derivation::serialize(d)) {
                eprintln!("error: {}: {e}", file.display());
                return 2;
            }
            written.push(file.display().to_string());
        }
    }

    let passed = report.all_passed();
    if as_json {
        let mut v = serde_json::to_value(&report).expect("report serializes");
        let obj = v.as_object_mut().expect("report is an object");
        obj.insert("schema".into(), json!(SCHEMA));
        obj.insert("program".into(), json!(path.display().to_string()));
        obj.insert("derivation_files".into(), json!(written));
        obj.insert("passed".into(), json!(passed));
        print_json(&v);
    } else {
        println!("mode: {mode}");
        for b in &report.bindings {
            match (&b.judgment, &b.error) {
                (Some(j), _) => println!("let {}: {j}", b.name),
                (None, Some(e)) if b.expected_failure => println!("let {}: blocked ({e})", b.name),
                (None, Some(e)) => println!("let {}: error: {e}", b.name),
                (None, None) => unreachable!("a binding has a judgment or an error"),
            }
        }
        for a in &report.assertions {
            println!("{} {}  # {}", if a.passed { "PASS" } else { "FAIL" }, a.text, a.message);
        }
        for f in &written {
            println!("wrote {f}");
        }
    }
    for b in report.bindings.iter().filter(|b| !b.passed()) {
        eprintln!("{}: let {}: {}", path.display(), b.name, b.error.as_deref().unwrap_or(""));
    }
    for a in report.assertions.iter().filter(|a| !a.passed) {
        eprintln!("{}: {}: {}", path.display(), a.text, a.message);
    }
    u8::from(!passed)
}

fn cmd_check(deriv: &Path, program: &Path) -> u8 {
    let run = || -> Result<(), String> {
        let bytes = fs::read(deriv).map_err(|e| format!("{}: {e}", deriv.display()))?;
        let d = derivation::deserialize(&bytes).map_err(|e| format!("{}: {e}", deriv.display()))?;
        let program = expr::parse(&read(program)?).map_err(|e| format!("{}:{e}", program.display()))?;
        let env = Environment::from_program(&program).map_err(|e| e.to_string())?;
        check(&d, &env).map_err(|e| e.to_string())
    };
    match run() {
        Ok(()) => {
            println!("ok");
            0
        }
        Err(e) => {
            eprintln!("{e}");
            1
        }
    }
}

fn parse_suite(suite: &str) -> Option<Vec<Identity>> {
    if suite == "all" {
        return Some(Identity::ALL.to_vec());
    }
    suite.parse().ok().map(|i| vec![i])
}

fn cmd_oracle(suite: &str, seed: u64, count: u64) -> u8 {
    let Some(ids) = parse_suite(suite) else {
        eprintln!("unknown suite `{suite}`; expected an identity id or \"all\"");
        return 2;
    };
    let records = run_suite(&ids, seed, count);
    for r in &records {
        println!("{}", serde_json::to_string(r).expect("record serializes"));
    }
    match records.iter().find(|r| r.verdict == Verdict::Counterexample) {
        Some(first) => {
            eprintln!("counterexample: {}", serde_json::to_string(first).expect("record serializes"));
            1
        }
        None => 0,
    }
}

fn cmd_oracle_model(suite: &str, path: &Path, mut params: Params, rationals: [Option<String>; 3]) -> u8 {
    let Some(ids) = parse_suite(suite) else {
        eprintln!("unknown suite `{suite}`; expected an identity id or \"all\"");
        return 2;
    };
    let model = match read(path).map(|t| FiniteModel::from_json(&t).map_err(|e| e.to_string())) {
        Ok(Ok(m)) => m,
        Ok(Err(e)) | Err(e) => {
            eprintln!("{}: {e}", path.display());
            return 2;
        }
    };
    let [c, r, eps] = rationals;
    for (slot, text) in [(&mut params.c, c), (&mut params.r, r), (&mut params.eps, eps)] {
        if let Some(t) = text {
            match projcalc::finite_model::parse_rational(&t) {
                Some(q) => *slot = Some(q),
                None => {
                    eprintln!("not a rational: `{t}`");
                    return 2;
                }
            }
        }
    }
    let mut failed = false;
    for identity in ids {
        let case = IdentityCase { identity, model: model.clone(), params: params.clone() };
        let line = match check_identity(&case) {
            Ok(()) => json!({"identity": identity, "model": path.display().to_string(), "verdict": "ok"}),
            Err(cx) => {
                failed = true;
                json!({"identity": identity, "model": path.display().to_string(), "verdict": "counterexample",
                       "witness": cx.witness, "detail": cx.detail})
            }
        };
        println!("{line}");
    }
    u8::from(failed)
}

fn node_budget() -> Result<u64, String> {
    match std::env::var("PROJCALC_NODE_BUDGET") {
        Ok(v) => v.trim().parse().map_err(|_| format!("PROJCALC_NODE_BUDGET is not a number: `{v}`")),
        Err(_) => Ok(games::DEFAULT_NODE_BUDGET),
    }
}

fn history(h: &[u32]) -> String {
    let moves: Vec<String> = h.iter().map(u32::to_string).collect();
    format!("({})", moves.join(","))
}

fn cmd_game(path: &Path, as_json: bool) -> u8 {
    let game = match read(path).and_then(|t| FiniteGame::from_json(&t).map_err(|e| e.to_string())) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            return 2;
        }
    };
    let budget = match node_budget() {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let sol = match games::solve_with_budget(&game, budget) {
        Ok(s) => s,
        Err(e @ GameError::ResourceLimit { .. }) => {
            eprintln!("{}: {e}", path.display());
            return 3;
        }
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            return 2;
        }
    };
    if as_json {
        let strategy: Vec<Value> =
            sol.strategy.moves.iter().map(|(h, m)| json!({"history": h, "move": m})).collect();
        print_json(&json!({
            "schema": SCHEMA,
            "game": path.display().to_string(),
            "k": game.k(),
            "N": game.horizon(),
            "winner": sol.winner,
            "nodes": sol.nodes,
            "strategy": strategy,
        }));
    } else {
        println!("winner: {}", sol.winner);
        println!("strategy for {} ({} histories):", sol.winner, sol.strategy.moves.len());
        for (h, m) in &sol.strategy.moves {
            println!("  {} -> {m}", history(h));
        }
    }
    0
}

fn cmd_fmt(path: &Path, check_only: bool) -> u8 {
    let text = match read(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    match expr::parse(&text) {
        Ok(p) => {
            let out = expr::format(&p);
            if check_only {
                if out == text {
                    0
                } else {
                    eprintln!("{}: not in canonical form", path.display());
                    1
                }
            } else {
                print!("{out}");
                0
            }
        }
        Err(e) => {
            eprintln!("{}:{e}", path.display());
            2
        }
    }
}
