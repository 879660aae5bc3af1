//! `cl16`: command-line front end for the cirquent calculus.
//!
//! Exit codes: 0 success, 1 invalid verdict or failed check, 2 usage or
//! resource error.

mod play;

use std::io::{self, BufRead, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use cl16::calculus::{check_proof, Proof};
use cl16::harness::{exhaustive_sweep, random_cirquent_up_to, random_sweep, Alphabet, Enumerator, Finding, SweepOptions, SweepReport};
use cl16::oracle::{decide_uniform_with, OracleCaps};
use cl16::prover::{prove_with_witness, Verdict};
use cl16::purifier::purify;
use cl16::semantics::{check_legal, resolution_of, win_eval, Interpretation, Run};
use cl16::syntax::{rank_with_cap, DEFAULT_RANK_DIGIT_CAP};
use cl16::{parse, Cirquent};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::{json, Value};

use play::{PlaySession, Reply, NO_STRATEGY_BANNER};

const RANK_CAP_VAR: &str = "CL16_RANK_DIGIT_CAP";

#[derive(Parser)]
#[command(name = "cl16", version, about = "Cirquent calculus: prover, oracle, checker and play")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical form of an expression.
    Fmt { expr: String },
    /// Print the rank of an expression (digit cap from CL16_RANK_DIGIT_CAP).
    Rank { expr: String },
    /// Print the negation of an expression.
    Negate { expr: String },
    /// Check a run for legality and adjudicate it under one interpretation.
    Eval {
        expr: String,
        /// Run such as "B c2.0; T d1.0" (empty for the empty run).
        #[arg(long, allow_hyphen_values = true)]
        run: String,
        /// Interpretation such as "p=1,q=0".
        #[arg(long)]
        interp: String,
    },
    /// Decide uniform validity by brute force.
    Oracle {
        expr: String,
        /// Dump the machine's winning policy when valid.
        #[arg(long)]
        strategy: bool,
        /// Dump the environment's refutation when invalid.
        #[arg(long)]
        witness: bool,
        #[command(flatten)]
        caps: Caps,
    },
    /// Decide validity with the proof search and emit a proof.
    Prove {
        expr: String,
        /// Write the proof file here instead of printing the proof.
        #[arg(long)]
        out: Option<PathBuf>,
        /// On an invalid verdict, attach the oracle's refutation.
        #[arg(long)]
        witness: bool,
    },
    /// Check a proof file.
    Check { file: PathBuf },
    /// Purify an expression.
    Purify {
        expr: String,
        /// Print every rule application.
        #[arg(long)]
        trace: bool,
    },
    /// Compare prover and oracle on every cirquent up to a size.
    Xcheck {
        #[command(flatten)]
        alphabet: AlphabetArgs,
        /// Additionally check this many random cirquents.
        #[arg(long, default_value_t = 0)]
        random: usize,
        /// Size bound for the random sample.
        #[arg(long, default_value_t = 7)]
        random_max_nodes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also simulate every extracted policy against all environment schedules.
        #[arg(long)]
        policies: bool,
    },
    /// Play against the machine, moving for the environment.
    Play { expr: String },
    /// Enumerate cirquents, one per line.
    Gen {
        #[command(flatten)]
        alphabet: AlphabetArgs,
        /// Only cirquents with exactly --max-nodes connectives.
        #[arg(long)]
        exact: bool,
        /// Print only the number of cirquents.
        #[arg(long)]
        count: bool,
        /// Draw this many random cirquents instead of enumerating.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Stop after this many lines.
        #[arg(long)]
        limit: Option<u64>,
    },
}

#[derive(Args)]
struct AlphabetArgs {
    #[arg(long)]
    max_nodes: usize,
    /// Letters p, q, r, ... in that order.
    #[arg(long, default_value_t = 2)]
    letters: usize,
    /// Clusters d1, c1, d2, c2, ... in that order.
    #[arg(long, default_value_t = 2)]
    clusters: usize,
}

impl AlphabetArgs {
    fn alphabet(&self) -> Result<Alphabet> {
        if self.letters == 0 || self.letters > 26 {
            bail!("--letters must be between 1 and 26");
        }
        Ok(Alphabet::standard(self.letters, self.clusters))
    }
}

#[derive(Args)]
struct Caps {
    #[arg(long, default_value_t = OracleCaps::default().max_clusters)]
    max_clusters: usize,
    #[arg(long, default_value_t = OracleCaps::default().max_letters)]
    max_letters: usize,
}

/// What a subcommand produced: an exit code plus both renderings.
struct Output {
    code: u8,
    text: String,
    json: Value,
}

impl Output {
    fn ok(text: impl Into<String>, json: Value) -> Output {
        Output { code: 0, text: text.into(), json }
    }

    fn failed(text: impl Into<String>, json: Value) -> Output {
        Output { code: 1, text: text.into(), json }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(Some(out)) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("JSON values serialize"));
            } else if !out.text.is_empty() {
                println!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            if json {
                println!("{}", json!({ "error": format!("{e:#}") }));
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(2)
        }
    }
}

fn expr(text: &str) -> Result<Cirquent> {
    parse(text).with_context(|| format!("cannot parse `{text}`"))
}

/// `None` when the command already wrote its own output.
fn run(cli: Cli) -> Result<Option<Output>> {
    let json = cli.json;
    Ok(Some(match cli.command {
        Command::Fmt { expr: e } => {
            let c = expr(&e)?;
            Output::ok(c.to_string(), json!({ "expr": c.to_string(), "cirquent": c }))
        }
        Command::Negate { expr: e } => {
            let c = expr(&e)?.negate();
            Output::ok(c.to_string(), json!({ "expr": c.to_string(), "cirquent": c }))
        }
        Command::Rank { expr: e } => {
            let c = expr(&e)?;
            let cap = rank_cap()?;
            let r = rank_with_cap(&c, cap)?;
            Output::ok(r.to_string(), json!({ "rank": r.to_string() }))
        }
        Command::Eval { expr: e, run, interp } => eval(&expr(&e)?, &run, &interp)?,
        Command::Oracle { expr: e, strategy, witness, caps } => oracle(&expr(&e)?, strategy, witness, &caps)?,
        Command::Prove { expr: e, out, witness } => prove(&expr(&e)?, out, witness)?,
        Command::Check { file } => check(&file)?,
        Command::Purify { expr: e, trace } => purify_cmd(&expr(&e)?, trace),
        Command::Xcheck { alphabet, random, random_max_nodes, seed, policies } => {
            let opts = SweepOptions { check_policies: policies };
            let a = alphabet.alphabet()?;
            let mut report = exhaustive_sweep(&a, alphabet.max_nodes, opts);
            if random > 0 {
                let mut rng = StdRng::seed_from_u64(seed);
                report.merge(random_sweep(&mut rng, &a, random_max_nodes, random, opts));
            }
            sweep_output(&report)
        }
        Command::Play { expr: e } => {
            play_loop(expr(&e)?, json)?;
            return Ok(None);
        }
        Command::Gen { alphabet, exact, count, random, seed, limit } => {
            gen(&alphabet, exact, count, random, seed, limit, json)?;
            return Ok(None);
        }
    }))
}

fn rank_cap() -> Result<u64> {
    match std::env::var(RANK_CAP_VAR) {
        Ok(v) => v.trim().parse().with_context(|| format!("{RANK_CAP_VAR}=`{v}` is not a digit count")),
        Err(_) => Ok(DEFAULT_RANK_DIGIT_CAP),
    }
}

fn eval(c: &Cirquent, run: &str, interp: &str) -> Result<Output> {
    let run: Run = run.parse()?;
    let interp: Interpretation = interp.parse()?;
    if let Err(v) = check_legal(&run) {
        return Ok(Output::failed(
            format!("illegal: {v}"),
            json!({ "legal": false, "index": v.index, "condition": v.condition }),
        ));
    }
    let res = resolution_of(&run).expect("legal runs have a resolution");
    let won = win_eval(c, &res, &interp)?;
    let winner = if won { "T" } else { "B" };
    Ok(Output::ok(format!("legal; winner: {winner}"), json!({ "legal": true, "winner": winner })))
}

fn oracle(c: &Cirquent, strategy: bool, witness: bool, caps: &Caps) -> Result<Output> {
    let caps = OracleCaps { max_clusters: caps.max_clusters, max_letters: caps.max_letters };
    let d = decide_uniform_with(c, caps)?;
    let mut text = String::from(if d.valid { "VALID" } else { "INVALID" });
    let mut j = json!({ "valid": d.valid });
    if strategy {
        if let Some(p) = &d.policy {
            text.push('\n');
            text.push_str(&p.dump());
            j["policy"] = json!(p.dump().lines().collect::<Vec<_>>());
        }
    }
    if witness {
        if let Some(r) = &d.refutation {
            text.push('\n');
            text.push_str(&r.dump());
            j["refutation"] = json!(r.dump().lines().collect::<Vec<_>>());
        }
    }
    Ok(Output { code: if d.valid { 0 } else { 1 }, text, json: j })
}

fn prove(c: &Cirquent, out: Option<PathBuf>, witness: bool) -> Result<Output> {
    let verdict = if witness { prove_with_witness(c, OracleCaps::default()) } else { cl16::prover::prove(c) };
    match verdict {
        Verdict::Valid { proof } => {
            let mut j = json!({ "valid": true, "lines": proof.len() });
            let text = match out {
                Some(path) => {
                    std::fs::write(&path, proof.to_json() + "\n")
                        .with_context(|| format!("cannot write {}", path.display()))?;
                    j["file"] = json!(path.display().to_string());
                    format!("VALID\nproof of {} lines written to {}", proof.len(), path.display())
                }
                None => {
                    j["proof"] = proof.to_json_value();
                    format!("VALID\n{proof}")
                }
            };
            Ok(Output::ok(text.trim_end().to_string(), j))
        }
        Verdict::Invalid { reason, witness } => {
            let mut text = format!("INVALID: {reason}");
            let mut j = json!({ "valid": false, "reason": reason.to_string() });
            if let Some(w) = witness {
                text.push('\n');
                text.push_str(&w.dump());
                j["refutation"] = json!(w.dump().lines().collect::<Vec<_>>());
            }
            Ok(Output::failed(text, j))
        }
    }
}

fn check(file: &PathBuf) -> Result<Output> {
    let text = std::fs::read_to_string(file).with_context(|| format!("cannot read {}", file.display()))?;
    let proof = match Proof::from_json(&text) {
        Ok(p) => p,
        Err(e) => return Ok(Output::failed(format!("FAIL: {e}"), json!({ "ok": false, "error": e.to_string() }))),
    };
    Ok(match check_proof(&proof) {
        Ok(conclusion) => Output::ok(
            format!("OK\n{conclusion}"),
            json!({ "ok": true, "conclusion": conclusion.to_string(), "lines": proof.len() }),
        ),
        Err(e) => Output::failed(
            format!("FAIL {e}"),
            json!({ "ok": false, "line": e.line, "error": e.reason.to_string() }),
        ),
    })
}

fn purify_cmd(c: &Cirquent, trace: bool) -> Output {
    let p = purify(c);
    let mut text = String::new();
    let mut steps = Vec::new();
    if trace {
        for s in &p.trace {
            text.push_str(&format!("{s}\n"));
            steps.push(json!({
                "stage": s.stage,
                "iteration": s.iteration,
                "rule": s.descriptor.to_string(),
                "before": s.before.to_string(),
                "after": s.after.to_string(),
            }));
        }
    }
    text.push_str(&p.output.to_string());
    let mut j = json!({ "output": p.output.to_string(), "steps": p.trace.len() });
    if trace {
        j["trace"] = Value::Array(steps);
    }
    Output::ok(text, j)
}

fn describe(f: &Finding) -> String {
    match f {
        Finding::Disagreement { cirquent, prover, oracle } => {
            format!("disagreement on {cirquent}: prover {prover}, oracle {oracle}")
        }
        Finding::BadProof { cirquent, error } => format!("bad proof for {cirquent}: {error}"),
        Finding::WrongConclusion { cirquent, concluded } => {
            format!("proof for {cirquent} concludes {concluded}")
        }
        Finding::UnsoundPolicy { cirquent, detail } => format!("unsound policy for {cirquent}: {detail}"),
        Finding::OracleRefused { cirquent, detail } => format!("oracle refused {cirquent}: {detail}"),
    }
}

fn sweep_output(r: &SweepReport) -> Output {
    let agreement =
        if r.all_agree() { "100%".to_string() } else { format!("{:.4}%", r.agreement_percent()) };
    let findings: Vec<String> = r.findings.iter().map(describe).collect();
    let mut text = format!(
        "checked: {}\nvalid: {}\nproofs checked: {}\npolicies checked: {}\nagreement: {agreement}\ncounterexamples: {}",
        r.checked,
        r.valid,
        r.proofs_checked,
        r.policies_checked,
        r.disagreements + r.proof_failures + r.policy_failures + r.oracle_refusals,
    );
    for f in &findings {
        text.push_str("\n  ");
        text.push_str(f);
    }
    let j = json!({
        "checked": r.checked,
        "valid": r.valid,
        "agreements": r.agreements,
        "proofs_checked": r.proofs_checked,
        "policies_checked": r.policies_checked,
        "disagreements": r.disagreements,
        "proof_failures": r.proof_failures,
        "policy_failures": r.policy_failures,
        "oracle_refusals": r.oracle_refusals,
        "agreement": agreement,
        "counterexamples": findings,
    });
    Output { code: if r.clean() { 0 } else { 1 }, text, json: j }
}

fn play_loop(c: Cirquent, json: bool) -> Result<()> {
    let mut session = PlaySession::new(c)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let emit = |out: &mut io::StdoutLock, text: String, j: Value| -> io::Result<()> {
        if json {
            writeln!(out, "{j}")
        } else {
            writeln!(out, "{text}")
        }
    };
    let mut banner = format!("playing {}; you move for B: c<n>=0|1, pass, state, end", session.cirquent);
    if !session.has_winning_strategy() {
        banner = format!("{banner}\n{NO_STRATEGY_BANNER}");
    }
    emit(&mut out, banner, json!({ "cirquent": session.cirquent.to_string(), "winning_strategy": session.has_winning_strategy() }))?;
    let first = session.machine_turn();
    if !first.is_empty() {
        emit(&mut out, render_moves(&first), json!({ "machine": render_moves(&first).lines().collect::<Vec<_>>() }))?;
    }
    let mut ended = false;
    for line in io::stdin().lock().lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match session.step(&line) {
            Ok(Reply::Moves(moves)) => {
                let text = render_moves(&moves);
                emit(&mut out, if moves.is_empty() { "T waits".into() } else { text.clone() }, json!({ "machine": text.lines().collect::<Vec<_>>() }))?;
            }
            Ok(Reply::State(text)) => emit(&mut out, text.clone(), json!({ "state": text }))?,
            Ok(Reply::Ended(text)) => {
                emit(&mut out, text.clone(), json!({ "verdict": text.lines().collect::<Vec<_>>() }))?;
                ended = true;
                break;
            }
            Err(msg) => emit(&mut out, format!("rejected: {msg}"), json!({ "rejected": msg }))?,
        }
    }
    if !ended {
        let text = session.adjudicate();
        emit(&mut out, text.clone(), json!({ "verdict": text.lines().collect::<Vec<_>>() }))?;
    }
    Ok(())
}

fn render_moves(moves: &[(cl16::ClusterId, cl16::Side)]) -> String {
    moves.iter().map(|(c, s)| format!("{c}.{s}")).collect::<Vec<_>>().join("\n")
}

fn gen(
    args: &AlphabetArgs,
    exact: bool,
    count: bool,
    random: Option<usize>,
    seed: u64,
    limit: Option<u64>,
    json: bool,
) -> Result<()> {
    let a = args.alphabet()?;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    if count {
        let n = if exact { a.count_exact(args.max_nodes) } else { a.count_up_to(args.max_nodes) };
        writeln!(out, "{n}")?;
        return Ok(());
    }
    let limit = limit.unwrap_or(u64::MAX);
    let mut written = 0u64;
    let mut result = Ok(());
    let mut emit = |c: Cirquent| {
        if written >= limit || result.is_err() {
            return;
        }
        written += 1;
        result = if json {
            serde_json::to_writer(&mut out, &c).map_err(io::Error::from).and_then(|_| writeln!(out))
        } else {
            writeln!(out, "{c}")
        };
    };
    match random {
        Some(samples) => {
            let mut rng = StdRng::seed_from_u64(seed);
            for _ in 0..samples {
                emit(random_cirquent_up_to(&mut rng, &a, args.max_nodes));
            }
        }
        None => {
            let e = Enumerator::new(&a, args.max_nodes);
            if exact {
                e.for_each_exact(args.max_nodes, &mut emit);
            } else {
                e.for_each_up_to(args.max_nodes, &mut emit);
            }
        }
    }
    match result {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}
