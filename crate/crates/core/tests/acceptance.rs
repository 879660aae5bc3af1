//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runs as a plain binary so the report is always shown.

mod common;

use std::time::{Duration, Instant};

use cl16::calculus::{check_proof, premises_of, CheckFailure, Proof, Rule, RuleDescriptor};
use cl16::harness::{exhaustive_sweep, random_sweep, Alphabet, Enumerator, SweepOptions, SweepReport};
use cl16::oracle::decide_uniform;
use cl16::prover::{derivation_from_trace, prove, Verdict};
use cl16::purifier::{is_pure, purify};
use cl16::semantics::{win_eval, Interpretation, ResolutionMap};
use cl16::syntax::{parse, rank, Cirquent, ClusterId, Letter, Side};
use common::{application_alphabet, is_tautology, random_application, reference_pure, rng};

const GOLDEN_LIMIT: Duration = Duration::from_secs(1);
const SWEEP_LIMIT: Duration = Duration::from_secs(300);
const IDENTITY_LIMIT: Duration = Duration::from_secs(60);
const PURIFY_LIMIT: Duration = Duration::from_secs(60);
const PRESERVATION_LIMIT: Duration = Duration::from_secs(120);
const POLICY_LIMIT: Duration = Duration::from_secs(120);
const CLASSICAL_LIMIT: Duration = Duration::from_secs(10);

const SWEEP_MAX_NODES: usize = 4;
const RANDOM_SAMPLES: usize = 10_000;
const RANDOM_MAX_NODES: usize = 7;
const IDENTITY_APPLICATIONS: usize = 200;
const PURIFY_INPUTS: usize = 500;
const PURIFY_MAX_NODES: usize = 7;
const PRESERVATION_SAMPLES: usize = 100;
const PRESERVATION_ATTEMPTS: usize = 50_000;
const CLASSICAL_MAX_NODES: usize = 4;

struct Outcome {
    id: u8,
    title: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn report(id: u8, title: &'static str, pass: bool, detail: String, elapsed: Duration, limit: Duration) -> Outcome {
    let in_time = elapsed <= limit;
    let detail = if in_time { detail } else { format!("{detail}; over the {limit:?} limit") };
    Outcome { id, title, pass: pass && in_time, detail, elapsed }
}

fn golden() -> Outcome {
    let start = Instant::now();
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/golden_choice_distribution.json");
    let text = std::fs::read_to_string(path).expect("golden proof file");
    let proof = Proof::from_json(&text).expect("golden proof parses");
    let expected = parse("(~p | (~q *[1] ~r)) | ((p&q) +[2] (p&r))").unwrap();
    let same_as_implication = parse("p & (q +[1] r) -> (p&q) +[2] (p&r)").unwrap() == expected;
    let verdict = check_proof(&proof);
    let lines_ok = (27..=32).contains(&proof.len());

    // a checker that accepts a corrupted copy would make the above meaningless
    let corrupted = text.replacen("\"letter\": \"p\"", "\"letter\": \"q\"", 1);
    let rejects = matches!(
        check_proof(&Proof::from_json(&corrupted).unwrap()),
        Err(e) if e.line == 5 && matches!(e.reason, CheckFailure::Rule(_))
    );
    let elapsed = start.elapsed();
    let pass = verdict.as_ref().is_ok_and(|c| *c == expected) && same_as_implication && lines_ok && rejects;
    let detail = match &verdict {
        Ok(c) => format!("{} lines, conclusion `{c}`, corrupted copy rejected at line 5: {rejects}", proof.len()),
        Err(e) => format!("rejected: {e}"),
    };
    report(1, "golden proof checks", pass, detail, elapsed, GOLDEN_LIMIT)
}

fn sweep_summary(r: &SweepReport) -> String {
    let mut s = format!(
        "{} cirquents, {} valid, agreement {:.4}%, {} disagreements, {} bad proofs, {} oracle refusals",
        r.checked,
        r.valid,
        r.agreement_percent(),
        r.disagreements,
        r.proof_failures,
        r.oracle_refusals
    );
    for f in r.findings.iter().take(5) {
        s.push_str(&format!("\n        {f:?}"));
    }
    s
}

fn sweeps() -> (Outcome, Outcome) {
    let start = Instant::now();
    let alphabet = Alphabet::standard(2, 2);
    let exhaustive = exhaustive_sweep(&alphabet, SWEEP_MAX_NODES, SweepOptions { check_policies: true });
    let expected = alphabet.count_up_to(SWEEP_MAX_NODES);
    let mut r = rng(20_240_601);
    let sample = random_sweep(&mut r, &Alphabet::standard(3, 3), RANDOM_MAX_NODES, RANDOM_SAMPLES, SweepOptions::default());
    let elapsed = start.elapsed() - exhaustive.policy_time;

    let pass = exhaustive.all_agree() && sample.all_agree() && exhaustive.checked as u128 == expected;
    let detail = format!(
        "exhaustive (<= {SWEEP_MAX_NODES} nodes, p q, d1 c1): {}\n      random (<= {RANDOM_MAX_NODES} nodes, 3 letters, 3 clusters): {}",
        sweep_summary(&exhaustive),
        sweep_summary(&sample)
    );
    let differential = report(2, "prover agrees with oracle; proofs check", pass, detail, elapsed, SWEEP_LIMIT);

    let pass = exhaustive.policy_failures == 0 && exhaustive.policies_checked == exhaustive.valid;
    let detail = format!(
        "{} oracle-valid cirquents, policy simulated against every environment schedule, {} failures",
        exhaustive.policies_checked, exhaustive.policy_failures
    );
    let policy = report(7, "oracle policies win every schedule", pass, detail, exhaustive.policy_time, POLICY_LIMIT);
    (differential, policy)
}

/// Resolution of the premise matching `res` on the conclusion's side: the
/// fresh cluster follows whichever of the two original choices was resolved.
fn quadrilemma_extension(res: &ResolutionMap, a: ClusterId, b: ClusterId, fresh: ClusterId) -> ResolutionMap {
    if res.get(a).is_some() {
        res.with(fresh, Side::Left)
    } else if res.get(b).is_some() {
        res.with(fresh, Side::Right)
    } else {
        res.clone()
    }
}

fn quadrilemma_clusters(conclusion: &Cirquent, d: &RuleDescriptor) -> (ClusterId, ClusterId) {
    let sub = conclusion.subcirquent_at(d.path().unwrap()).unwrap();
    let (l, r) = sub.children().unwrap();
    match (&**l, &**r) {
        (Cirquent::Choice { cluster: a, .. }, Cirquent::Choice { cluster: b, .. }) => (*a, *b),
        _ => unreachable!("quadrilemma redex"),
    }
}

fn game_identity() -> Outcome {
    let start = Instant::now();
    let alphabet = application_alphabet();
    let mut r = rng(3);
    let mut mismatches = Vec::new();
    let mut arbitrary_mismatch = None;
    let mut evaluations = 0u64;
    let rules: Vec<Rule> =
        Rule::ALL.into_iter().filter(|r| !matches!(r, Rule::Splitting | Rule::Choosing)).collect();
    for &rule in &rules {
        for _ in 0..IDENTITY_APPLICATIONS {
            let (conclusion, d) = random_application(&mut r, &alphabet, rule);
            let premise = premises_of(&conclusion, &d).expect("generated application fits").remove(0);
            let fresh = match &d {
                RuleDescriptor::Quadrilemma { cluster, .. } => Some(*cluster),
                _ => None,
            };
            let mut clusters: Vec<ClusterId> = conclusion.clusters().union(&premise.clusters()).copied().collect();
            clusters.retain(|c| Some(*c) != fresh);
            let letters: Vec<Letter> = conclusion.letters().union(&premise.letters()).cloned().collect();
            assert!(clusters.len() <= 4 && letters.len() <= 4);
            let interps = Interpretation::all_over(&letters);
            for res in ResolutionMap::all_over(&clusters) {
                let res_premise = match fresh {
                    Some(c) => {
                        let (a, b) = quadrilemma_clusters(&conclusion, &d);
                        for side in [None, Some(Side::Left), Some(Side::Right)] {
                            let ext = side.map_or(res.clone(), |s| res.with(c, s));
                            for i in &interps {
                                if win_eval(&conclusion, &res, i).unwrap() != win_eval(&premise, &ext, i).unwrap()
                                    && arbitrary_mismatch.is_none()
                                {
                                    let value = side.map_or(format!("{c} unresolved"), |s| format!("{c}={s}"));
                                    arbitrary_mismatch =
                                        Some(format!("`{conclusion}` under {res} / {i} with {value}"));
                                }
                            }
                        }
                        quadrilemma_extension(&res, a, b, c)
                    }
                    None => res.clone(),
                };
                for i in &interps {
                    evaluations += 1;
                    if win_eval(&conclusion, &res, i).unwrap() != win_eval(&premise, &res_premise, i).unwrap() {
                        mismatches.push(format!("{}: `{conclusion}` vs `{premise}` under {res} / {i}", d));
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let mut detail = format!(
        "{} rules x {IDENTITY_APPLICATIONS} applications, {evaluations} evaluations, {} mismatches",
        rules.len(),
        mismatches.len()
    );
    for m in mismatches.iter().take(3) {
        detail.push_str(&format!("\n        {m}"));
    }
    detail.push_str(&format!(
        "\n      quadrilemma with an arbitrary fresh-cluster value: {}",
        arbitrary_mismatch.map_or("no mismatch found".to_string(), |m| format!("differs, e.g. {m}"))
    ));
    report(3, "non-branching rules preserve the game", mismatches.is_empty(), detail, elapsed, IDENTITY_LIMIT)
}

fn purification_inputs() -> Vec<Cirquent> {
    let alphabet = Alphabet::standard(3, 3);
    let mut r = rng(4);
    let mut out = Vec::new();
    while out.len() < PURIFY_INPUTS {
        let c = cl16::harness::random_cirquent_up_to(&mut r, &alphabet, PURIFY_MAX_NODES);
        if rank(&c).is_ok() {
            out.push(c);
        }
    }
    out
}

fn termination(inputs: &[Cirquent]) -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut iterations = 0usize;
    for c in inputs {
        let p = purify(c);
        for it in p.iterations() {
            iterations += 1;
            let decreased = match (rank(it.before), rank(it.after)) {
                (Ok(before), Ok(after)) => after < before,
                _ => false,
            };
            if !decreased {
                problems.push(format!("`{c}`: stage {} iteration {} does not lower the rank", it.stage, it.iteration));
            }
        }
        if !reference_pure(&p.output) || !is_pure(&p.output) {
            problems.push(format!("`{c}` purifies to impure `{}`", p.output));
        }
        if rank(&p.output).unwrap() > rank(c).unwrap() {
            problems.push(format!("`{c}`: output rank exceeds input rank"));
        }
    }
    let elapsed = start.elapsed();
    let mut detail = format!("{} inputs, {iterations} stage iterations, {} problems", inputs.len(), problems.len());
    for m in problems.iter().take(3) {
        detail.push_str(&format!("\n        {m}"));
    }
    report(4, "purification lowers rank and ends pure", problems.is_empty(), detail, elapsed, PURIFY_LIMIT)
}

fn replay(inputs: &[Cirquent]) -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    let (mut steps, mut full_proofs) = (0usize, 0usize);
    for c in inputs {
        let p = purify(c);
        let mut expected_before = c;
        for step in &p.trace {
            steps += 1;
            if &step.before != expected_before
                || premises_of(&step.before, &step.descriptor).ok() != Some(vec![step.after.clone()])
            {
                problems.push(format!("`{c}`: step {} does not replay", step.descriptor));
            }
            expected_before = &step.after;
        }
        if let Verdict::Valid { proof } = prove(&p.output) {
            full_proofs += 1;
            let derived = derivation_from_trace(&p.trace, proof).expect("trace ends at the output");
            if check_proof(&derived).ok().as_ref() != Some(c) {
                problems.push(format!("`{c}`: derivation from the purified proof does not check"));
            }
        }
    }
    let detail = format!(
        "{steps} trace steps replayed, {full_proofs} inputs with provable purification checked end to end, {} problems",
        problems.len()
    );
    report(5, "reversed traces are derivations", problems.is_empty(), detail, start.elapsed(), PURIFY_LIMIT)
}

fn preservation() -> Outcome {
    let start = Instant::now();
    let alphabet = application_alphabet();
    let mut r = rng(6);
    let valid = |c: &Cirquent| decide_uniform(c).expect("within caps").valid;
    let mut violations = Vec::new();
    let mut lines = Vec::new();
    let mut choosing_counterexample = None;
    let mut quotas_met = true;
    for rule in Rule::ALL {
        let (mut forward, mut backward, mut attempts) = (0usize, 0usize, 0usize);
        let wants_backward = rule != Rule::Choosing;
        while (forward < PRESERVATION_SAMPLES || (wants_backward && backward < PRESERVATION_SAMPLES))
            && attempts < PRESERVATION_ATTEMPTS
        {
            attempts += 1;
            let (conclusion, d) = random_application(&mut r, &alphabet, rule);
            let premises = premises_of(&conclusion, &d).expect("generated application fits");
            let premises_valid = premises.iter().all(|p| valid(p));
            let conclusion_valid = valid(&conclusion);
            if premises_valid && forward < PRESERVATION_SAMPLES {
                forward += 1;
                if !conclusion_valid {
                    violations.push(format!("forward {d}: `{conclusion}`"));
                }
            }
            if conclusion_valid {
                if wants_backward && backward < PRESERVATION_SAMPLES {
                    backward += 1;
                    if !premises_valid {
                        violations.push(format!("backward {d}: `{conclusion}`"));
                    }
                } else if !wants_backward && !premises_valid && choosing_counterexample.is_none() {
                    choosing_counterexample = Some(format!("`{conclusion}` is valid, its {d} premise `{}` is not", premises[0]));
                }
            }
        }
        quotas_met &= forward == PRESERVATION_SAMPLES && (!wants_backward || backward == PRESERVATION_SAMPLES);
        lines.push(if wants_backward {
            format!("{rule}: {forward} forward, {backward} backward")
        } else {
            format!("{rule}: {forward} forward")
        });
    }
    let mut detail = format!("{}; {} violations", lines.join(", "), violations.len());
    for v in violations.iter().take(3) {
        detail.push_str(&format!("\n        {v}"));
    }
    detail.push_str(&format!(
        "\n      choosing, conclusion to premise: {}",
        choosing_counterexample.unwrap_or_else(|| "no counterexample found in the sample".into())
    ));
    report(6, "rules preserve validity", violations.is_empty() && quotas_met, detail, start.elapsed(), PRESERVATION_LIMIT)
}

fn classical() -> Outcome {
    let start = Instant::now();
    let alphabet = Alphabet::standard(2, 0);
    let mut checked = 0u64;
    let mut tautologies = 0u64;
    let mut disagreements = Vec::new();
    Enumerator::new(&alphabet, CLASSICAL_MAX_NODES).for_each_up_to(CLASSICAL_MAX_NODES, &mut |c| {
        checked += 1;
        let expected = is_tautology(&c).expect("choice-free");
        tautologies += expected as u64;
        if decide_uniform(&c).expect("within caps").valid != expected {
            disagreements.push(c.to_string());
        }
    });
    let detail = format!("{checked} cirquents, {tautologies} tautologies, {} disagreements", disagreements.len());
    report(8, "oracle matches truth tables without choices", disagreements.is_empty(), detail, start.elapsed(), CLASSICAL_LIMIT)
}

fn main() {
    let mut outcomes = vec![golden()];
    let (differential, policy) = sweeps();
    outcomes.push(differential);
    outcomes.push(game_identity());
    let inputs = purification_inputs();
    outcomes.push(termination(&inputs));
    outcomes.push(replay(&inputs));
    outcomes.push(preservation());
    outcomes.push(policy);
    outcomes.push(classical());
    outcomes.sort_by_key(|o| o.id);

    println!();
    for o in &outcomes {
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {}: {} ({:.2?})", o.id, o.title, o.elapsed);
        println!("      {}", o.detail);
    }
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    println!("\nacceptance: {} of {} criteria pass", outcomes.len() - failed, outcomes.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
