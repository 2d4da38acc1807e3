//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails. Every tolerance and budget is pinned below.

use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use pm_cli::commands::{graph_sizes, par_map, run_one, verify_one};
use pm_cli::config::{InputSpec, RunConfig};
use pm_cli::load::Loaded;
use pm_cli::records::to_line;
use pm_core::analysis::{
    ceil_log2, identity_embedding, input_multisets, verify_terminal_property, Canonical, ExploreOptions,
    PropertyVerdict, Scale,
};
use pm_core::machine::{AgentConfiguration, Machine, State, Symbol, Tape};
use pm_core::population::{encounter, encounter_in_place, EventKind, PopulationConfiguration};
use pm_core::protocols::{ids, tables, Compiled, IdAssignment, IdProbe};
use pm_core::tmsim::library::{divisor_tm, equality_tm};
use pm_core::tmsim::reference_tm_run;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ENCOUNTER_CHECKS: usize = 1_000;
const ENCOUNTER_TIME: Duration = Duration::from_secs(10);
const MULT_TIME: Duration = Duration::from_secs(600);
const RANDOM_SIZES: [usize; 5] = [4, 8, 16, 32, 64];
const RANDOM_SEEDS: u64 = 50;
const RANDOM_TIME: Duration = Duration::from_secs(900);
const RANDOM_EVENT_BUDGET: u64 = 1_000_000;
const MULT_SPACE_SIZES: [usize; 5] = [8, 16, 32, 64, 128];
const MULT_SPACE_SEEDS: u64 = 10;
/// Five fields, three of them counters bounded by n: 3 * (ceil(log2 n) + 2)
/// cells for the counters plus at most 6 for role, out and separators.
const MULT_C1: u64 = 3;
const MULT_C0: i64 = 12;
const LOGP_SIZES: [usize; 8] = [8, 16, 32, 64, 128, 256, 512, 1024];
const LOGP_SEEDS: u64 = 3;
const LOGP_EVENT_BUDGET: u64 = 20_000_000;
const TM_SEEDS: u64 = 10;
const TM_MAX_N: usize = 6;
const DIVISOR_SEEDS: u64 = 20;
const DIVISOR_ACCEPT_BUDGET: u64 = 1_000_000;
/// Rejecting nondeterministic runs never halt; they must keep every output at
/// 0 for this many events.
const DIVISOR_REJECT_BUDGET: u64 = 100_000;
const GRAPH_R_CAP: u64 = 4;
const GRAPH_TIME: Duration = Duration::from_secs(600);

type Outcome = Result<String, String>;

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    check(start.elapsed() <= limit, || format!("took {:?}, limit {limit:?}", start.elapsed()))
}

fn explicit(protocol: &str, input: &str) -> RunConfig {
    RunConfig::new(protocol, InputSpec::Explicit(input.into()))
}

fn random_agent(rng: &mut ChaCha8Rng, states: u32, symbols: u8) -> AgentConfiguration {
    let tape = |rng: &mut ChaCha8Rng| {
        let len = rng.gen_range(0..6);
        let cells: Vec<Symbol> = (0..len).map(|_| Symbol(rng.gen_range(0..symbols))).collect();
        Tape::from_symbols(cells, rng.gen_range(0..8))
    };
    AgentConfiguration {
        state: State(rng.gen_range(0..states)),
        working: tape(rng),
        output: tape(rng),
        incoming: tape(rng),
        outgoing: tape(rng),
        working_flag: rng.gen_bool(0.3),
    }
}

fn c1_encounters() -> Outcome {
    let start = Instant::now();
    let m = tables::toggle();
    let symbols = m.symbols().len() as u8;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut effective, mut null) = (0, 0);
    for i in 0..ENCOUNTER_CHECKS {
        let n = rng.gen_range(2..7);
        let c = PopulationConfiguration {
            agents: (0..n).map(|_| random_agent(&mut rng, 3, symbols)).collect(),
        };
        let u = rng.gen_range(0..n);
        let v = (u + rng.gen_range(1..n)) % n;
        let (next, eff) = encounter(&m, &c, u, v).map_err(|e| e.to_string())?;
        let mut in_place = c.clone();
        let eff2 = encounter_in_place(&m, &mut in_place, u, v).map_err(|e| e.to_string())?;
        check(next == in_place && eff == eff2, || format!("check {i}: in-place result differs"))?;
        let mut bad = c.clone();
        check(encounter_in_place(&m, &mut bad, u, u).is_err() && bad == c, || {
            format!("check {i}: rejected encounter modified the configuration")
        })?;
        for w in (0..n).filter(|&w| w != u && w != v) {
            check(next.agents[w] == c.agents[w], || format!("check {i}: bystander {w} changed"))?;
        }
        let (a, b) = (&c.agents[u], &c.agents[v]);
        if a.working_flag || b.working_flag {
            null += 1;
            check(!eff && next == c, || format!("check {i}: Case 2 encounter was not null"))?;
            continue;
        }
        effective += 1;
        let (qa, qb) = m.interact(a.state, b.state);
        let (na, nb) = (&next.agents[u], &next.agents[v]);
        check(eff && na.state == qa && nb.state == qb, || format!("check {i}: states not from gamma"))?;
        check(na.working_flag && nb.working_flag, || format!("check {i}: flags not raised"))?;
        for (old, new, partner) in [(a, na, b), (b, nb, a)] {
            let expect = Tape::from_symbols(partner.outgoing.content().to_vec(), old.incoming.head());
            check(new.incoming == expect, || format!("check {i}: incoming tape is not the partner's message"))?;
            check(
                new.working == old.working && new.output == old.output && new.outgoing == old.outgoing,
                || format!("check {i}: a non-incoming tape changed"),
            )?;
        }
        let (rev, _) = encounter(&m, &c, v, u).map_err(|e| e.to_string())?;
        let (ra, rb) = m.interact(b.state, a.state);
        check(
            rev.agents[u].incoming == na.incoming
                && rev.agents[v].incoming == nb.incoming
                && rev.agents[v].state == ra
                && rev.agents[u].state == rb,
            || format!("check {i}: swap not symmetric in the roles"),
        )?;
    }
    within(start, ENCOUNTER_TIME)?;
    Ok(format!(
        "{ENCOUNTER_CHECKS} checks ({effective} effective, {null} null) in {:.2?}",
        start.elapsed()
    ))
}

fn verify_all(protocol: &str, inputs: &[String]) -> Result<usize, String> {
    let p = Loaded::load(protocol).map_err(|e| e.to_string())?;
    let cfg = explicit(protocol, "xx");
    for x in inputs {
        let r = verify_one(&p, x, &cfg).map_err(|e| e.to_string())?;
        check(r.verdict == "stably_computes" && r.matched == Some(true), || {
            format!("{x}: verdict {} value {:?} oracle {:?}", r.verdict, r.value, r.oracle)
        })?;
    }
    Ok(inputs.len())
}

fn all_inputs(protocol: &str, sizes: impl IntoIterator<Item = usize>) -> Vec<String> {
    let p = Loaded::load(protocol).expect("built-in");
    let m = p.machine();
    sizes
        .into_iter()
        .flat_map(|n| input_multisets(m.input_alphabet(), n))
        .map(|xs| m.symbols().render(&xs))
        .collect()
}

fn c2_mult() -> Outcome {
    let start = Instant::now();
    let small: Vec<String> = all_inputs("mult", 2..=3).into_iter().filter(|x| x.contains('c')).collect();
    let four = all_inputs("mult", [4]);
    let a = verify_all("mult", &small)?;
    let b = verify_all("mult", &four)?;
    check(b >= 10, || format!("only {b} inputs at n = 4"))?;
    within(start, MULT_TIME)?;
    Ok(format!("{a} inputs with n in 2..=3 and c present, {b} at n = 4, in {:.2?}", start.elapsed()))
}

fn c3_pow2() -> Outcome {
    let start = Instant::now();
    let k = verify_all("pow2", &all_inputs("pow2", 2..=4))?;
    Ok(format!("{k} inputs with n in 2..=4 in {:.2?}", start.elapsed()))
}

type Job = (&'static str, usize, u64);

fn random_jobs(protocols: &[&'static str]) -> Vec<Job> {
    let mut jobs = Vec::new();
    for &p in protocols {
        for n in RANDOM_SIZES {
            for seed in 0..RANDOM_SEEDS {
                jobs.push((p, n, seed));
            }
        }
    }
    jobs
}

fn random_cfg(protocol: &str) -> RunConfig {
    let mut c = RunConfig::new(protocol, InputSpec::Random(RANDOM_SIZES.to_vec()));
    c.max_events = RANDOM_EVENT_BUDGET;
    c
}

fn run_line(loaded: &[Loaded], job: &Job) -> Result<(String, bool, bool), String> {
    let (name, n, seed) = *job;
    let p = loaded.iter().find(|p| p.name() == name).expect("loaded");
    let input = p.random_input(n, seed);
    let (rec, _) = run_one(p, &input, seed, &random_cfg(name), &mut |_, _| ControlFlow::Continue(()))
        .map_err(|e| format!("{name} {input} seed {seed}: {e}"))?;
    Ok((to_line(&rec), rec.converged, rec.matched == Some(true)))
}

fn c4_random(lines: &mut Vec<(Job, String)>) -> Outcome {
    let start = Instant::now();
    let loaded: Vec<Loaded> = ["mult", "pow2", "logp"].iter().map(|n| Loaded::load(n).unwrap()).collect();
    let jobs = random_jobs(&["mult", "pow2", "logp"]);
    let results = par_map(&jobs, 0, |j| run_line(&loaded, j));
    let mut bad = Vec::new();
    for (job, r) in jobs.iter().zip(results) {
        let (line, converged, matched) = r?;
        if !(converged && matched) {
            bad.push(format!("{job:?}"));
        }
        lines.push((*job, line));
    }
    check(bad.is_empty(), || format!("{} runs failed: {}", bad.len(), bad.join(", ")))?;
    within(start, RANDOM_TIME)?;
    Ok(format!("{} runs converged and matched in {:.2?}", jobs.len(), start.elapsed()))
}

fn c5_ids() -> Outcome {
    let start = Instant::now();
    let p = Loaded::load("ids").unwrap();
    let Loaded::Program { proto, .. } = &p else { unreachable!() };
    let jobs: Vec<(usize, u64)> = RANDOM_SIZES
        .iter()
        .flat_map(|&n| (0..RANDOM_SEEDS).map(move |s| (n, s)))
        .collect();
    let results = par_map(&jobs, 0, |&(n, seed)| -> Result<(), String> {
        let input = p.random_input(n, seed);
        let mut fired = None;
        let mut hook = |e: &pm_core::population::ExecutionEvent, c: &PopulationConfiguration| {
            let touched = match e.kind {
                EventKind::Encounter { initiator, responder, .. } => [initiator, responder],
                EventKind::Internal { agent, .. } => [agent, agent],
            };
            for i in touched {
                let a = &c.agents[i];
                if !a.is_ready() {
                    continue;
                }
                let v = proto.decode_vars(a).expect("decodable");
                if v[ids::ID].uint() > n as u64 - 1 || v[ids::PS].uint() > n as u64 {
                    fired = Some((e.ordinal, v[ids::ID].uint(), v[ids::PS].uint()));
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        };
        let (rec, _) = run_one(&p, &input, seed, &random_cfg("ids"), &mut hook).map_err(|e| e.to_string())?;
        check(fired.is_none(), || format!("n={n} seed {seed}: assertion fired {fired:?}"))?;
        check(rec.converged, || format!("n={n} seed {seed}: no convergence"))?;
        let ids = rec.ids.expect("ids summary");
        check(ids.ids_complete && ids.sizes == [n as u64], || {
            format!("n={n} seed {seed}: ended with {ids:?}")
        })
    });
    for r in results {
        r?;
    }
    let m = Compiled::new(IdAssignment::new(IdProbe).unwrap()).unwrap();
    let opts = ExploreOptions { canonical: Canonical::Multiset, ..ExploreOptions::default() };
    let mut exhaustive = 0;
    for n in 2..=3usize {
        for xs in input_multisets(m.input_alphabet(), n) {
            let x = pm_core::population::InputAssignment::new(&m, xs).unwrap();
            let v = verify_terminal_property(&m, &x, &opts, |c| {
                let mut got: Vec<u64> = Vec::new();
                for a in &c.agents {
                    let v = m.decode_vars(a).unwrap();
                    if v[ids::PS].uint() != n as u64 {
                        return false;
                    }
                    got.push(v[ids::ID].uint());
                }
                got.sort_unstable();
                got == (0..n as u64).collect::<Vec<_>>()
            })
            .map_err(|e| e.to_string())?;
            check(v == PropertyVerdict::Holds, || format!("n={n}: terminal property {v:?}"))?;
            exhaustive += 1;
        }
    }
    Ok(format!(
        "{} runs safe and complete, {exhaustive} exhaustive inputs at n in 2..=3, in {:.2?}",
        jobs.len(),
        start.elapsed()
    ))
}

fn c6_space() -> Outcome {
    let start = Instant::now();
    let mult = Loaded::load("mult").unwrap();
    let jobs: Vec<(usize, u64)> = MULT_SPACE_SIZES
        .iter()
        .flat_map(|&n| (0..MULT_SPACE_SEEDS).map(move |s| (n, s)))
        .collect();
    let cfg = random_cfg("mult");
    let extents = par_map(&jobs, 0, |&(n, seed)| {
        let input = mult.random_input(n, seed);
        run_one(&mult, &input, seed, &cfg, &mut |_, _| ControlFlow::Continue(()))
            .map(|(r, _)| (n as u64, r.space.overall as u64, r.matched == Some(true)))
            .map_err(|e| e.to_string())
    });
    let mut samples = Vec::new();
    for r in extents {
        let (n, e, matched) = r?;
        check(matched, || format!("mult n={n}: run did not match"))?;
        let bound = (MULT_C1 * ceil_log2(n)) as i64 + MULT_C0;
        check(e as i64 <= bound, || format!("mult n={n}: extent {e} over {bound}"))?;
        samples.push((n, e));
    }
    let fit = pm_core::analysis::space_audit(&samples, Scale::Log);
    check(fit.monotone, || format!("mult extents not monotone: {:?}", fit.rows))?;

    let logp = Loaded::load("logp").unwrap();
    let Loaded::Program { proto, .. } = &logp else { unreachable!() };
    let jobs: Vec<(usize, u64)> = LOGP_SIZES
        .iter()
        .flat_map(|&n| (0..LOGP_SEEDS).map(move |s| (n, s)))
        .collect();
    let mut lcfg = random_cfg("logp");
    lcfg.max_events = LOGP_EVENT_BUDGET;
    let logp_results = par_map(&jobs, 0, |&(n, seed)| -> Result<(u64, u32), String> {
        let input = logp.random_input(n, seed);
        let na = input.chars().filter(|&c| c == 'a').count() as u64;
        let mut x = vec![0u64; n];
        let mut started = false;
        let mut positives = 0usize;
        let mut worst = None;
        let mut max_bits = 0;
        let bits_bound = Scale::LogLog.at(n as u64) as u32 + 1;
        let mut hook = |e: &pm_core::population::ExecutionEvent, c: &PopulationConfiguration| {
            let touched: Vec<usize> = if !started {
                started = true;
                (0..n).collect()
            } else {
                match e.kind {
                    EventKind::Encounter { initiator, responder, .. } => vec![initiator, responder],
                    EventKind::Internal { agent, .. } => vec![agent],
                }
            };
            for i in touched {
                if !c.agents[i].is_ready() {
                    continue;
                }
                let v = proto.decode_vars(&c.agents[i]).expect("decodable")[0].uint();
                positives = positives + usize::from(v > 0) - usize::from(x[i] > 0);
                x[i] = v;
                let bits = pm_core::protocols::encoding::bit_len(v);
                max_bits = max_bits.max(bits);
                // x <= log2(N_a) + 1, i.e. 2^(x-1) <= N_a.
                if (v > 0 && (v > 64 || 1u64 << (v - 1) > na)) || bits > bits_bound {
                    worst = Some((e.ordinal, i, v));
                    return ControlFlow::Break(());
                }
            }
            if positives == na.count_ones() as usize {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        };
        let (rec, _) = run_one(&logp, &input, seed, &lcfg, &mut hook).map_err(|e| e.to_string())?;
        check(worst.is_none(), || format!("logp n={n} seed {seed}: bound violated at {worst:?}"))?;
        check(positives == na.count_ones() as usize, || {
            format!("logp n={n} seed {seed}: merging unfinished after {} events", rec.events)
        })?;
        Ok((n as u64, max_bits))
    });
    let mut logp_rows = Vec::new();
    for r in logp_results {
        logp_rows.push(r?);
    }
    Ok(format!(
        "mult extents {:?} within {MULT_C1}*ceil(log2 n)+{MULT_C0} (fit c1={} c0={}); logp x bit lengths (n, bits) {:?}; {:.2?}",
        fit.rows,
        fit.c1,
        fit.c0,
        dedup_max(&logp_rows),
        start.elapsed()
    ))
}

fn dedup_max(rows: &[(u64, u32)]) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    for &(n, b) in rows {
        match out.last_mut() {
            Some(last) if last.0 == n => last.1 = last.1.max(b),
            _ => out.push((n, b)),
        }
    }
    out
}

fn c7_equality() -> Outcome {
    let start = Instant::now();
    let tm = equality_tm();
    let p = Loaded::tm("eq", tm.clone());
    let mut jobs = Vec::new();
    for x in all_inputs_of(&p, 2..=TM_MAX_N) {
        for seed in 0..TM_SEEDS {
            jobs.push((x.clone(), seed));
        }
    }
    let cfg = explicit("eq", "xx");
    let results = par_map(&jobs, 0, |(x, seed)| {
        run_one(&p, x, *seed, &cfg, &mut |_, _| ControlFlow::Continue(()))
            .map(|(r, _)| r)
            .map_err(|e| e.to_string())
    });
    let mut handoffs = 0;
    for ((x, seed), r) in jobs.iter().zip(results) {
        let r = r?;
        let t = r.tm.as_ref().expect("tm summary");
        check(t.violation.is_none(), || format!("{x} seed {seed}: {:?}", t.violation))?;
        let sim = tm.parse_input(t.simulated_input.as_deref().unwrap_or("")).map_err(|e| e.to_string())?;
        let truth = reference_tm_run(&tm, &sim, 1_000_000).map_err(|e| e.to_string())?;
        let want = if truth.accepted { "accepted" } else { "rejected" };
        check(t.status == want, || format!("{x} seed {seed}: simulated {} but reference {want}", t.status))?;
        check(t.tape.as_deref() == truth.tape.as_ref().map(|s| tm.render(s)).as_deref(), || {
            format!("{x} seed {seed}: final tape {:?} differs from reference", t.tape)
        })?;
        handoffs += t.handoffs;
    }
    Ok(format!(
        "{} runs agree with the reference; {handoffs} token hand-offs audited; {:.2?}",
        jobs.len(),
        start.elapsed()
    ))
}

fn all_inputs_of(p: &Loaded, sizes: impl IntoIterator<Item = usize>) -> Vec<String> {
    let m = p.machine();
    sizes
        .into_iter()
        .flat_map(|n| input_multisets(m.input_alphabet(), n))
        .map(|xs| m.symbols().render(&xs))
        .collect()
}

fn c8_divisor() -> Outcome {
    let start = Instant::now();
    let tm = divisor_tm();
    let p = Loaded::tm("divisor", tm.clone());
    let jobs: Vec<(usize, u64)> = (4..=12).flat_map(|na| (0..DIVISOR_SEEDS).map(move |s| (na, s))).collect();
    let results = par_map(&jobs, 0, |&(na, seed)| -> Result<bool, String> {
        let x = "a".repeat(na);
        let truth = reference_tm_run(&tm, &tm.parse_input(&x).unwrap(), 1_000_000).map_err(|e| e.to_string())?;
        let mut cfg = explicit("divisor", &x);
        cfg.max_events = if truth.accepted { DIVISOR_ACCEPT_BUDGET } else { DIVISOR_REJECT_BUDGET };
        let (r, _) = run_one(&p, &x, seed, &cfg, &mut |_, _| ControlFlow::Continue(())).map_err(|e| e.to_string())?;
        let t = r.tm.as_ref().expect("tm summary");
        check(t.violation.is_none(), || format!("N_a={na} seed {seed}: {:?}", t.violation))?;
        if truth.accepted {
            check(t.status == "accepted" && r.consensus.as_deref() == Some("1"), || {
                format!("N_a={na} seed {seed}: {} after {} events", t.status, r.events)
            })?;
        } else {
            check(t.status == "running" && r.consensus.as_deref() == Some("0"), || {
                format!("N_a={na} seed {seed}: {} with outputs {:?}", t.status, r.consensus)
            })?;
        }
        Ok(truth.accepted)
    });
    let mut accepted = 0;
    for r in results {
        accepted += usize::from(r?);
    }
    Ok(format!(
        "{} runs follow the branch oracle ({accepted} accepting); {:.2?}",
        jobs.len(),
        start.elapsed()
    ))
}

fn c9_graphs() -> Outcome {
    let start = Instant::now();
    let mut summary = Vec::new();
    for name in ["toggle", "pow2", "logp"] {
        let p = Loaded::load(name).unwrap();
        let mut cfg = RunConfig::new(name, InputSpec::Random(vec![2, 3, 4]));
        cfg.r_cap = GRAPH_R_CAP;
        let out = graph_sizes(&p, &[2, 3, 4], &cfg).map_err(|e| format!("{name}: {e}"))?;
        for (g, rec) in out.graphs.iter().zip(&out.records) {
            check(g.r.iter().all(Option::is_some), || format!("{name} n={}: unassigned r", g.n))?;
            check(rec.r_within_bound, || format!("{name} n={}: r_max {} over 2^|U|", g.n, rec.r_max))?;
            check(rec.labels_functional, || format!("{name} n={}: labeling not a function", g.n))?;
            check(rec.q_fails.is_empty(), || format!("{name} n={}: Q fails at {:?}", g.n, rec.q_fails))?;
            summary.push(format!("{name}/{}:|U|={},r_max={}", g.n, rec.nodes, rec.r_max));
        }
        for i in 0..out.graphs.len() {
            for j in i + 1..out.graphs.len() {
                identity_embedding(&out.graphs[i], &out.graphs[j])
                    .map_err(|e| format!("{name}: n={} does not embed in n={}: {e:?}", out.graphs[i].n, out.graphs[j].n))?;
            }
        }
    }
    within(start, GRAPH_TIME)?;
    Ok(format!("{}; {:.2?}", summary.join(" "), start.elapsed()))
}

fn c10_determinism(lines: &[(Job, String)]) -> Outcome {
    let start = Instant::now();
    check(!lines.is_empty(), || "criterion 4 produced no records".into())?;
    let loaded: Vec<Loaded> = ["mult", "pow2", "logp"].iter().map(|n| Loaded::load(n).unwrap()).collect();
    let jobs: Vec<Job> = lines.iter().map(|(j, _)| *j).collect();
    let again = par_map(&jobs, 0, |j| run_line(&loaded, j));
    for ((job, first), second) in lines.iter().zip(again) {
        let (second, _, _) = second?;
        check(first == &second, || format!("{job:?}: records differ"))?;
    }
    Ok(format!("{} records byte-identical on repeat; {:.2?}", lines.len(), start.elapsed()))
}

fn main() {
    let mut lines = Vec::new();
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut run = |id: u32, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let r = f();
        match &r {
            Ok(msg) => println!("criterion {id:>2} PASS {name}: {msg}"),
            Err(msg) => println!("criterion {id:>2} FAIL {name}: {msg}"),
        }
        results.push((id, name, r));
    };
    run(1, "encounter semantics", &mut c1_encounters);
    run(2, "exhaustive multiplication", &mut c2_mult);
    run(3, "exhaustive power of two", &mut c3_pow2);
    run(4, "random-run convergence", &mut || c4_random(&mut lines));
    run(5, "id assignment", &mut c5_ids);
    run(6, "space bounds", &mut c6_space);
    run(7, "deterministic TM simulation", &mut c7_equality);
    run(8, "nondeterministic TM simulation", &mut c8_divisor);
    run(9, "agent configuration graphs", &mut c9_graphs);
    run(10, "determinism", &mut || c10_determinism(&lines));
    let failed: Vec<u32> = results.iter().filter(|r| r.2.is_err()).map(|r| r.0).collect();
    println!("acceptance: {} of {} criteria passed", results.len() - failed.len(), results.len());
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
