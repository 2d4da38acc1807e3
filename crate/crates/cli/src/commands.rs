use std::io;
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use pm_core::analysis::{
    build_agent_config_graph, compute_r_values, exhaustive_verify, identity_embedding, input_multisets,
    space_audit, verify_q_property, AgentConfigGraph, AnalysisError, CapHit, FailReason, Scale, SpaceFit, Verdict,
};
use pm_core::machine::{Machine, Symbol};
use pm_core::population::{
    random_execution_observed, EventKind, ExecutionEvent, ExecutionResult, InputAssignment, PopulationConfiguration,
    PopulationError, StopReason,
};
use pm_core::protocols::ids::{ID, PS};
use pm_core::tmsim::{reference_tm_run, SimStatus, TmMonitor};
use serde::Serialize;
use thiserror::Error;

use crate::config::{ConfigError, InputSpec, RunConfig};
use crate::dot;
use crate::load::{LoadError, Loaded};
use crate::records::{
    EventRecord, GraphRecord, IdSummary, RunRecord, Space, SweepFit, SweepRow, TmSummary, VerifyRecord,
    SCHEMA_VERSION,
};

/// Reference interpreter budget when checking simulated machines.
const REFERENCE_STEPS: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum CmdError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Population(#[from] PopulationError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Usage(String),
}

/// Maps `f` over `items` on `jobs` threads (0: one per core), keeping order.
pub fn par_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let jobs = match jobs {
        0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
        j => j,
    }
    .min(items.len())
    .max(1);
    let next = AtomicUsize::new(0);
    let done: Mutex<Vec<(usize, R)>> = Mutex::new(Vec::with_capacity(items.len()));
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(item) = items.get(i) else { break };
                let r = f(item);
                done.lock().expect("worker panicked").push((i, r));
            });
        }
    });
    let mut done = done.into_inner().expect("worker panicked");
    done.sort_by_key(|(i, _)| *i);
    done.into_iter().map(|(_, r)| r).collect()
}

pub type Hook<'a> = &'a mut dyn FnMut(&ExecutionEvent, &PopulationConfiguration) -> ControlFlow<()>;

fn render(m: &dyn Machine, out: &[Symbol]) -> String {
    m.symbols().render(out)
}

fn bit(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

fn id_summary(p: &Loaded, config: &PopulationConfiguration) -> Option<IdSummary> {
    let Loaded::Program { name, proto } = p else { return None };
    if name != "ids" {
        return None;
    }
    let vars: Vec<_> = config.agents.iter().map(|a| proto.decode_vars(a).ok()).collect::<Option<_>>()?;
    let n = config.agents.len() as u64;
    let mut ids: Vec<u64> = vars.iter().map(|v| v[ID].uint()).collect();
    ids.sort_unstable();
    let mut sizes: Vec<u64> = vars.iter().map(|v| v[PS].uint()).collect();
    sizes.sort_unstable();
    sizes.dedup();
    Some(IdSummary {
        ids_complete: ids == (0..n).collect::<Vec<_>>(),
        max_id: ids.last().copied().unwrap_or(0),
        sizes,
    })
}

/// One seeded run. `hook` sees every event before any built-in monitor.
pub fn run_one(
    p: &Loaded,
    input: &str,
    seed: u64,
    cfg: &RunConfig,
    hook: Hook,
) -> Result<(RunRecord, ExecutionResult), CmdError> {
    let m = p.machine();
    let x = InputAssignment::parse(m, input)?;
    let n = x.len();
    let mut opts = cfg.run_options(seed);
    let mut tm_summary = None;
    let res = match p {
        Loaded::Tm { tm, proto, .. } => {
            // The simulation ends by halting, not by a quiet spell.
            opts.window = Some(opts.window.unwrap_or(u64::MAX));
            let mut mon = TmMonitor::new(proto, n);
            let res = random_execution_observed(m, &x, &opts, |e, c| match hook(e, c) {
                ControlFlow::Break(()) => ControlFlow::Break(()),
                ControlFlow::Continue(()) => mon.observe(e, c),
            })?;
            let settled = mon.status != SimStatus::Running || ids_settled(proto, &res.final_config);
            let (sim_input, reference) = if settled {
                let sim = mon.simulated_input();
                let r = reference_tm_run(tm, &sim, REFERENCE_STEPS).ok().map(|v| v.accepted);
                (Some(tm.render(&sim)), r)
            } else {
                (None, None)
            };
            tm_summary = Some(TmSummary {
                status: match mon.status {
                    SimStatus::Running => "running",
                    SimStatus::Accepted => "accepted",
                    SimStatus::Rejected => "rejected",
                },
                simulated_input: sim_input,
                reference_accepts: reference,
                tape: settled.then(|| mon.render_tape()),
                handoffs: mon.handoffs,
                violation: mon.violation.as_ref().map(ToString::to_string),
            });
            res
        }
        _ => random_execution_observed(m, &x, &opts, hook)?,
    };
    let outputs: Vec<String> = res.outputs.iter().map(|o| render(m, o)).collect();
    let consensus = outputs.iter().all(|o| o == &outputs[0]).then(|| outputs[0].clone());
    let ids = id_summary(p, &res.final_config);
    let (converged, stop, oracle, matched) = match &tm_summary {
        Some(t) => {
            let halted = t.status != "running";
            let stop = if halted { "halted" } else { stop_name(res.stop) };
            let matched = match (t.reference_accepts, t.status) {
                _ if t.violation.is_some() => false,
                (Some(r), "accepted") => r,
                (Some(r), "rejected") => !r,
                // Rejecting machines that retry never halt; their outputs must stay 0.
                (Some(r), _) => !r && consensus.as_deref() == Some("0"),
                (None, _) => false,
            };
            (halted || res.converged, stop, t.reference_accepts, Some(matched))
        }
        None => {
            let oracle = p.oracle(input);
            let matched = match (&ids, oracle) {
                (Some(ids), _) => Some(res.converged && ids.ids_complete && ids.sizes == [n as u64]),
                (None, Some(o)) => Some(res.converged && consensus.as_deref() == Some(bit(o))),
                (None, None) => None,
            };
            (res.converged, stop_name(res.stop), oracle, matched)
        }
    };
    let record = RunRecord {
        schema_version: SCHEMA_VERSION,
        kind: "run",
        protocol: p.name().into(),
        n,
        input: input.into(),
        seed,
        mode: match cfg.mode {
            pm_core::population::Mode::Quiescent => "quiescent",
            pm_core::population::Mode::Interleaved => "interleaved",
        },
        events: res.events,
        effective_encounters: res.effective_encounters,
        converged,
        stop,
        outputs,
        consensus,
        space: Space {
            per_tape: res.space.per_tape(),
            overall: res.space.overall(),
        },
        oracle,
        matched,
        ids,
        tm: tm_summary,
    };
    Ok((record, res))
}

fn ids_settled(proto: &pm_core::tmsim::TmProtocol, c: &PopulationConfiguration) -> bool {
    let n = c.agents.len() as u64;
    c.agents
        .iter()
        .all(|a| proto.decode_vars(a).is_ok_and(|v| v[PS].uint() == n))
}

fn stop_name(s: StopReason) -> &'static str {
    match s {
        StopReason::Converged => "converged",
        StopReason::BudgetExceeded => "budget",
        StopReason::Observer => "observer",
    }
}

/// `(input, seed)` pairs in (size, seed) order.
pub fn run_jobs(p: &Loaded, cfg: &RunConfig) -> Vec<(String, u64)> {
    match &cfg.input {
        InputSpec::Explicit(s) => cfg.seeds.iter().map(|&seed| (s.clone(), seed)).collect(),
        InputSpec::Random(sizes) => sizes
            .iter()
            .flat_map(|&n| cfg.seeds.iter().map(move |&seed| (p.random_input(n, seed), seed)))
            .collect(),
    }
}

pub fn event_records(trace: &[ExecutionEvent]) -> Vec<EventRecord> {
    trace
        .iter()
        .map(|e| {
            let (event, participants, effective) = match e.kind {
                EventKind::Internal { agent, applied } => ("internal", vec![agent], applied),
                EventKind::Encounter { initiator, responder, effective } => {
                    ("encounter", vec![initiator, responder], effective)
                }
            };
            EventRecord {
                schema_version: SCHEMA_VERSION,
                kind: "event",
                ordinal: e.ordinal,
                event,
                participants,
                effective,
            }
        })
        .collect()
}

pub struct RunOutcome {
    pub records: Vec<RunRecord>,
    pub trace: Option<Vec<EventRecord>>,
}

impl RunOutcome {
    pub fn ok(&self) -> bool {
        self.records.iter().all(|r| r.matched != Some(false))
    }
}

pub fn cmd_run(cfg: &RunConfig) -> Result<RunOutcome, CmdError> {
    let p = Loaded::load(&cfg.protocol)?;
    let jobs = run_jobs(&p, cfg);
    let results = par_map(&jobs, cfg.jobs, |(input, seed)| {
        run_one(&p, input, *seed, cfg, &mut |_, _| ControlFlow::Continue(()))
    });
    let mut records = Vec::with_capacity(results.len());
    let mut trace = None;
    for r in results {
        let (rec, res) = r?;
        if let Some(t) = &res.trace {
            trace = Some(event_records(t));
        }
        records.push(rec);
    }
    Ok(RunOutcome { records, trace })
}

fn verify_inputs(p: &Loaded, cfg: &RunConfig) -> Vec<String> {
    let m = p.machine();
    match &cfg.input {
        InputSpec::Explicit(s) => vec![s.clone()],
        InputSpec::Random(sizes) => sizes
            .iter()
            .flat_map(|&n| input_multisets(m.input_alphabet(), n))
            .map(|xs| m.symbols().render(&xs))
            .collect(),
    }
}

pub fn verify_one(p: &Loaded, input: &str, cfg: &RunConfig) -> Result<VerifyRecord, CmdError> {
    let m = p.machine();
    let x = InputAssignment::parse(m, input)?;
    let res = exhaustive_verify(m, &x, &cfg.explore_options())?;
    let oracle = p.oracle(input);
    let mut rec = VerifyRecord {
        schema_version: SCHEMA_VERSION,
        kind: "verify",
        protocol: p.name().into(),
        input: input.into(),
        explored: res.explored,
        terminal_sccs: res.terminal_sccs,
        verdict: "unknown",
        value: None,
        oracle,
        matched: None,
        counterexample: None,
        reason: None,
        cap: None,
    };
    match res.verdict {
        Verdict::StablyComputes(v) => {
            let v = render(m, &v);
            rec.verdict = "stably_computes";
            rec.matched = oracle.map(|o| v == bit(o));
            rec.value = Some(v);
        }
        Verdict::Fails(cx) => {
            rec.verdict = "fails";
            rec.matched = oracle.map(|_| false);
            rec.counterexample = Some(cx.path.iter().map(|&(u, v)| [u, v]).collect());
            rec.reason = Some(match cx.reason {
                FailReason::NotUniform => "terminal component not output-uniform".into(),
                FailReason::Disagreement { first, other } => {
                    format!("terminal components settle on `{}` and `{}`", render(m, &first), render(m, &other))
                }
            });
        }
        Verdict::Unknown(hit) => {
            rec.matched = oracle.map(|_| false);
            rec.cap = Some(match hit {
                CapHit::Cells { cells, cap } => format!("tape extent {cells} over cap {cap}"),
                CapHit::Configs { explored, frontier } => {
                    format!("configuration cap after {explored} ({frontier} unexpanded)")
                }
            });
        }
    }
    Ok(rec)
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Vec<VerifyRecord>, CmdError> {
    let p = Loaded::load(&cfg.protocol)?;
    let inputs = verify_inputs(&p, cfg);
    par_map(&inputs, cfg.jobs, |x| verify_one(&p, x, cfg)).into_iter().collect()
}

/// Exit status contract for verify: every verdict stable, with the right value
/// where an oracle exists.
pub fn verify_ok(records: &[VerifyRecord]) -> bool {
    records
        .iter()
        .all(|r| r.verdict == "stably_computes" && r.matched != Some(false))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphNodeRecord {
    pub schema_version: u32,
    pub kind: &'static str,
    pub n: usize,
    pub node: u32,
    pub r: Option<u64>,
    pub initial: bool,
    pub config: String,
}

pub struct GraphOutcome {
    pub graphs: Vec<AgentConfigGraph>,
    pub records: Vec<GraphRecord>,
    pub nodes: Vec<GraphNodeRecord>,
    pub dot: String,
}

impl GraphOutcome {
    pub fn ok(&self) -> bool {
        self.records.iter().all(|r| {
            r.r_within_bound && r.labels_functional && r.q_fails.is_empty() && r.embeds_previous != Some(false)
        })
    }
}

pub fn cmd_graph(cfg: &RunConfig) -> Result<GraphOutcome, CmdError> {
    let p = Loaded::load(&cfg.protocol)?;
    let sizes = match &cfg.input {
        InputSpec::Random(sizes) => sizes.clone(),
        InputSpec::Explicit(_) => return Err(CmdError::Usage("graph takes --n, not an input".into())),
    };
    graph_sizes(&p, &sizes, cfg)
}

pub fn graph_sizes(p: &Loaded, sizes: &[usize], cfg: &RunConfig) -> Result<GraphOutcome, CmdError> {
    let m = p.machine();
    let opts = cfg.explore_options();
    let built: Vec<Result<AgentConfigGraph, CmdError>> = par_map(sizes, cfg.jobs, |&n| {
        Ok(compute_r_values(build_agent_config_graph(m, n, &opts)?)?)
    });
    let mut out = GraphOutcome {
        graphs: Vec::new(),
        records: Vec::new(),
        nodes: Vec::new(),
        dot: String::new(),
    };
    for g in built {
        let g = g?;
        let q = verify_q_property(m, &g, cfg.r_cap, &opts)?;
        let r_max = g.r_max().unwrap_or(0);
        let bound = 1u64.checked_shl(g.len() as u32).unwrap_or(u64::MAX);
        out.records.push(GraphRecord {
            schema_version: SCHEMA_VERSION,
            kind: "graph",
            protocol: p.name().into(),
            n: g.n,
            nodes: g.len(),
            edges: g.edges.len(),
            initial: g.initial.len(),
            r_max,
            r_within_bound: r_max <= bound,
            labels_functional: g.label_function().is_ok(),
            q_holds: q.holds.len(),
            q_fails: q.fails.clone(),
            q_skipped: q.skipped.len(),
            r_cap: cfg.r_cap,
            embeds_previous: out.graphs.last().map(|prev| identity_embedding(prev, &g).is_ok()),
        });
        for (i, a) in g.nodes.iter().enumerate() {
            out.nodes.push(GraphNodeRecord {
                schema_version: SCHEMA_VERSION,
                kind: "graph_node",
                n: g.n,
                node: i as u32,
                r: g.r[i],
                initial: g.initial.contains(&(i as u32)),
                config: m.describe(a),
            });
        }
        out.dot += &dot::render(m, &g, &format!("{}_n{}", p.name(), g.n));
        out.graphs.push(g);
    }
    Ok(out)
}

pub struct SweepOutcome {
    pub runs: Vec<RunRecord>,
    pub rows: Vec<SweepRow>,
    pub fit: SweepFit,
    pub space: SpaceFit,
}

impl SweepOutcome {
    pub fn ok(&self) -> bool {
        self.runs.iter().all(|r| r.matched != Some(false))
    }
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<SweepOutcome, CmdError> {
    let p = Loaded::load(&cfg.protocol)?;
    let InputSpec::Random(sizes) = &cfg.input else {
        return Err(CmdError::Usage("sweep takes --n with at least three sizes".into()));
    };
    if sizes.len() < 3 {
        return Err(CmdError::Usage("sweep needs at least three population sizes".into()));
    }
    let scale = if p.name() == "logp" { Scale::LogLog } else { Scale::Log };
    let jobs = run_jobs(&p, cfg);
    let runs = par_map(&jobs, cfg.jobs, |(input, seed)| {
        run_one(&p, input, *seed, cfg, &mut |_, _| ControlFlow::Continue(())).map(|(r, _)| r)
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let samples: Vec<(u64, u64)> = runs.iter().map(|r| (r.n as u64, r.space.overall as u64)).collect();
    let space = space_audit(&samples, scale);
    let rows = sizes
        .iter()
        .map(|&n| {
            let these: Vec<&RunRecord> = runs.iter().filter(|r| r.n == n).collect();
            SweepRow {
                schema_version: SCHEMA_VERSION,
                kind: "sweep_row",
                protocol: p.name().into(),
                n,
                runs: these.len(),
                matched: these.iter().filter(|r| r.matched == Some(true)).count(),
                max_extent: these.iter().map(|r| r.space.overall).max().unwrap_or(0),
                bound: space.bound(n as u64),
            }
        })
        .collect();
    let fit = SweepFit {
        schema_version: SCHEMA_VERSION,
        kind: "sweep_fit",
        protocol: p.name().into(),
        scale: match scale {
            Scale::Log => "log",
            Scale::LogLog => "loglog",
        },
        c1: space.c1,
        c0: space.c0,
        monotone: space.monotone,
    };
    Ok(SweepOutcome { runs, rows, fit, space })
}
