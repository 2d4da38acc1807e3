//! Populations of agents on the complete interaction graph: the encounter
//! relation, seeded random schedulers, and execution traces.

use alloc::vec::Vec;
use core::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::machine::{
    run_until_ready, tape_extent, AgentConfiguration, Machine, MachineError, SpaceReport, Symbol,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PopulationError {
    #[error("a population needs at least two agents, got {0}")]
    TooSmall(usize),
    #[error("symbol `{0}` is not in the input alphabet")]
    SymbolNotInAlphabet(char),
    #[error("agent {0} cannot interact with itself")]
    SelfInteraction(usize),
    #[error("agent index {0} out of range")]
    NoSuchAgent(usize),
    #[error(transparent)]
    Machine(#[from] MachineError),
}

/// One input symbol per agent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InputAssignment {
    symbols: Vec<Symbol>,
}

impl InputAssignment {
    pub fn new<M: Machine + ?Sized>(
        machine: &M,
        symbols: Vec<Symbol>,
    ) -> Result<Self, PopulationError> {
        if symbols.len() < 2 {
            return Err(PopulationError::TooSmall(symbols.len()));
        }
        if let Some(&bad) = symbols
            .iter()
            .find(|s| !machine.input_alphabet().contains(s))
        {
            return Err(PopulationError::SymbolNotInAlphabet(
                machine.symbols().name(bad),
            ));
        }
        Ok(InputAssignment { symbols })
    }

    /// Reads one input symbol per character.
    pub fn parse<M: Machine + ?Sized>(machine: &M, text: &str) -> Result<Self, PopulationError> {
        let mut symbols = Vec::with_capacity(text.len());
        for c in text.chars() {
            let s = machine
                .symbols()
                .symbol(c)
                .filter(|s| machine.input_alphabet().contains(s))
                .ok_or(PopulationError::SymbolNotInAlphabet(c))?;
            symbols.push(s);
        }
        Self::new(machine, symbols)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn count(&self, s: Symbol) -> usize {
        self.symbols.iter().filter(|&&x| x == s).count()
    }
}

/// Agent configurations indexed 0..n. Indices are internal to the engine;
/// protocols never observe them.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PopulationConfiguration {
    pub agents: Vec<AgentConfiguration>,
}

impl PopulationConfiguration {
    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    pub fn outputs(&self) -> Vec<Vec<Symbol>> {
        self.agents
            .iter()
            .map(|a| a.output_content().to_vec())
            .collect()
    }

    pub fn all_ready(&self) -> bool {
        self.agents.iter().all(AgentConfiguration::is_ready)
    }

    /// Agents sorted; the multiset view of the population.
    pub fn sorted(&self) -> PopulationConfiguration {
        let mut agents = self.agents.clone();
        agents.sort_unstable();
        PopulationConfiguration { agents }
    }
}

pub fn initial_configuration<M: Machine + ?Sized>(
    machine: &M,
    input: &InputAssignment,
) -> PopulationConfiguration {
    PopulationConfiguration {
        agents: input
            .symbols()
            .iter()
            .map(|&s| AgentConfiguration::initial(machine.initial_state(), s))
            .collect(),
    }
}

/// Encounter with `u` as initiator and `v` as responder. Returns the resulting
/// configuration and whether the interaction was effective.
pub fn encounter<M: Machine + ?Sized>(
    machine: &M,
    config: &PopulationConfiguration,
    u: usize,
    v: usize,
) -> Result<(PopulationConfiguration, bool), PopulationError> {
    let mut next = config.clone();
    let effective = encounter_in_place(machine, &mut next, u, v)?;
    Ok((next, effective))
}

/// In-place form of [`encounter`]. Arguments are validated before anything is
/// touched, so an error leaves `config` unchanged.
pub fn encounter_in_place<M: Machine + ?Sized>(
    machine: &M,
    config: &mut PopulationConfiguration,
    u: usize,
    v: usize,
) -> Result<bool, PopulationError> {
    if u == v {
        return Err(PopulationError::SelfInteraction(u));
    }
    let n = config.agents.len();
    for i in [u, v] {
        if i >= n {
            return Err(PopulationError::NoSuchAgent(i));
        }
    }
    let (a, b) = pair_mut(&mut config.agents, u, v);
    if a.working_flag || b.working_flag {
        return Ok(false);
    }
    let (qa, qb) = machine.interact(a.state, b.state);
    // Each receiver keeps its incoming head; the partner's whole outgoing
    // contents become its incoming contents.
    let from_a = a.outgoing.content().to_vec();
    a.incoming.replace_content(b.outgoing.content());
    b.incoming.replace_content(&from_a);
    a.state = qa;
    b.state = qb;
    a.working_flag = true;
    b.working_flag = true;
    Ok(true)
}

fn pair_mut<T>(items: &mut [T], u: usize, v: usize) -> (&mut T, &mut T) {
    if u < v {
        let (lo, hi) = items.split_at_mut(v);
        (&mut lo[u], &mut hi[0])
    } else {
        let (lo, hi) = items.split_at_mut(u);
        (&mut hi[0], &mut lo[v])
    }
}

/// Seeded source of scheduling decisions.
#[derive(Clone, Debug)]
pub struct Scheduler {
    rng: ChaCha8Rng,
    n: usize,
}

impl Scheduler {
    pub fn new(seed: u64, n: usize) -> Self {
        Scheduler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            n,
        }
    }

    /// Uniform over the n(n-1) ordered pairs of distinct agents.
    pub fn pair(&mut self) -> (usize, usize) {
        let n = self.n;
        let k = self.rng.gen_range(0..n * (n - 1));
        let u = k / (n - 1);
        let w = k % (n - 1);
        (u, if w >= u { w + 1 } else { w })
    }

    pub fn agent(&mut self) -> usize {
        self.rng.gen_range(0..self.n)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_range(0..2u8) == 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    /// Each tick: one ordered-pair encounter, then both participants run to readiness.
    #[default]
    Quiescent,
    /// Each tick: a fair coin picks one internal step of a random agent or one
    /// random ordered-pair encounter.
    Interleaved,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub seed: u64,
    pub max_events: u64,
    pub mode: Mode,
    /// Internal steps allowed before an agent counts as non-quiescent.
    pub step_budget: u64,
    /// Effective encounters without an output change that count as convergence.
    /// `None` means 20·n².
    pub window: Option<u64>,
    pub record_trace: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: 0,
            max_events: 1_000_000,
            mode: Mode::Quiescent,
            step_budget: 1_000_000,
            window: None,
            record_trace: false,
        }
    }
}

pub fn default_window(n: usize) -> u64 {
    20 * (n as u64) * (n as u64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    Internal { agent: usize, applied: bool },
    Encounter {
        initiator: usize,
        responder: usize,
        effective: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExecutionEvent {
    pub ordinal: u64,
    pub kind: EventKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    Converged,
    BudgetExceeded,
    Observer,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExecutionResult {
    pub final_config: PopulationConfiguration,
    pub events: u64,
    pub effective_encounters: u64,
    pub space: SpaceReport,
    pub converged: bool,
    pub stop: StopReason,
    pub outputs: Vec<Vec<Symbol>>,
    pub seed: u64,
    pub trace: Option<Vec<ExecutionEvent>>,
}

/// Output-stability heuristic: converged once `window` effective encounters
/// have passed with no output tape changing.
#[derive(Clone, Debug)]
pub struct ConvergenceProbe {
    window: u64,
    last: Vec<Vec<Symbol>>,
    quiet: u64,
}

impl ConvergenceProbe {
    pub fn new(window: u64, config: &PopulationConfiguration) -> Self {
        ConvergenceProbe {
            window: window.max(1),
            last: config.outputs(),
            quiet: 0,
        }
    }

    /// Record one event that touched `agents`.
    pub fn observe(&mut self, effective: bool, agents: &[usize], config: &PopulationConfiguration) {
        let mut changed = false;
        for &i in agents {
            let now = config.agents[i].output_content();
            if self.last[i] != now {
                self.last[i] = now.to_vec();
                changed = true;
            }
        }
        if changed {
            self.quiet = 0;
        } else if effective {
            self.quiet += 1;
        }
    }

    pub fn converged(&self) -> bool {
        self.quiet >= self.window
    }

    pub fn quiet_encounters(&self) -> u64 {
        self.quiet
    }
}

pub fn random_execution<M: Machine + ?Sized>(
    machine: &M,
    input: &InputAssignment,
    options: &RunOptions,
) -> Result<ExecutionResult, PopulationError> {
    random_execution_observed(machine, input, options, |_, _| ControlFlow::Continue(()))
}

/// Like [`random_execution`], calling `observer` after every event. The observer
/// can end the run early by returning `Break`.
pub fn random_execution_observed<M, F>(
    machine: &M,
    input: &InputAssignment,
    options: &RunOptions,
    mut observer: F,
) -> Result<ExecutionResult, PopulationError>
where
    M: Machine + ?Sized,
    F: FnMut(&ExecutionEvent, &PopulationConfiguration) -> ControlFlow<()>,
{
    let n = input.len();
    let mut sched = Scheduler::new(options.seed, n);
    let mut config = initial_configuration(machine, input);
    let mut space = SpaceReport::new(n);
    for (i, agent) in config.agents.iter().enumerate() {
        space.record(i, tape_extent(agent));
    }
    let mut pending = alloc::vec![0u64; n];
    if options.mode == Mode::Quiescent {
        for (i, agent) in config.agents.iter_mut().enumerate() {
            let q = run_until_ready(machine, agent, options.step_budget)?;
            space.record(i, q.peak);
        }
    }
    let window = options.window.unwrap_or_else(|| default_window(n));
    let mut probe = ConvergenceProbe::new(window, &config);
    let mut trace = options.record_trace.then(Vec::new);
    let mut events = 0;
    let mut effective_count = 0;
    let mut stop = StopReason::BudgetExceeded;

    while events < options.max_events {
        let (kind, touched): (EventKind, [usize; 2]) = match options.mode {
            Mode::Quiescent => {
                let (u, v) = sched.pair();
                let effective = encounter_in_place(machine, &mut config, u, v)?;
                if effective {
                    for i in [u, v] {
                        let q = run_until_ready(machine, &mut config.agents[i], options.step_budget)?;
                        space.record(i, q.peak);
                    }
                }
                (
                    EventKind::Encounter {
                        initiator: u,
                        responder: v,
                        effective,
                    },
                    [u, v],
                )
            }
            Mode::Interleaved => {
                if sched.coin() {
                    let i = sched.agent();
                    let agent = &mut config.agents[i];
                    let applied = agent.working_flag;
                    if applied {
                        pending[i] += 1;
                        if pending[i] > options.step_budget {
                            return Err(MachineError::NonQuiescent(options.step_budget).into());
                        }
                        machine.delta(agent)?;
                        space.record(i, tape_extent(agent));
                        if !agent.working_flag {
                            pending[i] = 0;
                        }
                    }
                    (EventKind::Internal { agent: i, applied }, [i, i])
                } else {
                    let (u, v) = sched.pair();
                    let effective = encounter_in_place(machine, &mut config, u, v)?;
                    (
                        EventKind::Encounter {
                            initiator: u,
                            responder: v,
                            effective,
                        },
                        [u, v],
                    )
                }
            }
        };
        let effective = matches!(kind, EventKind::Encounter { effective: true, .. });
        if effective {
            effective_count += 1;
        }
        let event = ExecutionEvent {
            ordinal: events,
            kind,
        };
        events += 1;
        if let Some(t) = trace.as_mut() {
            t.push(event);
        }
        probe.observe(effective, &touched, &config);
        if observer(&event, &config).is_break() {
            stop = StopReason::Observer;
            break;
        }
        if probe.converged() {
            stop = StopReason::Converged;
            break;
        }
    }

    Ok(ExecutionResult {
        outputs: config.outputs(),
        final_config: config,
        events,
        effective_encounters: effective_count,
        space,
        converged: stop == StopReason::Converged,
        stop,
        seed: options.seed,
        trace,
    })
}
