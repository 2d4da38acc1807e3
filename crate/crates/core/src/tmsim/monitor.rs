use alloc::string::String;
use alloc::vec::Vec;
use core::ops::ControlFlow;
use thiserror::Error;

use super::distributed::{reassemble_tape, DistributedTm, HEAD, HOLD, OUT, PHASE, REJECT, TAPE};
use crate::machine::MachineError;
use crate::population::{EventKind, ExecutionEvent, PopulationConfiguration};
use crate::protocols::ids::{BINPUT, ID, PS, SUB};
use crate::protocols::{Compiled, IdAssignment, Vars};

pub type TmProtocol = Compiled<IdAssignment<DistributedTm>>;

pub fn tm_protocol(tm: super::TmSpec) -> TmProtocol {
    let wrapped = IdAssignment::new(DistributedTm::new(tm)).expect("simulation fields avoid reserved names");
    Compiled::new(wrapped).expect("tape alphabet is well formed")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimStatus {
    Running,
    Accepted,
    Rejected,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AuditViolation {
    #[error("event {event}: agent {agent} holds the token for cell {head}")]
    Ownership { event: u64, agent: u64, head: u64 },
    #[error("event {event}: agent {agent} uses {cells} local cells, cap {cap}")]
    LocalCap { event: u64, agent: u64, cells: usize, cap: usize },
    #[error("event {event}: agent {agent} dropped an accepting output")]
    AcceptRetracted { event: u64, agent: u64 },
    #[error("event {event}: undecodable agent: {source}")]
    Decode { event: u64, source: MachineError },
}

/// Watches a simulation run, auditing every event once ids have settled, and
/// asks the run to stop once the simulated machine halts.
pub struct TmMonitor<'a> {
    proto: &'a TmProtocol,
    n: u64,
    vars: Vec<Vars>,
    accepted: Vec<bool>,
    pub status: SimStatus,
    pub violation: Option<AuditViolation>,
    pub handoffs: u64,
    holder: Option<u64>,
}

impl<'a> TmMonitor<'a> {
    pub fn new(proto: &'a TmProtocol, n: usize) -> Self {
        TmMonitor {
            proto,
            n: n as u64,
            vars: Vec::new(),
            accepted: alloc::vec![false; n],
            status: SimStatus::Running,
            violation: None,
            handoffs: 0,
            holder: None,
        }
    }

    fn settled(&self) -> bool {
        self.vars.iter().all(|v| v[PS].uint() == self.n)
    }

    pub fn local_tapes(&self) -> Vec<Vec<u8>> {
        let mut by_id: Vec<(u64, Vec<u8>)> = self
            .vars
            .iter()
            .map(|v| (v[ID].uint(), v[SUB + TAPE].str().to_vec()))
            .collect();
        by_id.sort();
        by_id.into_iter().map(|(_, t)| t).collect()
    }

    /// Input symbols in id order: the tape the simulated machine started from.
    pub fn simulated_input(&self) -> Vec<u8> {
        let tm = self.proto.program().sub().tm();
        let mut by_id: Vec<(u64, u8)> = self
            .vars
            .iter()
            .map(|v| (v[ID].uint(), tm.input_symbols()[v[BINPUT].uint() as usize]))
            .collect();
        by_id.sort();
        by_id.into_iter().map(|(_, s)| s).collect()
    }

    /// The simulated tape, valid once ids have settled.
    pub fn global_tape(&self) -> Vec<u8> {
        reassemble_tape(&self.local_tapes())
    }

    pub fn render_tape(&self) -> String {
        self.proto.program().sub().tm().render(&self.global_tape())
    }

    fn audit(&mut self, event: u64, agents: &[usize]) -> Result<(), AuditViolation> {
        let cap = self.proto.program().sub().local_cap(self.n);
        let mut holder = None;
        for (i, v) in self.vars.iter().enumerate() {
            let me = v[ID].uint();
            if v[SUB + PHASE].uint() == HOLD {
                holder = Some(me);
                if v[SUB + HEAD].uint() % self.n != me {
                    return Err(AuditViolation::Ownership { event, agent: me, head: v[SUB + HEAD].uint() });
                }
            }
            if agents.contains(&i) {
                let cells = v[SUB + TAPE].str().len();
                if cells > cap {
                    return Err(AuditViolation::LocalCap { event, agent: me, cells, cap });
                }
                let out = v[SUB + OUT].uint() == 1;
                if self.accepted[i] && !out {
                    return Err(AuditViolation::AcceptRetracted { event, agent: me });
                }
                self.accepted[i] |= out;
            }
        }
        if holder.is_some() && holder != self.holder {
            self.handoffs += 1;
        }
        self.holder = holder;
        Ok(())
    }

    fn refresh(&mut self, config: &PopulationConfiguration, agents: &[usize], event: u64) -> Result<(), AuditViolation> {
        for &i in agents {
            self.vars[i] = self
                .proto
                .decode_vars(&config.agents[i])
                .map_err(|source| AuditViolation::Decode { event, source })?;
        }
        Ok(())
    }

    /// Observer for [`crate::population::random_execution_observed`].
    pub fn observe(&mut self, ev: &ExecutionEvent, config: &PopulationConfiguration) -> ControlFlow<()> {
        let touched: Vec<usize> = if self.vars.is_empty() {
            if !config.all_ready() {
                return ControlFlow::Continue(());
            }
            self.vars = alloc::vec![Vars::new(); config.agents.len()];
            (0..config.agents.len()).collect()
        } else {
            match ev.kind {
                EventKind::Encounter { initiator, responder, effective: true } => alloc::vec![initiator, responder],
                EventKind::Internal { agent, applied: true } if config.agents[agent].is_ready() => alloc::vec![agent],
                _ => return ControlFlow::Continue(()),
            }
        };
        if touched.iter().any(|&i| !config.agents[i].is_ready()) {
            return ControlFlow::Continue(());
        }
        if let Err(e) = self.refresh(config, &touched, ev.ordinal) {
            self.violation = Some(e);
            return ControlFlow::Break(());
        }
        if !self.settled() {
            self.accepted.iter_mut().for_each(|a| *a = false);
            return ControlFlow::Continue(());
        }
        if let Err(e) = self.audit(ev.ordinal, &touched) {
            self.violation = Some(e);
            return ControlFlow::Break(());
        }
        let phases = || self.vars.iter().map(|v| v[SUB + PHASE].uint());
        if self.vars.iter().all(|v| v[SUB + OUT].uint() == 1) {
            self.status = SimStatus::Accepted;
            return ControlFlow::Break(());
        }
        if phases().any(|p| p == REJECT) {
            self.status = SimStatus::Rejected;
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    }
}
