use alloc::string::String;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use super::{AgentProgram, Ambient, Vars};
use crate::machine::MachineError;
use crate::population::{default_window, RunOptions, Scheduler};

/// Outcome of a variable-level run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShimResult {
    pub vars: Vec<Vars>,
    pub outputs: Vec<String>,
    pub events: u64,
    pub converged: bool,
}

/// Runs `program` directly on variables, with no tapes, drawing the same
/// encounter sequence as a quiescent-mode run with `options.seed`.
///
/// `observer` sees every agent's variables after each event.
pub fn shim_execution<P, F>(
    program: &P,
    input: &[char],
    options: &RunOptions,
    mut observer: F,
) -> Result<ShimResult, MachineError>
where
    P: AgentProgram + ?Sized,
    F: FnMut(u64, &[Vars]) -> ControlFlow<()>,
{
    let n = input.len();
    let amb = Ambient::default();
    let mut sched = Scheduler::new(options.seed, n);
    let mut vars: Vec<Vars> = input.iter().map(|&c| program.init(c, &amb)).collect();
    let mut outputs: Vec<String> = vars.iter().map(|v| program.output(v)).collect();
    let window = options.window.unwrap_or_else(|| default_window(n)).max(1);
    let mut quiet = 0;
    let mut events = 0;
    let mut converged = false;
    while events < options.max_events {
        let (u, v) = sched.pair();
        let mu = program.message(&vars[u]);
        let mv = program.message(&vars[v]);
        vars[u] = program.step(&vars[u], &mv, true, &amb)?;
        vars[v] = program.step(&vars[v], &mu, false, &amb)?;
        let mut changed = false;
        for i in [u, v] {
            let out = program.output(&vars[i]);
            if out != outputs[i] {
                outputs[i] = out;
                changed = true;
            }
        }
        quiet = if changed { 0 } else { quiet + 1 };
        events += 1;
        if observer(events - 1, &vars).is_break() {
            break;
        }
        if quiet >= window {
            converged = true;
            break;
        }
    }
    Ok(ShimResult {
        vars,
        outputs,
        events,
        converged,
    })
}
