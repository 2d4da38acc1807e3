use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use hashbrown::HashMap;

use super::AnalysisError;
use crate::machine::{run_until_ready, tape_extent, Machine, Symbol};
use crate::population::{encounter_in_place, initial_configuration, InputAssignment, PopulationConfiguration};

/// How explored configurations are identified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Canonical {
    /// Agent order matters.
    #[default]
    Indexed,
    /// Agents sorted; configurations equal up to relabeling are merged.
    Multiset,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExploreOptions {
    /// Largest tape extent allowed on any agent.
    pub cell_cap: usize,
    /// Largest number of distinct configurations.
    pub config_cap: usize,
    pub step_budget: u64,
    pub canonical: Canonical,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        ExploreOptions {
            cell_cap: 64,
            config_cap: 1_000_000,
            step_budget: 1_000_000,
            canonical: Canonical::Indexed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CapHit {
    Cells { cells: usize, cap: usize },
    Configs { explored: usize, frontier: usize },
}

/// Reachable flag-0 configurations under quiescent steps.
///
/// Edge `(u, v)` indexes agents of the source configuration as stored (sorted,
/// in multiset mode).
#[derive(Clone, Debug)]
pub struct Exploration {
    pub configs: Vec<PopulationConfiguration>,
    pub succ: Vec<Vec<(u32, (u16, u16))>>,
    pub parent: Vec<Option<(u32, (u16, u16))>>,
    pub cap_hit: Option<CapHit>,
}

fn canonical(c: PopulationConfiguration, mode: Canonical) -> PopulationConfiguration {
    match mode {
        Canonical::Indexed => c,
        Canonical::Multiset => {
            let mut agents = c.agents;
            agents.sort_unstable();
            PopulationConfiguration { agents }
        }
    }
}

fn over_cap(c: &PopulationConfiguration, cap: usize) -> Option<usize> {
    c.agents
        .iter()
        .flat_map(tape_extent)
        .find(|&e| e > cap)
}

/// Ordered pairs worth trying. In multiset mode one representative per pair of
/// equal-configuration classes suffices.
fn pairs(c: &PopulationConfiguration, mode: Canonical) -> Vec<(usize, usize)> {
    let n = c.agents.len();
    match mode {
        Canonical::Indexed => (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect(),
        Canonical::Multiset => {
            let mut starts = Vec::new();
            for i in 0..n {
                if i == 0 || c.agents[i] != c.agents[i - 1] {
                    starts.push(i);
                }
            }
            let mut out = Vec::new();
            for &u in &starts {
                for &v in &starts {
                    if u != v {
                        out.push((u, v));
                    } else if u + 1 < n && c.agents[u + 1] == c.agents[u] {
                        out.push((u, u + 1));
                    }
                }
            }
            out
        }
    }
}

/// Breadth-first exploration from the input's initial configuration. `hook`
/// sees each quiescent step as (source, initiator, responder, result) with
/// the result in source agent order.
pub fn explore_with<M, F>(
    machine: &M,
    input: &InputAssignment,
    opts: &ExploreOptions,
    mut hook: F,
) -> Result<Exploration, AnalysisError>
where
    M: Machine + ?Sized,
    F: FnMut(&PopulationConfiguration, usize, usize, &PopulationConfiguration),
{
    let mut start = initial_configuration(machine, input);
    for agent in &mut start.agents {
        run_until_ready(machine, agent, opts.step_budget)?;
    }
    let mut ex = Exploration {
        configs: Vec::new(),
        succ: Vec::new(),
        parent: Vec::new(),
        cap_hit: None,
    };
    if let Some(cells) = over_cap(&start, opts.cell_cap) {
        ex.cap_hit = Some(CapHit::Cells { cells, cap: opts.cell_cap });
        return Ok(ex);
    }
    let start = canonical(start, opts.canonical);
    let mut index: HashMap<PopulationConfiguration, u32> = HashMap::new();
    index.insert(start.clone(), 0);
    ex.configs.push(start);
    ex.succ.push(Vec::new());
    ex.parent.push(None);
    let mut queue = VecDeque::from([0u32]);
    while let Some(id) = queue.pop_front() {
        let source = ex.configs[id as usize].clone();
        let mut out = Vec::new();
        for (u, v) in pairs(&source, opts.canonical) {
            let mut next = source.clone();
            encounter_in_place(machine, &mut next, u, v)?;
            for i in [u, v] {
                run_until_ready(machine, &mut next.agents[i], opts.step_budget)?;
            }
            if let Some(cells) = over_cap(&next, opts.cell_cap) {
                ex.cap_hit = Some(CapHit::Cells { cells, cap: opts.cell_cap });
                return Ok(ex);
            }
            hook(&source, u, v, &next);
            let next = canonical(next, opts.canonical);
            let target = match index.get(&next) {
                Some(&t) => t,
                None => {
                    if ex.configs.len() >= opts.config_cap {
                        ex.cap_hit = Some(CapHit::Configs {
                            explored: ex.configs.len(),
                            frontier: queue.len() + 1,
                        });
                        return Ok(ex);
                    }
                    let t = ex.configs.len() as u32;
                    index.insert(next.clone(), t);
                    ex.configs.push(next);
                    ex.succ.push(Vec::new());
                    ex.parent.push(Some((id, (u as u16, v as u16))));
                    queue.push_back(t);
                    t
                }
            };
            out.push((target, (u as u16, v as u16)));
        }
        ex.succ[id as usize] = out;
    }
    Ok(ex)
}

pub fn explore<M: Machine + ?Sized>(
    machine: &M,
    input: &InputAssignment,
    opts: &ExploreOptions,
) -> Result<Exploration, AnalysisError> {
    explore_with(machine, input, opts, |_, _, _, _| {})
}

impl Exploration {
    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    /// Strongly connected components, each a list of configuration ids.
    pub fn sccs(&self) -> Vec<Vec<u32>> {
        tarjan(&self.succ)
    }

    /// Components with no edge leaving them.
    pub fn terminal_sccs(&self) -> Vec<Vec<u32>> {
        let comps = self.sccs();
        let mut comp_of = vec![0usize; self.configs.len()];
        for (ci, c) in comps.iter().enumerate() {
            for &v in c {
                comp_of[v as usize] = ci;
            }
        }
        comps
            .iter()
            .enumerate()
            .filter(|(ci, c)| {
                c.iter().all(|&v| {
                    self.succ[v as usize]
                        .iter()
                        .all(|&(t, _)| comp_of[t as usize] == *ci)
                })
            })
            .map(|(_, c)| c.clone())
            .collect()
    }

    /// Shortest encounter sequence from the start to `node`.
    pub fn path_to(&self, node: u32) -> Vec<(usize, usize)> {
        let mut path = Vec::new();
        let mut at = node;
        while let Some((p, (u, v))) = self.parent[at as usize] {
            path.push((u as usize, v as usize));
            at = p;
        }
        path.reverse();
        path
    }
}

/// Iterative Tarjan.
fn tarjan(succ: &[Vec<(u32, (u16, u16))>]) -> Vec<Vec<u32>> {
    const UNSEEN: u32 = u32::MAX;
    let n = succ.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0u32;
    let mut call: Vec<(u32, usize)> = Vec::new();
    for root in 0..n as u32 {
        if index[root as usize] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        while let Some(&mut (v, ref mut next_edge)) = call.last_mut() {
            let vi = v as usize;
            if *next_edge == 0 && index[vi] == UNSEEN {
                index[vi] = counter;
                low[vi] = counter;
                counter += 1;
                stack.push(v);
                on_stack[vi] = true;
            }
            if let Some(&(w, _)) = succ[vi].get(*next_edge) {
                *next_edge += 1;
                let wi = w as usize;
                if index[wi] == UNSEEN {
                    call.push((w, 0));
                } else if on_stack[wi] {
                    low[vi] = low[vi].min(index[wi]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                let pi = parent as usize;
                low[pi] = low[pi].min(low[vi]);
            }
            if low[vi] == index[vi] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w as usize] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comps.push(comp);
            }
        }
    }
    comps
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Every fair execution stabilizes with every agent outputting this.
    StablyComputes(Vec<Symbol>),
    Fails(Counterexample),
    Unknown(CapHit),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailReason {
    /// Some bottom component has agents or configurations with differing outputs.
    NotUniform,
    /// Two bottom components settle on different outputs.
    Disagreement { first: Vec<Symbol>, other: Vec<Symbol> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    /// Encounters from the initial configuration into the offending component.
    pub path: Vec<(usize, usize)>,
    pub reason: FailReason,
    pub canonical: Canonical,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationResult {
    pub explored: usize,
    pub terminal_sccs: usize,
    pub verdict: Verdict,
}

/// The common output of every agent in every configuration of `comp`, if any.
fn uniform_output(ex: &Exploration, comp: &[u32]) -> Option<Vec<Symbol>> {
    let first = ex.configs[comp[0] as usize].agents[0].output_content().to_vec();
    comp.iter()
        .flat_map(|&c| ex.configs[c as usize].agents.iter())
        .all(|a| a.output_content() == first.as_slice())
        .then_some(first)
}

/// Decides stable computation on one input by exhausting the quiescent-step
/// graph: every bottom component must be output-uniform, all with one value.
pub fn exhaustive_verify<M: Machine + ?Sized>(
    machine: &M,
    input: &InputAssignment,
    opts: &ExploreOptions,
) -> Result<VerificationResult, AnalysisError> {
    let ex = explore(machine, input, opts)?;
    if let Some(hit) = ex.cap_hit {
        return Ok(VerificationResult {
            explored: ex.len(),
            terminal_sccs: 0,
            verdict: Verdict::Unknown(hit),
        });
    }
    let mut terminals = ex.terminal_sccs();
    // Ids follow breadth-first discovery, so the smallest id is the shallowest.
    terminals.sort_by_key(|c| c.iter().min().copied());
    let shallowest = |comp: &[u32]| *comp.iter().min().expect("non-empty component");
    let mut value: Option<Vec<Symbol>> = None;
    let mut verdict = None;
    for comp in &terminals {
        match (uniform_output(&ex, comp), &value) {
            (None, _) => {
                verdict = Some(Verdict::Fails(Counterexample {
                    path: ex.path_to(shallowest(comp)),
                    reason: FailReason::NotUniform,
                    canonical: opts.canonical,
                }));
                break;
            }
            (Some(b), None) => value = Some(b),
            (Some(b), Some(first)) if &b != first => {
                verdict = Some(Verdict::Fails(Counterexample {
                    path: ex.path_to(shallowest(comp)),
                    reason: FailReason::Disagreement {
                        first: first.clone(),
                        other: b,
                    },
                    canonical: opts.canonical,
                }));
                break;
            }
            _ => {}
        }
    }
    Ok(VerificationResult {
        explored: ex.len(),
        terminal_sccs: terminals.len(),
        verdict: verdict.unwrap_or_else(|| Verdict::StablyComputes(value.unwrap_or_default())),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PropertyVerdict {
    Holds,
    Violated { path: Vec<(usize, usize)> },
    Unknown(CapHit),
}

/// Checks that `holds` is true of every configuration in every bottom
/// component.
pub fn verify_terminal_property<M, P>(
    machine: &M,
    input: &InputAssignment,
    opts: &ExploreOptions,
    holds: P,
) -> Result<PropertyVerdict, AnalysisError>
where
    M: Machine + ?Sized,
    P: Fn(&PopulationConfiguration) -> bool,
{
    let ex = explore(machine, input, opts)?;
    if let Some(hit) = ex.cap_hit {
        return Ok(PropertyVerdict::Unknown(hit));
    }
    let bad = ex
        .terminal_sccs()
        .into_iter()
        .flatten()
        .filter(|&c| !holds(&ex.configs[c as usize]))
        .min();
    Ok(match bad {
        Some(c) => PropertyVerdict::Violated { path: ex.path_to(c) },
        None => PropertyVerdict::Holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn succ_of(edges: &[&[u32]]) -> Vec<Vec<(u32, (u16, u16))>> {
        edges
            .iter()
            .map(|e| e.iter().map(|&t| (t, (0, 1))).collect())
            .collect()
    }

    #[test]
    fn tarjan_on_small_graphs() {
        // 0 -> 1 <-> 2, 2 -> 3, 3 -> 3
        let s = succ_of(&[&[1], &[2], &[1, 3], &[3]]);
        let mut comps: Vec<Vec<u32>> = tarjan(&s)
            .into_iter()
            .map(|mut c| {
                c.sort();
                c
            })
            .collect();
        comps.sort();
        assert_eq!(comps, vec![vec![0], vec![1, 2], vec![3]]);
    }

    #[test]
    fn tarjan_deep_chain_does_not_recurse() {
        let n = 200_000u32;
        let s: Vec<Vec<(u32, (u16, u16))>> = (0..n)
            .map(|i| if i + 1 < n { vec![(i + 1, (0, 1))] } else { vec![(0, (0, 1))] })
            .collect();
        assert_eq!(tarjan(&s).len(), 1);
    }
}
