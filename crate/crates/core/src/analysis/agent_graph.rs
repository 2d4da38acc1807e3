use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use hashbrown::{HashMap, HashSet};

use super::explore::{explore_with, Canonical, CapHit, ExploreOptions};
use super::AnalysisError;
use crate::machine::{run_until_ready, AgentConfiguration, Machine, Symbol};
use crate::population::InputAssignment;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Initiator,
    Responder,
}

impl Role {
    pub fn letter(self) -> char {
        match self {
            Role::Initiator => 'i',
            Role::Responder => 'r',
        }
    }
}

/// `from` met `partner` in role `role` and became `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledEdge {
    pub from: u32,
    pub to: u32,
    pub partner: u32,
    pub role: Role,
}

/// Ready agent configurations reachable in populations of one size, with the
/// single-interaction transitions between them.
#[derive(Clone, Debug)]
pub struct AgentConfigGraph {
    pub n: usize,
    pub nodes: Vec<AgentConfiguration>,
    pub initial: BTreeSet<u32>,
    pub edges: BTreeSet<LabeledEdge>,
    /// Filled by [`compute_r_values`].
    pub r: Vec<Option<u64>>,
    index: HashMap<AgentConfiguration, u32>,
}

impl AgentConfigGraph {
    fn empty(n: usize) -> Self {
        AgentConfigGraph {
            n,
            nodes: Vec::new(),
            initial: BTreeSet::new(),
            edges: BTreeSet::new(),
            r: Vec::new(),
            index: HashMap::new(),
        }
    }

    fn intern(&mut self, a: &AgentConfiguration) -> u32 {
        if let Some(&i) = self.index.get(a) {
            return i;
        }
        let i = self.nodes.len() as u32;
        self.nodes.push(a.clone());
        self.index.insert(a.clone(), i);
        self.r.push(None);
        i
    }

    pub fn node(&self, a: &AgentConfiguration) -> Option<u32> {
        self.index.get(a).copied()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn r_max(&self) -> Option<u64> {
        self.r.iter().flatten().copied().max()
    }

    /// The labeling as a map; `Err` names two edges that share a label but
    /// disagree on the target.
    pub fn label_function(&self) -> Result<BTreeMap<(u32, u32, Role), u32>, (LabeledEdge, LabeledEdge)> {
        let mut f: BTreeMap<(u32, u32, Role), LabeledEdge> = BTreeMap::new();
        for e in &self.edges {
            if let Some(prev) = f.insert((e.from, e.partner, e.role), *e) {
                if prev.to != e.to {
                    return Err((prev, *e));
                }
            }
        }
        Ok(f.into_iter().map(|(k, e)| (k, e.to)).collect())
    }
}

/// Every input assignment of size `n` up to order, as symbol multisets.
pub fn input_multisets(alphabet: &[Symbol], n: usize) -> Vec<Vec<Symbol>> {
    fn rec(alpha: &[Symbol], n: usize, cur: &mut Vec<Symbol>, out: &mut Vec<Vec<Symbol>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for (i, &s) in alpha.iter().enumerate() {
            cur.push(s);
            rec(&alpha[i..], n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(alphabet, n, &mut Vec::new(), &mut out);
    out
}

/// Projects the exhaustive explorations of every size-`n` input onto single
/// agents. Exploration caps surface as errors.
pub fn build_agent_config_graph<M: Machine + ?Sized>(
    machine: &M,
    n: usize,
    opts: &ExploreOptions,
) -> Result<AgentConfigGraph, AnalysisError> {
    let mut g = AgentConfigGraph::empty(n);
    for &s in machine.input_alphabet() {
        let mut a = AgentConfiguration::initial(machine.initial_state(), s);
        run_until_ready(machine, &mut a, opts.step_budget)?;
        let i = g.intern(&a);
        g.initial.insert(i);
    }
    let opts = ExploreOptions {
        canonical: Canonical::Multiset,
        ..opts.clone()
    };
    for symbols in input_multisets(machine.input_alphabet(), n) {
        let x = InputAssignment::new(machine, symbols)?;
        let mut steps = Vec::new();
        let ex = explore_with(machine, &x, &opts, |src, u, v, dst| {
            steps.push([
                (src.agents[u].clone(), src.agents[v].clone(), Role::Initiator, dst.agents[u].clone()),
                (src.agents[v].clone(), src.agents[u].clone(), Role::Responder, dst.agents[v].clone()),
            ]);
        })?;
        match ex.cap_hit {
            Some(CapHit::Cells { cells, cap }) => return Err(AnalysisError::CellCapExceeded { cells, cap }),
            Some(CapHit::Configs { explored, frontier }) => {
                return Err(AnalysisError::ConfigCapExceeded { explored, frontier })
            }
            None => {}
        }
        for c in &ex.configs {
            for a in &c.agents {
                g.intern(a);
            }
        }
        for pair in steps {
            for (from, partner, role, to) in pair {
                let e = LabeledEdge {
                    from: g.intern(&from),
                    to: g.intern(&to),
                    partner: g.intern(&partner),
                    role,
                };
                g.edges.insert(e);
            }
        }
    }
    Ok(g)
}

/// Least fixed point of `r(a) = 1` on initial nodes and
/// `r(a) = min r(from) + r(partner)` over edges into `a`.
pub fn compute_r_values(mut g: AgentConfigGraph) -> Result<AgentConfigGraph, AnalysisError> {
    let mut r: Vec<Option<u64>> = alloc::vec![None; g.nodes.len()];
    for &i in &g.initial {
        r[i as usize] = Some(1);
    }
    loop {
        let mut changed = false;
        for e in &g.edges {
            if g.initial.contains(&e.to) {
                continue;
            }
            if let (Some(a), Some(b)) = (r[e.from as usize], r[e.partner as usize]) {
                let cand = a + b;
                if r[e.to as usize].is_none_or(|cur| cand < cur) {
                    r[e.to as usize] = Some(cand);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    if let Some(i) = r.iter().position(Option::is_none) {
        return Err(AnalysisError::UnassignedNode(alloc::boxed::Box::new(g.nodes[i].clone())));
    }
    g.r = r;
    Ok(g)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QReport {
    /// Nodes with `r <= r_cap` that were checked and witnessed.
    pub holds: Vec<u32>,
    /// Nodes with `r <= r_cap` not found in any population of size `r`.
    pub fails: Vec<u32>,
    /// Nodes above the cap.
    pub skipped: Vec<u32>,
}

/// For each node `a` with `r(a) <= r_cap`, searches every population of size
/// `r(a)` for a reachable configuration containing `a`. Initial nodes count as
/// witnessed by initialization.
pub fn verify_q_property<M: Machine + ?Sized>(
    machine: &M,
    g: &AgentConfigGraph,
    r_cap: u64,
    opts: &ExploreOptions,
) -> Result<QReport, AnalysisError> {
    let mut seen: BTreeMap<u64, HashSet<AgentConfiguration>> = BTreeMap::new();
    let mut report = QReport::default();
    for (i, a) in g.nodes.iter().enumerate() {
        let i = i as u32;
        let r = g.r[i as usize].ok_or_else(|| {
            AnalysisError::UnassignedNode(alloc::boxed::Box::new(a.clone()))
        })?;
        if r > r_cap {
            report.skipped.push(i);
            continue;
        }
        if g.initial.contains(&i) {
            report.holds.push(i);
            continue;
        }
        if let alloc::collections::btree_map::Entry::Vacant(slot) = seen.entry(r) {
            let sub = build_agent_config_graph(machine, r as usize, opts)?;
            slot.insert(sub.nodes.into_iter().collect());
        }
        if seen[&r].contains(a) {
            report.holds.push(i);
        } else {
            report.fails.push(i);
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmbeddingFailure {
    MissingNode(u32),
    NotInitial(u32),
    MissingEdge(LabeledEdge),
}

/// Checks that `small` maps into `large` by identity on configurations: every
/// node and labeled edge of `small` is present in `large`, initial nodes stay
/// initial.
pub fn identity_embedding(small: &AgentConfigGraph, large: &AgentConfigGraph) -> Result<Vec<u32>, EmbeddingFailure> {
    let mut map = Vec::with_capacity(small.nodes.len());
    for (i, a) in small.nodes.iter().enumerate() {
        let j = large.node(a).ok_or(EmbeddingFailure::MissingNode(i as u32))?;
        if small.initial.contains(&(i as u32)) && !large.initial.contains(&j) {
            return Err(EmbeddingFailure::NotInitial(i as u32));
        }
        map.push(j);
    }
    for e in &small.edges {
        let image = LabeledEdge {
            from: map[e.from as usize],
            to: map[e.to as usize],
            partner: map[e.partner as usize],
            role: e.role,
        };
        if !large.edges.contains(&image) {
            return Err(EmbeddingFailure::MissingEdge(*e));
        }
    }
    Ok(map)
}
