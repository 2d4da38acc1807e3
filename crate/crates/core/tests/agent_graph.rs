use pm_core::analysis::{
    build_agent_config_graph, compute_r_values, identity_embedding, verify_q_property, AgentConfigGraph,
    ExploreOptions,
};
use pm_core::machine::Machine;
use pm_core::protocols::{tables, Compiled, LogPredicate, PowerOfTwo};

fn graphs<M: Machine>(m: &M) -> Vec<AgentConfigGraph> {
    (2..=4)
        .map(|n| compute_r_values(build_agent_config_graph(m, n, &ExploreOptions::default()).unwrap()).unwrap())
        .collect()
}

fn check_suite<M: Machine>(m: &M) -> Vec<AgentConfigGraph> {
    let gs = graphs(m);
    for g in &gs {
        assert!(g.r.iter().all(Option::is_some));
        for &i in &g.initial {
            assert_eq!(g.r[i as usize], Some(1));
        }
        let bound = 1u64.checked_shl(g.len() as u32).unwrap_or(u64::MAX);
        assert!(g.r_max().unwrap() <= bound);
        g.label_function().unwrap();
        let q = verify_q_property(m, g, 4, &ExploreOptions::default()).unwrap();
        assert!(q.fails.is_empty(), "n={} fails {:?}", g.n, q.fails);
    }
    for i in 0..gs.len() {
        for j in i + 1..gs.len() {
            identity_embedding(&gs[i], &gs[j]).unwrap();
        }
    }
    gs
}

#[test]
fn toggle_suite() {
    check_suite(&tables::toggle());
}

#[test]
fn pow2_suite() {
    check_suite(&Compiled::new(PowerOfTwo).unwrap());
}

#[test]
fn logp_suite() {
    let m = Compiled::new(LogPredicate).unwrap();
    let gs = check_suite(&m);
    let g4 = &gs[2];
    for a in &g4.nodes {
        assert!(m.decode_vars(a).unwrap()[0].uint() <= 3);
    }
    let g2 = &gs[0];
    let two = g2
        .nodes
        .iter()
        .position(|a| m.decode_vars(a).unwrap()[0].uint() == 2)
        .expect("x = 2 reachable from aa");
    assert_eq!(g2.r[two], Some(2));
}

#[test]
fn r_values_follow_edges() {
    let m = Compiled::new(PowerOfTwo).unwrap();
    for g in graphs(&m) {
        for (i, r) in g.r.iter().enumerate() {
            if g.initial.contains(&(i as u32)) {
                continue;
            }
            let best = g
                .edges
                .iter()
                .filter(|e| e.to == i as u32)
                .map(|e| g.r[e.from as usize].unwrap() + g.r[e.partner as usize].unwrap())
                .min();
            assert_eq!(*r, best);
        }
    }
}
