//! Structural invariants of the avoidability machinery.

use loewner_lab::conditions::{avoidable_components_in, tri_route_graph};
use loewner_lab::geometry::{Annulus, Point};
use loewner_lab::lattice::TriDomain;
use loewner_lab::models::{explore_from, HashColorOracle};

/// Enlarging the slit never turns a forced component avoidable, for
/// components whose node set is unchanged and with tip and target outside
/// them (fewer routes can only make a removal more disconnecting).
#[test]
fn forced_components_stay_forced_as_slit_grows() {
    let domain = TriDomain::rhombus(8, 8);
    let graph = tri_route_graph(&domain).unwrap();
    let annuli = [
        Annulus::new(Point::new(4.0, 3.0), 1.3, 3.4).unwrap(),
        Annulus::new(Point::new(8.0, 1.5), 1.1, 2.9).unwrap(),
        Annulus::new(Point::new(6.0, 5.0), 1.2, 3.1).unwrap(),
    ];
    for seed in 0..12u64 {
        let mut oracle = HashColorOracle::new(seed, 0.5);
        let steps = explore_from(&domain, domain.entry(), &mut oracle).unwrap();
        if steps.len() < 6 {
            continue;
        }
        let k1 = steps.len() / 3;
        let k2 = 2 * steps.len() / 3;
        for annulus in &annuli {
            let mut eval = |k: usize| {
                let mut slit = vec![false; graph.len()];
                for s in &steps[..k] {
                    if let Some(n) = graph.node_at(s.face.center()) {
                        slit[n] = true;
                    }
                }
                let tip = graph.node_at(steps[k].face.center()).unwrap();
                if slit[tip] || slit[graph.target] {
                    return None;
                }
                avoidable_components_in(&graph, annulus, Some(&slit), tip, graph.target)
                    .ok()
                    .map(|a| (a, slit, tip))
            };
            let Some((early, slit1, tip1)) = eval(k1) else { continue };
            let Some((late, slit2, tip2)) = eval(k2) else { continue };
            // compare components whose node sets are identical at both
            // times, with tip and target outside
            for id_early in 0..early.n_components() {
                let nodes: Vec<usize> = (0..graph.len())
                    .filter(|&v| early.component_of[v] == id_early)
                    .collect();
                if nodes.contains(&tip1) || nodes.contains(&tip2) || nodes.contains(&graph.target)
                {
                    continue;
                }
                // same node set later?
                let id_late = late.component_of[nodes[0]];
                if id_late == usize::MAX {
                    continue;
                }
                let late_nodes: Vec<usize> = (0..graph.len())
                    .filter(|&v| late.component_of[v] == id_late)
                    .collect();
                if late_nodes != nodes {
                    continue;
                }
                if !early.avoidable[id_early] {
                    assert!(
                        !late.avoidable[id_late],
                        "seed {seed}: forced component became avoidable as the slit grew"
                    );
                }
            }
            let _ = (slit1, slit2);
        }
    }
}
