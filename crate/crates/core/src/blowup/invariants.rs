use std::collections::HashMap;

use super::tree::{weak_component, ReductionTree};

/// `rho(D)`, recorded combinatorially when the component was created.
pub fn component_weight(tree: &ReductionTree, d: usize) -> usize {
    tree.component(d).weight
}

/// Number of components meeting one copy of `d`.
pub fn component_valence(tree: &ReductionTree, d: usize) -> usize {
    let c = tree.component(d);
    c.neighbors
        .iter()
        .map(|&n| (tree.component(n).multiplicity / c.multiplicity).max(1))
        .sum()
}

/// Weights of the components created above `q`, restarted at 1 for the
/// first of them; components through `q` from below do not contribute.
pub fn relative_weights(tree: &ReductionTree, q: usize) -> HashMap<usize, usize> {
    let mut w = HashMap::new();
    for p in tree.subtree(q) {
        if let Some(b) = tree.point(p).blowup {
            let cid = tree.blowup(b).component;
            let s: usize = tree.point(p).components.iter().filter_map(|c| w.get(c)).sum();
            w.insert(cid, s.max(1));
        }
    }
    w
}

/// Tangency excess at `q`: sum of `rho(D) (iota - 1)` over saddle-nodes above
/// `q` whose weak direction lies in a component `D` created above `q`, with
/// weights relative to `q` and one term per geometric copy over one copy of
/// `q`. At the origin this is `tau_0`. Zero at a simple point.
pub fn tangency_excess(tree: &ReductionTree, q: usize) -> usize {
    excess(tree, q, |p| tree.point(p).multiplicity / tree.point(q).multiplicity)
}

/// `tau_0` of the real foliation: only real saddle-nodes count.
pub fn real_tangency_excess(tree: &ReductionTree) -> usize {
    excess(tree, 0, |p| tree.point(p).real_copies)
}

/// Real tangency excess at a real point `q`, over one real copy of `q`.
pub fn real_tangency_excess_at(tree: &ReductionTree, q: usize) -> usize {
    let rq = tree.point(q).real_copies;
    if rq == 0 {
        return 0;
    }
    excess(tree, q, |p| tree.point(p).real_copies / rq)
}

fn excess(tree: &ReductionTree, q: usize, copies: impl Fn(usize) -> usize) -> usize {
    if tree.point(q).blowup.is_none_or(|b| tree.blowup(b).auxiliary) {
        return 0;
    }
    let w = relative_weights(tree, q);
    let mut total = 0;
    for p in tree.subtree(q) {
        let pt = tree.point(p);
        if pt.blowup.is_some() {
            continue;
        }
        if let (Some(iota), Some(d)) = (pt.class.weak_index(), weak_component(pt)) {
            if let Some(rho) = w.get(&d) {
                total += copies(p) * rho * (iota - 1);
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::reduce_singularities;
    use crate::foliation::FoliationGerm;

    fn germ(p: &[(i64, u32, u32)], q: &[(i64, u32, u32)]) -> FoliationGerm {
        FoliationGerm::from_int_terms(p, q).unwrap()
    }

    #[test]
    fn cusp_dual_graph() {
        let t = reduce_singularities(&germ(&[(2, 0, 1)], &[(3, 2, 0)])).unwrap();
        assert_eq!(component_valence(&t, 1), 1);
        assert_eq!(component_valence(&t, 2), 1);
        assert_eq!(component_valence(&t, 3), 2);
        assert_eq!(tangency_excess(&t, 0), 0);
    }

    #[test]
    fn single_blowup_has_no_neighbors() {
        let t = reduce_singularities(&germ(&[(1, 1, 0)], &[(1, 0, 1)])).unwrap();
        assert_eq!(component_valence(&t, 1), 0);
        assert_eq!(component_weight(&t, 1), 1);
    }

    #[test]
    fn example_has_no_tangent_saddle_node() {
        let ex = germ(&[(1, 0, 2), (1, 4, 0)], &[(-1, 1, 1), (1, 5, 0), (1, 1, 2)]);
        let t = reduce_singularities(&ex).unwrap();
        assert_eq!(tangency_excess(&t, 0), 0);
        assert_eq!(real_tangency_excess(&t), 0);
    }

    #[test]
    fn tangent_saddle_node_counts_once() {
        // (x^2 + y^2) d/dx + (x y + y^2) d/dy: after one blow-up the point u = 0
        // carries x (1 + u^2) d/dx + (u^2 - u^3) d/du, a saddle-node whose weak
        // direction is the exceptional line.
        let f = germ(&[(1, 2, 0), (1, 0, 2)], &[(1, 1, 1), (1, 0, 2)]);
        let t = reduce_singularities(&f).unwrap();
        assert_eq!(t.blowup_count(), 1);
        assert_eq!(t.tangent_saddle_nodes().len(), 1);
        assert_eq!(tangency_excess(&t, 0), 1);
        assert_eq!(real_tangency_excess(&t), 1);
        // Relative to the saddle-node itself the sum is empty.
        let (sn, _) = t.tangent_saddle_nodes()[0];
        assert_eq!(tangency_excess(&t, sn), 0);
    }
}
