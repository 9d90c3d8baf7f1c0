use std::fmt::Write;

use super::invariants::component_valence;
use super::tree::{ReductionTree, TreePoint};

/// Default leaf label: class and weak index.
pub fn default_leaf_label(p: &TreePoint) -> String {
    match p.class.weak_index() {
        Some(k) => format!("{} iota={}", p.class.tag(), k),
        None => p.class.tag().to_string(),
    }
}

/// Dual graph of the divisor in DOT syntax. Components are nodes labeled
/// `Dk rho=.. val=..`; final singularities hang off the components through
/// them. Node order follows creation order.
pub fn export_dot(tree: &ReductionTree, leaf_label: &dyn Fn(&TreePoint) -> String) -> String {
    let mut s = String::from("graph reduction {\n");
    let visible: Vec<_> = tree.visible_components().collect();
    for c in &visible {
        let mut label = format!(
            "D{} \u{3c1}={} val={}",
            c.id,
            c.weight,
            component_valence(tree, c.id)
        );
        if c.dicritical {
            label.push_str(" dicritical");
        }
        if c.multiplicity > 1 {
            let _ = write!(label, " x{}", c.multiplicity);
        }
        let _ = writeln!(s, "  D{} [shape=box, label=\"{}\"];", c.id, label);
    }
    for c in &visible {
        for &n in &c.neighbors {
            if n > c.id && !tree.component(n).auxiliary {
                let _ = writeln!(s, "  D{} -- D{};", c.id, n);
            }
        }
    }
    for p in tree.final_singularities() {
        let mut label = leaf_label(p);
        if p.multiplicity > 1 {
            let _ = write!(label, " x{}", p.multiplicity);
        }
        let _ = write!(label, " ({})", if p.is_real() { "real" } else { "non-real" });
        let _ = writeln!(s, "  p{} [shape=ellipse, label=\"{}\"];", p.id, label);
        let visible_comps: Vec<_> = p
            .components
            .iter()
            .filter(|&&c| !tree.component(c).auxiliary)
            .collect();
        if visible_comps.is_empty() && p.parent.is_some() {
            // Point of the bookkeeping line of a simple origin.
            continue;
        }
        for c in visible_comps {
            let _ = writeln!(s, "  p{} -- D{} [style=dashed];", p.id, c);
        }
    }
    if tree.visible_components().next().is_none() && tree.point(0).class.is_singular() {
        let _ = writeln!(s, "  p0 [shape=ellipse, label=\"{}\"];", leaf_label(tree.point(0)));
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::reduce_singularities;
    use crate::foliation::FoliationGerm;

    #[test]
    fn radial_graph() {
        let f = FoliationGerm::from_int_terms(&[(1, 1, 0)], &[(1, 0, 1)]).unwrap();
        let dot = export_dot(&reduce_singularities(&f).unwrap(), &default_leaf_label);
        assert!(dot.contains("D1 \u{3c1}=1 val=0 dicritical"));
        assert_eq!(dot.matches("shape=box").count(), 1);
    }

    #[test]
    fn cusp_graph_is_a_star() {
        let f = FoliationGerm::from_int_terms(&[(2, 0, 1)], &[(3, 2, 0)]).unwrap();
        let dot = export_dot(&reduce_singularities(&f).unwrap(), &default_leaf_label);
        assert!(dot.contains("D1 -- D3"));
        assert!(dot.contains("D2 -- D3"));
        assert!(!dot.contains("D1 -- D2"));
    }
}
