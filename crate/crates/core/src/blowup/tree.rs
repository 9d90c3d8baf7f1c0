use std::collections::{BTreeSet, VecDeque};

use num_traits::Zero;

use super::chart::{blowup, BlowupCharts, ChartKind};
use crate::error::{Error, Result};
use crate::foliation::{classify_singularity, FoliationGerm, SingularityClass};
use crate::numeric::{isolate_real_roots, split_roots, Extension, FieldElement, Gaussian, RealRoot, UPoly};

pub const DEPTH_CAP: usize = 64;

/// An irreducible component of the exceptional divisor. When it was created
/// at a point group standing for several conjugate points, the record stands
/// for `multiplicity` geometric components, `real_copies` of them real.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub id: usize,
    pub weight: usize,
    pub dicritical: bool,
    pub neighbors: BTreeSet<usize>,
    pub blowup: usize,
    pub multiplicity: usize,
    pub real_copies: usize,
    pub partner: Option<usize>,
    /// Created by the bookkeeping blow-up of an already simple origin.
    pub auxiliary: bool,
}

/// A point of the tree: the origin, or a point of an exceptional line in one
/// of the two charts of its blow-up. `components[0]` is `{x = 0}` and
/// `components[1]` (at corners) is `{y = 0}` in the local coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreePoint {
    pub id: usize,
    pub parent: Option<usize>,
    pub chart: ChartKind,
    pub coord: FieldElement,
    pub components: Vec<usize>,
    pub germ: FoliationGerm,
    pub class: SingularityClass,
    pub multiplicity: usize,
    pub real_copies: usize,
    /// Point whose extension this point's coordinates live in.
    pub embedding: Option<usize>,
    /// Isolating intervals of the real embeddings, at the point introducing
    /// a real extension.
    pub real_roots: Vec<RealRoot>,
    pub partner: Option<usize>,
    pub blowup: Option<usize>,
    pub depth: usize,
}

impl TreePoint {
    pub fn is_corner(&self) -> bool {
        self.components.len() == 2
    }

    pub fn is_trace(&self) -> bool {
        self.components.len() == 1
    }

    pub fn is_real(&self) -> bool {
        self.real_copies > 0
    }

    pub fn label(&self) -> String {
        match self.parent {
            None => "origin".into(),
            Some(_) => match self.chart {
                ChartKind::U => format!("u={}", self.coord),
                ChartKind::V => "v=0".into(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowUp {
    pub id: usize,
    pub center: usize,
    pub component: usize,
    pub charts: BlowupCharts,
    pub points: Vec<usize>,
    pub auxiliary: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTree {
    pub root: FoliationGerm,
    pub points: Vec<TreePoint>,
    pub components: Vec<Component>,
    pub blowups: Vec<BlowUp>,
    pub notes: Vec<String>,
}

impl ReductionTree {
    pub fn point(&self, id: usize) -> &TreePoint {
        &self.points[id]
    }

    pub fn component(&self, id: usize) -> &Component {
        &self.components[id - 1]
    }

    pub fn blowup(&self, id: usize) -> &BlowUp {
        &self.blowups[id]
    }

    pub fn root_is_real(&self) -> bool {
        self.points[0].real_copies > 0
    }

    /// Number of blow-ups of the reduction (the bookkeeping blow-up of a
    /// simple origin is not one of them).
    pub fn blowup_count(&self) -> usize {
        self.blowups.iter().filter(|b| !b.auxiliary).count()
    }

    pub fn visible_components(&self) -> impl Iterator<Item = &Component> {
        self.components.iter().filter(|c| !c.auxiliary)
    }

    pub fn has_auxiliary(&self) -> bool {
        self.blowups.iter().any(|b| b.auxiliary)
    }

    /// Singular points that were not blown up.
    pub fn final_singularities(&self) -> Vec<&TreePoint> {
        self.points
            .iter()
            .filter(|p| p.blowup.is_none() && p.class.is_singular())
            .collect()
    }

    /// Final saddle-nodes whose weak direction lies along a divisor
    /// component, with that component.
    pub fn tangent_saddle_nodes(&self) -> Vec<(usize, usize)> {
        self.final_singularities()
            .into_iter()
            .filter_map(|p| weak_component(p).map(|c| (p.id, c)))
            .collect()
    }

    /// Center point of the blow-up that created the line through `p`.
    pub fn parent_point(&self, p: usize) -> Option<usize> {
        self.points[p].parent.map(|b| self.blowups[b].center)
    }

    /// Points in the subtree above `q`, including `q`.
    pub fn subtree(&self, q: usize) -> Vec<usize> {
        let mut out = vec![q];
        let mut k = 0;
        while k < out.len() {
            if let Some(b) = self.points[out[k]].blowup {
                out.extend(self.blowups[b].points.iter().copied());
            }
            k += 1;
        }
        out
    }

    /// Chain of points from the origin to `p`.
    pub fn ancestry(&self, p: usize) -> Vec<usize> {
        let mut chain = vec![p];
        let mut cur = p;
        while let Some(q) = self.parent_point(cur) {
            chain.push(q);
            cur = q;
        }
        chain.reverse();
        chain
    }

    /// Real isolating intervals for the point's extension, if any.
    pub fn embeddings(&self, p: usize) -> &[RealRoot] {
        match self.points[p].embedding {
            Some(e) => &self.points[e].real_roots,
            None => &[],
        }
    }

    /// Sign of a real element of the point's field under its real
    /// embeddings; `None` when the element is not real.
    pub fn sign_at(&self, p: usize, v: &FieldElement) -> Option<Vec<i32>> {
        if !v.has_real_coords() {
            return None;
        }
        if let Some(r) = v.as_rational() {
            let s = if r.is_zero() { 0 } else if r > num_rational::BigRational::zero() { 1 } else { -1 };
            return Some(vec![s; self.points[p].real_copies.max(1)]);
        }
        let q: Vec<_> = v.coords().iter().map(|g| g.re.clone()).collect();
        Some(self.embeddings(p).iter().map(|r| r.sign_of(&q)).collect())
    }
}

/// Component containing the weak direction of a saddle-node, if any.
pub(crate) fn weak_component(p: &TreePoint) -> Option<usize> {
    let weak_dir = match &p.class {
        SingularityClass::SaddleNode { weak_dir, .. } => weak_dir,
        _ => return None,
    };
    if p.components.is_empty() {
        return None;
    }
    if weak_dir.0.is_zero() {
        return Some(p.components[0]);
    }
    if weak_dir.1.is_zero() && p.components.len() == 2 {
        return Some(p.components[1]);
    }
    None
}

fn tangent_to(p: &TreePoint, idx: usize) -> bool {
    let v = if idx == 0 { p.germ.p() } else { p.germ.q() };
    v.value_at_origin().is_zero()
}

fn needs_blowup(tree: &ReductionTree, p: &TreePoint) -> bool {
    if matches!(p.class, SingularityClass::NonSimple) {
        return true;
    }
    let dic: Vec<usize> = (0..p.components.len())
        .filter(|&k| tree.component(p.components[k]).dicritical)
        .collect();
    if dic.len() == 2 {
        return true;
    }
    dic.iter()
        .any(|&k| p.class.is_singular() || tangent_to(p, k))
}

/// Runs the reduction of singularities.
pub fn reduce_singularities(f: &FoliationGerm) -> Result<ReductionTree> {
    let class = classify_singularity(f)?;
    let real = f.is_real();
    let mut tree = ReductionTree {
        root: f.clone(),
        points: vec![TreePoint {
            id: 0,
            parent: None,
            chart: ChartKind::U,
            coord: FieldElement::zero(),
            components: Vec::new(),
            germ: f.clone(),
            class: class.clone(),
            multiplicity: 1,
            real_copies: usize::from(real),
            embedding: None,
            real_roots: Vec::new(),
            partner: None,
            blowup: None,
            depth: 0,
        }],
        components: Vec::new(),
        blowups: Vec::new(),
        notes: Vec::new(),
    };
    if !class.is_singular() {
        return Ok(tree);
    }
    if class.is_simple() {
        blow_up_point(&mut tree, 0, true)?;
    } else {
        let mut queue = VecDeque::from([0usize]);
        while let Some(pid) = queue.pop_front() {
            if !needs_blowup(&tree, &tree.points[pid]) {
                continue;
            }
            if tree.points[pid].depth >= DEPTH_CAP {
                return Err(Error::DepthExceeded { depth: DEPTH_CAP });
            }
            queue.extend(blow_up_point(&mut tree, pid, false)?);
        }
    }
    if real {
        assign_partners(&mut tree);
    }
    Ok(tree)
}

fn blow_up_point(tree: &mut ReductionTree, pid: usize, auxiliary: bool) -> Result<Vec<usize>> {
    let center = tree.points[pid].clone();
    let charts = blowup(&center.germ);
    let bid = tree.blowups.len();
    let cid = tree.components.len() + 1;
    let weight = if center.components.is_empty() {
        1
    } else {
        center.components.iter().map(|&c| tree.component(c).weight).sum()
    };
    if center.components.len() == 2
        && center.components.iter().all(|&c| tree.component(c).dicritical)
    {
        tree.notes.push(format!(
            "corner of dicritical components D{} and D{} separated by a blow-up",
            center.components[0], center.components[1]
        ));
    }
    tree.components.push(Component {
        id: cid,
        weight,
        dicritical: charts.dicritical,
        neighbors: center.components.iter().copied().collect(),
        blowup: bid,
        multiplicity: center.multiplicity,
        real_copies: center.real_copies,
        partner: None,
        auxiliary,
    });
    if center.components.len() == 2 {
        let (a, b) = (center.components[0], center.components[1]);
        tree.components[a - 1].neighbors.remove(&b);
        tree.components[b - 1].neighbors.remove(&a);
    }
    for &c in &center.components {
        tree.components[c - 1].neighbors.insert(cid);
    }

    // Points of the new line: special roots in the U chart, the V origin,
    // and the corners with the components through the center.
    let mut specs: Vec<(ChartKind, FieldElement, Option<(Option<std::sync::Arc<Extension>>, UPoly)>)> =
        Vec::new();
    let h = charts.special_u();
    let split = split_roots(&h)?;
    for (r, _) in &split.roots {
        specs.push((ChartKind::U, r.clone(), None));
    }
    for (m, _) in &split.irreducible {
        let modulus: Vec<Gaussian> = m
            .monic()
            .coeffs()
            .iter()
            .map(|c| {
                c.as_gaussian().ok_or_else(|| Error::UnsupportedExtension {
                    polynomial: m.to_string(),
                })
            })
            .collect::<Result<_>>()?;
        let ext = Extension::new(modulus);
        specs.push((ChartKind::U, FieldElement::generator(&ext), Some((Some(ext), m.monic()))));
    }
    if charts.special_v() || !center.components.is_empty() {
        specs.push((ChartKind::V, FieldElement::zero(), None));
    }
    if center.components.len() == 2 && !specs.iter().any(|s| s.0 == ChartKind::U && s.1.is_zero()) {
        specs.push((ChartKind::U, FieldElement::zero(), None));
    }

    let mut created = Vec::new();
    for (kind, coord, ext) in specs {
        let mut comps = vec![cid];
        match kind {
            ChartKind::V => {
                if let Some(&a) = center.components.first() {
                    comps.push(a);
                }
            }
            ChartKind::U => {
                if coord.is_zero() && center.components.len() == 2 {
                    comps.push(center.components[1]);
                }
            }
        }
        let germ = charts.germ_at(kind, &coord)?;
        let class = classify_singularity(&germ)?;
        let (multiplicity, real_copies, embedding, real_roots) = match &ext {
            Some((Some(e), m)) => {
                let d = e.degree();
                let (rc, roots) = if center.real_copies > 0 && e.is_real() {
                    let roots = isolate_real_roots(m);
                    (center.real_copies * roots.len(), roots)
                } else {
                    (0, Vec::new())
                };
                (center.multiplicity * d, rc, Some(tree.points.len()), roots)
            }
            _ => {
                let rc = if coord.has_real_coords() { center.real_copies } else { 0 };
                (center.multiplicity, rc, center.embedding, Vec::new())
            }
        };
        let id = tree.points.len();
        tree.points.push(TreePoint {
            id,
            parent: Some(bid),
            chart: kind,
            coord,
            components: comps,
            germ,
            class,
            multiplicity,
            real_copies,
            embedding,
            real_roots,
            partner: None,
            blowup: None,
            depth: center.depth + 1,
        });
        created.push(id);
    }
    tree.points[pid].blowup = Some(bid);
    tree.blowups.push(BlowUp {
        id: bid,
        center: pid,
        component: cid,
        charts,
        points: created.clone(),
        auxiliary,
    });
    Ok(created)
}

/// Matches every point and component with its conjugate. Points are created
/// parents first, so one pass in creation order suffices.
fn assign_partners(tree: &mut ReductionTree) {
    tree.points[0].partner = Some(0);
    for id in 1..tree.points.len() {
        let bid = tree.points[id].parent.expect("non-root point has a parent");
        let center = tree.blowups[bid].center;
        let found = tree.points[center].partner.and_then(|pc| {
            let pb = tree.points[pc].blowup?;
            let want = tree.points[id].coord.conj();
            let kind = tree.points[id].chart;
            tree.blowups[pb]
                .points
                .iter()
                .copied()
                .find(|&q| tree.points[q].chart == kind && tree.points[q].coord == want)
        });
        if found.is_none() {
            tree.notes.push(format!("no conjugate found for tree point {id}"));
        }
        tree.points[id].partner = found;
    }
    for k in 0..tree.components.len() {
        let center = tree.blowups[tree.components[k].blowup].center;
        let partner = tree.points[center]
            .partner
            .and_then(|pc| tree.points[pc].blowup)
            .map(|b| tree.blowups[b].component);
        tree.components[k].partner = partner;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn germ(p: &[(i64, u32, u32)], q: &[(i64, u32, u32)]) -> FoliationGerm {
        FoliationGerm::from_int_terms(p, q).unwrap()
    }

    #[test]
    fn radial_single_dicritical_blowup() {
        let t = reduce_singularities(&germ(&[(1, 1, 0)], &[(1, 0, 1)])).unwrap();
        assert_eq!(t.blowup_count(), 1);
        assert!(t.component(1).dicritical);
        assert!(t.final_singularities().is_empty());
    }

    #[test]
    fn cusp_resolution() {
        let t = reduce_singularities(&germ(&[(2, 0, 1)], &[(3, 2, 0)])).unwrap();
        assert_eq!(t.blowup_count(), 3);
        let w: Vec<usize> = t.components.iter().map(|c| c.weight).collect();
        assert_eq!(w, vec![1, 1, 2]);
        assert!(t.final_singularities().iter().all(|p| p.class.is_simple()));
        assert!(t.tangent_saddle_nodes().is_empty());
        assert!(t.components.iter().all(|c| !c.dicritical));
    }

    #[test]
    fn example_tree() {
        let ex = germ(&[(1, 0, 2), (1, 4, 0)], &[(-1, 1, 1), (1, 5, 0), (1, 1, 2)]);
        let t = reduce_singularities(&ex).unwrap();
        assert_eq!(t.blowup_count(), 1);
        let fin = t.final_singularities();
        assert_eq!(fin.len(), 3);
        let real: Vec<_> = fin.iter().filter(|p| p.is_real()).collect();
        assert_eq!(real.len(), 1);
        assert_eq!(real[0].class.weak_index(), Some(3));
        assert!(real[0].coord.is_zero());
        assert!(t.tangent_saddle_nodes().is_empty());
        for p in fin.iter().filter(|p| !p.is_real()) {
            assert_eq!(p.class.tag(), "non-degenerate");
            assert_ne!(p.partner, Some(p.id));
            assert!(p.partner.is_some());
        }
    }

    #[test]
    fn simple_origin_gets_auxiliary_blowup() {
        let t = reduce_singularities(&germ(&[(1, 0, 1)], &[(-1, 1, 0)])).unwrap();
        assert_eq!(t.blowup_count(), 0);
        assert!(t.has_auxiliary());
        assert_eq!(t.final_singularities().len(), 2);
        assert!(t.final_singularities().iter().all(|p| !p.is_real()));
    }

    #[test]
    fn cubic_tangent_cone_uses_extension() {
        // Tangent cone with an irreducible cubic factor: P = x^2 + .., Q = ..
        // with x Q_2 - y P_2 = -(y^3 - 2 x^3).
        let f = germ(&[(1, 0, 2)], &[(2, 2, 0), (1, 3, 0)]);
        let t = reduce_singularities(&f).unwrap();
        assert!(t.points.iter().any(|p| p.multiplicity == 3 && p.real_copies == 1));
    }
}
