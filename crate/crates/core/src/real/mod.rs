//! Real foliations as conjugation-fixed complex ones: conjugation, the
//! topological type of real saddle-nodes, class flags and the separatrix
//! certifier.

mod certify;

pub use certify::{certify_separatrix, Certificate, Parities, Theorem, Verdict};

use serde::Serialize;

use crate::blowup::{reduce_singularities, ReductionTree, TreePoint};
use crate::error::{Error, Result};
use crate::foliation::{FoliationGerm, SingularityClass};
use crate::numeric::{BiPoly, FieldElement, PuiseuxParam, TruncSeries};
use crate::separatrix::Separatrix;

/// Coefficient-wise complex conjugation.
pub trait Conjugate {
    fn conjugate(&self) -> Self;
}

impl Conjugate for FieldElement {
    fn conjugate(&self) -> Self {
        self.conj()
    }
}

impl Conjugate for BiPoly {
    fn conjugate(&self) -> Self {
        self.conj()
    }
}

impl Conjugate for TruncSeries {
    fn conjugate(&self) -> Self {
        self.conj()
    }
}

impl Conjugate for PuiseuxParam {
    fn conjugate(&self) -> Self {
        self.conj()
    }
}

impl Conjugate for FoliationGerm {
    fn conjugate(&self) -> Self {
        self.conj()
    }
}

/// Conjugate of a separatrix within its list, found through the partner
/// links.
pub fn conjugate_separatrix<'a>(s: &Separatrix, all: &'a [Separatrix]) -> Option<&'a Separatrix> {
    s.partner.and_then(|p| all.iter().find(|t| t.id == p))
}

/// A real germ together with the reduction of its complexification.
#[derive(Clone, Debug)]
pub struct RealFoliation {
    pub tree: ReductionTree,
}

impl RealFoliation {
    pub fn new(f: &FoliationGerm) -> Result<Self> {
        if !f.is_real() {
            return Err(Error::NotReal);
        }
        Ok(RealFoliation {
            tree: reduce_singularities(f)?,
        })
    }

    pub fn from_tree(tree: ReductionTree) -> Result<Self> {
        if !tree.root.is_real() {
            return Err(Error::NotReal);
        }
        Ok(RealFoliation { tree })
    }

    pub fn germ(&self) -> &FoliationGerm {
        &self.tree.root
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TopologicalType {
    TopologicalSaddleNode,
    Saddle,
    Node,
    /// Odd weak index with the sign rule off, or real copies of a point
    /// group that do not all agree.
    SaddleOrNode,
}

/// Whether odd weak indices are split into saddles and nodes by the sign of
/// `c * lambda`, where `x' = c x^k + ...` on the center manifold and
/// `lambda` is the strong eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SignRule(pub bool);

impl Default for SignRule {
    fn default() -> Self {
        SignRule(true)
    }
}

fn signs(tree: &ReductionTree, p: usize, v: &FieldElement) -> Result<Vec<i32>> {
    tree.sign_at(p, v).ok_or(Error::NotReal)
}

/// Topological type of the real saddle-node at tree point `p`.
pub fn topological_type_saddle_node(tree: &ReductionTree, p: usize, rule: SignRule) -> Result<TopologicalType> {
    let pt = tree.point(p);
    let (strong, weak) = match &pt.class {
        SingularityClass::SaddleNode { strong, weak, .. } => (strong, weak),
        _ => return Err(Error::NotSaddleNode),
    };
    if pt.real_copies == 0 || !tree.root.is_real() {
        return Err(Error::NotReal);
    }
    if weak.index % 2 == 0 {
        return Ok(TopologicalType::TopologicalSaddleNode);
    }
    if !rule.0 {
        return Ok(TopologicalType::SaddleOrNode);
    }
    let c = signs(tree, p, &weak.leading)?;
    let l = signs(tree, p, strong)?;
    let products: Vec<i32> = c.iter().zip(&l).map(|(a, b)| a * b).collect();
    Ok(if products.iter().all(|&s| s < 0) {
        TopologicalType::Saddle
    } else if products.iter().all(|&s| s > 0) {
        TopologicalType::Node
    } else {
        TopologicalType::SaddleOrNode
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CenterFocus {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassFlags {
    /// No saddle-nodes at real points of the reduction.
    pub rgc: bool,
    /// No saddle-nodes anywhere in the complex reduction.
    pub gc: bool,
    /// No real saddle-node is a topological saddle-node.
    pub topological_rgc: bool,
    /// No tangent saddle-nodes at real points.
    pub st: bool,
    /// No tangent saddle-nodes anywhere.
    pub complex_st: bool,
    pub topological_st: bool,
    pub center_focus: CenterFocus,
    /// Types of the real saddle-nodes, by tree point.
    pub saddle_nodes: Vec<(usize, TopologicalType)>,
    /// Tree points whose type used the sign rule.
    pub sign_rule_uses: Vec<usize>,
}

fn real_finals(tree: &ReductionTree) -> Vec<&TreePoint> {
    tree.final_singularities().into_iter().filter(|p| p.is_real()).collect()
}

/// Corner type for the center-focus test: `Some(true)` for a topological
/// saddle, `Some(false)` for anything else, `None` when undecided.
fn corner_is_saddle(tree: &ReductionTree, p: &TreePoint, rule: SignRule) -> Result<Option<bool>> {
    Ok(match &p.class {
        SingularityClass::NonDegenerate { det, .. } => {
            let s = signs(tree, p.id, det)?;
            Some(s.iter().all(|&v| v < 0))
        }
        SingularityClass::SaddleNode { .. } => match topological_type_saddle_node(tree, p.id, rule)? {
            TopologicalType::Saddle => Some(true),
            TopologicalType::SaddleOrNode => None,
            _ => Some(false),
        },
        _ => Some(false),
    })
}

pub fn foliation_class(tree: &ReductionTree, rule: SignRule) -> Result<ClassFlags> {
    if !tree.root.is_real() {
        return Err(Error::NotReal);
    }
    let finals = real_finals(tree);
    let is_sn = |p: &TreePoint| matches!(p.class, SingularityClass::SaddleNode { .. });
    let mut saddle_nodes = Vec::new();
    let mut sign_rule_uses = Vec::new();
    for p in finals.iter().filter(|p| is_sn(p)) {
        let ty = topological_type_saddle_node(tree, p.id, rule)?;
        if rule.0 && p.class.weak_index().is_some_and(|k| k % 2 == 1) {
            sign_rule_uses.push(p.id);
        }
        saddle_nodes.push((p.id, ty));
    }
    let tangent: Vec<usize> = tree.tangent_saddle_nodes().into_iter().map(|(p, _)| p).collect();
    let real_tangent: Vec<usize> = tangent.iter().copied().filter(|&p| tree.point(p).is_real()).collect();
    let even = |p: usize| tree.point(p).class.weak_index().is_some_and(|k| k % 2 == 0);

    let center_focus = if tree.components.iter().any(|c| c.dicritical && c.real_copies > 0)
        || finals.iter().any(|p| p.is_trace())
    {
        CenterFocus::No
    } else {
        let mut verdict = CenterFocus::Yes;
        for p in finals.iter().filter(|p| p.is_corner()) {
            match corner_is_saddle(tree, p, rule)? {
                Some(true) => {}
                Some(false) => {
                    verdict = CenterFocus::No;
                    break;
                }
                None => verdict = CenterFocus::Unknown,
            }
        }
        verdict
    };

    Ok(ClassFlags {
        rgc: saddle_nodes.is_empty(),
        gc: tree.final_singularities().iter().all(|p| !is_sn(p)),
        topological_rgc: saddle_nodes.iter().all(|(p, _)| !even(*p)),
        st: real_tangent.is_empty(),
        complex_st: tangent.is_empty(),
        topological_st: real_tangent.iter().all(|&p| !even(p)),
        center_focus,
        saddle_nodes,
        sign_rule_uses,
    })
}

/// The conjugation involution on tree points is defined everywhere, is an
/// involution, and every point with a real copy is fixed by it.
pub fn involution_fixes_real_points(tree: &ReductionTree) -> bool {
    tree.points.iter().all(|p| match p.partner {
        Some(q) => tree.point(q).partner == Some(p.id) && (q == p.id || p.real_copies == 0),
        None => false,
    })
}

/// `P(x, -y) d/dx + Q(x, -y) d/dy`: `y` replaced by `-y` in the
/// coefficients only. Unlike the coordinate change, this can change the
/// topological type.
pub fn negate_y_in_coefficients(f: &FoliationGerm) -> Result<FoliationGerm> {
    let (x, my) = (BiPoly::x(), BiPoly::y().neg());
    FoliationGerm::new(f.p().compose(&x, &my), f.q().compose(&x, &my))
}
