//! Separatrices read off a reduction tree, and balanced divisors built from
//! them.

mod divisor;

pub use divisor::{
    balanced_divisor, balanced_divisor_with, check_multiplicity_formula, divisor_multiplicity, is_balanced, is_j_symmetric,
    real_divisor_multiplicity, MultiplicityReport, SeparatrixDivisor,
};

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::blowup::{push_down_param, push_to_origin, ChartKind, ReductionTree};
use crate::error::{Error, Result};
use crate::foliation::classify::{kernel, shifted};
use crate::foliation::{
    classify_singularity, invariant_curve, is_invariant_param, milnor_number, AdaptedFrame, FoliationGerm,
    SingularityClass,
};
use crate::numeric::{FieldElement, PuiseuxParam, TruncSeries};

/// Which invariant curve of a simple singularity to follow.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Strong,
    Weak,
    /// Eigendirection of the first eigenvalue as reported by the classifier.
    Eigen1,
    Eigen2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeparatrixKind {
    Isolated,
    Dicritical,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    /// Non-divisor invariant curve at a trace singularity.
    Trace { point: usize },
    /// Leaf through a regular point of a dicritical component: `u = coord`
    /// in the `U` chart of its blow-up, or the `V` origin.
    Curvette {
        component: usize,
        chart: ChartKind,
        coord: FieldElement,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convergence {
    ConvergentCertified,
    FormalOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reality {
    Real,
    PurelyComplex,
    /// A record standing for a conjugation-stable group of branches, some
    /// real and some not.
    Mixed,
    Unknown,
}

/// A separatrix, or a group of `multiplicity` Galois-conjugate separatrices
/// sharing one parametrization over an extension field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separatrix {
    pub id: usize,
    pub param: PuiseuxParam,
    pub kind: SeparatrixKind,
    pub source: Source,
    pub convergence: Convergence,
    pub multiplicity: usize,
    pub real_copies: usize,
    pub reality: Reality,
    pub partner: Option<usize>,
}

impl Separatrix {
    /// `nu_0` of one branch of the record.
    pub fn nu(&self) -> Result<usize> {
        self.param.multiplicity()
    }

    pub fn is_formal_only(&self) -> bool {
        self.convergence == Convergence::FormalOnly
    }
}

fn reality_of(real_copies: usize, multiplicity: usize, root_real: bool) -> Reality {
    if !root_real {
        Reality::Unknown
    } else if real_copies == 0 {
        Reality::PurelyComplex
    } else if real_copies == multiplicity {
        Reality::Real
    } else {
        Reality::Mixed
    }
}

/// Guaranteed order used for separatrices when none is requested.
pub fn default_order(tree: &ReductionTree) -> Result<usize> {
    Ok(2 * milnor_number(&tree.root)? + 4)
}

/// Formal invariant curve of a simple germ as a graph `Y = phi(X)` in
/// coordinates adapted to the requested direction, known to order `n + 1`.
pub fn local_invariant_curve(germ: &FoliationGerm, which: Direction, n: usize) -> Result<TruncSeries> {
    let frame = frame_for(germ, which)?;
    Ok(invariant_curve(germ, &frame, n)?.0)
}

fn frame_for(germ: &FoliationGerm, which: Direction) -> Result<AdaptedFrame> {
    match (classify_singularity(germ)?, which) {
        (
            SingularityClass::SaddleNode {
                strong,
                strong_dir,
                weak_dir,
                ..
            },
            Direction::Weak | Direction::Strong,
        ) => {
            let weak = (weak_dir, FieldElement::zero());
            let strong = (strong_dir, strong);
            let (a, o) = if which == Direction::Weak { (weak, strong) } else { (strong, weak) };
            Ok(AdaptedFrame {
                along: a.0,
                lambda_along: a.1,
                other: o.0,
                lambda_other: o.1,
            })
        }
        (SingularityClass::SaddleNode { .. }, _) => Err(Error::NotSimple),
        (SingularityClass::NonDegenerate { eigenvalues, trace, det }, Direction::Eigen1 | Direction::Eigen2) => {
            let (l1, l2) = eigenvalues.ok_or_else(|| Error::UnsupportedExtension {
                polynomial: format!("t^2 - ({trace}) t + ({det})"),
            })?;
            let (a, o) = if which == Direction::Eigen1 { (l1, l2) } else { (l2, l1) };
            let m = germ.linear_part();
            Ok(AdaptedFrame {
                along: kernel(&shifted(&m, &a)),
                lambda_along: a,
                other: kernel(&shifted(&m, &o)),
                lambda_other: o,
            })
        }
        (SingularityClass::NonDegenerate { .. }, _) => Err(Error::NotSaddleNode),
        _ => Err(Error::NotSimple),
    }
}

/// Frame at a trace singularity whose divisor line is `{x = 0}`: follow the
/// eigendirection transverse to it. With `{x = 0}` invariant the linear part
/// is `[[a, 0], [c, d]]`; the transverse direction is `(a - d, c)`.
fn transverse_frame(germ: &FoliationGerm) -> AdaptedFrame {
    let m = germ.linear_part();
    debug_assert!(m[0][1].is_zero());
    let (a, c, d) = (m[0][0].clone(), m[1][0].clone(), m[1][1].clone());
    AdaptedFrame {
        along: (&a - &d, c),
        lambda_along: a,
        other: (FieldElement::zero(), FieldElement::one()),
        lambda_other: d,
    }
}

/// Leaf through a regular point transverse to `{x = 0}` (`P(0) != 0`), as the
/// graph of `y' = Q / P`, known to order `n + 1`.
pub fn regular_leaf(germ: &FoliationGerm, n: usize) -> Result<TruncSeries> {
    let ord = n + 1;
    let t = TruncSeries::t(ord);
    let mut phi = TruncSeries::zero(ord);
    // Each pass fixes one more coefficient.
    for _ in 0..ord {
        let slope = germ
            .q()
            .substitute_series(&t, &phi)
            .div(&germ.p().substitute_series(&t, &phi))?;
        phi = integrate(&slope).truncate(ord);
    }
    Ok(phi)
}

fn integrate(s: &TruncSeries) -> TruncSeries {
    let c: Vec<FieldElement> = std::iter::once(FieldElement::zero())
        .chain(
            s.coeffs()
                .iter()
                .enumerate()
                .map(|(k, v)| v * &FieldElement::from_int(k as i64 + 1).inv().expect("nonzero")),
        )
        .collect();
    TruncSeries::new(c, s.guaranteed_order() + 1)
}

/// Isolated separatrices, one per trace singularity, pushed down to the
/// origin with guaranteed order at least `n`.
pub fn enumerate_separatrices(tree: &ReductionTree, n: usize) -> Result<Vec<Separatrix>> {
    let root_real = tree.root.is_real();
    let mut out = Vec::new();
    for pt in tree.final_singularities() {
        if !pt.is_trace() || tree.component(pt.components[0]).dicritical {
            continue;
        }
        let frame = transverse_frame(&pt.germ);
        let formal = frame.lambda_along.is_zero();
        let (_, local) = invariant_curve(&pt.germ, &frame, n)?;
        let param = push_to_origin(tree, pt.id, &local);
        out.push(Separatrix {
            id: out.len(),
            param,
            kind: SeparatrixKind::Isolated,
            source: Source::Trace { point: pt.id },
            convergence: if formal {
                Convergence::FormalOnly
            } else {
                Convergence::ConvergentCertified
            },
            multiplicity: pt.multiplicity,
            real_copies: pt.real_copies,
            reality: reality_of(pt.real_copies, pt.multiplicity, root_real),
            partner: None,
        });
    }
    link_partners(tree, &mut out);
    Ok(out)
}

/// Whether the point of dicritical component `d` at `(chart, coord)` is a
/// regular point of the foliation off the other components.
pub fn is_free_point(tree: &ReductionTree, d: usize, chart: ChartKind, coord: &FieldElement) -> bool {
    let b = tree.blowup(tree.component(d).blowup);
    let center = tree.point(b.center);
    match chart {
        ChartKind::U => {
            !(center.is_corner() && coord.is_zero()) && !b.charts.special_u().eval(coord).is_zero()
        }
        ChartKind::V => coord.is_zero() && center.components.is_empty() && !b.charts.special_v(),
    }
}

/// Dicritical separatrix through a free point of component `d`.
pub fn curvette(
    tree: &ReductionTree,
    d: usize,
    chart: ChartKind,
    coord: &FieldElement,
    n: usize,
) -> Result<Separatrix> {
    let comp = tree.component(d);
    let b = tree.blowup(comp.blowup);
    assert!(comp.dicritical, "curvettes are attached to dicritical components");
    if !is_free_point(tree, d, chart, coord) {
        return Err(Error::InsufficientTracePoints { component: d, needed: 1 });
    }
    let germ = b.charts.germ_at(chart, coord)?;
    let phi = regular_leaf(&germ, n)?;
    let local = PuiseuxParam::new(TruncSeries::t(n + 1), phi);
    let param = push_to_origin(tree, b.center, &push_down_param(&local, chart, coord));
    let center = tree.point(b.center);
    let real_copies = if coord.has_real_coords() { comp.real_copies } else { 0 };
    Ok(Separatrix {
        id: 0,
        param,
        kind: SeparatrixKind::Dicritical,
        source: Source::Curvette {
            component: d,
            chart,
            coord: coord.clone(),
        },
        convergence: Convergence::ConvergentCertified,
        multiplicity: center.multiplicity,
        real_copies,
        reality: reality_of(real_copies, center.multiplicity, tree.root.is_real()),
        partner: None,
    })
}

/// Fills `partner` from the conjugation action on the tree.
pub(crate) fn link_partners(tree: &ReductionTree, seps: &mut [Separatrix]) {
    if !tree.root.is_real() {
        return;
    }
    let index: HashMap<String, usize> = seps.iter().map(|s| (source_key(&s.source), s.id)).collect();
    for k in 0..seps.len() {
        let want = match &seps[k].source {
            Source::Trace { point } => tree.point(*point).partner.map(|p| Source::Trace { point: p }),
            Source::Curvette { component, chart, coord } => {
                tree.component(*component).partner.map(|c| Source::Curvette {
                    component: c,
                    chart: *chart,
                    coord: coord.conj(),
                })
            }
        };
        seps[k].partner = want.and_then(|w| index.get(&source_key(&w)).copied());
    }
}

fn source_key(s: &Source) -> String {
    match s {
        Source::Trace { point } => format!("p{point}"),
        Source::Curvette { component, chart, coord } => format!("D{component}@{}={coord}", chart.label()),
    }
}

/// Where a branch ends up in the tree: found by lifting it through the
/// blow-ups and matching infinitely near points.
pub fn locate_branch(tree: &ReductionTree, g: &PuiseuxParam) -> Result<Source> {
    let mut at = 0usize;
    let mut cur = g.clone();
    while let Some(b) = tree.point(at).blowup {
        let (kind, c, h) = crate::blowup::lift_param(&cur)?;
        let bl = tree.blowup(b);
        match bl
            .points
            .iter()
            .copied()
            .find(|&q| tree.point(q).chart == kind && tree.point(q).coord == c)
        {
            Some(q) => {
                at = q;
                cur = h;
            }
            None => {
                return Ok(Source::Curvette {
                    component: bl.component,
                    chart: kind,
                    coord: c,
                })
            }
        }
    }
    Ok(Source::Trace { point: at })
}

/// Recomputes reality and partners from the parametrizations alone: the
/// conjugate of each branch is lifted through the tree and matched with the
/// separatrix ending at the same place.
pub fn classify_reality(tree: &ReductionTree, seps: &[Separatrix]) -> Result<Vec<Separatrix>> {
    let index: HashMap<String, usize> = seps.iter().map(|s| (source_key(&s.source), s.id)).collect();
    let mut out = seps.to_vec();
    for s in &mut out {
        let conj = s.param.conj();
        let end = locate_branch(tree, &conj).map_err(|_| Error::UndecidedReality { id: s.id })?;
        let partner = *index
            .get(&source_key(&end))
            .ok_or(Error::UndecidedReality { id: s.id })?;
        s.partner = Some(partner);
        s.reality = if partner == s.id {
            if s.real_copies == s.multiplicity {
                Reality::Real
            } else if s.real_copies == 0 {
                // A self-conjugate group with no real member.
                Reality::PurelyComplex
            } else {
                Reality::Mixed
            }
        } else {
            Reality::PurelyComplex
        };
    }
    Ok(out)
}

/// Every separatrix passes the invariance test to its guaranteed order.
pub fn all_invariant(tree: &ReductionTree, seps: &[Separatrix]) -> bool {
    seps.iter().all(|s| is_invariant_param(&tree.root, &s.param).holds())
}
