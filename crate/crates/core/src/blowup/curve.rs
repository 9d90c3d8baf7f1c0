use num_traits::Zero;

use super::chart::{strict_transform_equation, ChartKind};
use super::tree::ReductionTree;
use crate::error::{Error, Result};
use crate::numeric::{BiPoly, FieldElement, PuiseuxParam, TruncSeries};

/// A passage of a curve through a tree point: its local strict transform and
/// its multiplicity there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Passage {
    pub point: usize,
    pub equation: BiPoly,
    pub nu: usize,
}

/// Follows the strict transforms of `{f = 0}` through every blow-up of the
/// tree and lists the tree points it passes through with positive order.
pub fn strict_transform_curve(tree: &ReductionTree, f: &BiPoly) -> Result<Vec<Passage>> {
    assert!(!f.is_zero());
    let mut out = Vec::new();
    let mut stack = vec![(0usize, f.clone())];
    while let Some((p, g)) = stack.pop() {
        let nu = match g.order().finite() {
            Some(n) if n > 0 => n,
            _ => continue,
        };
        out.push(Passage {
            point: p,
            equation: g.clone(),
            nu,
        });
        if let Some(b) = tree.point(p).blowup {
            for &child in &tree.blowup(b).points {
                let pt = tree.point(child);
                stack.push((child, strict_transform_equation(&g, pt.chart, &pt.coord)));
            }
        }
    }
    out.sort_by_key(|s| s.point);
    Ok(out)
}

/// Lift of a branch through one blow-up: the chart point it goes through
/// (`U` with `u = c`, or `V`) and its parametrization there.
pub fn lift_param(g: &PuiseuxParam) -> Result<(ChartKind, FieldElement, PuiseuxParam)> {
    let ox = g.x.ord();
    let oy = g.y.ord();
    let use_u = match (&ox, &oy) {
        (Ok(a), Ok(b)) => a <= b,
        (Ok(_), Err(_)) => true,
        (Err(_), Ok(_)) => false,
        (Err(e), Err(_)) => return Err(e.clone()),
    };
    if use_u {
        let u = g.y.div(&g.x)?;
        let c = u.coeff(0);
        let y = u.sub(&TruncSeries::constant(c.clone(), u.guaranteed_order()));
        Ok((ChartKind::U, c, PuiseuxParam::new(g.x.clone(), y)))
    } else {
        let v = g.x.div(&g.y)?;
        if !v.coeff(0).is_zero() {
            return Err(Error::TruncationExhausted { order: v.guaranteed_order() });
        }
        Ok((ChartKind::V, FieldElement::zero(), PuiseuxParam::new(g.y.clone(), v)))
    }
}

/// Image of a branch under the chart map of `kind` at `c`.
pub fn push_down_param(g: &PuiseuxParam, kind: ChartKind, c: &FieldElement) -> PuiseuxParam {
    match kind {
        ChartKind::U => {
            let shifted = g.y.add(&TruncSeries::constant(c.clone(), g.y.guaranteed_order()));
            PuiseuxParam::new(g.x.clone(), g.x.mul(&shifted))
        }
        ChartKind::V => PuiseuxParam::new(g.x.mul(&g.y), g.x.clone()),
    }
}

/// Pushes a branch at tree point `p` down to the origin.
pub fn push_to_origin(tree: &ReductionTree, p: usize, g: &PuiseuxParam) -> PuiseuxParam {
    let mut cur = g.clone();
    let mut at = p;
    while let Some(parent) = tree.parent_point(at) {
        let pt = tree.point(at);
        cur = push_down_param(&cur, pt.chart, &pt.coord);
        at = parent;
    }
    cur
}
