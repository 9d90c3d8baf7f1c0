use num_traits::Zero;

use serde::Serialize;

use super::{intersection_number, tangency_order};
use crate::blowup::{
    blowup, lift_param, strict_transform_equation, tangency_excess, BlowupCharts, ChartKind, ReductionTree,
};
use crate::error::{Error, Result};
use crate::foliation::FoliationGerm;
use crate::numeric::{BiPoly, FieldElement, PuiseuxParam};
use crate::separatrix::{is_free_point, SeparatrixDivisor};

/// Blow-ups followed along a branch before giving up.
const CHAIN_CAP: usize = 64;

/// One infinitely near point of a branch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainLevel {
    /// Tree point, or `None` once the branch has left the tree.
    pub point: Option<usize>,
    pub label: String,
    pub tg: usize,
    pub nu_gamma: usize,
    /// Exceptional power removed by the blow-up at this level.
    pub m: Option<usize>,
    /// `(B_q, Gamma_q)_q`, exceptional invariant lines through `q` included.
    pub intersection: i64,
    pub kappa: i64,
    pub tau: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchChain {
    pub levels: Vec<ChainLevel>,
    /// `tg_j = m_j nu_j + tg_{j+1}` at every level.
    pub blowup_formula_holds: bool,
    /// `kappa_j - kappa_{j+1} = tau_j nu_j` at every level.
    pub kappa_steps_hold: bool,
    /// Last level: `tg = 0` and `(B_q, Gamma_q) = 1`.
    pub base_case_holds: bool,
}

impl BranchChain {
    pub fn kappa0(&self) -> i64 {
        self.levels[0].kappa
    }
}

/// Exceptional line through the current point: `axis` 0 is `{x = 0}`,
/// 1 is `{y = 0}`.
#[derive(Clone, Copy, Debug)]
struct Line {
    axis: u8,
    dicritical: bool,
}

struct State {
    germ: FoliationGerm,
    point: Option<usize>,
    branch: PuiseuxParam,
    equation: BiPoly,
    lines: Vec<Line>,
    members: Vec<(PuiseuxParam, i64)>,
}

fn line_intersection(eq: &BiPoly, axis: u8) -> Result<usize> {
    let restricted = if axis == 0 { eq.restrict_x0() } else { eq.restrict_y0() };
    restricted.ord().ok_or(Error::InvariantBranch)
}

fn local_intersection(s: &State) -> Result<i64> {
    let mut total = 0i64;
    for (b, a) in &s.members {
        total += a * intersection_number(&s.equation, b)? as i64;
    }
    for l in s.lines.iter().filter(|l| !l.dicritical) {
        total += line_intersection(&s.equation, l.axis)? as i64;
    }
    Ok(total)
}

fn tree_child(tree: &ReductionTree, p: usize, kind: ChartKind, c: &FieldElement) -> Option<usize> {
    let b = tree.point(p).blowup?;
    tree.blowup(b)
        .points
        .iter()
        .copied()
        .find(|&q| tree.point(q).chart == kind && &tree.point(q).coord == c)
}

fn step(tree: &ReductionTree, s: State, charts: &BlowupCharts) -> Result<State> {
    let (kind, c, branch) = lift_param(&s.branch)?;
    let germ = charts.germ_at(kind, &c)?;
    let point = s.point.and_then(|p| tree_child(tree, p, kind, &c));
    let mut members = Vec::new();
    for (b, a) in s.members {
        let (k, cb, lifted) = lift_param(&b)?;
        if k == kind && cb == c {
            members.push((lifted, a));
        }
    }
    let mut lines = vec![Line {
        axis: 0,
        dicritical: charts.dicritical,
    }];
    match kind {
        ChartKind::V => lines.extend(s.lines.iter().filter(|l| l.axis == 0).map(|l| Line { axis: 1, ..*l })),
        ChartKind::U if c.is_zero() => lines.extend(s.lines.iter().filter(|l| l.axis == 1).copied()),
        ChartKind::U => {}
    }
    Ok(State {
        germ,
        point,
        equation: strict_transform_equation(&s.equation, kind, &c),
        branch,
        lines,
        members,
    })
}

/// Follows a non-invariant branch `gamma` with equation `eq` through its
/// infinitely near points until the foliation is regular and transverse to
/// it, recording the tangency order, the intersection with the local
/// balanced divisor and `kappa = tg + 1 - (B_q, Gamma_q)` at each point.
/// Past the tree the branch is followed by blowing up the local germ.
pub fn follow_branch(
    tree: &ReductionTree,
    b: &SeparatrixDivisor,
    gamma: &PuiseuxParam,
    eq: &BiPoly,
) -> Result<BranchChain> {
    let mut s = State {
        germ: tree.root.clone(),
        point: Some(0),
        branch: gamma.clone(),
        equation: eq.clone(),
        lines: Vec::new(),
        members: b
            .members
            .iter()
            .map(|(sep, a)| (sep.param.clone(), a * sep.multiplicity as i64))
            .collect(),
    };
    let mut levels: Vec<ChainLevel> = Vec::new();
    for _ in 0..CHAIN_CAP {
        let tg = tangency_order(&s.germ, &s.branch)?;
        let nu_gamma = s.branch.multiplicity()?;
        let intersection = local_intersection(&s)?;
        let tau = s.point.map_or(0, |p| tangency_excess(tree, p));
        let label = s.point.map_or_else(|| "off-tree".to_string(), |p| tree.point(p).label());
        let mut level = ChainLevel {
            point: s.point,
            label,
            tg,
            nu_gamma,
            m: None,
            intersection,
            kappa: tg as i64 + 1 - intersection,
            tau,
        };
        if tg == 0 {
            levels.push(level);
            return Ok(summarize(levels));
        }
        let charts = match s.point.and_then(|p| tree.point(p).blowup) {
            Some(bl) => tree.blowup(bl).charts.clone(),
            None => blowup(&s.germ),
        };
        level.m = Some(charts.m);
        levels.push(level);
        s = step(tree, s, &charts)?;
    }
    Err(Error::DepthExceeded { depth: CHAIN_CAP })
}

fn summarize(levels: Vec<ChainLevel>) -> BranchChain {
    let pairs = || levels.windows(2).map(|w| (&w[0], &w[1]));
    let blowup_formula_holds = pairs().all(|(a, b)| a.m.map(|m| a.tg == m * a.nu_gamma + b.tg) == Some(true));
    let kappa_steps_hold = pairs().all(|(a, b)| a.kappa - b.kappa == (a.tau * a.nu_gamma) as i64);
    let last = levels.last().expect("chain has a level");
    let base_case_holds = last.tg == 0 && last.intersection == 1;
    BranchChain {
        blowup_formula_holds,
        kappa_steps_hold,
        base_case_holds,
        levels,
    }
}

/// Free points of dicritical components crossed by the branch, as
/// `(component, chart, coord)`.
pub fn dicritical_crossings(
    tree: &ReductionTree,
    gamma: &PuiseuxParam,
) -> Result<Vec<(usize, ChartKind, FieldElement)>> {
    let mut out = Vec::new();
    let mut at = 0usize;
    let mut cur = gamma.clone();
    while let Some(bl) = tree.point(at).blowup {
        let (kind, c, lifted) = lift_param(&cur)?;
        match tree_child(tree, at, kind, &c) {
            Some(q) => {
                at = q;
                cur = lifted;
            }
            None => {
                let d = tree.blowup(bl).component;
                if tree.component(d).dicritical && is_free_point(tree, d, kind, &c) {
                    out.push((d, kind, c));
                }
                break;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::reduce_singularities;
    use crate::separatrix::{balanced_divisor, balanced_divisor_with, default_order};

    fn germ(p: &[(i64, u32, u32)], q: &[(i64, u32, u32)]) -> FoliationGerm {
        FoliationGerm::from_int_terms(p, q).unwrap()
    }

    #[test]
    fn radial_parabola_chain() {
        let t = reduce_singularities(&germ(&[(1, 1, 0)], &[(1, 0, 1)])).unwrap();
        let n = default_order(&t).unwrap();
        let g = PuiseuxParam::from_int_polys(&[0, 1], &[0, 0, 1], 30);
        let eq = BiPoly::from_int_terms(&[(1, 0, 1), (-1, 2, 0)]);
        let b = balanced_divisor(&t, true, n).unwrap();
        let c = follow_branch(&t, &b, &g, &eq).unwrap();
        assert_eq!(c.levels[0].tg, 2);
        assert_eq!(c.levels[0].m, Some(2));
        assert_eq!(c.levels[1].tg, 0);
        assert!(c.blowup_formula_holds && c.kappa_steps_hold);
        // The default curvettes sit at u = 0, 1 and the parabola crosses
        // the line at u = 0: both pass the base case.
        assert!(c.base_case_holds);
        assert_eq!(c.kappa0(), 0);
    }

    #[test]
    fn default_curvettes_can_miss_the_branch() {
        let t = reduce_singularities(&germ(&[(1, 1, 0)], &[(1, 0, 1)])).unwrap();
        let n = default_order(&t).unwrap();
        // (t, 5t + t^2) crosses the line at u = 5.
        let g = PuiseuxParam::from_int_polys(&[0, 1], &[0, 5, 1], 30);
        let eq = BiPoly::from_int_terms(&[(1, 0, 1), (-5, 1, 0), (-1, 2, 0)]);
        let plain = balanced_divisor(&t, true, n).unwrap();
        let c = follow_branch(&t, &plain, &g, &eq).unwrap();
        assert_eq!((c.levels[0].tg, c.levels[0].intersection), (2, 2));
        assert!(!c.base_case_holds);
        let cross = dicritical_crossings(&t, &g).unwrap();
        assert_eq!(cross, vec![(1, ChartKind::U, FieldElement::from_int(5))]);
        let adapted = balanced_divisor_with(&t, true, n, &cross).unwrap();
        let c = follow_branch(&t, &adapted, &g, &eq).unwrap();
        assert!(c.base_case_holds && c.kappa_steps_hold);
        assert_eq!(c.kappa0(), 0);
    }

    #[test]
    fn saddle_diagonal_reaches_invariant_line() {
        let t = reduce_singularities(&germ(&[(1, 1, 0)], &[(-1, 0, 1)])).unwrap();
        let b = balanced_divisor(&t, true, 20).unwrap();
        let g = PuiseuxParam::from_int_polys(&[0, 1], &[0, 1], 20);
        let eq = BiPoly::from_int_terms(&[(1, 0, 1), (-1, 1, 0)]);
        let c = follow_branch(&t, &b, &g, &eq).unwrap();
        assert_eq!(c.levels.len(), 2);
        assert_eq!((c.levels[0].tg, c.levels[0].intersection), (1, 2));
        // Past the blow-up only the exceptional line meets the branch.
        assert_eq!((c.levels[1].tg, c.levels[1].intersection), (0, 1));
        assert!(c.base_case_holds && c.blowup_formula_holds && c.kappa_steps_hold);
    }
}
