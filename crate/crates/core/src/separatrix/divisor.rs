use serde::Serialize;

use super::{curvette, enumerate_separatrices, is_free_point, link_partners, Separatrix, SeparatrixKind, Source};
use crate::blowup::{component_valence, tangency_excess, ChartKind, ReductionTree};
use crate::error::{Error, Result};
use crate::foliation::algebraic_multiplicity;
use crate::numeric::FieldElement;

/// Candidate attachment coordinates, tried in order.
const ATTACHMENT_SEARCH: i64 = 64;

/// Formal combination of separatrices. Members are stored with their
/// coefficients; a member standing for several conjugate branches counts
/// each of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatrixDivisor {
    pub members: Vec<(Separatrix, i64)>,
    pub balanced: bool,
    pub j_symmetric: bool,
}

impl SeparatrixDivisor {
    pub fn separatrices(&self) -> impl Iterator<Item = &Separatrix> {
        self.members.iter().map(|(s, _)| s)
    }

    /// Sub-divisor of the real members, one term per real branch.
    pub fn real_part(&self) -> Vec<(Separatrix, i64)> {
        self.members
            .iter()
            .filter(|(s, _)| s.real_copies > 0)
            .cloned()
            .collect()
    }
}

fn attachment_candidates() -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=ATTACHMENT_SEARCH).flat_map(|k| [k, -k]))
}

/// Balanced divisor: every isolated separatrix with coefficient 1 and, on
/// each dicritical component `D`, `|2 - val(D)|` curvettes with the sign of
/// `2 - val(D)` at regular points `u = 0, 1, -1, 2, ...` of its chart.
///
/// Rational attachment points are fixed by conjugation, so the choice is
/// J-symmetric whenever the foliation is real; `j_symmetric` only asks for
/// that property to be checked.
pub fn balanced_divisor(tree: &ReductionTree, j_symmetric: bool, n: usize) -> Result<SeparatrixDivisor> {
    balanced_divisor_with(tree, j_symmetric, n, &[])
}

/// Balanced divisor whose curvettes go first through the `preferred` free
/// points `(component, chart, coord)`, then through the default ones.
pub fn balanced_divisor_with(
    tree: &ReductionTree,
    j_symmetric: bool,
    n: usize,
    preferred: &[(usize, ChartKind, FieldElement)],
) -> Result<SeparatrixDivisor> {
    let mut seps = enumerate_separatrices(tree, n)?;
    let mut coeffs = vec![1i64; seps.len()];
    for comp in &tree.components {
        if !comp.dicritical {
            continue;
        }
        let want = 2 - component_valence(tree, comp.id) as i64;
        let needed = want.unsigned_abs() as usize;
        let candidates = preferred
            .iter()
            .filter(|(d, _, _)| *d == comp.id)
            .map(|(_, k, c)| (*k, c.clone()))
            .chain(attachment_candidates().map(|k| (ChartKind::U, FieldElement::from_int(k))));
        let mut used: Vec<(ChartKind, FieldElement)> = Vec::new();
        for (kind, c) in candidates {
            if used.len() == needed {
                break;
            }
            if used.contains(&(kind, c.clone())) || !is_free_point(tree, comp.id, kind, &c) {
                continue;
            }
            let mut s = curvette(tree, comp.id, kind, &c, n)?;
            s.id = seps.len();
            seps.push(s);
            coeffs.push(want.signum());
            used.push((kind, c));
        }
        let placed = used.len();
        if placed < needed {
            return Err(Error::InsufficientTracePoints {
                component: comp.id,
                needed,
            });
        }
    }
    link_partners(tree, &mut seps);
    let members: Vec<(Separatrix, i64)> = seps.into_iter().zip(coeffs).collect();
    let balanced = is_balanced(tree, &members);
    let symmetric = is_j_symmetric(tree, &members);
    if j_symmetric && tree.root.is_real() && !symmetric {
        return Err(Error::InconsistentCertificate(
            "balanced divisor is not J-symmetric".into(),
        ));
    }
    Ok(SeparatrixDivisor {
        members,
        balanced,
        j_symmetric: symmetric,
    })
}

/// The balanced conditions, checked from the definition.
pub fn is_balanced(tree: &ReductionTree, members: &[(Separatrix, i64)]) -> bool {
    if members.iter().any(|(_, a)| !(-1..=1).contains(a)) {
        return false;
    }
    let isolated_ok = members
        .iter()
        .filter(|(s, _)| s.kind == SeparatrixKind::Isolated)
        .all(|(_, a)| *a == 1);
    let trace_count = tree
        .final_singularities()
        .iter()
        .filter(|p| p.is_trace() && !tree.component(p.components[0]).dicritical)
        .count();
    let isolated_count = members.iter().filter(|(s, _)| s.kind == SeparatrixKind::Isolated).count();
    let dicritical_ok = tree.components.iter().filter(|c| c.dicritical).all(|c| {
        let sum: i64 = members
            .iter()
            .filter(|(s, _)| matches!(&s.source, Source::Curvette { component, .. } if *component == c.id))
            .map(|(_, a)| *a)
            .sum();
        sum == 2 - component_valence(tree, c.id) as i64
    });
    isolated_ok && isolated_count == trace_count && dicritical_ok
}

/// Conjugate members share coefficients, and curvettes on conjugation-fixed
/// dicritical components are real.
pub fn is_j_symmetric(tree: &ReductionTree, members: &[(Separatrix, i64)]) -> bool {
    if !tree.root.is_real() {
        return false;
    }
    members.iter().all(|(s, a)| {
        let paired = match s.partner {
            Some(p) => members.iter().any(|(t, b)| t.id == p && b == a),
            None => false,
        };
        let fixed_ok = match &s.source {
            Source::Curvette { component, coord, .. } => {
                let comp = tree.component(*component);
                comp.partner != Some(comp.id) || comp.real_copies == 0 || coord.has_real_coords()
            }
            Source::Trace { .. } => true,
        };
        paired && fixed_ok
    })
}

/// `nu_0(B) = sum a_B nu_0(B)`, counting each branch of a conjugate group.
pub fn divisor_multiplicity(b: &SeparatrixDivisor) -> Result<i64> {
    weighted_nu(b.members.iter().map(|(s, a)| (s, *a, s.multiplicity)))
}

/// `nu_0` of the real members, one term per real branch.
pub fn real_divisor_multiplicity(b: &SeparatrixDivisor) -> Result<i64> {
    weighted_nu(b.members.iter().map(|(s, a)| (s, *a, s.real_copies)))
}

fn weighted_nu<'a>(it: impl Iterator<Item = (&'a Separatrix, i64, usize)>) -> Result<i64> {
    let mut total = 0;
    for (s, a, copies) in it {
        debug_assert!(s.param.is_reduced());
        total += a * copies as i64 * s.nu()? as i64;
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicityReport {
    pub nu0: usize,
    pub nu0_divisor: i64,
    pub tau0: usize,
    pub holds: bool,
    /// `nu_0(B) <= nu_0 + 1`, with equality exactly for second type.
    pub inequality_holds: bool,
    pub second_type: bool,
}

/// Checks `nu_0(F) = nu_0(B) - 1 + tau_0(F)` with each side computed on its
/// own.
pub fn check_multiplicity_formula(tree: &ReductionTree, b: &SeparatrixDivisor) -> Result<MultiplicityReport> {
    let nu0 = algebraic_multiplicity(&tree.root);
    let nb = divisor_multiplicity(b)?;
    let tau0 = tangency_excess(tree, 0);
    let second_type = tree.tangent_saddle_nodes().is_empty();
    let holds = nu0 as i64 == nb - 1 + tau0 as i64;
    let inequality_holds = nb <= nu0 as i64 + 1 && ((nb == nu0 as i64 + 1) == (tau0 == 0));
    Ok(MultiplicityReport {
        nu0,
        nu0_divisor: nb,
        tau0,
        holds,
        inequality_holds,
        second_type,
    })
}
