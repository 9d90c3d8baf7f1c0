//! Polar curves `aP - bQ = 0`, tangency orders and polar intersection
//! numbers.

mod chain;
mod identities;

pub use chain::{dicritical_crossings, follow_branch, BranchChain, ChainLevel};
pub use identities::{
    check_polar_identities, random_branch, BranchCheck, PolarReport, PolarIdentity, RandomBranch, RealPolarCheck,
};

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::blowup::{
    real_tangency_excess_at, strict_transform_curve, tangency_excess, ReductionTree,
};
use crate::error::{Error, Result};
use crate::foliation::{algebraic_multiplicity, is_invariant_equation, FoliationGerm};
use crate::numeric::{factor_bivariate, is_conjugation_fixed, BiPoly, FieldElement, PuiseuxParam};
use crate::separatrix::SeparatrixDivisor;

/// Samples tried before giving up on a generic polar.
pub const MAX_SAMPLES: usize = 16;
/// Certified samples that must agree before one of them is used.
pub const STABLE_RUN: usize = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PolarCertificate {
    pub squarefree: bool,
    pub no_invariant_component: bool,
    pub order_matches: bool,
    pub samples_consistent: bool,
}

impl PolarCertificate {
    pub fn is_complete(&self) -> bool {
        self.squarefree && self.no_invariant_component && self.order_matches && self.samples_consistent
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleRecord {
    pub a: i64,
    pub b: i64,
    pub outcome: String,
}

/// Invariants a generic polar must not change from sample to sample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolarFingerprint {
    pub p0: i64,
    pub tau: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarCurve {
    pub a: i64,
    pub b: i64,
    pub equation: BiPoly,
    pub certificate: PolarCertificate,
    pub fingerprint: Option<PolarFingerprint>,
    pub samples: Vec<SampleRecord>,
    pub warnings: Vec<String>,
}

/// `a P - b Q`.
pub fn polar_equation(f: &FoliationGerm, a: i64, b: i64) -> BiPoly {
    f.p()
        .scale(&FieldElement::from_int(a))
        .sub(&f.q().scale(&FieldElement::from_int(b)))
}

/// Deterministic sequence of projective pairs `(a : b)`: coprime pairs by
/// increasing height, shuffled within each height by `seed`.
pub fn polar_samples(seed: u64) -> Vec<(i64, i64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for h in 1i64..=8 {
        let mut level: Vec<(i64, i64)> = Vec::new();
        for a in -h..=h {
            for b in 0..=h {
                if a.abs().max(b) != h || num_integer::gcd(a, b) != 1 || (b == 0 && a != 1) {
                    continue;
                }
                level.push((a, b));
            }
        }
        level.shuffle(&mut rng);
        out.extend(level);
    }
    out
}

/// First truncation order tried by `intersection_number`.
const FIRST_ORDER: usize = 8;

/// `ord_t f(g(t))`. Short truncations of `g` are tried first; a truncation
/// whose substitution is known to vanish gives way to one twice as long.
pub fn intersection_number(f: &BiPoly, g: &PuiseuxParam) -> Result<usize> {
    let full = g.guaranteed_order();
    let mut m = FIRST_ORDER.min(full);
    loop {
        match g.truncate(m).substitute(f).ord() {
            Err(Error::TruncationExhausted { .. }) if m < full => m = (2 * m).min(full),
            other => return other,
        }
    }
}

/// `ord_t` of the pull-back of `P dy - Q dx` by the branch.
pub fn tangency_order(f: &FoliationGerm, g: &PuiseuxParam) -> Result<usize> {
    let s = g.pullback_form(f.p(), f.q());
    if s.is_known_zero() {
        return Err(Error::InvariantBranch);
    }
    s.ord()
}

/// `sum a_B (Gamma, B)_0` over the members of the divisor, every conjugate
/// branch counted.
pub fn polar_intersection(eq: &BiPoly, b: &SeparatrixDivisor) -> Result<i64> {
    let mut total = 0;
    for (s, a) in &b.members {
        total += a * s.multiplicity as i64 * intersection_number(eq, &s.param)? as i64;
    }
    Ok(total)
}

/// Same sum over the real branches only.
pub fn real_polar_intersection(eq: &BiPoly, b: &SeparatrixDivisor) -> Result<i64> {
    let mut total = 0;
    for (s, a) in &b.members {
        if s.real_copies > 0 {
            total += a * s.real_copies as i64 * intersection_number(eq, &s.param)? as i64;
        }
    }
    Ok(total)
}

/// Product of the conjugation-fixed irreducible factors through the origin.
pub fn real_polar(eq: &BiPoly) -> Result<BiPoly> {
    Ok(factor_bivariate(eq)?
        .into_iter()
        .filter(|(f, _)| f.value_at_origin().is_zero() && is_conjugation_fixed(f))
        .fold(BiPoly::one(), |acc, (f, e)| acc.mul(&f.pow(e))))
}

/// `sum tau_q nu_q` over the passages of the curve `{eq = 0}` through the
/// tree, every conjugate copy of a point counted.
pub fn tangency_excess_along_curve(tree: &ReductionTree, eq: &BiPoly) -> Result<usize> {
    Ok(strict_transform_curve(tree, eq)?
        .iter()
        .map(|s| tree.point(s.point).multiplicity * tangency_excess(tree, s.point) * s.nu)
        .sum())
}

/// Real version: real points only, with the real tangency excess.
pub fn real_tangency_excess_along_curve(tree: &ReductionTree, eq: &BiPoly) -> Result<usize> {
    Ok(strict_transform_curve(tree, eq)?
        .iter()
        .map(|s| tree.point(s.point).real_copies * real_tangency_excess_at(tree, s.point) * s.nu)
        .sum())
}

/// Per-sample checks; `Err` carries the first failed condition.
fn certify_sample(tree: &ReductionTree, a: i64, b: i64) -> Result<std::result::Result<(BiPoly, PolarCertificate), String>> {
    let f = &tree.root;
    let eq = polar_equation(f, a, b);
    if eq.is_zero() {
        return Ok(Err("equation vanishes".into()));
    }
    let local: Vec<(BiPoly, usize)> = factor_bivariate(&eq)?
        .into_iter()
        .filter(|(h, _)| h.value_at_origin().is_zero())
        .collect();
    let cert = PolarCertificate {
        squarefree: local.iter().all(|(_, e)| *e == 1),
        no_invariant_component: local.iter().all(|(h, _)| !is_invariant_equation(f, h)),
        order_matches: eq.order().finite() == Some(algebraic_multiplicity(f)),
        samples_consistent: false,
    };
    Ok(if !cert.squarefree {
        Err("not squarefree".into())
    } else if !cert.no_invariant_component {
        Err("has an invariant component".into())
    } else if !cert.order_matches {
        Err("order differs from nu_0".into())
    } else {
        Ok((eq, cert))
    })
}

fn fingerprint(tree: &ReductionTree, eq: &BiPoly, b: &SeparatrixDivisor) -> Result<PolarFingerprint> {
    Ok(PolarFingerprint {
        p0: polar_intersection(eq, b)?,
        tau: tangency_excess_along_curve(tree, eq)?,
    })
}

/// A certified generic polar curve: squarefree, without invariant
/// components, of order `nu_0`, and sharing its polar intersection and
/// tangency excess with two other certified samples. Samples that disagree
/// with the first certified one are reported as warnings.
pub fn polar_curve(
    tree: &ReductionTree,
    b: &SeparatrixDivisor,
    hint: Option<(i64, i64)>,
    seed: u64,
) -> Result<PolarCurve> {
    if tree.root.is_radial() {
        return Err(Error::RadialFoliation);
    }
    let mut order: Vec<(i64, i64)> = hint.into_iter().collect();
    order.extend(polar_samples(seed).into_iter().filter(|s| Some(*s) != hint));
    let mut samples = Vec::new();
    let mut warnings = Vec::new();
    // Certified samples grouped by fingerprint, in order of first appearance.
    let mut groups: Vec<Vec<(i64, i64, BiPoly, PolarCertificate, PolarFingerprint)>> = Vec::new();
    for &(a, bb) in order.iter().take(MAX_SAMPLES) {
        match certify_sample(tree, a, bb)? {
            Err(reason) => samples.push(SampleRecord { a, b: bb, outcome: reason }),
            Ok((eq, cert)) => {
                let fp = fingerprint(tree, &eq, b)?;
                samples.push(SampleRecord {
                    a,
                    b: bb,
                    outcome: "certified".into(),
                });
                let slot = match groups.iter().position(|g| g[0].4 == fp) {
                    Some(k) => k,
                    None => {
                        if let Some(first) = groups.first() {
                            warnings.push(format!(
                                "sample ({a}:{bb}) disagrees with ({}:{}): {:?} vs {:?}",
                                first[0].0, first[0].1, fp, first[0].4
                            ));
                        }
                        groups.push(Vec::new());
                        groups.len() - 1
                    }
                };
                groups[slot].push((a, bb, eq, cert, fp));
                if groups[slot].len() == STABLE_RUN {
                    let (a, bb, equation, mut certificate, fp) = groups.swap_remove(slot).swap_remove(0);
                    certificate.samples_consistent = true;
                    if hint.is_some() && hint != Some((a, bb)) {
                        warnings.push("hinted pair was not generic".into());
                    }
                    return Ok(PolarCurve {
                        a,
                        b: bb,
                        equation,
                        certificate,
                        fingerprint: Some(fp),
                        samples,
                        warnings,
                    });
                }
            }
        }
    }
    Err(Error::GenericityExhausted {
        reasons: samples
            .iter()
            .map(|s| format!("({}:{}) {}", s.a, s.b, s.outcome))
            .chain(warnings)
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::reduce_singularities;
    use crate::separatrix::{balanced_divisor, default_order};

    fn germ(p: &[(i64, u32, u32)], q: &[(i64, u32, u32)]) -> FoliationGerm {
        FoliationGerm::from_int_terms(p, q).unwrap()
    }

    fn example() -> FoliationGerm {
        germ(&[(1, 0, 2), (1, 4, 0)], &[(-1, 1, 1), (1, 5, 0), (1, 1, 2)])
    }

    fn setup(f: &FoliationGerm) -> (ReductionTree, SeparatrixDivisor) {
        let t = reduce_singularities(f).unwrap();
        let b = balanced_divisor(&t, true, default_order(&t).unwrap()).unwrap();
        (t, b)
    }

    #[test]
    fn sample_sequence_is_deterministic() {
        let s = polar_samples(7);
        assert_eq!(s, polar_samples(7));
        assert!(s.len() >= MAX_SAMPLES);
        assert_eq!(s[..2].iter().filter(|p| p.0.abs().max(p.1) == 1).count(), 2);
        let mut sorted = s.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), s.len());
    }

    #[test]
    fn cusp_polar() {
        let (t, b) = setup(&germ(&[(2, 0, 1)], &[(3, 2, 0)]));
        let pc = polar_curve(&t, &b, Some((1, 1)), 0).unwrap();
        assert_eq!((pc.a, pc.b), (1, 1));
        assert_eq!(pc.equation, BiPoly::from_int_terms(&[(2, 0, 1), (-3, 2, 0)]));
        assert!(pc.certificate.is_complete());
        assert_eq!(polar_intersection(&pc.equation, &b), Ok(3));
    }

    #[test]
    fn radial_has_no_polar() {
        let (t, b) = setup(&germ(&[(1, 1, 0)], &[(1, 0, 1)]));
        assert_eq!(polar_curve(&t, &b, None, 0), Err(Error::RadialFoliation));
    }

    #[test]
    fn example_polar_from_p() {
        let (t, b) = setup(&example());
        let pc = polar_curve(&t, &b, Some((1, 0)), 0).unwrap();
        assert_eq!(pc.equation, BiPoly::from_int_terms(&[(1, 0, 2), (1, 4, 0)]));
        assert!(pc.certificate.is_complete());
        assert_eq!(polar_intersection(&pc.equation, &b), Ok(8));
        // -Q = x (y - x^4 - y^2) is certified but not generic.
        assert!(pc.warnings.iter().any(|w| w.contains("(0:1)")));
        // y^2 + x^4 splits into a conjugate pair: the real polar is empty.
        assert!(real_polar(&pc.equation).unwrap().is_constant());
        assert_eq!(tangency_excess_along_curve(&t, &pc.equation), Ok(0));
    }

    #[test]
    fn tangency_orders() {
        // dx: P = 0, Q = -1.
        let regular = FoliationGerm::new(BiPoly::zero(), BiPoly::constant(FieldElement::from_int(-1))).unwrap();
        let axis = PuiseuxParam::from_int_polys(&[0, 1], &[0], 20);
        assert_eq!(tangency_order(&regular, &axis), Ok(0));
        let radial = germ(&[(1, 1, 0)], &[(1, 0, 1)]);
        let parabola = PuiseuxParam::from_int_polys(&[0, 1], &[0, 0, 1], 20);
        assert_eq!(tangency_order(&radial, &parabola), Ok(2));
        // Cusp Hamiltonian along the x-axis: -3 t^2 dt.
        let cusp = germ(&[(2, 0, 1)], &[(3, 2, 0)]);
        assert_eq!(tangency_order(&cusp, &axis), Ok(2));
        let line = PuiseuxParam::from_int_polys(&[0, 1], &[0, 1], 20);
        assert_eq!(tangency_order(&radial, &line), Err(Error::InvariantBranch));
    }

    #[test]
    fn linear_saddle_polar_meets_axes_once() {
        let (t, b) = setup(&germ(&[(1, 1, 0)], &[(-1, 0, 1)]));
        let pc = polar_curve(&t, &b, None, 3).unwrap();
        assert_eq!(polar_intersection(&pc.equation, &b), Ok(2));
    }
}
