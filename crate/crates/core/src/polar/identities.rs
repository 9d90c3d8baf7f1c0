use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::chain::{dicritical_crossings, follow_branch, BranchChain};
use super::{
    polar_curve, polar_intersection, real_polar, real_polar_intersection, real_tangency_excess_along_curve,
    tangency_excess_along_curve, PolarCurve,
};
use crate::blowup::ReductionTree;
use crate::error::{Error, Result};
use crate::foliation::{algebraic_multiplicity, is_invariant_equation, milnor_number};
use crate::numeric::{BiPoly, FieldElement, PuiseuxParam};
use crate::separatrix::{balanced_divisor, balanced_divisor_with, default_order, SeparatrixDivisor};

/// Smallest truncation order for the separatrices used by the checks.
const MIN_ORDER: usize = 12;

/// A rational branch `(t^p, s t^q + g(t^p))`, possibly with the axes
/// swapped, together with its equation `(y - g(x))^p - s^p x^q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomBranch {
    pub param: PuiseuxParam,
    pub equation: BiPoly,
}

fn int_poly(e: &[(i64, usize)]) -> Vec<i64> {
    let len = e.iter().map(|(_, k)| k + 1).max().unwrap_or(1);
    let mut c = vec![0; len];
    for &(v, k) in e {
        c[k] += v;
    }
    c
}

pub fn random_branch(rng: &mut impl Rng, n: usize) -> RandomBranch {
    let p: u32 = rng.gen_range(1..=3);
    let q: u32 = loop {
        let q = rng.gen_range(p + 1..=p + 4);
        if num_integer::gcd(p, q) == 1 {
            break q;
        }
    };
    let s = loop {
        let s: i64 = rng.gen_range(-3..=3);
        if s != 0 {
            break s;
        }
    };
    let (g1, g2): (i64, i64) = (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
    let (pu, qu) = (p as usize, q as usize);
    let xs = int_poly(&[(1, pu)]);
    let ys = int_poly(&[(s, qu), (g1, pu), (g2, 2 * pu)]);
    let g = BiPoly::from_int_terms(&[(g1, 1, 0), (g2, 2, 0)]);
    let equation = BiPoly::y()
        .sub(&g)
        .pow(pu)
        .sub(&BiPoly::x().pow(qu).scale(&FieldElement::from_int(s).pow(p)));
    let param = PuiseuxParam::from_int_polys(&xs, &ys, n);
    if rng.gen_bool(0.5) {
        RandomBranch {
            param: PuiseuxParam::new(param.y.clone(), param.x.clone()),
            equation: equation.swap_xy(),
        }
    } else {
        RandomBranch { param, equation }
    }
}

/// Blow-up formula and tangency lemma along one branch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchCheck {
    pub branch: String,
    /// `(B, Gamma)_0` by substitution of the members of `B`.
    pub intersection: i64,
    pub tg0: usize,
    /// `tau_0(F, Gamma)` from the passages of `Gamma` through the tree.
    pub tau: usize,
    pub lemma_holds: bool,
    pub chain: BranchChain,
}

impl BranchCheck {
    pub fn holds(&self) -> bool {
        self.lemma_holds && self.chain.blowup_formula_holds && self.chain.kappa_steps_hold && self.chain.base_case_holds
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolarIdentity {
    pub a: i64,
    pub b: i64,
    pub polar: String,
    pub p0: i64,
    pub mu0: usize,
    pub nu0: usize,
    pub tau: usize,
    pub holds: bool,
    pub warnings: Vec<String>,
}

/// Parities for the real polar: the conjugation-fixed part of the polar.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealPolarCheck {
    pub real_polar: String,
    pub p0_real: i64,
    pub p0_complex: i64,
    pub tau_real: usize,
    pub tau_complex: usize,
    pub polar_parity_holds: bool,
    pub tau_parity_holds: bool,
    /// `p_0(F_R, B_R) = mu_0 + nu_0 - tau_0(F, Gamma_R)` mod 2.
    pub congruence_holds: bool,
}

impl RealPolarCheck {
    pub fn holds(&self) -> bool {
        self.polar_parity_holds && self.tau_parity_holds && self.congruence_holds
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolarReport {
    /// `None` for the radial foliation.
    pub identity: Option<PolarIdentity>,
    pub branches: Vec<BranchCheck>,
    pub real: Option<RealPolarCheck>,
    pub truncation: usize,
}

impl PolarReport {
    pub fn all_hold(&self) -> bool {
        self.identity.as_ref().is_none_or(|p| p.holds)
            && self.branches.iter().all(BranchCheck::holds)
            && self.real.as_ref().is_none_or(RealPolarCheck::holds)
    }
}

/// `default` is the balanced divisor with default curvettes. It is used as
/// is when the branch crosses no dicritical component at a free point.
fn check_branch(tree: &ReductionTree, default: &SeparatrixDivisor, g: &RandomBranch, n: usize) -> Result<BranchCheck> {
    let crossings = dicritical_crossings(tree, &g.param)?;
    let adapted;
    let b = if crossings.is_empty() {
        default
    } else {
        adapted = balanced_divisor_with(tree, tree.root.is_real(), n, &crossings)?;
        &adapted
    };
    let chain = follow_branch(tree, b, &g.param, &g.equation)?;
    let tau = tangency_excess_along_curve(tree, &g.equation)?;
    let intersection = chain.levels[0].intersection;
    let tg0 = chain.levels[0].tg;
    Ok(BranchCheck {
        branch: g.param.to_string(),
        intersection,
        tg0,
        tau,
        lemma_holds: intersection == tg0 as i64 + 1 - tau as i64,
        chain,
    })
}

fn check_polar_identity(tree: &ReductionTree, b: &SeparatrixDivisor, pc: &PolarCurve) -> Result<PolarIdentity> {
    let p0 = polar_intersection(&pc.equation, b)?;
    let mu0 = milnor_number(&tree.root)?;
    let nu0 = algebraic_multiplicity(&tree.root);
    let tau = tangency_excess_along_curve(tree, &pc.equation)?;
    Ok(PolarIdentity {
        a: pc.a,
        b: pc.b,
        polar: pc.equation.to_string(),
        p0,
        mu0,
        nu0,
        tau,
        holds: p0 == (mu0 + nu0) as i64 - tau as i64,
        warnings: pc.warnings.clone(),
    })
}

fn check_real(tree: &ReductionTree, b: &SeparatrixDivisor, pc: &PolarCurve, id: &PolarIdentity) -> Result<RealPolarCheck> {
    let gr = real_polar(&pc.equation)?;
    let p0_real = real_polar_intersection(&gr, b)?;
    let tau_real = real_tangency_excess_along_curve(tree, &gr)?;
    let tau_complex = tangency_excess_along_curve(tree, &gr)?;
    let even = |v: i64| v.rem_euclid(2) == 0;
    Ok(RealPolarCheck {
        real_polar: gr.to_string(),
        p0_real,
        p0_complex: id.p0,
        tau_real,
        tau_complex,
        polar_parity_holds: even(p0_real - id.p0),
        tau_parity_holds: even(tau_real as i64 - tau_complex as i64),
        congruence_holds: even(p0_real - (id.mu0 + id.nu0) as i64 + tau_real as i64),
    })
}

fn run(tree: &ReductionTree, seed: u64, branches: usize, hint: Option<(i64, i64)>, n: usize) -> Result<PolarReport> {
    let b = balanced_divisor(tree, tree.root.is_real(), n)?;
    let (identity, real) = match polar_curve(tree, &b, hint, seed) {
        Ok(pc) => {
            let p = check_polar_identity(tree, &b, &pc)?;
            let r = if tree.root.is_real() { Some(check_real(tree, &b, &pc, &p)?) } else { None };
            (Some(p), r)
        }
        Err(Error::RadialFoliation) => (None, None),
        Err(e) => return Err(e),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    let mut attempts = 0;
    while checks.len() < branches {
        attempts += 1;
        if attempts > 50 * branches.max(1) {
            return Err(Error::GenericityExhausted {
                reasons: vec!["random branches keep landing on invariant curves".into()],
            });
        }
        let g = random_branch(&mut rng, n);
        if is_invariant_equation(&tree.root, &g.equation) {
            continue;
        }
        checks.push(check_branch(tree, &b, &g, n)?);
    }
    Ok(PolarReport {
        identity,
        branches: checks,
        real,
        truncation: n,
    })
}

/// Checks the blow-up formula for tangency orders and the tangency lemma on
/// `branches` random rational branches, and the polar identity
/// `p_0(F, B) = mu_0 + nu_0 - tau_0(F, Gamma)` on a certified polar. Every
/// side is computed on its own. A truncation failure is retried once at
/// twice the order.
pub fn check_polar_identities(
    tree: &ReductionTree,
    seed: u64,
    branches: usize,
    hint: Option<(i64, i64)>,
) -> Result<PolarReport> {
    let n = default_order(tree)?.max(MIN_ORDER);
    match run(tree, seed, branches, hint, n) {
        Err(Error::TruncationExhausted { .. }) => run(tree, seed, branches, hint, 2 * n),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::reduce_singularities;
    use crate::foliation::FoliationGerm;

    fn germ(p: &[(i64, u32, u32)], q: &[(i64, u32, u32)]) -> FoliationGerm {
        FoliationGerm::from_int_terms(p, q).unwrap()
    }

    fn report(f: &FoliationGerm) -> PolarReport {
        let t = reduce_singularities(f).unwrap();
        check_polar_identities(&t, 1, 5, None).unwrap()
    }

    #[test]
    fn random_branch_lies_on_its_equation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let g = random_branch(&mut rng, 30);
            assert!(g.param.substitute(&g.equation).is_known_zero());
            assert!(g.param.is_reduced());
        }
    }

    #[test]
    fn cusp_values() {
        let r = report(&germ(&[(2, 0, 1)], &[(3, 2, 0)]));
        let p = r.identity.as_ref().unwrap();
        assert_eq!((p.p0, p.mu0, p.nu0, p.tau), (3, 2, 1, 0));
        assert!(r.all_hold(), "{r:#?}");
    }

    #[test]
    fn example_values() {
        let r = report(&germ(&[(1, 0, 2), (1, 4, 0)], &[(-1, 1, 1), (1, 5, 0), (1, 1, 2)]));
        let p = r.identity.as_ref().unwrap();
        assert_eq!((p.p0, p.mu0, p.nu0, p.tau), (8, 6, 2, 0));
        assert!(r.all_hold(), "{r:#?}");
    }

    #[test]
    fn radial_checks_branches_only() {
        let r = report(&germ(&[(1, 1, 0)], &[(1, 0, 1)]));
        assert!(r.identity.is_none());
        assert_eq!(r.branches.len(), 5);
        assert!(r.all_hold(), "{r:#?}");
    }

    #[test]
    fn tangent_saddle_node_field() {
        let r = report(&germ(&[(1, 2, 0), (1, 0, 2)], &[(1, 1, 1), (1, 0, 2)]));
        assert!(r.all_hold(), "{r:#?}");
    }
}
