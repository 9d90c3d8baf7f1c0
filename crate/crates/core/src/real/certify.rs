use serde::Serialize;

use super::{foliation_class, CenterFocus, ClassFlags, RealFoliation, SignRule};
use crate::blowup::{real_tangency_excess, tangency_excess};
use crate::error::{Error, Result};
use crate::foliation::{algebraic_multiplicity, is_invariant_param, milnor_number, Invariance};
use crate::separatrix::{
    balanced_divisor, divisor_multiplicity, locate_branch, real_divisor_multiplicity, Separatrix, SeparatrixKind,
};

/// Doublings of the truncation order tried to reach the required residual
/// order on the witness.
const WITNESS_RETRIES: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Theorem {
    /// Topologically RGC with even algebraic multiplicity.
    #[serde(rename = "even-multiplicity")]
    EvenMultiplicity,
    /// Topologically RGC with even Milnor number.
    #[serde(rename = "even-milnor")]
    EvenMilnor,
    /// Algebraic multiplicity and real tangency excess of equal parity.
    #[serde(rename = "tangency-parity")]
    TangencyParity,
    #[serde(rename = "none")]
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "verdict")]
pub enum Verdict {
    SeparatrixExists { witness: usize },
    NoConclusion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Parities {
    pub nu0: usize,
    pub mu0: usize,
    pub tau_real: usize,
    pub tau_complex: usize,
    pub nu0_divisor_real: i64,
    pub nu0_divisor_complex: i64,
    /// `nu_0(B_R) = nu_0(B_C)` mod 2.
    pub divisor_parity_holds: bool,
    /// `tau_0(F_R) = tau_0(F_C)` mod 2.
    pub tau_parity_holds: bool,
    /// `tau_0(F_R)` even, checked only for topological RGC fields.
    pub topological_rgc_tau_even: Option<bool>,
}

impl Parities {
    pub fn hold(&self) -> bool {
        self.divisor_parity_holds && self.tau_parity_holds && self.topological_rgc_tau_even != Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessInfo {
    pub id: usize,
    pub kind: SeparatrixKind,
    pub formal_only: bool,
    pub param: String,
    /// Order to which the pull-back of the form vanishes.
    pub residual_order: usize,
    pub required_order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub flags: ClassFlags,
    pub parities: Parities,
    #[serde(flatten)]
    pub verdict: Verdict,
    pub theorem: Theorem,
    pub witness: Option<WitnessInfo>,
    /// Real separatrices in the balanced divisor, counted per branch.
    pub real_separatrices: usize,
    /// Center-focus implies odd `nu_0`, odd `mu_0` and no real separatrix.
    pub center_focus_consistent: bool,
    /// Topological second type with `nu_0` or `mu_0` even implies a real
    /// separatrix.
    pub second_type_consistent: bool,
    pub sign_rule: bool,
    pub notes: Vec<String>,
}

fn residual(rf: &RealFoliation, s: &Separatrix) -> usize {
    match is_invariant_param(rf.germ(), &s.param) {
        Invariance::UpToOrder(k) => k,
        _ => 0,
    }
}

/// The real members of a balanced divisor, isolated ones first, each with
/// the order of its invariance residual, at the first truncation order that
/// reaches `required` for the best candidate.
fn real_members(rf: &RealFoliation, required: usize) -> Result<(Vec<(Separatrix, usize)>, i64, i64, usize)> {
    let mut n = required;
    let mut last = None;
    for _ in 0..=WITNESS_RETRIES {
        let b = balanced_divisor(&rf.tree, true, n)?;
        let mut reals: Vec<(Separatrix, usize)> = b
            .separatrices()
            .filter(|s| s.real_copies > 0)
            .map(|s| (s.clone(), residual(rf, s)))
            .collect();
        reals.sort_by_key(|(s, _)| (s.kind != SeparatrixKind::Isolated, s.id));
        let nb = (real_divisor_multiplicity(&b)?, divisor_multiplicity(&b)?);
        let count = reals.iter().map(|(s, _)| s.real_copies).sum();
        let done = reals.first().is_none_or(|(_, k)| *k >= required);
        last = Some((reals, nb.0, nb.1, count));
        if done {
            break;
        }
        n *= 2;
    }
    Ok(last.expect("at least one attempt"))
}

/// Tries the even-multiplicity, even-Milnor and tangency-parity criteria in
/// that order. A
/// positive verdict carries a real separatrix of the balanced divisor whose
/// reality is re-derived by lifting its conjugate through the tree.
pub fn certify_separatrix(rf: &RealFoliation, rule: SignRule) -> Result<Certificate> {
    let tree = &rf.tree;
    let nu0 = algebraic_multiplicity(rf.germ());
    let mu0 = milnor_number(rf.germ())?;
    let required = 2 * mu0 + 4;
    let flags = foliation_class(tree, rule)?;
    let tau_complex = tangency_excess(tree, 0);
    let tau_real = real_tangency_excess(tree);
    let (reals, nb_real, nb_complex, real_count) = real_members(rf, required)?;

    let parities = Parities {
        nu0,
        mu0,
        tau_real,
        tau_complex,
        nu0_divisor_real: nb_real,
        nu0_divisor_complex: nb_complex,
        divisor_parity_holds: (nb_real - nb_complex).rem_euclid(2) == 0,
        tau_parity_holds: (tau_real + tau_complex).is_multiple_of(2),
        topological_rgc_tau_even: flags.topological_rgc.then_some(tau_real.is_multiple_of(2)),
    };

    let theorem = if flags.topological_rgc && nu0.is_multiple_of(2) {
        Theorem::EvenMultiplicity
    } else if flags.topological_rgc && mu0 % 2 == 0 {
        Theorem::EvenMilnor
    } else if nu0 % 2 == tau_real % 2 {
        Theorem::TangencyParity
    } else {
        Theorem::None
    };

    let mut notes: Vec<String> = flags
        .sign_rule_uses
        .iter()
        .map(|p| format!("saddle/node sign rule used at tree point {p}"))
        .collect();
    let (verdict, witness) = if theorem == Theorem::None {
        (Verdict::NoConclusion, None)
    } else {
        let (s, k) = reals.first().ok_or_else(|| {
            Error::InconsistentCertificate(format!("{theorem:?} applies but no real separatrix was found"))
        })?;
        let back = locate_branch(tree, &s.param.conj())?;
        if back != s.source {
            return Err(Error::InconsistentCertificate(format!(
                "witness {} is not fixed by conjugation",
                s.id
            )));
        }
        if *k < required {
            notes.push(format!("witness residual order {k} is below {required}"));
        }
        (
            Verdict::SeparatrixExists { witness: s.id },
            Some(WitnessInfo {
                id: s.id,
                kind: s.kind,
                formal_only: s.is_formal_only(),
                param: s.param.to_string(),
                residual_order: *k,
                required_order: required,
            }),
        )
    };

    let center_focus_consistent =
        flags.center_focus != CenterFocus::Yes || (nu0 % 2 == 1 && mu0 % 2 == 1 && real_count == 0);
    let second_type_consistent = !(flags.topological_st && (nu0.is_multiple_of(2) || mu0 % 2 == 0)) || real_count > 0;
    Ok(Certificate {
        flags,
        parities,
        verdict,
        theorem,
        witness,
        real_separatrices: real_count,
        center_focus_consistent,
        second_type_consistent,
        sign_rule: rule.0,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::FoliationGerm;

    fn certify(p: &[(i64, u32, u32)], q: &[(i64, u32, u32)]) -> Certificate {
        let f = FoliationGerm::from_int_terms(p, q).unwrap();
        certify_separatrix(&RealFoliation::new(&f).unwrap(), SignRule::default()).unwrap()
    }

    #[test]
    fn example_via_even_multiplicity_with_formal_witness() {
        let c = certify(&[(1, 0, 2), (1, 4, 0)], &[(-1, 1, 1), (1, 5, 0), (1, 1, 2)]);
        assert_eq!(c.theorem, Theorem::EvenMultiplicity);
        let w = c.witness.as_ref().unwrap();
        assert!(w.formal_only);
        assert!(w.residual_order >= w.required_order);
        assert_eq!((c.parities.nu0, c.parities.mu0), (2, 6));
        assert!(c.parities.hold());
        assert_eq!(c.notes.len(), 1);
    }

    #[test]
    fn center_has_no_conclusion() {
        let c = certify(&[(1, 0, 1)], &[(-1, 1, 0)]);
        assert_eq!(c.verdict, Verdict::NoConclusion);
        assert_eq!(c.theorem, Theorem::None);
        assert_eq!(c.flags.center_focus, CenterFocus::Yes);
        assert_eq!(c.real_separatrices, 0);
        assert!(c.center_focus_consistent);
    }

    #[test]
    fn cusp_via_even_milnor() {
        let c = certify(&[(2, 0, 1)], &[(3, 2, 0)]);
        assert_eq!(c.theorem, Theorem::EvenMilnor);
        let w = c.witness.unwrap();
        assert!(!w.formal_only);
        assert!(w.residual_order >= w.required_order);
    }

    #[test]
    fn even_saddle_node_blocks_the_criteria() {
        // y dx + x^2 dy: nu_0 = 1, mu_0 = 2 and a topological saddle-node.
        let c = certify(&[(1, 2, 0)], &[(-1, 0, 1)]);
        assert!(!c.flags.topological_rgc);
        assert!(c.parities.hold());
        assert!(c.second_type_consistent);
    }
}
