//! Foliation germs `P dx/dt = .., Q dy/dt = ..` and their pointwise invariants.

pub(crate) mod classify;
mod invariant_curve;
mod milnor;

pub use classify::{classify_singularity, weak_index, SingularityClass, WeakIndex};
pub use invariant_curve::{invariant_curve, AdaptedFrame};
pub use milnor::{milnor_number, milnor_oracle};

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::numeric::{BiPoly, FieldElement, Order, PuiseuxParam};

/// Germ at the origin of the vector field `P d/dx + Q d/dy`, with dual form
/// `P dy - Q dx`. Any common factor of `P` and `Q` that is a unit at the
/// origin has been divided out, so the singularity is isolated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoliationGerm {
    p: BiPoly,
    q: BiPoly,
}

impl FoliationGerm {
    /// Builds the germ, rejecting a common factor through the origin.
    pub fn new(p: BiPoly, q: BiPoly) -> Result<Self> {
        if p.is_zero() && q.is_zero() {
            return Err(Error::NonIsolated { gcd: "0".into() });
        }
        let g = p.gcd(&q);
        if g.is_constant() {
            return Ok(FoliationGerm { p, q });
        }
        if g.value_at_origin().is_zero() {
            return Err(Error::NonIsolated { gcd: g.to_string() });
        }
        Ok(FoliationGerm {
            p: p.div_exact(&g).expect("gcd divides P"),
            q: q.div_exact(&g).expect("gcd divides Q"),
        })
    }

    pub fn from_int_terms(p: &[(i64, u32, u32)], q: &[(i64, u32, u32)]) -> Result<Self> {
        FoliationGerm::new(BiPoly::from_int_terms(p), BiPoly::from_int_terms(q))
    }

    /// The germ at `(a, b)`, moved to the origin.
    pub fn at_point(p: &BiPoly, q: &BiPoly, a: &FieldElement, b: &FieldElement) -> Result<Self> {
        FoliationGerm::new(p.translate(a, b), q.translate(a, b))
    }

    pub fn p(&self) -> &BiPoly {
        &self.p
    }

    pub fn q(&self) -> &BiPoly {
        &self.q
    }

    pub fn is_singular(&self) -> bool {
        self.p.value_at_origin().is_zero() && self.q.value_at_origin().is_zero()
    }

    /// Linear part `[[P_x, P_y], [Q_x, Q_y]]` at the origin.
    pub fn linear_part(&self) -> [[FieldElement; 2]; 2] {
        [
            [self.p.coeff(1, 0), self.p.coeff(0, 1)],
            [self.q.coeff(1, 0), self.q.coeff(0, 1)],
        ]
    }

    /// Coefficient-wise conjugation.
    pub fn conj(&self) -> Self {
        FoliationGerm {
            p: self.p.conj(),
            q: self.q.conj(),
        }
    }

    /// True when both components have Gaussian-rational coefficients fixed by
    /// conjugation.
    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// A nonzero multiple of `x d/dx + y d/dy`.
    pub fn is_radial(&self) -> bool {
        let k = self.p.coeff(1, 0);
        !k.is_zero() && self.p == BiPoly::x().scale(&k) && self.q == BiPoly::y().scale(&k)
    }

    /// Linear change of coordinates `(x, y) = M (X, Y)`; the field is
    /// transported as `M^{-1} (P, Q)(M (X, Y))`.
    pub fn linear_change(&self, m: &crate::numeric::Linear2) -> Result<Self> {
        let inv = m.inverse()?;
        let p = self.p.linear_change(m)?;
        let q = self.q.linear_change(m)?;
        FoliationGerm::new(
            p.scale(&inv.a).add(&q.scale(&inv.b)),
            p.scale(&inv.c).add(&q.scale(&inv.d)),
        )
    }

    /// Multiplies the field by a unit constant.
    pub fn scale(&self, k: &FieldElement) -> Self {
        FoliationGerm {
            p: self.p.scale(k),
            q: self.q.scale(k),
        }
    }
}

impl fmt::Display for FoliationGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P = {}; Q = {};", self.p, self.q)
    }
}

/// `nu_0 = min(ord P, ord Q)`.
pub fn algebraic_multiplicity(f: &FoliationGerm) -> usize {
    match (f.p.order(), f.q.order()) {
        (Order::Finite(a), Order::Finite(b)) => a.min(b),
        (Order::Finite(a), Order::Infinite) | (Order::Infinite, Order::Finite(a)) => a,
        (Order::Infinite, Order::Infinite) => unreachable!("germ has a nonzero component"),
    }
}

/// Outcome of an invariance test against a parametrized branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Invariance {
    /// The equation test is exact.
    Exact(bool),
    /// The pull-back vanishes up to the stated order.
    UpToOrder(usize),
    /// The pull-back has a nonzero coefficient below its guaranteed order.
    NotInvariant,
}

impl Invariance {
    pub fn holds(self) -> bool {
        matches!(self, Invariance::Exact(true) | Invariance::UpToOrder(_))
    }
}

/// `f` divides `P f_x + Q f_y`.
pub fn is_invariant_equation(fol: &FoliationGerm, f: &BiPoly) -> bool {
    assert!(!f.is_zero());
    let d = fol.p.mul(&f.partial_x()).add(&fol.q.mul(&f.partial_y()));
    d.is_zero() || f.divides(&d)
}

/// The pull-back `(P o g) y' - (Q o g) x'` vanishes to its guaranteed order.
pub fn is_invariant_param(fol: &FoliationGerm, g: &PuiseuxParam) -> Invariance {
    let s = g.pullback_form(&fol.p, &fol.q);
    if s.is_known_zero() {
        Invariance::UpToOrder(s.guaranteed_order())
    } else {
        Invariance::NotInvariant
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> FoliationGerm {
        FoliationGerm::from_int_terms(&[(1, 0, 2), (1, 4, 0)], &[(-1, 1, 1), (1, 5, 0), (1, 1, 2)]).unwrap()
    }

    #[test]
    fn multiplicities() {
        let center = FoliationGerm::from_int_terms(&[(1, 0, 1)], &[(-1, 1, 0)]).unwrap();
        assert_eq!(algebraic_multiplicity(&center), 1);
        assert_eq!(algebraic_multiplicity(&example()), 2);
        let cusp = FoliationGerm::from_int_terms(&[(2, 0, 1)], &[(3, 2, 0)]).unwrap();
        assert_eq!(algebraic_multiplicity(&cusp), 1);
    }

    #[test]
    fn rejects_common_factor_through_origin() {
        let e = FoliationGerm::from_int_terms(&[(1, 1, 1)], &[(1, 1, 1)]).unwrap_err();
        assert_eq!(e.code(), "foliation.NonIsolated");
        // A common factor 1 + x is a unit at the origin and is removed.
        let f = FoliationGerm::from_int_terms(&[(1, 0, 1), (1, 1, 1)], &[(1, 1, 0), (1, 2, 0)]).unwrap();
        assert_eq!(f.p(), &BiPoly::y());
    }

    #[test]
    fn invariance_by_equation() {
        let radial = FoliationGerm::from_int_terms(&[(1, 1, 0)], &[(1, 0, 1)]).unwrap();
        assert!(is_invariant_equation(&radial, &BiPoly::y()));
        let center = FoliationGerm::from_int_terms(&[(1, 0, 1)], &[(-1, 1, 0)]).unwrap();
        let line = BiPoly::y().sub(&BiPoly::x().scale(&FieldElement::i()));
        assert!(is_invariant_equation(&center, &line));
        let cusp = FoliationGerm::from_int_terms(&[(2, 0, 1)], &[(3, 2, 0)]).unwrap();
        assert!(!is_invariant_equation(&cusp, &BiPoly::x()));
        let curve = BiPoly::from_int_terms(&[(1, 0, 2), (-1, 3, 0)]);
        assert!(is_invariant_equation(&cusp, &curve));
    }

    #[test]
    fn invariance_by_param() {
        let cusp = FoliationGerm::from_int_terms(&[(2, 0, 1)], &[(3, 2, 0)]).unwrap();
        let g = PuiseuxParam::from_int_polys(&[0, 0, 1], &[0, 0, 0, 1], 10);
        assert!(is_invariant_param(&cusp, &g).holds());
        let h = PuiseuxParam::from_int_polys(&[0, 1], &[0, 0, 1], 10);
        assert_eq!(is_invariant_param(&cusp, &h), Invariance::NotInvariant);
    }

    #[test]
    fn radial_detection() {
        let radial = FoliationGerm::from_int_terms(&[(3, 1, 0)], &[(3, 0, 1)]).unwrap();
        assert!(radial.is_radial());
        assert!(!example().is_radial());
    }
}
