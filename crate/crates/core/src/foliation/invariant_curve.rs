use num_traits::Zero;

use super::FoliationGerm;
use crate::error::{Error, Result};
use crate::numeric::{FieldElement, Linear2, PuiseuxParam, TruncSeries};

/// Eigenbasis of a simple singularity: `along` is the tangent direction of
/// the wanted invariant curve (eigenvalue `lambda_along`), `other` the second
/// eigendirection (eigenvalue `lambda_other`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptedFrame {
    pub along: (FieldElement, FieldElement),
    pub lambda_along: FieldElement,
    pub other: (FieldElement, FieldElement),
    pub lambda_other: FieldElement,
}

impl AdaptedFrame {
    fn matrix(&self) -> Linear2 {
        Linear2::new(
            self.along.0.clone(),
            self.other.0.clone(),
            self.along.1.clone(),
            self.other.1.clone(),
        )
    }

    /// The germ in coordinates `(X, Y)` with `(x, y) = X along + Y other`.
    pub fn transport(&self, f: &FoliationGerm) -> Result<FoliationGerm> {
        f.linear_change(&self.matrix())
    }
}

/// Invariant curve tangent to `frame.along`, as the graph `Y = phi(X)` in the
/// adapted coordinates, solved order by order up to `X^n` inclusive.
///
/// Returns the graph and the parametrization `t -> t along + phi(t) other` in
/// the coordinates of `f`. The recursion `phi_k (lambda_other - k lambda_along)
/// = -E_k` is uniquely solvable when no `lambda_other / lambda_along` equals an
/// integer `k >= 2`, which holds at simple singularities in this direction.
pub fn invariant_curve(
    f: &FoliationGerm,
    frame: &AdaptedFrame,
    n: usize,
) -> Result<(TruncSeries, PuiseuxParam)> {
    let g = frame.transport(f)?;
    let (p, q) = (g.p(), g.q());
    let ord = n + 1;
    let mut phi = vec![FieldElement::zero(); ord];
    for k in 2..=n {
        // Coefficient k of the residual only involves orders up to k.
        let t = TruncSeries::t(k + 1);
        let ph = TruncSeries::new(phi[..=k].to_vec(), k + 1);
        let e = q
            .substitute_series(&t, &ph)
            .sub(&ph.derivative().mul(&p.substitute_series(&t, &ph)).truncate(k + 1));
        let ek = e.coeff(k);
        if ek.is_zero() {
            continue;
        }
        let den = &frame.lambda_other - &(&FieldElement::from_int(k as i64) * &frame.lambda_along);
        let inv = den.inv().ok_or(Error::NotSimple)?;
        phi[k] = -(&ek * &inv);
    }
    let graph = TruncSeries::new(phi, ord);
    let tt = TruncSeries::t(ord);
    let x = tt.scale(&frame.along.0).add(&graph.scale(&frame.other.0));
    let y = tt.scale(&frame.along.1).add(&graph.scale(&frame.other.1));
    Ok((graph, PuiseuxParam::new(x, y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::is_invariant_param;
    use num_traits::One;

    fn e(n: i64) -> FieldElement {
        FieldElement::from_int(n)
    }

    fn axes(l1: i64, l2: i64) -> AdaptedFrame {
        AdaptedFrame {
            along: (e(1), e(0)),
            lambda_along: e(l1),
            other: (e(0), e(1)),
            lambda_other: e(l2),
        }
    }

    #[test]
    fn linear_saddle_axis() {
        let f = FoliationGerm::from_int_terms(&[(1, 1, 0)], &[(-1, 0, 1)]).unwrap();
        let (phi, _) = invariant_curve(&f, &axes(1, -1), 10).unwrap();
        assert!(phi.is_known_zero());
    }

    #[test]
    fn saddle_node_weak_curve() {
        // y(1+x) dx + x^2 dy: P = x^2, Q = -y(1+x), weak direction x, strong y.
        let f = FoliationGerm::from_int_terms(&[(1, 2, 0)], &[(-1, 0, 1), (-1, 1, 1)]).unwrap();
        let (phi, g) = invariant_curve(&f, &axes(0, -1), 12).unwrap();
        assert!(phi.is_known_zero());
        assert!(is_invariant_param(&f, &g).holds());
        // Linear part [[0, 0], [1, -1]]: kernel (1, 1), strong direction (0, 1).
        let h = FoliationGerm::from_int_terms(&[(1, 2, 0)], &[(-1, 0, 1), (-1, 1, 1), (1, 1, 0), (1, 2, 0)]).unwrap();
        let frame = AdaptedFrame {
            along: (e(1), e(1)),
            lambda_along: e(0),
            other: (e(0), e(1)),
            lambda_other: e(-1),
        };
        let (_, g) = invariant_curve(&h, &frame, 12).unwrap();
        assert!(is_invariant_param(&h, &g).holds());
        assert!(g.guaranteed_order() >= 13);
    }

    #[test]
    fn graph_is_invariant_for_nonlinear_saddle() {
        // Saddle with eigenvalues 1 and -2 plus quadratic terms.
        let f = FoliationGerm::from_int_terms(&[(1, 1, 0), (1, 0, 2)], &[(-2, 0, 1), (3, 2, 0)]).unwrap();
        let (_, g) = invariant_curve(&f, &axes(1, -2), 16).unwrap();
        assert!(is_invariant_param(&f, &g).holds());
        let (_, g2) = invariant_curve(
            &f,
            &AdaptedFrame {
                along: (e(0), e(1)),
                lambda_along: e(-2),
                other: (FieldElement::one(), e(0)),
                lambda_other: e(1),
            },
            16,
        )
        .unwrap();
        assert!(is_invariant_param(&f, &g2).holds());
    }
}
