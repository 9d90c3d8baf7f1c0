//! Truncated power series in one variable with an explicit guaranteed order,
//! and parametrizations of formal branches.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use super::bipoly::BiPoly;
use super::field::FieldElement;
use crate::error::{Error, Result};

/// A series known exactly modulo `t^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    coeffs: Vec<FieldElement>,
    order: usize,
}

impl TruncSeries {
    pub fn new(mut coeffs: Vec<FieldElement>, order: usize) -> Self {
        coeffs.resize(order, FieldElement::zero());
        TruncSeries { coeffs, order }
    }

    pub fn zero(order: usize) -> Self {
        TruncSeries::new(Vec::new(), order)
    }

    /// Exact polynomial `sum c_k t^k`, known to `order`.
    pub fn from_poly(c: &[FieldElement], order: usize) -> Self {
        TruncSeries::new(c.iter().take(order).cloned().collect(), order)
    }

    pub fn monomial(k: FieldElement, e: usize, order: usize) -> Self {
        let mut c = vec![FieldElement::zero(); order];
        if e < order {
            c[e] = k;
        }
        TruncSeries { coeffs: c, order }
    }

    pub fn t(order: usize) -> Self {
        TruncSeries::monomial(FieldElement::one(), 1, order)
    }

    pub fn constant(k: FieldElement, order: usize) -> Self {
        TruncSeries::monomial(k, 0, order)
    }

    /// The guaranteed order: coefficients below it are exact.
    pub fn guaranteed_order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, k: usize) -> FieldElement {
        assert!(k < self.order, "coefficient {k} beyond guaranteed order {}", self.order);
        self.coeffs[k].clone()
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Lower bound for the valuation: the first nonzero index, or the
    /// guaranteed order when every known coefficient vanishes.
    pub fn valuation_bound(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(self.order)
    }

    /// Certified order of vanishing at `t = 0`.
    pub fn ord(&self) -> Result<usize> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .ok_or(Error::TruncationExhausted { order: self.order })
    }

    pub fn is_known_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        TruncSeries::new(self.coeffs[..order].to_vec(), order)
    }

    pub fn add(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        TruncSeries {
            coeffs: (0..order).map(|k| &self.coeffs[k] + &o.coeffs[k]).collect(),
            order,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        TruncSeries {
            coeffs: (0..order).map(|k| &self.coeffs[k] - &o.coeffs[k]).collect(),
            order,
        }
    }

    pub fn scale(&self, k: &FieldElement) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
            order: self.order,
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-FieldElement::one())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let va = self.valuation_bound();
        let vb = o.valuation_bound();
        let order = (self.order + vb).min(o.order + va);
        let mut c = vec![FieldElement::zero(); order];
        for i in va..self.order.min(order) {
            let a = &self.coeffs[i];
            if a.is_zero() {
                continue;
            }
            for j in vb..o.order.min(order - i) {
                let b = &o.coeffs[j];
                if !b.is_zero() {
                    c[i + j] += &(a * b);
                }
            }
        }
        TruncSeries { coeffs: c, order }
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut out = TruncSeries::constant(FieldElement::one(), usize::MAX / 4);
        for _ in 0..n {
            out = out.mul(self);
        }
        if n == 0 {
            return TruncSeries::constant(FieldElement::one(), self.order.max(1));
        }
        out
    }

    pub fn derivative(&self) -> Self {
        let order = self.order.saturating_sub(1);
        TruncSeries {
            coeffs: (0..order)
                .map(|k| &self.coeffs[k + 1] * &FieldElement::from_int(k as i64 + 1))
                .collect(),
            order,
        }
    }

    /// `self / t^k`, requiring the first `k` coefficients to vanish.
    pub fn shift_down(&self, k: usize) -> Self {
        assert!(self.coeffs[..k.min(self.order)].iter().all(Zero::is_zero));
        let order = self.order.saturating_sub(k);
        TruncSeries {
            coeffs: self.coeffs[k.min(self.order)..].to_vec(),
            order,
        }
    }

    pub fn shift_up(&self, k: usize) -> Self {
        let mut c = vec![FieldElement::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        TruncSeries {
            coeffs: c,
            order: self.order + k,
        }
    }

    /// Inverse of a series with nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self
            .coeffs
            .first()
            .filter(|c| !c.is_zero())
            .ok_or(Error::TruncationExhausted { order: self.order })?;
        let inv0 = c0.inv().unwrap();
        let mut out = vec![FieldElement::zero(); self.order];
        out[0] = inv0.clone();
        for n in 1..self.order {
            let mut s = FieldElement::zero();
            for k in 1..=n {
                s += &(&self.coeffs[k] * &out[n - k]);
            }
            out[n] = -(&s * &inv0);
        }
        Ok(TruncSeries {
            coeffs: out,
            order: self.order,
        })
    }

    /// `self / d` where `ord(d) <= ord(self)`.
    pub fn div(&self, d: &Self) -> Result<Self> {
        let k = d.ord()?;
        let num = self.shift_down(k);
        let den = d.shift_down(k);
        Ok(num.mul(&den.inverse()?))
    }

    /// `self(s(t))` for a series `s` without constant term.
    pub fn compose(&self, s: &Self) -> Self {
        assert!(s.coeffs.first().is_none_or(Zero::is_zero), "inner series must vanish at 0");
        let mut acc = TruncSeries::zero(usize::MAX / 4);
        let mut power = TruncSeries::constant(FieldElement::one(), usize::MAX / 4);
        let vs = s.valuation_bound().max(1);
        let mut result_order = usize::MAX / 4;
        for k in 0..self.order {
            if !self.coeffs[k].is_zero() {
                acc = acc.add(&power.scale(&self.coeffs[k]));
            }
            power = power.mul(s);
            if power.valuation_bound() >= self.order * vs {
                break;
            }
        }
        // Terms of self beyond its guaranteed order start at t^(order * vs).
        result_order = result_order.min(self.order * vs);
        acc.truncate(result_order)
    }

    pub fn conj(&self) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(FieldElement::conj).collect(),
            order: self.order,
        }
    }

    /// Support (indices of nonzero coefficients).
    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, _)| k)
            .collect()
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match k {
                0 => format!("{c}"),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{k}"),
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{} + O(t^{})", parts.join(" + "), self.order)
    }
}

impl BiPoly {
    /// `self(x(t), y(t))` with the guaranteed order propagated.
    pub fn substitute_series(&self, x: &TruncSeries, y: &TruncSeries) -> TruncSeries {
        let dx = self.degree_x().unwrap_or(0);
        let big = x.guaranteed_order().max(y.guaranteed_order()) * 4 + 4;
        let mut xp = vec![TruncSeries::constant(FieldElement::one(), big)];
        for k in 0..dx {
            xp.push(xp[k].mul(x));
        }
        // Horner in y over the x-polynomial coefficients.
        let mut acc = TruncSeries::zero(big);
        for c in self.y_coeffs().iter().rev() {
            let mut cx = TruncSeries::zero(big);
            for (i, v) in c.coeffs().iter().enumerate() {
                if !v.is_zero() {
                    cx = cx.add(&xp[i].scale(v));
                }
            }
            acc = acc.mul(y).add(&cx);
        }
        acc
    }
}

/// Parametrization `t -> (x(t), y(t))` of a formal branch at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuiseuxParam {
    pub x: TruncSeries,
    pub y: TruncSeries,
}

impl PuiseuxParam {
    pub fn new(x: TruncSeries, y: TruncSeries) -> Self {
        assert!(
            x.coeffs.first().is_none_or(Zero::is_zero) && y.coeffs.first().is_none_or(Zero::is_zero),
            "branch parametrizations vanish at t = 0"
        );
        PuiseuxParam { x, y }
    }

    /// Exact polynomial parametrization, known to `order`.
    pub fn from_polys(x: &[FieldElement], y: &[FieldElement], order: usize) -> Self {
        PuiseuxParam::new(TruncSeries::from_poly(x, order), TruncSeries::from_poly(y, order))
    }

    pub fn from_int_polys(x: &[i64], y: &[i64], order: usize) -> Self {
        let f = |c: &[i64]| c.iter().map(|&k| FieldElement::from_int(k)).collect::<Vec<_>>();
        PuiseuxParam::from_polys(&f(x), &f(y), order)
    }

    pub fn guaranteed_order(&self) -> usize {
        self.x.guaranteed_order().min(self.y.guaranteed_order())
    }

    /// Multiplicity of the branch: `min(ord x, ord y)`.
    pub fn multiplicity(&self) -> Result<usize> {
        match (self.x.ord(), self.y.ord()) {
            (Ok(a), Ok(b)) => Ok(a.min(b)),
            (Ok(a), Err(_)) if a < self.y.guaranteed_order() => Ok(a),
            (Err(_), Ok(b)) if b < self.x.guaranteed_order() => Ok(b),
            (Err(e), _) | (_, Err(e)) => Err(e),
        }
    }

    /// gcd of all exponents in the supports; 1 for a reduced parametrization.
    pub fn exponent_gcd(&self) -> usize {
        self.x
            .support()
            .into_iter()
            .chain(self.y.support())
            .fold(0usize, |g, e| g.gcd(&e))
    }

    pub fn is_reduced(&self) -> bool {
        self.exponent_gcd() == 1
    }

    pub fn conj(&self) -> Self {
        PuiseuxParam {
            x: self.x.conj(),
            y: self.y.conj(),
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        PuiseuxParam {
            x: self.x.truncate(order),
            y: self.y.truncate(order),
        }
    }

    /// `f(x(t), y(t))`.
    pub fn substitute(&self, f: &BiPoly) -> TruncSeries {
        f.substitute_series(&self.x, &self.y)
    }

    /// `(P o g) y' - (Q o g) x'`, the pull-back of `P dy - Q dx`.
    pub fn pullback_form(&self, p: &BiPoly, q: &BiPoly) -> TruncSeries {
        let pg = self.substitute(p);
        let qg = self.substitute(q);
        pg.mul(&self.y.derivative()).sub(&qg.mul(&self.x.derivative()))
    }
}

impl fmt::Display for PuiseuxParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cusp(order: usize) -> PuiseuxParam {
        PuiseuxParam::from_int_polys(&[0, 0, 1], &[0, 0, 0, 1], order)
    }

    #[test]
    fn cusp_parametrizes_its_equation() {
        let f = BiPoly::from_int_terms(&[(1, 0, 2), (-1, 3, 0)]);
        let s = cusp(12).substitute(&f);
        assert!(s.is_known_zero());
        assert!(s.guaranteed_order() >= 12);
        assert_eq!(s.ord(), Err(Error::TruncationExhausted { order: s.guaranteed_order() }));
        assert_eq!(cusp(12).substitute(&BiPoly::x()).ord(), Ok(2));
    }

    #[test]
    fn polar_of_cusp_along_cusp() {
        // 2a y - 3b x^2 with a = 5, b = 7 gives 10 t^3 - 21 t^4.
        let f = BiPoly::from_int_terms(&[(10, 0, 1), (-21, 2, 0)]);
        let s = cusp(12).substitute(&f);
        assert_eq!(s.ord(), Ok(3));
        assert_eq!(s.coeff(3), FieldElement::from_int(10));
        assert_eq!(s.coeff(4), FieldElement::from_int(-21));
    }

    #[test]
    fn guaranteed_orders_propagate() {
        let a = TruncSeries::from_poly(&[FieldElement::zero(), FieldElement::one()], 5);
        let b = TruncSeries::from_poly(&[FieldElement::zero(), FieldElement::zero(), FieldElement::one()], 7);
        assert_eq!(a.mul(&b).guaranteed_order(), 7);
        assert_eq!(a.add(&b).guaranteed_order(), 5);
        assert_eq!(a.derivative().guaranteed_order(), 4);
    }

    #[test]
    fn reducedness() {
        assert!(cusp(10).is_reduced());
        assert!(!PuiseuxParam::from_int_polys(&[0, 0, 1], &[0, 0, 0, 0, 1], 10).is_reduced());
        assert_eq!(cusp(10).multiplicity(), Ok(2));
    }
}
