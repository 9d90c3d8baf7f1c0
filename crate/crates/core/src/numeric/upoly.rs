//! Univariate polynomials over the coefficient tower, factorization over
//! `Q(i)`, and real root isolation over `Q`.

use std::fmt;
use std::sync::Arc;

use algebraics::polynomial::Polynomial as ZPoly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::{Extension, FieldElement};
use super::gaussian::{rat, Gaussian};
use crate::error::{Error, Result};

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    c: Vec<FieldElement>,
}

impl UPoly {
    pub fn new(mut c: Vec<FieldElement>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn zero() -> Self {
        UPoly { c: Vec::new() }
    }

    pub fn constant(k: FieldElement) -> Self {
        UPoly::new(vec![k])
    }

    /// `u - r`
    pub fn linear_root(r: &FieldElement) -> Self {
        UPoly::new(vec![-r, FieldElement::one()])
    }

    pub fn monomial(k: FieldElement, n: usize) -> Self {
        let mut c = vec![FieldElement::zero(); n];
        c.push(k);
        UPoly::new(c)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        UPoly::new(c.iter().map(|&k| FieldElement::from_int(k)).collect())
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> FieldElement {
        self.c.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> FieldElement {
        self.c.last().cloned().unwrap_or_default()
    }

    /// Order of vanishing at 0; `None` for the zero polynomial.
    pub fn ord(&self) -> Option<usize> {
        self.c.iter().position(|k| !k.is_zero())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().inv().unwrap();
        self.scale(&inv)
    }

    pub fn scale(&self, k: &FieldElement) -> Self {
        UPoly::new(self.c.iter().map(|x| x * k).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        UPoly::new((0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        UPoly::new((0..n).map(|k| &self.coeff(k) - &o.coeff(k)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![FieldElement::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        UPoly::new(out)
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut out = UPoly::constant(FieldElement::one());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.c.len() - 1;
        let inv = d.lead().inv().unwrap();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut q = vec![FieldElement::zero(); r.len() - dd];
        for k in (0..r.len() - dd).rev() {
            let top = &r[k + dd] * &inv;
            if top.is_zero() {
                continue;
            }
            for (j, dj) in d.c.iter().enumerate() {
                r[k + j] = &r[k + j] - &(&top * dj);
            }
            q[k] = top;
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.monic(), o.monic());
        while !b.is_zero() {
            if b.degree() == Some(0) {
                return UPoly::constant(FieldElement::one());
            }
            let r = a.divrem(&b).1.monic();
            a = std::mem::replace(&mut b, r);
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        UPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, x)| x * &FieldElement::from_int(k as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = FieldElement::zero();
        for k in self.c.iter().rev() {
            acc = &(&acc * x) + k;
        }
        acc
    }

    /// `p(u + s)`
    pub fn shift(&self, s: &FieldElement) -> Self {
        let lin = UPoly::new(vec![s.clone(), FieldElement::one()]);
        let mut acc = UPoly::zero();
        for k in self.c.iter().rev() {
            acc = acc.mul(&lin).add(&UPoly::constant(k.clone()));
        }
        acc
    }

    pub fn conj(&self) -> Self {
        UPoly::new(self.c.iter().map(FieldElement::conj).collect())
    }

    /// Yun's squarefree decomposition of a monic multiple of `self`:
    /// pairs `(factor, multiplicity)` with pairwise coprime squarefree factors.
    pub fn squarefree(&self) -> Vec<(UPoly, usize)> {
        let f = self.monic();
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let df = f.derivative();
        let mut a = f.gcd(&df);
        let mut b = f.divrem(&a).0;
        let mut c = df.divrem(&a).0;
        let mut d = c.sub(&b.derivative());
        let mut k = 1;
        loop {
            let g = b.gcd(&d);
            if g.degree().unwrap_or(0) > 0 {
                out.push((g.clone(), k));
            }
            b = b.divrem(&g).0;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.divrem(&g).0;
            d = c.sub(&b.derivative());
            k += 1;
            a = a.divrem(&g).0;
        }
        let _ = a;
        out
    }

    /// Whether all coefficients are `Q(i)` values.
    pub fn is_gaussian(&self) -> bool {
        self.c.iter().all(|k| k.as_gaussian().is_some())
    }

    pub fn is_rational(&self) -> bool {
        self.c.iter().all(|k| k.as_rational().is_some())
    }

    pub fn extension(&self) -> Option<Arc<Extension>> {
        self.c.iter().find_map(|k| k.extension().cloned())
    }

    fn gaussian_coeffs(&self) -> Vec<Gaussian> {
        self.c.iter().map(|k| k.as_gaussian().expect("Q(i) coefficient")).collect()
    }

    fn rational_coeffs(&self) -> Vec<BigRational> {
        self.c.iter().map(|k| k.as_rational().expect("rational coefficient")).collect()
    }

    pub fn from_rationals(c: Vec<BigRational>) -> Self {
        UPoly::new(c.into_iter().map(FieldElement::from_rational).collect())
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (k, x) in self.c.iter().enumerate().rev() {
            if x.is_zero() {
                continue;
            }
            parts.push(match k {
                0 => format!("{x}"),
                1 => format!("{x}*u"),
                _ => format!("{x}*u^{k}"),
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

fn to_integer_poly(c: &[BigRational]) -> Vec<BigInt> {
    let l = c.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    c.iter().map(|r| (r * BigRational::from_integer(l.clone())).to_integer()).collect()
}

/// Irreducible factorization of a nonzero squarefree-or-not polynomial over `Q`
/// into monic factors with multiplicities.
pub fn factor_rational(p: &UPoly) -> Vec<(UPoly, usize)> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let ints = to_integer_poly(&p.rational_coeffs());
    let zp: ZPoly<BigInt> = ints.into();
    let factors = zp.factor();
    factors
        .polynomial_factors
        .into_iter()
        .filter(|f| f.polynomial.degree().unwrap_or(0) > 0)
        .map(|f| {
            let c: Vec<BigRational> = f
                .polynomial
                .iter()
                .map(|k| BigRational::from_integer(k.clone()))
                .collect();
            (UPoly::from_rationals(c).monic(), f.power)
        })
        .collect()
}

/// Irreducible factorization over `Q(i)` by Trager's norm method.
pub fn factor_gaussian(p: &UPoly) -> Vec<(UPoly, usize)> {
    assert!(p.is_gaussian(), "factor_gaussian needs Q(i) coefficients");
    let mut out = Vec::new();
    for (g, mult) in p.squarefree() {
        for f in factor_squarefree_gaussian(&g) {
            out.push((f, mult));
        }
    }
    out.sort_by_key(|(f, _)| (f.degree(), f.to_string()));
    out
}

fn factor_squarefree_gaussian(g: &UPoly) -> Vec<UPoly> {
    if g.degree() == Some(1) {
        return vec![g.monic()];
    }
    for s in 0i64.. {
        // G(u) = g(u - s i); its norm G * conj(G) has rational coefficients.
        let shift = FieldElement::from_gaussian(Gaussian::new(rat(0), rat(-s)));
        let big_g = g.shift(&shift);
        let norm = big_g.mul(&big_g.conj());
        let norm_q = UPoly::from_rationals(
            norm.gaussian_coeffs().into_iter().map(|c| c.re).collect(),
        );
        if norm_q.gcd(&norm_q.derivative()).degree() != Some(0) {
            continue;
        }
        let back = FieldElement::from_gaussian(Gaussian::new(rat(0), rat(s)));
        let mut factors = Vec::new();
        for (h, _) in factor_rational(&norm_q) {
            let common = big_g.gcd(&h);
            if common.degree().unwrap_or(0) > 0 {
                factors.push(common.shift(&back).monic());
            }
        }
        return factors;
    }
    unreachable!()
}

/// Roots of `p` that lie in the field of its coefficients, and the leftover
/// irreducible factors that would need a new extension.
pub struct RootSplit {
    pub roots: Vec<(FieldElement, usize)>,
    pub irreducible: Vec<(UPoly, usize)>,
}

/// Splits `p` into linear factors over its own field. Over `Q(i)` the
/// factorization is complete; over an extension only factors certified by
/// squarefree decomposition or by factoring a `Q(i)`-rational polynomial are
/// found, and anything else is reported as `UnsupportedExtension`.
pub fn split_roots(p: &UPoly) -> Result<RootSplit> {
    let mut roots = Vec::new();
    let mut irreducible = Vec::new();
    if p.is_gaussian() {
        for (f, m) in factor_gaussian(p) {
            if f.degree() == Some(1) {
                roots.push((-f.coeff(0), m));
            } else {
                irreducible.push((f, m));
            }
        }
        return Ok(RootSplit { roots, irreducible });
    }
    for (g, m) in p.squarefree() {
        match g.degree() {
            Some(1) => roots.push((-g.monic().coeff(0), m)),
            _ => {
                // Strip off roots that already live in Q(i).
                let mut rest = g.clone();
                for cand in gaussian_candidates(&g) {
                    if rest.eval(&cand).is_zero() {
                        roots.push((cand.clone(), m));
                        rest = rest.divrem(&UPoly::linear_root(&cand)).0;
                    }
                }
                match rest.degree() {
                    Some(0) | None => {}
                    Some(1) => roots.push((-rest.monic().coeff(0), m)),
                    _ => {
                        return Err(Error::UnsupportedExtension {
                            polynomial: rest.to_string(),
                        })
                    }
                }
            }
        }
    }
    Ok(RootSplit { roots, irreducible })
}

/// `Q(i)` roots of the norm-free part: roots of `gcd` of the `Q(i)`
/// coordinate polynomials of `g`.
fn gaussian_candidates(g: &UPoly) -> Vec<FieldElement> {
    let ext = match g.extension() {
        Some(e) => e,
        None => return Vec::new(),
    };
    let d = ext.degree();
    let mut common: Option<UPoly> = None;
    for k in 0..d {
        let coord = UPoly::new(
            g.coeffs()
                .iter()
                .map(|c| FieldElement::from_gaussian(c.coords().get(k).cloned().unwrap_or_default()))
                .collect(),
        );
        if coord.is_zero() {
            continue;
        }
        common = Some(match common {
            None => coord,
            Some(c) => c.gcd(&coord),
        });
    }
    match common {
        Some(c) if c.degree().unwrap_or(0) > 0 => factor_gaussian(&c)
            .into_iter()
            .filter(|(f, _)| f.degree() == Some(1))
            .map(|(f, _)| -f.coeff(0))
            .collect(),
        _ => Vec::new(),
    }
}

// ---------------------------------------------------------------------------
// Real roots over Q

fn eval_q(c: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for k in c.iter().rev() {
        acc = acc * x + k;
    }
    acc
}

fn rem_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let top = r.last().unwrap() / b.last().unwrap();
        let k = r.len() - 1 - db;
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = &r[k + j] - &top * bj;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

fn sturm_sequence(c: &[BigRational]) -> Vec<Vec<BigRational>> {
    let mut seq = vec![c.to_vec()];
    let d: Vec<BigRational> = c
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, x)| x * rat(k as i64))
        .collect();
    seq.push(d);
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            break;
        }
        let r: Vec<BigRational> = rem_q(&seq[n - 2], &seq[n - 1]).into_iter().map(|x| -x).collect();
        if r.is_empty() {
            break;
        }
        seq.push(r);
    }
    seq
}

fn sign_changes(seq: &[Vec<BigRational>], x: &BigRational) -> usize {
    let signs: Vec<i32> = seq
        .iter()
        .map(|p| {
            let v = eval_q(p, x);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// An isolating interval `(lo, hi]` of a real root of a squarefree rational polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealRoot {
    pub poly: Vec<BigRational>,
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RealRoot {
    /// Halves the isolating interval.
    pub fn refine(&mut self) {
        let mid = (&self.lo + &self.hi) / rat(2);
        let v = eval_q(&self.poly, &mid);
        if v.is_zero() {
            self.lo = mid.clone();
            self.hi = mid;
            return;
        }
        let vhi = eval_q(&self.poly, &self.hi);
        if vhi.is_zero() || (v.is_positive() == vhi.is_positive()) {
            self.hi = mid;
        } else {
            self.lo = mid;
        }
    }

    /// Sign of `q(root)` for `q` with rational coefficients, `q(root) != 0`.
    pub fn sign_of(&self, q: &[BigRational]) -> i32 {
        let mut r = self.clone();
        for _ in 0..4096 {
            let (lo, hi) = interval_eval(q, &r.lo, &r.hi);
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            if r.lo == r.hi {
                let v = eval_q(q, &r.hi);
                return if v.is_positive() {
                    1
                } else if v.is_negative() {
                    -1
                } else {
                    0
                };
            }
            r.refine();
        }
        0
    }
}

fn interval_eval(c: &[BigRational], lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
    let mut acc = (BigRational::zero(), BigRational::zero());
    for k in c.iter().rev() {
        let cands = [&acc.0 * lo, &acc.0 * hi, &acc.1 * lo, &acc.1 * hi];
        let mn = cands.iter().min().unwrap().clone();
        let mx = cands.iter().max().unwrap().clone();
        acc = (mn + k, mx + k);
    }
    acc
}

/// Isolating intervals of the real roots of a squarefree polynomial with
/// rational coefficients, in increasing order.
pub fn isolate_real_roots(p: &UPoly) -> Vec<RealRoot> {
    let c = p.rational_coeffs();
    if c.len() < 2 {
        return Vec::new();
    }
    // Cauchy bound.
    let lead = c.last().unwrap().abs();
    let bound = c[..c.len() - 1].iter().map(|x| x.abs() / &lead).max().unwrap() + rat(1);
    let seq = sturm_sequence(&c);
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        let n = sign_changes(&seq, &lo) - sign_changes(&seq, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(RealRoot {
                poly: c.clone(),
                lo,
                hi,
            });
            continue;
        }
        let mid = (&lo + &hi) / rat(2);
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

/// Number of real roots of a squarefree rational polynomial.
pub fn count_real_roots(p: &UPoly) -> usize {
    isolate_real_roots(p).len()
}
