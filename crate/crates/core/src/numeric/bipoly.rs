//! Bivariate polynomials `sum c_ij x^i y^j` over the coefficient tower.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::field::FieldElement;
use super::upoly::{factor_gaussian, split_roots, UPoly};
use crate::error::{Error, Result};

/// Order of a polynomial at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(usize),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<usize> {
        match self {
            Order::Finite(k) => Some(k),
            Order::Infinite => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), FieldElement>,
}

/// 2x2 matrix `[[a, b], [c, d]]` acting by `(x, y) -> (a x + b y, c x + d y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Linear2 {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub d: FieldElement,
}

impl Linear2 {
    pub fn new(a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement) -> Self {
        Linear2 { a, b, c, d }
    }

    pub fn det(&self) -> FieldElement {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn inverse(&self) -> Result<Linear2> {
        let det = self.det();
        let inv = det.inv().ok_or(Error::SingularMatrix)?;
        Ok(Linear2::new(
            &self.d * &inv,
            -(&self.b * &inv),
            -(&self.c * &inv),
            &self.a * &inv,
        ))
    }
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn constant(k: FieldElement) -> Self {
        BiPoly::monomial(k, 0, 0)
    }

    pub fn one() -> Self {
        BiPoly::constant(FieldElement::one())
    }

    pub fn monomial(k: FieldElement, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !k.is_zero() {
            terms.insert((i, j), k);
        }
        BiPoly { terms }
    }

    pub fn x() -> Self {
        BiPoly::monomial(FieldElement::one(), 1, 0)
    }

    pub fn y() -> Self {
        BiPoly::monomial(FieldElement::one(), 0, 1)
    }

    /// From `(coefficient, i, j)` triples with integer coefficients.
    pub fn from_int_terms(terms: &[(i64, u32, u32)]) -> Self {
        let mut p = BiPoly::zero();
        for &(c, i, j) in terms {
            p.add_term(i, j, &FieldElement::from_int(c));
        }
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, k: &FieldElement) {
        if k.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_default();
        *e = &*e + k;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &FieldElement)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> FieldElement {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `min { i + j : c_ij != 0 }`.
    pub fn order(&self) -> Order {
        self.terms
            .keys()
            .map(|(i, j)| (i + j) as usize)
            .min()
            .map_or(Order::Infinite, Order::Finite)
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.terms.keys().map(|(i, j)| (i + j) as usize).max()
    }

    pub fn degree_y(&self) -> Option<usize> {
        self.terms.keys().map(|&(_, j)| j as usize).max()
    }

    pub fn degree_x(&self) -> Option<usize> {
        self.terms.keys().map(|&(i, _)| i as usize).max()
    }

    pub fn homogeneous_part(&self, d: usize) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .filter(|((i, j), _)| (i + j) as usize == d)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// Homogeneous part of degree `d` dehomogenized at `x = 1`, as a polynomial in `u = y/x`.
    pub fn dehomogenized_part(&self, d: usize) -> UPoly {
        let mut c = vec![FieldElement::zero(); d + 1];
        for ((i, j), v) in &self.terms {
            if (i + j) as usize == d {
                c[*j as usize] = v.clone();
            }
        }
        UPoly::new(c)
    }

    pub fn value_at_origin(&self) -> FieldElement {
        self.coeff(0, 0)
    }

    pub fn scale(&self, k: &FieldElement) -> BiPoly {
        if k.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            terms: self.terms.iter().map(|(e, v)| (*e, v * k)).collect(),
        }
    }

    pub fn add(&self, o: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for ((i, j), v) in &o.terms {
            out.add_term(*i, *j, v);
        }
        out
    }

    pub fn sub(&self, o: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for ((i, j), v) in &o.terms {
            out.add_term(*i, *j, &-v);
        }
        out
    }

    pub fn neg(&self) -> BiPoly {
        self.scale(&-FieldElement::one())
    }

    pub fn mul(&self, o: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for ((i, j), a) in &self.terms {
            for ((k, l), b) in &o.terms {
                out.add_term(i + k, j + l, &(a * b));
            }
        }
        out
    }

    pub fn pow(&self, n: usize) -> BiPoly {
        let mut out = BiPoly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn partial_x(&self) -> BiPoly {
        let mut out = BiPoly::zero();
        for ((i, j), v) in &self.terms {
            if *i > 0 {
                out.add_term(i - 1, *j, &(v * &FieldElement::from_int(*i as i64)));
            }
        }
        out
    }

    pub fn partial_y(&self) -> BiPoly {
        let mut out = BiPoly::zero();
        for ((i, j), v) in &self.terms {
            if *j > 0 {
                out.add_term(*i, j - 1, &(v * &FieldElement::from_int(*j as i64)));
            }
        }
        out
    }

    /// Largest `k` with `x^k` dividing `self`.
    pub fn x_adic_order(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, _)| i).min()
    }

    /// Exact division by `x^m`; panics when `x^m` does not divide.
    pub fn div_x_pow(&self, m: u32) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), v)| {
                    assert!(i >= m, "x^{m} does not divide the polynomial");
                    ((i - m, j), v.clone())
                })
                .collect(),
        }
    }

    pub fn mul_x_pow(&self, m: u32) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(&(i, j), v)| ((i + m, j), v.clone())).collect(),
        }
    }

    /// `self(X(x, y), Y(x, y))`.
    pub fn compose(&self, big_x: &BiPoly, big_y: &BiPoly) -> BiPoly {
        let dx = self.degree_x().unwrap_or(0);
        let dy = self.degree_y().unwrap_or(0);
        let mut xp = vec![BiPoly::one()];
        for k in 0..dx {
            xp.push(xp[k].mul(big_x));
        }
        let mut yp = vec![BiPoly::one()];
        for k in 0..dy {
            yp.push(yp[k].mul(big_y));
        }
        let mut out = BiPoly::zero();
        for ((i, j), v) in &self.terms {
            out = out.add(&xp[*i as usize].mul(&yp[*j as usize]).scale(v));
        }
        out
    }

    /// Composition with an invertible linear map.
    pub fn linear_change(&self, m: &Linear2) -> Result<BiPoly> {
        if m.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        let lx = BiPoly::x().scale(&m.a).add(&BiPoly::y().scale(&m.b));
        let ly = BiPoly::x().scale(&m.c).add(&BiPoly::y().scale(&m.d));
        Ok(self.compose(&lx, &ly))
    }

    /// `self(x, y + c)` style translation by `(a, b)`.
    pub fn translate(&self, a: &FieldElement, b: &FieldElement) -> BiPoly {
        let lx = BiPoly::x().add(&BiPoly::constant(a.clone()));
        let ly = BiPoly::y().add(&BiPoly::constant(b.clone()));
        self.compose(&lx, &ly)
    }

    pub fn swap_xy(&self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(&(i, j), v)| ((j, i), v.clone())).collect(),
        }
    }

    pub fn conj(&self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(e, v)| (*e, v.conj())).collect(),
        }
    }

    pub fn eval(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let mut acc = FieldElement::zero();
        for ((i, j), v) in &self.terms {
            acc += &(&(v * &x.pow(*i)) * &y.pow(*j));
        }
        acc
    }

    /// `self(0, y)` as a univariate polynomial in `y`.
    pub fn restrict_x0(&self) -> UPoly {
        self.swap_xy().restrict_y0()
    }

    /// `self(x, 0)` as a univariate polynomial in `x`.
    pub fn restrict_y0(&self) -> UPoly {
        let d = self.degree_x().unwrap_or(0);
        let mut c = vec![FieldElement::zero(); d + 1];
        for ((i, j), v) in &self.terms {
            if *j == 0 {
                c[*i as usize] = v.clone();
            }
        }
        UPoly::new(c)
    }

    /// Coefficients in `y`, each a polynomial in `x`.
    pub fn y_coeffs(&self) -> Vec<UPoly> {
        let dy = match self.degree_y() {
            Some(d) => d,
            None => return Vec::new(),
        };
        let dx = self.degree_x().unwrap_or(0);
        let mut rows = vec![vec![FieldElement::zero(); dx + 1]; dy + 1];
        for ((i, j), v) in &self.terms {
            rows[*j as usize][*i as usize] = v.clone();
        }
        rows.into_iter().map(UPoly::new).collect()
    }

    pub fn from_y_coeffs(c: &[UPoly]) -> BiPoly {
        let mut out = BiPoly::zero();
        for (j, p) in c.iter().enumerate() {
            for (i, v) in p.coeffs().iter().enumerate() {
                out.add_term(i as u32, j as u32, v);
            }
        }
        out
    }

    pub fn from_x_upoly(p: &UPoly) -> BiPoly {
        BiPoly::from_y_coeffs(std::slice::from_ref(p))
    }

    pub fn from_y_upoly(p: &UPoly) -> BiPoly {
        BiPoly::from_x_upoly(p).swap_xy()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|(i, j)| i + j);
        match degs.next() {
            Some(d) => degs.all(|e| e == d),
            None => true,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i == 0 && j == 0)
    }

    /// Leading coefficient of the lexicographic order (`y` first, then `x`).
    fn lex_lead(&self) -> Option<((u32, u32), FieldElement)> {
        self.terms
            .iter()
            .max_by_key(|((i, j), _)| (*j, *i))
            .map(|(e, v)| (*e, v.clone()))
    }

    /// Quotient `self / d` when the division is exact.
    pub fn div_exact(&self, d: &BiPoly) -> Option<BiPoly> {
        let ((di, dj), dc) = d.lex_lead()?;
        let inv = dc.inv()?;
        let mut r = self.clone();
        let mut q = BiPoly::zero();
        while let Some(((ri, rj), rc)) = r.lex_lead() {
            if ri < di || rj < dj {
                return None;
            }
            let t = BiPoly::monomial(&rc * &inv, ri - di, rj - dj);
            r = r.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    pub fn divides(&self, o: &BiPoly) -> bool {
        o.div_exact(self).is_some()
    }

    /// Normalizes so the lexicographically leading coefficient is 1.
    pub fn normalized(&self) -> BiPoly {
        match self.lex_lead() {
            Some((_, c)) => self.scale(&c.inv().unwrap()),
            None => BiPoly::zero(),
        }
    }

    /// Content with respect to `y`, as a monic polynomial in `x`.
    pub fn content_y(&self) -> UPoly {
        content_of(&self.y_coeffs())
    }

    /// Greatest common divisor, normalized.
    pub fn gcd(&self, o: &BiPoly) -> BiPoly {
        if self.is_zero() {
            return o.normalized();
        }
        if o.is_zero() {
            return self.normalized();
        }
        let ca = self.content_y();
        let cb = o.content_y();
        let cont = ca.gcd(&cb);
        let mut a = primitive_part(&self.y_coeffs());
        let mut b = primitive_part(&o.y_coeffs());
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while b.len() > 1 {
            let r = pseudo_rem(&a, &b);
            a = b;
            b = primitive_part(&r);
            if b.is_empty() {
                break;
            }
        }
        let g = if b.is_empty() { a } else { vec![UPoly::constant(FieldElement::one())] };
        BiPoly::from_y_coeffs(&g).mul(&BiPoly::from_x_upoly(&cont)).normalized()
    }

    /// Squarefree decomposition refined by every splitting the tower certifies
    /// cheaply: monomial and content factors, homogeneous factors through the
    /// univariate factorization, and conjugate-pair gcds. The factors are
    /// "tower-irreducible" only in that sense.
    pub fn squarefree_factor(&self) -> Vec<(BiPoly, usize)> {
        assert!(!self.is_zero(), "squarefree_factor of zero");
        let mut out: Vec<(BiPoly, usize)> = Vec::new();
        let cont = self.content_y();
        for (f, m) in cont.squarefree() {
            for g in split_univariate(&f) {
                push_factor(&mut out, BiPoly::from_x_upoly(&g), m);
            }
        }
        let pp = BiPoly::from_y_coeffs(&primitive_part(&self.y_coeffs()));
        if pp.degree_y().unwrap_or(0) > 0 {
            for (f, m) in yun_y(&pp) {
                for g in split_factor(&f) {
                    push_factor(&mut out, g, m);
                }
            }
        }
        out.sort_by_key(|a| a.0.to_string());
        out
    }

    /// Product of all factors with multiplicity one.
    pub fn squarefree_part(&self) -> BiPoly {
        self.squarefree_factor()
            .into_iter()
            .fold(BiPoly::one(), |acc, (f, _)| acc.mul(&f))
    }

    /// Resultant with respect to `y`, a polynomial in `x`.
    pub fn resultant_y(&self, o: &BiPoly) -> Result<UPoly> {
        for p in [self, o] {
            if p.is_zero() {
                return Err(Error::NotYRegular);
            }
            let c = p.y_coeffs();
            if c.len() > 1 && c.last().unwrap().coeff(0).is_zero() {
                return Err(Error::NotYRegular);
            }
        }
        Ok(sylvester_resultant(&self.y_coeffs(), &o.y_coeffs()))
    }
}

fn push_factor(out: &mut Vec<(BiPoly, usize)>, f: BiPoly, m: usize) {
    if f.is_constant() {
        return;
    }
    out.push((f.normalized(), m));
}

fn split_univariate(f: &UPoly) -> Vec<UPoly> {
    if f.is_gaussian() {
        return factor_gaussian(f).into_iter().map(|(g, _)| g).collect();
    }
    match split_roots(f) {
        Ok(s) if s.irreducible.is_empty() => {
            let mut out: Vec<UPoly> = s.roots.iter().map(|(r, _)| UPoly::linear_root(r)).collect();
            let prod = out.iter().fold(UPoly::constant(FieldElement::one()), |a, b| a.mul(b));
            let rest = f.divrem(&prod).0;
            if rest.degree().unwrap_or(0) > 0 {
                out.push(rest);
            }
            out
        }
        _ => vec![f.clone()],
    }
}

fn split_factor(f: &BiPoly) -> Vec<BiPoly> {
    let mut parts = vec![f.clone()];
    if f.is_homogeneous() {
        if let Some(d) = f.total_degree() {
            let h = f.dehomogenized_part(d);
            let hd = h.degree().unwrap_or(0);
            let mut out = Vec::new();
            for g in split_univariate(&h) {
                let e = g.degree().unwrap_or(0);
                let mut p = BiPoly::zero();
                for (k, v) in g.coeffs().iter().enumerate() {
                    p.add_term((e - k) as u32, k as u32, v);
                }
                out.push(p);
            }
            if d > hd {
                for _ in 0..(d - hd) {
                    out.push(BiPoly::x());
                }
            }
            parts = out;
        }
    }
    // Split off conjugation-fixed pieces: gcd(f, conj f).
    let mut out = Vec::new();
    for p in parts {
        let c = p.conj();
        if c.normalized() == p.normalized() {
            out.push(p);
            continue;
        }
        let g = p.gcd(&c);
        if !g.is_constant() && g.total_degree() < p.total_degree() {
            let q = p.div_exact(&g).expect("gcd divides");
            out.push(g);
            out.push(q);
        } else {
            out.push(p);
        }
    }
    out
}

/// Yun's algorithm in `y` for a primitive polynomial (characteristic zero).
fn yun_y(f: &BiPoly) -> Vec<(BiPoly, usize)> {
    let mut out = Vec::new();
    let df = f.partial_y();
    let a = f.gcd(&df);
    let mut b = f.div_exact(&a).expect("gcd divides");
    let c = df.div_exact(&a).expect("gcd divides derivative");
    let mut d = c.sub(&b.partial_y());
    let mut k = 1;
    loop {
        let g = b.gcd(&d);
        if !g.is_constant() {
            out.push((g.clone(), k));
        }
        b = b.div_exact(&g).expect("gcd divides");
        if b.is_constant() {
            break;
        }
        let c = d.div_exact(&g).expect("gcd divides");
        d = c.sub(&b.partial_y());
        k += 1;
    }
    out
}

fn trim(c: &mut Vec<UPoly>) {
    while c.last().is_some_and(UPoly::is_zero) {
        c.pop();
    }
}

/// Monic gcd of the nonzero entries, smallest degrees first so that a
/// constant gcd is found before the large entries are touched.
fn content_of(c: &[UPoly]) -> UPoly {
    let mut c: Vec<&UPoly> = c.iter().filter(|p| !p.is_zero()).collect();
    c.sort_by_key(|p| p.degree());
    let mut acc = UPoly::zero();
    for p in c {
        acc = acc.gcd(p);
        if acc.degree() == Some(0) {
            break;
        }
    }
    acc
}

fn primitive_part(c: &[UPoly]) -> Vec<UPoly> {
    let mut c = c.to_vec();
    trim(&mut c);
    if c.is_empty() {
        return c;
    }
    let g = content_of(&c);
    let out: Vec<UPoly> = if g.degree() == Some(0) {
        c
    } else {
        c.iter().map(|p| p.divrem(&g).0).collect()
    };
    // Make the leading coefficient monic in x.
    let lc = out.last().unwrap().lead();
    let inv = lc.inv().unwrap();
    out.iter().map(|p| p.scale(&inv)).collect()
}

/// Pseudo-remainder of polynomials in `y` with coefficients in `F[x]`.
fn pseudo_rem(a: &[UPoly], b: &[UPoly]) -> Vec<UPoly> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = b[db].clone();
    while r.len() > db {
        let k = r.len() - 1 - db;
        let lr = r.last().unwrap().clone();
        let mut next: Vec<UPoly> = r.iter().map(|p| p.mul(&lb)).collect();
        for (j, bj) in b.iter().enumerate() {
            next[k + j] = next[k + j].sub(&bj.mul(&lr));
        }
        next.pop();
        trim(&mut next);
        r = next;
    }
    r
}

/// Determinant of the Sylvester matrix by fraction-free elimination over `F[x]`.
fn sylvester_resultant(p: &[UPoly], q: &[UPoly]) -> UPoly {
    let m = p.len() - 1;
    let n = q.len() - 1;
    if m == 0 {
        return p[0].pow(n);
    }
    if n == 0 {
        return q[0].pow(m);
    }
    let size = m + n;
    let mut mat = vec![vec![UPoly::zero(); size]; size];
    for r in 0..n {
        for (k, c) in p.iter().rev().enumerate() {
            mat[r][r + k] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in q.iter().rev().enumerate() {
            mat[n + r][r + k] = c.clone();
        }
    }
    bareiss_det(mat)
}

pub(crate) fn bareiss_det(mut mat: Vec<Vec<UPoly>>) -> UPoly {
    let size = mat.len();
    let mut sign = false;
    let mut prev = UPoly::constant(FieldElement::one());
    for k in 0..size {
        if mat[k][k].is_zero() {
            match (k + 1..size).find(|&r| !mat[r][k].is_zero()) {
                Some(r) => {
                    mat.swap(k, r);
                    sign = !sign;
                }
                None => return UPoly::zero(),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = mat[i][j].mul(&mat[k][k]).sub(&mat[i][k].mul(&mat[k][j]));
                let (q, r) = num.divrem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                mat[i][j] = q;
            }
            mat[i][k] = UPoly::zero();
        }
        prev = mat[k][k].clone();
    }
    let det = mat[size - 1][size - 1].clone();
    if sign {
        det.scale(&-FieldElement::one())
    } else {
        det
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((i, j), v) in self.terms.iter().rev() {
            let mono = match (i, j) {
                (0, 0) => String::new(),
                _ => {
                    let mut parts = Vec::new();
                    match i {
                        0 => {}
                        1 => parts.push("x".to_string()),
                        _ => parts.push(format!("x^{i}")),
                    }
                    match j {
                        0 => {}
                        1 => parts.push("y".to_string()),
                        _ => parts.push(format!("y^{j}")),
                    }
                    parts.join("*")
                }
            };
            let coef = format!("{v}");
            let (neg, body) = match coef.strip_prefix('-') {
                Some(rest) if !rest.contains(' ') => (true, rest.to_string()),
                _ => (false, coef),
            };
            let term = if mono.is_empty() {
                body
            } else if body == "1" {
                mono
            } else {
                format!("{body}*{mono}")
            };
            if first {
                if neg {
                    write!(f, "-{term}")?;
                } else {
                    write!(f, "{term}")?;
                }
                first = false;
            } else if neg {
                write!(f, " - {term}")?;
            } else {
                write!(f, " + {term}")?;
            }
        }
        Ok(())
    }
}
