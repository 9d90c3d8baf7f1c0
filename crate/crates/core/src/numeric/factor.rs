//! Irreducible factorization of bivariate polynomials over `Q(i)`: shear to
//! make the polynomial monic in `y`, specialize `x`, factor the univariate
//! image, Hensel-lift the factors in `x` and recombine subsets.

use num_traits::{One, Zero};

use super::{factor_gaussian, BiPoly, FieldElement, UPoly};
use crate::error::{Error, Result};

/// Shears and specialization points tried before giving up.
const ATTEMPTS: i64 = 24;

fn small_ints() -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=ATTEMPTS).flat_map(|k| [k, -k]))
}

/// Irreducible factors over `Q(i)` with multiplicities, each normalized.
pub fn factor_bivariate(g: &BiPoly) -> Result<Vec<(BiPoly, usize)>> {
    assert!(!g.is_zero(), "factor_bivariate of zero");
    if let Some((_, v)) = g.terms().find(|(_, v)| v.as_gaussian().is_none()) {
        return Err(Error::UnsupportedExtension {
            polynomial: format!("coefficient {v}"),
        });
    }
    let mut out: Vec<(BiPoly, usize)> = Vec::new();
    for (h, e) in g.squarefree_factor() {
        for f in irreducible_factors(&h)? {
            match out.iter_mut().find(|(o, _)| *o == f) {
                Some(slot) => slot.1 += e,
                None => out.push((f, e)),
            }
        }
    }
    out.sort_by_key(|a| a.0.to_string());
    Ok(out)
}

/// Factors a squarefree polynomial.
fn irreducible_factors(h: &BiPoly) -> Result<Vec<BiPoly>> {
    let dx = h.degree_x().unwrap_or(0);
    let dy = h.degree_y().unwrap_or(0);
    if dx == 0 && dy == 0 {
        return Ok(Vec::new());
    }
    if dy == 0 {
        let u = h.swap_xy().restrict_x0();
        return Ok(factor_gaussian(&u)
            .into_iter()
            .map(|(f, _)| BiPoly::from_x_upoly(&f).normalized())
            .collect());
    }
    if dx == 0 {
        let u = h.restrict_x0();
        return Ok(factor_gaussian(&u)
            .into_iter()
            .map(|(f, _)| BiPoly::from_y_upoly(&f).normalized())
            .collect());
    }
    let d = h.total_degree().expect("nonzero");
    let top = h.homogeneous_part(d);
    let s = small_ints()
        .map(FieldElement::from_int)
        .find(|s| !top.eval(s, &FieldElement::one()).is_zero())
        .ok_or(Error::ShearExhausted { attempts: 2 * ATTEMPTS as usize + 1 })?;
    let shear = |k: &FieldElement| {
        (
            BiPoly::x().add(&BiPoly::y().scale(k)),
            BiPoly::y(),
        )
    };
    let (sx, sy) = shear(&s);
    let sheared = h.compose(&sx, &sy);
    let lead = sheared.coeff(0, d as u32);
    let monic = sheared.scale(&lead.inv().expect("nonzero leading coefficient"));
    let factors = monic_factors(&monic)?;
    let (ux, uy) = shear(&-&s);
    Ok(factors.into_iter().map(|f| f.compose(&ux, &uy).normalized()).collect())
}

/// Factors a squarefree polynomial monic in `y` with `deg_y` equal to its
/// total degree.
fn monic_factors(h: &BiPoly) -> Result<Vec<BiPoly>> {
    let dy = h.degree_y().unwrap();
    for x0 in small_ints() {
        let x0 = FieldElement::from_int(x0);
        let shifted = h.translate(&x0, &FieldElement::zero());
        let image = shifted.restrict_x0();
        if !(image.gcd(&image.derivative()).degree() == Some(0)) {
            continue;
        }
        debug_assert_eq!(image.degree(), Some(dy));
        let locals: Vec<UPoly> = factor_gaussian(&image).into_iter().map(|(f, _)| f.monic()).collect();
        if locals.len() == 1 {
            return Ok(vec![h.clone()]);
        }
        let prec = shifted.degree_x().unwrap_or(0) + 1;
        let lifted = hensel_lift(&shifted, &locals, prec);
        let found = recombine(&shifted, lifted, prec);
        let back = (
            BiPoly::x().sub(&BiPoly::constant(x0.clone())),
            BiPoly::y(),
        );
        return Ok(found.into_iter().map(|f| f.compose(&back.0, &back.1)).collect());
    }
    Err(Error::ShearExhausted { attempts: 2 * ATTEMPTS as usize + 1 })
}

/// Series in `x` with polynomial coefficients in `y`: `c[k]` multiplies `x^k`.
type YSeries = Vec<UPoly>;

fn to_series(h: &BiPoly, prec: usize) -> YSeries {
    let mut c = vec![UPoly::zero(); prec];
    for ((i, j), v) in h.terms() {
        let i = *i as usize;
        if i < prec {
            c[i] = c[i].add(&UPoly::monomial(v.clone(), *j as usize));
        }
    }
    c
}

fn from_series(c: &YSeries) -> BiPoly {
    let mut out = BiPoly::zero();
    for (i, p) in c.iter().enumerate() {
        for (j, v) in p.coeffs().iter().enumerate() {
            if !v.is_zero() {
                out.add_term(i as u32, j as u32, v);
            }
        }
    }
    out
}

fn series_mul(a: &YSeries, b: &YSeries, prec: usize) -> YSeries {
    let mut c = vec![UPoly::zero(); prec];
    for (i, p) in a.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        for (j, q) in b.iter().enumerate() {
            if i + j < prec {
                c[i + j] = c[i + j].add(&p.mul(q));
            }
        }
    }
    c
}

/// `(g, s, t)` with `s a + t b = g`.
fn xgcd(a: &UPoly, b: &UPoly) -> (UPoly, UPoly, UPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (UPoly::constant(FieldElement::one()), UPoly::zero());
    let (mut t0, mut t1) = (UPoly::zero(), UPoly::constant(FieldElement::one()));
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        r0 = std::mem::replace(&mut r1, r);
        let s = s0.sub(&q.mul(&s1));
        s0 = std::mem::replace(&mut s1, s);
        let t = t0.sub(&q.mul(&t1));
        t0 = std::mem::replace(&mut t1, t);
    }
    (r0, s0, t0)
}

/// Lifts `f = a0 b0 (mod x)` with `a0`, `b0` monic and coprime to
/// `f = A B (mod x^prec)`.
fn lift_pair(f: &YSeries, a0: &UPoly, b0: &UPoly, prec: usize) -> (YSeries, YSeries) {
    let (g, _, t) = xgcd(a0, b0);
    let ginv = g.lead().inv().expect("coprime factors");
    debug_assert_eq!(g.degree(), Some(0));
    let t = t.scale(&ginv);
    let mut a = vec![UPoly::zero(); prec];
    let mut b = vec![UPoly::zero(); prec];
    a[0] = a0.clone();
    b[0] = b0.clone();
    for k in 1..prec {
        let ab = series_mul(&a, &b, k + 1);
        let e = f[k].sub(&ab[k]);
        if e.is_zero() {
            continue;
        }
        // Solve da b0 + db a0 = e with deg da < deg a0.
        let da = t.mul(&e).divrem(a0).1;
        let db = e.sub(&da.mul(b0)).divrem(a0).0;
        a[k] = da;
        b[k] = db;
    }
    (a, b)
}

fn hensel_lift(h: &BiPoly, locals: &[UPoly], prec: usize) -> Vec<YSeries> {
    let mut rest = to_series(h, prec);
    let mut out = Vec::new();
    for (k, u) in locals.iter().enumerate() {
        if k + 1 == locals.len() {
            out.push(rest.clone());
            break;
        }
        let others = locals[k + 1..]
            .iter()
            .fold(UPoly::constant(FieldElement::one()), |acc, v| acc.mul(v));
        let (a, b) = lift_pair(&rest, u, &others, prec);
        out.push(a);
        rest = b;
    }
    out
}

/// Products of subsets of lifted factors that divide `h` exactly.
fn recombine(h: &BiPoly, lifted: Vec<YSeries>, prec: usize) -> Vec<BiPoly> {
    let mut pool: Vec<YSeries> = lifted;
    let mut remaining = h.clone();
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= pool.len() {
        let mut hit = None;
        for subset in subsets(pool.len(), size) {
            let mut prod = vec![UPoly::constant(FieldElement::one())];
            prod.resize(prec, UPoly::zero());
            for &k in &subset {
                prod = series_mul(&prod, &pool[k], prec);
            }
            let cand = from_series(&prod);
            if let Some(q) = remaining.div_exact(&cand) {
                hit = Some((subset, cand, q));
                break;
            }
        }
        match hit {
            Some((subset, cand, q)) => {
                found.push(cand);
                remaining = q;
                for k in subset.into_iter().rev() {
                    pool.remove(k);
                }
            }
            None => size += 1,
        }
    }
    if !remaining.is_constant() {
        found.push(remaining);
    }
    found
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Whether a factor is fixed by conjugation up to a constant.
pub fn is_conjugation_fixed(f: &BiPoly) -> bool {
    f.normalized() == f.conj().normalized()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(t: &[(i64, u32, u32)]) -> BiPoly {
        BiPoly::from_int_terms(t)
    }

    fn product(fs: &[(BiPoly, usize)]) -> BiPoly {
        fs.iter().fold(BiPoly::one(), |acc, (f, e)| acc.mul(&f.pow(*e)))
    }

    #[test]
    fn conjugate_pair_over_gaussians() {
        // y^2 + x^4 = (y - i x^2)(y + i x^2).
        let g = p(&[(1, 0, 2), (1, 4, 0)]);
        let f = factor_bivariate(&g).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|(h, _)| !is_conjugation_fixed(h)));
        assert_eq!(product(&f).normalized(), g.normalized());
    }

    #[test]
    fn irreducible_cusp_and_lines() {
        let cusp = p(&[(1, 0, 2), (-1, 3, 0)]);
        assert_eq!(factor_bivariate(&cusp).unwrap().len(), 1);
        // (y - x)(y + x)(y - x - x^2)^2.
        let a = p(&[(1, 0, 1), (-1, 1, 0)]);
        let b = p(&[(1, 0, 1), (1, 1, 0)]);
        let c = p(&[(1, 0, 1), (-1, 1, 0), (-1, 2, 0)]);
        let g = a.mul(&b).mul(&c.pow(2));
        let f = factor_bivariate(&g).unwrap();
        assert_eq!(f.len(), 3);
        assert!(f.iter().any(|(h, e)| *e == 2 && *h == c.normalized()));
        assert_eq!(product(&f).normalized(), g.normalized());
    }

    #[test]
    fn true_factor_needs_recombination() {
        // The circle x^2 + y^2 - 1 restricts to (y - 1)(y + 1) at x = 0 and
        // must be recovered from two lifted factors.
        let circle = p(&[(1, 2, 0), (1, 0, 2), (-1, 0, 0)]);
        let q = p(&[(1, 0, 2), (-2, 1, 0), (1, 3, 0)]);
        let g = circle.mul(&q);
        let f = factor_bivariate(&g).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(product(&f).normalized(), g.normalized());
    }

    #[test]
    fn pure_powers() {
        let g = p(&[(1, 3, 0)]).mul(&p(&[(1, 0, 2), (1, 0, 0)]));
        let f = factor_bivariate(&g).unwrap();
        // x^3 and y^2 + 1 = (y - i)(y + i).
        assert_eq!(f.len(), 3);
        assert!(f.iter().any(|(h, e)| *e == 3 && *h == BiPoly::x()));
    }
}
