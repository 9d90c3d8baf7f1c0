use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::FoliationGerm;
use crate::error::{Error, Result};
use crate::numeric::{BiPoly, FieldElement, Linear2, UPoly};

const MAX_SHEARS: usize = 8;

/// Shear parameters tried in order.
fn shear_sequence() -> impl Iterator<Item = i64> {
    (1..).flat_map(|k| [k, -k]).take(MAX_SHEARS)
}

/// Local intersection multiplicity `(P, Q)_0`.
///
/// After a shear `(x, y) -> (x + s y, y)` both components have constant
/// leading coefficient in `y` and the only common zero on `{x = 0}` is the
/// origin; then the order at `x = 0` of `Res_y(P, Q)` is the local
/// multiplicity at the origin.
pub fn milnor_number(f: &FoliationGerm) -> Result<usize> {
    if !f.is_singular() {
        return Ok(0);
    }
    for s in shear_sequence() {
        let m = Linear2::new(
            FieldElement::one(),
            FieldElement::from_int(s),
            FieldElement::zero(),
            FieldElement::one(),
        );
        let p = f.p().linear_change(&m)?;
        let q = f.q().linear_change(&m)?;
        if !has_constant_y_lead(&p) || !has_constant_y_lead(&q) {
            continue;
        }
        let g = p.restrict_x0().gcd(&q.restrict_x0());
        if !is_pure_power(&g) {
            continue;
        }
        let r = match p.resultant_y(&q) {
            Ok(r) => r,
            Err(Error::NotYRegular) => continue,
            Err(e) => return Err(e),
        };
        return r.ord().ok_or_else(|| Error::NonIsolated {
            gcd: p.gcd(&q).to_string(),
        });
    }
    Err(Error::ShearExhausted { attempts: MAX_SHEARS })
}

fn has_constant_y_lead(p: &BiPoly) -> bool {
    match (p.degree_y(), p.total_degree()) {
        (Some(dy), Some(d)) => dy == d,
        _ => false,
    }
}

/// Monic `y^k` (including the constant `1`).
fn is_pure_power(g: &UPoly) -> bool {
    match g.degree() {
        None => false,
        Some(d) => g.ord() == Some(d),
    }
}

/// Dimension of `F[x, y] / (P, Q, m^N)` for increasing `N`; once every
/// degree-`N` monomial lies in the ideal modulo `m^(N+1)`, Nakayama gives
/// `m^N` inside the local ideal and the dimension is the Milnor number.
pub fn milnor_oracle(f: &FoliationGerm, bound: usize) -> Result<usize> {
    assert!(bound >= 1);
    let mut prev: Option<usize> = None;
    for n in 1..=bound {
        let d = quotient_dimension(f.p(), f.q(), n);
        if prev == Some(d) {
            return Ok(d);
        }
        prev = Some(d);
    }
    Err(Error::BoundTooSmall { bound })
}

type Row = BTreeMap<(u32, u32), FieldElement>;

/// Graded order used for pivots: lower degree first.
fn key(e: (u32, u32)) -> (u32, u32) {
    (e.0 + e.1, e.1)
}

fn quotient_dimension(p: &BiPoly, q: &BiPoly, n: usize) -> usize {
    let n = n as u32;
    let mut pivots: HashMap<(u32, u32), BTreeMap<(u32, u32), FieldElement>> = HashMap::new();
    for g in [p, q] {
        for deg in 0..n {
            for j in 0..=deg {
                let i = deg - j;
                let mut row: BTreeMap<(u32, u32), FieldElement> = BTreeMap::new();
                for ((a, b), c) in g.terms() {
                    if a + b + deg < n {
                        row.insert(key((a + i, b + j)), c.clone());
                    }
                }
                insert_row(&mut pivots, row);
            }
        }
    }
    let total = (n * (n + 1) / 2) as usize;
    total - pivots.len()
}

fn insert_row(pivots: &mut HashMap<(u32, u32), Row>, mut row: Row) {
    loop {
        let (k, c) = match row.iter().next() {
            Some((k, c)) => (*k, c.clone()),
            None => return,
        };
        match pivots.get(&k) {
            Some(prow) => {
                for (pk, pc) in prow {
                    let v = row.remove(pk).unwrap_or_else(FieldElement::zero) - &c * pc;
                    if !v.is_zero() {
                        row.insert(*pk, v);
                    }
                }
            }
            None => {
                let inv = c.inv().expect("nonzero pivot");
                let normalized = row.into_iter().map(|(k, v)| (k, &v * &inv)).collect();
                pivots.insert(k, normalized);
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn germ(p: &[(i64, u32, u32)], q: &[(i64, u32, u32)]) -> FoliationGerm {
        FoliationGerm::from_int_terms(p, q).unwrap()
    }

    #[test]
    fn linear_and_cusp() {
        let center = germ(&[(1, 0, 1)], &[(-1, 1, 0)]);
        assert_eq!(milnor_number(&center), Ok(1));
        assert_eq!(milnor_oracle(&center, 6), Ok(1));
        let cusp = germ(&[(2, 0, 1)], &[(3, 2, 0)]);
        assert_eq!(milnor_number(&cusp), Ok(2));
        assert_eq!(milnor_oracle(&cusp, 4), Ok(2));
    }

    #[test]
    fn example_field() {
        let ex = germ(&[(1, 0, 2), (1, 4, 0)], &[(-1, 1, 1), (1, 5, 0), (1, 1, 2)]);
        assert_eq!(milnor_number(&ex), Ok(6));
        assert_eq!(milnor_oracle(&ex, 12), Ok(6));
    }

    #[test]
    fn maximal_ideal_and_regular_point() {
        assert_eq!(milnor_oracle(&germ(&[(1, 1, 0)], &[(1, 0, 1)]), 3), Ok(1));
        let regular = germ(&[(1, 0, 0)], &[(1, 1, 0)]);
        assert_eq!(milnor_number(&regular), Ok(0));
        assert_eq!(milnor_oracle(&regular, 3), Ok(0));
    }

    #[test]
    fn oracle_reports_small_bound() {
        let sn = germ(&[(1, 5, 0)], &[(-1, 0, 1)]);
        assert_eq!(milnor_oracle(&sn, 3), Err(Error::BoundTooSmall { bound: 3 }));
        assert_eq!(milnor_oracle(&sn, 8), Ok(5));
    }

    #[test]
    fn common_zero_away_from_origin() {
        // P = y, Q = x (x - 1): the second zero (1, 0) does not count.
        let g = germ(&[(1, 0, 1)], &[(1, 2, 0), (-1, 1, 0)]);
        assert_eq!(milnor_number(&g), Ok(1));
    }
}
