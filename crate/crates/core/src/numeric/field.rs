//! Scalars of the coefficient tower `Q`, `Q(i)` and `Q(i)[a]/(m)`.
//!
//! An element stores its coordinates on the power basis `1, a, .., a^(d-1)`
//! together with the extension it belongs to. Elements of `Q(i)` carry no
//! extension and combine freely with elements of any single extension.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gaussian::Gaussian;

/// `Q(i)[a]/(m)` for a monic `m` irreducible over `Q(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Extension {
    /// Coefficients of `m`, lowest degree first; the last one is 1.
    modulus: Vec<Gaussian>,
}

impl Extension {
    pub fn new(modulus: Vec<Gaussian>) -> Arc<Self> {
        assert!(modulus.len() >= 2, "extension modulus must have degree >= 1");
        let lead = modulus.last().unwrap().inv().expect("nonzero leading coefficient");
        Arc::new(Extension {
            modulus: modulus.iter().map(|c| c * &lead).collect(),
        })
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[Gaussian] {
        &self.modulus
    }

    /// Whether `m` has rational coefficients, i.e. conjugation fixes the extension.
    pub fn is_real(&self) -> bool {
        self.modulus.iter().all(Gaussian::is_real)
    }

    pub fn conj(&self) -> Arc<Self> {
        Arc::new(Extension {
            modulus: self.modulus.iter().map(Gaussian::conj).collect(),
        })
    }

    pub fn modulus_string(&self) -> String {
        let mut terms = Vec::new();
        for (k, c) in self.modulus.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{k}"),
            };
            if mono.is_empty() {
                terms.push(format!("{c}"));
            } else if c.is_one() {
                terms.push(mono);
            } else {
                terms.push(format!("{c}*{mono}"));
            }
        }
        terms.join(" + ")
    }

    fn reduce(&self, mut c: Vec<Gaussian>) -> Vec<Gaussian> {
        let d = self.degree();
        while c.len() > d {
            let top = c.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let base = c.len() - d;
            for (k, m) in self.modulus[..d].iter().enumerate() {
                let t = &top * m;
                c[base + k] = &c[base + k] - &t;
            }
        }
        trim(&mut c);
        c
    }
}

fn trim(c: &mut Vec<Gaussian>) {
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
}

fn poly_mul(a: &[Gaussian], b: &[Gaussian]) -> Vec<Gaussian> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Gaussian::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[Gaussian], b: &[Gaussian]) -> Vec<Gaussian> {
    let n = a.len().max(b.len());
    let mut out: Vec<Gaussian> = (0..n)
        .map(|k| {
            let x = a.get(k).cloned().unwrap_or_default();
            let y = b.get(k).cloned().unwrap_or_default();
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

fn poly_divrem(a: &[Gaussian], b: &[Gaussian]) -> (Vec<Gaussian>, Vec<Gaussian>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let inv = b[db].inv().expect("divisor is nonzero");
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![Gaussian::zero(); r.len() - db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = &r[r.len() - 1] * &inv;
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = &r[k + j] - &(&c * bj);
        }
        q[k] = c;
        r.pop();
        trim(&mut r);
        if r.len() <= db {
            break;
        }
    }
    trim(&mut q);
    (q, r)
}

/// Inverse of `a` modulo the irreducible `m` via the extended Euclidean algorithm.
fn poly_inv_mod(a: &[Gaussian], m: &[Gaussian]) -> Option<Vec<Gaussian>> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    let (mut s0, mut s1): (Vec<Gaussian>, Vec<Gaussian>) = (Vec::new(), vec![Gaussian::one()]);
    trim(&mut r1);
    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.len() != 1 {
        return None;
    }
    let c = r0[0].inv()?;
    Some(s0.iter().map(|x| x * &c).collect())
}

#[derive(Clone, Debug)]
pub struct FieldElement {
    ext: Option<Arc<Extension>>,
    coords: Vec<Gaussian>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        if self.coords != other.coords {
            return false;
        }
        self.coords.len() <= 1 || self.ext == other.ext
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl Default for FieldElement {
    fn default() -> Self {
        FieldElement::zero()
    }
}

impl FieldElement {
    pub fn from_gaussian(g: Gaussian) -> Self {
        let mut coords = vec![g];
        trim(&mut coords);
        FieldElement { ext: None, coords }
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::from_gaussian(Gaussian::real(r))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_gaussian(Gaussian::from_int(n))
    }

    pub fn i() -> Self {
        Self::from_gaussian(Gaussian::i())
    }

    /// The generator `a` of `ext`.
    pub fn generator(ext: &Arc<Extension>) -> Self {
        let coords = ext.reduce(vec![Gaussian::zero(), Gaussian::one()]);
        FieldElement {
            ext: Some(ext.clone()),
            coords,
        }
    }

    pub fn from_coords(ext: Option<Arc<Extension>>, coords: Vec<Gaussian>) -> Self {
        match ext {
            Some(e) => {
                let coords = e.reduce(coords);
                FieldElement {
                    ext: Some(e),
                    coords,
                }
            }
            None => {
                let mut coords = coords;
                trim(&mut coords);
                assert!(coords.len() <= 1, "coordinates beyond Q(i) need an extension");
                FieldElement { ext: None, coords }
            }
        }
    }

    pub fn extension(&self) -> Option<&Arc<Extension>> {
        self.ext.as_ref()
    }

    pub fn coords(&self) -> &[Gaussian] {
        &self.coords
    }

    /// The `Q(i)` value when the element does not involve the generator.
    pub fn as_gaussian(&self) -> Option<Gaussian> {
        match self.coords.len() {
            0 => Some(Gaussian::zero()),
            1 => Some(self.coords[0].clone()),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.as_gaussian().filter(Gaussian::is_real).map(|g| g.re)
    }

    /// Whether the element has no `i`-part on the power basis. For a real
    /// modulus this is exactly reality under any real embedding of `a`.
    pub fn has_real_coords(&self) -> bool {
        self.coords.iter().all(Gaussian::is_real)
    }

    pub fn conj(&self) -> Self {
        FieldElement {
            ext: self.ext.as_ref().map(|e| e.conj()),
            coords: self.coords.iter().map(Gaussian::conj).collect(),
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.coords.len() == 1 {
            return Some(FieldElement {
                ext: self.ext.clone(),
                coords: vec![self.coords[0].inv()?],
            });
        }
        let ext = self.ext.as_ref().expect("non-constant element has an extension");
        let coords = poly_inv_mod(&self.coords, &ext.modulus)?;
        Some(FieldElement::from_coords(Some(ext.clone()), coords))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = FieldElement::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    fn merged_ext(&self, other: &Self) -> Option<Arc<Extension>> {
        match (&self.ext, &other.ext) {
            (Some(a), Some(b)) => {
                if a != b {
                    // Only constants of the base field may cross extensions.
                    assert!(
                        self.coords.len() <= 1 || other.coords.len() <= 1,
                        "mixing elements of distinct extensions"
                    );
                    if self.coords.len() > 1 {
                        return Some(a.clone());
                    }
                    return Some(b.clone());
                }
                Some(a.clone())
            }
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (None, None) => None,
        }
    }

    /// Value of `self` under the embedding sending `a` to `root`.
    pub fn eval_coords_at<T, F>(&self, root: &T, lift: F) -> T
    where
        T: Clone + Zero + for<'x> Add<&'x T, Output = T> + for<'x> Mul<&'x T, Output = T>,
        F: Fn(&Gaussian) -> T,
    {
        let mut acc = T::zero();
        for c in self.coords.iter().rev() {
            acc = acc * root + &lift(c);
        }
        acc
    }
}

impl Zero for FieldElement {
    fn zero() -> Self {
        FieldElement {
            ext: None,
            coords: Vec::new(),
        }
    }
    fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }
}

impl One for FieldElement {
    fn one() -> Self {
        FieldElement::from_int(1)
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        let ext = self.merged_ext(o);
        let n = self.coords.len().max(o.coords.len());
        let mut coords: Vec<Gaussian> = (0..n)
            .map(|k| match (self.coords.get(k), o.coords.get(k)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        trim(&mut coords);
        FieldElement { ext, coords }
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, o: FieldElement) -> FieldElement {
        &self + &o
    }
}

impl Add<&FieldElement> for FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        &self + o
    }
}

impl AddAssign<&FieldElement> for FieldElement {
    fn add_assign(&mut self, o: &FieldElement) {
        *self = &*self + o;
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        self + &(-o)
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, o: FieldElement) -> FieldElement {
        &self - &o
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        let ext = self.merged_ext(o);
        let coords = poly_mul(&self.coords, &o.coords);
        match ext {
            Some(e) => {
                let coords = e.reduce(coords);
                FieldElement {
                    ext: Some(e),
                    coords,
                }
            }
            None => FieldElement { ext: None, coords },
        }
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, o: FieldElement) -> FieldElement {
        &self * &o
    }
}

impl Mul<&FieldElement> for FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        &self * o
    }
}

impl Div for &FieldElement {
    type Output = FieldElement;
    fn div(self, o: &FieldElement) -> FieldElement {
        self * &o.inv().expect("division by zero")
    }
}

impl Div for FieldElement {
    type Output = FieldElement;
    fn div(self, o: FieldElement) -> FieldElement {
        &self / &o
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            ext: self.ext.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "0");
        }
        if self.coords.len() == 1 {
            return write!(f, "{}", self.coords[0]);
        }
        let mut parts = Vec::new();
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match k {
                0 => format!("{c}"),
                1 => format!("{c}*a"),
                _ => format!("{c}*a^{k}"),
            });
        }
        write!(f, "({})", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::gaussian::rat;

    fn sqrt2() -> Arc<Extension> {
        Extension::new(vec![Gaussian::from_int(-2), Gaussian::zero(), Gaussian::one()])
    }

    #[test]
    fn generator_squares_to_modulus_root() {
        let e = sqrt2();
        let a = FieldElement::generator(&e);
        assert_eq!(&a * &a, FieldElement::from_int(2));
    }

    #[test]
    fn inverse_in_extension() {
        let e = sqrt2();
        let a = FieldElement::generator(&e);
        let x = &a + &FieldElement::from_int(3);
        let y = x.inv().unwrap();
        assert_eq!(&x * &y, FieldElement::one());
        assert_eq!(
            FieldElement::from_rational(rat(4)).inv().unwrap(),
            FieldElement::from_rational(crate::numeric::gaussian::ratio(1, 4))
        );
    }

    #[test]
    fn conjugation_is_involutive() {
        let e = Extension::new(vec![Gaussian::i(), Gaussian::zero(), Gaussian::zero(), Gaussian::one()]);
        let a = FieldElement::generator(&e);
        let x = &(&a * &FieldElement::i()) + &FieldElement::from_int(5);
        assert_eq!(x.conj().conj(), x);
        assert!(!e.is_real());
    }
}
