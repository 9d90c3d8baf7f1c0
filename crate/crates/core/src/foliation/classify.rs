use num_traits::{One, Zero};

use super::invariant_curve::{invariant_curve, AdaptedFrame};
use super::FoliationGerm;
use crate::error::{Error, Result};
use crate::numeric::{rat, split_roots, FieldElement, UPoly};

const FIRST_JET: usize = 8;
const JET_CAP: usize = 512;

/// Weak index of a saddle-node together with the data of the restriction to
/// the center manifold: `x' = leading * x^index + ...` in adapted coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakIndex {
    pub index: usize,
    pub leading: FieldElement,
    pub certified_below: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SingularityClass {
    Regular,
    NonDegenerate {
        trace: FieldElement,
        det: FieldElement,
        /// Eigenvalues when they lie in the field of the germ.
        eigenvalues: Option<(FieldElement, FieldElement)>,
    },
    SaddleNode {
        strong: FieldElement,
        strong_dir: (FieldElement, FieldElement),
        weak_dir: (FieldElement, FieldElement),
        weak: WeakIndex,
    },
    NonSimple,
}

impl SingularityClass {
    pub fn is_simple(&self) -> bool {
        matches!(self, SingularityClass::NonDegenerate { .. } | SingularityClass::SaddleNode { .. })
    }

    pub fn is_singular(&self) -> bool {
        !matches!(self, SingularityClass::Regular)
    }

    pub fn weak_index(&self) -> Option<usize> {
        match self {
            SingularityClass::SaddleNode { weak, .. } => Some(weak.index),
            _ => None,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            SingularityClass::Regular => "regular",
            SingularityClass::NonDegenerate { .. } => "non-degenerate",
            SingularityClass::SaddleNode { .. } => "saddle-node",
            SingularityClass::NonSimple => "non-simple",
        }
    }

    /// Conjugate record (coefficient-wise).
    pub fn conj(&self) -> Self {
        let c2 = |v: &(FieldElement, FieldElement)| (v.0.conj(), v.1.conj());
        match self {
            SingularityClass::NonDegenerate { trace, det, eigenvalues } => SingularityClass::NonDegenerate {
                trace: trace.conj(),
                det: det.conj(),
                eigenvalues: eigenvalues.as_ref().map(c2),
            },
            SingularityClass::SaddleNode {
                strong,
                strong_dir,
                weak_dir,
                weak,
            } => SingularityClass::SaddleNode {
                strong: strong.conj(),
                strong_dir: c2(strong_dir),
                weak_dir: c2(weak_dir),
                weak: WeakIndex {
                    index: weak.index,
                    leading: weak.leading.conj(),
                    certified_below: weak.certified_below,
                },
            },
            other => other.clone(),
        }
    }
}

/// Kernel vector of a rank-one 2x2 matrix.
pub(crate) fn kernel(m: &[[FieldElement; 2]; 2]) -> (FieldElement, FieldElement) {
    for row in m {
        if !row[0].is_zero() || !row[1].is_zero() {
            return (row[1].clone(), -&row[0]);
        }
    }
    (FieldElement::one(), FieldElement::zero())
}

pub(crate) fn shifted(m: &[[FieldElement; 2]; 2], l: &FieldElement) -> [[FieldElement; 2]; 2] {
    [
        [&m[0][0] - l, m[0][1].clone()],
        [m[1][0].clone(), &m[1][1] - l],
    ]
}

/// `lambda_1 / lambda_2` is a positive rational, decided from
/// `s = tr^2 / det = r + 1/r + 2` without computing eigenvalues: `r` is a
/// positive rational iff `s` is rational, `s >= 4` and `s (s - 4)` is a
/// rational square.
fn ratio_in_positive_rationals(tr: &FieldElement, det: &FieldElement) -> bool {
    let s = match (&(tr * tr) / det).as_rational() {
        Some(s) => s,
        None => return false,
    };
    if s < rat(4) {
        return false;
    }
    let d = &s * &(&s - rat(4));
    is_rational_square(&d)
}

fn is_rational_square(r: &num_rational::BigRational) -> bool {
    use num_traits::Signed;
    if r.is_negative() {
        return false;
    }
    let sq = |n: &num_bigint::BigInt| {
        let s = n.sqrt();
        &s * &s == *n
    };
    sq(r.numer()) && sq(r.denom())
}

/// Classification by the linear part, exact in the tower of the germ.
pub fn classify_singularity(f: &FoliationGerm) -> Result<SingularityClass> {
    if !f.is_singular() {
        return Ok(SingularityClass::Regular);
    }
    let a = f.linear_part();
    let tr = &a[0][0] + &a[1][1];
    let det = &(&a[0][0] * &a[1][1]) - &(&a[0][1] * &a[1][0]);
    if det.is_zero() {
        if tr.is_zero() {
            return Ok(SingularityClass::NonSimple);
        }
        let weak_dir = kernel(&a);
        let strong_dir = kernel(&shifted(&a, &tr));
        let weak = compute_weak_index(f, &weak_dir, &strong_dir, &tr)?;
        return Ok(SingularityClass::SaddleNode {
            strong: tr,
            strong_dir,
            weak_dir,
            weak,
        });
    }
    if ratio_in_positive_rationals(&tr, &det) {
        return Ok(SingularityClass::NonSimple);
    }
    Ok(SingularityClass::NonDegenerate {
        eigenvalues: eigenvalues_in_field(&tr, &det),
        trace: tr,
        det,
    })
}

fn eigenvalues_in_field(tr: &FieldElement, det: &FieldElement) -> Option<(FieldElement, FieldElement)> {
    let chi = UPoly::new(vec![det.clone(), -tr, FieldElement::one()]);
    let split = split_roots(&chi).ok()?;
    if !split.irreducible.is_empty() {
        return None;
    }
    let mut r: Vec<FieldElement> = Vec::new();
    for (root, m) in split.roots {
        for _ in 0..m {
            r.push(root.clone());
        }
    }
    (r.len() == 2).then(|| (r[0].clone(), r[1].clone()))
}

fn compute_weak_index(
    f: &FoliationGerm,
    weak_dir: &(FieldElement, FieldElement),
    strong_dir: &(FieldElement, FieldElement),
    strong: &FieldElement,
) -> Result<WeakIndex> {
    let frame = AdaptedFrame {
        along: weak_dir.clone(),
        lambda_along: FieldElement::zero(),
        other: strong_dir.clone(),
        lambda_other: strong.clone(),
    };
    let adapted = frame.transport(f)?;
    let mut n = FIRST_JET;
    loop {
        let (phi, _) = invariant_curve(f, &frame, n)?;
        let big = 4 * n + 8;
        let restricted = adapted
            .p()
            .substitute_series(&crate::numeric::TruncSeries::t(big), &phi);
        let below = restricted.guaranteed_order();
        if let Ok(k) = restricted.ord() {
            return Ok(WeakIndex {
                index: k,
                leading: restricted.coeff(k),
                certified_below: below,
            });
        }
        if n >= JET_CAP {
            return Err(Error::TruncationExhausted { order: below });
        }
        n *= 2;
    }
}

/// Weak index of a saddle-node germ.
pub fn weak_index(f: &FoliationGerm) -> Result<usize> {
    match classify_singularity(f)? {
        SingularityClass::SaddleNode { weak, .. } => Ok(weak.index),
        _ => Err(Error::NotSaddleNode),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::BiPoly;

    fn germ(p: &[(i64, u32, u32)], q: &[(i64, u32, u32)]) -> FoliationGerm {
        FoliationGerm::from_int_terms(p, q).unwrap()
    }

    #[test]
    fn linear_classes() {
        let saddle = germ(&[(1, 1, 0)], &[(-1, 0, 1)]);
        match classify_singularity(&saddle).unwrap() {
            SingularityClass::NonDegenerate { eigenvalues: Some((a, b)), .. } => {
                assert_eq!(&a / &b, FieldElement::from_int(-1));
            }
            c => panic!("{c:?}"),
        }
        let resonant = germ(&[(1, 1, 0)], &[(2, 0, 1)]);
        assert_eq!(classify_singularity(&resonant), Ok(SingularityClass::NonSimple));
        let radial = germ(&[(1, 1, 0)], &[(1, 0, 1)]);
        assert_eq!(classify_singularity(&radial), Ok(SingularityClass::NonSimple));
        let cusp = germ(&[(2, 0, 1)], &[(3, 2, 0)]);
        assert_eq!(classify_singularity(&cusp), Ok(SingularityClass::NonSimple));
        let regular = germ(&[(1, 0, 0)], &[(1, 1, 0)]);
        assert_eq!(classify_singularity(&regular), Ok(SingularityClass::Regular));
    }

    #[test]
    fn irrational_and_complex_ratios_are_simple() {
        // Eigenvalues 1 +- sqrt 2: ratio irrational.
        let f = germ(&[(1, 1, 0), (2, 0, 1)], &[(1, 1, 0), (1, 0, 1)]);
        assert!(classify_singularity(&f).unwrap().is_simple());
        // Center: eigenvalues +-i.
        let c = germ(&[(1, 0, 1)], &[(-1, 1, 0)]);
        match classify_singularity(&c).unwrap() {
            SingularityClass::NonDegenerate { eigenvalues: Some((a, b)), .. } => {
                assert_eq!(&a + &b, FieldElement::zero());
                assert_eq!(&a * &b, FieldElement::one());
            }
            c => panic!("{c:?}"),
        }
    }

    #[test]
    fn normal_form_weak_indices() {
        // y dx + x^2 dy: P = x^2, Q = -y.
        assert_eq!(weak_index(&germ(&[(1, 2, 0)], &[(-1, 0, 1)])), Ok(2));
        // y (1 + x^2) dx + x^3 dy.
        assert_eq!(weak_index(&germ(&[(1, 3, 0)], &[(-1, 0, 1), (-1, 2, 1)])), Ok(3));
    }

    #[test]
    fn nonaxis_saddle_node() {
        // Rotate y dx + x^2 dy by (x, y) -> (x + y, y).
        let f = germ(&[(1, 2, 0)], &[(-1, 0, 1)]);
        let m = crate::numeric::Linear2::new(
            FieldElement::one(),
            FieldElement::one(),
            FieldElement::zero(),
            FieldElement::one(),
        );
        let g = f.linear_change(&m).unwrap();
        assert_eq!(weak_index(&g), Ok(2));
        assert!(!g.p().is_zero() && g.p() != &BiPoly::x().pow(2));
    }

    #[test]
    fn weak_index_needs_saddle_node() {
        assert_eq!(weak_index(&germ(&[(1, 1, 0)], &[(-1, 0, 1)])), Err(Error::NotSaddleNode));
    }
}
