use num_traits::Zero;

use crate::foliation::{algebraic_multiplicity, FoliationGerm};
use crate::numeric::{BiPoly, FieldElement, UPoly};

/// Which chart of a blow-up a point lives in. In both charts the new
/// exceptional line is `{x = 0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChartKind {
    /// `(x, y) -> (x, x (y + c))`, the point `u = c` of the line.
    U,
    /// `(x, y) -> (x y, x)`, the direction of the old `y`-axis.
    V,
}

impl ChartKind {
    pub fn label(self) -> &'static str {
        match self {
            ChartKind::U => "u",
            ChartKind::V => "v",
        }
    }
}

/// Pull-back of the germ by one blow-up, with the exceptional factor removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupCharts {
    /// `(P', Q')` in the coordinates `(x, u)` of the `U` chart, before
    /// translating to a point.
    pub chart_u: (BiPoly, BiPoly),
    /// `(P', Q')` at the origin of the `V` chart.
    pub chart_v: (BiPoly, BiPoly),
    pub dicritical: bool,
    pub nu: usize,
    /// Power of the exceptional divisor removed: `nu` or `nu + 1`.
    pub m: usize,
}

impl BlowupCharts {
    /// Polynomial in `u` whose roots are the special points of the line in
    /// the `U` chart: singular points when the line is invariant, tangency
    /// points otherwise.
    pub fn special_u(&self) -> UPoly {
        if self.dicritical {
            self.chart_u.0.restrict_x0()
        } else {
            self.chart_u.1.restrict_x0()
        }
    }

    /// Whether the `V` chart origin is a special point in the same sense.
    pub fn special_v(&self) -> bool {
        if self.dicritical {
            self.chart_v.0.value_at_origin().is_zero()
        } else {
            self.chart_v.1.value_at_origin().is_zero()
        }
    }

    /// Local germ at the point `u = c` of the `U` chart, or the `V` origin.
    pub fn germ_at(&self, kind: ChartKind, c: &FieldElement) -> crate::error::Result<FoliationGerm> {
        match kind {
            ChartKind::U => FoliationGerm::at_point(&self.chart_u.0, &self.chart_u.1, &FieldElement::zero(), c),
            ChartKind::V => FoliationGerm::new(self.chart_v.0.clone(), self.chart_v.1.clone()),
        }
    }
}

/// The map of a chart as a pair of polynomials `(X(x, y), Y(x, y))`.
pub fn chart_map(kind: ChartKind, c: &FieldElement) -> (BiPoly, BiPoly) {
    match kind {
        ChartKind::U => (
            BiPoly::x(),
            BiPoly::x().mul(&BiPoly::y().add(&BiPoly::constant(c.clone()))),
        ),
        ChartKind::V => (BiPoly::x().mul(&BiPoly::y()), BiPoly::x()),
    }
}

/// Strict transform of an equation through a chart: `f o chart / x^ord(f)`.
pub fn strict_transform_equation(f: &BiPoly, kind: ChartKind, c: &FieldElement) -> BiPoly {
    let (cx, cy) = chart_map(kind, c);
    let g = f.compose(&cx, &cy);
    let k = g.x_adic_order().unwrap_or(0);
    g.div_x_pow(k)
}

/// Blows up the origin of `f`.
///
/// The form `P dy - Q dx` pulls back in the `U` chart to
/// `x P dy - (Q - u P) dx` and in the `V` chart to `-x Q dy - (y Q - P) dx`;
/// both are divided by `x^m`. The line is dicritical exactly when
/// `x Q_nu - y P_nu` vanishes identically.
pub fn blowup(f: &FoliationGerm) -> BlowupCharts {
    let nu = algebraic_multiplicity(f);
    let (p, q) = (f.p(), f.q());
    let cone = BiPoly::x()
        .mul(&q.homogeneous_part(nu))
        .sub(&BiPoly::y().mul(&p.homogeneous_part(nu)));
    let dicritical = cone.is_zero();
    let m = if dicritical { nu + 1 } else { nu } as u32;

    let (ux, uy) = (BiPoly::x(), BiPoly::x().mul(&BiPoly::y()));
    let pu = p.compose(&ux, &uy);
    let qu = q.compose(&ux, &uy);
    let chart_u = (
        BiPoly::x().mul(&pu).div_x_pow(m),
        qu.sub(&BiPoly::y().mul(&pu)).div_x_pow(m),
    );

    let (vx, vy) = (BiPoly::x().mul(&BiPoly::y()), BiPoly::x());
    let pv = p.compose(&vx, &vy);
    let qv = q.compose(&vx, &vy);
    let chart_v = (
        BiPoly::x().mul(&qv).neg().div_x_pow(m),
        BiPoly::y().mul(&qv).sub(&pv).div_x_pow(m),
    );
    BlowupCharts {
        chart_u,
        chart_v,
        dicritical,
        nu,
        m: m as usize,
    }
}
