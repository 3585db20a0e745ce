//! Curves `x^u = L(y)` with `L` a separable additive polynomial, and the ring
//! of functions on them that are regular away from the single point at
//! infinity.
//!
//! Functions are kept in the canonical monomial form `Σ c_{a,b} x^a y^b`
//! with `0 <= a < u`; `x^u` is always rewritten to `L(y)`. Because
//! `gcd(u, deg L) = 1`, the pole order `a·deg L + b·u` of a monomial at
//! infinity determines the monomial, so the pole order of a function is the
//! largest pole order among its terms.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Elem, Field};
use crate::linalg::{Matrix, SolveError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("linearized polynomial needs nonzero constant and leading coefficients")]
    NotSeparable,
    #[error("gcd(u = {u}, deg L = {deg}) must be 1 for a single point at infinity")]
    NotCoprime { u: u32, deg: u32 },
    #[error("exponent u must be positive")]
    ZeroExponent,
    #[error("Hermitian curve with q0 = {q0} needs a base field of order q0^2, got {order}")]
    HermitianField { q0: u32, order: u32 },
    #[error("q0 = {0} is not a power of the characteristic")]
    NotCharacteristicPower(u32),
    #[error("coefficient {0} is not in the base field")]
    CoefficientOutOfRange(u32),
    #[error("the zero function has no pole order")]
    ZeroFunction,
    #[error("function is not divisible by the given divisor in the coordinate ring")]
    NotDivisible,
    #[error("point ({0}, {1}) is not on the curve")]
    NotOnCurve(u32, u32),
}

/// Which coordinate function a fiber is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coordinate {
    X,
    Y,
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coordinate::X => "x",
            Coordinate::Y => "y",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AffinePoint {
    pub x: Elem,
    pub y: Elem,
}

impl AffinePoint {
    pub fn new(x: Elem, y: Elem) -> Self {
        AffinePoint { x, y }
    }

    pub fn coordinate(&self, z: Coordinate) -> Elem {
        match z {
            Coordinate::X => self.x,
            Coordinate::Y => self.y,
        }
    }
}

impl fmt::Display for AffinePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// The monomial `x^x y^y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub x: u32,
    pub y: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x: 0, y: 0 };

    pub fn new(x: u32, y: u32) -> Self {
        Monomial { x, y }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.x, self.y) {
            (0, 0) => write!(f, "1"),
            (a, 0) => write!(f, "x^{a}"),
            (0, b) => write!(f, "y^{b}"),
            (a, b) => write!(f, "x^{a}y^{b}"),
        }
    }
}

/// A function with poles only at infinity, as a sparse map from monomials to
/// nonzero coefficients. The coefficient field is implied by the caller.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct RingElement {
    terms: BTreeMap<Monomial, Elem>,
}

impl RingElement {
    pub fn zero() -> Self {
        RingElement::default()
    }

    pub fn constant(c: Elem) -> Self {
        Self::term(Monomial::ONE, c)
    }

    pub fn one() -> Self {
        Self::constant(Elem::ONE)
    }

    pub fn term(m: Monomial, c: Elem) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        RingElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, Elem)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: Monomial) -> Elem {
        self.terms.get(&m).copied().unwrap_or(Elem::ZERO)
    }

    /// Linear combination `Σ c_i m_i` of monomials.
    pub fn from_basis(basis: &[Monomial], coeffs: &[Elem], field: &Field) -> Self {
        debug_assert_eq!(basis.len(), coeffs.len());
        let mut out = RingElement::zero();
        for (&m, &c) in basis.iter().zip(coeffs) {
            out.add_term(field, m, c);
        }
        out
    }

    /// Coefficients with respect to `basis`, or `None` if some term of `self`
    /// lies outside the basis.
    pub fn coordinates(&self, basis: &[Monomial]) -> Option<Vec<Elem>> {
        let out: Vec<Elem> = basis.iter().map(|&m| self.coefficient(m)).collect();
        let covered = self.terms.keys().all(|m| basis.contains(m));
        covered.then_some(out)
    }

    fn add_term(&mut self, field: &Field, m: Monomial, c: Elem) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert(Elem::ZERO);
        *entry = field.add(*entry, c);
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, field: &Field, other: &RingElement) -> RingElement {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(field, m, c);
        }
        out
    }

    pub fn sub(&self, field: &Field, other: &RingElement) -> RingElement {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(field, m, field.neg(c));
        }
        out
    }

    pub fn scale(&self, field: &Field, c: Elem) -> RingElement {
        if c.is_zero() {
            return RingElement::zero();
        }
        RingElement { terms: self.terms.iter().map(|(&m, &v)| (m, field.mul(v, c))).collect() }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("{c}*{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A curve `x^u = Σ_i a_i y^{p^i}` over `F_Q` with one point at infinity.
#[derive(Debug, Clone)]
pub struct CurveModel {
    base: Arc<Field>,
    u: u32,
    linearized: Vec<Elem>,
    deg_l: u32,
    genus: u32,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl CurveModel {
    /// `x^u = L(y)` where `linearized[i]` is the coefficient of `y^{p^i}`.
    pub fn kummer(base: Arc<Field>, u: u32, linearized: Vec<Elem>) -> Result<Self, CurveError> {
        if u == 0 {
            return Err(CurveError::ZeroExponent);
        }
        if let Some(c) = linearized.iter().find(|c| !base.contains(**c)) {
            return Err(CurveError::CoefficientOutOfRange(c.0));
        }
        match (linearized.first(), linearized.last()) {
            (Some(a0), Some(ar)) if !a0.is_zero() && !ar.is_zero() => {}
            _ => return Err(CurveError::NotSeparable),
        }
        let p = base.characteristic();
        let deg_l = p
            .checked_pow((linearized.len() - 1) as u32)
            .ok_or(CurveError::NotSeparable)?;
        if gcd(u, deg_l) != 1 {
            return Err(CurveError::NotCoprime { u, deg: deg_l });
        }
        let genus = (u - 1) * (deg_l - 1) / 2;
        Ok(CurveModel { base, u, linearized, deg_l, genus })
    }

    /// The Hermitian curve `x^{q0+1} = y^{q0} + y` over `F_{q0^2}`.
    pub fn hermitian(base: Arc<Field>, q0: u32) -> Result<Self, CurveError> {
        if q0.checked_mul(q0) != Some(base.order()) {
            return Err(CurveError::HermitianField { q0, order: base.order() });
        }
        let p = base.characteristic();
        let mut r = 0;
        let mut v = 1;
        while v < q0 {
            v *= p;
            r += 1;
        }
        if v != q0 {
            return Err(CurveError::NotCharacteristicPower(q0));
        }
        let mut lin = vec![Elem::ZERO; r + 1];
        lin[0] = Elem::ONE;
        lin[r] = Elem::ONE;
        Self::kummer(base, q0 + 1, lin)
    }

    pub fn base(&self) -> &Arc<Field> {
        &self.base
    }

    pub fn u(&self) -> u32 {
        self.u
    }

    /// Coefficients `a_i` of `y^{p^i}` in `L`.
    pub fn linearized(&self) -> &[Elem] {
        &self.linearized
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// Pole order of `x` at infinity (`deg L`).
    pub fn rho_x(&self) -> u32 {
        self.deg_l
    }

    /// Pole order of `y` at infinity (`u`).
    pub fn rho_y(&self) -> u32 {
        self.u
    }

    pub fn coordinate_pole_order(&self, z: Coordinate) -> u32 {
        match z {
            Coordinate::X => self.deg_l,
            Coordinate::Y => self.u,
        }
    }

    pub fn monomial_pole_order(&self, m: Monomial) -> u32 {
        m.x * self.deg_l + m.y * self.u
    }

    /// `L(b)` for `b` in `field` (a field containing the base field).
    pub fn eval_linearized(&self, field: &Field, b: Elem) -> Elem {
        let p = self.base.characteristic() as u64;
        let mut acc = Elem::ZERO;
        let mut power = b; // b^{p^i}
        for &a in &self.linearized {
            acc = field.add(acc, field.mul(a, power));
            power = field.pow(power, p);
        }
        acc
    }

    pub fn contains_point(&self, field: &Field, pt: AffinePoint) -> bool {
        field.pow(pt.x, self.u as u64) == self.eval_linearized(field, pt.y)
    }

    /// All affine points with coordinates in `field`, sorted by `(x, y)` index.
    pub fn affine_points(&self, field: &Field) -> Vec<AffinePoint> {
        let mut by_value: BTreeMap<Elem, Vec<Elem>> = BTreeMap::new();
        for b in field.elements() {
            by_value.entry(self.eval_linearized(field, b)).or_default().push(b);
        }
        let mut out = Vec::new();
        for a in field.elements() {
            if let Some(ys) = by_value.get(&field.pow(a, self.u as u64)) {
                out.extend(ys.iter().map(|&b| AffinePoint::new(a, b)));
            }
        }
        out
    }

    /// Base-field points where the coordinate `z` takes the value `a`, i.e.
    /// the support of the zero divisor of `z - a`.
    pub fn fiber(&self, z: Coordinate, a: Elem) -> Vec<AffinePoint> {
        let field = &*self.base;
        match z {
            Coordinate::X => {
                let target = field.pow(a, self.u as u64);
                field
                    .elements()
                    .filter(|&b| self.eval_linearized(field, b) == target)
                    .map(|b| AffinePoint::new(a, b))
                    .collect()
            }
            Coordinate::Y => {
                let target = self.eval_linearized(field, a);
                field
                    .elements()
                    .filter(|&x| field.pow(x, self.u as u64) == target)
                    .map(|x| AffinePoint::new(x, a))
                    .collect()
            }
        }
    }

    /// Monomial basis of `L(β P∞)`, sorted by pole order.
    pub fn rr_basis(&self, beta: i64) -> Vec<Monomial> {
        let mut out = Vec::new();
        if beta < 0 {
            return out;
        }
        let beta = beta as u64;
        for a in 0..self.u {
            let base = a as u64 * self.deg_l as u64;
            if base > beta {
                break;
            }
            let bmax = (beta - base) / self.u as u64;
            out.extend((0..=bmax as u32).map(|b| Monomial::new(a, b)));
        }
        out.sort_by_key(|&m| self.monomial_pole_order(m));
        out
    }

    /// `ℓ(β P∞)`.
    pub fn rr_dimension(&self, beta: i64) -> usize {
        self.rr_basis(beta).len()
    }

    pub fn pole_order(&self, f: &RingElement) -> Result<u32, CurveError> {
        f.terms()
            .map(|(m, _)| self.monomial_pole_order(m))
            .max()
            .ok_or(CurveError::ZeroFunction)
    }

    /// Rewrites `x^a` with `a >= u` using the curve equation.
    fn push_reduced(&self, field: &Field, out: &mut RingElement, m: Monomial, c: Elem) {
        if m.x < self.u {
            out.add_term(field, m, c);
            return;
        }
        let p = self.base.characteristic();
        let mut pw = 1u32;
        for &a in &self.linearized {
            if !a.is_zero() {
                self.push_reduced(field, out, Monomial::new(m.x - self.u, m.y + pw), field.mul(c, a));
            }
            pw *= p;
        }
    }

    pub fn reduce(&self, field: &Field, f: &RingElement) -> RingElement {
        let mut out = RingElement::zero();
        for (m, c) in f.terms() {
            self.push_reduced(field, &mut out, m, c);
        }
        out
    }

    pub fn mul(&self, field: &Field, f: &RingElement, h: &RingElement) -> RingElement {
        let mut out = RingElement::zero();
        for (mf, cf) in f.terms() {
            for (mh, ch) in h.terms() {
                let m = Monomial::new(mf.x + mh.x, mf.y + mh.y);
                self.push_reduced(field, &mut out, m, field.mul(cf, ch));
            }
        }
        out
    }

    pub fn pow(&self, field: &Field, f: &RingElement, e: u32) -> RingElement {
        let mut out = RingElement::one();
        for _ in 0..e {
            out = self.mul(field, &out, f);
        }
        out
    }

    /// The coordinate function `z`.
    pub fn coordinate_function(&self, z: Coordinate) -> RingElement {
        match z {
            Coordinate::X => RingElement::term(Monomial::new(1, 0), Elem::ONE),
            Coordinate::Y => RingElement::term(Monomial::new(0, 1), Elem::ONE),
        }
    }

    /// `Π_{a ∈ values} (z - a)` in canonical form.
    pub fn annihilator(&self, field: &Field, z: Coordinate, values: &[Elem]) -> RingElement {
        let zf = self.coordinate_function(z);
        values.iter().fold(RingElement::one(), |acc, &a| {
            let factor = zf.sub(field, &RingElement::constant(a));
            self.mul(field, &acc, &factor)
        })
    }

    pub fn evaluate(&self, field: &Field, f: &RingElement, pt: AffinePoint) -> Elem {
        field.sum(f.terms().map(|(m, c)| {
            field.mul(c, field.mul(field.pow(pt.x, m.x as u64), field.pow(pt.y, m.y as u64)))
        }))
    }

    /// The quotient `q` with `q · divisor = numerator`, found by solving for
    /// the coefficients of `q` over the monomials of pole order at most
    /// `pole_order(numerator) - pole_order(divisor)`.
    pub fn exact_divide(
        &self,
        field: &Field,
        numerator: &RingElement,
        divisor: &RingElement,
    ) -> Result<RingElement, CurveError> {
        let dpo = self.pole_order(divisor)?;
        if numerator.is_zero() {
            return Ok(RingElement::zero());
        }
        let npo = self.pole_order(numerator)?;
        if npo < dpo {
            return Err(CurveError::NotDivisible);
        }
        let basis = self.rr_basis((npo - dpo) as i64);
        let products: Vec<RingElement> = basis
            .iter()
            .map(|&m| self.mul(field, &RingElement::term(m, Elem::ONE), divisor))
            .collect();
        let mut rows: Vec<Monomial> = numerator.terms().map(|(m, _)| m).collect();
        for p in &products {
            rows.extend(p.terms().map(|(m, _)| m));
        }
        rows.sort();
        rows.dedup();
        let system = Matrix::from_fn(rows.len(), basis.len(), |r, c| products[c].coefficient(rows[r]));
        let rhs: Vec<Elem> = rows.iter().map(|&m| numerator.coefficient(m)).collect();
        match system.solve(field, &rhs) {
            Ok(q) => Ok(RingElement::from_basis(&basis, &q, field)),
            Err(SolveError::Inconsistent) => Err(CurveError::NotDivisible),
            Err(SolveError::Underdetermined) => {
                unreachable!("products of distinct monomials have distinct pole orders")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn herm2() -> CurveModel {
        CurveModel::hermitian(Field::gf(2, 2).unwrap(), 2).unwrap()
    }

    fn herm3() -> CurveModel {
        CurveModel::hermitian(Field::gf(3, 2).unwrap(), 3).unwrap()
    }

    fn x() -> RingElement {
        RingElement::term(Monomial::new(1, 0), Elem::ONE)
    }

    fn y() -> RingElement {
        RingElement::term(Monomial::new(0, 1), Elem::ONE)
    }

    const ALPHA: Elem = Elem(2);
    const ALPHA2: Elem = Elem(3);

    #[test]
    fn hermitian_parameters() {
        let c = herm2();
        assert_eq!((c.u(), c.rho_x(), c.rho_y(), c.genus()), (3, 2, 3, 1));
        let c = herm3();
        assert_eq!((c.u(), c.rho_x(), c.rho_y(), c.genus()), (4, 3, 4, 3));
    }

    #[test]
    fn constructor_rejections() {
        let f = Field::gf(2, 2).unwrap();
        assert!(matches!(
            CurveModel::kummer(f.clone(), 2, vec![Elem(1), Elem(1)]),
            Err(CurveError::NotCoprime { u: 2, deg: 2 })
        ));
        assert!(matches!(
            CurveModel::kummer(f.clone(), 3, vec![Elem(0), Elem(1)]),
            Err(CurveError::NotSeparable)
        ));
        assert!(matches!(
            CurveModel::kummer(f.clone(), 3, vec![Elem(1), Elem(9)]),
            Err(CurveError::CoefficientOutOfRange(9))
        ));
        assert!(matches!(CurveModel::hermitian(f, 3), Err(CurveError::HermitianField { .. })));
    }

    /// Brute force over all pairs, independent of `affine_points`.
    fn brute_points(c: &CurveModel) -> Vec<AffinePoint> {
        let f = c.base();
        let mut out = Vec::new();
        for a in f.elements() {
            for b in f.elements() {
                let lhs = f.pow(a, c.u() as u64);
                let rhs = f.add(f.pow(b, c.rho_x() as u64), b);
                if lhs == rhs {
                    out.push(AffinePoint::new(a, b));
                }
            }
        }
        out
    }

    #[test]
    fn point_counts() {
        let c = herm2();
        let pts = c.affine_points(c.base());
        assert_eq!(pts.len(), 8);
        assert_eq!(pts, brute_points(&c));
        assert!(pts.contains(&AffinePoint::new(Elem(0), Elem(0))));
        assert!(pts.contains(&AffinePoint::new(Elem(0), Elem(1))));
        let c = herm3();
        let pts = c.affine_points(c.base());
        assert_eq!(pts.len(), 27);
        assert_eq!(pts, brute_points(&c));
    }

    #[test]
    fn hermitian_fibers() {
        let c = herm2();
        for a in [Elem(1), ALPHA, ALPHA2] {
            assert_eq!(c.fiber(Coordinate::X, a), vec![AffinePoint::new(a, ALPHA), AffinePoint::new(a, ALPHA2)]);
        }
        assert_eq!(
            c.fiber(Coordinate::X, Elem(0)),
            vec![AffinePoint::new(Elem(0), Elem(0)), AffinePoint::new(Elem(0), Elem(1))]
        );
        for b in [ALPHA, ALPHA2] {
            assert_eq!(
                c.fiber(Coordinate::Y, b),
                vec![AffinePoint::new(Elem(1), b), AffinePoint::new(ALPHA, b), AffinePoint::new(ALPHA2, b)]
            );
        }
    }

    #[test]
    fn riemann_roch_bases() {
        let c = herm2();
        assert_eq!(c.rr_basis(2), vec![Monomial::ONE, Monomial::new(1, 0)]);
        assert_eq!(c.rr_basis(0), vec![Monomial::ONE]);
        assert!(c.rr_basis(-1).is_empty());
        let c = herm3();
        assert_eq!(
            c.rr_basis(6),
            vec![Monomial::ONE, Monomial::new(1, 0), Monomial::new(0, 1), Monomial::new(2, 0)]
        );
        // semigroup <3,4> has gaps {1,2,5}; above 2g-1 the dimension is β+1-g
        for beta in 0..40i64 {
            let semigroup = (0..=beta)
                .filter(|&s| (0..=s / 3).any(|a| (s - 3 * a) % 4 == 0))
                .count();
            assert_eq!(c.rr_dimension(beta), semigroup);
            if beta >= 5 {
                assert_eq!(c.rr_dimension(beta) as i64, beta + 1 - 3);
            }
        }
    }

    #[test]
    fn pole_orders() {
        let c = herm2();
        let f = c.base();
        assert_eq!(c.pole_order(&RingElement::one()).unwrap(), 0);
        assert_eq!(c.pole_order(&x()).unwrap(), 2);
        assert_eq!(c.pole_order(&y()).unwrap(), 3);
        let xx1 = c.mul(f, &x(), &x().add(f, &RingElement::one()));
        assert_eq!(c.pole_order(&xx1).unwrap(), 4);
        assert_eq!(c.pole_order(&RingElement::zero()), Err(CurveError::ZeroFunction));
    }

    #[test]
    fn products_use_curve_relation() {
        let c = herm2();
        let f = c.base();
        let y2y = c.pow(f, &y(), 2).add(f, &y());
        assert_eq!(c.pow(f, &x(), 3), y2y);
        let xy = c.mul(f, &x(), &y());
        let x2 = c.mul(f, &x(), &x());
        let y3y2 = c.pow(f, &y(), 3).add(f, &c.pow(f, &y(), 2));
        assert_eq!(c.mul(f, &xy, &x2), y3y2);
        assert_eq!(c.mul(f, &xy, &RingElement::one()), xy);
    }

    #[test]
    fn exact_division() {
        let c = herm2();
        let f = c.base();
        let x1 = x().add(f, &RingElement::one());
        let num = c.mul(f, &x(), &x1);
        assert_eq!(c.exact_divide(f, &num, &x()).unwrap(), x1);
        let y2y = c.pow(f, &y(), 2).add(f, &y());
        assert_eq!(c.exact_divide(f, &y2y, &x()).unwrap(), c.mul(f, &x(), &x()));
        assert_eq!(c.exact_divide(f, &RingElement::one(), &x()), Err(CurveError::NotDivisible));
        assert_eq!(c.exact_divide(f, &y(), &x()), Err(CurveError::NotDivisible));
        assert_eq!(c.exact_divide(f, &x(), &RingElement::zero()), Err(CurveError::ZeroFunction));
    }

    #[test]
    fn evaluation() {
        let c = herm2();
        let f = c.base();
        let pt = AffinePoint::new(ALPHA, ALPHA2);
        assert!(c.contains_point(f, pt));
        assert_eq!(c.evaluate(f, &RingElement::one(), pt), Elem::ONE);
        assert_eq!(c.evaluate(f, &c.mul(f, &x(), &y()), pt), Elem::ONE);
        let p1 = c.annihilator(f, Coordinate::X, &[Elem(0), Elem(1)]);
        assert_eq!(c.evaluate(f, &p1, AffinePoint::new(Elem(1), ALPHA)), Elem::ZERO);
    }

    #[test]
    fn annihilator_over_prime_subfield_of_f9() {
        // x(x-1)(x-2) = x^3 - x; u = 4 so no reduction applies
        let c = herm3();
        let f = c.base();
        let p = c.annihilator(f, Coordinate::X, &[Elem(0), Elem(1), Elem(2)]);
        let expect = RingElement::term(Monomial::new(3, 0), Elem::ONE)
            .sub(f, &RingElement::term(Monomial::new(1, 0), Elem::ONE));
        assert_eq!(c.reduce(f, &p), expect);
        assert_eq!(c.pole_order(&p).unwrap(), 9);
        for pt in c.affine_points(f) {
            let v = c.evaluate(f, &p, pt);
            assert_eq!(v.is_zero(), pt.x.index() < 3);
        }
    }
}
