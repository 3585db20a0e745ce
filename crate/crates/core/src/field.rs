//! Table-driven arithmetic in small finite fields and their extensions.
//!
//! Every field is either a prime field `F_p` or a simple extension
//! `F_Q[θ]/(m(θ))` of another [`Field`]. Elements are stored as their index
//! in the coefficient-vector representation: an element `Σ c_i θ^i` of an
//! extension of `F_Q` has index `Σ idx(c_i) Q^i`. Since the base field's
//! elements are the constant polynomials, the embedding `F_Q -> F_{Q^l}` is
//! the identity on indices, and the index of an element of `F_{p^e}` built
//! as `F_p -> F_{p^e} -> F_{p^{el}}` is always its base-`p` digit vector.
//!
//! Multiplication uses log/antilog tables and addition uses Zech logarithms,
//! so both are O(1) table lookups after construction.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest field order for which tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 22;

/// Fields at or below this order are self-tested exhaustively on construction.
const EXHAUSTIVE_SELF_TEST: u32 = 256;

const NO_LOG: u32 = u32::MAX;

/// A field element, identified by its index in the fixed vector representation.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {0} exceeds the supported maximum {MAX_FIELD_ORDER}")]
    TooLarge(u64),
    #[error("defining polynomial must be monic of degree >= 1 with coefficients in the base field")]
    BadPolynomial,
    #[error("defining polynomial is reducible")]
    Reducible,
    #[error("malformed field spec {0:?}, expected \"p^e\"")]
    BadSpec(String),
    #[error("expected {expected} basis elements, got {got}")]
    BasisLength { expected: usize, got: usize },
    #[error("basis is not linearly independent over the base field")]
    DependentBasis,
    #[error("element index {0} is outside the field")]
    OutOfRange(u32),
    #[error("expected {expected} projections, got {got}")]
    ProjectionLength { expected: usize, got: usize },
    #[error("extension field was not built over the given base field")]
    NotAnExtension,
    #[error("trace of element {0} is not in the base field; tower construction is broken")]
    TraceOutsideBase(u32),
    #[error("field self-test failed: {0}")]
    SelfTest(String),
}

/// Parses a field spec string of the form `"p^e"` (or a bare prime `"p"`).
pub fn parse_field_spec(spec: &str) -> Result<(u32, u32), FieldError> {
    let bad = || FieldError::BadSpec(spec.to_owned());
    let trimmed = spec.trim();
    let (p, e) = match trimmed.split_once('^') {
        Some((p, e)) => (p.trim(), e.trim()),
        None => (trimmed, "1"),
    };
    let p: u32 = p.parse().map_err(|_| bad())?;
    let e: u32 = e.parse().map_err(|_| bad())?;
    if e == 0 {
        return Err(FieldError::ZeroDegree);
    }
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    checked_order(p as u64, e)?;
    Ok((p, e))
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn checked_order(base: u64, degree: u32) -> Result<u64, FieldError> {
    let mut order = 1u64;
    for _ in 0..degree {
        order = order.saturating_mul(base);
        if order > MAX_FIELD_ORDER {
            return Err(FieldError::TooLarge(order));
        }
    }
    Ok(order)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Arithmetic of the field a new extension is built over, used only while
/// constructing tables and for the self-test.
#[derive(Clone, Copy)]
enum Coeffs<'a> {
    Prime(u32),
    Field(&'a Field),
}

impl Coeffs<'_> {
    fn order(self) -> u32 {
        match self {
            Coeffs::Prime(p) => p,
            Coeffs::Field(f) => f.order,
        }
    }

    fn add(self, a: u32, b: u32) -> u32 {
        match self {
            Coeffs::Prime(p) => (a + b) % p,
            Coeffs::Field(f) => f.add(Elem(a), Elem(b)).0,
        }
    }

    fn neg(self, a: u32) -> u32 {
        match self {
            Coeffs::Prime(p) => (p - a) % p,
            Coeffs::Field(f) => f.neg(Elem(a)).0,
        }
    }

    fn mul(self, a: u32, b: u32) -> u32 {
        match self {
            Coeffs::Prime(p) => ((a as u64 * b as u64) % p as u64) as u32,
            Coeffs::Field(f) => f.mul(Elem(a), Elem(b)).0,
        }
    }
}

/// Polynomial arithmetic modulo a monic polynomial, on coefficient vectors.
struct Quotient<'a> {
    coeffs: Coeffs<'a>,
    modulus: &'a [u32],
}

impl Quotient<'_> {
    fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let d = self.degree();
        let mut prod = vec![0u32; 2 * d];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj != 0 {
                    prod[i + j] = self.coeffs.add(prod[i + j], self.coeffs.mul(ai, bj));
                }
            }
        }
        // modulus is monic: θ^d = -Σ m_i θ^i
        for top in (d..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            let nc = self.coeffs.neg(c);
            for (i, &mi) in self.modulus[..d].iter().enumerate() {
                if mi != 0 {
                    let k = top - d + i;
                    prod[k] = self.coeffs.add(prod[k], self.coeffs.mul(nc, mi));
                }
            }
        }
        prod.truncate(d);
        prod
    }

    fn pow(&self, a: &[u32], mut e: u64) -> Vec<u32> {
        let mut result = vec![0u32; self.degree()];
        result[0] = 1;
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }
}

fn digits(mut index: u32, radix: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for d in out.iter_mut() {
        *d = index % radix;
        index /= radix;
    }
    out
}

fn undigits(ds: &[u32], radix: u32) -> u32 {
    ds.iter().rev().fold(0u32, |acc, &d| acc * radix + d)
}

/// A finite field with precomputed log, antilog and Zech tables.
pub struct Field {
    characteristic: u32,
    order: u32,
    base: Option<Arc<Field>>,
    degree: u32,
    modulus: Vec<Elem>,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    primitive: Elem,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("characteristic", &self.characteristic)
            .field("order", &self.order)
            .field("degree", &self.degree)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
            && self.modulus == other.modulus
            && self.base.as_deref() == other.base.as_deref()
    }
}

impl Eq for Field {}

impl Field {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Arc<Field>, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        checked_order(p as u64, 1)?;
        Self::build(p, None, Vec::new(), Coeffs::Prime(p))
    }

    /// `F_{p^e}` with the default defining polynomial over `F_p`.
    pub fn gf(p: u32, e: u32) -> Result<Arc<Field>, FieldError> {
        if e == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let prime = Self::prime(p)?;
        if e == 1 {
            return Ok(prime);
        }
        Self::extension(&prime, e)
    }

    /// `F_{p^e}` defined by an explicit monic polynomial over `F_p`, given as
    /// an ascending coefficient list (length `e + 1`).
    pub fn gf_with_polynomial(p: u32, poly: &[u32]) -> Result<Arc<Field>, FieldError> {
        let prime = Self::prime(p)?;
        let poly: Vec<Elem> = poly.iter().map(|&c| Elem(c)).collect();
        Self::extension_with_polynomial(&prime, &poly)
    }

    /// Builds `F_{p^e}` from a `"p^e"` spec and an optional explicit polynomial.
    pub fn from_spec(spec: &str, poly: Option<&[u32]>) -> Result<Arc<Field>, FieldError> {
        let (p, e) = parse_field_spec(spec)?;
        match poly {
            Some(poly) => {
                if poly.len() != e as usize + 1 {
                    return Err(FieldError::BadPolynomial);
                }
                if e == 1 {
                    // a monic linear polynomial adds nothing over F_p
                    return Self::prime(p);
                }
                Self::gf_with_polynomial(p, poly)
            }
            None => Self::gf(p, e),
        }
    }

    /// Degree-`degree` extension of `base` with the default defining polynomial:
    /// the first monic polynomial, in ascending index order of its lower
    /// coefficients, whose root generates the multiplicative group.
    pub fn extension(base: &Arc<Field>, degree: u32) -> Result<Arc<Field>, FieldError> {
        if degree == 0 {
            return Err(FieldError::ZeroDegree);
        }
        if degree == 1 {
            return Ok(base.clone());
        }
        let order = checked_order(base.order as u64, degree)?;
        let q = base.order;
        let d = degree as usize;
        let coeffs = Coeffs::Field(base);
        let factors = prime_factors(order - 1);
        for lower in 1..order {
            let mut modulus = digits(lower as u32, q, d);
            modulus.push(1);
            let ring = Quotient { coeffs, modulus: &modulus };
            let mut theta = vec![0u32; d];
            theta[1] = 1;
            let one = ring.pow(&theta, order - 1);
            if one[0] != 1 || one[1..].iter().any(|&c| c != 0) {
                continue;
            }
            let primitive = factors.iter().all(|&r| {
                let v = ring.pow(&theta, (order - 1) / r);
                v[0] != 1 || v[1..].iter().any(|&c| c != 0)
            });
            if primitive {
                return Self::build(base.characteristic, Some(base.clone()), modulus, coeffs);
            }
        }
        unreachable!("every finite field has a primitive polynomial of each degree")
    }

    /// Extension of `base` defined by an explicit monic irreducible polynomial,
    /// given as an ascending list of base-field coefficients.
    pub fn extension_with_polynomial(
        base: &Arc<Field>,
        poly: &[Elem],
    ) -> Result<Arc<Field>, FieldError> {
        if poly.len() < 2
            || poly.last() != Some(&Elem::ONE)
            || poly.iter().any(|c| !base.contains(*c))
        {
            return Err(FieldError::BadPolynomial);
        }
        let degree = (poly.len() - 1) as u32;
        checked_order(base.order as u64, degree)?;
        let modulus: Vec<u32> = poly.iter().map(|c| c.0).collect();
        if !is_irreducible(Coeffs::Field(base), &modulus) {
            return Err(FieldError::Reducible);
        }
        if degree == 1 {
            // F_Q[θ]/(θ - c) is F_Q itself
            return Ok(base.clone());
        }
        Self::build(base.characteristic, Some(base.clone()), modulus, Coeffs::Field(base))
    }

    fn build(
        characteristic: u32,
        base: Option<Arc<Field>>,
        modulus: Vec<u32>,
        coeffs: Coeffs<'_>,
    ) -> Result<Arc<Field>, FieldError> {
        let q = coeffs.order();
        let d = modulus.len().saturating_sub(1).max(1);
        let order = checked_order(q as u64, d as u32)? as u32;
        let n1 = (order - 1) as usize;

        // multiplication of coefficient vectors, or plain integers mod p
        let poly_modulus = modulus.clone();
        let mul = |a: u32, b: u32| -> u32 {
            match coeffs {
                Coeffs::Prime(p) if poly_modulus.is_empty() => ((a as u64 * b as u64) % p as u64) as u32,
                _ => {
                    let ring = Quotient { coeffs, modulus: &poly_modulus };
                    undigits(&ring.mul(&digits(a, q, d), &digits(b, q, d)), q)
                }
            }
        };

        let mut exp = vec![0u32; n1.max(1)];
        let mut log = vec![NO_LOG; order as usize];
        let mut primitive = None;
        'candidates: for g in 1..order {
            log.iter_mut().for_each(|l| *l = NO_LOG);
            let mut x = 1u32;
            for (i, slot) in exp.iter_mut().enumerate().take(n1) {
                if log[x as usize] != NO_LOG {
                    continue 'candidates;
                }
                *slot = x;
                log[x as usize] = i as u32;
                x = mul(x, g);
            }
            if x == 1 {
                primitive = Some(g);
                break;
            }
        }
        let primitive = primitive.ok_or_else(|| {
            FieldError::SelfTest("no primitive element found; modulus is reducible".into())
        })?;

        let add_coeffwise = |a: u32, b: u32| -> u32 {
            let da = digits(a, q, d);
            let db = digits(b, q, d);
            let sum: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| coeffs.add(x, y)).collect();
            undigits(&sum, q)
        };
        let mut zech = vec![NO_LOG; n1.max(1)];
        for i in 0..n1 {
            let v = add_coeffwise(1, exp[i]);
            zech[i] = if v == 0 { NO_LOG } else { log[v as usize] };
        }

        let field = Field {
            characteristic,
            order,
            degree: if base.is_some() { d as u32 } else { 1 },
            base,
            modulus: modulus.iter().map(|&c| Elem(c)).collect(),
            exp,
            log,
            zech,
            primitive: Elem(primitive),
        };
        field.self_test(&mul, &add_coeffwise)?;
        Ok(Arc::new(field))
    }

    fn self_test(
        &self,
        slow_mul: &dyn Fn(u32, u32) -> u32,
        slow_add: &dyn Fn(u32, u32) -> u32,
    ) -> Result<(), FieldError> {
        let n = self.order;
        let pairs: Box<dyn Iterator<Item = (u32, u32)>> = if n <= EXHAUSTIVE_SELF_TEST {
            Box::new((0..n).flat_map(move |a| (0..n).map(move |b| (a, b))))
        } else {
            // deterministic sample
            let mut state = 0x9e37_79b9_7f4a_7c15u64;
            Box::new((0..4096).map(move |_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let a = ((state >> 33) % n as u64) as u32;
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let b = ((state >> 33) % n as u64) as u32;
                (a, b)
            }))
        };
        let g = self.primitive;
        for (a, b) in pairs {
            let (ea, eb) = (Elem(a), Elem(b));
            if self.mul(ea, eb).0 != slow_mul(a, b) {
                return Err(FieldError::SelfTest(format!("product {a}*{b}")));
            }
            if self.add(ea, eb).0 != slow_add(a, b) {
                return Err(FieldError::SelfTest(format!("sum {a}+{b}")));
            }
            if self.add(ea, eb) != self.add(eb, ea) || self.mul(ea, eb) != self.mul(eb, ea) {
                return Err(FieldError::SelfTest(format!("commutativity at {a},{b}")));
            }
            let lhs = self.mul(ea, self.add(eb, g));
            let rhs = self.add(self.mul(ea, eb), self.mul(ea, g));
            if lhs != rhs {
                return Err(FieldError::SelfTest(format!("distributivity at {a},{b}")));
            }
            if !self.is_zero_sum(ea) {
                return Err(FieldError::SelfTest(format!("additive inverse of {a}")));
            }
            if a != 0 && self.mul(ea, self.inv(ea)) != Elem::ONE {
                return Err(FieldError::SelfTest(format!("multiplicative inverse of {a}")));
            }
        }
        Ok(())
    }

    fn is_zero_sum(&self, a: Elem) -> bool {
        self.add(a, self.neg(a)).is_zero()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }

    /// Degree over the field this one was built on (1 for a prime field).
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn base(&self) -> Option<&Arc<Field>> {
        self.base.as_ref()
    }

    /// Ascending coefficients of the monic defining polynomial over [`Field::base`];
    /// empty for a prime field.
    pub fn modulus(&self) -> &[Elem] {
        &self.modulus
    }

    /// The generator of the multiplicative group used for the tables.
    pub fn primitive(&self) -> Elem {
        self.primitive
    }

    /// The element `θ` adjoined to the base field (the primitive element for a prime field).
    pub fn generator(&self) -> Elem {
        match &self.base {
            Some(b) => Elem(b.order),
            None => self.primitive,
        }
    }

    #[inline]
    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.order
    }

    pub fn check(&self, a: Elem) -> Result<Elem, FieldError> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(FieldError::OutOfRange(a.0))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.order).map(Elem)
    }

    /// Element from a small integer, reduced into the prime subfield.
    pub fn from_int(&self, v: i64) -> Elem {
        let p = self.characteristic as i64;
        Elem(v.rem_euclid(p) as u32)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let n1 = self.order - 1;
        let la = self.log[a.0 as usize];
        let lb = self.log[b.0 as usize];
        let diff = if lb >= la { lb - la } else { lb + n1 - la };
        let z = self.zech[diff as usize];
        if z == NO_LOG {
            return Elem::ZERO;
        }
        Elem(self.exp[((la as u64 + z as u64) % n1 as u64) as usize])
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if a.0 == 0 || self.characteristic == 2 {
            return a;
        }
        let n1 = self.order - 1;
        let l = self.log[a.0 as usize] as u64 + (n1 / 2) as u64;
        Elem(self.exp[(l % n1 as u64) as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let n1 = (self.order - 1) as u64;
        let l = self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64;
        Elem(self.exp[(l % n1) as usize])
    }

    /// Multiplicative inverse.
    ///
    /// Panics on zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(!a.is_zero(), "inverse of zero");
        let n1 = self.order - 1;
        let l = self.log[a.0 as usize];
        Elem(self.exp[((n1 - l) % n1) as usize])
    }

    #[inline]
    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let n1 = (self.order - 1) as u64;
        let l = (self.log[a.0 as usize] as u64 * (e % n1)) % n1;
        Elem(self.exp[l as usize])
    }

    pub fn sum<I: IntoIterator<Item = Elem>>(&self, items: I) -> Elem {
        items.into_iter().fold(Elem::ZERO, |acc, x| self.add(acc, x))
    }

    /// Coefficients of `a` over [`Field::base`] (just `[a]` for a prime field).
    pub fn coefficients(&self, a: Elem) -> Vec<Elem> {
        match &self.base {
            Some(b) => digits(a.0, b.order, self.degree as usize).into_iter().map(Elem).collect(),
            None => vec![a],
        }
    }

    /// Inverse of [`Field::coefficients`]; missing trailing coefficients are zero.
    pub fn from_coefficients(&self, cs: &[Elem]) -> Elem {
        match &self.base {
            Some(b) => {
                debug_assert!(cs.len() <= self.degree as usize);
                Elem(cs.iter().rev().fold(0u32, |acc, c| acc * b.order + c.0))
            }
            None => cs.first().copied().unwrap_or(Elem::ZERO),
        }
    }
}

fn is_irreducible(coeffs: Coeffs<'_>, modulus: &[u32]) -> bool {
    let d = modulus.len() - 1;
    if d == 1 {
        return true;
    }
    let q = coeffs.order() as u64;
    // trial division by every monic polynomial of degree <= d/2
    for deg in 1..=d / 2 {
        let count = q.pow(deg as u32);
        for lower in 0..count {
            let mut divisor = digits(lower as u32, q as u32, deg);
            divisor.push(1);
            if poly_rem(coeffs, modulus, &divisor).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(coeffs: Coeffs<'_>, num: &[u32], monic: &[u32]) -> Vec<u32> {
    let mut r = num.to_vec();
    let dd = monic.len() - 1;
    while r.len() > dd {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dd;
        if lead != 0 {
            let nl = coeffs.neg(lead);
            for (i, &c) in monic.iter().enumerate() {
                r[shift + i] = coeffs.add(r[shift + i], coeffs.mul(nl, c));
            }
        }
        r.pop();
    }
    r
}

/// The pair `F_Q ⊂ F_{Q^l}` with a basis `ζ` of the extension over the base
/// and its trace-dual basis `ν`, so that `tr(ζ_s ν_j) = δ_{s,j}` and every
/// `β = Σ_s tr(ζ_s β) ν_s`.
#[derive(Clone)]
pub struct ExtensionTower {
    base: Arc<Field>,
    ext: Arc<Field>,
    degree: usize,
    zeta: Vec<Elem>,
    nu: Vec<Elem>,
    traces: Vec<Elem>,
}

impl fmt::Debug for ExtensionTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExtensionTower")
            .field("base", &self.base)
            .field("ext", &self.ext)
            .field("zeta", &self.zeta)
            .field("nu", &self.nu)
            .finish_non_exhaustive()
    }
}

impl ExtensionTower {
    /// `F_Q ⊂ F_{Q^l}` with the default defining polynomial and the
    /// polynomial basis `{1, θ, ..., θ^{l-1}}`.
    pub fn new(base: Arc<Field>, degree: u32) -> Result<Self, FieldError> {
        let ext = Field::extension(&base, degree)?;
        Self::from_fields(base, ext)
    }

    /// Tower over an already constructed extension, with the polynomial basis.
    pub fn from_fields(base: Arc<Field>, ext: Arc<Field>) -> Result<Self, FieldError> {
        let l = if Arc::ptr_eq(&base, &ext) || *base == *ext { 1 } else { ext.degree as usize };
        let zeta = (0..l)
            .map(|i| {
                let mut cs = vec![Elem::ZERO; l];
                cs[i] = Elem::ONE;
                if l == 1 {
                    Elem::ONE
                } else {
                    ext.from_coefficients(&cs)
                }
            })
            .collect();
        Self::with_basis(base, ext, zeta)
    }

    /// Tower with a caller-chosen basis `ζ`; the dual basis is computed.
    pub fn with_basis(
        base: Arc<Field>,
        ext: Arc<Field>,
        zeta: Vec<Elem>,
    ) -> Result<Self, FieldError> {
        let same = Arc::ptr_eq(&base, &ext) || *base == *ext;
        if !same && ext.base().map(|b| **b != *base).unwrap_or(true) {
            return Err(FieldError::NotAnExtension);
        }
        let degree = if same { 1 } else { ext.degree as usize };
        if zeta.len() != degree {
            return Err(FieldError::BasisLength { expected: degree, got: zeta.len() });
        }
        for z in &zeta {
            ext.check(*z)?;
        }
        let q = base.order as u64;
        let mut traces = Vec::with_capacity(ext.order as usize);
        for b in ext.elements() {
            let mut acc = Elem::ZERO;
            let mut conj = b;
            for _ in 0..degree {
                acc = ext.add(acc, conj);
                conj = ext.pow(conj, q);
            }
            if !base.contains(acc) {
                return Err(FieldError::TraceOutsideBase(b.0));
            }
            traces.push(acc);
        }
        let mut tower = ExtensionTower { base, ext, degree, zeta, nu: Vec::new(), traces };
        tower.nu = tower.dual_basis(&tower.zeta)?;
        Ok(tower)
    }

    pub fn base(&self) -> &Arc<Field> {
        &self.base
    }

    pub fn ext(&self) -> &Arc<Field> {
        &self.ext
    }

    /// Extension degree `l`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn zeta(&self) -> &[Elem] {
        &self.zeta
    }

    pub fn nu(&self) -> &[Elem] {
        &self.nu
    }

    /// `tr(β) = Σ_{i<l} β^{Q^i}`, as a base-field element.
    #[inline]
    pub fn trace(&self, b: Elem) -> Elem {
        self.traces[b.0 as usize]
    }

    /// The dual basis of `zeta`, from the inverse of the trace-form matrix
    /// `(tr(ζ_s ζ_j))` over the base field.
    pub fn dual_basis(&self, zeta: &[Elem]) -> Result<Vec<Elem>, FieldError> {
        let l = self.degree;
        if zeta.len() != l {
            return Err(FieldError::BasisLength { expected: l, got: zeta.len() });
        }
        let base = &self.base;
        let gram = crate::linalg::Matrix::from_fn(l, l, |s, j| {
            self.trace(self.ext.mul(zeta[s], zeta[j]))
        });
        let inv = gram.inverse(base).ok_or(FieldError::DependentBasis)?;
        Ok((0..l)
            .map(|j| {
                self.ext.sum((0..l).map(|k| self.ext.mul(inv.get(j, k), zeta[k])))
            })
            .collect())
    }

    /// `(tr(ζ_1 β), ..., tr(ζ_l β))`.
    pub fn project(&self, b: Elem) -> Vec<Elem> {
        self.zeta.iter().map(|&z| self.trace(self.ext.mul(z, b))).collect()
    }

    /// `Σ_s c_s ν_s`, the inverse of [`ExtensionTower::project`].
    pub fn lift(&self, c: &[Elem]) -> Result<Elem, FieldError> {
        if c.len() != self.degree {
            return Err(FieldError::ProjectionLength { expected: self.degree, got: c.len() });
        }
        for x in c {
            self.base.check(*x)?;
        }
        Ok(self.ext.sum(c.iter().zip(&self.nu).map(|(&cs, &nu)| self.ext.mul(cs, nu))))
    }

    /// The element `γ` with `tr(γ w) = Σ_s c_s tr(ζ_s w)` for all `w`.
    pub fn functional(&self, c: &[Elem]) -> Elem {
        self.ext.sum(c.iter().zip(&self.zeta).map(|(&cs, &z)| self.ext.mul(cs, z)))
    }
}
