//! One-point evaluation codes `C(D, βP∞)` and their unique decoders.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{AffinePoint, CurveModel, Monomial, RingElement};
use crate::field::{Elem, Field};
use crate::linalg::Matrix;

/// Exhaustive searches are refused above this many codewords.
pub const BRUTE_FORCE_LIMIT: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("divisor degree {beta} must be less than the code length {n}")]
    BetaTooLarge { beta: u32, n: usize },
    #[error("evaluation point {0} is not on the curve")]
    PointNotOnCurve(AffinePoint),
    #[error("evaluation point {0} appears twice")]
    DuplicatePoint(AffinePoint),
    #[error("expected a vector of length {expected}, got {got}")]
    Length { expected: usize, got: usize },
    #[error("element index {0} is outside the code's field")]
    OutOfRange(u32),
    #[error("no information set in the given subset")]
    NoInformationSet,
    #[error("word is not a codeword")]
    NotACodeword,
    #[error("exhaustive search over {0} codewords exceeds the limit")]
    TooLarge(u64),
}

/// Why a decoder gave up. Failures are always explicit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeFailure {
    #[error("expected a received word of length {expected}, got {got}")]
    Length { expected: usize, got: usize },
    #[error("key equation has no solution with a nonzero locator")]
    NoLocator,
    #[error("locator does not divide the numerator")]
    NotDivisible,
    #[error("decoded word is {distance} away from the received word, beyond the bound {bound}")]
    TooFar { distance: usize, bound: usize },
    #[error("received symbol {0} is outside the code's field")]
    OutOfRange(u32),
    #[error("more than one nearest codeword")]
    Ambiguous,
    #[error("exhaustive search over {0} codewords exceeds the limit")]
    TooLarge(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decoded {
    pub codeword: Vec<Elem>,
    /// Coefficients of the decoded function in the code's monomial basis.
    pub message: Vec<Elem>,
}

/// `k` column positions whose generator-matrix columns are independent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InformationSet(pub Vec<usize>);

impl InformationSet {
    pub fn indices(&self) -> &[usize] {
        &self.0
    }
}

/// Evaluations of `basis` at `points`: a `|basis| × |points|` matrix.
pub fn evaluation_matrix(
    field: &Field,
    basis: &[Monomial],
    points: &[AffinePoint],
) -> Matrix {
    Matrix::from_fn(basis.len(), points.len(), |r, c| {
        let m = basis[r];
        field.mul(field.pow(points[c].x, m.x as u64), field.pow(points[c].y, m.y as u64))
    })
}

pub fn hamming_distance(a: &[Elem], b: &[Elem]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// The code `ev(L(βP∞)) ⊆ field^n` on a curve, with `field` either the
/// curve's base field or an extension of it.
#[derive(Debug, Clone)]
pub struct EvalCode {
    curve: Arc<CurveModel>,
    field: Arc<Field>,
    points: Vec<AffinePoint>,
    beta: u32,
    basis: Vec<Monomial>,
    generator: Matrix,
    info_set: InformationSet,
    locator: LocatorTables,
}

/// Evaluation tables for the key equation `λ(P_i) w_i = μ(P_i)`.
#[derive(Debug, Clone)]
struct LocatorTables {
    tau: i64,
    lambda_basis: Vec<Monomial>,
    mu_basis: Vec<Monomial>,
    lambda_eval: Matrix,
    mu_eval: Matrix,
}

impl EvalCode {
    pub fn new(
        curve: Arc<CurveModel>,
        field: Arc<Field>,
        points: Vec<AffinePoint>,
        beta: u32,
    ) -> Result<Self, CodeError> {
        let n = points.len();
        if beta as usize >= n {
            return Err(CodeError::BetaTooLarge { beta, n });
        }
        let mut seen = std::collections::HashSet::new();
        for &pt in &points {
            if !field.contains(pt.x) || !field.contains(pt.y) || !curve.contains_point(&field, pt) {
                return Err(CodeError::PointNotOnCurve(pt));
            }
            if !seen.insert(pt) {
                return Err(CodeError::DuplicatePoint(pt));
            }
        }
        let basis = curve.rr_basis(beta as i64);
        let generator = evaluation_matrix(&field, &basis, &points);

        let g = curve.genus() as i64;
        let tau = (n as i64 - beta as i64 - 1 + g).div_euclid(2);
        let lambda_basis = curve.rr_basis(tau);
        let mu_basis = curve.rr_basis(tau + beta as i64);
        let locator = LocatorTables {
            tau,
            lambda_eval: evaluation_matrix(&field, &lambda_basis, &points),
            mu_eval: evaluation_matrix(&field, &mu_basis, &points),
            lambda_basis,
            mu_basis,
        };

        let mut code = EvalCode {
            curve,
            field,
            points,
            beta,
            basis,
            generator,
            info_set: InformationSet(Vec::new()),
            locator,
        };
        // β < n makes ev injective on L(βP∞), so a full information set exists
        code.info_set = code.find_information_set(None)?;
        Ok(code)
    }

    pub fn curve(&self) -> &Arc<CurveModel> {
        &self.curve
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn points(&self) -> &[AffinePoint] {
        &self.points
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn information_set(&self) -> &InformationSet {
        &self.info_set
    }

    /// `⌊(n - β - 1 - g)/2⌋`: errors the locator decoder always corrects.
    pub fn guaranteed_radius(&self) -> i64 {
        self.locator.tau - self.curve.genus() as i64
    }

    /// `⌊(n - β - 1)/2⌋`, half the designed distance.
    pub fn half_distance_radius(&self) -> i64 {
        (self.len() as i64 - self.beta as i64 - 1).div_euclid(2)
    }

    /// Number of codewords, saturating.
    pub fn size(&self) -> u64 {
        (self.field.order() as u64).saturating_pow(self.dimension() as u32)
    }

    fn check_word(&self, w: &[Elem]) -> Result<(), CodeError> {
        if w.len() != self.len() {
            return Err(CodeError::Length { expected: self.len(), got: w.len() });
        }
        if let Some(x) = w.iter().find(|x| !self.field.contains(**x)) {
            return Err(CodeError::OutOfRange(x.0));
        }
        Ok(())
    }

    pub fn encode(&self, message: &[Elem]) -> Result<Vec<Elem>, CodeError> {
        if message.len() != self.dimension() {
            return Err(CodeError::Length { expected: self.dimension(), got: message.len() });
        }
        if let Some(x) = message.iter().find(|x| !self.field.contains(**x)) {
            return Err(CodeError::OutOfRange(x.0));
        }
        Ok(self.generator.left_mul(&self.field, message))
    }

    /// The function `Σ c_i h_i` for message coefficients `c`.
    pub fn function(&self, message: &[Elem]) -> RingElement {
        RingElement::from_basis(&self.basis, message, &self.field)
    }

    /// Message coefficients of a function in `L(βP∞)`, if it lies there.
    pub fn message_of(&self, f: &RingElement) -> Option<Vec<Elem>> {
        f.coordinates(&self.basis)
    }

    /// Greedy column selection in ascending index order, optionally
    /// restricted to `within`.
    pub fn find_information_set(&self, within: Option<&[usize]>) -> Result<InformationSet, CodeError> {
        let k = self.dimension();
        let candidates: Vec<usize> = match within {
            Some(w) => {
                let mut v = w.to_vec();
                v.sort_unstable();
                v.dedup();
                if let Some(&bad) = v.iter().find(|&&i| i >= self.len()) {
                    return Err(CodeError::Length { expected: self.len(), got: bad + 1 });
                }
                v
            }
            None => (0..self.len()).collect(),
        };
        let f = &*self.field;
        // echelon basis of chosen columns, each with its pivot row
        let mut echelon: Vec<(usize, Vec<Elem>)> = Vec::new();
        let mut chosen = Vec::new();
        for c in candidates {
            if chosen.len() == k {
                break;
            }
            let mut v = self.generator.column(c);
            for (pivot, row) in &echelon {
                let factor = v[*pivot];
                if !factor.is_zero() {
                    let nf = f.neg(factor);
                    for (x, &r) in v.iter_mut().zip(row) {
                        *x = f.add(*x, f.mul(nf, r));
                    }
                }
            }
            if let Some(pivot) = v.iter().position(|x| !x.is_zero()) {
                let inv = f.inv(v[pivot]);
                v.iter_mut().for_each(|x| *x = f.mul(*x, inv));
                echelon.push((pivot, v));
                chosen.push(c);
            }
        }
        if chosen.len() < k {
            return Err(CodeError::NoInformationSet);
        }
        Ok(InformationSet(chosen))
    }

    /// Message coefficients of a codeword, read off an information set and
    /// checked against the whole word.
    pub fn interpolate(&self, word: &[Elem]) -> Result<Vec<Elem>, CodeError> {
        self.check_word(word)?;
        let idx = self.info_set.indices();
        let sub = self.generator.select_columns(idx).transpose();
        let rhs: Vec<Elem> = idx.iter().map(|&i| word[i]).collect();
        let message = sub.solve(&self.field, &rhs).map_err(|_| CodeError::NotACodeword)?;
        if self.encode(&message)? != word {
            return Err(CodeError::NotACodeword);
        }
        Ok(message)
    }

    /// Error-locator decoding: find `λ ∈ L(τP∞)`, `μ ∈ L((τ+β)P∞)` with
    /// `λ(P_i) w_i = μ(P_i)` for all `i`, then `f = μ/λ`. Candidate locators
    /// are tried in order of increasing pole order.
    pub fn decode_basic(&self, w: &[Elem]) -> Result<Decoded, DecodeFailure> {
        if w.len() != self.len() {
            return Err(DecodeFailure::Length { expected: self.len(), got: w.len() });
        }
        if let Some(x) = w.iter().find(|x| !self.field.contains(**x)) {
            return Err(DecodeFailure::OutOfRange(x.0));
        }
        let bound = self.half_distance_radius().max(0) as usize;
        if self.locator.tau < self.curve.genus() as i64 {
            return match self.interpolate(w) {
                Ok(message) => Ok(Decoded { codeword: w.to_vec(), message }),
                Err(_) => Err(DecodeFailure::NoLocator),
            };
        }
        let f = &*self.field;
        let lt = &self.locator;
        let (sl, sm) = (lt.lambda_basis.len(), lt.mu_basis.len());
        let system = Matrix::from_fn(self.len(), sl + sm, |i, j| {
            if j < sl {
                f.mul(lt.lambda_eval.get(j, i), w[i])
            } else {
                f.neg(lt.mu_eval.get(j - sl, i))
            }
        });
        let nullspace = system.nullspace(f);
        let candidates = min_pole_candidates(f, nullspace, 0..sl);
        if candidates.is_empty() {
            return Err(DecodeFailure::NoLocator);
        }
        let mut last = DecodeFailure::NotDivisible;
        for v in candidates {
            let lambda = RingElement::from_basis(&lt.lambda_basis, &v[..sl], f);
            let mu = RingElement::from_basis(&lt.mu_basis, &v[sl..], f);
            let Ok(quotient) = self.curve.exact_divide(f, &mu, &lambda) else {
                last = DecodeFailure::NotDivisible;
                continue;
            };
            let Some(message) = self.message_of(&quotient) else {
                last = DecodeFailure::NotDivisible;
                continue;
            };
            let codeword = self.generator.left_mul(f, &message);
            let distance = hamming_distance(&codeword, w);
            if distance > bound {
                last = DecodeFailure::TooFar { distance, bound };
                continue;
            }
            return Ok(Decoded { codeword, message });
        }
        Err(last)
    }

    /// Visits every codeword with its message, updating incrementally.
    fn for_each_codeword(&self, mut visit: impl FnMut(&[Elem], &[Elem])) -> Result<(), CodeError> {
        let size = self.size();
        if size > BRUTE_FORCE_LIMIT {
            return Err(CodeError::TooLarge(size));
        }
        let f = &*self.field;
        let q = f.order();
        let k = self.dimension();
        let mut message = vec![Elem::ZERO; k];
        let mut word = vec![Elem::ZERO; self.len()];
        loop {
            visit(&message, &word);
            let mut j = 0;
            loop {
                if j == k {
                    return Ok(());
                }
                let old = message[j];
                let new = if old.0 + 1 == q { Elem::ZERO } else { Elem(old.0 + 1) };
                let delta = f.sub(new, old);
                for (x, &g) in word.iter_mut().zip(self.generator.row(j)) {
                    *x = f.add(*x, f.mul(delta, g));
                }
                message[j] = new;
                if !new.is_zero() {
                    break;
                }
                j += 1;
            }
        }
    }

    /// Exact minimum distance by enumeration.
    pub fn min_distance_bruteforce(&self) -> Result<usize, CodeError> {
        let mut best = usize::MAX;
        self.for_each_codeword(|m, w| {
            if m.iter().any(|x| !x.is_zero()) {
                best = best.min(w.iter().filter(|x| !x.is_zero()).count());
            }
        })?;
        Ok(best)
    }

    /// Nearest codeword by enumeration; ties are reported as ambiguous.
    pub fn decode_bruteforce(&self, w: &[Elem]) -> Result<Decoded, DecodeFailure> {
        if w.len() != self.len() {
            return Err(DecodeFailure::Length { expected: self.len(), got: w.len() });
        }
        if let Some(x) = w.iter().find(|x| !self.field.contains(**x)) {
            return Err(DecodeFailure::OutOfRange(x.0));
        }
        let mut best: Option<(usize, Vec<Elem>, Vec<Elem>)> = None;
        let mut tie = false;
        self.for_each_codeword(|m, c| {
            let d = hamming_distance(c, w);
            match &best {
                Some((bd, _, _)) if d > *bd => {}
                Some((bd, _, _)) if d == *bd => tie = true,
                _ => {
                    best = Some((d, c.to_vec(), m.to_vec()));
                    tie = false;
                }
            }
        })
        .map_err(|e| match e {
            CodeError::TooLarge(s) => DecodeFailure::TooLarge(s),
            _ => DecodeFailure::NoLocator,
        })?;
        match best {
            Some(_) if tie => Err(DecodeFailure::Ambiguous),
            Some((_, codeword, message)) => Ok(Decoded { codeword, message }),
            None => Err(DecodeFailure::Ambiguous),
        }
    }
}

/// Nullspace vectors with a nonzero locator part, one per achievable
/// locator degree, ordered by increasing pole order of the locator. The
/// locator occupies the coordinates `locator`, whose basis is sorted by pole
/// order.
pub(crate) fn min_pole_candidates(
    field: &Field,
    nullspace: Vec<Vec<Elem>>,
    locator: std::ops::Range<usize>,
) -> Vec<Vec<Elem>> {
    if nullspace.is_empty() {
        return Vec::new();
    }
    let mut m = Matrix::from_rows(&nullspace);
    let order: Vec<usize> = locator.clone().rev().collect();
    let pivots = m.rref_with_order(field, &order);
    let mut out: Vec<(usize, Vec<Elem>)> = pivots
        .iter()
        .enumerate()
        .map(|(r, &c)| (c, m.row(r).to_vec()))
        .collect();
    out.sort_by_key(|(c, _)| *c);
    out.into_iter().map(|(_, v)| v).collect()
}
