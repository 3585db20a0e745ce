//! Interleaved one-point codes and the collaborative decoder, which looks
//! for one error locator shared by all downloaded rows.
//!
//! For a locator excess `t'` and a uniform row bound `α ≥ β_t`, the decoder
//! solves for numerators `N_t ∈ L((g+t'+α)P∞)` and a common locator
//! `Λ ∈ L((g+t')P∞)` with `N_t(P_i) = π_{t,i} Λ(P_i)` for every row and
//! point, then reads off `T_t = N_t / Λ`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{min_pole_candidates, EvalCode};
use crate::curve::{Monomial, RingElement};
use crate::field::{Elem, Field};
use crate::fractional::{FractionalDecoded, FractionalError, FractionalSpec, ProjectedMatrix};
use crate::linalg::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InterleavedError {
    #[error(transparent)]
    Fractional(#[from] FractionalError),
    #[error("an interleaved code needs at least one component")]
    NoComponents,
    #[error("component codes do not share evaluation points and field")]
    ComponentMismatch,
    #[error("row bound {alpha} is below the largest row degree {max_beta}")]
    AlphaTooSmall { alpha: u32, max_beta: u32 },
    #[error("g + t' + α = {total} must stay below the length {n}")]
    ExcessTooLarge { total: u32, n: usize },
    #[error("no nullspace vector has a nonzero locator")]
    NoLocator,
    #[error("locator does not divide the numerators")]
    NotDivisible,
    #[error("decoded word disagrees with the download at column {column}, where the locator does not vanish")]
    UnlocatedError { column: usize },
    #[error("no locator excess in an empty range")]
    EmptyRange,
    #[error("every locator excess failed; last error: {0}")]
    AllFailed(Box<InterleavedError>),
}

/// Row codes stacked over shared evaluation points.
#[derive(Debug, Clone)]
pub struct InterleavedCode {
    components: Vec<EvalCode>,
}

impl InterleavedCode {
    pub fn new(components: Vec<EvalCode>) -> Result<Self, InterleavedError> {
        let first = components.first().ok_or(InterleavedError::NoComponents)?;
        if components[1..]
            .iter()
            .any(|c| c.points() != first.points() || c.field() != first.field())
        {
            return Err(InterleavedError::ComponentMismatch);
        }
        Ok(InterleavedCode { components })
    }

    /// `m` copies of one code.
    pub fn homogeneous(code: EvalCode, m: usize) -> Result<Self, InterleavedError> {
        Self::new(vec![code; m])
    }

    /// The row codes of a fractional spec.
    pub fn from_spec(spec: &FractionalSpec) -> Self {
        InterleavedCode { components: spec.row_codes().to_vec() }
    }

    pub fn components(&self) -> &[EvalCode] {
        &self.components
    }

    pub fn is_homogeneous(&self) -> bool {
        self.components.iter().all(|c| c.beta() == self.components[0].beta())
    }

    /// Whether every row is a codeword of its component.
    pub fn contains(&self, rows: &[Vec<Elem>]) -> bool {
        rows.len() == self.components.len()
            && rows.iter().zip(&self.components).all(|(r, c)| c.interpolate(r).is_ok())
    }
}

/// Parameters of the collaborative decoder for one fractional spec.
#[derive(Debug, Clone)]
pub struct CollabConfig {
    t_excess: u32,
    alpha: u32,
    genus: u32,
    base: Arc<Field>,
    l: usize,
    m: usize,
    n: usize,
    /// Basis of `L((g+t'+α)P∞)`; its first `s'` elements span `L((g+t')P∞)`.
    big_basis: Vec<Monomial>,
    small_len: usize,
    /// `big_eval[j][i] = φ_j(P_i)`.
    big_eval: Matrix,
}

impl CollabConfig {
    /// Configuration with `α = max_t β_t`.
    pub fn new(spec: &FractionalSpec, t_excess: u32) -> Result<Self, InterleavedError> {
        let alpha = *spec.radius_report().betas.iter().max().expect("at least one row");
        Self::with_alpha(spec, t_excess, alpha)
    }

    /// Configuration with `t'` equal to the guaranteed radius.
    pub fn guaranteed(spec: &FractionalSpec) -> Result<Self, InterleavedError> {
        Self::new(spec, spec.radius_report().guaranteed.max(0) as u32)
    }

    pub fn with_alpha(spec: &FractionalSpec, t_excess: u32, alpha: u32) -> Result<Self, InterleavedError> {
        let max_beta = *spec.radius_report().betas.iter().max().expect("at least one row");
        if alpha < max_beta {
            return Err(InterleavedError::AlphaTooSmall { alpha, max_beta });
        }
        let curve = spec.code().curve();
        let genus = curve.genus();
        let n = spec.n();
        let total = genus + t_excess + alpha;
        if total as usize >= n {
            return Err(InterleavedError::ExcessTooLarge { total, n });
        }
        let big_basis = curve.rr_basis(total as i64);
        let small_len = curve.rr_dimension((genus + t_excess) as i64);
        let big_eval = crate::code::evaluation_matrix(spec.tower().base(), &big_basis, spec.code().points());
        Ok(CollabConfig {
            t_excess,
            alpha,
            genus,
            base: spec.tower().base().clone(),
            l: spec.l(),
            m: spec.m(),
            n,
            big_basis,
            small_len,
            big_eval,
        })
    }

    pub fn t_excess(&self) -> u32 {
        self.t_excess
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    /// `s = ℓ((g+t'+α)P∞)`.
    pub fn s(&self) -> usize {
        self.big_basis.len()
    }

    /// `s' = ℓ((g+t')P∞)`.
    pub fn s_prime(&self) -> usize {
        self.small_len
    }

    pub fn numerator_basis(&self) -> &[Monomial] {
        &self.big_basis
    }

    pub fn locator_basis(&self) -> &[Monomial] {
        &self.big_basis[..self.small_len]
    }
}

/// Reported, never asserted: the interleaved decoding radius and success
/// probability quoted for collaborative decoding, for a chosen `c > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// `(n - α - g)·b - c/(a·l + 1)`.
    pub radius: f64,
    /// `1 - q/(q^c (q - 1))` with `q` the base field order.
    pub success_probability: f64,
}

pub fn bound_report(spec: &FractionalSpec, alpha: u32, c: f64) -> BoundReport {
    let q = spec.tower().base().order() as f64;
    let l = spec.l() as f64;
    let ql = q.powf(l);
    let a = (ql - 1.0).ln() / ql.ln();
    let b = l * a / (l * a + 1.0);
    let slack = spec.n() as f64 - alpha as f64 - spec.genus() as f64;
    BoundReport {
        a,
        b,
        c,
        radius: slack * b - c / (a * l + 1.0),
        success_probability: 1.0 - q / (q.powf(c) * (q - 1.0)),
    }
}

/// The stacked system `A`: `l·n` rows and `l·s + s'` columns, block
/// diagonal in `V = (φ_j(P_i))` with a last block column `W_t =
/// -diag(π_t)·W` for the rows `t < m` and zero below.
pub fn build_collab_system(config: &CollabConfig, pi: &ProjectedMatrix) -> Result<Matrix, InterleavedError> {
    let (l, m, n) = (config.l, config.m, config.n);
    if pi.rows() != m || pi.cols() != n {
        return Err(FractionalError::Shape { rows: m, cols: n, got_rows: pi.rows(), got_cols: pi.cols() }.into());
    }
    let f = &*config.base;
    if let Some(x) = (0..m).flat_map(|t| pi.row(t).iter()).find(|x| !f.contains(**x)) {
        return Err(FractionalError::NotInBase(x.0).into());
    }
    let (s, sp) = (config.s(), config.s_prime());
    let v = &config.big_eval;
    let mut a = Matrix::zeros(l * n, l * s + sp);
    for t in 0..l {
        for i in 0..n {
            let r = t * n + i;
            for j in 0..s {
                a.set(r, t * s + j, v.get(j, i));
            }
            if t < m {
                let neg = f.neg(pi.get(t, i));
                for j in 0..sp {
                    a.set(r, l * s + j, f.mul(neg, v.get(j, i)));
                }
            }
        }
    }
    Ok(a)
}

/// Collaborative decoding with a fixed configuration. Nullspace vectors are
/// tried in order of increasing locator pole order; a candidate is accepted
/// only if the locator divides every numerator, the quotients are the
/// virtual projections of one message, and the re-encoded download differs
/// from `pi` only at zeros of the locator.
pub fn collab_decode(
    config: &CollabConfig,
    spec: &FractionalSpec,
    pi: &ProjectedMatrix,
) -> Result<FractionalDecoded, InterleavedError> {
    spec.check_projected(pi)?;
    let system = build_collab_system(config, pi)?;
    let f = &*config.base;
    let curve = spec.code().curve();
    let (l, m) = (config.l, config.m);
    let s = config.s();
    let lambda_cols = l * s..l * s + config.s_prime();
    let candidates = min_pole_candidates(f, system.nullspace(f), lambda_cols.clone());
    if candidates.is_empty() {
        return Err(InterleavedError::NoLocator);
    }
    let bound = (config.genus + config.t_excess) as usize;
    let mut last = InterleavedError::NotDivisible;
    'candidates: for v in candidates {
        let lambda = RingElement::from_basis(config.locator_basis(), &v[lambda_cols.clone()], f);
        let mut rows = Vec::with_capacity(m);
        for t in 0..m {
            let numerator = RingElement::from_basis(&config.big_basis, &v[t * s..(t + 1) * s], f);
            match curve.exact_divide(f, &numerator, &lambda) {
                Ok(q) => rows.push(q),
                Err(_) => {
                    last = InterleavedError::NotDivisible;
                    continue 'candidates;
                }
            }
        }
        let message = match spec.recover_function(&rows) {
            Ok(message) => message,
            Err(e) => {
                last = e.into();
                continue;
            }
        };
        let decoded = match spec.finish(pi, message, bound) {
            Ok(d) => d,
            Err(e) => {
                last = e.into();
                continue;
            }
        };
        let points = spec.code().points();
        if let Some(&column) =
            decoded.corrected_columns.iter().find(|&&i| !curve.evaluate(f, &lambda, points[i]).is_zero())
        {
            last = InterleavedError::UnlocatedError { column };
            continue;
        }
        return Ok(decoded);
    }
    Err(last)
}

/// Result of [`sweep_locator_excess`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepOutcome {
    pub t_excess: u32,
    pub decoded: FractionalDecoded,
}

/// Tries `t'` in ascending order and returns the first success.
pub fn sweep_locator_excess(
    spec: &FractionalSpec,
    t_values: impl IntoIterator<Item = u32>,
    pi: &ProjectedMatrix,
) -> Result<SweepOutcome, InterleavedError> {
    let mut values: Vec<u32> = t_values.into_iter().collect();
    values.sort_unstable();
    values.dedup();
    let mut last = None;
    for t_excess in values {
        let attempt = CollabConfig::new(spec, t_excess).and_then(|c| collab_decode(&c, spec, pi));
        match attempt {
            Ok(decoded) => return Ok(SweepOutcome { t_excess, decoded }),
            Err(e) => last = Some(e),
        }
    }
    match last {
        None => Err(InterleavedError::EmptyRange),
        Some(e) => Err(InterleavedError::AllFailed(Box::new(e))),
    }
}

/// The largest `t'` with `g + t' + max_t β_t < n`, if any.
pub fn max_locator_excess(spec: &FractionalSpec) -> Option<u32> {
    let alpha = *spec.radius_report().betas.iter().max()? as i64;
    let top = spec.n() as i64 - 1 - alpha - spec.genus() as i64;
    (top >= 0).then_some(top as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractional::StoredWord;
    use crate::presets::{hermitian_f64, hermitian_f729, hermitian_f81};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn transmit(spec: &FractionalSpec, rng: &mut ChaCha8Rng, positions: &[usize]) -> (Vec<Elem>, ProjectedMatrix) {
        let ext = spec.tower().ext();
        let f: Vec<Elem> = (0..spec.k()).map(|_| Elem(rng.gen_range(0..ext.order()))).collect();
        let c = spec.code().encode(&f).unwrap();
        let mut w = c.clone();
        for &i in positions {
            w[i] = ext.add(w[i], Elem(rng.gen_range(1..ext.order())));
        }
        (c, spec.project_word(&w).unwrap())
    }

    #[test]
    fn system_shape() {
        let spec = hermitian_f81();
        let config = CollabConfig::new(&spec, 4).unwrap();
        assert_eq!((config.s(), config.s_prime()), (20, 5));
        let pi = ProjectedMatrix::from_rows(vec![vec![Elem::ZERO; 27]]).unwrap();
        let a = build_collab_system(&config, &pi).unwrap();
        assert_eq!((a.rows(), a.cols()), (54, 45));
        // with π = 0 the locator block is free and nothing else is
        let ns = a.nullspace(spec.tower().base());
        assert_eq!(ns.len(), 5);
        assert!(ns.iter().all(|v| v[..40].iter().all(|x| x.is_zero())));
        assert!(a.row(27).iter().skip(40).all(|x| x.is_zero()));
    }

    #[test]
    fn errorless_pairs_lie_in_nullspace() {
        let spec = hermitian_f729();
        let base = spec.tower().base().clone();
        let curve = spec.code().curve().clone();
        let config = CollabConfig::new(&spec, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let ext = spec.tower().ext();
            let f: Vec<Elem> = (0..spec.k()).map(|_| Elem(rng.gen_range(0..ext.order()))).collect();
            let pi = spec.project_word(&spec.code().encode(&f).unwrap()).unwrap();
            let a = build_collab_system(&config, &pi).unwrap();
            let lc: Vec<Elem> = (0..config.s_prime()).map(|_| Elem(rng.gen_range(0..9))).collect();
            let lambda = RingElement::from_basis(config.locator_basis(), &lc, &base);
            let mut v = Vec::new();
            for t in 0..spec.l() {
                if t < spec.m() {
                    let prod = curve.mul(&base, &spec.apply_t(&f, t).unwrap(), &lambda);
                    v.extend(prod.coordinates(config.numerator_basis()).unwrap());
                } else {
                    v.extend(std::iter::repeat_n(Elem::ZERO, config.s()));
                }
            }
            v.extend(lc);
            assert!(a.mul_vec(&base, &v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn agrees_with_fractional_within_radius() {
        for spec in [hermitian_f64(), hermitian_f81(), hermitian_f729()] {
            let config = CollabConfig::guaranteed(&spec).unwrap();
            let r = spec.radius_report().guaranteed as usize;
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            for _ in 0..30 {
                let mut pos: Vec<usize> = (0..spec.n()).collect();
                for i in 0..r {
                    let j = rng.gen_range(i..pos.len());
                    pos.swap(i, j);
                }
                let (c, pi) = transmit(&spec, &mut rng, &pos[..r]);
                let collab = collab_decode(&config, &spec, &pi).unwrap();
                let frac = spec.fractional_decode(&pi).unwrap();
                assert_eq!(collab.codeword, c);
                assert_eq!(collab, frac);
            }
        }
    }

    #[test]
    fn sweep_behaviour() {
        let spec = hermitian_f729();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let (c, pi) = transmit(&spec, &mut rng, &[]);
        let out = sweep_locator_excess(&spec, 0..5, &pi).unwrap();
        assert_eq!(out.t_excess, 0);
        assert_eq!(out.decoded.codeword, c);
        assert_eq!(sweep_locator_excess(&spec, [], &pi).unwrap_err(), InterleavedError::EmptyRange);
        let (c, pi) = transmit(&spec, &mut rng, &[1, 4, 9, 16, 25]);
        let out = sweep_locator_excess(&spec, 0..=spec.genus() + 3, &pi).unwrap();
        assert_eq!(out.decoded.codeword, c);
    }

    #[test]
    fn bounds_are_reported() {
        let spec = hermitian_f729();
        let b = bound_report(&spec, 12, 1.0);
        assert!(b.a > 0.99 && b.a < 1.0);
        assert!((b.b - 3.0 * b.a / (3.0 * b.a + 1.0)).abs() < 1e-12);
        assert!((b.success_probability - (1.0 - 9.0 / (9.0 * 8.0))).abs() < 1e-12);
        assert_eq!(max_locator_excess(&spec), Some(11));
    }

    #[test]
    fn interleaved_membership() {
        let spec = hermitian_f64();
        let code = InterleavedCode::from_spec(&spec);
        assert!(code.is_homogeneous());
        let f: Vec<Elem> = vec![Elem(5), Elem(40)];
        let w = spec.code().encode(&f).unwrap();
        let pi = spec.project_received(&StoredWord::new(spec.tower(), &w).unwrap()).unwrap();
        let rows: Vec<Vec<Elem>> = (0..2).map(|t| pi.row(t).to_vec()).collect();
        assert!(code.contains(&rows));
        let mut bad = rows.clone();
        bad[1][0] = spec.tower().base().add(bad[1][0], Elem::ONE);
        assert!(!code.contains(&bad));
    }
}
