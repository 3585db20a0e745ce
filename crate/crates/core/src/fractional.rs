//! Fractional decoding: a codeword of `C_l(βP∞)` over `F_{Q^l}` is decoded
//! from `m < l` base-field traces per coordinate.
//!
//! Coordinate `i` of the received word contributes one symbol per part `t`,
//!
//! ```text
//! w_i^t = tr(ζ_{l-m+t} w_i) p_t(P_i)^{l-m} + Σ_{s<l-m} tr(ζ_s w_i) p_t(P_i)^s
//! ```
//!
//! which is a single trace `tr(γ_{t,i} w_i)`. For an error-free word, row `t`
//! of the downloaded matrix is the evaluation of the virtual projection
//!
//! ```text
//! T_t(f) = f_{l-m+t} p_t^{l-m} + Σ_{s<l-m} f_s p_t^s  ∈ L(β_t P∞),
//! ```
//!
//! where `f_s` are the s-projections of `f` and `β_t = β + (l-m)·deg p_t`.
//! Indices `s` and `t` are 0-based throughout this module.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{hamming_distance, CodeError, DecodeFailure, EvalCode, InformationSet};
use crate::curve::{AffinePoint, Coordinate, CurveError, CurveModel, RingElement};
use crate::field::{Elem, ExtensionTower, FieldError};
use crate::linalg::{Matrix, SolveError};

/// Row codes with at most this many codewords fall back to exhaustive
/// decoding when the locator decoder gives up.
pub const ROW_BRUTE_FORCE_LIMIT: u64 = 1 << 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FractionalError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("number of parts m={m} must satisfy 1 <= m < l={l}")]
    PartCount { m: usize, l: usize },
    #[error("part {0} is empty")]
    EmptyPart(usize),
    #[error("value {0} appears in more than one part")]
    OverlappingValues(Elem),
    #[error("point index {0} appears in more than one part")]
    OverlappingPoints(usize),
    #[error("no evaluation point has coordinate value {0}")]
    EmptyFiber(Elem),
    #[error("element index {0} is not in the base field")]
    NotInBase(u32),
    #[error("point index {index} is out of range for length {n}")]
    PointIndex { index: usize, n: usize },
    #[error("annihilator {0} is the zero function")]
    ZeroAnnihilator(usize),
    #[error("annihilator {t} vanishes at point {point} outside its part")]
    VanishesOutside { t: usize, point: AffinePoint },
    #[error("annihilator {t} does not vanish at point {point} of its part")]
    NonzeroOnPart { t: usize, point: AffinePoint },
    #[error("no information set within the parts")]
    NoInformationSetWithinParts,
    #[error("row {t} has divisor degree {beta_t}, not below the length {n}")]
    RowBetaTooLarge { t: usize, beta_t: u32, n: usize },
    #[error("plan was built for length {plan}, code has length {code}")]
    PlanMismatch { plan: usize, code: usize },
    #[error("tower base field does not match the curve's field")]
    TowerMismatch,
    #[error("expected a {rows}x{cols} projected matrix, got {got_rows}x{got_cols}")]
    Shape { rows: usize, cols: usize, got_rows: usize, got_cols: usize },
    #[error("expected {expected} rows, got {got}")]
    RowCount { expected: usize, got: usize },
    #[error("expected {expected} coefficients, got {got}")]
    Length { expected: usize, got: usize },
    #[error("index {index} out of range 0..{bound}")]
    Index { index: usize, bound: usize },
    #[error("row {t} failed to decode: {source}")]
    RowDecode { t: usize, source: DecodeFailure },
    #[error("decoded rows are not the virtual projections of a common function")]
    InconsistentRows,
    #[error("re-encoded projection differs from the download in {distance} columns, beyond {bound}")]
    Miscorrection { distance: usize, bound: usize },
}

/// Parts `A_1..A_m` of the evaluation points, annihilators `p_t` vanishing
/// exactly on `A_t`, and an information set inside `∪ A_t`.
#[derive(Debug, Clone)]
pub struct PartitionPlan {
    n: usize,
    z: Option<Coordinate>,
    value_parts: Vec<Vec<Elem>>,
    parts: Vec<Vec<usize>>,
    annihilators: Vec<RingElement>,
    pole_orders: Vec<u32>,
    part_of: Vec<Option<usize>>,
    info_set: InformationSet,
}

impl PartitionPlan {
    /// Parts assembled from fibers of the coordinate `z`: `A_t` is the set
    /// of points whose `z` value lies in `values[t]`, and
    /// `p_t = Π_{a ∈ values[t]} (z - a)`.
    pub fn from_fibers(
        code: &EvalCode,
        z: Coordinate,
        values: Vec<Vec<Elem>>,
    ) -> Result<Self, FractionalError> {
        let base = code.curve().base().clone();
        let mut seen = BTreeSet::new();
        let mut parts = Vec::with_capacity(values.len());
        let mut annihilators = Vec::with_capacity(values.len());
        for (t, vals) in values.iter().enumerate() {
            if vals.is_empty() {
                return Err(FractionalError::EmptyPart(t));
            }
            let mut part = Vec::new();
            for &a in vals {
                if !base.contains(a) {
                    return Err(FractionalError::NotInBase(a.0));
                }
                if !seen.insert(a) {
                    return Err(FractionalError::OverlappingValues(a));
                }
                let before = part.len();
                part.extend(
                    code.points().iter().enumerate().filter(|(_, p)| p.coordinate(z) == a).map(|(i, _)| i),
                );
                if part.len() == before {
                    return Err(FractionalError::EmptyFiber(a));
                }
            }
            part.sort_unstable();
            parts.push(part);
            annihilators.push(code.curve().annihilator(&base, z, vals));
        }
        let mut plan = Self::assemble(code, parts, annihilators)?;
        plan.z = Some(z);
        plan.value_parts = values;
        Ok(plan)
    }

    /// Parts given as point indices with caller-supplied annihilators, which
    /// must have base-field coefficients and vanish exactly on their part.
    pub fn from_annihilators(
        code: &EvalCode,
        parts: Vec<Vec<usize>>,
        annihilators: Vec<RingElement>,
    ) -> Result<Self, FractionalError> {
        if parts.len() != annihilators.len() {
            return Err(FractionalError::RowCount { expected: parts.len(), got: annihilators.len() });
        }
        let base = code.curve().base();
        for p in &annihilators {
            if let Some((_, c)) = p.terms().find(|(_, c)| !base.contains(*c)) {
                return Err(FractionalError::NotInBase(c.0));
            }
        }
        let parts = parts
            .into_iter()
            .map(|mut p| {
                p.sort_unstable();
                p
            })
            .collect();
        Self::assemble(code, parts, annihilators)
    }

    fn assemble(
        code: &EvalCode,
        parts: Vec<Vec<usize>>,
        annihilators: Vec<RingElement>,
    ) -> Result<Self, FractionalError> {
        let n = code.len();
        let curve = code.curve();
        let base = curve.base();
        let mut part_of = vec![None; n];
        for (t, part) in parts.iter().enumerate() {
            if part.is_empty() {
                return Err(FractionalError::EmptyPart(t));
            }
            for &i in part {
                if i >= n {
                    return Err(FractionalError::PointIndex { index: i, n });
                }
                if part_of[i].is_some() {
                    return Err(FractionalError::OverlappingPoints(i));
                }
                part_of[i] = Some(t);
            }
        }
        let mut pole_orders = Vec::with_capacity(annihilators.len());
        for (t, p) in annihilators.iter().enumerate() {
            if p.is_zero() {
                return Err(FractionalError::ZeroAnnihilator(t));
            }
            pole_orders.push(curve.pole_order(p)?);
            for (i, &pt) in code.points().iter().enumerate() {
                let vanishes = curve.evaluate(base, p, pt).is_zero();
                match (part_of[i] == Some(t), vanishes) {
                    (true, false) => return Err(FractionalError::NonzeroOnPart { t, point: pt }),
                    (false, true) => return Err(FractionalError::VanishesOutside { t, point: pt }),
                    _ => {}
                }
            }
        }
        let covered: Vec<usize> = (0..n).filter(|&i| part_of[i].is_some()).collect();
        let info_set = code
            .find_information_set(Some(&covered))
            .map_err(|_| FractionalError::NoInformationSetWithinParts)?;
        Ok(PartitionPlan {
            n,
            z: None,
            value_parts: Vec::new(),
            parts,
            annihilators,
            pole_orders,
            part_of,
            info_set,
        })
    }

    pub fn m(&self) -> usize {
        self.parts.len()
    }

    /// The fiber coordinate, for plans built from fibers.
    pub fn z(&self) -> Option<Coordinate> {
        self.z
    }

    pub fn value_parts(&self) -> &[Vec<Elem>] {
        &self.value_parts
    }

    /// Point indices of each part, ascending.
    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn annihilators(&self) -> &[RingElement] {
        &self.annihilators
    }

    pub fn annihilator_pole_orders(&self) -> &[u32] {
        &self.pole_orders
    }

    /// The part containing point `i`, if any.
    pub fn part_of(&self, i: usize) -> Option<usize> {
        self.part_of.get(i).copied().flatten()
    }

    /// `n' = |A_1 ∪ ... ∪ A_m|`.
    pub fn covered(&self) -> usize {
        self.part_of.iter().filter(|p| p.is_some()).count()
    }

    pub fn information_set(&self) -> &InformationSet {
        &self.info_set
    }
}

/// The three decoding radii side by side, with the bandwidth figures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusReport {
    /// `⌊(n - (β + (l-m)·max_t deg p_t))/2⌋`.
    pub nominal: i64,
    /// `⌊(n - max_t β_t - 1)/2⌋`.
    pub half_distance: i64,
    /// `min_t ⌊(n - β_t - 1 - g)/2⌋`, what the row decoders always correct.
    pub guaranteed: i64,
    pub betas: Vec<u32>,
    pub downloaded_symbols: usize,
    pub full_symbols: usize,
    pub fraction: f64,
}

/// An `m × n` matrix over the base field, row-major; serialized as a list
/// of rows of element indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Elem>>", into = "Vec<Vec<Elem>>")]
pub struct ProjectedMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Elem>,
}

impl TryFrom<Vec<Vec<Elem>>> for ProjectedMatrix {
    type Error = String;

    fn try_from(rows: Vec<Vec<Elem>>) -> Result<Self, String> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err("rows of a projected matrix must have equal length".into());
        }
        Ok(ProjectedMatrix { rows: rows.len(), cols, entries: rows.concat() })
    }
}

impl From<ProjectedMatrix> for Vec<Vec<Elem>> {
    fn from(p: ProjectedMatrix) -> Self {
        (0..p.rows).map(|r| p.row(r).to_vec()).collect()
    }
}

impl ProjectedMatrix {
    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Result<Self, String> {
        Self::try_from(rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, t: usize) -> &[Elem] {
        &self.entries[t * self.cols..(t + 1) * self.cols]
    }

    pub fn get(&self, t: usize, i: usize) -> Elem {
        self.entries[t * self.cols + i]
    }

    /// Columns in which the two matrices differ.
    pub fn differing_columns(&self, other: &ProjectedMatrix) -> Vec<usize> {
        (0..self.cols.min(other.cols))
            .filter(|&i| (0..self.rows.min(other.rows)).any(|t| self.get(t, i) != other.get(t, i)))
            .collect()
    }
}

/// Read access to a distributed word: node `i` answers one base-field
/// symbol `tr(γ w_i)` per query and never ships `w_i` itself.
pub trait SymbolStore {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn trace_query(&self, node: usize, gamma: Elem) -> Elem;
}

/// A received word held in memory.
#[derive(Debug, Clone, Copy)]
pub struct StoredWord<'a> {
    tower: &'a ExtensionTower,
    word: &'a [Elem],
}

impl<'a> StoredWord<'a> {
    pub fn new(tower: &'a ExtensionTower, word: &'a [Elem]) -> Result<Self, FractionalError> {
        for &w in word {
            tower.ext().check(w)?;
        }
        Ok(StoredWord { tower, word })
    }
}

impl SymbolStore for StoredWord<'_> {
    fn len(&self) -> usize {
        self.word.len()
    }

    fn trace_query(&self, node: usize, gamma: Elem) -> Elem {
        self.tower.trace(self.tower.ext().mul(gamma, self.word[node]))
    }
}

/// Wraps a store and counts queries per node.
#[derive(Debug)]
pub struct CountingStore<S> {
    inner: S,
    reads: Vec<AtomicUsize>,
}

impl<S: SymbolStore> CountingStore<S> {
    pub fn new(inner: S) -> Self {
        let reads = (0..inner.len()).map(|_| AtomicUsize::new(0)).collect();
        CountingStore { inner, reads }
    }

    pub fn reads(&self) -> Vec<usize> {
        self.reads.iter().map(|r| r.load(Ordering::Relaxed)).collect()
    }

    pub fn total_reads(&self) -> usize {
        self.reads().iter().sum()
    }
}

impl<S: SymbolStore> SymbolStore for CountingStore<S> {
    fn len(&self) -> usize {
        self.inner.len()
    }

    fn trace_query(&self, node: usize, gamma: Elem) -> Elem {
        self.reads[node].fetch_add(1, Ordering::Relaxed);
        self.inner.trace_query(node, gamma)
    }
}

/// Outcome of a successful fractional or collaborative decode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionalDecoded {
    /// The decoded codeword over the extension field.
    pub codeword: Vec<Elem>,
    /// Its message in the basis of `L(βP∞)`, over the extension field.
    pub message: Vec<Elem>,
    /// Columns of the download that were corrected.
    pub corrected_columns: Vec<usize>,
}

/// A code `C_l(βP∞)` over `F_{Q^l}` together with a partition plan, its row
/// codes `C(β_t P∞)` over `F_Q`, and precomputed download functionals.
#[derive(Debug, Clone)]
pub struct FractionalSpec {
    tower: Arc<ExtensionTower>,
    code: EvalCode,
    base_code: EvalCode,
    plan: PartitionPlan,
    row_codes: Vec<EvalCode>,
    radii: RadiusReport,
    /// `p_t^j` for `j = 0..=l-m`.
    powers: Vec<Vec<RingElement>>,
    /// `γ_{t,i}` with `w_i^t = tr(γ_{t,i} w_i)`.
    functionals: Vec<Vec<Elem>>,
    /// Inverse of the transposed generator restricted to the information set.
    info_solve: Matrix,
}

impl FractionalSpec {
    /// Builds the spec from a base-field code and a plan over its points.
    pub fn new(
        tower: Arc<ExtensionTower>,
        base_code: EvalCode,
        plan: PartitionPlan,
    ) -> Result<Self, FractionalError> {
        let base = tower.base().clone();
        if **base_code.field() != *base || **base_code.curve().base() != *base {
            return Err(FractionalError::TowerMismatch);
        }
        let n = base_code.len();
        if plan.n != n {
            return Err(FractionalError::PlanMismatch { plan: plan.n, code: n });
        }
        let l = tower.degree();
        let m = plan.m();
        if m == 0 || m >= l {
            return Err(FractionalError::PartCount { m, l });
        }
        let curve = base_code.curve().clone();
        let beta = base_code.beta();
        let k = base_code.dimension();
        let idx = plan.info_set.indices();
        if idx.len() != k {
            return Err(FractionalError::NoInformationSetWithinParts);
        }
        let info_solve = base_code
            .generator()
            .select_columns(idx)
            .transpose()
            .inverse(&base)
            .ok_or(FractionalError::NoInformationSetWithinParts)?;

        let lm = (l - m) as u32;
        let mut row_codes = Vec::with_capacity(m);
        for (t, &po) in plan.pole_orders.iter().enumerate() {
            let beta_t = beta + lm * po;
            if beta_t as usize >= n {
                return Err(FractionalError::RowBetaTooLarge { t, beta_t, n });
            }
            row_codes.push(EvalCode::new(curve.clone(), base.clone(), base_code.points().to_vec(), beta_t)?);
        }
        let code = EvalCode::new(curve.clone(), tower.ext().clone(), base_code.points().to_vec(), beta)?;

        let powers: Vec<Vec<RingElement>> = plan
            .annihilators
            .iter()
            .map(|p| {
                let mut acc = vec![RingElement::one()];
                for _ in 0..lm {
                    let next = curve.mul(&base, acc.last().unwrap(), p);
                    acc.push(next);
                }
                acc
            })
            .collect();

        let functionals = plan
            .annihilators
            .iter()
            .enumerate()
            .map(|(t, p)| {
                base_code
                    .points()
                    .iter()
                    .map(|&pt| {
                        let v = curve.evaluate(&base, p, pt);
                        let mut c = vec![Elem::ZERO; l];
                        let mut pw = Elem::ONE;
                        for cs in c.iter_mut().take(l - m) {
                            *cs = pw;
                            pw = base.mul(pw, v);
                        }
                        c[l - m + t] = pw;
                        tower.functional(&c)
                    })
                    .collect()
            })
            .collect();

        let betas: Vec<u32> = row_codes.iter().map(EvalCode::beta).collect();
        let max_beta = *betas.iter().max().unwrap() as i64;
        let radii = RadiusReport {
            nominal: (n as i64 - max_beta).div_euclid(2),
            half_distance: (n as i64 - max_beta - 1).div_euclid(2),
            guaranteed: row_codes.iter().map(EvalCode::guaranteed_radius).min().unwrap(),
            betas,
            downloaded_symbols: m * n,
            full_symbols: l * n,
            fraction: m as f64 / l as f64,
        };
        Ok(FractionalSpec { tower, code, base_code, plan, row_codes, radii, powers, functionals, info_solve })
    }

    /// Convenience constructor for the fiber construction.
    pub fn from_fibers(
        tower: Arc<ExtensionTower>,
        curve: Arc<CurveModel>,
        points: Vec<AffinePoint>,
        beta: u32,
        z: Coordinate,
        values: Vec<Vec<Elem>>,
    ) -> Result<Self, FractionalError> {
        let base_code = EvalCode::new(curve, tower.base().clone(), points, beta)?;
        let plan = PartitionPlan::from_fibers(&base_code, z, values)?;
        Self::new(tower, base_code, plan)
    }

    pub fn tower(&self) -> &Arc<ExtensionTower> {
        &self.tower
    }

    /// The code over the extension field.
    pub fn code(&self) -> &EvalCode {
        &self.code
    }

    /// The same code over the base field.
    pub fn base_code(&self) -> &EvalCode {
        &self.base_code
    }

    pub fn plan(&self) -> &PartitionPlan {
        &self.plan
    }

    pub fn row_codes(&self) -> &[EvalCode] {
        &self.row_codes
    }

    pub fn radius_report(&self) -> &RadiusReport {
        &self.radii
    }

    pub fn l(&self) -> usize {
        self.tower.degree()
    }

    pub fn m(&self) -> usize {
        self.plan.m()
    }

    pub fn n(&self) -> usize {
        self.code.len()
    }

    pub fn k(&self) -> usize {
        self.code.dimension()
    }

    pub fn genus(&self) -> u32 {
        self.code.curve().genus()
    }

    /// The download functional `γ_{t,i}`.
    pub fn functional(&self, t: usize, i: usize) -> Elem {
        self.functionals[t][i]
    }

    fn check_message(&self, f: &[Elem]) -> Result<(), FractionalError> {
        if f.len() != self.k() {
            return Err(FractionalError::Length { expected: self.k(), got: f.len() });
        }
        for &a in f {
            self.tower.ext().check(a)?;
        }
        Ok(())
    }

    /// Coefficients of the s-projection `f_s = Σ_i tr(ζ_s a_i) h_i`.
    pub fn s_projection(&self, f: &[Elem], s: usize) -> Result<Vec<Elem>, FractionalError> {
        self.check_message(f)?;
        let l = self.l();
        if s >= l {
            return Err(FractionalError::Index { index: s, bound: l });
        }
        let zeta = self.tower.zeta()[s];
        Ok(f.iter().map(|&a| self.tower.trace(self.tower.ext().mul(zeta, a))).collect())
    }

    /// The virtual projection `T_t(f)` as a function over the base field.
    pub fn apply_t(&self, f: &[Elem], t: usize) -> Result<RingElement, FractionalError> {
        self.check_message(f)?;
        let m = self.m();
        if t >= m {
            return Err(FractionalError::Index { index: t, bound: m });
        }
        let l = self.l();
        let base = &**self.tower.base();
        let curve = self.code.curve();
        let basis = self.code.basis();
        let term = |s: usize, power: &RingElement| -> Result<RingElement, FractionalError> {
            let fs = RingElement::from_basis(basis, &self.s_projection(f, s)?, base);
            Ok(curve.mul(base, &fs, power))
        };
        let mut out = term(l - m + t, &self.powers[t][l - m])?;
        for s in 0..l - m {
            out = out.add(base, &term(s, &self.powers[t][s])?);
        }
        Ok(out)
    }

    /// `T_0(f), ..., T_{m-1}(f)`.
    pub fn virtual_projections(&self, f: &[Elem]) -> Result<Vec<RingElement>, FractionalError> {
        (0..self.m()).map(|t| self.apply_t(f, t)).collect()
    }

    /// Downloads `π(w)`: exactly one trace query per node and part.
    pub fn project_received<S: SymbolStore + ?Sized>(
        &self,
        store: &S,
    ) -> Result<ProjectedMatrix, FractionalError> {
        let n = self.n();
        if store.len() != n {
            return Err(FractionalError::Length { expected: n, got: store.len() });
        }
        let m = self.m();
        let mut entries = Vec::with_capacity(m * n);
        for t in 0..m {
            for i in 0..n {
                entries.push(store.trace_query(i, self.functionals[t][i]));
            }
        }
        Ok(ProjectedMatrix { rows: m, cols: n, entries })
    }

    /// `π(w)` for a word held in memory.
    pub fn project_word(&self, w: &[Elem]) -> Result<ProjectedMatrix, FractionalError> {
        self.project_received(&StoredWord::new(&self.tower, w)?)
    }

    /// Downloads every coordinate in full: `l` queries per node.
    pub fn full_download<S: SymbolStore + ?Sized>(&self, store: &S) -> Result<Vec<Elem>, FractionalError> {
        let n = self.n();
        if store.len() != n {
            return Err(FractionalError::Length { expected: n, got: store.len() });
        }
        (0..n)
            .map(|i| {
                let c: Vec<Elem> = self.tower.zeta().iter().map(|&z| store.trace_query(i, z)).collect();
                Ok(self.tower.lift(&c)?)
            })
            .collect()
    }

    /// The full-download comparator: fetch all `l·n` symbols and decode in
    /// the code over the extension field.
    pub fn baseline_decode<S: SymbolStore + ?Sized>(
        &self,
        store: &S,
    ) -> Result<FractionalDecoded, FractionalError> {
        let w = self.full_download(store)?;
        let d = self
            .code
            .decode_basic(&w)
            .map_err(|source| FractionalError::RowDecode { t: 0, source })?;
        let corrected_columns = (0..w.len()).filter(|&i| w[i] != d.codeword[i]).collect();
        Ok(FractionalDecoded { codeword: d.codeword, message: d.message, corrected_columns })
    }

    fn check_rows(&self, rows: &[RingElement]) -> Result<(), FractionalError> {
        if rows.len() != self.m() {
            return Err(FractionalError::RowCount { expected: self.m(), got: rows.len() });
        }
        let base = self.tower.base();
        for r in rows {
            if let Some((_, c)) = r.terms().find(|(_, c)| !base.contains(*c)) {
                return Err(FractionalError::NotInBase(c.0));
            }
        }
        Ok(())
    }

    /// `Σ_s c_s ν_s` coefficient-wise.
    fn combine(&self, projections: &[Vec<Elem>]) -> Vec<Elem> {
        let ext = self.tower.ext();
        (0..self.k())
            .map(|j| ext.sum(projections.iter().zip(self.tower.nu()).map(|(c, &nu)| ext.mul(c[j], nu))))
            .collect()
    }

    /// Recovery by peeling: the s-projections `f_0, ..., f_{l-m-1}` are read
    /// off the information set one at a time, each followed by an exact
    /// division of every residue by its annihilator; the residues left over
    /// are the remaining projections.
    pub fn recover_peeling(&self, rows: &[RingElement]) -> Result<Vec<Elem>, FractionalError> {
        self.check_rows(rows)?;
        let (l, m) = (self.l(), self.m());
        let base = &**self.tower.base();
        let curve = self.code.curve();
        let basis = self.code.basis();
        let idx = self.plan.info_set.indices();
        let mut residues = rows.to_vec();
        let mut projections: Vec<Vec<Elem>> = vec![Vec::new(); l];
        for proj in projections.iter_mut().take(l - m) {
            let values: Vec<Elem> = idx
                .iter()
                .map(|&i| {
                    let t = self.plan.part_of[i].expect("information set lies in the parts");
                    curve.evaluate(base, &residues[t], self.code.points()[i])
                })
                .collect();
            let coeffs = self.info_solve.mul_vec(base, &values);
            let fs = RingElement::from_basis(basis, &coeffs, base);
            for (t, r) in residues.iter_mut().enumerate() {
                let numerator = r.sub(base, &fs);
                *r = curve
                    .exact_divide(base, &numerator, &self.plan.annihilators[t])
                    .map_err(|_| FractionalError::InconsistentRows)?;
            }
            *proj = coeffs;
        }
        for (t, r) in residues.iter().enumerate() {
            projections[l - m + t] = r.coordinates(basis).ok_or(FractionalError::InconsistentRows)?;
        }
        Ok(self.combine(&projections))
    }

    /// Recovery by one linear solve for all `l·k` projection coefficients
    /// against the `m·n` evaluations of the rows.
    pub fn recover_joint(&self, rows: &[RingElement]) -> Result<Vec<Elem>, FractionalError> {
        self.check_rows(rows)?;
        let (l, m, n, k) = (self.l(), self.m(), self.n(), self.k());
        let base = &**self.tower.base();
        let curve = self.code.curve();
        let gen = self.base_code.generator();
        let pvals: Vec<Vec<Elem>> = self
            .plan
            .annihilators
            .iter()
            .map(|p| self.code.points().iter().map(|&pt| curve.evaluate(base, p, pt)).collect())
            .collect();
        let system = Matrix::from_fn(m * n, l * k, |r, c| {
            let (t, i) = (r / n, r % n);
            let (s, j) = (c / k, c % k);
            let weight = if s < l - m {
                base.pow(pvals[t][i], s as u64)
            } else if s == l - m + t {
                base.pow(pvals[t][i], (l - m) as u64)
            } else {
                Elem::ZERO
            };
            base.mul(weight, gen.get(j, i))
        });
        let rhs: Vec<Elem> = (0..m)
            .flat_map(|t| self.code.points().iter().map(move |&pt| curve.evaluate(base, &rows[t], pt)))
            .collect();
        let x = match system.solve(base, &rhs) {
            Ok(x) => x,
            Err(SolveError::Inconsistent) => return Err(FractionalError::InconsistentRows),
            Err(SolveError::Underdetermined) => return Err(FractionalError::NoInformationSetWithinParts),
        };
        let projections: Vec<Vec<Elem>> = x.chunks(k).map(<[Elem]>::to_vec).collect();
        Ok(self.combine(&projections))
    }

    /// The message `f` whose virtual projections are `rows`. Peeling and the
    /// joint solve must agree, and `f` must reproduce `rows` exactly.
    pub fn recover_function(&self, rows: &[RingElement]) -> Result<Vec<Elem>, FractionalError> {
        let f = self.recover_peeling(rows)?;
        if self.recover_joint(rows)? != f {
            return Err(FractionalError::InconsistentRows);
        }
        if self.virtual_projections(&f)? != rows {
            return Err(FractionalError::InconsistentRows);
        }
        Ok(f)
    }

    fn decode_row(&self, t: usize, row: &[Elem]) -> Result<Vec<Elem>, DecodeFailure> {
        let code = &self.row_codes[t];
        match code.decode_basic(row) {
            Ok(d) => Ok(d.message),
            Err(first) if code.size() <= ROW_BRUTE_FORCE_LIMIT => {
                let d = code.decode_bruteforce(row).map_err(|_| first)?;
                let bound = code.half_distance_radius().max(0) as usize;
                let distance = hamming_distance(&d.codeword, row);
                if distance > bound {
                    return Err(DecodeFailure::TooFar { distance, bound });
                }
                Ok(d.message)
            }
            Err(e) => Err(e),
        }
    }

    /// Checks the shape of a download and that its entries lie in the base field.
    pub fn check_projected(&self, pi: &ProjectedMatrix) -> Result<(), FractionalError> {
        let (m, n) = (self.m(), self.n());
        if pi.rows != m || pi.cols != n {
            return Err(FractionalError::Shape { rows: m, cols: n, got_rows: pi.rows, got_cols: pi.cols });
        }
        if let Some(x) = pi.entries.iter().find(|x| !self.tower.base().contains(**x)) {
            return Err(FractionalError::NotInBase(x.0));
        }
        Ok(())
    }

    /// Re-encodes a recovered message and rejects it if its download differs
    /// from `pi` in more than `bound` columns.
    pub fn finish(
        &self,
        pi: &ProjectedMatrix,
        message: Vec<Elem>,
        bound: usize,
    ) -> Result<FractionalDecoded, FractionalError> {
        let codeword = self.code.encode(&message)?;
        let reprojected = self.project_word(&codeword)?;
        let corrected_columns = reprojected.differing_columns(pi);
        if corrected_columns.len() > bound {
            return Err(FractionalError::Miscorrection { distance: corrected_columns.len(), bound });
        }
        Ok(FractionalDecoded { codeword, message, corrected_columns })
    }

    /// Decodes a downloaded matrix: each row in its row code, then recovery
    /// and re-encoding.
    pub fn fractional_decode(&self, pi: &ProjectedMatrix) -> Result<FractionalDecoded, FractionalError> {
        self.check_projected(pi)?;
        let base = &**self.tower.base();
        let mut rows = Vec::with_capacity(self.m());
        for t in 0..self.m() {
            let message = self.decode_row(t, pi.row(t)).map_err(|source| FractionalError::RowDecode { t, source })?;
            rows.push(RingElement::from_basis(self.row_codes[t].basis(), &message, base));
        }
        let f = self.recover_function(&rows)?;
        self.finish(pi, f, self.radii.half_distance.max(0) as usize)
    }

    /// Downloads from `store` and decodes.
    pub fn decode<S: SymbolStore + ?Sized>(&self, store: &S) -> Result<FractionalDecoded, FractionalError> {
        self.fractional_decode(&self.project_received(store)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Monomial;
    use crate::field::Field;
    use crate::presets::{hermitian_f64, hermitian_f81};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_message(spec: &FractionalSpec, rng: &mut ChaCha8Rng) -> Vec<Elem> {
        let q = spec.tower().ext().order();
        (0..spec.k()).map(|_| Elem(rng.gen_range(0..q))).collect()
    }

    fn constant(spec: &FractionalSpec, c: Elem) -> Vec<Elem> {
        let mut f = vec![Elem::ZERO; spec.k()];
        f[0] = c;
        f
    }

    #[test]
    fn f64_plan_shape() {
        let spec = hermitian_f64();
        let plan = spec.plan();
        assert_eq!(plan.parts().iter().map(Vec::len).collect::<Vec<_>>(), vec![4, 4]);
        let x2_x = RingElement::term(Monomial::new(2, 0), Elem::ONE)
            .add(spec.tower().base(), &RingElement::term(Monomial::new(1, 0), Elem::ONE));
        assert_eq!(plan.annihilators()[0], x2_x);
        assert_eq!(plan.annihilator_pole_orders(), &[4, 4]);
        let r = spec.radius_report();
        assert_eq!((r.nominal, r.half_distance, r.guaranteed), (1, 0, 0));
        assert_eq!(r.betas, vec![6, 6]);
        assert_eq!((r.downloaded_symbols, r.full_symbols), (16, 24));
    }

    #[test]
    fn f81_radii() {
        let spec = hermitian_f81();
        let r = spec.radius_report();
        assert_eq!((r.nominal, r.half_distance, r.guaranteed), (6, 5, 4));
        assert_eq!(r.betas, vec![15]);
        assert_eq!(r.fraction, 0.5);
        assert_eq!(spec.plan().covered(), 9);
    }

    fn base_code(q0: u32, beta: u32) -> EvalCode {
        let base = Field::gf(q0, 2).unwrap();
        let curve = Arc::new(CurveModel::hermitian(base.clone(), q0).unwrap());
        let pts = curve.affine_points(&base);
        EvalCode::new(curve, base, pts, beta).unwrap()
    }

    #[test]
    fn singleton_fiber_and_rejections() {
        let code = base_code(2, 0);
        let plan = PartitionPlan::from_fibers(&code, Coordinate::X, vec![vec![Elem(0)]]).unwrap();
        assert_eq!(plan.annihilators()[0], RingElement::term(Monomial::new(1, 0), Elem::ONE));
        let pts: Vec<AffinePoint> = plan.parts()[0].iter().map(|&i| code.points()[i]).collect();
        assert_eq!(pts, vec![AffinePoint::new(Elem(0), Elem(0)), AffinePoint::new(Elem(0), Elem(1))]);

        let overlap = PartitionPlan::from_fibers(&code, Coordinate::X, vec![vec![Elem(0), Elem(1)], vec![Elem(1)]]);
        assert_eq!(overlap.unwrap_err(), FractionalError::OverlappingValues(Elem(1)));

        let code2 = base_code(2, 2);
        let none = PartitionPlan::from_fibers(&code2, Coordinate::X, vec![vec![Elem(0)]]);
        assert_eq!(none.unwrap_err(), FractionalError::NoInformationSetWithinParts);

        // x vanishes on both fibers over 0 but the part only lists one point
        let bad = PartitionPlan::from_annihilators(
            &code,
            vec![vec![0]],
            vec![RingElement::term(Monomial::new(1, 0), Elem::ONE)],
        );
        assert!(matches!(bad, Err(FractionalError::VanishesOutside { t: 0, .. })));
    }

    #[test]
    fn m_equal_l_rejected() {
        let code = base_code(3, 6);
        let tower = Arc::new(ExtensionTower::new(code.field().clone(), 2).unwrap());
        let plan =
            PartitionPlan::from_fibers(&code, Coordinate::X, vec![vec![Elem(0), Elem(1)], vec![Elem(2)]]).unwrap();
        assert_eq!(
            FractionalSpec::new(tower, code, plan).unwrap_err(),
            FractionalError::PartCount { m: 2, l: 2 }
        );
    }

    #[test]
    fn row_beta_must_stay_below_n() {
        let code = base_code(3, 6);
        let tower = Arc::new(ExtensionTower::new(code.field().clone(), 4).unwrap());
        let plan = PartitionPlan::from_fibers(&code, Coordinate::X, vec![vec![Elem(0), Elem(1), Elem(2)]]).unwrap();
        assert_eq!(
            FractionalSpec::new(tower, code, plan).unwrap_err(),
            FractionalError::RowBetaTooLarge { t: 0, beta_t: 33, n: 27 }
        );
    }

    #[test]
    fn virtual_projections_of_dual_basis() {
        let spec = hermitian_f64();
        let nu = spec.tower().nu().to_vec();
        let first = spec.virtual_projections(&constant(&spec, nu[0])).unwrap();
        assert!(first.iter().all(|t| *t == RingElement::one()));
        let last = spec.virtual_projections(&constant(&spec, nu[2])).unwrap();
        let p = &spec.plan().annihilators()[1];
        assert!(last[0].is_zero());
        assert_eq!(last[1], *p);
        assert!(spec.apply_t(&constant(&spec, nu[0]), 2).is_err());
    }

    #[test]
    fn s_projections_expand_back() {
        let spec = hermitian_f64();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ext = spec.tower().ext().clone();
        for _ in 0..50 {
            let f = random_message(&spec, &mut rng);
            let proj: Vec<Vec<Elem>> = (0..3).map(|s| spec.s_projection(&f, s).unwrap()).collect();
            for j in 0..spec.k() {
                let back = ext.sum((0..3).map(|s| ext.mul(proj[s][j], spec.tower().nu()[s])));
                assert_eq!(back, f[j]);
            }
        }
    }

    #[test]
    fn download_matches_virtual_projections() {
        for spec in [hermitian_f64(), hermitian_f81()] {
            let mut rng = ChaCha8Rng::seed_from_u64(2);
            let base = spec.tower().base().clone();
            for _ in 0..20 {
                let f = random_message(&spec, &mut rng);
                let w = spec.code().encode(&f).unwrap();
                let pi = spec.project_word(&w).unwrap();
                for (t, row) in spec.virtual_projections(&f).unwrap().iter().enumerate() {
                    let ev: Vec<Elem> =
                        spec.code().points().iter().map(|&p| spec.code().curve().evaluate(&base, row, p)).collect();
                    assert_eq!(pi.row(t), &ev[..]);
                }
            }
        }
    }

    #[test]
    fn nu_one_downloads_ones_and_columns_are_local() {
        let spec = hermitian_f64();
        let w = vec![spec.tower().nu()[0]; spec.n()];
        let pi = spec.project_word(&w).unwrap();
        assert!((0..2).all(|t| pi.row(t).iter().all(|&x| x == Elem::ONE)));
        let mut w2 = w.clone();
        w2[5] = Elem(17);
        assert!(pi.differing_columns(&spec.project_word(&w2).unwrap()).iter().all(|&c| c == 5));
    }

    #[test]
    fn recovery_examples() {
        let spec = hermitian_f64();
        let rows = vec![RingElement::one(); 2];
        assert_eq!(spec.recover_function(&rows).unwrap(), constant(&spec, spec.tower().nu()[0]));

        let spec = hermitian_f81();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let base = spec.tower().base().clone();
        for _ in 0..50 {
            let f = random_message(&spec, &mut rng);
            let rows = spec.virtual_projections(&f).unwrap();
            assert_eq!(spec.recover_peeling(&rows).unwrap(), f);
            assert_eq!(spec.recover_joint(&rows).unwrap(), f);
            // xy has pole order 7, which no element of L(6) + p·L(6) reaches
            let basis = spec.row_codes()[0].basis();
            let mut c = rows[0].coordinates(basis).unwrap();
            let j = basis.iter().position(|&m| m == Monomial::new(1, 1)).unwrap();
            c[j] = base.add(c[j], Elem(rng.gen_range(1..9)));
            let bad = vec![RingElement::from_basis(basis, &c, &base)];
            assert_eq!(spec.recover_function(&bad).unwrap_err(), FractionalError::InconsistentRows);
        }
    }

    #[test]
    fn decode_with_errors_and_counting() {
        let spec = hermitian_f81();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let ext = spec.tower().ext().clone();
        for weight in 0..=4 {
            for _ in 0..20 {
                let f = random_message(&spec, &mut rng);
                let c = spec.code().encode(&f).unwrap();
                let mut w = c.clone();
                let mut idx: Vec<usize> = (0..w.len()).collect();
                for i in 0..weight {
                    let j = rng.gen_range(i..idx.len());
                    idx.swap(i, j);
                    w[idx[i]] = ext.add(w[idx[i]], Elem(rng.gen_range(1..ext.order())));
                }
                let store = CountingStore::new(StoredWord::new(spec.tower(), &w).unwrap());
                let out = spec.decode(&store).unwrap();
                assert_eq!(out.codeword, c);
                assert_eq!(out.message, f);
                assert_eq!(store.total_reads(), 27);
                assert!(store.reads().iter().all(|&r| r == 1));
                let full = CountingStore::new(StoredWord::new(spec.tower(), &w).unwrap());
                assert_eq!(spec.baseline_decode(&full).unwrap().codeword, c);
                assert_eq!(full.total_reads(), 54);
            }
        }
    }

    #[test]
    fn projected_matrix_json() {
        let p = ProjectedMatrix::from_rows(vec![vec![Elem(1), Elem(2)], vec![Elem(3), Elem(4)]]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[[1,2],[3,4]]");
        assert_eq!(serde_json::from_str::<ProjectedMatrix>(&s).unwrap(), p);
        assert!(serde_json::from_str::<ProjectedMatrix>("[[1],[2,3]]").is_err());
    }

    #[test]
    fn shape_and_range_checked() {
        let spec = hermitian_f64();
        let p = ProjectedMatrix::from_rows(vec![vec![Elem(0); 8]]).unwrap();
        assert!(matches!(spec.fractional_decode(&p), Err(FractionalError::Shape { .. })));
        let p = ProjectedMatrix::from_rows(vec![vec![Elem(9); 8]; 2]).unwrap();
        assert_eq!(spec.fractional_decode(&p).unwrap_err(), FractionalError::NotInBase(9));
    }
}
