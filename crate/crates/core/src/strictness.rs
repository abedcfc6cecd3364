//! The strictness condition on a formal group: extract the minimal-degree
//! unit-coefficient forms F_i of the [p]-series, reduce them to G_i over
//! the residue field, and decide whether the only common zero of the G_i
//! over the algebraic closure is the origin.
//!
//! The decision is exact graded linear algebra, never finite-field
//! sampling: either the Frobenius-linear determinant shortcut applies, or
//! the ideal's graded piece is tested for saturation at the Macaulay bound
//! sum(d_i - 1) + 1. Point enumeration exists only as an independent
//! refutation oracle for the test suite.

pub mod linalg;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fq::{FqElem, FqEmbedding, FqField};
use crate::group::MulPSeries;
use crate::matrix::WMatrix;
use crate::scalar::Ctx;
use crate::series::{Monomial, MultiSeries};
use crate::valuation::Valuation;
use linalg::FqMatrix;

/// A homogeneous polynomial over F_q, sparse and in canonical term order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqPoly {
    pub field: Arc<FqField>,
    pub num_vars: usize,
    pub terms: Vec<(Monomial, FqElem)>,
}

impl FqPoly {
    pub fn evaluate(&self, point: &[FqElem]) -> FqElem {
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (j, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    t = self.field.mul(&t, &point[j]);
                }
            }
            acc = self.field.add(&acc, &t);
        }
        acc
    }

    fn map_into(&self, emb: &FqEmbedding) -> FqPoly {
        FqPoly {
            field: emb.sup.clone(),
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), emb.map(c)))
                .collect(),
        }
    }
}

impl fmt::Display for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = |i: usize| format!("X{}", i + 1);
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let cs = self.field.display(c);
                let mono: Vec<String> = m
                    .exps()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| if e == 1 { names(i) } else { format!("{}^{e}", names(i)) })
                    .collect();
                let mono = mono.join("*");
                match (cs.as_str(), mono.is_empty()) {
                    (_, true) => cs,
                    ("1", false) => mono,
                    (_, false) if cs.contains(' ') => format!("({cs})*{mono}"),
                    (_, false) => format!("{cs}*{mono}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The homogeneous forms F_1..F_g over W and their reductions G_1..G_g.
#[derive(Debug, Clone)]
pub struct FormSystem {
    ctx: Ctx,
    dim: usize,
    degrees: Vec<u32>,
    forms_w: Vec<MultiSeries>,
    forms_mod_p: Vec<FqPoly>,
    /// Monomials of the minimal unit degree excluded per component because
    /// their coefficient is not a unit.
    pub excluded_non_unit: Vec<usize>,
    /// Coefficients at the precision floor, treated as non-unit.
    pub imprecise_treated_non_unit: Vec<usize>,
}

impl FormSystem {
    /// Builds a system from homogeneous forms whose stored monomials all
    /// carry unit coefficients.
    pub fn from_unit_forms(ctx: &Ctx, forms_w: Vec<MultiSeries>) -> Result<FormSystem> {
        let dim = forms_w.len();
        if dim == 0 {
            return Err(Error::ShapeMismatch("empty form system".into()));
        }
        let mut degrees = Vec::with_capacity(dim);
        for (i, f) in forms_w.iter().enumerate() {
            if !f.context().same_as(ctx) {
                return Err(Error::ContextMismatch);
            }
            if f.num_vars() != dim {
                return Err(Error::ShapeMismatch(format!(
                    "form {i} lives in {} variables, expected {dim}",
                    f.num_vars()
                )));
            }
            let mut deg = None;
            for (m, c) in f.terms() {
                if !c.is_unit() {
                    return Err(Error::ShapeMismatch(format!(
                        "form {i} has a non-unit coefficient"
                    )));
                }
                match deg {
                    None => deg = Some(m.degree()),
                    Some(d) if d == m.degree() => {}
                    Some(_) => {
                        return Err(Error::ShapeMismatch(format!("form {i} is not homogeneous")))
                    }
                }
            }
            degrees.push(deg.ok_or(Error::InfiniteHeightComponent(i))?);
        }
        let field = ctx.residue_field().clone();
        let forms_mod_p = forms_w
            .iter()
            .map(|f| FqPoly {
                field: field.clone(),
                num_vars: dim,
                terms: f.terms().map(|(m, c)| (m.clone(), c.residue())).collect(),
            })
            .collect();
        Ok(FormSystem {
            ctx: ctx.clone(),
            dim,
            degrees,
            forms_w,
            forms_mod_p,
            excluded_non_unit: vec![0; dim],
            imprecise_treated_non_unit: vec![0; dim],
        })
    }

    pub fn context(&self) -> &Ctx {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn forms_w(&self) -> &[MultiSeries] {
        &self.forms_w
    }

    pub fn forms_mod_p(&self) -> &[FqPoly] {
        &self.forms_mod_p
    }
}

/// Selects, per component, the monomials of minimal degree among those with
/// unit coefficient. Coefficients at the precision floor count as non-unit
/// and are tallied in the report.
pub fn extract_forms(mulp: &MulPSeries) -> Result<FormSystem> {
    let tuple = mulp.tuple();
    let g = tuple.len();
    let ctx = tuple.components()[0].context().clone();
    let p = ctx.p();
    let mut forms_w = Vec::with_capacity(g);
    let mut excluded = vec![0usize; g];
    let mut imprecise = vec![0usize; g];
    for (i, comp) in tuple.components().iter().enumerate() {
        let mut min_unit_degree: Option<u32> = None;
        for (m, c) in comp.terms() {
            if c.is_unit() {
                min_unit_degree = Some(match min_unit_degree {
                    None => m.degree(),
                    Some(d) => d.min(m.degree()),
                });
            }
        }
        let d = min_unit_degree.ok_or(Error::InfiniteHeightComponent(i))?;
        if !is_power_of(d as u64, p) {
            return Err(Error::NonPPowerDegree { component: i, degree: d });
        }
        let mut form = MultiSeries::zero(&ctx, g, comp.trunc_degree());
        for (m, c) in comp.terms() {
            if m.degree() != d {
                continue;
            }
            match c.valuation() {
                Valuation::Exact(v) if v == crate::valuation::rat(0, 1) => {
                    form.add_term(m.clone(), c.clone());
                }
                Valuation::AtLeast(_) => imprecise[i] += 1,
                _ => excluded[i] += 1,
            }
        }
        forms_w.push(form);
    }
    let mut fs = FormSystem::from_unit_forms(&ctx, forms_w)?;
    fs.excluded_non_unit = excluded;
    fs.imprecise_treated_non_unit = imprecise;
    Ok(fs)
}

fn is_power_of(mut d: u64, p: u64) -> bool {
    if d < p {
        return false;
    }
    while d.is_multiple_of(p) {
        d /= p;
    }
    d == 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    DeterminantShortcut,
    MacaulayRank,
    BruteForce,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    EqualDegreesOnlyTrivialZero,
    UnequalDegrees,
    NontrivialCommonZero,
}

/// A common zero of the reduced forms over an extension of the residue field.
#[derive(Debug, Clone)]
pub struct ZeroWitness {
    pub field: Arc<FqField>,
    pub coords: Vec<FqElem>,
}

impl ZeroWitness {
    pub fn display_coords(&self) -> Vec<String> {
        self.coords.iter().map(|c| self.field.display(c)).collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StrictnessVerdict {
    pub is_strict: bool,
    pub degrees: Vec<u32>,
    pub reason: Reason,
    pub method: Option<Method>,
    /// Determinant residue, for the Frobenius-linear shortcut.
    pub determinant: Option<String>,
    /// Minimal degree at which the ideal's graded piece is the full space.
    pub saturation_degree: Option<u32>,
    pub macaulay_bound: Option<u32>,
    pub witness: Option<Vec<String>>,
    pub witness_field_degree: Option<usize>,
}

impl StrictnessVerdict {
    fn base(fs: &FormSystem) -> StrictnessVerdict {
        StrictnessVerdict {
            is_strict: false,
            degrees: fs.degrees.clone(),
            reason: Reason::UnequalDegrees,
            method: None,
            determinant: None,
            saturation_degree: None,
            macaulay_bound: None,
            witness: None,
            witness_field_degree: None,
        }
    }
}

/// Decides strictness: equal degrees, then the determinant shortcut for
/// Frobenius-linear systems, then the Macaulay graded-rank test.
pub fn decide_strict(fs: &FormSystem) -> StrictnessVerdict {
    if fs.degrees.windows(2).any(|w| w[0] != w[1]) {
        return StrictnessVerdict::base(fs);
    }
    if let Some(v) = determinant_shortcut(fs) {
        return v;
    }
    macaulay_decide(fs)
}

/// The coefficient matrix (a_ij) when every G_i is a sum of pure powers
/// a_ij X_j^d; None when some monomial is mixed.
fn frobenius_linear_matrix(fs: &FormSystem) -> Option<Vec<Vec<FqElem>>> {
    let g = fs.dim;
    let d = fs.degrees[0] as u16;
    let field = fs.forms_mod_p[0].field.clone();
    let mut rows = vec![vec![field.zero(); g]; g];
    for (i, form) in fs.forms_mod_p.iter().enumerate() {
        for (m, c) in &form.terms {
            let mut pure = None;
            for (j, &e) in m.exps().iter().enumerate() {
                if e == d && pure.is_none() {
                    pure = Some(j);
                } else if e != 0 {
                    return None;
                }
            }
            rows[i][pure?] = c.clone();
        }
    }
    Some(rows)
}

/// Determinant shortcut for Frobenius-linear systems; requires equal
/// degrees. Returns None when the system is not Frobenius-linear.
pub fn determinant_shortcut(fs: &FormSystem) -> Option<StrictnessVerdict> {
    let rows = frobenius_linear_matrix(fs)?;
    let field = fs.forms_mod_p[0].field.clone();
    let g = fs.dim;
    let det = small_det(&field, &rows);
    let mut v = StrictnessVerdict::base(fs);
    v.method = Some(Method::DeterminantShortcut);
    v.determinant = Some(field.display(&det));
    if !field.is_zero(&det) {
        v.is_strict = true;
        v.reason = Reason::EqualDegreesOnlyTrivialZero;
        return Some(v);
    }
    v.reason = Reason::NontrivialCommonZero;
    // A kernel vector of (a_ij) pulls back through the Frobenius to an
    // explicit witness over F_q itself.
    if let Some(u) = linalg::kernel_vector(&field, &rows) {
        let f = fs.ctx.residue_degree();
        let h = (fs.degrees[0] as u64).ilog(fs.ctx.p());
        let back = (f - (h % f)) % f;
        let exponent = (fs.ctx.p() as u128).pow(back);
        let coords: Vec<FqElem> = u.iter().map(|c| field.pow(c, exponent)).collect();
        debug_assert!(fs
            .forms_mod_p
            .iter()
            .all(|gi| field.is_zero(&gi.evaluate(&coords))));
        debug_assert!(coords.iter().any(|c| !field.is_zero(c)));
        v.witness = Some(coords.iter().map(|c| field.display(c)).collect());
        v.witness_field_degree = Some(field.degree());
        let _ = g;
    }
    Some(v)
}

fn small_det(field: &Arc<FqField>, rows: &[Vec<FqElem>]) -> FqElem {
    let n = rows.len();
    match n {
        1 => rows[0][0].clone(),
        2 => field.sub(
            &field.mul(&rows[0][0], &rows[1][1]),
            &field.mul(&rows[0][1], &rows[1][0]),
        ),
        _ => {
            // Laplace expansion along the first row; n stays tiny here.
            let mut acc = field.zero();
            for j in 0..n {
                if field.is_zero(&rows[0][j]) {
                    continue;
                }
                let minor: Vec<Vec<FqElem>> = rows[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .map(|(_, c)| c.clone())
                            .collect()
                    })
                    .collect();
                let mut t = field.mul(&rows[0][j], &small_det(field, &minor));
                if j % 2 == 1 {
                    t = field.neg(&t);
                }
                acc = field.add(&acc, &t);
            }
            acc
        }
    }
}

/// All monomials of the given total degree, in canonical order.
pub fn monomials_of_degree(num_vars: usize, degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u16; num_vars];
    fill_monomials(num_vars, degree as u16, 0, &mut current, &mut out);
    out.sort();
    out
}

fn fill_monomials(nv: usize, left: u16, idx: usize, current: &mut Vec<u16>, out: &mut Vec<Monomial>) {
    if idx == nv - 1 {
        current[idx] = left;
        out.push(Monomial::new(current.clone()));
        return;
    }
    for e in 0..=left {
        current[idx] = e;
        fill_monomials(nv, left - e, idx + 1, current, out);
    }
    current[idx] = 0;
}

/// Whether the degree-dstar graded piece of the ideal (G_1..G_g) is the
/// whole space of degree-dstar forms.
pub fn macaulay_saturated_at(fs: &FormSystem, dstar: u32) -> bool {
    let g = fs.dim;
    let field = fs.forms_mod_p[0].field.clone();
    let cols = monomials_of_degree(g, dstar);
    let col_index: std::collections::HashMap<&Monomial, usize> =
        cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut matrix = FqMatrix::new(&field, cols.len());
    for (i, form) in fs.forms_mod_p.iter().enumerate() {
        let d = fs.degrees[i];
        if d > dstar {
            continue;
        }
        for mult in monomials_of_degree(g, dstar - d) {
            let mut row = vec![field.zero(); cols.len()];
            for (m, c) in &form.terms {
                let target = mult.mul(m);
                row[col_index[&target]] = c.clone();
            }
            matrix.push_row(row);
        }
    }
    matrix.rank() == cols.len()
}

/// Macaulay decision: the projective zero set over the algebraic closure is
/// empty iff the graded piece saturates at the bound sum(d_i - 1) + 1.
/// Saturation is monotone in the degree, so the minimal saturated degree is
/// found by an upward scan and recorded as the certificate.
pub fn macaulay_decide(fs: &FormSystem) -> StrictnessVerdict {
    let bound: u32 = fs.degrees.iter().map(|&d| d - 1).sum::<u32>() + 1;
    let mut v = StrictnessVerdict::base(fs);
    v.method = Some(Method::MacaulayRank);
    v.macaulay_bound = Some(bound);
    if macaulay_saturated_at(fs, bound) {
        let start = *fs.degrees.iter().max().unwrap();
        let minimal = (start..=bound)
            .find(|&dstar| macaulay_saturated_at(fs, dstar))
            .unwrap_or(bound);
        v.is_strict = true;
        v.reason = Reason::EqualDegreesOnlyTrivialZero;
        v.saturation_degree = Some(minimal);
    } else {
        v.is_strict = false;
        v.reason = Reason::NontrivialCommonZero;
    }
    v
}

/// Exhaustive search for a nonzero common zero over extensions of the
/// residue field of degree up to `max_ext_degree`. A found witness refutes
/// strictness; absence up to the budget is evidence only.
pub fn brute_force_common_zero(
    fs: &FormSystem,
    max_ext_degree: u32,
    budget: u128,
) -> Result<Option<ZeroWitness>> {
    let g = fs.dim;
    let p = fs.ctx.p();
    let f = fs.ctx.residue_degree() as usize;
    for j in 1..=max_ext_degree as usize {
        let m = f * j;
        let field = if m == 1 {
            FqField::prime(p)
        } else {
            FqField::extension(p, m)?
        };
        let space = field.order().checked_pow(g as u32).ok_or(Error::EnumerationBudget {
            space: u128::MAX,
            budget,
        })?;
        if space > budget {
            return Err(Error::EnumerationBudget { space, budget });
        }
        let emb = FqEmbedding::find(fs.ctx.residue_field(), &field)?;
        let forms: Vec<FqPoly> = fs.forms_mod_p.iter().map(|gi| gi.map_into(&emb)).collect();
        let order = field.order() as u64;
        if let Some(coords) = search_points(&field, &forms, g, order, space as u64) {
            return Ok(Some(ZeroWitness { field, coords }));
        }
    }
    Ok(None)
}

fn decode_point(field: &Arc<FqField>, g: usize, order: u64, mut idx: u64) -> Vec<FqElem> {
    (0..g)
        .map(|_| {
            let e = field.element_from_index(idx % order);
            idx /= order;
            e
        })
        .collect()
}

fn point_is_zero_of_all(field: &Arc<FqField>, forms: &[FqPoly], point: &[FqElem]) -> bool {
    forms.iter().all(|f| field.is_zero(&f.evaluate(point)))
}

#[cfg(feature = "parallel")]
fn search_points(
    field: &Arc<FqField>,
    forms: &[FqPoly],
    g: usize,
    order: u64,
    space: u64,
) -> Option<Vec<FqElem>> {
    use rayon::prelude::*;
    if space < 1 << 12 {
        return (1..space)
            .map(|idx| decode_point(field, g, order, idx))
            .find(|pt| point_is_zero_of_all(field, forms, pt));
    }
    (1..space)
        .into_par_iter()
        .map(|idx| decode_point(field, g, order, idx))
        .find_first(|pt| point_is_zero_of_all(field, forms, pt))
}

#[cfg(not(feature = "parallel"))]
fn search_points(
    field: &Arc<FqField>,
    forms: &[FqPoly],
    g: usize,
    order: u64,
    space: u64,
) -> Option<Vec<FqElem>> {
    (1..space)
        .map(|idx| decode_point(field, g, order, idx))
        .find(|pt| point_is_zero_of_all(field, forms, pt))
}

/// Applies an invertible linear change of coordinates to the form system:
/// H_i = sum_j M_ij F_j(M^-1 X), then re-extracts the unit-coefficient
/// monomials. The common-zero set of the reductions transforms by an
/// invertible map, so the strictness verdict is unchanged.
#[allow(clippy::needless_range_loop)]
pub fn transform_forms(fs: &FormSystem, m: &WMatrix) -> Result<FormSystem> {
    if fs.degrees.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::ShapeMismatch(
            "transform requires equal form degrees".into(),
        ));
    }
    if m.size() != fs.dim || !m.context().same_as(&fs.ctx) {
        return Err(Error::ShapeMismatch("matrix size must equal the dimension".into()));
    }
    if !m.entries_unit_or_zero() {
        return Err(Error::ShapeMismatch(
            "transform entries must be units or zero".into(),
        ));
    }
    let g = fs.dim;
    let trunc = fs.forms_w[0].trunc_degree();
    let minv = m.invert()?;
    let inner: Vec<MultiSeries> = (0..g)
        .map(|j| {
            let mut s = MultiSeries::zero(&fs.ctx, g, trunc);
            for k in 0..g {
                s.add_term(Monomial::variable(g, k), minv.entry(j, k).clone());
            }
            s
        })
        .collect();
    let substituted: Vec<MultiSeries> = fs
        .forms_w
        .iter()
        .map(|fj| fj.compose(&inner))
        .collect::<Result<Vec<_>>>()?;
    let mut new_forms = Vec::with_capacity(g);
    let mut excluded = vec![0usize; g];
    for i in 0..g {
        let mut acc = MultiSeries::zero(&fs.ctx, g, trunc);
        for (j, s) in substituted.iter().enumerate() {
            acc = acc.add(&s.scalar_mul(m.entry(i, j))?)?;
        }
        let mut unit_part = MultiSeries::zero(&fs.ctx, g, trunc);
        for (mono, c) in acc.terms() {
            if c.is_unit() {
                unit_part.add_term(mono.clone(), c.clone());
            } else {
                excluded[i] += 1;
            }
        }
        if unit_part.is_zero() {
            return Err(Error::TransformCollapsed(i));
        }
        new_forms.push(unit_part);
    }
    let mut out = FormSystem::from_unit_forms(&fs.ctx, new_forms)?;
    out.excluded_non_unit = excluded;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FormalGroupLaw;
    use crate::scalar::{PadicScalar, PrimeConfig, PrimeContext};

    fn ctx(p: u64, n: u32) -> Ctx {
        PrimeContext::new(PrimeConfig::new(p, 1, n).unwrap()).unwrap()
    }

    /// Frobenius-linear system G_i = sum_j a_ij X_j^d from residue entries.
    fn frobenius_system(c: &Ctx, d: u16, entries: &[Vec<i64>]) -> FormSystem {
        let g = entries.len();
        let forms = entries
            .iter()
            .map(|row| {
                let mut s = MultiSeries::zero(c, g, d as u32 + 1);
                for (j, &a) in row.iter().enumerate() {
                    let mut exps = vec![0u16; g];
                    exps[j] = d;
                    s.add_term(Monomial::new(exps), PadicScalar::from_integer(c, a));
                }
                s
            })
            .collect();
        FormSystem::from_unit_forms(c, forms).unwrap()
    }

    #[test]
    fn extract_forms_examples() {
        let c = ctx(3, 6);
        let mult = FormalGroupLaw::multiplicative(&c, 8).unwrap();
        let fs = extract_forms(&mult.mul_by_p().unwrap()).unwrap();
        assert_eq!(fs.degrees(), &[3]);
        assert_eq!(fs.forms_w()[0].canonical_string(), "T^3");

        let lt2 = FormalGroupLaw::lubin_tate(&c, 10, 2).unwrap();
        let fs = extract_forms(&lt2.mul_by_p().unwrap()).unwrap();
        assert_eq!(fs.degrees(), &[9]);
        assert_eq!(fs.forms_w()[0].canonical_string(), "T^9");

        let add = FormalGroupLaw::additive(&c, 8).unwrap();
        assert!(matches!(
            extract_forms(&add.mul_by_p().unwrap()),
            Err(Error::InfiniteHeightComponent(0))
        ));
    }

    #[test]
    fn non_p_power_degree_is_flagged() {
        let c = ctx(3, 6);
        // 3T + T^6: minimal unit degree 6 is not a power of 3
        let mut s = MultiSeries::zero(&c, 1, 8);
        s.add_term(Monomial::new(vec![1]), PadicScalar::from_integer(&c, 3));
        s.add_term(Monomial::new(vec![6]), PadicScalar::one(&c));
        let tuple = crate::series::SeriesTuple::new(vec![s]).unwrap();
        let mulp = MulPSeries::from_tuple(tuple, 3).unwrap();
        assert!(matches!(
            extract_forms(&mulp),
            Err(Error::NonPPowerDegree { component: 0, degree: 6 })
        ));
    }

    #[test]
    fn decide_strict_examples() {
        let c = ctx(3, 6);
        // dim 1, any unit form: strict
        let fs = frobenius_system(&c, 3, &[vec![2]]);
        let v = decide_strict(&fs);
        assert!(v.is_strict);
        assert_eq!(v.method, Some(Method::DeterminantShortcut));

        // identity matrix on X^9: strict
        let fs = frobenius_system(&c, 9, &[vec![1, 0], vec![0, 1]]);
        let v = decide_strict(&fs);
        assert!(v.is_strict);
        assert_eq!(v.determinant.as_deref(), Some("1"));

        // singular system: witness (1, 2) over F_3
        let fs = frobenius_system(&c, 3, &[vec![1, 1], vec![2, 2]]);
        let v = decide_strict(&fs);
        assert!(!v.is_strict);
        assert_eq!(v.reason, Reason::NontrivialCommonZero);
        // (2, 1) is a scalar multiple of the hand witness (1, 2); both
        // kill X1^3 + X2^3 and 2 X1^3 + 2 X2^3 over F_3.
        let w = v.witness.unwrap();
        assert_eq!(w, vec!["2", "1"]);

        // triangular system X1^3 + X2^3, X2^3: strict
        let fs = frobenius_system(&c, 3, &[vec![1, 1], vec![0, 1]]);
        assert!(decide_strict(&fs).is_strict);
        assert!(brute_force_common_zero(&fs, 3, 1 << 22).unwrap().is_none());
    }

    #[test]
    fn macaulay_agrees_with_shortcut() {
        let c = ctx(3, 6);
        for entries in [
            vec![vec![1, 0], vec![0, 1]],
            vec![vec![1, 1], vec![2, 2]],
            vec![vec![1, 2], vec![1, 1]],
            vec![vec![0, 1], vec![1, 0]],
            vec![vec![1, 1], vec![1, 2]],
        ] {
            let fs = frobenius_system(&c, 3, &entries);
            let shortcut = determinant_shortcut(&fs).unwrap();
            let macaulay = macaulay_decide(&fs);
            assert_eq!(shortcut.is_strict, macaulay.is_strict, "{entries:?}");
            let brute = brute_force_common_zero(&fs, 2, 1 << 22).unwrap();
            assert_eq!(brute.is_some(), !shortcut.is_strict, "{entries:?}");
            if let Some(w) = brute {
                for gi in fs.forms_mod_p() {
                    let gi = gi.map_into(&FqEmbedding::find(fs.context().residue_field(), &w.field).unwrap());
                    assert!(w.field.is_zero(&gi.evaluate(&w.coords)));
                }
            }
        }
    }

    #[test]
    fn mixed_monomial_systems_use_the_macaulay_path() {
        let c = ctx(3, 6);
        let form = |terms: &[(&[u16], i64)]| {
            let mut s = MultiSeries::zero(&c, 2, 4);
            for (exps, a) in terms {
                s.add_term(Monomial::new(exps.to_vec()), PadicScalar::from_integer(&c, *a));
            }
            s
        };

        // X1^3 + X1*X2^2 and X2^3 share no nontrivial zero: X2 = 0 forces
        // X1^3 = 0, and X2 != 0 makes the second form a unit.
        let strict_fs = FormSystem::from_unit_forms(
            &c,
            vec![
                form(&[(&[3, 0], 1), (&[1, 2], 1)]),
                form(&[(&[0, 3], 1)]),
            ],
        )
        .unwrap();
        assert!(determinant_shortcut(&strict_fs).is_none(), "mixed monomials defeat the shortcut");
        let v = decide_strict(&strict_fs);
        assert!(v.is_strict);
        assert_eq!(v.method, Some(Method::MacaulayRank));
        assert!(v.saturation_degree.is_some());
        assert!(brute_force_common_zero(&strict_fs, 2, 1 << 22).unwrap().is_none());

        // (X1 + X2)(X1^2 + X2^2) and X1^3 + X2^3 both vanish at (1, 2).
        let lax_fs = FormSystem::from_unit_forms(
            &c,
            vec![
                form(&[(&[3, 0], 1), (&[2, 1], 1), (&[1, 2], 1), (&[0, 3], 1)]),
                form(&[(&[3, 0], 1), (&[0, 3], 1)]),
            ],
        )
        .unwrap();
        let v = decide_strict(&lax_fs);
        assert!(!v.is_strict);
        assert_eq!(v.reason, Reason::NontrivialCommonZero);
        let w = brute_force_common_zero(&lax_fs, 1, 1 << 22).unwrap().unwrap();
        for g in lax_fs.forms_mod_p() {
            assert!(w.field.is_zero(&g.evaluate(&w.coords)));
        }
    }

    #[test]
    fn brute_force_respects_its_budget() {
        let c = ctx(3, 6);
        let fs = frobenius_system(&c, 3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert!(matches!(
            brute_force_common_zero(&fs, 2, 10),
            Err(Error::EnumerationBudget { .. })
        ));
    }

    #[test]
    fn macaulay_saturation_is_monotone() {
        let c = ctx(3, 6);
        let fs = frobenius_system(&c, 3, &[vec![1, 1], vec![0, 1]]);
        let bound: u32 = fs.degrees().iter().map(|&d| d - 1).sum::<u32>() + 1;
        let mut seen = false;
        for dstar in 3..=bound {
            let sat = macaulay_saturated_at(&fs, dstar);
            if seen {
                assert!(sat, "saturation must persist at degree {dstar}");
            }
            seen |= sat;
        }
        assert!(seen);
    }

    #[test]
    fn unequal_degrees_are_not_strict() {
        let c = ctx(3, 6);
        let lt1 = FormalGroupLaw::lubin_tate(&c, 12, 1).unwrap();
        let lt2 = FormalGroupLaw::lubin_tate(&c, 12, 2).unwrap();
        let prod = FormalGroupLaw::product(&[lt1, lt2]).unwrap();
        let fs = extract_forms(&prod.mul_by_p().unwrap()).unwrap();
        assert_eq!(fs.degrees(), &[3, 9]);
        let v = decide_strict(&fs);
        assert!(!v.is_strict);
        assert_eq!(v.reason, Reason::UnequalDegrees);
    }

    #[test]
    fn transform_examples() {
        let c = ctx(3, 6);
        let fs = frobenius_system(&c, 9, &[vec![1, 0], vec![0, 1]]);

        let id = WMatrix::identity(&c, 2);
        let same = transform_forms(&fs, &id).unwrap();
        assert_eq!(same.forms_w(), fs.forms_w());

        // swapping both components and variables returns this symmetric
        // system to itself; strictness is untouched either way
        let swap = WMatrix::from_integers(&c, &[vec![0, 1], vec![1, 0]]).unwrap();
        let swapped = transform_forms(&fs, &swap).unwrap();
        assert_eq!(swapped.forms_w()[0].canonical_string(), "X1^9");
        assert_eq!(swapped.forms_w()[1].canonical_string(), "X2^9");
        assert!(decide_strict(&swapped).is_strict);

        let upper = WMatrix::from_integers(&c, &[vec![1, 2], vec![0, 1]]).unwrap();
        let moved = transform_forms(&fs, &upper).unwrap();
        assert!(decide_strict(&moved).is_strict);

        // linear combination collapsing mod p is refused
        let dep = frobenius_system(&c, 3, &[vec![1, 0], vec![1, 0]]);
        let mix = WMatrix::from_integers(&c, &[vec![1, 2], vec![0, 1]]).unwrap();
        assert!(matches!(
            transform_forms(&dep, &mix),
            Err(Error::TransformCollapsed(0))
        ));
    }

    proptest::proptest! {
        #[test]
        fn shortcut_macaulay_and_enumeration_agree(entries in proptest::collection::vec(0u64..3, 4)) {
            let c = ctx(3, 6);
            let rows = vec![entries[0..2].to_vec(), entries[2..4].to_vec()];
            if rows.iter().any(|r| r.iter().all(|&x| x == 0)) {
                return Ok(());
            }
            let forms = rows
                .iter()
                .map(|row| {
                    let mut s = MultiSeries::zero(&c, 2, 4);
                    for (j, &a) in row.iter().enumerate() {
                        if a == 0 {
                            continue;
                        }
                        let mut exps = vec![0u16; 2];
                        exps[j] = 3;
                        s.add_term(Monomial::new(exps), PadicScalar::from_integer(&c, a as i64));
                    }
                    s
                })
                .collect();
            let fs = FormSystem::from_unit_forms(&c, forms).unwrap();
            let det = (entries[0] * entries[3] + 2 * entries[1] * entries[2]) % 3; // ad - bc mod 3
            let shortcut = determinant_shortcut(&fs).unwrap();
            proptest::prop_assert_eq!(shortcut.is_strict, det != 0);
            proptest::prop_assert_eq!(macaulay_decide(&fs).is_strict, det != 0);
            let witness = brute_force_common_zero(&fs, 1, 1 << 16).unwrap();
            proptest::prop_assert_eq!(witness.is_some(), det == 0);
        }
    }

    #[test]
    fn transform_commutes_with_extraction() {
        // Extracting forms from a conjugated group law matches transforming
        // the extracted forms.
        let c = ctx(3, 6);
        let lt2 = FormalGroupLaw::lubin_tate(&c, 10, 2).unwrap();
        let prod = FormalGroupLaw::product(&[lt2.clone(), lt2]).unwrap();
        let m = WMatrix::from_integers(&c, &[vec![1, 1], vec![0, 1]]).unwrap();

        let conjugated = prod.linear_conjugate(&m).unwrap();
        let lhs = extract_forms(&conjugated.mul_by_p().unwrap()).unwrap();
        let rhs = transform_forms(&extract_forms(&prod.mul_by_p().unwrap()).unwrap(), &m).unwrap();
        assert_eq!(lhs.forms_w(), rhs.forms_w());
        assert_eq!(decide_strict(&lhs).is_strict, decide_strict(&rhs).is_strict);
    }
}
