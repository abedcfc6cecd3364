//! Totally ramified extensions L = Frac(W)(pi) presented by an Eisenstein
//! polynomial, exact element arithmetic in the basis 1, pi, ..., pi^(e-1),
//! different ideals, and the delta function delta(a) = min(v(f'(pi)) - v(D), 0).
//!
//! The valuation of an element is read off its basis coefficients exactly:
//! the fractional parts i/e are pairwise distinct, so the minimum
//! v(c_i) + i/e is attained once and no cancellation can occur.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Ctx, PadicScalar};
use crate::series::MultiSeries;
use crate::valuation::{rat, Rational, Valuation};

/// L = Frac(W)(pi) with E(pi) = 0 for a monic Eisenstein polynomial E of
/// degree e over W.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EisensteinExtension {
    ctx: Ctx,
    degree: usize,
    /// Non-leading coefficients c_0..c_{e-1} of E.
    coeffs: Vec<PadicScalar>,
}

pub type Ext = Arc<EisensteinExtension>;

impl EisensteinExtension {
    /// Validates the Eisenstein conditions: v(c_0) = 1 exactly and
    /// v(c_i) >= 1 for 0 < i < e.
    pub fn new(ctx: &Ctx, coeffs: Vec<PadicScalar>) -> Result<Ext> {
        let e = coeffs.len();
        if e < 2 {
            return Err(Error::InvalidEisenstein("degree must be >= 2".into()));
        }
        for c in &coeffs {
            if !c.context().same_as(ctx) {
                return Err(Error::ContextMismatch);
            }
        }
        match coeffs[0].valuation() {
            Valuation::Exact(r) if r == rat(1, 1) => {}
            v => {
                return Err(Error::InvalidEisenstein(format!(
                    "constant term has valuation {v}, need exactly 1"
                )))
            }
        }
        for (i, c) in coeffs.iter().enumerate().skip(1) {
            if c.valuation().definitely_ge(rat(1, 1)) != Some(true) {
                return Err(Error::InvalidEisenstein(format!(
                    "coefficient of X^{i} has valuation < 1"
                )));
            }
        }
        Ok(Arc::new(EisensteinExtension {
            ctx: ctx.clone(),
            degree: e,
            coeffs,
        }))
    }

    /// The pure extension X^e + c0.
    pub fn pure(ctx: &Ctx, e: usize, c0: PadicScalar) -> Result<Ext> {
        let mut coeffs = vec![PadicScalar::zero(ctx); e];
        coeffs[0] = c0;
        Self::new(ctx, coeffs)
    }

    /// The level-r cyclotomic extension presented by E(X) = Phi_{p^r}(1+X),
    /// using Phi_{p^r}(Y) = sum_{j=0}^{p-1} Y^(j p^(r-1)).
    pub fn cyclotomic(ctx: &Ctx, r: u32) -> Result<Ext> {
        if r < 1 {
            return Err(Error::InvalidEisenstein("cyclotomic level must be >= 1".into()));
        }
        let p = ctx.p();
        let step = (p).pow(r - 1) as usize;
        let e = (p as usize - 1) * step;
        let mut acc: Vec<BigUint> = vec![BigUint::zero(); e + 1];
        for j in 0..p as usize {
            // (1+X)^(j*step)
            let m = j * step;
            let mut row = BigUint::one();
            for (k, slot) in acc.iter_mut().enumerate().take(m + 1) {
                *slot += &row;
                // next binomial C(m, k+1)
                row = row * BigUint::from((m - k) as u64) / BigUint::from((k + 1) as u64);
            }
        }
        debug_assert!(acc[e].is_one());
        let coeffs = acc[..e]
            .iter()
            .map(|c| PadicScalar::from_biguint(ctx, c))
            .collect();
        Self::new(ctx, coeffs)
    }

    pub fn context(&self) -> &Ctx {
        &self.ctx
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[PadicScalar] {
        &self.coeffs
    }

    pub fn is_tame(&self) -> bool {
        !(self.degree as u64).is_multiple_of(self.ctx.p())
    }

    /// The same extension with coefficients canonically lifted or reduced
    /// to another precision.
    pub fn with_precision(&self, target: &Ctx) -> Result<Ext> {
        let move_scalar = |c: &PadicScalar| {
            if target.precision() >= self.ctx.precision() {
                c.lift_precision(target)
            } else {
                c.reduce_precision(target)
            }
        };
        let coeffs = self.coeffs.iter().map(move_scalar).collect::<Result<Vec<_>>>()?;
        EisensteinExtension::new(target, coeffs)
    }

    pub fn polynomial_string(&self) -> String {
        let mut parts = vec![format!("X^{}", self.degree)];
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero_rep() {
                continue;
            }
            let cs = c.to_string();
            let cs = if cs.contains(' ') { format!("({cs})") } else { cs };
            parts.push(match i {
                0 => cs,
                1 => format!("{cs}*X"),
                _ => format!("{cs}*X^{i}"),
            });
        }
        parts.join(" + ")
    }
}

/// v(E'(pi)), the valuation of the different ideal of L over Frac(W).
pub fn different_valuation(ext: &Ext) -> Result<Rational> {
    let deriv = poly_derivative(ext, &eisenstein_full_coeffs(ext));
    let v = eval_wpoly(ext, &deriv, &RamifiedElement::uniformizer(ext)).valuation();
    match v {
        Valuation::Exact(r) => Ok(r),
        other => Err(Error::IndeterminatePrecision(format!(
            "different valuation only known as {other}"
        ))),
    }
}

fn eisenstein_full_coeffs(ext: &Ext) -> Vec<PadicScalar> {
    let mut full = ext.coeffs().to_vec();
    full.push(PadicScalar::one(ext.context()));
    full
}

/// An element of O_L in the power basis of pi.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamifiedElement {
    ext: Ext,
    coeffs: Vec<PadicScalar>,
}

impl RamifiedElement {
    pub fn zero(ext: &Ext) -> RamifiedElement {
        RamifiedElement {
            ext: ext.clone(),
            coeffs: vec![PadicScalar::zero(ext.context()); ext.degree()],
        }
    }

    pub fn one(ext: &Ext) -> RamifiedElement {
        Self::from_scalar(ext, PadicScalar::one(ext.context()))
    }

    pub fn uniformizer(ext: &Ext) -> RamifiedElement {
        let mut z = Self::zero(ext);
        z.coeffs[1] = PadicScalar::one(ext.context());
        z
    }

    pub fn from_scalar(ext: &Ext, c: PadicScalar) -> RamifiedElement {
        let mut z = Self::zero(ext);
        z.coeffs[0] = c;
        z
    }

    pub fn from_coeffs(ext: &Ext, coeffs: Vec<PadicScalar>) -> Result<RamifiedElement> {
        if coeffs.len() != ext.degree() {
            return Err(Error::ShapeMismatch(
                "coefficient count must equal the ramification index".into(),
            ));
        }
        for c in &coeffs {
            if !c.context().same_as(ext.context()) {
                return Err(Error::ContextMismatch);
            }
        }
        Ok(RamifiedElement { ext: ext.clone(), coeffs })
    }

    pub fn extension(&self) -> &Ext {
        &self.ext
    }

    pub fn coeffs(&self) -> &[PadicScalar] {
        &self.coeffs
    }

    pub fn is_zero_rep(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero_rep())
    }

    fn check_ext(&self, other: &RamifiedElement) -> Result<()> {
        if self.ext == other.ext {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn add(&self, other: &RamifiedElement) -> Result<RamifiedElement> {
        self.check_ext(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(RamifiedElement { ext: self.ext.clone(), coeffs })
    }

    pub fn sub(&self, other: &RamifiedElement) -> Result<RamifiedElement> {
        self.check_ext(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(RamifiedElement { ext: self.ext.clone(), coeffs })
    }

    pub fn neg(&self) -> RamifiedElement {
        RamifiedElement {
            ext: self.ext.clone(),
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn mul(&self, other: &RamifiedElement) -> Result<RamifiedElement> {
        self.check_ext(other)?;
        Ok(self.mul_raw(other))
    }

    fn mul_raw(&self, other: &RamifiedElement) -> RamifiedElement {
        let e = self.ext.degree();
        let ctx = self.ext.context();
        let mut prod = vec![PadicScalar::zero(ctx); 2 * e - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero_rep() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero_rep() {
                    continue;
                }
                let t = a.mul_raw(b);
                prod[i + j] = prod[i + j].add(&t).expect("same context");
            }
        }
        // Reduce by the monic Eisenstein relation pi^e = -(lower part).
        for i in (e..prod.len()).rev() {
            if prod[i].is_zero_rep() {
                continue;
            }
            let c = std::mem::replace(&mut prod[i], PadicScalar::zero(ctx));
            for (j, mj) in self.ext.coeffs().iter().enumerate() {
                if mj.is_zero_rep() {
                    continue;
                }
                let t = c.mul_raw(mj);
                prod[i - e + j] = prod[i - e + j].sub(&t).expect("same context");
            }
        }
        prod.truncate(e);
        RamifiedElement { ext: self.ext.clone(), coeffs: prod }
    }

    pub fn mul_scalar(&self, c: &PadicScalar) -> Result<RamifiedElement> {
        if !c.context().same_as(self.ext.context()) {
            return Err(Error::ContextMismatch);
        }
        Ok(RamifiedElement {
            ext: self.ext.clone(),
            coeffs: self.coeffs.iter().map(|a| a.mul_raw(c)).collect(),
        })
    }

    pub fn pow(&self, e: u32) -> RamifiedElement {
        let mut acc = Self::one(&self.ext);
        let mut base = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_raw(&base);
            }
            base = base.mul_raw(&base);
            k >>= 1;
        }
        acc
    }

    /// Exact rational valuation from the basis representation; a lower
    /// bound only when every coefficient sits at the precision floor.
    pub fn valuation(&self) -> Valuation {
        let e = self.ext.degree() as i64;
        let n = self.ext.context().precision() as i64;
        let mut best: Option<Rational> = None;
        let mut saw_exact = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if let Valuation::Exact(v) = c.valuation() {
                saw_exact = true;
                let total = v + rat(i as i64, e);
                best = Some(best.map_or(total, |b| b.min(total)));
            }
        }
        if saw_exact {
            Valuation::Exact(best.unwrap())
        } else {
            Valuation::AtLeast(rat(n, 1))
        }
    }

    /// Inverse of a unit of O_L via Newton iteration on the residue inverse.
    pub fn invert_unit(&self) -> Result<RamifiedElement> {
        match self.valuation() {
            Valuation::Exact(r) if r == rat(0, 1) => {}
            _ => return Err(Error::NonUnit),
        }
        let c0_inv = self.coeffs[0].invert()?;
        let mut x = Self::from_scalar(&self.ext, c0_inv);
        let one = Self::one(&self.ext);
        let two = one.add(&one).expect("same ext");
        let n = self.ext.context().precision() as usize * self.ext.degree();
        let steps = usize::BITS - n.next_power_of_two().leading_zeros() + 2;
        for _ in 0..steps {
            let t = two.sub(&self.mul_raw(&x))?;
            x = x.mul_raw(&t);
            if self.mul_raw(&x).sub(&one)?.is_zero_rep() {
                return Ok(x);
            }
        }
        debug_assert!(self.mul_raw(&x).sub(&one)?.is_zero_rep());
        Ok(x)
    }

    /// Exact division by p^k (every basis coefficient must be divisible).
    pub fn divide_exact_by_p_pow(&self, k: u32) -> Result<RamifiedElement> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.divide_exact_by_p_pow(k))
            .collect::<Result<Vec<_>>>()?;
        Ok(RamifiedElement { ext: self.ext.clone(), coeffs })
    }

    pub fn reduce_precision(&self, target_ext: &Ext) -> Result<RamifiedElement> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.reduce_precision(target_ext.context()))
            .collect::<Result<Vec<_>>>()?;
        RamifiedElement::from_coeffs(target_ext, coeffs)
    }

    /// The default polynomial presentation: the basis polynomial with the
    /// canonical representatives, trailing zeros trimmed.
    pub fn basis_polynomial(&self) -> Vec<PadicScalar> {
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.is_zero_rep()) {
            coeffs.pop();
        }
        coeffs
    }
}

impl fmt::Display for RamifiedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero_rep() {
                continue;
            }
            let cs = c.to_string();
            let cs = if cs.contains(' ') { format!("({cs})") } else { cs };
            parts.push(match i {
                0 => cs,
                1 if cs == "1" => "pi".to_string(),
                1 => format!("{cs}*pi"),
                _ if cs == "1" => format!("pi^{i}"),
                _ => format!("{cs}*pi^{i}"),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Evaluates a W-polynomial (dense coefficients, low degree first) at an
/// element of L, by Horner's rule.
pub fn eval_wpoly(ext: &Ext, coeffs: &[PadicScalar], at: &RamifiedElement) -> RamifiedElement {
    let mut acc = RamifiedElement::zero(ext);
    for c in coeffs.iter().rev() {
        acc = acc.mul_raw(at);
        acc.coeffs[0] = acc.coeffs[0].add(c).expect("same context");
    }
    acc
}

pub fn poly_derivative(ext: &Ext, coeffs: &[PadicScalar]) -> Vec<PadicScalar> {
    let _ = ext;
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.mul_i64(i as i64))
        .collect()
}

pub fn wpoly_string(coeffs: &[PadicScalar]) -> String {
    let mut parts = Vec::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero_rep() {
            continue;
        }
        let cs = c.to_string();
        let cs = if cs.contains(' ') { format!("({cs})") } else { cs };
        parts.push(match i {
            0 => cs,
            1 if cs == "1" => "X".to_string(),
            1 => format!("{cs}*X"),
            _ if cs == "1" => format!("X^{i}"),
            _ => format!("{cs}*X^{i}"),
        });
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

/// Verdict record for one element: v(f'(pi)), v(D_{L/K}), delta, and
/// membership in the kernel of the canonical derivation.
#[derive(Debug, Clone, Serialize)]
pub struct DeltaReport {
    pub element: String,
    pub presentation: String,
    pub v_f_prime: Valuation,
    #[serde(serialize_with = "crate::valuation::serialize_rational")]
    pub v_different: Rational,
    #[serde(serialize_with = "crate::valuation::serialize_rational")]
    pub delta: Rational,
    pub in_derivation_kernel: bool,
}

/// delta(a) = min(v(f'(pi)) - v(D_{L/K}), 0) where a = f(pi).
///
/// The default f is the basis polynomial of a; any polynomial presentation
/// gives the same value, which the test suite checks rather than assumes.
pub fn delta(a: &RamifiedElement, f_hint: Option<&[PadicScalar]>) -> Result<DeltaReport> {
    let ext = a.extension();
    let f: Vec<PadicScalar> = match f_hint {
        Some(h) => {
            let val = eval_wpoly(ext, h, &RamifiedElement::uniformizer(ext));
            if val != *a {
                return Err(Error::HintMismatch);
            }
            h.to_vec()
        }
        None => a.basis_polynomial(),
    };
    let v_different = different_valuation(ext)?;
    let deriv = poly_derivative(ext, &f);
    let v_f_prime = if deriv.iter().all(|c| c.is_zero_rep()) {
        Valuation::Infinite
    } else {
        eval_wpoly(ext, &deriv, &RamifiedElement::uniformizer(ext)).valuation()
    };
    let delta = delta_from_parts(&v_f_prime, v_different)?;
    Ok(DeltaReport {
        element: a.to_string(),
        presentation: wpoly_string(&f),
        v_f_prime,
        v_different,
        delta,
        in_derivation_kernel: delta == rat(0, 1),
    })
}

fn delta_from_parts(v_f_prime: &Valuation, v_different: Rational) -> Result<Rational> {
    match v_f_prime {
        Valuation::Infinite => Ok(rat(0, 1)),
        Valuation::Exact(v) => Ok((*v - v_different).min(rat(0, 1))),
        Valuation::AtLeast(b) => {
            if *b >= v_different {
                Ok(rat(0, 1))
            } else {
                Err(Error::IndeterminatePrecision(
                    "delta undecidable: derivative valuation below the floor".into(),
                ))
            }
        }
    }
}

/// Checks the delta sum/product/chain/annihilator rules on one pair.
#[derive(Debug, Clone, Serialize)]
pub struct DeltaPropertiesReport {
    pub sum_rule: bool,
    pub sum_equality_case: Option<bool>,
    pub product_rule: bool,
    pub chain_rule: bool,
    pub annihilator_rule: bool,
    #[serde(serialize_with = "crate::valuation::serialize_rational")]
    pub delta_a: Rational,
    #[serde(serialize_with = "crate::valuation::serialize_rational")]
    pub delta_b: Rational,
}

impl DeltaPropertiesReport {
    pub fn all_hold(&self) -> bool {
        self.sum_rule
            && self.sum_equality_case.unwrap_or(true)
            && self.product_rule
            && self.chain_rule
            && self.annihilator_rule
    }
}

pub fn delta_properties_check(
    a: &RamifiedElement,
    b: &RamifiedElement,
) -> Result<DeltaPropertiesReport> {
    a.check_ext(b)?;
    let da = delta(a, None)?.delta;
    let db = delta(b, None)?.delta;

    // (1) delta(a+b) >= min(delta a, delta b), equality when they differ.
    let dsum = delta(&a.add(b)?, None)?.delta;
    let sum_rule = dsum >= da.min(db);
    let sum_equality_case = if da != db { Some(dsum == da.min(db)) } else { None };

    // (2) delta(ab) >= min(delta a + v(b), delta b + v(a)), with the right
    // side clamped to <= 0 since delta's codomain is (-inf, 0].
    let product_rule = {
        let dab = delta(&a.mul(b)?, None)?.delta;
        let va = a.valuation();
        let vb = b.valuation();
        match (va.lower_bound(), vb.lower_bound()) {
            (Some(va), Some(vb)) => dab >= (da + vb).min(db + va).min(rat(0, 1)),
            _ => true,
        }
    };

    // (3) delta(f(a)) = min(v(f'(a)) + delta(a), 0) with f = X^2.
    let chain_rule = {
        let fa = a.mul(a)?;
        let lhs = delta(&fa, None)?.delta;
        let fprime_at_a = a.add(a)?; // derivative of X^2 evaluated at a
        let rhs = match fprime_at_a.valuation() {
            Valuation::Infinite => rat(0, 1),
            Valuation::Exact(v) => (v + da).min(rat(0, 1)),
            Valuation::AtLeast(bound) => {
                if bound + da >= rat(0, 1) {
                    rat(0, 1)
                } else {
                    return Err(Error::IndeterminatePrecision(
                        "chain rule undecidable at this precision".into(),
                    ));
                }
            }
        };
        lhs == rhs
    };

    // (4) x dy = 0 iff v(x) + delta(y) >= 0, with the left side decided as
    // v(x) + v(g'(pi)) >= v(D) for y = g(pi).
    let annihilator_rule = {
        let g = b.basis_polynomial();
        let deriv = poly_derivative(&a.ext, &g);
        let v_g_prime = if deriv.iter().all(|c| c.is_zero_rep()) {
            Valuation::Infinite
        } else {
            eval_wpoly(&a.ext, &deriv, &RamifiedElement::uniformizer(&a.ext)).valuation()
        };
        let v_d = different_valuation(&a.ext)?;
        let vx = a.valuation();
        let lhs = match (vx.lower_bound(), &v_g_prime) {
            (None, _) | (_, Valuation::Infinite) => Some(true),
            (Some(vx), Valuation::Exact(vg)) => Some(*vg + vx >= v_d),
            (Some(vx), Valuation::AtLeast(bound)) => {
                if *bound + vx >= v_d {
                    Some(true)
                } else {
                    None
                }
            }
        };
        let rhs = match vx.lower_bound() {
            None => Some(true),
            Some(vx) => Some(vx + db >= rat(0, 1)),
        };
        match (lhs, rhs) {
            (Some(l), Some(r)) => l == r,
            _ => {
                return Err(Error::IndeterminatePrecision(
                    "annihilator rule undecidable at this precision".into(),
                ))
            }
        }
    };

    Ok(DeltaPropertiesReport {
        sum_rule,
        sum_equality_case,
        product_rule,
        chain_rule,
        annihilator_rule,
        delta_a: da,
        delta_b: db,
    })
}

/// Re-expresses an element of L inside a larger extension L', given the
/// image of pi under an explicit embedding. The image must be a root of the
/// source Eisenstein polynomial to working precision: residual valuation at
/// least (3/4) N.
pub fn change_presentation(
    a: &RamifiedElement,
    target: &Ext,
    pi_image: &RamifiedElement,
) -> Result<RamifiedElement> {
    if pi_image.extension() != target {
        return Err(Error::ContextMismatch);
    }
    let src = a.extension();
    if !src.context().same_as(target.context()) {
        return Err(Error::ContextMismatch);
    }
    let full = eisenstein_full_coeffs(src);
    let residual = eval_wpoly(target, &full, pi_image).valuation();
    let n = target.context().precision() as i64;
    let threshold = rat(3 * n, 4);
    if residual.definitely_ge(threshold) != Some(true) {
        return Err(Error::EmbeddingResidual {
            residual: residual.to_string(),
        });
    }
    Ok(eval_wpoly(target, &a.basis_polynomial(), pi_image))
}

/// Result of evaluating a truncated series at a point: the value and the
/// valuation floor below which omitted tail terms cannot contribute.
#[derive(Debug, Clone)]
pub struct SeriesEvaluation {
    pub value: RamifiedElement,
    pub tail_bound: Rational,
}

impl MultiSeries {
    /// Evaluates the series at a point with positive-valuation coordinates.
    /// Omitted terms of degree > D all have valuation >= (D+1) * min v(point_i),
    /// which is reported alongside the value.
    pub fn evaluate(&self, point: &[RamifiedElement]) -> Result<SeriesEvaluation> {
        if point.len() != self.num_vars() {
            return Err(Error::ShapeMismatch(format!(
                "series in {} variables evaluated at {} coordinates",
                self.num_vars(),
                point.len()
            )));
        }
        let ext = point
            .first()
            .map(|z| z.extension().clone())
            .ok_or_else(|| Error::ShapeMismatch("empty evaluation point".into()))?;
        if !ext.context().same_as(self.context()) {
            return Err(Error::ContextMismatch);
        }
        let mut min_v: Option<Rational> = None;
        for (i, z) in point.iter().enumerate() {
            if z.extension() != &ext {
                return Err(Error::ContextMismatch);
            }
            let bound = match z.valuation() {
                Valuation::Exact(r) => r,
                Valuation::AtLeast(r) => r,
                Valuation::Infinite => continue,
            };
            if bound <= rat(0, 1) {
                return Err(Error::NonPositiveValuation(i));
            }
            min_v = Some(min_v.map_or(bound, |m| m.min(bound)));
        }
        // All-zero points only happen for structural zeros; use 1 as the
        // per-coordinate floor then (v >= N >= 1).
        let min_v = min_v.unwrap_or_else(|| rat(1, 1));

        let mut powers: Vec<Vec<RamifiedElement>> = point
            .iter()
            .map(|z| vec![RamifiedElement::one(&ext), z.clone()])
            .collect();
        let mut acc = RamifiedElement::zero(&ext);
        for (m, c) in self.terms() {
            let mut term = RamifiedElement::from_scalar(&ext, c.clone());
            for (j, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[j];
                while table.len() <= e as usize {
                    let next = table.last().unwrap().mul(&point[j])?;
                    table.push(next);
                }
                term = term.mul(&table[e as usize])?;
            }
            acc = acc.add(&term)?;
        }
        let tail_bound = rat(self.trunc_degree() as i64 + 1, 1) * min_v;
        Ok(SeriesEvaluation { value: acc, tail_bound })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{PrimeConfig, PrimeContext};

    fn ctx(p: u64, n: u32) -> Ctx {
        PrimeContext::new(PrimeConfig::new(p, 1, n).unwrap()).unwrap()
    }

    fn int(c: &Ctx, n: i64) -> PadicScalar {
        PadicScalar::from_integer(c, n)
    }

    /// X^e - c0 (note `pure` takes the stored sign: E = X^e + coeff).
    fn radical(c: &Ctx, e: usize, under: i64) -> Ext {
        EisensteinExtension::pure(c, e, int(c, -under)).unwrap()
    }

    #[test]
    fn relation_reduces_products() {
        let c = ctx(3, 6);
        // E = X^2 - 3u with u = 2: pi^2 = 6
        let ext = radical(&c, 2, 6);
        let pi = RamifiedElement::uniformizer(&ext);
        let sq = pi.mul(&pi).unwrap();
        assert_eq!(sq, RamifiedElement::from_scalar(&ext, int(&c, 6)));

        let zero = RamifiedElement::zero(&ext);
        assert_eq!(pi.add(&zero).unwrap(), pi);

        // (1 + pi)(1 - pi) = 1 - pi^2 = 1 + 3 for E = X^2 + 3
        let ext = EisensteinExtension::pure(&c, 2, int(&c, 3)).unwrap();
        let pi = RamifiedElement::uniformizer(&ext);
        let one = RamifiedElement::one(&ext);
        let prod = one.add(&pi).unwrap().mul(&one.sub(&pi).unwrap()).unwrap();
        assert_eq!(prod, RamifiedElement::from_scalar(&ext, int(&c, 4)));
    }

    #[test]
    fn valuation_examples() {
        let c = ctx(3, 6);
        let ext8 = radical(&c, 8, 3);
        assert_eq!(
            RamifiedElement::uniformizer(&ext8).valuation(),
            Valuation::Exact(rat(1, 8))
        );

        let ext2 = radical(&c, 2, 3);
        let pi = RamifiedElement::uniformizer(&ext2);
        let three = RamifiedElement::from_scalar(&ext2, int(&c, 3));
        assert_eq!(three.add(&pi).unwrap().valuation(), Valuation::Exact(rat(1, 2)));

        assert_eq!(
            RamifiedElement::zero(&ext2).valuation(),
            Valuation::AtLeast(rat(6, 1))
        );
    }

    #[test]
    fn inversion_in_extension() {
        let c = ctx(3, 6);
        let ext = radical(&c, 4, 3);
        let pi = RamifiedElement::uniformizer(&ext);
        let one = RamifiedElement::one(&ext);
        let u = one.add(&pi).unwrap(); // a unit
        let inv = u.invert_unit().unwrap();
        assert_eq!(u.mul(&inv).unwrap(), one);
        assert_eq!(pi.invert_unit(), Err(Error::NonUnit));
    }

    #[test]
    fn different_valuation_examples() {
        let c = ctx(3, 8);
        assert_eq!(different_valuation(&radical(&c, 2, 3)).unwrap(), rat(1, 2));
        let ext8 = EisensteinExtension::pure(&c, 8, int(&c, 3)).unwrap();
        assert_eq!(different_valuation(&ext8).unwrap(), rat(7, 8));
        // Tame formula (e-1)/e across small degrees coprime to p.
        for e in [2usize, 4, 5, 7, 8, 10] {
            assert_eq!(
                different_valuation(&radical(&c, e, 3)).unwrap(),
                rat(e as i64 - 1, e as i64),
                "tame different for e = {e}"
            );
        }
    }

    #[test]
    fn cyclotomic_level_two_is_wild_with_known_different() {
        let c = ctx(3, 8);
        let ext = EisensteinExtension::cyclotomic(&c, 2).unwrap();
        assert_eq!(ext.degree(), 6);
        assert!(!ext.is_tame());
        // Coefficients of Phi_9(1+X).
        let expected = [3i64, 9, 18, 21, 15, 6];
        for (i, want) in expected.iter().enumerate() {
            assert_eq!(ext.coeffs()[i], int(&c, *want), "coefficient of X^{i}");
        }
        // Symbolic oracle: v(D) = r - 1/(p-1) = 2 - 1/2.
        assert_eq!(different_valuation(&ext).unwrap(), rat(3, 2));
    }

    #[test]
    fn delta_examples() {
        let c = ctx(3, 8);
        let ext = radical(&c, 2, 3);
        let pi = RamifiedElement::uniformizer(&ext);
        let rep = delta(&pi, None).unwrap();
        assert_eq!(rep.delta, rat(-1, 2));
        assert!(!rep.in_derivation_kernel);

        let konst = RamifiedElement::from_scalar(&ext, int(&c, 7));
        let rep = delta(&konst, None).unwrap();
        assert_eq!(rep.delta, rat(0, 1));
        assert!(rep.in_derivation_kernel);
        assert_eq!(rep.v_f_prime, Valuation::Infinite);

        // eps_2 = 1 + pi in the level-2 cyclotomic extension
        let cyc = EisensteinExtension::cyclotomic(&c, 2).unwrap();
        let eps = RamifiedElement::one(&cyc)
            .add(&RamifiedElement::uniformizer(&cyc))
            .unwrap();
        let rep = delta(&eps, None).unwrap();
        assert_eq!(rep.delta, rat(-3, 2));
    }

    #[test]
    fn delta_property_examples() {
        let c = ctx(3, 8);
        let ext = radical(&c, 2, -3); // E = X^2 + 3
        let pi = RamifiedElement::uniformizer(&ext);

        let rep = delta_properties_check(&pi, &pi).unwrap();
        assert!(rep.all_hold());
        let d2pi = delta(&pi.add(&pi).unwrap(), None).unwrap().delta;
        assert_eq!(d2pi, rat(-1, 2));

        let three = RamifiedElement::from_scalar(&ext, int(&c, 3));
        let rep = delta_properties_check(&pi, &three).unwrap();
        assert!(rep.all_hold());
        assert_eq!(rep.sum_equality_case, Some(true));

        // Chain rule example: delta(pi^2) = 0 = min(v(2 pi) + delta(pi), 0).
        let pisq = pi.mul(&pi).unwrap();
        assert_eq!(delta(&pisq, None).unwrap().delta, rat(0, 1));
    }

    #[test]
    fn change_presentation_preserves_delta() {
        let c = ctx(3, 8);
        let sub = radical(&c, 2, 3); // Q3ur(3^(1/2))
        let sup = radical(&c, 4, 3); // Q3ur(3^(1/4))
        let pi_sub = RamifiedElement::uniformizer(&sub);
        let pi_sup = RamifiedElement::uniformizer(&sup);
        let image = pi_sup.mul(&pi_sup).unwrap();

        let moved = change_presentation(&pi_sub, &sup, &image).unwrap();
        assert_eq!(moved, image);
        assert_eq!(delta(&pi_sub, None).unwrap().delta, rat(-1, 2));
        assert_eq!(delta(&moved, None).unwrap().delta, rat(-1, 2));

        // identity embedding
        let same = change_presentation(&pi_sub, &sub, &pi_sub).unwrap();
        assert_eq!(delta(&same, None).unwrap().delta, rat(-1, 2));

        // constants stay delta = 0
        let konst = RamifiedElement::from_scalar(&sub, int(&c, 5));
        let moved = change_presentation(&konst, &sup, &image).unwrap();
        assert_eq!(delta(&moved, None).unwrap().delta, rat(0, 1));

        // a non-root image is rejected
        let bad = change_presentation(&pi_sub, &sup, &pi_sup);
        assert!(matches!(bad, Err(Error::EmbeddingResidual { .. })));
    }

    #[test]
    fn series_evaluation_with_tail_bound() {
        let c = ctx(3, 8);
        let ext = radical(&c, 2, -3); // pi^2 = -3
        let pi = RamifiedElement::uniformizer(&ext);

        let t = MultiSeries::variable(&c, 1, 3, 0);
        let got = t.evaluate(std::slice::from_ref(&pi)).unwrap();
        assert_eq!(got.value, pi);

        // 3T + T^3 at pi: v(3 pi) = v(pi^3) = 3/2, sum valuation >= 3/2
        let s = t.scalar_mul(&int(&c, 3)).unwrap().add(&t.pow(3)).unwrap();
        let got = s.evaluate(std::slice::from_ref(&pi)).unwrap();
        assert_eq!(got.value.valuation().definitely_ge(rat(3, 2)), Some(true));
        assert_eq!(got.tail_bound, rat(2, 1)); // (D+1) * v(pi) = 4/2

        let zero = RamifiedElement::zero(&ext);
        let got = s.evaluate(std::slice::from_ref(&zero)).unwrap();
        assert!(got.value.is_zero_rep());

        let unit_point = RamifiedElement::one(&ext);
        assert!(matches!(
            s.evaluate(std::slice::from_ref(&unit_point)),
            Err(Error::NonPositiveValuation(0))
        ));
    }

    #[test]
    fn elements_of_different_extensions_never_combine() {
        let c = ctx(3, 6);
        let a = RamifiedElement::uniformizer(&radical(&c, 2, 3));
        let b = RamifiedElement::uniformizer(&radical(&c, 2, 6));
        assert_eq!(a.add(&b), Err(Error::ContextMismatch));
        assert_eq!(a.mul(&b), Err(Error::ContextMismatch));
    }

    #[test]
    fn valuation_is_multiplicative_and_ultrametric() {
        let c = ctx(3, 8);
        let ext = radical(&c, 4, 3);
        let pi = RamifiedElement::uniformizer(&ext);
        let samples: Vec<RamifiedElement> = (0..4)
            .map(|i| {
                let base = pi.pow(i as u32);
                base.mul_scalar(&int(&c, 3 * i + 1)).unwrap()
                    .add(&pi.pow(i as u32 + 2).mul_scalar(&int(&c, i + 2)).unwrap())
                    .unwrap()
            })
            .collect();
        for a in &samples {
            for b in &samples {
                let (va, vb) = (a.valuation().finite_exact().unwrap(), b.valuation().finite_exact().unwrap());
                if va + vb < rat(6, 1) {
                    assert_eq!(
                        a.mul(b).unwrap().valuation(),
                        Valuation::Exact(va + vb),
                        "v(ab) = v(a) + v(b)"
                    );
                }
                let vsum = a.add(b).unwrap().valuation();
                assert_eq!(vsum.definitely_ge(va.min(vb)), Some(true), "ultrametric bound");
            }
        }
    }

    #[test]
    fn delta_accepts_consistent_hints_and_rejects_others() {
        let c = ctx(3, 8);
        let ext = radical(&c, 2, 3);
        let pi = RamifiedElement::uniformizer(&ext);
        let pisq = pi.mul(&pi).unwrap(); // = 3, a constant

        // basis presentation of pi^2 is the constant 3, giving delta 0;
        // the hint f = X^2 must give the same delta by independence
        let hint = vec![int(&c, 0), int(&c, 0), int(&c, 1)];
        let rep_default = delta(&pisq, None).unwrap();
        let rep_hint = delta(&pisq, Some(&hint)).unwrap();
        assert_eq!(rep_default.delta, rat(0, 1));
        assert_eq!(rep_hint.delta, rep_default.delta);
        assert_eq!(rep_hint.presentation, "X^2");

        let wrong = vec![int(&c, 1)];
        assert!(matches!(delta(&pisq, Some(&wrong)), Err(Error::HintMismatch)));
    }

    #[test]
    fn cyclotomic_levels_deepen_the_delta_range() {
        // Sampled min delta drops from level 1 to level 2: the finite
        // shadow of deep ramification along the tower.
        let c = ctx(3, 8);
        let mut mins = Vec::new();
        for r in [1u32, 2] {
            let ext = EisensteinExtension::cyclotomic(&c, r).unwrap();
            let pi = RamifiedElement::uniformizer(&ext);
            let one = RamifiedElement::one(&ext);
            let samples = [
                pi.clone(),
                one.add(&pi).unwrap(),
                pi.mul(&pi).unwrap().add(&pi).unwrap(),
                RamifiedElement::from_scalar(&ext, int(&c, 5)),
            ];
            let min = samples
                .iter()
                .map(|a| delta(a, None).unwrap().delta)
                .min()
                .unwrap();
            mins.push(min);
        }
        assert_eq!(mins[0], rat(-1, 2));
        assert_eq!(mins[1], rat(-3, 2));
        assert!(mins[1] < mins[0]);
    }

    #[test]
    fn eisenstein_validation() {
        let c = ctx(3, 6);
        // constant term a unit: not Eisenstein
        assert!(EisensteinExtension::pure(&c, 2, int(&c, 1)).is_err());
        // constant term with valuation 2: not Eisenstein
        assert!(EisensteinExtension::pure(&c, 2, int(&c, 9)).is_err());
        // middle coefficient a unit: not Eisenstein
        let coeffs = vec![int(&c, 3), int(&c, 1)];
        assert!(EisensteinExtension::new(&c, coeffs).is_err());
    }
}
