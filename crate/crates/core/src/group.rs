//! Formal group laws of dimension g over W: constructors, axiom checks,
//! and the multiplication-by-n series.
//!
//! A law is a g-tuple of series in 2g variables; variables 0..g are the
//! X block and g..2g the Y block. [n] is computed by iterated composition
//! [n](X) = F(X, [n-1](X)), which keeps every coefficient in W at full
//! precision (the formal logarithm would divide by integers up to the
//! truncation degree).

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::WMatrix;
use crate::ramified::RamifiedElement;
use crate::scalar::{Ctx, PadicScalar};
use crate::series::{Monomial, MultiSeries, SeriesTuple};
use crate::valuation::Valuation;

/// Constructor descriptor; carries enough data to rebuild the law at a
/// different working precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Multiplicative,
    Additive,
    LubinTate(u32),
    Elliptic(EllipticCoefficients),
    Product(Vec<Provenance>),
    LinearChange {
        base: Box<Provenance>,
        matrix: Vec<Vec<PadicScalar>>,
    },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Multiplicative => write!(f, "multiplicative"),
            Provenance::Additive => write!(f, "additive"),
            Provenance::LubinTate(h) => write!(f, "lubin_tate(h={h})"),
            Provenance::Elliptic(c) => write!(f, "elliptic({c})"),
            Provenance::Product(children) => {
                let parts: Vec<String> = children.iter().map(|c| c.to_string()).collect();
                write!(f, "product[{}]", parts.join(", "))
            }
            Provenance::LinearChange { base, .. } => write!(f, "linear_change({base})"),
        }
    }
}

/// Weierstrass coefficients a1, a2, a3, a4, a6 over W.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllipticCoefficients {
    pub a1: PadicScalar,
    pub a2: PadicScalar,
    pub a3: PadicScalar,
    pub a4: PadicScalar,
    pub a6: PadicScalar,
}

impl EllipticCoefficients {
    pub fn new(a: [PadicScalar; 5]) -> EllipticCoefficients {
        let [a1, a2, a3, a4, a6] = a;
        EllipticCoefficients { a1, a2, a3, a4, a6 }
    }

    /// Short form y^2 = x^3 + A x + B.
    pub fn short(ctx: &Ctx, a4: i64, a6: i64) -> EllipticCoefficients {
        EllipticCoefficients {
            a1: PadicScalar::zero(ctx),
            a2: PadicScalar::zero(ctx),
            a3: PadicScalar::zero(ctx),
            a4: PadicScalar::from_integer(ctx, a4),
            a6: PadicScalar::from_integer(ctx, a6),
        }
    }

    pub fn from_integers(ctx: &Ctx, a: [i64; 5]) -> EllipticCoefficients {
        EllipticCoefficients {
            a1: PadicScalar::from_integer(ctx, a[0]),
            a2: PadicScalar::from_integer(ctx, a[1]),
            a3: PadicScalar::from_integer(ctx, a[2]),
            a4: PadicScalar::from_integer(ctx, a[3]),
            a6: PadicScalar::from_integer(ctx, a[4]),
        }
    }

    pub fn discriminant(&self) -> Result<PadicScalar> {
        let a1 = &self.a1;
        let a2 = &self.a2;
        let a3 = &self.a3;
        let a4 = &self.a4;
        let a6 = &self.a6;
        let b2 = a1.mul(a1)?.add(&a2.mul_i64(4))?;
        let b4 = a4.mul_i64(2).add(&a1.mul(a3)?)?;
        let b6 = a3.mul(a3)?.add(&a6.mul_i64(4))?;
        let b8 = a1
            .mul(a1)?
            .mul(a6)?
            .add(&a2.mul(a6)?.mul_i64(4))?
            .sub(&a1.mul(a3)?.mul(a4)?)?
            .add(&a2.mul(&a3.mul(a3)?)?)?
            .sub(&a4.mul(a4)?)?;
        let d = b2
            .mul(&b2)?
            .mul(&b8)?
            .neg()
            .sub(&b4.mul(&b4)?.mul(&b4)?.mul_i64(8))?
            .sub(&b6.mul(&b6)?.mul_i64(27))?
            .add(&b2.mul(&b4)?.mul(&b6)?.mul_i64(9))?;
        Ok(d)
    }

    fn with_precision(&self, target: &Ctx, up: bool) -> Result<EllipticCoefficients> {
        let mv = |c: &PadicScalar| {
            if up {
                c.lift_precision(target)
            } else {
                c.reduce_precision(target)
            }
        };
        Ok(EllipticCoefficients {
            a1: mv(&self.a1)?,
            a2: mv(&self.a2)?,
            a3: mv(&self.a3)?,
            a4: mv(&self.a4)?,
            a6: mv(&self.a6)?,
        })
    }
}

impl fmt::Display for EllipticCoefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "a1={}, a2={}, a3={}, a4={}, a6={}",
            self.a1, self.a2, self.a3, self.a4, self.a6
        )
    }
}

/// A formal group law with its unit/commutativity checks done at
/// construction; associativity is checked by [`FormalGroupLaw::verify_axioms`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalGroupLaw {
    ctx: Ctx,
    dim: usize,
    trunc: u32,
    law: SeriesTuple,
    provenance: Provenance,
}

/// The [p]-tuple: g series in g variables whose linear part is p * identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MulPSeries {
    tuple: SeriesTuple,
    multiplier: u64,
}

impl MulPSeries {
    /// Validates the normalization: the linear part must be
    /// `multiplier * identity`.
    pub fn from_tuple(tuple: SeriesTuple, multiplier: u64) -> Result<MulPSeries> {
        let g = tuple.len();
        let ctx = tuple.components()[0].context().clone();
        let m = PadicScalar::from_integer(&ctx, multiplier as i64);
        for (i, comp) in tuple.components().iter().enumerate() {
            for j in 0..g {
                let got = comp.coefficient(&Monomial::variable(g, j));
                let want = if i == j { m.clone() } else { PadicScalar::zero(&ctx) };
                if got != want {
                    return Err(Error::ShapeMismatch(format!(
                        "linear part of component {i} is not {multiplier} * identity"
                    )));
                }
            }
        }
        Ok(MulPSeries { tuple, multiplier })
    }

    pub fn tuple(&self) -> &SeriesTuple {
        &self.tuple
    }

    pub fn multiplier(&self) -> u64 {
        self.multiplier
    }

    pub fn dim(&self) -> usize {
        self.tuple.len()
    }
}

/// Default truncation degree: p^h_max + p + 2.
pub fn default_trunc(p: u64, h_max: u32) -> u32 {
    (p.pow(h_max) + p + 2) as u32
}

impl FormalGroupLaw {
    pub fn context(&self) -> &Ctx {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trunc_degree(&self) -> u32 {
        self.trunc
    }

    pub fn law(&self) -> &SeriesTuple {
        &self.law
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    fn from_parts(
        ctx: &Ctx,
        dim: usize,
        trunc: u32,
        law: SeriesTuple,
        provenance: Provenance,
    ) -> Result<FormalGroupLaw> {
        let fg = FormalGroupLaw {
            ctx: ctx.clone(),
            dim,
            trunc,
            law,
            provenance,
        };
        if !fg.unit_law_holds()? {
            return Err(Error::ShapeMismatch("law violates F(X,0) = X".into()));
        }
        Ok(fg)
    }

    /// F(X, Y) = X + Y + XY.
    pub fn multiplicative(ctx: &Ctx, trunc: u32) -> Result<FormalGroupLaw> {
        let x = MultiSeries::variable(ctx, 2, trunc, 0);
        let y = MultiSeries::variable(ctx, 2, trunc, 1);
        let law = x.add(&y)?.add(&x.mul(&y)?)?;
        Self::from_parts(ctx, 1, trunc, SeriesTuple::new(vec![law])?, Provenance::Multiplicative)
    }

    /// F(X, Y) = X + Y.
    pub fn additive(ctx: &Ctx, trunc: u32) -> Result<FormalGroupLaw> {
        let x = MultiSeries::variable(ctx, 2, trunc, 0);
        let y = MultiSeries::variable(ctx, 2, trunc, 1);
        let law = x.add(&y)?;
        Self::from_parts(ctx, 1, trunc, SeriesTuple::new(vec![law])?, Provenance::Additive)
    }

    /// The height-h law with F === X + Y mod degree 2 and
    /// F(f(X), f(Y)) = f(F(X, Y)) for f(x) = p x + x^(p^h), solved degree by
    /// degree. The correction at degree m divides by p(p^(m-1) - 1), so the
    /// solve runs at internal precision N + D - 1 and reduces afterwards.
    pub fn lubin_tate(ctx: &Ctx, trunc: u32, height: u32) -> Result<FormalGroupLaw> {
        let p = ctx.p();
        let q128 = (p as u128).pow(height);
        if q128 > trunc as u128 {
            return Err(Error::TruncationExceeded {
                trunc,
                needed: format!("degree p^h = {q128} for the height-{height} series"),
            });
        }
        let q = q128 as u32;
        let work = ctx.with_precision(ctx.precision() + trunc - 1)?;
        let x = MultiSeries::variable(&work, 2, trunc, 0);
        let y = MultiSeries::variable(&work, 2, trunc, 1);
        let mut law = x.add(&y)?;
        let p_big = BigUint::from(p);
        for m in 2..=trunc {
            // Solve (p^m - p) E = [f(F) - F(f(X), f(Y))]_degree m.
            let local = law.retruncate(m);
            let fx = MultiSeries::variable(&work, 2, m, 0);
            let fy = MultiSeries::variable(&work, 2, m, 1);
            let inner = [
                fx.scalar_mul(&PadicScalar::from_integer(&work, p as i64))?.add(&fx.pow(q))?,
                fy.scalar_mul(&PadicScalar::from_integer(&work, p as i64))?.add(&fy.pow(q))?,
            ];
            let lhs = local
                .scalar_mul(&PadicScalar::from_integer(&work, p as i64))?
                .add(&local.pow(q))?;
            let rhs = local.compose(&inner)?;
            let gap = lhs.sub(&rhs)?.graded_part(m)?;
            if gap.is_zero() {
                continue;
            }
            let unit = PadicScalar::from_biguint(&work, &(p_big.pow(m) / &p_big - BigUint::one()));
            let unit_inv = unit.invert()?;
            let mut correction = MultiSeries::zero(&work, 2, trunc);
            for (mono, c) in gap.terms() {
                let scaled = c.mul_raw(&unit_inv).divide_exact_by_p_pow(1)?;
                correction.add_term(mono.clone(), scaled);
            }
            law = law.add(&correction)?;
        }
        let law = law.reduce_precision(ctx)?;
        Self::from_parts(ctx, 1, trunc, SeriesTuple::new(vec![law])?, Provenance::LubinTate(height))
    }

    /// The chord construction on a Weierstrass curve in the parameter
    /// t = -x/y; every step divides only by unit series, so all
    /// coefficients stay in W at the run precision.
    pub fn elliptic(ctx: &Ctx, trunc: u32, coeffs: &EllipticCoefficients) -> Result<FormalGroupLaw> {
        if !coeffs.discriminant()?.is_unit() {
            return Err(Error::SingularReduction);
        }
        let w = elliptic_w_expansion(ctx, trunc + 3, coeffs)?;

        let bi = |c: &PadicScalar| MultiSeries::constant(ctx, 2, trunc, c.clone());
        let t1 = MultiSeries::variable(ctx, 2, trunc, 0);
        let t2 = MultiSeries::variable(ctx, 2, trunc, 1);

        // lambda = (w(t2) - w(t1)) / (t2 - t1), built term by term:
        // t^n contributes a_n * sum_{i+j=n-1} t1^i t2^j.
        let mut lambda = MultiSeries::zero(ctx, 2, trunc);
        for (mono, c) in w.terms() {
            let n = mono.degree() as u16;
            for i in 0..n {
                let j = n - 1 - i;
                lambda.add_term(Monomial::new(vec![i, j]), c.clone());
            }
        }
        let w1 = w.remap_variables(2, &[0])?.retruncate(trunc);
        let nu = w1.sub(&lambda.mul(&t1)?)?;

        // The chord meets the cubic where
        //   C3 t^3 + C2 t^2 + ... = 0, with roots t1, t2, t3.
        let l2 = lambda.mul(&lambda)?;
        let c3 = MultiSeries::constant(ctx, 2, trunc, PadicScalar::one(ctx))
            .add(&l2.mul(&bi(&coeffs.a4))?)?
            .add(&lambda.mul(&bi(&coeffs.a2))?)?
            .add(&l2.mul(&lambda)?.mul(&bi(&coeffs.a6))?)?;
        let c2 = lambda
            .mul(&bi(&coeffs.a1))?
            .add(&nu.mul(&bi(&coeffs.a2))?)?
            .add(&l2.mul(&bi(&coeffs.a3))?)?
            .add(&lambda.mul(&nu)?.mul(&bi(&coeffs.a4))?.scalar_mul(&PadicScalar::from_integer(ctx, 2))?)?
            .add(&l2.mul(&nu)?.mul(&bi(&coeffs.a6))?.scalar_mul(&PadicScalar::from_integer(ctx, 3))?)?;
        let t3 = c2.mul(&c3.invert_unit_series()?)?.neg().sub(&t1)?.sub(&t2)?;

        // Formal inverse: i(t) = -t / (1 - a1 t - a3 w(t)).
        let w_t3 = w.retruncate(trunc).compose(std::slice::from_ref(&t3))?;
        let den = MultiSeries::constant(ctx, 2, trunc, PadicScalar::one(ctx))
            .sub(&t3.mul(&bi(&coeffs.a1))?)?
            .sub(&w_t3.mul(&bi(&coeffs.a3))?)?;
        let law = t3.neg().mul(&den.invert_unit_series()?)?;
        Self::from_parts(
            ctx,
            1,
            trunc,
            SeriesTuple::new(vec![law])?,
            Provenance::Elliptic(coeffs.clone()),
        )
    }

    /// Block-diagonal product law.
    pub fn product(children: &[FormalGroupLaw]) -> Result<FormalGroupLaw> {
        if children.is_empty() {
            return Err(Error::ShapeMismatch("empty product".into()));
        }
        let ctx = children[0].ctx.clone();
        let trunc = children[0].trunc;
        for c in children {
            if !c.ctx.same_as(&ctx) {
                return Err(Error::ContextMismatch);
            }
            if c.trunc != trunc {
                return Err(Error::ShapeMismatch("children disagree on truncation".into()));
            }
        }
        let g: usize = children.iter().map(|c| c.dim).sum();
        let mut components = Vec::with_capacity(g);
        let mut offset = 0;
        for child in children {
            let gc = child.dim;
            // X_j -> offset + j, Y_j -> g + offset + j
            let map: Vec<usize> = (0..gc)
                .map(|j| offset + j)
                .chain((0..gc).map(|j| g + offset + j))
                .collect();
            for comp in child.law.components() {
                components.push(comp.remap_variables(2 * g, &map)?);
            }
            offset += gc;
        }
        let provenance = Provenance::Product(children.iter().map(|c| c.provenance.clone()).collect());
        Self::from_parts(&ctx, g, trunc, SeriesTuple::new(components)?, provenance)
    }

    /// Conjugation by an invertible linear change of coordinates:
    /// G = M . F(M^-1 X, M^-1 Y).
    pub fn linear_conjugate(&self, m: &WMatrix) -> Result<FormalGroupLaw> {
        if m.size() != self.dim || !m.context().same_as(&self.ctx) {
            return Err(Error::ShapeMismatch("matrix size must equal the dimension".into()));
        }
        let g = self.dim;
        let minv = m.invert()?;
        let mut inner = Vec::with_capacity(2 * g);
        for block in 0..2 {
            for j in 0..g {
                let mut s = MultiSeries::zero(&self.ctx, 2 * g, self.trunc);
                for k in 0..g {
                    s.add_term(
                        Monomial::variable(2 * g, block * g + k),
                        minv.entry(j, k).clone(),
                    );
                }
                inner.push(s);
            }
        }
        let substituted: Vec<MultiSeries> = self
            .law
            .components()
            .iter()
            .map(|c| c.compose(&inner))
            .collect::<Result<Vec<_>>>()?;
        let mut components = Vec::with_capacity(g);
        for i in 0..g {
            let mut acc = MultiSeries::zero(&self.ctx, 2 * g, self.trunc);
            for (j, s) in substituted.iter().enumerate() {
                acc = acc.add(&s.scalar_mul(m.entry(i, j))?)?;
            }
            components.push(acc);
        }
        let provenance = Provenance::LinearChange {
            base: Box::new(self.provenance.clone()),
            matrix: m.rows().to_vec(),
        };
        Self::from_parts(&self.ctx, g, self.trunc, SeriesTuple::new(components)?, provenance)
    }

    /// Rebuilds the same constructor at another coefficient precision.
    pub fn rebuild_with_precision(&self, target: &Ctx) -> Result<FormalGroupLaw> {
        rebuild(&self.provenance, target, self.trunc)
    }

    fn unit_law_holds(&self) -> Result<bool> {
        let g = self.dim;
        let id = SeriesTuple::identity(&self.ctx, g, self.trunc);
        let x_inner: Vec<MultiSeries> = (0..g)
            .map(|i| MultiSeries::variable(&self.ctx, g, self.trunc, i))
            .chain((0..g).map(|_| MultiSeries::zero(&self.ctx, g, self.trunc)))
            .collect();
        let y_inner: Vec<MultiSeries> = (0..g)
            .map(|_| MultiSeries::zero(&self.ctx, g, self.trunc))
            .chain((0..g).map(|i| MultiSeries::variable(&self.ctx, g, self.trunc, i)))
            .collect();
        Ok(self.law.compose(&x_inner)? == id && self.law.compose(&y_inner)? == id)
    }

    /// Exact term-map checks of the group-law axioms up to truncation.
    pub fn verify_axioms(&self) -> Result<AxiomReport> {
        let g = self.dim;
        let unit_laws = self.unit_law_holds()?;

        let swap_map: Vec<usize> = (0..g).map(|i| g + i).chain(0..g).collect();
        let mut commutative = true;
        for comp in self.law.components() {
            if comp.remap_variables(2 * g, &swap_map)? != *comp {
                commutative = false;
                break;
            }
        }

        let associative = self.associativity_gap()?.is_none();
        Ok(AxiomReport {
            unit_laws,
            commutative,
            associative,
        })
    }

    /// Returns the first component where F(F(X,Y),Z) != F(X,F(Y,Z)), if any.
    fn associativity_gap(&self) -> Result<Option<usize>> {
        let g = self.dim;
        let n3 = 3 * g;
        let embed_xy: Vec<usize> = (0..2 * g).collect();
        let embed_yz: Vec<usize> = (g..3 * g).collect();
        let f_xy: Vec<MultiSeries> = self
            .law
            .components()
            .iter()
            .map(|c| c.remap_variables(n3, &embed_xy))
            .collect::<Result<Vec<_>>>()?;
        let f_yz: Vec<MultiSeries> = self
            .law
            .components()
            .iter()
            .map(|c| c.remap_variables(n3, &embed_yz))
            .collect::<Result<Vec<_>>>()?;
        let zvars: Vec<MultiSeries> = (2 * g..3 * g)
            .map(|i| MultiSeries::variable(&self.ctx, n3, self.trunc, i))
            .collect();
        let xvars: Vec<MultiSeries> = (0..g)
            .map(|i| MultiSeries::variable(&self.ctx, n3, self.trunc, i))
            .collect();

        let mut left_inner = f_xy;
        left_inner.extend(zvars);
        let mut right_inner = xvars;
        right_inner.extend(f_yz);

        for (i, comp) in self.law.components().iter().enumerate() {
            let lhs = comp.compose(&left_inner)?;
            let rhs = comp.compose(&right_inner)?;
            if lhs != rhs {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// [n] by iterated composition; [1] is the identity tuple.
    pub fn mul_by_int(&self, n: u64) -> Result<SeriesTuple> {
        let g = self.dim;
        let mut acc = SeriesTuple::identity(&self.ctx, g, self.trunc);
        for _ in 1..n {
            let mut inner: Vec<MultiSeries> = (0..g)
                .map(|i| MultiSeries::variable(&self.ctx, g, self.trunc, i))
                .collect();
            inner.extend(acc.components().iter().cloned());
            acc = self.law.compose(&inner)?;
        }
        Ok(acc)
    }

    /// The multiplication-by-p series with its normalization validated.
    pub fn mul_by_p(&self) -> Result<MulPSeries> {
        MulPSeries::from_tuple(self.mul_by_int(self.ctx.p())?, self.ctx.p())
    }

    /// A copy of the law with one coefficient perturbed; for negative tests.
    pub fn perturb_coefficient(&self, component: usize, mono: Monomial, delta: i64) -> Result<FormalGroupLaw> {
        let mut components = self.law.components().to_vec();
        let mut s = components[component].clone();
        s.add_term(mono, PadicScalar::from_integer(&self.ctx, delta));
        components[component] = s;
        Ok(FormalGroupLaw {
            ctx: self.ctx.clone(),
            dim: self.dim,
            trunc: self.trunc,
            law: SeriesTuple::new(components)?,
            provenance: self.provenance.clone(),
        })
    }
}

fn rebuild(provenance: &Provenance, target: &Ctx, trunc: u32) -> Result<FormalGroupLaw> {
    match provenance {
        Provenance::Multiplicative => FormalGroupLaw::multiplicative(target, trunc),
        Provenance::Additive => FormalGroupLaw::additive(target, trunc),
        Provenance::LubinTate(h) => FormalGroupLaw::lubin_tate(target, trunc, *h),
        Provenance::Elliptic(c) => {
            let up = target.precision() >= c.a1.context().precision();
            FormalGroupLaw::elliptic(target, trunc, &c.with_precision(target, up)?)
        }
        Provenance::Product(children) => {
            let rebuilt = children
                .iter()
                .map(|c| rebuild(c, target, trunc))
                .collect::<Result<Vec<_>>>()?;
            FormalGroupLaw::product(&rebuilt)
        }
        Provenance::LinearChange { base, matrix } => {
            let inner = rebuild(base, target, trunc)?;
            let old = WMatrix::from_rows(matrix[0][0].context(), matrix.clone())?;
            inner.linear_conjugate(&old.with_precision(target)?)
        }
    }
}

/// Solves w = t^3 + a1 t w + a2 t^2 w + a3 w^2 + a4 t w^2 + a6 w^3 by
/// fixed-point iteration; w(t) = t^3 (1 + ...). This is the expansion that
/// embeds the parameter t into curve coordinates via x = t/w, y = -1/w.
pub fn elliptic_w_expansion(ctx: &Ctx, trunc: u32, c: &EllipticCoefficients) -> Result<MultiSeries> {
    let t = MultiSeries::variable(ctx, 1, trunc, 0);
    let t3 = t.pow(3);
    let uni = |x: &PadicScalar| MultiSeries::constant(ctx, 1, trunc, x.clone());
    let mut w = t3.clone();
    loop {
        let w2 = w.mul(&w)?;
        let next = t3
            .add(&t.mul(&w)?.mul(&uni(&c.a1))?)?
            .add(&t.pow(2).mul(&w)?.mul(&uni(&c.a2))?)?
            .add(&w2.mul(&uni(&c.a3))?)?
            .add(&t.mul(&w2)?.mul(&uni(&c.a4))?)?
            .add(&w2.mul(&w)?.mul(&uni(&c.a6))?)?;
        if next == w {
            return Ok(w);
        }
        w = next;
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct AxiomReport {
    pub unit_laws: bool,
    pub commutative: bool,
    pub associative: bool,
}

impl AxiomReport {
    pub fn all_hold(&self) -> bool {
        self.unit_laws && self.commutative && self.associative
    }
}

/// det(d f_s / d X_j) evaluated at a point of positive valuation, with its
/// exact valuation. The determinant expands over permutations (g <= 3).
pub fn jacobian_det_at(
    mulp: &MulPSeries,
    point: &[RamifiedElement],
) -> Result<(RamifiedElement, Valuation)> {
    let g = mulp.dim();
    if point.len() != g {
        return Err(Error::ShapeMismatch("point dimension mismatch".into()));
    }
    let ext = point[0].extension().clone();
    let mut entries = Vec::with_capacity(g * g);
    for comp in mulp.tuple().components() {
        for j in 0..g {
            let d = comp.partial_derivative(j);
            entries.push(d.evaluate(point)?.value);
        }
    }
    let mut det = RamifiedElement::zero(&ext);
    for (perm, sign) in permutations_with_signs(g) {
        let mut term = RamifiedElement::one(&ext);
        for (row, &col) in perm.iter().enumerate() {
            term = term.mul(&entries[row * g + col])?;
        }
        if sign < 0 {
            term = term.neg();
        }
        det = det.add(&term)?;
    }
    let v = det.valuation();
    Ok((det, v))
}

fn permutations_with_signs(n: usize) -> Vec<(Vec<usize>, i32)> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    permute(&mut items, 0, 1, &mut out);
    out
}

fn permute(items: &mut Vec<usize>, k: usize, sign: i32, out: &mut Vec<(Vec<usize>, i32)>) {
    if k == items.len() {
        out.push((items.clone(), sign));
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        let s = if i == k { sign } else { -sign };
        permute(items, k + 1, s, out);
        items.swap(k, i);
    }
}
