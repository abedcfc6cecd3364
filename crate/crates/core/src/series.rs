//! Multivariate power series over [`PadicScalar`], truncated at a fixed
//! total degree D, with sparse exponent-map storage.
//!
//! The monomial order is graded lexicographic: ascending total degree, and
//! within a degree the exponent vectors compare so that X1^2 precedes X1*X2.
//! This order is canonical for serialization and golden tests.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Ctx, PadicScalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u16>,
}

impl Monomial {
    pub fn new(exps: Vec<u16>) -> Monomial {
        Monomial { exps }
    }

    pub fn unit(num_vars: usize) -> Monomial {
        Monomial { exps: vec![0; num_vars] }
    }

    pub fn variable(num_vars: usize, idx: usize) -> Monomial {
        let mut exps = vec![0; num_vars];
        exps[idx] = 1;
        Monomial { exps }
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    fn display(&self, names: &dyn Fn(usize) -> String) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(names(i)),
                _ => parts.push(format!("{}^{}", names(i), e)),
            }
        }
        parts.join("*")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            // Within a degree, earlier variables with higher exponents first.
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A power series truncated at total degree `trunc`; zero coefficients are
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiSeries {
    ctx: Ctx,
    num_vars: usize,
    trunc: u32,
    terms: BTreeMap<Monomial, PadicScalar>,
}

impl MultiSeries {
    pub fn zero(ctx: &Ctx, num_vars: usize, trunc: u32) -> MultiSeries {
        MultiSeries {
            ctx: ctx.clone(),
            num_vars,
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &Ctx, num_vars: usize, trunc: u32, c: PadicScalar) -> MultiSeries {
        let mut s = Self::zero(ctx, num_vars, trunc);
        s.add_term(Monomial::unit(num_vars), c);
        s
    }

    pub fn variable(ctx: &Ctx, num_vars: usize, trunc: u32, idx: usize) -> MultiSeries {
        let mut s = Self::zero(ctx, num_vars, trunc);
        s.add_term(Monomial::variable(num_vars, idx), PadicScalar::one(ctx));
        s
    }

    pub fn context(&self) -> &Ctx {
        &self.ctx
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn trunc_degree(&self) -> u32 {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &PadicScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> PadicScalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| PadicScalar::zero(&self.ctx))
    }

    /// Adds a contribution to one monomial, dropping it when the sum is 0
    /// or the degree exceeds the truncation.
    pub fn add_term(&mut self, m: Monomial, c: PadicScalar) {
        if c.is_zero_rep() || m.degree() > self.trunc {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c).expect("context checked by caller");
                if sum.is_zero_rep() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn check_shape(&self, other: &MultiSeries) -> Result<()> {
        if !self.ctx.same_as(&other.ctx) {
            return Err(Error::ContextMismatch);
        }
        if self.num_vars != other.num_vars || self.trunc != other.trunc {
            return Err(Error::ShapeMismatch(format!(
                "series shapes differ: {} vars @ degree {} vs {} vars @ degree {}",
                self.num_vars, self.trunc, other.num_vars, other.trunc
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.neg());
        }
        Ok(out)
    }

    pub fn neg(&self) -> MultiSeries {
        let mut out = Self::zero(&self.ctx, self.num_vars, self.trunc);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }

    pub fn scalar_mul(&self, c: &PadicScalar) -> Result<MultiSeries> {
        if !self.ctx.same_as(c.context()) {
            return Err(Error::ContextMismatch);
        }
        let mut out = Self::zero(&self.ctx, self.num_vars, self.trunc);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a.mul_raw(c));
        }
        Ok(out)
    }

    pub fn mul(&self, other: &MultiSeries) -> Result<MultiSeries> {
        // Sequential on purpose: the benchmark suite measures the chunked
        // parallel kernel slower up to at least 11M term pairs (coefficient
        // allocation contention), so nothing below that dispatches to it.
        self.check_shape(other)?;
        Ok(self.mul_seq_raw(other))
    }

    /// Sequential multiplication kernel.
    pub fn mul_seq(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.check_shape(other)?;
        Ok(self.mul_seq_raw(other))
    }

    fn mul_seq_raw(&self, other: &MultiSeries) -> MultiSeries {
        let mut out = Self::zero(&self.ctx, self.num_vars, self.trunc);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            for (mb, cb) in &other.terms {
                if da + mb.degree() > self.trunc {
                    continue;
                }
                out.add_term(ma.mul(mb), ca.mul_raw(cb));
            }
        }
        out
    }

    /// Parallel multiplication kernel: fold chunks of the left factor and
    /// merge the partial maps.
    #[cfg(feature = "parallel")]
    pub fn mul_par(&self, other: &MultiSeries) -> MultiSeries {
        use rayon::prelude::*;
        let lhs: Vec<(&Monomial, &PadicScalar)> = self.terms.iter().collect();
        let chunk = (lhs.len() / (rayon::current_num_threads() * 4)).max(16);
        let partials: Vec<MultiSeries> = lhs
            .par_chunks(chunk)
            .map(|part| {
                let mut acc = Self::zero(&self.ctx, self.num_vars, self.trunc);
                for (ma, ca) in part {
                    let da = ma.degree();
                    for (mb, cb) in &other.terms {
                        if da + mb.degree() > self.trunc {
                            continue;
                        }
                        acc.add_term(ma.mul(mb), ca.mul_raw(cb));
                    }
                }
                acc
            })
            .collect();
        let mut out = Self::zero(&self.ctx, self.num_vars, self.trunc);
        for p in partials {
            for (m, c) in p.terms {
                out.add_term(m, c);
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> MultiSeries {
        let mut acc = Self::constant(&self.ctx, self.num_vars, self.trunc, PadicScalar::one(&self.ctx));
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_seq_raw(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_seq_raw(&base);
            }
        }
        acc
    }

    /// Inverse of a series with unit constant term, by Newton iteration.
    pub fn invert_unit_series(&self) -> Result<MultiSeries> {
        let c0 = self.coefficient(&Monomial::unit(self.num_vars));
        let c0_inv = c0.invert()?;
        let one = Self::constant(&self.ctx, self.num_vars, self.trunc, PadicScalar::one(&self.ctx));
        let two = Self::constant(&self.ctx, self.num_vars, self.trunc, PadicScalar::from_integer(&self.ctx, 2));
        let mut x = Self::constant(&self.ctx, self.num_vars, self.trunc, c0_inv);
        let mut correct: u32 = 1; // degrees below `correct` are settled
        while correct <= self.trunc {
            let t = two.sub(&self.mul_seq_raw(&x))?;
            x = x.mul_seq_raw(&t);
            correct *= 2;
        }
        debug_assert!(self.mul_seq_raw(&x) == one);
        Ok(x)
    }

    /// Same terms in a container with a different truncation degree;
    /// shrinking drops the high-degree terms.
    pub fn retruncate(&self, trunc: u32) -> MultiSeries {
        let mut out = Self::zero(&self.ctx, self.num_vars, trunc);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// The minimal total degree of a stored term.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    /// Substitutes `inner[j]` for variable j. Every inner series must share
    /// shape data and have a zero constant term, which makes the result
    /// exact through the truncation degree.
    pub fn compose(&self, inner: &[MultiSeries]) -> Result<MultiSeries> {
        if inner.len() != self.num_vars {
            return Err(Error::ShapeMismatch(format!(
                "composition needs {} inner series, got {}",
                self.num_vars,
                inner.len()
            )));
        }
        let first = &inner[0];
        for s in inner {
            first.check_shape(s)?;
            if !self.ctx.same_as(&s.ctx) {
                return Err(Error::ContextMismatch);
            }
            if !s.coefficient(&Monomial::unit(s.num_vars)).is_zero_rep() {
                return Err(Error::NonzeroConstantTerm);
            }
        }
        let out_vars = first.num_vars;
        let trunc = first.trunc;
        // Lazy power tables per variable.
        let mut powers: Vec<Vec<MultiSeries>> = inner
            .iter()
            .map(|s| vec![MultiSeries::constant(&self.ctx, out_vars, trunc, PadicScalar::one(&self.ctx)), s.clone()])
            .collect();
        let mut out = MultiSeries::zero(&self.ctx, out_vars, trunc);
        for (m, c) in &self.terms {
            if m.degree() > trunc {
                continue; // inner order >= 1 makes these invisible
            }
            let mut prod =
                MultiSeries::constant(&self.ctx, out_vars, trunc, c.clone());
            for (j, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[j];
                while table.len() <= e as usize {
                    let next = table.last().unwrap().mul_seq_raw(&inner[j]);
                    table.push(next);
                }
                prod = prod.mul_seq_raw(&table[e as usize]);
                if prod.is_zero() {
                    break;
                }
            }
            for (m, c) in prod.terms {
                out.add_term(m, c);
            }
        }
        Ok(out)
    }

    pub fn partial_derivative(&self, var: usize) -> MultiSeries {
        let mut out = Self::zero(&self.ctx, self.num_vars, self.trunc);
        for (m, c) in &self.terms {
            let e = m.exps[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[var] -= 1;
            out.add_term(Monomial::new(exps), c.mul_i64(e as i64));
        }
        out
    }

    pub fn graded_part(&self, degree: u32) -> Result<MultiSeries> {
        if degree > self.trunc {
            return Err(Error::TruncationExceeded {
                trunc: self.trunc,
                needed: format!("graded part of degree {degree}"),
            });
        }
        let mut out = Self::zero(&self.ctx, self.num_vars, self.trunc);
        for (m, c) in &self.terms {
            if m.degree() == degree {
                out.add_term(m.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// Re-indexes variables into a larger variable set: old variable j
    /// becomes `map[j]`.
    pub fn remap_variables(&self, new_num_vars: usize, map: &[usize]) -> Result<MultiSeries> {
        if map.len() != self.num_vars || map.iter().any(|&j| j >= new_num_vars) {
            return Err(Error::ShapeMismatch("bad variable map".into()));
        }
        let mut out = Self::zero(&self.ctx, new_num_vars, self.trunc);
        for (m, c) in &self.terms {
            let mut exps = vec![0u16; new_num_vars];
            for (j, &e) in m.exps().iter().enumerate() {
                exps[map[j]] += e;
            }
            out.add_term(Monomial::new(exps), c.clone());
        }
        Ok(out)
    }

    /// Views the series as univariate in the single variable it mentions.
    /// Returns (variable index, coefficients by degree). A series that only
    /// has a constant term reports variable 0.
    pub fn as_single_variable(&self) -> Result<(usize, Vec<(u32, PadicScalar)>)> {
        let mut var: Option<usize> = None;
        for m in self.terms.keys() {
            for (j, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match var {
                    None => var = Some(j),
                    Some(v) if v == j => {}
                    Some(_) => {
                        return Err(Error::ShapeMismatch(
                            "series mentions more than one variable".into(),
                        ))
                    }
                }
            }
        }
        let v = var.unwrap_or(0);
        let coeffs = self
            .terms
            .iter()
            .map(|(m, c)| (m.exps()[v] as u32, c.clone()))
            .collect();
        Ok((v, coeffs))
    }

    pub fn reduce_precision(&self, target: &Ctx) -> Result<MultiSeries> {
        let mut out = Self::zero(target, self.num_vars, self.trunc);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.reduce_precision(target)?);
        }
        Ok(out)
    }

    /// Canonical text form: graded-lex ordered monomials with canonical
    /// integer coefficients.
    pub fn canonical_string(&self) -> String {
        let names = |i: usize| {
            if self.num_vars == 1 {
                "T".to_string()
            } else {
                format!("X{}", i + 1)
            }
        };
        self.canonical_string_with(&names)
    }

    pub fn canonical_string_with(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in &self.terms {
            let coeff = c.to_string();
            let mono = m.display(names);
            parts.push(match (coeff.as_str(), mono.is_empty()) {
                (_, true) => wrap_coeff(&coeff),
                ("1", false) => mono,
                (_, false) => format!("{}*{}", wrap_coeff(&coeff), mono),
            });
        }
        parts.join(" + ")
    }
}

fn wrap_coeff(c: &str) -> String {
    if c.contains(' ') {
        format!("({c})")
    } else {
        c.to_string()
    }
}

impl fmt::Display for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical_string())
    }
}

/// A g-tuple of series over a common variable set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesTuple {
    components: Vec<MultiSeries>,
}

impl SeriesTuple {
    pub fn new(components: Vec<MultiSeries>) -> Result<SeriesTuple> {
        if components.is_empty() {
            return Err(Error::ShapeMismatch("empty series tuple".into()));
        }
        let first = &components[0];
        for c in &components[1..] {
            first.check_shape(c)?;
        }
        Ok(SeriesTuple { components })
    }

    /// The identity tuple (X_1, ..., X_g) in g variables.
    pub fn identity(ctx: &Ctx, g: usize, trunc: u32) -> SeriesTuple {
        SeriesTuple {
            components: (0..g)
                .map(|i| MultiSeries::variable(ctx, g, trunc, i))
                .collect(),
        }
    }

    pub fn components(&self) -> &[MultiSeries] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Applies each component of `self` to the same inner tuple.
    pub fn compose(&self, inner: &[MultiSeries]) -> Result<SeriesTuple> {
        let components = self
            .components
            .iter()
            .map(|c| c.compose(inner))
            .collect::<Result<Vec<_>>>()?;
        SeriesTuple::new(components)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{PrimeConfig, PrimeContext};
    use proptest::prelude::*;

    fn ctx(p: u64, n: u32) -> Ctx {
        PrimeContext::new(PrimeConfig::new(p, 1, n).unwrap()).unwrap()
    }

    fn var(c: &Ctx, nv: usize, d: u32, i: usize) -> MultiSeries {
        MultiSeries::variable(c, nv, d, i)
    }

    #[test]
    fn product_of_sum_and_difference() {
        let c = ctx(3, 4);
        let x = var(&c, 2, 2, 0);
        let y = var(&c, 2, 2, 1);
        let lhs = x.add(&y).unwrap().mul(&x.sub(&y).unwrap()).unwrap();
        let rhs = x.mul(&x).unwrap().sub(&y.mul(&y).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.canonical_string(), "X1^2 + 80*X2^2");

        let zero = MultiSeries::zero(&c, 2, 2);
        assert!(x.mul(&zero).unwrap().is_zero());

        let sq = x.add(&y).unwrap().pow(2);
        assert_eq!(sq.canonical_string(), "X1^2 + 2*X1*X2 + X2^2");
    }

    #[test]
    fn composition_examples() {
        let c = ctx(3, 4);
        // outer = X1 + X2, inner = (T, T^2) -> T + T^2
        let outer = var(&c, 2, 3, 0).add(&var(&c, 2, 3, 1)).unwrap();
        let t = var(&c, 1, 3, 0);
        let t2 = t.mul(&t).unwrap();
        let got = outer.compose(&[t.clone(), t2.clone()]).unwrap();
        assert_eq!(got.canonical_string(), "T + T^2");

        // outer = X1 -> identity on the first inner
        let outer = var(&c, 2, 3, 0);
        assert_eq!(outer.compose(&[t.clone(), t2.clone()]).unwrap(), t);

        // outer = X1*X2 at D = 3, inner = (T + T^2, T) -> T^2 + T^3
        let outer = var(&c, 2, 3, 0).mul(&var(&c, 2, 3, 1)).unwrap();
        let got = outer.compose(&[t.add(&t2).unwrap(), t.clone()]).unwrap();
        assert_eq!(got.canonical_string(), "T^2 + T^3");

        // nonzero constant term is rejected
        let bad = t.add(&MultiSeries::constant(&c, 1, 3, PadicScalar::one(&c))).unwrap();
        assert_eq!(outer.compose(&[bad, t]), Err(Error::NonzeroConstantTerm));
    }

    #[test]
    fn derivative_examples() {
        let c = ctx(3, 4);
        let x = var(&c, 2, 3, 0);
        let y = var(&c, 2, 3, 1);
        let x2y = x.pow(2).mul(&y).unwrap();
        assert_eq!(x2y.partial_derivative(0).canonical_string(), "2*X1*X2");
        assert!(x.pow(2).partial_derivative(1).is_zero());

        // d/dT (3T + u T^9) = 3 + 9u T^8 over p = 3
        let t = var(&c, 1, 9, 0);
        let u = PadicScalar::from_integer(&c, 2);
        let s = t.scalar_mul(&PadicScalar::from_integer(&c, 3)).unwrap()
            .add(&t.pow(9).scalar_mul(&u).unwrap())
            .unwrap();
        assert_eq!(s.partial_derivative(0).canonical_string(), "3 + 18*T^8");
    }

    #[test]
    fn graded_part_examples() {
        let c = ctx(3, 4);
        let t = var(&c, 1, 3, 0);
        let s = t.scalar_mul(&PadicScalar::from_integer(&c, 3)).unwrap()
            .add(&t.pow(3))
            .unwrap();
        assert_eq!(s.graded_part(3).unwrap().canonical_string(), "T^3");
        assert!(s.graded_part(2).unwrap().is_zero());
        assert!(s.graded_part(4).is_err());

        let x = var(&c, 2, 3, 0);
        let y = var(&c, 2, 3, 1);
        let s = x.pow(2)
            .add(&x.mul(&y).unwrap())
            .unwrap()
            .add(&y.pow(3).scalar_mul(&PadicScalar::from_integer(&c, 3)).unwrap())
            .unwrap();
        assert_eq!(s.graded_part(2).unwrap().canonical_string(), "X1^2 + X1*X2");
    }

    #[test]
    fn monomial_order_is_graded_lex() {
        let m = |e: &[u16]| Monomial::new(e.to_vec());
        assert!(m(&[1, 0]) < m(&[0, 2]));
        assert!(m(&[2, 0]) < m(&[1, 1]));
        assert!(m(&[1, 1]) < m(&[0, 2]));
    }

    fn arb_series(c: Ctx) -> impl Strategy<Value = MultiSeries> {
        proptest::collection::vec((0u16..4, 0u16..4, -40i64..40), 0..6).prop_map(move |terms| {
            let mut s = MultiSeries::zero(&c, 2, 5);
            for (e1, e2, coeff) in terms {
                s.add_term(
                    Monomial::new(vec![e1, e2]),
                    PadicScalar::from_integer(&c, coeff),
                );
            }
            s
        })
    }

    proptest! {
        #[test]
        fn mul_commutes_and_associates(
            a in arb_series(ctx(3, 5)),
            b in arb_series(ctx(3, 5)),
            c in arb_series(ctx(3, 5)),
        ) {
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            let lhs = a.mul(&b).unwrap().mul(&c).unwrap();
            let rhs = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn graded_parts_sum_back(a in arb_series(ctx(3, 5))) {
            let mut acc = MultiSeries::zero(a.context(), a.num_vars(), a.trunc_degree());
            for k in 0..=a.trunc_degree() {
                acc = acc.add(&a.graded_part(k).unwrap()).unwrap();
            }
            prop_assert_eq!(acc, a);
        }

        #[test]
        fn composition_associates(
            a in arb_series(ctx(3, 5)),
            t1 in -40i64..40,
            t2 in -40i64..40,
        ) {
            let c = ctx(3, 5);
            // inner tuples built from univariate positive-order series
            let t = MultiSeries::variable(&c, 1, 5, 0);
            let b1 = t.scalar_mul(&PadicScalar::from_integer(&c, t1)).unwrap()
                .add(&t.pow(2)).unwrap();
            let b2 = t.scalar_mul(&PadicScalar::from_integer(&c, t2)).unwrap();
            let s = MultiSeries::variable(&c, 1, 5, 0);
            let inner_b = [b1.clone(), b2.clone()];
            let via_b = a.compose(&inner_b).unwrap();
            let lhs = via_b.compose(std::slice::from_ref(&s)).unwrap();
            let bs = [b1.compose(std::slice::from_ref(&s)).unwrap(), b2.compose(&[s]).unwrap()];
            let rhs = a.compose(&bs).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_mul_matches_sequential() {
        let c = ctx(3, 6);
        let mut a = MultiSeries::zero(&c, 2, 20);
        let mut b = MultiSeries::zero(&c, 2, 20);
        for i in 0..15u16 {
            for j in 0..10u16 {
                a.add_term(
                    Monomial::new(vec![i, j]),
                    PadicScalar::from_integer(&c, (i as i64 + 1) * (j as i64 + 2)),
                );
                b.add_term(
                    Monomial::new(vec![j, i]),
                    PadicScalar::from_integer(&c, i as i64 - j as i64 + 7),
                );
            }
        }
        assert_eq!(a.mul_par(&b), a.mul_seq(&b).unwrap());
    }
}
