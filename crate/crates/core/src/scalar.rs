//! Exact arithmetic in the unramified coefficient ring W = W(F_q), q = p^f,
//! with elements tracked modulo p^N.
//!
//! For f > 1 the ring is realized as Z_p[w]/(E(w), p^N) where E is the monic
//! lift of the deterministic smallest-lex irreducible of degree f over F_p
//! (see [`crate::fq::find_irreducible`]); the lift uses the same digits, so
//! the choice is recorded exactly by that polynomial.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fq::{find_irreducible, FqElem, FqField};
use crate::valuation::Valuation;

/// The (p, f, N) triple fixing a computation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct PrimeConfig {
    pub p: u64,
    /// Residue degree f, so the residue field is F_{p^f}.
    pub residue_degree: u32,
    /// Coefficient precision exponent N: elements are known mod p^N.
    pub precision: u32,
}

impl PrimeConfig {
    pub fn new(p: u64, residue_degree: u32, precision: u32) -> Result<PrimeConfig> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidConfig(format!("p = {p} must be an odd prime")));
        }
        if residue_degree < 1 {
            return Err(Error::InvalidConfig("residue degree must be >= 1".into()));
        }
        if precision < 1 {
            return Err(Error::InvalidConfig("precision must be >= 1".into()));
        }
        Ok(PrimeConfig { p, residue_degree, precision })
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Shared context: the validated config plus cached modulus data.
#[derive(Debug, PartialEq, Eq)]
pub struct PrimeContext {
    config: PrimeConfig,
    modulus: BigUint,
    p_big: BigUint,
    /// Non-leading coefficients of the degree-f modulus lift; empty when f = 1.
    ext_modulus: Vec<u64>,
    residue_field: Arc<FqField>,
}

pub type Ctx = Arc<PrimeContext>;

impl PrimeContext {
    pub fn new(config: PrimeConfig) -> Result<Ctx> {
        let p_big = BigUint::from(config.p);
        let modulus = p_big.pow(config.precision);
        let f = config.residue_degree as usize;
        let (ext_modulus, residue_field) = if f == 1 {
            (Vec::new(), FqField::prime(config.p))
        } else {
            (find_irreducible(config.p, f)?, FqField::extension(config.p, f)?)
        };
        Ok(Arc::new(PrimeContext {
            config,
            modulus,
            p_big,
            ext_modulus,
            residue_field,
        }))
    }

    pub fn config(&self) -> PrimeConfig {
        self.config
    }

    pub fn p(&self) -> u64 {
        self.config.p
    }

    pub fn precision(&self) -> u32 {
        self.config.precision
    }

    pub fn residue_degree(&self) -> u32 {
        self.config.residue_degree
    }

    pub fn residue_field(&self) -> &Arc<FqField> {
        &self.residue_field
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    /// Text form of the unramified modulus lift, for report reproducibility.
    pub fn modulus_description(&self) -> Option<String> {
        if self.ext_modulus.is_empty() {
            return None;
        }
        let f = self.config.residue_degree as usize;
        let mut parts = vec![format!("w^{f}")];
        for (i, &c) in self.ext_modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            parts.push(match i {
                0 => c.to_string(),
                1 if c == 1 => "w".to_string(),
                1 => format!("{c}*w"),
                _ if c == 1 => format!("w^{i}"),
                _ => format!("{c}*w^{i}"),
            });
        }
        Some(parts.join(" + "))
    }

    /// Same (p, f) at a different precision; used for internal headroom.
    pub fn with_precision(&self, precision: u32) -> Result<Ctx> {
        PrimeContext::new(PrimeConfig { precision, ..self.config })
    }

    pub fn same_as(&self, other: &PrimeContext) -> bool {
        self.config == other.config
    }
}

/// An element of W/p^N. The representative stores f coefficients, each a
/// canonical integer in [0, p^N).
#[derive(Debug, Clone)]
pub struct PadicScalar {
    ctx: Ctx,
    rep: Vec<BigUint>,
}

impl PartialEq for PadicScalar {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same_as(&other.ctx) && self.rep == other.rep
    }
}

impl Eq for PadicScalar {}

impl PadicScalar {
    pub fn zero(ctx: &Ctx) -> PadicScalar {
        PadicScalar {
            ctx: ctx.clone(),
            rep: vec![BigUint::zero(); ctx.residue_degree() as usize],
        }
    }

    pub fn one(ctx: &Ctx) -> PadicScalar {
        Self::from_integer(ctx, 1)
    }

    pub fn from_integer(ctx: &Ctx, n: i64) -> PadicScalar {
        let mut rep = vec![BigUint::zero(); ctx.residue_degree() as usize];
        rep[0] = reduce_i64(n, ctx.modulus());
        PadicScalar { ctx: ctx.clone(), rep }
    }

    pub fn from_biguint(ctx: &Ctx, n: &BigUint) -> PadicScalar {
        let mut rep = vec![BigUint::zero(); ctx.residue_degree() as usize];
        rep[0] = n % ctx.modulus();
        PadicScalar { ctx: ctx.clone(), rep }
    }

    /// Builds an element from its f basis coefficients.
    pub fn from_coefficients(ctx: &Ctx, coeffs: &[i64]) -> Result<PadicScalar> {
        if coeffs.len() != ctx.residue_degree() as usize {
            return Err(Error::ShapeMismatch(
                "coefficient count must equal the residue degree".into(),
            ));
        }
        let rep = coeffs.iter().map(|&c| reduce_i64(c, ctx.modulus())).collect();
        Ok(PadicScalar { ctx: ctx.clone(), rep })
    }

    pub fn context(&self) -> &Ctx {
        &self.ctx
    }

    pub fn rep(&self) -> &[BigUint] {
        &self.rep
    }

    fn check_ctx(&self, other: &PadicScalar) -> Result<()> {
        if self.ctx.same_as(&other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn is_zero_rep(&self) -> bool {
        self.rep.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &PadicScalar) -> Result<PadicScalar> {
        self.check_ctx(other)?;
        let m = self.ctx.modulus();
        let rep = self
            .rep
            .iter()
            .zip(&other.rep)
            .map(|(a, b)| (a + b) % m)
            .collect();
        Ok(PadicScalar { ctx: self.ctx.clone(), rep })
    }

    pub fn sub(&self, other: &PadicScalar) -> Result<PadicScalar> {
        self.check_ctx(other)?;
        let m = self.ctx.modulus();
        let rep = self
            .rep
            .iter()
            .zip(&other.rep)
            .map(|(a, b)| (a + (m - b)) % m)
            .collect();
        Ok(PadicScalar { ctx: self.ctx.clone(), rep })
    }

    pub fn neg(&self) -> PadicScalar {
        let m = self.ctx.modulus();
        let rep = self
            .rep
            .iter()
            .map(|a| if a.is_zero() { a.clone() } else { m - a })
            .collect();
        PadicScalar { ctx: self.ctx.clone(), rep }
    }

    pub fn mul(&self, other: &PadicScalar) -> Result<PadicScalar> {
        self.check_ctx(other)?;
        Ok(self.mul_raw(other))
    }

    /// Multiplication with the context already known to match.
    pub(crate) fn mul_raw(&self, other: &PadicScalar) -> PadicScalar {
        let f = self.rep.len();
        let m = self.ctx.modulus();
        if f == 1 {
            return PadicScalar {
                ctx: self.ctx.clone(),
                rep: vec![(&self.rep[0] * &other.rep[0]) % m],
            };
        }
        let mut prod = vec![BigUint::zero(); 2 * f - 1];
        for (i, a) in self.rep.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.rep.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                prod[i + j] = (&prod[i + j] + a * b) % m;
            }
        }
        // Reduce by the monic degree-f modulus lift.
        for i in (f..prod.len()).rev() {
            if prod[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut prod[i]);
            for (j, &mj) in self.ctx.ext_modulus.iter().enumerate() {
                if mj == 0 {
                    continue;
                }
                let t = (&c * BigUint::from(mj)) % m;
                let idx = i - f + j;
                prod[idx] = (&prod[idx] + (m - &t) % m) % m;
            }
        }
        prod.truncate(f);
        PadicScalar { ctx: self.ctx.clone(), rep: prod }
    }

    pub fn mul_i64(&self, n: i64) -> PadicScalar {
        let c = PadicScalar::from_integer(&self.ctx, n);
        self.mul_raw(&c)
    }

    pub fn pow(&self, mut e: u64) -> PadicScalar {
        let mut base = self.clone();
        let mut acc = PadicScalar::one(&self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_raw(&base);
            }
            base = base.mul_raw(&base);
            e >>= 1;
        }
        acc
    }

    /// Exact integer valuation k when p^k exactly divides the representative
    /// (0 <= k < N), or the lower bound >= N when the representative is 0.
    pub fn valuation(&self) -> Valuation {
        let n = self.ctx.precision();
        let p = &self.ctx.p_big;
        let mut best: Option<u32> = None;
        for c in &self.rep {
            if c.is_zero() {
                continue;
            }
            let mut v = 0u32;
            let mut cur = c.clone();
            while (&cur % p).is_zero() {
                cur /= p;
                v += 1;
            }
            best = Some(best.map_or(v, |b| b.min(v)));
        }
        match best {
            Some(v) => Valuation::exact_int(v as i64),
            None => Valuation::at_least_int(n as i64),
        }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self.valuation(), Valuation::Exact(r) if r == num_rational::Ratio::from_integer(0))
    }

    /// Inverse of a unit, by lifting the residue inverse with Newton steps
    /// x <- x(2 - ax).
    pub fn invert(&self) -> Result<PadicScalar> {
        if !self.is_unit() {
            return Err(Error::NonUnit);
        }
        let fq = self.ctx.residue_field();
        let res_inv = fq.invert(&self.residue())?;
        let mut x = PadicScalar::from_residue(&self.ctx, &res_inv);
        let two = PadicScalar::from_integer(&self.ctx, 2);
        let steps = 32 - (self.ctx.precision().max(1) - 1).leading_zeros();
        for _ in 0..=steps {
            let t = two.sub(&self.mul_raw(&x))?;
            x = x.mul_raw(&t);
        }
        Ok(x)
    }

    /// Division by p^k; every representative digit must be divisible.
    /// The result is taken in the same context, so its top k digits are 0.
    pub fn divide_exact_by_p_pow(&self, k: u32) -> Result<PadicScalar> {
        let pk = self.ctx.p_big.pow(k);
        let mut rep = Vec::with_capacity(self.rep.len());
        for c in &self.rep {
            if !(c % &pk).is_zero() {
                return Err(Error::IndeterminatePrecision(
                    "representative not divisible by the requested power of p".into(),
                ));
            }
            rep.push(c / &pk);
        }
        Ok(PadicScalar { ctx: self.ctx.clone(), rep })
    }

    /// Residue in F_q.
    pub fn residue(&self) -> FqElem {
        FqElem(
            self.rep
                .iter()
                .map(|c| (c % &self.ctx.p_big).to_u64_digits().first().copied().unwrap_or(0))
                .collect(),
        )
    }

    pub fn from_residue(ctx: &Ctx, r: &FqElem) -> PadicScalar {
        let rep = r.0.iter().map(|&c| BigUint::from(c)).collect();
        PadicScalar { ctx: ctx.clone(), rep }
    }

    /// Re-expresses the element in a context with lower precision.
    pub fn reduce_precision(&self, target: &Ctx) -> Result<PadicScalar> {
        let c = self.ctx.config();
        let t = target.config();
        if c.p != t.p || c.residue_degree != t.residue_degree || t.precision > c.precision {
            return Err(Error::ContextMismatch);
        }
        let rep = self.rep.iter().map(|x| x % target.modulus()).collect();
        Ok(PadicScalar { ctx: target.clone(), rep })
    }

    /// Canonical lift into a context with higher precision (same p, f).
    /// The representative digits are reused unchanged.
    pub fn lift_precision(&self, target: &Ctx) -> Result<PadicScalar> {
        let c = self.ctx.config();
        let t = target.config();
        if c.p != t.p || c.residue_degree != t.residue_degree || t.precision < c.precision {
            return Err(Error::ContextMismatch);
        }
        Ok(PadicScalar { ctx: target.clone(), rep: self.rep.clone() })
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rep.len() == 1 {
            return write!(f, "{}", self.rep[0]);
        }
        let mut parts = Vec::new();
        for (i, c) in self.rep.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match i {
                0 => c.to_string(),
                1 if c.is_one() => "w".to_string(),
                1 => format!("{c}*w"),
                _ if c.is_one() => format!("w^{i}"),
                _ => format!("{c}*w^{i}"),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

fn reduce_i64(n: i64, modulus: &BigUint) -> BigUint {
    if n >= 0 {
        BigUint::from(n as u64) % modulus
    } else {
        let r = BigUint::from(n.unsigned_abs()) % modulus;
        if r.is_zero() {
            r
        } else {
            modulus - r
        }
    }
}

/// The canonical multiplicative lift of a nonzero residue: the limit of
/// q-th power iteration, which stabilizes mod p^N after N steps.
pub fn teichmuller_lift(ctx: &Ctx, residue: &FqElem) -> PadicScalar {
    let mut x = PadicScalar::from_residue(ctx, residue);
    let q = (ctx.p() as u128).pow(ctx.residue_degree());
    for _ in 0..ctx.precision() {
        x = pow_u128(&x, q);
    }
    x
}

fn pow_u128(a: &PadicScalar, mut e: u128) -> PadicScalar {
    let mut base = a.clone();
    let mut acc = PadicScalar::one(a.context());
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul_raw(&base);
        }
        base = base.mul_raw(&base);
        e >>= 1;
    }
    acc
}

/// The first `count` Teichmuller units, enumerating nonzero residues in the
/// deterministic index order of the residue field.
pub fn teichmuller_units(ctx: &Ctx, count: usize) -> Result<Vec<PadicScalar>> {
    let q = (ctx.p() as u128).pow(ctx.residue_degree());
    let available = (q - 1) as usize;
    if count > available {
        return Err(Error::TeichmullerCount { requested: count, available });
    }
    let fq = ctx.residue_field();
    let mut out = Vec::with_capacity(count);
    for idx in 1..=count as u64 {
        out.push(teichmuller_lift(ctx, &fq.element_from_index(idx)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuation::rat;
    use proptest::prelude::*;

    pub(crate) fn ctx(p: u64, f: u32, n: u32) -> Ctx {
        PrimeContext::new(PrimeConfig::new(p, f, n).unwrap()).unwrap()
    }

    #[test]
    fn addition_examples() {
        let c = ctx(3, 1, 4);
        let a = PadicScalar::from_integer(&c, 5);
        let b = PadicScalar::from_integer(&c, 22);
        assert_eq!(a.add(&b).unwrap(), PadicScalar::from_integer(&c, 27));
        assert_eq!(a.add(&PadicScalar::zero(&c)).unwrap(), a);

        let c2 = ctx(3, 1, 2);
        let x = PadicScalar::from_integer(&c2, 5);
        let y = PadicScalar::from_integer(&c2, 4);
        assert!(x.add(&y).unwrap().is_zero_rep());
    }

    #[test]
    fn context_mixing_is_rejected() {
        let a = PadicScalar::from_integer(&ctx(3, 1, 4), 1);
        let b = PadicScalar::from_integer(&ctx(5, 1, 4), 1);
        assert_eq!(a.add(&b), Err(Error::ContextMismatch));
    }

    #[test]
    fn valuation_examples() {
        let c = ctx(3, 1, 4);
        assert_eq!(
            PadicScalar::from_integer(&c, 18).valuation(),
            Valuation::Exact(rat(2, 1))
        );
        assert_eq!(
            PadicScalar::from_integer(&c, 81).valuation(),
            Valuation::AtLeast(rat(4, 1))
        );
        assert_eq!(
            PadicScalar::from_integer(&c, 7).valuation(),
            Valuation::Exact(rat(0, 1))
        );
    }

    #[test]
    fn inversion_examples() {
        let c = ctx(3, 1, 2);
        let two = PadicScalar::from_integer(&c, 2);
        assert_eq!(two.invert().unwrap(), PadicScalar::from_integer(&c, 5));
        let one = PadicScalar::one(&c);
        assert_eq!(one.invert().unwrap(), one);
        assert_eq!(PadicScalar::from_integer(&c, 3).invert(), Err(Error::NonUnit));
    }

    #[test]
    fn teichmuller_units_examples() {
        let c = ctx(3, 1, 6);
        let units = teichmuller_units(&c, 2).unwrap();
        assert_eq!(units[0], PadicScalar::one(&c));
        // omega(2) is the (p-1)-st root of unity congruent to 2 mod 3.
        let u = &units[1];
        assert_eq!(u.pow(2), PadicScalar::one(&c));
        assert_eq!(u.residue().0, vec![2]);
        assert!(teichmuller_units(&c, 0).unwrap().is_empty());
        assert!(teichmuller_units(&c, 3).is_err());

        let c9 = ctx(3, 2, 3);
        let units = teichmuller_units(&c9, 8).unwrap();
        let mut residues: Vec<_> = units.iter().map(|u| u.residue()).collect();
        residues.sort_by_key(|r| r.0.clone());
        residues.dedup();
        assert_eq!(residues.len(), 8);
        for u in &units {
            assert_eq!(u.pow(8), PadicScalar::one(&c9));
        }
    }

    #[test]
    fn extension_ring_multiplication_uses_modulus() {
        // W(F_9)/3^3 with modulus lift w^2 + 1: w * w = -1.
        let c9 = ctx(3, 2, 3);
        let w = PadicScalar::from_coefficients(&c9, &[0, 1]).unwrap();
        let w2 = w.mul(&w).unwrap();
        assert_eq!(w2, PadicScalar::from_integer(&c9, -1));
        let inv = w.invert().unwrap();
        assert_eq!(w.mul(&inv).unwrap(), PadicScalar::one(&c9));
    }

    proptest! {
        #[test]
        fn ring_axioms_mod_p_n(a in -400i64..400, b in -400i64..400, c in -400i64..400) {
            let cx = ctx(3, 1, 4);
            let (a, b, c) = (
                PadicScalar::from_integer(&cx, a),
                PadicScalar::from_integer(&cx, b),
                PadicScalar::from_integer(&cx, c),
            );
            let lhs = a.add(&b).unwrap().add(&c).unwrap();
            let rhs = a.add(&b.add(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
            let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            let lhs = a.mul(&b).unwrap().mul(&c).unwrap();
            let rhs = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn valuation_rules(a in 1i64..2000, b in 1i64..2000) {
            let cx = ctx(3, 1, 8);
            let x = PadicScalar::from_integer(&cx, a);
            let y = PadicScalar::from_integer(&cx, b);
            let (vx, vy) = (x.valuation(), y.valuation());
            let vxy = x.mul(&y).unwrap().valuation();
            if let (Valuation::Exact(rx), Valuation::Exact(ry)) = (vx, vy) {
                if rx + ry < rat(8, 1) {
                    prop_assert_eq!(vxy, Valuation::Exact(rx + ry));
                }
                let vsum = x.add(&y).unwrap().valuation();
                let floor = rx.min(ry);
                prop_assert!(vsum.definitely_ge(floor) == Some(true));
            }
        }

        #[test]
        fn invert_is_involutive(a in 1i64..3000) {
            let cx = ctx(5, 1, 6);
            let x = PadicScalar::from_integer(&cx, a);
            if x.is_unit() {
                let inv = x.invert().unwrap();
                prop_assert_eq!(x.mul(&inv).unwrap(), PadicScalar::one(&cx));
                prop_assert_eq!(inv.invert().unwrap(), x);
            }
        }
    }
}
