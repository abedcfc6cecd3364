//! Finite fields F_{p^m} used for residue computations.
//!
//! Elements are coefficient vectors over F_p against the deterministic
//! modulus returned by [`find_irreducible`]: the lexicographically smallest
//! monic irreducible of the requested degree. Everything here is sized for
//! desk-scale fields (p^m up to about a million).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A finite field F_{p^m} with a fixed monic modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqField {
    p: u64,
    degree: usize,
    /// Non-leading coefficients c_0..c_{m-1} of the monic modulus; empty when m == 1.
    modulus: Vec<u64>,
}

/// An element of an [`FqField`], as a dense coefficient vector of length m.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FqElem(pub Vec<u64>);

impl FqField {
    pub fn prime(p: u64) -> Arc<FqField> {
        Arc::new(FqField {
            p,
            degree: 1,
            modulus: Vec::new(),
        })
    }

    /// F_{p^m} with the deterministic smallest-lex modulus.
    pub fn extension(p: u64, m: usize) -> Result<Arc<FqField>> {
        if m == 1 {
            return Ok(Self::prime(p));
        }
        let modulus = find_irreducible(p, m)?;
        Ok(Arc::new(FqField { p, degree: m, modulus }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.degree as u32)
    }

    pub fn zero(&self) -> FqElem {
        FqElem(vec![0; self.degree])
    }

    pub fn one(&self) -> FqElem {
        let mut v = vec![0; self.degree];
        v[0] = 1;
        FqElem(v)
    }

    pub fn from_u64(&self, c: u64) -> FqElem {
        let mut v = vec![0; self.degree];
        v[0] = c % self.p;
        FqElem(v)
    }

    pub fn is_zero(&self, a: &FqElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| (x + y) % self.p)
                .collect(),
        )
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| (x + self.p - y) % self.p)
                .collect(),
        )
    }

    pub fn neg(&self, a: &FqElem) -> FqElem {
        FqElem(a.0.iter().map(|x| (self.p - x) % self.p).collect())
    }

    pub fn scalar_mul(&self, c: u64, a: &FqElem) -> FqElem {
        let c = c % self.p;
        FqElem(a.0.iter().map(|x| mulmod(c, *x, self.p)).collect())
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        if self.degree == 1 {
            return FqElem(vec![mulmod(a.0[0], b.0[0], self.p)]);
        }
        let m = self.degree;
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                prod[i + j] = (prod[i + j] + mulmod(x, y, self.p)) % self.p;
            }
        }
        self.reduce(&mut prod);
        prod.truncate(m);
        FqElem(prod)
    }

    /// Reduces a coefficient vector of degree < 2m-1 by the monic modulus.
    fn reduce(&self, v: &mut Vec<u64>) {
        let m = self.degree;
        for i in (m..v.len()).rev() {
            let c = v[i];
            if c == 0 {
                continue;
            }
            v[i] = 0;
            for (j, &mj) in self.modulus.iter().enumerate() {
                let t = mulmod(c, mj, self.p);
                let idx = i - m + j;
                v[idx] = (v[idx] + self.p - t % self.p) % self.p;
            }
        }
        v.truncate(m.max(1));
        while v.len() < m {
            v.push(0);
        }
    }

    pub fn pow(&self, a: &FqElem, mut e: u128) -> FqElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn invert(&self, a: &FqElem) -> Result<FqElem> {
        if self.is_zero(a) {
            return Err(Error::NonUnit);
        }
        Ok(self.pow(a, self.order() - 2))
    }

    /// Index <-> element bijection used for deterministic enumeration.
    /// Index n encodes base-p digits, least significant digit first.
    pub fn element_from_index(&self, mut n: u64) -> FqElem {
        let mut v = vec![0; self.degree];
        for c in v.iter_mut() {
            *c = n % self.p;
            n /= self.p;
        }
        FqElem(v)
    }

    pub fn display(&self, a: &FqElem) -> String {
        if self.degree == 1 {
            return a.0[0].to_string();
        }
        let mut parts = Vec::new();
        for (i, &c) in a.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let var = match i {
                0 => String::new(),
                1 => "w".to_string(),
                _ => format!("w^{i}"),
            };
            parts.push(match (c, var.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => var,
                (_, false) => format!("{c}*{var}"),
            });
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    /// Evaluates a polynomial with coefficients in this field at a point.
    pub fn eval_poly(&self, coeffs: &[FqElem], x: &FqElem) -> FqElem {
        let mut acc = self.zero();
        for c in coeffs.iter().rev() {
            acc = self.mul(&acc, x);
            acc = self.add(&acc, c);
        }
        acc
    }
}

impl fmt::Display for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{}", self.p, self.degree)
        }
    }
}

/// An embedding of a subfield into an extension, given by the image of the
/// subfield generator (a root of the subfield modulus in the big field).
pub struct FqEmbedding {
    pub sub: Arc<FqField>,
    pub sup: Arc<FqField>,
    gen_image: FqElem,
}

impl FqEmbedding {
    /// Finds an embedding by scanning for a root of the subfield modulus.
    /// The scan is linear in the size of the big field.
    pub fn find(sub: &Arc<FqField>, sup: &Arc<FqField>) -> Result<FqEmbedding> {
        if sub.p != sup.p || !sup.degree.is_multiple_of(sub.degree) {
            return Err(Error::ShapeMismatch(
                "no embedding between these residue fields".into(),
            ));
        }
        if sub.degree == 1 {
            return Ok(FqEmbedding {
                sub: sub.clone(),
                sup: sup.clone(),
                gen_image: sup.zero(),
            });
        }
        // Monic modulus of the subfield as coefficients in the big field.
        let mut poly: Vec<FqElem> = sub.modulus.iter().map(|&c| sup.from_u64(c)).collect();
        poly.push(sup.one());
        let order = sup.order();
        if order > 1u128 << 24 {
            return Err(Error::EnumerationBudget {
                space: order,
                budget: 1u128 << 24,
            });
        }
        for n in 0..order as u64 {
            let cand = sup.element_from_index(n);
            if sup.is_zero(&sup.eval_poly(&poly, &cand)) {
                return Ok(FqEmbedding {
                    sub: sub.clone(),
                    sup: sup.clone(),
                    gen_image: cand,
                });
            }
        }
        Err(Error::ShapeMismatch(
            "irreducible modulus has no root in the extension".into(),
        ))
    }

    pub fn map(&self, a: &FqElem) -> FqElem {
        if self.sub.degree == 1 {
            return self.sup.from_u64(a.0[0]);
        }
        let coeffs: Vec<FqElem> = a.0.iter().map(|&c| self.sup.from_u64(c)).collect();
        self.sup.eval_poly(&coeffs, &self.gen_image)
    }
}

pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// The lexicographically smallest monic irreducible of degree m over F_p,
/// ordering candidates by their non-leading coefficient vector read as a
/// base-p integer. Returns the non-leading coefficients c_0..c_{m-1}.
pub fn find_irreducible(p: u64, m: usize) -> Result<Vec<u64>> {
    let total = (p as u128).checked_pow(m as u32).ok_or_else(|| {
        Error::InvalidConfig("residue field too large".into())
    })?;
    if total > 1u128 << 40 {
        return Err(Error::InvalidConfig("residue field too large".into()));
    }
    for code in 0..total {
        let mut c = code;
        let mut coeffs = vec![0u64; m];
        for slot in coeffs.iter_mut() {
            *slot = (c % p as u128) as u64;
            c /= p as u128;
        }
        if coeffs[0] == 0 {
            continue; // divisible by x
        }
        if is_irreducible(p, &coeffs) {
            return Ok(coeffs);
        }
    }
    Err(Error::InvalidConfig(format!(
        "no irreducible of degree {m} over F_{p}"
    )))
}

/// Irreducibility of the monic polynomial x^m + sum c_i x^i over F_p:
/// x^(p^m) == x mod E, and gcd(x^(p^(m/t)) - x, E) = 1 for prime t | m.
fn is_irreducible(p: u64, coeffs: &[u64]) -> bool {
    let m = coeffs.len();
    let xq = frobenius_power(p, coeffs, m as u32);
    // x^(p^m) - x must vanish mod E.
    let mut diff = xq.clone();
    if diff.len() < 2 {
        diff.resize(2, 0);
    }
    diff[1] = (diff[1] + p - 1) % p;
    if diff.iter().any(|&c| c != 0) {
        return false;
    }
    for t in prime_divisors(m as u64) {
        let k = m as u64 / t;
        let xk = frobenius_power(p, coeffs, k as u32);
        let mut g = xk;
        if g.len() < 2 {
            g.resize(2, 0);
        }
        g[1] = (g[1] + p - 1) % p;
        let gcd = poly_gcd(p, &g, coeffs);
        if gcd.len() > 1 {
            return false;
        }
    }
    true
}

/// x^(p^k) mod E via k-fold p-th powering.
fn frobenius_power(p: u64, modulus: &[u64], k: u32) -> Vec<u64> {
    let m = modulus.len();
    let mut x = vec![0u64; m];
    if m == 1 {
        // x reduces to -c_0
        x[0] = (p - modulus[0] % p) % p;
    } else {
        x[1] = 1;
    }
    for _ in 0..k {
        x = poly_powmod(p, &x, p, modulus);
    }
    x
}

fn poly_mulmod(p: u64, a: &[u64], b: &[u64], modulus: &[u64]) -> Vec<u64> {
    let m = modulus.len();
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y == 0 {
                continue;
            }
            prod[i + j] = (prod[i + j] + mulmod(x, y, p)) % p;
        }
    }
    for i in (m..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for (j, &mj) in modulus.iter().enumerate() {
            let t = mulmod(c, mj, p);
            prod[i - m + j] = (prod[i - m + j] + p - t) % p;
        }
    }
    prod.truncate(m);
    prod
}

fn poly_powmod(p: u64, a: &[u64], mut e: u64, modulus: &[u64]) -> Vec<u64> {
    let m = modulus.len();
    let mut base = a.to_vec();
    base.resize(m, 0);
    let mut acc = vec![0u64; m];
    acc[0] = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(p, &acc, &base, modulus);
        }
        base = poly_mulmod(p, &base, &base, modulus);
        e >>= 1;
    }
    acc
}

/// gcd of a with the monic polynomial given by non-leading coeffs `modulus`.
fn poly_gcd(p: u64, a: &[u64], modulus: &[u64]) -> Vec<u64> {
    let mut f: Vec<u64> = modulus.to_vec();
    f.push(1);
    let mut g = trim(a.to_vec());
    while !g.is_empty() {
        let r = poly_rem(p, &f, &g);
        f = g;
        g = r;
    }
    f
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn poly_rem(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = inv_mod_p(*b.last().unwrap(), p);
    while r.len() > db {
        let c = mulmod(*r.last().unwrap(), lead_inv, p);
        let dr = r.len() - 1;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                let idx = dr - db + j;
                r[idx] = (r[idx] + p - mulmod(c, bj, p)) % p;
            }
        }
        r.pop();
        r = trim(r);
        if r.is_empty() {
            break;
        }
    }
    trim(r)
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    // Fermat; p is prime.
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    acc
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
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
