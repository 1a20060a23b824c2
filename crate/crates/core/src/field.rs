//! Exact arithmetic over prime fields F_q and cyclotomic fields Q(zeta_n).
//!
//! Scalars are kept in canonical form at all times: residues in `0..q` for
//! F_q, and rational-coefficient polynomials in `zeta` of degree < phi(n),
//! reduced modulo the n-th cyclotomic polynomial, for Q(zeta_n). Equality is
//! structural on canonical forms, so scalars can serve as map keys.
//! No floating point is used anywhere.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;

use crate::error::{Error, Result};

/// Which field a scalar lives in. `Prime(q)` is F_q, `Cyclotomic(n)` is
/// Q[t]/Phi_n(t), so `Cyclotomic(1)` is the rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldDescriptor {
    Prime(u64),
    Cyclotomic(u64),
}

impl FieldDescriptor {
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldDescriptor::Prime(q) => *q,
            FieldDescriptor::Cyclotomic(_) => 0,
        }
    }

    pub fn parse(s: &str) -> Result<FieldDescriptor> {
        if let Some(rest) = s.strip_prefix("Fq:") {
            let q: u64 = rest
                .parse()
                .map_err(|_| Error::ParseError(format!("bad prime field `{s}`")))?;
            Ok(FieldDescriptor::Prime(q))
        } else if let Some(rest) = s.strip_prefix("cyclo:") {
            let n: u64 = rest
                .parse()
                .map_err(|_| Error::ParseError(format!("bad cyclotomic field `{s}`")))?;
            Ok(FieldDescriptor::Cyclotomic(n))
        } else {
            Err(Error::ParseError(format!("unknown field descriptor `{s}`")))
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Prime(q) => write!(f, "Fq:{q}"),
            FieldDescriptor::Cyclotomic(n) => write!(f, "cyclo:{n}"),
        }
    }
}

fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Cached data for one cyclotomic field: phi(n) and the monic integer
/// coefficients of Phi_n (low-to-high, length phi(n)+1).
#[derive(Debug)]
pub(crate) struct CycloData {
    pub n: u64,
    pub degree: usize,
    pub min_poly: Vec<BigInt>,
}

static CYCLO_CACHE: Lazy<Mutex<HashMap<u64, Arc<CycloData>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Exact division of integer polynomials (low-to-high), panics on nonzero
/// remainder. Divisor must be monic.
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false));
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() < den.len() {
        assert!(rem.iter().all(|c| c.is_zero()));
        return vec![];
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - dd] = c.clone();
        for (j, dc) in den.iter().enumerate() {
            rem[i - dd + j] -= &c * dc;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact polynomial division");
    quot
}

/// Phi_n as integer coefficients, via Phi_n = (t^n - 1) / prod_{d|n, d<n} Phi_d.
fn cyclotomic_poly(n: u64) -> Vec<BigInt> {
    let mut f = vec![BigInt::zero(); n as usize + 1];
    f[0] = -BigInt::one();
    f[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclo_data(d).min_poly.clone();
            f = int_poly_div_exact(&f, &phi_d);
        }
    }
    f
}

pub(crate) fn cyclo_data(n: u64) -> Arc<CycloData> {
    if let Some(d) = CYCLO_CACHE.lock().unwrap().get(&n) {
        return d.clone();
    }
    let min_poly = cyclotomic_poly(n);
    let data = Arc::new(CycloData {
        n,
        degree: min_poly.len() - 1,
        min_poly,
    });
    CYCLO_CACHE.lock().unwrap().insert(n, data.clone());
    data
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Repr {
    Mod(u64),
    /// Coefficients of 1, zeta, zeta^2, ... with trailing zeros trimmed.
    Cyclo(Vec<BigRational>),
}

/// An exact field element in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    field: FieldDescriptor,
    repr: Repr,
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

/// Reduce a rational polynomial in zeta modulo Phi_n.
fn reduce_mod_phi(mut v: Vec<BigRational>, n: u64) -> Vec<BigRational> {
    let data = cyclo_data(n);
    let deg = data.degree;
    while v.len() > deg {
        let i = v.len() - 1;
        let c = v[i].clone();
        if !c.is_zero() {
            for (j, mc) in data.min_poly.iter().enumerate().take(deg) {
                let t = &c * BigRational::from(mc.clone());
                v[i - deg + j] -= t;
            }
        }
        v.pop();
    }
    trim(v)
}

impl Scalar {
    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn zero(field: FieldDescriptor) -> Scalar {
        match field {
            FieldDescriptor::Prime(_) => Scalar { field, repr: Repr::Mod(0) },
            FieldDescriptor::Cyclotomic(_) => Scalar { field, repr: Repr::Cyclo(vec![]) },
        }
    }

    pub fn one(field: FieldDescriptor) -> Scalar {
        Scalar::from_integer(field, 1)
    }

    pub fn from_integer(field: FieldDescriptor, k: i64) -> Scalar {
        match field {
            FieldDescriptor::Prime(q) => {
                let r = k.rem_euclid(q as i64) as u64;
                Scalar { field, repr: Repr::Mod(r) }
            }
            FieldDescriptor::Cyclotomic(_) => {
                let v = trim(vec![BigRational::from(BigInt::from(k))]);
                Scalar { field, repr: Repr::Cyclo(v) }
            }
        }
    }

    /// num/den embedded into the field; in F_q this is num * den^{-1}.
    pub fn from_rational(field: FieldDescriptor, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        match field {
            FieldDescriptor::Prime(_) => {
                let n = Scalar::from_integer(field, num);
                let d = Scalar::from_integer(field, den);
                n.div(&d)
            }
            FieldDescriptor::Cyclotomic(_) => {
                let r = BigRational::new(BigInt::from(num), BigInt::from(den));
                Ok(Scalar { field, repr: Repr::Cyclo(trim(vec![r])) })
            }
        }
    }

    /// Element given by a polynomial in the canonical generator zeta_n
    /// (only for cyclotomic fields); reduced modulo Phi_n.
    pub fn from_zeta_poly(field: FieldDescriptor, coeffs: Vec<BigRational>) -> Result<Scalar> {
        match field {
            FieldDescriptor::Cyclotomic(n) => {
                let v = reduce_mod_phi(coeffs, n);
                Ok(Scalar { field, repr: Repr::Cyclo(v) })
            }
            _ => Err(Error::ParseError("zeta polynomial in a prime field".into())),
        }
    }

    /// Canonical coefficient vector (length phi(n), low-to-high) for
    /// cyclotomic scalars; None for prime fields.
    pub fn zeta_coeffs(&self) -> Option<Vec<BigRational>> {
        match (&self.repr, self.field) {
            (Repr::Cyclo(v), FieldDescriptor::Cyclotomic(n)) => {
                let deg = cyclo_data(n).degree;
                let mut out = v.clone();
                out.resize(deg, BigRational::zero());
                Some(out)
            }
            _ => None,
        }
    }

    pub fn residue(&self) -> Option<u64> {
        match &self.repr {
            Repr::Mod(r) => Some(*r),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Mod(r) => *r == 0,
            Repr::Cyclo(v) => v.is_empty(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Scalar::one(self.field)
    }

    /// If the scalar is a rational integer, return it (checked for i64 range).
    pub fn as_integer(&self) -> Option<i64> {
        match &self.repr {
            Repr::Mod(r) => Some(*r as i64),
            Repr::Cyclo(v) => {
                if v.is_empty() {
                    return Some(0);
                }
                if v.len() > 1 {
                    return None;
                }
                let r = &v[0];
                if r.denom().is_one() {
                    use num_traits::ToPrimitive;
                    r.numer().to_i64()
                } else {
                    None
                }
            }
        }
    }

    fn check_same(&self, other: &Scalar) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same(other)?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Mod(a), Repr::Mod(b)) => {
                let q = self.field.characteristic();
                Repr::Mod(((*a as u128 + *b as u128) % q as u128) as u64)
            }
            (Repr::Cyclo(a), Repr::Cyclo(b)) => {
                let mut v = a.clone();
                if v.len() < b.len() {
                    v.resize(b.len(), BigRational::zero());
                }
                for (i, c) in b.iter().enumerate() {
                    v[i] += c;
                }
                Repr::Cyclo(trim(v))
            }
            _ => unreachable!(),
        };
        Ok(Scalar { field: self.field, repr })
    }

    pub fn neg(&self) -> Scalar {
        let repr = match &self.repr {
            Repr::Mod(a) => {
                let q = self.field.characteristic();
                Repr::Mod(if *a == 0 { 0 } else { q - a })
            }
            Repr::Cyclo(v) => Repr::Cyclo(v.iter().map(|c| -c).collect()),
        };
        Scalar { field: self.field, repr }
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same(other)?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Mod(a), Repr::Mod(b)) => {
                let q = self.field.characteristic();
                Repr::Mod(((*a as u128 * *b as u128) % q as u128) as u64)
            }
            (Repr::Cyclo(a), Repr::Cyclo(b)) => {
                if a.is_empty() || b.is_empty() {
                    Repr::Cyclo(vec![])
                } else {
                    let mut v = vec![BigRational::zero(); a.len() + b.len() - 1];
                    for (i, ca) in a.iter().enumerate() {
                        if ca.is_zero() {
                            continue;
                        }
                        for (j, cb) in b.iter().enumerate() {
                            if !cb.is_zero() {
                                v[i + j] += ca * cb;
                            }
                        }
                    }
                    let n = match self.field {
                        FieldDescriptor::Cyclotomic(n) => n,
                        _ => unreachable!(),
                    };
                    Repr::Cyclo(reduce_mod_phi(v, n))
                }
            }
            _ => unreachable!(),
        };
        Ok(Scalar { field: self.field, repr })
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match &self.repr {
            Repr::Mod(a) => {
                let q = self.field.characteristic() as i128;
                // extended Euclid on (a, q)
                let (mut r0, mut r1) = (*a as i128, q);
                let (mut s0, mut s1) = (1i128, 0i128);
                while r1 != 0 {
                    let t = r0 / r1;
                    (r0, r1) = (r1, r0 - t * r1);
                    (s0, s1) = (s1, s0 - t * s1);
                }
                debug_assert_eq!(r0, 1);
                Ok(Scalar {
                    field: self.field,
                    repr: Repr::Mod(s0.rem_euclid(q) as u64),
                })
            }
            Repr::Cyclo(a) => {
                let n = match self.field {
                    FieldDescriptor::Cyclotomic(n) => n,
                    _ => unreachable!(),
                };
                let data = cyclo_data(n);
                let phi: Vec<BigRational> = data
                    .min_poly
                    .iter()
                    .map(|c| BigRational::from(c.clone()))
                    .collect();
                // extended Euclid over Q[t]: s * a + t * Phi = gcd = 1
                let (mut r0, mut r1) = (phi, a.clone());
                let (mut s0, mut s1) = (vec![], vec![BigRational::one()]);
                while !r1.is_empty() {
                    let (q, r) = rat_poly_divrem(&r0, &r1);
                    let new_s = rat_poly_sub(&s0, &rat_poly_mul(&q, &s1));
                    r0 = r1;
                    r1 = r;
                    s0 = s1;
                    s1 = new_s;
                }
                // r0 = gcd, a constant since Phi_n is irreducible over Q
                assert_eq!(r0.len(), 1, "cyclotomic polynomial not coprime to unit");
                let c = r0[0].clone();
                let inv_coeffs: Vec<BigRational> = s0.iter().map(|x| x / &c).collect();
                Scalar::from_zeta_poly(self.field, inv_coeffs)
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).unwrap();
            }
            base = base.mul(&base).unwrap();
            e >>= 1;
        }
        acc
    }
}

// Rational polynomial helpers for the extended Euclid above (low-to-high,
// trailing zeros trimmed).
fn rat_trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

fn rat_poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut v = a.to_vec();
    if v.len() < b.len() {
        v.resize(b.len(), BigRational::zero());
    }
    for (i, c) in b.iter().enumerate() {
        v[i] -= c;
    }
    rat_trim(v)
}

fn rat_poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        for (j, cb) in b.iter().enumerate() {
            v[i + j] += ca * cb;
        }
    }
    rat_trim(v)
}

fn rat_poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    assert!(!b.is_empty());
    let mut rem = a.to_vec();
    if rem.len() < b.len() {
        return (vec![], rat_trim(rem));
    }
    let mut quot = vec![BigRational::zero(); rem.len() - b.len() + 1];
    let lead = b.last().unwrap();
    for i in (b.len() - 1..rem.len()).rev() {
        let c = &rem[i] / lead;
        if c.is_zero() {
            continue;
        }
        quot[i - (b.len() - 1)] = c.clone();
        for (j, bc) in b.iter().enumerate() {
            let t = &c * bc;
            rem[i - (b.len() - 1) + j] -= t;
        }
    }
    (rat_trim(quot), rat_trim(rem))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Mod(r) => write!(f, "{r}"),
            Repr::Cyclo(v) => {
                if v.is_empty() {
                    return write!(f, "0");
                }
                let mut first = true;
                for (i, c) in v.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mag = c.abs();
                    if first {
                        if c.is_negative() {
                            write!(f, "-")?;
                        }
                        first = false;
                    } else if c.is_negative() {
                        write!(f, "-")?;
                    } else {
                        write!(f, "+")?;
                    }
                    if i == 0 {
                        write!(f, "{mag}")?;
                    } else {
                        if !mag.is_one() {
                            write!(f, "{mag}*")?;
                        }
                        if i == 1 {
                            write!(f, "z")?;
                        } else {
                            write!(f, "z^{i}")?;
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

/// A field handle. Construction validates the descriptor; arithmetic lives
/// on `Scalar` so values stay self-contained.
#[derive(Debug, Clone)]
pub struct Field {
    descriptor: FieldDescriptor,
}

impl Field {
    pub fn new(descriptor: FieldDescriptor) -> Result<Field> {
        match descriptor {
            FieldDescriptor::Prime(q) => {
                if !is_prime(q) {
                    return Err(Error::NonPrimeModulus(q));
                }
            }
            FieldDescriptor::Cyclotomic(n) => {
                if n < 1 {
                    return Err(Error::InvalidIndex(n));
                }
                cyclo_data(n);
            }
        }
        Ok(Field { descriptor })
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        self.descriptor
    }

    pub fn characteristic(&self) -> u64 {
        self.descriptor.characteristic()
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero(self.descriptor)
    }

    pub fn one(&self) -> Scalar {
        Scalar::one(self.descriptor)
    }

    pub fn integer(&self, k: i64) -> Scalar {
        Scalar::from_integer(self.descriptor, k)
    }

    /// The canonical generator zeta_n of a cyclotomic field.
    pub fn generator(&self) -> Option<Scalar> {
        match self.descriptor {
            FieldDescriptor::Cyclotomic(n) => {
                let v = reduce_mod_phi(
                    vec![BigRational::zero(), BigRational::one()],
                    n,
                );
                Some(Scalar { field: self.descriptor, repr: Repr::Cyclo(v) })
            }
            _ => None,
        }
    }

    /// Smallest generator of F_q^* found by ascending search from 2.
    fn multiplicative_generator(&self) -> Scalar {
        let q = self.characteristic();
        assert!(q > 0);
        if q == 2 {
            return self.one();
        }
        let order = q - 1;
        let mut prime_divs = vec![];
        let mut m = order;
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                prime_divs.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            prime_divs.push(m);
        }
        for g in 2..q {
            let cand = self.integer(g as i64);
            if prime_divs.iter().all(|p| !cand.pow(order / p).is_one()) {
                return cand;
            }
        }
        unreachable!("F_q has a primitive root");
    }

    /// All k distinct k-th roots of unity, ordered as powers of a fixed
    /// primitive root. Deterministic: in F_q the primitive root is
    /// g^((q-1)/k) for the smallest generator g; in Q(zeta_n) it is a power
    /// of zeta_n (or of -zeta_n when n is odd and k is even).
    pub fn roots_of_unity(&self, k: u64) -> Result<RootOfUnityTable> {
        assert!(k >= 1);
        let primitive = match self.descriptor {
            FieldDescriptor::Prime(q) => {
                if (q - 1) % k != 0 {
                    return Err(Error::RootsUnavailable {
                        field: self.descriptor.to_string(),
                        k,
                    });
                }
                self.multiplicative_generator().pow((q - 1) / k)
            }
            FieldDescriptor::Cyclotomic(n) => {
                if n % k == 0 {
                    self.generator().unwrap().pow(n / k)
                } else if n % 2 == 1 && (2 * n) % k == 0 {
                    self.generator().unwrap().neg().pow(2 * n / k)
                } else {
                    return Err(Error::RootsUnavailable {
                        field: self.descriptor.to_string(),
                        k,
                    });
                }
            }
        };
        RootOfUnityTable::new(k, primitive)
    }
}

/// The k-th roots of unity as consecutive powers zeta^0, ..., zeta^{k-1} of a
/// primitive root.
#[derive(Debug, Clone)]
pub struct RootOfUnityTable {
    pub k: u64,
    pub roots: Vec<Scalar>,
}

impl RootOfUnityTable {
    fn new(k: u64, primitive: Scalar) -> Result<RootOfUnityTable> {
        let field = primitive.field();
        let mut roots = Vec::with_capacity(k as usize);
        let mut cur = Scalar::one(field);
        for _ in 0..k {
            roots.push(cur.clone());
            cur = cur.mul(&primitive).unwrap();
        }
        // cur is now zeta^k; the table is valid only if that is 1 and the
        // entries are pairwise distinct.
        let distinct = {
            let mut sorted = roots.clone();
            sorted.sort();
            sorted.dedup();
            sorted.len() == roots.len()
        };
        if !cur.is_one() || !distinct {
            return Err(Error::RootsUnavailable {
                field: field.to_string(),
                k,
            });
        }
        let table = RootOfUnityTable { k, roots };
        table.verify();
        Ok(table)
    }

    /// The chosen primitive root zeta^1 (equals 1 when k = 1).
    pub fn primitive(&self) -> &Scalar {
        if self.k == 1 {
            &self.roots[0]
        } else {
            &self.roots[1]
        }
    }

    pub fn field(&self) -> FieldDescriptor {
        self.roots[0].field()
    }

    /// Structural sanity: entry 0 is 1, each entry is a k-th root, the sum
    /// vanishes for k >= 2, and prod (1 - zeta^i) = k for prime k.
    fn verify(&self) {
        let field = self.field();
        assert!(self.roots[0].is_one());
        for r in &self.roots {
            assert!(r.pow(self.k).is_one());
        }
        if self.k >= 2 {
            let mut sum = Scalar::zero(field);
            for r in &self.roots {
                sum = sum.add(r).unwrap();
            }
            assert!(sum.is_zero(), "roots of unity must sum to zero");
        }
        if is_prime(self.k) {
            let one = Scalar::one(field);
            let mut prod = Scalar::one(field);
            for r in self.roots.iter().skip(1) {
                prod = prod.mul(&one.sub(r).unwrap()).unwrap();
            }
            assert_eq!(
                prod,
                Scalar::from_integer(field, self.k as i64),
                "prod (1 - zeta^i) must equal k for prime k"
            );
        }
    }
}

/// Spec-facing arithmetic entry point with explicit error reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Sub,
    Div,
}

pub fn scalar_arith(a: &Scalar, b: &Scalar, op: ArithOp) -> Result<Scalar> {
    match op {
        ArithOp::Add => a.add(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Div => a.div(b),
    }
}

pub fn field_create(descriptor: FieldDescriptor) -> Result<Field> {
    Field::new(descriptor)
}

/// Whether k! is invertible, i.e. the characteristic is 0 or > k.
pub fn factorial_invertible(field: FieldDescriptor, k: u64) -> bool {
    let c = field.characteristic();
    c == 0 || c > k
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f7() -> Field {
        Field::new(FieldDescriptor::Prime(7)).unwrap()
    }

    fn zeta_field(n: u64) -> Field {
        Field::new(FieldDescriptor::Cyclotomic(n)).unwrap()
    }

    #[test]
    fn prime_field_has_expected_characteristic() {
        assert_eq!(f7().characteristic(), 7);
        assert_eq!(zeta_field(1).characteristic(), 0);
    }

    #[test]
    fn composite_modulus_rejected() {
        assert_eq!(
            Field::new(FieldDescriptor::Prime(6)).unwrap_err(),
            Error::NonPrimeModulus(6)
        );
        assert!(matches!(
            Field::new(FieldDescriptor::Cyclotomic(0)).unwrap_err(),
            Error::InvalidIndex(0)
        ));
    }

    #[test]
    fn f7_multiplication() {
        let f = f7();
        let three = f.integer(3);
        let five = f.integer(5);
        assert_eq!(three.mul(&five).unwrap(), f.one());
    }

    #[test]
    fn zeta3_relations() {
        let f = zeta_field(3);
        let z = f.generator().unwrap();
        let z2 = z.pow(2);
        assert!(z.mul(&z2).unwrap().is_one());
        assert_eq!(z.add(&z2).unwrap(), f.integer(-1));
    }

    #[test]
    fn cyclotomic_polys_match_known_values() {
        // Phi_1 = t - 1, Phi_2 = t + 1, Phi_4 = t^2 + 1, Phi_6 = t^2 - t + 1,
        // Phi_12 = t^4 - t^2 + 1
        let as_i64 = |n: u64| -> Vec<i64> {
            cyclo_data(n)
                .min_poly
                .iter()
                .map(|c| {
                    use num_traits::ToPrimitive;
                    c.to_i64().unwrap()
                })
                .collect()
        };
        assert_eq!(as_i64(1), vec![-1, 1]);
        assert_eq!(as_i64(2), vec![1, 1]);
        assert_eq!(as_i64(4), vec![1, 0, 1]);
        assert_eq!(as_i64(5), vec![1, 1, 1, 1, 1]);
        assert_eq!(as_i64(6), vec![1, -1, 1]);
        assert_eq!(as_i64(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn roots_of_unity_in_f7() {
        let f = f7();
        let table = f.roots_of_unity(3).unwrap();
        let vals: Vec<u64> = table.roots.iter().map(|r| r.residue().unwrap()).collect();
        // smallest generator of F_7^* is 3, so zeta_3 = 3^2 = 2
        assert_eq!(vals, vec![1, 2, 4]);
    }

    #[test]
    fn roots_unavailable_in_f7_for_5() {
        // exhaustive: x^5 = 1 has only x = 1 in F_7
        let f = f7();
        for r in 2..7 {
            assert!(!f.integer(r).pow(5).is_one());
        }
        assert!(matches!(
            f.roots_of_unity(5).unwrap_err(),
            Error::RootsUnavailable { k: 5, .. }
        ));
    }

    #[test]
    fn roots_of_unity_in_cyclotomic_fields() {
        let table = zeta_field(5).roots_of_unity(5).unwrap();
        let z = zeta_field(5).generator().unwrap();
        assert_eq!(table.roots[1], z);
        assert_eq!(table.roots.len(), 5);
        // rationals contain the square roots of unity
        let t2 = zeta_field(1).roots_of_unity(2).unwrap();
        assert_eq!(t2.roots[1], zeta_field(1).integer(-1));
        // Q(zeta_3) contains the 6th roots via -zeta_3
        let t6 = zeta_field(3).roots_of_unity(6).unwrap();
        assert_eq!(t6.roots.len(), 6);
        assert!(zeta_field(3).roots_of_unity(4).is_err());
    }

    #[test]
    fn f11_fifth_roots() {
        let f = Field::new(FieldDescriptor::Prime(11)).unwrap();
        let t = f.roots_of_unity(5).unwrap();
        let vals: Vec<u64> = t.roots.iter().map(|r| r.residue().unwrap()).collect();
        // smallest generator of F_11^* is 2, zeta_5 = 2^2 = 4
        assert_eq!(vals, vec![1, 4, 5, 9, 3]);
    }

    #[test]
    fn descriptor_string_roundtrip() {
        for d in [FieldDescriptor::Prime(7), FieldDescriptor::Cyclotomic(5)] {
            assert_eq!(FieldDescriptor::parse(&d.to_string()).unwrap(), d);
        }
        assert!(FieldDescriptor::parse("F:7").is_err());
    }

    #[test]
    fn division_by_zero_reported() {
        let f = f7();
        assert_eq!(
            scalar_arith(&f.one(), &f.zero(), ArithOp::Div).unwrap_err(),
            Error::DivisionByZero
        );
    }

    #[test]
    fn field_mismatch_reported() {
        let a = f7().one();
        let b = zeta_field(3).one();
        assert!(matches!(
            scalar_arith(&a, &b, ArithOp::Add).unwrap_err(),
            Error::FieldMismatch(..)
        ));
    }

    proptest! {
        #[test]
        fn inverse_law_f7(a in 1u64..7) {
            let f = f7();
            let s = f.integer(a as i64);
            prop_assert!(s.mul(&s.inv().unwrap()).unwrap().is_one());
        }

        #[test]
        fn inverse_law_zeta5(c0 in -3i64..4, c1 in -3i64..4, c2 in -3i64..4) {
            let f = zeta_field(5);
            let coeffs = vec![
                BigRational::from(BigInt::from(c0)),
                BigRational::from(BigInt::from(c1)),
                BigRational::from(BigInt::from(c2)),
            ];
            let s = Scalar::from_zeta_poly(f.descriptor(), coeffs).unwrap();
            if !s.is_zero() {
                prop_assert!(s.mul(&s.inv().unwrap()).unwrap().is_one());
            }
        }

        #[test]
        fn canonicalization_is_idempotent(c0 in -9i64..10, c1 in -9i64..10, c2 in -9i64..10, c3 in -9i64..10, c4 in -9i64..10, c5 in -9i64..10) {
            // reducing an over-long zeta polynomial twice equals reducing once
            let f = FieldDescriptor::Cyclotomic(5);
            let coeffs: Vec<BigRational> = [c0, c1, c2, c3, c4, c5]
                .iter()
                .map(|c| BigRational::from(BigInt::from(*c)))
                .collect();
            let once = Scalar::from_zeta_poly(f, coeffs).unwrap();
            let again = Scalar::from_zeta_poly(f, once.zeta_coeffs().unwrap()).unwrap();
            prop_assert_eq!(once, again);
        }

        #[test]
        fn distributivity_f11(a in 0u64..11, b in 0u64..11, c in 0u64..11) {
            let f = Field::new(FieldDescriptor::Prime(11)).unwrap();
            let (a, b, c) = (f.integer(a as i64), f.integer(b as i64), f.integer(c as i64));
            let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
            let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
