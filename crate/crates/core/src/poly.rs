//! Univariate polynomials over an exact field, low-to-high coefficients with
//! trailing zeros trimmed.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    field: FieldDescriptor,
    coeffs: Vec<Scalar>,
}

/// Multiplicity of a linear factor; `Infinity` is the valuation of 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(u64),
    Infinity,
}

impl Poly {
    pub fn new(field: FieldDescriptor, mut coeffs: Vec<Scalar>) -> Poly {
        for c in &coeffs {
            assert_eq!(c.field(), field, "coefficient in wrong field");
        }
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: FieldDescriptor) -> Poly {
        Poly { field, coeffs: vec![] }
    }

    pub fn constant(c: Scalar) -> Poly {
        Poly::new(c.field(), vec![c])
    }

    pub fn one(field: FieldDescriptor) -> Poly {
        Poly::constant(Scalar::one(field))
    }

    /// x - c
    pub fn linear_root(c: &Scalar) -> Poly {
        Poly::new(c.field(), vec![c.neg(), Scalar::one(c.field())])
    }

    /// The variable x.
    pub fn x(field: FieldDescriptor) -> Poly {
        Poly::new(field, vec![Scalar::zero(field), Scalar::one(field)])
    }

    pub fn from_integers(field: FieldDescriptor, coeffs: &[i64]) -> Poly {
        Poly::new(
            field,
            coeffs
                .iter()
                .map(|c| Scalar::from_integer(field, *c))
                .collect(),
        )
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with deg(0) = None standing in for the -infinity sentinel.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    fn check_same(&self, other: &Poly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).add(&other.coeff(i))?);
        }
        Ok(Poly::new(self.field, out))
    }

    pub fn neg(&self) -> Poly {
        Poly {
            field: self.field,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(self.field));
        }
        let mut out = vec![Scalar::zero(self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b)?)?;
            }
        }
        Ok(Poly::new(self.field, out))
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(
            self.field,
            self.coeffs.iter().map(|a| a.mul(c).unwrap()).collect(),
        )
    }

    pub fn divrem(&self, other: &Poly) -> Result<(Poly, Poly)> {
        self.check_same(other)?;
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut rem = self.coeffs.clone();
        let db = other.coeffs.len() - 1;
        if rem.len() <= db {
            return Ok((Poly::zero(self.field), self.clone()));
        }
        let lead_inv = other.leading_coeff().unwrap().inv()?;
        let mut quot = vec![Scalar::zero(self.field); rem.len() - db];
        for i in (db..rem.len()).rev() {
            let c = rem[i].mul(&lead_inv)?;
            if c.is_zero() {
                continue;
            }
            quot[i - db] = c.clone();
            for (j, bc) in other.coeffs.iter().enumerate() {
                rem[i - db + j] = rem[i - db + j].sub(&c.mul(bc)?)?;
            }
        }
        Ok((Poly::new(self.field, quot), Poly::new(self.field, rem)))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Scale by the inverse of the leading coefficient (identity on 0).
    pub fn monic(&self) -> Poly {
        match self.leading_coeff() {
            None => self.clone(),
            Some(l) => {
                if l.is_one() {
                    self.clone()
                } else {
                    self.scale(&l.inv().unwrap())
                }
            }
        }
    }

    pub fn eval(&self, c: &Scalar) -> Scalar {
        let mut acc = Scalar::zero(self.field);
        for a in self.coeffs.iter().rev() {
            acc = acc.mul(c).unwrap().add(a).unwrap();
        }
        acc
    }

    /// Substitute another polynomial for the variable (Horner).
    pub fn compose(&self, image: &Poly) -> Result<Poly> {
        let mut acc = Poly::zero(image.field());
        for a in self.coeffs.iter().rev() {
            // coefficient fields agree by construction of base change
            let c = Poly::constant(reembed(a, image.field()));
            acc = acc.mul(image)?.add(&c)?;
        }
        Ok(acc)
    }

    /// Largest e with (x - c)^e dividing self; Infinity for 0.
    pub fn valuation_at(&self, c: &Scalar) -> Valuation {
        if self.is_zero() {
            return Valuation::Infinity;
        }
        let lin = Poly::linear_root(c);
        let mut f = self.clone();
        let mut e = 0;
        loop {
            let (q, r) = f.divrem(&lin).unwrap();
            if r.is_zero() {
                e += 1;
                f = q;
            } else {
                return Valuation::Finite(e);
            }
        }
    }
}

/// Base change keeps the same coefficient field; this is an identity check
/// that also lets `compose` be used uniformly.
fn reembed(a: &Scalar, target: FieldDescriptor) -> Scalar {
    assert_eq!(a.field(), target, "base change must preserve the scalar field");
    a.clone()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Spec-facing polynomial arithmetic multiplexer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
    Divrem,
    Gcd,
}

pub enum PolyArith {
    One(Poly),
    Two(Poly, Poly),
}

pub fn poly_arith(a: &Poly, b: &Poly, op: PolyOp) -> Result<PolyArith> {
    Ok(match op {
        PolyOp::Add => PolyArith::One(a.add(b)?),
        PolyOp::Mul => PolyArith::One(a.mul(b)?),
        PolyOp::Divrem => {
            let (q, r) = a.divrem(b)?;
            PolyArith::Two(q, r)
        }
        PolyOp::Gcd => PolyArith::One(a.gcd(b)?),
    })
}
