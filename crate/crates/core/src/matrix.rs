//! Matrices of polynomials and of scalars: products, determinants, Smith
//! normal form over F[x], and exact kernel computations.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, Scalar};
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    field: FieldDescriptor,
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zero(field: FieldDescriptor, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix {
            field,
            rows,
            cols,
            entries: vec![Poly::zero(field); rows * cols],
        }
    }

    pub fn identity(field: FieldDescriptor, n: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, Poly::one(field));
        }
        m
    }

    pub fn from_rows(field: FieldDescriptor, rows: Vec<Vec<Poly>>) -> PolyMatrix {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            for e in row {
                assert_eq!(e.field(), field);
                entries.push(e);
            }
        }
        PolyMatrix { field, rows: r, cols: c, entries }
    }

    pub fn from_fn(
        field: FieldDescriptor,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Poly,
    ) -> PolyMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix { field, rows, cols, entries }
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Poly) {
        assert_eq!(v.field(), self.field);
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        let mut out = PolyMatrix::zero(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add(&a.mul(b)?)?;
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).add(other.get(i, j))?);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> PolyMatrix {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = e.neg();
        }
        out
    }

    pub fn scale(&self, c: &Poly) -> PolyMatrix {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = e.mul(c).unwrap();
        }
        out
    }

    /// Substitute `image` for the variable in every entry.
    pub fn compose(&self, image: &Poly) -> Result<PolyMatrix> {
        let mut out = PolyMatrix::zero(image.field(), self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).compose(image)?);
            }
        }
        Ok(out)
    }

    pub fn all_constant(&self) -> bool {
        self.entries.iter().all(|e| e.is_constant())
    }

    pub fn to_scalar(&self) -> Option<ScalarMatrix> {
        if !self.all_constant() {
            return None;
        }
        Some(ScalarMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.coeff(0)).collect(),
        })
    }

    /// Fraction-free Bareiss determinant; exact over the polynomial ring.
    pub fn determinant(&self) -> Poly {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Poly::one(self.field);
        }
        let mut m = self.clone();
        let mut sign = false;
        let mut prev = Poly::one(self.field);
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                    return Poly::zero(self.field);
                };
                for j in 0..n {
                    let a = m.get(k, j).clone();
                    let b = m.get(swap, j).clone();
                    m.set(k, j, b);
                    m.set(swap, j, a);
                }
                sign = !sign;
            }
            let pivot = m.get(k, k).clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m
                        .get(i, j)
                        .mul(&pivot)
                        .unwrap()
                        .sub(&m.get(i, k).mul(m.get(k, j)).unwrap())
                        .unwrap();
                    let (q, r) = num.divrem(&prev).unwrap();
                    assert!(r.is_zero(), "Bareiss division must be exact");
                    m.set(i, j, q);
                }
            }
            for i in k + 1..n {
                m.set(i, k, Poly::zero(self.field));
            }
            prev = pivot;
        }
        let det = m.get(n - 1, n - 1).clone();
        if sign {
            det.neg()
        } else {
            det
        }
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// U * A * V = D with U, V invertible over F[x], D diagonal with a monic
/// divisibility chain. Inverses and determinants are tracked through the
/// elementary operations.
#[derive(Debug, Clone)]
pub struct SnfResult {
    pub u: PolyMatrix,
    pub u_inv: PolyMatrix,
    pub v: PolyMatrix,
    pub v_inv: PolyMatrix,
    pub d: PolyMatrix,
    pub divisors: Vec<Poly>,
    pub rank: usize,
    pub det_u: Scalar,
    pub det_v: Scalar,
}

struct SnfCalc {
    d: PolyMatrix,
    u: PolyMatrix,
    u_inv: PolyMatrix,
    v: PolyMatrix,
    v_inv: PolyMatrix,
    det_u: Scalar,
    det_v: Scalar,
}

impl SnfCalc {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.d.cols() {
            let (a, b) = (self.d.get(i, c).clone(), self.d.get(j, c).clone());
            self.d.set(i, c, b);
            self.d.set(j, c, a);
        }
        for c in 0..self.u.cols() {
            let (a, b) = (self.u.get(i, c).clone(), self.u.get(j, c).clone());
            self.u.set(i, c, b);
            self.u.set(j, c, a);
        }
        for r in 0..self.u_inv.rows() {
            let (a, b) = (self.u_inv.get(r, i).clone(), self.u_inv.get(r, j).clone());
            self.u_inv.set(r, i, b);
            self.u_inv.set(r, j, a);
        }
        self.det_u = self.det_u.neg();
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.d.rows() {
            let (a, b) = (self.d.get(r, i).clone(), self.d.get(r, j).clone());
            self.d.set(r, i, b);
            self.d.set(r, j, a);
        }
        for r in 0..self.v.rows() {
            let (a, b) = (self.v.get(r, i).clone(), self.v.get(r, j).clone());
            self.v.set(r, i, b);
            self.v.set(r, j, a);
        }
        for c in 0..self.v_inv.cols() {
            let (a, b) = (self.v_inv.get(i, c).clone(), self.v_inv.get(j, c).clone());
            self.v_inv.set(i, c, b);
            self.v_inv.set(j, c, a);
        }
        self.det_v = self.det_v.neg();
    }

    /// row_i += f * row_j
    fn add_row(&mut self, i: usize, j: usize, f: &Poly) {
        assert_ne!(i, j);
        if f.is_zero() {
            return;
        }
        for c in 0..self.d.cols() {
            let a = self.d.get(j, c);
            if a.is_zero() {
                continue;
            }
            let v = self.d.get(i, c).add(&f.mul(a).unwrap()).unwrap();
            self.d.set(i, c, v);
        }
        for c in 0..self.u.cols() {
            let a = self.u.get(j, c);
            if a.is_zero() {
                continue;
            }
            let v = self.u.get(i, c).add(&f.mul(a).unwrap()).unwrap();
            self.u.set(i, c, v);
        }
        for r in 0..self.u_inv.rows() {
            let a = self.u_inv.get(r, i);
            if a.is_zero() {
                continue;
            }
            let v = self.u_inv.get(r, j).sub(&f.mul(a).unwrap()).unwrap();
            self.u_inv.set(r, j, v);
        }
    }

    /// col_i += f * col_j
    fn add_col(&mut self, i: usize, j: usize, f: &Poly) {
        assert_ne!(i, j);
        if f.is_zero() {
            return;
        }
        for r in 0..self.d.rows() {
            let a = self.d.get(r, j);
            if a.is_zero() {
                continue;
            }
            let v = self.d.get(r, i).add(&f.mul(a).unwrap()).unwrap();
            self.d.set(r, i, v);
        }
        for r in 0..self.v.rows() {
            let a = self.v.get(r, j);
            if a.is_zero() {
                continue;
            }
            let v = self.v.get(r, i).add(&f.mul(a).unwrap()).unwrap();
            self.v.set(r, i, v);
        }
        for c in 0..self.v_inv.cols() {
            let a = self.v_inv.get(i, c);
            if a.is_zero() {
                continue;
            }
            let v = self.v_inv.get(j, c).sub(&f.mul(a).unwrap()).unwrap();
            self.v_inv.set(j, c, v);
        }
    }

    fn scale_row(&mut self, i: usize, c: &Scalar) {
        let p = Poly::constant(c.clone());
        let p_inv = Poly::constant(c.inv().unwrap());
        for col in 0..self.d.cols() {
            let v = self.d.get(i, col).mul(&p).unwrap();
            self.d.set(i, col, v);
        }
        for col in 0..self.u.cols() {
            let v = self.u.get(i, col).mul(&p).unwrap();
            self.u.set(i, col, v);
        }
        for r in 0..self.u_inv.rows() {
            let v = self.u_inv.get(r, i).mul(&p_inv).unwrap();
            self.u_inv.set(r, i, v);
        }
        self.det_u = self.det_u.mul(c).unwrap();
    }
}

/// Smallest-degree pivot, ties broken by lowest (row, col).
fn find_pivot(d: &PolyMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            if let Some(deg) = d.get(i, j).degree() {
                if best.map(|(bd, _, _)| deg < bd).unwrap_or(true) {
                    best = Some((deg, i, j));
                }
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

pub fn smith_normal_form(a: &PolyMatrix) -> SnfResult {
    let field = a.field();
    let (m, n) = (a.rows(), a.cols());
    let mut calc = SnfCalc {
        d: a.clone(),
        u: PolyMatrix::identity(field, m),
        u_inv: PolyMatrix::identity(field, m),
        v: PolyMatrix::identity(field, n),
        v_inv: PolyMatrix::identity(field, n),
        det_u: Scalar::one(field),
        det_v: Scalar::one(field),
    };
    let mut rank = 0;
    't_loop: for t in 0..m.min(n) {
        'pivot: loop {
            let Some((pi, pj)) = find_pivot(&calc.d, t) else {
                break 't_loop;
            };
            calc.swap_rows(t, pi);
            calc.swap_cols(t, pj);
            // monic pivots keep coefficient growth in check during
            // elimination over rational coefficient fields
            let lead = calc.d.get(t, t).leading_coeff().cloned().unwrap();
            if !lead.is_one() {
                calc.scale_row(t, &lead.inv().unwrap());
            }
            let pivot = calc.d.get(t, t).clone();
            // clear the column under the pivot
            let mut dirty = false;
            for i in t + 1..m {
                if calc.d.get(i, t).is_zero() {
                    continue;
                }
                let (q, _) = calc.d.get(i, t).divrem(&pivot).unwrap();
                calc.add_row(i, t, &q.neg());
                if !calc.d.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }
            // clear the row right of the pivot
            for j in t + 1..n {
                if calc.d.get(t, j).is_zero() {
                    continue;
                }
                let (q, _) = calc.d.get(t, j).divrem(&pivot).unwrap();
                calc.add_col(j, t, &q.neg());
                if !calc.d.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }
            // the pivot must divide everything that remains
            for i in t + 1..m {
                for j in t + 1..n {
                    if calc.d.get(i, j).is_zero() {
                        continue;
                    }
                    let (_, r) = calc.d.get(i, j).divrem(&pivot).unwrap();
                    if !r.is_zero() {
                        let one = Poly::one(field);
                        calc.add_row(t, i, &one);
                        continue 'pivot;
                    }
                }
            }
            rank += 1;
            break;
        }
    }
    // monic normalization of the divisors
    for t in 0..rank {
        let lead = calc.d.get(t, t).leading_coeff().cloned().unwrap();
        if !lead.is_one() {
            calc.scale_row(t, &lead.inv().unwrap());
        }
    }
    let divisors: Vec<Poly> = (0..rank).map(|t| calc.d.get(t, t).clone()).collect();
    let result = SnfResult {
        u: calc.u,
        u_inv: calc.u_inv,
        v: calc.v,
        v_inv: calc.v_inv,
        d: calc.d,
        divisors,
        rank,
        det_u: calc.det_u,
        det_v: calc.det_v,
    };
    if cfg!(debug_assertions) {
        result.verify(a);
    }
    result
}

impl SnfResult {
    /// Full structural verification against the input matrix.
    pub fn verify(&self, a: &PolyMatrix) {
        let prod = self.u.mul(a).unwrap().mul(&self.v).unwrap();
        assert_eq!(prod, self.d, "U*A*V != D");
        let iu = self.u.mul(&self.u_inv).unwrap();
        assert_eq!(iu, PolyMatrix::identity(a.field(), a.rows()), "U*U_inv != I");
        let iv = self.v.mul(&self.v_inv).unwrap();
        assert_eq!(iv, PolyMatrix::identity(a.field(), a.cols()), "V*V_inv != I");
        for (i, div) in self.divisors.iter().enumerate() {
            assert!(!div.is_zero());
            assert!(div.leading_coeff().unwrap().is_one(), "divisor not monic");
            if i + 1 < self.divisors.len() {
                let (_, r) = self.divisors[i + 1].divrem(div).unwrap();
                assert!(r.is_zero(), "divisibility chain broken");
            }
        }
        for i in 0..self.d.rows() {
            for j in 0..self.d.cols() {
                if i != j || i >= self.rank {
                    assert!(self.d.get(i, j).is_zero(), "D not diagonal of rank r");
                }
            }
        }
        assert!(!self.det_u.is_zero() && !self.det_v.is_zero());
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarMatrix {
    field: FieldDescriptor,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl ScalarMatrix {
    pub fn zero(field: FieldDescriptor, rows: usize, cols: usize) -> ScalarMatrix {
        ScalarMatrix {
            field,
            rows,
            cols,
            entries: vec![Scalar::zero(field); rows * cols],
        }
    }

    pub fn identity(field: FieldDescriptor, n: usize) -> ScalarMatrix {
        let mut m = ScalarMatrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one(field));
        }
        m
    }

    pub fn from_fn(
        field: FieldDescriptor,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> ScalarMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        ScalarMatrix { field, rows, cols, entries }
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn to_poly(&self) -> PolyMatrix {
        PolyMatrix::from_fn(self.field, self.rows, self.cols, |i, j| {
            Poly::constant(self.get(i, j).clone())
        })
    }

    pub fn mul(&self, other: &ScalarMatrix) -> ScalarMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = ScalarMatrix::zero(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add(&a.mul(b).unwrap()).unwrap();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Stack matrices vertically (same column count).
    pub fn vstack(parts: &[ScalarMatrix]) -> ScalarMatrix {
        assert!(!parts.is_empty());
        let field = parts[0].field;
        let cols = parts[0].cols;
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut entries = Vec::with_capacity(rows * cols);
        for p in parts {
            assert_eq!(p.cols, cols);
            entries.extend(p.entries.iter().cloned());
        }
        ScalarMatrix { field, rows, cols, entries }
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = vec![];
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    let (a, b) = (self.get(r, j).clone(), self.get(p, j).clone());
                    self.set(r, j, b);
                    self.set(p, j, a);
                }
            }
            let inv = self.get(r, c).inv().unwrap();
            if !inv.is_one() {
                for j in c..self.cols {
                    let v = self.get(r, j).mul(&inv).unwrap();
                    self.set(r, j, v);
                }
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let factor = self.get(i, c).clone();
                for j in c..self.cols {
                    let s = self.get(r, j);
                    if s.is_zero() {
                        continue;
                    }
                    let v = self.get(i, j).sub(&factor.mul(s).unwrap()).unwrap();
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Echelonized basis of the right kernel. The basis matrix restricted to
    /// the free-column rows is the identity, which lets callers express
    /// images in this basis by reading off those rows.
    pub fn right_kernel(&self) -> KernelBasis {
        let mut r = self.clone();
        let pivots = r.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let k = free.len();
        let mut basis = ScalarMatrix::zero(self.field, self.cols, k);
        for (bi, &fc) in free.iter().enumerate() {
            basis.set(fc, bi, Scalar::one(self.field));
            for (ri, &pc) in pivots.iter().enumerate() {
                let v = r.get(ri, fc).neg();
                if !v.is_zero() {
                    basis.set(pc, bi, v);
                }
            }
        }
        KernelBasis { basis, free_rows: free }
    }

    pub fn rank(&self) -> usize {
        let mut r = self.clone();
        r.rref().len()
    }
}

/// Kernel basis with the rows at which it restricts to the identity.
#[derive(Debug, Clone)]
pub struct KernelBasis {
    pub basis: ScalarMatrix,
    pub free_rows: Vec<usize>,
}

impl KernelBasis {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Solve basis * X = C for a polynomial matrix C whose columns lie in the
    /// span of the basis. Panics if they do not; callers rely on structural
    /// facts (differentials preserve kernels) to guarantee solvability.
    pub fn express(&self, c: &PolyMatrix) -> PolyMatrix {
        assert_eq!(c.rows(), self.basis.rows());
        let x = PolyMatrix::from_fn(c.field(), self.dim(), c.cols(), |i, j| {
            c.get(self.free_rows[i], j).clone()
        });
        let check = self.basis.to_poly().mul(&x).unwrap();
        assert_eq!(&check, c, "columns do not lie in the kernel span");
        x
    }
}

/// Right kernel of a matrix whose entries are constant polynomials.
pub fn constant_kernel(m: &PolyMatrix) -> Result<Vec<Vec<Scalar>>> {
    let s = m.to_scalar().ok_or_else(|| {
        Error::ParseError("constant_kernel requires entries of degree <= 0".into())
    })?;
    let k = s.right_kernel();
    let mut out = vec![];
    for j in 0..k.dim() {
        out.push((0..k.basis.rows()).map(|i| k.basis.get(i, j).clone()).collect());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn f7() -> FieldDescriptor {
        FieldDescriptor::Prime(7)
    }

    fn q() -> FieldDescriptor {
        FieldDescriptor::Cyclotomic(1)
    }

    fn diag_x_x() -> PolyMatrix {
        let x = Poly::from_integers(q(), &[0, 1]);
        let mut m = PolyMatrix::zero(q(), 2, 2);
        m.set(0, 0, x.clone());
        m.set(1, 1, x);
        m
    }

    #[test]
    fn snf_of_diagonal_is_identity_on_divisors() {
        let m = diag_x_x();
        let snf = smith_normal_form(&m);
        snf.verify(&m);
        assert_eq!(snf.divisors.len(), 2);
        let x = Poly::from_integers(q(), &[0, 1]);
        assert_eq!(snf.divisors, vec![x.clone(), x]);
        // re-running on D is the identity on divisors
        let again = smith_normal_form(&snf.d);
        assert_eq!(again.divisors, snf.divisors);
    }

    #[test]
    fn snf_rank_one_example() {
        // [[x, x^2], [0, 0]] has 1x1 minor gcd x and rank 1
        let x = Poly::from_integers(q(), &[0, 1]);
        let x2 = Poly::from_integers(q(), &[0, 0, 1]);
        let m = PolyMatrix::from_rows(q(), vec![vec![x.clone(), x2], vec![Poly::zero(q()), Poly::zero(q())]]);
        let snf = smith_normal_form(&m);
        snf.verify(&m);
        assert_eq!(snf.divisors, vec![x]);
    }

    fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize, maxdeg: usize) -> PolyMatrix {
        PolyMatrix::from_fn(f7(), rows, cols, |_, _| {
            let d = rng.gen_range(0..=maxdeg);
            let coeffs: Vec<i64> = (0..=d).map(|_| rng.gen_range(0..7)).collect();
            Poly::from_integers(f7(), &coeffs)
        })
    }

    /// Minor-gcd oracle: product of the first i divisors equals the monic
    /// gcd of all i-by-i minors, computed by cofactor expansion.
    fn minor_gcd(m: &PolyMatrix, size: usize) -> Poly {
        fn minor_det(m: &PolyMatrix, rows: &[usize], cols: &[usize]) -> Poly {
            if rows.len() == 1 {
                return m.get(rows[0], cols[0]).clone();
            }
            let mut acc = Poly::zero(m.field());
            for (k, &c) in cols.iter().enumerate() {
                let sub_rows = &rows[1..];
                let sub_cols: Vec<usize> =
                    cols.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, &x)| x).collect();
                let term = m.get(rows[0], c).mul(&minor_det(m, sub_rows, &sub_cols)).unwrap();
                acc = if k % 2 == 0 { acc.add(&term).unwrap() } else { acc.sub(&term).unwrap() };
            }
            acc
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = vec![];
            for first in 0..n {
                for mut rest in subsets(n, k - 1) {
                    if rest.iter().all(|&x| x > first) {
                        let mut v = vec![first];
                        v.append(&mut rest);
                        out.push(v);
                    }
                }
            }
            out
        }
        let mut g = Poly::zero(m.field());
        for rows in subsets(m.rows(), size) {
            for cols in subsets(m.cols(), size) {
                g = g.gcd(&minor_det(m, &rows, &cols)).unwrap();
            }
        }
        g
    }

    #[test]
    fn snf_divisor_products_match_minor_gcds() {
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..8 {
            let m = random_matrix(&mut rng, 3, 3, 2);
            let snf = smith_normal_form(&m);
            snf.verify(&m);
            let mut prod = Poly::one(f7());
            for (i, d) in snf.divisors.iter().enumerate() {
                prod = prod.mul(d).unwrap();
                assert_eq!(prod.monic(), minor_gcd(&m, i + 1).monic());
            }
        }
    }

    #[test]
    fn tracked_determinants_match_bareiss() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..6 {
            let m = random_matrix(&mut rng, 3, 4, 1);
            let snf = smith_normal_form(&m);
            let du = snf.u.determinant();
            assert!(du.is_constant());
            assert_eq!(du.coeff(0), snf.det_u);
            let dv = snf.v.determinant();
            assert!(dv.is_constant());
            assert_eq!(dv.coeff(0), snf.det_v);
        }
    }

    #[test]
    fn kernel_of_identity_and_zero() {
        let id = PolyMatrix::identity(f7(), 2);
        assert!(constant_kernel(&id).unwrap().is_empty());
        let z = PolyMatrix::zero(f7(), 2, 2);
        let basis = constant_kernel(&z).unwrap();
        assert_eq!(basis.len(), 2);
        assert!(basis[0][0].is_one() && basis[0][1].is_zero());
        assert!(basis[1][1].is_one() && basis[1][0].is_zero());
    }

    #[test]
    fn kernel_rejects_nonconstant_entries() {
        let mut m = PolyMatrix::zero(f7(), 1, 1);
        m.set(0, 0, Poly::from_integers(f7(), &[0, 1]));
        assert!(constant_kernel(&m).is_err());
    }

    #[test]
    fn bareiss_determinant_matches_cofactor_expansion() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..5 {
            let m = random_matrix(&mut rng, 3, 3, 2);
            let cofactor = {
                let idx: Vec<usize> = (0..3).collect();
                fn det(m: &PolyMatrix, rows: &[usize], cols: &[usize]) -> Poly {
                    if rows.len() == 1 {
                        return m.get(rows[0], cols[0]).clone();
                    }
                    let mut acc = Poly::zero(m.field());
                    for (k, &c) in cols.iter().enumerate() {
                        let sub: Vec<usize> =
                            cols.iter().filter(|&&x| x != c).cloned().collect();
                        let t = m.get(rows[0], c).mul(&det(m, &rows[1..], &sub)).unwrap();
                        acc = if k % 2 == 0 { acc.add(&t).unwrap() } else { acc.sub(&t).unwrap() };
                    }
                    acc
                }
                det(&m, &idx, &idx)
            };
            assert_eq!(m.determinant(), cofactor);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(120))]
        #[test]
        fn kernel_dim_plus_rank_is_cols(seed in 0u64..1000, rows in 1usize..5, cols in 1usize..5) {
            let mut rng = StdRng::seed_from_u64(seed);
            let m = ScalarMatrix::from_fn(f7(), rows, cols, |_, _| {
                Scalar::from_integer(f7(), rng.gen_range(0..7))
            });
            let k = m.right_kernel();
            prop_assert_eq!(k.dim() + m.rank(), cols);
            // every basis vector is killed by the matrix
            let prod = m.mul(&k.basis);
            for i in 0..prod.rows() {
                for j in 0..prod.cols() {
                    prop_assert!(prod.get(i, j).is_zero());
                }
            }
        }

        #[test]
        fn snf_on_random_matrices(seed in 0u64..400, rows in 1usize..4, cols in 1usize..4) {
            let mut rng = StdRng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, rows, cols, 2);
            let snf = smith_normal_form(&m);
            snf.verify(&m);
        }
    }
}
