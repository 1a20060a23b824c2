//! Bounded chain complexes of based free F[x]-modules, with homological
//! grading (the differential lowers degree). Complexes carry ordered basis
//! labels per degree because the group actions on tensor powers are defined
//! on labeled basis words.
//!
//! Classes in the Grothendieck group of complexes supported on a finite set
//! of linear points are realized as integer vectors of local Euler
//! characteristics, one coordinate per point, plus an optional free-rank
//! coordinate for globally supported classes.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, Scalar};
use crate::matrix::{smith_normal_form, PolyMatrix};
use crate::poly::{Poly, Valuation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeComplex {
    field: FieldDescriptor,
    ranks: BTreeMap<i64, usize>,
    diffs: BTreeMap<i64, PolyMatrix>,
    labels: BTreeMap<i64, Vec<String>>,
}

impl FreeComplex {
    /// Build and validate. Ranks of zero are dropped, zero or degenerate
    /// differentials are dropped, and missing labels are defaulted, so equal
    /// complexes have equal representations.
    pub fn new(
        field: FieldDescriptor,
        ranks: BTreeMap<i64, usize>,
        diffs: BTreeMap<i64, PolyMatrix>,
        labels: Option<BTreeMap<i64, Vec<String>>>,
    ) -> Result<FreeComplex> {
        let ranks: BTreeMap<i64, usize> =
            ranks.into_iter().filter(|(_, r)| *r > 0).collect();
        let mut kept = BTreeMap::new();
        for (d, m) in diffs {
            let rows = *ranks.get(&(d - 1)).unwrap_or(&0);
            let cols = *ranks.get(&d).unwrap_or(&0);
            if m.rows() != rows || m.cols() != cols {
                return Err(Error::NotAComplex { degree: d });
            }
            if m.field() != field {
                return Err(Error::FieldMismatch(
                    field.to_string(),
                    m.field().to_string(),
                ));
            }
            if rows > 0 && cols > 0 && !m.is_zero() {
                kept.insert(d, m);
            }
        }
        let mut lab = BTreeMap::new();
        for (&d, &r) in &ranks {
            let given = labels.as_ref().and_then(|l| l.get(&d));
            let v = match given {
                Some(v) => {
                    if v.len() != r {
                        return Err(Error::ParseError(format!(
                            "degree {d} has {r} generators but {} labels",
                            v.len()
                        )));
                    }
                    v.clone()
                }
                None => (0..r).map(|i| format!("g{i}")).collect(),
            };
            lab.insert(d, v);
        }
        let cx = FreeComplex { field, ranks, diffs: kept, labels: lab };
        cx.validate()?;
        Ok(cx)
    }

    /// The zero complex.
    pub fn zero(field: FieldDescriptor) -> FreeComplex {
        FreeComplex {
            field,
            ranks: BTreeMap::new(),
            diffs: BTreeMap::new(),
            labels: BTreeMap::new(),
        }
    }

    /// F[x] sitting in degree 0.
    pub fn unit(field: FieldDescriptor) -> FreeComplex {
        FreeComplex::free_module(field, 1, 0)
    }

    /// A free module of the given rank concentrated in one degree.
    pub fn free_module(field: FieldDescriptor, rank: usize, degree: i64) -> FreeComplex {
        let mut ranks = BTreeMap::new();
        if rank > 0 {
            ranks.insert(degree, rank);
        }
        FreeComplex::new(field, ranks, BTreeMap::new(), None).unwrap()
    }

    /// The two-term Koszul complex F[x] --a--> F[x] in degrees 1, 0.
    pub fn koszul(a: &Poly) -> FreeComplex {
        let field = a.field();
        let mut ranks = BTreeMap::new();
        ranks.insert(1, 1);
        ranks.insert(0, 1);
        let mut diffs = BTreeMap::new();
        if !a.is_zero() {
            diffs.insert(1, PolyMatrix::from_rows(field, vec![vec![a.clone()]]));
        }
        let mut labels = BTreeMap::new();
        labels.insert(1, vec!["e".to_string()]);
        labels.insert(0, vec!["1".to_string()]);
        FreeComplex::new(field, ranks, diffs, Some(labels)).unwrap()
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn ranks(&self) -> &BTreeMap<i64, usize> {
        &self.ranks
    }

    pub fn rank(&self, d: i64) -> usize {
        *self.ranks.get(&d).unwrap_or(&0)
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.values().sum()
    }

    /// Degrees with nonzero rank, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        self.ranks.keys().cloned().collect()
    }

    /// The differential leaving degree d, materialized to the right shape.
    pub fn diff(&self, d: i64) -> PolyMatrix {
        match self.diffs.get(&d) {
            Some(m) => m.clone(),
            None => PolyMatrix::zero(self.field, self.rank(d - 1), self.rank(d)),
        }
    }

    pub fn labels(&self, d: i64) -> Vec<String> {
        self.labels.get(&d).cloned().unwrap_or_default()
    }

    /// Equality of the underlying based complexes, ignoring label strings.
    pub fn eq_modulo_labels(&self, other: &FreeComplex) -> bool {
        self.field == other.field && self.ranks == other.ranks && self.diffs == other.diffs
    }

    /// Checks shapes and d*d = 0, reporting the first offending degree.
    pub fn validate(&self) -> Result<()> {
        for (&d, m) in &self.diffs {
            if m.rows() != self.rank(d - 1) || m.cols() != self.rank(d) {
                return Err(Error::NotAComplex { degree: d });
            }
        }
        for &d in self.diffs.keys() {
            if self.diffs.contains_key(&(d - 1)) {
                let prod = self.diff(d - 1).mul(&self.diff(d)).unwrap();
                if !prod.is_zero() {
                    return Err(Error::NotAComplex { degree: d });
                }
            }
        }
        Ok(())
    }

    fn check_field(&self, other: &FreeComplex) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        Ok(())
    }

    /// Basis enumeration of a tensor product: in each total degree the basis
    /// runs over blocks X_i (x) Y_{d-i} with i ascending, left index major
    /// within a block. Shared with the equivariant machinery, which must
    /// index into tensor bases exactly.
    pub(crate) fn tensor_basis(
        &self,
        other: &FreeComplex,
    ) -> BTreeMap<i64, Vec<(i64, usize, i64, usize)>> {
        let mut basis: BTreeMap<i64, Vec<(i64, usize, i64, usize)>> = BTreeMap::new();
        for (&i, &ri) in &self.ranks {
            for (&j, &rj) in &other.ranks {
                let entry = basis.entry(i + j).or_default();
                for a in 0..ri {
                    for b in 0..rj {
                        entry.push((i, a, j, b));
                    }
                }
            }
        }
        basis
    }

    /// Tensor product with the Koszul sign rule.
    pub fn tensor(&self, other: &FreeComplex) -> Result<FreeComplex> {
        self.check_field(other)?;
        let field = self.field;
        let basis = self.tensor_basis(other);
        let mut index: BTreeMap<i64, BTreeMap<(i64, usize, i64, usize), usize>> = BTreeMap::new();
        for (&d, words) in &basis {
            let m = words.iter().enumerate().map(|(p, w)| (*w, p)).collect();
            index.insert(d, m);
        }
        let mut ranks = BTreeMap::new();
        let mut labels = BTreeMap::new();
        for (&d, words) in &basis {
            ranks.insert(d, words.len());
            let lab = words
                .iter()
                .map(|&(i, a, j, b)| {
                    format!("{}⊗{}", self.labels(i)[a], other.labels(j)[b])
                })
                .collect();
            labels.insert(d, lab);
        }
        let mut diffs = BTreeMap::new();
        for (&d, words) in &basis {
            let rows = basis.get(&(d - 1)).map(|w| w.len()).unwrap_or(0);
            if rows == 0 {
                continue;
            }
            let target = &index[&(d - 1)];
            let mut m = PolyMatrix::zero(field, rows, words.len());
            for (col, &(i, a, j, b)) in words.iter().enumerate() {
                // d(x) (x) y
                let dx = self.diff(i);
                for r in 0..dx.rows() {
                    let e = dx.get(r, a);
                    if e.is_zero() {
                        continue;
                    }
                    let row = target[&(i - 1, r, j, b)];
                    let v = m.get(row, col).add(e)?;
                    m.set(row, col, v);
                }
                // (-1)^i x (x) d(y)
                let dy = other.diff(j);
                let sign_neg = i.rem_euclid(2) == 1;
                for s in 0..dy.rows() {
                    let e = dy.get(s, b);
                    if e.is_zero() {
                        continue;
                    }
                    let row = target[&(i, a, j - 1, s)];
                    let term = if sign_neg { e.neg() } else { e.clone() };
                    let v = m.get(row, col).add(&term)?;
                    m.set(row, col, v);
                }
            }
            diffs.insert(d, m);
        }
        FreeComplex::new(field, ranks, diffs, Some(labels))
    }

    pub fn direct_sum(&self, other: &FreeComplex) -> Result<FreeComplex> {
        self.check_field(other)?;
        let field = self.field;
        let mut ranks = BTreeMap::new();
        let mut labels = BTreeMap::new();
        let degrees: Vec<i64> = {
            let mut d: Vec<i64> = self.ranks.keys().chain(other.ranks.keys()).cloned().collect();
            d.sort();
            d.dedup();
            d
        };
        for &d in &degrees {
            let r = self.rank(d) + other.rank(d);
            ranks.insert(d, r);
            let mut lab = self.labels(d);
            lab.extend(other.labels(d));
            labels.insert(d, lab);
        }
        let mut diffs = BTreeMap::new();
        for &d in &degrees {
            let rows = self.rank(d - 1) + other.rank(d - 1);
            let cols = self.rank(d) + other.rank(d);
            if rows == 0 || cols == 0 {
                continue;
            }
            let (a, b) = (self.diff(d), other.diff(d));
            let mut m = PolyMatrix::zero(field, rows, cols);
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    m.set(i, j, a.get(i, j).clone());
                }
            }
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    m.set(self.rank(d - 1) + i, self.rank(d) + j, b.get(i, j).clone());
                }
            }
            diffs.insert(d, m);
        }
        FreeComplex::new(field, ranks, diffs, Some(labels))
    }

    /// Shift by s; odd shifts negate the differentials.
    pub fn shift(&self, s: i64) -> FreeComplex {
        let mut ranks = BTreeMap::new();
        let mut labels = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for (&d, &r) in &self.ranks {
            ranks.insert(d + s, r);
            labels.insert(d + s, self.labels(d));
        }
        for (&d, m) in &self.diffs {
            let m = if s.rem_euclid(2) == 1 { m.neg() } else { m.clone() };
            diffs.insert(d + s, m);
        }
        FreeComplex::new(self.field, ranks, diffs, Some(labels)).unwrap()
    }

    /// Substitute x -> image(y) in every differential entry.
    pub fn base_change(&self, image: &Poly) -> Result<FreeComplex> {
        let field = image.field();
        let mut diffs = BTreeMap::new();
        for (&d, m) in &self.diffs {
            diffs.insert(d, m.compose(image)?);
        }
        FreeComplex::new(field, self.ranks.clone(), diffs, Some(self.labels.clone()))
    }

    /// Split off contractible two-term summands along nonzero constant
    /// entries of the differentials (Gaussian reduction of the complex). The
    /// result is homotopy equivalent to the input, hence has identical
    /// homology, and is usually much smaller.
    ///
    /// Cancelling the pivot diff(d)[r][c] removes generator c of degree d
    /// and generator r of degree d-1, applies the Schur complement update to
    /// diff(d), and merely masks row c of diff(d+1) and column r of
    /// diff(d-1): after the implied base change those lines vanish by
    /// d*d = 0. Masked lines never create new constants, so one ascending
    /// sweep with a per-degree fixpoint is complete.
    pub fn reduce(&self) -> FreeComplex {
        let field = self.field;
        let mut alive: BTreeMap<i64, Vec<bool>> = self
            .ranks
            .iter()
            .map(|(&d, &r)| (d, vec![true; r]))
            .collect();
        let mut mats: BTreeMap<i64, Vec<Vec<Poly>>> = BTreeMap::new();
        for (&d, m) in &self.diffs {
            let rows = (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| m.get(i, j).clone()).collect())
                .collect();
            mats.insert(d, rows);
        }
        let degrees: Vec<i64> = mats.keys().cloned().collect();
        for &d in &degrees {
            loop {
                let (rows_alive, cols_alive) = {
                    let ra = alive.get(&(d - 1)).cloned().unwrap_or_default();
                    let ca = alive.get(&d).cloned().unwrap_or_default();
                    (ra, ca)
                };
                let m = mats.get(&d).unwrap();
                let mut pivot = None;
                'scan: for (i, row) in m.iter().enumerate() {
                    if !rows_alive[i] {
                        continue;
                    }
                    for (j, e) in row.iter().enumerate() {
                        if cols_alive[j] && e.is_constant() && !e.is_zero() {
                            pivot = Some((i, j));
                            break 'scan;
                        }
                    }
                }
                let Some((r, c)) = pivot else {
                    break;
                };
                let m = mats.get_mut(&d).unwrap();
                let alpha_inv = m[r][c].coeff(0).inv().unwrap();
                let col_vals: Vec<(usize, Poly)> = (0..m.len())
                    .filter(|&i| i != r && rows_alive[i] && !m[i][c].is_zero())
                    .map(|i| (i, m[i][c].scale(&alpha_inv)))
                    .collect();
                let row_vals: Vec<(usize, Poly)> = (0..m[r].len())
                    .filter(|&j| j != c && cols_alive[j] && !m[r][j].is_zero())
                    .map(|j| (j, m[r][j].clone()))
                    .collect();
                for (i, ci) in &col_vals {
                    for (j, rj) in &row_vals {
                        let correction = ci.mul(rj).unwrap();
                        m[*i][*j] = m[*i][*j].sub(&correction).unwrap();
                    }
                }
                alive.get_mut(&d).unwrap()[c] = false;
                alive.get_mut(&(d - 1)).unwrap()[r] = false;
            }
        }
        // extract the surviving generators
        let mut ranks = BTreeMap::new();
        let mut labels = BTreeMap::new();
        let mut keep: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (&d, mask) in &alive {
            let idx: Vec<usize> = mask
                .iter()
                .enumerate()
                .filter(|(_, &a)| a)
                .map(|(i, _)| i)
                .collect();
            if idx.is_empty() {
                continue;
            }
            ranks.insert(d, idx.len());
            let lab = self.labels(d);
            labels.insert(d, idx.iter().map(|&i| lab[i].clone()).collect());
            keep.insert(d, idx);
        }
        let mut diffs = BTreeMap::new();
        for (&d, m) in &mats {
            let (Some(ri), Some(ci)) = (keep.get(&(d - 1)), keep.get(&d)) else {
                continue;
            };
            let sub = PolyMatrix::from_fn(field, ri.len(), ci.len(), |i, j| {
                m[ri[i]][ci[j]].clone()
            });
            if !sub.is_zero() {
                diffs.insert(d, sub);
            }
        }
        let out = FreeComplex::new(field, ranks, diffs, Some(labels))
            .expect("Gaussian reduction preserves the complex");
        out
    }

    /// Homology in each degree via Smith normal form over the PID F[x]:
    /// ker d_d in the coordinates of V_d, then the image of d_{d+1} expressed
    /// in those coordinates, then invariant factors of the quotient.
    pub fn homology(&self) -> HomologyProfile {
        let mut degrees = BTreeMap::new();
        for (&d, &n) in &self.ranks {
            if n == 0 {
                continue;
            }
            let below = self.rank(d - 1);
            let (kernel_dim, v_inv, rank_d) = if below == 0 || !self.diffs.contains_key(&d) {
                (n, PolyMatrix::identity(self.field, n), 0)
            } else {
                let snf = smith_normal_form(&self.diff(d));
                (n - snf.rank, snf.v_inv, snf.rank)
            };
            if kernel_dim == 0 {
                continue;
            }
            let incoming = self.diff(d + 1);
            let (free_rank, torsion) = if incoming.cols() == 0 || incoming.is_zero() {
                (kernel_dim, vec![])
            } else {
                let coords = v_inv.mul(&incoming).unwrap();
                for i in 0..rank_d {
                    for j in 0..coords.cols() {
                        assert!(
                            coords.get(i, j).is_zero(),
                            "image does not lie in the kernel; not a complex"
                        );
                    }
                }
                let w = PolyMatrix::from_fn(
                    self.field,
                    kernel_dim,
                    coords.cols(),
                    |i, j| coords.get(rank_d + i, j).clone(),
                );
                let snf_w = smith_normal_form(&w);
                let torsion: Vec<Poly> = snf_w
                    .divisors
                    .iter()
                    .filter(|p| !p.is_constant())
                    .cloned()
                    .collect();
                (kernel_dim - snf_w.rank, torsion)
            };
            if free_rank > 0 || !torsion.is_empty() {
                let mut torsion = torsion;
                torsion.sort();
                degrees.insert(d, DegreeHomology { free_rank, torsion });
            }
        }
        HomologyProfile { degrees }
    }

    /// Local Euler characteristics over the marked points, with the support
    /// condition enforced here: every torsion divisor must split into linear
    /// factors at points of Z, and free homology is only admitted when
    /// `allow_global` is set (contributing to the rank coordinate).
    pub fn k0_class(&self, z: &PointSet, allow_global: bool) -> Result<K0Class> {
        let profile = self.reduce().homology();
        k0_class_from_profile(&profile, z, allow_global)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeHomology {
    pub free_rank: usize,
    pub torsion: Vec<Poly>,
}

/// Free ranks and invariant factors of homology, degree by degree. Acyclic
/// complexes have an empty profile.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HomologyProfile {
    pub degrees: BTreeMap<i64, DegreeHomology>,
}

impl HomologyProfile {
    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }
}

impl fmt::Display for HomologyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "acyclic");
        }
        let mut first = true;
        for (d, h) in &self.degrees {
            if !first {
                write!(f, "; ")?;
            }
            first = false;
            write!(f, "H_{d}: ")?;
            let mut parts = vec![];
            if h.free_rank > 0 {
                parts.push(format!("free^{}", h.free_rank));
            }
            for t in &h.torsion {
                parts.push(format!("F[x]/({t})"));
            }
            write!(f, "{}", parts.join(" + "))?;
        }
        Ok(())
    }
}

/// A finite set of marked linear points x - c of Spec F[x].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    points: Vec<Scalar>,
}

impl PointSet {
    pub fn new(points: Vec<Scalar>) -> Result<PointSet> {
        let mut sorted = points.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != points.len() {
            return Err(Error::ParseError("duplicate points in point set".into()));
        }
        Ok(PointSet { points })
    }

    pub fn of_integers(field: FieldDescriptor, cs: &[i64]) -> PointSet {
        PointSet::new(cs.iter().map(|c| Scalar::from_integer(field, *c)).collect()).unwrap()
    }

    pub fn points(&self) -> &[Scalar] {
        &self.points
    }
}

/// An element of the Grothendieck group realized as local Euler
/// characteristics; `global` carries the alternating free rank when the
/// class is allowed a globally supported component.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct K0Class {
    locals: BTreeMap<Scalar, i64>,
    global: i64,
}

impl K0Class {
    pub fn zero() -> K0Class {
        K0Class::default()
    }

    pub fn of_point(c: Scalar, v: i64) -> K0Class {
        let mut k = K0Class::zero();
        k.add_local(c, v);
        k
    }

    pub fn of_global(v: i64) -> K0Class {
        K0Class { locals: BTreeMap::new(), global: v }
    }

    pub fn add_local(&mut self, c: Scalar, v: i64) {
        if v == 0 {
            return;
        }
        let entry = self.locals.entry(c.clone()).or_insert(0);
        *entry += v;
        if *entry == 0 {
            self.locals.remove(&c);
        }
    }

    pub fn value_at(&self, c: &Scalar) -> i64 {
        *self.locals.get(c).unwrap_or(&0)
    }

    pub fn global(&self) -> i64 {
        self.global
    }

    pub fn locals(&self) -> &BTreeMap<Scalar, i64> {
        &self.locals
    }

    pub fn is_zero(&self) -> bool {
        self.locals.is_empty() && self.global == 0
    }

    pub fn add(&self, other: &K0Class) -> K0Class {
        let mut out = self.clone();
        out.global += other.global;
        for (c, v) in &other.locals {
            out.add_local(c.clone(), *v);
        }
        out
    }

    pub fn neg(&self) -> K0Class {
        K0Class {
            locals: self.locals.iter().map(|(c, v)| (c.clone(), -v)).collect(),
            global: -self.global,
        }
    }

    pub fn sub(&self, other: &K0Class) -> K0Class {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> K0Class {
        if k == 0 {
            return K0Class::zero();
        }
        K0Class {
            locals: self.locals.iter().map(|(c, v)| (c.clone(), k * v)).collect(),
            global: k * self.global,
        }
    }
}

impl fmt::Display for K0Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        if self.global != 0 {
            write!(f, "global: {}", self.global)?;
            first = false;
        }
        for (c, v) in &self.locals {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{c}: {v}")?;
        }
        write!(f, "}}")
    }
}

pub fn k0_class_from_profile(
    profile: &HomologyProfile,
    z: &PointSet,
    allow_global: bool,
) -> Result<K0Class> {
    let mut class = K0Class::zero();
    for (&d, h) in &profile.degrees {
        let sign = if d.rem_euclid(2) == 0 { 1 } else { -1 };
        if h.free_rank > 0 {
            if !allow_global {
                return Err(Error::SupportViolation {
                    degree: d,
                    divisor: format!("free rank {}", h.free_rank),
                });
            }
            class.global += sign * h.free_rank as i64;
        }
        for t in &h.torsion {
            let mut covered = 0u64;
            for c in z.points() {
                if let Valuation::Finite(v) = t.valuation_at(c) {
                    covered += v;
                    if v > 0 {
                        class.add_local(c.clone(), sign * v as i64);
                    }
                }
            }
            if covered < t.degree().unwrap() as u64 {
                return Err(Error::SupportViolation {
                    degree: d,
                    divisor: t.to_string(),
                });
            }
        }
    }
    Ok(class)
}

/// A chain map between complexes over the same field, one matrix per degree.
#[derive(Debug, Clone)]
pub struct ChainMap {
    pub source: FreeComplex,
    pub target: FreeComplex,
    pub maps: BTreeMap<i64, PolyMatrix>,
}

impl ChainMap {
    pub fn new(
        source: FreeComplex,
        target: FreeComplex,
        maps: BTreeMap<i64, PolyMatrix>,
    ) -> Result<ChainMap> {
        let f = ChainMap { source, target, maps };
        f.validate()?;
        Ok(f)
    }

    pub fn identity(x: &FreeComplex) -> ChainMap {
        let maps = x
            .degrees()
            .into_iter()
            .map(|d| (d, PolyMatrix::identity(x.field(), x.rank(d))))
            .collect();
        ChainMap {
            source: x.clone(),
            target: x.clone(),
            maps,
        }
    }

    /// Multiplication by a fixed polynomial, as a chain self-map.
    pub fn scalar_multiple(x: &FreeComplex, a: &Poly) -> ChainMap {
        let maps = x
            .degrees()
            .into_iter()
            .map(|d| (d, PolyMatrix::identity(x.field(), x.rank(d)).scale(a)))
            .collect();
        ChainMap {
            source: x.clone(),
            target: x.clone(),
            maps,
        }
    }

    pub fn map_at(&self, d: i64) -> PolyMatrix {
        match self.maps.get(&d) {
            Some(m) => m.clone(),
            None => {
                PolyMatrix::zero(self.source.field(), self.target.rank(d), self.source.rank(d))
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (&d, m) in &self.maps {
            if m.rows() != self.target.rank(d) || m.cols() != self.source.rank(d) {
                return Err(Error::NotAChainMap { degree: d });
            }
        }
        let mut degs: Vec<i64> = self
            .source
            .degrees()
            .into_iter()
            .chain(self.target.degrees())
            .collect();
        degs.sort();
        degs.dedup();
        for d in degs {
            let lhs = self.target.diff(d).mul(&self.map_at(d)).unwrap();
            let rhs = self.map_at(d - 1).mul(&self.source.diff(d)).unwrap();
            if lhs != rhs {
                return Err(Error::NotAChainMap { degree: d });
            }
        }
        Ok(())
    }

    /// Mapping cone: degree d is X_{d-1} + Y_d with differential
    /// [[-d_X, 0], [-f, d_Y]]. Fits in 0 -> Y -> cone(f) -> shift(X, 1) -> 0.
    pub fn cone(&self) -> FreeComplex {
        let field = self.source.field();
        let x = &self.source;
        let y = &self.target;
        let mut degs: Vec<i64> = x
            .degrees()
            .iter()
            .map(|d| d + 1)
            .chain(y.degrees())
            .collect();
        degs.sort();
        degs.dedup();
        let mut ranks = BTreeMap::new();
        let mut labels = BTreeMap::new();
        for &d in &degs {
            let r = x.rank(d - 1) + y.rank(d);
            if r == 0 {
                continue;
            }
            ranks.insert(d, r);
            let mut lab: Vec<String> =
                x.labels(d - 1).iter().map(|s| format!("s{s}")).collect();
            lab.extend(y.labels(d));
            labels.insert(d, lab);
        }
        let mut diffs = BTreeMap::new();
        for &d in &degs {
            let rows = x.rank(d - 2) + y.rank(d - 1);
            let cols = x.rank(d - 1) + y.rank(d);
            if rows == 0 || cols == 0 {
                continue;
            }
            let mut m = PolyMatrix::zero(field, rows, cols);
            let dx = x.diff(d - 1);
            for i in 0..dx.rows() {
                for j in 0..dx.cols() {
                    m.set(i, j, dx.get(i, j).neg());
                }
            }
            let fm = self.map_at(d - 1);
            for i in 0..fm.rows() {
                for j in 0..fm.cols() {
                    m.set(x.rank(d - 2) + i, j, fm.get(i, j).neg());
                }
            }
            let dy = y.diff(d);
            for i in 0..dy.rows() {
                for j in 0..dy.cols() {
                    m.set(x.rank(d - 2) + i, x.rank(d - 1) + j, dy.get(i, j).clone());
                }
            }
            diffs.insert(d, m);
        }
        FreeComplex::new(field, ranks, diffs, Some(labels)).unwrap()
    }
}

/// A formal integer combination of complexes; the value of every operation
/// on classes is carried this way so that products and compositions act on
/// explicit representatives.
#[derive(Debug, Clone)]
pub struct VirtualComplex {
    pub terms: Vec<(i64, FreeComplex)>,
}

impl VirtualComplex {
    pub fn of(x: &FreeComplex) -> VirtualComplex {
        VirtualComplex { terms: vec![(1, x.clone())] }
    }

    pub fn zero() -> VirtualComplex {
        VirtualComplex { terms: vec![] }
    }

    pub fn neg(&self) -> VirtualComplex {
        VirtualComplex {
            terms: self.terms.iter().map(|(c, x)| (-c, x.clone())).collect(),
        }
    }

    pub fn add(&self, other: &VirtualComplex) -> VirtualComplex {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        VirtualComplex { terms }
    }

    pub fn sub(&self, other: &VirtualComplex) -> VirtualComplex {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> VirtualComplex {
        if k == 0 {
            return VirtualComplex::zero();
        }
        VirtualComplex {
            terms: self.terms.iter().map(|(c, x)| (k * c, x.clone())).collect(),
        }
    }

    /// Bilinear extension of the tensor product of complexes.
    pub fn tensor(&self, other: &VirtualComplex) -> Result<VirtualComplex> {
        let mut terms = vec![];
        for (c1, x) in &self.terms {
            for (c2, y) in &other.terms {
                terms.push((c1 * c2, x.tensor(y)?));
            }
        }
        Ok(VirtualComplex { terms })
    }

    pub fn k0_class(&self, z: &PointSet, allow_global: bool) -> Result<K0Class> {
        let mut acc = K0Class::zero();
        for (c, x) in &self.terms {
            acc = acc.add(&x.k0_class(z, allow_global)?.scale(*c));
        }
        Ok(acc)
    }
}

// ---------------------------------------------------------------------------
// JSON file format
//
// {"field":"Fq:7","ranks":{"0":1,"1":1},"diffs":{"1":[[[0,1]]]},
//  "labels":{"0":["1"],"1":["e"]}}
//
// diffs[d] is a ranks[d-1] x ranks[d] matrix of coefficient lists
// (low-to-high). Coefficients are integers for prime fields; cyclotomic
// coefficients may also be "a/b" rationals or arrays of rationals (powers of
// the field generator). Default labels are omitted, so emission is canonical
// and round-trips are byte-exact.
// ---------------------------------------------------------------------------

fn scalar_to_json(s: &Scalar) -> Value {
    use num_traits::{One, ToPrimitive, Zero};
    if let Some(r) = s.residue() {
        return json!(r);
    }
    if let Some(k) = s.as_integer() {
        return json!(k);
    }
    let mut coeffs = s.zeta_coeffs().expect("cyclotomic scalar");
    while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
        coeffs.pop();
    }
    let enc: Vec<Value> = coeffs
        .iter()
        .map(|c| {
            if c.denom().is_one() {
                if let Some(k) = c.numer().to_i64() {
                    return json!(k);
                }
            }
            json!(format!("{}/{}", c.numer(), c.denom()))
        })
        .collect();
    if enc.len() == 1 {
        // a non-integral rational constant
        enc.into_iter().next().unwrap()
    } else {
        Value::Array(enc)
    }
}

fn scalar_from_json(field: FieldDescriptor, v: &Value) -> Result<Scalar> {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::Zero;
    use std::str::FromStr;
    let rational_from_str = |s: &str| -> Result<BigRational> {
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n = BigInt::from_str(n.trim())
            .map_err(|_| Error::ParseError(format!("bad numerator `{s}`")))?;
        let d = BigInt::from_str(d.trim())
            .map_err(|_| Error::ParseError(format!("bad denominator `{s}`")))?;
        if d.is_zero() {
            return Err(Error::ParseError(format!("zero denominator in `{s}`")));
        }
        Ok(BigRational::new(n, d))
    };
    match v {
        Value::Number(n) => {
            let k = n
                .as_i64()
                .ok_or_else(|| Error::ParseError(format!("coefficient {n} out of range")))?;
            Ok(Scalar::from_integer(field, k))
        }
        Value::String(s) => match field {
            FieldDescriptor::Prime(_) => {
                Err(Error::ParseError("rational coefficient in a prime field".into()))
            }
            FieldDescriptor::Cyclotomic(_) => {
                Scalar::from_zeta_poly(field, vec![rational_from_str(s)?])
            }
        },
        Value::Array(items) => match field {
            FieldDescriptor::Prime(_) => {
                Err(Error::ParseError("generator-power coefficient in a prime field".into()))
            }
            FieldDescriptor::Cyclotomic(_) => {
                let mut coeffs = vec![];
                for item in items {
                    let r = match item {
                        Value::Number(n) => BigRational::from(BigInt::from(
                            n.as_i64().ok_or_else(|| {
                                Error::ParseError("coefficient out of range".into())
                            })?,
                        )),
                        Value::String(s) => rational_from_str(s)?,
                        _ => return Err(Error::ParseError("bad coefficient entry".into())),
                    };
                    coeffs.push(r);
                }
                Scalar::from_zeta_poly(field, coeffs)
            }
        },
        _ => Err(Error::ParseError(format!("bad coefficient `{v}`"))),
    }
}

impl FreeComplex {
    pub fn to_json_value(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("field".into(), json!(self.field.to_string()));
        let mut ranks = Map::new();
        for (d, r) in &self.ranks {
            ranks.insert(d.to_string(), json!(r));
        }
        obj.insert("ranks".into(), Value::Object(ranks));
        let mut diffs = Map::new();
        for (d, m) in &self.diffs {
            let mat: Vec<Value> = (0..m.rows())
                .map(|i| {
                    let row: Vec<Value> = (0..m.cols())
                        .map(|j| {
                            let coeffs: Vec<Value> =
                                m.get(i, j).coeffs().iter().map(scalar_to_json).collect();
                            Value::Array(coeffs)
                        })
                        .collect();
                    Value::Array(row)
                })
                .collect();
            diffs.insert(d.to_string(), Value::Array(mat));
        }
        obj.insert("diffs".into(), Value::Object(diffs));
        let mut labels = Map::new();
        for (d, lab) in &self.labels {
            let default: Vec<String> = (0..lab.len()).map(|i| format!("g{i}")).collect();
            if *lab != default {
                labels.insert(d.to_string(), json!(lab));
            }
        }
        if !labels.is_empty() {
            obj.insert("labels".into(), Value::Object(labels));
        }
        Value::Object(obj)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json_value()).unwrap()
    }

    pub fn from_json_value(v: &Value) -> Result<FreeComplex> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::ParseError("complex file must be a JSON object".into()))?;
        let field_str = obj
            .get("field")
            .and_then(|f| f.as_str())
            .ok_or_else(|| Error::ParseError("missing `field`".into()))?;
        let field = FieldDescriptor::parse(field_str)?;
        crate::field::Field::new(field)?;
        let mut ranks = BTreeMap::new();
        let ranks_obj = obj
            .get("ranks")
            .and_then(|r| r.as_object())
            .ok_or_else(|| Error::ParseError("missing `ranks`".into()))?;
        for (k, v) in ranks_obj {
            let d: i64 = k
                .parse()
                .map_err(|_| Error::ParseError(format!("bad degree `{k}`")))?;
            let r = v
                .as_u64()
                .ok_or_else(|| Error::ParseError(format!("bad rank at degree {k}")))?;
            ranks.insert(d, r as usize);
        }
        let mut diffs = BTreeMap::new();
        if let Some(dobj) = obj.get("diffs") {
            let dobj = dobj
                .as_object()
                .ok_or_else(|| Error::ParseError("`diffs` must be an object".into()))?;
            for (k, v) in dobj {
                let d: i64 = k
                    .parse()
                    .map_err(|_| Error::ParseError(format!("bad degree `{k}`")))?;
                let rows = v
                    .as_array()
                    .ok_or_else(|| Error::ParseError(format!("diff {k} must be an array")))?;
                let expect_rows = *ranks.get(&(d - 1)).unwrap_or(&0);
                let expect_cols = *ranks.get(&d).unwrap_or(&0);
                if rows.len() != expect_rows {
                    return Err(Error::ParseError(format!(
                        "diff {k}: expected {expect_rows} rows, found {}",
                        rows.len()
                    )));
                }
                let mut mat_rows = vec![];
                for row in rows {
                    let cells = row.as_array().ok_or_else(|| {
                        Error::ParseError(format!("diff {k}: row must be an array"))
                    })?;
                    if cells.len() != expect_cols {
                        return Err(Error::ParseError(format!(
                            "diff {k}: expected {expect_cols} columns, found {}",
                            cells.len()
                        )));
                    }
                    let mut polys = vec![];
                    for cell in cells {
                        let coeffs = cell.as_array().ok_or_else(|| {
                            Error::ParseError(format!(
                                "diff {k}: entry must be a coefficient list"
                            ))
                        })?;
                        let mut sc = vec![];
                        for c in coeffs {
                            sc.push(scalar_from_json(field, c)?);
                        }
                        polys.push(Poly::new(field, sc));
                    }
                    mat_rows.push(polys);
                }
                diffs.insert(d, PolyMatrix::from_rows(field, mat_rows));
            }
        }
        let labels = match obj.get("labels") {
            None => None,
            Some(lv) => {
                let lobj = lv
                    .as_object()
                    .ok_or_else(|| Error::ParseError("`labels` must be an object".into()))?;
                let mut out: BTreeMap<i64, Vec<String>> = BTreeMap::new();
                for (k, v) in lobj {
                    let d: i64 = k
                        .parse()
                        .map_err(|_| Error::ParseError(format!("bad degree `{k}`")))?;
                    let arr = v
                        .as_array()
                        .ok_or_else(|| Error::ParseError("labels must be arrays".into()))?;
                    let mut lab = vec![];
                    for item in arr {
                        lab.push(
                            item.as_str()
                                .ok_or_else(|| {
                                    Error::ParseError("labels must be strings".into())
                                })?
                                .to_string(),
                        );
                    }
                    out.insert(d, lab);
                }
                // degrees without explicit labels fall back to defaults
                for (&d, &r) in &ranks {
                    out.entry(d)
                        .or_insert_with(|| (0..r).map(|i| format!("g{i}")).collect());
                }
                Some(out)
            }
        };
        FreeComplex::new(field, ranks, diffs, labels)
    }

    pub fn from_json_str(s: &str) -> Result<FreeComplex> {
        let v: Value = serde_json::from_str(s)
            .map_err(|e| Error::ParseError(format!("invalid JSON: {e}")))?;
        FreeComplex::from_json_value(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f7() -> FieldDescriptor {
        FieldDescriptor::Prime(7)
    }

    fn q() -> FieldDescriptor {
        FieldDescriptor::Cyclotomic(1)
    }

    fn x_poly(field: FieldDescriptor) -> Poly {
        Poly::from_integers(field, &[0, 1])
    }

    fn kx(field: FieldDescriptor) -> FreeComplex {
        FreeComplex::koszul(&x_poly(field))
    }

    #[test]
    fn koszul_validates_and_has_expected_homology() {
        let k = kx(q());
        assert!(k.validate().is_ok());
        let h = k.homology();
        assert_eq!(h.degrees.len(), 1);
        assert_eq!(h.degrees[&0].free_rank, 0);
        assert_eq!(h.degrees[&0].torsion, vec![x_poly(q())]);
    }

    #[test]
    fn koszul_on_zero_has_free_homology() {
        let k = FreeComplex::koszul(&Poly::zero(q()));
        let h = k.homology();
        assert_eq!(h.degrees[&0].free_rank, 1);
        assert_eq!(h.degrees[&1].free_rank, 1);
    }

    #[test]
    fn non_complex_rejected() {
        let mut ranks = BTreeMap::new();
        ranks.insert(0, 1);
        ranks.insert(1, 1);
        ranks.insert(2, 1);
        let mut diffs = BTreeMap::new();
        diffs.insert(1, PolyMatrix::from_rows(q(), vec![vec![x_poly(q())]]));
        diffs.insert(2, PolyMatrix::from_rows(q(), vec![vec![Poly::one(q())]]));
        let err = FreeComplex::new(q(), ranks, diffs, None).unwrap_err();
        assert_eq!(err, Error::NotAComplex { degree: 2 });
    }

    #[test]
    fn empty_complex_is_fine() {
        let z = FreeComplex::zero(q());
        assert!(z.validate().is_ok());
        assert!(z.homology().is_empty());
    }

    #[test]
    fn tensor_square_of_koszul() {
        let k = kx(q());
        let t = k.tensor(&k).unwrap();
        assert_eq!(t.rank(0), 1);
        assert_eq!(t.rank(1), 2);
        assert_eq!(t.rank(2), 1);
        assert!(t.validate().is_ok());
        let h = t.homology();
        assert_eq!(h.degrees[&0].torsion, vec![x_poly(q())]);
        assert_eq!(h.degrees[&1].torsion, vec![x_poly(q())]);
        assert!(!h.degrees.contains_key(&2));
        // local Euler characteristic at 0 vanishes
        let z = PointSet::of_integers(q(), &[0]);
        assert!(t.k0_class(&z, false).unwrap().is_zero());
    }

    #[test]
    fn tensor_with_unit_is_isomorphic_copy() {
        let k = kx(q());
        let u = FreeComplex::unit(q());
        let t = k.tensor(&u).unwrap();
        assert!(t.eq_modulo_labels(&k));
    }

    #[test]
    fn tensor_with_distinct_supports_is_acyclic() {
        // x and x - 1 are comaximal, so F[x]/(x) and F[x]/(x-1) have no Tor
        // against each other and the product Koszul complex is acyclic.
        let k1 = kx(q());
        let k2 = FreeComplex::koszul(&Poly::from_integers(q(), &[-1, 1]));
        let t = k1.tensor(&k2).unwrap();
        assert!(t.homology().is_empty());
        let z = PointSet::of_integers(q(), &[0, 1]);
        assert!(t.k0_class(&z, false).unwrap().is_zero());
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let k = kx(q());
        let c = ChainMap::identity(&k).cone();
        assert!(c.validate().is_ok());
        assert!(c.homology().is_empty());
        let z = PointSet::of_integers(q(), &[0]);
        assert!(c.k0_class(&z, false).unwrap().is_zero());
    }

    #[test]
    fn shift_negates_class() {
        let k = kx(q());
        let z = PointSet::of_integers(q(), &[0]);
        let base = k.k0_class(&z, false).unwrap();
        assert_eq!(k.shift(2).k0_class(&z, false).unwrap(), base);
        assert_eq!(k.shift(1).k0_class(&z, false).unwrap(), base.neg());
    }

    #[test]
    fn cone_class_is_target_minus_source() {
        // multiplication by x on K(x) is a chain map with equal ends, so the
        // cone class must vanish
        let k = kx(q());
        let f = ChainMap::scalar_multiple(&k, &x_poly(q()));
        f.validate().unwrap();
        let cone = f.cone();
        let z = PointSet::of_integers(q(), &[0]);
        assert!(cone.k0_class(&z, false).unwrap().is_zero());
    }

    #[test]
    fn invalid_chain_map_rejected() {
        let k = kx(q());
        let mut maps = BTreeMap::new();
        maps.insert(0, PolyMatrix::from_rows(q(), vec![vec![x_poly(q())]]));
        maps.insert(1, PolyMatrix::identity(q(), 1));
        assert!(matches!(
            ChainMap::new(k.clone(), k, maps).unwrap_err(),
            Error::NotAChainMap { .. }
        ));
    }

    #[test]
    fn direct_sum_ranks_add() {
        let k = kx(q());
        let s = k.direct_sum(&k.shift(1)).unwrap();
        assert_eq!(s.rank(0), 1);
        assert_eq!(s.rank(1), 2);
        assert_eq!(s.rank(2), 1);
        let z = PointSet::of_integers(q(), &[0]);
        assert!(s.k0_class(&z, false).unwrap().is_zero());
    }

    #[test]
    fn base_change_examples() {
        let k = kx(q());
        let y2 = Poly::from_integers(q(), &[0, 0, 1]);
        let bc = k.base_change(&y2).unwrap();
        assert!(bc.eq_modulo_labels(&FreeComplex::koszul(&y2)));
        let ident = k.base_change(&x_poly(q())).unwrap();
        assert_eq!(ident, k);
        // class of K(y^2) at 0 is 2
        let z = PointSet::of_integers(q(), &[0]);
        assert_eq!(
            bc.k0_class(&z, false).unwrap(),
            K0Class::of_point(Scalar::from_integer(q(), 0), 2)
        );
    }

    #[test]
    fn support_violation_detected() {
        let k = kx(q());
        let z = PointSet::of_integers(q(), &[1]);
        assert!(matches!(
            k.k0_class(&z, false).unwrap_err(),
            Error::SupportViolation { degree: 0, .. }
        ));
        // free homology is rejected without allow_global
        let u = FreeComplex::unit(q());
        assert!(matches!(
            u.k0_class(&z, false).unwrap_err(),
            Error::SupportViolation { .. }
        ));
        assert_eq!(u.k0_class(&z, true).unwrap(), K0Class::of_global(1));
    }

    #[test]
    fn x_squared_resolution_class() {
        let k2 = FreeComplex::koszul(&Poly::from_integers(q(), &[0, 0, 1]));
        let z = PointSet::of_integers(q(), &[0]);
        assert_eq!(
            k2.k0_class(&z, false).unwrap(),
            K0Class::of_point(Scalar::from_integer(q(), 0), 2)
        );
    }

    #[test]
    fn json_round_trip_is_byte_exact() {
        let k = kx(f7());
        let s = k.to_json_string();
        assert_eq!(
            s,
            r#"{"diffs":{"1":[[[0,1]]]},"field":"Fq:7","labels":{"0":["1"],"1":["e"]},"ranks":{"0":1,"1":1}}"#
        );
        let back = FreeComplex::from_json_str(&s).unwrap();
        assert_eq!(back, k);
        assert_eq!(back.to_json_string(), s);
        // a cyclotomic complex with rational and generator-power entries
        let f = FieldDescriptor::Cyclotomic(5);
        let field = crate::field::Field::new(f).unwrap();
        let zeta = field.generator().unwrap();
        let half = Scalar::from_rational(f, 1, 2).unwrap();
        let p = Poly::new(f, vec![half, zeta]);
        let c = FreeComplex::koszul(&p);
        let s2 = c.to_json_string();
        let back2 = FreeComplex::from_json_str(&s2).unwrap();
        assert_eq!(back2, c);
        assert_eq!(back2.to_json_string(), s2);
    }

    #[test]
    fn malformed_json_rejected() {
        assert!(FreeComplex::from_json_str("{").is_err());
        // wrong differential shape
        let bad = r#"{"field":"Fq:7","ranks":{"0":1,"1":2},"diffs":{"1":[[[0,1]]]}}"#;
        assert!(matches!(
            FreeComplex::from_json_str(bad).unwrap_err(),
            Error::ParseError(_)
        ));
        // d^2 != 0
        let bad2 = r#"{"field":"Fq:7","ranks":{"0":1,"1":1,"2":1},"diffs":{"1":[[[0,1]]],"2":[[[1]]]}}"#;
        assert!(matches!(
            FreeComplex::from_json_str(bad2).unwrap_err(),
            Error::NotAComplex { degree: 2 }
        ));
    }

    // small random complexes assembled from guaranteed-valid parts
    pub(crate) fn arb_complex(field: FieldDescriptor) -> impl Strategy<Value = FreeComplex> {
        let leaf = prop_oneof![
            (0u64..3, 0u64..3).prop_map(move |(a, b)| {
                let mut p = Poly::one(field);
                for _ in 0..a {
                    p = p.mul(&Poly::from_integers(field, &[0, 1])).unwrap();
                }
                for _ in 0..b {
                    p = p.mul(&Poly::from_integers(field, &[-1, 1])).unwrap();
                }
                FreeComplex::koszul(&p)
            }),
            Just(FreeComplex::unit(field)),
        ];
        leaf.prop_recursive(2, 8, 2, move |inner| {
            prop_oneof![
                (inner.clone(), -1i64..2).prop_map(|(x, s)| x.shift(s)),
                (inner.clone(), inner.clone()).prop_map(|(x, y)| x.direct_sum(&y).unwrap()),
                inner.clone().prop_map(|x| ChainMap::identity(&x).cone()),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(120))]
        #[test]
        fn reduce_preserves_homology(x in arb_complex(FieldDescriptor::Prime(7))) {
            let r = x.reduce();
            prop_assert_eq!(r.homology(), x.homology());
        }

        #[test]
        fn sum_class_is_additive(x in arb_complex(FieldDescriptor::Prime(7)), y in arb_complex(FieldDescriptor::Prime(7))) {
            let z = PointSet::of_integers(FieldDescriptor::Prime(7), &[0, 1]);
            let sum = x.direct_sum(&y).unwrap();
            let lhs = sum.k0_class(&z, true).unwrap();
            let rhs = x.k0_class(&z, true).unwrap().add(&y.k0_class(&z, true).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn suspension_negates(x in arb_complex(FieldDescriptor::Prime(7))) {
            let z = PointSet::of_integers(FieldDescriptor::Prime(7), &[0, 1]);
            let lhs = x.shift(1).k0_class(&z, true).unwrap();
            let rhs = x.k0_class(&z, true).unwrap().neg();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn tensor_ranks_are_convolutions(x in arb_complex(FieldDescriptor::Prime(7)), y in arb_complex(FieldDescriptor::Prime(7))) {
            prop_assume!(x.total_rank() * y.total_rank() <= 64);
            let t = x.tensor(&y).unwrap();
            for d in t.degrees() {
                let expect: usize = x
                    .degrees()
                    .iter()
                    .map(|&i| x.rank(i) * y.rank(d - i))
                    .sum();
                prop_assert_eq!(t.rank(d), expect);
            }
        }

        #[test]
        fn json_roundtrip(x in arb_complex(FieldDescriptor::Prime(7))) {
            let s = x.to_json_string();
            let back = FreeComplex::from_json_str(&s).unwrap();
            prop_assert_eq!(&back, &x);
            prop_assert_eq!(back.to_json_string(), s);
        }
    }
}
