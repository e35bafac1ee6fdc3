//! Exact linear algebra over the rationals and prime fields.
//!
//! Everything in the crate bottoms out here: Hom spaces, sections, kernels and
//! cokernels of sheaf morphisms are all computed by row reduction of dense
//! matrices with exact entries. There is no floating point anywhere.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The base field `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    /// The prime field with `p` elements, `p < 2^31`.
    Prime(u32),
}

impl Field {
    /// Builds `F_p`, checking that `p` is a prime below `2^31`.
    pub fn prime(p: u64) -> Result<Field> {
        if p >= 1 << 31 {
            return Err(Error::InvalidField(format!("{p} is not below 2^31")));
        }
        if p < 2 || (2..).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(Field::Prime(p as u32))
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Fp(n.rem_euclid(p as i64) as u32, p),
        }
    }

    /// `num / den`; panics if `den` vanishes in the field.
    pub fn ratio(self, num: i64, den: i64) -> Scalar {
        self.from_i64(num).mul(&self.from_i64(den).inv())
    }

    pub fn contains(self, s: &Scalar) -> bool {
        s.field() == self
    }

    pub fn characteristic(self) -> u32 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => p,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "q"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    /// `(value, p)` with `value < p`.
    Fp(u32, u32),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rationals,
            Scalar::Fp(_, p) => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp(v, _) => *v == 1,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp(a, p), Scalar::Fp(b, q)) if p == q => {
                Scalar::Fp(((*a as u64 + *b as u64) % *p as u64) as u32, *p)
            }
            _ => panic!("mixed-field arithmetic: {self:?} + {other:?}"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp(a, p) => Scalar::Fp((*p - *a) % *p, *p),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp(a, p), Scalar::Fp(b, q)) if p == q => {
                Scalar::Fp(((*a as u64 * *b as u64) % *p as u64) as u32, *p)
            }
            _ => panic!("mixed-field arithmetic: {self:?} * {other:?}"),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Scalar::Q(a) => Scalar::Q(a.recip()),
            Scalar::Fp(a, p) => {
                // Fermat: a^(p-2)
                let (mut base, mut exp, mut acc) = (*a as u64, *p as u64 - 2, 1u64);
                let m = *p as u64;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % m;
                    }
                    base = base * base % m;
                    exp >>= 1;
                }
                Scalar::Fp(acc as u32, *p)
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Fp(v, _) => write!(f, "{v}"),
        }
    }
}

impl Scalar {
    /// Parses the [`fmt::Display`] form back into `field`.
    pub fn parse(field: Field, text: &str) -> Result<Scalar> {
        let bad = || Error::InvalidField(format!("cannot parse scalar `{text}` in {field}"));
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text.trim(), "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        match field {
            Field::Rationals => Ok(Scalar::Q(BigRational::new(num, den))),
            Field::Prime(p) => {
                let m = BigInt::from(p);
                let reduce = |x: &BigInt| -> u32 {
                    let r = ((x % &m) + &m) % &m;
                    r.to_string().parse().unwrap()
                };
                let d = Scalar::Fp(reduce(&den), p);
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Scalar::Fp(reduce(&num), p).mul(&d.inv()))
            }
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Q(q) if q.is_negative())
    }
}

/// A linear map `k^domain_dim -> k^codomain_dim` stored as a dense row-major
/// matrix with `codomain_dim` rows and `domain_dim` columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearMap {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl LinearMap {
    pub fn zero(field: Field, domain_dim: usize, codomain_dim: usize) -> LinearMap {
        LinearMap {
            field,
            rows: codomain_dim,
            cols: domain_dim,
            data: vec![field.zero(); domain_dim * codomain_dim],
        }
    }

    pub fn identity(field: Field, n: usize) -> LinearMap {
        let mut m = LinearMap::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a map from integer rows (each row has `domain_dim` entries).
    pub fn from_rows(field: Field, domain_dim: usize, rows: &[Vec<i64>]) -> Result<LinearMap> {
        let mut m = LinearMap::zero(field, domain_dim, rows.len());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != domain_dim {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {domain_dim}",
                    row.len()
                )));
            }
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, field.from_i64(*v));
            }
        }
        Ok(m)
    }

    pub fn from_scalar_rows(
        field: Field,
        domain_dim: usize,
        rows: Vec<Vec<Scalar>>,
    ) -> Result<LinearMap> {
        let mut m = LinearMap::zero(field, domain_dim, rows.len());
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != domain_dim {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has wrong length"
                )));
            }
            for (j, v) in row.into_iter().enumerate() {
                if !field.contains(&v) {
                    return Err(Error::FieldMismatch(format!("entry {v} not in {field}")));
                }
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    /// The map whose columns are the given vectors of length `codomain_dim`.
    pub fn from_columns(field: Field, codomain_dim: usize, cols: &[Vec<Scalar>]) -> LinearMap {
        let mut m = LinearMap::zero(field, cols.len(), codomain_dim);
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), codomain_dim, "column length");
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn domain_dim(&self) -> usize {
        self.cols
    }

    pub fn codomain_dim(&self) -> usize {
        self.rows
    }

    pub fn get(&self, row: usize, col: usize) -> &Scalar {
        &self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Scalar) {
        self.data[row * self.cols + col] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                acc
            })
            .collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap> {
        if self.cols != inner.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {}x{} after {}x{}",
                self.rows, self.cols, inner.rows, inner.cols
            )));
        }
        if self.field != inner.field {
            return Err(Error::FieldMismatch("compose".into()));
        }
        let mut out = LinearMap::zero(self.field, inner.cols, self.rows);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..inner.cols {
                    let b = inner.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).add(&a.mul(b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &LinearMap) -> Result<LinearMap> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("add".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.add(b))
            .collect();
        Ok(LinearMap {
            data,
            ..self.clone()
        })
    }

    pub fn scale(&self, s: &Scalar) -> LinearMap {
        LinearMap {
            data: self.data.iter().map(|a| a.mul(s)).collect(),
            ..self.clone()
        }
    }

    pub fn neg(&self) -> LinearMap {
        LinearMap {
            data: self.data.iter().map(Scalar::neg).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &LinearMap) -> Result<LinearMap> {
        self.add(&other.neg())
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &LinearMap) -> LinearMap {
        let mut out = LinearMap::zero(self.field, self.cols + other.cols, self.rows + other.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`; basis `e_i ⊗ f_j` has index `i * dim(other) + j`.
    pub fn tensor(&self, other: &LinearMap) -> LinearMap {
        let mut out = LinearMap::zero(self.field, self.cols * other.cols, self.rows * other.rows);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        out.set(
                            i1 * other.rows + i2,
                            j1 * other.cols + j2,
                            a.mul(other.get(i2, j2)),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> LinearMap {
        let mut out = LinearMap::zero(self.field, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Stacks `self` on top of `below` (same domain).
    pub fn vstack(&self, below: &LinearMap) -> Result<LinearMap> {
        if self.cols != below.cols {
            return Err(Error::DimensionMismatch("vstack".into()));
        }
        let mut data = self.data.clone();
        data.extend(below.data.iter().cloned());
        Ok(LinearMap {
            field: self.field,
            rows: self.rows + below.rows,
            cols: self.cols,
            data,
        })
    }

    /// Places `self` left of `right` (same codomain).
    pub fn hstack(&self, right: &LinearMap) -> Result<LinearMap> {
        if self.rows != right.rows {
            return Err(Error::DimensionMismatch("hstack".into()));
        }
        let mut out = LinearMap::zero(self.field, self.cols + right.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..right.cols {
                out.set(i, self.cols + j, right.get(i, j).clone());
            }
        }
        Ok(out)
    }

    /// Rows `start..end` of the matrix.
    pub fn row_block(&self, start: usize, end: usize) -> LinearMap {
        LinearMap {
            field: self.field,
            rows: end - start,
            cols: self.cols,
            data: self.data[start * self.cols..end * self.cols].to_vec(),
        }
    }

    /// Columns `start..end` of the matrix.
    pub fn col_block(&self, start: usize, end: usize) -> LinearMap {
        let mut out = LinearMap::zero(self.field, end - start, self.rows);
        for i in 0..self.rows {
            for j in start..end {
                out.set(i, j - start, self.get(i, j).clone());
            }
        }
        out
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (LinearMap, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv();
            for j in c..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let rj = m.get(r, j);
                    if !rj.is_zero() {
                        let v = m.get(i, j).sub(&factor.mul(rj));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.rows
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.is_injective()
    }

    /// Inverse of a square invertible map.
    pub fn inverse(&self) -> Option<LinearMap> {
        if !self.is_invertible() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&LinearMap::identity(self.field, n)).ok()?;
        let (r, _) = aug.rref();
        Some(r.col_block(n, 2 * n))
    }

    /// Exact null space.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = r.get(i, free).neg();
            }
            basis.push(v);
        }
        Subspace::span(self.field, self.cols, basis)
    }

    /// Column space.
    pub fn image(&self) -> Subspace {
        Subspace::span(
            self.field,
            self.rows,
            (0..self.cols).map(|j| self.column(j)).collect(),
        )
    }

    /// Canonical projection onto a complement of the image, and the cokernel
    /// dimension. The complement is spanned by the standard basis vectors at
    /// the non-pivot coordinates of the reduced image basis.
    pub fn cokernel(&self) -> (LinearMap, usize) {
        let img = self.image();
        let proj = img.quotient_projection();
        let d = proj.codomain_dim();
        (proj, d)
    }

    /// Some `v` with `self(v) = b`, if one exists.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let col = LinearMap::from_columns(self.field, self.rows, &[b.to_vec()]);
        let aug = self.hstack(&col).ok()?;
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut v = vec![self.field.zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = r.get(i, self.cols).clone();
        }
        Some(v)
    }

    /// Solves `self ∘ X = rhs` for a matrix `X`, column by column.
    pub fn solve_matrix(&self, rhs: &LinearMap) -> Option<LinearMap> {
        let cols: Option<Vec<_>> = (0..rhs.cols).map(|j| self.solve(&rhs.column(j))).collect();
        Some(LinearMap::from_columns(self.field, self.cols, &cols?))
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }
}

/// A subspace of `k^ambient_dim` with its canonical basis: the nonzero rows of
/// the reduced row echelon form, each with leading entry 1. Equal subspaces
/// have identical representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace {
            field,
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace::span(
            field,
            ambient,
            (0..ambient)
                .map(|i| {
                    let mut v = vec![field.zero(); ambient];
                    v[i] = field.one();
                    v
                })
                .collect(),
        )
    }

    pub fn span(field: Field, ambient: usize, vectors: Vec<Vec<Scalar>>) -> Subspace {
        if vectors.is_empty() {
            return Subspace::zero(field, ambient);
        }
        let rows = LinearMap::from_scalar_rows(field, ambient, vectors).expect("vector length");
        let (r, pivots) = rows.rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace {
            field,
            ambient,
            basis,
            pivots,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    /// Inclusion `k^dim -> k^ambient` whose columns are the basis vectors.
    pub fn inclusion(&self) -> LinearMap {
        LinearMap::from_columns(self.field, self.ambient, &self.basis)
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` is not in
    /// the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let coords: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let back = self.inclusion().apply(&coords);
        (back.as_slice() == v).then_some(coords)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::span(self.field, self.ambient, vs)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // x = A a = B b  <=>  [A | -B] (a, b) = 0
        let a = self.inclusion();
        let b = other.inclusion();
        let joint = a.hstack(&b.neg()).expect("same ambient");
        let ker = joint.kernel();
        let vs = ker
            .basis
            .iter()
            .map(|ab| a.apply(&ab[..self.dim()]))
            .collect();
        Subspace::span(self.field, self.ambient, vs)
    }

    /// Projection `k^ambient -> k^(ambient - dim)` with kernel exactly this
    /// subspace: subtract the basis combination that clears the pivot
    /// coordinates, then read off the remaining coordinates.
    pub fn quotient_projection(&self) -> LinearMap {
        let free: Vec<usize> = (0..self.ambient)
            .filter(|c| !self.pivots.contains(c))
            .collect();
        let mut q = LinearMap::zero(self.field, self.ambient, free.len());
        for (row, &f) in free.iter().enumerate() {
            q.set(row, f, self.field.one());
            for (i, &p) in self.pivots.iter().enumerate() {
                q.set(row, p, self.basis[i][f].neg());
            }
        }
        q
    }

    /// Image of the subspace under `f`.
    pub fn map(&self, f: &LinearMap) -> Subspace {
        Subspace::span(
            self.field,
            f.codomain_dim(),
            self.basis.iter().map(|v| f.apply(v)).collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: Field = Field::Rationals;

    fn m(rows: &[Vec<i64>], cols: usize) -> LinearMap {
        LinearMap::from_rows(Q, cols, rows).unwrap()
    }

    #[test]
    fn kernel_of_identity_is_zero() {
        assert_eq!(LinearMap::identity(Q, 2).kernel().dim(), 0);
    }

    #[test]
    fn kernel_of_zero_map_is_everything() {
        let z = LinearMap::zero(Q, 3, 1);
        assert_eq!(z.kernel(), Subspace::full(Q, 3));
    }

    #[test]
    fn kernel_of_rank_one_matrix() {
        let f = m(&[vec![1, 2], vec![2, 4]], 2);
        let k = f.kernel();
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&[Q.from_i64(2), Q.from_i64(-1)]));
        // canonical: leading 1
        assert_eq!(k.basis()[0], vec![Q.from_i64(1), Q.ratio(-1, 2)]);
    }

    #[test]
    fn cokernel_dimensions() {
        assert_eq!(LinearMap::identity(Q, 3).cokernel().1, 0);
        assert_eq!(LinearMap::zero(Q, 1, 3).cokernel().1, 3);
        let diag = m(&[vec![1], vec![1]], 1);
        let (p, d) = diag.cokernel();
        assert_eq!(d, 1);
        assert!(p.compose(&diag).unwrap().is_zero());
        assert!(p.is_surjective());
    }

    #[test]
    fn solve_examples() {
        let id = LinearMap::identity(Q, 2);
        assert_eq!(
            id.solve(&[Q.one(), Q.zero()]),
            Some(vec![Q.one(), Q.zero()])
        );
        let z = LinearMap::zero(Q, 2, 2);
        assert_eq!(z.solve(&[Q.one(), Q.zero()]), None);
        let f5 = Field::prime(5).unwrap();
        let two = LinearMap::from_rows(f5, 1, &[vec![2]]).unwrap();
        assert_eq!(two.solve(&[f5.from_i64(3)]), Some(vec![f5.from_i64(4)]));
    }

    #[test]
    fn compose_sum_tensor() {
        let f = m(&[vec![1, 2], vec![3, 4]], 2);
        assert_eq!(LinearMap::identity(Q, 2).compose(&f).unwrap(), f);
        assert!(LinearMap::identity(Q, 2)
            .tensor(&LinearMap::identity(Q, 3))
            .is_identity());
        let s = f.direct_sum(&m(&[vec![5]], 1));
        assert_eq!(s, m(&[vec![1, 2, 0], vec![3, 4, 0], vec![0, 0, 5]], 3));
        assert!(f.compose(&LinearMap::identity(Q, 3)).is_err());
    }

    #[test]
    fn prime_field_validation() {
        assert!(Field::prime(4).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(1 << 31).is_err());
        assert_eq!(Field::prime(2147483647).unwrap(), Field::Prime(2147483647));
    }

    #[test]
    fn scalar_parse_round_trip() {
        let x = Q.ratio(-3, 7);
        assert_eq!(Scalar::parse(Q, &x.to_string()).unwrap(), x);
        let f7 = Field::Prime(7);
        assert_eq!(Scalar::parse(f7, "1/3").unwrap(), f7.from_i64(5));
    }

    fn arb_map(field: Field) -> impl Strategy<Value = LinearMap> {
        (0usize..5, 0usize..5).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(-3i64..4, r * c).prop_map(move |vals| {
                let rows: Vec<Vec<i64>> = vals
                    .chunks(c.max(1))
                    .take(r)
                    .map(|ch| ch.to_vec())
                    .collect();
                let rows = if c == 0 { vec![vec![]; r] } else { rows };
                LinearMap::from_rows(field, c, &rows).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(f in arb_map(Q)) {
            prop_assert_eq!(f.kernel().dim() + f.rank(), f.domain_dim());
        }

        #[test]
        fn rank_nullity_f5(f in arb_map(Field::Prime(5))) {
            prop_assert_eq!(f.kernel().dim() + f.rank(), f.domain_dim());
        }

        #[test]
        fn cokernel_kills_image(f in arb_map(Q)) {
            let (p, d) = f.cokernel();
            prop_assert_eq!(d, f.codomain_dim() - f.rank());
            prop_assert!(p.compose(&f).unwrap().is_zero());
            prop_assert!(p.is_surjective());
        }

        #[test]
        fn solve_agrees_with_cokernel(f in arb_map(Q), seed in proptest::collection::vec(-2i64..3, 5)) {
            let b: Vec<Scalar> = (0..f.codomain_dim()).map(|i| Q.from_i64(seed[i])).collect();
            let (p, _) = f.cokernel();
            let in_image = p.apply(&b).iter().all(Scalar::is_zero);
            match f.solve(&b) {
                Some(v) => { prop_assert!(in_image); prop_assert_eq!(f.apply(&v), b); }
                None => prop_assert!(!in_image),
            }
        }

        #[test]
        fn canonical_forms_are_deterministic(f in arb_map(Q)) {
            prop_assert_eq!(format!("{:?}", f.kernel()), format!("{:?}", f.clone().kernel()));
            let img = f.image();
            // same subspace from a permuted spanning set
            let mut cols: Vec<_> = (0..f.domain_dim()).map(|j| f.column(j)).collect();
            cols.reverse();
            prop_assert_eq!(img, Subspace::span(Q, f.codomain_dim(), cols));
        }
    }
}
