//! The category `Mat_S`: objects are natural numbers, a morphism `n → m` is an
//! `m × n` matrix. Composition is matrix product, the monoidal product is the
//! Kronecker product (strict: `n ⊗ m = n·m`), and `n ⊕ m = n + m` is a
//! dagger biproduct.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalars::{Ring, RingKind, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatError {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: String, right: String },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("malformed matrix literal: {0}")]
    Malformed(String),
}

/// A dense row-major matrix over an exact ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(ring: Ring, rows: usize, cols: usize) -> Self {
        Matrix { ring, rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: Ring, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = ring.one();
        }
        m
    }

    pub fn diagonal(ring: Ring, entries: &[Scalar]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(ring, n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    /// The scalar `s` as a `1 × 1` matrix, i.e. a morphism `I → I`.
    pub fn scalar(ring: Ring, s: Scalar) -> Self {
        Matrix { ring, rows: 1, cols: 1, data: vec![s] }
    }

    pub fn from_entries(ring: Ring, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self, MatError> {
        if data.len() != rows * cols {
            return Err(MatError::DimMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        for s in &data {
            ring.check(s)?;
        }
        Ok(Matrix { ring, rows, cols, data })
    }

    pub fn from_strs(ring: Ring, rows: usize, cols: usize, entries: &[&str]) -> Result<Self, MatError> {
        let data = entries.iter().map(|s| ring.parse_scalar(s)).collect::<Result<Vec<_>, _>>()?;
        Self::from_entries(ring, rows, cols, data)
    }

    /// The permutation morphism `n → n` sending basis vector `j` to `perm[j]`.
    pub fn permutation(ring: Ring, perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(ring, n, n);
        for (j, &i) in perm.iter().enumerate() {
            m.data[i * n + j] = ring.one();
        }
        m
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, s: Scalar) {
        debug_assert!(self.ring.contains(&s));
        self.data[i * self.cols + j] = s;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    fn same_ring(&self, other: &Matrix) -> Result<(), MatError> {
        if self.ring != other.ring {
            return Err(MatError::RingMismatch { left: self.ring.to_string(), right: other.ring.to_string() });
        }
        Ok(())
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Matrix) -> Result<Matrix, MatError> {
        self.same_ring(other)?;
        if self.cols != other.rows {
            return Err(MatError::DimMismatch(format!(
                "cannot compose {}x{} after {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.ring, self.rows, other.cols);
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
                    let idx = i * other.cols + j;
                    out.data[idx] = out.data[idx].add_raw(&a.mul_raw(b));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, MatError> {
        self.same_ring(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatError::DimMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.add_raw(b)).collect();
        Ok(Matrix { data, ..self.clone() })
    }

    /// Conjugate transpose with respect to the ring's involution.
    pub fn dagger(&self) -> Matrix {
        let mut out = Matrix::zeros(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.ring.involute_raw(self.get(i, j));
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        out
    }

    /// Entrywise image under the ring involution (no transpose).
    pub fn conjugate(&self) -> Matrix {
        self.map_entries(|s| self.ring.involute_raw(s))
    }

    pub fn map_entries(&self, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
        Matrix { ring: self.ring, rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Entrywise map into another ring.
    pub fn map_into(&self, ring: Ring, f: impl Fn(&Scalar) -> Scalar) -> Result<Matrix, MatError> {
        Matrix::from_entries(ring, self.rows, self.cols, self.data.iter().map(f).collect())
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        self.map_entries(|x| s.mul_raw(x))
    }

    pub fn kron(&self, other: &Matrix) -> Result<Matrix, MatError> {
        self.same_ring(other)?;
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Matrix::zeros(self.ring, rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.data[(i * other.rows + k) * cols + j * other.cols + l] = a.mul_raw(other.get(k, l));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Block diagonal `diag(self, other)`, the biproduct of morphisms.
    pub fn direct_sum(&self, other: &Matrix) -> Result<Matrix, MatError> {
        self.same_ring(other)?;
        let mut out = Matrix::zeros(self.ring, self.rows + other.rows, self.cols + other.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, self.cols, other);
        Ok(out)
    }

    /// Overwrites the block starting at `(r0, c0)` with `block`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = block.get(i, j).clone();
            }
        }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut out = Matrix::zeros(self.ring, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.data[i * cols + j] = self.get(r0 + i, c0 + j).clone();
            }
        }
        out
    }

    /// Horizontal concatenation `[a | b | …]`; all blocks share the row count.
    pub fn hstack(ring: Ring, rows: usize, blocks: &[Matrix]) -> Result<Matrix, MatError> {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(ring, rows, cols);
        let mut c0 = 0;
        for b in blocks {
            if b.rows != rows || b.ring != ring {
                return Err(MatError::DimMismatch(format!("block {}x{} in a {rows}-row stack", b.rows, b.cols)));
            }
            out.paste(0, c0, b);
            c0 += b.cols;
        }
        Ok(out)
    }

    /// Vertical concatenation; all blocks share the column count.
    pub fn vstack(ring: Ring, cols: usize, blocks: &[Matrix]) -> Result<Matrix, MatError> {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = Matrix::zeros(ring, rows, cols);
        let mut r0 = 0;
        for b in blocks {
            if b.cols != cols || b.ring != ring {
                return Err(MatError::DimMismatch(format!("block {}x{} in a {cols}-column stack", b.rows, b.cols)));
            }
            out.paste(r0, 0, b);
            r0 += b.rows;
        }
        Ok(out)
    }

    /// Two-sided inverse, if one exists over the matrix's ring.
    pub fn inverse(&self) -> Result<Matrix, MatError> {
        if !self.is_square() {
            return Err(MatError::NotSquare { rows: self.rows, cols: self.cols });
        }
        if self.ring.kind() == RingKind::Integer {
            // invert over Q and keep the result only if it is integral
            let q = Ring::gaussian_trivial();
            let lifted = self.map_into(q, |s| match s {
                Scalar::Integer(n) => q.gaussian_from(n.clone().into(), num_traits::Zero::zero()),
                _ => unreachable!("integer matrix"),
            })?;
            let inv = lifted.inverse()?;
            let mut data = Vec::with_capacity(inv.data.len());
            for s in &inv.data {
                let (re, _) = s.as_gaussian().expect("gaussian");
                if !re.is_integer() {
                    return Err(MatError::Singular);
                }
                data.push(Scalar::Integer(re.to_integer()));
            }
            return Matrix::from_entries(self.ring, self.rows, self.cols, data);
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(self.ring, n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero()).ok_or(MatError::Singular)?;
            a.swap_rows(pivot, col);
            inv.swap_rows(pivot, col);
            let p_inv = a.get(col, col).inv_raw().ok_or(MatError::Singular)?;
            a.scale_row(col, &p_inv);
            inv.scale_row(col, &p_inv);
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).neg_raw();
                a.add_row_multiple(r, col, &factor);
                inv.add_row_multiple(r, col, &factor);
            }
        }
        Ok(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.inverse().is_ok()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, s: &Scalar) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            self.data[idx] = s.mul_raw(&self.data[idx]);
        }
    }

    /// row[target] += factor · row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &Scalar) {
        for j in 0..self.cols {
            let v = factor.mul_raw(&self.data[source * self.cols + j]);
            let idx = target * self.cols + j;
            self.data[idx] = self.data[idx].add_raw(&v);
        }
    }

    /// Index of the first nonzero entry in row-major order.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.data.iter().position(|s| !s.is_zero())
    }

    /// `Some(s)` when `self = s · other` for a single scalar `s` (with `other ≠ 0`).
    pub fn scalar_ratio(&self, other: &Matrix) -> Option<Scalar> {
        if self.rows != other.rows || self.cols != other.cols || self.ring != other.ring {
            return None;
        }
        let k = other.first_nonzero()?;
        let s = self.data[k].mul_raw(&other.data[k].inv_raw()?);
        (other.scale(&s) == *self).then_some(s)
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            ring: self.ring.to_string(),
            entries: self.data.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn from_json(json: &MatrixJson) -> Result<Matrix, MatError> {
        let ring: Ring = json.ring.parse()?;
        let refs: Vec<&str> = json.entries.iter().map(String::as_str).collect();
        Matrix::from_strs(ring, json.rows, json.cols, &refs)
    }
}

/// Serialized matrix: dims, ring descriptor and row-major scalar literals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub ring: String,
    pub entries: Vec<String>,
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let json = MatrixJson::deserialize(deserializer)?;
        Matrix::from_json(&json).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "] ({}x{} over {})", self.rows, self.cols, self.ring)
    }
}

/// Coprojections `κ_i : d_i → Σ d` of the standard n-ary biproduct.
pub fn coprojections(ring: Ring, dims: &[usize]) -> Vec<Matrix> {
    let total: usize = dims.iter().sum();
    let mut offset = 0;
    dims.iter()
        .map(|&d| {
            let mut k = Matrix::zeros(ring, total, d);
            for j in 0..d {
                k.set(offset + j, j, ring.one());
            }
            offset += d;
            k
        })
        .collect()
}

/// Standard biproduct `n ⊕ m = n + m` with block inclusions and projections.
#[derive(Debug, Clone, PartialEq)]
pub struct BiproductStructure {
    pub n: usize,
    pub m: usize,
    pub apex: usize,
    pub coprojections: [Matrix; 2],
    pub projections: [Matrix; 2],
}

pub fn biproduct(ring: Ring, n: usize, m: usize) -> BiproductStructure {
    let ks = coprojections(ring, &[n, m]);
    let projections = [ks[0].transpose(), ks[1].transpose()];
    BiproductStructure { n, m, apex: n + m, coprojections: [ks[0].clone(), ks[1].clone()], projections }
}

impl BiproductStructure {
    pub fn zero(&self, ring: Ring, from: usize, to: usize) -> Matrix {
        Matrix::zeros(ring, to, from)
    }

    /// The four biproduct equations `π_i ∘ κ_j = δ_ij`.
    pub fn verify(&self) -> Result<bool, MatError> {
        for i in 0..2 {
            for j in 0..2 {
                let c = self.projections[i].compose(&self.coprojections[j])?;
                let ok = if i == j { c.is_identity() } else { c.is_zero() };
                if !ok {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Cup `η : 1 → n·n` and cap `ε : n·n → 1` exhibiting `n` as self-dual.
#[derive(Debug, Clone, PartialEq)]
pub struct CompactStructure {
    pub n: usize,
    pub cup: Matrix,
    pub cap: Matrix,
}

pub fn compact(ring: Ring, n: usize) -> CompactStructure {
    let mut cup = Matrix::zeros(ring, n * n, 1);
    for i in 0..n {
        cup.set(i * n + i, 0, ring.one());
    }
    let cap = cup.dagger();
    let c = CompactStructure { n, cup, cap };
    debug_assert!(c.snakes_hold().unwrap_or(false));
    c
}

impl CompactStructure {
    /// `(ε ⊗ id) ∘ (id ⊗ η)`.
    pub fn snake_left(&self) -> Result<Matrix, MatError> {
        let ring = self.cup.ring();
        let id = Matrix::identity(ring, self.n);
        self.cap.kron(&id)?.compose(&id.kron(&self.cup)?)
    }

    /// `(id ⊗ ε) ∘ (η ⊗ id)`.
    pub fn snake_right(&self) -> Result<Matrix, MatError> {
        let ring = self.cup.ring();
        let id = Matrix::identity(ring, self.n);
        id.kron(&self.cap)?.compose(&self.cup.kron(&id)?)
    }

    pub fn snakes_hold(&self) -> Result<bool, MatError> {
        Ok(self.snake_left()?.is_identity() && self.snake_right()?.is_identity())
    }
}

/// The symmetry `σ : n ⊗ m → m ⊗ n`, sending `e_i ⊗ e_j` to `e_j ⊗ e_i`.
pub fn braiding(ring: Ring, n: usize, m: usize) -> Matrix {
    let perm: Vec<usize> = (0..n * m).map(|idx| (idx % m) * n + idx / m).collect();
    Matrix::permutation(ring, &perm)
}

/// The canonical map `a⊗b ⊕ a⊗c → a⊗(b⊕c)` given by `[id_a ⊗ κ_b | id_a ⊗ κ_c]`.
pub fn distributivity_iso(ring: Ring, a: usize, b: usize, c: usize) -> Matrix {
    let ks = coprojections(ring, &[b, c]);
    let id = Matrix::identity(ring, a);
    let left = id.kron(&ks[0]).expect("same ring");
    let right = id.kron(&ks[1]).expect("same ring");
    Matrix::hstack(ring, a * (b + c), &[left, right]).expect("matching rows")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gi() -> Ring {
        Ring::gaussian()
    }

    fn m(rows: usize, cols: usize, e: &[&str]) -> Matrix {
        Matrix::from_strs(gi(), rows, cols, e).unwrap()
    }

    #[test]
    fn dagger_conjugates() {
        assert_eq!(m(1, 1, &["i"]).dagger(), m(1, 1, &["-i"]));
        let t = Ring::gaussian_trivial();
        let d = Matrix::from_strs(t, 1, 1, &["i"]).unwrap();
        assert_eq!(d.dagger(), d);
    }

    #[test]
    fn trivial_involution_makes_i_self_adjoint() {
        // diag(1, i) is not unitary when i† = i: i·i = -1
        let t = Ring::gaussian_trivial();
        let d = Matrix::from_strs(t, 2, 2, &["1", "0", "0", "i"]).unwrap();
        let dd = d.dagger().compose(&d).unwrap();
        assert_eq!(dd, Matrix::from_strs(t, 2, 2, &["1", "0", "0", "-1"]).unwrap());
        let c = Matrix::from_strs(gi(), 2, 2, &["1", "0", "0", "i"]).unwrap();
        assert!(c.dagger().compose(&c).unwrap().is_identity());
    }

    #[test]
    fn kron_of_identities() {
        let id2 = Matrix::identity(gi(), 2);
        let id3 = Matrix::identity(gi(), 3);
        assert_eq!(id2.kron(&id3).unwrap(), Matrix::identity(gi(), 6));
    }

    #[test]
    fn compose_checks_dims() {
        let a = Matrix::zeros(gi(), 2, 3);
        assert!(matches!(a.compose(&a), Err(MatError::DimMismatch(_))));
        let f3 = Matrix::identity(Ring::prime_field(3).unwrap(), 3);
        assert!(matches!(a.compose(&f3), Err(MatError::RingMismatch { .. })));
    }

    #[test]
    fn biproduct_blocks() {
        let b = biproduct(gi(), 1, 1);
        assert_eq!(b.coprojections[0], m(2, 1, &["1", "0"]));
        assert_eq!(b.coprojections[1], m(2, 1, &["0", "1"]));
        let b0 = biproduct(gi(), 0, 3);
        assert!(b0.coprojections[1].is_identity());
        let b23 = biproduct(gi(), 2, 3);
        assert!(b23.projections[0].compose(&b23.coprojections[1]).unwrap().is_zero());
        assert!(b23.verify().unwrap());
    }

    #[test]
    fn snakes() {
        let c1 = compact(gi(), 1);
        assert_eq!(c1.cup, m(1, 1, &["1"]));
        let c2 = compact(gi(), 2);
        assert!(c2.snake_left().unwrap().is_identity());
        assert!(c2.snake_right().unwrap().is_identity());
    }

    #[test]
    fn braiding_is_involutive() {
        let s = braiding(gi(), 2, 2);
        assert!(s.compose(&s).unwrap().is_identity());
        let s23 = braiding(gi(), 2, 3);
        let s32 = braiding(gi(), 3, 2);
        assert!(s32.compose(&s23).unwrap().is_identity());
    }

    #[test]
    fn braiding_swaps_tensor_factors() {
        let r = gi();
        let f = m(2, 1, &["1", "2"]);
        let g = m(3, 1, &["3", "i", "0"]);
        let s = braiding(r, 2, 3);
        assert_eq!(s.compose(&f.kron(&g).unwrap()).unwrap(), g.kron(&f).unwrap());
    }

    #[test]
    fn distributivity_examples() {
        assert!(distributivity_iso(gi(), 1, 2, 3).is_identity());
        // perfect shuffle: columns (a0b, a1b, a0c, a1c) -> rows a0b,a0c,a1b,a1c
        let d = distributivity_iso(gi(), 2, 1, 1);
        assert_eq!(d, Matrix::permutation(gi(), &[0, 2, 1, 3]));
        let inv = d.inverse().unwrap();
        assert!(d.compose(&inv).unwrap().is_identity());
    }

    #[test]
    fn inverse_over_fields_and_integers() {
        let a = m(2, 2, &["1", "i", "2", "3"]);
        let ai = a.inverse().unwrap();
        assert!(a.compose(&ai).unwrap().is_identity());
        assert!(matches!(m(2, 2, &["1", "2", "2", "4"]).inverse(), Err(MatError::Singular)));
        let z = Ring::integers();
        let u = Matrix::from_strs(z, 2, 2, &["1", "1", "0", "1"]).unwrap();
        assert_eq!(u.inverse().unwrap(), Matrix::from_strs(z, 2, 2, &["1", "-1", "0", "1"]).unwrap());
        let two = Matrix::from_strs(z, 1, 1, &["2"]).unwrap();
        assert!(matches!(two.inverse(), Err(MatError::Singular)));
    }

    #[test]
    fn json_roundtrip() {
        let a = m(2, 2, &["1/2", "-i", "0", "3+4i"]);
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.contains("\"entries\":[\"1/2\",\"-i\",\"0\",\"3+4i\"]"));
        let b: Matrix = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }
}
