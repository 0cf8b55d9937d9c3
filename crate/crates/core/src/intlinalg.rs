//! Sparse exact integer linear algebra: Hermite normal form, kernels, membership.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type SparseVec = BTreeMap<usize, BigInt>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix { rows, cols, data: vec![SparseVec::new(); rows] }
    }

    pub fn from_dense<T: Into<BigInt> + Clone>(cols: usize, rows: &[Vec<T>]) -> IntMatrix {
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (c, v) in row.iter().enumerate() {
                m.set(r, c, v.clone().into());
            }
        }
        m
    }

    pub fn from_sparse_rows(cols: usize, rows: Vec<SparseVec>) -> IntMatrix {
        for row in &rows {
            assert!(row.keys().all(|&c| c < cols), "column index out of range");
            assert!(row.values().all(|v| !v.is_zero()), "stored zero entry");
        }
        IntMatrix { rows: rows.len(), cols, data: rows }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        if v.is_zero() {
            self.data[r].remove(&c);
        } else {
            self.data[r].insert(c, v);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        self.data[r].get(&c).cloned().unwrap_or_default()
    }

    pub fn row(&self, r: usize) -> &SparseVec {
        &self.data[r]
    }

    pub fn sparse_rows(&self) -> &[SparseVec] {
        &self.data
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    /// The product x * m of a row vector with the matrix.
    pub fn left_mul(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, got: x.len() });
        }
        let mut out = vec![BigInt::zero(); self.cols];
        for (r, xr) in x.iter().enumerate() {
            if xr.is_zero() {
                continue;
            }
            for (&c, v) in &self.data[r] {
                out[c] += xr * v;
            }
        }
        Ok(out)
    }
}

/// A sublattice of Z^dim given by rows in Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    dim: usize,
    rows: Vec<SparseVec>,
}

impl LatticeBasis {
    pub fn zero(dim: usize) -> LatticeBasis {
        LatticeBasis { dim, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn dense_rows(&self) -> Vec<Vec<BigInt>> {
        self.rows.iter().map(|r| to_dense(r, self.dim)).collect()
    }

    pub fn pivots(&self) -> Vec<(usize, BigInt)> {
        self.rows
            .iter()
            .map(|r| {
                let (&c, v) = r.iter().next().expect("empty basis row");
                (c, v.clone())
            })
            .collect()
    }

    pub fn to_matrix(&self) -> IntMatrix {
        IntMatrix::from_sparse_rows(self.dim, self.rows.clone())
    }

    pub fn contains_sparse(&self, v: &SparseVec) -> bool {
        let mut v = v.clone();
        for row in &self.rows {
            let (&c, p) = row.iter().next().expect("empty basis row");
            let x = match v.get(&c) {
                Some(x) => x.clone(),
                None => continue,
            };
            let (q, r) = x.div_rem(p);
            if !r.is_zero() {
                return false;
            }
            sub_scaled(&mut v, &q, row);
        }
        v.is_empty()
    }
}

pub fn to_dense(v: &SparseVec, dim: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); dim];
    for (&c, x) in v {
        out[c] = x.clone();
    }
    out
}

pub fn to_sparse(v: &[BigInt]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

/// r -= q * p
fn sub_scaled(r: &mut SparseVec, q: &BigInt, p: &SparseVec) {
    if q.is_zero() {
        return;
    }
    for (&c, v) in p {
        let e = r.entry(c).or_default();
        *e -= q * v;
        if e.is_zero() {
            r.remove(&c);
        }
    }
}

fn lead(r: &SparseVec) -> Option<(usize, &BigInt)> {
    r.iter().next().map(|(&c, v)| (c, v))
}

/// Row echelon form by unimodular row operations. Pivots are chosen by lowest
/// column, then smallest absolute value, then original position.
fn echelon(rows: Vec<SparseVec>) -> Vec<SparseVec> {
    let mut buckets: BTreeMap<usize, Vec<SparseVec>> = BTreeMap::new();
    for r in rows {
        if let Some((c, _)) = lead(&r) {
            buckets.entry(c).or_default().push(r);
        }
    }
    let mut out = Vec::new();
    while let Some((c, mut group)) = buckets.pop_first() {
        loop {
            let p = (0..group.len())
                .min_by(|&i, &j| {
                    let x = group[i][&c].abs();
                    let y = group[j][&c].abs();
                    x.cmp(&y).then(i.cmp(&j))
                })
                .expect("nonempty pivot group");
            let pivot = group.remove(p);
            let pv = pivot[&c].clone();
            let mut rest = Vec::new();
            for mut r in group.drain(..) {
                let q = &r[&c] / &pv;
                sub_scaled(&mut r, &q, &pivot);
                match lead(&r) {
                    Some((c2, _)) if c2 == c => rest.push(r),
                    Some((c2, _)) => buckets.entry(c2).or_default().push(r),
                    None => {}
                }
            }
            if rest.is_empty() {
                let pivot = if pv.is_negative() {
                    pivot.into_iter().map(|(k, v)| (k, -v)).collect()
                } else {
                    pivot
                };
                out.push(pivot);
                break;
            }
            rest.push(pivot);
            group = rest;
        }
    }
    out
}

fn reduce_above_pivots(rows: &mut [SparseVec]) {
    for i in 0..rows.len() {
        let (head, tail) = rows.split_at_mut(i);
        let pr = &tail[0];
        let (c, pv) = lead(pr).expect("empty echelon row");
        for r in head.iter_mut() {
            if let Some(x) = r.get(&c) {
                let q = x.div_floor(pv);
                sub_scaled(r, &q, pr);
            }
        }
    }
}

fn hnf_rows(dim: usize, rows: Vec<SparseVec>) -> LatticeBasis {
    let mut e = echelon(rows);
    reduce_above_pivots(&mut e);
    LatticeBasis { dim, rows: e }
}

/// Row-style Hermite normal form of the row lattice of `m`.
pub fn hnf(m: &IntMatrix) -> LatticeBasis {
    hnf_rows(m.cols, m.data.clone())
}

/// HNF of the lattice spanned by the given sparse vectors in Z^dim.
pub fn hnf_of(dim: usize, rows: impl IntoIterator<Item = SparseVec>) -> LatticeBasis {
    let rows: Vec<SparseVec> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    for r in &rows {
        assert!(r.keys().all(|&c| c < dim), "vector outside ambient dimension");
    }
    hnf_rows(dim, rows)
}

pub fn lattice_member(b: &LatticeBasis, v: &[BigInt]) -> Result<bool> {
    if v.len() != b.dim {
        return Err(Error::DimensionMismatch { expected: b.dim, got: v.len() });
    }
    Ok(b.contains_sparse(&to_sparse(v)))
}

/// The saturated lattice {x in Z^rows : x m = 0}.
pub fn kernel_lattice(m: &IntMatrix) -> LatticeBasis {
    let cols = m.cols;
    let aug: Vec<SparseVec> = m
        .data
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.insert(cols + i, BigInt::one());
            row
        })
        .collect();
    let kernel = echelon(aug)
        .into_iter()
        .filter(|r| lead(r).is_some_and(|(c, _)| c >= cols))
        .map(|r| r.into_iter().map(|(c, v)| (c - cols, v)).collect::<SparseVec>());
    hnf_of(m.rows, kernel)
}

/// Rank over Q by plain fraction-based Gaussian elimination.
pub fn rational_rank(m: &IntMatrix) -> usize {
    let mut rows: Vec<BTreeMap<usize, BigRational>> = m
        .data
        .iter()
        .map(|r| r.iter().map(|(&c, v)| (c, BigRational::from_integer(v.clone()))).collect())
        .collect();
    let mut rank = 0;
    for col in 0..m.cols {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i].contains_key(&col)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        let pv = pivot[&col].clone();
        for r in rows.iter_mut().skip(rank + 1) {
            if let Some(x) = r.get(&col).cloned() {
                let f = x / &pv;
                for (&c, v) in &pivot {
                    let e = r.entry(c).or_insert_with(BigRational::zero);
                    *e -= &f * v;
                    if e.is_zero() {
                        r.remove(&c);
                    }
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank modulo a prime `p`. Never exceeds the rank over Q, so a full modular
/// rank certifies full rational rank.
pub fn rank_mod_p(m: &IntMatrix, p: u64) -> usize {
    let pb = BigInt::from(p);
    let red = |v: &BigInt| -> u64 {
        let r = v.mod_floor(&pb);
        r.to_u64_digits().1.first().copied().unwrap_or(0)
    };
    let mut rows: Vec<BTreeMap<usize, u64>> = m
        .data
        .iter()
        .map(|r| {
            r.iter()
                .map(|(&c, v)| (c, red(v)))
                .filter(|(_, v)| *v != 0)
                .collect()
        })
        .collect();
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let inv = |a: u64| {
        let (mut r, mut base, mut e) = (1u64, a, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, base);
            }
            base = mulmod(base, base);
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for col in 0..m.cols {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i].contains_key(&col)) else {
            continue;
        };
        rows.swap(rank, piv);
        let pivot = rows[rank].clone();
        let pinv = inv(pivot[&col]);
        for r in rows.iter_mut().skip(rank + 1) {
            if let Some(&x) = r.get(&col) {
                let f = mulmod(x, pinv);
                for (&c, &v) in &pivot {
                    let e = r.entry(c).or_insert(0);
                    *e = (*e + p - mulmod(f, v)) % p;
                    if *e == 0 {
                        r.remove(&c);
                    }
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hnf_two_by_two() {
        let m = IntMatrix::from_dense(2, &[vec![2, 4], vec![0, 3]]);
        assert_eq!(hnf(&m).dense_rows(), vec![bi(&[2, 1]), bi(&[0, 3])]);
    }

    #[test]
    fn hnf_identity_and_zero() {
        let id = IntMatrix::from_dense(3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(hnf(&id).to_matrix(), id);
        assert_eq!(hnf(&IntMatrix::zeros(3, 2)).rank(), 0);
    }

    #[test]
    fn membership() {
        let b = hnf(&IntMatrix::from_dense(2, &[vec![2, 0], vec![0, 1]]));
        assert!(lattice_member(&b, &bi(&[4, 3])).unwrap());
        assert!(!lattice_member(&b, &bi(&[1, 0])).unwrap());
        assert!(lattice_member(&b, &bi(&[1])).is_err());
    }

    #[test]
    fn small_kernels() {
        let k = kernel_lattice(&IntMatrix::from_dense(1, &[vec![1], vec![-1]]));
        assert_eq!(k.dense_rows(), vec![bi(&[1, 1])]);
        assert_eq!(kernel_lattice(&IntMatrix::from_dense(1, &[vec![2]])).rank(), 0);
        // saturation: 2x - 4y = 0 has kernel generated by (2, 1)
        let k = kernel_lattice(&IntMatrix::from_dense(1, &[vec![2], vec![-4]]));
        assert_eq!(k.dense_rows(), vec![bi(&[2, 1])]);
    }

    #[test]
    fn ranks_agree() {
        let m = IntMatrix::from_dense(3, &[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(rational_rank(&m), 2);
        assert_eq!(rank_mod_p(&m, 1_000_000_007), 2);
    }
}
