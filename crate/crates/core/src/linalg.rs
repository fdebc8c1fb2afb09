//! Sparse exact linear algebra over prime fields.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};

/// A prime field F_p with small p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp(u32);

impl Fp {
    pub fn new(p: u32) -> Result<Fp> {
        if p < 2 || p > 65521 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(Error::Invalid(format!("{p} is not a supported prime")));
        }
        Ok(Fp(p))
    }

    pub fn p(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.0
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        (a + self.0 - b) % self.0
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        (self.0 - a) % self.0
    }

    pub fn inv(self, a: u32) -> u32 {
        assert!(a % self.0 != 0, "inverse of zero");
        let mut r = 1u64;
        let mut b = a as u64;
        let mut e = self.0 - 2;
        let p = self.0 as u64;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r as u32
    }

    /// Reduce a signed integer into the field.
    pub fn from_i64(self, v: i64) -> u32 {
        v.rem_euclid(self.0 as i64) as u32
    }
}

/// Sparse vector: strictly increasing indices, nonzero entries.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec(pub Vec<(u32, u32)>);

impl SparseVec {
    pub fn zero() -> Self {
        SparseVec(Vec::new())
    }

    pub fn unit(i: usize) -> Self {
        SparseVec(vec![(i as u32, 1)])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<(u32, u32)> {
        self.0.last().copied()
    }

    pub fn get(&self, i: usize) -> u32 {
        match self.0.binary_search_by_key(&(i as u32), |e| e.0) {
            Ok(k) => self.0[k].1,
            Err(_) => 0,
        }
    }

    pub fn from_dense(f: Fp, v: &[u32]) -> Self {
        SparseVec(
            v.iter()
                .enumerate()
                .filter_map(|(i, &x)| {
                    let x = x % f.p();
                    (x != 0).then_some((i as u32, x))
                })
                .collect(),
        )
    }

    pub fn to_dense(&self, n: usize) -> Vec<u32> {
        let mut out = vec![0; n];
        for &(i, x) in &self.0 {
            out[i as usize] = x;
        }
        out
    }

    pub fn scale(&self, f: Fp, c: u32) -> SparseVec {
        if c % f.p() == 0 {
            return SparseVec::zero();
        }
        SparseVec(self.0.iter().map(|&(i, x)| (i, f.mul(x, c))).collect())
    }

    /// self + c * other
    pub fn axpy(&self, f: Fp, c: u32, other: &SparseVec) -> SparseVec {
        let c = c % f.p();
        if c == 0 {
            return self.clone();
        }
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, f.mul(c, b[j].1)));
                j += 1;
            } else {
                let v = f.add(a[i].1, f.mul(c, b[j].1));
                if v != 0 {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec(out)
    }

    /// Shift every index by `off`.
    pub fn shifted(&self, off: usize) -> SparseVec {
        SparseVec(self.0.iter().map(|&(i, x)| (i + off as u32, x)).collect())
    }
}

/// Column-major sparse matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<SparseVec>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![SparseVec::zero(); cols] }
    }

    pub fn identity(n: usize) -> Mat {
        Mat { rows: n, cols: n, data: (0..n).map(SparseVec::unit).collect() }
    }

    pub fn from_cols(rows: usize, data: Vec<SparseVec>) -> Mat {
        debug_assert!(data.iter().all(|c| c.last().map_or(true, |(i, _)| (i as usize) < rows)));
        Mat { rows, cols: data.len(), data }
    }

    /// Build from row-major dense entries.
    pub fn from_row_major(f: Fp, rows: usize, cols: usize, entries: &[i64]) -> Result<Mat> {
        if entries.len() != rows * cols {
            return Err(Error::Invalid(format!(
                "matrix payload has {} entries, expected {}x{}",
                entries.len(),
                rows,
                cols
            )));
        }
        let mut data = vec![Vec::new(); cols];
        for r in 0..rows {
            for (c, col) in data.iter_mut().enumerate() {
                let v = f.from_i64(entries[r * cols + c]);
                if v != 0 {
                    col.push((r as u32, v));
                }
            }
        }
        Ok(Mat { rows, cols, data: data.into_iter().map(SparseVec).collect() })
    }

    pub fn to_row_major(&self) -> Vec<u32> {
        let mut out = vec![0; self.rows * self.cols];
        for (c, col) in self.data.iter().enumerate() {
            for &(r, v) in &col.0 {
                out[r as usize * self.cols + c] = v;
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn apply(&self, f: Fp, v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<u32, u32> = BTreeMap::new();
        for &(k, x) in &v.0 {
            for &(r, y) in &self.data[k as usize].0 {
                let e = acc.entry(r).or_insert(0);
                *e = f.add(*e, f.mul(x, y));
            }
        }
        SparseVec(acc.into_iter().filter(|e| e.1 != 0).collect())
    }

    /// self * other
    pub fn mul(&self, f: Fp, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        Mat {
            rows: self.rows,
            cols: other.cols,
            data: other.data.iter().map(|c| self.apply(f, c)).collect(),
        }
    }

    pub fn add(&self, f: Fp, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.axpy(f, 1, b)).collect(),
        }
    }

    pub fn scale(&self, f: Fp, c: u32) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v.scale(f, c)).collect() }
    }

    pub fn transpose(&self) -> Mat {
        let mut data = vec![Vec::new(); self.rows];
        for (c, col) in self.data.iter().enumerate() {
            for &(r, v) in &col.0 {
                data[r as usize].push((c as u32, v));
            }
        }
        Mat { rows: self.cols, cols: self.rows, data: data.into_iter().map(SparseVec).collect() }
    }

    pub fn rank(&self, f: Fp) -> usize {
        let mut red = Reducer::new(f, false);
        self.data.iter().filter(|c| red.insert(c, None).is_some()).count()
    }

    /// Basis of the null space.
    pub fn kernel(&self, f: Fp) -> Vec<SparseVec> {
        let mut red = Reducer::new(f, true);
        let mut out = Vec::new();
        for (j, c) in self.data.iter().enumerate() {
            if let Err(tag) = red.insert_tracked(c, SparseVec::unit(j)) {
                out.push(tag);
            }
        }
        out
    }

    pub fn is_invertible(&self, f: Fp) -> bool {
        self.rows == self.cols && self.rank(f) == self.rows
    }

    pub fn inverse(&self, f: Fp) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let mut red = Reducer::new(f, true);
        for (j, c) in self.data.iter().enumerate() {
            if red.insert_tracked(c, SparseVec::unit(j)).is_err() {
                return None;
            }
        }
        let data = (0..self.rows).map(|i| red.solve(&SparseVec::unit(i)).expect("full rank")).collect();
        Some(Mat { rows: self.rows, cols: self.cols, data })
    }

    /// Block diagonal sum.
    pub fn block_diag(blocks: &[&Mat]) -> Mat {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut data = Vec::new();
        let mut off = 0;
        for b in blocks {
            data.extend(b.data.iter().map(|c| c.shifted(off)));
            off += b.rows;
        }
        Mat::from_cols(rows, data)
    }
}

/// Incremental echelon basis; the pivot of a stored row is its largest index.
///
/// With tracking on, every stored row carries a tag vector and the invariant
/// `row = A * tag` holds for whatever linear map A the caller has in mind.
#[derive(Clone, Debug)]
pub struct Reducer {
    f: Fp,
    track: bool,
    pivot_of: HashMap<u32, usize>,
    rows: Vec<SparseVec>,
    tags: Vec<SparseVec>,
}

type Acc = BTreeMap<u32, u32>;

fn acc_sub(f: Fp, acc: &mut Acc, c: u32, v: &SparseVec) {
    for &(i, x) in &v.0 {
        let e = acc.entry(i).or_insert(0);
        *e = f.sub(*e, f.mul(c, x));
        if *e == 0 {
            acc.remove(&i);
        }
    }
}

fn to_acc(v: &SparseVec) -> Acc {
    v.0.iter().copied().collect()
}

fn from_acc(a: Acc) -> SparseVec {
    SparseVec(a.into_iter().collect())
}

impl Reducer {
    pub fn new(f: Fp, track: bool) -> Reducer {
        Reducer { f, track, pivot_of: HashMap::new(), rows: Vec::new(), tags: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn field(&self) -> Fp {
        self.f
    }

    pub fn has_pivot(&self, i: usize) -> bool {
        self.pivot_of.contains_key(&(i as u32))
    }

    fn reduce_inner(&self, v: &SparseVec, tag: Option<&SparseVec>, full: bool) -> (Acc, Acc) {
        let mut acc = to_acc(v);
        let mut tacc = tag.map(to_acc).unwrap_or_default();
        let mut cursor: Option<u32> = None;
        loop {
            let next = match cursor {
                None => acc.iter().next_back().map(|(&k, &x)| (k, x)),
                Some(c) => acc.range(..c).next_back().map(|(&k, &x)| (k, x)),
            };
            let Some((k, x)) = next else { break };
            match self.pivot_of.get(&k) {
                Some(&r) => {
                    acc_sub(self.f, &mut acc, x, &self.rows[r]);
                    if self.track {
                        acc_sub(self.f, &mut tacc, x, &self.tags[r]);
                    }
                }
                None => {
                    if !full {
                        break;
                    }
                }
            }
            cursor = Some(k);
        }
        (acc, tacc)
    }

    /// Eliminate every pivot index from `v`.
    pub fn reduce_full(&self, v: &SparseVec) -> SparseVec {
        from_acc(self.reduce_inner(v, None, true).0)
    }

    /// Insert a vector; returns the new row index if it was independent.
    pub fn insert(&mut self, v: &SparseVec, tag: Option<SparseVec>) -> Option<usize> {
        match tag {
            Some(t) => self.insert_tracked(v, t).ok(),
            None => {
                let (acc, _) = self.reduce_inner(v, None, false);
                if acc.is_empty() {
                    return None;
                }
                Some(self.push(from_acc(acc), SparseVec::zero()))
            }
        }
    }

    /// Insert with a tag; on dependence returns the reduced tag (a relation).
    pub fn insert_tracked(&mut self, v: &SparseVec, tag: SparseVec) -> std::result::Result<usize, SparseVec> {
        let (acc, tacc) = self.reduce_inner(v, Some(&tag), false);
        if acc.is_empty() {
            return Err(from_acc(tacc));
        }
        Ok(self.push(from_acc(acc), from_acc(tacc)))
    }

    fn push(&mut self, row: SparseVec, tag: SparseVec) -> usize {
        let (p, lead) = row.last().expect("nonzero row");
        let inv = self.f.inv(lead);
        let row = row.scale(self.f, inv);
        let tag = tag.scale(self.f, inv);
        let idx = self.rows.len();
        self.pivot_of.insert(p, idx);
        self.rows.push(row);
        self.tags.push(tag);
        idx
    }

    /// Express `v` as a combination of the inserted vectors (by their tags).
    pub fn solve(&self, v: &SparseVec) -> Option<SparseVec> {
        let (acc, tacc) = self.reduce_inner(v, Some(&SparseVec::zero()), false);
        if !acc.is_empty() {
            return None;
        }
        Some(from_acc(tacc).scale(self.f, self.f.neg(1)))
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce_inner(v, None, false).0.is_empty()
    }
}
