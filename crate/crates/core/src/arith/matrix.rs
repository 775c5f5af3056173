use std::fmt;

use super::ring::Ring;
use crate::error::{Error, Result};

/// Dense row-major matrix over a ring.
#[derive(Clone)]
pub struct Matrix<R: Ring> {
    ring: R,
    rows: usize,
    cols: usize,
    data: Vec<R::Elem>,
}

impl<R: Ring> PartialEq for Matrix<R> {
    fn eq(&self, o: &Self) -> bool {
        self.rows == o.rows && self.cols == o.cols && self.data == o.data
    }
}

impl<R: Ring> Eq for Matrix<R> {}

impl<R: Ring> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl<R: Ring> Matrix<R> {
    pub fn zeros(ring: &R, rows: usize, cols: usize) -> Self {
        Matrix {
            data: vec![ring.zero(); rows * cols],
            ring: ring.clone(),
            rows,
            cols,
        }
    }

    pub fn identity(ring: &R, n: usize) -> Self {
        Self::scalar(ring, n, ring.one())
    }

    pub fn scalar(ring: &R, n: usize, c: R::Elem) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_vec(ring: &R, rows: usize, cols: usize, data: Vec<R::Elem>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix {
            ring: ring.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(ring: &R, rows: usize, cols: usize, rs: Vec<Vec<R::Elem>>) -> Self {
        assert_eq!(rs.len(), rows);
        let data: Vec<_> = rs
            .into_iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols);
                r
            })
            .collect();
        Self::from_vec(ring, rows, cols, data)
    }

    pub fn from_cols(ring: &R, rows: usize, cs: &[Vec<R::Elem>]) -> Self {
        let mut m = Self::zeros(ring, rows, cs.len());
        for (j, c) in cs.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &R::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[R::Elem] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<R::Elem> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<R::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<R::Elem>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.ring.is_zero(x))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        self.ring.is_one(x)
                    } else {
                        self.ring.is_zero(x)
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let r = &self.ring;
        let mut m = Self::zeros(r, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if r.is_zero(a) {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if r.is_zero(b) {
                        continue;
                    }
                    let v = r.add(m.get(i, j), &r.mul(a, b));
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::Dimension(format!(
                "cannot compose {}x{} after {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(self.mul(o))
    }

    pub fn apply(&self, v: &[R::Elem]) -> Vec<R::Elem> {
        assert_eq!(v.len(), self.cols);
        let r = &self.ring;
        (0..self.rows)
            .map(|i| {
                let mut acc = r.zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !r.is_zero(a) && !r.is_zero(x) {
                        acc = r.add(&acc, &r.mul(a, x));
                    }
                }
                acc
            })
            .collect()
    }

    fn zip(&self, o: &Self, f: impl Fn(&R::Elem, &R::Elem) -> R::Elem) -> Self {
        assert_eq!(self.shape(), o.shape(), "matrix shapes differ");
        Matrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| self.ring.add(a, b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| self.ring.sub(a, b))
    }

    pub fn neg(&self) -> Self {
        self.map(|a| self.ring.neg(a))
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        self.map(|a| self.ring.mul(a, c))
    }

    pub fn map(&self, f: impl Fn(&R::Elem) -> R::Elem) -> Self {
        Matrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// `[self | o]`
    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows, "hstack rows");
        let mut m = Self::zeros(&self.ring, self.rows, self.cols + o.cols);
        m.put(0, 0, self);
        m.put(0, self.cols, o);
        m
    }

    /// `[self ; o]`
    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols, "vstack cols");
        let mut m = Self::zeros(&self.ring, self.rows + o.rows, self.cols);
        m.put(0, 0, self);
        m.put(self.rows, 0, o);
        m
    }

    pub fn block_diag(&self, o: &Self) -> Self {
        let mut m = Self::zeros(&self.ring, self.rows + o.rows, self.cols + o.cols);
        m.put(0, 0, self);
        m.put(self.rows, self.cols, o);
        m
    }

    /// Assemble from a grid of blocks; row heights and column widths given explicitly
    /// so that empty blocks are allowed.
    pub fn blocks(ring: &R, heights: &[usize], widths: &[usize], grid: &[&[Option<&Self>]]) -> Self {
        let mut m = Self::zeros(ring, heights.iter().sum(), widths.iter().sum());
        let mut r0 = 0;
        for (bi, row) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in row.iter().enumerate() {
                if let Some(b) = b {
                    assert_eq!(b.shape(), (heights[bi], widths[bj]), "block shape");
                    m.put(r0, c0, b);
                }
                c0 += widths[bj];
            }
            r0 += heights[bi];
        }
        m
    }

    /// Copy `b` into `self` with top-left corner at (r0, c0).
    pub fn put(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn submatrix(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> Self {
        let mut m = Self::zeros(&self.ring, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        m
    }

    pub fn select_cols(&self, js: &[usize]) -> Self {
        let cs: Vec<_> = js.iter().map(|&j| self.col(j)).collect();
        Self::from_cols(&self.ring, self.rows, &cs)
    }

    pub fn select_rows(&self, is: &[usize]) -> Self {
        let rs: Vec<_> = is.iter().map(|&i| self.row(i)).collect();
        Self::from_rows(&self.ring, is.len(), self.cols, rs)
    }

    pub fn kron(&self, o: &Self) -> Self {
        let r = &self.ring;
        let mut m = Self::zeros(r, self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if r.is_zero(a) {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        m.set(i * o.rows + k, j * o.cols + l, r.mul(a, o.get(k, l)));
                    }
                }
            }
        }
        m
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row `dst` += c * row `src`
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, c: &R::Elem) {
        for j in 0..self.cols {
            let s = self.get(src, j);
            if self.ring.is_zero(s) {
                continue;
            }
            let v = self.ring.add(self.get(dst, j), &self.ring.mul(c, s));
            self.set(dst, j, v);
        }
    }

    /// col `dst` += c * col `src`
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, c: &R::Elem) {
        for i in 0..self.rows {
            let s = self.get(i, src);
            if self.ring.is_zero(s) {
                continue;
            }
            let v = self.ring.add(self.get(i, dst), &self.ring.mul(c, s));
            self.set(i, dst, v);
        }
    }

    pub fn scale_row(&mut self, i: usize, c: &R::Elem) {
        for j in 0..self.cols {
            let v = self.ring.mul(self.get(i, j), c);
            self.set(i, j, v);
        }
    }

    /// `[a, b, ...; c, ...]` with ring-formatted entries.
    pub fn to_text(&self) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.ring.format_elem(self.get(i, j)))
                    .collect::<Vec<_>>()
                    .join(", ")
            })
            .collect();
        format!("{}x{} [{}]", self.rows, self.cols, rows.join("; "))
    }

    /// Inverse of `to_text`. Parse errors carry 1-based columns into `s`.
    pub fn from_text(ring: &R, s: &str) -> Result<Self> {
        let err = |col: usize, msg: &str| Error::parse(1, col + 1, msg);
        let open = s.find('[').ok_or_else(|| err(0, "expected `[`"))?;
        let close = s.rfind(']').filter(|&c| c > open).ok_or_else(|| err(s.len(), "expected `]`"))?;
        if !s[close + 1..].trim().is_empty() {
            return Err(err(close + 1, "unexpected trailing input"));
        }
        let shape = s[..open].trim();
        let (r, c) = shape.split_once('x').ok_or_else(|| err(0, "expected a shape `RxC`"))?;
        let rows: usize = r.trim().parse().map_err(|_| err(0, "bad row count"))?;
        let cols: usize = c.trim().parse().map_err(|_| err(0, "bad column count"))?;
        let body = &s[open + 1..close];
        if rows == 0 || cols == 0 {
            if body.chars().any(|ch| !(ch.is_whitespace() || ch == ';')) {
                return Err(err(open + 1, "entries in an empty matrix"));
            }
            return Ok(Matrix::zeros(ring, rows, cols));
        }
        let mut data = Vec::with_capacity(rows * cols);
        let mut off = open + 1;
        let lines: Vec<&str> = body.split(';').collect();
        if lines.len() != rows {
            return Err(err(open + 1, &format!("expected {rows} rows, found {}", lines.len())));
        }
        for line in lines {
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != cols {
                return Err(err(off, &format!("expected {cols} entries, found {}", cells.len())));
            }
            for cell in cells {
                let lead = cell.len() - cell.trim_start().len();
                let v = ring.parse_elem(cell.trim()).map_err(|e| match e {
                    Error::Parse { column, message, .. } => Error::parse(1, off + lead + column, message),
                    other => Error::parse(1, off + lead + 1, other.to_string()),
                })?;
                data.push(v);
                off += cell.len() + 1;
            }
        }
        Ok(Matrix::from_vec(ring, rows, cols, data))
    }

    /// Fraction-field rank by fraction-free elimination; the ring must be a domain.
    pub fn rank(&self) -> usize {
        let r = &self.ring;
        let mut a = self.data.clone();
        let (n, m) = (self.rows, self.cols);
        let mut rank = 0;
        let mut prev = r.one();
        for c in 0..m {
            let Some(p) = (rank..n).find(|&i| !r.is_zero(&a[i * m + c])) else {
                continue;
            };
            if p != rank {
                for j in 0..m {
                    a.swap(p * m + j, rank * m + j);
                }
            }
            let piv = a[rank * m + c].clone();
            for i in rank + 1..n {
                let f = a[i * m + c].clone();
                for j in c..m {
                    let v = r.sub(&r.mul(&piv, &a[i * m + j]), &r.mul(&f, &a[rank * m + j]));
                    a[i * m + j] = r.exact_div(&v, &prev).expect("Bareiss division is exact");
                }
            }
            prev = piv;
            rank += 1;
            if rank == n {
                break;
            }
        }
        rank
    }

    /// Determinant by fraction-free elimination.
    pub fn det(&self) -> R::Elem {
        assert_eq!(self.rows, self.cols);
        let r = &self.ring;
        let n = self.rows;
        let mut a = self.data.clone();
        let mut prev = r.one();
        let mut sign = false;
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !r.is_zero(&a[i * n + c])) else {
                return r.zero();
            };
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                }
                sign = !sign;
            }
            let piv = a[c * n + c].clone();
            for i in c + 1..n {
                let f = a[i * n + c].clone();
                for j in c..n {
                    let v = r.sub(&r.mul(&piv, &a[i * n + j]), &r.mul(&f, &a[c * n + j]));
                    a[i * n + j] = r.exact_div(&v, &prev).expect("Bareiss division is exact");
                }
            }
            prev = piv;
        }
        let d = if n == 0 { r.one() } else { a[n * n - 1].clone() };
        if sign {
            r.neg(&d)
        } else {
            d
        }
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn text_round_trip() {
        use crate::arith::Integers;
        let m = Matrix::from_vec(&Integers, 2, 2, [1, -2, 0, 7].iter().map(|&a| a.into()).collect());
        assert_eq!(Matrix::from_text(&Integers, &m.to_text()).unwrap(), m);
        let e = Matrix::<Integers>::zeros(&Integers, 2, 0);
        assert_eq!(Matrix::from_text(&Integers, &e.to_text()).unwrap(), e);
        match Matrix::from_text(&Integers, "1x2 [1, q]") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 9),
            other => panic!("{other:?}"),
        }
        assert!(Matrix::from_text(&Integers, "2x2 [1, 2]").is_err());
    }

    use super::*;
    use crate::arith::ring::Integers;
    use num_bigint::BigInt;

    fn z(rows: usize, cols: usize, v: &[i64]) -> Matrix<Integers> {
        Matrix::from_vec(&Integers, rows, cols, v.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn product_and_blocks() {
        let a = z(2, 2, &[1, 2, 3, 4]);
        let b = z(2, 1, &[1, -1]);
        assert_eq!(a.mul(&b), z(2, 1, &[-1, -1]));
        assert_eq!(a.hstack(&b).shape(), (2, 3));
        assert_eq!(a.block_diag(&b).get(2, 2), &BigInt::from(1));
    }

    #[test]
    fn rank_and_det() {
        let a = z(3, 3, &[2, 4, 6, 1, 2, 3, 0, 1, 5]);
        assert_eq!(a.rank(), 2);
        assert_eq!(a.det(), BigInt::from(0));
        let b = z(3, 3, &[2, 0, 1, 1, 3, 2, 1, 1, 2]);
        assert_eq!(b.det(), BigInt::from(6));
        assert_eq!(b.rank(), 3);
    }
}
