//! Dense matrices over F_q, sized for the d x d and d^2 x d^2 systems that
//! show up in block inversion, difference sets and interpolation.

use crate::base_ring::Modulus;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FqMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Row-major construction; panics if `data.len() != rows * cols`.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<u64>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.data
    }

    pub fn mul(&self, other: &Self, zq: &Modulus) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = zq.add(out[(i, j)], zq.mul(a, other[(k, j)]));
                    out[(i, j)] = v;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64], zq: &Modulus) -> Vec<u64> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| zq.add(acc, zq.mul(a, b)))
            })
            .collect()
    }

    pub fn add(&self, other: &Self, zq: &Modulus) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| zq.add(a, b))
            .collect();
        Self::from_rows(self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &Self, zq: &Modulus) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| zq.sub(a, b))
            .collect();
        Self::from_rows(self.rows, self.cols, data)
    }

    pub fn scale(&self, c: u64, zq: &Modulus) -> Self {
        let data = self.data.iter().map(|&a| zq.mul(a, c)).collect();
        Self::from_rows(self.rows, self.cols, data)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn rank(&self, zq: &Modulus) -> usize {
        let mut m = self.clone();
        m.row_reduce(zq, None)
    }

    pub fn is_invertible(&self, zq: &Modulus) -> bool {
        self.rows == self.cols && self.rank(zq) == self.rows
    }

    /// Gauss-Jordan inverse; `None` when singular or non-square.
    pub fn inverse(&self, zq: &Modulus) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let mut m = self.clone();
        let mut inv = Self::identity(self.rows);
        (m.row_reduce(zq, Some(&mut inv)) == self.rows).then_some(inv)
    }

    /// Solves `self * x = b` for square nonsingular `self`.
    pub fn solve(&self, b: &[u64], zq: &Modulus) -> Option<Vec<u64>> {
        if self.rows != self.cols || b.len() != self.rows {
            return None;
        }
        let mut m = self.clone();
        let mut rhs = Self::from_rows(b.len(), 1, b.to_vec());
        (m.row_reduce(zq, Some(&mut rhs)) == self.rows).then_some(rhs.data)
    }

    /// Reduces `self` to reduced row echelon form, applying the same row
    /// operations to `companion`. Returns the rank.
    fn row_reduce(&mut self, zq: &Modulus, mut companion: Option<&mut Self>) -> usize {
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            let Some(p) = (pivot_row..self.rows).find(|&r| self[(r, col)] != 0) else {
                continue;
            };
            self.swap_rows(p, pivot_row);
            if let Some(c) = companion.as_deref_mut() {
                c.swap_rows(p, pivot_row);
            }
            let inv = zq.inv(self[(pivot_row, col)]).expect("nonzero pivot");
            self.scale_row(pivot_row, inv, zq);
            if let Some(c) = companion.as_deref_mut() {
                c.scale_row(pivot_row, inv, zq);
            }
            for r in 0..self.rows {
                if r == pivot_row {
                    continue;
                }
                let f = self[(r, col)];
                if f != 0 {
                    self.axpy_row(r, pivot_row, f, zq);
                    if let Some(c) = companion.as_deref_mut() {
                        c.axpy_row(r, pivot_row, f, zq);
                    }
                }
            }
            pivot_row += 1;
        }
        pivot_row
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn scale_row(&mut self, r: usize, c: u64, zq: &Modulus) {
        for v in &mut self.data[r * self.cols..(r + 1) * self.cols] {
            *v = zq.mul(*v, c);
        }
    }

    /// row[dst] -= f * row[src]
    fn axpy_row(&mut self, dst: usize, src: usize, f: u64, zq: &Modulus) {
        for j in 0..self.cols {
            let s = zq.mul(f, self.data[src * self.cols + j]);
            let d = &mut self.data[dst * self.cols + j];
            *d = zq.sub(*d, s);
        }
    }
}

impl std::ops::Index<(usize, usize)> for FqMatrix {
    type Output = u64;

    fn index(&self, (r, c): (usize, usize)) -> &u64 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for FqMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut u64 {
        &mut self.data[r * self.cols + c]
    }
}
