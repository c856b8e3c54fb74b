use super::payload::Payload;
use super::{Ring, RingElem};
use crate::error::{Error, Result};

/// Dense matrix over a [`Ring`], stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Payload>,
}

impl Matrix {
    pub fn zero(ring: Ring, rows: usize, cols: usize) -> Matrix {
        let data = vec![ring.zero_p(); rows * cols];
        Matrix {
            ring,
            rows,
            cols,
            data,
        }
    }

    pub fn identity(ring: Ring, n: usize) -> Matrix {
        let mut m = Matrix::zero(ring.clone(), n, n);
        for i in 0..n {
            m.data[i * n + i] = ring.one_p();
        }
        m
    }

    pub fn from_rows(ring: Ring, rows: Vec<Vec<RingElem>>) -> Matrix {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols, "ragged rows");
            for e in row {
                assert_eq!(e.ring(), &ring, "entry from the wrong ring");
                data.push(e.payload().clone());
            }
        }
        Matrix {
            ring,
            rows: nrows,
            cols: ncols,
            data,
        }
    }

    pub(crate) fn from_payload_rows(ring: Ring, ncols: usize, rows: Vec<Vec<Payload>>) -> Matrix {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols);
            data.extend(row);
        }
        Matrix {
            ring,
            rows: nrows,
            cols: ncols,
            data,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> RingElem {
        RingElem::from_payload(self.ring.clone(), self.data[i * self.cols + j].clone())
    }

    pub fn set(&mut self, i: usize, j: usize, e: RingElem) {
        assert_eq!(e.ring(), &self.ring);
        self.data[i * self.cols + j] = e.payload().clone();
    }

    pub(crate) fn at(&self, i: usize, j: usize) -> &Payload {
        &self.data[i * self.cols + j]
    }

    pub(crate) fn set_p(&mut self, i: usize, j: usize, p: Payload) {
        self.data[i * self.cols + j] = p;
    }

    pub(crate) fn row_payloads(&self, i: usize) -> &[Payload] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.ring, other.ring);
        let r = &self.ring;
        let mut out = Matrix::zero(r.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if r.is_zero_p(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let t = r.mul_p(a, other.at(k, j));
                    let s = r.add_p(out.at(i, j), &t);
                    out.set_p(i, j, s);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let r = &self.ring;
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| r.add_p(a, b))
            .collect();
        Matrix {
            ring: r.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: &RingElem) -> Matrix {
        assert_eq!(c.ring(), &self.ring);
        let r = &self.ring;
        let data = self.data.iter().map(|a| r.mul_p(a, c.payload())).collect();
        Matrix {
            ring: r.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn trace(&self) -> RingElem {
        assert_eq!(self.rows, self.cols);
        let r = &self.ring;
        let mut acc = r.zero_p();
        for i in 0..self.rows {
            acc = r.add_p(&acc, self.at(i, i));
        }
        RingElem::from_payload(r.clone(), acc)
    }

    /// Map every entry through `f` into a matrix over `target`.
    pub fn map<F>(&self, target: Ring, f: F) -> Matrix
    where
        F: Fn(&RingElem) -> RingElem,
    {
        let mut rows = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let row = (0..self.cols)
                .map(|j| f(&self.get(i, j)))
                .collect::<Vec<_>>();
            rows.push(row);
        }
        Matrix::from_rows(target, rows)
    }
}

/// Coefficients `[1, c_1, …, c_n]` of `det(λI − M) = λ^n + c_1 λ^{n-1} + … + c_n`,
/// by the Berkowitz recurrence. Division-free, so it works over non-domains
/// like `Z/9` and over polynomial rings.
pub(crate) fn berkowitz_charpoly(m: &Matrix) -> Vec<Payload> {
    let r = m.ring().clone();
    let n = m.nrows();
    assert_eq!(n, m.ncols());
    let mut coeffs: Vec<Payload> = vec![r.one_p()];
    for k in 1..=n {
        // first column of the (k+1)×k Toeplitz factor:
        // [1, −a_kk, −(R·C), −(R·M·C), …] with M the leading (k−1) block,
        // R the k-th row prefix, C the k-th column prefix.
        let mut first = Vec::with_capacity(k + 1);
        first.push(r.one_p());
        first.push(r.neg_p(m.at(k - 1, k - 1)));
        if k >= 2 {
            let mut w: Vec<Payload> = (0..k - 1).map(|i| m.at(i, k - 1).clone()).collect();
            for _ in 0..k - 1 {
                let mut dot = r.zero_p();
                for (j, wj) in w.iter().enumerate() {
                    let t = r.mul_p(m.at(k - 1, j), wj);
                    dot = r.add_p(&dot, &t);
                }
                first.push(r.neg_p(&dot));
                let mut next = vec![r.zero_p(); k - 1];
                for (i, slot) in next.iter_mut().enumerate() {
                    let mut acc = r.zero_p();
                    for (j, wj) in w.iter().enumerate() {
                        let t = r.mul_p(m.at(i, j), wj);
                        acc = r.add_p(&acc, &t);
                    }
                    *slot = acc;
                }
                w = next;
            }
        }
        let mut next = vec![r.zero_p(); k + 1];
        for (i, c) in coeffs.iter().enumerate() {
            for (d, f) in first.iter().enumerate() {
                if i + d <= k {
                    let t = r.mul_p(f, c);
                    next[i + d] = r.add_p(&next[i + d], &t);
                }
            }
        }
        coeffs = next;
    }
    coeffs
}

/// Determinant by a division-free algorithm; no inversion in the ring is
/// required.
pub fn determinant(m: &Matrix) -> Result<RingElem> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!(
            "determinant of a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    let r = m.ring().clone();
    if m.nrows() == 0 {
        return Ok(r.one());
    }
    let coeffs = berkowitz_charpoly(m);
    // det(λI−M) at λ=0 is (−1)^n det(M)
    let cn = coeffs.last().unwrap().clone();
    let det = if m.nrows() % 2 == 0 { cn } else { r.neg_p(&cn) };
    Ok(RingElem::from_payload(r, det))
}
