//! Dense matrices over a finite field.

use crate::fields::FieldDesc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: FieldDesc,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(field: &FieldDesc, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(field: &FieldDesc, cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row {i} has the wrong length");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows);
        let k = &self.field;
        let mut out = Self::zeros(k, self.rows, o.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let v = k.add(out.get(i, j), k.mul(a, o.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let k = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..m.cols {
                    m.data.swap(piv * m.cols + j, r * m.cols + j);
                }
            }
            let inv = k.inv(m.get(r, c)).unwrap();
            for j in c..m.cols {
                let v = k.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                let f = m.get(i, c);
                if i == r || f == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = k.sub(m.get(i, j), k.mul(f, m.get(r, j)));
                    m.set(i, j, v);
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

    /// Basis of `{v : M v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let k = &self.field;
        let (r, pivots) = self.rref();
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = k.neg(r.get(i, free));
            }
            out.push(v);
        }
        out
    }

    /// Basis of `{w : w M = 0}`.
    pub fn left_kernel(&self) -> Vec<Vec<u32>> {
        self.transpose().kernel()
    }

    /// Basis of the row space (nonzero rows of the echelon form).
    pub fn row_space(&self) -> Vec<Vec<u32>> {
        let (r, pivots) = self.rref();
        (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
    }
}

/// Whether two families of vectors of length `n` span the same subspace.
pub fn same_span(field: &FieldDesc, n: usize, a: &[Vec<u32>], b: &[Vec<u32>]) -> bool {
    let ra = Matrix::from_rows(field, n, a).rank();
    let rb = Matrix::from_rows(field, n, b).rank();
    let both: Vec<Vec<u32>> = a.iter().chain(b).cloned().collect();
    ra == rb && Matrix::from_rows(field, n, &both).rank() == ra
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::field_make;

    #[test]
    fn kernel_is_annihilated() {
        let k = field_make(5, 1).unwrap();
        let m = Matrix::from_rows(&k, 4, &[vec![1, 2, 3, 4], vec![2, 4, 1, 3], vec![3, 1, 4, 2]]);
        let ker = m.kernel();
        assert_eq!(m.rank() + ker.len(), 4);
        for v in &ker {
            let col = Matrix::from_rows(&k, 1, &v.iter().map(|&x| vec![x]).collect::<Vec<_>>());
            assert!(m.mul(&col).data.iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn span_equality() {
        let k = field_make(3, 1).unwrap();
        let a = vec![vec![1, 0, 1], vec![0, 1, 1]];
        let b = vec![vec![1, 1, 2], vec![1, 2, 0]];
        assert!(same_span(&k, 3, &a, &b));
        assert!(!same_span(&k, 3, &a, &[vec![1, 0, 0]]));
    }
}
