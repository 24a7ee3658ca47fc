//! Symmetric sparse matrices in compressed-row form.

use std::fmt::Write as _;

/// Symmetric matrix storing both triangles in CSR form.
///
/// Built from element contributions; every contribution is mirrored, so
/// symmetry is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseSymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            row_ptr: vec![0; n + 1],
            cols: Vec::new(),
            vals: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            row_ptr: (0..=n).collect(),
            cols: (0..n).collect(),
            vals: vec![1.0; n],
        }
    }

    /// Sums symmetric element blocks `(dofs, local matrix)` in the given order.
    ///
    /// Only the upper triangle of each local block is read; the sum order of
    /// duplicate entries follows the input order, so the result is deterministic.
    pub fn from_blocks<const K: usize>(n: usize, blocks: &[([usize; K], [[f64; K]; K])]) -> Self {
        let mut triplets: Vec<(usize, usize, f64)> = Vec::with_capacity(blocks.len() * K * K);
        for (dofs, m) in blocks {
            for a in 0..K {
                for b in a..K {
                    let v = m[a][b];
                    let (i, j) = (dofs[a], dofs[b]);
                    triplets.push((i, j, v));
                    if i != j {
                        triplets.push((j, i, v));
                    }
                }
            }
        }
        Self::from_triplets(n, triplets)
    }

    fn from_triplets(n: usize, mut t: Vec<(usize, usize, f64)>) -> Self {
        // stable sort keeps the summation order of duplicates
        t.sort_by_key(|&(i, j, _)| (i, j));
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::with_capacity(t.len());
        let mut vals: Vec<f64> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in t {
            assert!(i < n && j < n, "entry ({i}, {j}) outside dimension {n}");
            if last == Some((i, j)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(j);
                vals.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self {
            n,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[r.clone()].binary_search(&j) {
            Ok(k) => self.vals[r.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.matvec_into(x, &mut y);
        y
    }

    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).map(|(j, v)| v * x[j]).sum();
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut m = self.clone();
        m.vals.iter_mut().for_each(|v| *v *= c);
        m
    }

    /// `self + other`, merging sparsity patterns.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut row_ptr = vec![0usize; self.n + 1];
        let mut cols = Vec::with_capacity(self.nnz().max(other.nnz()));
        let mut vals = Vec::with_capacity(cols.capacity());
        for i in 0..self.n {
            let mut a = self.row(i).peekable();
            let mut b = other.row(i).peekable();
            loop {
                let next = match (a.peek(), b.peek()) {
                    (Some(&(ja, va)), Some(&(jb, vb))) => {
                        if ja == jb {
                            a.next();
                            b.next();
                            (ja, va + vb)
                        } else if ja < jb {
                            a.next();
                            (ja, va)
                        } else {
                            b.next();
                            (jb, vb)
                        }
                    }
                    (Some(&e), None) => {
                        a.next();
                        e
                    }
                    (None, Some(&e)) => {
                        b.next();
                        e
                    }
                    (None, None) => break,
                };
                cols.push(next.0);
                vals.push(next.1);
            }
            row_ptr[i + 1] = cols.len();
        }
        Self {
            n: self.n,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.n]; self.n];
        for (i, row) in d.iter_mut().enumerate() {
            for (j, v) in self.row(i) {
                row[j] = v;
            }
        }
        d
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| self.row(i).all(|(j, v)| self.get(j, i) == v))
    }

    /// Coordinate dump, one `i j value` line per stored entry.
    pub fn to_coo_text(&self) -> String {
        let mut s = String::new();
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                let _ = writeln!(s, "{i} {j} {v:.16e}");
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_are_summed_and_mirrored() {
        let blocks = [
            ([0usize, 1], [[2.0, -1.0], [-1.0, 2.0]]),
            ([1usize, 2], [[2.0, -1.0], [-1.0, 2.0]]),
        ];
        let m = SparseSymMatrix::from_blocks(3, &blocks);
        assert_eq!(
            m.to_dense(),
            vec![vec![2.0, -1.0, 0.0], vec![-1.0, 4.0, -1.0], vec![0.0, -1.0, 2.0]]
        );
        assert!(m.is_symmetric());
        assert_eq!(m.matvec(&[1.0, 1.0, 1.0]), vec![1.0, 2.0, 1.0]);
        assert_eq!(m.to_coo_text().lines().count(), 7);
    }

    #[test]
    fn add_merges_patterns() {
        let a = SparseSymMatrix::from_blocks(3, &[([0usize, 1], [[1.0, 1.0], [1.0, 1.0]])]);
        let b = SparseSymMatrix::identity(3);
        let c = a.add(&b);
        assert_eq!(
            c.to_dense(),
            vec![vec![2.0, 1.0, 0.0], vec![1.0, 2.0, 0.0], vec![0.0, 0.0, 1.0]]
        );
        assert_eq!(c.diag(), vec![2.0, 2.0, 1.0]);
        assert_eq!(a.scale(3.0).get(0, 1), 3.0);
    }
}
