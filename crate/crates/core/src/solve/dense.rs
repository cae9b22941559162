//! Small dense kernels for the block solves: row-major matrices, LU with
//! partial pivoting, and unpivoted `LDLᵀ`.

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Dense {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self { rows: rows.len(), cols, data: rows.concat() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    /// `selfᵀ x`.
    pub fn tr_mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.rows);
        let mut y = vec![0.0; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            for (yj, a) in y.iter_mut().zip(self.row(i)) {
                *yj += a * xi;
            }
        }
        y
    }

    pub fn mul(&self, other: &Dense) -> Dense {
        assert_eq!(self.cols, other.rows);
        let mut out = Dense::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    /// Column `j` as a vector.
    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// `PA = LU` with partial pivoting, stored in place.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Dense,
    perm: Vec<usize>,
}

impl Lu {
    /// `None` when a pivot falls below `n ε max|a|`.
    pub fn factor(a: &Dense) -> Option<Self> {
        let n = a.rows;
        assert_eq!(n, a.cols, "LU needs a square matrix");
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let tiny = (n.max(1) as f64) * f64::EPSILON * a.max_abs();
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| lu.get(i, k).abs().total_cmp(&lu.get(j, k).abs()))?;
            if !(lu.get(p, k).abs() > tiny) {
                return None;
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu.get(k, k);
            for i in k + 1..n {
                let f = lu.get(i, k) / pivot;
                lu.set(i, k, f);
                if f != 0.0 {
                    for j in k + 1..n {
                        let v = lu.get(i, j) - f * lu.get(k, j);
                        lu.set(i, j, v);
                    }
                }
            }
        }
        Some(Self { lu, perm })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.rows;
        assert_eq!(b.len(), n);
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu.get(i, j) * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu.get(i, j) * x[j]).sum();
            x[i] = (x[i] - s) / self.lu.get(i, i);
        }
        x
    }

    /// Solves for every column of `b`.
    pub fn solve_matrix(&self, b: &Dense) -> Dense {
        let mut out = Dense::zeros(b.rows, b.cols);
        for j in 0..b.cols {
            for (i, v) in self.solve(&b.col(j)).into_iter().enumerate() {
                out.set(i, j, v);
            }
        }
        out
    }
}

/// `A = L D Lᵀ` without pivoting; `L` unit lower triangular.
#[derive(Debug, Clone)]
pub struct Ldlt {
    l: Dense,
    d: Vec<f64>,
}

impl Ldlt {
    /// On a (numerically) zero pivot returns its index.
    pub fn factor(a: &Dense) -> Result<Self, usize> {
        let n = a.rows;
        assert_eq!(n, a.cols, "LDLᵀ needs a square matrix");
        let tiny = (n.max(1) as f64) * f64::EPSILON * a.max_abs();
        let mut l = Dense::zeros(n, n);
        let mut d = vec![0.0; n];
        for j in 0..n {
            let dj = a.get(j, j) - (0..j).map(|k| l.get(j, k).powi(2) * d[k]).sum::<f64>();
            if !(dj.abs() > tiny) {
                return Err(j);
            }
            d[j] = dj;
            l.set(j, j, 1.0);
            for i in j + 1..n {
                let s: f64 = (0..j).map(|k| l.get(i, k) * l.get(j, k) * d[k]).sum();
                l.set(i, j, (a.get(i, j) - s) / dj);
            }
        }
        Ok(Self { l, d })
    }

    pub fn l(&self) -> &Dense {
        &self.l
    }

    pub fn d(&self) -> &[f64] {
        &self.d
    }

    /// `L y = b`.
    pub fn forward(&self, b: &[f64]) -> Vec<f64> {
        let mut y = b.to_vec();
        for i in 0..y.len() {
            let s: f64 = (0..i).map(|k| self.l.get(i, k) * y[k]).sum();
            y[i] -= s;
        }
        y
    }

    /// `Lᵀ x = b`.
    pub fn backward(&self, b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut x = b.to_vec();
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|k| self.l.get(k, i) * x[k]).sum();
            x[i] -= s;
        }
        x
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let z: Vec<f64> = self.forward(b).iter().zip(&self.d).map(|(y, d)| y / d).collect();
        self.backward(&z)
    }
}
