//! Banded storage and LU factorization with partial pivoting.

use nalgebra::DMatrix;

use crate::error::{Error, LinAlgStage, Result};

/// Square banded matrix with `kl` sub- and `ku` super-diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    // row-major; row i stores columns i-kl ..= i+ku
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        Self { n, kl, ku, data: vec![0.0; n * (kl + ku + 1)] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        if i >= self.n || j >= self.n || j + self.kl < i || j > i + self.ku {
            return None;
        }
        Some(i * (self.kl + self.ku + 1) + j + self.kl - i)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |k| self.data[k])
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        let k = self.slot(i, j).unwrap_or_else(|| panic!("({i}, {j}) outside band ({}, {})", self.kl, self.ku));
        self.data[k] += v;
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.slot(i, j).unwrap_or_else(|| panic!("({i}, {j}) outside band ({}, {})", self.kl, self.ku));
        self.data[k] = v;
    }

    pub fn row_range(&self, i: usize) -> std::ops::Range<usize> {
        i.saturating_sub(self.kl)..(i + self.ku + 1).min(self.n)
    }

    pub fn scale_row(&mut self, i: usize, s: f64) {
        for j in self.row_range(i) {
            let k = self.slot(i, j).unwrap();
            self.data[k] *= s;
        }
    }

    pub fn row_max_abs(&self, i: usize) -> f64 {
        self.row_range(i).fold(0.0, |m, j| m.max(self.get(i, j).abs()))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.row_range(i).map(|j| self.get(i, j) * x[j]).sum()).collect()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    pub fn factor(&self) -> Result<BandedLu> {
        BandedLu::new(self)
    }
}

/// `P A = L U` for a banded `A`, stored the way LAPACK's `gbtrf` does:
/// pivots are applied one column at a time and `U` gains `kl` extra
/// super-diagonals of fill.
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    // width of U above the diagonal
    ku_fill: usize,
    // row i stores columns i ..= i+ku_fill of U
    upper: Vec<f64>,
    // multipliers of column k for rows k+1 ..= k+kl
    lower: Vec<f64>,
    pivots: Vec<usize>,
}

impl BandedLu {
    pub fn new(a: &BandedMatrix) -> Result<Self> {
        let n = a.n;
        let kl = a.kl;
        let ku_fill = a.kl + a.ku;
        // Working rows span columns i-kl ..= i+ku_fill.
        let w = kl + ku_fill + 1;
        let idx = |i: usize, j: usize| i * w + j + kl - i;
        let mut work = vec![0.0; n * w];
        for i in 0..n {
            for j in a.row_range(i) {
                work[idx(i, j)] = a.get(i, j);
            }
        }
        let mut lower = vec![0.0; n * kl.max(1)];
        let mut pivots = vec![0; n];
        let scale = a.data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = work[idx(k, k)].abs();
            for i in k + 1..=last {
                let v = work[idx(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !(best > scale * 1e-300) || !best.is_finite() {
                return Err(banded_failure(format!("zero pivot in column {k} of {n}")));
            }
            pivots[k] = p;
            let jmax = (k + ku_fill).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    work.swap(idx(k, j), idx(p, j));
                }
            }
            let piv = work[idx(k, k)];
            for i in k + 1..=last {
                let l = work[idx(i, k)] / piv;
                lower[k * kl + (i - k - 1)] = l;
                work[idx(i, k)] = 0.0;
                if l != 0.0 {
                    for j in k + 1..=jmax {
                        let u = work[idx(k, j)];
                        work[idx(i, j)] -= l * u;
                    }
                }
            }
        }
        let uw = ku_fill + 1;
        let mut upper = vec![0.0; n * uw];
        for i in 0..n {
            for j in i..=(i + ku_fill).min(n - 1) {
                upper[i * uw + j - i] = work[idx(i, j)];
            }
        }
        Ok(Self { n, kl, ku_fill, upper, lower, pivots })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `min |u_ii| / max |u_ii|`, a cheap singularity indicator.
    pub fn pivot_ratio(&self) -> f64 {
        pivot_ratio((0..self.n).map(|i| self.u(i, i)))
    }

    fn u(&self, i: usize, j: usize) -> f64 {
        self.upper[i * (self.ku_fill + 1) + j - i]
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        assert_eq!(b.len(), n);
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            if bk != 0.0 {
                for i in k + 1..=(k + self.kl).min(n - 1) {
                    b[i] -= self.lower[k * self.kl + (i - k - 1)] * bk;
                }
            }
        }
        for i in (0..n).rev() {
            let mut acc = b[i];
            for j in i + 1..=(i + self.ku_fill).min(n - 1) {
                acc -= self.u(i, j) * b[j];
            }
            b[i] = acc / self.u(i, i);
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }

    /// Solves `Aᵀ x = b`.
    pub fn solve_transpose(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x = b.to_vec();
        // Uᵀ y = b
        for i in 0..n {
            let mut acc = x[i];
            for j in i.saturating_sub(self.ku_fill)..i {
                acc -= self.u(j, i) * x[j];
            }
            x[i] = acc / self.u(i, i);
        }
        for k in (0..n).rev() {
            let mut acc = x[k];
            for i in k + 1..=(k + self.kl).min(n - 1) {
                acc -= self.lower[k * self.kl + (i - k - 1)] * x[i];
            }
            x[k] = acc;
            let p = self.pivots[k];
            if p != k {
                x.swap(k, p);
            }
        }
        x
    }
}

fn pivot_ratio(diag: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = diag.fold((f64::INFINITY, 0.0f64), |(lo, hi), d| (lo.min(d.abs()), hi.max(d.abs())));
    if hi == 0.0 {
        0.0
    } else {
        lo / hi
    }
}

fn banded_failure(detail: String) -> Error {
    Error::LinearAlgebra { stage: LinAlgStage::BandedPart, detail }
}

/// Dense LU wrapper that reports singularity as an error.
#[derive(Debug, Clone)]
pub struct DenseLu {
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    n: usize,
}

impl DenseLu {
    pub fn new(m: DMatrix<f64>, stage: LinAlgStage) -> Result<Self> {
        let n = m.nrows();
        let scale = m.amax();
        let lu = m.lu();
        let u = lu.u();
        let tiny = (0..n).map(|i| u[(i, i)].abs()).fold(f64::INFINITY, f64::min);
        if n > 0 && (!(tiny > scale * 1e-300) || !tiny.is_finite()) {
            return Err(Error::LinearAlgebra { stage, detail: format!("singular {n}×{n} matrix") });
        }
        Ok(Self { lu, n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pivot_ratio(&self) -> f64 {
        let u = self.lu.u();
        pivot_ratio((0..self.n).map(|i| u[(i, i)]))
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut v = nalgebra::DVector::from_column_slice(b);
        self.lu.solve_mut(&mut v);
        v.as_slice().to_vec()
    }

    pub fn solve_matrix(&self, b: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = b.clone();
        self.lu.solve_mut(&mut out);
        out
    }

    pub fn solve_transpose(&self, b: &[f64]) -> Vec<f64> {
        // (P⁻¹ L U)ᵀ x = b  ⇒  Uᵀ Lᵀ P x = b
        let l = self.lu.l();
        let u = self.lu.u();
        let mut y = nalgebra::DVector::from_column_slice(b);
        u.transpose().solve_lower_triangular_mut(&mut y);
        l.transpose().solve_upper_triangular_mut(&mut y);
        let mut x = y;
        self.lu.p().inv_permute_rows(&mut x);
        x.as_slice().to_vec()
    }
}
