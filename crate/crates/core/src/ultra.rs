//! One-dimensional ultraspherical building blocks.
//!
//! Coefficient vectors are indexed by polynomial degree. Parameter 0 means the
//! Chebyshev basis `T_k`; parameter `λ ≥ 1` means the Gegenbauer basis
//! `C_k^(λ)`. Differentiation maps Chebyshev coefficients to parameter-`λ`
//! coefficients of the `λ`-th derivative, and conversion raises the parameter
//! by one, so every operator stays banded.

use std::f64::consts::PI;

use crate::error::{invalid, Result};

/// Square or rectangular banded matrix with explicit band storage.
///
/// Entry `(i, j)` is stored when `-lower <= j - i <= upper`; everything else
/// is structurally zero.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    rows: usize,
    cols: usize,
    lower: usize,
    upper: usize,
    // row-major, `lower + upper + 1` slots per row
    band: Vec<f64>,
}

impl OperatorMatrix {
    pub fn zeros(rows: usize, cols: usize, lower: usize, upper: usize) -> Self {
        Self { rows, cols, lower, upper, band: vec![0.0; rows * (lower + upper + 1)] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n, 0, 0);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    fn width(&self) -> usize {
        self.lower + self.upper + 1
    }

    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        if i >= self.rows || j >= self.cols {
            return None;
        }
        let off = j as isize - i as isize;
        if off < -(self.lower as isize) || off > self.upper as isize {
            return None;
        }
        Some(i * self.width() + (off + self.lower as isize) as usize)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |k| self.band[k])
    }

    /// Panics when `(i, j)` lies outside the declared band.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.slot(i, j).unwrap_or_else(|| panic!("({i}, {j}) outside band"));
        self.band[k] = v;
    }

    /// Column range that may hold nonzeros in row `i`.
    pub fn row_range(&self, i: usize) -> std::ops::Range<usize> {
        let lo = i.saturating_sub(self.lower);
        let hi = (i + self.upper + 1).min(self.cols);
        lo..hi.max(lo)
    }

    /// Iterator over the stored nonzero entries of row `i`.
    pub fn row_entries(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.row_range(i).map(move |j| (j, self.get(i, j))).filter(|&(_, v)| v != 0.0)
    }

    pub fn nnz(&self) -> usize {
        self.band.iter().filter(|v| **v != 0.0).count()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row_range(i).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    pub fn matmul(&self, other: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out =
            OperatorMatrix::zeros(self.rows, other.cols, self.lower + other.lower, self.upper + other.upper);
        for i in 0..self.rows {
            for k in self.row_range(i) {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in other.row_range(k) {
                    let b = other.get(k, j);
                    if b != 0.0 {
                        let slot = out.slot(i, j).expect("product band");
                        out.band[slot] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn scaled(&self, s: f64) -> OperatorMatrix {
        let mut out = self.clone();
        out.band.iter_mut().for_each(|v| *v *= s);
        out
    }

    /// `self + other`, widening the band as needed.
    pub fn add(&self, other: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = OperatorMatrix::zeros(
            self.rows,
            self.cols,
            self.lower.max(other.lower),
            self.upper.max(other.upper),
        );
        for m in [self, other] {
            for i in 0..m.rows {
                for j in m.row_range(i) {
                    let slot = out.slot(i, j).expect("sum band");
                    out.band[slot] += m.get(i, j);
                }
            }
        }
        out
    }

    /// Leading `rows × cols` block.
    pub fn truncated(&self, rows: usize, cols: usize) -> OperatorMatrix {
        let mut out = OperatorMatrix::zeros(rows, cols, self.lower, self.upper);
        for i in 0..rows.min(self.rows) {
            for j in self.row_range(i) {
                if j < cols {
                    out.set(i, j, self.get(i, j));
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j)).collect()).collect()
    }

    /// Entries of the diagonal at column offset `offset` (`j - i`).
    pub fn diagonal(&self, offset: isize) -> Vec<f64> {
        (0..self.rows)
            .filter_map(|i| {
                let j = i as isize + offset;
                (j >= 0 && (j as usize) < self.cols).then(|| self.get(i, j as usize))
            })
            .collect()
    }
}

/// `λ`-th derivative, Chebyshev coefficients in, parameter-`λ` coefficients out.
pub fn diff_operator(lambda: usize, n: usize) -> Result<OperatorMatrix> {
    if lambda == 0 {
        return Err(invalid("differentiation order must be at least 1"));
    }
    if n < lambda + 1 {
        return Err(invalid(format!("n = {n} too small for derivative order {lambda}")));
    }
    let factor = (1..lambda).fold(2f64.powi(lambda as i32 - 1), |acc, k| acc * k as f64);
    let mut d = OperatorMatrix::zeros(n, n, 0, lambda);
    for i in 0..n - lambda {
        d.set(i, i + lambda, factor * (i + lambda) as f64);
    }
    Ok(d)
}

/// Conversion from parameter `λ` to parameter `λ + 1` (`λ = 0` is Chebyshev).
pub fn conversion_operator(lambda: usize, n: usize) -> Result<OperatorMatrix> {
    if n < 3 {
        return Err(invalid(format!("conversion operator needs n >= 3, got {n}")));
    }
    let mut s = OperatorMatrix::zeros(n, n, 0, 2);
    if lambda == 0 {
        s.set(0, 0, 1.0);
        for k in 1..n {
            s.set(k, k, 0.5);
        }
        for k in 0..n - 2 {
            s.set(k, k + 2, -0.5);
        }
    } else {
        let l = lambda as f64;
        for k in 0..n {
            s.set(k, k, l / (l + k as f64));
        }
        for k in 0..n - 2 {
            s.set(k, k + 2, -l / (l + k as f64 + 2.0));
        }
    }
    Ok(s)
}

/// Product `S_{hi-1} ⋯ S_{lo}` taking parameter `lo` to parameter `hi`.
pub fn conversion_chain(lo: usize, hi: usize, n: usize) -> Result<OperatorMatrix> {
    let mut out = OperatorMatrix::identity(n);
    for lambda in lo..hi {
        out = conversion_operator(lambda, n)?.matmul(&out);
    }
    Ok(out)
}

/// Multiplication by `x` in the parameter-`λ` basis, unreduced `n × n`.
fn mult_by_x(lambda: usize, n: usize) -> OperatorMatrix {
    let mut m = OperatorMatrix::zeros(n, n, 1, 1);
    if n == 0 {
        return m;
    }
    if lambda == 0 {
        if n > 1 {
            m.set(1, 0, 1.0);
        }
        for k in 1..n {
            m.set(k - 1, k, 0.5);
            if k + 1 < n {
                m.set(k + 1, k, 0.5);
            }
        }
    } else {
        let l = lambda as f64;
        for k in 0..n {
            let kf = k as f64;
            let den = 2.0 * (kf + l);
            if k + 1 < n {
                m.set(k + 1, k, (kf + 1.0) / den);
            }
            if k >= 1 {
                m.set(k - 1, k, (kf + 2.0 * l - 1.0) / den);
            }
        }
    }
    m
}

/// Multiplication by `x^power` in the parameter-`λ` basis, `n × n`.
///
/// Built on a padded grid and truncated so every retained entry is exact.
pub fn mult_monomial_operator(power: usize, lambda: usize, n: usize) -> OperatorMatrix {
    let padded = n + power;
    let x = mult_by_x(lambda, padded);
    let mut acc = OperatorMatrix::identity(padded);
    for _ in 0..power {
        acc = x.matmul(&acc);
    }
    acc.truncated(n, n)
}

/// Multiplication by `f = Σ f_k T_k` acting on parameter-`λ` coefficients.
pub fn mult_operator(f_coeffs: &[f64], lambda: usize, n: usize) -> Result<OperatorMatrix> {
    let degree = f_coeffs.iter().rposition(|c| *c != 0.0).unwrap_or(0);
    if degree >= n {
        return Err(invalid(format!("multiplier degree {degree} too large for n = {n}")));
    }
    let padded = n + degree;
    let x = mult_by_x(lambda, padded);
    let mut prev = OperatorMatrix::identity(padded);
    let mut out = prev.scaled(f_coeffs.first().copied().unwrap_or(0.0));
    if degree >= 1 {
        let mut cur = x.clone();
        out = out.add(&cur.scaled(f_coeffs[1]));
        for &fk in &f_coeffs[2..=degree] {
            let next = x.matmul(&cur).scaled(2.0).add(&prev.scaled(-1.0));
            out = out.add(&next.scaled(fk));
            prev = cur;
            cur = next;
        }
    }
    Ok(out.truncated(n, n))
}

/// Second-kind Chebyshev points, ascending from −1 to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebGrid {
    points: Vec<f64>,
}

impl ChebGrid {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }
}

impl std::ops::Index<usize> for ChebGrid {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.points[i]
    }
}

pub fn cheb_points(n: usize) -> Result<ChebGrid> {
    if n < 2 {
        return Err(invalid(format!("Chebyshev grid needs n >= 2, got {n}")));
    }
    let m = (n - 1) as f64;
    let mut points: Vec<f64> = (0..n).map(|j| (PI * (n - 1 - j) as f64 / m).cos()).collect();
    // exact endpoints and symmetry
    points[0] = -1.0;
    points[n - 1] = 1.0;
    for j in 0..n / 2 {
        let v = 0.5 * (points[n - 1 - j] - points[j]);
        points[j] = -v;
        points[n - 1 - j] = v;
    }
    if n % 2 == 1 {
        points[n / 2] = 0.0;
    }
    Ok(ChebGrid { points })
}

/// Dense values↔coefficients matrices for one grid size.
#[derive(Debug, Clone)]
pub struct ChebTransform {
    n: usize,
    // forward[k * n + j]: coefficient k from value j
    forward: Vec<f64>,
    // inverse[j * n + k] = T_k(x_j)
    inverse: Vec<f64>,
}

impl ChebTransform {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid(format!("transform needs n >= 2, got {n}")));
        }
        let m = (n - 1) as f64;
        let theta = |j: usize| PI * (n - 1 - j) as f64 / m;
        let mut inverse = vec![0.0; n * n];
        for j in 0..n {
            for k in 0..n {
                inverse[j * n + k] = (k as f64 * theta(j)).cos();
            }
        }
        let mut forward = vec![0.0; n * n];
        for k in 0..n {
            let ck = if k == 0 || k == n - 1 { 1.0 / m } else { 2.0 / m };
            for j in 0..n {
                let wj = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
                forward[k * n + j] = ck * wj * inverse[j * n + k];
            }
        }
        Ok(Self { n, forward, inverse })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vals_to_coeffs(&self, values: &[f64]) -> Result<Vec<f64>> {
        self.check(values.len())?;
        Ok(dense_apply(&self.forward, self.n, values))
    }

    pub fn coeffs_to_vals(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        self.check(coeffs.len())?;
        Ok(dense_apply(&self.inverse, self.n, coeffs))
    }

    /// 2D transform of an `n × n` grid stored with the y-index fastest.
    pub fn vals_to_coeffs_2d(&self, values: &[f64]) -> Result<Vec<f64>> {
        self.check2(values.len())?;
        Ok(self.apply_2d(&self.forward, values))
    }

    pub fn coeffs_to_vals_2d(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        self.check2(coeffs.len())?;
        Ok(self.apply_2d(&self.inverse, coeffs))
    }

    fn apply_2d(&self, mat: &[f64], x: &[f64]) -> Vec<f64> {
        let n = self.n;
        // along y (contiguous blocks)
        let mut tmp = vec![0.0; n * n];
        for ix in 0..n {
            let block = dense_apply(mat, n, &x[ix * n..(ix + 1) * n]);
            tmp[ix * n..(ix + 1) * n].copy_from_slice(&block);
        }
        // along x
        let mut out = vec![0.0; n * n];
        for iy in 0..n {
            for k in 0..n {
                let mut acc = 0.0;
                for j in 0..n {
                    acc += mat[k * n + j] * tmp[j * n + iy];
                }
                out[k * n + iy] = acc;
            }
        }
        out
    }

    fn check(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(invalid(format!("expected {} samples, got {len}", self.n)));
        }
        Ok(())
    }

    fn check2(&self, len: usize) -> Result<()> {
        if len != self.n * self.n {
            return Err(invalid(format!("expected {} samples, got {len}", self.n * self.n)));
        }
        Ok(())
    }
}

fn dense_apply(mat: &[f64], n: usize, x: &[f64]) -> Vec<f64> {
    (0..n).map(|i| mat[i * n..(i + 1) * n].iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

pub fn vals_to_coeffs(values: &[f64]) -> Result<Vec<f64>> {
    ChebTransform::new(values.len())?.vals_to_coeffs(values)
}

/// Values of the Chebyshev series `coeffs` on the grid of matching size.
pub fn coeffs_to_vals(coeffs: &[f64], grid: &ChebGrid) -> Result<Vec<f64>> {
    if coeffs.len() != grid.n() {
        return Err(invalid(format!(
            "coefficient length {} does not match grid size {}",
            coeffs.len(),
            grid.n()
        )));
    }
    ChebTransform::new(grid.n())?.coeffs_to_vals(coeffs)
}

/// Row of basis values `[T_0(x), …, T_{n-1}(x)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalRow {
    pub weights: Vec<f64>,
}

impl EvalRow {
    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn dot(&self, coeffs: &[f64]) -> f64 {
        self.weights.iter().zip(coeffs).map(|(a, b)| a * b).sum()
    }
}

fn check_unit_interval(x: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&x) || x.is_nan() {
        return Err(invalid(format!("evaluation point {x} outside [-1, 1]")));
    }
    Ok(())
}

/// Chebyshev values by recurrence; exact at ±1.
pub(crate) fn cheb_values(x: f64, n: usize) -> Vec<f64> {
    let mut w = vec![0.0; n];
    if n > 0 {
        w[0] = 1.0;
    }
    if n > 1 {
        w[1] = x;
    }
    for k in 2..n {
        w[k] = 2.0 * x * w[k - 1] - w[k - 2];
    }
    w
}

pub fn eval_row(x: f64, n: usize) -> Result<EvalRow> {
    check_unit_interval(x)?;
    Ok(EvalRow { weights: cheb_values(x, n) })
}

/// Row `r` with `r · u = p'(x)`: the evaluation row times `S_0⁻¹ D_1`.
///
/// `S_0⁻¹` is applied by a transposed back-substitution on the banded `S_0`.
pub fn deriv_eval_row(x: f64, n: usize) -> Result<EvalRow> {
    check_unit_interval(x)?;
    Ok(EvalRow { weights: deriv_row_unchecked(x, n) })
}

pub(crate) fn deriv_row_unchecked(x: f64, n: usize) -> Vec<f64> {
    let e = cheb_values(x, n);
    // Solve S_0ᵀ z = e; S_0ᵀ is lower triangular with entries on offsets 0 and −2.
    let diag = |k: usize| if k == 0 { 1.0 } else { 0.5 };
    let mut z = vec![0.0; n];
    for k in 0..n {
        let mut rhs = e[k];
        if k >= 2 {
            rhs += 0.5 * z[k - 2];
        }
        z[k] = rhs / diag(k);
    }
    // D_1 has entry j at (j−1, j).
    let mut w = vec![0.0; n];
    for j in 1..n {
        w[j] = z[j - 1] * j as f64;
    }
    w
}

/// Evaluate the Chebyshev series at `x` (Clenshaw).
pub fn clenshaw(coeffs: &[f64], x: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &c in coeffs.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    coeffs.first().copied().unwrap_or(0.0) + x * b1 - b2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_derivative_superdiagonal() {
        let d = diff_operator(1, 4).unwrap();
        assert_eq!(d.diagonal(1), vec![1.0, 2.0, 3.0]);
        assert_eq!(d.nnz(), 3);
    }

    #[test]
    fn second_derivative_superdiagonal() {
        let d = diff_operator(2, 5).unwrap();
        assert_eq!(d.diagonal(2), vec![4.0, 6.0, 8.0]);
    }

    #[test]
    fn derivative_rejects_bad_sizes() {
        assert!(diff_operator(0, 5).is_err());
        assert!(diff_operator(3, 3).is_err());
    }

    #[test]
    fn derivative_kills_constants() {
        let d = diff_operator(1, 6).unwrap();
        let mut e0 = vec![0.0; 6];
        e0[0] = 1.0;
        assert!(d.apply(&e0).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn chebyshev_to_gegenbauer_conversion() {
        let s = conversion_operator(0, 4).unwrap();
        assert_eq!(s.diagonal(0), vec![1.0, 0.5, 0.5, 0.5]);
        assert_eq!(s.diagonal(2), vec![-0.5, -0.5]);
        assert_eq!(s.diagonal(1), vec![0.0; 3]);
        let mut e0 = vec![0.0; 4];
        e0[0] = 1.0;
        assert_eq!(s.apply(&e0), e0);
    }

    #[test]
    fn gegenbauer_raise_conversion() {
        let s = conversion_operator(1, 5).unwrap();
        assert_eq!(s.diagonal(0), vec![1.0, 1.0 / 2.0, 1.0 / 3.0, 1.0 / 4.0, 1.0 / 5.0]);
        assert_eq!(s.diagonal(2), vec![-1.0 / 3.0, -1.0 / 4.0, -1.0 / 5.0]);
        assert!(conversion_operator(1, 2).is_err());
    }

    #[test]
    fn multiplication_by_one_is_identity() {
        for lambda in 0..3 {
            let m = mult_operator(&[1.0], lambda, 7).unwrap();
            assert_eq!(m, OperatorMatrix::identity(7).truncated(7, 7));
        }
    }

    #[test]
    fn multiplication_by_x_chebyshev() {
        // x·T_1 = (T_0 + T_2)/2
        let m = mult_operator(&[0.0, 1.0], 0, 4).unwrap();
        let out = m.apply(&[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(out, vec![0.5, 0.0, 0.5, 0.0]);
        assert_eq!(m.apply(&[1.0, 0.0, 0.0, 0.0]), vec![0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn multiplier_degree_checked() {
        assert!(mult_operator(&[0.0, 0.0, 0.0, 1.0], 0, 3).is_err());
    }

    #[test]
    fn small_grids() {
        assert_eq!(cheb_points(2).unwrap().points(), &[-1.0, 1.0]);
        assert_eq!(cheb_points(3).unwrap().points(), &[-1.0, 0.0, 1.0]);
        let g = cheb_points(5).unwrap();
        let h = 0.5f64.sqrt();
        let want = [-1.0, -h, 0.0, h, 1.0];
        for (a, b) in g.points().iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(cheb_points(1).is_err());
    }

    #[test]
    fn transform_reproduces_basis() {
        let t = ChebTransform::new(6).unwrap();
        let c = t.vals_to_coeffs(&[3.0; 6]).unwrap();
        assert!((c[0] - 3.0).abs() < 1e-14);
        assert!(c[1..].iter().all(|v| v.abs() < 1e-14));

        let g = cheb_points(6).unwrap();
        let vals: Vec<f64> = g.points().iter().map(|x| 2.0 * x * x - 1.0).collect();
        let c = t.vals_to_coeffs(&vals).unwrap();
        for (k, v) in c.iter().enumerate() {
            let want = if k == 2 { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-14, "k = {k}: {v}");
        }
        assert!(t.vals_to_coeffs(&[1.0; 5]).is_err());
    }

    #[test]
    fn endpoint_rows() {
        assert_eq!(eval_row(1.0, 5).unwrap().weights, vec![1.0; 5]);
        assert_eq!(eval_row(-1.0, 4).unwrap().weights, vec![1.0, -1.0, 1.0, -1.0]);
        assert!(eval_row(1.5, 4).is_err());
        assert!(deriv_eval_row(-1.01, 4).is_err());
    }

    #[test]
    fn derivative_row_of_t3_at_origin() {
        let r = deriv_eval_row(0.0, 6).unwrap();
        assert!((r.dot(&[0.0, 0.0, 0.0, 1.0, 0.0, 0.0]) + 3.0).abs() < 1e-14);
        assert_eq!(r.dot(&[2.5, 0.0, 0.0, 0.0, 0.0, 0.0]), 0.0);
    }

    #[test]
    fn derivative_row_matches_chebyshev_endpoint_slopes() {
        // T_k'(1) = k², T_k'(−1) = (−1)^(k+1) k²
        let n = 9;
        let plus = deriv_eval_row(1.0, n).unwrap();
        let minus = deriv_eval_row(-1.0, n).unwrap();
        for k in 0..n {
            let kk = (k * k) as f64;
            assert!((plus.weights[k] - kk).abs() < 1e-12);
            let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
            assert!((minus.weights[k] - sign * kk).abs() < 1e-12);
        }
    }
}
