//! Small dense bivariate polynomials in the monomial basis.

use std::ops::{Add, Mul, Neg, Sub};

/// `Σ c[p][q] r^p s^q` with `p < deg_r + 1`, `q < deg_s + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly2 {
    // c[p * (ds + 1) + q]
    coeffs: Vec<f64>,
    dr: usize,
    ds: usize,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self { coeffs: vec![0.0], dr: 0, ds: 0 }
    }

    pub fn constant(c: f64) -> Self {
        Self { coeffs: vec![c], dr: 0, ds: 0 }
    }

    /// `c0 + cr·r + cs·s`.
    pub fn linear(c0: f64, cr: f64, cs: f64) -> Self {
        let mut p = Self::with_degrees(1, 1);
        p.set(0, 0, c0);
        p.set(1, 0, cr);
        p.set(0, 1, cs);
        p
    }

    pub fn with_degrees(dr: usize, ds: usize) -> Self {
        Self { coeffs: vec![0.0; (dr + 1) * (ds + 1)], dr, ds }
    }

    /// Builds from a table indexed `[p][q]`.
    pub fn from_table(table: &[Vec<f64>]) -> Self {
        let dr = table.len().saturating_sub(1);
        let ds = table.iter().map(|row| row.len()).max().unwrap_or(1).saturating_sub(1);
        let mut p = Self::with_degrees(dr, ds);
        for (i, row) in table.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                p.set(i, j, v);
            }
        }
        p
    }

    pub fn deg_r(&self) -> usize {
        self.dr
    }

    pub fn deg_s(&self) -> usize {
        self.ds
    }

    pub fn get(&self, p: usize, q: usize) -> f64 {
        if p > self.dr || q > self.ds {
            0.0
        } else {
            self.coeffs[p * (self.ds + 1) + q]
        }
    }

    pub fn set(&mut self, p: usize, q: usize, v: f64) {
        assert!(p <= self.dr && q <= self.ds, "monomial ({p}, {q}) outside table");
        self.coeffs[p * (self.ds + 1) + q] = v;
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..=self.dr)
            .flat_map(move |p| (0..=self.ds).map(move |q| (p, q, self.get(p, q))))
            .filter(|t| t.2 != 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|v| *v == 0.0)
    }

    pub fn eval(&self, r: f64, s: f64) -> f64 {
        let mut acc = 0.0;
        for p in (0..=self.dr).rev() {
            let mut row = 0.0;
            for q in (0..=self.ds).rev() {
                row = row * s + self.get(p, q);
            }
            acc = acc * r + row;
        }
        acc
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|v| *v *= c);
        out
    }

    pub fn d_r(&self) -> Self {
        if self.dr == 0 {
            return Self::zero();
        }
        let mut out = Self::with_degrees(self.dr - 1, self.ds);
        for p in 1..=self.dr {
            for q in 0..=self.ds {
                out.set(p - 1, q, p as f64 * self.get(p, q));
            }
        }
        out
    }

    pub fn d_s(&self) -> Self {
        if self.ds == 0 {
            return Self::zero();
        }
        let mut out = Self::with_degrees(self.dr, self.ds - 1);
        for p in 0..=self.dr {
            for q in 1..=self.ds {
                out.set(p, q - 1, q as f64 * self.get(p, q));
            }
        }
        out
    }

    pub fn powi(&self, k: usize) -> Self {
        (0..k).fold(Self::constant(1.0), |acc, _| &acc * self)
    }

    /// Zeroes coefficients below `rel_tol · max|c|` and shrinks the degrees.
    pub fn truncated(&self, rel_tol: f64) -> Self {
        let cut = rel_tol * self.max_abs();
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|v| {
            if v.abs() <= cut {
                *v = 0.0
            }
        });
        out.trim()
    }

    fn trim(&self) -> Self {
        let dr = (0..=self.dr).rev().find(|&p| (0..=self.ds).any(|q| self.get(p, q) != 0.0)).unwrap_or(0);
        let ds = (0..=self.ds).rev().find(|&q| (0..=self.dr).any(|p| self.get(p, q) != 0.0)).unwrap_or(0);
        let mut out = Self::with_degrees(dr, ds);
        for p in 0..=dr {
            for q in 0..=ds {
                out.set(p, q, self.get(p, q));
            }
        }
        out
    }
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::with_degrees(self.dr.max(rhs.dr), self.ds.max(rhs.ds));
        for p in 0..=out.dr {
            for q in 0..=out.ds {
                out.set(p, q, self.get(p, q) + rhs.get(p, q));
            }
        }
        out
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        self + &(-rhs)
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        self.scale(-1.0)
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::with_degrees(self.dr + rhs.dr, self.ds + rhs.ds);
        for (p1, q1, a) in self.terms() {
            for (p2, q2, b) in rhs.terms() {
                let v = out.get(p1 + p2, q1 + q2) + a * b;
                out.set(p1 + p2, q1 + q2, v);
            }
        }
        out
    }
}
