//! Exact integer and rational matrices, Smith normal form, fraction-free
//! determinants, and integer polynomials in one variable with cyclotomic
//! factorization. No floating point.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(v: i64) -> Rat {
    Rat::from_integer(int(v))
}

pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(int(p), int(q))
}

/// Dense row-major matrix over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Int::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Int>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Int::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Int]) -> Result<Vec<Int>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!("{}x{} * {}", self.rows, self.cols, v.len())));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| Rat::from_integer(v.clone())).collect(),
        }
    }

    /// Principal submatrix on the given (strictly increasing) index set.
    pub fn principal_submatrix(&self, idx: &[usize]) -> Result<IntMatrix> {
        if idx.iter().any(|&i| i >= self.rows.min(self.cols)) {
            return Err(Error::DimensionMismatch("submatrix index out of range".into()));
        }
        let mut m = IntMatrix::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        Ok(m)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<Int> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Int::one());
        }
        let mut a = self.data.clone();
        let at = |a: &Vec<Int>, i: usize, j: usize| a[i * n + j].clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if at(&a, k, k).is_zero() {
                match (k + 1..n).find(|&i| !at(&a, i, k).is_zero()) {
                    Some(i) => {
                        for j in 0..n {
                            a.swap(k * n + j, i * n + j);
                        }
                        sign = -sign;
                    }
                    None => return Ok(Int::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = at(&a, i, j) * at(&a, k, k) - at(&a, i, k) * at(&a, k, j);
                    a[i * n + j] = num / &prev;
                }
                a[i * n + k] = Int::zero();
            }
            prev = at(&a, k, k);
        }
        Ok(sign * at(&a, n - 1, n - 1))
    }
}

/// Dense row-major matrix over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(RatMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rat::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!("{}x{} * {}", self.rows, self.cols, v.len())));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect())
    }

    pub fn principal_submatrix(&self, idx: &[usize]) -> Result<RatMatrix> {
        if idx.iter().any(|&i| i >= self.rows.min(self.cols)) {
            return Err(Error::DimensionMismatch("submatrix index out of range".into()));
        }
        let mut m = RatMatrix::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        Ok(m)
    }

    /// Row-echelon rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut row = 0;
        for col in 0..a.cols {
            if row == a.rows {
                break;
            }
            let pivot = (row..a.rows).find(|&i| !a.get(i, col).is_zero());
            let Some(p) = pivot else { continue };
            for j in 0..a.cols {
                let tmp = a.get(row, j).clone();
                a.set(row, j, a.get(p, j).clone());
                a.set(p, j, tmp);
            }
            let inv = a.get(row, col).clone();
            for i in row + 1..a.rows {
                if a.get(i, col).is_zero() {
                    continue;
                }
                let f = a.get(i, col) / &inv;
                for j in col..a.cols {
                    let v = a.get(i, j) - &f * a.get(row, j);
                    a.set(i, j, v);
                }
            }
            row += 1;
        }
        row
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn invert(&self) -> Result<RatMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&i| !a.get(i, col).is_zero()).ok_or(Error::Singular)?;
            for j in 0..n {
                let tmp = a.get(col, j).clone();
                a.set(col, j, a.get(pivot, j).clone());
                a.set(pivot, j, tmp);
                let tmp = inv.get(col, j).clone();
                inv.set(col, j, inv.get(pivot, j).clone());
                inv.set(pivot, j, tmp);
            }
            let d = a.get(col, col).clone();
            for j in 0..n {
                let v = a.get(col, j) / &d;
                a.set(col, j, v);
                let v = inv.get(col, j) / &d;
                inv.set(col, j, v);
            }
            for i in 0..n {
                if i == col || a.get(i, col).is_zero() {
                    continue;
                }
                let f = a.get(i, col).clone();
                for j in 0..n {
                    let v = a.get(i, j) - &f * a.get(col, j);
                    a.set(i, j, v);
                    let v = inv.get(i, j) - &f * inv.get(col, j);
                    inv.set(i, j, v);
                }
            }
        }
        Ok(inv)
    }

    /// Unique solution of `self * x = b`; errors if none or not unique.
    pub fn solve(&self, b: &[Rat]) -> Result<Vec<Rat>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch("solve: rhs length".into()));
        }
        let n = self.cols;
        let mut a = self.clone();
        let mut rhs = b.to_vec();
        let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
        let mut row = 0;
        for col in 0..n {
            if row == a.rows {
                break;
            }
            let Some(p) = (row..a.rows).find(|&i| !a.get(i, col).is_zero()) else { continue };
            for j in 0..n {
                let tmp = a.get(row, j).clone();
                a.set(row, j, a.get(p, j).clone());
                a.set(p, j, tmp);
            }
            rhs.swap(row, p);
            let d = a.get(row, col).clone();
            for j in 0..n {
                let v = a.get(row, j) / &d;
                a.set(row, j, v);
            }
            rhs[row] = &rhs[row] / &d;
            for i in 0..a.rows {
                if i == row || a.get(i, col).is_zero() {
                    continue;
                }
                let f = a.get(i, col).clone();
                for j in 0..n {
                    let v = a.get(i, j) - &f * a.get(row, j);
                    a.set(i, j, v);
                }
                let v = &rhs[i] - &f * &rhs[row];
                rhs[i] = v;
            }
            pivot_of_col[col] = Some(row);
            row += 1;
        }
        for i in row..a.rows {
            if !rhs[i].is_zero() {
                return Err(Error::Inconsistent("linear system has no solution".into()));
            }
        }
        if pivot_of_col.iter().any(Option::is_none) {
            return Err(Error::RankDeficient("linear system is underdetermined".into()));
        }
        Ok((0..n).map(|c| rhs[pivot_of_col[c].unwrap()].clone()).collect())
    }

    /// Sylvester criterion via leading principal pivots.
    pub fn is_positive_definite(&self) -> Result<bool> {
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let n = self.rows;
        let mut a = self.clone();
        for k in 0..n {
            // pivot equals (k-th leading minor)/(previous minor); all must be positive
            if a.get(k, k) <= &Rat::zero() {
                return Ok(false);
            }
            for i in k + 1..n {
                if a.get(i, k).is_zero() {
                    continue;
                }
                let f = a.get(i, k) / a.get(k, k);
                for j in k..n {
                    let v = a.get(i, j) - &f * a.get(k, j);
                    a.set(i, j, v);
                }
            }
        }
        Ok(true)
    }
}

/// Smith normal form: nonzero invariant factors (each dividing the next) and rank.
pub fn smith_normal_form(m: &IntMatrix) -> (Vec<Int>, usize) {
    let (r, c) = (m.rows, m.cols);
    let mut a: Vec<Vec<Int>> = (0..r).map(|i| (0..c).map(|j| m.get(i, j).clone()).collect()).collect();
    let steps = r.min(c);
    let mut t = 0;
    while t < steps {
        // move the entry of minimal nonzero absolute value to the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                if !a[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj)
        }
        // clear row and column t; restart whenever a smaller remainder appears
        let mut dirty = true;
        while dirty {
            dirty = false;
            for i in t + 1..r {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..c {
                    let v = &a[i][j] - &q * &a[t][j];
                    a[i][j] = v;
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..c {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for i in t..r {
                    let v = &a[i][j] - &q * &a[i][t];
                    a[i][j] = v;
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j)
                    }
                    dirty = true;
                }
            }
        }
        // enforce divisibility of the remaining block by the pivot
        let mut fixed = true;
        'scan: for i in t + 1..r {
            for j in t + 1..c {
                if !(&a[i][j] % &a[t][t]).is_zero() {
                    for jj in t..c {
                        let v = &a[t][jj] + &a[i][jj];
                        a[t][jj] = v;
                    }
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if fixed {
            t += 1;
        }
    }
    let factors: Vec<Int> = (0..t).map(|i| a[i][i].abs()).collect();
    (factors, t)
}

/// Polynomial in one variable `q` with integer coefficients, ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPolynomial {
    coeffs: Vec<Int>,
}

impl QPolynomial {
    pub fn new(coeffs: Vec<Int>) -> Self {
        let mut p = QPolynomial { coeffs };
        p.normalize();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&v| int(v)).collect())
    }

    pub fn zero() -> Self {
        QPolynomial { coeffs: vec![] }
    }

    pub fn one() -> Self {
        QPolynomial { coeffs: vec![Int::one()] }
    }

    /// x^k
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Int::zero(); k + 1];
        coeffs[k] = Int::one();
        QPolynomial { coeffs }
    }

    fn normalize(&mut self) {
        while self.coeffs.last().map_or(false, Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Result<usize> {
        if self.is_zero() {
            Err(Error::ZeroPolynomial)
        } else {
            Ok(self.coeffs.len() - 1)
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(Int::zero);
                let b = other.coeffs.get(i).cloned().unwrap_or_else(Int::zero);
                a + b
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn neg(&self) -> Self {
        QPolynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Int::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(coeffs)
    }

    /// Exact division in Z[q]; errors if the quotient does not exist there.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        if divisor.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let mut rem = self.coeffs.clone();
        let d = &divisor.coeffs;
        let dl = d.last().unwrap();
        if rem.len() < d.len() {
            return Err(Error::InexactDivision);
        }
        let qlen = rem.len() - d.len() + 1;
        let mut quot = vec![Int::zero(); qlen];
        for k in (0..qlen).rev() {
            let lead = rem[k + d.len() - 1].clone();
            if lead.is_zero() {
                continue;
            }
            if !(&lead % dl).is_zero() {
                return Err(Error::InexactDivision);
            }
            let c = lead / dl;
            for (i, di) in d.iter().enumerate() {
                rem[k + i] -= &c * di;
            }
            quot[k] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::InexactDivision);
        }
        Ok(Self::new(quot))
    }

    pub fn eval_rat(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rat::from_integer(c.clone());
        }
        acc
    }
}

/// Determinant of a square polynomial matrix by fraction-free elimination.
pub fn det_poly(m: &[Vec<QPolynomial>]) -> Result<QPolynomial> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch("determinant of non-square matrix".into()));
    }
    if n == 0 {
        return Ok(QPolynomial::one());
    }
    let mut a: Vec<Vec<QPolynomial>> = m.to_vec();
    let mut negate = false;
    let mut prev = QPolynomial::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(QPolynomial::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.div_exact(&prev)?;
            }
            a[i][k] = QPolynomial::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { det.neg() } else { det })
}

/// d-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(d: u32) -> QPolynomial {
    // Phi_d = (x^d - 1) / prod over proper divisors e of Phi_e
    let mut table: Vec<QPolynomial> = Vec::with_capacity(d as usize + 1);
    table.push(QPolynomial::zero()); // unused slot 0
    for e in 1..=d {
        let mut num = QPolynomial::monomial(e as usize).sub(&QPolynomial::one());
        for f in 1..e {
            if e % f == 0 {
                num = num.div_exact(&table[f as usize]).expect("cyclotomic division is exact");
            }
        }
        table.push(num);
    }
    table.pop().unwrap()
}

/// Split off cyclotomic factors with d <= dmax; returns (factors, remainder)
/// with `p = prod Phi_d^mult * remainder` exactly.
pub fn factor_cyclotomic(p: &QPolynomial, dmax: u32) -> Result<(Vec<(u32, u32)>, QPolynomial)> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut rem = p.clone();
    let mut factors = Vec::new();
    for d in 1..=dmax {
        let phi = cyclotomic_polynomial(d);
        let mut mult = 0u32;
        while let Ok(q) = rem.div_exact(&phi) {
            rem = q;
            mult += 1;
        }
        if mult > 0 {
            factors.push((d, mult));
        }
    }
    Ok((factors, rem))
}
