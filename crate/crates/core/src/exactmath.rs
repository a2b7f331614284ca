//! Exact rational scalars, dense matrices, and linear solving.
//!
//! Every quantity downstream (eigenmatrices, intersection numbers, triple
//! systems) is an arbitrary-precision rational; results are exact and
//! deterministic. Gaussian elimination always pivots on the first nonzero
//! entry in column order so that free-variable choices are reproducible.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Index, IndexMut};
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator (maintained by `num_rational`).
pub type Rat = BigRational;

/// Integer-valued rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `n/d`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ExactMathError {
    /// The system reduces to `0 = rhs` with `rhs != 0` in the given row of
    /// the eliminated augmented matrix.
    #[error("inconsistent system: row {row} reduces to 0 = {rhs}")]
    Inconsistent { row: usize, rhs: Rat },
    #[error("matrix is singular")]
    Singular,
    /// The characteristic polynomial does not split over the rationals;
    /// the residual factor has the given degree.
    #[error("irrational spectrum: residual factor of degree {residual_degree}")]
    IrrationalSpectrum { residual_degree: usize },
}

/// Dense row-major matrix over [`Rat`].
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    /// Builds a matrix from row vectors. All rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let term = a * &other[(k, j)];
                    out[(i, j)] += term;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .fold(Rat::zero(), |acc, t| acc + t)
            })
            .collect()
    }

    pub fn scale(&self, s: &Rat) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * s)
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &other[(i, j)])
    }

    pub fn trace(&self) -> Rat {
        assert!(self.is_square());
        (0..self.rows).fold(Rat::zero(), |acc, i| acc + &self[(i, i)])
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rat;
    fn index(&self, (r, c): (usize, usize)) -> &Rat {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rat {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(
                f,
                "[{}]",
                self.row(i)
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            )?;
        }
        Ok(())
    }
}

/// The full solution set of a consistent linear system: one particular
/// point plus a basis of the homogeneous solution space. Basis vector `i`
/// has coordinate 1 at `free_indices[i]` and 0 at every other free index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolutionSpace {
    pub particular: Vec<Rat>,
    pub basis: Vec<Vec<Rat>>,
    pub free_indices: Vec<usize>,
}

impl AffineSolutionSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// The point `particular + sum params[i] * basis[i]`.
    pub fn point(&self, params: &[Rat]) -> Vec<Rat> {
        assert_eq!(params.len(), self.basis.len());
        let mut out = self.particular.clone();
        for (t, v) in params.iter().zip(&self.basis) {
            for (o, b) in out.iter_mut().zip(v) {
                *o += t * b;
            }
        }
        out
    }
}

/// Reduces `mat` (augmented or not) to reduced row echelon form over the
/// first `cols` columns, pivoting on the first nonzero entry in column
/// order. Returns the pivot columns in order.
fn rref(mat: &mut [Vec<Rat>], cols: usize) -> Vec<usize> {
    let rows = mat.len();
    let mut pivots = Vec::new();
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row >= rows {
            break;
        }
        let Some(found) = (pivot_row..rows).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(found, pivot_row);
        let inv = mat[pivot_row][col].recip();
        for x in mat[pivot_row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows {
            if r == pivot_row || mat[r][col].is_zero() {
                continue;
            }
            let factor = mat[r][col].clone();
            for c in 0..mat[r].len() {
                let t = &factor * &mat[pivot_row][c];
                mat[r][c] -= t;
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    pivots
}

/// Solves `A x = b` exactly, returning the full affine solution set with
/// free variables at the non-pivot columns.
pub fn solve_affine(a: &Matrix, b: &[Rat]) -> Result<AffineSolutionSpace, ExactMathError> {
    assert_eq!(a.rows(), b.len(), "rhs length must match row count");
    let n = a.cols();
    let mut aug: Vec<Vec<Rat>> = (0..a.rows())
        .map(|i| {
            let mut row: Vec<Rat> = a.row(i).to_vec();
            row.push(b[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug, n);
    for (r, row) in aug.iter().enumerate() {
        if row[..n].iter().all(Rat::is_zero) && !row[n].is_zero() {
            return Err(ExactMathError::Inconsistent {
                row: r,
                rhs: row[n].clone(),
            });
        }
    }
    let pivot_set: Vec<bool> = {
        let mut v = vec![false; n];
        for &c in &pivots {
            v[c] = true;
        }
        v
    };
    let free_indices: Vec<usize> = (0..n).filter(|&c| !pivot_set[c]).collect();
    let mut particular = vec![Rat::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = aug[r][n].clone();
    }
    let basis = free_indices
        .iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); n];
            v[f] = Rat::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -aug[r][f].clone();
            }
            v
        })
        .collect();
    Ok(AffineSolutionSpace {
        particular,
        basis,
        free_indices,
    })
}

/// Exact inverse of a square matrix.
pub fn invert(a: &Matrix) -> Result<Matrix, ExactMathError> {
    assert!(a.is_square(), "invert requires a square matrix");
    let n = a.rows();
    let mut aug: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rat> = a.row(i).to_vec();
            row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    let pivots = rref(&mut aug, n);
    if pivots.len() < n {
        return Err(ExactMathError::Singular);
    }
    Ok(Matrix::from_fn(n, n, |i, j| aug[i][n + j].clone()))
}

/// Monic characteristic polynomial of a square matrix by the
/// Faddeev-LeVerrier recurrence. Coefficients ascending: index = power.
pub fn char_poly(a: &Matrix) -> Vec<Rat> {
    assert!(a.is_square());
    let n = a.rows();
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut m = Matrix::identity(n);
    for k in 1..=n {
        let am = a.mul(&m);
        let c = -(am.trace() / rat(k as i64));
        coeffs[n - k] = c.clone();
        m = am.add(&Matrix::identity(n).scale(&c));
    }
    coeffs
}

/// All rational eigenvalues with algebraic multiplicities, sorted in
/// descending order. Fails unless the characteristic polynomial splits
/// completely over the rationals.
pub fn rational_eigenvalues(a: &Matrix) -> Result<Vec<(Rat, usize)>, ExactMathError> {
    assert!(a.is_square(), "eigenvalues require a square matrix");
    let poly = char_poly(a);
    let (mut roots, residual) = rational_roots(&poly);
    if residual > 0 {
        return Err(ExactMathError::IrrationalSpectrum {
            residual_degree: residual,
        });
    }
    roots.sort_by(|(x, _), (y, _)| y.cmp(x));
    Ok(roots)
}

/// Extracts the rational roots of a polynomial (ascending coefficients)
/// with multiplicities, using root candidates `p/q` where `p` divides the
/// constant and `q` divides the leading coefficient after clearing
/// denominators. Returns the roots and the degree of the unfactored
/// remainder.
pub fn rational_roots(coeffs: &[Rat]) -> (Vec<(Rat, usize)>, usize) {
    let mut poly: Vec<Rat> = coeffs.to_vec();
    while poly.last().is_some_and(Rat::is_zero) && poly.len() > 1 {
        poly.pop();
    }
    if poly.len() <= 1 {
        return (Vec::new(), 0);
    }
    let mut roots: Vec<(Rat, usize)> = Vec::new();
    // x^k factors first.
    let zero_mult = poly.iter().take_while(|c| c.is_zero()).count();
    if zero_mult > 0 {
        poly.drain(..zero_mult);
        roots.push((Rat::zero(), zero_mult));
    }
    if poly.len() <= 1 {
        return (roots, 0);
    }
    let ints = integerize(&poly);
    let lead = ints.last().unwrap().magnitude().clone();
    let constant = ints.first().unwrap().magnitude().clone();
    let mut candidates: Vec<Rat> = Vec::new();
    for p in divisors(&constant) {
        for q in divisors(&lead) {
            let c = Rat::new(BigInt::from(p.clone()), BigInt::from(q.clone()));
            candidates.push(c.clone());
            candidates.push(-c);
        }
    }
    candidates.sort();
    candidates.dedup();
    for cand in candidates {
        if poly.len() <= 1 {
            break;
        }
        let mut mult = 0;
        while poly.len() > 1 && eval_poly(&poly, &cand).is_zero() {
            poly = deflate(&poly, &cand);
            mult += 1;
        }
        if mult > 0 {
            roots.push((cand, mult));
        }
    }
    (roots, poly.len() - 1)
}

fn eval_poly(poly: &[Rat], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in poly.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Divides by `(x - r)`; the caller guarantees `r` is a root.
fn deflate(poly: &[Rat], r: &Rat) -> Vec<Rat> {
    let n = poly.len() - 1;
    let mut out = vec![Rat::zero(); n];
    let mut carry = Rat::zero();
    for i in (0..n).rev() {
        carry = &poly[i + 1] + r * &carry;
        out[i] = carry.clone();
    }
    out
}

/// Clears denominators and removes integer content.
fn integerize(poly: &[Rat]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for c in poly {
        lcm = lcm.lcm(c.denom());
    }
    let scaled: Vec<BigInt> = poly.iter().map(|c| (c * &lcm).to_integer()).collect();
    let mut content = BigInt::zero();
    for c in &scaled {
        content = content.gcd(c);
    }
    if content.is_zero() || content.is_one() {
        scaled
    } else {
        scaled.iter().map(|c| c / &content).collect()
    }
}

/// All positive divisors of `n` (unordered input handled by magnitude).
fn divisors(n: &BigUint) -> Vec<BigUint> {
    if n.is_zero() {
        return vec![BigUint::one()];
    }
    let mut divs = vec![BigUint::one()];
    for (p, e) in factorize(n.clone()) {
        let base = divs.clone();
        let mut pk = BigUint::one();
        for _ in 0..e {
            pk = &pk * &p;
            for d in &base {
                divs.push(d * &pk);
            }
        }
    }
    divs.sort();
    divs.dedup();
    divs
}

/// Factorization by trial division then Brent's rho. Cofactors that Brent
/// fails to split (after a fixed deterministic sequence of parameters) are
/// kept as atoms; a missed split can only turn a genuinely rational
/// spectrum into an IrrationalSpectrum report for astronomically large
/// inputs.
fn factorize(mut n: BigUint) -> Vec<(BigUint, u32)> {
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    let push = |p: BigUint, factors: &mut Vec<(BigUint, u32)>| {
        if let Some(last) = factors.iter_mut().find(|(q, _)| *q == p) {
            last.1 += 1;
        } else {
            factors.push((p, 1));
        }
    };
    if n <= BigUint::one() {
        return factors;
    }
    let mut d = 2u64;
    while d < 1u64 << 16 {
        let big_d = BigUint::from(d);
        if &big_d * &big_d > n {
            break;
        }
        while (&n % &big_d).is_zero() {
            n /= &big_d;
            push(big_d.clone(), &mut factors);
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigUint::one() {
        let mut stack = vec![n];
        while let Some(m) = stack.pop() {
            if m.is_one() {
                continue;
            }
            if is_probable_prime(&m) {
                push(m, &mut factors);
                continue;
            }
            match brent_rho(&m) {
                Some(f) => {
                    let q = &m / &f;
                    stack.push(f);
                    stack.push(q);
                }
                None => push(m, &mut factors),
            }
        }
    }
    factors.sort();
    factors
}

fn is_probable_prime(n: &BigUint) -> bool {
    if n < &BigUint::from(2u32) {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let bp = BigUint::from(p);
        if *n == bp {
            return true;
        }
        if (n % &bp).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's cycle variant of Pollard's rho with fixed parameters.
fn brent_rho(n: &BigUint) -> Option<BigUint> {
    let one = BigUint::one();
    if (n % 2u32).is_zero() {
        return Some(BigUint::from(2u32));
    }
    for c in 1u32..=20 {
        let cc = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &cc) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = one.clone();
        let mut count = 0u32;
        while d == one && count < 1 << 20 {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            d = diff.gcd(n);
            count += 1;
        }
        if d != one && &d != n {
            return Some(d);
        }
    }
    None
}

/// True when `x` is integral.
pub fn is_integer(x: &Rat) -> bool {
    x.is_integer()
}

/// True when `x` is a nonnegative integer.
pub fn is_nonneg_integer(x: &Rat) -> bool {
    x.is_integer() && !x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn solve_full_rank_identity() {
        let a = Matrix::identity(2);
        let sol = solve_affine(&a, &[rat(3), rat(5)]).unwrap();
        assert_eq!(sol.particular, vec![rat(3), rat(5)]);
        assert!(sol.basis.is_empty());
    }

    #[test]
    fn solve_underdetermined() {
        let a = mat(&[&[1, 1]]);
        let sol = solve_affine(&a, &[rat(2)]).unwrap();
        assert_eq!(sol.particular, vec![rat(2), rat(0)]);
        assert_eq!(sol.basis, vec![vec![rat(-1), rat(1)]]);
        assert_eq!(sol.free_indices, vec![1]);
    }

    #[test]
    fn solve_inconsistent() {
        let a = mat(&[&[1, 0], &[1, 0]]);
        let err = solve_affine(&a, &[rat(0), rat(1)]).unwrap_err();
        assert!(matches!(err, ExactMathError::Inconsistent { .. }));
    }

    #[test]
    fn invert_identity_and_diagonal() {
        assert_eq!(invert(&Matrix::identity(3)).unwrap(), Matrix::identity(3));
        let d = Matrix::from_rows(vec![
            vec![rat(2), rat(0)],
            vec![rat(0), ratio(1, 3)],
        ]);
        let inv = invert(&d).unwrap();
        assert_eq!(inv[(0, 0)], ratio(1, 2));
        assert_eq!(inv[(1, 1)], rat(3));
        assert_eq!(d.mul(&inv), Matrix::identity(2));
    }

    #[test]
    fn invert_singular() {
        let a = mat(&[&[1, 2], &[2, 4]]);
        assert_eq!(invert(&a).unwrap_err(), ExactMathError::Singular);
    }

    #[test]
    fn eigenvalues_identity() {
        let eig = rational_eigenvalues(&Matrix::identity(4)).unwrap();
        assert_eq!(eig, vec![(rat(1), 4)]);
    }

    #[test]
    fn eigenvalues_irrational() {
        let a = mat(&[&[0, 2], &[1, 0]]);
        assert_eq!(
            rational_eigenvalues(&a).unwrap_err(),
            ExactMathError::IrrationalSpectrum { residual_degree: 2 }
        );
    }

    #[test]
    fn eigenvalues_tridiagonal_dual_of_h42() {
        // Dual intersection matrix of the Krein array {4,3,2,1;1,2,3,4}.
        let l1 = mat(&[
            &[0, 4, 0, 0, 0],
            &[1, 0, 3, 0, 0],
            &[0, 2, 0, 2, 0],
            &[0, 0, 3, 0, 1],
            &[0, 0, 0, 4, 0],
        ]);
        let eig = rational_eigenvalues(&l1).unwrap();
        let expect: Vec<(Rat, usize)> =
            [4, 2, 0, -2, -4].iter().map(|&v| (rat(v), 1)).collect();
        assert_eq!(eig, expect);
    }

    #[test]
    fn eigenvalues_with_rational_entries() {
        let a = Matrix::from_rows(vec![
            vec![ratio(1, 2), rat(0)],
            vec![rat(0), ratio(-3, 4)],
        ]);
        let eig = rational_eigenvalues(&a).unwrap();
        assert_eq!(eig, vec![(ratio(1, 2), 1), (ratio(-3, 4), 1)]);
    }

    #[test]
    fn char_poly_2x2() {
        // x^2 - 5x + 1 for [[1,3],[1,4]].
        let a = mat(&[&[1, 3], &[1, 4]]);
        assert_eq!(char_poly(&a), vec![rat(1), rat(-5), rat(1)]);
    }

    #[test]
    fn solution_space_substitutes_exactly() {
        let a = mat(&[&[2, 3, 5], &[1, 0, 4]]);
        let b = vec![rat(7), rat(9)];
        let sol = solve_affine(&a, &b).unwrap();
        assert_eq!(a.mul_vec(&sol.particular), b);
        for v in &sol.basis {
            let shifted: Vec<Rat> = sol
                .particular
                .iter()
                .zip(v)
                .map(|(p, d)| p + d)
                .collect();
            assert_eq!(a.mul_vec(&shifted), b);
        }
    }

    #[test]
    fn divisor_enumeration() {
        let divs = divisors(&BigUint::from(12u32));
        let expect: Vec<BigUint> =
            [1u32, 2, 3, 4, 6, 12].iter().map(|&x| BigUint::from(x)).collect();
        assert_eq!(divs, expect);
    }

    #[test]
    fn rational_root_extraction() {
        // (x - 1/2)(x + 3)^2 = x^3 + 11/2 x^2 + 6x - 9/2
        let poly = vec![ratio(-9, 2), rat(6), ratio(11, 2), rat(1)];
        let (roots, residual) = rational_roots(&poly);
        assert_eq!(residual, 0);
        let mut roots = roots;
        roots.sort_by(|(a, _), (b, _)| a.cmp(b));
        assert_eq!(roots, vec![(rat(-3), 2), (ratio(1, 2), 1)]);
    }
}
