//! Association-scheme parameter sets derived from Krein arrays.
//!
//! A Krein array determines the dual intersection matrix L1*, whose
//! rational spectrum gives the dual eigenvalues. Evaluating the dual
//! polynomials at those eigenvalues yields the second eigenmatrix Q, from
//! which the first eigenmatrix P, valencies, multiplicities, intersection
//! numbers and Krein parameters all follow exactly.

use crate::exactmath::{
    invert, is_nonneg_integer, rat, rational_eigenvalues, ExactMathError, Matrix, Rat,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error(transparent)]
    Math(#[from] ExactMathError),
    /// L1* has a repeated eigenvalue; the derivation needs D+1 distinct
    /// dual eigenvalues.
    #[error("degenerate Krein array: repeated dual eigenvalue {eigenvalue}")]
    DegenerateArray { eigenvalue: Rat },
    #[error("invalid Krein array: {reason}")]
    InvalidArray { reason: String },
    #[error("cannot parse Krein array: {reason}")]
    Parse { reason: String },
}

/// The Krein array {b0*,...,b_{D-1}*; c1*,...,cD*} of a Q-polynomial
/// association scheme. All stored entries are positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KreinArray {
    b_star: Vec<Rat>,
    c_star: Vec<Rat>,
}

impl KreinArray {
    pub fn new(b_star: Vec<Rat>, c_star: Vec<Rat>) -> Result<Self, SchemeError> {
        if b_star.is_empty() || b_star.len() != c_star.len() {
            return Err(SchemeError::InvalidArray {
                reason: format!(
                    "need equally many b* and c* entries, got {} and {}",
                    b_star.len(),
                    c_star.len()
                ),
            });
        }
        for (name, list) in [("b*", &b_star), ("c*", &c_star)] {
            if let Some(pos) = list.iter().position(|x| !x.is_positive()) {
                return Err(SchemeError::InvalidArray {
                    reason: format!("{name} entry at position {pos} is not positive"),
                });
            }
        }
        Ok(KreinArray { b_star, c_star })
    }

    pub fn from_ints(b_star: &[i64], c_star: &[i64]) -> Result<Self, SchemeError> {
        KreinArray::new(
            b_star.iter().map(|&x| rat(x)).collect(),
            c_star.iter().map(|&x| rat(x)).collect(),
        )
    }

    /// Number of classes D.
    pub fn classes(&self) -> usize {
        self.b_star.len()
    }

    /// b_i* with the convention b_D* = 0.
    pub fn b(&self, i: usize) -> Rat {
        self.b_star.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    /// c_i* with the convention c_0* = 0.
    pub fn c(&self, i: usize) -> Rat {
        if i == 0 {
            Rat::zero()
        } else {
            self.c_star[i - 1].clone()
        }
    }

    /// a_i* = b0* - b_i* - c_i*.
    pub fn a(&self, i: usize) -> Rat {
        self.b(0) - self.b(i) - self.c(i)
    }

    /// The convention c1* = 1 is expected but not enforced.
    pub fn c1_is_unit(&self) -> bool {
        self.c(1).is_one()
    }

    /// The dual intersection matrix L1* with entry (k, j) = q_{1j}^k.
    pub fn dual_intersection_matrix(&self) -> Matrix {
        let d = self.classes();
        Matrix::from_fn(d + 1, d + 1, |k, j| {
            if j + 1 == k {
                self.c(k)
            } else if j == k {
                self.a(k)
            } else if j == k + 1 {
                self.b(k)
            } else {
                Rat::zero()
            }
        })
    }

    /// b_i* = c*_{D-i} for all i except possibly i = floor(D/2).
    pub fn is_q_antipodal(&self) -> bool {
        let d = self.classes();
        (0..d)
            .filter(|&i| i != d / 2)
            .all(|i| self.b(i) == self.c(d - i))
    }

    /// Parses the textual form `b0,b1,...;c1,c2,...` with integer or `p/q`
    /// entries.
    pub fn parse(text: &str) -> Result<Self, SchemeError> {
        let err = |reason: &str| SchemeError::Parse {
            reason: reason.to_string(),
        };
        let trimmed = text.trim().trim_start_matches('{').trim_end_matches('}');
        let (b_text, c_text) = trimmed
            .split_once(';')
            .ok_or_else(|| err("expected `b0,...;c1,...` with a semicolon"))?;
        let parse_list = |part: &str| -> Result<Vec<Rat>, SchemeError> {
            part.split(',')
                .map(|tok| {
                    let tok = tok.trim();
                    let (num, den) = match tok.split_once('/') {
                        Some((n, d)) => (n.trim(), Some(d.trim())),
                        None => (tok, None),
                    };
                    let n: BigInt = num
                        .parse()
                        .map_err(|_| err(&format!("bad entry `{tok}`")))?;
                    let d: BigInt = match den {
                        Some(d) => d.parse().map_err(|_| err(&format!("bad entry `{tok}`")))?,
                        None => BigInt::one(),
                    };
                    if d.is_zero() {
                        return Err(err(&format!("zero denominator in `{tok}`")));
                    }
                    Ok(Rat::new(n, d))
                })
                .collect()
        };
        KreinArray::new(parse_list(b_text)?, parse_list(c_text)?)
    }
}

impl fmt::Display for KreinArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Rat]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{};{}", join(&self.b_star), join(&self.c_star))
    }
}

/// The 4-class Q-antipodal Krein array attached to a tight 4-design in
/// H(n, q): {(n-1)(q-1), (n-2)(q-1), 2(q-1), 1; 1, 2, (n-2)(q-1), (n-1)(q-1)}.
pub fn qant4_krein_array(n: u64, q: u64) -> KreinArray {
    assert!(n >= 3 && q >= 2, "need n >= 3 and q >= 2");
    let (n, q) = (n as i64, q as i64);
    KreinArray::from_ints(
        &[(n - 1) * (q - 1), (n - 2) * (q - 1), 2 * (q - 1), 1],
        &[1, 2, (n - 2) * (q - 1), (n - 1) * (q - 1)],
    )
    .expect("entries are positive for n >= 3, q >= 2")
}

/// The one-parameter Krein array family {r^2-4, r^2-9, 10, 1; 1, 2, r^2-9,
/// r^2-4} scanned by the Noda pipeline. Fails for r <= 3 where entries
/// stop being positive.
pub fn noda_family_krein_array(r: u64) -> Result<KreinArray, SchemeError> {
    let r2 = rat(r as i64) * rat(r as i64);
    KreinArray::new(
        vec![&r2 - rat(4), &r2 - rat(9), rat(10), rat(1)],
        vec![rat(1), rat(2), &r2 - rat(9), &r2 - rat(4)],
    )
}

/// Cube of rationals indexed by three class indices in 0..=D.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor3 {
    dim: usize,
    data: Vec<Rat>,
}

impl Tensor3 {
    pub fn zeros(dim: usize) -> Self {
        Tensor3 {
            dim,
            data: vec![Rat::zero(); dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rat {
        &self.data[(i * self.dim + j) * self.dim + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: Rat) {
        self.data[(i * self.dim + j) * self.dim + k] = value;
    }

    /// Re-indexes by a permutation of 0..dim applied to all three axes.
    pub fn permuted(&self, perm: &[usize]) -> Tensor3 {
        assert_eq!(perm.len(), self.dim);
        let mut out = Tensor3::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    out.set(i, j, k, self.get(perm[i], perm[j], perm[k]).clone());
                }
            }
        }
        out
    }
}

/// Full parameter set of a D-class association scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeParameters {
    classes: usize,
    vertex_count: Rat,
    /// Second eigenmatrix; rows index relations/dual eigenvalues, columns
    /// index primitive idempotents.
    q: Matrix,
    /// First eigenmatrix, P = |X| Q^{-1}.
    p: Matrix,
    valencies: Vec<Rat>,
    multiplicities: Vec<Rat>,
    intersection_numbers: Tensor3,
    krein_parameters: Tensor3,
}

impl SchemeParameters {
    /// Derives the full parameter set from a Krein array.
    ///
    /// The dual eigenvalues are ordered with theta_0* = b0* first and the
    /// rest strictly descending, matching the natural row order of the Q
    /// matrices attached to Q-antipodal 4-class schemes.
    pub fn from_krein_array(ka: &KreinArray) -> Result<Self, SchemeError> {
        let d = ka.classes();
        let l1 = ka.dual_intersection_matrix();
        let eig = rational_eigenvalues(&l1)?;
        if let Some((value, _)) = eig.iter().find(|(_, m)| *m > 1) {
            return Err(SchemeError::DegenerateArray {
                eigenvalue: value.clone(),
            });
        }
        let b0 = ka.b(0);
        let mut thetas: Vec<Rat> = eig.into_iter().map(|(v, _)| v).collect();
        let Some(pos) = thetas.iter().position(|t| *t == b0) else {
            return Err(SchemeError::InvalidArray {
                reason: "b0* is not a dual eigenvalue of L1*".into(),
            });
        };
        thetas.remove(pos);
        thetas.sort_by(|x, y| y.cmp(x));
        thetas.insert(0, b0);

        // Q_{ji} = v_i*(theta_j*) by the three-term recurrence
        // c_{i+1}* v_{i+1} = (x - a_i*) v_i - b_{i-1}* v_{i-1}.
        let q = Matrix::from_rows(
            thetas
                .iter()
                .map(|theta| {
                    let mut row = vec![Rat::one()];
                    if d >= 1 {
                        row.push(theta / ka.c(1));
                    }
                    for i in 1..d {
                        let next = ((theta - ka.a(i)) * &row[i] - ka.b(i - 1) * &row[i - 1])
                            / ka.c(i + 1);
                        row.push(next);
                    }
                    row
                })
                .collect(),
        );

        let vertex_count: Rat = q.row(0).iter().fold(Rat::zero(), |acc, x| acc + x);
        if !vertex_count.is_positive() {
            return Err(SchemeError::InvalidArray {
                reason: format!("derived vertex count {vertex_count} is not positive"),
            });
        }
        let p = invert(&q)?.scale(&vertex_count);
        Ok(SchemeParameters::from_eigenmatrices(p, q, vertex_count))
    }

    /// Assembles a parameter set from eigenmatrices satisfying
    /// P Q = |X| I with P_{0i} the valencies and Q_{0i} the
    /// multiplicities.
    pub(crate) fn from_eigenmatrices(p: Matrix, q: Matrix, vertex_count: Rat) -> Self {
        let classes = p.rows() - 1;
        let valencies: Vec<Rat> = p.row(0).to_vec();
        let multiplicities: Vec<Rat> = q.row(0).to_vec();
        let dim = classes + 1;
        let mut p_cube = Tensor3::zeros(dim);
        let mut q_cube = Tensor3::zeros(dim);
        for i in 0..dim {
            for j in 0..=i {
                for k in 0..dim {
                    let mut p_sum = Rat::zero();
                    let mut q_sum = Rat::zero();
                    for l in 0..dim {
                        p_sum += &multiplicities[l] * &p[(l, i)] * &p[(l, j)] * &p[(l, k)];
                        q_sum += &valencies[l] * &q[(l, i)] * &q[(l, j)] * &q[(l, k)];
                    }
                    let p_val = p_sum / (&vertex_count * &valencies[k]);
                    let q_val = q_sum / (&vertex_count * &multiplicities[k]);
                    p_cube.set(i, j, k, p_val.clone());
                    p_cube.set(j, i, k, p_val);
                    q_cube.set(i, j, k, q_val.clone());
                    q_cube.set(j, i, k, q_val);
                }
            }
        }
        SchemeParameters {
            classes,
            vertex_count,
            q,
            p,
            valencies,
            multiplicities,
            intersection_numbers: p_cube,
            krein_parameters: q_cube,
        }
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn vertex_count(&self) -> &Rat {
        &self.vertex_count
    }

    pub fn second_eigenmatrix(&self) -> &Matrix {
        &self.q
    }

    pub fn first_eigenmatrix(&self) -> &Matrix {
        &self.p
    }

    pub fn valencies(&self) -> &[Rat] {
        &self.valencies
    }

    pub fn multiplicities(&self) -> &[Rat] {
        &self.multiplicities
    }

    pub fn intersection_number(&self, i: usize, j: usize, k: usize) -> &Rat {
        self.intersection_numbers.get(i, j, k)
    }

    pub fn krein_parameter(&self, i: usize, j: usize, k: usize) -> &Rat {
        self.krein_parameters.get(i, j, k)
    }

    /// Dual eigenvalues theta_j* = Q_{j1}.
    pub fn dual_eigenvalues(&self) -> Vec<Rat> {
        (0..=self.classes).map(|j| self.q[(j, 1)].clone()).collect()
    }

    /// Reads the Krein array back from the Krein parameter cube, provided
    /// L1* is tridiagonal with nonzero super- and subdiagonal in the
    /// stored idempotent order.
    pub fn krein_array_readback(&self) -> Option<KreinArray> {
        let d = self.classes;
        for k in 0..=d {
            for j in 0..=d {
                let v = self.krein_parameters.get(1, j, k);
                let in_band = j + 1 == k || j == k || k + 1 == j;
                if !in_band && !v.is_zero() {
                    return None;
                }
            }
        }
        let b: Vec<Rat> = (0..d)
            .map(|i| self.krein_parameters.get(1, i + 1, i).clone())
            .collect();
        let c: Vec<Rat> = (1..=d)
            .map(|i| self.krein_parameters.get(1, i - 1, i).clone())
            .collect();
        KreinArray::new(b, c).ok()
    }

    /// Checks the exact algebraic identities every parameter set must
    /// satisfy; returns the first failure as text.
    pub fn verify_algebraic_identities(&self) -> Result<(), String> {
        let d = self.classes;
        let n = &self.vertex_count;
        let pq = self.p.mul(&self.q);
        if pq != Matrix::identity(d + 1).scale(n) {
            return Err("P*Q != |X|*I".into());
        }
        for j in 0..=d {
            let sum: Rat = self.p.row(j).iter().fold(Rat::zero(), |acc, x| acc + x);
            let expect = if j == 0 { n.clone() } else { Rat::zero() };
            if sum != expect {
                return Err(format!("row sum of P row {j} is {sum}, expected {expect}"));
            }
        }
        if !self.valencies[0].is_one() || !self.multiplicities[0].is_one() {
            return Err("k_0 or m_0 differs from 1".into());
        }
        let ksum: Rat = self.valencies.iter().fold(Rat::zero(), |acc, x| acc + x);
        let msum: Rat = self.multiplicities.iter().fold(Rat::zero(), |acc, x| acc + x);
        if &ksum != n || &msum != n {
            return Err("valencies or multiplicities do not sum to |X|".into());
        }
        for i in 0..=d {
            for j in 0..=d {
                for k in 0..=d {
                    if self.intersection_numbers.get(i, j, k)
                        != self.intersection_numbers.get(j, i, k)
                    {
                        return Err(format!("p[{i}][{j}]^{k} is not symmetric"));
                    }
                    if self.krein_parameters.get(i, j, k) != self.krein_parameters.get(j, i, k) {
                        return Err(format!("q[{i}][{j}]^{k} is not symmetric"));
                    }
                    let lhs = &self.valencies[k] * self.intersection_numbers.get(i, j, k);
                    let rhs = &self.valencies[i] * self.intersection_numbers.get(k, j, i);
                    if lhs != rhs {
                        return Err(format!(
                            "triangle identity k_k p_{i}{j}^{k} = k_i p_{k}{j}^{i} fails"
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Per-condition feasibility checks with every violated entry listed.
    pub fn feasibility(&self) -> FeasibilityReport {
        let d = self.classes;
        let mut violations = Vec::new();
        if !is_nonneg_integer(&self.vertex_count) || self.vertex_count.is_zero() {
            violations.push(Violation::VertexCount {
                value: self.vertex_count.clone(),
            });
        }
        for (i, k) in self.valencies.iter().enumerate() {
            if !is_nonneg_integer(k) || k.is_zero() {
                violations.push(Violation::Valency {
                    index: i,
                    value: k.clone(),
                });
            }
        }
        for (i, m) in self.multiplicities.iter().enumerate() {
            if !is_nonneg_integer(m) || m.is_zero() {
                violations.push(Violation::Multiplicity {
                    index: i,
                    value: m.clone(),
                });
            }
        }
        for i in 0..=d {
            for j in 0..=d {
                for k in 0..=d {
                    let p = self.intersection_numbers.get(i, j, k);
                    if !is_nonneg_integer(p) {
                        violations.push(Violation::IntersectionNumber {
                            i,
                            j,
                            k,
                            value: p.clone(),
                        });
                    }
                    let q = self.krein_parameters.get(i, j, k);
                    if q.is_negative() {
                        violations.push(Violation::KreinParameter {
                            i,
                            j,
                            k,
                            value: q.clone(),
                        });
                    }
                }
            }
        }
        FeasibilityReport { violations }
    }

    /// All triples (i,j,k) != (0,0,0) with q_ij^k = 0, together with
    /// verification of the vanishing patterns forced by the Q-polynomial
    /// and (when applicable) Q-antipodal structure.
    pub fn krein_zeros(&self) -> KreinZeroReport {
        let d = self.classes;
        let mut zeros = Vec::new();
        for i in 0..=d {
            for j in 0..=d {
                for k in 0..=d {
                    if (i, j, k) == (0, 0, 0) {
                        continue;
                    }
                    if self.krein_parameters.get(i, j, k).is_zero() {
                        zeros.push((i, j, k));
                    }
                }
            }
        }
        let readback = self.krein_array_readback();
        let q_polynomial = readback.is_some();
        let q_antipodal = readback.as_ref().is_some_and(KreinArray::is_q_antipodal);
        let mut pattern_violations = Vec::new();
        if q_polynomial {
            for i in 0..=d {
                for j in 0..=d {
                    for k in 0..=d {
                        let forced_triangle = !triangle(i, j, k);
                        let forced_antipodal = q_antipodal
                            && i + j + k > 2 * d
                            && !triangle(d - i, d - j, d - k);
                        if (forced_triangle || forced_antipodal)
                            && !self.krein_parameters.get(i, j, k).is_zero()
                        {
                            pattern_violations.push((i, j, k));
                        }
                    }
                }
            }
        }
        KreinZeroReport {
            zeros,
            q_polynomial,
            q_antipodal,
            pattern_violations,
        }
    }
}

fn triangle(i: usize, j: usize, k: usize) -> bool {
    i + j >= k && j + k >= i && i + k >= j
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    VertexCount { value: Rat },
    Valency { index: usize, value: Rat },
    Multiplicity { index: usize, value: Rat },
    IntersectionNumber { i: usize, j: usize, k: usize, value: Rat },
    KreinParameter { i: usize, j: usize, k: usize, value: Rat },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::VertexCount { value } => {
                write!(f, "vertex count {value} is not a positive integer")
            }
            Violation::Valency { index, value } => {
                write!(f, "valency k_{index} = {value} is not a positive integer")
            }
            Violation::Multiplicity { index, value } => {
                write!(f, "multiplicity m_{index} = {value} is not a positive integer")
            }
            Violation::IntersectionNumber { i, j, k, value } => {
                write!(f, "p[{i},{j}]^{k} = {value} is not a nonnegative integer")
            }
            Violation::KreinParameter { i, j, k, value } => {
                write!(f, "q[{i},{j}]^{k} = {value} is negative")
            }
        }
    }
}

/// Outcome of the feasibility checks; empty violations means every
/// condition passed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn vertex_count_ok(&self) -> bool {
        !self
            .violations
            .iter()
            .any(|v| matches!(v, Violation::VertexCount { .. }))
    }

    pub fn valencies_ok(&self) -> bool {
        !self
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Valency { .. }))
    }

    pub fn multiplicities_ok(&self) -> bool {
        !self
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Multiplicity { .. }))
    }

    pub fn intersection_numbers_ok(&self) -> bool {
        !self
            .violations
            .iter()
            .any(|v| matches!(v, Violation::IntersectionNumber { .. }))
    }

    pub fn krein_nonnegative(&self) -> bool {
        !self
            .violations
            .iter()
            .any(|v| matches!(v, Violation::KreinParameter { .. }))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KreinZeroReport {
    /// Triples (i,j,k) != (0,0,0) with q_ij^k exactly zero.
    pub zeros: Vec<(usize, usize, usize)>,
    /// Whether L1* read back from the cube is tridiagonal.
    pub q_polynomial: bool,
    /// Whether the read-back Krein array is Q-antipodal.
    pub q_antipodal: bool,
    /// Triples the vanishing patterns force to zero but that are nonzero.
    pub pattern_violations: Vec<(usize, usize, usize)>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamming::krawtchouk;

    #[test]
    fn qant4_examples() {
        assert_eq!(
            qant4_krein_array(5, 2),
            KreinArray::from_ints(&[4, 3, 2, 1], &[1, 2, 3, 4]).unwrap()
        );
        assert_eq!(
            qant4_krein_array(11, 3),
            KreinArray::from_ints(&[20, 18, 4, 1], &[1, 2, 18, 20]).unwrap()
        );
        // (r^2+1)/5 is integral at r = 7; the array matches the general family.
        assert_eq!(qant4_krein_array(10, 6), noda_family_krein_array(7).unwrap());
    }

    #[test]
    fn qant4_is_q_antipodal() {
        for (n, q) in [(5u64, 2u64), (11, 3), (10, 6), (34, 6)] {
            assert!(qant4_krein_array(n, q).is_q_antipodal());
        }
    }

    #[test]
    fn h42_parameters_match_krawtchouk_matrix() {
        let ka = KreinArray::from_ints(&[4, 3, 2, 1], &[1, 2, 3, 4]).unwrap();
        let sp = SchemeParameters::from_krein_array(&ka).unwrap();
        assert_eq!(sp.vertex_count(), &rat(16));
        let expected = Matrix::from_fn(5, 5, |j, i| {
            Rat::from_integer(krawtchouk(4, 2, i, j as i64))
        });
        assert_eq!(sp.second_eigenmatrix(), &expected);
        assert!(sp.feasibility().passed());
        sp.verify_algebraic_identities().unwrap();
    }

    #[test]
    fn noda_family_r9() {
        let ka = noda_family_krein_array(9).unwrap();
        assert_eq!(
            ka,
            KreinArray::from_ints(&[77, 72, 10, 1], &[1, 2, 72, 77]).unwrap()
        );
        let sp = SchemeParameters::from_krein_array(&ka).unwrap();
        assert_eq!(sp.vertex_count(), &rat(3240));
        let mults: Vec<Rat> = sp.multiplicities().to_vec();
        assert_eq!(mults, vec![rat(1), rat(77), rat(2772), rat(385), rat(5)]);
        assert_eq!(sp.intersection_number(1, 1, 1), &rat(400));
        assert!(sp.feasibility().passed());
    }

    #[test]
    fn noda_family_r5_feasible_r6_not() {
        let sp5 =
            SchemeParameters::from_krein_array(&noda_family_krein_array(5).unwrap()).unwrap();
        assert!(sp5.feasibility().passed());
        let sp6 =
            SchemeParameters::from_krein_array(&noda_family_krein_array(6).unwrap()).unwrap();
        let report = sp6.feasibility();
        assert!(!report.passed());
        assert!(report.violations.iter().any(|v| matches!(
            v,
            Violation::IntersectionNumber { .. } | Violation::Multiplicity { .. }
        )));
    }

    #[test]
    fn krein_readback_reproduces_input() {
        for ka in [
            qant4_krein_array(5, 2),
            qant4_krein_array(11, 3),
            noda_family_krein_array(9).unwrap(),
        ] {
            let sp = SchemeParameters::from_krein_array(&ka).unwrap();
            assert_eq!(sp.krein_array_readback().unwrap(), ka);
        }
    }

    #[test]
    fn krein_zeros_h42() {
        let sp = SchemeParameters::from_krein_array(&qant4_krein_array(5, 2)).unwrap();
        let report = sp.krein_zeros();
        assert!(report.zeros.contains(&(1, 1, 3)));
        assert!(report.zeros.contains(&(1, 1, 4)));
        assert!(report.q_polynomial);
        assert!(report.q_antipodal);
        assert!(report.pattern_violations.is_empty());
    }

    #[test]
    fn krein_zeros_noda_family() {
        let sp =
            SchemeParameters::from_krein_array(&noda_family_krein_array(9).unwrap()).unwrap();
        let report = sp.krein_zeros();
        for k in 1..=3 {
            assert!(report.zeros.contains(&(4, 4, k)));
        }
        assert!(report.q_antipodal);
        assert!(report.pattern_violations.is_empty());
    }

    #[test]
    fn krein_zeros_complete_graph() {
        // 1-class scheme on 5 vertices: Krein array {4; 1}.
        let ka = KreinArray::from_ints(&[4], &[1]).unwrap();
        let sp = SchemeParameters::from_krein_array(&ka).unwrap();
        assert_eq!(sp.vertex_count(), &rat(5));
        let report = sp.krein_zeros();
        // Only the triangle-forced zeros remain.
        let mut zeros = report.zeros.clone();
        zeros.sort();
        assert_eq!(zeros, vec![(0, 0, 1), (0, 1, 0), (1, 0, 0)]);
        assert!(report.pattern_violations.is_empty());
    }

    #[test]
    fn irrational_spectrum_rejected() {
        // qant4 at (4,2): d^2 = 4 + 8 = 12 is not a perfect square.
        let ka = qant4_krein_array(4, 2);
        match SchemeParameters::from_krein_array(&ka) {
            Err(SchemeError::Math(ExactMathError::IrrationalSpectrum { .. })) => {}
            other => panic!("expected irrational spectrum, got {other:?}"),
        }
    }

    #[test]
    fn parse_round_trip() {
        let ka = KreinArray::parse("77,72,10,1;1,2,72,77").unwrap();
        assert_eq!(ka, noda_family_krein_array(9).unwrap());
        assert_eq!(KreinArray::parse(&ka.to_string()).unwrap(), ka);
        assert!(KreinArray::parse("1,2;3").is_err());
        assert!(KreinArray::parse("4,0,2,1;1,2,3,4").is_err());
    }
}
