//! Krawtchouk machinery for the Hamming scheme H(n, q): the Rao bound,
//! design strength, integral-zero tests, congruence filters, and the
//! analytic parameters of fiber subschemes.

use crate::designs::PointSet;
use crate::exactmath::{invert, is_nonneg_integer, rat, solve_affine, Matrix, Rat};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum HammingError {
    /// The transform-based and counting-based strengths disagree, which
    /// signals an implementation bug rather than bad input.
    #[error("strength oracle mismatch: transform gives {transform}, direct counting gives {direct}")]
    OracleMismatch { transform: usize, direct: usize },
    #[error("degree set must contain two distinct distances")]
    DegenerateDegreeSet,
    #[error("fiber parameters need strength >= 2, got {strength}")]
    InsufficientStrength { strength: usize },
    #[error("non-integral fiber parameters: {what} = {value}")]
    NonIntegral { what: String, value: Rat },
    #[error("inner distribution is inconsistent: {reason}")]
    InconsistentDistribution { reason: String },
}

/// Word length and alphabet size of a Hamming scheme H(n, q).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HammingContext {
    pub n: usize,
    pub q: usize,
}

impl HammingContext {
    pub fn new(n: usize, q: usize) -> Self {
        assert!(q >= 2, "alphabet size must be at least 2");
        assert!(n >= 1, "word length must be at least 1");
        HammingContext { n, q }
    }
}

/// Binomial coefficient C(x, k) in the polynomial (falling factorial)
/// sense, valid for any integer x.
pub fn binomial(x: i64, k: usize) -> BigInt {
    let mut num = BigInt::one();
    for j in 0..k {
        num *= BigInt::from(x) - BigInt::from(j as i64);
    }
    let mut den = BigInt::one();
    for j in 1..=k {
        den *= BigInt::from(j as i64);
    }
    num / den
}

/// Krawtchouk polynomial value
/// K_{n,q,i}(x) = sum_j (-1)^j (q-1)^{i-j} C(x, j) C(n-x, i-j).
pub fn krawtchouk(n: usize, q: usize, i: usize, x: i64) -> BigInt {
    assert!(i <= n, "degree must satisfy 0 <= i <= n");
    let qm1 = BigInt::from(q as i64 - 1);
    let mut sum = BigInt::zero();
    for j in 0..=i {
        let mut term = qm1.pow((i - j) as u32);
        term *= binomial(x, j);
        term *= binomial(n as i64 - x, i - j);
        if j % 2 == 1 {
            term = -term;
        }
        sum += term;
    }
    sum
}

/// Rao bound: the minimum size of a strength-2e orthogonal array over
/// H(n, q), namely sum_{k<=e} C(n,k) (q-1)^k.
pub fn rao_bound(n: usize, q: usize, e: usize) -> BigInt {
    assert!(e <= n);
    let qm1 = BigInt::from(q as i64 - 1);
    (0..=e)
        .map(|k| binomial(n as i64, k) * qm1.pow(k as u32))
        .fold(BigInt::zero(), |acc, t| acc + t)
}

/// Distance-frequency data of a point set: a_j is the average number of
/// ordered codeword pairs at distance j per codeword.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InnerDistribution {
    pub a: Vec<Rat>,
    pub degree_set: Vec<usize>,
    pub size: usize,
}

impl InnerDistribution {
    pub fn degree(&self) -> usize {
        self.degree_set.len()
    }
}

/// Counts ordered pairs at each distance and divides by |C|.
pub fn inner_distribution(c: &PointSet) -> InnerDistribution {
    let n = c.context().n;
    let size = c.len();
    let mut counts = vec![0u64; n + 1];
    for i in 0..size {
        for j in 0..size {
            counts[c.distance(i, j)] += 1;
        }
    }
    let a: Vec<Rat> = counts
        .iter()
        .map(|&cnt| Rat::new(BigInt::from(cnt), BigInt::from(size as i64)))
        .collect();
    let degree_set = (1..=n).filter(|&j| !a[j].is_zero()).collect();
    InnerDistribution {
        a,
        degree_set,
        size,
    }
}

/// Dual distribution B_k = sum_j a_j K_{n,q,k}(j) for k = 0..n.
pub fn dual_distribution(c: &PointSet) -> Vec<Rat> {
    let HammingContext { n, q } = *c.context();
    let inner = inner_distribution(c);
    (0..=n)
        .map(|k| {
            (0..=n)
                .map(|j| &inner.a[j] * Rat::from_integer(krawtchouk(n, q, k, j as i64)))
                .fold(Rat::zero(), |acc, t| acc + t)
        })
        .collect()
}

/// Largest t such that B_1 = ... = B_t = 0 in the dual distribution,
/// cross-checked against direct column-projection counting for t <= cap.
pub fn design_strength_capped(c: &PointSet, cap: usize) -> Result<usize, HammingError> {
    let duals = dual_distribution(c);
    let n = c.context().n;
    let transform = (1..=n).take_while(|&k| duals[k].is_zero()).count();
    let direct = direct_strength(c, cap);
    let expected = transform.min(cap.min(n));
    if direct != expected {
        return Err(HammingError::OracleMismatch {
            transform: expected,
            direct,
        });
    }
    Ok(transform)
}

/// Design strength with the default direct-verification cap of 4.
pub fn design_strength(c: &PointSet) -> Result<usize, HammingError> {
    design_strength_capped(c, 4)
}

/// Largest t <= cap such that every t-subset of columns carries all q^t
/// patterns equally often.
fn direct_strength(c: &PointSet, cap: usize) -> usize {
    let HammingContext { n, q } = *c.context();
    let size = c.len();
    for t in 1..=cap.min(n) {
        let patterns = q.pow(t as u32);
        if size % patterns != 0 {
            return t - 1;
        }
        let expected = size / patterns;
        let mut balanced = true;
        for_each_combination(n, t, &mut |cols| {
            if !balanced {
                return;
            }
            let mut counts = vec![0usize; patterns];
            for w in 0..size {
                let mut idx = 0usize;
                for &col in cols {
                    idx = idx * q + c.word(w)[col] as usize;
                }
                counts[idx] += 1;
            }
            if counts.iter().any(|&cnt| cnt != expected) {
                balanced = false;
            }
        });
        if !balanced {
            return t - 1;
        }
    }
    cap.min(n)
}

fn for_each_combination(n: usize, t: usize, f: &mut impl FnMut(&[usize])) {
    let mut combo: Vec<usize> = (0..t).collect();
    loop {
        f(&combo);
        // Advance to the next combination in lexicographic order.
        let mut i = t;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if combo[i] != i + n - t {
                break;
            }
            if i == 0 {
                return;
            }
        }
        combo[i] += 1;
        for j in i + 1..t {
            combo[j] = combo[j - 1] + 1;
        }
    }
}

/// Integral zeros of sum_{j<=e} K_{n,q,j}(x) in [1, n], plus a flag that
/// exactly e were found (necessary for a tight 2e-design to exist).
pub fn wilson_zeros(n: usize, q: usize, e: usize) -> (Vec<usize>, bool) {
    assert!((1..=n).contains(&e));
    let zeros: Vec<usize> = (1..=n)
        .filter(|&x| {
            (0..=e)
                .map(|j| krawtchouk(n, q, j, x as i64))
                .fold(BigInt::zero(), |acc, t| acc + t)
                .is_zero()
        })
        .collect();
    let exact = zeros.len() == e;
    (zeros, exact)
}

/// Outcome of the congruence filter for the residual q = 6 family of
/// tight strength-4 arrays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodaVerdict {
    pub a: u64,
    pub mod3_ok: bool,
    pub mod5_ok: bool,
    pub mod16_ok: bool,
    pub n_integral: bool,
    /// Implied (|C|, n, q) when every condition passes.
    pub implied: Option<(BigInt, u64, u64)>,
}

impl NodaVerdict {
    pub fn passes(&self) -> bool {
        self.mod3_ok && self.mod5_ok && self.mod16_ok && self.n_integral
    }
}

/// Checks a = 0 (mod 3), a = +-1 (mod 5), a = 5 (mod 16) and the
/// integrality of n = (9a^2+1)/5; reports the implied parameter triple
/// (9a^2(9a^2-1)/2, (9a^2+1)/5, 6) when all pass.
pub fn noda_congruences(a: u64) -> NodaVerdict {
    assert!(a >= 1);
    let mod3_ok = a % 3 == 0;
    let mod5_ok = a % 5 == 1 || a % 5 == 4;
    let mod16_ok = a % 16 == 5;
    let nine_a2 = BigInt::from(9u64) * BigInt::from(a) * BigInt::from(a);
    let n_num = &nine_a2 + BigInt::one();
    let n_integral = (&n_num % BigInt::from(5u64)).is_zero();
    let implied = if mod3_ok && mod5_ok && mod16_ok && n_integral {
        let size = (&nine_a2 * (&nine_a2 - BigInt::one())) / BigInt::from(2u64);
        let n: u64 = (&n_num / BigInt::from(5u64)).try_into().expect("n fits u64");
        Some((size, n, 6))
    } else {
        None
    };
    NodaVerdict {
        a,
        mod3_ok,
        mod5_ok,
        mod16_ok,
        n_integral,
        implied,
    }
}

/// Strongly-regular-graph parameters (v, k, lambda, mu).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SrgParams {
    pub v: BigInt,
    pub k: BigInt,
    pub lambda: BigInt,
    pub mu: BigInt,
}

/// Analytic parameters of a degree-2 fiber subscheme: the inner
/// distribution from the moment system and the strongly-regular
/// parameters of both distance graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberParams {
    pub alphas: (usize, usize),
    /// (a_{alpha1}, a_{alpha2}).
    pub inner: (BigInt, BigInt),
    /// Parameters of the distance-alpha1 and distance-alpha2 graphs.
    pub srg: [SrgParams; 2],
}

/// Solves the two-equation moment system for the inner distribution of a
/// strength >= 2, degree-2 subset of H(n, q) of the given size, then
/// recovers the eigenvalues of both distance graphs from the 3x3 dual
/// matrix and returns their strongly-regular parameters.
pub fn fiber_subscheme_params(
    n: usize,
    q: usize,
    size: usize,
    alphas: (usize, usize),
    strength: usize,
) -> Result<FiberParams, HammingError> {
    let (a1, a2) = alphas;
    if a1 == a2 || a1 == 0 || a2 == 0 || a1 > n || a2 > n {
        return Err(HammingError::DegenerateDegreeSet);
    }
    if strength < 2 {
        return Err(HammingError::InsufficientStrength { strength });
    }
    let kraw = |k: usize, x: usize| Rat::from_integer(krawtchouk(n, q, k, x as i64));
    // sum_j a_{alpha_j} K_k(alpha_j) = -K_k(0) for k = 1, 2.
    let coeff = Matrix::from_rows(vec![
        vec![kraw(1, a1), kraw(1, a2)],
        vec![kraw(2, a1), kraw(2, a2)],
    ]);
    let rhs = vec![-kraw(1, 0), -kraw(2, 0)];
    let sol = solve_affine(&coeff, &rhs).map_err(|_| HammingError::InconsistentDistribution {
        reason: "moment system is inconsistent".into(),
    })?;
    if sol.dimension() != 0 {
        return Err(HammingError::InconsistentDistribution {
            reason: "moment system is underdetermined".into(),
        });
    }
    let (va1, va2) = (sol.particular[0].clone(), sol.particular[1].clone());
    for (what, v) in [("a_alpha1", &va1), ("a_alpha2", &va2)] {
        if !is_nonneg_integer(v) {
            return Err(HammingError::NonIntegral {
                what: what.into(),
                value: v.clone(),
            });
        }
    }
    let total = &va1 + &va2;
    if total != rat(size as i64 - 1) {
        return Err(HammingError::InconsistentDistribution {
            reason: format!("a_alpha1 + a_alpha2 = {total}, expected {}", size - 1),
        });
    }

    // f(z) = |C| (1 - z/alpha1)(1 - z/alpha2) - K_0(z) - K_1(z).
    let f = |z: usize| -> Rat {
        let zr = rat(z as i64);
        let prod = (Rat::one() - &zr / rat(a1 as i64)) * (Rat::one() - &zr / rat(a2 as i64));
        rat(size as i64) * prod - kraw(0, z) - kraw(1, z)
    };
    let dual = Matrix::from_rows(vec![
        vec![Rat::one(), kraw(1, 0), f(0)],
        vec![Rat::one(), kraw(1, a1), f(a1)],
        vec![Rat::one(), kraw(1, a2), f(a2)],
    ]);
    let p = invert(&dual)
        .map_err(|_| HammingError::InconsistentDistribution {
            reason: "dual matrix is singular".into(),
        })?
        .scale(&rat(size as i64));

    let mut srg = Vec::with_capacity(2);
    for col in [1usize, 2] {
        let k = &p[(0, col)];
        let r = &p[(1, col)];
        let s = &p[(2, col)];
        let lambda = k + r + s + r * s;
        let mu = k + r * s;
        for (what, v) in [("k", k), ("lambda", &lambda), ("mu", &mu)] {
            if !is_nonneg_integer(v) {
                return Err(HammingError::NonIntegral {
                    what: format!("{what} of distance-{} graph", if col == 1 { a1 } else { a2 }),
                    value: v.clone(),
                });
            }
        }
        srg.push(SrgParams {
            v: BigInt::from(size),
            k: k.to_integer(),
            lambda: lambda.to_integer(),
            mu: mu.to_integer(),
        });
    }
    Ok(FiberParams {
        alphas,
        inner: (va1.to_integer(), va2.to_integer()),
        srg: [srg[0].clone(), srg[1].clone()],
    })
}
