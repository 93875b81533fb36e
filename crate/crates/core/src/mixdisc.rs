//! Mixed discriminants by polarization of the determinant, and the
//! constructions built from them.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::mixvol::factorial;
use crate::par::{map_range, Execution};
use crate::report::InequalityReport;
use crate::scalar::{Rational, Scalar};
use crate::spectral::{is_pd, is_psd, OperatorPair};

/// Asymmetry tolerated in floating-point arguments, relative to the largest entry.
const FLOAT_SYMMETRY_TOL: f64 = 1e-12;

/// Largest dimension accepted; polarization costs 2^m determinants.
pub const MAX_DIM: usize = 16;

fn check_list<T: Scalar>(mats: &[Matrix<T>]) -> Result<usize> {
    let m = mats.len();
    if m == 0 {
        return Err(Error::input("no matrices given"));
    }
    if m > MAX_DIM {
        return Err(Error::input(format!("dimension {m} exceeds the limit of {MAX_DIM}")));
    }
    for (k, a) in mats.iter().enumerate() {
        if a.rows() != m || a.cols() != m {
            return Err(Error::input(format!(
                "{m} arguments need {m}×{m} matrices, argument {k} is {}×{}",
                a.rows(),
                a.cols()
            )));
        }
        if !a.is_symmetric(FLOAT_SYMMETRY_TOL) {
            return Err(Error::input(format!("argument {k} is not symmetric")));
        }
    }
    Ok(m)
}

pub fn mixed_discriminant<T: Scalar>(mats: &[Matrix<T>]) -> Result<T> {
    mixed_discriminant_with(Execution::default(), mats)
}

/// D(M₁,…,Mₘ) = (1/m!) Σ_{S⊆[m]} (−1)^{m−|S|} det(Σ_{i∈S} Mᵢ).
pub fn mixed_discriminant_with<T: Scalar>(exec: Execution, mats: &[Matrix<T>]) -> Result<T> {
    let m = check_list(mats)?;
    if !T::EXACT {
        // Multilinear, so unit-size arguments cut cancellation in the alternating sum.
        let scales: Vec<T> = mats.iter().map(|a| power_of_two_near(a.max_abs())).collect();
        if scales.iter().any(|s| !s.is_one()) {
            let unit: Vec<Matrix<T>> = mats.iter().zip(&scales).map(|(a, s)| a.scale(&(T::one() / s.clone()))).collect();
            let d = polarize(exec, &unit, m);
            return Ok(scales.into_iter().fold(d, |acc, s| acc * s));
        }
    }
    Ok(polarize(exec, mats, m))
}

fn polarize<T: Scalar>(exec: Execution, mats: &[Matrix<T>], m: usize) -> T {
    let terms = map_range(exec, 1usize << m, |mask| {
        if mask == 0 {
            // det of the empty sum (the zero matrix) vanishes for m ≥ 1.
            return T::zero();
        }
        let mut sum = Matrix::zeros(m, m);
        for (i, a) in mats.iter().enumerate() {
            if mask >> i & 1 == 1 {
                sum = sum.add(a);
            }
        }
        let det = sum.determinant();
        if (m - mask.count_ones() as usize) % 2 == 1 {
            -det
        } else {
            det
        }
    });
    let total = terms.into_iter().fold(T::zero(), |acc, t| acc + t);
    total / factorial_scalar::<T>(m)
}

/// 2^k nearest to `x` in log scale, 1 for zero or non-finite `x`.
fn power_of_two_near<T: Scalar>(x: f64) -> T {
    if x == 0.0 || !x.is_finite() {
        return T::one();
    }
    let k = x.log2().round().clamp(-62.0, 62.0) as i32;
    let p = T::from_i64(1i64 << k.unsigned_abs());
    if k >= 0 { p } else { T::one() / p }
}

fn factorial_scalar<T: Scalar>(m: usize) -> T {
    (1..=m as i64).fold(T::one(), |acc, k| acc * T::from_i64(k))
}

/// Both sides of D(eᵢeᵢᵀ, M₂,…,Mₘ) = (1/m)·D(M₂^⟨i⟩,…,Mₘ^⟨i⟩).
#[derive(Debug, Clone, PartialEq)]
pub struct MinorIdentity<T> {
    pub lhs: T,
    pub rhs: T,
}

/// `mats` holds the m − 1 matrices M₂,…,Mₘ of dimension m.
pub fn md_minor_identity<T: Scalar>(i: usize, mats: &[Matrix<T>]) -> Result<MinorIdentity<T>> {
    let m = mats.len() + 1;
    if m < 2 {
        return Err(Error::input("the minor identity needs m ≥ 2"));
    }
    if i >= m {
        return Err(Error::input(format!("index {i} out of range for dimension {m}")));
    }
    let mut e = vec![T::zero(); m];
    e[i] = T::one();
    let mut full = vec![Matrix::outer(&e)];
    full.extend(mats.iter().cloned());
    let lhs = mixed_discriminant(&full)?;
    let minors: Vec<Matrix<T>> = mats.iter().map(|a| a.minor(i)).collect();
    let reduced = if minors.is_empty() { T::one() } else { mixed_discriminant(&minors)? };
    Ok(MinorIdentity { lhs, rhs: reduced / T::from_i64(m as i64) })
}

fn require_psd<T: Scalar>(name: &str, a: &Matrix<T>) -> Result<()> {
    if is_psd(&a.to_f64())? {
        Ok(())
    } else {
        Err(Error::precondition(format!("{name} is not positive semidefinite")))
    }
}

/// D(A,B,M…)² ≥ D(A,A,M…)·D(B,B,M…) for symmetric A and positive
/// semidefinite B, M…; `ms` holds m − 2 matrices.
pub fn verify_alexandrov<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, ms: &[Matrix<T>], tol: f64) -> Result<InequalityReport> {
    let m = a.rows();
    if m < 2 {
        return Err(Error::input("Alexandrov's inequality needs dimension at least 2"));
    }
    if ms.len() + 2 != m {
        return Err(Error::input(format!("dimension {m} needs {} further matrices, got {}", m - 2, ms.len())));
    }
    let with = |x: &Matrix<T>, y: &Matrix<T>| {
        let mut args = vec![x.clone(), y.clone()];
        args.extend(ms.iter().cloned());
        args
    };
    // Shape and symmetry checks first so that errors name the real problem.
    check_list(&with(a, b))?;
    require_psd("B", b)?;
    for (k, mk) in ms.iter().enumerate() {
        require_psd(&format!("M{}", k + 1), mk)?;
    }
    let ab = mixed_discriminant(&with(a, b))?;
    let aa = mixed_discriminant(&with(a, a))?;
    let bb = mixed_discriminant(&with(b, b))?;
    let lhs = ab.clone() * ab;
    let rhs = aa * bb;
    Ok(InequalityReport::from_reals(lhs.into_real(), rhs.into_real(), tol))
}

/// Operator on Rⁿ with (Ay)ᵢ = D(diag(y)^⟨i⟩, I^⟨i⟩, M^⟨i⟩…) / D(I^⟨i⟩, I^⟨i⟩, M^⟨i⟩…)
/// and weights pᵢ = D(I^⟨i⟩, I^⟨i⟩, M^⟨i⟩…)/n, for n − 3 positive definite
/// n×n matrices `ms`.
///
/// Built column by column from the basis vectors; the result satisfies A1 = 1,
/// is self-adjoint on ℓ²(p) and has positive off-diagonal entries.
pub fn diagonal_operator<T: Scalar>(n: usize, ms: &[Matrix<T>]) -> Result<OperatorPair<T>> {
    diagonal_operator_with(Execution::default(), n, ms)
}

pub fn diagonal_operator_with<T: Scalar>(exec: Execution, n: usize, ms: &[Matrix<T>]) -> Result<OperatorPair<T>> {
    if n < 3 {
        return Err(Error::input("the diagonal operator needs n ≥ 3"));
    }
    if ms.len() + 3 != n {
        return Err(Error::input(format!("n = {n} needs {} matrices, got {}", n - 3, ms.len())));
    }
    for (k, mk) in ms.iter().enumerate() {
        if mk.rows() != n || mk.cols() != n {
            return Err(Error::input(format!("matrix {k} is not {n}×{n}")));
        }
        if !mk.is_symmetric(FLOAT_SYMMETRY_TOL) {
            return Err(Error::input(format!("matrix {k} is not symmetric")));
        }
        if !is_pd(&mk.to_f64())? {
            return Err(Error::precondition(format!("matrix {k} is not positive definite")));
        }
    }
    let id = Matrix::<T>::identity(n - 1);
    let rows = map_range(exec, n, |i| -> Result<(Vec<T>, T)> {
        let minors: Vec<Matrix<T>> = ms.iter().map(|mk| mk.minor(i)).collect();
        let args = |first: Matrix<T>| {
            let mut v = vec![first, id.clone()];
            v.extend(minors.iter().cloned());
            v
        };
        let denom = mixed_discriminant_with(Execution::Sequential, &args(id.clone()))?;
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            if j == i {
                row.push(T::zero());
                continue;
            }
            // diag(e_j) with row/column i removed.
            let k = if j < i { j } else { j - 1 };
            let mut e = vec![T::zero(); n - 1];
            e[k] = T::one();
            let value = mixed_discriminant_with(Execution::Sequential, &args(Matrix::from_diag(&e)))?;
            row.push(value / denom.clone());
        }
        Ok((row, denom / T::from_i64(n as i64)))
    });
    let mut a = Matrix::zeros(n, n);
    let mut p = Vec::with_capacity(n);
    for (i, r) in rows.into_iter().enumerate() {
        let (row, weight) = r?;
        for (j, v) in row.into_iter().enumerate() {
            a[(i, j)] = v;
        }
        p.push(weight);
    }
    OperatorPair::new(a, p)
}

/// D(A,I,…,I) against Tr A / k and D(A,A,I,…,I) against
/// (Tr[A]² − Tr[A²]) / (k(k−1)).
#[derive(Debug, Clone, PartialEq)]
pub struct TraceIdentities<T> {
    pub d1_lhs: T,
    pub d1_rhs: T,
    pub d2_lhs: T,
    pub d2_rhs: T,
}

pub fn trace_identities<T: Scalar>(a: &Matrix<T>) -> Result<TraceIdentities<T>> {
    let k = a.rows();
    if k < 2 || !a.is_square() {
        return Err(Error::input("trace identities need a square matrix of size at least 2"));
    }
    let id = Matrix::<T>::identity(k);
    let mut one = vec![a.clone()];
    one.extend(std::iter::repeat_n(id.clone(), k - 1));
    let mut two = vec![a.clone(), a.clone()];
    two.extend(std::iter::repeat_n(id, k - 2));
    let tr = a.trace();
    let tr_sq = a.mul(a).trace();
    let kk = T::from_i64(k as i64);
    Ok(TraceIdentities {
        d1_lhs: mixed_discriminant(&one)?,
        d1_rhs: tr.clone() / kk.clone(),
        d2_lhs: mixed_discriminant(&two)?,
        d2_rhs: (tr.clone() * tr - tr_sq) / (kk.clone() * (kk - T::one())),
    })
}

/// det(V)²/m! for the rank-one arguments v₁v₁ᵀ,…,vₘvₘᵀ with vᵢ the columns of V.
pub fn rank_one_value(v: &Matrix<Rational>) -> Rational {
    let d = v.determinant();
    &d * &d / Rational::from_integer(factorial(v.rows()))
}
