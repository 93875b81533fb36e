//! Symmetric eigensolver and the spectral checks built on it.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{dot, Matrix};
use crate::par::{map_range, Execution};
use crate::sampling::{gaussian_vec, sample_rng};
use crate::scalar::Scalar;

/// Asymmetry allowed in the solver input, relative to the largest entry.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Sweeps stop once the off-diagonal Frobenius mass drops below this
/// fraction of ‖S‖_F.
const JACOBI_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues in descending order with matching eigenvector columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Matrix<f64>,
}

impl Eigen {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k)
    }
}

/// Cyclic Jacobi rotations.
pub fn eigh(s: &Matrix<f64>) -> Result<Eigen> {
    if !s.is_square() {
        return Err(Error::input(format!("matrix is {}×{}, not square", s.rows(), s.cols())));
    }
    if !s.is_symmetric(SYMMETRY_TOL) {
        return Err(Error::input("matrix is not symmetric"));
    }
    let n = s.rows();
    let mut a = Matrix::from_fn(n, n, |i, j| 0.5 * (s[(i, j)] + s[(j, i)]));
    let mut v = Matrix::<f64>::identity(n);
    let norm = a.frobenius_norm();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_TOL * norm {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - sn * akq;
                    a[(k, q)] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - sn * aqk;
                    a[(q, k)] = sn * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = Matrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    for k in 0..n {
        fix_sign(&mut vectors, k);
    }
    Ok(Eigen { values, vectors })
}

/// Makes the largest-magnitude entry of column `k` positive.
fn fix_sign(m: &mut Matrix<f64>, k: usize) {
    let lead = (0..m.rows()).map(|i| m[(i, k)]).fold(0.0, |acc: f64, x| if x.abs() > acc.abs() + 1e-12 { x } else { acc });
    if lead < 0.0 {
        for i in 0..m.rows() {
            m[(i, k)] = -m[(i, k)];
        }
    }
}

/// A matrix together with positive weights making it self-adjoint for
/// ⟨x, y⟩_p = Σᵢ xᵢ yᵢ pᵢ, i.e. pᵢAᵢⱼ = pⱼAⱼᵢ.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorPair<T = f64> {
    a: Matrix<T>,
    p: Vec<T>,
}

impl<T: Scalar> OperatorPair<T> {
    pub fn new(a: Matrix<T>, p: Vec<T>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::input("operator matrix is not square"));
        }
        if p.len() != a.rows() {
            return Err(Error::input(format!("{} weights for a {}×{} operator", p.len(), a.rows(), a.rows())));
        }
        if let Some(w) = p.iter().find(|w| !(**w > T::zero())) {
            return Err(Error::input(format!("weight {w:?} is not positive")));
        }
        let n = a.rows();
        let weighted = Matrix::from_fn(n, n, |i, j| p[i].clone() * a[(i, j)].clone());
        if !weighted.is_symmetric(SYMMETRY_TOL) {
            return Err(Error::input("operator is not self-adjoint for the given weights"));
        }
        Ok(OperatorPair { a, p })
    }

    /// Symmetric matrix with unit weights.
    pub fn symmetric(a: Matrix<T>) -> Result<Self> {
        let n = a.rows();
        Self::new(a, vec![T::one(); n])
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.a
    }

    pub fn weights(&self) -> &[T] {
        &self.p
    }

    pub fn dim(&self) -> usize {
        self.p.len()
    }

    pub fn apply(&self, x: &[T]) -> Vec<T> {
        self.a.mul_vec(x)
    }

    /// ⟨x, y⟩_p.
    pub fn inner(&self, x: &[T], y: &[T]) -> T {
        x.iter().zip(y).zip(&self.p).fold(T::zero(), |acc, ((a, b), w)| acc + a.clone() * b.clone() * w.clone())
    }

    /// Q(x, y) = ⟨x, Ay⟩_p.
    pub fn form(&self, x: &[T], y: &[T]) -> T {
        self.inner(x, &self.apply(y))
    }

    pub fn to_f64(&self) -> OperatorPair<f64> {
        OperatorPair { a: self.a.to_f64(), p: self.p.iter().map(Scalar::to_f64).collect() }
    }

    /// Same operator with weights multiplied by `c > 0`.
    pub fn rescaled(&self, c: T) -> Result<Self> {
        Self::new(self.a.clone(), self.p.iter().map(|w| w.clone() * c.clone()).collect())
    }
}

/// Eigenpairs of A as a self-adjoint operator on ℓ²(p), via the symmetric
/// similarity P^{1/2} A P^{-1/2}. Eigenvectors are p-orthonormal.
pub fn eigh_weighted(op: &OperatorPair<f64>) -> Result<Eigen> {
    let n = op.dim();
    let root: Vec<f64> = op.p.iter().map(|w| w.sqrt()).collect();
    let s = Matrix::from_fn(n, n, |i, j| {
        let forward = root[i] * op.a[(i, j)] / root[j];
        let backward = root[j] * op.a[(j, i)] / root[i];
        0.5 * (forward + backward)
    });
    let eig = eigh(&s)?;
    let vectors = Matrix::from_fn(n, n, |i, k| eig.vectors[(i, k)] / root[i]);
    Ok(Eigen { values: eig.values, vectors })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inertia {
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
}

impl Inertia {
    pub fn dim(&self) -> usize {
        self.positive + self.zero + self.negative
    }
}

impl std::fmt::Display for Inertia {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.positive, self.zero, self.negative)
    }
}

/// Relative zero band applied when no explicit tolerance is given.
pub const ZERO_BAND: f64 = 1e-8;

/// `1e-8 · max|λ|`.
pub fn default_zero_tol(values: &[f64]) -> f64 {
    ZERO_BAND * values.iter().fold(0.0f64, |a, v| a.max(v.abs()))
}

pub fn inertia(values: &[f64], zero_tol: Option<f64>) -> Inertia {
    let tol = zero_tol.unwrap_or_else(|| default_zero_tol(values));
    let positive = values.iter().filter(|&&v| v > tol).count();
    let negative = values.iter().filter(|&&v| v < -tol).count();
    Inertia { positive, zero: values.len() - positive - negative, negative }
}

pub fn matrix_inertia(s: &Matrix<f64>, zero_tol: Option<f64>) -> Result<Inertia> {
    Ok(inertia(&eigh(s)?.values, zero_tol))
}

pub fn operator_inertia(op: &OperatorPair<f64>, zero_tol: Option<f64>) -> Result<Inertia> {
    Ok(inertia(&eigh_weighted(op)?.values, zero_tol))
}

/// Smallest eigenvalue ≥ −1e-10·max|λ|.
pub fn is_psd(m: &Matrix<f64>) -> Result<bool> {
    let values = eigh(m)?.values;
    let scale = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    Ok(values.last().is_none_or(|&v| v >= -1e-10 * scale))
}

/// Smallest eigenvalue > 1e-10·max|λ|.
pub fn is_pd(m: &Matrix<f64>) -> Result<bool> {
    let values = eigh(m)?.values;
    let scale = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    Ok(scale > 0.0 && values.last().is_some_and(|&v| v > 1e-10 * scale))
}

/// Pair violating ⟨x,Ay⟩² ≥ ⟨x,Ax⟩⟨y,Ay⟩ with ⟨y,Ay⟩ ≥ 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicityReport {
    pub inertia: Inertia,
    /// At most one positive eigenvalue.
    pub hyperbolic: bool,
    pub samples: usize,
    /// Minimum of ⟨x,Ay⟩² − ⟨x,Ax⟩⟨y,Ay⟩ over the sampled pairs.
    pub min_residual: f64,
    /// Sampled pairs whose residual is negative beyond rounding.
    pub sampled_violations: usize,
    /// Pair built from the top two eigenvectors when both eigenvalues are positive.
    pub witness: Option<Witness>,
}

impl HyperbolicityReport {
    /// Verdict of the direct test: no sampled violation and no witness.
    pub fn reverse_cs_holds(&self) -> bool {
        self.sampled_violations == 0 && self.witness.is_none()
    }
}

/// Residual below `-REL_TOL · max(⟨x,Ay⟩², |⟨x,Ax⟩⟨y,Ay⟩|)` counts as a violation.
const REL_TOL: f64 = 1e-9;

fn reverse_cs(op: &OperatorPair<f64>, x: &[f64], y: &[f64]) -> (f64, f64) {
    let xy = op.form(x, y);
    let xx = op.form(x, x);
    let yy = op.form(y, y);
    let scale = (xy * xy).max((xx * yy).abs());
    (xy * xy - xx * yy, scale)
}

pub fn hyperbolicity_check(op: &OperatorPair<f64>, samples: usize, seed: u64, zero_tol: Option<f64>) -> Result<HyperbolicityReport> {
    hyperbolicity_check_with(Execution::default(), op, samples, seed, zero_tol)
}

/// Inertia-based verdict plus direct sampling of the reverse Cauchy–Schwarz
/// inequality over pairs with ⟨y,Ay⟩ ≥ 0.
pub fn hyperbolicity_check_with(
    exec: Execution,
    op: &OperatorPair<f64>,
    samples: usize,
    seed: u64,
    zero_tol: Option<f64>,
) -> Result<HyperbolicityReport> {
    let n = op.dim();
    let eig = eigh_weighted(op)?;
    let tol = zero_tol.unwrap_or_else(|| default_zero_tol(&eig.values));
    let inertia = inertia(&eig.values, Some(tol));
    let top = (n > 0 && eig.values[0] > tol).then(|| (eig.values[0], eig.vector(0)));

    let results = map_range(exec, samples, |k| {
        let mut rng = sample_rng(seed, k as u64);
        let x = gaussian_vec(&mut rng, n);
        let y = nonnegative_direction(op, &mut rng, top.as_ref())?;
        Some(reverse_cs(op, &x, &y))
    });
    let mut min_residual = f64::INFINITY;
    let mut sampled_violations = 0;
    let mut used = 0;
    for (r, scale) in results.into_iter().flatten() {
        used += 1;
        min_residual = min_residual.min(r);
        if r < -REL_TOL * scale {
            sampled_violations += 1;
        }
    }

    let witness = if inertia.positive >= 2 {
        let x = eig.vector(0);
        let y = eig.vector(1);
        let (residual, scale) = reverse_cs(op, &x, &y);
        (residual < -REL_TOL * scale && op.form(&y, &y) >= 0.0).then_some(Witness { x, y, residual })
    } else {
        None
    };

    Ok(HyperbolicityReport {
        inertia,
        hyperbolic: inertia.positive <= 1,
        samples: used,
        min_residual: if used == 0 { 0.0 } else { min_residual },
        sampled_violations,
        witness,
    })
}

/// Random y with ⟨y,Ay⟩ ≥ 0: a Gaussian draw, pushed along the top
/// eigenvector when its form value is negative.
fn nonnegative_direction(op: &OperatorPair<f64>, rng: &mut impl Rng, top: Option<&(f64, Vec<f64>)>) -> Option<Vec<f64>> {
    let g = gaussian_vec(rng, op.dim());
    let c = op.form(&g, &g);
    if c >= 0.0 {
        return Some(g);
    }
    let (lambda, w) = top?;
    // Q(g + t w) = c + 2 b t + λ t² with b = Q(g, w); pick t beyond a root.
    let b = op.form(&g, w);
    let disc = (b * b - lambda * c).sqrt();
    let root = if rng.random_bool(0.5) { (-b + disc) / lambda } else { (-b - disc) / lambda };
    let t = root * (1.0 + rng.random_range(0.0..1.0));
    let y: Vec<f64> = g.iter().zip(w).map(|(gi, wi)| gi + t * wi).collect();
    (op.form(&y, &y) >= 0.0).then_some(y)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerronReport {
    pub irreducible: bool,
    pub top_simple: bool,
    pub top_vector_positive: bool,
    pub top_eigenvalue: f64,
    pub top_vector: Vec<f64>,
}

impl PerronReport {
    pub fn all(&self) -> bool {
        self.irreducible && self.top_simple && self.top_vector_positive
    }
}

/// Perron–Frobenius structure of A + cI for an operator whose off-diagonal
/// part is nonnegative.
pub fn perron_check(op: &OperatorPair<f64>) -> Result<PerronReport> {
    let a = op.matrix();
    let n = op.dim();
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    let tol = 1e-12 * scale;
    for i in 0..n {
        for j in 0..n {
            if i != j && a[(i, j)] < -tol {
                return Err(Error::precondition(format!("negative off-diagonal entry {} at ({i}, {j})", a[(i, j)])));
            }
        }
    }
    let irreducible = strongly_connected(n, |i, j| a[(i, j)] > tol);
    let c = (0..n).map(|i| a[(i, i)].abs()).fold(0.0, f64::max) + 1.0;
    let shifted = Matrix::from_fn(n, n, |i, j| a[(i, j)] + if i == j { c } else { 0.0 });
    let eig = eigh_weighted(&OperatorPair::new(shifted, op.weights().to_vec())?)?;
    let max_abs = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let top_simple = n == 1 || eig.values[0] - eig.values[1] > 1e-10 * max_abs;
    let v = eig.vector(0);
    let vmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let top_vector_positive = v.iter().all(|&x| x > 1e-12 * vmax) || v.iter().all(|&x| x < -1e-12 * vmax);
    let sign = if v.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
    Ok(PerronReport {
        irreducible,
        top_simple,
        top_vector_positive,
        top_eigenvalue: eig.values[0] - c,
        top_vector: v.iter().map(|x| sign * x).collect(),
    })
}

fn strongly_connected(n: usize, edge: impl Fn(usize, usize) -> bool) -> bool {
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        if n > 0 {
            seen[0] = true;
        }
        while let Some(i) = stack.pop() {
            for j in 0..n {
                let linked = if forward { edge(i, j) } else { edge(j, i) };
                if i != j && linked && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach(true) && reach(false)
}

/// max‖S vₖ − λₖ vₖ‖ and ‖VᵀV − I‖_max, both for checking solver output.
pub fn eigen_residuals(s: &Matrix<f64>, eig: &Eigen) -> (f64, f64, f64) {
    let n = s.rows();
    let mut pair: f64 = 0.0;
    for k in 0..n {
        let v = eig.vector(k);
        let sv = s.mul_vec(&v);
        let r = sv.iter().zip(&v).map(|(a, b)| (a - eig.values[k] * b).powi(2)).sum::<f64>().sqrt();
        pair = pair.max(r);
    }
    let gram = eig.vectors.transpose().mul(&eig.vectors);
    let ortho = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (gram[(i, j)] - if i == j { 1.0 } else { 0.0 }).abs())
        .fold(0.0, f64::max);
    let recon = Matrix::from_fn(n, n, |i, j| (0..n).map(|k| eig.vectors[(i, k)] * eig.values[k] * eig.vectors[(j, k)]).sum());
    let recon_err = s.sub(&recon).frobenius_norm();
    (pair, ortho, recon_err)
}

pub fn normalize(v: &[f64]) -> Vec<f64> {
    let n = dot(v, v).sqrt();
    v.iter().map(|x| x / n).collect()
}

/// Angle between two nonzero vectors, ignoring orientation.
pub fn unsigned_angle(a: &[f64], b: &[f64]) -> f64 {
    let ua = normalize(a);
    let mut ub = normalize(b);
    if dot(&ua, &ub) < 0.0 {
        ub.iter_mut().for_each(|x| *x = -*x);
    }
    // 2·atan2(‖a−b‖, ‖a+b‖) stays accurate for nearly parallel vectors.
    let diff = ua.iter().zip(&ub).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let sum = ua.iter().zip(&ub).map(|(x, y)| (x + y).powi(2)).sum::<f64>().sqrt();
    2.0 * diff.atan2(sum)
}
