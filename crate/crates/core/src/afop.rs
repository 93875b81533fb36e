//! Finite Alexandrov–Fenchel operators for polygon fans and boxes in R³, and
//! the spectral checks run on them.
//!
//! For a reference body P with support vector h > 0 the operator is
//!
//! ```text
//! (Ax)_u = h_u · V(F(x,u), F(P,u), …) / V(F(P,u), F(P,u), …)
//! p_u    = V(F(P,u), F(P,u), …) / (n · h_u)
//! ```
//!
//! so that V(x, y, P, …) = ⟨x, Ay⟩_p and A h = h. In the plane the faces are
//! edges and the face term is the edge length ℓ_u.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{edge_lengths, AxisBox, Fan, PolygonFan};
use crate::matrix::Matrix;
use crate::mixvol::permanent;
use crate::par::{map_range, Execution};
use crate::report::InequalityReport;
use crate::sampling::{gaussian_vec, sample_rng};
use crate::scalar::Rational;
use crate::spectral::{default_zero_tol, eigh_weighted, inertia, unsigned_angle, Inertia, OperatorPair, Witness};

/// Symmetric M with xᵀMy = ½ Σᵢ xᵢ ℓᵢ(y) on the given fan.
pub fn polygon_form_matrix(fan: &Fan) -> Matrix<f64> {
    let m = fan.len();
    let mut out = Matrix::zeros(m, m);
    for i in 0..m {
        let prev = (i + m - 1) % m;
        let next = (i + 1) % m;
        let g_in = fan.gap(i);
        let g_out = fan.gap(next);
        out[(i, i)] = -0.5 * (g_in.cos() / g_in.sin() + g_out.cos() / g_out.sin());
        out[(i, prev)] += 0.5 / g_in.sin();
        out[(i, next)] += 0.5 / g_out.sin();
    }
    out
}

/// Operator of a polygon with positive support values and positive edges.
pub fn fan_af_operator(reference: &PolygonFan) -> Result<OperatorPair<f64>> {
    let h = reference.support().values();
    if let Some((i, v)) = h.iter().enumerate().find(|(_, v)| **v <= 0.0) {
        return Err(Error::precondition(format!(
            "support value {v} at normal {i} is not positive; translate the polygon so the origin is interior"
        )));
    }
    if !reference.is_simple() {
        return Err(Error::precondition("reference polygon has a zero-length edge"));
    }
    let fan = reference.fan();
    let m = fan.len();
    let edges = reference.edge_lengths();
    let mut a = Matrix::zeros(m, m);
    for j in 0..m {
        let mut e = vec![0.0; m];
        e[j] = 1.0;
        let col = edge_lengths(fan, &e)?;
        for i in 0..m {
            a[(i, j)] = h[i] * col[i] / edges[i];
        }
    }
    let p = (0..m).map(|i| edges[i] / (2.0 * h[i])).collect();
    OperatorPair::new(a, p)
}

/// Direction order used for box support vectors: +e₁, −e₁, +e₂, −e₂, +e₃, −e₃.
pub const BOX_DIRECTIONS: [&str; 6] = ["+e1", "-e1", "+e2", "-e2", "+e3", "-e3"];

/// Support vector of a box in R³ on the six axis directions.
pub fn box_support_vector(b: &AxisBox) -> Result<Vec<Rational>> {
    if b.dim() != 3 {
        return Err(Error::input(format!("box operator needs a box in R³, got dimension {}", b.dim())));
    }
    Ok((0..3)
        .flat_map(|j| {
            let t = b.anchor()[j].clone();
            [&t + &b.sides()[j], -t]
        })
        .collect())
}

/// Side lengths of the (possibly virtual) box with support vector `x`.
fn box_sides<T>(x: &[T]) -> [T; 3]
where
    T: Clone + std::ops::Add<Output = T>,
{
    [x[0].clone() + x[1].clone(), x[2].clone() + x[3].clone(), x[4].clone() + x[5].clone()]
}

/// Support vectors of the three unit translations, in [`BOX_DIRECTIONS`] order.
pub fn box_translation_vectors() -> [Vec<Rational>; 3] {
    let one = Rational::one;
    let zero = Rational::zero;
    [
        vec![one(), -one(), zero(), zero(), zero(), zero()],
        vec![zero(), zero(), one(), -one(), zero(), zero()],
        vec![zero(), zero(), zero(), zero(), one(), -one()],
    ]
}

/// 6×6 operator on the box directions with the reference box as third body.
///
/// Faces are rectangles: for u = ±e_j the faces of x and P span the two other
/// axes and V(F(x,u), F(P,u)) = (a₁b₂ + a₂b₁)/2 in those side lengths.
pub fn box_af_operator(reference: &AxisBox) -> Result<OperatorPair<Rational>> {
    let h = box_support_vector(reference)?;
    if let Some((i, v)) = h.iter().enumerate().find(|(_, v)| !v.is_positive()) {
        return Err(Error::precondition(format!(
            "support value {v} in direction {} is not positive; re-center the box so the origin is interior",
            BOX_DIRECTIONS[i]
        )));
    }
    let c = reference.sides();
    let two = Rational::from_integer(2.into());
    let three = Rational::from_integer(3.into());
    let others = |axis: usize| match axis {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let mut a = Matrix::zeros(6, 6);
    let mut p = Vec::with_capacity(6);
    for u in 0..6 {
        let (k, l) = others(u / 2);
        let self_area = &c[k] * &c[l];
        for v in 0..6 {
            let mut e = vec![Rational::zero(); 6];
            e[v] = Rational::one();
            let s = box_sides(&e);
            let mixed = (&s[k] * &c[l] + &s[l] * &c[k]) / &two;
            a[(u, v)] = &h[u] * mixed / &self_area;
        }
        p.push(self_area / (&three * &h[u]));
    }
    OperatorPair::new(a, p)
}

/// V(x, y, P) for box support vectors, via the permanent of the side-length
/// matrix extended multilinearly to arbitrary vectors.
pub fn box_mixed_form(x: &[f64], y: &[f64], reference: &AxisBox) -> f64 {
    let c: Vec<f64> = reference.sides().iter().map(crate::scalar::Scalar::to_f64).collect();
    let sx = box_sides(x);
    let sy = box_sides(y);
    let m = Matrix::from_rows(vec![sx.to_vec(), sy.to_vec(), c]).expect("3×3");
    permanent(&m) / 6.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BochnerReport {
    pub samples: usize,
    /// min of ⟨Ax,Ax⟩_p − ⟨x,Ax⟩_p over p-normalized samples and eigenvectors.
    pub min_residual: f64,
    pub holds: bool,
    /// Largest gap between the direct residual and Σ (λₖ² − λₖ) cₖ².
    pub expansion_deviation: f64,
    /// Largest gap between ⟨x,Ax⟩_p and the supplied quadratic oracle.
    pub oracle_deviation: Option<f64>,
}

pub type QuadOracle<'a> = &'a (dyn Fn(&[f64]) -> f64 + Sync);

pub fn bochner_check(op: &OperatorPair<f64>, oracle: Option<QuadOracle<'_>>, samples: usize, seed: u64, tol: f64) -> Result<BochnerReport> {
    bochner_check_with(Execution::default(), op, oracle, samples, seed, tol)
}

/// Samples ⟨Ax,Ax⟩_p − ⟨x,Ax⟩_p; the verdict holds when its minimum is ≥ −tol.
pub fn bochner_check_with(
    exec: Execution,
    op: &OperatorPair<f64>,
    oracle: Option<QuadOracle<'_>>,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<BochnerReport> {
    let n = op.dim();
    let eig = eigh_weighted(op)?;
    let probe = |x: &[f64]| {
        let ax = op.apply(x);
        let residual = op.inner(&ax, &ax) - op.inner(x, &ax);
        let expanded: f64 = (0..n)
            .map(|k| {
                let ck = op.inner(x, &eig.vector(k));
                (eig.values[k] * eig.values[k] - eig.values[k]) * ck * ck
            })
            .sum();
        let oracle_gap = oracle.map(|f| (op.inner(x, &ax) - f(x)).abs());
        (residual, (residual - expanded).abs(), oracle_gap)
    };
    let mut results = map_range(exec, samples, |k| {
        let mut rng = sample_rng(seed, k as u64);
        let g = gaussian_vec(&mut rng, n);
        let norm = op.inner(&g, &g).sqrt();
        let x: Vec<f64> = g.iter().map(|v| v / norm).collect();
        probe(&x)
    });
    results.extend((0..n).map(|k| probe(&eig.vector(k))));
    let min_residual = results.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let expansion_deviation = results.iter().map(|r| r.1).fold(0.0, f64::max);
    let oracle_deviation = oracle.map(|_| results.iter().filter_map(|r| r.2).fold(0.0, f64::max));
    Ok(BochnerReport { samples, min_residual, holds: min_residual >= -tol, expansion_deviation, oracle_deviation })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Hyperbolic,
    NotHyperbolic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub dimension: usize,
    /// Descending.
    pub eigenvalues: Vec<f64>,
    pub inertia: Inertia,
    pub zero_tol: f64,
    pub top_eigenvector: Vec<f64>,
    pub simple_top: bool,
    /// min over eigenvalues of λ² − λ.
    pub bochner_residual_min: f64,
    /// Every eigenvalue lies in (−∞, tol] ∪ [1 − tol, 1 + tol].
    pub dichotomy_holds: bool,
    pub top_alignment_angle: Option<f64>,
    pub top_parallel: Option<bool>,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
}

impl SpectralReport {
    /// Hyperbolic with a simple top eigenvalue, the eigenvalue dichotomy and
    /// (when a reference was given) top eigenvector along the reference.
    pub fn certified(&self) -> bool {
        self.verdict == Verdict::Hyperbolic && self.simple_top && self.dichotomy_holds && self.top_parallel.unwrap_or(true)
    }
}

/// Angle within which the top eigenvector counts as parallel to the reference.
pub const PARALLEL_ANGLE: f64 = 1e-6;

pub fn spectrum_report(op: &OperatorPair<f64>, reference: Option<&[f64]>, zero_tol: Option<f64>, tol: f64) -> Result<SpectralReport> {
    let n = op.dim();
    if let Some(r) = reference {
        if r.len() != n {
            return Err(Error::input(format!("reference has length {} but operator has dimension {n}", r.len())));
        }
    }
    let eig = eigh_weighted(op)?;
    let zero_tol = zero_tol.unwrap_or_else(|| default_zero_tol(&eig.values));
    let inertia = inertia(&eig.values, Some(zero_tol));
    let max_abs = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let simple_top = n <= 1 || eig.values[0] - eig.values[1] > 1e-10 * max_abs;
    let bochner_residual_min = eig.values.iter().map(|l| l * l - l).fold(f64::INFINITY, f64::min);
    let dichotomy_holds = eig.values.iter().all(|&l| l <= tol || (l - 1.0).abs() <= tol);
    let mut top = eig.vector(0);
    if top.iter().sum::<f64>() < 0.0 {
        top.iter_mut().for_each(|x| *x = -*x);
    }
    let top_alignment_angle = reference.map(|r| unsigned_angle(&top, r));
    let witness = if inertia.positive >= 2 {
        let x = eig.vector(0);
        let y = eig.vector(1);
        let xy = op.form(&x, &y);
        let residual = xy * xy - op.form(&x, &x) * op.form(&y, &y);
        Some(Witness { x, y, residual })
    } else {
        None
    };
    Ok(SpectralReport {
        dimension: n,
        eigenvalues: eig.values,
        inertia,
        zero_tol,
        top_eigenvector: top,
        simple_top,
        bochner_residual_min,
        dichotomy_holds,
        top_alignment_angle,
        top_parallel: top_alignment_angle.map(|a| a <= PARALLEL_ANGLE),
        verdict: if inertia.positive == 1 { Verdict::Hyperbolic } else { Verdict::NotHyperbolic },
        witness,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralAfReport {
    pub inertia: Inertia,
    pub inequality: InequalityReport,
}

/// Q(x,P)² ≥ Q(x,x)·Q(P,P) for Q(a,b) = ⟨a,Ab⟩_p, certified by the operator
/// having exactly one positive eigenvalue and Q(P,P) ≥ 0.
pub fn verify_af_via_spectrum(
    x: &[f64],
    reference: &[f64],
    op: &OperatorPair<f64>,
    zero_tol: Option<f64>,
    tol: f64,
) -> Result<SpectralAfReport> {
    let n = op.dim();
    if x.len() != n || reference.len() != n {
        return Err(Error::input("vector length does not match the operator dimension"));
    }
    let eig = eigh_weighted(op)?;
    let zero_tol = zero_tol.unwrap_or_else(|| default_zero_tol(&eig.values));
    let inertia = inertia(&eig.values, Some(zero_tol));
    if inertia.positive != 1 {
        return Err(Error::precondition(format!("operator has inertia {inertia}, not exactly one positive eigenvalue")));
    }
    let pp = op.form(reference, reference);
    if pp < -tol * pp.abs().max(1.0) {
        return Err(Error::precondition("reference has negative self-pairing"));
    }
    let xp = op.form(x, reference);
    let xx = op.form(x, x);
    Ok(SpectralAfReport { inertia, inequality: InequalityReport::approx(xp * xp, xx * pp, tol) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::SupportVector;
    use crate::scalar::{int, rat, Scalar};

    fn unit_cube() -> AxisBox {
        AxisBox::centered(vec![int(1); 3]).unwrap()
    }

    #[test]
    fn square_form_matrix() {
        let fan = Fan::regular(4, 0.0).unwrap();
        let m = polygon_form_matrix(&fan);
        for i in 0..4 {
            for j in 0..4 {
                let expected = if (i + 4 - j) % 4 == 1 || (j + 4 - i) % 4 == 1 { 0.5 } else { 0.0 };
                assert!((m[(i, j)] - expected).abs() < 1e-15);
            }
        }
        let op = OperatorPair::symmetric(m).unwrap();
        let rep = spectrum_report(&op, None, None, 1e-9).unwrap();
        assert_eq!(rep.inertia, Inertia { positive: 1, zero: 2, negative: 1 });
    }

    #[test]
    fn form_matrix_kills_translations() {
        let fan = Fan::regular(7, 0.3).unwrap();
        let m = polygon_form_matrix(&fan);
        for z in [[1.0, 0.0], [0.0, 1.0]] {
            let t = fan.point_support(z);
            assert!(m.mul_vec(t.values()).iter().all(|v| v.abs() < 1e-14));
        }
    }

    #[test]
    fn fan_operator_fixes_reference() {
        let fan = Fan::regular(5, 0.1).unwrap();
        let poly = PolygonFan::new(fan, SupportVector::new(vec![1.0, 1.2, 0.9, 1.1, 1.0])).unwrap();
        let op = fan_af_operator(&poly).unwrap();
        let h = poly.support().values();
        let ah = op.apply(h);
        assert!(ah.iter().zip(h).all(|(a, b)| (a - b).abs() < 1e-13));
        let rep = spectrum_report(&op, Some(h), None, 1e-9).unwrap();
        assert!(rep.certified(), "{rep:?}");
        let shifted = poly.translated([5.0, 0.0]);
        assert!(matches!(fan_af_operator(&shifted), Err(Error::Precondition(_))));
    }

    #[test]
    fn cube_operator() {
        let op = box_af_operator(&unit_cube()).unwrap();
        let quarter = rat(1, 4);
        for u in 0..6 {
            for v in 0..6 {
                let expected = if u / 2 == v / 2 { int(0) } else { quarter.clone() };
                assert_eq!(op.matrix()[(u, v)], expected);
            }
        }
        let h = box_support_vector(&unit_cube()).unwrap();
        assert_eq!(op.apply(&h), h);
        let [tx, _, _] = box_translation_vectors();
        assert!(op.apply(&tx).iter().all(Zero::is_zero));

        let f = op.to_f64();
        let rep = spectrum_report(&f, Some(&[0.5; 6]), None, 1e-9).unwrap();
        let expected = [1.0, 0.0, 0.0, 0.0, -0.5, -0.5];
        assert!(rep.eigenvalues.iter().zip(expected).all(|(a, b)| (a - b).abs() < 1e-12));
        assert_eq!(rep.inertia, Inertia { positive: 1, zero: 3, negative: 2 });
        assert!(rep.certified());
    }

    #[test]
    fn box_operator_needs_positive_support() {
        let b = AxisBox::at_origin(vec![int(1); 3]).unwrap();
        assert!(matches!(box_af_operator(&b), Err(Error::Precondition(_))));
        let flat = AxisBox::at_origin(vec![int(1); 2]).unwrap();
        assert!(box_af_operator(&flat).is_err());
    }

    #[test]
    fn box_form_matches_permanent() {
        let b = AxisBox::new(vec![int(2), rat(1, 2), int(3)], vec![int(-1), rat(-1, 4), int(-2)]).unwrap();
        let op = box_af_operator(&b).unwrap().to_f64();
        let x = [0.3, -1.0, 2.0, 0.5, -0.2, 1.1];
        let y = [1.0, 0.4, -0.7, 0.2, 0.9, -0.3];
        assert!((op.form(&x, &y) - box_mixed_form(&x, &y, &b)).abs() < 1e-13);
    }

    #[test]
    fn bochner_on_cube() {
        let b = unit_cube();
        let op = box_af_operator(&b).unwrap().to_f64();
        let oracle = |x: &[f64]| box_mixed_form(x, x, &b);
        let rep = bochner_check(&op, Some(&oracle), 2000, 3, 1e-12).unwrap();
        assert!(rep.holds && rep.min_residual >= -1e-12);
        assert!(rep.expansion_deviation < 1e-12);
        assert!(rep.oracle_deviation.unwrap() < 1e-12);
        let h: Vec<f64> = box_support_vector(&b).unwrap().iter().map(Scalar::to_f64).collect();
        let ah = op.apply(&h);
        assert!((op.inner(&ah, &ah) - op.inner(&h, &ah)).abs() < 1e-15);
    }

    #[test]
    fn identity_is_not_hyperbolic() {
        let op = OperatorPair::symmetric(Matrix::<f64>::identity(4)).unwrap();
        let rep = spectrum_report(&op, None, None, 1e-9).unwrap();
        assert_eq!(rep.verdict, Verdict::NotHyperbolic);
        assert_eq!(rep.inertia.positive, 4);
        assert!(rep.witness.unwrap().residual < 0.0);
        assert!(verify_af_via_spectrum(&[1.0; 4], &[1.0; 4], &op, None, 1e-9).is_err());
    }

    #[test]
    fn spectral_af_on_merged_fan() {
        let square = PolygonFan::from_points(Fan::regular(4, 0.0).unwrap(), &[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        let diamond = PolygonFan::from_points(
            Fan::regular(4, std::f64::consts::FRAC_PI_4).unwrap(),
            &[[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]],
        )
        .unwrap();
        let aligned = crate::mixvol::align_polygons(&[square, diamond]).unwrap();
        let op = OperatorPair::symmetric(polygon_form_matrix(aligned[0].fan())).unwrap();
        let r = verify_af_via_spectrum(aligned[0].support().values(), aligned[1].support().values(), &op, None, 1e-9).unwrap();
        assert_eq!(r.inertia, Inertia { positive: 1, zero: 2, negative: 5 });
        assert!((r.inequality.lhs.to_f64() - 4.0).abs() < 1e-12);
        assert!((r.inequality.rhs.to_f64() - 2.0).abs() < 1e-12);

        let p = aligned[1].support().values();
        let scaled: Vec<f64> = p.iter().map(|v| 2.5 * v).collect();
        assert!(verify_af_via_spectrum(&scaled, p, &op, None, 1e-9).unwrap().inequality.equality);
        let shifted = aligned[1].translated([0.3, -0.8]);
        assert!(verify_af_via_spectrum(shifted.support().values(), p, &op, None, 1e-9).unwrap().inequality.equality);
    }
}
