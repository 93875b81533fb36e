//! Mixed volumes by three independent routes: the permanent formula for
//! boxes, generator determinants for zonotopes and edge lengths for polygon
//! fans, all cross-checked against inclusion–exclusion over Minkowski sums.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{abs_det_mixed, IntegerVectors};
use crate::geom::{edge_lengths, minkowski_combine, AxisBox, ConvexBody, Fan, PolygonFan, Zonotope};
use crate::matrix::Matrix;
use crate::par::{map_range, Execution};
use crate::report::InequalityReport;
use crate::scalar::{Rational, Real, Scalar};

/// Largest argument count accepted by the inclusion–exclusion oracle.
pub const MAX_ORACLE_BODIES: usize = 20;

/// Up to this size the permanent is expanded directly; Ryser's formula above.
const DIRECT_PERMANENT_MAX: usize = 8;

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn permanent<T: Scalar>(m: &Matrix<T>) -> T {
    assert!(m.is_square(), "permanent of a non-square matrix");
    if m.rows() <= DIRECT_PERMANENT_MAX {
        permanent_expansion(m, 0, &mut vec![false; m.cols()])
    } else {
        permanent_ryser(m)
    }
}

fn permanent_expansion<T: Scalar>(m: &Matrix<T>, row: usize, used: &mut [bool]) -> T {
    if row == m.rows() {
        return T::one();
    }
    let mut total = T::zero();
    for col in 0..m.cols() {
        if used[col] || m[(row, col)] == T::zero() {
            continue;
        }
        used[col] = true;
        total = total + m[(row, col)].clone() * permanent_expansion(m, row + 1, used);
        used[col] = false;
    }
    total
}

/// perm(A) = (−1)ⁿ Σ_{S ⊆ cols} (−1)^{|S|} Πᵢ Σ_{j∈S} aᵢⱼ.
fn permanent_ryser<T: Scalar>(m: &Matrix<T>) -> T {
    let n = m.rows();
    let mut total = T::zero();
    for mask in 1u64..(1u64 << n) {
        let prod = (0..n).fold(T::one(), |acc, i| {
            let row_sum = (0..n).filter(|j| mask >> j & 1 == 1).fold(T::zero(), |s, j| s + m[(i, j)].clone());
            acc * row_sum
        });
        if (n - mask.count_ones() as usize).is_multiple_of(2) {
            total = total + prod;
        } else {
            total = total - prod;
        }
    }
    total
}

/// perm(S)/n! with `S[i][j]` the side of box `i` along axis `j`.
pub fn mixed_volume_boxes(boxes: &[AxisBox]) -> Result<Rational> {
    let n = boxes.len();
    if n == 0 {
        return Err(Error::input("no boxes given"));
    }
    if let Some(b) = boxes.iter().find(|b| b.dim() != n) {
        return Err(Error::input(format!("{n} boxes given but a box has dimension {}", b.dim())));
    }
    let sides = Matrix::from_fn(n, n, |i, j| boxes[i].sides()[j].clone());
    Ok(permanent(&sides) / Rational::from_integer(factorial(n)))
}

pub fn mixed_volume_zonotopes(zons: &[Zonotope]) -> Result<Rational> {
    mixed_volume_zonotopes_with(Execution::default(), zons)
}

/// (1/n!) Σ over one generator from each zonotope of |det|.
pub fn mixed_volume_zonotopes_with(exec: Execution, zons: &[Zonotope]) -> Result<Rational> {
    let n = zons.len();
    if n == 0 {
        return Err(Error::input("no zonotopes given"));
    }
    if let Some(z) = zons.iter().find(|z| z.dim() != n) {
        return Err(Error::input(format!("{n} zonotopes given but one has dimension {}", z.dim())));
    }
    if zons.iter().any(|z| z.generators().is_empty()) {
        return Ok(Rational::zero());
    }
    let families: Vec<IntegerVectors> = zons.iter().map(|z| IntegerVectors::new(n, z.generators())).collect();
    let refs: Vec<&IntegerVectors> = families.iter().collect();
    let partial = map_range(exec, families[0].len(), |first| {
        let rest = families[1..].iter().map(|f| 0..f.len());
        rest.multi_cartesian_product()
            .fold(BigInt::zero(), |acc, tail| {
                let mut picks = Vec::with_capacity(n);
                picks.push(first);
                picks.extend(tail);
                acc + abs_det_mixed(&refs, &picks)
            })
    });
    // multi_cartesian_product of zero iterators yields nothing; n = 1 is a sum
    // of |generator| lengths.
    let total: BigInt = if n == 1 {
        (0..families[0].len()).map(|k| abs_det_mixed(&refs, &[k])).sum()
    } else {
        partial.into_iter().sum()
    };
    let denom = families.iter().fold(factorial(n), |acc, f| acc * f.denominator());
    Ok(Rational::new(total, denom))
}

/// ½ Σᵢ xᵢ ℓᵢ(y) on a common fan.
pub fn mixed_area(x: &[f64], y: &[f64], fan: &Fan) -> Result<f64> {
    if x.len() != fan.len() {
        return Err(Error::input(format!("support vector has length {} but fan has {} normals", x.len(), fan.len())));
    }
    let ly = edge_lengths(fan, y)?;
    Ok(0.5 * x.iter().zip(&ly).map(|(a, b)| a * b).sum::<f64>())
}

/// Restates every polygon on the union of all fans.
pub fn align_polygons(polys: &[PolygonFan]) -> Result<Vec<PolygonFan>> {
    let Some(first) = polys.first() else {
        return Ok(Vec::new());
    };
    if polys.iter().all(|p| p.fan() == first.fan()) {
        return Ok(polys.to_vec());
    }
    let mut fan = first.fan().clone();
    for p in &polys[1..] {
        fan = fan.merge(p.fan())?;
    }
    polys.iter().map(|p| p.restrict_to(&fan)).collect()
}

pub fn mixed_volume_oracle(bodies: &[ConvexBody]) -> Result<Real> {
    mixed_volume_oracle_with(Execution::default(), bodies)
}

/// V(K₁,…,Kₙ) = (1/n!) Σ_{S⊆[n]} (−1)^{n−|S|} Vol(Σ_{i∈S} Kᵢ).
pub fn mixed_volume_oracle_with(exec: Execution, bodies: &[ConvexBody]) -> Result<Real> {
    let n = bodies.len();
    if n == 0 {
        return Err(Error::input("no bodies given"));
    }
    if n > MAX_ORACLE_BODIES {
        return Err(Error::input(format!("inclusion–exclusion over {n} bodies exceeds the limit of {MAX_ORACLE_BODIES}")));
    }
    if let Some(b) = bodies.iter().find(|b| b.dim() != n) {
        return Err(Error::input(format!("{n} bodies given but a body has dimension {}", b.dim())));
    }
    let bodies = unify_kinds(bodies)?;
    let volumes = map_range(exec, 1usize << n, |mask| -> Result<(usize, Real)> {
        if mask == 0 {
            return Ok((0, Real::Exact(Rational::zero())));
        }
        let members: Vec<ConvexBody> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| bodies[i].clone()).collect();
        let ones = vec![Rational::one(); members.len()];
        let sum = minkowski_combine(&members, &ones)?;
        Ok((members.len(), sum.volume()))
    });
    let mut exact_total = Rational::zero();
    let mut float_total = 0.0;
    let mut exact = true;
    for item in volumes {
        let (size, vol) = item?;
        let negative = (n - size) % 2 == 1;
        match vol {
            Real::Exact(v) => {
                if negative {
                    exact_total -= v;
                } else {
                    exact_total += v;
                }
            }
            Real::Approx(v) => {
                exact = false;
                float_total += if negative { -v } else { v };
            }
        }
    }
    let fact = factorial(n);
    if exact {
        Ok(Real::Exact(exact_total / Rational::from_integer(fact)))
    } else {
        Ok(Real::Approx((float_total + exact_total.to_f64()) / Scalar::to_f64(&Rational::from_integer(fact))))
    }
}

/// Boxes are promoted to zonotopes when mixed with them; polygons are put on
/// a common fan.
fn unify_kinds(bodies: &[ConvexBody]) -> Result<Vec<ConvexBody>> {
    let boxes = bodies.iter().filter(|b| matches!(b, ConvexBody::Box(_))).count();
    let zons = bodies.iter().filter(|b| matches!(b, ConvexBody::Zonotope(_))).count();
    let polys: Vec<PolygonFan> = bodies
        .iter()
        .filter_map(|b| match b {
            ConvexBody::Polygon(p) => Some(p.clone()),
            _ => None,
        })
        .collect();
    if !polys.is_empty() {
        if polys.len() != bodies.len() {
            return Err(Error::input("polygon fans cannot be mixed with boxes or zonotopes"));
        }
        return Ok(align_polygons(&polys)?.into_iter().map(ConvexBody::Polygon).collect());
    }
    if boxes > 0 && zons > 0 {
        return Ok(bodies
            .iter()
            .map(|b| match b {
                ConvexBody::Box(x) => ConvexBody::Zonotope(x.to_zonotope()),
                other => other.clone(),
            })
            .collect());
    }
    Ok(bodies.to_vec())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Permanent,
    ZonotopeDeterminants,
    MixedArea,
}

/// Mixed volume by the closed-form engine matching the inputs.
pub fn mixed_volume(bodies: &[ConvexBody]) -> Result<(Real, Engine)> {
    let n = bodies.len();
    if n == 0 {
        return Err(Error::input("no bodies given"));
    }
    if let Some(b) = bodies.iter().find(|b| b.dim() != n) {
        return Err(Error::input(format!("{n} bodies given but a body has dimension {}", b.dim())));
    }
    match unify_kinds(bodies)?.as_slice() {
        all if all.iter().all(|b| matches!(b, ConvexBody::Box(_))) => {
            let boxes: Vec<AxisBox> = all
                .iter()
                .map(|b| match b {
                    ConvexBody::Box(x) => x.clone(),
                    _ => unreachable!(),
                })
                .collect();
            Ok((Real::Exact(mixed_volume_boxes(&boxes)?), Engine::Permanent))
        }
        [ConvexBody::Polygon(a), ConvexBody::Polygon(b)] => {
            Ok((Real::Approx(mixed_area(a.support().values(), b.support().values(), a.fan())?), Engine::MixedArea))
        }
        all => {
            let zons: Vec<Zonotope> = all
                .iter()
                .map(|b| match b {
                    ConvexBody::Box(x) => x.to_zonotope(),
                    ConvexBody::Zonotope(z) => z.clone(),
                    ConvexBody::Polygon(_) => unreachable!("polygons only occur in dimension 2"),
                })
                .collect();
            Ok((Real::Exact(mixed_volume_zonotopes(&zons)?), Engine::ZonotopeDeterminants))
        }
    }
}

/// Checks V(K,L,C…)² ≥ V(K,K,C…)·V(L,L,C…) with `refs` supplying the
/// remaining n − 2 arguments.
pub fn verify_af(k: &ConvexBody, l: &ConvexBody, refs: &[ConvexBody], tol: f64) -> Result<InequalityReport> {
    let n = k.dim();
    if n < 2 {
        return Err(Error::input("the inequality needs dimension at least 2"));
    }
    if refs.len() + 2 != n {
        return Err(Error::input(format!("dimension {n} needs {} reference bodies, got {}", n - 2, refs.len())));
    }
    let all: Vec<ConvexBody> = [k.clone(), l.clone()].into_iter().chain(refs.iter().cloned()).collect();
    let all = unify_kinds(&all)?;
    let with = |a: &ConvexBody, b: &ConvexBody| -> Result<Real> {
        let mut args = vec![a.clone(), b.clone()];
        args.extend(all[2..].iter().cloned());
        Ok(mixed_volume(&args)?.0)
    };
    let (k, l) = (&all[0], &all[1]);
    let kl = with(k, l)?;
    let kk = with(k, k)?;
    let ll = with(l, l)?;
    Ok(match (kl, kk, ll) {
        (Real::Exact(kl), Real::Exact(kk), Real::Exact(ll)) => InequalityReport::exact(&kl * &kl, kk * ll),
        (kl, kk, ll) => {
            let kl = kl.to_f64();
            InequalityReport::approx(kl * kl, kk.to_f64() * ll.to_f64(), tol)
        }
    })
}

/// Two-dimensional form of the inequality for arbitrary support vectors on a
/// common fan: V(x,y)² ≥ V(x,x)·V(y,y) whenever V(y,y) ≥ 0.
pub fn verify_af_support(x: &[f64], y: &[f64], fan: &Fan, tol: f64) -> Result<InequalityReport> {
    let xy = mixed_area(x, y, fan)?;
    let xx = mixed_area(x, x, fan)?;
    let yy = mixed_area(y, y, fan)?;
    Ok(InequalityReport::approx(xy * xy, xx * yy, tol))
}
