//! Concrete convex bodies: axis-aligned boxes, zonotopes and polygons given by
//! support values on a fixed fan of normals.
//!
//! Boxes and zonotopes are exact (rational) throughout. Polygon fans carry
//! their normals as angles in `f64`, since the trigonometry of a general fan
//! is irrational.

use std::f64::consts::{PI, TAU};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::IntegerVectors;
use crate::scalar::{Rational, Real, Scalar};

/// Axis-aligned box `anchor + [0, sides₀] × … × [0, sides_{d-1}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisBox {
    sides: Vec<Rational>,
    anchor: Vec<Rational>,
}

impl AxisBox {
    pub fn new(sides: Vec<Rational>, anchor: Vec<Rational>) -> Result<Self> {
        if sides.is_empty() {
            return Err(Error::input("box dimension must be at least 1"));
        }
        if anchor.len() != sides.len() {
            return Err(Error::input(format!(
                "box anchor has length {} but dimension is {}",
                anchor.len(),
                sides.len()
            )));
        }
        if let Some(s) = sides.iter().find(|s| s.is_negative()) {
            return Err(Error::input(format!("negative box side {s}")));
        }
        Ok(AxisBox { sides, anchor })
    }

    /// Box anchored at the origin.
    pub fn at_origin(sides: Vec<Rational>) -> Result<Self> {
        let anchor = vec![Rational::zero(); sides.len()];
        Self::new(sides, anchor)
    }

    /// Box centered at the origin.
    pub fn centered(sides: Vec<Rational>) -> Result<Self> {
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let anchor = sides.iter().map(|s| -(s * &half)).collect();
        Self::new(sides, anchor)
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn sides(&self) -> &[Rational] {
        &self.sides
    }

    pub fn anchor(&self) -> &[Rational] {
        &self.anchor
    }

    pub fn support(&self, direction: &[Rational]) -> Result<Rational> {
        check_dim(self.dim(), direction.len())?;
        Ok(self
            .sides
            .iter()
            .zip(&self.anchor)
            .zip(direction)
            .fold(Rational::zero(), |acc, ((s, t), u)| {
                let along = s * u;
                acc + t * u + if along.is_positive() { along } else { Rational::zero() }
            }))
    }

    pub fn volume(&self) -> Rational {
        self.sides.iter().fold(Rational::one(), |acc, s| acc * s)
    }

    pub fn translated(&self, shift: &[Rational]) -> Result<Self> {
        check_dim(self.dim(), shift.len())?;
        let anchor = self.anchor.iter().zip(shift).map(|(a, b)| a + b).collect();
        Ok(AxisBox { sides: self.sides.clone(), anchor })
    }

    /// The same body as a zonotope with axis generators.
    pub fn to_zonotope(&self) -> Zonotope {
        let d = self.dim();
        let generators = self
            .sides
            .iter()
            .enumerate()
            .map(|(j, s)| (0..d).map(|k| if k == j { s.clone() } else { Rational::zero() }).collect())
            .collect();
        Zonotope { dim: d, generators, anchor: self.anchor.clone() }
    }
}

/// Zonotope `anchor + Σⱼ [0, vⱼ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Zonotope {
    dim: usize,
    generators: Vec<Vec<Rational>>,
    anchor: Vec<Rational>,
}

impl Zonotope {
    pub fn new(dim: usize, generators: Vec<Vec<Rational>>, anchor: Vec<Rational>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::input("zonotope dimension must be at least 1"));
        }
        if anchor.len() != dim {
            return Err(Error::input(format!("zonotope anchor has length {} but dimension is {dim}", anchor.len())));
        }
        if let Some(g) = generators.iter().find(|g| g.len() != dim) {
            return Err(Error::input(format!("zonotope generator has length {} but dimension is {dim}", g.len())));
        }
        Ok(Zonotope { dim, generators, anchor })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<Rational>] {
        &self.generators
    }

    pub fn anchor(&self) -> &[Rational] {
        &self.anchor
    }

    pub fn support(&self, direction: &[Rational]) -> Result<Rational> {
        check_dim(self.dim, direction.len())?;
        let base = dot_rational(&self.anchor, direction);
        Ok(self.generators.iter().fold(base, |acc, g| {
            let v = dot_rational(g, direction);
            if v.is_positive() {
                acc + v
            } else {
                acc
            }
        }))
    }

    /// Σ over `dim`-subsets of generators of |det|; zero when rank-deficient.
    pub fn volume(&self) -> Rational {
        let n = self.dim;
        if self.generators.len() < n {
            return Rational::zero();
        }
        let ints = IntegerVectors::new(n, &self.generators);
        let total = (0..ints.len())
            .combinations(n)
            .fold(BigInt::zero(), |acc, idx| acc + ints.abs_det(&idx));
        Rational::new(total, ints.denominator().pow(n as u32))
    }

    pub fn translated(&self, shift: &[Rational]) -> Result<Self> {
        check_dim(self.dim, shift.len())?;
        let anchor = self.anchor.iter().zip(shift).map(|(a, b)| a + b).collect();
        Ok(Zonotope { dim: self.dim, generators: self.generators.clone(), anchor })
    }
}

/// Ordered set of unit normals in R², stored as angles in `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Fan {
    angles: Vec<f64>,
    normals: Vec<[f64; 2]>,
}

impl Fan {
    /// Angles must be strictly increasing in `[0, 2π)` with every cyclic gap
    /// in `(0, π)`.
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.len() < 3 {
            return Err(Error::input(format!("a fan needs at least 3 normals, got {}", angles.len())));
        }
        if let Some(a) = angles.iter().find(|a| !a.is_finite() || **a < 0.0 || **a >= TAU) {
            return Err(Error::input(format!("fan angle {a} outside [0, 2π)")));
        }
        if angles.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::input("fan angles must be strictly increasing"));
        }
        let fan = Fan { normals: angles.iter().map(|a| [a.cos(), a.sin()]).collect(), angles };
        if let Some(i) = (0..fan.len()).find(|&i| fan.gap(i) >= PI) {
            return Err(Error::input(format!("fan gap before normal {i} is {} ≥ π", fan.gap(i))));
        }
        Ok(fan)
    }

    /// Normals at the angles `2πk/m`, starting from `offset`.
    pub fn regular(m: usize, offset: f64) -> Result<Self> {
        let mut angles: Vec<f64> = (0..m).map(|k| (offset + TAU * k as f64 / m as f64).rem_euclid(TAU)).collect();
        angles.sort_by(f64::total_cmp);
        Self::new(angles)
    }

    /// Union of the two direction sets; angles closer than `1e-12` are
    /// identified.
    pub fn merge(&self, other: &Fan) -> Result<Fan> {
        let mut angles: Vec<f64> = self.angles.iter().chain(&other.angles).cloned().collect();
        angles.sort_by(f64::total_cmp);
        angles.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        Fan::new(angles)
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn normals(&self) -> &[[f64; 2]] {
        &self.normals
    }

    /// Angle between normal `i − 1` and normal `i` (cyclic).
    pub fn gap(&self, i: usize) -> f64 {
        let m = self.len();
        let prev = self.angles[(i + m - 1) % m];
        (self.angles[i] - prev).rem_euclid(TAU)
    }

    /// Support values of the convex hull of `points`.
    pub fn support_of_points(&self, points: &[[f64; 2]]) -> SupportVector {
        SupportVector::new(
            self.normals
                .iter()
                .map(|u| points.iter().map(|p| p[0] * u[0] + p[1] * u[1]).fold(f64::NEG_INFINITY, f64::max))
                .collect(),
        )
    }

    /// Support vector of the single point `z`.
    pub fn point_support(&self, z: [f64; 2]) -> SupportVector {
        self.support_of_points(&[z])
    }
}

/// Values of a support function on an ordered direction set; any signs are
/// allowed (differences of support vectors).
#[derive(Debug, Clone, PartialEq)]
pub struct SupportVector<T = f64>(Vec<T>);

impl<T: Scalar> SupportVector<T> {
    pub fn new(values: Vec<T>) -> Self {
        SupportVector(values)
    }

    pub fn values(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_values(self) -> Vec<T> {
        self.0
    }
}

/// Edge lengths `ℓᵢ(h)` of the polygon with support values `h` on `fan`.
///
/// Linear in `h`; for support vectors of actual polygons these are the facet
/// lengths (zero where the polygon has no edge with that normal).
pub fn edge_lengths(fan: &Fan, h: &[f64]) -> Result<Vec<f64>> {
    let m = fan.len();
    if h.len() != m {
        return Err(Error::input(format!("support vector has length {} but fan has {m} normals", h.len())));
    }
    Ok((0..m)
        .map(|i| {
            let prev = (i + m - 1) % m;
            let next = (i + 1) % m;
            let g_in = fan.gap(i);
            let g_out = fan.gap(next);
            (h[prev] - h[i] * g_in.cos()) / g_in.sin() + (h[next] - h[i] * g_out.cos()) / g_out.sin()
        })
        .collect())
}

/// Polygon represented by support values on a fan.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonFan {
    fan: Fan,
    support: SupportVector,
}

/// Relative slack allowed on negative edge lengths from rounding.
const EDGE_TOL: f64 = 1e-9;

impl PolygonFan {
    /// Rejects support vectors whose edge lengths are negative (beyond
    /// rounding), i.e. that do not describe a polygon with these normals.
    pub fn new(fan: Fan, support: SupportVector) -> Result<Self> {
        let edges = edge_lengths(&fan, support.values())?;
        let scale = support.values().iter().fold(0.0f64, |a, b| a.max(b.abs())).max(f64::MIN_POSITIVE);
        if let Some((i, l)) = edges.iter().enumerate().find(|(_, l)| **l < -EDGE_TOL * scale) {
            return Err(Error::input(format!("support vector gives negative edge length {l} at normal {i}")));
        }
        Ok(PolygonFan { fan, support })
    }

    pub fn from_points(fan: Fan, points: &[[f64; 2]]) -> Result<Self> {
        let support = fan.support_of_points(points);
        Self::new(fan, support)
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn support(&self) -> &SupportVector {
        &self.support
    }

    pub fn edge_lengths(&self) -> Vec<f64> {
        edge_lengths(&self.fan, self.support.values()).expect("validated at construction")
    }

    /// Every edge has positive length, so every normal is a facet normal.
    pub fn is_simple(&self) -> bool {
        let scale = self.support.values().iter().fold(0.0f64, |a, b| a.max(b.abs()));
        self.edge_lengths().iter().all(|&l| l > EDGE_TOL * scale)
    }

    /// Vertex `i` is where the lines of normals `i` and `i + 1` meet.
    pub fn vertices(&self) -> Vec<[f64; 2]> {
        let m = self.fan.len();
        let h = self.support.values();
        let u = self.fan.normals();
        (0..m)
            .map(|i| {
                let j = (i + 1) % m;
                let [a, b] = u[i];
                let [c, d] = u[j];
                let det = a * d - b * c;
                [(h[i] * d - b * h[j]) / det, (a * h[j] - c * h[i]) / det]
            })
            .collect()
    }

    pub fn support_at(&self, direction: &[f64]) -> Result<f64> {
        check_dim(2, direction.len())?;
        Ok(self
            .vertices()
            .iter()
            .map(|v| v[0] * direction[0] + v[1] * direction[1])
            .fold(f64::NEG_INFINITY, f64::max))
    }

    /// ½ Σᵢ hᵢ ℓᵢ(h).
    pub fn area(&self) -> f64 {
        0.5 * self.support.values().iter().zip(self.edge_lengths()).map(|(h, l)| h * l).sum::<f64>()
    }

    /// The same polygon described on another fan.
    pub fn restrict_to(&self, fan: &Fan) -> Result<PolygonFan> {
        let values = fan.normals().iter().map(|u| self.support_at(u)).collect::<Result<Vec<_>>>()?;
        PolygonFan::new(fan.clone(), SupportVector::new(values))
    }

    pub fn translated(&self, shift: [f64; 2]) -> PolygonFan {
        let values = self
            .fan
            .normals()
            .iter()
            .zip(self.support.values())
            .map(|(u, h)| h + u[0] * shift[0] + u[1] * shift[1])
            .collect();
        PolygonFan { fan: self.fan.clone(), support: SupportVector::new(values) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConvexBody {
    Box(AxisBox),
    Zonotope(Zonotope),
    Polygon(PolygonFan),
}

impl ConvexBody {
    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Box(b) => b.dim(),
            ConvexBody::Zonotope(z) => z.dim(),
            ConvexBody::Polygon(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ConvexBody::Box(_) => "box",
            ConvexBody::Zonotope(_) => "zonotope",
            ConvexBody::Polygon(_) => "polygon_fan",
        }
    }

    /// Exact for boxes and zonotopes.
    pub fn support(&self, direction: &[Rational]) -> Result<Real> {
        match self {
            ConvexBody::Box(b) => b.support(direction).map(Real::Exact),
            ConvexBody::Zonotope(z) => z.support(direction).map(Real::Exact),
            ConvexBody::Polygon(p) => {
                let dir: Vec<f64> = direction.iter().map(Scalar::to_f64).collect();
                p.support_at(&dir).map(Real::Approx)
            }
        }
    }

    pub fn support_f64(&self, direction: &[f64]) -> Result<f64> {
        match self {
            ConvexBody::Polygon(p) => p.support_at(direction),
            _ => {
                let dir = direction
                    .iter()
                    .map(|&x| Rational::from_float(x).ok_or_else(|| Error::input("non-finite direction")))
                    .collect::<Result<Vec<_>>>()?;
                Ok(self.support(&dir)?.to_f64())
            }
        }
    }

    pub fn volume(&self) -> Real {
        match self {
            ConvexBody::Box(b) => Real::Exact(b.volume()),
            ConvexBody::Zonotope(z) => Real::Exact(z.volume()),
            ConvexBody::Polygon(p) => Real::Approx(p.area()),
        }
    }
}

/// Σ λᵢ Kᵢ for bodies of one kind and dimension (polygon fans must share
/// their normals).
pub fn minkowski_combine(bodies: &[ConvexBody], coeffs: &[Rational]) -> Result<ConvexBody> {
    if bodies.is_empty() {
        return Err(Error::input("empty Minkowski combination"));
    }
    if bodies.len() != coeffs.len() {
        return Err(Error::input(format!("{} bodies but {} coefficients", bodies.len(), coeffs.len())));
    }
    if let Some(c) = coeffs.iter().find(|c| c.is_negative()) {
        return Err(Error::input(format!("negative Minkowski coefficient {c}")));
    }
    let dim = bodies[0].dim();
    if bodies.iter().any(|b| b.dim() != dim) {
        return Err(Error::input("bodies of different dimensions"));
    }
    match &bodies[0] {
        ConvexBody::Box(_) => {
            let boxes = bodies
                .iter()
                .map(|b| match b {
                    ConvexBody::Box(x) => Ok(x),
                    other => Err(mixed_kinds("box", other)),
                })
                .collect::<Result<Vec<_>>>()?;
            let mut sides = vec![Rational::zero(); dim];
            let mut anchor = vec![Rational::zero(); dim];
            for (b, c) in boxes.iter().zip(coeffs) {
                for j in 0..dim {
                    sides[j] += &b.sides[j] * c;
                    anchor[j] += &b.anchor[j] * c;
                }
            }
            Ok(ConvexBody::Box(AxisBox { sides, anchor }))
        }
        ConvexBody::Zonotope(_) => {
            let mut generators = Vec::new();
            let mut anchor = vec![Rational::zero(); dim];
            for (b, c) in bodies.iter().zip(coeffs) {
                let ConvexBody::Zonotope(z) = b else {
                    return Err(mixed_kinds("zonotope", b));
                };
                if c.is_zero() {
                    continue;
                }
                generators.extend(z.generators.iter().map(|g| g.iter().map(|x| x * c).collect::<Vec<_>>()));
                for j in 0..dim {
                    anchor[j] += &z.anchor[j] * c;
                }
            }
            Ok(ConvexBody::Zonotope(Zonotope { dim, generators, anchor }))
        }
        ConvexBody::Polygon(first) => {
            let mut values = vec![0.0; first.fan.len()];
            for (b, c) in bodies.iter().zip(coeffs) {
                let ConvexBody::Polygon(p) = b else {
                    return Err(mixed_kinds("polygon_fan", b));
                };
                if p.fan != first.fan {
                    return Err(Error::input("polygon fans with different normals"));
                }
                let c = c.to_f64();
                for (acc, h) in values.iter_mut().zip(p.support.values()) {
                    *acc += c * h;
                }
            }
            Ok(ConvexBody::Polygon(PolygonFan { fan: first.fan.clone(), support: SupportVector::new(values) }))
        }
    }
}

fn mixed_kinds(expected: &str, got: &ConvexBody) -> Error {
    Error::input(format!("cannot combine {expected} with {}", got.kind()))
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::input(format!("dimension mismatch: expected {expected}, got {got}")))
    }
}

fn dot_rational(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}
