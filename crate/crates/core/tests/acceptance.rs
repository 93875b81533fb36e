//! Acceptance suite: eight property criteria at their stated tolerances.
//! Prints one PASS/FAIL line per criterion and exits nonzero on any failure.

use std::f64::consts::PI;
use std::time::Instant;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use mixed_af::afop::{
    bochner_check, box_af_operator, box_mixed_form, box_support_vector, fan_af_operator, polygon_form_matrix,
    spectrum_report,
};
use mixed_af::geom::{AxisBox, ConvexBody, Fan, PolygonFan};
use mixed_af::mixdisc::{diagonal_operator, md_minor_identity, mixed_discriminant, trace_identities, verify_alexandrov};
use mixed_af::mixvol::{mixed_volume, mixed_volume_oracle, verify_af};
use mixed_af::sampling::*;
use mixed_af::scalar::{int, rat};
use mixed_af::spectral::{eigen_residuals, eigh, hyperbolicity_check, matrix_inertia, OperatorPair};
use mixed_af::{Matrix, Rational, Real, Scalar};

const SEED: u64 = 20_240_611;

// ---------- independent oracles ----------

fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|c| {
            if m[0][c] == 0 {
                return 0;
            }
            let minor: Vec<Vec<i128>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, v)| *v).collect()).collect();
            let s = if c % 2 == 0 { 1 } else { -1 };
            s * m[0][c] * det_i128(&minor)
        })
        .sum()
}

/// Rational determinant by Gaussian elimination.
fn det_q(m: &Matrix<Rational>) -> Rational {
    let mut a = m.to_rows();
    let n = a.len();
    let mut det = int(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else { return int(0) };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c].clone();
        for r in c + 1..n {
            let f = a[r][c].clone() / a[c][c].clone();
            for k in c..n {
                let v = a[c][k].clone() * f.clone();
                a[r][k] -= v;
            }
        }
    }
    det
}

const SCALE: i64 = 12;

/// Generators scaled by 12 so every entry is an integer.
fn integer_generators(body: &ConvexBody) -> Vec<Vec<i128>> {
    let to_int = |q: &Rational| {
        let s = q * int(SCALE);
        assert!(s.is_integer(), "entry {q} not a multiple of 1/12");
        i128::try_from(s.to_integer()).unwrap()
    };
    match body {
        ConvexBody::Box(b) => {
            let n = b.dim();
            b.sides().iter().enumerate().map(|(i, s)| (0..n).map(|j| if i == j { to_int(s) } else { 0 }).collect()).collect()
        }
        ConvexBody::Zonotope(z) => z.generators().iter().map(|g| g.iter().map(to_int).collect()).collect(),
        ConvexBody::Polygon(_) => unreachable!(),
    }
}

/// Inclusion–exclusion over subset sums, volumes as Σ|det| over generator n-sets.
fn polarization_oracle(bodies: &[ConvexBody]) -> Rational {
    let n = bodies.len();
    let gens: Vec<Vec<Vec<i128>>> = bodies.iter().map(integer_generators).collect();
    let mut total: i128 = 0;
    for mask in 1u32..(1 << n) {
        let union: Vec<&Vec<i128>> = (0..n).filter(|i| mask >> i & 1 == 1).flat_map(|i| gens[i].iter()).collect();
        let vol: i128 = union.iter().combinations(n).map(|c| det_i128(&c.into_iter().map(|v| (*v).clone()).collect::<Vec<_>>()).abs()).sum();
        let sign = if (n - mask.count_ones() as usize).is_multiple_of(2) { 1 } else { -1 };
        total += sign * vol;
    }
    let fact: i128 = (1..=n as i128).product();
    Rational::new(BigInt::from(total), BigInt::from(fact * (SCALE as i128).pow(n as u32)))
}

fn polygon_vertices(fan: &Fan, h: &[f64]) -> Vec<[f64; 2]> {
    let m = fan.len();
    let nr = fan.normals();
    (0..m)
        .map(|i| {
            let j = (i + 1) % m;
            let (a, b) = (nr[i], nr[j]);
            let d = a[0] * b[1] - a[1] * b[0];
            [(h[i] * b[1] - h[j] * a[1]) / d, (a[0] * h[j] - b[0] * h[i]) / d]
        })
        .collect()
}

fn hull(mut pts: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn shoelace(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    (0..n).map(|i| poly[i][0] * poly[(i + 1) % n][1] - poly[(i + 1) % n][0] * poly[i][1]).sum::<f64>() / 2.0
}

fn minkowski_area(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    shoelace(&hull(a.iter().flat_map(|p| b.iter().map(move |q| [p[0] + q[0], p[1] + q[1]])).collect()))
}

// ---------- reporting ----------

fn report(k: usize, name: &str, ok: bool, detail: String, started: Instant) -> bool {
    println!(
        "criterion {k} [{}] {name}: {detail} ({:.2}s)",
        if ok { "PASS" } else { "FAIL" },
        started.elapsed().as_secs_f64()
    );
    ok
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

// ---------- criteria ----------

fn criterion_1() -> bool {
    let t = Instant::now();
    let example = [ConvexBody::Box(AxisBox::at_origin(vec![int(1), int(2)]).unwrap()), ConvexBody::Box(AxisBox::at_origin(vec![int(3), int(1)]).unwrap())];
    let example_ok = mixed_volume(&example).unwrap().0 == Real::Exact(rat(7, 2)) && polarization_oracle(&example) == rat(7, 2);
    let failures: Vec<usize> = (0..500usize)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = sample_rng(SEED, i as u64);
            let n = 1 + i % 4;
            let bodies: Vec<ConvexBody> = (0..n)
                .map(|k| match i % 3 {
                    0 => ConvexBody::Box(random_box(&mut rng, n)),
                    1 => ConvexBody::Zonotope(random_zonotope(&mut rng, n, 5)),
                    _ if k % 2 == 0 => ConvexBody::Box(random_box(&mut rng, n)),
                    _ => ConvexBody::Zonotope(random_zonotope(&mut rng, n, 5)),
                })
                .collect();
            let expected = polarization_oracle(&bodies);
            let closed = mixed_volume(&bodies).unwrap().0;
            let library_oracle = mixed_volume_oracle(&bodies).unwrap();
            closed != Real::Exact(expected.clone()) || library_oracle != Real::Exact(expected)
        })
        .collect();
    report(1, "oracle equivalence", example_ok && failures.is_empty(), format!("500 families exact, 7/2 example {}, mismatches {:?}", if example_ok { "ok" } else { "WRONG" }, failures), t)
}

fn criterion_2() -> bool {
    let t = Instant::now();
    let failures: Vec<(usize, &str)> = (0..500usize)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = sample_rng(SEED + 2, i as u64);
            let m = 2 + i % 4;
            let mats: Vec<Matrix<Rational>> = (0..m).map(|_| random_rational_symmetric(&mut rng, m)).collect();
            let d = mixed_discriminant(&mats).unwrap();
            // (a) diagonal
            let same = vec![mats[0].clone(); m];
            if mixed_discriminant(&same).unwrap() != det_q(&mats[0]) {
                return Some((i, "diagonal"));
            }
            // (b) symmetry and multilinearity
            let mut perm = mats.clone();
            perm.rotate_left(1 + i % m);
            perm.swap(0, m - 1);
            if mixed_discriminant(&perm).unwrap() != d {
                return Some((i, "symmetry"));
            }
            let other = random_rational_symmetric(&mut rng, m);
            let (alpha, beta) = (small_rational(&mut rng, -5, 5, 3), small_rational(&mut rng, -5, 5, 2));
            let mut combo = mats.clone();
            combo[m - 1] = mats[m - 1].scale(&alpha).add(&other.scale(&beta));
            let mut with_other = mats.clone();
            with_other[m - 1] = other;
            if mixed_discriminant(&combo).unwrap() != alpha * d.clone() + beta * mixed_discriminant(&with_other).unwrap() {
                return Some((i, "multilinearity"));
            }
            // (c) congruence
            let u = random_rational_matrix(&mut rng, m);
            let conj: Vec<_> = mats.iter().map(|x| u.mul(x).mul(&u.transpose())).collect();
            if mixed_discriminant(&conj).unwrap() != det_q(&u.mul(&u.transpose())) * d.clone() {
                return Some((i, "congruence"));
            }
            // (d) PSD lists are nonnegative; (e) PD lists with one nonzero PSD are positive
            let psd: Vec<_> = (0..m).map(|_| random_rational_psd(&mut rng, m, 1 + i % m, 0)).collect();
            if mixed_discriminant(&psd).unwrap().is_negative() {
                return Some((i, "psd nonnegative"));
            }
            let mut pd: Vec<_> = (0..m - 1).map(|_| random_rational_psd(&mut rng, m, m, 1)).collect();
            let last = loop {
                let c = random_rational_psd(&mut rng, m, 1, 0);
                if !c.max_abs().is_zero() {
                    break c;
                }
            };
            pd.push(last);
            if !mixed_discriminant(&pd).unwrap().is_positive() {
                return Some((i, "pd positive"));
            }
            // rank-one formula det(V)²/m!
            let v = random_rational_matrix(&mut rng, m);
            let rank_one: Vec<_> = (0..m).map(|k| Matrix::outer(&v.column(k))).collect();
            let fact: i64 = (1..=m as i64).product();
            let dv = det_q(&v);
            if mixed_discriminant(&rank_one).unwrap() != dv.clone() * dv / int(fact) {
                return Some((i, "rank one"));
            }
            // (f) minor identity
            let row = i % m;
            let rest = &mats[1..];
            let mi = md_minor_identity(row, rest).unwrap();
            let mut e = vec![int(0); m];
            e[row] = int(1);
            let mut lhs_args = vec![Matrix::outer(&e)];
            lhs_args.extend(rest.iter().cloned());
            let minors: Vec<_> = rest.iter().map(|x| x.minor(row)).collect();
            let rhs = if m == 2 { minors[0][(0, 0)].clone() / int(2) } else { mixed_discriminant(&minors).unwrap() / int(m as i64) };
            if mi.lhs != mi.rhs || mi.lhs != mixed_discriminant(&lhs_args).unwrap() || mi.rhs != rhs {
                return Some((i, "minor identity"));
            }
            None
        })
        .collect();
    let trace_failures: Vec<usize> = (0..200usize)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = sample_rng(SEED + 22, i as u64);
            let k = 2 + i % 5;
            let a = random_rational_symmetric(&mut rng, k);
            let r = trace_identities(&a).unwrap();
            let tr = a.trace();
            let tr2 = a.mul(&a).trace();
            let kk = int(k as i64);
            !(r.d1_lhs == r.d1_rhs && r.d2_lhs == r.d2_rhs && r.d1_rhs == tr.clone() / kk.clone() && r.d2_rhs == (tr.clone() * tr - tr2) / (kk.clone() * (kk - int(1))))
        })
        .collect();
    let ok = failures.is_empty() && trace_failures.is_empty();
    report(2, "mixed-discriminant calculus", ok, format!("500 instances exact, 200 trace instances exact, failures {failures:?} {trace_failures:?}"), t)
}

fn criterion_3() -> bool {
    let t = Instant::now();
    let results: Vec<(bool, bool, f64)> = (0..10_000usize)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(SEED + 3, i as u64);
            let m = 2 + i % 4;
            let a = random_symmetric(&mut rng, m);
            let b = random_wishart(&mut rng, m, 1 + i % m);
            let ms: Vec<_> = (0..m - 2).map(|_| random_wishart(&mut rng, m, 1 + (i / 4) % m)).collect();
            let holds = verify_alexandrov(&a, &b, &ms, 1e-9).unwrap().holds;
            let lambda = gaussian(&mut rng);
            let eq = verify_alexandrov(&b.scale(&lambda), &b, &ms, 1e-9).unwrap();
            let (l, r) = (eq.lhs.to_f64(), eq.rhs.to_f64());
(holds, eq.holds, (l - r).abs() / l.abs().max(r.abs()).max(1.0))
        })
        .collect();
    let bad = results.iter().filter(|r| !r.0).count();
    let worst_eq = results.iter().map(|r| r.2).fold(0.0, f64::max);
    let bad_eq = results.iter().filter(|r| !r.1 || r.2 > 1e-9).count();
    report(3, "Alexandrov inequality", bad == 0 && bad_eq == 0, format!("10000 instances, violations {bad}, equality-case misses {bad_eq} (worst relative gap {worst_eq:.1e})"), t)
}

fn random_polygon(rng: &mut SampleRng) -> PolygonFan {
    let m = rng_range(rng, 3, 12);
    let fan = random_fan(rng, m);
    let h = random_positive_edge_support(rng, &fan);
    PolygonFan::new(fan, h).unwrap()
}

fn rng_range(rng: &mut SampleRng, lo: usize, hi: usize) -> usize {
    use rand::Rng;
    rng.random_range(lo..=hi)
}

fn criterion_4() -> bool {
    let t = Instant::now();
    let body_failures = (0..10_000usize)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = sample_rng(SEED + 4, i as u64);
            let n = 3 + i % 2;
            let mut body = |k: usize| match (i / 2 + k) % 3 {
                0 => ConvexBody::Box(random_box(&mut rng, n)),
                _ => ConvexBody::Zonotope(random_zonotope(&mut rng, n, 3)),
            };
            let (k, l) = (body(0), body(1));
            let refs: Vec<_> = (0..n - 2).map(|j| body(j + 2)).collect();
            let r = verify_af(&k, &l, &refs, 1e-9).unwrap();
            !(r.exact && r.holds)
        })
        .count();
    let fan_results: Vec<(bool, bool)> = (0..1000usize)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(SEED + 44, i as u64);
            let (k, l) = (random_polygon(&mut rng), random_polygon(&mut rng));
            let r = verify_af(&ConvexBody::Polygon(k.clone()), &ConvexBody::Polygon(l.clone()), &[], 1e-9).unwrap();
            let vk = polygon_vertices(k.fan(), k.support().values());
            let vl = polygon_vertices(l.fan(), l.support().values());
            let (ak, al) = (shoelace(&hull(vk.clone())), shoelace(&hull(vl.clone())));
            let mixed = (minkowski_area(&vk, &vl) - ak - al) / 2.0;
            let oracle_ok = rel_close(r.lhs.to_f64(), mixed * mixed, 1e-9) && rel_close(r.rhs.to_f64(), ak * al, 1e-9);
            (r.holds, oracle_ok)
        })
        .collect();
    let fan_bad = fan_results.iter().filter(|r| !r.0).count();
    let fan_oracle_bad = fan_results.iter().filter(|r| !r.1).count();
    let square = PolygonFan::from_points(Fan::regular(4, 0.0).unwrap(), &[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
    let diamond = PolygonFan::from_points(Fan::regular(4, PI / 4.0).unwrap(), &[[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]).unwrap();
    let sd = verify_af(&ConvexBody::Polygon(square), &ConvexBody::Polygon(diamond), &[], 1e-9).unwrap();
    let sd_ok = sd.holds && (sd.lhs.to_f64() - 4.0).abs() <= 1e-9 && (sd.rhs.to_f64() - 2.0).abs() <= 1e-9;
    let ok = body_failures == 0 && fan_bad == 0 && fan_oracle_bad == 0 && sd_ok;
    report(
        4,
        "Alexandrov-Fenchel inequality",
        ok,
        format!(
            "10000 box/zonotope instances (violations {body_failures}), 1000 polygon pairs (violations {fan_bad}, hull-oracle mismatches {fan_oracle_bad}), square/diamond lhs {} rhs {}",
            sd.lhs, sd.rhs
        ),
        t,
    )
}

/// Operators from criterion 5, reused by criterion 6.
struct Family {
    fans: Vec<OperatorPair<f64>>,
    boxes: Vec<(OperatorPair<f64>, AxisBox)>,
}

fn build_family() -> Family {
    let fans = (0..200usize)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(SEED + 5, i as u64);
            let fan = random_fan(&mut rng, 3 + i % 14);
            let h = random_positive_edge_support(&mut rng, &fan);
            fan_af_operator(&PolygonFan::new(fan, h).unwrap()).unwrap()
        })
        .collect();
    let boxes = (0..200usize)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(SEED + 55, i as u64);
            let b = random_centered_box(&mut rng, 3);
            (box_af_operator(&b).unwrap().to_f64(), b)
        })
        .collect();
    Family { fans, boxes }
}

fn criterion_5(family: &Family) -> bool {
    let t = Instant::now();
    let inertia_bad: Vec<usize> = (0..200usize)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = sample_rng(SEED + 5, i as u64);
            let m = 3 + i % 14;
            let fan = random_fan(&mut rng, m);
            let r = matrix_inertia(&polygon_form_matrix(&fan), None).unwrap();
            (r.positive, r.zero, r.negative) != (1, 2, m - 3)
        })
        .collect();
    let box_bad: Vec<usize> = family
        .boxes
        .par_iter()
        .enumerate()
        .filter(|(_, (op, b))| {
            let h: Vec<f64> = box_support_vector(b).unwrap().iter().map(Scalar::to_f64).collect();
            let r = spectrum_report(op, Some(&h), None, 1e-9).unwrap();
            !(r.dichotomy_holds && r.simple_top && r.top_parallel == Some(true) && r.inertia.positive == 1)
        })
        .map(|(i, _)| i)
        .collect();
    let cube = box_af_operator(&AxisBox::centered(vec![int(1); 3]).unwrap()).unwrap().to_f64();
    let cube_spectrum = spectrum_report(&cube, None, None, 1e-9).unwrap();
    let cube_ok = cube_spectrum.eigenvalues.iter().zip([1.0, 0.0, 0.0, 0.0, -0.5, -0.5]).all(|(a, b)| (a - b).abs() <= 1e-9);
    let ok = inertia_bad.is_empty() && box_bad.is_empty() && cube_ok;
    report(
        5,
        "spectral dichotomy",
        ok,
        format!("200 fans inertia (1,2,m-3) failures {inertia_bad:?}, 200 boxes failures {box_bad:?}, cube spectrum {:?}", cube_spectrum.eigenvalues.iter().map(|v| (v * 1e9).round() / 1e9).collect::<Vec<_>>()),
        t,
    )
}

fn criterion_6(family: &Family) -> bool {
    let t = Instant::now();
    const SAMPLES: usize = 10_000;
    const TOL: f64 = 1e-12;
    let cube_box = AxisBox::centered(vec![int(1); 3]).unwrap();
    let cube = box_af_operator(&cube_box).unwrap().to_f64();
    let mut worst = f64::INFINITY;
    let mut worst_oracle: f64 = 0.0;
    let mut failures = 0usize;
    let mut tally = |holds: bool, min: f64| {
        worst = worst.min(min);
        failures += usize::from(!holds);
    };
    for (k, op) in family.fans.iter().enumerate() {
        let r = bochner_check(op, None, SAMPLES, SEED + k as u64, TOL).unwrap();
        tally(r.holds, r.min_residual);
    }
    for (k, (op, b)) in family.boxes.iter().chain(std::iter::once(&(cube, cube_box))).enumerate() {
        let oracle = |x: &[f64]| box_mixed_form(x, x, b);
        let r = bochner_check(op, Some(&oracle), SAMPLES, SEED + 1000 + k as u64, TOL).unwrap();
        worst_oracle = worst_oracle.max(r.oracle_deviation.unwrap());
        tally(r.holds, r.min_residual);
    }
    let diag: Vec<(bool, f64)> = (0..40usize)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(SEED + 6, i as u64);
            let n = 3 + i % 4;
            let ms: Vec<_> = (0..n - 3).map(|_| random_wishart(&mut rng, n, n).add(&Matrix::identity(n).scale(&0.05))).collect();
            let op = diagonal_operator(n, &ms).unwrap();
            let r = bochner_check(&op, None, SAMPLES, SEED + 2000 + i as u64, TOL).unwrap();
            (r.holds, r.min_residual)
        })
        .collect();
    for (h, m) in diag {
        tally(h, m);
    }
    let d3 = diagonal_operator::<Rational>(3, &[]).unwrap().to_f64();
    let s3 = spectrum_report(&d3, None, None, 1e-9).unwrap();
    let d3_ok = s3.eigenvalues.iter().zip([1.0, -0.5, -0.5]).all(|(a, b)| (a - b).abs() <= 1e-9);
    let ok = failures == 0 && d3_ok && worst_oracle <= 1e-9;
    report(
        6,
        "Bochner inequality",
        ok,
        format!("441 operators x 10000 samples, min residual {worst:.3e}, failures {failures}, box mixed-volume oracle deviation {worst_oracle:.1e}, n=3 diagonal spectrum ok {d3_ok}"),
        t,
    )
}

fn raw_residual(m: &Matrix<f64>, x: &[f64], y: &[f64]) -> f64 {
    let f = |a: &[f64], b: &[f64]| a.iter().zip(m.mul_vec(b)).map(|(u, v)| u * v).sum::<f64>();
    f(x, y).powi(2) - f(x, x) * f(y, y)
}

fn criterion_7() -> bool {
    let t = Instant::now();
    let outcomes: Vec<Option<String>> = (0..1000usize)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(SEED + 7, i as u64);
            let n = 1 + i % 6;
            let s = if i % 2 == 0 {
                random_symmetric(&mut rng, n)
            } else {
                // Prescribed spectrum with at most two positive eigenvalues.
                let q = eigh(&random_symmetric(&mut rng, n)).unwrap();
                let positives = (i / 2) % 3;
                let lambda: Vec<f64> = (0..n)
                    .map(|k| {
                        let mag = 0.1 + 2.0 * gaussian(&mut rng).abs();
                        if k < positives { mag } else if k == n - 1 && i % 5 == 0 { 0.0 } else { -mag }
                    })
                    .collect();
                Matrix::from_fn(n, n, |r, c| (0..n).map(|k| q.vectors[(r, k)] * lambda[k] * q.vectors[(c, k)]).sum())
            };
            let op = OperatorPair::symmetric(s.clone()).unwrap();
            let r = hyperbolicity_check(&op, 500, SEED + i as u64, None).unwrap();
            let values = eigh(&s).unwrap().values;
            let scale = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let positives = values.iter().filter(|&&v| v > 1e-8 * scale).count();
            if r.hyperbolic != (positives <= 1) {
                return Some(format!("{i}: inertia verdict"));
            }
            if r.hyperbolic && !r.reverse_cs_holds() {
                return Some(format!("{i}: false reject"));
            }
            if !r.hyperbolic {
                let Some(w) = &r.witness else { return Some(format!("{i}: no witness")) };
                let yy: f64 = w.y.iter().zip(s.mul_vec(&w.y)).map(|(a, b)| a * b).sum();
                if raw_residual(&s, &w.x, &w.y) >= 0.0 || yy < 0.0 {
                    return Some(format!("{i}: witness does not violate"));
                }
            }
            None
        })
        .collect();
    let bad: Vec<String> = outcomes.into_iter().flatten().collect();
    let controls_ok = [Matrix::from_diag(&[1.0, 1.0]), Matrix::identity(3)].into_iter().all(|m| {
        let r = hyperbolicity_check(&OperatorPair::symmetric(m.clone()).unwrap(), 100, SEED, None).unwrap();
        !r.hyperbolic && r.witness.as_ref().is_some_and(|w| raw_residual(&m, &w.x, &w.y) < 0.0)
    });
    report(7, "hyperbolicity checker soundness", bad.is_empty() && controls_ok, format!("1000 matrices, disagreements {bad:?}, controls rejected with witness {controls_ok}"), t)
}

fn criterion_8() -> bool {
    let t = Instant::now();
    let worst: Vec<f64> = (0..500usize)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(SEED + 8, i as u64);
            let n = 1 + i % 32;
            let s = if i % 3 == 0 { random_wishart(&mut rng, n, 1 + n / 2) } else { random_symmetric(&mut rng, n) };
            let e = eigh(&s).unwrap();
            let (pair, orth, recon) = eigen_residuals(&s, &e);
            let norm = s.frobenius_norm().max(f64::MIN_POSITIVE);
            let trace_gap = (e.values.iter().sum::<f64>() - s.trace()).abs();
            [pair / norm, orth / norm.max(1.0), recon / norm, trace_gap / norm].into_iter().fold(0.0, f64::max)
        })
        .collect();
    let max = worst.iter().cloned().fold(0.0, f64::max);
    report(8, "eigensolver quality", max <= 1e-9, format!("500 matrices up to 32x32, worst relative residual {max:.2e}"), t)
}

fn main() {
    let t = Instant::now();
    let family = build_family();
    let results = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(&family),
        criterion_6(&family),
        criterion_7(),
        criterion_8(),
    ];
    let passed = results.iter().filter(|&&r| r).count();
    println!("acceptance: {passed}/{} criteria passed in {:.1}s", results.len(), t.elapsed().as_secs_f64());
    if passed != results.len() {
        std::process::exit(1);
    }
}
