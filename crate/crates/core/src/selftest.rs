//! Fast built-in property checks run by `mixed-af selftest`.

use serde::{Deserialize, Serialize};

use crate::afop::{bochner_check, box_af_operator, fan_af_operator, polygon_form_matrix, spectrum_report};
use crate::geom::{AxisBox, ConvexBody, PolygonFan};
use crate::matrix::Matrix;
use crate::mixdisc::{diagonal_operator, md_minor_identity, mixed_discriminant, rank_one_value, trace_identities, verify_alexandrov};
use crate::mixvol::{mixed_volume, mixed_volume_oracle, verify_af};
use crate::par::{map_range, Execution};
use crate::sampling::*;
use crate::scalar::{int, Real};
use crate::spectral::{eigen_residuals, eigh, hyperbolicity_check, matrix_inertia, OperatorPair};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct SelftestConfig {
    pub seed: u64,
    /// Monte Carlo samples per sampled check.
    pub samples: usize,
    /// Random instances per family.
    pub trials: usize,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig { seed: 0, samples: 10_000, trials: 40 }
    }
}

fn check(name: &str, failures: usize, total: usize) -> CheckResult {
    CheckResult { name: name.into(), passed: failures == 0, detail: format!("{}/{total} instances passed", total - failures) }
}

fn count_failures(trials: usize, f: impl Fn(usize) -> bool + Sync + Send) -> usize {
    map_range(Execution::default(), trials, f).into_iter().filter(|ok| !ok).count()
}

pub fn run(cfg: &SelftestConfig) -> Vec<CheckResult> {
    let seed = cfg.seed;
    let t = cfg.trials;
    let mut out = Vec::new();

    out.push(check("engines match inclusion–exclusion", count_failures(t, |i| {
        let mut rng = sample_rng(seed, i as u64);
        let n = 1 + i % 3;
        let bodies: Vec<ConvexBody> = (0..n)
            .map(|k| if (i + k) % 2 == 0 { ConvexBody::Box(random_box(&mut rng, n)) } else { ConvexBody::Zonotope(random_zonotope(&mut rng, n, 3)) })
            .collect();
        match (mixed_volume(&bodies), mixed_volume_oracle(&bodies)) {
            (Ok((Real::Exact(a), _)), Ok(Real::Exact(b))) => a == b,
            _ => false,
        }
    }), t));

    out.push(check("mixed-discriminant identities", count_failures(t, |i| {
        let mut rng = sample_rng(seed ^ 1, i as u64);
        let m = 2 + i % 3;
        let mats: Vec<_> = (0..m).map(|_| random_rational_symmetric(&mut rng, m)).collect();
        let v = random_rational_matrix(&mut rng, m);
        let rank_one: Vec<_> = (0..m).map(|k| { let c = v.column(k); Matrix::outer(&c) }).collect();
        let ok_rank = mixed_discriminant(&rank_one).ok() == Some(rank_one_value(&v));
        let ok_minor = md_minor_identity(0, &mats[..m - 1]).map(|r| r.lhs == r.rhs).unwrap_or(false);
        let mut rev = mats.clone();
        rev.reverse();
        let ok_sym = mixed_discriminant(&mats).ok() == mixed_discriminant(&rev).ok();
        let ok_trace = trace_identities(&mats[0]).map(|r| r.d1_lhs == r.d1_rhs && r.d2_lhs == r.d2_rhs).unwrap_or(false);
        ok_rank && ok_minor && ok_sym && ok_trace
    }), t));

    let alex = (cfg.samples / 10).max(t);
    out.push(check("Alexandrov inequality", count_failures(alex, |i| {
        let mut rng = sample_rng(seed ^ 2, i as u64);
        let m = 2 + i % 4;
        let a = random_symmetric(&mut rng, m);
        let b = random_wishart(&mut rng, m, m);
        let ms: Vec<_> = (0..m - 2).map(|_| random_wishart(&mut rng, m, m)).collect();
        verify_alexandrov(&a, &b, &ms, 1e-9).map(|r| r.holds).unwrap_or(false)
    }), alex));

    out.push(check("AF inequality on boxes and zonotopes", count_failures(t, |i| {
        let mut rng = sample_rng(seed ^ 3, i as u64);
        let n = 3 + i % 2;
        let mut body = |k: usize| if k.is_multiple_of(2) { ConvexBody::Box(random_box(&mut rng, n)) } else { ConvexBody::Zonotope(random_zonotope(&mut rng, n, 3)) };
        let k = body(i);
        let l = body(i + 1);
        let refs: Vec<_> = (0..n - 2).map(|j| body(i + j)).collect();
        verify_af(&k, &l, &refs, 1e-9).map(|r| r.holds).unwrap_or(false)
    }), t));

    out.push(check("polygon form inertia (1, 2, m−3)", count_failures(t, |i| {
        let mut rng = sample_rng(seed ^ 4, i as u64);
        let m = 3 + i % 12;
        let fan = random_fan(&mut rng, m);
        matrix_inertia(&polygon_form_matrix(&fan), None).map(|r| (r.positive, r.zero, r.negative) == (1, 2, m - 3)).unwrap_or(false)
    }), t));

    out.push(check("box operator dichotomy and top eigenvector", count_failures(t, |i| {
        let mut rng = sample_rng(seed ^ 5, i as u64);
        let b = random_centered_box(&mut rng, 3);
        let Ok(op) = box_af_operator(&b) else { return false };
        let h: Vec<f64> = crate::afop::box_support_vector(&b).unwrap().iter().map(crate::scalar::Scalar::to_f64).collect();
        spectrum_report(&op.to_f64(), Some(&h), None, 1e-9).map(|r| r.certified()).unwrap_or(false)
    }), t));

    let bochner_samples = cfg.samples.max(1);
    out.push(check("Bochner residual on operators", count_failures(t, |i| {
        let mut rng = sample_rng(seed ^ 6, i as u64);
        let op = match i % 3 {
            0 => box_af_operator(&random_centered_box(&mut rng, 3)).map(|o| o.to_f64()),
            1 => {
                let fan = random_fan(&mut rng, 3 + i % 8);
                let h = random_positive_edge_support(&mut rng, &fan);
                PolygonFan::new(fan, h).and_then(|p| fan_af_operator(&p))
            }
            _ => {
                let n = 3 + i % 3;
                let ms: Vec<_> = (0..n - 3).map(|_| random_wishart(&mut rng, n, n).add(&Matrix::identity(n).scale(&0.1))).collect();
                diagonal_operator(n, &ms)
            }
        };
        op.and_then(|op| bochner_check(&op, None, bochner_samples / t.max(1) + 1, seed, 1e-12)).map(|r| r.holds).unwrap_or(false)
    }), t));

    let cube = AxisBox::centered(vec![int(1); 3]).and_then(|b| box_af_operator(&b));
    let cube_ok = cube
        .and_then(|op| spectrum_report(&op.to_f64(), None, None, 1e-9))
        .map(|r| {
            let want = [1.0, 0.0, 0.0, 0.0, -0.5, -0.5];
            r.eigenvalues.iter().zip(want).all(|(a, b)| (a - b).abs() <= 1e-9)
        })
        .unwrap_or(false);
    out.push(check("unit cube spectrum", usize::from(!cube_ok), 1));

    out.push(check("hyperbolicity verdict agrees with sampling", count_failures(t, |i| {
        let mut rng = sample_rng(seed ^ 7, i as u64);
        let n = 2 + i % 5;
        let Ok(op) = OperatorPair::symmetric(random_symmetric(&mut rng, n)) else { return false };
        hyperbolicity_check(&op, 200, seed, None)
            .map(|r| if r.hyperbolic { r.sampled_violations == 0 && r.witness.is_none() } else { r.witness.is_some_and(|w| w.residual < 0.0) })
            .unwrap_or(false)
    }), t));

    out.push(check("eigensolver residuals", count_failures(t, |i| {
        let mut rng = sample_rng(seed ^ 8, i as u64);
        let s = random_symmetric(&mut rng, 1 + i % 16);
        eigh(&s).map(|e| {
            let (pair, orth, recon) = eigen_residuals(&s, &e);
            let scale = s.frobenius_norm().max(1.0);
            pair <= 1e-9 * scale && orth <= 1e-9 && recon <= 1e-9 * scale
        }).unwrap_or(false)
    }), t));

    out
}
