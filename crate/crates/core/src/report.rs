use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::scalar::{Rational, Real};

/// Default relative tolerance for floating-point comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Outcome of checking `lhs ≥ rhs`.
///
/// Exact inputs are compared exactly. Floating inputs pass when
/// `lhs ≥ rhs − tol·scale` with `scale = max(|lhs|, |rhs|, 1)`, and count as
/// equality when `|lhs − rhs| ≤ tol·scale`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub lhs: Real,
    pub rhs: Real,
    pub gap: Real,
    pub holds: bool,
    pub equality: bool,
    pub exact: bool,
}

impl InequalityReport {
    pub fn exact(lhs: Rational, rhs: Rational) -> Self {
        let gap = &lhs - &rhs;
        InequalityReport {
            holds: !gap.is_negative(),
            equality: gap == Rational::from_integer(0.into()),
            lhs: Real::Exact(lhs),
            rhs: Real::Exact(rhs),
            gap: Real::Exact(gap),
            exact: true,
        }
    }

    pub fn approx(lhs: f64, rhs: f64, tol: f64) -> Self {
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        let gap = lhs - rhs;
        InequalityReport {
            lhs: Real::Approx(lhs),
            rhs: Real::Approx(rhs),
            gap: Real::Approx(gap),
            holds: gap >= -tol * scale,
            equality: gap.abs() <= tol * scale,
            exact: false,
        }
    }

    /// Exact when both sides are, approximate otherwise.
    pub fn from_reals(lhs: Real, rhs: Real, tol: f64) -> Self {
        match (lhs, rhs) {
            (Real::Exact(a), Real::Exact(b)) => Self::exact(a, b),
            (a, b) => Self::approx(a.to_f64(), b.to_f64(), tol),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn exact_and_approx_verdicts() {
        let r = InequalityReport::exact(int(4), int(2));
        assert!(r.holds && !r.equality && r.gap == Real::Exact(int(2)));
        assert!(InequalityReport::exact(int(3), int(3)).equality);
        assert!(!InequalityReport::exact(int(1), int(2)).holds);
        let near = InequalityReport::approx(1.0, 1.0 + 1e-12, 1e-9);
        assert!(near.holds && near.equality);
        assert!(!InequalityReport::approx(1.0, 1.1, 1e-9).holds);
    }
}
