//! Sup-norm error of a composite scheme against the sign function on
//! `[-1, -delta] u [delta, 1]`, with an equioscillation diagnostic.

use crate::error::{Error, Result};
use crate::spectral::scheme::CompositionScheme;

/// Grid measurement of `p(x) - sign(x)`.
#[derive(Debug, Clone)]
pub struct SignErrorReport {
    /// Sup-norm error over both intervals.
    pub sup_error: f64,
    /// Sup of `|p(x) - 1|` on `[delta, 1]`; for projector-purification
    /// schemes this is the step-function error on the positive branch.
    pub positive_error: f64,
    /// Sup of `|p(x) + 1|` on `[-1, -delta]`.
    pub negative_error: f64,
    /// Grid point attaining the sup.
    pub worst_x: f64,
    /// Count of sign alternations of the error along the grid, low to
    /// high; the equioscillation diagnostic.
    pub alternations: usize,
    /// Whether the scheme is odd, in which case the negative branch was
    /// mirrored from the positive one.
    pub odd: bool,
    /// Points per interval, endpoints included.
    pub grid_points: usize,
}

/// Measures a scheme against `sign(x)` on a dense grid of both intervals of
/// `I = [-1, -delta] u [delta, 1]`; endpoints are always evaluated. Odd
/// schemes are evaluated on the positive interval only and mirrored.
pub fn sign_error(
    scheme: &CompositionScheme,
    delta: f64,
    grid_points: usize,
) -> Result<SignErrorReport> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "interval parameter must lie in (0, 1), got {delta}"
        )));
    }
    if grid_points < 2 {
        return Err(Error::InvalidArgument(
            "grid needs at least the two endpoints".into(),
        ));
    }
    let m = grid_points;
    let mut xs = Vec::with_capacity(m);
    for i in 0..m {
        xs.push(delta + (1.0 - delta) * i as f64 / (m - 1) as f64);
    }
    xs[0] = delta;
    xs[m - 1] = 1.0;
    let pvals: Vec<f64> = xs.iter().map(|&x| scheme.eval_scalar(x)).collect();

    let odd = scheme.is_odd();
    // Error samples ordered low to high across the whole domain: the
    // negative interval ascending from -1 to -delta, then the positive one.
    let mut errors = Vec::with_capacity(2 * m);
    let mut worst = (0.0_f64, 0.0_f64);
    let mut negative_error = 0.0_f64;
    if odd {
        for i in (0..m).rev() {
            // p(-x) = -p(x), so the error at -x is -(p(x) - 1).
            let e = -(pvals[i] - 1.0);
            errors.push(e);
            negative_error = negative_error.max(e.abs());
            if e.abs() > worst.1 {
                worst = (-xs[i], e.abs());
            }
        }
    } else {
        for i in (0..m).rev() {
            let e = scheme.eval_scalar(-xs[i]) + 1.0;
            errors.push(e);
            negative_error = negative_error.max(e.abs());
            if e.abs() > worst.1 {
                worst = (-xs[i], e.abs());
            }
        }
    }
    let mut positive_error = 0.0_f64;
    for i in 0..m {
        let e = pvals[i] - 1.0;
        errors.push(e);
        positive_error = positive_error.max(e.abs());
        if e.abs() > worst.1 {
            worst = (xs[i], e.abs());
        }
    }

    let mut alternations = 0;
    let mut last_sign = 0i8;
    for &e in &errors {
        let s = if e > 0.0 {
            1
        } else if e < 0.0 {
            -1
        } else {
            0
        };
        if s != 0 {
            if last_sign != 0 && s != last_sign {
                alternations += 1;
            }
            last_sign = s;
        }
    }

    Ok(SignErrorReport {
        sup_error: positive_error.max(negative_error),
        positive_error,
        negative_error,
        worst_x: worst.0,
        alternations,
        odd,
        grid_points: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::scheme::Stage;

    #[test]
    fn identity_scheme_error_is_one_minus_delta() {
        let rep = sign_error(&CompositionScheme::identity(), 0.25, 101).unwrap();
        assert!((rep.sup_error - 0.75).abs() <= 1e-14);
        assert!((rep.worst_x.abs() - 0.25).abs() <= 1e-14, "worst at the inner edge");
        assert_eq!(rep.alternations, 1);
        assert!(rep.odd);
    }

    #[test]
    fn newton_schulz_error_decreases_strictly_until_tiny() {
        let mut previous = f64::INFINITY;
        let mut reached = false;
        for t in 1..=25 {
            let scheme = CompositionScheme::repeated(&[Stage::newton_schulz()], t);
            let e = sign_error(&scheme, 0.1, 10_000).unwrap().sup_error;
            assert!(e < previous, "stage {t}: {e} did not improve on {previous}");
            previous = e;
            if e < 1e-8 {
                reached = true;
                break;
            }
        }
        assert!(reached, "error never fell below 1e-8");
    }

    #[test]
    fn purify_first_alternation_converges_above_its_threshold() {
        // The composite (x(2-x))^2 fixes 1 - mu = (3 - sqrt(5))/2; starting
        // the alternation with the purification stage pulls every point of
        // [delta, 1] with delta above that threshold into the basin of one.
        let delta = 0.5;
        let mut previous = f64::INFINITY;
        let mut reached = false;
        for t in 1..=12 {
            let scheme = CompositionScheme::repeated(&[Stage::Purify, Stage::Square], t);
            let e = sign_error(&scheme, delta, 2001).unwrap().positive_error;
            assert!(e < previous, "round {t}: {e} vs {previous}");
            previous = e;
            if e <= 1e-10 {
                reached = true;
                break;
            }
        }
        assert!(reached, "step error never fell below 1e-10");

        // Below the golden threshold the square-first variant collapses the
        // same interval toward zero instead.
        let collapsed = CompositionScheme::repeated(&[Stage::Square, Stage::Purify], 10);
        let rep = sign_error(&collapsed, delta, 2001).unwrap();
        assert!(rep.positive_error > 0.9);
    }

    #[test]
    fn square_stage_breaks_sign_symmetry() {
        let delta = 0.3;
        let rep = sign_error(&CompositionScheme::new(vec![Stage::Square]), delta, 501).unwrap();
        assert!(!rep.odd);
        // On the negative branch x^2 is positive, so the error against -1
        // peaks at 2 at x = -1.
        assert!((rep.negative_error - 2.0).abs() <= 1e-14);
        assert!((rep.positive_error - (1.0 - delta * delta)).abs() <= 1e-14);
        assert!((rep.sup_error - 2.0).abs() <= 1e-14);
    }

    #[test]
    fn odd_schemes_have_an_odd_alternation_count() {
        for t in [1, 2, 3, 5] {
            let scheme = CompositionScheme::repeated(&[Stage::newton_schulz()], t);
            let rep = sign_error(&scheme, 0.1, 1001).unwrap();
            assert_eq!(rep.alternations % 2, 1, "stages {t}");
        }
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        let id = CompositionScheme::identity();
        assert!(sign_error(&id, 0.0, 100).is_err());
        assert!(sign_error(&id, 1.0, 100).is_err());
        assert!(sign_error(&id, 0.5, 1).is_err());
    }
}
