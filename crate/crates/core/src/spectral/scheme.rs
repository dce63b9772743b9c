//! Composite polynomial schemes built from the stages `x^2`, `x(2-x)`, and
//! odd cubics `a x + b x^3`, with matrix-multiplication cost accounting.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::svd::two_norm;

/// One stage of a composite polynomial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stage {
    /// `x^2`.
    Square,
    /// `x(2 - x)`.
    Purify,
    /// `a x + b x^3`.
    Cubic { a: f64, b: f64 },
}

impl Stage {
    /// The cubic stage `(3x - x^3)/2` of the classical sign iteration.
    pub fn newton_schulz() -> Self {
        Stage::Cubic { a: 1.5, b: -0.5 }
    }

    pub fn apply(&self, x: f64) -> f64 {
        match *self {
            Stage::Square => x * x,
            Stage::Purify => x * (2.0 - x),
            Stage::Cubic { a, b } => a * x + b * x * x * x,
        }
    }

    /// Matrix-multiplication count of the stage: the square is one product,
    /// the purification reuses it (`x(2-x) = 2x - x^2`), and a cubic needs
    /// `x^2` and then `x \cdot x^2`.
    pub fn cost(&self) -> usize {
        match self {
            Stage::Square | Stage::Purify => 1,
            Stage::Cubic { .. } => 2,
        }
    }

    /// Odd stages commute with the sign symmetry `x -> -x`.
    pub fn is_odd(&self) -> bool {
        matches!(self, Stage::Cubic { .. })
    }

    fn describe(&self) -> String {
        match *self {
            Stage::Square => "square".into(),
            Stage::Purify => "purify".into(),
            Stage::Cubic { a, b } => {
                if (a - 1.5).abs() == 0.0 && (b + 0.5).abs() == 0.0 {
                    "newton_schulz".into()
                } else {
                    format!("cubic({a},{b})")
                }
            }
        }
    }

    fn parse(token: &str) -> Result<Self> {
        let token = token.trim();
        match token {
            "square" => Ok(Stage::Square),
            "purify" => Ok(Stage::Purify),
            "newton_schulz" => Ok(Stage::newton_schulz()),
            _ => {
                if let Some(body) = token
                    .strip_prefix("cubic(")
                    .and_then(|rest| rest.strip_suffix(')'))
                {
                    let mut parts = body.splitn(2, ',');
                    let a = parts
                        .next()
                        .and_then(|s| s.trim().parse::<f64>().ok());
                    let b = parts
                        .next()
                        .and_then(|s| s.trim().parse::<f64>().ok());
                    if let (Some(a), Some(b)) = (a, b) {
                        return Ok(Stage::Cubic { a, b });
                    }
                }
                Err(Error::Parse(format!("unknown stage '{token}'")))
            }
        }
    }
}

/// A composition of stages, applied left to right.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositionScheme {
    pub stages: Vec<Stage>,
}

/// Result of applying a scheme to a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SchemeMatrixEval {
    pub value: DenseMatrix,
    /// Matrix products spent.
    pub cost: usize,
    /// Set when the input norm exceeds one, where the iteration may
    /// diverge.
    pub norm_warning: bool,
}

impl CompositionScheme {
    pub fn new(stages: Vec<Stage>) -> Self {
        CompositionScheme { stages }
    }

    /// The empty scheme, evaluating to the identity `p(x) = x`.
    pub fn identity() -> Self {
        CompositionScheme { stages: Vec::new() }
    }

    /// A pattern of stages repeated a number of times.
    pub fn repeated(pattern: &[Stage], times: usize) -> Self {
        let mut stages = Vec::with_capacity(pattern.len() * times);
        for _ in 0..times {
            stages.extend_from_slice(pattern);
        }
        CompositionScheme { stages }
    }

    /// Concatenation; costs add.
    pub fn then(&self, other: &Self) -> Self {
        let mut stages = self.stages.clone();
        stages.extend_from_slice(&other.stages);
        CompositionScheme { stages }
    }

    /// Total matrix-multiplication cost.
    pub fn cost(&self) -> usize {
        self.stages.iter().map(Stage::cost).sum()
    }

    /// A scheme is odd when every stage is; the empty scheme is the odd
    /// identity map.
    pub fn is_odd(&self) -> bool {
        self.stages.iter().all(Stage::is_odd)
    }

    /// Parses a comma-separated stage list, e.g.
    /// `square,purify,newton_schulz,cubic(1.2,-0.3)`; the empty string is
    /// the identity scheme.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::identity());
        }
        // Split on commas outside parentheses so cubic(a,b) stays whole.
        let mut out = Vec::new();
        let mut depth = 0usize;
        let mut start = 0usize;
        let bytes = text.as_bytes();
        for (i, &b) in bytes.iter().enumerate() {
            match b {
                b'(' => depth += 1,
                b')' => depth = depth.saturating_sub(1),
                b',' if depth == 0 => {
                    out.push(Stage::parse(&text[start..i])?);
                    start = i + 1;
                }
                _ => {}
            }
        }
        out.push(Stage::parse(&text[start..])?);
        Ok(CompositionScheme { stages: out })
    }

    /// Comma-separated stage list; inverse of `parse`.
    pub fn describe(&self) -> String {
        self.stages
            .iter()
            .map(Stage::describe)
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn eval_scalar(&self, x: f64) -> f64 {
        self.stages.iter().fold(x, |v, s| s.apply(v))
    }

    /// Values after every stage, starting with the input itself.
    pub fn trajectory(&self, x: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.stages.len() + 1);
        out.push(x);
        let mut v = x;
        for s in &self.stages {
            v = s.apply(v);
            out.push(v);
        }
        out
    }

    /// Pointwise evaluation on a grid, with the scheme's matrix cost
    /// attached for reporting.
    pub fn eval_grid(&self, xs: &[f64]) -> (Vec<f64>, usize) {
        (
            xs.iter().map(|&x| self.eval_scalar(x)).collect(),
            self.cost(),
        )
    }

    /// Applies the scheme to a symmetric matrix using only multiplies,
    /// adds, and scalings, counting the multiplies.
    pub fn eval_symmetric(&self, a: &DenseMatrix) -> Result<SchemeMatrixEval> {
        let n = a.nrows();
        if n != a.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "scheme evaluation needs a square matrix, got {}x{}",
                n,
                a.ncols()
            )));
        }
        if !a.is_symmetric(1e-10 * a.max_abs().max(1.0)) {
            return Err(Error::InvalidArgument(
                "scheme evaluation needs a symmetric matrix".into(),
            ));
        }
        let norm_warning = two_norm(a)? > 1.0 + 1e-12;
        let mut x = a.clone();
        let mut cost = 0;
        for stage in &self.stages {
            match *stage {
                Stage::Square => {
                    x = x.matmul(&x);
                    cost += 1;
                }
                Stage::Purify => {
                    // x(2 - x) = 2x - x^2 with one product.
                    let sq = x.matmul(&x);
                    x = x.scale(2.0).add_scaled(-1.0, &sq);
                    cost += 1;
                }
                Stage::Cubic { a, b } => {
                    let sq = x.matmul(&x);
                    let cu = x.matmul(&sq);
                    x = x.scale(a).add_scaled(b, &cu);
                    cost += 2;
                }
            }
        }
        Ok(SchemeMatrixEval {
            value: x,
            cost,
            norm_warning,
        })
    }
}
