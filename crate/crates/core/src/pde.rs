//! Benchmark linear systems from 2-D elliptic model problems on a uniform
//! grid with zero Dirichlet boundaries, plus diagonal-dominance
//! classification of the resulting (or any) sparse matrices.
//!
//! Grid ordering is row-major lexicographic: interior point `(i, j)` (column
//! `i`, row `j`) maps to unknown `i + j * nx`. This is fixed so generated
//! matrices are bit-reproducible.

use num_complex::Complex64;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

/// Uniform grid of interior points for the unit-square model problems.
#[derive(Debug, Clone, Copy)]
pub struct Grid2D {
    nx: usize,
    ny: usize,
    h: f64,
}

impl Grid2D {
    pub fn new(nx: usize, ny: usize, h: f64) -> Result<Self> {
        if nx < 1 || ny < 1 {
            return Err(Error::InvalidArgument(
                "grid needs at least one interior point per direction".into(),
            ));
        }
        if !(h > 0.0) {
            return Err(Error::InvalidArgument("mesh spacing must be positive".into()));
        }
        Ok(Self { nx, ny, h })
    }

    /// Unit mesh spacing, the common benchmark normalization.
    pub fn unit(nx: usize, ny: usize) -> Result<Self> {
        Self::new(nx, ny, 1.0)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn num_unknowns(&self) -> usize {
        self.nx * self.ny
    }

    /// Physical position of interior point `(i, j)`; boundaries sit at
    /// offsets 0 and `(n + 1) h`.
    pub fn position(&self, i: usize, j: usize) -> (f64, f64) {
        ((i as f64 + 1.0) * self.h, (j as f64 + 1.0) * self.h)
    }

    fn index(&self, i: usize, j: usize) -> usize {
        i + j * self.nx
    }
}

/// Position-dependent coefficient, evaluated per grid node as an `(x, y)`
/// component pair. Isotropic scalars report the same value in both slots;
/// convection fields report the velocity components.
#[derive(Clone)]
pub enum CoefficientField {
    Constant(f64),
    ConstantPair(f64, f64),
    Field(Arc<dyn Fn(f64, f64) -> (f64, f64) + Send + Sync>),
}

impl std::fmt::Debug for CoefficientField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Constant(a) => write!(f, "Constant({a})"),
            Self::ConstantPair(x, y) => write!(f, "ConstantPair({x}, {y})"),
            Self::Field(_) => write!(f, "Field(..)"),
        }
    }
}

impl CoefficientField {
    pub fn from_fn(f: impl Fn(f64, f64) -> (f64, f64) + Send + Sync + 'static) -> Self {
        Self::Field(Arc::new(f))
    }

    /// Piecewise constant in `x`: `left` for `x < split`, `right` otherwise.
    pub fn jump_x(split: f64, left: f64, right: f64) -> Self {
        Self::from_fn(move |x, _| {
            let v = if x < split { left } else { right };
            (v, v)
        })
    }

    pub fn eval(&self, x: f64, y: f64) -> (f64, f64) {
        match self {
            Self::Constant(a) => (*a, *a),
            Self::ConstantPair(ax, ay) => (*ax, *ay),
            Self::Field(f) => f(x, y),
        }
    }
}

/// Discretization scheme for the convection term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvectionScheme {
    Centered,
    Upwind,
}

/// Diagonal-dominance classes, ordered weakest to strongest. Each stronger
/// class implies the previous one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominanceClass {
    /// Not symmetric diagonally dominant.
    None,
    /// Symmetric, every row diagonally dominant.
    Sdd,
    /// Additionally all off-diagonal entries nonpositive.
    Sddm,
    /// Additionally every weakly dominant row is connected through nonzero
    /// entries to some strictly dominant row (weakly chained).
    Swcddm,
}

/// Classification result with the per-row dominance margins
/// `|m_ii| - sum_{j != i} |m_ij|` that the class was decided from.
#[derive(Debug, Clone)]
pub struct MatrixClass {
    pub class: DominanceClass,
    pub row_margins: Vec<f64>,
}

fn edge_coefficient(a: &CoefficientField, p: (f64, f64), q: (f64, f64)) -> (f64, f64) {
    // Arithmetic average of the node values on the two sides of the edge;
    // keeps the operator symmetric and reduces to the plain stencil for
    // constant coefficients.
    let (ax1, ay1) = a.eval(p.0, p.1);
    let (ax2, ay2) = a.eval(q.0, q.1);
    (0.5 * (ax1 + ax2), 0.5 * (ay1 + ay2))
}

/// Five-point finite-difference matrix for `-div(a grad u)` with zero
/// Dirichlet boundaries. Variable coefficients are averaged arithmetically
/// onto cell edges; the output is symmetric, and for `a = 1`, `h = 1` each
/// interior row carries the classic `{4, -1, -1, -1, -1}` stencil.
pub fn gen_diffusion_2d(grid: &Grid2D, a: &CoefficientField) -> Result<SparseMatrix<f64>> {
    gen_convdiff_2d(grid, a, &CoefficientField::Constant(0.0), ConvectionScheme::Centered)
}

/// Five-point convection--diffusion matrix for
/// `-div(a grad u) + b . grad u` with zero Dirichlet boundaries.
///
/// Centered: west `-a_x - b_x/2`, east `-a_x + b_x/2`, center `2a_x + 2a_y`.
/// Upwind biases the difference against the flow so the convection term
/// adds `|b_x| + |b_y|` to the diagonal, keeping every row diagonally
/// dominant regardless of the velocity; a zero component falls back to the
/// centered difference for that component. All entries are scaled by
/// `1/h^2` (convection by `1/h`, i.e. a unit-velocity normalization per
/// cell).
pub fn gen_convdiff_2d(
    grid: &Grid2D,
    a: &CoefficientField,
    b: &CoefficientField,
    scheme: ConvectionScheme,
) -> Result<SparseMatrix<f64>> {
    let (nx, ny, h) = (grid.nx, grid.ny, grid.h);
    let inv_h2 = 1.0 / (h * h);
    let inv_h = 1.0 / h;
    let n = grid.num_unknowns();
    let mut triplets: Vec<(usize, usize, f64)> = Vec::with_capacity(5 * n);

    for j in 0..ny {
        for i in 0..nx {
            let p = grid.position(i, j);
            let (ax_here, ay_here) = a.eval(p.0, p.1);
            if ax_here < 0.0 || ay_here < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "negative diffusion coefficient at ({}, {})",
                    p.0, p.1
                )));
            }
            let (bx, by) = b.eval(p.0, p.1);

            // Edge-averaged diffusion coefficients toward the four
            // neighbors (boundary nodes included in the average).
            let west = ((i as f64) * h, p.1);
            let east = ((i as f64 + 2.0) * h, p.1);
            let south = (p.0, (j as f64) * h);
            let north = (p.0, (j as f64 + 2.0) * h);
            let aw = edge_coefficient(a, p, west).0;
            let ae = edge_coefficient(a, p, east).0;
            let as_ = edge_coefficient(a, p, south).1;
            let an = edge_coefficient(a, p, north).1;
            if aw < 0.0 || ae < 0.0 || as_ < 0.0 || an < 0.0 {
                return Err(Error::InvalidArgument(
                    "negative edge-averaged diffusion coefficient".into(),
                ));
            }

            // Convection contributions per component.
            let (cw, ce, cx_diag) = match scheme {
                ConvectionScheme::Centered => (-0.5 * bx, 0.5 * bx, 0.0),
                ConvectionScheme::Upwind => (-bx.max(0.0), bx.min(0.0), bx.abs()),
            };
            let (cs, cn, cy_diag) = match scheme {
                ConvectionScheme::Centered => (-0.5 * by, 0.5 * by, 0.0),
                ConvectionScheme::Upwind => (-by.max(0.0), by.min(0.0), by.abs()),
            };

            let row = grid.index(i, j);
            let mut center = (aw + ae + as_ + an) * inv_h2 + (cx_diag + cy_diag) * inv_h;
            if center == 0.0 {
                // Degenerate coefficient-free node: keep the row nonsingular
                // by leaving an explicit unit diagonal.
                center = inv_h2;
            }
            triplets.push((row, row, center));
            if i > 0 {
                triplets.push((row, grid.index(i - 1, j), -aw * inv_h2 + cw * inv_h));
            }
            if i + 1 < nx {
                triplets.push((row, grid.index(i + 1, j), -ae * inv_h2 + ce * inv_h));
            }
            if j > 0 {
                triplets.push((row, grid.index(i, j - 1), -as_ * inv_h2 + cs * inv_h));
            }
            if j + 1 < ny {
                triplets.push((row, grid.index(i, j + 1), -an * inv_h2 + cn * inv_h));
            }
        }
    }
    SparseMatrix::from_triplets(n, n, &triplets)
}

/// Indefinite Helmholtz-type shift `A - k^2 I`. For `k = 0` the matrix is
/// returned with identical structure and values.
pub fn gen_helmholtz(a: &SparseMatrix<f64>, k: f64) -> Result<SparseMatrix<f64>> {
    a.shift_diagonal(-k * k)
}

/// Complex-shifted variant `A - (alpha + i beta) k^2 I` used as a
/// preconditioner template for the indefinite problem. The result is
/// complex symmetric (not Hermitian) whenever `A` is symmetric and
/// `beta != 0`.
pub fn shifted_laplacian_preconditioner(
    a: &SparseMatrix<f64>,
    k: f64,
    alpha: f64,
    beta: f64,
) -> Result<SparseMatrix<Complex64>> {
    let shift = -Complex64::new(alpha, beta) * (k * k);
    a.to_complex().shift_diagonal(shift)
}

/// Relative tolerance separating strict dominance, weak dominance, and
/// violation, scaled per row.
fn margin_state(margin: f64, scale: f64) -> std::cmp::Ordering {
    let tol = 1e-14 * scale.max(1.0);
    if margin > tol {
        std::cmp::Ordering::Greater // strictly dominant
    } else if margin < -tol {
        std::cmp::Ordering::Less // dominance violated
    } else {
        std::cmp::Ordering::Equal // weakly dominant
    }
}

/// Classify a square sparse matrix by diagonal dominance. The strict margin
/// for row `i` is `|m_ii| - sum_{j != i} |m_ij|`; the class is the
/// strongest of: symmetric with all margins nonnegative (SDD), additionally
/// nonpositive off-diagonals (SDDM), additionally every zero-margin row
/// linked by a chain of nonzero entries to a positive-margin row (SWCDDM).
pub fn classify_matrix(m: &SparseMatrix<f64>) -> Result<MatrixClass> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(
            "classification requires a square matrix".into(),
        ));
    }
    let n = m.nrows();
    let mut row_margins = Vec::with_capacity(n);
    let mut scales = Vec::with_capacity(n);
    for i in 0..n {
        let (cols, vals) = m.row(i);
        let mut diag = 0.0f64;
        let mut off = 0.0f64;
        for (&j, &v) in cols.iter().zip(vals) {
            if j == i {
                diag = v.abs();
            } else {
                off += v.abs();
            }
        }
        row_margins.push(diag - off);
        scales.push(diag + off);
    }

    let all_dominant = row_margins
        .iter()
        .zip(&scales)
        .all(|(&m, &s)| margin_state(m, s) != std::cmp::Ordering::Less);
    if !m.is_symmetric() || !all_dominant {
        return Ok(MatrixClass {
            class: DominanceClass::None,
            row_margins,
        });
    }

    let off_diag_nonpositive = (0..n).all(|i| {
        let (cols, vals) = m.row(i);
        cols.iter().zip(vals).all(|(&j, &v)| j == i || v <= 0.0)
    });
    if !off_diag_nonpositive {
        return Ok(MatrixClass {
            class: DominanceClass::Sdd,
            row_margins,
        });
    }

    // Weakly chained: breadth-first search from the strictly dominant rows
    // along nonzero entries (symmetric, so direction is immaterial) must
    // reach every weakly dominant row.
    let strict: Vec<usize> = (0..n)
        .filter(|&i| margin_state(row_margins[i], scales[i]) == std::cmp::Ordering::Greater)
        .collect();
    let mut reached = vec![false; n];
    let mut queue: std::collections::VecDeque<usize> = strict.iter().copied().collect();
    for &i in &strict {
        reached[i] = true;
    }
    while let Some(i) = queue.pop_front() {
        let (cols, _) = m.row(i);
        for &j in cols {
            if !reached[j] {
                reached[j] = true;
                queue.push_back(j);
            }
        }
    }
    let chained = reached.iter().all(|&r| r);
    Ok(MatrixClass {
        class: if chained && !strict.is_empty() {
            DominanceClass::Swcddm
        } else {
            DominanceClass::Sddm
        },
        row_margins,
    })
}

/// True iff every entry satisfies `|m_ij| <= n^c` and `|m_ij| * n^c` is an
/// integer to `1e-12` absolute tolerance — the "polynomially bounded
/// integer-representable" side condition on benchmark matrices.
pub fn poly_bounded_check(m: &SparseMatrix<f64>, c: f64) -> bool {
    let n = m.nrows().max(m.ncols()) as f64;
    let nc = n.powf(c);
    m.values().iter().all(|v| {
        let av = v.abs();
        av <= nc + 1e-12 && (av * nc - (av * nc).round()).abs() <= 1e-12
    })
}
