//! Franck–Condon overlaps between bare and displaced phonon number states.
//!
//! The matrix element `U[n][m] = <n| exp[beta (b† - b)] |m>` couples the
//! waveguide channel with `n` phonons to the cavity state whose mirror sits in
//! the displaced Fock state `|m~>`. Rows carry the bare index, columns the
//! displaced one.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest basis the dense matrix-exponential oracle accepts.
pub const ORACLE_MAX_DIM: usize = 200;

/// Displacement of the mirror produced by one intracavity photon, `g0 / Omega`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisplacementParameter(f64);

impl DisplacementParameter {
    pub fn new(beta: f64) -> Result<Self> {
        if !beta.is_finite() {
            return Err(invalid("beta", format!("must be finite, got {beta}")));
        }
        Ok(Self(beta))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// How many levels to carry while building the overlap table.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct TruncationConfig {
    /// Explicit internal dimension; `None` selects [`default_internal_dim`].
    pub dim_internal: Option<usize>,
}

/// `(n_max + 1) + ceil(10 beta^2) + 20`.
pub fn default_internal_dim(beta: f64, n_max: usize) -> usize {
    (n_max + 1) + (10.0 * beta * beta).ceil() as usize + 20
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverlapMatrix {
    beta: DisplacementParameter,
    dim_external: usize,
    dim_internal: usize,
    // dim_internal x dim_internal, row major
    entries: Vec<f64>,
}

impl OverlapMatrix {
    pub fn beta(&self) -> DisplacementParameter {
        self.beta
    }

    /// Number of rows and columns exposed, `n_max + 1`.
    pub fn dim(&self) -> usize {
        self.dim_external
    }

    pub fn dim_internal(&self) -> usize {
        self.dim_internal
    }

    /// `<n|m~>`. Panics when either index is outside the exposed block.
    #[inline]
    pub fn get(&self, n: usize, m: usize) -> f64 {
        assert!(
            n < self.dim_external && m < self.dim_external,
            "overlap index ({n}, {m}) outside {0}x{0}",
            self.dim_external
        );
        self.entries[n * self.dim_internal + m]
    }

    /// Sum of squares of row `n` over every internally computed column.
    pub fn row_norm_sq(&self, n: usize) -> f64 {
        assert!(n < self.dim_internal);
        let row = &self.entries[n * self.dim_internal..(n + 1) * self.dim_internal];
        row.iter().map(|x| x * x).sum()
    }

    /// Internal Gram element `sum_k U[n][k] U[m][k]`.
    pub fn gram(&self, n: usize, m: usize) -> f64 {
        let d = self.dim_internal;
        let a = &self.entries[n * d..(n + 1) * d];
        let b = &self.entries[m * d..(m + 1) * d];
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    /// Exposed block as a dense matrix.
    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim_external, self.dim_external, |n, m| self.get(n, m))
    }

    /// Exposed block as rows of values.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim_external)
            .map(|n| (0..self.dim_external).map(|m| self.get(n, m)).collect())
            .collect()
    }
}

/// Closed-form overlaps for `n, m <= n_max`.
///
/// For `n >= m`,
/// `U[n][m] = e^{-x/2} sqrt(m!/n!) beta^{n-m} L_m^{(n-m)}(x)` with `x = beta^2`,
/// and `U[m][n] = (-1)^{n-m} U[n][m]`. Each diagonal `a = n - m` is generated by
/// the normalized three-term Laguerre recurrence
///
/// ```text
/// N_{k+1} = [(2k + 1 + a - x) N_k - sqrt(k (k + a)) N_{k-1}] / sqrt((k + 1)(k + 1 + a))
/// ```
///
/// seeded with `N_0 = U[a][0] = e^{-x/2} beta^a / sqrt(a!)`, so no factorial
/// ratio is ever formed.
pub fn compute_overlaps(
    beta: DisplacementParameter,
    n_max: usize,
    config: TruncationConfig,
) -> Result<OverlapMatrix> {
    let b = beta.value();
    let dim_external = n_max + 1;
    let dim_internal = config
        .dim_internal
        .unwrap_or_else(|| default_internal_dim(b, n_max));
    if dim_internal < dim_external {
        return Err(Error::DimensionTooSmall {
            dim_internal,
            dim_external,
        });
    }

    let d = dim_internal;
    let x = b * b;
    let mut entries = vec![0.0; d * d];

    // First column: Poisson amplitudes of the coherent state |beta>.
    let mut seed = vec![0.0; d];
    seed[0] = (-0.5 * x).exp();
    for a in 1..d {
        seed[a] = seed[a - 1] * b / (a as f64).sqrt();
    }

    for (a, &start) in seed.iter().enumerate() {
        let af = a as f64;
        let mut prev = 0.0;
        let mut cur = start;
        let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
        for k in 0..(d - a) {
            let n = k + a;
            entries[n * d + k] = cur;
            if a > 0 {
                entries[k * d + n] = sign * cur;
            }
            let kf = k as f64;
            let next = ((2.0 * kf + 1.0 + af - x) * cur - (kf * (kf + af)).sqrt() * prev)
                / ((kf + 1.0) * (kf + 1.0 + af)).sqrt();
            prev = cur;
            cur = next;
        }
    }

    Ok(OverlapMatrix {
        beta,
        dim_external,
        dim_internal,
        entries,
    })
}

/// Dense oracle: exponentiates the truncated generator `beta (b† - b)` on a
/// `dim`-level number basis by scaling and squaring around a Taylor core.
///
/// Entries near the truncation edge are polluted; the upper-left block
/// converges to the exact overlaps as `dim` grows.
pub fn oracle_overlaps(beta: DisplacementParameter, dim: usize) -> Result<DMatrix<f64>> {
    if dim == 0 {
        return Err(invalid("dim", "must be at least 1"));
    }
    if dim > ORACLE_MAX_DIM {
        return Err(Error::OracleTooLarge {
            dim,
            ceiling: ORACLE_MAX_DIM,
        });
    }
    let b = beta.value();
    let mut gen = DMatrix::<f64>::zeros(dim, dim);
    for n in 0..dim - 1 {
        let s = ((n + 1) as f64).sqrt();
        gen[(n + 1, n)] = b * s; // b†
        gen[(n, n + 1)] = -b * s; // -b
    }

    let norm = (0..dim)
        .map(|j| gen.column(j).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut squarings = 0u32;
    while norm / 2f64.powi(squarings as i32) > 0.25 {
        squarings += 1;
    }
    let scaled = gen / 2f64.powi(squarings as i32);

    let mut result = DMatrix::<f64>::identity(dim, dim);
    let mut term = DMatrix::<f64>::identity(dim, dim);
    for k in 1..=30 {
        term = &term * &scaled / k as f64;
        result += &term;
        if term.amax() < 1e-20 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    Ok(result)
}
