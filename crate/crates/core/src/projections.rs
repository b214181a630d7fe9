//! Szegő projections as 0/1 Fourier multipliers, quadrature-based kernel
//! reproduction, and Hardy-space membership defects.
//!
//! The multiplier of each filtered Hardy space is the indicator of its
//! frequency characterization. The characterizations are printed in the
//! source with `max{…} < 0`; taken literally that reading admits frequencies
//! such as `(j,ℓ) = (−1,0)` that cannot arise from `z₂^{−k}·𝒜(𝔻²)`, so the
//! derivation-consistent conjunction is the default and the literal reading
//! is kept behind a switch for comparison runs. (The sgn-based multiplier
//! display would also take the value 1/2 on the two boundary lines; a
//! projection must be idempotent, so the indicator overrides it.)

use num_complex::Complex64;

use crate::domains::{boundary_grid, DomainSpec, ParamPoint, Point};
use crate::error::{Error, Result};
use crate::kernels::KernelEvaluator;
use crate::series::{
    CircleCoefficients, Coefficients, GridSamples, TorusCoefficients, Window, SCALE_SIGMA_CIRCLE,
    SCALE_SIGMA_TORUS,
};

/// Which Hardy-space family a multiplier projects onto.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultiplierFamily {
    /// 1-D family on the circle: admitted iff `j ≥ −k`.
    PuncturedDisk { k: u32 },
    /// `𝔻×𝔻*`: admitted iff `j ≥ 0` and `ℓ + k ≥ 0`.
    DxDstar { k: u32 },
    /// `ℍ_{m/n}`: admitted iff `j ≥ 0` and `nj + mℓ + mk ≥ 0`.
    Hartogs { m: u32, n: u32, k: u32 },
}

/// Reading of the frequency characterizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reading {
    /// Both index conditions must hold (the condition forced by
    /// `𝒜_k = ψ^{−k}·𝒜`).
    #[default]
    DerivationConsistent,
    /// The literal `max{…} ≥ 0` disjunction, exposed for comparison runs.
    LiteralMax,
}

/// A 0/1 Fourier multiplier for one filtered Hardy space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiplierSpec {
    pub family: MultiplierFamily,
    pub reading: Reading,
}

impl MultiplierSpec {
    pub fn new(family: MultiplierFamily) -> Self {
        Self {
            family,
            reading: Reading::DerivationConsistent,
        }
    }

    pub fn with_reading(family: MultiplierFamily, reading: Reading) -> Self {
        Self { family, reading }
    }

    /// Is the frequency pair admitted? The circle family ignores `l`.
    pub fn admits(&self, j: i64, l: i64) -> bool {
        match self.family {
            MultiplierFamily::PuncturedDisk { k } => j >= -i64::from(k),
            MultiplierFamily::DxDstar { k } => {
                let second = l + i64::from(k) >= 0;
                match self.reading {
                    Reading::DerivationConsistent => j >= 0 && second,
                    Reading::LiteralMax => j >= 0 || second,
                }
            }
            MultiplierFamily::Hartogs { m, n, k } => {
                let second = i64::from(n) * j + i64::from(m) * l + i64::from(m) * i64::from(k) >= 0;
                match self.reading {
                    Reading::DerivationConsistent => j >= 0 && second,
                    Reading::LiteralMax => j >= 0 || second,
                }
            }
        }
    }

    /// The multiplier value as 0 or 1.
    pub fn multiplier(&self, j: i64, l: i64) -> u8 {
        u8::from(self.admits(j, l))
    }

    fn is_circle_family(&self) -> bool {
        matches!(self.family, MultiplierFamily::PuncturedDisk { .. })
    }
}

/// Entrywise multiplication by the 0/1 multiplier; the window is unchanged.
pub fn project_circle(
    coeffs: &CircleCoefficients,
    spec: &MultiplierSpec,
) -> Result<CircleCoefficients> {
    if !spec.is_circle_family() {
        return Err(Error::InvalidInput(
            "circle coefficients require the punctured-disk multiplier family".into(),
        ));
    }
    let projected = coeffs
        .iter()
        .map(|(j, a)| {
            if spec.admits(j, 0) {
                a
            } else {
                Complex64::ZERO
            }
        })
        .collect();
    CircleCoefficients::new(coeffs.min_index(), projected)
}

/// Entrywise multiplication by the 0/1 multiplier; the window is unchanged.
pub fn project_torus(
    coeffs: &TorusCoefficients,
    spec: &MultiplierSpec,
) -> Result<TorusCoefficients> {
    if spec.is_circle_family() {
        return Err(Error::InvalidInput(
            "torus coefficients require a two-index multiplier family".into(),
        ));
    }
    let mut out = TorusCoefficients::zero(coeffs.window());
    for (j, l, a) in coeffs.iter() {
        if spec.admits(j, l) {
            out.set(j, l, a)?;
        }
    }
    Ok(out)
}

/// Applies the multiplier to either coefficient type.
pub fn project(coeffs: &Coefficients, spec: &MultiplierSpec) -> Result<Coefficients> {
    match coeffs {
        Coefficients::Circle(c) => Ok(Coefficients::Circle(project_circle(c, spec)?)),
        Coefficients::Torus(c) => Ok(Coefficients::Torus(project_torus(c, spec)?)),
    }
}

/// L² norm of `(identity − project)(coeffs)`: zero exactly when the function
/// lies in the Hardy space.
///
/// The norm is taken against the measures used throughout: `√(2π)·√Σ|a|²` on
/// the circle, `2π·√Σ|a|²` on the torus.
pub fn membership_defect(coeffs: &Coefficients, spec: &MultiplierSpec) -> Result<f64> {
    let scale = match coeffs {
        Coefficients::Circle(_) => SCALE_SIGMA_CIRCLE,
        Coefficients::Torus(_) => SCALE_SIGMA_TORUS,
    };
    let excluded_sq: f64 = match coeffs {
        Coefficients::Circle(c) => c
            .iter()
            .filter(|(j, _)| !spec.admits(*j, 0))
            .map(|(_, a)| a.norm_sqr())
            .sum(),
        Coefficients::Torus(c) => c
            .iter()
            .filter(|(j, l, _)| !spec.admits(*j, *l))
            .map(|(_, _, a)| a.norm_sqr())
            .sum(),
    };
    Ok(scale * excluded_sq.sqrt())
}

/// Pairwise (cascade) summation: deterministic reduction order with
/// O(log n) error growth.
fn pairwise_sum(values: &mut [Complex64]) -> Complex64 {
    let mut len = values.len();
    if len == 0 {
        return Complex64::ZERO;
    }
    while len > 1 {
        let half = len / 2;
        for i in 0..half {
            values[i] = values[2 * i] + values[2 * i + 1];
        }
        if len % 2 == 1 {
            values[half] = values[len - 1];
            len = half + 1;
        } else {
            len = half;
        }
    }
    values[0]
}

/// Evaluates the reproducing integral `Σ_t weight_t·F(w_t)·kernel(z, w_t)`
/// on the boundary grid matching the samples.
///
/// For functions in the admissible class of the domain this recovers `F(z)`
/// up to the spectral accuracy of the trapezoid rule. `boundary_values` must
/// be sampled on the grid produced by [`boundary_grid`] for `spec` with the
/// same node count per circle (for conformal images, sampled at the embedded
/// points `F(e^{iθ_t})` in grid order, with `z` given in source coordinates).
pub fn reproduce(spec: &DomainSpec, boundary_values: &GridSamples, z: &Point) -> Result<Complex64> {
    let kernel = KernelEvaluator::szego(spec)?;
    let n = boundary_values.nodes_per_circle();
    let grid = boundary_grid(spec, n, 0)?;
    let values = boundary_values.values();
    if values.len() != grid.len() {
        return Err(Error::InvalidInput(format!(
            "boundary samples ({}) do not match the quadrature grid ({})",
            values.len(),
            grid.len()
        )));
    }
    match boundary_values {
        GridSamples::Circle { .. } => {
            if grid
                .nodes
                .iter()
                .any(|p| !matches!(p, ParamPoint::Circle { .. }))
            {
                return Err(Error::InvalidInput(
                    "circle samples supplied for a torus-type boundary".into(),
                ));
            }
        }
        GridSamples::Torus { .. } => {
            if grid
                .nodes
                .iter()
                .any(|p| !matches!(p, ParamPoint::Torus { .. }))
            {
                return Err(Error::InvalidInput(
                    "torus samples supplied for a circle-type boundary".into(),
                ));
            }
        }
    }
    let mut terms = Vec::with_capacity(grid.len());
    for ((node, weight), value) in grid.nodes.iter().zip(&grid.weights).zip(values) {
        // Kernels take boundary points in source coordinates: the angles.
        let w = match node {
            ParamPoint::Circle { theta } => Point::One(Complex64::cis(*theta)),
            ParamPoint::Torus { theta1, theta2 } => {
                Point::Two(Complex64::cis(*theta1), Complex64::cis(*theta2))
            }
            ParamPoint::Egg { .. } => {
                return Err(Error::InvalidInput(
                    "egg boundaries have no closed-form reproducing kernel".into(),
                ))
            }
        };
        terms.push(weight * value * kernel.eval(z, &w)?);
    }
    Ok(pairwise_sum(&mut terms))
}

/// Pullback of torus frequencies under `Θ_{m/n}(z₁,z₂) = (z₁ⁿz₂ⁿ, z₂^m)`:
/// the mode `(j,ℓ)` moves to `(nj, nj+mℓ)`. For gcd(m,n)=1 the map is
/// injective on frequencies, so it is an L²(𝕋) isometry.
pub fn theta_pullback(coeffs: &TorusCoefficients, m: u32, n: u32) -> Result<TorusCoefficients> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput("need m, n ≥ 1".into()));
    }
    let w = coeffs.window();
    let (mi, ni) = (i64::from(m), i64::from(n));
    let corners_l = [
        ni * w.j_min + mi * w.l_min,
        ni * w.j_min + mi * w.l_max,
        ni * w.j_max + mi * w.l_min,
        ni * w.j_max + mi * w.l_max,
    ];
    let target = Window::new(
        ni * w.j_min,
        ni * w.j_max,
        *corners_l.iter().min().unwrap(),
        *corners_l.iter().max().unwrap(),
    )?;
    let mut out = TorusCoefficients::zero(target);
    for (j, l, a) in coeffs.iter() {
        if a.norm_sqr() > 0.0 {
            out.set(ni * j, ni * j + mi * l, a)?;
        }
    }
    Ok(out)
}
