//! Finite Fourier/Laurent coefficient windows on the circle and the 2-torus.
//!
//! Boundary data lives on equispaced angular grids `θ_t = 2πt/N`; analysis and
//! synthesis move between samples and coefficient windows by FFT. Windows are
//! plain integer rectangles and may extend to negative frequencies, which is
//! how pole orders along a deleted hypersurface show up on the boundary.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// L² normalisation for arc length on the unit circle: `‖f‖ = √(2π)·√Σ|a_j|²`.
pub const SCALE_SIGMA_CIRCLE: f64 = 2.506_628_274_631_000_2; // √(2π)
/// L² normalisation for the product measure on the 2-torus: `2π·√Σ|a_{j,ℓ}|²`.
pub const SCALE_SIGMA_TORUS: f64 = std::f64::consts::TAU;

/// A finite window of Laurent coefficients on the circle.
///
/// Entry `t` of `coeffs` holds the coefficient of `e^{i(min_index+t)θ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleCoefficients {
    min_index: i64,
    coeffs: Vec<Complex64>,
}

impl CircleCoefficients {
    pub fn new(min_index: i64, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput(
                "coefficient window must hold at least one entry".into(),
            ));
        }
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidInput(
                "coefficient window contains a non-finite entry".into(),
            ));
        }
        Ok(Self { min_index, coeffs })
    }

    /// A window holding a single mode `value·e^{i·index·θ}`.
    pub fn single(index: i64, value: Complex64) -> Self {
        Self {
            min_index: index,
            coeffs: vec![value],
        }
    }

    pub fn min_index(&self) -> i64 {
        self.min_index
    }

    pub fn max_index(&self) -> i64 {
        self.min_index + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `e^{ijθ}`; zero outside the stored window.
    pub fn get(&self, j: i64) -> Complex64 {
        if j < self.min_index || j > self.max_index() {
            Complex64::ZERO
        } else {
            self.coeffs[(j - self.min_index) as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let base = self.min_index;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(t, &c)| (base + t as i64, c))
    }

    /// Largest `|j|` over indices whose coefficient is nonzero (0 when all
    /// entries vanish). Governs the alias guard for synthesis.
    pub fn max_abs_supported_index(&self) -> i64 {
        self.iter()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(j, _)| j.abs())
            .max()
            .unwrap_or(0)
    }

    /// Smallest and largest index with a nonzero coefficient.
    pub fn supported_range(&self) -> Option<(i64, i64)> {
        let mut range: Option<(i64, i64)> = None;
        for (j, c) in self.iter() {
            if c.norm_sqr() > 0.0 {
                range = Some(match range {
                    None => (j, j),
                    Some((lo, hi)) => (lo.min(j), hi.max(j)),
                });
            }
        }
        range
    }

    /// `measure_scale · √Σ|a_j|²`.
    pub fn l2_norm(&self, measure_scale: f64) -> f64 {
        measure_scale * self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Laurent sum `Σ a_j z^j`. Negative indices require `z ≠ 0`.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.iter()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(j, c)| c * z.powi(j as i32))
            .sum()
    }
}

/// Inclusive integer rectangle `[j_min, j_max] × [l_min, l_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub j_min: i64,
    pub j_max: i64,
    pub l_min: i64,
    pub l_max: i64,
}

impl Window {
    pub fn new(j_min: i64, j_max: i64, l_min: i64, l_max: i64) -> Result<Self> {
        if j_max < j_min || l_max < l_min {
            return Err(Error::InvalidInput(format!(
                "empty frequency window [{j_min},{j_max}]×[{l_min},{l_max}]"
            )));
        }
        Ok(Self {
            j_min,
            j_max,
            l_min,
            l_max,
        })
    }

    pub fn len_j(&self) -> usize {
        (self.j_max - self.j_min + 1) as usize
    }

    pub fn len_l(&self) -> usize {
        (self.l_max - self.l_min + 1) as usize
    }

    pub fn count(&self) -> usize {
        self.len_j() * self.len_l()
    }

    pub fn contains(&self, j: i64, l: i64) -> bool {
        j >= self.j_min && j <= self.j_max && l >= self.l_min && l <= self.l_max
    }
}

/// A finite window of Fourier coefficients on the 2-torus, stored row-major
/// over `(j, ℓ)` within the window rectangle.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusCoefficients {
    window: Window,
    coeffs: Vec<Complex64>,
}

impl TorusCoefficients {
    pub fn new(window: Window, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != window.count() {
            return Err(Error::InvalidInput(format!(
                "window holds {} entries but {} coefficients were supplied",
                window.count(),
                coeffs.len()
            )));
        }
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidInput(
                "coefficient window contains a non-finite entry".into(),
            ));
        }
        Ok(Self { window, coeffs })
    }

    pub fn zero(window: Window) -> Self {
        let coeffs = vec![Complex64::ZERO; window.count()];
        Self { window, coeffs }
    }

    /// A window holding the single mode `value·e^{i(jθ₁+ℓθ₂)}`.
    pub fn single(j: i64, l: i64, value: Complex64) -> Self {
        Self {
            window: Window {
                j_min: j,
                j_max: j,
                l_min: l,
                l_max: l,
            },
            coeffs: vec![value],
        }
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    fn offset(&self, j: i64, l: i64) -> usize {
        ((j - self.window.j_min) as usize) * self.window.len_l() + (l - self.window.l_min) as usize
    }

    /// Coefficient of `e^{i(jθ₁+ℓθ₂)}`; zero outside the stored window.
    pub fn get(&self, j: i64, l: i64) -> Complex64 {
        if self.window.contains(j, l) {
            self.coeffs[self.offset(j, l)]
        } else {
            Complex64::ZERO
        }
    }

    pub fn set(&mut self, j: i64, l: i64, value: Complex64) -> Result<()> {
        if !self.window.contains(j, l) {
            return Err(Error::InvalidInput(format!(
                "frequency ({j},{l}) lies outside the stored window"
            )));
        }
        let at = self.offset(j, l);
        self.coeffs[at] = value;
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, i64, Complex64)> + '_ {
        let w = self.window;
        self.coeffs.iter().enumerate().map(move |(t, &c)| {
            let j = w.j_min + (t / w.len_l()) as i64;
            let l = w.l_min + (t % w.len_l()) as i64;
            (j, l, c)
        })
    }

    pub fn max_abs_supported_index(&self) -> i64 {
        self.iter()
            .filter(|(_, _, c)| c.norm_sqr() > 0.0)
            .map(|(j, l, _)| j.abs().max(l.abs()))
            .max()
            .unwrap_or(0)
    }

    /// Per-dimension (min, max) index with a nonzero coefficient.
    pub fn supported_ranges(&self) -> Option<((i64, i64), (i64, i64))> {
        let mut ranges: Option<((i64, i64), (i64, i64))> = None;
        for (j, l, c) in self.iter() {
            if c.norm_sqr() > 0.0 {
                ranges = Some(match ranges {
                    None => ((j, j), (l, l)),
                    Some(((jlo, jhi), (llo, lhi))) => {
                        ((jlo.min(j), jhi.max(j)), (llo.min(l), lhi.max(l)))
                    }
                });
            }
        }
        ranges
    }

    /// `measure_scale · √ΣΣ|a_{j,ℓ}|²`.
    pub fn l2_norm(&self, measure_scale: f64) -> f64 {
        measure_scale * self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Monomial sum `Σ a_{j,ℓ} z₁^j z₂^ℓ`. Negative indices require the
    /// corresponding variable to be nonzero.
    pub fn evaluate(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        self.iter()
            .filter(|(_, _, c)| c.norm_sqr() > 0.0)
            .map(|(j, l, c)| c * z1.powi(j as i32) * z2.powi(l as i32))
            .sum()
    }
}

/// Samples of a boundary function at equispaced angles, one or two circles.
///
/// Torus samples are stored row-major: `values[t1·n + t2] = f(θ_{t1}, θ_{t2})`.
#[derive(Debug, Clone, PartialEq)]
pub enum GridSamples {
    Circle { values: Vec<Complex64> },
    Torus { n: usize, values: Vec<Complex64> },
}

impl GridSamples {
    pub fn from_circle_fn(n: usize, f: impl Fn(f64) -> Complex64) -> Self {
        let step = std::f64::consts::TAU / n as f64;
        GridSamples::Circle {
            values: (0..n).map(|t| f(t as f64 * step)).collect(),
        }
    }

    pub fn from_torus_fn(n: usize, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let step = std::f64::consts::TAU / n as f64;
        let mut values = Vec::with_capacity(n * n);
        for t1 in 0..n {
            for t2 in 0..n {
                values.push(f(t1 as f64 * step, t2 as f64 * step));
            }
        }
        GridSamples::Torus { n, values }
    }

    /// Number of nodes per angular circle.
    pub fn nodes_per_circle(&self) -> usize {
        match self {
            GridSamples::Circle { values } => values.len(),
            GridSamples::Torus { n, .. } => *n,
        }
    }

    pub fn values(&self) -> &[Complex64] {
        match self {
            GridSamples::Circle { values } => values,
            GridSamples::Torus { values, .. } => values,
        }
    }
}

/// Analysis output: one or two dimensional coefficient window.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficients {
    Circle(CircleCoefficients),
    Torus(TorusCoefficients),
}

impl Coefficients {
    pub fn l2_norm(&self, measure_scale: f64) -> f64 {
        match self {
            Coefficients::Circle(c) => c.l2_norm(measure_scale),
            Coefficients::Torus(c) => c.l2_norm(measure_scale),
        }
    }

    pub fn as_circle(&self) -> Result<&CircleCoefficients> {
        match self {
            Coefficients::Circle(c) => Ok(c),
            Coefficients::Torus(_) => Err(Error::InvalidInput(
                "expected circle coefficients, found torus coefficients".into(),
            )),
        }
    }

    pub fn as_torus(&self) -> Result<&TorusCoefficients> {
        match self {
            Coefficients::Torus(c) => Ok(c),
            Coefficients::Circle(_) => Err(Error::InvalidInput(
                "expected torus coefficients, found circle coefficients".into(),
            )),
        }
    }
}

/// Signed frequency carried by DFT bin `bin` on an `n`-point grid, following
/// the alias convention `[−⌊n/2⌋, ⌈n/2⌉−1]`.
fn bin_to_frequency(bin: usize, n: usize) -> i64 {
    let half = n.div_ceil(2);
    if bin < half {
        bin as i64
    } else {
        bin as i64 - n as i64
    }
}

fn fft_forward_1d(values: &[Complex64]) -> Vec<Complex64> {
    let mut buf = values.to_vec();
    FftPlanner::new()
        .plan_fft_forward(buf.len())
        .process(&mut buf);
    buf
}

fn fft_inverse_1d(spectrum: &mut [Complex64]) {
    FftPlanner::new()
        .plan_fft_inverse(spectrum.len())
        .process(spectrum);
}

/// Fourier analysis of grid samples.
///
/// Returns the full window `[−⌊N/2⌋, ⌈N/2⌉−1]` per dimension, so that
/// `synthesize(analyze(x), N)` restores `x` whenever `x` was sampled from a
/// function band-limited below `N/2`.
pub fn analyze(samples: &GridSamples) -> Result<Coefficients> {
    match samples {
        GridSamples::Circle { values } => {
            let n = values.len();
            if n == 0 {
                return Err(Error::InvalidInput("empty sample array".into()));
            }
            let spectrum = fft_forward_1d(values);
            let min_index = -((n / 2) as i64);
            let mut coeffs = vec![Complex64::ZERO; n];
            let scale = 1.0 / n as f64;
            for (bin, &v) in spectrum.iter().enumerate() {
                let j = bin_to_frequency(bin, n);
                coeffs[(j - min_index) as usize] = v * scale;
            }
            Ok(Coefficients::Circle(CircleCoefficients::new(
                min_index, coeffs,
            )?))
        }
        GridSamples::Torus { n, values } => {
            let n = *n;
            if n == 0 || values.is_empty() {
                return Err(Error::InvalidInput("empty sample array".into()));
            }
            if values.len() != n * n {
                return Err(Error::InvalidInput(format!(
                    "torus samples need {}² values, got {}",
                    n,
                    values.len()
                )));
            }
            // Rows (θ₂ direction) then columns (θ₁ direction).
            let mut stage = Vec::with_capacity(n * n);
            for row in values.chunks(n) {
                stage.extend(fft_forward_1d(row));
            }
            let mut spectrum = vec![Complex64::ZERO; n * n];
            let mut column = vec![Complex64::ZERO; n];
            for b2 in 0..n {
                for t1 in 0..n {
                    column[t1] = stage[t1 * n + b2];
                }
                let out = fft_forward_1d(&column);
                for b1 in 0..n {
                    spectrum[b1 * n + b2] = out[b1];
                }
            }
            let min_index = -((n / 2) as i64);
            let window = Window::new(
                min_index,
                min_index + n as i64 - 1,
                min_index,
                min_index + n as i64 - 1,
            )?;
            let mut out = TorusCoefficients::zero(window);
            let scale = 1.0 / (n * n) as f64;
            for b1 in 0..n {
                let j = bin_to_frequency(b1, n);
                for b2 in 0..n {
                    let l = bin_to_frequency(b2, n);
                    out.set(j, l, spectrum[b1 * n + b2] * scale)?;
                }
            }
            Ok(Coefficients::Torus(out))
        }
    }
}

/// Rejects synthesis onto a grid whose canonical window
/// `[−⌊n/2⌋, ⌈n/2⌉−1]` cannot carry every supported frequency; that window
/// is exactly what `analyze` produces, so analysis output always passes on
/// its own grid. The reported requirement `2·max|index|+1` is the safe
/// symmetric bound.
fn alias_guard(min_supported: i64, max_supported: i64, n: usize) -> Result<()> {
    let lo = -((n / 2) as i64);
    let hi = (n as i64 + 1) / 2 - 1;
    if min_supported < lo || max_supported > hi {
        let max_abs = min_supported.abs().max(max_supported.abs());
        return Err(Error::Aliasing {
            required: 2 * max_abs as usize + 1,
            given: n,
            max_index: max_abs,
        });
    }
    Ok(())
}

/// Samples `Σ a_j e^{ijθ}` (resp. its torus analogue) on the `grid_size`-point
/// grid. Rejects grids that would fold a carried frequency onto another.
pub fn synthesize(coeffs: &Coefficients, grid_size: usize) -> Result<GridSamples> {
    if grid_size == 0 {
        return Err(Error::InvalidInput("grid size must be positive".into()));
    }
    match coeffs {
        Coefficients::Circle(c) => {
            let (min_j, max_j) = c.supported_range().unwrap_or((0, 0));
            alias_guard(min_j, max_j, grid_size)?;
            let mut spectrum = vec![Complex64::ZERO; grid_size];
            for (j, a) in c.iter() {
                if a.norm_sqr() > 0.0 {
                    let bin = j.rem_euclid(grid_size as i64) as usize;
                    spectrum[bin] += a;
                }
            }
            fft_inverse_1d(&mut spectrum);
            Ok(GridSamples::Circle { values: spectrum })
        }
        Coefficients::Torus(c) => {
            let n = grid_size;
            let ((min_j, max_j), (min_l, max_l)) = c.supported_ranges().unwrap_or(((0, 0), (0, 0)));
            alias_guard(min_j, max_j, n)?;
            alias_guard(min_l, max_l, n)?;
            let mut spectrum = vec![Complex64::ZERO; n * n];
            for (j, l, a) in c.iter() {
                if a.norm_sqr() > 0.0 {
                    let b1 = j.rem_euclid(n as i64) as usize;
                    let b2 = l.rem_euclid(n as i64) as usize;
                    spectrum[b1 * n + b2] += a;
                }
            }
            // Inverse along columns then rows.
            let mut column = vec![Complex64::ZERO; n];
            for b2 in 0..n {
                for b1 in 0..n {
                    column[b1] = spectrum[b1 * n + b2];
                }
                fft_inverse_1d(&mut column);
                for t1 in 0..n {
                    spectrum[t1 * n + b2] = column[t1];
                }
            }
            for row in spectrum.chunks_mut(n) {
                fft_inverse_1d(row);
            }
            Ok(GridSamples::Torus {
                n,
                values: spectrum,
            })
        }
    }
}

/// `measure_scale · √Σ|entries|²`; √(2π) matches arc length on the circle,
/// 2π matches the product measure on the torus.
pub fn l2_norm(coeffs: &Coefficients, measure_scale: f64) -> f64 {
    coeffs.l2_norm(measure_scale)
}
