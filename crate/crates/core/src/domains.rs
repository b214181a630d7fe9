//! Model domains, boundary parametrizations, measure densities, and
//! quadrature grids.
//!
//! Every domain in the library is described by closed-form data: punctured
//! disks and conformal images of the disk in the plane, `𝔻×𝔻*` and the
//! power-generalized Hartogs triangles with the torus as distinguished
//! boundary, and egg domains `|z₁|^{2p}+|z₂|^{2p}<1` with the hyperplane
//! `{z₂=0}` deleted. Boundary measures are folded directly into quadrature
//! weights.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Minimum distance an evaluation point must keep from every puncture.
/// Kernels have poles there, so quadrature loops must fail loudly instead of
/// overflowing.
pub const PUNCTURE_CLEARANCE: f64 = 1e-6;

/// A point of ℂ or ℂ², matching the dimension of the ambient domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    One(Complex64),
    Two(Complex64, Complex64),
}

impl Point {
    pub fn dim(&self) -> usize {
        match self {
            Point::One(_) => 1,
            Point::Two(_, _) => 2,
        }
    }

    pub fn as_one(&self) -> Result<Complex64> {
        match self {
            Point::One(z) => Ok(*z),
            Point::Two(_, _) => Err(Error::InvalidInput(
                "expected a point of ℂ, found a point of ℂ²".into(),
            )),
        }
    }

    pub fn as_two(&self) -> Result<(Complex64, Complex64)> {
        match self {
            Point::Two(z1, z2) => Ok((*z1, *z2)),
            Point::One(_) => Err(Error::InvalidInput(
                "expected a point of ℂ², found a point of ℂ".into(),
            )),
        }
    }
}

/// Weight function `f` in the boundary-measure family `ν_τ = f·|𝓛|^{1−τ}·σ`.
///
/// The two named choices recover the endpoints of the family: `f ≡ 1` gives
/// `ν₁ = σ` and `f = |∇ρ_p|²/4π²` gives `ν₀ = ω_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NuTauWeight {
    One,
    GradRhoSqOverFourPiSq,
}

/// Boundary measure attached to a model domain.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasureTag {
    /// Arc length on a circle boundary (or its conformal image).
    SigmaCircle,
    /// Product of arc lengths on the 2-torus.
    SigmaTorus,
    /// Euclidean surface measure on an egg boundary.
    EggSigma,
    /// Monge–Ampère boundary measure of the exhaustion
    /// `(1/2p)·log(|z₁|^{2p}+|z₂|^{2p})`; pulls back to `ds dθ₁ dθ₂`.
    EggOmegaP,
    /// Interpolating family `ν_τ = f·|𝓛|^{1−τ}·σ`, `τ ∈ [0,1]`.
    EggNuTau { tau: f64, weight: NuTauWeight },
}

impl MeasureTag {
    pub fn is_egg_measure(&self) -> bool {
        matches!(
            self,
            MeasureTag::EggSigma | MeasureTag::EggOmegaP | MeasureTag::EggNuTau { .. }
        )
    }

    pub fn validate(&self) -> Result<()> {
        if let MeasureTag::EggNuTau { tau, .. } = self {
            if !(0.0..=1.0).contains(tau) || !tau.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "ν_τ requires τ ∈ [0,1], got {tau}"
                )));
            }
        }
        Ok(())
    }
}

type MapFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// An analytic injection of the closed unit disk onto a simply connected
/// image domain, with its derivative and a fixed continuous branch of
/// `√derivative`.
///
/// The branch is the principal square root continued from the value at 0;
/// construction verifies that the derivative does not vanish on the closed
/// disk and winds zero times around the origin along the boundary, so the
/// principal branch is globally continuous.
#[derive(Clone)]
pub struct ConformalMap {
    forward: MapFn,
    derivative: MapFn,
    sqrt_derivative: MapFn,
}

impl fmt::Debug for ConformalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConformalMap").finish_non_exhaustive()
    }
}

impl ConformalMap {
    /// Validation grid size for the branch and non-vanishing checks.
    const VALIDATION_NODES: usize = 1024;

    pub fn new(
        forward: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        derivative: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let forward: MapFn = Arc::new(forward);
        let derivative: MapFn = Arc::new(derivative);
        let sqrt_derivative: MapFn = {
            let derivative = derivative.clone();
            Arc::new(move |z| derivative(z).sqrt())
        };
        let map = Self {
            forward,
            derivative,
            sqrt_derivative,
        };
        map.validate()?;
        Ok(map)
    }

    /// The identity map of the disk.
    pub fn identity() -> Self {
        Self {
            forward: Arc::new(|z| z),
            derivative: Arc::new(|_| Complex64::new(1.0, 0.0)),
            sqrt_derivative: Arc::new(|_| Complex64::new(1.0, 0.0)),
        }
    }

    /// The quadratic perturbation `z ↦ z + ε z²`, injective on the closed
    /// disk for `|ε| < 1/2`.
    pub fn quadratic(eps: f64) -> Result<Self> {
        if !(eps.abs() < 0.5) {
            return Err(Error::Configuration(format!(
                "z + εz² is not injective on the closed disk for |ε| = {} ≥ 1/2",
                eps.abs()
            )));
        }
        Self::new(
            move |z| z + eps * z * z,
            move |z| Complex64::new(1.0, 0.0) + 2.0 * eps * z,
        )
    }

    pub fn forward(&self, z: Complex64) -> Complex64 {
        (self.forward)(z)
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        (self.derivative)(z)
    }

    pub fn sqrt_derivative(&self, z: Complex64) -> Complex64 {
        (self.sqrt_derivative)(z)
    }

    fn validate(&self) -> Result<()> {
        let n = Self::VALIDATION_NODES;
        let mut winding = 0.0;
        let mut prev_d = self.derivative(Complex64::new(1.0, 0.0));
        let mut prev_s = self.sqrt_derivative(Complex64::new(1.0, 0.0));
        for t in 1..=n {
            let z = Complex64::cis(TAU * t as f64 / n as f64);
            let d = self.derivative(z);
            let s = self.sqrt_derivative(z);
            if d.norm() < 1e-9 {
                return Err(Error::Configuration(format!(
                    "derivative vanishes on the boundary near {z}"
                )));
            }
            if (s * s - d).norm() > 1e-12 * d.norm().max(1.0) {
                return Err(Error::Configuration(
                    "sqrt_derivative² does not match the derivative".into(),
                ));
            }
            // A branch flip between neighbouring nodes shows up as a near
            // sign reversal of the square root.
            if (s * prev_s.conj()).re <= 0.0 {
                return Err(Error::Configuration(
                    "square-root branch of the derivative is not continuous over the boundary"
                        .into(),
                ));
            }
            winding += (d / prev_d).arg();
            prev_d = d;
            prev_s = s;
        }
        let turns = winding / TAU;
        if turns.round() as i64 != 0 || (turns - turns.round()).abs() > 1e-6 {
            return Err(Error::Configuration(format!(
                "derivative winds {turns:.3} times around 0 along the boundary; a continuous square root needs winding number 0"
            )));
        }
        Ok(())
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

fn validate_punctures(punctures: &[Complex64], orders: &[u32]) -> Result<()> {
    if punctures.len() != orders.len() {
        return Err(Error::InvalidInput(format!(
            "{} punctures but {} orders",
            punctures.len(),
            orders.len()
        )));
    }
    for (i, p) in punctures.iter().enumerate() {
        if !(p.norm() < 1.0) {
            return Err(Error::InvalidInput(format!(
                "puncture {p} is not strictly interior to the disk"
            )));
        }
        for q in &punctures[i + 1..] {
            if (p - q).norm() == 0.0 {
                return Err(Error::InvalidInput(format!("repeated puncture {p}")));
            }
        }
    }
    Ok(())
}

/// Tagged description of a model domain together with its deleted set.
#[derive(Debug, Clone)]
pub enum DomainSpec {
    /// The unit disk, boundary measure σ on the circle.
    Disk,
    /// The unit disk with finitely many interior points removed; one pole
    /// order per puncture.
    PuncturedDisk {
        punctures: Vec<Complex64>,
        orders: Vec<u32>,
    },
    /// `𝔻×𝔻*` with pole order `k` along `{z₂=0}`; boundary measure σ_𝕋 on
    /// the distinguished boundary.
    ProductDxDstar { k: u32 },
    /// Power-generalized Hartogs triangle `|z₁|^m < |z₂|^n < 1`, gcd(m,n)=1.
    Hartogs { m: u32, n: u32, k: u32 },
    /// Egg domain `|z₁|^{2p}+|z₂|^{2p} < 1` with `{z₂=0}` deleted, carrying
    /// one of the egg boundary measures.
    Egg { p: u32, measure: MeasureTag },
    /// Conformal image of the punctured disk. Punctures are stored in
    /// source-disk coordinates (their images are `map.forward(q_j)`).
    SimplyConnectedPunctured {
        map: ConformalMap,
        punctures: Vec<Complex64>,
        orders: Vec<u32>,
    },
}

impl DomainSpec {
    pub fn punctured_disk(punctures: Vec<Complex64>, orders: Vec<u32>) -> Result<Self> {
        validate_punctures(&punctures, &orders)?;
        Ok(DomainSpec::PuncturedDisk { punctures, orders })
    }

    pub fn hartogs(m: u32, n: u32, k: u32) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidInput("Hartogs exponents must be ≥ 1".into()));
        }
        if gcd(m, n) != 1 {
            return Err(Error::InvalidInput(format!(
                "Hartogs exponents must be coprime, gcd({m},{n}) = {}",
                gcd(m, n)
            )));
        }
        Ok(DomainSpec::Hartogs { m, n, k })
    }

    pub fn egg(p: u32, measure: MeasureTag) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidInput("egg exponent p must be ≥ 1".into()));
        }
        if !measure.is_egg_measure() {
            return Err(Error::InvalidInput(format!(
                "measure {measure:?} is not supported on an egg boundary"
            )));
        }
        measure.validate()?;
        Ok(DomainSpec::Egg { p, measure })
    }

    pub fn simply_connected_punctured(
        map: ConformalMap,
        punctures: Vec<Complex64>,
        orders: Vec<u32>,
    ) -> Result<Self> {
        validate_punctures(&punctures, &orders)?;
        Ok(DomainSpec::SimplyConnectedPunctured {
            map,
            punctures,
            orders,
        })
    }

    /// The boundary measure canonically attached to the domain.
    pub fn measure(&self) -> MeasureTag {
        match self {
            DomainSpec::Disk
            | DomainSpec::PuncturedDisk { .. }
            | DomainSpec::SimplyConnectedPunctured { .. } => MeasureTag::SigmaCircle,
            DomainSpec::ProductDxDstar { .. } | DomainSpec::Hartogs { .. } => {
                MeasureTag::SigmaTorus
            }
            DomainSpec::Egg { measure, .. } => measure.clone(),
        }
    }
}

/// Parameter tuple of a quadrature node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamPoint {
    Circle { theta: f64 },
    Torus { theta1: f64, theta2: f64 },
    Egg { s: f64, theta1: f64, theta2: f64 },
}

/// Quadrature nodes, weights (measure density folded in), and embedded
/// boundary points for a (domain, measure) pair.
#[derive(Debug, Clone)]
pub struct BoundaryGrid {
    pub measure: MeasureTag,
    pub nodes: Vec<ParamPoint>,
    pub weights: Vec<f64>,
    pub points: Vec<Point>,
    /// Unit tangents `γ̇(w)` for planar boundaries, `None` for torus and egg
    /// grids.
    pub tangents: Option<Vec<Complex64>>,
}

impl BoundaryGrid {
    /// Σ weights; converges to the total measure of the boundary piece.
    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// One node of the tanh-sinh rule for `∫₀¹ f(s) ds`.
///
/// `one_minus_s` is carried separately because near the endpoints `1−s`
/// underflows long before the node stops contributing to singular
/// integrands. `t` is the double-exponential parameter of the node.
#[derive(Debug, Clone, Copy)]
pub struct SQuadratureNode {
    pub t: f64,
    pub s: f64,
    pub one_minus_s: f64,
    pub weight: f64,
}

/// Tanh-sinh (double exponential) quadrature rule on (0,1) at the given
/// refinement level; absorbs algebraic endpoint singularities `s^α(1−s)^β`
/// for any α,β > −1.
///
/// The substitution is `s = 1/(1+e^{−2x})`, `x = (π/2)·sinh t`, with
/// `ds/dt = π·s·(1−s)·cosh t`; node count roughly doubles per level.
pub fn s_quadrature_rule(level: u32) -> Vec<SQuadratureNode> {
    const T_MAX: f64 = 6.1;
    let h = 0.5_f64.powi(level as i32);
    let steps = (T_MAX / h).floor() as i64;
    let mut nodes = Vec::with_capacity((2 * steps + 1) as usize);
    for j in -steps..=steps {
        let t = j as f64 * h;
        let x = 0.5 * PI * t.sinh();
        let s = 1.0 / (1.0 + (-2.0 * x).exp());
        let one_minus_s = 1.0 / (1.0 + (2.0 * x).exp());
        let weight = h * PI * s * one_minus_s * t.cosh();
        if weight > 0.0 && weight.is_finite() {
            nodes.push(SQuadratureNode {
                t,
                s,
                one_minus_s,
                weight,
            });
        }
    }
    nodes
}

/// Algebraic/smooth decomposition of an egg boundary density with respect to
/// `ds dθ₁ dθ₂`:  density(s) = s^{exp0} · (1−s)^{exp1} · smooth(s).
///
/// The split lets norm computations place the algebraic endpoint factors
/// where they are handled exactly and keep only a bounded factor under
/// numerical quadrature.
pub(crate) struct DensityParts {
    pub exp0: f64,
    pub exp1: f64,
    pub smooth: Box<dyn Fn(f64, f64) -> f64 + Send + Sync>,
}

/// `A(s) = s^{2−1/p} + (1−s)^{2−1/p}`, the square of `|∇ρ_p|/4π` up to the
/// parametrization; bounded between 2^{1/p−1} and 1 on [0,1].
fn gradient_term(p: f64, s: f64, one_minus_s: f64) -> f64 {
    s.powf(2.0 - 1.0 / p) + one_minus_s.powf(2.0 - 1.0 / p)
}

pub(crate) fn density_parts(p: u32, measure: &MeasureTag) -> Result<DensityParts> {
    measure.validate()?;
    let pf = f64::from(p);
    match measure {
        MeasureTag::EggOmegaP => Ok(DensityParts {
            exp0: 0.0,
            exp1: 0.0,
            smooth: Box::new(|_, _| 1.0),
        }),
        MeasureTag::EggSigma => Ok(DensityParts {
            exp0: 1.0 / pf - 1.0,
            exp1: 1.0 / pf - 1.0,
            smooth: Box::new(move |s, oms| gradient_term(pf, s, oms).sqrt() / (2.0 * pf)),
        }),
        MeasureTag::EggNuTau { tau, weight } => {
            // ν_τ = f·|𝓛|^{1−τ}·σ with
            //   |𝓛| = (p/2)·s^{1−1/p}(1−s)^{1−1/p}/A^{3/2},
            // so the algebraic exponents combine to τ·(1/p − 1) per endpoint.
            let tau = *tau;
            let weight = *weight;
            let e = tau * (1.0 / pf - 1.0);
            Ok(DensityParts {
                exp0: e,
                exp1: e,
                smooth: Box::new(move |s, oms| {
                    let a = gradient_term(pf, s, oms);
                    let f = match weight {
                        NuTauWeight::One => 1.0,
                        // |∇ρ_p|²/4π² in boundary coordinates.
                        NuTauWeight::GradRhoSqOverFourPiSq => 4.0 * a,
                    };
                    let levi_smooth = (0.5 * pf / a.powf(1.5)).powf(1.0 - tau);
                    f * levi_smooth * a.sqrt() / (2.0 * pf)
                }),
            })
        }
        MeasureTag::SigmaCircle | MeasureTag::SigmaTorus => {
            Err(Error::InvalidInput("not an egg boundary measure".into()))
        }
    }
}

pub(crate) fn egg_density_stable(
    p: u32,
    measure: &MeasureTag,
    s: f64,
    one_minus_s: f64,
) -> Result<f64> {
    let parts = density_parts(p, measure)?;
    Ok(s.powf(parts.exp0) * one_minus_s.powf(parts.exp1) * (parts.smooth)(s, one_minus_s))
}

/// Density of the pulled-back measure with respect to `ds dθ₁ dθ₂` at
/// parameter `s ∈ (0,1)`.
pub fn egg_density(p: u32, measure: &MeasureTag, s: f64) -> Result<f64> {
    if p == 0 {
        return Err(Error::InvalidInput("egg exponent p must be ≥ 1".into()));
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain(format!(
            "egg density parameter must satisfy 0 < s < 1, got {s}"
        )));
    }
    egg_density_stable(p, measure, s, 1.0 - s)
}

/// Snaps values that sit within 1e-9 of an integer onto that integer, so
/// that ceiling arithmetic on `p(1−τ)+τ` is immune to rounding in τ.
pub(crate) fn snap_to_integer(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r
    } else {
        x
    }
}

/// Pole-order bound for membership of `z₂^{−k}` in `L²(ν_τ)`: the boundary
/// value lies in the space exactly when `k < p(1−τ)+τ`.
pub fn nu_tau_integrability_bound(p: u32, tau: f64) -> f64 {
    let pf = f64::from(p);
    snap_to_integer(pf * (1.0 - tau) + tau)
}

/// Level `k` past which the ν_τ filtration on the deleted egg stabilizes:
/// `⌈p(1−τ)+τ⌉ − 1`.
pub fn stabilization_threshold(p: u32, tau: f64) -> Result<u32> {
    if p == 0 {
        return Err(Error::InvalidInput("egg exponent p must be ≥ 1".into()));
    }
    if !(0.0..=1.0).contains(&tau) || !tau.is_finite() {
        return Err(Error::InvalidInput(format!(
            "τ must lie in [0,1], got {tau}"
        )));
    }
    let bound = nu_tau_integrability_bound(p, tau);
    Ok(bound.ceil() as u32 - 1)
}

fn circle_grid(n: usize) -> (Vec<ParamPoint>, Vec<Complex64>) {
    let step = TAU / n as f64;
    let mut nodes = Vec::with_capacity(n);
    let mut points = Vec::with_capacity(n);
    for t in 0..n {
        let theta = t as f64 * step;
        nodes.push(ParamPoint::Circle { theta });
        points.push(Complex64::cis(theta));
    }
    (nodes, points)
}

/// Tanh-sinh level whose node count first reaches `m`, never below level 3
/// (the coarser rules are not yet in the double-exponential regime).
fn s_level_for(m: usize) -> u32 {
    let mut level = 3;
    while s_quadrature_rule(level).len() < m && level < 12 {
        level += 1;
    }
    level
}

/// Builds the quadrature grid for the boundary of `spec`.
///
/// `n` is the node count per angular circle; `m_egg` is (a lower bound on)
/// the node count of the s-rule for egg boundaries and is ignored otherwise.
/// Planar grids use equispaced nodes with arc-length weights, torus grids
/// the product trapezoid rule, and egg grids a tensor product of the
/// tanh-sinh s-rule with trapezoid angles, the measure density folded into
/// the weights.
pub fn boundary_grid(spec: &DomainSpec, n: usize, m_egg: usize) -> Result<BoundaryGrid> {
    if n < 4 {
        return Err(Error::InvalidInput(format!(
            "need at least 4 nodes per circle, got {n}"
        )));
    }
    let step = TAU / n as f64;
    match spec {
        DomainSpec::Disk | DomainSpec::PuncturedDisk { .. } => {
            let (nodes, points) = circle_grid(n);
            let tangents = points.iter().map(|w| Complex64::i() * w).collect();
            Ok(BoundaryGrid {
                measure: MeasureTag::SigmaCircle,
                weights: vec![step; n],
                points: points.into_iter().map(Point::One).collect(),
                nodes,
                tangents: Some(tangents),
            })
        }
        DomainSpec::SimplyConnectedPunctured { map, .. } => {
            let (nodes, circle) = circle_grid(n);
            let mut weights = Vec::with_capacity(n);
            let mut points = Vec::with_capacity(n);
            let mut tangents = Vec::with_capacity(n);
            for w in &circle {
                let d = map.derivative(*w);
                weights.push(d.norm() * step);
                points.push(Point::One(map.forward(*w)));
                tangents.push(Complex64::i() * w * d / d.norm());
            }
            Ok(BoundaryGrid {
                measure: MeasureTag::SigmaCircle,
                nodes,
                weights,
                points,
                tangents: Some(tangents),
            })
        }
        DomainSpec::ProductDxDstar { .. } | DomainSpec::Hartogs { .. } => {
            let mut nodes = Vec::with_capacity(n * n);
            let mut points = Vec::with_capacity(n * n);
            for t1 in 0..n {
                let theta1 = t1 as f64 * step;
                for t2 in 0..n {
                    let theta2 = t2 as f64 * step;
                    nodes.push(ParamPoint::Torus { theta1, theta2 });
                    points.push(Point::Two(Complex64::cis(theta1), Complex64::cis(theta2)));
                }
            }
            Ok(BoundaryGrid {
                measure: MeasureTag::SigmaTorus,
                nodes,
                weights: vec![step * step; n * n],
                points,
                tangents: None,
            })
        }
        DomainSpec::Egg { p, measure } => {
            if m_egg < 4 {
                return Err(Error::InvalidInput(format!(
                    "need at least 4 s-nodes for an egg grid, got {m_egg}"
                )));
            }
            let rule = s_quadrature_rule(s_level_for(m_egg));
            let parts = density_parts(*p, measure)?;
            let inv_2p = 1.0 / (2.0 * f64::from(*p));
            let mut nodes = Vec::with_capacity(rule.len() * n * n);
            let mut weights = Vec::with_capacity(rule.len() * n * n);
            let mut points = Vec::with_capacity(rule.len() * n * n);
            for node in &rule {
                let density = node.s.powf(parts.exp0)
                    * node.one_minus_s.powf(parts.exp1)
                    * (parts.smooth)(node.s, node.one_minus_s);
                let w_s = node.weight * density * step * step;
                let r1 = node.s.powf(inv_2p);
                let r2 = node.one_minus_s.powf(inv_2p);
                for t1 in 0..n {
                    let theta1 = t1 as f64 * step;
                    for t2 in 0..n {
                        let theta2 = t2 as f64 * step;
                        nodes.push(ParamPoint::Egg {
                            s: node.s,
                            theta1,
                            theta2,
                        });
                        weights.push(w_s);
                        points.push(Point::Two(
                            r1 * Complex64::cis(theta1),
                            r2 * Complex64::cis(theta2),
                        ));
                    }
                }
            }
            Ok(BoundaryGrid {
                measure: measure.clone(),
                nodes,
                weights,
                points,
                tangents: None,
            })
        }
    }
}
