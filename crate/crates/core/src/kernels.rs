//! Closed-form Szegő and Cauchy-type kernels for the model domains, plus the
//! root-of-unity and partial-fraction oracles behind the power-generalized
//! Hartogs kernel.
//!
//! All kernels are rational/power expressions; integer powers of the pairing
//! `z·w̄` are taken by repeated multiplication, never through complex logs.
//! Evaluations within [`POLE_GUARD`] of a pole locus fail loudly so that
//! quadrature loops cannot silently blow up.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::domains::{ConformalMap, DomainSpec, Point, PUNCTURE_CLEARANCE};
use crate::error::{Error, Result};

/// Evaluations closer than this to a pole locus return a domain error.
pub const POLE_GUARD: f64 = 1e-9;

/// Tolerance used when checking that a supplied point sits on a unit circle.
const BOUNDARY_TOL: f64 = 1e-9;

const TWO_PI: f64 = 2.0 * PI;
const FOUR_PI_SQ: f64 = 4.0 * PI * PI;

fn check_on_circle(w: Complex64, what: &str) -> Result<()> {
    if (w.norm() - 1.0).abs() > BOUNDARY_TOL {
        return Err(Error::InvalidInput(format!(
            "{what} must lie on the unit circle, got |{w}| = {}",
            w.norm()
        )));
    }
    Ok(())
}

fn check_denominator(d: Complex64, what: &str) -> Result<Complex64> {
    if d.norm() < POLE_GUARD {
        return Err(Error::Domain(format!(
            "evaluation within {POLE_GUARD:e} of the pole locus {what}"
        )));
    }
    Ok(d)
}

fn check_clearance(z: Complex64, punctures: &[Complex64]) -> Result<()> {
    for p in punctures {
        if (z - p).norm() < PUNCTURE_CLEARANCE {
            return Err(Error::Domain(format!(
                "evaluation point {z} is within {PUNCTURE_CLEARANCE:e} of the puncture {p}"
            )));
        }
    }
    Ok(())
}

/// The Möbius factor `M_q(ζ) = (ζ−q)/(1−q̄ζ)`, a disk automorphism with a
/// simple zero at `q` and unit modulus on the circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusFactor {
    q: Complex64,
}

impl MoebiusFactor {
    pub fn new(q: Complex64) -> Result<Self> {
        if !(q.norm() < 1.0) {
            return Err(Error::InvalidInput(format!(
                "Möbius parameter must satisfy |q| < 1, got |{q}| = {}",
                q.norm()
            )));
        }
        Ok(Self { q })
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    pub fn eval(&self, zeta: Complex64) -> Result<Complex64> {
        let den = check_denominator(
            Complex64::new(1.0, 0.0) - self.q.conj() * zeta,
            "ζ = 1/q̄ of the Möbius factor",
        )?;
        Ok((zeta - self.q) / den)
    }
}

/// `M_q(ζ)`; errors at the pole `ζ = 1/q̄`.
pub fn mobius(q: Complex64, zeta: Complex64) -> Result<Complex64> {
    MoebiusFactor::new(q)?.eval(zeta)
}

/// Szegő kernel of the disk, `1/(2π(1−z w̄))`.
pub fn disk_szego(z: Complex64, w: Complex64) -> Result<Complex64> {
    let den = check_denominator(Complex64::new(1.0, 0.0) - z * w.conj(), "z w̄ = 1")?;
    Ok(Complex64::new(1.0 / TWO_PI, 0.0) / den)
}

/// Szegő kernel of the disk punctured at the origin with pole order `k`:
/// `1/(2π (z w̄)^k (1−z w̄))`.
pub fn punctured_disk_szego(k: u32, z: Complex64, w: Complex64) -> Result<Complex64> {
    let pairing = z * w.conj();
    if k > 0 {
        check_denominator(pairing, "z w̄ = 0")?;
    }
    Ok(disk_szego(z, w)? / pairing.powu(k))
}

/// Szegő kernel of `𝔻×𝔻*` at filtration level `k`:
/// `(1/4π²)·(z₂w̄₂)^{−k}/((1−z₂w̄₂)(1−z₁w̄₁))`.
pub fn dxdstar_szego(
    k: u32,
    z: (Complex64, Complex64),
    w: (Complex64, Complex64),
) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let b = z.1 * w.1.conj();
    if k > 0 {
        check_denominator(b, "z₂w̄₂ = 0")?;
    }
    let d1 = check_denominator(one - z.0 * w.0.conj(), "z₁w̄₁ = 1")?;
    let d2 = check_denominator(one - b, "z₂w̄₂ = 1")?;
    Ok(Complex64::new(1.0 / FOUR_PI_SQ, 0.0) / (b.powu(k) * d2 * d1))
}

/// Szegő kernel of the standard Hartogs triangle `|z₁| < |z₂| < 1`:
/// `(1/4π²)·(z₂w̄₂)^{−(k−1)}/((z₂w̄₂−z₁w̄₁)(1−z₂w̄₂))`.
pub fn hartogs_szego(
    k: u32,
    z: (Complex64, Complex64),
    w: (Complex64, Complex64),
) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let a = z.0 * w.0.conj();
    let b = z.1 * w.1.conj();
    check_denominator(b, "z₂w̄₂ = 0")?;
    let sep = check_denominator(b - a, "z₂w̄₂ = z₁w̄₁")?;
    let d2 = check_denominator(one - b, "z₂w̄₂ = 1")?;
    // (z₂w̄₂)^{−(k−1)} = b / b^k, with integer powers throughout.
    Ok(Complex64::new(1.0 / FOUR_PI_SQ, 0.0) * b / (b.powu(k) * sep * d2))
}

/// `P_{m,n}(a,b) = Σ_{r=0}^{m−1} a^r b^{n−⌊nr/m⌋}`.
///
/// ```
/// use num_complex::Complex64;
/// use szego_core::kernels::pmn_poly;
///
/// let a = Complex64::new(2.0, 0.0);
/// let b = Complex64::new(3.0, 0.0);
/// // P_{2,3}(a,b) = b³ + a·b²
/// assert_eq!(pmn_poly(2, 3, a, b), Complex64::new(27.0 + 2.0 * 9.0, 0.0));
/// ```
pub fn pmn_poly(m: u32, n: u32, a: Complex64, b: Complex64) -> Complex64 {
    let mut sum = Complex64::ZERO;
    let mut a_pow = Complex64::new(1.0, 0.0);
    for r in 0..m {
        let exponent = n - (n * r) / m;
        sum += a_pow * b.powu(exponent);
        a_pow *= a;
    }
    sum
}

/// Szegő kernel of the power-generalized Hartogs triangle `ℍ_{m/n}`:
/// `(1/4π²)·(z₂w̄₂)^{−k}·P_{m,n}(z₁w̄₁, z₂w̄₂)/(((z₂w̄₂)ⁿ−(z₁w̄₁)^m)(1−z₂w̄₂))`.
pub fn pg_hartogs_szego(
    m: u32,
    n: u32,
    k: u32,
    z: (Complex64, Complex64),
    w: (Complex64, Complex64),
) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let a = z.0 * w.0.conj();
    let b = z.1 * w.1.conj();
    if k > 0 {
        check_denominator(b, "z₂w̄₂ = 0")?;
    }
    let sep = check_denominator(b.powu(n) - a.powu(m), "(z₂w̄₂)ⁿ = (z₁w̄₁)^m")?;
    let d2 = check_denominator(one - b, "z₂w̄₂ = 1")?;
    Ok(Complex64::new(1.0 / FOUR_PI_SQ, 0.0) * pmn_poly(m, n, a, b) / (b.powu(k) * sep * d2))
}

/// The Cauchy 𝐤-kernel for punctured planar domains, written against arc
/// length: `(1/2πi)·Π_j((w−p_j)/(z−p_j))^{k_j}·γ̇(w)/(w−z)`.
///
/// `tangent` is the unit tangent `γ̇(w)` of the boundary at `w`.
pub fn cauchy_k(
    punctures: &[Complex64],
    orders: &[u32],
    z: Complex64,
    w: Complex64,
    tangent: Complex64,
) -> Result<Complex64> {
    if punctures.len() != orders.len() {
        return Err(Error::InvalidInput(format!(
            "{} punctures but {} orders",
            punctures.len(),
            orders.len()
        )));
    }
    if (tangent.norm() - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidInput(format!(
            "γ̇(w) must be a unit tangent, got |{tangent}| = {}",
            tangent.norm()
        )));
    }
    check_clearance(z, punctures)?;
    let sep = check_denominator(w - z, "w = z")?;
    let mut prod = Complex64::new(1.0, 0.0);
    for (p, &k) in punctures.iter().zip(orders) {
        prod *= ((w - p) / (z - p)).powu(k);
    }
    Ok(prod * tangent / (Complex64::new(0.0, TWO_PI) * sep))
}

fn check_source_args(
    punctures_src: &[Complex64],
    orders: &[u32],
    zeta: Complex64,
    omega: Complex64,
) -> Result<()> {
    if punctures_src.len() != orders.len() {
        return Err(Error::InvalidInput(format!(
            "{} punctures but {} orders",
            punctures_src.len(),
            orders.len()
        )));
    }
    if !(zeta.norm() < 1.0) {
        return Err(Error::Domain(format!(
            "interior point must satisfy |ζ| < 1 in source coordinates, got {zeta}"
        )));
    }
    check_on_circle(omega, "boundary point (source coordinates)")?;
    check_clearance(zeta, punctures_src)?;
    Ok(())
}

/// Szegő kernel of a punctured simply connected domain, evaluated in source
/// coordinates.
///
/// The domain is the image of the disk under `map`; punctures are given by
/// their disk preimages `q_j`. For interior `ζ` and boundary `ω` (both in the
/// source disk) the returned value is `s_𝐤(F(ζ), F(ω))` where `F` is the
/// forward map: the disk kernel is corrected by the Möbius factors
/// `M_{q_j}^{−k_j}(ζ)·conj(M_{q_j}(ω))^{−k_j}` and transported by
/// `1/(√F′(ζ)·conj(√F′(ω)))` per the transformation law.
pub fn szego_punctured_sc(
    map: &ConformalMap,
    punctures_src: &[Complex64],
    orders: &[u32],
    zeta: Complex64,
    omega: Complex64,
) -> Result<Complex64> {
    check_source_args(punctures_src, orders, zeta, omega)?;
    let mut value = disk_szego(zeta, omega)?;
    for (q, &k) in punctures_src.iter().zip(orders) {
        let factor = MoebiusFactor::new(*q)?;
        let at_zeta = check_denominator(factor.eval(zeta)?, "M_q(ζ) = 0")?;
        let at_omega = check_denominator(factor.eval(omega)?, "M_q(ω) = 0")?;
        value /= at_zeta.powu(k) * at_omega.conj().powu(k);
    }
    let sq_zeta = map.sqrt_derivative(zeta);
    let sq_omega = map.sqrt_derivative(omega);
    Ok(value / (sq_zeta * sq_omega.conj()))
}

/// Same kernel in the ratio form `φ(w)^𝐤/φ(z)^𝐤·s(z,w)` with `φ_j = M_{q_j}`.
///
/// On the boundary this agrees with [`szego_punctured_sc`] because
/// `|M_q| ≡ 1` there; away from the boundary the two extensions differ.
pub fn szego_punctured_sc_ratio(
    map: &ConformalMap,
    punctures_src: &[Complex64],
    orders: &[u32],
    zeta: Complex64,
    omega: Complex64,
) -> Result<Complex64> {
    check_source_args(punctures_src, orders, zeta, omega)?;
    let mut value = disk_szego(zeta, omega)?;
    for (q, &k) in punctures_src.iter().zip(orders) {
        let factor = MoebiusFactor::new(*q)?;
        let at_zeta = check_denominator(factor.eval(zeta)?, "M_q(ζ) = 0")?;
        let at_omega = factor.eval(omega)?;
        value *= at_omega.powu(k) / at_zeta.powu(k);
    }
    let sq_zeta = map.sqrt_derivative(zeta);
    let sq_omega = map.sqrt_derivative(omega);
    Ok(value / (sq_zeta * sq_omega.conj()))
}

type EvalFn = Arc<dyn Fn(&Point, &Point) -> Result<Complex64> + Send + Sync>;
type PhiFn = Arc<dyn Fn(&Point) -> Complex64 + Send + Sync>;

/// A pointwise-evaluable kernel tagged with its domain.
///
/// Evaluators are immutable and cheap to clone; they may be called
/// concurrently from many threads.
#[derive(Clone)]
pub struct KernelEvaluator {
    domain: DomainSpec,
    eval: EvalFn,
}

impl std::fmt::Debug for KernelEvaluator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KernelEvaluator")
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

impl KernelEvaluator {
    /// The Szegő kernel of the given model domain in closed form.
    ///
    /// For `SimplyConnectedPunctured` domains, both arguments of `eval` are
    /// taken in source-disk coordinates (see [`szego_punctured_sc`]); for all
    /// other domains source and embedded coordinates coincide. Egg domains
    /// have no closed-form kernel and are rejected.
    pub fn szego(spec: &DomainSpec) -> Result<Self> {
        let eval: EvalFn = match spec {
            DomainSpec::Disk => Arc::new(|z: &Point, w: &Point| {
                let (z, w) = (z.as_one()?, w.as_one()?);
                check_interior_disk(z)?;
                check_on_circle(w, "boundary point")?;
                disk_szego(z, w)
            }),
            DomainSpec::PuncturedDisk { punctures, orders } => {
                let punctures = punctures.clone();
                let orders = orders.clone();
                if punctures.iter().all(|p| p.norm() == 0.0) {
                    let k: u32 = orders.iter().sum();
                    Arc::new(move |z: &Point, w: &Point| {
                        let (z, w) = (z.as_one()?, w.as_one()?);
                        check_interior_disk(z)?;
                        check_on_circle(w, "boundary point")?;
                        check_clearance(z, &punctures)?;
                        punctured_disk_szego(k, z, w)
                    })
                } else {
                    let map = ConformalMap::identity();
                    Arc::new(move |z: &Point, w: &Point| {
                        let (z, w) = (z.as_one()?, w.as_one()?);
                        check_interior_disk(z)?;
                        szego_punctured_sc(&map, &punctures, &orders, z, w)
                    })
                }
            }
            DomainSpec::ProductDxDstar { k } => {
                let k = *k;
                Arc::new(move |z: &Point, w: &Point| {
                    let (z1, z2) = z.as_two()?;
                    let (w1, w2) = w.as_two()?;
                    if !(z1.norm() < 1.0 && z2.norm() < 1.0) {
                        return Err(Error::Domain(format!(
                            "point ({z1}, {z2}) is not interior to 𝔻×𝔻*"
                        )));
                    }
                    check_clearance(z2, &[Complex64::ZERO])?;
                    check_on_circle(w1, "first boundary coordinate")?;
                    check_on_circle(w2, "second boundary coordinate")?;
                    dxdstar_szego(k, (z1, z2), (w1, w2))
                })
            }
            DomainSpec::Hartogs { m, n, k } => {
                let (m, n, k) = (*m, *n, *k);
                Arc::new(move |z: &Point, w: &Point| {
                    let (z1, z2) = z.as_two()?;
                    let (w1, w2) = w.as_two()?;
                    if !(z1.norm().powi(m as i32) < z2.norm().powi(n as i32) && z2.norm() < 1.0) {
                        return Err(Error::Domain(format!(
                            "point ({z1}, {z2}) is not interior to ℍ_{{{m}/{n}}}"
                        )));
                    }
                    check_on_circle(w1, "first boundary coordinate")?;
                    check_on_circle(w2, "second boundary coordinate")?;
                    pg_hartogs_szego(m, n, k, (z1, z2), (w1, w2))
                })
            }
            DomainSpec::Egg { .. } => {
                return Err(Error::InvalidInput(
                    "egg domains carry no closed-form Szegő kernel".into(),
                ))
            }
            DomainSpec::SimplyConnectedPunctured {
                map,
                punctures,
                orders,
            } => {
                let map = map.clone();
                let punctures = punctures.clone();
                let orders = orders.clone();
                Arc::new(move |z: &Point, w: &Point| {
                    let (zeta, omega) = (z.as_one()?, w.as_one()?);
                    szego_punctured_sc(&map, &punctures, &orders, zeta, omega)
                })
            }
        };
        Ok(Self {
            domain: spec.clone(),
            eval,
        })
    }

    /// Wraps an arbitrary kernel function.
    pub fn from_fn(
        domain: DomainSpec,
        f: impl Fn(&Point, &Point) -> Result<Complex64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            domain,
            eval: Arc::new(f),
        }
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn eval(&self, z: &Point, w: &Point) -> Result<Complex64> {
        (self.eval)(z, w)
    }
}

fn check_interior_disk(z: Complex64) -> Result<()> {
    if !(z.norm() < 1.0) {
        return Err(Error::Domain(format!(
            "interior point must satisfy |z| < 1, got |{z}| = {}",
            z.norm()
        )));
    }
    Ok(())
}

/// The generic filtered kernel `c_{k,φ}(z,w) = φ(w)^k/φ(z)^k · parent(z,w)`.
///
/// Errors when `φ(z)` sits on the pole guard (a zero of φ at `z`).
pub fn generic_ck_phi(
    parent: &KernelEvaluator,
    phi: &PhiFn,
    k: u32,
    z: &Point,
    w: &Point,
) -> Result<Complex64> {
    let base = parent.eval(z, w)?;
    if k == 0 {
        return Ok(base);
    }
    let phi_z = check_denominator(phi(z), "φ(z) = 0")?;
    let phi_w = phi(w);
    Ok(base * phi_w.powu(k) / phi_z.powu(k))
}

/// Packages [`generic_ck_phi`] as a reusable evaluator on the same domain tag.
pub fn ck_phi_evaluator(parent: KernelEvaluator, phi: PhiFn, k: u32) -> KernelEvaluator {
    let domain = parent.domain.clone();
    KernelEvaluator::from_fn(domain, move |z, w| generic_ck_phi(&parent, &phi, k, z, w))
}

/// The `m` m-th roots of `b`, counting multiplicity.
pub fn roots_of(b: Complex64, m: u32) -> Vec<Complex64> {
    let r = b.norm().powf(1.0 / f64::from(m));
    let base_arg = b.arg() / f64::from(m);
    (0..m)
        .map(|l| Complex64::from_polar(r, base_arg + TWO_PI * f64::from(l) / f64::from(m)))
        .collect()
}

/// Brute-force side of the partial-fraction identity:
/// `Σ_{ℓ=1}^m b_ℓⁿ/((x−b_ℓⁿ)(y−b_ℓ))` over the m-th roots `b_ℓ` of `b`.
pub fn partial_fraction_oracle(
    m: u32,
    n: u32,
    b: Complex64,
    x: Complex64,
    y: Complex64,
) -> Result<Complex64> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput("need m, n ≥ 1".into()));
    }
    if b.norm() == 0.0 {
        return Err(Error::InvalidInput("b must be nonzero".into()));
    }
    let mut sum = Complex64::ZERO;
    for root in roots_of(b, m) {
        let root_n = root.powu(n);
        let dx = check_denominator(x - root_n, "x = b_ℓⁿ")?;
        let dy = check_denominator(y - root, "y = b_ℓ")?;
        sum += root_n / (dx * dy);
    }
    Ok(sum)
}

/// Closed-form side of the same identity:
/// `m·b^{n+1}·Σ_{p,q=0}^{m−1} c_{p,q} x^p y^q / ((x^m−bⁿ)(y^m−b))` with
/// `c_{p,q} = b^{−(np+1+q)/m}` when `m | np+1+q` and 0 otherwise.
pub fn partial_fraction_closed_form(
    m: u32,
    n: u32,
    b: Complex64,
    x: Complex64,
    y: Complex64,
) -> Result<Complex64> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput("need m, n ≥ 1".into()));
    }
    if b.norm() == 0.0 {
        return Err(Error::InvalidInput("b must be nonzero".into()));
    }
    let dx = check_denominator(x.powu(m) - b.powu(n), "x^m = bⁿ")?;
    let dy = check_denominator(y.powu(m) - b, "y^m = b")?;
    let mut sum = Complex64::ZERO;
    let mut x_pow = Complex64::new(1.0, 0.0);
    for p in 0..m {
        let mut y_pow = Complex64::new(1.0, 0.0);
        for q in 0..m {
            let e = u64::from(n) * u64::from(p) + 1 + u64::from(q);
            if e % u64::from(m) == 0 {
                let c = b.powi(-((e / u64::from(m)) as i32));
                sum += c * x_pow * y_pow;
            }
            y_pow *= y;
        }
        x_pow *= x;
    }
    Ok(f64::from(m) * b.powu(n + 1) * sum / (dx * dy))
}

/// Both sides of the root-substitution contour identity, by `n_nodes`-point
/// trapezoid quadrature over the unit circle:
/// left `Σ_j ∮ f(ζⁿ)/(ζ−a_j) dζ` over the n-th roots of `a`, right
/// `n·∮ f(w)/(w−a) dw`.
pub fn roots_substitution_oracle(
    n: u32,
    a: Complex64,
    f: impl Fn(Complex64) -> Complex64,
    n_nodes: usize,
) -> Result<(Complex64, Complex64)> {
    if n == 0 {
        return Err(Error::InvalidInput("need n ≥ 1".into()));
    }
    if n_nodes < 4 {
        return Err(Error::InvalidInput(
            "need at least 4 quadrature nodes".into(),
        ));
    }
    if (a.norm() - 1.0).abs() < 1e-6 {
        return Err(Error::InvalidInput(format!(
            "a must stay off the unit circle, got |a| = {}",
            a.norm()
        )));
    }
    let step = TWO_PI / n_nodes as f64;
    let roots = roots_of(a, n);
    let mut left = Complex64::ZERO;
    let mut right = Complex64::ZERO;
    for t in 0..n_nodes {
        let zeta = Complex64::cis(step * t as f64);
        let d_zeta = Complex64::i() * zeta * step;
        for root in &roots {
            left += f(zeta.powu(n)) / (zeta - root) * d_zeta;
        }
        right += f(zeta) / (zeta - a) * d_zeta;
    }
    Ok((left, f64::from(n) * right))
}
