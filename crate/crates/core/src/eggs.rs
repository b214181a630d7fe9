//! Hardy-norm computations, membership tests, and filtration-stabilization
//! diagnostics on egg domains.
//!
//! Monomial boundary values `s^{j/2p}(1−s)^{ℓ/2p}e^{i(jθ₁+ℓθ₂)}` are
//! orthogonal in both angles, so every norm here reduces to a weighted
//! integral over `s ∈ (0,1)`. Under ω_p the integral is an Euler beta value
//! exactly; under σ and ν_τ it is computed by the singularity-absorbing
//! quadrature from the domains module.

use crate::domains::{density_parts, nu_tau_integrability_bound, s_quadrature_rule, MeasureTag};
use crate::error::{Error, Result};

const FOUR_PI_SQ: f64 = 39.47841760435743; // (2π)²

/// ln Γ(x) for x > 0, by upward recurrence into the Stirling regime and the
/// asymptotic series with Bernoulli coefficients `B_{2n}/(2n(2n−1))`.
fn ln_gamma(mut x: f64) -> f64 {
    const LN_SQRT_TWO_PI: f64 = 0.918_938_533_204_672_7;
    const STIRLING: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        7.0 / 1092.0,
    ];
    debug_assert!(x > 0.0);
    let mut shift = 0.0;
    while x < 10.0 {
        shift -= x.ln();
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut power = inv;
    for c in STIRLING {
        series += c * power;
        power *= inv2;
    }
    shift + (x - 0.5) * x.ln() - x + LN_SQRT_TWO_PI + series
}

/// Euler beta function `β(x,y) = Γ(x)Γ(y)/Γ(x+y)`, via log-gamma.
///
/// ```
/// use szego_core::eggs::beta;
///
/// // β(1, 1) = ∫₀¹ ds = 1
/// assert!((beta(1.0, 1.0).unwrap() - 1.0).abs() < 1e-14);
/// // β(m+1, 1) = 1/(m+1)
/// assert!((beta(8.0, 1.0).unwrap() - 0.125).abs() < 1e-14);
/// ```
pub fn beta(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0) || !(y > 0.0) || !x.is_finite() || !y.is_finite() {
        return Err(Error::Domain(format!(
            "beta requires positive arguments, got ({x}, {y})"
        )));
    }
    Ok((ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y)).exp())
}

/// Exponent pair of a boundary monomial: `z₁^j z₂^ℓ` restricted to the egg
/// boundary. `ℓ` may be negative (a pole along `{z₂=0}`), `j` may not.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonomialIndex {
    pub j: u32,
    pub ell: i64,
}

/// Which endpoint of the s-interval makes an integral diverge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Zero,
    One,
}

/// Squared L² norm of a boundary monomial, or a divergence marker naming the
/// failing endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MonomialNorm {
    Finite(f64),
    Divergent { endpoint: Endpoint },
}

impl MonomialNorm {
    pub fn finite(&self) -> Option<f64> {
        match self {
            MonomialNorm::Finite(v) => Some(*v),
            MonomialNorm::Divergent { .. } => None,
        }
    }
}

/// Adaptive tanh-sinh integration of `s^{a}(1−s)^{b}·g(s)` over (0,1), to
/// absolute-or-relative tolerance `tol`.
fn s_integral(a: f64, b: f64, g: &dyn Fn(f64, f64) -> f64, tol: f64) -> f64 {
    let mut prev = f64::NAN;
    for level in 4..=9u32 {
        let value: f64 = s_quadrature_rule(level)
            .iter()
            .map(|n| n.weight * n.s.powf(a) * n.one_minus_s.powf(b) * g(n.s, n.one_minus_s))
            .sum();
        if !prev.is_nan() && (value - prev).abs() <= tol * value.abs().max(1.0) {
            return value;
        }
        prev = value;
    }
    prev
}

/// Squared L²(ν) norm of `s^{j/2p}(1−s)^{ℓ/2p}e^{i(jθ₁+ℓθ₂)}` on the egg
/// boundary.
///
/// Under ω_p this is exactly `4π²·β(j/p+1, ℓ/p+1)` (the beta extends to
/// negative ℓ as long as `ℓ/p+1 > 0`); under σ and ν_τ the s-integral is
/// evaluated by adaptive quadrature to tolerance 1e-10.
pub fn monomial_norm(p: u32, measure: &MeasureTag, idx: MonomialIndex) -> Result<MonomialNorm> {
    if p == 0 {
        return Err(Error::InvalidInput("egg exponent p must be ≥ 1".into()));
    }
    let parts = density_parts(p, measure)?;
    let pf = f64::from(p);
    // Squared-integrand exponents at the two endpoints.
    let e0 = f64::from(idx.j) / pf + parts.exp0;
    let e1 = idx.ell as f64 / pf + parts.exp1;
    if e0 <= -1.0 {
        return Ok(MonomialNorm::Divergent {
            endpoint: Endpoint::Zero,
        });
    }
    if e1 <= -1.0 {
        return Ok(MonomialNorm::Divergent {
            endpoint: Endpoint::One,
        });
    }
    let value = match measure {
        MeasureTag::EggOmegaP => FOUR_PI_SQ * beta(e0 + 1.0, e1 + 1.0)?,
        _ => FOUR_PI_SQ * s_integral(e0, e1, &parts.smooth, 1e-10),
    };
    Ok(MonomialNorm::Finite(value))
}

/// Quadrature-only route for the same norm: always integrates the density,
/// never consults the beta closed form. Kept separate so the closed form has
/// an independent oracle to be checked against.
pub fn monomial_norm_quadrature(
    p: u32,
    measure: &MeasureTag,
    idx: MonomialIndex,
) -> Result<MonomialNorm> {
    if p == 0 {
        return Err(Error::InvalidInput("egg exponent p must be ≥ 1".into()));
    }
    let parts = density_parts(p, measure)?;
    let pf = f64::from(p);
    let e0 = f64::from(idx.j) / pf + parts.exp0;
    let e1 = idx.ell as f64 / pf + parts.exp1;
    if e0 <= -1.0 {
        return Ok(MonomialNorm::Divergent {
            endpoint: Endpoint::Zero,
        });
    }
    if e1 <= -1.0 {
        return Ok(MonomialNorm::Divergent {
            endpoint: Endpoint::One,
        });
    }
    Ok(MonomialNorm::Finite(
        FOUR_PI_SQ * s_integral(e0, e1, &parts.smooth, 1e-12),
    ))
}

/// Outcome of a membership test for `z₂^{−k}|_{bℰ_p}` in `L²(ν)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Membership {
    pub is_member: bool,
    /// Exponent of `(1−s)` in the squared integrand at `s → 1`; membership is
    /// equivalent to this exceeding −1.
    pub boundary_exponent: f64,
    /// Whether a quadrature divergence probe agrees with the analytic call.
    pub quadrature_agrees: bool,
}

/// Truncated-tail growth probe: integrates the squared integrand over
/// increasing sub-intervals of (0,1) and reports whether the increments keep
/// growing (divergent) or die off (convergent).
fn quadrature_diverges(e0: f64, e1: f64, smooth: &dyn Fn(f64, f64) -> f64) -> bool {
    let rule = s_quadrature_rule(5);
    let partial = |t_cut: f64| -> f64 {
        rule.iter()
            .filter(|n| n.t.abs() <= t_cut)
            .map(|n| n.weight * n.s.powf(e0) * n.one_minus_s.powf(e1) * smooth(n.s, n.one_minus_s))
            .sum()
    };
    // Cuts are kept modest so that strongly divergent tails stay
    // representable in f64.
    let s1 = partial(2.0);
    let s2 = partial(2.75);
    let s3 = partial(3.5);
    if !s3.is_finite() {
        return true;
    }
    let d1 = (s2 - s1).abs();
    let d2 = (s3 - s2).abs();
    // Convergent integrals have double-exponentially decaying tails.
    d2 > 0.5 * d1 && d2 > 1e-12 * s3.abs().max(1.0)
}

/// Does `z₂^{−k}|_{bℰ_p}` belong to `L²(ν)`?
///
/// Decided analytically from the density exponent at `s = 1` (for ν_τ the
/// rule is `k < p(1−τ)+τ`) and cross-checked by a quadrature divergence
/// probe.
pub fn membership_test(p: u32, measure: &MeasureTag, k: u32) -> Result<Membership> {
    if p == 0 {
        return Err(Error::InvalidInput("egg exponent p must be ≥ 1".into()));
    }
    let parts = density_parts(p, measure)?;
    let pf = f64::from(p);
    let e1 = -f64::from(k) / pf + parts.exp1;
    let is_member = match measure {
        MeasureTag::EggNuTau { tau, .. } => {
            f64::from(k) < nu_tau_integrability_bound(p, *tau) - 1e-9
        }
        _ => e1 > -1.0 + 1e-12,
    };
    let diverges = quadrature_diverges(parts.exp0, e1, &parts.smooth);
    Ok(Membership {
        is_member,
        boundary_exponent: e1,
        quadrature_agrees: diverges != is_member,
    })
}

/// Named coefficient families from the stabilization analysis.
///
/// `StrictContainment` is the double series with `a_{mp,np} =
/// β(m+1,n+1)^{−1/2}/(mn)`; `StabilizationF` is
/// `Σ (m+1)^{−k/2p}(s^{1/2p}e^{iθ₁})^{mp}`; `StabilizationH` multiplies it by
/// `z₂^{−(k−1)}` on the boundary, and `StabilizationHOverZ2` by a further
/// `z₂^{−1}`, the harmonic-growth witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesPreset {
    StrictContainment { p: u32 },
    StabilizationF { p: u32, k: u32 },
    StabilizationH { p: u32, k: u32 },
    StabilizationHOverZ2 { p: u32, k: u32 },
}

impl SeriesPreset {
    fn p(&self) -> u32 {
        match self {
            SeriesPreset::StrictContainment { p }
            | SeriesPreset::StabilizationF { p, .. }
            | SeriesPreset::StabilizationH { p, .. }
            | SeriesPreset::StabilizationHOverZ2 { p, .. } => *p,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.p() == 0 {
            return Err(Error::InvalidInput("egg exponent p must be ≥ 1".into()));
        }
        match self {
            SeriesPreset::StabilizationH { p, k } | SeriesPreset::StabilizationHOverZ2 { p, k } => {
                if k >= p {
                    return Err(Error::InvalidInput(format!(
                        "stabilization witness needs k < p, got k = {k}, p = {p}"
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// Tail classification of a squared-norm series by fitted log-log slope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailClass {
    Convergent,
    Divergent,
    /// Slope within ±0.05 of the harmonic boundary −1.
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct ProbeRow {
    pub truncation: usize,
    pub partial_sum: f64,
    /// Magnitude of the term at this truncation index.
    pub last_term: f64,
}

#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub rows: Vec<ProbeRow>,
    /// Least-squares slope of ln(term) against ln(index) over the probed
    /// truncations.
    pub tail_slope: f64,
    pub classification: TailClass,
}

/// Weighted mean of `g` under the beta weight `s^{x−1}(1−s)^{y−1}`, computed
/// in log space so that very large exponents neither overflow nor underflow.
fn beta_weighted_mean(x: f64, y: f64, g: &dyn Fn(f64, f64) -> f64) -> f64 {
    let rule = s_quadrature_rule(6);
    let mut log_weights = Vec::with_capacity(rule.len());
    let mut max_log = f64::NEG_INFINITY;
    for n in &rule {
        let lw = n.weight.ln() + (x - 1.0) * n.s.ln() + (y - 1.0) * n.one_minus_s.ln();
        if lw > max_log {
            max_log = lw;
        }
        log_weights.push(lw);
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for (n, lw) in rule.iter().zip(&log_weights) {
        let w = (lw - max_log).exp();
        num += w * g(n.s, n.one_minus_s);
        den += w;
    }
    num / den
}

/// Squared-norm term of the 1-D presets at index `m` (series index), for the
/// given measure, including the 4π² angular factor.
fn preset_term_1d(
    amp_exponent: f64,
    oms_exponent: f64,
    measure: &MeasureTag,
    p: u32,
    m: usize,
) -> Result<f64> {
    let parts = density_parts(p, measure)?;
    let mf = m as f64;
    let amp2 = (mf + 1.0).powf(amp_exponent);
    let x = mf + parts.exp0 + 1.0;
    let y = oms_exponent + parts.exp1 + 1.0;
    if y <= 0.0 {
        return Err(Error::Domain(format!(
            "series term m = {m} has a divergent s-integral (endpoint s = 1)"
        )));
    }
    let mean = match measure {
        MeasureTag::EggOmegaP => 1.0,
        _ => beta_weighted_mean(x, y, &parts.smooth),
    };
    Ok(FOUR_PI_SQ * amp2 * beta(x, y)? * mean)
}

/// Squared-norm shell of the strict-containment double series: all terms
/// with `max(m,n)` equal to the shell index.
fn strict_containment_shell(p: u32, measure: &MeasureTag, shell: usize) -> Result<f64> {
    let parts = density_parts(p, measure)?;
    let mut total = 0.0;
    let entry = |m: usize, n: usize| -> Result<f64> {
        let (mf, nf) = (m as f64, n as f64);
        // |a|² = β(m+1,n+1)^{−1}(mn)^{−2}; the measure integral is
        // β(m+exp0+1, n+exp1+1)·⟨smooth⟩. Combine the two betas through
        // log-gamma so shells beyond ~500 stay representable.
        let log_beta_ratio = ln_gamma(mf + parts.exp0 + 1.0) + ln_gamma(nf + parts.exp1 + 1.0)
            - ln_gamma(mf + nf + parts.exp0 + parts.exp1 + 2.0)
            - (ln_gamma(mf + 1.0) + ln_gamma(nf + 1.0) - ln_gamma(mf + nf + 2.0));
        let mean = match measure {
            MeasureTag::EggOmegaP => 1.0,
            _ => beta_weighted_mean(mf + parts.exp0 + 1.0, nf + parts.exp1 + 1.0, &parts.smooth),
        };
        Ok(FOUR_PI_SQ * log_beta_ratio.exp() * mean / (mf * mf * nf * nf))
    };
    for n in 1..=shell {
        total += entry(shell, n)?;
    }
    for m in 1..shell {
        total += entry(m, shell)?;
    }
    Ok(total)
}

fn term_at(preset: &SeriesPreset, measure: &MeasureTag, index: usize) -> Result<f64> {
    let pf = f64::from(preset.p());
    match preset {
        SeriesPreset::StrictContainment { p } => strict_containment_shell(*p, measure, index),
        SeriesPreset::StabilizationF { p, k } => {
            preset_term_1d(-f64::from(*k) / pf, 0.0, measure, *p, index - 1)
        }
        SeriesPreset::StabilizationH { p, k } => preset_term_1d(
            -f64::from(*k) / pf,
            -(f64::from(*k) - 1.0) / pf,
            measure,
            *p,
            index - 1,
        ),
        SeriesPreset::StabilizationHOverZ2 { p, k } => preset_term_1d(
            -f64::from(*k) / pf,
            -f64::from(*k) / pf,
            measure,
            *p,
            index - 1,
        ),
    }
}

fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|(x, _)| x).sum();
    let sy: f64 = points.iter().map(|(_, y)| y).sum();
    let sxx: f64 = points.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = points.iter().map(|(x, y)| x * y).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Partial squared norms of a preset series at the given truncations,
/// together with a fitted log-log tail slope of the term magnitudes.
///
/// Truncation `T` counts leading series terms (shells, for the double
/// series). Terms behaving like `T^s` with `s < −1` classify convergent;
/// slopes within ±0.05 of the harmonic boundary −1 are reported as
/// inconclusive rather than forced.
pub fn divergence_probe(
    preset: &SeriesPreset,
    measure: &MeasureTag,
    truncations: &[usize],
) -> Result<ProbeReport> {
    preset.validate()?;
    if truncations.is_empty() || truncations.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(
            "truncations must be strictly increasing and non-empty".into(),
        ));
    }
    if truncations[0] == 0 {
        return Err(Error::InvalidInput("truncations must start at ≥ 1".into()));
    }
    let max_t = *truncations.last().unwrap();
    let mut rows = Vec::with_capacity(truncations.len());
    let mut partial = 0.0;
    let mut last_term = 0.0;
    let mut next = 0;
    for index in 1..=max_t {
        last_term = term_at(preset, measure, index)?;
        partial += last_term;
        if index == truncations[next] {
            rows.push(ProbeRow {
                truncation: index,
                partial_sum: partial,
                last_term,
            });
            next += 1;
        }
    }
    let _ = last_term;
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.last_term > 0.0)
        .map(|r| ((r.truncation as f64).ln(), r.last_term.ln()))
        .collect();
    let tail_slope = if points.len() >= 2 {
        fit_slope(&points)
    } else {
        f64::NAN
    };
    let classification = if tail_slope < -1.05 {
        TailClass::Convergent
    } else if tail_slope > -0.95 {
        TailClass::Divergent
    } else {
        TailClass::Inconclusive
    };
    Ok(ProbeReport {
        rows,
        tail_slope,
        classification,
    })
}
