//! Experiment dispatch: each named experiment validates its config, runs
//! deterministically given (config, seed), and fills a [`ResultTable`].

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use szego_core::domains::{DomainSpec, MeasureTag, NuTauWeight, Point};
use szego_core::eggs::{
    beta, divergence_probe, membership_test, monomial_norm, MonomialIndex, MonomialNorm,
    SeriesPreset, TailClass,
};
use szego_core::kernels::{
    partial_fraction_closed_form, partial_fraction_oracle, roots_substitution_oracle, MoebiusFactor,
};
use szego_core::projections::{
    membership_defect, project, reproduce, MultiplierFamily, MultiplierSpec,
};
use szego_core::series::{synthesize, Coefficients, TorusCoefficients, Window};
use szego_core::{domains, rigidity};

use crate::config::{DomainKind, ExperimentConfig, ExperimentKind, MeasureKind};
use crate::table::ResultTable;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "validation: {m}"),
            CliError::Io(m) => write!(f, "io: {m}"),
        }
    }
}

impl From<szego_core::Error> for CliError {
    fn from(e: szego_core::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

fn require<T: Copy>(field: Option<T>, name: &str) -> Result<T, CliError> {
    field.ok_or_else(|| CliError::Validation(format!("missing required config field `{name}`")))
}

/// Puncture positions from the config: `punctures`, else the single-point
/// shorthand `q`, else the given default.
fn puncture_list(config: &ExperimentConfig, default: &[[f64; 2]]) -> Vec<Complex64> {
    config
        .punctures
        .clone()
        .or_else(|| config.q.map(|q| vec![q]))
        .unwrap_or_else(|| default.to_vec())
        .iter()
        .map(|[re, im]| Complex64::new(*re, *im))
        .collect()
}

fn config_echo(config: &ExperimentConfig) -> Result<serde_json::Value, CliError> {
    serde_json::to_value(config).map_err(|e| CliError::Io(e.to_string()))
}

pub fn run(config: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let start = Instant::now();
    let mut table = match config.experiment {
        ExperimentKind::Reproduce => run_reproduce(config),
        ExperimentKind::ProjectCompare => run_project_compare(config),
        ExperimentKind::EggNorms => run_egg_norms(config),
        ExperimentKind::EggStabilize => run_egg_stabilize(config),
        ExperimentKind::RigidityScan => run_rigidity_scan(config),
        ExperimentKind::OracleSuite => run_oracle_suite(config),
    }?;
    table.metadata.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(table)
}

/// Admissible monomial exponent pairs for the two-variable domains.
fn torus_monomials(family: &MultiplierSpec, count: usize) -> Vec<(i64, i64)> {
    let mut set = Vec::new();
    'outer: for a in 0..6i64 {
        for b in -8..4i64 {
            if family.admits(a, b) {
                set.push((a, b));
                if set.len() == count {
                    break 'outer;
                }
            }
        }
    }
    set
}

fn hartogs_interior_points(m: u32, n: u32, count: usize) -> Vec<(Complex64, Complex64)> {
    let ratio = f64::from(n) / f64::from(m);
    (0..count)
        .map(|i| {
            let frac = if count > 1 {
                i as f64 / (count - 1) as f64
            } else {
                0.0
            };
            let r2 = 0.6 + 0.2 * frac;
            let z2 = Complex64::from_polar(r2, 0.4 + 1.1 * i as f64);
            let z1 = Complex64::from_polar(0.5 * r2.powf(ratio), 0.9 * i as f64 - 0.3);
            (z1, z2)
        })
        .collect()
}

fn dxdstar_interior_points(count: usize) -> Vec<(Complex64, Complex64)> {
    (0..count)
        .map(|i| {
            let z1 = Complex64::from_polar(0.25 + 0.1 * i as f64, 0.7 * i as f64);
            let z2 = Complex64::from_polar(0.7 - 0.06 * i as f64, 1.3 * i as f64 + 0.2);
            (z1, z2)
        })
        .collect()
}

fn run_reproduce(config: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let domain = require(config.domain, "domain")?;
    let n = config.grid_n.unwrap_or(128);
    let mut resolved = config.clone();
    resolved.grid_n = Some(n);
    let mut table = ResultTable::new(
        &["function", "point", "reference", "reproduced", "rel_err"],
        config_echo(&resolved)?,
    );

    // (label, sampled boundary data, interior point, reference value)
    struct Case {
        function: String,
        point: String,
        want: Complex64,
        got: Complex64,
    }
    let mut cases: Vec<Case> = Vec::new();

    match domain {
        DomainKind::Disk | DomainKind::PuncturedDisk => {
            let (punctures, orders): (Vec<Complex64>, Vec<u32>) = match domain {
                DomainKind::Disk => (vec![], vec![]),
                _ => {
                    let ps = puncture_list(config, &[[0.0, 0.0]]);
                    let ks = match (&config.kvec, config.k) {
                        (Some(kv), _) => kv.clone(),
                        (None, Some(k)) => vec![k; ps.len()],
                        (None, None) => vec![1; ps.len()],
                    };
                    (ps, ks)
                }
            };
            let spec = if punctures.is_empty() {
                DomainSpec::Disk
            } else {
                DomainSpec::punctured_disk(punctures.clone(), orders.clone())?
            };
            let factors: Vec<(MoebiusFactor, u32)> = punctures
                .iter()
                .zip(&orders)
                .map(|(q, &k)| MoebiusFactor::new(*q).map(|f| (f, k)))
                .collect::<Result<_, _>>()?;
            // Test functions z^a·Π M_{q_j}^{−k_j}(z): pole order k_j at q_j.
            let eval = |a: u32, z: Complex64| -> Result<Complex64, CliError> {
                let mut v = z.powu(a);
                for (f, k) in &factors {
                    v /= f.eval(z)?.powu(*k);
                }
                Ok(v)
            };
            let points = [
                Complex64::from_polar(0.6, std::f64::consts::PI / 5.0),
                Complex64::new(-0.45, 0.3),
                Complex64::new(0.2, -0.62),
                Complex64::new(0.75, 0.1),
                Complex64::new(-0.1, -0.35),
            ];
            for a in 0..5u32 {
                let samples = szego_core::series::GridSamples::from_circle_fn(n, |t| {
                    eval(a, Complex64::cis(t)).expect("boundary values are pole-free")
                });
                for (pi, z) in points.iter().enumerate() {
                    let got = reproduce(&spec, &samples, &Point::One(*z))?;
                    cases.push(Case {
                        function: format!("z^{a}·phi^-k"),
                        point: format!("z{pi}"),
                        want: eval(a, *z)?,
                        got,
                    });
                }
            }
        }
        DomainKind::Dxdstar | DomainKind::Hartogs => {
            let k = config.k.unwrap_or(0);
            let (spec, family, points) = match domain {
                DomainKind::Dxdstar => (
                    DomainSpec::ProductDxDstar { k },
                    MultiplierSpec::new(MultiplierFamily::DxDstar { k }),
                    dxdstar_interior_points(5),
                ),
                _ => {
                    let m = require(config.m, "m")?;
                    let nn = require(config.n, "n")?;
                    (
                        DomainSpec::hartogs(m, nn, k)?,
                        MultiplierSpec::new(MultiplierFamily::Hartogs { m, n: nn, k }),
                        hartogs_interior_points(m, nn, 5),
                    )
                }
            };
            for (a, b) in torus_monomials(&family, 10) {
                let samples = szego_core::series::GridSamples::from_torus_fn(n, |t1, t2| {
                    Complex64::cis(a as f64 * t1 + b as f64 * t2)
                });
                for (pi, (z1, z2)) in points.iter().enumerate() {
                    let got = reproduce(&spec, &samples, &Point::Two(*z1, *z2))?;
                    cases.push(Case {
                        function: format!("z1^{a}·z2^{b}"),
                        point: format!("z{pi}"),
                        want: z1.powi(a as i32) * z2.powi(b as i32),
                        got,
                    });
                }
            }
        }
    }

    for case in cases {
        let rel = (case.got - case.want).norm() / case.want.norm().max(1e-300);
        table.push_row(vec![
            case.function.into(),
            case.point.into(),
            format!("{}", case.want).into(),
            format!("{}", case.got).into(),
            rel.into(),
        ]);
    }
    Ok(table)
}

fn run_project_compare(config: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let m = config.m.unwrap_or(1);
    let n_exp = config.n.unwrap_or(1);
    let k = config.k.unwrap_or(0);
    let bandwidth = config.bandwidth.unwrap_or(16) as i64;
    let grid_n = config.grid_n.unwrap_or(128);
    let mut resolved = config.clone();
    resolved.m = Some(m);
    resolved.n = Some(n_exp);
    resolved.k = Some(k);
    resolved.bandwidth = Some(bandwidth as u32);
    resolved.grid_n = Some(grid_n);

    let mut table = ResultTable::new(
        &[
            "point",
            "z1",
            "z2",
            "series_value",
            "quadrature_value",
            "abs_diff",
            "defect_removed",
        ],
        config_echo(&resolved)?,
    );

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let window = Window::new(-bandwidth, bandwidth, -bandwidth, bandwidth)?;
    let mut data = TorusCoefficients::zero(window);
    for j in -bandwidth..=bandwidth {
        for l in -bandwidth..=bandwidth {
            let re: f64 = rng.gen_range(-1.0..1.0);
            let im: f64 = rng.gen_range(-1.0..1.0);
            data.set(j, l, Complex64::new(re, im))?;
        }
    }

    let spec = DomainSpec::hartogs(m, n_exp, k)?;
    let family = MultiplierSpec::new(MultiplierFamily::Hartogs { m, n: n_exp, k });
    let coeffs = Coefficients::Torus(data);
    let projected = project(&coeffs, &family)?;
    let projected_torus = projected.as_torus()?;
    let boundary = synthesize(&coeffs, grid_n)?;
    let defect = membership_defect(&projected, &family)?;

    for (pi, (z1, z2)) in hartogs_interior_points(m, n_exp, 10).iter().enumerate() {
        let series_value = projected_torus.evaluate(*z1, *z2);
        let quad_value = reproduce(&spec, &boundary, &Point::Two(*z1, *z2))?;
        table.push_row(vec![
            (pi as i64).into(),
            format!("{z1}").into(),
            format!("{z2}").into(),
            format!("{series_value}").into(),
            format!("{quad_value}").into(),
            (series_value - quad_value).norm().into(),
            defect.into(),
        ]);
    }
    Ok(table)
}

fn measure_from(config: &ExperimentConfig) -> Result<MeasureTag, CliError> {
    Ok(match config.measure.unwrap_or(MeasureKind::Omega) {
        MeasureKind::Omega => MeasureTag::EggOmegaP,
        MeasureKind::Sigma => MeasureTag::EggSigma,
        MeasureKind::NuTau => MeasureTag::EggNuTau {
            tau: require(config.tau, "tau")?,
            weight: NuTauWeight::One,
        },
    })
}

fn run_egg_norms(config: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let p = require(config.p, "p")?;
    let measure = measure_from(config)?;
    let mut table = ResultTable::new(
        &[
            "j",
            "ell",
            "norm_quadrature",
            "beta_reference",
            "ratio",
            "ordering_ok",
        ],
        config_echo(config)?,
    );
    let pf = f64::from(p);
    for j in 0..=6u32 {
        for ell in 0..=6i64 {
            let norm = monomial_norm(p, &measure, MonomialIndex { j, ell })?;
            let beta_omega = beta(f64::from(j) / pf + 1.0, ell as f64 / pf + 1.0)?;
            let beta_sigma = beta((f64::from(j) + 1.0) / pf, (ell as f64 + 1.0) / pf)?;
            let reference = 4.0 * std::f64::consts::PI.powi(2) * beta_omega;
            let ordering_ok = beta_omega <= beta_sigma * (1.0 + 1e-12);
            match norm {
                MonomialNorm::Finite(v) => table.push_row(vec![
                    i64::from(j).into(),
                    ell.into(),
                    v.into(),
                    reference.into(),
                    (v / reference).into(),
                    i64::from(ordering_ok).into(),
                ]),
                MonomialNorm::Divergent { endpoint } => table.push_row(vec![
                    i64::from(j).into(),
                    ell.into(),
                    format!("divergent({endpoint:?})").into(),
                    reference.into(),
                    "-".into(),
                    i64::from(ordering_ok).into(),
                ]),
            }
        }
    }
    Ok(table)
}

fn run_egg_stabilize(config: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let p = require(config.p, "p")?;

    // With truncations present this becomes the series-divergence probe.
    if let Some(truncations) = &config.truncations {
        let k = config.k.unwrap_or(1);
        let measure = measure_from(config)?;
        let mut table = ResultTable::new(
            &[
                "preset",
                "truncation",
                "partial_sum",
                "last_term",
                "tail_slope",
                "class",
            ],
            config_echo(config)?,
        );
        for (label, preset) in [
            ("f", SeriesPreset::StabilizationF { p, k }),
            ("h", SeriesPreset::StabilizationH { p, k }),
            ("h/z2", SeriesPreset::StabilizationHOverZ2 { p, k }),
        ] {
            match divergence_probe(&preset, &measure, truncations) {
                Ok(report) => {
                    let class = match report.classification {
                        TailClass::Convergent => "convergent",
                        TailClass::Divergent => "divergent",
                        TailClass::Inconclusive => "inconclusive",
                    };
                    for row in &report.rows {
                        table.push_row(vec![
                            label.into(),
                            (row.truncation as i64).into(),
                            row.partial_sum.into(),
                            row.last_term.into(),
                            report.tail_slope.into(),
                            class.into(),
                        ]);
                    }
                }
                // Termwise-divergent integrals are a result, not a crash.
                Err(szego_core::Error::Domain(why)) => {
                    table.push_row(vec![
                        label.into(),
                        0_i64.into(),
                        "divergent".into(),
                        why.into(),
                        "-".into(),
                        "divergent".into(),
                    ]);
                }
                Err(other) => return Err(other.into()),
            }
        }
        return Ok(table);
    }

    let taus: Vec<f64> = match config.tau {
        Some(t) => vec![t],
        None => vec![0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0],
    };
    let mut table = ResultTable::new(
        &[
            "tau",
            "threshold",
            "k",
            "member_nu_tau",
            "member_sigma",
            "member_omega",
        ],
        config_echo(config)?,
    );
    for &tau in &taus {
        let threshold = domains::stabilization_threshold(p, tau)?;
        let nu = MeasureTag::EggNuTau {
            tau,
            weight: NuTauWeight::One,
        };
        for k in 0..=5u32 {
            let m_nu = membership_test(p, &nu, k)?;
            let m_sigma = membership_test(p, &MeasureTag::EggSigma, k)?;
            let m_omega = membership_test(p, &MeasureTag::EggOmegaP, k)?;
            table.push_row(vec![
                tau.into(),
                i64::from(threshold).into(),
                i64::from(k).into(),
                i64::from(m_nu.is_member).into(),
                i64::from(m_sigma.is_member).into(),
                i64::from(m_omega.is_member).into(),
            ]);
        }
    }
    Ok(table)
}

fn run_rigidity_scan(config: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let k = config.k.unwrap_or(1);
    let n = config.grid_n.unwrap_or(256);
    let qs = puncture_list(config, &[[0.0, 0.0], [0.1, 0.0], [0.2, 0.0], [0.3, 0.0]]);
    let mut resolved = config.clone();
    resolved.k = Some(k);
    resolved.grid_n = Some(n);
    let mut table = ResultTable::new(
        &["q_re", "q_im", "abs_q", "sup_defect"],
        config_echo(&resolved)?,
    );
    for row in rigidity::rigidity_scan(&qs, k, n)? {
        table.push_row(vec![
            row.q.re.into(),
            row.q.im.into(),
            row.abs_q.into(),
            row.sup_defect.into(),
        ]);
    }
    Ok(table)
}

fn run_oracle_suite(config: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let m_max = config.m_max.unwrap_or(6);
    let n_max = config.n_max.unwrap_or(6);
    let samples = config.samples.unwrap_or(100);
    let tolerance = config.tolerance.unwrap_or(1e-10);
    let mut resolved = config.clone();
    resolved.m_max = Some(m_max);
    resolved.n_max = Some(n_max);
    resolved.samples = Some(samples);
    resolved.tolerance = Some(tolerance);

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut table = ResultTable::new(
        &["oracle", "m", "n", "samples", "max_rel_err", "pass"],
        config_echo(&resolved)?,
    );

    for m in 1..=m_max {
        for n in 1..=n_max {
            let mut worst: f64 = 0.0;
            for _ in 0..samples {
                let (b, x, y) = sample_partfrac_inputs(&mut rng, m, n);
                let lhs = partial_fraction_oracle(m, n, b, x, y)?;
                let rhs = partial_fraction_closed_form(m, n, b, x, y)?;
                worst = worst.max((lhs - rhs).norm() / lhs.norm().max(1e-300));
            }
            table.push_row(vec![
                "partfrac".into(),
                i64::from(m).into(),
                i64::from(n).into(),
                i64::from(samples).into(),
                worst.into(),
                i64::from(worst <= tolerance).into(),
            ]);
        }
    }

    for n in 1..=n_max {
        let mut worst: f64 = 0.0;
        for _ in 0..samples.min(20) {
            let inside: bool = rng.gen();
            let radius = if inside {
                rng.gen_range(0.2..0.8)
            } else {
                rng.gen_range(1.3..2.5)
            };
            let a = Complex64::from_polar(radius, rng.gen_range(0.0..std::f64::consts::TAU));
            let c1 = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            // n-th roots of a sit near the contour (|a|^{1/n} → 1), so the
            // trapezoid rule needs headroom.
            let (lhs, rhs) =
                roots_substitution_oracle(n, a, |w| Complex64::new(1.0, 0.0) + c1 * w, 1024)?;
            let scale = lhs.norm().max(rhs.norm()).max(1.0);
            worst = worst.max((lhs - rhs).norm() / scale);
        }
        table.push_row(vec![
            "roots-substitution".into(),
            0_i64.into(),
            i64::from(n).into(),
            i64::from(samples.min(20)).into(),
            worst.into(),
            i64::from(worst <= tolerance).into(),
        ]);
    }
    Ok(table)
}

/// Draws (b, x, y) for the partial-fraction identity with all poles kept at
/// distance ≥ 0.2, resampling deterministically until clear.
fn sample_partfrac_inputs(
    rng: &mut ChaCha8Rng,
    m: u32,
    n: u32,
) -> (Complex64, Complex64, Complex64) {
    loop {
        let b = Complex64::from_polar(
            rng.gen_range(0.5..2.0),
            rng.gen_range(0.0..std::f64::consts::TAU),
        );
        let x = Complex64::from_polar(
            rng.gen_range(2.5..4.0),
            rng.gen_range(0.0..std::f64::consts::TAU),
        );
        let y = Complex64::from_polar(
            rng.gen_range(2.5..4.0),
            rng.gen_range(0.0..std::f64::consts::TAU),
        );
        let roots = szego_core::kernels::roots_of(b, m);
        let clear = roots
            .iter()
            .all(|r| (x - r.powu(n)).norm() >= 0.2 && (y - r).norm() >= 0.2);
        if clear {
            return (b, x, y);
        }
    }
}
