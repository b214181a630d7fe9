//! Numerical Kerzman–Stein experiment: compare the Cauchy 𝐤-kernel with the
//! Szegő kernel on punctured disks and their conformal images.
//!
//! The two kernels coincide exactly when the domain is a disk punctured at
//! its center; off-center punctures and non-circular boundaries make the
//! pointwise gap strictly positive. Kernels are compared pointwise rather
//! than through the chord-angle geometry: the pointwise inequality is the
//! directly testable consequence.

use num_complex::Complex64;

use crate::domains::{boundary_grid, ConformalMap, DomainSpec, ParamPoint};
use crate::error::{Error, Result};
use crate::kernels::{cauchy_k, szego_punctured_sc};

/// Golden-angle fraction used by the deterministic interior sample spiral.
const GOLDEN_FRACTION: f64 = 0.381_966_011_250_105_2;

/// Defect summary for one (domain, 𝐤) configuration.
#[derive(Debug, Clone)]
pub struct DefectReport {
    pub domain: DomainSpec,
    pub orders: Vec<u32>,
    pub interior_samples: usize,
    pub boundary_nodes: usize,
    /// `max |𝒞_𝐤 − s_𝐤|` over the sampled interior × boundary pairs.
    pub sup_defect: f64,
    /// `max |𝒞_𝐤(z,w) − conj(𝒞_𝐤(w,z))|` over distinct boundary pairs, the
    /// failure of the Cauchy kernel to extend Hermitianly the way `S_𝐤` does.
    pub antisymmetry_defect: f64,
}

/// Deterministic interior sample points on an Archimedean spiral with
/// golden-angle steps; radii stay within [0.15, 0.85]. No RNG, so reports
/// are reproducible byte for byte.
pub fn interior_spiral(count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|i| {
            let frac = if count > 1 {
                i as f64 / (count - 1) as f64
            } else {
                0.0
            };
            let r = 0.15 + 0.7 * frac;
            let angle = std::f64::consts::TAU * GOLDEN_FRACTION * i as f64;
            Complex64::from_polar(r, angle)
        })
        .collect()
}

/// As [`interior_spiral`], nudging any point that lands too close to a
/// puncture by a small fixed rotation until it clears.
pub fn interior_spiral_avoiding(count: usize, punctures: &[Complex64]) -> Vec<Complex64> {
    let mut points = interior_spiral(count);
    let nudge = Complex64::cis(1e-3);
    for z in &mut points {
        let mut guard = 0;
        while punctures.iter().any(|p| (*z - p).norm() < 1e-5) && guard < 1000 {
            *z *= nudge;
            guard += 1;
        }
    }
    points
}

/// Evaluates both kernels over `sample_z × boundary grid` and over boundary
/// pairs, returning the sup differences.
///
/// `punctures` and `sample_z` are given in source-disk coordinates; the
/// domain is the image of the disk under `map` (use the identity map for the
/// disk itself).
pub fn ks_defect(
    punctures_src: &[Complex64],
    orders: &[u32],
    map: &ConformalMap,
    n: usize,
    sample_z_src: &[Complex64],
) -> Result<DefectReport> {
    if punctures_src.len() != orders.len() {
        return Err(Error::InvalidInput(format!(
            "{} punctures but {} orders",
            punctures_src.len(),
            orders.len()
        )));
    }
    if sample_z_src.is_empty() {
        return Err(Error::InvalidInput(
            "need at least one interior sample".into(),
        ));
    }
    let spec = DomainSpec::simply_connected_punctured(
        map.clone(),
        punctures_src.to_vec(),
        orders.to_vec(),
    )?;
    let grid = boundary_grid(&spec, n, 0)?;
    let tangents = grid.tangents.as_ref().expect("planar grids carry tangents");
    let punctures_image: Vec<Complex64> = punctures_src.iter().map(|q| map.forward(*q)).collect();

    // Boundary data in both coordinate systems.
    let mut omegas = Vec::with_capacity(grid.len());
    for node in &grid.nodes {
        match node {
            ParamPoint::Circle { theta } => omegas.push(Complex64::cis(*theta)),
            _ => unreachable!("planar grids have circle nodes"),
        }
    }
    let embedded: Vec<Complex64> = omegas.iter().map(|w| map.forward(*w)).collect();

    let mut sup_defect: f64 = 0.0;
    for &zeta in sample_z_src {
        let z_image = map.forward(zeta);
        for ((omega, w_image), tangent) in omegas.iter().zip(&embedded).zip(tangents) {
            let cauchy = cauchy_k(&punctures_image, orders, z_image, *w_image, *tangent)?;
            let szego = szego_punctured_sc(map, punctures_src, orders, zeta, *omega)?;
            sup_defect = sup_defect.max((cauchy - szego).norm());
        }
    }

    // Hermitian antisymmetry over distinct boundary pairs. The S_𝐤 extension
    // satisfies S_𝐤(z,w) = conj(S_𝐤(w,z)); the Cauchy kernel in general does
    // not. Stride the grid so the pair count stays near 2¹⁶.
    let stride = (grid.len() / 256).max(1);
    let mut antisymmetry_defect: f64 = 0.0;
    for t in (0..grid.len()).step_by(stride) {
        for u in (0..grid.len()).step_by(stride) {
            if t == u {
                continue;
            }
            let forward = cauchy_k(
                &punctures_image,
                orders,
                embedded[t],
                embedded[u],
                tangents[u],
            )?;
            let backward = cauchy_k(
                &punctures_image,
                orders,
                embedded[u],
                embedded[t],
                tangents[t],
            )?;
            antisymmetry_defect = antisymmetry_defect.max((forward - backward.conj()).norm());
        }
    }

    Ok(DefectReport {
        domain: spec,
        orders: orders.to_vec(),
        interior_samples: sample_z_src.len(),
        boundary_nodes: grid.len(),
        sup_defect,
        antisymmetry_defect,
    })
}

/// One row of a rigidity scan.
#[derive(Debug, Clone)]
pub struct ScanRow {
    pub q: Complex64,
    pub abs_q: f64,
    pub sup_defect: f64,
}

/// Sup defect of the order-`k` punctured disk as a function of the puncture
/// position. The defect vanishes (to rounding) at `q = 0` and is strictly
/// positive for `q ≠ 0`; no monotonicity in `|q|` is asserted.
pub fn rigidity_scan(q_values: &[Complex64], k: u32, n: usize) -> Result<Vec<ScanRow>> {
    let map = ConformalMap::identity();
    let mut rows = Vec::with_capacity(q_values.len());
    for &q in q_values {
        if !(q.norm() < 1.0) {
            return Err(Error::InvalidInput(format!(
                "puncture {q} is not strictly interior to the disk"
            )));
        }
        let samples = interior_spiral_avoiding(32, &[q]);
        let (punctures, orders): (Vec<Complex64>, Vec<u32>) = if k == 0 {
            // 𝐤 = 0 admits no puncture factors at all.
            (vec![], vec![])
        } else {
            (vec![q], vec![k])
        };
        let report = ks_defect(&punctures, &orders, &map, n, &samples)?;
        rows.push(ScanRow {
            q,
            abs_q: q.norm(),
            sup_defect: report.sup_defect,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spiral_is_deterministic_and_interior() {
        let a = interior_spiral(32);
        let b = interior_spiral(32);
        assert_eq!(a, b);
        assert!(a.iter().all(|z| z.norm() < 0.9 && z.norm() > 0.1));
    }

    #[test]
    fn centered_punctures_give_zero_defect() {
        let map = ConformalMap::identity();
        let samples = interior_spiral_avoiding(16, &[Complex64::ZERO]);
        for k in 1..=4u32 {
            let report = ks_defect(&[Complex64::ZERO], &[k], &map, 128, &samples).unwrap();
            assert!(report.sup_defect <= 1e-12, "k={k}: {}", report.sup_defect);
            assert!(report.antisymmetry_defect <= 1e-12);
        }
    }

    #[test]
    fn no_punctures_matches_the_disk_equality_case() {
        let map = ConformalMap::identity();
        let samples = interior_spiral(16);
        let report = ks_defect(&[], &[], &map, 128, &samples).unwrap();
        assert!(report.sup_defect <= 1e-13);
    }

    #[test]
    fn off_center_puncture_has_positive_defect() {
        let rows = rigidity_scan(
            &[
                Complex64::ZERO,
                Complex64::new(0.1, 0.0),
                Complex64::new(0.2, 0.0),
                Complex64::new(0.3, 0.0),
            ],
            1,
            128,
        )
        .unwrap();
        assert!(rows[0].sup_defect <= 1e-12);
        for row in &rows[1..] {
            assert!(
                row.sup_defect > 1e-3,
                "q={} defect={}",
                row.q,
                row.sup_defect
            );
        }
    }

    #[test]
    fn order_zero_scan_is_flat() {
        let rows = rigidity_scan(
            &[
                Complex64::new(0.1, 0.0),
                Complex64::new(0.3, 0.2),
                Complex64::new(-0.5, 0.1),
            ],
            0,
            64,
        )
        .unwrap();
        for row in rows {
            assert!(
                row.sup_defect <= 1e-13,
                "q={} defect={}",
                row.q,
                row.sup_defect
            );
        }
    }
}
