//! Curated set pairs with approximating cones, for corroborating verdicts.

use serde::Serialize;

use super::sets::{local_separation_probe, LocalSeparationReport, SetShape};
use super::{audit_z_ignoring, build_multicone, separation_verdict, MultiCone, Verdict, VerdictReport, ZIgnoringAudit};
use crate::error::Result;
use crate::geometry::{GammaSet, LinearMap, OperatorSet};
use crate::mapping::Mapping;

/// Two sets through `z`, approximating multi-cones for each, and optionally
/// a selection of the generating map of `K₁` for a `z`-ignoring audit.
#[derive(Clone, Debug)]
pub struct SeparationFixture {
    pub name: &'static str,
    pub z: Vec<f64>,
    pub e1: SetShape,
    pub e2: SetShape,
    pub k1: MultiCone,
    pub k2: MultiCone,
    pub generator: Option<(Mapping, GammaSet)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureOutcome {
    pub name: String,
    pub verdict: VerdictReport,
    pub probe: LocalSeparationReport,
    pub z_audit: Option<ZIgnoringAudit>,
    /// False only when the verdict fires and the probe finds no common point.
    pub consistent: bool,
}

fn identity_on(n: usize, gamma: GammaSet, z_ignoring: bool) -> Result<MultiCone> {
    build_multicone(&OperatorSet::singleton(LinearMap::identity(n)), &gamma, z_ignoring)
}

fn cone(n: usize, gens: &[&[f64]]) -> Result<GammaSet> {
    GammaSet::finite_cone(n, gens.iter().map(|g| g.to_vec()).collect())
}

fn line_gamma(d: &[f64]) -> Result<GammaSet> {
    let neg: Vec<f64> = d.iter().map(|v| -v).collect();
    GammaSet::finite_cone(d.len(), vec![d.to_vec(), neg])
}

/// The ten fixtures; all are based at the origin.
pub fn curated_fixtures() -> Result<Vec<SeparationFixture>> {
    let z2 = vec![0.0, 0.0];
    let z3 = vec![0.0, 0.0, 0.0];
    let upper = cone(2, &[&[1.0, 0.0], &[-1.0, 0.0], &[0.0, 1.0]])?;
    let v_graph = Mapping::new("v_graph", 1, 2, |t| vec![t[0], t[0].abs()]);
    Ok(vec![
        SeparationFixture {
            name: "half_plane_vs_vertical_ray",
            z: z2.clone(),
            e1: SetShape::HalfSpace { normal: vec![0.0, 1.0], open: false },
            e2: SetShape::Rays { directions: vec![vec![0.0, 1.0]] },
            k1: identity_on(2, upper.clone(), false)?,
            k2: identity_on(2, GammaSet::half_line(&[0.0, 1.0])?, false)?,
            generator: None,
        },
        SeparationFixture {
            name: "axes_plain",
            z: z2.clone(),
            e1: SetShape::line(&[1.0, 0.0]),
            e2: SetShape::line(&[0.0, 1.0]),
            k1: identity_on(2, line_gamma(&[1.0, 0.0])?, false)?,
            k2: identity_on(2, line_gamma(&[0.0, 1.0])?, false)?,
            generator: None,
        },
        SeparationFixture {
            // G(t) = (t, t²) stays in the open upper half-plane for t ≠ 0
            name: "open_half_plane_z_ignoring_vs_vertical_axis",
            z: z2.clone(),
            e1: SetShape::HalfSpace { normal: vec![0.0, 1.0], open: true },
            e2: SetShape::line(&[0.0, 1.0]),
            k1: build_multicone(&OperatorSet::singleton(LinearMap::column(&[1.0, 0.0])), &GammaSet::full(1), true)?,
            k2: identity_on(2, line_gamma(&[0.0, 1.0])?, false)?,
            generator: Some((
                Mapping::new("lifted_parabola", 1, 2, |t| vec![t[0], t[0] * t[0]]),
                GammaSet::full(1),
            )),
        },
        SeparationFixture {
            name: "adjacent_quadrants",
            z: z2.clone(),
            e1: SetShape::Sector { first: vec![1.0, 0.0], second: vec![0.0, 1.0] },
            e2: SetShape::Sector { first: vec![0.0, 1.0], second: vec![-1.0, 0.0] },
            k1: identity_on(2, cone(2, &[&[1.0, 0.0], &[0.0, 1.0]])?, false)?,
            k2: identity_on(2, cone(2, &[&[0.0, 1.0], &[-1.0, 0.0]])?, false)?,
            generator: None,
        },
        SeparationFixture {
            name: "opposite_quadrants",
            z: z2.clone(),
            e1: SetShape::Sector { first: vec![1.0, 0.0], second: vec![0.0, 1.0] },
            e2: SetShape::Sector { first: vec![-1.0, 0.0], second: vec![0.0, -1.0] },
            k1: identity_on(2, cone(2, &[&[1.0, 0.0], &[0.0, 1.0]])?, false)?,
            k2: identity_on(2, cone(2, &[&[-1.0, 0.0], &[0.0, -1.0]])?, false)?,
            generator: None,
        },
        SeparationFixture {
            name: "abs_epigraph_vs_vertical_axis",
            z: z2.clone(),
            e1: SetShape::Sector { first: vec![1.0, 1.0], second: vec![-1.0, 1.0] },
            e2: SetShape::line(&[0.0, 1.0]),
            k1: identity_on(2, cone(2, &[&[1.0, 1.0], &[-1.0, 1.0]])?, false)?,
            k2: identity_on(2, line_gamma(&[0.0, 1.0])?, false)?,
            generator: None,
        },
        SeparationFixture {
            name: "parabola_vs_tangent_axis",
            z: z2.clone(),
            e1: SetShape::Parabola { c: 1.0 },
            e2: SetShape::line(&[1.0, 0.0]),
            k1: build_multicone(&OperatorSet::singleton(LinearMap::column(&[1.0, 0.0])), &GammaSet::full(1), false)?,
            k2: identity_on(2, line_gamma(&[1.0, 0.0])?, false)?,
            generator: None,
        },
        SeparationFixture {
            // multi-cone of the graph of |t| from Λ = [(1,−1), (1,1)]
            name: "abs_graph_multicone_vs_half_plane",
            z: z2,
            e1: SetShape::Rays { directions: vec![vec![1.0, 1.0], vec![-1.0, 1.0]] },
            e2: SetShape::HalfSpace { normal: vec![0.0, 1.0], open: false },
            k1: build_multicone(
                &OperatorSet::hull_of_vectors(&[vec![1.0, -1.0], vec![1.0, 1.0]])?,
                &GammaSet::full(1),
                false,
            )?,
            k2: identity_on(2, upper, false)?,
            generator: Some((v_graph, GammaSet::full(1))),
        },
        SeparationFixture {
            name: "coordinate_planes",
            z: z3.clone(),
            e1: SetShape::Subspace { dimension: 3, basis: vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]] },
            e2: SetShape::Subspace { dimension: 3, basis: vec![vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]] },
            k1: identity_on(3, cone(3, &[&[1.0, 0.0, 0.0], &[-1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, -1.0, 0.0]])?, false)?,
            k2: identity_on(3, cone(3, &[&[0.0, 1.0, 0.0], &[0.0, -1.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 0.0, -1.0]])?, false)?,
            generator: None,
        },
        SeparationFixture {
            name: "half_space_vs_diagonal_ray",
            z: z3,
            e1: SetShape::HalfSpace { normal: vec![0.0, 0.0, 1.0], open: false },
            e2: SetShape::Rays { directions: vec![vec![1.0, 1.0, 1.0]] },
            k1: identity_on(
                3,
                cone(3, &[&[1.0, 0.0, 0.0], &[-1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, -1.0, 0.0], &[0.0, 0.0, 1.0]])?,
                false,
            )?,
            k2: identity_on(3, GammaSet::half_line(&[1.0, 1.0, 1.0])?, false)?,
            generator: None,
        },
    ])
}

pub fn run_fixture(fx: &SeparationFixture, radius: f64, samples: usize, seed: u64) -> Result<FixtureOutcome> {
    let verdict = separation_verdict(&fx.k1, &fx.k2)?;
    let probe = local_separation_probe(&fx.e1, &fx.e2, &fx.z, radius, samples, seed)?;
    let z_audit = match &fx.generator {
        Some((g, gamma)) if fx.k1.z_ignoring => Some(audit_z_ignoring(g, gamma, &fx.z, radius, 256, seed)?),
        _ => None,
    };
    let consistent = !(verdict.verdict == Verdict::NotLocallySeparated && probe.common_point.is_none());
    Ok(FixtureOutcome {
        name: fx.name.to_string(),
        verdict,
        probe,
        z_audit,
        consistent,
    })
}
