//! Parameter parsing and pass criteria for each scenario kind.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::catalog::{certificate_from_key, map_from_key, LambdaSpec};
use super::corpus::cone_pair_corpus;
use super::ScenarioKind;
use crate::cones::{classify_pair, common_point, is_transversal, separating_functional, PairClass, COMMON_POINT_TOL};
use crate::error::{Error, Result};
use crate::flows::{multiflow_commutator, FieldRef, FlowSolverConfig, VectorField};
use crate::geometry::sampling::distance;
use crate::geometry::{dist_to_operator_set, hausdorff_distance, GammaSet, LinearMap, OperatorSet};
use crate::mapping::Mapping;
use crate::nonsmooth::{bracket_flow_direction, clarke_jacobian_estimate, lie_bracket_pointwise, set_lie_bracket_estimate};
use crate::qdq::{verify_certificate, QdqCertificate, Target, VerifyConfig};
use crate::separation::{curated_fixtures, open_mapping_probe, run_fixture, ProbeConfig, SeparationFixture, Verdict};

pub(crate) struct Outcome {
    pub passed: bool,
    pub metric_name: &'static str,
    pub metric_value: f64,
    pub details: Value,
}

struct Tolerances(BTreeMap<&'static str, f64>);

impl Tolerances {
    fn new(overrides: &BTreeMap<String, f64>, defaults: &[(&'static str, f64)]) -> Result<Self> {
        let mut t: BTreeMap<&'static str, f64> = defaults.iter().copied().collect();
        for (k, v) in overrides {
            match defaults.iter().find(|(d, _)| d == k) {
                Some((d, _)) if v.is_finite() => {
                    t.insert(d, *v);
                }
                Some(_) => return Err(Error::Config(format!("tolerance `{k}` must be finite"))),
                None => return Err(Error::Config(format!("unknown tolerance `{k}`"))),
            }
        }
        Ok(Tolerances(t))
    }

    fn get(&self, k: &str) -> f64 {
        self.0[k]
    }

    fn to_json(&self) -> Value {
        json!(self.0)
    }
}

fn parse<T: DeserializeOwned>(params: &Value) -> Result<T> {
    let v = if params.is_null() { json!({}) } else { params.clone() };
    serde_json::from_value(v).map_err(|e| Error::Config(e.to_string()))
}

pub(crate) enum Prepared {
    Certificate(CertificateRun),
    ConeDuality(ConeDualityRun),
    Clarke(ClarkeRun),
    Commutator(CommutatorRun),
    SetBracket(SetBracketRun),
    Probe(ProbeRun),
    Fixtures(FixturesRun),
    #[cfg(test)]
    Panic,
}

pub(crate) fn prepare(
    kind: ScenarioKind,
    params: &Value,
    tolerances: &BTreeMap<String, f64>,
    seed: u64,
) -> Result<Prepared> {
    Ok(match kind {
        ScenarioKind::CertificateVerify => Prepared::Certificate(CertificateRun::new(parse(params)?, tolerances, seed)?),
        ScenarioKind::ConeDuality => Prepared::ConeDuality(ConeDualityRun::new(parse(params)?, tolerances, seed)?),
        ScenarioKind::ClarkeEstimate => Prepared::Clarke(ClarkeRun::new(parse(params)?, tolerances, seed)?),
        ScenarioKind::BracketConvergence => match parse::<BracketParams>(params)? {
            BracketParams::SmoothCommutator(p) => Prepared::Commutator(CommutatorRun::new(p, tolerances)?),
            BracketParams::SetBracket(p) => Prepared::SetBracket(SetBracketRun::new(p, tolerances, seed)?),
        },
        ScenarioKind::OpenMappingProbe => Prepared::Probe(ProbeRun::new(parse(params)?, tolerances, seed)?),
        ScenarioKind::SeparationFixture => Prepared::Fixtures(FixturesRun::new(parse(params)?, tolerances, seed)?),
    })
}

impl Prepared {
    pub(crate) fn run(&self) -> Result<Outcome> {
        match self {
            Prepared::Certificate(r) => r.run(),
            Prepared::ConeDuality(r) => r.run(),
            Prepared::Clarke(r) => r.run(),
            Prepared::Commutator(r) => r.run(),
            Prepared::SetBracket(r) => r.run(),
            Prepared::Probe(r) => r.run(),
            Prepared::Fixtures(r) => r.run(),
            #[cfg(test)]
            Prepared::Panic => panic!("scenario blew up"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Expect {
    #[default]
    Accept,
    Reject,
}

#[derive(Clone, Debug, Deserialize)]
struct ViolationPoint {
    delta: f64,
    x: Vec<f64>,
}

fn default_grid() -> Vec<f64> {
    vec![1e-1, 1e-2, 1e-3]
}

fn default_points() -> usize {
    200
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateParams {
    certificate: String,
    #[serde(default)]
    lambda: Option<LambdaSpec>,
    #[serde(default = "default_grid")]
    delta_grid: Vec<f64>,
    #[serde(default = "default_points")]
    points_per_delta: usize,
    #[serde(default)]
    expect: Expect,
    /// Points that must show up among the reported violations.
    #[serde(default)]
    violations_at: Vec<ViolationPoint>,
}

pub(crate) struct CertificateRun {
    params: CertificateParams,
    target: Target,
    cert: QdqCertificate,
    cfg: VerifyConfig,
    tol: Tolerances,
}

impl CertificateRun {
    fn new(params: CertificateParams, tolerances: &BTreeMap<String, f64>, seed: u64) -> Result<Self> {
        let tol = Tolerances::new(tolerances, &[("slack", 1e-9), ("point_match", 1e-12)])?;
        let (target, mut cert) = certificate_from_key(&params.certificate)?;
        if let Some(l) = &params.lambda {
            cert = cert.with_lambda(l.resolve()?)?;
        }
        let mut cfg = VerifyConfig::new(params.delta_grid.clone(), params.points_per_delta, seed);
        cfg.tol = tol.get("slack");
        Ok(CertificateRun {
            params,
            target,
            cert,
            cfg,
            tol,
        })
    }

    fn run(&self) -> Result<Outcome> {
        let r = verify_certificate(&self.target, &self.cert, &self.cfg)?;
        let close = self.tol.get("point_match");
        let missing: Vec<&ViolationPoint> = self
            .params
            .violations_at
            .iter()
            .filter(|p| {
                !r.worst_violations.iter().any(|v| {
                    (v.delta - p.delta).abs() <= close * p.delta.abs().max(1.0) && distance(&v.x, &p.x) <= close
                })
            })
            .collect();
        let expected = match self.params.expect {
            Expect::Accept => r.accepted,
            Expect::Reject => !r.accepted,
        };
        Ok(Outcome {
            passed: expected && missing.is_empty(),
            metric_name: "violations",
            metric_value: r.total_violations as f64,
            details: json!({
                "certificate": self.params.certificate,
                "record": self.cert.record(),
                "expect": format!("{:?}", self.params.expect).to_lowercase(),
                "tolerances": self.tol.to_json(),
                "missing_violation_points": missing.iter().map(|p| json!({"delta": p.delta, "x": p.x})).collect::<Vec<_>>(),
                "report": r,
            }),
        })
    }
}

fn default_pairs() -> usize {
    1000
}

fn default_logged() -> usize {
    20
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConeDualityParams {
    #[serde(default = "default_pairs")]
    pairs: usize,
    #[serde(default = "default_logged")]
    max_logged: usize,
}

pub(crate) struct ConeDualityRun {
    params: ConeDualityParams,
    seed: u64,
    tol: Tolerances,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairCheck {
    pub index: usize,
    pub transversal: Option<bool>,
    pub separated: Option<bool>,
    pub certificate_valid: bool,
    pub class: Option<PairClass>,
    pub duality_ok: bool,
    pub trichotomy_ok: bool,
    pub error: Option<String>,
}

fn rank(n: usize, gens: &[Vec<f64>]) -> usize {
    if gens.is_empty() {
        return 0;
    }
    DMatrix::from_fn(n, gens.len(), |i, j| gens[j][i]).rank(1e-9)
}

/// Duality and trichotomy checks on one pair of cones.
pub fn check_cone_pair(pair: &super::corpus::ConePair, certificate_tol: f64) -> PairCheck {
    let mut out = PairCheck {
        index: pair.index,
        transversal: None,
        separated: None,
        certificate_valid: false,
        class: None,
        duality_ok: false,
        trichotomy_ok: false,
        error: None,
    };
    let run = |out: &mut PairCheck| -> Result<()> {
        let (k1, k2) = pair.cones()?;
        let t = is_transversal(&k1, &k2)?;
        let sep = separating_functional(&k1, &k2)?;
        out.transversal = Some(t);
        out.separated = Some(sep.is_some());
        out.certificate_valid = sep.as_ref().map_or(true, |c| c.validate(&k1, &k2, certificate_tol));
        out.duality_ok = t != sep.is_some() && out.certificate_valid;
        let c = classify_pair(&k1, &k2)?;
        out.class = Some(c.class);
        let n = pair.dimension;
        out.trichotomy_ok = c.class.is_transversal() == t
            && match c.class {
                PairClass::ComplementarySubspaces => {
                    let mut all = k1.generators().to_vec();
                    all.extend_from_slice(k2.generators());
                    k1.is_subspace()
                        && k2.is_subspace()
                        && common_point(&k1, &k2)?.is_none()
                        && rank(n, &all) == n
                }
                PairClass::StronglyTransversal => c.common_point.as_ref().is_some_and(|p| {
                    k1.contains(p, COMMON_POINT_TOL) && k2.contains(p, COMMON_POINT_TOL)
                }),
                PairClass::LinearlySeparable => c.certificate.is_some(),
            };
        Ok(())
    };
    if let Err(e) = run(&mut out) {
        out.error = Some(e.to_string());
        out.duality_ok = false;
        out.trichotomy_ok = false;
    }
    out
}

impl ConeDualityRun {
    fn new(params: ConeDualityParams, tolerances: &BTreeMap<String, f64>, seed: u64) -> Result<Self> {
        let tol = Tolerances::new(
            tolerances,
            &[("min_agreement", 0.999), ("min_trichotomy", 1.0), ("certificate", 1e-7)],
        )?;
        if params.pairs == 0 {
            return Err(Error::Config("ConeDuality needs at least one pair".into()));
        }
        Ok(ConeDualityRun { params, seed, tol })
    }

    fn run(&self) -> Result<Outcome> {
        let corpus = cone_pair_corpus(self.params.pairs, self.seed);
        let ctol = self.tol.get("certificate");
        let checks: Vec<PairCheck> = corpus.par_iter().map(|p| check_cone_pair(p, ctol)).collect();
        let total = checks.len() as f64;
        let duality = checks.iter().filter(|c| c.duality_ok).count() as f64 / total;
        let trichotomy = checks.iter().filter(|c| c.trichotomy_ok).count() as f64 / total;
        let mut classes: BTreeMap<String, usize> = BTreeMap::new();
        for c in &checks {
            let key = c.class.map_or("error".to_string(), |k| format!("{k:?}"));
            *classes.entry(key).or_default() += 1;
        }
        let failures: Vec<Value> = checks
            .iter()
            .filter(|c| !(c.duality_ok && c.trichotomy_ok))
            .take(self.params.max_logged)
            .map(|c| json!({"check": c, "pair": corpus[c.index]}))
            .collect();
        Ok(Outcome {
            passed: duality >= self.tol.get("min_agreement") && trichotomy >= self.tol.get("min_trichotomy"),
            metric_name: "xor_agreement",
            metric_value: duality,
            details: json!({
                "pairs": checks.len(),
                "xor_agreement": duality,
                "trichotomy_agreement": trichotomy,
                "classes": classes,
                "failures": failures,
                "tolerances": self.tol.to_json(),
            }),
        })
    }
}

fn default_radius() -> f64 {
    1e-3
}

fn default_samples() -> usize {
    10_000
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClarkeParams {
    map: String,
    x_bar: Vec<f64>,
    #[serde(default = "default_radius")]
    radius: f64,
    #[serde(default = "default_samples")]
    samples: usize,
    expected: LambdaSpec,
}

pub(crate) struct ClarkeRun {
    params: ClarkeParams,
    map: Mapping,
    expected: OperatorSet,
    seed: u64,
    tol: Tolerances,
}

fn check_point(map: &Mapping, x: &[f64]) -> Result<()> {
    if x.len() != map.input_dim() {
        return Err(Error::Config(format!(
            "map `{}` takes {} inputs, got a point with {}",
            map.label(),
            map.input_dim(),
            x.len()
        )));
    }
    Ok(())
}

impl ClarkeRun {
    fn new(params: ClarkeParams, tolerances: &BTreeMap<String, f64>, seed: u64) -> Result<Self> {
        let tol = Tolerances::new(tolerances, &[("hausdorff", 1e-2)])?;
        let map = map_from_key(&params.map)?;
        check_point(&map, &params.x_bar)?;
        let expected = params.expected.resolve()?;
        if expected.shape() != (map.output_dim(), map.input_dim()) {
            return Err(Error::Config(format!("expected set has shape {:?}", expected.shape())));
        }
        Ok(ClarkeRun {
            params,
            map,
            expected,
            seed,
            tol,
        })
    }

    fn run(&self) -> Result<Outcome> {
        let p = &self.params;
        let r = clarke_jacobian_estimate(&self.map, &p.x_bar, p.radius, p.samples, self.seed)?;
        let d = hausdorff_distance(&r.set, &self.expected)?;
        Ok(Outcome {
            passed: d <= self.tol.get("hausdorff"),
            metric_name: "hausdorff",
            metric_value: d,
            details: json!({
                "map": p.map,
                "x_bar": p.x_bar,
                "expected": self.expected,
                "estimate": r,
                "tolerances": self.tol.to_json(),
            }),
        })
    }
}

fn default_ts() -> Vec<f64> {
    vec![1e-1, 5e-2, 2.5e-2]
}

fn default_eps() -> f64 {
    1e-4
}

fn default_bracket_samples() -> usize {
    2000
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
enum BracketParams {
    SmoothCommutator(CommutatorParams),
    SetBracket(SetBracketParams),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CommutatorParams {
    f: FieldRef,
    g: FieldRef,
    q: Vec<f64>,
    #[serde(default = "default_ts")]
    ts: Vec<f64>,
}

pub(crate) struct CommutatorRun {
    params: CommutatorParams,
    f: VectorField,
    g: VectorField,
    tol: Tolerances,
}

fn check_fields(f: &VectorField, g: &VectorField, q: &[f64]) -> Result<()> {
    if f.dimension() != g.dimension() || q.len() != f.dimension() {
        return Err(Error::Config(format!(
            "fields of dimension {} and {} at a point of dimension {}",
            f.dimension(),
            g.dimension(),
            q.len()
        )));
    }
    Ok(())
}

impl CommutatorRun {
    fn new(params: CommutatorParams, tolerances: &BTreeMap<String, f64>) -> Result<Self> {
        let tol = Tolerances::new(tolerances, &[("ratio_min", 1.6), ("ratio_max", 2.4), ("bracket_fd_step", 1e-6)])?;
        let (f, g) = (params.f.resolve()?, params.g.resolve()?);
        check_fields(&f, &g, &params.q)?;
        if params.ts.len() < 2 || params.ts.iter().any(|t| !(*t > 0.0)) {
            return Err(Error::Config("ts needs at least two positive times".into()));
        }
        Ok(CommutatorRun { params, f, g, tol })
    }

    fn run(&self) -> Result<Outcome> {
        let q = &self.params.q;
        let b = lie_bracket_pointwise(&self.f, &self.g, q, self.tol.get("bracket_fd_step"))?;
        let errors = self
            .params
            .ts
            .iter()
            .map(|&t| {
                let p = multiflow_commutator(&self.f, &self.g, q, t, &FlowSolverConfig::for_horizon(t))?;
                let d: Vec<f64> = p.iter().zip(q).map(|(a, b)| (a - b) / (t * t)).collect();
                Ok(distance(&d, &b))
            })
            .collect::<Result<Vec<f64>>>()?;
        let ratios: Vec<f64> = errors.windows(2).map(|w| w[0] / w[1]).collect();
        let (lo, hi) = (self.tol.get("ratio_min"), self.tol.get("ratio_max"));
        let passed = ratios.iter().all(|r| (lo..=hi).contains(r));
        let worst = ratios
            .iter()
            .copied()
            .fold(f64::NAN, |w, r| if w.is_nan() || (r - 2.0).abs() > (w - 2.0).abs() { r } else { w });
        Ok(Outcome {
            passed,
            metric_name: "richardson_ratio",
            metric_value: worst,
            details: json!({
                "mode": "smooth_commutator",
                "fields": [self.f.label(), self.g.label()],
                "q": q,
                "bracket": b,
                "ts": self.params.ts,
                "errors": errors,
                "ratios": ratios,
                "tolerances": self.tol.to_json(),
            }),
        })
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SetBracketParams {
    f: FieldRef,
    g: FieldRef,
    q: Vec<f64>,
    #[serde(default = "default_eps")]
    eps: f64,
    #[serde(default = "default_radius")]
    radius: f64,
    #[serde(default = "default_bracket_samples")]
    samples: usize,
    #[serde(default)]
    expected: Option<LambdaSpec>,
    #[serde(default)]
    expected_direction: Option<Vec<f64>>,
}

pub(crate) struct SetBracketRun {
    params: SetBracketParams,
    f: VectorField,
    g: VectorField,
    expected: Option<OperatorSet>,
    seed: u64,
    tol: Tolerances,
}

impl SetBracketRun {
    fn new(params: SetBracketParams, tolerances: &BTreeMap<String, f64>, seed: u64) -> Result<Self> {
        let tol = Tolerances::new(tolerances, &[("distance", 5e-2), ("hausdorff", 1e-2), ("direction", 1e-3)])?;
        let (f, g) = (params.f.resolve()?, params.g.resolve()?);
        check_fields(&f, &g, &params.q)?;
        if !(params.eps > 0.0) {
            return Err(Error::Config("eps must be positive".into()));
        }
        let expected = params.expected.as_ref().map(LambdaSpec::resolve).transpose()?;
        Ok(SetBracketRun {
            params,
            f,
            g,
            expected,
            seed,
            tol,
        })
    }

    fn run(&self) -> Result<Outcome> {
        let p = &self.params;
        let cfg = FlowSolverConfig::for_horizon(p.eps.sqrt());
        let d = bracket_flow_direction(&self.f, &self.g, &p.q, p.eps, &cfg)?;
        let est = set_lie_bracket_estimate(&self.f, &self.g, &p.q, p.radius, p.samples, self.seed)?;
        let dist = dist_to_operator_set(&LinearMap::column(&d), &est.set)?;
        let direction_error = p.expected_direction.as_ref().map(|e| distance(&d, e));
        let hausdorff = self.expected.as_ref().map(|e| hausdorff_distance(&est.set, e)).transpose()?;
        let passed = dist <= self.tol.get("distance")
            && direction_error.is_none_or(|e| e <= self.tol.get("direction"))
            && hausdorff.is_none_or(|h| h <= self.tol.get("hausdorff"));
        Ok(Outcome {
            passed,
            metric_name: "distance_to_estimate",
            metric_value: dist,
            details: json!({
                "mode": "set_bracket",
                "fields": [self.f.label(), self.g.label()],
                "q": p.q,
                "eps": p.eps,
                "direction": d,
                "direction_error": direction_error,
                "estimate": est,
                "hausdorff_to_expected": hausdorff,
                "tolerances": self.tol.to_json(),
            }),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
enum ProbeExpect {
    #[default]
    Pass,
    PreconditionError,
}

fn default_a() -> f64 {
    0.1
}

fn default_beta() -> f64 {
    2.0
}

fn default_target_grid() -> usize {
    21
}

fn default_domain_samples() -> usize {
    4000
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProbeParams {
    map: String,
    x_bar: Vec<f64>,
    #[serde(default)]
    y_bar: Option<Vec<f64>>,
    #[serde(default)]
    gamma: Option<GammaSet>,
    lambda: LambdaSpec,
    /// Extra generators appended to Λ, by rows.
    #[serde(default)]
    extra_generators: Vec<Vec<Vec<f64>>>,
    #[serde(default = "default_a")]
    a: f64,
    #[serde(default = "default_beta")]
    beta: f64,
    #[serde(default = "default_target_grid")]
    target_grid: usize,
    #[serde(default = "default_domain_samples")]
    domain_samples: usize,
    #[serde(default)]
    expect: ProbeExpect,
}

pub(crate) struct ProbeRun {
    params: ProbeParams,
    map: Mapping,
    y_bar: Vec<f64>,
    gamma: GammaSet,
    lambda: OperatorSet,
    cfg: ProbeConfig,
    tol: Tolerances,
}

impl ProbeRun {
    fn new(params: ProbeParams, tolerances: &BTreeMap<String, f64>, seed: u64) -> Result<Self> {
        let tol = Tolerances::new(tolerances, &[("min_covered_fraction", 1.0)])?;
        let map = map_from_key(&params.map)?;
        check_point(&map, &params.x_bar)?;
        let y_bar = match &params.y_bar {
            Some(y) => y.clone(),
            None => map.eval(&params.x_bar)?,
        };
        let gamma = params.gamma.clone().unwrap_or_else(|| GammaSet::full(params.x_bar.len()));
        let mut lambda = params.lambda.resolve()?;
        for g in &params.extra_generators {
            lambda = lambda.with_generator(LinearMap::from_rows(g)?)?;
        }
        let cfg = ProbeConfig::new(params.a, params.beta, params.target_grid, params.domain_samples, seed);
        Ok(ProbeRun {
            params,
            map,
            y_bar,
            gamma,
            lambda,
            cfg,
            tol,
        })
    }

    fn run(&self) -> Result<Outcome> {
        let p = &self.params;
        let r = open_mapping_probe(&self.map, &p.x_bar, &self.y_bar, &self.gamma, &self.lambda, &self.cfg);
        let base = json!({
            "map": p.map,
            "x_bar": p.x_bar,
            "y_bar": self.y_bar,
            "gamma": self.gamma,
            "lambda": self.lambda,
            "expect": format!("{:?}", p.expect),
            "tolerances": self.tol.to_json(),
        });
        let with = |mut v: Value, key: &str, x: Value| {
            v[key] = x;
            v
        };
        Ok(match (p.expect, r) {
            (ProbeExpect::Pass, Ok(r)) => Outcome {
                passed: r.passed && r.center_covered && r.covered_fraction >= self.tol.get("min_covered_fraction"),
                metric_name: "covered_fraction",
                metric_value: r.covered_fraction,
                details: with(base, "report", json!(r)),
            },
            (ProbeExpect::PreconditionError, Err(Error::Precondition(msg))) => Outcome {
                passed: true,
                metric_name: "precondition_error",
                metric_value: 1.0,
                details: with(base, "error", json!(msg)),
            },
            (ProbeExpect::PreconditionError, Ok(r)) => Outcome {
                passed: false,
                metric_name: "precondition_error",
                metric_value: 0.0,
                details: with(base, "report", json!(r)),
            },
            (_, Err(e)) => return Err(e),
        })
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum FixtureSelection {
    All(AllKeyword),
    Names(Vec<String>),
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
enum AllKeyword {
    All,
}

fn default_selection() -> FixtureSelection {
    FixtureSelection::All(AllKeyword::All)
}

fn default_fixture_radius() -> f64 {
    1.0
}

fn default_fixture_samples() -> usize {
    400
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FixtureParams {
    #[serde(default = "default_selection")]
    fixtures: FixtureSelection,
    #[serde(default = "default_fixture_radius")]
    radius: f64,
    #[serde(default = "default_fixture_samples")]
    samples: usize,
    #[serde(default)]
    min_fired: usize,
}

pub(crate) struct FixturesRun {
    params: FixtureParams,
    fixtures: Vec<SeparationFixture>,
    seed: u64,
}

impl FixturesRun {
    fn new(params: FixtureParams, tolerances: &BTreeMap<String, f64>, seed: u64) -> Result<Self> {
        Tolerances::new(tolerances, &[])?;
        let all = curated_fixtures()?;
        let fixtures = match &params.fixtures {
            FixtureSelection::All(_) => all,
            FixtureSelection::Names(names) => names
                .iter()
                .map(|n| {
                    all.iter()
                        .find(|f| &f.name == n)
                        .cloned()
                        .ok_or_else(|| Error::UnknownCatalogKey(n.clone()))
                })
                .collect::<Result<Vec<_>>>()?,
        };
        Ok(FixturesRun { params, fixtures, seed })
    }

    fn run(&self) -> Result<Outcome> {
        let p = &self.params;
        let outcomes = self
            .fixtures
            .par_iter()
            .map(|fx| run_fixture(fx, p.radius, p.samples, self.seed))
            .collect::<Result<Vec<_>>>()?;
        let fired = outcomes.iter().filter(|o| o.verdict.verdict == Verdict::NotLocallySeparated).count();
        let consistent = outcomes.iter().all(|o| o.consistent);
        let rows: Vec<Value> = outcomes
            .iter()
            .map(|o| {
                json!({
                    "name": o.name,
                    "verdict": o.verdict.verdict,
                    "rule": o.verdict.rule,
                    "pair_classes": o.verdict.pair_classes,
                    "common_point": o.probe.common_point,
                    "separated_at_resolution": o.probe.separated_at_resolution,
                    "z_audit": o.z_audit,
                    "consistent": o.consistent,
                })
            })
            .collect();
        Ok(Outcome {
            passed: consistent && fired >= p.min_fired,
            metric_name: "verdicts_fired",
            metric_value: fired as f64,
            details: json!({"radius": p.radius, "samples": p.samples, "fixtures": rows}),
        })
    }
}
