//! JSON job documents: schema, dispatch and the result document.
//!
//! Every rational is written as a `"num/den"` string. Inputs may also give
//! small integers as JSON numbers. Polynomials are either strings in the
//! syntax of [`parse_poly`] or lists of `{monomial, coefficient}` terms.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::amoeba::{amoeba_sample, log_limit_directions, AmoebaCloud, Fibration, LimitDirections};
use crate::dynamics::{
    check_angle_bound, compose_gsh_check, gsh, lambda_of_push_estimate, lifts_identity, norm, sigma_of_push,
    AngleReport, ComposeReport, LambdaEstimate, PushMap, PushNorm,
};
use crate::error::Error;
use crate::hyperbolic::{
    sample_elements, verify_infinity_obstruction_a, verify_push_b, verify_support_at_zero_a, verify_zero_obstruction,
    HModule, InfinityReport, PushReport, SupportReport, Verdict, ZeroObstructionReport,
};
use crate::linalg::QMatrix;
use crate::polyhedra::{Fan, Polyhedron, SphericalSet};
use crate::rational::{parse_rational, ExtRational, Rational};
use crate::ring::{parse_poly, Character, CoefficientDomain, Direction, LaurentPoly};
use crate::sigma::{
    sigma, sigma_direct_sum, sigma_scalar_action_with, ComplementWitness, Decision, FpmOutcome, ModuleMode,
    ModulePresentation, SearchBounds, SigmaCertificate, SigmaResult,
};
use crate::tropical::{trop_hypersurface, trop_prevariety};
use crate::valuation::ValuationSpec;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Trop,
    Sigma,
    Group,
    Dyn,
    H2,
    Amoeba,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobDocument {
    pub version: u32,
    pub command: Command,
    pub payload: serde_json::Value,
}

/// Why a job did not produce a result. `Schema` covers everything wrong
/// with the document itself.
#[derive(Debug, Clone, PartialEq)]
pub enum JobError {
    Schema(String),
    Compute(Error),
}

impl JobError {
    pub fn exit_code(&self) -> i32 {
        match self {
            JobError::Schema(_) => 3,
            JobError::Compute(_) => 1,
        }
    }

    /// Machine-readable form printed by the command line tool.
    pub fn to_json(&self) -> serde_json::Value {
        let (kind, message) = match self {
            JobError::Schema(m) => ("schema", m.clone()),
            JobError::Compute(e) => ("compute", e.to_string()),
        };
        serde_json::json!({ "error": { "kind": kind, "message": message } })
    }
}

impl fmt::Display for JobError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JobError::Schema(m) => write!(f, "schema violation: {m}"),
            JobError::Compute(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for JobError {}

impl From<Error> for JobError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => JobError::Schema(m),
            e => JobError::Compute(e),
        }
    }
}

impl From<serde_json::Error> for JobError {
    fn from(e: serde_json::Error) -> Self {
        JobError::Schema(e.to_string())
    }
}

type JobResult<T> = std::result::Result<T, JobError>;

/// A rational given as a JSON integer or a `"num/den"` string.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum QValue {
    Int(i64),
    Text(String),
}

impl QValue {
    fn value(&self) -> JobResult<Rational> {
        match self {
            QValue::Int(v) => Ok(Rational::from_integer((*v).into())),
            QValue::Text(s) => Ok(parse_rational(s)?),
        }
    }
}

fn values(v: &[QValue]) -> JobResult<Vec<Rational>> {
    v.iter().map(QValue::value).collect()
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermSpec {
    monomial: Vec<i64>,
    coefficient: QValue,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum PolySpec {
    Text(String),
    Terms(Vec<TermSpec>),
}

impl PolySpec {
    fn natural_rank(&self) -> JobResult<usize> {
        match self {
            PolySpec::Text(s) => Ok(parse_poly(s, None, CoefficientDomain::RationalField)?.rank()),
            PolySpec::Terms(t) => Ok(t.first().map_or(1, |t| t.monomial.len())),
        }
    }

    fn build(&self, rank: usize, domain: &CoefficientDomain) -> JobResult<LaurentPoly> {
        match self {
            PolySpec::Text(s) => Ok(parse_poly(s, Some(rank), domain.clone())?),
            PolySpec::Terms(terms) => {
                let mut out = Vec::with_capacity(terms.len());
                for t in terms {
                    if t.monomial.len() != rank {
                        return Err(JobError::Schema(format!("monomial {:?} is not of rank {rank}", t.monomial)));
                    }
                    out.push((t.monomial.clone(), t.coefficient.value()?));
                }
                Ok(LaurentPoly::from_terms(rank, domain.clone(), out)?)
            }
        }
    }
}

fn build_polys(
    specs: &[PolySpec],
    rank: Option<usize>,
    domain: &CoefficientDomain,
) -> JobResult<(usize, Vec<LaurentPoly>)> {
    let rank = match rank {
        Some(r) => r,
        None => specs.iter().map(PolySpec::natural_rank).try_fold(1, |a, r| r.map(|r| a.max(r)))?,
    };
    let polys = specs.iter().map(|s| s.build(rank, domain)).collect::<JobResult<_>>()?;
    Ok((rank, polys))
}

fn default_domain() -> CoefficientDomain {
    CoefficientDomain::RationalField
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct TropPayload {
    generators: Vec<PolySpec>,
    #[serde(default)]
    rank: Option<usize>,
    #[serde(default = "default_domain")]
    domain: CoefficientDomain,
    #[serde(default = "trivial")]
    valuation: ValuationSpec,
}

fn trivial() -> ValuationSpec {
    ValuationSpec::Trivial
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum ModuleSpec {
    Cyclic {
        #[serde(default)]
        rank: Option<usize>,
        #[serde(default = "default_domain")]
        domain: CoefficientDomain,
        generators: Vec<PolySpec>,
    },
    Scalar {
        rhos: Vec<QValue>,
    },
    Matrix {
        mats: Vec<Vec<Vec<QValue>>>,
        generators: Vec<Vec<QValue>>,
    },
    DirectSum {
        parts: Vec<ModuleSpec>,
    },
}

impl ModuleSpec {
    fn build(&self) -> JobResult<Vec<ModulePresentation>> {
        Ok(match self {
            ModuleSpec::Cyclic { rank, domain, generators } => {
                let (rank, gens) = build_polys(generators, *rank, domain)?;
                vec![ModulePresentation::cyclic(rank, domain.clone(), gens)?]
            }
            ModuleSpec::Scalar { rhos } => vec![ModulePresentation::scalar(values(rhos)?)?],
            ModuleSpec::Matrix { mats, generators } => {
                let mats = mats
                    .iter()
                    .map(|m| {
                        let rows = m.iter().map(|r| values(r)).collect::<JobResult<Vec<_>>>()?;
                        Ok(QMatrix::from_rows(rows)?)
                    })
                    .collect::<JobResult<Vec<_>>>()?;
                let gens = generators.iter().map(|g| values(g)).collect::<JobResult<_>>()?;
                vec![ModulePresentation::matrix(mats, gens)?]
            }
            ModuleSpec::DirectSum { parts } => {
                let mut out = Vec::new();
                for p in parts {
                    out.extend(p.build()?);
                }
                if out.is_empty() {
                    return Err(JobError::Schema("direct sum without summands".into()));
                }
                out
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundsSpec {
    #[serde(default)]
    max_box: Option<u32>,
    #[serde(default)]
    coeff_bound: Option<QValue>,
    #[serde(default)]
    max_certificates: Option<usize>,
}

impl BoundsSpec {
    fn build(spec: &Option<BoundsSpec>) -> JobResult<SearchBounds> {
        let mut b = SearchBounds::default();
        if let Some(s) = spec {
            if let Some(k) = s.max_box {
                b.max_box = k;
            }
            if let Some(c) = &s.coeff_bound {
                let c = c.value()?;
                if !c.is_integer() {
                    return Err(JobError::Schema("coeff_bound must be an integer".into()));
                }
                b.coeff_bound = c.to_integer();
            }
            if let Some(m) = s.max_certificates {
                b.max_certificates = m;
            }
        }
        Ok(b)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct SigmaPayload {
    module: ModuleSpec,
    #[serde(default)]
    bounds: Option<BoundsSpec>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupPayload {
    module: ModuleSpec,
    #[serde(default)]
    bounds: Option<BoundsSpec>,
    /// Also run the FPₘ hemisphere test for this m.
    #[serde(default)]
    m: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct EstimateSpec {
    start: Vec<PolySpec>,
    iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct DynPayload {
    push: Vec<Vec<PolySpec>>,
    chi: Vec<QValue>,
    #[serde(default)]
    rank: Option<usize>,
    #[serde(default)]
    compose_with: Option<Vec<Vec<PolySpec>>>,
    #[serde(default)]
    estimate: Option<EstimateSpec>,
    /// Module whose identity φ should lift.
    #[serde(default)]
    module: Option<ModuleSpec>,
}

fn build_push(rows: &[Vec<PolySpec>], rank: Option<usize>) -> JobResult<PushMap> {
    let flat: Vec<PolySpec> = rows.iter().flatten().cloned().collect();
    let (rank, polys) = build_polys(&flat, rank, &CoefficientDomain::IntegerRing)?;
    let mut it = polys.into_iter();
    let rows = rows.iter().map(|r| it.by_ref().take(r.len()).collect()).collect();
    let phi = PushMap::from_rows(rows)?;
    if phi.rank() != rank {
        return Err(JobError::Schema("push entries of different ranks".into()));
    }
    Ok(phi)
}

fn default_samples() -> usize {
    20
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case", deny_unknown_fields)]
enum H2Payload {
    SupportAtZeroA {
        p: u64,
        k: i64,
        j_max: i64,
    },
    InfinityObstructionA {
        p: u64,
        q: QValue,
        coeff_bound: i64,
        k_max: u32,
    },
    PushB {
        p: u64,
        #[serde(default = "default_samples")]
        samples: usize,
        #[serde(default)]
        seed: u64,
    },
    ZeroObstruction {
        module: HModule,
        p: u64,
        q: QValue,
        coeff_bound: i64,
        size_bound: usize,
        k_max: i64,
    },
}

fn default_angles() -> usize {
    64
}

fn default_bins() -> usize {
    72
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct AmoebaPayload {
    f: PolySpec,
    s_min: f64,
    s_max: f64,
    steps: usize,
    #[serde(default = "default_angles")]
    angles: usize,
    #[serde(default)]
    fibration: Fibration,
    #[serde(default)]
    min_radius: Option<f64>,
    #[serde(default = "default_bins")]
    angle_bins: usize,
}

/// A fan or a spherical set as H-representations of its pieces plus the
/// sorted primitive generators of their closures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConeSet {
    pub rank: usize,
    pub cones: Vec<Polyhedron>,
    /// Rays of the set, or of its cone at infinity when it is not conical.
    pub rays: Vec<Direction>,
    pub conical: bool,
}

impl ConeSet {
    pub fn from_fan(fan: &Fan) -> crate::error::Result<Self> {
        let conical = fan.is_conical();
        let rays = if conical { fan.rays()? } else { fan.local_cone_at_infinity().rays()? };
        Ok(ConeSet { rank: fan.rank(), cones: fan.pieces().to_vec(), rays, conical })
    }

    pub fn from_spherical(s: &SphericalSet) -> crate::error::Result<Self> {
        Ok(ConeSet { rank: s.rank(), cones: s.pieces().to_vec(), rays: s.rays()?, conical: true })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TropOutput {
    pub fan: ConeSet,
    /// Single-monomial input: the hypersurface is empty.
    pub unit: bool,
    pub pure_dimension: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub balanced_at_origin: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaOutput {
    pub rank: usize,
    pub proved_sigma: ConeSet,
    pub proved_complement: ConeSet,
    pub undecided: ConeSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complement_bound: Option<ConeSet>,
    pub certificates: Vec<SigmaCertificate>,
    pub complement_witnesses: Vec<ComplementWitness>,
    pub exact: bool,
    pub notes: Vec<String>,
}

impl SigmaOutput {
    pub fn new(r: &SigmaResult) -> crate::error::Result<Self> {
        Ok(SigmaOutput {
            rank: r.rank,
            proved_sigma: ConeSet::from_spherical(&r.proved_sigma)?,
            proved_complement: ConeSet::from_spherical(&r.proved_complement)?,
            undecided: ConeSet::from_spherical(&r.undecided)?,
            complement_bound: r.complement_bound.as_ref().map(ConeSet::from_spherical).transpose()?,
            certificates: r.certificates.clone(),
            complement_witnesses: r.complement_witnesses.clone(),
            exact: r.exact,
            notes: r.notes.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupOutput {
    pub finitely_presented: Decision,
    pub fp_infinity: Decision,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fp_m: Option<FpmOutcome>,
    pub sigma: SigmaOutput,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DynOutput {
    #[serde(with = "crate::rational::serde_q::vec")]
    pub chi: Vec<Rational>,
    pub norm: PushNorm,
    pub gsh: ExtRational,
    pub in_sigma: bool,
    pub sigma_of_push: ConeSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<LambdaEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angle: Option<AngleReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compose: Option<ComposeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lifts_identity: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum H2Output {
    SupportAtZeroA(SupportReport),
    InfinityObstructionA(InfinityReport),
    PushB(PushReport),
    ZeroObstruction(ZeroObstructionReport),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmoebaOutput {
    pub cloud: AmoebaCloud,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limits: Option<LimitDirections>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum JobOutput {
    Trop(TropOutput),
    Sigma(SigmaOutput),
    Group(GroupOutput),
    Dyn(DynOutput),
    H2(H2Output),
    Amoeba(AmoebaOutput),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    /// Some part of the answer could not be decided within the bounds.
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub schema: u32,
    /// Rays, cones and candidates are enumerated in lexicographic order and
    /// parallel work is merged by index, so output does not depend on the
    /// thread count.
    pub ordering: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_escalation: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultDocument {
    pub job: JobDocument,
    pub status: Status,
    pub result: JobOutput,
    pub provenance: Provenance,
}

impl ResultDocument {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => 0,
            Status::Undecided => 2,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("result documents serialize");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    /// Largest box size tried when certificate searches leave directions
    /// undecided.
    pub bound_escalation: Option<u32>,
}

pub fn parse_job(src: &str) -> JobResult<JobDocument> {
    let job: JobDocument = serde_json::from_str(src)?;
    if job.version != SCHEMA_VERSION {
        return Err(JobError::Schema(format!("unsupported version {}, expected {SCHEMA_VERSION}", job.version)));
    }
    Ok(job)
}

/// Parses and runs a job given as JSON text.
pub fn run_str(src: &str, opts: RunOptions) -> JobResult<ResultDocument> {
    run(&parse_job(src)?, opts)
}

fn payload<T: for<'de> Deserialize<'de>>(job: &JobDocument) -> JobResult<T> {
    Ok(T::deserialize(&job.payload)?)
}

fn sigma_of(spec: &ModuleSpec, bounds: &SearchBounds) -> crate::error::Result<SigmaResult> {
    let parts = spec.build().map_err(|e| match e {
        JobError::Schema(m) => Error::Parse(m),
        JobError::Compute(e) => e,
    })?;
    let one = |m: &ModulePresentation| match m.mode() {
        ModuleMode::Cyclic { .. } => sigma(m),
        _ => sigma_scalar_action_with(m, bounds),
    };
    let mut acc = one(&parts[0])?;
    for m in &parts[1..] {
        acc = sigma_direct_sum(&acc, &one(m)?)?;
    }
    Ok(acc)
}

fn escalated_sigma(spec: &ModuleSpec, bounds: &Option<BoundsSpec>, opts: RunOptions) -> JobResult<SigmaResult> {
    let mut b = BoundsSpec::build(bounds)?;
    let mut r = sigma_of(spec, &b)?;
    if let Some(max) = opts.bound_escalation {
        while !r.undecided.is_empty() && b.max_box < max {
            b.max_box += 1;
            r = sigma_of(spec, &b)?;
        }
    }
    Ok(r)
}

pub fn run(job: &JobDocument, opts: RunOptions) -> JobResult<ResultDocument> {
    if job.version != SCHEMA_VERSION {
        return Err(JobError::Schema(format!("unsupported version {}, expected {SCHEMA_VERSION}", job.version)));
    }
    let (result, status) = match job.command {
        Command::Trop => {
            let p: TropPayload = payload(job)?;
            if p.generators.is_empty() {
                return Err(JobError::Schema("trop needs at least one generator".into()));
            }
            let (rank, polys) = build_polys(&p.generators, p.rank, &p.domain)?;
            let (fan, unit) = if polys.len() == 1 {
                let h = trop_hypersurface(&polys[0], &p.valuation)?;
                (h.fan, h.unit)
            } else {
                (trop_prevariety(&polys, &p.valuation)?, false)
            };
            let balanced_at_origin = if fan.is_conical() && !fan.is_empty() {
                Some(fan.balanceable_at(&Character::new(vec![Rational::default(); rank]))?)
            } else {
                None
            };
            let out = TropOutput { pure_dimension: fan.pure_dimension(), fan: ConeSet::from_fan(&fan)?, unit, balanced_at_origin };
            (JobOutput::Trop(out), Status::Ok)
        }
        Command::Sigma => {
            let p: SigmaPayload = payload(job)?;
            let r = escalated_sigma(&p.module, &p.bounds, opts)?;
            let status = if r.exact { Status::Ok } else { Status::Undecided };
            (JobOutput::Sigma(SigmaOutput::new(&r)?), status)
        }
        Command::Group => {
            let p: GroupPayload = payload(job)?;
            let r = escalated_sigma(&p.module, &p.bounds, opts)?;
            let fp_m = p.m.map(|m| r.fp_m(m)).transpose()?;
            let out = GroupOutput {
                finitely_presented: r.finitely_presented(),
                fp_infinity: r.fp_infinity()?,
                fp_m,
                sigma: SigmaOutput::new(&r)?,
            };
            let undecided = out.finitely_presented == Decision::Undecided
                || out.fp_infinity == Decision::Undecided
                || out.fp_m.as_ref().is_some_and(|o| o.decision == Decision::Undecided);
            (JobOutput::Group(out), if undecided { Status::Undecided } else { Status::Ok })
        }
        Command::Dyn => {
            let p: DynPayload = payload(job)?;
            let phi = build_push(&p.push, p.rank)?;
            let chi = Character::new(values(&p.chi)?);
            let g = gsh(&phi, &chi)?;
            let fan = sigma_of_push(&phi)?;
            let estimate = match &p.estimate {
                Some(e) => {
                    let (_, start) = build_polys(&e.start, Some(phi.rank()), &CoefficientDomain::IntegerRing)?;
                    Some(lambda_of_push_estimate(&phi, &start, e.iterations)?)
                }
                None => None,
            };
            let angle = match &estimate {
                Some(e) if g.is_positive() => Some(check_angle_bound(&phi, &chi, &e.directions)?),
                _ => None,
            };
            let compose = match &p.compose_with {
                Some(rows) => Some(compose_gsh_check(&phi, &build_push(rows, Some(phi.rank()))?, &chi)?),
                None => None,
            };
            let lifts = match &p.module {
                Some(spec) => {
                    let parts = spec.build()?;
                    if parts.len() != 1 {
                        return Err(JobError::Schema("lifting is checked against a single module".into()));
                    }
                    Some(lifts_identity(&phi, &parts[0])?)
                }
                None => None,
            };
            let out = DynOutput {
                in_sigma: fan.contains_character(&chi)?,
                chi: chi.values().to_vec(),
                norm: norm(&phi),
                gsh: g,
                sigma_of_push: ConeSet::from_fan(&fan)?,
                estimate,
                angle,
                compose,
                lifts_identity: lifts,
            };
            (JobOutput::Dyn(out), Status::Ok)
        }
        Command::H2 => {
            let p: H2Payload = payload(job)?;
            let out = match p {
                H2Payload::SupportAtZeroA { p, k, j_max } => H2Output::SupportAtZeroA(verify_support_at_zero_a(p, k, j_max)?),
                H2Payload::InfinityObstructionA { p, q, coeff_bound, k_max } => {
                    H2Output::InfinityObstructionA(verify_infinity_obstruction_a(p, &q.value()?, coeff_bound, k_max)?)
                }
                H2Payload::PushB { p, samples, seed } => {
                    H2Output::PushB(verify_push_b(p, &sample_elements(p, samples, seed)?)?)
                }
                H2Payload::ZeroObstruction { module, p, q, coeff_bound, size_bound, k_max } => H2Output::ZeroObstruction(
                    verify_zero_obstruction(module, p, &q.value()?, coeff_bound, size_bound, k_max)?,
                ),
            };
            let status = match &out {
                H2Output::InfinityObstructionA(r) if r.symbolic == Verdict::Inconclusive => Status::Undecided,
                _ => Status::Ok,
            };
            (JobOutput::H2(out), status)
        }
        Command::Amoeba => {
            let p: AmoebaPayload = payload(job)?;
            if p.steps < 2 || p.s_max <= p.s_min {
                return Err(JobError::Schema("amoeba grid needs s_min < s_max and at least 2 steps".into()));
            }
            let f = p.f.build(2, &CoefficientDomain::RationalField)?;
            let grid: Vec<f64> =
                (0..p.steps).map(|i| p.s_min + (p.s_max - p.s_min) * i as f64 / (p.steps - 1) as f64).collect();
            let cloud = amoeba_sample(&f, &grid, p.angles, p.fibration)?;
            let limits = p.min_radius.map(|r| log_limit_directions(&cloud, r, p.angle_bins)).transpose()?;
            (JobOutput::Amoeba(AmoebaOutput { cloud, limits }), Status::Ok)
        }
    };
    Ok(ResultDocument {
        job: job.clone(),
        status,
        result,
        provenance: Provenance {
            tool: "sigmatrop",
            version: env!("CARGO_PKG_VERSION"),
            schema: SCHEMA_VERSION,
            ordering: "lexicographic, merged by index",
            bound_escalation: opts.bound_escalation,
        },
    })
}
