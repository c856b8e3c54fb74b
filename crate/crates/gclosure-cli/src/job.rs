use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use gclosure::algebra::{disc_of_basis, FreeAlgebra};
use gclosure::catalog::{
    an_closure_from_root, cubic_resolvent, d4_closure_from_root, discriminant_algebra,
    extract_factorization, factorization_closure, sqrt_disc_correspondence, FactorizationDatum,
};
use gclosure::closure::{
    canonical_sn_datum, closure_algebra_with_guard, enumerate_closure_data, is_faithful,
    verify_closure_datum, ClosureDatum, QuotientAlgebra, CLOSURE_DIM_GUARD,
};
use gclosure::error::Error;
use gclosure::ferrand::ferrand_table;
use gclosure::ring::{
    find_monic_roots, is_primoid, parse_elem, parse_monic_poly, parse_ring, MonicPoly,
    PrimoidVerdict, Ring,
};
use gclosure::serialize::{algebra_from_doc, datum_from_doc, datum_to_doc, AlgebraDoc, DatumDoc};
use gclosure::tensor::PermGroup;

use crate::report::Report;

/// One batch job: the same surface as the CLI flags, serializable so suites
/// round-trip.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct JobSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trivial: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from_root: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extract: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub datum: Option<DatumDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elem: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guard_n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Map<String, Value>>,
}

/// Exit code classification per the interface contract: 0 success, 2 parse,
/// 3 capability/guard, 4 internal consistency.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } => 2,
        Error::Internal(_) => 4,
        _ => 3,
    }
}

pub fn error_class(err: &Error) -> &'static str {
    match err {
        Error::Parse { .. } => "parse",
        Error::Internal(_) => "internal",
        Error::Guard { .. } => "guard",
        Error::Capability(_) => "capability",
        _ => "precondition",
    }
}

struct Inputs {
    ring: Ring,
    algebra: FreeAlgebra,
    poly: Option<MonicPoly>,
}

fn resolve_ring(job: &JobSpec) -> Result<Ring, Error> {
    let ring_s = job
        .ring
        .as_ref()
        .ok_or_else(|| Error::parse(0, "missing --ring"))?;
    parse_ring(ring_s)
}

fn resolve_algebra(job: &JobSpec) -> Result<Inputs, Error> {
    let ring = resolve_ring(job)?;
    if let Some(poly_s) = &job.poly {
        let f = parse_monic_poly(&ring, poly_s)?;
        let algebra = FreeAlgebra::monogenic(ring.clone(), &f);
        return Ok(Inputs {
            ring,
            algebra,
            poly: Some(f),
        });
    }
    if let Some(n) = job.trivial {
        if n == 0 {
            return Err(Error::parse(0, "--trivial needs n >= 1"));
        }
        return Ok(Inputs {
            ring: ring.clone(),
            algebra: FreeAlgebra::trivial(ring, n),
            poly: None,
        });
    }
    if let Some(doc) = &job.algebra {
        let algebra = algebra_from_doc(doc)?;
        if algebra.ring() != &ring {
            return Err(Error::parse(0, "algebra document ring differs from --ring"));
        }
        let poly = algebra.monogenic_poly().cloned();
        return Ok(Inputs {
            ring,
            algebra,
            poly,
        });
    }
    Err(Error::parse(
        0,
        "missing an algebra: give --poly, --trivial, or --algebra-file",
    ))
}

fn resolve_group(job: &JobSpec, degree: usize) -> Result<PermGroup, Error> {
    let group_s = job
        .group
        .as_ref()
        .ok_or_else(|| Error::parse(0, "missing --group"))?;
    PermGroup::parse(group_s, degree)
}

/// Build the closure datum a job refers to: an explicit document, a
/// resolvent root, or (for the full symmetric group) the canonical datum.
fn resolve_datum(job: &JobSpec, inputs: &Inputs) -> Result<ClosureDatum, Error> {
    if let Some(doc) = &job.datum {
        let datum = datum_from_doc(doc)?;
        if datum.algebra() != &inputs.algebra {
            return Err(Error::Precondition(
                "datum document algebra differs from the job algebra".into(),
            ));
        }
        return Ok(datum);
    }
    let n = inputs.algebra.rank();
    let group = resolve_group(job, n)?;
    if let Some(root_s) = &job.from_root {
        let root = parse_elem(&inputs.ring, root_s)?;
        if group == PermGroup::alternating(n) {
            return an_closure_from_root(&inputs.algebra, &root);
        }
        if n == 4 && group == PermGroup::dihedral4() {
            let f = inputs
                .poly
                .as_ref()
                .ok_or_else(|| Error::capability("D4 data from roots need a monogenic algebra"))?;
            return d4_closure_from_root(f, &inputs.ring, &root);
        }
        return Err(Error::capability(format!(
            "--from-root applies to An or D4, not {}",
            group.name()
        )));
    }
    if group == PermGroup::symmetric(n) {
        let map = ferrand_table(&inputs.algebra)?;
        return Ok(canonical_sn_datum(&map));
    }
    Err(Error::parse(
        0,
        "no datum: give --datum-file or --from-root (Sn needs neither)",
    ))
}

fn orbit_to_json(rep: &[usize]) -> Value {
    Value::Array(rep.iter().map(|&i| json!(i + 1)).collect())
}

fn closure_report(report: &mut Report, q: &QuotientAlgebra) -> Result<(), Error> {
    report.result("rank", q.rank());
    report.result("support_columns", q.support().len());
    report.result("free", q.is_free());
    let torsion: Vec<String> = q
        .column_torsion()
        .iter()
        .map(|(c, g)| format!("column {c}: modulus {g}"))
        .collect();
    if !torsion.is_empty() {
        report.result("column_torsion", torsion);
    }
    if matches!(q.ring().desc(), gclosure::ring::RingDesc::Integers) {
        let inv: Vec<String> = q
            .torsion_invariant_factors()?
            .iter()
            .map(|d| d.to_string())
            .collect();
        report.result("torsion_invariant_factors", inv);
    }
    let (faithful, kernel) = is_faithful(q)?;
    report.result("faithful", faithful);
    if let Some(k) = kernel {
        report.result("kernel_contains", k.to_string());
    }
    // primitive idempotent count, when the quotient is small and free over
    // an enumerable ring (the idempotents of a commutative ring form a
    // Boolean algebra, so the count is a power of two)
    if q.is_free() && q.ring().is_enumerable() && q.rank() > 0 {
        let card = q.ring().cardinality().unwrap_or(u128::MAX);
        if card
            .checked_pow(q.rank() as u32)
            .is_some_and(|t| t <= 1_000_000)
        {
            let free = q.as_free_algebra()?;
            let idems = free.all_idempotents()?;
            let count = idems.len();
            if count.is_power_of_two() {
                report.result("orthogonal_idempotents", count.trailing_zeros());
            }
        }
    }
    Ok(())
}

/// Dispatch one job to the library and collect a report.
pub fn run(job: &JobSpec) -> Result<Report, Error> {
    let start = Instant::now();
    let mut report = Report::new(&job.command);
    if let Some(id) = &job.id {
        report.input("id", id.clone());
    }
    for (key, val) in [
        ("ring", &job.ring),
        ("poly", &job.poly),
        ("group", &job.group),
        ("from_root", &job.from_root),
        ("factors", &job.factors),
        ("elem", &job.elem),
    ] {
        if let Some(v) = val {
            report.input(key, v.clone());
        }
    }
    if let Some(n) = job.trivial {
        report.input("trivial", n);
    }

    match job.command.as_str() {
        "ferrand" => {
            let inputs = resolve_algebra(job)?;
            let map = ferrand_table(&inputs.algebra)?;
            let rows: Vec<Value> = map
                .basis()
                .orbits()
                .iter()
                .zip(map.values())
                .map(|(orbit, v)| json!({"orbit": orbit_to_json(&orbit.rep), "value": v.to_string()}))
                .collect();
            report.result("orbit_count", rows.len());
            report.result("table", rows);
        }
        "disc-algebra" => {
            let inputs = resolve_algebra(job)?;
            let disc_alg = discriminant_algebra(&inputs.algebra)?;
            report.result("quadratic", disc_alg.quadratic.to_string());
            report.result("disc", disc_of_basis(&inputs.algebra).to_string());
            if let Some(res) = &disc_alg.resolvent {
                report.result("resolvent_rank", res.quotient.support().len());
            }
            match find_monic_roots(&disc_alg.quadratic, &inputs.ring) {
                Ok(roots) => {
                    report.result("count", roots.len());
                    report.result(
                        "roots",
                        roots.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                    );
                }
                Err(Error::Capability(msg)) => report.guards.push(msg),
                Err(e) => return Err(e),
            }
        }
        "resolvent" => {
            let inputs = resolve_algebra(job)?;
            let f = inputs.poly.as_ref().ok_or_else(|| {
                Error::capability("the cubic resolvent needs a monogenic quartic")
            })?;
            let m = cubic_resolvent(f)?;
            report.result("resolvent_poly", m.to_string());
            match find_monic_roots(&m, &inputs.ring) {
                Ok(roots) => {
                    report.result("count", roots.len());
                    report.result(
                        "roots",
                        roots.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                    );
                }
                Err(Error::Capability(msg)) => report.guards.push(msg),
                Err(e) => return Err(e),
            }
        }
        "enumerate" => {
            let inputs = resolve_algebra(job)?;
            let group = resolve_group(job, inputs.algebra.rank())?;
            let data = enumerate_closure_data(&inputs.algebra, &group)?;
            report.result("count", data.len());
            let docs: Vec<Value> = data
                .iter()
                .map(|d| serde_json::to_value(datum_to_doc(d)).unwrap())
                .collect();
            report.result("data", docs);
        }
        "verify" => {
            let inputs = resolve_algebra(job)?;
            let datum = resolve_datum(job, &inputs)?;
            match verify_closure_datum(&datum) {
                Ok(()) => {
                    report.result("verified", true);
                }
                Err(e) => {
                    report.result("verified", false);
                    report.result("failure", e.to_string());
                }
            }
        }
        "closure-algebra" => {
            let inputs = resolve_algebra(job)?;
            let datum = resolve_datum(job, &inputs)?;
            let max_dim = job
                .guard_n
                .map(|n| n.pow(n as u32))
                .unwrap_or(CLOSURE_DIM_GUARD);
            let q = closure_algebra_with_guard(&datum, max_dim)?;
            closure_report(&mut report, &q)?;
        }
        "from-root" => {
            let inputs = resolve_algebra(job)?;
            if job.from_root.is_none() {
                return Err(Error::parse(0, "missing --from-root"));
            }
            let datum = resolve_datum(job, &inputs)?;
            report.result("datum", serde_json::to_value(datum_to_doc(&datum)).unwrap());
            report.result("verified", true);
        }
        "factor-datum" => {
            let inputs = resolve_algebra(job)?;
            let f = inputs
                .poly
                .clone()
                .ok_or_else(|| Error::capability("factorization data need a monogenic algebra"))?;
            if let Some(extract) = &job.extract {
                let blocks: Vec<usize> = extract
                    .split(',')
                    .map(|s| s.trim().parse::<usize>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| Error::parse(0, format!("bad --extract: {e}")))?;
                let datum = resolve_datum_for_extract(job, &inputs, &blocks)?;
                let fact = extract_factorization(&datum, &blocks)?;
                report.result(
                    "factors",
                    fact.factors
                        .iter()
                        .map(|g| g.to_string())
                        .collect::<Vec<_>>(),
                );
            } else {
                let factors_s = job
                    .factors
                    .as_ref()
                    .ok_or_else(|| Error::parse(0, "missing --factors"))?;
                let factors: Vec<MonicPoly> = factors_s
                    .split(';')
                    .map(|s| parse_monic_poly(&inputs.ring, s.trim()))
                    .collect::<Result<_, _>>()?;
                let fact = FactorizationDatum::new(f, factors)?;
                let datum = factorization_closure(&inputs.ring, &fact)?;
                report.result("group", datum.group().name().to_string());
                report.result("datum", serde_json::to_value(datum_to_doc(&datum)).unwrap());
                report.result("verified", true);
            }
        }
        "primoid" => {
            let ring = resolve_ring(job)?;
            let elem_s = job
                .elem
                .as_ref()
                .ok_or_else(|| Error::parse(0, "missing --elem"))?;
            let p = parse_elem(&ring, elem_s)?;
            match is_primoid(&p, job.bound)? {
                PrimoidVerdict::Primoid => {
                    report.result("primoid", true);
                }
                PrimoidVerdict::PrimoidUpToBound(b) => {
                    report.result("primoid", true);
                    report.result("bounded", b);
                    report.guards.push(format!("primoid search bounded by {b}"));
                }
                PrimoidVerdict::NotPrimoid { witness: (a, b) } => {
                    report.result("primoid", false);
                    report.result("witness", vec![a.to_string(), b.to_string()]);
                }
            }
        }
        "sqrt-disc" => {
            let inputs = resolve_algebra(job)?;
            let corr = sqrt_disc_correspondence(&inputs.algebra, job.bound)?;
            report.result("disc", corr.disc.to_string());
            report.result("count", corr.pairs.len());
            let pairs: Vec<Value> = corr
                .pairs
                .iter()
                .map(|(r, d)| json!({"root": r.to_string(), "sqrt": d.to_string()}))
                .collect();
            report.result("pairs", pairs);
            if let Some(b) = corr.bounded {
                report.guards.push(format!("primoid search bounded by {b}"));
            }
        }
        other => {
            return Err(Error::parse(0, format!("unknown command `{other}`")));
        }
    }
    report.timing_ms = start.elapsed().as_millis();
    Ok(report)
}

fn resolve_datum_for_extract(
    job: &JobSpec,
    inputs: &Inputs,
    blocks: &[usize],
) -> Result<ClosureDatum, Error> {
    if let Some(doc) = &job.datum {
        return datum_from_doc(doc);
    }
    // without an explicit datum, rebuild from --factors
    let factors_s = job
        .factors
        .as_ref()
        .ok_or_else(|| Error::parse(0, "extraction needs --datum-file or --factors"))?;
    let factors: Vec<MonicPoly> = factors_s
        .split(';')
        .map(|s| parse_monic_poly(&inputs.ring, s.trim()))
        .collect::<Result<_, _>>()?;
    let f = inputs.poly.clone().unwrap();
    let fact = FactorizationDatum::new(f, factors)?;
    let sizes = fact.block_sizes();
    if sizes != blocks {
        return Err(Error::Precondition(
            "--extract blocks differ from --factors degrees".into(),
        ));
    }
    factorization_closure(&inputs.ring, &fact)
}

/// Result of running a suite: per-job reports plus expectation mismatches.
#[derive(Serialize)]
pub struct SuiteReport {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub failures: Vec<SuiteFailure>,
    pub reports: Vec<Report>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteFailure {
    pub id: String,
    pub key: String,
    pub expected: Value,
    pub actual: Value,
}

fn check_expectations(job: &JobSpec, report: &Report) -> Vec<SuiteFailure> {
    let id = job.id.clone().unwrap_or_else(|| "<unnamed>".to_string());
    let Some(expect) = &job.expect else {
        return Vec::new();
    };
    let mut failures = Vec::new();
    for (key, expected) in expect {
        let actual = report.results.get(key).cloned().unwrap_or(Value::Null);
        if &actual != expected {
            failures.push(SuiteFailure {
                id: id.clone(),
                key: key.clone(),
                expected: expected.clone(),
                actual,
            });
        }
    }
    failures
}

/// Run all jobs (in `workers` threads), aggregate pass/fail against the
/// expectations embedded in the corpus, and merge reports by job order.
pub fn run_suite(jobs: &[JobSpec], workers: usize) -> SuiteReport {
    let workers = workers.max(1);
    let next = std::sync::atomic::AtomicUsize::new(0);
    let results: Vec<std::sync::Mutex<Option<(Report, Vec<SuiteFailure>)>>> = (0..jobs.len())
        .map(|_| std::sync::Mutex::new(None))
        .collect();
    std::thread::scope(|scope| {
        for _ in 0..workers.min(jobs.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if i >= jobs.len() {
                    break;
                }
                let job = &jobs[i];
                let outcome = match run(job) {
                    Ok(report) => {
                        let fails = check_expectations(job, &report);
                        (report, fails)
                    }
                    Err(e) => {
                        let mut report = Report::new(&job.command);
                        if let Some(id) = &job.id {
                            report.input("id", id.clone());
                        }
                        report.status = format!("error: {e}");
                        report.result("error_class", error_class(&e));
                        let fails = check_expectations(job, &report);
                        (report, fails)
                    }
                };
                *results[i].lock().unwrap() = Some(outcome);
            });
        }
    });
    let mut reports = Vec::with_capacity(jobs.len());
    let mut failures = Vec::new();
    let mut passed = 0;
    for cell in results {
        let (report, fails) = cell.into_inner().unwrap().expect("job ran");
        if fails.is_empty() {
            passed += 1;
        }
        failures.extend(fails);
        reports.push(report);
    }
    SuiteReport {
        total: jobs.len(),
        passed,
        failed: jobs.len() - passed,
        failures,
        reports,
    }
}
