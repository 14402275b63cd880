//! Stage orchestration: fibers -> reduce -> count -> charpoly -> picard /
//! artin-tate -> heights/descent -> rank assembly, with machine-readable
//! reports at every stage. Reports are deterministic: sorted keys, exact
//! decimal integers, no timestamps.

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use ellsurf_core::counting::{
    assemble_counts, infinity_trace, level_orbit_reps, orbit_trace, CountingSurface, Level,
    LevelTraces, NoCache, Strategy, TraceCacheHook, TraceVector,
};
use ellsurf_core::field::{Field, Rationals};
use ellsurf_core::finite::ExtField;
use ellsurf_core::kodaira::{
    analyze_surface, q_place_factoring, verify_good_reduction, KodairaDimension, SurfaceAnalysis,
};
use ellsurf_core::mordell_weil::{
    certify_quadratic_pullback, coset_descent_check, fixed_rank, galois_action_matrix,
    gram_index_bound, same_twist_class, saturation_check, shioda_tate_rank, torsion_subgroup,
    two_descent_image, HeightContext, PicardInput, RankResult, SaturationVerdict,
};
use ellsurf_core::numfield::NumberField;
use ellsurf_core::poly::Poly;
use ellsurf_core::qfactor::factor_nf_from_q;
use ellsurf_core::ratfunc::RatFunc;
use ellsurf_core::spectra::{
    artin_tate_class, cyclotomic_count, duality_complete, trivial_lattice_action, CharPoly,
    GateVerdict,
};
use ellsurf_core::weierstrass::{
    integral_model, reduce_model_mod_p, IntegralModel, Place, Point, Section,
};

use crate::spec::SurfaceSpec;

#[derive(Debug)]
pub enum PipelineError {
    Stage(&'static str, String),
}

impl std::fmt::Display for PipelineError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let PipelineError::Stage(stage, msg) = self;
        write!(f, "stage {stage}: {msg}")
    }
}

impl std::error::Error for PipelineError {}

fn stage_err<E: std::fmt::Debug>(stage: &'static str) -> impl Fn(E) -> PipelineError {
    move |e| PipelineError::Stage(stage, format!("{e:?}"))
}

#[derive(Serialize, Clone, Debug)]
pub struct Provenance {
    pub name: String,
    pub spec_sha256: String,
    pub version: String,
}

pub fn provenance(spec: &SurfaceSpec) -> Provenance {
    Provenance {
        name: spec.name.clone(),
        spec_sha256: spec.hash.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    }
}

// ---- fibers ----

#[derive(Serialize, Clone, Debug)]
pub struct FiberRow {
    pub place: String,
    pub degree: usize,
    pub kind: String,
    pub components: usize,
    pub local_euler: usize,
    pub component_group: Vec<u64>,
    pub splitness: String,
}

#[derive(Serialize, Clone, Debug)]
pub struct FiberReport {
    pub provenance: Provenance,
    pub rows: Vec<FiberRow>,
    pub euler_number: usize,
    pub chi: usize,
    pub kodaira_dimension: String,
    pub b2: usize,
    pub trivial_rank: usize,
    pub picard_upper_bound_h11: usize,
    pub torsion_injection_bound: Vec<(u64, usize)>,
}

pub fn analyze_char0(
    spec: &SurfaceSpec,
) -> Result<(IntegralModel<Rationals>, SurfaceAnalysis<Rationals>), PipelineError> {
    let curve = spec.rational_curve().map_err(stage_err("fibers"))?;
    let model = integral_model(&curve);
    let analysis = analyze_surface(&model, &q_place_factoring(spec.places.clone()))
        .map_err(stage_err("fibers"))?;
    Ok((model, analysis))
}

pub fn fibers_report(spec: &SurfaceSpec) -> Result<FiberReport, PipelineError> {
    let (_, analysis) = analyze_char0(spec)?;
    let q = Rationals;
    let mut rows: Vec<FiberRow> = analysis
        .fibers
        .iter()
        .map(|(f, d)| FiberRow {
            place: f.place.render(&q),
            degree: *d,
            kind: f.kind.symbol(),
            components: f.m_v,
            local_euler: f.e_v,
            component_group: f.component_group.clone(),
            splitness: format!("{:?}", f.splitness),
        })
        .collect();
    rows.sort_by(|a, b| a.place.cmp(&b.place));
    let inv = &analysis.invariants;
    Ok(FiberReport {
        provenance: provenance(spec),
        rows,
        euler_number: inv.euler_number,
        chi: inv.chi,
        kodaira_dimension: match inv.kodaira_dim {
            KodairaDimension::MinusInfinity => "-infinity".into(),
            KodairaDimension::Zero => "0".into(),
            KodairaDimension::One => "1".into(),
        },
        b2: inv.b2,
        trivial_rank: inv.trivial_rank,
        picard_upper_bound_h11: inv.h11_bound,
        torsion_injection_bound: ellsurf_core::kodaira::torsion_injection_bound(inv),
    })
}

// ---- reduce ----

#[derive(Serialize, Clone, Debug)]
pub struct ReduceReport {
    pub provenance: Provenance,
    pub prime: u64,
    pub base_degree: usize,
    pub good_reduction: bool,
    pub mismatches: Vec<String>,
    pub fibers: Vec<FiberRow>,
}

pub struct ReducedSurface {
    pub field: ExtField,
    pub model: IntegralModel<ExtField>,
    pub analysis: SurfaceAnalysis<ExtField>,
    pub counting: CountingSurface,
}

pub fn reduce_surface(spec: &SurfaceSpec, p: u64) -> Result<ReducedSurface, PipelineError> {
    let (model0, analysis0) = analyze_char0(spec)?;
    let fq = ExtField::new(p, spec.base_degree);
    let (_, analysis) =
        verify_good_reduction(&model0, &analysis0, &fq).map_err(stage_err("reduce"))?;
    let red = reduce_model_mod_p(&model0.curve, &fq).map_err(stage_err("reduce"))?;
    let model = integral_model(&red);
    let counting = CountingSurface::new(&model, &analysis).map_err(stage_err("reduce"))?;
    Ok(ReducedSurface {
        field: fq,
        model,
        analysis,
        counting,
    })
}

pub fn reduce_report(spec: &SurfaceSpec, p: u64) -> Result<ReduceReport, PipelineError> {
    let (model0, analysis0) = analyze_char0(spec)?;
    let fq = ExtField::new(p, spec.base_degree);
    let (rep, analysis) =
        verify_good_reduction(&model0, &analysis0, &fq).map_err(stage_err("reduce"))?;
    let mut rows: Vec<FiberRow> = analysis
        .fibers
        .iter()
        .map(|(f, d)| FiberRow {
            place: f.place.render(&fq),
            degree: *d,
            kind: f.kind.symbol(),
            components: f.m_v,
            local_euler: f.e_v,
            component_group: f.component_group.clone(),
            splitness: format!("{:?}", f.splitness),
        })
        .collect();
    rows.sort_by(|a, b| a.place.cmp(&b.place));
    Ok(ReduceReport {
        provenance: provenance(spec),
        prime: p,
        base_degree: spec.base_degree,
        good_reduction: rep.good,
        mismatches: rep.mismatches,
        fibers: rows,
    })
}

// ---- count ----

#[derive(Serialize, Clone, Debug)]
pub struct CountReport {
    pub provenance: Provenance,
    pub prime: u64,
    pub base_degree: usize,
    pub depth: usize,
    pub strategy: String,
    /// #S(F_{q^m}) for m = 1..depth, exact decimal strings
    pub counts: Vec<String>,
    pub orbits_per_level: Vec<(usize, usize)>,
    pub cache_hits: u64,
    pub cache_misses: u64,
}

/// Multi-threaded trace computation: orbits are distributed over threads,
/// the reduction is an index-ordered merge, so totals are independent of
/// the thread count.
pub fn count_surface_parallel(
    surface: &CountingSurface,
    depth: usize,
    strategy: Strategy,
    threads: usize,
    cache: &mut dyn TraceCacheHook,
) -> Result<(TraceVector, Vec<(usize, usize)>), PipelineError> {
    let mut level_traces: Vec<LevelTraces> = Vec::with_capacity(depth);
    let mut census = Vec::new();
    for d in 1..=depth {
        if !(1..=depth).any(|m| m % d == 0) {
            level_traces.push(Vec::new());
            continue;
        }
        let level = Level::build(surface, d);
        let reps = level_orbit_reps(surface, &level);
        census.push((d, reps.len()));
        let mut traces: Vec<(u64, Option<i64>)> =
            reps.iter().map(|&rep| (rep, cache.get(d, rep))).collect();
        let missing: Vec<u64> = traces
            .iter()
            .filter(|(_, t)| t.is_none())
            .map(|(r, _)| *r)
            .collect();
        let computed: Vec<(u64, i64)> = if threads > 1 && missing.len() > 64 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(stage_err("count"))?;
            pool.install(|| {
                use rayon::prelude::*;
                missing
                    .par_iter()
                    .map(|&rep| (rep, orbit_trace(&level, rep, strategy)))
                    .collect()
            })
        } else {
            missing
                .iter()
                .map(|&rep| (rep, orbit_trace(&level, rep, strategy)))
                .collect()
        };
        for (rep, a) in &computed {
            cache.put(d, *rep, *a);
        }
        let filled: LevelTraces = traces
            .drain(..)
            .map(|(rep, t)| {
                let a = t.unwrap_or_else(|| {
                    computed
                        .iter()
                        .find(|(r, _)| *r == rep)
                        .map(|(_, a)| *a)
                        .expect("computed")
                });
                (rep, a)
            })
            .collect();
        level_traces.push(filled);
    }
    let a_inf = infinity_trace(surface);
    let tv = assemble_counts(surface, depth, &level_traces, a_inf).map_err(stage_err("count"))?;
    Ok((tv, census))
}

pub struct CountOutcome {
    pub reduced: ReducedSurface,
    pub traces: TraceVector,
    pub report: CountReport,
}

pub fn count_stage(
    spec: &SurfaceSpec,
    p: u64,
    depth: usize,
    strategy: Strategy,
    threads: usize,
    cache_dir: Option<&Path>,
) -> Result<CountOutcome, PipelineError> {
    let reduced = reduce_surface(spec, p)?;
    let (tv, census, hits, misses) = match cache_dir {
        Some(dir) => {
            let mut filecache = crate::cache::FileTraceCache::open(
                dir,
                &model_cache_key(spec),
                p,
                spec.base_degree,
            )
            .map_err(stage_err("count"))?;
            let (tv, census) = count_surface_parallel(
                &reduced.counting,
                depth,
                strategy,
                threads,
                &mut filecache,
            )?;
            filecache.flush().map_err(stage_err("count"))?;
            (tv, census, filecache.hits, filecache.misses)
        }
        None => {
            let mut nocache = NoCache;
            let (tv, census) =
                count_surface_parallel(&reduced.counting, depth, strategy, threads, &mut nocache)?;
            (tv, census, 0, 0)
        }
    };
    let report = CountReport {
        provenance: provenance(spec),
        prime: p,
        base_degree: spec.base_degree,
        depth,
        strategy: format!("{strategy:?}"),
        counts: tv.counts.iter().map(|c| c.to_string()).collect(),
        orbits_per_level: census,
        cache_hits: hits,
        cache_misses: misses,
    };
    Ok(CountOutcome {
        reduced,
        traces: tv,
        report,
    })
}

pub fn model_cache_key(spec: &SurfaceSpec) -> String {
    // hash only the model-defining fields so cosmetic spec edits keep hits
    let src = format!(
        "r={};s={}",
        spec.r.render(&spec.field, "t"),
        spec.s.render(&spec.field, "t")
    );
    crate::spec::sha256_hex(src.as_bytes())[..16].to_string()
}

// ---- charpoly / picard ----

#[derive(Serialize, Clone, Debug)]
pub struct CharPolyReport {
    pub provenance: Provenance,
    pub prime: u64,
    pub q: u64,
    pub counts: Vec<String>,
    pub trivial_dimension: i64,
    pub trivial_factor: String,
    pub quotient_traces: Vec<String>,
    pub full_characteristic_polynomial: String,
    pub quotient_factor: String,
    pub surviving_branches: usize,
    pub functional_equation_sign: Option<i8>,
}

pub struct CharPolyOutcome {
    pub full: CharPoly,
    pub trivial: CharPoly,
    pub report: CharPolyReport,
}

pub fn charpoly_stage(
    spec: &SurfaceSpec,
    p: u64,
    depth: usize,
    strategy: Strategy,
    threads: usize,
    cache_dir: Option<&Path>,
) -> Result<CharPolyOutcome, PipelineError> {
    let outcome = count_stage(spec, p, depth, strategy, threads, cache_dir)?;
    charpoly_from_counts(spec, &outcome)
}

pub fn charpoly_from_counts(
    spec: &SurfaceSpec,
    outcome: &CountOutcome,
) -> Result<CharPolyOutcome, PipelineError> {
    let reduced = &outcome.reduced;
    let q = reduced.field.q();
    let action = trivial_lattice_action(&reduced.analysis.fibers, q, spec.extra_classes)
        .map_err(stage_err("charpoly"))?;
    let b2 = reduced.analysis.invariants.b2;
    let trivial = action.char_poly();
    let mut quotient_traces = Vec::with_capacity(outcome.traces.counts.len());
    for (i, n) in outcome.traces.counts.iter().enumerate() {
        let m = i + 1;
        let t = n - 1 - (q as i128).pow(2 * m as u32) - action.trace_power(m);
        quotient_traces.push(t);
    }
    let branches =
        duality_complete(&quotient_traces, &trivial, b2, q).map_err(stage_err("charpoly"))?;
    let full = branches[0].clone();
    let quotient = Poly::div_exact(&Rationals, &full.poly, &trivial.poly);
    let report = CharPolyReport {
        provenance: provenance(spec),
        prime: p_of(reduced),
        q,
        counts: outcome.traces.counts.iter().map(|c| c.to_string()).collect(),
        trivial_dimension: action.dimension(),
        trivial_factor: trivial.poly.render(&Rationals, "x"),
        quotient_traces: quotient_traces.iter().map(|t| t.to_string()).collect(),
        full_characteristic_polynomial: full.poly.render(&Rationals, "x"),
        quotient_factor: quotient.render(&Rationals, "x"),
        surviving_branches: branches.len(),
        functional_equation_sign: full.functional_equation_sign(),
    };
    Ok(CharPolyOutcome {
        full,
        trivial,
        report,
    })
}

fn p_of(r: &ReducedSurface) -> u64 {
    r.field.fp.p
}

#[derive(Serialize, Clone, Debug)]
pub struct PicardReport {
    pub provenance: Provenance,
    pub prime: u64,
    pub cyclotomic_eigenvalues: usize,
    pub picard_upper_bound: usize,
    pub trivial_rank_char0: usize,
    pub mordell_weil_rank: String,
    pub charpoly: CharPolyReport,
}

pub fn picard_stage(
    spec: &SurfaceSpec,
    p: u64,
    depth: usize,
    strategy: Strategy,
    threads: usize,
    cache_dir: Option<&Path>,
) -> Result<PicardReport, PipelineError> {
    let (_, analysis0) = analyze_char0(spec)?;
    let cp = charpoly_stage(spec, p, depth, strategy, threads, cache_dir)?;
    let count = cyclotomic_count(&cp.full);
    let trivial0 = analysis0.invariants.trivial_rank;
    let rank = shioda_tate_rank(PicardInput::UpperBound(count), trivial0)
        .map_err(stage_err("picard"))?;
    let rank_str = match rank {
        RankResult::Exact(r) => format!("{r}"),
        RankResult::UpperBound(0) => "0".to_string(), // rank >= 0 pins it
        RankResult::UpperBound(r) => format!("<= {r}"),
    };
    Ok(PicardReport {
        provenance: provenance(spec),
        prime: p,
        cyclotomic_eigenvalues: count,
        picard_upper_bound: count,
        trivial_rank_char0: trivial0,
        mordell_weil_rank: rank_str,
        charpoly: cp.report,
    })
}

// ---- artin-tate ----

#[derive(Serialize, Clone, Debug)]
pub struct ArtinTatePrimeRow {
    pub prime: u64,
    pub q: u64,
    pub charpoly: String,
    pub cyclotomic_count: usize,
    pub discriminant_class: String,
}

#[derive(Serialize, Clone, Debug)]
pub struct ArtinTateReport {
    pub provenance: Provenance,
    pub rows: Vec<ArtinTatePrimeRow>,
    pub verdict: String,
    pub picard_bound_char0: Option<usize>,
    pub declared_sections_non_torsion: usize,
    pub final_rank: Option<usize>,
}

pub fn artin_tate_stage(
    spec: &SurfaceSpec,
    strategy: Strategy,
    threads: usize,
    cache_dir: Option<&Path>,
) -> Result<ArtinTateReport, PipelineError> {
    if spec.primes.len() < 2 {
        return Err(PipelineError::Stage(
            "artin-tate",
            "need at least two primes of good reduction".into(),
        ));
    }
    if spec.base_degree % 2 != 0 {
        return Err(PipelineError::Stage(
            "artin-tate",
            "q must be a square: set base_degree to an even value".into(),
        ));
    }
    let (model0, analysis0) = analyze_char0(spec)?;
    let mut rows = Vec::new();
    let mut classes = Vec::new();
    let mut common_bound: Option<usize> = None;
    for &p in &spec.primes {
        let cp = charpoly_stage(spec, p, spec.depth, strategy, threads, cache_dir)?;
        let cyc = cyclotomic_count(&cp.full);
        let class = artin_tate_class(&cp.full, cyc).map_err(stage_err("artin-tate"))?;
        let class_str = format!("{}{}", if class.0 < 0 { "-" } else { "" }, class.1);
        rows.push(ArtinTatePrimeRow {
            prime: p,
            q: cp.report.q,
            charpoly: cp.report.full_characteristic_polynomial.clone(),
            cyclotomic_count: cyc,
            discriminant_class: class_str,
        });
        classes.push(class);
        common_bound = Some(match common_bound {
            None => cyc,
            Some(b) => b.min(cyc),
        });
    }
    let bound = common_bound.unwrap();
    let verdict = ellsurf_core::spectra::discriminant_gate(&classes, bound)
        .map_err(stage_err("artin-tate"))?;
    let trivial0 = analysis0.invariants.trivial_rank;
    // non-torsion certification of the declared sections through the
    // component injection bound (2Q and 4Q nonzero suffices here)
    let exponent = ellsurf_core::kodaira::torsion_exponent_bound(&analysis0.invariants);
    let curve0 = model0.curve.clone();
    let mut certified = 0usize;
    for sec in &spec.sections {
        if let Ok(s0) = lower_section(spec, sec) {
            let mut torsion = false;
            let mut n = 1u64;
            while n <= exponent {
                if exponent % n == 0 && curve0.scalar_mul(n as i64, &s0).is_infinity() {
                    torsion = true;
                    break;
                }
                n += 1;
            }
            if !torsion {
                certified += 1;
            }
        }
    }
    let (verdict_str, final_rank) = match verdict {
        GateVerdict::RankAtMost(b, (i, j)) => {
            let rank = if trivial0 + certified >= b {
                Some(b - trivial0)
            } else {
                None
            };
            (
                format!(
                    "geometric Picard rank <= {b} (witnesses: primes {} and {})",
                    rows[i].prime, rows[j].prime
                ),
                rank,
            )
        }
        GateVerdict::Inconclusive => ("inconclusive".to_string(), None),
    };
    Ok(ArtinTateReport {
        provenance: provenance(spec),
        rows,
        verdict: verdict_str,
        picard_bound_char0: match verdict {
            GateVerdict::RankAtMost(b, _) => Some(b),
            _ => None,
        },
        declared_sections_non_torsion: certified,
        final_rank,
    })
}

fn lower_section(
    spec: &SurfaceSpec,
    sec: &Section<NumberField>,
) -> Result<Section<Rationals>, PipelineError> {
    let k = &spec.field;
    let conv_poly = |p: &Poly<NumberField>| -> Result<Poly<Rationals>, PipelineError> {
        p.coeffs
            .iter()
            .map(|c| {
                k.to_rational(c)
                    .ok_or_else(|| PipelineError::Stage("sections", "not rational".into()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(|cs| Poly::from_coeffs(&Rationals, cs))
    };
    match sec {
        Point::Infinity => Ok(Point::Infinity),
        Point::Affine(x, y) => Ok(Point::Affine(
            RatFunc::new(&Rationals, conv_poly(&x.num)?, conv_poly(&x.den)?),
            RatFunc::new(&Rationals, conv_poly(&y.num)?, conv_poly(&y.den)?),
        )),
    }
}

// ---- heights / descent ----

#[derive(Serialize, Clone, Debug)]
pub struct HeightsReport {
    pub provenance: Provenance,
    pub chi: usize,
    pub trivial_rank: usize,
    pub gram_unscaled: Vec<Vec<String>>,
    pub gram_scaled: Vec<Vec<String>>,
    pub scaled_determinant: String,
    pub admissible_indices: Vec<u64>,
    pub descent_images: Vec<(String, String)>,
    pub descent_span_dimension: usize,
    pub saturation: String,
    pub torsion_structure: Vec<u64>,
    pub torsion_structure_rational: Vec<u64>,
    pub galois_fixed_rank: Option<usize>,
    pub rational_generators: Vec<usize>,
    pub geometric_rank: usize,
    pub rank_over_qt: Option<usize>,
}

pub fn heights_stage(spec: &SurfaceSpec) -> Result<HeightsReport, PipelineError> {
    let k = &spec.field;
    let curve = spec.curve();
    let model = integral_model(&curve);
    // base-change the char-0 analysis to the section field
    let kk = k.clone();
    let cands = spec.places.clone();
    let factoring = move |f: &Poly<NumberField>| -> Result<Vec<(Poly<NumberField>, usize)>, String> {
        factor_nf_from_q(&kk, f, &cands).map_err(|e| format!("{e:?}"))
    };
    let analysis = analyze_surface(&model, &factoring).map_err(stage_err("heights"))?;
    let mut finite = Vec::new();
    let mut inf = None;
    for (f, _) in &analysis.fibers {
        match &f.place {
            Place::Finite(pi) => finite.push((pi.clone(), f.kind)),
            Place::Infinity => inf = Some(f.kind),
        }
    }
    let chi = analysis.invariants.chi;
    let ctx = HeightContext::new(&model, finite, inf, chi);
    let exponent = ellsurf_core::kodaira::torsion_exponent_bound(&analysis.invariants);
    let gens: Vec<Section<NumberField>> =
        spec.generators.iter().map(|p| model.map_point(p)).collect();
    let tors: Vec<Section<NumberField>> =
        spec.torsion_listed.iter().map(|p| model.map_point(p)).collect();
    let n = gens.len();
    let mut unscaled = vec![vec![BigRational::from_integer(BigInt::from(0)); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = ctx
                .pairing(&gens[i], &gens[j], exponent)
                .map_err(stage_err("heights"))?;
            unscaled[i][j] = v.clone();
            unscaled[j][i] = v;
        }
    }
    let four = BigRational::from_integer(BigInt::from(4));
    let scaled: Vec<Vec<BigRational>> = unscaled
        .iter()
        .map(|row| row.iter().map(|v| v * &four).collect())
        .collect();
    let (det, indices) = gram_index_bound(&scaled).map_err(stage_err("heights"))?;
    // descent data
    let mut images = Vec::new();
    let mut image_strings = Vec::new();
    for p in gens.iter().chain(tors.iter()) {
        let img = two_descent_image(&model.curve, p, true).map_err(stage_err("heights"))?;
        image_strings.push((
            img.0.poly.render(k, "t"),
            img.1.poly.render(k, "t"),
        ));
        images.push(img);
    }
    let span = ellsurf_core::mordell_weil::descent_span_dimension(k, &images);
    let admissible: Vec<u64> = if spec.admissible_indices.is_empty() {
        indices.clone()
    } else {
        spec.admissible_indices.clone()
    };
    let saturation = if n > 0 {
        match saturation_check(&model.curve, &gens, &tors, &admissible)
            .map_err(stage_err("heights"))?
        {
            SaturationVerdict::Saturated => "saturated".to_string(),
            SaturationVerdict::Surviving(v) => format!("surviving indices {v:?}"),
        }
    } else {
        "vacuously saturated".to_string()
    };
    // torsion
    let torsion = torsion_subgroup(&model.curve, exponent.min(4), &|_| true)
        .map_err(stage_err("heights"))?;
    let is_rat = |p: &Section<NumberField>| -> bool {
        match p.xy() {
            None => true,
            Some((x, y)) => [&x.num, &x.den, &y.num, &y.den]
                .iter()
                .all(|pl| pl.coeffs.iter().all(|c| k.to_rational(c).is_some())),
        }
    };
    let torsion_rational = torsion_subgroup(&model.curve, exponent.min(4), &is_rat)
        .map_err(stage_err("heights"))?;
    // Galois descent
    let (galois_fixed, rational_gens) = if spec.sigmas.is_empty() {
        (None, Vec::new())
    } else {
        let mut mats = Vec::new();
        for img in &spec.sigmas {
            let sg: Vec<Section<NumberField>> = gens
                .iter()
                .map(|p| apply_sigma(k, img, p))
                .collect();
            mats.push(
                galois_action_matrix(&ctx, &gens, &sg, exponent).map_err(stage_err("heights"))?,
            );
        }
        let fr = fixed_rank(&mats);
        let mut rational = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            if is_rat(g) {
                rational.push(i);
            }
        }
        (Some(fr), rational)
    };
    let to_strings = |m: &Vec<Vec<BigRational>>| -> Vec<Vec<String>> {
        m.iter()
            .map(|row| row.iter().map(|v| v.to_string()).collect())
            .collect()
    };
    Ok(HeightsReport {
        provenance: provenance(spec),
        chi,
        trivial_rank: analysis.invariants.trivial_rank,
        gram_unscaled: to_strings(&unscaled),
        gram_scaled: to_strings(&scaled),
        scaled_determinant: det.to_string(),
        admissible_indices: indices,
        descent_images: image_strings,
        descent_span_dimension: span,
        saturation,
        torsion_structure: torsion.structure,
        torsion_structure_rational: torsion_rational.structure,
        galois_fixed_rank: galois_fixed,
        rational_generators: rational_gens,
        geometric_rank: n,
        rank_over_qt: galois_fixed,
    })
}

pub fn apply_sigma(
    k: &NumberField,
    img: &Poly<Rationals>,
    p: &Section<NumberField>,
) -> Section<NumberField> {
    let map_poly = |pl: &Poly<NumberField>| -> Poly<NumberField> {
        Poly::from_coeffs(k, pl.coeffs.iter().map(|c| k.apply_map(img, c)).collect())
    };
    match p {
        Point::Infinity => Point::Infinity,
        Point::Affine(x, y) => Point::Affine(
            RatFunc::new(k, map_poly(&x.num), map_poly(&x.den)),
            RatFunc::new(k, map_poly(&y.num), map_poly(&y.den)),
        ),
    }
}

/// The E2-style coset saturation check for a single rational generator.
pub fn coset_check_report(
    spec: &SurfaceSpec,
) -> Result<Vec<usize>, PipelineError> {
    let curve = spec.curve();
    let model = integral_model(&curve);
    let p = model.map_point(
        spec.generators
            .first()
            .ok_or_else(|| PipelineError::Stage("descent", "no generator declared".into()))?,
    );
    let ff = &model.curve.field;
    let mut torsion: Vec<Section<NumberField>> = vec![Point::Infinity];
    let t1: Section<NumberField> = Point::Affine(model.curve.s.clone(), ff.zero());
    torsion.push(t1.clone());
    for t in spec.torsion_listed.iter() {
        let tm = model.map_point(t);
        torsion.push(tm.clone());
        torsion.push(model.curve.add(&t1, &tm));
    }
    coset_descent_check(&model.curve, &p, &torsion).map_err(stage_err("descent"))
}

// ---- rank assembly ----

#[derive(Serialize, Clone, Debug)]
pub struct AssemblyMemberReport {
    pub name: String,
    pub method: String,
    pub rank: usize,
    pub detail: String,
}

#[derive(Serialize, Clone, Debug)]
pub struct AssemblyReport {
    pub members: Vec<AssemblyMemberReport>,
    pub version: String,
}

pub enum RankMethod {
    Heights,
    Picard,
    ArtinTate,
    /// rational elliptic surface: rho = 10 exactly
    RationalShioda,
    Pullback {
        base: String,
        phi: String,
        twin: String,
    },
}

pub struct AssemblyMember {
    pub name: String,
    pub spec: SurfaceSpec,
    pub method: RankMethod,
}

pub fn assemble_ranks(
    members: Vec<AssemblyMember>,
    strategy: Strategy,
    threads: usize,
    cache_dir: Option<&Path>,
) -> Result<AssemblyReport, PipelineError> {
    use std::collections::BTreeMap;
    let mut ranks: BTreeMap<String, usize> = BTreeMap::new();
    let mut out = Vec::new();
    // leaves first, pullbacks after
    for pass in 0..2 {
        for m in &members {
            if ranks.contains_key(&m.name) {
                continue;
            }
            let (rank, method, detail) = match &m.method {
                RankMethod::Heights if pass == 0 => {
                    let rep = heights_stage(&m.spec)?;
                    // generators independent (nonzero Gram det) give the
                    // lower bound; h11 - trivial gives the upper bound
                    let (_, analysis) = analyze_char0(&m.spec)?;
                    let upper =
                        analysis.invariants.h11_bound - analysis.invariants.trivial_rank;
                    let g = m.spec.generators.len();
                    if g != upper {
                        return Err(PipelineError::Stage(
                            "assemble",
                            format!(
                                "{}: heights give rank in [{g}, {upper}], not exact",
                                m.name
                            ),
                        ));
                    }
                    (
                        g,
                        "heights",
                        format!(
                            "Gram det {} ({}), trivial {}",
                            rep.scaled_determinant, rep.saturation, rep.trivial_rank
                        ),
                    )
                }
                RankMethod::Picard if pass == 0 => {
                    let p = *m.spec.primes.first().ok_or_else(|| {
                        PipelineError::Stage("assemble", format!("{}: no prime", m.name))
                    })?;
                    let rep = picard_stage(
                        &m.spec,
                        p,
                        m.spec.depth,
                        strategy,
                        threads,
                        cache_dir,
                    )?;
                    let rank: usize = rep.mordell_weil_rank.parse().map_err(|_| {
                        PipelineError::Stage(
                            "assemble",
                            format!("{}: rank not exact: {}", m.name, rep.mordell_weil_rank),
                        )
                    })?;
                    (
                        rank,
                        "picard",
                        format!(
                            "cyclotomic bound {}, trivial {}",
                            rep.picard_upper_bound, rep.trivial_rank_char0
                        ),
                    )
                }
                RankMethod::ArtinTate if pass == 0 => {
                    let rep = artin_tate_stage(&m.spec, strategy, threads, cache_dir)?;
                    let rank = rep.final_rank.ok_or_else(|| {
                        PipelineError::Stage(
                            "assemble",
                            format!("{}: Artin-Tate verdict not exact: {}", m.name, rep.verdict),
                        )
                    })?;
                    (rank, "artin-tate", rep.verdict.clone())
                }
                RankMethod::RationalShioda if pass == 0 => {
                    let (_, analysis) = analyze_char0(&m.spec)?;
                    if analysis.invariants.kodaira_dim != KodairaDimension::MinusInfinity {
                        return Err(PipelineError::Stage(
                            "assemble",
                            format!("{}: surface is not rational", m.name),
                        ));
                    }
                    // a rational elliptic surface has rho = h^{1,1} = 10
                    let rank = 10 - analysis.invariants.trivial_rank;
                    (
                        rank,
                        "rational-shioda",
                        format!("rho = 10, trivial {}", analysis.invariants.trivial_rank),
                    )
                }
                RankMethod::Pullback { base, phi, twin } if pass == 1 => {
                    let rb = *ranks.get(base).ok_or_else(|| {
                        PipelineError::Stage("assemble", format!("unresolved base {base}"))
                    })?;
                    let rt = *ranks.get(twin).ok_or_else(|| {
                        PipelineError::Stage("assemble", format!("unresolved twin {twin}"))
                    })?;
                    let base_spec = members
                        .iter()
                        .find(|x| &x.name == base)
                        .ok_or_else(|| {
                            PipelineError::Stage("assemble", format!("unknown member {base}"))
                        })?;
                    let twin_spec = members
                        .iter()
                        .find(|x| &x.name == twin)
                        .ok_or_else(|| {
                            PipelineError::Stage("assemble", format!("unknown member {twin}"))
                        })?;
                    // certify over Q(t): cover = pullback(base, phi), and
                    // the deck twist class equals the base->twin twist class
                    let base_curve = base_spec
                        .spec
                        .rational_curve()
                        .map_err(stage_err("assemble"))?;
                    let cover_curve = m.spec.rational_curve().map_err(stage_err("assemble"))?;
                    let twin_curve = twin_spec
                        .spec
                        .rational_curve()
                        .map_err(stage_err("assemble"))?;
                    let qk = NumberField::rationals();
                    let phi_nf = crate::expr::parse_ratfunc(&qk, phi)
                        .map_err(|e| PipelineError::Stage("assemble", format!("{e:?}")))?;
                    let lower_poly = |pl: &Poly<NumberField>| -> Poly<Rationals> {
                        Poly::from_coeffs(
                            &Rationals,
                            pl.coeffs.iter().map(|c| qk.to_rational(c).unwrap()).collect(),
                        )
                    };
                    let phi_rf = RatFunc::new(
                        &Rationals,
                        lower_poly(&phi_nf.num),
                        lower_poly(&phi_nf.den),
                    );
                    let deck = certify_quadratic_pullback(&base_curve, &cover_curve, &phi_rf)
                        .map_err(stage_err("assemble"))?;
                    // twin = base twisted by u with u ~ deck (mod squares)
                    let ffk = &base_curve.field;
                    let u = ffk.div(&twin_curve.r, &base_curve.r);
                    let u2 = ffk.div(&twin_curve.s, &base_curve.s);
                    if u != u2 {
                        return Err(PipelineError::Stage(
                            "assemble",
                            format!("{}: twin is not a twist of {base}", m.name),
                        ));
                    }
                    if !same_twist_class(&Rationals, &deck, &u) {
                        return Err(PipelineError::Stage(
                            "assemble",
                            format!("{}: deck class differs from the {twin} twist", m.name),
                        ));
                    }
                    (
                        rb + rt,
                        "pullback",
                        format!("rank({base}) + rank({twin}) = {rb} + {rt}"),
                    )
                }
                _ => continue,
            };
            ranks.insert(m.name.clone(), rank);
            out.push(AssemblyMemberReport {
                name: m.name.clone(),
                method: method.to_string(),
                rank,
                detail,
            });
        }
    }
    Ok(AssemblyReport {
        members: out,
        version: env!("CARGO_PKG_VERSION").to_string(),
    })
}
