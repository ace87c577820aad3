//! Command-line driver over the exact engines: building construction and
//! certificates, truncated lattice complexes, the apartment-class pipeline,
//! the finite-field span check, and continued-fraction reduction. Every
//! command produces a versioned JSON report.

pub mod cache;
pub mod report;

use clap::{Args, Parser, Subcommand};
use std::time::Instant;

use report::{homology_json, Certification, Report};
use stb_core::apartment::{
    apartment_span_fq, claim_identification, manin_reduce, relative_decomposition,
    telescoping_holds, verify_factorization, ChainComparison, Cusp, OrderedSigmaPair,
};
use stb_core::building::{
    build_building, verify_restriction_lemmas, BuildingVariant, DEFAULT_BUDGET,
};
use stb_core::error::Error;
use stb_core::lattice::{build_lattice_complex, ComplexKind, ComplexSpec};
use stb_core::symplectic::{enumerate_sp_fq, parse_matrix_text, SpElement};
use stb_core::topology::cm::cm_certificate;
use stb_core::topology::homology::{reduced_homology, relative_homology};
use stb_core::topology::poset::simplex_poset;
use stb_core::topology::serialize::{header_cache_key, ComplexDto, PosetDto};

#[derive(Parser, Debug)]
#[command(
    name = "stb",
    version,
    about = "exact symplectic building and apartment computations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON report to this path.
    #[arg(long, global = true)]
    pub json: Option<std::path::PathBuf>,
    /// Skip the complex cache for this run.
    #[arg(long, global = true)]
    pub no_cache: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a Tits building over F_q and optionally certify it.
    Building(BuildingArgs),
    /// Verify the restricted-building facts exhaustively over F_q.
    Restricted {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Build a truncated lattice complex and report its homology.
    Complex(ComplexArgs),
    /// Apartment-class pipeline verifications.
    #[command(subcommand)]
    Pipeline(PipelineCmd),
    /// Span of apartment classes in the cycle space over F_q.
    Span {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Number of random (S, M) pairs for the equivariance check.
        #[arg(long, default_value_t = 0)]
        equivariance: usize,
    },
    /// Continued-fraction reduction to unimodular symbol pairs.
    Reduce {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Cohen-Macaulay certificate for a named poset.
    CmCheck(CmCheckArgs),
}

#[derive(Args, Debug)]
pub struct BuildingArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub q: u64,
    /// full | restricted | upper-link | type-a
    #[arg(long, default_value = "full")]
    pub variant: String,
    /// Frozen rank for the upper-link variant.
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    /// Ambient dimension for the type-a variant.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub homology: bool,
    #[arg(long)]
    pub cm_check: bool,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
}

#[derive(Args, Debug)]
pub struct ComplexArgs {
    /// i | i-delta | i-sigma-delta | ia | b | ba
    #[arg(long)]
    pub kind: String,
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub bound: i64,
    #[arg(long)]
    pub restrict_w: bool,
    /// Summand basis in matrix text, for kinds b/ba.
    #[arg(long)]
    pub summand: Option<String>,
    #[arg(long)]
    pub homology: bool,
    #[arg(long, default_value_t = 100_000)]
    pub budget: usize,
}

#[derive(Subcommand, Debug)]
pub enum PipelineCmd {
    /// Chain-level commutativity: s∘b∘∂∘α equals the apartment class.
    VerifyProp51 {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        bound: i64,
    },
    /// σ-edge decomposition of H_n(IA, I^δ) on a truncation.
    Decompose {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        bound: i64,
        /// Also verify Link(Δ) = I^δ(Δ^⊥) for every σ edge.
        #[arg(long)]
        link_perp: bool,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
    },
    /// Two-route identification of the reduced class at genus 2.
    IdentifyReduced {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        bound: i64,
    },
    /// Genus-1 structure: all edges σ, I^δ the 0-skeleton, free relative H_1.
    GenusOne {
        #[arg(long)]
        bound: i64,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
    },
}

#[derive(Args, Debug)]
pub struct CmCheckArgs {
    /// building | beta-boundary | simplex-boundary
    #[arg(long)]
    pub poset: String,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub q: Option<u64>,
    /// Simplex dimension for simplex-boundary.
    #[arg(long)]
    pub k: Option<usize>,
    /// Expected Cohen-Macaulay dimension (defaults to the natural one).
    #[arg(long)]
    pub d: Option<i64>,
}

pub fn parse_cusp(text: &str) -> stb_core::Result<Cusp> {
    if text == "inf" || text == "oo" {
        return Ok(Cusp::infinity());
    }
    let parts: Vec<&str> = text.split('/').collect();
    let parse = |s: &str| {
        s.trim()
            .parse::<i64>()
            .map_err(|_| Error::Invalid(format!("bad rational {text:?}")))
    };
    match parts.as_slice() {
        [p] => Cusp::new(parse(p)?, 1),
        [p, q] => Cusp::new(parse(p)?, parse(q)?),
        _ => Err(Error::Invalid(format!("bad rational {text:?}"))),
    }
}

fn parse_variant(args: &BuildingArgs) -> stb_core::Result<BuildingVariant> {
    match args.variant.as_str() {
        "full" => Ok(BuildingVariant::Full),
        "restricted" => Ok(BuildingVariant::RestrictedToW),
        "upper-link" => Ok(BuildingVariant::UpperLink { m: args.m }),
        "type-a" => Ok(BuildingVariant::TypeA {
            dim: args
                .dim
                .ok_or_else(|| Error::Invalid("type-a variant needs --dim".into()))?,
        }),
        other => Err(Error::Invalid(format!("unknown variant {other:?}"))),
    }
}

fn parse_kind(text: &str) -> stb_core::Result<ComplexKind> {
    match text {
        "i" => Ok(ComplexKind::I),
        "i-delta" => Ok(ComplexKind::IDelta),
        "i-sigma-delta" => Ok(ComplexKind::ISigmaDelta),
        "ia" => Ok(ComplexKind::IA),
        "b" => Ok(ComplexKind::B),
        "ba" => Ok(ComplexKind::BA),
        other => Err(Error::Invalid(format!("unknown complex kind {other:?}"))),
    }
}

fn sp_from_text(text: &str) -> stb_core::Result<SpElement> {
    let rows = parse_matrix_text(text)?;
    if rows.len() % 2 != 0 {
        return Err(Error::DimensionMismatch {
            expected: rows.len() + 1,
            got: rows.len(),
        });
    }
    SpElement::new(rows.len() / 2, &rows)
}

pub fn execute(cmd: &Command, use_cache: bool) -> stb_core::Result<Report> {
    match cmd {
        Command::Building(args) => building_command(args, use_cache),
        Command::Restricted { n, q, budget } => {
            let report = verify_restriction_lemmas(*n, *q, *budget)?;
            let passed = report.passed();
            Ok(Report::new(
                "restricted",
                serde_json::json!({"n": n, "q": q}),
                serde_json::to_value(&report).expect("report serializes"),
                Certification::Homological,
                passed,
            ))
        }
        Command::Complex(args) => complex_command(args, use_cache),
        Command::Pipeline(p) => pipeline_command(p),
        Command::Span {
            n,
            q,
            budget,
            equivariance,
        } => span_command(*n, *q, *budget, *equivariance),
        Command::Reduce { from, to } => reduce_command(from, to),
        Command::CmCheck(args) => cm_check_command(args),
    }
}

fn building_command(args: &BuildingArgs, use_cache: bool) -> stb_core::Result<Report> {
    let variant = parse_variant(args)?;
    let header = serde_json::json!({
        "command": "building",
        "variant": &variant,
        "n": args.n,
        "q": args.q,
    });
    let key = header_cache_key(&header);
    let (poset, elements, cache_hit) = match if use_cache { cache::get(&key) } else { None } {
        Some(text) => {
            let dto: PosetDto = serde_json::from_str(&text)
                .map_err(|e| Error::Invalid(format!("corrupt cache entry: {e}")))?;
            let poset = dto.to_poset()?;
            (poset, dto.elements.len(), true)
        }
        None => {
            let b = build_building(variant.clone(), args.n, args.q, args.budget)?;
            let dto = PosetDto::new(&b.poset, header.clone());
            if use_cache {
                cache::put(&key, &serde_json::to_string(&dto).expect("dto serializes"));
            }
            (b.poset, b.elements.len(), false)
        }
    };
    let mut results = serde_json::json!({
        "elements": elements,
        "covers": poset.covers().len(),
        "cache_hit": cache_hit,
        "cache_key": key,
    });
    let mut passed = true;
    let mut certification = Certification::Exact;
    if args.homology {
        let h = reduced_homology(&stb_core::topology::poset::order_complex(&poset));
        results["homology"] = homology_json(&h);
        certification = Certification::Homological;
    }
    if args.cm_check {
        let d = args.n as i64 - 1;
        let cm = cm_certificate(&poset, d);
        passed &= cm.passed;
        results["cm"] = serde_json::to_value(&cm).expect("cm serializes");
        certification = Certification::Homological;
    }
    Ok(Report::new(
        "building",
        serde_json::json!({
            "variant": variant, "n": args.n, "q": args.q,
            "homology": args.homology, "cm_check": args.cm_check,
        }),
        results,
        certification,
        passed,
    ))
}

fn complex_command(args: &ComplexArgs, use_cache: bool) -> stb_core::Result<Report> {
    let kind = parse_kind(&args.kind)?;
    let mut spec = ComplexSpec::new(kind, args.m, args.n, args.bound);
    if args.restrict_w {
        spec = spec.with_w_restriction();
    }
    if let Some(text) = &args.summand {
        spec = spec.with_summand(parse_matrix_text(text)?);
    }
    let header = serde_json::json!({"command": "complex", "spec": spec.header()});
    let key = header_cache_key(&header);
    let (complex, labels, sigma_edges, cache_hit) =
        match if use_cache { cache::get(&key) } else { None } {
            Some(text) => {
                let dto: ComplexDto = serde_json::from_str(&text)
                    .map_err(|e| Error::Invalid(format!("corrupt cache entry: {e}")))?;
                let sigma: usize = dto.header["sigma_edges"]
                    .as_u64()
                    .map(|x| x as usize)
                    .unwrap_or(0);
                (dto.to_complex()?, dto.vertices.clone(), sigma, true)
            }
            None => {
                let k = build_lattice_complex(&spec, args.budget)?;
                let mut header_with_sigma = header.clone();
                header_with_sigma["sigma_edges"] = serde_json::json!(k.sigma_edges.len());
                let dto = ComplexDto::new(&k.complex, &k.labels(), header_with_sigma);
                if use_cache {
                    cache::put(&key, &serde_json::to_string(&dto).expect("dto serializes"));
                }
                let labels = k.labels();
                let sigma = k.sigma_edges.len();
                (k.complex, labels, sigma, false)
            }
        };
    let counts: Vec<usize> = (0..=complex.dim().max(0) as usize)
        .map(|k| complex.simplex_count(k))
        .collect();
    let mut results = serde_json::json!({
        "vertices": labels.len(),
        "simplices_per_dim": counts,
        "sigma_edges": sigma_edges,
        "cache_hit": cache_hit,
        "cache_key": key,
    });
    if args.homology {
        let h = reduced_homology(&complex);
        results["homology"] = homology_json(&h);
        results["note"] =
            serde_json::json!("truncation homology; no statement about the untruncated complex");
    }
    Ok(Report::new(
        "complex",
        serde_json::json!({
            "kind": args.kind, "m": args.m, "n": args.n, "bound": args.bound,
            "restrict_w": args.restrict_w, "summand": args.summand,
        }),
        results,
        Certification::ExperimentalTruncation,
        true,
    ))
}

fn pipeline_command(cmd: &PipelineCmd) -> stb_core::Result<Report> {
    match cmd {
        PipelineCmd::VerifyProp51 { matrix, bound } => {
            let m = sp_from_text(matrix)?;
            let r = verify_factorization(&m, *bound)?;
            let passed = r.comparison == ChainComparison::Equal;
            Ok(Report::new(
                "pipeline verify-prop51",
                serde_json::json!({"matrix": matrix, "bound": bound}),
                serde_json::to_value(&r).expect("report serializes"),
                Certification::Exact,
                passed,
            ))
        }
        PipelineCmd::Decompose {
            n,
            bound,
            link_perp,
            budget,
        } => {
            let spec = ComplexSpec::new(ComplexKind::IA, 0, *n, *bound);
            let k = build_lattice_complex(&spec, *budget)?;
            let r = relative_decomposition(&k, *link_perp);
            let passed = r.all_passed;
            let mut value = serde_json::to_value(&r).expect("report serializes");
            // per-edge details are large; keep the summary
            if let Some(obj) = value.as_object_mut() {
                obj.remove("edges");
            }
            Ok(Report::new(
                "pipeline decompose",
                serde_json::json!({"n": n, "bound": bound, "link_perp": link_perp}),
                value,
                Certification::Exact,
                passed,
            ))
        }
        PipelineCmd::IdentifyReduced { matrix, bound } => {
            let m = sp_from_text(matrix)?;
            let pair = OrderedSigmaPair::new(m.column(2), m.column(3))?;
            let r = claim_identification(&m, &pair, *bound)?;
            let passed = r.equal;
            Ok(Report::new(
                "pipeline identify-reduced",
                serde_json::json!({"matrix": matrix, "bound": bound}),
                serde_json::to_value(&r).expect("report serializes"),
                Certification::Exact,
                passed,
            ))
        }
        PipelineCmd::GenusOne { bound, budget } => {
            let r = genus_one_structure(*bound, *budget)?;
            let passed = r["passed"].as_bool().unwrap_or(false);
            Ok(Report::new(
                "pipeline genus-one",
                serde_json::json!({"bound": bound}),
                r,
                Certification::Exact,
                passed,
            ))
        }
    }
}

/// Genus-1 structure at a bound: the I^δ instance is the 0-skeleton of the
/// IA instance, every IA edge is a σ edge, the relative H_1 is free of rank
/// the σ-edge count, and α hits a ± generator of every σ-edge summand
/// realized by a bounded matrix.
pub fn genus_one_structure(bound: i64, budget: usize) -> stb_core::Result<serde_json::Value> {
    let ia = build_lattice_complex(&ComplexSpec::new(ComplexKind::IA, 0, 1, bound), budget)?;
    let idelta =
        build_lattice_complex(&ComplexSpec::new(ComplexKind::IDelta, 0, 1, bound), budget)?;
    let zero_skeleton =
        idelta.complex.dim() == 0 && idelta.lines == ia.lines && ia.sub_idelta() == idelta.complex;
    let all_edges_sigma = ia.complex.simplex_count(1) == ia.sigma_edges.len();
    let rel = relative_homology(&ia.complex, &ia.sub_idelta());
    let h1_free_of_edge_rank = rel.betti(1) == ia.sigma_edges.len() && rel.torsion(1).is_empty();

    // α hits a ± generator of every σ-edge summand
    let mut alpha_generators = true;
    for edge in &ia.sigma_edges {
        let (pv, sv) = match ia.tag(edge) {
            stb_core::lattice::SimplexClass::Sigma { edge } => (edge.0.clone(), edge.1.clone()),
            _ => unreachable!(),
        };
        let m = SpElement::new(1, &[vec![pv[0], sv[0]], vec![pv[1], sv[1]]])?;
        let alpha = stb_core::apartment::alpha_in_instance(&m, &ia)?;
        let coeff = alpha.coeff(edge);
        if !(alpha.len() == 1 && coeff.abs() == 1) {
            alpha_generators = false;
            break;
        }
    }
    let passed = zero_skeleton && all_edges_sigma && h1_free_of_edge_rank && alpha_generators;
    Ok(serde_json::json!({
        "vertices": ia.lines.len(),
        "sigma_edges": ia.sigma_edges.len(),
        "idelta_is_zero_skeleton": zero_skeleton,
        "all_edges_sigma": all_edges_sigma,
        "relative_h1_free_of_edge_rank": h1_free_of_edge_rank,
        "alpha_hits_generators": alpha_generators,
        "passed": passed,
    }))
}

fn span_command(n: usize, q: u64, budget: usize, equivariance: usize) -> stb_core::Result<Report> {
    let group = enumerate_sp_fq(n, q, budget)?;
    let building = build_building(BuildingVariant::Full, n, q, budget)?;
    let span = apartment_span_fq(&group, &building)?;
    let mut equivariance_passed = true;
    if equivariance > 0 {
        use rand::{rngs::StdRng, Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(0x5742_5350);
        for _ in 0..equivariance {
            let s = &group[rng.gen_range(0..group.len())];
            let m = &group[rng.gen_range(0..group.len())];
            let lhs = stb_core::apartment::apartment_class_fq(&s.mul(m), &building)?;
            let rhs = stb_core::apartment::translate_building_chain(
                s,
                &building,
                &stb_core::apartment::apartment_class_fq(m, &building)?,
            );
            if lhs != rhs {
                equivariance_passed = false;
                break;
            }
        }
    }
    let passed = span.span_is_full_lattice && equivariance_passed;
    let mut results = serde_json::to_value(&span).expect("span serializes");
    results["equivariance_samples"] = serde_json::json!(equivariance);
    results["equivariance_passed"] = serde_json::json!(equivariance_passed);
    Ok(Report::new(
        "span",
        serde_json::json!({"n": n, "q": q}),
        results,
        Certification::Exact,
        passed,
    ))
}

fn reduce_command(from: &str, to: &str) -> stb_core::Result<Report> {
    let a = parse_cusp(from)?;
    let b = parse_cusp(to)?;
    let pairs = manin_reduce(a, b);
    let dets_ok = pairs
        .iter()
        .all(|&(x, y)| (x.p * y.q - x.q * y.p).abs() == 1);
    let telescopes = telescoping_holds(a, b, &pairs);
    let passed = dets_ok && telescopes;
    let symbols: Vec<serde_json::Value> = pairs
        .iter()
        .map(|(x, y)| serde_json::json!([x.label(), y.label()]))
        .collect();
    Ok(Report::new(
        "reduce",
        serde_json::json!({"from": a.label(), "to": b.label()}),
        serde_json::json!({
            "symbols": symbols,
            "count": pairs.len(),
            "determinants_unimodular": dets_ok,
            "telescoping": telescopes,
        }),
        Certification::Exact,
        passed,
    ))
}

fn cm_check_command(args: &CmCheckArgs) -> stb_core::Result<Report> {
    let (poset, default_d, name) = match args.poset.as_str() {
        "building" => {
            let n = args
                .n
                .ok_or_else(|| Error::Invalid("--n required".into()))?;
            let q = args
                .q
                .ok_or_else(|| Error::Invalid("--q required".into()))?;
            let b = build_building(BuildingVariant::Full, n, q, DEFAULT_BUDGET)?;
            (b.poset, n as i64 - 1, format!("building(n={n}, q={q})"))
        }
        "beta-boundary" => {
            let n = args
                .n
                .ok_or_else(|| Error::Invalid("--n required".into()))?;
            let complex = stb_core::apartment::boundary_beta(n);
            let (poset, _) = simplex_poset(&complex);
            (poset, n as i64 - 1, format!("beta-boundary(n={n})"))
        }
        "simplex-boundary" => {
            let k = args
                .k
                .ok_or_else(|| Error::Invalid("--k required".into()))?;
            let verts: Vec<usize> = (0..=k).collect();
            let complex =
                stb_core::topology::complex::SimplicialComplex::from_maximal(k + 1, &[verts]);
            // proper faces only: the face poset minus the top cell
            let (full, elements) = simplex_poset(&complex);
            let keep: Vec<usize> = (0..full.len())
                .filter(|&i| elements[i].len() <= k)
                .collect();
            (
                full.subposet(&keep),
                k as i64 - 1,
                format!("simplex-boundary(k={k})"),
            )
        }
        other => return Err(Error::Invalid(format!("unknown poset {other:?}"))),
    };
    let d = args.d.unwrap_or(default_d);
    let cm = cm_certificate(&poset, d);
    let passed = cm.passed;
    Ok(Report::new(
        "cm-check",
        serde_json::json!({"poset": name, "d": d}),
        serde_json::to_value(&cm).expect("cm serializes"),
        Certification::Homological,
        passed,
    ))
}

/// Full CLI entry: parse, run, report, map errors to exit codes
/// (0 pass, 1 verification failure, 2 usage, 3 budget).
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/errors itself; exit 0 for help, 2 otherwise
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let started = Instant::now();
    match execute(&cli.command, !cli.no_cache) {
        Ok(mut report) => {
            report.timing_ms = started.elapsed().as_millis();
            println!(
                "{}: {} [{}]",
                report.command,
                if report.passed { "PASS" } else { "FAIL" },
                report.certification_level.label()
            );
            println!(
                "{}",
                serde_json::to_string(&report.results).expect("results")
            );
            if let Some(path) = &cli.json {
                if let Err(e) = std::fs::write(path, report.to_json()) {
                    eprintln!("cannot write report: {e}");
                    return 2;
                }
            }
            if report.passed {
                0
            } else {
                1
            }
        }
        Err(Error::BudgetExceeded {
            what,
            count,
            budget,
        }) => {
            eprintln!("budget exceeded: {what} ({count} > {budget})");
            3
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
