//! Command pipelines behind the `wreath` binary. Each returns a [`Report`], a
//! short human summary and the process exit code.

use std::path::Path;
use std::time::Instant;

use serde_json::{json, Value};
use wreath_core::abelian::AbelianSpec;
use wreath_core::finite::automorphisms::{
    aut_brute_wreath, aut_order_formula, decomposition_hypotheses, iso_group_exhaustive, out_order, AutFormula,
    FiniteWreath, HypothesisCheck, OutFormula,
};
use wreath_core::finite::cohomology::derivations_h1;
use wreath_core::finite::intertwiner::commutant_dimension;
use wreath_core::finite::theorem_b::theorem_b_report;
use wreath_core::finite::{bundled_action, FiniteAction};
use wreath_core::induced::{build_theta, verify_counterexample};
use wreath_core::linalg::{PrimeField, Rationals};
use wreath_core::report::Report;
use wreath_core::scalar::Ring;
use wreath_core::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CERTIFICATE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BOUND: i32 = 3;

/// Module size up to which `Iso_{ℤB}(AX)` is also enumerated exhaustively.
const ISO_EXHAUSTIVE_LIMIT: u128 = 4096;

pub const HOMOMORPHISM_SAMPLES: usize = 500;
pub const PREIMAGE_SAMPLES: usize = 200;

#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub summary: String,
    pub exit: i32,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BoundExceeded { .. } => EXIT_BOUND,
        _ => EXIT_INPUT,
    }
}

pub fn parse_ring(name: &str, m: u64) -> Result<Ring> {
    match name {
        "Q" => Ok(Ring::Rational),
        "Zm" => Ring::modular(m),
        other => Err(Error::InvalidParameter(format!("unknown ring {other:?}; expected Q or Zm"))),
    }
}

pub fn verify_counterexample_cmd(m: u64, ring: &str, seed: u64) -> Result<Outcome> {
    let start = Instant::now();
    if m < 2 {
        return Err(Error::InvalidParameter(format!("--m must be at least 2, got {m}")));
    }
    let ring = parse_ring(ring, m)?;
    let mut report = Report::new([
        "verify-counterexample".to_string(),
        format!("--m={m}"),
        format!("--ring={ring}"),
        format!("--seed={seed}"),
    ]);

    let cert = verify_counterexample(m, ring)?;
    let theta = build_theta(m)?;
    let hom = theta.spot_check_homomorphism(HOMOMORPHISM_SAMPLES, seed)?;
    let pre = theta.spot_check_preimages(PREIMAGE_SAMPLES, seed.wrapping_add(1))?;
    let generators = theta.check_generator_identities()?;
    let witness = theta.kernel_witness()?;
    let wr = theta.wreath();
    let witness_nontrivial = !wr.is_identity(&witness);
    let witness_killed = wr.is_identity(&theta.apply(&witness)?);

    report.result("left_inverse", cert.left_inverse);
    report.result("right_inverse", cert.right_inverse);
    report.result("beta_alpha_support", cert.beta_alpha_support);
    report.result("annihilator_certificate", cert.annihilator_certificate);
    report.result("homomorphism_checks", json!({"samples": hom.samples, "failures": hom.failures}));
    report.result("preimage_checks", json!({"samples": pre.samples, "failures": pre.failures}));
    report.result("generator_identities", generators);
    report.result("kernel_witness_nontrivial", witness_nontrivial);
    report.result("theta_kills_witness", witness_killed);
    report.certificate("alpha_beta_v", &cert.alpha_beta_v);
    report.certificate("beta_alpha_v", &cert.beta_alpha_v);
    report.certificate("distinguishing_vector", &cert.distinguishing_vector);
    report.certificate("kernel_witness", format!("({}, {})", witness.mv, witness.b));

    let end_ok = cert.left_inverse && !cert.right_inverse && cert.beta_alpha_support == (m + 1) as usize;
    let theta_ok = hom.passed() && pre.passed() && generators && witness_nontrivial && witness_killed;
    report.verdict(
        "directly_finite",
        !end_ok,
        vec![
            "(1/(m+1)) alpha beta = id".into(),
            format!("beta alpha (v) has support {} != 1", cert.beta_alpha_support),
        ],
    );
    report.verdict(
        "hopfian",
        !(end_ok && theta_ok),
        vec![
            format!("theta passed {} homomorphism checks", hom.samples - hom.failures),
            format!("theta has a preimage for {} sampled elements", pre.samples - pre.failures),
            "theta kills the nontrivial element (beta alpha (v)/(m+1) - v, 1)".into(),
        ],
    );
    report.timing_ms = start.elapsed().as_millis() as u64;

    let exit = if end_ok && theta_ok { EXIT_OK } else { EXIT_CERTIFICATE };
    let summary = format!(
        "m = {m} over {}: alpha/(m+1) left inverse of beta: {}; right inverse: {}; \
         theta onto (sampled) and kills a nontrivial element: {}\nresult: {}",
        cert.ring,
        cert.left_inverse,
        cert.right_inverse,
        theta_ok,
        if exit == EXIT_OK { "certificates hold" } else { "CERTIFICATE FAILURE" }
    );
    Ok(Outcome { report, summary, exit })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiniteCommand {
    Analyze,
    Aut,
    H1,
    Endring,
}

impl FiniteCommand {
    fn name(self) -> &'static str {
        match self {
            FiniteCommand::Analyze => "analyze",
            FiniteCommand::Aut => "aut",
            FiniteCommand::H1 => "h1",
            FiniteCommand::Endring => "endring",
        }
    }
}

/// A group file, or the name of a bundled action when no such file exists.
pub fn load_action(spec: &str) -> Result<FiniteAction> {
    let path = Path::new(spec);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::parse(0, format!("{spec}: {e}")))?;
        return FiniteAction::parse(&text);
    }
    bundled_action(spec).ok_or_else(|| Error::parse(0, format!("{spec}: no such file or bundled action")))
}

pub struct FiniteArgs<'a> {
    pub group: &'a str,
    pub coeff: &'a str,
    pub seed: u64,
    pub max_aut_order: usize,
}

pub fn finite_cmd(cmd: FiniteCommand, args: &FiniteArgs) -> Result<Outcome> {
    let start = Instant::now();
    let action = load_action(args.group)?;
    let coeff = AbelianSpec::parse(args.coeff)?;
    let mut report = Report::new([
        "finite".to_string(),
        cmd.name().to_string(),
        format!("--group={}", args.group),
        format!("--coeff={}", args.coeff),
        format!("--seed={}", args.seed),
        format!("--max-aut-order={}", args.max_aut_order),
    ]);
    let auts_b = action.group().aut_brute(usize::MAX)?;
    report.hypotheses = decomposition_hypotheses(&action, &coeff, &auts_b);
    let data = action.orbits_stabs();
    report.result("group_order", action.group().order());
    report.result("points", action.num_points());
    report.result("coefficients", coeff.invariants());
    report.result("orbits", &data.orbits);
    report.result("kernel", &data.kernel);
    report.result("aut_b", auts_b.len());

    let mut summary = vec![format!(
        "|B| = {}, |X| = {}, {} orbit(s), A = {}",
        action.group().order(),
        action.num_points(),
        data.orbits.len(),
        describe_coeff(&coeff)
    )];
    for h in &report.hypotheses {
        summary.push(format!("condition {}: {} ({})", h.condition, if h.holds { "holds" } else { "fails" }, h.description));
    }
    let mut exit = EXIT_OK;

    if matches!(cmd, FiniteCommand::Analyze | FiniteCommand::Endring) {
        exit = worst(exit, endring_section(&action, &coeff, args.seed, &mut report, &mut summary)?);
    }
    if matches!(cmd, FiniteCommand::Analyze | FiniteCommand::H1) {
        exit = worst(exit, h1_section(&action, &coeff, &mut report, &mut summary)?);
    }
    if matches!(cmd, FiniteCommand::Analyze | FiniteCommand::Aut) {
        exit = worst(exit, aut_section(&action, &coeff, args.max_aut_order, &mut report, &mut summary)?);
    }
    report.timing_ms = start.elapsed().as_millis() as u64;
    Ok(Outcome {
        report,
        summary: summary.join("\n"),
        exit,
    })
}

/// Certificate failures take precedence over a bound being exceeded.
fn worst(a: i32, b: i32) -> i32 {
    if a == EXIT_CERTIFICATE || b == EXIT_CERTIFICATE {
        EXIT_CERTIFICATE
    } else {
        a.max(b)
    }
}

fn describe_coeff(coeff: &AbelianSpec) -> String {
    if coeff.is_trivial() {
        return "0".into();
    }
    let parts: Vec<String> = coeff
        .invariants()
        .iter()
        .map(|&d| if d == 0 { "Z".to_string() } else { format!("Z/{d}") })
        .collect();
    parts.join(" + ")
}

fn holding(hyps: &[HypothesisCheck]) -> Vec<String> {
    hyps.iter()
        .filter(|h| h.holds)
        .map(|h| format!("condition {}: {}", h.condition, h.description))
        .collect()
}

fn endring_section(
    action: &FiniteAction,
    coeff: &AbelianSpec,
    seed: u64,
    report: &mut Report,
    summary: &mut Vec<String>,
) -> Result<i32> {
    let burnside = action.burnside_pair_count();
    report.result("burnside_pairs", burnside);
    let mut dims_match = true;
    for p in coeff.torsion_primes() {
        let dim = commutant_dimension(&PrimeField::new(p)?, action);
        dims_match &= dim == burnside;
        report.result(&format!("end_dim_p{p}"), dim);
        summary.push(format!("dim End(F_{p} X) = {dim}"));
    }
    let dim_q = commutant_dimension(&Rationals, action);
    dims_match &= dim_q == burnside;
    report.result("end_dim_q", dim_q);
    report.certificate("end_dims_match_burnside", dims_match);

    let tb = theorem_b_report(action, coeff, seed)?;
    report.result("lundstrom", &tb.lundstrom);
    report.result(
        "ranks",
        tb.ranks
            .iter()
            .map(|r| json!({"prime": r.prime, "n": r.multiplicity, "end_dim": r.end_dim}))
            .collect::<Vec<_>>(),
    );
    report.certificate("probes", tb.ranks.iter().map(|r| &r.probe).collect::<Vec<_>>());
    let violations: usize = tb.ranks.iter().map(|r| r.probe.violations).sum();
    report.result("probe_violations", violations);
    report.verdict("hopfian", tb.verdict.hopfian, tb.verdict.licensed_by.clone());
    summary.push(format!(
        "matrix-ring probes: {} violation(s); Hopfian: {}",
        violations, tb.verdict.hopfian
    ));
    Ok(if dims_match && tb.probes_consistent { EXIT_OK } else { EXIT_CERTIFICATE })
}

fn h1_section(action: &FiniteAction, coeff: &AbelianSpec, report: &mut Report, summary: &mut Vec<String>) -> Result<i32> {
    let h1 = derivations_h1(action, coeff)?;
    report.result("der_size", h1.der_size);
    report.result("pder_size", h1.pder_size);
    report.result("h1_size", h1.h1_size);
    report.result("h1_free_rank", h1.h1_free_rank);
    report.result("h1_components", &h1.components);
    let cross = h1.components.iter().all(|c| c.pder_cross_check);
    report.certificate("pder_cross_check", cross);
    summary.push(format!(
        "|Der| = {}, |PDer| = {}, |H1| = {} (torsion part), free rank {}",
        h1.der_size, h1.pder_size, h1.h1_size, h1.h1_free_rank
    ));
    Ok(if cross { EXIT_OK } else { EXIT_CERTIFICATE })
}

fn aut_section(
    action: &FiniteAction,
    coeff: &AbelianSpec,
    bound: usize,
    report: &mut Report,
    summary: &mut Vec<String>,
) -> Result<i32> {
    let mut exit = EXIT_OK;
    let formula: Option<AutFormula> = match aut_order_formula(action, coeff) {
        Ok(f) => Some(f),
        Err(e @ (Error::HypothesisFailed { .. } | Error::InfiniteCoefficients)) => {
            report.result("aut_formula_unavailable", e.to_string());
            None
        }
        Err(e @ Error::BoundExceeded { .. }) => {
            report.result("aut_formula_unavailable", e.to_string());
            exit = EXIT_BOUND;
            None
        }
        Err(e) => return Err(e),
    };
    let out: Option<OutFormula> = match &formula {
        Some(_) => Some(out_order(action, coeff)?),
        None => None,
    };
    report.result("aut_formula", formula.as_ref().map(|f| f.order));
    report.result(
        "aut_formula_factors",
        formula.as_ref().map(|f| json!({"der": f.der, "iso": f.iso, "aut_b": f.aut_b})),
    );
    report.result("out_formula", out.as_ref().map(|o| o.order));
    report.result(
        "out_formula_factors",
        out.as_ref().map(|o| {
            json!({"h1": o.h1, "iso": o.iso, "delta_center": o.delta_center, "iso_mod_delta": o.iso_mod_delta, "out_b": o.out_b})
        }),
    );

    let mut brute = Value::Null;
    let mut out_brute = Value::Null;
    let mut verified = false;
    if coeff.is_finite() {
        match FiniteWreath::new(action.clone(), coeff.clone()) {
            Ok(w) if w.order() <= bound => {
                let b = aut_brute_wreath(&w, bound)?;
                brute = json!(b.aut);
                out_brute = json!(b.out);
                report.result("g_order", b.group_order);
                report.result("center_order", b.center);
                report.result("inn_order", b.inn);
                report.result("aut_brute_base_preserving", b.base_preserving);
                if (w.module_size() as u128) <= ISO_EXHAUSTIVE_LIMIT {
                    if let Some(f) = &formula {
                        let iso = iso_group_exhaustive(action, coeff)?.len() as u128;
                        report.certificate("iso_exhaustive_matches", iso == f.iso);
                        if iso != f.iso {
                            exit = EXIT_CERTIFICATE;
                        }
                    }
                }
                if let (Some(f), Some(o)) = (&formula, &out) {
                    let aut_ok = f.order == b.aut as u128;
                    let out_ok = o.order == b.out as u128;
                    report.verdict("aut_formula_matches_brute", aut_ok, holding(&f.hypotheses));
                    report.verdict("out_formula_matches_brute", out_ok, holding(&f.hypotheses));
                    report.verdict(
                        "aut_formula_matches_base_preserving",
                        f.order == b.base_preserving as u128,
                        holding(&f.hypotheses),
                    );
                    if !aut_ok {
                        summary.push(format!(
                            "formula disagrees with brute force; {} of {} automorphisms preserve the base AX",
                            b.base_preserving, b.aut
                        ));
                    }
                    verified = aut_ok && out_ok;
                    if !verified {
                        exit = EXIT_CERTIFICATE;
                    }
                }
            }
            Ok(w) => {
                report.result("g_order", w.order());
                report.result("bound_exceeded", true);
                exit = worst(exit, EXIT_BOUND);
            }
            Err(Error::BoundExceeded { .. }) => {
                report.result("bound_exceeded", true);
                exit = worst(exit, EXIT_BOUND);
            }
            Err(e) => return Err(e),
        }
    }
    report.result("aut_brute", brute.clone());
    report.result("out_brute", out_brute);
    report.result("aut_formula_verified", verified);
    summary.push(format!(
        "|Aut(G)|: formula {}, brute force {}",
        formula.as_ref().map_or("n/a".to_string(), |f| f.order.to_string()),
        if brute.is_null() { "n/a".to_string() } else { brute.to_string() }
    ));
    Ok(exit)
}
