//! Report assembly: executes the requested analyses in dependency order and
//! collects per-analysis results or errors without aborting the run.

use pfg_core::strictness::{decide_strict, extract_forms};
use pfg_core::torsion::{torsion_valuations, verify_derivation_kernel_exclusion, verify_tame_ramification};
use pfg_core::torsion::{DerivationKernelReport, TameTorsionReport, TorsionValuationReport};
use pfg_core::{AxiomReport, FormalGroupLaw, StrictnessVerdict};
use serde::Serialize;

use crate::spec::{Analysis, RunSpec};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum AnalysisResult<T: Serialize> {
    Ok(T),
    Error { message: String },
}

impl<T: Serialize> AnalysisResult<T> {
    fn from_result(r: pfg_core::Result<T>) -> Self {
        match r {
            Ok(v) => AnalysisResult::Ok(v),
            Err(e) => AnalysisResult::Error { message: e.to_string() },
        }
    }

    pub fn is_ok(&self) -> bool {
        matches!(self, AnalysisResult::Ok(_))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MulpAnalysis {
    pub multiplier: u64,
    pub series: Vec<String>,
    pub linear_part_is_p_identity: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct StrictAnalysis {
    pub verdict: StrictnessVerdict,
    pub forms: Vec<String>,
    pub forms_mod_p: Vec<String>,
    pub excluded_non_unit_monomials: Vec<usize>,
    pub imprecise_treated_non_unit: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TorsionAnalysis {
    pub valuations: TorsionValuationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tame_ramification: Option<TameTorsionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tame_ramification_error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Analyses {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axioms: Option<AnalysisResult<AxiomReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mulp: Option<AnalysisResult<MulpAnalysis>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strict: Option<AnalysisResult<StrictAnalysis>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub torsion: Option<AnalysisResult<TorsionAnalysis>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<AnalysisResult<DerivationKernelReport>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct PrimeInfo {
    pub p: u64,
    pub residue_degree: u32,
    pub precision: u32,
    pub trunc_degree: u32,
    /// The monic modulus lift fixing the unramified arithmetic (f > 1).
    pub unramified_modulus: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool: ToolInfo,
    pub spec: RunSpec,
    pub prime: PrimeInfo,
    pub analyses: Analyses,
    pub timing_ms: Option<u64>,
}

impl RunReport {
    pub fn all_requested_completed(&self) -> bool {
        self.analyses.axioms.as_ref().is_none_or(|r| r.is_ok())
            && self.analyses.mulp.as_ref().is_none_or(|r| r.is_ok())
            && self.analyses.strict.as_ref().is_none_or(|r| r.is_ok())
            && self.analyses.torsion.as_ref().is_none_or(|r| r.is_ok())
            && self.analyses.delta.as_ref().is_none_or(|r| r.is_ok())
    }
}

/// Executes the run. Build failures surface as the embedded error of every
/// requested analysis; analysis failures never abort later analyses.
pub fn run(spec: &RunSpec, with_timing: bool) -> RunReport {
    let start = std::time::Instant::now();
    let requested = spec.requested();
    let trunc = spec.effective_trunc();
    let mut analyses = Analyses {
        axioms: None,
        mulp: None,
        strict: None,
        torsion: None,
        delta: None,
    };

    let ctx = spec.context().expect("validated");
    let built: pfg_core::Result<FormalGroupLaw> = spec.group.build(&ctx, trunc);

    let mut tame_report_for_delta: Option<TameTorsionReport> = None;
    for analysis in &requested {
        match (analysis, &built) {
            (Analysis::Axioms, Ok(group)) => {
                analyses.axioms = Some(AnalysisResult::from_result(group.verify_axioms()));
            }
            (Analysis::Mulp, Ok(group)) => {
                analyses.mulp = Some(AnalysisResult::from_result(group.mul_by_p().map(|mp| {
                    MulpAnalysis {
                        multiplier: mp.multiplier(),
                        series: mp
                            .tuple()
                            .components()
                            .iter()
                            .map(|c| c.canonical_string())
                            .collect(),
                        linear_part_is_p_identity: true, // validated by construction
                    }
                })));
            }
            (Analysis::Strict, Ok(group)) => {
                let result = group.mul_by_p().and_then(|mp| extract_forms(&mp)).map(|fs| {
                    StrictAnalysis {
                        verdict: decide_strict(&fs),
                        forms: fs.forms_w().iter().map(|f| f.canonical_string()).collect(),
                        forms_mod_p: fs.forms_mod_p().iter().map(|g| g.to_string()).collect(),
                        excluded_non_unit_monomials: fs.excluded_non_unit.clone(),
                        imprecise_treated_non_unit: fs.imprecise_treated_non_unit.clone(),
                    }
                });
                analyses.strict = Some(AnalysisResult::from_result(result));
            }
            (Analysis::Torsion, Ok(group)) => {
                let result = torsion_valuations(group).map(|valuations| {
                    let (tame_ramification, tame_ramification_error) = if valuations.strictness.is_strict {
                        match verify_tame_ramification(group) {
                            Ok(rep) => (Some(rep), None),
                            Err(e) => (None, Some(e.to_string())),
                        }
                    } else {
                        (None, Some("group is not strict".to_string()))
                    };
                    tame_report_for_delta = tame_ramification.clone();
                    TorsionAnalysis { valuations, tame_ramification, tame_ramification_error }
                });
                analyses.torsion = Some(AnalysisResult::from_result(result));
            }
            (Analysis::Delta, Ok(group)) => {
                // reuse the torsion lift when it already ran
                let rep = match &tame_report_for_delta {
                    Some(rep) => Ok(rep.clone()),
                    None => verify_tame_ramification(group),
                };
                analyses.delta =
                    Some(AnalysisResult::from_result(rep.and_then(|r| verify_derivation_kernel_exclusion(&r))));
            }
            (Analysis::All, _) => unreachable!("expanded by requested()"),
            (a, Err(e)) => {
                let msg = format!("group construction failed: {e}");
                fn err<T: Serialize>(msg: &str) -> AnalysisResult<T> {
                    AnalysisResult::Error { message: msg.to_string() }
                }
                match a {
                    Analysis::Axioms => analyses.axioms = Some(err(&msg)),
                    Analysis::Mulp => analyses.mulp = Some(err(&msg)),
                    Analysis::Strict => analyses.strict = Some(err(&msg)),
                    Analysis::Torsion => analyses.torsion = Some(err(&msg)),
                    Analysis::Delta => analyses.delta = Some(err(&msg)),
                    Analysis::All => unreachable!(),
                }
            }
        }
    }

    RunReport {
        schema_version: SCHEMA_VERSION,
        tool: ToolInfo {
            name: "pfg",
            version: env!("CARGO_PKG_VERSION"),
        },
        spec: spec.clone(),
        prime: PrimeInfo {
            p: spec.p,
            residue_degree: spec.residue_degree,
            precision: spec.precision,
            trunc_degree: trunc,
            unramified_modulus: ctx.modulus_description(),
        },
        analyses,
        timing_ms: with_timing.then(|| start.elapsed().as_millis() as u64),
    }
}

pub fn emit_json(report: &RunReport) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("report serializes");
    out.push('\n');
    out
}

/// A lossy human-readable view of the report.
pub fn emit_table(report: &RunReport) -> String {
    let mut lines = Vec::new();
    lines.push(format!(
        "group {}  p={} f={} N={} D={}",
        group_name(&report.spec.group),
        report.prime.p,
        report.prime.residue_degree,
        report.prime.precision,
        report.prime.trunc_degree
    ));
    if let Some(m) = &report.prime.unramified_modulus {
        lines.push(format!("  unramified modulus: {m}"));
    }
    if let Some(r) = &report.analyses.axioms {
        lines.push(match r {
            AnalysisResult::Ok(a) => format!(
                "axioms   unit={} commutative={} associative={}",
                a.unit_laws, a.commutative, a.associative
            ),
            AnalysisResult::Error { message } => format!("axioms   ERROR {message}"),
        });
    }
    if let Some(r) = &report.analyses.mulp {
        lines.push(match r {
            AnalysisResult::Ok(a) => {
                let mut s = format!("[{}]      ", a.multiplier);
                s.push_str(&a.series.join("  |  "));
                s
            }
            AnalysisResult::Error { message } => format!("[p]      ERROR {message}"),
        });
    }
    if let Some(r) = &report.analyses.strict {
        lines.push(match r {
            AnalysisResult::Ok(a) => format!(
                "strict   {}  degrees={:?}  method={}  reason={:?}{}",
                a.verdict.is_strict,
                a.verdict.degrees,
                a.verdict
                    .method
                    .map(|m| format!("{m:?}"))
                    .unwrap_or_else(|| "-".into()),
                a.verdict.reason,
                a.verdict
                    .determinant
                    .as_ref()
                    .map(|d| format!("  det={d}"))
                    .unwrap_or_default()
            ),
            AnalysisResult::Error { message } => format!("strict   ERROR {message}"),
        });
    }
    if let Some(r) = &report.analyses.torsion {
        match r {
            AnalysisResult::Ok(a) => {
                for comp in &a.valuations.components {
                    let vals: Vec<String> = comp
                        .valuations
                        .iter()
                        .map(|s| format!("{} (x{})", s.slope, s.length))
                        .collect();
                    lines.push(format!(
                        "torsion  component {} slopes: {}",
                        comp.component,
                        vals.join(", ")
                    ));
                }
                if let (Some(e), Some(tame)) = (a.valuations.e_pred, a.valuations.tame) {
                    lines.push(format!(
                        "torsion  e = {e}, {}{}",
                        if tame { "tame" } else { "wild" },
                        if a.valuations.predicted_unverified {
                            " (predicted, unverified)"
                        } else {
                            ""
                        }
                    ));
                }
                if let Some(tb) = &a.tame_ramification {
                    lines.push(format!(
                        "torsion  extension {}  root {}  residual {} (bound {})",
                        tb.extension,
                        tb.lift.root_display,
                        tb.lift.residual,
                        tb.lift.residual_bound
                    ));
                }
            }
            AnalysisResult::Error { message } => lines.push(format!("torsion  ERROR {message}")),
        }
    }
    if let Some(r) = &report.analyses.delta {
        lines.push(match r {
            AnalysisResult::Ok(a) => format!(
                "delta    v(D)={}  negative-delta coordinate on every witness: {}  uniformizer delta = -v(D): {}",
                a.v_different,
                a.every_witness_has_negative_delta,
                a.uniformizer_delta_matches_different
            ),
            AnalysisResult::Error { message } => format!("delta    ERROR {message}"),
        });
    }
    if let Some(ms) = report.timing_ms {
        lines.push(format!("elapsed  {ms} ms"));
    }
    lines.join("\n") + "\n"
}

fn group_name(g: &crate::spec::GroupSpec) -> String {
    use crate::spec::GroupSpec::*;
    match g {
        Multiplicative => "multiplicative".into(),
        Additive => "additive".into(),
        LubinTate { height } => format!("lubin_tate(h={height})"),
        Elliptic { a } => format!("elliptic{a:?}"),
        EllipticShort { a4, a6 } => format!("elliptic(y^2 = x^3 + {a4}x + {a6})"),
        Product { children } => {
            let names: Vec<String> = children.iter().map(group_name).collect();
            format!("product[{}]", names.join(", "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(text: &str) -> RunSpec {
        RunSpec::parse(text).unwrap()
    }

    #[test]
    fn multiplicative_all_report() {
        let s = spec(
            r#"{"p": 3, "precision": 8, "group": {"kind": "multiplicative"}, "analyses": ["all"]}"#,
        );
        let rep = run(&s, false);
        assert!(rep.all_requested_completed());
        match rep.analyses.torsion.as_ref().unwrap() {
            AnalysisResult::Ok(t) => {
                assert_eq!(t.valuations.e_pred, Some(2));
                assert!(t.tame_ramification.is_some());
            }
            AnalysisResult::Error { message } => panic!("torsion failed: {message}"),
        }
        assert!(rep.timing_ms.is_none());
    }

    #[test]
    fn additive_strict_embeds_the_error() {
        let s = spec(
            r#"{"p": 3, "precision": 8, "group": {"kind": "additive"}, "analyses": ["strict"]}"#,
        );
        let rep = run(&s, false);
        assert!(!rep.all_requested_completed());
        match rep.analyses.strict.as_ref().unwrap() {
            AnalysisResult::Error { message } => {
                assert!(message.contains("no unit-coefficient monomial"), "{message}");
            }
            _ => panic!("expected embedded error"),
        }
    }

    #[test]
    fn mixed_height_product_is_not_strict_but_completes() {
        let s = spec(
            r#"{"p": 3, "precision": 8,
                "group": {"kind": "product", "children": [
                    {"kind": "lubin_tate", "height": 1},
                    {"kind": "lubin_tate", "height": 2}]},
                "analyses": ["strict"]}"#,
        );
        let rep = run(&s, false);
        assert!(rep.all_requested_completed());
        match rep.analyses.strict.as_ref().unwrap() {
            AnalysisResult::Ok(a) => {
                assert!(!a.verdict.is_strict);
                assert_eq!(a.verdict.degrees, vec![3, 9]);
            }
            _ => panic!("strict analysis should complete"),
        }
    }

    #[test]
    fn reports_are_byte_deterministic() {
        let s = spec(
            r#"{"p": 3, "precision": 8, "group": {"kind": "lubin_tate", "height": 2}, "analyses": ["all"]}"#,
        );
        let a = emit_json(&run(&s, false));
        let b = emit_json(&run(&s, false));
        assert_eq!(a, b);
    }

    #[test]
    fn empty_analysis_list_echoes_the_spec() {
        let s = spec(r#"{"p": 5, "precision": 6, "group": {"kind": "additive"}, "analyses": []}"#);
        let rep = run(&s, false);
        assert!(rep.analyses.axioms.is_none());
        assert!(rep.all_requested_completed());
        let json = emit_json(&rep);
        assert!(json.contains("\"schema_version\": 1"));
    }
}
