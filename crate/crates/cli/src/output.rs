//! Report documents and their renderers. Every subcommand builds one
//! serializable document; the text and JSON renderings are two views of the
//! same data, so nothing is available in one format but not the other.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;

use orbiteq_core::func::LocallyConstantZFunction;
use orbiteq_core::io::render_word;
use orbiteq_core::point::UltimatelyPeriodicPoint;
use orbiteq_core::tableau::TableauElement;
use orbiteq_core::transducer::EqualityOutcome;
use orbiteq_core::{
    verify_coe_equations, CoeData, HomeoCertificate, HomeoVerification, Relation, RelationReport,
    TransitionMatrix,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

pub(crate) fn json_doc<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports are serializable");
    s.push('\n');
    s
}

/// `pre(cyc)*` with the word conventions of the file formats.
fn fmt_point(p: &UltimatelyPeriodicPoint, n: usize) -> String {
    let cycle = format!("({})*", render_word(p.cycle(), n));
    if p.preperiod().is_empty() {
        cycle
    } else {
        format!("{}{cycle}", render_word(p.preperiod(), n))
    }
}

// ---------------------------------------------------------------- invariants

const INVARIANT_ORDER: [&str; 11] = [
    "det_id_minus",
    "charpoly",
    "charpoly_essential",
    "k0_factors",
    "k0_free_rank",
    "k0_unit",
    "k1_rank",
    "dimgroup_rank",
    "dimgroup_lambda",
    "dimgroup_weights",
    "dimgroup_unit",
];

pub fn render_invariants(report: &BTreeMap<String, String>, format: Format) -> String {
    match format {
        Format::Json => json_doc(report),
        Format::Text => {
            let width = report.keys().map(String::len).max().unwrap_or(0);
            let mut out = String::new();
            for key in INVARIANT_ORDER {
                if let Some(v) = report.get(key) {
                    let _ = writeln!(out, "{key:<width$}  {v}");
                }
            }
            for (key, v) in report {
                if !INVARIANT_ORDER.contains(&key.as_str()) {
                    let _ = writeln!(out, "{key:<width$}  {v}");
                }
            }
            out
        }
    }
}

// ------------------------------------------------------------ classification

pub fn render_classification(report: &RelationReport, format: Format) -> String {
    match format {
        Format::Json => json_doc(report),
        Format::Text => {
            let mut out = String::new();
            for r in Relation::all() {
                let v = report.verdict(r);
                let _ = writeln!(out, "{}: {}", r.key(), v.status);
                for line in &v.evidence {
                    let _ = writeln!(out, "  - {line}");
                }
            }
            if !report.notes.is_empty() {
                out.push_str("notes:\n");
                for line in &report.notes {
                    let _ = writeln!(out, "  - {line}");
                }
            }
            out
        }
    }
}

// -------------------------------------------------------------- full group

#[derive(Serialize)]
struct TableauPairJson {
    source: String,
    target: String,
}

#[derive(Serialize)]
pub struct TableauDoc {
    n: usize,
    pairs: Vec<TableauPairJson>,
    #[serde(skip)]
    text: String,
}

impl TableauDoc {
    pub fn from_element(t: &TableauElement) -> TableauDoc {
        let n = t.matrix().n();
        TableauDoc {
            n,
            pairs: t
                .pairs()
                .iter()
                .map(|(s, d)| TableauPairJson {
                    source: render_word(s, n),
                    target: render_word(d, n),
                })
                .collect(),
            text: orbiteq_core::io::render_tableau(t),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => json_doc(self),
        }
    }
}

#[derive(Serialize)]
pub struct FunctionJson {
    depth: usize,
    constant: Option<i64>,
    table: BTreeMap<String, i64>,
}

impl FunctionJson {
    fn new(f: &LocallyConstantZFunction, m: &TransitionMatrix) -> FunctionJson {
        FunctionJson {
            depth: f.depth(),
            constant: f.as_constant(),
            table: f
                .table(m)
                .into_iter()
                .map(|(w, v)| (render_word(&w, m.n()), v))
                .collect(),
        }
    }
}

pub fn render_cocycle(f: &LocallyConstantZFunction, m: &TransitionMatrix, format: Format) -> String {
    match format {
        Format::Text => orbiteq_core::io::render_function(f, m),
        Format::Json => json_doc(&FunctionJson::new(f, m)),
    }
}

#[derive(Serialize)]
struct IsAfJson {
    af: bool,
    least_lag: Option<usize>,
}

pub fn render_is_af(result: Option<usize>, format: Format) -> String {
    match format {
        Format::Json => json_doc(&IsAfJson {
            af: result.is_some(),
            least_lag: result,
        }),
        Format::Text => match result {
            Some(k) => format!("af: yes\nleast lag K: {k}\n"),
            None => "af: no\n".into(),
        },
    }
}

// ------------------------------------------------------------- certificates

#[derive(Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum CertificateDoc {
    Failed {
        on_source: bool,
        kind: &'static str,
        point: String,
    },
    Verified {
        equations_hold: bool,
        k1: FunctionJson,
        l1: FunctionJson,
        k2: FunctionJson,
        l2: FunctionJson,
        c1: FunctionJson,
        c2: FunctionJson,
        #[serde(skip)]
        text_tables: Vec<(&'static str, String)>,
    },
    Inconclusive {
        on_source: bool,
        cylinder: String,
        search_bound: usize,
    },
}

impl CertificateDoc {
    pub fn failed(cert: &HomeoCertificate, v: &HomeoVerification) -> CertificateDoc {
        let HomeoVerification::Failed { on_source, detail } = v else {
            unreachable!("failed() is only called on failed verifications");
        };
        let n = if *on_source {
            cert.source().n()
        } else {
            cert.target().n()
        };
        let (kind, point) = match detail {
            EqualityOutcome::Distinct { witness } => ("distinct", fmt_point(witness, n)),
            EqualityOutcome::RateDivergence { input } => ("rate_divergence", fmt_point(input, n)),
            EqualityOutcome::Equal => unreachable!("failure carries a non-equal outcome"),
        };
        CertificateDoc::Failed {
            on_source: *on_source,
            kind,
            point,
        }
    }

    pub fn verified(cert: &HomeoCertificate, data: &CoeData) -> CertificateDoc {
        let ma = cert.source();
        let mb = cert.target();
        let render = |name, f, m| (name, orbiteq_core::io::render_function(f, m));
        CertificateDoc::Verified {
            equations_hold: verify_coe_equations(cert, data),
            k1: FunctionJson::new(&data.k1, ma),
            l1: FunctionJson::new(&data.l1, ma),
            k2: FunctionJson::new(&data.k2, mb),
            l2: FunctionJson::new(&data.l2, mb),
            c1: FunctionJson::new(&data.c1, ma),
            c2: FunctionJson::new(&data.c2, mb),
            text_tables: vec![
                render("k1", &data.k1, ma),
                render("l1", &data.l1, ma),
                render("k2", &data.k2, mb),
                render("l2", &data.l2, mb),
                render("c1", &data.c1, ma),
                render("c2", &data.c2, mb),
            ],
        }
    }

    pub fn inconclusive(
        cert: &HomeoCertificate,
        on_source: bool,
        cylinder: &[orbiteq_core::Symbol],
        search_bound: usize,
    ) -> CertificateDoc {
        let n = if on_source {
            cert.source().n()
        } else {
            cert.target().n()
        };
        CertificateDoc::Inconclusive {
            on_source,
            cylinder: render_word(cylinder, n),
            search_bound,
        }
    }
}

fn side_name(on_source: bool) -> &'static str {
    if on_source {
        "source"
    } else {
        "target"
    }
}

pub fn render_verification(doc: &CertificateDoc, format: Format) -> String {
    match format {
        Format::Json => json_doc(doc),
        Format::Text => match doc {
            CertificateDoc::Failed {
                on_source,
                kind,
                point,
            } => {
                let side = side_name(*on_source);
                match *kind {
                    "distinct" => format!(
                        "homeomorphism: FAILED\nthe round trip on the {side} is not the identity\nseparating point: {point}\n"
                    ),
                    _ => format!(
                        "homeomorphism: FAILED\nthe round trip on the {side} emits at a different rate than the identity\nalong input: {point}\n"
                    ),
                }
            }
            CertificateDoc::Verified {
                equations_hold,
                text_tables,
                ..
            } => {
                let mut out = String::from("homeomorphism: verified\n");
                let _ = writeln!(
                    out,
                    "orbit equations: {}",
                    if *equations_hold { "verified" } else { "FAILED" }
                );
                for (name, table) in text_tables {
                    let _ = writeln!(out, "\n{name}:");
                    out.push_str(table);
                }
                out
            }
            CertificateDoc::Inconclusive {
                on_source,
                cylinder,
                search_bound,
            } => format!(
                "homeomorphism: verified\norbit data: inconclusive on the {} cylinder [{cylinder}] with constants up to {search_bound}\n",
                side_name(*on_source)
            ),
        },
    }
}
