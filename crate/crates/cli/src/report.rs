//! The report document and its text rendering. JSON is the stable surface;
//! the text form is for people and drops detail.

use std::fmt::Write as _;

use nsgrade::derivation::CorollaryCase;
use nsgrade::magma::{
    replay_certificate, EmbeddabilityVerdict, EmbeddingCertificate, PartialMagma,
};
use serde::{Deserialize, Serialize};

use crate::formats::{magma_to_file, MagmaFile, MatrixFile};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    /// `pass`, `fail` or `error`.
    pub status: String,
    pub exit_code: i32,
    pub message: Option<String>,
    pub input: Option<InputSummary>,
    pub identities: Vec<IdentityResult>,
    pub problem: Option<ProblemSummary>,
    pub derivations: Option<DerivationSection>,
    pub closed_form: Option<ClosedFormSection>,
    pub map: Option<MapSection>,
    pub decomposition: Option<DecompositionSection>,
    pub grading: Option<GradingSection>,
    pub witness: Option<WitnessSection>,
    pub embeddability: Option<VerdictSection>,
    pub steps: Vec<Step>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            status: "pass".to_string(),
            exit_code: 0,
            message: None,
            input: None,
            identities: Vec::new(),
            problem: None,
            derivations: None,
            closed_form: None,
            map: None,
            decomposition: None,
            grading: None,
            witness: None,
            embeddability: None,
            steps: Vec::new(),
        }
    }

    pub fn fail(&mut self, message: impl Into<String>) {
        self.status = "fail".to_string();
        self.exit_code = 1;
        self.message = Some(message.into());
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputSummary {
    /// `algebra`, `family`, `magma` or `builtin`.
    pub kind: String,
    pub source: String,
    pub dim: Option<usize>,
    pub basis: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityResult {
    pub identity: String,
    pub pass: bool,
    /// Basis labels where the identity fails.
    pub witness: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSummary {
    pub delta: String,
    pub gamma: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationSection {
    pub dimension: usize,
    pub basis: Vec<MatrixFile>,
    /// Every basis map re-substituted into the defining equation.
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedFormSection {
    pub applicable: bool,
    pub reason: Option<String>,
    pub dimension: Option<usize>,
    pub matches_generic: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapSection {
    pub matrix: MatrixFile,
    pub is_derivation: bool,
    /// First basis pair violating the defining equation.
    pub defect: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionSection {
    pub characteristic_polynomial: String,
    /// Factor without rational roots, when the spectrum is not rational.
    pub residual: Option<String>,
    pub components: Vec<ComponentSection>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSection {
    pub weight: String,
    pub dim: usize,
    pub basis: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub left: String,
    pub right: String,
    pub result: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingSection {
    pub weights: Vec<String>,
    pub table: Vec<TableEntry>,
    pub weight_formula_holds: bool,
    pub weight_formula_violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSection {
    pub lambda: String,
    pub eta: String,
    pub mu: String,
    pub theta: String,
    pub xi: String,
    pub left: String,
    pub right: String,
    pub corollary: CorollaryCase,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictSection {
    pub magma: MagmaFile,
    pub verdict: EmbeddabilityVerdict,
    /// `valid`, or the replay failure.
    pub replay: String,
    /// Words of the identification trace, for reading.
    pub trace_words: Option<Vec<String>>,
}

impl VerdictSection {
    pub fn new(m: &PartialMagma, verdict: EmbeddabilityVerdict) -> Self {
        let replay = match replay_certificate(m, &verdict) {
            Ok(()) => "valid".to_string(),
            Err(e) => format!("invalid: {e}"),
        };
        let trace_words = match &verdict {
            EmbeddabilityVerdict::NotEmbeddable { trace, .. } => {
                Some(trace.words().iter().map(|w| m.format_word(w)).collect())
            }
            _ => None,
        };
        VerdictSection {
            magma: magma_to_file(m),
            verdict,
            replay,
            trace_words,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn render_matrix(out: &mut String, indent: &str, m: &MatrixFile) {
    let width = m.data.iter().map(String::len).max().unwrap_or(1);
    for r in 0..m.rows {
        let row: Vec<String> = (0..m.cols)
            .map(|c| format!("{:>width$}", m.data[r * m.cols + c]))
            .collect();
        let _ = writeln!(out, "{indent}[{}]", row.join(" "));
    }
}

pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}: {}", r.command, r.status);
    if let Some(msg) = &r.message {
        let _ = writeln!(out, "  {msg}");
    }
    if let Some(i) = &r.input {
        match i.dim {
            Some(d) => {
                let _ = writeln!(
                    out,
                    "input: {} ({}), dimension {d}, basis {}",
                    i.source,
                    i.kind,
                    i.basis.join(" ")
                );
            }
            None => {
                let _ = writeln!(
                    out,
                    "input: {} ({}), elements {}",
                    i.source,
                    i.kind,
                    i.basis.join(" ")
                );
            }
        }
    }
    for id in &r.identities {
        match &id.witness {
            None => {
                let _ = writeln!(out, "{}: pass", id.identity);
            }
            Some(w) => {
                let _ = writeln!(out, "{}: fails at ({})", id.identity, w.join(", "));
            }
        }
    }
    if let Some(p) = &r.problem {
        let _ = writeln!(out, "delta = {}, gamma = {}", p.delta, p.gamma);
    }
    if let Some(d) = &r.derivations {
        let _ = writeln!(
            out,
            "derivation space: dimension {}{}",
            d.dimension,
            if d.verified {
                ""
            } else {
                " (re-substitution FAILED)"
            }
        );
        for (i, m) in d.basis.iter().enumerate() {
            let _ = writeln!(out, "  D{}:", i + 1);
            render_matrix(&mut out, "    ", m);
        }
    }
    if let Some(c) = &r.closed_form {
        if c.applicable {
            let _ = writeln!(
                out,
                "closed form: dimension {}, agrees with generic solver: {}",
                c.dimension.unwrap_or(0),
                c.matches_generic.unwrap_or(false)
            );
        } else if let Some(reason) = &c.reason {
            let _ = writeln!(out, "closed form: not applicable ({reason})");
        }
    }
    if let Some(m) = &r.map {
        let _ = writeln!(
            out,
            "map{}:",
            if m.is_derivation {
                ""
            } else {
                " (not a derivation)"
            }
        );
        render_matrix(&mut out, "  ", &m.matrix);
    }
    if let Some(d) = &r.decomposition {
        let _ = writeln!(
            out,
            "characteristic polynomial: {}",
            d.characteristic_polynomial
        );
        if let Some(res) = &d.residual {
            let _ = writeln!(out, "non-rational spectrum, residual factor {res}");
        }
        for c in &d.components {
            let vecs: Vec<String> = c
                .basis
                .iter()
                .map(|v| format!("({})", v.join(", ")))
                .collect();
            let _ = writeln!(
                out,
                "  A_{{{}}}: dimension {}, basis {}",
                c.weight,
                c.dim,
                vecs.join(" ")
            );
        }
    }
    if let Some(g) = &r.grading {
        let _ = writeln!(out, "grading weights: {}", g.weights.join(", "));
        for e in &g.table {
            let _ = writeln!(out, "  {} * {} = {}", e.left, e.right, e.result);
        }
        if g.weight_formula_holds {
            let _ = writeln!(out, "weight formula: holds");
        } else {
            let _ = writeln!(
                out,
                "weight formula: {} violations",
                g.weight_formula_violations.len()
            );
            for v in &g.weight_formula_violations {
                let _ = writeln!(out, "  {v}");
            }
        }
    }
    if let Some(w) = &r.witness {
        let _ = writeln!(
            out,
            "witness: (lambda, eta, mu) = ({}, {}, {}); ({} * {}) * {} = {} but {} * ({} * {}) = {}",
            w.lambda, w.eta, w.mu, w.lambda, w.eta, w.mu, w.left, w.lambda, w.eta, w.mu, w.right
        );
    } else if r.grading.is_some() {
        let _ = writeln!(out, "witness: none");
    }
    if let Some(v) = &r.embeddability {
        render_verdict(&mut out, v);
    }
    for s in &r.steps {
        let _ = writeln!(
            out,
            "[{}] {}: {}",
            if s.pass { "ok" } else { "FAIL" },
            s.name,
            s.detail
        );
    }
    out
}

fn render_verdict(out: &mut String, v: &VerdictSection) {
    match &v.verdict {
        EmbeddabilityVerdict::Embeddable { stage, certificate } => {
            let kind = match certificate {
                EmbeddingCertificate::Cayley(t) => {
                    format!("Cayley table on {} elements", t.elements.len())
                }
                EmbeddingCertificate::Rewriting(s) => {
                    format!("confluent system with {} rules", s.active.len())
                }
            };
            let _ = writeln!(out, "embeddability: embeddable ({stage:?}, {kind})");
        }
        EmbeddabilityVerdict::NotEmbeddable { stage, .. } => {
            let _ = writeln!(out, "embeddability: not embeddable ({stage:?})");
            if let Some(words) = &v.trace_words {
                let _ = writeln!(out, "  {}", words.join(" = "));
            }
        }
        EmbeddabilityVerdict::Unknown { bounds } => {
            let _ = writeln!(
                out,
                "embeddability: unknown (word length {}, {} rules created, longest lhs {}, search nodes {})",
                bounds.limits.max_word_len, bounds.rules_created, bounds.longest_lhs, bounds.search_nodes
            );
        }
    }
    let _ = writeln!(out, "certificate replay: {}", v.replay);
}
