//! The subcommands, as functions from parsed arguments to a report. Input
//! problems surface as [`InputError`] (exit code 2); everything else is a
//! report carrying its own exit code.

use std::path::{Path, PathBuf};

use nsgrade::algebra::{Algebra, FamilySpec, Identity, IdentityCheck};
use nsgrade::derivation::{
    assemble, corollary_check, derivation_defect, derivation_space, find_nonassoc_witness,
    grading_from_decomposition, is_derivation, lemma2_solution_space, map_span,
    root_space_decomposition, weight_formula_violations, CorollaryCase, DecompositionError,
    DerivationProblem, Grading, LinearMap, WeightFormulaViolation,
};
use nsgrade::exactla::{char_poly, format_rational, rat, Matrix, Rational};
use nsgrade::magma::{embeddability, EmbeddabilityVerdict, Limits};

use crate::formats::{
    load_algebra_input, load_magma, load_matrix, matrix_to_file, AlgebraInput, InputError,
};
use crate::report::{
    ClosedFormSection, ComponentSection, DecompositionSection, DerivationSection, GradingSection,
    IdentityResult, InputSummary, MapSection, ProblemSummary, Report, Step, TableEntry,
    VerdictSection, WitnessSection,
};

/// How `grade` obtains its map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapSelector {
    /// A matrix file.
    File(PathBuf),
    /// The `k`-th basis element (from 1) of the derivation space.
    Pick(usize),
}

fn input_summary(kind: &str, source: &Path, alg: &Algebra) -> InputSummary {
    InputSummary {
        kind: kind.to_string(),
        source: source.display().to_string(),
        dim: Some(alg.dim()),
        basis: alg.basis_names().to_vec(),
    }
}

fn problem_summary(prob: &DerivationProblem) -> ProblemSummary {
    ProblemSummary {
        delta: format_rational(&prob.delta),
        gamma: format_rational(&prob.gamma),
    }
}

fn identity_result(alg: &Algebra, which: Identity) -> IdentityResult {
    match alg.check_identity(which) {
        IdentityCheck::Pass => IdentityResult {
            identity: which.name().to_string(),
            pass: true,
            witness: None,
        },
        IdentityCheck::Fail(w) => IdentityResult {
            identity: which.name().to_string(),
            pass: false,
            witness: Some(
                w.indices
                    .iter()
                    .map(|&i| alg.basis_names()[i].clone())
                    .collect(),
            ),
        },
    }
}

pub fn cmd_check(path: &Path, which: Identity) -> Result<Report, InputError> {
    let input = load_algebra_input(path)?;
    let alg = input.algebra();
    let mut report = Report::new("check");
    report.input = Some(input_summary(input.kind(), path, &alg));
    let result = identity_result(&alg, which);
    if !result.pass {
        report.fail(format!("{} identity fails", which.name()));
    }
    report.identities.push(result);
    Ok(report)
}

fn derivation_section(
    alg: &Algebra,
    prob: &DerivationProblem,
    basis: &[LinearMap],
) -> DerivationSection {
    DerivationSection {
        dimension: basis.len(),
        basis: basis.iter().map(|d| matrix_to_file(d.matrix())).collect(),
        verified: basis.iter().all(|d| is_derivation(alg, d, prob)),
    }
}

fn closed_form_section(
    spec: &FamilySpec,
    prob: &DerivationProblem,
    generic: &[LinearMap],
) -> ClosedFormSection {
    match lemma2_solution_space(spec, prob) {
        Err(e) => ClosedFormSection {
            applicable: false,
            reason: Some(e.to_string()),
            dimension: None,
            matches_generic: None,
        },
        Ok(sols) => {
            let maps: Vec<LinearMap> = sols
                .iter()
                .map(|s| assemble(s, spec, prob).expect("solution blocks match the family"))
                .collect();
            let n = 2 + 2 * spec.v_dim();
            ClosedFormSection {
                applicable: true,
                reason: None,
                dimension: Some(maps.len()),
                matches_generic: Some(map_span(n, &maps) == map_span(n, generic)),
            }
        }
    }
}

pub fn cmd_derive(path: &Path, prob: &DerivationProblem) -> Result<Report, InputError> {
    let input = load_algebra_input(path)?;
    let alg = input.algebra();
    let mut report = Report::new("derive");
    report.input = Some(input_summary(input.kind(), path, &alg));
    report.problem = Some(problem_summary(prob));
    let basis = derivation_space(&alg, prob);
    let section = derivation_section(&alg, prob, &basis);
    if !section.verified {
        report.fail("a computed basis map fails the defining equation");
    }
    report.derivations = Some(section);
    if let AlgebraInput::Family(spec) = &input {
        let closed = closed_form_section(spec, prob, &basis);
        if closed.matches_generic == Some(false) {
            report.fail("closed-form solution space differs from the generic one");
        }
        report.closed_form = Some(closed);
    }
    Ok(report)
}

fn weight_violation_text(v: &WeightFormulaViolation) -> String {
    match v {
        WeightFormulaViolation::WrongWeight {
            lambda,
            mu,
            actual,
            expected,
        } => format!(
            "{} * {} = {} but the formula gives {}",
            format_rational(lambda),
            format_rational(mu),
            format_rational(actual),
            format_rational(expected)
        ),
        WeightFormulaViolation::NonzeroOutsideWeights { lambda, mu } => format!(
            "{} * {}: formula value is not a weight but the product is nonzero",
            format_rational(lambda),
            format_rational(mu)
        ),
    }
}

fn grading_section(alg: &Algebra, grading: &Grading, prob: &DerivationProblem) -> GradingSection {
    let violations: Vec<String> = weight_formula_violations(alg, grading, prob)
        .iter()
        .map(weight_violation_text)
        .collect();
    GradingSection {
        weights: grading.weights().iter().map(format_rational).collect(),
        table: grading
            .table()
            .iter()
            .map(|(l, r, p)| TableEntry {
                left: format_rational(l),
                right: format_rational(r),
                result: format_rational(p),
            })
            .collect(),
        weight_formula_holds: violations.is_empty(),
        weight_formula_violations: violations,
    }
}

fn decomposition_section(
    d: &LinearMap,
    decomp: Result<&nsgrade::derivation::Decomposition, &DecompositionError>,
    grading_order: &[Rational],
) -> DecompositionSection {
    let poly = char_poly(d.matrix()).expect("square").to_string();
    match decomp {
        Ok(decomp) => DecompositionSection {
            characteristic_polynomial: poly,
            residual: None,
            components: grading_order
                .iter()
                .map(|w| {
                    let c = &decomp[w];
                    ComponentSection {
                        weight: format_rational(w),
                        dim: c.dim(),
                        basis: c
                            .basis_vectors()
                            .iter()
                            .map(|v| v.iter().map(format_rational).collect())
                            .collect(),
                    }
                })
                .collect(),
        },
        Err(e) => DecompositionSection {
            characteristic_polynomial: poly,
            residual: match e {
                DecompositionError::NonRationalSpectrum { residual } => Some(residual.to_string()),
                _ => None,
            },
            components: Vec::new(),
        },
    }
}

fn witness_section(grading: &Grading, prob: &DerivationProblem) -> Option<WitnessSection> {
    find_nonassoc_witness(grading, prob).map(|w| WitnessSection {
        corollary: corollary_check(prob, &w.lambda, &w.mu),
        lambda: format_rational(&w.lambda),
        eta: format_rational(&w.eta),
        mu: format_rational(&w.mu),
        theta: format_rational(&w.theta),
        xi: format_rational(&w.xi),
        left: format_rational(&w.left),
        right: format_rational(&w.right),
    })
}

/// Outcome of the decomposition-to-verdict part shared by `grade` and
/// `paper-example`.
struct Analysis {
    grading: Option<Grading>,
    verdict: Option<EmbeddabilityVerdict>,
}

fn analyse(
    report: &mut Report,
    alg: &Algebra,
    d: &LinearMap,
    prob: &DerivationProblem,
    limits: &Limits,
) -> Analysis {
    let mut out = Analysis {
        grading: None,
        verdict: None,
    };
    let decomp = root_space_decomposition(alg, d);
    let grading = match &decomp {
        Ok(dc) => grading_from_decomposition(alg, dc),
        Err(_) => {
            report.decomposition = Some(decomposition_section(d, decomp.as_ref(), &[]));
            report.fail(decomp.as_ref().unwrap_err().to_string());
            return out;
        }
    };
    let grading = match grading {
        Ok(g) => g,
        Err(e) => {
            let mut order: Vec<Rational> = decomp.as_ref().unwrap().keys().cloned().collect();
            order.sort_by_key(nsgrade::exactla::magnitude_key);
            report.decomposition = Some(decomposition_section(d, decomp.as_ref(), &order));
            report.fail(e.to_string());
            return out;
        }
    };
    report.decomposition = Some(decomposition_section(d, decomp.as_ref(), grading.weights()));
    report.grading = Some(grading_section(alg, &grading, prob));
    report.witness = witness_section(&grading, prob);
    let magma = grading.to_partial_magma();
    let verdict = embeddability(&magma, limits);
    report.embeddability = Some(VerdictSection::new(&magma, verdict.clone()));
    out.grading = Some(grading);
    out.verdict = Some(verdict);
    out
}

fn map_section(alg: &Algebra, d: &LinearMap, prob: &DerivationProblem) -> MapSection {
    let defect = derivation_defect(alg, d, prob).expect("size checked");
    MapSection {
        matrix: matrix_to_file(d.matrix()),
        is_derivation: defect.is_none(),
        defect: defect
            .map(|(i, j)| vec![alg.basis_names()[i].clone(), alg.basis_names()[j].clone()]),
    }
}

pub fn cmd_grade(
    path: &Path,
    selector: &MapSelector,
    prob: &DerivationProblem,
    limits: &Limits,
) -> Result<Report, InputError> {
    let input = load_algebra_input(path)?;
    let alg = input.algebra();
    let n = alg.dim();
    let d = match selector {
        MapSelector::File(p) => {
            let m = load_matrix(p)?;
            if m.rows() != n || m.cols() != n {
                return Err(InputError::Invalid {
                    path: p.display().to_string(),
                    at: "matrix".into(),
                    message: format!("expected {n}x{n}, got {}x{}", m.rows(), m.cols()),
                });
            }
            LinearMap::new(m).expect("square")
        }
        MapSelector::Pick(k) => {
            let basis = derivation_space(&alg, prob);
            match k.checked_sub(1).and_then(|i| basis.get(i)) {
                Some(d) => d.clone(),
                None => {
                    return Err(InputError::Invalid {
                        path: path.display().to_string(),
                        at: "--pick".into(),
                        message: format!(
                            "derivation space has dimension {}, cannot pick {k}",
                            basis.len()
                        ),
                    })
                }
            }
        }
    };
    let mut report = Report::new("grade");
    report.input = Some(input_summary(input.kind(), path, &alg));
    report.problem = Some(problem_summary(prob));
    let section = map_section(&alg, &d, prob);
    let ok = section.is_derivation;
    report.map = Some(section);
    if !ok {
        report.fail("map is not a (delta, gamma)-derivation of the algebra");
        return Ok(report);
    }
    analyse(&mut report, &alg, &d, prob, limits);
    Ok(report)
}

pub fn cmd_magma(path: &Path, limits: &Limits) -> Result<Report, InputError> {
    let m = load_magma(path)?;
    let mut report = Report::new("magma");
    report.input = Some(InputSummary {
        kind: "magma".into(),
        source: path.display().to_string(),
        dim: None,
        basis: m.elements().to_vec(),
    });
    let verdict = embeddability(&m, limits);
    match &verdict {
        EmbeddabilityVerdict::Embeddable { .. } => {}
        EmbeddabilityVerdict::NotEmbeddable { .. } => {
            report.fail("does not embed into any semigroup")
        }
        EmbeddabilityVerdict::Unknown { .. } => report.fail("undecided within the given bounds"),
    }
    let section = VerdictSection::new(&m, verdict);
    if section.replay != "valid" {
        report.fail(format!("certificate replay failed: {}", section.replay));
    }
    report.embeddability = Some(section);
    Ok(report)
}

/// The nilpotent map `v2 -> v1` used for all four family maps.
pub fn example_spec() -> FamilySpec {
    FamilySpec::uniform(Matrix::from_i64(&[&[0, 1], &[0, 0]])).expect("square")
}

/// `D(e) = D(a) = 0`, `D(v) = v`, `D(v') = -v'`.
pub fn example_map() -> LinearMap {
    LinearMap::new(Matrix::diagonal(&[
        rat(0),
        rat(0),
        rat(1),
        rat(1),
        rat(-1),
        rat(-1),
    ]))
    .expect("square")
}

struct Steps<'a> {
    report: &'a mut Report,
}

impl Steps<'_> {
    /// Records a step; on failure marks the report and returns false.
    fn check(&mut self, name: &str, pass: bool, detail: String) -> bool {
        self.report.steps.push(Step {
            name: name.to_string(),
            pass,
            detail: detail.clone(),
        });
        if !pass {
            self.report
                .fail(format!("step `{name}` deviates: {detail}"));
        }
        pass
    }
}

/// Rebuilds the six-dimensional example end to end and compares every
/// intermediate value with the expected one, stopping at the first
/// mismatch. `fixture` replaces the built-in algebra.
pub fn cmd_paper_example(fixture: Option<&Path>, limits: &Limits) -> Result<Report, InputError> {
    let (alg, source, kind) = match fixture {
        Some(p) => {
            let input = load_algebra_input(p)?;
            (input.algebra(), p.display().to_string(), input.kind())
        }
        None => (example_spec().build(), "builtin".to_string(), "builtin"),
    };
    let prob = DerivationProblem::new(rat(-1), rat(-1));
    let mut report = Report::new("paper-example");
    report.input = Some(InputSummary {
        kind: kind.to_string(),
        source,
        dim: Some(alg.dim()),
        basis: alg.basis_names().to_vec(),
    });
    report.problem = Some(problem_summary(&prob));
    run_example_steps(&mut report, &alg, &prob, limits);
    Ok(report)
}

fn run_example_steps(
    report: &mut Report,
    alg: &Algebra,
    prob: &DerivationProblem,
    limits: &Limits,
) {
    let assoc = identity_result(alg, Identity::Associative);
    let comm = identity_result(alg, Identity::Commutative);
    report.identities = vec![assoc.clone(), comm.clone()];

    let mut s = Steps { report };
    if !s.check(
        "dimension",
        alg.dim() == 6,
        format!("dimension {}", alg.dim()),
    ) {
        return;
    }
    if !s.check("associative", assoc.pass, pass_text(&assoc))
        || !s.check("commutative", comm.pass, pass_text(&comm))
    {
        return;
    }
    let basis = derivation_space(alg, prob);
    let d = example_map();
    let in_span = map_span(6, &basis).contains_vector(&d.flatten());
    let section = derivation_section(alg, prob, &basis);
    let verified = section.verified;
    s.report.derivations = Some(section);
    s.report.map = Some(map_section(alg, &d, prob));
    if !s.check(
        "derivation",
        in_span && verified,
        format!(
            "diag(0,0,1,1,-1,-1) {} the (-1,-1)-derivation space of dimension {}",
            if in_span { "lies in" } else { "is not in" },
            basis.len()
        ),
    ) {
        return;
    }

    let analysis = analyse(s.report, alg, &d, prob, limits);
    let Some(grading) = analysis.grading else {
        let msg = s.report.message.clone().unwrap_or_default();
        s.report.steps.push(Step {
            name: "decomposition".into(),
            pass: false,
            detail: msg,
        });
        return;
    };
    let dims: Vec<(String, usize)> = grading
        .weights()
        .iter()
        .map(|w| (format_rational(w), grading.component(w).unwrap().dim()))
        .collect();
    let expected_dims: Vec<(String, usize)> =
        vec![("0".into(), 2), ("-1".into(), 2), ("1".into(), 2)];
    let detail = dims
        .iter()
        .map(|(w, d)| format!("A_{w}: {d}"))
        .collect::<Vec<_>>()
        .join(", ");
    if !s.check("decomposition", dims == expected_dims, detail) {
        return;
    }

    let table: Vec<String> = grading
        .table()
        .iter()
        .map(|(l, r, p)| {
            format!(
                "{}*{}={}",
                format_rational(l),
                format_rational(r),
                format_rational(p)
            )
        })
        .collect();
    let expected_table = ["0*0=0", "0*-1=1", "0*1=-1", "-1*0=1", "1*0=-1"];
    if !s.check("grading_table", table == expected_table, table.join(", ")) {
        return;
    }
    let holds = s
        .report
        .grading
        .as_ref()
        .map(|g| g.weight_formula_holds)
        .unwrap_or(false);
    if !s.check(
        "weight_formula",
        holds,
        "every entry equals -lambda - mu".to_string(),
    ) {
        return;
    }

    let witness = s.report.witness.clone();
    let ok = witness.as_ref().is_some_and(|w| {
        (
            w.lambda.as_str(),
            w.eta.as_str(),
            w.mu.as_str(),
            w.left.as_str(),
            w.right.as_str(),
        ) == ("0", "0", "-1", "1", "-1")
    });
    let detail = match &witness {
        Some(w) => format!(
            "(lambda, eta, mu) = ({}, {}, {}), bracketings {} and {}",
            w.lambda, w.eta, w.mu, w.left, w.right
        ),
        None => "no witness".to_string(),
    };
    if !s.check("witness", ok, detail) {
        return;
    }
    let case = witness.map(|w| w.corollary);
    if !s.check(
        "corollary",
        case == Some(CorollaryCase::HeadingI),
        match case {
            Some(CorollaryCase::HeadingI) => "heading (i) applies".to_string(),
            Some(CorollaryCase::HeadingII) => "heading (ii) applies".to_string(),
            _ => "neither heading applies".to_string(),
        },
    ) {
        return;
    }

    let replay = s
        .report
        .embeddability
        .as_ref()
        .map(|v| v.replay.clone())
        .unwrap_or_default();
    let not_embeddable = matches!(
        analysis.verdict,
        Some(EmbeddabilityVerdict::NotEmbeddable { .. })
    );
    s.check(
        "embeddability",
        not_embeddable && replay == "valid",
        format!(
            "{}, certificate {}",
            analysis
                .verdict
                .as_ref()
                .map(|v| v.status())
                .unwrap_or("missing"),
            replay
        ),
    );
}

fn pass_text(r: &IdentityResult) -> String {
    match &r.witness {
        None => "pass".to_string(),
        Some(w) => format!("fails at ({})", w.join(", ")),
    }
}
