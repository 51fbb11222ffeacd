//! Acceptance gate. Each test checks one criterion and prints a single
//! `criterion N: PASS|FAIL ...` line (visible with `--nocapture`).

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use nsgrade::algebra::{Algebra, FamilySpec, Identity};
use nsgrade::derivation::{
    assemble, derivation_defect, derivation_space, find_nonassoc_witness,
    grading_from_decomposition, is_derivation, lemma2_solution_space, map_span,
    root_space_decomposition, weight_formula_violations, DerivationProblem, Grading,
};
use nsgrade::exactla::{rat, ratio, Matrix, Rational};
use nsgrade::magma::{embeddability, replay_certificate, EmbeddingCertificate, Limits};
use nsgrade::{EmbeddabilityVerdict, LinearMap, PartialMagma};
use nsgrade_cli::commands::{cmd_paper_example, example_map, example_spec};
use nsgrade_cli::report::{Report, VerdictSection};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report_line(n: usize, ok: bool, detail: &str) {
    println!(
        "criterion {n}: {} {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
}

fn antiderivation() -> DerivationProblem {
    DerivationProblem::new(rat(-1), rat(-1))
}

// ---- criterion 1 -------------------------------------------------------

struct ExampleRun {
    grading: Grading,
    magma: PartialMagma,
    verdict: EmbeddabilityVerdict,
}

fn example_run() -> ExampleRun {
    let alg = example_spec().build();
    let decomp = root_space_decomposition(&alg, &example_map()).expect("rational spectrum");
    let grading = grading_from_decomposition(&alg, &decomp).expect("a grading");
    let magma = grading.to_partial_magma();
    let verdict = embeddability(&magma, &Limits::default());
    ExampleRun {
        grading,
        magma,
        verdict,
    }
}

fn example_failures() -> Vec<String> {
    let mut bad = Vec::new();
    let mut expect = |ok: bool, what: &str| {
        if !ok {
            bad.push(what.to_string());
        }
    };
    let prob = antiderivation();
    let alg = example_spec().build();
    expect(alg.dim() == 6, "dimension 6");
    expect(
        alg.check_identity(Identity::Associative).is_pass(),
        "associative",
    );
    expect(
        alg.check_identity(Identity::Commutative).is_pass(),
        "commutative",
    );
    let d = example_map();
    expect(
        is_derivation(&alg, &d, &prob),
        "map is a (-1,-1)-derivation",
    );
    let span = map_span(6, &derivation_space(&alg, &prob));
    expect(
        span.contains_vector(&d.flatten()),
        "map lies in the solved space",
    );

    let run = example_run();
    let dims: Vec<(Rational, usize)> = run
        .grading
        .components()
        .iter()
        .map(|(w, s)| (w.clone(), s.dim()))
        .collect();
    expect(
        dims == vec![(rat(-1), 2), (rat(0), 2), (rat(1), 2)],
        "weights {0, 1, -1} with dimensions (2, 2, 2)",
    );
    let mut table = run.grading.table();
    table.sort();
    let mut want = vec![
        (rat(0), rat(0), rat(0)),
        (rat(0), rat(1), rat(-1)),
        (rat(1), rat(0), rat(-1)),
        (rat(0), rat(-1), rat(1)),
        (rat(-1), rat(0), rat(1)),
    ];
    want.sort();
    expect(table == want, "five-entry grading table");
    match find_nonassoc_witness(&run.grading, &prob) {
        Some(w) => {
            expect(
                (w.lambda, w.eta, w.mu) == (rat(0), rat(0), rat(-1)),
                "witness triple (0, 0, -1)",
            );
            expect(
                (w.left, w.right) == (rat(1), rat(-1)),
                "bracketings 1 and -1",
            );
        }
        None => expect(false, "a witness exists"),
    }
    expect(
        matches!(run.verdict, EmbeddabilityVerdict::NotEmbeddable { .. }),
        "verdict not embeddable",
    );
    expect(
        replay_certificate(&run.magma, &run.verdict).is_ok(),
        "trace replays",
    );

    let start = Instant::now();
    let report = cmd_paper_example(None, &Limits::default()).expect("built-in input");
    let elapsed = start.elapsed();
    expect(
        report.exit_code == 0,
        "paper-example pipeline passes every step",
    );
    expect(
        elapsed < Duration::from_secs(1),
        "pipeline under one second",
    );
    bad
}

#[test]
fn criterion_1_worked_example_end_to_end() {
    let bad = example_failures();
    report_line(
        1,
        bad.is_empty(),
        &format!("worked example; deviations: {bad:?}"),
    );
    assert!(bad.is_empty(), "{bad:?}");
}

// ---- criterion 2 -------------------------------------------------------

fn random_matrix(rng: &mut ChaCha8Rng, n: usize, zero_bias: f64) -> Matrix {
    let entries = (0..n * n)
        .map(|_| {
            if rng.gen_bool(zero_bias) {
                rat(0)
            } else {
                rat(rng.gen_range(-2..=2))
            }
        })
        .collect();
    Matrix::from_entries(n, n, entries).unwrap()
}

fn random_family(rng: &mut ChaCha8Rng, n: usize, zero_bias: f64) -> FamilySpec {
    let maps: Vec<Matrix> = (0..4).map(|_| random_matrix(rng, n, zero_bias)).collect();
    FamilySpec::new(
        maps[0].clone(),
        maps[1].clone(),
        maps[2].clone(),
        maps[3].clone(),
    )
    .unwrap()
}

#[test]
fn criterion_2_family_conditions_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0a55_0c1a);
    let (mut total, mut mismatches, mut associative) = (0, 0, 0);
    for i in 0..240 {
        let n = 1 + i % 3;
        // sparse instances keep both outcomes well represented
        let bias = [0.0, 0.6, 0.85][i % 3];
        let spec = random_family(&mut rng, n, bias);
        let by_conditions = spec.associativity_conditions().is_empty();
        let by_table = spec.build().check_identity(Identity::Associative).is_pass();
        total += 1;
        associative += usize::from(by_table);
        mismatches += usize::from(by_conditions != by_table);
    }
    let ok = total >= 200 && mismatches == 0 && associative > 0 && associative < total;
    report_line(
        2,
        ok,
        &format!("{total} families, {associative} associative, {mismatches} mismatches"),
    );
    assert!(ok);
}

// ---- criterion 3 -------------------------------------------------------

fn scalars() -> Vec<Rational> {
    vec![rat(1), rat(-1), rat(2), rat(-2), ratio(1, 2)]
}

fn nonzero_matrix(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, n, 0.5);
        if !m.is_zero() {
            return m;
        }
    }
}

/// Admissible closed-form instances: all four maps nonzero.
fn admissible_instances() -> Vec<(FamilySpec, DerivationProblem)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1e44a2);
    let s = scalars();
    (0..60)
        .map(|i| {
            let n = 1 + i % 3;
            let maps: Vec<Matrix> = (0..4).map(|_| nonzero_matrix(&mut rng, n)).collect();
            let spec = FamilySpec::new(
                maps[0].clone(),
                maps[1].clone(),
                maps[2].clone(),
                maps[3].clone(),
            )
            .unwrap();
            let prob = DerivationProblem::new(
                s[rng.gen_range(0..s.len())].clone(),
                s[rng.gen_range(0..s.len())].clone(),
            );
            (spec, prob)
        })
        .collect()
}

#[test]
fn criterion_3_closed_form_equals_generic_solver() {
    let instances = admissible_instances();
    let mut mismatches = Vec::new();
    for (k, (spec, prob)) in instances.iter().enumerate() {
        let alg = spec.build();
        let closed: Vec<LinearMap> = lemma2_solution_space(spec, prob)
            .expect("admissible")
            .iter()
            .map(|s| assemble(s, spec, prob).expect("sizes agree"))
            .collect();
        if map_span(alg.dim(), &closed) != map_span(alg.dim(), &derivation_space(&alg, prob)) {
            mismatches.push(k);
        }
    }
    let ok = instances.len() >= 50 && mismatches.is_empty();
    report_line(
        3,
        ok,
        &format!("{} instances, mismatching: {mismatches:?}", instances.len()),
    );
    assert!(ok);
}

// ---- criterion 4 -------------------------------------------------------

/// Gradings induced by every basis derivation of the criterion 3 instances,
/// plus the sum of the basis, whenever the spectrum is rational.
fn derived_gradings() -> (Vec<(Algebra, Grading, DerivationProblem)>, usize) {
    let mut out = Vec::new();
    let mut skipped = 0;
    for (spec, prob) in admissible_instances() {
        let alg = spec.build();
        let basis = derivation_space(&alg, &prob);
        let mut maps = basis.clone();
        if let Some(first) = basis.first() {
            let mut sum = first.matrix().clone();
            for d in &basis[1..] {
                sum = sum.add(d.matrix()).unwrap();
            }
            maps.push(LinearMap::new(sum).unwrap());
        }
        for d in maps {
            match root_space_decomposition(&alg, &d) {
                Ok(decomp) => {
                    let g = grading_from_decomposition(&alg, &decomp)
                        .expect("derivations induce gradings");
                    out.push((alg.clone(), g, prob.clone()));
                }
                Err(_) => skipped += 1,
            }
        }
    }
    (out, skipped)
}

#[test]
fn criterion_4_weight_formula_on_all_gradings() {
    let mut cases = derived_gradings().0;
    let alg = example_spec().build();
    cases.push((alg, example_run().grading, antiderivation()));
    let mut violations = 0;
    let mut entries = 0;
    let mut trivial = 0;
    for (alg, g, prob) in &cases {
        violations += weight_formula_violations(alg, g, prob).len();
        // independent restatement of the same two checks
        for (l, r, p) in g.table() {
            entries += 1;
            if p != prob.weight(&l, &r) {
                violations += 1;
            }
        }
        for l in g.weights() {
            for r in g.weights() {
                if g.component(&prob.weight(l, r)).is_some() {
                    continue;
                }
                let (u, w) = (g.component(l).unwrap(), g.component(r).unwrap());
                for x in u.basis_vectors() {
                    for y in w.basis_vectors() {
                        if alg.product(&x, &y).unwrap().iter().any(|c| !c.is_zero()) {
                            violations += 1;
                        }
                    }
                }
            }
        }
        trivial += usize::from(g.weights().len() == 1);
    }
    let ok = violations == 0 && cases.len() > trivial;
    report_line(
        4,
        ok,
        &format!(
            "{} gradings ({} with several weights), {entries} table entries, {violations} violations",
            cases.len(),
            cases.len() - trivial
        ),
    );
    assert!(ok);
}

// ---- criterion 5 -------------------------------------------------------

fn matrix_units() -> Algebra {
    let names = ["E11", "E12", "E21", "E22"].map(String::from).to_vec();
    let mut table = vec![rat(0); 64];
    for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        for (c, d) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            if b == c {
                table[((a * 2 + b) * 4 + (c * 2 + d)) * 4 + (a * 2 + d)] = rat(1);
            }
        }
    }
    Algebra::from_table(names, table).unwrap()
}

/// `ad_u(x) = ux - xu` as a matrix in the unit basis.
fn inner(alg: &Algebra, u: usize) -> LinearMap {
    let n = alg.dim();
    let uv = alg.basis_vector(u);
    let mut cols = Vec::new();
    for j in 0..n {
        let x = alg.basis_vector(j);
        let l = alg.product(&uv, &x).unwrap();
        let r = alg.product(&x, &uv).unwrap();
        cols.push(l.iter().zip(&r).map(|(a, b)| a - b).collect::<Vec<_>>());
    }
    let entries = (0..n)
        .flat_map(|r| cols.iter().map(move |c| c[r].clone()))
        .collect();
    LinearMap::new(Matrix::from_entries(n, n, entries).unwrap()).unwrap()
}

#[test]
fn criterion_5_matrix_algebra_spot_checks() {
    let alg = matrix_units();
    let plain = DerivationProblem::new(rat(1), rat(1));
    let anti = antiderivation();
    let solved = derivation_space(&alg, &plain);
    let inners: Vec<LinearMap> = (0..4).map(|u| inner(&alg, u)).collect();
    let inner_span = map_span(4, &inners);
    let checks = [
        ("dim Der = 3", solved.len() == 3),
        ("inner derivations span dimension 3", inner_span.dim() == 3),
        (
            "solved space equals inner derivations",
            map_span(4, &solved) == inner_span,
        ),
        (
            "inner derivations satisfy the equation by substitution",
            inners
                .iter()
                .all(|d| derivation_defect(&alg, d, &plain) == Ok(None)),
        ),
        (
            "dim of (-1,-1) space = 0",
            derivation_space(&alg, &anti).is_empty(),
        ),
        (
            "no nonzero inner derivation is a (-1,-1)-derivation",
            inners
                .iter()
                .all(|d| d.matrix().is_zero() || !is_derivation(&alg, d, &anti)),
        ),
        (
            "identity is not a (-1,-1)-derivation",
            !is_derivation(&alg, &LinearMap::identity(4), &anti),
        ),
    ];
    let failed: Vec<&str> = checks
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(n, _)| *n)
        .collect();
    report_line(
        5,
        failed.is_empty(),
        &format!(
            "2x2 matrices: (1,1) dimension {}, (-1,-1) dimension {}; failed: {failed:?}",
            solved.len(),
            derivation_space(&alg, &anti).len()
        ),
    );
    assert!(failed.is_empty());
}

// ---- criterion 6 -------------------------------------------------------

/// Backtracking over total tables on `size` elements, rejecting a partial
/// table as soon as some fully defined triple breaks associativity.
fn extends_to(m: &PartialMagma, size: usize) -> bool {
    fn consistent(t: &[Option<usize>], s: usize) -> bool {
        (0..s).all(|a| {
            (0..s).all(|b| {
                (0..s).all(|c| {
                    let (Some(ab), Some(bc)) = (t[a * s + b], t[b * s + c]) else {
                        return true;
                    };
                    match (t[ab * s + c], t[a * s + bc]) {
                        (Some(l), Some(r)) => l == r,
                        _ => true,
                    }
                })
            })
        })
    }
    fn fill(t: &mut [Option<usize>], s: usize, idx: usize) -> bool {
        if idx == s * s {
            return true;
        }
        if t[idx].is_some() {
            return fill(t, s, idx + 1);
        }
        for v in 0..s {
            t[idx] = Some(v);
            if consistent(t, s) && fill(t, s, idx + 1) {
                return true;
            }
        }
        t[idx] = None;
        false
    }
    let mut t = vec![None; size * size];
    for (l, r, res) in m.entries() {
        t[l * size + r] = Some(res);
    }
    consistent(&t, size) && fill(&mut t, size, 0)
}

fn brute_force_embeds(m: &PartialMagma) -> bool {
    (m.size()..=4).any(|s| extends_to(m, s))
}

fn two_element_magmas() -> Vec<PartialMagma> {
    (0..81usize)
        .map(|code| {
            let cells: Vec<Option<usize>> = (0..4)
                .map(|k| match (code / 3usize.pow(k)) % 3 {
                    0 => None,
                    v => Some(v - 1),
                })
                .collect();
            PartialMagma::from_cells(2, &cells).unwrap()
        })
        .collect()
}

fn generous() -> Limits {
    Limits {
        max_word_len: 6,
        max_extra_elements: 4,
        ..Limits::default()
    }
}

#[test]
fn criterion_6_two_element_ground_truth() {
    let magmas = two_element_magmas();
    let (mut contradictions, mut unknown, mut yes, mut no) = (Vec::new(), 0, 0, 0);
    for (k, m) in magmas.iter().enumerate() {
        let truth = brute_force_embeds(m);
        match embeddability(m, &generous()) {
            EmbeddabilityVerdict::Embeddable { certificate, .. } => {
                yes += 1;
                let small =
                    matches!(&certificate, EmbeddingCertificate::Cayley(t) if t.size() <= 4);
                if small && !truth {
                    contradictions.push(k);
                }
            }
            EmbeddabilityVerdict::NotEmbeddable { .. } => {
                no += 1;
                if truth {
                    contradictions.push(k);
                }
            }
            EmbeddabilityVerdict::Unknown { .. } => unknown += 1,
        }
    }
    let rate = unknown as f64 / magmas.len() as f64;
    let ok = contradictions.is_empty() && unknown * 10 <= magmas.len();
    report_line(
        6,
        ok,
        &format!(
            "{} magmas: {yes} embeddable, {no} not, {unknown} unknown ({:.1}%); contradictions {contradictions:?}",
            magmas.len(),
            rate * 100.0
        ),
    );
    assert!(ok);
}

// ---- criterion 7 -------------------------------------------------------

#[test]
fn criterion_7_every_certificate_replays() {
    let mut cases: Vec<(PartialMagma, EmbeddabilityVerdict)> = Vec::new();
    let run = example_run();
    cases.push((run.magma, run.verdict));
    for m in two_element_magmas() {
        let v = embeddability(&m, &generous());
        cases.push((m, v));
    }
    let mut failures = Vec::new();
    let mut emitted = 0;
    let mut by_stage = std::collections::BTreeMap::<String, usize>::new();
    for (k, (m, v)) in cases.iter().enumerate() {
        let stage = match v {
            EmbeddabilityVerdict::Embeddable { stage, .. }
            | EmbeddabilityVerdict::NotEmbeddable { stage, .. } => *stage,
            EmbeddabilityVerdict::Unknown { .. } => continue,
        };
        emitted += 1;
        *by_stage.entry(format!("{stage:?}")).or_default() += 1;
        if let Err(e) = replay_certificate(m, v) {
            failures.push(format!("#{k}: {e}"));
        }
        // the report layer replays on its own as well
        if VerdictSection::new(m, v.clone()).replay != "valid" {
            failures.push(format!("#{k}: report replay"));
        }
    }
    let ok = failures.is_empty() && emitted > 0;
    report_line(
        7,
        ok,
        &format!("{emitted} certificates replayed, by stage {by_stage:?}; failures {failures:?}"),
    );
    assert!(ok);
}

// ---- criterion 8 -------------------------------------------------------

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

/// Every JSON report the suite can emit, concatenated.
fn report_bundle() -> String {
    let bin = env!("CARGO_BIN_EXE_nsgrade");
    let invocations: Vec<Vec<String>> = vec![
        vec!["paper-example".into()],
        vec![
            "paper-example".into(),
            "--fixture".into(),
            fixture("example_family.json"),
        ],
        vec!["check".into(), fixture("nonassoc_2d.json")],
        vec![
            "derive".into(),
            fixture("example_family.json"),
            "--delta".into(),
            "-1".into(),
            "--gamma".into(),
            "-1".into(),
        ],
        vec![
            "grade".into(),
            fixture("example_algebra.json"),
            "--delta".into(),
            "-1".into(),
            "--gamma".into(),
            "-1".into(),
            "--map".into(),
            fixture("example_map.json"),
        ],
        vec!["magma".into(), fixture("example_magma.json")],
        vec!["magma".into(), fixture("square_magma.json")],
        vec!["magma".into(), fixture("adversarial_magma.json")],
    ];
    let mut out = String::new();
    for args in invocations {
        let o = Command::new(bin)
            .args(&args)
            .args(["--format", "json"])
            .output()
            .expect("binary runs");
        out.push_str(&String::from_utf8(o.stdout).expect("utf-8"));
    }
    for m in two_element_magmas() {
        let mut r = Report::new("magma");
        r.embeddability = Some(VerdictSection::new(&m, embeddability(&m, &generous())));
        out.push_str(&r.to_json());
    }
    for (spec, prob) in admissible_instances().into_iter().take(10) {
        let basis = derivation_space(&spec.build(), &prob);
        out.push_str(
            &serde_json::to_string(
                &basis
                    .iter()
                    .map(|d| {
                        d.flatten()
                            .iter()
                            .map(nsgrade::exactla::format_rational)
                            .collect::<Vec<_>>()
                    })
                    .collect::<Vec<_>>(),
            )
            .unwrap(),
        );
        out.push('\n');
    }
    out
}

#[test]
fn criterion_8_reports_are_byte_identical() {
    let first = report_bundle();
    let second = report_bundle();
    let ok = first == second && !first.is_empty();
    let saved = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance_reports.json");
    let _ = std::fs::write(&saved, &first);
    report_line(
        8,
        ok,
        &format!(
            "two runs, {} bytes each, identical: {}; copy at {}",
            first.len(),
            first == second,
            saved.display()
        ),
    );
    assert!(ok);
}
