use std::collections::BTreeMap;
use std::path::Path;

use nonneg3_core::arith::{matrix_from_csv, matrix_from_json, matrix_to_json, parse_rational, AnyMatrix};
use nonneg3_core::boundary::{
    a_row_degrees, check_gl3_equivariance, compute_f63, det3_b, det_d, dimension_check, generators,
    generic_nonvanishing, minimality_check, mu_pullback, pullback_f, random_gl3, random_sl3, solve_sextic,
    vanishing_check, verify_gb, verify_gb_polys, ColumnTriple, ZeroPattern,
};
use nonneg3_core::geometry::{
    boundary_test, candidate_triangles, chart_from_matrix, moitra_example, nnrank_le3, square_example, svg_render,
    ConvexPolygon, ExampleReport, NnrankMethod, TriangleCandidate,
};
use nonneg3_core::groebner::{cached_basis, Options, RunStatus};
use nonneg3_core::poly::{divide, from_json, parse_text};
use nonneg3_core::{Matrix, MonomialOrder, Polynomial, Rational, Scalar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::report::{Check, Report, Status};
use crate::{CliError, Command, ExampleKind, ExampleParams, Global};

type Out = Result<(Vec<Check>, Value), CliError>;

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn rng(g: &Global) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(g.seed)
}

fn parse_poly(text: &str) -> Result<Polynomial, CliError> {
    let t = text.trim();
    Ok(if t.starts_with('{') { from_json(t)? } else { parse_text(t)? })
}

/// Generator file: one polynomial per line in text form, `#` comments.
pub fn read_generator_file(text: &str) -> Result<Vec<Polynomial>, CliError> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse_poly)
        .collect()
}

fn read_matrix(path: &Path) -> Result<AnyMatrix, CliError> {
    let text = read(path)?;
    let json = path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
    Ok(if json { matrix_from_json(&text)? } else { matrix_from_csv(&text)? })
}

fn config(g: &Global, cmd: &Command) -> Value {
    let mut c = match cmd {
        Command::Gens { m, n, out } => json!({ "m": m, "n": n, "out": out }),
        Command::GbCheck { m, n, gens } => json!({ "m": m, "n": n, "gens": gens }),
        Command::Member { m, n, expr, poly } => json!({ "m": m, "n": n, "expr": expr, "poly": poly }),
        Command::Pullback { out } => json!({ "out": out }),
        Command::Sextic { triple, n, out } => json!({ "triple": triple, "n": n, "out": out }),
        Command::DimCheck { m, n, samples } => json!({ "m": m, "n": n, "samples": samples }),
        Command::InvarianceCheck { groups, trials } => json!({ "groups": groups, "trials": trials }),
        Command::MinimalityCheck { m, n } => json!({ "m": m, "n": n }),
        Command::VanishCheck { m, n, samples } => json!({ "m": m, "n": n, "samples": samples }),
        Command::Nnrank { matrix } | Command::Boundary { matrix } => json!({ "matrix": matrix }),
        Command::Example { which, params, matrix_out, svg } => json!({
            "example": format!("{which:?}").to_lowercase(),
            "n": params.n, "eps": params.eps, "precision": params.precision,
            "matrix_out": matrix_out, "svg": svg,
        }),
        Command::Render { matrix, example, params, out } => json!({
            "matrix": matrix,
            "example": example.map(|w| format!("{w:?}").to_lowercase()),
            "n": params.n, "eps": params.eps, "precision": params.precision, "out": out,
        }),
    };
    c["seed"] = json!(g.seed);
    c["budget"] = if g.unbounded {
        json!("unbounded")
    } else {
        json!({ "max_pairs": g.max_pairs, "max_seconds": g.max_seconds })
    };
    c
}

pub fn dispatch(g: &Global, cmd: &Command) -> Result<Report, CliError> {
    let (checks, data) = match cmd {
        Command::Gens { m, n, out } => gens(g, *m, *n, out.as_deref())?,
        Command::GbCheck { m, n, gens } => gb_check(g, *m, *n, gens.as_deref())?,
        Command::Member { m, n, expr, poly } => {
            let text = match (expr, poly) {
                (Some(e), _) => e.clone(),
                (None, Some(p)) => read(p)?,
                (None, None) => return Err(CliError::Usage("give --expr or --poly".into())),
            };
            member(*m, *n, &text)?
        }
        Command::Pullback { out } => pullback(out.as_deref())?,
        Command::Sextic { triple, n, out } => sextic(triple, *n, out.as_deref())?,
        Command::DimCheck { m, n, samples } => {
            let r = dimension_check(*m, *n, *samples, &mut rng(g));
            (vec![Check::bool("jacobian_rank", r.passed(), json!({ "max_rank": r.max_rank, "expected": r.expected }))], to_value(r))
        }
        Command::InvarianceCheck { groups, trials } => invariance(g, *groups, *trials)?,
        Command::MinimalityCheck { m, n } => {
            let r = minimality_check(&generators(*m, *n)?);
            let quartic = Check::bool("quartics_independent", r.quartic_rank == r.quartics, json!({ "rank": r.quartic_rank, "quartics": r.quartics }));
            let outside: Vec<&ColumnTriple> = r.sextics.iter().filter(|s| !s.outside_span).map(|s| &s.triple).collect();
            let sextic = Check::bool("sextics_outside_span", outside.is_empty(), json!({ "sextics": r.sextics.len(), "in_span": outside }));
            (vec![quartic, sextic], to_value(r))
        }
        Command::VanishCheck { m, n, samples } => vanish(g, *m, *n, *samples)?,
        Command::Nnrank { matrix } => match read_matrix(matrix)? {
            AnyMatrix::Rational(mat) => nnrank(&mat)?,
            AnyMatrix::Sqrt2(mat) => nnrank(&mat)?,
        },
        Command::Boundary { matrix } => match read_matrix(matrix)? {
            AnyMatrix::Rational(mat) => boundary(&mat)?,
            AnyMatrix::Sqrt2(mat) => boundary(&mat)?,
        },
        Command::Example { which, params, matrix_out, svg } => {
            example(*which, params, matrix_out.as_deref(), svg.as_deref())?
        }
        Command::Render { matrix, example: ex, params, out } => match (matrix, ex) {
            (Some(p), _) => match read_matrix(p)? {
                AnyMatrix::Rational(mat) => render_matrix(&mat, out)?,
                AnyMatrix::Sqrt2(mat) => render_matrix(&mat, out)?,
            },
            (None, Some(k)) => {
                let (_, data) = example(*k, params, None, Some(out))?;
                let svg = data["svg"].clone();
                (vec![Check::bool("svg_written", true, svg.clone())], svg)
            }
            (None, None) => return Err(CliError::Usage("give --matrix or --example".into())),
        },
    };
    Ok(Report::new(cmd.name(), config(g, cmd), checks, data))
}

fn gens(g: &Global, m: usize, n: usize, out: Option<&Path>) -> Out {
    let set = generators(m, n)?;
    let (want_q, want_s) = (binom(m, 4) * binom(n, 4), binom(n, 3));
    let mut degrees: BTreeMap<(Vec<u32>, Vec<u32>), usize> = BTreeMap::new();
    let mut entries = Vec::new();
    let mut homogeneous = true;
    let mut record = |p: &Polynomial, mut e: Value| -> Result<Value, CliError> {
        let md = p.multidegree(m, n)?;
        match &md {
            Some(d) => *degrees.entry((d.rows.clone(), d.cols.clone())).or_default() += 1,
            None => homogeneous = false,
        }
        e["multidegree"] = to_value(&md);
        e["terms"] = json!(p.len());
        Ok(e)
    };
    for q in &set.quartics {
        entries.push(record(&q.poly, json!({ "kind": "quartic", "rows": q.rows, "cols": q.cols }))?);
    }
    for (t, p) in &set.sextics {
        entries.push(record(p, json!({ "kind": "sextic", "triple": t }))?);
    }
    if let Some(path) = out {
        let mut text = format!("# generators m={m} n={n} quartics={} sextics={}\n", set.quartics.len(), set.sextics.len());
        for p in set.all() {
            text.push_str(&p.to_string());
            text.push('\n');
        }
        write(path, &text)?;
    }
    let checks = vec![
        Check::bool("quartic_count", set.quartics.len() == want_q, json!({ "found": set.quartics.len(), "expected": want_q })),
        Check::bool("sextic_count", set.sextics.len() == want_s, json!({ "found": set.sextics.len(), "expected": want_s })),
        Check::bool("multihomogeneous", homogeneous, ()),
    ];
    let multidegrees: Vec<Value> =
        degrees.into_iter().map(|((rows, cols), count)| json!({ "rows": rows, "cols": cols, "count": count })).collect();
    let data = json!({
        "m": m, "n": n, "seed": g.seed,
        "quartics": set.quartics.len(), "sextics": set.sextics.len(), "total": set.len(),
        "multidegrees": multidegrees,
        "generators": entries,
    });
    Ok((checks, data))
}

fn run_status(s: RunStatus, ok: bool) -> Status {
    match s {
        RunStatus::Aborted => Status::Aborted,
        RunStatus::Completed => Status::from_bool(ok),
    }
}

fn gb_check(g: &Global, m: usize, n: usize, file: Option<&Path>) -> Out {
    let options = Options { budget: g.budget(), ..Options::default() };
    let r = match file {
        Some(p) => verify_gb_polys(m, n, &read_generator_file(&read(p)?)?, &options),
        None => verify_gb(&generators(m, n)?, &options),
    };
    let crit = Check::new(
        "buchberger_criterion",
        run_status(r.certificate.status, r.certificate.is_groebner),
        json!({ "failing_pairs": r.certificate.failing.len(), "stats": r.certificate.stats }),
    );
    let reduced = Check::new(
        "reduced_basis_equal",
        match r.reduced_equal {
            Some(eq) => Status::from_bool(eq),
            None if r.status == RunStatus::Aborted => Status::Aborted,
            None => Status::Fail,
        },
        json!({ "stats": r.buchberger_stats }),
    );
    let mut data = to_value(&r);
    if g.timing {
        data["seconds"] = json!(r.seconds);
    }
    Ok((vec![crit, reduced], data))
}

fn member(m: usize, n: usize, text: &str) -> Out {
    let p = parse_poly(text)?;
    p.multidegree(m, n)?;
    let set = generators(m, n)?;
    let gb = cached_basis(&set.all(), &MonomialOrder::Grevlex);
    let remainder = gb.normal_form(&p);
    let verdict = remainder.is_zero();
    let data = json!({
        "polynomial": p.to_string(),
        "member": verdict,
        "remainder": remainder.to_string(),
        "generators": set.len(),
        "basis_size": gb.len(),
    });
    Ok((vec![Check::bool("decided", true, json!({ "member": verdict }))], data))
}

fn pullback(out: Option<&Path>) -> Out {
    let pf = pullback_f();
    let d = det_d();
    let (q, r) = divide(pf, std::slice::from_ref(&d), &MonomialOrder::Grevlex)?;
    let f63 = &q[0];
    let bideg = f63.bidegree();
    let rows = a_row_degrees(f63, 4);
    if let Some(path) = out {
        write(path, &format!("{f63}\n"))?;
    }
    let cached_equal = r.is_zero() && f63 == compute_f63();
    let checks = vec![
        Check::bool("exact_division", r.is_zero(), json!({ "remainder": r.to_string() })),
        Check::bool("cofactor_bidegree", bideg == Some((6, 3)), json!({ "bidegree": bideg })),
        Check::bool("a_row_degrees", rows.as_deref() == Some(&[2, 2, 1, 1][..]), json!({ "rows": rows })),
        Check::bool("product_identity", &(f63 * &d) == pf && cached_equal, ()),
    ];
    let data = json!({
        "pullback_terms": pf.len(),
        "divisor_terms": d.len(),
        "cofactor_terms": f63.len(),
        "divisor": d.to_string(),
    });
    Ok((checks, data))
}

fn sextic(triple: &str, n: usize, out: Option<&Path>) -> Out {
    let t = ColumnTriple::parse(triple)?;
    let s = solve_sextic(t, n)?;
    let pulled = mu_pullback(&s.sextic, 4, n)?;
    let identity = pulled == compute_f63() * &det3_b(t);
    let md = s.sextic.multidegree(4, n)?;
    if let Some(path) = out {
        write(path, &format!("{}\n", s.sextic))?;
    }
    let checks = vec![
        Check::bool("pullback_identity", identity, ()),
        Check::bool("degree_six", s.sextic.total_degree() == Some(6) && md.is_some(), json!({ "multidegree": md })),
    ];
    let mut data = to_value(&s);
    data["terms"] = json!(s.sextic.len());
    data["sextic"] = json!(s.sextic.to_string());
    Ok((checks, data))
}

fn invariance(g: &Global, groups: usize, trials: usize) -> Out {
    let mut rng = rng(g);
    let diag = Matrix::from_i64_rows(&[&[2, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
    let sl = random_sl3(&mut rng);
    let d = check_gl3_equivariance(&diag, trials, &mut rng);
    let s = check_gl3_equivariance(&sl, trials, &mut rng);
    let random: Vec<_> = (0..groups).map(|_| check_gl3_equivariance(&random_gl3(&mut rng), trials, &mut rng)).collect();
    let identities: usize = random.iter().map(|r| r.f63_checks_passed + r.pullback_checks_passed).sum();
    let failures: Vec<_> = random.iter().flat_map(|r| r.failures.iter()).collect();
    let checks = vec![
        Check::bool("diag_scaling", d.passed() && d.det_g == "2", json!({ "det": d.det_g, "failures": d.failures })),
        Check::bool("sl3_invariance", s.passed() && s.det_g == "1", json!({ "det": s.det_g, "failures": s.failures })),
        Check::bool(
            "gl3_equivariance",
            random.iter().all(|r| r.passed()),
            json!({ "groups": groups, "trials": trials, "identities_passed": identities, "failures": failures }),
        ),
    ];
    Ok((checks, json!({ "diag": d, "sl3": s, "random": random })))
}

fn vanish(g: &Global, m: usize, n: usize, samples: usize) -> Out {
    let mut rng = rng(g);
    let set = generators(m, n)?;
    let r = vanishing_check(&set.all(), &ZeroPattern::canonical(), m, n, samples, &mut rng);
    let draws = generic_nonvanishing(&set, 20, &mut rng);
    let checks = vec![
        Check::bool("vanishes_on_component", r.nonzero == 0, json!({ "nonzero": r.nonzero, "first_failure": r.first_failure })),
        Check::bool("nonzero_off_component", draws.is_some(), json!({ "draws": draws })),
    ];
    Ok((checks, json!({ "vanishing": r, "generic_draws": draws })))
}

fn nonnegative<T: Scalar>(m: &Matrix<T>) -> bool {
    m.entries().iter().all(|x| x.signum_i8() >= 0)
}

fn nnrank<T: Scalar>(m: &Matrix<T>) -> Out {
    let r = nnrank_le3(m)?;
    let mut checks = Vec::new();
    if r.decision {
        let ok = r.factorization.as_ref().is_some_and(|(a, b)| {
            a.cols() <= 3 && nonnegative(a) && nonnegative(b) && a.mul(b).is_ok_and(|p| p == *m)
        });
        checks.push(Check::bool("factorization_verified", ok, json!({ "inner_dimension": r.factorization.as_ref().map(|f| f.0.cols()) })));
    } else {
        let ok = match r.method {
            NnrankMethod::RankAboveThree => r.rank > 3,
            NnrankMethod::Candidates => r.candidates.iter().all(|c| !c.is_valid()),
            NnrankMethod::InnerEqualsOuter => true,
            _ => false,
        };
        checks.push(Check::bool("candidates_exhausted", ok, json!({ "method": r.method, "candidates": r.candidates.len() })));
    }
    let t = nnrank_le3(&m.transpose())?;
    checks.push(Check::bool("transpose_consistent", t.decision == r.decision, json!({ "transpose_decision": t.decision })));
    Ok((checks, to_value(&r)))
}

fn boundary<T: Scalar>(m: &Matrix<T>) -> Out {
    let r = boundary_test(m)?;
    Ok((vec![Check::bool("classified", true, json!({ "status": r.status }))], to_value(&r)))
}

fn render_matrix<T: Scalar>(m: &Matrix<T>, out: &Path) -> Out {
    let np = chart_from_matrix(m)?;
    let tris = candidate_triangles(&np.w, &np.v)?;
    let svg = svg_render(&np.w, &[&np.v], &tris);
    write(out, &svg)?;
    let detail = svg_counts(&svg);
    Ok((vec![Check::bool("svg_written", true, detail.clone())], json!({ "svg": detail, "polygons": np })))
}

fn svg_counts(svg: &str) -> Value {
    let count = |class: &str| svg.matches(&format!("class=\"{class}\"")).count();
    json!({ "outer": count("outer"), "inner": count("inner"), "triangles": count("triangle") })
}

fn report_checks(r: &ExampleReport) -> Vec<Check> {
    r.items.iter().map(|i| Check::bool(format!("item_{}", i.item), i.pass, &i.detail)).collect()
}

fn example_data<T: Scalar>(
    report: &ExampleReport,
    w: &ConvexPolygon<T>,
    v: &ConvexPolygon<T>,
    v_prime: &ConvexPolygon<T>,
    matrix: &Matrix<T>,
    triangles: &[TriangleCandidate<T>],
    matrix_out: Option<&Path>,
    svg_out: Option<&Path>,
) -> Result<Value, CliError> {
    let matrix_json = matrix_to_json(matrix);
    if let Some(p) = matrix_out {
        write(p, &matrix_json)?;
    }
    let mut data = json!({
        "parameters": report.parameters,
        "w": w, "v": v, "v_prime": v_prime,
        "triangles": triangles,
        "matrix": serde_json::from_str::<Value>(&matrix_json).expect("matrix json"),
    });
    if let Some(p) = svg_out {
        let svg = svg_render(w, &[v, v_prime], triangles);
        write(p, &svg)?;
        data["svg"] = svg_counts(&svg);
    }
    Ok(data)
}

fn example(which: ExampleKind, params: &ExampleParams, matrix_out: Option<&Path>, svg: Option<&Path>) -> Out {
    let eps = |default: &str| -> Result<Rational, CliError> { Ok(parse_rational(params.eps.as_deref().unwrap_or(default))?) };
    match which {
        ExampleKind::Square => {
            let ex = square_example(&eps("1/100")?)?;
            let data = example_data(&ex.report, &ex.w, &ex.v, &ex.v_prime, &ex.matrix, &ex.triangles, matrix_out, svg)?;
            Ok((report_checks(&ex.report), data))
        }
        ExampleKind::Moitra => {
            let ex = moitra_example(params.n, &eps("1/1000")?, params.precision)?;
            let data = example_data(&ex.report, &ex.w, &ex.v, &ex.v_prime, &ex.matrix, &ex.triangles, matrix_out, svg)?;
            Ok((report_checks(&ex.report), data))
        }
    }
}
