//! Verification routines over the generators of `X_{m,n}`.

use std::collections::HashMap;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    compute_f63, eval_ab, eval_x, pullback_f, sample_generic, support_columns, ColumnTriple, GeneratorSet,
    ZeroPattern, SEXTIC_ROW_DEGREES,
};
use crate::arith::{random_rational, rational_to_string, sparse_row_from_pairs, Matrix, Rational, SparseEchelon};
use crate::groebner::{autoreduce, buchberger, is_groebner_basis, Certificate, Options, RunStatus, Stats};
use crate::poly::{Family, Monomial, MonomialOrder, Polynomial, Var};

/// Random invertible 3x3 rational matrix.
pub fn random_gl3<R: Rng + ?Sized>(rng: &mut R) -> Matrix<Rational> {
    loop {
        let g = Matrix::from_fn(3, 3, |_, _| random_rational(rng));
        if !g.determinant().expect("square").is_zero() {
            return g;
        }
    }
}

/// Random 3x3 rational matrix of determinant one.
pub fn random_sl3<R: Rng + ?Sized>(rng: &mut R) -> Matrix<Rational> {
    let g = random_gl3(rng);
    let d = g.determinant().expect("square");
    Matrix::from_fn(3, 3, |i, j| if i == 0 { g[(i, j)].clone() / d.clone() } else { g[(i, j)].clone() })
}

fn mat_strings(m: &Matrix<Rational>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(rational_to_string).collect()).collect()
}

/// A point at which an identity failed.
#[derive(Clone, Debug, Serialize)]
pub struct EquivarianceWitness {
    pub identity: &'static str,
    pub a: Vec<Vec<String>>,
    pub b: Vec<Vec<String>>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivarianceReport {
    pub g: Vec<Vec<String>>,
    pub det_g: String,
    pub trials: usize,
    pub f63_checks_passed: usize,
    pub pullback_checks_passed: usize,
    pub failures: Vec<EquivarianceWitness>,
}

impl EquivarianceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.f63_checks_passed == self.trials && self.pullback_checks_passed == self.trials
    }
}

/// Check `f63(A g, g^-1 B) = det(g) f63(A, B)` and
/// `(mu^* f)(A g, g^-1 B) = (mu^* f)(A, B)` at random points.
pub fn check_gl3_equivariance<R: Rng + ?Sized>(g: &Matrix<Rational>, trials: usize, rng: &mut R) -> EquivarianceReport {
    let det = g.determinant().expect("3x3");
    assert!(!det.is_zero(), "g must be invertible");
    let ginv = g.inverse().expect("invertible");
    let f63 = compute_f63();
    let pf = pullback_f();
    let points: Vec<_> = (0..trials).map(|_| sample_generic(4, 3, rng)).collect();
    let results: Vec<(bool, bool, Vec<EquivarianceWitness>)> = points
        .par_iter()
        .map(|(a, b)| {
            let ag = a.mul(g).expect("shapes");
            let gb = ginv.mul(b).expect("shapes");
            let mut fails = Vec::new();
            let lhs = eval_ab(f63, &ag, &gb).expect("assigned");
            let rhs = &det * eval_ab(f63, a, b).expect("assigned");
            let ok1 = lhs == rhs;
            if !ok1 {
                fails.push(EquivarianceWitness {
                    identity: "f63",
                    a: mat_strings(a),
                    b: mat_strings(b),
                    lhs: rational_to_string(&lhs),
                    rhs: rational_to_string(&rhs),
                });
            }
            let lhs = eval_ab(pf, &ag, &gb).expect("assigned");
            let rhs = eval_ab(pf, a, b).expect("assigned");
            let ok2 = lhs == rhs;
            if !ok2 {
                fails.push(EquivarianceWitness {
                    identity: "pullback",
                    a: mat_strings(a),
                    b: mat_strings(b),
                    lhs: rational_to_string(&lhs),
                    rhs: rational_to_string(&rhs),
                });
            }
            (ok1, ok2, fails)
        })
        .collect();
    EquivarianceReport {
        g: mat_strings(g),
        det_g: rational_to_string(&det),
        trials,
        f63_checks_passed: results.iter().filter(|r| r.0).count(),
        pullback_checks_passed: results.iter().filter(|r| r.1).count(),
        failures: results.into_iter().flat_map(|r| r.2).collect(),
    }
}

/// Result of evaluating generators at sampled points.
#[derive(Clone, Debug, Serialize)]
pub struct VanishingReport {
    pub m: usize,
    pub n: usize,
    pub samples: usize,
    pub evaluations: usize,
    pub nonzero: usize,
    /// First failing generator index and sample, if any.
    pub first_failure: Option<(usize, usize)>,
}

/// Evaluate every generator at `samples` points `A B` with patterned
/// factors (or the transposed pattern).
pub fn vanishing_check<R: Rng + ?Sized>(
    gens: &[Polynomial],
    pattern: &ZeroPattern,
    m: usize,
    n: usize,
    samples: usize,
    rng: &mut R,
) -> VanishingReport {
    let points: Vec<Matrix<Rational>> = (0..samples)
        .map(|_| {
            let (a, b) = pattern.sample(m, n, rng);
            a.mul(&b).expect("shapes")
        })
        .collect();
    let bad: Vec<(usize, usize)> = points
        .par_iter()
        .enumerate()
        .flat_map_iter(|(s, pt)| {
            gens.iter()
                .enumerate()
                .filter(|(_, g)| !eval_x(g, pt).expect("assigned").is_zero())
                .map(move |(k, _)| (k, s))
                .collect::<Vec<_>>()
        })
        .collect();
    VanishingReport {
        m,
        n,
        samples,
        evaluations: samples * gens.len(),
        nonzero: bad.len(),
        first_failure: bad.first().copied(),
    }
}

/// Draw generic rank-3 points until some sextic is nonzero there; returns
/// the number of draws used, or `None` after `max_draws`.
pub fn generic_nonvanishing<R: Rng + ?Sized>(set: &GeneratorSet, max_draws: usize, rng: &mut R) -> Option<usize> {
    for draw in 1..=max_draws {
        let (a, b) = sample_generic(set.m, set.n, rng);
        let pt = a.mul(&b).expect("shapes");
        if set.sextics.values().any(|s| !eval_x(s, &pt).expect("assigned").is_zero()) {
            return Some(draw);
        }
    }
    None
}

#[derive(Clone, Debug, Serialize)]
pub struct DimensionReport {
    pub m: usize,
    pub n: usize,
    pub parameters: usize,
    pub samples: usize,
    pub ranks: Vec<usize>,
    pub max_rank: usize,
    pub expected: usize,
}

impl DimensionReport {
    pub fn passed(&self) -> bool {
        self.max_rank == self.expected
    }
}

/// Exact rank of the Jacobian of the patterned parametrization at random
/// points.
pub fn dimension_check<R: Rng + ?Sized>(m: usize, n: usize, samples: usize, rng: &mut R) -> DimensionReport {
    let pattern = ZeroPattern::canonical();
    let params = pattern.free_parameters(m, n);
    let mut ranks = Vec::new();
    for _ in 0..samples {
        let (a, b) = pattern.sample(m, n, rng);
        let jac = Matrix::from_fn(m * n, params.len(), |r, c| {
            let (i, j) = (r / n + 1, r % n + 1);
            let v = params[c];
            let (p, q) = v.indices();
            match v.family() {
                // d x_ij / d a_pq = [i == p] b_qj
                Family::A if p == i => b[(q - 1, j - 1)].clone(),
                // d x_ij / d b_pq = [j == q] a_ip
                Family::B if q == j => a[(i - 1, p - 1)].clone(),
                _ => Rational::zero(),
            }
        });
        ranks.push(jac.rank());
    }
    DimensionReport {
        m,
        n,
        parameters: params.len(),
        samples,
        max_rank: ranks.iter().copied().max().unwrap_or(0),
        ranks,
        expected: 3 * m + 3 * n - 10,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SexticMinimality {
    pub triple: ColumnTriple,
    pub span_size: usize,
    pub span_rank: usize,
    pub outside_span: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MinimalityReport {
    pub m: usize,
    pub n: usize,
    pub quartics: usize,
    pub quartic_rank: usize,
    pub sextics: Vec<SexticMinimality>,
}

impl MinimalityReport {
    pub fn passed(&self) -> bool {
        self.quartic_rank == self.quartics && self.sextics.iter().all(|s| s.outside_span)
    }
}

/// Dictionary from monomials to column indices, for coefficient vectors.
#[derive(Default)]
struct MonomialIndex(HashMap<Monomial, usize>);

impl MonomialIndex {
    fn row(&mut self, p: &Polynomial) -> Vec<(usize, Rational)> {
        let next = self.0.len();
        let pairs: Vec<(usize, Rational)> = p
            .terms()
            .iter()
            .map(|(m, c)| {
                let len = self.0.len();
                let idx = *self.0.entry(m.clone()).or_insert(len);
                (idx, c.clone())
            })
            .collect();
        let _ = next;
        sparse_row_from_pairs(pairs)
    }
}

/// Products `x[1,a] x[2,b] * minor(rows 1..4, C)` with the multidegree of
/// the sextic for `t`.
pub fn sextic_degree_products(t: ColumnTriple) -> Vec<Polynomial> {
    let cols = support_columns(t);
    let mut need: HashMap<usize, u32> = HashMap::new();
    for c in [1, 2, 3].into_iter().chain(t.0) {
        *need.entry(c).or_insert(0) += 1;
    }
    let mut out = Vec::new();
    let k = cols.len();
    for i1 in 0..k {
        for i2 in i1 + 1..k {
            for i3 in i2 + 1..k {
                for i4 in i3 + 1..k {
                    let c4 = [cols[i1], cols[i2], cols[i3], cols[i4]];
                    let mut rest = need.clone();
                    for c in c4 {
                        *rest.get_mut(&c).expect("support") -= 1;
                    }
                    let minor = super::minor4x4([1, 2, 3, 4], c4).expect("valid");
                    for &a in &cols {
                        for &b in &cols {
                            let mut r = rest.clone();
                            let ok = [a, b].iter().all(|c| {
                                let e = r.get_mut(c).expect("support");
                                if *e == 0 {
                                    false
                                } else {
                                    *e -= 1;
                                    true
                                }
                            });
                            if ok && r.values().all(|&e| e == 0) {
                                let mono = Monomial::from_pairs([(Var::x(1, a), 1), (Var::x(2, b), 1)]);
                                out.push(minor.mul_term(&mono, &Rational::one()));
                            }
                        }
                    }
                }
            }
        }
    }
    debug_assert!(SEXTIC_ROW_DEGREES == [2, 2, 1, 1]);
    out
}

/// Whether `p` lies in the linear span of `span`.
pub fn in_linear_span(p: &Polynomial, span: &[Polynomial]) -> (bool, usize) {
    let mut idx = MonomialIndex::default();
    let mut ech = SparseEchelon::new();
    for q in span {
        ech.insert(idx.row(q));
    }
    let target = idx.row(p);
    (ech.contains(&target), ech.rank())
}

/// Linear independence of the quartics, and for each sextic that it is not
/// a combination of lower-degree products and other sextics of the same
/// multidegree.
pub fn minimality_check(set: &GeneratorSet) -> MinimalityReport {
    let mut idx = MonomialIndex::default();
    let mut ech = SparseEchelon::new();
    for q in &set.quartics {
        ech.insert(idx.row(&q.poly));
    }
    let quartic_rank = ech.rank();
    let sextics: Vec<SexticMinimality> = set
        .sextics
        .par_iter()
        .map(|(t, s)| {
            let md = s.multidegree(set.m, set.n).expect("x-space");
            let mut span = sextic_degree_products(*t);
            span.extend(
                set.sextics
                    .iter()
                    .filter(|(u, o)| *u != t && o.multidegree(set.m, set.n).expect("x-space") == md)
                    .map(|(_, o)| o.clone()),
            );
            let (inside, rank) = in_linear_span(s, &span);
            SexticMinimality { triple: *t, span_size: span.len(), span_rank: rank, outside_span: !inside }
        })
        .collect();
    MinimalityReport { m: set.m, n: set.n, quartics: set.quartics.len(), quartic_rank, sextics }
}

#[derive(Clone, Debug, Serialize)]
pub struct GbReport {
    pub m: usize,
    pub n: usize,
    pub generators: usize,
    pub status: RunStatus,
    pub is_groebner: bool,
    pub reduced_equal: Option<bool>,
    pub certificate: Certificate,
    pub buchberger_stats: Option<Stats>,
    #[serde(skip)]
    pub seconds: f64,
}

impl GbReport {
    pub fn passed(&self) -> bool {
        self.status == RunStatus::Completed && self.is_groebner && self.reduced_equal == Some(true)
    }
}

/// Buchberger's criterion on the generators, and equality of the reduced
/// basis computed from scratch with the inter-reduced generators.
pub fn verify_gb(set: &GeneratorSet, options: &Options) -> GbReport {
    verify_gb_polys(set.m, set.n, &set.all(), options)
}

/// [`verify_gb`] for an arbitrary list, e.g. one read from a file.
pub fn verify_gb_polys(m: usize, n: usize, gens: &[Polynomial], options: &Options) -> GbReport {
    let start = Instant::now();
    let order = MonomialOrder::Grevlex;
    let cert = is_groebner_basis(gens, &order, options);
    let mut report = GbReport {
        m,
        n,
        generators: gens.len(),
        status: cert.status,
        is_groebner: cert.is_groebner,
        reduced_equal: None,
        certificate: cert,
        buchberger_stats: None,
        seconds: 0.0,
    };
    if report.status == RunStatus::Completed {
        let mut remaining = options.clone();
        remaining.budget.max_seconds -= start.elapsed().as_secs_f64();
        let run = buchberger(gens, &order, &remaining);
        report.status = run.status;
        report.buchberger_stats = Some(run.stats);
        if let Some(gb) = run.basis {
            let mut a = gb.generators().to_vec();
            let mut b = autoreduce(gens, &order);
            a.sort_by_key(|p| p.to_string());
            b.sort_by_key(|p| p.to_string());
            report.reduced_equal = Some(a == b);
        }
    }
    report.seconds = start.elapsed().as_secs_f64();
    report
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentCount {
    pub m: u64,
    pub n: u64,
    pub closed_form: i128,
    pub by_type: i128,
    pub agree: bool,
}

fn binom(n: u64, k: u64) -> i128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// Number of irreducible components of the algebraic boundary, by the
/// closed formula and by counting components of each type.
pub fn component_count(m: u64, n: u64) -> ComponentCount {
    let (mi, ni) = (m as i128, n as i128);
    let closed = mi * ni + mi * (mi - 1) * (mi - 2) * (mi + ni - 6) * ni * (ni - 1) * (ni - 2) / 4;
    let by_type = mi * ni + 36 * binom(m, 3) * binom(n, 4) + 36 * binom(m, 4) * binom(n, 3);
    ComponentCount { m, n, closed_form: closed, by_type, agree: closed == by_type }
}

/// Kernel of the patterned pullback by elimination: a Gröbner basis of
/// `(x[i,j] - sum_k a[i,k] b[k,j])` in a block order with the factor
/// variables first, intersected with the x-variables.
pub fn elimination_kernel(m: usize, n: usize, options: &Options) -> (RunStatus, Vec<Polynomial>, Stats) {
    let pattern = ZeroPattern::canonical();
    let params = pattern.free_parameters(m, n);
    let order = MonomialOrder::block(params.iter().copied());
    let gens: Vec<Polynomial> = (1..=m)
        .flat_map(|i| (1..=n).map(move |j| (i, j)))
        .map(|(i, j)| {
            let img = super::mu_image(i, j).substitute(|v| {
                let zero = match v.family() {
                    Family::A => pattern.a_zeros.contains(&v.indices()),
                    Family::B => pattern.b_zeros.contains(&v.indices()),
                    Family::X => false,
                };
                zero.then(Polynomial::zero)
            });
            &Polynomial::var(Var::x(i, j)) - &img
        })
        .collect();
    let run = buchberger(&gens, &order, options);
    let kernel = run
        .basis
        .map(|gb| {
            gb.generators().iter().filter(|p| p.vars().iter().all(|v| v.family() == Family::X)).cloned().collect()
        })
        .unwrap_or_default();
    (run.status, kernel, run.stats)
}

/// Generators of the transposed component on `m x n` matrices, from
/// `generators(n, m)` with row and column indices swapped.
pub fn transposed_generators(m: usize, n: usize) -> crate::Result<Vec<Polynomial>> {
    Ok(super::generators(n, m)?.all().iter().map(super::transpose_poly).collect())
}
