//! Buchberger's algorithm over the rationals, with the product and chain
//! criteria, Gröbner-basis verification, normal forms and membership.
//!
//! Pairs are processed in batches of minimal lcm degree. Which pairs of a
//! batch are skipped is decided sequentially; the surviving S-polynomials
//! are reduced in parallel against a frozen snapshot of the basis; the
//! remainders are then inserted one by one in pair order. The output does
//! not depend on the number of threads.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::Rational;
use crate::poly::{find_divisor, reduce_terms, Divisor, Monomial, MonomialOrder, Polynomial, Term};

pub use crate::poly::s_polynomial;

/// Limits on a Buchberger or verification run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Budget {
    pub max_pairs: u64,
    pub max_seconds: f64,
}

impl Budget {
    pub const UNBOUNDED: Budget = Budget { max_pairs: u64::MAX, max_seconds: f64::INFINITY };
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_pairs: 1_000_000, max_seconds: 1800.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub product_criterion: bool,
    pub chain_criterion: bool,
    pub budget: Budget,
}

impl Default for Options {
    fn default() -> Self {
        Options { product_criterion: true, chain_criterion: true, budget: Budget::default() }
    }
}

/// Counters collected during a run. Timing is kept separate so that the
/// counters are reproducible.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub pairs_considered: u64,
    pub skipped_product: u64,
    pub skipped_chain: u64,
    pub reductions: u64,
    pub zero_reductions: u64,
    pub batches: u64,
    pub basis_size: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum RunStatus {
    Completed,
    Aborted,
}

/// A Gröbner basis together with its order.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    generators: Vec<Polynomial>,
    order: MonomialOrder,
    reduced: bool,
    divisors: Vec<Divisor>,
}

impl PartialEq for GroebnerBasis {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators && self.order == other.order && self.reduced == other.reduced
    }
}

impl GroebnerBasis {
    /// Wrap polynomials already known to form a Gröbner basis. Callers that
    /// do not know this should use [`GroebnerBasis::verified`].
    pub fn trusted(generators: Vec<Polynomial>, order: MonomialOrder, reduced: bool) -> Self {
        let divisors = generators.iter().map(|g| Divisor::new(g, &order)).collect();
        GroebnerBasis { generators, order, reduced, divisors }
    }

    /// Run the verification and wrap on success.
    pub fn verified(generators: Vec<Polynomial>, order: MonomialOrder, options: &Options) -> Result<Self, Certificate> {
        let cert = is_groebner_basis(&generators, &order, options);
        if cert.is_groebner && cert.status == RunStatus::Completed {
            Ok(Self::trusted(generators, order, false))
        } else {
            Err(cert)
        }
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        let rem = reduce_terms(p.terms_in(&self.order), &self.divisors, &self.order, true, None);
        Polynomial::from_terms(rem)
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.normal_form(p).is_zero()
    }
}

/// Remainder of `p` modulo a verified basis.
pub fn normal_form(p: &Polynomial, gb: &GroebnerBasis) -> Polynomial {
    gb.normal_form(p)
}

/// Outcome of [`buchberger`].
#[derive(Clone, Debug)]
pub struct Run {
    pub status: RunStatus,
    /// Present when the run completed.
    pub basis: Option<GroebnerBasis>,
    pub stats: Stats,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

fn monic_terms(mut t: Vec<Term>) -> Vec<Term> {
    if let Some((_, c)) = t.first() {
        if !c.is_one() {
            let inv = Rational::one() / c;
            for (_, v) in t.iter_mut() {
                *v *= &inv;
            }
        }
    }
    t
}

/// Descending `order` term list of the S-polynomial of two divisors.
fn s_terms(a: &Divisor, b: &Divisor, lcm: &Monomial, order: &MonomialOrder) -> Vec<Term> {
    let qa = a.lead().quotient_of(lcm).expect("lcm");
    let qb = b.lead().quotient_of(lcm).expect("lcm");
    let ca = Rational::one() / a.lead_coeff();
    let cb = Rational::one() / b.lead_coeff();
    let pa = Polynomial::from_terms(a.terms()[1..].iter().map(|(m, c)| (m.mul(&qa), c * &ca)));
    let pb = Polynomial::from_terms(b.terms()[1..].iter().map(|(m, c)| (m.mul(&qb), c * &cb)));
    (&pa - &pb).terms_in(order)
}

/// Pair bookkeeping shared by the engine and the verifier.
struct PairState {
    done: HashSet<(usize, usize)>,
}

impl PairState {
    fn key(i: usize, j: usize) -> (usize, usize) {
        (i.min(j), i.max(j))
    }

    /// Decide whether a pair may be skipped, and mark it treated.
    fn treat(&mut self, p: &Pair, leads: &[Monomial], options: &Options, stats: &mut Stats) -> bool {
        stats.pairs_considered += 1;
        let skip = if options.product_criterion && leads[p.i].coprime(&leads[p.j]) {
            stats.skipped_product += 1;
            true
        } else if options.chain_criterion
            && (0..leads.len()).any(|k| {
                k != p.i
                    && k != p.j
                    && leads[k].divides(&p.lcm)
                    && self.done.contains(&Self::key(p.i, k))
                    && self.done.contains(&Self::key(k, p.j))
            })
        {
            stats.skipped_chain += 1;
            true
        } else {
            false
        };
        self.done.insert(Self::key(p.i, p.j));
        skip
    }
}

fn pop_batch(pending: &mut Vec<Pair>) -> Vec<Pair> {
    let Some(d) = pending.iter().map(|p| p.lcm.degree()).min() else {
        return Vec::new();
    };
    let (mut batch, rest): (Vec<Pair>, Vec<Pair>) = pending.drain(..).partition(|p| p.lcm.degree() == d);
    *pending = rest;
    batch.sort_by_key(|p| (p.i, p.j));
    batch
}

const REDUCTION_CHUNK: usize = 256;

fn over_budget(budget: &Budget, stats: &Stats, start: Instant) -> bool {
    stats.pairs_considered > budget.max_pairs || start.elapsed().as_secs_f64() > budget.max_seconds
}

/// Buchberger's algorithm. The completed basis is reduced and monic.
pub fn buchberger(gens: &[Polynomial], order: &MonomialOrder, options: &Options) -> Run {
    let start = Instant::now();
    let mut stats = Stats::default();
    let mut basis: Vec<Divisor> = Vec::new();
    let mut leads: Vec<Monomial> = Vec::new();
    let mut pending: Vec<Pair> = Vec::new();
    let mut state = PairState { done: HashSet::new() };

    let insert = |t: Vec<Term>, basis: &mut Vec<Divisor>, leads: &mut Vec<Monomial>, pending: &mut Vec<Pair>| {
        let t = monic_terms(t);
        let d = Divisor::new(&Polynomial::from_terms(t), order);
        let k = basis.len();
        for (i, l) in leads.iter().enumerate() {
            pending.push(Pair { i, j: k, lcm: l.lcm(d.lead()) });
        }
        leads.push(d.lead().clone());
        basis.push(d);
    };

    for g in gens.iter().filter(|g| !g.is_zero()) {
        let r = reduce_terms(g.terms_in(order), &basis, order, true, None);
        if !r.is_empty() {
            insert(r, &mut basis, &mut leads, &mut pending);
        }
    }

    while !pending.is_empty() {
        if over_budget(&options.budget, &stats, start) {
            stats.basis_size = basis.len() as u64;
            return Run { status: RunStatus::Aborted, basis: None, stats, seconds: start.elapsed().as_secs_f64() };
        }
        stats.batches += 1;
        let batch = pop_batch(&mut pending);
        let work: Vec<Pair> = batch.into_iter().filter(|p| !state.treat(p, &leads, options, &mut stats)).collect();
        // Fixed-size chunks keep the budget responsive without making the
        // result depend on the thread count.
        for chunk in work.chunks(REDUCTION_CHUNK) {
            if over_budget(&options.budget, &stats, start) {
                stats.basis_size = basis.len() as u64;
                return Run { status: RunStatus::Aborted, basis: None, stats, seconds: start.elapsed().as_secs_f64() };
            }
            let snapshot = &basis;
            let remainders: Vec<Vec<Term>> = chunk
                .par_iter()
                .map(|p| {
                    let s = s_terms(&snapshot[p.i], &snapshot[p.j], &p.lcm, order);
                    reduce_terms(s, snapshot, order, true, None)
                })
                .collect();
            stats.reductions += chunk.len() as u64;
            for r in remainders {
                if r.is_empty() {
                    stats.zero_reductions += 1;
                    continue;
                }
                // Re-reduce against elements added earlier in this batch.
                let r = reduce_terms(r, &basis, order, true, None);
                if r.is_empty() {
                    stats.zero_reductions += 1;
                } else {
                    insert(r, &mut basis, &mut leads, &mut pending);
                }
            }
        }
    }
    let polys: Vec<Polynomial> = basis.iter().map(|d| Polynomial::from_terms(d.terms().to_vec())).collect();
    let reduced = autoreduce(&polys, order);
    stats.basis_size = reduced.len() as u64;
    Run {
        status: RunStatus::Completed,
        basis: Some(GroebnerBasis::trusted(reduced, order.clone(), true)),
        stats,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Minimalize, fully inter-reduce and normalize to monic; sorted by
/// descending leading monomial. For a Gröbner basis this is the reduced
/// Gröbner basis.
pub fn autoreduce(polys: &[Polynomial], order: &MonomialOrder) -> Vec<Polynomial> {
    let mut items: Vec<Divisor> = polys.iter().filter(|p| !p.is_zero()).map(|p| Divisor::new(p, order)).collect();
    loop {
        // Drop elements whose leading monomial is a multiple of another's.
        let keep: Vec<bool> = (0..items.len())
            .map(|i| {
                !(0..items.len()).any(|j| {
                    j != i && items[j].lead().divides(items[i].lead()) && (items[j].lead() != items[i].lead() || j < i)
                })
            })
            .collect();
        let mut minimal: Vec<Divisor> = items.iter().zip(&keep).filter(|(_, &k)| k).map(|(d, _)| d.clone()).collect();
        minimal.sort_by(|a, b| order.cmp(b.lead(), a.lead()));
        let reduced: Vec<Vec<Term>> = (0..minimal.len())
            .into_par_iter()
            .map(|i| {
                let others: Vec<Divisor> =
                    minimal.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, d)| d.clone()).collect();
                monic_terms(reduce_terms(minimal[i].terms().to_vec(), &others, order, true, None))
            })
            .collect();
        // Leading monomials can only change when the input was not a
        // Gröbner basis; iterate until stable.
        let stable = reduced.iter().zip(&minimal).all(|(r, d)| r.first().map(|t| &t.0) == Some(d.lead()));
        let next: Vec<Divisor> = reduced
            .into_iter()
            .filter(|r| !r.is_empty())
            .map(|r| Divisor::new(&Polynomial::from_terms(r), order))
            .collect();
        if stable && next.len() == minimal.len() {
            return next.iter().map(|d| Polynomial::from_terms(d.terms().to_vec())).collect();
        }
        items = next;
    }
}

/// One S-pair whose remainder is nonzero.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FailingPair {
    pub i: usize,
    pub j: usize,
    #[serde(serialize_with = "ser_poly")]
    pub remainder: Polynomial,
}

fn ser_poly<S: serde::Serializer>(p: &Polynomial, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

/// Result of [`is_groebner_basis`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub is_groebner: bool,
    pub status: RunStatus,
    pub failing: Vec<FailingPair>,
    pub stats: Stats,
    #[serde(skip)]
    pub seconds: f64,
}

/// Check Buchberger's criterion: every S-pair that the criteria do not skip
/// reduces to zero. All failing pairs are collected.
pub fn is_groebner_basis(gens: &[Polynomial], order: &MonomialOrder, options: &Options) -> Certificate {
    let start = Instant::now();
    let mut stats = Stats::default();
    let divs: Vec<Divisor> = gens.iter().filter(|g| !g.is_zero()).map(|g| Divisor::new(g, order)).collect();
    let leads: Vec<Monomial> = divs.iter().map(|d| d.lead().clone()).collect();
    let mut pairs: Vec<Pair> = (0..divs.len())
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .map(|(i, j)| Pair { i, j, lcm: leads[i].lcm(&leads[j]) })
        .collect();
    pairs.sort_by_key(|p| (p.lcm.degree(), p.i, p.j));
    let mut state = PairState { done: HashSet::new() };
    let mut work = Vec::new();
    for p in &pairs {
        if stats.pairs_considered >= options.budget.max_pairs {
            break;
        }
        if !state.treat(p, &leads, options, &mut stats) {
            work.push(p.clone());
        }
    }
    let aborted = stats.pairs_considered < pairs.len() as u64;
    let deadline = options.budget.max_seconds;
    let results: Vec<Option<Vec<Term>>> = work
        .par_iter()
        .map(|p| {
            if start.elapsed().as_secs_f64() > deadline {
                return None;
            }
            let s = s_terms(&divs[p.i], &divs[p.j], &p.lcm, order);
            Some(reduce_terms(s, &divs, order, true, None))
        })
        .collect();
    let timed_out = results.iter().any(Option::is_none);
    let mut failing = Vec::new();
    for (p, r) in work.iter().zip(results) {
        let Some(r) = r else { continue };
        stats.reductions += 1;
        if r.is_empty() {
            stats.zero_reductions += 1;
        } else {
            failing.push(FailingPair { i: p.i, j: p.j, remainder: Polynomial::from_terms(r) });
        }
    }
    stats.basis_size = divs.len() as u64;
    let status = if aborted || timed_out { RunStatus::Aborted } else { RunStatus::Completed };
    Certificate {
        is_groebner: failing.is_empty() && status == RunStatus::Completed,
        status,
        failing,
        stats,
        seconds: start.elapsed().as_secs_f64(),
    }
}

type CacheKey = (Vec<Polynomial>, MonomialOrder);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<GroebnerBasis>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<GroebnerBasis>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Gröbner basis of the ideal, memoized per generator list and order.
pub fn cached_basis(gens: &[Polynomial], order: &MonomialOrder) -> Arc<GroebnerBasis> {
    let key = (gens.to_vec(), order.clone());
    if let Some(gb) = cache().lock().expect("cache lock").get(&key) {
        return gb.clone();
    }
    let run = buchberger(gens, order, &Options { budget: Budget::UNBOUNDED, ..Options::default() });
    let gb = Arc::new(run.basis.expect("unbounded run completes"));
    cache().lock().expect("cache lock").insert(key, gb.clone());
    gb
}

/// Whether `p` lies in the ideal generated by `gens`.
pub fn ideal_membership(p: &Polynomial, gens: &[Polynomial], order: &MonomialOrder) -> bool {
    cached_basis(gens, order).contains(p)
}

/// Head-reducibility test used by callers that only need the leading term.
pub fn lead_reducible(m: &Monomial, gb: &GroebnerBasis) -> bool {
    find_divisor(&gb.divisors, m).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, random_rational};
    use crate::poly::{parse_text, Var};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> Polynomial {
        parse_text(s).unwrap()
    }

    // x > y > z is x[1,1] > x[1,2] > x[1,3].
    const X: &str = "x[1,1]";
    const Y: &str = "x[1,2]";
    const Z: &str = "x[1,3]";

    fn xyz(s: &str) -> Polynomial {
        p(&s.replace('x', X).replace('y', Y).replace('z', Z))
    }

    fn gb(gens: &[Polynomial]) -> GroebnerBasis {
        buchberger(gens, &MonomialOrder::Grevlex, &Options::default()).basis.unwrap()
    }

    #[test]
    fn linear_example() {
        let g = gb(&[xyz("x - y"), xyz("y - z")]);
        assert_eq!(g.generators(), &[xyz("x - z"), xyz("y - z")]);
        assert!(g.normal_form(&xyz("x - z")).is_zero());
        assert_eq!(g.normal_form(&Polynomial::one()), Polynomial::one());
    }

    #[test]
    fn singleton_is_made_monic() {
        let f = xyz("3*x^2 + y*z");
        let g = gb(std::slice::from_ref(&f));
        assert_eq!(g.generators(), &[f.scale(&frac(1, 3))]);
    }

    #[test]
    fn non_basis_certificate() {
        let gens = [xyz("x^2"), xyz("x*y + y^2")];
        let cert = is_groebner_basis(&gens, &MonomialOrder::Grevlex, &Options::default());
        assert!(!cert.is_groebner);
        assert_eq!(cert.failing.len(), 1);
        // S = y*x^2 - x*(x*y + y^2) = -x*y^2 -> +y^3.
        assert_eq!(cert.failing[0].remainder, xyz("y^3"));
        let full = gb(&gens);
        assert!(is_groebner_basis(full.generators(), &MonomialOrder::Grevlex, &Options::default()).is_groebner);
        assert_eq!(full.generators(), &[xyz("y^3"), xyz("x^2"), xyz("x*y + y^2")]);
    }

    #[test]
    fn minors_of_generic_matrix() {
        // 2x2 minors of a 2x3 matrix form a Gröbner basis.
        let m = |a: usize, b: usize| p(&format!("x[1,{a}]*x[2,{b}] - x[1,{b}]*x[2,{a}]"));
        let gens = vec![m(1, 2), m(1, 3), m(2, 3)];
        let cert = is_groebner_basis(&gens, &MonomialOrder::Grevlex, &Options::default());
        assert!(cert.is_groebner);
        let s = s_polynomial(&gens[0], &gens[1], &MonomialOrder::Grevlex);
        assert!(!s.is_zero());
        assert!(ideal_membership(&s, &gens, &MonomialOrder::Grevlex));
        assert!(!ideal_membership(&Polynomial::one(), &gens, &MonomialOrder::Grevlex));
    }

    fn random_ideal(rng: &mut ChaCha8Rng) -> Vec<Polynomial> {
        let k = rng.random_range(2..5);
        (0..k)
            .map(|_| {
                let t = rng.random_range(2..4);
                Polynomial::from_terms((0..t).map(|_| {
                    let m = Monomial::from_pairs(
                        (0..rng.random_range(1..3)).map(|_| (Var::x(1, rng.random_range(1..4)), rng.random_range(1..3))),
                    );
                    (m, random_rational(rng))
                }))
            })
            .filter(|p| !p.is_zero())
            .collect()
    }

    #[test]
    fn criteria_do_not_change_the_result() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..25 {
            let gens = random_ideal(&mut rng);
            if gens.is_empty() {
                continue;
            }
            let mut results = Vec::new();
            for (pc, cc) in [(true, true), (false, false), (true, false), (false, true)] {
                let o = Options { product_criterion: pc, chain_criterion: cc, budget: Budget::UNBOUNDED };
                results.push(buchberger(&gens, &MonomialOrder::Grevlex, &o).basis.unwrap().generators().to_vec());
            }
            assert!(results.windows(2).all(|w| w[0] == w[1]));
        }
    }

    #[test]
    fn output_generates_the_same_ideal() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for order in [MonomialOrder::Grevlex, MonomialOrder::Lex] {
            for _ in 0..10 {
                let gens = random_ideal(&mut rng);
                let g = buchberger(&gens, &order, &Options::default()).basis.unwrap();
                for f in &gens {
                    assert!(g.contains(f));
                }
                let back = cached_basis(&gens, &order);
                for h in g.generators() {
                    assert!(back.contains(h));
                }
                assert!(is_groebner_basis(g.generators(), &order, &Options::default()).is_groebner);
            }
        }
    }

    #[test]
    fn normal_form_is_idempotent_and_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let gens = [xyz("x^2 - y*z"), xyz("x*y - z^2"), xyz("y^2 - x*z")];
        let g = gb(&gens);
        for _ in 0..20 {
            let mk = |rng: &mut ChaCha8Rng| {
                Polynomial::from_terms((0..4).map(|_| {
                    (
                        Monomial::from_pairs((0..3).map(|_| (Var::x(1, rng.random_range(1..4)), rng.random_range(0..3)))),
                        random_rational(rng),
                    )
                }))
            };
            let (a, b) = (mk(&mut rng), mk(&mut rng));
            let (al, be) = (random_rational(&mut rng), random_rational(&mut rng));
            let na = g.normal_form(&a);
            assert_eq!(g.normal_form(&na), na);
            let lhs = g.normal_form(&(&a.scale(&al) + &b.scale(&be)));
            let rhs = &na.scale(&al) + &g.normal_form(&b).scale(&be);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let gens: Vec<Polynomial> = (0..3).flat_map(|_| random_ideal(&mut rng)).collect();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| buchberger(&gens, &MonomialOrder::Grevlex, &Options::default()));
        let b = four.install(|| buchberger(&gens, &MonomialOrder::Grevlex, &Options::default()));
        assert_eq!(a.basis, b.basis);
        assert_eq!(a.stats, b.stats);
    }

    #[test]
    fn budget_aborts() {
        let gens = [xyz("x^2 - y*z"), xyz("x*y - z^2"), xyz("y^3 - x*z + 1")];
        let o = Options { budget: Budget { max_pairs: 1, max_seconds: 60.0 }, ..Options::default() };
        let run = buchberger(&gens, &MonomialOrder::Grevlex, &o);
        assert_eq!(run.status, RunStatus::Aborted);
        assert!(run.basis.is_none());
    }
}
