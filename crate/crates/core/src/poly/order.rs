use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::Arc;

use super::{Monomial, Var};

/// Monomial orders over the canonical variable order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Grevlex,
    Lex,
    /// Grevlex on the first block, ties broken by grevlex on the rest.
    /// Eliminates the first block.
    BlockElim(Arc<BTreeSet<Var>>),
}

impl MonomialOrder {
    pub fn block(first: impl IntoIterator<Item = Var>) -> Self {
        MonomialOrder::BlockElim(Arc::new(first.into_iter().collect()))
    }

    pub fn cmp(&self, u: &Monomial, v: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Grevlex => grevlex(u.factors(), u.degree(), v.factors(), v.degree()),
            MonomialOrder::Lex => lex(u.factors(), v.factors()),
            MonomialOrder::BlockElim(first) => {
                let split = |m: &Monomial| {
                    let (a, b): (Vec<(Var, u32)>, Vec<(Var, u32)>) =
                        m.factors().iter().partition(|(w, _)| first.contains(w));
                    let da: u32 = a.iter().map(|p| p.1).sum();
                    let db: u32 = b.iter().map(|p| p.1).sum();
                    (a, da, b, db)
                };
                let (ua, uda, ub, udb) = split(u);
                let (va, vda, vb, vdb) = split(v);
                grevlex(&ua, uda, &va, vda).then_with(|| grevlex(&ub, udb, &vb, vdb))
            }
        }
    }
}

fn grevlex(u: &[(Var, u32)], du: u32, v: &[(Var, u32)], dv: u32) -> Ordering {
    if du != dv {
        return du.cmp(&dv);
    }
    let (mut i, mut j) = (u.len(), v.len());
    while i > 0 && j > 0 {
        let (a, ea) = u[i - 1];
        let (b, eb) = v[j - 1];
        match a.cmp(&b) {
            // `a` is the smaller variable and only `u` contains it.
            Ordering::Greater => return Ordering::Less,
            Ordering::Less => return Ordering::Greater,
            Ordering::Equal => {
                if ea != eb {
                    return eb.cmp(&ea);
                }
                i -= 1;
                j -= 1;
            }
        }
    }
    // Equal degrees force both to run out together.
    debug_assert!(i == 0 && j == 0);
    Ordering::Equal
}

fn lex(u: &[(Var, u32)], v: &[(Var, u32)]) -> Ordering {
    for (&(a, ea), &(b, eb)) in u.iter().zip(v) {
        match a.cmp(&b) {
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
            Ordering::Equal if ea != eb => return ea.cmp(&eb),
            Ordering::Equal => {}
        }
    }
    u.len().cmp(&v.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(pairs: &[((usize, usize), u32)]) -> Monomial {
        Monomial::from_pairs(pairs.iter().map(|&((i, j), e)| (Var::x(i, j), e)))
    }

    #[test]
    fn grevlex_golden() {
        // x1 > x2 > x3 as x[1,1] > x[1,2] > x[1,3].
        let x1x3 = m(&[((1, 1), 1), ((1, 3), 1)]);
        let x2sq = m(&[((1, 2), 2)]);
        assert_eq!(MonomialOrder::Grevlex.cmp(&x2sq, &x1x3), Ordering::Greater);
        // Lex disagrees here.
        assert_eq!(MonomialOrder::Lex.cmp(&x2sq, &x1x3), Ordering::Less);
        let x1sq = m(&[((1, 1), 2)]);
        let x1x2 = m(&[((1, 1), 1), ((1, 2), 1)]);
        assert_eq!(MonomialOrder::Grevlex.cmp(&x1sq, &x1x2), Ordering::Greater);
        assert_eq!(MonomialOrder::Grevlex.cmp(&x1x2, &x1x2), Ordering::Equal);
        assert_eq!(MonomialOrder::Grevlex.cmp(&m(&[((3, 3), 1)]), &x1sq), Ordering::Less);
    }

    #[test]
    fn block_order_eliminates_first_block() {
        let ord = MonomialOrder::block([Var::x(2, 2)]);
        let big = m(&[((2, 2), 1)]);
        let small = m(&[((1, 1), 5)]);
        assert_eq!(ord.cmp(&big, &small), Ordering::Greater);
        assert_eq!(MonomialOrder::Grevlex.cmp(&big, &small), Ordering::Less);
    }

    fn arb_monomial() -> impl Strategy<Value = Monomial> {
        proptest::collection::vec(((1usize..4, 1usize..4), 0u32..3), 0..5)
            .prop_map(|v| Monomial::from_pairs(v.into_iter().map(|((i, j), e)| (Var::x(i, j), e))))
    }

    fn arb_order() -> impl Strategy<Value = MonomialOrder> {
        prop_oneof![
            Just(MonomialOrder::Grevlex),
            Just(MonomialOrder::Lex),
            Just(MonomialOrder::block([Var::x(1, 1), Var::x(2, 2), Var::x(3, 1)])),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn is_a_monomial_order(o in arb_order(), u in arb_monomial(), v in arb_monomial(), w in arb_monomial()) {
            let uv = o.cmp(&u, &v);
            prop_assert_eq!(uv, o.cmp(&v, &u).reverse());
            prop_assert_eq!(uv == Ordering::Equal, u == v);
            if uv == Ordering::Less && o.cmp(&v, &w) == Ordering::Less {
                prop_assert_eq!(o.cmp(&u, &w), Ordering::Less);
            }
            prop_assert_eq!(o.cmp(&u.mul(&w), &v.mul(&w)), uv);
            if !w.is_one() {
                prop_assert_eq!(o.cmp(&u.mul(&w), &u), Ordering::Greater);
            }
        }
    }
}
