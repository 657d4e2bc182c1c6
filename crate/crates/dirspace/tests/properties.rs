use dirspace::algebra::{check_algebra, powerspace, Algebra, PowerTheory};
use dirspace::elem::Elem;
use dirspace::order::{FinitePoset, Poset};
use dirspace::report::{Bound, Report};
use dirspace::space::{classify, coreflect, product_laws, same_opens, Kind, Space, View};
use proptest::prelude::*;

/// Random partial orders: a random DAG on `i < j` closed under transitivity.
fn poset(max: usize) -> impl Strategy<Value = FinitePoset> {
    (1..=max).prop_flat_map(|n| {
        let slots = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), slots).prop_map(move |bits| {
            let mut pairs = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if bits[k] {
                        pairs.push((i, j));
                    }
                    k += 1;
                }
            }
            FinitePoset::closed(n, &pairs)
        })
    })
}

fn subsets(x: &FinitePoset, keep: impl Fn(u64) -> bool) -> usize {
    (1u64..1 << x.size()).filter(|&m| keep(m)).count()
}

fn members(m: u64, n: usize) -> impl Iterator<Item = usize> {
    (0..n).filter(move |i| m >> i & 1 == 1)
}

fn is_lower(x: &FinitePoset, m: u64) -> bool {
    members(m, x.size()).all(|i| x.down(i).iter().all(|&j| m >> j & 1 == 1))
}

fn is_upper(x: &FinitePoset, m: u64) -> bool {
    members(m, x.size()).all(|i| x.up(i).iter().all(|&j| m >> j & 1 == 1))
}

fn is_convex(x: &FinitePoset, m: u64) -> bool {
    let n = x.size();
    (0..n).all(|k| m >> k & 1 == 1 || !(members(m, n).any(|i| x.leq(i, k)) && members(m, n).any(|j| x.leq(k, j))))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn finite_spaces_are_algebraic_with_way_below_the_order(p in poset(6)) {
        let x = Space::finite(p.clone());
        let b = Bound::default();
        let v = View::new(&x, b);
        for i in 0..p.size() {
            for j in 0..p.size() {
                prop_assert_eq!(v.wb(&Elem::N(i as u64), &Elem::N(j as u64)), p.leq(i, j));
            }
        }
        prop_assert_eq!(classify(&x, b).kind, Kind::Algebraic);
        prop_assert!(same_opens(&coreflect(&x, b), &x, b).is_ok());
    }

    #[test]
    fn powerspaces_match_set_counts(p in poset(5)) {
        prop_assert_eq!(powerspace(&p, PowerTheory::Lower).sets.len(), subsets(&p, |m| is_lower(&p, m)));
        prop_assert_eq!(powerspace(&p, PowerTheory::Upper).sets.len(), subsets(&p, |m| is_upper(&p, m)));
        prop_assert_eq!(powerspace(&p, PowerTheory::Convex).sets.len(), subsets(&p, |m| is_convex(&p, m)));
    }

    #[test]
    fn poset_json_roundtrips(p in poset(6)) {
        let q = Poset::Explicit(p);
        prop_assert_eq!(Poset::from_json(&q.to_json()).unwrap(), q);
    }

    #[test]
    fn reports_roundtrip_and_are_deterministic(p in poset(3), q in poset(3)) {
        let b = Bound::default();
        let (x, y) = (Space::finite(p), Space::finite(q));
        let r = product_laws(&x, &y, b);
        prop_assert!(r.passed(), "{}", r.to_text());
        let text = serde_json::to_string(&r).unwrap();
        let back: Report = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &r);
        prop_assert_eq!(serde_json::to_string(&product_laws(&x, &y, b)).unwrap(), text);
    }

    #[test]
    fn chain_semilattices_model_their_theories(n in 1usize..5) {
        let join = Algebra::chain_join(n, true);
        prop_assert!(check_algebra(&join, &PowerTheory::Lower.theory()).passed());
        prop_assert!(check_algebra(&join, &PowerTheory::Convex.theory()).passed());
        let meet = Algebra::chain_join(n, false);
        prop_assert!(check_algebra(&meet, &PowerTheory::Upper.theory()).passed());
        if n > 1 {
            prop_assert!(!check_algebra(&join, &PowerTheory::Upper.theory()).passed());
        }
    }
}
