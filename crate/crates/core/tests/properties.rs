//! Randomised invariants for arithmetic, group tables, idempotents and
//! representations.

mod common;

use std::sync::{Arc, OnceLock};

use common::{load, CORPUS};
use proptest::prelude::*;
use solvrep::cyclic_abelian::Poly;
use solvrep::cyclotomic::{pth_roots, PthRootOptions};
use solvrep::grpalg::AlgebraElement;
use solvrep::presentation::{Elem, Group};
use solvrep::solvable::{solvable_full, SolvableOptions, SolvableResult};
use solvrep::CycNumber;

const CONDUCTORS: &[u32] = &[1, 3, 4, 5, 8, 12];

fn cyc(m: u32, coeffs: &[i64]) -> CycNumber {
    coeffs
        .iter()
        .enumerate()
        .fold(CycNumber::zero(m), |acc, (i, &c)| {
            acc.add_ref(&CycNumber::root_of_unity(m, i as i64).mul_ref(&CycNumber::from_int(c, m)))
        })
}

fn arb_cyc() -> impl Strategy<Value = CycNumber> {
    (
        prop::sample::select(CONDUCTORS),
        prop::collection::vec(-4i64..=4, 1..6),
    )
        .prop_map(|(m, c)| cyc(m, &c))
}

fn arb_same_field(k: usize) -> impl Strategy<Value = Vec<CycNumber>> {
    prop::sample::select(CONDUCTORS).prop_flat_map(move |m| {
        prop::collection::vec(prop::collection::vec(-4i64..=4, 1..6), k)
            .prop_map(move |cs| cs.iter().map(|c| cyc(m, c)).collect())
    })
}

struct Fixture {
    group: Arc<Group>,
    result: SolvableResult,
}

fn corpus() -> &'static [Fixture] {
    static CELL: OnceLock<Vec<Fixture>> = OnceLock::new();
    CELL.get_or_init(|| {
        CORPUS
            .iter()
            .map(|name| {
                let group = load(name);
                let result = solvable_full(&group, &SolvableOptions::default()).expect("pipeline");
                Fixture { group, result }
            })
            .collect()
    })
}

fn arb_group_elems(k: usize) -> impl Strategy<Value = (usize, Vec<Elem>)> {
    (0..CORPUS.len()).prop_flat_map(move |gi| {
        let n = corpus()[gi].group.order() as u32;
        prop::collection::vec(0..n, k).prop_map(move |v| (gi, v.into_iter().map(Elem).collect()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_distributes(v in arb_same_field(3)) {
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        prop_assert_eq!(a.add_ref(b).mul_ref(c), a.mul_ref(c).add_ref(&b.mul_ref(c)));
        prop_assert_eq!(a.mul_ref(b), b.mul_ref(a));
    }

    #[test]
    fn nonzero_has_inverse(a in arb_cyc()) {
        prop_assume!(!a.is_zero());
        let inv = a.inv().unwrap();
        prop_assert!(a.mul_ref(&inv).is_one());
    }

    #[test]
    fn galois_is_multiplicative(v in arb_same_field(2)) {
        let (a, b) = (&v[0], &v[1]);
        prop_assert_eq!(a.mul_ref(b).conj(), a.conj().mul_ref(&b.conj()));
        prop_assert_eq!(&a.conj().conj(), a);
    }

    #[test]
    fn display_parses_back(a in arb_cyc()) {
        let m = a.conductor();
        prop_assert_eq!(CycNumber::parse(&a.to_string(), m).unwrap(), a);
    }

    #[test]
    fn pth_roots_verify_exactly(mu in arb_cyc(), p in prop::sample::select(vec![2u64, 3])) {
        prop_assume!(!mu.is_zero());
        let lambda = mu.pow(p);
        let roots = pth_roots(&lambda, p, &PthRootOptions::default()).unwrap();
        prop_assert!(!roots.is_empty());
        for r in &roots {
            prop_assert_eq!(&r.pow(p), &lambda);
        }
    }

    #[test]
    fn poly_division(a in prop::collection::vec(-5i64..=5, 1..8), b in prop::collection::vec(-5i64..=5, 1..5)) {
        let (a, b) = (Poly::from_ints(&a), Poly::from_ints(&b));
        prop_assume!(!b.is_zero());
        let (q, r) = a.divrem(&b);
        prop_assert!(r.is_zero() || r.degree() < b.degree());
        let back = q.mul(&b);
        let diff: Vec<CycNumber> = (0..a.coeffs().len().max(back.coeffs().len()).max(r.coeffs().len()))
            .map(|i| {
                let get = |p: &Poly| p.coeffs().get(i).cloned().unwrap_or_else(|| CycNumber::zero(1));
                get(&a).sub_ref(&get(&back)).sub_ref(&get(&r))
            })
            .collect();
        prop_assert!(diff.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn group_axioms((gi, v) in arb_group_elems(3)) {
        let g = &corpus()[gi].group;
        let (a, b, c) = (v[0], v[1], v[2]);
        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
        prop_assert_eq!(g.mul(a, g.inv(a)), g.identity());
        prop_assert_eq!(g.conj(g.conj(a, b), c), g.conj(a, g.mul(b, c)));
    }

    #[test]
    fn normal_form_round_trip((gi, v) in arb_group_elems(2)) {
        let g = &corpus()[gi].group;
        for a in v {
            prop_assert_eq!(g.normalize(&g.format_elem(a)).unwrap(), a);
            prop_assert_eq!(g.from_exponents(&g.exponents(a)), a);
        }
    }

    #[test]
    fn idempotents_commute_with_group((gi, v) in arb_group_elems(1)) {
        let f = &corpus()[gi];
        let m = f.result.conductor;
        let h = AlgebraElement::from_elem(&f.group, v[0], CycNumber::one(m));
        for e in f.result.pcis() {
            let e = e.coerce(m);
            prop_assert_eq!(&e * &h, &h * &e);
            prop_assert_eq!(e.conjugate(v[0]), e);
        }
    }

    #[test]
    fn records_round_trip(gi in 0..CORPUS.len()) {
        let f = &corpus()[gi];
        for e in f.result.pcis() {
            let back = AlgebraElement::parse_records(&f.group, &e.to_records(), e.conductor()).unwrap();
            prop_assert_eq!(&back, e);
        }
    }

    #[test]
    fn irreps_are_homomorphisms((gi, v) in arb_group_elems(2)) {
        let f = &corpus()[gi];
        let (a, b) = (v[0], v[1]);
        for rho in f.result.irreps() {
            let lhs = rho.image_of(f.group.mul(a, b)).unwrap();
            let rhs = rho.image_of(a).unwrap().mul_ref(&rho.image_of(b).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
