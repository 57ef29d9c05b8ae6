use proptest::prelude::*;

use twistab_core::curve::WeightVector;
use twistab_core::groups::FiniteGroup;
use twistab_core::monoid::{torsion_pic, AdmissibleMonoid};
use twistab_core::rational::Rational;
use twistab_core::snf::{mat_mul, smith};
use twistab_core::stabilization::same_chamber;

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..4, 1usize..4).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..10, c), r))
}

fn fraction() -> impl Strategy<Value = Rational> {
    (1i64..13).prop_flat_map(|q| (0..q).prop_map(move |p| Rational::new(p, q)))
}

fn unit_weight() -> impl Strategy<Value = Rational> {
    (1i64..13).prop_flat_map(|q| (1..=q).prop_map(move |p| Rational::new(p, q)))
}

fn small_group() -> impl Strategy<Value = FiniteGroup> {
    prop_oneof![
        Just(FiniteGroup::symmetric(3).unwrap()),
        Just(FiniteGroup::dihedral(4).unwrap()),
        Just(FiniteGroup::quaternion()),
        Just(FiniteGroup::alternating(4).unwrap()),
    ]
}

proptest! {
    #[test]
    fn smith_form_factors_the_input(a in matrix()) {
        let cols = a[0].len();
        let sf = smith(&a, cols);
        let d = mat_mul(&mat_mul(&sf.left, &a), &sf.right);
        for (i, row) in d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let expected = if i == j && i < sf.diag.len() { sf.diag[i] } else { 0 };
                prop_assert_eq!(*x, expected);
            }
        }
        let nz: Vec<i64> = sf.diag.iter().copied().filter(|x| *x != 0).collect();
        prop_assert!(nz.iter().all(|x| *x > 0));
        prop_assert!(nz.windows(2).all(|w| w[1] % w[0] == 0));
    }

    #[test]
    fn subgroup_orders_divide(g in small_group(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let (x, y) = (g.element(i.index(g.order())), g.element(j.index(g.order())));
        let hx = g.generated_subgroup(&[x]).unwrap();
        let hy = g.generated_subgroup(&[y]).unwrap();
        let both = g.join([&hx, &hy]).unwrap();
        prop_assert_eq!(g.order() % both.order(), 0);
        prop_assert_eq!(both.order() % hx.order(), 0);
        prop_assert!(hx.is_subset_of(&both) && hy.is_subset_of(&both));
        prop_assert_eq!(hx.order() as u64, g.element_order(x) as u64);
    }

    #[test]
    fn abelian_invariants_multiply_to_order(g in small_group(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let (x, y) = (g.element(i.index(g.order())), g.element(j.index(g.order())));
        let h = g.generated_subgroup(&[x, y]).unwrap();
        match g.abelian_invariants(&h) {
            Some(a) => {
                prop_assert!(g.is_abelian(&h));
                prop_assert_eq!(a.order(), h.order() as u64);
            }
            None => prop_assert!(!g.is_abelian(&h)),
        }
    }

    #[test]
    fn xm_grows_with_divisibility(gens in prop::collection::vec(prop::collection::vec(fraction(), 2), 1..4), m in 1u64..7, k in 1u64..4) {
        let x = AdmissibleMonoid::new(2, gens).unwrap().x_group();
        let small = x.x_m(m).unwrap();
        let big = x.x_m(m * k).unwrap();
        prop_assert_eq!(x.order() % big.order(), 0);
        prop_assert_eq!(big.order() % small.order(), 0);
        for c in small.generators() {
            prop_assert!(x.chi(c).scale((m * k) as i64).is_zero());
        }
    }

    #[test]
    fn torsion_pic_order_is_bounded(r in prop::collection::vec(1u64..7, 0..4), m in 1u64..7) {
        let pic = torsion_pic(&r, m).unwrap();
        let all: u64 = r.iter().product::<u64>() * m;
        prop_assert_eq!(all % pic.order(), 0);
    }

    #[test]
    fn same_chamber_is_an_equivalence(a in prop::collection::vec(unit_weight(), 1..6), b in prop::collection::vec(unit_weight(), 1..6)) {
        let n = a.len().min(b.len());
        let a = WeightVector::new(a[..n].to_vec()).unwrap();
        let b = WeightVector::new(b[..n].to_vec()).unwrap();
        prop_assert!(same_chamber(&a, &a).unwrap());
        prop_assert_eq!(same_chamber(&a, &b).unwrap(), same_chamber(&b, &a).unwrap());
        let text = a.to_string();
        prop_assert_eq!(text.parse::<WeightVector>().unwrap(), a);
    }
}
