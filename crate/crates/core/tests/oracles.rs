//! Cross-checks against independent computations.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use evenlat::cosets::{diagonal_fixture, reduce_double_coset, reduce_right_coset};
use evenlat::fqm::{is_maximal_even, Limits};
use evenlat::lattice::EvenLattice;
use evenlat::linalg::inverse_rational;
use evenlat::orthogonal::{classify_integral, extend, gen_j, gen_t, Class};
use evenlat::roots::{build, RootLatticeSpec};
use evenlat::Matrix;

fn lattice(name: &str) -> EvenLattice {
    build(&name.parse::<RootLatticeSpec>().unwrap()).unwrap()
}

fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

/// `L♯/L` as the closure of the columns of `S⁻¹` modulo `ℤⁿ`, with `q̄`.
fn dual_quotient(l: &EvenLattice) -> BTreeMap<Vec<BigRational>, BigRational> {
    let inv = inverse_rational(l.gram()).unwrap();
    let n = l.rank();
    let gens: Vec<Vec<BigRational>> = (0..n).map(|j| inv.col(j)).collect();
    let zero = vec![BigRational::zero(); n];
    let mut seen = BTreeSet::from([zero.clone()]);
    let mut stack = vec![zero];
    while let Some(x) = stack.pop() {
        for g in &gens {
            let y: Vec<BigRational> = x.iter().zip(g).map(|(a, b)| frac(&(a + b))).collect();
            if seen.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    seen.into_iter()
        .map(|x| {
            let q = frac(&(l.norm(&x) * &half));
            (x, q)
        })
        .collect()
}

fn q_multiset(values: impl IntoIterator<Item = BigRational>) -> BTreeMap<BigRational, usize> {
    let mut m = BTreeMap::new();
    for v in values {
        *m.entry(v).or_insert(0) += 1;
    }
    m
}

#[test]
fn discriminant_forms_match_dual_closure() {
    let mut lattices: Vec<EvenLattice> = [
        "A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "D4", "D5", "D6", "D7", "D8", "D9", "E6", "E7", "E8",
        "4A1", "5A1",
    ]
    .iter()
    .map(|s| lattice(s))
    .collect();
    lattices.push(lattice("A2").direct_sum(&lattice("A2")));
    lattices.push(lattice("A3").direct_sum(&lattice("A1")));
    lattices.push(lattice("D4").direct_sum(&lattice("A2")));
    for l in lattices {
        let oracle = dual_quotient(&l);
        let module = l.discriminant_group();
        assert_eq!(BigInt::from(oracle.len()), module.order());
        assert_eq!(BigInt::from(oracle.len()), l.discriminant().clone());
        let ours: Vec<_> = module
            .elements(&Limits::default())
            .unwrap()
            .iter()
            .map(|x| module.q_value(x).unwrap())
            .collect();
        assert_eq!(q_multiset(ours), q_multiset(oracle.values().cloned()), "{:?}", l.name());
        let anisotropic = oracle.iter().all(|(x, q)| !q.is_zero() || x.iter().all(Zero::is_zero));
        assert_eq!(is_maximal_even(&l, &Limits::default()).unwrap(), anisotropic);
    }
}

#[test]
fn lifts_land_in_the_dual() {
    for name in ["A4", "D6", "E7", "5A1"] {
        let l = lattice(name);
        let oracle = dual_quotient(&l);
        let module = l.discriminant_group();
        for x in module.elements(&Limits::default()).unwrap() {
            let lift = module.lift(&x).unwrap();
            let reduced: Vec<BigRational> = lift.iter().map(frac).collect();
            assert!(oracle.contains_key(&reduced), "{name}: {x}");
            assert_eq!(oracle[&reduced], module.q_value(&x).unwrap());
        }
    }
}

// Frozen values from the dual closure above and hand block multiplication.
#[test]
fn frozen_values() {
    let iso = |name: &str| dual_quotient(&lattice(name)).values().filter(|q| q.is_zero()).count() - 1;
    assert_eq!(iso("4A1"), 1);
    assert_eq!(iso("5A1"), 5);
    assert_eq!(iso("D8"), 2);
    assert_eq!(iso("A7"), 1);
    assert_eq!(iso("A8"), 2);
    assert_eq!(iso("D16"), 2);

    // each hyperbolic wrap flips the sign once, so det S₁ = det(−S) = (−1)ⁿ det S
    for (name, det) in [("A1", -2), ("A2", 3), ("D4", 4), ("E6", 3), ("E7", -2), ("4A1", 16)] {
        let f = extend(&lattice(name)).unwrap();
        assert_eq!(f.s1().det().unwrap(), BigInt::from(det), "{name}");
    }

    // −I: not in SO for odd rank, outside the kernel when 2S⁻¹ is not integral
    let cases = [("A1", Class::NotOrthogonal), ("A2", Class::GammaS), ("2A1", Class::DiscriminantKernel), ("D4", Class::DiscriminantKernel)];
    for (name, class) in cases {
        let f = extend(&lattice(name)).unwrap();
        let c = classify_integral(&f, &Matrix::identity(f.dim()).neg()).unwrap();
        assert_eq!(c.class, class, "{name}");
    }

    // diag(4, 2I, 1) with r = 4 over A2
    let f = extend(&lattice("A2")).unwrap();
    let x = diagonal_fixture(&f, 2);
    let lhs = &(&x.matrix().transpose() * f.s1()) * x.matrix();
    assert_eq!(lhs, f.s1().scale(&BigInt::from(4)));
    let right = reduce_right_coset(&x).unwrap();
    assert_eq!((right.alpha, right.delta), (BigInt::from(4), BigInt::one()));
    let dbl = reduce_double_coset(&x).unwrap();
    assert_eq!((dbl.alpha, dbl.delta), (BigInt::one(), BigInt::from(4)));

    // J² = I and T_λ·T_{−λ} = I
    assert!((&gen_j(&f) * &gen_j(&f)).matrix().is_identity());
    let l: Vec<BigInt> = [2, -1, 1, 3].iter().map(|&v| BigInt::from(v)).collect();
    let m: Vec<BigInt> = l.iter().map(|v| -v).collect();
    assert!((&gen_t(&f, &l).unwrap() * &gen_t(&f, &m).unwrap()).matrix().is_identity());
}
