//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use evenlat::cosets::{
    diagonal_fixture, normalizer_certificate, reduce_double_coset, reduce_right_coset, NormalizerCertificate,
    ScaledOrthogonal,
};
use evenlat::fqm::{is_maximal_even, overlattice_from_glue, Limits};
use evenlat::lattice::EvenLattice;
use evenlat::orthogonal::{
    complete_isotropic, extend, gen_j, gen_t, gen_t_star, is_primitive_isotropic, lattice_rotation, random_word,
    Class, ExtendedForm, GroupElement,
};
use evenlat::roots::{an_glue_generator, build, dn_glue_vector, closed_form_maximal, RootLatticeSpec};
use evenlat::{Matrix, Result};

fn lattice(name: &str) -> EvenLattice {
    build(&name.parse::<RootLatticeSpec>().expect("valid name")).expect("buildable")
}

fn form(name: &str) -> ExtendedForm {
    extend(&lattice(name)).expect("positive definite")
}

/// A generator word of random length in `0..=max_len`.
fn word(f: &ExtendedForm, rng: &mut ChaCha8Rng, max_len: usize) -> GroupElement {
    let len = rng.gen_range(0..=max_len);
    random_word(f, rng, len, 2)
}

fn atlas_specs() -> Vec<RootLatticeSpec> {
    let mut v: Vec<_> = (1..=30).map(|n| RootLatticeSpec::a(n).unwrap()).collect();
    v.extend((3..=30).map(|n| RootLatticeSpec::d(n).unwrap()));
    v.extend((6..=8).map(|n| RootLatticeSpec::e(n).unwrap()));
    v
}

fn atlas() -> Result<String> {
    let start = Instant::now();
    let limits = Limits::default();
    let mut mismatches = Vec::new();
    let specs = atlas_specs();
    for spec in &specs {
        let brute = is_maximal_even(&build(spec)?, &limits)?;
        if Some(brute) != closed_form_maximal(spec) {
            mismatches.push(spec.to_string());
        }
    }
    let elapsed = start.elapsed();
    if !mismatches.is_empty() {
        return Err(evenlat::Error::Internal(format!("rows disagree: {}", mismatches.join(", "))));
    }
    if elapsed >= Duration::from_secs(60) {
        return Err(evenlat::Error::Internal(format!("took {elapsed:?}")));
    }
    Ok(format!("{} rows agree in {:.2?}", specs.len(), elapsed))
}

fn discriminants() -> Result<String> {
    let mut rows = 0;
    for spec in atlas_specs() {
        let expected = match (spec.family, spec.rank) {
            (evenlat::Family::A, n) => BigInt::from(n + 1),
            (evenlat::Family::D, _) => BigInt::from(4),
            (_, 6) => BigInt::from(3),
            (_, 7) => BigInt::from(2),
            _ => BigInt::one(),
        };
        let got = build(&spec)?.discriminant().clone();
        if got != expected {
            return Err(evenlat::Error::Internal(format!("disc {spec} = {got}, expected {expected}")));
        }
        rows += 1;
    }
    Ok(format!("{rows} discriminants exact"))
}

fn glue_values() -> Result<String> {
    for n in 1..=30usize {
        let (module, g) = an_glue_generator(n)?;
        let got = module.q_value(&g.element)?;
        let expected = BigRational::new(BigInt::from(n), BigInt::from(2 * (n + 1)));
        if got != expected {
            return Err(evenlat::Error::Internal(format!("q̄(a_{n}) = {got}, expected {expected}")));
        }
    }
    Ok("q̄(a_n) = n/(2(n+1)) for n ≤ 30".into())
}

fn overlattice_counts() -> Result<String> {
    let limits = Limits::default();
    let mut parts = Vec::new();
    for (name, count) in [("4A1", 1usize), ("5A1", 5)] {
        let l = lattice(name);
        let groups = l.discriminant_group().maximal_isotropic_subgroups(&limits)?;
        if groups.len() != count {
            return Err(evenlat::Error::Internal(format!("{name}: {} overlattices", groups.len())));
        }
        for g in &groups {
            let (sup, _) = overlattice_from_glue(&l, g)?;
            if sup.discriminant() * BigInt::from(4) != *l.discriminant() {
                return Err(evenlat::Error::Internal(format!("{name}: overlattice disc {}", sup.discriminant())));
            }
        }
        parts.push(format!("{name}: {count}"));
    }
    Ok(parts.join(", "))
}

fn d8_unimodular() -> Result<String> {
    let d8 = lattice("D8");
    let (module, h) = dn_glue_vector(8)?;
    let glue = evenlat::GlueGroup::new(&module, vec![h.element], &Limits::default())?;
    let (sup, _) = overlattice_from_glue(&d8, &glue)?;
    if !sup.discriminant().is_one() {
        return Err(evenlat::Error::Internal(format!("disc = {}", sup.discriminant())));
    }
    Ok("D8 + h8 is even with disc 1".into())
}

fn completion_roundtrips() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7431);
    let mut done = 0;
    for name in ["A1", "A2", "2A1", "D4"] {
        let f = form(name);
        for _ in 0..50 {
            let len = rng.gen_range(1..=15);
            let h = random_word(&f, &mut rng, len, 2).first_column();
            if !is_primitive_isotropic(&f, &h) {
                return Err(evenlat::Error::Internal(format!("{name}: W·e₁ not primitive isotropic")));
            }
            let m = complete_isotropic(&f, &h)?;
            if m.first_column() != h || m.classify().class != Class::DiscriminantKernel {
                return Err(evenlat::Error::Internal(format!("{name}: completion postcondition")));
            }
            done += 1;
        }
    }
    Ok(format!("{done} completions"))
}

fn coset_reductions() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7432);
    let mut done = 0;
    for name in ["A2", "D4"] {
        let f = form(name);
        for i in 0..50 {
            let d = [1u64, 2, 3][i % 3];
            let w1 = word(&f, &mut rng, 6);
            let w2 = word(&f, &mut rng, 6);
            let x = diagonal_fixture(&f, d).transform(&w1, &w2);
            let right = reduce_right_coset(&x)?;
            let dbl = reduce_double_coset(&x)?;
            let r = x.r();
            let ok = right.alpha == x.first_column_gcd()
                && &right.alpha * &right.delta == *r
                && right.t == right.m.matrix() * x.matrix()
                && right.m.classify().class == Class::DiscriminantKernel
                && dbl.alpha == x.content()
                && &dbl.alpha * &dbl.delta == *r
                && dbl.diagonal.entries().iter().all(|v| (v % &dbl.alpha).is_zero())
                && dbl.left.classify().class == Class::DiscriminantKernel
                && dbl.right.classify().class == Class::DiscriminantKernel;
            if !ok {
                return Err(evenlat::Error::Internal(format!("{name}, r = {r}: postcondition")));
            }
            done += 1;
        }
    }
    Ok(format!("{done} right and double coset reductions"))
}

fn inverse_formula() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7433);
    let forms = [form("A1"), form("A2"), form("2A1"), form("D4")];
    for i in 0..500 {
        let f = &forms[i % forms.len()];
        let w = word(f, &mut rng, 20);
        let inv = w.inverse();
        if !(&inv * &w).matrix().is_identity() || inv.matrix() != &w.inverse_direct() {
            return Err(evenlat::Error::Internal(format!("word {i}")));
        }
    }
    Ok("500 words".into())
}

fn sample_gamma(f: &ExtendedForm, rotations: &[Matrix], rng: &mut ChaCha8Rng) -> GroupElement {
    let w = word(f, rng, 6);
    if rotations.is_empty() || rng.gen_bool(0.3) {
        return w;
    }
    let u = lattice_rotation(f, &rotations[rng.gen_range(0..rotations.len())]).expect("automorphism");
    &w * &u
}

fn normality() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7434);
    let a2_rot = vec![
        Matrix::identity(2).neg(),
        Matrix::from_rows(&[vec![0, 1], vec![1, 0]])?,
        Matrix::from_rows(&[vec![0, -1], vec![1, -1]])?,
    ];
    let perm = |p: [usize; 5]| {
        let mut m = Matrix::zeros(5, 5);
        for (i, &j) in p.iter().enumerate() {
            m[(j, i)] = BigInt::one();
        }
        m
    };
    let five_rot = vec![perm([1, 0, 2, 3, 4]), perm([1, 2, 0, 3, 4]), perm([4, 3, 2, 1, 0])];
    let cases = [(form("A2"), a2_rot), (form("5A1"), five_rot), (form("D4"), vec![Matrix::identity(4).neg()])];
    let mut done = 0;
    let mut rotations_used = 0;
    for i in 0..100 {
        let (f, rots) = &cases[i % cases.len()];
        let m = sample_gamma(f, rots, &mut rng);
        if m.classify().class < Class::GammaS {
            return Err(evenlat::Error::Internal("sample outside Γ_S".into()));
        }
        if m.classify().class == Class::GammaS {
            rotations_used += 1;
        }
        let lambda: Vec<BigInt> = (0..f.n() + 2).map(|_| BigInt::from(rng.gen_range(-2..=2))).collect();
        let t = match i % 3 {
            0 => gen_j(f),
            1 => gen_t(f, &lambda)?,
            _ => gen_t_star(f, &lambda)?,
        };
        let conj = &(&m * &t) * &m.inverse();
        if conj.classify().class != Class::DiscriminantKernel {
            return Err(evenlat::Error::Internal(format!("conjugate {i} left the kernel")));
        }
        done += 1;
    }
    Ok(format!("{done} conjugations ({rotations_used} by elements outside the kernel)"))
}

fn normalizer() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7435);
    let (mut certified, mut witnessed) = (0, 0);
    for name in ["A1", "A2", "D4", "E6"] {
        let f = form(name);
        let mut inputs = Vec::new();
        for _ in 0..3 {
            let w = random_word(&f, &mut rng, 5, 2);
            inputs.push(ScaledOrthogonal::new(&f, w.matrix().clone(), 1)?);
            inputs.push(ScaledOrthogonal::new_raw(&f, w.matrix().scale(&BigInt::from(3)), 9)?);
        }
        for d in [2u64, 3] {
            for _ in 0..3 {
                let w1 = random_word(&f, &mut rng, 4, 2);
                let w2 = random_word(&f, &mut rng, 4, 2);
                inputs.push(diagonal_fixture(&f, d).transform(&w1, &w2));
            }
            let fx = diagonal_fixture(&f, d);
            let w = random_word(&f, &mut rng, 3, 1);
            let prod = &(fx.matrix() * w.matrix()) * fx.matrix();
            inputs.push(ScaledOrthogonal::new_raw(&f, prod, fx.r() * fx.r())?);
        }
        for x in inputs {
            let canonical = x.canonical();
            match (canonical.r().is_one(), normalizer_certificate(&x, 3)?) {
                (true, NormalizerCertificate::CertifiedIntegral { element }) => {
                    if element.classify().class < Class::GammaS {
                        return Err(evenlat::Error::Internal(format!("{name}: certified element outside Γ_S")));
                    }
                    certified += 1;
                }
                (false, NormalizerCertificate::ViolationWitness { .. }) => witnessed += 1,
                (one, _) => {
                    return Err(evenlat::Error::Internal(format!("{name}: wrong verdict for r = 1: {one}")));
                }
            }
        }
    }
    Ok(format!("{certified} certified, {witnessed} violation witnesses"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<String>); 10] = [
        ("atlas closed form vs brute force", atlas),
        ("discriminant table", discriminants),
        ("glue values of A_n", glue_values),
        ("maximal overlattices of 4A1 and 5A1", overlattice_counts),
        ("D8 glued by h8", d8_unimodular),
        ("isotropic completion roundtrip", completion_roundtrips),
        ("right and double coset reduction", coset_reductions),
        ("inverse block formula", inverse_formula),
        ("normality of the discriminant kernel", normality),
        ("normalizer certificates", normalizer),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS criterion {:>2}: {name}: {detail}", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {:>2}: {name}: {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
