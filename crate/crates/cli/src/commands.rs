use clap::ValueEnum;
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use evenlat::cosets::{reduce_double_coset_with, reduce_right_coset_with, ScaledOrthogonal};
use evenlat::fqm::{is_maximal_even, overlattice_from_glue};
use evenlat::lattice::Definiteness;
use evenlat::linalg::gcd_all;
use evenlat::orthogonal::{classify as classify_matrix, complete_isotropic, cusp_verdict, extend, CuspVerdict, Failure};
use evenlat::roots::{build, closed_form_maximal, RootLatticeSpec};
use evenlat::{Element, EvenLattice, Error, FiniteQuadraticModule, Limits, Matrix, QMatrix};

use crate::report::{int, ints, matrix, qmatrix, rat, rats};
use crate::CliError;

fn echo(l: &EvenLattice) -> Value {
    json!({
        "name": l.name().map_or(Value::Null, Value::from),
        "rank": l.rank(),
        "gram": matrix(l.gram()),
    })
}

fn element(x: &Element) -> Value {
    ints(x.coords())
}

fn definiteness(l: &EvenLattice) -> &'static str {
    match l.definiteness() {
        Definiteness::PositiveDefinite => "positive_definite",
        Definiteness::NegativeDefinite => "negative_definite",
        Definiteness::Indefinite => "indefinite",
    }
}

fn q_table(module: &FiniteQuadraticModule, limits: &Limits) -> Result<Value, Error> {
    let rows = module
        .elements(limits)?
        .iter()
        .map(|x| {
            Ok(json!({
                "element": element(x),
                "order": int(&module.order_of(x)?),
                "q": rat(&module.q_value(x)?),
            }))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(Value::Array(rows))
}

/// Turns a cap overflow into `null` and records it in `capped`.
fn capped<T>(r: Result<T, Error>, what: &str, capped: &mut Vec<Value>) -> Result<Option<T>, CliError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e @ Error::CapExceeded { .. }) => {
            capped.push(json!({ "section": what, "reason": e.to_string() }));
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn analyze(l: &EvenLattice, limits: &Limits) -> Result<Value, CliError> {
    let module = l.discriminant_group();
    let mut skipped = Vec::new();
    let table = capped(q_table(&module, limits), "q_table", &mut skipped)?;
    let anisotropic = capped(module.is_anisotropic(limits), "anisotropic", &mut skipped)?;
    let overlattices = match anisotropic {
        Some(true) => Some(1),
        Some(false) => capped(
            module.maximal_isotropic_subgroups(limits).map(|g| g.len()),
            "maximal_overlattices",
            &mut skipped,
        )?,
        None => None,
    };
    let cusps = if l.is_positive_definite() && anisotropic.is_some() {
        let form = extend(l)?;
        match cusp_verdict(&form, limits)? {
            CuspVerdict::Single => json!({ "count": "one", "witness": null }),
            CuspVerdict::Multiple { witness } => json!({ "count": "more_than_one", "witness": rats(&witness) }),
        }
    } else {
        Value::Null
    };
    let opt = |v: Option<Value>| v.unwrap_or(Value::Null);
    Ok(json!({
        "lattice": echo(l),
        "discriminant": int(l.discriminant()),
        "definiteness": definiteness(l),
        "discriminant_group": {
            "divisors": ints(module.divisors()),
            "order": int(&module.order()),
        },
        "q_table": opt(table),
        "anisotropic": opt(anisotropic.map(Value::from)),
        "maximal_even": opt(anisotropic.map(Value::from)),
        "maximal_overlattices": opt(overlattices.map(Value::from)),
        "zero_dimensional_cusps": cusps,
        "cap_exceeded": Value::Array(skipped),
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AtlasFamily {
    A,
    D,
    E,
}

pub fn atlas(family: Option<AtlasFamily>, min: usize, max: usize, limits: &Limits) -> Result<Value, CliError> {
    let wanted = |f: AtlasFamily| family.is_none_or(|g| g == f);
    let mut specs = Vec::new();
    if wanted(AtlasFamily::A) {
        specs.extend((min.max(1)..=max).map(RootLatticeSpec::a));
    }
    if wanted(AtlasFamily::D) {
        specs.extend((min.max(3)..=max).map(RootLatticeSpec::d));
    }
    if wanted(AtlasFamily::E) {
        specs.extend((min.max(6)..=max.min(8)).map(RootLatticeSpec::e));
    }
    let mut rows = Vec::new();
    let mut all_agree = true;
    for spec in specs {
        let spec = spec?;
        let l = build(&spec)?;
        let brute = is_maximal_even(&l, limits)?;
        let closed = closed_form_maximal(&spec).expect("irreducible family");
        all_agree &= brute == closed;
        rows.push(json!({
            "lattice": spec.to_string(),
            "discriminant": int(l.discriminant()),
            "closed_form": closed,
            "brute_force": brute,
            "agree": brute == closed,
        }));
    }
    Ok(json!({ "rows": rows, "all_agree": all_agree }))
}

pub fn overlattices(l: &EvenLattice, limits: &Limits) -> Result<Value, CliError> {
    let module = l.discriminant_group();
    let mut out = Vec::new();
    for g in module.maximal_isotropic_subgroups(limits)? {
        let (sup, emb) = overlattice_from_glue(l, &g)?;
        let glue: Vec<Value> = g
            .generators()
            .iter()
            .map(|x| Ok(json!({ "element": element(x), "vector": rats(&module.lift(x)?) })))
            .collect::<Result<_, Error>>()?;
        out.push(json!({
            "glue_order": int(g.order()),
            "glue_generators": glue,
            "index": int(emb.index()),
            "gram": matrix(sup.gram()),
            "discriminant": int(sup.discriminant()),
            "embedding": matrix(emb.h()),
            "maximal_even": is_maximal_even(&sup, limits)?,
        }));
    }
    Ok(json!({
        "lattice": echo(l),
        "count": out.len(),
        "overlattices": out,
    }))
}

fn check(name: &str, ok: bool) -> Value {
    json!({ "check": name, "ok": ok })
}

fn all_ok(checks: &[Value]) -> bool {
    checks.iter().all(|c| c["ok"] == Value::Bool(true))
}

pub fn reduce(l: &EvenLattice, m: Matrix, r: BigInt, double: bool, canonical: bool, limits: &Limits) -> Result<Value, CliError> {
    let form = extend(l)?;
    let x = if canonical { ScaledOrthogonal::new(&form, m, r)? } else { ScaledOrthogonal::new_raw(&form, m, r)? };
    let k = form.dim();
    let input = json!({ "r": int(x.r()), "R": matrix(x.matrix()) });
    if !double {
        let red = reduce_right_coset_with(&x, limits)?;
        let t = &red.t;
        let checks = vec![
            check("M is in the discriminant kernel", red.m.classify().class == evenlat::Class::DiscriminantKernel),
            check("T = M·R", red.m.matrix() * x.matrix() == *t),
            check("first column of T is α·e₀", t[(0, 0)] == red.alpha && (1..k).all(|i| t[(i, 0)].is_zero())),
            check("last row of T is δ·e_last", t[(k - 1, k - 1)] == red.delta && (0..k - 1).all(|j| t[(k - 1, j)].is_zero())),
            check("α = gcd of the first column of R", red.alpha == gcd_all(x.matrix().col(0).iter())),
            check("α·δ = r", &red.alpha * &red.delta == *x.r()),
        ];
        return Ok(json!({
            "lattice": echo(l),
            "input": input,
            "hypothesis": red.hypothesis.to_string(),
            "alpha": int(&red.alpha),
            "delta": int(&red.delta),
            "M": matrix(red.m.matrix()),
            "T": matrix(t),
            "verified": all_ok(&checks),
            "checks": checks,
        }));
    }
    let red = reduce_double_coset_with(&x, limits)?;
    let d = &red.diagonal;
    let outer_clear = (1..k).all(|i| d[(i, 0)].is_zero() && d[(0, i)].is_zero())
        && (0..k - 1).all(|i| d[(i, k - 1)].is_zero() && d[(k - 1, i)].is_zero());
    let inner = d.submatrix(1, k - 1, 1, k - 1);
    let checks = vec![
        check("M₁ is in the discriminant kernel", red.left.classify().class == evenlat::Class::DiscriminantKernel),
        check("M₂ is in Γ_S", red.right.classify().class >= evenlat::Class::GammaS),
        check("M₁·R·M₂ = R*", &(red.left.matrix() * x.matrix()) * red.right.matrix() == *d),
        check("R* = diag(α*, K, δ*)", outer_clear && d[(0, 0)] == red.alpha && d[(k - 1, k - 1)] == red.delta),
        check("α* = content of R", red.alpha == x.content()),
        check("α* divides K", (inner.content() % &red.alpha).is_zero()),
        check("α*·δ* = r", &red.alpha * &red.delta == *x.r()),
    ];
    let probes: Vec<Value> =
        red.probes.iter().map(|p| json!({ "lambda": ints(&p.lambda), "gcd": int(&p.gcd) })).collect();
    Ok(json!({
        "lattice": echo(l),
        "input": input,
        "hypothesis": red.hypothesis.to_string(),
        "alpha_star": int(&red.alpha),
        "delta_star": int(&red.delta),
        "M1": matrix(red.left.matrix()),
        "M2": matrix(red.right.matrix()),
        "R_star": matrix(d),
        "rounds": red.rounds,
        "probes": probes,
        "verified": all_ok(&checks),
        "checks": checks,
    }))
}

fn failure(f: &Failure) -> Value {
    match f {
        Failure::FormEntry { row, col, expected, found } => json!({
            "kind": "form_entry", "row": row, "col": col, "expected": rat(expected), "found": rat(found),
        }),
        Failure::Determinant(d) => json!({ "kind": "determinant", "value": rat(d) }),
        Failure::Orientation(o) => json!({ "kind": "orientation", "value": rat(o) }),
        Failure::NonIntegral { row, col, value } => json!({
            "kind": "non_integral", "row": row, "col": col, "value": rat(value),
        }),
        Failure::Congruence { row, col, value } => json!({
            "kind": "congruence", "row": row, "col": col, "value": rat(value),
        }),
    }
}

pub fn classify(l: &EvenLattice, m: &QMatrix) -> Result<Value, CliError> {
    let form = extend(l)?;
    let c = classify_matrix(&form, m)?;
    let mut out = Map::new();
    out.insert("lattice".into(), echo(l));
    out.insert("matrix".into(), qmatrix(m));
    out.insert("class".into(), Value::from(c.class.as_str()));
    out.insert("orientation".into(), c.orientation.as_ref().map_or(Value::Null, rat));
    out.insert("witness".into(), c.failure.as_ref().map_or(Value::Null, failure));
    Ok(Value::Object(out))
}

pub fn complete(l: &EvenLattice, h: &[BigInt]) -> Result<Value, CliError> {
    let form = extend(l)?;
    let m = complete_isotropic(&form, h)?;
    let checks = vec![
        check("M·e₀ = h", m.first_column() == h),
        check("M is in the discriminant kernel", m.classify().class == evenlat::Class::DiscriminantKernel),
    ];
    Ok(json!({
        "lattice": echo(l),
        "h": ints(h),
        "M": matrix(m.matrix()),
        "verified": all_ok(&checks),
        "checks": checks,
    }))
}
