//! Irreducible root lattices `A_n`, `D_n`, `E_6`, `E_7`, `E_8`, the glued
//! lattices `D_n⁺`, sums `kA_1`, and the closed-form maximality criterion.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::fqm::{Element, FiniteQuadraticModule};
use crate::lattice::{span_generators, validate_even, EvenLattice};
use crate::linalg::{Matrix, QMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    D,
    E,
    DPlus,
    KA1,
}

/// A root lattice name such as `A12`, `D8`, `E7`, `D8+` or `4A1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootLatticeSpec {
    pub family: Family,
    pub rank: usize,
}

impl RootLatticeSpec {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::DPlus => rank >= 4 && rank.is_multiple_of(2),
            Family::KA1 => rank >= 1,
        };
        let spec = Self { family, rank };
        if ok {
            Ok(spec)
        } else {
            Err(Error::InvalidRootLattice(format!("{spec}: rank out of range")))
        }
    }

    pub fn a(n: usize) -> Result<Self> {
        Self::new(Family::A, n)
    }

    pub fn d(n: usize) -> Result<Self> {
        Self::new(Family::D, n)
    }

    pub fn e(n: usize) -> Result<Self> {
        Self::new(Family::E, n)
    }

    pub fn is_irreducible(&self) -> bool {
        matches!(self.family, Family::A | Family::D | Family::E)
    }
}

impl fmt::Display for RootLatticeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::A => write!(f, "A{}", self.rank),
            Family::D => write!(f, "D{}", self.rank),
            Family::E => write!(f, "E{}", self.rank),
            Family::DPlus => write!(f, "D{}+", self.rank),
            Family::KA1 => write!(f, "{}A1", self.rank),
        }
    }
}

impl FromStr for RootLatticeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidRootLattice(format!("cannot parse {s:?}"));
        let s = s.trim();
        if let Some(k) = s.strip_suffix("A1").filter(|k| !k.is_empty()) {
            return Self::new(Family::KA1, k.parse().map_err(|_| bad())?);
        }
        let (family, rest) = match s.chars().next() {
            Some('A') => (Family::A, &s[1..]),
            Some('D') => match s[1..].strip_suffix('+') {
                Some(r) => (Family::DPlus, r),
                None => (Family::D, &s[1..]),
            },
            Some('E') => (Family::E, &s[1..]),
            _ => return Err(bad()),
        };
        Self::new(family, rest.parse().map_err(|_| bad())?)
    }
}

/// Basis vectors (columns) in the standard coordinates of `ℤ^m` for the
/// families with an integral standard model.
///
/// `A_n`: `e_i − e_{i+1}` in `ℤ^{n+1}`. `D_n`: `e_1 + e_2` followed by
/// `e_i − e_{i+1}` in `ℤ^n`.
pub fn ambient_basis(spec: &RootLatticeSpec) -> Option<Matrix> {
    match spec.family {
        Family::A => {
            let n = spec.rank;
            let mut b = Matrix::zeros(n + 1, n);
            for i in 0..n {
                b[(i, i)] = BigInt::one();
                b[(i + 1, i)] = -BigInt::one();
            }
            Some(b)
        }
        Family::D => {
            let n = spec.rank;
            let mut b = Matrix::zeros(n, n);
            b[(0, 0)] = BigInt::one();
            b[(1, 0)] = BigInt::one();
            for i in 0..n - 1 {
                b[(i, i + 1)] = BigInt::one();
                b[(i + 1, i + 1)] = -BigInt::one();
            }
            Some(b)
        }
        _ => None,
    }
}

// E_n Gram matrices are Cartan matrices of the Dynkin diagram with
// Bourbaki labels 1-3-4-5-6-7-8 and 2 attached to 4. E_7 and E_6 are
// spanned by the first 7 resp. 6 simple roots of E_8, i.e. the
// orthogonal complement of the highest root ω_8 of E_8 (and further
// of ω_7 inside E_7); the test `e7_is_a_root_complement_in_e8` recomputes
// ⟨e7−e8⟩⊥ in the D8⁺ model and matches discriminants.
const E_EDGES: [(usize, usize); 7] = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)];

fn e_cartan(n: usize) -> Matrix {
    let mut s = Matrix::identity(n).scale(&BigInt::from(2));
    for &(a, b) in E_EDGES.iter().filter(|&&(a, b)| a <= n && b <= n) {
        s[(a - 1, b - 1)] = -BigInt::one();
        s[(b - 1, a - 1)] = -BigInt::one();
    }
    s
}

fn half_ones(n: usize) -> Vec<BigRational> {
    vec![BigRational::new(BigInt::one(), BigInt::from(2)); n]
}

/// Gram matrix of the requested lattice in its canonical basis.
///
/// `D_n⁺` is glued from `D_n` and `h_n = ½(e_1+…+e_n)`; the result is
/// rejected by [`validate_even`] unless `8 | n`.
pub fn build(spec: &RootLatticeSpec) -> Result<EvenLattice> {
    let spec = RootLatticeSpec::new(spec.family, spec.rank)?;
    let gram = match spec.family {
        Family::A | Family::D => {
            let b = ambient_basis(&spec).expect("integral model exists");
            &b.transpose() * &b
        }
        Family::E => e_cartan(spec.rank),
        Family::KA1 => Matrix::identity(spec.rank).scale(&BigInt::from(2)),
        Family::DPlus => {
            let n = spec.rank;
            let b = ambient_basis(&RootLatticeSpec::d(n)?).expect("integral model exists");
            let mut gens = QMatrix::zeros(n, n + 1);
            gens.set_block(0, 0, &b.to_rational());
            for (i, h) in half_ones(n).into_iter().enumerate() {
                gens[(i, n)] = h;
            }
            let (_, gram) = span_generators(&QMatrix::identity(n), &gens)?;
            return Ok(EvenLattice::from_rational_gram(&gram)?.with_name(spec.to_string()));
        }
    };
    Ok(validate_even(gram)?.with_name(spec.to_string()))
}

pub fn is_squarefree(m: u64) -> bool {
    if m == 0 {
        return false;
    }
    let mut m = m;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// Closed-form maximality verdict for the irreducible families; `None`
/// for `D_n⁺` and `kA_1`.
pub fn closed_form_maximal(spec: &RootLatticeSpec) -> Option<bool> {
    let n = spec.rank as u64;
    match spec.family {
        Family::A if n.is_multiple_of(2) => Some(is_squarefree(n + 1)),
        Family::A => Some(is_squarefree(n.div_ceil(2))),
        Family::D => Some(!n.is_multiple_of(8)),
        Family::E => Some(true),
        Family::DPlus | Family::KA1 => None,
    }
}

/// A glue vector given in ambient coordinates, lattice coordinates, and as
/// a class of the discriminant module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlueVector {
    pub ambient: Vec<BigRational>,
    pub coords: Vec<BigRational>,
    pub element: Element,
}

/// Solves `B·c = v` for `c`; `v` must lie in the rational span of `B`.
pub fn lattice_coordinates(b: &Matrix, v: &[BigRational]) -> Result<Vec<BigRational>> {
    let bq = b.to_rational();
    let bt = bq.transpose();
    let c = (&bt * &bq).inverse()?.mul_vec(&bt.mul_vec(v));
    if bq.mul_vec(&c) != v {
        return Err(Error::DimensionMismatch { expected: "vector in the span of the basis".into(), got: "vector outside it".into() });
    }
    Ok(c)
}

fn glue(spec: &RootLatticeSpec, ambient: Vec<BigRational>) -> Result<(FiniteQuadraticModule, GlueVector)> {
    let b = ambient_basis(spec).expect("integral model exists");
    let coords = lattice_coordinates(&b, &ambient)?;
    let module = build(spec)?.discriminant_group();
    let element = module.element_of(&coords)?;
    Ok((module, GlueVector { ambient, coords, element }))
}

/// `a_n = (1/(n+1))·(n·e_1 − e_2 − … − e_{n+1})` as a class of `A_n♯/A_n`.
pub fn an_glue_generator(n: usize) -> Result<(FiniteQuadraticModule, GlueVector)> {
    let spec = RootLatticeSpec::a(n)?;
    let den = BigInt::from(n + 1);
    let mut ambient = vec![BigRational::new(-BigInt::one(), den.clone()); n + 1];
    ambient[0] = BigRational::new(BigInt::from(n), den);
    glue(&spec, ambient)
}

/// `h_n = ½(e_1 + … + e_n)` as a class of `D_n♯/D_n`.
pub fn dn_glue_vector(n: usize) -> Result<(FiniteQuadraticModule, GlueVector)> {
    glue(&RootLatticeSpec::d(n)?, half_ones(n))
}

/// All `j ∈ [1, n]` with `n·j² ≡ 0 (mod 2(n+1))`, i.e. the multiples
/// `j·a_n` that are isotropic.
pub fn an_isotropic_multiples(n: usize) -> Vec<u64> {
    let n = n as u64;
    (1..=n).filter(|j| (n * j * j).is_multiple_of(2 * (n + 1))).collect()
}
