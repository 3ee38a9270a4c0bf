//! Even lattices given by a Gram matrix in a fixed basis.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fqm::FiniteQuadraticModule;
use crate::linalg::{hermite_column_basis, Matrix, QMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Definiteness {
    PositiveDefinite,
    NegativeDefinite,
    Indefinite,
}

/// An even lattice `ℤⁿ` with integral symmetric Gram matrix `S`, even
/// diagonal and `det S ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenLattice {
    name: Option<String>,
    gram: Matrix,
    det: BigInt,
    definiteness: Definiteness,
}

/// Validates an integral Gram matrix as an even nondegenerate lattice.
pub fn validate_even(gram: Matrix) -> Result<EvenLattice> {
    if !gram.is_square() {
        return Err(Error::NotSquare { rows: gram.rows(), cols: gram.cols() });
    }
    if let Some((row, col)) = gram.first_asymmetry() {
        return Err(Error::NotSymmetric { row, col });
    }
    if let Some(index) = (0..gram.rows()).find(|&i| gram[(i, i)].is_odd()) {
        return Err(Error::OddDiagonal { index });
    }
    let det = gram.det()?;
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let minors = gram.leading_minors()?;
    let definiteness = if minors.iter().all(Signed::is_positive) {
        Definiteness::PositiveDefinite
    } else if minors
        .iter()
        .enumerate()
        .all(|(k, d)| if k % 2 == 0 { d.is_negative() } else { d.is_positive() })
    {
        Definiteness::NegativeDefinite
    } else {
        Definiteness::Indefinite
    };
    Ok(EvenLattice { name: None, gram, det, definiteness })
}

impl EvenLattice {
    pub fn new(gram: Matrix) -> Result<Self> {
        validate_even(gram)
    }

    /// Validates a Gram matrix with rational entries, which must all be integers.
    pub fn from_rational_gram(gram: &QMatrix) -> Result<Self> {
        match gram.to_integer() {
            Some(g) => validate_even(g),
            None => {
                let (i, j) = gram.first_non_integral().unwrap_or((0, 0));
                Err(Error::NonIntegral(format!("gram entry ({i}, {j}) = {}", gram[(i, j)])))
            }
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// `det S`, signed.
    pub fn discriminant(&self) -> &BigInt {
        &self.det
    }

    pub fn definiteness(&self) -> Definiteness {
        self.definiteness
    }

    pub fn is_positive_definite(&self) -> bool {
        self.definiteness == Definiteness::PositiveDefinite
    }

    /// `xᵗ S y` for rational coordinate vectors.
    pub fn inner(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let n = self.rank();
        let mut acc = BigRational::zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                let s = &self.gram[(i, j)];
                if s.is_zero() || y[j].is_zero() {
                    continue;
                }
                acc += &x[i] * &y[j] * BigRational::from_integer(s.clone());
            }
        }
        acc
    }

    pub fn norm(&self, x: &[BigRational]) -> BigRational {
        self.inner(x, x)
    }

    /// `(Λ♯/Λ, q̄)` presented through the Smith form of `S`.
    pub fn discriminant_group(&self) -> FiniteQuadraticModule {
        FiniteQuadraticModule::of_lattice(self)
    }

    /// Orthogonal direct sum (block-diagonal Gram matrix).
    pub fn direct_sum(&self, other: &EvenLattice) -> EvenLattice {
        let gram = Matrix::block_diag(&[&self.gram, &other.gram]);
        validate_even(gram).expect("direct sum of even lattices is even")
    }

    /// `k` orthogonal copies of this lattice.
    pub fn power(&self, k: usize) -> EvenLattice {
        let blocks: Vec<&Matrix> = std::iter::repeat_n(&self.gram, k).collect();
        validate_even(Matrix::block_diag(&blocks)).expect("direct sum of even lattices is even")
    }
}

/// `L ⊆ L*` with `S = Hᵗ·S*·H`; columns of `H` are the basis of `L` in
/// the basis of `L*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeEmbedding {
    sub: EvenLattice,
    sup: EvenLattice,
    h: Matrix,
    index: BigInt,
}

impl LatticeEmbedding {
    pub fn sub(&self) -> &EvenLattice {
        &self.sub
    }

    pub fn sup(&self) -> &EvenLattice {
        &self.sup
    }

    pub fn h(&self) -> &Matrix {
        &self.h
    }

    /// `[L* : L] = |det H|`.
    pub fn index(&self) -> &BigInt {
        &self.index
    }
}

/// Checks `S = Hᵗ·S*·H` and records the index `|det H|`.
pub fn embed(sub_gram: Matrix, sup: &EvenLattice, h: Matrix) -> Result<LatticeEmbedding> {
    let sub = validate_even(sub_gram)?;
    let n = sup.rank();
    if h.rows() != n || h.cols() != sub.rank() {
        return Err(Error::DimensionMismatch {
            expected: format!("{n}x{} change of basis", sub.rank()),
            got: format!("{}x{}", h.rows(), h.cols()),
        });
    }
    if sub.rank() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("sublattice of rank {n}"),
            got: format!("rank {}", sub.rank()),
        });
    }
    let transported = &(&h.transpose() * sup.gram()) * &h;
    if &transported != sub.gram() {
        return Err(Error::FormMismatch(format!("Hᵗ S* H = {transported} but S = {}", sub.gram())));
    }
    let index = h.det()?.abs();
    if index.is_zero() {
        return Err(Error::Singular);
    }
    Ok(LatticeEmbedding { sub, sup: sup.clone(), h, index })
}

/// Lattice spanned by the columns of `gens` (rational coordinates in an
/// ambient space with Gram matrix `ambient`). Returns the basis matrix
/// (columns, ambient coordinates) and the Gram matrix of that basis.
pub fn span_generators(ambient: &QMatrix, gens: &QMatrix) -> Result<(QMatrix, QMatrix)> {
    let den = gens.denominator();
    let scaled = gens
        .scale(&BigRational::from_integer(den.clone()))
        .to_integer()
        .expect("clearing denominators yields an integer matrix");
    let basis = hermite_column_basis(&scaled)?
        .to_rational()
        .scale(&BigRational::new(BigInt::one(), den));
    let gram = &(&basis.transpose() * ambient) * &basis;
    Ok((basis, gram))
}
