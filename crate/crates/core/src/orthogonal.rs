//! The extended form `S₁` of signature `(2, n+2)`, membership tests for
//! `SO`, `SO⁺`, `Γ_S` and the discriminant kernel, the standard generators
//! `J`, `T_λ`, `T*_λ`, and completion of primitive isotropic vectors.
//!
//! Coordinates of `ℤ^{n+4}` are ordered so that `0 ↔ n+3` and `1 ↔ n+2`
//! are hyperbolic pairs and `2..=n+1` carry `−S`. Vectors `λ ∈ ℤ^{n+2}`
//! for `T_λ` live in the middle block `1..=n+2`.

use std::fmt;
use std::ops::Mul;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::fqm::{is_maximal_even, Limits};
use crate::lattice::EvenLattice;
use crate::linalg::{gcd_all, inverse_rational, signature, Matrix, QMatrix};

#[derive(Debug)]
struct FormData {
    base: EvenLattice,
    s0: Matrix,
    s1: Matrix,
    s_inv: QMatrix,
    s1_inv: QMatrix,
    // S₁⁻¹ = s1_inv_num / s1_inv_den
    s1_inv_num: Matrix,
    s1_inv_den: BigInt,
}

/// `S₀ = [[0,0,1],[0,−S,0],[1,0,0]]` and `S₁ = [[0,0,1],[0,S₀,0],[1,0,0]]`
/// built from a positive definite even lattice. Cheap to clone.
#[derive(Clone, Debug)]
pub struct ExtendedForm(Arc<FormData>);

impl PartialEq for ExtendedForm {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.s1 == other.0.s1
    }
}

impl Eq for ExtendedForm {}

fn hyperbolic_wrap(inner: &Matrix) -> Matrix {
    let m = inner.rows() + 2;
    let mut out = Matrix::zeros(m, m);
    out[(0, m - 1)] = BigInt::one();
    out[(m - 1, 0)] = BigInt::one();
    out.set_block(1, 1, inner);
    out
}

fn hyperbolic_wrap_q(inner: &QMatrix) -> QMatrix {
    let m = inner.rows() + 2;
    let mut out = QMatrix::zeros(m, m);
    out[(0, m - 1)] = BigRational::one();
    out[(m - 1, 0)] = BigRational::one();
    out.set_block(1, 1, inner);
    out
}

/// Assembles `S₀`, `S₁` for a positive definite even lattice.
pub fn extend(base: &EvenLattice) -> Result<ExtendedForm> {
    if !base.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let s = base.gram();
    let s0 = hyperbolic_wrap(&s.neg());
    let s1 = hyperbolic_wrap(&s0);
    let s_inv = inverse_rational(s)?;
    let s0_inv = hyperbolic_wrap_q(&s_inv.scale(&-BigRational::one()));
    let s1_inv = hyperbolic_wrap_q(&s0_inv);
    let den = s1_inv.denominator();
    let s1_inv_num = s1_inv
        .scale(&BigRational::from_integer(den.clone()))
        .to_integer()
        .expect("denominators cleared");
    let n = base.rank();
    let sig = signature(&s1.to_rational())?;
    if sig != (2, n + 2, 0) {
        return Err(Error::Internal(format!("S₁ has signature {sig:?}")));
    }
    Ok(ExtendedForm(Arc::new(FormData {
        base: base.clone(),
        s0,
        s1,
        s_inv,
        s1_inv,
        s1_inv_num,
        s1_inv_den: den,
    })))
}

impl ExtendedForm {
    pub fn base(&self) -> &EvenLattice {
        &self.0.base
    }

    /// Rank `n` of the base lattice.
    pub fn n(&self) -> usize {
        self.0.base.rank()
    }

    /// `n + 4`.
    pub fn dim(&self) -> usize {
        self.n() + 4
    }

    pub fn s0(&self) -> &Matrix {
        &self.0.s0
    }

    pub fn s1(&self) -> &Matrix {
        &self.0.s1
    }

    pub fn s1_inverse(&self) -> &QMatrix {
        &self.0.s1_inv
    }

    /// `S₀⁻¹·v` for `v ∈ ℚ^{n+2}`.
    pub fn s0_inv_apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        let n = self.n();
        let mut out = Vec::with_capacity(n + 2);
        out.push(v[n + 1].clone());
        let lat = self.0.s_inv.mul_vec(&v[1..=n]);
        out.extend(lat.into_iter().map(|x| -x));
        out.push(v[0].clone());
        out
    }

    /// `xᵗ S₀ y`.
    pub fn s0_pair(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let n = self.n();
        let mut acc = &x[0] * &y[n + 1] + &x[n + 1] * &y[0];
        acc -= self.0.base.inner(&x[1..=n], &y[1..=n]);
        acc
    }

    /// `(M − I)·S₁⁻¹` integral, for an integer matrix `M`.
    pub fn is_congruent_to_identity(&self, m: &Matrix) -> bool {
        let den = &self.0.s1_inv_den;
        if den.is_one() {
            return true;
        }
        let diff = m.sub(&Matrix::identity(self.dim()));
        let prod = &diff * &self.0.s1_inv_num;
        prod.entries().iter().all(|x| x.is_multiple_of(den))
    }

    /// `vᵗ S₁ w` for integer vectors.
    pub fn pair(&self, v: &[BigInt], w: &[BigInt]) -> BigInt {
        let sw = self.0.s1.mul_vec(w);
        v.iter().zip(&sw).map(|(a, b)| a * b).sum()
    }
}

/// Membership classes, ordered from coarsest to finest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Class {
    NotOrthogonal,
    SoOnly,
    SoPlus,
    GammaS,
    DiscriminantKernel,
}

impl Class {
    pub fn as_str(&self) -> &'static str {
        match self {
            Class::NotOrthogonal => "not_orthogonal",
            Class::SoOnly => "so_only",
            Class::SoPlus => "so_plus",
            Class::GammaS => "gamma_s",
            Class::DiscriminantKernel => "discriminant_kernel",
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Why an element failed to reach the next finer class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    /// Entry of `Mᵗ S₁ M` that differs from `S₁`.
    FormEntry { row: usize, col: usize, expected: BigRational, found: BigRational },
    Determinant(BigRational),
    /// `det(CP + D) ≤ 0`.
    Orientation(BigRational),
    NonIntegral { row: usize, col: usize, value: BigRational },
    /// Non-integral entry of `(M − I)·S₁⁻¹`.
    Congruence { row: usize, col: usize, value: BigRational },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub class: Class,
    /// `det(CP + D)` whenever the determinant test was reached.
    pub orientation: Option<BigRational>,
    pub failure: Option<Failure>,
}

/// `det(C·P + D)` with `C`, `D` the outer 2×2 corners of the last two rows.
pub fn orientation(m: &QMatrix) -> BigRational {
    let k = m.rows();
    let (r0, r1) = (k - 2, k - 1);
    // C·P swaps the two columns of C
    let e00 = &m[(r0, 1)] + &m[(r0, k - 2)];
    let e01 = &m[(r0, 0)] + &m[(r0, k - 1)];
    let e10 = &m[(r1, 1)] + &m[(r1, k - 2)];
    let e11 = &m[(r1, 0)] + &m[(r1, k - 1)];
    e00 * e11 - e01 * e10
}

/// Finest class of `m` with respect to `S₁`.
pub fn classify(form: &ExtendedForm, m: &QMatrix) -> Result<Classification> {
    let k = form.dim();
    if m.rows() != k || m.cols() != k {
        return Err(Error::DimensionMismatch {
            expected: format!("{k}x{k}"),
            got: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    let s1 = form.s1().to_rational();
    let transported = &(&m.transpose() * &s1) * m;
    for i in 0..k {
        for j in 0..k {
            if transported[(i, j)] != s1[(i, j)] {
                return Ok(Classification {
                    class: Class::NotOrthogonal,
                    orientation: None,
                    failure: Some(Failure::FormEntry {
                        row: i,
                        col: j,
                        expected: s1[(i, j)].clone(),
                        found: transported[(i, j)].clone(),
                    }),
                });
            }
        }
    }
    let det = m.det()?;
    if !det.is_one() {
        return Ok(Classification {
            class: Class::NotOrthogonal,
            orientation: None,
            failure: Some(Failure::Determinant(det)),
        });
    }
    let o = orientation(m);
    let done = |class, failure| Ok(Classification { class, orientation: Some(o.clone()), failure });
    if !o.is_positive() {
        return done(Class::SoOnly, Some(Failure::Orientation(o.clone())));
    }
    if let Some((row, col)) = m.first_non_integral() {
        return done(Class::SoPlus, Some(Failure::NonIntegral { row, col, value: m[(row, col)].clone() }));
    }
    let cong = &m.sub(&QMatrix::identity(k)) * form.s1_inverse();
    if let Some((row, col)) = cong.first_non_integral() {
        return done(Class::GammaS, Some(Failure::Congruence { row, col, value: cong[(row, col)].clone() }));
    }
    done(Class::DiscriminantKernel, None)
}

pub fn classify_integral(form: &ExtendedForm, m: &Matrix) -> Result<Classification> {
    classify(form, &m.to_rational())
}

/// Blocks of `M = [[α, aᵗS₀, β], [b, K, c], [γ, dᵗS₀, δ]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blocks {
    pub alpha: BigInt,
    pub beta: BigInt,
    pub gamma: BigInt,
    pub delta: BigInt,
    pub a: Vec<BigInt>,
    pub b: Vec<BigInt>,
    pub c: Vec<BigInt>,
    pub d: Vec<BigInt>,
    pub k: Matrix,
}

/// An element of `Γ_S = SO⁺(S₁; ℤ)`.
#[derive(Clone, Debug)]
pub struct GroupElement {
    form: ExtendedForm,
    mat: Matrix,
    blocks: OnceLock<Blocks>,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.form == other.form && self.mat == other.mat
    }
}

impl Eq for GroupElement {}

fn to_q(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().cloned().map(BigRational::from_integer).collect()
}

fn to_z(v: &[BigRational]) -> Option<Vec<BigInt>> {
    v.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
}

impl GroupElement {
    /// Validates `mat` as a member of `Γ_S`.
    pub fn new(form: &ExtendedForm, mat: Matrix) -> Result<Self> {
        let c = classify_integral(form, &mat)?;
        if c.class < Class::GammaS {
            return Err(Error::NotInGroup(format!("classified as {}", c.class)));
        }
        Ok(Self::trusted(form, mat))
    }

    pub(crate) fn trusted(form: &ExtendedForm, mat: Matrix) -> Self {
        Self { form: form.clone(), mat, blocks: OnceLock::new() }
    }

    pub fn identity(form: &ExtendedForm) -> Self {
        Self::trusted(form, Matrix::identity(form.dim()))
    }

    pub fn form(&self) -> &ExtendedForm {
        &self.form
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn into_matrix(self) -> Matrix {
        self.mat
    }

    pub fn classify(&self) -> Classification {
        classify_integral(&self.form, &self.mat).expect("square of the right size")
    }

    pub fn blocks(&self) -> &Blocks {
        self.blocks.get_or_init(|| {
            let k = self.form.dim();
            let m = &self.mat;
            let mid = 1..k - 1;
            let top: Vec<BigInt> = mid.clone().map(|j| m[(0, j)].clone()).collect();
            let bottom: Vec<BigInt> = mid.clone().map(|j| m[(k - 1, j)].clone()).collect();
            let a = to_z(&self.form.s0_inv_apply(&to_q(&top))).expect("a is integral in Γ_S");
            let d = to_z(&self.form.s0_inv_apply(&to_q(&bottom))).expect("d is integral in Γ_S");
            Blocks {
                alpha: m[(0, 0)].clone(),
                beta: m[(0, k - 1)].clone(),
                gamma: m[(k - 1, 0)].clone(),
                delta: m[(k - 1, k - 1)].clone(),
                a,
                b: mid.clone().map(|i| m[(i, 0)].clone()).collect(),
                c: mid.clone().map(|i| m[(i, k - 1)].clone()).collect(),
                d,
                k: m.submatrix(1, k - 1, 1, k - 1),
            }
        })
    }

    /// Inverse assembled from the blocks:
    /// `[[δ, cᵗS₀, β], [d, S₀⁻¹KᵗS₀, a], [γ, bᵗS₀, α]]`.
    pub fn inverse(&self) -> GroupElement {
        let bl = self.blocks();
        let k = self.form.dim();
        let s0 = self.form.s0();
        let mut out = Matrix::zeros(k, k);
        out[(0, 0)] = bl.delta.clone();
        out[(0, k - 1)] = bl.beta.clone();
        out[(k - 1, 0)] = bl.gamma.clone();
        out[(k - 1, k - 1)] = bl.alpha.clone();
        let ct_s0 = s0.transpose().mul_vec(&bl.c);
        let bt_s0 = s0.transpose().mul_vec(&bl.b);
        for j in 0..k - 2 {
            out[(0, j + 1)] = ct_s0[j].clone();
            out[(k - 1, j + 1)] = bt_s0[j].clone();
            out[(j + 1, 0)] = bl.d[j].clone();
            out[(j + 1, k - 1)] = bl.a[j].clone();
        }
        // S₀⁻¹ Kᵗ S₀, column by column
        let kt_s0 = &bl.k.transpose() * s0;
        for j in 0..k - 2 {
            let col = self.form.s0_inv_apply(&to_q(&kt_s0.col(j)));
            for (i, x) in col.into_iter().enumerate() {
                assert!(x.is_integer(), "S₀⁻¹KᵗS₀ is integral in Γ_S");
                out[(i + 1, j + 1)] = x.to_integer();
            }
        }
        GroupElement::trusted(&self.form, out)
    }

    /// `S₁⁻¹·Mᵗ·S₁`, computed directly.
    pub fn inverse_direct(&self) -> Matrix {
        let s1 = self.form.s1().to_rational();
        (&(self.form.s1_inverse() * &self.mat.transpose().to_rational()) * &s1)
            .to_integer()
            .expect("inverse of an element of Γ_S is integral")
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.mat.mul_vec(v)
    }

    pub fn first_column(&self) -> Vec<BigInt> {
        self.mat.col(0)
    }

    pub fn pow(&self, e: u32) -> GroupElement {
        (0..e).fold(GroupElement::identity(&self.form), |acc, _| &acc * self)
    }
}

impl Mul for &GroupElement {
    type Output = GroupElement;

    /// Panics if the operands belong to different forms.
    fn mul(self, rhs: &GroupElement) -> GroupElement {
        assert!(self.form == rhs.form, "group elements of different forms");
        GroupElement::trusted(&self.form, &self.mat * &rhs.mat)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.mat.fmt(f)
    }
}

fn check_lambda<T>(form: &ExtendedForm, lambda: &[T]) -> Result<()> {
    if lambda.len() != form.n() + 2 {
        return Err(Error::DimensionMismatch {
            expected: format!("vector of length {}", form.n() + 2),
            got: format!("length {}", lambda.len()),
        });
    }
    Ok(())
}

/// `T_λ` for rational `λ`; integral when `λ` is.
pub fn t_rational(form: &ExtendedForm, lambda: &[BigRational]) -> Result<QMatrix> {
    check_lambda(form, lambda)?;
    let k = form.dim();
    let s0 = form.s0().to_rational();
    let row = s0.transpose().mul_vec(lambda);
    let half = form.s0_pair(lambda, lambda) / BigRational::from_integer(2.into());
    let mut t = QMatrix::identity(k);
    for j in 0..k - 2 {
        t[(0, j + 1)] = -row[j].clone();
        t[(j + 1, k - 1)] = lambda[j].clone();
    }
    t[(0, k - 1)] = -half;
    Ok(t)
}

/// `T*_λ` for rational `λ`.
pub fn t_star_rational(form: &ExtendedForm, lambda: &[BigRational]) -> Result<QMatrix> {
    check_lambda(form, lambda)?;
    let k = form.dim();
    let s0 = form.s0().to_rational();
    let row = s0.transpose().mul_vec(lambda);
    let half = form.s0_pair(lambda, lambda) / BigRational::from_integer(2.into());
    let mut t = QMatrix::identity(k);
    for j in 0..k - 2 {
        t[(k - 1, j + 1)] = -row[j].clone();
        t[(j + 1, 0)] = lambda[j].clone();
    }
    t[(k - 1, 0)] = -half;
    Ok(t)
}

/// `J = [[0,0,−P],[0,I,0],[−P,0,0]]` in blocks of sizes `2, n, 2`.
pub fn gen_j(form: &ExtendedForm) -> GroupElement {
    let k = form.dim();
    let mut j = Matrix::zeros(k, k);
    for i in 2..k - 2 {
        j[(i, i)] = BigInt::one();
    }
    // −P in both corners: entries (0, k−1), (1, k−2), (k−2, 1), (k−1, 0)
    for (r, c) in [(0, k - 1), (1, k - 2), (k - 2, 1), (k - 1, 0)] {
        j[(r, c)] = -BigInt::one();
    }
    GroupElement::trusted(form, j)
}

pub fn gen_t(form: &ExtendedForm, lambda: &[BigInt]) -> Result<GroupElement> {
    let t = t_rational(form, &to_q(lambda))?;
    Ok(GroupElement::trusted(form, t.to_integer().expect("S₀ is even")))
}

pub fn gen_t_star(form: &ExtendedForm, lambda: &[BigInt]) -> Result<GroupElement> {
    let t = t_star_rational(form, &to_q(lambda))?;
    Ok(GroupElement::trusted(form, t.to_integer().expect("S₀ is even")))
}

/// `diag(1, U, 1)` for an automorphism `V` of the base lattice, where `U`
/// acts as `V` on the lattice block and, if `det V = −1`, also swaps the
/// inner hyperbolic pair so that the result has determinant 1.
pub fn lattice_rotation(form: &ExtendedForm, v: &Matrix) -> Result<GroupElement> {
    let n = form.n();
    if v.rows() != n || v.cols() != n {
        return Err(Error::DimensionMismatch { expected: format!("{n}x{n}"), got: format!("{}x{}", v.rows(), v.cols()) });
    }
    let s = form.base().gram();
    if &(&(&v.transpose() * s) * v) != s {
        return Err(Error::NotInGroup("matrix does not preserve the lattice form".into()));
    }
    let k = form.dim();
    let mut u = Matrix::identity(k);
    u.set_block(2, 2, v);
    if v.det()?.is_negative() {
        u[(1, 1)] = BigInt::zero();
        u[(k - 2, k - 2)] = BigInt::zero();
        u[(1, k - 2)] = BigInt::one();
        u[(k - 2, 1)] = BigInt::one();
    }
    GroupElement::new(form, u)
}

/// Product of `len` uniformly chosen generators `J`, `T_λ`, `T*_λ` with
/// entries of `λ` in `[−bound, bound]`.
pub fn random_word<R: Rng + ?Sized>(form: &ExtendedForm, rng: &mut R, len: usize, bound: i64) -> GroupElement {
    let mut w = GroupElement::identity(form);
    for _ in 0..len {
        let g = match rng.gen_range(0..3) {
            0 => gen_j(form),
            which => {
                let lambda: Vec<BigInt> = (0..form.n() + 2).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
                if which == 1 {
                    gen_t(form, &lambda).expect("length matches")
                } else {
                    gen_t_star(form, &lambda).expect("length matches")
                }
            }
        };
        w = &w * &g;
    }
    w
}

/// `hᵗS₁h = 0` and `gcd(S₁h) = 1`.
pub fn is_primitive_isotropic(form: &ExtendedForm, h: &[BigInt]) -> bool {
    if h.len() != form.dim() {
        return false;
    }
    form.pair(h, h).is_zero() && gcd_all(&form.s1().mul_vec(h)).is_one()
}

struct Completion<'a> {
    form: &'a ExtendedForm,
    h: Vec<BigInt>,
    word: Matrix,
}

impl<'a> Completion<'a> {
    fn apply(&mut self, g: GroupElement) {
        self.h = g.apply(&self.h);
        self.word = g.matrix() * &self.word;
    }

    fn unit(&self, slot: usize, k: &BigInt) -> Vec<BigInt> {
        let mut l = vec![BigInt::zero(); self.form.n() + 2];
        l[slot] = k.clone();
        l
    }

    // The hyperbolic entries form X = [[h₀, h₁], [−h_{n+2}, h_{n+3}]];
    // the four moves below are elementary row/column operations on X.
    fn x(&self) -> [BigInt; 4] {
        let k = self.h.len();
        [self.h[0].clone(), self.h[1].clone(), -self.h[k - 2].clone(), self.h[k - 1].clone()]
    }

    fn row0_add_row1(&mut self, c: &BigInt) {
        let l = self.unit(0, c);
        self.apply(gen_t(self.form, &l).expect("length matches"));
    }

    fn row1_add_row0(&mut self, c: &BigInt) {
        let l = self.unit(self.form.n() + 1, &-c);
        self.apply(gen_t_star(self.form, &l).expect("length matches"));
    }

    fn col0_add_col1(&mut self, c: &BigInt) {
        let l = self.unit(self.form.n() + 1, &-c);
        self.apply(gen_t(self.form, &l).expect("length matches"));
    }

    fn col1_add_col0(&mut self, c: &BigInt) {
        let l = self.unit(0, c);
        self.apply(gen_t_star(self.form, &l).expect("length matches"));
    }

    fn rotate_rows(&mut self) {
        let one = BigInt::one();
        self.row0_add_row1(&one);
        self.row1_add_row0(&-&one);
        self.row0_add_row1(&one);
    }

    fn rotate_cols(&mut self) {
        let one = BigInt::one();
        self.col0_add_col1(&one);
        self.col1_add_col0(&-&one);
        self.col0_add_col1(&one);
    }

    /// Brings X to `diag(g, m)` with `g > 0`, `g | m`. The smallest nonzero
    /// entry is moved to the corner and the others reduced modulo it.
    fn smith(&mut self) -> Result<()> {
        loop {
            let x = self.x();
            let pivot = (0..4)
                .filter(|&i| !x[i].is_zero())
                .min_by(|&i, &j| x[i].abs().cmp(&x[j].abs()))
                .ok_or_else(|| Error::Internal("hyperbolic part vanished".into()))?;
            if pivot >= 2 {
                self.rotate_rows();
            }
            if pivot % 2 == 1 {
                self.rotate_cols();
            }
            let [p, x01, x10, _] = self.x();
            self.row1_add_row0(&-(&x10 / &p));
            self.col1_add_col0(&-(&x01 / &p));
            let [p, x01, x10, x11] = self.x();
            if !x01.is_zero() || !x10.is_zero() {
                continue;
            }
            if !x11.is_multiple_of(&p) {
                self.row0_add_row1(&BigInt::one());
                continue;
            }
            if p.is_negative() {
                self.rotate_rows();
                self.rotate_rows();
            }
            return Ok(());
        }
    }

    fn lattice_part(&self) -> Vec<BigInt> {
        let n = self.form.n();
        self.h[2..2 + n].to_vec()
    }

    /// `T*_μ` with `μ` supported on the lattice block.
    fn shift_lattice(&mut self, mu: &[BigInt]) {
        let mut l = vec![BigInt::zero(); self.form.n() + 2];
        l[1..=mu.len()].clone_from_slice(mu);
        self.apply(gen_t_star(self.form, &l).expect("length matches"));
    }

    fn run(&mut self) -> Result<()> {
        let n = self.form.n();
        for _ in 0..100_000 {
            self.smith()?;
            let g = self.h[0].clone();
            let ell = self.lattice_part();
            if g.is_one() {
                let mu: Vec<BigInt> = ell.iter().map(|x| -x).collect();
                self.shift_lattice(&mu);
                return Ok(());
            }
            if ell.iter().any(|x| x.is_negative() || x >= &g) {
                let mu: Vec<BigInt> = ell.iter().map(|x| -x.div_floor(&g)).collect();
                self.shift_lattice(&mu);
                continue;
            }
            let s_ell = self.form.base().gram().mul_vec(&ell);
            let i = (0..n)
                .find(|&i| !s_ell[i].is_multiple_of(&g))
                .ok_or_else(|| Error::NotPrimitiveIsotropic("gcd(S₁h) > 1".into()))?;
            let mut mu = vec![BigInt::zero(); n];
            mu[i] = BigInt::one();
            self.shift_lattice(&mu);
        }
        Err(Error::Internal("completion did not terminate".into()))
    }
}

/// An element `M` of the discriminant kernel with first column `h`.
pub fn complete_isotropic(form: &ExtendedForm, h: &[BigInt]) -> Result<GroupElement> {
    if h.len() != form.dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("vector of length {}", form.dim()),
            got: format!("length {}", h.len()),
        });
    }
    if !form.pair(h, h).is_zero() {
        return Err(Error::NotPrimitiveIsotropic(format!("hᵗS₁h = {}", form.pair(h, h))));
    }
    let g = gcd_all(&form.s1().mul_vec(h));
    if !g.is_one() {
        return Err(Error::NotPrimitiveIsotropic(format!("gcd(S₁h) = {g}")));
    }
    let mut c = Completion { form, h: h.to_vec(), word: Matrix::identity(form.dim()) };
    c.run()?;
    let mut e0 = vec![BigInt::zero(); form.dim()];
    e0[0] = BigInt::one();
    if c.h != e0 {
        return Err(Error::Internal(format!("reduction ended at {:?}", c.h)));
    }
    let m = GroupElement::trusted(form, c.word).inverse();
    if m.first_column() != h {
        return Err(Error::Internal("completed matrix has the wrong first column".into()));
    }
    if !form.is_congruent_to_identity(m.matrix()) {
        return Err(Error::Internal("completed matrix left the discriminant kernel".into()));
    }
    Ok(m)
}

/// Number of zero-dimensional cusps: one exactly when the base lattice is
/// maximal even. Otherwise a primitive isotropic vector of `L₁♯` outside
/// `L₁` is given, which no element of `Γ_S` can map to `e₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CuspVerdict {
    Single,
    Multiple { witness: Vec<BigRational> },
}

pub fn cusp_verdict(form: &ExtendedForm, limits: &Limits) -> Result<CuspVerdict> {
    let base = form.base();
    let module = base.discriminant_group();
    let Some(x) = module.isotropic_elements(limits)?.into_iter().next() else {
        return Ok(CuspVerdict::Single);
    };
    let lambda = module.lift(&x)?;
    let t = base.norm(&lambda) / BigRational::from_integer(2.into());
    let n = form.n();
    let mut g = vec![BigRational::zero(); n + 4];
    g[0] = BigRational::one();
    g[2..2 + n].clone_from_slice(&lambda);
    g[n + 3] = t;
    Ok(CuspVerdict::Multiple { witness: g })
}

pub fn cusp_is_single(form: &ExtendedForm, limits: &Limits) -> Result<bool> {
    is_maximal_even(form.base(), limits)
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::roots::build;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn words_stay_in_kernel(seed in any::<u64>(), len in 0usize..12, which in 0usize..3) {
            let name = ["A1", "A2", "D4"][which];
            let f = extend(&build(&name.parse().unwrap()).unwrap()).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w = random_word(&f, &mut rng, len, 3);
            prop_assert_eq!(w.classify().class, Class::DiscriminantKernel);
            let h = w.first_column();
            prop_assert!(is_primitive_isotropic(&f, &h));
            let m = complete_isotropic(&f, &h).unwrap();
            prop_assert_eq!(m.first_column(), h);
        }
    }
}
