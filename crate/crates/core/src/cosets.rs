//! Scaled integral orthogonal matrices `R` with `(1/√r)·R ∈ SO⁺(S₁; ℝ)`,
//! right and double coset reduction modulo the discriminant kernel, and
//! membership in the maximal discrete extension attached to an overlattice.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};
use crate::fqm::{is_maximal_even, Limits};
use crate::lattice::LatticeEmbedding;
use crate::linalg::{gcd_all, Matrix, QMatrix};
use crate::orthogonal::{
    classify, complete_isotropic, extend, gen_j, gen_t, orientation, Class, ExtendedForm, GroupElement,
};

/// Integral `R` and `r ≥ 1` with `Rᵗ·S₁·R = r·S₁`, `det R > 0` and
/// `det(CP + D) > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledOrthogonal {
    form: ExtendedForm,
    mat: Matrix,
    r: BigInt,
}

fn validate(form: &ExtendedForm, mat: &Matrix, r: &BigInt) -> Result<()> {
    let k = form.dim();
    if mat.rows() != k || mat.cols() != k {
        return Err(Error::DimensionMismatch { expected: format!("{k}x{k}"), got: format!("{}x{}", mat.rows(), mat.cols()) });
    }
    if !r.is_positive() {
        return Err(Error::NotInGroup(format!("scale r = {r} must be positive")));
    }
    let lhs = &(&mat.transpose() * form.s1()) * mat;
    if lhs != form.s1().scale(r) {
        return Err(Error::FormMismatch(format!("Rᵗ S₁ R ≠ {r}·S₁")));
    }
    let det = mat.det()?;
    if !det.is_positive() {
        return Err(Error::NotInGroup(format!("det R = {det}")));
    }
    // det R = r^{(n+4)/2} only makes sense as an integer identity for even n;
    // for odd n its square is implied by the form equation.
    if form.n().is_multiple_of(2) && det != Pow::pow(r, (form.n() as u32 + 4) / 2) {
        return Err(Error::NotInGroup(format!("det R = {det}")));
    }
    let o = orientation(&mat.to_rational());
    if !o.is_positive() {
        return Err(Error::NotInGroup(format!("det(CP + D) = {o}")));
    }
    Ok(())
}

fn valuation(x: &BigInt, p: &BigInt) -> u32 {
    let mut x = x.clone();
    let mut e = 0;
    while !x.is_zero() && x.is_multiple_of(p) {
        x /= p;
        e += 1;
    }
    e
}

/// Largest `s` with `s | content` and `s² | r` (`r > 0`).
fn square_part(content: &BigInt, r: &BigInt) -> BigInt {
    let mut t = content.gcd(r);
    let mut s = BigInt::one();
    let mut p = BigInt::from(2);
    while t > BigInt::one() {
        if &p * &p > t {
            p = t.clone();
        }
        if t.is_multiple_of(&p) {
            let er = valuation(r, &p);
            let ec = if content.is_zero() { er } else { valuation(content, &p) };
            s *= Pow::pow(&p, ec.min(er / 2));
            while t.is_multiple_of(&p) {
                t /= &p;
            }
        }
        p += 1;
    }
    s
}

impl ScaledOrthogonal {
    /// Validates `(R, r)` and removes square factors shared by `r` and the
    /// entries of `R`.
    pub fn new(form: &ExtendedForm, mat: Matrix, r: impl Into<BigInt>) -> Result<Self> {
        Ok(Self::new_raw(form, mat, r)?.canonical())
    }

    /// Validates `(R, r)` and keeps the given representation.
    pub fn new_raw(form: &ExtendedForm, mat: Matrix, r: impl Into<BigInt>) -> Result<Self> {
        let r = r.into();
        validate(form, &mat, &r)?;
        Ok(Self { form: form.clone(), mat, r })
    }

    pub fn form(&self) -> &ExtendedForm {
        &self.form
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn r(&self) -> &BigInt {
        &self.r
    }

    /// Divides out the largest `s` with `s | R` and `s² | r`.
    pub fn canonical(&self) -> Self {
        let s = square_part(&self.mat.content(), &self.r);
        if s.is_one() {
            return self.clone();
        }
        let mat = Matrix::from_vec(
            self.mat.rows(),
            self.mat.cols(),
            self.mat.entries().iter().map(|x| x / &s).collect(),
        )
        .expect("same shape");
        Self { form: self.form.clone(), mat, r: &self.r / (&s * &s) }
    }

    pub fn is_canonical(&self) -> bool {
        square_part(&self.mat.content(), &self.r).is_one()
    }

    /// gcd of the first column.
    pub fn first_column_gcd(&self) -> BigInt {
        gcd_all(&self.mat.col(0))
    }

    /// gcd of all entries.
    pub fn content(&self) -> BigInt {
        self.mat.content()
    }

    /// `R^m` with scale `r^m`, not canonicalized.
    pub fn pow(&self, m: u32) -> Self {
        let mut mat = Matrix::identity(self.form.dim());
        for _ in 0..m {
            mat = &mat * &self.mat;
        }
        Self { form: self.form.clone(), mat, r: Pow::pow(&self.r, m) }
    }

    /// `M₁·R·M₂`, which stays in the double coset.
    pub fn transform(&self, left: &GroupElement, right: &GroupElement) -> Self {
        let mat = &(left.matrix() * &self.mat) * right.matrix();
        Self { form: self.form.clone(), mat, r: self.r.clone() }
    }
}

/// `diag(d², d·I, 1)` with `r = d²`.
pub fn diagonal_fixture(form: &ExtendedForm, d: u64) -> ScaledOrthogonal {
    let d = BigInt::from(d);
    let k = form.dim();
    let mut diag = vec![d.clone(); k];
    diag[0] = &d * &d;
    diag[k - 1] = BigInt::one();
    ScaledOrthogonal::new_raw(form, Matrix::diagonal(&diag), &d * &d).expect("fixture is valid")
}

/// Which disjunct of the reduction hypothesis holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hypothesis {
    Coprime,
    MaximalBase,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hypothesis::Coprime => "gcd(r, det S) = 1",
            Hypothesis::MaximalBase => "base lattice is maximal even",
        })
    }
}

pub fn check_hypothesis(form: &ExtendedForm, r: &BigInt, limits: &Limits) -> Result<Hypothesis> {
    if r.gcd(form.base().discriminant()).is_one() {
        return Ok(Hypothesis::Coprime);
    }
    if is_maximal_even(form.base(), limits)? {
        return Ok(Hypothesis::MaximalBase);
    }
    Err(Error::HypothesisViolated(format!(
        "gcd(r, det S) = {} and the base lattice is not maximal even",
        r.gcd(form.base().discriminant())
    )))
}

#[derive(Clone, Debug)]
pub struct RightCosetReduction {
    /// Element of the discriminant kernel with `T = M·R`.
    pub m: GroupElement,
    pub t: Matrix,
    pub alpha: BigInt,
    pub delta: BigInt,
    pub hypothesis: Hypothesis,
}

fn internal(what: impl Into<String>) -> Error {
    Error::Internal(what.into())
}

/// Left reduction of the first column: returns `(M, M·R, α, δ)`.
fn reduce_first_column(form: &ExtendedForm, mat: &Matrix, r: &BigInt) -> Result<(GroupElement, Matrix, BigInt, BigInt)> {
    let k = form.dim();
    let g = mat.col(0);
    let alpha = gcd_all(&g);
    let h: Vec<BigInt> = g.iter().map(|x| x / &alpha).collect();
    let completion = complete_isotropic(form, &h).map_err(|e| internal(format!("first column not completable: {e}")))?;
    let m = completion.inverse();
    let t = m.matrix() * mat;
    if t[(0, 0)] != alpha || (1..k).any(|i| !t[(i, 0)].is_zero()) {
        return Err(internal("first column not reduced"));
    }
    let delta = t[(k - 1, k - 1)].clone();
    if (0..k - 1).any(|j| !t[(k - 1, j)].is_zero()) || &alpha * &delta != *r {
        return Err(internal("last row not of the form (0, …, 0, δ) with αδ = r"));
    }
    Ok((m, t, alpha, delta))
}

/// A matrix `T = M·R` in the right coset with first column `α·e₀` and last
/// row `δ·e_{n+3}ᵗ`, where `α` is the gcd of the first column of `R`.
pub fn reduce_right_coset(x: &ScaledOrthogonal) -> Result<RightCosetReduction> {
    reduce_right_coset_with(x, &Limits::default())
}

pub fn reduce_right_coset_with(x: &ScaledOrthogonal, limits: &Limits) -> Result<RightCosetReduction> {
    let hypothesis = check_hypothesis(&x.form, &x.r, limits)?;
    let (m, t, alpha, delta) = reduce_first_column(&x.form, &x.mat, &x.r)?;
    Ok(RightCosetReduction { m, t, alpha, delta, hypothesis })
}

/// One divisibility probe `R*·J·T_λ`: the gcd of its last column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Probe {
    pub lambda: Vec<BigInt>,
    pub gcd: BigInt,
}

#[derive(Clone, Debug)]
pub struct DoubleCosetReduction {
    pub left: GroupElement,
    /// `diag(α*, K*, δ*) = left·R·right`.
    pub diagonal: Matrix,
    pub right: GroupElement,
    pub alpha: BigInt,
    pub delta: BigInt,
    /// Probes of the final pass, all with gcd a multiple of `α*`.
    pub probes: Vec<Probe>,
    pub rounds: usize,
    pub hypothesis: Hypothesis,
}

fn probe_vectors(n: usize) -> Vec<Vec<BigInt>> {
    let unit = |i: usize| {
        let mut v = vec![BigInt::zero(); n + 2];
        v[i] = BigInt::one();
        v
    };
    let mut out: Vec<_> = (0..n + 2).map(unit).collect();
    let mut both = unit(0);
    both[n + 1] = BigInt::one();
    out.push(both);
    out
}

fn is_block_diagonal(m: &Matrix) -> bool {
    let k = m.rows();
    (1..k).all(|i| m[(0, i)].is_zero() && m[(i, 0)].is_zero())
        && (0..k - 1).all(|i| m[(k - 1, i)].is_zero() && m[(i, k - 1)].is_zero())
}

/// `R* = M₁·R·M₂ = diag(α*, K*, δ*)` with `α*` the gcd of all entries.
pub fn reduce_double_coset(x: &ScaledOrthogonal) -> Result<DoubleCosetReduction> {
    reduce_double_coset_with(x, &Limits::default())
}

pub fn reduce_double_coset_with(x: &ScaledOrthogonal, limits: &Limits) -> Result<DoubleCosetReduction> {
    let form = &x.form;
    let hypothesis = check_hypothesis(form, &x.r, limits)?;
    let k = form.dim();
    let j = gen_j(form);
    let mut left = GroupElement::identity(form);
    let mut right = GroupElement::identity(form);
    let mut cur = x.mat.clone();
    for round in 1..=10_000 {
        let (m, t, alpha, delta) = reduce_first_column(form, &cur, &x.r)?;
        left = &m * &left;
        cur = t;
        // u = S₁⁻¹·(first row)ᵗ is isotropic and integral under the hypothesis
        let row: Vec<BigRational> = cur.row(0).into_iter().map(BigRational::from_integer).collect();
        let u = form.s1_inverse().mul_vec(&row);
        if u.iter().any(|v| !v.is_integer()) {
            return Err(internal("S₁⁻¹·(first row) is not integral"));
        }
        let u: Vec<BigInt> = u.iter().map(|v| v.to_integer()).collect();
        let beta = gcd_all(&u);
        if beta != alpha {
            // move the first row to β·e_{n+3}ᵗ, then J turns it into −β·e₀ᵗ
            let h: Vec<BigInt> = u.iter().map(|v| v / &beta).collect();
            let n = complete_isotropic(form, &h).map_err(|e| internal(format!("first row not completable: {e}")))?;
            let step = &n * &j;
            cur = &cur * step.matrix();
            right = &right * &step;
            continue;
        }
        let mu: Vec<BigInt> = u[1..k - 1].iter().map(|v| v / &alpha).collect();
        let clear = gen_t(form, &mu)?;
        cur = &cur * clear.matrix();
        right = &right * &clear;
        if !is_block_diagonal(&cur) {
            return Err(internal("first row and column not cleared"));
        }
        let mut probes = Vec::new();
        let mut smaller = None;
        for lambda in probe_vectors(form.n()) {
            let t = gen_t(form, &lambda)?;
            let jt = &j * &t;
            let probe = &cur * jt.matrix();
            let gcd = gcd_all(&probe.col(k - 1));
            if !gcd.is_multiple_of(&alpha) {
                smaller = Some(&jt * &j);
                break;
            }
            probes.push(Probe { lambda, gcd });
        }
        if let Some(step) = smaller {
            cur = &cur * step.matrix();
            right = &right * &step;
            continue;
        }
        if alpha != x.mat.content() {
            return Err(internal(format!("α* = {alpha} differs from the content {}", x.mat.content())));
        }
        if cur.entries().iter().any(|v| !v.is_multiple_of(&alpha)) {
            return Err(internal("R*/α* is not integral"));
        }
        if &(left.matrix() * &x.mat) * right.matrix() != cur {
            return Err(internal("transcript does not reproduce R*"));
        }
        return Ok(DoubleCosetReduction { left, diagonal: cur, right, alpha, delta, probes, rounds: round, hypothesis });
    }
    Err(internal("double coset reduction did not terminate"))
}

/// `Ĥ = diag(I₂, H, I₂)` for an embedding `L ⊆ L*`, carrying `S₁` into `S*₁`.
#[derive(Clone, Debug)]
pub struct HatEmbedding {
    inner: LatticeEmbedding,
    sub_form: ExtendedForm,
    sup_form: ExtendedForm,
    hhat: Matrix,
    hhat_inv: QMatrix,
}

pub fn hat_embed(e: &LatticeEmbedding) -> Result<HatEmbedding> {
    let sub_form = extend(e.sub())?;
    let sup_form = extend(e.sup())?;
    let k = sub_form.dim();
    if sup_form.dim() != k {
        return Err(Error::DimensionMismatch { expected: format!("rank {}", e.sub().rank()), got: format!("rank {}", e.sup().rank()) });
    }
    let mut hhat = Matrix::identity(k);
    hhat.set_block(2, 2, e.h());
    if &(&hhat.transpose() * sup_form.s1()) * &hhat != *sub_form.s1() {
        return Err(Error::FormMismatch("Ĥᵗ S*₁ Ĥ ≠ S₁".into()));
    }
    let hhat_inv = crate::linalg::inverse_rational(&hhat)?;
    Ok(HatEmbedding { inner: e.clone(), sub_form, sup_form, hhat, hhat_inv })
}

impl HatEmbedding {
    pub fn embedding(&self) -> &LatticeEmbedding {
        &self.inner
    }

    pub fn sub_form(&self) -> &ExtendedForm {
        &self.sub_form
    }

    pub fn sup_form(&self) -> &ExtendedForm {
        &self.sup_form
    }

    pub fn hhat(&self) -> &Matrix {
        &self.hhat
    }

    /// `Ĥ·R·Ĥ⁻¹`.
    pub fn conjugate(&self, r: &QMatrix) -> Result<QMatrix> {
        let k = self.sub_form.dim();
        if r.rows() != k || r.cols() != k {
            return Err(Error::DimensionMismatch { expected: format!("{k}x{k}"), got: format!("{}x{}", r.rows(), r.cols()) });
        }
        Ok(&(&self.hhat.to_rational() * r) * &self.hhat_inv)
    }
}

/// Whether `R` lies in `Ĥ⁻¹·Γ_{S*}·Ĥ`.
pub fn max_extension_member(he: &HatEmbedding, r: &QMatrix) -> Result<bool> {
    let c = he.conjugate(r)?;
    if !c.is_integral() {
        return Ok(false);
    }
    Ok(classify(&he.sup_form, &c)?.class >= Class::GammaS)
}

#[derive(Clone, Debug)]
pub enum NormalizerCertificate {
    /// Canonical scale 1: the element is integral and lies in `Γ_S`.
    CertifiedIntegral { element: GroupElement },
    /// Pairwise distinct right coset invariants `α_m² / r^m` of the powers
    /// of `base`, so these powers lie in pairwise distinct right cosets of
    /// the discriminant kernel.
    ViolationWitness { base: ScaledOrthogonal, alphas: Vec<BigInt>, invariants: Vec<BigRational> },
}

fn power_invariants(x: &ScaledOrthogonal, samples: u32, limits: &Limits) -> Result<(Vec<BigInt>, Vec<BigRational>)> {
    let mut alphas = Vec::new();
    let mut inv = Vec::new();
    for m in 1..=samples {
        let p = x.pow(m);
        let red = reduce_right_coset_with(&p, limits)?;
        inv.push(BigRational::new(&red.alpha * &red.alpha, p.r.clone()));
        alphas.push(red.alpha);
    }
    Ok((alphas, inv))
}

fn pairwise_distinct(v: &[BigRational]) -> bool {
    let mut s = v.to_vec();
    s.sort();
    s.windows(2).all(|w| w[0] != w[1])
}

/// Over a maximal even base: an element with canonical scale 1 is certified
/// integral, otherwise the powers of the element (or of its double coset
/// representative) give infinitely many right cosets.
pub fn normalizer_certificate(x: &ScaledOrthogonal, samples: u32) -> Result<NormalizerCertificate> {
    let limits = Limits::default();
    if !is_maximal_even(x.form.base(), &limits)? {
        return Err(Error::HypothesisViolated("base lattice is not maximal even".into()));
    }
    let x = x.canonical();
    if x.r.is_one() {
        let element = GroupElement::new(&x.form, x.mat.clone())
            .map_err(|e| internal(format!("scale-1 element outside Γ_S: {e}")))?;
        return Ok(NormalizerCertificate::CertifiedIntegral { element });
    }
    let samples = samples.max(2);
    let (alphas, invariants) = power_invariants(&x, samples, &limits)?;
    if pairwise_distinct(&invariants) {
        return Ok(NormalizerCertificate::ViolationWitness { base: x, alphas, invariants });
    }
    let red = reduce_double_coset_with(&x, &limits)?;
    let rep = ScaledOrthogonal { form: x.form.clone(), mat: red.diagonal, r: x.r.clone() };
    let (alphas, invariants) = power_invariants(&rep, samples, &limits)?;
    if pairwise_distinct(&invariants) {
        return Ok(NormalizerCertificate::ViolationWitness { base: rep, alphas, invariants });
    }
    Err(internal("no violation witness found for a canonical element with r > 1"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::embed;
    use crate::orthogonal::{gen_t_star, random_word, t_rational};
    use crate::roots::build;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn form(name: &str) -> ExtendedForm {
        extend(&build(&name.parse().unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn square_part_examples() {
        let b = |x: i64| BigInt::from(x);
        assert_eq!(square_part(&b(2), &b(4)), b(2));
        assert_eq!(square_part(&b(1), &b(4)), b(1));
        assert_eq!(square_part(&b(4), &b(8)), b(2));
        assert_eq!(square_part(&b(6), &b(36)), b(6));
        assert_eq!(square_part(&b(3), &b(3)), b(1));
        assert_eq!(square_part(&b(12), &b(16)), b(4));
        assert_eq!(square_part(&b(9), &b(81)), b(9));
        assert_eq!(square_part(&b(0), &b(9)), b(3));
    }

    #[test]
    fn make_scaled_examples() {
        let f = form("A2");
        let id = ScaledOrthogonal::new(&f, Matrix::identity(6), 1).unwrap();
        assert_eq!(id.r(), &BigInt::one());
        let fix = diagonal_fixture(&f, 2);
        assert!(fix.is_canonical());
        assert!(matches!(ScaledOrthogonal::new(&f, Matrix::identity(6), 2), Err(Error::FormMismatch(_))));
        let twice = ScaledOrthogonal::new_raw(&f, Matrix::identity(6).scale(&BigInt::from(2)), 4).unwrap();
        assert!(!twice.is_canonical());
        let c = twice.canonical();
        assert_eq!(c.r(), &BigInt::one());
        assert!(c.matrix().is_identity());
        // orientation reversed
        let mut flip = Matrix::identity(6);
        flip[(0, 0)] = -BigInt::one();
        flip[(5, 5)] = -BigInt::one();
        assert!(matches!(ScaledOrthogonal::new(&f, flip, 1), Err(Error::NotInGroup(_))));
    }

    #[test]
    fn odd_rank_skips_determinant_power() {
        let f = form("A1");
        let fix = diagonal_fixture(&f, 3);
        assert_eq!(fix.r(), &BigInt::from(9));
        assert_eq!(fix.matrix().det().unwrap(), BigInt::from(243));
    }

    #[test]
    fn right_coset_examples() {
        let f = form("A2");
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let w = random_word(&f, &mut rng, 6, 2);
        let x = ScaledOrthogonal::new(&f, w.matrix().clone(), 1).unwrap();
        let red = reduce_right_coset(&x).unwrap();
        assert_eq!((red.alpha.clone(), red.delta.clone()), (BigInt::one(), BigInt::one()));
        let red = reduce_right_coset(&diagonal_fixture(&f, 2)).unwrap();
        assert_eq!((red.alpha, red.delta), (BigInt::from(4), BigInt::one()));
        assert_eq!(red.m.classify().class, Class::DiscriminantKernel);
    }

    #[test]
    fn double_coset_examples() {
        let f = form("A2");
        let red = reduce_double_coset(&diagonal_fixture(&f, 2)).unwrap();
        assert_eq!((red.alpha.clone(), red.delta.clone()), (BigInt::one(), BigInt::from(4)));
        assert_eq!(red.probes.len(), 5);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let w = random_word(&f, &mut rng, 6, 2);
        let x = ScaledOrthogonal::new_raw(&f, w.matrix().scale(&BigInt::from(2)), 4).unwrap();
        let red = reduce_double_coset(&x).unwrap();
        assert_eq!((red.alpha, red.delta), (BigInt::from(2), BigInt::from(2)));
        assert!(red.diagonal.entries().iter().all(|v| v.is_even()));
    }

    #[test]
    fn random_scaled_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for name in ["A2", "D4"] {
            let f = form(name);
            for d in [1, 2, 3] {
                for _ in 0..4 {
                    let w1 = random_word(&f, &mut rng, 5, 1);
                    let w2 = random_word(&f, &mut rng, 5, 1);
                    let x = diagonal_fixture(&f, d).transform(&w1, &w2);
                    let red = reduce_right_coset(&x).unwrap();
                    assert_eq!(red.alpha, x.first_column_gcd());
                    assert_eq!(&red.alpha * &red.delta, *x.r());
                    assert_eq!(red.t, red.m.matrix() * x.matrix());
                    let dbl = reduce_double_coset(&x).unwrap();
                    assert_eq!(dbl.alpha, x.content());
                    assert_eq!(&dbl.alpha * &dbl.delta, *x.r());
                    assert_eq!(dbl.left.classify().class, Class::DiscriminantKernel);
                    assert_eq!(dbl.right.classify().class, Class::DiscriminantKernel);
                }
            }
        }
    }

    #[test]
    fn hypothesis_enforced() {
        // 4A1 is not maximal and r = 4 shares a factor with det S = 16
        let f = form("4A1");
        let x = diagonal_fixture(&f, 2);
        assert!(matches!(reduce_right_coset(&x), Err(Error::HypothesisViolated(_))));
        assert!(matches!(reduce_double_coset(&x), Err(Error::HypothesisViolated(_))));
        // r = 9 is coprime to 16
        assert!(reduce_right_coset(&diagonal_fixture(&f, 3)).is_ok());
        assert!(matches!(normalizer_certificate(&diagonal_fixture(&f, 3), 3), Err(Error::HypothesisViolated(_))));
    }

    fn four_a1_in_d4() -> HatEmbedding {
        let d4 = build(&"D4".parse().unwrap()).unwrap();
        let b = Matrix::from_rows(&[vec![1, 1, 0, 0], vec![1, -1, 1, 0], vec![0, 0, -1, 1], vec![0, 0, 0, -1]]).unwrap();
        let roots = Matrix::from_rows(&[vec![1, 1, 0, 0], vec![1, -1, 0, 0], vec![0, 0, 1, 1], vec![0, 0, 1, -1]]).unwrap().transpose();
        let h = (&crate::linalg::inverse_rational(&b).unwrap() * &roots.to_rational()).to_integer().unwrap();
        let e = embed(Matrix::identity(4).scale(&BigInt::from(2)), &d4, h).unwrap();
        hat_embed(&e).unwrap()
    }

    #[test]
    fn hat_embedding_examples() {
        let he = four_a1_in_d4();
        assert_eq!(he.hhat().det().unwrap().abs(), BigInt::from(2));
        let a2 = build(&"A2".parse().unwrap()).unwrap();
        let id = embed(a2.gram().clone(), &a2, Matrix::identity(2)).unwrap();
        assert!(hat_embed(&id).unwrap().hhat().is_identity());
    }

    #[test]
    fn max_extension_examples() {
        let he = four_a1_in_d4();
        let f = he.sub_form().clone();
        assert!(max_extension_member(&he, &QMatrix::identity(8)).unwrap());
        let half = BigRational::new(1.into(), 2.into());
        let zero = BigRational::zero();
        let glue = vec![zero.clone(), half.clone(), half.clone(), half.clone(), half.clone(), zero.clone()];
        assert!(max_extension_member(&he, &t_rational(&f, &glue).unwrap()).unwrap());
        let non_glue = vec![zero.clone(), half, zero.clone(), zero.clone(), zero.clone(), zero];
        assert!(!max_extension_member(&he, &t_rational(&f, &non_glue).unwrap()).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let w = random_word(&f, &mut rng, 6, 2);
            assert!(max_extension_member(&he, &w.matrix().to_rational()).unwrap());
        }
        let l: Vec<BigInt> = [1, 0, -1, 2, 0, 1].iter().map(|&v| BigInt::from(v)).collect();
        assert!(max_extension_member(&he, &gen_t_star(&f, &l).unwrap().matrix().to_rational()).unwrap());
        assert!(max_extension_member(&he, &QMatrix::identity(6)).is_err());
    }

    #[test]
    fn normalizer_examples() {
        let f = form("A2");
        let j = gen_j(&f);
        let x = ScaledOrthogonal::new(&f, j.matrix().clone(), 1).unwrap();
        assert!(matches!(normalizer_certificate(&x, 3).unwrap(), NormalizerCertificate::CertifiedIntegral { .. }));
        match normalizer_certificate(&diagonal_fixture(&f, 2), 3).unwrap() {
            NormalizerCertificate::ViolationWitness { alphas, .. } => {
                assert_eq!(alphas, vec![BigInt::from(4), BigInt::from(16), BigInt::from(64)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
