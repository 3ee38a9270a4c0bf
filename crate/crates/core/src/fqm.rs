//! Finite quadratic modules `(Λ♯/Λ, q̄)`: element arithmetic, anisotropy,
//! isotropic subgroups and the even overlattices they glue.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{embed, span_generators, EvenLattice, LatticeEmbedding};
use crate::linalg::{inverse_rational, smith_normal_form, Matrix, QMatrix};

/// Enumeration guardrails.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest group order scanned element by element.
    pub element_cap: u64,
    /// Largest group order for which isotropic subgroups are enumerated.
    pub subgroup_cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self { element_cap: 1_000_000, subgroup_cap: 4096 }
    }
}

/// An element of `⊕ ℤ/dᵢ`, one coordinate per divisor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(pub Vec<BigInt>);

impl Element {
    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The discriminant module of an even lattice, presented by Smith-form
/// generators `x_i` (columns of `S⁻¹U⁻¹`, reduced mod `Λ`) of orders
/// `d_1 | d_2 | …`, each `> 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuadraticModule {
    divisors: Vec<BigInt>,
    lifts: Vec<Vec<BigRational>>,
    // x_iᵗ S x_j, unreduced
    gen_gram: Vec<Vec<BigRational>>,
    // rows of U for the kept divisors: dual vector x ↦ U·S·x mod d
    coord_map: Matrix,
    gram: Matrix,
}

fn frac(v: &BigRational) -> BigRational {
    v - v.floor()
}

impl FiniteQuadraticModule {
    pub(crate) fn of_lattice(l: &EvenLattice) -> Self {
        let s = l.gram();
        let n = s.rows();
        let snf = smith_normal_form(s);
        let u_inv = inverse_rational(&snf.u).expect("U is unimodular");
        let s_inv = inverse_rational(s).expect("gram is nonsingular");
        let all_lifts = &s_inv * &u_inv;
        let mut divisors = Vec::new();
        let mut lifts = Vec::new();
        let mut kept = Vec::new();
        for (i, d) in snf.diagonal().into_iter().enumerate() {
            if d.is_one() {
                continue;
            }
            lifts.push(all_lifts.col(i).iter().map(frac).collect::<Vec<_>>());
            divisors.push(d);
            kept.push(i);
        }
        let mut coord_map = Matrix::zeros(kept.len(), n);
        for (r, &i) in kept.iter().enumerate() {
            for j in 0..n {
                coord_map[(r, j)] = snf.u[(i, j)].clone();
            }
        }
        let gen_gram = lifts.iter().map(|x| lifts.iter().map(|y| l.inner(x, y)).collect()).collect();
        Self { divisors, lifts, gen_gram, coord_map, gram: s.clone() }
    }

    pub fn divisors(&self) -> &[BigInt] {
        &self.divisors
    }

    pub fn generator_lifts(&self) -> &[Vec<BigRational>] {
        &self.lifts
    }

    /// Gram matrix of the lattice this module was computed from.
    pub fn lattice_gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn order(&self) -> BigInt {
        self.divisors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.divisors.is_empty()
    }

    pub fn zero(&self) -> Element {
        Element(vec![BigInt::zero(); self.divisors.len()])
    }

    /// The `i`-th generator `e_i`.
    pub fn generator(&self, i: usize) -> Element {
        let mut z = self.zero();
        z.0[i] = BigInt::one();
        z
    }

    fn check(&self, x: &Element) -> Result<()> {
        let ok = x.0.len() == self.divisors.len()
            && x.0.iter().zip(&self.divisors).all(|(c, d)| !c.is_negative() && c < d);
        if ok { Ok(()) } else { Err(Error::ElementOutOfRange(x.to_string())) }
    }

    fn reduce(&self, coords: Vec<BigInt>) -> Element {
        Element(coords.into_iter().zip(&self.divisors).map(|(c, d)| c.mod_floor(d)).collect())
    }

    pub fn add(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.reduce(x.0.iter().zip(&y.0).map(|(a, b)| a + b).collect()))
    }

    pub fn neg(&self, x: &Element) -> Result<Element> {
        self.check(x)?;
        Ok(self.reduce(x.0.iter().map(|a| -a).collect()))
    }

    pub fn scale(&self, k: &BigInt, x: &Element) -> Result<Element> {
        self.check(x)?;
        Ok(self.reduce(x.0.iter().map(|a| a * k).collect()))
    }

    /// Additive order of `x`.
    pub fn order_of(&self, x: &Element) -> Result<BigInt> {
        self.check(x)?;
        Ok(x.0.iter().zip(&self.divisors).fold(BigInt::one(), |acc, (c, d)| {
            let o = d / c.gcd(d);
            acc.lcm(&o)
        }))
    }

    /// A representative in `Λ♯` (lattice coordinates).
    pub fn lift(&self, x: &Element) -> Result<Vec<BigRational>> {
        self.check(x)?;
        let n = self.gram.rows();
        let mut v = vec![BigRational::zero(); n];
        for (c, l) in x.0.iter().zip(&self.lifts) {
            if c.is_zero() {
                continue;
            }
            let c = BigRational::from_integer(c.clone());
            for (vi, li) in v.iter_mut().zip(l) {
                *vi += &c * li;
            }
        }
        Ok(v)
    }

    /// Class of a dual vector `x ∈ Λ♯` (lattice coordinates).
    pub fn element_of(&self, x: &[BigRational]) -> Result<Element> {
        let n = self.gram.rows();
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: format!("{n} coordinates"), got: format!("{}", x.len()) });
        }
        let y = self.gram.to_rational().mul_vec(x);
        if !y.iter().all(BigRational::is_integer) {
            return Err(Error::NotInDual);
        }
        let y: Vec<BigInt> = y.iter().map(BigRational::to_integer).collect();
        Ok(self.reduce(self.coord_map.mul_vec(&y)))
    }

    /// `q̄(x) ∈ [0, 1)`.
    pub fn q_value(&self, x: &Element) -> Result<BigRational> {
        self.check(x)?;
        let k = self.divisors.len();
        let mut v = BigRational::zero();
        for i in 0..k {
            if x.0[i].is_zero() {
                continue;
            }
            let ci = BigRational::from_integer(x.0[i].clone());
            v += &ci * &ci * &self.gen_gram[i][i] / BigRational::from_integer(2.into());
            for j in i + 1..k {
                if x.0[j].is_zero() {
                    continue;
                }
                v += &ci * BigRational::from_integer(x.0[j].clone()) * &self.gen_gram[i][j];
            }
        }
        Ok(frac(&v))
    }

    /// `b(x, y) = q̄(x+y) − q̄(x) − q̄(y) ∈ [0, 1)`.
    pub fn bilinear(&self, x: &Element, y: &Element) -> Result<BigRational> {
        self.check(x)?;
        self.check(y)?;
        let k = self.divisors.len();
        let mut v = BigRational::zero();
        for i in 0..k {
            for j in 0..k {
                if x.0[i].is_zero() || y.0[j].is_zero() {
                    continue;
                }
                v += BigRational::from_integer(&x.0[i] * &y.0[j]) * &self.gen_gram[i][j];
            }
        }
        Ok(frac(&v))
    }

    fn table(&self, cap: u64) -> Result<Table> {
        let order = self.order();
        if order > BigInt::from(cap) {
            return Err(Error::CapExceeded { order, cap });
        }
        let radices: Vec<u64> = self.divisors.iter().map(|d| d.to_u64().expect("bounded by cap")).collect();
        let k = radices.len();
        let two = BigRational::from_integer(2.into());
        let qs: Vec<BigRational> = (0..k).map(|i| frac(&(&self.gen_gram[i][i] / &two))).collect();
        let bs: Vec<Vec<BigRational>> =
            (0..k).map(|i| (0..k).map(|j| frac(&self.gen_gram[i][j])).collect()).collect();
        let modulus = qs
            .iter()
            .chain(bs.iter().flatten())
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let to_res = |v: &BigRational| -> u64 {
            (v * BigRational::from_integer(modulus.clone())).to_integer().to_u64().expect("residue below modulus")
        };
        let modulus_u = modulus.to_u64().expect("modulus bounded by 2·exponent");
        Ok(Table {
            radices,
            modulus: modulus_u,
            q: qs.iter().map(to_res).collect(),
            b: bs.iter().map(|row| row.iter().map(to_res).collect()).collect(),
        })
    }

    fn index_to_element(&self, t: &Table, idx: u64) -> Element {
        Element(t.decode(idx).into_iter().map(BigInt::from).collect())
    }

    /// All elements in lexicographic order of their coordinate tuples.
    pub fn elements(&self, limits: &Limits) -> Result<Vec<Element>> {
        let t = self.table(limits.element_cap)?;
        Ok((0..t.order()).map(|i| self.index_to_element(&t, i)).collect())
    }

    /// True iff `q̄(x) = 0` forces `x = 0`.
    pub fn is_anisotropic(&self, limits: &Limits) -> Result<bool> {
        let t = self.table(limits.element_cap)?;
        let mut digits = vec![0u64; t.radices.len()];
        for _ in 1..t.order() {
            t.increment(&mut digits);
            if t.q_digits(&digits) == 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All nonzero `x` with `q̄(x) = 0`, in canonical order.
    pub fn isotropic_elements(&self, limits: &Limits) -> Result<Vec<Element>> {
        let t = self.table(limits.element_cap)?;
        Ok(t.isotropic_indices().into_iter().map(|i| self.index_to_element(&t, i)).collect())
    }

    /// Every totally isotropic subgroup that is maximal under inclusion,
    /// sorted by canonical generator list.
    pub fn maximal_isotropic_subgroups(&self, limits: &Limits) -> Result<Vec<GlueGroup>> {
        let t = self.table(limits.subgroup_cap)?;
        let iso = t.isotropic_indices();
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        let mut stack = vec![vec![0u64]];
        seen.insert(vec![0]);
        let mut maximal = Vec::new();
        while let Some(h) = stack.pop() {
            let gens = t.canonical_generators(&h);
            let mut extended = false;
            for &x in &iso {
                if h.binary_search(&x).is_ok() {
                    continue;
                }
                if gens.iter().all(|&g| t.b_index(x, g) == 0) {
                    extended = true;
                    let s = t.span_with(&h, x);
                    if seen.insert(s.clone()) {
                        stack.push(s);
                    }
                }
            }
            if !extended {
                maximal.push((gens, h));
            }
        }
        maximal.sort();
        Ok(maximal
            .into_iter()
            .map(|(gens, elems)| GlueGroup {
                parent: self.clone(),
                generators: gens.into_iter().map(|i| self.index_to_element(&t, i)).collect(),
                order: BigInt::from(elems.len()),
                elements: elems.into_iter().map(|i| self.index_to_element(&t, i)).collect(),
            })
            .collect())
    }
}

/// Residue tables for fast scans: values are scaled by a common modulus.
struct Table {
    radices: Vec<u64>,
    modulus: u64,
    q: Vec<u64>,
    b: Vec<Vec<u64>>,
}

impl Table {
    fn order(&self) -> u64 {
        self.radices.iter().product()
    }

    fn decode(&self, mut idx: u64) -> Vec<u64> {
        let mut out = vec![0; self.radices.len()];
        for (o, &r) in out.iter_mut().zip(&self.radices).rev() {
            *o = idx % r;
            idx /= r;
        }
        out
    }

    fn encode(&self, digits: &[u64]) -> u64 {
        digits.iter().zip(&self.radices).fold(0, |acc, (&d, &r)| acc * r + d)
    }

    fn increment(&self, digits: &mut [u64]) {
        for (d, &r) in digits.iter_mut().zip(&self.radices).rev() {
            *d += 1;
            if *d < r {
                return;
            }
            *d = 0;
        }
    }

    fn q_digits(&self, c: &[u64]) -> u64 {
        let m = self.modulus as u128;
        let mut acc: u128 = 0;
        for i in 0..c.len() {
            if c[i] == 0 {
                continue;
            }
            let ci = c[i] as u128;
            acc = (acc + ci * ci % m * self.q[i] as u128) % m;
            for j in i + 1..c.len() {
                if c[j] != 0 {
                    acc = (acc + ci * c[j] as u128 % m * self.b[i][j] as u128) % m;
                }
            }
        }
        acc as u64
    }

    fn b_digits(&self, x: &[u64], y: &[u64]) -> u64 {
        let m = self.modulus as u128;
        let mut acc: u128 = 0;
        for i in 0..x.len() {
            if x[i] == 0 {
                continue;
            }
            for j in 0..y.len() {
                if y[j] != 0 {
                    acc = (acc + (x[i] as u128) * (y[j] as u128) % m * self.b[i][j] as u128) % m;
                }
            }
        }
        acc as u64
    }

    fn b_index(&self, x: u64, y: u64) -> u64 {
        self.b_digits(&self.decode(x), &self.decode(y))
    }

    fn add_index(&self, x: u64, y: u64) -> u64 {
        let (a, b) = (self.decode(x), self.decode(y));
        let s: Vec<u64> = a.iter().zip(&b).zip(&self.radices).map(|((p, q), r)| (p + q) % r).collect();
        self.encode(&s)
    }

    fn isotropic_indices(&self) -> Vec<u64> {
        let mut digits = vec![0u64; self.radices.len()];
        let mut out = Vec::new();
        for idx in 1..self.order() {
            self.increment(&mut digits);
            if self.q_digits(&digits) == 0 {
                out.push(idx);
            }
        }
        out
    }

    /// Sorted element set of `⟨h, x⟩` for a subgroup `h` (sorted).
    fn span_with(&self, h: &[u64], x: u64) -> Vec<u64> {
        let mut out = h.to_vec();
        let mut mult = x;
        while h.binary_search(&mult).is_err() {
            out.extend(h.iter().map(|&e| self.add_index(e, mult)));
            mult = self.add_index(mult, x);
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Greedy generating set: scan elements in order, keep those outside
    /// the span of the ones kept so far.
    fn canonical_generators(&self, h: &[u64]) -> Vec<u64> {
        let mut span = vec![0u64];
        let mut gens = Vec::new();
        for &e in h {
            if span.binary_search(&e).is_err() {
                gens.push(e);
                span = self.span_with(&span, e);
            }
        }
        gens
    }
}

/// A totally isotropic subgroup of a discriminant module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlueGroup {
    parent: FiniteQuadraticModule,
    generators: Vec<Element>,
    elements: Vec<Element>,
    order: BigInt,
}

impl GlueGroup {
    /// Closure of `generators`; fails unless the result is totally isotropic.
    pub fn new(parent: &FiniteQuadraticModule, generators: Vec<Element>, limits: &Limits) -> Result<Self> {
        for g in &generators {
            let q = parent.q_value(g)?;
            if !q.is_zero() {
                return Err(Error::NotIsotropic(format!("q̄{g} = {q}")));
            }
        }
        for (i, g) in generators.iter().enumerate() {
            for h in &generators[i + 1..] {
                let b = parent.bilinear(g, h)?;
                if !b.is_zero() {
                    return Err(Error::NotIsotropic(format!("b({g}, {h}) = {b}")));
                }
            }
        }
        let mut elements = vec![parent.zero()];
        for g in &generators {
            if elements.contains(g) {
                continue;
            }
            let base = elements.clone();
            let mut mult = g.clone();
            while !base.contains(&mult) {
                for e in &base {
                    elements.push(parent.add(e, &mult)?);
                }
                if elements.len() as u64 > limits.element_cap {
                    return Err(Error::CapExceeded { order: BigInt::from(elements.len()), cap: limits.element_cap });
                }
                mult = parent.add(&mult, g)?;
            }
        }
        elements.sort();
        elements.dedup();
        Ok(Self { parent: parent.clone(), order: BigInt::from(elements.len()), generators, elements })
    }

    pub fn trivial(parent: &FiniteQuadraticModule) -> Self {
        Self { parent: parent.clone(), generators: Vec::new(), elements: vec![parent.zero()], order: BigInt::one() }
    }

    pub fn parent(&self) -> &FiniteQuadraticModule {
        &self.parent
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn order(&self) -> &BigInt {
        &self.order
    }
}

/// `L` glued with lifts of the generators of `G`; returns the overlattice
/// and the embedding of `L` into it.
pub fn overlattice_from_glue(l: &EvenLattice, g: &GlueGroup) -> Result<(EvenLattice, LatticeEmbedding)> {
    if g.parent().lattice_gram() != l.gram() {
        return Err(Error::FormMismatch("glue group belongs to a different lattice".into()));
    }
    for (i, x) in g.generators().iter().enumerate() {
        if !g.parent().q_value(x)?.is_zero() {
            return Err(Error::NotIsotropic(format!("q̄{x} ≠ 0")));
        }
        for y in &g.generators()[i + 1..] {
            if !g.parent().bilinear(x, y)?.is_zero() {
                return Err(Error::NotIsotropic(format!("b({x}, {y}) ≠ 0")));
            }
        }
    }
    let n = l.rank();
    let k = g.generators().len();
    let mut gens = QMatrix::zeros(n, n + k);
    gens.set_block(0, 0, &QMatrix::identity(n));
    for (c, x) in g.generators().iter().enumerate() {
        for (r, v) in g.parent().lift(x)?.into_iter().enumerate() {
            gens[(r, n + c)] = v;
        }
    }
    let (basis, gram) = span_generators(&l.gram().to_rational(), &gens)?;
    let sup = EvenLattice::from_rational_gram(&gram)?;
    let h = basis
        .inverse()?
        .to_integer()
        .ok_or_else(|| Error::Internal("L is not contained in its glued overlattice".into()))?;
    let emb = embed(l.gram().clone(), &sup, h)?;
    let expected = l.discriminant() / (g.order() * g.order());
    if sup.discriminant() != &expected {
        return Err(Error::Internal(format!("disc {} ≠ disc(L)/|G|² = {expected}", sup.discriminant())));
    }
    Ok((sup, emb))
}

/// Brute-force maximality test: the discriminant module is anisotropic.
pub fn is_maximal_even(l: &EvenLattice, limits: &Limits) -> Result<bool> {
    l.discriminant_group().is_anisotropic(limits)
}
