//! Truncated power series in a central variable `t` with coefficients in a
//! free associative algebra over Q, and the commutator expansions in the
//! congruence filtration `Gl_d(O/λ^n)_N`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::inv_mod;
use crate::cyclotomic::CycloElt;
use crate::error::{Error, Result};
use crate::fp::{span_rank, FMat};
use crate::hermitian::{e_ij_n, lift_su_to, su_dimension, HermitianForm};
use crate::matrix::MatLocal;

/// A word over the alphabet, as letter indices.
pub type Word = Vec<usize>;

/// `Σ c_{k,w} t^k w`, truncated at `t^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeSeries {
    alphabet: Vec<String>,
    order: usize,
    terms: BTreeMap<(usize, Word), BigRational>,
}

impl FreeSeries {
    pub fn zero(alphabet: &[String], order: usize) -> Self {
        FreeSeries {
            alphabet: alphabet.to_vec(),
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alphabet: &[String], order: usize) -> Self {
        Self::monomial(alphabet, order, 0, Vec::new(), BigRational::one())
    }

    /// `c · t^degree · word`.
    pub fn monomial(alphabet: &[String], order: usize, degree: usize, word: Word, c: BigRational) -> Self {
        let mut s = Self::zero(alphabet, order);
        s.add_term(degree, word, c);
        s
    }

    /// `t^degree · letter`, with the letter given by name.
    pub fn letter(alphabet: &[String], order: usize, degree: usize, name: &str) -> Result<Self> {
        let idx = alphabet
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| Error::arg(format!("letter {name} not in alphabet")))?;
        Ok(Self::monomial(alphabet, order, degree, vec![idx], BigRational::one()))
    }

    fn add_term(&mut self, degree: usize, word: Word, c: BigRational) {
        if degree >= self.order || c.is_zero() {
            return;
        }
        let key = (degree, word);
        let entry = self.terms.entry(key.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms in canonical (degree, word) order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Word, &BigRational)> {
        self.terms.iter().map(|((k, w), c)| (*k, w, c))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::arg("series over different alphabets"));
        }
        if self.order != other.order {
            return Err(Error::arg(format!(
                "truncation orders {} and {} differ",
                self.order, other.order
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for ((k, w), c) in &other.terms {
            out.add_term(*k, w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(&self.alphabet, self.order);
        for ((k, w), v) in &self.terms {
            out.add_term(*k, w.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.alphabet, self.order);
        for ((k1, w1), c1) in &self.terms {
            for ((k2, w2), c2) in &other.terms {
                if k1 + k2 >= self.order {
                    continue;
                }
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(k1 + k2, w, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Ring commutator `pq - qp`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn word_string(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|&i| self.alphabet[i].as_str()).collect::<Vec<_>>().join("*")
    }

    /// The `t^k` coefficient with letters replaced by matrices over `F_p`.
    pub fn evaluate(&self, degree: usize, assignment: &[FMat]) -> Result<FMat> {
        if assignment.len() != self.alphabet.len() {
            return Err(Error::arg("one matrix per letter is required"));
        }
        let p = assignment
            .first()
            .map(|m| m.p())
            .ok_or_else(|| Error::arg("empty alphabet"))?;
        let d = assignment[0].rows();
        let mut acc = FMat::zeros(p, d, d);
        for ((k, w), c) in &self.terms {
            if *k != degree {
                continue;
            }
            let c_mod = rational_mod(c, p)?;
            let prod = w
                .iter()
                .fold(FMat::identity(p, d), |m, &i| m.mul(&assignment[i]));
            acc = acc.add(&prod.scale(c_mod));
        }
        Ok(acc)
    }
}

fn rational_mod(c: &BigRational, p: u64) -> Result<i64> {
    let pm = BigInt::from(p);
    let num = (c.numer() % &pm + &pm) % &pm;
    let den = (c.denom() % &pm + &pm) % &pm;
    let den: i128 = (&den).try_into().expect("reduced mod p");
    let inv = inv_mod(den, p as i128)
        .ok_or_else(|| Error::Domain(format!("denominator of {c} vanishes mod {p}")))?;
    let num: i128 = (&num).try_into().expect("reduced mod p");
    Ok((num * inv % p as i128) as i64)
}

impl fmt::Display for FreeSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, ((k, w), c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else if idx > 0 { "+" } else { "" };
            if idx > 0 {
                write!(f, " ")?;
            }
            write!(f, "{sign}{}·t^{k}·{}", c.abs(), self.word_string(w))?;
        }
        Ok(())
    }
}

/// A nonzero residual term `c · t^degree · word`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualTerm {
    pub degree: usize,
    pub word: String,
    pub coefficient: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutatorIdentityReport {
    pub n: usize,
    pub holds: bool,
    pub residual: Vec<ResidualTerm>,
}

/// `N = ⌊(n-1)/2⌋`.
pub fn half_level(n: usize) -> usize {
    (n - 1) / 2
}

/// Alphabet `A_N, …, A_{n-1}, B_N, …, B_{n-1}` and the generic elements
/// `A = 1 + Σ t^i A_i`, `B = 1 + Σ t^i B_i`.
pub fn generic_pair(n: usize) -> (Vec<String>, FreeSeries, FreeSeries) {
    let big_n = half_level(n);
    let mut alphabet: Vec<String> = (big_n..n).map(|i| format!("A{i}")).collect();
    alphabet.extend((big_n..n).map(|i| format!("B{i}")));
    let mut a = FreeSeries::one(&alphabet, n);
    let mut b = FreeSeries::one(&alphabet, n);
    for i in big_n..n {
        a = a
            .add(&FreeSeries::letter(&alphabet, n, i, &format!("A{i}")).expect("letter"))
            .expect("same alphabet");
        b = b
            .add(&FreeSeries::letter(&alphabet, n, i, &format!("B{i}")).expect("letter"))
            .expect("same alphabet");
    }
    (alphabet, a, b)
}

/// The closed form of `⟦A, B⟧` for the generic pair.
pub fn commutator_formula(n: usize) -> Result<FreeSeries> {
    if n < 3 {
        return Err(Error::arg(format!("commutator formula needs n >= 3, got {n}")));
    }
    let big_n = half_level(n);
    let (alphabet, _, _) = generic_pair(n);
    let x = |name: String| FreeSeries::letter(&alphabet, n, 0, &name);
    let t = |k: usize| FreeSeries::monomial(&alphabet, n, k, Vec::new(), BigRational::one());
    let an = x(format!("A{big_n}"))?;
    let bn = x(format!("B{big_n}"))?;
    let one = FreeSeries::one(&alphabet, n);
    if n % 2 == 1 {
        return one.add(&t(n - 1).mul(&an.bracket(&bn)?)?);
    }
    let an1 = x(format!("A{}", big_n + 1))?;
    let bn1 = x(format!("B{}", big_n + 1))?;
    let mut top = an.bracket(&bn1)?.add(&an1.bracket(&bn)?)?;
    if n == 4 {
        top = top.add(&bn.bracket(&an)?.mul(&an.add(&bn)?)?)?;
    }
    one.add(&t(n - 2).mul(&an.bracket(&bn)?)?)?
        .add(&t(n - 1).mul(&top)?)
}

/// `A·B - ⟦A,B⟧·B·A` for the generic pair, modulo `t^n`.
pub fn commutator_residual(n: usize) -> Result<FreeSeries> {
    let (_, a, b) = generic_pair(n);
    let c = commutator_formula(n)?;
    a.mul(&b)?.sub(&c.mul(&b)?.mul(&a)?)
}

pub fn verify_commutator_identity(n: usize) -> Result<CommutatorIdentityReport> {
    let residual = commutator_residual(n)?;
    let terms = residual
        .terms()
        .map(|(k, w, c)| ResidualTerm {
            degree: k,
            word: residual.word_string(w),
            coefficient: c.to_string(),
        })
        .collect::<Vec<_>>();
    Ok(CommutatorIdentityReport {
        n,
        holds: terms.is_empty(),
        residual: terms,
    })
}

/// Right-hand side of the commutator formula built from the digit
/// matrices of actual `A, B ∈ Gl_d(O/λ^n)_N`.
pub fn commutator_from_digits(a: &MatLocal, b: &MatLocal) -> Result<MatLocal> {
    let ctx = a.ctx();
    let n = ctx.precision();
    let big_n = half_level(n);
    let lift = |m: &FMat| MatLocal::from_fmat(ctx, m);
    let br = |x: &FMat, y: &FMat| lift(&x.bracket(y));
    let lam = |k: usize| CycloElt::lambda_pow(ctx, k);
    let id = MatLocal::identity(ctx, a.dim());
    let (an, bn) = (a.digit(big_n), b.digit(big_n));
    if n % 2 == 1 {
        return id.add(&br(&an, &bn).scale(&lam(n - 1)));
    }
    let (an1, bn1) = (a.digit(big_n + 1), b.digit(big_n + 1));
    let mut top = br(&an, &bn1).add(&br(&an1, &bn))?;
    if n == 4 {
        let extra = lift(&bn.bracket(&an)).mul(&lift(&an.add(&bn)))?;
        top = top.add(&extra)?;
    }
    id.add(&br(&an, &bn).scale(&lam(n - 2)))?
        .add(&top.scale(&lam(n - 1)))
}

/// Checks `⟦A, B⟧` against the digit formula for `A, B` at level `N`.
pub fn matrix_commutator_check(a: &MatLocal, b: &MatLocal) -> Result<bool> {
    let n = a.ctx().precision();
    if n < 3 {
        return Err(Error::Level(format!("precision {n} < 3")));
    }
    let big_n = half_level(n);
    for (name, m) in [("A", a), ("B", b)] {
        if m.level() < big_n {
            return Err(Error::Level(format!(
                "{name} has level {} below N = {big_n}",
                m.level()
            )));
        }
        if m.inverse()? != m.inverse_neumann()? {
            return Err(Error::internal("elimination and Neumann inverses disagree"));
        }
    }
    Ok(a.group_commutator(b)? == commutator_from_digits(a, b)?)
}

/// `⟦A, B⟧ = I` whenever the levels of A and B add up to at least n.
pub fn center_check(a: &MatLocal, b: &MatLocal) -> Result<bool> {
    let n = a.ctx().precision();
    let (i, j) = (a.level(), b.level());
    if i == 0 || j == 0 || i + j < n {
        return Err(Error::Level(format!(
            "levels {i} and {j} do not reach n = {n}"
        )));
    }
    Ok(a.group_commutator(b)?.is_identity())
}

/// `[Γ^{-1}E_ij^{(m)}, Γ^{-1}E_jl^{(n)}]` with one-based indices, checked
/// against its closed form.
pub fn eij_bracket_table(
    f: &HermitianForm,
    i: usize,
    j: usize,
    l: usize,
    m: usize,
    n: usize,
) -> Result<FMat> {
    let d = f.dim();
    if [i, j, l].iter().any(|&x| x == 0 || x > d) {
        return Err(Error::arg(format!("indices must lie in 1..={d}")));
    }
    if j == i || j == l {
        return Err(Error::arg("need j != i and j != l"));
    }
    let p = f.ell() as u64;
    let (i, j, l) = (i - 1, j - 1, l - 1);
    let gi = f.gamma_inv_mod_ell();
    let lhs = gi.mul(&e_ij_n(p, d, i, j, m)).bracket(&gi.mul(&e_ij_n(p, d, j, l, n)));
    let inv = |k: usize| gi.get(k, k) as i64;
    let rhs = if i != l {
        gi.mul(&e_ij_n(p, d, i, l, m + n + 1)).scale(inv(j))
    } else {
        let coeff = if (m + n + 1) % 2 == 0 { 2 } else { 0 };
        FMat::unit(p, d, i, i)
            .sub(&FMat::unit(p, d, j, j))
            .scale(coeff * inv(i) % p as i64 * inv(j) % p as i64)
    };
    if lhs != rhs {
        return Err(Error::internal(format!("bracket table mismatch:\n{lhs}vs\n{rhs}")));
    }
    Ok(lhs)
}

/// Rank of the span of top digits of `⟦A, B⟧` over lifted basis pairs
/// `A ∈ SU_N`, `B ∈ SU_M`, together with `dim su^{(n)}`.
pub fn commutator_span_rank(f: &HermitianForm, n: usize) -> Result<(usize, usize)> {
    let d = f.dim();
    if n < 3 || d < 3 {
        return Err(Error::arg("need n >= 3 and d >= 3"));
    }
    let p = f.ell() as u64;
    let big_n = half_level(n);
    let big_m = n - 1 - big_n;
    let gi = f.gamma_inv_mod_ell();
    let ring = |k: usize| crate::cyclotomic::RingCtx::new(f.ell(), k);
    let level_elt = |level: usize, x: &FMat| -> Result<MatLocal> {
        let ctx = ring(level + 1)?;
        MatLocal::identity(ctx, d).add(&MatLocal::from_fmat(ctx, x).scale(&CycloElt::lambda_pow(ctx, level)))
    };
    let mut tops = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for l in 0..d {
                if j == i || j == l {
                    continue;
                }
                let a0 = level_elt(big_n, &gi.mul(&e_ij_n(p, d, i, j, big_n + 1)))?;
                let b0 = level_elt(big_m, &gi.mul(&e_ij_n(p, d, j, l, big_m + 1)))?;
                let a = lift_su_to(&a0, f, n)?;
                let b = lift_su_to(&b0, f, n)?;
                let c = a.group_commutator(&b)?;
                if c.level() < n - 1 {
                    return Err(Error::internal("commutator below level n-1"));
                }
                tops.push(c.digit(n - 1));
            }
        }
    }
    Ok((span_rank(p, &tops), su_dimension(d, n)))
}
