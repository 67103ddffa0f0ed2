//! Exact Laurent polynomials in the six initial cluster variables `x1..x6`.
//!
//! A [`LaurentPoly`] is a finite map from exponent vectors to nonzero
//! coefficients. The coefficient ring is generic (any signed integer type
//! from `num`); the crate root fixes it to [`BigInt`](num_bigint::BigInt)
//! through the [`Poly`](crate::Poly) alias.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Exponents`], whose derived
//! ordering is lexicographic with `x1` most significant. The leading term is
//! the largest key, and the canonical text form lists terms from the leading
//! term downwards.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Number of cluster variables in the initial seed.
pub const NVARS: usize = 6;

/// Integer types usable as polynomial coefficients.
pub trait Coefficient:
    Clone + fmt::Debug + fmt::Display + Integer + Signed + FromStr + Send + Sync
{
}

impl<T> Coefficient for T where
    T: Clone + fmt::Debug + fmt::Display + Integer + Signed + FromStr + Send + Sync
{
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial is not exactly divisible by the given divisor")]
    NotDivisible,
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
}

/// Exponent vector of a monomial `x1^e1 ... x6^e6`; entries may be negative.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Exponents(pub [i32; NVARS]);

impl Exponents {
    pub const ZERO: Exponents = Exponents([0; NVARS]);

    /// Exponent vector of the single variable `x_var` (1-based).
    pub fn unit(var: usize) -> Self {
        assert!((1..=NVARS).contains(&var), "variable index {var} out of range");
        let mut e = [0; NVARS];
        e[var - 1] = 1;
        Exponents(e)
    }

    pub fn get(&self, var: usize) -> i32 {
        self.0[var - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }
}

impl Add for Exponents {
    type Output = Exponents;
    fn add(self, rhs: Exponents) -> Exponents {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(rhs.0) {
            *a += b;
        }
        Exponents(e)
    }
}

impl Sub for Exponents {
    type Output = Exponents;
    fn sub(self, rhs: Exponents) -> Exponents {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(rhs.0) {
            *a -= b;
        }
        Exponents(e)
    }
}

impl Neg for Exponents {
    type Output = Exponents;
    fn neg(self) -> Exponents {
        Exponents(self.0.map(|e| -e))
    }
}

impl From<[i32; NVARS]> for Exponents {
    fn from(e: [i32; NVARS]) -> Self {
        Exponents(e)
    }
}

/// A permutation of the variable indices `1..=6`, acting on polynomials by
/// `x_i -> x_{image(i)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VarPermutation([usize; NVARS]);

/// The involution `(15)(24)(36)`, realized on the lattice as a half-turn.
pub const SIGMA: VarPermutation = VarPermutation([5, 4, 6, 2, 1, 3]);

impl VarPermutation {
    /// Builds a permutation from the 1-based images of `1..=6`.
    pub fn new(image: [usize; NVARS]) -> Option<Self> {
        let mut seen = [false; NVARS];
        for &i in &image {
            if !(1..=NVARS).contains(&i) || seen[i - 1] {
                return None;
            }
            seen[i - 1] = true;
        }
        Some(VarPermutation(image))
    }

    pub fn identity() -> Self {
        VarPermutation([1, 2, 3, 4, 5, 6])
    }

    pub fn image(&self) -> [usize; NVARS] {
        self.0
    }

    /// Image of the 1-based index `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = [0; NVARS];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j - 1] = i + 1;
        }
        VarPermutation(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &VarPermutation) -> Self {
        VarPermutation(other.0.map(|j| self.0[j - 1]))
    }

    pub fn is_involution(&self) -> bool {
        self.compose(self) == Self::identity()
    }

    /// Moves the entry for variable `i` to slot `image(i)`.
    pub fn permute_exponents(&self, e: &Exponents) -> Exponents {
        let mut out = [0; NVARS];
        for (i, &v) in e.0.iter().enumerate() {
            out[self.0[i] - 1] = v;
        }
        Exponents(out)
    }

    /// Permutes a per-label vector the same way as exponents.
    pub fn permute_counts<T: Copy + Default>(&self, v: &[T; NVARS]) -> [T; NVARS] {
        let mut out = [T::default(); NVARS];
        for (i, &x) in v.iter().enumerate() {
            out[self.0[i] - 1] = x;
        }
        out
    }
}

/// Multivariate Laurent polynomial in `x1..x6` with coefficients in `C`.
///
/// No stored coefficient is ever zero, so structural equality is
/// mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly<C> {
    terms: BTreeMap<Exponents, C>,
}

impl<C: Coefficient> LaurentPoly<C> {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(Exponents::ZERO, C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(Exponents::ZERO, c)
    }

    /// The variable `x_var` (1-based).
    pub fn var(var: usize) -> Self {
        Self::monomial(Exponents::unit(var), C::one())
    }

    pub fn monomial(exps: impl Into<Exponents>, coeff: C) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exps.into(), coeff);
        }
        LaurentPoly { terms }
    }

    /// Collects `(exponents, coefficient)` pairs, summing repeats and dropping zeros.
    pub fn from_terms<I>(iter: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, C)>,
    {
        let mut p = Self::zero();
        for (e, c) in iter {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponents, c: C) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.get(&Exponents::ZERO).is_some_and(|c| c.is_one())
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for a single term with coefficient one.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().all(|c| c.is_one())
    }

    /// Exponent vector of a monic monomial.
    pub fn as_monomial(&self) -> Option<Exponents> {
        if self.is_monomial() {
            self.terms.keys().next().copied()
        } else {
            None
        }
    }

    pub fn coeff(&self, e: &Exponents) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    /// Terms in canonical (descending) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &C)> {
        self.terms.iter().rev()
    }

    pub fn leading_term(&self) -> Option<(&Exponents, &C)> {
        self.terms.last_key_value()
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &C> {
        self.terms.values()
    }

    pub fn all_coefficients_positive(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    /// Sum of all coefficients, i.e. the value at the all-ones point.
    pub fn coefficient_sum(&self) -> C {
        self.terms.values().fold(C::zero(), |acc, c| acc + c.clone())
    }

    /// Multiplies every term by `x^shift`.
    pub fn mul_monomial(&self, shift: &Exponents) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e + *shift, c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, c.clone() * k.clone())).collect(),
        }
    }

    /// Non-negative integer power.
    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Smallest and largest exponent of `x_var` over all terms.
    pub fn degree_range(&self, var: usize) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|e| e.get(var));
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), d| (lo.min(d), hi.max(d))))
    }

    /// Exact quotient `self / den`.
    ///
    /// Repeatedly cancels the leading term of the remainder against the
    /// leading term of `den`. Every term of a true quotient lies in the box
    /// `[min_i(num) - min_i(den), max_i(num) - max_i(den)]` per variable, and
    /// the generated quotient exponents strictly decrease, so leaving that box
    /// (or a non-integral coefficient ratio) proves there is no exact quotient.
    pub fn div_exact(&self, den: &Self) -> Result<Self, LaurentError> {
        let (lead_e, lead_c) = match den.leading_term() {
            Some((e, c)) => (*e, c.clone()),
            None => return Err(LaurentError::DivisionByZero),
        };
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if let Some(shift) = den.as_monomial() {
            return Ok(self.mul_monomial(&-shift));
        }

        let mut lo = [0i32; NVARS];
        let mut hi = [0i32; NVARS];
        for v in 1..=NVARS {
            let (nlo, nhi) = self.degree_range(v).expect("nonzero numerator");
            let (dlo, dhi) = den.degree_range(v).expect("nonzero divisor");
            lo[v - 1] = nlo - dlo;
            hi[v - 1] = nhi - dhi;
            if lo[v - 1] > hi[v - 1] {
                return Err(LaurentError::NotDivisible);
            }
        }
        let in_box = |e: &Exponents| (0..NVARS).all(|i| lo[i] <= e.0[i] && e.0[i] <= hi[i]);

        let mut rem = self.clone();
        let mut quot = BTreeMap::new();
        while let Some((re, rc)) = rem.leading_term() {
            let qe = *re - lead_e;
            if !in_box(&qe) {
                return Err(LaurentError::NotDivisible);
            }
            let (qc, r) = rc.div_rem(&lead_c);
            if !r.is_zero() {
                return Err(LaurentError::NotDivisible);
            }
            for (de, dc) in &den.terms {
                rem.add_term(qe + *de, -(qc.clone() * dc.clone()));
            }
            quot.insert(qe, qc);
        }
        Ok(LaurentPoly { terms: quot })
    }

    /// Applies `x_i -> x_{perm(i)}` to every term.
    pub fn permute(&self, perm: &VarPermutation) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (perm.permute_exponents(e), c.clone()))
                .collect(),
        }
    }

    /// Evaluates at a point whose coordinates must all be invertible in `F`.
    pub fn eval<F>(&self, point: &[F; NVARS]) -> F
    where
        F: Num + Clone + From<C>,
    {
        self.eval_with(point, |c| F::from(c.clone()))
    }

    /// Evaluates with an explicit coefficient embedding into `F`.
    pub fn eval_with<F, G>(&self, point: &[F; NVARS], embed: G) -> F
    where
        F: Num + Clone,
        G: Fn(&C) -> F,
    {
        let mut acc = F::zero();
        for (e, c) in &self.terms {
            let mut term = embed(c);
            for (x, &k) in point.iter().zip(e.0.iter()) {
                let p = num_traits::pow(x.clone(), k.unsigned_abs() as usize);
                term = if k >= 0 { term * p } else { term / p };
            }
            acc = acc + term;
        }
        acc
    }

    /// Floating-point evaluation, convenient for sanity checks on large values.
    pub fn eval_f64(&self, point: &[f64; NVARS]) -> f64
    where
        C: ToPrimitive,
    {
        self.eval_with(point, |c| c.to_f64().unwrap_or(f64::NAN))
    }

    /// Canonical text form (same as `Display`).
    pub fn format(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<Self, LaurentError> {
        Parser::new(text).parse_poly()
    }
}

impl<C: Coefficient> Default for LaurentPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> Zero for LaurentPoly<C> {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Coefficient> One for LaurentPoly<C> {
    fn one() -> Self {
        LaurentPoly::one()
    }
}

impl<C: Coefficient> AddAssign<&LaurentPoly<C>> for LaurentPoly<C> {
    fn add_assign(&mut self, rhs: &LaurentPoly<C>) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl<C: Coefficient> SubAssign<&LaurentPoly<C>> for LaurentPoly<C> {
    fn sub_assign(&mut self, rhs: &LaurentPoly<C>) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c.clone());
        }
    }
}

impl<C: Coefficient> Add<&LaurentPoly<C>> for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<C: Coefficient> Sub<&LaurentPoly<C>> for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<C: Coefficient> Mul<&LaurentPoly<C>> for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(*ea + *eb, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Coefficient> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl<C: Coefficient> $tr for LaurentPoly<C> {
            type Output = LaurentPoly<C>;
            fn $m(self, rhs: LaurentPoly<C>) -> LaurentPoly<C> {
                (&self).$m(&rhs)
            }
        }
        impl<C: Coefficient> $tr<&LaurentPoly<C>> for LaurentPoly<C> {
            type Output = LaurentPoly<C>;
            fn $m(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl<C: Coefficient> Neg for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        -&self
    }
}

impl<C: Coefficient> std::iter::Sum for LaurentPoly<C> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |mut acc, p| {
            acc += &p;
            acc
        })
    }
}

impl<C: Coefficient> std::iter::Product for LaurentPoly<C> {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |acc, p| &acc * &p)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, e: &Exponents) -> fmt::Result {
    let mut first = true;
    for (i, &k) in e.0.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !first {
            f.write_str(" ")?;
        }
        first = false;
        if k == 1 {
            write!(f, "x{}", i + 1)?;
        } else {
            write!(f, "x{}^{}", i + 1, k)?;
        }
    }
    Ok(())
}

impl<C: Coefficient> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if e.is_zero() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag} ")?;
                }
                write_monomial(f, e)?;
            }
        }
        Ok(())
    }
}

impl<C: Coefficient> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl<C: Coefficient> FromStr for LaurentPoly<C> {
    type Err = LaurentError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LaurentPoly::parse(s)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn err(&self, message: impl Into<String>) -> LaurentError {
        LaurentError::Parse { position: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while let Some(ch) = self.peek() {
            if ch.is_whitespace() {
                self.pos += ch.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn parse_poly<C: Coefficient>(&mut self) -> Result<LaurentPoly<C>, LaurentError> {
        let mut out = LaurentPoly::zero();
        self.skip_ws();
        let mut negative = match self.peek() {
            Some('-') => {
                self.pos += 1;
                true
            }
            Some('+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let (e, mut c) = self.parse_term::<C>()?;
            if negative {
                c = -c;
            }
            out.add_term(e, c);
            self.skip_ws();
            match self.peek() {
                None => return Ok(out),
                Some('+') => negative = false,
                Some('-') => negative = true,
                Some(ch) => return Err(self.err(format!("expected '+' or '-', found '{ch}'"))),
            }
            self.pos += 1;
        }
    }

    fn parse_term<C: Coefficient>(&mut self) -> Result<(Exponents, C), LaurentError> {
        self.skip_ws();
        let mut coeff = C::one();
        let mut seen_any = false;
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let start = self.pos;
            let text = self.digits();
            coeff = text.parse::<C>().map_err(|_| LaurentError::Parse {
                position: start,
                message: format!("invalid coefficient '{text}'"),
            })?;
            seen_any = true;
        }
        let mut exps = Exponents::ZERO;
        loop {
            self.skip_ws();
            if self.peek() != Some('x') {
                break;
            }
            let var_pos = self.pos;
            self.pos += 1;
            let idx = self.digits();
            let var: usize = match idx.parse() {
                Ok(v) if (1..=NVARS).contains(&v) => v,
                _ => {
                    return Err(LaurentError::Parse {
                        position: var_pos,
                        message: format!("expected variable x1..x{NVARS}"),
                    })
                }
            };
            let mut power = 1i32;
            if self.peek() == Some('^') {
                self.pos += 1;
                let sign_pos = self.pos;
                let neg = if self.peek() == Some('-') {
                    self.pos += 1;
                    true
                } else {
                    false
                };
                let digits = self.digits();
                let magnitude: i32 = digits.parse().map_err(|_| LaurentError::Parse {
                    position: sign_pos,
                    message: "expected integer exponent".into(),
                })?;
                power = if neg { -magnitude } else { magnitude };
            }
            exps.0[var - 1] += power;
            seen_any = true;
        }
        if !seen_any {
            return Err(self.err("expected a term"));
        }
        Ok((exps, coeff))
    }
}
