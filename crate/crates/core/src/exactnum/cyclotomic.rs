use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{ExactError, Rational};

/// An exact element of a cyclotomic field.
///
/// Values are kept in canonical form: the conductor is the smallest `n` with
/// the value in `Q(E(n))` (never `2 mod 4`), and the coefficients are taken
/// with respect to the Zumbroich basis of `Q(E(n))`. Two values are equal
/// iff their representations are identical, so `PartialEq` is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    conductor: u32,
    /// Basis exponents in increasing order, all coefficients nonzero.
    terms: Vec<(u32, Rational)>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic {
            conductor: 1,
            terms: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(q: Rational) -> Self {
        let terms = if q.is_zero() {
            Vec::new()
        } else {
            vec![(0, q)]
        };
        Cyclotomic {
            conductor: 1,
            terms,
        }
    }

    /// `E(n)^k`, the primitive `n`-th root of unity `exp(2 pi i / n)` raised to `k`.
    pub fn root_of_unity(n: u32, k: i64) -> Result<Self, ExactError> {
        Self::from_exponents(n, [(k, Rational::one())])
    }

    /// Builds `sum c * E(n)^k` from arbitrary (not necessarily basis) exponents.
    pub fn from_exponents<I>(n: u32, terms: I) -> Result<Self, ExactError>
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        if n == 0 {
            return Err(ExactError::BadConductor(0));
        }
        let mut dense = vec![Rational::zero(); n as usize];
        for (k, c) in terms {
            let k = k.rem_euclid(n as i64) as usize;
            dense[k] += c;
        }
        Ok(reduce_dense(n, dense))
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Basis exponents and coefficients, increasing by exponent.
    pub fn terms(&self) -> &[(u32, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.conductor == 1
    }

    /// The rational value, or [`ExactError::Irrational`] when the canonical
    /// conductor exceeds 1.
    pub fn to_rational(&self) -> Result<Rational, ExactError> {
        if self.conductor != 1 {
            return Err(ExactError::Irrational(self.to_string()));
        }
        Ok(self
            .terms
            .first()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero))
    }

    /// Applies the field automorphism `E(n) -> E(n)^m`; `m` must be coprime to the conductor.
    pub fn galois(&self, m: i64) -> Self {
        let n = self.conductor;
        if n == 1 {
            return self.clone();
        }
        let m = m.rem_euclid(n as i64);
        debug_assert_eq!(m.gcd(&(n as i64)), 1, "galois exponent must be a unit");
        let mut dense = vec![Rational::zero(); n as usize];
        for (k, c) in &self.terms {
            let idx = (*k as i64 * m).rem_euclid(n as i64) as usize;
            dense[idx] += c;
        }
        reduce_dense(n, dense)
    }

    /// Complex conjugation.
    pub fn conjugate(&self) -> Self {
        self.galois(-1)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Cyclotomic {
            conductor: self.conductor,
            terms: self.terms.iter().map(|(k, c)| (*k, c * q)).collect(),
        }
    }

    fn combine(&self, other: &Self, sign: i8) -> Self {
        if self.conductor == 1 && other.conductor == 1 {
            let a = self.to_rational().unwrap_or_else(|_| unreachable!());
            let b = other.to_rational().unwrap_or_else(|_| unreachable!());
            return Self::from_rational(if sign > 0 { a + b } else { a - b });
        }
        let l = lcm(self.conductor, other.conductor);
        let mut acc = Accumulator::with_conductor(l);
        acc.add_scaled(self, &Rational::one());
        acc.add_scaled(
            other,
            &Rational::from_integer(BigInt::from(if sign > 0 { 1 } else { -1 })),
        );
        acc.finish()
    }

    fn product(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.conductor == 1 {
            return other.scale(&self.terms[0].1);
        }
        if other.conductor == 1 {
            return self.scale(&other.terms[0].1);
        }
        let mut acc = Accumulator::new();
        acc.add_product(&[self, other], &Rational::one());
        acc.finish()
    }
}

impl Default for Cyclotomic {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Rational> for Cyclotomic {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

impl From<i64> for Cyclotomic {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.combine(rhs, 1)
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.combine(rhs, -1)
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.product(rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl std::iter::Sum for Cyclotomic {
    fn sum<I: Iterator<Item = Cyclotomic>>(iter: I) -> Self {
        let mut acc = Accumulator::new();
        for x in iter {
            acc.add_scaled(&x, &Rational::one());
        }
        acc.finish()
    }
}

/// Unreduced running sum of products of cyclotomics.
///
/// Products are added by exponent arithmetic only; basis reduction and
/// conductor lowering happen once in [`Accumulator::finish`]. Orthogonality
/// checks and character sums go through this.
#[derive(Clone, Debug)]
pub struct Accumulator {
    conductor: u32,
    rational: Rational,
    dense: Vec<Rational>,
}

impl Default for Accumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl Accumulator {
    pub fn new() -> Self {
        Self::with_conductor(1)
    }

    fn with_conductor(n: u32) -> Self {
        Accumulator {
            conductor: n,
            rational: Rational::zero(),
            dense: if n > 1 {
                vec![Rational::zero(); n as usize]
            } else {
                Vec::new()
            },
        }
    }

    fn grow(&mut self, n: u32) {
        if self.conductor.is_multiple_of(n) {
            return;
        }
        let l = lcm(self.conductor, n);
        let mut dense = vec![Rational::zero(); l as usize];
        if self.conductor > 1 {
            let f = (l / self.conductor) as usize;
            for (k, c) in std::mem::take(&mut self.dense).into_iter().enumerate() {
                if !c.is_zero() {
                    dense[k * f] = c;
                }
            }
        }
        self.conductor = l;
        self.dense = dense;
    }

    pub fn add_scaled(&mut self, x: &Cyclotomic, scale: &Rational) {
        self.add_product(&[x], scale)
    }

    /// Adds `scale * prod(factors)`.
    pub fn add_product(&mut self, factors: &[&Cyclotomic], scale: &Rational) {
        if scale.is_zero() || factors.iter().any(|f| f.is_zero()) {
            return;
        }
        let mut coeff = scale.clone();
        let mut irrational: Vec<&Cyclotomic> = Vec::new();
        for f in factors {
            if f.conductor == 1 {
                coeff *= &f.terms[0].1;
            } else {
                irrational.push(f);
            }
        }
        if irrational.is_empty() {
            self.rational += coeff;
            return;
        }
        let n = irrational.iter().fold(1, |acc, f| lcm(acc, f.conductor));
        self.grow(n);
        let l = self.conductor as u64;
        // expand the product term by term over the common conductor
        let mut partial: Vec<(u64, Rational)> = vec![(0, coeff)];
        for f in irrational {
            let step = l / f.conductor as u64;
            let mut next: BTreeMap<u64, Rational> = BTreeMap::new();
            for (e, c) in &partial {
                for (k, d) in &f.terms {
                    let idx = (e + *k as u64 * step) % l;
                    *next.entry(idx).or_insert_with(Rational::zero) += c * d;
                }
            }
            partial = next.into_iter().collect();
        }
        for (e, c) in partial {
            self.dense[e as usize] += c;
        }
    }

    pub fn finish(self) -> Cyclotomic {
        if self.conductor == 1 {
            return Cyclotomic::from_rational(self.rational);
        }
        let mut dense = self.dense;
        dense[0] += self.rational;
        reduce_dense(self.conductor, dense)
    }
}

pub(crate) fn lcm(a: u32, b: u32) -> u32 {
    a / a.gcd(&b) * b
}

/// Prime factorization as `(p, e, p^e)`.
pub(crate) fn prime_powers(mut n: u32) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let (mut e, mut q) = (0, 1);
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
                q *= p;
            }
            out.push((p, e, q));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1, n));
    }
    out
}

fn mod_inverse(a: u32, m: u32) -> u32 {
    if m == 1 {
        return 0;
    }
    let e = (a as i64).extended_gcd(&(m as i64));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i64) as u32
}

/// Coefficient rings the basis reduction works over.
pub(crate) trait Coeff:
    Clone + Default + Zero + PartialEq + for<'a> SubAssign<&'a Self> + Neg<Output = Self>
{
}

impl<T> Coeff for T where
    T: Clone + Default + Zero + PartialEq + for<'a> SubAssign<&'a T> + Neg<Output = T>
{
}

/// Rewrites `sum dense[k] E(n)^k` in the Zumbroich basis, then lowers the conductor.
fn reduce_dense(n: u32, dense: Vec<Rational>) -> Cyclotomic {
    let (conductor, terms) = reduce_generic(n, dense);
    Cyclotomic { conductor, terms }
}

pub(crate) fn reduce_generic<T: Coeff>(n: u32, mut dense: Vec<T>) -> (u32, Vec<(u32, T)>) {
    debug_assert_eq!(dense.len(), n as usize);
    let nn = n as usize;
    for (p, _, q) in prime_powers(n) {
        let m = n / q;
        let minv = mod_inverse(m % q, q) as u64;
        let step = (n / p) as usize;
        let top = q / p;
        for k in 0..nn {
            if dense[k].is_zero() {
                continue;
            }
            let j = ((k as u64 % q as u64) * minv % q as u64) as u32;
            let digit = j / top;
            if p == 2 {
                if digit == 1 {
                    let v = std::mem::take(&mut dense[k]);
                    dense[(k + step) % nn] -= &v;
                }
            } else if digit == 0 {
                let v = std::mem::take(&mut dense[k]);
                for t in 1..p as usize {
                    dense[(k + t * step) % nn] -= &v;
                }
            }
        }
    }
    let terms: Vec<(u32, T)> = dense
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k as u32, c))
        .collect();
    lower_conductor(n, terms)
}

fn lower_conductor<T: Coeff>(mut n: u32, mut terms: Vec<(u32, T)>) -> (u32, Vec<(u32, T)>) {
    if terms.is_empty() {
        return (1, terms);
    }
    'outer: loop {
        if n == 1 {
            break;
        }
        for (p, e, _) in prime_powers(n) {
            if p == 2 && e == 1 {
                // Q(E(2m)) = Q(E(m)) for odd m; basis exponents are all even here
                debug_assert!(terms.iter().all(|(k, _)| k % 2 == 0));
                n /= 2;
                for t in &mut terms {
                    t.0 /= 2;
                }
                continue 'outer;
            }
            if e >= 2 {
                if terms.iter().all(|(k, _)| k % p == 0) {
                    n /= p;
                    for t in &mut terms {
                        t.0 /= p;
                    }
                    continue 'outer;
                }
                continue;
            }
            // p odd, p || n: a value of Q(E(n/p)) shows up as p-1 equal coefficients per group
            let m = n / p;
            let minv = mod_inverse(m % p, p) as u64;
            let mut groups: BTreeMap<u32, (u32, &T)> = BTreeMap::new();
            let mut ok = true;
            for (k, c) in &terms {
                let t = (*k as u64 % p as u64) * minv % p as u64;
                let k0 = ((*k as u64 + n as u64 - t * m as u64) % n as u64) as u32;
                let entry = groups.entry(k0).or_insert((0, c));
                if entry.1 != c {
                    ok = false;
                    break;
                }
                entry.0 += 1;
            }
            if ok && groups.values().all(|(count, _)| *count == p - 1) {
                let lowered: Vec<(u32, T)> = groups
                    .into_iter()
                    .map(|(k0, (_, c))| (k0 / p, -c.clone()))
                    .collect();
                terms = lowered;
                n = m;
                continue 'outer;
            }
        }
        break;
    }
    terms.sort_by_key(|a| a.0);
    (n, terms)
}

impl PartialOrd for Cyclotomic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Arbitrary but total order on canonical forms; only used for deterministic sorting.
impl Ord for Cyclotomic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.conductor
            .cmp(&other.conductor)
            .then_with(|| self.terms.cmp(&other.terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn e(n: u32, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, k).unwrap()
    }

    fn b7() -> Cyclotomic {
        &(&e(7, 1) + &e(7, 2)) + &e(7, 4)
    }

    #[test]
    fn sum_of_nontrivial_roots_is_minus_one() {
        for p in [2u32, 3, 5, 7, 11, 13] {
            let s: Cyclotomic = (1..p as i64).map(|k| e(p, k)).sum();
            assert_eq!(s, Cyclotomic::from_integer(-1), "p = {p}");
        }
    }

    #[test]
    fn b7_times_conjugate_is_two() {
        let b = b7();
        assert_eq!(&b * &b.conjugate(), Cyclotomic::from_integer(2));
        assert_eq!(&b + &b.conjugate(), Cyclotomic::from_integer(-1));
        assert_eq!(b.conductor(), 7);
        assert!(b.to_rational().is_err());
    }

    #[test]
    fn conjugate_of_b7_is_complementary_exponents() {
        let expected: Cyclotomic = [3, 5, 6].iter().map(|k| e(7, *k)).sum();
        assert_eq!(b7().conjugate(), expected);
        let r = Cyclotomic::from_rational(q(5, 3));
        assert_eq!(r.conjugate(), r);
    }

    #[test]
    fn conductor_drops_to_subfield() {
        assert_eq!(e(4, 2), Cyclotomic::from_integer(-1));
        assert_eq!(&e(3, 1) + &e(3, 2), Cyclotomic::from_integer(-1));
        // E(12)^4 = E(3)
        assert_eq!(e(12, 4), e(3, 1));
        // E(6) = -E(3)^2
        assert_eq!(e(6, 1), -e(3, 2));
        // E(9)^3 lives in Q(E(3))
        assert_eq!(e(9, 3).conductor(), 3);
        // sqrt(5) = E(5) - E(5)^2 - E(5)^3 + E(5)^4, sqrt(5)^2 = 5
        let s5 = &(&(&e(5, 1) - &e(5, 2)) - &e(5, 3)) + &e(5, 4);
        assert_eq!(&s5 * &s5, Cyclotomic::from_integer(5));
        // i * i = -1 across conductors
        assert_eq!(&e(4, 1) * &e(4, 1), Cyclotomic::from_integer(-1));
        // E(15)^5 * E(15)^10 = 1
        assert_eq!(&e(15, 5) * &e(15, 10), Cyclotomic::one());
    }

    #[test]
    fn mixed_conductor_sum_reduces() {
        // E(3) + E(4) has conductor 12, subtracting E(4) gets back to conductor 3
        let x = &e(3, 1) + &e(4, 1);
        assert_eq!(x.conductor(), 12);
        assert_eq!(&x - &e(4, 1), e(3, 1));
    }

    #[test]
    fn zumbroich_dimension_matches_totient() {
        let in_basis = |n: u32, k: u32| {
            prime_powers(n).into_iter().all(|(p, _, q)| {
                let j = (k % q) as u64 * mod_inverse((n / q) % q, q) as u64 % q as u64;
                let digit = j as u32 / (q / p);
                if p == 2 {
                    digit == 0
                } else {
                    digit != 0
                }
            })
        };
        for n in [
            3u32, 4, 5, 7, 8, 9, 12, 15, 16, 20, 21, 24, 27, 28, 36, 45, 63,
        ] {
            let count = (0..n).filter(|k| in_basis(n, *k)).count();
            let phi = (1..=n).filter(|k| k.gcd(&n) == 1).count();
            assert_eq!(count, phi, "n = {n}");
            for k in 0..n as i64 {
                let x = e(n, k);
                if x.conductor() == n {
                    assert!(
                        x.terms().iter().all(|(j, _)| in_basis(n, *j)),
                        "n = {n}, k = {k}"
                    );
                }
            }
        }
    }
}

/// A cyclotomic integer with machine-sized coefficients in the canonical basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralCyclotomic {
    conductor: u32,
    terms: Vec<(u32, i64)>,
}

impl IntegralCyclotomic {
    pub fn conductor(&self) -> u32 {
        self.conductor
    }
}

impl Cyclotomic {
    /// `None` unless every coefficient is an integer fitting in `i64`.
    pub fn to_integral(&self) -> Option<IntegralCyclotomic> {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| {
                if c.is_integer() {
                    i64::try_from(c.numer()).ok().map(|v| (*k, v))
                } else {
                    None
                }
            })
            .collect::<Option<Vec<_>>>()?;
        Some(IntegralCyclotomic {
            conductor: self.conductor,
            terms,
        })
    }
}

/// Running sum of `scale * a * b` over a fixed `Q(E(n))` with `i128` coefficients.
#[derive(Clone, Debug)]
pub struct IntegralSum {
    n: u32,
    dense: Vec<i128>,
    overflow: bool,
}

impl IntegralSum {
    pub fn new(n: u32) -> Self {
        IntegralSum {
            n,
            dense: vec![0; n as usize],
            overflow: false,
        }
    }

    /// Both conductors must divide `n`.
    pub fn add_product(&mut self, a: &IntegralCyclotomic, b: &IntegralCyclotomic, scale: i128) {
        debug_assert!(self.n.is_multiple_of(a.conductor) && self.n.is_multiple_of(b.conductor));
        let n = self.n as u64;
        let (fa, fb) = ((n / a.conductor as u64), (n / b.conductor as u64));
        for (i, x) in &a.terms {
            for (j, y) in &b.terms {
                let idx = ((*i as u64 * fa + *j as u64 * fb) % n) as usize;
                let term = (*x as i128)
                    .checked_mul(*y as i128)
                    .and_then(|v| v.checked_mul(scale));
                match term.and_then(|t| self.dense[idx].checked_add(t)) {
                    Some(v) => self.dense[idx] = v,
                    None => self.overflow = true,
                }
            }
        }
    }

    /// The reduced sum, or `None` if a coefficient overflowed.
    pub fn finish(self) -> Option<Cyclotomic> {
        if self.overflow {
            return None;
        }
        let (conductor, terms) = reduce_generic(self.n, self.dense);
        Some(Cyclotomic {
            conductor,
            terms: terms
                .into_iter()
                .map(|(k, c)| (k, Rational::from_integer(BigInt::from(c))))
                .collect(),
        })
    }
}
