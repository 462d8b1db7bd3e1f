//! Prime sets, π-numbers and the ring `Q_π` of rationals whose reduced
//! denominators are π-numbers.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A set of primes `π`.
///
/// `Cofinite` holds the primes that are *excluded*; `all` is the cofinite set
/// with nothing excluded.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PrimeSet {
    Finite(BTreeSet<u64>),
    Cofinite(BTreeSet<u64>),
}

impl PrimeSet {
    pub fn all() -> Self {
        PrimeSet::Cofinite(BTreeSet::new())
    }

    pub fn finite<I: IntoIterator<Item = u64>>(primes: I) -> Result<Self> {
        let set = checked_primes(primes)?;
        if set.is_empty() {
            return Err(Error::InvalidArgument("a finite prime set must be non-empty".into()));
        }
        Ok(PrimeSet::Finite(set))
    }

    pub fn all_except<I: IntoIterator<Item = u64>>(primes: I) -> Result<Self> {
        Ok(PrimeSet::Cofinite(checked_primes(primes)?))
    }

    pub fn is_all(&self) -> bool {
        matches!(self, PrimeSet::Cofinite(ex) if ex.is_empty())
    }

    /// Membership of a prime `p` (the caller guarantees primality).
    pub fn contains(&self, p: u64) -> bool {
        match self {
            PrimeSet::Finite(s) => s.contains(&p),
            PrimeSet::Cofinite(ex) => !ex.contains(&p),
        }
    }

    /// Does some prime factor of `n` lie in this set?
    pub fn meets(&self, n: &BigUint) -> bool {
        let (pi_part, _) = split(n, self);
        !pi_part.is_one()
    }
}

fn checked_primes<I: IntoIterator<Item = u64>>(primes: I) -> Result<BTreeSet<u64>> {
    let mut set = BTreeSet::new();
    for p in primes {
        if !is_prime_u64(p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        set.insert(p);
    }
    Ok(set)
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |s: &BTreeSet<u64>| s.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        match self {
            PrimeSet::Finite(s) => write!(f, "{{{}}}", list(s)),
            PrimeSet::Cofinite(ex) if ex.is_empty() => write!(f, "all"),
            PrimeSet::Cofinite(ex) => write!(f, "all\\{{{}}}", list(ex)),
        }
    }
}

impl FromStr for PrimeSet {
    type Err = Error;

    /// Accepts `all`, `all\{2,5}` and `{2,3}`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let braced = |body: &str| -> Result<Vec<u64>> {
            let inner = body
                .trim()
                .strip_prefix('{')
                .and_then(|b| b.strip_suffix('}'))
                .ok_or_else(|| Error::InvalidArgument(format!("expected {{p,q,...}}, got {body:?}")))?;
            inner
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<u64>()
                        .map_err(|_| Error::InvalidArgument(format!("bad prime {t:?}")))
                })
                .collect()
        };
        if s.eq_ignore_ascii_case("all") {
            return Ok(PrimeSet::all());
        }
        if let Some(rest) = s.strip_prefix("all").or_else(|| s.strip_prefix("ALL")) {
            let rest = rest.trim_start();
            let rest = rest
                .strip_prefix('\\')
                .ok_or_else(|| Error::InvalidArgument(format!("bad prime set {s:?}")))?;
            return PrimeSet::all_except(braced(rest)?);
        }
        PrimeSet::finite(braced(s)?)
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in SMALL {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn positive(n: &BigInt) -> Result<BigUint> {
    match n.sign() {
        Sign::Plus => Ok(n.magnitude().clone()),
        _ => Err(Error::InvalidArgument(format!("expected a positive integer, got {n}"))),
    }
}

// (π-part, π'-part) of a positive integer.
fn split(n: &BigUint, pi: &PrimeSet) -> (BigUint, BigUint) {
    let strip = |n: &BigUint, p: u64| -> (BigUint, BigUint) {
        let p = BigUint::from(p);
        let mut rest = n.clone();
        let mut power = BigUint::one();
        loop {
            let (q, r) = rest.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            rest = q;
            power *= &p;
        }
        (power, rest)
    };
    match pi {
        PrimeSet::Finite(primes) => {
            let mut pi_part = BigUint::one();
            let mut rest = n.clone();
            for &p in primes {
                let (pw, r) = strip(&rest, p);
                pi_part *= pw;
                rest = r;
            }
            (pi_part, rest)
        }
        PrimeSet::Cofinite(excluded) => {
            let mut other = BigUint::one();
            let mut rest = n.clone();
            for &p in excluded {
                let (pw, r) = strip(&rest, p);
                other *= pw;
                rest = r;
            }
            (rest, other)
        }
    }
}

/// True iff every prime factor of `n` lies in `pi`. `1` is always a π-number.
pub fn is_pi_number(n: impl Into<BigInt>, pi: &PrimeSet) -> Result<bool> {
    let n = positive(&n.into())?;
    Ok(split(&n, pi).1.is_one())
}

/// Splits `n` into its maximal π-number divisor and the cofactor.
pub fn pi_decompose(n: impl Into<BigInt>, pi: &PrimeSet) -> Result<(PiNumber, BigUint)> {
    let n = positive(&n.into())?;
    let (a, b) = split(&n, pi);
    Ok((PiNumber(a), b))
}

/// A positive integer all of whose prime factors lie in some prime set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PiNumber(BigUint);

impl PiNumber {
    pub fn new(n: impl Into<BigInt>, pi: &PrimeSet) -> Result<Self> {
        let n = n.into();
        if is_pi_number(n.clone(), pi)? {
            Ok(PiNumber(n.magnitude().clone()))
        } else {
            Err(Error::InvalidArgument(format!("{n} is not a {pi}-number")))
        }
    }

    pub fn one() -> Self {
        PiNumber(BigUint::one())
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn to_bigint(&self) -> BigInt {
        BigInt::from(self.0.clone())
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl fmt::Display for PiNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Iterates the π-numbers `1 = n_0 < n_1 < ...` up to and including `bound`.
pub fn pi_numbers_up_to(bound: u64, pi: &PrimeSet) -> impl Iterator<Item = u64> + '_ {
    (1..=bound).filter(move |&n| is_pi_number(n, pi).unwrap_or(false))
}

/// An element of `Q_π`.
///
/// The π used at construction is not stored: sums, differences and products
/// of π-rationals stay in `Q_π`, so only [`PiRational::inv`] needs it again.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PiRational(BigRational);

impl PiRational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>, pi: &PrimeSet) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Self::from_rational(BigRational::new(numer.into(), denom), pi)
    }

    pub fn from_rational(r: BigRational, pi: &PrimeSet) -> Result<Self> {
        if is_pi_number(r.denom().clone(), pi)? {
            Ok(PiRational(r))
        } else {
            Err(Error::NotInRing(format!("{r} has a denominator that is not a {pi}-number")))
        }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        PiRational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        PiRational(BigRational::zero())
    }

    pub fn one() -> Self {
        PiRational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.to_integer())
    }

    /// Multiplicative inverse; defined only when the numerator is a π-number
    /// up to sign.
    pub fn inv(&self, pi: &PrimeSet) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInRing("0 has no inverse".into()));
        }
        let n = self.0.numer().abs();
        if !is_pi_number(n, pi)? {
            return Err(Error::NotInRing(format!(
                "1/({}) has a denominator that is not a {pi}-number",
                self.0
            )));
        }
        Ok(PiRational(self.0.recip()))
    }

    /// `q(q-1)/2`. For `q ∈ Q_π` this is again in `Q_π`: an even denominator
    /// forces `2 ∈ π`, and an odd one leaves `q(q-1)` with an even numerator.
    pub fn choose2(&self) -> Self {
        let q = &self.0;
        PiRational(q * (q - BigRational::one()) / BigRational::from_integer(BigInt::from(2)))
    }
}

impl fmt::Display for PiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl From<i64> for PiRational {
    fn from(n: i64) -> Self {
        PiRational::from_integer(n)
    }
}

impl From<BigInt> for PiRational {
    fn from(n: BigInt) -> Self {
        PiRational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&PiRational> for &PiRational {
            type Output = PiRational;
            fn $m(self, rhs: &PiRational) -> PiRational {
                PiRational((&self.0).$m(&rhs.0))
            }
        }
        impl $tr<PiRational> for PiRational {
            type Output = PiRational;
            fn $m(self, rhs: PiRational) -> PiRational {
                PiRational(self.0.$m(rhs.0))
            }
        }
        impl $tr<&PiRational> for PiRational {
            type Output = PiRational;
            fn $m(self, rhs: &PiRational) -> PiRational {
                PiRational(self.0.$m(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for PiRational {
    type Output = PiRational;
    fn neg(self) -> PiRational {
        PiRational(-self.0)
    }
}

impl Neg for &PiRational {
    type Output = PiRational;
    fn neg(self) -> PiRational {
        PiRational(-&self.0)
    }
}

/// The four ring operations as a single entry point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Mul,
    Neg,
    Inv,
}

/// Applies `op` to `a` (and `b` for the binary operations).
pub fn pi_rational_op(a: &PiRational, b: &PiRational, op: RingOp, pi: &PrimeSet) -> Result<PiRational> {
    match op {
        RingOp::Add => Ok(a + b),
        RingOp::Mul => Ok(a * b),
        RingOp::Neg => Ok(-a),
        RingOp::Inv => a.inv(pi),
    }
}
