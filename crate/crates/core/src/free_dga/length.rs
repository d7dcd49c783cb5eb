use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::exactlin::Rational;

/// Exact length value `rational + surd * sqrt(radicand)`.
///
/// `radicand` is square-free; it is `1` exactly when `surd` is zero. Sums are
/// only defined inside a single quadratic field, which is all the built-in
/// generator tables need.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Length {
    rational: Rational,
    surd: Rational,
    radicand: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LengthError {
    #[error("cannot add lengths from different quadratic fields (sqrt({0}) and sqrt({1}))")]
    MixedRadicands(u64, u64),
    #[error("square root of a negative number")]
    NegativeRadicand,
    #[error("radicand too large to factor: {0}")]
    RadicandTooLarge(String),
    #[error("invalid length literal `{0}`")]
    Parse(String),
}

fn square_free_decomposition(mut n: u64) -> (u64, u64) {
    // n = s^2 * m with m square-free
    let mut s = 1u64;
    let mut m = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            m *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (s, m * n)
}

impl Length {
    pub fn rational(r: Rational) -> Self {
        Length {
            rational: r,
            surd: Rational::zero(),
            radicand: 1,
        }
    }

    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(Rational::from_int(n))
    }

    /// Exact square root of a non-negative rational.
    pub fn sqrt_of(r: &Rational) -> Result<Self, LengthError> {
        if r.signum() < 0 {
            return Err(LengthError::NegativeRadicand);
        }
        if r.is_zero() {
            return Ok(Self::zero());
        }
        // sqrt(p/q) = sqrt(p q) / q
        let pq: BigInt = r.numer() * r.denom();
        let n = pq
            .to_u64()
            .ok_or_else(|| LengthError::RadicandTooLarge(pq.to_string()))?;
        let (s, m) = square_free_decomposition(n);
        let coeff = Rational::from_big(num_rational::BigRational::new(
            BigInt::from(s),
            r.denom(),
        ));
        if m == 1 {
            Ok(Self::rational(coeff))
        } else {
            Ok(Length {
                rational: Rational::zero(),
                surd: coeff,
                radicand: m,
            })
        }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rational
    }

    pub fn surd_part(&self) -> &Rational {
        &self.surd
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.radicand == 1
    }

    pub fn to_f64(&self) -> f64 {
        self.rational.to_f64() + self.surd.to_f64() * (self.radicand as f64).sqrt()
    }

    pub fn checked_add(&self, other: &Length) -> Result<Length, LengthError> {
        let radicand = match (self.radicand, other.radicand) {
            (1, r) | (r, 1) => r,
            (a, b) if a == b => a,
            (a, b) => return Err(LengthError::MixedRadicands(a, b)),
        };
        let surd = &self.surd + &other.surd;
        Ok(Length {
            rational: &self.rational + &other.rational,
            radicand: if surd.is_zero() { 1 } else { radicand },
            surd,
        })
    }

    pub fn checked_sub(&self, other: &Length) -> Result<Length, LengthError> {
        self.checked_add(&other.negated())
    }

    pub fn negated(&self) -> Length {
        Length {
            rational: -&self.rational,
            surd: -&self.surd,
            radicand: self.radicand,
        }
    }

    pub fn scaled(&self, k: i64) -> Length {
        let k = Rational::from_int(k);
        let surd = &self.surd * &k;
        Length {
            rational: &self.rational * &k,
            radicand: if surd.is_zero() { 1 } else { self.radicand },
            surd,
        }
    }

    /// Exact sign of the value.
    pub fn signum(&self) -> i32 {
        let sx = self.rational.signum();
        let sy = self.surd.signum();
        if sy == 0 {
            return sx;
        }
        if sx == 0 || sx == sy {
            return sy;
        }
        // opposite signs: compare x^2 with y^2 n
        let x2 = &self.rational * &self.rational;
        let y2n = &(&self.surd * &self.surd) * &Rational::from_int(self.radicand as i64);
        match x2.cmp(&y2n) {
            Ordering::Greater => sx,
            Ordering::Less => sy,
            Ordering::Equal => 0,
        }
    }

    /// Exact comparison with a rational.
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        let diff = Length {
            rational: &self.rational - r,
            surd: self.surd.clone(),
            radicand: self.radicand,
        };
        diff.signum().cmp(&0)
    }
}

impl PartialOrd for Length {
    /// `None` only when the two values live in different quadratic fields.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.checked_sub(other).ok().map(|d| d.signum().cmp(&0))
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.surd.is_zero() {
            return write!(f, "{}", self.rational);
        }
        let surd_term = |f: &mut fmt::Formatter<'_>, c: &Rational| {
            if c.is_one() {
                write!(f, "sqrt({})", self.radicand)
            } else {
                write!(f, "{}*sqrt({})", c, self.radicand)
            }
        };
        if self.rational.is_zero() {
            if self.surd.signum() < 0 {
                write!(f, "-")?;
            }
            return surd_term(f, &self.surd.abs());
        }
        write!(f, "{}", self.rational)?;
        write!(f, "{}", if self.surd.signum() < 0 { "-" } else { "+" })?;
        surd_term(f, &self.surd.abs())
    }
}

impl fmt::Debug for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (~{:.6})", self.to_f64())
    }
}

impl FromStr for Length {
    type Err = LengthError;

    /// Accepts sums of rationals and `[c*]sqrt(r)` terms, e.g. `2`, `3/2`,
    /// `sqrt(13)`, `1+2*sqrt(5)`, `1/2*sqrt(3/4)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || LengthError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        // split at top-level +/- (not inside parentheses, not leading)
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut depth = 0i32;
        let mut current = String::new();
        let mut negative = false;
        for (i, ch) in compact.chars().enumerate() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            let prev_is_slash_or_star = current.ends_with('/') || current.ends_with('*');
            if (ch == '+' || ch == '-') && depth == 0 && !prev_is_slash_or_star {
                if i == 0 {
                    negative = ch == '-';
                    continue;
                }
                terms.push((negative, std::mem::take(&mut current)));
                negative = ch == '-';
                continue;
            }
            current.push(ch);
        }
        terms.push((negative, current));

        let mut total = Length::zero();
        for (neg, term) in terms {
            if term.is_empty() {
                return Err(err());
            }
            let value = if let Some(pos) = term.find("sqrt(") {
                if !term.ends_with(')') {
                    return Err(err());
                }
                let coeff = match &term[..pos] {
                    "" => Rational::one(),
                    c => c
                        .strip_suffix('*')
                        .ok_or_else(err)?
                        .parse::<Rational>()
                        .map_err(|_| err())?,
                };
                let inner: Rational = term[pos + 5..term.len() - 1].parse().map_err(|_| err())?;
                let root = Length::sqrt_of(&inner)?;
                Length {
                    rational: &root.rational * &coeff,
                    surd: &root.surd * &coeff,
                    radicand: root.radicand,
                }
            } else {
                Length::rational(term.parse().map_err(|_| err())?)
            };
            let value = if neg { value.negated() } else { value };
            total = total.checked_add(&value)?;
        }
        Ok(total)
    }
}

impl serde::Serialize for Length {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Length {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(Length::from_int(n)),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl Zero for Length {
    fn zero() -> Self {
        Length::zero()
    }
    fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surd.is_zero()
    }
}

impl std::ops::Add for Length {
    type Output = Length;
    /// Panics on mixed radicands; use [`Length::checked_add`] for untrusted input.
    fn add(self, rhs: Length) -> Length {
        self.checked_add(&rhs).expect("lengths from different quadratic fields")
    }
}

impl One for Length {
    fn one() -> Self {
        Length::from_int(1)
    }
}

impl std::ops::Mul for Length {
    type Output = Length;
    fn mul(self, rhs: Length) -> Length {
        assert!(
            self.is_rational() || rhs.is_rational() || self.radicand == rhs.radicand,
            "product leaves the quadratic field"
        );
        let n = Rational::from_int(self.radicand.max(rhs.radicand) as i64);
        let rational = &(&self.rational * &rhs.rational) + &(&(&self.surd * &rhs.surd) * &n);
        let surd = &(&self.rational * &rhs.surd) + &(&self.surd * &rhs.rational);
        Length {
            rational,
            radicand: if surd.is_zero() { 1 } else { self.radicand.max(rhs.radicand) },
            surd,
        }
    }
}
