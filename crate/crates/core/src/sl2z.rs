//! Exact SL(2,Z) arithmetic and factorization of torus-bundle monodromies
//! into Dehn-twist generator words.
//!
//! The two generators are the twist matrices
//! `L = [[1,0],[1,1]]` and `R = [[1,1],[0,1]]`; together they generate all of
//! SL(2,Z), so every torus-bundle monodromy is a product of such twists.
//! Everything here is unbounded-integer arithmetic; no floating point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Sl2zError {
    #[error("matrix {matrix} has determinant {det}, expected 1")]
    NotUnimodular { matrix: String, det: String },
    #[error("expected a single twist with exponent ±1, got exponent {0}")]
    NotASingleTwist(BigInt),
    #[error("exponent {0} is too large to split into single twists")]
    ExponentTooLarge(BigInt),
    #[error("cannot parse {what} from {text:?}: {reason}")]
    Parse {
        what: &'static str,
        text: String,
        reason: String,
    },
}

/// Exact 2×2 integer matrix with determinant 1 (checked at construction).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl Mat2 {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self, Sl2zError> {
        let det = &a * &d - &b * &c;
        if !det.is_one() {
            return Err(Sl2zError::NotUnimodular {
                matrix: format!("[[{a},{b}],[{c},{d}]]"),
                det: det.to_string(),
            });
        }
        Ok(Mat2 { a, b, c, d })
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self, Sl2zError> {
        Mat2::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Mat2 {
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn mul(&self, other: &Mat2) -> Mat2 {
        // det is multiplicative, so the invariant is preserved without a recheck
        Mat2 {
            a: &self.a * &other.a + &self.b * &other.c,
            b: &self.a * &other.b + &self.b * &other.d,
            c: &self.c * &other.a + &self.d * &other.c,
            d: &self.c * &other.b + &self.d * &other.d,
        }
    }

    /// Inverse in SL(2,Z): `[[d,-b],[-c,a]]`.
    pub fn inverse(&self) -> Mat2 {
        Mat2 {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    /// Parses the CLI text form: four integers `a b c d`, whitespace separated.
    pub fn parse_text(text: &str) -> Result<Self, Sl2zError> {
        let parts: Vec<&str> = text.split_whitespace().collect();
        if parts.len() != 4 {
            return Err(Sl2zError::Parse {
                what: "matrix",
                text: text.to_string(),
                reason: format!("expected 4 integers, found {}", parts.len()),
            });
        }
        let mut vals = Vec::with_capacity(4);
        for p in &parts {
            let v = BigInt::from_str(p).map_err(|e| Sl2zError::Parse {
                what: "matrix",
                text: text.to_string(),
                reason: e.to_string(),
            })?;
            vals.push(v);
        }
        let (a, b) = (vals.remove(0), vals.remove(0));
        let (c, d) = (vals.remove(0), vals.remove(0));
        Mat2::new(a, b, c, d)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

// Plan files store matrices as four decimal strings so entries are not
// limited by JSON number precision.
impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let strings = [
            self.a.to_string(),
            self.b.to_string(),
            self.c.to_string(),
            self.d.to_string(),
        ];
        strings.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Mat2 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let strings = <[String; 4]>::deserialize(deserializer)?;
        let mut vals = Vec::with_capacity(4);
        for s in &strings {
            vals.push(BigInt::from_str(s).map_err(DeError::custom)?);
        }
        let (a, b) = (vals.remove(0), vals.remove(0));
        let (c, d) = (vals.remove(0), vals.remove(0));
        Mat2::new(a, b, c, d).map_err(DeError::custom)
    }
}

/// The two twist generators of SL(2,Z).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TorusGen {
    L,
    R,
}

impl TorusGen {
    /// `L^e = [[1,0],[e,1]]`, `R^e = [[1,e],[0,1]]`.
    pub fn power(self, e: &BigInt) -> Mat2 {
        match self {
            TorusGen::L => Mat2 {
                a: BigInt::one(),
                b: BigInt::zero(),
                c: e.clone(),
                d: BigInt::one(),
            },
            TorusGen::R => Mat2 {
                a: BigInt::one(),
                b: e.clone(),
                c: BigInt::zero(),
                d: BigInt::one(),
            },
        }
    }

    fn letter(self) -> char {
        match self {
            TorusGen::L => 'L',
            TorusGen::R => 'R',
        }
    }
}

/// One signed twist letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorusLetter {
    pub generator: TorusGen,
    pub exponent: BigInt,
}

impl TorusLetter {
    pub fn new(generator: TorusGen, exponent: i64) -> Self {
        TorusLetter {
            generator,
            exponent: exponent.into(),
        }
    }
}

/// Word in the twist generators. Adjacent letters with the same generator are
/// merged and zero exponents dropped, so the stored form is canonical for the
/// free product structure (not for SL(2,Z) itself).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TorusTwistWord {
    letters: Vec<TorusLetter>,
}

impl TorusTwistWord {
    pub fn empty() -> Self {
        TorusTwistWord::default()
    }

    pub fn single(generator: TorusGen, exponent: i64) -> Self {
        let mut w = TorusTwistWord::empty();
        w.push(generator, exponent.into());
        w
    }

    pub fn from_letters<I>(letters: I) -> Self
    where
        I: IntoIterator<Item = TorusLetter>,
    {
        let mut w = TorusTwistWord::empty();
        for l in letters {
            w.push(l.generator, l.exponent);
        }
        w
    }

    fn push(&mut self, generator: TorusGen, exponent: BigInt) {
        if exponent.is_zero() {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.generator == generator {
                last.exponent += exponent;
                if last.exponent.is_zero() {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push(TorusLetter {
            generator,
            exponent,
        });
    }

    pub fn letters(&self) -> &[TorusLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Left-to-right product of the generator matrices; the empty word is the
    /// identity. Concatenation of words multiplies the results.
    pub fn evaluate(&self) -> Mat2 {
        let mut m = Mat2::identity();
        for l in &self.letters {
            m = m.mul(&l.generator.power(&l.exponent));
        }
        m
    }

    pub fn inverse(&self) -> Self {
        let mut w = TorusTwistWord::empty();
        for l in self.letters.iter().rev() {
            w.push(l.generator, -l.exponent.clone());
        }
        w
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut w = self.clone();
        for l in &other.letters {
            w.push(l.generator, l.exponent.clone());
        }
        w
    }

    /// Splits into single twists with exponent ±1, leftmost first. The total
    /// twist count is capped to keep downstream plans at a sane size.
    pub fn split_single(&self) -> Result<Vec<TorusLetter>, Sl2zError> {
        const MAX_TWISTS: u64 = 4096;
        let mut out = Vec::new();
        for l in &self.letters {
            let count = l
                .exponent
                .abs()
                .to_u64_digits()
                .1
                .first()
                .copied()
                .unwrap_or(0);
            if l.exponent.abs() > BigInt::from(MAX_TWISTS) || out.len() as u64 + count > MAX_TWISTS
            {
                return Err(Sl2zError::ExponentTooLarge(l.exponent.clone()));
            }
            let step: BigInt = if l.exponent.is_positive() {
                BigInt::one()
            } else {
                -BigInt::one()
            };
            for _ in 0..count {
                out.push(TorusLetter {
                    generator: l.generator,
                    exponent: step.clone(),
                });
            }
        }
        Ok(out)
    }

    /// Parses the text form `L`, `R^-3`, letters separated by `.`.
    pub fn parse_text(text: &str) -> Result<Self, Sl2zError> {
        let trimmed = text.trim();
        let mut w = TorusTwistWord::empty();
        if trimmed.is_empty() {
            return Ok(w);
        }
        for token in trimmed.split('.') {
            let token = token.trim();
            let (gen_part, exp_part) = match token.split_once('^') {
                Some((g, e)) => (g, Some(e)),
                None => (token, None),
            };
            let generator = match gen_part {
                "L" => TorusGen::L,
                "R" => TorusGen::R,
                other => {
                    return Err(Sl2zError::Parse {
                        what: "torus word",
                        text: text.to_string(),
                        reason: format!("unknown generator {other:?}"),
                    })
                }
            };
            let exponent = match exp_part {
                Some(e) => BigInt::from_str(e).map_err(|err| Sl2zError::Parse {
                    what: "torus word",
                    text: text.to_string(),
                    reason: err.to_string(),
                })?,
                None => BigInt::one(),
            };
            w.push(generator, exponent);
        }
        Ok(w)
    }
}

impl fmt::Display for TorusTwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in &self.letters {
            if !first {
                write!(f, ".")?;
            }
            first = false;
            if l.exponent.is_one() {
                write!(f, "{}", l.generator.letter())?;
            } else {
                write!(f, "{}^{}", l.generator.letter(), l.exponent)?;
            }
        }
        Ok(())
    }
}

impl Serialize for TorusTwistWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TorusTwistWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        TorusTwistWord::parse_text(&s).map_err(DeError::custom)
    }
}

/// Fixed word for `-I`: `(R·L⁻¹·R)² = -I`, stored in merged form.
fn negative_identity_word() -> TorusTwistWord {
    let mut w = TorusTwistWord::empty();
    for (g, e) in [
        (TorusGen::R, 1),
        (TorusGen::L, -1),
        (TorusGen::R, 1),
        (TorusGen::R, 1),
        (TorusGen::L, -1),
        (TorusGen::R, 1),
    ] {
        w.push(g, e.into());
    }
    w
}

/// Factors a determinant-1 matrix into a twist word with
/// `factor(m).evaluate() == m` exactly.
///
/// Column-wise Euclidean reduction: an `L^q` letter records a row operation
/// clearing the lower-left entry modulo the upper-left one, an `R^q` letter
/// the transposed operation. `-I` is emitted as a fixed word so the map is
/// total on SL(2,Z). The letter count is O(log max|entry|) plus a constant.
pub fn factor(m: &Mat2) -> TorusTwistWord {
    let mut w = TorusTwistWord::empty();
    let (mut a, mut b, mut c, mut d) = (m.a.clone(), m.b.clone(), m.c.clone(), m.d.clone());

    // Invariant: original = eval(w) · [[a,b],[c,d]].
    while !c.is_zero() {
        if a.is_zero() {
            // det = -bc = 1 forces c = ±1; one R-move makes a = 1
            let q = -c.clone();
            a -= &q * &c;
            b -= &q * &d;
            w.push(TorusGen::R, q);
        } else if a.abs() > c.abs() {
            let q = a.div_floor(&c);
            a -= &q * &c;
            b -= &q * &d;
            w.push(TorusGen::R, q);
        } else {
            let q = c.div_floor(&a);
            c -= &q * &a;
            d -= &q * &b;
            w.push(TorusGen::L, q);
        }
    }

    // c = 0 and det = 1, so a = d = ±1
    if !a.is_one() {
        for l in negative_identity_word().letters() {
            w.push(l.generator, l.exponent.clone());
        }
        b = -b;
    }
    if !b.is_zero() {
        w.push(TorusGen::R, b);
    }
    w
}

/// Chirality of a single twist: which power of `L` it is conjugate to.
/// Serialized as the integer sign `1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chirality {
    Plus,
    Minus,
}

impl Serialize for Chirality {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_i8(self.sign() as i8)
    }
}

impl<'de> Deserialize<'de> for Chirality {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match i8::deserialize(deserializer)? {
            1 => Ok(Chirality::Plus),
            -1 => Ok(Chirality::Minus),
            other => Err(DeError::custom(format!(
                "chirality must be 1 or -1, got {other}"
            ))),
        }
    }
}

impl Chirality {
    pub fn sign(self) -> i64 {
        match self {
            Chirality::Plus => 1,
            Chirality::Minus => -1,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Chirality::Plus => Chirality::Minus,
            Chirality::Minus => Chirality::Plus,
        }
    }

    /// The reference single-twist matrix `L^±1` for this chirality.
    pub fn reference_twist(self) -> Mat2 {
        TorusGen::L.power(&BigInt::from(self.sign()))
    }
}

impl fmt::Display for Chirality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Chirality::Plus => write!(f, "+1"),
            Chirality::Minus => write!(f, "-1"),
        }
    }
}

/// Conjugation data for a single twist letter.
pub struct SingleTwistClass {
    pub chirality: Chirality,
    /// Word `c` with `eval(c)·eval(letter)·eval(c)⁻¹ = L^chirality`.
    pub conjugator: TorusTwistWord,
}

/// Classifies a single twist letter up to conjugacy. The table is finite:
/// `L^±1` is its own class, and `R^±1` is conjugated into `L^∓1` by the word
/// `S = R·L⁻¹·R` (a standard quarter-turn conjugacy).
pub fn single_twist_class(letter: &TorusLetter) -> Result<SingleTwistClass, Sl2zError> {
    if letter.exponent.abs() != BigInt::one() {
        return Err(Sl2zError::NotASingleTwist(letter.exponent.clone()));
    }
    let positive = letter.exponent.is_one();
    let class = match (letter.generator, positive) {
        (TorusGen::L, true) => SingleTwistClass {
            chirality: Chirality::Plus,
            conjugator: TorusTwistWord::empty(),
        },
        (TorusGen::L, false) => SingleTwistClass {
            chirality: Chirality::Minus,
            conjugator: TorusTwistWord::empty(),
        },
        (TorusGen::R, true) => SingleTwistClass {
            chirality: Chirality::Minus,
            conjugator: quarter_turn_word(),
        },
        (TorusGen::R, false) => SingleTwistClass {
            chirality: Chirality::Plus,
            conjugator: quarter_turn_word(),
        },
    };
    Ok(class)
}

fn quarter_turn_word() -> TorusTwistWord {
    TorusTwistWord::from_letters([
        TorusLetter::new(TorusGen::R, 1),
        TorusLetter::new(TorusGen::L, -1),
        TorusLetter::new(TorusGen::R, 1),
    ])
}
