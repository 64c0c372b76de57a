//! Exact involutive commutative rings and finite groups of global phases.
//!
//! Three carriers are supported: Gaussian rationals `Q[i]` (with either complex
//! conjugation or the identity as involution), prime fields `F_p`, and the
//! integers. All arithmetic is exact.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matcat::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("{0} is not invertible")]
    NonInvertible(String),
    #[error("scalar {scalar} does not belong to ring {ring}")]
    RingMismatch { ring: String, scalar: String },
    #[error("cannot parse scalar {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("involution {involution} is not available on {kind}")]
    UnsupportedInvolution { kind: String, involution: String },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("phase group is not closed: {a} * {b} = {product} is missing")]
    NotClosed { a: String, b: String, product: String },
    #[error("phase group does not contain 1")]
    MissingIdentity,
    #[error("phase group element {0} is not invertible")]
    NonInvertibleElement(String),
    #[error("phase group lacks the inverse {inverse} of {element}")]
    MissingInverse { element: String, inverse: String },
    #[error("phase group lists {0} twice")]
    Duplicate(String),
    #[error("phase group is not closed under the involution: {element}† = {image} is missing")]
    NotDaggerClosed { element: String, image: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingKind {
    GaussianRational,
    PrimeField(u64),
    Integer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Involution {
    Conjugation,
    Identity,
}

/// An involutive commutative ring descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ring {
    kind: RingKind,
    involution: Involution,
}

/// An exact ring element. Which ring it lives in is tracked by the caller
/// (a [`Ring`] or a [`Matrix`]); the variant only fixes the carrier.
///
/// The derived order is the total order used for canonical forms:
/// Gaussian rationals compare lexicographically on `(re, im)`, residues by
/// their representative in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Gaussian { re: BigRational, im: BigRational },
    Residue { value: u64, modulus: u64 },
    Integer(BigInt),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_pow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1u128;
    let m = modulus as u128;
    let mut b = (base % modulus) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    base = acc as u64;
    base
}

impl Ring {
    pub fn new(kind: RingKind, involution: Involution) -> Result<Self, ScalarError> {
        match (kind, involution) {
            (RingKind::PrimeField(p), _) if !is_prime(p) => Err(ScalarError::NotPrime(p)),
            (RingKind::GaussianRational, _) | (_, Involution::Identity) => Ok(Ring { kind, involution }),
            (kind, involution) => Err(ScalarError::UnsupportedInvolution {
                kind: format!("{kind:?}"),
                involution: format!("{involution:?}"),
            }),
        }
    }

    /// `Q[i]` with complex conjugation.
    pub fn gaussian() -> Self {
        Ring { kind: RingKind::GaussianRational, involution: Involution::Conjugation }
    }

    /// `Q[i]` with the trivial involution `z† = z`.
    pub fn gaussian_trivial() -> Self {
        Ring { kind: RingKind::GaussianRational, involution: Involution::Identity }
    }

    pub fn prime_field(p: u64) -> Result<Self, ScalarError> {
        Ring::new(RingKind::PrimeField(p), Involution::Identity)
    }

    pub fn integers() -> Self {
        Ring { kind: RingKind::Integer, involution: Involution::Identity }
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn involution(&self) -> Involution {
        self.involution
    }

    pub fn is_field(&self) -> bool {
        !matches!(self.kind, RingKind::Integer)
    }

    pub fn zero(&self) -> Scalar {
        self.from_int(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        match self.kind {
            RingKind::GaussianRational => Scalar::Gaussian {
                re: BigRational::from_integer(BigInt::from(n)),
                im: BigRational::zero(),
            },
            RingKind::PrimeField(p) => Scalar::Residue { value: n.rem_euclid(p as i64) as u64, modulus: p },
            RingKind::Integer => Scalar::Integer(BigInt::from(n)),
        }
    }

    /// The Gaussian rational `re + im·i`. Panics on non-Gaussian rings.
    pub fn gaussian_from(&self, re: BigRational, im: BigRational) -> Scalar {
        assert_eq!(self.kind, RingKind::GaussianRational, "gaussian_from on {self}");
        Scalar::Gaussian { re, im }
    }

    /// The imaginary unit; `None` outside `Q[i]`.
    pub fn imaginary_unit(&self) -> Option<Scalar> {
        match self.kind {
            RingKind::GaussianRational => Some(Scalar::Gaussian { re: BigRational::zero(), im: BigRational::one() }),
            _ => None,
        }
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        match (self.kind, s) {
            (RingKind::GaussianRational, Scalar::Gaussian { .. }) => true,
            (RingKind::PrimeField(p), Scalar::Residue { value, modulus }) => *modulus == p && *value < p,
            (RingKind::Integer, Scalar::Integer(_)) => true,
            _ => false,
        }
    }

    pub fn check(&self, s: &Scalar) -> Result<(), ScalarError> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(ScalarError::RingMismatch { ring: self.to_string(), scalar: s.to_string() })
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, ScalarError> {
        self.check(a)?;
        self.check(b)?;
        Ok(a.add_raw(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, ScalarError> {
        self.check(a)?;
        self.check(b)?;
        Ok(a.mul_raw(b))
    }

    pub fn neg(&self, a: &Scalar) -> Result<Scalar, ScalarError> {
        self.check(a)?;
        Ok(a.neg_raw())
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, ScalarError> {
        self.check(a)?;
        self.check(b)?;
        Ok(a.add_raw(&b.neg_raw()))
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar, ScalarError> {
        self.check(a)?;
        a.inv_raw().ok_or_else(|| ScalarError::NonInvertible(a.to_string()))
    }

    pub fn involute(&self, a: &Scalar) -> Result<Scalar, ScalarError> {
        self.check(a)?;
        Ok(self.involute_raw(a))
    }

    pub(crate) fn involute_raw(&self, a: &Scalar) -> Scalar {
        match (self.involution, a) {
            (Involution::Conjugation, Scalar::Gaussian { re, im }) => Scalar::Gaussian { re: re.clone(), im: -im },
            _ => a.clone(),
        }
    }

    /// `u† · u == 1`.
    pub fn is_unitary(&self, u: &Scalar) -> bool {
        self.contains(u) && self.involute_raw(u).mul_raw(u).is_one()
    }

    pub fn parse_scalar(&self, input: &str) -> Result<Scalar, ScalarError> {
        let err = |reason: &str| ScalarError::Parse { input: input.to_string(), reason: reason.to_string() };
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty"));
        }
        match self.kind {
            RingKind::GaussianRational => parse_gaussian(&s).ok_or_else(|| err("expected a+bi with rational a, b")),
            RingKind::PrimeField(p) => {
                let n: BigInt = s.parse().map_err(|_| err("expected an integer residue"))?;
                let r = n.mod_floor_u64(p);
                Ok(Scalar::Residue { value: r, modulus: p })
            }
            RingKind::Integer => s.parse::<BigInt>().map(Scalar::Integer).map_err(|_| err("expected an integer")),
        }
    }

    /// Every invertible element, when the ring is finite.
    pub fn units(&self) -> Option<Vec<Scalar>> {
        match self.kind {
            RingKind::PrimeField(p) => Some((1..p).map(|v| Scalar::Residue { value: v, modulus: p }).collect()),
            _ => None,
        }
    }

    /// Elements of height at most `bound`, in a fixed order: by height, reals
    /// before imaginaries before mixed values, positive before negative.
    /// Finite fields ignore the bound and return every residue.
    pub fn elements_up_to_height(&self, bound: u32) -> Vec<Scalar> {
        match self.kind {
            RingKind::PrimeField(p) => (0..p).map(|v| Scalar::Residue { value: v, modulus: p }).collect(),
            RingKind::Integer => {
                let mut out = vec![self.zero()];
                for h in 1..=bound as i64 {
                    out.push(self.from_int(h));
                    out.push(self.from_int(-h));
                }
                out
            }
            RingKind::GaussianRational => {
                let mut out = Vec::new();
                let mut seen = std::collections::HashSet::new();
                for h in 0..=bound as i64 {
                    let mut reals = Vec::new();
                    for q in 1..=h.max(1) {
                        for n in -h..=h {
                            let r = BigRational::new(BigInt::from(n), BigInt::from(q));
                            if rational_height(&r) == h {
                                reals.push(r);
                            }
                        }
                    }
                    reals.sort_by(|a, b| (a.is_negative(), a.abs()).cmp(&(b.is_negative(), b.abs())));
                    reals.dedup();
                    let mut all_parts: Vec<BigRational> = Vec::new();
                    for q in 1..=h.max(1) {
                        for n in -h..=h {
                            let r = BigRational::new(BigInt::from(n), BigInt::from(q));
                            if rational_height(&r) <= h {
                                all_parts.push(r);
                            }
                        }
                    }
                    all_parts.sort_by(|a, b| (a.abs(), a.is_negative()).cmp(&(b.abs(), b.is_negative())));
                    all_parts.dedup();
                    let mut push = |re: BigRational, im: BigRational| {
                        let s = Scalar::Gaussian { re, im };
                        if seen.insert(s.clone()) {
                            out.push(s);
                        }
                    };
                    for r in &reals {
                        push(r.clone(), BigRational::zero());
                    }
                    for r in &reals {
                        push(BigRational::zero(), r.clone());
                    }
                    for a in &all_parts {
                        for b in &all_parts {
                            if a.is_zero() || b.is_zero() {
                                continue;
                            }
                            if rational_height(a).max(rational_height(b)) == h {
                                push(a.clone(), b.clone());
                            }
                        }
                    }
                }
                out
            }
        }
    }
}

fn rational_height(r: &BigRational) -> i64 {
    let n = r.numer().abs().to_i64().unwrap_or(i64::MAX);
    let d = r.denom().to_i64().unwrap_or(i64::MAX);
    if n == 0 {
        0
    } else {
        n.max(d)
    }
}

trait ModFloor {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloor for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        let m = BigInt::from(p);
        let r = ((self % &m) + &m) % &m;
        r.to_u64().expect("residue fits")
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

fn parse_gaussian(s: &str) -> Option<Scalar> {
    let Some(body) = s.strip_suffix('i') else {
        return Some(Scalar::Gaussian { re: parse_rational(s)?, im: BigRational::zero() });
    };
    // split at the last sign that is not leading
    let split = body.char_indices().skip(1).filter(|(_, c)| *c == '+' || *c == '-').map(|(i, _)| i).last();
    let (re_part, im_part) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("", body),
    };
    let re = if re_part.is_empty() { BigRational::zero() } else { parse_rational(re_part)? };
    let im = match im_part {
        "" | "+" => BigRational::one(),
        "-" => -BigRational::one(),
        other => parse_rational(other.strip_prefix('+').unwrap_or(other))?,
    };
    Some(Scalar::Gaussian { re, im })
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Gaussian { re, im } => re.is_zero() && im.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
            Scalar::Integer(n) => n.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Gaussian { re, im } => re.is_one() && im.is_zero(),
            Scalar::Residue { value, .. } => *value == 1,
            Scalar::Integer(n) => n.is_one(),
        }
    }

    fn zero_like(&self) -> Scalar {
        match self {
            Scalar::Gaussian { .. } => Scalar::Gaussian { re: BigRational::zero(), im: BigRational::zero() },
            Scalar::Residue { modulus, .. } => Scalar::Residue { value: 0, modulus: *modulus },
            Scalar::Integer(_) => Scalar::Integer(BigInt::zero()),
        }
    }

    pub(crate) fn add_raw(&self, other: &Scalar) -> Scalar {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        match (self, other) {
            (Scalar::Gaussian { re: a, im: b }, Scalar::Gaussian { re: c, im: d }) => {
                Scalar::Gaussian { re: a + c, im: b + d }
            }
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue { value: ((*a as u128 + *b as u128) % *p as u128) as u64, modulus: *p }
            }
            (Scalar::Integer(a), Scalar::Integer(b)) => Scalar::Integer(a + b),
            _ => panic!("mixed-carrier addition {self} + {other}"),
        }
    }

    pub(crate) fn mul_raw(&self, other: &Scalar) -> Scalar {
        if self.is_zero() || other.is_zero() {
            return self.zero_like();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        match (self, other) {
            (Scalar::Gaussian { re: a, im: b }, Scalar::Gaussian { re: c, im: d }) => {
                let re = if b.is_zero() || d.is_zero() { a * c } else { a * c - b * d };
                let im = match (a.is_zero() || d.is_zero(), b.is_zero() || c.is_zero()) {
                    (true, true) => BigRational::zero(),
                    (true, false) => b * c,
                    (false, true) => a * d,
                    (false, false) => a * d + b * c,
                };
                Scalar::Gaussian { re, im }
            }
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue { value: ((*a as u128 * *b as u128) % *p as u128) as u64, modulus: *p }
            }
            (Scalar::Integer(a), Scalar::Integer(b)) => Scalar::Integer(a * b),
            _ => panic!("mixed-carrier product {self} * {other}"),
        }
    }

    pub(crate) fn neg_raw(&self) -> Scalar {
        match self {
            Scalar::Gaussian { re, im } => Scalar::Gaussian { re: -re, im: -im },
            Scalar::Residue { value, modulus } => Scalar::Residue { value: (modulus - value) % modulus, modulus: *modulus },
            Scalar::Integer(n) => Scalar::Integer(-n),
        }
    }

    pub(crate) fn inv_raw(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match self {
            Scalar::Gaussian { re, im } => {
                let norm = re * re + im * im;
                Some(Scalar::Gaussian { re: re / &norm, im: -im / &norm })
            }
            Scalar::Residue { value, modulus } => {
                Some(Scalar::Residue { value: mod_pow(*value, modulus - 2, *modulus), modulus: *modulus })
            }
            Scalar::Integer(n) => (n.abs().is_one()).then(|| self.clone()),
        }
    }

    /// Real and imaginary parts, for Gaussian scalars.
    pub fn as_gaussian(&self) -> Option<(&BigRational, &BigRational)> {
        match self {
            Scalar::Gaussian { re, im } => Some((re, im)),
            _ => None,
        }
    }

    /// Height used by generators: max of |numerator| and denominator over parts.
    pub fn height(&self) -> i64 {
        match self {
            Scalar::Gaussian { re, im } => rational_height(re).max(rational_height(im)),
            Scalar::Residue { value, .. } => *value as i64,
            Scalar::Integer(n) => n.abs().to_i64().unwrap_or(i64::MAX),
        }
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Gaussian { re, im } => {
                let imag = |im: &BigRational| -> String {
                    if im.is_one() {
                        "i".to_string()
                    } else if (-im).is_one() {
                        "-i".to_string()
                    } else {
                        format!("{}i", fmt_rational(im))
                    }
                };
                if im.is_zero() {
                    write!(f, "{}", fmt_rational(re))
                } else if re.is_zero() {
                    write!(f, "{}", imag(im))
                } else if im.is_positive() {
                    write!(f, "{}+{}", fmt_rational(re), imag(im))
                } else {
                    write!(f, "{}{}", fmt_rational(re), imag(im))
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
            Scalar::Integer(n) => write!(f, "{n}"),
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            RingKind::GaussianRational => "gaussian".to_string(),
            RingKind::PrimeField(p) => format!("prime:{p}"),
            RingKind::Integer => "integer".to_string(),
        };
        let inv = match self.involution {
            Involution::Conjugation => "conjugation",
            Involution::Identity => "identity",
        };
        write!(f, "{kind}/{inv}")
    }
}

impl FromStr for Ring {
    type Err = ScalarError;

    /// Parses `kind/involution`, e.g. `gaussian/conjugation` or `prime:3/identity`.
    /// The involution defaults to conjugation for `gaussian`, identity otherwise.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, inv) = match s.split_once('/') {
            Some((k, i)) => (k, Some(i)),
            None => (s, None),
        };
        let perr = |reason: &str| ScalarError::Parse { input: s.to_string(), reason: reason.to_string() };
        let kind = parse_ring_kind(kind).ok_or_else(|| perr("unknown ring kind"))?;
        let involution = match inv {
            None if kind == RingKind::GaussianRational => Involution::Conjugation,
            None => Involution::Identity,
            Some(i) => parse_involution(i).ok_or_else(|| perr("unknown involution"))?,
        };
        Ring::new(kind, involution)
    }
}

pub fn parse_ring_kind(s: &str) -> Option<RingKind> {
    match s {
        "gaussian" | "gaussian-rational" => Some(RingKind::GaussianRational),
        "integer" => Some(RingKind::Integer),
        other => {
            let p = other.strip_prefix("prime:").or_else(|| other.strip_prefix("prime-field:"))?;
            p.parse().ok().map(RingKind::PrimeField)
        }
    }
}

pub fn parse_involution(s: &str) -> Option<Involution> {
    match s {
        "conjugation" => Some(Involution::Conjugation),
        "identity" | "trivial" => Some(Involution::Identity),
        _ => None,
    }
}

/// A validated finite group of invertible (central) scalars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseGroup {
    ring: Ring,
    elements: Vec<Scalar>,
    unitary: Vec<bool>,
    inverses: Vec<usize>,
}

/// Checks that `elems` is a finite subgroup of the units of `ring`.
///
/// Centrality is automatic since every supported ring is commutative.
pub fn validate_phase_group(ring: Ring, elems: &[Scalar]) -> Result<PhaseGroup, ScalarError> {
    for e in elems {
        ring.check(e)?;
    }
    for (i, e) in elems.iter().enumerate() {
        if elems[..i].contains(e) {
            return Err(ScalarError::Duplicate(e.to_string()));
        }
    }
    if !elems.iter().any(Scalar::is_one) {
        return Err(ScalarError::MissingIdentity);
    }
    for e in elems {
        if e.inv_raw().is_none() {
            return Err(ScalarError::NonInvertibleElement(e.to_string()));
        }
    }
    for a in elems {
        for b in elems {
            let p = a.mul_raw(b);
            if !elems.contains(&p) {
                return Err(ScalarError::NotClosed { a: a.to_string(), b: b.to_string(), product: p.to_string() });
            }
        }
    }
    let mut inverses = Vec::with_capacity(elems.len());
    for e in elems {
        let inv = e.inv_raw().expect("checked above");
        match elems.iter().position(|x| *x == inv) {
            Some(j) => inverses.push(j),
            None => return Err(ScalarError::MissingInverse { element: e.to_string(), inverse: inv.to_string() }),
        }
    }
    let unitary = elems.iter().map(|u| ring.is_unitary(u)).collect();
    Ok(PhaseGroup { ring, elements: elems.to_vec(), unitary, inverses })
}

impl PhaseGroup {
    /// The trivial group `{1}`.
    pub fn trivial(ring: Ring) -> Self {
        validate_phase_group(ring, &[ring.one()]).expect("{1} is a group")
    }

    /// Parses and validates a list of scalar literals.
    pub fn parse(ring: Ring, literals: &[&str]) -> Result<Self, ScalarError> {
        let elems = literals.iter().map(|s| ring.parse_scalar(s)).collect::<Result<Vec<_>, _>>()?;
        validate_phase_group(ring, &elems)
    }

    /// `{1, i, -1, -i}` in `Q[i]` with the given ring's involution.
    pub fn gaussian_units(ring: Ring) -> Self {
        Self::parse(ring, &["1", "i", "-1", "-i"]).expect("fourth roots of unity form a group")
    }

    /// All units of a finite ring, i.e. `Aut(I)` in `Mat_S`.
    pub fn all_units(ring: Ring) -> Option<Self> {
        ring.units().map(|u| validate_phase_group(ring, &u).expect("units form a group"))
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn elements(&self) -> &[Scalar] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        self.elements.contains(s)
    }

    pub fn index_of(&self, s: &Scalar) -> Option<usize> {
        self.elements.iter().position(|x| x == s)
    }

    pub fn inverse_of(&self, index: usize) -> &Scalar {
        &self.elements[self.inverses[index]]
    }

    pub fn is_unitary(&self, index: usize) -> bool {
        self.unitary[index]
    }

    pub fn all_unitary(&self) -> bool {
        self.unitary.iter().all(|u| *u)
    }

    /// Whether `p† ∈ ℙ` for every `p ∈ ℙ`.
    pub fn check_dagger_closed(&self) -> Result<(), ScalarError> {
        for p in &self.elements {
            let image = self.ring.involute_raw(p);
            if !self.contains(&image) {
                return Err(ScalarError::NotDaggerClosed { element: p.to_string(), image: image.to_string() });
            }
        }
        Ok(())
    }

    /// Human readable label, e.g. `gaussian/conjugation{1,i,-1,-i}`.
    pub fn label(&self) -> String {
        let elems: Vec<String> = self.elements.iter().map(|e| e.to_string()).collect();
        format!("{}{{{}}}", self.ring, elems.join(","))
    }

    /// A fingerprint identifying the group independently of element order.
    pub fn fingerprint(&self) -> u64 {
        let mut sorted = self.elements.clone();
        sorted.sort();
        let mut h = DefaultHasher::new();
        self.ring.hash(&mut h);
        sorted.hash(&mut h);
        h.finish()
    }
}

/// The sublist of `candidates` satisfying `u† · u = 1`.
pub fn unitary_scalars(ring: Ring, candidates: &[Scalar]) -> Vec<Scalar> {
    candidates.iter().filter(|u| ring.is_unitary(u)).cloned().collect()
}

/// Outcome of a bounded search for `G` with `G† ∘ G = target`.
///
/// `Holds` means the target is provably not positive.
#[derive(Debug, Clone, PartialEq)]
pub enum PositivityVerdict {
    Holds,
    Refuted { witness: Matrix },
    Unknown { bound: u32 },
}

const POSITIVE_SEARCH_LIMIT: f64 = 5.0e6;

/// Searches for a witness `G : n → k` (`k ≤ n`) with `G† ∘ G = target` and
/// entries of height at most `bound`.
///
/// Over `Q[i]` with conjugation the diagonal of `G† G` consists of sums of
/// squared moduli, so a target that is not Hermitian or has a diagonal entry
/// outside the nonnegative rationals is rejected without search.
pub fn bounded_positive_witness(ring: Ring, target: &Matrix, bound: u32) -> PositivityVerdict {
    let n = target.rows();
    if target.cols() != n || target.ring() != ring {
        return PositivityVerdict::Holds;
    }
    if ring.kind() == RingKind::GaussianRational && ring.involution() == Involution::Conjugation {
        let hermitian = target.dagger() == *target;
        let diag_ok = (0..n).all(|j| {
            let (re, im) = target.get(j, j).as_gaussian().expect("gaussian entries");
            im.is_zero() && !re.is_negative()
        });
        if !hermitian || !diag_ok {
            return PositivityVerdict::Holds;
        }
    }
    if target.is_identity() {
        return PositivityVerdict::Refuted { witness: Matrix::identity(ring, n) };
    }
    if n == 0 {
        return PositivityVerdict::Refuted { witness: Matrix::zeros(ring, 0, 0) };
    }
    let candidates = ring.elements_up_to_height(bound);
    for k in 1..=n {
        let space = (candidates.len() as f64).powi(k as i32);
        if space > POSITIVE_SEARCH_LIMIT {
            break;
        }
        // column j of G is a vector in S^k with c_j† c_l = target[j][l]
        let columns: Vec<Vec<Scalar>> = product_vectors(&candidates, k);
        let mut chosen: Vec<usize> = Vec::with_capacity(n);
        if search_columns(ring, target, &columns, &mut chosen) {
            let mut g = Matrix::zeros(ring, k, n);
            for (j, &c) in chosen.iter().enumerate() {
                for (i, v) in columns[c].iter().enumerate() {
                    g.set(i, j, v.clone());
                }
            }
            debug_assert_eq!(g.dagger().compose(&g).ok().as_ref(), Some(target));
            return PositivityVerdict::Refuted { witness: g };
        }
    }
    PositivityVerdict::Unknown { bound }
}

fn product_vectors(candidates: &[Scalar], k: usize) -> Vec<Vec<Scalar>> {
    let mut out: Vec<Vec<Scalar>> = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * candidates.len());
        for v in &out {
            for c in candidates {
                let mut w = v.clone();
                w.push(c.clone());
                next.push(w);
            }
        }
        out = next;
    }
    out
}

fn inner(ring: Ring, a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).fold(ring.zero(), |acc, (x, y)| acc.add_raw(&ring.involute_raw(x).mul_raw(y)))
}

fn search_columns(ring: Ring, target: &Matrix, columns: &[Vec<Scalar>], chosen: &mut Vec<usize>) -> bool {
    let j = chosen.len();
    if j == target.cols() {
        return true;
    }
    for (idx, c) in columns.iter().enumerate() {
        if inner(ring, c, c) != *target.get(j, j) {
            continue;
        }
        let consistent = chosen.iter().enumerate().all(|(l, &prev)| {
            let p = &columns[prev];
            inner(ring, p, c) == *target.get(l, j) && inner(ring, c, p) == *target.get(j, l)
        });
        if consistent {
            chosen.push(idx);
            if search_columns(ring, target, columns, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> Scalar {
        Ring::gaussian().parse_scalar(s).unwrap()
    }

    #[test]
    fn conjugation_negates_imaginary_part() {
        assert_eq!(Ring::gaussian().involute(&g("i")).unwrap(), g("-i"));
    }

    #[test]
    fn trivial_involution_fixes_i() {
        let r = Ring::gaussian_trivial();
        assert_eq!(r.involute(&g("i")).unwrap(), g("i"));
    }

    #[test]
    fn inverse_in_f3() {
        let f3 = Ring::prime_field(3).unwrap();
        let two = f3.from_int(2);
        assert_eq!(f3.inv(&two).unwrap(), two);
        assert!(matches!(f3.inv(&f3.zero()), Err(ScalarError::NonInvertible(_))));
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let f3 = Ring::prime_field(3).unwrap();
        assert!(matches!(f3.add(&f3.one(), &g("1")), Err(ScalarError::RingMismatch { .. })));
    }

    #[test]
    fn parse_and_display_roundtrip() {
        for s in ["0", "1", "-1", "i", "-i", "1/2", "3+4i", "1/2-3/4i", "-2/3i", "2-i"] {
            assert_eq!(g(s).to_string(), s, "literal {s}");
        }
        assert_eq!(g("i") , Scalar::Gaussian { re: BigRational::zero(), im: BigRational::one() });
        assert!(Ring::gaussian().parse_scalar("1+").is_err());
        assert!(Ring::gaussian().parse_scalar("1/0").is_err());
    }

    #[test]
    fn gaussian_inverse() {
        let r = Ring::gaussian();
        let z = g("3+4i");
        let zi = r.inv(&z).unwrap();
        assert!(r.mul(&z, &zi).unwrap().is_one());
        assert_eq!(zi, g("3/25-4/25i"));
    }

    #[test]
    fn conjugation_on_prime_field_is_rejected() {
        assert!(Ring::new(RingKind::PrimeField(3), Involution::Conjugation).is_err());
        assert!(matches!(Ring::prime_field(4), Err(ScalarError::NotPrime(4))));
    }

    #[test]
    fn fourth_roots_form_unitary_group() {
        let p = PhaseGroup::gaussian_units(Ring::gaussian());
        assert_eq!(p.len(), 4);
        assert!(p.all_unitary());
        assert!(p.check_dagger_closed().is_ok());
    }

    #[test]
    fn trivial_group_validates() {
        assert_eq!(PhaseGroup::trivial(Ring::gaussian()).len(), 1);
    }

    #[test]
    fn half_of_fourth_roots_is_not_closed() {
        let err = PhaseGroup::parse(Ring::gaussian(), &["1", "i"]).unwrap_err();
        assert!(matches!(err, ScalarError::NotClosed { ref product, .. } if product == "-1"));
    }

    #[test]
    fn phase_group_errors() {
        let r = Ring::gaussian();
        assert_eq!(PhaseGroup::parse(r, &["-1"]).unwrap_err(), ScalarError::MissingIdentity);
        assert!(matches!(PhaseGroup::parse(r, &["1", "0"]), Err(ScalarError::NonInvertibleElement(_))));
        assert!(matches!(PhaseGroup::parse(r, &["1", "1"]), Err(ScalarError::Duplicate(_))));
        assert!(matches!(PhaseGroup::parse(r, &["1", "2"]), Err(ScalarError::NotClosed { .. })));
    }

    #[test]
    fn unitary_filter() {
        let cands: Vec<Scalar> = ["1", "-1", "i", "-i", "2"].iter().map(|s| g(s)).collect();
        assert_eq!(unitary_scalars(Ring::gaussian(), &cands), cands[..4].to_vec());
        let trivial = unitary_scalars(Ring::gaussian_trivial(), &cands[..4]);
        assert_eq!(trivial, vec![g("1"), g("-1")]);
        let f3 = Ring::prime_field(3).unwrap();
        let both = vec![f3.from_int(1), f3.from_int(2)];
        assert_eq!(unitary_scalars(f3, &both), both);
    }

    #[test]
    fn positive_witness_for_trivial_involution() {
        let r = Ring::gaussian_trivial();
        let target = Matrix::diagonal(r, &[g("1"), g("-1")]);
        match bounded_positive_witness(r, &target, 1) {
            PositivityVerdict::Refuted { witness } => {
                let expected = Matrix::from_strs(r, 2, 2, &["0", "i", "1", "0"]).unwrap();
                assert_eq!(witness, expected);
                assert_eq!(witness.dagger().compose(&witness).unwrap(), target);
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn conjugation_rules_out_negative_diagonal() {
        let r = Ring::gaussian();
        let target = Matrix::diagonal(r, &[g("1"), g("-1")]);
        assert_eq!(bounded_positive_witness(r, &target, 2), PositivityVerdict::Holds);
    }

    #[test]
    fn identity_is_positive() {
        let r = Ring::gaussian();
        let id = Matrix::identity(r, 3);
        assert_eq!(bounded_positive_witness(r, &id, 1), PositivityVerdict::Refuted { witness: id.clone() });
    }

    #[test]
    fn unreachable_target_is_unknown() {
        let r = Ring::gaussian();
        // 3 is not a sum of two squared moduli of height-1 Gaussian integers
        let target = Matrix::diagonal(r, &[g("3")]);
        assert_eq!(bounded_positive_witness(r, &target, 1), PositivityVerdict::Unknown { bound: 1 });
    }

    #[test]
    fn candidate_order_starts_simple() {
        let c = Ring::gaussian().elements_up_to_height(1);
        let shown: Vec<String> = c.iter().map(|s| s.to_string()).collect();
        assert_eq!(&shown[..5], &["0", "1", "-1", "i", "-i"]);
        assert_eq!(c.len(), 9);
    }
}
