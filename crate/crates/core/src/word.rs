//! 256-bit unsigned words with wrap-around arithmetic.
//!
//! Every stack cell, storage key and storage value in the VM is a [`Word256`].
//! Arithmetic wraps modulo 2^256; the checked variants report overflow instead
//! of wrapping so contracts can opt in to safe math.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitOr, Not};

use serde::de::Visitor;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// 256-bit unsigned integer, little-endian u64 limbs (`limbs[0]` least significant).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Word256([u64; 4]);

/// Error returned by checked arithmetic when the exact result does not fit in 256 bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

impl fmt::Display for Overflow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("256-bit arithmetic overflow")
    }
}

impl std::error::Error for Overflow {}

impl Word256 {
    pub const ZERO: Self = Word256([0; 4]);
    pub const ONE: Self = Word256([1, 0, 0, 0]);
    pub const MAX: Self = Word256([u64::MAX; 4]);

    pub const fn from_u64(v: u64) -> Self {
        Word256([v, 0, 0, 0])
    }

    pub fn from_u128(v: u128) -> Self {
        Word256([v as u64, (v >> 64) as u64, 0, 0])
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Self::ONE
        } else {
            Self::ZERO
        }
    }

    /// 2^n for n < 256.
    pub fn pow2(n: usize) -> Self {
        debug_assert!(n < 256);
        let mut w = Self::ZERO;
        w.set_bit(n);
        w
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0; 4]
    }

    pub fn low_u64(&self) -> u64 {
        self.0[0]
    }

    /// Low 64 bits if the value fits, else `u64::MAX`.
    pub fn to_u64_saturating(&self) -> u64 {
        if self.0[1] | self.0[2] | self.0[3] != 0 {
            u64::MAX
        } else {
            self.0[0]
        }
    }

    pub fn to_usize_saturating(&self) -> usize {
        usize::try_from(self.to_u64_saturating()).unwrap_or(usize::MAX)
    }

    pub fn bit(&self, i: usize) -> bool {
        debug_assert!(i < 256);
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set_bit(&mut self, i: usize) {
        debug_assert!(i < 256);
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn leading_zeros(&self) -> u32 {
        let mut n = 0;
        for limb in self.0.iter().rev() {
            if *limb == 0 {
                n += 64;
            } else {
                return n + limb.leading_zeros();
            }
        }
        n
    }

    /// Canonical 32-byte big-endian encoding.
    pub fn to_be_bytes(&self) -> [u8; 32] {
        let mut out = [0u8; 32];
        for (i, limb) in self.0.iter().enumerate() {
            out[32 - 8 * (i + 1)..32 - 8 * i].copy_from_slice(&limb.to_be_bytes());
        }
        out
    }

    pub fn from_be_bytes(bytes: [u8; 32]) -> Self {
        let mut limbs = [0u64; 4];
        for (i, limb) in limbs.iter_mut().enumerate() {
            let mut buf = [0u8; 8];
            buf.copy_from_slice(&bytes[32 - 8 * (i + 1)..32 - 8 * i]);
            *limb = u64::from_be_bytes(buf);
        }
        Word256(limbs)
    }

    /// Big-endian interpretation of up to 32 bytes (shorter slices are
    /// right-aligned, i.e. treated as left-padded with zeros).
    pub fn from_be_slice(bytes: &[u8]) -> Self {
        assert!(bytes.len() <= 32, "slice longer than 32 bytes");
        let mut buf = [0u8; 32];
        buf[32 - bytes.len()..].copy_from_slice(bytes);
        Self::from_be_bytes(buf)
    }

    pub fn wrapping_add(self, rhs: Self) -> Self {
        self.overflowing_add(rhs).0
    }

    pub fn overflowing_add(self, rhs: Self) -> (Self, bool) {
        let mut out = [0u64; 4];
        let mut carry = 0u128;
        for i in 0..4 {
            let sum = self.0[i] as u128 + rhs.0[i] as u128 + carry;
            out[i] = sum as u64;
            carry = sum >> 64;
        }
        (Word256(out), carry != 0)
    }

    pub fn wrapping_sub(self, rhs: Self) -> Self {
        self.overflowing_sub(rhs).0
    }

    pub fn overflowing_sub(self, rhs: Self) -> (Self, bool) {
        let mut out = [0u64; 4];
        let mut borrow = false;
        for i in 0..4 {
            let (d1, b1) = self.0[i].overflowing_sub(rhs.0[i]);
            let (d2, b2) = d1.overflowing_sub(borrow as u64);
            out[i] = d2;
            borrow = b1 || b2;
        }
        (Word256(out), borrow)
    }

    fn full_mul(self, rhs: Self) -> [u64; 8] {
        let mut out = [0u64; 8];
        for i in 0..4 {
            let mut carry = 0u128;
            for j in 0..4 {
                let cur = out[i + j] as u128 + self.0[i] as u128 * rhs.0[j] as u128 + carry;
                out[i + j] = cur as u64;
                carry = cur >> 64;
            }
            out[i + 4] = carry as u64;
        }
        out
    }

    pub fn wrapping_mul(self, rhs: Self) -> Self {
        self.overflowing_mul(rhs).0
    }

    pub fn overflowing_mul(self, rhs: Self) -> (Self, bool) {
        let full = self.full_mul(rhs);
        let low = Word256([full[0], full[1], full[2], full[3]]);
        let overflow = full[4] | full[5] | full[6] | full[7] != 0;
        (low, overflow)
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self, Overflow> {
        match self.overflowing_add(rhs) {
            (v, false) => Ok(v),
            _ => Err(Overflow),
        }
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self, Overflow> {
        match self.overflowing_sub(rhs) {
            (v, false) => Ok(v),
            _ => Err(Overflow),
        }
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self, Overflow> {
        match self.overflowing_mul(rhs) {
            (v, false) => Ok(v),
            _ => Err(Overflow),
        }
    }

    fn shl1(self) -> Self {
        let mut out = [0u64; 4];
        let mut carry = 0u64;
        for i in 0..4 {
            out[i] = self.0[i] << 1 | carry;
            carry = self.0[i] >> 63;
        }
        Word256(out)
    }

    /// Quotient and remainder; division by zero yields `(0, 0)` per VM convention.
    pub fn div_rem(self, divisor: Self) -> (Self, Self) {
        if divisor.is_zero() {
            return (Self::ZERO, Self::ZERO);
        }
        if self < divisor {
            return (Self::ZERO, self);
        }
        let mut quotient = Self::ZERO;
        let mut remainder = Self::ZERO;
        let highest = 255 - self.leading_zeros() as usize;
        for i in (0..=highest).rev() {
            remainder = remainder.shl1();
            if self.bit(i) {
                remainder.0[0] |= 1;
            }
            if remainder >= divisor {
                remainder = remainder.wrapping_sub(divisor);
                quotient.set_bit(i);
            }
        }
        (quotient, remainder)
    }

    pub fn wrapping_div(self, rhs: Self) -> Self {
        self.div_rem(rhs).0
    }

    pub fn wrapping_rem(self, rhs: Self) -> Self {
        self.div_rem(rhs).1
    }

    pub fn to_dec_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let ten = Word256::from_u64(10);
        let mut digits = Vec::new();
        let mut cur = *self;
        while !cur.is_zero() {
            let (q, r) = cur.div_rem(ten);
            digits.push(b'0' + r.low_u64() as u8);
            cur = q;
        }
        digits.reverse();
        String::from_utf8(digits).unwrap()
    }

    pub fn from_dec_str(s: &str) -> Result<Self, ParseWordError> {
        if s.is_empty() {
            return Err(ParseWordError::Empty);
        }
        let ten = Word256::from_u64(10);
        let mut acc = Word256::ZERO;
        for c in s.chars() {
            let d = c.to_digit(10).ok_or(ParseWordError::BadDigit(c))?;
            acc = acc
                .checked_mul(ten)
                .and_then(|v| v.checked_add(Word256::from_u64(d as u64)))
                .map_err(|_| ParseWordError::Overflow)?;
        }
        Ok(acc)
    }

    /// Parses "0x"-prefixed hex of at most 64 digits.
    pub fn from_hex_str(s: &str) -> Result<Self, ParseWordError> {
        let digits = s
            .strip_prefix("0x")
            .or_else(|| s.strip_prefix("0X"))
            .ok_or(ParseWordError::MissingHexPrefix)?;
        if digits.is_empty() {
            return Err(ParseWordError::Empty);
        }
        if digits.len() > 64 {
            return Err(ParseWordError::Overflow);
        }
        let mut acc = Word256::ZERO;
        for c in digits.chars() {
            let d = c.to_digit(16).ok_or(ParseWordError::BadDigit(c))?;
            acc = acc.wrapping_mul(Word256::from_u64(16));
            acc = acc.wrapping_add(Word256::from_u64(d as u64));
        }
        Ok(acc)
    }

    /// Accepts either decimal or 0x-hex.
    pub fn parse(s: &str) -> Result<Self, ParseWordError> {
        if s.starts_with("0x") || s.starts_with("0X") {
            Self::from_hex_str(s)
        } else {
            Self::from_dec_str(s)
        }
    }

    /// Full-width lowercase hex with 0x prefix (66 chars).
    pub fn to_hex_string(&self) -> String {
        let mut s = String::with_capacity(66);
        s.push_str("0x");
        for b in self.to_be_bytes() {
            s.push_str(&format!("{b:02x}"));
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseWordError {
    #[error("empty number literal")]
    Empty,
    #[error("invalid digit '{0}'")]
    BadDigit(char),
    #[error("value does not fit in 256 bits")]
    Overflow,
    #[error("hex literal must start with 0x")]
    MissingHexPrefix,
}

impl PartialOrd for Word256 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word256 {
    fn cmp(&self, other: &Self) -> Ordering {
        for i in (0..4).rev() {
            match self.0[i].cmp(&other.0[i]) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl BitAnd for Word256 {
    type Output = Self;
    fn bitand(self, rhs: Self) -> Self {
        Word256([
            self.0[0] & rhs.0[0],
            self.0[1] & rhs.0[1],
            self.0[2] & rhs.0[2],
            self.0[3] & rhs.0[3],
        ])
    }
}

impl BitOr for Word256 {
    type Output = Self;
    fn bitor(self, rhs: Self) -> Self {
        Word256([
            self.0[0] | rhs.0[0],
            self.0[1] | rhs.0[1],
            self.0[2] | rhs.0[2],
            self.0[3] | rhs.0[3],
        ])
    }
}

impl Not for Word256 {
    type Output = Self;
    fn not(self) -> Self {
        Word256([!self.0[0], !self.0[1], !self.0[2], !self.0[3]])
    }
}

impl From<u64> for Word256 {
    fn from(v: u64) -> Self {
        Self::from_u64(v)
    }
}

impl From<u128> for Word256 {
    fn from(v: u128) -> Self {
        Self::from_u128(v)
    }
}

impl fmt::Display for Word256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dec_string())
    }
}

impl fmt::Debug for Word256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hex = self.to_hex_string();
        let trimmed = hex.trim_start_matches("0x").trim_start_matches('0');
        if trimmed.is_empty() {
            f.write_str("0x0")
        } else {
            write!(f, "0x{trimmed}")
        }
    }
}

impl fmt::LowerHex for Word256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex_string())
    }
}

impl Serialize for Word256 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_dec_string())
    }
}

impl<'de> Deserialize<'de> for Word256 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct WordVisitor;
        impl Visitor<'_> for WordVisitor {
            type Value = Word256;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a decimal or 0x-hex string encoding a 256-bit unsigned integer")
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Word256, E> {
                Word256::parse(v).map_err(E::custom)
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<Word256, E> {
                Ok(Word256::from_u64(v))
            }
        }
        deserializer.deserialize_any(WordVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    fn to_big(w: Word256) -> BigUint {
        BigUint::from_bytes_be(&w.to_be_bytes())
    }

    fn modulus() -> BigUint {
        BigUint::from(1u8) << 256
    }

    #[test]
    fn add_wraps_at_maximum() {
        assert_eq!(Word256::MAX.wrapping_add(Word256::ONE), Word256::ZERO);
    }

    #[test]
    fn mul_two_times_half_modulus_is_zero() {
        // 2 * 2^255 wraps to zero, the batchTransfer attack arithmetic.
        let half = Word256::pow2(255);
        assert_eq!(Word256::from_u64(2).wrapping_mul(half), Word256::ZERO);
    }

    #[test]
    fn sub_underflow_wraps_to_maximum() {
        assert_eq!(Word256::ZERO.wrapping_sub(Word256::ONE), Word256::MAX);
    }

    #[test]
    fn checked_add_small() {
        assert_eq!(
            Word256::from_u64(1).checked_add(Word256::from_u64(2)),
            Ok(Word256::from_u64(3))
        );
    }

    #[test]
    fn checked_mul_overflow_errors() {
        assert_eq!(
            Word256::from_u64(2).checked_mul(Word256::pow2(255)),
            Err(Overflow)
        );
    }

    #[test]
    fn checked_sub_underflow_errors() {
        assert_eq!(
            Word256::from_u64(5).checked_sub(Word256::from_u64(7)),
            Err(Overflow)
        );
    }

    #[test]
    fn byte_round_trip() {
        let w = Word256([1, 2, 3, 4]);
        assert_eq!(Word256::from_be_bytes(w.to_be_bytes()), w);
        assert_eq!(w.to_be_bytes().len(), 32);
    }

    #[test]
    fn decimal_round_trip() {
        for v in [Word256::ZERO, Word256::ONE, Word256::MAX, Word256::pow2(255)] {
            assert_eq!(Word256::from_dec_str(&v.to_dec_string()).unwrap(), v);
        }
        // The paper's FACTOR constant is exactly 2^255.
        assert_eq!(
            Word256::pow2(255).to_dec_string(),
            "57896044618658097711785492504343953926634992332820282019728792003956564819968"
        );
    }

    #[test]
    fn hex_parse() {
        assert_eq!(
            Word256::from_hex_str("0xff").unwrap(),
            Word256::from_u64(255)
        );
        assert!(Word256::from_hex_str("ff").is_err());
        let max = "0x".to_string() + &"f".repeat(64);
        assert_eq!(Word256::from_hex_str(&max).unwrap(), Word256::MAX);
    }

    #[test]
    fn division_by_zero_is_zero() {
        let w = Word256::from_u64(1234);
        assert_eq!(w.wrapping_div(Word256::ZERO), Word256::ZERO);
        assert_eq!(w.wrapping_rem(Word256::ZERO), Word256::ZERO);
    }

    #[test]
    fn msb_division_by_factor() {
        // v / 2^255 is 1 exactly when the most significant bit is set.
        let factor = Word256::pow2(255);
        let mut high = Word256::pow2(255);
        high.set_bit(3);
        assert_eq!(high.wrapping_div(factor), Word256::ONE);
        assert_eq!(Word256::from_u64(12345).wrapping_div(factor), Word256::ZERO);
    }

    fn word_strategy() -> impl Strategy<Value = Word256> {
        proptest::array::uniform4(any::<u64>()).prop_map(Word256)
    }

    proptest! {
        #[test]
        fn add_matches_bigint(a in word_strategy(), b in word_strategy()) {
            let got = to_big(a.wrapping_add(b));
            let want = (to_big(a) + to_big(b)) % modulus();
            prop_assert_eq!(got, want);
        }

        #[test]
        fn sub_matches_bigint(a in word_strategy(), b in word_strategy()) {
            let got = to_big(a.wrapping_sub(b));
            let want = (modulus() + to_big(a) - to_big(b)) % modulus();
            prop_assert_eq!(got, want);
        }

        #[test]
        fn mul_matches_bigint(a in word_strategy(), b in word_strategy()) {
            let got = to_big(a.wrapping_mul(b));
            let want = (to_big(a) * to_big(b)) % modulus();
            prop_assert_eq!(got, want);
        }

        #[test]
        fn div_rem_matches_bigint(a in word_strategy(), b in word_strategy()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(b);
            prop_assert_eq!(to_big(q), to_big(a) / to_big(b));
            prop_assert_eq!(to_big(r), to_big(a) % to_big(b));
        }

        #[test]
        fn checked_agrees_with_wrapping_when_exact(a in word_strategy(), b in word_strategy()) {
            let exact_add = to_big(a) + to_big(b);
            match a.checked_add(b) {
                Ok(v) => prop_assert_eq!(to_big(v), exact_add),
                Err(_) => prop_assert!(exact_add >= modulus()),
            }
            let exact_mul = to_big(a) * to_big(b);
            match a.checked_mul(b) {
                Ok(v) => prop_assert_eq!(to_big(v), exact_mul),
                Err(_) => prop_assert!(exact_mul >= modulus()),
            }
            match a.checked_sub(b) {
                Ok(v) => prop_assert_eq!(to_big(v) + to_big(b), to_big(a)),
                Err(_) => prop_assert!(to_big(a) < to_big(b)),
            }
        }

        #[test]
        fn ordering_matches_bigint(a in word_strategy(), b in word_strategy()) {
            prop_assert_eq!(a.cmp(&b), to_big(a).cmp(&to_big(b)));
        }

        #[test]
        fn dec_string_round_trips(a in word_strategy()) {
            prop_assert_eq!(Word256::from_dec_str(&a.to_dec_string()).unwrap(), a);
        }
    }
}
