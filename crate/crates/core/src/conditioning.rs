//! Compression of a timing series into a 256-bit seed.
//!
//! Byte layout hashed by [`condition`]:
//!
//! ```text
//! "SIDERAND-v1" | 0x00 | count: u64 BE | duration[0]: u64 BE | ... | duration[n-1]: u64 BE
//! ```

use std::fmt;

use sha2::{Digest, Sha256};
use zeroize::Zeroize;

use crate::collector::TimingSeries;
use crate::error::{Error, Result};

pub const DOMAIN_TAG: &[u8; 11] = b"SIDERAND-v1";

/// Length of the tag, separator and count prefix.
pub const HEADER_LEN: usize = DOMAIN_TAG.len() + 1 + 8;

/// A 32-byte conditioned seed. `Debug` never shows the bytes; use
/// [`Seed256::to_hex`] when they must be displayed.
#[derive(Clone, PartialEq, Eq)]
pub struct Seed256([u8; 32]);

impl Seed256 {
    pub const LEN: usize = 32;

    pub const fn from_bytes(bytes: [u8; 32]) -> Self {
        Self(bytes)
    }

    /// Parses exactly 64 hex digits.
    pub fn from_hex(hex_str: &str) -> Result<Self> {
        let mut bytes = [0u8; 32];
        hex::decode_to_slice(hex_str.trim(), &mut bytes).map_err(|e| Error::InvalidArgument {
            what: "seed hex",
            reason: format!("expected 64 hex digits: {e}"),
        })?;
        Ok(Self(bytes))
    }

    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }

    /// 64 lowercase hex characters.
    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }
}

impl fmt::Debug for Seed256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Seed256(..)")
    }
}

impl Drop for Seed256 {
    fn drop(&mut self) {
        self.0.zeroize();
    }
}

pub fn serialize_series(series: &TimingSeries) -> Result<Vec<u8>> {
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * series.len());
    out.extend_from_slice(DOMAIN_TAG);
    out.push(0x00);
    out.extend_from_slice(&(series.len() as u64).to_be_bytes());
    for d in series.durations() {
        out.extend_from_slice(&d.to_be_bytes());
    }
    Ok(out)
}

/// SHA-256 of [`serialize_series`].
pub fn condition(series: &TimingSeries) -> Result<Seed256> {
    let mut bytes = serialize_series(series)?;
    let digest = Sha256::digest(&bytes);
    bytes.zeroize();
    Ok(Seed256(digest.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collector::Timer;

    fn series(d: &[u64]) -> TimingSeries {
        TimingSeries::replayed(d.iter().copied(), Timer::ProcessCpuNanoseconds).unwrap()
    }

    #[test]
    fn single_zero_sample_layout() {
        let bytes = serialize_series(&series(&[0])).unwrap();
        assert_eq!(bytes.len(), 28);
        assert_eq!(&bytes[..11], b"SIDERAND-v1");
        assert_eq!(bytes[11], 0);
        assert_eq!(&bytes[12..20], &[0, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(&bytes[20..], &[0u8; 8]);
    }

    #[test]
    fn big_endian_durations() {
        let bytes = serialize_series(&series(&[1, 256])).unwrap();
        assert_eq!(bytes.len(), 36);
        assert_eq!(
            &bytes[bytes.len() - 16..],
            &[0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0]
        );
    }

    // Reference digests computed with Python's hashlib over the same layout.
    #[test]
    fn zero_series_vectors() {
        let one = condition(&series(&[0])).unwrap();
        assert_eq!(
            one.to_hex(),
            "77d0fb2c8cf7a4f973206d634e1376f7d721e3fe0af60c6d5646cb7eba0a2d81"
        );
        let s = series(&[0; 256]);
        assert_eq!(serialize_series(&s).unwrap().len(), 2068);
        assert_eq!(
            condition(&s).unwrap().to_hex(),
            "db27e740933375612ce6b8de5d9fa9f526a45eeaf3fbb9662d435ff1aeed2650"
        );
    }

    #[test]
    fn deterministic_and_order_sensitive() {
        let a = series(&[5, 9, 7]);
        assert_eq!(condition(&a).unwrap(), condition(&a).unwrap());
        assert_ne!(
            condition(&a).unwrap(),
            condition(&series(&[9, 5, 7])).unwrap()
        );
        assert_ne!(
            condition(&a).unwrap(),
            condition(&series(&[5, 9, 8])).unwrap()
        );
    }

    #[test]
    fn seed_hex_round_trip_and_redaction() {
        let seed = Seed256::from_bytes([0xab; 32]);
        assert_eq!(seed.to_hex(), "ab".repeat(32));
        assert_eq!(Seed256::from_hex(&seed.to_hex()).unwrap(), seed);
        assert_eq!(format!("{seed:?}"), "Seed256(..)");
        assert!(Seed256::from_hex("abcd").is_err());
        assert!(Seed256::from_hex(&"zz".repeat(32)).is_err());
    }
}
