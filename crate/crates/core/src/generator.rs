//! Seed expansion: AES-256 in counter mode with fast key erasure.
//!
//! The seed is the first key. Block `i` of keystream is `AES(key, i)` with the
//! 128-bit counter encoded big-endian as the whole input block. After every
//! [`REKEY_INTERVAL`] bytes of output, the next two keystream blocks become the
//! new key and are never emitted. The counter keeps increasing across rekeys,
//! so no (key, counter) pair is ever used twice.
//!
//! Output depends only on the seed and the total number of bytes requested,
//! not on how requests are split.

use aes::cipher::{BlockEncrypt, KeyInit};
use aes::Aes256;
use zeroize::Zeroize;

use crate::conditioning::Seed256;

/// Bytes emitted under one key before it is replaced.
pub const REKEY_INTERVAL: usize = 64 * 1024;

const BLOCK_LEN: usize = 16;

/// A block cipher keyed with 32 bytes, used to encrypt counter blocks.
pub trait CounterCipher {
    fn with_key(key: &[u8; 32]) -> Self;

    fn keystream_block(&self, counter: u128) -> [u8; 16];
}

/// AES-256 encryption of the big-endian counter.
pub struct Aes256Counter(Aes256);

impl CounterCipher for Aes256Counter {
    fn with_key(key: &[u8; 32]) -> Self {
        Self(Aes256::new(key.into()))
    }

    fn keystream_block(&self, counter: u128) -> [u8; 16] {
        let mut block = counter.to_be_bytes().into();
        self.0.encrypt_block(&mut block);
        block.into()
    }
}

/// Generator state. Not `Clone`: a copied state would replay keystream.
pub struct StreamState<C: CounterCipher = Aes256Counter> {
    key: [u8; 32],
    cipher: C,
    /// Next counter value to encrypt.
    counter: u128,
    bytes_emitted: u64,
    since_rekey: usize,
    /// Unconsumed keystream lives in `block[block_pos..]`.
    block: [u8; BLOCK_LEN],
    block_pos: usize,
}

impl StreamState<Aes256Counter> {
    pub fn new(seed: &Seed256) -> Self {
        Self::with_cipher(seed)
    }
}

impl<C: CounterCipher> StreamState<C> {
    /// Same as [`StreamState::new`] with a caller-chosen cipher.
    pub fn with_cipher(seed: &Seed256) -> Self {
        let key = *seed.as_bytes();
        Self {
            cipher: C::with_key(&key),
            key,
            counter: 0,
            bytes_emitted: 0,
            since_rekey: 0,
            block: [0; BLOCK_LEN],
            block_pos: BLOCK_LEN,
        }
    }

    pub fn counter(&self) -> u128 {
        self.counter
    }

    pub fn bytes_emitted(&self) -> u64 {
        self.bytes_emitted
    }

    pub fn fill(&mut self, n: usize) -> Vec<u8> {
        let mut out = vec![0u8; n];
        self.fill_bytes(&mut out);
        out
    }

    pub fn fill_bytes(&mut self, mut dest: &mut [u8]) {
        while !dest.is_empty() {
            if self.block_pos == BLOCK_LEN {
                self.block = self.cipher.keystream_block(self.counter);
                self.counter += 1;
                self.block_pos = 0;
            }
            let take = (BLOCK_LEN - self.block_pos).min(dest.len());
            let (head, rest) = dest.split_at_mut(take);
            let consumed = self.block_pos..self.block_pos + take;
            head.copy_from_slice(&self.block[consumed.clone()]);
            self.block[consumed].zeroize();
            self.block_pos += take;
            self.since_rekey += take;
            self.bytes_emitted += take as u64;
            dest = rest;

            // REKEY_INTERVAL is a multiple of BLOCK_LEN, so the buffer is
            // drained whenever the interval is reached.
            if self.since_rekey == REKEY_INTERVAL {
                self.rekey();
            }
        }
    }

    /// Equivalent to building a fresh state from `seed`; the old key is erased.
    pub fn reseed(&mut self, seed: &Seed256) {
        *self = Self::with_cipher(seed);
    }

    fn rekey(&mut self) {
        let mut first = self.cipher.keystream_block(self.counter);
        let mut second = self.cipher.keystream_block(self.counter + 1);
        self.counter += 2;
        self.key[..BLOCK_LEN].copy_from_slice(&first);
        self.key[BLOCK_LEN..].copy_from_slice(&second);
        first.zeroize();
        second.zeroize();
        self.cipher = C::with_key(&self.key);
        self.since_rekey = 0;
    }
}

impl<C: CounterCipher> Drop for StreamState<C> {
    fn drop(&mut self) {
        self.key.zeroize();
        self.block.zeroize();
    }
}

impl<C: CounterCipher> rand_core::RngCore for StreamState<C> {
    fn next_u32(&mut self) -> u32 {
        let mut buf = [0u8; 4];
        self.fill_bytes(&mut buf);
        u32::from_le_bytes(buf)
    }

    fn next_u64(&mut self) -> u64 {
        let mut buf = [0u8; 8];
        self.fill_bytes(&mut buf);
        u64::from_le_bytes(buf)
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        StreamState::fill_bytes(self, dest);
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand_core::Error> {
        StreamState::fill_bytes(self, dest);
        Ok(())
    }
}

impl<C: CounterCipher> rand_core::CryptoRng for StreamState<C> {}
