//! Expand a seed into a long AES-256-CTR stream with fast key erasure.
//!
//! ```text
//! cargo run --release --example keystream -- [hex seed]
//! ```

use std::time::Instant;

use rand_core::RngCore;
use siderand::generator::REKEY_INTERVAL;
use siderand::{Seed256, StreamState};

fn main() -> Result<(), siderand::Error> {
    let seed = match std::env::args().nth(1) {
        Some(hex) => Seed256::from_hex(&hex)?,
        None => Seed256::from_bytes([0; 32]),
    };
    let mut stream = StreamState::new(&seed);
    println!("first 32 bytes: {}", hex::encode(stream.fill(32)));

    // Stream output is the same however the requests are split.
    let mut a = StreamState::new(&seed);
    let mut b = StreamState::new(&seed);
    let mut pieces = a.fill(10);
    pieces.extend(a.fill(22));
    assert_eq!(pieces, b.fill(32));

    let mut buf = vec![0u8; 16 << 20];
    let started = Instant::now();
    stream.fill_bytes(&mut buf);
    let secs = started.elapsed().as_secs_f64();
    println!(
        "{} MiB in {secs:.3} s ({:.0} MiB/s), {} rekeys, counter now {}",
        buf.len() >> 20,
        (buf.len() >> 20) as f64 / secs,
        stream.bytes_emitted() as usize / REKEY_INTERVAL,
        stream.counter()
    );
    println!("as an RngCore: next_u64 = {:#018x}", stream.next_u64());
    Ok(())
}
