//! Byte formats for keys, ciphertexts and messages.
//!
//! Keys and ciphertexts start with `CLWE`, a version byte and `m`, `d`, `q`
//! as little-endian `u32`, followed by every coefficient as a little-endian
//! `u32` (u-index outer, l-index middle, K-coefficient inner). A public key
//! or ciphertext stores two elements back to back, a secret key one.
//! Messages are raw bits packed little-endian within each byte, zero-padded.

use crate::algebra::{AElem, CyclicAlgebra};
use crate::error::{ClweError, Result};
use crate::pke::{Ciphertext, Message, PublicKey, SecretKey};

pub const MAGIC: &[u8; 4] = b"CLWE";
pub const VERSION: u8 = 1;
const HEADER_LEN: usize = 17;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Header {
    pub m: u32,
    pub d: u32,
    pub q: u32,
}

impl Header {
    pub fn of(alg: &CyclicAlgebra) -> Self {
        Self {
            m: alg.ring().m() as u32,
            d: alg.d() as u32,
            q: alg.q() as u32,
        }
    }
}

fn format_err(msg: impl Into<String>) -> ClweError {
    ClweError::Format(msg.into())
}

pub fn read_header(bytes: &[u8]) -> Result<Header> {
    if bytes.len() < HEADER_LEN {
        return Err(format_err(format!("{} bytes is shorter than the header", bytes.len())));
    }
    if &bytes[..4] != MAGIC {
        return Err(format_err("bad magic"));
    }
    if bytes[4] != VERSION {
        return Err(format_err(format!("unsupported version {}", bytes[4])));
    }
    let word = |i: usize| u32::from_le_bytes(bytes[5 + 4 * i..9 + 4 * i].try_into().expect("4 bytes"));
    Ok(Header {
        m: word(0),
        d: word(1),
        q: word(2),
    })
}

pub fn encode_elements(alg: &CyclicAlgebra, elems: &[&AElem]) -> Vec<u8> {
    let h = Header::of(alg);
    let mut out = Vec::with_capacity(HEADER_LEN + 4 * alg.dimension() * elems.len());
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    for w in [h.m, h.d, h.q] {
        out.extend_from_slice(&w.to_le_bytes());
    }
    for x in elems {
        for c in alg.to_flat(x) {
            out.extend_from_slice(&(c as u32).to_le_bytes());
        }
    }
    out
}

/// Parses exactly `count` elements of `alg`.
pub fn decode_elements(alg: &CyclicAlgebra, bytes: &[u8], count: usize) -> Result<Vec<AElem>> {
    let h = read_header(bytes)?;
    if h != Header::of(alg) {
        return Err(format_err(format!(
            "header (m={}, d={}, q={}) does not match the algebra",
            h.m, h.d, h.q
        )));
    }
    let body = &bytes[HEADER_LEN..];
    let n = alg.dimension();
    if body.len() != 4 * n * count {
        return Err(format_err(format!(
            "expected {} coefficient bytes, got {}",
            4 * n * count,
            body.len()
        )));
    }
    let q = alg.q();
    let coeffs: Vec<u64> = body
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().expect("4 bytes")) as u64)
        .collect();
    if let Some(bad) = coeffs.iter().find(|&&c| c >= q) {
        return Err(format_err(format!("coefficient {bad} not reduced mod {q}")));
    }
    coeffs.chunks(n).map(|c| alg.from_flat(c)).collect()
}

pub fn encode_public_key(alg: &CyclicAlgebra, pk: &PublicKey) -> Vec<u8> {
    encode_elements(alg, &[&pk.a, &pk.b])
}

pub fn decode_public_key(alg: &CyclicAlgebra, bytes: &[u8]) -> Result<PublicKey> {
    let mut v = decode_elements(alg, bytes, 2)?;
    let b = v.pop().expect("two elements");
    let a = v.pop().expect("two elements");
    Ok(PublicKey { a, b })
}

pub fn encode_secret_key(alg: &CyclicAlgebra, sk: &SecretKey) -> Vec<u8> {
    encode_elements(alg, &[&sk.s])
}

pub fn decode_secret_key(alg: &CyclicAlgebra, bytes: &[u8]) -> Result<SecretKey> {
    let s = decode_elements(alg, bytes, 1)?.pop().expect("one element");
    Ok(SecretKey { s })
}

pub fn encode_ciphertext(alg: &CyclicAlgebra, ct: &Ciphertext) -> Vec<u8> {
    encode_elements(alg, &[&ct.u, &ct.v])
}

pub fn decode_ciphertext(alg: &CyclicAlgebra, bytes: &[u8]) -> Result<Ciphertext> {
    let mut v = decode_elements(alg, bytes, 2)?;
    let vv = v.pop().expect("two elements");
    let u = v.pop().expect("two elements");
    Ok(Ciphertext { u, v: vv })
}

/// Bit `i` goes to bit `i % 8` of byte `i / 8`.
pub fn encode_message(msg: &Message) -> Vec<u8> {
    let mut out = vec![0u8; msg.len().div_ceil(8)];
    for (i, &b) in msg.bits().iter().enumerate() {
        if b {
            out[i / 8] |= 1 << (i % 8);
        }
    }
    out
}

/// Inverse of [`encode_message`] for a message of `len` bits; padding bits
/// must be zero.
pub fn decode_message(bytes: &[u8], len: usize) -> Result<Message> {
    if bytes.len() != len.div_ceil(8) {
        return Err(format_err(format!(
            "message of {len} bits needs {} bytes, got {}",
            len.div_ceil(8),
            bytes.len()
        )));
    }
    let bits: Vec<bool> = (0..len).map(|i| bytes[i / 8] >> (i % 8) & 1 == 1).collect();
    if (len..8 * bytes.len()).any(|i| bytes[i / 8] >> (i % 8) & 1 == 1) {
        return Err(format_err("nonzero padding bits"));
    }
    Ok(Message::new(bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pke::Pke;
    use crate::sampler::GaussianParams;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn alg() -> CyclicAlgebra {
        CyclicAlgebra::from_params(16, 2, 97, 1).unwrap()
    }

    #[test]
    fn header_layout() {
        let a = alg();
        let bytes = encode_secret_key(&a, &SecretKey { s: a.one() });
        assert_eq!(&bytes[..5], b"CLWE\x01");
        assert_eq!(&bytes[5..9], &16u32.to_le_bytes());
        assert_eq!(&bytes[9..13], &2u32.to_le_bytes());
        assert_eq!(&bytes[13..17], &97u32.to_le_bytes());
        assert_eq!(bytes.len(), 17 + 4 * 32);
        // one() is 1 in each l-coordinate of u^0
        assert_eq!(&bytes[17..21], &1u32.to_le_bytes());
        assert_eq!(&bytes[17 + 4 * 8..21 + 4 * 8], &1u32.to_le_bytes());
    }

    #[test]
    fn round_trips() {
        let a = alg();
        let pke = Pke::new(a.clone());
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let gp = GaussianParams::new(1.0).unwrap();
        let (pk, sk) = pke.keygen(&gp, &mut rng);
        let msg = Message::random(32, &mut rng);
        let ct = pke.encrypt(&pk, &msg, &gp, &mut rng).unwrap();
        let flat = |x: &AElem| a.to_flat(x);
        let pk2 = decode_public_key(&a, &encode_public_key(&a, &pk)).unwrap();
        assert_eq!((flat(&pk2.a), flat(&pk2.b)), (flat(&pk.a), flat(&pk.b)));
        let sk2 = decode_secret_key(&a, &encode_secret_key(&a, &sk)).unwrap();
        assert_eq!(flat(&sk2.s), flat(&sk.s));
        let ct2 = decode_ciphertext(&a, &encode_ciphertext(&a, &ct)).unwrap();
        assert_eq!(pke.decrypt(&sk2, &ct2).unwrap(), pke.decrypt(&sk, &ct).unwrap());
        assert_eq!(decode_message(&encode_message(&msg), 32).unwrap(), msg);
    }

    #[test]
    fn message_bit_order() {
        let mut bits = vec![false; 10];
        bits[0] = true;
        bits[9] = true;
        assert_eq!(encode_message(&Message::new(bits)), vec![0x01, 0x02]);
        assert!(decode_message(&[0x01, 0x04], 10).is_err());
        assert!(decode_message(&[0x01], 10).is_err());
    }

    #[test]
    fn rejects_malformed() {
        let a = alg();
        let good = encode_secret_key(&a, &SecretKey { s: a.one() });
        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(decode_secret_key(&a, &bad).is_err());
        let mut bad = good.clone();
        bad[4] = 2;
        assert!(decode_secret_key(&a, &bad).is_err());
        assert!(decode_secret_key(&a, &good[..good.len() - 1]).is_err());
        assert!(decode_public_key(&a, &good).is_err());
        let mut bad = good.clone();
        bad[17..21].copy_from_slice(&97u32.to_le_bytes());
        assert!(decode_secret_key(&a, &bad).is_err());
        let other = CyclicAlgebra::from_params(16, 2, 113, 1).unwrap();
        assert!(decode_secret_key(&other, &good).is_err());
        assert!(read_header(&good[..10]).is_err());
    }
}
