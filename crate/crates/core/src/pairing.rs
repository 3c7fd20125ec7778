//! Integer pairing primitives shared by the ring enumerations and the
//! matrix codec.
//!
//! * `zigzag`: `0, -1, 1, -2, 2, ...  <->  0, 1, 2, 3, 4, ...`
//! * Cantor pairing: `pair(x, y) = (x + y)(x + y + 1)/2 + y`.
//! * Sequences: the empty sequence is `0`; a nonempty sequence
//!   `(x_1, .., x_L)` is `2^(L - 1) * (2 * nest(x_1, .., x_L) + 1)` with
//!   `nest(x) = x` and `nest(x_1, rest..) = pair(x_1, nest(rest..))`.
//!   The 2-adic length prefix keeps `L <= 1 + log2(code)`.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::Zero;

pub fn zigzag(z: &BigInt) -> BigUint {
    let (sign, mag) = z.clone().into_parts();
    match sign {
        Sign::Minus => mag * 2u32 - 1u32,
        _ => mag * 2u32,
    }
}

pub fn unzigzag(n: &BigUint) -> BigInt {
    let half = n >> 1u32;
    if n.bit(0) {
        -BigInt::from(half) - 1
    } else {
        BigInt::from(half)
    }
}

pub fn zigzag_i64(z: i64) -> u64 {
    ((z << 1) ^ (z >> 63)) as u64
}

pub fn unzigzag_u64(n: u64) -> i64 {
    ((n >> 1) as i64) ^ -((n & 1) as i64)
}

fn triangle(w: &BigUint) -> BigUint {
    (w * (w + 1u32)) >> 1u32
}

pub fn pair(x: &BigUint, y: &BigUint) -> BigUint {
    triangle(&(x + y)) + y
}

pub fn unpair(z: &BigUint) -> (BigUint, BigUint) {
    // w = floor((sqrt(8z + 1) - 1) / 2)
    let disc: BigUint = (z << 3u32) + 1u32;
    let mut w: BigUint = (disc.sqrt() - 1u32) >> 1u32;
    // integer sqrt is exact, but guard the boundary anyway
    while triangle(&w) > *z {
        w -= 1u32;
    }
    while triangle(&(&w + 1u32)) <= *z {
        w += 1u32;
    }
    let y = z - triangle(&w);
    let x = &w - &y;
    (x, y)
}

pub fn encode_seq(items: &[BigUint]) -> BigUint {
    let Some((last, init)) = items.split_last() else {
        return BigUint::zero();
    };
    let nested = init.iter().rev().fold(last.clone(), |acc, x| pair(x, &acc));
    ((nested << 1u32) + 1u32) << (items.len() - 1)
}

pub fn decode_seq(code: &BigUint) -> Vec<BigUint> {
    if code.is_zero() {
        return Vec::new();
    }
    let len = code.trailing_zeros().expect("nonzero code") as usize;
    let mut rest: BigUint = code >> (len + 1);
    let mut out = Vec::with_capacity(len + 1);
    for _ in 0..len {
        let (head, tail) = unpair(&rest);
        out.push(head);
        rest = tail;
    }
    out.push(rest);
    out
}
