//! Word-array bit kernels shared by the polynomial and series types.
//!
//! Bit `i` of word `j` holds coefficient index `64*j + i`. All products are
//! carry-less (XOR accumulation).

pub(crate) const WORD_BITS: usize = 64;

/// Products switch from the schoolbook kernel to Karatsuba above this many
/// words on the smaller operand.
pub(crate) const KARATSUBA_THRESHOLD_WORDS: usize = 32;

pub(crate) fn words_for(nbits: usize) -> usize {
    nbits.div_ceil(WORD_BITS)
}

pub(crate) fn get(words: &[u64], i: usize) -> bool {
    match words.get(i / WORD_BITS) {
        Some(w) => (w >> (i % WORD_BITS)) & 1 == 1,
        None => false,
    }
}

pub(crate) fn set(words: &mut [u64], i: usize) {
    words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
}


/// Index of the highest set bit, if any.
pub(crate) fn top_bit(words: &[u64]) -> Option<usize> {
    for (j, &w) in words.iter().enumerate().rev() {
        if w != 0 {
            return Some(j * WORD_BITS + (WORD_BITS - 1 - w.leading_zeros() as usize));
        }
    }
    None
}

pub(crate) fn lowest_bit(words: &[u64]) -> Option<usize> {
    for (j, &w) in words.iter().enumerate() {
        if w != 0 {
            return Some(j * WORD_BITS + w.trailing_zeros() as usize);
        }
    }
    None
}

/// Drop high zero words.
pub(crate) fn trim(words: &mut Vec<u64>) {
    while words.last() == Some(&0) {
        words.pop();
    }
}

/// Clear every bit with index >= nbits.
pub(crate) fn mask_above(words: &mut Vec<u64>, nbits: usize) {
    let keep = words_for(nbits);
    words.truncate(keep);
    if nbits % WORD_BITS != 0 {
        if let Some(last) = words.get_mut(keep.wrapping_sub(1)) {
            *last &= (1u64 << (nbits % WORD_BITS)) - 1;
        }
    }
}

pub(crate) fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

/// dst ^= src << k. dst must already be large enough.
pub(crate) fn xor_shl(dst: &mut [u64], src: &[u64], k: usize) {
    let (wk, bk) = (k / WORD_BITS, k % WORD_BITS);
    for (i, &s) in src.iter().enumerate() {
        if s == 0 {
            continue;
        }
        dst[i + wk] ^= s << bk;
        if bk != 0 && i + wk + 1 < dst.len() {
            dst[i + wk + 1] ^= s >> (WORD_BITS - bk);
        } else if bk != 0 {
            debug_assert_eq!(s >> (WORD_BITS - bk), 0);
        }
    }
}

pub(crate) fn shifted_left(src: &[u64], k: usize) -> Vec<u64> {
    let mut out = vec![0u64; src.len() + k / WORD_BITS + 1];
    xor_shl(&mut out, src, k);
    trim(&mut out);
    out
}

pub(crate) fn shifted_right(src: &[u64], k: usize) -> Vec<u64> {
    let (wk, bk) = (k / WORD_BITS, k % WORD_BITS);
    if wk >= src.len() {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(src.len() - wk);
    for i in wk..src.len() {
        let mut w = src[i] >> bk;
        if bk != 0 && i + 1 < src.len() {
            w |= src[i + 1] << (WORD_BITS - bk);
        }
        out.push(w);
    }
    trim(&mut out);
    out
}

/// 64x64 -> 128 carry-less product.
pub(crate) fn clmul64(a: u64, b: u64) -> (u64, u64) {
    let (mut lo, mut hi) = (0u64, 0u64);
    let mut b = b;
    while b != 0 {
        let i = b.trailing_zeros();
        lo ^= a << i;
        if i != 0 {
            hi ^= a >> (64 - i);
        }
        b &= b - 1;
    }
    (lo, hi)
}

fn clmul_schoolbook(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len()];
    for (i, &aw) in a.iter().enumerate() {
        if aw == 0 {
            continue;
        }
        for (j, &bw) in b.iter().enumerate() {
            if bw == 0 {
                continue;
            }
            let (lo, hi) = clmul64(aw, bw);
            out[i + j] ^= lo;
            out[i + j + 1] ^= hi;
        }
    }
    out
}

fn xor_slices(a: &[u64], b: &[u64]) -> Vec<u64> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    xor_into(&mut out, short);
    out
}

pub(crate) fn clmul_threshold(a: &[u64], b: &[u64], threshold: usize) -> Vec<u64> {
    let a = &a[..a.len() - a.iter().rev().take_while(|&&w| w == 0).count()];
    let b = &b[..b.len() - b.iter().rev().take_while(|&&w| w == 0).count()];
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len().min(b.len()) <= threshold {
        return clmul_schoolbook(a, b);
    }
    // split at h words: x = x0 + x1*W^h, char-2 Karatsuba
    let h = a.len().max(b.len()).div_ceil(2);
    let (a0, a1) = a.split_at(h.min(a.len()));
    let (b0, b1) = b.split_at(h.min(b.len()));
    let z0 = clmul_threshold(a0, b0, threshold);
    let z2 = clmul_threshold(a1, b1, threshold);
    let za = xor_slices(a0, a1);
    let zb = xor_slices(b0, b1);
    let mut z1 = clmul_threshold(&za, &zb, threshold);
    z1.resize(z1.len().max(z0.len()).max(z2.len()), 0);
    xor_into(&mut z1, &z0);
    xor_into(&mut z1, &z2);

    let mut out = vec![0u64; a.len() + b.len()];
    xor_into(&mut out, &z0);
    for (i, &w) in z1.iter().enumerate() {
        if i + h < out.len() {
            out[i + h] ^= w;
        } else {
            debug_assert_eq!(w, 0);
        }
    }
    for (i, &w) in z2.iter().enumerate() {
        if i + 2 * h < out.len() {
            out[i + 2 * h] ^= w;
        } else {
            debug_assert_eq!(w, 0);
        }
    }
    out
}

pub(crate) fn clmul(a: &[u64], b: &[u64]) -> Vec<u64> {
    clmul_threshold(a, b, KARATSUBA_THRESHOLD_WORDS)
}

/// Spread the low 32 bits of x so bit i lands at bit 2i.
fn spread32(x: u64) -> u64 {
    let mut x = x & 0xffff_ffff;
    x = (x | (x << 16)) & 0x0000_ffff_0000_ffff;
    x = (x | (x << 8)) & 0x00ff_00ff_00ff_00ff;
    x = (x | (x << 4)) & 0x0f0f_0f0f_0f0f_0f0f;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & 0x5555_5555_5555_5555;
    x
}

/// Inverse of spread32 on the even bits of x.
fn compress32(x: u64) -> u64 {
    let mut x = x & 0x5555_5555_5555_5555;
    x = (x | (x >> 1)) & 0x3333_3333_3333_3333;
    x = (x | (x >> 2)) & 0x0f0f_0f0f_0f0f_0f0f;
    x = (x | (x >> 4)) & 0x00ff_00ff_00ff_00ff;
    x = (x | (x >> 8)) & 0x0000_ffff_0000_ffff;
    x = (x | (x >> 16)) & 0x0000_0000_ffff_ffff;
    x
}

/// Frobenius square: bit i moves to bit 2i.
pub(crate) fn square_bits(src: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(src.len() * 2);
    for &w in src {
        out.push(spread32(w));
        out.push(spread32(w >> 32));
    }
    trim(&mut out);
    out
}

pub(crate) fn has_odd_bit(words: &[u64]) -> bool {
    words.iter().any(|&w| w & 0xaaaa_aaaa_aaaa_aaaa != 0)
}

/// Collect even-indexed bits: bit 2i moves to bit i. Odd bits are ignored.
pub(crate) fn even_bits(words: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(words.len().div_ceil(2));
    for pair in words.chunks(2) {
        let lo = compress32(pair[0]);
        let hi = if pair.len() == 2 { compress32(pair[1]) } else { 0 };
        out.push(lo | (hi << 32));
    }
    trim(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn clmul64_small() {
        // (x+1)(x+1) = x^2+1
        assert_eq!(clmul64(0b11, 0b11), (0b101, 0));
        // x^63 * x = x^64
        assert_eq!(clmul64(1 << 63, 0b10), (0, 1));
    }

    #[test]
    fn karatsuba_matches_schoolbook() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let la = rng.random_range(1..12);
            let lb = rng.random_range(1..12);
            let a: Vec<u64> = (0..la).map(|_| rng.random()).collect();
            let b: Vec<u64> = (0..lb).map(|_| rng.random()).collect();
            let mut s = clmul_schoolbook(&a, &b);
            trim(&mut s);
            let mut k = clmul_threshold(&a, &b, 1);
            trim(&mut k);
            let mut d = clmul(&a, &b);
            trim(&mut d);
            assert_eq!(s, k);
            assert_eq!(s, d);
        }
    }

    #[test]
    fn square_and_compress_roundtrip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let a: Vec<u64> = (0..3).map(|_| rng.random()).collect();
            let sq = square_bits(&a);
            assert!(!has_odd_bit(&sq));
            let mut back = even_bits(&sq);
            trim(&mut back);
            let mut a = a.clone();
            trim(&mut a);
            assert_eq!(back, a);
            // squaring agrees with self-multiplication in char 2
            let mut mm = clmul(&a, &a);
            trim(&mut mm);
            assert_eq!(mm, sq);
        }
    }

    #[test]
    fn shifts_roundtrip() {
        let a = vec![0xdead_beef_u64, 0x1234];
        let left = shifted_left(&a, 37);
        let back = shifted_right(&left, 37);
        let mut a = a;
        trim(&mut a);
        assert_eq!(back, a);
    }
}
