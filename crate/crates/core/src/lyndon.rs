//! Lyndon-word basis of the free Lie algebra on the homology alphabet.
//!
//! A Lyndon word is a word strictly smaller (lexicographically) than all of
//! its proper rotations.  The standard bracketing of a Lyndon word `w`
//! factors `w = uv` with `v` the longest proper Lyndon suffix and sets
//! `b(w) = [b(u), b(v)]`; the resulting tensors form a basis of the free
//! Lie algebra in each degree, with dimensions given by the Witt formula.

use crate::error::Result;
use crate::sig::{SurfaceSignature, Word};
use crate::tensor::{q_int, Q, Tensor};
use num::{ToPrimitive, Zero};

/// All Lyndon words of the exact given length over the signature's
/// alphabet, in lexicographic order (Duval's generation algorithm).
pub fn lyndon_words(sig: SurfaceSignature, len: usize) -> Vec<Word> {
    let alphabet = sig.symbols();
    let q = alphabet.len();
    let mut out = Vec::new();
    if len == 0 || q == 0 {
        return out;
    }
    // Duval: enumerate Lyndon words of length <= len, keep exact length
    let mut w: Vec<usize> = vec![0];
    loop {
        if w.len() == len {
            out.push(Word(w.iter().map(|&i| alphabet[i]).collect()));
        }
        // extend periodically to maximal length
        let cur = w.clone();
        while w.len() < len {
            w.push(cur[(w.len() - cur.len()) % cur.len()]);
        }
        // increment the last non-maximal letter
        while let Some(&last) = w.last() {
            if last == q - 1 {
                w.pop();
            } else {
                *w.last_mut().unwrap() = last + 1;
                break;
            }
        }
        if w.is_empty() {
            break;
        }
    }
    out
}

/// Is the word lexicographically strictly smaller than all proper rotations?
pub fn is_lyndon(w: &Word) -> bool {
    if w.is_empty() {
        return false;
    }
    (1..w.len()).all(|k| w.0 < w.rotate_left(k).0)
}

/// Standard bracketing of a Lyndon word, expanded as a tensor.
pub fn standard_bracketing(sig: SurfaceSignature, w: &Word) -> Result<Tensor> {
    debug_assert!(is_lyndon(w), "standard_bracketing needs a Lyndon word");
    if w.len() == 1 {
        return Tensor::from_symbol(sig, w.0[0]);
    }
    // longest proper Lyndon suffix
    let split = (1..w.len())
        .rev()
        .map(|k| w.len() - k)
        .find(|&s| is_lyndon(&Word(w.0[s..].to_vec())))
        .expect("every Lyndon word of length >= 2 has a proper Lyndon suffix");
    let u = standard_bracketing(sig, &Word(w.0[..split].to_vec()))?;
    let v = standard_bracketing(sig, &Word(w.0[split..].to_vec()))?;
    u.mul(&v)?.sub(&v.mul(&u)?)
}

/// Basis of the degree-`k` part of the free Lie algebra on `H`, as tensors,
/// indexed by Lyndon words in lexicographic order.
pub fn lie_basis(sig: SurfaceSignature, k: usize) -> Result<Vec<Tensor>> {
    lyndon_words(sig, k)
        .iter()
        .map(|w| standard_bracketing(sig, w))
        .collect()
}

/// Witt formula `(1/k) sum_{d | k} mu(d) q^{k/d}` for the dimension of the
/// degree-`k` part of the free Lie algebra on `q` generators.
pub fn witt_dimension(q: usize, k: usize) -> usize {
    assert!(k >= 1);
    let mut total = Q::zero();
    for d in 1..=k {
        if k % d == 0 {
            let m = moebius(d);
            if m != 0 {
                total += q_int(m) * q_int(q as i64).pow((k / d) as i32);
            }
        }
    }
    let per_k = total / q_int(k as i64);
    assert!(per_k.is_integer());
    per_k
        .to_integer()
        .to_usize()
        .expect("Witt dimension fits in usize at desk scale")
}

fn moebius(n: usize) -> i64 {
    let mut n = n;
    let mut primes = 0;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            primes += 1;
        }
        p += 1;
    }
    if n > 1 {
        primes += 1;
    }
    if primes % 2 == 0 {
        1
    } else {
        -1
    }
}
