//! Small shared helpers: combinatorial counts, odometers, a stable hash for
//! config fingerprints.

/// Binomial coefficient, 0 when `k > n`. Saturates rather than overflowing.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// `base^exp` as f64; exact for the small exponents used here.
pub fn powi(base: usize, exp: usize) -> f64 {
    (base as f64).powi(exp as i32)
}

/// `base^exp` over u128, saturating.
pub fn upow(base: u128, exp: u32) -> u128 {
    base.checked_pow(exp).unwrap_or(u128::MAX)
}

/// Visits all tuples of `dims` indices in lexicographic order:
/// (0,..,0), (0,..,1), ...
pub fn for_each_tuple(dims: &[usize], mut f: impl FnMut(&[usize])) {
    if dims.contains(&0) {
        return;
    }
    let mut idx = vec![0usize; dims.len()];
    if dims.is_empty() {
        f(&idx);
        return;
    }
    loop {
        f(&idx);
        let mut pos = dims.len();
        while pos > 0 {
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < dims[pos] {
                break;
            }
            idx[pos] = 0;
            if pos == 0 {
                return;
            }
        }
    }
}

/// Smallest prime >= n (n >= 2).
pub fn next_prime(n: usize) -> usize {
    let mut p = n.max(2);
    loop {
        if is_prime(p) {
            return p;
        }
        p += 1;
    }
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// FNV-1a over bytes, rendered as fixed-width hex. Used for config
/// fingerprints in CLI outputs; stability matters, collision resistance
/// does not.
pub fn fnv1a_hex(bytes: &[u8]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}
