use num_bigint::BigUint;

/// `g(delta)` exactly. Only `delta <= 5` fits in memory: `g(6)` has about
/// `2^136` bits, so larger arguments return `None`.
pub fn g(delta: u32) -> Option<BigUint> {
    assert!(delta >= 1, "g is defined for delta >= 1");
    let mut val = BigUint::from(0u32);
    for d in 2..=delta {
        let prev = u64::try_from(&val).ok()?;
        let exp = prev.checked_add(u64::from(d) - 2)?;
        if exp > 1 << 24 {
            return None;
        }
        val = (BigUint::from(1u32) << exp) + val;
    }
    Some(val)
}

/// `g(delta)` when it is at most `bound`, without building larger values.
pub fn g_at_most(delta: u32, bound: u64) -> Option<u64> {
    assert!(delta >= 1, "g is defined for delta >= 1");
    let mut val: u64 = 0;
    for d in 2..=delta {
        let exp = val.checked_add(u64::from(d) - 2)?;
        if exp >= 64 {
            return None;
        }
        val = (1u64 << exp).checked_add(val)?;
        if val > bound {
            return None;
        }
    }
    Some(val)
}

/// Smallest `delta` with `g(delta) >= h`.
///
/// Walks `delta` upward keeping `g(delta - 1) < h`, comparing the bit length
/// of `h - g(delta - 1)` with the exponent of the next step.
pub fn g_inv(h: u64) -> u32 {
    if h == 0 {
        return 1;
    }
    let mut prev: u64 = 0;
    let mut delta = 2u32;
    loop {
        let exp = prev + u64::from(delta) - 2;
        let gap = h - prev;
        // 2^exp >= gap  iff  exp >= bit length of (gap - 1)
        if exp >= 64 || (gap - 1) >> exp == 0 {
            return delta;
        }
        prev += 1 << exp;
        delta += 1;
    }
}

/// Reversible persistent price of a pyramid or complete binary tree of height `h`.
pub fn pyramid_price(h: u64) -> u64 {
    h + u64::from(g_inv(h))
}

/// `floor(log2 x)` for `x >= 1`.
pub fn floor_log2(x: u64) -> u32 {
    63 - x.leading_zeros()
}

/// `ceil(log2 x)` for `x >= 1`.
pub fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let vals: Vec<u64> = (1..=4).map(|d| u64::try_from(g(d).unwrap()).unwrap()).collect();
        assert_eq!(vals, [0, 1, 5, 133]);
        assert_eq!(g(5).unwrap(), (BigUint::from(1u32) << 136u32) + BigUint::from(133u32));
        assert!(g(6).is_none());
        assert_eq!(g_at_most(4, 133), Some(133));
        assert_eq!(g_at_most(4, 132), None);
    }

    #[test]
    fn inverse_values() {
        assert_eq!(g_inv(0), 1);
        assert_eq!(g_inv(1), 2);
        assert_eq!(g_inv(5), 3);
        assert_eq!(g_inv(6), 4);
        assert_eq!(g_inv(133), 4);
        assert_eq!(g_inv(134), 5);
        assert_eq!(g_inv(u64::MAX), 5);
    }

    #[test]
    fn inverse_matches_definition() {
        for h in 0..2000u64 {
            let direct = (1..).find(|&d| g_at_most(d, h).is_none_or(|v| v >= h)).unwrap();
            assert_eq!(g_inv(h), direct, "h={h}");
        }
    }

    #[test]
    fn logs() {
        assert_eq!((floor_log2(1), floor_log2(8), floor_log2(9)), (0, 3, 3));
        assert_eq!((ceil_log2(1), ceil_log2(8), ceil_log2(9)), (0, 3, 4));
    }
}
