//! Closed-form cost bounds, generic over the numeric type used to evaluate them.
//!
//! The rank-width bounds have rational coefficients; evaluate them with
//! [`crate::Ratio`] for exact answers or `f64` for plotting.

use num_traits::{FromPrimitive, Num};

fn c<T: FromPrimitive>(x: usize) -> T {
    T::from_usize(x).expect("constant fits the scalar type")
}

/// `n + r - 2`, the minimum cost for a connected graph with `n` vertices and rank-width `r`.
pub fn lower_bound(n: usize, r: usize) -> usize {
    (n + r).saturating_sub(2)
}

/// `(n - 1)(n + 4) / 6`, an upper bound valid for every graph on `n` vertices.
pub fn generic_upper<T: Num + FromPrimitive>(n: usize) -> T {
    if n == 0 {
        return T::zero();
    }
    c::<T>((n - 1) * (n + 4)) / c(6)
}

/// Whether `n` is large enough for [`rankwidth_upper`] to apply.
pub fn rankwidth_threshold_met(n: usize, r: usize) -> bool {
    if r == 0 {
        return false;
    }
    if r % 2 == 1 {
        4 * r * n + 6 * r + 3 >= 13 * r * r
    } else {
        4 * n + 6 >= 13 * r
    }
}

/// Upper bound for graphs of rank-width at most `r` on `n` vertices, or `None`
/// when `n` is below the threshold where it holds.
pub fn rankwidth_upper<T: Num + FromPrimitive>(n: usize, r: usize) -> Option<T> {
    if !rankwidth_threshold_met(n, r) {
        return None;
    }
    let rt = |k: u32| c::<T>(r.pow(k));
    Some(if r % 2 == 1 {
        let slope = (c::<T>(5) * rt(2) - T::one()) / (c::<T>(4) * rt(1));
        let offset = (c::<T>(221) * rt(4) + c::<T>(10) * rt(2) + c::<T>(36) * rt(1) + c::<T>(9) - c::<T>(180) * rt(3))
            / (c::<T>(96) * rt(2));
        slope * c(n) - offset
    } else {
        let slope = c::<T>(5) * rt(1) / c::<T>(4);
        let offset = (c::<T>(221) * rt(2) + c::<T>(100) - c::<T>(180) * rt(1)) / c::<T>(96);
        slope * c(n) - offset
    })
}

/// Smallest `n` from which one balanced cut per batch keeps the rank-width bound.
pub(crate) fn batch_start(r: usize) -> usize {
    let end = if r % 2 == 1 { (17 * r * r - 6 * r - 3) / (4 * r) } else { (17 * r - 6) / 4 };
    (end + 1).max(3 * r)
}

/// `⌊log₃ m⌋` for `m ≥ 1`.
pub fn floor_log3(mut m: usize) -> usize {
    assert!(m >= 1, "logarithm of zero");
    let mut k = 0;
    while m >= 3 {
        m /= 3;
        k += 1;
    }
    k
}

/// `2⌊log₃(n+1)⌋`, the degree ceiling guaranteed after rerouting a word.
pub fn reroute_degree_bound(n: usize) -> usize {
    2 * floor_log3(n + 1)
}

/// `2⌊log₃(n+1)⌋(n-1)`, the cost bound for circle graphs.
pub fn circle_upper(n: usize) -> usize {
    reroute_degree_bound(n) * n.saturating_sub(1)
}
