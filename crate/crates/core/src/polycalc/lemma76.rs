//! Exact coefficient machinery for expanding iterated sums of `t^N phi`.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `a(m,j) = (-1)^j C(N,j) C(m-1+j,j) j!`
pub fn lemma76_a(m: u64, j: u64, n: u64) -> Result<BigInt> {
    if m == 0 {
        return Err(Error::invalid("m must be positive"));
    }
    if j > n {
        return Err(Error::invalid(format!("j={j} exceeds N={n}")));
    }
    let mag = binomial(n, j) * binomial(m - 1 + j, j) * factorial(j);
    Ok(if j % 2 == 1 { -mag } else { mag })
}

/// Which closed-form branch applies to a `(m, k, N)` triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Lemma76Branch {
    /// `m <= k`
    Low,
    /// `k+1 <= m <= k+N`
    Vanishing,
    /// `m > k+N`
    High,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma76Identity {
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub equal: bool,
    pub branch: Lemma76Branch,
}

/// Compare `sum_{j<=N} a(m,j)/(j+k)!` with its three-branch closed form, exactly.
pub fn lemma76_identity(m: u64, k: u64, n: u64) -> Result<Lemma76Identity> {
    if m == 0 {
        return Err(Error::invalid("m must be positive"));
    }
    let mut lhs = BigRational::zero();
    for j in 0..=n {
        lhs += BigRational::new(lemma76_a(m, j, n)?, factorial(j + k));
    }
    let tail = BigRational::new(factorial(n), factorial(n + k));
    let (branch, rhs) = if m <= k {
        (Lemma76Branch::Low, tail * BigRational::from_integer(binomial(n + k - m, n)))
    } else if m <= k + n {
        (Lemma76Branch::Vanishing, BigRational::zero())
    } else {
        let sign = if n % 2 == 1 { -BigInt::one() } else { BigInt::one() };
        (Lemma76Branch::High, tail * BigRational::from_integer(sign * binomial(m - k - 1, n)))
    };
    let equal = lhs == rhs;
    Ok(Lemma76Identity { lhs, rhs, equal, branch })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn a_values() {
        assert_eq!(lemma76_a(1, 1, 2).unwrap(), BigInt::from(-2));
        assert_eq!(lemma76_a(1, 0, 5).unwrap(), BigInt::from(1));
        assert_eq!(lemma76_a(3, 2, 2).unwrap(), BigInt::from(12));
        assert!(lemma76_a(1, 3, 2).is_err());
    }

    #[test]
    fn identity_examples() {
        let id = lemma76_identity(1, 0, 1).unwrap();
        assert_eq!((id.lhs.clone(), id.rhs.clone()), (r(0, 1), r(0, 1)));
        assert_eq!(id.branch, Lemma76Branch::Vanishing);

        let id = lemma76_identity(1, 2, 1).unwrap();
        assert_eq!(id.lhs, r(1, 3));
        assert_eq!(id.rhs, r(1, 3));
        assert_eq!(id.branch, Lemma76Branch::Low);

        let id = lemma76_identity(5, 1, 2).unwrap();
        assert_eq!(id.lhs, r(1, 1));
        assert!(id.equal);
        assert_eq!(id.branch, Lemma76Branch::High);
    }

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(5, 0), BigInt::from(1));
        assert_eq!(binomial(5, 5), BigInt::from(1));
        assert_eq!(binomial(3, 4), BigInt::from(0));
        assert_eq!(binomial(10, 3), BigInt::from(120));
    }
}
