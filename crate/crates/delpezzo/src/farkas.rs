//! Exact cone membership: is `x` a nonnegative combination of given
//! integer vectors? Decided by phase one of the simplex method over the
//! rationals with Bland's rule, which never cycles. A negative answer comes
//! with a Farkas certificate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::{primitive_integer_vector, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// `x = Σ weight · generator[index]` with positive weights.
    Member { weights: Vec<(usize, Q)> },
    /// A functional `z` (coordinate dot product) with `z·g ≥ 0` for every
    /// generator `g` and `z·x < 0`.
    NotMember { certificate: Vec<Q> },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }
}

/// Decides `target ∈ cone(generators)` in coordinates. All generators must
/// have the length of `target`.
pub fn cone_membership(generators: &[Vec<i64>], target: &[Q]) -> Membership {
    let m = target.len();
    assert!(generators.iter().all(|g| g.len() == m), "generator length mismatch");
    let n = generators.len();
    if target.iter().all(Zero::is_zero) {
        return Membership::Member { weights: Vec::new() };
    }

    // b = σ⊙(x/s) with s > 0 and σ the sign flips making b ≥ 0
    let bx = primitive_integer_vector(target);
    let k = bx.iter().position(|v| !v.is_zero()).expect("nonzero target");
    let s = &target[k] / Q::from_integer(bx[k].clone());
    let sigma: Vec<i64> = bx.iter().map(|v| if v.is_negative() { -1 } else { 1 }).collect();
    let b: Vec<Q> = bx.iter().map(|v| Q::from_integer(v.abs())).collect();

    let column = |j: usize| -> Vec<Q> {
        if j < n {
            (0..m).map(|r| Q::from_integer(BigInt::from(sigma[r] * generators[j][r]))).collect()
        } else {
            let mut e = vec![Q::zero(); m];
            e[j - n] = Q::one();
            e
        }
    };
    let cost = |j: usize| if j < n { Q::zero() } else { Q::one() };

    let mut basic: Vec<usize> = (n..n + m).collect();
    let mut binv: Vec<Vec<Q>> = (0..m)
        .map(|r| (0..m).map(|c| if r == c { Q::one() } else { Q::zero() }).collect())
        .collect();
    let mut xb = b.clone();

    loop {
        let y: Vec<Q> = (0..m)
            .map(|k| (0..m).map(|r| cost(basic[r]) * &binv[r][k]).sum())
            .collect();
        let entering = first_negative_reduced_cost(generators, &sigma, &y, n, m);
        let Some(e) = entering else {
            let obj: Q = (0..m).map(|r| cost(basic[r]) * &xb[r]).sum();
            if obj.is_zero() {
                let mut weights: Vec<(usize, Q)> = (0..m)
                    .filter(|&r| basic[r] < n && !xb[r].is_zero())
                    .map(|r| (basic[r], &xb[r] * &s))
                    .collect();
                weights.sort_by_key(|w| w.0);
                return Membership::Member { weights };
            }
            // z = -σ⊙y separates x from the cone
            let certificate = (0..m).map(|k| -&y[k] * Q::from_integer(BigInt::from(sigma[k]))).collect();
            return Membership::NotMember { certificate };
        };
        let col = column(e);
        let u: Vec<Q> = (0..m).map(|r| (0..m).map(|k| &binv[r][k] * &col[k]).sum()).collect();
        let mut leave: Option<(usize, Q)> = None;
        for r in 0..m {
            if !u[r].is_positive() {
                continue;
            }
            let ratio = &xb[r] / &u[r];
            leave = match leave {
                None => Some((r, ratio)),
                Some((p, best)) => {
                    if ratio < best || (ratio == best && basic[r] < basic[p]) {
                        Some((r, ratio))
                    } else {
                        Some((p, best))
                    }
                }
            };
        }
        let (p, _) = leave.expect("phase one is bounded below");
        let piv = u[p].clone();
        for k in 0..m {
            binv[p][k] = &binv[p][k] / &piv;
        }
        xb[p] = &xb[p] / &piv;
        for r in 0..m {
            if r == p || u[r].is_zero() {
                continue;
            }
            let f = u[r].clone();
            for k in 0..m {
                let v = &binv[r][k] - &f * &binv[p][k];
                binv[r][k] = v;
            }
            xb[r] = &xb[r] - &f * &xb[p];
        }
        basic[p] = e;
    }
}

/// Smallest index with negative reduced cost `c_j - y·A_j`.
fn first_negative_reduced_cost(generators: &[Vec<i64>], sigma: &[i64], y: &[Q], n: usize, m: usize) -> Option<usize> {
    let lcm = y.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let yi: Vec<BigInt> = y.iter().map(|x| (x * Q::from_integer(lcm.clone())).to_integer()).collect();
    let small: Option<Vec<i128>> = yi
        .iter()
        .zip(sigma)
        .map(|(v, s)| v.to_i64().map(|x| i128::from(x) * i128::from(*s)))
        .collect();
    for (j, g) in generators.iter().enumerate() {
        // c_j = 0, so the reduced cost is negative iff y·A_j > 0
        let positive = match &small {
            Some(ys) => ys.iter().zip(g).map(|(a, &b)| a * i128::from(b)).sum::<i128>() > 0,
            None => {
                let acc: BigInt = (0..m).map(|r| &yi[r] * (sigma[r] * g[r])).sum();
                acc.is_positive()
            }
        };
        if positive {
            return Some(j);
        }
    }
    (0..m).find(|&r| y[r] > Q::one()).map(|r| n + r)
}
