//! Index functions of stream entries: integer-valued polynomials of degree at
//! most two, stored as `2·f(k) = q2·k² + q1·k + q0`.
//!
//! Affine maps `αk + β` and the Cantor pairing `k ↦ pair(m, k)` both live
//! here, and the class is closed under shifts `k ↦ k + d`, unrolling
//! `k ↦ Qk + r` and outer affine maps.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexFn {
    q2: i128,
    q1: i128,
    q0: i128,
}

/// Cantor pairing `⟨m, i⟩ = (m+i)(m+i+1)/2 + i`.
pub fn pair(m: u64, i: u64) -> u64 {
    let s = m + i;
    s * (s + 1) / 2 + i
}

/// Inverse Cantor pairing.
pub fn unpair(n: u64) -> (u64, u64) {
    let mut s = (((8 * n as u128 + 1) as f64).sqrt() as u64).saturating_sub(1) / 2;
    while (s + 1) * (s + 2) / 2 <= n {
        s += 1;
    }
    while s * (s + 1) / 2 > n {
        s -= 1;
    }
    let i = n - s * (s + 1) / 2;
    (s - i, i)
}

impl IndexFn {
    pub fn affine(alpha: u64, beta: u64) -> IndexFn {
        IndexFn {
            q2: 0,
            q1: 2 * alpha as i128,
            q0: 2 * beta as i128,
        }
    }

    pub fn constant(c: u64) -> IndexFn {
        IndexFn::affine(0, c)
    }

    /// `k ↦ pair(m, k)`.
    pub fn pairing(m: u64) -> IndexFn {
        let m = m as i128;
        IndexFn {
            q2: 1,
            q1: 2 * m + 3,
            q0: m * m + m,
        }
    }

    pub fn from_raw(q2: i128, q1: i128, q0: i128) -> Result<IndexFn> {
        let f = IndexFn { q2, q1, q0 };
        if q2 < 0 || (q2 + q1) % 2 != 0 || q0 % 2 != 0 || q0 < 0 || q2 + q1 < 0 {
            return Err(Error::InvalidSchema(format!("index function {f} is not natural-valued and monotone")));
        }
        Ok(f)
    }

    pub fn raw(&self) -> (i128, i128, i128) {
        (self.q2, self.q1, self.q0)
    }

    pub fn at(&self, k: u64) -> u64 {
        let k = k as i128;
        let v = (self.q2 * k * k + self.q1 * k + self.q0) / 2;
        u64::try_from(v).expect("index out of range")
    }

    /// Value at a possibly negative argument, if it is a natural number.
    pub fn at_signed(&self, k: i128) -> Option<u64> {
        let v = (self.q2 * k * k + self.q1 * k + self.q0) / 2;
        u64::try_from(v).ok()
    }

    /// Strictly increasing on ℕ (every letter then occurs finitely often).
    pub fn is_increasing(&self) -> bool {
        self.q2 >= 0 && self.q2 + self.q1 >= 2
    }

    pub fn is_constant(&self) -> bool {
        self.q2 == 0 && self.q1 == 0
    }

    /// `Some((α, β))` if the function is `αk + β`.
    pub fn as_affine(&self) -> Option<(u64, u64)> {
        if self.q2 != 0 {
            return None;
        }
        Some(((self.q1 / 2) as u64, (self.q0 / 2) as u64))
    }

    /// `k ↦ f(k + d)`.
    pub fn shift(&self, d: i128) -> IndexFn {
        IndexFn {
            q2: self.q2,
            q1: 2 * self.q2 * d + self.q1,
            q0: self.q2 * d * d + self.q1 * d + self.q0,
        }
    }

    /// `k ↦ f(scale·k + d)`.
    pub fn substitute(&self, scale: u64, d: i128) -> IndexFn {
        let s = scale as i128;
        IndexFn {
            q2: self.q2 * s * s,
            q1: s * (2 * self.q2 * d + self.q1),
            q0: self.q2 * d * d + self.q1 * d + self.q0,
        }
    }

    /// `k ↦ α·f(k) + β`.
    pub fn outer(&self, alpha: u64, beta: u64) -> IndexFn {
        let a = alpha as i128;
        IndexFn {
            q2: a * self.q2,
            q1: a * self.q1,
            q0: a * self.q0 + 2 * beta as i128,
        }
    }

    /// `(f - rho)/3` if that is again integer-valued.
    pub fn div3(&self, rho: u64) -> Option<IndexFn> {
        let (q2, q1, q0) = (self.q2, self.q1, self.q0 - 2 * rho as i128);
        // binomial basis: f = q2·C(k,2) + ((q2+q1)/2)·k + q0/2
        let b1 = (q2 + q1) / 2;
        if q2 % 3 != 0 || b1 % 3 != 0 || (q0 / 2) % 3 != 0 {
            return None;
        }
        Some(IndexFn {
            q2: q2 / 3,
            q1: q1 / 3,
            q0: q0 / 3,
        })
    }

    /// The unique `k ≥ 0` with `f(k) = n`, for increasing `f`.
    pub fn solve(&self, n: u64) -> Option<u64> {
        if self.is_constant() {
            return None;
        }
        if self.at(0) > n {
            return None;
        }
        let (mut lo, mut hi) = (0u64, n.max(1));
        // f(k) >= k + f(0), so f(n) >= n
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.at(mid) < n {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        (self.at(lo) == n).then_some(lo)
    }
}

impl fmt::Display for IndexFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((alpha, beta)) = self.as_affine() {
            return match (alpha, beta) {
                (0, b) => write!(f, "{b}"),
                (1, 0) => f.write_str("k"),
                (1, b) => write!(f, "k+{b}"),
                (a, 0) => write!(f, "{a}k"),
                (a, b) => write!(f, "{a}k+{b}"),
            };
        }
        let alpha = self.q2;
        if alpha > 0 && self.q1 % alpha == 0 {
            let t = self.q1 / alpha - 3;
            if t >= 0 && t % 2 == 0 {
                let m = t / 2;
                let beta2 = self.q0 - alpha * (m * m + m);
                if beta2 >= 0 && beta2 % 2 == 0 {
                    if alpha != 1 {
                        write!(f, "{alpha}")?;
                    }
                    write!(f, "pair({m},k)")?;
                    if beta2 != 0 {
                        write!(f, "+{}", beta2 / 2)?;
                    }
                    return Ok(());
                }
            }
        }
        write!(f, "poly({},{},{})", self.q2, self.q1, self.q0)
    }
}
