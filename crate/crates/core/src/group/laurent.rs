//! Laurent polynomials over a prime field and 2x2 matrices built from them.
//!
//! Elements of `PGL_2(F_p[t,t^-1])` are stored as matrices normalized modulo
//! the center: the unique `unit * t^k` scaling is applied so that the first
//! nonzero entry (row-major) has valuation 0 and lowest coefficient 1.

/// Laurent polynomial over `F_p`. `coeffs[i]` is the coefficient of
/// `t^(low + i)`; both ends are nonzero, and zero is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Laurent {
    pub low: i16,
    pub coeffs: Vec<u8>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent {
            low: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Laurent {
            low: 0,
            coeffs: vec![1],
        }
    }

    /// `c * t^k`
    pub fn monomial(c: u8, k: i16, p: u8) -> Self {
        let c = c % p;
        if c == 0 {
            Laurent::zero()
        } else {
            Laurent {
                low: k,
                coeffs: vec![c],
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn trim(low: i16, mut coeffs: Vec<u8>) -> Self {
        let head = coeffs.iter().take_while(|&&c| c == 0).count();
        if head == coeffs.len() {
            return Laurent::zero();
        }
        let tail = coeffs.iter().rev().take_while(|&&c| c == 0).count();
        coeffs.truncate(coeffs.len() - tail);
        coeffs.drain(..head);
        Laurent {
            low: low + head as i16,
            coeffs,
        }
    }

    pub fn add(&self, other: &Laurent, p: u8) -> Laurent {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let low = self.low.min(other.low);
        let high = (self.low + self.coeffs.len() as i16).max(other.low + other.coeffs.len() as i16);
        let mut out = vec![0u8; (high - low) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[(self.low - low) as usize + i] = c;
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            let j = (other.low - low) as usize + i;
            out[j] = (out[j] + c) % p;
        }
        Laurent::trim(low, out)
    }

    pub fn mul(&self, other: &Laurent, p: u8) -> Laurent {
        if self.is_zero() || other.is_zero() {
            return Laurent::zero();
        }
        let mut out = vec![0u16; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + u16::from(a) * u16::from(b)) % u16::from(p);
            }
        }
        Laurent::trim(self.low + other.low, out.into_iter().map(|c| c as u8).collect())
    }

    pub fn neg(&self, p: u8) -> Laurent {
        Laurent {
            low: self.low,
            coeffs: self.coeffs.iter().map(|&c| (p - c) % p).collect(),
        }
    }

    /// Multiply by the unit `c * t^k` (`c` nonzero mod `p`).
    fn scale(&self, c: u8, k: i16, p: u8) -> Laurent {
        if self.is_zero() {
            return Laurent::zero();
        }
        Laurent {
            low: self.low + k,
            coeffs: self.coeffs.iter().map(|&a| (a * c) % p).collect(),
        }
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let d = self.low + i as i16;
            let term = match (c, d) {
                (_, 0) => format!("{c}"),
                (1, 1) => "t".to_string(),
                (1, _) => format!("t^{d}"),
                (_, 1) => format!("{c}t"),
                (_, _) => format!("{c}t^{d}"),
            };
            parts.push(term);
        }
        parts.join("+")
    }
}

fn inv_mod(c: u8, p: u8) -> u8 {
    // p is a small prime; brute force
    (1..p).find(|&x| (x * c) % p == 1).expect("unit in F_p")
}

/// Matrix `[[a, b], [c, d]]` over `F_p[t, t^-1]`, normalized representative
/// of its class in `PGL_2`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PglMat {
    pub entries: [Laurent; 4],
}

impl PglMat {
    pub fn identity() -> Self {
        PglMat {
            entries: [
                Laurent::one(),
                Laurent::zero(),
                Laurent::zero(),
                Laurent::one(),
            ],
        }
    }

    pub fn new(entries: [Laurent; 4], p: u8) -> Self {
        PglMat { entries }.normalized(p)
    }

    /// Scales by the unique central `unit * t^k` making the first nonzero
    /// entry have valuation 0 and lowest coefficient 1.
    pub fn normalized(&self, p: u8) -> PglMat {
        for e in &self.entries {
            if !e.is_zero() {
                let c = inv_mod(e.coeffs[0], p);
                let k = -e.low;
                return PglMat {
                    entries: [
                        self.entries[0].scale(c, k, p),
                        self.entries[1].scale(c, k, p),
                        self.entries[2].scale(c, k, p),
                        self.entries[3].scale(c, k, p),
                    ],
                };
            }
        }
        panic!("zero matrix is not an element of PGL_2");
    }

    pub fn mul(&self, other: &PglMat, p: u8) -> PglMat {
        let [a, b, c, d] = &self.entries;
        let [e, f, g, h] = &other.entries;
        PglMat::new(
            [
                a.mul(e, p).add(&b.mul(g, p), p),
                a.mul(f, p).add(&b.mul(h, p), p),
                c.mul(e, p).add(&d.mul(g, p), p),
                c.mul(f, p).add(&d.mul(h, p), p),
            ],
            p,
        )
    }

    /// In `PGL_2` the adjugate represents the inverse class (determinant is
    /// a unit and scales away).
    pub fn inverse(&self, p: u8) -> PglMat {
        let [a, b, c, d] = &self.entries;
        PglMat::new([d.clone(), b.neg(p), c.neg(p), a.clone()], p)
    }

    pub fn render(&self) -> String {
        let [a, b, c, d] = &self.entries;
        format!(
            "[[{},{}],[{},{}]]",
            a.render(),
            b.render(),
            c.render(),
            d.render()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t_mat() -> PglMat {
        PglMat::new(
            [
                Laurent::monomial(1, 1, 2),
                Laurent::zero(),
                Laurent::zero(),
                Laurent::one(),
            ],
            2,
        )
    }

    #[test]
    fn normalization_kills_central_scaling() {
        let m = t_mat();
        let scaled = PglMat {
            entries: [
                m.entries[0].scale(1, 3, 2),
                m.entries[1].scale(1, 3, 2),
                m.entries[2].scale(1, 3, 2),
                m.entries[3].scale(1, 3, 2),
            ],
        }
        .normalized(2);
        assert_eq!(m, scaled);
    }

    #[test]
    fn inverse_is_two_sided() {
        let m = t_mat();
        let id = PglMat::identity();
        assert_eq!(m.mul(&m.inverse(2), 2), id);
        assert_eq!(m.inverse(2).mul(&m, 2), id);
    }

    #[test]
    fn poly_arithmetic_mod_3() {
        let a = Laurent {
            low: -1,
            coeffs: vec![1, 2],
        }; // t^-1 + 2
        let b = Laurent {
            low: 0,
            coeffs: vec![1, 1],
        }; // 1 + t
        // (t^-1 + 2)(1 + t) = t^-1 + 1 + 2 + 2t = t^-1 + 3 + 2t = t^-1 + 2t over F_3
        let prod = a.mul(&b, 3);
        assert_eq!(
            prod,
            Laurent {
                low: -1,
                coeffs: vec![1, 0, 2]
            }
        );
    }
}
