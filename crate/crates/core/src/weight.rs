use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{digits, undigits, Params};

/// An irreducible representation of `GL_2(F_q)` in characteristic `p`,
/// encoded by its Serre-weight data: the vector `s` of symmetric-power
/// exponents (one per embedding) and a single determinant-twist exponent
/// `d mod q - 1`.
///
/// Two weights are isomorphic iff they agree on `(s, d)`, so plain equality
/// is isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight {
    pub s: Vec<u64>,
    pub d: u64,
}

impl Weight {
    pub fn new(params: &Params, s: Vec<u64>, d: u64) -> Result<Self> {
        if s.len() != params.f {
            return Err(Error::InvalidParameter(format!(
                "weight has {} exponents, expected f = {}",
                s.len(),
                params.f
            )));
        }
        if let Some(&bad) = s.iter().find(|&&x| x >= params.p) {
            return Err(Error::Range(format!("symmetric power {bad} not in [0, p-1]")));
        }
        Ok(Weight { s, d: d % params.e() })
    }

    /// Build a weight from per-embedding determinant exponents `t` and
    /// symmetric powers `s`: the twist collapses to `d = sum t_j p^j mod q-1`.
    pub fn normalize(params: &Params, t: &[u64], s: Vec<u64>) -> Result<Self> {
        if t.len() != params.f {
            return Err(Error::InvalidParameter(format!(
                "twist vector has {} entries, expected f = {}",
                t.len(),
                params.f
            )));
        }
        let e = params.e() as u128;
        let mut d: u128 = 0;
        for (j, &tj) in t.iter().enumerate() {
            d = (d + (tj as u128) * (params.ppow(j) as u128)) % e;
        }
        Weight::new(params, s, d as u64)
    }

    /// The canonical per-embedding twist vector: base-p digits of the lift of
    /// `d` in `[0, q-2]`.  (That lift never has all digits equal to `p-1`,
    /// which is exactly the admissibility normalization.)
    pub fn t_vector(&self, params: &Params) -> Vec<u64> {
        digits(self.d % params.e(), params.p, params.f).expect("d is reduced")
    }

    /// No `s_j` equal to `p - 1`.
    pub fn is_regular(&self, params: &Params) -> bool {
        self.s.iter().all(|&x| x != params.p - 1)
    }

    /// Dimension `prod (s_j + 1)` of the underlying representation.
    pub fn dim(&self) -> u64 {
        self.s.iter().map(|&x| x + 1).product()
    }

    /// Twist by the `k`-th power of the determinant character.
    pub fn twist(&self, params: &Params, k: u64) -> Weight {
        Weight { s: self.s.clone(), d: (self.d + k) % params.e() }
    }

    /// Contragredient weight: `Sym^s` is self-dual up to `det^{-s}`, so the
    /// dual has the same `s` and twist `-(d + sum s_j p^j)`.
    pub fn dual(&self, params: &Params) -> Weight {
        let e = params.e();
        let sval: u64 = undigits(&self.s, params.p) % e;
        let d = (2 * e - (self.d + sval) % e) % e;
        Weight { s: self.s.clone(), d }
    }

    /// Base change to the unramified quadratic extension: repeat `s` and send
    /// `d` to `d (1 + q) mod q^2 - 1`.
    pub fn base_change(&self, params: &Params) -> Weight {
        let mut s = self.s.clone();
        s.extend_from_slice(&self.s);
        let d = ((self.d as u128) * (1 + params.q() as u128) % params.e2() as u128) as u64;
        Weight { s, d }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pf(p: u64, f: usize) -> Params {
        Params::new(p, f).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let p52 = pf(5, 2);
        // t = (3, 0): d = 3
        let w = Weight::normalize(&p52, &[3, 0], vec![1, 0]).unwrap();
        assert_eq!(w, Weight { s: vec![1, 0], d: 3 });
        // t = (1, 2): d = 1 + 2*5 = 11
        let w = Weight::normalize(&p52, &[1, 2], vec![2, 2]).unwrap();
        assert_eq!(w.d, 11);
        assert_eq!(w.t_vector(&p52), vec![1, 2]);
        // all-(p-1) twist collapses to d = 0, same as the zero twist
        let w = Weight::normalize(&p52, &[4, 4], vec![0, 0]).unwrap();
        assert_eq!(w.d, 0);
        assert_eq!(w.t_vector(&p52), vec![0, 0]);
    }

    #[test]
    fn normalize_bijection_exhaustive() {
        // (s, d) <-> (t, s) with t the digit vector of the lift of d.
        for (p, f) in [(5u64, 2usize), (7, 2), (5, 3)] {
            let params = pf(p, f);
            for d in 0..params.e() {
                let t = digits(d, p, f).unwrap();
                assert!(t.iter().any(|&x| x != p - 1));
                let w = Weight::normalize(&params, &t, vec![0; f]).unwrap();
                assert_eq!(w.d, d);
                assert_eq!(w.t_vector(&params), t);
            }
        }
    }

    #[test]
    fn regularity_and_dim() {
        let p52 = pf(5, 2);
        assert!(Weight::new(&p52, vec![2, 1], 0).unwrap().is_regular(&p52));
        assert!(!Weight::new(&p52, vec![2, 4], 0).unwrap().is_regular(&p52));
        assert_eq!(Weight::new(&p52, vec![2, 3], 0).unwrap().dim(), 12);
    }

    #[test]
    fn base_change_examples() {
        let p51 = pf(5, 1);
        let w = Weight { s: vec![2], d: 3 };
        let bc = w.base_change(&p51);
        assert_eq!(bc, Weight { s: vec![2, 2], d: 3 * 6 % 24 });
    }

    #[test]
    fn base_change_injective() {
        for (p, f) in [(5u64, 1usize), (5, 2)] {
            let params = pf(p, f);
            let mut seen = std::collections::HashSet::new();
            for s0 in 0..p {
                for d in 0..params.e() {
                    let mut s = vec![s0];
                    s.resize(f, 0);
                    let w = Weight::new(&params, s, d).unwrap();
                    assert!(seen.insert(w.base_change(&params)));
                }
            }
        }
    }

    #[test]
    fn dual_is_involutive() {
        let p52 = pf(5, 2);
        for d in 0..p52.e() {
            let w = Weight::new(&p52, vec![2, 1], d).unwrap();
            assert_eq!(w.dual(&p52).dual(&p52), w);
        }
    }

    #[test]
    fn weight_json_shape() {
        let w = Weight { s: vec![2, 1], d: 3 };
        assert_eq!(serde_json::to_string(&w).unwrap(), r#"{"s":[2,1],"d":3}"#);
    }
}
