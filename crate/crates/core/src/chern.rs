//! Chern and Segre classes up to degree 4 over a Picard-rank-1 base.
//!
//! Every class is a polynomial in the fundamental divisor H, so a total class
//! is five rational coefficients of H⁰..H⁴. Integration (multiplying by H⁴ =
//! degree) happens only where numbers are produced, never here.

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{int, Rational};
use crate::fano::SplitPair;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassKind {
    Chern,
    Segre,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernVector {
    pub c: [Rational; 5],
    pub kind: ClassKind,
}

impl ChernVector {
    pub fn one(kind: ClassKind) -> Self {
        ChernVector {
            c: [int(1), int(0), int(0), int(0), int(0)],
            kind,
        }
    }

    pub fn from_i64(c: [i64; 5], kind: ClassKind) -> Self {
        ChernVector {
            c: c.map(int),
            kind,
        }
    }

    /// c_k(B^∨) = (−1)^k c_k(B).
    pub fn dual(&self) -> Self {
        let mut out = self.clone();
        for (k, x) in out.c.iter_mut().enumerate() {
            if k % 2 == 1 {
                *x = -x.clone();
            }
        }
        out
    }

    /// Product of total classes, truncated at degree 4.
    pub fn mul(&self, other: &ChernVector, kind: ClassKind) -> ChernVector {
        let mut c: [Rational; 5] = Default::default();
        for (k, slot) in c.iter_mut().enumerate() {
            for i in 0..=k {
                *slot += &self.c[i] * &other.c[k - i];
            }
        }
        ChernVector { c, kind }
    }

    pub fn to_i64(&self) -> Option<[i64; 5]> {
        let v: Option<Vec<i64>> = self.c.iter().map(crate::exact::as_i64).collect();
        v.and_then(|v| v.try_into().ok())
    }
}

impl Serialize for ChernVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.c.iter().map(|q| q.to_string()).collect();
        strs.serialize(s)
    }
}

/// Total Chern class of ⊕O(a_i): the elementary symmetric polynomials of the twists.
pub fn chern_split(twists: &[i64]) -> ChernVector {
    let mut c: [Rational; 5] = Default::default();
    c[0] = Rational::one();
    for &a in twists {
        let a = int(a);
        for k in (1..5).rev() {
            let prev = c[k - 1].clone();
            c[k] += prev * &a;
        }
    }
    ChernVector {
        c,
        kind: ClassKind::Chern,
    }
}

/// Segre class of the dual bundle, s(B^∨) = c(B^∨)⁻¹, by the closed formulas.
pub fn segre_dual(cv: &ChernVector) -> ChernVector {
    debug_assert_eq!(cv.kind, ClassKind::Chern);
    let [_, c1, c2, c3, c4] = &cv.c;
    let c1_2 = c1 * c1;
    let s2 = &c1_2 - c2;
    let s3 = &c1_2 * c1 - int(2) * c1 * c2 + c3;
    let s4 = &c1_2 * &c1_2 - int(3) * &c1_2 * c2 + c2 * c2 + int(2) * c1 * c3 - c4;
    ChernVector {
        c: [Rational::one(), c1.clone(), s2, s3, s4],
        kind: ClassKind::Segre,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    /// F − E^∨
    FMinusEDual,
    /// E − F^∨
    EMinusFDual,
}

/// Chern class of a virtual bundle A − B^∨, that is c(A)·s(B^∨).
pub fn virtual_chern(pair: &SplitPair, dir: Direction) -> ChernVector {
    let (a, b) = match dir {
        Direction::FMinusEDual => (&pair.f, &pair.e),
        Direction::EMinusFDual => (&pair.e, &pair.f),
    };
    chern_split(a).mul(&segre_dual(&chern_split(b)), ClassKind::Chern)
}

/// Nodes of the determinantal hypersurface: d·(c2² − c1·c3) of F − E^∨.
pub fn odp_count(pair: &SplitPair) -> Result<u64> {
    let v = virtual_chern(pair, Direction::FMinusEDual);
    let n = (&v.c[2] * &v.c[2] - &v.c[1] * &v.c[3]) * int(pair.base.degree);
    if !n.is_integer() || n < Rational::zero() {
        return Err(Error::MalformedCase(format!("{pair}: node count {n}")));
    }
    n.to_integer()
        .try_into()
        .map_err(|_| Error::MalformedCase(format!("{pair}: node count {n} out of range")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fano::{enumerate_cases, Catalog};
    use proptest::prelude::*;

    fn pair(id: &str) -> SplitPair {
        SplitPair::parse(id, Catalog::builtin()).unwrap()
    }

    // Oracle: expand ∏(1 + a_i x) by brute force over subsets.
    fn expand_oracle(twists: &[i64]) -> [i64; 5] {
        let mut c = [0i64; 5];
        for mask in 0u32..(1 << twists.len()) {
            let k = mask.count_ones() as usize;
            if k <= 4 {
                c[k] += (0..twists.len())
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| twists[i])
                    .product::<i64>();
            }
        }
        c
    }

    // Oracle: invert a power series with constant term 1 term by term.
    fn invert_oracle(c: [i64; 5]) -> [i64; 5] {
        let mut s = [0i64; 5];
        s[0] = 1;
        for k in 1..5 {
            s[k] = -(1..=k).map(|i| c[i] * s[k - i]).sum::<i64>();
        }
        s
    }

    #[test]
    fn split_classes() {
        assert_eq!(chern_split(&[1; 5]).to_i64(), Some([1, 5, 10, 10, 5]));
        assert_eq!(chern_split(&[0, 0]).to_i64(), Some([1, 0, 0, 0, 0]));
        assert_eq!(chern_split(&[2, 2, 1]).to_i64(), Some(expand_oracle(&[2, 2, 1])));
        assert_eq!(chern_split(&[2, 2, 1]).to_i64(), Some([1, 5, 8, 4, 0]));
    }

    #[test]
    fn segre_examples() {
        let s = segre_dual(&chern_split(&[1; 5])).to_i64().unwrap();
        assert_eq!(s, [1, 5, 15, 35, 70]);
        assert_eq!(s[4], 625 - 750 + 100 + 100 - 5);
        assert_eq!(segre_dual(&chern_split(&[0, 0])).to_i64(), Some([1, 0, 0, 0, 0]));
        assert_eq!(
            segre_dual(&chern_split(&[4, 1])).to_i64(),
            Some([1, 5, 21, 85, 341])
        );
    }

    #[test]
    fn virtual_examples() {
        let quintic = pair("P4/F=1,1,1,1,1/E=0,0,0,0,0");
        assert_eq!(
            virtual_chern(&quintic, Direction::FMinusEDual).to_i64(),
            Some([1, 5, 10, 10, 5])
        );
        // E − F^∨ for F = (2,2,1): degree-2 coefficient 25 − 8 = 17
        let c = virtual_chern(&pair("P4/F=2,2,1/E=0,0,0"), Direction::EMinusFDual);
        let oracle = invert_oracle(expand_oracle(&[-2, -2, -1]));
        assert_eq!(c.to_i64(), Some(oracle));
        assert_eq!(c.to_i64(), Some([1, 5, 17, 49, 129]));
        let gr = virtual_chern(&pair("Gr24/F=2,1/E=1,0"), Direction::FMinusEDual);
        assert_eq!(gr.c[2], int(6));
        assert_eq!(gr.c[2], int(2 * (4 - 1)));
    }

    #[test]
    fn node_counts() {
        assert_eq!(odp_count(&pair("P4/F=1,1,1,1,1/E=0,0,0,0,0")), Ok(50));
        assert_eq!(odp_count(&pair("P4/F=2,2,1/E=0,0,0")), Ok(44));
        for c in enumerate_cases() {
            let n = odp_count(&c).unwrap() as i64;
            let d = c.base.degree;
            match (c.base.id.as_str(), c.f.as_slice()) {
                (id, [1, 1]) if id.starts_with("Mu") => assert_eq!(n, d),
                (id, [1, 1, 1]) if id.starts_with("dP") => assert_eq!(n, 6 * d),
                (id, [2, 1]) if id.starts_with("dP") => assert_eq!(n, 4 * d),
                _ => assert!(n > 0),
            }
        }
    }

    #[test]
    fn recurrences_on_catalog() {
        for c in enumerate_cases() {
            check_recurrences(&c.f, &c.e, c.base.index);
        }
    }

    fn check_recurrences(f: &[i64], e: &[i64], index: i64) {
        let fe = chern_split(f).mul(&segre_dual(&chern_split(e)), ClassKind::Chern);
        let ef = chern_split(e).mul(&segre_dual(&chern_split(f)), ClassKind::Chern);
        let c1 = int(index);
        assert_eq!(&fe.c[1], &c1);
        assert_eq!(&fe.c[2] + &ef.c[2], &c1 * &c1);
        assert_eq!(&fe.c[3] - &ef.c[3], &c1 * (&fe.c[2] - &ef.c[2]));
    }

    fn twists() -> impl Strategy<Value = (Vec<i64>, Vec<i64>)> {
        (2usize..6).prop_flat_map(|n| {
            (
                prop::collection::vec(-6i64..7, n),
                prop::collection::vec(-6i64..7, n),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn chern_times_segre_is_one(t in prop::collection::vec(-9i64..10, 0..7)) {
            let c = chern_split(&t);
            let prod = c.dual().mul(&segre_dual(&c), ClassKind::Chern);
            prop_assert_eq!(prod, ChernVector::one(ClassKind::Chern));
            prop_assert_eq!(segre_dual(&c).to_i64(), Some(invert_oracle(c.dual().to_i64().unwrap())));
            prop_assert_eq!(c.to_i64(), Some(expand_oracle(&t)));
        }

        #[test]
        fn recurrences_on_random_pairs((f, e) in twists()) {
            let index = f.iter().chain(&e).sum::<i64>();
            check_recurrences(&f, &e, index);
        }

        #[test]
        fn dual_sign_rule((f, e) in twists()) {
            // c(F − E^∨) against c(F^∨ − E)
            let lhs = chern_split(&f).mul(&segre_dual(&chern_split(&e)), ClassKind::Chern);
            let fd: Vec<i64> = f.iter().map(|a| -a).collect();
            let ed: Vec<i64> = e.iter().map(|b| -b).collect();
            let rhs = chern_split(&fd).mul(&segre_dual(&chern_split(&ed)), ClassKind::Chern);
            prop_assert_eq!(lhs.dual(), rhs);
        }
    }
}
