//! Exponent schedule of the ply reduction and degree pruning rounds.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

/// Largest number of rounds supported by the exact arithmetic.
pub const MAX_ROUNDS: u32 = 60;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Schedule {
    pub epsilon: f64,
    /// Number of rounds.
    pub k: u32,
    /// `alphas[0]` is the ply exponent; `alphas[1..]` are the degree
    /// exponents of the pruning rounds, in increasing order.
    #[serde(serialize_with = "ser_ratios")]
    pub alphas: Vec<Rational>,
    /// Separator exponent `1 - alphas[0]`.
    #[serde(serialize_with = "ser_ratio")]
    pub exponent: Rational,
}

fn ser_ratio<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

fn ser_ratios<S: serde::Serializer>(rs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(rs.len()))?;
    for r in rs {
        seq.serialize_element(&format!("{}/{}", r.numer(), r.denom()))?;
    }
    seq.end()
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

impl Schedule {
    /// Schedule with exactly `k` rounds.
    pub fn with_rounds(k: u32, epsilon: f64) -> Result<Self> {
        if k == 0 || k > MAX_ROUNDS {
            return Err(Error::InvalidParameter(format!(
                "round count must lie in 1..={MAX_ROUNDS}, got {k}"
            )));
        }
        let p = 1i128 << k;
        let a1 = Rational::new(p - 1, 4 * p - 3);
        let three_a1 = a1 * 3;
        let mut alphas = vec![a1];
        let mut prev = Rational::from_integer(1);
        for _ in 1..k {
            let next = (three_a1 + prev) / 2;
            alphas.push(next);
            prev = next;
        }
        Ok(Schedule {
            epsilon,
            k,
            exponent: Rational::from_integer(1) - a1,
            alphas,
        })
    }

    /// Exponent entering the final separator size `(2 + alpha_1 + alpha_k) / 4`.
    /// With a single round no pruning happens and the degree bound is `n^1`.
    pub fn last_exponent(&self) -> Rational {
        if self.k >= 2 {
            self.alphas[self.alphas.len() - 1]
        } else {
            Rational::from_integer(1)
        }
    }

    pub fn ply_exponent(&self) -> f64 {
        to_f64(&self.alphas[0])
    }

    pub fn degree_exponents(&self) -> Vec<f64> {
        self.alphas[1..].iter().map(to_f64).collect()
    }

    /// Ply threshold `max(floor, ceil(n^alpha_1 / 4))`.
    pub fn ply_threshold(&self, n: usize, floor: usize) -> usize {
        let t = (0.25 * (n as f64).powf(self.ply_exponent())).ceil() as usize;
        t.max(floor)
    }

    /// Degree thresholds `ceil(n^alpha_i)` of the pruning rounds.
    pub fn degree_thresholds(&self, n: usize) -> Vec<usize> {
        self.degree_exponents()
            .iter()
            .map(|&a| ((n as f64).powf(a).ceil() as usize).max(1))
            .collect()
    }
}

/// Rounds `k = max(1, ceil(log2(1/eps)))`, i.e. the least `k >= 1` with
/// `2^-k <= eps`.
pub fn rounds_for(epsilon: f64) -> Result<u32> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    let mut k = 1;
    while 0.5f64.powi(k as i32) > epsilon {
        k += 1;
        if k > MAX_ROUNDS {
            return Err(Error::InvalidParameter(format!(
                "epsilon {epsilon} needs more than {MAX_ROUNDS} rounds"
            )));
        }
    }
    Ok(k)
}

pub fn compute_schedule(epsilon: f64) -> Result<Schedule> {
    Schedule::with_rounds(rounds_for(epsilon)?, epsilon)
}
