//! Reference computations that share no code with the library.
#![allow(dead_code)]

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

fn ln_big(a: &BigUint) -> f64 {
    let bits = a.bits();
    if bits <= 1000 {
        return a.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    (a >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

fn choose(n: u64, k: u64) -> BigUint {
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    c
}

/// Exact `-log10 P(Binomial(n, num/den) >= x)` for every `x` in `0..=n`,
/// from integer tail sums.
pub fn exact_neg_log10_tails(n: u64, num: u64, den: u64) -> Vec<f64> {
    let q = den - num;
    // numerators of the pmf over den^n
    let terms: Vec<BigUint> = (0..=n)
        .map(|k| {
            choose(n, k) * BigUint::from(num).pow(k as u32) * BigUint::from(q).pow((n - k) as u32)
        })
        .collect();
    let total = BigUint::from(den).pow(n as u32);
    let mut out = vec![0.0; n as usize + 1];
    let mut upper = BigUint::zero();
    for x in (0..=n).rev() {
        upper += &terms[x as usize];
        let value = if upper.is_zero() {
            f64::INFINITY
        } else if &upper * 2u32 <= total {
            -(ln_big(&upper) - ln_big(&total)) / std::f64::consts::LN_10
        } else {
            let lower = &total - &upper;
            let ratio = BigRational::new(lower.into(), total.clone().into());
            -(-ratio.to_f64().unwrap()).ln_1p() / std::f64::consts::LN_10
        };
        out[x as usize] = value;
    }
    out
}

/// Average ranks by counting, 1-based.
pub fn brute_ranks(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|a| {
            let less = v.iter().filter(|b| *b < a).count() as f64;
            let equal = v.iter().filter(|b| *b == a).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect()
}

pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    sab / (saa * sbb).sqrt()
}

/// Spearman's rho as Pearson's r of average ranks.
pub fn spearman_oracle(a: &[f64], b: &[f64]) -> f64 {
    pearson(&brute_ranks(a), &brute_ranks(b))
}
