//! Reference implementations shared by the oracle and acceptance targets.
#![allow(dead_code)]

use exindex::estimators::{self, EstimatorError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const INSTANCES: usize = 1000;

pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

pub fn count_above(xs: &[f64], u: f64) -> usize {
    let mut c = 0;
    for &x in xs {
        if x > u {
            c += 1;
        }
    }
    c
}

pub fn ref_counts(x: &[f64], r: usize, u: f64) -> (usize, usize, usize) {
    let k = x.len() / r;
    let mut clusters = 0;
    let mut exceed = 0;
    for b in 0..k {
        let c = count_above(&x[b * r..(b + 1) * r], u);
        exceed += c;
        if c >= 1 {
            clusters += 1;
        }
    }
    (k, clusters, exceed)
}

pub fn ref_blocks(x: &[f64], r: usize, u: f64) -> Option<f64> {
    let (_, clusters, exceed) = ref_counts(x, r, u);
    (exceed > 0).then(|| clusters as f64 / exceed as f64)
}

pub fn ref_disjoint_blocks(x: &[f64], r: usize, u: f64) -> Option<f64> {
    let (k, clusters, exceed) = ref_counts(x, r, u);
    let kf = k as f64;
    let rf = r as f64;
    let a = 1.0 - clusters as f64 / kf;
    let b = 1.0 - exceed as f64 / (kf * rf);
    if a <= 0.0 || a >= 1.0 || b <= 0.0 || b >= 1.0 {
        return None;
    }
    Some(a.ln() / (rf * b.ln()))
}

pub fn ref_sliding_blocks(x: &[f64], r: usize, u: f64) -> Option<f64> {
    let n = x.len();
    let exceed = count_above(x, u);
    if exceed == 0 {
        return None;
    }
    let mut quiet = 0;
    for t in 0..=n - r {
        if count_above(&x[t..t + r], u) == 0 {
            quiet += 1;
        }
    }
    if quiet == 0 {
        return None;
    }
    let k = (n / r) as f64;
    Some(-(quiet as f64 / (n - r + 1) as f64).ln() * k / exceed as f64)
}

pub fn ref_runs(x: &[f64], u: f64, l: usize) -> Option<f64> {
    let n = x.len();
    let exceed = count_above(x, u);
    if exceed == 0 {
        return None;
    }
    let mut ends = 0;
    // 1-based i = 1..=n-l
    for i in 1..=n - l {
        if x[i - 1] > u && count_above(&x[i..i + l], u) == 0 {
            ends += 1;
        }
    }
    Some(ends as f64 / exceed as f64)
}

pub fn ref_intervals(x: &[f64], u: f64) -> Option<f64> {
    let pos: Vec<usize> = (1..=x.len()).filter(|&t| x[t - 1] > u).collect();
    let n = pos.len();
    if n < 2 {
        return None;
    }
    let gaps: Vec<f64> = (1..n).map(|i| (pos[i] - pos[i - 1]) as f64).collect();
    let s1: f64 = gaps.iter().map(|t| t - 1.0).sum();
    let s2: f64 = gaps.iter().map(|t| (t - 1.0) * (t - 2.0)).sum();
    if s1 == 0.0 && s2 == 0.0 {
        return None;
    }
    if s2 == 0.0 {
        return Some(1.0);
    }
    Some((2.0 * s1 * s1 / ((n - 1) as f64 * s2)).min(1.0))
}

pub fn ref_ecdf(x: &[f64], v: f64) -> f64 {
    x.iter().filter(|&&y| y <= v).count() as f64 / (x.len() + 1) as f64
}

pub fn ref_northrop(x: &[f64], maxima: &[f64], r: usize) -> f64 {
    let mean: f64 = maxima.iter().map(|&m| -(r as f64) * ref_ecdf(x, m).ln()).sum::<f64>() / maxima.len() as f64;
    1.0 / mean
}

pub fn block_max(b: &[f64]) -> f64 {
    let mut m = b[0];
    for &v in b {
        if v > m {
            m = v;
        }
    }
    m
}

pub fn ref_northrop_sliding(x: &[f64], r: usize) -> f64 {
    let maxima: Vec<f64> = (0..=x.len() - r).map(|t| block_max(&x[t..t + r])).collect();
    ref_northrop(x, &maxima, r)
}

pub fn ref_northrop_disjoint(x: &[f64], r: usize) -> f64 {
    let maxima: Vec<f64> = (0..x.len() / r).map(|b| block_max(&x[b * r..(b + 1) * r])).collect();
    ref_northrop(x, &maxima, r)
}

pub fn ref_scp(x: &[f64], r: usize, s: usize, alpha: f64) -> Option<f64> {
    let k = x.len() / r;
    if k < s {
        return None;
    }
    let blocks: Vec<&[f64]> = (0..k).map(|b| &x[b * r..(b + 1) * r]).collect();
    let sums: Vec<f64> = blocks.iter().map(|b| b.iter().map(|v| v.powf(alpha)).sum()).collect();
    let mut sorted = sums.clone();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let v = sorted[s - 1];
    let ratios: Vec<f64> = blocks
        .iter()
        .zip(&sums)
        .filter(|(_, &sum)| sum > v)
        .map(|(b, &sum)| block_max(b).powf(alpha) / sum)
        .collect();
    (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64)
}

pub fn ref_hill(x: &[f64], k: usize) -> Option<f64> {
    let mut a: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    a.sort_by(|p, q| q.partial_cmp(p).unwrap());
    if a[k] <= 0.0 {
        return None;
    }
    let m: f64 = (0..k).map(|i| a[i].ln() - a[k].ln()).sum::<f64>() / k as f64;
    (m > 0.0).then(|| 1.0 / m)
}

/// Small instances with plenty of ties: integers 0..6 mixed with uniforms.
pub fn tiny_instance(rng: &mut ChaCha8Rng) -> (Vec<f64>, f64) {
    let n = rng.random_range(2..=30);
    let x: Vec<f64> = (0..n)
        .map(|_| {
            if rng.random_bool(0.6) {
                rng.random_range(0..7) as f64
            } else {
                rng.random::<f64>() * 6.0
            }
        })
        .collect();
    let u = if rng.random_bool(0.5) { x[rng.random_range(0..n)] } else { rng.random::<f64>() * 6.0 };
    (x, u)
}

pub fn check(name: &str, x: &[f64], got: Result<f64, EstimatorError>, want: Option<f64>) {
    match (got, want) {
        (Ok(a), Some(b)) => assert!(close(a, b), "{name}: {a} vs {b} on {x:?}"),
        (Err(_), None) => {}
        (got, want) => panic!("{name}: library {got:?}, reference {want:?} on {x:?}"),
    }
}

/// Euler-Maclaurin with 10^4 direct terms and six Bernoulli corrections.
pub fn zeta_oracle(s: f64) -> f64 {
    const N: usize = 10_000;
    const B: [f64; 6] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0];
    let nf = N as f64;
    let mut sum = 0.0;
    for k in (1..N).rev() {
        sum += (k as f64).powf(-s);
    }
    sum += nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s);
    // term_j = B_{2j} / (2j)! * s (s+1) ... (s+2j-2) * N^{-s-2j+1}
    let mut rising = s;
    let mut fact = 2.0;
    let mut power = nf.powf(-s - 1.0);
    for (i, b) in B.iter().enumerate() {
        let j = (i + 1) as f64;
        if i > 0 {
            rising *= (s + 2.0 * j - 3.0) * (s + 2.0 * j - 2.0);
            fact *= 2.0 * j * (2.0 * j - 1.0);
            power /= nf * nf;
        }
        sum += b / fact * rising * power;
    }
    sum
}

/// `zeta(1/2 - n)` through the reflection formula with `zeta(1/2 + n)` summed
/// directly and `Gamma(1/2 + n)` from the double factorial.
pub fn zeta_half_minus(n: usize) -> f64 {
    if n == 0 {
        return zeta_oracle(0.5);
    }
    let s = 0.5 - n as f64;
    let one_minus = 0.5 + n as f64;
    let z = zeta_oracle(one_minus);
    let mut gamma = std::f64::consts::PI.sqrt();
    for k in 0..n {
        gamma *= 0.5 + k as f64;
    }
    let pi = std::f64::consts::PI;
    2f64.powf(s) * pi.powf(s - 1.0) * (pi * s / 2.0).sin() * gamma * z
}

pub fn brown_resnick_direct(delta: f64) -> f64 {
    let mut sum = 0.0;
    let mut fact = 1.0;
    for n in 0..40 {
        if n > 0 {
            fact *= n as f64;
        }
        let c = zeta_half_minus(n) / (fact * (2 * n + 1) as f64);
        sum += c * (-delta / 4.0).powi(n as i32);
    }
    delta * ((delta / std::f64::consts::PI).sqrt() * sum).exp()
}


/// Compare every estimator with its reference on random tiny instances;
/// returns the number of comparisons made.
pub fn compare_on_tiny_instances(seed: u64, instances: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut compared = 0;
    for _ in 0..instances {
        let (x, u) = tiny_instance(&mut rng);
        let n = x.len();
        let r = rng.random_range(1..=n);
        let l = rng.random_range(1..n);

        check("bl", &x, estimators::blocks_estimator(&x, r, u).map(|e| e.value), ref_blocks(&x, r, u));
        check("dbl", &x, estimators::disjoint_blocks_estimator(&x, r, u).map(|e| e.value), ref_disjoint_blocks(&x, r, u));
        check("slbl", &x, estimators::sliding_blocks_estimator(&x, r, u).map(|e| e.value), ref_sliding_blocks(&x, r, u));
        check("runs", &x, estimators::runs_estimator(&x, u, l).map(|e| e.value), ref_runs(&x, u, l));
        check("int", &x, estimators::intervals_estimator(&x, u).map(|e| e.value), ref_intervals(&x, u));
        check("Nsl", &x, estimators::northrop_sliding(&x, r).map(|e| e.value), Some(ref_northrop_sliding(&x, r)));
        check("Ndbl", &x, estimators::northrop_disjoint(&x, r).map(|e| e.value), Some(ref_northrop_disjoint(&x, r)));

        let s = rng.random_range(2..=4);
        let alpha = [0.5, 1.0, 2.0][rng.random_range(0..3)];
        check("scp", &x, estimators::scp_estimator(&x, r, s, alpha).map(|e| e.value), ref_scp(&x, r, s, alpha));
        compared += 8;

        if n >= 3 {
            let k = rng.random_range(2..n);
            check("hill", &x, estimators::hill_estimator(&x, k), ref_hill(&x, k));
            compared += 1;
        }
    }
    compared
}
