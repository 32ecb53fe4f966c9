//! Brute-force oracles shared by the integration tests.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;

/// Every set partition of `{1..n}` as blocks in increasing order, from
/// restricted growth strings.
pub fn all_set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(n: usize, labels: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<Vec<usize>>>) {
        if labels.len() == n {
            let mut blocks = vec![Vec::new(); max];
            for (i, &l) in labels.iter().enumerate() {
                blocks[l].push(i + 1);
            }
            out.push(blocks);
            return;
        }
        for l in 0..=max {
            labels.push(l);
            rec(n, labels, max.max(l + 1), out);
            labels.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), 0, &mut out);
    out
}

/// No `a < b < c < d` with `a, c` in one block and `b, d` in another.
pub fn brute_noncrossing(blocks: &[Vec<usize>]) -> bool {
    for (i, x) in blocks.iter().enumerate() {
        for (j, y) in blocks.iter().enumerate() {
            if i == j {
                continue;
            }
            for &a in x {
                for &c in x.iter().filter(|&&c| c > a) {
                    let between = y.iter().any(|&b| a < b && b < c);
                    if between && y.iter().any(|&d| d > c) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

pub fn brute_nc(n: usize) -> Vec<Vec<Vec<usize>>> {
    all_set_partitions(n)
        .into_iter()
        .filter(|p| brute_noncrossing(p))
        .collect()
}

/// Partitions whose blocks are runs of consecutive integers.
pub fn brute_interval_count(n: usize) -> usize {
    all_set_partitions(n)
        .into_iter()
        .filter(|p| p.iter().all(|b| b.windows(2).all(|w| w[1] == w[0] + 1)))
        .count()
}

/// Words over `C A M K` whose level path starts and ends at 0, stays
/// non-negative, and sits at level ≥ 1 before every `A` and `M`.
pub fn brute_admissible_words(n: usize) -> Vec<String> {
    let letters = ['C', 'A', 'M', 'K'];
    let mut out = Vec::new();
    for code in 0..4usize.pow(n as u32) {
        let mut c = code;
        let word: String = (0..n)
            .map(|_| {
                let l = letters[c % 4];
                c /= 4;
                l
            })
            .collect();
        let mut level = 0i64;
        let mut ok = true;
        for ch in word.chars() {
            match ch {
                'C' => level += 1,
                'A' => {
                    ok &= level >= 1;
                    level -= 1;
                }
                'M' => ok &= level >= 1,
                _ => {}
            }
        }
        if ok && level == 0 {
            out.push(word);
        }
    }
    out.sort();
    out
}

pub fn catalan(n: u64) -> u64 {
    (0..n).fold(1u64, |c, k| c * 2 * (2 * k + 1) / (k + 2))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
