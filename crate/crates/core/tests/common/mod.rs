#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

/// A slope as a reduced pair `(p, q)`, `q ≥ 0`, with `(1, 0)` for ∞.
pub type RawSlope = (i64, i64);

pub const INF: RawSlope = (1, 0);

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// The Farey graph restricted to ∞ and the slopes `p/q` with `1 ≤ q ≤ q_max`
/// and `lo ≤ p/q ≤ hi`.
pub struct BoundedFarey {
    pub q_max: i64,
    pub lo: i64,
    pub hi: i64,
}

impl BoundedFarey {
    pub fn vertices(&self) -> Vec<RawSlope> {
        let mut out = vec![INF];
        for q in 1..=self.q_max {
            for p in self.lo * q..=self.hi * q {
                if gcd(p, q) == 1 {
                    out.push((p, q));
                }
            }
        }
        out
    }

    fn contains(&self, (p, q): RawSlope) -> bool {
        (p, q) == INF || (q >= 1 && q <= self.q_max && p >= self.lo * q && p <= self.hi * q)
    }

    /// Neighbours `r/s` of `p/q` inside the window: solutions of
    /// `p s − q r = ±1`.
    pub fn neighbours(&self, (p, q): RawSlope) -> Vec<RawSlope> {
        let mut out = Vec::new();
        if (p, q) == INF {
            // ∞ is adjacent exactly to the integers
            for n in self.lo..=self.hi {
                out.push((n, 1));
            }
            return out;
        }
        if q == 1 {
            out.push(INF);
        }
        for s in 1..=self.q_max {
            for sign in [1i64, -1] {
                // r = (p s − sign)/q must be an integer
                let num = p * s - sign;
                if num.rem_euclid(q) == 0 {
                    let r = num / q;
                    if self.contains((r, s)) && !out.contains(&(r, s)) {
                        out.push((r, s));
                    }
                }
            }
        }
        out
    }

    /// Breadth-first distances from `source` within the window.
    pub fn bfs(&self, source: RawSlope) -> HashMap<RawSlope, u64> {
        let mut dist = HashMap::new();
        dist.insert(source, 0);
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let d = dist[&v];
            for w in self.neighbours(v) {
                dist.entry(w).or_insert_with(|| {
                    queue.push_back(w);
                    d + 1
                });
            }
        }
        dist
    }
}

/// Free reduction of a word over `a, b, A, B` with a stack; an oracle for
/// `FreeWord`.
pub fn reduce(word: &str) -> String {
    let mut stack: Vec<char> = Vec::new();
    for c in word.chars() {
        let inv = if c.is_ascii_lowercase() {
            c.to_ascii_uppercase()
        } else {
            c.to_ascii_lowercase()
        };
        if stack.last() == Some(&inv) {
            stack.pop();
        } else {
            stack.push(c);
        }
    }
    stack.into_iter().collect()
}

/// Length of the cyclic reduction by repeatedly stripping a first letter
/// that cancels against the last.
pub fn cyclic_length(word: &str) -> usize {
    let mut w: Vec<char> = reduce(word).chars().collect();
    while w.len() >= 2 {
        let (f, l) = (w[0], w[w.len() - 1]);
        if f != l && f.eq_ignore_ascii_case(&l) {
            w.remove(0);
            w.pop();
        } else {
            break;
        }
    }
    w.len()
}

pub fn invert(word: &str) -> String {
    word.chars()
        .rev()
        .map(|c| {
            if c.is_ascii_lowercase() {
                c.to_ascii_uppercase()
            } else {
                c.to_ascii_lowercase()
            }
        })
        .collect()
}

/// Displays `1` for the empty word, matching the crate's canonical text.
pub fn canonical(word: &str) -> String {
    let r = reduce(word);
    if r.is_empty() {
        "1".into()
    } else {
        r
    }
}
