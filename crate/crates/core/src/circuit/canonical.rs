use std::fmt;

use serde::{Deserialize, Serialize};

/// Equivalence used to merge circuits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Equivalence {
    /// Cyclic shifts of the piece sequence (choice of starting square).
    Direct,
    /// Cyclic shifts, mirror images and reversal of the direction of travel.
    Full,
}

/// Lexicographically least representative of a piece-code orbit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalKey {
    pub stage: Equivalence,
    pub codes: Vec<i8>,
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.codes.iter().map(|c| format!("{c:+}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

fn is_straight(code: i8) -> bool {
    matches!(code, 1 | 3)
}

/// Mirror image: every curved piece turns the other way.
pub fn mirror_codes(codes: &[i8]) -> Vec<i8> {
    codes
        .iter()
        .map(|&c| if is_straight(c) { c } else { -c })
        .collect()
}

/// Traversal reversal: the order is reversed, left and right are swapped and
/// middle-to-vertex pieces become vertex-to-middle ones (5 ↔ 6, 7 ↔ 8).
pub fn reverse_codes(codes: &[i8]) -> Vec<i8> {
    codes
        .iter()
        .rev()
        .map(|&c| {
            if is_straight(c) {
                return c;
            }
            let partner = match c.abs() {
                5 => 6,
                6 => 5,
                7 => 8,
                8 => 7,
                t => t,
            };
            -c.signum() * partner
        })
        .collect()
}

/// Start index of the lexicographically least rotation (Booth's algorithm, O(n)).
pub fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let at = |i: isize| &s[i as usize % n];
    let mut f = vec![-1isize; 2 * n];
    let mut k: isize = 0;
    for j in 1..2 * n as isize {
        let sj = at(j);
        let mut i = f[(j - k - 1) as usize];
        while i != -1 && sj != at(k + i + 1) {
            if sj < at(k + i + 1) {
                k = j - i - 1;
            }
            i = f[i as usize];
        }
        if sj != at(k + i + 1) {
            // i == -1: compare against the current candidate's first letter
            if sj < at(k) {
                k = j;
            }
            f[(j - k) as usize] = -1;
        } else {
            f[(j - k) as usize] = i + 1;
        }
    }
    k as usize % n
}

pub fn canonical_rotation<T: Ord + Clone>(s: &[T]) -> Vec<T> {
    let k = least_rotation(s);
    s[k..].iter().chain(&s[..k]).cloned().collect()
}

/// Canonical key of a signed piece-code sequence at the given stage.
pub fn canonical_key(codes: &[i8], stage: Equivalence) -> CanonicalKey {
    let codes = match stage {
        Equivalence::Direct => canonical_rotation(codes),
        Equivalence::Full => {
            let mirrored = mirror_codes(codes);
            [
                canonical_rotation(codes),
                canonical_rotation(&mirrored),
                canonical_rotation(&reverse_codes(codes)),
                canonical_rotation(&reverse_codes(&mirrored)),
            ]
            .into_iter()
            .min()
            .unwrap()
        }
    };
    CanonicalKey { stage, codes }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_min_rotation(s: &[i8]) -> Vec<i8> {
        (0..s.len().max(1))
            .map(|k| s[k.min(s.len())..].iter().chain(&s[..k.min(s.len())]).copied().collect::<Vec<_>>())
            .min()
            .unwrap()
    }

    #[test]
    fn booth_matches_naive_on_small_words() {
        // every word of length ≤ 7 over a 3-letter alphabet
        for len in 0..=7u32 {
            for mut w in 0..3i32.pow(len) {
                let word: Vec<i8> = (0..len)
                    .map(|_| {
                        let c = (w % 3) as i8;
                        w /= 3;
                        c
                    })
                    .collect();
                assert_eq!(canonical_rotation(&word), naive_min_rotation(&word), "{word:?}");
            }
        }
    }

    #[test]
    fn mirror_and_reverse_examples() {
        assert_eq!(mirror_codes(&[2, 2, 2, 2]), vec![-2, -2, -2, -2]);
        assert_eq!(mirror_codes(&[1, 3, 5, -6]), vec![1, 3, -5, 6]);
        assert_eq!(reverse_codes(&[5, -6]), vec![5, -6]);
        assert_eq!(reverse_codes(&[1, 2, 5, -4]), vec![4, -6, -2, 1]);
        assert_eq!(reverse_codes(&[7, -8, 3]), vec![3, 7, -8]);
    }

    #[test]
    fn transforms_are_involutions() {
        let w = [1, -2, 5, 3, -6, 4, 2, -5, 6];
        assert_eq!(reverse_codes(&reverse_codes(&w)), w.to_vec());
        assert_eq!(mirror_codes(&mirror_codes(&w)), w.to_vec());
        assert_eq!(mirror_codes(&reverse_codes(&w)), reverse_codes(&mirror_codes(&w)));
    }

    #[test]
    fn keys_are_idempotent() {
        let w = [2, 1, -5, 6, 2, 2, 1, 1];
        for stage in [Equivalence::Direct, Equivalence::Full] {
            let k = canonical_key(&w, stage);
            assert_eq!(canonical_key(&k.codes, stage), k);
        }
    }

    #[test]
    fn display() {
        assert_eq!(canonical_key(&[2, 1, -6], Equivalence::Direct).to_string(), "-6,+2,+1");
    }
}
