//! Independent reference implementations used by the integration tests.
//! None of these call into the code paths they check.

#![allow(dead_code)]

use std::collections::BTreeMap;

use layoutforge::corpus::Token;
use layoutforge::Hand;
use rand::rngs::StdRng;
use rand::Rng;

/// Every window of `n` tokens starting at every index, kept when all of its
/// tokens are letters.
pub fn brute_force_ngrams(tokens: &[Token], n: usize) -> BTreeMap<String, u64> {
    let mut out = BTreeMap::new();
    for start in 0..tokens.len() {
        if start + n > tokens.len() {
            break;
        }
        let mut gram = String::new();
        let mut ok = true;
        for t in &tokens[start..start + n] {
            match t {
                Token::Letter(c) => gram.push(*c),
                Token::Boundary => ok = false,
            }
        }
        if ok {
            *out.entry(gram).or_insert(0) += 1;
        }
    }
    out
}

/// Step-by-step replay of the greedy hand assignment. All sums are recomputed
/// from the raw digraph list at every step.
#[derive(Debug, PartialEq)]
pub struct OracleStep {
    pub letter: char,
    pub left_support: f64,
    pub left_confidence: f64,
    pub right_support: f64,
    pub right_confidence: f64,
    pub hand: Hand,
}

pub fn oracle_partition(
    mono: &[(char, u64)],
    digraphs: &[((char, char), u64)],
    total_letters: u64,
) -> (Vec<char>, Vec<char>, Vec<OracleStep>) {
    let mut ranking = mono.to_vec();
    // Descending count, then ascending code point.
    ranking.sort_by(|a, b| {
        if a.1 != b.1 {
            b.1.cmp(&a.1)
        } else {
            (a.0 as u32).cmp(&(b.0 as u32))
        }
    });
    let mut left = vec![ranking[1].0, ranking[2].0];
    let mut right = vec![ranking[0].0, ranking[3].0];
    let mut steps = Vec::new();
    for &(letter, _) in &ranking[4..] {
        let mut involvement = 0u64;
        for &((a, b), n) in digraphs {
            if a == letter || b == letter {
                involvement += n;
            }
        }
        let side_sum = |side: &[char]| -> u64 {
            let mut sum = 0;
            for &((a, b), n) in digraphs {
                let hit = (a == letter && side.contains(&b)) || (b == letter && side.contains(&a));
                if hit {
                    sum += n;
                }
            }
            sum
        };
        let (ls, rs) = (side_sum(&left), side_sum(&right));
        let pct = |x: u64, d: u64| if d == 0 { 0.0 } else { 100.0 * x as f64 / d as f64 };
        let step = OracleStep {
            letter,
            left_support: if involvement == 0 { 0.0 } else { pct(ls, total_letters) },
            left_confidence: pct(ls, involvement),
            right_support: if involvement == 0 { 0.0 } else { pct(rs, total_letters) },
            right_confidence: pct(rs, involvement),
            hand: Hand::Left,
        };
        let goes_right = step.left_support > step.right_support
            && step.left_confidence > step.right_confidence;
        let step = OracleStep {
            hand: if goes_right { Hand::Right } else { Hand::Left },
            ..step
        };
        if goes_right {
            right.push(letter);
        } else {
            left.push(letter);
        }
        steps.push(step);
    }
    (left, right, steps)
}

#[derive(Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub switching: u64,
    pub left: u64,
    pub right: u64,
    pub not_determined: u64,
}

/// Collects the hands of the determined letters, then counts changes between
/// neighbours.
pub fn rescan(tokens: &[Token], hand_of: impl Fn(char) -> Option<Hand>) -> OracleReport {
    let mut hands = Vec::new();
    let mut not_determined = 0;
    for t in tokens {
        if let Token::Letter(c) = t {
            match hand_of(*c) {
                Some(h) => hands.push(h),
                None => not_determined += 1,
            }
        }
    }
    OracleReport {
        switching: hands.windows(2).filter(|w| w[0] != w[1]).count() as u64,
        left: hands.iter().filter(|h| **h == Hand::Left).count() as u64,
        right: hands.iter().filter(|h| **h == Hand::Right).count() as u64,
        not_determined,
    }
}

/// Random text over `alphabet` with Zipf-like letter weights and words of
/// one to eight letters. Returns the text and its letter count.
pub fn random_corpus(rng: &mut StdRng, alphabet: &[char], letters: usize) -> String {
    let weights: Vec<f64> = (0..alphabet.len()).map(|i| 1.0 / (i as f64 + 1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut text = String::new();
    let mut produced = 0;
    while produced < letters {
        let len = rng.gen_range(1..=8).min(letters - produced);
        for _ in 0..len {
            let mut x = rng.gen::<f64>() * total;
            let mut pick = alphabet[alphabet.len() - 1];
            for (c, w) in alphabet.iter().zip(&weights) {
                if x < *w {
                    pick = *c;
                    break;
                }
                x -= w;
            }
            text.push(pick);
        }
        produced += len;
        text.push(if rng.gen_bool(0.1) { '\n' } else { ' ' });
    }
    text
}

/// Bengali letters usable as a synthetic alphabet.
pub fn bangla_letters() -> Vec<char> {
    ('\u{0985}'..='\u{09B9}')
        .filter(|c| !matches!(*c as u32, 0x098D | 0x098E | 0x0991 | 0x0992 | 0x09A9 | 0x09B1 | 0x09B3 | 0x09B4 | 0x09B5))
        .collect()
}
