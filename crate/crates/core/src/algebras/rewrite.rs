//! Normal forms of words in the generators u, v of a quaternion algebra
//! under u² = u + a, v² = b, vu = v − uv. Normal words are 1, u, v, uv.

use std::collections::BTreeMap;

use crate::fields::{Elem, Field};

/// Letter 0 is u, letter 1 is v.
type Word = Vec<u8>;

fn add_term(f: &Field, acc: &mut BTreeMap<Word, Elem>, w: Word, c: Elem) {
    let e = acc.entry(w).or_insert_with(|| f.zero());
    *e = f.add(e, &c);
}

/// Rewrites a linear combination of words until every word is normal.
fn normalize(f: &Field, a: &Elem, b: &Elem, mut terms: BTreeMap<Word, Elem>) -> BTreeMap<Word, Elem> {
    loop {
        let mut changed = false;
        let mut next: BTreeMap<Word, Elem> = BTreeMap::new();
        for (w, c) in terms {
            if f.is_zero(&c) {
                continue;
            }
            let Some(i) =
                (0..w.len().saturating_sub(1)).find(|&i| matches!((w[i], w[i + 1]), (0, 0) | (1, 1) | (1, 0)))
            else {
                add_term(f, &mut next, w, c);
                continue;
            };
            changed = true;
            let (pre, post) = (&w[..i], &w[i + 2..]);
            let splice = |mid: &[u8]| -> Word { pre.iter().chain(mid).chain(post).copied().collect() };
            match (w[i], w[i + 1]) {
                (0, 0) => {
                    // uu → u + a
                    add_term(f, &mut next, splice(&[0]), c.clone());
                    add_term(f, &mut next, splice(&[]), f.mul(&c, a));
                }
                (1, 1) => {
                    // vv → b
                    add_term(f, &mut next, splice(&[]), f.mul(&c, b));
                }
                _ => {
                    // vu → v − uv
                    add_term(f, &mut next, splice(&[1]), c.clone());
                    add_term(f, &mut next, splice(&[0, 1]), f.neg(&c));
                }
            }
        }
        terms = next;
        if !changed {
            return terms;
        }
    }
}

fn basis_word(i: usize) -> Word {
    match i {
        0 => vec![],
        1 => vec![0],
        2 => vec![1],
        _ => vec![0, 1],
    }
}

fn word_index(w: &[u8]) -> usize {
    match w {
        [] => 0,
        [0] => 1,
        [1] => 2,
        [0, 1] => 3,
        _ => unreachable!("not a normal word"),
    }
}

/// table[i][j] = coordinates of e_i·e_j over (1, u, v, w = uv).
pub fn quaternion_table(f: &Field, a: &Elem, b: &Elem) -> Vec<Vec<Vec<Elem>>> {
    (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    let mut word = basis_word(i);
                    word.extend(basis_word(j));
                    let terms = normalize(f, a, b, BTreeMap::from([(word, f.one())]));
                    let mut out = vec![f.zero(); 4];
                    for (w, c) in terms {
                        let k = word_index(&w);
                        out[k] = f.add(&out[k], &c);
                    }
                    out
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_relations() {
        let f = Field::rationals();
        let (a, b) = (f.from_i64(-1), f.from_i64(2));
        let t = quaternion_table(&f, &a, &b);
        let e = |c: [i64; 4]| c.iter().map(|x| f.from_i64(*x)).collect::<Vec<_>>();
        // uw = w + av, wu = −av, vw = b − bu, wv = bu, w² = −ab
        assert_eq!(t[1][3], e([0, 0, -1, 1]));
        assert_eq!(t[3][1], e([0, 0, 1, 0]));
        assert_eq!(t[2][3], e([2, -2, 0, 0]));
        assert_eq!(t[3][2], e([0, 2, 0, 0]));
        assert_eq!(t[3][3], e([2, 0, 0, 0]));
        // vu = v − w
        assert_eq!(t[2][1], e([0, 0, 1, -1]));
    }
}
