//! Slow, direct reference implementations shared by the integration tests.
//! None of them calls into the library's algorithms; they work on plain
//! `i32` tokens.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

pub const W2: [i32; 18] = [1, 2, 3, 4, 5, -1, 6, -2, -5, 7, 8, -3, -6, 9, -7, -4, -8, -9];

pub const PRINTED_V: [i32; 36] = [
    1, -7, 8, -3, 1, -7, 8, -4, 5, -2, 3, -8, 9, -4, 5, -2, 3, -6, 4, -8, 9, -6, 4, -9, 7, -1, 2, -5, 6, -9, 7, -1,
    2, -5, 6, -3,
];

/// Letter order used for canonical representatives: base, then `+` first.
fn key(x: i32) -> (i32, bool) {
    (x.abs(), x < 0)
}

fn lex_less(a: &[i32], b: &[i32]) -> bool {
    a.iter().map(|&x| key(x)).lt(b.iter().map(|&x| key(x)))
}

/// Least relabelled rotation: each rotation is renamed in order of first
/// occurrence with the first occurrence positive.
pub fn naive_canonical(w: &[i32]) -> Vec<i32> {
    let n = w.len();
    let mut best: Option<Vec<i32>> = None;
    for r in 0..n {
        let mut names: BTreeMap<i32, i32> = BTreeMap::new();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let x = w[(r + i) % n];
            let next = names.len() as i32 / 2 + 1;
            if !names.contains_key(&x) {
                names.insert(x, next);
                names.insert(-x, -next);
            }
            out.push(names[&x]);
        }
        if best.as_ref().is_none_or(|b| lex_less(&out, b)) {
            best = Some(out);
        }
    }
    best.unwrap_or_default()
}

/// Vertices of the gluing: cycles of `i -> partner(i) + 1`.
pub fn naive_vertex_count(w: &[i32]) -> usize {
    let n = w.len();
    let partner: Vec<usize> = (0..n).map(|i| (0..n).find(|&j| w[j] == -w[i]).unwrap()).collect();
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if !seen[s] {
            count += 1;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = (partner[i] + 1) % n;
            }
        }
    }
    count
}

pub fn naive_genus(w: &[i32]) -> i64 {
    let e = w.len() as i64 / 2;
    (1 + e - naive_vertex_count(w) as i64) / 2
}

/// Conditions (i)-(iii), checked literally.
pub fn naive_is_wicks(w: &[i32]) -> bool {
    let n = w.len();
    if n == 0 {
        return false;
    }
    for &x in w {
        if w.iter().filter(|&&y| y == x).count() != 1 || w.iter().filter(|&&y| y == -x).count() != 1 {
            return false;
        }
    }
    if (0..n).any(|i| w[i] == -w[(i + 1) % n]) {
        return false;
    }
    let factors: Vec<(i32, i32)> = (0..n).map(|i| (w[i], w[(i + 1) % n])).collect();
    !factors.iter().any(|&(x, y)| factors.contains(&(-y, -x)))
}

/// Every Wicks form of length `n` and the given genus, found by trying all
/// fixed-point-free pairings of the positions, up to isomorphism.
pub fn brute_force_forms(n: usize, genus: i64) -> BTreeSet<Vec<i32>> {
    let mut partner = vec![usize::MAX; n];
    let mut out = BTreeSet::new();
    pairings(&mut partner, genus, &mut out);
    out
}

fn pairings(partner: &mut Vec<usize>, genus: i64, out: &mut BTreeSet<Vec<i32>>) {
    let n = partner.len();
    let Some(i) = (0..n).find(|&k| partner[k] == usize::MAX) else {
        leaf(partner, genus, out);
        return;
    };
    for j in i + 1..n {
        // Adjacent partners would put a letter next to its inverse.
        if partner[j] != usize::MAX || j == i + 1 || (i == 0 && j == n - 1) {
            continue;
        }
        partner[i] = j;
        partner[j] = i;
        pairings(partner, genus, out);
        partner[i] = usize::MAX;
        partner[j] = usize::MAX;
    }
}

fn leaf(partner: &[usize], genus: i64, out: &mut BTreeSet<Vec<i32>>) {
    let n = partner.len();
    // Vertex count straight from the pairing.
    let mut seen = vec![false; n];
    let mut v = 0i64;
    for s in 0..n {
        if !seen[s] {
            v += 1;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = (partner[i] + 1) % n;
            }
        }
    }
    if 1 + n as i64 / 2 - v != 2 * genus {
        return;
    }
    let mut w = vec![0i32; n];
    let mut next = 0;
    for i in 0..n {
        if partner[i] > i {
            next += 1;
            w[i] = next;
            w[partner[i]] = -next;
        }
    }
    if naive_is_wicks(&w) {
        out.insert(naive_canonical(&w));
    }
}

pub fn inverse(w: &[i32]) -> Vec<i32> {
    w.iter().rev().map(|&x| -x).collect()
}

/// Representation as (offset, images of the form's bases in base order).
pub type NaiveRep = (usize, Vec<(u32, Vec<i32>)>);

/// All splittings of every rotation of `w` into blocks following `u`, with
/// the two occurrences of a base receiving mutually inverse blocks. Block
/// lengths range over every composition.
pub fn naive_representations(w: &[i32], u: &[i32]) -> BTreeSet<NaiveRep> {
    let n = w.len();
    let bases: Vec<u32> = u.iter().map(|x| x.unsigned_abs()).collect::<BTreeSet<_>>().into_iter().collect();
    let mut out = BTreeSet::new();
    if n == 0 || u.is_empty() {
        return out;
    }
    let mut lens = vec![1usize; bases.len()];
    loop {
        if 2 * lens.iter().sum::<usize>() == n {
            for offset in 0..n {
                let rot: Vec<i32> = (0..n).map(|i| w[(offset + i) % n]).collect();
                let mut images: BTreeMap<u32, Vec<i32>> = BTreeMap::new();
                let mut pos = 0;
                let mut ok = true;
                for &x in u {
                    let b = x.unsigned_abs();
                    let l = lens[bases.iter().position(|&c| c == b).unwrap()];
                    let block = rot[pos..pos + l].to_vec();
                    pos += l;
                    let image = if x > 0 { block } else { inverse(&block) };
                    match images.get(&b) {
                        Some(prev) if *prev != image => {
                            ok = false;
                            break;
                        }
                        _ => {
                            images.insert(b, image);
                        }
                    }
                }
                if ok {
                    out.insert((offset, images.into_iter().collect()));
                }
            }
        }
        // Next composition in odometer order, each length in 1..=n/2.
        let mut k = 0;
        loop {
            if k == lens.len() {
                return out;
            }
            lens[k] += 1;
            if lens[k] <= n / 2 {
                break;
            }
            lens[k] = 1;
            k += 1;
        }
    }
}

/// Cubic square scan.
pub fn naive_has_square(s: &[i32]) -> bool {
    let n = s.len();
    (0..n).any(|i| (1..=(n - i) / 2).any(|h| (0..h).all(|k| s[i + k] == s[i + h + k])))
}

pub fn naive_cyclic_square_free(s: &[i32]) -> bool {
    let n = s.len();
    (0..n.max(1)).all(|r| {
        let rot: Vec<i32> = (0..n).map(|i| s[(r + i) % n]).collect();
        !naive_has_square(&rot)
    })
}
