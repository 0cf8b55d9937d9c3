use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use crate::letters::{Letter, Word};

/// True iff `w` is nonempty and strictly smaller than each of its proper suffixes.
pub fn is_lyndon(w: &[Letter]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// All Lyndon words of length `k` over the first `n` letters, in lexicographic order.
pub fn lyndon_basis(n: usize, k: usize) -> Vec<Word> {
    assert!(n >= 1 && k >= 1);
    let top = (n - 1) as u8;
    let mut out = Vec::new();
    let mut w: Vec<u8> = vec![0];
    loop {
        if w.len() == k {
            out.push(w.iter().map(|&x| Letter(x)).collect());
        }
        let m = w.len();
        while w.len() < k {
            w.push(w[w.len() - m]);
        }
        while w.last() == Some(&top) {
            w.pop();
        }
        match w.last_mut() {
            Some(x) => *x += 1,
            None => break,
        }
    }
    out
}

fn mobius(mut n: usize) -> i64 {
    let mut res = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            res = -res;
        }
        p += 1;
    }
    if n > 1 {
        res = -res;
    }
    res
}

/// Witt's formula for the rank of the degree-k part of the free Lie ring on n letters.
pub fn witt_dimension(n: usize, k: usize) -> usize {
    let mut s: i128 = 0;
    for d in 1..=k {
        if k.is_multiple_of(d) {
            s += mobius(d) as i128 * (n as i128).pow((k / d) as u32);
        }
    }
    (s / k as i128) as usize
}

/// Splits a Lyndon word of length >= 2 as uv with v its longest proper Lyndon suffix.
pub fn standard_factorization(w: &[Letter]) -> (Word, Word) {
    assert!(w.len() >= 2 && is_lyndon(w), "standard factorization needs a Lyndon word of length >= 2");
    let i = (1..w.len()).find(|&i| is_lyndon(&w[i..])).expect("a letter suffix is always Lyndon");
    (w[..i].to_vec(), w[i..].to_vec())
}

type Expansion = Arc<Vec<(Word, i64)>>;

fn cache() -> &'static RwLock<HashMap<Word, Expansion>> {
    static CACHE: OnceLock<RwLock<HashMap<Word, Expansion>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Tensor expansion of the standard bracketing of a Lyndon word, sorted by word.
/// The first entry is always `(w, 1)`.
pub fn lyndon_tensor(w: &[Letter]) -> Expansion {
    if let Some(e) = cache().read().expect("lyndon cache poisoned").get(w) {
        return e.clone();
    }
    let e: Expansion = if w.len() == 1 {
        Arc::new(vec![(w.to_vec(), 1)])
    } else {
        let (u, v) = standard_factorization(w);
        let pu = lyndon_tensor(&u);
        let pv = lyndon_tensor(&v);
        let mut acc: BTreeMap<Word, i64> = BTreeMap::new();
        for (x, cx) in pu.iter() {
            for (y, cy) in pv.iter() {
                let mut xy = x.clone();
                xy.extend_from_slice(y);
                *acc.entry(xy).or_default() += cx * cy;
                let mut yx = y.clone();
                yx.extend_from_slice(x);
                *acc.entry(yx).or_default() -= cx * cy;
            }
        }
        Arc::new(acc.into_iter().filter(|(_, c)| *c != 0).collect())
    };
    cache().write().expect("lyndon cache poisoned").insert(w.to_vec(), e.clone());
    e
}
