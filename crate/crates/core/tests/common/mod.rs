#![allow(dead_code)]

use jtrace::deriv::Derivation;
use jtrace::freelie::{lie_bracket, LieElement, Q};
use jtrace::letters::Letter;
use rand::Rng;

pub fn letters(g: usize) -> Vec<Letter> {
    Letter::all(g).collect()
}

fn random_bracket<R: Rng>(rng: &mut R, g: usize, m: usize) -> LieElement {
    if m == 1 {
        let ls = letters(g);
        return LieElement::letter(g, ls[rng.gen_range(0..ls.len())]);
    }
    let left = rng.gen_range(1..m);
    lie_bracket(&random_bracket(rng, g, left), &random_bracket(rng, g, m - left))
}

/// A few random brackets of degree m with small integer coefficients.
pub fn random_lie<R: Rng>(rng: &mut R, g: usize, m: usize) -> LieElement {
    let mut out = LieElement::zero(g);
    for _ in 0..rng.gen_range(1..=3) {
        let c = Q::from_integer(rng.gen_range(-3i64..=3).into());
        out = &out + &random_bracket(rng, g, m).scale(&c);
    }
    out
}

pub fn random_derivation<R: Rng>(rng: &mut R, g: usize, k: usize) -> Derivation {
    let mut d = Derivation::zero(g, k);
    for x in letters(g) {
        if rng.gen_bool(0.5) {
            d.add_term(x, &random_lie(rng, g, k + 1));
        }
    }
    d
}
