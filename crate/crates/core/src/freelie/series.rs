use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{LieElement, TensorElement, Q};
use crate::error::{Error, Result};

/// log(t) = sum (-1)^{k+1} (t-1)^k / k, truncated at `max_deg`.
pub fn log_truncated(t: &TensorElement, max_deg: usize) -> Result<TensorElement> {
    if !t.constant_term().is_one() {
        return Err(Error::ConstantTerm(1));
    }
    let u = &t.truncate(max_deg) - &TensorElement::one(t.genus());
    let mut out = TensorElement::zero(t.genus());
    let mut power = u.clone();
    for k in 1..=max_deg {
        if power.is_zero() {
            break;
        }
        let sign = if k % 2 == 1 { 1 } else { -1 };
        out = &out + &power.scale(&Q::new(BigInt::from(sign), BigInt::from(k)));
        power = power.mul_truncated(&u, max_deg);
    }
    Ok(out)
}

/// exp(x) = sum x^k / k!, truncated at `max_deg`; `x` must have no constant term.
pub fn exp_truncated(x: &TensorElement, max_deg: usize) -> Result<TensorElement> {
    if !x.constant_term().is_zero() {
        return Err(Error::ConstantTerm(0));
    }
    let x = x.truncate(max_deg);
    let mut out = TensorElement::one(x.genus());
    let mut term = TensorElement::one(x.genus());
    for k in 1..=max_deg {
        term = term.mul_truncated(&x, max_deg).scale(&Q::new(BigInt::one(), BigInt::from(k)));
        if term.is_zero() {
            break;
        }
        out = &out + &term;
    }
    Ok(out)
}

/// log(exp(x) exp(y)) truncated at `max_deg`.
pub fn bch(x: &LieElement, y: &LieElement, max_deg: usize) -> Result<LieElement> {
    let ex = exp_truncated(&x.to_tensor(), max_deg)?;
    let ey = exp_truncated(&y.to_tensor(), max_deg)?;
    let l = log_truncated(&ex.mul_truncated(&ey, max_deg), max_deg)?;
    LieElement::from_tensor(&l)
}

/// x * y * (-x) * (-y) for the BCH product.
pub fn star_commutator(x: &LieElement, y: &LieElement, max_deg: usize) -> Result<LieElement> {
    let ex = exp_truncated(&x.to_tensor(), max_deg)?;
    let ey = exp_truncated(&y.to_tensor(), max_deg)?;
    let exi = exp_truncated(&(-&x.to_tensor()), max_deg)?;
    let eyi = exp_truncated(&(-&y.to_tensor()), max_deg)?;
    let p = ex.mul_truncated(&ey, max_deg).mul_truncated(&exi, max_deg).mul_truncated(&eyi, max_deg);
    LieElement::from_tensor(&log_truncated(&p, max_deg)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelie::{lie_bracket, q, q_frac};
    use crate::letters::Letter;

    #[test]
    fn log_of_one_plus_letter() {
        let t = &TensorElement::one(1) + &TensorElement::letter(1, Letter::a(1));
        let l = log_truncated(&t, 3).unwrap();
        let a = Letter::a(1);
        let expect = TensorElement::from_terms(1, [(vec![a], q(1)), (vec![a, a], q_frac(-1, 2)), (vec![a, a, a], q_frac(1, 3))]);
        assert_eq!(l, expect);
        assert_eq!(exp_truncated(&l, 3).unwrap(), t);
        assert!(log_truncated(&TensorElement::letter(1, a), 3).is_err());
    }

    #[test]
    fn bch_low_degrees() {
        let x = LieElement::letter(2, Letter::a(1));
        let y = LieElement::letter(2, Letter::b(2));
        let z = bch(&x, &y, 3).unwrap();
        assert_eq!(z.degree_part(2), lie_bracket(&x, &y).scale(&q_frac(1, 2)));
        let s = star_commutator(&x, &y, 3).unwrap();
        let xy = lie_bracket(&x, &y);
        let expect = &(&xy + &lie_bracket(&x, &xy).scale(&q_frac(1, 2)))
            - &lie_bracket(&y, &lie_bracket(&y, &x)).scale(&q_frac(1, 2));
        assert_eq!(s, expect);
    }
}
