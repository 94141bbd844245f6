//! Independent check of a normal form via the Bargmann-type representation
//! `a† ↦ z·`, `a ↦ D_q` with `D_q zᵐ = [m]_q zᵐ⁻¹`, which satisfies
//! `D_q z − q z D_q = 1` exactly over ℤ[q].

use super::{BosonWord, Letter, NormalForm};
use crate::qpoly::QPoly;
use crate::{Error, Result};

/// Polynomial in `z` with ℤ[q] coefficients, indexed by power of `z`.
type ZPoly = Vec<QPoly>;

fn raise(p: &ZPoly) -> ZPoly {
    let mut out = Vec::with_capacity(p.len() + 1);
    out.push(QPoly::zero());
    out.extend(p.iter().cloned());
    out
}

fn jackson_derivative(p: &ZPoly) -> ZPoly {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(m, c)| c * &QPoly::q_integer(m))
        .collect()
}

fn apply_letters(letters: &[Letter], mut p: ZPoly) -> ZPoly {
    for l in letters.iter().rev() {
        p = match l {
            Letter::Ad => raise(&p),
            Letter::A => jackson_derivative(&p),
        };
    }
    p
}

fn accumulate(acc: &mut ZPoly, p: &ZPoly, c: &QPoly) {
    if acc.len() < p.len() {
        acc.resize(p.len(), QPoly::zero());
    }
    for (a, b) in acc.iter_mut().zip(p) {
        *a += &(b * c);
    }
}

fn trimmed(mut p: ZPoly) -> ZPoly {
    while p.last().is_some_and(QPoly::is_zero) {
        p.pop();
    }
    p
}

/// `true` iff `word` and `nf` act identically on `zᵐ` for every `m < degree`,
/// as polynomial identities in `q`.
pub fn fock_check(word: &BosonWord, nf: &NormalForm, degree: usize) -> Result<bool> {
    if degree == 0 {
        return Err(Error::OutOfRange("degree bound must be at least 1".into()));
    }
    for m in 0..degree {
        let mut basis = vec![QPoly::zero(); m + 1];
        basis[m] = QPoly::one();

        let lhs = trimmed(apply_letters(word.letters(), basis.clone()));

        let mut rhs = ZPoly::new();
        for ((j, k), c) in nf.terms() {
            let mono = BosonWord::normal_monomial(j, k);
            accumulate(&mut rhs, &apply_letters(mono.letters(), basis.clone()), c);
        }
        if lhs != trimmed(rhs) {
            return Ok(false);
        }
    }
    Ok(true)
}
