use super::{all_congruences, Congruence};
use crate::algebra::{quotient_algebra, satisfies, FiniteAlgebra, Homomorphism, Sentence};
use crate::budget::Budget;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftDirection {
    /// `θ ↦ θ/σ`, i.e. `u_σ`.
    Down,
    /// `u_σ⁻¹`, from `Con(A/σ)` back to `[σ, ∇]`.
    Up,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Pullback,
    Pushforward,
}

fn check_parent(alg: &FiniteAlgebra, c: &Congruence) -> Result<()> {
    if c.parent() != alg.fingerprint() || c.size() != alg.size() {
        return Err(Error::ParentMismatch);
    }
    Ok(())
}

/// `θ/σ` as a congruence of `A/σ`. Requires `σ ⊆ θ`.
pub fn quotient_down(alg: &FiniteAlgebra, sigma: &Congruence, theta: &Congruence) -> Result<Congruence> {
    check_parent(alg, sigma)?;
    check_parent(alg, theta)?;
    if let Some((x, y)) = sigma.not_below_witness(theta) {
        return Err(Error::NotAbove { x, y });
    }
    let q = quotient_algebra(alg, sigma)?;
    Ok(Congruence::from_labels_unchecked(
        q.algebra.fingerprint(),
        q.reps.iter().map(|&r| theta.rep()[r]),
    ))
}

/// `u_σ⁻¹(ρ)` for a congruence `ρ` of `A/σ`.
pub fn quotient_up(alg: &FiniteAlgebra, sigma: &Congruence, rho: &Congruence) -> Result<Congruence> {
    check_parent(alg, sigma)?;
    let q = quotient_algebra(alg, sigma)?;
    check_parent(&q.algebra, rho)?;
    let idx = sigma.class_index();
    Ok(Congruence::from_labels_unchecked(
        alg.fingerprint(),
        idx.iter().map(|&i| rho.rep()[i]),
    ))
}

pub fn quotient_lift(
    direction: LiftDirection,
    alg: &FiniteAlgebra,
    sigma: &Congruence,
    arg: &Congruence,
) -> Result<Congruence> {
    match direction {
        LiftDirection::Down => quotient_down(alg, sigma, arg),
        LiftDirection::Up => quotient_up(alg, sigma, arg),
    }
}

/// `f*(θ) = {(a,b): (f(a),f(b)) ∈ θ}` for `θ` on the codomain.
pub fn pullback(f: &Homomorphism, theta: &Congruence) -> Result<Congruence> {
    check_parent(f.target(), theta)?;
    Ok(Congruence::from_labels_unchecked(
        f.source().fingerprint(),
        f.map().iter().map(|&y| theta.rep()[y]),
    ))
}

/// `f_*(θ) = (f⁻¹)*(θ)`, defined for isomorphisms only.
pub fn pushforward(f: &Homomorphism, theta: &Congruence) -> Result<Congruence> {
    let inv = f.inverse()?;
    pullback(&inv, theta)
}

pub fn transport(f: &Homomorphism, direction: Direction, theta: &Congruence) -> Result<Congruence> {
    match direction {
        Direction::Pullback => pullback(f, theta),
        Direction::Pushforward => pushforward(f, theta),
    }
}

/// `{θ ∈ Con(A): A/θ ⊨ Σ}`.
pub fn relative_congruences(
    alg: &FiniteAlgebra,
    sentences: &[Sentence],
    budget: &Budget,
) -> Result<Vec<Congruence>> {
    let con = all_congruences(alg, budget)?;
    let mut out = Vec::new();
    for theta in con.elements() {
        let q = quotient_algebra(alg, theta)?;
        let mut ok = true;
        for s in sentences {
            if !satisfies(&q.algebra, s, budget.max_evals)? {
                ok = false;
                break;
            }
        }
        if ok {
            out.push(theta.clone());
        }
    }
    Ok(out)
}
