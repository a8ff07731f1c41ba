//! p-Kähler verdicts with witnesses checked in the form engine.
//!
//! For `1 ≤ p ≤ n − 1` the obstruction is `θ = φ⁰ ∧ φ^I` with `|I| = n − p`
//! and `Σ_{i∈I} λ_i ≠ 0`: then `θ ∧ θ̄ = κ⁻¹ dη` for `η = φ⁰ ∧ φ^I ∧ φ̄^I`
//! and a nonzero scalar `κ = u · L(b)`, so the positive form
//! `i^{p²} 2^{−p} θ ∧ θ̄` is exact.


use crate::error::{Error, Result};
use crate::forms::{balanced_omega, CoframeMonomial, InvariantForm, MultiIndex};
use crate::model::ManifoldSpec;
use crate::scalars::{Poly, QVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum PKahlerVerdict {
    PKahler,
    NotPKahler,
    TorusAllP,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PKahlerWitness {
    /// `i^{p²} 2^{−p} θ ∧ θ̄ = d(i^{p²} 2^{−p} η / κ)`.
    Exact {
        indices: MultiIndex,
        theta: InvariantForm,
        theta_wedge_conj: InvariantForm,
        eta: InvariantForm,
        kappa: Poly,
        /// `p² mod 4`, the power of `i` in the normalizing constant.
        i_power: u32,
        /// The normalizing constant carries `2^{−p}`.
        p: usize,
    },
    /// A closed transverse `(p, p)`-form: `ωⁿ` of the balanced metric, the
    /// volume form, or `ω^p` on a torus.
    Closed { form: InvariantForm },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PKahlerReport {
    pub p: usize,
    pub verdict: PKahlerVerdict,
    pub witness: PKahlerWitness,
}

/// First `I` in lexicographic order of sorted index lists with `|I| = size`
/// and nonzero weight.
fn first_nonzero_subset(lambdas: &[QVec], size: usize) -> Option<Vec<usize>> {
    let n = lambdas.len();
    let mut combo: Vec<usize> = (0..size).collect();
    loop {
        let w = combo
            .iter()
            .fold(QVec::zero(lambdas[0].dim()), |acc, &i| &acc + &lambdas[i]);
        if !w.is_zero() {
            return Some(combo.iter().map(|i| i + 1).collect());
        }
        // Next combination.
        let mut k = size;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            if combo[k] < n - size + k {
                break;
            }
        }
        combo[k] += 1;
        for m in k + 1..size {
            combo[m] = combo[m - 1] + 1;
        }
    }
}

/// `κ = u · L` with `L` a nonzero linear form in the `b_j` only; such a `κ`
/// never vanishes since `τ ≠ 0` and the `b_j` are linearly independent.
fn is_u_times_linear(kappa: &Poly) -> bool {
    !kappa.is_zero()
        && kappa.terms().all(|(e, _)| {
            e.first() == Some(&1) && e.iter().skip(1).sum::<u32>() == 1
        })
}

fn closed(form: InvariantForm, s: &ManifoldSpec) -> Result<InvariantForm> {
    let d = form.d(&s.lambda)?;
    if !d.is_zero() {
        return Err(Error::NotInDomain(format!("witness form is not closed: d = {d}")));
    }
    Ok(form)
}

pub fn pkahler_status(s: &ManifoldSpec, p: usize) -> Result<PKahlerReport> {
    s.require_valid()?;
    let n = s.n();
    if p == 0 || p > n + 1 {
        return Err(Error::OutOfRange { p, max: n + 1 });
    }
    let d = s.basis_dim();
    let omega = balanced_omega(&s.lambda);
    if s.lambda.is_torus() {
        let form = closed(omega.wedge_power(p as u32)?, s)?;
        return Ok(PKahlerReport {
            p,
            verdict: PKahlerVerdict::TorusAllP,
            witness: PKahlerWitness::Closed { form },
        });
    }
    if p >= n {
        // ωⁿ for p = n; for p = n + 1 the volume form ω^{n+1}.
        let form = closed(omega.wedge_power(p as u32)?, s)?;
        return Ok(PKahlerReport {
            p,
            verdict: PKahlerVerdict::PKahler,
            witness: PKahlerWitness::Closed { form },
        });
    }

    let indices = first_nonzero_subset(s.lambdas(), n - p)
        .ok_or_else(|| Error::NotInDomain("no multi-index of nonzero weight".into()))?;
    let mi = MultiIndex::from_indices(&indices);
    let zero_c = QVec::zero(d);
    let theta = InvariantForm::term(
        n,
        d,
        Poly::one(),
        zero_c.clone(),
        CoframeMonomial::new(true, false, mi, MultiIndex::empty()),
    );
    let theta_wedge_conj = theta.wedge(&theta.conjugate())?;
    let eta = InvariantForm::term(n, d, Poly::one(), zero_c, CoframeMonomial::new(true, false, mi, mi));
    let d_eta = eta.d(&s.lambda)?;
    let kappa = d_eta
        .polynomial_multiple_of(&theta_wedge_conj)
        .filter(is_u_times_linear)
        .ok_or_else(|| {
            Error::NotInDomain(format!(
                "d(eta) = {d_eta} is not a nonzero multiple of theta^conj(theta) = {theta_wedge_conj}"
            ))
        })?;
    Ok(PKahlerReport {
        p,
        verdict: PKahlerVerdict::NotPKahler,
        witness: PKahlerWitness::Exact {
            indices: mi,
            theta,
            theta_wedge_conj,
            eta,
            kappa,
            i_power: ((p * p) % 4) as u32,
            p,
        },
    })
}
