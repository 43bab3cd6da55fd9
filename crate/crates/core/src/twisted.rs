//! The `H`-twisted L∞ structure on shifted multivector fields.
//!
//! The binary operation is the structure cochain `m`, the ternary one is
//! `Φ(H)`. A bivector `π` is twisted Poisson when
//! `[π, π] - Φ(H)(π, π, π) = 0`.

use crate::chevalley::{
    cochain_bracket, phi, structure_cochain, vanishes_on_basis, BasisBounds, Cochain,
};
use crate::error::{Error, Result};
use crate::form::DiffForm;
use crate::multivector::PolyVector;

#[derive(Clone, Debug)]
pub struct TwistedStructure {
    h: DiffForm,
    l2: Cochain,
    l3: Cochain,
}

/// Builds the structure for a closed 3-form `H`.
pub fn make_twisted(h: &DiffForm) -> Result<TwistedStructure> {
    let n = h.nvars();
    if !h.is_zero() && h.degree() != Some(3) {
        return Err(Error::WrongDegree {
            expected: 3,
            found: h.degree().map_or_else(|| "mixed".into(), |d| d.to_string()),
        });
    }
    let dh = h.d();
    if !dh.is_zero() {
        return Err(Error::NotClosed(dh));
    }
    let l3 = if h.is_zero() {
        Cochain::zero(n, 3, 1)
    } else {
        phi(h)?
    };
    Ok(TwistedStructure {
        h: h.clone(),
        l2: structure_cochain(n),
        l3,
    })
}

impl TwistedStructure {
    pub fn untwisted(nvars: usize) -> TwistedStructure {
        make_twisted(&DiffForm::zero(nvars)).expect("zero form is closed")
    }

    pub fn nvars(&self) -> usize {
        self.h.nvars()
    }

    pub fn h(&self) -> &DiffForm {
        &self.h
    }

    pub fn l2(&self) -> &Cochain {
        &self.l2
    }

    pub fn l3(&self) -> &Cochain {
        &self.l3
    }

    /// `Φ(H)(a, b, c)` on bivectors, with context and degree checks.
    pub fn phi_h(&self, a: &PolyVector, b: &PolyVector, c: &PolyVector) -> Result<PolyVector> {
        self.l3.eval(&[a.clone(), b.clone(), c.clone()])
    }

    /// The trivector `[π, π] - Φ(H)(π, π, π)`.
    pub fn mc_defect(&self, pi: &PolyVector) -> Result<PolyVector> {
        check_bivector(pi)?;
        if pi.nvars() != self.nvars() {
            return Err(Error::ContextMismatch {
                left: self.nvars(),
                right: pi.nvars(),
            });
        }
        let bracket = pi.schouten(pi)?;
        let cubic = self.l3.eval_homogeneous(&[pi.clone(), pi.clone(), pi.clone()]);
        Ok(bracket.sub_unchecked(&cubic))
    }

    pub fn is_twisted_poisson(&self, pi: &PolyVector) -> Result<bool> {
        Ok(self.mc_defect(pi)?.is_zero())
    }
}

pub(crate) fn check_bivector(pi: &PolyVector) -> Result<()> {
    if pi.is_zero() || pi.degree() == Some(2) {
        return Ok(());
    }
    Err(Error::WrongDegree {
        expected: 2,
        found: pi.degree().map_or_else(|| "mixed".into(), |d| d.to_string()),
    })
}

/// One evaluated L∞ relation.
#[derive(Clone, Debug)]
pub struct RelationResult {
    pub name: &'static str,
    pub passed: bool,
    pub tuples_checked: u64,
    /// On failure, the tuple on which the relation cochain is nonzero and
    /// its value there.
    pub witness: Option<(Vec<PolyVector>, PolyVector)>,
}

#[derive(Clone, Debug)]
pub struct LinftyReport {
    pub relations: Vec<RelationResult>,
}

impl LinftyReport {
    pub fn passed(&self) -> bool {
        self.relations.iter().all(|r| r.passed)
    }

    pub fn relation(&self, name: &str) -> Option<&RelationResult> {
        self.relations.iter().find(|r| r.name == name)
    }
}

/// Per-relation enumeration bounds.
#[derive(Clone, Copy, Debug)]
pub struct LinftyBounds {
    pub l2_l2: BasisBounds,
    pub l2_l3: BasisBounds,
    pub l3_l3: BasisBounds,
}

impl LinftyBounds {
    /// `[l2, l2]` is a second-order operator in total and `[l2, l3]` first
    /// order when `l3` is function-linear, so capping the total coefficient
    /// degree of a tuple at the operator order loses nothing. `[l3, l3]` is
    /// function-linear and only needs constant coefficients.
    pub fn for_context(mv_degree: usize) -> LinftyBounds {
        LinftyBounds {
            l2_l2: BasisBounds::new(2, mv_degree)
                .with_total_poly_degree(2)
                .unordered(),
            l2_l3: BasisBounds::new(1, mv_degree)
                .with_total_poly_degree(1)
                .unordered(),
            l3_l3: BasisBounds::new(0, mv_degree).unordered(),
        }
    }
}

/// Checks `[l2, l2] = 0`, `[l2, l3] = 0` and `[l3, l3] = 0` by evaluation.
/// With `l1 = 0` and no higher operations these are all the relations.
pub fn linfty_relations_check(l2: &Cochain, l3: &Cochain, bounds: LinftyBounds) -> Result<LinftyReport> {
    if l2.arity() != 2 {
        return Err(Error::LengthMismatch {
            expected: 2,
            got: l2.arity(),
        });
    }
    if l3.arity() != 3 {
        return Err(Error::LengthMismatch {
            expected: 3,
            got: l3.arity(),
        });
    }
    let cases = [
        ("[l2,l2]", l2, l2, bounds.l2_l2),
        ("[l2,l3]", l2, l3, bounds.l2_l3),
        ("[l3,l3]", l3, l3, bounds.l3_l3),
    ];
    let mut relations = Vec::new();
    for (name, a, b, bb) in cases {
        let c = cochain_bracket(a, b)?;
        let r = vanishes_on_basis(&c, bb);
        relations.push(RelationResult {
            name,
            passed: r.equal,
            tuples_checked: r.tuples_checked,
            witness: r.witness.map(|(args, v, _)| (args, v)),
        });
    }
    Ok(LinftyReport { relations })
}
