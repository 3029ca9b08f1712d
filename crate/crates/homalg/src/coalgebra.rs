//! Dg coalgebras, comodules, cofree comodules, cotensor products and
//! coinvariants.
//!
//! Right comodule structures are never stored; under the cocommutative flag
//! they are derived from left coactions through the twist with Koszul signs.
//! Equalisers are computed degreewise as kernels, with representatives kept
//! in the ambient tensor basis so downstream coactions restrict without
//! re-indexing.

use crate::algebra::ValidationReport;
use crate::error::{Error, Result};
use crate::graded::{hom_complex, sign, tensor, ChainComplex, ChainMap, DegreeWindow, GradedVectorSpace, LinComb};
use crate::label::Label;
use crate::linalg::{Rational, SparseMatrix, SparseVec, Span};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Coproduct table: Δ(l) = Σ coeff · (left ⊗ right).
pub type CoproductTable = BTreeMap<Label, BTreeMap<(Label, Label), Rational>>;

#[derive(Clone, Debug)]
pub struct DGCoalgebra {
    pub complex: ChainComplex,
    /// counit as a functional on basis labels (missing = 0)
    pub counit: BTreeMap<Label, Rational>,
    pub coproduct: CoproductTable,
    /// the distinguished grouplike label η(1)
    pub coaugmentation: Label,
    /// declared flags; validated when set, never inferred silently
    pub cocommutative: Option<bool>,
    pub two_reduced: Option<bool>,
}

impl DGCoalgebra {
    /// The ground field as a coalgebra.
    pub fn scalar() -> DGCoalgebra {
        let one = Label::atom("1");
        let complex = ChainComplex::unit(0, one.clone());
        let mut counit = BTreeMap::new();
        counit.insert(one.clone(), Rational::one());
        let mut coproduct = BTreeMap::new();
        coproduct.insert(
            one.clone(),
            BTreeMap::from([((one.clone(), one.clone()), Rational::one())]),
        );
        DGCoalgebra {
            complex,
            counit,
            coproduct,
            coaugmentation: one,
            cocommutative: Some(true),
            two_reduced: Some(false),
        }
    }

    pub fn coproduct_of(&self, l: &Label) -> Vec<(Label, Label, Rational)> {
        self.coproduct
            .get(l)
            .map(|t| {
                t.iter()
                    .map(|((a, b), c)| (a.clone(), b.clone(), c.clone()))
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Reduced coproduct: terms of Δ with no coaugmentation tensor factor.
    pub fn reduced_coproduct_of(&self, l: &Label) -> Vec<(Label, Label, Rational)> {
        self.coproduct_of(l)
            .into_iter()
            .filter(|(a, b, _)| *a != self.coaugmentation && *b != self.coaugmentation)
            .collect()
    }

    pub fn counit_of(&self, l: &Label) -> Rational {
        self.counit.get(l).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree_of(&self, l: &Label) -> Option<i64> {
        self.complex.space.degree_of(l)
    }

    /// Labels of the coaugmentation coideal C̄ = coker(η) at degree n.
    pub fn coideal_labels(&self, n: i64) -> Vec<Label> {
        self.complex
            .space
            .labels(n)
            .iter()
            .filter(|l| **l != self.coaugmentation)
            .cloned()
            .collect()
    }

    pub fn require_two_reduced(&self) -> Result<()> {
        if self.two_reduced == Some(true) {
            Ok(())
        } else {
            Err(Error::Not2Reduced(
                "operation requires the 2-reduced flag".into(),
            ))
        }
    }

    pub fn require_cocommutative(&self) -> Result<()> {
        if self.cocommutative == Some(true) {
            Ok(())
        } else {
            Err(Error::NonCocommutative)
        }
    }
}

/// Exhaustive basis-level validation of the coalgebra axioms and the
/// declared flags.
pub fn validate_coalgebra(c: &DGCoalgebra) -> ValidationReport {
    let mut report = ValidationReport::default();
    let w = c.complex.window;
    let eta = &c.coaugmentation;

    match c.degree_of(eta) {
        Some(0) => {}
        other => report.note(format!("coaugmentation has degree {other:?}, expected 0")),
    }
    if c.counit_of(eta) != Rational::one() {
        report.note("counit does not send the coaugmentation to 1".into());
    }
    let eta_cop = c.coproduct_of(eta);
    if eta_cop.len() != 1
        || eta_cop[0].0 != *eta
        || eta_cop[0].1 != *eta
        || !eta_cop[0].2.is_one()
    {
        report.note("coaugmentation is not grouplike".into());
    }
    if !c
        .complex
        .d_comb(&LinComb::single(eta.clone()))
        .map(|d| d.is_zero())
        .unwrap_or(false)
    {
        report.note("coaugmentation is not a cycle".into());
    }

    let labels: Vec<(i64, Label)> = (w.lo..=w.hi)
        .flat_map(|n| c.complex.space.labels(n).iter().map(move |l| (n, l.clone())))
        .collect();

    for (n, l) in &labels {
        let cop = c.coproduct_of(l);
        // components must be of complementary degree
        for (a, b, _) in &cop {
            let (da, db) = (c.degree_of(a), c.degree_of(b));
            match (da, db) {
                (Some(da), Some(db)) if da + db == *n => {}
                _ => report.note(format!("coproduct of {l} has off-degree term ({a}, {b})")),
            }
        }
        // counit axioms: (ε⊗id)Δ = id = (id⊗ε)Δ
        let mut left = LinComb::zero();
        let mut right = LinComb::zero();
        for (a, b, x) in &cop {
            left.add_term(b.clone(), c.counit_of(a) * x);
            right.add_term(a.clone(), c.counit_of(b) * x);
        }
        if left != LinComb::single(l.clone()) {
            report.note(format!("left counit axiom fails on {l}"));
        }
        if right != LinComb::single(l.clone()) {
            report.note(format!("right counit axiom fails on {l}"));
        }
        // coassociativity: (Δ⊗id)Δ = (id⊗Δ)Δ in C⊗C⊗C
        let mut lhs: BTreeMap<(Label, Label, Label), Rational> = BTreeMap::new();
        let mut rhs: BTreeMap<(Label, Label, Label), Rational> = BTreeMap::new();
        for (a, b, x) in &cop {
            for (a1, a2, y) in c.coproduct_of(a) {
                let e = lhs.entry((a1, a2, b.clone())).or_insert_with(Rational::zero);
                *e += x * &y;
            }
            for (b1, b2, y) in c.coproduct_of(b) {
                let e = rhs.entry((a.clone(), b1, b2)).or_insert_with(Rational::zero);
                *e += x * &y;
            }
        }
        lhs.retain(|_, v| !v.is_zero());
        rhs.retain(|_, v| !v.is_zero());
        if lhs != rhs {
            report.note(format!("coassociativity fails on {l}"));
        }
        // Δ is a chain map: Δ(d l) = (d⊗id + (−1)^{|a|} id⊗d)(Δ l)
        let dl = c.complex.d_comb(&LinComb::single(l.clone())).unwrap();
        let mut target: BTreeMap<(Label, Label), Rational> = BTreeMap::new();
        for (m, x) in dl.iter() {
            for (a, b, y) in c.coproduct_of(m) {
                let e = target.entry((a, b)).or_insert_with(Rational::zero);
                *e += x * &y;
            }
        }
        let mut image: BTreeMap<(Label, Label), Rational> = BTreeMap::new();
        for (a, b, x) in &cop {
            let da = c.degree_of(a).unwrap_or(0);
            let da_comb = c.complex.d_comb(&LinComb::single(a.clone())).unwrap();
            for (a2, y) in da_comb.iter() {
                let e = image.entry((a2.clone(), b.clone())).or_insert_with(Rational::zero);
                *e += x * y;
            }
            let db_comb = c.complex.d_comb(&LinComb::single(b.clone())).unwrap();
            let s = sign(da);
            for (b2, y) in db_comb.iter() {
                let e = image.entry((a.clone(), b2.clone())).or_insert_with(Rational::zero);
                *e += x * y * &s;
            }
        }
        target.retain(|_, v| !v.is_zero());
        image.retain(|_, v| !v.is_zero());
        if target != image {
            report.note(format!("coproduct is not a chain map on {l}"));
        }
        // counit kills positive degrees and the differential
        if *n != 0 && !c.counit_of(l).is_zero() {
            report.note(format!("counit nonzero on positive-degree {l}"));
        }
    }

    if c.cocommutative == Some(true) {
        for (_, l) in &labels {
            let mut twisted: BTreeMap<(Label, Label), Rational> = BTreeMap::new();
            for (a, b, x) in c.coproduct_of(l) {
                let s = sign(c.degree_of(&a).unwrap_or(0) * c.degree_of(&b).unwrap_or(0));
                let e = twisted.entry((b, a)).or_insert_with(Rational::zero);
                *e += x * s;
            }
            twisted.retain(|_, v| !v.is_zero());
            let plain: BTreeMap<(Label, Label), Rational> = c
                .coproduct_of(l)
                .into_iter()
                .map(|(a, b, x)| ((a, b), x))
                .collect();
            if twisted != plain {
                report.note(format!("cocommutativity fails on {l}"));
            }
        }
    }

    if c.two_reduced == Some(true) {
        if c.complex.dim(0) != 1 || c.complex.space.labels(0) != [c.coaugmentation.clone()] {
            report.note("2-reduced flag fails: degree 0 is not spanned by the coaugmentation".into());
        }
        if c.complex.dim(1) != 0 {
            report.note("2-reduced flag fails: degree 1 is nonzero".into());
        }
        if !c.complex.zero_below || c.complex.window.lo > 0 {
            report.note("2-reduced flag fails: coalgebra is not connective".into());
        }
    }
    report
}

/// Tensor product of coalgebras (Künneth coproduct with Koszul signs).
pub fn coalgebra_tensor(c1: &DGCoalgebra, c2: &DGCoalgebra, w: DegreeWindow) -> Result<DGCoalgebra> {
    let complex = tensor(&c1.complex, &c2.complex, w)?;
    let mut counit = BTreeMap::new();
    let mut coproduct: CoproductTable = BTreeMap::new();
    for n in complex.window.iter() {
        for lab in complex.space.labels(n) {
            let Label::Pair(a, b) = lab else { unreachable!() };
            let e = c1.counit_of(a) * c2.counit_of(b);
            if !e.is_zero() {
                counit.insert(lab.clone(), e);
            }
            let mut table = BTreeMap::new();
            for (a1, a2, x) in c1.coproduct_of(a) {
                for (b1, b2, y) in c2.coproduct_of(b) {
                    // (a1⊗b1) ⊗ (a2⊗b2) with sign from moving b1 past a2
                    let s = sign(
                        c1.degree_of(&a2).unwrap_or(0) * c2.degree_of(&b1).unwrap_or(0),
                    );
                    let left = Label::pair(a1.clone(), b1.clone());
                    let right = Label::pair(a2.clone(), b2.clone());
                    if complex.space.position(&left).is_some()
                        && complex.space.position(&right).is_some()
                    {
                        let entry = table.entry((left, right)).or_insert_with(Rational::zero);
                        *entry += &x * &y * s;
                    }
                }
            }
            table.retain(|_, v| !v.is_zero());
            coproduct.insert(lab.clone(), table);
        }
    }
    let coaugmentation = Label::pair(c1.coaugmentation.clone(), c2.coaugmentation.clone());
    let two_reduced = match (c1.two_reduced, c2.two_reduced) {
        (Some(true), Some(true)) => Some(true),
        _ => None,
    };
    let cocommutative = match (c1.cocommutative, c2.cocommutative) {
        (Some(true), Some(true)) => Some(true),
        _ => None,
    };
    Ok(DGCoalgebra { complex, counit, coproduct, coaugmentation, cocommutative, two_reduced })
}

/// Coaction table: ρ(m) = Σ coeff · (coalgebra label ⊗ module label).
pub type CoactionTable = BTreeMap<Label, BTreeMap<(Label, Label), Rational>>;

#[derive(Clone, Debug)]
pub struct Comodule {
    pub coalgebra: Arc<DGCoalgebra>,
    pub complex: ChainComplex,
    pub coaction: CoactionTable,
    /// explicitly supplied right coaction ρ: N → N⊗C (tables keyed by
    /// (module label, coalgebra label)); when absent, right structures are
    /// derived from the left one through the cocommutative twist
    pub explicit_right: Option<CoactionTable>,
}

impl Comodule {
    /// C as a comodule over itself.
    pub fn regular(coalgebra: Arc<DGCoalgebra>) -> Comodule {
        let complex = coalgebra.complex.clone();
        let coaction = coalgebra.coproduct.clone();
        Comodule { coalgebra, complex, coaction, explicit_right: None }
    }

    /// Trivial coaction through the coaugmentation on a chain complex.
    pub fn trivial(coalgebra: Arc<DGCoalgebra>, complex: ChainComplex) -> Comodule {
        let eta = coalgebra.coaugmentation.clone();
        let mut coaction = BTreeMap::new();
        for n in complex.window.iter() {
            for l in complex.space.labels(n) {
                coaction.insert(
                    l.clone(),
                    BTreeMap::from([((eta.clone(), l.clone()), Rational::one())]),
                );
            }
        }
        Comodule { coalgebra, complex, coaction, explicit_right: None }
    }

    /// The ground field as a comodule.
    pub fn unit(coalgebra: Arc<DGCoalgebra>, label: Label) -> Comodule {
        Comodule::trivial(coalgebra.clone(), ChainComplex::unit(0, label))
    }

    pub fn coaction_of(&self, l: &Label) -> Vec<(Label, Label, Rational)> {
        self.coaction
            .get(l)
            .map(|t| {
                t.iter()
                    .map(|((a, m), c)| (a.clone(), m.clone(), c.clone()))
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Right coaction: the explicitly supplied one when present, otherwise
    /// derived through the twist (which requires cocommutativity).
    pub fn right_coaction_of(&self, l: &Label) -> Result<Vec<(Label, Label, Rational)>> {
        if let Some(table) = &self.explicit_right {
            return Ok(table
                .get(l)
                .map(|t| {
                    t.iter()
                        .map(|((m, a), c)| (m.clone(), a.clone(), c.clone()))
                        .collect()
                })
                .unwrap_or_default());
        }
        self.coalgebra.require_cocommutative()?;
        Ok(self
            .coaction_of(l)
            .into_iter()
            .map(|(a, m, c)| {
                let s = sign(
                    self.coalgebra.degree_of(&a).unwrap_or(0)
                        * self.complex.space.degree_of(&m).unwrap_or(0),
                );
                (m, a, c * s)
            })
            .collect())
    }

    /// Attaches an explicit right coaction, validating counit,
    /// coassociativity and the chain-map property on the window basis.
    pub fn with_right_coaction(mut self, table: CoactionTable) -> Result<Comodule> {
        self.explicit_right = Some(table);
        let mut report = ValidationReport::default();
        let c = &self.coalgebra;
        for n in self.complex.window.iter() {
            for l in self.complex.space.labels(n) {
                let rho = self.right_coaction_of(l)?;
                // counit: (id⊗ε)ρ = id
                let mut counit_image = LinComb::zero();
                for (m, a, coeff) in &rho {
                    counit_image.add_term(m.clone(), c.counit_of(a) * coeff);
                }
                if counit_image != LinComb::single(l.clone()) {
                    report.note(format!("right counit axiom fails on {l}"));
                }
                // coassociativity: (ρ⊗id)ρ = (id⊗Δ)ρ in N⊗C⊗C
                let mut lhs: BTreeMap<(Label, Label, Label), Rational> = BTreeMap::new();
                let mut rhs: BTreeMap<(Label, Label, Label), Rational> = BTreeMap::new();
                for (m, a, coeff) in &rho {
                    for (m2, b, y) in self.right_coaction_of(m)? {
                        let e = lhs.entry((m2, b, a.clone())).or_insert_with(Rational::zero);
                        *e += coeff * &y;
                    }
                    for (a1, a2, y) in c.coproduct_of(a) {
                        let e = rhs.entry((m.clone(), a1, a2)).or_insert_with(Rational::zero);
                        *e += coeff * &y;
                    }
                }
                lhs.retain(|_, v| !v.is_zero());
                rhs.retain(|_, v| !v.is_zero());
                if lhs != rhs {
                    report.note(format!("right coassociativity fails on {l}"));
                }
                // chain map: ρ(dl) = (d⊗id + (−1)^{|m|} id⊗d)(ρ l)
                let dl = self.complex.d_comb(&LinComb::single(l.clone()))?;
                let mut target: BTreeMap<(Label, Label), Rational> = BTreeMap::new();
                for (x, coeff) in dl.iter() {
                    for (m, a, z) in self.right_coaction_of(x)? {
                        let e = target.entry((m, a)).or_insert_with(Rational::zero);
                        *e += coeff * &z;
                    }
                }
                let mut image: BTreeMap<(Label, Label), Rational> = BTreeMap::new();
                for (m, a, coeff) in &rho {
                    let dm = self.complex.space.degree_of(m).unwrap_or(0);
                    for (m2, y) in self.complex.d_comb(&LinComb::single(m.clone()))?.iter() {
                        let e = image.entry((m2.clone(), a.clone())).or_insert_with(Rational::zero);
                        *e += coeff * y;
                    }
                    let s = sign(dm);
                    for (a2, y) in c.complex.d_comb(&LinComb::single(a.clone()))?.iter() {
                        let e = image.entry((m.clone(), a2.clone())).or_insert_with(Rational::zero);
                        *e += coeff * y * &s;
                    }
                }
                target.retain(|_, v| !v.is_zero());
                image.retain(|_, v| !v.is_zero());
                if target != image {
                    report.note(format!("right coaction is not a chain map on {l}"));
                }
            }
        }
        report.into_result("explicit right coaction")?;
        Ok(self)
    }
}

/// Validates the comodule axioms on the window basis: counit, coassociativity
/// and that the coaction is a chain map.
pub fn validate_comodule(m: &Comodule) -> ValidationReport {
    let mut report = ValidationReport::default();
    let c = &m.coalgebra;
    let w = m.complex.window;
    let labels: Vec<(i64, Label)> = (w.lo..=w.hi)
        .flat_map(|n| m.complex.space.labels(n).iter().map(move |l| (n, l.clone())))
        .collect();
    for (n, l) in &labels {
        let rho = m.coaction_of(l);
        for (a, x, _) in &rho {
            let (da, dx) = (c.degree_of(a), m.complex.space.degree_of(x));
            match (da, dx) {
                (Some(da), Some(dx)) if da + dx == *n => {}
                _ => report.note(format!("coaction of {l} has off-degree term ({a}, {x})")),
            }
        }
        // counit: (ε⊗id)ρ = id
        let mut counit_image = LinComb::zero();
        for (a, x, coeff) in &rho {
            counit_image.add_term(x.clone(), c.counit_of(a) * coeff);
        }
        if counit_image != LinComb::single(l.clone()) {
            report.note(format!("comodule counit axiom fails on {l}"));
        }
        // coassociativity: (Δ⊗id)ρ = (id⊗ρ)ρ in C⊗C⊗N
        let mut lhs: BTreeMap<(Label, Label, Label), Rational> = BTreeMap::new();
        let mut rhs: BTreeMap<(Label, Label, Label), Rational> = BTreeMap::new();
        for (a, x, coeff) in &rho {
            for (a1, a2, y) in c.coproduct_of(a) {
                let e = lhs.entry((a1, a2, x.clone())).or_insert_with(Rational::zero);
                *e += coeff * &y;
            }
            for (b, x2, y) in m.coaction_of(x) {
                let e = rhs.entry((a.clone(), b, x2)).or_insert_with(Rational::zero);
                *e += coeff * &y;
            }
        }
        lhs.retain(|_, v| !v.is_zero());
        rhs.retain(|_, v| !v.is_zero());
        if lhs != rhs {
            report.note(format!("comodule coassociativity fails on {l}"));
        }
        // chain map: ρ(d l) = (d⊗id + (−1)^{|a|} id⊗d)(ρ l)
        let dl = m.complex.d_comb(&LinComb::single(l.clone())).unwrap();
        let mut target: BTreeMap<(Label, Label), Rational> = BTreeMap::new();
        for (x, coeff) in dl.iter() {
            for (a, y, z) in m.coaction_of(x) {
                let e = target.entry((a, y)).or_insert_with(Rational::zero);
                *e += coeff * &z;
            }
        }
        let mut image: BTreeMap<(Label, Label), Rational> = BTreeMap::new();
        for (a, x, coeff) in &rho {
            let da = c.degree_of(a).unwrap_or(0);
            for (a2, y) in c.complex.d_comb(&LinComb::single(a.clone())).unwrap().iter() {
                let e = image.entry((a2.clone(), x.clone())).or_insert_with(Rational::zero);
                *e += coeff * y;
            }
            let s = sign(da);
            for (x2, y) in m.complex.d_comb(&LinComb::single(x.clone())).unwrap().iter() {
                let e = image.entry((a.clone(), x2.clone())).or_insert_with(Rational::zero);
                *e += coeff * y * &s;
            }
        }
        target.retain(|_, v| !v.is_zero());
        image.retain(|_, v| !v.is_zero());
        if target != image {
            report.note(format!("coaction is not a chain map on {l}"));
        }
    }
    report
}

/// Cofree comodule C ⊗ V with coaction Δ ⊗ id.
pub fn cofree_comodule(c: &Arc<DGCoalgebra>, v: &ChainComplex, w: DegreeWindow) -> Result<Comodule> {
    let complex = tensor(&c.complex, v, w)?;
    let mut coaction: CoactionTable = BTreeMap::new();
    for n in complex.window.iter() {
        for lab in complex.space.labels(n) {
            let Label::Pair(a, x) = lab else { unreachable!() };
            let mut table = BTreeMap::new();
            for (a1, a2, coeff) in c.coproduct_of(a) {
                let inner = Label::pair(a2, (**x).clone());
                if complex.space.position(&inner).is_some() {
                    let e = table.entry((a1, inner)).or_insert_with(Rational::zero);
                    *e += coeff;
                }
            }
            table.retain(|_, v| !v.is_zero());
            coaction.insert(lab.clone(), table);
        }
    }
    Ok(Comodule { coalgebra: c.clone(), complex, coaction, explicit_right: None })
}

/// A comodule map: a chain map commuting with the coactions.
#[derive(Clone, Debug)]
pub struct ComoduleMap {
    pub source: Arc<Comodule>,
    pub target: Arc<Comodule>,
    pub map: ChainMap,
}

impl ComoduleMap {
    pub fn new(source: Arc<Comodule>, target: Arc<Comodule>, comps: BTreeMap<i64, SparseMatrix>) -> Result<Self> {
        if !Arc::ptr_eq(&source.coalgebra, &target.coalgebra)
            && source.coalgebra.coaugmentation != target.coalgebra.coaugmentation
        {
            return Err(Error::CoalgebraMismatch(
                "comodule map between different coalgebras".into(),
            ));
        }
        let map = ChainMap::new(
            Arc::new(source.complex.clone()),
            Arc::new(target.complex.clone()),
            comps,
        )?;
        let cm = ComoduleMap { source, target, map };
        cm.check_colinear()?;
        Ok(cm)
    }

    fn check_colinear(&self) -> Result<()> {
        for n in self.source.complex.window.iter() {
            for (i, l) in self.source.complex.space.labels(n).iter().enumerate() {
                // ρ_T(f(l))
                let fl = self.map.component(n).column(i);
                let mut lhs: BTreeMap<(Label, Label), Rational> = BTreeMap::new();
                for (j, coeff) in fl.iter() {
                    let tl = &self.target.complex.space.labels(n)[j];
                    for (a, x, y) in self.target.coaction_of(tl) {
                        let e = lhs.entry((a, x)).or_insert_with(Rational::zero);
                        *e += coeff * &y;
                    }
                }
                // (id⊗f)(ρ_S(l))
                let mut rhs: BTreeMap<(Label, Label), Rational> = BTreeMap::new();
                for (a, x, y) in self.source.coaction_of(l) {
                    let (dx, ix) = self.source.complex.space.position(&x).unwrap();
                    if !self.target.complex.is_known(dx) {
                        continue;
                    }
                    let fx = self.map.component(dx).column(ix);
                    for (j, coeff) in fx.iter() {
                        let tl = self.target.complex.space.labels(dx)[j].clone();
                        let e = rhs.entry((a.clone(), tl)).or_insert_with(Rational::zero);
                        *e += &y * coeff;
                    }
                }
                lhs.retain(|_, v| !v.is_zero());
                rhs.retain(|_, v| !v.is_zero());
                if lhs != rhs {
                    return Err(Error::InvariantViolation(format!(
                        "comodule map is not colinear at {l}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn identity(m: Arc<Comodule>) -> Self {
        let map = ChainMap::identity(Arc::new(m.complex.clone()));
        ComoduleMap { source: m.clone(), target: m, map }
    }
}

/// A subcomplex cut out degreewise as a kernel, with representatives kept in
/// the ambient basis.
#[derive(Clone, Debug)]
pub struct Equalized {
    pub complex: ChainComplex,
    pub ambient: ChainComplex,
    /// per degree: ambient coordinates of each basis vector
    pub representatives: BTreeMap<i64, Vec<SparseVec>>,
    solvers: BTreeMap<i64, crate::linalg::SpanSolver>,
}

impl Equalized {
    fn from_reps(
        complex: ChainComplex,
        ambient: ChainComplex,
        representatives: BTreeMap<i64, Vec<SparseVec>>,
    ) -> Self {
        let mut solvers = BTreeMap::new();
        for (&n, reps) in &representatives {
            let mut s = crate::linalg::SpanSolver::new(ambient.dim(n));
            for v in reps {
                s.add_column(v.clone());
            }
            solvers.insert(n, s);
        }
        Equalized { complex, ambient, representatives, solvers }
    }

    /// Coordinates of an ambient vector in the kernel basis at degree n,
    /// when it lies in the subspace.
    pub fn coords(&self, n: i64, v: &SparseVec) -> Option<SparseVec> {
        if v.is_zero() {
            return Some(SparseVec::zero(
                self.representatives.get(&n).map_or(0, |r| r.len()),
            ));
        }
        self.solvers.get(&n)?.solve(v)
    }
}

/// Cuts out the degreewise kernel of a family of maps out of `ambient` as a
/// chain complex (the maps must jointly be d-stable).
pub fn kernel_subcomplex(
    ambient: &ChainComplex,
    constraint: impl Fn(i64) -> SparseMatrix,
    w: DegreeWindow,
) -> Result<Equalized> {
    kernel_subcomplex_adapted(ambient, constraint, None, w)
}

/// Like [`kernel_subcomplex`], but when `levels` assigns a filtration level
/// to each ambient basis position, the kernel basis is chosen adapted to the
/// filtration: vectors of level ≤ j span the kernel's intersection with the
/// ambient level-≤-j part. Returns the level of each basis vector through
/// `Equalized::complex` labels paired with the representatives order.
pub fn kernel_subcomplex_adapted(
    ambient: &ChainComplex,
    constraint: impl Fn(i64) -> SparseMatrix,
    levels: Option<&dyn Fn(i64, usize) -> i64>,
    w: DegreeWindow,
) -> Result<Equalized> {
    let mut reps: BTreeMap<i64, Vec<SparseVec>> = BTreeMap::new();
    let mut basis: BTreeMap<i64, Vec<Label>> = BTreeMap::new();
    for n in w.iter() {
        if !ambient.is_known(n) {
            continue;
        }
        let m = constraint(n);
        if m.cols() != ambient.dim(n) {
            return Err(Error::ShapeMismatch(format!(
                "constraint at degree {n} has {} columns, ambient has {}",
                m.cols(),
                ambient.dim(n)
            )));
        }
        let kernel = match levels {
            None => m.kernel_basis(),
            Some(level_fn) => {
                // build the kernel level by level so the basis is adapted
                let dim = ambient.dim(n);
                let lvl_of: Vec<i64> = (0..dim).map(|i| level_fn(n, i)).collect();
                let mut all_levels: Vec<i64> = lvl_of.clone();
                all_levels.sort();
                all_levels.dedup();
                let mut span = Span::new(dim, &[]);
                let mut adapted = Vec::new();
                for &j in &all_levels {
                    // kernel of constraint restricted to coordinates of level ≤ j
                    let rows_extra: Vec<usize> =
                        (0..dim).filter(|&i| lvl_of[i] > j).collect();
                    let mut stacked = SparseMatrix::zero(m.rows() + rows_extra.len(), dim);
                    for (i, jj, x) in m.iter() {
                        stacked.set(i, jj, x.clone());
                    }
                    for (k, &i) in rows_extra.iter().enumerate() {
                        stacked.set(m.rows() + k, i, Rational::one());
                    }
                    for v in stacked.kernel_basis() {
                        if span.insert(v.clone()) {
                            adapted.push(v);
                        }
                    }
                }
                adapted
            }
        };
        let labels: Vec<Label> = kernel
            .iter()
            .enumerate()
            .map(|(i, v)| match v.as_unit() {
                Some(j) => ambient.space.labels(n)[j].clone(),
                None => Label::Ker(n, i),
            })
            .collect();
        if !labels.is_empty() {
            basis.insert(n, labels);
        }
        reps.insert(n, kernel);
    }
    let space = GradedVectorSpace::new(basis)?;
    let eq_probe = Equalized::from_reps(ChainComplex::zero(), ambient.clone(), reps.clone());
    let mut diff = BTreeMap::new();
    for n in (w.lo + 1)..=w.hi {
        let cur = reps.get(&n).cloned().unwrap_or_default();
        let prev_count = reps.get(&(n - 1)).map_or(0, |v| v.len());
        let mut d = SparseMatrix::zero(prev_count, cur.len());
        let ambient_d = ambient.d(n);
        for (col, v) in cur.iter().enumerate() {
            let dv = ambient_d.apply(v);
            if dv.is_zero() {
                continue;
            }
            let coords = eq_probe.coords(n - 1, &dv).ok_or_else(|| {
                Error::InvariantViolation(format!(
                    "kernel subcomplex is not d-stable at degree {n}"
                ))
            })?;
            for (i, x) in coords.iter() {
                d.set(i, col, x.clone());
            }
        }
        diff.insert(n, d);
    }
    let complex = ChainComplex::new(
        space,
        diff,
        w,
        ambient.zero_below && w.lo <= ambient.window.lo,
        ambient.zero_above && w.hi >= ambient.window.hi,
    )?;
    Ok(Equalized::from_reps(complex, ambient.clone(), reps))
}

/// Result of a cotensor product: the equalised comodule plus ambient data.
#[derive(Clone, Debug)]
pub struct Cotensor {
    pub comodule: Comodule,
    pub equalized: Equalized,
}

/// Cotensor product M □_C N of two left comodules over a cocommutative
/// coalgebra: the equaliser of ρ_M⊗N and M⊗ρ_N inside M⊗N, with the
/// inherited left coaction.
pub fn cotensor(m: &Comodule, n: &Comodule, w: DegreeWindow) -> Result<Cotensor> {
    m.coalgebra.require_cocommutative()?;
    let ambient = tensor(&m.complex, &n.complex, w)?;
    let c = &m.coalgebra;
    // target M ⊗ C ⊗ N enumerated per degree as (m-label, c-label, n-label)
    let w_eff = ambient.window;
    let mut triple_index: BTreeMap<i64, BTreeMap<(Label, Label, Label), usize>> = BTreeMap::new();
    for k in w_eff.iter() {
        let mut idx = BTreeMap::new();
        for dm in m.complex.window.iter() {
            for dc in c.complex.window.iter() {
                let dn = k - dm - dc;
                for lm in m.complex.space.labels(dm) {
                    for lc in c.complex.space.labels(dc) {
                        for ln in n.complex.space.labels(dn) {
                            let len = idx.len();
                            idx.insert((lm.clone(), lc.clone(), ln.clone()), len);
                        }
                    }
                }
            }
        }
        triple_index.insert(k, idx);
    }
    let constraint = |k: i64| -> SparseMatrix {
        let idx = &triple_index[&k];
        let mut mat = SparseMatrix::zero(idx.len(), ambient.dim(k));
        for (col, lab) in ambient.space.labels(k).iter().enumerate() {
            let Label::Pair(lm, ln) = lab else { unreachable!() };
            // leg 1: (ρ_M^R ⊗ id) (x⊗y) = Σ x' ⊗ a ⊗ y
            for (x2, a, coeff) in m.right_coaction_of(lm).unwrap() {
                let key = (x2, a, (**ln).clone());
                if let Some(&row) = idx.get(&key) {
                    mat.add_to(row, col, coeff);
                }
            }
            // leg 2: (id ⊗ ρ_N) (x⊗y) = Σ x ⊗ a ⊗ y'  (ρ_N has degree 0: no sign)
            for (a, y2, coeff) in n.coaction_of(ln) {
                let key = ((**lm).clone(), a, y2);
                if let Some(&row) = idx.get(&key) {
                    mat.add_to(row, col, -coeff);
                }
            }
        }
        mat
    };
    let equalized = kernel_subcomplex(&ambient, constraint, w_eff)?;
    // left coaction: apply id⊗ρ_N and shuttle the coalgebra factor to the
    // front with the Koszul sign
    let mut coaction: CoactionTable = BTreeMap::new();
    for k in equalized.complex.window.iter() {
        let reps = equalized.representatives.get(&k).cloned().unwrap_or_default();
        for (i, rep) in reps.iter().enumerate() {
            let lab = equalized.complex.space.labels(k)[i].clone();
            // image in C ⊗ ambient, bucketed by coalgebra label
            let mut by_coalg: BTreeMap<Label, SparseVec> = BTreeMap::new();
            for (pos, coeff) in rep.iter() {
                let amb_label = &ambient.space.labels(k)[pos];
                let Label::Pair(lm, ln) = amb_label else { unreachable!() };
                let dm = m.complex.space.degree_of(lm).unwrap();
                for (a, y2, x) in n.coaction_of(ln) {
                    let s = sign(dm * c.degree_of(&a).unwrap_or(0));
                    let inner = Label::pair((**lm).clone(), y2);
                    let da = c.degree_of(&a).unwrap_or(0);
                    if let Some((deg, ipos)) = ambient.space.position(&inner) {
                        debug_assert_eq!(deg, k - da);
                        by_coalg
                            .entry(a)
                            .or_insert_with(|| SparseVec::zero(ambient.dim(k - da)))
                            .add_to(ipos, coeff * &x * &s);
                    }
                }
            }
            let mut table = BTreeMap::new();
            for (a, vec) in by_coalg {
                let da = c.degree_of(&a).unwrap_or(0);
                if vec.is_zero() {
                    continue;
                }
                let coords = equalized.coords(k - da, &vec).ok_or_else(|| {
                    Error::InvariantViolation(
                        "cotensor coaction does not restrict to the equaliser".into(),
                    )
                })?;
                for (j, x) in coords.iter() {
                    let inner_label = equalized.complex.space.labels(k - da)[j].clone();
                    let e = table
                        .entry((a.clone(), inner_label))
                        .or_insert_with(Rational::zero);
                    *e += x.clone();
                }
            }
            table.retain(|_, v: &mut Rational| !v.is_zero());
            coaction.insert(lab, table);
        }
    }
    let comodule = Comodule {
        coalgebra: m.coalgebra.clone(),
        complex: equalized.complex.clone(),
        coaction,
        explicit_right: None,
    };
    Ok(Cotensor { comodule, equalized })
}

/// Coinvariants: the degreewise kernel of ρ − η⊗id, with its inclusion.
pub fn coinvariants(n: &Comodule, w: DegreeWindow) -> Result<(ChainComplex, ChainMap)> {
    let c = &n.coalgebra;
    let ambient = &n.complex;
    let eta = c.coaugmentation.clone();
    // rows indexed by (coalgebra label, module label) pairs per degree
    let mut pair_index: BTreeMap<i64, BTreeMap<(Label, Label), usize>> = BTreeMap::new();
    for k in w.iter() {
        let mut idx = BTreeMap::new();
        for dc in c.complex.window.iter() {
            let dn = k - dc;
            for lc in c.complex.space.labels(dc) {
                for ln in ambient.space.labels(dn) {
                    let len = idx.len();
                    idx.insert((lc.clone(), ln.clone()), len);
                }
            }
        }
        pair_index.insert(k, idx);
    }
    let constraint = |k: i64| -> SparseMatrix {
        let idx = &pair_index[&k];
        let mut mat = SparseMatrix::zero(idx.len(), ambient.dim(k));
        for (col, lab) in ambient.space.labels(k).iter().enumerate() {
            for (a, x, coeff) in n.coaction_of(lab) {
                if let Some(&row) = idx.get(&(a, x)) {
                    mat.add_to(row, col, coeff);
                }
            }
            if let Some(&row) = idx.get(&(eta.clone(), lab.clone())) {
                mat.add_to(row, col, -Rational::one());
            }
        }
        mat
    };
    let eq = kernel_subcomplex(ambient, constraint, w)?;
    let mut comps = BTreeMap::new();
    for k in eq.complex.window.iter() {
        let reps = eq.representatives.get(&k).cloned().unwrap_or_default();
        comps.insert(k, SparseMatrix::from_columns(ambient.dim(k), &reps));
    }
    let incl = ChainMap::new(
        Arc::new(eq.complex.clone()),
        Arc::new(ambient.clone()),
        comps,
    )?;
    Ok((eq.complex, incl))
}

/// Kernel of a comodule map, as a comodule: the degreewise kernel with the
/// restricted coaction.
pub fn comodule_kernel(f: &ComoduleMap, w: DegreeWindow) -> Result<Comodule> {
    let src = &f.source.complex;
    let eq = kernel_subcomplex(src, |n| f.map.component(n), w)?;
    let c = &f.source.coalgebra;
    let mut coaction: CoactionTable = BTreeMap::new();
    for k in eq.complex.window.iter() {
        let reps = eq.representatives.get(&k).cloned().unwrap_or_default();
        for (i, rep) in reps.iter().enumerate() {
            let lab = eq.complex.space.labels(k)[i].clone();
            let mut by_coalg: BTreeMap<Label, SparseVec> = BTreeMap::new();
            for (pos, coeff) in rep.iter() {
                let amb_label = &src.space.labels(k)[pos];
                for (a, x, y) in f.source.coaction_of(amb_label) {
                    let da = c.degree_of(&a).unwrap_or(0);
                    let (dx, ix) = src.space.position(&x).unwrap();
                    debug_assert_eq!(dx, k - da);
                    by_coalg
                        .entry(a)
                        .or_insert_with(|| SparseVec::zero(src.dim(k - da)))
                        .add_to(ix, coeff * &y);
                }
            }
            let mut table = BTreeMap::new();
            for (a, vec) in by_coalg {
                if vec.is_zero() {
                    continue;
                }
                let da = c.degree_of(&a).unwrap_or(0);
                let coords = eq.coords(k - da, &vec).ok_or_else(|| {
                    Error::InvariantViolation(
                        "comodule kernel coaction does not restrict".into(),
                    )
                })?;
                for (j, x) in coords.iter() {
                    let inner = eq.complex.space.labels(k - da)[j].clone();
                    let e = table.entry((a.clone(), inner)).or_insert_with(Rational::zero);
                    *e += x.clone();
                }
            }
            table.retain(|_, v: &mut Rational| !v.is_zero());
            coaction.insert(lab, table);
        }
    }
    Ok(Comodule { coalgebra: c.clone(), complex: eq.complex, coaction, explicit_right: None })
}

/// The limit {N, M}_C: the sub chain complex of [N, M] of colinear maps,
/// computed degreewise as the equaliser of post-composition with ρ_M and
/// pre-composition with ρ_N followed by C⊗−.
pub fn comodule_hom_complex(n: &Comodule, m: &Comodule, w: DegreeWindow) -> Result<Equalized> {
    if !n.complex.fully_finite() {
        return Err(Error::IncompleteDegree(w.lo));
    }
    let ambient = hom_complex(&n.complex, &m.complex, w)?;
    // rows: basis of [N, C⊗M]_q indexed by (n-label, c-label, m-label)
    let c = &n.coalgebra;
    let mut triple_index: BTreeMap<i64, BTreeMap<(Label, Label, Label), usize>> = BTreeMap::new();
    for q in w.iter() {
        let mut idx = BTreeMap::new();
        for dn in n.complex.window.iter() {
            for ln in n.complex.space.labels(dn) {
                for dc in c.complex.window.iter() {
                    let dm = dn + q - dc;
                    for lc in c.complex.space.labels(dc) {
                        for lm in m.complex.space.labels(dm) {
                            let len = idx.len();
                            idx.insert((ln.clone(), lc.clone(), lm.clone()), len);
                        }
                    }
                }
            }
        }
        triple_index.insert(q, idx);
    }
    let constraint = |q: i64| -> SparseMatrix {
        let idx = &triple_index[&q];
        let mut mat = SparseMatrix::zero(idx.len(), ambient.dim(q));
        for (col, lab) in ambient.space.labels(q).iter().enumerate() {
            let Label::Hom(ln, lm) = lab else { unreachable!() };
            // ρ_M ∘ f : x ↦ ρ_M(f(x))
            for (a, m2, coeff) in m.coaction_of(lm) {
                if let Some(&row) = idx.get(&((**ln).clone(), a, m2)) {
                    mat.add_to(row, col, coeff);
                }
            }
            // (C⊗f) ∘ ρ_N : x ↦ Σ (−1)^{q|a|} a ⊗ f(x')  where ρ_N(x) = Σ a⊗x'
            // realized on the basis: the elementary map e_{ln→lm} contributes
            // to sources x with ρ_N(x) ∋ a ⊗ ln
            for dx in n.complex.window.iter() {
                for lx in n.complex.space.labels(dx) {
                    for (a, x2, coeff) in n.coaction_of(lx) {
                        if x2 == **ln {
                            let da = c.degree_of(&a).unwrap_or(0);
                            let s = sign(q * da);
                            // row: source lx, value a ⊗ f(ln) = a ⊗ lm
                            if let Some(&row) = idx.get(&(lx.clone(), a.clone(), (**lm).clone())) {
                                mat.add_to(row, col, -(coeff * s));
                            }
                        }
                    }
                }
            }
        }
        mat
    };
    kernel_subcomplex(&ambient, constraint, w)
}

/// Degrees on which {N, M} is complete: every hom degree q needs [N,M]_q,
/// [N,M]_{q−1} and [N, C⊗M]_q assembled from known data.
pub fn comodule_hom_complete_window(n: &Comodule, m: &Comodule, w: DegreeWindow) -> Option<DegreeWindow> {
    if !n.complex.fully_finite() {
        return None;
    }
    let c = &n.coalgebra;
    let ok = |q: i64| -> bool {
        for dn in n.complex.window.iter() {
            if n.complex.dim(dn) == 0 {
                continue;
            }
            if !(m.complex.is_known(dn + q) && m.complex.is_known(dn + q - 1)) {
                return false;
            }
            for dc in c.complex.window.iter() {
                if c.complex.dim(dc) > 0 && !m.complex.is_known(dn + q - dc) {
                    return false;
                }
            }
        }
        true
    };
    if !ok(w.lo) {
        return None;
    }
    let mut hi = w.lo;
    while hi < w.hi && ok(hi + 1) {
        hi += 1;
    }
    Some(DegreeWindow::new(w.lo, hi))
}

#[cfg(test)]
pub mod tests {
    use super::*;
    use crate::graded::homology;
    use crate::linalg::qi;

    /// Homology coalgebra of an n-sphere: ℚ in degrees 0 and n, primitive
    /// top class.
    pub fn sphere_homology_coalgebra(n: i64) -> DGCoalgebra {
        let one = Label::atom("1");
        let top = Label::atom("c");
        let mut basis = BTreeMap::new();
        basis.insert(0, vec![one.clone()]);
        basis.insert(n, vec![top.clone()]);
        let space = GradedVectorSpace::new(basis).unwrap();
        let complex =
            ChainComplex::new(space, BTreeMap::new(), DegreeWindow::new(0, n), true, true).unwrap();
        let mut counit = BTreeMap::new();
        counit.insert(one.clone(), Rational::one());
        let mut coproduct: CoproductTable = BTreeMap::new();
        coproduct.insert(
            one.clone(),
            BTreeMap::from([((one.clone(), one.clone()), Rational::one())]),
        );
        coproduct.insert(
            top.clone(),
            BTreeMap::from([
                ((top.clone(), one.clone()), Rational::one()),
                ((one.clone(), top.clone()), Rational::one()),
            ]),
        );
        DGCoalgebra {
            complex,
            counit,
            coproduct,
            coaugmentation: one,
            cocommutative: Some(true),
            two_reduced: Some(n >= 2),
        }
    }

    #[test]
    fn primitive_generator_coalgebra_validates() {
        let c = sphere_homology_coalgebra(2);
        let report = validate_coalgebra(&c);
        assert!(report.passed(), "{:?}", report.violations);
    }

    #[test]
    fn two_reduced_flag_fails_with_degree_one_class() {
        let c = sphere_homology_coalgebra(1);
        let mut c = c;
        c.two_reduced = Some(true);
        let report = validate_coalgebra(&c);
        assert!(report
            .violations
            .iter()
            .any(|v| v.contains("2-reduced flag fails")));
    }

    #[test]
    fn product_coalgebra_validates_and_is_cocommutative() {
        let s2 = sphere_homology_coalgebra(2);
        let c = coalgebra_tensor(&s2, &s2, DegreeWindow::new(0, 4)).unwrap();
        let report = validate_coalgebra(&c);
        assert!(report.passed(), "{:?}", report.violations);
        assert_eq!(c.complex.dim(2), 2);
        assert_eq!(c.complex.dim(4), 1);
    }

    #[test]
    fn cofree_on_unit_is_regular_comodule() {
        let c = Arc::new(sphere_homology_coalgebra(3));
        let v = ChainComplex::unit(0, Label::atom("v"));
        let cf = cofree_comodule(&c, &v, DegreeWindow::new(0, 3)).unwrap();
        assert_eq!(cf.complex.dims(), c.complex.dims());
        assert!(validate_comodule(&cf).passed());
    }

    #[test]
    fn cofree_over_scalar_is_trivial() {
        let c = Arc::new(DGCoalgebra::scalar());
        let v = ChainComplex::unit(2, Label::atom("v"));
        let cf = cofree_comodule(&c, &v, DegreeWindow::new(0, 4)).unwrap();
        assert_eq!(cf.complex.dim(2), 1);
        assert_eq!(cf.complex.space.total_dim(), 1);
    }

    #[test]
    fn cofree_shifts_degrees() {
        let c = Arc::new(sphere_homology_coalgebra(2));
        let v = ChainComplex::unit(3, Label::atom("v"));
        let cf = cofree_comodule(&c, &v, DegreeWindow::new(0, 5)).unwrap();
        assert_eq!(cf.complex.dim(3), 1);
        assert_eq!(cf.complex.dim(5), 1);
        assert!(validate_comodule(&cf).passed());
    }

    #[test]
    fn cotensor_unit_identifications() {
        let c = Arc::new(sphere_homology_coalgebra(3));
        let reg = Comodule::regular(c.clone());
        let n = cofree_comodule(&c, &ChainComplex::unit(0, Label::atom("v")), DegreeWindow::new(0, 3)).unwrap();
        // C □_C (C⊗ℚ) ≅ C⊗ℚ: dims 1 at 0 and 3
        let ct = cotensor(&reg, &n, DegreeWindow::new(0, 3)).unwrap();
        assert_eq!(ct.comodule.complex.dim(0), 1);
        assert_eq!(ct.comodule.complex.dim(3), 1);
        assert!(validate_comodule(&ct.comodule).passed());
    }

    #[test]
    fn cotensor_over_scalar_is_tensor() {
        let c = Arc::new(DGCoalgebra::scalar());
        let m = Comodule::trivial(c.clone(), ChainComplex::unit(1, Label::atom("x")));
        let n = Comodule::trivial(c.clone(), ChainComplex::unit(2, Label::atom("y")));
        let ct = cotensor(&m, &n, DegreeWindow::new(0, 4)).unwrap();
        assert_eq!(ct.comodule.complex.dim(3), 1);
        assert_eq!(ct.comodule.complex.space.total_dim(), 1);
    }

    #[test]
    fn cotensor_symmetry_of_dims() {
        let c = Arc::new(sphere_homology_coalgebra(2));
        let m = Comodule::regular(c.clone());
        let n = cofree_comodule(&c, &ChainComplex::unit(1, Label::atom("v")), DegreeWindow::new(0, 4)).unwrap();
        let ab = cotensor(&m, &n, DegreeWindow::new(0, 4)).unwrap();
        let ba = cotensor(&n, &m, DegreeWindow::new(0, 4)).unwrap();
        assert_eq!(ab.comodule.complex.dims(), ba.comodule.complex.dims());
    }

    #[test]
    fn cotensor_requires_cocommutativity() {
        let mut c = sphere_homology_coalgebra(2);
        c.cocommutative = None;
        let c = Arc::new(c);
        let m = Comodule::regular(c.clone());
        let n = Comodule::regular(c.clone());
        let err = cotensor(&m, &n, DegreeWindow::new(0, 2)).unwrap_err();
        assert!(err.to_string().starts_with("non-cocommutative"));
    }

    #[test]
    fn coinvariants_of_trivial_coaction_is_everything() {
        let c = Arc::new(sphere_homology_coalgebra(2));
        let n = Comodule::trivial(c, ChainComplex::unit(1, Label::atom("x")));
        let (inv, _) = coinvariants(&n, DegreeWindow::new(0, 1)).unwrap();
        assert_eq!(inv.dim(1), 1);
    }

    #[test]
    fn coinvariants_of_regular_comodule() {
        // N = C with a nontrivial coproduct on the top generator: only the
        // coaugmentation survives in low degrees
        let c = Arc::new(sphere_homology_coalgebra(2));
        let n = Comodule::regular(c.clone());
        let (inv, _) = coinvariants(&n, DegreeWindow::new(0, 2)).unwrap();
        assert_eq!(inv.dim(0), 1);
        // ρ(c) = 1⊗c + c⊗1 ≠ 1⊗c, so the top class is not coinvariant
        assert_eq!(inv.dim(2), 0);
    }

    #[test]
    fn coinvariants_of_cofree_match_cogenerators() {
        let c = Arc::new(sphere_homology_coalgebra(3));
        let v = ChainComplex::unit(2, Label::atom("v"));
        let cf = cofree_comodule(&c, &v, DegreeWindow::new(0, 5)).unwrap();
        let (inv, _) = coinvariants(&cf, DegreeWindow::new(0, 5)).unwrap();
        assert_eq!(inv.dim(2), 1);
        assert_eq!(inv.space.total_dim(), 1);
    }

    #[test]
    fn comodule_hom_over_scalar_is_plain_hom() {
        let c = Arc::new(DGCoalgebra::scalar());
        let n = Comodule::trivial(c.clone(), ChainComplex::unit(1, Label::atom("x")));
        let m = Comodule::trivial(c.clone(), ChainComplex::unit(1, Label::atom("y")));
        let eq = comodule_hom_complex(&n, &m, DegreeWindow::new(-1, 1)).unwrap();
        assert_eq!(eq.complex.dim(0), 1);
        assert_eq!(eq.complex.space.total_dim(), 1);
    }

    #[test]
    fn comodule_hom_from_regular_into_cofree() {
        // {C, C⊗V} ≅ [C, V]: colinear maps out of the regular comodule into a
        // cofree target are plain maps into the cogenerators.
        let c = Arc::new(sphere_homology_coalgebra(2));
        let n = Comodule::regular(c.clone());
        let v = ChainComplex::unit(1, Label::atom("v"));
        let m = cofree_comodule(&c, &v, DegreeWindow::new(0, 3)).unwrap();
        let w = comodule_hom_complete_window(&n, &m, DegreeWindow::new(-3, 1)).unwrap();
        let eq = comodule_hom_complex(&n, &m, w).unwrap();
        let hom = hom_complex(&n.complex, &v, w).unwrap();
        for q in w.iter() {
            assert_eq!(eq.complex.dim(q), hom.dim(q), "degree {q}");
        }
        // hand-solved: one solution with f(1) = 1⊗v, f(c) = c⊗v at q = 1 and
        // one with f(1) = 0, f(c) = 1⊗v at q = −1
        assert_eq!(eq.complex.dim(1), 1);
        assert_eq!(eq.complex.dim(-1), 1);
    }

    #[test]
    fn comodule_hom_into_cofree_is_hom_into_cogenerators() {
        let c = Arc::new(sphere_homology_coalgebra(2));
        let n = cofree_comodule(&c, &ChainComplex::unit(0, Label::atom("u")), DegreeWindow::new(0, 2)).unwrap();
        let v = ChainComplex::unit(1, Label::atom("v"));
        let m = cofree_comodule(&c, &v, DegreeWindow::new(0, 3)).unwrap();
        let w = comodule_hom_complete_window(&n, &m, DegreeWindow::new(-2, 1)).unwrap();
        let eq = comodule_hom_complex(&n, &m, w).unwrap();
        // {N, C⊗V} ≅ [N, V]
        let hom = hom_complex(&n.complex, &v, w).unwrap();
        for q in w.iter() {
            assert_eq!(eq.complex.dim(q), hom.dim(q), "degree {q}");
        }
    }

    #[test]
    fn counit_identification_exhibited_on_labels() {
        // C □_C N ≅ N via ε⊗id on representatives
        let c = Arc::new(sphere_homology_coalgebra(2));
        let reg = Comodule::regular(c.clone());
        let n = cofree_comodule(&c, &ChainComplex::unit(0, Label::atom("v")), DegreeWindow::new(0, 2)).unwrap();
        let ct = cotensor(&reg, &n, DegreeWindow::new(0, 2)).unwrap();
        for k in ct.comodule.complex.window.iter() {
            let reps = ct.equalized.representatives.get(&k).cloned().unwrap_or_default();
            let mut images: Vec<SparseVec> = Vec::new();
            for rep in &reps {
                let mut img = SparseVec::zero(n.complex.dim(k));
                for (pos, coeff) in rep.iter() {
                    let Label::Pair(lm, ln) = &ct.equalized.ambient.space.labels(k)[pos] else {
                        unreachable!()
                    };
                    let eps = c.counit_of(lm);
                    if !eps.is_zero() {
                        let (dn, i) = n.complex.space.position(ln).unwrap();
                        assert_eq!(dn, k);
                        img.add_to(i, eps * coeff);
                    }
                }
                images.push(img);
            }
            let rank = SparseMatrix::from_columns(n.complex.dim(k), &images).rank();
            assert_eq!(rank, n.complex.dim(k), "counit map not iso at degree {k}");
            assert_eq!(reps.len(), n.complex.dim(k));
        }
    }

    #[test]
    fn homology_of_sphere_coalgebra() {
        let c = sphere_homology_coalgebra(4);
        let h = homology(&c.complex, DegreeWindow::new(0, 4)).unwrap();
        assert_eq!(h.dim(0), 1);
        assert_eq!(h.dim(4), 1);
        assert_eq!(h.dims().values().sum::<usize>(), 2);
        assert_eq!(h.dim(1) + h.dim(2) + h.dim(3), 0);
        let _ = qi(0);
    }
}
