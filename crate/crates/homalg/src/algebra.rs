//! Dg algebras and their modules.
//!
//! Products and actions are either explicit structure-constant tables or
//! functional rules (word concatenation for free algebras, multiplication on
//! the first tensor factor for extended modules). Functional rules keep the
//! cobar construction linear-sized: its product table would be quadratic in
//! the word basis.

use crate::error::{Error, Result};
use crate::graded::{ChainComplex, DegreeWindow, LinComb};
use crate::label::Label;
use crate::linalg::Rational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

/// How a dg algebra multiplies basis labels.
#[derive(Clone, Debug)]
pub enum ProductRule {
    /// structure constants on label pairs; pairs with zero product omitted
    Table(BTreeMap<(Label, Label), LinComb>),
    /// free multiplication: labels are `Word`s over generators and the
    /// product is concatenation, truncated at the window top
    FreeWords,
}

#[derive(Clone, Debug)]
pub struct DGAlgebra {
    pub complex: ChainComplex,
    pub unit: Label,
    pub product: ProductRule,
    /// augmentation as a functional on basis labels (missing = 0)
    pub augmentation: Option<BTreeMap<Label, Rational>>,
}

impl DGAlgebra {
    /// The ground field as a dg algebra, with unit label `1`.
    pub fn scalar() -> DGAlgebra {
        let unit = Label::atom("1");
        let complex = ChainComplex::unit(0, unit.clone());
        let mut aug = BTreeMap::new();
        aug.insert(unit.clone(), Rational::one());
        DGAlgebra {
            complex,
            unit: unit.clone(),
            product: ProductRule::Table(BTreeMap::from([(
                (unit.clone(), unit.clone()),
                LinComb::single(unit),
            )])),
            augmentation: Some(aug),
        }
    }

    pub fn degree_of(&self, l: &Label) -> Option<i64> {
        self.complex.space.degree_of(l)
    }

    /// Multiplies two basis labels. Products that leave the window are
    /// silently truncated (the window owner must account for this).
    pub fn mul_labels(&self, a: &Label, b: &Label) -> LinComb {
        if *a == self.unit {
            return LinComb::single(b.clone());
        }
        if *b == self.unit {
            return LinComb::single(a.clone());
        }
        match &self.product {
            ProductRule::Table(t) => t
                .get(&(a.clone(), b.clone()))
                .cloned()
                .unwrap_or_else(LinComb::zero),
            ProductRule::FreeWords => {
                let (Label::Word(u), Label::Word(v)) = (a, b) else {
                    return LinComb::zero();
                };
                let mut w = u.clone();
                w.extend(v.iter().cloned());
                let word = Label::Word(w);
                if self.complex.space.position(&word).is_some() {
                    LinComb::single(word)
                } else {
                    LinComb::zero()
                }
            }
        }
    }

    pub fn mul(&self, x: &LinComb, y: &LinComb) -> LinComb {
        let mut out = LinComb::zero();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                out.add(&self.mul_labels(a, b).scale(&(ca * cb)));
            }
        }
        out
    }

    pub fn augment(&self, l: &Label) -> Result<Rational> {
        let aug = self
            .augmentation
            .as_ref()
            .ok_or_else(|| Error::NotAugmented("algebra has no augmentation".into()))?;
        Ok(aug.get(l).cloned().unwrap_or_else(Rational::zero))
    }

    pub fn is_connective(&self) -> bool {
        self.complex.zero_below && self.complex.window.lo >= 0
    }

    /// Basis of the augmentation ideal per degree (labels with ε = 0).
    pub fn augmentation_ideal_labels(&self, n: i64) -> Result<Vec<Label>> {
        let aug = self
            .augmentation
            .as_ref()
            .ok_or_else(|| Error::NotAugmented("algebra has no augmentation".into()))?;
        Ok(self
            .complex
            .space
            .labels(n)
            .iter()
            .filter(|l| aug.get(*l).map_or(true, |x| x.is_zero()))
            .cloned()
            .collect())
    }
}

/// A validation report: empty means every check passed.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn note(&mut self, msg: String) {
        self.violations.push(msg);
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    pub fn into_result(self, context: &str) -> Result<()> {
        if self.passed() {
            Ok(())
        } else {
            Err(Error::InvariantViolation(format!(
                "{context}: {}",
                self.violations.join("; ")
            )))
        }
    }
}

/// Exhaustive basis-level validation of the algebra axioms inside the
/// window: unitality, associativity, the Leibniz rule and (when present)
/// that the augmentation is a map of dg algebras. `sample_budget` caps the
/// number of associativity triples checked (exhaustive when it is `None`).
pub fn validate_algebra(a: &DGAlgebra, sample_budget: Option<usize>) -> ValidationReport {
    let mut report = ValidationReport::default();
    let w = a.complex.window;
    match a.degree_of(&a.unit) {
        Some(0) => {}
        other => report.note(format!("unit label has degree {other:?}, expected 0")),
    }

    let labels: Vec<(i64, Label)> = (w.lo..=w.hi)
        .flat_map(|n| a.complex.space.labels(n).iter().map(move |l| (n, l.clone())))
        .collect();

    for (_, l) in &labels {
        if a.mul_labels(&a.unit, l) != LinComb::single(l.clone()) {
            report.note(format!("unit fails on the left of {l}"));
        }
        if a.mul_labels(l, &a.unit) != LinComb::single(l.clone()) {
            report.note(format!("unit fails on the right of {l}"));
        }
    }

    // Leibniz: d(ab) = (da)b + (−1)^{|a|} a(db), for products inside the window
    for (da, la) in &labels {
        for (db, lb) in &labels {
            if da + db > w.hi || da + db - 1 < w.lo {
                continue;
            }
            let ab = a.mul_labels(la, lb);
            let lhs = a.complex.d_comb(&ab).unwrap_or_else(|_| LinComb::zero());
            let mut rhs = LinComb::zero();
            let da_comb = a.complex.d_comb(&LinComb::single(la.clone())).unwrap();
            rhs.add(&a.mul(&da_comb, &LinComb::single(lb.clone())));
            let db_comb = a.complex.d_comb(&LinComb::single(lb.clone())).unwrap();
            rhs.add(&a.mul(&LinComb::single(la.clone()), &db_comb).scale(&crate::graded::sign(*da)));
            if lhs != rhs {
                report.note(format!("Leibniz fails on ({la}, {lb})"));
            }
        }
    }

    // associativity on triples that stay inside the window
    let mut checked = 0usize;
    'outer: for (da, la) in &labels {
        for (db, lb) in &labels {
            for (dc, lc) in &labels {
                if da + db + dc > w.hi {
                    continue;
                }
                if let Some(budget) = sample_budget {
                    if checked >= budget {
                        break 'outer;
                    }
                }
                checked += 1;
                let left = a.mul(&a.mul_labels(la, lb), &LinComb::single(lc.clone()));
                let right = a.mul(&LinComb::single(la.clone()), &a.mul_labels(lb, lc));
                if left != right {
                    report.note(format!("associativity fails on ({la}, {lb}, {lc})"));
                }
            }
        }
    }

    if let Some(aug) = &a.augmentation {
        if aug.get(&a.unit) != Some(&Rational::one()) {
            report.note("augmentation does not send the unit to 1".into());
        }
        for (da, la) in &labels {
            if *da != 0 {
                if let Some(x) = aug.get(la) {
                    if !x.is_zero() {
                        report.note(format!("augmentation nonzero on positive-degree {la}"));
                    }
                }
            }
            // ε is a chain map to ℚ concentrated in degree 0
            if *da == 1 {
                let d = a.complex.d_comb(&LinComb::single(la.clone())).unwrap();
                let mut eps = Rational::zero();
                for (l, c) in d.iter() {
                    eps += aug.get(l).cloned().unwrap_or_else(Rational::zero) * c;
                }
                if !eps.is_zero() {
                    report.note(format!("augmentation does not vanish on d({la})"));
                }
            }
        }
        for (da, la) in &labels {
            for (db, lb) in &labels {
                if da + db > w.hi {
                    continue;
                }
                let prod = a.mul_labels(la, lb);
                let mut eps = Rational::zero();
                for (l, c) in prod.iter() {
                    eps += aug.get(l).cloned().unwrap_or_else(Rational::zero) * c;
                }
                let expected = aug.get(la).cloned().unwrap_or_else(Rational::zero)
                    * aug.get(lb).cloned().unwrap_or_else(Rational::zero);
                if eps != expected {
                    report.note(format!("augmentation not multiplicative on ({la}, {lb})"));
                }
            }
        }
    }
    report
}

/// How a module's action on basis labels is computed.
#[derive(Clone, Debug)]
pub enum ActionRule {
    /// structure constants (algebra label, module label) → combination
    Table(BTreeMap<(Label, Label), LinComb>),
    /// module labels are pairs `(algebra label * rest)`; the action
    /// multiplies into the first component (twisted extensions)
    LeftMul,
    /// action through the augmentation: a·m = ε(a) m
    Augmentation,
    /// module labels are pairs of labels from two modules over the same
    /// free algebra with primitive generators; generators act by the
    /// Leibniz rule and words act letter by letter
    PrimitiveTensor(Box<AlgebraModule>, Box<AlgebraModule>),
}

#[derive(Clone, Debug)]
pub struct AlgebraModule {
    pub algebra: Arc<DGAlgebra>,
    pub complex: ChainComplex,
    pub action: ActionRule,
}

impl AlgebraModule {
    /// The ground field as a module over an augmented algebra.
    pub fn trivial(algebra: Arc<DGAlgebra>, label: Label) -> Result<AlgebraModule> {
        if algebra.augmentation.is_none() {
            return Err(Error::NotAugmented(
                "trivial module needs an augmented algebra".into(),
            ));
        }
        Ok(AlgebraModule {
            algebra,
            complex: ChainComplex::unit(0, label),
            action: ActionRule::Augmentation,
        })
    }

    /// A chain complex with trivial action through the augmentation.
    pub fn trivial_on(algebra: Arc<DGAlgebra>, complex: ChainComplex) -> Result<AlgebraModule> {
        if algebra.augmentation.is_none() {
            return Err(Error::NotAugmented(
                "trivial module needs an augmented algebra".into(),
            ));
        }
        Ok(AlgebraModule { algebra, complex, action: ActionRule::Augmentation })
    }

    /// Action of one algebra basis label on one module basis label.
    pub fn act_labels(&self, a: &Label, m: &Label) -> LinComb {
        if *a == self.algebra.unit {
            return LinComb::single(m.clone());
        }
        match &self.action {
            ActionRule::Table(t) => t
                .get(&(a.clone(), m.clone()))
                .cloned()
                .unwrap_or_else(LinComb::zero),
            ActionRule::LeftMul => {
                let Label::Pair(first, rest) = m else {
                    return LinComb::zero();
                };
                let prod = self.algebra.mul_labels(a, first);
                let mut out = LinComb::zero();
                for (l, c) in prod.iter() {
                    let lab = Label::pair(l.clone(), (**rest).clone());
                    if self.complex.space.position(&lab).is_some() {
                        out.add_term(lab, c.clone());
                    }
                }
                out
            }
            ActionRule::Augmentation => {
                let eps = self.algebra.augment(a).unwrap_or_else(|_| Rational::zero());
                LinComb::term(m.clone(), eps)
            }
            ActionRule::PrimitiveTensor(left, right) => {
                // a must be a word over primitive generators
                let Label::Word(letters) = a else {
                    return LinComb::zero();
                };
                let mut terms = LinComb::single(m.clone());
                // letters act in order: (g1 g2 …)·m = g1·(g2·(…))
                for g in letters.iter().rev() {
                    let mut next = LinComb::zero();
                    let gdeg = self.algebra.degree_of(&Label::Word(vec![g.clone()])).unwrap_or(0);
                    for (lab, c) in terms.iter() {
                        let Label::Pair(x, y) = lab else { continue };
                        let dx = left.complex.space.degree_of(x).unwrap();
                        // g·(x⊗y) = (g·x)⊗y + (−1)^{|x||g|} x⊗(g·y)
                        let gx = left.act_labels(&Label::Word(vec![g.clone()]), x);
                        for (l, cl) in gx.iter() {
                            let lab2 = Label::pair(l.clone(), (**y).clone());
                            if self.complex.space.position(&lab2).is_some() {
                                next.add_term(lab2, cl * c);
                            }
                        }
                        let gy = right.act_labels(&Label::Word(vec![g.clone()]), y);
                        let s = crate::graded::sign(dx * gdeg);
                        for (l, cl) in gy.iter() {
                            let lab2 = Label::pair((**x).clone(), l.clone());
                            if self.complex.space.position(&lab2).is_some() {
                                next.add_term(lab2, cl * c * &s);
                            }
                        }
                    }
                    terms = next;
                }
                terms
            }
        }
    }

    pub fn act(&self, a: &LinComb, m: &LinComb) -> LinComb {
        let mut out = LinComb::zero();
        for (la, ca) in a.iter() {
            for (lm, cm) in m.iter() {
                out.add(&self.act_labels(la, lm).scale(&(ca * cm)));
            }
        }
        out
    }
}

/// Validates the module axioms on window bases: unitality, associativity of
/// the action, and the Leibniz rule d(a·m) = (da)·m + (−1)^{|a|} a·(dm).
///
/// Truncation care: a check is skipped whenever an intermediate product can
/// leave the window (the data there is not comparable).
pub fn validate_module(m: &AlgebraModule, sample_budget: Option<usize>) -> ValidationReport {
    let mut report = ValidationReport::default();
    let aw = m.algebra.complex.window;
    let mw = m.complex.window;
    let alg_labels: Vec<(i64, Label)> = (aw.lo..=aw.hi)
        .flat_map(|n| {
            m.algebra
                .complex
                .space
                .labels(n)
                .iter()
                .map(move |l| (n, l.clone()))
        })
        .collect();
    let mod_labels: Vec<(i64, Label)> = (mw.lo..=mw.hi)
        .flat_map(|n| m.complex.space.labels(n).iter().map(move |l| (n, l.clone())))
        .collect();

    for (_, lm) in &mod_labels {
        if m.act_labels(&m.algebra.unit, lm) != LinComb::single(lm.clone()) {
            report.note(format!("module unit fails on {lm}"));
        }
    }

    // Leibniz
    for (da, la) in &alg_labels {
        for (dm, lm) in &mod_labels {
            if da + dm > mw.hi || da + dm - 1 < mw.lo {
                continue;
            }
            let am = m.act_labels(la, lm);
            let lhs = m.complex.d_comb(&am).unwrap_or_else(|_| LinComb::zero());
            let mut rhs = LinComb::zero();
            let da_comb = m
                .algebra
                .complex
                .d_comb(&LinComb::single(la.clone()))
                .unwrap_or_else(|_| LinComb::zero());
            rhs.add(&m.act(&da_comb, &LinComb::single(lm.clone())));
            let dm_comb = m.complex.d_comb(&LinComb::single(lm.clone())).unwrap();
            rhs.add(&m.act(&LinComb::single(la.clone()), &dm_comb).scale(&crate::graded::sign(*da)));
            if lhs != rhs {
                report.note(format!("module Leibniz fails on ({la}, {lm})"));
            }
        }
    }

    // associativity (ab)·m = a·(b·m)
    let mut checked = 0usize;
    'outer: for (da, la) in &alg_labels {
        for (db, lb) in &alg_labels {
            if da + db > aw.hi {
                continue; // product truncated, not comparable
            }
            for (dm, lm) in &mod_labels {
                if da + db + dm > mw.hi {
                    continue;
                }
                if let Some(budget) = sample_budget {
                    if checked >= budget {
                        break 'outer;
                    }
                }
                checked += 1;
                let ab = m.algebra.mul_labels(la, lb);
                let left = m.act(&ab, &LinComb::single(lm.clone()));
                let bm = m.act_labels(lb, lm);
                let right = m.act(&LinComb::single(la.clone()), &bm);
                if left != right {
                    report.note(format!("action associativity fails on ({la}, {lb}, {lm})"));
                }
            }
        }
    }
    report
}

/// Tensor product of two modules over a free algebra with primitive
/// generators, with the diagonal action.
pub fn module_tensor(
    x: &AlgebraModule,
    y: &AlgebraModule,
    w: DegreeWindow,
) -> Result<AlgebraModule> {
    if !matches!(x.algebra.product, ProductRule::FreeWords) {
        return Err(Error::AlgebraMismatch(
            "diagonal module tensor needs a free algebra with primitive generators".into(),
        ));
    }
    let complex = crate::graded::tensor(&x.complex, &y.complex, w)?;
    Ok(AlgebraModule {
        algebra: x.algebra.clone(),
        complex,
        action: ActionRule::PrimitiveTensor(Box::new(x.clone()), Box::new(y.clone())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::GradedVectorSpace;
    use crate::linalg::{qi, qr, SparseMatrix};

    /// ℚ[x] with |x| = 2, truncated at degree `hi`.
    pub fn polynomial_algebra(hi: i64) -> DGAlgebra {
        let unit = Label::Word(vec![]);
        let mut basis = BTreeMap::new();
        for k in 0..=(hi / 2) {
            let word = Label::Word(vec![Label::atom("x"); k as usize]);
            basis.insert(2 * k, vec![word]);
        }
        let space = GradedVectorSpace::new(basis).unwrap();
        let complex = ChainComplex::new(
            space,
            BTreeMap::new(),
            DegreeWindow::new(0, hi),
            true,
            false,
        )
        .unwrap();
        let mut aug = BTreeMap::new();
        aug.insert(unit.clone(), Rational::one());
        DGAlgebra { complex, unit, product: ProductRule::FreeWords, augmentation: Some(aug) }
    }

    #[test]
    fn polynomial_algebra_validates() {
        let a = polynomial_algebra(8);
        let report = validate_algebra(&a, None);
        assert!(report.passed(), "{:?}", report.violations);
    }

    #[test]
    fn planted_associativity_defect_is_caught() {
        // basis 1, a, b, c in degree 0 with a table where a(bc) != (ab)c
        let unit = Label::atom("1");
        let (a, b, c) = (Label::atom("a"), Label::atom("b"), Label::atom("c"));
        let mut basis = BTreeMap::new();
        basis.insert(0, vec![unit.clone(), a.clone(), b.clone(), c.clone()]);
        let space = GradedVectorSpace::new(basis).unwrap();
        let complex =
            ChainComplex::new(space, BTreeMap::new(), DegreeWindow::new(0, 0), true, true).unwrap();
        let mut table = BTreeMap::new();
        for x in [&a, &b, &c] {
            for y in [&a, &b, &c] {
                table.insert((x.clone(), y.clone()), LinComb::zero());
            }
        }
        table.insert((b.clone(), c.clone()), LinComb::single(a.clone()));
        table.insert((a.clone(), a.clone()), LinComb::single(unit.clone()));
        let alg = DGAlgebra { complex, unit, product: ProductRule::Table(table), augmentation: None };
        let report = validate_algebra(&alg, None);
        assert!(!report.passed());
        assert!(report
            .violations
            .iter()
            .any(|v| v.contains("associativity") && v.contains('a') && v.contains('b')));
    }

    #[test]
    fn tensor_algebra_on_odd_generator_validates() {
        // T(x) with |x| = 1, d = 0: free associativity
        let mut basis = BTreeMap::new();
        for k in 0..=5usize {
            basis.insert(k as i64, vec![Label::Word(vec![Label::atom("x"); k])]);
        }
        let space = GradedVectorSpace::new(basis).unwrap();
        let complex =
            ChainComplex::new(space, BTreeMap::new(), DegreeWindow::new(0, 5), true, false)
                .unwrap();
        let mut aug = BTreeMap::new();
        aug.insert(Label::Word(vec![]), Rational::one());
        let alg = DGAlgebra {
            complex,
            unit: Label::Word(vec![]),
            product: ProductRule::FreeWords,
            augmentation: Some(aug),
        };
        assert!(validate_algebra(&alg, None).passed());
    }

    #[test]
    fn trivial_module_validates() {
        let a = Arc::new(polynomial_algebra(6));
        let m = AlgebraModule::trivial(a, Label::atom("q")).unwrap();
        assert!(validate_module(&m, None).passed());
    }

    #[test]
    fn rationals_survive_scaling() {
        assert_eq!(qr(1, 2) + qr(1, 2), qi(1));
        let m = SparseMatrix::from_int_rows(&[&[2]]);
        assert_eq!(m.scale(&qr(1, 2)), SparseMatrix::identity(1));
    }
}
