//! Dg Lie algebras over ℚ: free graded Lie algebras on a super-Lyndon word
//! basis, universal enveloping algebras with PBW bases, Chevalley–Eilenberg
//! coalgebras and the primitive-Lie functor on cobar constructions.
//!
//! The Lie basis is canonical: graded Lyndon words in the generator order,
//! plus the square [w, w] for each Lyndon word w of odd degree. Every bracket
//! is straightened to this basis by expanding in the tensor algebra and
//! solving against the basis expansions, which doubles as a linear-algebra
//! proof that the element really is a Lie element.

use crate::algebra::{DGAlgebra, ProductRule, ValidationReport};
use crate::coalgebra::{CoproductTable, DGCoalgebra};
use crate::error::{Error, Result};
use crate::graded::{sign, ChainComplex, DegreeWindow, GradedVectorSpace, LinComb};
use crate::label::Label;
use crate::linalg::{Rational, SparseMatrix, SparseVec, SpanSolver};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

/// A formal Lie expression over named generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LieExpr {
    Gen(String),
    Br(Box<LieExpr>, Box<LieExpr>),
}

impl LieExpr {
    pub fn gen(name: impl Into<String>) -> LieExpr {
        LieExpr::Gen(name.into())
    }

    pub fn br(a: LieExpr, b: LieExpr) -> LieExpr {
        LieExpr::Br(Box::new(a), Box::new(b))
    }
}

/// Presentation of a free graded Lie algebra: generators of degree ≥ 1 and a
/// differential given on generators as combinations of Lie words.
#[derive(Clone, Debug, Default)]
pub struct FreeLiePresentation {
    pub generators: Vec<(String, i64)>,
    pub differential: BTreeMap<String, Vec<(Rational, LieExpr)>>,
}

impl FreeLiePresentation {
    pub fn new(generators: Vec<(&str, i64)>) -> Self {
        FreeLiePresentation {
            generators: generators.into_iter().map(|(n, d)| (n.to_string(), d)).collect(),
            differential: BTreeMap::new(),
        }
    }

    pub fn with_differential(mut self, gen: &str, terms: Vec<(Rational, LieExpr)>) -> Self {
        self.differential.insert(gen.to_string(), terms);
        self
    }
}

/// A dg Lie algebra with explicit basis and bracket structure constants.
#[derive(Clone, Debug)]
pub struct DGLieAlgebra {
    pub complex: ChainComplex,
    /// bracket table on label pairs with in-window output; missing = zero
    pub bracket: BTreeMap<(Label, Label), LinComb>,
    pub reduced: Option<bool>,
}

impl DGLieAlgebra {
    pub fn bracket_of(&self, a: &Label, b: &Label) -> LinComb {
        self.bracket
            .get(&(a.clone(), b.clone()))
            .cloned()
            .unwrap_or_else(LinComb::zero)
    }

    pub fn degree_of(&self, l: &Label) -> Option<i64> {
        self.complex.space.degree_of(l)
    }

    /// Lie basis in the canonical global order (degree, then position).
    pub fn ordered_basis(&self) -> Vec<(i64, Label)> {
        let mut out = Vec::new();
        for n in self.complex.window.iter() {
            for l in self.complex.space.labels(n) {
                out.push((n, l.clone()));
            }
        }
        out
    }
}

/// Validates graded antisymmetry, the graded Jacobi identity, the derivation
/// property of d, and the reduced flag, on all in-window basis tuples whose
/// brackets stay inside the window.
pub fn validate_lie(l: &DGLieAlgebra) -> ValidationReport {
    let mut report = ValidationReport::default();
    let hi = l.complex.window.hi;
    let basis = l.ordered_basis();
    for (dx, x) in &basis {
        for (dy, y) in &basis {
            if dx + dy > hi {
                continue;
            }
            // antisymmetry
            let mut anti = l.bracket_of(x, y);
            anti.add(&l.bracket_of(y, x).scale(&sign(dx * dy)));
            if !anti.is_zero() {
                report.note(format!("antisymmetry fails on ({x}, {y})"));
            }
            // derivation: d[x,y] = [dx,y] + (−1)^{|x|}[x,dy]
            if dx + dy - 1 >= l.complex.window.lo {
                let lhs = l
                    .complex
                    .d_comb(&l.bracket_of(x, y))
                    .unwrap_or_else(|_| LinComb::zero());
                let mut rhs = LinComb::zero();
                let dx_comb = l.complex.d_comb(&LinComb::single(x.clone())).unwrap();
                for (t, c) in dx_comb.iter() {
                    rhs.add(&l.bracket_of(t, y).scale(c));
                }
                let dy_comb = l.complex.d_comb(&LinComb::single(y.clone())).unwrap();
                for (t, c) in dy_comb.iter() {
                    rhs.add(&l.bracket_of(x, t).scale(&(c * sign(*dx))));
                }
                if lhs != rhs {
                    report.note(format!("d is not a bracket derivation on ({x}, {y})"));
                }
            }
        }
    }
    for (dx, x) in &basis {
        for (dy, y) in &basis {
            for (dz, z) in &basis {
                if dx + dy + dz > hi {
                    continue;
                }
                // graded Jacobi:
                // (−1)^{|x||z|}[x,[y,z]] + (−1)^{|y||x|}[y,[z,x]] + (−1)^{|z||y|}[z,[x,y]] = 0
                let mut total = LinComb::zero();
                let mut add_part = |a: &Label, da: i64, b: &Label, c: &Label, dc: i64| {
                    let inner = l.bracket_of(b, c);
                    let mut outer = LinComb::zero();
                    for (t, coeff) in inner.iter() {
                        outer.add(&l.bracket_of(a, t).scale(coeff));
                    }
                    total.add(&outer.scale(&sign(da * dc)));
                };
                add_part(x, *dx, y, z, *dz);
                add_part(y, *dy, z, x, *dx);
                add_part(z, *dz, x, y, *dy);
                if !total.is_zero() {
                    report.note(format!("Jacobi fails on ({x}, {y}, {z})"));
                }
            }
        }
    }
    if l.reduced == Some(true) {
        if !(l.complex.zero_below && l.complex.window.lo >= 1)
            && (0..=0).any(|n| l.complex.dim(n) > 0)
        {
            report.note("reduced flag fails: degree 0 is nonzero".into());
        }
    }
    report
}

/// A homogeneous element of the tensor algebra on indexed generators.
type TensorPoly = BTreeMap<Vec<usize>, Rational>;

fn poly_add(lhs: &mut TensorPoly, word: Vec<usize>, c: Rational) {
    if c.is_zero() {
        return;
    }
    let e = lhs.entry(word).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        let key = lhs.iter().find(|(_, v)| v.is_zero()).map(|(k, _)| k.clone()).unwrap();
        lhs.remove(&key);
    }
}

fn poly_concat(a: &TensorPoly, b: &TensorPoly) -> TensorPoly {
    let mut out = TensorPoly::new();
    for (u, x) in a {
        for (v, y) in b {
            let mut w = u.clone();
            w.extend_from_slice(v);
            poly_add(&mut out, w, x * y);
        }
    }
    out
}

/// Internal data of a free graded Lie algebra on ordered generators.
struct FreeLieData {
    degrees: Vec<i64>,
    /// basis element: (label, expansion in the tensor algebra)
    basis: BTreeMap<i64, Vec<(Label, TensorPoly)>>,
    /// per-degree word index and solver over the basis expansions
    solvers: BTreeMap<i64, (BTreeMap<Vec<usize>, usize>, SpanSolver, Vec<Label>)>,
}

impl FreeLieData {
    fn word_degree(&self, w: &[usize]) -> i64 {
        w.iter().map(|&i| self.degrees[i]).sum()
    }

    /// Straightens a homogeneous tensor-algebra element of degree `n` into
    /// the Lie basis; errors if it is not a Lie element.
    fn straighten(&self, n: i64, poly: &TensorPoly) -> Result<LinComb> {
        if poly.is_empty() {
            return Ok(LinComb::zero());
        }
        let Some((index, solver, labels)) = self.solvers.get(&n) else {
            return Err(Error::StraighteningFailed(n));
        };
        let mut target = SparseVec::zero(index.len());
        for (w, c) in poly {
            let Some(&i) = index.get(w) else {
                return Err(Error::StraighteningFailed(n));
            };
            target.add_to(i, c.clone());
        }
        let coords = solver.solve(&target).ok_or(Error::StraighteningFailed(n))?;
        let mut out = LinComb::zero();
        for (j, c) in coords.iter() {
            out.add_term(labels[j].clone(), c.clone());
        }
        Ok(out)
    }
}

fn is_lyndon(w: &[usize]) -> bool {
    if w.is_empty() {
        return false;
    }
    for k in 1..w.len() {
        if w[k..] <= w[..] {
            return false;
        }
    }
    true
}

/// Standard factorization of a Lyndon word of length ≥ 2: w = uv with v the
/// longest proper Lyndon suffix.
fn standard_factorization(w: &[usize]) -> (Vec<usize>, Vec<usize>) {
    for split in 1..w.len() {
        if is_lyndon(&w[split..]) {
            return (w[..split].to_vec(), w[split..].to_vec());
        }
    }
    unreachable!("every Lyndon word of length ≥ 2 has a proper Lyndon suffix");
}

fn lyndon_bracketing(w: &[usize], names: &[Label]) -> Label {
    if w.len() == 1 {
        return names[w[0]].clone();
    }
    let (u, v) = standard_factorization(w);
    Label::bracket(lyndon_bracketing(&u, names), lyndon_bracketing(&v, names))
}

/// Expansion of the bracketing of a Lyndon word in the tensor algebra.
fn lyndon_expansion(w: &[usize], degrees: &[i64]) -> TensorPoly {
    if w.len() == 1 {
        return TensorPoly::from([(w.to_vec(), Rational::one())]);
    }
    let (u, v) = standard_factorization(w);
    let pu = lyndon_expansion(&u, degrees);
    let pv = lyndon_expansion(&v, degrees);
    bracket_poly(&pu, &pv, degrees)
}

fn poly_degree(p: &TensorPoly, degrees: &[i64]) -> i64 {
    p.keys()
        .next()
        .map(|w| w.iter().map(|&i| degrees[i]).sum())
        .unwrap_or(0)
}

fn bracket_poly(a: &TensorPoly, b: &TensorPoly, degrees: &[i64]) -> TensorPoly {
    let (da, db) = (poly_degree(a, degrees), poly_degree(b, degrees));
    let mut out = poly_concat(a, b);
    let rev = poly_concat(b, a);
    let s = sign(da * db + 1);
    for (w, c) in rev {
        poly_add(&mut out, w, c * &s);
    }
    out
}

fn enumerate_words(degrees: &[i64], max_deg: i64) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<usize>, i64)> = vec![(Vec::new(), 0)];
    while let Some((w, d)) = stack.pop() {
        if !w.is_empty() {
            out.push(w.clone());
        }
        for (i, &gd) in degrees.iter().enumerate() {
            if d + gd <= max_deg {
                let mut w2 = w.clone();
                w2.push(i);
                stack.push((w2, d + gd));
            }
        }
    }
    out.sort();
    out
}

fn build_free_lie_data(p: &FreeLiePresentation, hi: i64) -> Result<FreeLieData> {
    for (name, d) in &p.generators {
        if *d < 1 {
            return Err(Error::DegreeZeroGenerator(name.clone()));
        }
    }
    let degrees: Vec<i64> = p.generators.iter().map(|(_, d)| *d).collect();
    let names: Vec<Label> = p.generators.iter().map(|(n, _)| Label::atom(n.clone())).collect();
    let words = enumerate_words(&degrees, hi);
    let mut lyndon: Vec<Vec<usize>> = words.into_iter().filter(|w| is_lyndon(w)).collect();
    lyndon.sort();

    let mut data = FreeLieData { degrees: degrees.clone(), basis: BTreeMap::new(), solvers: BTreeMap::new() };
    // Lyndon words, then squares of odd-degree Lyndon words
    let mut raw: Vec<(i64, Label, TensorPoly)> = Vec::new();
    for w in &lyndon {
        let deg = data.word_degree(w);
        let label = lyndon_bracketing(w, &names);
        let exp = lyndon_expansion(w, &degrees);
        raw.push((deg, label, exp));
        if deg % 2 != 0 && 2 * deg <= hi {
            let sq_label = Label::bracket(lyndon_bracketing(w, &names), lyndon_bracketing(w, &names));
            let sq_exp = bracket_poly(&lyndon_expansion(w, &degrees), &lyndon_expansion(w, &degrees), &degrees);
            raw.push((2 * deg, sq_label, sq_exp));
        }
    }
    raw.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    for (deg, label, exp) in raw {
        data.basis.entry(deg).or_default().push((label, exp));
    }
    // per-degree solvers
    let all_words = enumerate_words(&degrees, hi);
    let mut words_by_degree: BTreeMap<i64, Vec<Vec<usize>>> = BTreeMap::new();
    for w in all_words {
        let d = data.word_degree(&w);
        words_by_degree.entry(d).or_default().push(w);
    }
    for (&deg, elems) in &data.basis {
        let words = words_by_degree.get(&deg).cloned().unwrap_or_default();
        let index: BTreeMap<Vec<usize>, usize> =
            words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let mut solver = SpanSolver::new(index.len());
        let mut labels = Vec::new();
        for (label, exp) in elems {
            let mut v = SparseVec::zero(index.len());
            for (w, c) in exp {
                v.add_to(index[w], c.clone());
            }
            if !solver.add_column(v) {
                return Err(Error::InvariantViolation(format!(
                    "super-Lyndon expansions dependent at degree {deg} ({label})"
                )));
            }
            labels.push(label.clone());
        }
        data.solvers.insert(deg, (index, solver, labels));
    }
    Ok(data)
}

fn expr_poly(e: &LieExpr, p: &FreeLiePresentation, degrees: &[i64]) -> Result<TensorPoly> {
    match e {
        LieExpr::Gen(name) => {
            let i = p
                .generators
                .iter()
                .position(|(n, _)| n == name)
                .ok_or_else(|| Error::Parse(format!("unknown generator {name}")))?;
            Ok(TensorPoly::from([(vec![i], Rational::one())]))
        }
        LieExpr::Br(a, b) => {
            let pa = expr_poly(a, p, degrees)?;
            let pb = expr_poly(b, p, degrees)?;
            Ok(bracket_poly(&pa, &pb, degrees))
        }
    }
}

/// The free graded Lie algebra on a presentation, with basis the graded
/// Lyndon words (plus odd squares) inside the window, brackets straightened
/// to the basis, and the differential extended as a derivation.
pub fn free_graded_lie(p: &FreeLiePresentation, w: DegreeWindow) -> Result<DGLieAlgebra> {
    let hi = w.hi;
    let data = build_free_lie_data(p, hi)?;
    let degrees = data.degrees.clone();

    // differential of each generator as a tensor polynomial
    let mut d_gen: Vec<TensorPoly> = Vec::new();
    for (name, gdeg) in &p.generators {
        let mut poly = TensorPoly::new();
        if let Some(terms) = p.differential.get(name) {
            for (c, e) in terms {
                let ep = expr_poly(e, p, &degrees)?;
                if !ep.is_empty() && poly_degree(&ep, &degrees) != gdeg - 1 {
                    return Err(Error::InvariantViolation(format!(
                        "differential of {name} is not of degree {}",
                        gdeg - 1
                    )));
                }
                for (word, x) in ep {
                    poly_add(&mut poly, word, x * c);
                }
            }
        }
        d_gen.push(poly);
    }
    // derivation extension on tensor words
    let d_poly = |poly: &TensorPoly| -> TensorPoly {
        let mut out = TensorPoly::new();
        for (word, c) in poly {
            for (i, &g) in word.iter().enumerate() {
                let prefix = &word[..i];
                let suffix = &word[i + 1..];
                let prefix_deg: i64 = prefix.iter().map(|&j| degrees[j]).sum();
                let s = sign(prefix_deg);
                for (mid, x) in &d_gen[g] {
                    let mut new_word = prefix.to_vec();
                    new_word.extend_from_slice(mid);
                    new_word.extend_from_slice(suffix);
                    poly_add(&mut out, new_word, c * x * &s);
                }
            }
        }
        out
    };

    let mut basis_map: BTreeMap<i64, Vec<Label>> = BTreeMap::new();
    for (&deg, elems) in &data.basis {
        basis_map.insert(deg, elems.iter().map(|(l, _)| l.clone()).collect());
    }
    let space = GradedVectorSpace::new(basis_map)?;
    let mut diff: BTreeMap<i64, SparseMatrix> = BTreeMap::new();
    for (&deg, elems) in &data.basis {
        let rows = space.dim(deg - 1);
        let mut m = SparseMatrix::zero(rows, elems.len());
        for (col, (_, exp)) in elems.iter().enumerate() {
            let dexp = d_poly(exp);
            if dexp.is_empty() {
                continue;
            }
            let comb = data.straighten(deg - 1, &dexp)?;
            let v = space.coords(deg - 1, &comb)?;
            for (i, x) in v.iter() {
                m.set(i, col, x.clone());
            }
        }
        diff.insert(deg, m);
    }
    let complex = ChainComplex::new(space, diff, DegreeWindow::new(1.min(hi), hi), true, false)?;
    // bracket table on pairs within the window
    let mut bracket = BTreeMap::new();
    for (&da, ea) in &data.basis {
        for (&db, eb) in &data.basis {
            if da + db > hi {
                continue;
            }
            for (la, pa) in ea {
                for (lb, pb) in eb {
                    let br = bracket_poly(pa, pb, &degrees);
                    let comb = data.straighten(da + db, &br)?;
                    if !comb.is_zero() {
                        bracket.insert((la.clone(), lb.clone()), comb);
                    }
                }
            }
        }
    }
    Ok(DGLieAlgebra { complex, bracket, reduced: Some(true) })
}

/// Direct sum of dg Lie algebras: union basis, componentwise brackets,
/// vanishing cross brackets. Labels are tagged by summand position when
/// there is more than one summand.
pub fn direct_sum_lie(parts: &[DGLieAlgebra]) -> Result<DGLieAlgebra> {
    if parts.len() == 1 {
        return Ok(parts[0].clone());
    }
    let tag = |i: usize, l: &Label| -> Label {
        Label::pair(Label::atom(format!("i{i}")), l.clone())
    };
    let mut basis: BTreeMap<i64, Vec<Label>> = BTreeMap::new();
    let mut lo = i64::MAX;
    let mut hi = i64::MAX;
    for (i, part) in parts.iter().enumerate() {
        lo = lo.min(part.complex.window.lo);
        hi = hi.min(part.complex.window.hi);
        for n in part.complex.window.iter() {
            for l in part.complex.space.labels(n) {
                basis.entry(n).or_default().push(tag(i, l));
            }
        }
    }
    if parts.is_empty() {
        return Ok(DGLieAlgebra {
            complex: ChainComplex::new(
                GradedVectorSpace::empty(),
                BTreeMap::new(),
                DegreeWindow::new(1, 1),
                true,
                true,
            )?,
            bracket: BTreeMap::new(),
            reduced: Some(true),
        });
    }
    basis.retain(|&n, _| n <= hi);
    let space = GradedVectorSpace::new(basis)?;
    let window = DegreeWindow::new(parts.iter().map(|p| p.complex.window.lo).min().unwrap(), hi);
    let mut diff: BTreeMap<i64, SparseMatrix> = BTreeMap::new();
    for n in window.iter() {
        let mut m = SparseMatrix::zero(space.dim(n - 1), space.dim(n));
        for (col, lab) in space.labels(n).iter().enumerate() {
            let Label::Pair(tag_lab, inner) = lab else { unreachable!() };
            let Label::Atom(tag_name) = &**tag_lab else { unreachable!() };
            let i: usize = tag_name[1..].parse().unwrap();
            let d = parts[i].complex.d_comb(&LinComb::single((**inner).clone())).unwrap();
            for (l2, c) in d.iter() {
                let tagged = tag(i, l2);
                if let Some((_, row)) = space.position(&tagged) {
                    m.set(row, col, c.clone());
                }
            }
        }
        if !m.is_zero() {
            diff.insert(n, m);
        }
    }
    let complex = ChainComplex::new(space, diff, window, true, parts.iter().all(|p| p.complex.zero_above))?;
    let mut bracket = BTreeMap::new();
    for (i, part) in parts.iter().enumerate() {
        for ((a, b), comb) in &part.bracket {
            let mut tagged = LinComb::zero();
            for (l, c) in comb.iter() {
                tagged.add_term(tag(i, l), c.clone());
            }
            if complex.space.degree_of(&tag(i, a)).is_some()
                && complex.space.degree_of(&tag(i, b)).is_some()
                && !tagged.is_zero()
            {
                bracket.insert((tag(i, a), tag(i, b)), tagged);
            }
        }
    }
    Ok(DGLieAlgebra { complex, bracket, reduced: Some(true) })
}

/// PBW straightening context for a universal enveloping algebra.
struct PbwContext<'a> {
    lie: &'a DGLieAlgebra,
    /// global order of Lie basis labels: (degree, position)
    order: HashMap<Label, usize>,
    basis: Vec<(i64, Label)>,
    hi: i64,
    memo: HashMap<Vec<usize>, LinComb>,
}

impl<'a> PbwContext<'a> {
    fn new(lie: &'a DGLieAlgebra, hi: i64) -> Self {
        let basis = lie.ordered_basis();
        let order = basis
            .iter()
            .enumerate()
            .map(|(i, (_, l))| (l.clone(), i))
            .collect();
        PbwContext { lie, order, basis, hi, memo: HashMap::new() }
    }

    fn degree(&self, i: usize) -> i64 {
        self.basis[i].0
    }

    fn word_label(&self, word: &[usize]) -> Label {
        Label::Word(word.iter().map(|&i| self.basis[i].1.clone()).collect())
    }

    fn word_degree(&self, word: &[usize]) -> i64 {
        word.iter().map(|&i| self.degree(i)).sum()
    }

    /// Rewrites an arbitrary product word into the PBW basis, truncating
    /// words that exceed the window.
    fn straighten(&mut self, word: &[usize]) -> LinComb {
        if self.word_degree(word) > self.hi {
            return LinComb::zero();
        }
        if let Some(hit) = self.memo.get(word) {
            return hit.clone();
        }
        // find the first descent or odd repeat
        let mut out = None;
        for k in 0..word.len().saturating_sub(1) {
            let (a, b) = (word[k], word[k + 1]);
            if a > b {
                // z_a z_b = (−1)^{|a||b|} z_b z_a + [z_a, z_b]
                let s = sign(self.degree(a) * self.degree(b));
                let mut swapped = word.to_vec();
                swapped.swap(k, k + 1);
                let mut acc = self.straighten(&swapped).scale(&s);
                let br = self
                    .lie
                    .bracket_of(&self.basis[a].1.clone(), &self.basis[b].1.clone());
                acc.add(&self.substitute(word, k, &br));
                out = Some(acc);
                break;
            }
            if a == b && self.degree(a) % 2 != 0 {
                // z z = ½ [z, z]
                let br = self.lie.bracket_of(&self.basis[a].1.clone(), &self.basis[a].1.clone());
                let acc = self
                    .substitute(word, k, &br)
                    .scale(&Rational::new(1.into(), 2.into()));
                out = Some(acc);
                break;
            }
        }
        let result = out.unwrap_or_else(|| LinComb::single(self.word_label(word)));
        self.memo.insert(word.to_vec(), result.clone());
        result
    }

    /// Replaces positions k, k+1 of `word` by each Lie basis term of `comb`
    /// and straightens the results.
    fn substitute(&mut self, word: &[usize], k: usize, comb: &LinComb) -> LinComb {
        let mut acc = LinComb::zero();
        for (l, c) in comb.clone().iter() {
            let Some(&i) = self.order.get(l) else { continue };
            let mut w = word[..k].to_vec();
            w.push(i);
            w.extend_from_slice(&word[k + 2..]);
            acc.add(&self.straighten(&w).scale(c));
        }
        acc
    }

    /// PBW monomials (as index words) of degree ≤ hi.
    fn monomials(&self) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        let mut frontier: Vec<(Vec<usize>, i64)> = vec![(vec![], 0)];
        while let Some((word, deg)) = frontier.pop() {
            let start = word.last().map_or(0, |&l| l);
            for i in start..self.basis.len() {
                if *word.last().unwrap_or(&usize::MAX) == i && self.degree(i) % 2 != 0 {
                    continue;
                }
                let d2 = deg + self.degree(i);
                if d2 > self.hi {
                    continue;
                }
                let mut w2 = word.clone();
                w2.push(i);
                out.push(w2.clone());
                frontier.push((w2, d2));
            }
        }
        out.sort_by_key(|w| (self.word_degree(w), self.word_label(w)));
        out
    }
}

/// Universal enveloping algebra on the PBW monomial basis (ordered products
/// of Lie basis elements, exterior on odd, polynomial on even), with product
/// by straightening through the bracket and the differential extended as a
/// derivation.
pub fn uea(l: &DGLieAlgebra, w: DegreeWindow) -> Result<DGAlgebra> {
    let hi = w.hi;
    let mut ctx = PbwContext::new(l, hi);
    let monomials = ctx.monomials();
    let mut basis: BTreeMap<i64, Vec<Label>> = BTreeMap::new();
    for m in &monomials {
        basis
            .entry(ctx.word_degree(m))
            .or_default()
            .push(ctx.word_label(m));
    }
    let space = GradedVectorSpace::new(basis)?;
    // derivation differential
    let mut diff: BTreeMap<i64, SparseMatrix> = BTreeMap::new();
    let mut by_degree: BTreeMap<i64, Vec<&Vec<usize>>> = BTreeMap::new();
    for m in &monomials {
        by_degree.entry(ctx.word_degree(m)).or_default().push(m);
    }
    for (&deg, words) in &by_degree {
        if deg == 0 {
            continue;
        }
        let mut mat = SparseMatrix::zero(space.dim(deg - 1), words.len());
        for (col, word) in words.iter().enumerate() {
            let mut image = LinComb::zero();
            for (k, &zi) in word.iter().enumerate() {
                let prefix_deg: i64 = word[..k].iter().map(|&j| ctx.degree(j)).sum();
                let s = sign(prefix_deg);
                let dz = l
                    .complex
                    .d_comb(&LinComb::single(ctx.basis[zi].1.clone()))
                    .unwrap();
                for (t, c) in dz.iter() {
                    let Some(&ti) = ctx.order.get(t) else { continue };
                    let mut w2 = word[..k].to_vec();
                    w2.push(ti);
                    w2.extend_from_slice(&word[k + 1..]);
                    image.add(&ctx.straighten(&w2).scale(&(c * &s)));
                }
            }
            let v = space.coords(deg - 1, &image)?;
            for (i, x) in v.iter() {
                mat.set(i, col, x.clone());
            }
        }
        diff.insert(deg, mat);
    }
    let complex = ChainComplex::new(space, diff, DegreeWindow::new(0, hi), true, false)?;
    // product table on non-unit pairs within the window
    let mut table: BTreeMap<(Label, Label), LinComb> = BTreeMap::new();
    for (da, a) in by_degree.iter().flat_map(|(&d, ws)| ws.iter().map(move |w| (d, *w))) {
        if da == 0 {
            continue;
        }
        for (db, b) in by_degree.iter().flat_map(|(&d, ws)| ws.iter().map(move |w| (d, *w))) {
            if db == 0 || da + db > hi {
                continue;
            }
            let mut concat = a.clone();
            concat.extend_from_slice(b);
            let prod = ctx.straighten(&concat);
            if !prod.is_zero() {
                table.insert((ctx.word_label(a), ctx.word_label(b)), prod);
            }
        }
    }
    let unit = Label::Word(vec![]);
    let mut aug = BTreeMap::new();
    aug.insert(unit.clone(), Rational::one());
    Ok(DGAlgebra { complex, unit, product: ProductRule::Table(table), augmentation: Some(aug) })
}

/// Expected dimension of the PBW basis per degree from the graded symmetric
/// algebra on the Lie basis (polynomial on even, exterior on odd).
pub fn pbw_expected_dims(l: &DGLieAlgebra, hi: i64) -> Vec<usize> {
    let mut coeffs = vec![0usize; (hi + 1) as usize];
    coeffs[0] = 1;
    for (deg, _) in l.ordered_basis() {
        if deg > hi {
            continue;
        }
        let d = deg as usize;
        if deg % 2 != 0 {
            // multiply by (1 + q^d)
            let mut next = coeffs.clone();
            for i in 0..coeffs.len() {
                if i + d < coeffs.len() {
                    next[i + d] += coeffs[i];
                }
            }
            coeffs = next;
        } else {
            // multiply by 1/(1 − q^d)
            for i in d..coeffs.len() {
                coeffs[i] += coeffs[i - d];
            }
        }
    }
    coeffs
}

/// Canonicalizes a list of CE letters (labels with degrees) into the sorted
/// symmetric word, with the Koszul sign of the sorting permutation. Returns
/// None when an odd letter repeats.
fn canonical_sym(mut letters: Vec<(Label, i64)>) -> Option<(Label, Rational)> {
    let mut s = Rational::one();
    // insertion sort with Koszul signs
    for i in 1..letters.len() {
        let mut j = i;
        while j > 0 && letters[j - 1].0 > letters[j].0 {
            s *= sign(letters[j - 1].1 * letters[j].1);
            letters.swap(j - 1, j);
            j -= 1;
        }
    }
    for k in 1..letters.len() {
        if letters[k].0 == letters[k - 1].0 && letters[k].1 % 2 != 0 {
            return None;
        }
    }
    let mut packed: Vec<(Label, u32)> = Vec::new();
    for (l, _) in letters {
        match packed.last_mut() {
            Some((pl, e)) if *pl == l => *e += 1,
            _ => packed.push((l, 1)),
        }
    }
    Some((Label::Sym(packed), s))
}

fn sym_letters(l: &Label, letter_degrees: &HashMap<Label, i64>) -> Vec<(Label, i64)> {
    let Label::Sym(entries) = l else { unreachable!() };
    let mut out = Vec::new();
    for (lab, e) in entries {
        for _ in 0..*e {
            out.push((lab.clone(), letter_degrees[lab]));
        }
    }
    out
}

/// Chevalley–Eilenberg coalgebra of a reduced dg Lie algebra: the cofree
/// graded-cocommutative coalgebra on the suspension, with differential
/// d₁ + d₂ where d₁ extends s(dz) ↦ −s(dz) as a coderivation and d₂
/// contracts a pair of letters into the suspended bracket. The output is
/// 2-reduced.
pub fn chevalley_eilenberg(l: &DGLieAlgebra, w: DegreeWindow) -> Result<DGCoalgebra> {
    if l.reduced != Some(true) {
        return Err(Error::NotReduced("Chevalley-Eilenberg needs a reduced dg Lie algebra".into()));
    }
    let hi = w.hi;
    // letters s(z), |s z| = |z| + 1
    let mut letters: Vec<(Label, i64)> = Vec::new();
    let mut letter_degrees: HashMap<Label, i64> = HashMap::new();
    for (deg, z) in l.ordered_basis() {
        if deg + 1 <= hi {
            let s = Label::s(z.clone());
            letters.push((s.clone(), deg + 1));
            letter_degrees.insert(s, deg + 1);
        }
    }
    letters.sort();
    // enumerate symmetric words of degree ≤ hi
    let mut words: Vec<Vec<(Label, i64)>> = vec![vec![]];
    let mut frontier: Vec<(Vec<(Label, i64)>, i64, usize)> = vec![(vec![], 0, 0)];
    while let Some((word, deg, start)) = frontier.pop() {
        for (i, (lab, ld)) in letters.iter().enumerate().skip(start) {
            if deg + ld > hi {
                continue;
            }
            if *ld % 2 != 0 && word.last().map(|(l, _)| l) == Some(lab) {
                continue;
            }
            let mut w2 = word.clone();
            w2.push((lab.clone(), *ld));
            words.push(w2.clone());
            frontier.push((w2, deg + ld, i));
        }
    }
    let word_degree = |w: &[(Label, i64)]| -> i64 { w.iter().map(|(_, d)| d).sum() };
    let mut basis: BTreeMap<i64, Vec<Label>> = BTreeMap::new();
    for word in &words {
        let (label, s) = canonical_sym(word.clone()).expect("enumerated words are canonical");
        debug_assert!(s.is_one());
        basis.entry(word_degree(word)).or_default().push(label);
    }
    for labels in basis.values_mut() {
        labels.sort();
        labels.dedup();
    }
    let space = GradedVectorSpace::new(basis)?;

    let suspend_d = |z: &Label| -> LinComb {
        // d(s z) = −s(dz)
        let dz = l.complex.d_comb(&LinComb::single(z.clone())).unwrap();
        let mut out = LinComb::zero();
        for (t, c) in dz.iter() {
            out.add_term(Label::s(t.clone()), -c.clone());
        }
        out
    };

    let mut diff: BTreeMap<i64, SparseMatrix> = BTreeMap::new();
    for n in 1..=hi {
        let dim = space.dim(n);
        if dim == 0 && space.dim(n - 1) == 0 {
            continue;
        }
        let mut mat = SparseMatrix::zero(space.dim(n - 1), dim);
        for (col, word_label) in space.labels(n).iter().enumerate() {
            let tuple = sym_letters(word_label, &letter_degrees);
            let mut image = LinComb::zero();
            // d₁: replace one letter by the suspension of its differential
            for (i, (lab, ld)) in tuple.iter().enumerate() {
                let prefix: i64 = tuple[..i].iter().map(|(_, d)| d).sum();
                let outer = sign(prefix);
                let Label::S(z) = lab else { unreachable!() };
                let dletter = suspend_d(z);
                for (nl, c) in dletter.iter() {
                    let mut rest: Vec<(Label, i64)> = tuple.clone();
                    rest[i] = (nl.clone(), ld - 1);
                    if let Some((lab2, s2)) = canonical_sym(rest) {
                        image.add_term(lab2, c * &outer * s2);
                    }
                }
            }
            // d₂: contract a pair (i, j) into the suspended bracket
            for i in 0..tuple.len() {
                for j in (i + 1)..tuple.len() {
                    // Koszul sign for extracting letters i then j to the front
                    let mut extract = Rational::one();
                    let di = tuple[i].1;
                    let dj = tuple[j].1;
                    let before_i: i64 = tuple[..i].iter().map(|(_, d)| d).sum();
                    extract *= sign(di * before_i);
                    let before_j: i64 = tuple[..j]
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != i)
                        .map(|(_, (_, d))| d)
                        .sum();
                    extract *= sign(dj * before_j);
                    let Label::S(zi) = &tuple[i].0 else { unreachable!() };
                    let Label::S(zj) = &tuple[j].0 else { unreachable!() };
                    let br = l.bracket_of(zi, zj);
                    let local = sign(di);
                    for (t, c) in br.iter() {
                        let mut rest: Vec<(Label, i64)> =
                            vec![(Label::s(t.clone()), di + dj - 1)];
                        for (k, entry) in tuple.iter().enumerate() {
                            if k != i && k != j {
                                rest.push(entry.clone());
                            }
                        }
                        if let Some((lab2, s2)) = canonical_sym(rest) {
                            image.add_term(lab2, c * &extract * &local * s2);
                        }
                    }
                }
            }
            let v = space.coords(n - 1, &image)?;
            for (i, x) in v.iter() {
                mat.set(i, col, x.clone());
            }
        }
        diff.insert(n, mat);
    }
    let complex = ChainComplex::new(space, diff, DegreeWindow::new(0, hi), true, false)?;

    // deshuffle coproduct with binomial coefficients on repeated even letters
    let mut coproduct: CoproductTable = BTreeMap::new();
    let mut counit = BTreeMap::new();
    let empty = Label::Sym(vec![]);
    counit.insert(empty.clone(), Rational::one());
    for n in 0..=hi {
        for word_label in complex.space.labels(n) {
            let tuple = sym_letters(word_label, &letter_degrees);
            let mut table: BTreeMap<(Label, Label), Rational> = BTreeMap::new();
            for mask in 0..(1u32 << tuple.len()) {
                let mut left = Vec::new();
                let mut right = Vec::new();
                let mut koszul = Rational::one();
                let mut left_deg_after = 0i64;
                // scan right-to-left: a letter sent right must move past the
                // left letters that come after it
                for (k, entry) in tuple.iter().enumerate().rev() {
                    if mask & (1 << k) != 0 {
                        left.push(entry.clone());
                        left_deg_after += entry.1;
                    } else {
                        koszul *= sign(entry.1 * left_deg_after);
                        right.push(entry.clone());
                    }
                }
                left.reverse();
                right.reverse();
                let (ll, sl) = canonical_sym(left).expect("sub-multiset stays canonical");
                let (rl, sr) = canonical_sym(right).expect("sub-multiset stays canonical");
                debug_assert!(sl.is_one() && sr.is_one());
                let e = table.entry((ll, rl)).or_insert_with(Rational::zero);
                *e += koszul;
            }
            table.retain(|_, v| !v.is_zero());
            coproduct.insert(word_label.clone(), table);
        }
    }
    Ok(DGCoalgebra {
        complex,
        counit,
        coproduct,
        coaugmentation: empty,
        cocommutative: Some(true),
        two_reduced: Some(true),
    })
}

/// The primitive Lie algebra of the cobar construction of a 2-reduced
/// coalgebra: the free graded Lie algebra on the desuspended coaugmentation
/// coideal, with the differential of the generators straightened from the
/// cobar formula into the Lyndon basis.
pub fn cobar_lie(c: &DGCoalgebra, w: DegreeWindow) -> Result<DGLieAlgebra> {
    c.require_two_reduced()?;
    let hi = w.hi;
    // generators t[c] in degree |c| − 1, ordered by (degree, label)
    let mut gens: Vec<(Label, i64)> = Vec::new();
    for n in 2..=(hi + 1).min(c.complex.window.hi) {
        for l in c.coideal_labels(n) {
            gens.push((l.clone(), n - 1));
        }
    }
    let names: Vec<String> = (0..gens.len()).map(|i| format!("g{i}")).collect();
    let mut pres = FreeLiePresentation::new(
        names
            .iter()
            .zip(&gens)
            .map(|(n, (_, d))| (n.as_str(), *d))
            .collect(),
    );
    let gen_index: HashMap<Label, usize> = gens
        .iter()
        .enumerate()
        .map(|(i, (l, _))| (l.clone(), i))
        .collect();
    // d(t c) = −t(dc) − Σ (−1)^{|c'|} t c' ⊗ t c'', straightened to Lie words
    let head_data = build_free_lie_data(&pres, hi)?;
    let mut d_table: BTreeMap<String, Vec<(Rational, LieExpr)>> = BTreeMap::new();
    for (i, (cl, gdeg)) in gens.iter().enumerate() {
        let mut poly = TensorPoly::new();
        let dc = c.complex.d_comb(&LinComb::single(cl.clone()))?;
        for (t, x) in dc.iter() {
            if let Some(&j) = gen_index.get(t) {
                poly_add(&mut poly, vec![j], -x.clone());
            } else if *t != c.coaugmentation {
                return Err(Error::IncompleteDegree(gdeg - 1));
            }
        }
        for (a, b, x) in c.reduced_coproduct_of(cl) {
            let (Some(&ja), Some(&jb)) = (gen_index.get(&a), gen_index.get(&b)) else {
                continue;
            };
            let da = c.degree_of(&a).unwrap();
            poly_add(&mut poly, vec![ja, jb], -(x * sign(da)));
        }
        if poly.is_empty() {
            continue;
        }
        // straighten into the Lie basis, then rebuild as Lie expressions
        let comb = head_data.straighten(gdeg - 1, &poly)?;
        let mut terms = Vec::new();
        for (l, coeff) in comb.iter() {
            terms.push((coeff.clone(), label_to_expr(l)));
        }
        d_table.insert(names[i].clone(), terms);
    }
    pres.differential = d_table;
    let lie = free_graded_lie(&pres, DegreeWindow::new(1.min(hi), hi))?;
    // rename generator atoms back to t[c] labels
    let rename: HashMap<String, Label> = names
        .iter()
        .zip(&gens)
        .map(|(n, (l, _))| (n.clone(), Label::t(l.clone())))
        .collect();
    rename_lie(&lie, &rename)
}

fn label_to_expr(l: &Label) -> LieExpr {
    match l {
        Label::Atom(s) => LieExpr::gen(s.clone()),
        Label::Bracket(a, b) => LieExpr::br(label_to_expr(a), label_to_expr(b)),
        other => panic!("not a Lie basis label: {other}"),
    }
}

fn rename_label(l: &Label, rename: &HashMap<String, Label>) -> Label {
    match l {
        Label::Atom(s) => rename.get(s).cloned().unwrap_or_else(|| l.clone()),
        Label::Bracket(a, b) => {
            Label::bracket(rename_label(a, rename), rename_label(b, rename))
        }
        other => other.clone(),
    }
}

fn rename_lie(lie: &DGLieAlgebra, rename: &HashMap<String, Label>) -> Result<DGLieAlgebra> {
    let mut basis: BTreeMap<i64, Vec<Label>> = BTreeMap::new();
    for n in lie.complex.window.iter() {
        let labels: Vec<Label> = lie
            .complex
            .space
            .labels(n)
            .iter()
            .map(|l| rename_label(l, rename))
            .collect();
        if !labels.is_empty() {
            basis.insert(n, labels);
        }
    }
    let space = GradedVectorSpace::new(basis)?;
    let diff: BTreeMap<i64, SparseMatrix> = lie
        .complex
        .window
        .iter()
        .map(|n| (n, lie.complex.d(n)))
        .filter(|(_, m)| !m.is_zero())
        .collect();
    let complex = ChainComplex::new(
        space,
        diff,
        lie.complex.window,
        lie.complex.zero_below,
        lie.complex.zero_above,
    )?;
    let mut bracket = BTreeMap::new();
    for ((a, b), comb) in &lie.bracket {
        let mut renamed = LinComb::zero();
        for (l, c) in comb.iter() {
            renamed.add_term(rename_label(l, rename), c.clone());
        }
        bracket.insert((rename_label(a, rename), rename_label(b, rename)), renamed);
    }
    Ok(DGLieAlgebra { complex, bracket, reduced: lie.reduced })
}

/// The action of a Lie algebra on the enveloping algebra side, as a
/// convenience: a representation is just an `AlgebraModule` over `uea`.
pub type LieRepresentation = crate::algebra::AlgebraModule;

/// Wraps `uea` output in an `Arc` for module constructions.
pub fn uea_arc(l: &DGLieAlgebra, w: DegreeWindow) -> Result<Arc<DGAlgebra>> {
    Ok(Arc::new(uea(l, w)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::validate_coalgebra;
    use crate::graded::homology;
    use crate::linalg::qi;

    #[test]
    fn free_lie_on_even_generator_is_one_dimensional() {
        let p = FreeLiePresentation::new(vec![("x", 2)]);
        let l = free_graded_lie(&p, DegreeWindow::new(0, 8)).unwrap();
        assert_eq!(l.complex.space.total_dim(), 1);
        assert_eq!(l.complex.dim(2), 1);
        assert!(validate_lie(&l).passed());
    }

    #[test]
    fn free_lie_on_odd_generator_has_square() {
        let p = FreeLiePresentation::new(vec![("x", 1)]);
        let l = free_graded_lie(&p, DegreeWindow::new(0, 8)).unwrap();
        assert_eq!(l.complex.dim(1), 1);
        assert_eq!(l.complex.dim(2), 1); // [x, x]
        assert_eq!(l.complex.dim(3), 0); // [x, [x, x]] = 0 by Jacobi
        assert_eq!(l.complex.space.total_dim(), 2);
        let report = validate_lie(&l);
        assert!(report.passed(), "{:?}", report.violations);
    }

    #[test]
    fn free_lie_on_two_even_generators() {
        let p = FreeLiePresentation::new(vec![("x", 2), ("y", 2)]);
        let l = free_graded_lie(&p, DegreeWindow::new(0, 5)).unwrap();
        assert_eq!(l.complex.dim(2), 2);
        assert_eq!(l.complex.dim(4), 1); // [x, y]
        assert_eq!(l.complex.space.total_dim(), 3);
        // antisymmetry in even degrees kills [x,x] and [y,y]
        let x = Label::atom("x");
        assert!(l.bracket_of(&x, &x).is_zero());
        assert!(validate_lie(&l).passed());
    }

    #[test]
    fn degree_zero_generator_rejected() {
        let p = FreeLiePresentation::new(vec![("x", 0)]);
        let err = free_graded_lie(&p, DegreeWindow::new(0, 3)).unwrap_err();
        assert!(err.to_string().starts_with("degree-zero-generator"));
    }

    #[test]
    fn witt_dims_for_two_odd_generators() {
        let p = FreeLiePresentation::new(vec![("x", 1), ("y", 1)]);
        let l = free_graded_lie(&p, DegreeWindow::new(0, 6)).unwrap();
        // graded Witt dims for the free super Lie algebra on two odd
        // generators: PBW must reproduce the tensor algebra dims 2^n
        let expected = pbw_expected_dims(&l, 6);
        assert_eq!(expected[0], 1);
        for (n, e) in expected.iter().enumerate().skip(1) {
            assert_eq!(*e, 1 << n, "PBW count at degree {n}");
        }
        assert!(validate_lie(&l).passed());
    }

    #[test]
    fn uea_of_abelian_even_is_polynomial() {
        let p = FreeLiePresentation::new(vec![("x", 2)]);
        let l = free_graded_lie(&p, DegreeWindow::new(0, 8)).unwrap();
        let a = uea(&l, DegreeWindow::new(0, 8)).unwrap();
        for n in 0..=8i64 {
            assert_eq!(a.complex.dim(n), usize::from(n % 2 == 0), "degree {n}");
        }
        assert!(crate::algebra::validate_algebra(&a, None).passed());
    }

    #[test]
    fn uea_of_abelian_odd_is_exterior() {
        let p = FreeLiePresentation::new(vec![("x", 2)]);
        let mut l = free_graded_lie(&p, DegreeWindow::new(0, 6)).unwrap();
        // hand-build the abelian Lie algebra on one odd generator of degree 1
        let mut basis = BTreeMap::new();
        basis.insert(1, vec![Label::atom("e")]);
        let space = GradedVectorSpace::new(basis).unwrap();
        l.complex = ChainComplex::new(space, BTreeMap::new(), DegreeWindow::new(1, 6), true, true).unwrap();
        l.bracket = BTreeMap::from([(
            (Label::atom("e"), Label::atom("e")),
            LinComb::zero(),
        )]);
        let a = uea(&l, DegreeWindow::new(0, 6)).unwrap();
        assert_eq!(a.complex.dim(0), 1);
        assert_eq!(a.complex.dim(1), 1);
        for n in 2..=6i64 {
            assert_eq!(a.complex.dim(n), 0, "odd square must vanish at degree {n}");
        }
        assert!(crate::algebra::validate_algebra(&a, None).passed());
    }

    #[test]
    fn uea_of_free_odd_matches_tensor_algebra() {
        let p = FreeLiePresentation::new(vec![("x", 1)]);
        let l = free_graded_lie(&p, DegreeWindow::new(0, 8)).unwrap();
        let a = uea(&l, DegreeWindow::new(0, 8)).unwrap();
        for n in 0..=8i64 {
            assert_eq!(a.complex.dim(n), 1, "T(x) has dim 1 at degree {n}");
        }
        let expected = pbw_expected_dims(&l, 8);
        for n in 0..=8usize {
            assert_eq!(a.complex.dim(n as i64), expected[n]);
        }
        let report = crate::algebra::validate_algebra(&a, None);
        assert!(report.passed(), "{:?}", report.violations);
    }

    #[test]
    fn ce_of_abelian_even_generator_is_sphere() {
        // l = ℚx₂ abelian → CE has dims (1,0,0,1): homology of S³
        let p = FreeLiePresentation::new(vec![("x", 2)]);
        let l = free_graded_lie(&p, DegreeWindow::new(0, 9)).unwrap();
        let c = chevalley_eilenberg(&l, DegreeWindow::new(0, 9)).unwrap();
        let report = validate_coalgebra(&c);
        assert!(report.passed(), "{:?}", report.violations);
        let h = homology(&c.complex, DegreeWindow::new(0, 8)).unwrap();
        let dims: Vec<usize> = (0..=8).map(|n| h.dim(n)).collect();
        assert_eq!(dims, vec![1, 0, 0, 1, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn ce_of_free_odd_generator_is_s2() {
        // l = free Lie on x₁ → CE homology = H(S²) through degree 5
        let p = FreeLiePresentation::new(vec![("x", 1)]);
        let l = free_graded_lie(&p, DegreeWindow::new(0, 9)).unwrap();
        let c = chevalley_eilenberg(&l, DegreeWindow::new(0, 9)).unwrap();
        let report = validate_coalgebra(&c);
        assert!(report.passed(), "{:?}", report.violations);
        let h = homology(&c.complex, DegreeWindow::new(0, 8)).unwrap();
        let dims: Vec<usize> = (0..=8).map(|n| h.dim(n)).collect();
        assert_eq!(dims, vec![1, 0, 1, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn ce_of_zero_lie_algebra_is_scalar() {
        let l = direct_sum_lie(&[]).unwrap();
        let c = chevalley_eilenberg(&l, DegreeWindow::new(0, 4)).unwrap();
        assert_eq!(c.complex.space.total_dim(), 1);
        assert!(validate_coalgebra(&c).passed());
    }

    #[test]
    fn cobar_lie_of_sphere_coalgebras() {
        use crate::coalgebra::tests::sphere_homology_coalgebra;
        // H(S³): primitive generator in degree 3 → abelian ℚx₂
        let c = sphere_homology_coalgebra(3);
        let l = cobar_lie(&c, DegreeWindow::new(0, 8)).unwrap();
        assert_eq!(l.complex.dim(2), 1);
        assert_eq!(l.complex.space.total_dim(), 1);
        assert!(validate_lie(&l).passed());

        // H(S²): free Lie on x₁: basis {x, [x,x]}
        let c = sphere_homology_coalgebra(2);
        let l = cobar_lie(&c, DegreeWindow::new(0, 8)).unwrap();
        assert_eq!(l.complex.dim(1), 1);
        assert_eq!(l.complex.dim(2), 1);
        assert_eq!(l.complex.space.total_dim(), 2);
        assert!(validate_lie(&l).passed());
    }

    #[test]
    fn direct_sum_brackets_stay_componentwise() {
        let p = FreeLiePresentation::new(vec![("x", 1)]);
        let l1 = free_graded_lie(&p, DegreeWindow::new(0, 4)).unwrap();
        let sum = direct_sum_lie(&[l1.clone(), l1]).unwrap();
        assert_eq!(sum.complex.dim(1), 2);
        assert_eq!(sum.complex.dim(2), 2);
        assert!(validate_lie(&sum).passed());
        let _ = qi(1);
    }
}
