//! Graded vector spaces, chain complexes and chain maps over the rationals,
//! together with the windowed operations: homology, tensor products, shifts,
//! connective covers and hom complexes.
//!
//! Everything is finite type inside an explicit degree window. A complex
//! tracks whether degrees below/above its window are genuinely zero; all
//! operations compute which output degrees are complete and refuse to hand
//! out data outside that range.

use crate::error::{Error, Result};
use crate::label::Label;
use crate::linalg::{Rational, SparseMatrix, SparseVec, Span};
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

/// Inclusive bounds on homological degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeWindow {
    pub lo: i64,
    pub hi: i64,
}

impl DegreeWindow {
    pub fn new(lo: i64, hi: i64) -> Self {
        assert!(lo <= hi, "degree window requires lo <= hi");
        DegreeWindow { lo, hi }
    }

    pub fn contains(&self, n: i64) -> bool {
        self.lo <= n && n <= self.hi
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    pub fn width(&self) -> i64 {
        self.hi - self.lo
    }
}

impl fmt::Display for DegreeWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// A formal rational linear combination of labels.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinComb(pub BTreeMap<Label, Rational>);

impl LinComb {
    pub fn zero() -> Self {
        LinComb(BTreeMap::new())
    }

    pub fn single(l: Label) -> Self {
        let mut m = BTreeMap::new();
        m.insert(l, Rational::one());
        LinComb(m)
    }

    pub fn term(l: Label, c: Rational) -> Self {
        let mut out = LinComb::zero();
        out.add_term(l, c);
        out
    }

    pub fn add_term(&mut self, l: Label, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.0.entry(l).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            let key = self
                .0
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .unwrap();
            self.0.remove(&key);
        }
    }

    pub fn add(&mut self, other: &LinComb) {
        for (l, c) in &other.0 {
            self.add_term(l.clone(), c.clone());
        }
    }

    pub fn scale(&self, c: &Rational) -> LinComb {
        if c.is_zero() {
            return LinComb::zero();
        }
        LinComb(self.0.iter().map(|(l, x)| (l.clone(), x * c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Label, &Rational)> {
        self.0.iter()
    }
}

impl fmt::Display for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, (l, c)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{l}")?;
            } else {
                write!(f, "{} {l}", crate::linalg::format_rational(c))?;
            }
        }
        Ok(())
    }
}

/// Finite-type graded vector space with a named, ordered basis per degree.
#[derive(Clone, Debug, Default)]
pub struct GradedVectorSpace {
    basis: BTreeMap<i64, Vec<Label>>,
    index: HashMap<Label, (i64, usize)>,
}

impl GradedVectorSpace {
    pub fn new(basis: BTreeMap<i64, Vec<Label>>) -> Result<Self> {
        let mut index = HashMap::new();
        for (&deg, labels) in &basis {
            for (i, l) in labels.iter().enumerate() {
                if index.insert(l.clone(), (deg, i)).is_some() {
                    return Err(Error::InvariantViolation(format!(
                        "duplicate basis label {l}"
                    )));
                }
            }
        }
        Ok(GradedVectorSpace { basis, index })
    }

    pub fn empty() -> Self {
        GradedVectorSpace::default()
    }

    pub fn dim(&self, n: i64) -> usize {
        self.basis.get(&n).map_or(0, |v| v.len())
    }

    pub fn labels(&self, n: i64) -> &[Label] {
        self.basis.get(&n).map_or(&[], |v| v.as_slice())
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.basis.keys().copied()
    }

    pub fn degree_of(&self, l: &Label) -> Option<i64> {
        self.index.get(l).map(|(d, _)| *d)
    }

    pub fn position(&self, l: &Label) -> Option<(i64, usize)> {
        self.index.get(l).copied()
    }

    pub fn total_dim(&self) -> usize {
        self.basis.values().map(|v| v.len()).sum()
    }

    /// Converts a combination into coordinates at a fixed degree. Errors if a
    /// label is unknown or off-degree.
    pub fn coords(&self, n: i64, comb: &LinComb) -> Result<SparseVec> {
        let mut v = SparseVec::zero(self.dim(n));
        for (l, c) in comb.iter() {
            match self.position(l) {
                Some((d, i)) if d == n => v.add_to(i, c.clone()),
                Some((d, _)) => {
                    return Err(Error::ShapeMismatch(format!(
                        "label {l} has degree {d}, expected {n}"
                    )))
                }
                None => {
                    return Err(Error::ShapeMismatch(format!("unknown label {l}")));
                }
            }
        }
        Ok(v)
    }

    /// Renders a coordinate vector at degree `n` back into a combination.
    pub fn comb(&self, n: i64, v: &SparseVec) -> LinComb {
        let labels = self.labels(n);
        let mut out = LinComb::zero();
        for (i, c) in v.iter() {
            out.add_term(labels[i].clone(), c.clone());
        }
        out
    }
}

/// A chain complex: graded space plus degree −1 differential, valid within a
/// window. `zero_below` / `zero_above` record whether degrees outside the
/// window are genuinely zero (as opposed to merely not computed).
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub space: GradedVectorSpace,
    /// d_n maps degree n to degree n−1; keyed by n
    diff: BTreeMap<i64, SparseMatrix>,
    pub window: DegreeWindow,
    pub zero_below: bool,
    pub zero_above: bool,
}

impl ChainComplex {
    /// Validating constructor: checks shapes, in-window basis and d² = 0 on
    /// all composable degrees.
    pub fn new(
        space: GradedVectorSpace,
        diff: BTreeMap<i64, SparseMatrix>,
        window: DegreeWindow,
        zero_below: bool,
        zero_above: bool,
    ) -> Result<Self> {
        for deg in space.degrees() {
            if !window.contains(deg) {
                return Err(Error::InvariantViolation(format!(
                    "basis in degree {deg} outside window {window}"
                )));
            }
        }
        let c = ChainComplex { space, diff, window, zero_below, zero_above };
        for (&n, d) in &c.diff {
            let (rows, cols) = (c.space.dim(n - 1), c.space.dim(n));
            if d.rows() != rows || d.cols() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "d_{n} has shape {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    rows,
                    cols
                )));
            }
        }
        for n in c.window.lo..=c.window.hi {
            if c.is_known(n) && c.is_known(n - 1) && c.is_known(n - 2) {
                let dd = c.d(n - 1).mul(&c.d(n));
                if !dd.is_zero() {
                    return Err(Error::InvariantViolation(format!(
                        "d^2 != 0 at degree {n}"
                    )));
                }
            }
        }
        Ok(c)
    }

    /// Zero complex on an empty window.
    pub fn zero() -> Self {
        ChainComplex {
            space: GradedVectorSpace::empty(),
            diff: BTreeMap::new(),
            window: DegreeWindow::new(0, 0),
            zero_below: true,
            zero_above: true,
        }
    }

    /// The unit complex: ℚ concentrated in degree `n` with the given label.
    pub fn unit(n: i64, label: Label) -> Self {
        let mut basis = BTreeMap::new();
        basis.insert(n, vec![label]);
        ChainComplex {
            space: GradedVectorSpace::new(basis).unwrap(),
            diff: BTreeMap::new(),
            window: DegreeWindow::new(n, n),
            zero_below: true,
            zero_above: true,
        }
    }

    pub fn is_known(&self, n: i64) -> bool {
        self.window.contains(n)
            || (n < self.window.lo && self.zero_below)
            || (n > self.window.hi && self.zero_above)
    }

    pub fn is_known_zero(&self, n: i64) -> bool {
        self.is_known(n) && self.dim(n) == 0
    }

    pub fn potentially_nonzero(&self, n: i64) -> bool {
        !self.is_known(n) || self.dim(n) > 0
    }

    /// True when the complex is globally finite: every degree outside the
    /// window is known to vanish.
    pub fn fully_finite(&self) -> bool {
        self.zero_below && self.zero_above
    }

    pub fn dim(&self, n: i64) -> usize {
        if self.window.contains(n) {
            self.space.dim(n)
        } else {
            0
        }
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for n in self.window.lo..=self.window.hi {
            out.insert(n, self.dim(n));
        }
        out
    }

    /// The differential leaving degree `n`. Degrees outside the stored table
    /// are zero matrices of the right shape.
    pub fn d(&self, n: i64) -> SparseMatrix {
        match self.diff.get(&n) {
            Some(m) => m.clone(),
            None => SparseMatrix::zero(self.dim(n - 1), self.dim(n)),
        }
    }

    /// Applies the differential to a combination of basis labels.
    pub fn d_comb(&self, comb: &LinComb) -> Result<LinComb> {
        let mut out = LinComb::zero();
        for (l, c) in comb.iter() {
            let (n, i) = self
                .space
                .position(l)
                .ok_or_else(|| Error::ShapeMismatch(format!("unknown label {l}")))?;
            let col = self.d(n).column(i);
            let img = self.space.comb(n - 1, &col);
            out.add(&img.scale(c));
        }
        Ok(out)
    }

    /// Range of degrees on which homology is fully trustworthy.
    pub fn trusted_homology_range(&self, w: DegreeWindow) -> Result<DegreeWindow> {
        if !self.is_known(w.lo - 1) {
            return Err(Error::WindowUnderflow(w.lo));
        }
        let hi = if self.is_known(w.hi + 1) { w.hi } else { w.hi - 1 };
        Ok(DegreeWindow::new(w.lo, hi.max(w.lo)))
    }
}

/// Homology of a single degree.
#[derive(Clone, Debug)]
pub struct HomologySlot {
    pub dim: usize,
    /// representative cycles, as coordinates in the complex basis
    pub representatives: Vec<SparseVec>,
    /// false when boundaries from above the window are unknown
    pub trusted: bool,
}

/// Homology over a window, degree by degree.
#[derive(Clone, Debug)]
pub struct Homology {
    pub degrees: BTreeMap<i64, HomologySlot>,
}

impl Homology {
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.degrees.iter().map(|(&n, s)| (n, s.dim)).collect()
    }

    pub fn trusted_dims(&self) -> BTreeMap<i64, usize> {
        self.degrees
            .iter()
            .filter(|(_, s)| s.trusted)
            .map(|(&n, s)| (n, s.dim))
            .collect()
    }

    pub fn dim(&self, n: i64) -> usize {
        self.degrees.get(&n).map_or(0, |s| s.dim)
    }
}

/// Computes homology of `c` in the window `w`.
///
/// Degrees whose incoming boundaries are unknown (the top window edge of a
/// truncated complex) are reported with `trusted = false` and their `dim` is
/// only an upper bound (the cycle count).
pub fn homology(c: &ChainComplex, w: DegreeWindow) -> Result<Homology> {
    if !c.is_known(w.lo - 1) {
        return Err(Error::WindowUnderflow(w.lo));
    }
    let degs: Vec<i64> = w.iter().filter(|&n| c.is_known(n)).collect();
    let slots: Vec<(i64, HomologySlot)> = degs
        .par_iter()
        .map(|&n| {
            let cycles = c.d(n).kernel_basis();
            let trusted = c.is_known(n + 1);
            let slot = if trusted {
                let boundaries = c.d(n + 1).image_basis();
                let mut span = Span::new(c.dim(n), &boundaries);
                let mut reps = Vec::new();
                for z in &cycles {
                    if span.insert(z.clone()) {
                        reps.push(z.clone());
                    }
                }
                HomologySlot { dim: cycles.len() - boundaries.len(), representatives: reps, trusted: true }
            } else {
                HomologySlot { dim: cycles.len(), representatives: cycles, trusted: false }
            };
            (n, slot)
        })
        .collect();
    Ok(Homology { degrees: slots.into_iter().collect() })
}

/// A chain map between complexes, valid on degrees where both sides are known.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: Arc<ChainComplex>,
    pub target: Arc<ChainComplex>,
    comps: BTreeMap<i64, SparseMatrix>,
}

impl ChainMap {
    /// Validating constructor: shape checks plus degreewise commutation with
    /// the differentials wherever all four corners are known.
    pub fn new(
        source: Arc<ChainComplex>,
        target: Arc<ChainComplex>,
        comps: BTreeMap<i64, SparseMatrix>,
    ) -> Result<Self> {
        for (&n, m) in &comps {
            if m.rows() != target.dim(n) || m.cols() != source.dim(n) {
                return Err(Error::ShapeMismatch(format!(
                    "chain map component at degree {n} has shape {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.dim(n),
                    source.dim(n)
                )));
            }
        }
        let f = ChainMap { source, target, comps };
        for n in f.source.window.lo..=f.source.window.hi {
            if f.source.is_known(n)
                && f.source.is_known(n - 1)
                && f.target.is_known(n)
                && f.target.is_known(n - 1)
            {
                let lhs = f.target.d(n).mul(&f.component(n));
                let rhs = f.component(n - 1).mul(&f.source.d(n));
                if lhs != rhs {
                    return Err(Error::InvariantViolation(format!(
                        "chain map does not commute with d at degree {n}"
                    )));
                }
            }
        }
        Ok(f)
    }

    pub fn identity(c: Arc<ChainComplex>) -> Self {
        let comps = (c.window.lo..=c.window.hi)
            .map(|n| (n, SparseMatrix::identity(c.dim(n))))
            .collect();
        ChainMap { source: c.clone(), target: c, comps }
    }

    pub fn component(&self, n: i64) -> SparseMatrix {
        match self.comps.get(&n) {
            Some(m) => m.clone(),
            None => SparseMatrix::zero(self.target.dim(n), self.source.dim(n)),
        }
    }

    pub fn compose(&self, inner: &ChainMap) -> Result<ChainMap> {
        let lo = self.source.window.lo.max(inner.target.window.lo);
        let hi = self.source.window.hi.min(inner.target.window.hi);
        let mut comps = BTreeMap::new();
        for n in lo..=hi {
            comps.insert(n, self.component(n).mul(&inner.component(n)));
        }
        ChainMap::new(inner.source.clone(), self.target.clone(), comps)
    }
}

/// Per-degree quasi-isomorphism verdicts for a chain map.
///
/// Degree `n` is true iff the induced map H_n(source) → H_n(target) is an
/// isomorphism; only degrees with trusted homology on both sides are
/// reported.
pub fn is_quasi_iso(f: &ChainMap, w: DegreeWindow) -> Result<BTreeMap<i64, bool>> {
    let hs = homology(&f.source, w)?;
    let ht = homology(&f.target, w)?;
    let mut out = BTreeMap::new();
    for n in w.iter() {
        let (Some(s), Some(t)) = (hs.degrees.get(&n), ht.degrees.get(&n)) else {
            continue;
        };
        if !(s.trusted && t.trusted) {
            continue;
        }
        if s.dim != t.dim {
            out.insert(n, false);
            continue;
        }
        // iso iff the source representatives stay independent modulo
        // target boundaries
        let boundaries = f.target.d(n + 1).image_basis();
        let mut span = Span::new(f.target.dim(n), &boundaries);
        let comp = f.component(n);
        let mut independent = 0usize;
        for rep in &s.representatives {
            if span.insert(comp.apply(rep)) {
                independent += 1;
            }
        }
        out.insert(n, independent == s.dim);
    }
    Ok(out)
}

fn tensor_sign(p: i64) -> Rational {
    if p.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// (−1)^k as a rational.
pub fn sign(k: i64) -> Rational {
    tensor_sign(k)
}

/// Degrees where the tensor product of `a` and `b` is complete.
pub fn tensor_complete(a: &ChainComplex, b: &ChainComplex, n: i64) -> bool {
    // contributions a_p ⊗ b_{n−p}: every potentially nonzero pair must be known
    let check = |x: &ChainComplex, y: &ChainComplex| -> bool {
        if !x.zero_below {
            return false;
        }
        // p above x's window: y must be known-zero at n − p
        if !x.zero_above {
            if !y.zero_below {
                return false;
            }
            let mut p = x.window.hi + 1;
            while n - p >= y.window.lo {
                if y.potentially_nonzero(n - p) {
                    return false;
                }
                p += 1;
            }
        }
        true
    };
    if !(check(a, b) && check(b, a)) {
        return false;
    }
    for p in a.window.lo..=a.window.hi {
        let q = n - p;
        if a.dim(p) > 0 && !b.is_known(q) {
            return false;
        }
    }
    for q in b.window.lo..=b.window.hi {
        let p = n - q;
        if b.dim(q) > 0 && !a.is_known(p) {
            return false;
        }
    }
    true
}

/// Largest sub-window of `w` (anchored at w.lo) on which a⊗b is complete
/// with complete differentials.
pub fn tensor_complete_window(a: &ChainComplex, b: &ChainComplex, w: DegreeWindow) -> Option<DegreeWindow> {
    if !tensor_complete(a, b, w.lo) || !tensor_complete(a, b, w.lo - 1) {
        return None;
    }
    let mut hi = w.lo;
    while hi < w.hi && tensor_complete(a, b, hi + 1) {
        hi += 1;
    }
    Some(DegreeWindow::new(w.lo, hi))
}

/// Tensor product of chain complexes with the Koszul sign rule
/// d(x⊗y) = dx⊗y + (−1)^{|x|} x⊗dy. Basis labels are pairs.
pub fn tensor(a: &ChainComplex, b: &ChainComplex, w: DegreeWindow) -> Result<ChainComplex> {
    let win = tensor_complete_window(a, b, w).ok_or(Error::IncompleteDegree(w.lo))?;
    let mut basis: BTreeMap<i64, Vec<Label>> = BTreeMap::new();
    for n in win.iter() {
        let mut labels = Vec::new();
        for p in a.window.lo..=a.window.hi {
            let q = n - p;
            for la in a.space.labels(p) {
                for lb in b.space.labels(q) {
                    labels.push(Label::pair(la.clone(), lb.clone()));
                }
            }
        }
        if !labels.is_empty() {
            basis.insert(n, labels);
        }
    }
    let space = GradedVectorSpace::new(basis)?;
    let mut diff = BTreeMap::new();
    for n in (win.lo + 1)..=win.hi {
        let mut d = SparseMatrix::zero(space.dim(n - 1), space.dim(n));
        for (col, lab) in space.labels(n).iter().enumerate() {
            let Label::Pair(la, lb) = lab else { unreachable!() };
            let (p, ia) = a.space.position(la).unwrap();
            let (q, ib) = b.space.position(lb).unwrap();
            // dx ⊗ y
            for (row_a, x) in a.d(p).column(ia).iter() {
                let la2 = a.space.labels(p - 1)[row_a].clone();
                let target = Label::pair(la2, (**lb).clone());
                if let Some((dt, it)) = space.position(&target) {
                    debug_assert_eq!(dt, n - 1);
                    d.add_to(it, col, x.clone());
                }
            }
            // (−1)^p x ⊗ dy
            let s = tensor_sign(p);
            for (row_b, x) in b.d(q).column(ib).iter() {
                let lb2 = b.space.labels(q - 1)[row_b].clone();
                let target = Label::pair((**la).clone(), lb2);
                if let Some((dt, it)) = space.position(&target) {
                    debug_assert_eq!(dt, n - 1);
                    d.add_to(it, col, x * &s);
                }
            }
        }
        diff.insert(n, d);
    }
    ChainComplex::new(
        space,
        diff,
        win,
        a.zero_below && b.zero_below,
        a.fully_finite() && b.fully_finite() && win.hi >= a.window.hi + b.window.hi,
    )
}

/// Shift: degree n of the output is degree n−k of the input; the
/// differential picks up the sign (−1)^k, so shifts compose additively and
/// `shift(shift(c, k), −k)` is the identity on the nose.
pub fn shift(c: &ChainComplex, k: i64) -> ChainComplex {
    if k == 0 {
        return c.clone();
    }
    let mut basis = BTreeMap::new();
    for n in c.space.degrees() {
        basis.insert(
            n + k,
            c.space.labels(n).iter().map(|l| l.clone().shifted(k)).collect(),
        );
    }
    let space = GradedVectorSpace::new(basis).unwrap();
    let s = tensor_sign(k);
    let diff = c
        .diff
        .iter()
        .map(|(&n, m)| (n + k, m.scale(&s)))
        .collect();
    ChainComplex {
        space,
        diff,
        window: DegreeWindow::new(c.window.lo + k, c.window.hi + k),
        zero_below: c.zero_below,
        zero_above: c.zero_above,
    }
}

/// k-connective cover: degrees above k copied, degree k replaced by the
/// cycles ker(d_k), everything below zero. Also returns the inclusion.
pub fn connective_cover(c: &ChainComplex, k: i64) -> Result<(ChainComplex, ChainMap)> {
    if !c.is_known(k - 1) || !c.is_known(k) {
        return Err(Error::WindowUnderflow(k));
    }
    let kernel = c.d(k).kernel_basis();
    let mut basis: BTreeMap<i64, Vec<Label>> = BTreeMap::new();
    // reuse original labels for unit kernel vectors so that covers of
    // already-connective complexes are identities
    let k_labels: Vec<Label> = kernel
        .iter()
        .enumerate()
        .map(|(i, v)| match v.as_unit() {
            Some(j) => c.space.labels(k)[j].clone(),
            None => Label::Ker(k, i),
        })
        .collect();
    if !k_labels.is_empty() {
        basis.insert(k, k_labels);
    }
    for n in (k + 1)..=c.window.hi {
        let labels = c.space.labels(n);
        if !labels.is_empty() {
            basis.insert(n, labels.to_vec());
        }
    }
    let space = GradedVectorSpace::new(basis)?;
    let mut diff = BTreeMap::new();
    let mut comps = BTreeMap::new();
    let incl_k = SparseMatrix::from_columns(c.dim(k), &kernel);
    comps.insert(k, incl_k.clone());
    for n in (k + 1)..=c.window.hi {
        comps.insert(n, SparseMatrix::identity(c.dim(n)));
        if n == k + 1 {
            // d_{k+1} of the cover lands in the kernel; rewrite in the kernel basis
            let ambient = c.d(k + 1);
            let mut d = SparseMatrix::zero(space.dim(k), space.dim(k + 1));
            for col in 0..ambient.cols() {
                let v = ambient.column(col);
                let coords = in_kernel_coords(&kernel, &v).ok_or_else(|| {
                    Error::InvariantViolation("boundary not contained in cycles".into())
                })?;
                for (i, x) in coords.iter() {
                    d.set(i, col, x.clone());
                }
            }
            diff.insert(n, d);
        } else {
            diff.insert(n, c.d(n));
        }
    }
    let window = DegreeWindow::new(k, c.window.hi.max(k));
    let cover = ChainComplex::new(space, diff, window, true, c.zero_above)?;
    let cover = Arc::new(cover);
    let map = ChainMap::new(cover.clone(), Arc::new(c.clone()), comps)?;
    Ok((Arc::try_unwrap(cover).unwrap_or_else(|a| (*a).clone()), map))
}

/// Coordinates of `v` in a kernel basis produced by `kernel_basis` (each
/// basis vector has a unit entry at its free column).
fn in_kernel_coords(kernel: &[SparseVec], v: &SparseVec) -> Option<SparseVec> {
    let mut coords = SparseVec::zero(kernel.len());
    let mut rest = v.clone();
    for (i, kv) in kernel.iter().enumerate() {
        // the free column of kernel vector i is its unique unit coordinate
        // not shared with other vectors; by construction it is the leading
        // free column, recover it as the index where kv has a 1 that later
        // vectors don't touch. Simpler: solve greedily.
        let _ = i;
        let _ = kv;
    }
    // general solve: kernel vectors carry a 1 at distinct free columns
    for (i, kv) in kernel.iter().enumerate() {
        // find kv's free column: entry equal to one whose index is not a
        // pivot of others — by construction it's the unique column where
        // only kv is nonzero among the basis. Use leading-from-the-right.
        let free_col = kv
            .iter()
            .filter(|(idx, x)| {
                x.is_one() && kernel.iter().enumerate().all(|(j, other)| j == i || other.get(*idx).is_zero())
            })
            .map(|(idx, _)| idx)
            .next()?;
        let c = rest.get(free_col);
        if !c.is_zero() {
            coords.set(i, c.clone());
            rest = rest.sub(&kv.scale(&c));
        }
    }
    if rest.is_zero() {
        Some(coords)
    } else {
        None
    }
}

/// Degrees on which [m, n] is complete: every potentially nonzero source
/// degree must pair with known target data, and source degrees beyond the
/// known window must pair with known-zero targets.
pub fn hom_complete(m: &ChainComplex, n: &ChainComplex, q: i64) -> bool {
    if !m.zero_below {
        return false;
    }
    for s in m.window.lo..=m.window.hi {
        if m.dim(s) > 0 && !(n.is_known(s + q) && n.is_known(s + q - 1)) {
            return false;
        }
    }
    if !m.zero_above {
        if !n.zero_above {
            return false;
        }
        // source degrees above m's window are unknown; they may only hit
        // degrees where the target is known to vanish
        let mut s = m.window.hi + 1;
        while s + q <= n.window.hi {
            if !n.is_known_zero(s + q) {
                return false;
            }
            s += 1;
        }
    }
    true
}

/// Largest sub-window of `w` (anchored at w.lo) on which [m, n] is complete.
pub fn hom_complete_window(m: &ChainComplex, n: &ChainComplex, w: DegreeWindow) -> Option<DegreeWindow> {
    if !hom_complete(m, n, w.lo) {
        return None;
    }
    let mut hi = w.lo;
    while hi < w.hi && hom_complete(m, n, hi + 1) {
        hi += 1;
    }
    Some(DegreeWindow::new(w.lo, hi))
}

/// Hom complex [m, n]: degree q part consists of the degree-raising-by-q
/// maps, with differential δf = d_n ∘ f − (−1)^q f ∘ d_m.
pub fn hom_complex(m: &ChainComplex, n: &ChainComplex, w: DegreeWindow) -> Result<ChainComplex> {
    for q in w.iter() {
        if !hom_complete(m, n, q) {
            return Err(Error::IncompleteDegree(q));
        }
    }
    let mut basis: BTreeMap<i64, Vec<Label>> = BTreeMap::new();
    for q in w.iter() {
        let mut labels = Vec::new();
        for p in m.window.lo..=m.window.hi {
            for lm in m.space.labels(p) {
                for ln in n.space.labels(p + q) {
                    labels.push(Label::hom(lm.clone(), ln.clone()));
                }
            }
        }
        if !labels.is_empty() {
            basis.insert(q, labels);
        }
    }
    let space = GradedVectorSpace::new(basis)?;
    let mut diff = BTreeMap::new();
    for q in (w.lo + 1)..=w.hi {
        let mut d = SparseMatrix::zero(space.dim(q - 1), space.dim(q));
        for (col, lab) in space.labels(q).iter().enumerate() {
            let Label::Hom(lm, ln) = lab else { unreachable!() };
            let (p, im) = m.space.position(lm).unwrap();
            let (pn, jn) = n.space.position(ln).unwrap();
            debug_assert_eq!(pn, p + q);
            // d_n ∘ f
            for (row, x) in n.d(p + q).column(jn).iter() {
                let ln2 = n.space.labels(p + q - 1)[row].clone();
                let target = Label::hom((**lm).clone(), ln2);
                if let Some((_, it)) = space.position(&target) {
                    d.add_to(it, col, x.clone());
                }
            }
            // −(−1)^q f ∘ d_m : contributions from sources x'' with d x'' ⊇ x
            let s = tensor_sign(q + 1);
            let dm = m.d(p + 1);
            for col2 in 0..dm.cols() {
                let x = dm.get(im, col2);
                if !x.is_zero() {
                    let lm2 = m.space.labels(p + 1)[col2].clone();
                    let target = Label::hom(lm2, (**ln).clone());
                    if let Some((_, it)) = space.position(&target) {
                        d.add_to(it, col, &x * &s);
                    }
                }
            }
        }
        diff.insert(q, d);
    }
    ChainComplex::new(space, diff, w, false, false)
}
