//! Textual record format shared by every module and by the CLI.
//!
//! A record file is UTF-8, line oriented, whitespace tokenized:
//!
//! ```text
//! homalg-record 1
//! object complex            # complex | algebra | coalgebra | comodule |
//!                           # liepres | spacemodel | simplicial | dims
//! name <word>
//! window <lo> <hi>
//! zero_below <true|false>
//! zero_above <true|false>
//! basis <degree> <label>
//! d <label> = <coeff> <label> [ + <coeff> <label> ]*     (omitted: zero)
//! ... kind-specific fields ...
//! end
//! ```
//!
//! Rationals render as `p/q` (or `p`); labels use the syntax of
//! [`crate::label::Label`] and never contain whitespace. Lines starting with
//! `#` are comments.

use crate::algebra::{DGAlgebra, ProductRule};
use crate::coalgebra::{CoactionTable, Comodule, CoproductTable, DGCoalgebra};
use crate::error::{Error, Result};
use crate::graded::{ChainComplex, DegreeWindow, GradedVectorSpace, LinComb};
use crate::label::Label;
use crate::lie::{FreeLiePresentation, LieExpr};
use crate::linalg::{format_rational, parse_rational, Rational, SparseMatrix};
use crate::models::SpaceModel;
use crate::simplicial::{FiniteSimplicialSet, FormalSimplex};
use std::collections::BTreeMap;
use std::fmt::Write as _;

const HEADER: &str = "homalg-record 1";

fn comb_to_text(c: &LinComb) -> String {
    if c.is_zero() {
        return "0".into();
    }
    c.iter()
        .map(|(l, x)| format!("{} {}", format_rational(x), l))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn comb_from_tokens(tokens: &[&str]) -> Result<LinComb> {
    if tokens == ["0"] {
        return Ok(LinComb::zero());
    }
    let mut out = LinComb::zero();
    let mut i = 0;
    while i < tokens.len() {
        let coeff = parse_rational(tokens[i])?;
        let label = Label::parse(
            tokens
                .get(i + 1)
                .ok_or_else(|| Error::Parse("dangling coefficient in combination".into()))?,
        )?;
        out.add_term(label, coeff);
        i += 2;
        if i < tokens.len() {
            if tokens[i] != "+" {
                return Err(Error::Parse(format!(
                    "expected '+' between terms, found \"{}\"",
                    tokens[i]
                )));
            }
            i += 1;
        }
    }
    Ok(out)
}

/// A tokenized record: the kind plus its body lines.
pub struct RawRecord {
    pub kind: String,
    pub lines: Vec<Vec<String>>,
}

/// Splits a record file into its raw lines and checks the header.
pub fn scan(text: &str) -> Result<RawRecord> {
    let mut lines = text
        .lines()
        .map(|l| l.trim())
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    if lines.next() != Some(HEADER) {
        return Err(Error::Parse(format!("missing header \"{HEADER}\"")));
    }
    let mut body = Vec::new();
    let mut kind = None;
    let mut ended = false;
    for line in lines {
        let toks: Vec<String> = line.split_whitespace().map(String::from).collect();
        if toks.is_empty() {
            continue;
        }
        if kind.is_none() {
            if toks[0] != "object" || toks.len() != 2 {
                return Err(Error::Parse("expected \"object <kind>\"".into()));
            }
            kind = Some(toks[1].clone());
            continue;
        }
        if toks[0] == "end" && toks.len() == 1 {
            ended = true;
            break;
        }
        body.push(toks);
    }
    if !ended {
        return Err(Error::Parse("missing \"end\"".into()));
    }
    Ok(RawRecord { kind: kind.ok_or_else(|| Error::Parse("empty record".into()))?, lines: body })
}

struct ComplexParts {
    window: DegreeWindow,
    zero_below: bool,
    zero_above: bool,
    basis: BTreeMap<i64, Vec<Label>>,
    diffs: BTreeMap<Label, LinComb>,
    rest: Vec<Vec<String>>,
}

fn parse_complex_parts(lines: &[Vec<String>]) -> Result<ComplexParts> {
    let mut window = None;
    let mut zero_below = true;
    let mut zero_above = false;
    let mut basis: BTreeMap<i64, Vec<Label>> = BTreeMap::new();
    let mut diffs: BTreeMap<Label, LinComb> = BTreeMap::new();
    let mut rest = Vec::new();
    for toks in lines {
        let strs: Vec<&str> = toks.iter().map(String::as_str).collect();
        match strs.as_slice() {
            ["name", _] => {}
            ["window", lo, hi] => {
                let lo: i64 = lo.parse().map_err(|_| Error::Parse("bad window".into()))?;
                let hi: i64 = hi.parse().map_err(|_| Error::Parse("bad window".into()))?;
                window = Some(DegreeWindow::new(lo, hi));
            }
            ["zero_below", b] => zero_below = *b == "true",
            ["zero_above", b] => zero_above = *b == "true",
            ["basis", deg, label] => {
                let deg: i64 = deg.parse().map_err(|_| Error::Parse("bad basis degree".into()))?;
                basis.entry(deg).or_default().push(Label::parse(label)?);
            }
            ["d", label, "=", ..] => {
                let l = Label::parse(label)?;
                diffs.insert(l, comb_from_tokens(&strs[3..])?);
            }
            _ => rest.push(toks.clone()),
        }
    }
    Ok(ComplexParts {
        window: window.ok_or_else(|| Error::Parse("missing window".into()))?,
        zero_below,
        zero_above,
        basis,
        diffs,
        rest,
    })
}

fn build_complex(parts: &ComplexParts) -> Result<ChainComplex> {
    let space = GradedVectorSpace::new(parts.basis.clone())?;
    let mut diff: BTreeMap<i64, SparseMatrix> = BTreeMap::new();
    for (l, comb) in &parts.diffs {
        let (n, col) = space
            .position(l)
            .ok_or_else(|| Error::Parse(format!("differential on unknown label {l}")))?;
        let m = diff
            .entry(n)
            .or_insert_with(|| SparseMatrix::zero(space.dim(n - 1), space.dim(n)));
        let v = space.coords(n - 1, comb)?;
        for (row, x) in v.iter() {
            m.set(row, col, x.clone());
        }
    }
    ChainComplex::new(space, diff, parts.window, parts.zero_below, parts.zero_above)
}

fn write_complex_body(out: &mut String, c: &ChainComplex, name: Option<&str>) {
    if let Some(n) = name {
        writeln!(out, "name {n}").unwrap();
    }
    writeln!(out, "window {} {}", c.window.lo, c.window.hi).unwrap();
    writeln!(out, "zero_below {}", c.zero_below).unwrap();
    writeln!(out, "zero_above {}", c.zero_above).unwrap();
    for n in c.window.iter() {
        for l in c.space.labels(n) {
            writeln!(out, "basis {n} {l}").unwrap();
        }
    }
    for n in c.window.iter() {
        let d = c.d(n);
        for (col, l) in c.space.labels(n).iter().enumerate() {
            let img = c.space.comb(n - 1, &d.column(col));
            if !img.is_zero() {
                writeln!(out, "d {l} = {}", comb_to_text(&img)).unwrap();
            }
        }
    }
}

pub fn serialize_complex(c: &ChainComplex, name: Option<&str>) -> String {
    let mut out = format!("{HEADER}\nobject complex\n");
    write_complex_body(&mut out, c, name);
    out.push_str("end\n");
    out
}

pub fn parse_complex(text: &str) -> Result<ChainComplex> {
    let raw = scan(text)?;
    if raw.kind != "complex" {
        return Err(Error::Parse(format!("expected complex record, got {}", raw.kind)));
    }
    let parts = parse_complex_parts(&raw.lines)?;
    build_complex(&parts)
}

pub fn serialize_algebra(a: &DGAlgebra, name: Option<&str>) -> String {
    let mut out = format!("{HEADER}\nobject algebra\n");
    write_complex_body(&mut out, &a.complex, name);
    writeln!(out, "unit {}", a.unit).unwrap();
    match &a.product {
        ProductRule::FreeWords => writeln!(out, "product free").unwrap(),
        ProductRule::Table(t) => {
            writeln!(out, "product table").unwrap();
            for ((x, y), comb) in t {
                writeln!(out, "mul {x} {y} = {}", comb_to_text(comb)).unwrap();
            }
        }
    }
    if let Some(aug) = &a.augmentation {
        for (l, c) in aug {
            writeln!(out, "aug {l} {}", format_rational(c)).unwrap();
        }
    }
    out.push_str("end\n");
    out
}

/// Serializes a cobar construction: the algebra record plus the universal
/// twisting-chain table as `twist <coalgebra label> = <combination>` lines.
pub fn serialize_cobar(omega: &crate::barcobar::CobarAlgebra, name: Option<&str>) -> String {
    let mut out = serialize_algebra(&omega.algebra, name);
    out.truncate(out.len() - "end\n".len());
    let c = &omega.coalgebra;
    for n in c.complex.window.iter() {
        for l in c.complex.space.labels(n) {
            let img = omega.universal.apply_label(l);
            if !img.is_zero() {
                writeln!(out, "twist {l} = {}", comb_to_text(&img)).unwrap();
            }
        }
    }
    out.push_str("end\n");
    out
}

pub fn parse_algebra(text: &str) -> Result<DGAlgebra> {
    let raw = scan(text)?;
    if raw.kind != "algebra" {
        return Err(Error::Parse(format!("expected algebra record, got {}", raw.kind)));
    }
    let parts = parse_complex_parts(&raw.lines)?;
    let complex = build_complex(&parts)?;
    let mut unit = None;
    let mut product = None;
    let mut table: BTreeMap<(Label, Label), LinComb> = BTreeMap::new();
    let mut aug: BTreeMap<Label, Rational> = BTreeMap::new();
    let mut has_aug = false;
    for toks in &parts.rest {
        let strs: Vec<&str> = toks.iter().map(String::as_str).collect();
        match strs.as_slice() {
            ["unit", l] => unit = Some(Label::parse(l)?),
            ["product", "free"] => product = Some(ProductRule::FreeWords),
            ["product", "table"] => product = Some(ProductRule::Table(BTreeMap::new())),
            ["mul", x, y, "=", ..] => {
                table.insert((Label::parse(x)?, Label::parse(y)?), comb_from_tokens(&strs[4..])?);
            }
            ["aug", l, c] => {
                has_aug = true;
                aug.insert(Label::parse(l)?, parse_rational(c)?);
            }
            // informational twisting-chain rows emitted for cobar algebras
            ["twist", _, "=", ..] => {}
            other => {
                return Err(Error::Parse(format!(
                    "unexpected algebra line \"{}\"",
                    other.join(" ")
                )))
            }
        }
    }
    let product = match product.ok_or_else(|| Error::Parse("missing product rule".into()))? {
        ProductRule::Table(_) => ProductRule::Table(table),
        free => free,
    };
    Ok(DGAlgebra {
        complex,
        unit: unit.ok_or_else(|| Error::Parse("missing unit".into()))?,
        product,
        augmentation: if has_aug { Some(aug) } else { None },
    })
}

fn flag_text(f: Option<bool>) -> &'static str {
    match f {
        Some(true) => "true",
        Some(false) => "false",
        None => "unknown",
    }
}

fn flag_parse(s: &str) -> Result<Option<bool>> {
    match s {
        "true" => Ok(Some(true)),
        "false" => Ok(Some(false)),
        "unknown" => Ok(None),
        _ => Err(Error::Parse(format!("bad flag \"{s}\""))),
    }
}

pub fn serialize_coalgebra(c: &DGCoalgebra, name: Option<&str>) -> String {
    let mut out = format!("{HEADER}\nobject coalgebra\n");
    write_complex_body(&mut out, &c.complex, name);
    writeln!(out, "coaug {}", c.coaugmentation).unwrap();
    writeln!(out, "cocommutative {}", flag_text(c.cocommutative)).unwrap();
    writeln!(out, "two_reduced {}", flag_text(c.two_reduced)).unwrap();
    for (l, x) in &c.counit {
        writeln!(out, "counit {l} {}", format_rational(x)).unwrap();
    }
    for n in c.complex.window.iter() {
        for l in c.complex.space.labels(n) {
            let terms: Vec<String> = c
                .coproduct_of(l)
                .iter()
                .map(|(a, b, x)| format!("{} {a} {b}", format_rational(x)))
                .collect();
            if !terms.is_empty() {
                writeln!(out, "cop {l} = {}", terms.join(" + ")).unwrap();
            }
        }
    }
    out.push_str("end\n");
    out
}

fn parse_pair_comb(tokens: &[&str]) -> Result<Vec<(Label, Label, Rational)>> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let coeff = parse_rational(tokens[i])?;
        let a = Label::parse(
            tokens.get(i + 1).ok_or_else(|| Error::Parse("short pair term".into()))?,
        )?;
        let b = Label::parse(
            tokens.get(i + 2).ok_or_else(|| Error::Parse("short pair term".into()))?,
        )?;
        out.push((a, b, coeff));
        i += 3;
        if i < tokens.len() {
            if tokens[i] != "+" {
                return Err(Error::Parse("expected '+' between pair terms".into()));
            }
            i += 1;
        }
    }
    Ok(out)
}

pub fn parse_coalgebra(text: &str) -> Result<DGCoalgebra> {
    let raw = scan(text)?;
    if raw.kind != "coalgebra" {
        return Err(Error::Parse(format!("expected coalgebra record, got {}", raw.kind)));
    }
    let parts = parse_complex_parts(&raw.lines)?;
    let complex = build_complex(&parts)?;
    let mut coaug = None;
    let mut cocommutative = None;
    let mut two_reduced = None;
    let mut counit = BTreeMap::new();
    let mut coproduct: CoproductTable = BTreeMap::new();
    for toks in &parts.rest {
        let strs: Vec<&str> = toks.iter().map(String::as_str).collect();
        match strs.as_slice() {
            ["coaug", l] => coaug = Some(Label::parse(l)?),
            ["cocommutative", f] => cocommutative = flag_parse(f)?,
            ["two_reduced", f] => two_reduced = flag_parse(f)?,
            ["counit", l, x] => {
                counit.insert(Label::parse(l)?, parse_rational(x)?);
            }
            ["cop", l, "=", ..] => {
                let label = Label::parse(l)?;
                let mut table = BTreeMap::new();
                for (a, b, x) in parse_pair_comb(&strs[3..])? {
                    let e = table.entry((a, b)).or_insert_with(num_traits::Zero::zero);
                    *e += x;
                }
                coproduct.insert(label, table);
            }
            other => {
                return Err(Error::Parse(format!(
                    "unexpected coalgebra line \"{}\"",
                    other.join(" ")
                )))
            }
        }
    }
    Ok(DGCoalgebra {
        complex,
        counit,
        coproduct,
        coaugmentation: coaug.ok_or_else(|| Error::Parse("missing coaugmentation".into()))?,
        cocommutative,
        two_reduced,
    })
}

pub fn serialize_comodule(m: &Comodule, name: Option<&str>) -> String {
    let mut out = format!("{HEADER}\nobject comodule\n");
    write_complex_body(&mut out, &m.complex, name);
    for n in m.complex.window.iter() {
        for l in m.complex.space.labels(n) {
            let terms: Vec<String> = m
                .coaction_of(l)
                .iter()
                .map(|(a, x, c)| format!("{} {a} {x}", format_rational(c)))
                .collect();
            if !terms.is_empty() {
                writeln!(out, "rho {l} = {}", terms.join(" + ")).unwrap();
            }
        }
    }
    out.push_str("end\n");
    out
}

/// Parses a comodule over an already-loaded coalgebra.
pub fn parse_comodule(text: &str, coalgebra: std::sync::Arc<DGCoalgebra>) -> Result<Comodule> {
    let raw = scan(text)?;
    if raw.kind != "comodule" {
        return Err(Error::Parse(format!("expected comodule record, got {}", raw.kind)));
    }
    let parts = parse_complex_parts(&raw.lines)?;
    let complex = build_complex(&parts)?;
    let mut coaction: CoactionTable = BTreeMap::new();
    for toks in &parts.rest {
        let strs: Vec<&str> = toks.iter().map(String::as_str).collect();
        match strs.as_slice() {
            ["rho", l, "=", ..] => {
                let label = Label::parse(l)?;
                let mut table = BTreeMap::new();
                for (a, x, c) in parse_pair_comb(&strs[3..])? {
                    let e = table.entry((a, x)).or_insert_with(num_traits::Zero::zero);
                    *e += c;
                }
                coaction.insert(label, table);
            }
            other => {
                return Err(Error::Parse(format!(
                    "unexpected comodule line \"{}\"",
                    other.join(" ")
                )))
            }
        }
    }
    Ok(Comodule { coalgebra, complex, coaction, explicit_right: None })
}

fn lie_expr_to_label(e: &LieExpr) -> Label {
    match e {
        LieExpr::Gen(g) => Label::atom(g.clone()),
        LieExpr::Br(a, b) => Label::bracket(lie_expr_to_label(a), lie_expr_to_label(b)),
    }
}

fn label_to_lie_expr(l: &Label) -> Result<LieExpr> {
    match l {
        Label::Atom(s) => Ok(LieExpr::Gen(s.clone())),
        Label::Bracket(a, b) => Ok(LieExpr::br(label_to_lie_expr(a)?, label_to_lie_expr(b)?)),
        other => Err(Error::Parse(format!("not a Lie word: {other}"))),
    }
}

fn write_liepres_body(out: &mut String, p: &FreeLiePresentation) {
    for (n, d) in &p.generators {
        writeln!(out, "generator {n} {d}").unwrap();
    }
    for (g, terms) in &p.differential {
        let body: Vec<String> = terms
            .iter()
            .map(|(c, e)| format!("{} {}", format_rational(c), lie_expr_to_label(e)))
            .collect();
        writeln!(out, "dgen {g} = {}", body.join(" + ")).unwrap();
    }
}

pub fn serialize_liepres(p: &FreeLiePresentation, name: Option<&str>) -> String {
    let mut out = format!("{HEADER}\nobject liepres\n");
    if let Some(n) = name {
        writeln!(out, "name {n}").unwrap();
    }
    write_liepres_body(&mut out, p);
    out.push_str("end\n");
    out
}

fn parse_liepres_lines(lines: &[Vec<String>]) -> Result<FreeLiePresentation> {
    let mut pres = FreeLiePresentation::default();
    for toks in lines {
        let strs: Vec<&str> = toks.iter().map(String::as_str).collect();
        match strs.as_slice() {
            ["generator", n, d] => {
                let deg: i64 = d.parse().map_err(|_| Error::Parse("bad generator degree".into()))?;
                pres.generators.push(((*n).to_string(), deg));
            }
            ["dgen", g, "=", ..] => {
                let comb = comb_from_tokens(&strs[3..])?;
                let mut terms = Vec::new();
                for (l, c) in comb.iter() {
                    terms.push((c.clone(), label_to_lie_expr(l)?));
                }
                pres.differential.insert((*g).to_string(), terms);
            }
            ["name", _] => {}
            other => {
                return Err(Error::Parse(format!(
                    "unexpected liepres line \"{}\"",
                    other.join(" ")
                )))
            }
        }
    }
    Ok(pres)
}

pub fn parse_liepres(text: &str) -> Result<FreeLiePresentation> {
    let raw = scan(text)?;
    if raw.kind != "liepres" {
        return Err(Error::Parse(format!("expected liepres record, got {}", raw.kind)));
    }
    parse_liepres_lines(&raw.lines)
}

fn range_text(r: i64) -> String {
    if r == i64::MAX {
        "max".into()
    } else {
        r.to_string()
    }
}

fn range_parse(s: &str) -> Result<i64> {
    if s == "max" {
        Ok(i64::MAX)
    } else {
        s.parse().map_err(|_| Error::Parse(format!("bad range \"{s}\"")))
    }
}

/// Serializes a space model: presentations plus expected tables. The finite
/// homology coalgebra is not part of the file format; loading rebuilds a
/// coalgebra model from the presentation.
pub fn serialize_spacemodel(m: &SpaceModel) -> String {
    let mut out = format!("{HEADER}\nobject spacemodel\n");
    writeln!(out, "name {}", m.name).unwrap();
    for p in &m.lie_summands {
        writeln!(out, "summand").unwrap();
        write_liepres_body(&mut out, p);
        writeln!(out, "endsummand").unwrap();
    }
    for (n, d) in &m.expected_betti {
        writeln!(out, "betti {n} {d}").unwrap();
    }
    for (n, d) in &m.expected_whitehead {
        writeln!(out, "whitehead {n} {d}").unwrap();
    }
    writeln!(out, "betti_range {}", range_text(m.betti_range)).unwrap();
    writeln!(out, "whitehead_range {}", range_text(m.whitehead_range)).unwrap();
    out.push_str("end\n");
    out
}

/// Parses a space model record; the homology coalgebra is regenerated as the
/// windowed Chevalley–Eilenberg model of the presentation. The caller is
/// expected to validate afterwards (see [`load_model`]).
pub fn parse_spacemodel(text: &str, ce_window: DegreeWindow) -> Result<SpaceModel> {
    let raw = scan(text)?;
    if raw.kind != "spacemodel" {
        return Err(Error::Parse(format!("expected spacemodel record, got {}", raw.kind)));
    }
    let mut name = None;
    let mut summands = Vec::new();
    let mut current: Option<Vec<Vec<String>>> = None;
    let mut betti = BTreeMap::new();
    let mut whitehead = BTreeMap::new();
    let mut betti_range = i64::MAX;
    let mut whitehead_range = i64::MAX;
    for toks in &raw.lines {
        let strs: Vec<&str> = toks.iter().map(String::as_str).collect();
        if let Some(block) = &mut current {
            if strs == ["endsummand"] {
                summands.push(parse_liepres_lines(block)?);
                current = None;
            } else {
                block.push(toks.clone());
            }
            continue;
        }
        match strs.as_slice() {
            ["name", n] => name = Some((*n).to_string()),
            ["summand"] => current = Some(Vec::new()),
            ["betti", n, d] => {
                betti.insert(
                    n.parse().map_err(|_| Error::Parse("bad betti degree".into()))?,
                    d.parse().map_err(|_| Error::Parse("bad betti dim".into()))?,
                );
            }
            ["whitehead", n, d] => {
                whitehead.insert(
                    n.parse().map_err(|_| Error::Parse("bad whitehead degree".into()))?,
                    d.parse().map_err(|_| Error::Parse("bad whitehead dim".into()))?,
                );
            }
            ["betti_range", r] => betti_range = range_parse(r)?,
            ["whitehead_range", r] => whitehead_range = range_parse(r)?,
            other => {
                return Err(Error::Parse(format!(
                    "unexpected spacemodel line \"{}\"",
                    other.join(" ")
                )))
            }
        }
    }
    if current.is_some() {
        return Err(Error::Parse("unterminated summand block".into()));
    }
    crate::models::assemble_model(
        name.ok_or_else(|| Error::Parse("missing model name".into()))?,
        summands,
        betti,
        whitehead,
        betti_range,
        whitehead_range,
        ce_window,
    )
}

/// Loads and validates a space model from a file.
pub fn load_model(path: &std::path::Path, w: DegreeWindow) -> Result<SpaceModel> {
    let text = std::fs::read_to_string(path)?;
    let model = parse_spacemodel(&text, w)?;
    let report = crate::models::validate_space_model(&model, w)?;
    report.into_result(&format!("model {}", model.name))?;
    Ok(model)
}

/// Saves a space model record to a file.
pub fn save_model(m: &SpaceModel, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, serialize_spacemodel(m))?;
    Ok(())
}

pub fn serialize_dims(dims: &BTreeMap<i64, usize>, name: Option<&str>) -> String {
    let mut out = format!("{HEADER}\nobject dims\n");
    if let Some(n) = name {
        writeln!(out, "name {n}").unwrap();
    }
    for (n, d) in dims {
        writeln!(out, "dim {n} {d}").unwrap();
    }
    out.push_str("end\n");
    out
}

pub fn serialize_simplicial(x: &FiniteSimplicialSet) -> String {
    let mut out = format!("{HEADER}\nobject simplicial\n");
    writeln!(out, "name {}", x.name).unwrap();
    for (dim, names) in x.simplices.iter().enumerate() {
        for n in names {
            writeln!(out, "simplex {n} {dim}").unwrap();
        }
    }
    for (dim, names) in x.simplices.iter().enumerate() {
        if dim == 0 {
            continue;
        }
        for (idx, n) in names.iter().enumerate() {
            for j in 0..=dim {
                let f = x
                    .apply_face(j, &FormalSimplex::nondegenerate(dim, idx))
                    .expect("validated simplicial set");
                let mut words: Vec<String> =
                    f.degeneracies.iter().map(|k| format!("s{k}")).collect();
                words.push(x.simplex_name(f.base.0, f.base.1).to_string());
                writeln!(out, "face {n} {j} = {}", words.join(" ")).unwrap();
            }
        }
    }
    out.push_str("end\n");
    out
}

pub fn parse_simplicial(text: &str) -> Result<FiniteSimplicialSet> {
    let raw = scan(text)?;
    if raw.kind != "simplicial" {
        return Err(Error::Parse(format!("expected simplicial record, got {}", raw.kind)));
    }
    let mut name = String::from("simplicial");
    let mut simplex_dims: Vec<(String, usize)> = Vec::new();
    let mut face_lines: Vec<(String, usize, Vec<String>)> = Vec::new();
    for toks in &raw.lines {
        let strs: Vec<&str> = toks.iter().map(String::as_str).collect();
        match strs.as_slice() {
            ["name", n] => name = (*n).to_string(),
            ["simplex", n, d] => {
                simplex_dims.push((
                    (*n).to_string(),
                    d.parse().map_err(|_| Error::Parse("bad simplex dimension".into()))?,
                ));
            }
            ["face", n, j, "=", ..] => {
                face_lines.push((
                    (*n).to_string(),
                    j.parse().map_err(|_| Error::Parse("bad face index".into()))?,
                    strs[4..].iter().map(|s| s.to_string()).collect(),
                ));
            }
            other => {
                return Err(Error::Parse(format!(
                    "unexpected simplicial line \"{}\"",
                    other.join(" ")
                )))
            }
        }
    }
    let max_dim = simplex_dims.iter().map(|(_, d)| *d).max().unwrap_or(0);
    let mut simplices: Vec<Vec<String>> = vec![Vec::new(); max_dim + 1];
    for (n, d) in &simplex_dims {
        simplices[*d].push(n.clone());
    }
    let locate = |n: &str| -> Result<(usize, usize)> {
        for (dim, names) in simplices.iter().enumerate() {
            if let Some(i) = names.iter().position(|x| x == n) {
                return Ok((dim, i));
            }
        }
        Err(Error::Parse(format!("unknown simplex \"{n}\"")))
    };
    let mut faces = BTreeMap::new();
    for (n, j, words) in &face_lines {
        let (dim, idx) = locate(n)?;
        let base_name = words.last().ok_or_else(|| Error::Parse("empty face".into()))?;
        let base = locate(base_name)?;
        let mut degeneracies = Vec::new();
        for word in &words[..words.len() - 1] {
            let k = word
                .strip_prefix('s')
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad degeneracy \"{word}\"")))?;
            degeneracies.push(k);
        }
        faces.insert((dim, idx, *j), FormalSimplex { degeneracies, base });
    }
    FiniteSimplicialSet::new(name, simplices, faces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::validate_coalgebra;
    use crate::models::{sphere_model, validate_space_model};
    use crate::simplicial::sphere2;

    #[test]
    fn complex_round_trip() {
        let c = crate::graded::tests::two_term("x", "y");
        let text = serialize_complex(&c, Some("cone"));
        let back = parse_complex(&text).unwrap();
        assert_eq!(back.dims(), c.dims());
        assert_eq!(serialize_complex(&back, Some("cone")), text);
    }

    #[test]
    fn coalgebra_round_trip() {
        let c = crate::coalgebra::tests::sphere_homology_coalgebra(2);
        let text = serialize_coalgebra(&c, Some("s2"));
        let back = parse_coalgebra(&text).unwrap();
        assert!(validate_coalgebra(&back).passed());
        assert_eq!(serialize_coalgebra(&back, Some("s2")), text);
    }

    #[test]
    fn spacemodel_round_trip() {
        let m = sphere_model(3).unwrap();
        let text = serialize_spacemodel(&m);
        let back = parse_spacemodel(&text, DegreeWindow::new(0, 8)).unwrap();
        assert_eq!(back.name, m.name);
        assert_eq!(back.expected_betti, m.expected_betti);
        assert_eq!(back.expected_whitehead, m.expected_whitehead);
        assert_eq!(serialize_spacemodel(&back), text);
        let report = validate_space_model(&back, DegreeWindow::new(0, 8)).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
    }

    #[test]
    fn corrupted_coefficient_is_a_parse_error() {
        let m = sphere_model(3).unwrap();
        let text = serialize_spacemodel(&m).replace("betti 0 1", "betti 0 x");
        let err = parse_spacemodel(&text, DegreeWindow::new(0, 6)).unwrap_err();
        assert!(err.to_string().starts_with("parse-error"));
        // a zero denominator anywhere is also a parse error
        assert!(parse_rational("1/0").unwrap_err().to_string().starts_with("parse-error"));
    }

    #[test]
    fn wrong_betti_table_is_an_invariant_violation() {
        let m = sphere_model(3).unwrap();
        let text = serialize_spacemodel(&m).replace("betti 3 1", "betti 3 2");
        let dir = std::env::temp_dir().join("homalg-test-records");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad-model.rec");
        std::fs::write(&path, text).unwrap();
        let err = load_model(&path, DegreeWindow::new(0, 6)).unwrap_err();
        assert!(err.to_string().starts_with("invariant-violation"));
        assert!(err.to_string().contains("Betti"));
    }

    #[test]
    fn model_file_round_trip_on_disk() {
        let m = sphere_model(3).unwrap();
        let dir = std::env::temp_dir().join("homalg-test-records");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("s3.rec");
        save_model(&m, &path).unwrap();
        let back = load_model(&path, DegreeWindow::new(0, 7)).unwrap();
        assert_eq!(back.name, m.name);
        assert_eq!(back.expected_betti, m.expected_betti);
    }

    #[test]
    fn simplicial_round_trip() {
        let s2 = sphere2();
        let text = serialize_simplicial(&s2);
        let back = parse_simplicial(&text).unwrap();
        assert_eq!(back.count(0), 1);
        assert_eq!(back.count(2), 1);
        assert_eq!(serialize_simplicial(&back), text);
    }
}
