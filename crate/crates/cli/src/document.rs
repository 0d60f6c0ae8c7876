//! The `.cfk` document format.
//!
//! A line-oriented text format, one statement per line, `#` starts a comment:
//!
//! ```text
//! name fig8
//! ring F2[U,V]
//! shift 0
//! generator x 0 0
//! generator a 1 1
//! differential a -> (b, 1, 0) (c, 0, 1)
//! map iota
//! iota a -> (a, 0, 0)
//! ```
//!
//! Generators over F2[U] carry a single Maslov grading. A term `(t, i, j)`
//! stands for `U^i V^j t`; over F2[U] `j` must be 0. `map iota` and
//! `map tau` declare that the map is present, so that a zero map can be
//! told apart from an absent one.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::Arc;

use cfk_core::{
    validate_complex, Bigrading, Complex, Generator, GradedMap, IotaComplex, IotaTauComplex, MapMode, Monomial,
    MonomialMatrix, Ring, SurgeryComplex,
};
use num_rational::Rational64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{0}")]
    Semantic(String),
}

impl From<cfk_core::Error> for DocumentError {
    fn from(e: cfk_core::Error) -> Self {
        DocumentError::Semantic(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, DocumentError>;

/// `U^u V^v target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub target: String,
    pub u: u32,
    pub v: u32,
}

/// Images of generators, in the order they were written.
pub type Images = Vec<(String, Vec<Term>)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexDocument {
    pub name: String,
    pub ring: Ring,
    pub shift: Rational64,
    pub generators: Vec<(String, Bigrading)>,
    pub differential: Images,
    pub iota: Option<Images>,
    pub tau: Option<Images>,
}

/// A degree-zero linear map between two documents' complexes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapDocument {
    pub name: String,
    pub images: Images,
}

/// The structures a document can describe.
#[derive(Debug, Clone)]
pub enum Loaded {
    Bare(Arc<Complex>),
    Knot(IotaComplex),
    KnotWithTau(IotaTauComplex),
    Surgery(SurgeryComplex),
}

impl Loaded {
    pub fn complex(&self) -> &Arc<Complex> {
        match self {
            Loaded::Bare(c) => c,
            Loaded::Knot(k) => &k.complex,
            Loaded::KnotWithTau(k) => &k.complex,
            Loaded::Surgery(s) => &s.complex,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Loaded::Bare(_) => "complex",
            Loaded::Knot(_) => "iota-complex",
            Loaded::KnotWithTau(_) => "iota-tau-complex",
            Loaded::Surgery(_) => "surgery-complex",
        }
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> DocumentError {
    DocumentError::Syntax { line, column, message: message.into() }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, (i, ch)) in text.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (true, Some((c, s))) => {
                out.push((c, &text[s..i]));
                start = None;
            }
            (false, None) => start = Some((col + 1, i)),
            _ => {}
        }
    }
    if let Some((c, s)) = start {
        out.push((c, &text[s..]));
    }
    out
}

fn valid_id(id: &str) -> bool {
    let mut depth = 0i32;
    for ch in id.chars() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return false;
                }
            }
            ',' | '#' => return false,
            c if c.is_whitespace() => return false,
            _ => {}
        }
    }
    depth == 0 && !id.is_empty() && id != "->"
}

fn parse_int<T: std::str::FromStr>(s: &str, line: usize, column: usize, what: &str) -> Result<T> {
    s.trim().parse().map_err(|_| syntax(line, column, format!("expected {what}, found `{}`", s.trim())))
}

pub fn parse_rational(s: &str) -> Option<Rational64> {
    match s.split_once('/') {
        Some((p, q)) => {
            let (p, q): (i64, i64) = (p.parse().ok()?, q.parse().ok()?);
            (q != 0).then(|| Rational64::new(p, q))
        }
        None => s.parse().ok().map(Rational64::from_integer),
    }
}

pub fn format_rational(r: Rational64) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `(t, i, j) (t, i, j) ...`; `offset` is the column of `text`.
fn parse_terms(text: &str, line: usize, offset: usize) -> Result<Vec<Term>> {
    let chars: Vec<char> = text.chars().collect();
    let mut terms = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        if chars[k].is_whitespace() {
            k += 1;
            continue;
        }
        if chars[k] != '(' {
            return Err(syntax(line, offset + k, format!("expected `(`, found `{}`", chars[k])));
        }
        let start = k;
        let mut depth = 0;
        let mut end = None;
        for (m, &ch) in chars.iter().enumerate().skip(k) {
            match ch {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        end = Some(m);
                        break;
                    }
                }
                _ => {}
            }
        }
        let end = end.ok_or_else(|| syntax(line, offset + start, "unclosed term"))?;
        let inner: String = chars[start + 1..end].iter().collect();
        let parts: Vec<&str> = inner.rsplitn(3, ',').collect();
        if parts.len() != 3 {
            return Err(syntax(line, offset + start, "a term has the form (target, i, j)"));
        }
        let column = offset + start;
        let target = parts[2].trim();
        if !valid_id(target) {
            return Err(syntax(line, column + 1, format!("invalid generator id `{target}`")));
        }
        terms.push(Term {
            target: target.to_string(),
            u: parse_int(parts[1], line, column, "a U-power")?,
            v: parse_int(parts[0], line, column, "a V-power")?,
        });
        k = end + 1;
    }
    Ok(terms)
}

/// `SOURCE -> terms` after the keyword at `rest_col`.
fn parse_image(rest: &str, line: usize, rest_col: usize) -> Result<(String, Vec<Term>)> {
    let Some(arrow) = rest.find("->") else {
        return Err(syntax(line, rest_col, "expected `SOURCE -> (target, i, j) ...`"));
    };
    let source = rest[..arrow].trim();
    if !valid_id(source) {
        return Err(syntax(line, rest_col, format!("invalid generator id `{source}`")));
    }
    let after = &rest[arrow + 2..];
    let col = rest_col + rest[..arrow + 2].chars().count();
    Ok((source.to_string(), parse_terms(after, line, col)?))
}

/// Splits a line into its keyword and the remainder, with columns.
fn split_line(raw: &str) -> Option<(usize, &str, usize, &str)> {
    let text = raw.split('#').next().unwrap_or("");
    let toks = tokens(text);
    let &(col, keyword) = toks.first()?;
    let byte = text.find(keyword).unwrap_or(0) + keyword.len();
    let rest = &text[byte..];
    let rest_col = col + keyword.chars().count();
    Some((col, keyword, rest_col, rest))
}

fn push_image(
    images: &mut Images,
    seen: &mut HashSet<String>,
    image: (String, Vec<Term>),
    line: usize,
    what: &str,
) -> Result<()> {
    if !seen.insert(image.0.clone()) {
        return Err(syntax(line, 1, format!("second {what} line for `{}`", image.0)));
    }
    images.push(image);
    Ok(())
}

pub fn parse_document(text: &str) -> Result<ComplexDocument> {
    let mut name = None;
    let mut ring = None;
    let mut shift = None;
    let mut generators: Vec<(String, Vec<i64>, usize)> = Vec::new();
    let mut differential = Images::new();
    let mut iota: Option<Images> = None;
    let mut tau: Option<Images> = None;
    let mut seen: HashMap<&'static str, HashSet<String>> = HashMap::new();

    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let Some((col, keyword, rest_col, rest)) = split_line(raw) else {
            continue;
        };
        let args = tokens(rest);
        let single = |what: &str| -> Result<String> {
            match args.as_slice() {
                [(_, v)] => Ok(v.to_string()),
                _ => Err(syntax(line, rest_col, format!("`{keyword}` takes one {what}"))),
            }
        };
        match keyword {
            "name" => {
                let value = rest.trim();
                if value.is_empty() || name.is_some() {
                    return Err(syntax(line, col, "`name` must appear once with a value"));
                }
                name = Some(value.to_string());
            }
            "ring" => {
                let value = single("ring")?;
                ring = Some(match value.as_str() {
                    "F2[U,V]" => Ring::TwoVariable,
                    "F2[U]" => Ring::OneVariable,
                    other => return Err(syntax(line, args[0].0 + rest_col - 1, format!("unknown ring `{other}`"))),
                });
            }
            "shift" => {
                let value = single("rational")?;
                shift =
                    Some(parse_rational(&value).ok_or_else(|| {
                        syntax(line, rest_col + args[0].0 - 1, format!("invalid rational `{value}`"))
                    })?);
            }
            "generator" => {
                let Some(&(_, id)) = args.first() else {
                    return Err(syntax(line, rest_col, "`generator` needs an id and gradings"));
                };
                if !valid_id(id) {
                    return Err(syntax(line, rest_col + args[0].0 - 1, format!("invalid generator id `{id}`")));
                }
                let mut gradings = Vec::new();
                for &(c, g) in &args[1..] {
                    gradings.push(parse_int(g, line, rest_col + c - 1, "an integer grading")?);
                }
                generators.push((id.to_string(), gradings, line));
            }
            "differential" => {
                let image = parse_image(rest, line, rest_col)?;
                push_image(&mut differential, seen.entry("differential").or_default(), image, line, "differential")?;
            }
            "map" => match single("map name")?.as_str() {
                "iota" if iota.is_none() => iota = Some(Images::new()),
                "tau" if tau.is_none() => tau = Some(Images::new()),
                "iota" | "tau" => return Err(syntax(line, col, "map declared twice")),
                other => return Err(syntax(line, rest_col + args[0].0 - 1, format!("unknown map `{other}`"))),
            },
            "iota" | "tau" => {
                let (target, key) = if keyword == "iota" { (&mut iota, "iota") } else { (&mut tau, "tau") };
                let images =
                    target.as_mut().ok_or_else(|| syntax(line, col, format!("`{key}` line before `map {key}`")))?;
                let image = parse_image(rest, line, rest_col)?;
                push_image(images, seen.entry(key).or_default(), image, line, key)?;
            }
            other => return Err(syntax(line, col, format!("unknown field `{other}`"))),
        }
    }

    let ring = ring.ok_or_else(|| DocumentError::Semantic("missing `ring` line".into()))?;
    let mut ids = HashSet::new();
    let mut graded = Vec::new();
    for (id, g, line) in generators {
        if !ids.insert(id.clone()) {
            return Err(DocumentError::Semantic(format!("duplicate generator id `{id}` (line {line})")));
        }
        let grading = match (ring, g.as_slice()) {
            (Ring::TwoVariable, &[u, v]) => Bigrading::new(u, v),
            (Ring::OneVariable, &[m]) => Bigrading::maslov(m),
            (Ring::TwoVariable, _) => return Err(syntax(line, 1, format!("generator `{id}` needs gr_U and gr_V"))),
            (Ring::OneVariable, _) => {
                return Err(syntax(line, 1, format!("generator `{id}` needs one Maslov grading")))
            }
        };
        graded.push((id, grading));
    }
    let doc = ComplexDocument {
        name: name.unwrap_or_default(),
        ring,
        shift: shift.unwrap_or_else(|| Rational64::from_integer(0)),
        generators: graded,
        differential,
        iota,
        tau,
    };
    doc.check_references()?;
    validate_complex(&*doc.to_complex()?).into_result()?;
    Ok(doc)
}

impl ComplexDocument {
    fn check_references(&self) -> Result<()> {
        let ids: HashSet<&str> = self.generators.iter().map(|(id, _)| id.as_str()).collect();
        let maps =
            [("differential", Some(&self.differential)), ("iota", self.iota.as_ref()), ("tau", self.tau.as_ref())];
        for (what, images) in maps {
            for (source, terms) in images.into_iter().flatten() {
                if !ids.contains(source.as_str()) {
                    return Err(DocumentError::Semantic(format!("{what} references missing generator `{source}`")));
                }
                for t in terms {
                    if !ids.contains(t.target.as_str()) {
                        return Err(DocumentError::Semantic(format!(
                            "{what} of `{source}` references missing generator `{}`",
                            t.target
                        )));
                    }
                    if self.ring == Ring::OneVariable && t.v != 0 {
                        return Err(DocumentError::Semantic(format!(
                            "{what} of `{source}` uses V, which is not in F2[U]"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn matrix(&self, images: &Images, index: &HashMap<&str, usize>) -> MonomialMatrix {
        let n = self.generators.len();
        let mut m = MonomialMatrix::zeros(self.ring, n, n);
        for (source, terms) in images {
            for t in terms {
                m.add_monomial(index[t.target.as_str()], index[source.as_str()], Monomial::new(t.u, t.v));
            }
        }
        m
    }

    fn index(&self) -> HashMap<&str, usize> {
        self.generators.iter().enumerate().map(|(i, (id, _))| (id.as_str(), i)).collect()
    }

    pub fn to_complex(&self) -> Result<Arc<Complex>> {
        self.check_references()?;
        let generators = self.generators.iter().map(|(id, g)| Generator { id: id.clone(), grading: *g }).collect();
        let d = self.matrix(&self.differential, &self.index());
        Ok(Arc::new(Complex::new(self.ring, generators, d, self.shift)?))
    }

    fn map_on(&self, c: &Arc<Complex>, images: &Images, what: &str) -> Result<GradedMap> {
        let mode = match self.ring {
            Ring::TwoVariable => MapMode::Skew,
            Ring::OneVariable => MapMode::Linear,
        };
        let f = GradedMap::new(c.clone(), c.clone(), mode, Bigrading::ZERO, self.matrix(images, &self.index()))?;
        if !f.is_homogeneous() {
            return Err(DocumentError::Semantic(format!("{what} does not preserve gradings")));
        }
        Ok(f)
    }

    /// The complex with whichever maps the document declares.
    pub fn load(&self) -> Result<Loaded> {
        let c = self.to_complex()?;
        validate_complex(&c).into_result()?;
        let iota = self.iota.as_ref().map(|m| self.map_on(&c, m, "iota")).transpose()?;
        let tau = self.tau.as_ref().map(|m| self.map_on(&c, m, "tau")).transpose()?;
        Ok(match (self.ring, iota, tau) {
            (Ring::TwoVariable, Some(i), None) => Loaded::Knot(IotaComplex::new(c, i)?),
            (Ring::TwoVariable, Some(i), Some(t)) => Loaded::KnotWithTau(IotaTauComplex::new(c, i, t)?),
            (Ring::OneVariable, Some(i), Some(t)) => {
                let s = SurgeryComplex::new(c, i, t)?;
                s.check()?;
                Loaded::Surgery(s)
            }
            (_, None, None) => Loaded::Bare(c),
            _ => return Err(DocumentError::Semantic("unsupported combination of ring and maps".into())),
        })
    }

    fn images_of(f: &GradedMap) -> Images {
        let c = f.target();
        (0..f.source().len())
            .filter(|&j| !f.image(j).is_empty())
            .map(|j| {
                let terms = f
                    .image(j)
                    .iter()
                    .flat_map(|(t, p)| p.terms().map(move |m| Term { target: c.id(*t).to_string(), u: m.u, v: m.v }))
                    .collect();
                (f.source().id(j).to_string(), terms)
            })
            .collect()
    }

    pub fn from_complex(name: &str, c: &Arc<Complex>, iota: Option<&GradedMap>, tau: Option<&GradedMap>) -> Self {
        ComplexDocument {
            name: name.to_string(),
            ring: c.ring(),
            shift: c.shift(),
            generators: c.generators().iter().map(|g| (g.id.clone(), g.grading)).collect(),
            differential: Self::images_of(&c.differential_map()),
            iota: iota.map(Self::images_of),
            tau: tau.map(Self::images_of),
        }
    }

    pub fn from_loaded(name: &str, l: &Loaded) -> Self {
        match l {
            Loaded::Bare(c) => Self::from_complex(name, c, None, None),
            Loaded::Knot(k) => Self::from_complex(name, &k.complex, Some(&k.iota), None),
            Loaded::KnotWithTau(k) => Self::from_complex(name, &k.complex, Some(&k.iota), Some(&k.tau)),
            Loaded::Surgery(s) => Self::from_complex(name, &s.complex, Some(&s.iota), Some(&s.tau)),
        }
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        if !self.name.is_empty() {
            writeln!(out, "name {}", self.name).unwrap();
        }
        writeln!(out, "ring {}", self.ring.name()).unwrap();
        writeln!(out, "shift {}", format_rational(self.shift)).unwrap();
        for (id, g) in &self.generators {
            match self.ring {
                Ring::TwoVariable => writeln!(out, "generator {id} {} {}", g.u, g.v).unwrap(),
                Ring::OneVariable => writeln!(out, "generator {id} {}", g.u).unwrap(),
            }
        }
        write_images(&mut out, "differential", &self.differential);
        for (key, images) in [("iota", &self.iota), ("tau", &self.tau)] {
            if let Some(images) = images {
                writeln!(out, "map {key}").unwrap();
                write_images(&mut out, key, images);
            }
        }
        out
    }
}

fn write_images(out: &mut String, key: &str, images: &Images) {
    for (source, terms) in images {
        write!(out, "{key} {source} ->").unwrap();
        for t in terms {
            write!(out, " ({}, {}, {})", t.target, t.u, t.v).unwrap();
        }
        out.push('\n');
    }
}

pub fn parse_map_document(text: &str) -> Result<MapDocument> {
    let mut name = String::new();
    let mut images = Images::new();
    let mut seen = HashSet::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let Some((col, keyword, rest_col, rest)) = split_line(raw) else {
            continue;
        };
        match keyword {
            "name" => name = rest.trim().to_string(),
            "image" => push_image(&mut images, &mut seen, parse_image(rest, line, rest_col)?, line, "image")?,
            other => return Err(syntax(line, col, format!("unknown field `{other}`"))),
        }
    }
    Ok(MapDocument { name, images })
}

impl MapDocument {
    /// The identity on generator ids.
    pub fn identity(c: &Complex) -> Self {
        MapDocument {
            name: "identity".into(),
            images: (0..c.len())
                .map(|i| (c.id(i).to_string(), vec![Term { target: c.id(i).to_string(), u: 0, v: 0 }]))
                .collect(),
        }
    }

    pub fn to_map(&self, source: &Arc<Complex>, target: &Arc<Complex>) -> Result<GradedMap> {
        let mut m = MonomialMatrix::zeros(source.ring(), target.len(), source.len());
        for (s, terms) in &self.images {
            let j = source
                .index_of(s)
                .ok_or_else(|| DocumentError::Semantic(format!("map source has no generator `{s}`")))?;
            for t in terms {
                let i = target
                    .index_of(&t.target)
                    .ok_or_else(|| DocumentError::Semantic(format!("map target has no generator `{}`", t.target)))?;
                m.add_monomial(i, j, Monomial::new(t.u, t.v));
            }
        }
        Ok(GradedMap::new(source.clone(), target.clone(), MapMode::Linear, Bigrading::ZERO, m)?)
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        if !self.name.is_empty() {
            writeln!(out, "name {}", self.name).unwrap();
        }
        write_images(&mut out, "image", &self.images);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "name test\nring F2[U,V]\ngenerator a 0 -2\ngenerator b -1 -1\ngenerator c -2 0\n\
                         differential b -> (a, 1, 0) (c, 0, 1)\n";

    #[test]
    fn parses_a_staircase() {
        let d = parse_document(SMALL).unwrap();
        assert_eq!(d.generators.len(), 3);
        assert_eq!(d.differential[0].1.len(), 2);
        assert_eq!(parse_document(&d.serialize()).unwrap(), d);
    }

    #[test]
    fn empty_generator_list_is_the_zero_complex() {
        let d = parse_document("ring F2[U]\n").unwrap();
        assert_eq!(d.to_complex().unwrap().len(), 0);
    }

    #[test]
    fn missing_target_is_named() {
        let err = parse_document("ring F2[U]\ngenerator a 1\ndifferential a -> (q, 1, 0)\n").unwrap_err();
        assert!(err.to_string().contains("`q`"), "{err}");
    }

    #[test]
    fn unknown_fields_report_positions() {
        let err = parse_document("ring F2[U]\n  colour red\n").unwrap_err();
        assert_eq!(err, syntax(2, 3, "unknown field `colour`"));
    }

    #[test]
    fn duplicates_are_rejected() {
        assert!(parse_document("ring F2[U]\ngenerator a 0\ngenerator a 0\n").is_err());
    }

    #[test]
    fn non_cycles_are_rejected() {
        let text = "ring F2[U]\ngenerator a 2\ngenerator b 1\ngenerator c 0\n\
                    differential a -> (b, 0, 0)\ndifferential b -> (c, 0, 0)\n";
        let err = parse_document(text).unwrap_err();
        assert!(err.to_string().contains("∂²"), "{err}");
    }

    #[test]
    fn parenthesized_ids_survive() {
        let terms = parse_terms("((x|d)*, 0, 0) (a*, 1, 0)", 1, 1).unwrap();
        assert_eq!(terms[0].target, "(x|d)*");
        assert_eq!(terms[1].u, 1);
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-3/4"), Some(Rational64::new(-3, 4)));
        assert_eq!(parse_rational("2"), Some(Rational64::from_integer(2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(format_rational(Rational64::new(6, 8)), "3/4");
    }
}
