//! Line-based text formats for groups, structures, triples, 2-cells and
//! extended data. `#` starts a comment; blank lines are ignored.
//!
//! ```text
//! group S3 6
//! 0 1 2 3 4 5
//! ...
//! ```
//!
//! Structure, triple and extended files refer to groups either by a path
//! relative to the referring file or as `catalog:<name>`.

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};

use crate::bicat_data::BicatData;
use crate::extended::ExtendedData;
use crate::group::{catalog, FiniteGroup, Group, GroupError};
use crate::maltsev::GpdTriple;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{file}:{line}:{column}: {message}")]
pub struct FormatError {
    pub file: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Copy)]
struct Token<'a> {
    line: usize,
    column: usize,
    text: &'a str,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

struct Parser<'a> {
    file: &'a str,
    lines: Vec<Line<'a>>,
    pos: usize,
    last_line: usize,
}

impl<'a> Parser<'a> {
    fn new(file: &'a str, text: &'a str) -> Self {
        let mut lines = Vec::new();
        let mut last_line = 1;
        for (i, raw) in text.lines().enumerate() {
            last_line = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut start = None;
            for (j, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(j),
                    (true, Some(s)) => {
                        let column = content[..s].chars().count() + 1;
                        tokens.push(Token { line: i + 1, column, text: &content[s..j] });
                        start = None;
                    }
                    _ => {}
                }
            }
            if !tokens.is_empty() {
                lines.push(Line { number: i + 1, tokens });
            }
        }
        Parser { file, lines, pos: 0, last_line }
    }

    fn error_at(&self, line: usize, column: usize, message: impl Into<String>) -> FormatError {
        FormatError { file: self.file.to_string(), line, column, message: message.into() }
    }

    fn error(&self, tok: Token, message: impl Into<String>) -> FormatError {
        self.error_at(tok.line, tok.column, message)
    }

    fn done(&self) -> bool {
        self.pos >= self.lines.len()
    }

    fn next_line(&mut self, what: &str) -> Result<&Line<'a>, FormatError> {
        if self.done() {
            return Err(self.error_at(self.last_line + 1, 1, format!("unexpected end of file, expected {what}")));
        }
        self.pos += 1;
        Ok(&self.lines[self.pos - 1])
    }

    /// A line `keyword arg…` with exactly `args` arguments.
    fn directive(&mut self, keyword: &str, args: usize) -> Result<Vec<Token<'a>>, FormatError> {
        let file = self.file;
        let line = self.next_line(&format!("`{keyword}`"))?;
        let first = line.tokens[0];
        if first.text != keyword {
            return Err(FormatError {
                file: file.into(),
                line: first.line,
                column: first.column,
                message: format!("expected `{keyword}`, found `{}`", first.text),
            });
        }
        check_arity(file, line, args)?;
        Ok(line.tokens[1..].to_vec())
    }

    fn peek(&self) -> Option<&Line<'a>> {
        self.lines.get(self.pos)
    }

    /// A line of exactly `len` indices, each below `bound`.
    fn indices(&mut self, len: usize, bound: usize, what: &str) -> Result<Vec<usize>, FormatError> {
        let file = self.file;
        let line = self.next_line(what)?;
        let mut out = Vec::with_capacity(len);
        for tok in &line.tokens {
            let v: usize = tok.text.parse().map_err(|_| FormatError {
                file: file.into(),
                line: tok.line,
                column: tok.column,
                message: format!("`{}` is not an index", tok.text),
            })?;
            if v >= bound {
                return Err(FormatError {
                    file: file.into(),
                    line: tok.line,
                    column: tok.column,
                    message: format!("index {v} out of range for {what} (must be below {bound})"),
                });
            }
            out.push(v);
        }
        if out.len() != len {
            let tok = line.tokens.get(len).copied().unwrap_or(*line.tokens.last().expect("non-empty"));
            return Err(FormatError {
                file: file.into(),
                line: tok.line,
                column: tok.column,
                message: format!("{what}: expected {len} entries, found {}", out.len()),
            });
        }
        Ok(out)
    }

    fn expect_end(&self) -> Result<(), FormatError> {
        match self.peek() {
            Some(line) => Err(self.error(line.tokens[0], format!("unexpected `{}`", line.tokens[0].text))),
            None => Ok(()),
        }
    }
}

fn check_arity(file: &str, line: &Line, args: usize) -> Result<(), FormatError> {
    if line.tokens.len() != args + 1 {
        let tok = line.tokens.get(args + 1).copied().unwrap_or(*line.tokens.last().expect("non-empty"));
        return Err(FormatError {
            file: file.into(),
            line: tok.line,
            column: tok.column,
            message: format!("`{}` takes {args} argument(s), found {}", line.tokens[0].text, line.tokens.len() - 1),
        });
    }
    Ok(())
}

pub fn parse_group(text: &str, file: &str) -> Result<FiniteGroup, FormatError> {
    let mut p = Parser::new(file, text);
    let head = p.directive("group", 2)?;
    let name = head[0].text;
    let order: usize = head[1].text.parse().map_err(|_| p.error(head[1], "order must be a positive integer"))?;
    if order == 0 {
        return Err(p.error(head[1], "order must be a positive integer"));
    }
    let mut rows = Vec::with_capacity(order);
    let mut row_lines = Vec::with_capacity(order);
    for r in 0..order {
        row_lines.push(p.peek().map(|l| l.number).unwrap_or(p.last_line + 1));
        rows.push(p.indices(order, order, &format!("row {r}"))?);
    }
    p.expect_end()?;
    FiniteGroup::validate(name, &rows, 0).map_err(|e| {
        let (line, column) = match &e {
            GroupError::NotClosed { a, b, .. } => (row_lines[*a], 2 * b + 1),
            GroupError::NoInverse(x) => (row_lines[*x], 1),
            GroupError::NotAssociative(a, _, _) => (row_lines[*a], 1),
            _ => (head[0].line, 1),
        };
        p.error_at(line, column, e.to_string())
    })
}

pub fn write_group(g: &FiniteGroup) -> String {
    let mut out = format!("group {} {}\n", g.name(), g.order());
    for a in g.elements() {
        let row: Vec<String> = g.elements().map(|b| g.op(a, b).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Resolves a group reference as it appears in a file.
pub trait GroupResolver {
    fn resolve(&self, reference: &str) -> Result<FiniteGroup, String>;
}

/// Resolves `catalog:<name>` from the built-in catalog and anything else as
/// a group file relative to `base`.
pub struct FileResolver {
    pub base: PathBuf,
}

impl GroupResolver for FileResolver {
    fn resolve(&self, reference: &str) -> Result<FiniteGroup, String> {
        if let Some(name) = reference.strip_prefix("catalog:") {
            return catalog::by_name(name).ok_or_else(|| format!("no catalog group named `{name}`"));
        }
        let path = self.base.join(reference);
        let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        parse_group(&text, &path.display().to_string()).map_err(|e| e.to_string())
    }
}

/// Only `catalog:<name>` references.
pub struct CatalogResolver;

impl GroupResolver for CatalogResolver {
    fn resolve(&self, reference: &str) -> Result<FiniteGroup, String> {
        FileResolver { base: PathBuf::new() }
            .resolve(reference)
            .and_then(|g| if reference.starts_with("catalog:") { Ok(g) } else { Err("only catalog groups".into()) })
    }
}

fn group_ref(p: &mut Parser, keyword: &str, resolver: &dyn GroupResolver) -> Result<FiniteGroup, FormatError> {
    let args = p.directive(keyword, 1)?;
    resolver.resolve(args[0].text).map_err(|m| p.error(args[0], m))
}

/// Parses blocks `<kind> <label>` in any order; each label at most once.
fn blocks<'a>(
    p: &mut Parser<'a>,
    mut body: impl FnMut(&mut Parser<'a>, Token<'a>, Token<'a>) -> Result<bool, FormatError>,
) -> Result<(), FormatError> {
    while let Some(line) = p.peek() {
        let (kind, label) = (line.tokens[0], line.tokens.get(1).copied());
        let label = label.ok_or_else(|| p.error(kind, format!("`{}` needs a label", kind.text)))?;
        let file = p.file;
        check_arity(file, line, 1)?;
        p.pos += 1;
        if !body(p, kind, label)? {
            return Err(p.error(kind, format!("unexpected block `{} {}`", kind.text, label.text)));
        }
    }
    Ok(())
}

struct Slot {
    kind: &'static str,
    label: &'static str,
    value: Option<Vec<usize>>,
}

fn fill_slot<'a>(
    p: &mut Parser<'a>,
    slots: &mut [Slot],
    kind: Token<'a>,
    label: Token<'a>,
    shape: impl Fn(&str) -> (usize, usize, usize),
) -> Result<bool, FormatError> {
    let Some(slot) = slots.iter_mut().find(|s| s.kind == kind.text && s.label == label.text) else {
        return Ok(false);
    };
    if slot.value.is_some() {
        return Err(p.error(label, format!("duplicate block `{} {}`", kind.text, label.text)));
    }
    let (rows, len, bound) = shape(slot.label);
    let mut v = Vec::with_capacity(rows * len);
    for r in 0..rows {
        let what = if rows == 1 { label.text.to_string() } else { format!("{} row {r}", label.text) };
        v.extend(p.indices(len, bound, &what)?);
    }
    slot.value = Some(v);
    Ok(true)
}

fn take_slots(p: &Parser, slots: Vec<Slot>) -> Result<Vec<Vec<usize>>, FormatError> {
    slots
        .into_iter()
        .map(|s| {
            s.value.ok_or_else(|| p.error_at(p.last_line + 1, 1, format!("missing block `{} {}`", s.kind, s.label)))
        })
        .collect()
}

fn slots(spec: &[(&'static str, &'static str)]) -> Vec<Slot> {
    spec.iter().map(|&(kind, label)| Slot { kind, label, value: None }).collect()
}

/// A parsed structure together with its declared name.
#[derive(Debug, Clone)]
pub struct NamedStructure {
    pub name: String,
    pub data: BicatData,
}

pub fn parse_structure(text: &str, file: &str, resolver: &dyn GroupResolver) -> Result<NamedStructure, FormatError> {
    let mut p = Parser::new(file, text);
    let name = p.directive("structure", 1)?[0].text.to_string();
    let x = group_ref(&mut p, "x", resolver)?;
    let b = group_ref(&mut p, "b", resolver)?;
    let (nx, nb) = (x.order(), b.order());
    let mut sl = slots(&[
        ("hom", "h"),
        ("endo", "s"),
        ("endo", "t"),
        ("endo", "lambda"),
        ("endo", "rho"),
        ("action", "xi"),
    ]);
    blocks(&mut p, |p, kind, label| {
        fill_slot(p, &mut sl, kind, label, |l| match l {
            "h" => (1, nx, nb),
            "xi" => (nb, nx, nx),
            _ => (1, nx, nx),
        })
    })?;
    let mut v = take_slots(&p, sl)?.into_iter();
    let mut next = || v.next().expect("six blocks");
    let (h, s, t, l, r, xi) = (next(), next(), next(), next(), next(), next());
    let data = BicatData::new(&x, &b, h, s, t, l, r, xi).map_err(|e| p.error_at(1, 1, e.to_string()))?;
    Ok(NamedStructure { name, data })
}

fn write_row(out: &mut String, row: &[usize]) {
    let row: Vec<String> = row.iter().map(|v| v.to_string()).collect();
    out.push_str(&row.join(" "));
    out.push('\n');
}

fn write_rows(out: &mut String, table: &[usize], width: usize) {
    for row in table.chunks(width.max(1)) {
        write_row(out, row);
    }
}

pub fn write_structure(name: &str, d: &BicatData, x_ref: &str, b_ref: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "structure {name}\nx {x_ref}\nb {b_ref}");
    for (kind, label, table) in [
        ("hom", "h", d.h()),
        ("endo", "s", d.s()),
        ("endo", "t", d.t()),
        ("endo", "lambda", d.lambda()),
        ("endo", "rho", d.rho()),
    ] {
        let _ = writeln!(out, "{kind} {label}");
        write_row(&mut out, table);
    }
    out.push_str("action xi\n");
    write_rows(&mut out, d.xi(), d.x().order());
    out
}

#[derive(Debug, Clone)]
pub struct NamedTriple {
    pub name: String,
    pub triple: GpdTriple,
}

/// The triple laws are checked; a violation is reported at the `triple` line.
pub fn parse_triple(text: &str, file: &str, resolver: &dyn GroupResolver) -> Result<NamedTriple, FormatError> {
    let mut p = Parser::new(file, text);
    let name = p.directive("triple", 1)?[0].text.to_string();
    let a = group_ref(&mut p, "group", resolver)?;
    let n = a.order();
    let mut sl = slots(&[("endo", "s"), ("endo", "t")]);
    blocks(&mut p, |p, kind, label| fill_slot(p, &mut sl, kind, label, |_| (1, n, n)))?;
    let mut v = take_slots(&p, sl)?.into_iter();
    let (s, t) = (v.next().expect("s"), v.next().expect("t"));
    let triple = GpdTriple::new(&a, s, t).map_err(|e| p.error_at(1, 1, e.to_string()))?;
    Ok(NamedTriple { name, triple })
}

pub fn write_triple(name: &str, g: &GpdTriple, group_ref: &str) -> String {
    let mut out = format!("triple {name}\ngroup {group_ref}\nendo s\n");
    write_row(&mut out, g.s());
    out.push_str("endo t\n");
    write_row(&mut out, g.t());
    out
}

/// `twocell <name>`, `source <triple file>`, `target <triple file>`,
/// then `hom tau`.
#[derive(Debug, Clone)]
pub struct TwoCellSpec {
    pub name: String,
    pub source: PathBuf,
    pub target: PathBuf,
    pub tau: Vec<usize>,
}

pub fn parse_two_cell(text: &str, file: &str, base: &Path) -> Result<TwoCellSpec, FormatError> {
    let mut p = Parser::new(file, text);
    let name = p.directive("twocell", 1)?[0].text.to_string();
    let src = p.directive("source", 1)?[0];
    let tgt = p.directive("target", 1)?[0];
    p.directive("hom", 1).and_then(|args| {
        if args[0].text == "tau" {
            Ok(())
        } else {
            Err(p.error(args[0], "expected `hom tau`"))
        }
    })?;
    let line = p.next_line("tau")?;
    let mut tau = Vec::new();
    for tok in line.tokens.clone() {
        tau.push(tok.text.parse().map_err(|_| p.error(tok, format!("`{}` is not an index", tok.text)))?);
    }
    p.expect_end()?;
    Ok(TwoCellSpec { name, source: base.join(src.text), target: base.join(tgt.text), tau })
}

pub fn parse_extended(text: &str, file: &str, resolver: &dyn GroupResolver) -> Result<ExtendedData, FormatError> {
    let mut p = Parser::new(file, text);
    p.directive("extended", 1)?;
    let mut groups = Vec::new();
    for label in ["Y", "Z", "B"] {
        let args = p.directive("group", 2)?;
        if args[0].text != label {
            return Err(p.error(args[0], format!("expected group `{label}`")));
        }
        groups.push(resolver.resolve(args[1].text).map_err(|m| p.error(args[1], m))?);
    }
    let (y, z, b) = (groups[0].clone(), groups[1].clone(), groups[2].clone());
    let (ny, nz, nb) = (y.order(), z.order(), b.order());
    let mut sl = slots(&[
        ("hom", "d1"),
        ("hom", "d0"),
        ("hom", "lambda0"),
        ("hom", "rho0"),
        ("action", "phi"),
        ("action", "xiX"),
    ]);
    blocks(&mut p, |p, kind, label| {
        fill_slot(p, &mut sl, kind, label, |l| match l {
            "d1" => (1, ny, nz),
            "d0" => (1, nz, nb),
            "lambda0" | "rho0" => (1, nz, ny),
            "phi" => (nz, ny, ny),
            _ => (nb, ny * nz, ny * nz),
        })
    })?;
    let mut v = take_slots(&p, sl)?.into_iter();
    let mut next = || v.next().expect("six blocks");
    Ok(ExtendedData {
        y,
        z,
        b,
        d1: next(),
        d0: next(),
        lambda0: next(),
        rho0: next(),
        phi: next(),
        xi_x: next(),
    })
}

pub fn write_extended(name: &str, e: &ExtendedData, refs: [&str; 3]) -> String {
    let mut out = format!("extended {name}\ngroup Y {}\ngroup Z {}\ngroup B {}\n", refs[0], refs[1], refs[2]);
    for (label, table) in [("d1", &e.d1), ("d0", &e.d0), ("lambda0", &e.lambda0), ("rho0", &e.rho0)] {
        let _ = writeln!(out, "hom {label}");
        write_row(&mut out, table);
    }
    out.push_str("action phi\n");
    write_rows(&mut out, &e.phi, e.y.order());
    out.push_str("action xiX\n");
    write_rows(&mut out, &e.xi_x, e.x_order());
    out
}

/// Reading a file and parsing it, with the file's directory as the base for
/// group references.
#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Format(#[from] FormatError),
}

fn read(path: &Path) -> Result<(String, FileResolver), LoadError> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io { path: path.display().to_string(), source })?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((text, FileResolver { base }))
}

/// A group file path, or `catalog:<name>`.
pub fn load_group(reference: &str) -> Result<FiniteGroup, LoadError> {
    if reference.starts_with("catalog:") {
        return CatalogResolver.resolve(reference).map_err(|message| {
            FormatError { file: reference.into(), line: 1, column: 1, message }.into()
        });
    }
    let path = Path::new(reference);
    let (text, _) = read(path)?;
    Ok(parse_group(&text, &path.display().to_string())?)
}

pub fn load_structure(path: &Path) -> Result<NamedStructure, LoadError> {
    let (text, resolver) = read(path)?;
    Ok(parse_structure(&text, &path.display().to_string(), &resolver)?)
}

pub fn load_triple(path: &Path) -> Result<NamedTriple, LoadError> {
    let (text, resolver) = read(path)?;
    Ok(parse_triple(&text, &path.display().to_string(), &resolver)?)
}

pub fn load_extended(path: &Path) -> Result<ExtendedData, LoadError> {
    let (text, resolver) = read(path)?;
    Ok(parse_extended(&text, &path.display().to_string(), &resolver)?)
}

/// Displays a table as whitespace-separated indices.
pub struct Row<'a>(pub &'a [usize]);

impl fmt::Display for Row<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
