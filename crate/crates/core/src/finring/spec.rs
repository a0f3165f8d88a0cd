//! Parser for the line-oriented ring-spec language.
//!
//! ```text
//! ring NAME = cyclic INT | matrix INT over (EXPR) | product EXPR EXPR
//!           | quotient NAME / NAME | unitalize EXPR | ideal-ring NAME
//!           | subring NAME { INT, ... }
//! ideal NAME in NAME = { INT, ... } | generated { INT, ... }
//! morphism NAME : NAME -> NAME = canonical | table [ INT -> INT, ... ] [unital]
//! tower NAME = [ NAME <- NAME <- ... ]
//! lazy NAME = finsupport over (EXPR) | finmatrix over (EXPR)
//! ```
//!
//! `#` starts a comment. The rightmost ring of a tower is its top stage.

use super::ideal::{ideal_as_ring_with_embedding, ideal_generated, quotient, subring, Ideal};
use super::morphism::RingMorphism;
use super::ring::{make_cyclic, make_matrix, make_product, unitalize, Elem, FiniteRing, Structure};
use crate::error::{Error, Result};
use crate::lazyring::LazyRing;
use crate::tower::Tower;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(usize),
    Sym(&'static str),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
}

const SYMBOLS: [&str; 12] = ["->", "<-", "=", "(", ")", "{", "}", "[", "]", ",", "/", ":"];

fn lex(line: &str, lineno: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let col = i + 1;
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let value = text.parse().map_err(|_| Error::Syntax { line: lineno, col, msg: format!("integer `{text}` too large") })?;
            out.push(Token { tok: Tok::Int(value), col });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() {
                let d = chars[i];
                let hyphen_word = d == '-' && chars.get(i + 1).is_some_and(|n| n.is_alphabetic());
                if d.is_alphanumeric() || d == '_' || d == '\'' || hyphen_word {
                    i += 1;
                } else {
                    break;
                }
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), col });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                out.push(Token { tok: Tok::Sym(s), col });
                i += s.len();
            }
            None => return Err(Error::Syntax { line: lineno, col, msg: format!("unexpected character `{c}`") }),
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.col)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { line: self.line, col: self.col(), msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn sym(&mut self, s: &str) -> Result<()> {
        match self.peek() {
            Some(Tok::Sym(t)) if *t == s => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(format!("expected `{s}`")),
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(t)) if *t == s)
    }

    fn keyword(&mut self, k: &str) -> Result<()> {
        match self.peek() {
            Some(Tok::Ident(t)) if t == k => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(format!("expected `{k}`")),
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(t)) => {
                let t = t.clone();
                self.pos += 1;
                Ok(t)
            }
            _ => self.err("expected a name"),
        }
    }

    fn int(&mut self) -> Result<usize> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(v)
            }
            _ => self.err("expected an integer"),
        }
    }

    fn int_list(&mut self, open: &str, close: &str) -> Result<Vec<usize>> {
        self.sym(open)?;
        let mut out = Vec::new();
        if self.is_sym(close) {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(self.int()?);
            if self.is_sym(",") {
                self.pos += 1;
            } else {
                self.sym(close)?;
                return Ok(out);
            }
        }
    }

    fn done(&self) -> Result<()> {
        if self.pos < self.toks.len() {
            return self.err("unexpected trailing input");
        }
        Ok(())
    }
}

/// Everything declared in a spec file, by name, in declaration order.
#[derive(Clone, Debug, Default)]
pub struct Env {
    rings: BTreeMap<String, FiniteRing>,
    ideals: BTreeMap<String, Ideal>,
    morphisms: BTreeMap<String, RingMorphism>,
    towers: BTreeMap<String, Tower>,
    lazies: BTreeMap<String, LazyRing>,
    order: Vec<String>,
    canonical: BTreeMap<String, (String, Vec<Elem>)>,
}

impl Env {
    pub fn ring(&self, name: &str) -> Option<&FiniteRing> {
        self.rings.get(name)
    }

    pub fn ideal(&self, name: &str) -> Option<&Ideal> {
        self.ideals.get(name)
    }

    pub fn morphism(&self, name: &str) -> Option<&RingMorphism> {
        self.morphisms.get(name)
    }

    pub fn tower(&self, name: &str) -> Option<&Tower> {
        self.towers.get(name)
    }

    pub fn lazy(&self, name: &str) -> Option<&LazyRing> {
        self.lazies.get(name)
    }

    /// Declared names in order.
    pub fn names(&self) -> &[String] {
        &self.order
    }

    pub fn rings(&self) -> impl Iterator<Item = (&str, &FiniteRing)> {
        self.order.iter().filter_map(|n| self.rings.get(n).map(|r| (n.as_str(), r)))
    }

    pub fn ideals(&self) -> impl Iterator<Item = (&str, &Ideal)> {
        self.order.iter().filter_map(|n| self.ideals.get(n).map(|r| (n.as_str(), r)))
    }

    pub fn morphisms(&self) -> impl Iterator<Item = (&str, &RingMorphism)> {
        self.order.iter().filter_map(|n| self.morphisms.get(n).map(|r| (n.as_str(), r)))
    }

    pub fn towers(&self) -> impl Iterator<Item = (&str, &Tower)> {
        self.order.iter().filter_map(|n| self.towers.get(n).map(|r| (n.as_str(), r)))
    }

    fn declare(&mut self, name: &str) -> Result<()> {
        if self.order.iter().any(|n| n == name) {
            return Err(Error::Semantic { name: name.into(), msg: "name declared twice".into() });
        }
        self.order.push(name.to_string());
        Ok(())
    }

    fn need_ring(&self, name: &str) -> Result<&FiniteRing> {
        self.rings.get(name).ok_or_else(|| Error::Semantic { name: name.into(), msg: "no ring by this name".into() })
    }

    /// The canonical map `source -> target`, if one is known.
    pub fn canonical_morphism(&self, source: &str, target: &str) -> Result<RingMorphism> {
        let sem = |msg: String| Error::Semantic { name: format!("{source} -> {target}"), msg };
        let a = self.need_ring(source)?;
        let b = self.need_ring(target)?;
        let unital = a.is_unital() && b.is_unital();
        if source == target {
            return Ok(RingMorphism::identity(a));
        }
        if let Some((parent, map)) = self.canonical.get(target) {
            if parent == source && !matches!(b.structure(), Structure::IdealRing { .. } | Structure::Subring { .. }) {
                return RingMorphism::new(a, b, map.clone(), unital).map_err(|e| sem(e.to_string()));
            }
        }
        if let (Structure::Cyclic(n), Structure::Cyclic(m)) = (a.structure(), b.structure()) {
            if n % m == 0 {
                return RingMorphism::from_fn(a, b, |x| x % m, unital).map_err(|e| sem(e.to_string()));
            }
        }
        if let Some((parent, map)) = self.canonical.get(source) {
            if parent == target && matches!(a.structure(), Structure::IdealRing { .. } | Structure::Subring { .. }) {
                return RingMorphism::new(a, b, map.clone(), false).map_err(|e| sem(e.to_string()));
            }
        }
        Err(sem("no canonical morphism between these rings".into()))
    }

    fn ring_expr(&mut self, c: &mut Cursor, name: &str) -> Result<(FiniteRing, Option<(String, Vec<Elem>)>)> {
        let sem = |e: Error| match e {
            Error::Semantic { .. } | Error::Syntax { .. } => e,
            other => Error::Semantic { name: name.to_string(), msg: other.to_string() },
        };
        if c.is_sym("(") {
            c.pos += 1;
            let out = self.ring_expr(c, name)?;
            c.sym(")")?;
            return Ok(out);
        }
        let word = c.ident()?;
        match word.as_str() {
            "cyclic" => {
                let n = c.int()?;
                Ok((make_cyclic(n).map_err(sem)?, None))
            }
            "matrix" => {
                let k = c.int()?;
                c.keyword("over")?;
                let (base, _) = self.ring_expr(c, name)?;
                Ok((make_matrix(&base, k).map_err(sem)?, None))
            }
            "product" => {
                let (a, _) = self.ring_expr(c, name)?;
                let (b, _) = self.ring_expr(c, name)?;
                Ok((make_product(&a, &b).map_err(sem)?, None))
            }
            "quotient" => {
                let rname = c.ident()?;
                c.sym("/")?;
                let iname = c.ident()?;
                let ring = self.need_ring(&rname)?.clone();
                let ideal = self.ideals.get(&iname).ok_or_else(|| Error::Semantic { name: iname.clone(), msg: "no ideal by this name".into() })?;
                if !ideal.ring().same(&ring) {
                    return Err(Error::Semantic { name: iname, msg: format!("not an ideal of `{rname}`") });
                }
                let (q, pi) = quotient(&ring, ideal).map_err(sem)?;
                Ok((q, Some((rname, pi.map().to_vec()))))
            }
            "unitalize" => {
                let (r, _) = self.ring_expr(c, name)?;
                Ok((unitalize(&r).map_err(sem)?, None))
            }
            "ideal-ring" => {
                let iname = c.ident()?;
                let ideal = self.ideals.get(&iname).ok_or_else(|| Error::Semantic { name: iname.clone(), msg: "no ideal by this name".into() })?;
                let parent = self.rings.iter().find(|(_, r)| r.same(ideal.ring())).map(|(n, _)| n.clone()).unwrap_or_default();
                let (r, incl) = ideal_as_ring_with_embedding(ideal).map_err(sem)?;
                Ok((r, Some((parent, incl.map().to_vec()))))
            }
            "subring" => {
                let rname = c.ident()?;
                let members = c.int_list("{", "}")?;
                let ring = self.need_ring(&rname)?.clone();
                let (r, incl) = subring(&ring, &members).map_err(sem)?;
                Ok((r, Some((rname, incl.map().to_vec()))))
            }
            other => Ok((self.need_ring(other)?.clone(), None)),
        }
    }

    fn statement(&mut self, c: &mut Cursor) -> Result<()> {
        let head = c.ident()?;
        match head.as_str() {
            "ring" => {
                let name = c.ident()?;
                c.sym("=")?;
                let (ring, canon) = self.ring_expr(c, &name)?;
                c.done()?;
                self.declare(&name)?;
                self.rings.insert(name.clone(), ring.renamed(name.clone()));
                if let Some(canon) = canon {
                    self.canonical.insert(name, canon);
                }
            }
            "ideal" => {
                let name = c.ident()?;
                c.keyword("in")?;
                let rname = c.ident()?;
                c.sym("=")?;
                let ring = self.need_ring(&rname)?.clone();
                let ideal = if matches!(c.peek(), Some(Tok::Ident(w)) if w == "generated") {
                    c.pos += 1;
                    let gens = c.int_list("{", "}")?;
                    ideal_generated(&ring, &gens)
                } else {
                    let members = c.int_list("{", "}")?;
                    Ideal::new(&ring, members)
                }
                .map_err(|e| Error::Semantic { name: name.clone(), msg: e.to_string() })?;
                c.done()?;
                self.declare(&name)?;
                self.ideals.insert(name, ideal);
            }
            "morphism" => {
                let name = c.ident()?;
                c.sym(":")?;
                let src = c.ident()?;
                c.sym("->")?;
                let dst = c.ident()?;
                c.sym("=")?;
                let kind = c.ident()?;
                let m = match kind.as_str() {
                    "canonical" => {
                        c.done()?;
                        self.canonical_morphism(&src, &dst).map_err(|e| match e {
                            Error::Semantic { msg, .. } => Error::Semantic { name: name.clone(), msg },
                            other => other,
                        })?
                    }
                    "table" => {
                        let a = self.need_ring(&src)?.clone();
                        let b = self.need_ring(&dst)?.clone();
                        c.sym("[")?;
                        let mut map = vec![None; a.size()];
                        if !c.is_sym("]") {
                            loop {
                                let x = c.int()?;
                                c.sym("->")?;
                                let y = c.int()?;
                                let slot = map.get_mut(x).ok_or_else(|| Error::Semantic { name: name.clone(), msg: format!("{x} is not an element of `{src}`") })?;
                                if slot.replace(y).is_some() {
                                    return Err(Error::Semantic { name: name.clone(), msg: format!("{x} mapped twice") });
                                }
                                if c.is_sym(",") {
                                    c.pos += 1;
                                } else {
                                    break;
                                }
                            }
                        }
                        c.sym("]")?;
                        let unital = matches!(c.peek(), Some(Tok::Ident(w)) if w == "unital");
                        if unital {
                            c.pos += 1;
                        }
                        c.done()?;
                        let map: Vec<Elem> = map
                            .into_iter()
                            .enumerate()
                            .map(|(x, v)| v.ok_or_else(|| Error::Semantic { name: name.clone(), msg: format!("no image given for {x}") }))
                            .collect::<Result<_>>()?;
                        RingMorphism::new(&a, &b, map, unital).map_err(|e| Error::Semantic { name: name.clone(), msg: e.to_string() })?
                    }
                    _ => return c.err("expected `canonical` or `table`"),
                };
                self.declare(&name)?;
                self.morphisms.insert(name, m);
            }
            "tower" => {
                let name = c.ident()?;
                c.sym("=")?;
                c.sym("[")?;
                let mut stages = vec![c.ident()?];
                while c.is_sym("<-") {
                    c.pos += 1;
                    stages.push(c.ident()?);
                }
                c.sym("]")?;
                c.done()?;
                let rings: Vec<FiniteRing> = stages.iter().map(|s| self.need_ring(s).cloned()).collect::<Result<_>>()?;
                let mut connectors = Vec::new();
                for w in stages.windows(2) {
                    let declared = self.order.iter().filter_map(|n| self.morphisms.get(n)).find(|m| m.source().name() == w[1] && m.target().name() == w[0]);
                    let m = match declared {
                        Some(m) => m.clone(),
                        None => self.canonical_morphism(&w[1], &w[0]).map_err(|e| Error::Semantic { name: name.clone(), msg: e.to_string() })?,
                    };
                    connectors.push(m);
                }
                let tower = Tower::new(rings, connectors).map_err(|e| Error::Semantic { name: name.clone(), msg: e.to_string() })?;
                self.declare(&name)?;
                self.towers.insert(name, tower);
            }
            "lazy" => {
                let name = c.ident()?;
                c.sym("=")?;
                let kind = c.ident()?;
                c.keyword("over")?;
                let (base, _) = self.ring_expr(c, &name)?;
                c.done()?;
                let lazy = match kind.as_str() {
                    "finsupport" => LazyRing::finsupport(&base),
                    "finmatrix" => LazyRing::finmatrix(&base),
                    _ => return Err(Error::Semantic { name, msg: format!("unknown lazy family `{kind}`") }),
                }
                .map_err(|e| Error::Semantic { name: name.clone(), msg: e.to_string() })?;
                self.declare(&name)?;
                self.lazies.insert(name, lazy);
            }
            other => return Err(Error::Syntax { line: c.line, col: 1, msg: format!("unknown declaration `{other}`") }),
        }
        Ok(())
    }
}

/// Parse and validate a whole spec text.
pub fn parse_spec(text: &str) -> Result<Env> {
    let mut env = Env::default();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let toks = lex(line, lineno)?;
        if toks.is_empty() {
            continue;
        }
        let mut c = Cursor { toks: &toks, pos: 0, line: lineno, end_col: line.chars().count() + 1 };
        env.statement(&mut c)?;
    }
    Ok(env)
}
