use crate::budget;
use crate::error::{Error, Result};
use std::fmt;
use std::ops::{Add, Mul, Neg, Range, Sub};
use std::sync::{Arc, OnceLock};

/// Carrier index. Zero is always index 0.
pub type Elem = usize;

/// Largest ring that is stored (or cached) as explicit tables.
pub const TABLE_CAP: usize = 256;
/// Largest ring that may be built from a formula.
pub const STRUCTURED_CAP: usize = 1 << 16;

/// How a ring was built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Cyclic(usize),
    Matrix { k: usize, base: String },
    Product(String, String),
    Quotient { ring: String, ideal_size: usize },
    IdealRing { ring: String },
    Unitalization { ring: String, exponent: usize },
    Subring { ring: String },
    Limit { stages: usize },
    Multiplier { ring: String },
    Table,
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Structure::Cyclic(n) => write!(f, "cyclic {n}"),
            Structure::Matrix { k, base } => write!(f, "matrix {k} over ({base})"),
            Structure::Product(a, b) => write!(f, "product ({a}) ({b})"),
            Structure::Quotient { ring, ideal_size } => {
                write!(f, "quotient of {ring} by an ideal of size {ideal_size}")
            }
            Structure::IdealRing { ring } => write!(f, "ideal-ring in {ring}"),
            Structure::Unitalization { ring, exponent } => {
                write!(f, "unitalize {ring} over Z/{exponent}")
            }
            Structure::Subring { ring } => write!(f, "subring of {ring}"),
            Structure::Limit { stages } => write!(f, "limit of {stages} stages"),
            Structure::Multiplier { ring } => write!(f, "multipliers of {ring}"),
            Structure::Table => write!(f, "table"),
        }
    }
}

#[derive(Clone, Debug)]
struct Tables {
    n: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
}

impl Tables {
    fn build(n: usize, add: impl Fn(Elem, Elem) -> Elem, mul: impl Fn(Elem, Elem) -> Elem, neg: impl Fn(Elem) -> Elem) -> Self {
        let mut t = Tables { n, add: Vec::with_capacity(n * n), mul: Vec::with_capacity(n * n), neg: Vec::with_capacity(n) };
        for a in 0..n {
            for b in 0..n {
                t.add.push(add(a, b) as u8);
                t.mul.push(mul(a, b) as u8);
            }
            t.neg.push(neg(a) as u8);
        }
        t
    }
}

#[derive(Debug)]
enum Kind {
    Cyclic(usize),
    Matrix { base: FiniteRing, k: usize },
    Product(FiniteRing, FiniteRing),
    Unitalized { base: FiniteRing, e: usize },
    Table(Tables),
}

#[derive(Debug)]
struct Inner {
    name: String,
    size: usize,
    kind: Kind,
    unit: Option<Elem>,
    exponent: usize,
    structure: Structure,
    cache: OnceLock<Option<Tables>>,
}

/// An exact finite ring, cheap to clone and safe to share across threads.
#[derive(Clone)]
pub struct FiniteRing {
    inner: Arc<Inner>,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRing({}, {} elements)", self.inner.name, self.inner.size)
    }
}

impl fmt::Display for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.inner.name)
    }
}

/// `ℤ/n` with unit 1.
pub fn make_cyclic(n: usize) -> Result<FiniteRing> {
    if n == 0 || n > TABLE_CAP {
        return Err(Error::OutOfRange(format!("cyclic modulus {n} not in 1..=256")));
    }
    Ok(FiniteRing::raw(format!("Z/{n}"), n, Kind::Cyclic(n), Some(1 % n), n, Structure::Cyclic(n)))
}

/// `k×k` matrices over a unital base, indexed row-major with entry (0,0) most significant.
pub fn make_matrix(base: &FiniteRing, k: usize) -> Result<FiniteRing> {
    let one = base.one()?;
    if k == 0 {
        return Err(Error::OutOfRange("matrix dimension must be positive".into()));
    }
    let size = budget::pow(base.size(), k * k);
    if size > STRUCTURED_CAP as u128 {
        return Err(Error::SizeBound { what: format!("matrix {k} over {}", base.name()), size, cap: STRUCTURED_CAP as u128 });
    }
    let size = size as usize;
    let m = base.size();
    let mut unit = 0;
    for p in 0..k * k {
        let digit = if p / k == p % k { one } else { 0 };
        unit = unit * m + digit;
    }
    let name = format!("M{k}({})", base.name());
    let structure = Structure::Matrix { k, base: base.name().to_string() };
    Ok(FiniteRing::raw(name, size, Kind::Matrix { base: base.clone(), k }, Some(unit), base.exponent(), structure))
}

/// Componentwise product; the pair `(a, b)` has index `a·|B| + b`.
pub fn make_product(a: &FiniteRing, b: &FiniteRing) -> Result<FiniteRing> {
    let size = a.size() as u128 * b.size() as u128;
    if size > STRUCTURED_CAP as u128 {
        return Err(Error::SizeBound { what: format!("{} x {}", a.name(), b.name()), size, cap: STRUCTURED_CAP as u128 });
    }
    let unit = match (a.unit(), b.unit()) {
        (Some(u), Some(v)) => Some(u * b.size() + v),
        _ => None,
    };
    let name = format!("{}x{}", paren(a.name()), paren(b.name()));
    let exponent = lcm(a.exponent(), b.exponent());
    let structure = Structure::Product(a.name().to_string(), b.name().to_string());
    Ok(FiniteRing::raw(name, size as usize, Kind::Product(a.clone(), b.clone()), unit, exponent, structure))
}

/// Dorroh unitalization over `ℤ/e` with `e` the additive exponent.
pub fn unitalize(r: &FiniteRing) -> Result<FiniteRing> {
    unitalize_with_exponent(r, r.exponent())
}

/// Dorroh unitalization `R ⊕ ℤ/e`; `e` must be a multiple of the additive exponent.
///
/// The pair `(x, n)` has index `n·|R| + x`, so `R` occupies the first
/// `|R|` indices and the adjoined unit is index `|R|` (or 0 for the zero ring).
pub fn unitalize_with_exponent(r: &FiniteRing, e: usize) -> Result<FiniteRing> {
    if e == 0 || e % r.exponent() != 0 {
        return Err(Error::OutOfRange(format!("scalar modulus {e} does not kill {}", r.name())));
    }
    let size = r.size() as u128 * e as u128;
    if size > STRUCTURED_CAP as u128 {
        return Err(Error::SizeBound { what: format!("unitalization of {}", r.name()), size, cap: STRUCTURED_CAP as u128 });
    }
    let unit = (1 % e) * r.size();
    let name = format!("{}+", paren(r.name()));
    let structure = Structure::Unitalization { ring: r.name().to_string(), exponent: e };
    Ok(FiniteRing::raw(name, size as usize, Kind::Unitalized { base: r.clone(), e }, Some(unit), e, structure))
}

fn paren(name: &str) -> String {
    if name.chars().all(|c| c.is_alphanumeric() || c == '/' || c == '_') {
        name.to_string()
    } else {
        format!("({name})")
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl FiniteRing {
    fn raw(name: String, size: usize, kind: Kind, unit: Option<Elem>, exponent: usize, structure: Structure) -> Self {
        FiniteRing { inner: Arc::new(Inner { name, size, kind, unit, exponent, structure, cache: OnceLock::new() }) }
    }

    /// Build a ring from flat `n×n` tables and validate every axiom.
    ///
    /// With `declared_unit = None` a two-sided identity is searched for; a
    /// declared unit must actually be one.
    pub fn from_tables(name: impl Into<String>, structure: Structure, add: &[Elem], mul: &[Elem], declared_unit: Option<Elem>) -> Result<Self> {
        let name = name.into();
        let n = (add.len() as f64).sqrt() as usize;
        if n == 0 || n * n != add.len() || mul.len() != add.len() {
            return Err(Error::InvalidRing(format!("{name}: tables are not square or differ in size")));
        }
        if n > TABLE_CAP {
            return Err(Error::SizeBound { what: name, size: n as u128, cap: TABLE_CAP as u128 });
        }
        if let Some(bad) = add.iter().chain(mul).find(|&&v| v >= n) {
            return Err(Error::InvalidRing(format!("{name}: table entry {bad} outside the carrier")));
        }
        let mut neg = vec![usize::MAX; n];
        for x in 0..n {
            for y in 0..n {
                if add[x * n + y] == 0 {
                    neg[x] = y;
                    break;
                }
            }
            if neg[x] == usize::MAX {
                return Err(Error::InvalidRing(format!("{name}: element {x} has no additive inverse")));
            }
        }
        let tables = Tables::build(n, |a, b| add[a * n + b], |a, b| mul[a * n + b], |a| neg[a]);
        let mut ring = FiniteRing::raw(name, n, Kind::Table(tables), declared_unit, 1, structure);
        ring.validate()?;
        let unit = match declared_unit {
            Some(u) => Some(u),
            None => ring.find_unit(),
        };
        let exponent = ring.compute_exponent();
        let inner = Arc::get_mut(&mut ring.inner).expect("fresh ring is uniquely owned");
        inner.unit = unit;
        inner.exponent = exponent;
        Ok(ring)
    }

    /// [`FiniteRing::from_tables`] with the unit fully declared: `None`
    /// states that the ring has no unit, and tables with one are rejected.
    pub fn from_tables_strict(name: impl Into<String>, structure: Structure, add: &[Elem], mul: &[Elem], declared_unit: Option<Elem>) -> Result<Self> {
        let ring = Self::from_tables(name, structure, add, mul, declared_unit)?;
        if let (None, Some(u)) = (declared_unit, ring.unit()) {
            return Err(Error::InvalidRing(format!("{}: declared without unit, but {u} is one", ring.name())));
        }
        Ok(ring)
    }

    /// Same ring under another name.
    pub fn renamed(&self, name: impl Into<String>) -> Self {
        let kind = match &self.inner.kind {
            Kind::Cyclic(n) => Kind::Cyclic(*n),
            Kind::Matrix { base, k } => Kind::Matrix { base: base.clone(), k: *k },
            Kind::Product(a, b) => Kind::Product(a.clone(), b.clone()),
            Kind::Unitalized { base, e } => Kind::Unitalized { base: base.clone(), e: *e },
            Kind::Table(t) => Kind::Table(t.clone()),
        };
        let i = &self.inner;
        FiniteRing::raw(name.into(), i.size, kind, i.unit, i.exponent, i.structure.clone())
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn structure(&self) -> &Structure {
        &self.inner.structure
    }

    pub fn size(&self) -> usize {
        self.inner.size
    }

    pub fn elements(&self) -> Range<Elem> {
        0..self.inner.size
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn unit(&self) -> Option<Elem> {
        self.inner.unit
    }

    pub fn is_unital(&self) -> bool {
        self.inner.unit.is_some()
    }

    pub fn one(&self) -> Result<Elem> {
        self.inner.unit.ok_or_else(|| Error::NotUnital(self.name().to_string()))
    }

    /// Smallest `e ≥ 1` with `e·x = 0` for every `x`.
    pub fn exponent(&self) -> usize {
        self.inner.exponent
    }

    /// Identity of the underlying allocation.
    pub fn same(&self, other: &FiniteRing) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    pub fn el(&self, i: Elem) -> RingElement<'_> {
        debug_assert!(i < self.size());
        RingElement { ring: self, index: i }
    }

    pub fn one_el(&self) -> Result<RingElement<'_>> {
        Ok(self.el(self.one()?))
    }

    pub fn zero_el(&self) -> RingElement<'_> {
        self.el(0)
    }

    fn tables(&self) -> Option<&Tables> {
        match &self.inner.kind {
            Kind::Table(t) => Some(t),
            _ => self
                .inner
                .cache
                .get_or_init(|| {
                    let n = self.size();
                    (n <= TABLE_CAP).then(|| Tables::build(n, |a, b| self.add_formula(a, b), |a, b| self.mul_formula(a, b), |a| self.neg_formula(a)))
                })
                .as_ref(),
        }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match self.tables() {
            Some(t) => t.add[a * t.n + b] as Elem,
            None => self.add_formula(a, b),
        }
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match self.tables() {
            Some(t) => t.mul[a * t.n + b] as Elem,
            None => self.mul_formula(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        match self.tables() {
            Some(t) => t.neg[a] as Elem,
            None => self.neg_formula(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// `k·a` by double-and-add.
    pub fn smul(&self, mut k: usize, a: Elem) -> Elem {
        let (mut acc, mut base) = (0, a);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    /// Product of a slice, left to right; empty product needs a unit.
    pub fn product(&self, xs: &[Elem]) -> Result<Elem> {
        match xs.split_first() {
            None => self.one(),
            Some((&first, rest)) => Ok(rest.iter().fold(first, |acc, &x| self.mul(acc, x))),
        }
    }

    pub fn sum(&self, xs: impl IntoIterator<Item = Elem>) -> Elem {
        xs.into_iter().fold(0, |acc, x| self.add(acc, x))
    }

    /// Inner product `Σ aᵢbᵢ` of two rows.
    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        a.iter().zip(b).fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// Flat copies of the addition and multiplication tables.
    pub fn table_copies(&self) -> Result<(Vec<Elem>, Vec<Elem>)> {
        let n = self.size();
        if n > TABLE_CAP {
            return Err(Error::SizeBound { what: format!("tables of {}", self.name()), size: n as u128, cap: TABLE_CAP as u128 });
        }
        let mut add = Vec::with_capacity(n * n);
        let mut mul = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                add.push(self.add(a, b));
                mul.push(self.mul(a, b));
            }
        }
        Ok((add, mul))
    }

    /// Matrix entries (row-major) of an element of a matrix ring.
    pub fn matrix_entries(&self, a: Elem) -> Option<Vec<Elem>> {
        match &self.inner.kind {
            Kind::Matrix { base, k } => Some(decode(a, base.size(), k * k)),
            _ => None,
        }
    }

    pub fn matrix_from_entries(&self, entries: &[Elem]) -> Option<Elem> {
        match &self.inner.kind {
            Kind::Matrix { base, k } if entries.len() == k * k => Some(encode(entries, base.size())),
            _ => None,
        }
    }

    /// The two factors of a product ring.
    pub fn factors(&self) -> Option<(&FiniteRing, &FiniteRing)> {
        match &self.inner.kind {
            Kind::Product(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// The base ring and scalar modulus of a unitalization.
    pub fn unitalization_parts(&self) -> Option<(&FiniteRing, usize)> {
        match &self.inner.kind {
            Kind::Unitalized { base, e } => Some((base, *e)),
            _ => None,
        }
    }

    fn add_formula(&self, a: Elem, b: Elem) -> Elem {
        match &self.inner.kind {
            Kind::Cyclic(n) => (a + b) % n,
            Kind::Matrix { base, k } => {
                let (x, y) = (decode(a, base.size(), k * k), decode(b, base.size(), k * k));
                let z: Vec<Elem> = x.iter().zip(&y).map(|(&p, &q)| base.add(p, q)).collect();
                encode(&z, base.size())
            }
            Kind::Product(r, s) => {
                let m = s.size();
                r.add(a / m, b / m) * m + s.add(a % m, b % m)
            }
            Kind::Unitalized { base, e } => {
                let m = base.size();
                ((a / m + b / m) % e) * m + base.add(a % m, b % m)
            }
            Kind::Table(t) => t.add[a * t.n + b] as Elem,
        }
    }

    fn neg_formula(&self, a: Elem) -> Elem {
        match &self.inner.kind {
            Kind::Cyclic(n) => (n - a) % n,
            Kind::Matrix { base, k } => {
                let z: Vec<Elem> = decode(a, base.size(), k * k).into_iter().map(|p| base.neg(p)).collect();
                encode(&z, base.size())
            }
            Kind::Product(r, s) => {
                let m = s.size();
                r.neg(a / m) * m + s.neg(a % m)
            }
            Kind::Unitalized { base, e } => {
                let m = base.size();
                ((e - a / m) % e) * m + base.neg(a % m)
            }
            Kind::Table(t) => t.neg[a] as Elem,
        }
    }

    fn mul_formula(&self, a: Elem, b: Elem) -> Elem {
        match &self.inner.kind {
            Kind::Cyclic(n) => (a * b) % n,
            Kind::Matrix { base, k } => {
                let k = *k;
                let (x, y) = (decode(a, base.size(), k * k), decode(b, base.size(), k * k));
                let mut z = vec![0; k * k];
                for i in 0..k {
                    for j in 0..k {
                        let mut acc = 0;
                        for l in 0..k {
                            acc = base.add(acc, base.mul(x[i * k + l], y[l * k + j]));
                        }
                        z[i * k + j] = acc;
                    }
                }
                encode(&z, base.size())
            }
            Kind::Product(r, s) => {
                let m = s.size();
                r.mul(a / m, b / m) * m + s.mul(a % m, b % m)
            }
            Kind::Unitalized { base, e } => {
                // (x,n)(y,m) = (xy + m·x + n·y, nm)
                let sz = base.size();
                let (x, n, y, m) = (a % sz, a / sz, b % sz, b / sz);
                let part = base.add(base.mul(x, y), base.add(base.smul(m, x), base.smul(n, y)));
                ((n * m) % e) * sz + part
            }
            Kind::Table(t) => t.mul[a * t.n + b] as Elem,
        }
    }

    fn find_unit(&self) -> Option<Elem> {
        self.elements().find(|&e| self.elements().all(|x| self.mul(e, x) == x && self.mul(x, e) == x))
    }

    fn compute_exponent(&self) -> usize {
        let mut e = 1;
        for x in self.elements() {
            let (mut k, mut acc) = (1, x);
            while acc != 0 {
                acc = self.add(acc, x);
                k += 1;
            }
            e = lcm(e, k);
        }
        e
    }

    /// Exhaustive check of the ring axioms (rings with at most 256 elements).
    ///
    /// Larger structured rings are correct by construction and are not rescanned.
    pub fn validate(&self) -> Result<()> {
        let n = self.size();
        if n > TABLE_CAP {
            return Ok(());
        }
        budget::charge(6 * (n as u128).pow(3))?;
        let bad = |msg: String| Err(Error::InvalidRing(format!("{}: {msg}", self.name())));
        let mut seen = vec![usize::MAX; n];
        for a in 0..n {
            if self.add(0, a) != a || self.add(a, 0) != a {
                return bad(format!("0 is not an additive identity at {a}"));
            }
            if self.add(a, self.neg(a)) != 0 {
                return bad(format!("{} is not the negative of {a}", self.neg(a)));
            }
            for b in 0..n {
                let s = self.add(a, b);
                if seen[s] == a {
                    return bad(format!("addition row {a} repeats the value {s}"));
                }
                seen[s] = a;
                if s != self.add(b, a) {
                    return bad(format!("addition is not commutative at ({a}, {b})"));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let (ab_add, ab_mul) = (self.add(a, b), self.mul(a, b));
                for c in 0..n {
                    if self.add(ab_add, c) != self.add(a, self.add(b, c)) {
                        return bad(format!("addition is not associative at ({a}, {b}, {c})"));
                    }
                    if self.mul(ab_mul, c) != self.mul(a, self.mul(b, c)) {
                        return bad(format!("multiplication is not associative at ({a}, {b}, {c})"));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(ab_mul, self.mul(a, c)) {
                        return bad(format!("left distributivity fails at ({a}, {b}, {c})"));
                    }
                    if self.mul(self.add(a, b), c) != self.add(self.mul(a, c), self.mul(b, c)) {
                        return bad(format!("right distributivity fails at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        if let Some(u) = self.unit() {
            if let Some(x) = self.elements().find(|&x| self.mul(u, x) != x || self.mul(x, u) != x) {
                return bad(format!("declared unit {u} fails at {x}"));
            }
        }
        Ok(())
    }

    /// A minimal-by-scan generating set of the additive group.
    pub fn additive_generators(&self) -> Vec<Elem> {
        let mut in_span = vec![false; self.size()];
        in_span[0] = true;
        let mut span = vec![0];
        let mut gens = Vec::new();
        for x in self.elements() {
            if in_span[x] {
                continue;
            }
            gens.push(x);
            let mut frontier = span.clone();
            while let Some(s) = frontier.pop() {
                let t = self.add(s, x);
                if !in_span[t] {
                    in_span[t] = true;
                    span.push(t);
                    frontier.push(t);
                }
            }
        }
        gens
    }

    /// Every `e` with `e² = e`.
    pub fn idempotent_list(&self) -> Vec<Elem> {
        self.elements().filter(|&e| self.mul(e, e) == e).collect()
    }
}

fn decode(mut a: Elem, m: usize, len: usize) -> Vec<Elem> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = a % m;
        a /= m;
    }
    out
}

fn encode(digits: &[Elem], m: usize) -> Elem {
    digits.iter().fold(0, |acc, &d| acc * m + d)
}

/// An element together with its ring, for writing identities with operators.
#[derive(Clone, Copy)]
pub struct RingElement<'r> {
    ring: &'r FiniteRing,
    index: Elem,
}

impl<'r> RingElement<'r> {
    pub fn index(self) -> Elem {
        self.index
    }

    pub fn ring(self) -> &'r FiniteRing {
        self.ring
    }

    pub fn is_zero(self) -> bool {
        self.index == 0
    }

    pub fn square(self) -> Self {
        self * self
    }

    pub fn times(self, k: usize) -> Self {
        self.ring.el(self.ring.smul(k, self.index))
    }
}

impl PartialEq for RingElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.index == other.index && self.ring.same(other.ring)
    }
}

impl Eq for RingElement<'_> {}

impl fmt::Debug for RingElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.index, self.ring.name())
    }
}

impl fmt::Display for RingElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $ring_fn:ident) => {
        impl<'r> $tr for RingElement<'r> {
            type Output = RingElement<'r>;
            fn $method(self, rhs: Self) -> Self {
                debug_assert!(self.ring.same(rhs.ring), "mixing elements of different rings");
                RingElement { ring: self.ring, index: self.ring.$ring_fn(self.index, rhs.index) }
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

impl<'r> Neg for RingElement<'r> {
    type Output = RingElement<'r>;
    fn neg(self) -> Self {
        RingElement { ring: self.ring, index: self.ring.neg(self.index) }
    }
}
