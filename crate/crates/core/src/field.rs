//! Exact arithmetic in the tower F_p ⊆ F_q ⊆ F_{q^m}, q = p^e.
//!
//! Elements of F_{q^m} are stored as their canonical integer encoding: the
//! base-q digit string (little-endian) of the F_q-coefficient vector, where
//! each F_q coefficient is itself the base-p digit value of its
//! F_p-coefficient vector. This yields a unique integer in [0, q^m) and makes
//! encode/decode the identity on codes.
//!
//! Defining polynomials are chosen deterministically: the monic irreducible
//! polynomial of the required degree whose non-leading coefficient vector has
//! the smallest integer encoding (low-degree coefficients least significant).
//! The generator is the smallest-encoding primitive element.

use std::sync::Arc;

use crate::config::{pow_log2, Config};
use crate::error::{Error, Result};

/// An element of F_{q^m}, stored as its canonical integer encoding.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Fqm(pub(crate) u64);

impl Fqm {
    /// The canonical integer encoding in [0, q^m).
    pub fn code(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Scalar field operations on integer codes, shared by the linear algebra
/// routines for both F_q and F_{q^m}.
pub(crate) trait Arith {
    fn size(&self) -> u64;
    fn add(&self, a: u64, b: u64) -> u64;
    fn neg(&self, a: u64) -> u64;
    fn mul(&self, a: u64, b: u64) -> u64;
    /// Multiplicative inverse; must not be called with 0.
    fn inv(&self, a: u64) -> u64;
    fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }
}

const TOP_TABLE_LIMIT: u64 = 1 << 16;

/// The tower F_p ⊆ F_q ⊆ F_{q^m} with fixed defining polynomials, generator
/// and acceleration tables. Immutable after creation; operations are pure, so
/// a context can be shared freely across threads.
pub struct FieldContext {
    p: u64,
    e: u32,
    m: u32,
    q: u64,
    q_m: u64,
    /// Monic defining polynomial of F_q over F_p, low-degree first, length e+1.
    fq_poly: Vec<u64>,
    /// Monic defining polynomial of F_{q^m} over F_q, low-degree first, length m+1.
    fqm_poly: Vec<u64>,
    /// x^{m+j} mod fqm_poly for j in 0..m-1, as F_q coefficient rows.
    red_rows: Vec<Vec<u64>>,
    fq_exp: Vec<u32>,
    fq_log: Vec<u32>,
    top_exp: Option<Vec<u32>>,
    top_log: Option<Vec<u32>>,
    generator: Fqm,
    /// Matrix of x ↦ x^q over F_q: column j holds the coordinates of (β^j)^q.
    frob: Vec<u64>,
}

impl std::fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FieldContext(p={}, e={}, m={})", self.p, self.e, self.m)
    }
}

impl FieldContext {
    /// Builds the field tower for q = p^e and extension degree m with the
    /// default guards.
    pub fn new(p: u64, e: u32, m: u32) -> Result<Arc<FieldContext>> {
        Self::with_config(p, e, m, &Config::default())
    }

    pub fn with_config(p: u64, e: u32, m: u32, cfg: &Config) -> Result<Arc<FieldContext>> {
        if e == 0 || m == 0 {
            return Err(Error::BadArgs("extension degrees must be positive".into()));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        cfg.check_field("field construction", pow_log2(p, e * m))?;
        let q = p.pow(e);
        let q_m = q.pow(m);

        let fq_poly = if e == 1 {
            vec![0, 1]
        } else {
            lex_least_irreducible(&ModP { p }, e as usize)?
        };

        // F_q acceleration tables, bootstrapped through slow polynomial
        // arithmetic over F_p.
        let slow = FqSlow { p, e, q, poly: fq_poly.clone() };
        let (fq_exp, fq_log) = build_exp_log(q, |a, b| slow.mul(a, b))?;

        let fq_tab = FqTab { p, e, q, exp: &fq_exp, log: &fq_log };
        let fqm_poly = if m == 1 {
            vec![0, 1]
        } else {
            lex_least_irreducible(&fq_tab, m as usize)?
        };
        let red_rows = reduction_rows(&fq_tab, &fqm_poly, m as usize);

        let mut ctx = FieldContext {
            p,
            e,
            m,
            q,
            q_m,
            fq_poly,
            fqm_poly,
            red_rows,
            fq_exp,
            fq_log,
            top_exp: None,
            top_log: None,
            generator: Fqm(0),
            frob: Vec::new(),
        };

        ctx.generator = ctx.find_generator()?;
        if q_m <= TOP_TABLE_LIMIT {
            let g = ctx.generator.0;
            let mut exp = vec![0u32; (q_m - 1) as usize];
            let mut log = vec![u32::MAX; q_m as usize];
            let mut cur = 1u64;
            for (i, slot) in exp.iter_mut().enumerate() {
                *slot = cur as u32;
                if log[cur as usize] != u32::MAX {
                    return Err(Error::InternalIrreducibilityFailure);
                }
                log[cur as usize] = i as u32;
                cur = ctx.mul_schoolbook(cur, g);
            }
            if cur != 1 {
                return Err(Error::InternalIrreducibilityFailure);
            }
            ctx.top_exp = Some(exp);
            ctx.top_log = Some(log);
        }

        // Frobenius x ↦ x^q as an m×m matrix over F_q (column-major);
        // column j holds the coordinates of (β^j)^q, where β^j has code q^j.
        let mut frob = vec![0u64; (m * m) as usize];
        for j in 0..m as usize {
            let basis_power = Fqm(q.pow(j as u32));
            let coords = ctx.fq_coords(ctx.pow(basis_power, q));
            for i in 0..m as usize {
                frob[j * m as usize + i] = coords[i];
            }
        }
        ctx.frob = frob;

        Ok(Arc::new(ctx))
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    /// q = p^e.
    pub fn q(&self) -> u64 {
        self.q
    }
    /// q^m, the number of field elements.
    pub fn order(&self) -> u64 {
        self.q_m
    }
    /// The chosen primitive element (smallest encoding).
    pub fn generator(&self) -> Fqm {
        self.generator
    }
    /// Defining polynomial of F_q over F_p (low-degree first, monic).
    pub fn fq_defining_poly(&self) -> &[u64] {
        &self.fq_poly
    }
    /// Defining polynomial of F_{q^m} over F_q (low-degree first, monic).
    pub fn fqm_defining_poly(&self) -> &[u64] {
        &self.fqm_poly
    }

    pub fn same_field(&self, other: &FieldContext) -> bool {
        self.p == other.p && self.e == other.e && self.m == other.m
    }

    pub fn zero(&self) -> Fqm {
        Fqm(0)
    }
    pub fn one(&self) -> Fqm {
        Fqm(1)
    }

    /// Decodes an integer in [0, q^m) to a field element.
    pub fn element(&self, code: u64) -> Result<Fqm> {
        if code < self.q_m {
            Ok(Fqm(code))
        } else {
            Err(Error::BadArgs(format!(
                "element code {code} out of range [0, {})",
                self.q_m
            )))
        }
    }

    /// All q^m elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Fqm> {
        (0..self.q_m).map(Fqm)
    }

    pub fn add(&self, a: Fqm, b: Fqm) -> Fqm {
        Fqm(self.add_code(a.0, b.0))
    }

    pub fn sub(&self, a: Fqm, b: Fqm) -> Fqm {
        Fqm(self.add_code(a.0, self.neg_code(b.0)))
    }

    pub fn neg(&self, a: Fqm) -> Fqm {
        Fqm(self.neg_code(a.0))
    }

    pub fn mul(&self, a: Fqm, b: Fqm) -> Fqm {
        Fqm(self.mul_code(a.0, b.0))
    }

    pub fn inv(&self, a: Fqm) -> Result<Fqm> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Fqm(self.inv_code(a.0)))
    }

    pub fn pow(&self, a: Fqm, mut exp: u64) -> Fqm {
        if exp == 0 {
            return Fqm(1);
        }
        let mut base = a.0;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_code(acc, base);
            }
            base = self.mul_code(base, base);
            exp >>= 1;
        }
        Fqm(acc)
    }

    /// The Frobenius endomorphism x ↦ x^q of F_{q^m} over F_q.
    pub fn frobenius_q(&self, a: Fqm) -> Fqm {
        let m = self.m as usize;
        let coords = self.fq_coords(a);
        let mut out = vec![0u64; m];
        for (j, &c) in coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for i in 0..m {
                out[i] = self.fq_add(out[i], self.fq_mul(c, self.frob[j * m + i]));
            }
        }
        self.fqm_from_digits(&out)
    }

    /// F_q-coordinates of x with respect to the power basis 1, β, …, β^{m−1}.
    pub fn fq_coords(&self, a: Fqm) -> Vec<u64> {
        let mut out = vec![0u64; self.m as usize];
        let mut v = a.0;
        for slot in out.iter_mut() {
            *slot = v % self.q;
            v /= self.q;
        }
        out
    }

    /// Inverse of [`fq_coords`](Self::fq_coords).
    pub fn from_fq_coords(&self, coords: &[u64]) -> Result<Fqm> {
        if coords.len() != self.m as usize {
            return Err(Error::LengthMismatch {
                expected: self.m as usize,
                got: coords.len(),
            });
        }
        for &c in coords {
            if c >= self.q {
                return Err(Error::BadArgs(format!("F_q digit {c} out of range")));
            }
        }
        Ok(self.fqm_from_digits(coords))
    }

    /// Multiplies an element by an F_q scalar (given as an F_q code).
    pub fn scalar_mul(&self, c: u64, a: Fqm) -> Fqm {
        debug_assert!(c < self.q);
        Fqm(self.mul_code(c, a.0))
    }

    // ---- F_q level operations on codes in [0, q) ----

    pub fn fq_add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        if self.p == 2 {
            return a ^ b;
        }
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let mut out = 0u64;
        let mut pw = 1u64;
        let (mut x, mut y) = (a, b);
        for _ in 0..self.e {
            out += ((x % self.p + y % self.p) % self.p) * pw;
            x /= self.p;
            y /= self.p;
            pw *= self.p;
        }
        out
    }

    pub fn fq_neg(&self, a: u64) -> u64 {
        debug_assert!(a < self.q);
        if self.p == 2 {
            return a;
        }
        if self.e == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let mut out = 0u64;
        let mut pw = 1u64;
        let mut x = a;
        for _ in 0..self.e {
            let d = x % self.p;
            out += if d == 0 { 0 } else { self.p - d } * pw;
            x /= self.p;
            pw *= self.p;
        }
        out
    }

    pub fn fq_mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        if a == 0 || b == 0 {
            return 0;
        }
        let la = self.fq_log[a as usize] as u64;
        let lb = self.fq_log[b as usize] as u64;
        self.fq_exp[((la + lb) % (self.q - 1)) as usize] as u64
    }

    pub fn fq_inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let la = self.fq_log[a as usize] as u64;
        Ok(self.fq_exp[((self.q - 1 - la) % (self.q - 1)) as usize] as u64)
    }

    // ---- code-level F_{q^m} arithmetic ----

    pub(crate) fn add_code(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return a ^ b;
        }
        let mut out = 0u64;
        let mut pw = 1u64;
        let (mut x, mut y) = (a, b);
        for _ in 0..self.m {
            out += self.fq_add(x % self.q, y % self.q) * pw;
            x /= self.q;
            y /= self.q;
            pw *= self.q;
        }
        out
    }

    pub(crate) fn neg_code(&self, a: u64) -> u64 {
        if self.p == 2 {
            return a;
        }
        let mut out = 0u64;
        let mut pw = 1u64;
        let mut x = a;
        for _ in 0..self.m {
            out += self.fq_neg(x % self.q) * pw;
            x /= self.q;
            pw *= self.q;
        }
        out
    }

    pub(crate) fn mul_code(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        if a == 1 {
            return b;
        }
        if b == 1 {
            return a;
        }
        if let (Some(exp), Some(log)) = (&self.top_exp, &self.top_log) {
            let la = log[a as usize] as u64;
            let lb = log[b as usize] as u64;
            return exp[((la + lb) % (self.q_m - 1)) as usize] as u64;
        }
        self.mul_schoolbook(a, b)
    }

    pub(crate) fn inv_code(&self, a: u64) -> u64 {
        debug_assert!(a != 0);
        if let (Some(exp), Some(log)) = (&self.top_exp, &self.top_log) {
            let la = log[a as usize] as u64;
            return exp[((self.q_m - 1 - la) % (self.q_m - 1)) as usize] as u64;
        }
        self.pow(Fqm(a), self.q_m - 2).0
    }

    pub(crate) fn mul_schoolbook(&self, a: u64, b: u64) -> u64 {
        let m = self.m as usize;
        if m == 1 {
            return self.fq_mul(a, b);
        }
        let mut da = [0u64; 64];
        let mut db = [0u64; 64];
        let (mut x, mut y) = (a, b);
        for i in 0..m {
            da[i] = x % self.q;
            db[i] = y % self.q;
            x /= self.q;
            y /= self.q;
        }
        let mut conv = [0u64; 128];
        for i in 0..m {
            if da[i] == 0 {
                continue;
            }
            for j in 0..m {
                if db[j] != 0 {
                    conv[i + j] = self.fq_add(conv[i + j], self.fq_mul(da[i], db[j]));
                }
            }
        }
        for idx in (m..=2 * m - 2).rev() {
            let c = conv[idx];
            if c == 0 {
                continue;
            }
            conv[idx] = 0;
            let row = &self.red_rows[idx - m];
            for i in 0..m {
                if row[i] != 0 {
                    conv[i] = self.fq_add(conv[i], self.fq_mul(c, row[i]));
                }
            }
        }
        let mut out = 0u64;
        for i in (0..m).rev() {
            out = out * self.q + conv[i];
        }
        out
    }

    fn fqm_from_digits(&self, digits: &[u64]) -> Fqm {
        let mut out = 0u64;
        for &d in digits.iter().rev() {
            out = out * self.q + d;
        }
        Fqm(out)
    }

    fn find_generator(&self) -> Result<Fqm> {
        let n = self.q_m - 1;
        if n == 1 {
            return Ok(Fqm(1));
        }
        let primes = prime_factors(n);
        for code in 1..self.q_m {
            let g = Fqm(code);
            if primes.iter().all(|&r| self.pow(g, n / r).0 != 1) {
                return Ok(g);
            }
        }
        Err(Error::InternalIrreducibilityFailure)
    }

    pub(crate) fn fq_view(&self) -> FqView<'_> {
        FqView { ctx: self }
    }

    pub(crate) fn fqm_view(&self) -> FqmView<'_> {
        FqmView { ctx: self }
    }
}

/// [`Arith`] view of the F_q level.
#[derive(Copy, Clone)]
pub(crate) struct FqView<'a> {
    ctx: &'a FieldContext,
}

impl Arith for FqView<'_> {
    fn size(&self) -> u64 {
        self.ctx.q
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        self.ctx.fq_add(a, b)
    }
    fn neg(&self, a: u64) -> u64 {
        self.ctx.fq_neg(a)
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.ctx.fq_mul(a, b)
    }
    fn inv(&self, a: u64) -> u64 {
        self.ctx.fq_inv(a).expect("inverse of zero")
    }
}

/// [`Arith`] view of the F_{q^m} level.
#[derive(Copy, Clone)]
pub(crate) struct FqmView<'a> {
    ctx: &'a FieldContext,
}

impl Arith for FqmView<'_> {
    fn size(&self) -> u64 {
        self.ctx.q_m
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        self.ctx.add_code(a, b)
    }
    fn neg(&self, a: u64) -> u64 {
        self.ctx.neg_code(a)
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.ctx.mul_code(a, b)
    }
    fn inv(&self, a: u64) -> u64 {
        self.ctx.inv_code(a)
    }
}

// ---- bootstrap scalar fields ----

/// F_p arithmetic used while searching for the F_q defining polynomial.
struct ModP {
    p: u64,
}

impl ScalarOps for ModP {
    fn size(&self) -> u64 {
        self.p
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }
    fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }
}

/// Slow F_q arithmetic (polynomials over F_p reduced by fq_poly), used only
/// to bootstrap the F_q exp/log tables.
struct FqSlow {
    p: u64,
    e: u32,
    q: u64,
    poly: Vec<u64>,
}

impl FqSlow {
    fn mul(&self, a: u64, b: u64) -> u64 {
        if self.e == 1 {
            return (a * b) % self.p;
        }
        let e = self.e as usize;
        let mut da = vec![0u64; e];
        let mut db = vec![0u64; e];
        let (mut x, mut y) = (a, b);
        for i in 0..e {
            da[i] = x % self.p;
            db[i] = y % self.p;
            x /= self.p;
            y /= self.p;
        }
        let mut conv = vec![0u64; 2 * e - 1];
        for i in 0..e {
            for j in 0..e {
                conv[i + j] = (conv[i + j] + da[i] * db[j]) % self.p;
            }
        }
        // reduce by the monic defining polynomial
        for idx in (e..=2 * e - 2).rev() {
            let c = conv[idx] % self.p;
            if c == 0 {
                continue;
            }
            conv[idx] = 0;
            for i in 0..e {
                let sub = (c * self.poly[i]) % self.p;
                conv[i] = (conv[i] + self.p - sub) % self.p;
            }
        }
        let mut out = 0u64;
        for i in (0..e).rev() {
            out = out * self.p + conv[i];
        }
        debug_assert!(out < self.q);
        out
    }
}

/// Minimal scalar interface for the polynomial helpers below.
trait ScalarOps {
    fn size(&self) -> u64;
    fn add(&self, a: u64, b: u64) -> u64;
    fn neg(&self, a: u64) -> u64;
    fn mul(&self, a: u64, b: u64) -> u64;
    fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }
}

struct FqTab<'a> {
    p: u64,
    e: u32,
    q: u64,
    exp: &'a [u32],
    log: &'a [u32],
}

impl ScalarOps for FqTab<'_> {
    fn size(&self) -> u64 {
        self.q
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let mut out = 0u64;
        let mut pw = 1u64;
        let (mut x, mut y) = (a, b);
        for _ in 0..self.e {
            out += ((x % self.p + y % self.p) % self.p) * pw;
            x /= self.p;
            y /= self.p;
            pw *= self.p;
        }
        out
    }
    fn neg(&self, a: u64) -> u64 {
        if self.p == 2 {
            return a;
        }
        let mut out = 0u64;
        let mut pw = 1u64;
        let mut x = a;
        for _ in 0..self.e {
            let d = x % self.p;
            out += if d == 0 { 0 } else { self.p - d } * pw;
            x /= self.p;
            pw *= self.p;
        }
        out
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let la = self.log[a as usize] as u64;
        let lb = self.log[b as usize] as u64;
        self.exp[((la + lb) % (self.q - 1)) as usize] as u64
    }
}

// ---- polynomial helpers over a generic scalar field ----

fn poly_trim(v: &mut Vec<u64>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

/// Remainder of `f` divided by monic `g`.
fn poly_rem<S: ScalarOps>(s: &S, f: &[u64], g: &[u64]) -> Vec<u64> {
    let dg = g.len() - 1;
    let mut r: Vec<u64> = f.to_vec();
    poly_trim(&mut r);
    while r.len() - 1 >= dg && !(r.len() == 1 && r[0] == 0) {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        if c != 0 {
            for i in 0..=dg {
                let sub = s.mul(c, g[i]);
                r[shift + i] = s.sub(r[shift + i], sub);
            }
        }
        r.pop();
        poly_trim(&mut r);
        if r.len() == 1 && r[0] == 0 {
            break;
        }
    }
    r
}

fn poly_is_zero(v: &[u64]) -> bool {
    v.iter().all(|&c| c == 0)
}

/// Irreducibility by trial division: a monic polynomial of degree d is
/// irreducible iff no monic polynomial of degree 1..=d/2 divides it.
fn is_irreducible<S: ScalarOps>(s: &S, f: &[u64]) -> bool {
    let d = f.len() - 1;
    if d == 1 {
        return true;
    }
    let q = s.size();
    for dd in 1..=d / 2 {
        let count = q.pow(dd as u32);
        for v in 0..count {
            let mut g = vec![0u64; dd + 1];
            let mut x = v;
            for slot in g.iter_mut().take(dd) {
                *slot = x % q;
                x /= q;
            }
            g[dd] = 1;
            if poly_is_zero(&poly_rem(s, f, &g)) {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible polynomial of degree d whose non-leading coefficient
/// vector has the smallest integer encoding.
fn lex_least_irreducible<S: ScalarOps>(s: &S, d: usize) -> Result<Vec<u64>> {
    let q = s.size();
    let count = q.checked_pow(d as u32).ok_or(Error::BadArgs(
        "defining polynomial search space overflows".into(),
    ))?;
    for v in 0..count {
        let mut f = vec![0u64; d + 1];
        let mut x = v;
        for slot in f.iter_mut().take(d) {
            *slot = x % q;
            x /= q;
        }
        f[d] = 1;
        if is_irreducible(s, &f) {
            return Ok(f);
        }
    }
    Err(Error::InternalIrreducibilityFailure)
}

/// x^{m+j} mod f for j in 0..m-1, as coefficient rows of length m.
fn reduction_rows<S: ScalarOps>(s: &S, f: &[u64], m: usize) -> Vec<Vec<u64>> {
    if m < 2 {
        return Vec::new();
    }
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(m - 1);
    let mut row: Vec<u64> = (0..m).map(|i| s.neg(f[i])).collect();
    rows.push(row.clone());
    for _ in 1..m - 1 {
        let carry = row[m - 1];
        let mut next = vec![0u64; m];
        for i in 1..m {
            next[i] = row[i - 1];
        }
        if carry != 0 {
            for i in 0..m {
                next[i] = s.add(next[i], s.mul(carry, rows[0][i]));
            }
        }
        rows.push(next.clone());
        row = next;
    }
    rows
}

fn build_exp_log(q: u64, mul: impl Fn(u64, u64) -> u64) -> Result<(Vec<u32>, Vec<u32>)> {
    let n = q - 1;
    if n == 0 {
        return Err(Error::BadArgs("field of size 1".into()));
    }
    let pow = |mut base: u64, mut exp: u64| -> u64 {
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            exp >>= 1;
        }
        acc
    };
    let primes = prime_factors(n);
    let mut gen = 0u64;
    for cand in 1..q {
        if primes.iter().all(|&r| pow(cand, n / r) != 1) {
            gen = cand;
            break;
        }
    }
    if gen == 0 {
        return Err(Error::InternalIrreducibilityFailure);
    }
    let mut exp = vec![0u32; n as usize];
    let mut log = vec![u32::MAX; q as usize];
    let mut cur = 1u64;
    for (i, slot) in exp.iter_mut().enumerate() {
        *slot = cur as u32;
        log[cur as usize] = i as u32;
        cur = mul(cur, gen);
    }
    if cur != 1 {
        return Err(Error::InternalIrreducibilityFailure);
    }
    Ok((exp, log))
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Arc<FieldContext> {
        FieldContext::new(2, 1, 2).unwrap()
    }

    #[test]
    fn f4_defining_poly_is_unique_quadratic() {
        let ctx = f4();
        assert_eq!(ctx.fqm_defining_poly(), &[1, 1, 1]); // x^2 + x + 1
        assert_eq!(ctx.order(), 4);
    }

    #[test]
    fn f3_degenerate_extension() {
        let ctx = FieldContext::new(3, 1, 1).unwrap();
        assert_eq!(ctx.order(), 3);
        // arithmetic is plain mod 3
        assert_eq!(ctx.add(Fqm(2), Fqm(2)).code(), 1);
        assert_eq!(ctx.mul(Fqm(2), Fqm(2)).code(), 1);
        assert_eq!(ctx.frobenius_q(Fqm(2)), Fqm(2));
    }

    /// Independent oracle: irreducible monic quartics over F_2 are exactly
    /// those with no root and not equal to the square of the unique
    /// irreducible quadratic.
    #[test]
    fn f16_lex_least_quartic() {
        let eval2 = |f: &[u64], x: u64| -> u64 {
            let mut acc = 0u64;
            for &c in f.iter().rev() {
                acc = (acc * x + c) % 2;
            }
            acc
        };
        let sq_quad = [1u64, 0, 1, 0, 1]; // (x^2+x+1)^2 = x^4+x^2+1
        let mut first: Option<Vec<u64>> = None;
        for v in 0..16u64 {
            let f = vec![v & 1, (v >> 1) & 1, (v >> 2) & 1, (v >> 3) & 1, 1];
            let has_root = eval2(&f, 0) == 0 || eval2(&f, 1) == 0;
            let is_sq = f == sq_quad;
            if !has_root && !is_sq {
                first = Some(f);
                break;
            }
        }
        assert_eq!(first.unwrap(), vec![1, 1, 0, 0, 1]); // x^4 + x + 1
        let ctx = FieldContext::new(2, 1, 4).unwrap();
        assert_eq!(ctx.fqm_defining_poly(), &[1, 1, 0, 0, 1]);
    }

    #[test]
    fn f4_mul_inv_frobenius() {
        let ctx = f4();
        let alpha = Fqm(2);
        assert_eq!(ctx.mul(alpha, alpha), Fqm(3)); // α^2 = α + 1
        // exhaustive inverse oracle
        let mut found = None;
        for y in ctx.elements() {
            if ctx.mul(alpha, y) == ctx.one() {
                found = Some(y);
            }
        }
        assert_eq!(found, Some(Fqm(3)));
        assert_eq!(ctx.inv(alpha).unwrap(), Fqm(3));
        assert_eq!(ctx.frobenius_q(alpha), Fqm(3)); // α^2
        assert!(ctx.inv(Fqm(0)).is_err());
    }

    #[test]
    fn fq_coords_basis() {
        let ctx = f4();
        assert_eq!(ctx.fq_coords(Fqm(0)), vec![0, 0]);
        assert_eq!(ctx.fq_coords(Fqm(2)), vec![0, 1]); // α
        assert_eq!(ctx.fq_coords(Fqm(3)), vec![1, 1]); // α + 1
        for x in ctx.elements() {
            assert_eq!(ctx.from_fq_coords(&ctx.fq_coords(x)).unwrap(), x);
        }
    }

    #[test]
    fn fq_coords_linearity() {
        for (p, e, m) in [(2, 1, 2), (2, 2, 2), (3, 1, 2)] {
            let ctx = FieldContext::new(p, e, m).unwrap();
            for a in 0..ctx.q() {
                for b in 0..ctx.q() {
                    for x in ctx.elements() {
                        for y in ctx.elements() {
                            let lhs = ctx.fq_coords(
                                ctx.add(ctx.scalar_mul(a, x), ctx.scalar_mul(b, y)),
                            );
                            let xs = ctx.fq_coords(x);
                            let ys = ctx.fq_coords(y);
                            let rhs: Vec<u64> = (0..m as usize)
                                .map(|i| {
                                    ctx.fq_add(ctx.fq_mul(a, xs[i]), ctx.fq_mul(b, ys[i]))
                                })
                                .collect();
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn multiplicative_order_exhaustive() {
        for (p, e, m) in [(2, 1, 2), (2, 2, 2), (3, 1, 2), (2, 1, 4), (5, 1, 1)] {
            let ctx = FieldContext::new(p, e, m).unwrap();
            let n = ctx.order() - 1;
            for x in ctx.elements().skip(1) {
                assert_eq!(ctx.pow(x, n), ctx.one(), "x^(q^m-1) != 1");
            }
            // generator is primitive and smallest
            let g = ctx.generator();
            for d in 1..n {
                if n % d == 0 {
                    assert_ne!(ctx.pow(g, d), ctx.one(), "generator order divides {d}");
                }
            }
            for smaller in 1..g.code() {
                let cand = Fqm(smaller);
                let primitive = (1..=n).find(|&d| ctx.pow(cand, d) == ctx.one()) == Some(n);
                assert!(!primitive, "generator is not the smallest encoding");
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, e, m) in [(2, 1, 2), (2, 2, 1), (3, 1, 1), (2, 2, 2), (7, 1, 1)] {
            let ctx = FieldContext::new(p, e, m).unwrap();
            if ctx.order() > 64 {
                continue;
            }
            for x in ctx.elements() {
                for y in ctx.elements() {
                    assert_eq!(ctx.mul(x, y), ctx.mul(y, x));
                    assert_eq!(ctx.add(x, y), ctx.add(y, x));
                    for z in ctx.elements() {
                        assert_eq!(ctx.mul(ctx.mul(x, y), z), ctx.mul(x, ctx.mul(y, z)));
                        assert_eq!(
                            ctx.mul(x, ctx.add(y, z)),
                            ctx.add(ctx.mul(x, y), ctx.mul(x, z))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn field_axioms_random_large() {
        // q^m = 2^17 exceeds the multiplication-table threshold, so this
        // exercises the schoolbook path end to end.
        let ctx = FieldContext::new(2, 1, 17).unwrap();
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state % ctx.order()
        };
        for _ in 0..1000 {
            let (x, y, z) = (Fqm(next()), Fqm(next()), Fqm(next()));
            assert_eq!(ctx.mul(ctx.mul(x, y), z), ctx.mul(x, ctx.mul(y, z)));
            assert_eq!(
                ctx.mul(x, ctx.add(y, z)),
                ctx.add(ctx.mul(x, y), ctx.mul(x, z))
            );
            if !x.is_zero() {
                assert_eq!(ctx.mul(x, Fqm(ctx.inv_code(x.code()))), ctx.one());
                assert_eq!(ctx.pow(x, ctx.order() - 1), ctx.one());
            }
        }
    }

    #[test]
    fn schoolbook_matches_tables() {
        let ctx = FieldContext::new(2, 2, 2) .unwrap();
        for x in ctx.elements() {
            for y in ctx.elements() {
                assert_eq!(ctx.mul_code(x.0, y.0), ctx.mul_schoolbook(x.0, y.0));
            }
        }
    }

    #[test]
    fn frobenius_is_qth_power() {
        for (p, e, m) in [(2, 1, 3), (2, 2, 2), (3, 1, 2)] {
            let ctx = FieldContext::new(p, e, m).unwrap();
            for x in ctx.elements() {
                assert_eq!(ctx.frobenius_q(x), ctx.pow(x, ctx.q()));
            }
        }
    }

    #[test]
    fn f9_deterministic_choices() {
        let ctx = FieldContext::new(3, 1, 2).unwrap();
        assert_eq!(ctx.fqm_defining_poly(), &[1, 0, 1]); // x^2 + 1
        assert_eq!(ctx.generator().code(), 4); // 1 + β
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            FieldContext::new(4, 1, 2),
            Err(Error::NotPrime(4))
        ));
        assert!(matches!(
            FieldContext::new(2, 1, 40),
            Err(Error::TooLarge { .. })
        ));
        assert!(FieldContext::new(2, 0, 1).is_err());
    }
}
