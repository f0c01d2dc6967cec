//! Desk-scale stabilizer simulator used as ground truth for the graph rules.
//!
//! States are stored as `n` commuting Pauli generators without destabilizers;
//! deterministic outcomes are recovered by Gaussian elimination, which is fine
//! at the sizes this is meant for (at most [`ORACLE_LIMIT`] qubits).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::Graph;
use crate::{Basis, Error, Result};

pub const ORACLE_LIMIT: usize = 16;

/// `i^phase * X^x * Z^z`, one bit per qubit.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pauli {
    pub x: u32,
    pub z: u32,
    phase: u8,
}

impl Pauli {
    pub const IDENTITY: Pauli = Pauli { x: 0, z: 0, phase: 0 };

    /// Hermitian Pauli with the given support and sign.
    pub fn signed(x: u32, z: u32, negative: bool) -> Pauli {
        let phase = ((x & z).count_ones() + 2 * negative as u32) % 4;
        Pauli { x, z, phase: phase as u8 }
    }

    pub fn single(q: usize, basis: Basis) -> Pauli {
        match basis {
            Basis::X => Pauli::signed(1 << q, 0, false),
            Basis::Z => Pauli::signed(0, 1 << q, false),
        }
    }

    #[inline]
    pub fn mul(&self, o: &Pauli) -> Pauli {
        let swap = 2 * (self.z & o.x).count_ones();
        Pauli {
            x: self.x ^ o.x,
            z: self.z ^ o.z,
            phase: ((self.phase as u32 + o.phase as u32 + swap) % 4) as u8,
        }
    }

    #[inline]
    pub fn commutes(&self, o: &Pauli) -> bool {
        ((self.x & o.z).count_ones() + (self.z & o.x).count_ones()).is_multiple_of(2)
    }

    /// `Some(true)` for a Hermitian Pauli with sign -1, `None` if not Hermitian.
    pub fn is_negative(&self) -> Option<bool> {
        match (self.phase as u32 + 4 - (self.x & self.z).count_ones() % 4) % 4 {
            0 => Some(false),
            2 => Some(true),
            _ => None,
        }
    }

    #[inline]
    fn key(&self) -> u64 {
        self.x as u64 | (self.z as u64) << 32
    }

    fn drop_qubit(&self, q: usize) -> Pauli {
        let squeeze = |m: u32| (m & ((1 << q) - 1)) | ((m >> (q + 1)) << q);
        Pauli {
            x: squeeze(self.x),
            z: squeeze(self.z),
            phase: self.phase,
        }
    }
}

impl fmt::Debug for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.is_negative() {
            Some(false) => "+",
            Some(true) => "-",
            None => "?",
        };
        f.write_str(sign)?;
        let n = 32 - (self.x | self.z).leading_zeros() as usize;
        for q in 0..n.max(1) {
            let c = match (self.x >> q & 1, self.z >> q & 1) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (0, 1) => 'Z',
                _ => 'Y',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Outcome {
    Plus,
    Minus,
}

/// Row-reduced copy of a generating set, used for membership queries.
struct Echelon {
    rows: Vec<(u64, Pauli)>,
}

impl Echelon {
    fn new<'a>(gens: impl IntoIterator<Item = &'a Pauli>) -> Self {
        let mut e = Echelon { rows: Vec::new() };
        for g in gens {
            e.insert(*g);
        }
        e
    }

    fn insert(&mut self, mut p: Pauli) -> bool {
        for (bit, row) in &self.rows {
            if p.key() & bit != 0 {
                p = p.mul(row);
            }
        }
        let k = p.key();
        if k == 0 {
            return false;
        }
        let bit = k & k.wrapping_neg();
        for (_, row) in self.rows.iter_mut() {
            if row.key() & bit != 0 {
                *row = row.mul(&p);
            }
        }
        self.rows.push((bit, p));
        true
    }

    /// The group element whose Pauli support equals `key`, if any.
    fn element(&self, key: u64) -> Option<Pauli> {
        let mut acc = Pauli::IDENTITY;
        for (bit, row) in &self.rows {
            if key & bit != 0 {
                acc = acc.mul(row);
            }
        }
        (acc.key() == key).then_some(acc)
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    rows: Vec<Pauli>,
}

pub struct Measurement {
    pub tableau: Tableau,
    pub outcome: Outcome,
    pub random: bool,
}

impl Tableau {
    pub fn from_generators(n: usize, rows: Vec<Pauli>) -> Result<Tableau> {
        if n > ORACLE_LIMIT {
            return Err(Error::SizeLimit { size: n, limit: ORACLE_LIMIT });
        }
        let t = Tableau { n, rows };
        if !t.is_valid() {
            return Err(Error::Internal("generators are not a valid stabilizer state"));
        }
        Ok(t)
    }

    /// Product state `|+>^n`.
    pub fn plus_state(n: usize) -> Result<Tableau> {
        Tableau::graph_state(&Graph::new(n))
    }

    /// Stabilizer of the graph state: `X_i prod_{j in N(i)} Z_j` for every
    /// live vertex, with live vertices numbered in id order.
    pub fn graph_state(g: &Graph) -> Result<Tableau> {
        let (g, _) = g.compact();
        let n = g.vertex_count();
        if n > ORACLE_LIMIT {
            return Err(Error::SizeLimit { size: n, limit: ORACLE_LIMIT });
        }
        let rows = (0..n)
            .map(|i| {
                let z = g.neighbors(i).fold(0u32, |m, j| m | 1 << j);
                Pauli::signed(1 << i, z, false)
            })
            .collect();
        Ok(Tableau { n, rows })
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Pauli] {
        &self.rows
    }

    /// Mutually commuting, Hermitian, independent, and exactly `n` of them.
    pub fn is_valid(&self) -> bool {
        let mask = if self.n == 32 { !0 } else { (1u32 << self.n) - 1 };
        self.rows.len() == self.n
            && self.rows.iter().all(|p| p.is_negative().is_some() && (p.x | p.z) & !mask == 0)
            && self
                .rows
                .iter()
                .enumerate()
                .all(|(i, p)| self.rows[i + 1..].iter().all(|o| p.commutes(o)))
            && Echelon::new(&self.rows).rank() == self.n
    }

    /// Signed membership test for a Hermitian Pauli.
    pub fn stabilizes(&self, p: &Pauli) -> bool {
        Echelon::new(&self.rows).element(p.key()) == Some(*p)
    }

    /// Measures `basis` on qubit `q`. A random outcome follows `forced`
    /// (defaulting to `+1`); a deterministic one ignores it.
    pub fn measure_pauli(&self, q: usize, basis: Basis, forced: Option<Outcome>) -> Result<Measurement> {
        if q >= self.n {
            return Err(Error::InvalidVertex(q));
        }
        let p = Pauli::single(q, basis);
        let anti: Vec<usize> = (0..self.n).filter(|&i| !self.rows[i].commutes(&p)).collect();
        let mut rows = self.rows.clone();
        if let Some((&first, rest)) = anti.split_first() {
            let pivot = rows[first];
            for &r in rest {
                rows[r] = rows[r].mul(&pivot);
            }
            let outcome = forced.unwrap_or(Outcome::Plus);
            rows[first] = Pauli::signed(p.x, p.z, outcome == Outcome::Minus);
            return Ok(Measurement {
                tableau: Tableau { n: self.n, rows },
                outcome,
                random: true,
            });
        }
        let elem = Echelon::new(&self.rows)
            .element(p.key())
            .ok_or(Error::Internal("commuting Pauli missing from a maximal stabilizer group"))?;
        let outcome = if elem.is_negative() == Some(true) {
            Outcome::Minus
        } else {
            Outcome::Plus
        };
        Ok(Measurement {
            tableau: Tableau { n: self.n, rows },
            outcome,
            random: false,
        })
    }

    /// Traces out qubit `q`, which must be in a product state with the rest.
    /// The remaining qubits are renumbered down by one above `q`.
    pub fn discard_qubit(&self, q: usize) -> Result<Tableau> {
        if q >= self.n {
            return Err(Error::InvalidVertex(q));
        }
        let mut rows = self.rows.clone();
        let mut owner = None;
        for bit in [1u32 << q, 0] {
            // first pass eliminates the X component, second the Z component
            let select = |p: &Pauli| if bit != 0 { p.x & bit != 0 } else { p.z >> q & 1 == 1 };
            let Some(i) = (0..rows.len()).find(|&i| Some(i) != owner && select(&rows[i])) else {
                continue;
            };
            if owner.is_some() {
                return Err(Error::NotProductQubit(q));
            }
            let pivot = rows[i];
            for (j, r) in rows.iter_mut().enumerate() {
                if j != i && select(r) {
                    *r = r.mul(&pivot);
                }
            }
            owner = Some(i);
        }
        let owner = owner.ok_or(Error::Internal("qubit has no stabilizer support"))?;
        let single = rows.remove(owner);
        let others = Echelon::new(&rows);
        let rest_mask = !((1u64 << q) | (1u64 << (q + 32)));
        let rest = others
            .element(single.key() & rest_mask)
            .ok_or(Error::NotProductQubit(q))?;
        debug_assert!(!single.mul(&rest).touches_other_than(q));
        let rows = rows.iter().map(|r| r.drop_qubit(q)).collect();
        Ok(Tableau { n: self.n - 1, rows })
    }
}

impl Pauli {
    fn touches_other_than(&self, q: usize) -> bool {
        (self.x | self.z) & !(1 << q) != 0
    }
}

impl fmt::Debug for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.rows).finish()
    }
}

/// Unsigned single-qubit Cliffords as images of X and Z, written as
/// `(x, z)` support bits: index 0 is the identity.
const CLIFFORD_IMAGES: [((u32, u32), (u32, u32)); 6] = [
    ((1, 0), (0, 1)),
    ((1, 0), (1, 1)),
    ((0, 1), (1, 0)),
    ((0, 1), (1, 1)),
    ((1, 1), (1, 0)),
    ((1, 1), (0, 1)),
];

/// GF(2) system solved incrementally; pivot on the lowest set bit.
#[derive(Clone)]
struct Gf2System {
    pivots: [Option<(u64, bool)>; 64],
}

impl Gf2System {
    fn new() -> Self {
        Gf2System { pivots: [None; 64] }
    }

    /// Adds `coef . vars = rhs`; false when the system becomes inconsistent.
    fn add(&mut self, mut coef: u64, mut rhs: bool) -> bool {
        while coef != 0 {
            let b = coef.trailing_zeros() as usize;
            match self.pivots[b] {
                Some((c, r)) => {
                    coef ^= c;
                    rhs ^= r;
                }
                None => {
                    self.pivots[b] = Some((coef, rhs));
                    return true;
                }
            }
        }
        !rhs
    }
}

fn embed(q: usize, (x, z): (u32, u32)) -> Pauli {
    Pauli::signed(x << q, z << q, false)
}

/// Whether a product of single-qubit Cliffords on `mask` maps the state of `b`
/// onto the state of `a`. Qubits outside `mask` must agree exactly, signs
/// included.
///
/// The unsigned part is a per-qubit search over the six symplectic 2x2
/// matrices. Each partial assignment is checked against the linear system
/// "every image of a generator of `b` is orthogonal to every generator of
/// `a`", so a branch is cut as soon as it cannot be extended. Signs are fixed
/// at the leaves by solving for a Pauli correction on the masked qubits.
pub fn equal_up_to_local_clifford(a: &Tableau, b: &Tableau, mask: &[usize]) -> Result<bool> {
    if a.n != b.n {
        return Err(Error::SizeMismatch(a.n, b.n));
    }
    let n = a.n;
    if n > ORACLE_LIMIT {
        return Err(Error::SizeLimit { size: n, limit: ORACLE_LIMIT });
    }
    let mut masked = 0u32;
    for &q in mask {
        if q >= n {
            return Err(Error::InvalidVertex(q));
        }
        masked |= 1 << q;
    }
    // unknowns per qubit: a, b, c, d of [[a, b], [c, d]] at bits 4q..4q+3
    let mut base = Gf2System::new();
    for u in &a.rows {
        for w in &b.rows {
            let mut coef = 0u64;
            for q in 0..n {
                let (ux, uz) = ((u.x >> q & 1) as u64, (u.z >> q & 1) as u64);
                let (wx, wz) = ((w.x >> q & 1) as u64, (w.z >> q & 1) as u64);
                coef |= (uz & wx) << (4 * q)
                    | (uz & wz) << (4 * q + 1)
                    | (ux & wx) << (4 * q + 2)
                    | (ux & wz) << (4 * q + 3);
            }
            if !base.add(coef, false) {
                return Ok(false);
            }
        }
    }
    let search = Search {
        n,
        masked,
        a_group: Echelon::new(&a.rows),
        b_rows: &b.rows,
    };
    let mut choice = vec![0usize; n];
    Ok(search.descend(0, &base, &mut choice))
}

struct Search<'a> {
    n: usize,
    masked: u32,
    a_group: Echelon,
    b_rows: &'a [Pauli],
}

impl Search<'_> {
    fn descend(&self, q: usize, sys: &Gf2System, choice: &mut [usize]) -> bool {
        if q == self.n {
            return self.signs_fixable(choice);
        }
        let options = if self.masked >> q & 1 == 1 { 0..6 } else { 0..1 };
        for opt in options {
            let ((a, c), (b, d)) = CLIFFORD_IMAGES[opt];
            let mut s = sys.clone();
            let ok = [a, b, c, d]
                .iter()
                .enumerate()
                .all(|(k, &bit)| s.add(1 << (4 * q + k), bit == 1));
            if ok {
                choice[q] = opt;
                if self.descend(q + 1, &s, choice) {
                    return true;
                }
            }
        }
        false
    }

    fn conjugate(&self, p: &Pauli, choice: &[usize]) -> Pauli {
        let mut acc = Pauli { x: 0, z: 0, phase: p.phase };
        for (q, &opt) in choice.iter().enumerate() {
            let (ix, iz) = CLIFFORD_IMAGES[opt];
            if p.x >> q & 1 == 1 {
                acc = acc.mul(&embed(q, ix));
            }
            if p.z >> q & 1 == 1 {
                acc = acc.mul(&embed(q, iz));
            }
        }
        acc
    }

    fn signs_fixable(&self, choice: &[usize]) -> bool {
        let mut sys = Gf2System::new();
        for w in self.b_rows {
            let img = self.conjugate(w, choice);
            let Some(elem) = self.a_group.element(img.key()) else {
                return false;
            };
            let flip = elem.is_negative() != img.is_negative();
            // correction Pauli T with bits (tx, tz) at 2q, 2q+1 on masked qubits
            let mut coef = 0u64;
            for q in 0..self.n {
                if self.masked >> q & 1 == 1 {
                    coef |= ((img.z >> q & 1) as u64) << (2 * q) | ((img.x >> q & 1) as u64) << (2 * q + 1);
                }
            }
            if !sys.add(coef, flip) {
                return false;
            }
        }
        true
    }
}
