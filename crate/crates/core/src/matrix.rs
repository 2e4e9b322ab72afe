//! Square matrices over a finite ring, indexed by `Ω = {1..n, -n..-1}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Elem, InvolutiveRing};

/// Index in `Ω`; positive indices come first, then `-n, ..., -1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OmegaIndex(pub i32);

impl OmegaIndex {
    pub fn new(n: usize, value: i32) -> Result<Self> {
        if value == 0 || value.unsigned_abs() as usize > n {
            return Err(Error::InvalidIndex(format!("{value} is not in Ω for n = {n}")));
        }
        Ok(OmegaIndex(value))
    }

    pub fn value(self) -> i32 {
        self.0
    }

    /// Row/column position: `i > 0 -> i - 1`, `i < 0 -> 2n + i`.
    #[inline]
    pub fn pos(self, n: usize) -> usize {
        omega_pos(n, self.0)
    }

    /// `ε(i)`.
    pub fn sign(self) -> i32 {
        if self.0 > 0 {
            1
        } else {
            -1
        }
    }

    pub fn neg(self) -> Self {
        OmegaIndex(-self.0)
    }

    /// `1, ..., n, -n, ..., -1`.
    pub fn all(n: usize) -> impl Iterator<Item = OmegaIndex> + Clone {
        let n = n as i32;
        (1..=n).chain((-n..=-1).into_iter()).map(OmegaIndex)
    }

    /// Inverse of [`OmegaIndex::pos`].
    pub fn from_pos(n: usize, p: usize) -> Self {
        if p < n {
            OmegaIndex(p as i32 + 1)
        } else {
            OmegaIndex(p as i32 - 2 * n as i32)
        }
    }
}

#[inline]
pub fn omega_pos(n: usize, i: i32) -> usize {
    if i > 0 {
        (i - 1) as usize
    } else {
        (2 * n as i32 + i) as usize
    }
}

#[inline]
pub fn sign(i: i32) -> i32 {
    if i > 0 {
        1
    } else {
        -1
    }
}

/// A `2n × 2n` matrix, entries row-major in position order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UMatrix {
    n: usize,
    entries: Vec<Elem>,
}

impl fmt::Debug for UMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UMatrix(n={}, {:?})", self.n, self.rows())
    }
}

impl UMatrix {
    pub fn identity(ring: &InvolutiveRing, n: usize) -> Self {
        let mut m = UMatrix::zero(ring, n);
        for p in 0..2 * n {
            m.entries[p * 2 * n + p] = ring.one();
        }
        m
    }

    pub fn zero(ring: &InvolutiveRing, n: usize) -> Self {
        UMatrix { n, entries: vec![ring.zero(); 4 * n * n] }
    }

    /// Builds a matrix from rows given in position order.
    pub fn from_rows(ring: &InvolutiveRing, rows: &[Vec<Elem>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || dim % 2 != 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Dimension(format!("expected a square matrix of even size, got {dim} rows")));
        }
        if rows.iter().flatten().any(|&x| x as usize >= ring.order()) {
            return Err(Error::Dimension("entry is not a ring element".into()));
        }
        Ok(UMatrix { n: dim / 2, entries: rows.iter().flatten().copied().collect() })
    }

    #[cfg(test)]
    pub(crate) fn from_entries(n: usize, entries: Vec<Elem>) -> Self {
        debug_assert_eq!(entries.len(), 4 * n * n);
        UMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<Elem>> {
        self.entries.chunks(self.dim()).map(|r| r.to_vec()).collect()
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> Elem {
        self.entries[r * self.dim() + c]
    }

    #[inline]
    pub fn set_at(&mut self, r: usize, c: usize, x: Elem) {
        let d = self.dim();
        self.entries[r * d + c] = x;
    }

    /// Entry `g_{ij}` for `i, j ∈ Ω`.
    pub fn get(&self, i: i32, j: i32) -> Elem {
        self.at(omega_pos(self.n, i), omega_pos(self.n, j))
    }

    pub fn set(&mut self, i: i32, j: i32, x: Elem) {
        let (r, c) = (omega_pos(self.n, i), omega_pos(self.n, j));
        self.set_at(r, c, x);
    }

    /// Column `j` (the image `g e_j`) in position order.
    pub fn column(&self, c: usize) -> Vec<Elem> {
        (0..self.dim()).map(|r| self.at(r, c)).collect()
    }

    pub fn is_identity(&self, ring: &InvolutiveRing) -> bool {
        let d = self.dim();
        self.entries
            .iter()
            .enumerate()
            .all(|(k, &x)| x == if k / d == k % d { ring.one() } else { ring.zero() })
    }

    pub fn mul(&self, ring: &InvolutiveRing, other: &UMatrix) -> UMatrix {
        let mut out = UMatrix { n: self.n, entries: vec![ring.zero(); self.entries.len()] };
        self.mul_into(ring, other, &mut out);
        out
    }

    /// `out = self * other`; skips zero entries of `self`.
    pub fn mul_into(&self, ring: &InvolutiveRing, other: &UMatrix, out: &mut UMatrix) {
        debug_assert_eq!(self.n, other.n);
        let d = self.dim();
        let z = ring.zero();
        out.n = self.n;
        out.entries.clear();
        out.entries.resize(d * d, z);
        for r in 0..d {
            let orow = &mut out.entries[r * d..(r + 1) * d];
            for k in 0..d {
                let a = self.entries[r * d + k];
                if a == z {
                    continue;
                }
                let brow = &other.entries[k * d..(k + 1) * d];
                for c in 0..d {
                    let b = brow[c];
                    if b != z {
                        orow[c] = ring.add(orow[c], ring.mul(a, b));
                    }
                }
            }
        }
    }

    /// Two-sided inverse by elimination with unit pivots.
    pub fn inverse(&self, ring: &InvolutiveRing) -> Result<UMatrix> {
        let d = self.dim();
        let mut a = self.clone();
        let mut inv = UMatrix::identity(ring, self.n);
        for col in 0..d {
            let pivot = match (col..d).find(|&r| ring.is_unit(a.at(r, col))) {
                Some(p) => p,
                None => {
                    // no unit in the column: try to create one by adding a multiple of another row
                    let mut found = None;
                    'search: for r in col..d {
                        for s in col..d {
                            if s == r {
                                continue;
                            }
                            for t in ring.elements() {
                                let x = ring.add(a.at(r, col), ring.mul(t, a.at(s, col)));
                                if ring.is_unit(x) {
                                    found = Some((r, s, t));
                                    break 'search;
                                }
                            }
                        }
                    }
                    let (r, s, t) = found.ok_or(Error::Singular)?;
                    add_row_multiple(ring, &mut a, r, s, t);
                    add_row_multiple(ring, &mut inv, r, s, t);
                    r
                }
            };
            swap_rows(&mut a, col, pivot);
            swap_rows(&mut inv, col, pivot);
            let u = ring.inverse(a.at(col, col)).expect("pivot is a unit");
            scale_row(ring, &mut a, col, u);
            scale_row(ring, &mut inv, col, u);
            for r in 0..d {
                if r != col {
                    let f = a.at(r, col);
                    if f != ring.zero() {
                        let t = ring.neg(f);
                        add_row_multiple(ring, &mut a, r, col, t);
                        add_row_multiple(ring, &mut inv, r, col, t);
                    }
                }
            }
        }
        let id = UMatrix::identity(ring, self.n);
        if self.mul(ring, &inv) != id || inv.mul(ring, self) != id {
            return Err(Error::Singular);
        }
        Ok(inv)
    }

    /// `[x, y] = x y x⁻¹ y⁻¹` given both inverses.
    pub fn commutator_with(
        ring: &InvolutiveRing,
        x: &UMatrix,
        y: &UMatrix,
        x_inv: &UMatrix,
        y_inv: &UMatrix,
    ) -> UMatrix {
        x.mul(ring, y).mul(ring, x_inv).mul(ring, y_inv)
    }

    pub fn commutator(ring: &InvolutiveRing, x: &UMatrix, y: &UMatrix) -> Result<UMatrix> {
        Ok(UMatrix::commutator_with(ring, x, y, &x.inverse(ring)?, &y.inverse(ring)?))
    }

    /// `ˣy = x y x⁻¹`.
    pub fn conjugate_with(ring: &InvolutiveRing, x: &UMatrix, x_inv: &UMatrix, y: &UMatrix) -> UMatrix {
        x.mul(ring, y).mul(ring, x_inv)
    }

    /// `g - e`.
    pub fn minus_identity(&self, ring: &InvolutiveRing) -> UMatrix {
        let mut m = self.clone();
        for p in 0..self.dim() {
            let x = m.at(p, p);
            m.set_at(p, p, ring.sub(x, ring.one()));
        }
        m
    }

    /// Renders rows using ring labels.
    pub fn pretty(&self, ring: &InvolutiveRing) -> String {
        let mut s = String::new();
        for row in self.entries.chunks(self.dim()) {
            let cells: Vec<&str> = row.iter().map(|&x| ring.label(x)).collect();
            s.push_str(&cells.join(" "));
            s.push('\n');
        }
        s
    }
}

fn swap_rows(m: &mut UMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    let d = m.dim();
    for c in 0..d {
        m.entries.swap(a * d + c, b * d + c);
    }
}

fn scale_row(ring: &InvolutiveRing, m: &mut UMatrix, r: usize, u: Elem) {
    let d = m.dim();
    for c in 0..d {
        m.entries[r * d + c] = ring.mul(u, m.entries[r * d + c]);
    }
}

/// `row_r += t * row_s`.
fn add_row_multiple(ring: &InvolutiveRing, m: &mut UMatrix, r: usize, s: usize, t: Elem) {
    let d = m.dim();
    for c in 0..d {
        let x = ring.add(m.entries[r * d + c], ring.mul(t, m.entries[s * d + c]));
        m.entries[r * d + c] = x;
    }
}

/// Packed canonical encoding of a matrix.
pub type Key = [u64; 4];

/// Packs entries in position order, `⌈log₂|A|⌉` bits each.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KeyCodec {
    n: usize,
    bits: u32,
}

impl KeyCodec {
    pub const CAPACITY_BITS: usize = 256;

    pub fn new(ring: &InvolutiveRing, n: usize) -> Result<Self> {
        let bits = (usize::BITS - (ring.order() - 1).leading_zeros()).max(1);
        let total = 4 * n * n * bits as usize;
        if total > Self::CAPACITY_BITS {
            return Err(Error::Dimension(format!(
                "{total}-bit matrix encoding exceeds {} bits",
                Self::CAPACITY_BITS
            )));
        }
        Ok(KeyCodec { n, bits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits_per_entry(&self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn encode(&self, m: &UMatrix) -> Key {
        debug_assert_eq!(m.n, self.n);
        let mut key = [0u64; 4];
        let b = self.bits as usize;
        for (k, &x) in m.entries.iter().enumerate() {
            let off = k * b;
            let (w, s) = (off / 64, off % 64);
            key[w] |= (x as u64) << s;
            if s + b > 64 {
                key[w + 1] |= (x as u64) >> (64 - s);
            }
        }
        key
    }

    #[inline]
    pub fn decode(&self, key: &Key) -> UMatrix {
        let mut m = UMatrix { n: self.n, entries: Vec::new() };
        self.decode_into(key, &mut m);
        m
    }

    #[inline]
    pub fn decode_into(&self, key: &Key, out: &mut UMatrix) {
        let b = self.bits as usize;
        let mask = (1u64 << b) - 1;
        let count = 4 * self.n * self.n;
        out.n = self.n;
        out.entries.clear();
        out.entries.extend((0..count).map(|k| {
            let off = k * b;
            let (w, s) = (off / 64, off % 64);
            let mut v = key[w] >> s;
            if s + b > 64 {
                v |= key[w + 1] << (64 - s);
            }
            (v & mask) as Elem
        }));
    }
}
