//! Oriented hypercubes on the integer lattice `Z^n` and their boundary algebra.
//!
//! A `j`-cube is stored as a base point together with an [`IndexMap`]: the set of
//! directions it spans and whether they are traversed in increasing (`+`) or
//! decreasing (`-`) order. A positive cube has its base at the smallest vertex, a
//! negative one at the largest. Reversing a cube moves the base to the opposite
//! corner and flips the traversal, so every unoriented cube has exactly two
//! representatives. Vertices carry an explicit in/out flag, `(x; +)` and `(x; -)`.
//!
//! Everything here is exact integer combinatorics; the mesh size only enters
//! through the measure used by [`crate::cochains`].

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Orientation sign of an index map or cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    /// `(-1)^k`.
    pub fn from_parity(k: usize) -> Sign {
        if k % 2 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn to_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn to_f64(self) -> f64 {
        f64::from(self.to_i32())
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self.flip()
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// A strictly monotone map `{1..j} -> {1..n}`: the ordered list of directions a
/// cube is spanned by, encoded as its (sorted) image plus a traversal sign.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexMap {
    ambient_dim: usize,
    dims: Vec<usize>,
    sign: Sign,
}

impl IndexMap {
    /// `dims` must be strictly increasing with entries in `1..=ambient_dim`.
    pub fn new(ambient_dim: usize, dims: Vec<usize>, sign: Sign) -> Result<Self> {
        if dims.len() > ambient_dim {
            return Err(Error::InvalidIndexMap(format!(
                "{} directions in dimension {}",
                dims.len(),
                ambient_dim
            )));
        }
        if dims.iter().any(|&d| d == 0 || d > ambient_dim) {
            return Err(Error::InvalidIndexMap(format!(
                "directions {dims:?} not within 1..={ambient_dim}"
            )));
        }
        if dims.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidIndexMap(format!(
                "directions {dims:?} not strictly increasing"
            )));
        }
        Ok(Self {
            ambient_dim,
            dims,
            sign,
        })
    }

    /// The degree-0 map; `sign` is the vertex in/out flag.
    pub fn empty(ambient_dim: usize, sign: Sign) -> Self {
        Self {
            ambient_dim,
            dims: Vec::new(),
            sign,
        }
    }

    /// Builds the map from its values `ŝ(1), ..., ŝ(j)`. The sequence must be
    /// strictly monotone; for `j < 2` the direction is ambiguous and `Plus` is used.
    pub fn from_traversal(ambient_dim: usize, seq: &[usize]) -> Result<Self> {
        let increasing = seq.windows(2).all(|w| w[0] < w[1]);
        let decreasing = seq.windows(2).all(|w| w[0] > w[1]);
        let sign = if increasing {
            Sign::Plus
        } else if decreasing {
            Sign::Minus
        } else {
            return Err(Error::InvalidIndexMap(format!(
                "{seq:?} is not strictly monotone"
            )));
        };
        let mut dims = seq.to_vec();
        dims.sort_unstable();
        Self::new(ambient_dim, dims, sign)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn degree(&self) -> usize {
        self.dims.len()
    }

    /// Image of the map, sorted increasingly.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// The values `ŝ(1), ..., ŝ(j)` in traversal order.
    pub fn traversal(&self) -> Vec<usize> {
        match self.sign {
            Sign::Plus => self.dims.clone(),
            Sign::Minus => self.dims.iter().rev().copied().collect(),
        }
    }

    /// `ŝ(i)` for `1 <= i <= j`.
    pub fn at(&self, i: usize) -> Result<usize> {
        let j = self.degree();
        if i == 0 || i > j {
            return Err(Error::IndexOutOfRange { index: i, len: j });
        }
        Ok(match self.sign {
            Sign::Plus => self.dims[i - 1],
            Sign::Minus => self.dims[j - i],
        })
    }

    /// 1-based rank of `ŝ(i)` within the sorted image.
    pub fn sorted_rank(&self, i: usize) -> Result<usize> {
        let j = self.degree();
        if i == 0 || i > j {
            return Err(Error::IndexOutOfRange { index: i, len: j });
        }
        Ok(match self.sign {
            Sign::Plus => i,
            Sign::Minus => j - i + 1,
        })
    }

    /// Drops the `i0`-th direction in traversal order, keeping the sign.
    pub fn restrict(&self, i0: usize) -> Result<IndexMap> {
        let pos = self.sorted_rank(i0)? - 1;
        let mut dims = self.dims.clone();
        dims.remove(pos);
        Ok(Self {
            ambient_dim: self.ambient_dim,
            dims,
            sign: self.sign,
        })
    }

    /// `ŝ*(i) = ŝ(j - i + 1)`: same directions, opposite traversal.
    pub fn involute(&self) -> IndexMap {
        Self {
            ambient_dim: self.ambient_dim,
            dims: self.dims.clone(),
            sign: self.sign.flip(),
        }
    }

    /// Every map in `P^{j,n}` (both traversal signs), positive ones first.
    pub fn all(ambient_dim: usize, degree: usize) -> Vec<IndexMap> {
        let positive: Vec<IndexMap> = combinations(ambient_dim, degree)
            .into_iter()
            .map(|dims| Self {
                ambient_dim,
                dims,
                sign: Sign::Plus,
            })
            .collect();
        let negative: Vec<IndexMap> = positive.iter().map(IndexMap::involute).collect();
        positive.into_iter().chain(negative).collect()
    }
}

impl fmt::Display for IndexMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let seq: Vec<String> = self.traversal().iter().map(|d| d.to_string()).collect();
        write!(f, "({}){}", seq.join(","), self.sign.symbol())
    }
}

/// All strictly increasing `k`-tuples from `1..=n`, in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for d in start..=n {
            if n - d + 1 < k - cur.len() {
                break;
            }
            cur.push(d);
            rec(d + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(1, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// An oriented `j`-cube `(⌊s⌋; ŝ)` in `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedCube {
    base: Vec<i64>,
    imap: IndexMap,
}

impl OrientedCube {
    pub fn new(base: Vec<i64>, imap: IndexMap) -> Result<Self> {
        if base.len() != imap.ambient_dim {
            return Err(Error::DimensionMismatch(base.len(), imap.ambient_dim));
        }
        Ok(Self { base, imap })
    }

    /// The vertex `(x; ±)`.
    pub fn vertex(base: Vec<i64>, sign: Sign) -> Self {
        let n = base.len();
        Self {
            base,
            imap: IndexMap::empty(n, sign),
        }
    }

    /// The positively oriented cube with smallest vertex `base` spanning `dims`.
    pub fn positive(base: Vec<i64>, dims: Vec<usize>) -> Result<Self> {
        let imap = IndexMap::new(base.len(), dims, Sign::Plus)?;
        Ok(Self { base, imap })
    }

    pub fn degree(&self) -> usize {
        self.imap.degree()
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.len()
    }

    /// The base point `⌊s⌋`.
    pub fn floor(&self) -> &[i64] {
        &self.base
    }

    pub fn imap(&self) -> &IndexMap {
        &self.imap
    }

    pub fn dims(&self) -> &[usize] {
        self.imap.dims()
    }

    pub fn sign(&self) -> Sign {
        self.imap.sign
    }

    /// `⌈s⌉ = ⌊s⌋ + sgn(s) Σ δ_{ŝ(i)}`, the corner opposite to the base.
    pub fn ceiling(&self) -> Vec<i64> {
        let step = i64::from(self.sign().to_i32());
        let mut c = self.base.clone();
        for &d in self.imap.dims() {
            c[d - 1] += step;
        }
        c
    }

    /// `s̄ = (⌈s⌉; ŝ*)`.
    pub fn reverse(&self) -> OrientedCube {
        Self {
            base: self.ceiling(),
            imap: self.imap.involute(),
        }
    }

    /// `(-1)^k s`, i.e. `s` for `Plus` and `s̄` for `Minus`.
    pub fn times(self, sign: Sign) -> OrientedCube {
        match sign {
            Sign::Plus => self,
            Sign::Minus => self.reverse(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.sign() == Sign::Plus
    }

    /// The positive representative `c` and the sign `σ` with `self = σ c`.
    pub fn canonical(&self) -> (OrientedCube, Sign) {
        match self.sign() {
            Sign::Plus => (self.clone(), Sign::Plus),
            Sign::Minus => (self.reverse(), Sign::Minus),
        }
    }

    pub fn translate(&self, offset: &[i64]) -> OrientedCube {
        let base = self.base.iter().zip(offset).map(|(a, b)| a + b).collect();
        Self {
            base,
            imap: self.imap.clone(),
        }
    }

    /// The `2^j` lattice points of the cube; shared by both orientations.
    pub fn vertex_set(&self) -> BTreeSet<Vec<i64>> {
        let step = i64::from(self.sign().to_i32());
        let dims = self.imap.dims();
        (0u64..(1u64 << dims.len()))
            .map(|mask| {
                let mut v = self.base.clone();
                for (bit, &d) in dims.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        v[d - 1] += step;
                    }
                }
                v
            })
            .collect()
    }

    /// Oriented boundary: `2j` faces, `j` anchored at `⌊s⌋` and `j` at `⌈s⌉`.
    ///
    /// The face obtained by dropping `ŝ(i)` carries the sign `sgn(s)(-1)^k`, where
    /// `k` is the sorted rank of the dropped direction; the same sign applies to
    /// the base-anchored face `(⌊s⌋; ᵢŝ)` and to the opposite face `(⌈s⌉; (ᵢŝ)*)`.
    /// For even `j` this coincides with [`OrientedCube::boundary_printed`].
    pub fn boundary(&self) -> Result<SignedCubeSet> {
        let j = self.degree();
        if j == 0 {
            return Err(Error::NoBoundary);
        }
        let ceil = self.ceiling();
        let mut floor_faces = Vec::with_capacity(j);
        let mut ceil_faces = Vec::with_capacity(j);
        for i in 1..=j {
            let face_map = self.imap.restrict(i)?;
            let eps = self.sign() * Sign::from_parity(self.imap.sorted_rank(i)?);
            ceil_faces.push(
                Self {
                    base: ceil.clone(),
                    imap: face_map.involute(),
                }
                .times(eps),
            );
            floor_faces.push(
                Self {
                    base: self.base.clone(),
                    imap: face_map,
                }
                .times(eps),
            );
        }
        floor_faces.extend(ceil_faces);
        Ok(SignedCubeSet(floor_faces))
    }

    /// The boundary exactly as the displayed definition reads: for `j >= 2`,
    /// `(-1)^{j-i} (⌊s⌋; ᵢŝ)` and `(-1)^i (⌈s⌉; (ᵢŝ)*)`; for an edge from `x` to
    /// `y`, `{(x; -), (y; +)}`.
    ///
    /// Kept for reproducing the worked examples. For odd `j >= 3` this set is not
    /// a cycle (`∂∂` is not involutive), so the cochain operators use
    /// [`OrientedCube::boundary`].
    pub fn boundary_printed(&self) -> Result<SignedCubeSet> {
        let j = self.degree();
        match j {
            0 => Err(Error::NoBoundary),
            1 => Ok(SignedCubeSet(vec![
                Self::vertex(self.base.clone(), Sign::Minus),
                Self::vertex(self.ceiling(), Sign::Plus),
            ])),
            _ => {
                let mut faces = Vec::with_capacity(2 * j);
                for i in 1..=j {
                    faces.push(self.floor_face_printed(i)?);
                }
                for i in 1..=j {
                    faces.push(self.ceil_face_printed(i)?);
                }
                Ok(SignedCubeSet(faces))
            }
        }
    }

    /// `A_i(s) = (-1)^{j-i} (⌊s⌋; ᵢŝ)`.
    pub fn floor_face_printed(&self, i: usize) -> Result<OrientedCube> {
        let j = self.degree();
        let face = Self {
            base: self.base.clone(),
            imap: self.imap.restrict(i)?,
        };
        Ok(face.times(Sign::from_parity(j - i)))
    }

    /// `B_i(s) = (-1)^i (⌈s⌉; (ᵢŝ)*)`.
    pub fn ceil_face_printed(&self, i: usize) -> Result<OrientedCube> {
        let face = Self {
            base: self.ceiling(),
            imap: self.imap.restrict(i)?.involute(),
        };
        Ok(face.times(Sign::from_parity(i)))
    }

    /// All oriented `(j+1)`-cubes whose boundary contains `self`.
    ///
    /// For each of the `2(n - j)` unoriented cubes containing this one exactly
    /// one orientation has it as a face.
    pub fn cofaces(&self) -> Result<SignedCubeSet> {
        let n = self.ambient_dim();
        let j = self.degree();
        if j >= n {
            return Err(Error::NoCofaces(j));
        }
        let (canon, _) = self.canonical();
        let reversed = self.reverse();
        let mut out = Vec::with_capacity(2 * (n - j));
        for alpha in 1..=n {
            if canon.dims().contains(&alpha) {
                continue;
            }
            let mut dims = canon.dims().to_vec();
            dims.push(alpha);
            dims.sort_unstable();
            for shift in [0, 1] {
                let mut base = canon.base.clone();
                base[alpha - 1] -= shift;
                let s = Self::positive(base, dims.clone())?;
                let bd = s.boundary()?;
                if bd.contains(self) {
                    out.push(s);
                } else if bd.contains(&reversed) {
                    out.push(s.reverse());
                } else {
                    unreachable!("{s} does not contain {self}");
                }
            }
        }
        Ok(SignedCubeSet(out))
    }
}

impl fmt::Display for OrientedCube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords: Vec<String> = self.base.iter().map(|c| c.to_string()).collect();
        if self.degree() == 0 {
            write!(f, "({}; {})", coords.join(","), self.sign().symbol())
        } else {
            let dirs: Vec<String> = self
                .imap
                .traversal()
                .iter()
                .map(|d| d.to_string())
                .collect();
            write!(
                f,
                "({}; {}; {})",
                coords.join(","),
                dirs.join(" "),
                self.sign().symbol()
            )
        }
    }
}

fn parse_sign(s: &str) -> Result<Sign> {
    match s.trim() {
        "+" => Ok(Sign::Plus),
        "-" => Ok(Sign::Minus),
        other => Err(Error::Parse(format!("expected `+` or `-`, got `{other}`"))),
    }
}

impl FromStr for OrientedCube {
    type Err = Error;

    /// Parses `(x1,...,xn; d1 d2 ... dj; ±)` or, for vertices, `(x1,...,xn; ±)`.
    /// Directions are listed in traversal order.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("`{s}` is not parenthesized")))?;
        let parts: Vec<&str> = inner.split(';').collect();
        let base = parts[0]
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::Parse(format!("coordinate `{}`: {e}", c.trim())))
            })
            .collect::<Result<Vec<i64>>>()?;
        let n = base.len();
        match parts.len() {
            2 => Ok(Self::vertex(base, parse_sign(parts[1])?)),
            3 => {
                let sign = parse_sign(parts[2])?;
                let seq = parts[1]
                    .split_whitespace()
                    .map(|d| {
                        d.parse::<usize>()
                            .map_err(|e| Error::Parse(format!("direction `{d}`: {e}")))
                    })
                    .collect::<Result<Vec<usize>>>()?;
                let imap = if seq.len() < 2 {
                    let mut dims = seq;
                    dims.sort_unstable();
                    IndexMap::new(n, dims, sign)?
                } else {
                    let imap = IndexMap::from_traversal(n, &seq)?;
                    if imap.sign != sign {
                        return Err(Error::Parse(format!(
                            "directions {seq:?} do not match orientation `{}`",
                            sign.symbol()
                        )));
                    }
                    imap
                };
                Self::new(base, imap)
            }
            _ => Err(Error::Parse(format!("`{s}` has {} fields", parts.len()))),
        }
    }
}

/// A set of oriented cubes; `(-1) s` is represented by `s.reverse()`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SignedCubeSet(Vec<OrientedCube>);

impl SignedCubeSet {
    /// Fails if a cube appears twice with the same orientation.
    pub fn new(cubes: Vec<OrientedCube>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for c in &cubes {
            if !seen.insert(c) {
                return Err(Error::InvalidArgument(format!("duplicate cube {c}")));
            }
        }
        Ok(Self(cubes))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, OrientedCube> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[OrientedCube] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<OrientedCube> {
        self.0
    }

    pub fn contains(&self, cube: &OrientedCube) -> bool {
        self.0.contains(cube)
    }

    /// Reverses every element.
    pub fn reversed(&self) -> SignedCubeSet {
        Self(self.0.iter().map(OrientedCube::reverse).collect())
    }

    /// Equality as unordered sets.
    pub fn same_set(&self, other: &SignedCubeSet) -> bool {
        let a: BTreeSet<&OrientedCube> = self.0.iter().collect();
        let b: BTreeSet<&OrientedCube> = other.0.iter().collect();
        a == b && a.len() == self.0.len() && b.len() == other.0.len()
    }
}

impl<'a> IntoIterator for &'a SignedCubeSet {
    type Item = &'a OrientedCube;
    type IntoIter = std::slice::Iter<'a, OrientedCube>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for SignedCubeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn imap(n: usize, seq: &[usize]) -> IndexMap {
        IndexMap::from_traversal(n, seq).unwrap()
    }

    fn cube(s: &str) -> OrientedCube {
        s.parse().unwrap()
    }

    #[test]
    fn restrict_examples() {
        assert_eq!(imap(3, &[1, 2, 3]).restrict(1).unwrap(), imap(3, &[2, 3]));
        let r = IndexMap::new(2, vec![1, 2], Sign::Plus)
            .unwrap()
            .restrict(2)
            .unwrap();
        assert_eq!(r, IndexMap::new(2, vec![1], Sign::Plus).unwrap());
        let s = imap(3, &[1, 2, 3]);
        let a = s.restrict(3).unwrap().restrict(1).unwrap();
        let b = s.restrict(1).unwrap().restrict(2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, IndexMap::new(3, vec![2], Sign::Plus).unwrap());
    }

    #[test]
    fn restrict_out_of_range() {
        let s = imap(3, &[1, 2]);
        assert_eq!(
            s.restrict(0),
            Err(Error::IndexOutOfRange { index: 0, len: 2 })
        );
        assert_eq!(
            s.restrict(3),
            Err(Error::IndexOutOfRange { index: 3, len: 2 })
        );
    }

    #[test]
    fn restrict_negative_follows_traversal() {
        // (3,2,1)-: dropping the first traversed direction removes 3.
        let s = imap(3, &[3, 2, 1]);
        assert_eq!(s.restrict(1).unwrap(), imap(3, &[2, 1]));
        assert_eq!(s.restrict(3).unwrap(), imap(3, &[3, 2]));
    }

    #[test]
    fn involute_examples() {
        let s = imap(3, &[1, 3]);
        assert_eq!(s.involute(), imap(3, &[3, 1]));
        let t = IndexMap::new(5, vec![2, 5], Sign::Minus).unwrap();
        assert_eq!(t.involute().involute(), t);
        let u = imap(3, &[1, 2, 3]);
        let lhs = u.involute().restrict(2).unwrap();
        let rhs = u.restrict(3 - 2 + 1).unwrap().involute();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, imap(3, &[3, 1]));
    }

    #[test]
    fn index_map_validation() {
        assert!(IndexMap::new(3, vec![2, 1], Sign::Plus).is_err());
        assert!(IndexMap::new(3, vec![0], Sign::Plus).is_err());
        assert!(IndexMap::new(2, vec![3], Sign::Plus).is_err());
        assert!(IndexMap::from_traversal(3, &[1, 3, 2]).is_err());
    }

    #[test]
    fn reverse_examples() {
        let s = OrientedCube::positive(vec![0, 0], vec![1, 2]).unwrap();
        assert_eq!(s.reverse(), cube("(1,1; 2 1; -)"));
        let v = cube("(4,-2; +)");
        assert_eq!(v.reverse(), cube("(4,-2; -)"));
        assert_eq!(s.reverse().reverse(), s);
    }

    #[test]
    fn ceiling_and_vertices() {
        let s = cube("(1,1,1; 3 1; -)");
        assert_eq!(s.ceiling(), vec![0, 1, 0]);
        assert_eq!(s.vertex_set(), s.reverse().vertex_set());
        assert_eq!(s.vertex_set().len(), 4);
    }

    #[test]
    fn edge_boundary() {
        let e = OrientedCube::positive(vec![2, 5], vec![1]).unwrap();
        let expected = SignedCubeSet::new(vec![cube("(2,5; -)"), cube("(3,5; +)")]).unwrap();
        assert!(e.boundary().unwrap().same_set(&expected));
        assert!(e.boundary_printed().unwrap().same_set(&expected));
        // the reversed edge runs from (3,5) to (2,5)
        let back = SignedCubeSet::new(vec![cube("(3,5; -)"), cube("(2,5; +)")]).unwrap();
        assert!(e.reverse().boundary().unwrap().same_set(&back));
    }

    #[test]
    fn square_boundary_is_counterclockwise_loop() {
        let s = OrientedCube::positive(vec![0, 0], vec![1, 2]).unwrap();
        let expected = SignedCubeSet::new(vec![
            cube("(0,0; 2; +)").reverse(),
            cube("(0,0; 1; +)"),
            cube("(1,1; 2; -)").reverse(),
            cube("(1,1; 1; -)"),
        ])
        .unwrap();
        assert!(s.boundary().unwrap().same_set(&expected));
        assert!(s.boundary_printed().unwrap().same_set(&expected));
    }

    #[test]
    fn vertex_has_no_boundary() {
        assert_eq!(cube("(0; +)").boundary(), Err(Error::NoBoundary));
    }

    #[test]
    fn coface_counts() {
        let v = cube("(0,0; +)");
        assert_eq!(v.cofaces().unwrap().len(), 4);
        let e = cube("(0,0,0; 2; +)");
        assert_eq!(e.cofaces().unwrap().len(), 4);
        let top = cube("(0,0; 1 2; +)");
        assert_eq!(top.cofaces(), Err(Error::NoCofaces(2)));
        for s in e.cofaces().unwrap().iter() {
            assert!(s.boundary().unwrap().contains(&e));
        }
    }

    #[test]
    fn literal_round_trip() {
        for lit in [
            "(0,0,0; 1 2 3; +)",
            "(1,-1; 2 1; -)",
            "(7; -)",
            "(0,3; 2; -)",
        ] {
            assert_eq!(cube(lit).to_string(), lit);
        }
        assert!("(0,0; 1 2; -)".parse::<OrientedCube>().is_err());
        assert!("0,0; +".parse::<OrientedCube>().is_err());
    }

    #[test]
    fn signed_set_rejects_duplicates() {
        let v = cube("(0; +)");
        assert!(SignedCubeSet::new(vec![v.clone(), v.clone()]).is_err());
        assert!(SignedCubeSet::new(vec![v.clone(), v.reverse()]).is_ok());
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(4, 2),
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![1, 4],
                vec![2, 3],
                vec![2, 4],
                vec![3, 4]
            ]
        );
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }
}
