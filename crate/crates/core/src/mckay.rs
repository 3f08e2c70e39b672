//! Finite subgroups of SL2 and their affine ADE Dynkin diagrams: adjacency,
//! Cartan matrices, marks, lattice cokernels, and the character dictionary
//! between class functions on a cyclic group and vertex-indexed coordinates.

use crate::exactmat::{cyclotomic_polynomial, smith_normal_form, Int, IntMatrix, Rat};
use crate::{Error, Result};
use num_traits::{One, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaKind {
    Trivial,
    Cyclic(u32),
    BinaryDihedral(u32),
    BinaryTetrahedral,
    BinaryOctahedral,
    BinaryIcosahedral,
}

/// A finite subgroup of SL2 up to conjugacy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GammaDescriptor {
    pub kind: GammaKind,
}

impl GammaDescriptor {
    pub fn trivial() -> Self {
        GammaDescriptor { kind: GammaKind::Trivial }
    }

    /// Cyclic group of order `ell`; order 1 degenerates to the trivial group.
    pub fn cyclic(ell: u32) -> Result<Self> {
        match ell {
            0 => Err(Error::UnsupportedGroup("cyclic group of order 0".into())),
            1 => Ok(Self::trivial()),
            _ => Ok(GammaDescriptor { kind: GammaKind::Cyclic(ell) }),
        }
    }

    /// Binary dihedral group of order `4d`, `d >= 2`.
    pub fn binary_dihedral(d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::UnsupportedGroup(format!(
                "binary dihedral parameter {d} (need d >= 2; smaller cases are cyclic)"
            )));
        }
        Ok(GammaDescriptor { kind: GammaKind::BinaryDihedral(d) })
    }

    pub fn binary_tetrahedral() -> Self {
        GammaDescriptor { kind: GammaKind::BinaryTetrahedral }
    }

    pub fn binary_octahedral() -> Self {
        GammaDescriptor { kind: GammaKind::BinaryOctahedral }
    }

    pub fn binary_icosahedral() -> Self {
        GammaDescriptor { kind: GammaKind::BinaryIcosahedral }
    }

    pub fn order(&self) -> u64 {
        match self.kind {
            GammaKind::Trivial => 1,
            GammaKind::Cyclic(l) => l as u64,
            GammaKind::BinaryDihedral(d) => 4 * d as u64,
            GammaKind::BinaryTetrahedral => 24,
            GammaKind::BinaryOctahedral => 48,
            GammaKind::BinaryIcosahedral => 120,
        }
    }

    /// Number of nontrivial irreducible representations (finite diagram rank).
    pub fn finite_rank(&self) -> usize {
        self.affine_diagram().vertex_count() - 1
    }

    pub fn label(&self) -> String {
        match self.kind {
            GammaKind::Trivial => "trivial".into(),
            GammaKind::Cyclic(l) => format!("cyclic({l})"),
            GammaKind::BinaryDihedral(d) => format!("binary_dihedral({d})"),
            GammaKind::BinaryTetrahedral => "binary_tetrahedral".into(),
            GammaKind::BinaryOctahedral => "binary_octahedral".into(),
            GammaKind::BinaryIcosahedral => "binary_icosahedral".into(),
        }
    }

    pub fn affine_diagram(&self) -> AffineDynkin {
        match self.kind {
            GammaKind::Trivial => AffineDynkin::degenerate_point(),
            GammaKind::Cyclic(2) => AffineDynkin::a1(),
            GammaKind::Cyclic(l) => AffineDynkin::cycle(l as usize),
            GammaKind::BinaryDihedral(d) => AffineDynkin::d_type(d as usize + 2),
            GammaKind::BinaryTetrahedral => AffineDynkin::e_type(6),
            GammaKind::BinaryOctahedral => AffineDynkin::e_type(7),
            GammaKind::BinaryIcosahedral => AffineDynkin::e_type(8),
        }
    }
}

/// An affine Dynkin diagram with a distinguished affine vertex 0.
///
/// Vertex ordering conventions (documented, fixed):
/// - cycles: vertices 0..l-1 in cycle order, 0 the affine vertex;
/// - D-type on k+1 vertices: 0 (affine) and 1 are the short tail attached to
///   2, then the chain 2..k-2, with k-1 and k forked off vertex k-2;
/// - E-type: a chain 0-1-2-... starting at the affine vertex with the single
///   branch vertex listed last, attached to the unique degree-3 chain vertex.
///
/// `cartan` equals `2*Id - adjacency` except for the two degenerate records:
/// the one-vertex diagram stores the 1x1 zero matrix, and the two-vertex
/// cycle stores off-diagonal entries -2 with a zero adjacency matrix (edge
/// multiplicity 2 is never represented in `adjacency`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineDynkin {
    pub label: String,
    pub adjacency: IntMatrix,
    pub cartan: IntMatrix,
    pub marks: Vec<i64>,
}

impl AffineDynkin {
    pub fn vertex_count(&self) -> usize {
        self.marks.len()
    }

    /// Cartan matrix of the finite diagram (affine vertex deleted).
    pub fn finite_cartan(&self) -> IntMatrix {
        let n = self.vertex_count();
        let mut m = IntMatrix::zeros(n - 1, n - 1);
        for i in 1..n {
            for j in 1..n {
                m.set(i - 1, j - 1, self.cartan.get(i, j).clone());
            }
        }
        m
    }

    fn from_edges(label: &str, n: usize, edges: &[(usize, usize)], marks: Vec<i64>) -> Self {
        let mut adjacency = IntMatrix::zeros(n, n);
        for &(a, b) in edges {
            adjacency.set(a, b, Int::one());
            adjacency.set(b, a, Int::one());
        }
        let mut cartan = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let v = if i == j { Int::from(2) } else { -adjacency.get(i, j) };
                cartan.set(i, j, v);
            }
        }
        AffineDynkin { label: label.into(), adjacency, cartan, marks }
    }

    fn degenerate_point() -> Self {
        AffineDynkin {
            label: "point".into(),
            adjacency: IntMatrix::zeros(1, 1),
            cartan: IntMatrix::zeros(1, 1),
            marks: vec![1],
        }
    }

    fn a1() -> Self {
        let mut cartan = IntMatrix::zeros(2, 2);
        cartan.set(0, 0, Int::from(2));
        cartan.set(1, 1, Int::from(2));
        cartan.set(0, 1, Int::from(-2));
        cartan.set(1, 0, Int::from(-2));
        AffineDynkin {
            label: "A1^(1)".into(),
            adjacency: IntMatrix::zeros(2, 2),
            cartan,
            marks: vec![1, 1],
        }
    }

    fn cycle(l: usize) -> Self {
        let edges: Vec<(usize, usize)> = (0..l).map(|i| (i, (i + 1) % l)).collect();
        Self::from_edges(&format!("A{}^(1)", l - 1), l, &edges, vec![1; l])
    }

    fn d_type(k: usize) -> Self {
        let n = k + 1;
        let mut edges = vec![(0, 2), (1, 2), (k - 2, k - 1), (k - 2, k)];
        for i in 2..k - 2 {
            edges.push((i, i + 1));
        }
        let mut marks = vec![2i64; n];
        marks[0] = 1;
        marks[1] = 1;
        marks[k - 1] = 1;
        marks[k] = 1;
        Self::from_edges(&format!("D{k}^(1)"), n, &edges, marks)
    }

    fn e_type(k: usize) -> Self {
        let (edges, marks): (Vec<(usize, usize)>, Vec<i64>) = match k {
            6 => (vec![(0, 6), (6, 3), (1, 2), (2, 3), (3, 4), (4, 5)], vec![1, 1, 2, 3, 2, 1, 2]),
            7 => (
                vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (3, 7)],
                vec![1, 2, 3, 4, 3, 2, 1, 2],
            ),
            8 => (
                vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (5, 8)],
                vec![1, 2, 3, 4, 5, 6, 4, 2, 3],
            ),
            _ => unreachable!("only E6, E7, E8 exist"),
        };
        Self::from_edges(&format!("E{k}^(1)"), k + 1, &edges, marks)
    }
}

/// Invariant factors (> 1) of the finite Cartan cokernel: the weight/root
/// lattice quotient of the finite diagram, isomorphic to the abelianization
/// of the group.
pub fn fundamental_group(g: &GammaDescriptor) -> Vec<Int> {
    let finite = g.affine_diagram().finite_cartan();
    let (factors, _) = smith_normal_form(&finite);
    factors.into_iter().filter(|f| f > &Int::one()).collect()
}

/// Rational class function on a cyclic group, indexed by powers of the
/// generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicClassFunction {
    pub ell: usize,
    pub entries: Vec<Rat>,
}

impl CyclicClassFunction {
    pub fn new(entries: Vec<Rat>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DimensionMismatch("class function on the empty group".into()));
        }
        Ok(CyclicClassFunction { ell: entries.len(), entries })
    }
}

/// Element of the rational group algebra of a cyclic group: a vector in the
/// basis 1, z, ..., z^{l-1} where z is the distinguished primitive root of
/// unity. Canonical form reduces exponents mod l only; the vector is *not*
/// reduced modulo the cyclotomic relation, so distinct vectors may represent
/// the same complex number (compare with `value_eq`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicVector {
    pub ell: usize,
    pub coeffs: Vec<Rat>,
}

impl CyclotomicVector {
    pub fn zero(ell: usize) -> Self {
        CyclotomicVector { ell, coeffs: vec![Rat::zero(); ell] }
    }

    pub fn from_rational(ell: usize, value: Rat) -> Self {
        let mut v = Self::zero(ell);
        v.coeffs[0] = value;
        v
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    /// Multiply by z^k (k may be negative).
    pub fn rotated(&self, k: i64) -> Self {
        let l = self.ell as i64;
        let shift = k.rem_euclid(l) as usize;
        let mut out = Self::zero(self.ell);
        for (i, c) in self.coeffs.iter().enumerate() {
            out.coeffs[(i + shift) % self.ell] = c.clone();
        }
        out
    }

    /// Remainder of the vector modulo the l-th cyclotomic polynomial.
    fn cyclotomic_residue(&self) -> Vec<Rat> {
        let phi = cyclotomic_polynomial(self.ell as u32);
        let phi: Vec<Rat> = phi.coeffs().iter().map(|c| Rat::from_integer(c.clone())).collect();
        let deg = phi.len() - 1;
        let mut rem = self.coeffs.clone();
        for k in (deg..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let c = rem[k].clone(); // phi is monic
            for (i, p) in phi.iter().enumerate() {
                let v = &rem[k - deg + i] - &c * p;
                rem[k - deg + i] = v;
            }
        }
        rem.truncate(deg);
        rem
    }

    /// True when the two vectors represent the same complex number.
    pub fn value_eq(&self, other: &Self) -> bool {
        if self.ell != other.ell {
            return false;
        }
        let a = self.cyclotomic_residue();
        let b = other.cyclotomic_residue();
        a == b
    }

    /// The rational number this vector represents, if it represents one.
    pub fn as_rational(&self) -> Option<Rat> {
        let rem = self.cyclotomic_residue();
        if rem.iter().skip(1).all(Rat::is_zero) {
            Some(rem.first().cloned().unwrap_or_else(Rat::zero))
        } else {
            None
        }
    }
}

/// Character-side coordinates of a rational class function: the i-th output
/// is (1/l) sum_j c(j) z^{ij}, one coordinate per irreducible character.
pub fn lambda_from_c(c: &CyclicClassFunction) -> Vec<CyclotomicVector> {
    let l = c.ell;
    let inv = Rat::new(Int::one(), Int::from(l as i64));
    (0..l)
        .map(|i| {
            let mut v = CyclotomicVector::zero(l);
            for (j, cj) in c.entries.iter().enumerate() {
                v.coeffs[(i * j) % l] += cj * &inv;
            }
            v
        })
        .collect()
}

/// Inverse of `lambda_from_c`: recovers the class function from character
/// coordinates. Errors if some recovered entry is not rational (the input is
/// not in the image of the forward map).
pub fn c_from_lambda(lambda: &[CyclotomicVector]) -> Result<CyclicClassFunction> {
    let l = lambda.len();
    if l == 0 || lambda.iter().any(|v| v.ell != l) {
        return Err(Error::DimensionMismatch("need one coordinate per character".into()));
    }
    let mut entries = Vec::with_capacity(l);
    for j in 0..l {
        let mut w = CyclotomicVector::zero(l);
        for (i, lam) in lambda.iter().enumerate() {
            w.add_assign(&lam.rotated(-((i * j) as i64)));
        }
        let value = w
            .as_rational()
            .ok_or_else(|| Error::Inconsistent(format!("entry {j} is not rational")))?;
        entries.push(value);
    }
    CyclicClassFunction::new(entries)
}
