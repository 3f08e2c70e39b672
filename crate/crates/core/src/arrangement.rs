//! Parameter faces for wreath-product symplectic reflection algebras, the
//! singular hyperplane arrangement through a face, asphericity predictions,
//! and the Lie subalgebra generated by the singular directions.

use crate::exactmat::{Rat, RatMatrix};
use crate::mckay::GammaDescriptor;
use crate::weights::{root_coords_positive, AffineRoot, RootSystem};
use crate::{Error, Result};
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// A rational-linear expression `constant + slope * k` in the deformation
/// parameter k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearInK {
    pub constant: Rat,
    pub slope: Rat,
}

impl LinearInK {
    pub fn new(constant: Rat, slope: Rat) -> Self {
        LinearInK { constant, slope }
    }

    pub fn constant(c: Rat) -> Self {
        LinearInK { constant: c, slope: Rat::zero() }
    }
}

/// Arithmetic class of the parameter k on a face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KClass {
    /// k transcendental over the rationals.
    Irrational,
    /// k equal to an explicit rational number.
    Exact(Rat),
}

/// A face of the parameter space: the group, the weight-space dimension n,
/// the class of k, and the vertex weights `lambda_i = u_i + v_i k` indexed by
/// diagram vertices (vertex 0 first).
#[derive(Debug, Clone)]
pub struct ParameterFace {
    pub group: GammaDescriptor,
    pub n: u64,
    pub k: KClass,
    pub lambda: Vec<LinearInK>,
}

impl ParameterFace {
    pub fn new(group: GammaDescriptor, n: u64, k: KClass, lambda: Vec<LinearInK>) -> Result<Self> {
        let diagram = group.affine_diagram();
        if lambda.len() != diagram.vertex_count() {
            return Err(Error::InvalidFace(format!(
                "lambda has {} entries, diagram has {} vertices",
                lambda.len(),
                diagram.vertex_count()
            )));
        }
        let weighted_u: Rat = diagram
            .marks
            .iter()
            .zip(&lambda)
            .map(|(&m, l)| Rat::from_integer(m.into()) * &l.constant)
            .sum();
        let weighted_v: Rat = diagram
            .marks
            .iter()
            .zip(&lambda)
            .map(|(&m, l)| Rat::from_integer(m.into()) * &l.slope)
            .sum();
        if !weighted_v.is_zero() || weighted_u != Rat::from_integer(1.into()) {
            return Err(Error::InvalidFace(
                "normalization (lambda, delta) = 1 fails: the mark-weighted \
                 lambda sum must be 1 (constant part) and 0 (k-slope part)"
                    .into(),
            ));
        }
        Ok(ParameterFace { group, n, k, lambda })
    }

    /// The face with lambda concentrated on the affine vertex.
    pub fn standard(group: GammaDescriptor, n: u64, k: KClass) -> Self {
        let count = group.affine_diagram().vertex_count();
        let mut lambda = vec![LinearInK::constant(Rat::zero()); count];
        lambda[0] = LinearInK::constant(Rat::from_integer(1.into()));
        ParameterFace { group, n, k, lambda }
    }

    /// Pairing of lambda with a finite root given in simple-root coordinates
    /// (finite vertex i carries simple root i-1).
    pub fn lambda_pair_root(&self, coords: &[i64]) -> LinearInK {
        let mut constant = Rat::zero();
        let mut slope = Rat::zero();
        for (i, &c) in coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let c = Rat::from_integer(c.into());
            constant += &c * &self.lambda[i + 1].constant;
            slope += &c * &self.lambda[i + 1].slope;
        }
        LinearInK { constant, slope }
    }

    /// True when every finite vertex weight vanishes identically (the
    /// standard-face condition many counting formulas assume).
    pub fn finite_lambda_vanishes(&self) -> bool {
        self.lambda
            .iter()
            .skip(1)
            .all(|l| l.constant.is_zero() && l.slope.is_zero())
    }
}

/// One singular hyperplane through a face.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Hyperplane {
    /// `k m + shift = 0` with `2 <= m <= n` and `gcd(m, shift) = 1`;
    /// controls an extra Heisenberg direction of period m.
    Boson { m: i64, shift: i64 },
    /// `(lambda, alpha) + k m + shift = 0` with `|m| <= n-1`, `shift >= 0`;
    /// contributes the root pair of `alpha + m delta`.
    Root { alpha: Vec<i64>, m: i64, shift: i64 },
}

/// All singular hyperplanes through the face, sorted canonically (boson
/// hyperplanes first). Root hyperplanes with shift 0 are reported once per
/// +-root pair (positive root kept); positive shifts are kept as solved since
/// the mirrored record has a negative shift and is not in the family.
pub fn singular_hyperplanes(face: &ParameterFace) -> Result<Vec<Hyperplane>> {
    let rs = RootSystem::new(&face.group);
    singular_hyperplanes_with(face, &rs)
}

pub fn singular_hyperplanes_with(face: &ParameterFace, rs: &RootSystem) -> Result<Vec<Hyperplane>> {
    let mut out = Vec::new();
    let n = face.n as i64;
    if let KClass::Exact(k) = &face.k {
        let (p, q) = (k.numer().clone(), k.denom().clone());
        // k m + shift = 0 with gcd(m, shift) = 1 forces (m, shift) = (q, -p)
        if q >= 2.into() && q <= n.into() {
            let m = i64::try_from(q).map_err(|_| Error::InvalidFace("k denominator too large".into()))?;
            let shift = i64::try_from(-p).map_err(|_| Error::InvalidFace("k numerator too large".into()))?;
            out.push(Hyperplane::Boson { m, shift });
        }
    }
    for alpha in rs.roots() {
        let pairing = face.lambda_pair_root(alpha);
        for m in -(n - 1).max(0)..=(n - 1).max(0) {
            if n == 0 {
                break;
            }
            let shift = match &face.k {
                KClass::Irrational => {
                    // u + (v + m) k + shift = 0 with k transcendental
                    if &pairing.slope + Rat::from_integer(m.into()) != Rat::zero() {
                        continue;
                    }
                    -pairing.constant.clone()
                }
                KClass::Exact(k) => {
                    -(&pairing.constant + (&pairing.slope + Rat::from_integer(m.into())) * k)
                }
            };
            if !shift.is_integer() || shift.is_negative() {
                continue;
            }
            let shift = i64::try_from(shift.to_integer())
                .map_err(|_| Error::InvalidFace("hyperplane shift too large".into()))?;
            if shift == 0 && !root_coords_positive(alpha) {
                continue; // the +-pair partner carries this locus
            }
            out.push(Hyperplane::Root { alpha: alpha.clone(), m, shift });
        }
    }
    out.sort();
    Ok(out)
}

/// Aspherical-locus prediction: which singular hyperplanes through the face
/// are aspherical, and whether any is.
pub fn is_aspherical_predicted(face: &ParameterFace) -> Result<(bool, Vec<Hyperplane>)> {
    let all = singular_hyperplanes(face)?;
    let n = face.n as i64;
    let witnesses: Vec<Hyperplane> = all
        .into_iter()
        .filter(|h| match h {
            Hyperplane::Boson { m, shift } => 1 <= *shift && *shift <= m - 1,
            Hyperplane::Root { m, shift, .. } => {
                // shift + 1 <= sqrt(n + m^2/4) + m/2, squared exactly
                (shift + 1) * (shift + 1 - m) <= n
            }
        })
        .collect();
    Ok((!witnesses.is_empty(), witnesses))
}

/// The extremal rectangle witnessing asphericity of a root hyperplane:
/// the largest b with b(b-m) <= n gives an a x b rectangle, a = b - m,
/// usable when a >= 1 and shift <= b - 1.
pub fn rectangle_witness(m: i64, shift: i64, n: u64) -> Option<(u64, u64)> {
    let n = n as i64;
    let b = (1..=n + m.abs() + 1).filter(|b| b * (b - m) <= n).max()?;
    let a = b - m;
    if a >= 1 && shift <= b - 1 {
        Some((a as u64, b as u64))
    } else {
        None
    }
}

/// A connected component of the real-root part of the singular subalgebra.
#[derive(Debug, Clone)]
pub struct ComponentInfo {
    pub type_label: String,
    pub rank: usize,
    pub affine: bool,
    pub roots: Vec<AffineRoot>,
    pub simples: Vec<AffineRoot>,
}

/// The Lie subalgebra attached to the singular hyperplanes through a face:
/// a Heisenberg period (from the boson hyperplane, commuting with the rest),
/// real roots closed under brackets inside a finite delta-degree window, the
/// imaginary degrees generated along the way, and a simple system.
#[derive(Debug, Clone)]
pub struct SubalgebraDescriptor {
    pub heisenberg_period: Option<u64>,
    pub window: i64,
    pub real_roots: BTreeSet<AffineRoot>,
    /// delta degree -> basis of Cartan directions present at that degree
    pub imaginary: BTreeMap<i64, Vec<Vec<i64>>>,
    pub simple_system: Vec<AffineRoot>,
    pub components: Vec<ComponentInfo>,
}

impl SubalgebraDescriptor {
    /// Rank of the span of roots at delta degree zero.
    pub fn rank_at_delta_zero(&self, rs: &RootSystem) -> usize {
        let rows: Vec<Vec<i64>> = self
            .real_roots
            .iter()
            .filter(|r| r.m == 0)
            .map(|r| r.finite.clone())
            .collect();
        span_rank(rs, &rows)
    }

    pub fn is_affine(&self) -> bool {
        self.components.iter().any(|c| c.affine)
    }
}

/// Rank of the span of a set of root-lattice vectors.
pub fn span_rank(rs: &RootSystem, rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() || rs.rank() == 0 {
        return 0;
    }
    let m = RatMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&v| Rat::from_integer(v.into())).collect())
            .collect(),
    )
    .expect("rows share the rank length");
    m.rank()
}

fn span_insert(rs: &RootSystem, basis: &mut Vec<Vec<i64>>, v: &[i64]) -> bool {
    let before = span_rank(rs, basis);
    let mut with = basis.clone();
    with.push(v.to_vec());
    if span_rank(rs, &with) > before {
        basis.push(v.to_vec());
        true
    } else {
        false
    }
}

fn span_pairs_nonzero(rs: &RootSystem, basis: &[Vec<i64>], alpha: &[i64]) -> bool {
    basis.iter().any(|b| rs.form_roots(b, alpha) != 0)
}

type Closure = (BTreeSet<AffineRoot>, BTreeMap<i64, Vec<Vec<i64>>>);

fn close_roots(rs: &RootSystem, seeds: &[AffineRoot], window: i64) -> Closure {
    let mut roots: BTreeSet<AffineRoot> = seeds
        .iter()
        .flat_map(|r| [r.clone(), r.negated()])
        .filter(|r| r.m.abs() <= window)
        .collect();
    let mut imag: BTreeMap<i64, Vec<Vec<i64>>> = BTreeMap::new();
    loop {
        let mut changed = false;
        let snapshot: Vec<AffineRoot> = roots.iter().cloned().collect();
        for a in &snapshot {
            for b in &snapshot {
                let sum: Vec<i64> = a.finite.iter().zip(&b.finite).map(|(x, y)| x + y).collect();
                let m = a.m + b.m;
                if sum.iter().all(|&c| c == 0) {
                    if m != 0 {
                        let basis = imag.entry(m).or_default();
                        if span_insert(rs, basis, &a.finite) {
                            changed = true;
                        }
                    }
                } else if m.abs() <= window
                    && rs.is_root(&sum)
                    && roots.insert(AffineRoot { finite: sum, m })
                {
                    changed = true;
                }
            }
        }
        let degrees: Vec<i64> = imag.keys().copied().collect();
        for d in degrees {
            let basis = imag[&d].clone();
            for a in &snapshot {
                if (a.m + d).abs() <= window
                    && span_pairs_nonzero(rs, &basis, &a.finite)
                    && roots.insert(AffineRoot { finite: a.finite.clone(), m: a.m + d })
                {
                    changed = true;
                }
            }
        }
        if !changed {
            return (roots, imag);
        }
    }
}

/// Build the subalgebra descriptor for a face. The window is `2n + 2` delta
/// degrees; the closure is recomputed at a strictly smaller window and the
/// results compared, so a closure that depends on out-of-window elements
/// fails loudly instead of being silently truncated.
pub fn subalgebra(face: &ParameterFace) -> Result<SubalgebraDescriptor> {
    let rs = RootSystem::new(&face.group);
    let planes = singular_hyperplanes_with(face, &rs)?;
    let window = 2 * face.n as i64 + 2;

    let mut heisenberg_period = None;
    let mut seeds: Vec<AffineRoot> = Vec::new();
    for p in &planes {
        match p {
            Hyperplane::Boson { m, .. } => heisenberg_period = Some(*m as u64),
            Hyperplane::Root { alpha, m, .. } => {
                let seed = AffineRoot { finite: alpha.clone(), m: *m };
                let seed = if seed.is_positive() { seed } else { seed.negated() };
                if !seeds.contains(&seed) {
                    seeds.push(seed);
                }
            }
        }
    }

    let (roots, imag) = close_roots(&rs, &seeds, window);
    let inner_window = window - 2;
    let (inner_roots, _) = close_roots(&rs, &seeds, inner_window);
    let restricted: BTreeSet<AffineRoot> =
        roots.iter().filter(|r| r.m.abs() <= inner_window).cloned().collect();
    if restricted != inner_roots {
        return Err(Error::InconclusiveClosure {
            window,
            detail: "root closure is not stable against window growth".into(),
        });
    }

    let simple_system = find_simple_system(&rs, &roots, &imag);
    let components = find_components(&rs, &roots, &simple_system);

    Ok(SubalgebraDescriptor {
        heisenberg_period,
        window,
        real_roots: roots,
        imaginary: imag,
        simple_system,
        components,
    })
}

fn find_simple_system(
    rs: &RootSystem,
    roots: &BTreeSet<AffineRoot>,
    imag: &BTreeMap<i64, Vec<Vec<i64>>>,
) -> Vec<AffineRoot> {
    let positives: Vec<AffineRoot> = roots.iter().filter(|r| r.is_positive()).cloned().collect();
    let posset: BTreeSet<&AffineRoot> = positives.iter().collect();
    positives
        .iter()
        .filter(|rho| {
            // not a sum of two positive real elements
            for sigma in &positives {
                let tau = AffineRoot {
                    finite: rho.finite.iter().zip(&sigma.finite).map(|(a, b)| a - b).collect(),
                    m: rho.m - sigma.m,
                };
                if tau.finite.iter().any(|&c| c != 0) && posset.contains(&tau) {
                    return false;
                }
            }
            // not a positive real element raised by a present imaginary degree
            for (&d, basis) in imag.iter() {
                if d <= 0 || d >= rho.m.max(0) + 1 {
                    continue;
                }
                let sigma = AffineRoot { finite: rho.finite.clone(), m: rho.m - d };
                if sigma.is_positive()
                    && posset.contains(&sigma)
                    && span_pairs_nonzero(rs, basis, &rho.finite)
                {
                    return false;
                }
            }
            true
        })
        .cloned()
        .collect()
}

fn find_components(
    rs: &RootSystem,
    roots: &BTreeSet<AffineRoot>,
    simple_system: &[AffineRoot],
) -> Vec<ComponentInfo> {
    // lines: one representative finite part per +-pair
    let mut lines: Vec<Vec<i64>> = Vec::new();
    for r in roots {
        let rep = if root_coords_positive(&r.finite) {
            r.finite.clone()
        } else {
            r.finite.iter().map(|v| -v).collect()
        };
        if !lines.contains(&rep) {
            lines.push(rep);
        }
    }
    // union-find over lines connected by a nonzero pairing
    let mut parent: Vec<usize> = (0..lines.len()).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if rs.form_roots(&lines[i], &lines[j]) != 0 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..lines.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups
        .into_values()
        .map(|line_idx| {
            let members: Vec<Vec<i64>> = line_idx.iter().map(|&i| lines[i].clone()).collect();
            let comp_roots: Vec<AffineRoot> = roots
                .iter()
                .filter(|r| {
                    let rep: Vec<i64> = if root_coords_positive(&r.finite) {
                        r.finite.clone()
                    } else {
                        r.finite.iter().map(|v| -v).collect()
                    };
                    members.contains(&rep)
                })
                .cloned()
                .collect();
            let affine = members.iter().any(|line| {
                let degrees: BTreeSet<i64> =
                    comp_roots.iter().filter(|r| &r.finite == line).map(|r| r.m).collect();
                degrees.len() >= 2
            });
            let rank = span_rank(rs, &members);
            let count = 2 * members.len();
            let simples: Vec<AffineRoot> = simple_system
                .iter()
                .filter(|s| {
                    let rep: Vec<i64> = if root_coords_positive(&s.finite) {
                        s.finite.clone()
                    } else {
                        s.finite.iter().map(|v| -v).collect()
                    };
                    members.contains(&rep)
                })
                .cloned()
                .collect();
            ComponentInfo { type_label: ade_label(rank, count), rank, affine, roots: comp_roots, simples }
        })
        .collect()
}

fn ade_label(rank: usize, root_count: usize) -> String {
    if root_count == rank * (rank + 1) {
        return format!("A{rank}");
    }
    if rank >= 4 && root_count == 2 * rank * (rank - 1) {
        return format!("D{rank}");
    }
    match (rank, root_count) {
        (6, 72) => "E6".into(),
        (7, 126) => "E7".into(),
        (8, 240) => "E8".into(),
        _ => format!("R{rank}x{root_count}"),
    }
}
