//! Conjecture-level outputs: graded dimensions of the K-theory filtration,
//! finite-dimensional representation counts, and the independent counting
//! formulas that cross-check them (Diophantine solutions, level-rank duals,
//! integer-k closed forms), together with the Gram calculus for decomposition
//! matrices and the rank-one filtration lattices.
//!
//! The branching engine (`multiplicity::decompose`) is the workhorse; every
//! alternative formula here is computed independently of it so the two paths
//! can be compared rather than one being defined in terms of the other.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arrangement::{span_rank, subalgebra, KClass, ParameterFace, SubalgebraDescriptor};
use crate::exactmat::{
    det_poly, factor_cyclotomic, int, smith_normal_form, Int, IntMatrix, QPolynomial, Rat,
    RatMatrix,
};
use crate::mckay::{GammaDescriptor, GammaKind};
use crate::multiplicity::{build_window_with, decompose, freudenthal_affine};
use crate::partitions::{count_parts_mod, kostka, traceless_dominants, PartitionCounter, PartsMode};
use crate::weights::{AffineWeight, FiniteWeight, RootSystem};
use crate::{Error, Result};

/// Which engine produced a graded prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Branching,
    ClosedForm,
    LevelRank,
    Diophantine,
}

/// Graded dimensions of the predicted filtration on K-theory.
///
/// `by_index` is the one-index grading; when the face carries a Heisenberg
/// period the finer two-index grading is present and `by_index` is its
/// marginal under `(i, j) -> i + j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedPrediction {
    pub by_index: BTreeMap<u64, BigUint>,
    pub by_pair: Option<BTreeMap<(u64, u64), BigUint>>,
    pub provenance: Provenance,
}

impl GradedPrediction {
    pub fn total(&self) -> BigUint {
        self.by_index.values().sum()
    }
}

fn add_nonzero<K: Ord>(map: &mut BTreeMap<K, BigUint>, key: K, value: BigUint) {
    if !value.is_zero() {
        *map.entry(key).or_default() += value;
    }
}

fn marginalize(by_pair: &BTreeMap<(u64, u64), BigUint>) -> BTreeMap<u64, BigUint> {
    let mut out = BTreeMap::new();
    for (&(i, j), v) in by_pair {
        add_nonzero(&mut out, i + j, v.clone());
    }
    out
}

/// Norm-square index of a stratum: mu^2 = -2i, so i = -mu^2/2.
fn stratum_index(mu_norm_sq: &Rat) -> Result<u64> {
    let half = -mu_norm_sq / Rat::from_integer(2.into());
    if !half.is_integer() || half.is_negative() {
        return Err(Error::Inconsistent(format!(
            "stratum norm {mu_norm_sq} is not an even nonpositive integer"
        )));
    }
    half.to_integer()
        .to_u64()
        .ok_or_else(|| Error::Inconsistent("stratum index overflow".into()))
}

fn exact_integer_k(face: &ParameterFace) -> Option<bool> {
    match &face.k {
        KClass::Irrational => None,
        KClass::Exact(v) => Some(v.is_integer()),
    }
}

/// Denominator of an exact non-integer k, when there is one.
pub fn exact_k_denominator(face: &ParameterFace) -> Option<u64> {
    match &face.k {
        KClass::Exact(v) if !v.is_integer() => v.denom().to_u64(),
        _ => None,
    }
}

/// Optional overrides for the window and depth defaults. Any override only
/// enlarges the computation; results are invariant under enlargement.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EngineOptions {
    pub delta_depth: Option<u64>,
    pub beta_norm_bound: Option<i64>,
    pub affine_depth: Option<u64>,
}

fn ensure_branching_regime(face: &ParameterFace, a: &SubalgebraDescriptor) -> Result<()> {
    if a.is_affine() && exact_integer_k(face) != Some(true) {
        return Err(Error::UnsupportedRegime(
            "affine subalgebra at fractional k: the window-based branching \
             engine does not terminate here; only the level-rank count is available"
                .into(),
        ));
    }
    Ok(())
}

/// Graded dimensions through the branching engine, with the two-index
/// refinement whenever a Heisenberg period is present.
fn branch_prediction(
    face: &ParameterFace,
    a: &SubalgebraDescriptor,
    opts: &EngineOptions,
) -> Result<GradedPrediction> {
    let depth = opts.delta_depth.unwrap_or(face.n).max(face.n);
    // overrides may only enlarge the window; results are invariant under that
    let bound = opts.beta_norm_bound.unwrap_or(0).max(2 * depth as i64);
    let window = build_window_with(&face.group, depth, bound);
    let report = decompose(&window, a, face.n)?;
    if !report.residual_ok {
        return Err(Error::Inconsistent(format!(
            "branching left unresolved weights: {}",
            report.diagnostics.join("; ")
        )));
    }
    let mut by_index = BTreeMap::new();
    let mut by_pair = None;
    if a.heisenberg_period.is_some() {
        let mut pair = BTreeMap::new();
        for row in &report.rows {
            let i = stratum_index(&row.mu_norm_sq)?;
            let profile = row.degree_profile.as_ref().ok_or_else(|| {
                Error::Inconsistent("missing degree profile on a Heisenberg face".into())
            })?;
            for (&j, w) in profile {
                add_nonzero(&mut pair, (i, j), &row.hom_mult * w);
            }
        }
        by_index = marginalize(&pair);
        by_pair = Some(pair);
    } else {
        for row in &report.rows {
            let i = stratum_index(&row.mu_norm_sq)?;
            add_nonzero(&mut by_index, i, &row.hom_mult * &row.weight_mult_at_target);
        }
    }
    Ok(GradedPrediction { by_index, by_pair, provenance: Provenance::Branching })
}

/// Closed form for integer k and the full affine subalgebra: the extended
/// space splits as (basic module) x (one boson), giving
/// gr_i = p_r(n - i) * p_1(i).
fn integer_k_closed_form(rank: usize, n: u64) -> BTreeMap<u64, BigUint> {
    let mut pc = PartitionCounter::new();
    let mut out = BTreeMap::new();
    for i in 0..=n {
        let v = pc.p_colored(rank as u32, n - i) * pc.p_colored(1, i);
        add_nonzero(&mut out, i, v);
    }
    out
}

/// One-index graded dimensions of K-theory for a parameter face.
pub fn predicted_gr(face: &ParameterFace) -> Result<GradedPrediction> {
    predicted_gr_opt(face, &EngineOptions::default())
}

pub fn predicted_gr_opt(face: &ParameterFace, opts: &EngineOptions) -> Result<GradedPrediction> {
    let a = subalgebra(face)?;
    ensure_branching_regime(face, &a)?;
    let prediction = branch_prediction(face, &a, opts)?;
    let rank = RootSystem::new(&face.group).rank();
    let full_affine = a.components.len() == 1
        && a.components[0].affine
        && a.components[0].rank == rank
        && a.heisenberg_period.is_none();
    if exact_integer_k(face) == Some(true) && full_affine {
        let closed = integer_k_closed_form(rank, face.n);
        if closed != prediction.by_index {
            return Err(Error::Inconsistent(format!(
                "integer-k closed form {closed:?} disagrees with branching {:?}",
                prediction.by_index
            )));
        }
    }
    Ok(prediction)
}

/// Two-index graded dimensions for rational non-integer k (denominator m >= 2):
/// the second index is the boson-degree eigenvalue.
pub fn predicted_gr2(face: &ParameterFace) -> Result<GradedPrediction> {
    predicted_gr2_opt(face, &EngineOptions::default())
}

pub fn predicted_gr2_opt(face: &ParameterFace, opts: &EngineOptions) -> Result<GradedPrediction> {
    let m = exact_k_denominator(face).ok_or_else(|| {
        Error::InvalidFace("two-index grading needs exact k with denominator >= 2".into())
    })?;
    if face.group.kind == GammaKind::Trivial {
        let mut pc = PartitionCounter::new();
        let mut pair = BTreeMap::new();
        let mut j = 0u64;
        while j * m <= face.n {
            let rest = face.n - j * m;
            let v = pc.p_colored(1, j) * count_parts_mod(rest, m, PartsMode::NotDivisibleBy);
            add_nonzero(&mut pair, (rest, j), v);
            j += 1;
        }
        let by_index = marginalize(&pair);
        return Ok(GradedPrediction {
            by_index,
            by_pair: Some(pair),
            provenance: Provenance::ClosedForm,
        });
    }
    let a = subalgebra(face)?;
    ensure_branching_regime(face, &a)?;
    let mut prediction = branch_prediction(face, &a, opts)?;
    if prediction.by_pair.is_none() {
        // Denominator exceeds n: no boson plane through the face, so the
        // whole module sits in boson degree zero.
        let pair: BTreeMap<(u64, u64), BigUint> =
            prediction.by_index.iter().map(|(&i, v)| ((i, 0), v.clone())).collect();
        prediction.by_pair = Some(pair);
    }
    Ok(prediction)
}

/// Predicted number of finite-dimensional irreducible representations.
///
/// The zero stratum of the graded prediction where the branching engine
/// applies; on the winding regime (affine subalgebra, fractional k) the
/// level-rank count takes over for cyclic groups with lambda concentrated
/// on the affine vertex.
pub fn count_findim(face: &ParameterFace) -> Result<BigUint> {
    count_findim_opt(face, &EngineOptions::default())
}

pub fn count_findim_opt(face: &ParameterFace, opts: &EngineOptions) -> Result<BigUint> {
    let a = subalgebra(face)?;
    if a.is_affine() && exact_integer_k(face) != Some(true) {
        if let (GammaKind::Cyclic(ell), Some(m), true) =
            (face.group.kind, exact_k_denominator(face), face.finite_lambda_vanishes())
        {
            let budget = opts.affine_depth.unwrap_or(face.n + 2);
            return levelrank_rational(ell, m, face.n, budget);
        }
        return Err(Error::UnsupportedRegime(
            "finite-dimensional count on a winding face is only available \
             through level-rank, which needs a cyclic group and lambda \
             concentrated on the affine vertex"
                .into(),
        ));
    }
    let prediction = branch_prediction(face, &a, opts)?;
    Ok(prediction.by_index.get(&0).cloned().unwrap_or_default())
}

/// Number of nonnegative integer vectors a with sum a_i (a_i + m_i) = n.
pub fn diophantine_count(m_vec: &[i64], n: u64) -> BigUint {
    // a(a+m) >= -floor(m^2/4), so each coordinate's term is bounded above by
    // n plus the worst-case deficit of the others.
    let deficit: i64 = m_vec.iter().map(|m| m * m / 4).sum();
    fn search(m_vec: &[i64], remaining: i64, slack: i64) -> BigUint {
        match m_vec.split_first() {
            None => {
                if remaining == 0 {
                    BigUint::one()
                } else {
                    BigUint::zero()
                }
            }
            Some((&m, rest)) => {
                let slack_rest = slack - m * m / 4;
                let mut total = BigUint::zero();
                let mut a = 0i64;
                loop {
                    let term = a * (a + m);
                    if term > remaining + slack_rest {
                        break;
                    }
                    total += search(rest, remaining - term, slack_rest);
                    a += 1;
                }
                total
            }
        }
    }
    search(m_vec, n as i64, deficit)
}

/// Level-rank count for irrational k: traceless dominant integer vectors of
/// norm-square 2n, each weighted by the zero-weight multiplicity of the
/// corresponding finite-type module (a Kostka number).
pub fn levelrank_irrational(ell: u32, n: u64) -> Result<BigUint> {
    if ell < 2 {
        return Err(Error::UnsupportedGroup("level-rank needs a cyclic group of order >= 2".into()));
    }
    let zeros = vec![0i64; ell as usize];
    let mut total = BigUint::zero();
    for nu in traceless_dominants(ell as usize, 2 * n) {
        total += kostka(&nu, &zeros)?;
    }
    Ok(total)
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Level-rank count for rational k with denominator m: level-m dominant
/// integral weights of affine sl_ell that are trivial on the center, each
/// contributing the weight multiplicity at finite weight zero and delta-drop
/// (n - nu^2/2)/m when that drop is a nonnegative integer.
pub fn levelrank_rational(ell: u32, m: u64, n: u64, depth_budget: u64) -> Result<BigUint> {
    if ell < 2 || m < 2 {
        return Err(Error::UnsupportedGroup(
            "level-rank rational count needs ell >= 2 and denominator >= 2".into(),
        ));
    }
    let rs = RootSystem::new(&GammaDescriptor::cyclic(ell)?);
    let level = Rat::from_integer((m as i64).into());
    let mut total = BigUint::zero();
    for c in compositions(m as u32, ell as usize) {
        let center: u64 = c.iter().enumerate().map(|(i, &ci)| i as u64 * ci as u64).sum();
        if center % ell as u64 != 0 {
            continue;
        }
        let fund: Vec<Rat> = c[1..].iter().map(|&ci| Rat::from_integer((ci as i64).into())).collect();
        let finite = FiniteWeight { fund };
        let norm = rs.form_fund(&finite, &finite)?;
        let drop = (Rat::from_integer((n as i64).into()) - norm / Rat::from_integer(2.into()))
            / Rat::from_integer((m as i64).into());
        if drop.is_negative() || !drop.is_integer() {
            continue;
        }
        let d = drop
            .to_integer()
            .to_u64()
            .ok_or_else(|| Error::Inconsistent("level-rank drop overflow".into()))?;
        let top = AffineWeight { level: level.clone(), finite, delta_coeff: Rat::zero() };
        let target = AffineWeight {
            level: level.clone(),
            finite: FiniteWeight { fund: vec![Rat::zero(); ell as usize - 1] },
            delta_coeff: -Rat::from_integer((d as i64).into()),
        };
        total += freudenthal_affine(&rs, &top, &target, depth_budget)?;
    }
    Ok(total)
}

/// Rank of the span of the type-A roots pairing integrally with lambda,
/// given the pairings of lambda with the simple roots.
pub fn integral_root_span(ell: u32, simple_pairings: &[Rat]) -> Result<usize> {
    if ell < 2 || simple_pairings.len() != ell as usize - 1 {
        return Err(Error::InvalidFace(format!(
            "expected {} simple-root pairings for order {ell}",
            ell.saturating_sub(1)
        )));
    }
    let rs = RootSystem::new(&GammaDescriptor::cyclic(ell)?);
    let mut integral = Vec::new();
    for root in rs.positive_roots() {
        let pairing: Rat = root
            .iter()
            .zip(simple_pairings)
            .map(|(&c, p)| Rat::from_integer(c.into()) * p)
            .sum();
        if pairing.is_integer() {
            integral.push(root.clone());
        }
    }
    Ok(span_rank(&rs, &integral))
}

/// Poincare polynomial of the filtration at n = 1 for the cyclic group of
/// order ell: ell + m(t - 1), where m is the rank of the span of the roots
/// pairing integrally with lambda.
pub fn poincare_n1(ell: u32, simple_pairings: &[Rat]) -> Result<QPolynomial> {
    let m = integral_root_span(ell, simple_pairings)?;
    Ok(QPolynomial::new(vec![int(ell as i64 - m as i64), int(m as i64)]))
}

/// Gram data of a decomposition matrix: C = N^T N, its inverse (the matrix of
/// pairings of simples), the principal block selected by the
/// finite-dimensional simples, and optionally the q-deformed Cartan
/// determinant of a diagram with its cyclotomic part split off.
#[derive(Debug, Clone)]
pub struct GramReport {
    pub c: IntMatrix,
    pub c_inverse: RatMatrix,
    pub findim_block: RatMatrix,
    pub positive_definite: bool,
    pub q_det: Option<QPolynomial>,
    pub q_cyclotomic_factors: Option<Vec<(u32, u32)>>,
    pub q_remainder: Option<QPolynomial>,
    /// Whether the q-determinant vanishes only at roots of unity.
    pub nondegenerate_off_unity: Option<bool>,
}

/// q-deformed Cartan matrix of a simply laced diagram: 1 + q^2 on the
/// diagonal and -q across each edge.
pub fn q_cartan(adjacency: &IntMatrix) -> Result<Vec<Vec<QPolynomial>>> {
    let n = adjacency.rows();
    if adjacency.cols() != n || !adjacency.is_symmetric() {
        return Err(Error::DimensionMismatch("adjacency must be square and symmetric".into()));
    }
    let diag = QPolynomial::from_i64(&[1, 0, 1]);
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            if i == j {
                row.push(diag.clone());
            } else if !adjacency.get(i, j).is_zero() {
                row.push(QPolynomial::from_i64(&[0, -1]));
            } else {
                row.push(QPolynomial::zero());
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn gram_report(
    n_mat: &IntMatrix,
    findim_indices: &[usize],
    q_diagram: Option<&IntMatrix>,
) -> Result<GramReport> {
    if n_mat.rows() < n_mat.cols() || n_mat.to_rational().rank() != n_mat.cols() {
        return Err(Error::RankDeficient(format!(
            "decomposition matrix is {}x{} with rank {}",
            n_mat.rows(),
            n_mat.cols(),
            n_mat.to_rational().rank()
        )));
    }
    let c = n_mat.transpose().mul(n_mat)?;
    let c_rat = c.to_rational();
    let c_inverse = c_rat.invert()?;
    let findim_block = c_inverse.principal_submatrix(findim_indices)?;
    let positive_definite = c_rat.is_positive_definite()?;
    let (q_det, q_cyclotomic_factors, q_remainder, nondegenerate_off_unity) = match q_diagram {
        None => (None, None, None, None),
        Some(adj) => {
            let aq = q_cartan(adj)?;
            let det = det_poly(&aq)?;
            let dmax = {
                let deg = det.degree().unwrap_or(0) as u32;
                2 * deg * deg + 2
            };
            let (factors, rem) = factor_cyclotomic(&det, dmax)?;
            let nondeg = rem.degree().map(|d| d == 0).unwrap_or(false);
            (Some(det), Some(factors), Some(rem), Some(nondeg))
        }
    };
    Ok(GramReport {
        c,
        c_inverse,
        findim_block,
        positive_definite,
        q_det,
        q_cyclotomic_factors,
        q_remainder,
        nondegenerate_off_unity,
    })
}

/// A finitely generated abelian group presented as a quotient of Z^rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeQuotient {
    /// Nontrivial invariant factors (each dividing the next).
    pub invariant_factors: Vec<Int>,
    pub free_rank: usize,
}

/// The two rank-(ell-1) sublattices of Z^ell spanned by 2x_i - x_{i-1} -
/// x_{i+1} for i = 1..ell-1, under the cyclic boundary convention (index
/// ell wraps to 0) and the truncated one (the x_ell term is dropped).
/// Returns the quotients (cyclic convention first).
pub fn filtration_lattices_n1(ell: u32) -> Result<(LatticeQuotient, LatticeQuotient)> {
    if ell < 2 {
        return Err(Error::UnsupportedGroup("filtration lattices need ell >= 2".into()));
    }
    let ell = ell as usize;
    let quotient = |wrap: bool| -> LatticeQuotient {
        let mut m = IntMatrix::zeros(ell, ell - 1);
        for i in 1..ell {
            m.set(i, i - 1, int(2));
            m.set(i - 1, i - 1, m.get(i - 1, i - 1) - int(1));
            let up = i + 1;
            if up < ell {
                m.set(up, i - 1, m.get(up, i - 1) - int(1));
            } else if wrap {
                m.set(0, i - 1, m.get(0, i - 1) - int(1));
            }
        }
        let (factors, rank) = smith_normal_form(&m);
        let invariant_factors = factors.into_iter().filter(|f| !f.is_one()).collect();
        LatticeQuotient { invariant_factors, free_rank: ell - rank }
    };
    Ok((quotient(true), quotient(false)))
}
