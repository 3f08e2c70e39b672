//! Weight multiplicities and restriction.
//!
//! Three engines cooperate here. `frenkel_kac_mult` evaluates the closed-form
//! multiplicities of the lattice Fock space and of its basic submodule.
//! `FreudenthalEngine` runs the multiplicity recursion for one irreducible
//! highest-weight module over a frame described by an explicit simple system,
//! finite or affine (imaginary degrees are supplied with their multiplicities
//! and pair as `degree * level`). `decompose` restricts a windowed Fock space
//! to a closed subalgebra by exact character subtraction, reporting one row
//! per highest weight found.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::arrangement::{span_rank, ComponentInfo, SubalgebraDescriptor};
use crate::exactmat::{rat, Rat, RatMatrix};
use crate::mckay::GammaDescriptor;
use crate::partitions::PartitionCounter;
use crate::weights::{AffineRoot, AffineWeight, FiniteWeight, RootSystem};
use crate::{Error, Result};

/// Which graded space a multiplicity refers to: `Extended` carries one boson
/// color per diagram vertex (finite rank + 1), `Basic` drops the extra color
/// and is the level-one module in Frenkel-Kac form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    Extended,
    Basic,
}

fn rat_i64(x: &Rat) -> Option<i64> {
    if !x.is_integer() {
        return None;
    }
    i64::try_from(x.to_integer()).ok()
}

fn beta_root_coords(rs: &RootSystem, beta: &FiniteWeight) -> Result<Vec<i64>> {
    if beta.fund.len() != rs.rank() {
        return Err(Error::DimensionMismatch("weight length vs rank".into()));
    }
    let coords = rs.root_from_fund(&beta.fund)?;
    coords
        .iter()
        .map(|c| rat_i64(c).ok_or_else(|| Error::InvalidWeight("not in the root lattice".into())))
        .collect()
}

fn mult_from_coords(
    rs: &RootSystem,
    pc: &mut PartitionCounter,
    coords: &[i64],
    drop: i64,
    space: SpaceKind,
) -> BigUint {
    let colors = match space {
        SpaceKind::Extended => rs.rank() as u32 + 1,
        SpaceKind::Basic => rs.rank() as u32,
    };
    let twice_arg = 2 * drop - rs.root_norm(coords);
    if twice_arg < 0 || twice_arg % 2 != 0 {
        return BigUint::zero();
    }
    pc.p_colored(colors, (twice_arg / 2) as u64)
}

/// Multiplicity of the weight `omega0 - drop*delta + beta`: the colored
/// partition count of `drop - beta^2/2`, zero when that argument is negative.
pub fn frenkel_kac_mult(
    g: &GammaDescriptor,
    beta: &FiniteWeight,
    drop: i64,
    space: SpaceKind,
) -> Result<BigUint> {
    let rs = RootSystem::new(g);
    let coords = beta_root_coords(&rs, beta)?;
    Ok(mult_from_coords(&rs, &mut PartitionCounter::new(), &coords, drop, space))
}

/// All root-lattice points of norm at most `bound`. The ball is connected
/// under single simple-root steps (descent through a positively-paired simple
/// never raises the norm), so a flood fill from the origin is exhaustive.
pub fn lattice_ball(rs: &RootSystem, bound: i64) -> Vec<Vec<i64>> {
    let mut seen = BTreeSet::new();
    if bound < 0 {
        return Vec::new();
    }
    let origin = vec![0i64; rs.rank()];
    let mut queue = vec![origin.clone()];
    seen.insert(origin);
    while let Some(v) = queue.pop() {
        for i in 0..rs.rank() {
            for sgn in [-1i64, 1] {
                let mut w = v.clone();
                w[i] += sgn;
                if rs.root_norm(&w) <= bound && seen.insert(w.clone()) {
                    queue.push(w);
                }
            }
        }
    }
    seen.into_iter().collect()
}

/// Finite shadow of the extended Fock space: multiplicities of the weights
/// `omega0 - j*delta + beta` for `j <= delta_depth`, `beta^2 <= beta_norm_bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleWindow {
    pub group: GammaDescriptor,
    pub delta_depth: u64,
    pub beta_norm_bound: i64,
    /// (beta in root coordinates, j) -> multiplicity; zero entries omitted.
    pub mults: BTreeMap<(Vec<i64>, u64), BigUint>,
}

pub fn build_window(g: &GammaDescriptor, n: u64) -> ModuleWindow {
    // mult(omega0 - j delta + beta) vanishes unless beta^2 <= 2j, so the norm
    // bound 2n already captures every nonzero entry down to depth n
    build_window_with(g, n, 2 * n as i64)
}

pub fn build_window_with(g: &GammaDescriptor, delta_depth: u64, beta_norm_bound: i64) -> ModuleWindow {
    let rs = RootSystem::new(g);
    let mut pc = PartitionCounter::new();
    let mut mults = BTreeMap::new();
    for beta in lattice_ball(&rs, beta_norm_bound) {
        for j in 0..=delta_depth {
            let m = mult_from_coords(&rs, &mut pc, &beta, j as i64, SpaceKind::Extended);
            if !m.is_zero() {
                mults.insert((beta.clone(), j), m);
            }
        }
    }
    ModuleWindow { group: g.clone(), delta_depth, beta_norm_bound, mults }
}

struct PosRoot {
    root: AffineRoot,
    cone: Vec<i64>,
    lam_pair: BigInt,
    norm: i64,
}

struct ImagLine {
    degree: i64,
    mult: u64,
    cone: Vec<i64>,
}

/// Multiplicity recursion for one irreducible highest-weight module.
///
/// The frame is an explicit simple system plus the real roots lying in its
/// nonnegative cone and optional imaginary degrees. All pairings use the
/// ambient invariant form; the Weyl vector never materializes, its pairing
/// with a cone element being that element's height in simple coordinates.
pub struct FreudenthalEngine<'a> {
    rs: &'a RootSystem,
    lambda: AffineWeight,
    lambda_fund: Vec<BigInt>,
    lambda_level: BigInt,
    simples: Vec<AffineRoot>,
    simple_lam_pairs: Vec<i64>,
    positives: Vec<PosRoot>,
    imaginary: Vec<ImagLine>,
    sys: RatMatrix,
    memo: BTreeMap<(Vec<i64>, i64), BigUint>,
}

impl<'a> FreudenthalEngine<'a> {
    /// `candidate_roots` may contain both signs and out-of-frame roots; only
    /// those in the nonnegative simple cone are kept as positive roots.
    pub fn new(
        rs: &'a RootSystem,
        lambda: AffineWeight,
        simples: Vec<AffineRoot>,
        candidate_roots: &[AffineRoot],
        imaginary_degrees: &[(i64, u64)],
    ) -> Result<Self> {
        if simples.is_empty() {
            return Err(Error::InvalidWeight("frame needs at least one simple root".into()));
        }
        let rank = rs.rank();
        for s in &simples {
            if rs.root_norm(&s.finite) != 2 {
                return Err(Error::InvalidWeight("simple roots must have norm 2".into()));
            }
        }
        if !lambda.level.is_integer() || lambda.finite.fund.iter().any(|c| !c.is_integer()) {
            return Err(Error::InvalidWeight("highest weight must be integral".into()));
        }
        let lambda_fund: Vec<BigInt> = lambda.finite.fund.iter().map(|c| c.to_integer()).collect();
        let lambda_level = lambda.level.to_integer();

        let mut rows = vec![vec![Rat::zero(); simples.len()]; rank + 1];
        for (j, s) in simples.iter().enumerate() {
            for i in 0..rank {
                rows[i][j] = rat(s.finite[i]);
            }
            rows[rank][j] = rat(s.m);
        }
        let sys = RatMatrix::from_rows(rows)?;

        let mut simple_lam_pairs = Vec::with_capacity(simples.len());
        for s in &simples {
            let p = rs.pair_affine_root(&lambda, s);
            let Some(v) = rat_i64(&p) else {
                return Err(Error::InvalidWeight("highest weight pairs fractionally with a simple root".into()));
            };
            if v < 0 {
                return Err(Error::InvalidWeight(format!(
                    "highest weight pairs negatively ({v}) with a simple root"
                )));
            }
            simple_lam_pairs.push(v);
        }

        let mut eng = Self {
            rs,
            lambda,
            lambda_fund,
            lambda_level,
            simples,
            simple_lam_pairs,
            positives: Vec::new(),
            imaginary: Vec::new(),
            sys,
            memo: BTreeMap::new(),
        };

        let mut positives = Vec::new();
        for r in candidate_roots {
            if let Some(c) = eng.cone_coords(&r.finite, r.m)? {
                if c.iter().all(|&x| x >= 0) && c.iter().any(|&x| x > 0) {
                    let lam_pair = eng.pair_lambda(&r.finite, r.m);
                    positives.push(PosRoot {
                        root: r.clone(),
                        cone: c,
                        lam_pair,
                        norm: rs.root_norm(&r.finite),
                    });
                }
            }
        }
        eng.positives = positives;

        let mut imaginary = Vec::new();
        let zero_fin = vec![0i64; rank];
        for &(d, mult) in imaginary_degrees {
            if d <= 0 || mult == 0 {
                continue;
            }
            let Some(c) = eng.cone_coords(&zero_fin, d)? else {
                return Err(Error::Inconsistent(format!(
                    "imaginary degree {d} lies outside the frame cone"
                )));
            };
            imaginary.push(ImagLine { degree: d, mult, cone: c });
        }
        eng.imaginary = imaginary;
        Ok(eng)
    }

    fn pair_lambda(&self, fin: &[i64], m: i64) -> BigInt {
        let mut acc = &self.lambda_level * BigInt::from(m);
        for (f, c) in self.lambda_fund.iter().zip(fin) {
            acc += f * BigInt::from(*c);
        }
        acc
    }

    /// Simple-cone coordinates of a lattice direction, `None` when the exact
    /// solution is fractional or no solution exists.
    fn cone_coords(&self, fin: &[i64], m: i64) -> Result<Option<Vec<i64>>> {
        let mut rhs: Vec<Rat> = fin.iter().map(|&c| rat(c)).collect();
        rhs.push(rat(m));
        match self.sys.solve(&rhs) {
            Ok(sol) => Ok(sol.iter().map(rat_i64).collect()),
            Err(Error::Inconsistent(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// Reflect `lambda - xi` into the dominant chamber of the frame; the
    /// multiplicity is Weyl-invariant, so memo keys are folded first.
    fn fold(&self, mut fin: Vec<i64>, mut drop: i64) -> Result<(Vec<i64>, i64)> {
        let mut guard = 0u32;
        loop {
            guard += 1;
            if guard > 200_000 {
                return Err(Error::Inconsistent("chamber folding did not terminate".into()));
            }
            let mut changed = false;
            for (idx, s) in self.simples.iter().enumerate() {
                let p = self.simple_lam_pairs[idx] - self.rs.form_roots(&fin, &s.finite);
                if p < 0 {
                    for (f, c) in fin.iter_mut().zip(&s.finite) {
                        *f += p * c;
                    }
                    drop += p * s.m;
                    changed = true;
                }
            }
            if !changed {
                return Ok((fin, drop));
            }
        }
    }

    /// Multiplicity of `lambda - xi` where `xi` has finite part `fin` in root
    /// coordinates and delta-drop `drop`.
    pub fn mult_at_diff(&mut self, fin: &[i64], drop: i64) -> Result<BigUint> {
        if drop < 0 {
            return Ok(BigUint::zero());
        }
        let (fin, drop) = self.fold(fin.to_vec(), drop)?;
        if drop == 0 && fin.iter().all(|&c| c == 0) {
            return Ok(BigUint::one());
        }
        if drop < 0 {
            return Ok(BigUint::zero());
        }
        let key = (fin, drop);
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let (fin, drop) = (key.0.clone(), key.1);
        let cone = match self.cone_coords(&fin, drop)? {
            Some(c) if c.iter().all(|&x| x >= 0) => c,
            _ => {
                self.memo.insert(key, BigUint::zero());
                return Ok(BigUint::zero());
            }
        };
        let height: i64 = cone.iter().sum();

        // (lambda+rho)^2 - (nu+rho)^2 = 2(lambda, xi) - xi^2 + 2 ht(xi)
        let mut lam_xi = &self.lambda_level * BigInt::from(drop);
        for (f, c) in self.lambda_fund.iter().zip(&fin) {
            lam_xi += f * BigInt::from(*c);
        }
        let denom: BigInt =
            2 * lam_xi - BigInt::from(self.rs.form_roots(&fin, &fin)) + BigInt::from(2 * height);
        if !denom.is_positive() {
            return Err(Error::Inconsistent(
                "vanishing recursion denominator below the highest weight".into(),
            ));
        }

        let mut num = BigInt::zero();
        let positives: Vec<(Vec<i64>, i64, Vec<i64>, BigInt, i64)> = self
            .positives
            .iter()
            .map(|p| (p.root.finite.clone(), p.root.m, p.cone.clone(), p.lam_pair.clone(), p.norm))
            .collect();
        for (rfin, rm, rcone, lam_pair, norm) in positives {
            let p0 = &lam_pair - BigInt::from(self.rs.form_roots(&fin, &rfin));
            let mut t = 1i64;
            loop {
                if cone.iter().zip(&rcone).any(|(c, b)| c - t * b < 0) {
                    break;
                }
                let fin2: Vec<i64> = fin.iter().zip(&rfin).map(|(a, b)| a - t * b).collect();
                let sub = self.mult_at_diff(&fin2, drop - t * rm)?;
                if !sub.is_zero() {
                    num += BigInt::from(sub) * (&p0 + BigInt::from(t * norm));
                }
                t += 1;
            }
        }
        let imaginary: Vec<(i64, u64, Vec<i64>)> =
            self.imaginary.iter().map(|l| (l.degree, l.mult, l.cone.clone())).collect();
        for (degree, mult, icone) in imaginary {
            let pair = BigInt::from(degree) * &self.lambda_level;
            if pair.is_zero() {
                continue;
            }
            let mut t = 1i64;
            loop {
                if cone.iter().zip(&icone).any(|(c, b)| c - t * b < 0) {
                    break;
                }
                let sub = self.mult_at_diff(&fin, drop - t * degree)?;
                if !sub.is_zero() {
                    num += BigInt::from(sub) * BigInt::from(mult) * &pair;
                }
                t += 1;
            }
        }

        num *= 2;
        let (q, r) = num_integer::Integer::div_rem(&num, &denom);
        if !r.is_zero() || q.is_negative() {
            return Err(Error::Inconsistent("recursion produced a non-integral multiplicity".into()));
        }
        let out = q.to_biguint().expect("nonnegative");
        self.memo.insert(key, out.clone());
        Ok(out)
    }

    /// Multiplicity of an absolute weight; zero when it lies outside the
    /// level/lattice coset of the highest weight.
    pub fn mult(&mut self, nu: &AffineWeight) -> Result<BigUint> {
        if nu.level != self.lambda.level {
            return Ok(BigUint::zero());
        }
        let dd = &self.lambda.delta_coeff - &nu.delta_coeff;
        let Some(drop) = rat_i64(&dd) else {
            return Ok(BigUint::zero());
        };
        if nu.finite.fund.len() != self.lambda.finite.fund.len() {
            return Err(Error::DimensionMismatch("weight length vs rank".into()));
        }
        let diff: Vec<Rat> = self
            .lambda
            .finite
            .fund
            .iter()
            .zip(&nu.finite.fund)
            .map(|(a, b)| a - b)
            .collect();
        let coords = self.rs.root_from_fund(&diff)?;
        let fin: Option<Vec<i64>> = coords.iter().map(rat_i64).collect();
        match fin {
            None => Ok(BigUint::zero()),
            Some(f) => self.mult_at_diff(&f, drop),
        }
    }
}

/// `dim L_mu[nu]` for the finite frame of the full root system.
pub fn freudenthal_finite(rs: &RootSystem, mu: &FiniteWeight, nu: &FiniteWeight) -> Result<BigUint> {
    if mu.fund.len() != rs.rank() || nu.fund.len() != rs.rank() {
        return Err(Error::DimensionMismatch("weight length vs rank".into()));
    }
    if mu.fund.iter().any(|c| !c.is_integer() || c < &Rat::zero()) {
        return Err(Error::InvalidWeight("highest weight must be dominant integral".into()));
    }
    if rs.rank() == 0 {
        return Ok(BigUint::one());
    }
    let lambda = AffineWeight { level: Rat::zero(), finite: mu.clone(), delta_coeff: Rat::zero() };
    let simples: Vec<AffineRoot> = (0..rs.rank())
        .map(|i| {
            let mut fin = vec![0i64; rs.rank()];
            fin[i] = 1;
            AffineRoot { finite: fin, m: 0 }
        })
        .collect();
    let candidates: Vec<AffineRoot> =
        rs.roots().iter().map(|r| AffineRoot { finite: r.clone(), m: 0 }).collect();
    let mut eng = FreudenthalEngine::new(rs, lambda, simples, &candidates, &[])?;
    eng.mult(&AffineWeight { level: Rat::zero(), finite: nu.clone(), delta_coeff: Rat::zero() })
}

/// Multiplicity in the irreducible affine module `L_lambda` over the untwisted
/// affinization of `rs`, with imaginary multiplicities equal to the rank.
/// `depth` gates how far below the highest weight the query may sit.
pub fn freudenthal_affine(
    rs: &RootSystem,
    lambda: &AffineWeight,
    nu: &AffineWeight,
    depth: u64,
) -> Result<BigUint> {
    if rs.rank() == 0 {
        return Err(Error::TrivialGroup);
    }
    let dd = &lambda.delta_coeff - &nu.delta_coeff;
    let mut needed = 0u64;
    if let Some(d) = rat_i64(&dd) {
        if d > 0 {
            needed = d as u64;
        }
    }
    if needed > depth {
        return Err(Error::DepthExhausted { needed, budget: depth });
    }
    let w = needed as i64;
    let theta = rs.highest_root()?;
    let mut simples: Vec<AffineRoot> = (0..rs.rank())
        .map(|i| {
            let mut fin = vec![0i64; rs.rank()];
            fin[i] = 1;
            AffineRoot { finite: fin, m: 0 }
        })
        .collect();
    simples.push(AffineRoot { finite: theta.iter().map(|c| -c).collect(), m: 1 });
    let mut candidates = Vec::new();
    for m in 0..=w {
        for r in rs.roots() {
            candidates.push(AffineRoot { finite: r.clone(), m });
        }
    }
    let imaginary: Vec<(i64, u64)> = (1..=w).map(|d| (d, rs.rank() as u64)).collect();
    let mut eng = FreudenthalEngine::new(rs, lambda.clone(), simples, &candidates, &imaginary)?;
    eng.mult(nu)
}

/// One highest weight found while restricting the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionRow {
    /// Finite part of `mu` in root coordinates.
    pub beta: Vec<i64>,
    /// Delta-drop of `mu` below `omega0`.
    pub drop: u64,
    pub mu: AffineWeight,
    pub hom_mult: BigUint,
    /// Multiplicity of `omega0 - n*delta` inside one copy of the module.
    pub weight_mult_at_target: BigUint,
    pub mu_norm_sq: Rat,
    /// Per-eigenvalue split of the target multiplicity over the Heisenberg
    /// grading operator; present only when the subalgebra has a boson factor.
    pub degree_profile: Option<BTreeMap<u64, BigUint>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    pub rows: Vec<DecompositionRow>,
    /// True iff every residual at non-dominant weights and at window close-out
    /// vanished; false signals a too-small window (retry with doubled bounds).
    pub residual_ok: bool,
    pub diagnostics: Vec<String>,
    pub delta_depth: u64,
    pub beta_norm_bound: i64,
    pub target: u64,
}

fn coord_sum(v: &[i64]) -> i64 {
    v.iter().sum()
}

/// Assign each positive imaginary degree of the subalgebra to the component
/// whose root span contains its direction vectors.
fn split_imaginary(rs: &RootSystem, a: &SubalgebraDescriptor) -> Result<Vec<Vec<(i64, u64)>>> {
    let mut per: Vec<BTreeMap<i64, u64>> = vec![BTreeMap::new(); a.components.len()];
    let comp_fins: Vec<Vec<Vec<i64>>> = a
        .components
        .iter()
        .map(|c| c.roots.iter().map(|r| r.finite.clone()).collect())
        .collect();
    let comp_ranks: Vec<usize> = comp_fins.iter().map(|f| span_rank(rs, f)).collect();
    for (&d, vecs) in &a.imaginary {
        if d <= 0 {
            continue;
        }
        for v in vecs {
            let owner = (0..a.components.len()).find(|&ci| {
                let mut with = comp_fins[ci].clone();
                with.push(v.clone());
                span_rank(rs, &with) == comp_ranks[ci]
            });
            match owner {
                Some(ci) => *per[ci].entry(d).or_default() += 1,
                None => {
                    return Err(Error::Inconsistent(format!(
                        "imaginary direction {v:?} at degree {d} lies in no component span"
                    )))
                }
            }
        }
    }
    Ok(per.into_iter().map(|m| m.into_iter().collect()).collect())
}

fn component_grid(
    rs: &RootSystem,
    comp: &ComponentInfo,
    imaginary: &[(i64, u64)],
    mu: &AffineWeight,
    max_drop: u64,
    diff_ball: &[Vec<i64>],
) -> Result<BTreeMap<(Vec<i64>, u64), BigUint>> {
    let mut eng = FreudenthalEngine::new(rs, mu.clone(), comp.simples.clone(), &comp.roots, imaginary)?;
    let mut out = BTreeMap::new();
    for fin in diff_ball {
        for drop in 0..=max_drop {
            let m = eng.mult_at_diff(fin, drop as i64)?;
            if !m.is_zero() {
                out.insert((fin.clone(), drop), m);
            }
        }
    }
    Ok(out)
}

/// Restrict the window to the subalgebra by iterated character subtraction.
///
/// Window weights are visited by delta-depth ascending, then finite height
/// descending, which refines the dominance cone of the subalgebra: everything
/// that can feed a weight is processed before it. A positive residual at a
/// dominant weight opens a row; its full character (component characters
/// convolved, then the boson Fock factor) is removed. Negative residuals are
/// a hard error; stranded residuals only clear the `residual_ok` flag.
pub fn decompose(window: &ModuleWindow, a: &SubalgebraDescriptor, n: u64) -> Result<DecompositionReport> {
    let rs = RootSystem::new(&window.group);
    let mut pc = PartitionCounter::new();
    let comp_imag = split_imaginary(&rs, a)?;
    let ball: BTreeSet<Vec<i64>> =
        lattice_ball(&rs, window.beta_norm_bound).into_iter().collect();
    // partial convolutions can overshoot the final ball, but sums of
    // orthogonal component offsets keep every intermediate within 9x the bound
    let diff_ball = lattice_ball(&rs, 4 * window.beta_norm_bound);
    let interm_bound = 9 * window.beta_norm_bound;

    // a component's character lives on mu minus its own root span; filtering
    // the difference ball once per component skips provably zero entries
    let comp_support: Vec<Vec<Vec<i64>>> = a
        .components
        .iter()
        .map(|comp| {
            let mut basis: Vec<Vec<i64>> = Vec::new();
            for r in &comp.roots {
                let mut probe = basis.clone();
                probe.push(r.finite.clone());
                if span_rank(&rs, &probe) > basis.len() {
                    basis = probe;
                }
            }
            diff_ball
                .iter()
                .filter(|fin| {
                    let mut probe = basis.clone();
                    probe.push((*fin).clone());
                    span_rank(&rs, &probe) == basis.len()
                })
                .cloned()
                .collect()
        })
        .collect();

    let mut residual: BTreeMap<(Vec<i64>, u64), BigInt> =
        window.mults.iter().map(|(k, v)| (k.clone(), BigInt::from(v.clone()))).collect();
    let mut keys: Vec<(Vec<i64>, u64)> = window.mults.keys().cloned().collect();
    keys.sort_by(|x, y| {
        x.1.cmp(&y.1)
            .then_with(|| coord_sum(&y.0).cmp(&coord_sum(&x.0)))
            .then_with(|| x.0.cmp(&y.0))
    });

    let zero_beta = vec![0i64; rs.rank()];
    let mut rows = Vec::new();
    let mut diagnostics = Vec::new();
    let mut residual_ok = true;

    for (beta, j) in keys {
        let cur = residual.get(&(beta.clone(), j)).cloned().unwrap_or_default();
        if cur.is_zero() {
            continue;
        }
        let mu = AffineWeight {
            level: rat(1),
            finite: FiniteWeight { fund: rs.fund_from_root(&beta) },
            delta_coeff: -rat(j as i64),
        };
        let dominant =
            a.simple_system.iter().all(|s| rs.pair_affine_root(&mu, s) >= Rat::zero());
        if !dominant {
            residual_ok = false;
            diagnostics.push(format!(
                "residual {cur} stranded at non-dominant weight (beta={beta:?}, drop={j})"
            ));
            continue;
        }
        let hom = cur.to_biguint().expect("negative residuals error at subtraction time");

        // loop-algebra character of L_mu on the window grid
        let mut chi: BTreeMap<(Vec<i64>, u64), BigUint> = BTreeMap::new();
        chi.insert((beta.clone(), j), BigUint::one());
        for (ci, comp) in a.components.iter().enumerate() {
            let grid = component_grid(
                &rs,
                comp,
                &comp_imag[ci],
                &mu,
                window.delta_depth - j,
                &comp_support[ci],
            )?;
            let mut next: BTreeMap<(Vec<i64>, u64), BigUint> = BTreeMap::new();
            for ((b1, j1), c1) in &chi {
                for ((df, dd), c2) in &grid {
                    let j2 = j1 + dd;
                    if j2 > window.delta_depth {
                        continue;
                    }
                    let b2: Vec<i64> = b1.iter().zip(df).map(|(x, y)| x - y).collect();
                    if rs.root_norm(&b2) > interm_bound {
                        continue;
                    }
                    *next.entry((b2, j2)).or_default() += c1 * c2;
                }
            }
            chi = next;
        }
        chi.retain(|(b, _), _| ball.contains(b));

        let (target, profile) = match a.heisenberg_period {
            None => (chi.get(&(zero_beta.clone(), n)).cloned().unwrap_or_default(), None),
            Some(m) => {
                let mut prof = BTreeMap::new();
                let mut total = BigUint::zero();
                let mut t = 0u64;
                while m * t <= n {
                    if let Some(v) = chi.get(&(zero_beta.clone(), n - m * t)) {
                        let w = pc.p_colored(1, t) * v;
                        if !w.is_zero() {
                            total += &w;
                            prof.insert(t, w);
                        }
                    }
                    t += 1;
                }
                (total, Some(prof))
            }
        };

        // full character = chi convolved with the boson Fock factor
        let full: BTreeMap<(Vec<i64>, u64), BigUint> = match a.heisenberg_period {
            None => chi,
            Some(m) => {
                let mut acc: BTreeMap<(Vec<i64>, u64), BigUint> = BTreeMap::new();
                let mut t = 0u64;
                while j + m * t <= window.delta_depth {
                    let pt = pc.p_colored(1, t);
                    for ((b1, j1), c) in &chi {
                        let j2 = j1 + m * t;
                        if j2 <= window.delta_depth {
                            *acc.entry((b1.clone(), j2)).or_default() += c * &pt;
                        }
                    }
                    t += 1;
                }
                acc
            }
        };
        for ((b2, j2), c) in full {
            let e = residual.entry((b2.clone(), j2)).or_insert_with(BigInt::zero);
            *e -= BigInt::from(&hom * &c);
            if e.is_negative() {
                return Err(Error::NegativeResidual(format!(
                    "weight (beta={b2:?}, drop={j2}) driven to {e} while removing the module headed at (beta={beta:?}, drop={j})"
                )));
            }
        }

        let mu_norm_sq = rs.form_affine(&mu, &mu)?;
        rows.push(DecompositionRow {
            beta,
            drop: j,
            mu,
            hom_mult: hom,
            weight_mult_at_target: target,
            mu_norm_sq,
            degree_profile: profile,
        });
    }

    for ((b, j2), v) in &residual {
        if !v.is_zero() {
            residual_ok = false;
            diagnostics.push(format!("window close-out residual {v} at (beta={b:?}, drop={j2})"));
        }
    }

    Ok(DecompositionReport {
        rows,
        residual_ok,
        diagnostics,
        delta_depth: window.delta_depth,
        beta_norm_bound: window.beta_norm_bound,
        target: n,
    })
}
