//! The Frobenius twist of free complexes, homology lengths, Tor tables
//! against `^{φ^r}R`, rigidity probes and the balance oracle.

use std::collections::HashMap;
use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::expand::{self, Block};
use crate::invariants::{self, InvariantReport};
use crate::linalg::{self, Echelon, SparseVec};
use crate::matrix::RMatrix;
use crate::resolve::{minimal_free_resolution, partial_resolution, FreeComplex, ModulePresentation};
use crate::ring::{AlgebraKind, LocalAlgebra, RingElement};

/// Length of a homology module, or why no finite value is reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorLength {
    Finite(usize),
    Infinite,
    Unstable,
}

impl TorLength {
    pub fn is_zero(&self) -> bool {
        *self == TorLength::Finite(0)
    }

    pub fn finite(&self) -> Option<usize> {
        match self {
            TorLength::Finite(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for TorLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorLength::Finite(n) => write!(f, "{n}"),
            TorLength::Infinite => write!(f, "INF"),
            TorLength::Unstable => write!(f, "UNSTABLE"),
        }
    }
}

impl Serialize for TorLength {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            TorLength::Finite(n) => s.serialize_u64(*n as u64),
            TorLength::Infinite => s.serialize_str("INF"),
            TorLength::Unstable => s.serialize_str("UNSTABLE"),
        }
    }
}

fn q_of(alg: &LocalAlgebra, r: u32) -> u64 {
    (alg.p() as u64).pow(r)
}

/// Over a non-Artinian algebra the cap must leave room for twisted entries:
/// `D ≥ p^r · maxdeg(relations) + 2`.
pub fn check_cap(alg: &LocalAlgebra, r: u32) -> Result<()> {
    if alg.is_artinian() {
        return Ok(());
    }
    let need = q_of(alg, r) * alg.presentation().max_relation_degree() as u64 + 2;
    if (alg.cap() as u64) < need {
        return Err(Error::CapTooSmall {
            cap: alg.cap(),
            reason: format!("twisting with p^r = {} needs a cap of at least {need}", q_of(alg, r)),
        });
    }
    Ok(())
}

/// Raises every differential entry to the `p^r`-th power; shifts scale by `p^r`.
pub fn twist(alg: &LocalAlgebra, c: &FreeComplex, r: u32) -> Result<FreeComplex> {
    if r == 0 {
        return Err(Error::NotApplicable("twist exponent must be positive".into()));
    }
    let q = q_of(alg, r) as i64;
    let too_small = || Error::CapTooSmall {
        cap: alg.cap(),
        reason: format!("a twisted entry leaves the working range (p^r = {q})"),
    };
    let mut diffs = Vec::with_capacity(c.len());
    for d in c.differentials() {
        let mut t = RMatrix::zeros(d.nrows(), d.ncols());
        for i in 0..d.nrows() {
            for j in 0..d.ncols() {
                let e = d.get(i, j);
                if !e.is_zero() {
                    t.set(i, j, alg.frob_power_wide(e, r).ok_or_else(too_small)?);
                }
            }
        }
        diffs.push(t);
    }
    let shifts = c.shifts().map(|s| s.iter().map(|v| v.iter().map(|x| x * q).collect()).collect());
    FreeComplex::new(alg, c.ranks()[0], diffs, shifts)
}

/// Homology of a free complex, expanded over the standard-monomial basis.
/// Ranks of the differentials are cached so a whole table shares them.
pub struct Homology<'a> {
    alg: &'a LocalAlgebra,
    c: &'a FreeComplex,
    supports: Vec<Vec<Vec<(usize, RingElement)>>>,
    graded: bool,
    ranks: HashMap<(usize, i64), usize>,
    checked: Vec<bool>,
}

impl<'a> Homology<'a> {
    pub fn new(alg: &'a LocalAlgebra, c: &'a FreeComplex) -> Result<Self> {
        let graded = c.shifts().is_some() && alg.is_homogeneous();
        if !graded && !alg.is_finite() {
            return Err(Error::NotGraded);
        }
        Ok(Homology {
            alg,
            c,
            supports: c.differentials().iter().map(expand::column_supports).collect(),
            graded,
            ranks: HashMap::new(),
            checked: vec![false; c.len() + 1],
        })
    }

    fn l(&self, n: usize) -> usize {
        self.c.ranks().get(n).copied().unwrap_or(0)
    }

    fn block(&self, n: usize, t: i64) -> Block {
        if self.graded {
            Block::graded(self.alg, &self.c.shifts().unwrap()[n], t)
        } else {
            Block::finite(self.alg, self.l(n))
        }
    }

    fn rank(&mut self, n: usize, t: i64) -> usize {
        if n == 0 || n > self.c.len() || self.l(n) == 0 || self.l(n - 1) == 0 {
            return 0;
        }
        if let Some(&r) = self.ranks.get(&(n, t)) {
            return r;
        }
        let src = self.block(n, t);
        let tgt = self.block(n - 1, t);
        let sup = &self.supports[n - 1];
        let alg = self.alg;
        let imgs = src.coords().into_iter().map(|(j, k)| expand::image_of(alg, sup, &tgt, j, k));
        let r = linalg::sparse_rank(alg.field(), tgt.dim, imgs);
        self.ranks.insert((n, t), r);
        r
    }

    fn in_degree(&mut self, j: usize, t: i64) -> Result<usize> {
        let dim = self.block(j, t).dim;
        let (a, b) = (self.rank(j, t), self.rank(j + 1, t));
        dim.checked_sub(a + b).ok_or(Error::ContainmentViolation)
    }

    fn check(&mut self, j: usize) -> Result<()> {
        if j >= 1 && j < self.c.len() && !self.checked[j] {
            if !self.c.differential(j).composes_to_zero(self.alg, self.c.differential(j + 1)) {
                return Err(Error::ContainmentViolation);
            }
            self.checked[j] = true;
        }
        Ok(())
    }

    /// `(first degree, last degree trusted at D, last exact degree)`.
    fn window(&self, j: usize) -> (i64, i64, i64) {
        let shifts = self.c.shifts().unwrap();
        let top = self.alg.top_degree() as i64;
        let lo = *shifts[j].iter().min().unwrap();
        if self.alg.is_finite() {
            let hi = shifts[j].iter().max().unwrap() + top;
            return (lo, hi, hi);
        }
        let mut exact = top + lo;
        if j >= 1 && j <= self.c.len() {
            let d = self.c.differential(j);
            for k in 0..d.ncols() {
                for (i, _) in d.column_support(k) {
                    exact = exact.min(top + shifts[j - 1][i]);
                }
            }
        }
        if j < self.c.len() {
            if let Some(m) = shifts[j + 1].iter().min() {
                exact = exact.min(top + m);
            }
        }
        let trusted = (self.alg.cap() as i64 - 1 + lo).min(exact);
        (lo, trusted, exact)
    }

    /// Length of `H_j`. Over a graded non-Artinian algebra the sum over the
    /// degrees trusted at the cap is compared with the sum over the whole
    /// exact range: growth means the homology is not of finite length.
    pub fn length(&mut self, j: usize) -> Result<TorLength> {
        if self.l(j) == 0 {
            return Ok(TorLength::Finite(0));
        }
        self.check(j)?;
        if !self.graded {
            return Ok(TorLength::Finite(self.in_degree(j, 0)?));
        }
        let (lo, trusted, exact) = self.window(j);
        let mut small = 0;
        for t in lo..=trusted {
            small += self.in_degree(j, t)?;
        }
        let mut big = small;
        for t in trusted + 1..=exact {
            big += self.in_degree(j, t)?;
        }
        Ok(if big == small { TorLength::Finite(small) } else { TorLength::Infinite })
    }

    /// Whether `H_j = 0`, stopping at the first degree with homology.
    pub fn is_zero(&mut self, j: usize) -> Result<bool> {
        if self.l(j) == 0 {
            return Ok(true);
        }
        self.check(j)?;
        if !self.graded {
            return Ok(self.in_degree(j, 0)? == 0);
        }
        let (lo, _, exact) = self.window(j);
        for t in lo..=exact {
            if self.in_degree(j, t)? > 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The same complex over another presentation of the ring.
fn transfer_complex(to: &LocalAlgebra, from: &LocalAlgebra, c: &FreeComplex) -> Result<FreeComplex> {
    let diffs = c.differentials().iter().map(|d| d.map(|e| to.transfer(from, e))).collect();
    FreeComplex::new(to, c.ranks()[0], diffs, c.shifts().map(<[_]>::to_vec))
}

/// Compares a finite value with the one at the stabilization cap.
fn stabilized(small: usize, big: usize) -> TorLength {
    match big.cmp(&small) {
        std::cmp::Ordering::Equal => TorLength::Finite(small),
        std::cmp::Ordering::Greater => TorLength::Infinite,
        std::cmp::Ordering::Less => TorLength::Unstable,
    }
}

/// Length of `H_j(C)`; `d_{N+1}` is taken to be zero.
pub fn homology_length(alg: &LocalAlgebra, c: &FreeComplex, j: usize) -> Result<TorLength> {
    let v = Homology::new(alg, c)?.length(j)?;
    if alg.kind() != AlgebraKind::Truncated {
        return Ok(v);
    }
    let big = alg.at_cap(alg.stable_cap())?;
    let cb = transfer_complex(&big, alg, c)?;
    match (v, Homology::new(&big, &cb)?.length(j)?) {
        (TorLength::Finite(a), TorLength::Finite(b)) => Ok(stabilized(a, b)),
        _ => Ok(TorLength::Unstable),
    }
}

fn ser_ratio<S: Serializer>(r: &Option<Ratio<u64>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) if *r.denom() == 1 => s.serialize_u64(*r.numer()),
        Some(r) => s.serialize_str(&format!("{}/{}", r.numer(), r.denom())),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorRow {
    pub j: usize,
    pub length: TorLength,
    pub betti: Option<usize>,
    #[serde(serialize_with = "ser_ratio", skip_serializing_if = "Option::is_none")]
    pub ratio: Option<Ratio<u64>>,
}

/// `ℓ(Tor_j(M, ^{φ^r}R))` for `0 ≤ j ≤ N` with Betti numbers and ratios.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorTable {
    pub module: String,
    pub r: u32,
    pub rows: Vec<TorRow>,
    pub verdicts: Vec<String>,
}

impl TorTable {
    pub fn lengths(&self) -> Vec<TorLength> {
        self.rows.iter().map(|r| r.length).collect()
    }

    pub fn betti(&self) -> Vec<Option<usize>> {
        self.rows.iter().map(|r| r.betti).collect()
    }

    /// The common ratio over `j ≥ 1` with `l_j > 0`, if all are finite and equal.
    pub fn constant_ratio(&self) -> Option<Ratio<u64>> {
        let mut seen = None;
        for row in self.rows.iter().skip(1).filter(|r| r.betti != Some(0)) {
            let r = row.ratio?;
            if seen.is_some_and(|s| s != r) {
                return None;
            }
            seen = Some(r);
        }
        seen
    }

    pub fn render(&self) -> String {
        let mut out = format!("module {}  r = {}\n", self.module, self.r);
        out.push_str(&format!("{:>4}  {:>10}  {:>8}  {:>8}\n", "j", "length", "betti", "ratio"));
        for row in &self.rows {
            let betti = row.betti.map_or("?".to_string(), |b| b.to_string());
            let ratio = row.ratio.map_or("-".to_string(), |r| r.to_string());
            out.push_str(&format!("{:>4}  {:>10}  {:>8}  {:>8}\n", row.j, row.length.to_string(), betti, ratio));
        }
        for v in &self.verdicts {
            out.push_str(&format!("verdict: {v}\n"));
        }
        out
    }
}

fn build_table(
    module: &str,
    r: u32,
    n: usize,
    res: &FreeComplex,
    complete: bool,
    mut lengths: impl FnMut(usize) -> Result<TorLength>,
) -> Result<TorTable> {
    let mut rows = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let betti = res.ranks().get(j).copied();
        let length = if betti == Some(0) {
            TorLength::Finite(0)
        } else if complete || j < res.len() {
            lengths(j)?
        } else {
            TorLength::Unstable
        };
        let ratio = match (length, betti) {
            (TorLength::Finite(a), Some(b)) if b > 0 => Some(Ratio::new(a as u64, b as u64)),
            _ => None,
        };
        rows.push(TorRow { j, length, betti, ratio });
    }
    let mut table = TorTable { module: module.to_string(), r, rows, verdicts: Vec::new() };
    if let Some(c) = table.constant_ratio() {
        table.verdicts.push(format!("constant={c}"));
    }
    Ok(table)
}

/// Tor against the twisted ring: the homology of the twisted minimal
/// resolution. A resolution step that is cap dependent marks the rows it
/// affects as UNSTABLE.
pub fn tor_frobenius(alg: &LocalAlgebra, module: &str, m: &ModulePresentation, r: u32, n: usize) -> Result<TorTable> {
    check_cap(alg, r)?;
    let (res, err) = partial_resolution(alg, m, n + 1);
    if let Some(e) = &err {
        if *e != Error::CapUnstable {
            return Err(e.clone());
        }
    }
    let tw = twist(alg, &res, r)?;
    let mut eng = Homology::new(alg, &tw)?;
    if alg.kind() == AlgebraKind::Truncated {
        let big = alg.at_cap(alg.stable_cap())?;
        let twb = transfer_complex(&big, alg, &tw)?;
        let mut engb = Homology::new(&big, &twb)?;
        return build_table(module, r, n, &res, err.is_none(), |j| {
            Ok(match (eng.length(j)?, engb.length(j)?) {
                (TorLength::Finite(a), TorLength::Finite(b)) => stabilized(a, b),
                _ => TorLength::Unstable,
            })
        });
    }
    build_table(module, r, n, &res, err.is_none(), |j| eng.length(j))
}

/// Which `j ∈ 1..=N` have `Tor_j(M, ^{φ^r}R) = 0`, using the early-exit test.
pub fn vanishing_pattern(alg: &LocalAlgebra, res: &FreeComplex, r: u32, n: usize) -> Result<Vec<bool>> {
    let tw = twist(alg, res, r)?;
    let mut eng = Homology::new(alg, &tw)?;
    (1..=n).map(|j| eng.is_zero(j)).collect()
}

/// One consistency check of a rigidity probe.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub rule: String,
    pub applicable: bool,
    pub consistent: bool,
    pub note: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub module: String,
    pub r: u32,
    pub lengths: Vec<TorLength>,
    pub betti: Vec<Option<usize>>,
    pub first_vanishing: Option<usize>,
    pub later_nonvanishing: Option<bool>,
    pub is_free: bool,
    pub projective_dimension: Option<usize>,
    pub verdicts: Vec<Verdict>,
    pub consistent: bool,
}

/// Least `k` with `l_{k+1} = 0`, i.e. the projective dimension when the
/// computed resolution terminates.
pub fn observed_pd(betti: &[Option<usize>]) -> Option<usize> {
    betti.iter().position(|b| *b == Some(0)).map(|k| k.saturating_sub(1))
}

/// Checks the observed Tor table against the rigidity statements that apply
/// to the ring. An inconsistent verdict signals an engine bug.
pub fn rigidity_probe(
    alg: &LocalAlgebra,
    inv: &InvariantReport,
    module: &str,
    m: &ModulePresentation,
    r: u32,
    n: usize,
) -> Result<ProbeReport> {
    let table = tor_frobenius(alg, module, m, r, n)?;
    let betti_full = partial_resolution(alg, m, n + 1).0.ranks().iter().map(|&b| Some(b)).collect::<Vec<_>>();
    Ok(probe_from_table(inv, m.is_free(), &table, &betti_full))
}

/// The verdict logic of [`rigidity_probe`] on precomputed data. `betti`
/// may extend beyond the table (up to `N + 1`).
pub fn probe_from_table(inv: &InvariantReport, is_free: bool, table: &TorTable, betti: &[Option<usize>]) -> ProbeReport {
    let lengths = table.lengths();
    let n = lengths.len() - 1;
    let vanish = |j: usize| lengths[j].is_zero();
    let first = (1..=n).find(|&j| vanish(j));
    let later = first.map(|j| (j + 1..=n).any(|k| !vanish(k) && lengths[k] != TorLength::Unstable));
    let pd = if is_free { Some(0) } else { observed_pd(betti) };
    let nonfree_vanishing = (1..=n).find(|&j| vanish(j) && !is_free);
    let mut verdicts = Vec::new();

    let strong = |rule: &str, applicable: bool, why: String| Verdict {
        rule: rule.into(),
        applicable,
        consistent: !applicable || nonfree_vanishing.is_none(),
        note: match (applicable, nonfree_vanishing) {
            (true, Some(j)) => format!("Tor_{j} = 0 but M is not free"),
            (true, None) => "no vanishing Tor_j with M non-free".into(),
            (false, _) => why,
        },
    };
    verdicts.push(strong("condition (1) strong rigidity", inv.condition1, "condition (1) fails".into()));
    let depth0 = inv.depth == 0 && inv.r_threshold.is_some_and(|t| table.r >= t);
    verdicts.push(strong(
        "depth 0 threshold rigidity",
        depth0,
        format!("needs depth 0 and r >= {}", inv.r_threshold.map_or("?".into(), |t| t.to_string())),
    ));

    let bad_zero_twist = (1..=n).find(|&j| vanish(j) && betti.get(j).copied().flatten() != Some(0));
    verdicts.push(Verdict {
        rule: "m^p = 0: vanishing forces l_j = 0".into(),
        applicable: inv.mp_zero,
        consistent: !inv.mp_zero || bad_zero_twist.is_none(),
        note: match (inv.mp_zero, bad_zero_twist) {
            (false, _) => "m^p != 0".into(),
            (true, Some(j)) => format!("Tor_{j} = 0 with l_{j} > 0"),
            (true, None) => "every vanishing Tor_j has l_j = 0".into(),
        },
    });

    let nonzero_with_pd = pd.and_then(|_| (1..=n).find(|&j| !vanish(j)));
    verdicts.push(Verdict {
        rule: "finite projective dimension forces vanishing".into(),
        applicable: pd.is_some(),
        consistent: pd.is_none() || nonzero_with_pd.is_none(),
        note: match (pd, nonzero_with_pd) {
            (None, _) => "resolution does not terminate within the computed range".into(),
            (Some(d), Some(j)) => format!("pd = {d} but Tor_{j} = {}", lengths[j]),
            (Some(d), None) => format!("pd = {d}; Tor_j = 0 for 1 <= j <= {n}"),
        },
    });

    let window_applies = inv.depth > 0 && inv.r_threshold.is_some_and(|t| table.r >= t);
    let width = inv.depth + 1;
    let window = (1..=n).find(|&j| j + width - 1 <= n && (j..j + width).all(vanish));
    let (consistent, note) = match (window_applies, window) {
        (false, _) => (true, "needs depth > 0 and r above the threshold for c_y".to_string()),
        (true, None) => (true, format!("vacuous: no {width} consecutive vanishing Tor_j")),
        (true, Some(j)) => match pd {
            Some(d) => (true, format!("witness window at j = {j}; pd = {d}")),
            None => (false, format!("Tor vanishes on j = {j}..{} but the resolution does not terminate", j + width - 1)),
        },
    };
    verdicts.push(Verdict { rule: "vanishing window forces finite pd".into(), applicable: window_applies, consistent, note });

    let consistent = verdicts.iter().all(|v| v.consistent);
    ProbeReport {
        module: table.module.clone(),
        r: table.r,
        lengths,
        betti: table.betti(),
        first_vanishing: first,
        later_nonvanishing: later,
        is_free,
        projective_dimension: pd,
        verdicts,
        consistent,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioReport {
    pub module: String,
    pub r: u32,
    pub ratios: Vec<Option<String>>,
    pub ring_length: Option<usize>,
    pub verdict: Option<String>,
}

/// Ratios `ℓ(Tor_j(M, ^{φ^r}R)) / l_j`; when `m^p = 0` they must all equal
/// `ℓ(R)`.
pub fn ratio_report(alg: &LocalAlgebra, module: &str, m: &ModulePresentation, r: u32, n: usize) -> Result<RatioReport> {
    let table = tor_frobenius(alg, module, m, r, n)?;
    if m.is_free() || table.rows.iter().any(|row| row.betti == Some(0)) {
        return Err(Error::NotApplicable("the module has finite projective dimension".into()));
    }
    let ring_length = alg.algebra_length().ok();
    let verdict = if alg.is_artinian() && invariants::power_vanishes(alg, alg.p()) {
        let want = Ratio::from_integer(ring_length.unwrap() as u64);
        let ok = table.rows.iter().skip(1).all(|row| row.ratio == Some(want));
        Some(if ok { format!("constant = {want}") } else { format!("NOT constant (expected {want})") })
    } else {
        None
    };
    Ok(RatioReport {
        module: module.to_string(),
        r,
        ratios: table.rows.iter().map(|row| row.ratio.map(|q| q.to_string())).collect(),
        ring_length,
        verdict,
    })
}

/// `^{φ^r}R` as a finitely presented R-module. Generators are standard
/// monomials completing `φ^r(m)R`; relations are the kernel of
/// `(a_i) ↦ Σ φ^r(a_i) g_i`.
pub fn twisted_ring_module(alg: &LocalAlgebra, r: u32) -> Result<(ModulePresentation, Vec<u32>)> {
    if !alg.is_artinian() {
        return Err(Error::NotArtinian);
    }
    let f = alg.field();
    let n = alg.dim();
    let mut ech = Echelon::new(f, n);
    for i in 0..alg.nvars() {
        let fx = alg.frob_power(&alg.var(i), r);
        for k in 0..n as u32 {
            ech.insert(alg.mul_wide(&fx.terms, &[(k, 1)]));
        }
    }
    let gens: Vec<u32> = (0..n as u32).filter(|&k| ech.insert(vec![(k, 1)])).collect();
    let frob: Vec<SparseVec> =
        (0..n as u32).map(|k| alg.frob_power(&RingElement { terms: vec![(k, 1)], truncated: false }, r).terms).collect();
    let src = Block::finite(alg, gens.len());
    let imgs = src.coords().into_iter().map(|(i, k)| alg.mul_wide(&frob[k as usize], &[(gens[i], 1)]));
    let kernel = linalg::sparse_relations(f, n, imgs);
    let cols: Vec<Vec<RingElement>> = kernel.iter().map(|v| src.decode(v)).collect();
    let m = ModulePresentation::new(alg, RMatrix::from_columns(gens.len(), cols))?;
    Ok((m, gens))
}

/// Per-`j` comparison of the two ways of computing Tor.
#[derive(Debug, Clone, Serialize)]
pub struct BalanceRow {
    pub j: usize,
    pub tor: TorLength,
    pub oracle: usize,
    pub equal: bool,
}

/// Computes `Tor_j(^{φ^r}R, M)` from a resolution of `^{φ^r}R` tensored
/// with `M` and compares with [`tor_frobenius`].
pub fn tor_balance_oracle(alg: &LocalAlgebra, m: &ModulePresentation, r: u32, n: usize) -> Result<Vec<BalanceRow>> {
    if !alg.is_artinian() {
        return Err(Error::NotArtinian);
    }
    let table = tor_frobenius(alg, "M", m, r, n)?;
    let (phi, _) = twisted_ring_module(alg, r)?;
    let g = minimal_free_resolution(alg, &phi, n + 1)?;
    let oracle = tensor_homology(alg, &g, m, n);
    Ok(table
        .rows
        .iter()
        .zip(oracle)
        .map(|(row, o)| BalanceRow { j: row.j, tor: row.length, oracle: o, equal: row.length == TorLength::Finite(o) })
        .collect())
}

/// `dim H_j(G ⊗ M)` for `0 ≤ j ≤ N`, with `M = W/U` expanded blockwise.
fn tensor_homology(alg: &LocalAlgebra, g: &FreeComplex, m: &ModulePresentation, n: usize) -> Vec<usize> {
    let f = alg.field();
    let dim = alg.dim();
    let gens = m.generators();
    let rel = m.relations();
    let per = gens * dim;
    // U inside one copy of R^g: all monomial multiples of the relation columns
    let one = Block::finite(alg, gens);
    let mut u_single: Vec<SparseVec> = Vec::new();
    {
        let mut ech = Echelon::new(f, per);
        for c in 0..rel.ncols() {
            let v = one.encode(&rel.column(c)).expect("finite block");
            for k in 0..dim as u32 {
                let w = expand::mul_monomial(alg, k, &v, &one, &one);
                if ech.insert(w.clone()) {
                    u_single.push(w);
                }
            }
        }
    }
    let b = |j: usize| g.ranks().get(j).copied().unwrap_or(0);
    let u_vectors = |blocks: usize| {
        (0..blocks).flat_map(|v| u_single.iter().map(move |w| w.iter().map(|&(i, c)| (i + (v * per) as u32, c)).collect::<SparseVec>()))
    };
    // image of coordinate (v, i, k) under D_j ⊗ id
    let d_images = |j: usize| -> Vec<SparseVec> {
        let d = g.differential(j);
        let mut out = Vec::with_capacity(b(j) * per);
        for v in 0..d.ncols() {
            let col = d.column_support(v);
            for i in 0..gens {
                for k in 0..dim as u32 {
                    let mut acc: Vec<(u32, u32)> = Vec::new();
                    for (u, e) in &col {
                        for &(a, ca) in &e.terms {
                            for (bb, cb) in alg.mul_basis(a, k) {
                                acc.push((((u * gens + i) * dim) as u32 + bb, f.mul(ca, cb)));
                            }
                        }
                    }
                    out.push(linalg::normalize(&f, acc));
                }
            }
        }
        out
    };
    // rank of D_j modulo U_{j-1}
    let rank_mod_u = |j: usize| -> usize {
        if j == 0 || j > g.len() || b(j) == 0 || b(j - 1) == 0 {
            return 0;
        }
        let mut ech = Echelon::new(f, b(j - 1) * per);
        for w in u_vectors(b(j - 1)) {
            ech.insert(w);
        }
        let before = ech.rank();
        for w in d_images(j) {
            ech.insert(w);
        }
        ech.rank() - before
    };
    let rank_u_plus_d = |j: usize| -> usize {
        let mut ech = Echelon::new(f, b(j) * per);
        for w in u_vectors(b(j)) {
            ech.insert(w);
        }
        if j < g.len() && b(j + 1) > 0 {
            for w in d_images(j + 1) {
                ech.insert(w);
            }
        }
        ech.rank()
    };
    (0..=n)
        .map(|j| {
            if b(j) == 0 {
                return 0;
            }
            b(j) * per - rank_mod_u(j) - rank_u_plus_d(j)
        })
        .collect()
}

/// Lengths of `H_j(^{φ^r}F ⊗ R/(y))` for a regular sequence `y`.
pub fn tor_vs_quotient_coeffs(
    alg: &LocalAlgebra,
    module: &str,
    m: &ModulePresentation,
    r: u32,
    ys: &[RingElement],
    n: usize,
) -> Result<TorTable> {
    if ys.is_empty() {
        return tor_frobenius(alg, module, m, r, n);
    }
    check_cap(alg, r)?;
    let bar = invariants::reduce_regular(alg, ys)?;
    let (res, err) = partial_resolution(alg, m, n + 1);
    if let Some(e) = &err {
        if *e != Error::CapUnstable {
            return Err(e.clone());
        }
    }
    let tw = twist(alg, &res, r)?;
    let diffs = tw.differentials().iter().map(|d| d.map(|e| bar.transfer(alg, e))).collect();
    let shifts = if bar.is_homogeneous() { tw.shifts().map(<[_]>::to_vec) } else { None };
    let over_bar = FreeComplex::new(&bar, tw.ranks()[0], diffs, shifts)?;
    let mut eng = Homology::new(&bar, &over_bar)?;
    build_table(module, r, n, &res, err.is_none(), |j| eng.length(j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_poly, parse_presentation};
    use crate::poly::Poly;
    use crate::ring::build_algebra;

    fn alg(src: &str) -> LocalAlgebra {
        build_algebra(&parse_presentation(src).unwrap()).unwrap()
    }

    fn mat(a: &LocalAlgebra, rows: &[&[&str]]) -> RMatrix {
        let polys: Vec<Vec<Poly>> =
            rows.iter().map(|r| r.iter().map(|s| parse_poly(a.presentation(), s).unwrap()).collect()).collect();
        RMatrix::from_polys(a, &polys).unwrap()
    }

    fn finite(v: &[usize]) -> Vec<TorLength> {
        v.iter().map(|&n| TorLength::Finite(n)).collect()
    }

    const R1: &str = "ring F 2 [x,y] / (x^2, x*y, y^2) cap 8";
    const R2: &str = "ring F 2 [x,y] / (x*y, x^2) cap 8";

    #[test]
    fn residue_field_over_r1() {
        let a = alg(R1);
        let k = ModulePresentation::residue_field(&a);
        let t = tor_frobenius(&a, "k", &k, 1, 4).unwrap();
        assert_eq!(t.lengths(), finite(&[3, 6, 12, 24, 48]));
        assert_eq!(t.constant_ratio(), Some(Ratio::from_integer(3)));
        let free = ModulePresentation::free(&a, 1);
        assert_eq!(tor_frobenius(&a, "R", &free, 2, 3).unwrap().lengths(), finite(&[3, 0, 0, 0]));
    }

    #[test]
    fn twist_kills_linear_differentials() {
        let a = alg(R1);
        let res = minimal_free_resolution(&a, &ModulePresentation::residue_field(&a), 4).unwrap();
        let tw = twist(&a, &res, 1).unwrap();
        assert!(tw.differentials().iter().all(RMatrix::is_zero));
        let d = alg("ring F 2 [x] / (x^2)");
        let c = FreeComplex::new(&d, 1, vec![mat(&d, &[&["x"]])], None).unwrap();
        assert!(twist(&d, &c, 1).unwrap().differential(1).is_zero());
    }

    #[test]
    fn coker_x_over_r2() {
        let a = alg(R2);
        let m = ModulePresentation::new(&a, mat(&a, &[&["x"]])).unwrap();
        let t = tor_frobenius(&a, "coker[x]", &m, 1, 2).unwrap();
        assert_eq!(t.lengths(), vec![TorLength::Infinite, TorLength::Finite(3), TorLength::Finite(4)]);
    }

    #[test]
    fn identity_complex_is_exact() {
        let a = alg(R2);
        let c = FreeComplex::new(&a, 1, vec![RMatrix::identity(&a, 1)], Some(vec![vec![0], vec![0]])).unwrap();
        assert_eq!(homology_length(&a, &c, 1).unwrap(), TorLength::Finite(0));
        assert_eq!(homology_length(&a, &c, 0).unwrap(), TorLength::Finite(0));
    }

    #[test]
    fn balance_on_small_rings() {
        for (src, r) in [(R1, 1), ("ring F 2 [x] / (x^2)", 1), ("ring F 3 [x,y] / (x^2, y^3)", 1)] {
            let a = alg(src);
            let k = ModulePresentation::residue_field(&a);
            for row in tor_balance_oracle(&a, &k, r, 4).unwrap() {
                assert!(row.equal, "{src}: {row:?}");
            }
        }
    }

    #[test]
    fn ratio_over_dual_numbers() {
        let a = alg("ring F 2 [x] / (x^2)");
        let rep = ratio_report(&a, "k", &ModulePresentation::residue_field(&a), 1, 5).unwrap();
        assert_eq!(rep.verdict.as_deref(), Some("constant = 2"));
        let r1 = alg(R1);
        assert!(matches!(
            ratio_report(&r1, "R", &ModulePresentation::free(&r1, 1), 1, 3),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn twist_requires_room_in_the_cap() {
        let a = alg("ring F 2 [x,y] / (x*y, x^2) cap 6");
        let k = ModulePresentation::residue_field(&a);
        assert!(matches!(tor_frobenius(&a, "k", &k, 2, 2), Err(Error::CapTooSmall { .. })));
    }
}
