//! Randomized search for non-free modules whose twisted Tor vanishes
//! somewhere.

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use frobenius::frobtor::{self, TorLength};
use frobenius::invariants::InvariantReport;
use frobenius::random;
use frobenius::resolve::{partial_resolution, ModulePresentation};
use frobenius::ring::{build_algebra, LocalAlgebra, RingPresentation};
use frobenius::Error;

use crate::{load_ring, Outcome, SearchArgs, EXIT_INCONSISTENT, MAX_N};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// F_p[x_1..x_n]/m^2.
    M2,
    /// Monomial and binomial Artinian quotients.
    Artinian,
    /// F_p[x,y]/(x^a).
    Depth1,
}

/// One (ring, module, r) instance that showed a vanishing Tor_j, j ≥ 1, or
/// failed a verdict.
#[derive(Debug, Clone, Serialize)]
pub struct Instance {
    pub trial: usize,
    pub ring: String,
    pub module: String,
    pub r: u32,
    pub lengths: Vec<TorLength>,
    pub betti: Vec<Option<usize>>,
    pub first_vanishing: Option<usize>,
    pub later_nonvanishing: Option<bool>,
    pub projective_dimension: Option<usize>,
    pub depth: usize,
    pub condition1: bool,
    pub window: Option<String>,
    pub consistent: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Summary {
    pub trials: usize,
    pub instances: usize,
    pub skipped: usize,
    pub witnesses: usize,
    pub vacuous: usize,
    pub contradictions: usize,
    pub window_checked: usize,
    pub window_witnesses: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub family: Option<Family>,
    pub ring: Option<String>,
    pub seed: u64,
    pub r: Vec<u32>,
    pub n: usize,
    pub summary: Summary,
    pub witnesses: Vec<Instance>,
    pub skipped: Vec<String>,
}

/// Runs the search. Trial `i` draws from its own ChaCha stream, so results
/// do not depend on the order trials are run in.
pub fn search(
    fixed: Option<(&str, &LocalAlgebra)>,
    family: Family,
    trials: usize,
    seed: u64,
    rs: &[u32],
    n: usize,
) -> SearchReport {
    let r_max = rs.iter().copied().max().unwrap_or(1);
    let fixed_inv = fixed.map(|(_, alg)| InvariantReport::compute(alg));
    let mut summary = Summary { trials, ..Default::default() };
    let mut witnesses = Vec::new();
    let mut skipped = Vec::new();
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let built;
        let (alg, inv) = match (fixed, &fixed_inv) {
            (Some((_, alg)), Some(inv)) => match inv {
                Ok(inv) => (alg, inv.clone()),
                Err(e) => {
                    summary.skipped += rs.len();
                    skipped.push(format!("trial {trial}: {e}"));
                    continue;
                }
            },
            _ => {
                let pres = random_ring(family, &mut rng, r_max);
                match build_algebra(&pres).and_then(|a| InvariantReport::compute(&a).map(|i| (a, i))) {
                    Ok((a, i)) => {
                        built = a;
                        (&built, i)
                    }
                    Err(e) => {
                        summary.skipped += rs.len();
                        skipped.push(format!("trial {trial}: {pres}: {e}"));
                        continue;
                    }
                }
            }
        };
        let module = if inv.depth > 0 && alg.nvars() == 2 && rng.gen_bool(0.5) {
            random::random_finite_pd_module(alg, &mut rng)
        } else {
            random::random_module(alg, &mut rng)
        };
        let module = match module {
            Ok(m) => m,
            Err(e) => {
                summary.skipped += rs.len();
                skipped.push(format!("trial {trial}: module: {e}"));
                continue;
            }
        };
        for &r in rs {
            match instance(alg, &inv, &module, trial, r, n) {
                Ok(inst) => {
                    summary.instances += 1;
                    if inst.window.is_some() {
                        summary.window_checked += 1;
                    }
                    if inst.window.as_deref().is_some_and(|w| w.starts_with("witness")) {
                        summary.window_witnesses += 1;
                    }
                    if !inst.consistent {
                        summary.contradictions += 1;
                    }
                    let witness = inst.first_vanishing.is_some();
                    if witness {
                        summary.witnesses += 1;
                    } else {
                        summary.vacuous += 1;
                    }
                    if witness || !inst.consistent {
                        witnesses.push(inst);
                    }
                }
                Err(e) => {
                    summary.skipped += 1;
                    skipped.push(format!("trial {trial} r={r}: {e}"));
                }
            }
        }
    }
    SearchReport {
        family: fixed.is_none().then_some(family),
        ring: fixed.map(|(name, _)| name.to_string()),
        seed,
        r: rs.to_vec(),
        n,
        summary,
        witnesses,
        skipped,
    }
}

fn random_ring(family: Family, rng: &mut ChaCha8Rng, r_max: u32) -> RingPresentation {
    match family {
        Family::M2 => random::random_m2_ring(rng),
        Family::Artinian => random::random_artinian_ring(rng),
        Family::Depth1 => random::random_depth1_ring(rng, r_max),
    }
}

/// Tor table and verdicts of one instance. Free modules never count as
/// witnesses: `first_vanishing` is only set for non-free modules.
fn instance(
    alg: &LocalAlgebra,
    inv: &InvariantReport,
    m: &ModulePresentation,
    trial: usize,
    r: u32,
    n: usize,
) -> Result<Instance, Error> {
    let table = frobtor::tor_frobenius(alg, "M", m, r, n)?;
    let betti: Vec<Option<usize>> = partial_resolution(alg, m, n + 1).0.ranks().iter().map(|&b| Some(b)).collect();
    let probe = frobtor::probe_from_table(inv, m.is_free(), &table, &betti);
    let window = probe
        .verdicts
        .iter()
        .find(|v| v.rule == "vanishing window forces finite pd" && v.applicable)
        .map(|v| v.note.clone());
    Ok(Instance {
        trial,
        ring: alg.presentation().to_string(),
        module: m.relations().format(alg).trim_end().replace('\n', "; "),
        r,
        lengths: probe.lengths,
        betti: probe.betti,
        first_vanishing: if m.is_free() { None } else { probe.first_vanishing },
        later_nonvanishing: probe.later_nonvanishing,
        projective_dimension: probe.projective_dimension,
        depth: inv.depth,
        condition1: inv.condition1,
        window,
        consistent: probe.consistent,
    })
}

pub fn render(rep: &SearchReport) -> String {
    let s = &rep.summary;
    let source = match (&rep.ring, rep.family) {
        (Some(r), _) => format!("ring {r}"),
        (None, Some(f)) => format!("family {}", f.to_possible_value().map_or("?".into(), |v| v.get_name().to_string())),
        _ => String::new(),
    };
    let mut out = format!("search {source}  seed {}  r {:?}  N {}\n", rep.seed, rep.r, rep.n);
    out += &format!(
        "trials {}  instances {}  skipped {}  witnesses {}  vacuous {}  contradictions {}\n",
        s.trials, s.instances, s.skipped, s.witnesses, s.vacuous, s.contradictions
    );
    out += &format!("window predicate checked {}  with a vanishing window {}\n", s.window_checked, s.window_witnesses);
    for w in &rep.witnesses {
        let lengths: Vec<String> = w.lengths.iter().map(|l| l.to_string()).collect();
        out += &format!(
            "  trial {} r={} {} | {} | Tor {} | pd {}{}\n",
            w.trial,
            w.r,
            w.ring,
            w.module,
            lengths.join(","),
            w.projective_dimension.map_or("?".into(), |d| d.to_string()),
            if w.consistent { "" } else { "  CONTRADICTION" }
        );
    }
    out
}

pub fn cmd_search(a: &SearchArgs) -> Result<Outcome, Error> {
    if a.n > MAX_N {
        return Err(Error::NotApplicable(format!("N = {} exceeds the ceiling {MAX_N}", a.n)));
    }
    let ring = a.file.as_deref().map(|f| load_ring(f, a.cap)).transpose()?;
    let fixed = ring.as_ref().map(|r| (r.name.as_str(), &r.alg));
    let rep = search(fixed, a.family, a.trials, a.seed, &a.r, a.n);
    let mut j = json!({ "command": "search" });
    j["report"] = serde_json::to_value(&rep).expect("serializable");
    let mut out = Outcome::ok(render(&rep), j);
    if rep.summary.contradictions > 0 {
        out.exit = EXIT_INCONSISTENT;
    }
    Ok(out)
}
