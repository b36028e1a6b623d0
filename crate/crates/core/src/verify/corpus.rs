//! Seeded module corpora and the batch verifier.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactring::{Field, Poly};
use crate::ideals::Ideal;
use crate::modlat::Module;
use crate::monomial::Staircase;
use crate::session::Session;

use super::report::{report, InvariantReport, ReportOptions};

const ATTEMPTS: usize = 200;

fn item_seed(seed: u64, index: usize, salt: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (index as u64).wrapping_mul(0xD1B5_4A32_D192_ED03) ^ salt
}

fn nonzero<F: Field>(rng: &mut ChaCha8Rng) -> F {
    let v = rng.gen_range(1..=7i64);
    F::from_i64(if rng.gen_bool(0.5) { v } else { -v })
}

/// A `Z²`-graded module: component `i` sits in degree `t_i`, every column
/// has a degree `δ` and entry `i` is a scalar times `x^{δ-t_i}`. Pure powers
/// `x^α T_i`, `y^β T_i` make the colength finite. Every ideal of minors is
/// then monomial.
pub fn monomial_column_module<F: Field>(rank: usize, bound: usize, seed: u64, s: &Session) -> Result<Module<F>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        let shifts: Vec<(u32, u32)> = (0..rank).map(|_| (rng.gen_range(0..=2), rng.gen_range(0..=2))).collect();
        let mut cols = Vec::new();
        for i in 0..rank {
            for pure in [(rng.gen_range(1..=4), 0), (0, rng.gen_range(1..=4))] {
                let mut col = vec![Poly::zero(); rank];
                col[i] = Poly::monomial(pure.0, pure.1);
                cols.push(col);
            }
        }
        for _ in 0..rng.gen_range(1..=rank + 1) {
            let delta = (rng.gen_range(0..=4), rng.gen_range(0..=4));
            let col: Vec<Poly<F>> = shifts
                .iter()
                .map(|&(a, b)| {
                    let fits = delta.0 >= a && delta.1 >= b && (delta.0 - a) + (delta.1 - b) > 0;
                    if fits && rng.gen_bool(0.7) {
                        Poly::term(nonzero(&mut rng), delta.0 - a, delta.1 - b)
                    } else {
                        Poly::zero()
                    }
                })
                .collect();
            if col.iter().any(|f| !f.is_zero()) {
                cols.push(col);
            }
        }
        let Ok(m) = Module::new(rank, cols, s) else { continue };
        if m.colength(s)? <= bound {
            return Ok(m);
        }
    }
    Err(Error::Resource(format!("no rank {rank} module with colength at most {bound}")))
}

/// Direct sum of random integrally closed monomial ideals of total colength
/// at most `bound`.
pub fn closed_direct_sum<F: Field>(rank: usize, bound: usize, seed: u64) -> Result<(Module<F>, Vec<Staircase>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        let mut parts = Vec::with_capacity(rank);
        let mut total = 0;
        for _ in 0..rank {
            let ord = rng.gen_range(1..=3u32);
            let per = (bound / rank).max(ord as usize * (ord as usize + 1) / 2);
            let st = Staircase::random_ic(ord, per, rng.gen())?;
            total += st.colength()?;
            parts.push(st);
        }
        if total <= bound {
            let ideals: Vec<Ideal<F>> = parts.iter().map(Ideal::from_staircase).collect();
            return Ok((Module::from_ideals(&ideals), parts));
        }
    }
    Err(Error::Resource("no closed direct sum within the colength bound".into()))
}

/// A member of the class of closed modules with `ord(I(M)) = rank` inside
/// `mF`: a direct sum of order-one closed ideals `(x, y^b)` or `(x^a, y)`.
pub fn order_one_sum<F: Field>(rank: usize, seed: u64) -> (Module<F>, Vec<Staircase>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parts: Vec<Staircase> = (0..rank)
        .map(|_| {
            let e = rng.gen_range(1..=4);
            if rng.gen_bool(0.5) {
                Staircase::new([(1, 0), (0, e)])
            } else {
                Staircase::new([(e, 0), (0, 1)])
            }
        })
        .collect();
    let ideals: Vec<Ideal<F>> = parts.iter().map(Ideal::from_staircase).collect();
    (Module::from_ideals(&ideals), parts)
}

/// Generic-coefficient module whose ideals of minors are usually not
/// monomial.
pub fn dense_module<F: Field>(rank: usize, bound: usize, seed: u64, s: &Session) -> Result<Module<F>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = |rng: &mut ChaCha8Rng| {
        Poly::from_terms((0..3).map(|_| {
            let a = rng.gen_range(0..=3);
            let b = rng.gen_range(0..=3 - a);
            let (a, b) = if a + b == 0 { (1, 0) } else { (a, b) };
            ((a, b), nonzero::<F>(rng))
        }))
    };
    for _ in 0..ATTEMPTS {
        let mut cols = Vec::new();
        for i in 0..rank {
            let mut c1: Vec<Poly<F>> = (0..rank).map(|_| Poly::zero()).collect();
            let mut c2 = c1.clone();
            c1[i] = Poly::monomial(rng.gen_range(1..=3), 0);
            c2[i] = Poly::monomial(0, rng.gen_range(1..=3));
            for f in c1.iter_mut() {
                *f = &*f + &noise(&mut rng).shift(1, 1);
            }
            cols.push(c1);
            cols.push(c2);
        }
        cols.push((0..rank).map(|_| noise(&mut rng)).collect());
        let Ok(m) = Module::new(rank, cols, s) else { continue };
        if m.colength(s)? <= bound {
            return Ok(m);
        }
    }
    Err(Error::Resource(format!("no dense rank {rank} module with colength at most {bound}")))
}

/// All `(a, b, c)` with `1 ≤ a ≤ c < b ≤ a + c` and `a + b ≤ sum_bound`.
pub fn mabc_grid(sum_bound: u32) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for a in 1..sum_bound {
        for b in 2..=sum_bound - a {
            for c in a..b {
                if b <= a + c {
                    out.push((a, b, c));
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusConfig {
    pub size: usize,
    pub seed: u64,
    pub max_rank: usize,
    pub colength_bound: usize,
    /// Append dense modules, checked only on adjoint-free verdicts.
    pub hard: bool,
    pub limit_pmax: Option<usize>,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig { size: 100, seed: 1, max_rank: 3, colength_bound: 25, hard: false, limit_pmax: None }
    }
}

#[derive(Clone, Debug)]
pub struct CorpusItem<F: Field> {
    pub index: usize,
    pub kind: String,
    pub seed: u64,
    pub module: Module<F>,
}

/// Items in a fixed order: three in five are graded monomial-column
/// modules, one a closed direct sum, one a grid module within the colength
/// bound; `hard` appends a quarter as many dense modules.
pub fn generate_corpus<F: Field>(cfg: &CorpusConfig, s: &Session) -> Result<Vec<CorpusItem<F>>> {
    let mut grid = Vec::new();
    for (a, b, c) in mabc_grid(8) {
        if Module::<F>::family_mabc(a, b, c)?.colength(s)? <= cfg.colength_bound {
            grid.push((a, b, c));
        }
    }
    let dense = if cfg.hard { cfg.size / 4 } else { 0 };
    (0..cfg.size + dense)
        .into_par_iter()
        .map(|i| {
            let seed = item_seed(cfg.seed, i, 0);
            let rank = 1 + (i / 5) % cfg.max_rank.max(1);
            let (kind, module) = if i >= cfg.size {
                let rank = 1 + i % cfg.max_rank.clamp(1, 2);
                ("dense".to_string(), dense_module(rank, cfg.colength_bound, seed, s)?)
            } else {
                match i % 5 {
                    3 => ("closed_sum".to_string(), closed_direct_sum(rank, cfg.colength_bound, seed)?.0),
                    4 if !grid.is_empty() => {
                        let (a, b, c) = grid[(i / 5) % grid.len()];
                        (format!("mabc({a},{b},{c})"), Module::family_mabc(a, b, c)?)
                    }
                    _ => ("monomial_columns".to_string(), monomial_column_module(rank, cfg.colength_bound, seed, s)?),
                }
            };
            Ok(CorpusItem { index: i, kind, seed, module })
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictTally {
    pub checked: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemOutcome {
    pub index: usize,
    pub kind: String,
    pub report: Option<InvariantReport>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub items: Vec<ItemOutcome>,
    pub tallies: BTreeMap<String, VerdictTally>,
    /// `(item index, verdict name)` for every failed verdict.
    pub violations: Vec<(usize, String)>,
    pub errors: usize,
}

impl CorpusSummary {
    pub fn exit_code(&self) -> i32 {
        if !self.violations.is_empty() {
            1
        } else if self.errors > 0 {
            3
        } else {
            0
        }
    }

    pub fn to_text(&self) -> String {
        let mut out =
            format!("{} items, {} errors, {} violations\n", self.items.len(), self.errors, self.violations.len());
        for (name, t) in &self.tallies {
            out.push_str(&format!(
                "  {name:<12} checked {:>4}  passed {:>4}  failed {:>4}\n",
                t.checked, t.passed, t.failed
            ));
        }
        for (i, name) in &self.violations {
            out.push_str(&format!("  violation: item {i} {name}\n"));
        }
        for it in self.items.iter().filter(|it| it.error.is_some()) {
            out.push_str(&format!("  error: item {} ({}): {}\n", it.index, it.kind, it.error.as_deref().unwrap_or("")));
        }
        out
    }
}

/// Generate the corpus and report on every item in parallel; results keep
/// the item order.
pub fn verify_corpus<F: Field>(cfg: &CorpusConfig, s: &Session) -> Result<CorpusSummary> {
    let items = generate_corpus::<F>(cfg, s)?;
    let outcomes: Vec<ItemOutcome> = items
        .par_iter()
        .map(|it| {
            let opts = ReportOptions { seed: it.seed, limit_pmax: cfg.limit_pmax };
            let (report, error) = match report(&it.module, opts, s) {
                Ok(r) => (Some(r), None),
                Err(e) => (None, Some(e.to_string())),
            };
            ItemOutcome { index: it.index, kind: it.kind.clone(), report, error }
        })
        .collect();
    Ok(summarize(outcomes))
}

pub fn summarize(items: Vec<ItemOutcome>) -> CorpusSummary {
    let mut sum = CorpusSummary::default();
    for it in &items {
        let Some(rep) = &it.report else {
            sum.errors += 1;
            continue;
        };
        for (name, v) in rep.verdicts.named() {
            let t = sum.tallies.entry(name.to_string()).or_default();
            match v {
                Some(true) => {
                    t.checked += 1;
                    t.passed += 1;
                }
                Some(false) => {
                    t.checked += 1;
                    t.failed += 1;
                    sum.violations.push((it.index, name.to_string()));
                }
                None => {}
            }
        }
        if !rep.replays() {
            sum.violations.push((it.index, "replay".to_string()));
        }
    }
    sum.items = items;
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::Gf;

    #[test]
    fn grid_size() {
        let g = mabc_grid(8);
        assert!(g.contains(&(2, 4, 3)) && g.contains(&(1, 2, 1)));
        assert!(g.iter().all(|&(a, b, c)| 1 <= a && a <= c && c < b && b <= a + c && a + b <= 8));
    }

    #[test]
    fn generated_modules_are_graded_and_bounded() {
        let s = Session::default();
        for seed in 0..10 {
            for rank in 1..=3 {
                let m = monomial_column_module::<Gf>(rank, 25, seed, &s).unwrap();
                assert!(m.colength(&s).unwrap() <= 25);
                assert!(m.ideal().unwrap().simplified().is_monomial());
            }
        }
    }

    #[test]
    fn order_one_sums_have_order_equal_rank() {
        for seed in 0..5 {
            let (m, _) = order_one_sum::<Gf>(3, seed);
            assert_eq!(m.ideal().unwrap().order(), 3);
        }
    }

    #[test]
    fn empty_config_is_clean() {
        let s = Session::default();
        let cfg = CorpusConfig { size: 0, ..CorpusConfig::default() };
        let sum = verify_corpus::<Gf>(&cfg, &s).unwrap();
        assert!(sum.items.is_empty());
        assert_eq!(sum.exit_code(), 0);
    }

    #[test]
    fn small_corpus_is_deterministic_and_clean() {
        let s = Session::default();
        let cfg = CorpusConfig { size: 10, seed: 7, ..CorpusConfig::default() };
        let a = verify_corpus::<Gf>(&cfg, &s).unwrap();
        let b = verify_corpus::<Gf>(&cfg, &s).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.exit_code(), 0, "{}", a.to_text());
    }
}
