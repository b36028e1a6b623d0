//! The worked examples: the `M(a,b,c)` family, the `(x, y^6)` pair, the
//! transpose correspondence and the mixed multiplicity identities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exactring::{Field, Poly};
use crate::ideals::{mixed_multiplicity, Ideal};
use crate::modlat::Module;
use crate::monomial::Staircase;
use crate::multiplicity::{br_multiplicity, check_power_identity};
use crate::session::Session;
use crate::structure::psi;

use super::corpus::{mabc_grid, order_one_sum};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleCheck {
    pub part: String,
    pub name: String,
    pub passed: bool,
    /// Recorded observations do not count towards the verdict.
    pub asserted: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleBundle {
    pub checks: Vec<ExampleCheck>,
}

impl ExampleBundle {
    fn push(&mut self, part: &str, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(ExampleCheck {
            part: part.into(),
            name: name.into(),
            passed,
            asserted: true,
            detail: detail.into(),
        });
    }

    fn record(&mut self, part: &str, name: impl Into<String>, holds: bool, detail: impl Into<String>) {
        self.checks.push(ExampleCheck {
            part: part.into(),
            name: name.into(),
            passed: holds,
            asserted: false,
            detail: detail.into(),
        });
    }

    pub fn failures(&self) -> Vec<&ExampleCheck> {
        self.checks.iter().filter(|c| c.asserted && !c.passed).collect()
    }

    pub fn all_passed(&self) -> bool {
        self.failures().is_empty()
    }

    /// Asserted checks in `part`, as (passed, total).
    pub fn tally(&self, part: &str) -> (usize, usize) {
        let it = self.checks.iter().filter(|c| c.asserted && c.part == part);
        let total = it.clone().count();
        (it.filter(|c| c.passed).count(), total)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match (c.asserted, c.passed) {
                (true, true) => "ok  ",
                (true, false) => "FAIL",
                (false, true) => "holds",
                (false, false) => "fails",
            };
            out.push_str(&format!("[{}] {tag} {}: {}\n", c.part, c.name, c.detail));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExampleConfig {
    pub seed: u64,
    pub closed_pairs: usize,
    pub general_pairs: usize,
    pub psi_modules: usize,
}

impl Default for ExampleConfig {
    fn default() -> Self {
        ExampleConfig { seed: 1, closed_pairs: 15, general_pairs: 30, psi_modules: 10 }
    }
}

/// `e(I) - λ(R/I)` and `e(M) - λ(F/M)` for `M(a,b,c)`.
pub fn mabc_excesses<F: Field>(a: u32, b: u32, c: u32, seed: u64, s: &Session) -> Result<(i64, i64)> {
    let m = Module::<F>::family_mabc(a, b, c)?;
    let i = m.ideal()?;
    let ei = i.hs_multiplicity(seed, s)? as i64 - i.colength(s)?.value as i64;
    let em = br_multiplicity(&m, seed, s)? as i64 - m.colength(s)? as i64;
    Ok((ei, em))
}

fn grid_part<F: Field>(b: &mut ExampleBundle, seed: u64, s: &Session) -> Result<()> {
    for (a, bb, c) in mabc_grid(8) {
        let (ei, em) = mabc_excesses::<F>(a, bb, c, seed, s)?;
        let (a_, d) = (a as i64, (bb - c) as i64);
        let (fi, fm) = (a_ * a_ + d * d, a_ * d + d * d);
        let ok = ei == fi && em == fm && ((ei == em) == (a_ == d));
        b.push(
            "a",
            format!("M({a},{bb},{c})"),
            ok,
            format!("e(I)-len(R/I) = {ei} (formula {fi}), e(M)-len(F/M) = {em} (formula {fm})"),
        );
    }
    Ok(())
}

fn first_three<F: Field>(m: &Module<F>) -> Module<F> {
    m.select(&[0, 1, 2])
}

fn running_example_part<F: Field>(b: &mut ExampleBundle, seed: u64, s: &Session) -> Result<()> {
    let m = Module::<F>::family_mabc(2, 4, 3)?;
    let n = first_three(&m);
    let sq = check_power_identity(&m, &n, 1, s)?;
    b.push("b", "M(2,4,3): M^2 = NM", sq, format!("{sq}"));
    let i = m.ideal()?;
    let lhs = i.hs_multiplicity(seed, s)? as i64 - br_multiplicity(&m, seed, s)? as i64;
    let rhs = i.colength(s)?.value as i64 - m.colength(s)? as i64;
    b.push("b", "M(2,4,3): length-multiplicity identity fails", lhs != rhs, format!("{lhs} vs {rhs}"));
    for (a, bb, c) in mabc_grid(8).into_iter().filter(|&(a, b, c)| a + b <= 2 * c) {
        let m = Module::<F>::family_mabc(a, bb, c)?;
        let ok = check_power_identity(&m, &first_three(&m), 1, s)?;
        b.push("c", format!("M({a},{bb},{c}): M^2 = NM"), ok, format!("{ok}"));
    }
    Ok(())
}

fn gens_times<F: Field>(f: &Poly<F>, i: &Ideal<F>) -> Vec<Poly<F>> {
    i.gens().iter().map(|g| f * g).collect()
}

fn pair_part<F: Field>(b: &mut ExampleBundle, seed: u64, s: &Session) -> Result<()> {
    let i = Ideal::<F>::parse("x, y^6")?;
    let j = Ideal::<F>::parse("x^3, x*y^4, y^6")?;
    let (x, y6) = (Poly::<F>::x(), Poly::<F>::monomial(0, 6));
    let ij = i.product(&j, s)?;
    let mut alt = gens_times(&x, &j);
    alt.extend(gens_times(&y6, &i));
    let holds_alt = ij.equals(&Ideal::new(alt)?, s)?;
    b.push("d", "IJ = xJ + y^6 I", holds_alt, format!("{holds_alt}"));
    let mut printed = gens_times(&x, &j);
    printed.extend(gens_times(&y6, &j));
    let holds_printed = ij.equals(&Ideal::new(printed)?, s)?;
    b.record("d", "IJ = xJ + y^6 J", holds_printed, format!("{holds_printed}"));
    let j2 = j.power(2, s)?;
    let red = Ideal::<F>::parse("x^3, y^6")?.product(&j, s)?;
    let differ = !j2.equals(&red, s)?;
    b.push("d", "J^2 != (x^3, y^6) J", differ, format!("{differ}"));
    let m = Module::from_ideals(&[i, j]);
    let im = m.ideal()?;
    let lhs = im.hs_multiplicity(seed, s)? as i64 - br_multiplicity(&m, seed, s)? as i64;
    let rhs = im.colength(s)?.value as i64 - m.colength(s)? as i64;
    b.push("d", "I+J: length-multiplicity identity", lhs == rhs, format!("{lhs} = {rhs}"));
    Ok(())
}

fn psi_part<F: Field>(b: &mut ExampleBundle, cfg: &ExampleConfig, s: &Session) -> Result<()> {
    for k in 0..cfg.psi_modules {
        let rank = 1 + k % 3;
        let (m, parts) = order_one_sum::<F>(rank, cfg.seed.wrapping_add(k as u64));
        let name = format!("psi of {}", describe(&parts));
        let kmod = match psi(&m, cfg.seed, s) {
            Ok(kmod) => kmod,
            Err(e) => {
                b.push("e", name, false, e.to_string());
                continue;
            }
        };
        let ik = kmod.ideal()?;
        let adj = ik.simplified().to_staircase().map(|st| st.polyhedral_adjoint()).transpose()?;
        let Some(adj) = adj else {
            b.push("e", name, false, "I(K) is not monomial");
            continue;
        };
        let ek = br_multiplicity(&kmod, cfg.seed, s)?;
        let rhs = ik.hs_multiplicity(cfg.seed, s)? - adj.colength()?;
        b.push("e", name, ek == rhs, format!("e(K) = {ek}, e(I(K)) - len(R/adj) = {rhs}"));
    }
    Ok(())
}

fn describe(parts: &[Staircase]) -> String {
    parts.iter().map(|p| format!("{:?}", p.corners())).collect::<Vec<_>>().join(" + ")
}

/// A random monomial ideal with corners of exponent at most `e`.
fn random_staircase(rng: &mut ChaCha8Rng, e: u32) -> Staircase {
    let mut pts = vec![(rng.gen_range(1..=e), 0), (0, rng.gen_range(1..=e))];
    for _ in 0..rng.gen_range(0..3) {
        pts.push((rng.gen_range(1..e), rng.gen_range(1..e)));
    }
    Staircase::new(pts)
}

/// `e₁(I|J)` against `λ(R/IJ) - λ(R/I) - λ(R/J)`.
fn mixed_excess<F: Field>(p: &Staircase, q: &Staircase, s: &Session) -> Result<(usize, i64)> {
    let (i, j) = (Ideal::<F>::from_staircase(p), Ideal::<F>::from_staircase(q));
    let e1 = mixed_multiplicity(&i, &j, s)?;
    let rhs = p.product(q).colength()? as i64 - p.colength()? as i64 - q.colength()? as i64;
    Ok((e1, rhs))
}

fn mixed_part<F: Field>(b: &mut ExampleBundle, cfg: &ExampleConfig, s: &Session) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x4d_4958_4544);
    for k in 0..cfg.closed_pairs {
        let p = Staircase::random_ic(rng.gen_range(1..=2), 8, rng.gen())?;
        let q = Staircase::random_ic(rng.gen_range(1..=2), 8, rng.gen())?;
        let name = format!("{:?} | {:?}", p.corners(), q.corners());
        let (e1, rhs) = mixed_excess::<F>(&p, &q, s)?;
        b.push("f-closed", name.clone(), e1 as i64 == rhs, format!("e1 = {e1}, length formula {rhs}"));
        // Kirby-Rees and the ideal of maximal minors of I + J.
        let (i, j) = (Ideal::<F>::from_staircase(&p), Ideal::<F>::from_staircase(&q));
        let (ei, ej) = (i.hs_multiplicity(cfg.seed, s)?, j.hs_multiplicity(cfg.seed, s)?);
        let m = Module::from_ideals(&[i, j]);
        let em = br_multiplicity(&m, cfg.seed + k as u64, s)?;
        let eim = m.ideal()?.hs_multiplicity(cfg.seed, s)?;
        b.push(
            "f-kirby-rees",
            name.clone(),
            em == ei + e1 + ej,
            format!("e(M) = {em}, e(I)+e1+e(J) = {}", ei + e1 + ej),
        );
        b.push(
            "f-product",
            name,
            eim == ei + 2 * e1 + ej,
            format!("e(IJ) = {eim}, e(I)+2e1+e(J) = {}", ei + 2 * e1 + ej),
        );
    }
    for _ in 0..cfg.general_pairs {
        let p = random_staircase(&mut rng, 4);
        let q = random_staircase(&mut rng, 4);
        let (e1, rhs) = mixed_excess::<F>(&p, &q, s)?;
        b.push(
            "f-general",
            format!("{:?} | {:?}", p.corners(), q.corners()),
            e1 as i64 >= rhs,
            format!("e1 = {e1} >= {rhs}"),
        );
    }
    Ok(())
}

/// Every part of the suite. Computation errors propagate; failed
/// identities are recorded as failed checks.
pub fn example_suite<F: Field>(cfg: &ExampleConfig, s: &Session) -> Result<ExampleBundle> {
    let mut b = ExampleBundle::default();
    grid_part::<F>(&mut b, cfg.seed, s)?;
    running_example_part::<F>(&mut b, cfg.seed, s)?;
    pair_part::<F>(&mut b, cfg.seed, s)?;
    psi_part::<F>(&mut b, cfg, s)?;
    mixed_part::<F>(&mut b, cfg, s)?;
    Ok(b)
}
