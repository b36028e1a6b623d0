//! Per-module invariant reports. Verdicts are functions of the numeric
//! fields only, so a parsed report can be re-checked.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exactring::Field;
use crate::modlat::Module;
use crate::multiplicity::{br_limit_multiplicity, br_multiplicity, is_integrally_closed, IcStatus};
use crate::session::Session;
use crate::structure::{adjoint_of_module, fitt_r1};

/// Where `λ(R/adj(I))` came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdjTier {
    Polyhedral,
    Presentation,
    Unavailable,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    /// `e(I) - λ(R/adj I) ≤ e(M)`.
    pub thm11_lower: Option<bool>,
    /// `e(M) ≤ λ(F/M) + λ(R/adj I)`.
    pub thm11_upper: Option<bool>,
    /// `e(M) = λ(F/M) + λ(R/adj I)` agrees with the closedness status.
    pub thm11_eq1: Option<bool>,
    /// `e(M) = e(I) - λ(R/adj I)` iff `I` is closed with `λ(R/I) = e(M)`.
    pub thm11_eq2: Option<bool>,
    /// `e(M) - λ(F/M) ≥ λ(R/Fitt_{r+1}(M))`.
    pub prop31: Option<bool>,
    /// `e(I) - e(M) ≥ λ(R/I_{r-1}(M))`.
    pub prop32: Option<bool>,
    /// `e(I) - e(M) ≥ λ(R/I) - λ(F/M)`, with equality for closed `M`.
    pub cor36: Option<bool>,
    /// `e(I) - e(M) ≤ λ(R/adj I)`.
    pub cor37: Option<bool>,
    /// The two multiplicity routes agree.
    pub dual_route: Option<bool>,
}

impl Verdicts {
    pub fn named(&self) -> [(&'static str, Option<bool>); 9] {
        [
            ("thm11_lower", self.thm11_lower),
            ("thm11_upper", self.thm11_upper),
            ("thm11_eq1", self.thm11_eq1),
            ("thm11_eq2", self.thm11_eq2),
            ("prop31", self.prop31),
            ("prop32", self.prop32),
            ("cor36", self.cor36),
            ("cor37", self.cor37),
            ("dual_route", self.dual_route),
        ]
    }

    pub fn violations(&self) -> Vec<&'static str> {
        self.named().into_iter().filter(|(_, v)| *v == Some(false)).map(|(n, _)| n).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub r: usize,
    pub n: usize,
    pub mu: usize,
    #[serde(rename = "ord_I")]
    pub ord_i: usize,
    #[serde(rename = "len_F_M")]
    pub len_f_m: usize,
    #[serde(rename = "len_R_I")]
    pub len_r_i: usize,
    #[serde(rename = "e_M")]
    pub e_m: usize,
    #[serde(rename = "e_M_limit")]
    pub e_m_limit: Option<usize>,
    #[serde(rename = "e_I")]
    pub e_i: usize,
    #[serde(rename = "len_R_adj")]
    pub len_r_adj: Option<usize>,
    pub adj_tier: AdjTier,
    #[serde(rename = "len_R_fitt_r1")]
    pub len_r_fitt_r1: Option<usize>,
    #[serde(rename = "len_R_I_r_minus_1")]
    pub len_r_i_r_minus_1: usize,
    pub ic_status: String,
    /// Whether `I(M)` is integrally closed, when decidable.
    #[serde(rename = "I_closed")]
    pub i_closed: Option<bool>,
    pub contracted: bool,
    pub verdicts: Verdicts,
    /// Reasons for fields or verdicts left empty.
    #[serde(default)]
    pub notes: BTreeMap<String, String>,
}

impl InvariantReport {
    /// Recompute every verdict from the numeric fields.
    pub fn derive_verdicts(&self) -> Verdicts {
        let (em, ei, lfm, lri) = (self.e_m as i64, self.e_i as i64, self.len_f_m as i64, self.len_r_i as i64);
        let adj = self.len_r_adj.map(|a| a as i64);
        let closed = match self.ic_status.as_str() {
            "certified" => Some(true),
            "witness_not_closed" => Some(false),
            _ => None,
        };
        let eq36 = ei - em == lri - lfm;
        Verdicts {
            thm11_lower: adj.map(|a| ei - a <= em),
            thm11_upper: adj.map(|a| em <= lfm + a),
            thm11_eq1: adj.zip(closed).map(|(a, c)| (em == lfm + a) == c),
            thm11_eq2: adj.zip(self.i_closed).map(|(a, c)| (em == ei - a) == (c && lri == em)),
            prop31: self.len_r_fitt_r1.map(|f| em - lfm >= f as i64),
            prop32: Some(ei - em >= self.len_r_i_r_minus_1 as i64),
            cor36: Some(ei - em >= lri - lfm && (closed != Some(true) || eq36)),
            cor37: adj.map(|a| ei - em <= a),
            dual_route: self.e_m_limit.map(|l| l == self.e_m),
        }
    }

    /// `e(I) - e(M) = λ(R/I) - λ(F/M)`.
    pub fn length_multiplicity_identity(&self) -> bool {
        self.e_i + self.len_f_m == self.e_m + self.len_r_i
    }

    pub fn replays(&self) -> bool {
        self.derive_verdicts() == self.verdicts
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReportOptions {
    pub seed: u64,
    /// Also compute `e(M)` from symmetric powers up to this exponent.
    pub limit_pmax: Option<usize>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { seed: 1, limit_pmax: None }
    }
}

/// Full invariant report for `M`.
pub fn report<F: Field>(m: &Module<F>, opts: ReportOptions, s: &Session) -> Result<InvariantReport> {
    let mut notes = BTreeMap::new();
    let seed = opts.seed;
    let d = m.cert_degree(s)?;
    let m = m.clone().with_hint(d);
    let r = m.rank();
    let ideal = m.ideal()?;
    let len_f_m = m.colength(s)?;
    let len_r_i = ideal.colength(s)?.value;
    let e_i = ideal.hs_multiplicity(seed, s)?;
    let (core, _) = m.split_free();
    let core = core.minimalized(s)?;
    let e_m = br_multiplicity(&core, seed, s)?;
    let e_m_limit = match opts.limit_pmax {
        Some(p) => match br_limit_multiplicity(&m, p, s) {
            Ok(v) => Some(v),
            Err(e) => {
                notes.insert("e_M_limit".into(), e.to_string());
                None
            }
        },
        None => None,
    };
    let ic = is_integrally_closed(&m, seed, s)?;
    let staircase = ideal.simplified().to_staircase();
    let i_closed = match &staircase {
        Some(st) => Some(st.is_integrally_closed()?),
        None => {
            notes.insert("I_closed".into(), "I(M) is not monomial".into());
            None
        }
    };
    let (len_r_adj, adj_tier) = match &staircase {
        Some(st) => (Some(st.polyhedral_adjoint()?.colength()?), AdjTier::Polyhedral),
        None if ic == IcStatus::Certified => match adjoint_of_module(&m, seed, s) {
            Ok(a) => (Some(a.a_form.colength(s)?.value), AdjTier::Presentation),
            Err(e) => {
                notes.insert("len_R_adj".into(), e.to_string());
                (None, AdjTier::Unavailable)
            }
        },
        None => {
            notes.insert("len_R_adj".into(), "I(M) neither monomial nor certified integrally closed".into());
            (None, AdjTier::Unavailable)
        }
    };
    let len_r_fitt_r1 = match fitt_r1(&core, s).and_then(|f| f.with_hint(e_m).colength(s)) {
        Ok(c) => Some(c.value),
        Err(e) => {
            notes.insert("len_R_fitt_r1".into(), e.to_string());
            None
        }
    };
    let len_r_i_r_minus_1 = m.fitting_ideal(r - 1)?.with_hint((r - 1) * d).colength(s)?.value;
    let mut rep = InvariantReport {
        r,
        n: m.num_gens(),
        mu: m.min_gens(s)?,
        ord_i: ideal.order() as usize,
        len_f_m,
        len_r_i,
        e_m,
        e_m_limit,
        e_i,
        len_r_adj,
        adj_tier,
        len_r_fitt_r1,
        len_r_i_r_minus_1,
        ic_status: ic.label().to_string(),
        i_closed,
        contracted: m.is_contracted(s)?,
        verdicts: Verdicts::default(),
        notes,
    };
    rep.verdicts = rep.derive_verdicts();
    Ok(rep)
}

impl InvariantReport {
    pub fn to_text(&self) -> String {
        let opt = |v: Option<usize>| v.map_or("n/a".to_string(), |x| x.to_string());
        let mut out = format!(
            "r = {}  n = {}  mu = {}  ord(I) = {}\n\
             len(F/M) = {}  len(R/I) = {}\n\
             e(M) = {}  e(M) via powers = {}  e(I) = {}\n\
             len(R/adj I) = {} ({:?})  len(R/Fitt_r+1) = {}  len(R/I_r-1) = {}\n\
             integrally closed: {}  I closed: {}  contracted: {}\n",
            self.r,
            self.n,
            self.mu,
            self.ord_i,
            self.len_f_m,
            self.len_r_i,
            self.e_m,
            opt(self.e_m_limit),
            self.e_i,
            opt(self.len_r_adj),
            self.adj_tier,
            opt(self.len_r_fitt_r1),
            self.len_r_i_r_minus_1,
            self.ic_status,
            self.i_closed.map_or("unknown".into(), |b| b.to_string()),
            self.contracted,
        );
        for (name, v) in self.verdicts.named() {
            let v = match v {
                Some(true) => "pass",
                Some(false) => "FAIL",
                None => "skipped",
            };
            out.push_str(&format!("  {name:<12} {v}\n"));
        }
        for (k, v) in &self.notes {
            out.push_str(&format!("  note {k}: {v}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::Gf;
    use crate::ideals::Ideal;

    #[test]
    fn running_example_report() {
        let s = Session::default();
        let m = Module::<Gf>::family_mabc(2, 4, 3).unwrap();
        let rep = report(&m, ReportOptions::default(), &s).unwrap();
        assert_eq!((rep.e_i, rep.len_r_i, rep.e_m, rep.len_f_m), (36, 31, 32, 29));
        assert_eq!(rep.len_r_fitt_r1, Some(3));
        assert_eq!(rep.ic_status, "witness_not_closed");
        assert_eq!(rep.verdicts.thm11_eq1, Some(true));
        assert!(!rep.length_multiplicity_identity());
        assert!(rep.verdicts.violations().is_empty());
    }

    #[test]
    fn sum_of_maximal_ideals() {
        let s = Session::default();
        let mm = Module::from_ideal(&Ideal::<Gf>::maximal());
        let rep = report(&mm.direct_sum(&mm), ReportOptions { seed: 3, limit_pmax: Some(6) }, &s).unwrap();
        assert_eq!((rep.e_m, rep.len_f_m, rep.len_r_adj), (3, 2, Some(1)));
        assert_eq!(rep.e_m_limit, Some(3));
        assert_eq!(rep.ic_status, "certified");
        assert!(rep.verdicts.violations().is_empty());
    }

    #[test]
    fn json_roundtrip_replays() {
        let s = Session::default();
        let m = Module::<Gf>::family_mabc(1, 2, 1).unwrap();
        let rep = report(&m, ReportOptions::default(), &s).unwrap();
        assert!(rep.length_multiplicity_identity());
        let text = serde_json::to_string(&rep).unwrap();
        assert!(text.contains("\"e_M\":") && text.contains("\"len_F_M\":"));
        let back: InvariantReport = serde_json::from_str(&text).unwrap();
        assert!(back.replays());
        let mut tampered = back.clone();
        tampered.e_m += 100;
        assert!(!tampered.replays());
    }
}
