//! Desk-checkable evidence for each regime of the representation tables:
//! three regimes of `q` for `U_q(sl2)` and two regimes of `e^hbar` for the
//! h-adic algebra.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pbw::{PbwElement, Uq};
use crate::numerics::{conjugation_growth, root_unity_center_check};
use crate::repkit::{
    build_rep_hbar, build_rep_q, build_rep_q_in, check_relations, commutant_dim, decompose, envelope_eval, random_invertible,
    ModuleRep, RepLabelHbar, RepLabelQ,
};
use crate::scalars::{check_q_admissible, Field, NumericScalar};
use crate::verma::{build_verma, invariant_scan, norm_growth, unit_circle_entry_bound, SCAN_TOLERANCE};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditConfig {
    /// Sample with `|q| != 1`.
    pub q_off_circle: NumericScalar,
    /// Sample with `|q| = 1`, not a root of unity.
    pub q_unit: NumericScalar,
    /// Order of the root of unity sample `exp(2 pi i / d)`.
    pub root_order: u32,
    /// Largest `n` for module-level checks.
    pub max_n: u32,
    pub verma_sizes: Vec<usize>,
    pub envelope_pairs: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            q_off_circle: NumericScalar::real(1.1),
            q_unit: NumericScalar::unit(1.0),
            root_order: 5,
            max_n: 4,
            verma_sizes: vec![25, 50, 100, 200],
            envelope_pairs: 10,
            seed: 0,
            tol: 1e-9,
        }
    }
}

impl AuditConfig {
    pub fn validate(&self) -> Result<()> {
        for q in [self.q_off_circle, self.q_unit] {
            check_q_admissible(q, 1e-12).map_err(|e| Error::Config(e.to_string()))?;
        }
        if (self.q_off_circle.norm() - 1.0).abs() < 1e-9 {
            return Err(Error::Config(format!("q = {} must satisfy |q| != 1", self.q_off_circle)));
        }
        if (self.q_unit.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!("q = {} must lie on the unit circle", self.q_unit)));
        }
        if let Some(d) = self.q_unit.root_of_unity_order(1000, 1e-9) {
            return Err(Error::Config(format!("q = {} is a root of unity of order {d}", self.q_unit)));
        }
        if self.root_order < 3 {
            return Err(Error::Config("root order must be at least 3".into()));
        }
        if self.verma_sizes.iter().any(|&n| n < 2) {
            return Err(Error::Config("Verma truncation sizes must be at least 2".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditRow {
    pub table: u8,
    pub regime: String,
    pub checks: Vec<AuditCheck>,
}

impl AuditRow {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub config: AuditConfig,
    pub rows: Vec<AuditRow>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(AuditRow::passed)
    }
}

fn check(name: &str, outcome: Result<(bool, String)>) -> AuditCheck {
    match outcome {
        Ok((passed, detail)) => AuditCheck { name: name.into(), passed, detail },
        Err(e) => AuditCheck { name: name.into(), passed: false, detail: e.to_string() },
    }
}

fn labels_q(max_n: u32) -> Vec<RepLabelQ> {
    (0..=max_n).flat_map(|n| [RepLabelQ { n, eps: 1 }, RepLabelQ { n, eps: -1 }]).collect()
}

fn nilpotency_traces(cfg: &AuditConfig) -> Result<(bool, String)> {
    let q = cfg.q_off_circle;
    let q2 = q.times(&q);
    let mut worst: f64 = 0.0;
    for label in labels_q(cfg.max_n) {
        let r = build_rep_q_in(label, &q)?;
        let kinv = r.k.inverse().ok_or_else(|| Error::Consistency("K is singular".into()))?;
        // K E K^-1 = q^2 E and K^-1 F K = q^2 F
        for (a, c) in [(&r.k, &r.e), (&kinv, &r.f)] {
            let t = conjugation_growth(a, c, q2, label.n + 2)?;
            if !t.all_hold() || t.vanishes_at != Some(label.n + 1) {
                return Ok((false, format!("{label}: inequality or nilpotency index failed")));
            }
            worst = worst.max(t.worst_ratio());
        }
    }
    Ok((true, format!("largest |gamma|^n / (||a|| ||a^-1||) = {worst:.6}")))
}

fn commutants(cfg: &AuditConfig) -> Result<(bool, String)> {
    for label in labels_q(cfg.max_n) {
        let r = build_rep_q_in(label, &cfg.q_off_circle)?;
        let d = commutant_dim(&r, cfg.tol)?;
        if d != 1 {
            return Ok((false, format!("{label}: commutant dimension {d}")));
        }
    }
    Ok((true, format!("commutant dimension 1 for n <= {}", cfg.max_n)))
}

fn random_element(uq: &Uq<NumericScalar>, rng: &mut ChaCha8Rng) -> Result<PbwElement<NumericScalar>> {
    let mut acc = uq.zero();
    for _ in 0..rng.gen_range(1..=3) {
        let m = uq.mono(rng.gen_range(0..3), rng.gen_range(-2..=2), rng.gen_range(0..3));
        let c = NumericScalar::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        acc = acc.add(&m.scale(&c))?;
    }
    Ok(acc)
}

fn envelope_multiplicativity(cfg: &AuditConfig) -> Result<(bool, String)> {
    let uq = Uq::numeric(cfg.q_off_circle, cfg.tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let stage = cfg.max_n.min(3);
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.envelope_pairs {
        let x = random_element(&uq, &mut rng)?;
        let y = random_element(&uq, &mut rng)?;
        let xy = envelope_eval(&x.mul(&y)?, stage)?;
        let bx = envelope_eval(&x, stage)?;
        let by = envelope_eval(&y, stage)?;
        for ((p, a), b) in xy.iter().zip(&bx).zip(&by) {
            let prod = a.matrix.mul(&b.matrix);
            let rel = p.matrix.sub(&prod).max_abs() / prod.max_abs().max(1.0);
            worst = worst.max(rel);
        }
    }
    Ok((worst <= cfg.tol, format!("{} pairs, largest relative defect {worst:e}", cfg.envelope_pairs)))
}

fn verma_boundedness(cfg: &AuditConfig) -> Result<(bool, String)> {
    let lam = NumericScalar::real(1.0);
    let q = cfg.q_unit;
    let bound_e = unit_circle_entry_bound(lam, q);
    let bound_f = 2.0 / (q.value() - 1.0 / q.value()).norm();
    let rows = norm_growth(lam, q, &cfg.verma_sizes)?;
    let ok = rows
        .iter()
        .all(|r| r.norm_e <= bound_e + 1e-9 && r.norm_f <= bound_f + 1e-9 && (r.norm_k - lam.norm()).abs() < 1e-9);
    let last = rows.last().map(|r| format!("N = {}: ||E|| = {:.6}, ||F|| = {:.6}", r.n, r.norm_e, r.norm_f)).unwrap_or_default();
    Ok((ok, format!("{last}; bounds {bound_e:.6} and {bound_f:.6}")))
}

fn verma_scans(cfg: &AuditConfig) -> Result<(bool, String)> {
    let q = cfg.q_unit;
    let generic = invariant_scan(&build_verma(&NumericScalar::real(1.7), &q, 40)?, SCAN_TOLERANCE)?;
    let lam = q.powi(3).expect("nonzero");
    let special = invariant_scan(&build_verma(&lam, &q, 40)?, SCAN_TOLERANCE)?;
    Ok((generic.is_empty() && special == vec![3], format!("lambda = 1.7: {generic:?}; lambda = q^3: {special:?}")))
}

fn center(d: u32) -> Result<(bool, String)> {
    let r = root_unity_center_check(d)?;
    let central: Vec<String> = r.entries.iter().filter(|e| e.central).map(|e| e.element.clone()).collect();
    Ok((r.passed(), format!("d = {d}, s = {}, central: {}", r.s, central.join(", "))))
}

fn hbar_labels(max_n: u32) -> Vec<RepLabelHbar> {
    (0..=max_n)
        .flat_map(|n| (-1..=1).flat_map(move |k| [RepLabelHbar { n, k, eps: 1 }, RepLabelHbar { n, k, eps: -1 }]))
        .collect()
}

fn decompose_round_trips(cfg: &AuditConfig) -> Result<(bool, String)> {
    let labels = hbar_labels(cfg.max_n);
    for &l in &labels {
        if decompose(&build_rep_hbar(l)?)? != vec![l] {
            return Ok((false, format!("{l} did not round-trip")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let parts: Vec<RepLabelHbar> = (0..3).map(|_| labels[rng.gen_range(0..labels.len())]).filter(|l| l.n <= 2).collect();
    let parts = if parts.is_empty() { vec![labels[0]] } else { parts };
    let reps = parts.iter().map(|&l| build_rep_hbar(l)).collect::<Result<Vec<_>>>()?;
    let sum = ModuleRep::direct_sum(&reps.iter().collect::<Vec<_>>())?;
    let p = random_invertible(sum.dim(), &mut rng);
    let mut expected = parts.clone();
    expected.sort();
    let got = decompose(&sum.conjugate(&p)?)?;
    Ok((got == expected, format!("{} labels round-trip; conjugated sum of {} recovered", labels.len(), parts.len())))
}

fn exp_h_consistency(cfg: &AuditConfig) -> Result<(bool, String)> {
    for l in hbar_labels(cfg.max_n) {
        let h = build_rep_hbar(l)?;
        if h.exp_h()? != build_rep_q(RepLabelQ { n: l.n, eps: l.eps })?.k {
            return Ok((false, format!("{l}: exp(hbar H) differs from K")));
        }
        let num = h.specialize(cfg.q_off_circle)?;
        if !check_relations(&num, cfg.tol)?.all_passed() {
            return Ok((false, format!("{l}: relations fail at e^hbar = {}", cfg.q_off_circle)));
        }
    }
    Ok((true, format!("exp(hbar H) = K exactly for n <= {}, |k| <= 1", cfg.max_n)))
}

/// Runs every row; a failing sub-check marks its row failed.
pub fn run_table_audit(cfg: &AuditConfig) -> Result<AuditReport> {
    cfg.validate()?;
    let d = cfg.root_order;
    let rows = vec![
        AuditRow {
            table: 1,
            regime: format!("|q| != 1 (q = {})", cfg.q_off_circle),
            checks: vec![
                check("nilpotency traces", nilpotency_traces(cfg)),
                check("commutant dimension", commutants(cfg)),
                check("envelope multiplicativity", envelope_multiplicativity(cfg)),
            ],
        },
        AuditRow {
            table: 1,
            regime: format!("|q| = 1, not a root of unity (q = {})", cfg.q_unit),
            checks: vec![check("Verma norms bounded", verma_boundedness(cfg)), check("invariant scan", verma_scans(cfg))],
        },
        AuditRow {
            table: 1,
            regime: format!("q a root of unity (d = {d})"),
            checks: vec![check("centrality of powers", center(d))],
        },
        AuditRow {
            table: 2,
            regime: "e^hbar not a root of unity".into(),
            checks: vec![
                check("decomposition round trips", decompose_round_trips(cfg)),
                check("exp(hbar H) consistency", exp_h_consistency(cfg)),
            ],
        },
        AuditRow {
            table: 2,
            regime: format!("e^hbar a root of unity (d = {d})"),
            checks: vec![check("centrality of powers", center(d))],
        },
    ];
    Ok(AuditReport { config: cfg.clone(), rows })
}
