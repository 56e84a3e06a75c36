//! Assembly of `H_i^vc(A_n; K_q(R[-]))` from the Mayer–Vietoris sequence of the
//! Lück–Weiermann push-out
//!
//! ```text
//! ⊕_[H] H_i^Fin(Comm[H]) --g₂ⁱ--> (⊕_[H] H_i^F[H](Comm[H])) ⊕ H_i^Fin(A_n) --> H_i^vc(A_n) --> ...
//! ```
//!
//! The terms are computed by universal coefficients ([`uct`]) and by tree
//! Mayer–Vietoris over the stock models of [`crate::artin`]. The maps `g₂ⁱ` are
//! only partly determined; every result here depends on the determined part alone.
//! A sum over the classes of a catalog becomes [`GroupValue::countable_sum`] with the
//! catalog multiplicity.

mod gmap;
mod report;

pub use gmap::{g_map_model, ClassComponent, ComponentColumn, G21Part, GMap, GMapModel};
pub use report::{
    parse_records, render_latex, render_records, render_text, Cell, CellValue, HomologyReport,
    Layout,
};

use crate::abelian::{
    ker_coker_with_symbolic, AbelianGroup, ExtNat, GroupValue, IntMatrix,
};
use crate::artin::{
    ordinary_homology, ordinary_homology_z2, tree_model, ArtinParameters, ClassCatalog,
    ClassKind, CommensuratorShape, TreeModel, EVEN_QUOTIENT_NOTE,
};
use crate::bhs::{big_c, big_c_bar, ind_kernel, k_of_laurent, n_q_class_term};
use crate::error::EngineError;
use crate::ktheory::KTheoryProfile;

/// Highest degree with a possibly nonzero value.
pub const TOP_DEGREE: usize = 3;

/// Relative sign of the two components of `g₂₁¹` on the center class for even `n`.
/// Only the coefficient `c_H` of the coupling functional depends on it: `α + β`
/// for `Plus`, `α - β` for `Minus`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CenterSign {
    #[default]
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EngineConfig {
    pub center_sign: CenterSign,
}

/// A computed group with the formulas used to get it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derived {
    pub value: GroupValue,
    pub trail: Vec<String>,
    pub warnings: Vec<String>,
}

impl Derived {
    fn new(value: GroupValue, trail: &[&str]) -> Self {
        Derived {
            value,
            trail: trail.iter().map(|s| s.to_string()).collect(),
            warnings: Vec::new(),
        }
    }

    fn warn(mut self, w: impl Into<String>) -> Self {
        self.warnings.push(w.into());
        self
    }
}

/// `M ⊗ K` for a value `K`: kernel and cokernel on each bound.
///
/// Kernels are monotone in `K`. Cokernels are not, so a bounded coefficient with
/// bounds whose cokernels do not nest is refused.
pub fn apply_matrix(m: &IntMatrix, k: &GroupValue) -> Result<(GroupValue, GroupValue), EngineError> {
    let (ker_lo, coker_lo) = ker_coker_with_symbolic(m, k.lower())?;
    if k.is_exact() {
        return Ok((ker_lo.into(), coker_lo.into()));
    }
    let (ker_hi, coker_hi) = ker_coker_with_symbolic(m, k.upper())?;
    let ker = GroupValue::bounded(ker_lo, ker_hi)?;
    let coker = GroupValue::bounded(coker_lo, coker_hi).map_err(|_| {
        EngineError::Hypothesis(format!(
            "cokernel of {m:?} on the indeterminate coefficient {k} is not bounded"
        ))
    })?;
    Ok((ker, coker))
}

/// `H_i ⊗ M ⊕ Tor(H_{i-1}, M)`. `h` lists `H_0, H_1, ...`; missing degrees are 0.
pub fn uct(h: &[AbelianGroup], m: &GroupValue, i: usize) -> Result<GroupValue, EngineError> {
    let zero = AbelianGroup::zero();
    let hi = h.get(i).unwrap_or(&zero);
    let hprev = if i == 0 { &zero } else { h.get(i - 1).unwrap_or(&zero) };
    let at = |k: &AbelianGroup| -> Result<AbelianGroup, EngineError> {
        Ok(hi.tensor(k)?.direct_sum(&hprev.tor(k)))
    };
    let lo = at(m.lower())?;
    if m.is_exact() {
        return Ok(lo.into());
    }
    let hi_bound = at(m.upper())?;
    GroupValue::bounded(lo, hi_bound).map_err(|_| {
        EngineError::Hypothesis(format!("universal coefficients on the indeterminate {m}"))
    })
}

/// `(H_0, H_1)` of a tree model with a common coefficient `coeff` on every orbit and
/// boundary `vertices × edges`: `H_1 = ker`, `H_0 = coker`.
pub fn tree_mayer_vietoris(
    model: &TreeModel,
    coeff: &GroupValue,
    boundary: &IntMatrix,
) -> Result<(GroupValue, GroupValue), EngineError> {
    if boundary.rows() != model.vertex_orbits.len() || boundary.cols() != model.edge_orbits.len() {
        return Err(EngineError::DimensionMismatch(format!(
            "boundary is {}x{}, model `{}` has {} vertex and {} edge orbits",
            boundary.rows(),
            boundary.cols(),
            model.name,
            model.vertex_orbits.len(),
            model.edge_orbits.len()
        )));
    }
    let (h1, h0) = apply_matrix(boundary, coeff)?;
    Ok((h0, h1))
}

/// `(H_0, H_1)^F[H](Comm[H]; K_q(R[-]))` computed directly on the tree model, one
/// Bass–Heller–Swan summand at a time: the identity on `K_q(R)`, multiplication by
/// the index on `K_{q-1}(R)`, and an undetermined map on the Nil-terms.
pub fn h_fh_tree(
    profile: &KTheoryProfile,
    q: i64,
    params: &ArtinParameters,
    kind: ClassKind,
) -> Result<(GroupValue, GroupValue), EngineError> {
    let model = tree_model(params, kind);
    let d = k_of_laurent(profile, q)?;
    let (h0_k, h1_k) = tree_mayer_vietoris(&model, &d.kq, &model.boundary_matrix(|_| 1))?;
    let (h0_l, h1_l) =
        tree_mayer_vietoris(&model, &d.kq_minus_1, &model.boundary_matrix(|i| i as i128))?;
    let (h0_n, h1_n) = if model.edge_orbits.iter().all(|e| e.is_degenerate_loop()) {
        tree_mayer_vietoris(&model, &d.nil_pair, &model.boundary_matrix(|_| 0))?
    } else {
        let v = ExtNat::Fin(model.vertex_orbits.len() as u64);
        let e = ExtNat::Fin(model.edge_orbits.len() as u64);
        (
            GroupValue::at_most(d.nil_pair.upper().scale(v)),
            GroupValue::at_most(d.nil_pair.upper().scale(e)),
        )
    };
    Ok((
        h0_k.direct_sum(&h0_l).direct_sum(&h0_n),
        h1_k.direct_sum(&h1_l).direct_sum(&h1_n),
    ))
}

/// `H_i^Fin(A_n; K_q(R[-])) = H_i(A_n; K_q(R))`.
pub fn h_fin_an(
    profile: &KTheoryProfile,
    q: i64,
    params: &ArtinParameters,
    i: usize,
) -> Result<GroupValue, EngineError> {
    let h: Vec<AbelianGroup> = (0..=TOP_DEGREE).map(|j| ordinary_homology(params, j)).collect();
    uct(&h, &profile.get_k(q)?, i)
}

/// `H_i^Fin(Comm[H]; K_q(R[-]))`.
pub fn h_fin_comm(
    profile: &KTheoryProfile,
    q: i64,
    shape: CommensuratorShape,
    params: &ArtinParameters,
    i: usize,
) -> Result<GroupValue, EngineError> {
    match shape {
        CommensuratorShape::WholeGroup => h_fin_an(profile, q, params, i),
        CommensuratorShape::Z2 => {
            let h: Vec<AbelianGroup> = (0..=TOP_DEGREE).map(ordinary_homology_z2).collect();
            uct(&h, &profile.get_k(q)?, i)
        }
    }
}

/// `H_i^F[H](Comm[H]; K_q(R[-]))` by the closed forms.
pub fn h_fh(
    profile: &KTheoryProfile,
    q: i64,
    params: &ArtinParameters,
    kind: ClassKind,
    i: usize,
) -> Result<GroupValue, EngineError> {
    if i >= 2 {
        return Ok(GroupValue::zero());
    }
    match (kind, params.is_odd(), i) {
        (ClassKind::Center, true, 0) => big_c(profile, q, params.n()),
        (ClassKind::Center, true, _) => Ok(ind_kernel(profile, q, params.n())?.total()),
        _ => Ok(k_of_laurent(profile, q)?.total),
    }
}

fn require_center(catalog: &ClassCatalog) -> Result<(), EngineError> {
    if catalog.includes_center() {
        Ok(())
    } else {
        Err(EngineError::CenterRequired)
    }
}

fn pred(m: ExtNat) -> ExtNat {
    match m {
        ExtNat::Fin(k) => ExtNat::Fin(k.saturating_sub(1)),
        ExtNat::Omega => ExtNat::Omega,
    }
}

/// Coefficient of a non-center class in the coupling functional, even `n`.
pub fn coupling_coefficient(ab: &[i64], config: &EngineConfig) -> i64 {
    match (ab, config.center_sign) {
        ([a, b], CenterSign::Plus) => a + b,
        ([a, b], CenterSign::Minus) => a - b,
        _ => ab.iter().sum(),
    }
}

/// Kernel and cokernel of `u ↦ Σ c_H u_H` on `⊕_[H]≠[Z] K`, even `n`.
///
/// Equal coefficients repeated `m` times contribute one column plus `m - 1` free
/// copies of `K`, so `ω` entries need no truncation.
pub fn coupling_functional(
    k: &GroupValue,
    catalog: &ClassCatalog,
    config: &EngineConfig,
) -> Result<(GroupValue, GroupValue), EngineError> {
    let coeffs: Vec<i128> = catalog
        .entries()
        .iter()
        .map(|e| coupling_coefficient(&e.ab_vector, config) as i128)
        .collect();
    let m = IntMatrix::from_rows(&[coeffs]);
    let m = if catalog.entries().is_empty() {
        IntMatrix::zeros(1, 0)
    } else {
        m
    };
    let (mut ker, coker) = apply_matrix(&m, k)?;
    for e in catalog.entries() {
        ker = ker.direct_sum(&k.countable_sum(pred(e.multiplicity)));
    }
    Ok((ker, coker))
}

/// `ker g₂²`.
pub fn ker_g2_2(
    profile: &KTheoryProfile,
    q: i64,
    params: &ArtinParameters,
    catalog: &ClassCatalog,
) -> Result<Derived, EngineError> {
    require_center(catalog)?;
    let kappa = catalog.non_center_multiplicity();
    let value = profile.get_k(q)?.countable_sum(kappa);
    Ok(if params.is_odd() {
        Derived::new(value, &["ker g2^2 = whole domain, codomain is 0", "sum_{[H]!=[Z]} K_q"])
    } else {
        Derived::new(
            value,
            &["ker g2^2 by splitting: center component is the identity", "sum_{[H]!=[Z]} K_q"],
        )
    })
}

/// `ker g₂¹`.
pub fn ker_g2_1(
    profile: &KTheoryProfile,
    q: i64,
    params: &ArtinParameters,
    catalog: &ClassCatalog,
    config: &EngineConfig,
) -> Result<Derived, EngineError> {
    require_center(catalog)?;
    let k = profile.get_k(q)?;
    if params.is_odd() {
        let value = k.countable_sum(catalog.non_center_multiplicity());
        return Ok(Derived::new(
            value,
            &[
                "ker g2^1: BHS inclusions split, center absorbs the H_1 constraint",
                "sum_{[H]!=[Z]} K_q",
            ],
        ));
    }
    let (ker, _) = coupling_functional(&k, catalog, config)?;
    let d = Derived::new(
        ker,
        &["ker g2^1: kernel of u -> sum c_H u_H on sum_{[H]!=[Z]} K_q"],
    );
    Ok(if d.value.is_exact() {
        d
    } else {
        d.warn("ker g2^1 left as a bound")
    })
}

/// `coker g₂¹ = H_1^vc`.
pub fn coker_g2_1(
    profile: &KTheoryProfile,
    q: i64,
    params: &ArtinParameters,
    catalog: &ClassCatalog,
    config: &EngineConfig,
) -> Result<Derived, EngineError> {
    require_center(catalog)?;
    let kappa = catalog.non_center_multiplicity();
    let nq = n_q_class_term(profile, q)?;
    if params.is_odd() {
        let t = ind_kernel(profile, q, params.n())?;
        let value = nq.countable_sum(kappa).direct_sum(&t.total());
        let mut d = Derived::new(
            value,
            &["coker g2^1 = sum_{[H]!=[Z]} N_q + T_1 + T_2", "N_q = K_{q-1} + NK_q^2"],
        );
        if !t.t1.lower().is_zero() || !t.t1.upper().is_zero() {
            d = d.warn(format!(
                "T_1 = {} is the n-torsion of K_{{q-1}}; on the tree model the K_{{q-1}} part of H_1 is \
                 ker([2; n]) = 0 for odd n, so this summand is kept only by the closed form",
                t.t1
            ));
        }
        return Ok(d);
    }
    let (_, coker) = coupling_functional(&profile.get_k(q)?, catalog, config)?;
    let value = nq.countable_sum(kappa + ExtNat::ONE).direct_sum(&coker);
    Ok(Derived::new(
        value,
        &["coker g2^1 = sum_{[H]} N_q + coker(u -> sum c_H u_H)", "N_q = K_{q-1} + NK_q^2"],
    ))
}

/// `coker g₂⁰ = H_0^vc`.
pub fn coker_g2_0(
    profile: &KTheoryProfile,
    q: i64,
    params: &ArtinParameters,
    catalog: &ClassCatalog,
) -> Result<Derived, EngineError> {
    require_center(catalog)?;
    let kappa = catalog.non_center_multiplicity();
    let nq = n_q_class_term(profile, q)?;
    let k = profile.get_k(q)?;
    if params.is_odd() {
        let c_bar = big_c_bar(profile, q, params.n())?;
        let value = nq.countable_sum(kappa).direct_sum(&k).direct_sum(&c_bar);
        return Ok(Derived::new(
            value,
            &["coker g2^0 = sum_{[H]!=[Z]} N_q + K_q + Cbar(K_q)", "N_q = K_{q-1} + NK_q^2"],
        ));
    }
    let value = nq.countable_sum(kappa + ExtNat::ONE).direct_sum(&k);
    Ok(Derived::new(
        value,
        &["coker g2^0 = sum_{[H]} N_q + K_q", "N_q = K_{q-1} + NK_q^2"],
    ))
}

/// Notes that apply to every report for these parameters.
pub fn parameter_warnings(params: &ArtinParameters) -> Vec<String> {
    let mut w = Vec::new();
    if params.is_degenerate() {
        w.push("n = 2: A_2 = Z^2 is abelian; the structural results assume n > 2".to_string());
    }
    if !params.is_odd() {
        w.push(EVEN_QUOTIENT_NOTE.to_string());
        w.push(
            "even n: the class catalog and the sign of the center component of g2^1 are \
             assumptions; only the coupling coefficients c_H depend on them"
                .to_string(),
        );
    }
    w
}

/// `H_i^vc(A_n; K_q(R[-]))` for `i = 0..=3`.
pub fn bredon_vc(
    profile: &KTheoryProfile,
    q: i64,
    params: &ArtinParameters,
    catalog: &ClassCatalog,
    config: &EngineConfig,
) -> Result<[Derived; 4], EngineError> {
    let cell = |i: usize, r: Result<Derived, EngineError>| {
        r.map_err(|e| EngineError::Cell {
            i,
            q,
            source: Box::new(e),
        })
    };
    let h3 = cell(3, ker_g2_2(profile, q, params, catalog))?;
    let h2 = cell(2, ker_g2_1(profile, q, params, catalog, config))?;
    let h1 = cell(1, coker_g2_1(profile, q, params, catalog, config))?;
    let h0 = cell(0, coker_g2_0(profile, q, params, catalog))?;
    let mut out = [h0, h1, h2, h3];
    for (i, d) in out.iter_mut().enumerate() {
        let label = match i {
            3 => "H_3 = ker g2^2",
            2 => "H_2 = ker g2^1",
            1 => "H_1 = coker g2^1",
            _ => "H_0 = coker g2^0",
        };
        d.trail.insert(0, label.to_string());
        if !d.value.is_exact() {
            let w = format!("H_{i} at q = {q} is only bounded: {}", d.value);
            d.warnings.push(w);
        }
    }
    Ok(out)
}

/// The E₂ page `E²_{p,q} = H_p^vc(A_n; K_q(R[-]))` for `q_min..=q_max`. Cells that
/// cannot be computed carry their error.
pub fn e2_page(
    profile: &KTheoryProfile,
    params: &ArtinParameters,
    (q_min, q_max): (i64, i64),
    catalog: &ClassCatalog,
    config: &EngineConfig,
) -> HomologyReport {
    let mut report = HomologyReport::new(Layout::E2Page, profile.name(), params.n());
    for w in parameter_warnings(params) {
        report.add_warning(w);
    }
    for q in q_min..=q_max {
        match bredon_vc(profile, q, params, catalog, config) {
            Ok(cells) => {
                for (p, d) in cells.into_iter().enumerate() {
                    for w in &d.warnings {
                        report.add_warning(w.clone());
                    }
                    report.insert(Cell {
                        p,
                        q,
                        value: CellValue::Group(d.value),
                        trail: d.trail,
                    });
                }
            }
            Err(e) => {
                let (bad, source) = match e {
                    EngineError::Cell { i, source, .. } => (Some(i), source.to_string()),
                    other => (None, other.to_string()),
                };
                for p in 0..=TOP_DEGREE {
                    let msg = match bad {
                        Some(i) if i != p => format!("row incomplete: H_{i} failed"),
                        _ => source.clone(),
                    };
                    report.insert(Cell {
                        p,
                        q,
                        value: CellValue::Error(msg),
                        trail: Vec::new(),
                    });
                }
            }
        }
    }
    report
}

/// One row of the table, as a report.
pub fn compute(
    profile: &KTheoryProfile,
    params: &ArtinParameters,
    (q_min, q_max): (i64, i64),
    catalog: &ClassCatalog,
    config: &EngineConfig,
) -> HomologyReport {
    let mut r = e2_page(profile, params, (q_min, q_max), catalog, config);
    r.layout = Layout::Table;
    r
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K0Check {
    pub holds: bool,
    /// `E²_{0,0} = H_0^vc(A_n; K_0(R[-]))`.
    pub corner: GroupValue,
    pub report: HomologyReport,
    pub failures: Vec<String>,
}

/// For a regular ring and `n > 2`: `H_0^vc(A_n; K_0(R[-])) = K_0(R)` and every row
/// with `q < 0` vanishes, so `K_0(R[A_n]) = K_0(R)`.
pub fn k0_corollary_check(
    profile: &KTheoryProfile,
    params: &ArtinParameters,
    catalog: &ClassCatalog,
) -> Result<K0Check, EngineError> {
    if !profile.is_regular() {
        return Err(EngineError::Hypothesis(format!(
            "{} is not regular",
            profile.name()
        )));
    }
    if params.n() <= 2 {
        return Err(EngineError::Hypothesis("n must exceed 2".into()));
    }
    let config = EngineConfig::default();
    let q_lo = profile.q_range().0.min(-3);
    let report = e2_page(profile, params, (q_lo, 0), catalog, &config);
    let mut failures = Vec::new();
    let k0 = profile.get_k(0)?;
    let corner = report.value(0, 0).unwrap_or_else(GroupValue::zero);
    match report.cell(0, 0).map(|c| &c.value) {
        Some(CellValue::Group(v)) if *v == k0 => {}
        Some(CellValue::Group(v)) => failures.push(format!("corner {v} differs from K_0 = {k0}")),
        _ => failures.push("corner not computed".into()),
    }
    for q in q_lo..0 {
        for p in 0..=TOP_DEGREE {
            match report.cell(p, q).map(|c| &c.value) {
                Some(CellValue::Group(v)) if v.is_zero() => {}
                other => failures.push(format!("E2[{p},{q}] is not zero: {other:?}")),
            }
        }
    }
    for q in q_lo..=0 {
        for p in TOP_DEGREE + 1..TOP_DEGREE + 4 {
            if !report.value(p, q).is_some_and(|v| v.is_zero()) {
                failures.push(format!("E2[{p},{q}] outside columns 0..3"));
            }
        }
    }
    Ok(K0Check {
        holds: failures.is_empty(),
        corner,
        report,
        failures,
    })
}
