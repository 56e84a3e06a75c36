//! Brute-force checks of the closed forms.
//!
//! [`stability_scan`] builds the explicit integer matrices of `g₂⁰, g₂¹, g₂²` on the
//! first `k` classes of a catalog, computes kernels and cokernels by Smith normal
//! form, and compares them with the engine evaluated on the same finite catalog. It
//! also compares the tree Mayer–Vietoris computation of `H_*^F[H]` with its closed
//! form. [`finite_group_map_check`] verifies the Smith-form kernel and cokernel of
//! `M ⊗ K` against enumeration of the elements of a small finite `K`.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use crate::abelian::{matrix_ker_coker, AbelianGroup, CyclicOrder, ExtNat, GroupValue, IntMatrix};
use crate::artin::{ArtinParameters, CatalogClass, ClassCatalog, ClassKind};
use crate::bhs::{big_c_bar, ind_kernel, n_q_class_term};
use crate::engine::{
    apply_matrix, bredon_vc, g_map_model, h_fh, h_fh_tree, EngineConfig, GMap,
};
use crate::error::EngineError;
use crate::ktheory::KTheoryProfile;

/// The explicit matrices on a truncated catalog.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedMatrices {
    pub classes: Vec<CatalogClass>,
    /// Cyclic summands of `K_q(R)`; every matrix acts on each of them.
    pub cyclic_types: Vec<(CyclicOrder, ExtNat)>,
    pub g20: IntMatrix,
    pub g21: IntMatrix,
    pub g22: IntMatrix,
    pub notes: Vec<String>,
}

pub fn truncated_g_matrices(
    profile: &KTheoryProfile,
    q: i64,
    params: &ArtinParameters,
    catalog: &ClassCatalog,
    k: usize,
    config: &EngineConfig,
) -> Result<TruncatedMatrices, EngineError> {
    let classes = catalog.truncate(k);
    let m = |which| g_map_model(which, params, &classes, config).map(|g| g.matrix());
    let kq = profile.get_k(q)?;
    let mut notes = vec!["Nil blocks are not modelled".to_string()];
    if kq.lower().has_symbolic() || kq.upper().has_symbolic() {
        notes.push("symbolic free rank in K_q is not modelled".to_string());
    }
    Ok(TruncatedMatrices {
        cyclic_types: kq.lower().factors().collect(),
        g20: m(GMap::G20)?,
        g21: m(GMap::G21)?,
        g22: m(GMap::G22)?,
        classes,
        notes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Matches,
    Mismatch {
        k: usize,
        oracle: String,
        closed_form: String,
    },
    Skipped(String),
}

impl Verdict {
    pub fn is_match(&self) -> bool {
        matches!(self, Verdict::Matches)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellScan {
    pub cell: &'static str,
    /// `(k, oracle, closed form)`.
    pub per_k: Vec<(usize, GroupValue, GroupValue)>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub ring: String,
    pub n: u64,
    pub q: i64,
    pub cells: Vec<CellScan>,
}

impl ScanReport {
    pub fn all_match(&self) -> bool {
        self.cells.iter().all(|c| c.verdict.is_match())
    }

    /// Records: `#ring`, `#n`, `#q` metadata, then `cell k oracle closed match|mismatch`
    /// per `k`, and a closing `cell * verdict detail` line per cell. Tab-separated.
    pub fn to_records(&self) -> String {
        let mut out = String::new();
        writeln!(out, "#ring\t{}", self.ring).unwrap();
        writeln!(out, "#n\t{}", self.n).unwrap();
        writeln!(out, "#q\t{}", self.q).unwrap();
        for c in &self.cells {
            for (k, o, f) in &c.per_k {
                let flag = if o == f { "match" } else { "mismatch" };
                writeln!(out, "{}\t{k}\t{o}\t{f}\t{flag}", c.cell).unwrap();
            }
            let (v, detail) = match &c.verdict {
                Verdict::Matches => ("matches".to_string(), String::new()),
                Verdict::Mismatch { k, .. } => ("mismatch".to_string(), format!("first at k = {k}")),
                Verdict::Skipped(why) => ("skipped".to_string(), why.clone()),
            };
            writeln!(out, "{}\t*\t{v}\t{detail}", c.cell).unwrap();
        }
        out
    }

    /// One line per cell.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "oracle: {} n = {} q = {}", self.ring, self.n, self.q).unwrap();
        let width = self.cells.iter().map(|c| c.cell.len()).max().unwrap_or(0);
        for c in &self.cells {
            let ks = match (c.per_k.first(), c.per_k.last()) {
                _ if c.cell.starts_with("tree") => "tree model".to_string(),
                (Some(a), Some(b)) => format!("k = {}..{}", a.0, b.0),
                _ => String::new(),
            };
            let line = match &c.verdict {
                Verdict::Matches => format!("stable, matches ({ks})"),
                Verdict::Mismatch {
                    k,
                    oracle,
                    closed_form,
                } => format!("MISMATCH at k = {k}: oracle {oracle}, closed form {closed_form}"),
                Verdict::Skipped(why) => format!("skipped: {why}"),
            };
            writeln!(out, "{:<width$}  {line}", c.cell).unwrap();
        }
        out
    }
}

/// Oracle values for one truncation, in the order of [`CELLS`].
fn oracle_values(
    profile: &KTheoryProfile,
    q: i64,
    params: &ArtinParameters,
    t: &TruncatedMatrices,
) -> Result<Vec<GroupValue>, EngineError> {
    let kq = profile.get_k(q)?;
    let (ker22, _) = apply_matrix(&t.g22, &kq)?;
    let (ker21, coker21) = apply_matrix(&t.g21, &kq)?;
    let (ker20, coker20) = apply_matrix(&t.g20, &kq)?;
    let nq = n_q_class_term(profile, q)?;
    let mut h1 = coker21;
    let mut h0 = coker20;
    for c in &t.classes {
        match (c.center, params.is_odd()) {
            (true, true) => {
                h1 = h1.direct_sum(&ind_kernel(profile, q, params.n())?.total());
                h0 = h0.direct_sum(&big_c_bar(profile, q, params.n())?);
            }
            _ => {
                h1 = h1.direct_sum(&nq);
                h0 = h0.direct_sum(&nq);
            }
        }
    }
    Ok(vec![ker22, ker21, h1, h0, ker20])
}

const CELLS: [&str; 5] = [
    "H_3 = ker g2^2",
    "H_2 = ker g2^1",
    "H_1 = coker g2^1",
    "H_0 = coker g2^0",
    "ker g2^0 = 0",
];

/// Closed form restricted to a truncation: the engine on the finite catalog.
fn closed_values(
    profile: &KTheoryProfile,
    q: i64,
    params: &ArtinParameters,
    classes: &[CatalogClass],
    config: &EngineConfig,
) -> Result<Vec<GroupValue>, EngineError> {
    let cat = ClassCatalog::from_classes(params, classes)?;
    let [h0, h1, h2, h3] = bredon_vc(profile, q, params, &cat, config)?;
    Ok(vec![h3.value, h2.value, h1.value, h0.value, GroupValue::zero()])
}

/// Tree Mayer–Vietoris against the closed forms of `H_*^F[H]`. Values that are only
/// bounded are compared by overlap of the bounds.
fn tree_cells(
    profile: &KTheoryProfile,
    q: i64,
    params: &ArtinParameters,
) -> Result<Vec<(&'static str, GroupValue, GroupValue)>, EngineError> {
    let mut out = Vec::new();
    for (kind, names) in [
        (ClassKind::Center, ["tree center H_0", "tree center H_1"]),
        (ClassKind::NonCenter, ["tree line H_0", "tree line H_1"]),
    ] {
        let (h0, h1) = h_fh_tree(profile, q, params, kind)?;
        out.push((names[0], h0, h_fh(profile, q, params, kind, 0)?));
        out.push((names[1], h1, h_fh(profile, q, params, kind, 1)?));
    }
    Ok(out)
}

fn compatible(a: &GroupValue, b: &GroupValue) -> bool {
    if a.is_exact() && b.is_exact() {
        return a == b;
    }
    a.lower().embeds_into(b.upper()) && b.lower().embeds_into(a.upper())
}

/// Compares oracle and closed forms for every `k` in `k_range`.
pub fn stability_scan(
    profile: &KTheoryProfile,
    q: i64,
    params: &ArtinParameters,
    catalog: &ClassCatalog,
    k_range: RangeInclusive<usize>,
    config: &EngineConfig,
) -> Result<ScanReport, EngineError> {
    let kq = profile.get_k(q)?;
    let skip = if !kq.is_exact() {
        Some("K_q is only bounded".to_string())
    } else if kq.lower().has_symbolic() {
        Some("K_q has a symbolic free rank".to_string())
    } else {
        None
    };
    let mut cells: Vec<CellScan> = CELLS
        .iter()
        .map(|c| CellScan {
            cell: c,
            per_k: Vec::new(),
            verdict: Verdict::Matches,
        })
        .collect();
    if let Some(why) = skip {
        for c in &mut cells {
            c.verdict = Verdict::Skipped(why.clone());
        }
    } else {
        for k in k_range {
            let t = truncated_g_matrices(profile, q, params, catalog, k, config)?;
            let oracle = oracle_values(profile, q, params, &t)?;
            let closed = closed_values(profile, q, params, &t.classes, config)?;
            for ((cell, o), f) in cells.iter_mut().zip(oracle).zip(closed) {
                if o != f && cell.verdict.is_match() {
                    cell.verdict = Verdict::Mismatch {
                        k,
                        oracle: o.to_string(),
                        closed_form: f.to_string(),
                    };
                }
                cell.per_k.push((k, o, f));
            }
        }
    }
    for (name, tree, closed) in tree_cells(profile, q, params)? {
        let verdict = if compatible(&tree, &closed) {
            Verdict::Matches
        } else {
            Verdict::Mismatch {
                k: 0,
                oracle: tree.to_string(),
                closed_form: closed.to_string(),
            }
        };
        cells.push(CellScan {
            cell: name,
            per_k: vec![(0, tree, closed)],
            verdict,
        });
    }
    Ok(ScanReport {
        ring: profile.name().to_string(),
        n: params.n(),
        q,
        cells,
    })
}

/// Largest `|K|^max(rows, cols)` that [`finite_group_map_check`] enumerates.
pub const ENUMERATION_LIMIT: u64 = 1 << 20;

/// A finite abelian group as a product of cyclic groups, for enumeration.
struct Finite {
    moduli: Vec<u64>,
    order: u64,
}

impl Finite {
    fn new(k: &AbelianGroup) -> Option<Self> {
        let mut moduli = Vec::new();
        for (order, mult) in k.factors() {
            let (o, m) = (order.order()?, mult.finite()?);
            for _ in 0..m {
                moduli.push(o as u64);
            }
        }
        if k.has_symbolic() {
            return None;
        }
        let order = moduli.iter().product();
        Some(Finite { moduli, order })
    }

    /// Element number `idx` of `K^copies` as residues.
    fn element(&self, mut idx: u64, copies: usize) -> Vec<u64> {
        let mut out = Vec::with_capacity(copies * self.moduli.len());
        for _ in 0..copies {
            for &m in &self.moduli {
                out.push(idx % m);
                idx /= m;
            }
        }
        out
    }

    fn encode(&self, x: &[u64]) -> u64 {
        let mut idx = 0;
        for (i, v) in x.iter().enumerate().rev() {
            idx = idx * self.moduli[i % self.moduli.len()] + v;
        }
        idx
    }

    /// Index of `c · x` for the element with index `idx` of `K^copies`.
    fn scale_index(&self, mut idx: u64, copies: usize, c: u64) -> u64 {
        let (mut out, mut place) = (0, 1);
        for _ in 0..copies {
            for &m in &self.moduli {
                out += (idx % m) * c % m * place;
                place *= m;
                idx /= m;
            }
        }
        out
    }

    fn apply(&self, m: &IntMatrix, x: &[u64]) -> Vec<u64> {
        let r = self.moduli.len();
        let mut out = vec![0u64; m.rows() * r];
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                for (t, &md) in self.moduli.iter().enumerate() {
                    let c = m.get(i, j).rem_euclid(md as i128) as u128;
                    let v = (out[i * r + t] as u128 + c * x[j * r + t] as u128) % md as u128;
                    out[i * r + t] = v as u64;
                }
            }
        }
        out
    }
}

/// Exponent of `p` in `x`.
fn ilog_part(p: u64, mut x: u64) -> u32 {
    let mut e = 0;
    while x.is_multiple_of(p) {
        x /= p;
        e += 1;
    }
    e
}

fn ilog(base: u64, mut x: u64) -> Option<u32> {
    let mut e = 0;
    while x > 1 {
        if !x.is_multiple_of(base) {
            return None;
        }
        x /= base;
        e += 1;
    }
    Some(e)
}

/// Counts `#{factors of order ≥ p^m}` from the sizes `|A[p^m]|` of the `p^m`-torsion.
fn counts_from_torsion(sizes: &[u64], p: u64) -> Option<Vec<u64>> {
    let mut out = Vec::new();
    for w in sizes.windows(2) {
        out.push(ilog(p, w[1] / w[0])? as u64);
    }
    Some(out)
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Kernel and cokernel of `m ⊗ K` by enumerating elements agree with Smith normal
/// form, in order and in cyclic decomposition.
pub fn finite_group_map_check(m: &IntMatrix, k: &AbelianGroup) -> Result<bool, EngineError> {
    let fin = Finite::new(k).ok_or_else(|| {
        EngineError::Hypothesis(format!("{k} is not a finite group"))
    })?;
    let dim = m.rows().max(m.cols()) as u32;
    if fin.order.checked_pow(dim).is_none_or(|s| s > ENUMERATION_LIMIT) {
        return Err(EngineError::Hypothesis(format!(
            "{k} to the power {dim} is too large to enumerate"
        )));
    }
    let (ker_snf, coker_snf) = matrix_ker_coker(m, k)?;
    let domain = fin.order.pow(m.cols() as u32);
    let codomain = fin.order.pow(m.rows() as u32);

    let mut kernel = Vec::new();
    let mut image = vec![false; codomain as usize];
    for idx in 0..domain {
        let x = fin.element(idx, m.cols());
        let y = fin.apply(m, &x);
        if y.iter().all(|&v| v == 0) {
            kernel.push(idx);
        }
        image[fin.encode(&y) as usize] = true;
    }
    let im = image.iter().filter(|&&b| b).count() as u64;
    if kernel.len() as u64 != ker_snf.order().unwrap_or(0) as u64
        || codomain / im != coker_snf.order().unwrap_or(0) as u64
    {
        return Ok(false);
    }
    for p in prime_divisors(fin.order) {
        // p-exponent of the largest cyclic factor
        let exp = fin.moduli.iter().map(|&md| ilog_part(p, md)).max().unwrap_or(0);
        let mut ker_sizes = vec![1u64];
        let mut coker_sizes = vec![1u64];
        let mut pm = 1u64;
        for _ in 0..exp {
            pm *= p;
            ker_sizes.push(
                kernel
                    .iter()
                    .filter(|&&idx| fin.scale_index(idx, m.cols(), pm) == 0)
                    .count() as u64,
            );
            let hits = (0..codomain)
                .filter(|&idx| image[fin.scale_index(idx, m.rows(), pm) as usize])
                .count() as u64;
            coker_sizes.push(hits / im);
        }
        let (Some(kc), Some(cc)) = (
            counts_from_torsion(&ker_sizes, p),
            counts_from_torsion(&coker_sizes, p),
        ) else {
            return Ok(false);
        };
        for mm in 1..=exp {
            let want_k = ker_snf.count_at_least(p, mm);
            let want_c = coker_snf.count_at_least(p, mm);
            if want_k != ExtNat::Fin(kc[mm as usize - 1]) || want_c != ExtNat::Fin(cc[mm as usize - 1]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::default_class_catalog;
    use crate::ktheory::builtin;

    fn grp(s: &str) -> AbelianGroup {
        s.parse().unwrap()
    }

    #[test]
    fn map_check_examples() {
        let m = IntMatrix::column(&[2, 3]);
        assert!(finite_group_map_check(&m, &grp("Z/4 (+) Z/3")).unwrap());
        let (ker, coker) = matrix_ker_coker(&m, &AbelianGroup::cyclic(12)).unwrap();
        assert!(ker.is_zero());
        assert_eq!(coker, AbelianGroup::cyclic(12));
        let m = IntMatrix::from_rows(&[[2]]);
        assert!(finite_group_map_check(&m, &grp("Z/2 (+) Z/4")).unwrap());
        assert_eq!(matrix_ker_coker(&m, &grp("Z/2 (+) Z/4")).unwrap().0, grp("(Z/2)^2"));
        let m = IntMatrix::zeros(1, 1);
        assert!(finite_group_map_check(&m, &AbelianGroup::cyclic(6)).unwrap());
        assert!(finite_group_map_check(&IntMatrix::from_rows(&[[2, 4], [6, 0]]), &grp("Z/8 (+) Z/2")).unwrap());
        assert!(finite_group_map_check(&m, &grp("Z")).is_err());
    }

    #[test]
    fn truncations() {
        let p = ArtinParameters::new(3).unwrap();
        let cat = default_class_catalog(&p);
        let z = builtin("Z").unwrap();
        let t = truncated_g_matrices(&z, 0, &p, &cat, 2, &EngineConfig::default()).unwrap();
        assert_eq!((t.g21.rows(), t.g21.cols()), (2, 3));
        let p4 = ArtinParameters::new(4).unwrap();
        let t = truncated_g_matrices(&z, 0, &p4, &default_class_catalog(&p4), 1, &EngineConfig::default())
            .unwrap();
        assert_eq!(t.g22, IntMatrix::identity(1));
        let f2 = builtin("F2").unwrap();
        let t = truncated_g_matrices(&f2, 1, &p, &cat, 3, &EngineConfig::default()).unwrap();
        assert!(t.cyclic_types.is_empty());
    }

    #[test]
    fn scans_match() {
        for ring in ["Z", "F2", "Z[C2]"] {
            for n in [3, 4] {
                for q in [0, 1] {
                    let p = ArtinParameters::new(n).unwrap();
                    let r = stability_scan(
                        &builtin(ring).unwrap(),
                        q,
                        &p,
                        &default_class_catalog(&p),
                        1..=6,
                        &EngineConfig::default(),
                    )
                    .unwrap();
                    assert!(r.all_match(), "{}", r.to_text());
                }
            }
        }
    }

    #[test]
    fn even_g22_kernel_pattern() {
        let p = ArtinParameters::new(4).unwrap();
        let r = stability_scan(&builtin("Z").unwrap(), 1, &p, &default_class_catalog(&p), 1..=6, &Default::default())
            .unwrap();
        for (k, o, _) in &r.cells[0].per_k {
            assert_eq!(*o, GroupValue::from(AbelianGroup::cyclic_mult(2, (*k - 1) as u64)));
        }
    }

    #[test]
    fn scan_needs_center() {
        let p = ArtinParameters::new(3).unwrap();
        let r = stability_scan(&builtin("Z").unwrap(), 0, &p, &default_class_catalog(&p), 0..=2, &Default::default());
        assert!(matches!(r, Err(EngineError::CenterRequired)));
    }

    #[test]
    fn tree_discrepancy_is_reported() {
        // K_3(F_2) = Z/3 has 3-torsion, so T_1 is nonzero at q = 4 for n = 3
        let p = ArtinParameters::new(3).unwrap();
        let r = stability_scan(&builtin("F2").unwrap(), 4, &p, &default_class_catalog(&p), 1..=3, &Default::default())
            .unwrap();
        let tree = r.cells.iter().find(|c| c.cell == "tree center H_1").unwrap();
        assert!(!tree.verdict.is_match());
        assert!(r.to_records().contains("tree center H_1\t*\tmismatch"));
    }
}
