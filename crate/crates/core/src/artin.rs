//! Structure of the dihedral Artin group `A_n`.
//!
//! `A_n / Z(A_n)` is `C₂ * C_n` for odd `n` and `C_∞ * C_{n/2}` for even `n`. Every
//! commensurability class of infinite cyclic subgroups is either the class of the
//! center, whose commensurator is all of `A_n`, or a class whose commensurator is
//! `ℤ²` with the class as a direct factor. Only the image of a class in `H₁(A_n)`
//! enters the homology computations, so classes are described by a [`ClassCatalog`]
//! of abelianization patterns with multiplicities.
//!
//! # Catalog document format
//!
//! ```toml
//! [classes]
//! center = true
//! rows = [
//!   { label = "<a>", ab = [1, 0], mult = 1 },
//!   { label = "<b>", ab = [0, 1], mult = 1 },
//!   { label = "other", ab = [0, 0], mult = "w" },
//! ]
//! ```
//!
//! `ab` has one entry per generator of `H₁(A_n)` (two for even `n`, one for odd `n`).
//! `mult` is a positive integer or `"w"` for countably many classes.

use std::fmt;
use std::fmt::Write as _;

use serde::Deserialize;

use crate::abelian::{AbelianGroup, ExtNat};
use crate::document::{from_toml, quote};
use crate::error::{EngineError, ProfileError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Odd,
    Even,
}

/// `A_n / Z(A_n)` as a free product of two cyclic groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FreeProductShape {
    /// `C_p * C_q`.
    Finite(u64, u64),
    /// `C_∞ * C_m`.
    InfiniteFinite(u64),
}

impl fmt::Display for FreeProductShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreeProductShape::Finite(p, q) => write!(f, "C{p} * C{q}"),
            FreeProductShape::InfiniteFinite(m) => write!(f, "Cinf * C{m}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArtinParameters {
    n: u64,
    parity: Parity,
    center_generator_exponent: u64,
    quotient: FreeProductShape,
}

/// Note attached to every even-`n` report: the order of the finite free factor of
/// `A_n / Z(A_n)` is given inconsistently in the literature.
pub const EVEN_QUOTIENT_NOTE: &str = "finite factor of A_n/Z stored with order n/2; \
    it is also written C_n in one place. Only the orbit structure of the tree enters \
    the homology, so no output depends on it";

impl ArtinParameters {
    pub fn new(n: i64) -> Result<Self, EngineError> {
        if n < 2 {
            return Err(EngineError::InvalidN(n));
        }
        let n = n as u64;
        Ok(if n % 2 == 1 {
            ArtinParameters {
                n,
                parity: Parity::Odd,
                center_generator_exponent: n,
                quotient: FreeProductShape::Finite(2, n),
            }
        } else {
            ArtinParameters {
                n,
                parity: Parity::Even,
                center_generator_exponent: n / 2,
                quotient: FreeProductShape::InfiniteFinite(n / 2),
            }
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn is_odd(&self) -> bool {
        self.parity == Parity::Odd
    }

    /// `Z(A_n)` is generated by `(ab)^e` for this `e`.
    pub fn center_generator_exponent(&self) -> u64 {
        self.center_generator_exponent
    }

    pub fn quotient(&self) -> FreeProductShape {
        self.quotient
    }

    /// `A_2 = ℤ²` is abelian; the structural results assume `n > 2`.
    pub fn is_degenerate(&self) -> bool {
        self.n == 2
    }

    /// Rank of `H₁(A_n)`.
    pub fn h1_rank(&self) -> usize {
        match self.parity {
            Parity::Odd => 1,
            Parity::Even => 2,
        }
    }

    /// Image of `(ab)^e` in `H₁(A_n)`. For odd `n` both generators map to `1 ∈ ℤ`.
    pub fn center_ab_vector(&self) -> Vec<i64> {
        let e = self.center_generator_exponent as i64;
        match self.parity {
            Parity::Odd => vec![2 * e],
            Parity::Even => vec![e, e],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassKind {
    Center,
    NonCenter,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommensuratorShape {
    WholeGroup,
    Z2,
}

pub fn classify_commensurator(_params: &ArtinParameters, kind: ClassKind) -> CommensuratorShape {
    match kind {
        ClassKind::Center => CommensuratorShape::WholeGroup,
        ClassKind::NonCenter => CommensuratorShape::Z2,
    }
}

/// `H_i(A_n; ℤ)`. The presentation complex is a 2-dimensional classifying space.
pub fn ordinary_homology(params: &ArtinParameters, i: usize) -> AbelianGroup {
    match (params.parity, i) {
        (_, 0) => AbelianGroup::free(1u64),
        (Parity::Odd, 1) => AbelianGroup::free(1u64),
        (Parity::Even, 1) => AbelianGroup::free(2u64),
        (Parity::Even, 2) => AbelianGroup::free(1u64),
        _ => AbelianGroup::zero(),
    }
}

/// `H_i(ℤ²; ℤ)`.
pub fn ordinary_homology_z2(i: usize) -> AbelianGroup {
    match i {
        0 | 2 => AbelianGroup::free(1u64),
        1 => AbelianGroup::free(2u64),
        _ => AbelianGroup::zero(),
    }
}

/// Stabilizer of an orbit in `Comm[H] / H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stabilizer {
    Trivial,
    Finite(u64),
}

impl Stabilizer {
    /// Index of `H` in the preimage of the stabilizer.
    pub fn order(self) -> u64 {
        match self {
            Stabilizer::Trivial => 1,
            Stabilizer::Finite(m) => m,
        }
    }
}

/// One end of an edge: the edge orbit maps into `vertex` with `sign`, and the edge
/// group has index `index` in the vertex group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeEnd {
    pub vertex: usize,
    pub sign: i64,
    pub index: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeOrbit {
    pub stabilizer: Stabilizer,
    pub ends: [EdgeEnd; 2],
}

impl EdgeOrbit {
    /// Both ends attach to the same vertex orbit through the same inclusion, so the
    /// boundary vanishes on every coefficient, including the opaque ones.
    pub fn is_degenerate_loop(&self) -> bool {
        let [a, b] = self.ends;
        a.vertex == b.vertex && a.index == b.index && a.sign + b.sign == 0
    }
}

/// Quotient of a Bass–Serre tree for `Comm[H]/H` acting with finite stabilizers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeModel {
    pub name: &'static str,
    pub vertex_orbits: Vec<Stabilizer>,
    pub edge_orbits: Vec<EdgeOrbit>,
}

impl TreeModel {
    fn new(
        name: &'static str,
        vertex_orbits: Vec<Stabilizer>,
        edge_orbits: Vec<EdgeOrbit>,
    ) -> Self {
        for e in &edge_orbits {
            for end in e.ends {
                assert!(end.vertex < vertex_orbits.len(), "edge references missing vertex");
            }
        }
        TreeModel {
            name,
            vertex_orbits,
            edge_orbits,
        }
    }

    /// `#vertex orbits - #edge orbits`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_orbits.len() as i64 - self.edge_orbits.len() as i64
    }

    /// Boundary matrix (vertices × edges) where each end contributes `sign · weight(index)`.
    pub fn boundary_matrix(&self, weight: impl Fn(u64) -> i128) -> crate::abelian::IntMatrix {
        let mut m = crate::abelian::IntMatrix::zeros(self.vertex_orbits.len(), self.edge_orbits.len());
        for (j, e) in self.edge_orbits.iter().enumerate() {
            for end in e.ends {
                let v = m.get(end.vertex, j) + end.sign as i128 * weight(end.index);
                m.set(end.vertex, j, v);
            }
        }
        m
    }
}

pub fn tree_model(params: &ArtinParameters, kind: ClassKind) -> TreeModel {
    let loop_at = |index| EdgeOrbit {
        stabilizer: Stabilizer::Trivial,
        ends: [
            EdgeEnd { vertex: 0, sign: 1, index },
            EdgeEnd { vertex: 0, sign: -1, index },
        ],
    };
    match (kind, params.parity) {
        (ClassKind::NonCenter, _) => {
            TreeModel::new("line", vec![Stabilizer::Trivial], vec![loop_at(1)])
        }
        (ClassKind::Center, Parity::Even) => {
            let m = params.n / 2;
            TreeModel::new("even-center", vec![Stabilizer::Finite(m)], vec![loop_at(m)])
        }
        (ClassKind::Center, Parity::Odd) => TreeModel::new(
            "odd-center",
            vec![Stabilizer::Finite(2), Stabilizer::Finite(params.n)],
            vec![EdgeOrbit {
                stabilizer: Stabilizer::Trivial,
                ends: [
                    EdgeEnd { vertex: 0, sign: 1, index: 2 },
                    EdgeEnd { vertex: 1, sign: -1, index: params.n },
                ],
            }],
        ),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassEntry {
    pub label: String,
    pub ab_vector: Vec<i64>,
    pub multiplicity: ExtNat,
}

impl ClassEntry {
    /// `c_H`, the sum of the coordinates of the image in `H₁`.
    pub fn coefficient(&self) -> i64 {
        self.ab_vector.iter().sum()
    }
}

/// One class of a truncated catalog.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogClass {
    pub label: String,
    pub ab_vector: Vec<i64>,
    pub center: bool,
}

/// Commensurability classes of infinite cyclic subgroups of `A_n`, as patterns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCatalog {
    h1_rank: usize,
    center_ab: Vec<i64>,
    includes_center: bool,
    entries: Vec<ClassEntry>,
}

pub const CENTER_LABEL: &str = "Z(A_n)";

impl ClassCatalog {
    pub fn new(
        params: &ArtinParameters,
        includes_center: bool,
        entries: Vec<ClassEntry>,
    ) -> Result<Self, EngineError> {
        let rank = params.h1_rank();
        for e in &entries {
            if e.ab_vector.len() != rank {
                return Err(EngineError::Catalog(format!(
                    "class `{}` has ab vector of length {}, H_1 has rank {rank}",
                    e.label,
                    e.ab_vector.len()
                )));
            }
            if e.multiplicity.is_zero() {
                return Err(EngineError::Catalog(format!(
                    "class `{}` has multiplicity 0",
                    e.label
                )));
            }
        }
        Ok(ClassCatalog {
            h1_rank: rank,
            center_ab: params.center_ab_vector(),
            includes_center,
            entries,
        })
    }

    pub fn includes_center(&self) -> bool {
        self.includes_center
    }

    pub fn h1_rank(&self) -> usize {
        self.h1_rank
    }

    pub fn center_ab_vector(&self) -> &[i64] {
        &self.center_ab
    }

    /// Non-center entries.
    pub fn entries(&self) -> &[ClassEntry] {
        &self.entries
    }

    /// Total number of non-center classes.
    pub fn non_center_multiplicity(&self) -> ExtNat {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// The first `k` classes: the center (if present), then finite-multiplicity
    /// entries expanded in order, then the `ω` entries interleaved.
    pub fn truncate(&self, k: usize) -> Vec<CatalogClass> {
        let mut out = Vec::with_capacity(k);
        if self.includes_center && k > 0 {
            out.push(CatalogClass {
                label: CENTER_LABEL.to_string(),
                ab_vector: self.center_ab.clone(),
                center: true,
            });
        }
        let class = |e: &ClassEntry, i: u64| CatalogClass {
            label: format!("{}#{i}", e.label),
            ab_vector: e.ab_vector.clone(),
            center: false,
        };
        for e in &self.entries {
            if let ExtNat::Fin(m) = e.multiplicity {
                for i in 0..m {
                    if out.len() == k {
                        return out;
                    }
                    out.push(class(e, i));
                }
            }
        }
        let infinite: Vec<&ClassEntry> =
            self.entries.iter().filter(|e| e.multiplicity.is_omega()).collect();
        let mut i = 0;
        while out.len() < k && !infinite.is_empty() {
            for e in &infinite {
                if out.len() == k {
                    break;
                }
                out.push(class(e, i));
            }
            i += 1;
        }
        out
    }

    /// A finite catalog with one entry per class of a truncation.
    pub fn from_classes(params: &ArtinParameters, classes: &[CatalogClass]) -> Result<Self, EngineError> {
        let includes_center = classes.iter().any(|c| c.center);
        let entries = classes
            .iter()
            .filter(|c| !c.center)
            .map(|c| ClassEntry {
                label: c.label.clone(),
                ab_vector: c.ab_vector.clone(),
                multiplicity: ExtNat::ONE,
            })
            .collect();
        ClassCatalog::new(params, includes_center, entries)
    }

    /// Renders the catalog in the document format; [`load_catalog`] inverts it.
    pub fn to_document(&self) -> String {
        let mut out = String::from("[classes]\n");
        writeln!(out, "center = {}", self.includes_center).unwrap();
        out.push_str("rows = [\n");
        for e in &self.entries {
            let ab: Vec<String> = e.ab_vector.iter().map(|x| x.to_string()).collect();
            let mult = match e.multiplicity {
                ExtNat::Fin(m) => m.to_string(),
                ExtNat::Omega => "\"w\"".to_string(),
            };
            writeln!(
                out,
                "  {{ label = {}, ab = [{}], mult = {mult} }},",
                quote(&e.label),
                ab.join(", ")
            )
            .unwrap();
        }
        out.push_str("]\n");
        out
    }
}

/// Catalog reproducing the published computations: the center, the classes of
/// `⟨a⟩` (and `⟨b⟩` for even `n`), and countably many classes with zero image in
/// `H₁(A_n)`.
pub fn default_class_catalog(params: &ArtinParameters) -> ClassCatalog {
    let entry = |label: &str, ab: Vec<i64>, m: ExtNat| ClassEntry {
        label: label.to_string(),
        ab_vector: ab,
        multiplicity: m,
    };
    let entries = match params.parity {
        Parity::Odd => vec![
            entry("<a>", vec![1], ExtNat::ONE),
            entry("other", vec![0], ExtNat::Omega),
        ],
        Parity::Even => vec![
            entry("<a>", vec![1, 0], ExtNat::ONE),
            entry("<b>", vec![0, 1], ExtNat::ONE),
            entry("other", vec![0, 0], ExtNat::Omega),
        ],
    };
    ClassCatalog::new(params, true, entries).expect("default catalog is valid")
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawMult {
    Int(u64),
    Text(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRow {
    label: Option<String>,
    ab: Vec<i64>,
    mult: RawMult,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClasses {
    center: bool,
    #[serde(default)]
    rows: Vec<RawRow>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    classes: RawClasses,
}

/// Parses and validates a catalog document against `params`.
pub fn load_catalog(source: &str, params: &ArtinParameters) -> Result<ClassCatalog, EngineError> {
    let raw: RawCatalog = from_toml(source)?;
    let mut entries = Vec::with_capacity(raw.classes.rows.len());
    for (i, row) in raw.classes.rows.into_iter().enumerate() {
        let multiplicity = match row.mult {
            RawMult::Int(m) => ExtNat::Fin(m),
            RawMult::Text(s) => s.trim().parse().map_err(|_| {
                ProfileError::Invariant(format!("row {}: bad multiplicity `{s}`", i + 1))
            })?,
        };
        entries.push(ClassEntry {
            label: row.label.unwrap_or_else(|| format!("row{}", i + 1)),
            ab_vector: row.ab,
            multiplicity,
        });
    }
    ClassCatalog::new(params, raw.classes.center, entries)
}
